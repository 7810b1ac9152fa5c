//! Small dense LU with partial pivoting, generic over real and complex
//! scalars. One factorisation serves determinant, resolvent solves and a
//! Hager-style 1-norm condition estimate.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub(crate) trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + PartialEq
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    /// x / |x|, or 1 for x = 0.
    fn phase(self) -> Self;
    fn from_re(x: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn phase(self) -> Self {
        if self >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
    fn from_re(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn phase(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// Row-major LU factors of an n x n matrix, P A = L U.
pub(crate) struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    piv: Vec<usize>,
    sign_flips: usize,
    /// true if a pivot was exactly zero (matrix singular).
    pub singular: bool,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(mut a: Vec<T>, n: usize) -> Self {
        debug_assert_eq!(a.len(), n * n);
        let mut piv = vec![0usize; n];
        let mut sign_flips = 0usize;
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].modulus();
            for i in k + 1..n {
                let v = a[i * n + k].modulus();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign_flips += 1;
            }
            let pivot = a[k * n + k];
            if pivot == T::zero() {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let akj = a[k * n + j];
                        a[i * n + j] = a[i * n + j] - f * akj;
                    }
                }
            }
        }
        Self {
            n,
            lu: a,
            piv,
            sign_flips,
            singular,
        }
    }

    pub fn det(&self) -> T {
        let mut d = if self.sign_flips % 2 == 0 {
            T::one()
        } else {
            -T::one()
        };
        for k in 0..self.n {
            d = d * self.lu[k * self.n + k];
        }
        d
    }

    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for k in 0..n {
            for i in k + 1..n {
                let f = self.lu[i * n + k];
                let bk = b[k];
                b[i] = b[i] - f * bk;
            }
        }
        for k in (0..n).rev() {
            b[k] = b[k] / self.lu[k * n + k];
            for i in 0..k {
                let f = self.lu[i * n + k];
                let bk = b[k];
                b[i] = b[i] - f * bk;
            }
        }
    }

    /// Solve A^T x = b (for the condition estimator).
    pub fn solve_transpose_in_place(&self, b: &mut [T]) {
        let n = self.n;
        // A^T = U^T L^T P; forward with U^T, back with L^T, then un-permute.
        for k in 0..n {
            b[k] = b[k] / self.lu[k * n + k];
            for i in k + 1..n {
                let f = self.lu[k * n + i];
                let bk = b[k];
                b[i] = b[i] - f * bk;
            }
        }
        for k in (0..n).rev() {
            for i in 0..k {
                let f = self.lu[k * n + i];
                let bk = b[k];
                b[i] = b[i] - f * bk;
            }
        }
        for k in (0..n).rev() {
            b.swap(k, self.piv[k]);
        }
    }

    /// tr(A^{-1} B) for row-major B, via one solve per column.
    pub fn trace_of_solve(&self, b: &[T]) -> T {
        let n = self.n;
        let mut col = vec![T::zero(); n];
        let mut tr = T::zero();
        for j in 0..n {
            for i in 0..n {
                col[i] = b[i * n + j];
            }
            self.solve_in_place(&mut col);
            tr = tr + col[j];
        }
        tr
    }

    /// Hager's 1-norm estimate of ||A^{-1}||_1; multiply by ||A||_1 for a
    /// condition estimate.
    pub fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.n;
        if n == 0 || self.singular {
            return f64::INFINITY;
        }
        let mut x = vec![T::from_re(1.0 / n as f64); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let mut y = x.clone();
            self.solve_in_place(&mut y);
            let norm: f64 = y.iter().map(|v| v.modulus()).sum();
            let mut xi: Vec<T> = y.iter().map(|v| v.phase()).collect();
            self.solve_transpose_in_place(&mut xi);
            let (jmax, zmax) = xi
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.modulus()))
                .fold((0, 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            let xnorm1: f64 = x.iter().map(|v| v.modulus()).sum();
            if norm <= est || zmax <= xnorm1 * 1e-12 {
                est = est.max(norm);
                break;
            }
            est = norm;
            x = vec![T::zero(); n];
            x[jmax] = T::one();
        }
        est
    }
}

pub(crate) fn norm1<T: Scalar>(a: &[T], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}
