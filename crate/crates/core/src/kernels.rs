//! Constructors for the correlation kernels of the circular ensembles and
//! their finite-size correction kernels, with removable singularities
//! evaluated by series near the diagonal.

use crate::error::{Error, Result};
use crate::operators::KernelFunction;
use std::f64::consts::PI;

/// sin(t)/t with a series branch near t = 0.
#[inline]
pub(crate) fn sinc(t: f64) -> f64 {
    if t.abs() < 0.05 {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)))
    } else {
        t.sin() / t
    }
}

/// The sine kernel K(x, y) = sin(pi(x-y)) / (pi(x-y)).
#[inline]
pub(crate) fn sine_kernel(x: f64, y: f64) -> f64 {
    sinc(PI * (x - y))
}

/// The finite-N CUE kernel K^N(x, y) = sin(pi d) / (N sin(pi d / N)), d = x - y.
///
/// The difference is reduced modulo the period so that cancellation near the
/// zeros of the denominator is handled by the series branch of sinc.
#[inline]
pub(crate) fn cue_kernel(n: u32, x: f64, y: f64) -> f64 {
    let nf = n as f64;
    let d = x - y;
    let m = (d / nf).round();
    let delta = d - m * nf;
    // sin(pi d)/(N sin(pi d/N)) = parity * sinc(pi delta)/sinc(pi delta/N)
    // with parity = (-1)^{m (N+1)}.
    let parity = if (m as i64) % 2 != 0 && (n + 1) % 2 != 0 {
        -1.0
    } else {
        1.0
    };
    parity * sinc(PI * delta) / sinc(PI * delta / nf)
}

/// The 1/N^2 correction kernel L(x, y) = (pi(x-y)/6) sin(pi(x-y)).
#[inline]
pub(crate) fn correction_kernel(x: f64, y: f64) -> f64 {
    let d = PI * (x - y);
    d / 6.0 * d.sin()
}

/// Interior-rescaled correction kernel L_RZ(x, y) = pi(x-y) sin(pi abar (x-y))/6.
#[inline]
pub(crate) fn correction_kernel_rz(alpha_bar: f64, x: f64, y: f64) -> f64 {
    let d = x - y;
    PI * d * (PI * alpha_bar * d).sin() / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Kernel family selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// Sine kernel (bulk-scaled CUE limit).
    Sine,
    /// Finite-N CUE kernel.
    CueN { n: u32 },
    /// Leading correction kernel L.
    CorrectionL,
    /// Interior-rescaled correction kernel with parameter alpha-bar
    /// (alpha_bar = 1 recovers L).
    CorrectionLRz { alpha_bar: f64 },
    /// Nearest-neighbour kernel K(x,y) - K(x,0) K(0,y).
    NnK,
    /// Nearest-neighbour correction L(x,y) - L(x,0)K(0,y) - K(x,0)L(0,y).
    NnL,
    /// K(x,y) +/- K(x,-y).
    PmK { sign: Sign },
    /// L(x,y) +/- L(x,-y).
    PmL { sign: Sign },
    /// K^N(x,y) +/- K^N(x,-y).
    CueNPm { n: u32, sign: Sign },
    /// Finite-N kernel conditioned on an eigenvalue at the origin:
    /// K^N(x,y) - K^N(x,0) K^N(0,y).
    ConditionedCueN { n: u32 },
}

/// Kernel family plus its interval of support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub interval: (f64, f64),
}

impl KernelSpec {
    pub fn new(family: KernelFamily, interval: (f64, f64)) -> Self {
        Self { family, interval }
    }
}

/// Build the kernel described by `spec`.
pub fn make_kernel(spec: &KernelSpec) -> Result<KernelFunction> {
    let iv = spec.interval;
    let k = match spec.family {
        KernelFamily::Sine => KernelFunction::new("sine", iv, sine_kernel),
        KernelFamily::CueN { n } => {
            if n < 1 {
                return Err(Error::invalid("cueN kernel requires N >= 1"));
            }
            KernelFunction::new(format!("cue{n}"), iv, move |x, y| cue_kernel(n, x, y))
        }
        KernelFamily::CorrectionL => KernelFunction::new("L", iv, correction_kernel),
        KernelFamily::CorrectionLRz { alpha_bar } => {
            if !alpha_bar.is_finite() {
                return Err(Error::invalid("L_RZ requires finite alpha_bar"));
            }
            KernelFunction::new(format!("L_RZ[{alpha_bar}]"), iv, move |x, y| {
                correction_kernel_rz(alpha_bar, x, y)
            })
        }
        KernelFamily::NnK => KernelFunction::new("K_nn", iv, |x, y| {
            sine_kernel(x, y) - sine_kernel(x, 0.0) * sine_kernel(0.0, y)
        }),
        KernelFamily::NnL => KernelFunction::new("L_nn", iv, |x, y| {
            correction_kernel(x, y)
                - correction_kernel(x, 0.0) * sine_kernel(0.0, y)
                - sine_kernel(x, 0.0) * correction_kernel(0.0, y)
        }),
        KernelFamily::PmK { sign } => {
            let f = sign.factor();
            let label = if sign == Sign::Plus { "K_plus" } else { "K_minus" };
            KernelFunction::new(label, iv, move |x, y| {
                sine_kernel(x, y) + f * sine_kernel(x, -y)
            })
        }
        KernelFamily::PmL { sign } => {
            let f = sign.factor();
            let label = if sign == Sign::Plus { "L_plus" } else { "L_minus" };
            KernelFunction::new(label, iv, move |x, y| {
                correction_kernel(x, y) + f * correction_kernel(x, -y)
            })
        }
        KernelFamily::CueNPm { n, sign } => {
            if n < 1 {
                return Err(Error::invalid("cueN_pm kernel requires N >= 1"));
            }
            let f = sign.factor();
            KernelFunction::new(format!("cue{n}_pm"), iv, move |x, y| {
                cue_kernel(n, x, y) + f * cue_kernel(n, x, -y)
            })
        }
        KernelFamily::ConditionedCueN { n } => {
            if n < 1 {
                return Err(Error::invalid("conditioned kernel requires N >= 1"));
            }
            KernelFunction::new(format!("cue{n}_cond"), iv, move |x, y| {
                cue_kernel(n, x, y) - cue_kernel(n, x, 0.0) * cue_kernel(n, 0.0, y)
            })
        }
    };
    Ok(k)
}

/// max over the points of |K^N - K - L/N^2|; probes the order-N^{-4}
/// remainder of the kernel expansion.
pub fn kernel_expansion_residual(n: u32, points: &[(f64, f64)]) -> f64 {
    let n2 = (n as f64) * (n as f64);
    points
        .iter()
        .map(|&(x, y)| {
            (cue_kernel(n, x, y) - sine_kernel(x, y) - correction_kernel(x, y) / n2).abs()
        })
        .fold(0.0, f64::max)
}
