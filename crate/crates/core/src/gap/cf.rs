//! Characteristic functions of the count laws and the polar form of the
//! single-trial binomial factor.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `(1 - p + p e^{it})^n`.
pub fn cf_binomial(n: u64, p: f64, t: f64) -> Complex64 {
    let base = Complex64::new(1.0 - p + p * t.cos(), p * t.sin());
    let (r, theta) = base.to_polar();
    Complex64::from_polar(r.powf(n as f64), n as f64 * theta)
}

/// `exp(lambda (e^{it} - 1))`.
pub fn cf_poisson(lambda: f64, t: f64) -> Complex64 {
    Complex64::from_polar((lambda * (t.cos() - 1.0)).exp(), lambda * t.sin())
}

/// Modulus and argument of a characteristic-function factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfPolar {
    pub modulus: f64,
    pub argument: f64,
}

impl CfPolar {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.argument)
    }
}

/// `1 - p + p e^{it} = r(t) e^{iθ(t)}` with
/// `r(t) = sqrt((1 - p(1 - cos t))² + p² sin² t)` and
/// `θ(t) = arcsin(p sin t / r(t))`.
///
/// Restricted to `p ∈ [0, 1/4]`, `t ∈ [0, π]`, where the real part stays
/// positive and the arcsine branch is the right one.
pub fn cf_polar_binomial(p: f64, t: f64) -> Result<CfPolar> {
    if !(0.0..=0.25).contains(&p) {
        return Err(Error::Domain(format!("p = {p} not in [0, 1/4]")));
    }
    if !(0.0..=PI).contains(&t) {
        return Err(Error::Domain(format!("t = {t} not in [0, π]")));
    }
    let (s, c) = t.sin_cos();
    let re = 1.0 - p * (1.0 - c);
    let im = p * s;
    let modulus = (re * re + im * im).sqrt();
    Ok(CfPolar {
        modulus,
        argument: (im / modulus).asin(),
    })
}
