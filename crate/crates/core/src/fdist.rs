//! Central and noncentral F distributions in `f64`.
//!
//! The central CDF is a regularized incomplete beta function evaluated by
//! continued fraction. The noncentral CDF is the Poisson mixture
//!
//! ```text
//! P(F ≤ x) = Σ_j e^{-λ/2} (λ/2)^j / j! · I_z(ν₁/2 + j, ν₂/2),   z = ν₁x / (ν₁x + ν₂)
//! ```
//!
//! summed outward from the Poisson mode until the unvisited mass drops
//! below `1e-13`.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::exactlin::rat_to_f64;
use crate::hypothesis::TestResult;

const CF_EPS: f64 = 1e-14;
const CF_MAX_ITER: usize = 10_000;
const POISSON_TAIL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FParams {
    nu1: f64,
    nu2: f64,
    ncp: f64,
}

impl FParams {
    pub fn new(nu1: f64, nu2: f64, ncp: f64) -> Result<Self> {
        if !(nu1 > 0.0 && nu1.is_finite()) || !(nu2 > 0.0 && nu2.is_finite()) {
            return Err(Error::InvalidParams(format!("degrees of freedom ({nu1}, {nu2}) must be positive")));
        }
        if !(ncp >= 0.0 && ncp.is_finite()) {
            return Err(Error::InvalidParams(format!("noncentrality {ncp} must be nonnegative")));
        }
        Ok(FParams { nu1, nu2, ncp })
    }

    pub fn central(nu1: f64, nu2: f64) -> Result<Self> {
        Self::new(nu1, nu2, 0.0)
    }

    pub fn nu1(&self) -> f64 {
        self.nu1
    }

    pub fn nu2(&self) -> f64 {
        self.nu2
    }

    pub fn ncp(&self) -> f64 {
        self.ncp
    }
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Upper tail `1 - I_x(a, b)` without cancellation.
fn beta_reg_upper(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    beta_reg(b, a, 1.0 - x)
}

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidParams(format!("F value {x} must be nonnegative")));
    }
    Ok(())
}

/// Poisson-weighted sum of `term(j)` with weights `Pois(j; λ/2)`.
fn poisson_mixture(ncp: f64, term: impl Fn(f64) -> f64) -> f64 {
    let mu = ncp / 2.0;
    if mu == 0.0 {
        return term(0.0);
    }
    let mode = mu.floor();
    let log_w = |j: f64| -mu + j * mu.ln() - ln_gamma(j + 1.0);
    let w_mode = log_w(mode).exp();

    let mut total = 0.0;
    let mut mass = 0.0;
    // downward from the mode, to zero
    let mut w = w_mode;
    let mut j = mode;
    loop {
        total += w * term(j);
        mass += w;
        if j == 0.0 || w < f64::MIN_POSITIVE {
            break;
        }
        w *= j / mu;
        j -= 1.0;
    }
    // upward until the remaining mass is negligible
    let mut w = w_mode;
    let mut j = mode;
    for _ in 0..1_000_000 {
        if 1.0 - mass < POISSON_TAIL {
            break;
        }
        j += 1.0;
        w *= mu / j;
        if w == 0.0 {
            break;
        }
        total += w * term(j);
        mass += w;
    }
    total
}

/// `P(F ≤ x)`.
pub fn f_cdf(x: f64, p: &FParams) -> Result<f64> {
    check_x(x)?;
    if x.is_infinite() {
        return Ok(1.0);
    }
    let z = p.nu1 * x / (p.nu1 * x + p.nu2);
    let (a, b) = (p.nu1 / 2.0, p.nu2 / 2.0);
    let v = poisson_mixture(p.ncp, |j| beta_reg(a + j, b, z));
    Ok(v.clamp(0.0, 1.0))
}

/// `P(F > x)`.
pub fn f_sf(x: f64, p: &FParams) -> Result<f64> {
    check_x(x)?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    let z = p.nu1 * x / (p.nu1 * x + p.nu2);
    let (a, b) = (p.nu1 / 2.0, p.nu2 / 2.0);
    let v = poisson_mixture(p.ncp, |j| beta_reg_upper(a + j, b, z));
    Ok(v.clamp(0.0, 1.0))
}

/// Upper `alpha` quantile of the central F distribution: the `x` with
/// `P(F > x) = alpha`.
pub fn f_quantile(alpha: f64, nu1: f64, nu2: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParams(format!("alpha {alpha} must lie in (0, 1)")));
    }
    let p = FParams::central(nu1, nu2)?;
    let target = 1.0 - alpha;
    // work in z = ν₁x/(ν₁x + ν₂) ∈ (0, 1), where the CDF is I_z(a, b)
    let (a, b) = (nu1 / 2.0, nu2 / 2.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let upper = beta_reg_upper(a, b, mid);
        if upper > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let x = p.nu2 * z / (p.nu1 * (1.0 - z));
    debug_assert!((f_cdf(x, &p).unwrap_or(target) - target).abs() < 1e-9);
    Ok(x)
}

/// Central upper-tail p-value of a test result.
pub fn p_value(result: &TestResult) -> Result<f64> {
    let f = result.f_value.as_ref().ok_or_else(|| Error::UndefinedF("no F value".into()))?;
    let p = FParams::central(result.nu_num as f64, result.nu_den as f64)?;
    f_sf(rat_to_f64(f), &p)
}

/// Power of the size-`alpha` F test at noncentrality `ncp`.
pub fn power(alpha: f64, nu1: f64, nu2: f64, ncp: f64) -> Result<f64> {
    let crit = f_quantile(alpha, nu1, nu2)?;
    f_sf(crit, &FParams::new(nu1, nu2, ncp)?)
}
