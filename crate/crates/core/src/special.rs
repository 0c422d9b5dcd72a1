//! Error functions, generalized hypergeometric series and Poisson weights.

use num_rational::Rational64;

use crate::error::{Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
/// 1/√π
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Past this |x| erf is 1 to within 2e-17.
const ERF_SATURATION: f64 = 6.0;
const ERFC_CF_FROM: f64 = 2.5;
/// Switch point from the power series to the asymptotic expansion of the
/// scaled erfi. At x = 6 the smallest asymptotic term is ~1e-16.
const ERFI_ASYMPTOTIC_FROM: f64 = 6.0;
pub const ERFI_MAX_ARGUMENT: f64 = 40.0;

pub const PFQ_MAX_TERMS: usize = 10_000;
const PFQ_STOP_RATIO: f64 = 1e-16;
const PFQ_STOP_RUN: usize = 3;

/// Error function, absolute error below 1e-13 on the whole real line.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    if x >= ERF_SATURATION {
        return 1.0;
    }
    if x >= ERFC_CF_FROM {
        return 1.0 - erfc(x);
    }
    // erf(x) = 2/√π e^{-x²} Σ_k (2x²)^k x / (2k+1)!!, all terms positive.
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    while term > 1e-17 * sum {
        term *= two_x2 / (2.0 * k + 3.0);
        sum += term;
        k += 1.0;
    }
    (FRAC_2_SQRT_PI * (-x * x).exp() * sum).min(1.0)
}

/// Complementary error function `1 − erf(x)`.
pub fn erfc(x: f64) -> f64 {
    if x < ERFC_CF_FROM {
        return 1.0 - erf(x);
    }
    // e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() * FRAC_1_SQRT_PI / f
}

// Σ_k x^{2k+1} / (k! (2k+1)); positive terms, so no cancellation.
fn erfi_series_sum(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // x^{2k+1}/k!
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        power *= x2 / k;
        let term = power / (2.0 * k + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `e^{-x²} · erfi(x)`, finite for every finite x.
///
/// Products like `e^{-n̄}·Erfi(√n̄)` stay representable this way long after
/// `erfi` alone has overflowed.
pub fn erfi_scaled(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erfi_scaled(-x);
    }
    if x < ERFI_ASYMPTOTIC_FROM {
        return FRAC_2_SQRT_PI * erfi_series_sum(x) * (-x * x).exp();
    }
    // 1/(√π x) Σ_k (2k-1)!! / (2x²)^k, truncated at the smallest term.
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) * inv;
        if next >= term || next <= 1e-17 * sum {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    FRAC_1_SQRT_PI / x * sum
}

/// Imaginary error function `erfi(x) = (2/√π) ∫₀ˣ e^{t²} dt`.
///
/// Returns [`Error::Overflow`] for |x| > 40, and also when the value itself
/// exceeds the double range (|x| above roughly 26.6).
pub fn erfi(x: f64) -> Result<f64> {
    if x.abs() > ERFI_MAX_ARGUMENT {
        return Err(Error::Overflow {
            what: "erfi",
            argument: x,
        });
    }
    let value = if x.abs() < ERFI_ASYMPTOTIC_FROM {
        FRAC_2_SQRT_PI * erfi_series_sum(x.abs()) * x.signum()
    } else {
        erfi_scaled(x) * (x * x).exp()
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow {
            what: "erfi",
            argument: x,
        })
    }
}

/// Parameters of a generalized hypergeometric series `pFq(a; b; x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub upper: Vec<Rational64>,
    pub lower: Vec<Rational64>,
    pub argument: f64,
}

impl HypergeometricSpec {
    pub fn new(upper: Vec<Rational64>, lower: Vec<Rational64>, argument: f64) -> Self {
        Self {
            upper,
            lower,
            argument,
        }
    }

    /// `2F2(a, a; a+1, a+1; x)`, the only family the closed-form populations use.
    pub fn squared_shift(a: Rational64, argument: f64) -> Self {
        let b = a + 1;
        Self::new(vec![a, a], vec![b, b], argument)
    }

    /// Exact ratio `t_{k+1}/t_k / x = Π(a_i + k) / (Π(b_j + k) · (k+1))`.
    pub fn coefficient_ratio(&self, k: u32) -> Rational64 {
        let k = Rational64::from_integer(k as i64);
        let num: Rational64 = self.upper.iter().map(|a| a + k).product();
        let den: Rational64 = self.lower.iter().map(|b| b + k).product();
        num / (den * (k + 1))
    }

    fn validate(&self) -> Result<()> {
        if let Some(b) = self
            .lower
            .iter()
            .find(|b| b.is_integer() && *b.numer() <= 0)
        {
            return Err(Error::InvalidParameters(format!(
                "lower parameter {b} is a non-positive integer"
            )));
        }
        if !(self.argument >= 0.0) || !self.argument.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "argument {} must be finite and non-negative",
                self.argument
            )));
        }
        let (p, q) = (self.upper.len(), self.lower.len());
        if p > q + 1 || (p == q + 1 && self.argument >= 1.0) {
            return Err(Error::InvalidParameters(format!(
                "{p}F{q} series diverges at argument {}",
                self.argument
            )));
        }
        Ok(())
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sum of the generalized hypergeometric series by forward term recurrence.
///
/// Stops once three consecutive terms fall below 1e-16 of the partial sum.
pub fn pfq(spec: &HypergeometricSpec) -> Result<f64> {
    spec.validate()?;
    let x = spec.argument;
    let upper: Vec<f64> = spec.upper.iter().copied().map(to_f64).collect();
    let lower: Vec<f64> = spec.lower.iter().copied().map(to_f64).collect();

    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut small_run = 0;
    for k in 0..PFQ_MAX_TERMS {
        let kf = k as f64;
        let num: f64 = upper.iter().map(|a| a + kf).product();
        let den: f64 = lower.iter().map(|b| b + kf).product();
        term *= num / den * x / (kf + 1.0);
        sum += term;
        if term.abs() < PFQ_STOP_RATIO * sum.abs() {
            small_run += 1;
            if small_run == PFQ_STOP_RUN {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NoConvergence {
        what: "hypergeometric series",
        iterations: PFQ_MAX_TERMS,
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Poisson probability `e^{-n̄} n̄ⁿ / n!`, evaluated in log space.
pub fn poisson_weight(n: usize, nbar: f64) -> f64 {
    if nbar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-nbar + n as f64 * nbar.ln() - ln_factorial(n)).exp()
}

/// Poisson probabilities for n = 0..=n_max.
pub fn poisson_weights(nbar: f64, n_max: usize) -> Vec<f64> {
    let ln_nbar = nbar.ln();
    let mut ln_fact = 0.0;
    (0..=n_max)
        .map(|n| {
            if n > 1 {
                ln_fact += (n as f64).ln();
            }
            if nbar == 0.0 {
                return if n == 0 { 1.0 } else { 0.0 };
            }
            (-nbar + n as f64 * ln_nbar - ln_fact).exp()
        })
        .collect()
}
