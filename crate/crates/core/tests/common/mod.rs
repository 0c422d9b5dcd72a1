#![allow(dead_code)]

use cqed_entangle::concurrence::{TwoQubitDensity, TwoQubitPure};
use cqed_entangle::tensor::ComplexMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_pure<R: Rng>(rng: &mut R) -> TwoQubitPure {
    let a = [(); 4].map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    TwoQubitPure::normalized(a).unwrap()
}

/// Haar-ish element of U(2) from a random unit quaternion and phase.
pub fn random_unitary<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let v = [(); 4].map(|_| rng.random_range(-1.0..1.0f64));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (c(v[0] / n, v[1] / n), c(v[2] / n, v[3] / n));
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::from_vec(
        2,
        2,
        vec![a * phase, -b.conj() * phase, b * phase, a.conj() * phase],
    )
    .unwrap()
}

pub fn random_density<R: Rng>(rng: &mut R, components: usize) -> TwoQubitDensity {
    let w: Vec<f64> = (0..components)
        .map(|_| rng.random_range(0.05..1.0))
        .collect();
    let total: f64 = w.iter().sum();
    let parts: Vec<(f64, TwoQubitPure)> = w.iter().map(|x| (x / total, random_pure(rng))).collect();
    TwoQubitDensity::mixture(&parts).unwrap()
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Rising factorial `(a)_k` as an exact rational.
pub fn pochhammer(a: Rational64, k: u32) -> BigRational {
    let a = big(a);
    (0..k).fold(BigRational::one(), |acc, j| {
        acc * (&a + BigRational::from_integer(j.into()))
    })
}

/// Exact series coefficient `Π(a_i)_k / (Π(b_j)_k · k!)`.
pub fn coefficient(upper: &[Rational64], lower: &[Rational64], k: u32) -> BigRational {
    let num = upper
        .iter()
        .fold(BigRational::one(), |acc, a| acc * pochhammer(*a, k));
    let den = lower
        .iter()
        .fold(BigRational::one(), |acc, b| acc * pochhammer(*b, k));
    let fact = (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j));
    num / den / BigRational::from_integer(fact)
}

/// `Σ_{k<terms} coefficient(k)·x^k` in fixed point with 120 decimal digits.
/// `x` must be exactly representable as a ratio of small integers.
pub fn pfq_fixed_point(upper: &[Rational64], lower: &[Rational64], x: f64, terms: u32) -> f64 {
    let x = BigRational::from_float(x).expect("finite argument");
    let digits = 120u32;
    let scale = BigInt::from(10u32).pow(digits);
    let mut term = scale.clone();
    let mut sum = BigInt::zero();
    for k in 0..terms {
        sum += &term;
        // ratio t_{k+1}/t_k as one integer fraction
        let kk = BigRational::from_integer(k.into());
        let mut ratio = x.clone() / BigRational::from_integer((k + 1).into());
        for a in upper {
            ratio *= big(*a) + &kk;
        }
        for b in lower {
            ratio /= big(*b) + &kk;
        }
        term = term * ratio.numer() / ratio.denom();
    }
    // shift down to ~17 significant digits before converting
    let excess = sum.to_string().len().saturating_sub(20) as u32;
    let head = &sum / BigInt::from(10u32).pow(excess);
    head.to_f64().unwrap() * 10f64.powi(excess as i32 - digits as i32)
}
