mod common;

use common::{coefficient, pfq_fixed_point};
use cqed_entangle::closed_form::{hypergeometric_parameters, shifted_2f2};
use cqed_entangle::special::{pfq, HypergeometricSpec};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

const ARGS: [f64; 6] = [0.5, 1.0, 5.0, 10.0, 30.0, 50.0];

#[test]
fn blocks_match_fixed_point_oracle() {
    for a in hypergeometric_parameters() {
        let b = a + 1;
        for x in ARGS {
            let oracle = pfq_fixed_point(&[a, a], &[b, b], x, 500);
            let got = shifted_2f2(a, x).unwrap();
            let rel = ((got - oracle) / oracle).abs();
            assert!(rel < 1e-10, "a={a} x={x}: {got} vs {oracle} (rel {rel:e})");
        }
    }
}

#[test]
#[allow(clippy::excessive_precision)]
fn oracle_reproduces_frozen_reference() {
    let h = |n, d| Rational64::new(n, d);
    let f = |a: Rational64, x: f64| pfq_fixed_point(&[a, a], &[a + 1, a + 1], x, 500);
    assert!((f(h(1, 2), 5.0) / 3.272_799_943_813_383_1 - 1.0).abs() < 1e-15);
    assert!((f(h(3, 2), 5.0) / 12.509_422_047_025_296 - 1.0).abs() < 1e-15);
    assert!((f(h(5, 2), 10.0) / 1_098.164_342_752_018_7 - 1.0).abs() < 1e-15);
    assert!((f(h(9, 2), 50.0) / 3.724_733_182_632_509_2e19 - 1.0).abs() < 1e-15);
}

#[test]
fn recurrence_ratio_is_exact() {
    let specs = [
        HypergeometricSpec::squared_shift(Rational64::new(3, 2), 1.0),
        HypergeometricSpec::new(
            vec![Rational64::new(1, 3), Rational64::new(-7, 2)],
            vec![Rational64::new(5, 4)],
            0.25,
        ),
    ];
    for spec in &specs {
        for k in 0..20u32 {
            let direct = coefficient(&spec.upper, &spec.lower, k + 1)
                / coefficient(&spec.upper, &spec.lower, k);
            let r = spec.coefficient_ratio(k);
            let recurrence = BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
            assert_eq!(direct, recurrence, "k = {k}");
        }
    }
}

#[test]
fn general_series_matches_oracle() {
    let upper = [Rational64::new(1, 3), Rational64::new(7, 5)];
    let lower = [
        Rational64::new(5, 4),
        Rational64::new(9, 2),
        Rational64::new(2, 1),
    ];
    for x in [0.5, 3.0, 20.0] {
        let got = pfq(&HypergeometricSpec::new(upper.to_vec(), lower.to_vec(), x)).unwrap();
        let oracle = pfq_fixed_point(&upper, &lower, x, 500);
        assert!(((got - oracle) / oracle).abs() < 1e-13, "x={x}");
    }
}
