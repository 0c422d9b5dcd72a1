//! Closed-form ensemble-averaged spin populations as functions of the mean
//! photon number n̄, their normalization, and the resulting mixed-state
//! concurrence curve.
//!
//! Taken literally, the expressions have a sign error in one exponent and a
//! misplaced Erfi argument in two others. Both readings are evaluable through
//! [`Variant`]; every difference between them is listed in [`REPAIRS`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::concurrence::{
    bell_basis, concurrence_mixed_averaged, concurrence_mixed_printed, concurrence_mixed_wootters,
    Populations, TwoQubitDensity, TwoQubitPure,
};
use crate::dynamics::{crossover_time, crossover_time_printed};
use crate::error::{Error, Result};
use crate::special::{erfi, erfi_scaled, pfq, HypergeometricSpec};

/// Upper end of the n̄ range where the series blocks are evaluated.
pub const MAX_NBAR: f64 = 200.0;

/// Numeric coefficients of the W₀₀ bracket in order of appearance.
pub const W00_COEFFICIENTS: [i64; 9] = [3075, 32, 33075, 3675, 27, 147, 50, 1225, 1_058_400];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Variant {
    /// The literal expressions.
    Printed,
    /// With the exponent sign and Erfi argument corrected.
    #[default]
    Repaired,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Printed => "printed",
            Variant::Repaired => "repaired",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Variant::Printed),
            "repaired" => Ok(Variant::Repaired),
            other => Err(Error::InvalidParameters(format!(
                "unknown variant {other:?} (expected printed or repaired)"
            ))),
        }
    }
}

/// One literal form and its corrected counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Repair {
    pub quantity: &'static str,
    pub printed: &'static str,
    pub repaired: &'static str,
    pub effect: &'static str,
}

pub const REPAIRS: [Repair; 5] = [
    Repair {
        quantity: "W01 = W10, Erfi prefactor",
        printed: "exp(+n) sqrt(pi) (1-2n)^2 Erfi(sqrt n) / n^(3/2)",
        repaired: "exp(-n) sqrt(pi) (1-2n)^2 Erfi(sqrt n) / n^(3/2)",
        effect: "printed form grows like e^(2n)/n; repaired form tends to 4, giving W01 -> 1",
    },
    Repair {
        quantity: "W11, leading term",
        printed: "1/2 - exp(-n sqrt(pi) Erfi(n)) / (4n)",
        repaired: "1/2 - exp(-n) sqrt(pi) Erfi(sqrt n) / (4n)",
        effect: "printed form takes Erfi of n and puts it inside the exponential",
    },
    Repair {
        quantity: "W00, leading term",
        printed: "1/2 + exp(-n) sqrt(pi) Erfi(n) / (4n)",
        repaired: "1/2 + exp(-n) sqrt(pi) Erfi(sqrt n) / (4n)",
        effect: "printed Erfi(n) overflows double precision for n above about 26.6",
    },
    Repair {
        quantity: "mixed-state concurrence",
        printed: "max{0, -l1, -l2, -l3, -l4}",
        repaired: "max{0, l1 - l2 - l3 - l4}",
        effect: "l_i are non-negative, so the printed form is identically 0",
    },
    Repair {
        quantity: "pure-to-mixed crossover time",
        printed: "sqrt(alpha0 / pi)",
        repaired: "sqrt(pi / alpha0)",
        effect: "printed form has units of inverse time",
    },
];

/// `2F2(a, a; a+1, a+1; n̄)`
pub fn shifted_2f2(a: Rational64, nbar: f64) -> Result<f64> {
    pfq(&HypergeometricSpec::squared_shift(a, nbar))
}

/// Parameters `a` of every `2F2(a,a;a+1,a+1;n̄)` block: 1/2, 3/2, …, 9/2.
pub fn hypergeometric_parameters() -> [Rational64; 5] {
    [1, 3, 5, 7, 9].map(|k| Rational64::new(k, 2))
}

fn check_nbar(nbar: f64) -> Result<()> {
    if nbar > 0.0 && nbar <= MAX_NBAR {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "nbar = {nbar} outside (0, {MAX_NBAR}]"
        )))
    }
}

/// `e^{∓n̄}·Erfi(√n̄)`: minus for the repaired variant, plus as printed.
fn w01_erfi_prefactor(nbar: f64, variant: Variant) -> f64 {
    let scaled = erfi_scaled(nbar.sqrt());
    match variant {
        Variant::Repaired => scaled,
        Variant::Printed => (2.0 * nbar).exp() * scaled,
    }
}

fn w01_shared(nbar: f64, variant: Variant) -> f64 {
    let tail =
        w01_erfi_prefactor(nbar, variant) * PI.sqrt() * (1.0 - 2.0 * nbar).powi(2) / nbar.powf(1.5);
    0.5 + (12.0 - 2.0 / nbar + tail) / 32.0
}

/// ⟨W(|0,1⟩)⟩ per unit C². Requires n̄ > 0; the printed variant returns
/// +∞ once `e^{2n̄}` overflows.
pub fn w01_avg(nbar: f64, variant: Variant) -> f64 {
    w01_shared(nbar, variant)
}

/// ⟨W(|1,0⟩)⟩ per unit C², identical to [`w01_avg`] by construction.
pub fn w10_avg(nbar: f64, variant: Variant) -> f64 {
    w01_shared(nbar, variant)
}

/// ⟨W(|1,1⟩)⟩ per unit C².
pub fn w11_avg(nbar: f64, variant: Variant) -> Result<f64> {
    check_nbar(nbar)?;
    let head = match variant {
        Variant::Repaired => erfi_scaled(nbar.sqrt()) * PI.sqrt() / (4.0 * nbar),
        Variant::Printed => (-nbar * PI.sqrt() * erfi(nbar)?).exp() / (4.0 * nbar),
    };
    let f = |k: i64| shifted_2f2(Rational64::new(k, 2), nbar);
    let n2 = nbar * nbar;
    let series = (3.0 - 2.0 * nbar + n2) / 3.0 * f(3)?
        + (13.0 * nbar - 2.0 * n2) / 25.0 * f(5)?
        + 3.0 / 49.0 * n2 * f(7)?;
    Ok(0.5 - head + 0.5 * (-nbar).exp() * series)
}

/// ⟨W(|0,0⟩)⟩ per unit C².
pub fn w00_avg(nbar: f64, variant: Variant) -> Result<f64> {
    check_nbar(nbar)?;
    let head = match variant {
        Variant::Repaired => erfi_scaled(nbar.sqrt()) * PI.sqrt() / (4.0 * nbar),
        Variant::Printed => (-nbar).exp() * PI.sqrt() * erfi(nbar)? / (4.0 * nbar),
    };
    let [c1, c2, c3, c4, c5, c6, c7, c8, c9] = W00_COEFFICIENTS.map(|c| c as f64);
    let f = |k: i64| shifted_2f2(Rational64::new(k, 2), nbar);
    let (n, n2, sn) = (nbar, nbar * nbar, nbar.sqrt());

    let elementary = c1
        * (2.0 * sn * (-16.0 * n + (-n).exp() * (3.0 - 14.0 * n - 16.0 * n2))
            - 3.0 * PI.sqrt() * (1.0 - 2.0 * n).powi(2) * erfi(sn)?);
    let inner = c6 * (14.0 - 2.0 * n + n2) * f(5)? - c7 * (12.0 + n) * n * f(7)?;
    let series = c2
        * n.powf(1.5)
        * (c3 * n * f(1)? + c4 * (12.0 + 5.0 * n2) * f(3)? + c5 * n * inner + c8 * n2 * n * f(9)?);
    Ok(0.5 + head + (elementary + series) / (c9 * n.powf(1.5)))
}

/// Normalized closed-form populations at one n̄.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormResult {
    pub nbar: f64,
    /// C² fixed by requiring the four populations to sum to one.
    pub c_squared: f64,
    pub w: Populations,
    pub c_mixed: f64,
    pub variant: Variant,
}

fn checked(name: &'static str, value: f64, nbar: f64) -> Result<f64> {
    if !value.is_finite() {
        Err(Error::Overflow {
            what: name,
            argument: nbar,
        })
    } else if value <= 0.0 {
        Err(Error::NonPositiveWeight { name, value, nbar })
    } else {
        Ok(value)
    }
}

pub fn normalize(nbar: f64, variant: Variant) -> Result<ClosedFormResult> {
    check_nbar(nbar)?;
    let w00 = checked("w00", w00_avg(nbar, variant)?, nbar)?;
    let w01 = checked("w01", w01_avg(nbar, variant), nbar)?;
    let w10 = checked("w10", w10_avg(nbar, variant), nbar)?;
    let w11 = checked("w11", w11_avg(nbar, variant)?, nbar)?;
    let c_squared = 1.0 / (w00 + w01 + w10 + w11);
    if c_squared == 0.0 {
        return Err(Error::Overflow {
            what: "normalization",
            argument: nbar,
        });
    }
    let w = Populations {
        w00: w00 * c_squared,
        w01: w01 * c_squared,
        w10: w10 * c_squared,
        w11: w11 * c_squared,
    };
    Ok(ClosedFormResult {
        nbar,
        c_squared,
        c_mixed: concurrence_mixed_averaged(&w),
        w,
        variant,
    })
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameters("empty nbar grid".into()));
    }
    if grid.iter().any(|&n| !(n > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameters(
            "nbar grid must be positive and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Per-point outcomes; a failure at one n̄ does not stop the others.
pub fn sweep_points(
    grid: &[f64],
    variant: Variant,
) -> Result<Vec<(f64, Result<ClosedFormResult>)>> {
    check_grid(grid)?;
    Ok(grid.iter().map(|&n| (n, normalize(n, variant))).collect())
}

pub fn sweep(grid: &[f64], variant: Variant) -> Result<Vec<ClosedFormResult>> {
    sweep_points(grid, variant)?
        .into_iter()
        .map(|(_, r)| r)
        .collect()
}

/// `points` values spaced evenly in log n̄ from `from` to `to` inclusive.
pub fn log_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to > from) || points < 2 {
        return Err(Error::InvalidParameters(format!(
            "log grid needs 0 < from < to and at least 2 points (got {from}, {to}, {points})"
        )));
    }
    let (a, b) = (from.ln(), to.ln());
    let mut g: Vec<f64> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect();
    g[0] = from;
    g[points - 1] = to;
    Ok(g)
}

fn fmt_value(r: &Result<f64>) -> String {
    match r {
        Ok(v) => format!("{v:.6e}"),
        Err(e) => format!("error: {e}"),
    }
}

fn fmt_outcome(r: &Result<ClosedFormResult>) -> String {
    match r {
        Ok(c) => format!(
            "C = {:.6e}, max abs(w - 1/4) = {:.4}",
            c.c_mixed,
            c.w.max_deviation_from_uniform()
        ),
        Err(e) => format!("error: {e}"),
    }
}

/// Markdown report comparing the printed and repaired forms on `grid`.
pub fn discrepancy_report(grid: &[f64], alpha0: f64) -> Result<String> {
    check_grid(grid)?;
    let mut out = String::new();
    out.push_str("# Printed vs repaired closed forms\n\n");
    out.push_str("n denotes the mean photon number.\n\n");
    out.push_str("## Formula differences\n\n");
    out.push_str("| quantity | printed | repaired | effect |\n|---|---|---|---|\n");
    for r in &REPAIRS {
        out.push_str(&format!(
            "| {} | `{}` | `{}` | {} |\n",
            r.quantity, r.printed, r.repaired, r.effect
        ));
    }

    out.push_str("\n## Per-unit populations\n\n");
    out.push_str(
        "| n | variant | W00 | W01 = W10 | W11 | normalized |\n|---|---|---|---|---|---|\n",
    );
    for &n in grid {
        for v in [Variant::Printed, Variant::Repaired] {
            let w01 = w01_avg(n, v);
            let w01 = if w01.is_finite() {
                Ok(w01)
            } else {
                Err(Error::Overflow {
                    what: "w01",
                    argument: n,
                })
            };
            out.push_str(&format!(
                "| {n} | {v} | {} | {} | {} | {} |\n",
                fmt_value(&w00_avg(n, v)),
                fmt_value(&w01),
                fmt_value(&w11_avg(n, v)),
                fmt_outcome(&normalize(n, v)),
            ));
        }
    }

    out.push_str("\n## Growth of the W01 Erfi prefactor\n\n");
    out.push_str("| n | printed exp(+n) Erfi(sqrt n) | repaired exp(-n) Erfi(sqrt n) | ratio |\n|---|---|---|---|\n");
    for &n in grid {
        let p = w01_erfi_prefactor(n, Variant::Printed);
        let r = w01_erfi_prefactor(n, Variant::Repaired);
        out.push_str(&format!("| {n} | {p:.6e} | {r:.6e} | {:.6e} |\n", p / r));
    }

    out.push_str("\n## Mixed-state concurrence formula\n\n");
    out.push_str(
        "| state | printed max{0, -l_i} | repaired max{0, l1-l2-l3-l4} |\n|---|---|---|\n",
    );
    let bell = &bell_basis()[0];
    let werner = TwoQubitDensity::mixture(&[
        (0.8, *bell),
        (0.05, TwoQubitPure::from_real([1.0, 0.0, 0.0, 0.0])?),
        (0.05, TwoQubitPure::from_real([0.0, 1.0, 0.0, 0.0])?),
        (0.05, TwoQubitPure::from_real([0.0, 0.0, 1.0, 0.0])?),
        (0.05, TwoQubitPure::from_real([0.0, 0.0, 0.0, 1.0])?),
    ])?;
    for (name, rho) in [("Bell Phi+", bell.projector()), ("Werner p = 0.8", werner)] {
        out.push_str(&format!(
            "| {name} | {:.12} | {:.12} |\n",
            concurrence_mixed_printed(&rho)?,
            concurrence_mixed_wootters(&rho)?
        ));
    }

    out.push_str(&format!(
        "\n## Crossover time at alpha0 = {alpha0}\n\nprinted: {:.6}, repaired: {:.6}\n",
        crossover_time_printed(alpha0),
        crossover_time(alpha0)
    ));
    Ok(out)
}
