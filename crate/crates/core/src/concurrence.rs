//! Two-qubit entanglement measures.
//!
//! Basis order for every two-qubit object is |00⟩, |01⟩, |10⟩, |11⟩.
//!
//! * [`concurrence_pure`]: magic-basis form `|Σᵢ ⟨eᵢ|Ψ⟩²|`.
//! * [`concurrence_product_form`]: `2|√(W₁₁W₀₀) − √(W₀₁W₁₀)|` for states with
//!   real non-negative amplitudes `√W_ij`.
//! * [`concurrence_mixed_wootters`]: spin-flip construction with ordered
//!   eigenvalues of `R = √(√ρ ρ̃ √ρ)`.
//! * [`concurrence_mixed_averaged`]: the product form applied to ensemble
//!   averaged populations.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{eig_hermitian, eig_psd, kron, sqrt_psd, ComplexMatrix};

const NORM_TOL: f64 = 1e-10;
const DENSITY_TOL: f64 = 1e-10;
const POPULATION_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pure two-qubit state `a₀₀|00⟩ + a₀₁|01⟩ + a₁₀|10⟩ + a₁₁|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPure {
    amplitudes: [Complex64; 4],
}

impl TwoQubitPure {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                what: "two-qubit state",
                norm_sqr,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm; fails only for the zero vector.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized {
                what: "two-qubit state",
                norm_sqr,
            });
        }
        let s = 1.0 / norm_sqr.sqrt();
        Ok(Self {
            amplitudes: amplitudes.map(|a| a * s),
        })
    }

    pub fn from_real(a: [f64; 4]) -> Result<Self> {
        Self::new(a.map(|x| c(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> TwoQubitDensity {
        TwoQubitDensity {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// `(U₁ ⊗ U₂)|ψ⟩` for single-qubit unitaries.
    pub fn apply_local(&self, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Self {
        let v = kron(u1, u2).matvec(&self.amplitudes);
        Self {
            amplitudes: [v[0], v[1], v[2], v[3]],
        }
    }
}

/// Two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    matrix: ComplexMatrix,
}

impl TwoQubitDensity {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4x4".into(),
                found: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let defect = matrix.hermitian_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NonHermitian { asymmetry: defect });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::NotNormalized {
                what: "density matrix trace",
                norm_sqr: tr.re,
            });
        }
        let lowest = *eig_hermitian(&matrix)?.eigenvalues.last().unwrap();
        if lowest < -DENSITY_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: ComplexMatrix::identity(4).scale(c(0.25, 0.0)),
        }
    }

    /// Convex mixture `Σ pᵢ |ψᵢ⟩⟨ψᵢ|`; weights are renormalized.
    pub fn mixture(components: &[(f64, TwoQubitPure)]) -> Result<Self> {
        let total: f64 = components.iter().map(|(p, _)| p).sum();
        if components.iter().any(|(p, _)| *p < 0.0) || total <= 0.0 {
            return Err(Error::InvalidParameters(
                "mixture weights must be non-negative with positive sum".into(),
            ));
        }
        let mut m = ComplexMatrix::zeros(4, 4);
        for (p, psi) in components {
            m = &m + &psi.projector().matrix.scale(c(p / total, 0.0));
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `(U₁⊗U₂) ρ (U₁⊗U₂)†`
    pub fn conjugate_local(&self, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Self {
        let u = kron(u1, u2);
        Self {
            matrix: (&(&u * &self.matrix) * &u.dagger()).hermitian_part(),
        }
    }

    pub fn populations(&self) -> Populations {
        let d = |i: usize| self.matrix[(i, i)].re.max(0.0);
        Populations {
            w00: d(0),
            w01: d(1),
            w10: d(2),
            w11: d(3),
        }
    }
}

/// Level occupations of the spin subsystem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations {
    pub w00: f64,
    pub w01: f64,
    pub w10: f64,
    pub w11: f64,
}

impl Populations {
    pub fn new(w00: f64, w01: f64, w10: f64, w11: f64) -> Result<Self> {
        let p = Self { w00, w01, w10, w11 };
        let all = p.as_array();
        if all
            .iter()
            .any(|w| !w.is_finite() || *w < -POPULATION_TOL || *w > 1.0 + POPULATION_TOL)
        {
            return Err(Error::InvalidParameters(format!(
                "populations out of [0,1]: {all:?}"
            )));
        }
        let total = p.total();
        if (total - 1.0).abs() > POPULATION_TOL {
            return Err(Error::NotNormalized {
                what: "populations",
                norm_sqr: total,
            });
        }
        Ok(p)
    }

    /// Divides non-negative raw weights by their sum.
    pub fn normalize(w00: f64, w01: f64, w10: f64, w11: f64) -> Result<Self> {
        let total = w00 + w01 + w10 + w11;
        if [w00, w01, w10, w11].iter().any(|w| *w < 0.0) || !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "cannot normalize weights {:?}",
                [w00, w01, w10, w11]
            )));
        }
        Ok(Self {
            w00: w00 / total,
            w01: w01 / total,
            w10: w10 / total,
            w11: w11 / total,
        })
    }

    pub fn uniform() -> Self {
        Self {
            w00: 0.25,
            w01: 0.25,
            w10: 0.25,
            w11: 0.25,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.w00, self.w01, self.w10, self.w11]
    }

    pub fn total(&self) -> f64 {
        self.w00 + self.w01 + self.w10 + self.w11
    }

    /// `max_ij |w_ij − ¼|`
    pub fn max_deviation_from_uniform(&self) -> f64 {
        self.as_array()
            .iter()
            .map(|w| (w - 0.25).abs())
            .fold(0.0, f64::max)
    }

    /// The pure state `Σ √W_ij |ij⟩` with real non-negative amplitudes.
    pub fn sqrt_state(&self) -> Result<TwoQubitPure> {
        TwoQubitPure::normalized(self.as_array().map(|w| c(w.max(0.0).sqrt(), 0.0)))
    }
}

/// The magic basis e₁=|Φ⁺⟩, e₂=i|Φ⁻⟩, e₃=i|Ψ⁺⟩, e₄=|Ψ⁻⟩.
pub fn bell_basis() -> [TwoQubitPure; 4] {
    let h = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let mk = |a| TwoQubitPure { amplitudes: a };
    [
        mk([c(h, 0.0), z, z, c(h, 0.0)]),
        mk([c(0.0, h), z, z, c(0.0, -h)]),
        mk([z, c(0.0, h), c(0.0, h), z]),
        mk([z, c(h, 0.0), c(-h, 0.0), z]),
    ]
}

/// `2|a₀₀a₁₁ − a₀₁a₁₀|`
pub fn concurrence_pure_determinant(psi: &TwoQubitPure) -> f64 {
    let [a00, a01, a10, a11] = psi.amplitudes;
    2.0 * (a00 * a11 - a01 * a10).norm()
}

/// Pure-state concurrence `|Σᵢ ⟨eᵢ|Ψ⟩²|` over the magic basis.
pub fn concurrence_pure(psi: &TwoQubitPure) -> Result<f64> {
    let norm_sqr: f64 = psi.amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            what: "two-qubit state",
            norm_sqr,
        });
    }
    let sum: Complex64 = bell_basis()
        .iter()
        .map(|e| {
            let overlap = e.inner(psi);
            overlap * overlap
        })
        .sum();
    let value = sum.norm();
    debug_assert!((value - concurrence_pure_determinant(psi)).abs() < 1e-12);
    Ok(value)
}

/// `2|√(w₁₁w₀₀) − √(w₀₁w₁₀)|`.
///
/// Exact for pure states whose amplitudes are the real non-negative `√W_ij`;
/// for general complex amplitudes use [`concurrence_pure`].
pub fn concurrence_product_form(w: &Populations) -> f64 {
    2.0 * ((w.w11 * w.w00).sqrt() - (w.w01 * w.w10).sqrt()).abs()
}

/// Same formula as [`concurrence_product_form`], applied to populations that
/// have been averaged over the random-process ensemble after the
/// interference terms have decayed.
pub fn concurrence_mixed_averaged(w: &Populations) -> f64 {
    concurrence_product_form(w)
}

fn sigma_y_sigma_y() -> ComplexMatrix {
    let sy = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
        .expect("2x2");
    kron(&sy, &sy)
}

/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`
pub fn spin_flip(rho: &TwoQubitDensity) -> ComplexMatrix {
    let yy = sigma_y_sigma_y();
    &(&yy * &rho.matrix.conj()) * &yy
}

/// Eigenvalues of `R = √(√ρ ρ̃ √ρ)` in decreasing order.
pub fn wootters_eigenvalues(rho: &TwoQubitDensity) -> Result<[f64; 4]> {
    let sqrt_rho = sqrt_psd(&rho.matrix)?;
    let inner = (&(&sqrt_rho * &spin_flip(rho)) * &sqrt_rho).hermitian_part();
    // eigenvalues of R are square roots of those of the inner product
    let mu = eig_psd(&inner)?.eigenvalues;
    Ok([mu[0].sqrt(), mu[1].sqrt(), mu[2].sqrt(), mu[3].sqrt()])
}

/// Wootters concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}`.
pub fn concurrence_mixed_wootters(rho: &TwoQubitDensity) -> Result<f64> {
    let l = wootters_eigenvalues(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// `max{0, −λ₁, −λ₂, −λ₃, −λ₄}` exactly as printed in the source formula.
///
/// The λᵢ are eigenvalues of a PSD matrix, so this is identically zero; it
/// exists only so the discrepancy report can show the difference.
pub fn concurrence_mixed_printed(rho: &TwoQubitDensity) -> Result<f64> {
    let l = wootters_eigenvalues(rho)?;
    Ok(l.iter().map(|x| -x).fold(0.0, f64::max))
}
