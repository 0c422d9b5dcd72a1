//! Two atoms coupled to one cavity mode with a position-dependent coupling.
//!
//! States are `|s₁, s₂, n⟩` with `sᵢ ∈ {0, 1}` (1 = excited) and photon
//! number `0 ≤ n ≤ n_max`, ordered lexicographically by `(s₁, s₂, n)`:
//! `index = (2·s₁ + s₂)·(n_max + 1) + n`. The spin part of the index
//! therefore runs over |00⟩, |01⟩, |10⟩, |11⟩ like the two-qubit types.
//!
//! The generator is the interaction-picture potential
//!
//! ```text
//! V = Ω(S₁⁺S₂⁻ + S₁⁻S₂⁺) + ω_f b†b − g₀cos(k_f x)[(S₁⁺ + S₂⁺)b + (S₁⁻ + S₂⁻)b†]
//! ```
//!
//! which is real symmetric in this basis. The Zeeman term is absorbed by the
//! interaction picture, so `omega0` is carried for completeness only.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::concurrence::{Populations, TwoQubitDensity};
use crate::error::{Error, Result};
use crate::special::poisson_weights;
use crate::tensor::ComplexMatrix;

const NORM_TOL: f64 = 1e-10;
const FIELD_TOL: f64 = 1e-9;

/// Physical constants of the cavity model, ħ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Zeeman frequency ω₀ (absorbed by the interaction picture).
    pub omega0: f64,
    /// Spin-spin exchange Ω.
    pub omega: f64,
    /// Field mode frequency ω_f.
    pub omega_f: f64,
    /// Coupling amplitude g₀.
    pub g0: f64,
    /// Field wavenumber k_f.
    pub k_f: f64,
    /// Mean photon number n̄ of the initial field.
    pub nbar: f64,
    /// Fock truncation.
    pub n_max: usize,
}

/// `ceil(n̄ + 10√n̄ + 10)`
pub fn default_truncation(nbar: f64) -> usize {
    (nbar + 10.0 * nbar.sqrt() + 10.0).ceil() as usize
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega0", self.omega0),
            ("omega", self.omega),
            ("omega_f", self.omega_f),
            ("g0", self.g0),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameters(format!(
                    "{name} = {v} must be finite and non-negative"
                )));
            }
        }
        if !self.k_f.is_finite() || !(self.nbar >= 0.0) || !self.nbar.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "k_f = {} and nbar = {} must be finite, nbar >= 0",
                self.k_f, self.nbar
            )));
        }
        let floor = self.nbar + 10.0 * self.nbar.sqrt();
        if (self.n_max as f64) < floor {
            return Err(Error::InvalidParameters(format!(
                "n_max = {} below truncation floor nbar + 10 sqrt(nbar) = {floor:.3}",
                self.n_max
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        basis_dim(self.n_max)
    }

    /// `−g₀ cos(k_f x)`, the coefficient of the photon-exchange terms.
    pub fn coupling_at(&self, x: f64) -> f64 {
        -self.g0 * (self.k_f * x).cos()
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            omega: 0.05,
            omega_f: 0.05,
            g0: 0.1,
            k_f: 1.0,
            nbar: 4.0,
            n_max: 44,
        }
    }
}

pub fn basis_dim(n_max: usize) -> usize {
    4 * (n_max + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    pub s1: u8,
    pub s2: u8,
    pub n: usize,
}

impl BasisIndex {
    pub fn new(s1: u8, s2: u8, n: usize) -> Self {
        debug_assert!(s1 < 2 && s2 < 2);
        Self { s1, s2, n }
    }

    /// Position of `|s₁ s₂⟩` in the |00⟩, |01⟩, |10⟩, |11⟩ order.
    pub fn spin(&self) -> usize {
        2 * self.s1 as usize + self.s2 as usize
    }

    pub fn to_linear(&self, n_max: usize) -> Option<usize> {
        (self.n <= n_max && self.s1 < 2 && self.s2 < 2).then(|| self.spin() * (n_max + 1) + self.n)
    }

    pub fn from_linear(i: usize, n_max: usize) -> Self {
        let spin = i / (n_max + 1);
        Self {
            s1: (spin / 2) as u8,
            s2: (spin % 2) as u8,
            n: i % (n_max + 1),
        }
    }

    /// Eigenvalue of `S₁ᶻ + S₂ᶻ + b†b` (spins ±½).
    pub fn excitation_number(&self) -> f64 {
        self.s1 as f64 + self.s2 as f64 - 1.0 + self.n as f64
    }
}

/// Sparse real-symmetric form of V split as `V(x) = V_static + c(x)·V_photon`
/// with `c(x) = −g₀cos(k_f x)`. Only the upper triangle is stored.
#[derive(Debug, Clone)]
pub struct PotentialStencil {
    dim: usize,
    diagonal: Vec<f64>,
    exchange: Vec<(usize, usize, f64)>,
    photon: Vec<(usize, usize, f64)>,
}

impl PotentialStencil {
    pub fn new(p: &ModelParams) -> Self {
        let n_max = p.n_max;
        let idx = |s1, s2, n| BasisIndex::new(s1, s2, n).to_linear(n_max).unwrap();
        let dim = basis_dim(n_max);
        let diagonal = (0..dim)
            .map(|i| p.omega_f * BasisIndex::from_linear(i, n_max).n as f64)
            .collect();

        let mut exchange = Vec::new();
        if p.omega != 0.0 {
            for n in 0..=n_max {
                exchange.push((idx(0, 1, n), idx(1, 0, n), p.omega));
            }
        }

        // ⟨s'=1, n-1| S⁺ b |s=0, n⟩ = √n for either atom
        let mut photon = Vec::new();
        for n in 1..=n_max {
            let amp = (n as f64).sqrt();
            for other in 0..2u8 {
                photon.push((idx(0, other, n), idx(1, other, n - 1), amp));
                photon.push((idx(other, 0, n), idx(other, 1, n - 1), amp));
            }
        }
        for e in photon.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0, e.2);
            }
        }
        photon.sort_by_key(|e| (e.0, e.1));
        Self {
            dim,
            diagonal,
            exchange,
            photon,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dense matrix of V for a given photon-coupling coefficient.
    pub fn dense(&self, coupling: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (i, d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = Complex64::new(*d, 0.0);
        }
        for &(i, j, v) in &self.exchange {
            m[(i, j)] += v;
            m[(j, i)] += v;
        }
        for &(i, j, v) in &self.photon {
            m[(i, j)] += v * coupling;
            m[(j, i)] += v * coupling;
        }
        m
    }

    /// `out = V ψ`
    pub fn apply(&self, coupling: f64, psi: &[Complex64], out: &mut [Complex64]) {
        for ((o, d), a) in out.iter_mut().zip(&self.diagonal).zip(psi) {
            *o = a * *d;
        }
        for &(i, j, v) in &self.exchange {
            out[i] += psi[j] * v;
            out[j] += psi[i] * v;
        }
        for &(i, j, v) in &self.photon {
            let w = v * coupling;
            out[i] += psi[j] * w;
            out[j] += psi[i] * w;
        }
    }

    /// Gershgorin bound on ‖V(x)‖ over all x (|cos| ≤ 1).
    pub fn norm_bound(&self, g0: f64) -> f64 {
        let mut rows: Vec<f64> = self.diagonal.iter().map(|d| d.abs()).collect();
        for &(i, j, v) in &self.exchange {
            rows[i] += v.abs();
            rows[j] += v.abs();
        }
        for &(i, j, v) in &self.photon {
            rows[i] += (v * g0).abs();
            rows[j] += (v * g0).abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

/// Dense matrix of V for a classical position `x`.
pub fn build_potential(p: &ModelParams, x: f64) -> ComplexMatrix {
    PotentialStencil::new(p).dense(p.coupling_at(x))
}

/// Allowed one-step transitions, built from the five coupling families:
///
/// ```text
/// |0,0,n+1⟩ ↔ |0,1,n⟩     |0,0,n+1⟩ ↔ |1,0,n⟩
/// |0,1,n⟩   ↔ |1,1,n−1⟩   |1,0,n⟩   ↔ |1,1,n−1⟩
/// |1,0,n⟩   ↔ |0,1,n⟩
/// ```
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    n_max: usize,
    edges: BTreeSet<(BasisIndex, BasisIndex)>,
}

impl TransitionGraph {
    pub fn contains(&self, a: BasisIndex, b: BasisIndex) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn neighbors(&self, a: BasisIndex) -> BTreeSet<BasisIndex> {
        self.edges
            .range((a, BasisIndex::new(0, 0, 0))..)
            .take_while(|(x, _)| *x == a)
            .map(|(_, b)| *b)
            .collect()
    }

    /// Edge set as ordered pairs of linear indices, both directions.
    pub fn linear_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .map(|(a, b)| {
                (
                    a.to_linear(self.n_max).unwrap(),
                    b.to_linear(self.n_max).unwrap(),
                )
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / 2
    }
}

pub fn transition_graph(n_max: usize) -> TransitionGraph {
    let mut edges = BTreeSet::new();
    let mut link = |a: BasisIndex, b: BasisIndex| {
        if a.n <= n_max && b.n <= n_max {
            edges.insert((a, b));
            edges.insert((b, a));
        }
    };
    let k = BasisIndex::new;
    for n in 0..=n_max {
        link(k(0, 0, n + 1), k(0, 1, n));
        link(k(0, 0, n + 1), k(1, 0, n));
        if n >= 1 {
            link(k(0, 1, n), k(1, 1, n - 1));
            link(k(1, 0, n), k(1, 1, n - 1));
        }
        link(k(1, 0, n), k(0, 1, n));
    }
    TransitionGraph { n_max, edges }
}

/// Initial photon-number distribution of the cavity field.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldState {
    /// Coherent-state populations with the given mean photon number.
    Poisson {
        nbar: f64,
    },
    Fock(usize),
    /// Explicit photon-number probabilities starting at n = 0.
    Custom(Vec<f64>),
}

impl FieldState {
    /// Real non-negative amplitudes `W_n = √P_n` over `0..=n_max`.
    pub fn amplitudes(&self, n_max: usize) -> Result<Vec<f64>> {
        let probs = match self {
            FieldState::Poisson { nbar } => poisson_weights(*nbar, n_max),
            FieldState::Fock(n) => {
                if *n > n_max {
                    return Err(Error::InvalidParameters(format!(
                        "Fock state {n} beyond truncation {n_max}"
                    )));
                }
                let mut p = vec![0.0; n_max + 1];
                p[*n] = 1.0;
                p
            }
            FieldState::Custom(p) => {
                if p.len() > n_max + 1 || p.iter().any(|x| !(*x >= 0.0)) {
                    return Err(Error::InvalidParameters(
                        "custom field weights must be non-negative and fit the truncation".into(),
                    ));
                }
                let mut v = p.clone();
                v.resize(n_max + 1, 0.0);
                v
            }
        };
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > FIELD_TOL {
            return Err(Error::NotNormalized {
                what: "field distribution",
                norm_sqr: total,
            });
        }
        Ok(probs.iter().map(|p| p.sqrt()).collect())
    }
}

/// Amplitudes over the `|s₁ s₂ n⟩` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_max: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(n_max: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis_dim(n_max) {
            return Err(Error::DimensionMismatch {
                expected: basis_dim(n_max).to_string(),
                found: amplitudes.len().to_string(),
            });
        }
        Ok(Self { n_max, amplitudes })
    }

    pub fn basis_state(n_max: usize, index: BasisIndex) -> Result<Self> {
        let i = index.to_linear(n_max).ok_or_else(|| {
            Error::InvalidParameters(format!("{index:?} outside truncation {n_max}"))
        })?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis_dim(n_max)];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(Self { n_max, amplitudes })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, index: BasisIndex) -> Complex64 {
        index
            .to_linear(self.n_max)
            .map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Probability carried by the top `levels` photon numbers.
    pub fn top_fock_weight(&self, levels: usize) -> f64 {
        let stride = self.n_max + 1;
        let lo = stride.saturating_sub(levels);
        (0..4)
            .flat_map(|s| (lo..stride).map(move |n| s * stride + n))
            .map(|i| self.amplitudes[i].norm_sqr())
            .sum()
    }
}

/// Product state `(Σ c_{s₁s₂}|s₁s₂⟩) ⊗ (Σ W_n|n⟩)`.
pub fn initial_state(
    spin: [Complex64; 4],
    field: &FieldState,
    n_max: usize,
) -> Result<StateVector> {
    let norm_sqr: f64 = spin.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            what: "spin amplitudes",
            norm_sqr,
        });
    }
    let w = field.amplitudes(n_max)?;
    let mut amplitudes = Vec::with_capacity(basis_dim(n_max));
    for c in spin {
        amplitudes.extend(w.iter().map(|wn| c * *wn));
    }
    let mut state = StateVector { n_max, amplitudes };
    let norm = state.norm();
    for a in state.amplitudes.iter_mut() {
        *a /= norm;
    }
    Ok(state)
}

/// Spin-subsystem density matrix, field traced out.
pub fn spin_density_matrix(s: &StateVector) -> ComplexMatrix {
    let stride = s.n_max + 1;
    let amp = &s.amplitudes;
    let mut rho = ComplexMatrix::zeros(4, 4);
    for a in 0..4 {
        for b in a..4 {
            let v: Complex64 = (0..stride)
                .map(|n| amp[a * stride + n] * amp[b * stride + n].conj())
                .sum();
            rho[(a, b)] = v;
            rho[(b, a)] = v.conj();
        }
    }
    rho
}

/// Validated spin density matrix.
pub fn reduced_density(s: &StateVector) -> Result<TwoQubitDensity> {
    TwoQubitDensity::new(spin_density_matrix(s))
}

/// `W(|ij⟩) = Σₙ |C_{i,j,n}|²`
pub fn reduced_populations(s: &StateVector) -> Populations {
    let stride = s.n_max + 1;
    let w = |spin: usize| -> f64 {
        s.amplitudes[spin * stride..(spin + 1) * stride]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    };
    Populations {
        w00: w(0),
        w01: w(1),
        w10: w(2),
        w11: w(3),
    }
}
