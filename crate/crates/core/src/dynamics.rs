//! Random trajectories x(t), per-trajectory Schrödinger integration and
//! ensemble averaging.
//!
//! The classical coordinate is a zero-mean stationary Gaussian process with
//! `⟨x(t+τ)x(t)⟩ = e^{-α₀τ²}`, sampled on a fixed grid by factorizing its
//! covariance matrix. Each trajectory draws from its own ChaCha stream
//! (master seed, stream = trajectory index), and trajectories are reduced in
//! fixed-size chunks whose partial sums are combined in index order. Results
//! therefore do not depend on the number of worker threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::concurrence::{concurrence_product_form, Populations};
use crate::error::{Error, Result};
use crate::model::{
    reduced_populations, spin_density_matrix, ModelParams, PotentialStencil, StateVector,
};
use crate::special::erf;
use crate::tensor::ComplexMatrix;

/// Diagonal jitter added to the covariance before factorization.
pub const COVARIANCE_JITTER: f64 = 1e-10;
pub const MAX_GRID_POINTS: usize = 5000;
/// Largest `h·‖V‖` used by the integrator.
pub const STEP_FACTOR: f64 = 0.05;
/// Norm drift past which a run is rejected.
pub const MAX_NORM_DRIFT: f64 = 1e-6;
/// Trajectories per reduction chunk; fixed so the summation order is too.
const CHUNK: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessParams {
    /// Autocorrelation width α₀ (inverse time squared).
    pub alpha0: f64,
    pub dt: f64,
    pub t_max: f64,
    pub n_traj: usize,
    pub seed: u64,
}

impl Default for ProcessParams {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            dt: 0.1,
            t_max: 20.0,
            n_traj: 100,
            seed: 2024,
        }
    }
}

impl ProcessParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0) || !self.alpha0.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "alpha0 = {} must be positive",
                self.alpha0
            )));
        }
        if !(self.dt > 0.0) || !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "dt = {} and t_max = {} must be positive",
                self.dt, self.t_max
            )));
        }
        let limit = 0.1 / self.alpha0.sqrt();
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::InvalidParameters(format!(
                "dt = {} does not resolve the correlation time (need dt <= {limit})",
                self.dt
            )));
        }
        if self.n_traj == 0 {
            return Err(Error::InvalidParameters("n_traj must be at least 1".into()));
        }
        if self.grid_len() > MAX_GRID_POINTS {
            return Err(Error::InvalidParameters(format!(
                "time grid has {} points, limit is {MAX_GRID_POINTS}",
                self.grid_len()
            )));
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        (self.t_max / self.dt).round() as usize + 1
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.grid_len()).map(|i| i as f64 * self.dt).collect()
    }
}

/// Random stream for one trajectory, independent of scheduling.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One realization of x(t) on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Trajectory {
    pub fn constant(times: Vec<f64>, x: f64) -> Self {
        let values = vec![x; times.len()];
        Self { times, values }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Linear interpolation between grid points.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return self.values[0];
        }
        let dt = self.times[1] - self.times[0];
        let pos = ((t - self.times[0]) / dt).min((n - 1) as f64);
        let i = (pos.floor() as usize).min(n - 2);
        let frac = pos - i as f64;
        self.values[i] + (self.values[i + 1] - self.values[i]) * frac
    }

    /// `∫₀^{tᵢ} x dt'` by the trapezoidal rule at every grid point.
    pub fn cumulative_integral(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.len());
        out.push(0.0);
        for w in self.times.windows(2).zip(self.values.windows(2)) {
            let (t, x) = w;
            acc += 0.5 * (t[1] - t[0]) * (x[0] + x[1]);
            out.push(acc);
        }
        out
    }
}

/// Lower Cholesky factor of the process covariance on the grid.
#[derive(Debug, Clone)]
pub struct ProcessSampler {
    times: Vec<f64>,
    // packed lower triangle, row i starts at i(i+1)/2
    factor: Vec<f64>,
}

impl ProcessSampler {
    pub fn new(p: &ProcessParams) -> Result<Self> {
        p.validate()?;
        let times = p.grid();
        let n = times.len();
        let row = |i: usize| i * (i + 1) / 2;
        let mut l = vec![0.0; n * (n + 1) / 2];
        for i in 0..n {
            for j in 0..=i {
                let tau = times[i] - times[j];
                let mut s = (-p.alpha0 * tau * tau).exp();
                if i == j {
                    s += COVARIANCE_JITTER;
                }
                let (ri, rj) = (row(i), row(j));
                s -= l[ri..ri + j]
                    .iter()
                    .zip(&l[rj..rj + j])
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::FactorizationFailure { index: i, pivot: s });
                    }
                    l[ri + i] = s.sqrt();
                } else {
                    l[ri + j] = s / l[rj + j];
                }
            }
        }
        Ok(Self { times, factor: l })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Trajectory {
        let n = self.times.len();
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let values = (0..n)
            .map(|i| {
                let r = i * (i + 1) / 2;
                self.factor[r..=r + i]
                    .iter()
                    .zip(&z)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Trajectory {
            times: self.times.clone(),
            values,
        }
    }
}

/// Samples one trajectory; factorizes the covariance on every call, so
/// prefer [`ProcessSampler`] for many draws.
pub fn sample_trajectory<R: Rng + ?Sized>(p: &ProcessParams, rng: &mut R) -> Result<Trajectory> {
    Ok(ProcessSampler::new(p)?.sample(rng))
}

/// States of one trajectory at every grid time.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub max_norm_drift: f64,
}

/// Fixed-step RK4 integrator for `i dψ/dt = V(x(t)) ψ`.
#[derive(Debug, Clone)]
pub struct Integrator {
    stencil: PotentialStencil,
    params: ModelParams,
    norm_bound: f64,
}

impl Integrator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let stencil = PotentialStencil::new(params);
        let norm_bound = stencil.norm_bound(params.g0);
        Ok(Self {
            stencil,
            params: params.clone(),
            norm_bound,
        })
    }

    /// Substeps per grid interval so that `h·‖V‖ ≤ STEP_FACTOR`.
    pub fn substeps(&self, dt: f64) -> usize {
        ((dt * self.norm_bound / STEP_FACTOR).ceil() as usize).max(1)
    }

    /// Integrates along `traj`, calling `visit(i, ψ(tᵢ))` at each grid point.
    /// Returns the largest |‖ψ‖ − 1| seen.
    pub fn run<F>(&self, initial: &StateVector, traj: &Trajectory, mut visit: F) -> Result<f64>
    where
        F: FnMut(usize, &StateVector),
    {
        if initial.n_max() != self.params.n_max {
            return Err(Error::DimensionMismatch {
                expected: format!("n_max {}", self.params.n_max),
                found: format!("n_max {}", initial.n_max()),
            });
        }
        let dim = self.stencil.dim();
        let mut psi = initial.clone();
        let mut drift = (psi.norm() - 1.0).abs();
        visit(0, &psi);

        let zero = Complex64::new(0.0, 0.0);
        let mut k = [
            vec![zero; dim],
            vec![zero; dim],
            vec![zero; dim],
            vec![zero; dim],
        ];
        let mut tmp = vec![zero; dim];
        let minus_i = Complex64::new(0.0, -1.0);

        for i in 0..traj.len().saturating_sub(1) {
            let (t0, t1) = (traj.times[i], traj.times[i + 1]);
            let (x0, x1) = (traj.values[i], traj.values[i + 1]);
            let m = self.substeps(t1 - t0);
            let h = (t1 - t0) / m as f64;
            for s in 0..m {
                let x_at = |frac: f64| x0 + (x1 - x0) * ((s as f64 + frac) / m as f64);
                let c0 = self.params.coupling_at(x_at(0.0));
                let ch = self.params.coupling_at(x_at(0.5));
                let c1 = self.params.coupling_at(x_at(1.0));
                let y = psi.amplitudes_mut();

                self.stencil.apply(c0, y, &mut k[0]);
                k[0].iter_mut().for_each(|v| *v *= minus_i);
                for j in 0..dim {
                    tmp[j] = y[j] + k[0][j] * (0.5 * h);
                }
                self.stencil.apply(ch, &tmp, &mut k[1]);
                k[1].iter_mut().for_each(|v| *v *= minus_i);
                for j in 0..dim {
                    tmp[j] = y[j] + k[1][j] * (0.5 * h);
                }
                self.stencil.apply(ch, &tmp, &mut k[2]);
                k[2].iter_mut().for_each(|v| *v *= minus_i);
                for j in 0..dim {
                    tmp[j] = y[j] + k[2][j] * h;
                }
                self.stencil.apply(c1, &tmp, &mut k[3]);
                k[3].iter_mut().for_each(|v| *v *= minus_i);
                for j in 0..dim {
                    y[j] += (k[0][j] + (k[1][j] + k[2][j]) * 2.0 + k[3][j]) * (h / 6.0);
                }
            }
            drift = drift.max((psi.norm() - 1.0).abs());
            if drift > MAX_NORM_DRIFT {
                return Err(Error::StepTooLarge { drift });
            }
            visit(i + 1, &psi);
        }
        Ok(drift)
    }
}

/// Integrates one trajectory and keeps every grid-time state.
pub fn evolve(initial: &StateVector, traj: &Trajectory, params: &ModelParams) -> Result<Evolution> {
    let integrator = Integrator::new(params)?;
    let mut states = Vec::with_capacity(traj.len());
    let max_norm_drift = integrator.run(initial, traj, |_, s| states.push(s.clone()))?;
    Ok(Evolution {
        times: traj.times.clone(),
        states,
        max_norm_drift,
    })
}

/// `Q(t) = exp(i∫₀ᵗ ω dt')` with `ω = √(2(2n+1)) g₀ cos(k_f x)`, trapezoidal.
pub fn phase_functional(traj: &Trajectory, n: usize, params: &ModelParams) -> Vec<Complex64> {
    let scale = (2.0 * (2.0 * n as f64 + 1.0)).sqrt() * params.g0;
    let omega = Trajectory {
        times: traj.times.clone(),
        values: traj
            .values
            .iter()
            .map(|x| scale * (params.k_f * x).cos())
            .collect(),
    };
    omega
        .cumulative_integral()
        .into_iter()
        .map(|phase| Complex64::from_polar(1.0, phase))
        .collect()
}

/// Analytic decay factor `exp(−(t/2)√(π/α₀) Erf(t√α₀))`.
pub fn decoherence_envelope(t: f64, alpha0: f64) -> f64 {
    (-0.5 * t * (PI / alpha0).sqrt() * erf(t * alpha0.sqrt())).exp()
}

/// `∫₀ᵗ∫₀ᵗ e^{−α₀(u−v)²} du dv = √(π/α₀)·t·Erf(√α₀ t) + (e^{−α₀t²} − 1)/α₀`.
pub fn gaussian_double_integral(t: f64, alpha0: f64) -> f64 {
    (PI / alpha0).sqrt() * t * erf(alpha0.sqrt() * t) + ((-alpha0 * t * t).exp() - 1.0) / alpha0
}

/// Exact `|⟨e^{−i∫₀ᵗ x}⟩|` for the unit-variance process: `exp(−½·double integral)`.
pub fn gaussian_phase_decay(t: f64, alpha0: f64) -> f64 {
    (-0.5 * gaussian_double_integral(t, alpha0)).exp()
}

/// Time after which the spin state is treated as mixed, `√(π/α₀)`.
pub fn crossover_time(alpha0: f64) -> f64 {
    (PI / alpha0).sqrt()
}

/// The dimensionally inconsistent `√(α₀/π)` form, kept for reporting.
pub fn crossover_time_printed(alpha0: f64) -> f64 {
    (alpha0 / PI).sqrt()
}

/// Monte Carlo estimate of `⟨e^{−i∫₀ᵗ x dt'}⟩` on the process grid.
#[derive(Debug, Clone)]
pub struct PhaseAverage {
    pub times: Vec<f64>,
    pub mean: Vec<Complex64>,
    /// Standard error of the real part.
    pub stderr: Vec<f64>,
    pub n_traj: usize,
}

pub fn gaussian_phase_average(p: &ProcessParams) -> Result<PhaseAverage> {
    let sampler = ProcessSampler::new(p)?;
    let n = sampler.times().len();
    let chunks: Vec<(Vec<Complex64>, Vec<f64>)> = chunk_ranges(p.n_traj)
        .into_par_iter()
        .map(|range| {
            let mut sum = vec![Complex64::new(0.0, 0.0); n];
            let mut sum_sq = vec![0.0; n];
            for idx in range {
                let traj = sampler.sample(&mut trajectory_rng(p.seed, idx as u64));
                for (i, phase) in traj.cumulative_integral().into_iter().enumerate() {
                    let q = Complex64::from_polar(1.0, -phase);
                    sum[i] += q;
                    sum_sq[i] += q.re * q.re;
                }
            }
            (sum, sum_sq)
        })
        .collect();

    let mut sum = vec![Complex64::new(0.0, 0.0); n];
    let mut sum_sq = vec![0.0; n];
    for (s, q) in chunks {
        for i in 0..n {
            sum[i] += s[i];
            sum_sq[i] += q[i];
        }
    }
    let count = p.n_traj as f64;
    let mean: Vec<Complex64> = sum.iter().map(|s| s / count).collect();
    let stderr = (0..n)
        .map(|i| {
            let var = (sum_sq[i] / count - mean[i].re * mean[i].re).max(0.0);
            (var * count / (count - 1.0).max(1.0) / count).sqrt()
        })
        .collect();
    Ok(PhaseAverage {
        times: sampler.times().to_vec(),
        mean,
        stderr,
        n_traj: p.n_traj,
    })
}

fn chunk_ranges(total: usize) -> Vec<std::ops::Range<usize>> {
    (0..total.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(total))
        .collect()
}

/// Running sums over trajectories; merging is associative.
#[derive(Debug, Clone)]
pub struct EnsembleAccumulator {
    times: Vec<f64>,
    density_sum: Vec<ComplexMatrix>,
    concurrence_sum: Vec<f64>,
    runs: usize,
    max_norm_drift: f64,
}

impl EnsembleAccumulator {
    pub fn new(times: Vec<f64>) -> Self {
        let n = times.len();
        Self {
            times,
            density_sum: vec![ComplexMatrix::zeros(4, 4); n],
            concurrence_sum: vec![0.0; n],
            runs: 0,
            max_norm_drift: 0.0,
        }
    }

    fn record(&mut self, i: usize, state: &StateVector) {
        let rho = spin_density_matrix(state);
        self.density_sum[i] = &self.density_sum[i] + &rho;
        self.concurrence_sum[i] += concurrence_product_form(&reduced_populations(state));
    }

    pub fn add_run(&mut self, run: &Evolution) -> Result<()> {
        if run.times != self.times || run.states.len() != self.times.len() {
            return Err(Error::GridMismatch);
        }
        for (i, s) in run.states.iter().enumerate() {
            self.record(i, s);
        }
        self.runs += 1;
        self.max_norm_drift = self.max_norm_drift.max(run.max_norm_drift);
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.times != self.times {
            return Err(Error::GridMismatch);
        }
        for i in 0..self.times.len() {
            self.density_sum[i] = &self.density_sum[i] + &other.density_sum[i];
            self.concurrence_sum[i] += other.concurrence_sum[i];
        }
        self.runs += other.runs;
        self.max_norm_drift = self.max_norm_drift.max(other.max_norm_drift);
        Ok(())
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn finish(&self) -> Result<EnsembleAverage> {
        if self.runs == 0 {
            return Err(Error::InvalidParameters("empty ensemble".into()));
        }
        let inv = Complex64::new(1.0 / self.runs as f64, 0.0);
        let densities: Vec<ComplexMatrix> = self
            .density_sum
            .iter()
            .map(|m| m.scale(inv).hermitian_part())
            .collect();
        let populations = densities
            .iter()
            .map(|m| Populations {
                w00: m[(0, 0)].re,
                w01: m[(1, 1)].re,
                w10: m[(2, 2)].re,
                w11: m[(3, 3)].re,
            })
            .collect();
        Ok(EnsembleAverage {
            times: self.times.clone(),
            densities,
            populations,
            mean_pure_concurrence: self
                .concurrence_sum
                .iter()
                .map(|c| c / self.runs as f64)
                .collect(),
            runs: self.runs,
            max_norm_drift: self.max_norm_drift,
        })
    }
}

/// Trajectory-averaged spin quantities on the time grid.
#[derive(Debug, Clone)]
pub struct EnsembleAverage {
    pub times: Vec<f64>,
    /// Averaged spin density matrices (field traced out).
    pub densities: Vec<ComplexMatrix>,
    /// Diagonals of `densities`, i.e. `⟨W(t,|ij⟩)⟩`.
    pub populations: Vec<Populations>,
    /// `⟨2|√(W₁₁W₀₀) − √(W₀₁W₁₀)|⟩` over trajectories.
    pub mean_pure_concurrence: Vec<f64>,
    pub runs: usize,
    pub max_norm_drift: f64,
}

impl EnsembleAverage {
    /// Hilbert-Schmidt norm of the off-diagonal part at each time.
    pub fn offdiag_magnitude(&self) -> Vec<f64> {
        self.densities
            .iter()
            .map(|m| {
                let mut s = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        if i != j {
                            s += m[(i, j)].norm_sqr();
                        }
                    }
                }
                s.sqrt()
            })
            .collect()
    }

    /// Product-form concurrence of the averaged populations at each time.
    pub fn averaged_concurrence(&self) -> Vec<f64> {
        self.populations
            .iter()
            .map(concurrence_product_form)
            .collect()
    }
}

/// Averages already-computed runs; all must share one time grid.
pub fn ensemble_average(runs: &[Evolution]) -> Result<EnsembleAverage> {
    let first = runs
        .first()
        .ok_or(Error::InvalidParameters("empty ensemble".into()))?;
    let mut acc = EnsembleAccumulator::new(first.times.clone());
    for run in runs {
        acc.add_run(run)?;
    }
    acc.finish()
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`.
pub fn with_thread_pool<T, F>(threads: Option<usize>, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> Result<T> + Send,
{
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}

/// Samples `n_traj` trajectories, integrates each from `initial`, and
/// averages. `threads = None` uses the global rayon pool.
pub fn simulate_ensemble(
    model: &ModelParams,
    process: &ProcessParams,
    initial: &StateVector,
    threads: Option<usize>,
) -> Result<EnsembleAverage> {
    let sampler = ProcessSampler::new(process)?;
    let integrator = Integrator::new(model)?;
    let times = sampler.times().to_vec();

    let work = || -> Result<Vec<EnsembleAccumulator>> {
        chunk_ranges(process.n_traj)
            .into_par_iter()
            .map(|range| {
                let mut acc = EnsembleAccumulator::new(times.clone());
                for idx in range {
                    let traj = sampler.sample(&mut trajectory_rng(process.seed, idx as u64));
                    let drift = integrator.run(initial, &traj, |i, s| acc.record(i, s))?;
                    acc.runs += 1;
                    acc.max_norm_drift = acc.max_norm_drift.max(drift);
                }
                Ok(acc)
            })
            .collect()
    };
    let parts = with_thread_pool(threads, work)?;

    let mut total = EnsembleAccumulator::new(times);
    for part in &parts {
        total.merge(part)?;
    }
    total.finish()
}
