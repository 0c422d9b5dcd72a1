//! Small dense complex linear algebra.
//!
//! Everything here is sized for two-qubit density matrices and modestly
//! truncated Fock-space operators. Matrices are stored row-major and the
//! Hermitian eigensolver is a cyclic Jacobi iteration, which is slow for
//! large inputs but produces orthonormal eigenvectors to machine precision.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`eig_hermitian`].
pub const MAX_EIG_DIM: usize = 256;

/// Eigenvalues with magnitude below this are treated as exact zeros.
pub const ZERO_CLAMP: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entry-wise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest |M_ij - conj(M_ji)|; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Symmetrize to (M + M†)/2, removing round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        let d = self.dagger();
        let mut out = self.clone();
        for (o, x) in out.data.iter_mut().zip(&d.data) {
            *o = (*o + x) * 0.5;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; entry `(i*rb + k, j*cb + l)` is `a[i,j] * b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors stored as columns, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows, m.cols),
        });
    }
    let n = m.rows;
    if n > MAX_EIG_DIM {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension <= {MAX_EIG_DIM}"),
            found: n.to_string(),
        });
    }
    let scale = m.data.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian { asymmetry: defect });
    }

    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the iteration order among ties
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new)] = v[(i, old)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

// One Jacobi rotation zeroing a[p][q]: a <- G† a G, v <- v G with
// G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows;

    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * gqp.conj();
        a[(q, k)] = apk * gpq.conj() + aqk * gqq.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

fn clamp_eigenvalues(eig: &mut EigenDecomposition) -> Result<()> {
    for lam in eig.eigenvalues.iter_mut() {
        if *lam < -ZERO_CLAMP {
            return Err(Error::NegativeEigenvalue { value: *lam });
        }
        if lam.abs() <= ZERO_CLAMP {
            *lam = 0.0;
        }
    }
    Ok(())
}

/// Eigendecomposition of a PSD matrix with near-zero eigenvalues set to 0.
pub fn eig_psd(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let mut eig = eig_hermitian(m)?;
    clamp_eigenvalues(&mut eig)?;
    Ok(eig)
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_psd(m)?;
    Ok(eig.reconstruct_with(f64::sqrt).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_vec(n, n, data).unwrap()
    }

    #[test]
    fn kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma_y_squared_is_signed_antidiagonal() {
        let yy = kron(&sigma_y(), &sigma_y());
        let expected = [-1.0, 1.0, 1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 {
                    c(expected[i], 0.0)
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(yy[(i, j)], want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn kron_entry_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 2);
        let b = random_matrix(&mut rng, 2);
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k[(2 * i + p, 2 * j + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn eig_diagonal_sorted_descending() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn eig_scalar_matrix() {
        let m = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        let e = eig_hermitian(&m).unwrap();
        for lam in e.eigenvalues {
            assert!((lam - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn eig_bell_projector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)];
        let e = eig_hermitian(&ComplexMatrix::outer(&phi, &phi)).unwrap();
        let want = [1.0, 0.0, 0.0, 0.0];
        for (l, w) in e.eigenvalues.iter().zip(want) {
            assert!((l - w).abs() < 1e-14, "{:?}", e.eigenvalues);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn eig_random_hermitian_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 4, 6, 8] {
            for _ in 0..50 {
                let b = random_matrix(&mut rng, n);
                let h = (&b + &b.dagger()).hermitian_part();
                let e = eig_hermitian(&h).unwrap();
                assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
                let tr: f64 = e.eigenvalues.iter().sum();
                assert!((tr - h.trace().re).abs() < 1e-10);
                assert!((&e.reconstruct() - &h).frobenius_norm() < 1e-10);
                let gram = &e.eigenvectors.dagger() * &e.eigenvectors;
                assert!((&gram - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sqrt_identity_and_diagonal() {
        let i4 = ComplexMatrix::identity(4);
        assert!((&sqrt_psd(&i4).unwrap() - &i4).frobenius_norm() < 1e-15);
        let d = ComplexMatrix::from_real_diagonal(&[4.0, 9.0, 0.0, 1.0]);
        let s = sqrt_psd(&d).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[2.0, 3.0, 0.0, 1.0]);
        assert!((&s - &want).frobenius_norm() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1e-6]);
        assert!(matches!(
            sqrt_psd(&d),
            Err(Error::NegativeEigenvalue { .. })
        ));
        // tiny negatives are round-off and get clamped
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1e-13]);
        assert!(sqrt_psd(&d).is_ok());
    }

    #[test]
    fn sqrt_random_psd_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let b = random_matrix(&mut rng, 4);
            let a = &b.dagger() * &b;
            let s = sqrt_psd(&a).unwrap();
            assert!((&(&s * &s) - &a).frobenius_norm() < 1e-9);
            assert!(s.is_hermitian(1e-12));
            assert!(eig_hermitian(&s).unwrap().eigenvalues[3] >= -1e-12);
        }
    }
}
