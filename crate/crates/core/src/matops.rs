//! Dense complex matrices sized for one- and two-qubit work.
//!
//! Basis ordering is fixed crate-wide: a single qubit is ordered `|1>, |0>`
//! and two qubits `|11>, |10>, |01>, |00>` (the Kronecker ordering of the
//! single-qubit basis). Under this ordering `sigma_minus = |0><1|` maps index
//! 0 to index 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity and trace tolerance for validated states.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Lowest admissible eigenvalue of a positive semidefinite state.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Symmetry slack accepted by the eigensolver.
pub const EIGEN_SYMMETRY_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Square matrix of complex scalars stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = re(1.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&x| re(x)).collect())
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_diagonal(&diag.iter().map(|&x| re(x)).collect::<Vec<_>>())
    }

    /// `|ket><bra|`.
    pub fn outer(ket: &[C64], bra: &[C64]) -> Self {
        assert_eq!(ket.len(), bra.len());
        let dim = ket.len();
        let mut m = Self::zeros(dim);
        for (i, k) in ket.iter().enumerate() {
            for (j, b) in bra.iter().enumerate() {
                m.entries[i * dim + j] = k * b.conj();
            }
        }
        m
    }

    /// `|i><j|` in the computational basis.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(i, j, re(1.0));
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// `self * middle * right^dagger`, the shape of every Kraus sandwich.
    pub fn sandwich(&self, middle: &Self, right: &Self) -> Self {
        self.matmul(middle).matmul(&right.dagger())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * s).collect(),
        }
    }

    /// `tr[a^dagger b]`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Hilbert-Schmidt (Frobenius) norm `sqrt(tr[a^dagger a])`.
    pub fn hs_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Column-stacked vectorization: `vec(A)[j * dim + i] = A(i, j)`.
    pub fn vectorize(&self) -> Vec<C64> {
        let n = self.dim;
        let mut v = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                v.push(self.get(i, j));
            }
        }
        v
    }

    /// Real eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:>10.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
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

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Kronecker product; `a` acts on the leftmost tensor factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ad, bd) = (a.dim, b.dim);
    let n = ad * bd;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..ad {
        for j in 0..ad {
            let aij = a.get(i, j);
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..bd {
                for l in 0..bd {
                    out.entries[(i * bd + k) * n + (j * bd + l)] = aij * b.get(k, l);
                }
            }
        }
    }
    out
}

pub fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.hs_norm()
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The complex Hermitian `A = X + iY` is embedded into the real symmetric
/// `[[X, -Y], [Y, X]]`, whose spectrum is that of `A` with every eigenvalue
/// doubled; the duplicates are dropped after sorting.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let deviation = a.hermiticity_defect();
    if deviation > EIGEN_SYMMETRY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim;
    let m = 2 * n;
    let mut s = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            // symmetrize to absorb sub-tolerance asymmetry
            let z = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[(i + n) * m + j] = z.im;
            s[i * m + (j + n)] = -z.im;
        }
    }
    let mut eig = jacobi_symmetric(&mut s, m);
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig.into_iter().step_by(2).collect())
}

/// In-place cyclic Jacobi on a dense real symmetric `m x m` matrix. Returns
/// the diagonal after convergence.
fn jacobi_symmetric(s: &mut [f64], m: usize) -> Vec<f64> {
    let total: f64 = s.iter().map(|x| x * x).sum();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..m {
            for q in (p + 1)..m {
                off += s[p * m + q] * s[p * m + q];
            }
        }
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = s[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..m {
                    let akp = s[k * m + p];
                    let akq = s[k * m + q];
                    s[k * m + p] = cs * akp - sn * akq;
                    s[k * m + q] = sn * akp + cs * akq;
                }
                for k in 0..m {
                    let apk = s[p * m + k];
                    let aqk = s[q * m + k];
                    s[p * m + k] = cs * apk - sn * aqk;
                    s[q * m + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..m).map(|i| s[i * m + i]).collect()
}

/// Single-qubit operators in the `|1>, |0>` ordering.
pub mod pauli {
    use super::{c, re, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_entries(2, vec![re(0.0), re(1.0), re(1.0), re(0.0)]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_entries(2, vec![re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0)]).unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    /// Lowering operator `|0><1|`.
    pub fn sigma_minus() -> ComplexMatrix {
        ComplexMatrix::unit(2, 1, 0)
    }

    /// Raising operator `|1><0|`.
    pub fn sigma_plus() -> ComplexMatrix {
        ComplexMatrix::unit(2, 0, 1)
    }

    /// `[I, X, Y, Z]`.
    pub fn basis() -> [ComplexMatrix; 4] {
        [identity(), sigma_x(), sigma_y(), sigma_z()]
    }
}

/// Validated quantum state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    purity: f64,
}

/// Acceptance thresholds for [`DensityMatrix`] construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateTolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub positivity: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            trace: HERMITIAN_TOL,
            positivity: POSITIVITY_TOL,
        }
    }
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, StateTolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix, tol: StateTolerances) -> Result<Self> {
        let deviation = matrix.hermiticity_defect();
        if deviation > tol.hermitian {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::NotUnitTrace { trace });
        }
        let min_eigenvalue = hermitian_eigenvalues(&matrix)?[0];
        if min_eigenvalue < -tol.positivity {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        let purity = matrix.hs_inner(&matrix).re;
        Ok(Self { matrix, purity })
    }

    /// Normalizes `psi` and returns `|psi><psi|`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::param("psi", 0.0, "state vector must be nonzero"));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// `(|00> + |11>)/sqrt(2)`.
    pub fn bell_phi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&[re(s), re(0.0), re(0.0), re(s)]).expect("Bell state is valid")
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
            .expect("maximally mixed state is valid")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Cached `tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        self.purity
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("validated state is Hermitian")
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    #[test]
    fn kron_of_paulis() {
        assert_eq!(kron(&identity(), &identity()), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&sigma_z(), &sigma_z()),
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
        assert_eq!(
            kron(&sigma_z(), &identity()),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn kron_index_layout() {
        let a = ComplexMatrix::from_real(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real(2, &[5.0, 6.0, 7.0, 8.0]).unwrap();
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k.get(i * 2 + p, j * 2 + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn hs_norm_cases() {
        assert_eq!(ComplexMatrix::zeros(4).hs_norm(), 0.0);
        assert_eq!(ComplexMatrix::identity(4).hs_norm(), 2.0);
        let bell = DensityMatrix::bell_phi_plus();
        // brute-force tr[rho^2] for a pure state
        let mut tr = 0.0;
        for i in 0..4 {
            for k in 0..4 {
                tr += (bell.matrix().get(i, k) * bell.matrix().get(k, i)).re;
            }
        }
        assert!((tr - 1.0).abs() < 1e-15);
        assert!((bell.matrix().hs_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matmul_cases() {
        assert_eq!(identity().matmul(&sigma_z()), sigma_z());
        assert_eq!(sigma_z().matmul(&sigma_z()), identity());
        assert_eq!(
            sigma_plus().matmul(&sigma_minus()),
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
        );
        assert_eq!(
            sigma_minus().matmul(&sigma_plus()),
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0])
        );
    }

    #[test]
    fn eigenvalues_of_known_matrices() {
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0, 0.0]);
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![0.0, 1.0, 2.0, 3.0]);

        let x = hermitian_eigenvalues(&sigma_x()).unwrap();
        assert!((x[0] + 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);

        let y = hermitian_eigenvalues(&sigma_y()).unwrap();
        assert!((y[0] + 1.0).abs() < 1e-14 && (y[1] - 1.0).abs() < 1e-14);

        // rank-1 projector: characteristic polynomial is l^3 (l - 1)
        let bell = DensityMatrix::bell_phi_plus();
        let e = bell.eigenvalues();
        for (got, want) in e.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14, "{e:?}");
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        assert!(matches!(
            hermitian_eigenvalues(&sigma_minus()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(sigma_minus()),
            Err(Error::NotHermitian { .. })
        ));
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bad_shape_rejected() {
        assert!(matches!(
            ComplexMatrix::from_real(2, &[1.0, 2.0, 3.0]),
            Err(Error::BadShape { .. })
        ));
    }
}
