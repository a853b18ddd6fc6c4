//! Dense complex linear algebra: matrices, unitaries, rank-one projectors,
//! Hermitian eigendecomposition, tensor products, Haar-random unitaries, and
//! spectral fractional powers.
//!
//! Everything is plain `f64`-precision dense algebra capped at
//! [`MAX_DIM`](crate::tolerances::MAX_DIM). Values are immutable after
//! construction; all operations are pure.

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tolerances::{MAX_DIM, TOL_PHASE, TOL_UNITARY};

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major data. Rejects dimension overflows and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(rows)?;
        check_dim(cols)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(data.len(), rows * cols));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim, dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(n, n)?;
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&entries)
    }

    /// Build from a function of (row, col).
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
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

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Standard matrix product; errors on inner-dimension mismatch.
    pub fn multiply(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Kronecker product; output dimensions multiply.
    pub fn tensor_product(&self, other: &ComplexMatrix) -> Result<Self> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        check_dim(rows)?;
        check_dim(cols)?;
        let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        data[(i * other.rows + k) * cols + (j * other.cols + l)] = a * other.get(k, l);
                    }
                }
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Residual of the unitarity condition, `||A†A - I||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        debug_assert!(self.is_square());
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    s -= Complex64::new(1.0, 0.0);
                }
                acc += s.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Residual of the Hermiticity condition, `||A - A†||_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub(crate) fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    pub(crate) fn from_na(m: &DMatrix<Complex64>) -> Result<Self> {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

/// Unit vector inner product `<a|b>` (conjugate-linear in the first slot).
pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Quadratic form `<v|M|v>`.
pub fn quadratic_form(m: &ComplexMatrix, v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(m.rows(), v.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            acc += v[i].conj() * m.get(i, j) * v[j];
        }
    }
    acc
}

/// Fix the global phase of a vector so that its first component of modulus
/// above [`TOL_PHASE`] is real and positive. Errors if all components are
/// below the threshold.
pub fn phase_fix(v: &mut [Complex64]) -> Result<()> {
    let pivot = v
        .iter()
        .find(|z| z.norm() > TOL_PHASE)
        .copied()
        .ok_or(Error::ZeroVector)?;
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    Ok(())
}

/// Square complex matrix with `U†U = I` within [`TOL_UNITARY`], checked at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.rows, matrix.cols));
        }
        let residual = matrix.unitarity_residual();
        if residual >= TOL_UNITARY {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        self.matrix.column(col)
    }

    /// Apply to a vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(v.len(), self.dim()));
        }
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                *o += self.matrix.get(i, j) * x;
            }
        }
        Ok(out)
    }
}

/// Rank-one projector `P = |v><v|`, stored through its canonical
/// (phase-fixed) unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneProjector {
    dim: usize,
    vector: Vec<Complex64>,
}

impl RankOneProjector {
    /// Normalize and phase-fix the given vector. Errors on zero vectors.
    pub fn from_vector(v: &[Complex64]) -> Result<Self> {
        check_dim(v.len())?;
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let norm = vector_norm(v);
        if norm <= TOL_PHASE {
            return Err(Error::ZeroVector);
        }
        let mut vector: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        phase_fix(&mut vector)?;
        Ok(Self {
            dim: vector.len(),
            vector,
        })
    }

    pub fn standard_basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        Self::from_vector(&v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    /// Matrix view `|v><v|`.
    pub fn matrix(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, n, |i, j| self.vector[i] * self.vector[j].conj())
            .expect("projector dimensions were validated at construction")
    }

    /// `trace(P Q) = |<v|w>|^2`, the Born overlap of two rank-one projectors.
    pub fn overlap(&self, other: &RankOneProjector) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(inner_product(&self.vector, &other.vector).norm_sqr())
    }

    /// Frobenius distance `||P - Q||_F`, computed on the matrix views so that
    /// distances far below sqrt(machine epsilon) remain resolvable.
    pub fn frobenius_distance(&self, other: &RankOneProjector) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.vector[i] * self.vector[j].conj()
                    - other.vector[i] * other.vector[j].conj();
                acc += d.norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    pub fn approx_eq(&self, other: &RankOneProjector, tol: f64) -> Result<bool> {
        Ok(self.frobenius_distance(other)? < tol)
    }
}

/// Hermitian matrix, `A = A†` within [`TOL_UNITARY`], checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable {
    matrix: ComplexMatrix,
}

impl HermitianObservable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.rows(), matrix.cols()));
        }
        let residual = matrix.hermiticity_residual();
        if residual >= TOL_UNITARY {
            return Err(Error::NotHermitian(residual));
        }
        Ok(Self { matrix })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(diag)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Compare two phase-fixed vectors lexicographically by (re, im) pairs.
fn lex_compare(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b) {
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix: `A = V diag(lambda) V†` with the
/// eigenvalues sorted descending, exact ties broken by lexicographic order of
/// the phase-fixed eigenvectors.
pub fn hermitian_eigendecomposition(a: &HermitianObservable) -> Result<(Vec<f64>, UnitaryMatrix)> {
    let n = a.dim();
    let se = a.matrix().to_na().symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..n).map(|i| se.eigenvectors[(i, k)]).collect();
            phase_fix(&mut col).expect("eigenvector columns are unit vectors");
            (se.eigenvalues[k], col)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        lb.partial_cmp(la)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| lex_compare(va, vb))
    });
    let eigenvalues: Vec<f64> = pairs.iter().map(|(l, _)| *l).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| pairs[j].1[i])?;
    Ok((eigenvalues, UnitaryMatrix::new(vectors)?))
}

/// Draw a Haar-distributed unitary from an existing generator: QR of a
/// complex standard-Gaussian matrix, with each column of Q rescaled by the
/// phase of the matching R diagonal entry so the effective R diagonal is
/// real positive.
pub fn haar_random_unitary_from(dim: usize, rng: &mut impl Rng) -> Result<UnitaryMatrix> {
    check_dim(dim)?;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..dim {
        let d = r[(i, i)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for k in 0..dim {
            q[(k, i)] *= phase;
        }
    }
    UnitaryMatrix::new(ComplexMatrix::from_na(&q)?)
}

/// Haar-distributed unitary, deterministic in `seed`.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    haar_random_unitary_from(dim, &mut rng)
}

/// Fractional power `U^t` of a unitary via spectral calculus, with the
/// eigenphases taken in (-pi, pi].
///
/// The eigenvectors are obtained by diagonalizing the Hermitian combination
/// `cos(phi) (U+U†)/2 + sin(phi) (U-U†)/(2i)`; because `U` is normal, its
/// eigenvectors coincide with those of the combination unless two distinct
/// eigenphases collide at the chosen `phi`, in which case the residual check
/// fails and a shifted `phi` is tried.
pub fn matrix_power_spectral(u: &UnitaryMatrix, t: f64) -> Result<UnitaryMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "exponent t = {t} outside [0, 1]"
        )));
    }
    let n = u.dim();
    let a = u.matrix();
    let adj = a.dagger();
    let sym = a.add(&adj)?.scale(Complex64::new(0.5, 0.0));
    let antisym = a.sub(&adj)?.scale(Complex64::new(0.0, -0.5));

    let mut phi = 0.5_f64;
    for _ in 0..8 {
        let h = sym
            .scale(Complex64::new(phi.cos(), 0.0))
            .add(&antisym.scale(Complex64::new(phi.sin(), 0.0)))?;
        let (_, v) = hermitian_eigendecomposition(&HermitianObservable::new(h)?)?;
        let d = v.matrix().dagger().multiply(a)?.multiply(v.matrix())?;
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(d.get(i, j).norm());
                }
            }
        }
        if off < 1e-8 {
            let powered = ComplexMatrix::from_diagonal(
                &(0..n)
                    .map(|i| {
                        let lam = d.get(i, i);
                        // Snap rounding dust off the imaginary part so that
                        // eigenvalues on the branch cut resolve to +pi.
                        let im = if lam.im.abs() < 1e-12 { 0.0 } else { lam.im };
                        let theta = im.atan2(lam.re);
                        Complex64::from_polar(1.0, t * theta)
                    })
                    .collect::<Vec<_>>(),
            )?;
            let result = v
                .matrix()
                .multiply(&powered)?
                .multiply(&v.matrix().dagger())?;
            return UnitaryMatrix::new(result);
        }
        phi += 0.618_033_988_749_895;
    }
    Err(Error::Certification(
        "could not isolate the eigenphases of the unitary".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiply_identity_is_noop() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)])
            .unwrap();
        let id = ComplexMatrix::identity(2).unwrap();
        assert_eq!(id.multiply(&m).unwrap(), m);
    }

    #[test]
    fn multiply_by_zero_annihilates() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)])
            .unwrap();
        let z = ComplexMatrix::zeros(2, 2).unwrap();
        assert_eq!(m.multiply(&z).unwrap(), z);
    }

    #[test]
    fn multiply_hand_checked_two_by_two() {
        // [[0,1],[1,0]] * [[1,0],[0,-1]] = [[0,-1],[1,0]]
        let a = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let b = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
            .unwrap();
        let expect =
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        assert_eq!(a.multiply(&b).unwrap(), expect);
    }

    #[test]
    fn multiply_dimension_mismatch_errors() {
        let a = ComplexMatrix::zeros(2, 3).unwrap();
        let b = ComplexMatrix::zeros(2, 2).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch(3, 2))));
    }

    #[test]
    fn dagger_fixed_case_and_involution() {
        let m = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let expect =
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)])
                .unwrap();
        assert_eq!(m.dagger(), expect);
        assert_eq!(m.dagger().dagger(), m);

        let sym = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)])
            .unwrap();
        assert_eq!(sym.dagger(), sym);
    }

    #[test]
    fn tensor_product_identities_and_diagonals() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(i2.tensor_product(&i2).unwrap(), ComplexMatrix::identity(4).unwrap());

        // Hand Kronecker: diag(1,2) x diag(3,4) = diag(3,4,6,8)
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let b = ComplexMatrix::from_real_diagonal(&[3.0, 4.0]).unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[3.0, 4.0, 6.0, 8.0]).unwrap();
        assert_eq!(a.tensor_product(&b).unwrap(), expect);
    }

    #[test]
    fn tensor_product_trace_is_multiplicative() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let a = haar_random_unitary_from(3, &mut rng).unwrap().into_matrix();
        let b = haar_random_unitary_from(4, &mut rng).unwrap().into_matrix();
        let lhs = a.tensor_product(&b).unwrap().trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn dimension_cap_enforced() {
        assert!(ComplexMatrix::zeros(65, 65).is_err());
        assert!(ComplexMatrix::zeros(0, 1).is_err());
        let a = ComplexMatrix::identity(16).unwrap();
        let b = ComplexMatrix::identity(8).unwrap();
        assert!(a.tensor_product(&b).is_err());
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFiniteEntry)
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]),
            Err(Error::NonFiniteEntry)
        ));
    }

    #[test]
    fn eigendecomposition_of_diagonal_sorts_descending() {
        let obs = HermitianObservable::from_real_diagonal(&[5.0, 2.0, -1.0]).unwrap();
        let (vals, vecs) = hermitian_eigendecomposition(&obs).unwrap();
        assert_eq!(vals, vec![5.0, 2.0, -1.0]);
        assert_eq!(vecs.matrix(), &ComplexMatrix::identity(3).unwrap());

        let shuffled = HermitianObservable::from_real_diagonal(&[-1.0, 5.0, 2.0]).unwrap();
        let (vals, _) = hermitian_eigendecomposition(&shuffled).unwrap();
        assert_eq!(vals, vec![5.0, 2.0, -1.0]);
    }

    #[test]
    fn eigendecomposition_pauli_x() {
        // Characteristic polynomial of [[0,1],[1,0]] is l^2 - 1: eigenvalues +-1
        // with eigenvectors (1,1)/sqrt(2) and (1,-1)/sqrt(2).
        let x = HermitianObservable::new(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
                .unwrap(),
        )
        .unwrap();
        let (vals, vecs) = hermitian_eigendecomposition(&x).unwrap();
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], -1.0, epsilon = 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        for (col, expect) in [(0, [s, s]), (1, [s, -s])] {
            let v = vecs.column(col);
            for (got, want) in v.iter().zip(expect) {
                assert_relative_eq!(got.re, want, epsilon = 1e-12);
                assert_relative_eq!(got.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn eigendecomposition_reconstructs_random_hermitian() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for &n in &[2usize, 5, 17, 64] {
            let g = ComplexMatrix::from_fn(n, n, |_, _| {
                c(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
            .unwrap();
            let h = g.add(&g.dagger()).unwrap().scale(c(0.5, 0.0));
            let obs = HermitianObservable::new(h.clone()).unwrap();
            let (vals, v) = hermitian_eigendecomposition(&obs).unwrap();
            let lam = ComplexMatrix::from_real_diagonal(&vals).unwrap();
            let rec = v
                .matrix()
                .multiply(&lam)
                .unwrap()
                .multiply(&v.matrix().dagger())
                .unwrap();
            let resid = rec.frobenius_distance(&h).unwrap();
            assert!(resid < 10.0 * TOL_UNITARY, "residual {resid} at n = {n}");
        }
    }

    #[test]
    fn eigendecomposition_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(HermitianObservable::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for &n in &[1usize, 2, 3, 8] {
            let u = haar_random_unitary(n, 99).unwrap();
            assert!(u.matrix().unitarity_residual() < TOL_UNITARY);
            let again = haar_random_unitary(n, 99).unwrap();
            assert_eq!(u.matrix().entries(), again.matrix().entries());
        }
        let other = haar_random_unitary(3, 100).unwrap();
        assert_ne!(
            haar_random_unitary(3, 99).unwrap().matrix().entries(),
            other.matrix().entries()
        );
    }

    #[test]
    fn haar_first_entry_marginal_matches_monte_carlo() {
        // For Haar at N=2, |U_00|^2 is uniform on [0,1]: mean 1/2.
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        let samples = 10_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let u = haar_random_unitary_from(2, &mut rng).unwrap();
            acc += u.matrix().get(0, 0).norm_sqr();
        }
        let mean = acc / samples as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean |U11|^2 = {mean}");
    }

    #[test]
    fn matrix_power_endpoints() {
        let u = haar_random_unitary(4, 7).unwrap();
        let p0 = matrix_power_spectral(&u, 0.0).unwrap();
        assert!(
            p0.matrix()
                .frobenius_distance(&ComplexMatrix::identity(4).unwrap())
                .unwrap()
                < TOL_UNITARY
        );
        let p1 = matrix_power_spectral(&u, 1.0).unwrap();
        assert!(p1.matrix().frobenius_distance(u.matrix()).unwrap() < TOL_UNITARY);
    }

    #[test]
    fn matrix_power_halfway_swap() {
        // Spectral oracle for the swap matrix: eigenphases 0 and pi, so the
        // square root is [[ (1+i)/2, (1-i)/2 ], [ (1-i)/2, (1+i)/2 ]].
        let swap = UnitaryMatrix::new(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
                .unwrap(),
        )
        .unwrap();
        let half = matrix_power_spectral(&swap, 0.5).unwrap();
        let expect = ComplexMatrix::new(
            2,
            2,
            vec![c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)],
        )
        .unwrap();
        assert!(half.matrix().frobenius_distance(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn matrix_power_unitary_along_grid() {
        let u = haar_random_unitary(5, 31).unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let p = matrix_power_spectral(&u, t).unwrap();
            assert!(p.matrix().unitarity_residual() < TOL_UNITARY);
        }
    }

    #[test]
    fn matrix_power_rejects_bad_exponent() {
        let u = UnitaryMatrix::identity(2).unwrap();
        assert!(matrix_power_spectral(&u, -0.1).is_err());
        assert!(matrix_power_spectral(&u, 1.1).is_err());
    }

    #[test]
    fn projector_invariants() {
        let p = RankOneProjector::from_vector(&[c(0.0, 2.0), c(0.0, -2.0)]).unwrap();
        // unit norm, phase fixed: first component real positive
        assert_relative_eq!(vector_norm(p.vector()), 1.0, epsilon = 1e-14);
        assert!(p.vector()[0].re > 0.0);
        assert_relative_eq!(p.vector()[0].im, 0.0, epsilon = 0.0);
        // idempotent and unit trace
        let m = p.matrix();
        let sq = m.multiply(&m).unwrap();
        assert!(sq.frobenius_distance(&m).unwrap() < TOL_UNITARY);
        assert!((m.trace() - c(1.0, 0.0)).norm() < TOL_UNITARY);
    }

    #[test]
    fn projector_rejects_zero_vector() {
        assert!(matches!(
            RankOneProjector::from_vector(&[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn frobenius_distance_resolves_tiny_projector_differences() {
        let p = RankOneProjector::from_vector(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let q = RankOneProjector::from_vector(&[c(1.0, 0.0), c(1e-11, 0.0)]).unwrap();
        let d = p.frobenius_distance(&q).unwrap();
        assert!(d > 1e-12 && d < 1e-9, "distance {d}");
        assert_eq!(p.frobenius_distance(&p).unwrap(), 0.0);
    }
}
