//! Dense complex linear algebra used by every other module.
//!
//! [`ComplexMatrix`] is a small row-major matrix of `Complex64`; the sizes
//! handled here stay in the tens to low hundreds, so everything is dense and
//! allocation-per-operation. Spectral routines (Hermitian eigensystem and
//! SVD) are delegated to `nalgebra`.
//!
//! Arithmetic operators (`*`, `+`, `-`) panic on shape mismatch, like the
//! usual dense-matrix crates. Operations whose failure is a property of the
//! input rather than a programming error return [`Result`].

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on `max |A - A^dagger|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Tolerance on `| ||psi|| - 1 |` for a vector to count as normalized.
pub const NORM_TOL: f64 = 1e-9;
/// Bound on the Frobenius reconstruction error of an eigensystem.
pub const EIGEN_TOL: f64 = 1e-8;
/// Schmidt coefficients at or below this count as zero.
pub const RANK_TOL: f64 = 1e-7;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `e^{i theta}`.
#[inline]
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty matrix {rows}x{cols}")));
        }
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r] } else { ZERO })
    }

    /// Matrix whose columns are the given kets.
    pub fn from_columns(columns: &[Ket]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Ket::dim);
        if columns.iter().any(|k| k.dim() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Self::new(rows, cols, (0..rows * cols).map(|i| columns[i % cols][i / cols]).collect())
    }

    /// `|a><b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Self {
        Self::from_fn(a.dim(), b.dim(), |r, c| a[r] * b[c].conj())
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

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Option<Complex64> {
        (r < self.rows && c < self.cols).then(|| self.data[r * self.cols + c])
    }

    pub fn column(&self, c: usize) -> Ket {
        Ket::from_vec((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let overflow = || Error::Dimension("Kronecker product dimension overflows".into());
        let rows = self.rows.checked_mul(other.rows).ok_or_else(overflow)?;
        let cols = self.cols.checked_mul(other.cols).ok_or_else(overflow)?;
        rows.checked_mul(cols).ok_or_else(overflow)?;
        Ok(Self::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        }))
    }

    /// Matrix-vector product.
    pub fn apply(&self, ket: &Ket) -> Ket {
        assert_eq!(self.cols, ket.dim(), "matrix-vector shape mismatch");
        Ket::from_vec(
            (0..self.rows)
                .map(|r| {
                    self.data[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(ket.amplitudes())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    /// `<psi| self |psi>`.
    pub fn expectation(&self, psi: &Ket) -> Complex64 {
        psi.inner(&self.apply(psi))
    }

    /// `self^n` for square matrices.
    pub fn pow(&self, n: usize) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        (0..n).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// Frobenius norm of `U^dagger U - I`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.dagger() * self).distance(&Self::identity(self.cols))
    }

    /// Eigen-decomposition of a Hermitian matrix.
    ///
    /// Eigenvalues come back sorted in descending order with eigenvectors in
    /// the matching columns.
    pub fn hermitian_eigensystem(&self) -> Result<HermitianEigen> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "eigensystem of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let residual = self.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let n = self.rows;
        let sym = DMatrix::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5);
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = Self::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(HermitianEigen { values, vectors })
    }

    /// Thin singular value decomposition `self = U diag(s) V^dagger` with
    /// singular values in descending order.
    pub fn svd(&self) -> Svd {
        let m = DMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)]);
        let svd = m.svd(true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^dagger");
        let n = svd.singular_values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        Svd {
            u: Self::from_fn(self.rows, n, |r, c| u[(r, order[c])]),
            singular_values: order.iter().map(|&i| svd.singular_values[i]).collect(),
            v_dagger: Self::from_fn(n, self.cols, |r, c| v_t[(order[r], c)]),
        }
    }

    /// Partial trace over the first factor of a `d_a * d_b` square matrix.
    pub fn partial_trace_first(&self, d_a: usize, d_b: usize) -> Result<Self> {
        self.check_bipartite(d_a, d_b)?;
        Ok(Self::from_fn(d_b, d_b, |r, c| {
            (0..d_a).map(|a| self[(a * d_b + r, a * d_b + c)]).sum()
        }))
    }

    /// Partial trace over the second factor of a `d_a * d_b` square matrix.
    pub fn partial_trace_second(&self, d_a: usize, d_b: usize) -> Result<Self> {
        self.check_bipartite(d_a, d_b)?;
        Ok(Self::from_fn(d_a, d_a, |r, c| {
            (0..d_b).map(|b| self[(r * d_b + b, c * d_b + b)]).sum()
        }))
    }

    fn check_bipartite(&self, d_a: usize, d_b: usize) -> Result<()> {
        if !self.is_square() || d_a.checked_mul(d_b) != Some(self.rows) {
            return Err(Error::Dimension(format!(
                "{}x{} matrix is not a {d_a}x{d_b} bipartite operator",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Orthonormalizes the columns by modified Gram-Schmidt (the Q factor of
    /// a thin QR decomposition). Fails if the columns are linearly dependent.
    pub fn orthonormalize_columns(&self) -> Result<Self> {
        let mut cols: Vec<Ket> = (0..self.cols).map(|c| self.column(c)).collect();
        for i in 0..cols.len() {
            for j in 0..i {
                let overlap = cols[j].inner(&cols[i]);
                let projected = cols[j].scaled(overlap);
                cols[i] = cols[i].sub(&projected);
            }
            let norm = cols[i].norm();
            if norm < 1e-12 {
                return Err(Error::Dimension("columns are linearly dependent".into()));
            }
            cols[i] = cols[i].scaled(Complex64::new(1.0 / norm, 0.0));
        }
        Self::from_columns(&cols)
    }

    /// Matrix with i.i.d. standard complex Gaussian entries.
    pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    /// Random `n x k` matrix with orthonormal columns (a point on the complex
    /// Stiefel manifold); `k = n` gives a random unitary.
    pub fn random_isometry<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        assert!(k <= n, "isometry needs k <= n");
        loop {
            if let Ok(q) = Self::random_gaussian(n, k, rng).orthonormalize_columns() {
                return q;
            }
        }
    }

    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::random_isometry(n, n, rng)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut data = vec![ZERO; self.rows * rhs.cols];
        for r in 0..self.rows {
            let out = &mut data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { rows: self.rows, cols: rhs.cols, data }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Output of [`ComplexMatrix::hermitian_eigensystem`].
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn vector(&self, i: usize) -> Ket {
        self.vectors.column(i)
    }

    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda: Vec<Complex64> = self.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        &(&self.vectors * &ComplexMatrix::diagonal(&lambda)) * &self.vectors.dagger()
    }
}

/// Output of [`ComplexMatrix::svd`].
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v_dagger: ComplexMatrix,
}

/// A column vector of amplitudes.
#[derive(Clone, PartialEq)]
pub struct Ket(Vec<Complex64>);

impl Ket {
    pub fn from_vec(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "empty ket");
        Ket(amps)
    }

    pub fn from_real(amps: &[f64]) -> Self {
        Self::from_vec(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_j` of length `d`.
    pub fn basis(d: usize, j: usize) -> Result<Self> {
        if j >= d {
            return Err(Error::IndexOutOfRange { index: j, bound: d });
        }
        let mut v = vec![ZERO; d];
        v[j] = ONE;
        Ok(Ket(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Ket) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::Normalization { norm: n });
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm });
        }
        Ok(())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Ket(self.0.iter().map(|&z| z * s).collect())
    }

    pub fn add(&self, other: &Ket) -> Self {
        assert_eq!(self.dim(), other.dim(), "ket length mismatch");
        Ket(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Ket) -> Self {
        assert_eq!(self.dim(), other.dim(), "ket length mismatch");
        Ket(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn conj(&self) -> Self {
        Ket(self.0.iter().map(Complex64::conj).collect())
    }

    /// `self (x) other`.
    pub fn kron(&self, other: &Ket) -> Self {
        Ket(self.0.iter().flat_map(|a| other.0.iter().map(move |b| a * b)).collect())
    }

    /// `|self><self|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(self, self)
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Ket) -> f64 {
        self.sub(other).norm()
    }
}

impl Index<usize> for Ket {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl fmt::Debug for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ket[")?;
        for z in &self.0 {
            write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
        }
        write!(f, " ]")
    }
}

/// Schmidt decomposition `psi = sum_i c_i |left_i> (x) |right_i>`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Nonnegative coefficients, descending.
    pub coefficients: Vec<f64>,
    pub left: Vec<Ket>,
    pub right: Vec<Ket>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above [`RANK_TOL`].
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c > RANK_TOL).count()
    }
}

/// Schmidt decomposition of a normalized bipartite pure state on
/// `C^{d_a} (x) C^{d_b}`, obtained from the SVD of its `d_a x d_b` reshaping.
pub fn schmidt_decompose(psi: &Ket, d_a: usize, d_b: usize) -> Result<SchmidtDecomposition> {
    if d_a == 0 || d_b == 0 || d_a.checked_mul(d_b) != Some(psi.dim()) {
        return Err(Error::Dimension(format!(
            "vector of length {} is not a {d_a}x{d_b} bipartite state",
            psi.dim()
        )));
    }
    psi.check_normalized()?;
    let reshaped = ComplexMatrix::new(d_a, d_b, psi.amplitudes().to_vec())?;
    let svd = reshaped.svd();
    // M = U S V^dagger, so psi = sum_i s_i u_i (x) conj(v_i) with rows of
    // V^dagger equal to conj(v_i)^T.
    let n = svd.singular_values.len();
    let left = (0..n).map(|i| svd.u.column(i)).collect();
    let right = (0..n)
        .map(|i| Ket::from_vec((0..d_b).map(|c| svd.v_dagger[(i, c)]).collect()))
        .collect();
    Ok(SchmidtDecomposition { coefficients: svd.singular_values, left, right })
}
