//! Dense complex matrix kernel.
//!
//! Everything in this crate is at most 16×16 (a two-qubit operator lifted to a
//! superoperator), so matrices are plain row-major `Vec`s with value
//! semantics. The vectorization map stacks *columns*:
//!
//! ```text
//! V(X) = (x₁₁, x₂₁, …, xₙ₁, x₁₂, …, xₙₙ)ᵀ
//! ```
//!
//! With that convention `V(AXB) = (Bᵀ ⊗ A) V(X)`, which is the identity the
//! QFIM superoperator `ρᵀ ⊗ I + I ⊗ ρ` relies on.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{contract, Error, Result};

/// Absolute floor used by matrix comparisons.
pub const ATOL: f64 = 1e-12;
/// Relative tolerance used by matrix comparisons.
pub const RTOL: f64 = 1e-10;
/// Default relative eigenvalue cutoff of [`pinv_psd`].
pub const PINV_RTOL: f64 = 1e-12;

/// `|a - b| <= max(atol, rtol * max(|a|, |b|))`.
pub fn close(a: f64, b: f64, atol: f64, rtol: f64) -> bool {
    (a - b).abs() <= atol.max(rtol * a.abs().max(b.abs()))
}

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows[0].as_ref().len();
        Self::from_fn(n, m, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), m, "ragged rows");
            c(row[j])
        })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) })
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

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A - A†|`, or infinity for non-square matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian within `1e-12 * max(1, max|A|)`.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= ATOL * self.max_abs().max(1.0)
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn matvec(&self, v: &ColumnVector) -> ColumnVector {
        assert_eq!(self.cols, v.dim(), "matvec dimension mismatch");
        let data = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()
            })
            .collect();
        ColumnVector { data }
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise comparison under `max(atol, rtol * scale)`, where `scale`
    /// is the larger of the two max-abs norms.
    pub fn approx_eq(&self, other: &Self, atol: f64, rtol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        let scale = self.max_abs().max(other.max_abs());
        self.max_abs_diff(other) <= atol.max(rtol * scale)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub dimension mismatch");
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
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColumnVector {
    data: Vec<Complex64>,
}

impl ColumnVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self {
            data: values.iter().map(|&v| c(v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate-linear in `self`: `self† · other`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dot dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }
}

impl Index<usize> for ColumnVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

/// Kronecker product: entry `(i·b.rows + k, j·b.cols + l) = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(a.rows * br, a.cols * bc);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization.
pub fn vectorize(x: &ComplexMatrix) -> ColumnVector {
    let mut data = Vec::with_capacity(x.rows * x.cols);
    for j in 0..x.cols {
        for i in 0..x.rows {
            data.push(x[(i, j)]);
        }
    }
    ColumnVector { data }
}

/// Inverse of [`vectorize`] for square `n × n` matrices.
pub fn unvectorize(v: &ColumnVector, n: usize) -> Result<ComplexMatrix> {
    if n == 0 || v.dim() != n * n {
        return Err(Error::InvalidShape(format!(
            "vector of dimension {} is not the vectorization of a {n}x{n} matrix",
            v.dim()
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| v[j * n + i]))
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> ColumnVector {
        let n = self.vectors.rows();
        ColumnVector::new((0..n).map(|i| self.vectors[(i, k)]).collect())
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// The matrix is first split into the connected components of its nonzero
/// pattern; each component is diagonalized on its own. This is exact (the
/// matrix is block diagonal up to a permutation) and keeps the sparse
/// superoperators of X-shaped states cheap without special-casing them.
pub fn eigh(h: &ComplexMatrix) -> Result<Eigh> {
    if !h.is_square() {
        return Err(Error::InvalidShape(format!(
            "eigh needs a square matrix, got {}x{}",
            h.rows, h.cols
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > ATOL * h.max_abs().max(1.0) {
        return Err(contract(format!("eigh input is not Hermitian (defect {defect:.3e})")));
    }
    let n = h.rows;
    let h = h.hermitian_part();

    let mut pairs: Vec<(f64, usize, Vec<Complex64>)> = Vec::with_capacity(n);
    for comp in components(&h) {
        if comp.len() == 1 {
            let i = comp[0];
            let mut v = vec![c(0.0); n];
            v[i] = c(1.0);
            pairs.push((h[(i, i)].re, i, v));
            continue;
        }
        let m = comp.len();
        let block = DMatrix::from_fn(m, m, |a, b| h[(comp[a], comp[b])]);
        let eig = nalgebra::SymmetricEigen::try_new(block, f64::EPSILON, 0)
            .ok_or_else(|| contract("Hermitian eigensolver failed to converge"))?;
        for k in 0..m {
            let mut v = vec![c(0.0); n];
            for (a, &i) in comp.iter().enumerate() {
                v[i] = eig.eigenvectors[(a, k)];
            }
            pairs.push((eig.eigenvalues[k], comp[0], v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| pairs[k].2[i]);
    Ok(Eigh { values, vectors })
}

/// Connected components of the graph with an edge wherever `h[i,j] != 0`.
fn components(h: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = h.rows;
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut comp = vec![start];
        label[start] = id;
        let mut head = 0;
        while head < comp.len() {
            let i = comp[head];
            head += 1;
            for j in 0..n {
                if label[j] == usize::MAX && (h[(i, j)] != c(0.0) || h[(j, i)] != c(0.0)) {
                    label[j] = id;
                    comp.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Moore–Penrose pseudo-inverse of a PSD matrix together with the projector
/// onto its retained support.
#[derive(Clone, Debug)]
pub struct PsdPseudoInverse {
    pub inverse: ComplexMatrix,
    pub projector: ComplexMatrix,
    pub rank: usize,
    pub eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    /// `1/λ` on the retained support, zero elsewhere.
    inverse_values: Vec<f64>,
}

impl PsdPseudoInverse {
    fn coefficients(&self, v: &ColumnVector) -> Vec<Complex64> {
        let n = self.eigenvalues.len();
        (0..n)
            .map(|k| (0..n).map(|i| self.eigenvectors[(i, k)].conj() * v[i]).sum())
            .collect()
    }

    /// `h⁺ v`, evaluated in the eigenbasis. Unlike `inverse.matvec(v)` this
    /// does not cancel large `1/λ` terms against each other.
    pub fn apply(&self, v: &ColumnVector) -> ColumnVector {
        let coef = self.coefficients(v);
        let n = coef.len();
        let mut out = vec![c(0.0); n];
        for (k, (&w, &a)) in self.inverse_values.iter().zip(&coef).enumerate() {
            if w == 0.0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.eigenvectors[(i, k)] * (a * w);
            }
        }
        ColumnVector::new(out)
    }

    /// Norm of the component of `v` outside the retained support.
    pub fn support_residual(&self, v: &ColumnVector) -> f64 {
        self.coefficients(v)
            .iter()
            .zip(&self.inverse_values)
            .filter(|(_, &w)| w == 0.0)
            .map(|(a, _)| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Pseudo-inverse of a Hermitian PSD matrix. Eigenvalues at or below
/// `rel_tol · λ_max` count as zero.
pub fn pinv_psd_with_support(h: &ComplexMatrix, rel_tol: f64) -> Result<PsdPseudoInverse> {
    let eig = eigh(h)?;
    let n = h.rows();
    let lmax = eig.max_value();
    let spectral = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let lmin = eig.min_value();
    if lmin < -1e-10 * spectral {
        return Err(contract(format!(
            "pinv_psd input has negative eigenvalue {lmin:.3e} (spectral norm {spectral:.3e})"
        )));
    }
    let cutoff = rel_tol * lmax;
    let mut inverse = ComplexMatrix::zeros(n, n);
    let mut projector = ComplexMatrix::zeros(n, n);
    let mut rank = 0;
    let mut inverse_values = vec![0.0; n];
    for (k, &lam) in eig.values.iter().enumerate() {
        if lmax <= 0.0 || lam <= cutoff {
            continue;
        }
        rank += 1;
        let inv = 1.0 / lam;
        inverse_values[k] = inv;
        for i in 0..n {
            let vi = eig.vectors[(i, k)];
            if vi == c(0.0) {
                continue;
            }
            for j in 0..n {
                let outer = vi * eig.vectors[(j, k)].conj();
                projector[(i, j)] += outer;
                inverse[(i, j)] += outer * inv;
            }
        }
    }
    Ok(PsdPseudoInverse {
        inverse,
        projector,
        rank,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        inverse_values,
    })
}

pub fn pinv_psd(h: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    Ok(pinv_psd_with_support(h, rel_tol)?.inverse)
}

/// Single-qubit Pauli matrices `σ₀ = I, σ_x, σ_y, σ_z`.
pub mod pauli {
    use super::{c, ComplexMatrix};
    use num_complex::Complex64;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        let i = Complex64::new(0.0, 1.0);
        ComplexMatrix::from_fn(2, 2, |r, col| match (r, col) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => c(0.0),
        })
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, -1.0])
    }

    /// `[σ₀, σ_x, σ_y, σ_z]`.
    pub fn all() -> [ComplexMatrix; 4] {
        [identity(), x(), y(), z()]
    }
}
