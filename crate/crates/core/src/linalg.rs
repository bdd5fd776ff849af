//! Dense square complex matrices and state-vector helpers.
//!
//! Every operator in the crate is small (dimension ≤ 64 at desk scale), so a
//! flat row-major `Vec<C64>` is all the storage we need. Hermitian
//! eigendecomposition and singular values are delegated to `nalgebra`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type C64 = Complex64;

/// Max-norm tolerance used by every equality predicate.
pub const EPS: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `exp(2πi k / d)`.
pub fn root_of_unity(d: usize, k: i64) -> C64 {
    let k = k.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / d as f64)
}

/// A dense `dim × dim` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[C64]> = (0..self.dim).map(|r| self.row(r)).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<C64>>::deserialize(deserializer)?;
        Matrix::from_rows(&rows).ok_or_else(|| serde::de::Error::custom("expected a non-empty square matrix"))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major data. Returns `None` unless `data.len()`
    /// is a perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len()).then_some(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self { dim, data: rows.concat() })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Option<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[C64]) -> Self {
        Self::from_fn(entries.len(), |r, c| if r == c { entries[r] } else { ZERO })
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of mismatched vectors");
        Self::from_fn(u.len(), |r, c| u[r] * v[c].conj())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Self {
        let dim = blocks.iter().map(Matrix::dim).sum();
        let mut out = Self::zeros(dim);
        let mut offset = 0;
        for b in blocks {
            for r in 0..b.dim {
                for c in 0..b.dim {
                    out[(offset + r, offset + c)] = b[(r, c)];
                }
            }
            offset += b.dim;
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[C64]) {
        for (r, &x) in v.iter().enumerate() {
            self[(r, c)] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert-Schmidt inner product `tr(self† other)`.
    pub fn hs_inner(&self, other: &Matrix) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance.
    pub fn dist(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "distance between matrices of different dimension");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.dim == other.dim && self.dist(other) < tol
    }

    /// Distance to `other` after fitting one global phase.
    ///
    /// The phase comes from the largest-magnitude entry of `other`.
    pub fn dist_up_to_phase(&self, other: &Matrix) -> f64 {
        phase_aligned_distance(&self.data, &other.data)
    }

    pub fn kron(&self, other: &Matrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |r, c| self[(r / m, c / m)] * other[(r % m, c % m)])
    }

    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Matrix>) -> Self {
        factors.into_iter().fold(Self::identity(1), |acc, f| acc.kron(f))
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn commutator(&self, other: &Matrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Matrix) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn commutes_with(&self, other: &Matrix, tol: f64) -> bool {
        self.commutator(other).max_abs() < tol
    }

    pub fn anticommutes_with(&self, other: &Matrix, tol: f64) -> bool {
        self.anticommutator(other).max_abs() < tol
    }

    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).dist(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.dist(&self.adjoint()) < tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (self * self).dist(self) < tol
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() < tol)
    }

    /// Real and imaginary parts `(V, W)` with `self = V + iW`.
    pub fn split_real_imag(&self) -> (Self, Self) {
        let re = Self { dim: self.dim, data: self.data.iter().map(|z| C64::new(z.re, 0.0)).collect() };
        let im = Self { dim: self.dim, data: self.data.iter().map(|z| C64::new(z.im, 0.0)).collect() };
        (re, im)
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), |r, c| m[(r, c)])
    }

    /// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
    ///
    /// Column `k` of the returned matrix is the eigenvector for eigenvalue `k`.
    pub fn eigh(&self) -> (Vec<f64>, Matrix) {
        let eig = nalgebra::linalg::SymmetricEigen::new(self.to_nalgebra());
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(self.dim, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    pub fn rank(&self, tol: f64) -> usize {
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(0.0);
        if top < tol {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol * top.max(1.0)).count()
    }

    /// `exp(-i t H)` for Hermitian `H`.
    pub fn exp_hermitian(&self, t: f64) -> Matrix {
        let (values, vectors) = self.eigh();
        let phases: Vec<C64> = values.iter().map(|&l| C64::from_polar(1.0, -t * l)).collect();
        &(&vectors * &Matrix::diag(&phases)) * &vectors.adjoint()
    }

    /// Inverse via LU; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        self.to_nalgebra().try_inverse().map(|m| Self::from_nalgebra(&m))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix product of mismatched dimensions");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Matrix { dim: n, data: out }
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_real(-1.0)
    }
}

// ---------------------------------------------------------------------------
// state vectors
// ---------------------------------------------------------------------------

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Returns a unit-norm copy; `None` for the zero vector.
pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let n = norm(v);
    (n > 1e-300).then(|| v.iter().map(|z| z / n).collect())
}

/// `|⟨u|v⟩|²` for normalized inputs.
pub fn fidelity(u: &[C64], v: &[C64]) -> f64 {
    inner(u, v).norm_sqr()
}

/// Max-abs distance between `a` and `b` after rotating `a` by the global phase
/// fitted from the largest-magnitude entry of `b`.
pub fn phase_aligned_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "phase comparison of mismatched lengths");
    let pivot = b.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).map(|(i, _)| i);
    let phase = match pivot {
        Some(i) if a[i].norm() > 1e-300 && b[i].norm() > 1e-300 => {
            let r = b[i] / a[i];
            r / r.norm()
        }
        _ => ONE,
    };
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

/// Applies a single-site operator to site `site` of a chain with local
/// dimensions `dims` (site 0 is the most significant digit).
pub fn apply_local(state: &[C64], dims: &[usize], site: usize, op: &Matrix) -> Vec<C64> {
    let d = dims[site];
    assert_eq!(op.dim(), d, "local operator dimension mismatch");
    let inner_size: usize = dims[site + 1..].iter().product();
    let outer_size: usize = dims[..site].iter().product();
    let mut out = vec![ZERO; state.len()];
    for o in 0..outer_size {
        for i in 0..inner_size {
            let base = o * d * inner_size + i;
            for r in 0..d {
                let mut acc = ZERO;
                for c in 0..d {
                    let a = op[(r, c)];
                    if a != ZERO {
                        acc += a * state[base + c * inner_size];
                    }
                }
                out[base + r * inner_size] = acc;
            }
        }
    }
    out
}

/// Applies an operator acting on two *adjacent* sites `site, site+1`.
pub fn apply_two_local(state: &[C64], dims: &[usize], site: usize, op: &Matrix) -> Vec<C64> {
    let (da, db) = (dims[site], dims[site + 1]);
    assert_eq!(op.dim(), da * db);
    let inner_size: usize = dims[site + 2..].iter().product();
    let outer_size: usize = dims[..site].iter().product();
    let block = da * db;
    let mut out = vec![ZERO; state.len()];
    for o in 0..outer_size {
        for i in 0..inner_size {
            let base = o * block * inner_size + i;
            for r in 0..block {
                let mut acc = ZERO;
                for c in 0..block {
                    let a = op[(r, c)];
                    if a != ZERO {
                        acc += a * state[base + c * inner_size];
                    }
                }
                out[base + r * inner_size] = acc;
            }
        }
    }
    out
}

/// Applies `op` to the sites listed in `sites`; the operator's tensor
/// ordering follows the order of `sites`, which need not be adjacent.
pub fn apply_on_sites(state: &[C64], dims: &[usize], sites: &[usize], op: &Matrix) -> Vec<C64> {
    let block: usize = sites.iter().map(|&s| dims[s]).product();
    assert_eq!(op.dim(), block, "operator does not match the listed sites");
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    // offsets of every local configuration relative to a base index
    let offsets: Vec<usize> = (0..block)
        .map(|loc| {
            let mut rem = loc;
            let mut off = 0;
            for &s in sites.iter().rev() {
                off += (rem % dims[s]) * strides[s];
                rem /= dims[s];
            }
            off
        })
        .collect();
    let mut out = vec![ZERO; state.len()];
    let mut local = vec![ZERO; block];
    for base in 0..state.len() {
        if sites.iter().any(|&s| !(base / strides[s]).is_multiple_of(dims[s])) {
            continue;
        }
        for (l, &off) in local.iter_mut().zip(&offsets) {
            *l = state[base + off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            out[base + off] = op.row(r).iter().zip(&local).map(|(a, b)| a * b).sum();
        }
    }
    out
}

/// Digits of `index` in the mixed radix `dims` (most significant first).
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        out[k] = index % d;
        index /= d;
    }
    out
}

/// Reduced density matrix of one site.
pub fn reduced_density(state: &[C64], dims: &[usize], site: usize) -> Matrix {
    let d = dims[site];
    let inner_size: usize = dims[site + 1..].iter().product();
    let outer_size: usize = dims[..site].iter().product();
    let mut rho = Matrix::zeros(d);
    for o in 0..outer_size {
        for i in 0..inner_size {
            let base = o * d * inner_size + i;
            for r in 0..d {
                let a = state[base + r * inner_size];
                for c in 0..d {
                    rho[(r, c)] += a * state[base + c * inner_size].conj();
                }
            }
        }
    }
    rho
}

/// Incrementally built orthonormal basis of real vectors, used for Lie-algebra
/// span and closure ranks.
#[derive(Clone, Debug, Default)]
pub struct RealSpan {
    basis: Vec<Vec<f64>>,
}

impl RealSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v` if it is linearly independent of the current span; returns
    /// whether it was added.
    pub fn insert(&mut self, v: &[f64], tol: f64) -> bool {
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if scale < tol {
            return false;
        }
        let mut w: Vec<f64> = v.iter().map(|x| x / scale).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &self.basis {
                let p: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= p * bi;
                }
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < tol.sqrt().max(1e-6) {
            return false;
        }
        self.basis.push(w.into_iter().map(|x| x / n).collect());
        true
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        let mut w = v.to_vec();
        for b in &self.basis {
            let p: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= p * bi;
            }
        }
        w.iter().map(|x| x * x).sum::<f64>().sqrt() < tol
    }
}

/// Real coordinates of a matrix: real parts followed by imaginary parts.
pub fn realify(m: &Matrix) -> Vec<f64> {
    m.data().iter().map(|z| z.re).chain(m.data().iter().map(|z| z.im)).collect()
}
