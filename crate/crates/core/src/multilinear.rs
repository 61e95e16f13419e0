//! Dense multilinear algebra over a fixed basis of a small real vector space.
//!
//! Everything here works in coordinates: a [`MultilinearForm`] of rank `r` on a
//! space of dimension `d` stores its `d^r` values on basis tuples in row-major
//! order (first slot slowest). Metrics are [`BilinearForm`]s, (1,1)-tensors are
//! [`Endomorphism`]s acting on column vectors, and (1,2)-tensors such as
//! connection differences are [`VectorMap`]s.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

pub type Vector = DVector<f64>;

/// Largest supported dimension (covers contact spaces with n <= 4 and ambient spaces with n' <= 4).
pub const MAX_DIM: usize = 9;

fn check_square(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    Ok(())
}

/// Max-norm of a matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// A bilinear form `B(x, y) = x^T M y` over the fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm(DMatrix<f64>);

impl BilinearForm {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        check_square(&entries)?;
        Ok(Self(entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.0 * y))
    }

    /// Lowers a vector: the covector `B(v, .)`.
    pub fn lower(&self, v: &Vector) -> Vector {
        self.0.transpose() * v
    }

    pub fn symmetry_residual(&self) -> f64 {
        max_abs(&(&self.0 - self.0.transpose()))
    }

    pub fn to_form(&self) -> MultilinearForm {
        MultilinearForm::from_fn(2, self.dim(), |ix| self.0[(ix[0], ix[1])])
            .expect("square matrix of supported size")
    }
}

/// A linear map of the space, acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism(DMatrix<f64>);

impl Endomorphism {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        check_square(&entries)?;
        Ok(Self(entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// The rank-one map `x -> eta(x) v`.
    pub fn outer(v: &Vector, eta: &Vector) -> Self {
        Self(v * eta.transpose())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.0 * v
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism(&self.0 * &other.0)
    }

    pub fn scale(&self, s: f64) -> Endomorphism {
        Endomorphism(&self.0 * s)
    }
}

impl Add for &Endomorphism {
    type Output = Endomorphism;
    fn add(self, rhs: &Endomorphism) -> Endomorphism {
        Endomorphism(&self.0 + &rhs.0)
    }
}

impl Sub for &Endomorphism {
    type Output = Endomorphism;
    fn sub(self, rhs: &Endomorphism) -> Endomorphism {
        Endomorphism(&self.0 - &rhs.0)
    }
}

/// Dense covariant tensor of rank 1..=4.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearForm {
    rank: usize,
    dim: usize,
    entries: Vec<f64>,
}

impl MultilinearForm {
    pub fn zeros(rank: usize, dim: usize) -> Result<Self> {
        if !(1..=4).contains(&rank) {
            return Err(Error::UnsupportedRank(rank));
        }
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self {
            rank,
            dim,
            entries: vec![0.0; dim.pow(rank as u32)],
        })
    }

    /// Builds the tensor from its values on basis tuples.
    pub fn from_fn(rank: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut out = Self::zeros(rank, dim)?;
        let mut ix = vec![0usize; rank];
        for slot in out.entries.iter_mut() {
            *slot = f(&ix);
            for k in (0..rank).rev() {
                ix[k] += 1;
                if ix[k] < dim {
                    break;
                }
                ix[k] = 0;
            }
        }
        Ok(out)
    }

    pub fn from_entries(rank: usize, dim: usize, entries: Vec<f64>) -> Result<Self> {
        let out = Self::zeros(rank, dim)?;
        if entries.len() != out.entries.len() {
            return Err(Error::DimensionMismatch {
                expected: out.entries.len(),
                got: entries.len(),
            });
        }
        Ok(Self { entries, ..out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn offset(&self, ix: &[usize]) -> usize {
        ix.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, ix: &[usize]) -> f64 {
        debug_assert_eq!(ix.len(), self.rank);
        self.entries[self.offset(ix)]
    }

    pub fn set(&mut self, ix: &[usize], value: f64) {
        let at = self.offset(ix);
        self.entries[at] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &MultilinearForm) -> f64 {
        assert_eq!((self.rank, self.dim), (other.rank, other.dim));
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Contracts the first slot with `v`, lowering the rank by one.
    fn contract_first(&self, v: &Vector) -> Vec<f64> {
        let stride = self.entries.len() / self.dim;
        let mut out = vec![0.0; stride];
        for (i, chunk) in self.entries.chunks(stride).enumerate() {
            let c = v[i];
            if c != 0.0 {
                for (o, x) in out.iter_mut().zip(chunk) {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// Evaluates the form on `rank` vectors.
    pub fn evaluate(&self, args: &[&Vector]) -> Result<f64> {
        if args.len() != self.rank {
            return Err(Error::ArityMismatch {
                expected: self.rank,
                got: args.len(),
            });
        }
        if let Some(bad) = args.iter().find(|a| a.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: bad.len(),
            });
        }
        let mut acc = self.entries.clone();
        let mut dim_left = self.entries.len();
        for arg in args {
            let stride = dim_left / self.dim;
            let mut next = vec![0.0; stride];
            for (i, chunk) in acc.chunks(stride).enumerate() {
                let c = arg[i];
                for (o, x) in next.iter_mut().zip(chunk) {
                    *o += c * x;
                }
            }
            acc = next;
            dim_left = stride;
        }
        Ok(acc[0])
    }

    /// Partial evaluation in the first slot: `T(v, ., ..., .)`.
    pub fn insert_first(&self, v: &Vector) -> Result<MultilinearForm> {
        if self.rank < 2 {
            return Err(Error::UnsupportedRank(self.rank - 1));
        }
        let entries = self.contract_first(v);
        MultilinearForm::from_entries(self.rank - 1, self.dim, entries)
    }

    /// `T(..., M x, ...)` in each of the given slots (M acts on the slot argument).
    pub fn substitute(&self, slots: &[usize], m: &Endomorphism) -> MultilinearForm {
        assert_eq!(m.dim(), self.dim);
        let mut current = self.clone();
        for &slot in slots {
            assert!(slot < self.rank);
            let mat = m.matrix();
            current = MultilinearForm::from_fn(self.rank, self.dim, |ix| {
                let mut ix2 = ix.to_vec();
                let col = ix[slot];
                (0..self.dim)
                    .map(|k| {
                        ix2[slot] = k;
                        mat[(k, col)] * current.get(&ix2)
                    })
                    .sum()
            })
            .expect("same shape");
        }
        current
    }

    /// Pulls the form back along a linear map `B: R^m -> R^d` given as a d×m matrix.
    pub fn pullback(&self, b: &DMatrix<f64>) -> Result<MultilinearForm> {
        if b.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: b.nrows(),
            });
        }
        let m = b.ncols();
        // contract one slot at a time, rotating the new index to the back
        let mut shape: Vec<usize> = vec![self.dim; self.rank];
        let mut data = self.entries.clone();
        for _ in 0..self.rank {
            let lead = shape[0];
            let rest: usize = shape[1..].iter().product();
            let mut next = vec![0.0; rest * m];
            for r in 0..rest {
                for j in 0..m {
                    let mut s = 0.0;
                    for i in 0..lead {
                        s += b[(i, j)] * data[i * rest + r];
                    }
                    next[r * m + j] = s;
                }
            }
            shape.remove(0);
            shape.push(m);
            data = next;
        }
        MultilinearForm::from_entries(self.rank, m, data)
    }

    /// Tensor with slots permuted: `out(i_0, ..) = self(i_{perm[0]}, ..)`.
    pub fn permuted(&self, perm: &[usize]) -> MultilinearForm {
        assert_eq!(perm.len(), self.rank);
        MultilinearForm::from_fn(self.rank, self.dim, |ix| {
            let src: Vec<usize> = perm.iter().map(|&p| ix[p]).collect();
            self.get(&src)
        })
        .expect("same shape")
    }

    pub fn scaled(&self, s: f64) -> MultilinearForm {
        MultilinearForm {
            entries: self.entries.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    fn zip_with(&self, other: &MultilinearForm, f: impl Fn(f64, f64) -> f64) -> MultilinearForm {
        assert_eq!(
            (self.rank, self.dim),
            (other.rank, other.dim),
            "tensor shapes differ"
        );
        MultilinearForm {
            rank: self.rank,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// Rank-2 form as a matrix.
    pub fn to_matrix(&self) -> Option<DMatrix<f64>> {
        (self.rank == 2).then(|| DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j])))
    }
}

impl Add for &MultilinearForm {
    type Output = MultilinearForm;
    fn add(self, rhs: &MultilinearForm) -> MultilinearForm {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &MultilinearForm {
    type Output = MultilinearForm;
    fn sub(self, rhs: &MultilinearForm) -> MultilinearForm {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for MultilinearForm {
    type Output = MultilinearForm;
    fn add(self, rhs: MultilinearForm) -> MultilinearForm {
        &self + &rhs
    }
}

impl Sub for MultilinearForm {
    type Output = MultilinearForm;
    fn sub(self, rhs: MultilinearForm) -> MultilinearForm {
        &self - &rhs
    }
}

impl Mul<&MultilinearForm> for f64 {
    type Output = MultilinearForm;
    fn mul(self, rhs: &MultilinearForm) -> MultilinearForm {
        rhs.scaled(self)
    }
}

impl Mul<MultilinearForm> for f64 {
    type Output = MultilinearForm;
    fn mul(self, rhs: MultilinearForm) -> MultilinearForm {
        rhs.scaled(self)
    }
}

impl Neg for MultilinearForm {
    type Output = MultilinearForm;
    fn neg(self) -> MultilinearForm {
        self.scaled(-1.0)
    }
}

/// A vector-valued bilinear map `T(x, y)`, i.e. a (1,2)-tensor.
///
/// `component(k, i, j)` is the k-th coordinate of `T(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMap {
    dim: usize,
    entries: Vec<f64>,
}

impl VectorMap {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(dim);
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    out.entries[(k * dim + i) * dim + j] = f(k, i, j);
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, k: usize, i: usize, j: usize) -> f64 {
        self.entries[(k * self.dim + i) * self.dim + j]
    }

    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        let d = self.dim;
        Vector::from_fn(d, |k, _| {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    s += self.component(k, i, j) * x[i] * y[j];
                }
            }
            s
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &VectorMap) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Inverse of a symmetric nondegenerate metric.
pub fn invert_metric(g: &BilinearForm, tol: &Tolerance) -> Result<BilinearForm> {
    let m = g.matrix();
    let det = m.determinant();
    if !det.is_finite() || det.abs() < tol.abs_tol {
        return Err(Error::Degenerate(det.abs()));
    }
    let inv = m
        .clone()
        .try_inverse()
        .ok_or(Error::Degenerate(det.abs()))?;
    let defect = max_abs(&(m * &inv - DMatrix::identity(m.nrows(), m.nrows())));
    if defect > tol.rel_tol * max_abs(m).max(1.0) {
        return Err(Error::Degenerate(det.abs()));
    }
    // symmetrise to remove rounding asymmetry
    let sym = (&inv + inv.transpose()) * 0.5;
    Ok(BilinearForm(sym))
}

/// Numbers of positive and negative eigenvalues of a symmetric form.
pub fn signature(g: &BilinearForm, tol: &Tolerance) -> Result<(usize, usize)> {
    let sym = (g.matrix() + g.matrix().transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut p = 0;
    let mut q = 0;
    for &lambda in eig.eigenvalues.iter() {
        if lambda.abs() <= tol.abs_tol {
            return Err(Error::Degenerate(lambda.abs()));
        }
        if lambda > 0.0 {
            p += 1;
        } else {
            q += 1;
        }
    }
    Ok((p, q))
}

pub fn evaluate(t: &MultilinearForm, args: &[&Vector]) -> Result<f64> {
    t.evaluate(args)
}

/// `rho(y, z) = g^{ij} T(e_i, y, z, e_j)`.
pub fn ricci_contract(t: &MultilinearForm, g_inv: &BilinearForm) -> Result<MultilinearForm> {
    if t.rank() != 4 {
        return Err(Error::UnsupportedRank(t.rank()));
    }
    let d = t.dim();
    if g_inv.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: g_inv.dim(),
        });
    }
    let gi = g_inv.matrix();
    MultilinearForm::from_fn(2, d, |ix| {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                let w = gi[(i, j)];
                if w != 0.0 {
                    s += w * t.get(&[i, ix[0], ix[1], j]);
                }
            }
        }
        s
    })
}

/// `g^{ij} rho(e_i, e_j)`.
pub fn scalar_contract(rho: &MultilinearForm, g_inv: &BilinearForm) -> Result<f64> {
    if rho.rank() != 2 {
        return Err(Error::UnsupportedRank(rho.rank()));
    }
    let d = rho.dim();
    if g_inv.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: g_inv.dim(),
        });
    }
    let gi = g_inv.matrix();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            s += gi[(i, j)] * rho.get(&[i, j]);
        }
    }
    Ok(s)
}

pub fn trace_endo(a: &Endomorphism) -> f64 {
    a.matrix().trace()
}

pub fn trace_compose(a: &Endomorphism, b: &Endomorphism) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok((a.matrix() * b.matrix()).trace())
}

/// Euclidean distance from `v` to the span of `basis` (least squares in coordinates).
pub fn span_residual(basis: &[&Vector], v: &Vector) -> f64 {
    let d = v.len();
    let m = DMatrix::from_fn(d, basis.len(), |i, j| basis[j][i]);
    let svd = m.clone().svd(true, true);
    match svd.solve(v, 1e-14) {
        Ok(c) => (&m * c - v).norm(),
        Err(_) => v.norm(),
    }
}

/// True when the vectors are linearly independent at the given absolute threshold
/// (smallest singular value relative to the largest).
pub fn independent(vectors: &[&Vector], abs_tol: f64) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let d = vectors[0].len();
    if vectors.len() > d {
        return false;
    }
    let m = DMatrix::from_fn(d, vectors.len(), |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let largest = sv.max();
    let smallest = sv.min();
    largest > 0.0 && smallest > abs_tol * largest.max(1.0)
}
