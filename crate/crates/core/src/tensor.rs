//! Dense complex tensors in row-major layout, contractions, and the small
//! amount of dense linear algebra the verifiers need (Hermitian spectra,
//! singular values, null spaces).
//!
//! Spectral routines are delegated to `nalgebra`; everything else is plain
//! loops over flat storage. Contractions skip zero entries of the left
//! operand, which keeps group-derived structure tensors cheap without a
//! separate sparse representation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest number of complex entries any tensor may hold.
pub const SIZE_CAP: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS: f64 = 1e-9;
    pub const DEFAULT_REL: f64 = 1e-8;

    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs >= 0.0 && rel >= 0.0) || !(abs > 0.0 || rel > 0.0) {
            return Err(Error::Format(format!(
                "tolerance needs abs >= 0, rel >= 0 and one of them positive (got abs={abs}, rel={rel})"
            )));
        }
        Ok(Self { abs, rel })
    }

    /// `abs = 1e-9 * (1 + m)` where `m` is the largest structure-constant
    /// modulus, `rel = 1e-8`.
    pub fn scaled(max_modulus: f64) -> Self {
        Self {
            abs: Self::DEFAULT_ABS * (1.0 + max_modulus),
            rel: Self::DEFAULT_REL,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::scaled(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CTensor {
    shape: Vec<usize>,
    data: Vec<C64>,
}

fn checked_len(shape: &[usize]) -> Result<usize> {
    let mut len: usize = 1;
    for &d in shape {
        if d == 0 {
            return Err(Error::ShapeMismatch(format!("zero extent in shape {shape:?}")));
        }
        len = len.checked_mul(d).ok_or(Error::Capacity {
            entries: usize::MAX,
            cap: SIZE_CAP,
        })?;
    }
    if len > SIZE_CAP {
        return Err(Error::Capacity {
            entries: len,
            cap: SIZE_CAP,
        });
    }
    Ok(len)
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

impl CTensor {
    pub fn zeros(shape: &[usize]) -> Result<Self> {
        let len = checked_len(shape)?;
        Ok(Self {
            shape: shape.to_vec(),
            data: vec![ZERO; len],
        })
    }

    pub fn from_vec(shape: &[usize], data: Vec<C64>) -> Result<Self> {
        let len = checked_len(shape)?;
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape:?} needs {len} entries, got {}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn scalar(value: C64) -> Self {
        Self {
            shape: Vec::new(),
            data: vec![value],
        }
    }

    pub fn vector(data: Vec<C64>) -> Result<Self> {
        let n = data.len();
        Self::from_vec(&[n], data)
    }

    pub fn real_vector(values: &[f64]) -> Result<Self> {
        Self::vector(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        let mut v = Self::zeros(&[n])?;
        v.data[i] = ONE;
        Ok(v)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(&[n, n])?;
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        Ok(m)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut off = 0;
        for (k, (&i, &d)) in idx.iter().zip(&self.shape).enumerate() {
            debug_assert!(i < d, "index {i} out of range on axis {k}");
            off = off * d + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: C64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    pub fn reshape(mut self, shape: &[usize]) -> Result<Self> {
        let len = checked_len(shape)?;
        if len != self.data.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot reshape {:?} into {shape:?}",
                self.shape
            )));
        }
        self.shape = shape.to_vec();
        Ok(self)
    }

    /// Reorders axes so that output axis `k` is input axis `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let r = self.rank();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p >= r || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::ShapeMismatch(format!(
                "{perm:?} is not a permutation of {r} axes"
            )));
        }
        if perm.iter().enumerate().all(|(k, &p)| k == p) {
            return Ok(self.clone());
        }
        let new_shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let old_strides = strides_of(&self.shape);
        let src_strides: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; r];
        let mut src = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[src]);
            for k in (0..r).rev() {
                idx[k] += 1;
                src += src_strides[k];
                if idx[k] < new_shape[k] {
                    break;
                }
                src -= src_strides[k] * new_shape[k];
                idx[k] = 0;
            }
        }
        Ok(Self {
            shape: new_shape,
            data,
        })
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest entry modulus (0 for the zero tensor).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_matrix(&self) -> bool {
        self.rank() == 2
    }

    fn require_matrix(&self) -> Result<(usize, usize)> {
        match self.shape.as_slice() {
            &[r, c] => Ok((r, c)),
            s => Err(Error::ShapeMismatch(format!("expected a matrix, got shape {s:?}"))),
        }
    }

    fn require_square(&self) -> Result<usize> {
        let (r, c) = self.require_matrix()?;
        if r != c {
            return Err(Error::ShapeMismatch(format!("expected a square matrix, got {r}x{c}")));
        }
        Ok(r)
    }

    pub fn transpose(&self) -> Result<Self> {
        self.require_matrix()?;
        self.permute(&[1, 0])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Result<Self> {
        Ok(self.transpose()?.conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        let (_, k) = self.require_matrix()?;
        match other.rank() {
            1 => contract(self, other, &[(1, 0)]),
            2 => {
                let (k2, _) = other.require_matrix()?;
                if k != k2 {
                    return Err(Error::ShapeMismatch(format!(
                        "matmul {:?} x {:?}",
                        self.shape, other.shape
                    )));
                }
                contract(self, other, &[(1, 0)])
            }
            _ => Err(Error::ShapeMismatch("matmul needs a vector or matrix".into())),
        }
    }

    /// Row `i` of a rank-k tensor as a rank-(k-1) tensor.
    pub fn slice0(&self, i: usize) -> Self {
        let inner: usize = self.shape[1..].iter().product();
        Self {
            shape: self.shape[1..].to_vec(),
            data: self.data[i * inner..(i + 1) * inner].to_vec(),
        }
    }

    /// Column `j` of a matrix.
    pub fn column(&self, j: usize) -> Result<Self> {
        let (r, c) = self.require_matrix()?;
        Self::vector((0..r).map(|i| self.data[i * c + j]).collect())
    }

    pub fn to_nalgebra(&self) -> Result<DMatrix<C64>> {
        let (r, c) = self.require_matrix()?;
        Ok(DMatrix::from_row_slice(r, c, &self.data))
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Result<Self> {
        let (r, c) = m.shape();
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(m[(i, j)]);
            }
        }
        Self::from_vec(&[r, c], data)
    }
}

/// Outer product: shape is the concatenation, entry `(i, j)` is `x[i] * y[j]`.
pub fn tensor_product(x: &CTensor, y: &CTensor) -> Result<CTensor> {
    let shape: Vec<usize> = x.shape.iter().chain(&y.shape).copied().collect();
    checked_len(&shape)?;
    let mut data = Vec::with_capacity(x.len() * y.len());
    for &a in &x.data {
        data.extend(y.data.iter().map(|&b| a * b));
    }
    Ok(CTensor { shape, data })
}

/// Einstein contraction over `axis_pairs` (axis of `x`, axis of `y`).
/// Free axes of `x` come first, then free axes of `y`, each in original order.
pub fn contract(x: &CTensor, y: &CTensor, axis_pairs: &[(usize, usize)]) -> Result<CTensor> {
    let mut used_x = vec![false; x.rank()];
    let mut used_y = vec![false; y.rank()];
    for &(ax, ay) in axis_pairs {
        if ax >= x.rank() || ay >= y.rank() {
            return Err(Error::ShapeMismatch(format!(
                "axis pair ({ax}, {ay}) out of range for ranks {} and {}",
                x.rank(),
                y.rank()
            )));
        }
        if std::mem::replace(&mut used_x[ax], true) || std::mem::replace(&mut used_y[ay], true) {
            return Err(Error::ShapeMismatch(format!("axis repeated in pairs {axis_pairs:?}")));
        }
        if x.shape[ax] != y.shape[ay] {
            return Err(Error::ShapeMismatch(format!(
                "contracted extents differ: x axis {ax} has {}, y axis {ay} has {}",
                x.shape[ax], y.shape[ay]
            )));
        }
    }
    let free_x: Vec<usize> = (0..x.rank()).filter(|&k| !used_x[k]).collect();
    let free_y: Vec<usize> = (0..y.rank()).filter(|&k| !used_y[k]).collect();

    let perm_x: Vec<usize> = free_x.iter().copied().chain(axis_pairs.iter().map(|p| p.0)).collect();
    let perm_y: Vec<usize> = axis_pairs.iter().map(|p| p.1).chain(free_y.iter().copied()).collect();
    let xp = x.permute(&perm_x)?;
    let yp = y.permute(&perm_y)?;

    let rows: usize = free_x.iter().map(|&k| x.shape[k]).product();
    let inner: usize = axis_pairs.iter().map(|p| x.shape[p.0]).product();
    let cols: usize = free_y.iter().map(|&k| y.shape[k]).product();
    let out_shape: Vec<usize> = free_x
        .iter()
        .map(|&k| x.shape[k])
        .chain(free_y.iter().map(|&k| y.shape[k]))
        .collect();
    checked_len(&out_shape)?;

    let mut out = vec![ZERO; rows * cols];
    for r in 0..rows {
        let row = &mut out[r * cols..(r + 1) * cols];
        for k in 0..inner {
            let a = xp.data[r * inner + k];
            if a == ZERO {
                continue;
            }
            let brow = &yp.data[k * cols..(k + 1) * cols];
            for (o, &b) in row.iter_mut().zip(brow) {
                *o += a * b;
            }
        }
    }
    Ok(CTensor {
        shape: out_shape,
        data: out,
    })
}

/// Max over entries of `|x_e - y_e|`.
pub fn max_abs_diff(x: &CTensor, y: &CTensor) -> Result<f64> {
    if x.shape != y.shape {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", x.shape, y.shape)));
    }
    Ok(x.data
        .iter()
        .zip(&y.data)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// `max |M - M*|` for a square matrix.
pub fn hermitian_residual(m: &CTensor) -> Result<f64> {
    let n = m.require_square()?;
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            r = r.max((m.data[i * n + j] - m.data[j * n + i].conj()).norm());
        }
    }
    Ok(r)
}

/// Eigenvalues (ascending) and a unitary `U` with `M = U diag(λ) U*`.
///
/// The input must be Hermitian to within `1e-9 * (1 + max|M|)`.
pub fn hermitian_eig(m: &CTensor) -> Result<(Vec<f64>, CTensor)> {
    let n = m.require_square()?;
    let residual = hermitian_residual(m)?;
    if residual > 1e-9 * (1.0 + m.max_abs()) {
        return Err(Error::NotHermitian { residual });
    }
    // symmetrize so the solver sees an exactly Hermitian matrix
    let a = m.to_nalgebra()?;
    let a = (&a + a.adjoint()).scale(0.5);
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut u = CTensor::zeros(&[n, n])?;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            u.data[row * n + col] = eig.eigenvectors[(row, src)];
        }
    }
    Ok((values, u))
}

/// Singular values in descending order.
pub fn singular_values(m: &CTensor) -> Result<Vec<f64>> {
    m.require_matrix()?;
    let svd = m.to_nalgebra()?.svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value.
pub fn operator_norm(m: &CTensor) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Numerical null space of a matrix, decided by relative singular-value
/// thresholding.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Singular values, descending, padded with zeros to the column count.
    pub singular_values: Vec<f64>,
    /// Orthonormal basis vectors of the null space.
    pub basis: Vec<CTensor>,
}

pub fn null_space(m: &CTensor, rel_threshold: f64) -> Result<NullSpace> {
    let (rows, cols) = m.require_matrix()?;
    let mut a = m.to_nalgebra()?;
    if rows < cols {
        a = a.resize_vertically(cols, ZERO);
    }
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Format("SVD did not return right singular vectors".into()))?;
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = s.first().copied().unwrap_or(0.0);
    let cut = rel_threshold * smax;
    let mut basis = Vec::new();
    for (k, &sv) in s.iter().enumerate() {
        if sv <= cut {
            // rows of V* are conjugated right singular vectors
            let v: Vec<C64> = (0..cols).map(|j| v_t[(k, j)].conj()).collect();
            basis.push(CTensor::vector(v)?);
        }
    }
    Ok(NullSpace {
        singular_values: s,
        basis,
    })
}

/// Inverse of a square matrix, or `None` when its condition exceeds
/// `1 / rel_threshold`.
pub fn try_inverse(m: &CTensor, rel_threshold: f64) -> Result<Option<CTensor>> {
    m.require_square()?;
    let s = singular_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let smin = s.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin <= rel_threshold * smax {
        return Ok(None);
    }
    match m.to_nalgebra()?.try_inverse() {
        Some(inv) => Ok(Some(CTensor::from_nalgebra(&inv)?)),
        None => Ok(None),
    }
}

/// Stacks matrices with equal column counts on top of each other.
pub fn vstack(blocks: &[CTensor]) -> Result<CTensor> {
    let cols = blocks
        .first()
        .map(|b| b.require_matrix().map(|(_, c)| c))
        .transpose()?
        .unwrap_or(0);
    let mut data = Vec::new();
    let mut rows = 0;
    for b in blocks {
        let (r, c) = b.require_matrix()?;
        if c != cols {
            return Err(Error::ShapeMismatch(format!("vstack: {c} columns vs {cols}")));
        }
        rows += r;
        data.extend_from_slice(&b.data);
    }
    CTensor::from_vec(&[rows, cols], data)
}

/// Standard complex Gaussian coordinates: real and imaginary parts are
/// independent with variance 1/2.
pub fn gaussian_vector<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> CTensor {
    let normal = rand_distr::Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid variance");
    let data = (0..n)
        .map(|_| C64::new(rng.sample(normal), rng.sample(normal)))
        .collect();
    CTensor::vector(data).expect("finite samples")
}

/// [`gaussian_vector`] scaled to unit Euclidean norm.
pub fn unit_gaussian_vector<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> CTensor {
    let v = gaussian_vector(rng, n);
    let norm = v.norm2();
    v.scale(C64::new(1.0 / norm, 0.0))
}
