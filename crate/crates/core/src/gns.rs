//! GNS representation of a Hopf *-algebra with a faithful positive integral,
//! with the two quadratic norms and the operator norm it induces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::double::DoubleSpec;
use crate::error::{Error, Result};
use crate::hopf::HopfSpec;
use crate::report::{shortfall, AxiomReport};
use crate::tensor::{
    contract, gaussian_vector, hermitian_eig, max_abs_diff, operator_norm, singular_values, CTensor, Tolerance, C64,
    ZERO,
};

/// Seed of the random elements drawn by [`verify_isometry`].
pub const ISOMETRY_SEED: u64 = 0x1503;
pub const ISOMETRY_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct GnsData {
    spec: HopfSpec,
    gram: CTensor,
    eigenvalues: Vec<f64>,
    transform: CTensor,
    inverse: CTensor,
    rep: Vec<CTensor>,
}

impl GnsData {
    pub fn spec(&self) -> &HopfSpec {
        &self.spec
    }

    /// `gram[i, j] = θ(e_j* e_i)`.
    pub fn gram(&self) -> &CTensor {
        &self.gram
    }

    /// Ascending eigenvalues of the inner-product matrix.
    pub fn gram_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Maps coordinates to an orthonormal basis of the GNS space.
    pub fn transform(&self) -> &CTensor {
        &self.transform
    }

    /// `rep()[i]` is `π(e_i)` in the orthonormal basis.
    pub fn rep(&self) -> &[CTensor] {
        &self.rep
    }

    pub fn rep_mut(&mut self) -> &mut [CTensor] {
        &mut self.rep
    }

    /// `π(x) = Σ x_i π(e_i)`.
    pub fn represent(&self, x: &CTensor) -> Result<CTensor> {
        self.check(x)?;
        let n = self.spec.dim();
        let mut out = CTensor::zeros(&[n, n])?;
        for (xi, r) in x.data().iter().zip(&self.rep) {
            if *xi != ZERO {
                out = out.add(&r.scale(*xi))?;
            }
        }
        Ok(out)
    }

    fn check(&self, x: &CTensor) -> Result<()> {
        if x.shape() != [self.spec.dim()] {
            return Err(Error::ShapeMismatch(format!(
                "expected coordinates of length {}, got shape {:?}",
                self.spec.dim(),
                x.shape()
            )));
        }
        Ok(())
    }

    /// `<x, y> = θ(y* x)`.
    pub fn inner(&self, x: &CTensor, y: &CTensor) -> Result<C64> {
        self.check(x)?;
        self.check(y)?;
        let gx = contract(&self.gram, &y.conj(), &[(1, 0)])?;
        Ok(contract(x, &gx, &[(0, 0)])?.data()[0])
    }
}

/// Builds the GNS representation of `h` from its integral.
pub fn gns_build(h: &HopfSpec, tol: &Tolerance) -> Result<GnsData> {
    let n = h.dim();
    let gram = h.gram_matrix()?;
    // <x, y> = y† K x with K = gramᵀ
    let k = gram.transpose()?;
    let (eigenvalues, u) = hermitian_eig(&k)?;
    let min = eigenvalues.first().copied().unwrap_or(0.0);
    if !(min > tol.abs) {
        return Err(Error::GramNotPositive { min_eigenvalue: min });
    }
    let sqrt = |p: f64| CTensor::from_vec(&[n, n], diag(&eigenvalues, p));
    let transform = sqrt(0.5)?.matmul(&u.adjoint()?)?;
    let inverse = u.matmul(&sqrt(-0.5)?)?;
    let rep = (0..n)
        .map(|i| transform.matmul(&h.left_mult_matrix(&h.basis(i))?)?.matmul(&inverse))
        .collect::<Result<Vec<_>>>()?;
    Ok(GnsData {
        spec: h.clone(),
        gram,
        eigenvalues,
        transform,
        inverse,
        rep,
    })
}

fn diag(values: &[f64], power: f64) -> Vec<C64> {
    let n = values.len();
    let mut out = vec![ZERO; n * n];
    for (i, v) in values.iter().enumerate() {
        out[i * n + i] = C64::new(v.powf(power), 0.0);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertNorms {
    /// `θ(x* x)^½`, the length of `x` as a GNS vector.
    pub star_first: f64,
    /// `θ(x x*)^½`.
    pub star_last: f64,
    /// `|θ(x* x) − θ(x x*)|`.
    pub discrepancy: f64,
}

pub fn hilbert_norms(g: &GnsData, x: &CTensor) -> Result<HilbertNorms> {
    let first = g.inner(x, x)?.re;
    let xs = g.spec.star(x)?;
    let last = g.inner(&xs, &xs)?.re;
    Ok(HilbertNorms {
        star_first: first.max(0.0).sqrt(),
        star_last: last.max(0.0).sqrt(),
        discrepancy: (first - last).abs(),
    })
}

/// `θ(x x*)^½`.
pub fn vector_norm(g: &GnsData, x: &CTensor) -> Result<f64> {
    Ok(hilbert_norms(g, x)?.star_last)
}

/// Operator norm of `π(x)`.
pub fn element_operator_norm(g: &GnsData, x: &CTensor) -> Result<f64> {
    operator_norm(&g.represent(x)?)
}

fn diff(a: &CTensor, b: &CTensor) -> f64 {
    max_abs_diff(a, b).expect("verifier compares tensors of equal shape")
}

/// The C*-identity on `samples` seeded random elements, and the
/// *-representation properties of `π` on the basis.
pub fn verify_cstar_identity(g: &GnsData, samples: usize, seed: u64, tol: &Tolerance) -> AxiomReport {
    check_cstar_identity(g, samples, seed, tol).expect("GNS shapes fixed at construction")
}

fn check_cstar_identity(g: &GnsData, samples: usize, seed: u64, tol: &Tolerance) -> Result<AxiomReport> {
    let h = &g.spec;
    let n = h.dim();
    let thr = tol.abs;
    let id = CTensor::identity(n)?;
    let mut r = AxiomReport::new();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_rel: f64 = 0.0;
    let mut worst_bound: f64 = 0.0;
    let unit_len = hilbert_norms(g, h.unit())?.star_first;
    for _ in 0..samples {
        let x = gaussian_vector(&mut rng, n);
        let px = g.represent(&x)?;
        let norm = operator_norm(&px)?;
        let square = operator_norm(&px.adjoint()?.matmul(&px)?)?;
        if norm > 0.0 {
            worst_rel = worst_rel.max((square - norm * norm).abs() / (norm * norm));
        }
        let vector = hilbert_norms(g, &x)?.star_first / unit_len;
        worst_bound = worst_bound.max(shortfall(norm, vector - thr));
    }
    r.push_residual("cstar_identity", worst_rel, tol.rel);
    r.push("norm_dominates_vector_norm", worst_bound, worst_bound == 0.0);

    // π(e_i) π(e_j) = Σ_k mult[i, j, k] π(e_k)
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = g.rep[i].matmul(&g.rep[j])?;
            let rhs = g.represent(&h.mult().slice0(i).slice0(j))?;
            worst = worst.max(diff(&lhs, &rhs));
        }
    }
    r.push_residual("rep_multiplicative", worst, thr);

    let mut worst: f64 = 0.0;
    for i in 0..n {
        let of_star = g.represent(&h.star(&h.basis(i))?)?;
        worst = worst.max(diff(&of_star, &g.rep[i].adjoint()?));
    }
    r.push_residual("rep_star", worst, thr);
    r.push_residual("rep_unital", diff(&g.represent(h.unit())?, &id), thr);

    let k = g.gram.transpose()?;
    let ortho = g.inverse.adjoint()?.matmul(&k)?.matmul(&g.inverse)?;
    r.push_residual("orthonormality", diff(&ortho, &id), thr);

    // columns vec(π(e_i)); trivial kernel means π is faithful
    let mut stacked = CTensor::zeros(&[n * n, n])?;
    for (i, rep) in g.rep.iter().enumerate() {
        for (row, z) in rep.data().iter().enumerate() {
            stacked.set(&[row, i], *z);
        }
    }
    let s = singular_values(&stacked)?;
    let ratio = s.last().copied().unwrap_or(0.0) / s.first().copied().unwrap_or(1.0);
    r.push("faithful", shortfall(ratio, tol.rel), ratio > tol.rel);

    // θ(e_j* e_i) against θ(e_i e_j*)
    let phi = h.integral().ok_or(Error::MissingIntegral)?;
    let form = contract(h.mult(), phi, &[(2, 0)])?; // θ(e_a e_b)
    let swapped = contract(&form, h.star_matrix(), &[(1, 0)])?; // [i, j] = θ(e_i e_j*)
    r.push_residual("trace_property", diff(&g.gram, &swapped), thr);
    Ok(r)
}

/// Norm identities between the double and its factors: the embeddings are
/// isometric and elementary tensors have product norm.
pub fn verify_isometry(d: &DoubleSpec, ga: &GnsData, gb: &GnsData, gd: &GnsData, tol: &Tolerance) -> AxiomReport {
    check_isometry(d, ga, gb, gd, tol).expect("GNS data matches the double's factors")
}

fn rel_dev(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

fn check_isometry(d: &DoubleSpec, ga: &GnsData, gb: &GnsData, gd: &GnsData, tol: &Tolerance) -> Result<AxiomReport> {
    let (na, nb) = (ga.spec.dim(), gb.spec.dim());
    let mut avecs: Vec<CTensor> = (0..na).map(|i| ga.spec.basis(i)).collect();
    let mut bvecs: Vec<CTensor> = (0..nb).map(|j| gb.spec.basis(j)).collect();
    let basis_a = avecs.len();
    let basis_b = bvecs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(ISOMETRY_SEED);
    for _ in 0..ISOMETRY_SAMPLES {
        avecs.push(gaussian_vector(&mut rng, na));
        bvecs.push(gaussian_vector(&mut rng, nb));
    }

    let norms_a = avecs.iter().map(|a| vector_norm(ga, a)).collect::<Result<Vec<_>>>()?;
    let norms_b = bvecs.iter().map(|b| vector_norm(gb, b)).collect::<Result<Vec<_>>>()?;
    let mut worst_a: f64 = 0.0;
    for (a, &na_norm) in avecs.iter().zip(&norms_a) {
        worst_a = worst_a.max(rel_dev(vector_norm(gd, &d.include_a(a)?)?, na_norm));
    }
    let mut worst_b: f64 = 0.0;
    for (b, &nb_norm) in bvecs.iter().zip(&norms_b) {
        worst_b = worst_b.max(rel_dev(vector_norm(gd, &d.include_b(b)?)?, nb_norm));
    }
    let mut worst_prod: f64 = 0.0;
    let mut product = |i: usize, j: usize| -> Result<()> {
        let x = d.elementary(&avecs[i], &bvecs[j])?;
        worst_prod = worst_prod.max(rel_dev(vector_norm(gd, &x)?, norms_a[i] * norms_b[j]));
        Ok(())
    };
    for i in 0..basis_a {
        for j in 0..basis_b {
            product(i, j)?;
        }
    }
    for s in 0..ISOMETRY_SAMPLES {
        product(basis_a + s, basis_b + s)?;
    }
    let mut r = AxiomReport::new();
    r.push_residual("isometry_a", worst_a, tol.rel);
    r.push_residual("isometry_b", worst_b, tol.rel);
    r.push_residual("product_norm", worst_prod, tol.rel);
    Ok(r)
}
