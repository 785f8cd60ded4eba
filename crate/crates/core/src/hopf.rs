//! Finite-dimensional Hopf *-algebras as structure constants.
//!
//! Conventions, fixed for the whole crate and the file format:
//!
//! * `mult[i, j, k]` is the coefficient of `e_k` in `e_i e_j`.
//! * `comult[i, j, k]` is the coefficient of `e_j ⊗ e_k` in `Δ(e_i)`.
//! * Linear maps act on coordinate columns: `antipode[j, i]` is the
//!   coefficient of `e_j` in `S(e_i)`.
//! * The star is antilinear and stored as a matrix `J` with
//!   `coords(x*) = J · conj(coords(x))`, so column `i` of `J` is `e_i*`.
//! * Integrals are normalized so that `φ(1) = 1`.

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::tensor::{contract, null_space, CTensor, Tolerance, C64, ONE};

/// Relative singular-value cut used to decide the integral's null space.
pub const INTEGRAL_NULL_THRESHOLD: f64 = 1e-8;

/// Raw structure tensors, used to assemble or take apart a [`HopfSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct HopfParts {
    pub label: Option<String>,
    pub mult: CTensor,
    pub unit: CTensor,
    pub comult: CTensor,
    pub counit: CTensor,
    pub antipode: CTensor,
    pub star: CTensor,
    pub integral: Option<CTensor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfSpec {
    dim: usize,
    parts: HopfParts,
}

fn expect_shape(name: &str, t: &CTensor, shape: &[usize]) -> Result<()> {
    if t.shape() != shape {
        return Err(Error::ShapeMismatch(format!(
            "{name} has shape {:?}, expected {shape:?}",
            t.shape()
        )));
    }
    Ok(())
}

impl HopfSpec {
    /// Validates shapes only; the algebraic axioms are the verifier's job.
    pub fn from_parts(parts: HopfParts) -> Result<Self> {
        let dim = parts.unit.shape().first().copied().unwrap_or(0);
        if parts.unit.rank() != 1 || dim == 0 {
            return Err(Error::ShapeMismatch(format!(
                "unit must be a nonempty vector, got shape {:?}",
                parts.unit.shape()
            )));
        }
        let n = dim;
        expect_shape("mult", &parts.mult, &[n, n, n])?;
        expect_shape("comult", &parts.comult, &[n, n, n])?;
        expect_shape("counit", &parts.counit, &[n])?;
        expect_shape("antipode", &parts.antipode, &[n, n])?;
        expect_shape("star", &parts.star, &[n, n])?;
        if let Some(phi) = &parts.integral {
            expect_shape("integral", phi, &[n])?;
        }
        Ok(Self { dim, parts })
    }

    pub fn into_parts(self) -> HopfParts {
        self.parts
    }

    pub fn parts(&self) -> &HopfParts {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Option<&str> {
        self.parts.label.as_deref()
    }

    pub fn mult(&self) -> &CTensor {
        &self.parts.mult
    }

    pub fn unit(&self) -> &CTensor {
        &self.parts.unit
    }

    pub fn comult(&self) -> &CTensor {
        &self.parts.comult
    }

    pub fn counit(&self) -> &CTensor {
        &self.parts.counit
    }

    pub fn antipode(&self) -> &CTensor {
        &self.parts.antipode
    }

    pub fn star_matrix(&self) -> &CTensor {
        &self.parts.star
    }

    pub fn integral(&self) -> Option<&CTensor> {
        self.parts.integral.as_ref()
    }

    pub fn with_integral(mut self, integral: CTensor) -> Result<Self> {
        expect_shape("integral", &integral, &[self.dim])?;
        self.parts.integral = Some(integral);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.parts.label = Some(label.into());
        self
    }

    /// Attaches the solved integral when none is present.
    pub fn ensure_integral(self) -> Result<Self> {
        if self.integral().is_some() {
            return Ok(self);
        }
        let phi = find_invariant_integral(&self)?;
        self.with_integral(phi)
    }

    /// Largest modulus among all structure constants.
    pub fn max_modulus(&self) -> f64 {
        let p = &self.parts;
        [&p.mult, &p.unit, &p.comult, &p.counit, &p.antipode, &p.star]
            .into_iter()
            .chain(p.integral.as_ref())
            .map(CTensor::max_abs)
            .fold(0.0, f64::max)
    }

    /// Default tolerance scaled to the constants of `specs`.
    pub fn tolerance_for(specs: &[&HopfSpec]) -> Tolerance {
        Tolerance::scaled(specs.iter().map(|h| h.max_modulus()).fold(0.0, f64::max))
    }

    fn check_vector(&self, x: &CTensor) -> Result<()> {
        if x.shape() != [self.dim] {
            return Err(Error::ShapeMismatch(format!(
                "expected coordinates of length {}, got shape {:?}",
                self.dim,
                x.shape()
            )));
        }
        Ok(())
    }

    pub fn basis(&self, i: usize) -> CTensor {
        CTensor::basis(self.dim, i).expect("basis index within dimension")
    }

    pub fn multiply(&self, x: &CTensor, y: &CTensor) -> Result<CTensor> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        let xm = contract(x, &self.parts.mult, &[(0, 0)])?;
        contract(y, &xm, &[(0, 0)])
    }

    /// Matrix of `y ↦ x y` on coordinate columns.
    pub fn left_mult_matrix(&self, x: &CTensor) -> Result<CTensor> {
        self.check_vector(x)?;
        contract(x, &self.parts.mult, &[(0, 0)])?.transpose()
    }

    /// Matrix of `y ↦ y x` on coordinate columns.
    pub fn right_mult_matrix(&self, x: &CTensor) -> Result<CTensor> {
        self.check_vector(x)?;
        contract(x, &self.parts.mult, &[(0, 1)])?.transpose()
    }

    pub fn star(&self, x: &CTensor) -> Result<CTensor> {
        self.check_vector(x)?;
        self.parts.star.matmul(&x.conj())
    }

    pub fn apply_antipode(&self, x: &CTensor) -> Result<CTensor> {
        self.check_vector(x)?;
        self.parts.antipode.matmul(x)
    }

    pub fn apply_counit(&self, x: &CTensor) -> Result<C64> {
        self.check_vector(x)?;
        Ok(dot(&self.parts.counit, x))
    }

    pub fn apply_integral(&self, x: &CTensor) -> Result<C64> {
        self.check_vector(x)?;
        let phi = self.integral().ok_or(Error::MissingIntegral)?;
        Ok(dot(phi, x))
    }

    /// `Δ(x)` as an `n × n` tensor.
    pub fn coproduct(&self, x: &CTensor) -> Result<CTensor> {
        self.check_vector(x)?;
        contract(x, &self.parts.comult, &[(0, 0)])
    }

    /// `Δ^(legs-1)(x)` as a rank-`legs` tensor, always expanding the leftmost leg.
    pub fn iterated_coproduct(&self, x: &CTensor, legs: usize) -> Result<CTensor> {
        self.check_vector(x)?;
        if !(1..=4).contains(&legs) {
            return Err(Error::ShapeMismatch(format!("legs must be in 1..=4, got {legs}")));
        }
        let mut t = x.clone();
        for r in 1..legs {
            // contract leading leg with Δ's input, giving [rest.., j, k]
            let expanded = contract(&t, &self.parts.comult, &[(0, 0)])?;
            let mut perm = vec![r - 1, r];
            perm.extend(0..r - 1);
            t = expanded.permute(&perm)?;
        }
        Ok(t)
    }

    /// Same as [`iterated_coproduct`](Self::iterated_coproduct) but expanding
    /// the rightmost leg each time.
    pub fn iterated_coproduct_right(&self, x: &CTensor, legs: usize) -> Result<CTensor> {
        self.check_vector(x)?;
        if !(1..=4).contains(&legs) {
            return Err(Error::ShapeMismatch(format!("legs must be in 1..=4, got {legs}")));
        }
        let mut t = x.clone();
        for r in 1..legs {
            t = contract(&t, &self.parts.comult, &[(r - 1, 0)])?;
        }
        Ok(t)
    }

    /// Structure tensor of `Δ^(legs-1)`: axis 0 is the input basis index,
    /// the remaining `legs` axes are the Sweedler legs in order.
    pub fn sweedler_tensor(&self, legs: usize) -> Result<CTensor> {
        match legs {
            1 => CTensor::identity(self.dim),
            2 => Ok(self.parts.comult.clone()),
            3 => {
                // Σ_m comult[i, m, z] comult[m, x, y] -> [i, z, x, y]
                let t = contract(&self.parts.comult, &self.parts.comult, &[(1, 0)])?;
                t.permute(&[0, 2, 3, 1])
            }
            _ => Err(Error::ShapeMismatch(format!("sweedler tensor for {legs} legs"))),
        }
    }

    /// Gram matrix `G[i, j] = φ(e_j* e_i)`.
    pub fn gram_matrix(&self) -> Result<CTensor> {
        let phi = self.integral().ok_or(Error::MissingIntegral)?;
        let n = self.dim;
        // φ(x y) as a bilinear form: F[a, b] = Σ_k mult[a, b, k] φ_k
        let form = contract(&self.parts.mult, phi, &[(2, 0)])?;
        // G[i, j] = Σ_a J[a, j] F[a, i]
        let g = contract(&self.parts.star, &form, &[(0, 0)])?; // [j, i]
        let g = g.transpose()?;
        debug_assert_eq!(g.shape(), &[n, n]);
        Ok(g)
    }
}

pub(crate) fn dot(a: &CTensor, b: &CTensor) -> C64 {
    a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum()
}

fn perm_matrix(n: usize, f: impl Fn(usize) -> usize) -> CTensor {
    let mut m = CTensor::zeros(&[n, n]).expect("permutation matrix");
    for i in 0..n {
        m.set(&[f(i), i], ONE);
    }
    m
}

fn label_for(g: &GroupTable, prefix: &str) -> Option<String> {
    g.label().map(|l| format!("{prefix}({l})"))
}

/// The group algebra ℂ[G]: grouplike basis, `g* = g⁻¹`, `φ(g) = [g = e]`.
pub fn group_algebra(g: &GroupTable) -> HopfSpec {
    let n = g.order();
    let mut mult = CTensor::zeros(&[n, n, n]).expect("group algebra size");
    let mut comult = CTensor::zeros(&[n, n, n]).expect("group algebra size");
    for a in 0..n {
        for b in 0..n {
            mult.set(&[a, b, g.mul(a, b)], ONE);
        }
        comult.set(&[a, a, a], ONE);
    }
    let inv = perm_matrix(n, |i| g.inverse(i));
    HopfSpec::from_parts(HopfParts {
        label: label_for(g, "C"),
        mult,
        unit: CTensor::basis(n, g.identity()).unwrap(),
        comult,
        counit: CTensor::real_vector(&vec![1.0; n]).unwrap(),
        antipode: inv.clone(),
        star: inv,
        integral: Some(CTensor::basis(n, g.identity()).unwrap()),
    })
    .expect("group algebra shapes")
}

/// The function algebra F(G) on the basis of point indicators `δ_g`,
/// with integral `φ(δ_g) = 1/|G|`.
pub fn function_algebra(g: &GroupTable) -> HopfSpec {
    let n = g.order();
    let mut mult = CTensor::zeros(&[n, n, n]).expect("function algebra size");
    let mut comult = CTensor::zeros(&[n, n, n]).expect("function algebra size");
    for a in 0..n {
        mult.set(&[a, a, a], ONE);
        for b in 0..n {
            comult.set(&[g.mul(a, b), a, b], ONE);
        }
    }
    HopfSpec::from_parts(HopfParts {
        label: label_for(g, "F"),
        mult,
        unit: CTensor::real_vector(&vec![1.0; n]).unwrap(),
        comult,
        counit: CTensor::basis(n, g.identity()).unwrap(),
        antipode: perm_matrix(n, |i| g.inverse(i)),
        star: CTensor::identity(n).unwrap(),
        integral: Some(CTensor::real_vector(&vec![1.0 / n as f64; n]).unwrap()),
    })
    .expect("function algebra shapes")
}

/// The dual Hopf *-algebra on the dual basis (functional `i` is dual to
/// basis element `i`). The dual integral is solved, not transported.
pub fn dualize(h: &HopfSpec) -> Result<HopfSpec> {
    let p = h.parts();
    // (f_i f_j)(e_k) = comult[k, i, j]
    let mult = p.comult.permute(&[1, 2, 0])?;
    // Δ(f_i)(e_j ⊗ e_k) = f_i(e_j e_k) = mult[j, k, i]
    let comult = p.mult.permute(&[2, 0, 1])?;
    let antipode = p.antipode.transpose()?;
    // f*(a) = conj(f(S(a)*))  =>  J' = (conj(J) S)^T
    let star = p.star.conj().matmul(&p.antipode)?.transpose()?;
    let spec = HopfSpec::from_parts(HopfParts {
        label: h.label().map(|l| format!("dual({l})")),
        mult,
        unit: p.counit.clone(),
        comult,
        counit: p.unit.clone(),
        antipode,
        star,
        integral: None,
    })?;
    let phi = find_invariant_integral(&spec)?;
    spec.with_integral(phi)
}

/// Solves for the functional with left and right invariance and `φ∘S = φ`,
/// normalized to `φ(1) = 1`.
pub fn find_invariant_integral(h: &HopfSpec) -> Result<CTensor> {
    let n = h.dim();
    let comult = h.comult();
    let unit = h.unit().data();
    let s = h.antipode();
    let mut rows: Vec<C64> = Vec::with_capacity((2 * n * n + n) * n);
    // left: Σ_j comult[i, j, k] φ_j - unit[k] φ_i = 0
    for i in 0..n {
        for k in 0..n {
            let start = rows.len();
            rows.extend((0..n).map(|j| comult.get(&[i, j, k])));
            rows[start + i] -= unit[k];
        }
    }
    // right: Σ_k comult[i, j, k] φ_k - unit[j] φ_i = 0
    for i in 0..n {
        for j in 0..n {
            let start = rows.len();
            rows.extend((0..n).map(|k| comult.get(&[i, j, k])));
            rows[start + i] -= unit[j];
        }
    }
    // antipode: Σ_j S[j, i] φ_j - φ_i = 0
    for i in 0..n {
        let start = rows.len();
        rows.extend((0..n).map(|j| s.get(&[j, i])));
        rows[start + i] -= ONE;
    }
    let m = CTensor::from_vec(&[2 * n * n + n, n], rows)?;
    let ns = null_space(&m, INTEGRAL_NULL_THRESHOLD)?;
    match ns.basis.len() {
        0 => {
            let smax = ns.singular_values.first().copied().unwrap_or(0.0);
            let smin = ns.singular_values.last().copied().unwrap_or(0.0);
            Err(Error::NoIntegral {
                ratio: if smax > 0.0 { smin / smax } else { 0.0 },
            })
        }
        1 => {
            let v = &ns.basis[0];
            let at_unit = dot(v, h.unit());
            if at_unit.norm() <= 1e-12 * v.max_abs().max(1.0) {
                return Err(Error::NormalizationFailure);
            }
            Ok(v.scale(ONE / at_unit))
        }
        dim => Err(Error::AmbiguousIntegral { dim }),
    }
}
