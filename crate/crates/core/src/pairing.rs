//! Bilinear pairings `<a, b>` between two Hopf *-algebras, the four actions
//! they induce, and residual checks for the pairing axioms and the action
//! identities.

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::hopf::{dualize, function_algebra, group_algebra, HopfSpec};
use crate::report::AxiomReport;
use crate::tensor::{contract, max_abs_diff, singular_values, tensor_product, try_inverse, CTensor, Tolerance};

/// Two Hopf algebras and the matrix `P[i, j] = <a_i, b_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingSpec {
    a: HopfSpec,
    b: HopfSpec,
    p: CTensor,
}

impl PairingSpec {
    pub fn new(a: HopfSpec, b: HopfSpec, p: CTensor) -> Result<Self> {
        if p.shape() != [a.dim(), b.dim()] {
            return Err(Error::ShapeMismatch(format!(
                "pairing matrix has shape {:?}, expected [{}, {}]",
                p.shape(),
                a.dim(),
                b.dim()
            )));
        }
        Ok(Self { a, b, p })
    }

    pub fn a(&self) -> &HopfSpec {
        &self.a
    }

    pub fn b(&self) -> &HopfSpec {
        &self.b
    }

    pub fn matrix(&self) -> &CTensor {
        &self.p
    }

    pub fn into_parts(self) -> (HopfSpec, HopfSpec, CTensor) {
        (self.a, self.b, self.p)
    }

    /// The same form read with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
            p: self.p.transpose().expect("pairing matrix"),
        }
    }

    /// `<x, y>` for coordinate vectors.
    pub fn eval(&self, x: &CTensor, y: &CTensor) -> Result<crate::tensor::C64> {
        let px = contract(x, &self.p, &[(0, 0)])?;
        Ok(contract(&px, y, &[(0, 0)])?.data()[0])
    }

    /// Attaches solved integrals to either side that lacks one.
    pub fn ensure_integrals(self) -> Result<Self> {
        Ok(Self {
            a: self.a.ensure_integral()?,
            b: self.b.ensure_integral()?,
            p: self.p,
        })
    }

    pub fn with_matrix(&self, p: CTensor) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), p)
    }
}

/// Evaluation pairing between `ℂ[G]` (side A) and `F(G)` (side B).
pub fn canonical_pairing(g: &GroupTable) -> PairingSpec {
    let n = g.order();
    PairingSpec::new(group_algebra(g), function_algebra(g), CTensor::identity(n).unwrap())
        .expect("canonical pairing shapes")
}

/// `H` paired with its dual by evaluation; the matrix is the identity.
pub fn dual_pairing(h: &HopfSpec) -> Result<PairingSpec> {
    let d = dualize(h)?;
    let n = h.dim();
    PairingSpec::new(h.clone(), d, CTensor::identity(n)?)
}

fn diff(a: &CTensor, b: &CTensor) -> f64 {
    max_abs_diff(a, b).expect("verifier compares tensors of equal shape")
}

/// The axioms of a pairing of Hopf *-algebras, checked on all basis tuples,
/// plus the mirrored star axiom.
pub fn verify_pairing(pr: &PairingSpec, tol: &Tolerance) -> AxiomReport {
    check_pairing(pr, tol).expect("pairing shapes validated at construction")
}

fn check_pairing(pr: &PairingSpec, tol: &Tolerance) -> Result<AxiomReport> {
    let (a, b, p) = (&pr.a, &pr.b, &pr.p);
    let thr = tol.abs;
    let mut r = AxiomReport::new();

    // <Δ(a_i), b_j ⊗ b_k> vs <a_i, b_j b_k>, as [i, j, k]
    let lhs = contract(&contract(a.comult(), p, &[(1, 0)])?, p, &[(1, 0)])?;
    let rhs = contract(b.mult(), p, &[(2, 1)])?.permute(&[2, 0, 1])?; // [j, k, i] -> [i, j, k]
    r.push_residual("coproduct_a_vs_product_b", diff(&lhs, &rhs), thr);

    // <a_i ⊗ a_j, Δ(b_k)> vs <a_i a_j, b_k>, as [i, j, k]
    let lhs = contract(&contract(p, b.comult(), &[(1, 1)])?, p, &[(2, 1)])?; // [i, k, j]
    let lhs = lhs.permute(&[0, 2, 1])?;
    let rhs = contract(a.mult(), p, &[(2, 0)])?;
    r.push_residual("product_a_vs_coproduct_b", diff(&lhs, &rhs), thr);

    // <a*, b> = conj(<a, S_B(b)*>)
    let lhs = a.star_matrix().transpose()?.matmul(p)?;
    let rhs = p.matmul(&b.star_matrix().matmul(&b.antipode().conj())?)?.conj();
    r.push_residual("star_compat", diff(&lhs, &rhs), thr);

    let lhs = p.matmul(b.unit())?;
    r.push_residual("unit_b_counit_a", diff(&lhs, a.counit()), thr);
    let lhs = p.transpose()?.matmul(a.unit())?;
    r.push_residual("unit_a_counit_b", diff(&lhs, b.counit()), thr);

    // <S_A a, b> = <a, S_B b>
    let lhs = a.antipode().transpose()?.matmul(p)?;
    let rhs = p.matmul(b.antipode())?;
    r.push_residual("antipode_compat", diff(&lhs, &rhs), thr);

    // <a, b*> = conj(<S_A(a)*, b>)
    let lhs = p.matmul(b.star_matrix())?;
    let rhs = a
        .star_matrix()
        .matmul(&a.antipode().conj())?
        .transpose()?
        .matmul(p)?
        .conj();
    r.push_residual("star_compat_mirror", diff(&lhs, &rhs), thr);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nondegeneracy {
    pub rank: usize,
    pub min_singular: f64,
    pub nondegenerate: bool,
}

/// SVD rank of the pairing matrix at `tol.rel` times its largest singular value.
pub fn nondegeneracy(pr: &PairingSpec, tol: &Tolerance) -> Nondegeneracy {
    let s = singular_values(&pr.p).expect("pairing matrix");
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&v| v > tol.rel * smax && v > 0.0).count();
    let (na, nb) = (pr.a.dim(), pr.b.dim());
    Nondegeneracy {
        rank,
        min_singular: s.last().copied().unwrap_or(0.0),
        nondegenerate: na == nb && rank == na,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// `a ▷ b = Σ b_(1) <a, b_(2)>`
    AOnBLeft,
    /// `b ◁ a = Σ <a, b_(1)> b_(2)`
    AOnBRight,
    /// `b ▷ a = Σ a_(1) <a_(2), b>`
    BOnALeft,
    /// `a ◁ b = Σ <a_(1), b> a_(2)`
    BOnARight,
}

/// Structure tensors of the four actions, each indexed `[actor, target, output]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionTensors {
    pub a_on_b_left: CTensor,
    pub a_on_b_right: CTensor,
    pub b_on_a_left: CTensor,
    pub b_on_a_right: CTensor,
}

impl ActionTensors {
    pub fn new(pr: &PairingSpec) -> Result<Self> {
        let (a, b, p) = (&pr.a, &pr.b, &pr.p);
        Ok(Self {
            a_on_b_left: contract(p, b.comult(), &[(1, 2)])?,
            a_on_b_right: contract(p, b.comult(), &[(1, 1)])?,
            b_on_a_left: contract(a.comult(), p, &[(2, 0)])?.permute(&[2, 0, 1])?,
            b_on_a_right: contract(a.comult(), p, &[(1, 0)])?.permute(&[2, 0, 1])?,
        })
    }

    pub fn get(&self, which: Action) -> &CTensor {
        match which {
            Action::AOnBLeft => &self.a_on_b_left,
            Action::AOnBRight => &self.a_on_b_right,
            Action::BOnALeft => &self.b_on_a_left,
            Action::BOnARight => &self.b_on_a_right,
        }
    }

    pub fn get_mut(&mut self, which: Action) -> &mut CTensor {
        match which {
            Action::AOnBLeft => &mut self.a_on_b_left,
            Action::AOnBRight => &mut self.a_on_b_right,
            Action::BOnALeft => &mut self.b_on_a_left,
            Action::BOnARight => &mut self.b_on_a_right,
        }
    }

    pub fn apply(&self, which: Action, actor: &CTensor, target: &CTensor) -> Result<CTensor> {
        let t = self.get(which);
        if actor.shape() != [t.shape()[0]] || target.shape() != [t.shape()[1]] {
            return Err(Error::ShapeMismatch(format!(
                "action {which:?} needs actor of length {} and target of length {}",
                t.shape()[0],
                t.shape()[1]
            )));
        }
        let partial = contract(actor, t, &[(0, 0)])?;
        contract(target, &partial, &[(0, 0)])
    }
}

/// One of the four actions applied to coordinate vectors.
pub fn act(pr: &PairingSpec, which: Action, actor: &CTensor, target: &CTensor) -> Result<CTensor> {
    let (actor_dim, target_dim) = match which {
        Action::AOnBLeft | Action::AOnBRight => (pr.a.dim(), pr.b.dim()),
        Action::BOnALeft | Action::BOnARight => (pr.b.dim(), pr.a.dim()),
    };
    if actor.shape() != [actor_dim] || target.shape() != [target_dim] {
        return Err(Error::ShapeMismatch(format!(
            "action {which:?} needs actor of length {actor_dim} and target of length {target_dim}"
        )));
    }
    let (side_target, w) = match which {
        Action::AOnBLeft | Action::AOnBRight => (&pr.b, contract(actor, &pr.p, &[(0, 0)])?),
        Action::BOnALeft | Action::BOnARight => (&pr.a, pr.p.matmul(actor)?),
    };
    let d = side_target.coproduct(target)?;
    match which {
        Action::AOnBLeft | Action::BOnALeft => contract(&d, &w, &[(1, 0)]),
        Action::AOnBRight | Action::BOnARight => contract(&d, &w, &[(0, 0)]),
    }
}

/// Module laws, the adjointness identities between actions and products,
/// and bimodule compatibility.
pub fn verify_actions(pr: &PairingSpec, tol: &Tolerance) -> AxiomReport {
    let t = ActionTensors::new(pr).expect("pairing shapes validated at construction");
    verify_actions_with(pr, &t, tol)
}

/// [`verify_actions`] against caller-supplied action tensors.
pub fn verify_actions_with(pr: &PairingSpec, t: &ActionTensors, tol: &Tolerance) -> AxiomReport {
    check_actions(pr, t, tol).expect("action tensor shapes")
}

fn check_actions(pr: &PairingSpec, t: &ActionTensors, tol: &Tolerance) -> Result<AxiomReport> {
    let (a, b, p) = (&pr.a, &pr.b, &pr.p);
    let (al, ar, bl, br) = (&t.a_on_b_left, &t.a_on_b_right, &t.b_on_a_left, &t.b_on_a_right);
    let thr = tol.abs;
    let mut r = AxiomReport::new();

    // left modules: (xx') ▷ y = x ▷ (x' ▷ y), as [x, x', y, out]
    let lhs = contract(a.mult(), al, &[(2, 0)])?;
    let rhs = contract(al, al, &[(2, 1)])?.permute(&[2, 0, 1, 3])?;
    r.push_residual("module_a_on_b_left", diff(&lhs, &rhs), thr);
    let lhs = contract(b.mult(), bl, &[(2, 0)])?;
    let rhs = contract(bl, bl, &[(2, 1)])?.permute(&[2, 0, 1, 3])?;
    r.push_residual("module_b_on_a_left", diff(&lhs, &rhs), thr);
    // right modules: y ◁ (xx') = (y ◁ x) ◁ x', as [x, x', y, out]
    let lhs = contract(a.mult(), ar, &[(2, 0)])?;
    let rhs = contract(ar, ar, &[(2, 1)])?.permute(&[0, 2, 1, 3])?;
    r.push_residual("module_a_on_b_right", diff(&lhs, &rhs), thr);
    let lhs = contract(b.mult(), br, &[(2, 0)])?;
    let rhs = contract(br, br, &[(2, 1)])?.permute(&[0, 2, 1, 3])?;
    r.push_residual("module_b_on_a_right", diff(&lhs, &rhs), thr);

    let mut unital: f64 = 0.0;
    for (unit, tensor) in [(a.unit(), al), (a.unit(), ar), (b.unit(), bl), (b.unit(), br)] {
        let m = contract(unit, tensor, &[(0, 0)])?;
        unital = unital.max(diff(&m, &CTensor::identity(m.shape()[0])?));
    }
    r.push_residual("action_unital", unital, thr);

    // <b ▷ a, b'> = <a, b'b>, as [b, a, b']
    let lhs = contract(bl, p, &[(2, 0)])?;
    let rhs = contract(b.mult(), p, &[(2, 1)])?.permute(&[1, 2, 0])?;
    r.push_residual("adjoint_b_on_a_left", diff(&lhs, &rhs), thr);
    // <a ◁ b, b'> = <a, bb'>, as [b, a, b']
    let lhs = contract(br, p, &[(2, 0)])?;
    let rhs = contract(b.mult(), p, &[(2, 1)])?.permute(&[0, 2, 1])?;
    r.push_residual("adjoint_b_on_a_right", diff(&lhs, &rhs), thr);
    // <a, a' ▷ b> = <aa', b>, as [a, a', b]
    let lhs = contract(p, al, &[(1, 2)])?;
    let rhs = contract(a.mult(), p, &[(2, 0)])?;
    r.push_residual("adjoint_a_on_b_left", diff(&lhs, &rhs), thr);
    // <a, b ◁ a'> = <a'a, b>, as [a, a', b]
    let lhs = contract(p, ar, &[(1, 2)])?;
    let rhs = contract(a.mult(), p, &[(2, 0)])?.permute(&[1, 0, 2])?;
    r.push_residual("adjoint_a_on_b_right", diff(&lhs, &rhs), thr);

    // (b1 ▷ a) ◁ b2 = b1 ▷ (a ◁ b2), as [b1, a, b2, out]
    let lhs = contract(bl, br, &[(2, 1)])?;
    let rhs = contract(br, bl, &[(2, 1)])?.permute(&[2, 1, 0, 3])?;
    r.push_residual("bimodule_a", diff(&lhs, &rhs), thr);
    // (a1 ▷ b) ◁ a2 = a1 ▷ (b ◁ a2), as [a1, b, a2, out]
    let lhs = contract(al, ar, &[(2, 1)])?;
    let rhs = contract(ar, al, &[(2, 1)])?.permute(&[2, 1, 0, 3])?;
    r.push_residual("bimodule_b", diff(&lhs, &rhs), thr);
    Ok(r)
}

/// Matrix of `x ⊗ y ↦ (x ⊗ 1) Δ(y)` on `H ⊗ H`.
pub fn galois_t2(h: &HopfSpec) -> Result<CTensor> {
    let n = h.dim();
    // [x, r, y, q] = Σ_p mult[x, p, r] comult[y, p, q]
    let t = contract(h.mult(), h.comult(), &[(1, 1)])?;
    t.permute(&[1, 3, 0, 2])?.reshape(&[n * n, n * n])
}

/// Matrix of `x ⊗ y ↦ Δ(x) (1 ⊗ y)` on `H ⊗ H`.
pub fn galois_t1(h: &HopfSpec) -> Result<CTensor> {
    let n = h.dim();
    // [x, p, y, r] = Σ_q comult[x, p, q] mult[q, y, r]
    let t = contract(h.comult(), h.mult(), &[(2, 0)])?;
    t.permute(&[1, 3, 0, 2])?.reshape(&[n * n, n * n])
}

/// Duality between the Galois map `T₂` of `A` and `T₁` of `B`, and between
/// their inverses, under the pairing `<a ⊗ a', b ⊗ b'> = <a, b><a', b'>`.
pub fn verify_galois(pr: &PairingSpec, tol: &Tolerance) -> Result<AxiomReport> {
    let (na, nb) = (pr.a.dim(), pr.b.dim());
    let t2 = galois_t2(&pr.a)?;
    let t1 = galois_t1(&pr.b)?;
    let t2_inv = try_inverse(&t2, tol.rel)?.ok_or(Error::SingularGaloisMap("T2"))?;
    let t1_inv = try_inverse(&t1, tol.rel)?.ok_or(Error::SingularGaloisMap("T1"))?;
    let pp = tensor_product(&pr.p, &pr.p)?
        .permute(&[0, 2, 1, 3])?
        .reshape(&[na * na, nb * nb])?;
    let mut r = AxiomReport::new();
    let lhs = t2.transpose()?.matmul(&pp)?;
    let rhs = pp.matmul(&t1)?;
    r.push_residual("galois_duality", diff(&lhs, &rhs), tol.abs);
    let lhs = t2_inv.transpose()?.matmul(&pp)?;
    let rhs = pp.matmul(&t1_inv)?;
    r.push_residual("galois_inverse_duality", diff(&lhs, &rhs), tol.abs);
    Ok(r)
}
