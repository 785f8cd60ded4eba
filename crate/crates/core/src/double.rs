//! The quantum double `D(A, B)` of a non-degenerate pairing, materialized as
//! a plain [`HopfSpec`] on the basis `(a_i, b_j)`, and its verification.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::{gram_spectrum, verify_cstar, verify_hopf_star};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::hopf::{function_algebra, group_algebra, HopfParts, HopfSpec};
use crate::pairing::{nondegeneracy, PairingSpec};
use crate::report::{shortfall, AxiomReport};
use crate::tensor::{
    contract, max_abs_diff, singular_values, tensor_product, unit_gaussian_vector, vstack, CTensor, Tolerance, C64,
    ONE, SIZE_CAP,
};

/// Seed of the random elementary tensors sampled by [`verify_theta`].
pub const THETA_SAMPLE_SEED: u64 = 0x5eed;
pub const THETA_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleSpec {
    h: HopfSpec,
    index_map: Vec<(usize, usize)>,
    embed_a: CTensor,
    embed_b: CTensor,
    theta: CTensor,
    source: PairingSpec,
}

impl DoubleSpec {
    /// Reassembles a double from its Hopf data and the pairing it came from,
    /// for instance after reading an export. The embeddings and index map
    /// are recomputed; the integral of `h` is taken as `θ`.
    pub fn from_parts(h: HopfSpec, source: PairingSpec) -> Result<Self> {
        let (a, b) = (source.a(), source.b());
        let (na, nb) = (a.dim(), b.dim());
        let n = na * nb;
        if h.dim() != n {
            return Err(Error::ShapeMismatch(format!(
                "double of dimension {} does not match factors of dimensions {na} and {nb}",
                h.dim()
            )));
        }
        let theta = h.integral().ok_or(Error::MissingIntegral)?.clone();
        let (embed_a, embed_b) = embeddings(a, b)?;
        Ok(Self {
            h,
            index_map: index_map(na, nb),
            embed_a,
            embed_b,
            theta,
            source,
        })
    }

    pub fn hopf(&self) -> &HopfSpec {
        &self.h
    }

    /// `index_map()[k] = (i, j)` when basis element `k` is `(a_i, b_j)`;
    /// always `k = i * n_B + j`.
    pub fn index_map(&self) -> &[(usize, usize)] {
        &self.index_map
    }

    pub fn index_of(&self, i: usize, j: usize) -> usize {
        i * self.source.b().dim() + j
    }

    /// Row `i` holds the coordinates of `(a_i, 1_B)`.
    pub fn embed_a(&self) -> &CTensor {
        &self.embed_a
    }

    /// Row `j` holds the coordinates of `(1_A, b_j)`.
    pub fn embed_b(&self) -> &CTensor {
        &self.embed_b
    }

    pub fn theta(&self) -> &CTensor {
        &self.theta
    }

    pub fn source(&self) -> &PairingSpec {
        &self.source
    }

    /// Coordinates of the elementary tensor `(a, b)`.
    pub fn elementary(&self, a: &CTensor, b: &CTensor) -> Result<CTensor> {
        let (na, nb) = (self.source.a().dim(), self.source.b().dim());
        if a.shape() != [na] || b.shape() != [nb] {
            return Err(Error::ShapeMismatch(format!(
                "elementary tensor needs lengths {na} and {nb}, got {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        tensor_product(a, b)?.reshape(&[na * nb])
    }

    pub fn include_a(&self, a: &CTensor) -> Result<CTensor> {
        contract(a, &self.embed_a, &[(0, 0)])
    }

    pub fn include_b(&self, b: &CTensor) -> Result<CTensor> {
        contract(b, &self.embed_b, &[(0, 0)])
    }
}

fn index_map(na: usize, nb: usize) -> Vec<(usize, usize)> {
    (0..na).flat_map(|i| (0..nb).map(move |j| (i, j))).collect()
}

fn embeddings(a: &HopfSpec, b: &HopfSpec) -> Result<(CTensor, CTensor)> {
    let (na, nb) = (a.dim(), b.dim());
    let embed_a = tensor_product(&CTensor::identity(na)?, b.unit())?.reshape(&[na, na * nb])?;
    let embed_b = tensor_product(a.unit(), &CTensor::identity(nb)?)?
        .permute(&[1, 0, 2])?
        .reshape(&[nb, na * nb])?;
    Ok((embed_a, embed_b))
}

fn check_capacity(n: usize) -> Result<()> {
    let entries = n.checked_pow(3).unwrap_or(usize::MAX);
    if entries > SIZE_CAP {
        return Err(Error::Capacity { entries, cap: SIZE_CAP });
    }
    Ok(())
}

/// `(a, b)(a', b') = Σ (a a'_(2), b_(2) b') <a'_(1), S_B b_(3)> <a'_(3), b_(1)>`
fn double_mult(a: &HopfSpec, b: &HopfSpec, p: &CTensor, c3a: &CTensor, c3b: &CTensor) -> Result<CTensor> {
    let n = a.dim() * b.dim();
    let ps = p.matmul(b.antipode())?;
    let t = contract(c3a, &ps, &[(1, 0)])?; // [i', y, z, w]
    let t = contract(&t, p, &[(2, 0)])?; // [i', y, w, u]
    let t = contract(&t, c3b, &[(2, 3), (3, 1)])?; // [i', y, j, v]
    let t = contract(a.mult(), &t, &[(1, 1)])?; // [i, p, i', j, v]
    let t = contract(&t, b.mult(), &[(4, 0)])?; // [i, p, i', j, j', q]
    t.permute(&[0, 3, 2, 4, 1, 5])?.reshape(&[n, n, n])
}

/// `(a, b)* = Σ (a_(2)*, b_(2)*) <a_(3)*, b_(1)*> <a_(1)*, (S_B b_(3))*>`,
/// as the column matrix of the antilinear map.
fn double_star(a: &HopfSpec, b: &HopfSpec, p: &CTensor, c3a: &CTensor, c3b: &CTensor) -> Result<CTensor> {
    let n = a.dim() * b.dim();
    let (ja, jb) = (a.star_matrix(), b.star_matrix());
    let jbs = jb.matmul(&b.antipode().conj())?;
    // legs of Δ²(a_i*) and of b_(1)* ⊗ b_(2)* ⊗ (S_B b_(3))*
    let star_legs = |c3: &CTensor, m1: &CTensor, m2: &CTensor, m3: &CTensor| -> Result<CTensor> {
        let t = contract(&c3.conj(), m1, &[(1, 1)])?; // [i, y, z, x']
        let t = contract(&t, m2, &[(1, 1)])?; // [i, z, x', y']
        let t = contract(&t, m3, &[(1, 1)])?; // [i, x', y', z']
        Ok(t)
    };
    let a3 = star_legs(c3a, ja, ja, ja)?;
    let b3 = star_legs(c3b, jb, jb, &jbs)?;
    let t = contract(&a3, p, &[(3, 0)])?; // [i, x, y, u]
    let t = contract(&t, p, &[(1, 0)])?; // [i, y, u, w]
    let t = contract(&t, &b3, &[(2, 1), (3, 3)])?; // [i, y, j, v]
    t.permute(&[1, 3, 0, 2])?.reshape(&[n, n])
}

/// `S_D(a, b) = Σ (S_A a_(2), S_B b_(2)) <a_(1), b_(3)> <a_(3), S_B b_(1)>`,
/// which is the product `(1_A, S_B b)(S_A a, 1_B)`.
fn double_antipode(a: &HopfSpec, b: &HopfSpec, p: &CTensor, c3a: &CTensor, c3b: &CTensor) -> Result<CTensor> {
    let n = a.dim() * b.dim();
    let ps = p.matmul(b.antipode())?;
    let t = contract(c3a, p, &[(1, 0)])?; // [i, y, z, w]
    let t = contract(&t, &ps, &[(2, 0)])?; // [i, y, w, u]
    let t = contract(&t, c3b, &[(2, 3), (3, 1)])?; // [i, y, j, v]
    let t = contract(&t, a.antipode(), &[(1, 1)])?; // [i, j, v, y']
    let t = contract(&t, b.antipode(), &[(2, 1)])?; // [i, j, y', v']
    t.permute(&[2, 3, 0, 1])?.reshape(&[n, n])
}

/// Builds `D(A, B)` from the pairing. The pairing axioms are not checked
/// here; run the pairing verifiers first.
pub fn build_double(pr: &PairingSpec, tol: &Tolerance) -> Result<DoubleSpec> {
    let (a, b, p) = (pr.a(), pr.b(), pr.matrix());
    let (na, nb) = (a.dim(), b.dim());
    let nd = nondegeneracy(pr, tol);
    if !nd.nondegenerate {
        return Err(Error::DegeneratePairing { rank: nd.rank, n_a: na, n_b: nb });
    }
    let phi_a = a.integral().ok_or(Error::MissingIntegral)?;
    let phi_b = b.integral().ok_or(Error::MissingIntegral)?;
    let n = na * nb;
    check_capacity(n)?;

    let c3a = a.sweedler_tensor(3)?;
    let c3b = b.sweedler_tensor(3)?;
    let mult = double_mult(a, b, p, &c3a, &c3b)?;
    let star = double_star(a, b, p, &c3a, &c3b)?;
    let antipode = double_antipode(a, b, p, &c3a, &c3b)?;
    let comult = tensor_product(a.comult(), b.comult())?
        .permute(&[0, 3, 1, 4, 2, 5])?
        .reshape(&[n, n, n])?;
    let counit = tensor_product(a.counit(), b.counit())?.reshape(&[n])?;
    let unit = tensor_product(a.unit(), b.unit())?.reshape(&[n])?;
    let theta = tensor_product(phi_a, phi_b)?.reshape(&[n])?;

    let label = match (a.label(), b.label()) {
        (Some(x), Some(y)) => Some(format!("D({x},{y})")),
        _ => None,
    };
    let h = HopfSpec::from_parts(HopfParts {
        label,
        mult,
        unit,
        comult,
        counit,
        antipode,
        star,
        integral: Some(theta.clone()),
    })?;
    let (embed_a, embed_b) = embeddings(a, b)?;
    Ok(DoubleSpec {
        h,
        index_map: index_map(na, nb),
        embed_a,
        embed_b,
        theta,
        source: pr.clone(),
    })
}

fn diff(a: &CTensor, b: &CTensor) -> f64 {
    max_abs_diff(a, b).expect("verifier compares tensors of equal shape")
}

/// Ratio of the smallest to the largest singular value of the stacked
/// left- and right-multiplication operators.
fn mult_nondegeneracy_ratio(h: &HopfSpec) -> Result<f64> {
    let n = h.dim();
    let left = h.mult().permute(&[0, 2, 1])?.reshape(&[n * n, n])?;
    let right = h.mult().permute(&[1, 2, 0])?.reshape(&[n * n, n])?;
    let s = singular_values(&vstack(&[left, right])?)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let smin = s.last().copied().unwrap_or(0.0);
    Ok(if smax > 0.0 { smin / smax } else { 0.0 })
}

/// Checks that `rows` (one embedded basis element per row) spans a unital
/// *-subalgebra isomorphic to `factor`.
fn check_embedding(
    r: &mut AxiomReport,
    name: &str,
    d: &HopfSpec,
    factor: &HopfSpec,
    rows: &CTensor,
    thr: f64,
) -> Result<()> {
    let lhs = contract(&contract(rows, d.mult(), &[(1, 0)])?, rows, &[(1, 1)])?.permute(&[0, 2, 1])?;
    let rhs = contract(factor.mult(), rows, &[(2, 0)])?;
    r.push_residual(format!("{name}_multiplicative"), diff(&lhs, &rhs), thr);
    let unit = contract(factor.unit(), rows, &[(0, 0)])?;
    r.push_residual(format!("{name}_unital"), diff(&unit, d.unit()), thr);
    let star_then_embed = factor.star_matrix().transpose()?.matmul(rows)?;
    let embed_then_star = rows.conj().matmul(&d.star_matrix().transpose()?)?;
    r.push_residual(format!("{name}_star"), diff(&star_then_embed, &embed_then_star), thr);
    let antipode_then_embed = factor.antipode().transpose()?.matmul(rows)?;
    let embed_then_antipode = rows.matmul(&d.antipode().transpose()?)?;
    r.push_residual(
        format!("{name}_antipode"),
        diff(&antipode_then_embed, &embed_then_antipode),
        thr,
    );
    Ok(())
}

/// Full Hopf *-algebra and C* checks on the double plus the
/// double-specific identities.
pub fn verify_double(d: &DoubleSpec, tol: &Tolerance) -> AxiomReport {
    check_double(d, tol).expect("double shapes fixed at construction")
}

fn check_double(d: &DoubleSpec, tol: &Tolerance) -> Result<AxiomReport> {
    let h = &d.h;
    let n = h.dim();
    let thr = tol.abs;
    let mut r = AxiomReport::new();
    r.merge("hopf", verify_hopf_star(h, tol));
    r.merge("cstar", verify_cstar(h, tol)?);

    let j = h.star_matrix();
    r.push_residual("star_involutive", diff(&j.matmul(&j.conj())?, &CTensor::identity(n)?), thr);
    // (e_x e_y)* against e_y* e_x*, as [x, y, k]
    let star_of_product = contract(&h.mult().conj(), j, &[(2, 1)])?;
    let t = contract(j, h.mult(), &[(0, 0)])?; // [y, b, k]
    let product_of_stars = contract(&t, j, &[(1, 0)])?.permute(&[2, 0, 1])?; // [y, k, x] -> [x, y, k]
    r.push_residual("star_antimultiplicative", diff(&star_of_product, &product_of_stars), thr);

    let ratio = mult_nondegeneracy_ratio(h)?;
    r.push("mult_nondegenerate", shortfall(ratio, tol.rel), ratio > tol.rel);

    check_embedding(&mut r, "embed_a", h, d.source.a(), &d.embed_a, thr)?;
    check_embedding(&mut r, "embed_b", h, d.source.b(), &d.embed_b, thr)?;
    Ok(r)
}

/// The functional `θ = φ_A ⊗ φ_B`: positivity identity, invariance,
/// faithfulness through the Gram matrix, product form and trace property.
pub fn verify_theta(d: &DoubleSpec, tol: &Tolerance) -> AxiomReport {
    check_theta(d, tol).expect("double shapes fixed at construction")
}

fn check_theta(d: &DoubleSpec, tol: &Tolerance) -> Result<AxiomReport> {
    let h = &d.h;
    let (a, b) = (d.source.a(), d.source.b());
    let phi_a = a.integral().ok_or(Error::MissingIntegral)?;
    let phi_b = b.integral().ok_or(Error::MissingIntegral)?;
    let thr = tol.abs;
    let mut r = AxiomReport::new();

    let square = |spec: &HopfSpec, x: &CTensor| -> Result<C64> { spec.apply_integral(&spec.multiply(x, &spec.star(x)?)?) };
    let mut worst: f64 = 0.0;
    let mut check_pair = |x: &CTensor, y: &CTensor| -> Result<()> {
        let lhs = square(h, &d.elementary(x, y)?)?;
        let rhs = square(a, x)? * square(b, y)?;
        worst = worst.max((lhs - rhs).norm());
        Ok(())
    };
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            check_pair(&a.basis(i), &b.basis(j))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(THETA_SAMPLE_SEED);
    for _ in 0..THETA_SAMPLES {
        let x = unit_gaussian_vector(&mut rng, a.dim());
        let y = unit_gaussian_vector(&mut rng, b.dim());
        check_pair(&x, &y)?;
    }
    r.push_residual("theta_positivity_identity", worst, thr);

    let theta = &d.theta;
    let expected = tensor_product(theta, h.unit())?;
    let left = contract(h.comult(), theta, &[(1, 0)])?;
    let right = contract(h.comult(), theta, &[(2, 0)])?;
    r.push_residual("theta_left_invariance", diff(&left, &expected), thr);
    r.push_residual("theta_right_invariance", diff(&right, &expected), thr);

    let (vals, asym) = gram_spectrum(h)?;
    r.push_residual("theta_gram_hermitian", asym, thr);
    let min_eig = vals.first().copied().unwrap_or(0.0);
    r.push("theta_gram_positive", shortfall(min_eig, thr), min_eig > thr);

    let product = tensor_product(phi_a, phi_b)?.reshape(&[h.dim()])?;
    let stored = h.integral().ok_or(Error::MissingIntegral)?;
    r.push_residual("theta_product_form", diff(&product, theta).max(diff(stored, theta)), thr);

    let form = contract(h.mult(), theta, &[(2, 0)])?;
    r.push_residual("theta_trace", diff(&form, &form.transpose()?), thr);
    Ok(r)
}

/// Structure constants of the classical double of `G` on the basis
/// `(δ_g, h)` with index `g * |G| + h`:
/// `(δ_g, h)(δ_g', h') = [g = h g' h⁻¹] (δ_g, h h')`.
pub fn group_double_oracle(g: &GroupTable) -> CTensor {
    let n = g.order();
    let nd = n * n;
    let mut m = CTensor::zeros(&[nd, nd, nd]).expect("oracle within size cap");
    for x in 0..n {
        for h in 0..n {
            for x2 in 0..n {
                let conj = g.mul(g.mul(h, x2), g.inverse(h));
                if conj != x {
                    continue;
                }
                for h2 in 0..n {
                    m.set(&[x * n + h, x2 * n + h2, x * n + g.mul(h, h2)], ONE);
                }
            }
        }
    }
    m
}

fn same_structure(x: &HopfSpec, y: &HopfSpec, tol: &Tolerance) -> bool {
    x.dim() == y.dim()
        && [
            (x.mult(), y.mult()),
            (x.comult(), y.comult()),
            (x.unit(), y.unit()),
            (x.counit(), y.counit()),
        ]
        .iter()
        .all(|(p, q)| diff(p, q) <= tol.abs)
}

/// Largest deviation between the double's multiplication and
/// [`group_double_oracle`]. Both orientations of the canonical pairing are
/// accepted: for `A = ℂ[G]`, `B = F(G)` the basis element `(g, δ_h)` is
/// matched with the oracle's `(δ_{g h g⁻¹}, g)`.
pub fn compare_with_oracle(d: &DoubleSpec, g: &GroupTable, tol: &Tolerance) -> Result<f64> {
    let n = g.order();
    if d.h.dim() != n * n {
        return Err(Error::IndexAlignment(format!(
            "double has dimension {}, the oracle for a group of order {n} has {}",
            d.h.dim(),
            n * n
        )));
    }
    let (a, b, p) = (d.source.a(), d.source.b(), d.source.matrix());
    if diff(p, &CTensor::identity(n)?) > tol.abs {
        return Err(Error::IndexAlignment("pairing matrix is not the evaluation pairing".into()));
    }
    let (ca, fa) = (group_algebra(g), function_algebra(g));
    let align: Vec<usize> = if same_structure(a, &fa, tol) && same_structure(b, &ca, tol) {
        (0..n * n).collect()
    } else if same_structure(a, &ca, tol) && same_structure(b, &fa, tol) {
        (0..n * n)
            .map(|k| {
                let (x, h) = (k / n, k % n);
                g.mul(g.mul(x, h), g.inverse(x)) * n + x
            })
            .collect()
    } else {
        return Err(Error::IndexAlignment(
            "double is not built from the canonical pairing of this group".into(),
        ));
    };
    let oracle = group_double_oracle(g);
    let mult = d.h.mult();
    let nd = n * n;
    let mut worst: f64 = 0.0;
    for x in 0..nd {
        for y in 0..nd {
            for k in 0..nd {
                let dev = (mult.get(&[x, y, k]) - oracle.get(&[align[x], align[y], align[k]])).norm();
                worst = worst.max(dev);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::canonical_pairing;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn f_g_pairing(g: &GroupTable) -> PairingSpec {
        canonical_pairing(g).swapped()
    }

    #[test]
    fn z2_double_shape_and_theta() {
        let d = build_double(&f_g_pairing(&GroupTable::cyclic(2)), &tol()).unwrap();
        assert_eq!(d.hopf().dim(), 4);
        assert_eq!(d.index_map()[3], (1, 1));
        assert_eq!(d.index_of(1, 0), 2);
        // θ((δ_e, e)) = φ_F(δ_e) φ_C(e) = 1/2
        assert!((d.theta().get(&[0]) - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((d.hopf().apply_integral(d.hopf().unit()).unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn half_units_multiply_into_the_factors() {
        // (a,1)(a',b) = (aa', b) and (a,b)(1,b') = (a, bb')
        for pr in [f_g_pairing(&GroupTable::symmetric(3)), canonical_pairing(&GroupTable::symmetric(3))] {
            let d = build_double(&pr, &tol()).unwrap();
            let (a, b) = (pr.a(), pr.b());
            for i in 0..6 {
                for i2 in 0..6 {
                    for j in 0..6 {
                        let lhs = d
                            .hopf()
                            .multiply(&d.include_a(&a.basis(i)).unwrap(), &d.elementary(&a.basis(i2), &b.basis(j)).unwrap())
                            .unwrap();
                        let rhs = d.elementary(&a.multiply(&a.basis(i), &a.basis(i2)).unwrap(), &b.basis(j)).unwrap();
                        assert!(max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
                        let lhs = d
                            .hopf()
                            .multiply(&d.elementary(&a.basis(i), &b.basis(j)).unwrap(), &d.include_b(&b.basis(i2)).unwrap())
                            .unwrap();
                        let rhs = d.elementary(&a.basis(i), &b.multiply(&b.basis(j), &b.basis(i2)).unwrap()).unwrap();
                        assert!(max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let z2 = GroupTable::cyclic(2);
        let o = group_double_oracle(&z2);
        // (δ_u, u)(δ_u, u) = (δ_u, e)
        assert_eq!(o.get(&[3, 3, 2]), ONE);
        let s3 = GroupTable::symmetric(3);
        let o = group_double_oracle(&s3);
        assert_eq!(o.data().iter().filter(|z| z.norm() > 0.0).count(), 216);
        // Σ_g (δ_g, e) is the unit
        let mut unit = CTensor::zeros(&[36]).unwrap();
        for g in 0..6 {
            unit.set(&[g * 6], ONE);
        }
        let left = contract(&unit, &o, &[(0, 0)]).unwrap();
        let right = contract(&unit, &o, &[(0, 1)]).unwrap();
        assert_eq!(left, CTensor::identity(36).unwrap());
        assert_eq!(right, CTensor::identity(36).unwrap());
    }

    #[test]
    fn matches_oracle_in_both_orientations() {
        for g in [GroupTable::cyclic(2), GroupTable::cyclic(4), GroupTable::symmetric(3)] {
            let d = build_double(&f_g_pairing(&g), &tol()).unwrap();
            assert!(compare_with_oracle(&d, &g, &tol()).unwrap() <= 1e-12, "{:?}", g.label());
            let d = build_double(&canonical_pairing(&g), &tol()).unwrap();
            assert!(compare_with_oracle(&d, &g, &tol()).unwrap() <= 1e-12, "{:?}", g.label());
        }
    }

    #[test]
    fn oracle_rejects_wrong_group() {
        let d = build_double(&f_g_pairing(&GroupTable::cyclic(2)), &tol()).unwrap();
        assert!(matches!(
            compare_with_oracle(&d, &GroupTable::cyclic(3), &tol()),
            Err(Error::IndexAlignment(_))
        ));
        let z4 = GroupTable::cyclic(4);
        let v4 = GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2));
        let d = build_double(&f_g_pairing(&z4), &tol()).unwrap();
        assert!(matches!(compare_with_oracle(&d, &v4, &tol()), Err(Error::IndexAlignment(_))));
    }

    #[test]
    fn z2_double_passes_everything() {
        for pr in [f_g_pairing(&GroupTable::cyclic(2)), canonical_pairing(&GroupTable::cyclic(2))] {
            let d = build_double(&pr, &tol()).unwrap();
            let r = verify_double(&d, &tol());
            assert!(r.overall, "{r:?}");
            assert!(r.max_residual() <= 1e-12, "{r:?}");
            let r = verify_theta(&d, &tol());
            assert!(r.overall, "{r:?}");
        }
    }

    #[test]
    fn s3_double_passes_everything() {
        for pr in [f_g_pairing(&GroupTable::symmetric(3)), canonical_pairing(&GroupTable::symmetric(3))] {
            let d = build_double(&pr, &tol()).unwrap();
            assert_eq!(d.hopf().dim(), 36);
            let r = verify_double(&d, &tol());
            assert!(r.overall, "{:?}", r.failing().collect::<Vec<_>>());
            let r = verify_theta(&d, &tol());
            assert!(r.overall, "{:?}", r.failing().collect::<Vec<_>>());
        }
    }

    #[test]
    fn antipode_restricts_to_the_factors() {
        let d = build_double(&canonical_pairing(&GroupTable::symmetric(3)), &tol()).unwrap();
        let r = verify_double(&d, &tol());
        assert_eq!(r.passes("embed_a_antipode"), Some(true));
        assert_eq!(r.passes("embed_b_antipode"), Some(true));
        assert_eq!(r.passes("hopf.antipode"), Some(true));
    }

    #[test]
    fn theta_vanishes_on_u_but_its_square_does_not() {
        // A = ℂ[ℤ/2] slot with a = u
        let pr = canonical_pairing(&GroupTable::cyclic(2));
        let d = build_double(&pr, &tol()).unwrap();
        let x = d.elementary(&pr.a().basis(1), &pr.b().basis(0)).unwrap();
        let h = d.hopf();
        assert_eq!(h.apply_integral(&x).unwrap(), C64::new(0.0, 0.0));
        let sq = h.apply_integral(&h.multiply(&x, &h.star(&x).unwrap()).unwrap()).unwrap();
        assert!((sq - C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn z2_gram_is_positive() {
        let d = build_double(&canonical_pairing(&GroupTable::cyclic(2)), &tol()).unwrap();
        let (vals, _) = gram_spectrum(d.hopf()).unwrap();
        assert!(vals[0] > 0.0);
    }

    #[test]
    fn degenerate_pairing_is_rejected() {
        let pr = canonical_pairing(&GroupTable::cyclic(2));
        let mut p = CTensor::identity(2).unwrap();
        p.set(&[1, 1], C64::new(0.0, 0.0));
        let err = build_double(&pr.with_matrix(p).unwrap(), &tol()).unwrap_err();
        assert!(matches!(err, Error::DegeneratePairing { rank: 1, n_a: 2, n_b: 2 }));
    }

    #[test]
    fn missing_integral_is_rejected() {
        let pr = canonical_pairing(&GroupTable::cyclic(2));
        let (a, b, p) = pr.into_parts();
        let mut parts = a.into_parts();
        parts.integral = None;
        let pr = PairingSpec::new(HopfSpec::from_parts(parts).unwrap(), b, p).unwrap();
        assert!(matches!(build_double(&pr, &tol()), Err(Error::MissingIntegral)));
    }

    #[test]
    fn capacity_guard() {
        assert!(check_capacity(406).is_ok());
        assert!(matches!(check_capacity(407), Err(Error::Capacity { .. })));
    }
}
