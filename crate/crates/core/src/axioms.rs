//! Residual checks for the Hopf *-algebra axioms and the finite Hopf
//! C*-algebra properties of a [`HopfSpec`].
//!
//! Every check is evaluated on all basis elements (or basis pairs) and
//! reported as the largest absolute deviation. Nothing is sampled.

use crate::error::{Error, Result};
use crate::hopf::HopfSpec;
use crate::report::{shortfall, AxiomReport};
use crate::tensor::{contract, hermitian_eig, max_abs_diff, tensor_product, CTensor, Tolerance, C64, ZERO};

fn diff(a: &CTensor, b: &CTensor) -> f64 {
    max_abs_diff(a, b).expect("verifier compares tensors of equal shape")
}

/// `Σ_{a,b} X[a, j] Y[b, i] mult[a, b, p]` as `[i, j, p]`: the product
/// `x(e_j) y(e_i)` for linear or antilinear maps given by column matrices.
fn reversed_images_product(h: &HopfSpec, x: &CTensor, y: &CTensor) -> Result<CTensor> {
    let t = contract(x, h.mult(), &[(0, 0)])?; // [j, b, p]
    let t = contract(&t, y, &[(1, 0)])?; // [j, p, i]
    t.permute(&[2, 0, 1])
}

/// Largest deviation of `Δ(e_a) Δ(e_b)` from `Δ(e_a e_b)`, walking only the
/// nonzero structure constants.
fn comult_multiplicativity(h: &HopfSpec) -> Result<f64> {
    let n = h.dim();
    let nonzero = |row: &[C64]| -> Vec<(usize, C64)> {
        row.iter().copied().enumerate().filter(|(_, z)| *z != ZERO).collect()
    };
    let legs: Vec<_> = h.comult().data().chunks(n * n).map(nonzero).collect();
    let products: Vec<_> = h.mult().data().chunks(n).map(nonzero).collect();
    let d_of_product = contract(h.mult(), h.comult(), &[(2, 0)])?; // [a, b, p, q]
    let mut buf = vec![ZERO; n * n];
    let mut worst: f64 = 0.0;
    for (ab, expect) in d_of_product.data().chunks(n * n).enumerate() {
        buf.fill(ZERO);
        for &(pq, c1) in &legs[ab / n] {
            for &(rs, c2) in &legs[ab % n] {
                let c = c1 * c2;
                let (p, q, r, s) = (pq / n, pq % n, rs / n, rs % n);
                for &(x, m1) in &products[p * n + r] {
                    for &(y, m2) in &products[q * n + s] {
                        buf[x * n + y] += c * m1 * m2;
                    }
                }
            }
        }
        for (u, v) in buf.iter().zip(expect) {
            worst = worst.max((u - v).norm());
        }
    }
    Ok(worst)
}

/// The axioms of a Hopf *-algebra, plus unitality and multiplicativity of
/// the comultiplication and counit.
pub fn verify_hopf_star(h: &HopfSpec, tol: &Tolerance) -> AxiomReport {
    check_hopf_star(h, tol).expect("shapes validated at construction")
}

fn check_hopf_star(h: &HopfSpec, tol: &Tolerance) -> Result<AxiomReport> {
    let n = h.dim();
    let thr = tol.abs;
    let (m, d, s, j) = (h.mult(), h.comult(), h.antipode(), h.star_matrix());
    let eps = h.counit();
    let id = CTensor::identity(n)?;
    let mut r = AxiomReport::new();

    let left_unit = contract(h.unit(), m, &[(0, 0)])?;
    let right_unit = contract(h.unit(), m, &[(0, 1)])?;
    r.push_residual("unit", diff(&left_unit, &id).max(diff(&right_unit, &id)), thr);

    // (e_i e_j) e_k vs e_i (e_j e_k), both as [i, j, k, l]
    let lhs = contract(m, m, &[(2, 0)])?;
    let rhs = contract(m, m, &[(1, 2)])?.permute(&[0, 2, 3, 1])?;
    r.push_residual("associativity", diff(&lhs, &rhs), thr);

    let left = h.sweedler_tensor(3)?;
    let right = contract(d, d, &[(2, 0)])?;
    r.push_residual("coassociativity", diff(&left, &right), thr);

    let eps_left = contract(d, eps, &[(1, 0)])?;
    let eps_right = contract(d, eps, &[(2, 0)])?;
    r.push_residual("counit", diff(&eps_left, &id).max(diff(&eps_right, &id)), thr);

    // m(S⊗ι)Δ(e_i) and m(ι⊗S)Δ(e_i) against ε(e_i) 1
    let expected = tensor_product(eps, h.unit())?;
    let sl = contract(&contract(d, s, &[(1, 1)])?, m, &[(2, 0), (1, 1)])?;
    let sr = contract(&contract(d, s, &[(2, 1)])?, m, &[(1, 0), (2, 1)])?;
    r.push_residual("antipode", diff(&sl, &expected).max(diff(&sr, &expected)), thr);

    let jj = j.matmul(&j.conj())?;
    r.push_residual("star_involutive", diff(&jj, &id), thr);
    let star_of_product = contract(&m.conj(), j, &[(2, 1)])?;
    let product_of_stars = reversed_images_product(h, j, j)?;
    r.push_residual("star_antimultiplicative", diff(&star_of_product, &product_of_stars), thr);

    // Δ(e_i*) vs (Δ e_i)* taken legwise
    let d_of_star = contract(j, d, &[(0, 0)])?;
    let star_of_d = contract(&contract(&d.conj(), j, &[(1, 1)])?, j, &[(1, 1)])?;
    r.push_residual("comult_star", diff(&d_of_star, &star_of_d), thr);

    let worst = comult_multiplicativity(h)?;
    r.push_residual("comult_multiplicative", worst, thr);

    let eps_of_star = contract(j, eps, &[(0, 0)])?;
    r.push_residual("counit_star", diff(&eps_of_star, &eps.conj()), thr);
    let eps_of_product = contract(m, eps, &[(2, 0)])?;
    let eps_unit = crate::hopf::dot(eps, h.unit());
    r.push_residual(
        "counit_multiplicative",
        diff(&eps_of_product, &tensor_product(eps, eps)?).max((eps_unit - C64::new(1.0, 0.0)).norm()),
        thr,
    );

    // S(S(x)*)* = x, i.e. J conj(S) conj(J) S = ι
    let chain = j.matmul(&s.conj())?.matmul(&j.conj())?.matmul(s)?;
    r.push_residual("antipode_star_inverse", diff(&chain, &id), thr);

    let s_of_product = contract(m, s, &[(2, 1)])?;
    let product_of_s = reversed_images_product(h, s, s)?;
    r.push_residual("antipode_antimultiplicative", diff(&s_of_product, &product_of_s), thr);

    Ok(r)
}

/// Smallest eigenvalue of the Hermitian part of the Gram matrix
/// `G[i, j] = φ(e_j* e_i)`, together with its Hermitian residual.
pub fn gram_spectrum(h: &HopfSpec) -> Result<(Vec<f64>, f64)> {
    let g = h.gram_matrix()?;
    let asym = crate::tensor::hermitian_residual(&g)?;
    let sym = g.add(&g.adjoint()?)?.scale(C64::new(0.5, 0.0));
    let (vals, _) = hermitian_eig(&sym)?;
    Ok((vals, asym))
}

/// `S² = ι`, invariance of the integral, `φ∘S = φ`, faithful positivity of
/// the Gram form, and `φ(1) = 1`.
pub fn verify_cstar(h: &HopfSpec, tol: &Tolerance) -> Result<AxiomReport> {
    let phi = h.integral().ok_or(Error::MissingIntegral)?;
    let n = h.dim();
    let thr = tol.abs;
    let s = h.antipode();
    let mut r = AxiomReport::new();

    r.push_residual("antipode_involutive", diff(&s.matmul(s)?, &CTensor::identity(n)?), thr);

    let expected = tensor_product(phi, h.unit())?;
    let left = contract(h.comult(), phi, &[(1, 0)])?;
    let right = contract(h.comult(), phi, &[(2, 0)])?;
    r.push_residual("integral_left_invariance", diff(&left, &expected), thr);
    r.push_residual("integral_right_invariance", diff(&right, &expected), thr);

    let phi_s = contract(s, phi, &[(0, 0)])?;
    r.push_residual("integral_antipode", diff(&phi_s, phi), thr);

    let (vals, asym) = gram_spectrum(h)?;
    r.push_residual("gram_hermitian", asym, thr);
    let min_eig = vals.first().copied().unwrap_or(0.0);
    r.push("gram_positive", shortfall(min_eig, thr), min_eig > thr);

    let at_unit = crate::hopf::dot(phi, h.unit());
    r.push_residual("integral_normalized", (at_unit - C64::new(1.0, 0.0)).norm(), thr);
    Ok(r)
}
