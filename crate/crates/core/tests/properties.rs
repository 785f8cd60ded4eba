mod common;

use hopf_core::pairing::{act, Action};
use hopf_core::tensor::{contract, hermitian_eig, max_abs_diff, operator_norm};
use hopf_core::{
    build_double, canonical_pairing, dualize, function_algebra, group_algebra, verify_cstar, verify_hopf_star,
    verify_pairing, CTensor, GroupTable, HopfParts, HopfSpec, PairingSpec, Tolerance, C64,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn tensor(shape: Vec<usize>) -> impl Strategy<Value = CTensor> {
    let len: usize = shape.iter().product();
    prop::collection::vec(complex(), len).prop_map(move |d| CTensor::from_vec(&shape, d).unwrap())
}

fn square(max: usize) -> impl Strategy<Value = CTensor> {
    (1..=max).prop_flat_map(|n| tensor(vec![n, n]))
}

fn small_spec() -> impl Strategy<Value = HopfSpec> {
    let groups = common::corpus_upto(6);
    (0..groups.len(), any::<bool>()).prop_map(move |(k, func)| {
        if func {
            function_algebra(&groups[k])
        } else {
            group_algebra(&groups[k])
        }
    })
}

fn spec_and_vector() -> impl Strategy<Value = (HopfSpec, CTensor)> {
    small_spec().prop_flat_map(|h| {
        let n = h.dim();
        (Just(h), tensor(vec![n]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn contract_is_bilinear(
        (x, x2, y) in (1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(a, b, c)| (tensor(vec![a, b]), tensor(vec![a, b]), tensor(vec![b, c]))),
        alpha in complex(),
        beta in complex(),
    ) {
        let combo = x.scale(alpha).add(&x2.scale(beta)).unwrap();
        let lhs = contract(&combo, &y, &[(1, 0)]).unwrap();
        let rhs = contract(&x, &y, &[(1, 0)]).unwrap().scale(alpha)
            .add(&contract(&x2, &y, &[(1, 0)]).unwrap().scale(beta)).unwrap();
        prop_assert!(max_abs_diff(&lhs, &rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn hermitian_eig_reconstructs(m in (1usize..=64).prop_flat_map(|n| tensor(vec![n, n]))) {
        let h = m.add(&m.adjoint().unwrap()).unwrap();
        let (vals, u) = hermitian_eig(&h).unwrap();
        let n = vals.len();
        let mut d = CTensor::zeros(&[n, n]).unwrap();
        for (i, v) in vals.iter().enumerate() {
            d.set(&[i, i], C64::new(*v, 0.0));
        }
        let back = u.matmul(&d).unwrap().matmul(&u.adjoint().unwrap()).unwrap();
        prop_assert!(max_abs_diff(&back, &h).unwrap() <= Tolerance::scaled(h.max_abs()).abs);
    }

    #[test]
    fn operator_norm_is_spectral(m in square(12)) {
        let norm = operator_norm(&m).unwrap();
        let gram = operator_norm(&m.adjoint().unwrap().matmul(&m).unwrap()).unwrap();
        prop_assert!((gram - norm * norm).abs() <= 1e-10 * norm * norm.max(1e-300));
    }

    #[test]
    fn star_is_an_involution((h, x) in spec_and_vector()) {
        let back = h.star(&h.star(&x).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&back, &x).unwrap() <= 1e-12);
    }

    #[test]
    fn iterated_coproduct_does_not_depend_on_the_leg((h, x) in spec_and_vector(), legs in 2usize..=4) {
        let left = h.iterated_coproduct(&x, legs).unwrap();
        let right = h.iterated_coproduct_right(&x, legs).unwrap();
        prop_assert!(max_abs_diff(&left, &right).unwrap() <= 1e-12);
    }

    #[test]
    fn unit_actor_acts_trivially(
        (pr, target, side) in (0usize..4, any::<bool>()).prop_flat_map(|(k, swap)| {
            let g = &common::corpus_upto(6)[k];
            let pr = if swap { canonical_pairing(g).swapped() } else { canonical_pairing(g) };
            let n = pr.b().dim();
            (Just(pr), tensor(vec![n]), 0usize..4)
        })
    ) {
        let which = [Action::AOnBLeft, Action::AOnBRight, Action::BOnALeft, Action::BOnARight][side];
        let unit = match which {
            Action::AOnBLeft | Action::AOnBRight => pr.a().unit(),
            _ => pr.b().unit(),
        };
        let out = act(&pr, which, unit, &target).unwrap();
        prop_assert!(max_abs_diff(&out, &target).unwrap() <= 1e-12);
    }

    #[test]
    fn double_unit_is_two_sided(k in 0usize..6, swap in any::<bool>(), seed in tensor(vec![64])) {
        let g = &common::corpus_upto(4)[k % common::corpus_upto(4).len()];
        let pr = if swap { canonical_pairing(g).swapped() } else { canonical_pairing(g) };
        let d = build_double(&pr, &Tolerance::default()).unwrap();
        let h = d.hopf();
        let x = CTensor::vector(seed.data()[..h.dim()].to_vec()).unwrap();
        prop_assert!(max_abs_diff(&h.multiply(h.unit(), &x).unwrap(), &x).unwrap() <= 1e-12);
        prop_assert!(max_abs_diff(&h.multiply(&x, h.unit()).unwrap(), &x).unwrap() <= 1e-12);
    }

    /// A single-entry perturbation of at least max(100·tol.abs, 1e-3) in any
    /// structure map of a passing spec is flagged by some check.
    #[test]
    fn perturbations_are_detected(
        h in small_spec(),
        field in 0usize..7,
        pick in any::<prop::sample::Index>(),
        size in 1e-3f64..1.0,
        phase in 0.0f64..std::f64::consts::TAU,
    ) {
        let tol = Tolerance::default();
        prop_assume!(size >= 100.0 * tol.abs);
        let mut p: HopfParts = h.into_parts();
        let target = match field {
            0 => &mut p.mult,
            1 => &mut p.unit,
            2 => &mut p.comult,
            3 => &mut p.counit,
            4 => &mut p.antipode,
            5 => &mut p.star,
            _ => p.integral.as_mut().unwrap(),
        };
        let k = pick.index(target.len());
        target.data_mut()[k] += C64::from_polar(size, phase);
        let broken = HopfSpec::from_parts(p).unwrap();
        let mut report = verify_hopf_star(&broken, &tol);
        report.merge("cstar", verify_cstar(&broken, &tol).unwrap());
        prop_assert!(!report.overall, "perturbation of field {field} at {k} went unnoticed");
    }

    /// Pull-backs of the canonical pairing along group automorphisms satisfy
    /// the product and star axioms; the unit, counit and antipode axioms must
    /// then hold as well.
    #[test]
    fn pairing_axioms_imply_the_rest(k in 0usize..6, pick in any::<prop::sample::Index>()) {
        let groups = common::corpus_upto(6);
        let g = &groups[k % groups.len()];
        let autos = common::automorphisms(g);
        let alpha = &autos[pick.index(autos.len())];
        let base = canonical_pairing(g);
        let pr = base.with_matrix(common::permutation_matrix(alpha)).unwrap();
        let tol = Tolerance::default();
        let r = verify_pairing(&pr, &tol);
        let first = ["coproduct_a_vs_product_b", "product_a_vs_coproduct_b", "star_compat"];
        if first.iter().all(|c| r.entry(c).unwrap().residual <= tol.abs) {
            for c in ["unit_b_counit_a", "unit_a_counit_b", "antipode_compat"] {
                prop_assert!(r.entry(c).unwrap().residual <= 10.0 * tol.abs, "{c}");
            }
        } else {
            prop_assert!(false, "automorphism pull-back should be a pairing");
        }
    }
}

#[test]
fn dualize_is_an_involution() {
    for g in common::corpus_upto(8) {
        for h in [group_algebra(&g), function_algebra(&g)] {
            let back = dualize(&dualize(&h).unwrap()).unwrap();
            for (x, y) in [(h.mult(), back.mult()), (h.comult(), back.comult()), (h.antipode(), back.antipode())] {
                assert!(max_abs_diff(x, y).unwrap() <= 1e-12, "{:?}", h.label());
            }
            assert!(max_abs_diff(h.star_matrix(), back.star_matrix()).unwrap() <= 1e-12);
            assert!(max_abs_diff(h.integral().unwrap(), back.integral().unwrap()).unwrap() <= 1e-12);
        }
    }
}

#[test]
fn automorphism_pullbacks_are_full_pairings() {
    let g = GroupTable::symmetric(3);
    let autos = common::automorphisms(&g);
    assert_eq!(autos.len(), 6);
    let tol = Tolerance::default();
    for alpha in autos {
        let (a, b, _) = canonical_pairing(&g).into_parts();
        let pr = PairingSpec::new(a, b, common::permutation_matrix(&alpha)).unwrap();
        assert!(verify_pairing(&pr, &tol).overall);
    }
}
