#![allow(dead_code)]

use hopf_core::{CTensor, GroupTable, HopfParts, HopfSpec};

/// Relabels the basis so that new element `k` is old element `perm[k]`.
pub fn relabel(h: &HopfSpec, perm: &[usize]) -> HopfSpec {
    let p = h.parts();
    let re = |t: &CTensor| -> CTensor {
        let shape = t.shape().to_vec();
        let mut out = CTensor::zeros(&shape).unwrap();
        let mut idx = vec![0; shape.len()];
        for _ in 0..t.len() {
            let old: Vec<usize> = idx.iter().map(|&k| perm[k]).collect();
            out.set(&idx, t.get(&old));
            for axis in (0..shape.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < shape[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        out
    };
    HopfSpec::from_parts(HopfParts {
        label: p.label.clone(),
        mult: re(&p.mult),
        unit: re(&p.unit),
        comult: re(&p.comult),
        counit: re(&p.counit),
        antipode: re(&p.antipode),
        star: re(&p.star),
        integral: p.integral.as_ref().map(re),
    })
    .unwrap()
}

/// Every automorphism of `g`, as `alpha[x]`, by brute force.
pub fn automorphisms(g: &GroupTable) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut out = Vec::new();
    let mut current = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(g: &GroupTable, k: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = g.order();
        if k == n {
            let hom = (0..n).all(|a| (0..n).all(|b| current[g.mul(a, b)] == g.mul(current[a], current[b])));
            if hom {
                out.push(current.clone());
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current[k] = v;
                extend(g, k + 1, current, used, out);
                used[v] = false;
            }
        }
    }
    extend(g, 0, &mut current, &mut used, &mut out);
    out
}

pub fn permutation_matrix(sigma: &[usize]) -> CTensor {
    let n = sigma.len();
    let mut m = CTensor::zeros(&[n, n]).unwrap();
    for (i, &j) in sigma.iter().enumerate() {
        m.set(&[i, j], hopf_core::tensor::ONE);
    }
    m
}

/// Groups of order at most 8 from the built-in corpus.
pub fn corpus_upto(order: usize) -> Vec<GroupTable> {
    GroupTable::corpus().into_iter().filter(|g| g.order() <= order).collect()
}

pub struct Mutation {
    pub family: &'static str,
    pub change: &'static str,
    pub check: &'static str,
    pub entry: Option<hopf_core::AxiomEntry>,
}

const EPS: f64 = 1e-3;

fn bump(t: &mut CTensor, idx: &[usize]) {
    let v = t.get(idx);
    t.set(idx, v + hopf_core::C64::new(EPS, 0.0));
}

/// One documented single-entry perturbation of size 1e-3 per verifier
/// family, applied to a spec that passes, with the entry expected to fail.
pub fn mutations() -> Vec<Mutation> {
    use hopf_core::pairing::{verify_actions_with, ActionTensors};
    use hopf_core::*;
    let tol = Tolerance::default();
    let s3 = GroupTable::symmetric(3);
    let z2 = GroupTable::cyclic(2);
    let mut out = Vec::new();

    let mut p = group_algebra(&s3).into_parts();
    bump(&mut p.mult, &[1, 1, 0]);
    let r = verify_hopf_star(&HopfSpec::from_parts(p).unwrap(), &tol);
    out.push(Mutation { family: "hopf", change: "C[S3] mult[1,1,0]", check: "associativity", entry: r.entry("associativity").cloned() });

    let mut p = group_algebra(&s3).into_parts();
    bump(p.integral.as_mut().unwrap(), &[1]);
    let r = verify_cstar(&HopfSpec::from_parts(p).unwrap(), &tol).unwrap();
    out.push(Mutation { family: "cstar", change: "C[S3] integral[1]", check: "integral_left_invariance", entry: r.entry("integral_left_invariance").cloned() });

    let pr = canonical_pairing(&s3);
    let mut m = pr.matrix().clone();
    bump(&mut m, &[0, 0]);
    let bad = pr.with_matrix(m).unwrap();
    let r = verify_pairing(&bad, &tol);
    out.push(Mutation { family: "pairing", change: "canonical S3 P[0,0]", check: "coproduct_a_vs_product_b", entry: r.entry("coproduct_a_vs_product_b").cloned() });
    let r = verify_galois(&bad, &tol).unwrap();
    out.push(Mutation { family: "galois", change: "canonical S3 P[0,0]", check: "galois_duality", entry: r.entry("galois_duality").cloned() });

    let mut t = ActionTensors::new(&pr).unwrap();
    bump(&mut t.a_on_b_left, &[0, 0, 0]);
    let r = verify_actions_with(&pr, &t, &tol);
    out.push(Mutation { family: "actions", change: "S3 a_on_b_left[0,0,0]", check: "adjoint_a_on_b_left", entry: r.entry("adjoint_a_on_b_left").cloned() });

    let d = build_double(&pr, &tol).unwrap();
    let mut p = d.hopf().clone().into_parts();
    bump(&mut p.star, &[0, 0]);
    let broken = DoubleSpec::from_parts(HopfSpec::from_parts(p).unwrap(), pr.clone()).unwrap();
    let r = verify_double(&broken, &tol);
    out.push(Mutation { family: "double", change: "D(S3) star[0,0]", check: "star_antimultiplicative", entry: r.entry("star_antimultiplicative").cloned() });

    let pz = canonical_pairing(&z2);
    let dz = build_double(&pz, &tol).unwrap();
    let mut p = dz.hopf().clone().into_parts();
    bump(p.integral.as_mut().unwrap(), &[1]);
    let broken = DoubleSpec::from_parts(HopfSpec::from_parts(p).unwrap(), pz.clone()).unwrap();
    let r = verify_theta(&broken, &tol);
    out.push(Mutation { family: "theta", change: "D(Z2) theta[1]", check: "theta_left_invariance", entry: r.entry("theta_left_invariance").cloned() });

    let mut p = group_algebra(&GroupTable::cyclic(3)).into_parts();
    bump(&mut p.star, &[2, 1]);
    let g = gns_build(&HopfSpec::from_parts(p).unwrap(), &tol).unwrap();
    let r = verify_cstar_identity(&g, 10, 1, &tol);
    out.push(Mutation { family: "gns", change: "C[Z3] star[2,1]", check: "rep_star", entry: r.entry("rep_star").cloned() });

    let ga = gns_build(pz.a(), &tol).unwrap();
    let gb = gns_build(pz.b(), &tol).unwrap();
    let gd = gns_build(broken.hopf(), &tol).unwrap();
    let r = verify_isometry(&broken, &ga, &gb, &gd, &tol);
    out.push(Mutation { family: "isometry", change: "D(Z2) theta[1]", check: "product_norm", entry: r.entry("product_norm").cloned() });
    out
}
