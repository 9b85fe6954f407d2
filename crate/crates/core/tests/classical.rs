//! Eigenvalue systems over Q and Q(sqrt 5) checked against independently
//! computed data: point counts on elliptic curves and an eta product.

use shimura_core::{run, JobConfig, Rat, ResultDocument};
use std::path::PathBuf;

fn document(name: &str) -> ResultDocument {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let cfg = JobConfig::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    run(&cfg, None).unwrap().document
}

/// `p - #{affine points}` on `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` mod `p`.
fn trace_of_frobenius(a: [i64; 5], p: i64) -> i64 {
    let [a1, a2, a3, a4, a6] = a;
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            if (y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    p - n
}

/// `(p, eigenvalue)` for every Hecke and Atkin-Lehner operator of the only system.
fn eigenvalues(doc: &ResultDocument) -> Vec<(u64, Rat, bool)> {
    assert_eq!(doc.systems.len(), 1, "expected a single system, got {:?}", doc.decomposition);
    let s = &doc.systems[0];
    let parse = |v: &str| shimura_core::field::parse_rat(v).unwrap_or_else(|| panic!("irrational eigenvalue {v}"));
    s.eigenvalues
        .iter()
        .map(|e| (e.norm, parse(&e.value), false))
        .chain(s.atkin_lehner.iter().map(|e| (e.norm, parse(&e.value), true)))
        .collect()
}

fn check_curve(name: &str, curve: [i64; 5]) {
    let doc = document(name);
    let evs = eigenvalues(&doc);
    assert!(evs.len() >= 8);
    for (p, a, _) in evs {
        assert_eq!(a, Rat::from_integer(trace_of_frobenius(curve, p as i64).into()), "{name}: eigenvalue at {p}");
    }
}

#[test]
fn discriminant_15_matches_curve_15a1() {
    check_curve("rational_d15.cfg", [1, 1, 1, -10, -10]);
}

#[test]
fn discriminant_6_level_5_matches_curve_30a1() {
    check_curve("rational_d6_n5.cfg", [1, 0, 1, 1, 2]);
}

/// Coefficients of `q prod (1-q^n)^2 (1-q^2n)^2 (1-q^3n)^2 (1-q^6n)^2` up to `q^len`.
fn eta_product(len: usize) -> Vec<i64> {
    let mut f = vec![0i64; len + 1];
    f[1] = 1;
    for k in [1, 2, 3, 6] {
        for _ in 0..2 {
            for n in 1..=len / k {
                for i in (n * k..=len).rev() {
                    f[i] -= f[i - n * k];
                }
            }
        }
    }
    f
}

#[test]
fn weight_four_matches_eta_product() {
    let doc = document("rational_d6_k4.cfg");
    let f = eta_product(40);
    for (p, a, al) in eigenvalues(&doc) {
        if al {
            continue;
        }
        // the weight action is normalized by det^(-1)
        assert_eq!(a, Rat::new(f[p as usize].into(), (p as i64).into()), "eigenvalue at {p}");
    }
}

#[test]
fn norm_31_form_has_eight_torsion_congruences() {
    let doc = document("sqrt5_d31.cfg");
    let evs = eigenvalues(&doc);
    assert!(evs.iter().any(|(p, _, al)| *p == 31 && *al));
    for (p, a, al) in evs {
        if al {
            continue;
        }
        let n = Rat::from_integer((p + 1).into()) - a;
        assert!(n.is_integer() && (n.to_integer() % 8u32) == 0u32.into(), "N + 1 - a = {n} at norm {p}");
    }
}

#[test]
fn non_parallel_weight_operators_commute() {
    use shimura_core::arith::matrix::mat_mul;
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sqrt5_d11_k42.cfg");
    let out = run(&JobConfig::parse(&std::fs::read_to_string(path).unwrap()).unwrap(), None).unwrap();
    let k = out.system.field();
    assert_eq!(k.degree(), 4);
    assert_eq!(out.document.dim_h_plus, 1);
    let w = &out.conjugation.matrix;
    for a in &out.operators {
        assert_eq!(mat_mul(k, &a.matrix, w), mat_mul(k, w, &a.matrix), "{}", a.label);
        for b in &out.operators {
            assert_eq!(mat_mul(k, &a.matrix, &b.matrix), mat_mul(k, &b.matrix, &a.matrix), "{} {}", a.label, b.label);
        }
    }
}
