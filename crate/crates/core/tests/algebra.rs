use std::collections::BTreeMap;

use arcalg::algebra::{enumerate_basis, multiply_diagrams, ArcAlgebra, BasisDiagram};
use arcalg::combinatorics::enumerate_weights;
use arcalg::klpoly::n_poly;
use arcalg::surgery::Schedule;
use arcalg::{Rational, F2};
use proptest::prelude::*;

fn triple_products(k: &ArcAlgebra, a: usize, b: usize, c: usize) -> (BTreeMap<usize, i64>, BTreeMap<usize, i64>) {
    let mut left = BTreeMap::new();
    for &(ab, x) in k.multiply(a, b) {
        for &(d, y) in k.multiply(ab, c) {
            *left.entry(d).or_insert(0) += x * y;
        }
    }
    let mut right = BTreeMap::new();
    for &(bc, x) in k.multiply(b, c) {
        for &(d, y) in k.multiply(a, bc) {
            *right.entry(d).or_insert(0) += x * y;
        }
    }
    left.retain(|_, v| *v != 0);
    right.retain(|_, v| *v != 0);
    (left, right)
}

fn assert_associative(k: &ArcAlgebra) {
    for a in 0..k.dim() {
        for &b in k.with_bottom(k.top(a)) {
            for &c in k.with_bottom(k.top(b)) {
                let (l, r) = triple_products(k, a, b, c);
                assert_eq!(l, r, "{} {} {}", k.diagram(a), k.diagram(b), k.diagram(c));
            }
        }
    }
}

#[test]
fn small_dimensions() {
    let k = ArcAlgebra::extended(1, 1).unwrap();
    assert_eq!(k.dim(), 5);
    assert_eq!(k.truncate().dim(), 2);
    for (m, n, dim) in [(1, 2, 9), (2, 1, 9), (2, 2, 47), (1, 3, 13), (2, 3, 101)] {
        assert_eq!(ArcAlgebra::extended(m, n).unwrap().dim(), dim, "({m},{n})");
    }
}

#[test]
fn basis_is_every_oriented_triple() {
    for (m, n) in [(1, 2), (2, 2), (2, 1)] {
        let ws = enumerate_weights(m, n);
        let mut brute = Vec::new();
        for b in &ws {
            for mid in &ws {
                for t in &ws {
                    if let Ok(d) = BasisDiagram::new(*b, *mid, *t) {
                        brute.push(d);
                    }
                }
            }
        }
        brute.sort();
        let mut basis = enumerate_basis(m, n, 1000).unwrap();
        basis.sort();
        assert_eq!(basis, brute);
    }
}

#[test]
fn dimension_cap_is_enforced() {
    assert!(enumerate_basis(2, 2, 46).is_err());
    assert!(enumerate_basis(2, 2, 47).is_ok());
}

#[test]
fn graded_cartan_matrix_matches_n_polynomials() {
    // dim_q e_λ K e_ν = Σ_μ n_μλ(q) n_μν(q)
    for (m, n) in [(1, 2), (2, 2), (2, 3), (1, 4)] {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let ws = k.labels().to_vec();
        let mut graded: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
        for d in k.basis() {
            let key = (k.label_index(&d.bottom).unwrap(), k.label_index(&d.top).unwrap(), d.degree);
            *graded.entry(key).or_insert(0) += 1;
        }
        for (i, l) in ws.iter().enumerate() {
            for (j, t) in ws.iter().enumerate() {
                let mut expect = vec![0u64; 2 * (m + n) + 1];
                for mu in &ws {
                    let a = n_poly(mu, l).unwrap();
                    let b = n_poly(mu, t).unwrap();
                    for (p, x) in a.coeffs().iter().enumerate() {
                        for (q, y) in b.coeffs().iter().enumerate() {
                            expect[p + q] += x * y;
                        }
                    }
                }
                for (deg, &e) in expect.iter().enumerate() {
                    assert_eq!(graded.get(&(i, j, deg)).copied().unwrap_or(0), e);
                }
            }
        }
    }
}

#[test]
fn associative_small() {
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)] {
        assert_associative(&ArcAlgebra::extended(m, n).unwrap());
    }
}

#[test]
fn associative_two_three() {
    assert_associative(&ArcAlgebra::extended(2, 3).unwrap());
}

#[test]
fn schedules_agree() {
    for (m, n) in [(2, 2), (2, 3)] {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for a in 0..k.dim() {
            for &b in k.with_bottom(k.top(a)) {
                let l = multiply_diagrams(k.diagram(a), k.diagram(b), Schedule::LeftmostFirst).unwrap();
                let r = multiply_diagrams(k.diagram(a), k.diagram(b), Schedule::RightmostFirst).unwrap();
                assert_eq!(l, r);
            }
        }
    }
}

#[test]
fn star_is_an_anti_automorphism() {
    for (m, n) in [(2, 2), (1, 3), (2, 3)] {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for a in 0..k.dim() {
            for &b in k.with_bottom(k.top(a)) {
                let mut lhs: Vec<(usize, i64)> =
                    k.multiply(a, b).iter().map(|&(c, x)| (k.star(c), x)).collect();
                lhs.sort();
                let mut rhs = k.multiply(k.star(b), k.star(a)).to_vec();
                rhs.sort();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn rotation_reverses_products() {
    for (m, n) in [(1, 2), (2, 3), (1, 3)] {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let r = ArcAlgebra::extended(n, m).unwrap();
        let rot = |a: usize| r.index_of(&k.diagram(a).rotate()).unwrap();
        for a in 0..k.dim() {
            for &b in k.with_bottom(k.top(a)) {
                let mut lhs: Vec<(usize, i64)> = k.multiply(a, b).iter().map(|&(c, x)| (rot(c), x)).collect();
                lhs.sort();
                let mut rhs = r.multiply(rot(b), rot(a)).to_vec();
                rhs.sort();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn khovanov_truncation_is_closed() {
    let k = ArcAlgebra::extended(2, 2).unwrap();
    let h = k.truncate();
    let emb = h.embedding().unwrap();
    for a in 0..h.dim() {
        assert!(h.diagram(a).bottom.is_regular() && h.diagram(a).top.is_regular());
        for &b in h.with_bottom(h.top(a)) {
            let direct: Vec<(usize, i64)> = k.multiply(emb[a], emb[b]).to_vec();
            let via: Vec<(usize, i64)> = h.multiply(a, b).iter().map(|&(c, x)| (emb[c], x)).collect();
            assert_eq!(direct, via);
        }
    }
    let e = k.schur_idempotent::<Rational>();
    assert_eq!(k.mul(&e, &e), e);
}

#[test]
fn generators_span_radical_modulo_square() {
    let k = ArcAlgebra::extended(2, 2).unwrap();
    let g0 = k.generators::<Rational>();
    let g2 = k.generators::<F2>();
    assert!(!g0.is_empty());
    assert!(g0.iter().all(|&a| k.degree(a) > 0));
    // Degree-one elements can never be products of two radical elements.
    for a in 0..k.dim() {
        if k.degree(a) == 1 {
            assert!(g0.contains(&a) && g2.contains(&a));
        }
    }
}

proptest! {
    #[test]
    fn products_are_homogeneous(a in 0usize..101, b in 0usize..101) {
        let k = ArcAlgebra::extended(2, 3).unwrap();
        for &(c, _) in k.multiply(a, b) {
            prop_assert_eq!(k.degree(c), k.degree(a) + k.degree(b));
            prop_assert_eq!(k.bottom(c), k.bottom(a));
            prop_assert_eq!(k.top(c), k.top(b));
        }
    }

    #[test]
    fn diagram_text_round_trip(a in 0usize..47) {
        let k = ArcAlgebra::extended(2, 2).unwrap();
        let d = *k.diagram(a);
        prop_assert_eq!(BasisDiagram::parse(&d.to_string()).unwrap(), d);
    }
}
