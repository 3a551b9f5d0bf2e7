use std::sync::Arc;

use arcalg::algebra::ArcAlgebra;
use arcalg::klpoly::{n_poly, p_poly};
use arcalg::repcat::{
    decomposition_matrix, delta_filtration_mults, delta_filtration_mults_with, ext_dim, ext_dims, hom_dim,
    hom_space, is_iso, minimal_resolution, ModuleRep, Subspace, DEFAULT_RESOLUTION_CAP,
};
use arcalg::{Field, Partition, Rational, Weight, F2, F3};
use proptest::prelude::*;

type Q = Rational;

fn w(s: &str) -> Weight {
    Weight::parse(s).unwrap()
}

fn boxes(max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..max {
        for n in 1..max {
            if m + n <= max {
                out.push((m, n));
            }
        }
    }
    out
}

fn part(s: &str, m: usize, n: usize) -> Weight {
    Partition::parse(s, m, n).unwrap().to_weight()
}

fn indicator(alg: &ArcAlgebra, lam: &Weight) -> Vec<usize> {
    alg.labels().iter().map(|x| usize::from(x == lam)).collect()
}

#[test]
fn projectives_of_k11() {
    let k = ArcAlgebra::extended(1, 1).unwrap();
    let p0 = ModuleRep::<Q>::projective(&k, &w("^v")).unwrap();
    assert_eq!(p0.dim(), 2);
    assert_eq!(p0.comp_mult(&w("^v")).unwrap(), 1);
    assert_eq!(p0.comp_mult(&w("v^")).unwrap(), 1);
    let p1 = ModuleRep::<Q>::projective(&k, &w("v^")).unwrap();
    assert_eq!(p1.dim(), 3);
    let rad = p0.radical();
    assert_eq!(rad.dim(), 1);
    assert_eq!(rad.dims(), indicator(&k, &w("v^")));
    let d0 = ModuleRep::<Q>::standard(&k, &w("^v")).unwrap();
    assert_eq!(d0.dim(), 2);
    assert!(is_iso(&d0, &p0).unwrap());
    let d1 = ModuleRep::<Q>::standard(&k, &w("v^")).unwrap();
    assert_eq!(hom_dim(&d0, &d1).unwrap(), 0);
    let l0 = ModuleRep::<Q>::simple(&k, &w("^v")).unwrap();
    let l1 = ModuleRep::<Q>::simple(&k, &w("v^")).unwrap();
    assert_eq!(ext_dim(&l0, &l1, 1).unwrap(), 1);
    assert!(ModuleRep::<Q>::simple(&k, &w("^^")).is_err());
}

#[test]
fn modules_satisfy_the_action_axioms() {
    for (m, n) in boxes(5) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for l in 0..k.labels().len() {
            ModuleRep::<Q>::projective_at(&k, l).check_action().unwrap();
            ModuleRep::<Q>::simple_at(&k, l).check_action().unwrap();
            let d = ModuleRep::<Q>::standard_at(&k, l).unwrap();
            d.check_action().unwrap();
            d.dual().check_action().unwrap();
        }
    }
}

#[test]
fn projective_dimension_is_column_count() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let cartan = k.cartan_matrix();
        for l in 0..k.labels().len() {
            let p = ModuleRep::<Q>::projective_at(&k, l);
            let col: usize = cartan.iter().map(|row| row[l]).sum();
            assert_eq!(p.dim(), col);
        }
    }
}

fn decomposition_numbers<F: Field>(max: usize) {
    for (m, n) in boxes(max) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for lam in k.labels() {
            let d = ModuleRep::<F>::standard(&k, lam).unwrap();
            for mu in k.labels() {
                let expect = n_poly(lam, mu).unwrap().at_one() as usize;
                assert_eq!(d.comp_mult(mu).unwrap(), expect, "[Δ({lam}):L({mu})] over {}", F::name());
            }
        }
    }
}

#[test]
fn decomposition_numbers_rational() {
    decomposition_numbers::<Q>(6);
}

#[test]
fn decomposition_numbers_f2() {
    decomposition_numbers::<F2>(6);
}

#[test]
fn standards_are_rigid_with_graded_layers() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for lam in k.labels() {
            let d = ModuleRep::<Q>::standard(&k, lam).unwrap();
            let rad = d.radical_series();
            let soc = d.socle_series();
            assert_eq!(rad.len(), soc.len());
            let len = rad.len() - 1;
            for (t, r) in rad.iter().enumerate() {
                assert_eq!(r, &soc[len - t], "Δ({lam}) not rigid");
            }
            for (t, layer) in d.radical_layers().iter().enumerate() {
                for (mu_i, mu) in k.labels().iter().enumerate() {
                    let expect = n_poly(lam, mu).unwrap().coeff(t) as usize;
                    assert_eq!(layer[mu_i], expect, "rad_{t} Δ({lam}) at {mu}");
                }
            }
            assert_eq!(d.socle().dims(), indicator(&k, &lam.circ()), "soc Δ({lam})");
        }
    }
}

#[test]
fn uniserial_standards() {
    let k = ArcAlgebra::extended(2, 3).unwrap();
    let d = ModuleRep::<Q>::standard(&k, &Weight::maximal(2, 3)).unwrap();
    let layers = d.radical_layers();
    assert_eq!(layers.len(), 3);
    for (t, sq) in ["∅", "1", "2^2"].iter().enumerate() {
        assert_eq!(layers[t], indicator(&k, &part(sq, 2, 3)));
    }
    for (m, n, top, rest) in [(2, 3, "2", vec!["2", "2,1", "2^3"]), (1, 3, "1^2", vec!["1^2", "1^3"])] {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let d = ModuleRep::<Q>::standard(&k, &part(top, m, n)).unwrap();
        let layers = d.radical_layers();
        assert_eq!(layers.len(), m + 1);
        for (t, p) in rest.iter().enumerate() {
            assert_eq!(layers[t], indicator(&k, &part(p, m, n)), "({m},{n}) layer {t}");
        }
    }
}

#[test]
fn radical_agrees_with_maps_to_simples() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for l in 0..k.labels().len() {
            let p = ModuleRep::<Q>::projective_at(&k, l);
            let mut common = Subspace::full(p.dims());
            for mu in 0..k.labels().len() {
                let s = ModuleRep::<Q>::simple_at(&k, mu);
                for f in hom_space(&p, &s).unwrap() {
                    common = common.intersection(&f.kernel());
                }
            }
            assert_eq!(common, p.radical());
        }
    }
}

#[test]
fn algebra_modulo_radical_and_nilpotency() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let projs: Vec<ModuleRep<Q>> = (0..k.labels().len()).map(|l| ModuleRep::projective_at(&k, l)).collect();
        let refs: Vec<&ModuleRep<Q>> = projs.iter().collect();
        let regular = ModuleRep::direct_sum(&k, &refs);
        assert_eq!(regular.dim(), k.dim());
        assert_eq!(regular.dim() - regular.radical().dim(), k.labels().len());
        assert!(regular.radical_series().len() <= k.max_degree() + 2);
    }
}

#[test]
fn simples_and_homs() {
    let k = ArcAlgebra::extended(2, 2).unwrap();
    for (l, lam) in k.labels().iter().enumerate() {
        let s = ModuleRep::<Q>::simple_at(&k, l);
        assert_eq!(s.socle().dim(), 1);
        assert_eq!(hom_dim(&s, &s).unwrap(), 1);
        assert!(is_iso(&s, &s.dual()).unwrap());
        for mu in k.labels() {
            assert_eq!(s.comp_mult(mu).unwrap(), usize::from(mu == lam));
        }
        let p = ModuleRep::<Q>::projective_at(&k, l);
        let q = p.quotient(&p.radical()).0;
        assert!(is_iso(&q, &s).unwrap());
        for mu in 0..k.labels().len() {
            let t = ModuleRep::<Q>::standard_at(&k, mu).unwrap();
            assert_eq!(hom_dim(&p, &t).unwrap(), t.dims()[l]);
            assert_eq!(ext_dims(&p, &t, 2, DEFAULT_RESOLUTION_CAP).unwrap(), vec![t.dims()[l], 0, 0]);
        }
    }
}

#[test]
fn dual_is_an_involution() {
    let k = ArcAlgebra::extended(2, 2).unwrap();
    for l in 0..k.labels().len() {
        let d = ModuleRep::<Q>::standard_at(&k, l).unwrap();
        let dd = d.dual().dual();
        assert_eq!(dd.dim(), d.dim());
        assert!(is_iso(&d, &dd).unwrap());
    }
}

#[test]
fn resolutions_of_standards_follow_inverse_kl() {
    for (m, n) in boxes(5) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for lam in k.labels() {
            let d = ModuleRep::<Q>::standard(&k, lam).unwrap();
            let res = minimal_resolution(&d, 3, DEFAULT_RESOLUTION_CAP).unwrap();
            for kk in 0..=3 {
                let mults = res.multiplicities(kk);
                for (mu_i, mu) in k.labels().iter().enumerate() {
                    let expect = p_poly(lam, mu).unwrap().coeff(kk) as usize;
                    assert_eq!(mults[mu_i], expect, "P_{kk} of Δ({lam}) at {mu}");
                }
            }
        }
    }
}

#[test]
fn brauer_humphreys_reciprocity() {
    for (m, n) in boxes(5) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let dec = decomposition_matrix::<Q>(&k).unwrap();
        for l in 0..k.labels().len() {
            let p = ModuleRep::<Q>::projective_at(&k, l);
            let c = delta_filtration_mults_with(&p, &dec).unwrap();
            for mu in 0..k.labels().len() {
                assert_eq!(c[mu], dec[mu][l]);
            }
        }
    }
}

#[test]
fn projective_injectives_are_the_regular_ones() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for (l, lam) in k.labels().iter().enumerate() {
            let p = ModuleRep::<Q>::projective_at(&k, l);
            assert_eq!(is_iso(&p, &p.dual()).unwrap(), lam.is_regular(), "P({lam})");
        }
    }
}

#[test]
fn kernels_of_standard_covers_are_delta_filtered() {
    let k = ArcAlgebra::extended(2, 2).unwrap();
    let dec = decomposition_matrix::<Q>(&k).unwrap();
    for l in 0..k.labels().len() {
        let d = ModuleRep::<Q>::standard_at(&k, l).unwrap();
        let (p, cover) = d.projective_cover();
        let (ker, _) = p.submodule(&cover.kernel());
        let c = delta_filtration_mults_with(&ker, &dec).unwrap();
        let cp = delta_filtration_mults_with(&p, &dec).unwrap();
        for mu in 0..k.labels().len() {
            assert_eq!(c[mu] + usize::from(mu == l), cp[mu]);
        }
    }
    let l = ModuleRep::<Q>::simple(&k, &Weight::maximal(2, 2)).unwrap();
    assert!(delta_filtration_mults(&l).is_err());
}

#[test]
fn standards_over_small_primes_match() {
    let k = ArcAlgebra::extended(2, 2).unwrap();
    for l in 0..k.labels().len() {
        let a = ModuleRep::<Q>::standard_at(&k, l).unwrap();
        let b = ModuleRep::<F3>::standard_at(&k, l).unwrap();
        assert_eq!(a.dims(), b.dims());
        assert_eq!(a.radical_layers(), b.radical_layers());
    }
}

#[test]
fn khovanov_algebra_has_no_standards() {
    let h = ArcAlgebra::khovanov(1, 2).unwrap();
    assert!(ModuleRep::<Q>::standard_at(&h, 0).is_err());
    let p = ModuleRep::<Q>::projective_at(&h, 0);
    p.check_action().unwrap();
}

fn spin_is_submodule(k: &Arc<ArcAlgebra>, l: usize, coeffs: &[i64]) {
    let p = ModuleRep::<Q>::projective_at(k, l);
    let mut seeds = Vec::new();
    for (mu, &d) in p.dims().iter().enumerate() {
        if d > 0 {
            let v: Vec<Q> = (0..d).map(|i| Q::from_i64(coeffs[(mu + i) % coeffs.len()])).collect();
            seeds.push((mu, v));
        }
    }
    let s = p.spin(&seeds);
    let (sub, _) = p.submodule(&s);
    sub.check_action().unwrap();
    let (quo, _) = p.quotient(&s);
    quo.check_action().unwrap();
    assert_eq!(sub.dim() + quo.dim(), p.dim());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn spans_are_submodules(l in 0usize..6, coeffs in prop::collection::vec(-3i64..4, 1..6)) {
        let k = ArcAlgebra::extended(2, 2).unwrap();
        spin_is_submodule(&k, l, &coeffs);
    }
}
