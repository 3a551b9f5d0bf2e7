//! Acceptance run: one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};

use arcalg::algebra::{multiply_diagrams, ArcAlgebra, BasisDiagram};
use arcalg::combinatorics::enumerate_weights;
use arcalg::faithcheck::{
    check_0faithful, check_0faithful_failure, check_exact_equivalence, check_theorem_a, check_tilting_coresolution,
    check_vanishing_lemmas, injective_hull, CheckOptions, CheckReport,
};
use arcalg::functors::Workbench;
use arcalg::klpoly::{arrow_chain_support_check, little_claim_violations, n_poly, p_poly, verify_inverse, Poly};
use arcalg::repcat::{hom_dim, is_iso, ModuleRep};
use arcalg::surgery::Schedule;
use arcalg::verify;
use arcalg::{CupDiagram, Field, PairSign, Partition, Rational, Weight, F2, F3};

type Q = Rational;

fn w(s: &str) -> Weight {
    Weight::parse(s).unwrap()
}

fn part(s: &str, m: usize, n: usize) -> Weight {
    Partition::parse(s, m, n).unwrap().to_weight()
}

fn boxes(max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=max {
        for n in 1..=max - m {
            out.push((m, n));
        }
    }
    out
}

fn ok(r: CheckReport) {
    let bad: Vec<_> = r.failures().map(|x| x.item.clone()).collect();
    assert!(r.passed(), "{} at ({},{}): {:?}", r.check, r.params.m, r.params.n, bad);
    assert!(!r.witnesses.is_empty(), "{} has no witnesses", r.check);
}

fn indicator(k: &ArcAlgebra, lam: &Weight) -> Vec<usize> {
    k.labels().iter().map(|x| usize::from(x == lam)).collect()
}

fn goldens() {
    let lam = w("v^v^^vv^^v");
    assert_eq!(lam.to_partition(), Partition::parse("5,4,2^2", 5, 5).unwrap());
    assert_eq!(Partition::parse("5,4,2^2", 5, 5).unwrap().to_weight(), lam);
    let d = lam.cup_diagram();
    assert_eq!(d, CupDiagram::from_cups(10, &[(1, 2), (3, 4), (6, 9), (7, 8)]).unwrap());
    assert_eq!(d.rays(), vec![5, 10]);
    let mu = part("5,4,2,2", 5, 5);
    let nu = part("4,3,1", 5, 5);
    assert!(mu.cup_diagram().is_oriented(&nu));
    assert_eq!(mu.cup_diagram().degree(&nu).unwrap(), 3);
    let lp = w("^^v^vv^");
    assert_eq!(lp.insert_pair(4, PairSign::Plus).unwrap(), w("^^vv^^vv^"));
    assert_eq!(lp.insert_pair(4, PairSign::Minus).unwrap(), w("^^v^v^vv^"));
    assert_eq!(part("5^3,3,1^2", 5, 6).circ(), part("5^3,4,3^2", 5, 6));
}

fn kl_inverse() {
    for (m, n) in boxes(8) {
        assert!(verify_inverse(m, n, usize::MAX).unwrap(), "({m},{n})");
    }
}

fn kl_support() {
    for (m, n) in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5)] {
        let p = p_poly(&Weight::minimal(m, n), &part(&format!("{m}^{m}"), m, n)).unwrap();
        assert_eq!(p, Poly::monomial(m * (n - m)), "({m},{n})");
    }
    for (m, n) in boxes(7) {
        assert!(arrow_chain_support_check(m, n, usize::MAX).unwrap().passed(), "({m},{n})");
    }
    for (m, n) in boxes(8) {
        assert!(little_claim_violations(m, n, usize::MAX).unwrap().is_empty(), "({m},{n})");
    }
}

fn middles(a: &str, b: &str, s: Schedule) -> Vec<(String, i64)> {
    let a = BasisDiagram::parse(a).unwrap();
    let b = BasisDiagram::parse(b).unwrap();
    let mut out: Vec<(String, i64)> = multiply_diagrams(&a, &b, s)
        .unwrap()
        .into_iter()
        .map(|(d, c)| {
            assert_eq!((d.bottom, d.top), (a.bottom, b.top));
            (d.middle.to_string(), c)
        })
        .collect();
    out.sort();
    out
}

fn algebra_structure() {
    let wb = Workbench::default();
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
        ok(verify::algebra::<Q>(&wb, m, n).unwrap());
    }
    for s in [Schedule::LeftmostFirst, Schedule::RightmostFirst] {
        assert_eq!(
            middles("v^v^|v^v^|vv^^", "vv^^|v^v^|v^v^", s),
            vec![("^vv^".to_string(), 1), ("v^^v".to_string(), 1)]
        );
        assert_eq!(
            middles("vv^^|v^v^|v^v^", "v^v^|v^v^|vv^^", s),
            vec![("^v^v".to_string(), 1), ("v^v^".to_string(), 1)]
        );
    }
    // rot ∘ * is an algebra isomorphism K^1_2 → K^2_1.
    let k = ArcAlgebra::extended(1, 2).unwrap();
    let r = ArcAlgebra::extended(2, 1).unwrap();
    assert_eq!(k.dim(), r.dim());
    let phi = |a: usize| r.index_of(&k.diagram(a).star().rotate()).unwrap();
    let mut image: Vec<usize> = (0..k.dim()).map(phi).collect();
    image.sort();
    image.dedup();
    assert_eq!(image.len(), r.dim());
    for a in 0..k.dim() {
        for b in 0..k.dim() {
            let mut lhs: Vec<(usize, i64)> = k.multiply(a, b).iter().map(|&(c, x)| (phi(c), x)).collect();
            lhs.sort();
            let mut rhs = r.multiply(phi(a), phi(b)).to_vec();
            rhs.sort();
            assert_eq!(lhs, rhs);
        }
    }
}

fn decomposition<F: Field>(max: usize) {
    let wb = Workbench::default();
    for (m, n) in boxes(max) {
        let k = wb.extended(m, n).unwrap();
        let dec = arcalg::repcat::decomposition_matrix::<F>(&k).unwrap();
        for (i, lam) in k.labels().iter().enumerate() {
            for (j, mu) in k.labels().iter().enumerate() {
                assert_eq!(dec[i][j] as u64, n_poly(lam, mu).unwrap().at_one(), "[Δ({lam}):L({mu})]");
            }
        }
    }
}

fn rigidity() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for lam in k.labels() {
            let d = ModuleRep::<Q>::standard(&k, lam).unwrap();
            let rad = d.radical_series();
            let soc = d.socle_series();
            assert_eq!(rad.len(), soc.len());
            let len = rad.len() - 1;
            for (t, x) in rad.iter().enumerate() {
                assert_eq!(x, &soc[len - t], "Δ({lam}) not rigid");
            }
            for (t, layer) in d.radical_layers().iter().enumerate() {
                for (j, mu) in k.labels().iter().enumerate() {
                    assert_eq!(layer[j] as u64, n_poly(lam, mu).unwrap().coeff(t), "rad_{t} Δ({lam})");
                }
            }
            assert_eq!(d.socle().dims(), indicator(&k, &lam.circ()), "soc Δ({lam})");
        }
    }
    for (m, n, top, layers) in [
        (2, 3, "∅", vec!["∅", "1", "2^2"]),
        (2, 3, "2", vec!["2", "2,1", "2^3"]),
        (1, 3, "1^2", vec!["1^2", "1^3"]),
    ] {
        let k = ArcAlgebra::extended(m, n).unwrap();
        let got = ModuleRep::<Q>::standard(&k, &part(top, m, n)).unwrap().radical_layers();
        let want: Vec<Vec<usize>> = layers.iter().map(|p| indicator(&k, &part(p, m, n))).collect();
        assert_eq!(got, want, "Δ({top}) in ({m},{n})");
    }
}

fn resolutions() {
    let wb = Workbench::default();
    for (m, n) in boxes(5) {
        ok(verify::standards::<Q>(&wb, m, n).unwrap());
    }
}

fn reciprocity() {
    let wb = Workbench::default();
    for (m, n) in boxes(5) {
        ok(verify::projectives::<Q>(&wb, m, n).unwrap());
    }
}

fn projective_injectives() {
    for (m, n) in boxes(6) {
        let k = ArcAlgebra::extended(m, n).unwrap();
        for lam in k.labels() {
            let p = ModuleRep::<Q>::projective(&k, lam).unwrap();
            let (hull, _) = injective_hull(&p);
            assert_eq!(hull.dim() == p.dim(), lam.is_regular(), "P({lam})");
        }
    }
}

fn functor_statements() {
    let wb = Workbench::default();
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3)] {
        ok(verify::translations::<Q>(&wb, m, n).unwrap());
        let k = wb.extended(m, n).unwrap();
        let small = wb.extended(m - 1, n - 1).unwrap();
        for i in 1..m + n {
            for x in small.labels() {
                let gx = wb.g_t(i, &ModuleRep::<Q>::standard(&small, x).unwrap()).unwrap();
                for y in k.labels() {
                    let ly = ModuleRep::<Q>::simple(&k, y).unwrap();
                    let gy = wb.g_t_star(i, &ly).unwrap();
                    let dx = ModuleRep::standard(&small, x).unwrap();
                    assert_eq!(hom_dim(&gx, &ly).unwrap(), hom_dim(&dx, &gy).unwrap());
                    assert_eq!(hom_dim(&ly, &gx).unwrap(), hom_dim(&gy, &dx).unwrap());
                }
            }
        }
    }
}

fn tiltings_over<F: Field>(wb: &Workbench, m: usize, n: usize) {
    ok(verify::tiltings::<F>(wb, m, n).unwrap());
}

fn tiltings() {
    let wb = Workbench::default();
    for (m, n) in boxes(6) {
        tiltings_over::<Q>(&wb, m, n);
    }
    for lam in enumerate_weights(2, 2) {
        let first = wb.tilting::<Q>(&lam).unwrap();
        let last = wb.tilting_with::<Q>(&lam, &|c: &[usize]| *c.last().unwrap()).unwrap();
        assert!(is_iso(&first, &last).unwrap(), "T({lam})");
    }
}

fn faithful_over<F: Field>(wb: &Workbench, off_diagonal: &[(usize, usize)], coresolve: &[(usize, usize)]) {
    for &(m, n) in coresolve {
        ok(check_tilting_coresolution::<F>(wb, m, n).unwrap());
    }
    for &(m, n) in off_diagonal {
        ok(check_0faithful::<F>(wb, m, n).unwrap());
    }
}

fn zero_faithful() {
    let wb = Workbench::default();
    let off = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];
    faithful_over::<Q>(&wb, &off, &[(1, 2), (1, 3), (2, 3)]);
    for (m, n) in boxes(5) {
        let k = wb.extended(m, n).unwrap();
        for lam in k.labels().iter().filter(|l| l.is_regular()) {
            let p = ModuleRep::<Q>::projective(&k, lam).unwrap();
            let (_, eta) = wb.eta(&p).unwrap();
            assert!(eta.is_iso(), "η on P({lam})");
        }
    }
    for m in [1, 2] {
        let r = check_0faithful_failure::<Q>(&wb, m).unwrap();
        assert_eq!(r.witnesses[0].lhs, vec![0]);
        assert_eq!(r.witnesses[0].rhs, vec![1]);
        ok(r);
    }
}

fn higher_faithfulness() {
    let wb = Workbench::default();
    ok(check_vanishing_lemmas::<Q>(&wb, 1, 3, CheckOptions { jmax: 1, ..Default::default() }).unwrap());
    ok(check_vanishing_lemmas::<Q>(&wb, 1, 4, CheckOptions { jmax: 2, ..Default::default() }).unwrap());
    for (m, n) in [(1, 2), (1, 3), (2, 3), (1, 4)] {
        ok(check_theorem_a::<Q>(&wb, m, n, CheckOptions::default()).unwrap());
    }
    for (m, n) in [(1, 3), (1, 4)] {
        ok(check_exact_equivalence::<Q>(&wb, m, n).unwrap());
    }
}

fn small_primes_for<F: Field>() {
    let wb = Workbench::default();
    for (m, n) in [(1, 2), (1, 3)] {
        let k = wb.extended(m, n).unwrap();
        let dec = arcalg::repcat::decomposition_matrix::<F>(&k).unwrap();
        for (i, lam) in k.labels().iter().enumerate() {
            for (j, mu) in k.labels().iter().enumerate() {
                assert_eq!(dec[i][j] as u64, n_poly(lam, mu).unwrap().at_one());
            }
        }
        tiltings_over::<F>(&wb, m, n);
        faithful_over::<F>(&wb, &[(m, n)], &[(m, n)]);
    }
}

fn small_primes() {
    small_primes_for::<F2>();
    small_primes_for::<F3>();
}

fn main() {
    let criteria: [(&str, fn()); 14] = [
        ("golden examples", goldens),
        ("KL inverse identity", kl_inverse),
        ("p at the square, arrow chains, little claim", kl_support),
        ("algebra structure and sample products", algebra_structure),
        ("decomposition numbers over Q and F2", || {
            decomposition::<Q>(6);
            decomposition::<F2>(6);
        }),
        ("rigid standards with graded layers", rigidity),
        ("resolutions of standards", resolutions),
        ("BH reciprocity", reciprocity),
        ("projective-injectives are the regular ones", projective_injectives),
        ("translation functors", functor_statements),
        ("tilting modules", tiltings),
        ("coresolution and 0-faithfulness", zero_faithful),
        ("vanishing, Ext comparison, exact equivalence", higher_faithfulness),
        ("characteristics 2 and 3", small_primes),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let pass = catch_unwind(AssertUnwindSafe(run)).is_ok();
        println!("criterion {:>2} ({name}): {}", i + 1, if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
