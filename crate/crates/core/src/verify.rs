//! Verification suites: every structural property the crate computes,
//! packaged as [`CheckReport`]s for a single box `(m, n)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::ArcAlgebra;
use crate::combinatorics::{enumerate_weights, PairSign, Partition, Weight};
use crate::error::{ArcError, Result};
use crate::faithcheck::{
    check_0faithful, check_0faithful_failure, check_exact_equivalence, check_theorem_a, check_tilting_coresolution,
    check_vanishing_lemmas, CheckOptions, CheckReport, Recorder,
};
use crate::field::Field;
use crate::functors::Workbench;
use crate::klpoly::{arrow_chain_support_check, little_claim_violations, n_poly, p_poly, verify_inverse};
use crate::repcat::{
    decomposition_matrix, delta_filtration_mults_with, ext_dim, is_iso, minimal_resolution, ModuleRep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Combinatorics,
    Algebra,
    Repcat,
    Functors,
    Faithfulness,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["combinatorics", "algebra", "repcat", "functors", "faithfulness", "all"];
}

impl FromStr for Suite {
    type Err = ArcError;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "combinatorics" => Suite::Combinatorics,
            "algebra" => Suite::Algebra,
            "repcat" => Suite::Repcat,
            "functors" => Suite::Functors,
            "faithfulness" => Suite::Faithfulness,
            "all" => Suite::All,
            _ => return Err(ArcError::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::Combinatorics,
            Suite::Algebra,
            Suite::Repcat,
            Suite::Functors,
            Suite::Faithfulness,
            Suite::All,
        ]
        .iter()
        .position(|s| s == self)
        .unwrap_or(5);
        f.write_str(Suite::NAMES[i])
    }
}

type Job<'a> = Box<dyn Fn() -> Result<CheckReport> + Send + Sync + 'a>;

/// Runs the suite on the box `(m, n)`; independent checks run in
/// parallel and come back in a fixed order.
pub fn run_suite<F: Field>(
    wb: &Workbench,
    suite: Suite,
    m: usize,
    n: usize,
    opts: CheckOptions,
) -> Result<Vec<CheckReport>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Combinatorics) {
        jobs.push(Box::new(move || combinatorics::<F>(m, n)));
        jobs.push(Box::new(move || kazhdan_lusztig::<F>(m, n)));
    }
    if want(Suite::Algebra) {
        jobs.push(Box::new(move || algebra::<F>(wb, m, n)));
    }
    if want(Suite::Repcat) {
        jobs.push(Box::new(move || standards::<F>(wb, m, n)));
        jobs.push(Box::new(move || projectives::<F>(wb, m, n)));
    }
    if want(Suite::Functors) && m > 0 && n > 0 {
        jobs.push(Box::new(move || translations::<F>(wb, m, n)));
        jobs.push(Box::new(move || tiltings::<F>(wb, m, n)));
    }
    if want(Suite::Faithfulness) && m > 0 && n > 0 {
        if m == n {
            jobs.push(Box::new(move || check_0faithful_failure::<F>(wb, m)));
        } else {
            jobs.push(Box::new(move || check_tilting_coresolution::<F>(wb, m, n)));
            jobs.push(Box::new(move || check_0faithful::<F>(wb, m, n)));
            jobs.push(Box::new(move || check_theorem_a::<F>(wb, m, n, opts)));
        }
        if n > m {
            jobs.push(Box::new(move || check_vanishing_lemmas::<F>(wb, m, n, opts)));
        }
        if m.abs_diff(n) >= 2 {
            jobs.push(Box::new(move || check_exact_equivalence::<F>(wb, m, n)));
        }
    }
    jobs.par_iter().map(|j| j()).collect()
}

fn binomial(a: usize, b: usize) -> usize {
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

/// Weight counts, the partition bijection, `λ°` and the extremal weights.
pub fn combinatorics<F: Field>(m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("combinatorics", m, n, None);
    let weights = enumerate_weights(m, n);
    rec.record("|Λ| = C(m+n, m)".into(), vec![weights.len()], vec![binomial(m + n, m)], weights.len() == binomial(m + n, m));
    let round = weights
        .iter()
        .filter(|w| Partition::new(w.to_partition().parts().to_vec(), m, n).map(|p| p.to_weight()).ok() != Some(**w))
        .count();
    rec.record("weight ↔ partition round trip".into(), vec![round], vec![0], round == 0);
    let bad_circ = weights
        .iter()
        .filter(|w| {
            let c = w.circ();
            !c.is_regular() || (c == **w) != (**w == Weight::minimal(m, n)) || !c.cup_diagram().is_oriented(w)
        })
        .count();
    rec.record("λ° regular, oriented with λ, fixed only on (m^n)".into(), vec![bad_circ], vec![0], bad_circ == 0);
    let bad_order = weights
        .iter()
        .filter(|w| !Weight::minimal(m, n).leq(w).unwrap_or(false) || !w.leq(&Weight::maximal(m, n)).unwrap_or(false))
        .count();
    rec.record("(m^n) ≤ λ ≤ ∅".into(), vec![bad_order], vec![0], bad_order == 0);
    Ok(rec.finish())
}

/// The inverse identity, the arrow-chain support property and the
/// little claim.
pub fn kazhdan_lusztig<F: Field>(m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("kazhdan_lusztig", m, n, None);
    let cap = usize::MAX;
    let inv = verify_inverse(m, n, cap)?;
    rec.record("(p(−q))·(n(q)) = I".into(), vec![usize::from(inv)], vec![1], inv);
    let chain = arrow_chain_support_check(m, n, cap)?;
    rec.record("arrow-chain support".into(), vec![usize::from(chain.passed())], vec![1], chain.passed());
    let bad = little_claim_violations(m, n, cap)?;
    rec.record("little claim".into(), vec![bad.len()], vec![0], bad.is_empty());
    Ok(rec.finish())
}

fn triple_products(k: &ArcAlgebra, a: usize, b: usize, c: usize) -> (HashMap<usize, i64>, HashMap<usize, i64>) {
    let mut left = HashMap::new();
    for &(x, s) in k.multiply(a, b) {
        for &(y, t) in k.multiply(x, c) {
            *left.entry(y).or_insert(0) += s * t;
        }
    }
    let mut right = HashMap::new();
    for &(x, s) in k.multiply(b, c) {
        for &(y, t) in k.multiply(a, x) {
            *right.entry(y).or_insert(0) += s * t;
        }
    }
    left.retain(|_, v| *v != 0);
    right.retain(|_, v| *v != 0);
    (left, right)
}

/// Associativity, grading, the anti-automorphism `*` and the graded
/// Cartan matrix.
pub fn algebra<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("algebra", m, n, None);
    let k = wb.extended(m, n)?;
    let bad_assoc: usize = (0..k.dim())
        .into_par_iter()
        .map(|a| {
            let mut bad = 0;
            for &b in k.with_bottom(k.top(a)) {
                for &c in k.with_bottom(k.top(b)) {
                    let (l, r) = triple_products(&k, a, b, c);
                    bad += usize::from(l != r);
                }
            }
            bad
        })
        .sum();
    rec.record("(ab)c = a(bc)".into(), vec![bad_assoc], vec![0], bad_assoc == 0);
    let mut bad_grade = 0;
    let mut bad_star = 0;
    for a in 0..k.dim() {
        for &b in k.with_bottom(k.top(a)) {
            let prod = k.multiply(a, b);
            bad_grade += prod.iter().filter(|&&(x, _)| k.degree(x) != k.degree(a) + k.degree(b)).count();
            let mut lhs: Vec<(usize, i64)> = prod.iter().map(|&(x, c)| (k.star(x), c)).collect();
            lhs.sort();
            let mut rhs = k.multiply(k.star(b), k.star(a)).to_vec();
            rhs.sort();
            bad_star += usize::from(lhs != rhs);
        }
    }
    rec.record("products are homogeneous".into(), vec![bad_grade], vec![0], bad_grade == 0);
    rec.record("(ab)* = b*a*".into(), vec![bad_star], vec![0], bad_star == 0);
    let cartan = k.cartan_matrix();
    let labels = k.labels();
    let mut bad_cartan = 0;
    for (i, l) in labels.iter().enumerate() {
        for (j, t) in labels.iter().enumerate() {
            let mut expect = 0u64;
            for mu in labels {
                expect += n_poly(mu, l)?.at_one() * n_poly(mu, t)?.at_one();
            }
            bad_cartan += usize::from(cartan[i][j] as u64 != expect);
        }
    }
    rec.record("dim e_λKe_μ = Σ_ν n_νλ(1) n_νμ(1)".into(), vec![bad_cartan], vec![0], bad_cartan == 0);
    Ok(rec.finish())
}

/// Decomposition numbers, socles and resolutions of standards.
pub fn standards<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("standards", m, n, Some(3));
    let k = wb.extended(m, n)?;
    let labels = k.labels();
    let dec = decomposition_matrix::<F>(&k)?;
    for (i, lam) in labels.iter().enumerate() {
        let expect: Vec<usize> = labels.iter().map(|mu| n_poly(lam, mu).map(|p| p.at_one() as usize)).collect::<Result<_>>()?;
        rec.record(format!("[Δ({lam}) : L(μ)] = n(1)"), dec[i].clone(), expect.clone(), dec[i] == expect);
        let d = ModuleRep::<F>::standard(&k, lam)?;
        let soc = d.socle().dims();
        let want: Vec<usize> = labels.iter().map(|x| usize::from(*x == lam.circ())).collect();
        rec.record(format!("soc Δ({lam}) = L({})", lam.circ()), soc.clone(), want.clone(), soc == want);
        let res = minimal_resolution(&d, 3, usize::MAX)?;
        for deg in 0..=3 {
            let got = res.multiplicities(deg);
            let want: Vec<usize> =
                labels.iter().map(|mu| p_poly(lam, mu).map(|p| p.coeff(deg) as usize)).collect::<Result<_>>()?;
            rec.record(format!("P_{deg} of Δ({lam}) = ⊕ p^({deg}) P(μ)"), got.clone(), want.clone(), got == want);
        }
    }
    Ok(rec.finish())
}

/// Brauer–Humphreys reciprocity and the projective-injectives.
pub fn projectives<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("projectives", m, n, None);
    let k = wb.extended(m, n)?;
    let dec = decomposition_matrix::<F>(&k)?;
    for (i, lam) in k.labels().iter().enumerate() {
        let p = ModuleRep::<F>::projective(&k, lam)?;
        let got = delta_filtration_mults_with(&p, &dec)?;
        let want: Vec<usize> = dec.iter().map(|row| row[i]).collect();
        rec.record(format!("(P({lam}) : Δ(μ)) = [Δ(μ) : L({lam})]"), got.clone(), want.clone(), got == want);
        let self_dual = is_iso(&p, &p.dual())?;
        rec.record(
            format!("P({lam}) self-dual iff regular"),
            vec![usize::from(self_dual)],
            vec![usize::from(lam.is_regular())],
            self_dual == lam.is_regular(),
        );
    }
    Ok(rec.finish())
}

fn indicator(k: &Arc<ArcAlgebra>, keep: impl Fn(&Weight) -> bool) -> Vec<usize> {
    k.labels().iter().map(|x| usize::from(keep(x))).collect()
}

/// `G^{t_i}` and `G^{t_i*}` on projectives, standards and simples.
pub fn translations<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("translations", m, n, None);
    let k = wb.extended(m, n)?;
    let small = wb.extended(m - 1, n - 1)?;
    let dec = decomposition_matrix::<F>(&k)?;
    for i in 1..m + n {
        for lam in small.labels() {
            let plus = lam.insert_pair(i, PairSign::Plus)?;
            let minus = lam.insert_pair(i, PairSign::Minus)?;
            let gp = wb.g_t(i, &ModuleRep::<F>::projective(&small, lam)?)?;
            let ok = is_iso(&gp, &ModuleRep::projective(&k, &plus)?)?;
            rec.record(format!("G^t{i} P({lam}) ≅ P({plus})"), vec![gp.dim()], vec![usize::from(ok)], ok);
            let gd = wb.g_t(i, &ModuleRep::<F>::standard(&small, lam)?)?;
            let got = delta_filtration_mults_with(&gd, &dec)?;
            let want = indicator(&k, |x| *x == plus || *x == minus);
            rec.record(format!("(G^t{i} Δ({lam}) : Δ) = Δ({minus}) + Δ({plus})"), got.clone(), want.clone(), got == want);
        }
        for mu in k.labels() {
            let gd = wb.g_t_star(i, &ModuleRep::<F>::standard(&k, mu)?)?;
            let ok = if mu.in_down_up(i) || mu.in_up_down(i) {
                is_iso(&gd, &ModuleRep::standard(&small, &mu.remove_pair(i)?)?)?
            } else {
                gd.is_zero()
            };
            rec.record(format!("G^t{i}* Δ({mu})"), vec![gd.dim()], vec![usize::from(ok)], ok);
            let gl = wb.g_t_star(i, &ModuleRep::<F>::simple(&k, mu)?)?;
            let ok = if mu.in_down_up(i) {
                is_iso(&gl, &ModuleRep::simple(&small, &mu.remove_pair(i)?)?)?
            } else {
                gl.is_zero()
            };
            rec.record(format!("G^t{i}* L({mu})"), vec![gl.dim()], vec![usize::from(ok)], ok);
        }
    }
    Ok(rec.finish())
}

/// Self-duality, Δ-filtrations, socles and Ext-vanishing of tiltings.
pub fn tiltings<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    let mut rec = Recorder::new::<F>("tiltings", m, n, None);
    let k = wb.extended(m, n)?;
    let dec = decomposition_matrix::<F>(&k)?;
    let stds: Vec<ModuleRep<F>> = k.labels().iter().map(|l| ModuleRep::standard(&k, l)).collect::<Result<_>>()?;
    for lam in k.labels() {
        let t = wb.tilting::<F>(lam)?;
        let dual = is_iso(&t, &t.dual())?;
        rec.record(format!("T({lam}) self-dual"), vec![t.dim()], vec![usize::from(dual)], dual);
        let mults = delta_filtration_mults_with(&t, &dec)?;
        let support_ok = k.labels().iter().zip(&mults).all(|(mu, &c)| {
            if mu == lam {
                c == 1
            } else {
                c == 0 || mu.lt(lam).unwrap_or(false)
            }
        });
        rec.record(format!("(T({lam}) : Δ) has top Δ({lam}) once"), mults, vec![], support_ok);
        let soc = t.socle().dims();
        let want = indicator(&k, |x| *x == lam.circ());
        rec.record(format!("soc T({lam}) = L({})", lam.circ()), soc.clone(), want.clone(), soc == want);
        let ext: Vec<usize> = stds.iter().map(|d| ext_dim(d, &t, 1)).collect::<Result<_>>()?;
        let zero = ext.iter().all(|&e| e == 0);
        rec.record(format!("Ext^1(Δ(μ), T({lam})) = 0"), ext, vec![0; k.labels().len()], zero);
    }
    Ok(rec.finish())
}
