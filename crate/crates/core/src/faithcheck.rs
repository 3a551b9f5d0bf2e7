//! Computational checks of the cover results: the projective-injective
//! coresolution of tiltings, 0-faithfulness and its failure on square
//! boxes, the vanishing lemmas, the Ext comparison and the exact
//! equivalence for `|n−m| ≥ 2`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{Partition, Weight};
use crate::error::{ArcError, Result};
use crate::field::Field;
use crate::functors::Workbench;
use crate::repcat::{
    ext_dims_from, hom_dim, is_iso, minimal_resolution, ModuleMap, ModuleRep, DEFAULT_RESOLUTION_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Every computed witness holds but a budget cut the run short.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub n: usize,
    pub char: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jmax: Option<usize>,
}

/// One compared quantity: `lhs` and `rhs` are the dimensions on the two
/// sides of the claimed equality (or the data the check inspected).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub item: String,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Params,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub millis: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| !w.holds)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Largest Ext degree computed where the check leaves it open.
    pub jmax: usize,
    /// Dimension cap per resolution term.
    pub cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            jmax: 3,
            cap: DEFAULT_RESOLUTION_CAP,
        }
    }
}

pub(crate) struct Recorder {
    check: &'static str,
    params: Params,
    witnesses: Vec<Witness>,
    notes: Vec<String>,
    partial: bool,
    start: Instant,
}

impl Recorder {
    pub(crate) fn new<F: Field>(check: &'static str, m: usize, n: usize, jmax: Option<usize>) -> Self {
        Recorder {
            check,
            params: Params {
                m,
                n,
                char: F::CHARACTERISTIC,
                jmax,
            },
            witnesses: Vec::new(),
            notes: Vec::new(),
            partial: false,
            start: Instant::now(),
        }
    }

    pub(crate) fn push(&mut self, w: Witness) {
        self.witnesses.push(w);
    }

    pub(crate) fn record(&mut self, item: String, lhs: Vec<usize>, rhs: Vec<usize>, holds: bool) {
        self.push(Witness {
            item,
            lhs,
            rhs,
            holds,
            detail: None,
        });
    }

    pub(crate) fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    /// Records a budget overrun as a note, or passes any other error on.
    pub(crate) fn budget<T>(&mut self, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(ArcError::ResourceCap(msg)) => {
                self.partial = true;
                self.notes.push(msg);
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    pub(crate) fn finish(self) -> CheckReport {
        let status = if self.witnesses.iter().any(|w| !w.holds) {
            Status::Fail
        } else if self.partial {
            Status::Partial
        } else {
            Status::Pass
        };
        CheckReport {
            check: self.check.to_string(),
            params: self.params,
            status,
            witnesses: self.witnesses,
            notes: self.notes,
            millis: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(ArcError::Precondition(msg.into()))
    }
}

/// Injective hull `M → P(M^⊛)^⊛`.
pub fn injective_hull<F: Field>(m: &ModuleRep<F>) -> (ModuleRep<F>, ModuleMap<F>) {
    let (p, cover) = m.dual().projective_cover();
    (p.dual(), cover.dual())
}

/// Labels of the indecomposable summands of `M` if `M` is projective.
pub fn projective_summands<F: Field>(m: &ModuleRep<F>) -> Option<Vec<usize>> {
    let reps = m.top_representatives();
    let (p, _) = m.map_from_projectives(&reps);
    (p.dim() == m.dim()).then(|| reps.into_iter().map(|(l, _)| l).collect())
}

fn describe(labels: &[Weight], summands: &[usize]) -> String {
    if summands.is_empty() {
        return "0".into();
    }
    summands
        .iter()
        .map(|&l| format!("P({})", labels[l]))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The weight of the partition `(m^m)` in `Λ_{m,n}`, `m ≤ n`.
pub fn square_weight(m: usize, n: usize) -> Result<Weight> {
    Ok(Partition::new(vec![m; m], m, n)?.to_weight())
}

/// `0 → T(λ) → P⁰ → P¹` with projective-injective `P⁰`, `P¹`.
pub fn check_tilting_coresolution<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    require(m != n, "the coresolution needs m ≠ n")?;
    let mut rec = Recorder::new::<F>("tilting_coresolution", m, n, None);
    let k = wb.extended(m, n)?;
    let labels = k.labels().to_vec();
    let rows: Vec<Witness> = labels
        .par_iter()
        .map(|lam| -> Result<Witness> {
            let t = wb.tilting::<F>(lam)?;
            let (i0, iota) = injective_hull(&t);
            let c = i0.quotient(&iota.image()).0;
            let (i1, _) = injective_hull(&c);
            let s0 = projective_summands(&i0);
            let s1 = projective_summands(&i1);
            let regular = |s: &Option<Vec<usize>>| s.as_ref().is_some_and(|v| v.iter().all(|&l| labels[l].is_regular()));
            let holds = iota.rank() == t.dim() && regular(&s0) && regular(&s1);
            Ok(Witness {
                item: format!("T({lam})"),
                lhs: vec![t.dim(), i0.dim(), i1.dim()],
                rhs: vec![iota.rank()],
                holds,
                detail: Some(format!(
                    "P0 = {}; P1 = {}",
                    s0.as_deref().map_or("not projective".into(), |s| describe(&labels, s)),
                    s1.as_deref().map_or("not projective".into(), |s| describe(&labels, s)),
                )),
            })
        })
        .collect::<Result<_>>()?;
    rows.into_iter().for_each(|w| rec.push(w));
    Ok(rec.finish())
}

/// `η(T)` is an isomorphism, and `f` preserves Hom dimensions between
/// standards and tiltings.
pub fn check_0faithful<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    require(m != n, "0-faithfulness needs m ≠ n")?;
    let mut rec = Recorder::new::<F>("0faithful", m, n, None);
    let k = wb.extended(m, n)?;
    let mut mods: Vec<(String, ModuleRep<F>)> = Vec::new();
    for lam in k.labels() {
        mods.push((format!("Δ({lam})"), ModuleRep::standard(&k, lam)?));
    }
    for lam in k.labels() {
        let t = wb.tilting::<F>(lam)?;
        let (gft, eta) = wb.eta(&t)?;
        rec.record(format!("η(T({lam}))"), vec![t.dim()], vec![gft.dim()], eta.is_iso());
        mods.push((format!("T({lam})"), t));
    }
    let fmods: Vec<ModuleRep<F>> = mods.iter().map(|(_, x)| wb.f(x)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..mods.len()).flat_map(|a| (0..mods.len()).map(move |b| (a, b))).collect();
    let rows: Vec<Witness> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<Witness> {
            let lhs = hom_dim(&mods[a].1, &mods[b].1)?;
            let rhs = hom_dim(&fmods[a], &fmods[b])?;
            Ok(Witness {
                item: format!("Hom({}, {})", mods[a].0, mods[b].0),
                lhs: vec![lhs],
                rhs: vec![rhs],
                holds: lhs == rhs,
                detail: None,
            })
        })
        .collect::<Result<_>>()?;
    rows.into_iter().for_each(|w| rec.push(w));
    Ok(rec.finish())
}

/// On the square box, `Hom_K(Δ(∅), Δ(m^m)) = 0` while `fΔ(m^m) ≅ D(m^m)`
/// receives a nonzero map from `fΔ(∅)`.
pub fn check_0faithful_failure<F: Field>(wb: &Workbench, m: usize) -> Result<CheckReport> {
    require(m >= 1, "the failure witness needs m ≥ 1")?;
    let mut rec = Recorder::new::<F>("0faithful_failure", m, m, None);
    let k = wb.extended(m, m)?;
    let top = Weight::maximal(m, m);
    let bottom = Weight::minimal(m, m);
    let d_top = ModuleRep::<F>::standard(&k, &top)?;
    let d_bot = ModuleRep::<F>::standard(&k, &bottom)?;
    let lhs = hom_dim(&d_top, &d_bot)?;
    let (f_top, f_bot) = (wb.f(&d_top)?, wb.f(&d_bot)?);
    let rhs = hom_dim(&f_top, &f_bot)?;
    rec.record(format!("Hom(Δ({top}), Δ({bottom}))"), vec![lhs], vec![rhs], lhs == 0 && rhs >= 1);
    let simple = wb.f(&ModuleRep::<F>::simple(&k, &bottom)?)?;
    rec.record(
        format!("fΔ({bottom}) ≅ D({bottom})"),
        vec![f_bot.dim()],
        vec![simple.dim()],
        is_iso(&f_bot, &simple)?,
    );
    Ok(rec.finish())
}

/// The vanishing statements used for the Ext comparison, for `n > m`, in
/// degrees below `min(n−m, jmax+1)`.
pub fn check_vanishing_lemmas<F: Field>(wb: &Workbench, m: usize, n: usize, opts: CheckOptions) -> Result<CheckReport> {
    require(n > m, "the vanishing lemmas need n > m")?;
    let mut rec = Recorder::new::<F>("vanishing_lemmas", m, n, Some(opts.jmax));
    let k = wb.extended(m, n)?;
    let top = (n - m).min(opts.jmax + 1);
    let sq = square_weight(m, n)?;
    let minimal = Weight::minimal(m, n);
    let d_sq = wb.f(&ModuleRep::<F>::simple(&k, &sq)?)?;
    let d_min = wb.f(&ModuleRep::<F>::simple(&k, &minimal)?)?;
    let cells: Vec<ModuleRep<F>> = k.labels().iter().map(|l| wb.cell::<F>(l)).collect::<Result<_>>()?;
    if let Some(res) = rec.budget(minimal_resolution(&d_sq, top, opts.cap))? {
        let e = ext_dims_from(&res, &d_min, top - 1)?;
        let holds = e.iter().all(|&x| x == 0);
        rec.record(format!("Ext^j(D({sq}), D({minimal})), 0 ≤ j < {top}"), e, vec![0; top], holds);
        for lam in k.labels() {
            let ft = wb.f(&wb.tilting::<F>(lam)?)?;
            let e = ext_dims_from(&res, &ft, top - 1)?;
            let tail = e[1..].to_vec();
            let holds = tail.iter().all(|&x| x == 0);
            rec.record(format!("Ext^j(D({sq}), fT({lam})), 0 < j < {top}"), tail, vec![0; top - 1], holds);
        }
    }
    let empty = Weight::maximal(m, n);
    for (lam, s) in k.labels().iter().zip(&cells) {
        if *lam == empty {
            continue;
        }
        let h = hom_dim(&d_sq, s)?;
        rec.record(format!("Hom(D({sq}), S({lam}))"), vec![h], vec![0], h == 0);
    }
    if top > 1 {
        for lam in k.labels() {
            let fp = wb.f(&ModuleRep::<F>::projective(&k, lam)?)?;
            let Some(res) = rec.budget(minimal_resolution(&fp, top, opts.cap))? else {
                continue;
            };
            for (mu, s) in k.labels().iter().zip(&cells) {
                let e = ext_dims_from(&res, s, top - 1)?;
                let tail = e[1..].to_vec();
                let holds = tail.iter().all(|&x| x == 0);
                rec.record(format!("Ext^j(fP({lam}), S({mu})), 0 < j < {top}"), tail, vec![0; top - 1], holds);
            }
        }
    } else {
        rec.note("degree window 0 < j < n−m is empty".into());
    }
    Ok(rec.finish())
}

/// The modules `X` on which the Ext comparison is run: standards, then
/// simples, radicals of projectives and duals of standards.
pub fn theorem_a_sample<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<Vec<(String, ModuleRep<F>)>> {
    let k = wb.extended(m, n)?;
    let mut out = Vec::new();
    for lam in k.labels() {
        out.push((format!("Δ({lam})"), ModuleRep::standard(&k, lam)?));
    }
    for lam in k.labels() {
        out.push((format!("L({lam})"), ModuleRep::simple(&k, lam)?));
    }
    for lam in k.labels() {
        let p = ModuleRep::<F>::projective(&k, lam)?;
        out.push((format!("rad P({lam})"), p.submodule(&p.radical()).0));
    }
    for lam in k.labels() {
        out.push((format!("Δ({lam})^⊛"), ModuleRep::<F>::standard(&k, lam)?.dual()));
    }
    Ok(out)
}

/// `dim Ext^j_K(X, Δ(μ)) = dim Ext^j_H(fX, S(μ))` for `0 ≤ j < |n−m|`.
/// For standards `X` the degrees up to `jmax` are also compared and the
/// first disagreement is noted.
pub fn check_theorem_a<F: Field>(wb: &Workbench, m: usize, n: usize, opts: CheckOptions) -> Result<CheckReport> {
    require(m != n, "the Ext comparison needs m ≠ n")?;
    let mut rec = Recorder::new::<F>("theorem_A", m, n, Some(opts.jmax));
    let k = wb.extended(m, n)?;
    let d = m.abs_diff(n);
    let stds: Vec<ModuleRep<F>> = k.labels().iter().map(|l| ModuleRep::standard(&k, l)).collect::<Result<_>>()?;
    let cells: Vec<ModuleRep<F>> = stds.iter().map(|s| wb.f(s)).collect::<Result<_>>()?;
    let sample = theorem_a_sample::<F>(wb, m, n)?;
    let nstd = k.labels().len();
    type Row = (Vec<Witness>, Vec<String>, Option<String>);
    let rows: Vec<Row> = sample
        .par_iter()
        .enumerate()
        .map(|(idx, (name, x))| -> Result<Row> {
            let hi = if idx < nstd { (d - 1).max(opts.jmax) } else { d - 1 };
            let fx = wb.f(x)?;
            let (rk, rh) = match (minimal_resolution(x, hi + 1, opts.cap), minimal_resolution(&fx, hi + 1, opts.cap)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(ArcError::ResourceCap(msg)), _) | (_, Err(ArcError::ResourceCap(msg))) => {
                    return Ok((Vec::new(), Vec::new(), Some(format!("{name}: {msg}"))));
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            let mut ws = Vec::new();
            let mut notes = Vec::new();
            for (mu, (s, c)) in k.labels().iter().zip(stds.iter().zip(&cells)) {
                let ek = ext_dims_from(&rk, s, hi)?;
                let eh = ext_dims_from(&rh, c, hi)?;
                ws.push(Witness {
                    item: format!("Ext^j({name}, Δ({mu})) vs Ext^j(f{name}, S({mu})), 0 ≤ j < {d}"),
                    lhs: ek[..d].to_vec(),
                    rhs: eh[..d].to_vec(),
                    holds: ek[..d] == eh[..d],
                    detail: None,
                });
                if let Some(j) = (d..=hi).find(|&j| ek[j] != eh[j]) {
                    notes.push(format!("{name}, {mu}: first disagreement at j = {j} ({} vs {})", ek[j], eh[j]));
                }
            }
            Ok((ws, notes, None))
        })
        .collect::<Result<_>>()?;
    for (ws, notes, cap) in rows {
        ws.into_iter().for_each(|w| rec.push(w));
        notes.into_iter().for_each(|s| rec.note(s));
        if let Some(msg) = cap {
            rec.budget::<()>(Err(ArcError::ResourceCap(msg)))?;
        }
    }
    Ok(rec.finish())
}

/// `g(fM) ≅ M` and `f(g(fM)) ≅ fM` on standards, tiltings, projectives
/// and the non-split extensions `G^{t_i}Δ(λ′)`.
pub fn check_exact_equivalence<F: Field>(wb: &Workbench, m: usize, n: usize) -> Result<CheckReport> {
    require(m.abs_diff(n) >= 2, "the exact equivalence needs |n−m| ≥ 2")?;
    let mut rec = Recorder::new::<F>("exact_equivalence", m, n, None);
    let k = wb.extended(m, n)?;
    let mut mods: Vec<(String, ModuleRep<F>)> = Vec::new();
    for lam in k.labels() {
        mods.push((format!("Δ({lam})"), ModuleRep::standard(&k, lam)?));
        mods.push((format!("T({lam})"), wb.tilting(lam)?));
        mods.push((format!("P({lam})"), ModuleRep::projective(&k, lam)?));
    }
    let small = wb.extended(m - 1, n - 1)?;
    for i in 1..m + n {
        for lam in small.labels() {
            let d = ModuleRep::<F>::standard(&small, lam)?;
            mods.push((format!("G^t{i} Δ({lam})"), wb.g_t(i, &d)?));
        }
    }
    let rows: Vec<Witness> = mods
        .par_iter()
        .map(|(name, x)| -> Result<Witness> {
            let fx = wb.f(x)?;
            let gfx = wb.g(&fx)?;
            let fgfx = wb.f(&gfx)?;
            let holds = is_iso(&gfx, x)? && is_iso(&fgfx, &fx)?;
            Ok(Witness {
                item: format!("gf({name}) ≅ {name}, fgf({name}) ≅ f({name})"),
                lhs: vec![x.dim(), fx.dim()],
                rhs: vec![gfx.dim(), fgfx.dim()],
                holds,
                detail: None,
            })
        })
        .collect::<Result<_>>()?;
    rows.into_iter().for_each(|w| rec.push(w));
    Ok(rec.finish())
}
