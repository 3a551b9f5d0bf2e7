//! Bimodules, the projective functors `G^{t_i}`, `G^{t_i*}` and their
//! truncations, the Schur functors `f`, `g`, `g̃`, the counit `η` and the
//! inductive construction of tilting modules.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, ArcAlgebra, DEFAULT_DIM_CAP};
use crate::combinatorics::{enumerate_weights, PairSign, Weight};
use crate::error::{ArcError, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix};
use crate::repcat::{hom_space, ModuleMap, ModuleRep};
use crate::surgery::{default_xs, gapped_xs, Layer, Picture, Schedule};

/// A basis diagram `μ̲ ν t λ η̄` of a `t_i` or `t_i*` bimodule: cup diagram
/// of `bottom`, weight `lower` on the bottom line, the matching, weight
/// `upper` on the top line and the cap diagram of `top`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StackedDiagram {
    pub bottom: Weight,
    pub lower: Weight,
    pub upper: Weight,
    pub top: Weight,
}

impl fmt::Display for StackedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}|{}", self.bottom, self.lower, self.upper, self.top)
    }
}

type Action = Vec<Vec<(usize, Vec<(usize, i64)>)>>;

/// A bimodule with a basis, integer actions on both sides, and every
/// basis element living in `e_λ B e_ρ` for a left label `λ` and a right
/// label `ρ`.
pub struct Bimodule {
    name: String,
    left: Arc<ArcAlgebra>,
    right: Arc<ArcAlgebra>,
    left_label: Vec<usize>,
    right_label: Vec<usize>,
    names: Vec<String>,
    /// `left_act[a]` lists `(x, a·x)` for every `x` with left label `top(a)`.
    left_act: Action,
    /// `right_act[b]` lists `(x, x·b)` for every `x` with right label `bottom(b)`.
    right_act: Action,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

fn read_stacked(p: &Picture) -> Result<(Weight, Weight, Weight, Weight)> {
    if p.lines.len() != 2 {
        return Err(ArcError::Surgery(format!("expected two lines, found {}", p.lines.len())));
    }
    Ok((
        p.bottom_weight,
        Weight::from_symbols(&p.lines[0])?,
        Weight::from_symbols(&p.lines[1])?,
        p.top_weight,
    ))
}

fn check_t_boxes(big: &ArcAlgebra, small: &ArcAlgebra, i: usize) -> Result<()> {
    if big.kind() != AlgebraKind::Extended || small.kind() != AlgebraKind::Extended {
        return Err(ArcError::Precondition("t_i bimodules are built over K".into()));
    }
    let (m, n) = (big.m(), big.n());
    if m == 0 || n == 0 || small.m() + 1 != m || small.n() + 1 != n {
        return Err(ArcError::Precondition(format!(
            "t_i joins K^{m}_{n} and K^{}_{}, boxes must differ by (1,1)",
            small.m(),
            small.n()
        )));
    }
    if i == 0 || i >= m + n {
        return Err(ArcError::BadPosition {
            pos: i,
            len: m + n,
            reason: "t_i needs 1 <= i < m+n",
        });
    }
    Ok(())
}

impl Bimodule {
    /// `K^{t_i}`, a `(K^m_n, K^{m-1}_{n-1})`-bimodule.
    pub fn t(big: &Arc<ArcAlgebra>, small: &Arc<ArcAlgebra>, i: usize) -> Result<Bimodule> {
        check_t_boxes(big, small, i)?;
        let len = big.m() + big.n();
        let long = default_xs(len);
        let xs = vec![long.clone(), gapped_xs(&long, i)];
        let mut basis = Vec::new();
        for lam in small.labels() {
            for eta in small.labels().iter().filter(|e| e.cup_diagram().is_oriented(lam)) {
                for sign in [PairSign::Plus, PairSign::Minus] {
                    let nu = lam.insert_pair(i, sign)?;
                    for mu in big.labels().iter().filter(|m| m.cup_diagram().is_oriented(&nu)) {
                        basis.push(StackedDiagram {
                            bottom: *mu,
                            lower: nu,
                            upper: *lam,
                            top: *eta,
                        });
                    }
                }
            }
        }
        let layer = Layer::t(i, len);
        Self::from_stacked(format!("K^t{i} over {}", big.name()), big, small, basis, xs, layer)
    }

    /// `K^{t_i*}`, a `(K^{m-1}_{n-1}, K^m_n)`-bimodule.
    pub fn t_star(small: &Arc<ArcAlgebra>, big: &Arc<ArcAlgebra>, i: usize) -> Result<Bimodule> {
        check_t_boxes(big, small, i)?;
        let len = big.m() + big.n();
        let long = default_xs(len);
        let xs = vec![gapped_xs(&long, i), long];
        let mut basis = Vec::new();
        for lam in small.labels() {
            for mu in small.labels().iter().filter(|m| m.cup_diagram().is_oriented(lam)) {
                for sign in [PairSign::Plus, PairSign::Minus] {
                    let nu = lam.insert_pair(i, sign)?;
                    for eta in big.labels().iter().filter(|e| e.cup_diagram().is_oriented(&nu)) {
                        basis.push(StackedDiagram {
                            bottom: *mu,
                            lower: *lam,
                            upper: nu,
                            top: *eta,
                        });
                    }
                }
            }
        }
        let layer = Layer::t_star(i, len);
        Self::from_stacked(format!("K^t{i}* over {}", big.name()), small, big, basis, xs, layer)
    }

    fn from_stacked(
        name: String,
        left: &Arc<ArcAlgebra>,
        right: &Arc<ArcAlgebra>,
        mut basis: Vec<StackedDiagram>,
        xs: Vec<Vec<i64>>,
        layer: Layer,
    ) -> Result<Bimodule> {
        basis.sort_by_key(|d| (d.bottom, d.top, d.lower, d.upper));
        let index: HashMap<(Weight, Weight, Weight, Weight), usize> = basis
            .iter()
            .enumerate()
            .map(|(k, d)| ((d.bottom, d.lower, d.upper, d.top), k))
            .collect();
        let pictures: Vec<Picture> = basis
            .iter()
            .map(|d| {
                Picture::new(
                    d.bottom,
                    d.top,
                    vec![d.lower.symbols(), d.upper.symbols()],
                    Some(xs.clone()),
                    vec![layer.clone()],
                )
            })
            .collect::<Result<_>>()?;
        let left_label: Vec<usize> = basis
            .iter()
            .map(|d| left.label_index(&d.bottom))
            .collect::<Result<_>>()?;
        let right_label: Vec<usize> = basis
            .iter()
            .map(|d| right.label_index(&d.top))
            .collect::<Result<_>>()?;
        let lookup = |terms: Vec<(Picture, i64)>| -> Result<Vec<(usize, i64)>> {
            let mut out = Vec::with_capacity(terms.len());
            for (p, c) in terms {
                let key = read_stacked(&p)?;
                let k = *index.get(&key).ok_or_else(|| {
                    ArcError::Surgery(format!(
                        "action left the basis: {}|{}|{}|{}",
                        key.0, key.1, key.2, key.3
                    ))
                })?;
                out.push((k, c));
            }
            out.sort();
            Ok(out)
        };
        let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); left.labels().len()];
        let mut by_right: Vec<Vec<usize>> = vec![Vec::new(); right.labels().len()];
        for k in 0..basis.len() {
            by_left[left_label[k]].push(k);
            by_right[right_label[k]].push(k);
        }
        let mut left_act = Vec::with_capacity(left.dim());
        for a in 0..left.dim() {
            let pa = left.diagram(a).picture();
            let mut row = Vec::new();
            for &x in &by_left[left.top(a)] {
                let terms = pa.stack(&pictures[x])?.reduce(Schedule::LeftmostFirst)?;
                row.push((x, lookup(terms)?));
            }
            left_act.push(row);
        }
        let mut right_act = Vec::with_capacity(right.dim());
        for b in 0..right.dim() {
            let pb = right.diagram(b).picture();
            let mut row = Vec::new();
            for &x in &by_right[right.bottom(b)] {
                let terms = pictures[x].stack(&pb)?.reduce(Schedule::LeftmostFirst)?;
                row.push((x, lookup(terms)?));
            }
            right_act.push(row);
        }
        Ok(Bimodule {
            name,
            left: left.clone(),
            right: right.clone(),
            left_label,
            right_label,
            names: basis.iter().map(|d| d.to_string()).collect(),
            left_act,
            right_act,
        })
    }

    /// `e K` as an `(H, K)`-bimodule, for `H` a truncation of `K`.
    pub fn e_k(k: &Arc<ArcAlgebra>, h: &Arc<ArcAlgebra>) -> Result<Bimodule> {
        let emb = truncation_map(k, h)?;
        let keep: Vec<usize> = (0..k.dim()).filter(|&x| k.diagram(x).bottom.is_regular()).collect();
        let back: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let hl = label_map(k, h)?;
        let k_to_h: HashMap<usize, usize> = hl.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let left_label = keep.iter().map(|&x| k_to_h[&k.bottom(x)]).collect();
        let right_label = keep.iter().map(|&x| k.top(x)).collect();
        let left_act = (0..h.dim())
            .map(|a| {
                let big = emb[a];
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &x)| k.bottom(x) == k.top(big))
                    .map(|(i, &x)| (i, k.multiply(big, x).iter().map(|&(y, c)| (back[&y], c)).collect()))
                    .collect()
            })
            .collect();
        let right_act = (0..k.dim())
            .map(|b| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &x)| k.top(x) == k.bottom(b))
                    .map(|(i, &x)| (i, k.multiply(x, b).iter().map(|&(y, c)| (back[&y], c)).collect()))
                    .collect()
            })
            .collect();
        Ok(Bimodule {
            name: format!("e{}", k.name()),
            left: h.clone(),
            right: k.clone(),
            left_label,
            right_label,
            names: keep.iter().map(|&x| k.diagram(x).to_string()).collect(),
            left_act,
            right_act,
        })
    }

    /// `K e` as a `(K, H)`-bimodule.
    pub fn k_e(k: &Arc<ArcAlgebra>, h: &Arc<ArcAlgebra>) -> Result<Bimodule> {
        let emb = truncation_map(k, h)?;
        let keep: Vec<usize> = (0..k.dim()).filter(|&x| k.diagram(x).top.is_regular()).collect();
        let back: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let hl = label_map(k, h)?;
        let k_to_h: HashMap<usize, usize> = hl.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let left_label = keep.iter().map(|&x| k.bottom(x)).collect();
        let right_label = keep.iter().map(|&x| k_to_h[&k.top(x)]).collect();
        let left_act = (0..k.dim())
            .map(|a| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &x)| k.bottom(x) == k.top(a))
                    .map(|(i, &x)| (i, k.multiply(a, x).iter().map(|&(y, c)| (back[&y], c)).collect()))
                    .collect()
            })
            .collect();
        let right_act = (0..h.dim())
            .map(|b| {
                let big = emb[b];
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &x)| k.top(x) == k.bottom(big))
                    .map(|(i, &x)| (i, k.multiply(x, big).iter().map(|&(y, c)| (back[&y], c)).collect()))
                    .collect()
            })
            .collect();
        Ok(Bimodule {
            name: format!("{}e", k.name()),
            left: k.clone(),
            right: h.clone(),
            left_label,
            right_label,
            names: keep.iter().map(|&x| k.diagram(x).to_string()).collect(),
            left_act,
            right_act,
        })
    }

    /// `e B e'`: keeps the basis elements with regular outer labels and
    /// restricts both actions to the truncations.
    pub fn truncate(&self, left_h: &Arc<ArcAlgebra>, right_h: &Arc<ArcAlgebra>) -> Result<Bimodule> {
        let lemb = truncation_map(&self.left, left_h)?;
        let remb = truncation_map(&self.right, right_h)?;
        let ll = label_map(&self.left, left_h)?;
        let rl = label_map(&self.right, right_h)?;
        let l_back: HashMap<usize, usize> = ll.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let r_back: HashMap<usize, usize> = rl.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&x| l_back.contains_key(&self.left_label[x]) && r_back.contains_key(&self.right_label[x]))
            .collect();
        let back: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let remap = |row: &Vec<(usize, Vec<(usize, i64)>)>| -> Vec<(usize, Vec<(usize, i64)>)> {
            row.iter()
                .filter_map(|(x, res)| {
                    back.get(x)
                        .map(|&i| (i, res.iter().map(|&(y, c)| (back[&y], c)).collect()))
                })
                .collect()
        };
        Ok(Bimodule {
            name: format!("e({})e", self.name),
            left: left_h.clone(),
            right: right_h.clone(),
            left_label: keep.iter().map(|&x| l_back[&self.left_label[x]]).collect(),
            right_label: keep.iter().map(|&x| r_back[&self.right_label[x]]).collect(),
            names: keep.iter().map(|&x| self.names[x].clone()).collect(),
            left_act: lemb.iter().map(|&a| remap(&self.left_act[a])).collect(),
            right_act: remb.iter().map(|&b| remap(&self.right_act[b])).collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.left_label.len()
    }

    pub fn left(&self) -> &Arc<ArcAlgebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<ArcAlgebra> {
        &self.right
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    /// `a · x` for a left basis element `a`.
    pub fn act_left(&self, a: usize, x: usize) -> &[(usize, i64)] {
        self.left_act[a]
            .iter()
            .find(|(y, _)| *y == x)
            .map_or(&[], |(_, r)| r.as_slice())
    }

    /// `x · b` for a right basis element `b`.
    pub fn act_right(&self, x: usize, b: usize) -> &[(usize, i64)] {
        self.right_act[b]
            .iter()
            .find(|(y, _)| *y == x)
            .map_or(&[], |(_, r)| r.as_slice())
    }

    /// Basis elements of `B e_ρ` grouped by left label, in index order.
    fn right_column(&self, rho: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.left.labels().len()];
        for x in 0..self.dim() {
            if self.right_label[x] == rho {
                out[self.left_label[x]].push(x);
            }
        }
        out
    }

    /// `B e_ρ` (or all of `B` for `None`) as a left module.
    pub fn left_module<F: Field>(&self, rho: Option<usize>) -> Result<ModuleRep<F>> {
        let mut groups = vec![Vec::new(); self.left.labels().len()];
        for x in 0..self.dim() {
            if rho.is_none_or(|r| self.right_label[x] == r) {
                groups[self.left_label[x]].push(x);
            }
        }
        let pos: HashMap<usize, usize> = groups
            .iter()
            .flat_map(|g| g.iter().enumerate().map(|(i, &x)| (x, i)))
            .collect();
        let alg = &self.left;
        let blocks = (0..alg.dim())
            .map(|a| {
                let (al, ga) = (alg.bottom(a), alg.top(a));
                let mut m = Matrix::<F>::zeros(groups[al].len(), groups[ga].len());
                for (x, res) in &self.left_act[a] {
                    let Some(&c) = pos.get(x) else { continue };
                    for &(y, k) in res {
                        let r = pos[&y];
                        let v = m.get(r, c).clone() + F::from_i64(k);
                        m.set(r, c, v);
                    }
                }
                m
            })
            .collect();
        ModuleRep::new(alg.clone(), groups.iter().map(|g| g.len()).collect(), blocks)
    }

    /// Checks `(a·x)·b = a·(x·b)` on every basis triple.
    pub fn check_commuting(&self) -> Result<()> {
        let mul_right = |v: &[(usize, i64)], b: usize| -> HashMap<usize, i64> {
            let mut acc = HashMap::new();
            for &(x, c) in v {
                for &(y, d) in self.act_right(x, b) {
                    *acc.entry(y).or_insert(0) += c * d;
                }
            }
            acc.retain(|_, v| *v != 0);
            acc
        };
        for a in 0..self.left.dim() {
            for (x, ax) in &self.left_act[a] {
                for b in 0..self.right.dim() {
                    if self.right.bottom(b) != self.right_label[*x] {
                        continue;
                    }
                    let lhs = mul_right(ax, b);
                    let mut rhs: HashMap<usize, i64> = HashMap::new();
                    for &(y, c) in self.act_right(*x, b) {
                        for &(z, d) in self.act_left(a, y) {
                            *rhs.entry(z).or_insert(0) += c * d;
                        }
                    }
                    rhs.retain(|_, v| *v != 0);
                    if lhs != rhs {
                        return Err(ArcError::Precondition(format!(
                            "actions do not commute on {} * {} * {}",
                            self.left.diagram(a),
                            self.names[*x],
                            self.right.diagram(b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks `(x·b)·b' = x·(bb')` on every basis triple.
    pub fn check_right_action(&self) -> Result<()> {
        let r = &self.right;
        for b in 0..r.dim() {
            for (x, xb) in &self.right_act[b] {
                for &b2 in r.with_bottom(r.top(b)) {
                    let mut lhs: HashMap<usize, i64> = HashMap::new();
                    for &(y, c) in xb {
                        for &(z, d) in self.act_right(y, b2) {
                            *lhs.entry(z).or_insert(0) += c * d;
                        }
                    }
                    let mut rhs: HashMap<usize, i64> = HashMap::new();
                    for &(bb, c) in r.multiply(b, b2) {
                        for &(z, d) in self.act_right(*x, bb) {
                            *rhs.entry(z).or_insert(0) += c * d;
                        }
                    }
                    lhs.retain(|_, v| *v != 0);
                    rhs.retain(|_, v| *v != 0);
                    if lhs != rhs {
                        return Err(ArcError::Precondition(format!(
                            "right action fails on {} * {} * {}",
                            self.names[*x],
                            r.diagram(b),
                            r.diagram(b2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Index in `k` of each basis element of its truncation `h`.
fn truncation_map(k: &Arc<ArcAlgebra>, h: &Arc<ArcAlgebra>) -> Result<Vec<usize>> {
    if h.kind() != AlgebraKind::Khovanov || k.kind() != AlgebraKind::Extended || h.m() != k.m() || h.n() != k.n() {
        return Err(ArcError::Precondition(format!("{} is not a truncation of {}", h.name(), k.name())));
    }
    (0..h.dim())
        .map(|a| {
            k.index_of(h.diagram(a))
                .ok_or_else(|| ArcError::Precondition("truncation basis not found".into()))
        })
        .collect()
}

/// Label index in `k` of each label of `h`.
fn label_map(k: &ArcAlgebra, h: &ArcAlgebra) -> Result<Vec<usize>> {
    h.labels().iter().map(|w| k.label_index(w)).collect()
}

/// `B ⊗_R N` for a bimodule `B` with right algebra `R` and an `R`-module
/// `N`: the cokernel of `x·b ⊗ v − x ⊗ b·v`, with the induced left action.
pub fn tensor<F: Field>(b: &Bimodule, n: &ModuleRep<F>) -> Result<ModuleRep<F>> {
    if !Arc::ptr_eq(&b.right, n.algebra()) {
        return Err(ArcError::Precondition(format!(
            "{} cannot be tensored with a module over {}",
            b.name,
            n.algebra().name()
        )));
    }
    let left = &b.left;
    let nl = left.labels().len();
    let nd = n.dims();
    let mut off = vec![0; b.dim()];
    let mut tdims = vec![0; nl];
    let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nl];
    for x in 0..b.dim() {
        let l = b.left_label[x];
        off[x] = tdims[l];
        tdims[l] += nd[b.right_label[x]];
        for j in 0..nd[b.right_label[x]] {
            slots[l].push((x, j));
        }
    }
    let mut rel: Vec<Echelon<F>> = tdims.iter().map(|&d| Echelon::new(d)).collect();
    let right = &b.right;
    for &g in right.generators::<F>().iter() {
        let block = n.block(g);
        for (x, xg) in &b.right_act[g] {
            let l = b.left_label[*x];
            for j in 0..block.cols() {
                let mut v = vec![F::zero(); tdims[l]];
                for &(y, c) in xg {
                    v[off[y] + j] = v[off[y] + j].clone() + F::from_i64(c);
                }
                for t in 0..block.rows() {
                    let e = block.get(t, j);
                    if !e.is_zero() {
                        v[off[*x] + t] = v[off[*x] + t].clone() - e.clone();
                    }
                }
                rel[l].insert(v);
            }
        }
    }
    let free: Vec<Vec<usize>> = rel.iter().map(|e| e.free_columns()).collect();
    let qdims: Vec<usize> = free.iter().map(|f| f.len()).collect();
    let blocks = (0..left.dim())
        .map(|a| {
            let (al, ga) = (left.bottom(a), left.top(a));
            let mut m = Matrix::zeros(qdims[al], qdims[ga]);
            let col_of: HashMap<(usize, usize), usize> =
                free[ga].iter().enumerate().map(|(c, &p)| (slots[ga][p], c)).collect();
            for (x, ax) in &b.left_act[a] {
                for j in 0..nd[b.right_label[*x]] {
                    let Some(&c) = col_of.get(&(*x, j)) else { continue };
                    let mut v = vec![F::zero(); tdims[al]];
                    for &(y, k) in ax {
                        v[off[y] + j] = v[off[y] + j].clone() + F::from_i64(k);
                    }
                    for (r, val) in rel[al].quotient_coordinates(v).into_iter().enumerate() {
                        m.set(r, c, val);
                    }
                }
            }
            m
        })
        .collect();
    ModuleRep::new(left.clone(), qdims, blocks)
}

fn flatten<F: Field>(f: &ModuleMap<F>) -> Vec<F> {
    let mut out = Vec::new();
    for p in &f.parts {
        for r in 0..p.rows() {
            out.extend_from_slice(p.row(r));
        }
    }
    out
}

/// `Hom_L(B, N)` for a bimodule `B` with left algebra `L` and an
/// `L`-module `N`, as a module over the right algebra of `B` via
/// `(b·φ)(x) = φ(x·b)`.
pub struct Coinduced<F: Field> {
    pub module: ModuleRep<F>,
    /// Weight space `ρ` is spanned by the rows of `spaces[ρ]`, each a
    /// flattened map `B e_ρ → N`.
    spaces: Vec<Echelon<F>>,
    columns: Vec<Vec<Vec<usize>>>,
}

pub fn coinduce<F: Field>(b: &Bimodule, n: &ModuleRep<F>) -> Result<Coinduced<F>> {
    if !Arc::ptr_eq(&b.left, n.algebra()) {
        return Err(ArcError::Precondition("bimodule and module do not share an algebra".into()));
    }
    let right = &b.right;
    let nr = right.labels().len();
    let columns: Vec<Vec<Vec<usize>>> = (0..nr).map(|rho| b.right_column(rho)).collect();
    let mut spaces = Vec::with_capacity(nr);
    for rho in 0..nr {
        let q = b.left_module::<F>(Some(rho))?;
        let maps = hom_space(&q, n)?;
        let len: usize = q.dims().iter().zip(n.dims()).map(|(a, c)| a * c).sum();
        let mut e = Echelon::new(len);
        for f in &maps {
            e.insert(flatten(f));
        }
        spaces.push(e);
    }
    let dims: Vec<usize> = spaces.iter().map(|e| e.dim()).collect();
    let nd = n.dims();
    // A flattened map on B e_ρ: part λ is nd[λ] × |columns[ρ][λ]|, row-major.
    let part_off = |rho: usize| -> Vec<usize> {
        let mut o = Vec::with_capacity(nd.len());
        let mut acc = 0;
        for (l, &d) in nd.iter().enumerate() {
            o.push(acc);
            acc += d * columns[rho][l].len();
        }
        o
    };
    let offs: Vec<Vec<usize>> = (0..nr).map(part_off).collect();
    let pos: Vec<HashMap<usize, usize>> = (0..nr)
        .map(|rho| {
            columns[rho]
                .iter()
                .flat_map(|g| g.iter().enumerate().map(|(i, &x)| (x, i)))
                .collect()
        })
        .collect();
    let mut blocks = Vec::with_capacity(right.dim());
    for g in 0..right.dim() {
        let (be, de) = (right.bottom(g), right.top(g));
        let mut m = Matrix::zeros(dims[be], dims[de]);
        // x · g for x in B e_β
        let xg: HashMap<usize, &Vec<(usize, i64)>> = b.right_act[g].iter().map(|(x, r)| (*x, r)).collect();
        for (c, phi) in spaces[de].basis().iter().enumerate() {
            let mut psi = vec![F::zero(); spaces[be].ambient_dim()];
            for (l, xs) in columns[be].iter().enumerate() {
                let width_b = xs.len();
                let width_d = columns[de][l].len();
                for (ci, x) in xs.iter().enumerate() {
                    let Some(terms) = xg.get(x) else { continue };
                    for &(y, k) in terms.iter() {
                        let yi = pos[de][&y];
                        let kf = F::from_i64(k);
                        for r in 0..nd[l] {
                            let val = &phi[offs[de][l] + r * width_d + yi];
                            if val.is_zero() {
                                continue;
                            }
                            let at = offs[be][l] + r * width_b + ci;
                            psi[at] = psi[at].clone() + kf.clone() * val.clone();
                        }
                    }
                }
            }
            let coords = spaces[be]
                .coordinates(&psi)
                .ok_or_else(|| ArcError::Precondition("coinduced action left the Hom space".into()))?;
            for (r, v) in coords.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        blocks.push(m);
    }
    Ok(Coinduced {
        module: ModuleRep::new(right.clone(), dims, blocks)?,
        spaces,
        columns,
    })
}

/// The Schur functor `f = e(−)` from `K`-modules to `H`-modules.
pub fn schur_f<F: Field>(m: &ModuleRep<F>, h: &Arc<ArcAlgebra>) -> Result<ModuleRep<F>> {
    let k = m.algebra();
    let emb = truncation_map(k, h)?;
    let lm = label_map(k, h)?;
    let dims = lm.iter().map(|&l| m.dims()[l]).collect();
    let blocks = emb.iter().map(|&a| m.block(a).clone()).collect();
    ModuleRep::new(h.clone(), dims, blocks)
}

/// `g(N) = Hom_H(eK, N)`.
pub fn schur_g<F: Field>(ek: &Bimodule, n: &ModuleRep<F>) -> Result<ModuleRep<F>> {
    Ok(coinduce(ek, n)?.module)
}

/// `g̃(N) = Ke ⊗_H N`.
pub fn schur_g_tilde<F: Field>(ke: &Bimodule, n: &ModuleRep<F>) -> Result<ModuleRep<F>> {
    tensor(ke, n)
}

/// The counit `η(M): M → gf(M)`, `v ↦ (x ↦ x·v)`.
pub fn eta<F: Field>(ek: &Bimodule, m: &ModuleRep<F>) -> Result<(ModuleRep<F>, ModuleMap<F>)> {
    let k = m.algebra();
    let h = ek.left().clone();
    let fm = schur_f(m, &h)?;
    let co = coinduce(ek, &fm)?;
    let fd = fm.dims().to_vec();
    let mut parts = Vec::with_capacity(k.labels().len());
    for lam in 0..k.labels().len() {
        let space = &co.spaces[lam];
        let mut eta_l = Matrix::zeros(space.dim(), m.dims()[lam]);
        for j in 0..m.dims()[lam] {
            let mut v = vec![F::zero(); m.dims()[lam]];
            v[j] = F::one();
            let mut flat = Vec::with_capacity(space.ambient_dim());
            for (hl, xs) in co.columns[lam].iter().enumerate() {
                // Part hl: fd[hl] × xs.len(), column per x is x·v.
                let cols: Vec<Vec<F>> = xs
                    .iter()
                    .map(|&x| {
                        let kx = k.index_of(&ek_diagram(ek, x)).expect("diagram of K");
                        m.block(kx).mul_vec(&v)
                    })
                    .collect();
                for r in 0..fd[hl] {
                    for c in &cols {
                        flat.push(c[r].clone());
                    }
                }
            }
            let coords = space
                .coordinates(&flat)
                .ok_or_else(|| ArcError::Precondition("η(v) is not H-linear".into()))?;
            for (r, val) in coords.into_iter().enumerate() {
                eta_l.set(r, j, val);
            }
        }
        parts.push(eta_l);
    }
    Ok((co.module, ModuleMap { parts }))
}

fn ek_diagram(ek: &Bimodule, x: usize) -> crate::algebra::BasisDiagram {
    crate::algebra::BasisDiagram::parse(&ek.names[x]).expect("eK basis names are diagrams")
}

/// Shared algebras and bimodules, so that modules built from one
/// workbench can be compared and combined.
pub struct Workbench {
    dim_cap: usize,
    extended: Mutex<HashMap<(usize, usize), Arc<ArcAlgebra>>>,
    khovanov: Mutex<HashMap<(usize, usize), Arc<ArcAlgebra>>>,
    bimodules: Mutex<HashMap<(u8, usize, usize, usize), Arc<Bimodule>>>,
}

impl Default for Workbench {
    fn default() -> Self {
        Workbench::new(DEFAULT_DIM_CAP)
    }
}

const T: u8 = 0;
const T_STAR: u8 = 1;
const T_BAR: u8 = 2;
const T_STAR_BAR: u8 = 3;
const E_K: u8 = 4;
const K_E: u8 = 5;

impl Workbench {
    pub fn new(dim_cap: usize) -> Self {
        Workbench {
            dim_cap,
            extended: Mutex::new(HashMap::new()),
            khovanov: Mutex::new(HashMap::new()),
            bimodules: Mutex::new(HashMap::new()),
        }
    }

    pub fn extended(&self, m: usize, n: usize) -> Result<Arc<ArcAlgebra>> {
        if let Some(k) = self.extended.lock().expect("cache").get(&(m, n)) {
            return Ok(k.clone());
        }
        let k = ArcAlgebra::extended_with_cap(m, n, self.dim_cap)?;
        Ok(self.extended.lock().expect("cache").entry((m, n)).or_insert(k).clone())
    }

    pub fn khovanov(&self, m: usize, n: usize) -> Result<Arc<ArcAlgebra>> {
        if let Some(h) = self.khovanov.lock().expect("cache").get(&(m, n)) {
            return Ok(h.clone());
        }
        let h = self.extended(m, n)?.truncate();
        Ok(self.khovanov.lock().expect("cache").entry((m, n)).or_insert(h).clone())
    }

    fn bimodule(&self, key: (u8, usize, usize, usize)) -> Result<Arc<Bimodule>> {
        if let Some(b) = self.bimodules.lock().expect("cache").get(&key) {
            return Ok(b.clone());
        }
        let (kind, m, n, i) = key;
        let b = match kind {
            T | T_STAR => {
                if m == 0 || n == 0 {
                    return Err(ArcError::Precondition(format!("t_i needs m, n >= 1, got ({m},{n})")));
                }
                let big = self.extended(m, n)?;
                let small = self.extended(m - 1, n - 1)?;
                if kind == T {
                    Bimodule::t(&big, &small, i)?
                } else {
                    Bimodule::t_star(&small, &big, i)?
                }
            }
            T_BAR => {
                let full = self.bimodule((T, m, n, i))?;
                full.truncate(&self.khovanov(m, n)?, &self.khovanov(m - 1, n - 1)?)?
            }
            T_STAR_BAR => {
                let full = self.bimodule((T_STAR, m, n, i))?;
                full.truncate(&self.khovanov(m - 1, n - 1)?, &self.khovanov(m, n)?)?
            }
            E_K => Bimodule::e_k(&self.extended(m, n)?, &self.khovanov(m, n)?)?,
            _ => Bimodule::k_e(&self.extended(m, n)?, &self.khovanov(m, n)?)?,
        };
        let b = Arc::new(b);
        Ok(self.bimodules.lock().expect("cache").entry(key).or_insert(b).clone())
    }

    /// `K^{t_i}` between `K^m_n` and `K^{m-1}_{n-1}`.
    pub fn bimodule_t(&self, i: usize, m: usize, n: usize) -> Result<Arc<Bimodule>> {
        self.bimodule((T, m, n, i))
    }

    pub fn bimodule_t_star(&self, i: usize, m: usize, n: usize) -> Result<Arc<Bimodule>> {
        self.bimodule((T_STAR, m, n, i))
    }

    /// `H^{t_i} = e K^{t_i} e'`.
    pub fn bimodule_t_bar(&self, i: usize, m: usize, n: usize) -> Result<Arc<Bimodule>> {
        self.bimodule((T_BAR, m, n, i))
    }

    pub fn bimodule_t_star_bar(&self, i: usize, m: usize, n: usize) -> Result<Arc<Bimodule>> {
        self.bimodule((T_STAR_BAR, m, n, i))
    }

    pub fn e_k(&self, m: usize, n: usize) -> Result<Arc<Bimodule>> {
        self.bimodule((E_K, m, n, 0))
    }

    pub fn k_e(&self, m: usize, n: usize) -> Result<Arc<Bimodule>> {
        self.bimodule((K_E, m, n, 0))
    }

    /// `G^{t_i}(N)` for a `K^{m-1}_{n-1}`-module `N`.
    pub fn g_t<F: Field>(&self, i: usize, n: &ModuleRep<F>) -> Result<ModuleRep<F>> {
        let a = n.algebra();
        let b = match a.kind() {
            AlgebraKind::Extended => self.bimodule_t(i, a.m() + 1, a.n() + 1)?,
            AlgebraKind::Khovanov => self.bimodule_t_bar(i, a.m() + 1, a.n() + 1)?,
        };
        tensor(&b, n)
    }

    /// `G^{t_i*}(M)` for a `K^m_n`-module `M`.
    pub fn g_t_star<F: Field>(&self, i: usize, m: &ModuleRep<F>) -> Result<ModuleRep<F>> {
        let a = m.algebra();
        let b = match a.kind() {
            AlgebraKind::Extended => self.bimodule_t_star(i, a.m(), a.n())?,
            AlgebraKind::Khovanov => self.bimodule_t_star_bar(i, a.m(), a.n())?,
        };
        tensor(&b, m)
    }

    pub fn f<F: Field>(&self, m: &ModuleRep<F>) -> Result<ModuleRep<F>> {
        let a = m.algebra();
        schur_f(m, &self.khovanov(a.m(), a.n())?)
    }

    pub fn g<F: Field>(&self, n: &ModuleRep<F>) -> Result<ModuleRep<F>> {
        let a = n.algebra();
        schur_g(&*self.e_k(a.m(), a.n())?, n)
    }

    pub fn g_tilde<F: Field>(&self, n: &ModuleRep<F>) -> Result<ModuleRep<F>> {
        let a = n.algebra();
        schur_g_tilde(&*self.k_e(a.m(), a.n())?, n)
    }

    pub fn eta<F: Field>(&self, m: &ModuleRep<F>) -> Result<(ModuleRep<F>, ModuleMap<F>)> {
        let a = m.algebra();
        eta(&*self.e_k(a.m(), a.n())?, m)
    }

    /// `T(λ)`, recursing through the smallest `i` with `λ ∈ Λ^{∧∨}(i)`.
    pub fn tilting<F: Field>(&self, lam: &Weight) -> Result<ModuleRep<F>> {
        self.tilting_with(lam, &|choices: &[usize]| choices[0])
    }

    /// `T(λ)` where `pick` chooses `i` among the admissible positions at
    /// every step of the recursion.
    pub fn tilting_with<F: Field>(&self, lam: &Weight, pick: &dyn Fn(&[usize]) -> usize) -> Result<ModuleRep<F>> {
        let (m, n) = lam.shape();
        let k = self.extended(m, n)?;
        let choices: Vec<usize> = (1..lam.len()).filter(|&i| lam.in_up_down(i)).collect();
        if choices.is_empty() {
            return ModuleRep::simple(&k, lam);
        }
        let i = pick(&choices);
        if !choices.contains(&i) {
            return Err(ArcError::BadPosition {
                pos: i,
                len: lam.len(),
                reason: "weight does not read ∧∨ there",
            });
        }
        let smaller = self.tilting_with::<F>(&lam.remove_pair(i)?, pick)?;
        self.g_t(i, &smaller)
    }

    /// `S(λ) = fΔ(λ)`.
    pub fn cell<F: Field>(&self, lam: &Weight) -> Result<ModuleRep<F>> {
        let (m, n) = lam.shape();
        self.f(&ModuleRep::standard(&self.extended(m, n)?, lam)?)
    }

    /// All weights of a box, for convenience.
    pub fn weights(&self, m: usize, n: usize) -> Vec<Weight> {
        enumerate_weights(m, n)
    }
}
