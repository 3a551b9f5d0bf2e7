//! The extended arc algebra `K^m_n` on its diagram basis, and the Khovanov
//! arc algebra `H^m_n = e K^m_n e` as a truncation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_weights_bounded, Weight};
use crate::error::{ArcError, Result};
use crate::field::Field;
use crate::klpoly::DEFAULT_WEIGHT_CAP;
use crate::linalg::Echelon;
use crate::surgery::{Picture, Schedule};

/// Default cap on the dimension of an algebra.
pub const DEFAULT_DIM_CAP: usize = 20_000;

/// The oriented diagram `λ̲μν̄` with bottom `λ`, middle `μ`, top `ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisDiagram {
    pub bottom: Weight,
    pub middle: Weight,
    pub top: Weight,
    pub degree: usize,
}

impl BasisDiagram {
    /// Checks orientation and fills in the degree.
    pub fn new(bottom: Weight, middle: Weight, top: Weight) -> Result<BasisDiagram> {
        middle.check_same_box(&bottom)?;
        middle.check_same_box(&top)?;
        let cup = bottom.cup_diagram();
        let cap = top.cup_diagram();
        if !cup.is_oriented(&middle) || !cap.is_oriented(&middle) {
            return Err(ArcError::NotOriented(format!("{bottom}|{middle}|{top}")));
        }
        Ok(BasisDiagram {
            bottom,
            middle,
            top,
            degree: cup.degree_unchecked(&middle) + cap.degree_unchecked(&middle),
        })
    }

    /// Parses `"bottom|middle|top"` or the JSON object form.
    pub fn parse(s: &str) -> Result<BasisDiagram> {
        let t = s.trim();
        if t.starts_with('{') {
            #[derive(Deserialize)]
            struct Raw {
                bottom: Weight,
                middle: Weight,
                top: Weight,
            }
            let raw: Raw = serde_json::from_str(t).map_err(|e| ArcError::Parse(e.to_string()))?;
            return BasisDiagram::new(raw.bottom, raw.middle, raw.top);
        }
        let parts: Vec<&str> = t.split('|').collect();
        if parts.len() != 3 {
            return Err(ArcError::Parse(format!("expected bottom|middle|top, got {s:?}")));
        }
        BasisDiagram::new(
            Weight::parse(parts[0])?,
            Weight::parse(parts[1])?,
            Weight::parse(parts[2])?,
        )
    }

    pub fn is_idempotent(&self) -> bool {
        self.bottom == self.middle && self.middle == self.top
    }

    /// `λ̲μν̄ ↦ ν̲μλ̄`.
    pub fn star(&self) -> BasisDiagram {
        BasisDiagram {
            bottom: self.top,
            middle: self.middle,
            top: self.bottom,
            degree: self.degree,
        }
    }

    /// Rotation by 180 degrees, `K^m_n → K^n_m`; reverses products.
    pub fn rotate(&self) -> BasisDiagram {
        BasisDiagram {
            bottom: self.top.rotate(),
            middle: self.middle.rotate(),
            top: self.bottom.rotate(),
            degree: self.degree,
        }
    }

    pub fn picture(&self) -> Picture {
        Picture::basis_element(&self.bottom, &self.middle, &self.top)
    }
}

impl fmt::Display for BasisDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.bottom, self.middle, self.top)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `K^m_n`, labels all of `Λ_{m,n}`.
    Extended,
    /// `H^m_n`, labels the regular weights.
    Khovanov,
}

/// Product of two basis elements over the integers, by surgery.
pub fn multiply_diagrams(a: &BasisDiagram, b: &BasisDiagram, schedule: Schedule) -> Result<Vec<(BasisDiagram, i64)>> {
    if a.top != b.bottom {
        return Ok(Vec::new());
    }
    let terms = a.picture().stack(&b.picture())?.reduce(schedule)?;
    let mut out = Vec::with_capacity(terms.len());
    for (p, c) in terms {
        let middle = Weight::from_symbols(&p.lines[0])?;
        let d = BasisDiagram::new(a.bottom, middle, b.top).map_err(|e| {
            ArcError::Surgery(format!("product {a} * {b} left the basis: {e}"))
        })?;
        if d.degree != a.degree + b.degree {
            return Err(ArcError::Surgery(format!(
                "product {a} * {b} produced {d} of degree {} instead of {}",
                d.degree,
                a.degree + b.degree
            )));
        }
        out.push((d, c));
    }
    out.sort();
    Ok(out)
}

/// A finite-dimensional based algebra with integer structure constants,
/// graded by diagram degree, with a degree-0 part spanned by orthogonal
/// idempotents `e_λ`.
pub struct ArcAlgebra {
    kind: AlgebraKind,
    m: usize,
    n: usize,
    labels: Vec<Weight>,
    label_index: HashMap<Weight, usize>,
    basis: Vec<BasisDiagram>,
    index: HashMap<(Weight, Weight, Weight), usize>,
    bottom: Vec<usize>,
    top: Vec<usize>,
    idempotent: Vec<usize>,
    star: Vec<usize>,
    by_bottom: Vec<Vec<usize>>,
    by_top: Vec<Vec<usize>>,
    /// Position of each element inside `by_bottom` of its bottom label.
    pos_in_bottom: Vec<usize>,
    /// `products[a][k]` is `a · by_bottom[top(a)][k]`.
    products: Vec<Vec<Vec<(usize, i64)>>>,
    /// For a truncation: index of each basis element in the big algebra.
    embedding: Option<Vec<usize>>,
    generators: Mutex<HashMap<u64, Arc<Vec<usize>>>>,
}

impl fmt::Debug for ArcAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name(), self.dim())
    }
}

impl ArcAlgebra {
    /// `K^m_n` with default caps.
    pub fn extended(m: usize, n: usize) -> Result<Arc<ArcAlgebra>> {
        ArcAlgebra::extended_with_cap(m, n, DEFAULT_DIM_CAP)
    }

    pub fn extended_with_cap(m: usize, n: usize, dim_cap: usize) -> Result<Arc<ArcAlgebra>> {
        let basis = enumerate_basis(m, n, dim_cap)?;
        let labels = enumerate_weights_bounded(m, n, DEFAULT_WEIGHT_CAP)?;
        ArcAlgebra::build(AlgebraKind::Extended, m, n, labels, basis, None).map(Arc::new)
    }

    /// `H^m_n` as the truncation of a freshly built `K^m_n`.
    pub fn khovanov(m: usize, n: usize) -> Result<Arc<ArcAlgebra>> {
        Ok(ArcAlgebra::extended(m, n)?.truncate())
    }

    /// `e K e` for `e` the sum of `e_λ` over regular `λ`.
    pub fn truncate(&self) -> Arc<ArcAlgebra> {
        assert_eq!(self.kind, AlgebraKind::Extended, "only K can be truncated");
        let labels: Vec<Weight> = self.labels.iter().copied().filter(|w| w.is_regular()).collect();
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&a| self.basis[a].bottom.is_regular() && self.basis[a].top.is_regular())
            .collect();
        let basis: Vec<BasisDiagram> = keep.iter().map(|&a| self.basis[a]).collect();
        let mut h = ArcAlgebra::skeleton(AlgebraKind::Khovanov, self.m, self.n, labels, basis, Some(keep.clone()));
        let back: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        h.products = (0..h.dim())
            .map(|a| {
                let big_a = keep[a];
                let tl = h.top[a];
                h.by_bottom[tl]
                    .iter()
                    .map(|&b| {
                        let big_b = keep[b];
                        self.multiply(big_a, big_b)
                            .iter()
                            .map(|&(c, v)| (back[&c], v))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Arc::new(h)
    }

    fn skeleton(
        kind: AlgebraKind,
        m: usize,
        n: usize,
        labels: Vec<Weight>,
        basis: Vec<BasisDiagram>,
        embedding: Option<Vec<usize>>,
    ) -> ArcAlgebra {
        let label_index: HashMap<Weight, usize> = labels.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let index: HashMap<(Weight, Weight, Weight), usize> = basis
            .iter()
            .enumerate()
            .map(|(i, d)| ((d.bottom, d.middle, d.top), i))
            .collect();
        let bottom: Vec<usize> = basis.iter().map(|d| label_index[&d.bottom]).collect();
        let top: Vec<usize> = basis.iter().map(|d| label_index[&d.top]).collect();
        let idempotent = labels.iter().map(|w| index[&(*w, *w, *w)]).collect();
        let star = basis.iter().map(|d| index[&(d.top, d.middle, d.bottom)]).collect();
        let mut by_bottom = vec![Vec::new(); labels.len()];
        let mut by_top = vec![Vec::new(); labels.len()];
        let mut pos_in_bottom = vec![0; basis.len()];
        for a in 0..basis.len() {
            pos_in_bottom[a] = by_bottom[bottom[a]].len();
            by_bottom[bottom[a]].push(a);
            by_top[top[a]].push(a);
        }
        ArcAlgebra {
            kind,
            m,
            n,
            labels,
            label_index,
            basis,
            index,
            bottom,
            top,
            idempotent,
            star,
            by_bottom,
            by_top,
            pos_in_bottom,
            products: Vec::new(),
            embedding,
            generators: Mutex::new(HashMap::new()),
        }
    }

    fn build(
        kind: AlgebraKind,
        m: usize,
        n: usize,
        labels: Vec<Weight>,
        basis: Vec<BasisDiagram>,
        embedding: Option<Vec<usize>>,
    ) -> Result<ArcAlgebra> {
        let mut alg = ArcAlgebra::skeleton(kind, m, n, labels, basis, embedding);
        let products: Result<Vec<Vec<Vec<(usize, i64)>>>> = (0..alg.dim())
            .into_par_iter()
            .map(|a| {
                let da = alg.basis[a];
                alg.by_bottom[alg.top[a]]
                    .iter()
                    .map(|&b| {
                        let terms = multiply_diagrams(&da, &alg.basis[b], Schedule::LeftmostFirst)?;
                        Ok(terms
                            .into_iter()
                            .map(|(d, c)| (alg.index[&(d.bottom, d.middle, d.top)], c))
                            .collect())
                    })
                    .collect()
            })
            .collect();
        alg.products = products?;
        Ok(alg)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> String {
        match self.kind {
            AlgebraKind::Extended => format!("K^{}_{}", self.m, self.n),
            AlgebraKind::Khovanov => format!("H^{}_{}", self.m, self.n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn labels(&self) -> &[Weight] {
        &self.labels
    }

    pub fn label_index(&self, w: &Weight) -> Result<usize> {
        self.label_index
            .get(w)
            .copied()
            .ok_or_else(|| ArcError::UnknownLabel(format!("{w} for {}", self.name())))
    }

    pub fn basis(&self) -> &[BasisDiagram] {
        &self.basis
    }

    pub fn diagram(&self, a: usize) -> &BasisDiagram {
        &self.basis[a]
    }

    pub fn index_of(&self, d: &BasisDiagram) -> Option<usize> {
        self.index.get(&(d.bottom, d.middle, d.top)).copied()
    }

    /// Label index of the bottom weight of basis element `a`.
    pub fn bottom(&self, a: usize) -> usize {
        self.bottom[a]
    }

    pub fn top(&self, a: usize) -> usize {
        self.top[a]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.basis[a].degree
    }

    /// Basis index of `e_λ` for label index `l`.
    pub fn idempotent(&self, l: usize) -> usize {
        self.idempotent[l]
    }

    pub fn star(&self, a: usize) -> usize {
        self.star[a]
    }

    /// Basis elements `e_λ K ...` with bottom label `l`.
    pub fn with_bottom(&self, l: usize) -> &[usize] {
        &self.by_bottom[l]
    }

    /// Basis elements `... K e_λ` with top label `l`.
    pub fn with_top(&self, l: usize) -> &[usize] {
        &self.by_top[l]
    }

    pub fn embedding(&self) -> Option<&[usize]> {
        self.embedding.as_deref()
    }

    /// Integer structure constants of `a · b`.
    pub fn multiply(&self, a: usize, b: usize) -> &[(usize, i64)] {
        if self.top[a] != self.bottom[b] {
            return &[];
        }
        &self.products[a][self.pos_in_bottom[b]]
    }

    /// Positive-degree basis elements, a basis of the radical.
    pub fn positive(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.basis[a].degree > 0).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.basis.iter().map(|d| d.degree).max().unwrap_or(0)
    }

    /// Positive-degree basis elements whose images span `J/J²` over a
    /// field of characteristic `F::CHARACTERISTIC`; together with the `e_λ`
    /// they generate the algebra.
    pub fn generators<F: Field>(&self) -> Arc<Vec<usize>> {
        let mut cache = self.generators.lock().expect("generator cache");
        if let Some(g) = cache.get(&F::CHARACTERISTIC) {
            return g.clone();
        }
        // J² is graded and lives in blocks e_λ J² e_ν of fixed degree.
        let mut blocks: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
        for a in self.positive() {
            blocks
                .entry((self.bottom[a], self.top[a], self.basis[a].degree))
                .or_default()
                .push(a);
        }
        let mut squares: HashMap<(usize, usize, usize), Vec<Vec<(usize, i64)>>> = HashMap::new();
        for a in self.positive() {
            for &b in &self.by_bottom[self.top[a]] {
                if self.basis[b].degree == 0 {
                    continue;
                }
                let prod = self.multiply(a, b);
                if prod.is_empty() {
                    continue;
                }
                let key = (self.bottom[a], self.top[b], self.basis[a].degree + self.basis[b].degree);
                squares.entry(key).or_default().push(prod.to_vec());
            }
        }
        let mut gens = Vec::new();
        for (key, members) in &blocks {
            let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
            let mut span: Echelon<F> = Echelon::new(members.len());
            for prod in squares.get(key).into_iter().flatten() {
                let mut v = vec![F::zero(); members.len()];
                for &(c, x) in prod {
                    v[pos[&c]] = F::from_i64(x);
                }
                span.insert(v);
            }
            gens.extend(span.free_columns().into_iter().map(|i| members[i]));
        }
        gens.sort();
        let gens = Arc::new(gens);
        cache.insert(F::CHARACTERISTIC, gens.clone());
        gens
    }

    /// `Σ_λ e_λ`.
    pub fn unit<F: Field>(&self) -> AlgebraElement<F> {
        AlgebraElement::from_terms(self.idempotent.iter().map(|&a| (a, F::one())))
    }

    /// `e = Σ e_λ` over regular `λ`; for `H` this is the unit.
    pub fn schur_idempotent<F: Field>(&self) -> AlgebraElement<F> {
        AlgebraElement::from_terms(
            self.labels
                .iter()
                .enumerate()
                .filter(|(_, w)| w.is_regular())
                .map(|(l, _)| (self.idempotent[l], F::one())),
        )
    }

    pub fn basis_element<F: Field>(&self, a: usize) -> AlgebraElement<F> {
        AlgebraElement::from_terms([(a, F::one())])
    }

    pub fn mul<F: Field>(&self, x: &AlgebraElement<F>, y: &AlgebraElement<F>) -> AlgebraElement<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                for &(c, k) in self.multiply(*a, *b) {
                    let e = acc.entry(c).or_insert_with(F::zero);
                    *e = e.clone() + ca.clone() * cb.clone() * F::from_i64(k);
                }
            }
        }
        AlgebraElement::from_terms(acc)
    }

    pub fn star_element<F: Field>(&self, x: &AlgebraElement<F>) -> AlgebraElement<F> {
        AlgebraElement::from_terms(x.terms.iter().map(|(a, c)| (self.star[*a], c.clone())))
    }

    pub fn element_json<F: Field>(&self, x: &AlgebraElement<F>) -> serde_json::Value {
        serde_json::Value::Array(
            x.terms
                .iter()
                .map(|(a, c)| {
                    serde_json::json!({
                        "diagram": self.basis[*a],
                        "coeff": c.to_exact_string(),
                    })
                })
                .collect(),
        )
    }

    /// `dim e_λ K e_μ` for all label pairs.
    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let l = self.labels.len();
        let mut c = vec![vec![0; l]; l];
        for a in 0..self.dim() {
            c[self.bottom[a]][self.top[a]] += 1;
        }
        c
    }
}

/// A finite linear combination of basis elements, sorted by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<F> {
    terms: Vec<(usize, F)>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero() -> Self {
        AlgebraElement { terms: Vec::new() }
    }

    /// Sums repeated indices and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (usize, F)>>(terms: I) -> Self {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (a, c) in terms {
            let e = acc.entry(a).or_insert_with(F::zero);
            *e = e.clone() + c;
        }
        AlgebraElement {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(usize, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: usize) -> F {
        self.terms
            .iter()
            .find(|(b, _)| *b == a)
            .map_or_else(F::zero, |(_, c)| c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, s: &F) -> Self {
        AlgebraElement::from_terms(self.terms.iter().map(|(a, c)| (*a, c.clone() * s.clone())))
    }
}

/// All oriented triples of `Λ_{m,n}`, ordered by (bottom, top, middle).
pub fn enumerate_basis(m: usize, n: usize, dim_cap: usize) -> Result<Vec<BasisDiagram>> {
    let weights = enumerate_weights_bounded(m, n, DEFAULT_WEIGHT_CAP)?;
    let cups: Vec<_> = weights.iter().map(|w| w.cup_diagram()).collect();
    // oriented[μ] = all λ with λ̲μ oriented
    let oriented: Vec<Vec<usize>> = weights
        .iter()
        .map(|mu| (0..weights.len()).filter(|&l| cups[l].is_oriented(mu)).collect())
        .collect();
    let size: usize = oriented.iter().map(|o| o.len() * o.len()).sum();
    if size > dim_cap {
        return Err(ArcError::BoundExceeded {
            what: format!("K^{m}_{n}"),
            size,
            cap: dim_cap,
        });
    }
    let mut basis = Vec::with_capacity(size);
    for (mu_i, mu) in weights.iter().enumerate() {
        for &l in &oriented[mu_i] {
            for &t in &oriented[mu_i] {
                let degree = cups[l].degree_unchecked(mu) + cups[t].degree_unchecked(mu);
                basis.push(BasisDiagram {
                    bottom: weights[l],
                    middle: *mu,
                    top: weights[t],
                    degree,
                });
            }
        }
    }
    basis.sort_by(|a, b| (a.bottom, a.top, a.middle).cmp(&(b.bottom, b.top, b.middle)));
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    #[test]
    fn k11_basis() {
        let k = ArcAlgebra::extended(1, 1).unwrap();
        assert_eq!(k.dim(), 5);
        let h = k.truncate();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.labels().len(), 1);
        assert_eq!(ArcAlgebra::extended(0, 3).unwrap().dim(), 1);
    }

    #[test]
    fn idempotents_multiply() {
        let k = ArcAlgebra::extended(2, 2).unwrap();
        for (l, _) in k.labels().iter().enumerate() {
            let e = k.idempotent(l);
            assert_eq!(k.multiply(e, e), &[(e, 1)]);
            for (l2, _) in k.labels().iter().enumerate() {
                if l2 != l {
                    assert!(k.multiply(e, k.idempotent(l2)).is_empty());
                }
            }
        }
        let one = k.unit::<Rational>();
        let x = k.basis_element::<Rational>(7);
        assert_eq!(k.mul(&one, &x), x);
        assert_eq!(k.mul(&x, &one), x);
    }

    #[test]
    fn parse_diagrams() {
        let d = BasisDiagram::parse("v^|^v|^v").unwrap();
        assert_eq!(d.degree, 1);
        let j = serde_json::to_string(&d).unwrap();
        assert_eq!(j, r#"{"bottom":"v^","middle":"^v","top":"^v","degree":1}"#);
        assert_eq!(BasisDiagram::parse(&j).unwrap(), d);
        assert!(BasisDiagram::parse("^v|v^|^v").is_err());
        assert!(BasisDiagram::parse("v^|v^").is_err());
    }
}
