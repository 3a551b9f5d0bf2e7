//! Finite-dimensional left modules over an [`ArcAlgebra`].
//!
//! Every module is stored in a basis adapted to the decomposition
//! `M = ⊕_λ e_λ M`. A basis element `a` of the algebra with bottom `α` and
//! top `γ` maps `e_γ M` to `e_α M`, so its action is kept as one block of
//! shape `dim e_α M × dim e_γ M`. Submodules are tuples of subspaces, one
//! per weight space.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{AlgebraKind, ArcAlgebra};
use crate::combinatorics::Weight;
use crate::error::{ArcError, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix};

/// Default cap on the dimension of a single resolution term.
pub const DEFAULT_RESOLUTION_CAP: usize = 5000;

/// Diagrams with bottom `mu` and top `lam`, the basis of `e_μ P(λ)`.
pub fn projective_basis(alg: &ArcAlgebra, lam: usize, mu: usize) -> Vec<usize> {
    alg.with_bottom(mu)
        .iter()
        .copied()
        .filter(|&x| alg.top(x) == lam)
        .collect()
}

#[derive(Clone, Debug)]
pub struct ModuleRep<F: Field> {
    alg: Arc<ArcAlgebra>,
    dims: Vec<usize>,
    blocks: Vec<Matrix<F>>,
}

/// A submodule, or any weight-graded subspace, given per weight space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    pub parts: Vec<Echelon<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(dims: &[usize]) -> Self {
        Subspace {
            parts: dims.iter().map(|&d| Echelon::new(d)).collect(),
        }
    }

    pub fn full(dims: &[usize]) -> Self {
        Subspace {
            parts: dims.iter().map(|&d| Echelon::full(d)).collect(),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }

    pub fn sum(&self, other: &Self) -> Self {
        Subspace {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.sum(b)).collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Subspace {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.intersection(b))
                .collect(),
        }
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_subspace_of(b))
    }
}

/// A weight-preserving linear map, one matrix per weight space
/// (`target dim × source dim`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap<F: Field> {
    pub parts: Vec<Matrix<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn zero(source: &[usize], target: &[usize]) -> Self {
        ModuleMap {
            parts: source.iter().zip(target).map(|(&s, &t)| Matrix::zeros(t, s)).collect(),
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        ModuleMap {
            parts: dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(ModuleMap {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.mul(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(ModuleMap {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, s: &F) -> Self {
        ModuleMap {
            parts: self.parts.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// The transpose map between dual modules.
    pub fn dual(&self) -> Self {
        ModuleMap {
            parts: self.parts.iter().map(|p| p.transpose()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().map(|p| p.rank()).sum()
    }

    pub fn is_iso(&self) -> bool {
        self.parts.iter().all(|p| p.is_invertible())
    }

    pub fn kernel(&self) -> Subspace<F> {
        Subspace {
            parts: self
                .parts
                .iter()
                .map(|p| Echelon::from_vectors(p.cols(), &p.kernel_basis()))
                .collect(),
        }
    }

    pub fn image(&self) -> Subspace<F> {
        Subspace {
            parts: self
                .parts
                .iter()
                .map(|p| {
                    let cols: Vec<Vec<F>> = (0..p.cols()).map(|c| p.column(c)).collect();
                    Echelon::from_vectors(p.rows(), &cols)
                })
                .collect(),
        }
    }
}

impl<F: Field> ModuleRep<F> {
    /// Builds a module from action blocks; shapes are checked.
    pub fn new(alg: Arc<ArcAlgebra>, dims: Vec<usize>, blocks: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != alg.labels().len() || blocks.len() != alg.dim() {
            return Err(ArcError::Shape(format!(
                "module over {} needs {} weight spaces and {} blocks",
                alg.name(),
                alg.labels().len(),
                alg.dim()
            )));
        }
        for (a, b) in blocks.iter().enumerate() {
            if b.rows() != dims[alg.bottom(a)] || b.cols() != dims[alg.top(a)] {
                return Err(ArcError::Shape(format!(
                    "block of {} is {}x{}",
                    alg.diagram(a),
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(ModuleRep { alg, dims, blocks })
    }

    pub fn zero(alg: Arc<ArcAlgebra>) -> Self {
        let dims = vec![0; alg.labels().len()];
        let blocks = (0..alg.dim()).map(|_| Matrix::zeros(0, 0)).collect();
        ModuleRep { alg, dims, blocks }
    }

    /// `P(λ) = K e_λ` on the diagrams with top `λ`.
    pub fn projective(alg: &Arc<ArcAlgebra>, lam: &Weight) -> Result<Self> {
        let l = alg.label_index(lam)?;
        Ok(Self::projective_at(alg, l))
    }

    pub fn projective_at(alg: &Arc<ArcAlgebra>, l: usize) -> Self {
        let nl = alg.labels().len();
        let bases: Vec<Vec<usize>> = (0..nl).map(|mu| projective_basis(alg, l, mu)).collect();
        let pos: Vec<BTreeMap<usize, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, &x)| (x, i)).collect())
            .collect();
        let blocks = (0..alg.dim())
            .map(|a| {
                let (al, ga) = (alg.bottom(a), alg.top(a));
                let mut m = Matrix::<F>::zeros(bases[al].len(), bases[ga].len());
                for (c, &x) in bases[ga].iter().enumerate() {
                    for &(y, k) in alg.multiply(a, x) {
                        let r = pos[al][&y];
                        let v = m.get(r, c).clone() + F::from_i64(k);
                        m.set(r, c, v);
                    }
                }
                m
            })
            .collect();
        ModuleRep {
            alg: alg.clone(),
            dims: bases.iter().map(|b| b.len()).collect(),
            blocks,
        }
    }

    /// The one-dimensional simple `L(λ)`.
    pub fn simple(alg: &Arc<ArcAlgebra>, lam: &Weight) -> Result<Self> {
        let l = alg.label_index(lam)?;
        Ok(Self::simple_at(alg, l))
    }

    pub fn simple_at(alg: &Arc<ArcAlgebra>, l: usize) -> Self {
        let mut dims = vec![0; alg.labels().len()];
        dims[l] = 1;
        let blocks = (0..alg.dim())
            .map(|a| {
                let mut m = Matrix::zeros(dims[alg.bottom(a)], dims[alg.top(a)]);
                if a == alg.idempotent(l) {
                    m.set(0, 0, F::one());
                }
                m
            })
            .collect();
        ModuleRep {
            alg: alg.clone(),
            dims,
            blocks,
        }
    }

    /// `Δ(λ) = P(λ)/O^{π(λ)}(rad P(λ))` with `π(λ) = {μ < λ}`.
    pub fn standard(alg: &Arc<ArcAlgebra>, lam: &Weight) -> Result<Self> {
        let l = alg.label_index(lam)?;
        Self::standard_at(alg, l)
    }

    pub fn standard_at(alg: &Arc<ArcAlgebra>, l: usize) -> Result<Self> {
        if alg.kind() != AlgebraKind::Extended {
            return Err(ArcError::Precondition(format!(
                "standard modules are defined over K, not {}",
                alg.name()
            )));
        }
        let p = Self::projective_at(alg, l);
        let rad = p.radical();
        let lam = alg.labels()[l];
        let mut seeds = Subspace::zero(&p.dims);
        for (mu_i, mu) in alg.labels().iter().enumerate() {
            let below = mu.leq_unchecked(&lam) && *mu != lam;
            if !below {
                seeds.parts[mu_i] = rad.parts[mu_i].clone();
            }
        }
        let trace = p.closure(seeds);
        Ok(p.quotient(&trace).0)
    }

    pub fn algebra(&self) -> &Arc<ArcAlgebra> {
        &self.alg
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn block(&self, a: usize) -> &Matrix<F> {
        &self.blocks[a]
    }

    /// `[M : L(λ)] = dim e_λ M`.
    pub fn comp_mult(&self, lam: &Weight) -> Result<usize> {
        Ok(self.dims[self.alg.label_index(lam)?])
    }

    /// Composition factors with multiplicity, in label order.
    pub fn composition_factors(&self) -> Vec<(Weight, usize)> {
        self.alg
            .labels()
            .iter()
            .zip(&self.dims)
            .filter(|(_, &d)| d > 0)
            .map(|(w, &d)| (*w, d))
            .collect()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            off.push(acc);
            acc += d;
        }
        off
    }

    /// The action of basis element `a` on all of `M`.
    pub fn action_matrix(&self, a: usize) -> Matrix<F> {
        let off = self.offsets();
        let (al, ga) = (self.alg.bottom(a), self.alg.top(a));
        let mut m = Matrix::zeros(self.dim(), self.dim());
        let b = &self.blocks[a];
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                m.set(off[al] + r, off[ga] + c, b.get(r, c).clone());
            }
        }
        m
    }

    /// Checks the module axioms against the structure constants.
    pub fn check_action(&self) -> Result<()> {
        let alg = &self.alg;
        for l in 0..alg.labels().len() {
            if self.blocks[alg.idempotent(l)] != Matrix::identity(self.dims[l]) {
                return Err(ArcError::Precondition(format!(
                    "e_{} does not act as the identity",
                    alg.labels()[l]
                )));
            }
        }
        for a in 0..alg.dim() {
            for &b in alg.with_bottom(alg.top(a)) {
                let lhs = self.blocks[a].mul(&self.blocks[b])?;
                let mut rhs = Matrix::zeros(lhs.rows(), lhs.cols());
                for &(c, k) in alg.multiply(a, b) {
                    rhs = rhs.add(&self.blocks[c].scale(&F::from_i64(k)))?;
                }
                if lhs != rhs {
                    return Err(ArcError::Precondition(format!(
                        "action fails on {} * {}",
                        alg.diagram(a),
                        alg.diagram(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest submodule containing `seeds`.
    pub fn closure(&self, seeds: Subspace<F>) -> Subspace<F> {
        let gens = self.alg.generators::<F>();
        let mut span = seeds;
        let mut queue: Vec<(usize, Vec<F>)> = span
            .parts
            .iter()
            .enumerate()
            .flat_map(|(l, e)| e.basis().iter().map(move |v| (l, v.clone())))
            .collect();
        let mut from: Vec<Vec<usize>> = vec![Vec::new(); self.dims.len()];
        for &g in gens.iter() {
            from[self.alg.top(g)].push(g);
        }
        while let Some((l, v)) = queue.pop() {
            for &g in &from[l] {
                let w = self.blocks[g].mul_vec(&v);
                let target = self.alg.bottom(g);
                if span.parts[target].insert(w.clone()) {
                    queue.push((target, w));
                }
            }
        }
        span
    }

    /// Submodule generated by vectors of given weights.
    pub fn spin(&self, seeds: &[(usize, Vec<F>)]) -> Subspace<F> {
        let mut s = Subspace::zero(&self.dims);
        for (l, v) in seeds {
            s.parts[*l].insert(v.clone());
        }
        self.closure(s)
    }

    /// `J · S` for the radical `J` of the algebra, spanned by the
    /// positive-degree diagrams.
    pub fn radical_of(&self, s: &Subspace<F>) -> Subspace<F> {
        let mut out = Subspace::zero(&self.dims);
        for a in self.alg.positive() {
            let src = &s.parts[self.alg.top(a)];
            if src.is_zero() {
                continue;
            }
            let target = self.alg.bottom(a);
            for v in src.basis() {
                out.parts[target].insert(self.blocks[a].mul_vec(v));
            }
        }
        out
    }

    pub fn radical(&self) -> Subspace<F> {
        self.radical_of(&Subspace::full(&self.dims))
    }

    /// Vectors killed by the radical.
    pub fn socle(&self) -> Subspace<F> {
        let gens = self.alg.generators::<F>();
        let parts = (0..self.dims.len())
            .map(|l| {
                let d = self.dims[l];
                let mut rows: Vec<Vec<F>> = Vec::new();
                for &g in gens.iter().filter(|&&g| self.alg.top(g) == l) {
                    let b = &self.blocks[g];
                    rows.extend((0..b.rows()).map(|r| b.row(r).to_vec()));
                }
                if rows.is_empty() {
                    return Echelon::full(d);
                }
                let m = Matrix::from_rows(rows, d).expect("rows of equal length");
                Echelon::from_vectors(d, &m.kernel_basis())
            })
            .collect();
        Subspace { parts }
    }

    /// `rad^0 M ⊇ rad^1 M ⊇ … ⊇ 0`, ending with the zero submodule.
    pub fn radical_series(&self) -> Vec<Subspace<F>> {
        let mut series = vec![Subspace::full(&self.dims)];
        while series.last().expect("nonempty").dim() > 0 {
            let next = self.radical_of(series.last().expect("nonempty"));
            series.push(next);
        }
        series
    }

    /// `0 = soc^0 M ⊆ soc^1 M ⊆ … ⊆ M`.
    pub fn socle_series(&self) -> Vec<Subspace<F>> {
        let mut series = vec![Subspace::zero(&self.dims)];
        while series.last().expect("nonempty").dim() < self.dim() {
            let cur = series.last().expect("nonempty").clone();
            let (q, _) = self.quotient(&cur);
            let soc = q.socle();
            let mut next = cur.clone();
            for (l, part) in soc.parts.iter().enumerate() {
                let free = cur.parts[l].free_columns();
                for v in part.basis() {
                    let mut lift = vec![F::zero(); self.dims[l]];
                    for (x, &c) in v.iter().zip(&free) {
                        lift[c] = x.clone();
                    }
                    next.parts[l].insert(lift);
                }
            }
            series.push(next);
        }
        series
    }

    /// Per-label dimensions of `rad_k M`, `k = 0, 1, …`.
    pub fn radical_layers(&self) -> Vec<Vec<usize>> {
        let s = self.radical_series();
        s.windows(2)
            .map(|w| w[0].dims().iter().zip(w[1].dims()).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Per-label dimensions of `soc_k M`, `k = 1, 2, …`.
    pub fn socle_layers(&self) -> Vec<Vec<usize>> {
        let s = self.socle_series();
        s.windows(2)
            .map(|w| w[1].dims().iter().zip(w[0].dims()).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// A layer as a list of weights with multiplicity.
    pub fn layer_weights(&self, layer: &[usize]) -> Vec<(Weight, usize)> {
        self.alg
            .labels()
            .iter()
            .zip(layer)
            .filter(|(_, &d)| d > 0)
            .map(|(w, &d)| (*w, d))
            .collect()
    }

    /// The submodule `S` as a module, with its inclusion into `self`.
    /// `S` must be a submodule.
    pub fn submodule(&self, s: &Subspace<F>) -> (ModuleRep<F>, ModuleMap<F>) {
        let dims = s.dims();
        let blocks = (0..self.alg.dim())
            .map(|a| {
                let (al, ga) = (self.alg.bottom(a), self.alg.top(a));
                let mut m = Matrix::zeros(dims[al], dims[ga]);
                for (c, v) in s.parts[ga].basis().iter().enumerate() {
                    let w = self.blocks[a].mul_vec(v);
                    let coords = s.parts[al].coordinates(&w).expect("subspace is a submodule");
                    for (r, x) in coords.into_iter().enumerate() {
                        m.set(r, c, x);
                    }
                }
                m
            })
            .collect();
        let incl = ModuleMap {
            parts: s
                .parts
                .iter()
                .map(|e| Matrix::from_columns(e.basis(), e.ambient_dim()))
                .collect(),
        };
        (
            ModuleRep {
                alg: self.alg.clone(),
                dims,
                blocks,
            },
            incl,
        )
    }

    /// `M/S` on the complement spanned by the free columns of `S`, with
    /// the projection.
    pub fn quotient(&self, s: &Subspace<F>) -> (ModuleRep<F>, ModuleMap<F>) {
        let free: Vec<Vec<usize>> = s.parts.iter().map(|e| e.free_columns()).collect();
        let dims: Vec<usize> = free.iter().map(|f| f.len()).collect();
        let blocks = (0..self.alg.dim())
            .map(|a| {
                let (al, ga) = (self.alg.bottom(a), self.alg.top(a));
                let mut m = Matrix::zeros(dims[al], dims[ga]);
                let b = &self.blocks[a];
                for (c, &j) in free[ga].iter().enumerate() {
                    let coords = s.parts[al].quotient_coordinates(b.column(j));
                    for (r, x) in coords.into_iter().enumerate() {
                        m.set(r, c, x);
                    }
                }
                m
            })
            .collect();
        let proj = ModuleMap {
            parts: (0..self.dims.len())
                .map(|l| {
                    let mut m = Matrix::zeros(dims[l], self.dims[l]);
                    for j in 0..self.dims[l] {
                        let mut e = vec![F::zero(); self.dims[l]];
                        e[j] = F::one();
                        for (r, x) in s.parts[l].quotient_coordinates(e).into_iter().enumerate() {
                            m.set(r, j, x);
                        }
                    }
                    m
                })
                .collect(),
        };
        (
            ModuleRep {
                alg: self.alg.clone(),
                dims,
                blocks,
            },
            proj,
        )
    }

    /// Direct sum, weight space by weight space in summand order.
    pub fn direct_sum(alg: &Arc<ArcAlgebra>, parts: &[&ModuleRep<F>]) -> Self {
        let nl = alg.labels().len();
        let dims: Vec<usize> = (0..nl).map(|l| parts.iter().map(|p| p.dims[l]).sum()).collect();
        let blocks = (0..alg.dim())
            .map(|a| {
                let (al, ga) = (alg.bottom(a), alg.top(a));
                let mut m = Matrix::zeros(dims[al], dims[ga]);
                let (mut r0, mut c0) = (0, 0);
                for p in parts {
                    let b = &p.blocks[a];
                    for r in 0..b.rows() {
                        for c in 0..b.cols() {
                            m.set(r0 + r, c0 + c, b.get(r, c).clone());
                        }
                    }
                    r0 += p.dims[al];
                    c0 += p.dims[ga];
                }
                m
            })
            .collect();
        ModuleRep {
            alg: alg.clone(),
            dims,
            blocks,
        }
    }

    /// `M^⊛` with `(aψ)(m) = ψ(a* m)`, on the dual bases.
    pub fn dual(&self) -> Self {
        let blocks = (0..self.alg.dim())
            .map(|a| self.blocks[self.alg.star(a)].transpose())
            .collect();
        ModuleRep {
            alg: self.alg.clone(),
            dims: self.dims.clone(),
            blocks,
        }
    }

    /// Images of a basis of the top `M/rad M`, as `(label, vector)`.
    pub fn top_representatives(&self) -> Vec<(usize, Vec<F>)> {
        let rad = self.radical();
        let mut reps = Vec::new();
        for (l, part) in rad.parts.iter().enumerate() {
            for j in part.free_columns() {
                let mut v = vec![F::zero(); self.dims[l]];
                v[j] = F::one();
                reps.push((l, v));
            }
        }
        reps
    }

    /// `P → M` sending the generator `e_λ` of the `i`-th summand to the
    /// `i`-th vector.
    pub fn map_from_projectives(&self, gens: &[(usize, Vec<F>)]) -> (ModuleRep<F>, ModuleMap<F>) {
        let alg = &self.alg;
        let projs: Vec<ModuleRep<F>> = gens.iter().map(|(l, _)| Self::projective_at(alg, *l)).collect();
        let refs: Vec<&ModuleRep<F>> = projs.iter().collect();
        let p = Self::direct_sum(alg, &refs);
        let parts = (0..self.dims.len())
            .map(|mu| {
                let mut cols: Vec<Vec<F>> = Vec::new();
                for (l, v) in gens {
                    for x in projective_basis(alg, *l, mu) {
                        cols.push(self.blocks[x].mul_vec(v));
                    }
                }
                Matrix::from_columns(&cols, self.dims[mu])
            })
            .collect();
        (p, ModuleMap { parts })
    }

    /// Projective cover with the covering surjection.
    pub fn projective_cover(&self) -> (ModuleRep<F>, ModuleMap<F>) {
        self.map_from_projectives(&self.top_representatives())
    }

    pub fn report(&self) -> serde_json::Value {
        let fmt = |layers: Vec<Vec<usize>>| -> Vec<serde_json::Value> {
            layers
                .iter()
                .map(|l| {
                    serde_json::Value::Array(
                        self.layer_weights(l)
                            .into_iter()
                            .map(|(w, d)| json!({"weight": w, "mult": d}))
                            .collect(),
                    )
                })
                .collect()
        };
        json!({
            "algebra": self.alg.name(),
            "dim": self.dim(),
            "weight_spaces": self.composition_factors().into_iter()
                .map(|(w, d)| json!({"weight": w, "dim": d})).collect::<Vec<_>>(),
            "radical_layers": fmt(self.radical_layers()),
            "socle_layers": fmt(self.socle_layers()),
        })
    }
}

/// Basis of `Hom_A(M, N)`, found by solving the intertwining equations
/// for the algebra generators.
pub fn hom_space<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>) -> Result<Vec<ModuleMap<F>>> {
    let alg = m.algebra();
    if !Arc::ptr_eq(alg, n.algebra()) {
        return Err(ArcError::Precondition("modules over different algebras".into()));
    }
    let nl = alg.labels().len();
    // Unknown X_l has shape dN_l × dM_l, row-major.
    let mut off = vec![0; nl + 1];
    for l in 0..nl {
        off[l + 1] = off[l] + n.dims[l] * m.dims[l];
    }
    let unknowns = off[nl];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let gens = alg.generators::<F>();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for &g in gens.iter() {
        let (al, ga) = (alg.bottom(g), alg.top(g));
        let (ng, mg) = (&n.blocks[g], &m.blocks[g]);
        // N_g X_γ - X_α M_g = 0, entry (r, c) with r < dN_α, c < dM_γ.
        for r in 0..n.dims[al] {
            for c in 0..m.dims[ga] {
                let mut row = vec![F::zero(); unknowns];
                let mut any = false;
                for k in 0..n.dims[ga] {
                    let x = ng.get(r, k);
                    if !x.is_zero() {
                        let idx = off[ga] + k * m.dims[ga] + c;
                        row[idx] = row[idx].clone() + x.clone();
                        any = true;
                    }
                }
                for k in 0..m.dims[al] {
                    let x = mg.get(k, c);
                    if !x.is_zero() {
                        let idx = off[al] + r * m.dims[al] + k;
                        row[idx] = row[idx].clone() - x.clone();
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    let sols = if rows.is_empty() {
        Echelon::<F>::full(unknowns).basis().to_vec()
    } else {
        Matrix::from_rows(rows, unknowns)?.kernel_basis()
    };
    Ok(sols
        .into_iter()
        .map(|s| ModuleMap {
            parts: (0..nl)
                .map(|l| {
                    let (r, c) = (n.dims[l], m.dims[l]);
                    let mut x = Matrix::zeros(r, c);
                    for i in 0..r {
                        for j in 0..c {
                            x.set(i, j, s[off[l] + i * c + j].clone());
                        }
                    }
                    x
                })
                .collect(),
        })
        .collect())
}

pub fn hom_dim<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>) -> Result<usize> {
    Ok(hom_space(m, n)?.len())
}

/// Decides `M ≅ N` by testing random combinations of a basis of
/// `Hom(M, N)` for invertibility. The generator is seeded, so answers are
/// reproducible.
pub fn is_iso<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>) -> Result<bool> {
    Ok(find_iso(m, n)?.is_some())
}

pub fn find_iso<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>) -> Result<Option<ModuleMap<F>>> {
    if m.dims != n.dims {
        return Ok(None);
    }
    let hom = hom_space(m, n)?;
    if m.dim() == 0 {
        return Ok(Some(ModuleMap::zero(&m.dims, &n.dims)));
    }
    if hom.is_empty() {
        return Ok(None);
    }
    for h in &hom {
        if h.is_iso() {
            return Ok(Some(h.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a7c0);
    for _ in 0..48 {
        let mut acc = ModuleMap::zero(&m.dims, &n.dims);
        for h in &hom {
            let c = F::from_i64(rng.gen_range(-1000..=1000));
            acc = acc.add(&h.scale(&c))?;
        }
        if acc.is_iso() {
            return Ok(Some(acc));
        }
    }
    Ok(None)
}

/// Checks that `f` intertwines the actions on `m` and `n`.
pub fn is_homomorphism<F: Field>(f: &ModuleMap<F>, m: &ModuleRep<F>, n: &ModuleRep<F>) -> Result<bool> {
    let alg = m.algebra();
    for a in 0..alg.dim() {
        let (al, ga) = (alg.bottom(a), alg.top(a));
        if n.blocks[a].mul(&f.parts[ga])? != f.parts[al].mul(&m.blocks[a])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A projective resolution `… → P_1 → P_0 → M`. Term `k` is the direct
/// sum of `P(summands[k][j])`; `images[k][j]` is the image of its `j`-th
/// generator, a vector in the weight space `summands[k][j]` of `M` (for
/// `k = 0`) or of `P_{k-1}`.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    pub alg: Arc<ArcAlgebra>,
    pub summands: Vec<Vec<usize>>,
    pub images: Vec<Vec<Vec<F>>>,
    /// True when the last computed syzygy was zero.
    pub complete: bool,
}

impl<F: Field> Resolution<F> {
    /// Multiplicity of `P(λ)` in term `k`, per label.
    pub fn multiplicities(&self, k: usize) -> Vec<usize> {
        let mut out = vec![0; self.alg.labels().len()];
        if let Some(s) = self.summands.get(k) {
            for &l in s {
                out[l] += 1;
            }
        }
        out
    }
}

/// Minimal projective resolution through term `len`.
pub fn minimal_resolution<F: Field>(m: &ModuleRep<F>, len: usize, cap: usize) -> Result<Resolution<F>> {
    let alg = m.algebra().clone();
    let mut summands = Vec::new();
    let mut images = Vec::new();
    let mut z = m.clone();
    let mut to_ambient = ModuleMap::identity(&m.dims);
    for _ in 0..=len {
        if z.is_zero() {
            return Ok(Resolution {
                alg,
                summands,
                images,
                complete: true,
            });
        }
        let reps = z.top_representatives();
        let (p, cover) = z.map_from_projectives(&reps);
        if p.dim() > cap {
            return Err(ArcError::ResourceCap(format!(
                "resolution term {} has dimension {} over the cap {cap}",
                summands.len(),
                p.dim()
            )));
        }
        summands.push(reps.iter().map(|(l, _)| *l).collect());
        images.push(
            reps.iter()
                .map(|(l, v)| to_ambient.parts[*l].mul_vec(v))
                .collect(),
        );
        let ker = cover.kernel();
        let (nz, incl) = p.submodule(&ker);
        z = nz;
        to_ambient = incl;
    }
    Ok(Resolution {
        alg,
        summands,
        images,
        complete: z.is_zero(),
    })
}

/// The coboundary `Hom(P_k, N) → Hom(P_{k+1}, N)`, identifying
/// `Hom(P(λ), N)` with `e_λ N`.
fn coboundary<F: Field>(res: &Resolution<F>, k: usize, n: &ModuleRep<F>) -> Matrix<F> {
    let alg = &res.alg;
    let src = &res.summands[k];
    let tgt = res.summands.get(k + 1).cloned().unwrap_or_default();
    let mut col_off = Vec::with_capacity(src.len());
    let mut cols = 0;
    for &l in src {
        col_off.push(cols);
        cols += n.dims[l];
    }
    let rows: usize = tgt.iter().map(|&l| n.dims[l]).sum();
    let mut d = Matrix::<F>::zeros(rows, cols);
    let mut r0 = 0;
    for (j, &mu) in tgt.iter().enumerate() {
        let y = &res.images[k + 1][j];
        // y lies in e_μ P_k = ⊕_i e_μ P(λ_i).
        let mut pos = 0;
        for (i, &lam) in src.iter().enumerate() {
            for x in projective_basis(alg, lam, mu) {
                let c = &y[pos];
                pos += 1;
                if c.is_zero() {
                    continue;
                }
                let b = n.block(x);
                for r in 0..b.rows() {
                    for cc in 0..b.cols() {
                        let v = b.get(r, cc);
                        if v.is_zero() {
                            continue;
                        }
                        let at = (r0 + r, col_off[i] + cc);
                        let nv = d.get(at.0, at.1).clone() + c.clone() * v.clone();
                        d.set(at.0, at.1, nv);
                    }
                }
            }
        }
        r0 += n.dims[mu];
    }
    d
}

/// `dim Ext^i(M, N)` for `i = 0..=max`, from the cohomology of
/// `Hom(P_•, N)`.
pub fn ext_dims<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>, max: usize, cap: usize) -> Result<Vec<usize>> {
    let res = minimal_resolution(m, max + 1, cap)?;
    ext_dims_from(&res, n, max)
}

pub fn ext_dims_from<F: Field>(res: &Resolution<F>, n: &ModuleRep<F>, max: usize) -> Result<Vec<usize>> {
    if !res.complete && res.summands.len() < max + 2 {
        return Err(ArcError::Precondition("resolution too short".into()));
    }
    let c_dim = |k: usize| -> usize {
        res.summands
            .get(k)
            .map_or(0, |s| s.iter().map(|&l| n.dims[l]).sum())
    };
    let rank = |k: usize| -> usize {
        if k >= res.summands.len() {
            0
        } else {
            coboundary(res, k, n).rank()
        }
    };
    let mut out = Vec::with_capacity(max + 1);
    let mut prev_rank = 0;
    for i in 0..=max {
        let r = rank(i);
        out.push(c_dim(i) - r - prev_rank);
        prev_rank = r;
    }
    Ok(out)
}

pub fn ext_dim<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>, i: usize) -> Result<usize> {
    Ok(ext_dims(m, n, i, DEFAULT_RESOLUTION_CAP)?[i])
}

/// `[Δ(λ) : L(μ)]` indexed `[λ][μ]`, read off the computed standards.
pub fn decomposition_matrix<F: Field>(alg: &Arc<ArcAlgebra>) -> Result<Vec<Vec<usize>>> {
    (0..alg.labels().len())
        .map(|l| Ok(ModuleRep::<F>::standard_at(alg, l)?.dims.clone()))
        .collect()
}

/// `(M : Δ(λ))` by solving `[M] = Σ c_λ [Δ(λ)]` in the Grothendieck
/// group; meaningful only for Δ-filtered `M`. A negative solution is
/// reported as an error.
pub fn delta_filtration_mults<F: Field>(m: &ModuleRep<F>) -> Result<Vec<usize>> {
    let dec = decomposition_matrix::<F>(m.algebra())?;
    delta_filtration_mults_with(m, &dec)
}

pub fn delta_filtration_mults_with<F: Field>(m: &ModuleRep<F>, dec: &[Vec<usize>]) -> Result<Vec<usize>> {
    let alg = m.algebra();
    let labels = alg.labels();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    // Maximal weights (small partitions) first.
    order.sort_by_key(|&l| (labels[l].to_partition().size(), l));
    let mut rest: Vec<i64> = m.dims.iter().map(|&d| d as i64).collect();
    let mut c = vec![0usize; labels.len()];
    for &l in &order {
        let k = rest[l];
        if k < 0 {
            return Err(ArcError::NotDeltaFiltered(format!(
                "coefficient of Δ({}) would be {k}",
                labels[l]
            )));
        }
        c[l] = k as usize;
        for (mu, &d) in dec[l].iter().enumerate() {
            rest[mu] -= k * d as i64;
        }
    }
    Ok(c)
}
