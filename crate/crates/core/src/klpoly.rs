//! The Kazhdan–Lusztig monomials `n_{λμ}(q)` and the inverse family
//! `p_{λμ}(q)`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_weights_bounded, PairSign, Weight};
use crate::error::Result;

/// A polynomial in `q` with non-negative integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::monomial(0)
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Poly {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `q^k`, written `p^{(k)}`.
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplication by `q`.
    pub fn shift(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0);
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// The substitution `q ↦ −q`, as an integer polynomial.
    pub fn at_minus_q(&self) -> IntPoly {
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
                .collect(),
        )
    }

    pub fn to_int(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|&c| c as i64).collect())
    }
}

fn write_terms<T: fmt::Display + PartialEq + Default + Copy>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    one: T,
) -> fmt::Result {
    let zero = T::default();
    let mut first = true;
    for (k, &c) in coeffs.iter().enumerate() {
        if c == zero {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "{c}")?,
            _ if c == one => {}
            _ => write!(f, "{c}")?,
        }
        match k {
            0 => {}
            1 => write!(f, "q")?,
            _ => write!(f, "q^{k}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, 1)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// A polynomial in `ℤ[q]`, used only for the inverse check.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &IntPoly, k: usize| p.coeffs.get(k).copied().unwrap_or(0);
        IntPoly::from_coeffs((0..len).map(|k| get(self, k) + get(other, k)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, 1)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// `n_{λμ}(q) = q^{deg(μ̲λ)}` when `μ̲λ` is oriented, else 0.
pub fn n_poly(lam: &Weight, mu: &Weight) -> Result<Poly> {
    lam.check_same_box(mu)?;
    let cup = mu.cup_diagram();
    if cup.is_oriented(lam) {
        Ok(Poly::monomial(cup.degree_unchecked(lam)))
    } else {
        Ok(Poly::zero())
    }
}

type Memo = RwLock<HashMap<(Weight, Weight), Poly>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `p_{λμ}(q)`, using the smallest descent position at every step.
pub fn p_poly(lam: &Weight, mu: &Weight) -> Result<Poly> {
    lam.check_same_box(mu)?;
    Ok(p_cached(lam, mu))
}

fn p_cached(lam: &Weight, mu: &Weight) -> Poly {
    if let Some(p) = memo().read().expect("memo lock").get(&(*lam, *mu)) {
        return p.clone();
    }
    let p = p_step(lam, mu, &|ds: &[usize]| ds[0], &p_cached);
    memo().write().expect("memo lock").insert((*lam, *mu), p.clone());
    p
}

/// Positions `i` (1-based) with `λ ∈ Λ^{∨∧}(i)`.
pub fn descents(lam: &Weight) -> Vec<usize> {
    (1..lam.len()).filter(|&i| lam.in_down_up(i)).collect()
}

/// One unfolding of the recursion with the descent picked by `choose`,
/// sub-problems delegated to `recurse`.
fn p_step(
    lam: &Weight,
    mu: &Weight,
    choose: &dyn Fn(&[usize]) -> usize,
    recurse: &dyn Fn(&Weight, &Weight) -> Poly,
) -> Poly {
    if lam == mu {
        return Poly::one();
    }
    if !lam.leq_unchecked(mu) {
        return Poly::zero();
    }
    let ds = descents(lam);
    // μ > λ forces λ to be non-maximal, so a descent exists.
    let i = choose(&ds);
    let lam_minus = lam.swapped(i - 1, i);
    let tail = recurse(&lam_minus, mu).shift();
    if mu.in_down_up(i) {
        let lp = lam.remove_pair(i).expect("descent");
        let mp = mu.remove_pair(i).expect("descent");
        recurse(&lp, &mp).add(&tail)
    } else {
        tail
    }
}

/// How [`p_poly_with`] picks the descent position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentChoice {
    Smallest,
    Largest,
    /// The `k`-th admissible position (mod the number of descents).
    Nth(usize),
}

impl DescentChoice {
    fn pick(self, ds: &[usize]) -> usize {
        match self {
            DescentChoice::Smallest => ds[0],
            DescentChoice::Largest => ds[ds.len() - 1],
            DescentChoice::Nth(k) => ds[k % ds.len()],
        }
    }
}

/// `p_{λμ}` recomputed without the shared cache, with `choice` applied at
/// every level. Used to confirm independence from the descent choice.
pub fn p_poly_with(lam: &Weight, mu: &Weight, choice: DescentChoice) -> Result<Poly> {
    lam.check_same_box(mu)?;
    let mut local: HashMap<(Weight, Weight), Poly> = HashMap::new();
    Ok(p_uncached(lam, mu, choice, &mut local))
}

fn p_uncached(
    lam: &Weight,
    mu: &Weight,
    choice: DescentChoice,
    local: &mut HashMap<(Weight, Weight), Poly>,
) -> Poly {
    if let Some(p) = local.get(&(*lam, *mu)) {
        return p.clone();
    }
    // Unroll p_step by hand so the local cache can be threaded through.
    let p = if lam == mu {
        Poly::one()
    } else if !lam.leq_unchecked(mu) {
        Poly::zero()
    } else {
        let i = choice.pick(&descents(lam));
        let lam_minus = lam.swapped(i - 1, i);
        let tail = p_uncached(&lam_minus, mu, choice, local).shift();
        if mu.in_down_up(i) {
            let lp = lam.remove_pair(i).expect("descent");
            let mp = mu.remove_pair(i).expect("descent");
            p_uncached(&lp, &mp, choice, local).add(&tail)
        } else {
            tail
        }
    };
    local.insert((*lam, *mu), p.clone());
    p
}

/// `p_{λμ}` evaluated once for every admissible top-level descent, with the
/// canonical recursion below.
pub fn p_poly_every_top_choice(lam: &Weight, mu: &Weight) -> Result<Vec<Poly>> {
    lam.check_same_box(mu)?;
    if lam == mu || !lam.leq_unchecked(mu) {
        return Ok(vec![p_cached(lam, mu)]);
    }
    let ds = descents(lam);
    Ok(ds
        .iter()
        .map(|&i| p_step(lam, mu, &move |_| i, &p_cached))
        .collect())
}

/// A square matrix of polynomials indexed by `enumerate_weights` order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyMatrix {
    pub weights: Vec<Weight>,
    pub entries: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r][c]
    }

    /// Comma separated table with weight labels and coefficient lists.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for w in &self.weights {
            out.push(',');
            out.push_str(&w.to_string());
        }
        out.push('\n');
        for (w, row) in self.weights.iter().zip(&self.entries) {
            out.push_str(&w.to_string());
            for p in row {
                let cs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                out.push_str(&format!(",\"[{}]\"", cs.join(" ")));
            }
            out.push('\n');
        }
        out
    }
}

/// Default cap on `|Λ_{m,n}|` for matrix-level routines.
pub const DEFAULT_WEIGHT_CAP: usize = 5000;

/// `(n_{λμ}(q))`.
pub fn kl_matrix(m: usize, n: usize, cap: usize) -> Result<PolyMatrix> {
    let weights = enumerate_weights_bounded(m, n, cap)?;
    let entries = weights
        .iter()
        .map(|l| weights.iter().map(|u| n_poly(l, u).expect("same box")).collect())
        .collect();
    Ok(PolyMatrix { weights, entries })
}

/// `(p_{λμ}(q))`.
pub fn inverse_kl_matrix(m: usize, n: usize, cap: usize) -> Result<PolyMatrix> {
    let weights = enumerate_weights_bounded(m, n, cap)?;
    let entries = weights
        .iter()
        .map(|l| weights.iter().map(|u| p_cached(l, u)).collect())
        .collect();
    Ok(PolyMatrix { weights, entries })
}

/// The product `Σ_ν p_{λν}(−q)·n_{μν}(q)` in `ℤ[q]`.
///
/// `n_{λμ}` is nonzero only for `μ ≤ λ` while `p_{λμ}` is nonzero only for
/// `λ ≤ μ`, so with these index conventions it is the transpose of the
/// `n` matrix that `p(−q)` inverts.
pub fn inverse_product(m: usize, n: usize, cap: usize) -> Result<Vec<Vec<IntPoly>>> {
    let p = inverse_kl_matrix(m, n, cap)?;
    let nm = kl_matrix(m, n, cap)?;
    let size = p.weights.len();
    let p_neg: Vec<Vec<IntPoly>> = p
        .entries
        .iter()
        .map(|row| row.iter().map(Poly::at_minus_q).collect())
        .collect();
    let n_int: Vec<Vec<IntPoly>> = nm
        .entries
        .iter()
        .map(|row| row.iter().map(Poly::to_int).collect())
        .collect();
    Ok((0..size)
        .map(|r| {
            (0..size)
                .map(|c| {
                    (0..size).fold(IntPoly::zero(), |acc, k| acc.add(&p_neg[r][k].mul(&n_int[c][k])))
                })
                .collect()
        })
        .collect())
}

/// True iff [`inverse_product`] is the identity matrix.
pub fn verify_inverse(m: usize, n: usize, cap: usize) -> Result<bool> {
    let prod = inverse_product(m, n, cap)?;
    Ok(prod.iter().enumerate().all(|(r, row)| {
        row.iter()
            .enumerate()
            .all(|(c, x)| if r == c { *x == IntPoly::one() } else { x.is_zero() })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainViolation {
    pub lam: Weight,
    pub mu: Weight,
    pub k: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    /// Nonzero coefficients examined.
    pub checked: usize,
    pub violations: Vec<ChainViolation>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every `p^{(k)}_{λμ} ≠ 0` must be witnessed by a chain
/// `λ = λ_0 → λ_1 → … → λ_k = μ`.
pub fn arrow_chain_support_check(m: usize, n: usize, cap: usize) -> Result<ChainReport> {
    let weights = enumerate_weights_bounded(m, n, cap)?;
    let succ: HashMap<Weight, Vec<Weight>> =
        weights.iter().map(|w| (*w, w.arrow_successors())).collect();
    let mut report = ChainReport::default();
    for lam in &weights {
        // layers[k] = weights reachable by a chain of exactly k arrows
        let mut layers: Vec<HashSet<Weight>> = vec![HashSet::from([*lam])];
        for mu in &weights {
            let p = p_cached(lam, mu);
            for (k, &c) in p.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                while layers.len() <= k {
                    let next: HashSet<Weight> = layers
                        .last()
                        .expect("nonempty")
                        .iter()
                        .flat_map(|w| succ[w].iter().copied())
                        .collect();
                    layers.push(next);
                }
                report.checked += 1;
                if !layers[k].contains(mu) {
                    report.violations.push(ChainViolation {
                        lam: *lam,
                        mu: *mu,
                        k,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Arrow pairs violating `min ℓ_h(μ) ≥ min ℓ_h(λ) − 1` over ∧-positions `h`.
pub fn little_claim_violations(m: usize, n: usize, cap: usize) -> Result<Vec<(Weight, Weight)>> {
    let weights = enumerate_weights_bounded(m, n, cap)?;
    let mut bad = Vec::new();
    for lam in &weights {
        for mu in lam.arrow_successors() {
            if let (Some(a), Some(b)) = (mu.min_ell_at_ups(), lam.min_ell_at_ups()) {
                if a < b - 1 {
                    bad.push((*lam, mu));
                }
            }
        }
    }
    Ok(bad)
}

/// `λ⁺` and `λ⁻` for `λ′` at position `i`.
pub fn plus_minus(lam_prime: &Weight, i: usize) -> Result<(Weight, Weight)> {
    Ok((
        lam_prime.insert_pair(i, PairSign::Plus)?,
        lam_prime.insert_pair(i, PairSign::Minus)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    #[test]
    fn poly_display() {
        assert_eq!(Poly::from_coeffs(vec![1, 0, 2, 1]).to_string(), "1 + 2q^2 + q^3");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::monomial(1).to_string(), "q");
        assert_eq!(Poly::from_coeffs(vec![0, 1, 0, 0]).coeffs(), &[0, 1]);
    }

    #[test]
    fn small_p_values() {
        assert_eq!(p_poly(&w("v^"), &w("^v")).unwrap(), Poly::monomial(1));
        assert_eq!(p_poly(&w("^v"), &w("v^")).unwrap(), Poly::zero());
        assert_eq!(p_poly(&w("v^v"), &w("v^v")).unwrap(), Poly::one());
        assert!(p_poly(&w("v^"), &w("v^v")).is_err());
    }

    #[test]
    fn int_poly_product() {
        let a = IntPoly::from_coeffs(vec![1, -1]);
        let b = IntPoly::from_coeffs(vec![1, 1]);
        assert_eq!(a.mul(&b), IntPoly::from_coeffs(vec![1, 0, -1]));
    }

    #[test]
    fn csv_has_labels() {
        let csv = kl_matrix(1, 1, 10).unwrap().to_csv();
        assert!(csv.starts_with("row,v^,^v\n"));
        assert!(kl_matrix(5, 5, 10).is_err());
    }
}
