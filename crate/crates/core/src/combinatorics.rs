//! Weights, partitions, cup diagrams and the surgeries on weights.
//!
//! Positions passed to the pair operations (`remove_pair`,
//! `insert_pair`, `ell`, the `Λ^{∨∧}(i)` tests) are 1-based; raw symbol
//! access through [`Weight::get`] is 0-based like a slice.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ArcError, Result};

/// Longest weight a [`Weight`] can hold.
pub const MAX_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// ∨, written `v`.
    Down,
    /// ∧, written `^`.
    Up,
}

impl Symbol {
    pub fn flip(self) -> Symbol {
        match self {
            Symbol::Down => Symbol::Up,
            Symbol::Up => Symbol::Down,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Down => 'v',
            Symbol::Up => '^',
        }
    }
}

/// A sequence of `m` ∧'s and `n` ∨'s.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    len: u8,
    /// Bit k set when position k (0-based) is ∧.
    ups: u32,
}

impl Weight {
    pub fn empty() -> Weight {
        Weight { len: 0, ups: 0 }
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Result<Weight> {
        if symbols.len() > MAX_LEN {
            return Err(ArcError::Parse(format!(
                "weights are limited to {MAX_LEN} symbols, got {}",
                symbols.len()
            )));
        }
        let mut ups = 0u32;
        for (k, s) in symbols.iter().enumerate() {
            if *s == Symbol::Up {
                ups |= 1 << k;
            }
        }
        Ok(Weight {
            len: symbols.len() as u8,
            ups,
        })
    }

    /// Parses `[v^]*`. Whitespace is ignored so `"v v ^ ^"` is accepted.
    pub fn parse(s: &str) -> Result<Weight> {
        let mut symbols = Vec::new();
        for c in s.chars() {
            match c {
                'v' | 'V' | '∨' => symbols.push(Symbol::Down),
                '^' | '∧' => symbols.push(Symbol::Up),
                c if c.is_whitespace() => {}
                c => {
                    return Err(ArcError::Parse(format!(
                        "unexpected character {c:?} in weight {s:?}"
                    )))
                }
            }
        }
        Weight::from_symbols(&symbols)
    }

    /// Parses a weight and checks it lies in `Λ_{m,n}`.
    pub fn parse_in(s: &str, m: usize, n: usize) -> Result<Weight> {
        let w = Weight::parse(s)?;
        if w.m() != m || w.n() != n {
            return Err(ArcError::BoxMismatch(w.m(), w.n(), m, n));
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of ∧'s.
    pub fn m(&self) -> usize {
        self.ups.count_ones() as usize
    }

    /// Number of ∨'s.
    pub fn n(&self) -> usize {
        self.len() - self.m()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m(), self.n())
    }

    /// Symbol at 0-based index `k`.
    pub fn get(&self, k: usize) -> Symbol {
        assert!(k < self.len(), "index {k} out of range for weight of length {}", self.len);
        if self.ups >> k & 1 == 1 {
            Symbol::Up
        } else {
            Symbol::Down
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.len()).map(|k| self.get(k)).collect()
    }

    pub fn with(&self, k: usize, s: Symbol) -> Weight {
        assert!(k < self.len());
        let ups = match s {
            Symbol::Up => self.ups | 1 << k,
            Symbol::Down => self.ups & !(1 << k),
        };
        Weight { len: self.len, ups }
    }

    /// Exchanges the symbols at 0-based indices `a` and `b`.
    pub fn swapped(&self, a: usize, b: usize) -> Weight {
        let (sa, sb) = (self.get(a), self.get(b));
        self.with(a, sb).with(b, sa)
    }

    /// The 180 degree rotation: reverse the string and exchange ∧ with ∨.
    /// Maps `Λ_{m,n}` to `Λ_{n,m}`.
    pub fn rotate(&self) -> Weight {
        let syms: Vec<Symbol> = self.symbols().into_iter().rev().map(Symbol::flip).collect();
        Weight::from_symbols(&syms).expect("same length")
    }

    pub fn check_same_box(&self, other: &Weight) -> Result<()> {
        if self.shape() != other.shape() {
            let (a, b) = self.shape();
            let (c, d) = other.shape();
            return Err(ArcError::BoxMismatch(a, b, c, d));
        }
        Ok(())
    }

    pub fn to_partition(&self) -> Partition {
        let m = self.m();
        let mut ups_seen = 0;
        let mut parts = Vec::with_capacity(self.n());
        for s in self.symbols() {
            match s {
                Symbol::Up => ups_seen += 1,
                Symbol::Down => parts.push(m - ups_seen),
            }
        }
        Partition::new(parts, m, self.n()).expect("weights always fit their box")
    }

    pub fn from_partition(p: &Partition) -> Weight {
        let (m, n) = (p.m, p.n);
        let mut syms = Vec::with_capacity(m + n);
        let mut ups = 0;
        for r in 0..n {
            let want = m - p.part(r);
            while ups < want {
                syms.push(Symbol::Up);
                ups += 1;
            }
            syms.push(Symbol::Down);
        }
        while ups < m {
            syms.push(Symbol::Up);
            ups += 1;
        }
        Weight::from_symbols(&syms).expect("box fits MAX_LEN")
    }

    /// `self ≤ other` in the order where moving ∨'s to the right makes a
    /// weight bigger. Equivalent to `other.partition() ⊆ self.partition()`.
    pub fn leq(&self, other: &Weight) -> Result<bool> {
        self.check_same_box(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &Weight) -> bool {
        // The r-th ∨ of `other` must have at least as many ∧'s before it.
        let (mut a, mut b) = (0usize, 0usize);
        let mut downs_a = Vec::with_capacity(self.n());
        let mut downs_b = Vec::with_capacity(other.n());
        for k in 0..self.len() {
            match self.get(k) {
                Symbol::Up => a += 1,
                Symbol::Down => downs_a.push(a),
            }
            match other.get(k) {
                Symbol::Up => b += 1,
                Symbol::Down => downs_b.push(b),
            }
        }
        downs_a.iter().zip(&downs_b).all(|(x, y)| x <= y)
    }

    pub fn lt(&self, other: &Weight) -> Result<bool> {
        Ok(self != other && self.leq(other)?)
    }

    /// `(m^n) = ∨…∨∧…∧`, the minimal weight.
    pub fn minimal(m: usize, n: usize) -> Weight {
        let mut syms = vec![Symbol::Down; n];
        syms.extend(std::iter::repeat(Symbol::Up).take(m));
        Weight::from_symbols(&syms).expect("box fits MAX_LEN")
    }

    /// `∅ = ∧…∧∨…∨`, the maximal weight.
    pub fn maximal(m: usize, n: usize) -> Weight {
        let mut syms = vec![Symbol::Up; m];
        syms.extend(std::iter::repeat(Symbol::Down).take(n));
        Weight::from_symbols(&syms).expect("box fits MAX_LEN")
    }

    pub fn cup_diagram(&self) -> CupDiagram {
        let mut partner = vec![None; self.len()];
        let mut stack = Vec::new();
        for k in 0..self.len() {
            match self.get(k) {
                Symbol::Down => stack.push(k),
                Symbol::Up => {
                    if let Some(l) = stack.pop() {
                        partner[l] = Some(k);
                        partner[k] = Some(l);
                    }
                }
            }
        }
        CupDiagram { partner }
    }

    /// Number of cups in the cup diagram.
    pub fn defect(&self) -> usize {
        self.cup_diagram().cups().len()
    }

    pub fn is_regular(&self) -> bool {
        self.defect() == self.m().min(self.n())
    }

    /// `ℓ_t`: #∨ minus #∧ among the first `t` positions.
    pub fn ell(&self, t: usize) -> i64 {
        (0..t.min(self.len()))
            .map(|k| match self.get(k) {
                Symbol::Down => 1,
                Symbol::Up => -1,
            })
            .sum()
    }

    /// `min { ℓ_h : h labelled ∧ }`, `None` when there is no ∧.
    pub fn min_ell_at_ups(&self) -> Option<i64> {
        (0..self.len())
            .filter(|&k| self.get(k) == Symbol::Up)
            .map(|k| self.ell(k + 1))
            .min()
    }

    /// The regular weight `λ°`.
    ///
    /// Clockwise cups are the brackets of the matching `∧ = (`, `∨ = )`;
    /// flipping each such pair to `∨∧` and keeping the rest gives `λ°`.
    pub fn circ(&self) -> Weight {
        let mut out = *self;
        let mut stack = Vec::new();
        for k in 0..self.len() {
            match self.get(k) {
                Symbol::Up => stack.push(k),
                Symbol::Down => {
                    if let Some(l) = stack.pop() {
                        out = out.with(l, Symbol::Down).with(k, Symbol::Up);
                    }
                }
            }
        }
        out
    }

    fn check_pair_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.len() {
            return Err(ArcError::BadPosition {
                pos: i,
                len: self.len(),
                reason: "need 1 <= i < length",
            });
        }
        Ok(())
    }

    /// True when positions `i, i+1` (1-based) read `∨∧`.
    pub fn in_down_up(&self, i: usize) -> bool {
        i >= 1 && i < self.len() && self.get(i - 1) == Symbol::Down && self.get(i) == Symbol::Up
    }

    /// True when positions `i, i+1` (1-based) read `∧∨`.
    pub fn in_up_down(&self, i: usize) -> bool {
        i >= 1 && i < self.len() && self.get(i - 1) == Symbol::Up && self.get(i) == Symbol::Down
    }

    /// `λ′`: delete positions `i, i+1`, which must carry one ∧ and one ∨.
    pub fn remove_pair(&self, i: usize) -> Result<Weight> {
        self.check_pair_pos(i)?;
        if self.get(i - 1) == self.get(i) {
            return Err(ArcError::BadPosition {
                pos: i,
                len: self.len(),
                reason: "positions i and i+1 must carry different symbols",
            });
        }
        let mut syms = self.symbols();
        syms.drain(i - 1..=i);
        Weight::from_symbols(&syms)
    }

    /// `λ⁺` (sign `Plus`, inserts `∨∧`) or `λ⁻` (sign `Minus`, inserts `∧∨`)
    /// at positions `i, i+1` of the longer weight.
    pub fn insert_pair(&self, i: usize, sign: PairSign) -> Result<Weight> {
        if i == 0 || i > self.len() + 1 {
            return Err(ArcError::BadPosition {
                pos: i,
                len: self.len() + 2,
                reason: "need 1 <= i < length of the enlarged weight",
            });
        }
        let mut syms = self.symbols();
        let pair = match sign {
            PairSign::Plus => [Symbol::Down, Symbol::Up],
            PairSign::Minus => [Symbol::Up, Symbol::Down],
        };
        syms.splice(i - 1..i - 1, pair);
        Weight::from_symbols(&syms)
    }

    /// `self → other`: swap a ∨ at `i` with an ∧ at `j > i` across a
    /// segment lying in `Λ°_{t,t}`.
    pub fn arrow_rel(&self, other: &Weight) -> bool {
        if self.shape() != other.shape() {
            return false;
        }
        let diff = self.ups ^ other.ups;
        if diff.count_ones() != 2 {
            return false;
        }
        let i = diff.trailing_zeros() as usize;
        let j = 31 - diff.leading_zeros() as usize;
        if self.get(i) != Symbol::Down || self.get(j) != Symbol::Up {
            return false;
        }
        let seg: Vec<Symbol> = (i + 1..j).map(|k| self.get(k)).collect();
        let seg = Weight::from_symbols(&seg).expect("shorter than self");
        seg.m() == seg.n() && seg.is_regular()
    }

    /// All weights `μ` with `self → μ`.
    pub fn arrow_successors(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if self.get(i) != Symbol::Down {
                continue;
            }
            for j in i + 1..self.len() {
                if self.get(j) == Symbol::Up {
                    let w = self.swapped(i, j);
                    if self.arrow_rel(&w) {
                        out.push(w);
                    }
                }
            }
        }
        out
    }
}

impl Ord for Weight {
    /// Box size first, then lexicographic with `v < ^`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then(self.m().cmp(&other.m()))
            .then_with(|| {
                for k in 0..self.len() {
                    let c = self.get(k).cmp(&other.get(k));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}

impl FromStr for Weight {
    type Err = ArcError;
    fn from_str(s: &str) -> Result<Weight> {
        Weight::parse(s)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Weight, D::Error> {
        let s = String::deserialize(d)?;
        Weight::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairSign {
    /// `λ⁺`, inserts `∨∧`.
    Plus,
    /// `λ⁻`, inserts `∧∨`.
    Minus,
}

/// All of `Λ_{m,n}` in lexicographic order with `v < ^`.
pub fn enumerate_weights(m: usize, n: usize) -> Vec<Weight> {
    assert!(m + n <= MAX_LEN, "weights are limited to {MAX_LEN} symbols");
    let mut out = Vec::new();
    let mut syms = Vec::with_capacity(m + n);
    fn rec(m: usize, n: usize, syms: &mut Vec<Symbol>, out: &mut Vec<Weight>) {
        if m == 0 && n == 0 {
            out.push(Weight::from_symbols(syms).expect("checked length"));
            return;
        }
        if n > 0 {
            syms.push(Symbol::Down);
            rec(m, n - 1, syms, out);
            syms.pop();
        }
        if m > 0 {
            syms.push(Symbol::Up);
            rec(m - 1, n, syms, out);
            syms.pop();
        }
    }
    rec(m, n, &mut syms, &mut out);
    out
}

/// `C(m+n, m)`, saturating.
pub fn weight_count(m: usize, n: usize) -> usize {
    let mut c: u128 = 1;
    for k in 0..m.min(n) {
        c = c * (m + n - k) as u128 / (k + 1) as u128;
    }
    c.min(usize::MAX as u128) as usize
}

/// [`enumerate_weights`] guarded by a cap on `|Λ_{m,n}|`.
pub fn enumerate_weights_bounded(m: usize, n: usize, cap: usize) -> Result<Vec<Weight>> {
    let size = weight_count(m, n);
    if size > cap || m + n > MAX_LEN {
        return Err(ArcError::BoundExceeded {
            what: format!("Λ_{{{m},{n}}}"),
            size,
            cap,
        });
    }
    Ok(enumerate_weights(m, n))
}

/// A partition fitting in the `m × n` box: at most `n` parts, each `≤ m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
    m: usize,
    n: usize,
}

impl Partition {
    /// Trailing zero parts are dropped.
    pub fn new(mut parts: Vec<usize>, m: usize, n: usize) -> Result<Partition> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        let shown = || format_parts(&parts);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ArcError::Parse(format!("{} is not weakly decreasing", shown())));
        }
        if parts.len() > n || parts.first().is_some_and(|&p| p > m) {
            return Err(ArcError::PartitionOutsideBox(shown(), m, n));
        }
        Ok(Partition { parts, m, n })
    }

    /// Parses `"5,4,2,2"`, `"(5^3,4,3^2)"` or `"∅"`.
    pub fn parse(s: &str, m: usize, n: usize) -> Result<Partition> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let mut parts = Vec::new();
        if !(t.is_empty() || t == "∅" || t == "0") {
            for item in t.split(',') {
                let item = item.trim();
                let bad = || ArcError::Parse(format!("bad partition part {item:?} in {s:?}"));
                let (v, e) = match item.split_once('^') {
                    Some((v, e)) => (v, e.trim().parse::<usize>().map_err(|_| bad())?),
                    None => (item, 1),
                };
                let v: usize = v.trim().parse().map_err(|_| bad())?;
                parts.extend(std::iter::repeat(v).take(e));
            }
        }
        Partition::new(parts, m, n)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `r` (0-based), zero beyond the length.
    pub fn part(&self, r: usize) -> usize {
        self.parts.get(r).copied().unwrap_or(0)
    }

    pub fn box_shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.parts.len()).all(|r| other.parts[r] <= self.part(r))
    }

    /// Conjugate partition, living in the `n × m` box.
    pub fn transpose(&self) -> Partition {
        let first = self.part(0);
        let parts = (0..first)
            .map(|c| self.parts.iter().filter(|&&p| p > c).count())
            .collect();
        Partition::new(parts, self.n, self.m).expect("transpose fits the swapped box")
    }

    pub fn to_weight(&self) -> Weight {
        Weight::from_partition(self)
    }
}

fn format_parts(parts: &[usize]) -> String {
    if parts.is_empty() {
        return "∅".to_string();
    }
    let mut items = Vec::new();
    let mut k = 0;
    while k < parts.len() {
        let mut e = 1;
        while k + e < parts.len() && parts[k + e] == parts[k] {
            e += 1;
        }
        if e == 1 {
            items.push(parts[k].to_string());
        } else {
            items.push(format!("{}^{}", parts[k], e));
        }
        k += e;
    }
    format!("({})", items.join(","))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_parts(&self.parts))
    }
}

/// A crossingless matching of `{1..len}` into cups and rays. Read upside
/// down it is a cap diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CupDiagram {
    /// 0-based partner of each vertex, `None` for a ray.
    partner: Vec<Option<usize>>,
}

impl CupDiagram {
    /// Builds a diagram from 1-based cups; every other vertex becomes a ray.
    pub fn from_cups(len: usize, cups: &[(usize, usize)]) -> Result<CupDiagram> {
        let mut partner = vec![None; len];
        for &(i, j) in cups {
            if i == 0 || i >= j || j > len || partner[i - 1].is_some() || partner[j - 1].is_some() {
                return Err(ArcError::Shape(format!("invalid cup ({i},{j}) on {len} vertices")));
            }
            partner[i - 1] = Some(j - 1);
            partner[j - 1] = Some(i - 1);
        }
        let d = CupDiagram { partner };
        for (a, b) in d.cups() {
            for (c, e) in d.cups() {
                if a < c && c < b && b < e {
                    return Err(ArcError::Shape(format!("cups ({a},{b}) and ({c},{e}) cross")));
                }
            }
        }
        for r in d.rays() {
            if d.cups().iter().any(|&(a, b)| a < r && r < b) {
                return Err(ArcError::Shape(format!("ray {r} lies under a cup")));
            }
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// 0-based partner of a 0-based vertex.
    pub fn partner(&self, k: usize) -> Option<usize> {
        self.partner[k]
    }

    /// Cups as 1-based `(left, right)` pairs ordered by left endpoint.
    pub fn cups(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.filter(|&q| q > k).map(|q| (k + 1, q + 1)))
            .collect()
    }

    /// Ray positions, 1-based.
    pub fn rays(&self) -> Vec<usize> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(k, _)| k + 1)
            .collect()
    }

    /// Each cup joins one ∨ and one ∧, and no ∨-ray lies left of an ∧-ray.
    pub fn is_oriented(&self, w: &Weight) -> bool {
        if w.len() != self.len() {
            return false;
        }
        let mut seen_down_ray = false;
        for k in 0..self.len() {
            match self.partner[k] {
                Some(q) => {
                    if w.get(k) == w.get(q) {
                        return false;
                    }
                }
                None => match w.get(k) {
                    Symbol::Down => seen_down_ray = true,
                    Symbol::Up if seen_down_ray => return false,
                    Symbol::Up => {}
                },
            }
        }
        true
    }

    /// Number of clockwise cups: those whose left endpoint is ∧.
    ///
    /// Read as a cap diagram the same count is the number of clockwise caps,
    /// since reflecting a cup to a cap also reverses its sense of rotation
    /// while the left endpoint stays the left endpoint. Hence
    /// `deg(μ̲λ) = deg(λμ̄)`.
    pub fn degree(&self, w: &Weight) -> Result<usize> {
        if !self.is_oriented(w) {
            return Err(ArcError::NotOriented(format!("{} under {}", self.render_compact(), w)));
        }
        Ok(self.degree_unchecked(w))
    }

    pub(crate) fn degree_unchecked(&self, w: &Weight) -> usize {
        self.cups()
            .iter()
            .filter(|&&(l, _)| w.get(l - 1) == Symbol::Up)
            .count()
    }

    fn render_compact(&self) -> String {
        let cups: Vec<String> = self.cups().iter().map(|(a, b)| format!("({a},{b})")).collect();
        format!("cups {{{}}} rays {:?}", cups.join(","), self.rays())
    }

    /// ASCII picture: the weight line on top, one row per nesting level
    /// below it, `|` for rays.
    pub fn render_ascii(&self, w: Option<&Weight>) -> String {
        let len = self.len();
        let width = if len == 0 { 0 } else { 2 * len - 1 };
        let mut depth = vec![0usize; len];
        let mut cups = self.cups();
        cups.sort_by_key(|&(a, b)| b - a);
        for &(a, b) in &cups {
            let inner = cups.iter().filter(|&&(c, e)| a < c && e < b).map(|&(c, _)| depth[c - 1]).max();
            depth[a - 1] = inner.map_or(1, |d| d + 1);
        }
        let levels = depth.iter().copied().max().unwrap_or(0).max(1);
        let mut rows = vec![vec![' '; width]; levels];
        for k in 0..len {
            if self.partner[k].is_none() {
                for row in rows.iter_mut() {
                    row[2 * k] = '|';
                }
            }
        }
        for &(a, b) in &cups {
            let d = depth[a - 1];
            let (x0, x1) = (2 * (a - 1), 2 * (b - 1));
            for row in rows.iter_mut().take(d - 1) {
                row[x0] = '|';
                row[x1] = '|';
            }
            let row = &mut rows[d - 1];
            row[x0] = '\\';
            row[x1] = '/';
            for c in row.iter_mut().take(x1).skip(x0 + 1) {
                *c = '_';
            }
        }
        let mut out = String::new();
        if let Some(w) = w {
            let top: Vec<String> = w.symbols().iter().map(|s| s.as_char().to_string()).collect();
            out.push_str(&top.join(" "));
            out.push('\n');
        }
        for row in rows {
            out.push_str(row.iter().collect::<String>().trim_end());
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct CupDiagramJson {
    cups: Vec<[usize; 2]>,
    rays: Vec<usize>,
}

impl Serialize for CupDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CupDiagramJson {
            cups: self.cups().into_iter().map(|(a, b)| [a, b]).collect(),
            rays: self.rays(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CupDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<CupDiagram, D::Error> {
        let j = CupDiagramJson::deserialize(d)?;
        let len = j.cups.len() * 2 + j.rays.len();
        let cups: Vec<(usize, usize)> = j.cups.iter().map(|c| (c[0], c[1])).collect();
        CupDiagram::from_cups(len, &cups).map_err(serde::de::Error::custom)
    }
}

/// `λ̲μ` oriented, i.e. `cup_diagram(lam)` oriented by `mu`.
pub fn is_oriented(cup_of: &Weight, w: &Weight) -> bool {
    cup_of.cup_diagram().is_oriented(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    #[test]
    fn enumeration_small_boxes() {
        let e = enumerate_weights(1, 1);
        assert_eq!(e, vec![w("v^"), w("^v")]);
        assert_eq!(enumerate_weights(2, 2).len(), 6);
        assert_eq!(enumerate_weights(5, 5).len(), 252);
        assert_eq!(enumerate_weights(0, 3), vec![w("vvv")]);
        assert_eq!(enumerate_weights(0, 0), vec![Weight::empty()]);
        let e = enumerate_weights(3, 3);
        assert!(e.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn partition_round_trip_small() {
        let p = w("v^v^^vv^^v").to_partition();
        assert_eq!(p.parts(), &[5, 4, 2, 2]);
        assert_eq!(p.to_string(), "(5,4,2^2)");
        assert_eq!(Weight::maximal(3, 2).to_partition().parts(), &[] as &[usize]);
        assert_eq!(Weight::minimal(3, 2).to_partition().parts(), &[3, 3]);
        assert!(Partition::parse("(4,1)", 3, 3).is_err());
        assert!(Partition::parse("1,1,1,1", 3, 3).is_err());
    }

    #[test]
    fn transpose_is_involution() {
        let p = Partition::parse("5^3,3,1^2", 5, 6).unwrap();
        let t = p.transpose();
        assert_eq!(t.parts(), &[6, 4, 4, 3, 3]);
        assert_eq!(t.transpose(), p);
    }

    #[test]
    fn pair_surgery_errors() {
        assert!(w("vv^").remove_pair(1).is_err());
        assert!(w("vv^").remove_pair(3).is_err());
        assert_eq!(w("vv^").remove_pair(2).unwrap(), w("v"));
        assert!(w("v").insert_pair(3, PairSign::Plus).is_err());
        assert_eq!(Weight::empty().insert_pair(1, PairSign::Plus).unwrap(), w("v^"));
    }

    #[test]
    fn ascii_render_nests() {
        let d = w("vv^^").cup_diagram();
        let s = d.render_ascii(None);
        assert_eq!(s, "| \\_/ |\n\\_____/\n");
    }

    #[test]
    fn from_cups_validation() {
        assert!(CupDiagram::from_cups(4, &[(1, 3), (2, 4)]).is_err());
        assert!(CupDiagram::from_cups(3, &[(1, 3)]).is_err());
        assert!(CupDiagram::from_cups(4, &[(1, 4), (2, 3)]).is_ok());
    }
}
