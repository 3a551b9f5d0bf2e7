//! Stacked diagrams and the surgery procedure.
//!
//! A [`Picture`] is a vertical stack of labelled horizontal lines. Below the
//! bottom line sits the cup diagram of `bottom_weight`, above the top line
//! the cap diagram of `top_weight`, and between consecutive lines a
//! [`Layer`] of arcs. Layers built by gluing a cap diagram to its mirror
//! cup diagram are *mirror* layers; [`Picture::reduce`] performs surgery on
//! every mirror pair until each mirror layer consists of verticals, then
//! fuses the two lines it separates.
//!
//! Labels encode the flow of the orientation: `∧` means the curve passes
//! the vertex going up, `∨` going down. A circle is clockwise when it
//! passes its leftmost point going up.

use std::collections::HashMap;

use crate::combinatorics::{Symbol, Weight};
use crate::error::{ArcError, Result};

/// Where an arc leaving a vertex into a layer ends up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link {
    /// Cap or cup back to another vertex of the same line.
    Same(usize),
    /// Segment to a vertex of the line on the other side of the layer.
    Cross(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    /// Arc leaving each vertex of the lower line upwards.
    pub below: Vec<Link>,
    /// Arc leaving each vertex of the upper line downwards.
    pub above: Vec<Link>,
    pub mirror: bool,
}

impl Layer {
    /// A cap diagram glued to its reflection, the middle of a product.
    pub fn mirror(w: &Weight) -> Layer {
        let d = w.cup_diagram();
        let links: Vec<Link> = (0..w.len())
            .map(|k| match d.partner(k) {
                Some(p) => Link::Same(p),
                None => Link::Cross(k),
            })
            .collect();
        Layer {
            below: links.clone(),
            above: links,
            mirror: true,
        }
    }

    /// The matching `t_i`: a cap on positions `i, i+1` (1-based) of the
    /// longer lower line, verticals elsewhere.
    pub fn t(i: usize, lower_len: usize) -> Layer {
        assert!(i >= 1 && i < lower_len);
        let mut below = Vec::with_capacity(lower_len);
        let mut above = Vec::with_capacity(lower_len - 2);
        for k in 0..lower_len {
            if k == i - 1 {
                below.push(Link::Same(i));
            } else if k == i {
                below.push(Link::Same(i - 1));
            } else {
                let u = if k < i - 1 { k } else { k - 2 };
                below.push(Link::Cross(u));
                above.push(Link::Cross(k));
            }
        }
        Layer {
            below,
            above,
            mirror: false,
        }
    }

    /// The matching `t_i*`: the reflection of `t_i`, a cup on positions
    /// `i, i+1` of the longer upper line.
    pub fn t_star(i: usize, upper_len: usize) -> Layer {
        let t = Layer::t(i, upper_len);
        Layer {
            below: t.above,
            above: t.below,
            mirror: false,
        }
    }
}

/// Evenly spaced x coordinates.
pub fn default_xs(len: usize) -> Vec<i64> {
    (0..len as i64).map(|k| 4 * k).collect()
}

/// x coordinates for the shorter line of a `t_i` layer whose longer line
/// has coordinates `long`: the gap sits over positions `i, i+1`.
pub fn gapped_xs(long: &[i64], i: usize) -> Vec<i64> {
    long.iter()
        .enumerate()
        .filter(|&(k, _)| k != i - 1 && k != i)
        .map(|(_, &x)| x)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Picture {
    pub bottom_weight: Weight,
    pub top_weight: Weight,
    pub lines: Vec<Vec<Symbol>>,
    pub xs: Vec<Vec<i64>>,
    pub layers: Vec<Layer>,
    bottom_cups: Vec<Option<usize>>,
    top_caps: Vec<Option<usize>>,
}

fn partners(w: &Weight) -> Vec<Option<usize>> {
    let d = w.cup_diagram();
    (0..w.len()).map(|k| d.partner(k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct V {
    line: usize,
    k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Next {
    /// Continue at a vertex, which is passed going up (`true`) or down.
    At(V, bool),
    Ray,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RaySide {
    Bottom,
    Top,
}

#[derive(Clone, Debug)]
struct Component {
    /// Vertices in traversal order with the direction of traversal there.
    path: Vec<(V, bool)>,
    /// Ray ends, `None` for a circle.
    ends: Option<[RaySide; 2]>,
}

impl Component {
    fn contains(&self, v: V) -> bool {
        self.path.iter().any(|&(u, _)| u == v)
    }

    fn is_circle(&self) -> bool {
        self.ends.is_none()
    }

    fn is_propagating(&self) -> bool {
        matches!(self.ends, Some([a, b]) if a != b)
    }
}

/// Orientation of a component relative to its traversal.
type Forward = bool;

impl Picture {
    /// The diagram `λ̲μν̄` of the algebra.
    pub fn basis_element(bottom: &Weight, middle: &Weight, top: &Weight) -> Picture {
        Picture {
            bottom_weight: *bottom,
            top_weight: *top,
            lines: vec![middle.symbols()],
            xs: vec![default_xs(middle.len())],
            layers: Vec::new(),
            bottom_cups: partners(bottom),
            top_caps: partners(top),
        }
    }

    /// A general stack; `xs` defaults to even spacing on every line.
    pub fn new(
        bottom_weight: Weight,
        top_weight: Weight,
        lines: Vec<Vec<Symbol>>,
        xs: Option<Vec<Vec<i64>>>,
        layers: Vec<Layer>,
    ) -> Result<Picture> {
        if lines.is_empty() || layers.len() + 1 != lines.len() {
            return Err(ArcError::Shape("a picture needs one more line than layers".into()));
        }
        let xs = xs.unwrap_or_else(|| lines.iter().map(|l| default_xs(l.len())).collect());
        let fits = bottom_weight.len() == lines[0].len()
            && top_weight.len() == lines[lines.len() - 1].len()
            && xs.iter().zip(&lines).all(|(x, l)| x.len() == l.len())
            && layers.iter().enumerate().all(|(j, l)| {
                l.below.len() == lines[j].len() && l.above.len() == lines[j + 1].len()
            });
        if !fits {
            return Err(ArcError::Shape("line lengths do not match the layers".into()));
        }
        Ok(Picture {
            bottom_cups: partners(&bottom_weight),
            top_caps: partners(&top_weight),
            bottom_weight,
            top_weight,
            lines,
            xs,
            layers,
        })
    }

    /// Places `upper` on top of `self`, gluing the cap diagram of `self`
    /// to the cup diagram of `upper`. The two weights must agree.
    pub fn stack(&self, upper: &Picture) -> Result<Picture> {
        if self.top_weight != upper.bottom_weight {
            return Err(ArcError::Precondition(format!(
                "cannot stack: top {} differs from bottom {}",
                self.top_weight, upper.bottom_weight
            )));
        }
        let mut xs = self.xs.clone();
        let mut upper_xs = upper.xs.clone();
        let seam = xs.last().expect("at least one line").clone();
        if upper_xs.len() == 1 {
            upper_xs[0] = seam;
        } else if self.xs.len() == 1 {
            xs[0] = upper_xs[0].clone();
        } else if upper_xs[0] != seam {
            return Err(ArcError::Precondition("coordinates do not match at the seam".into()));
        }
        xs.extend(upper_xs);
        let mut layers = self.layers.clone();
        layers.push(Layer::mirror(&self.top_weight));
        layers.extend(upper.layers.iter().cloned());
        let mut lines = self.lines.clone();
        lines.extend(upper.lines.iter().cloned());
        Ok(Picture {
            bottom_weight: self.bottom_weight,
            top_weight: upper.top_weight,
            lines,
            xs,
            layers,
            bottom_cups: self.bottom_cups.clone(),
            top_caps: upper.top_caps.clone(),
        })
    }

    fn last_line(&self) -> usize {
        self.lines.len() - 1
    }

    fn up(&self, v: V) -> Next {
        if v.line == self.last_line() {
            return match self.top_caps[v.k] {
                Some(p) => Next::At(V { line: v.line, k: p }, false),
                None => Next::Ray,
            };
        }
        match self.layers[v.line].below[v.k] {
            Link::Same(p) => Next::At(V { line: v.line, k: p }, false),
            Link::Cross(u) => Next::At(V { line: v.line + 1, k: u }, true),
        }
    }

    fn down(&self, v: V) -> Next {
        if v.line == 0 {
            return match self.bottom_cups[v.k] {
                Some(p) => Next::At(V { line: 0, k: p }, true),
                None => Next::Ray,
            };
        }
        match self.layers[v.line - 1].above[v.k] {
            Link::Same(p) => Next::At(V { line: v.line, k: p }, true),
            Link::Cross(u) => Next::At(V { line: v.line - 1, k: u }, false),
        }
    }

    /// Follows the curve through `start`, first in the upward direction.
    fn component(&self, start: V) -> Component {
        let step = |v: V, going_up: bool| if going_up { self.up(v) } else { self.down(v) };
        let mut path = vec![(start, true)];
        let mut cur = (start, true);
        loop {
            match step(cur.0, cur.1) {
                Next::At(v, dir) if v == start => {
                    debug_assert!(dir);
                    return Component { path, ends: None };
                }
                Next::At(v, dir) => {
                    path.push((v, dir));
                    cur = (v, dir);
                }
                Next::Ray => break,
            }
        }
        // Hit a ray: walk the whole strand back from that end.
        let side = |up: bool| if up { RaySide::Top } else { RaySide::Bottom };
        let first = side(cur.1);
        let end = cur.0;
        let mut path = vec![(end, !cur.1)];
        let mut cur = (end, !cur.1);
        loop {
            match step(cur.0, cur.1) {
                Next::At(v, dir) => {
                    path.push((v, dir));
                    cur = (v, dir);
                }
                Next::Ray => break,
            }
        }
        let mut ends = [first, side(cur.1)];
        if ends == [RaySide::Bottom, RaySide::Top] {
            path.reverse();
            for p in &mut path {
                p.1 = !p.1;
            }
            ends = [RaySide::Top, RaySide::Bottom];
        }
        Component {
            path,
            ends: Some(ends),
        }
    }

    fn label(&self, v: V) -> Symbol {
        self.lines[v.line][v.k]
    }

    fn set_label(&mut self, v: V, s: Symbol) {
        self.lines[v.line][v.k] = s;
    }

    /// Orientation of a component read off the current labels.
    fn forward_of(&self, c: &Component) -> Result<Forward> {
        let (v0, up0) = c.path[0];
        let fwd = (self.label(v0) == Symbol::Up) == up0;
        for &(v, up) in &c.path {
            if ((self.label(v) == Symbol::Up) == up) != fwd {
                return Err(ArcError::Surgery(format!(
                    "inconsistent labels along a component of {:?}",
                    self.lines
                )));
            }
        }
        Ok(fwd)
    }

    fn leftmost(&self, c: &Component) -> (V, bool) {
        *c.path
            .iter()
            .min_by_key(|(v, _)| (self.xs[v.line][v.k], v.line))
            .expect("nonempty component")
    }

    fn is_clockwise(&self, c: &Component) -> Result<bool> {
        let fwd = self.forward_of(c)?;
        let (_, up) = self.leftmost(c);
        Ok(up == fwd)
    }

    fn orient(&mut self, c: &Component, fwd: Forward) {
        for &(v, up) in &c.path {
            self.set_label(v, if up == fwd { Symbol::Up } else { Symbol::Down });
        }
    }

    fn orient_circle(&mut self, c: &Component, clockwise: bool) {
        let (_, up) = self.leftmost(c);
        self.orient(c, up == clockwise);
    }

    /// Orientation a strand must have to keep the old label at `end`.
    fn forward_from_end(&self, c: &Component, end_label: Symbol, end: V) -> Forward {
        let up = c.path.iter().find(|(v, _)| *v == end).expect("end on path").1;
        (end_label == Symbol::Up) == up
    }

    fn end_vertices(c: &Component) -> [V; 2] {
        [c.path[0].0, c.path[c.path.len() - 1].0]
    }

    /// Flow direction of a propagating strand: true when it flows upward.
    fn flows_up(&self, c: &Component) -> Result<bool> {
        let fwd = self.forward_of(c)?;
        // path[0] is the top end, traversed downward.
        Ok(!fwd)
    }

    /// One surgery on the mirror pair `(a, b)` of layer `j`. Every output
    /// picture carries coefficient one.
    fn surgery(&self, j: usize, a: usize, b: usize) -> Result<Vec<Picture>> {
        let cap = V { line: j, k: a };
        let cup = V { line: j + 1, k: a };
        let old1 = self.component(cap);
        let same = old1.contains(cup);
        let old2 = if same { None } else { Some(self.component(cup)) };

        let mut next = self.clone();
        {
            let layer = &mut next.layers[j];
            for p in [a, b] {
                layer.below[p] = Link::Cross(p);
                layer.above[p] = Link::Cross(p);
            }
        }
        let new1 = next.component(cap);
        let new2 = if new1.contains(V { line: j, k: b }) {
            None
        } else {
            Some(next.component(V { line: j, k: b }))
        };

        match (old2, new2) {
            (None, Some(n2)) => self.split(next, &old1, new1, n2),
            (Some(o2), None) => self.merge(next, &old1, &o2, new1),
            (Some(o2), Some(n2)) => self.strand_pair(next, &old1, &o2, new1, n2),
            (None, None) => Err(ArcError::Surgery(
                "surgery on a single component left it connected".into(),
            )),
        }
    }

    fn split(&self, mut next: Picture, old: &Component, n1: Component, n2: Component) -> Result<Vec<Picture>> {
        if old.is_circle() {
            if self.is_clockwise(old)? {
                // x ↦ x ⊗ x
                next.orient_circle(&n1, true);
                next.orient_circle(&n2, true);
                return Ok(vec![next]);
            }
            // 1 ↦ 1 ⊗ x + x ⊗ 1
            let mut other = next.clone();
            next.orient_circle(&n1, false);
            next.orient_circle(&n2, true);
            other.orient_circle(&n1, true);
            other.orient_circle(&n2, false);
            return Ok(vec![next, other]);
        }
        // y ↦ x ⊗ y: the strand keeps its ends and direction.
        let (strand, circle) = if n1.is_circle() { (n2, n1) } else { (n1, n2) };
        let end = Self::end_vertices(&strand)[0];
        let fwd = next.forward_from_end(&strand, self.label(end), end);
        next.orient(&strand, fwd);
        next.orient_circle(&circle, true);
        Ok(vec![next])
    }

    fn merge(&self, mut next: Picture, o1: &Component, o2: &Component, n: Component) -> Result<Vec<Picture>> {
        match (o1.is_circle(), o2.is_circle()) {
            (true, true) => {
                let x1 = self.is_clockwise(o1)?;
                let x2 = self.is_clockwise(o2)?;
                if x1 && x2 {
                    return Ok(Vec::new());
                }
                next.orient_circle(&n, x1 || x2);
                Ok(vec![next])
            }
            (false, false) => Err(ArcError::Surgery("two strands merged into one".into())),
            _ => {
                let circle = if o1.is_circle() { o1 } else { o2 };
                if self.is_clockwise(circle)? {
                    return Ok(Vec::new());
                }
                // 1 ⊗ y ↦ y
                let end = Self::end_vertices(&n)[0];
                let fwd = next.forward_from_end(&n, self.label(end), end);
                next.orient(&n, fwd);
                Ok(vec![next])
            }
        }
    }

    fn strand_pair(
        &self,
        mut next: Picture,
        o1: &Component,
        o2: &Component,
        n1: Component,
        n2: Component,
    ) -> Result<Vec<Picture>> {
        if o1.is_circle() || o2.is_circle() || n1.is_circle() || n2.is_circle() {
            return Err(ArcError::Surgery("unexpected circle in a strand exchange".into()));
        }
        // y ⊗ y survives only for two propagating strands of opposite flow.
        if !(o1.is_propagating() && o2.is_propagating()) {
            return Ok(Vec::new());
        }
        if self.flows_up(o1)? == self.flows_up(o2)? {
            return Ok(Vec::new());
        }
        for n in [&n1, &n2] {
            let [e1, e2] = Self::end_vertices(n);
            let f1 = next.forward_from_end(n, self.label(e1), e1);
            let f2 = next.forward_from_end(n, self.label(e2), e2);
            if f1 != f2 {
                return Ok(Vec::new());
            }
            next.orient(n, f1);
        }
        Ok(vec![next])
    }

    /// Remaining mirror pairs of layer `j`, by left endpoint.
    fn mirror_pairs(&self, j: usize) -> Vec<(usize, usize)> {
        let layer = &self.layers[j];
        (0..layer.below.len())
            .filter_map(|a| match (layer.below[a], layer.above.get(a)) {
                (Link::Same(b), Some(&Link::Same(c))) if b > a && b == c => Some((a, b)),
                _ => None,
            })
            .collect()
    }

    /// Fuses lines `j` and `j+1` across a layer of straight verticals.
    fn fuse(&mut self, j: usize) -> Result<()> {
        let layer = &self.layers[j];
        let straight = layer.below.len() == layer.above.len()
            && layer.below.iter().enumerate().all(|(k, l)| *l == Link::Cross(k))
            && layer.above.iter().enumerate().all(|(k, l)| *l == Link::Cross(k));
        if !straight {
            return Err(ArcError::Surgery(format!("layer {j} is not all verticals")));
        }
        if self.lines[j] != self.lines[j + 1] {
            return Err(ArcError::Surgery(format!(
                "labels disagree across fused layer {j}: {:?} vs {:?}",
                self.lines[j],
                self.lines[j + 1]
            )));
        }
        self.lines.remove(j + 1);
        self.xs.remove(j + 1);
        self.layers.remove(j);
        Ok(())
    }

    /// Ray condition at the outer boundaries: ∧-rays left of ∨-rays.
    fn check_outer_rays(&self) -> Result<()> {
        let bottom = self.bottom_weight.cup_diagram();
        let top = self.top_weight.cup_diagram();
        let check = |line: &[Symbol], rays: Vec<usize>, side: &str| {
            let mut seen_down = false;
            for r in rays {
                match line[r - 1] {
                    Symbol::Down => seen_down = true,
                    Symbol::Up if seen_down => {
                        return Err(ArcError::Surgery(format!(
                            "surgery produced {side} rays reading ∨…∧ on {:?}",
                            line
                        )))
                    }
                    Symbol::Up => {}
                }
            }
            Ok(())
        };
        check(&self.lines[0], bottom.rays(), "bottom")?;
        check(&self.lines[self.last_line()], top.rays(), "top")
    }

    /// Runs every surgery and fuses every mirror layer. Terms with equal
    /// labels are collected; zero coefficients never appear.
    pub fn reduce(&self, schedule: Schedule) -> Result<Vec<(Picture, i64)>> {
        let mut terms: Vec<(Picture, i64)> = vec![(self.clone(), 1)];
        while let Some(j) = terms[0].0.layers.iter().position(|l| l.mirror) {
            let mut acc: HashMap<Picture, i64> = HashMap::new();
            let mut order: Vec<Picture> = Vec::new();
            for (pic, c) in terms {
                let mut states = vec![pic];
                loop {
                    let pairs = states.first().map(|p| p.mirror_pairs(j)).unwrap_or_default();
                    if pairs.is_empty() {
                        break;
                    }
                    let (a, b) = match schedule {
                        Schedule::LeftmostFirst => pairs[0],
                        Schedule::RightmostFirst => pairs[pairs.len() - 1],
                    };
                    let mut out = Vec::new();
                    for s in &states {
                        out.extend(s.surgery(j, a, b)?);
                    }
                    states = out;
                }
                for mut s in states {
                    s.fuse(j)?;
                    if !acc.contains_key(&s) {
                        order.push(s.clone());
                    }
                    *acc.entry(s).or_insert(0) += c;
                }
            }
            terms = order
                .into_iter()
                .filter_map(|p| {
                    let c = acc[&p];
                    (c != 0).then_some((p, c))
                })
                .collect();
            if terms.is_empty() {
                return Ok(Vec::new());
            }
        }
        for (p, _) in &terms {
            p.check_outer_rays()?;
        }
        Ok(terms)
    }
}

/// Order in which the mirror pairs of a layer are operated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    #[default]
    LeftmostFirst,
    RightmostFirst,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    fn product(a: [&str; 3], b: [&str; 3], sched: Schedule) -> Vec<(String, i64)> {
        let pa = Picture::basis_element(&w(a[0]), &w(a[1]), &w(a[2]));
        let pb = Picture::basis_element(&w(b[0]), &w(b[1]), &w(b[2]));
        let mut out: Vec<(String, i64)> = pa
            .stack(&pb)
            .unwrap()
            .reduce(sched)
            .unwrap()
            .into_iter()
            .map(|(p, c)| (p.lines[0].iter().map(|s| s.as_char()).collect(), c))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn product_with_two_middles() {
        let out = product(["v^v^", "v^v^", "vv^^"], ["vv^^", "v^v^", "v^v^"], Schedule::LeftmostFirst);
        assert_eq!(out, vec![("^vv^".to_string(), 1), ("v^^v".to_string(), 1)]);
    }

    #[test]
    fn product_is_schedule_independent() {
        for sched in [Schedule::LeftmostFirst, Schedule::RightmostFirst] {
            let out = product(["vv^^", "v^v^", "v^v^"], ["v^v^", "v^v^", "vv^^"], sched);
            assert_eq!(out, vec![("^v^v".to_string(), 1), ("v^v^".to_string(), 1)]);
        }
    }

    #[test]
    fn idempotent_squares() {
        let out = product(["vv^^", "vv^^", "vv^^"], ["vv^^", "vv^^", "vv^^"], Schedule::LeftmostFirst);
        assert_eq!(out, vec![("vv^^".to_string(), 1)]);
    }

    #[test]
    fn loop_squares_to_zero() {
        let out = product(["v^", "^v", "v^"], ["v^", "^v", "v^"], Schedule::LeftmostFirst);
        assert!(out.is_empty());
    }

    #[test]
    fn strand_rule_kills_degree_two_product() {
        let out = product(["^v", "^v", "v^"], ["v^", "^v", "^v"], Schedule::LeftmostFirst);
        assert!(out.is_empty());
    }

    #[test]
    fn mismatched_stack_rejected() {
        let pa = Picture::basis_element(&w("v^"), &w("v^"), &w("v^"));
        let pb = Picture::basis_element(&w("^v"), &w("^v"), &w("^v"));
        assert!(pa.stack(&pb).is_err());
    }

    #[test]
    fn t_layers_have_expected_shape() {
        let t = Layer::t(2, 4);
        assert_eq!(t.below, vec![Link::Cross(0), Link::Same(2), Link::Same(1), Link::Cross(1)]);
        assert_eq!(t.above, vec![Link::Cross(0), Link::Cross(3)]);
        let s = Layer::t_star(2, 4);
        assert_eq!(s.below, t.above);
        assert_eq!(gapped_xs(&default_xs(4), 2), vec![0, 12]);
    }
}
