use std::collections::{HashSet, VecDeque};

use arcalg::combinatorics::{enumerate_weights, weight_count, CupDiagram, PairSign, Partition, Weight};
use arcalg::klpoly::little_claim_violations;
use proptest::prelude::*;

fn w(s: &str) -> Weight {
    Weight::parse(s).unwrap()
}

fn boxes(max_total: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 0..=max_total {
        for n in 0..=max_total - m {
            out.push((m, n));
        }
    }
    out
}

/// Upward closure of `a` under the moves `∨∧ ↦ ∧∨`.
fn swap_closure(a: &Weight) -> HashSet<Weight> {
    let mut seen = HashSet::from([*a]);
    let mut queue = VecDeque::from([*a]);
    while let Some(x) = queue.pop_front() {
        for i in 1..x.len() {
            if x.in_down_up(i) {
                let y = x.swapped(i - 1, i);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

/// Cups by repeated search for neighbouring `∨∧` pairs.
fn greedy_cups(x: &Weight) -> Vec<(usize, usize)> {
    let mut free: Vec<usize> = (0..x.len()).collect();
    let mut cups = Vec::new();
    'outer: loop {
        for k in 0..free.len().saturating_sub(1) {
            let (a, b) = (free[k], free[k + 1]);
            if x.get(a) == arcalg::Symbol::Down && x.get(b) == arcalg::Symbol::Up {
                cups.push((a + 1, b + 1));
                free.drain(k..=k + 1);
                continue 'outer;
            }
        }
        break;
    }
    cups.sort();
    cups
}

#[test]
fn weight_partition_example() {
    let lam = w("v^v^^vv^^v");
    assert_eq!(lam.shape(), (5, 5));
    let p = lam.to_partition();
    assert_eq!(p, Partition::parse("5,4,2^2", 5, 5).unwrap());
    assert_eq!(p.to_weight(), lam);
    assert!(Weight::maximal(5, 5).to_partition().parts().is_empty());
    assert_eq!(Weight::minimal(5, 5).to_partition().parts(), &[5; 5]);
}

#[test]
fn cup_diagram_example() {
    let d = w("v^v^^vv^^v").cup_diagram();
    assert_eq!(d.cups(), vec![(1, 2), (3, 4), (6, 9), (7, 8)]);
    assert_eq!(d.rays(), vec![5, 10]);
    let json = serde_json::to_string(&d).unwrap();
    assert_eq!(json, r#"{"cups":[[1,2],[3,4],[6,9],[7,8]],"rays":[5,10]}"#);
    let back: CupDiagram = serde_json::from_str(&json).unwrap();
    assert_eq!(back, d);
}

#[test]
fn degree_example() {
    let mu = Partition::parse("5,4,2,2", 5, 5).unwrap().to_weight();
    let lam = Partition::parse("4,3,1", 5, 5).unwrap().to_weight();
    assert!(lam.leq(&mu).is_ok());
    assert!(mu.leq(&lam).unwrap());
    let d = mu.cup_diagram();
    assert!(d.is_oriented(&lam));
    assert_eq!(d.degree(&lam).unwrap(), 3);
}

#[test]
fn plus_minus_example() {
    let lp = w("^^v^vv^");
    assert_eq!(lp.shape(), (4, 3));
    let plus = lp.insert_pair(4, PairSign::Plus).unwrap();
    let minus = lp.insert_pair(4, PairSign::Minus).unwrap();
    assert_eq!(plus, w("^^vv^^vv^"));
    assert_eq!(minus, w("^^v^v^vv^"));
    assert!(plus.in_down_up(4) && minus.in_up_down(4));
    assert_eq!(plus.remove_pair(4).unwrap(), lp);
    assert_eq!(minus.remove_pair(4).unwrap(), lp);
}

#[test]
fn circ_example() {
    let lam = Partition::parse("5^3,3,1^2", 5, 6).unwrap().to_weight();
    let expect = Partition::parse("5^3,4,3^2", 5, 6).unwrap().to_weight();
    assert_eq!(lam.circ(), expect);
    assert!(expect.is_regular());
    assert_eq!(w("^v").circ(), w("v^"));
}

#[test]
fn small_examples() {
    assert_eq!(w("v^").cup_diagram().cups(), vec![(1, 2)]);
    assert_eq!(w("^v").cup_diagram().rays(), vec![1, 2]);
    assert!(w("v^").cup_diagram().is_oriented(&w("^v")));
    assert!(!w("^v").cup_diagram().is_oriented(&w("v^")));
    assert_eq!(w("v^").cup_diagram().degree(&w("^v")).unwrap(), 1);
    assert!(w("^v").cup_diagram().degree(&w("v^")).is_err());
    assert!(w("v^v").is_regular() && w("vv^").is_regular() && !w("^vv").is_regular());
    assert!(w("vv^^").arrow_rel(&w("^v^v")));
    assert!(w("v^").arrow_rel(&w("^v")));
    assert!(!w("v^").arrow_rel(&w("v^")));
    assert!(w("v^").leq(&w("v^v")).is_err());
    assert_eq!(w("vv^").rotate(), w("v^^"));
}

#[test]
fn enumeration_counts_and_order() {
    for (m, n) in boxes(10) {
        let ws = enumerate_weights(m, n);
        assert_eq!(ws.len(), weight_count(m, n));
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
        assert!(ws.iter().all(|x| x.shape() == (m, n)));
    }
}

#[test]
fn partition_bijection_exhaustive() {
    for (m, n) in boxes(10) {
        let mut seen = HashSet::new();
        for x in enumerate_weights(m, n) {
            let p = x.to_partition();
            assert_eq!(p.to_weight(), x);
            assert!(seen.insert(p.parts().to_vec()));
        }
    }
}

#[test]
fn order_agrees_with_containment_and_swaps() {
    for (m, n) in boxes(8) {
        let ws = enumerate_weights(m, n);
        for a in &ws {
            let up = swap_closure(a);
            for b in &ws {
                let contain = a.to_partition().contains(&b.to_partition());
                assert_eq!(a.leq(b).unwrap(), contain, "{a} {b}");
                assert_eq!(up.contains(b), contain, "{a} {b}");
            }
        }
    }
}

#[test]
fn cup_diagram_matches_greedy_search() {
    for (m, n) in boxes(9) {
        for x in enumerate_weights(m, n) {
            assert_eq!(x.cup_diagram().cups(), greedy_cups(&x), "{x}");
        }
    }
}

#[test]
fn regularity_three_ways() {
    for (m, n) in boxes(8) {
        let mp = m.min(n);
        let stair = Partition::new((1..=mp).rev().collect(), m, n).unwrap();
        for x in enumerate_weights(m, n) {
            let by_cups = x.defect() == mp;
            let by_stair = x.to_partition().contains(&stair);
            assert_eq!(by_cups, by_stair, "{x}");
            assert_eq!(x.is_regular(), by_cups);
            if m <= n {
                let by_ell = (1..=m + n).all(|t| x.ell(t) >= 0);
                assert_eq!(by_ell, by_cups, "{x}");
            }
        }
    }
}

#[test]
fn circ_properties() {
    for (m, n) in boxes(8) {
        for x in enumerate_weights(m, n) {
            let c = x.circ();
            assert!(c.is_regular(), "{x}");
            assert!(c.cup_diagram().is_oriented(&x), "{x}");
            // Any ∧ left of a ∨ yields a clockwise cup, so only the
            // minimal weight is fixed.
            assert_eq!(c == x, x == Weight::minimal(m, n), "{x}");
        }
    }
}

#[test]
fn own_cup_diagram_has_degree_zero() {
    for (m, n) in boxes(9) {
        for x in enumerate_weights(m, n) {
            assert_eq!(x.cup_diagram().degree(&x).unwrap(), 0);
        }
    }
}

#[test]
fn little_claim_exhaustive() {
    for (m, n) in boxes(8) {
        if m <= n {
            assert!(little_claim_violations(m, n, 1000).unwrap().is_empty(), "({m},{n})");
        }
    }
}

fn any_weight() -> impl Strategy<Value = Weight> {
    proptest::collection::vec(any::<bool>(), 0..14).prop_map(|bits| {
        let s: String = bits.iter().map(|&b| if b { '^' } else { 'v' }).collect();
        Weight::parse(&s).unwrap()
    })
}

proptest! {
    #[test]
    fn pair_round_trip(x in any_weight(), i in 1usize..14) {
        if i < x.len() && x.get(i - 1) != x.get(i) {
            let sign = if x.in_down_up(i) { PairSign::Plus } else { PairSign::Minus };
            prop_assert_eq!(x.remove_pair(i).unwrap().insert_pair(i, sign).unwrap(), x);
        }
    }

    #[test]
    fn rotate_is_involution(x in any_weight()) {
        prop_assert_eq!(x.rotate().rotate(), x);
        prop_assert_eq!(x.rotate().shape(), (x.n(), x.m()));
    }

    #[test]
    fn text_round_trip(x in any_weight()) {
        prop_assert_eq!(Weight::parse(&x.to_string()).unwrap(), x);
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Weight>(&json).unwrap(), x);
    }
}
