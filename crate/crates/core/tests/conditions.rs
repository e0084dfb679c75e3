mod common;

use common::{all_corpus, corpus, q, qs, random_domain_points};
use kkmfix::conditions::{
    b_value, check_b3_strong, check_b_subset, check_c1, check_c2, check_c3, check_onto, criterion, falsify_b,
    lsc_failures, sublevel, BKind, SearchStrategy, Status, Witness,
};
use kkmfix::exactnum::{dist, rat, QuadExt};
use kkmfix::mapping::{ClassSet, Interval, MappingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle for (b1)/(b2): the max over points of the per-point expression.
fn b_oracle(kind: BKind, spec: &MappingSpec, points: &[QuadExt], u: &QuadExt) -> QuadExt {
    points
        .iter()
        .map(|x| {
            let fx = spec.evaluate(x).unwrap();
            match kind {
                BKind::B1 => dist(&fx, u) - dist(x, u),
                _ => dist(&fx, u) - dist(&fx, x),
            }
        })
        .max()
        .unwrap()
}

#[test]
fn onto_examples() {
    assert_eq!(check_onto(&corpus(2)).status, Status::Proven);
    let v = check_onto(&corpus(3));
    assert_eq!(v.status, Status::Falsified);
    // 0 is missing too: its only rational preimage is overridden
    assert_eq!(v.witness, Some(Witness::Points(qs(&["0", "5"]))));
    assert_eq!(check_onto(&corpus(12)).witness, Some(Witness::Point(q("0"))));
}

#[test]
fn b_value_examples() {
    assert_eq!(b_value(BKind::B1, &corpus(4), &qs(&["0", "9"]), &q("8")).unwrap(), q("-1/5"));
    for x in qs(&["-3", "0", "7/2", "sqrt2"]) {
        assert_eq!(b_value(BKind::B1, &corpus(5), std::slice::from_ref(&x), &x).unwrap(), q("1"));
    }
    assert_eq!(b_value(BKind::B2, &corpus(8), &qs(&["2", "8"]), &q("5")).unwrap(), q("3"));
}

#[test]
fn subset_examples() {
    let v = check_b_subset(BKind::B3, &corpus(14), &qs(&["3", "7"])).unwrap();
    assert_eq!(v.status, Status::Falsified);
    assert_eq!(v.subset_witness().unwrap().u, q("5"));
    assert_eq!(v.violation, Some(q("2")));
    assert_eq!(check_b_subset(BKind::B1, &corpus(5), &qs(&["0", "1", "2"])).unwrap().status, Status::Proven);
    assert_eq!(check_b_subset(BKind::B1, &corpus(2), &qs(&["0", "4", "6"])).unwrap().status, Status::Proven);
}

#[test]
fn search_examples() {
    let s = SearchStrategy::default();
    let v = falsify_b(BKind::B1, &corpus(4), &s).unwrap();
    let w = v.subset_witness().unwrap();
    assert_eq!(w.points.len(), 2);
    assert_eq!(w.points[0], q("0"));
    assert!(w.points[1] > q("5") && w.points[1] < q("10"));
    assert_eq!(falsify_b(BKind::B3, &corpus(9), &s).unwrap().status, Status::NotFalsified);
    assert_eq!(falsify_b(BKind::B1, &corpus(2), &s).unwrap().status, Status::NotFalsified);
    let zero = SearchStrategy { budget: 0, ..s };
    let v = falsify_b(BKind::B1, &corpus(4), &zero).unwrap();
    assert_eq!(v.status, Status::NotFalsified);
    assert_eq!(v.stats.subsets_checked, 0);
}

#[test]
fn strong_b3_examples() {
    let half = qs(&["1/2", "1/2"]);
    let r = check_b3_strong(&corpus(9), &qs(&["4", "6"]), &half).unwrap();
    assert_eq!((r.lhs, r.rhs, r.holds), (q("0"), q("0"), true));
    let r = check_b3_strong(&corpus(14), &qs(&["3", "7"]), &half).unwrap();
    assert_eq!((r.lhs, r.rhs, r.holds), (q("2"), q("0"), false));
    let spec = corpus(13);
    let r = check_b3_strong(&spec, &[q("3")], &[q("1")]).unwrap();
    let res = spec.residual(&q("3")).unwrap();
    assert_eq!((r.lhs, r.rhs, r.holds), (res.clone(), res, true));
}

#[test]
fn c_set_examples() {
    let s = check_c1(&corpus(2), &q("6")).unwrap();
    assert_eq!((s.set, s.compact), (ClassSet::interval(Interval::closed(q("0"), q("7"))), true));
    let s = check_c1(&corpus(1), &q("7")).unwrap();
    assert_eq!(s.set, ClassSet::interval(Interval::closed(q("0"), q("15/2"))));
    let s = check_c2(&corpus(6), &q("0")).unwrap();
    assert_eq!((s.set, s.compact), (corpus(6).domain_set(), true));
    let s = check_c2(&corpus(12), &q("0")).unwrap();
    assert_eq!((s.set, s.compact), (ClassSet::point(q("0")), true));
    for x in qs(&["0", "-5/2", "sqrt2"]) {
        let s = check_c2(&corpus(5), &x).unwrap();
        let expected = ClassSet::intervals([Interval::at_most(&x - &q("2")), Interval::at_least(x.clone())]);
        assert_eq!((s.set, s.compact), (expected, false));
    }
}

#[test]
fn sublevel_examples() {
    let s = sublevel(&corpus(9), &q("1")).unwrap();
    assert_eq!((s.set, s.closed), (ClassSet::interval(Interval::closed(q("4"), q("6"))), true));
    for (n, spec) in all_corpus().into_iter().filter(|(_, s)| s.domain.is_compact()) {
        let s = sublevel(&spec, &q("100")).unwrap();
        assert_eq!((s.set, s.closed), (spec.domain_set(), true), "entry {n}");
    }
}

#[test]
fn c3_examples() {
    let v = check_c3(&corpus(13)).unwrap();
    assert_eq!(v.status, Status::Falsified);
    assert_eq!(v.witness, Some(Witness::Points(qs(&["0", "10"]))));
    assert_eq!(check_c3(&corpus(10)).unwrap().status, Status::Proven);
    assert_eq!(check_c3(&corpus(9)).unwrap().status, Status::Proven);
}

/// Oracle for lower semicontinuity at a point: residuals at nearby points
/// of both classes.
fn lsc_oracle(spec: &MappingSpec, x: &QuadExt) -> bool {
    let g = spec.residual(x).unwrap();
    let h = q("1/1000000");
    let grid = QuadExt::from(kkmfix::exactnum::Rational::new(
        x.scale(&rat(1_000_000, 1)).floor(),
        1_000_000.into(),
    ));
    let near = [x - &h, x + &h, x - &(&h * &q("sqrt2")), x + &(&h * &q("sqrt2")), grid.clone(), &grid + &h];
    near.iter()
        .filter(|p| *p != x && spec.domain.contains(p))
        .all(|p| spec.residual(p).unwrap() >= &g - &q("1/1000"))
}

#[test]
fn lsc_failures_agree_with_neighbourhood_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, spec) in all_corpus() {
        let failures = lsc_failures(&spec).unwrap();
        let mut pts = random_domain_points(&mut rng, &spec, 100);
        pts.extend(spec.breakpoints());
        for p in pts {
            assert_eq!(failures.contains(&p), !lsc_oracle(&spec, &p), "entry {n} at {p}");
        }
    }
}

#[test]
fn c3_status_matches_sublevel_closedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (n, spec) in all_corpus() {
        let proven = check_c3(&spec).unwrap().status == Status::Proven;
        let betas: Vec<QuadExt> = (0..50).map(|_| QuadExt::from(rat(rng.gen_range(1..=240), 20))).collect();
        let closed = betas.iter().map(|b| sublevel(&spec, b).unwrap().closed);
        if proven {
            assert!(closed.clone().all(|c| c), "entry {n}");
        } else {
            assert!(closed.clone().any(|c| !c), "entry {n}");
        }
    }
}

#[test]
fn sublevels_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, spec) in all_corpus() {
        for _ in 0..20 {
            let a = QuadExt::from(rat(rng.gen_range(1..=200), 20));
            let b = &a + &QuadExt::from(rat(rng.gen_range(0..=100), 20));
            let (sa, sb) = (sublevel(&spec, &a).unwrap().set, sublevel(&spec, &b).unwrap().set);
            assert!(sa.is_subset(&sb), "entry {n}: beta {a} vs {b}");
        }
    }
}

#[test]
fn subset_decisions_agree_with_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, spec) in all_corpus() {
        for _ in 0..20 {
            let size = rng.gen_range(2..=4);
            let mut pts = random_domain_points(&mut rng, &spec, size);
            pts.sort();
            pts.dedup();
            if pts.len() < 2 {
                continue;
            }
            for kind in [BKind::B1, BKind::B2] {
                let v = check_b_subset(kind, &spec, &pts).unwrap();
                match v.status {
                    Status::Proven => {
                        let (lo, hi) = (&pts[0], &pts[pts.len() - 1]);
                        for k in 0..=200 {
                            let u = lo + &(hi - lo).scale(&rat(k, 200));
                            assert!(!b_oracle(kind, &spec, &pts, &u).is_negative(), "entry {n} {kind:?} {pts:?} at {u}");
                        }
                    }
                    _ => {
                        let w = v.subset_witness().unwrap();
                        assert!(b_oracle(kind, &spec, &pts, &w.u).is_negative(), "entry {n} {kind:?}");
                        let weights = w.weights.as_ref().unwrap();
                        let sum = weights.iter().fold(QuadExt::zero(), |a, b| a + b);
                        assert_eq!(sum, QuadExt::one());
                        let comb = weights.iter().zip(&w.points).fold(QuadExt::zero(), |a, (l, x)| a + l * x);
                        assert_eq!(comb, w.u);
                    }
                }
            }
            let v = check_b_subset(BKind::B3, &spec, &pts).unwrap();
            if v.status == Status::Falsified {
                let w = v.subset_witness().unwrap();
                assert!(criterion(BKind::B3, &spec, &pts, &w.u).unwrap().is_negative(), "entry {n}");
            }
        }
    }
}

#[test]
fn b_value_ignores_weight_decomposition() {
    // u = 5 from {2, 4, 8} in two ways
    let spec = corpus(8);
    let pts = qs(&["2", "4", "8"]);
    let combos = [qs(&["1/6", "1/2", "1/3"]), qs(&["1/4", "3/8", "3/8"])];
    let mut values = Vec::new();
    for w in &combos {
        let u = w.iter().zip(&pts).fold(QuadExt::zero(), |a, (l, x)| a + l * x);
        assert_eq!(u, q("5"));
        values.push(b_value(BKind::B2, &spec, &pts, &u).unwrap());
    }
    assert_eq!(values[0], values[1]);
}
