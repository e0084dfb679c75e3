mod common;

use common::{all_corpus, corpus, q, random_domain_points};
use kkmfix::exactnum::QuadExt;
use kkmfix::mapdef::parse;
use kkmfix::mapping::{ClassSet, Interval, ViolationKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn evaluation_examples() {
    let ex2 = corpus(2);
    assert_eq!(ex2.evaluate(&q("6")).unwrap(), q("8"));
    assert_eq!(ex2.evaluate(&q("sqrt2")).unwrap(), q("3/4 sqrt2"));
    assert_eq!(corpus(3).evaluate(&q("0")).unwrap(), q("10"));
    assert_eq!(corpus(13).residual(&q("0")).unwrap(), q("10"));
    assert_eq!(corpus(9).residual(&q("5")).unwrap(), q("0"));
    assert_eq!(corpus(14).residual(&q("5")).unwrap(), q("2"));
}

#[test]
fn image_examples() {
    assert_eq!(corpus(12).image(), ClassSet::points([q("4"), q("6")]));
    assert_eq!(corpus(9).image(), ClassSet::interval(Interval::closed(q("0"), q("10"))));
    let id = parse("domain [0, 1]\npiece [0, 1] all: x\n").unwrap();
    assert_eq!(id.image(), id.domain_set());
}

#[test]
fn fixed_point_examples() {
    assert_eq!(corpus(2).fixed_points(), ClassSet::points([q("0"), q("5")]));
    assert_eq!(corpus(8).fixed_points(), ClassSet::points([q("0"), q("10")]));
    assert!(corpus(5).fixed_points().is_empty());
}

#[test]
fn infimum_examples() {
    let r = corpus(12).inf_residual().unwrap();
    assert_eq!((r.value, r.attained, r.at), (q("1"), true, Some(q("5"))));
    let r = corpus(2).inf_residual().unwrap();
    assert_eq!((r.value, r.attained, r.at), (q("0"), true, Some(q("0"))));
    let r = corpus(14).inf_residual().unwrap();
    assert_eq!(r.value, q("2"));
    let at = r.at.unwrap();
    assert!(at >= q("3") && at <= q("7"));
}

#[test]
fn validation_examples() {
    assert!(corpus(2).validate().is_empty());
    let mut holed = corpus(2);
    holed.pieces.remove(2);
    let v = holed.validate();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::Coverage);
    assert!(v[0].message.contains("rational") && v[0].message.contains("(4, 6]"), "{}", v[0].message);
    let escaping = kkmfix::mapping::MappingSpec::new(
        Interval::closed(q("0"), q("10")),
        vec![kkmfix::mapping::Piece::all(
            Interval::closed(q("0"), q("10")),
            kkmfix::mapping::AffineExpr::constant(kkmfix::exactnum::rat(12, 1)),
        )],
        vec![],
        "",
    );
    let v = escaping.validate();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::SelfMap);
}

/// Oracle: grid points with zero residual, over rationals and sqrt2 offsets.
fn grid_fixed_points(spec: &kkmfix::mapping::MappingSpec) -> Vec<QuadExt> {
    let (lo, hi) = kkmfix::conditions::search_window(spec);
    let mut out = Vec::new();
    for k in 0..=400 {
        let x = &lo + &(&hi - &lo).scale(&kkmfix::exactnum::rat(k, 400));
        for p in [x.clone(), &x + &q("1/1000 sqrt2")] {
            if spec.domain.contains(&p) && spec.residual(&p).unwrap().is_zero() {
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn fixed_points_agree_with_grid_on_corpus() {
    for (n, spec) in all_corpus() {
        let exact = spec.fixed_points();
        let grid = grid_fixed_points(&spec);
        for p in &grid {
            assert!(exact.contains(p), "entry {n}: grid fixed point {p} missing");
        }
        if let Some(points) = exact.finite_points() {
            for p in points {
                assert!(spec.residual(&p).unwrap().is_zero(), "entry {n}: {p} is not fixed");
            }
        }
    }
}

#[test]
fn self_map_image_and_infimum_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, spec) in all_corpus() {
        let image = spec.image();
        let inf = spec.inf_residual().unwrap();
        for x in random_domain_points(&mut rng, &spec, 1000) {
            let y = spec.evaluate(&x).unwrap();
            assert!(spec.domain.contains(&y), "entry {n}: f({x}) = {y} escapes C");
            assert!(image.contains(&y), "entry {n}: f({x}) = {y} not in the image");
            assert!(inf.value <= spec.residual(&x).unwrap(), "entry {n}: residual below infimum at {x}");
        }
        if let Some(at) = inf.at {
            assert_eq!(spec.residual(&at).unwrap(), inf.value, "entry {n}");
        }
    }
}
