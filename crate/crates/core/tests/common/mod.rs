//! Shared helpers for the integration tests and the acceptance target.

#![allow(dead_code)]

use kkmfix::exactnum::{rat, ClassTag, QuadExt, Rational};
use kkmfix::mapdef::parse;
use kkmfix::mapping::{AffineExpr, Interval, MappingSpec, Piece, PointOverride};
use kkmfix::verdict::corpus_source;
use rand::Rng;

pub fn q(s: &str) -> QuadExt {
    s.parse().unwrap()
}

pub fn qs(items: &[&str]) -> Vec<QuadExt> {
    items.iter().map(|s| q(s)).collect()
}

pub fn corpus(n: usize) -> MappingSpec {
    parse(corpus_source(n).unwrap()).unwrap()
}

pub fn all_corpus() -> Vec<(usize, MappingSpec)> {
    (1..=14).map(|n| (n, corpus(n))).collect()
}

/// `a + b sqrt2` with small random rational parts.
pub fn random_quad(rng: &mut impl Rng) -> QuadExt {
    let a = rat(rng.gen_range(-60..=60), rng.gen_range(1..=12));
    let b = if rng.gen_bool(0.5) {
        Rational::from_integer(0.into())
    } else {
        rat(rng.gen_range(-20..=20), rng.gen_range(1..=12))
    };
    QuadExt::new(a, b)
}

/// A rational or `rational + k sqrt2 / 100` point inside `[lo, hi]`.
pub fn random_point_in(rng: &mut impl Rng, lo: &QuadExt, hi: &QuadExt) -> QuadExt {
    let t = rat(rng.gen_range(0..=1000), 1000);
    let base = lo + &(hi - lo).scale(&t);
    if rng.gen_bool(0.5) {
        return base;
    }
    let shifted = &base + &QuadExt::sqrt2().scale(&rat(rng.gen_range(-5..=5), 100));
    if &shifted >= lo && &shifted <= hi {
        shifted
    } else {
        base
    }
}

/// Random points of the domain of `spec`, within its plotting window.
pub fn random_domain_points(rng: &mut impl Rng, spec: &MappingSpec, count: usize) -> Vec<QuadExt> {
    let (lo, hi) = kkmfix::conditions::search_window(spec);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_point_in(rng, &lo, &hi);
        if spec.domain.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn random_value(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(0..=20), 2)
}

/// Affine map on `[a, b]` taking endpoint values in `[0, 10]`.
fn random_affine(rng: &mut impl Rng, a: &Rational, b: &Rational) -> AffineExpr {
    if rng.gen_bool(0.25) {
        return AffineExpr::constant(random_value(rng));
    }
    let (va, vb) = (random_value(rng), random_value(rng));
    let slope = (&vb - &va) / (b - a);
    let intercept = &va - &slope * a;
    AffineExpr::new(slope, intercept)
}

/// A random valid piecewise-affine self-map of `[0, 10]` with rational
/// coefficients, class-split pieces and point overrides.
pub fn random_spec(rng: &mut impl Rng) -> MappingSpec {
    let cuts = rng.gen_range(0..=3);
    let mut ends: Vec<Rational> = (0..cuts).map(|_| rat(rng.gen_range(1..40), 4)).collect();
    ends.sort();
    ends.dedup();
    let mut bounds = vec![rat(0, 1)];
    bounds.extend(ends);
    bounds.push(rat(10, 1));
    // which side owns each interior breakpoint
    let owner_left: Vec<bool> = (0..bounds.len()).map(|_| rng.gen_bool(0.5)).collect();
    let mut pieces = Vec::new();
    let last = bounds.len() - 2;
    for k in 0..=last {
        let (a, b) = (&bounds[k], &bounds[k + 1]);
        let lower_closed = k == 0 || !owner_left[k];
        let upper_closed = k == last || owner_left[k + 1];
        let over = Interval::new(
            Some(QuadExt::from(a)),
            lower_closed,
            Some(QuadExt::from(b)),
            upper_closed,
        )
        .unwrap();
        if rng.gen_bool(0.3) {
            for class in ClassTag::BOTH {
                pieces.push(Piece::for_class(over.clone(), class, random_affine(rng, a, b)));
            }
        } else {
            pieces.push(Piece::all(over, random_affine(rng, a, b)));
        }
    }
    let mut overrides: Vec<PointOverride> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let at = QuadExt::from(bounds[rng.gen_range(0..bounds.len())].clone());
        if overrides.iter().all(|o| o.at != at) {
            overrides.push(PointOverride {
                at,
                value: QuadExt::from(random_value(rng)),
            });
        }
    }
    let spec = MappingSpec::new(Interval::closed(q("0"), q("10")), pieces, overrides, "random");
    assert!(spec.validate().is_empty(), "{:?}", spec.validate());
    spec
}

/// A random self-map of `[0, 10]` that interpolates knot values containing
/// both 0 and 10, so it is onto before its 0 to 2 point overrides.
pub fn random_onto_spec(rng: &mut impl Rng) -> MappingSpec {
    let cuts = rng.gen_range(1..=4);
    let mut knots: Vec<Rational> = (0..cuts).map(|_| rat(rng.gen_range(1..40), 4)).collect();
    knots.push(rat(0, 1));
    knots.push(rat(10, 1));
    knots.sort();
    knots.dedup();
    let mut values: Vec<Rational> = knots.iter().map(|_| random_value(rng)).collect();
    let lo = rng.gen_range(0..values.len());
    let hi = (lo + rng.gen_range(1..values.len())) % values.len();
    values[lo] = rat(0, 1);
    values[hi] = rat(10, 1);
    let last = knots.len() - 2;
    let pieces = (0..=last)
        .map(|k| {
            let (a, b) = (&knots[k], &knots[k + 1]);
            let slope = (&values[k + 1] - &values[k]) / (b - a);
            let expr = AffineExpr::new(slope.clone(), &values[k] - &slope * a);
            let over = Interval::new(Some(QuadExt::from(a)), true, Some(QuadExt::from(b)), k == last).unwrap();
            Piece::all(over, expr)
        })
        .collect();
    let mut overrides: Vec<PointOverride> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let at = QuadExt::from(knots[rng.gen_range(0..knots.len())].clone());
        if overrides.iter().all(|o| o.at != at) {
            overrides.push(PointOverride {
                at,
                value: QuadExt::from(random_value(rng)),
            });
        }
    }
    let spec = MappingSpec::new(Interval::closed(q("0"), q("10")), pieces, overrides, "random onto");
    assert!(spec.validate().is_empty(), "{:?}", spec.validate());
    spec
}
