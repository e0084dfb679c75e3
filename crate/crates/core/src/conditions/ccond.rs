//! Conditions (c1), (c2) on the sets `{y : d(x*, y) <= d(f(x*), y)}` and
//! `{y : d(f(x*), x*) <= d(f(x*), y)}`, and condition (c3) on the sublevel
//! sets of the residual.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::bcond::{sign_sets, where_positive};
use super::{ConditionVerdict, Witness};
use crate::error::{Error, Result};
use crate::exactnum::{dist, ClassTag, QuadExt};
use crate::mapping::{Cell, ClassSet, Interval, IntervalUnion, MappingSpec};

/// A subset of `C` with its compactness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CSet {
    pub set: ClassSet,
    pub compact: bool,
}

impl CSet {
    fn new(set: ClassSet) -> CSet {
        CSet {
            compact: set.is_compact(),
            set,
        }
    }
}

/// `{y in C : d(x*, y) <= d(f(x*), y)}`.
pub fn check_c1(spec: &MappingSpec, xstar: &QuadExt) -> Result<CSet> {
    let fx = spec.evaluate(xstar)?;
    let c = spec.domain_set();
    let mid = xstar.midpoint(&fx);
    let set = match fx.cmp(xstar) {
        std::cmp::Ordering::Equal => c,
        std::cmp::Ordering::Greater => c.intersection(&ClassSet::interval(Interval::at_most(mid))),
        std::cmp::Ordering::Less => c.intersection(&ClassSet::interval(Interval::at_least(mid))),
    };
    Ok(CSet::new(set))
}

/// `{y in C : d(f(x*), x*) <= d(f(x*), y)}`.
pub fn check_c2(spec: &MappingSpec, xstar: &QuadExt) -> Result<CSet> {
    let fx = spec.evaluate(xstar)?;
    let r = dist(&fx, xstar);
    let c = spec.domain_set();
    if r.is_zero() {
        return Ok(CSet::new(c));
    }
    let hole = ClassSet::interval(Interval::open(&fx - &r, &fx + &r));
    Ok(CSet::new(c.difference(&hole)))
}

/// Candidate `x*` values: piece endpoints in ascending order, their images,
/// midpoints of consecutive endpoints, and the endpoints shifted by one.
pub fn xstar_grid(spec: &MappingSpec) -> Vec<QuadExt> {
    let mut ends = spec.breakpoints();
    if !spec.domain.is_bounded() {
        let (lo, hi) = super::search::window(spec);
        ends.extend([lo, hi]);
        ends.retain(|p| spec.domain.contains(p));
        ends.sort();
        ends.dedup();
    }
    let one = QuadExt::one();
    let mut grid: Vec<QuadExt> = Vec::new();
    let push = |p: QuadExt, grid: &mut Vec<QuadExt>| {
        if spec.domain.contains(&p) && !grid.contains(&p) {
            grid.push(p);
        }
    };
    for e in &ends {
        push(e.clone(), &mut grid);
    }
    for e in &ends {
        if let Ok(v) = spec.evaluate(e) {
            push(v, &mut grid);
        }
    }
    for w in ends.windows(2) {
        push(w[0].midpoint(&w[1]), &mut grid);
    }
    for e in &ends {
        push(e + &one, &mut grid);
        push(e - &one, &mut grid);
    }
    grid
}

/// Condition (c1): some `x*` whose set is compact. Tries `grid` first, then
/// the exact characterization: the set is all of `C` at a fixed point, a
/// left part of `C` when `f(x*) > x*`, and a right part when `f(x*) < x*`.
pub fn c1_verdict(spec: &MappingSpec, grid: &[QuadExt]) -> Result<ConditionVerdict> {
    for x in grid {
        let s = check_c1(spec, x)?;
        if s.compact {
            return Ok(ConditionVerdict::proven(format!("x* = {x} gives the compact set {}", s.set))
                .with_witness(Witness::Point(x.clone())));
        }
    }
    let signs = sign_sets(spec)?;
    let d = &spec.domain;
    let lower_ok = d.lower().is_some() && d.lower_closed();
    let upper_ok = d.upper().is_some() && d.upper_closed();
    let pick = if !signs.fixed.is_empty() && d.is_compact() {
        signs.fixed.sample_point()
    } else if !signs.up.is_empty() && lower_ok {
        signs.up.sample_point()
    } else if !signs.down.is_empty() && upper_ok {
        signs.down.sample_point()
    } else {
        None
    };
    if let Some(x) = pick {
        let s = check_c1(spec, &x)?;
        debug_assert!(s.compact);
        return Ok(ConditionVerdict::proven(format!("x* = {x} gives the compact set {}", s.set))
            .with_witness(Witness::Point(x)));
    }
    let sample = grid.first().cloned().or_else(|| spec.domain_set().sample_point());
    let detail = match &sample {
        Some(x) => format!(
            "no x* in C gives a compact set (for example x* = {x} gives {})",
            check_c1(spec, x)?.set
        ),
        None => "no x* in C gives a compact set".to_string(),
    };
    Ok(ConditionVerdict::falsified(
        Witness::Point(sample.unwrap_or_else(QuadExt::zero)),
        detail,
    ))
}

/// Condition (c2). The set is `C` minus an open interval, so it is compact
/// for every `x*` when `C` is, and for none when `C` is unbounded.
pub fn c2_verdict(spec: &MappingSpec, grid: &[QuadExt]) -> Result<ConditionVerdict> {
    for x in grid {
        let s = check_c2(spec, x)?;
        if s.compact {
            return Ok(ConditionVerdict::proven(format!("x* = {x} gives the compact set {}", s.set))
                .with_witness(Witness::Point(x.clone())));
        }
    }
    if spec.domain.is_compact() {
        return Ok(ConditionVerdict::proven("C is compact, so every x* gives a compact set"));
    }
    let sample = grid
        .first()
        .cloned()
        .or_else(|| spec.domain_set().sample_point())
        .unwrap_or_else(QuadExt::zero);
    if !spec.domain.is_bounded() {
        let s = check_c2(spec, &sample)?;
        return Ok(ConditionVerdict::falsified(
            Witness::Point(sample.clone()),
            format!("C is unbounded, so no x* gives a compact set (x* = {sample} gives {})", s.set),
        ));
    }
    Ok(ConditionVerdict::not_falsified(
        Default::default(),
        format!("no compact set found among {} grid points", grid.len()),
    ))
}

/// `{x in C : d(f(x), x) <= beta}` with its closedness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sublevel {
    pub set: ClassSet,
    pub closed: bool,
}

pub(crate) fn sublevel_set(spec: &MappingSpec, beta: &QuadExt) -> Result<ClassSet> {
    let mut out = ClassSet::empty();
    for cell in spec.cells()? {
        match &cell {
            Cell::Point { at, value } => {
                if &dist(value, at) <= beta {
                    out = out.union(&ClassSet::point(at.clone()));
                }
            }
            Cell::Open { .. } => {
                let span = cell.span().expect("open cell");
                let shared = cell.distinct_formulas().len() == 1;
                for (class, expr) in cell.distinct_formulas() {
                    let h = expr.displacement();
                    let part = if h.slope.is_zero() {
                        (&QuadExt::from(h.intercept.abs()) <= beta).then(|| span.clone())
                    } else {
                        let inv = h.slope.recip();
                        let c = QuadExt::from(&h.intercept);
                        let a = (-beta - &c).scale(&inv);
                        let b = (beta - &c).scale(&inv);
                        let (a, b) = if a <= b { (a, b) } else { (b, a) };
                        Interval::closed(a, b).intersect(&span)
                    };
                    if let Some(i) = part {
                        out = out.union(&if shared {
                            ClassSet::interval(i)
                        } else {
                            ClassSet::of_class(i, class)
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn sublevel(spec: &MappingSpec, beta: &QuadExt) -> Result<Sublevel> {
    if !beta.is_positive() {
        return Err(Error::NonPositiveBeta(beta.clone()));
    }
    let set = sublevel_set(spec, beta)?;
    Ok(Sublevel {
        closed: set.is_closed(),
        set,
    })
}

/// A breakpoint where the residual jumps above its nearby values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub(crate) struct PointFailure {
    pub at: QuadExt,
    pub value: QuadExt,
    pub liminf: QuadExt,
}

fn lsc_analysis(spec: &MappingSpec) -> Result<(ClassSet, Vec<PointFailure>)> {
    let cells = spec.cells()?;
    let mut set = ClassSet::empty();
    let mut points = Vec::new();
    for (k, cell) in cells.iter().enumerate() {
        match cell {
            Cell::Open {
                lower,
                upper,
                rational,
                irrational,
            } => {
                if rational == irrational {
                    continue;
                }
                let (hr, hi) = (rational.displacement(), irrational.displacement());
                let (lo, up) = (lower.as_ref(), upper.as_ref());
                let a_pos = where_positive(&(&hr.slope - &hi.slope), &(&hr.intercept - &hi.intercept), lo, up);
                let a_neg = where_positive(&(&hi.slope - &hr.slope), &(&hi.intercept - &hr.intercept), lo, up);
                let b_pos = where_positive(&(&hr.slope + &hi.slope), &(&hr.intercept + &hi.intercept), lo, up);
                let b_neg = where_positive(&-(&hr.slope + &hi.slope), &-(&hr.intercept + &hi.intercept), lo, up);
                let meet = |x: &Option<Interval>, y: &Option<Interval>| match (x, y) {
                    (Some(x), Some(y)) => x.intersect(y),
                    _ => None,
                };
                for (i, class) in [
                    (meet(&a_pos, &b_pos), ClassTag::RationalPoint),
                    (meet(&a_neg, &b_neg), ClassTag::RationalPoint),
                    (meet(&a_pos, &b_neg), ClassTag::IrrationalPoint),
                    (meet(&a_neg, &b_pos), ClassTag::IrrationalPoint),
                ] {
                    if let Some(i) = i {
                        set = set.union(&ClassSet::of_class(i, class));
                    }
                }
            }
            Cell::Point { at, value } => {
                let g = dist(value, at);
                let liminf = [k.checked_sub(1), Some(k + 1)]
                    .into_iter()
                    .flatten()
                    .filter_map(|j| cells.get(j))
                    .flat_map(|c| c.distinct_formulas().into_iter().map(|(_, e)| (e.eval(at) - at).abs()))
                    .min();
                if let Some(liminf) = liminf {
                    if g > liminf {
                        set = set.union(&ClassSet::point(at.clone()));
                        points.push(PointFailure {
                            at: at.clone(),
                            value: g,
                            liminf,
                        });
                    }
                }
            }
        }
    }
    Ok((set, points))
}

/// Points of `C` where the residual fails to be lower semicontinuous.
pub fn lsc_failures(spec: &MappingSpec) -> Result<ClassSet> {
    Ok(lsc_analysis(spec)?.0)
}

/// Condition (c3): every sublevel set of the residual is closed, i.e. the
/// residual is lower semicontinuous on `C`.
pub fn check_c3(spec: &MappingSpec) -> Result<ConditionVerdict> {
    let (set, points) = lsc_analysis(spec)?;
    if set.is_empty() {
        return Ok(ConditionVerdict::proven("the residual is lower semicontinuous on C"));
    }
    let mut detail = format!("the residual is not lower semicontinuous at {set}");
    if !points.is_empty() {
        let betas = IntervalUnion::from_intervals(points.iter().filter_map(|p| {
            Interval::try_new(Some(p.liminf.clone()), false, Some(p.value.clone()), false)
        }));
        let jumps: Vec<String> = points
            .iter()
            .map(|p| format!("d(f({0}), {0}) = {1} while nearby values approach {2}", p.at, p.value, p.liminf))
            .collect();
        detail.push_str(&format!("; {}; sublevel sets are not closed for beta in {betas}", jumps.join(", ")));
    }
    let witness = match set.finite_points() {
        Some(ps) => Witness::Points(ps),
        None => Witness::Set(set),
    };
    Ok(ConditionVerdict::falsified(witness, detail))
}
