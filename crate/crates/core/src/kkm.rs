//! The set-valued maps `G` behind the three fixed-point theorems, exact
//! KKM coverage checks, finite-sample intersections and the chain of
//! residual sublevel sets.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::conditions::{check_c1, check_c2};
use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::mapping::{ClassSet, Interval, MappingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GKind {
    /// `G(x) = {y : d(x, y) <= d(f(x), y)}`
    G1,
    /// `G(x) = {y : d(f(x), x) <= d(f(x), y)}`
    G2,
    /// `G(x) = {y : d(f(x), y) >= delta/2}`
    G3(QuadExt),
}

impl GKind {
    pub fn name(&self) -> &'static str {
        match self {
            GKind::G1 => "g1",
            GKind::G2 => "g2",
            GKind::G3(_) => "g3",
        }
    }
}

impl fmt::Display for GKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GKind::G3(d) => write!(f, "g3(delta = {d})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Kind names without a delta; `g3` needs [`GKind::G3`] built directly.
impl FromStr for GKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GKind> {
        match s {
            "g1" => Ok(GKind::G1),
            "g2" => Ok(GKind::G2),
            _ => Err(Error::InvalidArgument(format!("unknown kind `{s}` (expected g1 or g2)"))),
        }
    }
}

/// `2 * inf d(f(x), x)` when positive: the gap used for `G3`.
pub fn default_delta(spec: &MappingSpec) -> Result<Option<QuadExt>> {
    let inf = spec.inf_residual()?.value;
    Ok(inf.is_positive().then(|| &inf + &inf))
}

pub fn g_set(kind: &GKind, spec: &MappingSpec, x: &QuadExt) -> Result<ClassSet> {
    match kind {
        GKind::G1 => Ok(check_c1(spec, x)?.set),
        GKind::G2 => Ok(check_c2(spec, x)?.set),
        GKind::G3(delta) => {
            if !delta.is_positive() {
                return Err(Error::NonPositiveDelta(delta.clone()));
            }
            let fx = spec.evaluate(x)?;
            let r = delta.half();
            let hole = ClassSet::interval(Interval::open(&fx - &r, &fx + &r));
            Ok(spec.domain_set().difference(&hole))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KkmCheck {
    pub holds: bool,
    pub uncovered: Option<QuadExt>,
}

fn require_points(spec: &MappingSpec, points: &[QuadExt]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("at least one point is required".into()));
    }
    match points.iter().find(|p| !spec.domain.contains(p)) {
        Some(p) => Err(Error::OutOfDomain(p.clone())),
        None => Ok(()),
    }
}

/// Whether the hull of `points` lies in the union of their `G` sets.
pub fn verify_kkm(kind: &GKind, spec: &MappingSpec, points: &[QuadExt]) -> Result<KkmCheck> {
    require_points(spec, points)?;
    let lo = points.iter().min().expect("nonempty").clone();
    let hi = points.iter().max().expect("nonempty").clone();
    let mut cover = ClassSet::empty();
    for p in points {
        cover = cover.union(&g_set(kind, spec, p)?);
    }
    let missing = ClassSet::interval(Interval::closed(lo, hi)).difference(&cover);
    Ok(KkmCheck {
        holds: missing.is_empty(),
        uncovered: missing.sample_point(),
    })
}

/// `G(x_1) ∩ ... ∩ G(x_n)` over the sample.
pub fn intersection_witness(kind: &GKind, spec: &MappingSpec, sample: &[QuadExt]) -> Result<ClassSet> {
    require_points(spec, sample)?;
    let mut out = spec.domain_set();
    for x in sample {
        out = out.intersection(&g_set(kind, spec, x)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmLevel {
    pub m: u64,
    pub set: ClassSet,
    pub nonempty: bool,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmChainReport {
    pub levels: Vec<EmLevel>,
    pub nested: bool,
    /// The last level intersected with the exact fixed-point set.
    pub tail_intersection: ClassSet,
    /// Whether the tail equals the fixed-point set.
    pub tail_is_fixed_set: bool,
}

/// The sets `E_m = {x : d(f(x), x) <= 1/m}` for `m = 1..=m_max`.
pub fn em_chain(spec: &MappingSpec, m_max: u64) -> Result<EmChainReport> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be at least 1".into()));
    }
    let mut levels = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let beta = QuadExt::from_ratio(1, m as i64);
        let set = crate::conditions::sublevel(spec, &beta)?.set;
        levels.push(EmLevel {
            m,
            nonempty: !set.is_empty(),
            closed: set.is_closed(),
            set,
        });
    }
    let nested = levels.windows(2).all(|w| w[1].set.is_subset(&w[0].set));
    let fixed = spec.fixed_points();
    let tail_intersection = levels.last().expect("m_max >= 1").set.intersection(&fixed);
    Ok(EmChainReport {
        levels,
        nested,
        tail_is_fixed_set: tail_intersection == fixed,
        tail_intersection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapdef::parse;

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    fn ex14() -> MappingSpec {
        parse(include_str!("../corpus/ex14.map")).unwrap()
    }

    #[test]
    fn g3_removes_a_window() {
        let s = g_set(&GKind::G3(q("2")), &ex14(), &q("3")).unwrap();
        let expected = ClassSet::intervals([Interval::closed(q("0"), q("4")), Interval::closed(q("6"), q("10"))]);
        assert_eq!(s, expected);
        assert_eq!(
            g_set(&GKind::G3(q("0")), &ex14(), &q("3")),
            Err(Error::NonPositiveDelta(q("0")))
        );
    }

    #[test]
    fn g3_coverage_fails_for_example_fourteen() {
        let k = verify_kkm(&GKind::G3(q("2")), &ex14(), &[q("3"), q("7")]).unwrap();
        assert!(!k.holds);
        assert_eq!(k.uncovered, Some(q("5")));
    }

    #[test]
    fn g1_coverage_and_intersection_for_example_two() {
        let spec = parse(include_str!("../corpus/ex02.map")).unwrap();
        assert!(verify_kkm(&GKind::G1, &spec, &[q("0"), q("4"), q("6")]).unwrap().holds);
        let sample: Vec<QuadExt> = ["1", "2", "3", "4", "6", "7"].iter().map(|s| q(s)).collect();
        let w = intersection_witness(&GKind::G1, &spec, &sample).unwrap();
        assert_eq!(w, ClassSet::interval(Interval::closed(q("3"), q("7"))));
    }

    #[test]
    fn chain_for_example_twelve() {
        let spec = parse(include_str!("../corpus/ex12.map")).unwrap();
        let r = em_chain(&spec, 3).unwrap();
        assert_eq!(r.levels[0].set, ClassSet::point(q("5")));
        assert!(!r.levels[1].nonempty);
        assert!(r.nested);
        assert!(r.tail_is_fixed_set);
    }

    #[test]
    fn out_of_domain_points_are_rejected() {
        let spec = ex14();
        assert_eq!(verify_kkm(&GKind::G1, &spec, &[q("11")]), Err(Error::OutOfDomain(q("11"))));
    }
}
