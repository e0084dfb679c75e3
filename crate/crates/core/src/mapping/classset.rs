//! Exact subsets of the real line that may treat rational and irrational
//! points differently.
//!
//! A [`ClassSet`] stores two interval unions: the rational points of the set
//! are the rationals of the first union, the irrational points are the
//! irrationals of the second. Both unions are kept in a canonical form (an
//! endpoint of the wrong class carries no information and is normalized to
//! closed; single points of the wrong class are dropped), so two sets are
//! equal exactly when their representations are equal.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Serialize, Serializer};

use crate::exactnum::{ClassTag, QuadExt, Rational};
use crate::mapping::interval::{lower_key_cmp, Interval, IntervalUnion};

/// Which points of an interval a component keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFilter {
    All,
    RationalsOnly,
    IrrationalsOnly,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ClassSet {
    rational: IntervalUnion,
    irrational: IntervalUnion,
}

fn normalize_for(class: ClassTag, u: &IntervalUnion) -> IntervalUnion {
    let foreign = |p: &QuadExt| p.class() != class;
    u.map_parts(|i| {
        if i.is_degenerate() {
            return if foreign(i.lower().unwrap()) { None } else { Some(i.clone()) };
        }
        let lc = i.lower_closed() || i.lower().is_some_and(foreign);
        let uc = i.upper_closed() || i.upper().is_some_and(foreign);
        i.with_closedness(lc, uc)
    })
}

impl ClassSet {
    pub fn empty() -> ClassSet {
        ClassSet::default()
    }

    pub fn from_parts(rational: IntervalUnion, irrational: IntervalUnion) -> ClassSet {
        ClassSet {
            rational: normalize_for(ClassTag::RationalPoint, &rational),
            irrational: normalize_for(ClassTag::IrrationalPoint, &irrational),
        }
    }

    pub fn from_union(u: IntervalUnion) -> ClassSet {
        ClassSet::from_parts(u.clone(), u)
    }

    pub fn interval(i: Interval) -> ClassSet {
        ClassSet::from_union(IntervalUnion::from_interval(i))
    }

    pub fn intervals(items: impl IntoIterator<Item = Interval>) -> ClassSet {
        ClassSet::from_union(IntervalUnion::from_intervals(items))
    }

    pub fn real_line() -> ClassSet {
        ClassSet::interval(Interval::real_line())
    }

    /// The points of `i` of one class only.
    pub fn of_class(i: Interval, class: ClassTag) -> ClassSet {
        let u = IntervalUnion::from_interval(i);
        match class {
            ClassTag::RationalPoint => ClassSet::from_parts(u, IntervalUnion::empty()),
            ClassTag::IrrationalPoint => ClassSet::from_parts(IntervalUnion::empty(), u),
        }
    }

    pub fn point(p: QuadExt) -> ClassSet {
        let class = p.class();
        ClassSet::of_class(Interval::point(p), class)
    }

    pub fn points(items: impl IntoIterator<Item = QuadExt>) -> ClassSet {
        items
            .into_iter()
            .fold(ClassSet::empty(), |acc, p| acc.union(&ClassSet::point(p)))
    }

    pub fn rational_part(&self) -> &IntervalUnion {
        &self.rational
    }

    pub fn irrational_part(&self) -> &IntervalUnion {
        &self.irrational
    }

    pub fn part(&self, class: ClassTag) -> &IntervalUnion {
        match class {
            ClassTag::RationalPoint => &self.rational,
            ClassTag::IrrationalPoint => &self.irrational,
        }
    }

    pub fn contains(&self, x: &QuadExt) -> bool {
        self.part(x.class()).contains(x)
    }

    /// Whether every point of class `class` in `i` belongs to the set.
    pub fn contains_class_interval(&self, i: &Interval, class: ClassTag) -> bool {
        ClassSet::of_class(i.clone(), class).is_subset(self)
    }

    pub fn is_empty(&self) -> bool {
        self.rational.is_empty() && self.irrational.is_empty()
    }

    pub fn union(&self, other: &ClassSet) -> ClassSet {
        ClassSet::from_parts(self.rational.union(&other.rational), self.irrational.union(&other.irrational))
    }

    pub fn intersection(&self, other: &ClassSet) -> ClassSet {
        ClassSet::from_parts(
            self.rational.intersection(&other.rational),
            self.irrational.intersection(&other.irrational),
        )
    }

    pub fn difference(&self, other: &ClassSet) -> ClassSet {
        ClassSet::from_parts(
            self.rational.difference(&other.rational),
            self.irrational.difference(&other.irrational),
        )
    }

    pub fn complement(&self) -> ClassSet {
        ClassSet::from_parts(self.rational.complement(), self.irrational.complement())
    }

    pub fn is_subset(&self, other: &ClassSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rational.is_bounded() && self.irrational.is_bounded()
    }

    /// Topological closure in the real line; both classes are dense in
    /// every nondegenerate interval.
    pub fn closure(&self) -> ClassSet {
        ClassSet::from_union(self.rational.closure().union(&self.irrational.closure()))
    }

    pub fn is_closed(&self) -> bool {
        self.closure().is_subset(self)
    }

    pub fn is_compact(&self) -> bool {
        self.is_bounded() && self.is_closed()
    }

    /// Image under `x -> slope*x + intercept` with rational, nonzero slope.
    /// Such maps send rationals to rationals and irrationals to irrationals.
    pub fn map_affine(&self, slope: &Rational, intercept: &Rational) -> ClassSet {
        ClassSet::from_parts(
            self.rational.map_affine(slope, intercept),
            self.irrational.map_affine(slope, intercept),
        )
    }

    /// The members, when the set is finite.
    pub fn finite_points(&self) -> Option<Vec<QuadExt>> {
        let mut out = Vec::new();
        for i in self.rational.intervals().iter().chain(self.irrational.intervals()) {
            if !i.is_degenerate() {
                return None;
            }
            out.push(i.lower().unwrap().clone());
        }
        out.sort();
        Some(out)
    }

    /// Some member, preferring rational points and closed endpoints.
    pub fn sample_point(&self) -> Option<QuadExt> {
        self.sample_point_of_class(ClassTag::RationalPoint)
            .or_else(|| self.sample_point_of_class(ClassTag::IrrationalPoint))
    }

    pub fn sample_point_of_class(&self, class: ClassTag) -> Option<QuadExt> {
        let first = self.part(class).intervals().first()?;
        Some(point_in(first, class))
    }

    /// The set as disjoint class-filtered intervals, sorted by start.
    pub fn components(&self) -> Vec<(Interval, ClassFilter)> {
        let common = self.rational.intersection(&self.irrational);
        let r_only = normalize_for(ClassTag::RationalPoint, &self.rational.difference(&self.irrational));
        let i_only = normalize_for(ClassTag::IrrationalPoint, &self.irrational.difference(&self.rational));
        let mut out: Vec<(Interval, ClassFilter)> = common
            .intervals()
            .iter()
            .map(|i| (i.clone(), ClassFilter::All))
            .chain(r_only.intervals().iter().map(|i| (i.clone(), ClassFilter::RationalsOnly)))
            .chain(i_only.intervals().iter().map(|i| (i.clone(), ClassFilter::IrrationalsOnly)))
            .collect();
        out.sort_by(|a, b| lower_key_cmp(&a.0, &b.0));
        out
    }
}

/// A member of class `class` of `i`, which is a part of a normalized set of
/// that class.
fn point_in(i: &Interval, class: ClassTag) -> QuadExt {
    if i.is_degenerate() {
        return i.lower().unwrap().clone();
    }
    if let Some(l) = i.lower() {
        if i.lower_closed() && l.class() == class {
            return l.clone();
        }
    }
    if let Some(u) = i.upper() {
        if i.upper_closed() && u.class() == class {
            return u.clone();
        }
    }
    match class {
        ClassTag::RationalPoint => rational_between(i.lower(), i.upper()),
        ClassTag::IrrationalPoint => irrational_between(i.lower(), i.upper()),
    }
}

/// A rational strictly between `lo` and `hi` (either may be infinite).
pub fn rational_between(lo: Option<&QuadExt>, hi: Option<&QuadExt>) -> QuadExt {
    match (lo, hi) {
        (None, None) => QuadExt::zero(),
        (Some(l), None) => QuadExt::from(l.floor() + BigInt::one()),
        (None, Some(h)) => QuadExt::from(h.ceil() - BigInt::one()),
        (Some(l), Some(h)) => {
            let mid = l.midpoint(h);
            if mid.is_rational() {
                return mid;
            }
            let mut k: u32 = 0;
            loop {
                let scale = BigInt::from(2).pow(k);
                let scaled = mid.scale(&Rational::from_integer(scale.clone()));
                let cand = QuadExt::from(Rational::new(scaled.floor(), scale));
                if &cand > l && &cand < h {
                    return cand;
                }
                k += 1;
            }
        }
    }
}

/// An irrational strictly between `lo` and `hi`.
pub fn irrational_between(lo: Option<&QuadExt>, hi: Option<&QuadExt>) -> QuadExt {
    match (lo, hi) {
        (None, None) => QuadExt::sqrt2(),
        (Some(l), None) => rational_between(Some(l), None) + QuadExt::sqrt2(),
        (None, Some(h)) => rational_between(None, Some(h)) - QuadExt::sqrt2(),
        (Some(l), Some(h)) => {
            let mid = l.midpoint(h);
            if !mid.is_rational() {
                return mid;
            }
            // offset by r*sqrt2 with 0 < r < width/4, so the offset is below width/2
            let quarter = (h - l).scale(&Rational::new(1.into(), 4.into()));
            let r = rational_between(Some(&QuadExt::zero()), Some(&quarter));
            mid + QuadExt::sqrt2() * r
        }
    }
}

/// A point of class `class` strictly inside the open interval `(lo, hi)`.
pub fn point_of_class_between(lo: Option<&QuadExt>, hi: Option<&QuadExt>, class: ClassTag) -> QuadExt {
    match class {
        ClassTag::RationalPoint => rational_between(lo, hi),
        ClassTag::IrrationalPoint => irrational_between(lo, hi),
    }
}

fn fmt_interval_tight(i: &Interval, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if i.is_degenerate() {
        write!(f, "{{{}}}", i.lower().unwrap())
    } else {
        write!(f, "{i}")
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.components();
        if comps.is_empty() {
            return f.write_str("{}");
        }
        if let Some(points) = self.finite_points() {
            let items: Vec<String> = points.iter().map(ToString::to_string).collect();
            return write!(f, "{{{}}}", items.join(", "));
        }
        for (k, (i, filter)) in comps.iter().enumerate() {
            if k > 0 {
                f.write_str(" U ")?;
            }
            match filter {
                _ if i.is_degenerate() => {}
                ClassFilter::All => {}
                ClassFilter::RationalsOnly => f.write_str("rat")?,
                ClassFilter::IrrationalsOnly => f.write_str("irr")?,
            }
            fmt_interval_tight(i, f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassSet({self})")
    }
}

impl Serialize for ClassSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
