//! Intervals of the real line with endpoints in Q(sqrt2) and finite unions of
//! them.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{QuadExt, Rational};

/// A nonempty interval. `None` endpoints are infinite (and always open).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Option<QuadExt>,
    lower_closed: bool,
    upper: Option<QuadExt>,
    upper_closed: bool,
}

impl Interval {
    /// Returns `None` when the described interval is empty.
    pub fn try_new(
        lower: Option<QuadExt>,
        lower_closed: bool,
        upper: Option<QuadExt>,
        upper_closed: bool,
    ) -> Option<Interval> {
        let lower_closed = lower_closed && lower.is_some();
        let upper_closed = upper_closed && upper.is_some();
        if let (Some(l), Some(u)) = (&lower, &upper) {
            match l.cmp(u) {
                Ordering::Greater => return None,
                Ordering::Equal if !(lower_closed && upper_closed) => return None,
                _ => {}
            }
        }
        Some(Interval {
            lower,
            lower_closed,
            upper,
            upper_closed,
        })
    }

    /// Strict constructor: infinite endpoints must be open and the interval
    /// must be nonempty.
    pub fn new(
        lower: Option<QuadExt>,
        lower_closed: bool,
        upper: Option<QuadExt>,
        upper_closed: bool,
    ) -> Result<Interval> {
        if lower.is_none() && lower_closed || upper.is_none() && upper_closed {
            return Err(Error::InvalidInterval("infinite endpoints must be open".into()));
        }
        let describe = || {
            let l = lower.as_ref().map_or("-inf".to_string(), |v| v.to_string());
            let u = upper.as_ref().map_or("inf".to_string(), |v| v.to_string());
            format!("{l} .. {u}")
        };
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l > u {
                return Err(Error::InvalidInterval(format!("lower endpoint exceeds upper ({})", describe())));
            }
            if l == u && !(lower_closed && upper_closed) {
                return Err(Error::InvalidInterval(format!(
                    "a single-point interval must be closed ({})",
                    describe()
                )));
            }
        }
        Ok(Interval {
            lower,
            lower_closed,
            upper,
            upper_closed,
        })
    }

    pub fn closed(a: QuadExt, b: QuadExt) -> Interval {
        Interval::new(Some(a), true, Some(b), true).expect("closed interval with a <= b")
    }

    pub fn open(a: QuadExt, b: QuadExt) -> Interval {
        Interval::new(Some(a), false, Some(b), false).expect("open interval with a < b")
    }

    pub fn closed_open(a: QuadExt, b: QuadExt) -> Interval {
        Interval::new(Some(a), true, Some(b), false).expect("interval with a < b")
    }

    pub fn open_closed(a: QuadExt, b: QuadExt) -> Interval {
        Interval::new(Some(a), false, Some(b), true).expect("interval with a < b")
    }

    pub fn point(p: QuadExt) -> Interval {
        Interval::closed(p.clone(), p)
    }

    pub fn real_line() -> Interval {
        Interval::new(None, false, None, false).unwrap()
    }

    pub fn at_least(a: QuadExt) -> Interval {
        Interval::new(Some(a), true, None, false).unwrap()
    }

    pub fn greater_than(a: QuadExt) -> Interval {
        Interval::new(Some(a), false, None, false).unwrap()
    }

    pub fn at_most(b: QuadExt) -> Interval {
        Interval::new(None, false, Some(b), true).unwrap()
    }

    pub fn less_than(b: QuadExt) -> Interval {
        Interval::new(None, false, Some(b), false).unwrap()
    }

    pub fn lower(&self) -> Option<&QuadExt> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&QuadExt> {
        self.upper.as_ref()
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn is_degenerate(&self) -> bool {
        matches!((&self.lower, &self.upper), (Some(l), Some(u)) if l == u)
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_some() && self.upper.is_some()
    }

    /// Closed as a subset of the real line.
    pub fn is_closed(&self) -> bool {
        (self.lower.is_none() || self.lower_closed) && (self.upper.is_none() || self.upper_closed)
    }

    pub fn is_compact(&self) -> bool {
        self.is_bounded() && self.is_closed()
    }

    pub fn contains(&self, x: &QuadExt) -> bool {
        let above = match &self.lower {
            None => true,
            Some(l) => match x.cmp(l) {
                Ordering::Greater => true,
                Ordering::Equal => self.lower_closed,
                Ordering::Less => false,
            },
        };
        above
            && match &self.upper {
                None => true,
                Some(u) => match x.cmp(u) {
                    Ordering::Less => true,
                    Ordering::Equal => self.upper_closed,
                    Ordering::Greater => false,
                },
            }
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        lower_key_cmp(self, other) != Ordering::Greater && upper_key_cmp(self, other) != Ordering::Less
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lower, lower_closed) = if lower_key_cmp(self, other) == Ordering::Less {
            (other.lower.clone(), other.lower_closed)
        } else {
            (self.lower.clone(), self.lower_closed)
        };
        let (upper, upper_closed) = if upper_key_cmp(self, other) == Ordering::Greater {
            (other.upper.clone(), other.upper_closed)
        } else {
            (self.upper.clone(), self.upper_closed)
        };
        Interval::try_new(lower, lower_closed, upper, upper_closed)
    }

    pub fn closure(&self) -> Interval {
        Interval::try_new(self.lower.clone(), true, self.upper.clone(), true).unwrap()
    }

    /// The open interior; `None` for a single point.
    pub fn interior(&self) -> Option<Interval> {
        Interval::try_new(self.lower.clone(), false, self.upper.clone(), false)
    }

    pub fn with_closedness(&self, lower_closed: bool, upper_closed: bool) -> Option<Interval> {
        Interval::try_new(self.lower.clone(), lower_closed, self.upper.clone(), upper_closed)
    }

    /// Image under `x -> slope*x + intercept`; `slope` must be nonzero.
    pub fn map_affine(&self, slope: &Rational, intercept: &Rational) -> Interval {
        let f = |v: &QuadExt| v.scale(slope) + QuadExt::from(intercept);
        let lo = self.lower.as_ref().map(f);
        let hi = self.upper.as_ref().map(f);
        if slope > &Rational::from_integer(0.into()) {
            Interval::try_new(lo, self.lower_closed, hi, self.upper_closed).unwrap()
        } else {
            Interval::try_new(hi, self.upper_closed, lo, self.lower_closed).unwrap()
        }
    }

    /// Length of a bounded interval.
    pub fn width(&self) -> Option<QuadExt> {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => Some(u - l),
            _ => None,
        }
    }
}

/// Orders intervals by where they start: `-inf` first, then by value, a
/// closed start before an open one at the same value.
pub fn lower_key_cmp(a: &Interval, b: &Interval) -> Ordering {
    match (&a.lower, &b.lower) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y).then_with(|| b.lower_closed.cmp(&a.lower_closed)),
    }
}

/// Orders intervals by where they end: an open end before a closed end at
/// the same value, `+inf` last.
pub fn upper_key_cmp(a: &Interval, b: &Interval) -> Ordering {
    match (&a.upper, &b.upper) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y).then_with(|| a.upper_closed.cmp(&b.upper_closed)),
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.lower_closed { "[" } else { "(" })?;
        match &self.lower {
            Some(l) => write!(f, "{l}")?,
            None => f.write_str("-inf")?,
        }
        f.write_str(", ")?;
        match &self.upper {
            Some(u) => write!(f, "{u}")?,
            None => f.write_str("inf")?,
        }
        f.write_str(if self.upper_closed { "]" } else { ")" })
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Interval{self}")
    }
}

/// A finite union of intervals kept sorted, pairwise disjoint and with no
/// two members that could be merged.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> IntervalUnion {
        IntervalUnion::default()
    }

    pub fn from_interval(i: Interval) -> IntervalUnion {
        IntervalUnion { parts: vec![i] }
    }

    pub fn from_intervals(items: impl IntoIterator<Item = Interval>) -> IntervalUnion {
        let mut items: Vec<Interval> = items.into_iter().collect();
        items.sort_by(lower_key_cmp);
        let mut parts: Vec<Interval> = Vec::with_capacity(items.len());
        for next in items {
            if let Some(cur) = parts.last_mut() {
                if touches(cur, &next) {
                    if upper_key_cmp(&next, cur) == Ordering::Greater {
                        cur.upper = next.upper;
                        cur.upper_closed = next.upper_closed;
                    }
                    continue;
                }
            }
            parts.push(next);
        }
        IntervalUnion { parts }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &QuadExt) -> bool {
        self.parts.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersection(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalUnion::from_intervals(out)
    }

    pub fn complement(&self) -> IntervalUnion {
        let mut out = Vec::new();
        // (endpoint, that endpoint belongs to the previous member)
        let mut cursor: Option<(QuadExt, bool)> = None;
        let mut started = false;
        for part in &self.parts {
            if let Some(l) = &part.lower {
                let gap = match &cursor {
                    None if !started => Interval::try_new(None, false, Some(l.clone()), !part.lower_closed),
                    Some((c, c_closed)) => {
                        Interval::try_new(Some(c.clone()), !c_closed, Some(l.clone()), !part.lower_closed)
                    }
                    None => None,
                };
                out.extend(gap);
            }
            started = true;
            match &part.upper {
                Some(u) => cursor = Some((u.clone(), part.upper_closed)),
                None => return IntervalUnion::from_intervals(out),
            }
        }
        match cursor {
            Some((c, c_closed)) => out.extend(Interval::try_new(Some(c), !c_closed, None, false)),
            None => out.push(Interval::real_line()),
        }
        IntervalUnion::from_intervals(out)
    }

    pub fn difference(&self, other: &IntervalUnion) -> IntervalUnion {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.difference(other).is_empty()
    }

    pub fn closure(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().map(Interval::closure))
    }

    pub fn is_bounded(&self) -> bool {
        self.parts.iter().all(Interval::is_bounded)
    }

    pub fn map_affine(&self, slope: &Rational, intercept: &Rational) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().map(|i| i.map_affine(slope, intercept)))
    }

    pub fn map_parts(&self, f: impl FnMut(&Interval) -> Option<Interval>) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().filter_map(f))
    }
}

/// `next` starts no earlier than `cur`; they overlap or share an endpoint
/// that one of them contains.
fn touches(cur: &Interval, next: &Interval) -> bool {
    match (&cur.upper, &next.lower) {
        (None, _) | (_, None) => true,
        (Some(u), Some(l)) => match l.cmp(u) {
            Ordering::Less => true,
            Ordering::Equal => cur.upper_closed || next.lower_closed,
            Ordering::Greater => false,
        },
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.parts.iter()).finish()
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
