//! Candidate self-maps `f: C -> C` of a real interval, given by affine
//! branches per argument class plus isolated point overrides.

pub mod classset;
pub mod interval;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{dist, fmt_rational, ClassTag, QuadExt, Rational};

pub use classset::{ClassFilter, ClassSet};
pub use interval::{Interval, IntervalUnion};

/// `x -> slope*x + intercept` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineExpr {
    pub slope: Rational,
    pub intercept: Rational,
}

impl AffineExpr {
    pub fn new(slope: Rational, intercept: Rational) -> AffineExpr {
        AffineExpr { slope, intercept }
    }

    pub fn identity() -> AffineExpr {
        AffineExpr::new(Rational::one(), Rational::zero())
    }

    pub fn constant(c: Rational) -> AffineExpr {
        AffineExpr::new(Rational::zero(), c)
    }

    pub fn eval(&self, x: &QuadExt) -> QuadExt {
        x.scale(&self.slope) + QuadExt::from(&self.intercept)
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    /// The displacement `f(x) - x` as an affine expression.
    pub fn displacement(&self) -> AffineExpr {
        AffineExpr::new(&self.slope - Rational::one(), self.intercept.clone())
    }

    /// Zero of the expression, when the slope is nonzero.
    pub fn root(&self) -> Option<Rational> {
        (!self.slope.is_zero()).then(|| -&self.intercept / &self.slope)
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            return fmt_rational(&self.intercept, f);
        }
        if self.slope == -Rational::one() {
            f.write_str("-x")?;
        } else if self.slope.is_one() {
            f.write_str("x")?;
        } else {
            fmt_rational(&self.slope, f)?;
            f.write_str(" x")?;
        }
        if !self.intercept.is_zero() {
            f.write_str(if self.intercept.is_negative() { " - " } else { " + " })?;
            fmt_rational(&self.intercept.abs(), f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineExpr({self})")
    }
}

/// The branches of `f` over one interval. A piece carrying the same
/// expression for both classes is class-blind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub over: Interval,
    pub rational: Option<AffineExpr>,
    pub irrational: Option<AffineExpr>,
}

impl Piece {
    pub fn all(over: Interval, expr: AffineExpr) -> Piece {
        Piece {
            over,
            rational: Some(expr.clone()),
            irrational: Some(expr),
        }
    }

    pub fn for_class(over: Interval, class: ClassTag, expr: AffineExpr) -> Piece {
        match class {
            ClassTag::RationalPoint => Piece {
                over,
                rational: Some(expr),
                irrational: None,
            },
            ClassTag::IrrationalPoint => Piece {
                over,
                rational: None,
                irrational: Some(expr),
            },
        }
    }

    pub fn branch(&self, class: ClassTag) -> Option<&AffineExpr> {
        match class {
            ClassTag::RationalPoint => self.rational.as_ref(),
            ClassTag::IrrationalPoint => self.irrational.as_ref(),
        }
    }

    pub fn is_class_blind(&self) -> bool {
        self.rational.is_some() && self.rational == self.irrational
    }

    pub fn branches(&self) -> impl Iterator<Item = (ClassTag, &AffineExpr)> {
        ClassTag::BOTH
            .into_iter()
            .filter_map(move |c| self.branch(c).map(|e| (c, e)))
    }
}

/// `f(at) = value`, overriding every piece at that point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointOverride {
    pub at: QuadExt,
    pub value: QuadExt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSpec {
    pub domain: Interval,
    pub pieces: Vec<Piece>,
    pub overrides: Vec<PointOverride>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A piece or override without usable content.
    Malformed,
    OutsideDomain,
    Coverage,
    Overlap,
    SelfMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub piece: Option<usize>,
    pub override_index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// One branch together with the exact set of arguments it is responsible
/// for.
#[derive(Debug, Clone)]
pub struct BranchDomain<'a> {
    pub piece: usize,
    pub class: ClassTag,
    pub expr: &'a AffineExpr,
    pub args: ClassSet,
}

/// A piece of the breakpoint decomposition of `C`: either a single
/// breakpoint with its value, or an open gap between consecutive
/// breakpoints on which each class follows one affine branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Point {
        at: QuadExt,
        value: QuadExt,
    },
    Open {
        lower: Option<QuadExt>,
        upper: Option<QuadExt>,
        rational: AffineExpr,
        irrational: AffineExpr,
    },
}

impl Cell {
    pub fn formula(&self, class: ClassTag) -> Option<&AffineExpr> {
        match self {
            Cell::Point { .. } => None,
            Cell::Open {
                rational, irrational, ..
            } => Some(match class {
                ClassTag::RationalPoint => rational,
                ClassTag::IrrationalPoint => irrational,
            }),
        }
    }

    /// The open interval of an `Open` cell.
    pub fn span(&self) -> Option<Interval> {
        match self {
            Cell::Point { .. } => None,
            Cell::Open { lower, upper, .. } => Interval::try_new(lower.clone(), false, upper.clone(), false),
        }
    }

    /// Distinct (class, formula) pairs of an open cell; one entry when both
    /// classes share a formula.
    pub fn distinct_formulas(&self) -> Vec<(ClassTag, &AffineExpr)> {
        match self {
            Cell::Point { .. } => Vec::new(),
            Cell::Open {
                rational, irrational, ..
            } => {
                if rational == irrational {
                    vec![(ClassTag::RationalPoint, rational)]
                } else {
                    vec![(ClassTag::RationalPoint, rational), (ClassTag::IrrationalPoint, irrational)]
                }
            }
        }
    }
}

/// Exact infimum of the residual over `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfResidual {
    pub value: QuadExt,
    pub attained: bool,
    #[serde(rename = "where")]
    pub at: Option<QuadExt>,
}

impl MappingSpec {
    pub fn new(domain: Interval, pieces: Vec<Piece>, overrides: Vec<PointOverride>, label: impl Into<String>) -> Self {
        MappingSpec {
            domain,
            pieces,
            overrides,
            label: label.into(),
        }
    }

    pub fn domain_set(&self) -> ClassSet {
        ClassSet::interval(self.domain.clone())
    }

    pub fn override_points(&self) -> ClassSet {
        ClassSet::points(self.overrides.iter().map(|o| o.at.clone()))
    }

    fn override_at(&self, x: &QuadExt) -> Option<&PointOverride> {
        self.overrides.iter().find(|o| &o.at == x)
    }

    /// Every branch with the arguments it governs: its class within the
    /// piece interval, restricted to `C`, minus overridden points.
    pub fn branch_domains(&self) -> Vec<BranchDomain<'_>> {
        let removed = self.override_points();
        let mut out = Vec::new();
        for (k, piece) in self.pieces.iter().enumerate() {
            let Some(span) = piece.over.intersect(&self.domain) else {
                continue;
            };
            for (class, expr) in piece.branches() {
                out.push(BranchDomain {
                    piece: k,
                    class,
                    expr,
                    args: ClassSet::of_class(span.clone(), class).difference(&removed),
                });
            }
        }
        out
    }

    /// Well-formedness: coverage of every point of every class exactly once,
    /// and the self-map property. Violations are reported, not raised.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let domain = self.domain_set();
        let removed = self.override_points();

        for (k, piece) in self.pieces.iter().enumerate() {
            if piece.rational.is_none() && piece.irrational.is_none() {
                out.push(Violation {
                    kind: ViolationKind::Malformed,
                    piece: Some(k),
                    override_index: None,
                    message: format!("piece {} over {} has no branch", k + 1, piece.over),
                });
            }
            if !ClassSet::interval(piece.over.clone()).is_subset(&domain) {
                out.push(Violation {
                    kind: ViolationKind::OutsideDomain,
                    piece: Some(k),
                    override_index: None,
                    message: format!("piece interval {} is not contained in the domain {}", piece.over, self.domain),
                });
            }
        }

        for (k, o) in self.overrides.iter().enumerate() {
            if !self.domain.contains(&o.at) {
                out.push(Violation {
                    kind: ViolationKind::OutsideDomain,
                    piece: None,
                    override_index: Some(k),
                    message: format!("override point {} lies outside the domain {}", o.at, self.domain),
                });
            } else if !self.domain.contains(&o.value) {
                out.push(Violation {
                    kind: ViolationKind::SelfMap,
                    piece: None,
                    override_index: Some(k),
                    message: format!(
                        "self-map violated at x = {} (f(x) = {} lies outside {})",
                        o.at, o.value, self.domain
                    ),
                });
            }
            if self.overrides[..k].iter().any(|p| p.at == o.at) {
                out.push(Violation {
                    kind: ViolationKind::Malformed,
                    piece: None,
                    override_index: Some(k),
                    message: format!("point {} is overridden more than once", o.at),
                });
            }
        }

        for class in ClassTag::BOTH {
            let owned: Vec<(usize, ClassSet)> = self
                .pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| p.branch(class).is_some())
                .map(|(k, p)| (k, ClassSet::of_class(p.over.clone(), class).difference(&removed)))
                .collect();
            for (x, (i, si)) in owned.iter().enumerate() {
                for (j, sj) in &owned[x + 1..] {
                    let both = si.intersection(sj);
                    if !both.is_empty() {
                        out.push(Violation {
                            kind: ViolationKind::Overlap,
                            piece: Some(*j),
                            override_index: None,
                            message: format!(
                                "pieces {} and {} both define {} points of {}",
                                i + 1,
                                j + 1,
                                class,
                                both.part(class)
                            ),
                        });
                    }
                }
            }
            let covered = owned.iter().fold(removed.clone(), |acc, (_, s)| acc.union(s));
            let holes = ClassSet::of_class(self.domain.clone(), class).difference(&covered);
            if !holes.is_empty() {
                out.push(Violation {
                    kind: ViolationKind::Coverage,
                    piece: None,
                    override_index: None,
                    message: format!("{} points of {} have no branch", class, holes.part(class)),
                });
            }
        }

        let mut escaped_pieces = Vec::new();
        for b in self.branch_domains() {
            if b.args.is_empty() || escaped_pieces.contains(&b.piece) {
                continue;
            }
            let escaped = branch_image(&b).difference(&domain);
            if let Some(y) = escaped.sample_point() {
                escaped_pieces.push(b.piece);
                let x = match b.expr.root_of_value(&y) {
                    Some(x) => x,
                    None => b.args.sample_point().expect("nonempty branch domain"),
                };
                out.push(Violation {
                    kind: ViolationKind::SelfMap,
                    piece: Some(b.piece),
                    override_index: None,
                    message: format!(
                        "self-map violated at x = {x} (f(x) = {y} lies outside {})",
                        self.domain
                    ),
                });
            }
        }
        out
    }

    /// `f(x)`: the override at `x` if any, else the branch of the covering
    /// piece that matches the class of `x`.
    pub fn evaluate(&self, x: &QuadExt) -> Result<QuadExt> {
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain(x.clone()));
        }
        if let Some(o) = self.override_at(x) {
            return Ok(o.value.clone());
        }
        let class = x.class();
        self.pieces
            .iter()
            .filter(|p| p.over.contains(x))
            .find_map(|p| p.branch(class))
            .map(|e| e.eval(x))
            .ok_or_else(|| Error::NoBranch(x.clone()))
    }

    /// The exact image `f(C)`.
    pub fn image(&self) -> ClassSet {
        let from_branches = self
            .branch_domains()
            .iter()
            .fold(ClassSet::empty(), |acc, b| acc.union(&branch_image(b)));
        from_branches.union(&ClassSet::points(
            self.overrides
                .iter()
                .filter(|o| self.domain.contains(&o.at))
                .map(|o| o.value.clone()),
        ))
    }

    /// `d(f(x), x)`.
    pub fn residual(&self, x: &QuadExt) -> Result<QuadExt> {
        Ok(dist(&self.evaluate(x)?, x))
    }

    /// The exact fixed-point set. It is finite unless some branch is the
    /// identity on a nondegenerate interval.
    pub fn fixed_points(&self) -> ClassSet {
        let mut out = ClassSet::empty();
        for b in self.branch_domains() {
            let disp = b.expr.displacement();
            match disp.root() {
                Some(r) => {
                    let r = QuadExt::from(r);
                    if b.args.contains(&r) {
                        out = out.union(&ClassSet::point(r));
                    }
                }
                None if disp.intercept.is_zero() => out = out.union(&b.args),
                None => {}
            }
        }
        for o in &self.overrides {
            if o.at == o.value && self.domain.contains(&o.at) {
                out = out.union(&ClassSet::point(o.at.clone()));
            }
        }
        out
    }

    /// Sorted breakpoints inside `C`: finite domain and piece endpoints plus
    /// override points.
    pub fn breakpoints(&self) -> Vec<QuadExt> {
        let mut pts: Vec<QuadExt> = self
            .domain
            .lower()
            .into_iter()
            .chain(self.domain.upper())
            .chain(self.pieces.iter().flat_map(|p| p.over.lower().into_iter().chain(p.over.upper())))
            .chain(self.overrides.iter().map(|o| &o.at))
            .filter(|p| self.domain.closure().contains(p))
            .cloned()
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Decomposition of `C` into breakpoint cells, in ascending order.
    /// Requires a valid spec.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let bps = self.breakpoints();
        let mut cells = Vec::new();
        let mut prev: Option<QuadExt> = None;
        let mut at_start = true;
        let push_gap = |lo: Option<QuadExt>, hi: Option<QuadExt>, cells: &mut Vec<Cell>| -> Result<()> {
            let Some(span) = Interval::try_new(lo.clone(), false, hi.clone(), false) else {
                return Ok(());
            };
            if !self.domain.contains_interval(&span) {
                return Ok(());
            }
            let mut formulas = Vec::with_capacity(2);
            for class in ClassTag::BOTH {
                let probe = classset::point_of_class_between(lo.as_ref(), hi.as_ref(), class);
                let expr = self
                    .pieces
                    .iter()
                    .filter(|p| p.over.contains(&probe))
                    .find_map(|p| p.branch(class))
                    .ok_or_else(|| Error::NoBranch(probe.clone()))?;
                formulas.push(expr.clone());
            }
            let irrational = formulas.pop().unwrap();
            let rational = formulas.pop().unwrap();
            cells.push(Cell::Open {
                lower: lo,
                upper: hi,
                rational,
                irrational,
            });
            Ok(())
        };
        for p in &bps {
            if at_start {
                if self.domain.lower().is_none() {
                    push_gap(None, Some(p.clone()), &mut cells)?;
                }
                at_start = false;
            } else {
                push_gap(prev.clone(), Some(p.clone()), &mut cells)?;
            }
            if self.domain.contains(p) {
                cells.push(Cell::Point {
                    at: p.clone(),
                    value: self.evaluate(p)?,
                });
            }
            prev = Some(p.clone());
        }
        if bps.is_empty() {
            push_gap(None, None, &mut cells)?;
        } else if self.domain.upper().is_none() {
            push_gap(prev, None, &mut cells)?;
        }
        Ok(cells)
    }

    /// Exact infimum of the residual, whether it is attained, and the
    /// smallest attaining point found.
    pub fn inf_residual(&self) -> Result<InfResidual> {
        // (value, attaining point)
        let mut candidates: Vec<(QuadExt, Option<QuadExt>)> = Vec::new();
        for cell in self.cells()? {
            match &cell {
                Cell::Point { at, value } => candidates.push((dist(value, at), Some(at.clone()))),
                Cell::Open { lower, upper, .. } => {
                    for (class, expr) in cell.distinct_formulas() {
                        let classes: &[ClassTag] = if cell.distinct_formulas().len() == 1 {
                            &ClassTag::BOTH
                        } else {
                            std::slice::from_ref(&class)
                        };
                        candidates.push(open_cell_inf(expr, lower.as_ref(), upper.as_ref(), classes));
                    }
                }
            }
        }
        let value = candidates
            .iter()
            .map(|(v, _)| v.clone())
            .min()
            .ok_or_else(|| Error::InvalidArgument("empty domain".into()))?;
        let at = candidates
            .iter()
            .filter(|(v, w)| v == &value && w.is_some())
            .filter_map(|(_, w)| w.clone())
            .min();
        Ok(InfResidual {
            attained: at.is_some(),
            value,
            at,
        })
    }
}

impl AffineExpr {
    /// The argument mapped to `y`, when the slope is nonzero.
    pub fn root_of_value(&self, y: &QuadExt) -> Option<QuadExt> {
        if self.slope.is_zero() {
            return None;
        }
        Some((y - QuadExt::from(&self.intercept)).scale(&self.slope.recip()))
    }
}

fn branch_image(b: &BranchDomain<'_>) -> ClassSet {
    if b.args.is_empty() {
        return ClassSet::empty();
    }
    if b.expr.is_constant() {
        ClassSet::point(QuadExt::from(&b.expr.intercept))
    } else {
        b.args.map_affine(&b.expr.slope, &b.expr.intercept)
    }
}

/// Infimum of `|expr(x) - x|` over the points of `classes` in the open
/// interval `(lo, hi)`, with an attaining point when there is one.
fn open_cell_inf(
    expr: &AffineExpr,
    lo: Option<&QuadExt>,
    hi: Option<&QuadExt>,
    classes: &[ClassTag],
) -> (QuadExt, Option<QuadExt>) {
    let disp = expr.displacement();
    match disp.root() {
        None => {
            let class = classes[0];
            let at = classset::point_of_class_between(lo, hi, class);
            (QuadExt::from(disp.intercept.abs()), Some(at))
        }
        Some(r) => {
            let r = QuadExt::from(r);
            let inside = lo.is_none_or(|l| &r > l) && hi.is_none_or(|h| &r < h);
            if inside {
                let at = classes.contains(&ClassTag::RationalPoint).then_some(r);
                (QuadExt::zero(), at)
            } else {
                let v = lo
                    .into_iter()
                    .chain(hi)
                    .map(|e| disp.eval(e).abs())
                    .min()
                    .expect("a root outside the cell leaves a finite endpoint");
                (v, None)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn n(v: i64) -> QuadExt {
        QuadExt::from_int(v)
    }

    fn identity01() -> MappingSpec {
        MappingSpec::new(
            Interval::closed(n(0), n(1)),
            vec![Piece::all(Interval::closed(n(0), n(1)), AffineExpr::identity())],
            vec![],
            "id",
        )
    }

    #[test]
    fn affine_display() {
        assert_eq!(AffineExpr::new(rat(-5, 3), rat(10, 1)).to_string(), "-5/3 x + 10");
        assert_eq!(AffineExpr::new(rat(1, 1), rat(-2, 1)).to_string(), "x - 2");
        assert_eq!(AffineExpr::new(rat(-1, 1), rat(0, 1)).to_string(), "-x");
        assert_eq!(AffineExpr::constant(rat(5, 1)).to_string(), "5");
    }

    #[test]
    fn identity_map_basics() {
        let id = identity01();
        assert!(id.validate().is_empty());
        assert_eq!(id.image(), ClassSet::interval(Interval::closed(n(0), n(1))));
        assert_eq!(id.fixed_points(), ClassSet::interval(Interval::closed(n(0), n(1))));
        assert_eq!(id.fixed_points().finite_points(), None);
        let inf = id.inf_residual().unwrap();
        assert!(inf.value.is_zero() && inf.attained);
    }

    #[test]
    fn escaping_image_is_reported() {
        let spec = MappingSpec::new(
            Interval::closed(n(0), n(10)),
            vec![Piece::all(Interval::closed(n(0), n(10)), AffineExpr::constant(rat(12, 1)))],
            vec![],
            "escape",
        );
        let v = spec.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::SelfMap);
    }

    #[test]
    fn out_of_domain_evaluation() {
        assert_eq!(identity01().evaluate(&n(2)), Err(Error::OutOfDomain(n(2))));
    }

    #[test]
    fn cells_of_unbounded_domain() {
        let spec = MappingSpec::new(
            Interval::real_line(),
            vec![Piece::all(Interval::real_line(), AffineExpr::new(rat(1, 1), rat(-1, 1)))],
            vec![],
            "shift",
        );
        let cells = spec.cells().unwrap();
        assert_eq!(cells.len(), 1);
        assert!(spec.fixed_points().is_empty());
        let inf = spec.inf_residual().unwrap();
        assert_eq!(inf.value, n(1));
        assert!(inf.attained);
    }
}
