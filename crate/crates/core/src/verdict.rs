//! Per-theorem verdicts and the built-in corpus of fourteen examples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::{
    c1_verdict, c2_verdict, check_c3, check_onto, decide_b_exact, falsify_b, prove_b_special, xstar_grid, BKind,
    ConditionVerdict, SearchStrategy, Status, Witness,
};
use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::mapdef;
use crate::mapping::{ClassSet, MappingSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    T1,
    Cor3,
    T3,
    Cor4,
    T5,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [TheoremId::T1, TheoremId::Cor3, TheoremId::T3, TheoremId::Cor4, TheoremId::T5];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T1 => "t1",
            TheoremId::Cor3 => "cor3",
            TheoremId::T3 => "t3",
            TheoremId::Cor4 => "cor4",
            TheoremId::T5 => "t5",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TheoremId::T1 => "Theorem 1",
            TheoremId::Cor3 => "Corollary 3",
            TheoremId::T3 => "Theorem 3",
            TheoremId::Cor4 => "Corollary 4",
            TheoremId::T5 => "Theorem 5",
        }
    }

    /// Hypothesis names in report order.
    pub fn conditions(self) -> &'static [&'static str] {
        match self {
            TheoremId::T1 => &["a", "b1", "c1"],
            TheoremId::Cor3 => &["a", "b1", "compact"],
            TheoremId::T3 => &["a", "b2", "c2"],
            TheoremId::Cor4 => &["a", "b2", "compact"],
            TheoremId::T5 => &["a", "b3", "c3", "compact"],
        }
    }

    fn b_kind(self) -> BKind {
        match self {
            TheoremId::T1 | TheoremId::Cor3 => BKind::B1,
            TheoremId::T3 | TheoremId::Cor4 => BKind::B2,
            TheoremId::T5 => BKind::B3,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<TheoremId> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TheoremOptions {
    pub strategy: SearchStrategy,
    /// Decide b-conditions exactly when the search finds no violation.
    pub exact_b: bool,
    /// Candidate `x*` values for (c1), (c2); the default grid when `None`.
    pub grid: Option<Vec<QuadExt>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub conditions: BTreeMap<String, ConditionVerdict>,
    pub fixed_points: ClassSet,
    /// The fixed points as a list, when there are finitely many.
    pub fixed_point_list: Option<Vec<QuadExt>>,
    pub consistent: bool,
    pub notes: String,
}

impl TheoremVerdict {
    pub fn condition(&self, name: &str) -> Option<&ConditionVerdict> {
        self.conditions.get(name)
    }

    pub fn all_favorable(&self) -> bool {
        self.conditions.values().all(ConditionVerdict::is_favorable)
    }
}

fn b_verdict(kind: BKind, spec: &MappingSpec, options: &TheoremOptions) -> Result<ConditionVerdict> {
    let search = falsify_b(kind, spec, &options.strategy)?;
    if search.status == Status::Falsified {
        return Ok(search);
    }
    if options.exact_b {
        return Ok(decide_b_exact(kind, spec)?.with_stats(search.stats));
    }
    Ok(match prove_b_special(kind, spec)? {
        Some(reason) => ConditionVerdict::proven(reason).with_stats(search.stats),
        None => search,
    })
}

fn compact_verdict(spec: &MappingSpec) -> ConditionVerdict {
    if spec.domain.is_compact() {
        ConditionVerdict::proven(format!("C = {} is compact", spec.domain))
    } else {
        ConditionVerdict::falsified(
            Witness::Set(spec.domain_set()),
            format!("C = {} is not compact", spec.domain),
        )
    }
}

pub fn run_theorem(spec: &MappingSpec, theorem: TheoremId, options: &TheoremOptions) -> Result<TheoremVerdict> {
    let grid = match &options.grid {
        Some(g) => g.clone(),
        None => xstar_grid(spec),
    };
    let mut conditions = BTreeMap::new();
    for &name in theorem.conditions() {
        let v = match name {
            "a" => check_onto(spec),
            "b1" | "b2" | "b3" => b_verdict(theorem.b_kind(), spec, options)?,
            "c1" => c1_verdict(spec, &grid)?,
            "c2" => c2_verdict(spec, &grid)?,
            "c3" => check_c3(spec)?,
            _ => compact_verdict(spec),
        };
        conditions.insert(name.to_string(), v);
    }
    let fixed_points = spec.fixed_points();
    let favorable = conditions.values().all(ConditionVerdict::is_favorable);
    let consistent = !(favorable && fixed_points.is_empty());
    let mut notes = Vec::new();
    if !consistent {
        notes.push(format!("every hypothesis of {theorem} is favorable but f has no fixed point"));
    }
    let searched: Vec<&str> = conditions
        .iter()
        .filter(|(_, v)| v.status == Status::NotFalsified)
        .map(|(k, _)| k.as_str())
        .collect();
    if !searched.is_empty() {
        notes.push(format!(
            "{} not falsified by bounded search (seed {}), not proven",
            searched.join(", "),
            options.strategy.seed
        ));
    }
    Ok(TheoremVerdict {
        theorem,
        fixed_point_list: fixed_points.finite_points(),
        fixed_points,
        consistent,
        conditions,
        notes: notes.join("; "),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Fails,
}

impl Expectation {
    pub fn matches(self, v: &ConditionVerdict) -> bool {
        v.is_favorable() == (self == Expectation::Holds)
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Holds => "holds",
            Expectation::Fails => "fails",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub index: usize,
    pub label: String,
    #[serde(skip)]
    pub source: &'static str,
    #[serde(skip)]
    pub spec: MappingSpec,
    pub theorem: TheoremId,
    pub expected: BTreeMap<String, Expectation>,
    pub expected_fixed_points: Vec<QuadExt>,
    pub deviations: &'static str,
}

const SOURCES: [&str; 14] = [
    include_str!("../corpus/ex01.map"),
    include_str!("../corpus/ex02.map"),
    include_str!("../corpus/ex03.map"),
    include_str!("../corpus/ex04.map"),
    include_str!("../corpus/ex05.map"),
    include_str!("../corpus/ex06.map"),
    include_str!("../corpus/ex07.map"),
    include_str!("../corpus/ex08.map"),
    include_str!("../corpus/ex09.map"),
    include_str!("../corpus/ex10.map"),
    include_str!("../corpus/ex11.map"),
    include_str!("../corpus/ex12.map"),
    include_str!("../corpus/ex13.map"),
    include_str!("../corpus/ex14.map"),
];

/// The `.map` text of corpus entry `n`.
pub fn corpus_source(n: usize) -> Result<&'static str> {
    n.checked_sub(1)
        .and_then(|i| SOURCES.get(i))
        .copied()
        .ok_or(Error::IndexOutOfRange(n))
}

pub fn corpus_entry(n: usize) -> Result<CorpusEntry> {
    use Expectation::{Fails, Holds};
    let source = corpus_source(n)?;
    let spec = mapdef::parse(source)?;
    let (theorem, failing, fixed, deviations): (TheoremId, &[&str], &[i64], &'static str) = match n {
        1 => (
            TheoremId::T1,
            &[],
            &[6],
            "the example describes a family of maps; this is one member: f(0) = 12, f = 0 on (0, 3], f(x) = 2x - 6 beyond",
        ),
        2 => (TheoremId::T1, &[], &[0, 5], ""),
        3 => (TheoremId::T1, &["a"], &[], ""),
        4 => (TheoremId::T1, &["b1"], &[], ""),
        5 => (TheoremId::T1, &["c1"], &[], ""),
        6 => (
            TheoremId::Cor4,
            &[],
            &[0, 10],
            "the example describes a family of maps; this is one member: f = 0 on [0, 5], f(x) = 2x - 10 on (5, 10]",
        ),
        7 => (
            TheoremId::Cor4,
            &[],
            &[0, 10],
            "the example describes a family of maps; this is one member: f(x) = 2x on [0, 5], f = 10 on (5, 10]",
        ),
        8 => (TheoremId::Cor4, &[], &[0, 10], ""),
        9..=11 => (TheoremId::T5, &[], &[5], ""),
        12 => (
            TheoremId::T5,
            &["a"],
            &[],
            "the formula leaves f(10) undefined; f(10) = 4 keeps C = [0, 10]",
        ),
        13 => (TheoremId::T5, &["c3"], &[], ""),
        14 => (TheoremId::T5, &["b3"], &[], ""),
        _ => return Err(Error::IndexOutOfRange(n)),
    };
    let expected = theorem
        .conditions()
        .iter()
        .map(|c| (c.to_string(), if failing.contains(c) { Fails } else { Holds }))
        .collect();
    Ok(CorpusEntry {
        index: n,
        label: spec.label.clone(),
        source,
        spec,
        theorem,
        expected,
        expected_fixed_points: fixed.iter().map(|&v| QuadExt::from_int(v)).collect(),
        deviations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusResult {
    pub entry: CorpusEntry,
    pub verdict: TheoremVerdict,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Whether a verdict agrees with an entry's expectations.
pub fn verdict_matches(entry: &CorpusEntry, verdict: &TheoremVerdict) -> bool {
    let conditions_agree = entry.expected.len() == verdict.conditions.len()
        && entry
            .expected
            .iter()
            .all(|(name, e)| verdict.condition(name).is_some_and(|v| e.matches(v)));
    conditions_agree && verdict.fixed_point_list.as_deref() == Some(entry.expected_fixed_points.as_slice())
}

pub fn run_entry(entry: CorpusEntry, options: &TheoremOptions) -> Result<CorpusResult> {
    let verdict = run_theorem(&entry.spec, entry.theorem, options)?;
    let matches = verdict_matches(&entry, &verdict);
    Ok(CorpusResult {
        entry,
        verdict,
        matches,
    })
}

/// Runs every entry (or the listed ones) in parallel, ordered by index.
pub fn run_corpus(options: &TheoremOptions, only: Option<&[usize]>) -> Result<Vec<CorpusResult>> {
    let indices: Vec<usize> = match only {
        Some(list) => list.to_vec(),
        None => (1..=SOURCES.len()).collect(),
    };
    let entries = indices.iter().map(|&n| corpus_entry(n)).collect::<Result<Vec<_>>>()?;
    entries.into_par_iter().map(|e| run_entry(e, options)).collect()
}
