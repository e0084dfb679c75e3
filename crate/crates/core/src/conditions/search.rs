//! Bounded, seeded search for finite subsets violating (b1), (b2), (b3).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bcond::{subset_verdict, subset_violation, Model};
use super::{BKind, ConditionVerdict, SearchStats};
use crate::error::Result;
use crate::exactnum::{rat, QuadExt};
use crate::mapping::MappingSpec;

pub const DEFAULT_SEED: u64 = 0x5eed_2b1f;
pub const DEFAULT_BUDGET: u64 = 1500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchStrategy {
    /// Largest subset size tried.
    pub n_max: usize,
    /// Total number of subsets checked across all sizes.
    pub budget: u64,
    /// Random rationals added to the candidate pool.
    pub random_points: usize,
    pub seed: u64,
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy {
            n_max: 4,
            budget: DEFAULT_BUDGET,
            random_points: 200,
            seed: DEFAULT_SEED,
        }
    }
}

/// Bounded window used for unbounded domains: `[l, l + 20]`,
/// `[u - 20, u]`, or `[-10, 10]`.
pub fn window(spec: &MappingSpec) -> (QuadExt, QuadExt) {
    let width = QuadExt::from_int(20);
    match (spec.domain.lower(), spec.domain.upper()) {
        (Some(l), Some(u)) => (l.clone(), u.clone()),
        (Some(l), None) => (l.clone(), l + &width),
        (None, Some(u)) => (u - &width, u.clone()),
        (None, None) => (QuadExt::from_int(-10), QuadExt::from_int(10)),
    }
}

/// Piece endpoints, their images, midpoints and `+-sqrt2/10` offsets,
/// sorted.
fn base_pool(spec: &MappingSpec) -> Vec<QuadExt> {
    let (wlo, whi) = window(spec);
    let in_c = |p: &QuadExt| spec.domain.contains(p);
    let mut ends: Vec<QuadExt> = spec
        .breakpoints()
        .into_iter()
        .chain([wlo, whi])
        .filter(in_c)
        .collect();
    ends.sort();
    ends.dedup();
    let mut pool: Vec<QuadExt> = ends.clone();
    pool.extend(ends.iter().filter_map(|e| spec.evaluate(e).ok()));
    pool.sort();
    pool.dedup();
    let mids: Vec<QuadExt> = pool.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
    let offset = QuadExt::sqrt2().scale(&rat(1, 10));
    pool.extend(mids);
    pool.extend(ends.iter().flat_map(|e| [e + &offset, e - &offset]));
    pool.retain(in_c);
    pool.sort();
    pool.dedup();
    pool
}

fn random_pool(spec: &MappingSpec, count: usize, rng: &mut ChaCha8Rng, exclude: &[QuadExt]) -> Vec<QuadExt> {
    let (wlo, whi) = window(spec);
    let width = &whi - &wlo;
    let mut out: Vec<QuadExt> = (0..count)
        .map(|_| {
            let k: i64 = rng.gen_range(1..1000);
            &wlo + &width.scale(&rat(k, 1000))
        })
        .filter(|p| spec.domain.contains(p) && exclude.binary_search(p).is_err())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Next lexicographic `k`-combination of `0..n`, in place.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The subsets to check, in canonical order: per size, lexicographic
/// subsets of the base pool, then random subsets of the full pool.
fn plan(base_len: usize, pool_len: usize, strategy: &SearchStrategy, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if strategy.n_max < 2 || strategy.budget == 0 {
        return out;
    }
    let sizes = (2..=strategy.n_max).filter(|&k| k <= pool_len).collect::<Vec<_>>();
    if sizes.is_empty() {
        return out;
    }
    let share = strategy.budget / sizes.len() as u64;
    let extra = strategy.budget % sizes.len() as u64;
    for (pos, &k) in sizes.iter().enumerate() {
        let quota = share + u64::from((pos as u64) < extra);
        let mut taken = 0u64;
        if k <= base_len {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                if taken == quota {
                    break;
                }
                out.push(idx.clone());
                taken += 1;
                if !next_combination(&mut idx, base_len) {
                    break;
                }
            }
        }
        while taken < quota {
            let mut s = sample(rng, pool_len, k).into_vec();
            s.sort_unstable();
            out.push(s);
            taken += 1;
        }
    }
    out
}

/// Searches for a finite subset on which the condition fails. Never
/// returns `Proven`.
pub fn falsify_b(kind: BKind, spec: &MappingSpec, strategy: &SearchStrategy) -> Result<ConditionVerdict> {
    let model = Model::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    let mut pool = base_pool(spec);
    let base_len = pool.len();
    let extra = random_pool(spec, strategy.random_points, &mut rng, &pool);
    pool.extend(extra);
    let values: Vec<QuadExt> = pool.iter().map(|x| spec.evaluate(x)).collect::<Result<_>>()?;
    let subsets = plan(base_len, pool.len(), strategy, &mut rng);

    let pairs_of = |s: &[usize]| {
        let mut v: Vec<(QuadExt, QuadExt)> = s.iter().map(|&i| (pool[i].clone(), values[i].clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    };
    let hit = subsets
        .par_iter()
        .position_first(|s| matches!(subset_violation(kind, &model, &pairs_of(s)), Ok(Some(_))));

    let checked = hit.map_or(subsets.len(), |k| k + 1);
    let mut used: Vec<usize> = subsets[..checked].iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let stats = SearchStats {
        subsets_checked: checked as u64,
        points_tried: used.len() as u64,
    };
    match hit {
        None => Ok(ConditionVerdict::not_falsified(
            stats,
            format!(
                "no violation among {} subsets of size <= {} (seed {})",
                stats.subsets_checked, strategy.n_max, strategy.seed
            ),
        )),
        Some(k) => {
            let pairs = pairs_of(&subsets[k]);
            let points: Vec<QuadExt> = pairs.iter().map(|p| p.0.clone()).collect();
            let v = subset_violation(kind, &model, &pairs)?;
            Ok(subset_verdict(kind, &model, &points, v).with_stats(stats))
        }
    }
}
