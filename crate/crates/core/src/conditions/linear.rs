//! Strict linear systems over Q(sqrt 2) and Fourier-Motzkin elimination.

use crate::exactnum::QuadExt;

/// `coef . v + constant`, read as the constraint `> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Lin {
    pub coef: Vec<QuadExt>,
    pub constant: QuadExt,
}

impl Lin {
    pub fn constant(n: usize, c: QuadExt) -> Lin {
        Lin {
            coef: vec![QuadExt::zero(); n],
            constant: c,
        }
    }

    pub fn var(n: usize, k: usize) -> Lin {
        let mut l = Lin::constant(n, QuadExt::zero());
        l.coef[k] = QuadExt::one();
        l
    }

    pub fn add(&self, other: &Lin) -> Lin {
        Lin {
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn sub(&self, other: &Lin) -> Lin {
        self.add(&other.scale(&QuadExt::from_int(-1)))
    }

    pub fn scale(&self, k: &QuadExt) -> Lin {
        Lin {
            coef: self.coef.iter().map(|a| a * k).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coef.iter().all(QuadExt::is_zero)
    }

    /// Replaces variable `k` by `value`.
    pub fn substitute(&self, k: usize, value: &QuadExt) -> Lin {
        let mut out = self.clone();
        out.constant = &out.constant + &(&out.coef[k] * value);
        out.coef[k] = QuadExt::zero();
        out
    }
}

/// Eliminates variable `k`; `None` when a constant constraint is violated.
pub(crate) fn eliminate(sys: &[Lin], k: usize) -> Option<Vec<Lin>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for c in sys {
        let a = &c.coef[k];
        if a.is_zero() {
            out.push(c.clone());
        } else {
            // normalized so the coefficient of v_k is +1 or -1
            let n = c.scale(&a.abs().recip().expect("nonzero"));
            if a.is_positive() {
                pos.push(n);
            } else {
                neg.push(n);
            }
        }
    }
    for p in &pos {
        for q in &neg {
            let mut s = p.add(q);
            s.coef[k] = QuadExt::zero();
            out.push(s);
        }
    }
    prune(out)
}

/// Drops trivially true constraints; `None` if one is trivially false.
fn prune(sys: Vec<Lin>) -> Option<Vec<Lin>> {
    let mut out = Vec::with_capacity(sys.len());
    for c in sys {
        if c.is_constant() {
            if !c.constant.is_positive() {
                return None;
            }
        } else if !out.contains(&c) {
            out.push(c);
        }
    }
    Some(out)
}

/// Eliminates every variable except `keep` and returns the open interval
/// of feasible values for it, `(None, None)` meaning the whole line.
pub(crate) fn project(sys: &[Lin], keep: usize) -> Option<(Option<QuadExt>, Option<QuadExt>)> {
    let mut cur = prune(sys.to_vec())?;
    let n = sys.first().map_or(0, |c| c.coef.len());
    for k in (0..n).filter(|&k| k != keep) {
        cur = eliminate(&cur, k)?;
    }
    interval_of(&cur, keep)
}

/// Feasible open interval of a system in the single variable `k`.
fn interval_of(sys: &[Lin], k: usize) -> Option<(Option<QuadExt>, Option<QuadExt>)> {
    let mut lo: Option<QuadExt> = None;
    let mut hi: Option<QuadExt> = None;
    for c in sys {
        let a = &c.coef[k];
        if a.is_zero() {
            if !c.constant.is_positive() {
                return None;
            }
            continue;
        }
        let bound = (-&c.constant).checked_div(a).expect("nonzero");
        if a.is_positive() {
            if lo.as_ref().is_none_or(|l| &bound > l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| &bound < h) {
            hi = Some(bound);
        }
    }
    match (&lo, &hi) {
        (Some(l), Some(h)) if l >= h => None,
        _ => Some((lo, hi)),
    }
}

#[cfg(test)]
pub(crate) fn feasible(sys: &[Lin]) -> bool {
    match sys.first() {
        None => true,
        Some(_) => project(sys, 0).is_some(),
    }
}
