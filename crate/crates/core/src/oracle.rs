//! Reference counts computed on the expanded text.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pipeline::FreqReport;
use crate::slp::{expand, Slp};
use crate::textalg::find_all;

pub const DEFAULT_LIMIT: u64 = 1_000_000;

/// Most occurrences [`exhaustive_nocc`] accepts.
pub const EXHAUSTIVE_MAX_OCC: usize = 20;

/// Expands the text and counts each q-gram with one left-to-right greedy
/// scan.
pub fn oracle_count(slp: &Slp, q: usize, limit: u64) -> Result<FreqReport> {
    if q == 0 {
        return Err(Error::InvalidQ { q, min: 1 });
    }
    let text = expand(slp, limit)?;
    // gram -> (count, first position free after the last pick)
    let mut seen: HashMap<&[_], (u64, usize)> = HashMap::new();
    for (i, gram) in text.windows(q).enumerate() {
        let slot = seen.entry(gram).or_insert((0, 0));
        if i >= slot.1 {
            slot.0 += 1;
            slot.1 = i + q;
        }
    }
    Ok(FreqReport::new(
        seen.into_iter()
            .map(|(g, (c, _))| (g.to_vec(), c))
            .collect(),
    ))
}

/// Largest set of pairwise non-overlapping occurrences, by enumerating every
/// such set.
pub fn exhaustive_nocc<T: Eq>(text: &[T], pattern: &[T]) -> Result<u64> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let occ = find_all(text, pattern);
    if occ.len() > EXHAUSTIVE_MAX_OCC {
        return Err(Error::TooManyOccurrences(occ.len()));
    }
    fn best(occ: &[usize], m: usize, from: usize, free: usize, size: u64) -> u64 {
        let mut top = size;
        for k in from..occ.len() {
            if occ[k] >= free {
                top = top.max(best(occ, m, k + 1, occ[k] + m, size + 1));
            }
        }
        top
    }
    Ok(best(&occ, pattern.len(), 0, 0, 0))
}

/// Size of the left-priority greedy set.
pub fn greedy_nocc<T: Eq>(text: &[T], pattern: &[T]) -> Result<u64> {
    Ok(crate::textalg::lnocc_greedy(text, pattern)?.len() as u64)
}
