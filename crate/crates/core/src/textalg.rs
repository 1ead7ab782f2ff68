//! Plain-string algorithms. All positions are 1-based.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A chain of overlapping occurrences, from the first start `b` to the last
/// end `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover {
    pub b: u64,
    pub e: u64,
}

impl Cover {
    pub fn new(b: u64, e: u64) -> Cover {
        Cover { b, e }
    }
}

fn failure_function<T: Eq>(pattern: &[T]) -> Vec<usize> {
    let mut fail = vec![0; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// KMP scan without argument checks; `pattern` must be non-empty.
pub(crate) fn find_all<T: Eq>(text: &[T], pattern: &[T]) -> Vec<usize> {
    debug_assert!(!pattern.is_empty());
    let fail = failure_function(pattern);
    let mut out = Vec::new();
    let mut k = 0;
    for (i, c) in text.iter().enumerate() {
        while k > 0 && *c != pattern[k] {
            k = fail[k - 1];
        }
        if *c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            out.push(i + 2 - k);
            k = fail[k - 1];
        }
    }
    out
}

/// All start positions of `pattern` in `text`, ascending.
pub fn kmp_occurrences<T: Eq>(text: &[T], pattern: &[T]) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(find_all(text, pattern))
}

/// Longest overlapping cover of the q-gram starting at `j`.
pub fn loc_plain<T: Eq>(text: &[T], q: usize, j: usize) -> Result<Cover> {
    if q == 0 {
        return Err(Error::InvalidQ { q, min: 1 });
    }
    if j == 0 || j + q - 1 > text.len() {
        return Err(Error::PositionOutOfRange {
            position: j as u64,
            lo: 1,
            hi: (text.len() + 1).saturating_sub(q) as u64,
        });
    }
    let occ = find_all(text, &text[j - 1..j - 1 + q]);
    let at = occ
        .binary_search(&j)
        .expect("the gram occurs at its own position");
    let mut lo = at;
    while lo > 0 && occ[lo] - occ[lo - 1] < q {
        lo -= 1;
    }
    let mut hi = at;
    while hi + 1 < occ.len() && occ[hi + 1] - occ[hi] < q {
        hi += 1;
    }
    Ok(Cover::new(occ[lo] as u64, (occ[hi] + q - 1) as u64))
}

/// Left-priority non-overlapping occurrences: repeatedly take the leftmost
/// occurrence that starts after the previous one ends.
pub fn lnocc_greedy<T: Eq>(text: &[T], pattern: &[T]) -> Result<Vec<usize>> {
    let occ = kmp_occurrences(text, pattern)?;
    Ok(greedy_left(&occ, pattern.len()))
}

/// Right-priority non-overlapping occurrences, ascending.
pub fn rnocc_greedy<T: Eq>(text: &[T], pattern: &[T]) -> Result<Vec<usize>> {
    let occ = kmp_occurrences(text, pattern)?;
    Ok(greedy_right(&occ, pattern.len()))
}

pub(crate) fn greedy_left(occ: &[usize], m: usize) -> Vec<usize> {
    let mut picks: Vec<usize> = Vec::new();
    for &k in occ {
        if picks.last().is_none_or(|&p| k >= p + m) {
            picks.push(k);
        }
    }
    picks
}

pub(crate) fn greedy_right(occ: &[usize], m: usize) -> Vec<usize> {
    let mut picks: Vec<usize> = Vec::new();
    for &k in occ.iter().rev() {
        if picks.last().is_none_or(|&p| k + m <= p) {
            picks.push(k);
        }
    }
    picks.reverse();
    picks
}

/// Suffix array (1-based starts) by prefix doubling.
pub fn suffix_array<T: Ord>(text: &[T]) -> Result<Vec<usize>> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_by(|&a, &b| text[a].cmp(&text[b]));
    let mut rank = vec![0usize; n];
    for w in 1..n {
        rank[sa[w]] = rank[sa[w - 1]] + usize::from(text[sa[w]] != text[sa[w - 1]]);
    }
    let mut next = vec![0usize; n];
    let mut k = 1;
    while rank[sa[n - 1]] + 1 < n {
        // rank 0 is reserved for "past the end"
        let key = |i: usize| (rank[i] + 1, if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        next[sa[0]] = 0;
        for w in 1..n {
            next[sa[w]] = next[sa[w - 1]] + usize::from(key(sa[w]) != key(sa[w - 1]));
        }
        std::mem::swap(&mut rank, &mut next);
        k *= 2;
    }
    Ok(sa.into_iter().map(|i| i + 1).collect())
}

/// LCP array for a 1-based suffix array (Kasai et al.). `lcp[0]` is 0.
pub fn lcp_array<T: Eq>(text: &[T], sa: &[usize]) -> Result<Vec<usize>> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let n = text.len();
    let mut rank = vec![0usize; n];
    for (r, &s) in sa.iter().enumerate() {
        rank[s - 1] = r;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1] - 1;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    Ok(lcp)
}

/// For every q-gram occurring in `text`, the sum of `weights` over its
/// occurrence starts. Grams whose total is 0 are still listed.
pub fn weighted_qgram_freqs<T: Ord + Clone>(
    text: &[T],
    q: usize,
    weights: &[u64],
) -> Result<BTreeMap<Vec<T>, u64>> {
    if q == 0 {
        return Err(Error::InvalidQ { q, min: 1 });
    }
    if weights.len() != text.len() {
        return Err(Error::WeightLength {
            weights: weights.len(),
            text: text.len(),
        });
    }
    let mut out = BTreeMap::new();
    if text.len() < q {
        return Ok(out);
    }
    let sa = suffix_array(text)?;
    let lcp = lcp_array(text, &sa)?;
    let n = text.len();
    let mut current: Option<(usize, u64)> = None;
    for (r, &s) in sa.iter().enumerate() {
        if n + 1 - s < q {
            continue;
        }
        let w = weights[s - 1];
        match current.as_mut() {
            Some((_, sum)) if lcp[r] >= q => *sum += w,
            _ => {
                if let Some((start, sum)) = current.take() {
                    out.insert(text[start - 1..start - 1 + q].to_vec(), sum);
                }
                current = Some((s, w));
            }
        }
    }
    if let Some((start, sum)) = current {
        out.insert(text[start - 1..start - 1 + q].to_vec(), sum);
    }
    Ok(out)
}
