//! Grammar construction from raw bytes.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::slp::{Rule, Slp, Symbol};

/// Rules under construction, with identical pairs shared.
#[derive(Default)]
struct Interner {
    rules: Vec<Rule>,
    pairs: HashMap<(usize, usize), usize>,
    terminals: HashMap<u8, usize>,
}

impl Interner {
    fn terminal(&mut self, b: u8) -> usize {
        *self.terminals.entry(b).or_insert_with(|| {
            self.rules.push(Rule::Terminal(Symbol::byte(b)));
            self.rules.len()
        })
    }

    fn pair(&mut self, l: usize, r: usize) -> usize {
        *self.pairs.entry((l, r)).or_insert_with(|| {
            self.rules.push(Rule::Pair(l, r));
            self.rules.len()
        })
    }

    /// Balanced binary tree over `vars`, splitting at the midpoint.
    fn balanced(&mut self, vars: &[usize]) -> usize {
        if vars.len() == 1 {
            return vars[0];
        }
        let (l, r) = vars.split_at(vars.len() / 2);
        let (l, r) = (self.balanced(l), self.balanced(r));
        self.pair(l, r)
    }

    fn finish(self, root: usize) -> Result<Slp> {
        Slp::new(self.rules, root)
    }
}

/// Recursive halving with shared identical subtrees.
pub fn build_balanced(text: &[u8]) -> Result<Slp> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut it = Interner::default();
    let leaves: Vec<usize> = text.iter().map(|&b| it.terminal(b)).collect();
    let root = it.balanced(&leaves);
    it.finish(root)
}

const GONE: usize = usize::MAX;

/// Re-Pair: repeatedly replaces the most frequent adjacent pair (ties go to
/// the smaller pair) until no pair occurs twice, then builds a balanced tree
/// over what is left.
pub fn build_pairs(text: &[u8]) -> Result<Slp> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut it = Interner::default();
    // symbols are rule indices; terminals get theirs in byte order so that
    // ties between pairs follow symbol codes
    let mut present = [false; 256];
    for &b in text {
        present[b as usize] = true;
    }
    for b in 0..=255u8 {
        if present[b as usize] {
            it.terminal(b);
        }
    }
    let mut seq: Vec<usize> = text.iter().map(|&b| it.terminal(b)).collect();
    let n = seq.len();
    let mut next: Vec<usize> = (1..=n).collect();
    let mut prev: Vec<usize> = (0..n).map(|i| i.wrapping_sub(1)).collect();
    next[n - 1] = GONE;
    prev[0] = GONE;

    type Pair = (usize, usize);
    let mut count: HashMap<Pair, u64> = HashMap::new();
    let mut occ: HashMap<Pair, Vec<usize>> = HashMap::new();
    for i in 0..n - 1 {
        let p = (seq[i], seq[i + 1]);
        *count.entry(p).or_default() += 1;
        occ.entry(p).or_default().push(i);
    }
    let mut heap: BinaryHeap<(u64, Reverse<Pair>)> =
        count.iter().map(|(&p, &c)| (c, Reverse(p))).collect();

    fn bump(
        count: &mut HashMap<Pair, u64>,
        heap: &mut BinaryHeap<(u64, Reverse<Pair>)>,
        p: Pair,
        up: bool,
    ) {
        let c = count.entry(p).or_default();
        *c = if up { *c + 1 } else { c.saturating_sub(1) };
        if *c > 0 {
            heap.push((*c, Reverse(p)));
        }
    }

    while let Some((c, Reverse(pair))) = heap.pop() {
        if count.get(&pair) != Some(&c) {
            continue;
        }
        if c < 2 {
            break;
        }
        let mut at = occ.remove(&pair).unwrap_or_default();
        at.sort_unstable();
        at.dedup();
        let live = |i: usize, seq: &[usize], next: &[usize]| {
            seq[i] == pair.0 && next[i] != GONE && seq[next[i]] == pair.1
        };
        // overlapping occurrences in runs cannot all be replaced
        let mut usable = Vec::with_capacity(at.len());
        let mut blocked = GONE;
        for &i in &at {
            if i != blocked && live(i, &seq, &next) {
                usable.push(i);
                blocked = next[i];
            }
        }
        if (usable.len() as u64) < c {
            count.insert(pair, usable.len() as u64);
            if !usable.is_empty() {
                heap.push((usable.len() as u64, Reverse(pair)));
                occ.insert(pair, usable);
            }
            continue;
        }
        let z = it.pair(pair.0, pair.1);
        for i in usable {
            if !live(i, &seq, &next) {
                continue;
            }
            let j = next[i];
            let (before, after) = (prev[i], next[j]);
            bump(&mut count, &mut heap, pair, false);
            if before != GONE {
                bump(&mut count, &mut heap, (seq[before], pair.0), false);
            }
            if after != GONE {
                bump(&mut count, &mut heap, (pair.1, seq[after]), false);
            }
            seq[i] = z;
            seq[j] = GONE;
            next[i] = after;
            if after != GONE {
                prev[after] = i;
            }
            if before != GONE {
                let p = (seq[before], z);
                bump(&mut count, &mut heap, p, true);
                occ.entry(p).or_default().push(before);
            }
            if after != GONE {
                let p = (z, seq[after]);
                bump(&mut count, &mut heap, p, true);
                occ.entry(p).or_default().push(i);
            }
        }
    }

    let mut rest = Vec::new();
    let mut i = 0;
    while i != GONE {
        rest.push(seq[i]);
        i = next[i];
    }
    let root = it.balanced(&rest);
    it.finish(root)
}

/// Fibonacci words: `X1 = a`, `X2 = b`, `Xi = X(i-1) X(i-2)`, rooted at `Xn`.
pub fn fibonacci(n: usize) -> Result<Slp> {
    if n < 2 {
        return Err(Error::InvalidGrammar(format!(
            "fibonacci needs n >= 2, got {n}"
        )));
    }
    let mut rules = vec![
        Rule::Terminal(Symbol::byte(b'a')),
        Rule::Terminal(Symbol::byte(b'b')),
    ];
    for i in 3..=n {
        rules.push(Rule::Pair(i - 1, i - 2));
    }
    Slp::new(rules, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slp::{expand, symbols};

    fn roundtrip(slp: &Slp, text: &[u8]) {
        assert_eq!(expand(slp, u64::MAX).unwrap(), symbols(text));
    }

    #[test]
    fn balanced_examples() {
        let slp = build_balanced(b"a").unwrap();
        assert_eq!(slp.n(), 1);
        roundtrip(&slp, b"a");
        let slp = build_balanced(b"aababaababaab").unwrap();
        roundtrip(&slp, b"aababaababaab");
        // a^8 needs one rule per level
        assert_eq!(build_balanced(b"aaaaaaaa").unwrap().n(), 4);
        assert_eq!(build_balanced(b""), Err(Error::EmptyText));
    }

    #[test]
    fn pairs_examples() {
        let slp = build_pairs(b"abab").unwrap();
        assert_eq!(
            slp.rules(),
            &[
                Rule::Terminal(Symbol::byte(b'a')),
                Rule::Terminal(Symbol::byte(b'b')),
                Rule::Pair(1, 2),
                Rule::Pair(3, 3)
            ]
        );
        for text in [
            &b"aaaaaaa"[..],
            b"abcabcabcab",
            b"x",
            b"xy",
            b"mississippi",
            b"aababaababaab",
        ] {
            roundtrip(&build_pairs(text).unwrap(), text);
        }
        assert_eq!(build_pairs(b""), Err(Error::EmptyText));
    }

    #[test]
    fn fibonacci_lengths() {
        assert_eq!(fibonacci(30).unwrap().text_len(), 832_040);
        assert_eq!(fibonacci(60).unwrap().text_len(), 1_548_008_755_920);
        roundtrip(&fibonacci(6).unwrap(), b"babbabab");
    }
}
