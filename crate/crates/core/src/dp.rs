//! Shared machinery for the grammar passes: dense per-variable tables, an
//! orientation-aware view of the grammar, and boundary windows.
//!
//! Every left-side quantity is computed by running the right-side pass on the
//! mirrored grammar (children swapped, contexts reversed). Tables built that
//! way store positions in mirrored coordinates; for a variable of length `L`
//! a character position `p` maps to `L - p + 1` and a gram start `p` maps to
//! `L - p - q + 2`.

use crate::slp::{Meta, Slp, Symbol};
use crate::textalg::find_all;

pub(crate) const ABSENT: u64 = u64::MAX;

/// `n x width` table of positions or counts, indexed by 1-based variable and
/// 1-based offset.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    width: usize,
    cells: Vec<u64>,
}

impl Grid {
    pub(crate) fn new(n: usize, width: usize) -> Grid {
        Grid {
            width,
            cells: vec![ABSENT; n * width],
        }
    }

    pub(crate) fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn entries(&self) -> usize {
        self.cells.len()
    }

    fn slot(&self, var: usize, j: u64) -> Option<usize> {
        if j == 0 || j > self.width as u64 {
            return None;
        }
        Some((var - 1) * self.width + (j - 1) as usize)
    }

    pub(crate) fn get(&self, var: usize, j: u64) -> Option<u64> {
        self.slot(var, j)
            .map(|s| self.cells[s])
            .filter(|&v| v != ABSENT)
    }

    /// Reads an entry the recurrences guarantee to exist.
    pub(crate) fn must(&self, var: usize, j: u64) -> u64 {
        self.get(var, j)
            .unwrap_or_else(|| panic!("missing table entry for variable {var}, offset {j}"))
    }

    pub(crate) fn set(&mut self, var: usize, j: u64, value: Option<u64>) {
        let slot = self.slot(var, j).expect("offset within table width");
        self.cells[slot] = value.unwrap_or(ABSENT);
    }
}

/// Symbols around the boundary of a pairing rule, `tail(left) ++ head(right)`,
/// with positions reported relative to the rule's own string.
pub(crate) struct Window {
    pub(crate) text: Vec<Symbol>,
    /// Position of `text[0]` within the variable.
    pub(crate) start: u64,
}

impl Window {
    pub(crate) fn occurrences(&self, pattern: &[Symbol]) -> Vec<u64> {
        find_all(&self.text, pattern)
            .into_iter()
            .map(|p| self.start + p as u64 - 1)
            .collect()
    }

    /// The `q` symbols starting at variable position `pos`.
    pub(crate) fn gram(&self, pos: u64, q: usize) -> &[Symbol] {
        let at = (pos - self.start) as usize;
        &self.text[at..at + q]
    }
}

#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    slp: &'a Slp,
    meta: &'a Meta,
    mirrored: bool,
}

impl<'a> View<'a> {
    pub(crate) fn new(slp: &'a Slp, meta: &'a Meta, mirrored: bool) -> View<'a> {
        View {
            slp,
            meta,
            mirrored,
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.slp.n()
    }

    pub(crate) fn q(&self) -> u64 {
        self.meta.q() as u64
    }

    pub(crate) fn len(&self, var: usize) -> u64 {
        self.meta.len(var)
    }

    pub(crate) fn children(&self, var: usize) -> Option<(usize, usize)> {
        let (l, r) = self.slp.children(var)?;
        Some(if self.mirrored { (r, l) } else { (l, r) })
    }

    /// The gram of length `q` starting at oriented position `j`, which must
    /// lie within the materialized prefix context.
    pub(crate) fn head_gram(&self, var: usize, j: u64) -> Vec<Symbol> {
        let (from, q) = (j as usize - 1, self.meta.q());
        if self.mirrored {
            let suf = self.meta.suf(var);
            suf[suf.len() - from - q..suf.len() - from]
                .iter()
                .rev()
                .copied()
                .collect()
        } else {
            self.meta.pre(var)[from..from + q].to_vec()
        }
    }

    pub(crate) fn window(&self, var: usize) -> Window {
        let (a, b) = self.children(var).expect("window of a pairing rule");
        let mut text: Vec<Symbol>;
        if self.mirrored {
            // rev(suf(l) ++ pre(r)) with l = b, r = a in oriented terms
            text = self.meta.pre(a).iter().rev().copied().collect();
            text.extend(self.meta.suf(b).iter().rev());
        } else {
            text = self.meta.suf(a).to_vec();
            text.extend_from_slice(self.meta.pre(b));
        }
        let tail = if self.mirrored {
            self.meta.pre(a).len()
        } else {
            self.meta.suf(a).len()
        };
        Window {
            text,
            start: self.len(a) - tail as u64 + 1,
        }
    }
}

/// Follows a chain of overlapping occurrences rightwards from the occurrence
/// at `cur`. Once the chain reaches an occurrence starting in the right child,
/// `jump` supplies the end of its cover relative to the right child.
pub(crate) fn extend_right(
    occ: &[u64],
    mut cur: u64,
    split: u64,
    q: u64,
    jump: impl Fn(u64) -> u64,
) -> u64 {
    loop {
        if cur > split {
            return split + jump(cur - split);
        }
        let idx = occ.partition_point(|&x| x <= cur);
        match occ.get(idx) {
            Some(&next) if next < cur + q => cur = next,
            _ => return cur + q - 1,
        }
    }
}

/// Mirror of [`extend_right`]: once the chain reaches an occurrence lying
/// inside the left child, `jump` receives the anchor offset counted from the
/// left child's end and returns the cover's begin.
pub(crate) fn extend_left(
    occ: &[u64],
    mut cur: u64,
    split: u64,
    q: u64,
    jump: impl Fn(u64) -> u64,
) -> u64 {
    loop {
        if cur + q - 1 <= split {
            return jump(split + 2 - cur - q);
        }
        let idx = occ.partition_point(|&x| x < cur);
        match idx.checked_sub(1).map(|i| occ[i]) {
            Some(prev) if prev + q > cur => cur = prev,
            _ => return cur,
        }
    }
}
