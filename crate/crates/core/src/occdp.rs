//! Greedy non-overlapping occurrences inside covers, computed over the
//! grammar.
//!
//! For a right cover `(j, be)` of variable `X` the greedy left-priority pass
//! over `X[j:be]` is summarized by its size and its two largest picks; the
//! smallest right-priority pick is kept for `j < q`. Left covers get the
//! mirrored quantities. Together these let [`nocc_in_crossing_cover`] count a
//! cover spanning a boundary from the children's tables and one `O(q)` window.

use crate::covers::{
    build_left_covers, build_right_covers, check_seam_position, lens, CoverTables, LeftCoverTable,
    RightCoverTable, Seam,
};
use crate::dp::{Grid, View, Window};
use crate::error::{Error, Result};
use crate::slp::{Meta, Slp};
use crate::textalg::Cover;

/// Size and two largest elements of the left-priority set of each cover.
pub(crate) struct GreedyColumns {
    pub(crate) count: Grid,
    pub(crate) max1: Grid,
    pub(crate) max2: Grid,
}

pub(crate) fn greedy_pass(view: View<'_>, ends: &Grid) -> GreedyColumns {
    let q = view.q();
    let width = ends.width();
    let mut count = Grid::new(view.n(), width);
    let mut max1 = Grid::new(view.n(), width);
    let mut max2 = Grid::new(view.n(), width);
    for var in 1..=view.n() {
        let Some((a, b)) = view.children(var) else {
            continue;
        };
        let len = view.len(var);
        if len < q {
            continue;
        }
        let la = view.len(a);
        let mut window: Option<Window> = None;
        for j in 1..=(width as u64).min(len - q + 1) {
            if j > la {
                let k = j - la;
                count.set(var, j, Some(count.must(b, k)));
                max1.set(var, j, Some(la + max1.must(b, k)));
                max2.set(var, j, max2.get(b, k).map(|m| la + m));
                continue;
            }
            let be = ends.must(var, j);
            let (mut n, mut m1, mut m2, after) = if j + q - 1 <= la {
                (
                    count.must(a, j),
                    max1.must(a, j),
                    max2.get(a, j),
                    ends.must(a, j) + 1 - q,
                )
            } else {
                (1, j, None, j)
            };
            if be + 1 - q > after {
                let window = window.get_or_insert_with(|| view.window(var));
                let occ = window.occurrences(&view.head_gram(var, j));
                for &x in occ.iter().filter(|&&x| x > after && x + q - 1 <= be) {
                    if x < m1 + q {
                        continue;
                    }
                    if x > la {
                        // the rest of the greedy run is the right child's
                        let k = x - la;
                        n += count.must(b, k);
                        m2 = Some(max2.get(b, k).map_or(m1, |m| la + m));
                        m1 = la + max1.must(b, k);
                        break;
                    }
                    n += 1;
                    m2 = Some(m1);
                    m1 = x;
                }
            }
            count.set(var, j, Some(n));
            max1.set(var, j, Some(m1));
            max2.set(var, j, m2);
        }
    }
    GreedyColumns { count, max1, max2 }
}

/// Smallest right-priority pick inside each right cover, for `j < q`.
/// `(max1, max2)` come from the greedy pass of the opposite orientation: its
/// two largest left-priority picks are this orientation's two smallest
/// right-priority picks inside left covers.
pub(crate) fn seam_pass(view: View<'_>, ends: &Grid, max1: &Grid, max2: &Grid) -> Grid {
    let q = view.q();
    let width = q - 1;
    let mut minr = Grid::new(view.n(), width as usize);
    for var in 1..=view.n() {
        let Some((a, b)) = view.children(var) else {
            continue;
        };
        let len = view.len(var);
        if len < q {
            continue;
        }
        let la = view.len(a);
        let mut window: Option<Window> = None;
        for j in 1..=width.min(len - q + 1) {
            if j > la {
                minr.set(var, j, Some(la + minr.must(b, j - la)));
                continue;
            }
            let be = ends.must(var, j);
            let last = be + 1 - q;
            if j + q - 1 <= la && be <= la {
                minr.set(var, j, Some(minr.must(a, j)));
                continue;
            }
            let window = window.get_or_insert_with(|| view.window(var));
            let occ = window.occurrences(&view.head_gram(var, j));
            let mut pick = match occ.iter().find(|&&x| x > la && x <= last) {
                Some(&k) => la + minr.must(b, k - la),
                None => last,
            };
            let value = loop {
                let Some(&x) = occ.iter().rev().find(|&&x| x >= j && x + q <= pick) else {
                    break pick;
                };
                if x + q - 1 <= la {
                    // the remaining picks are those of a left cover of `a`,
                    // at most one of which lies before `j`
                    let anchor = la + 2 - x - q;
                    let smallest = la + 2 - q - max1.must(a, anchor);
                    if smallest >= j {
                        break smallest;
                    }
                    break la + 2 - q - max2.must(a, anchor);
                }
                pick = x;
            };
            minr.set(var, j, Some(value));
        }
    }
    minr
}

fn mirrored_gram_start(len: u64, q: u64, p: u64) -> u64 {
    len + 2 - q - p
}

/// Largest and second-largest left-priority picks inside each right cover.
#[derive(Clone, Debug)]
pub struct LnoccExtremes {
    pub(crate) max1: Grid,
    pub(crate) max2: Grid,
}

impl LnoccExtremes {
    /// `(max1, max2)` for the right cover at `j`.
    pub fn get(&self, var: usize, j: u64) -> Option<(u64, Option<u64>)> {
        Some((self.max1.get(var, j)?, self.max2.get(var, j)))
    }
}

/// Smallest and second-smallest right-priority picks inside each left cover.
#[derive(Clone, Debug)]
pub struct RnoccExtremes {
    q: u64,
    lens: Vec<u64>,
    /// Largest left-priority picks of the mirrored grammar.
    pub(crate) max1: Grid,
    pub(crate) max2: Grid,
}

impl RnoccExtremes {
    /// `(min1, min2)` for the left cover at `j`.
    pub fn get(&self, var: usize, j: u64) -> Option<(u64, Option<u64>)> {
        let len = self.lens[var - 1];
        let conv = |p| mirrored_gram_start(len, self.q, p);
        Some((
            conv(self.max1.get(var, j)?),
            self.max2.get(var, j).map(conv),
        ))
    }
}

/// Largest left-priority pick inside each left cover, for `j < q`.
#[derive(Clone, Debug)]
pub struct MaxLnoccInLeftCover {
    q: u64,
    lens: Vec<u64>,
    minr: Grid,
}

impl MaxLnoccInLeftCover {
    pub fn get(&self, var: usize, j: u64) -> Option<u64> {
        let len = self.lens[var - 1];
        self.minr
            .get(var, j)
            .map(|p| mirrored_gram_start(len, self.q, p))
    }
}

/// Smallest right-priority pick inside each right cover, for `j < q`.
#[derive(Clone, Debug)]
pub struct MinRnoccInRightCover {
    minr: Grid,
}

impl MinRnoccInRightCover {
    pub fn get(&self, var: usize, j: u64) -> Option<u64> {
        self.minr.get(var, j)
    }
}

/// Non-overlapping occurrence counts inside one family of covers.
#[derive(Clone, Debug)]
pub struct CoverCounts {
    count: Grid,
}

impl CoverCounts {
    pub fn get(&self, var: usize, j: u64) -> Option<u64> {
        self.count.get(var, j)
    }
}

#[derive(Clone, Debug)]
pub struct ExtremalTable {
    pub lnocc: LnoccExtremes,
    pub rnocc: RnoccExtremes,
    pub max_lnocc_in_left: MaxLnoccInLeftCover,
    pub min_rnocc_in_right: MinRnoccInRightCover,
}

#[derive(Clone, Debug)]
pub struct CoverCountTable {
    /// nOcc inside right covers.
    pub right: CoverCounts,
    /// nOcc inside left covers.
    pub left: CoverCounts,
}

pub fn build_extremal_lnocc(slp: &Slp, meta: &Meta, right: &RightCoverTable) -> LnoccExtremes {
    let cols = greedy_pass(View::new(slp, meta, false), &right.ends);
    LnoccExtremes {
        max1: cols.max1,
        max2: cols.max2,
    }
}

pub fn build_extremal_rnocc(slp: &Slp, meta: &Meta, left: &LeftCoverTable) -> RnoccExtremes {
    let cols = greedy_pass(View::new(slp, meta, true), &left.ends);
    RnoccExtremes {
        q: meta.q() as u64,
        lens: lens(slp),
        max1: cols.max1,
        max2: cols.max2,
    }
}

pub fn build_nocc_right(slp: &Slp, meta: &Meta, right: &RightCoverTable) -> CoverCounts {
    CoverCounts {
        count: greedy_pass(View::new(slp, meta, false), &right.ends).count,
    }
}

pub fn build_nocc_left(slp: &Slp, meta: &Meta, left: &LeftCoverTable) -> CoverCounts {
    CoverCounts {
        count: greedy_pass(View::new(slp, meta, true), &left.ends).count,
    }
}

pub fn build_max_lnocc_in_left_cover(
    slp: &Slp,
    meta: &Meta,
    left: &LeftCoverTable,
    lnocc: &LnoccExtremes,
) -> MaxLnoccInLeftCover {
    let minr = seam_pass(
        View::new(slp, meta, true),
        &left.ends,
        &lnocc.max1,
        &lnocc.max2,
    );
    MaxLnoccInLeftCover {
        q: meta.q() as u64,
        lens: lens(slp),
        minr,
    }
}

pub fn build_min_rnocc_in_right_cover(
    slp: &Slp,
    meta: &Meta,
    right: &RightCoverTable,
    rnocc: &RnoccExtremes,
) -> MinRnoccInRightCover {
    let (max1, max2) = (&rnocc.max1, &rnocc.max2);
    MinRnoccInRightCover {
        minr: seam_pass(View::new(slp, meta, false), &right.ends, max1, max2),
    }
}

/// Every table the counting pipeline needs, for one `q`.
#[derive(Clone, Debug)]
pub struct DpTables {
    q: u64,
    pub covers: CoverTables,
    pub extremal: ExtremalTable,
    pub counts: CoverCountTable,
}

impl DpTables {
    /// Builds all tables; `q` (at least 2) is taken from `meta`.
    pub fn build(slp: &Slp, meta: &Meta) -> Result<DpTables> {
        let right = build_right_covers(slp, meta)?;
        let left = build_left_covers(slp, meta)?;
        let forward = greedy_pass(View::new(slp, meta, false), &right.ends);
        let backward = greedy_pass(View::new(slp, meta, true), &left.ends);
        let q = meta.q() as u64;
        let min_rnocc_in_right = MinRnoccInRightCover {
            minr: seam_pass(
                View::new(slp, meta, false),
                &right.ends,
                &backward.max1,
                &backward.max2,
            ),
        };
        let max_lnocc_in_left = MaxLnoccInLeftCover {
            q,
            lens: lens(slp),
            minr: seam_pass(
                View::new(slp, meta, true),
                &left.ends,
                &forward.max1,
                &forward.max2,
            ),
        };
        let counts = CoverCountTable {
            right: CoverCounts {
                count: forward.count,
            },
            left: CoverCounts {
                count: backward.count,
            },
        };
        let extremal = ExtremalTable {
            lnocc: LnoccExtremes {
                max1: forward.max1,
                max2: forward.max2,
            },
            rnocc: RnoccExtremes {
                q,
                lens: lens(slp),
                max1: backward.max1,
                max2: backward.max2,
            },
            max_lnocc_in_left,
            min_rnocc_in_right,
        };
        Ok(DpTables {
            q,
            covers: CoverTables { right, left },
            extremal,
            counts,
        })
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    /// Number of table cells held, for footprint checks.
    pub fn entry_count(&self) -> usize {
        let e = &self.extremal;
        [
            &self.covers.right.ends,
            &self.covers.left.ends,
            &e.lnocc.max1,
            &e.lnocc.max2,
            &e.rnocc.max1,
            &e.rnocc.max2,
            &e.max_lnocc_in_left.minr,
            &e.min_rnocc_in_right.minr,
            &self.counts.right.count,
            &self.counts.left.count,
        ]
        .iter()
        .map(|g| g.entries())
        .sum()
    }

    /// Full cover of the gram at `j` together with its non-overlapping count.
    pub(crate) fn seam_entry(&self, seam: &Seam, j: u64) -> (Cover, u64) {
        let occ = seam.occurrences(j);
        let cover = seam.cover(&occ, j, &self.covers.right, &self.covers.left);
        (cover, self.count_in_cover(seam, &occ, cover))
    }

    fn count_in_cover(&self, seam: &Seam, occ: &[u64], cover: Cover) -> u64 {
        let (q, split) = (self.q, seam.split);
        let (a, b) = (seam.left, seam.right);
        let right_count = &self.counts.right.count;
        let left_count = &self.counts.left.count;
        if cover.e <= split {
            return left_count.must(a, split + 1 - cover.e);
        }
        if cover.b > split {
            return right_count.must(b, cover.b - split);
        }
        let last = cover.e + 1 - q;
        let chain = || occ.iter().copied().filter(|&x| x >= cover.b && x <= last);

        // part inside `a`: a left cover of `a`, counted left to right
        let (left_n, u1) = match chain().rfind(|&x| x + q - 1 <= split) {
            Some(x) => {
                let anchor = split + 2 - x - q;
                let max_lnocc =
                    split + 2 - q - self.extremal.max_lnocc_in_left.minr.must(a, anchor);
                (left_count.must(a, anchor), max_lnocc + q - 1)
            }
            None => (0, cover.b - 1),
        };
        // part inside `b`: a right cover of `b`, counted right to left
        let (right_n, u2) = match chain().find(|&x| x > split) {
            Some(x) => {
                let k = x - split;
                let min_rnocc = split + self.extremal.min_rnocc_in_right.minr.must(b, k);
                (right_count.must(b, k), min_rnocc)
            }
            None => (0, cover.e + 1),
        };
        let mut middle = 0;
        let mut free_from = u1 + 1;
        for x in chain().filter(|&x| x > u1 && x + q <= u2) {
            if x >= free_from {
                middle += 1;
                free_from = x + q;
            }
        }
        left_n + middle + right_n
    }
}

/// `nOcc(X[b:e], s)` for the full cover `(b, e)` of the gram `s` at `j` in
/// `var`, for `j` in the seam range.
pub fn nocc_in_crossing_cover(
    slp: &Slp,
    meta: &Meta,
    tables: &DpTables,
    var: usize,
    j: u64,
) -> Result<u64> {
    if meta.q() as u64 != tables.q {
        return Err(Error::InvalidQ {
            q: meta.q(),
            min: tables.q(),
        });
    }
    let seam = Seam::new(slp, meta, var)?;
    check_seam_position(slp, var, tables.q, j)?;
    Ok(tables.seam_entry(&seam, j).1)
}
