//! Longest overlapping covers computed over the grammar.
//!
//! For a variable `X` and offset `1 <= j <= 2(q-1)`:
//! - the right cover at `j` is the chain of overlapping occurrences of
//!   `X[j:j+q-1]` that starts at `j` and extends as far right as possible;
//! - the left cover at `j` is the chain of overlapping occurrences of the gram
//!   ending at `|X|-j+1`, extended as far left as possible.
//!
//! Both are computed bottom-up from the children's tables and an `O(q)`
//! window around each boundary.

use crate::dp::{extend_left, extend_right, Grid, View, Window};
use crate::error::{Error, Result};
use crate::slp::{Meta, Slp};
use crate::textalg::Cover;

fn check_q(meta: &Meta) -> Result<u64> {
    if meta.q() < 2 {
        return Err(Error::InvalidQ {
            q: meta.q(),
            min: 2,
        });
    }
    Ok(meta.q() as u64)
}

pub(crate) fn lens(slp: &Slp) -> Vec<u64> {
    (1..=slp.n()).map(|v| slp.var_len(v)).collect()
}

/// Right covers indexed by `(variable, j)`.
#[derive(Clone, Debug)]
pub struct RightCoverTable {
    lens: Vec<u64>,
    pub(crate) ends: Grid,
}

impl RightCoverTable {
    /// Offsets stored per variable, `2(q-1)`.
    pub fn width(&self) -> usize {
        self.ends.width()
    }

    /// `None` past the table width or past the variable's end. When no
    /// q-gram starts at `j` the cover is clamped to `(j, |X|)`.
    pub fn get(&self, var: usize, j: u64) -> Option<Cover> {
        let len = self.lens[var - 1];
        if j == 0 || j > self.width() as u64 || j > len {
            return None;
        }
        Some(Cover::new(j, self.ends.get(var, j).unwrap_or(len)))
    }
}

/// Left covers indexed by `(variable, j)`, `j` counted from the right end.
#[derive(Clone, Debug)]
pub struct LeftCoverTable {
    lens: Vec<u64>,
    /// Right covers of the mirrored grammar.
    pub(crate) ends: Grid,
}

impl LeftCoverTable {
    pub fn width(&self) -> usize {
        self.ends.width()
    }

    /// Mirrors [`RightCoverTable::get`]: clamped to `(1, |X|-j+1)` when no
    /// q-gram ends at `|X|-j+1`.
    pub fn get(&self, var: usize, j: u64) -> Option<Cover> {
        let len = self.lens[var - 1];
        if j == 0 || j > self.width() as u64 || j > len {
            return None;
        }
        let b = self.ends.get(var, j).map_or(1, |e| len - e + 1);
        Some(Cover::new(b, len - j + 1))
    }
}

/// Right and left covers for one `q`.
#[derive(Clone, Debug)]
pub struct CoverTables {
    pub right: RightCoverTable,
    pub left: LeftCoverTable,
}

pub(crate) fn cover_pass(view: View<'_>) -> Grid {
    let q = view.q();
    let width = 2 * (q - 1);
    let mut ends = Grid::new(view.n(), width as usize);
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
            let end = if j > la {
                la + ends.must(b, j - la)
            } else {
                let window = window.get_or_insert_with(|| view.window(var));
                let occ = window.occurrences(&view.head_gram(var, j));
                // resume after the part of the chain that lies inside `a`
                let start = if j + q - 1 <= la {
                    ends.must(a, j) + 1 - q
                } else {
                    j
                };
                extend_right(&occ, start, la, q, |k| ends.must(b, k))
            };
            ends.set(var, j, Some(end));
        }
    }
    ends
}

/// Builds the right cover of every `(variable, j)` with `j <= 2(q-1)`.
/// `q` is taken from `meta`.
pub fn build_right_covers(slp: &Slp, meta: &Meta) -> Result<RightCoverTable> {
    check_q(meta)?;
    Ok(RightCoverTable {
        lens: lens(slp),
        ends: cover_pass(View::new(slp, meta, false)),
    })
}

/// Builds the left cover of every `(variable, j)` with `j <= 2(q-1)`.
pub fn build_left_covers(slp: &Slp, meta: &Meta) -> Result<LeftCoverTable> {
    check_q(meta)?;
    Ok(LeftCoverTable {
        lens: lens(slp),
        ends: cover_pass(View::new(slp, meta, true)),
    })
}

/// Range of `j` for which a pairing rule's crossing covers are needed:
/// `max(1, |left|-2(q-1)+1) ..= min(|left|+q-1, |X|-q+1)`. Empty when
/// `|X| < q`.
pub fn seam_range(slp: &Slp, var: usize, q: u64) -> Option<(u64, u64)> {
    let (l, _) = slp.children(var)?;
    let (la, len) = (slp.var_len(l), slp.var_len(var));
    if len < q {
        return None;
    }
    let lo = (la + 1).saturating_sub(2 * (q - 1)).max(1);
    let hi = (la + q - 1).min(len - q + 1);
    (lo <= hi).then_some((lo, hi))
}

/// Boundary context of one pairing rule, shared by every `j` in its seam
/// range.
pub(crate) struct Seam {
    pub(crate) left: usize,
    pub(crate) right: usize,
    pub(crate) split: u64,
    pub(crate) q: u64,
    pub(crate) window: Window,
}

impl Seam {
    pub(crate) fn new(slp: &Slp, meta: &Meta, var: usize) -> Result<Seam> {
        if var == 0 || var > slp.n() {
            return Err(Error::NoSuchVariable(var));
        }
        let (left, right) = slp.children(var).ok_or(Error::NotAPair(var))?;
        let window = View::new(slp, meta, false).window(var);
        Ok(Seam {
            left,
            right,
            split: slp.var_len(left),
            q: meta.q() as u64,
            window,
        })
    }

    /// Occurrences (variable positions) of the gram at `j` visible in the
    /// window.
    pub(crate) fn occurrences(&self, j: u64) -> Vec<u64> {
        self.window
            .occurrences(self.window.gram(j, self.q as usize))
    }

    pub(crate) fn cover(
        &self,
        occ: &[u64],
        j: u64,
        right: &RightCoverTable,
        left: &LeftCoverTable,
    ) -> Cover {
        let (q, split) = (self.q, self.split);
        let e = extend_right(occ, j, split, q, |k| right.ends.must(self.right, k));
        let b = extend_left(occ, j, split, q, |anchor| {
            split + 1 - left.ends.must(self.left, anchor)
        });
        Cover::new(b, e)
    }
}

pub(crate) fn check_seam_position(slp: &Slp, var: usize, q: u64, j: u64) -> Result<()> {
    match seam_range(slp, var, q) {
        Some((lo, hi)) if (lo..=hi).contains(&j) => Ok(()),
        Some((lo, hi)) => Err(Error::PositionOutOfRange {
            position: j,
            lo,
            hi,
        }),
        None => Err(Error::PositionOutOfRange {
            position: j,
            lo: 1,
            hi: 0,
        }),
    }
}

/// The full longest overlapping cover of the gram at `j` in `var`, for `j` in
/// [`seam_range`].
pub fn crossing_cover(
    slp: &Slp,
    meta: &Meta,
    right: &RightCoverTable,
    left: &LeftCoverTable,
    var: usize,
    j: u64,
) -> Result<Cover> {
    let q = check_q(meta)?;
    let seam = Seam::new(slp, meta, var)?;
    check_seam_position(slp, var, q, j)?;
    let occ = seam.occurrences(j);
    Ok(seam.cover(&occ, j, right, left))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slp::{augment_with_sentinels, compute_meta, parse_slp, Rule, Symbol};

    fn unary8() -> Slp {
        let a = Rule::Terminal(Symbol::byte(b'a'));
        // Y2 is unused padding so the doubling rules get indices 3..=5
        Slp::new(
            vec![a, a, Rule::Pair(1, 1), Rule::Pair(3, 3), Rule::Pair(4, 4)],
            5,
        )
        .unwrap()
    }

    fn tables(slp: &Slp, q: usize) -> (Meta, RightCoverTable, LeftCoverTable) {
        let meta = compute_meta(slp, q).unwrap();
        let right = build_right_covers(slp, &meta).unwrap();
        let left = build_left_covers(slp, &meta).unwrap();
        (meta, right, left)
    }

    #[test]
    fn unary_covers() {
        let (_, right, left) = tables(&unary8(), 2);
        assert_eq!(right.get(5, 1), Some(Cover::new(1, 8)));
        assert_eq!(right.get(4, 1), Some(Cover::new(1, 4)));
        assert_eq!(left.get(5, 1), Some(Cover::new(1, 8)));
    }

    #[test]
    fn non_overlapping_repeats() {
        let slp =
            parse_slp(b"SLP 6 6\n1 T 97\n2 T 98\n3 T 99\n4 P 1 2\n5 P 4 3\n6 P 5 5\n").unwrap();
        let (_, right, left) = tables(&slp, 3);
        assert_eq!(right.get(6, 1), Some(Cover::new(1, 3)));
        assert_eq!(left.get(6, 1), Some(Cover::new(4, 6)));
    }

    #[test]
    fn crossing_cover_examples() {
        let aug = augment_with_sentinels(&unary8(), 2).unwrap();
        let (meta, right, left) = tables(&aug, 2);
        let root = aug.root();
        assert_eq!(
            crossing_cover(&aug, &meta, &right, &left, root, 2),
            Ok(Cover::new(2, 9))
        );

        let sample =
            parse_slp(b"SLP 7 7\n1 T 97\n2 T 98\n3 P 1 2\n4 P 1 3\n5 P 3 4\n6 P 4 5\n7 P 6 5\n")
                .unwrap();
        let (meta, right, left) = tables(&sample, 2);
        assert_eq!(
            crossing_cover(&sample, &meta, &right, &left, 5, 2),
            Ok(Cover::new(2, 3))
        );
        assert!(matches!(
            crossing_cover(&sample, &meta, &right, &left, 5, 5),
            Err(Error::PositionOutOfRange { .. })
        ));
        assert_eq!(
            crossing_cover(&sample, &meta, &right, &left, 1, 1),
            Err(Error::NotAPair(1))
        );
    }
}
