#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slpgram::covers::{crossing_cover, seam_range};
use slpgram::occdp::{nocc_in_crossing_cover, DpTables};
use slpgram::slp::expand_var;
use slpgram::textalg::{lnocc_greedy, loc_plain, rnocc_greedy};
use slpgram::{compute_meta, Cover, Rule, Slp, Symbol};

pub const SAMPLE: &[u8] = b"SLP 7 7\n1 T 97\n2 T 98\n3 P 1 2\n4 P 1 3\n5 P 3 4\n6 P 4 5\n7 P 6 5\n";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A grammar with at most `n` rules over an alphabet of `sigma` letters whose
/// variables derive at most `max_len` symbols. The root is the last rule.
pub fn random_slp(rng: &mut impl Rng, n: usize, sigma: u8, max_len: u64) -> Slp {
    let sigma = sigma.max(1);
    let terminals = rng.gen_range(1..=sigma as usize).min(n);
    let mut rules = Vec::with_capacity(n);
    let mut lens = Vec::with_capacity(n);
    for t in 0..terminals {
        rules.push(Rule::Terminal(Symbol::byte(b'a' + t as u8)));
        lens.push(1u64);
    }
    while rules.len() < n {
        let i = rules.len();
        // lean towards recent rules so lengths grow
        let pick = |rng: &mut dyn rand::RngCore| {
            if i > 3 && rng.gen_bool(0.5) {
                rng.gen_range(i.saturating_sub(4)..i)
            } else {
                rng.gen_range(0..i)
            }
        };
        let Some((l, r)) = (0..8)
            .map(|_| (pick(rng), pick(rng)))
            .find(|&(l, r)| lens[l] + lens[r] <= max_len)
        else {
            break;
        };
        rules.push(Rule::Pair(l + 1, r + 1));
        lens.push(lens[l] + lens[r]);
    }
    let root = rules.len();
    Slp::new(rules, root).expect("generated grammar is valid")
}

pub fn random_text(rng: &mut impl Rng, len: usize, sigma: u8) -> Vec<u8> {
    (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect()
}

pub fn text_of(slp: &Slp, var: usize) -> Vec<Symbol> {
    expand_var(slp, var, u64::MAX).unwrap()
}

fn shift(c: Cover, by: u64) -> Cover {
    Cover::new(c.b + by, c.e + by)
}

fn right_cover_plain(x: &[Symbol], q: usize, j: usize) -> Cover {
    if j + q - 1 > x.len() {
        return Cover::new(j as u64, x.len() as u64);
    }
    shift(loc_plain(&x[j - 1..], q, 1).unwrap(), j as u64 - 1)
}

fn left_cover_plain(x: &[Symbol], q: usize, j: usize) -> Cover {
    let end = x.len() + 1 - j;
    if end < q {
        return Cover::new(1, end as u64);
    }
    loc_plain(&x[..end], q, end + 1 - q).unwrap()
}

/// Greedy sets of the gram at `gram_at` within `cover`, in variable positions.
fn greedy_in(x: &[Symbol], q: usize, cover: Cover, gram_at: usize) -> (Vec<u64>, Vec<u64>) {
    let gram = &x[gram_at - 1..gram_at - 1 + q];
    let part = &x[cover.b as usize - 1..cover.e as usize];
    let at = |v: Vec<usize>| {
        v.into_iter()
            .map(|p| p as u64 + cover.b - 1)
            .collect::<Vec<_>>()
    };
    (
        at(lnocc_greedy(part, gram).unwrap()),
        at(rnocc_greedy(part, gram).unwrap()),
    )
}

/// Compares every table entry of every variable no longer than `max_len`
/// with its recomputation on the expanded variable. Returns the number of
/// entries checked.
pub fn check_tables(slp: &Slp, q: usize, max_len: u64) -> usize {
    let meta = compute_meta(slp, q).unwrap();
    let tables = DpTables::build(slp, &meta).unwrap();
    let (cov, ext, cnt) = (&tables.covers, &tables.extremal, &tables.counts);
    let width = 2 * (q - 1);
    let mut checked = 0;
    for var in 1..=slp.n() {
        let len = slp.var_len(var);
        if len > max_len {
            continue;
        }
        let x = text_of(slp, var);
        let ctx = |what: &str, j: usize| format!("{what} var={var} j={j} q={q} x={x:?}");
        for j in 1..=width.min(x.len()) {
            let rc = right_cover_plain(&x, q, j);
            assert_eq!(
                cov.right.get(var, j as u64),
                Some(rc),
                "{}",
                ctx("right cover", j)
            );
            let lc = left_cover_plain(&x, q, j);
            assert_eq!(
                cov.left.get(var, j as u64),
                Some(lc),
                "{}",
                ctx("left cover", j)
            );
            checked += 2;
            if j + q - 1 > x.len() {
                for (name, got) in [
                    ("lnocc", ext.lnocc.get(var, j as u64).is_some()),
                    ("rnocc", ext.rnocc.get(var, j as u64).is_some()),
                    ("right count", cnt.right.get(var, j as u64).is_some()),
                    ("left count", cnt.left.get(var, j as u64).is_some()),
                ] {
                    assert!(!got, "{}", ctx(name, j));
                }
                continue;
            }
            let (l_right, r_right) = greedy_in(&x, q, rc, j);
            let (l_left, r_left) = greedy_in(&x, q, lc, x.len() + 2 - j - q);

            let top = |v: &[u64]| (v[v.len() - 1], v.len().checked_sub(2).map(|i| v[i]));
            let bottom = |v: &[u64]| (v[0], v.get(1).copied());
            assert_eq!(
                ext.lnocc.get(var, j as u64),
                Some(top(&l_right)),
                "{}",
                ctx("lnocc", j)
            );
            assert_eq!(
                ext.rnocc.get(var, j as u64),
                Some(bottom(&r_left)),
                "{}",
                ctx("rnocc", j)
            );
            assert_eq!(
                cnt.right.get(var, j as u64),
                Some(l_right.len() as u64),
                "{}",
                ctx("right count", j)
            );
            assert_eq!(
                cnt.left.get(var, j as u64),
                Some(l_left.len() as u64),
                "{}",
                ctx("left count", j)
            );
            checked += 4;
            if j < q {
                assert_eq!(
                    ext.min_rnocc_in_right.get(var, j as u64),
                    Some(r_right[0]),
                    "{}",
                    ctx("min rnocc in right cover", j)
                );
                assert_eq!(
                    ext.max_lnocc_in_left.get(var, j as u64),
                    Some(*l_left.last().unwrap()),
                    "{}",
                    ctx("max lnocc in left cover", j)
                );
                checked += 2;
            }
        }
        let Some((lo, hi)) = seam_range(slp, var, q as u64) else {
            continue;
        };
        for j in lo..=hi {
            let want = loc_plain(&x, q, j as usize).unwrap();
            let got = crossing_cover(slp, &meta, &cov.right, &cov.left, var, j).unwrap();
            assert_eq!(got, want, "{}", ctx("crossing cover", j as usize));
            let (picks, _) = greedy_in(&x, q, want, j as usize);
            let n = nocc_in_crossing_cover(slp, &meta, &tables, var, j).unwrap();
            assert_eq!(
                n,
                picks.len() as u64,
                "{}",
                ctx("crossing count", j as usize)
            );
            checked += 2;
        }
    }
    checked
}
