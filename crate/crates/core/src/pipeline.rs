//! End-to-end counting: sentinel augmentation, table construction, one
//! weighted boundary segment per pairing rule, and aggregation over the
//! concatenated segments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::covers::{seam_range, Seam};
use crate::error::{Error, Result};
use crate::occdp::DpTables;
use crate::slp::{augment_with_sentinels, compute_meta, Meta, Rule, Slp, Symbol};
use crate::textalg::{weighted_qgram_freqs, Cover};

/// Non-overlapping frequency of every q-gram of a text, ordered by symbol
/// codes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreqReport {
    entries: BTreeMap<Vec<Symbol>, u64>,
}

impl FreqReport {
    pub fn new(entries: BTreeMap<Vec<Symbol>, u64>) -> FreqReport {
        FreqReport { entries }
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Symbol>, u64> {
        &self.entries
    }

    pub fn into_entries(self) -> BTreeMap<Vec<Symbol>, u64> {
        self.entries
    }

    pub fn get(&self, gram: &[Symbol]) -> Option<u64> {
        self.entries.get(gram).copied()
    }

    /// Looks up a gram given as bytes.
    pub fn get_bytes(&self, gram: &[u8]) -> Option<u64> {
        self.get(&crate::slp::symbols(gram))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `<gram>\t<count>\n` per entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (gram, count) in &self.entries {
            out.push_str(&render_gram(gram));
            let _ = writeln!(out, "\t{count}");
        }
        out
    }
}

/// Printable ASCII other than backslash is written as is, everything else as
/// `\xHH`.
pub fn render_gram(gram: &[Symbol]) -> String {
    let mut out = String::with_capacity(gram.len());
    for s in gram {
        match s.as_byte() {
            Some(b) if (0x21..=0x7e).contains(&b) && b != b'\\' => out.push(b as char),
            _ => {
                let _ = write!(out, "\\x{:02x}", s.code());
            }
        }
    }
    out
}

/// Line diff of two reports, `None` when identical. Removed lines are those
/// only in `left`.
pub fn report_diff(left: &FreqReport, right: &FreqReport, names: (&str, &str)) -> Option<String> {
    if left == right {
        return None;
    }
    let mut out = format!("--- {}\n+++ {}\n", names.0, names.1);
    let line = |gram: &[Symbol], count: u64| format!("{}\t{count}\n", render_gram(gram));
    let mut a = left.entries.iter().peekable();
    let mut b = right.entries.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some((ga, ca)), Some((gb, cb))) if ga == gb => {
                if ca != cb {
                    out.push('-');
                    out.push_str(&line(ga, **ca));
                    out.push('+');
                    out.push_str(&line(gb, **cb));
                }
                a.next();
                b.next();
            }
            (Some((ga, ca)), Some((gb, _))) if ga < gb => {
                out.push('-');
                out.push_str(&line(ga, **ca));
                a.next();
            }
            (Some((ga, ca)), None) => {
                out.push('-');
                out.push_str(&line(ga, **ca));
                a.next();
            }
            (_, Some((gb, cb))) => {
                out.push('+');
                out.push_str(&line(gb, **cb));
                b.next();
            }
        }
    }
    Some(out)
}

/// Boundary segments of all pairing rules, concatenated, with the weight of
/// each position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCorpus {
    pub z: Vec<Symbol>,
    pub w: Vec<u64>,
    /// `(variable, offset in z, length)` per segment.
    pub segments: Vec<(usize, usize, usize)>,
}

/// One rule's boundary segment and the weights placed on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub var: usize,
    pub text: Vec<Symbol>,
    pub weights: Vec<u64>,
}

/// Concatenates contributions, checking that every weighted position starts a
/// q-gram inside its own segment.
pub fn assemble_corpus(contributions: Vec<Contribution>, q: usize) -> Result<WeightedCorpus> {
    let mut corpus = WeightedCorpus {
        z: Vec::new(),
        w: Vec::new(),
        segments: Vec::new(),
    };
    for c in contributions {
        if c.weights.len() != c.text.len() {
            return Err(Error::WeightLength {
                weights: c.weights.len(),
                text: c.text.len(),
            });
        }
        if let Some(d) = c
            .weights
            .iter()
            .enumerate()
            .rposition(|(d, &w)| w > 0 && d + q > c.text.len())
        {
            return Err(Error::Internal(format!(
                "weighted position {d} of variable {} leaves its segment",
                c.var
            )));
        }
        corpus.segments.push((c.var, corpus.z.len(), c.text.len()));
        corpus.z.extend(c.text);
        corpus.w.extend(c.weights);
    }
    Ok(corpus)
}

fn closed(cover: Cover, len: u64, q: u64) -> bool {
    cover.b >= q && cover.e + q <= len + 1
}

/// A closed cover found at offset `j` of a rule's seam range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claim {
    pub j: u64,
    pub cover: Cover,
    pub nocc: u64,
}

/// Closed covers of rule `var` in the augmented grammar, one per distinct
/// cover, in order of `j`.
pub fn seam_claims(slp: &Slp, meta: &Meta, tables: &DpTables, var: usize) -> Result<Vec<Claim>> {
    let q = meta.q() as u64;
    let Some((lo, hi)) = seam_range(slp, var, q) else {
        return Ok(Vec::new());
    };
    let seam = Seam::new(slp, meta, var)?;
    let mut claims: Vec<Claim> = Vec::new();
    for j in lo..=hi {
        let (cover, nocc) = tables.seam_entry(&seam, j);
        if !closed(cover, meta.len(var), q) {
            continue;
        }
        if let Some(h) = claims.iter().find(|c| c.cover == cover).map(|c| c.j) {
            if seam.window.gram(h, q as usize) != seam.window.gram(j, q as usize) {
                return Err(Error::Internal(format!(
                    "variable {var}: offsets {h} and {j} share a cover but not a gram"
                )));
            }
            continue;
        }
        claims.push(Claim { j, cover, nocc });
    }
    Ok(claims)
}

/// Weighted boundary segment of pairing rule `var` in the augmented grammar.
fn contribution(
    slp: &Slp,
    meta: &Meta,
    tables: &DpTables,
    var: usize,
) -> Result<Option<Contribution>> {
    let q = meta.q() as u64;
    let vocc = meta.vocc(var);
    let Some((lo, hi)) = seam_range(slp, var, q) else {
        return Ok(None);
    };
    if vocc == 0 {
        return Ok(None);
    }
    let seam = Seam::new(slp, meta, var)?;
    let from = (lo - seam.window.start) as usize;
    let to = (hi + q - 1 - seam.window.start) as usize;
    let text = seam.window.text[from..=to].to_vec();
    let mut weights = vec![0u64; text.len()];
    for c in seam_claims(slp, meta, tables, var)? {
        weights[(c.j - lo) as usize] = vocc.checked_mul(c.nocc).ok_or(Error::LengthOverflow)?;
    }
    Ok(Some(Contribution { var, text, weights }))
}

/// Builds the weighted corpus of an already augmented grammar.
pub fn weighted_corpus(slp: &Slp, meta: &Meta, tables: &DpTables) -> Result<WeightedCorpus> {
    let mut contributions = Vec::new();
    for var in 1..=slp.n() {
        if let Some(c) = contribution(slp, meta, tables, var)? {
            contributions.push(c);
        }
    }
    assemble_corpus(contributions, meta.q())
}

fn count_single_symbols(slp: &Slp) -> Result<FreqReport> {
    let meta = compute_meta(slp, 1)?;
    let mut entries: BTreeMap<Vec<Symbol>, u64> = BTreeMap::new();
    for (idx, rule) in slp.rules().iter().enumerate() {
        let vocc = meta.vocc(idx + 1);
        if let (Rule::Terminal(s), true) = (rule, vocc > 0) {
            let slot = entries.entry(vec![*s]).or_default();
            *slot = slot.checked_add(vocc).ok_or(Error::LengthOverflow)?;
        }
    }
    Ok(FreqReport { entries })
}

fn count_with(slp: &Slp, q: usize, corrupt: bool) -> Result<FreqReport> {
    if q == 0 {
        return Err(Error::InvalidQ { q, min: 1 });
    }
    if q == 1 {
        return count_single_symbols(slp);
    }
    if q as u64 > slp.text_len() {
        return Ok(FreqReport::default());
    }
    let aug = augment_with_sentinels(slp, q)?;
    let meta = compute_meta(&aug, q)?;
    let tables = DpTables::build(&aug, &meta)?;
    let mut corpus = weighted_corpus(&aug, &meta, &tables)?;
    if corrupt {
        if let Some(w) = corpus.w.iter_mut().find(|w| **w > 0) {
            *w += 1;
        }
    }
    let mut entries = weighted_qgram_freqs(&corpus.z, q, &corpus.w)?;
    entries.retain(|gram, count| *count > 0 && !gram.iter().any(|s| s.is_sentinel()));
    Ok(FreqReport { entries })
}

/// Non-overlapping frequency of every q-gram of the text derived by `slp`,
/// without expanding it.
pub fn count_qgrams(slp: &Slp, q: usize) -> Result<FreqReport> {
    count_with(slp, q, false)
}

/// [`count_qgrams`] with one weight deliberately off by one, so harnesses can
/// check that a mismatch is reported.
#[doc(hidden)]
pub fn count_qgrams_corrupted(slp: &Slp, q: usize) -> Result<FreqReport> {
    count_with(slp, q, true)
}
