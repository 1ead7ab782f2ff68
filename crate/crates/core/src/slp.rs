//! Straight-line programs: the grammar model, its text format, and the
//! per-variable metadata (lengths, occurrence counts, boundary contexts) that
//! the counting passes consume.

use std::fmt;

use crate::error::{Error, ParseError, ParseErrorKind, Result};

/// Lengths must stay strictly below this bound.
pub const LENGTH_CAP: u64 = 1 << 62;

/// A symbol of the (possibly augmented) alphabet: a byte, or one of the two
/// sentinels used to pad the text.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    /// Begin sentinel `#`.
    pub const BEGIN: Symbol = Symbol(0x10000);
    /// End sentinel `$`.
    pub const END: Symbol = Symbol(0x10001);

    pub const fn byte(b: u8) -> Symbol {
        Symbol(b as u32)
    }

    /// Returns `None` for codes outside the byte range and the two sentinels.
    pub fn from_code(code: u32) -> Option<Symbol> {
        match code {
            0..=0xff | 0x10000 | 0x10001 => Some(Symbol(code)),
            _ => None,
        }
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_sentinel(self) -> bool {
        self.0 > 0xff
    }

    pub fn as_byte(self) -> Option<u8> {
        u8::try_from(self.0).ok()
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::BEGIN => f.write_str("#"),
            Symbol::END => f.write_str("$"),
            Symbol(c) if (0x20..0x7f).contains(&c) => write!(f, "{}", c as u8 as char),
            Symbol(c) => write!(f, "\\x{c:02x}"),
        }
    }
}

/// Converts a byte string into symbols.
pub fn symbols(bytes: &[u8]) -> Vec<Symbol> {
    bytes.iter().copied().map(Symbol::byte).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Terminal(Symbol),
    /// Indices of the left and right child, both smaller than the rule's own.
    Pair(usize, usize),
}

/// A validated straight-line program. Variables are numbered from 1 and every
/// pairing rule refers only to variables defined before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp {
    rules: Vec<Rule>,
    root: usize,
    lens: Vec<u64>,
}

impl Slp {
    pub fn new(rules: Vec<Rule>, root: usize) -> Result<Slp> {
        let n = rules.len();
        if root == 0 || root > n {
            return Err(Error::InvalidGrammar(format!(
                "root {root} out of range for {n} rules"
            )));
        }
        let mut lens = Vec::with_capacity(n);
        for (idx, rule) in rules.iter().enumerate() {
            let i = idx + 1;
            let len = match *rule {
                Rule::Terminal(_) => 1,
                Rule::Pair(l, r) => {
                    if l == 0 || r == 0 || l >= i || r >= i {
                        return Err(Error::InvalidGrammar(format!(
                            "rule {i} refers to {l} and {r}, which must precede it"
                        )));
                    }
                    lens[l - 1] + lens[r - 1]
                }
            };
            if len >= LENGTH_CAP {
                return Err(Error::LengthOverflow);
            }
            lens.push(len);
        }
        Ok(Slp { rules, root, lens })
    }

    /// Number of rules.
    pub fn n(&self) -> usize {
        self.rules.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Panics if `var` is not in `1..=n`.
    pub fn rule(&self, var: usize) -> Rule {
        self.rules[var - 1]
    }

    pub fn children(&self, var: usize) -> Option<(usize, usize)> {
        match self.rule(var) {
            Rule::Pair(l, r) => Some((l, r)),
            Rule::Terminal(_) => None,
        }
    }

    /// Derived length of `var`.
    pub fn var_len(&self, var: usize) -> u64 {
        self.lens[var - 1]
    }

    /// Derived length of the root, i.e. of the text.
    pub fn text_len(&self) -> u64 {
        self.var_len(self.root)
    }

    /// Variables not reachable from the root. They are legal but unused.
    pub fn unreachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n() + 1];
        seen[self.root] = true;
        for i in (1..=self.root).rev() {
            if !seen[i] {
                continue;
            }
            if let Rule::Pair(l, r) = self.rule(i) {
                seen[l] = true;
                seen[r] = true;
            }
        }
        (1..=self.n()).filter(|&i| !seen[i]).collect()
    }

    /// Serializes into the canonical text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("SLP {} {}\n", self.n(), self.root);
        for (idx, rule) in self.rules.iter().enumerate() {
            match *rule {
                Rule::Terminal(s) => {
                    let byte = s.as_byte().expect("sentinels are not serializable");
                    out.push_str(&format!("{} T {}\n", idx + 1, byte));
                }
                Rule::Pair(l, r) => out.push_str(&format!("{} P {} {}\n", idx + 1, l, r)),
            }
        }
        out
    }
}

fn parse_number(field: &str) -> Option<u64> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    field.parse().ok()
}

/// Parses the `SLP <n> <root>` text format.
pub fn parse_slp(bytes: &[u8]) -> std::result::Result<Slp, ParseError> {
    let err = |line, kind| ParseError { line, kind };
    let text = std::str::from_utf8(bytes).map_err(|_| err(1, ParseErrorKind::MalformedHeader))?;
    if !text.ends_with('\n') {
        let line = text.split('\n').count();
        return Err(err(line, ParseErrorKind::MissingTrailingNewline));
    }
    let mut lines = text[..text.len() - 1].split('\n');

    let header: Vec<&str> = lines.next().unwrap_or_default().split(' ').collect();
    let (n, root) = match header.as_slice() {
        ["SLP", n, root] => match (parse_number(n), parse_number(root)) {
            (Some(n), Some(root)) => (n as usize, root as usize),
            _ => return Err(err(1, ParseErrorKind::MalformedHeader)),
        },
        _ => return Err(err(1, ParseErrorKind::MalformedHeader)),
    };
    if root == 0 || root > n {
        return Err(err(1, ParseErrorKind::RootOutOfRange { root, n }));
    }

    let mut rules = Vec::with_capacity(n);
    let mut lens: Vec<u64> = Vec::with_capacity(n);
    for (offset, line) in lines.enumerate() {
        let line_no = offset + 2;
        let index = offset + 1;
        if index > n {
            return Err(err(
                line_no,
                ParseErrorKind::RuleCount {
                    expected: n,
                    found: index,
                },
            ));
        }
        let fields: Vec<&str> = line.split(' ').collect();
        let found = fields
            .first()
            .and_then(|f| parse_number(f))
            .ok_or_else(|| err(line_no, ParseErrorKind::MalformedRule))?
            as usize;
        if found != index {
            return Err(err(
                line_no,
                ParseErrorKind::UnexpectedIndex {
                    expected: index,
                    found,
                },
            ));
        }
        let (rule, len) = match &fields[1..] {
            ["T", value] => {
                let value = parse_number(value)
                    .ok_or_else(|| err(line_no, ParseErrorKind::MalformedRule))?;
                let byte = u8::try_from(value)
                    .map_err(|_| err(line_no, ParseErrorKind::ByteOutOfRange(value)))?;
                (Rule::Terminal(Symbol::byte(byte)), 1)
            }
            ["P", l, r] => {
                let mut children = [0usize; 2];
                for (slot, field) in children.iter_mut().zip([l, r]) {
                    let v = parse_number(field)
                        .ok_or_else(|| err(line_no, ParseErrorKind::MalformedRule))?
                        as usize;
                    if v == 0 {
                        return Err(err(line_no, ParseErrorKind::IndexOutOfRange(v)));
                    }
                    if v >= index {
                        return Err(err(
                            line_no,
                            ParseErrorKind::ForwardReference {
                                index,
                                reference: v,
                            },
                        ));
                    }
                    *slot = v;
                }
                let len = lens[children[0] - 1] + lens[children[1] - 1];
                (Rule::Pair(children[0], children[1]), len)
            }
            _ => return Err(err(line_no, ParseErrorKind::MalformedRule)),
        };
        if len >= LENGTH_CAP {
            return Err(err(line_no, ParseErrorKind::LengthOverflow(index)));
        }
        rules.push(rule);
        lens.push(len);
    }
    if rules.len() != n {
        return Err(err(
            rules.len() + 2,
            ParseErrorKind::RuleCount {
                expected: n,
                found: rules.len(),
            },
        ));
    }
    Ok(Slp { rules, root, lens })
}

/// Derived data for one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMeta {
    pub len: u64,
    /// Number of occurrences of the variable in the derivation tree of the root.
    pub vocc: u64,
    /// First `min(kappa, len)` symbols.
    pub pre: Vec<Symbol>,
    /// Last `min(kappa, len)` symbols.
    pub suf: Vec<Symbol>,
}

/// Per-variable metadata for a fixed `q`, with contexts of width
/// `kappa = 3(q-1)` (at least 1).
#[derive(Clone, Debug)]
pub struct Meta {
    q: usize,
    kappa: usize,
    vars: Vec<VarMeta>,
}

impl Meta {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn var(&self, var: usize) -> &VarMeta {
        &self.vars[var - 1]
    }

    pub fn len(&self, var: usize) -> u64 {
        self.vars[var - 1].len
    }

    pub fn vocc(&self, var: usize) -> u64 {
        self.vars[var - 1].vocc
    }

    pub fn pre(&self, var: usize) -> &[Symbol] {
        &self.vars[var - 1].pre
    }

    pub fn suf(&self, var: usize) -> &[Symbol] {
        &self.vars[var - 1].suf
    }

    pub fn vars(&self) -> &[VarMeta] {
        &self.vars
    }
}

/// Computes lengths, occurrence counts and `pre`/`suf` contexts for every
/// variable.
pub fn compute_meta(slp: &Slp, q: usize) -> Result<Meta> {
    if q == 0 {
        return Err(Error::InvalidQ { q, min: 1 });
    }
    let kappa = (3 * (q - 1)).max(1);
    let n = slp.n();

    let mut vocc = vec![0u64; n + 1];
    vocc[slp.root()] = 1;
    for i in (1..=slp.root()).rev() {
        if let Rule::Pair(l, r) = slp.rule(i) {
            for c in [l, r] {
                vocc[c] = vocc[c].checked_add(vocc[i]).ok_or(Error::LengthOverflow)?;
            }
        }
    }

    let mut vars: Vec<VarMeta> = Vec::with_capacity(n);
    for (i, &vocc) in vocc.iter().enumerate().skip(1) {
        let len = slp.var_len(i);
        if len >= LENGTH_CAP {
            return Err(Error::LengthOverflow);
        }
        let (pre, suf) = match slp.rule(i) {
            Rule::Terminal(s) => (vec![s], vec![s]),
            Rule::Pair(l, r) => {
                let (left, right) = (&vars[l - 1], &vars[r - 1]);
                let pre: Vec<Symbol> = left
                    .pre
                    .iter()
                    .chain(&right.pre)
                    .copied()
                    .take(kappa)
                    .collect();
                let need = kappa.saturating_sub(right.suf.len()).min(left.suf.len());
                let mut suf = left.suf[left.suf.len() - need..].to_vec();
                suf.extend_from_slice(&right.suf);
                (pre, suf)
            }
        };
        vars.push(VarMeta {
            len,
            vocc,
            pre,
            suf,
        });
    }
    Ok(Meta { q, kappa, vars })
}

/// Returns `suf(left, width) ++ pre(right, width)` for the pairing rule `var`,
/// together with the number of symbols drawn from the left child.
pub fn boundary_window(
    slp: &Slp,
    meta: &Meta,
    var: usize,
    width: usize,
) -> Result<(Vec<Symbol>, usize)> {
    if var == 0 || var > slp.n() {
        return Err(Error::NoSuchVariable(var));
    }
    let (l, r) = slp.children(var).ok_or(Error::NotAPair(var))?;
    if width > meta.kappa() {
        return Err(Error::WidthTooLarge {
            width,
            kappa: meta.kappa(),
        });
    }
    let suf = meta.suf(l);
    let left = &suf[suf.len() - width.min(suf.len())..];
    let pre = meta.pre(r);
    let right = &pre[..width.min(pre.len())];
    let mut window = Vec::with_capacity(left.len() + right.len());
    window.extend_from_slice(left);
    window.extend_from_slice(right);
    Ok((window, left.len()))
}

/// Builds a grammar deriving `#^{q-1} T $^{q-1}`. Original variables keep
/// their indices; the new root is `Pair(#-run, Pair(old root, $-run))`.
pub fn augment_with_sentinels(slp: &Slp, q: usize) -> Result<Slp> {
    if q < 2 {
        return Err(Error::InvalidQ { q, min: 2 });
    }
    let mut rules = slp.rules().to_vec();
    let run = |rules: &mut Vec<Rule>, sym: Symbol| -> usize {
        rules.push(Rule::Terminal(sym));
        let unit = rules.len();
        let mut acc = unit;
        for _ in 1..q - 1 {
            rules.push(Rule::Pair(acc, unit));
            acc = rules.len();
        }
        acc
    };
    let begin = run(&mut rules, Symbol::BEGIN);
    let end = run(&mut rules, Symbol::END);
    rules.push(Rule::Pair(slp.root(), end));
    let tail = rules.len();
    rules.push(Rule::Pair(begin, tail));
    let root = rules.len();
    Slp::new(rules, root)
}

/// Expands variable `var`, refusing if its length exceeds `limit`.
pub fn expand_var(slp: &Slp, var: usize, limit: u64) -> Result<Vec<Symbol>> {
    if var == 0 || var > slp.n() {
        return Err(Error::NoSuchVariable(var));
    }
    let length = slp.var_len(var);
    if length > limit {
        return Err(Error::ExpansionLimit { length, limit });
    }
    let mut out = Vec::with_capacity(length as usize);
    let mut stack = vec![var];
    while let Some(v) = stack.pop() {
        match slp.rule(v) {
            Rule::Terminal(s) => out.push(s),
            Rule::Pair(l, r) => {
                stack.push(r);
                stack.push(l);
            }
        }
    }
    Ok(out)
}

/// Expands the whole text.
pub fn expand(slp: &Slp, limit: u64) -> Result<Vec<Symbol>> {
    expand_var(slp, slp.root(), limit)
}
