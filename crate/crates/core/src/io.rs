//! Plain-text file formats and key/value reports.
//!
//! Structure files:
//!
//! ```text
//! # comment
//! participants 5
//! k 3
//! minset 1 2 3
//! minset 2 3 4
//! ```
//!
//! Certificate blocks, share files and scheme files use the same
//! line-oriented style; see the `parse_*`/`write_*` pairs below. Every
//! writer emits canonical text that its parser maps back to an equal value,
//! and re-writing that value reproduces the text byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::bounds::IndependentSequenceCertificate;
use crate::classifier::{CertificateSource, Classification, Evidence};
use crate::enumeration::TheoremCheckReport;
use crate::field::PrimeField;
use crate::reduction::ReductionResult;
use crate::scheme::{
    CorrectnessReport, LinearScheme, PrivacyReport, SchemeError, ShareTable, VectorAssignment,
};
use crate::set::{ParticipantSet, MAX_PARTICIPANTS};
use crate::structure::{AccessStructure, StructureError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    /// A structure validation error; `line` is the offending `minset` line
    /// when the error names one.
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Structure {
        line: Option<usize>,
        source: StructureError,
    },
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Scheme {
        line: Option<usize>,
        source: SchemeError,
    },
}

impl IoError {
    pub fn line(&self) -> Option<usize> {
        match self {
            IoError::Syntax { line, .. } => Some(*line),
            IoError::Structure { line, .. } | IoError::Scheme { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number<T: FromStr>(line: usize, word: &str, what: &str) -> Result<T, IoError> {
    word.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{word}`")))
}

fn single_arg<'a>(line: usize, directive: &str, args: &[&'a str]) -> Result<&'a str, IoError> {
    match args {
        [one] => Ok(one),
        _ => Err(syntax(
            line,
            format!("`{directive}` takes exactly one argument"),
        )),
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, directive: &str) -> Result<(), IoError> {
    if slot.is_some() {
        return Err(syntax(line, format!("`{directive}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

// ---------------------------------------------------------------------------
// structure files

pub fn parse_structure(text: &str) -> Result<AccessStructure, IoError> {
    let mut n: Option<usize> = None;
    let mut k: Option<usize> = None;
    let mut minsets: Vec<Vec<usize>> = Vec::new();
    let mut minset_lines: Vec<usize> = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let mut words = content.split_whitespace();
        let directive = words.next().expect("content lines are nonempty");
        let args: Vec<&str> = words.collect();
        match directive {
            "participants" => {
                let v = parse_number(line, single_arg(line, directive, &args)?, "a participant count")?;
                set_once(&mut n, v, line, directive)?;
            }
            "k" => {
                let v = parse_number(line, single_arg(line, directive, &args)?, "a set size")?;
                set_once(&mut k, v, line, directive)?;
            }
            "minset" => {
                let (Some(n), Some(k)) = (n, k) else {
                    return Err(syntax(line, "`minset` before the `participants` and `k` header"));
                };
                let members = args
                    .iter()
                    .map(|w| parse_number(line, w, "a participant number"))
                    .collect::<Result<Vec<usize>, _>>()?;
                // Checked here so the error lands on this line even when the
                // header itself is invalid.
                if let Some(&p) = members.iter().find(|&&p| p == 0 || p > n) {
                    return Err(IoError::Structure {
                        line: Some(line),
                        source: StructureError::OutOfRange {
                            index: minsets.len(),
                            participant: p,
                            n,
                        },
                    });
                }
                let distinct: BTreeSet<usize> = members.iter().copied().collect();
                if distinct.len() != k {
                    return Err(IoError::Structure {
                        line: Some(line),
                        source: StructureError::WrongCardinality {
                            index: minsets.len(),
                            expected: k,
                            found: distinct.len(),
                        },
                    });
                }
                minsets.push(members);
                minset_lines.push(line);
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let (Some(n), Some(k)) = (n, k) else {
        let missing = if n.is_none() { "participants" } else { "k" };
        return Err(syntax(last_line.max(1), format!("missing `{missing}` header")));
    };
    AccessStructure::build(n, k, minsets).map_err(|source| {
        let line = match &source {
            StructureError::WrongCardinality { index, .. }
            | StructureError::OutOfRange { index, .. }
            | StructureError::Duplicate { index, .. } => minset_lines.get(*index).copied(),
            _ => None,
        };
        IoError::Structure { line, source }
    })
}

pub fn write_structure(g: &AccessStructure) -> String {
    let mut out = format!("participants {}\nk {}\n", g.n(), g.k());
    for m in g.basis() {
        out.push_str("minset");
        for p in m.iter() {
            let _ = write!(out, " {p}");
        }
        out.push('\n');
    }
    out
}

/// Separator between records in a structure stream.
pub const STREAM_SEPARATOR: &str = "---";

/// Splits a stream of structure files separated by `---` lines.
pub fn parse_structure_stream(text: &str) -> Result<Vec<AccessStructure>, IoError> {
    let mut out = Vec::new();
    let mut chunk = String::new();
    let mut offset = 0;
    let mut flush = |chunk: &mut String, offset: usize| -> Result<(), IoError> {
        if content_lines(chunk).next().is_some() {
            out.push(parse_structure(chunk).map_err(|e| shift_line(e, offset))?);
        }
        chunk.clear();
        Ok(())
    };
    for (i, line) in text.lines().enumerate() {
        if line.trim() == STREAM_SEPARATOR {
            flush(&mut chunk, offset)?;
            offset = i + 1;
        } else {
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    flush(&mut chunk, offset)?;
    Ok(out)
}

fn shift_line(e: IoError, offset: usize) -> IoError {
    match e {
        IoError::Syntax { line, message } => IoError::Syntax {
            line: line + offset,
            message,
        },
        IoError::Structure { line, source } => IoError::Structure {
            line: line.map(|l| l + offset),
            source,
        },
        IoError::Scheme { line, source } => IoError::Scheme {
            line: line.map(|l| l + offset),
            source,
        },
    }
}

// ---------------------------------------------------------------------------
// sets, lists and certificates

/// Parses `{1,2,3}` or `{}`.
pub fn parse_set(text: &str) -> Option<ParticipantSet> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?.trim();
    if inner.is_empty() {
        return Some(ParticipantSet::EMPTY);
    }
    let mut set = ParticipantSet::EMPTY;
    for w in inner.split(',') {
        let p: usize = w.trim().parse().ok()?;
        if p == 0 || p > MAX_PARTICIPANTS || set.contains(p) {
            return None;
        }
        set.insert(p);
    }
    Some(set)
}

/// Parses a participant list such as `1,2,5`, `1 2 5` or `{1,2,5}`.
pub fn parse_participant_list(text: &str) -> Option<ParticipantSet> {
    let t = text.trim();
    if t.starts_with('{') {
        return parse_set(t);
    }
    let mut set = ParticipantSet::EMPTY;
    for w in t.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()) {
        let p: usize = w.parse().ok()?;
        if p == 0 || p > MAX_PARTICIPANTS {
            return None;
        }
        set.insert(p);
    }
    Some(set)
}

fn join_sets(sets: &[ParticipantSet]) -> String {
    sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// `{0,1,2}` for a set of counts.
pub fn format_counts(values: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn certificate_entries(cert: &IndependentSequenceCertificate) -> Vec<(String, String)> {
    let mut out = vec![("chain".to_string(), join_sets(&cert.chain))];
    for (i, x) in cert.witnesses.iter().enumerate() {
        out.push((format!("witness {}", i + 1), x.to_string()));
    }
    out.push(("A".into(), cert.a.to_string()));
    out.push(("A qualified".into(), yes_no(cert.a_qualified).into()));
    out.push(("bound".into(), cert.bound.to_string()));
    out
}

pub fn write_certificate(cert: &IndependentSequenceCertificate) -> String {
    Report::from_entries(certificate_entries(cert)).render(Format::Human)
}

/// Parses a certificate block. Lines with other keys are rejected; blank and
/// `#` lines are skipped. The result is not verified against any structure.
pub fn parse_certificate(text: &str) -> Result<IndependentSequenceCertificate, IoError> {
    let mut chain: Option<Vec<ParticipantSet>> = None;
    let mut witnesses: Vec<ParticipantSet> = Vec::new();
    let mut a = None;
    let mut a_qualified = None;
    let mut bound = None;
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `key: value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let bad_set = |w: &str| syntax(line, format!("malformed set `{w}`"));
        match key {
            "chain" => {
                let sets = split_sets(value)
                    .ok_or_else(|| syntax(line, format!("malformed chain `{value}`")))?;
                set_once(&mut chain, sets, line, key)?;
            }
            "A" => set_once(&mut a, parse_set(value).ok_or_else(|| bad_set(value))?, line, key)?,
            "A qualified" => {
                let q = match value {
                    "yes" => true,
                    "no" => false,
                    _ => return Err(syntax(line, "`A qualified` must be yes or no")),
                };
                set_once(&mut a_qualified, q, line, key)?;
            }
            "bound" => {
                let r = Rational::from_str(value)
                    .map_err(|_| syntax(line, format!("malformed bound `{value}`")))?;
                set_once(&mut bound, r, line, key)?;
            }
            _ => {
                let index: usize = key
                    .strip_prefix("witness ")
                    .and_then(|i| i.trim().parse().ok())
                    .ok_or_else(|| syntax(line, format!("unknown key `{key}`")))?;
                if index != witnesses.len() + 1 {
                    return Err(syntax(
                        line,
                        format!("expected witness {}, found witness {index}", witnesses.len() + 1),
                    ));
                }
                witnesses.push(parse_set(value).ok_or_else(|| bad_set(value))?);
            }
        }
    }
    let end = last_line.max(1);
    let missing = |what: &str| syntax(end, format!("missing `{what}`"));
    Ok(IndependentSequenceCertificate {
        chain: chain.ok_or_else(|| missing("chain"))?,
        witnesses,
        a: a.ok_or_else(|| missing("A"))?,
        a_qualified: a_qualified.ok_or_else(|| missing("A qualified"))?,
        bound: bound.ok_or_else(|| missing("bound"))?,
    })
}

fn split_sets(text: &str) -> Option<Vec<ParticipantSet>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let end = rest.find('}')?;
        out.push(parse_set(&rest[..=end])?);
        rest = rest[end + 1..].trim_start();
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// share files

/// Shares of some participants, with the dealing parameters when known.
///
/// ```text
/// field 7
/// secret 3
/// seed 42
/// share 1 4
/// share 2 0
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareFile {
    pub field: u64,
    pub secret: Option<u64>,
    pub seed: Option<u64>,
    pub shares: BTreeMap<usize, u64>,
}

impl ShareFile {
    pub fn from_table(field: u64, table: &ShareTable) -> Self {
        ShareFile {
            field,
            secret: Some(table.secret),
            seed: Some(table.seed),
            shares: table
                .shares
                .iter()
                .enumerate()
                .map(|(i, &s)| (i + 1, s))
                .collect(),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, u64)> {
        self.shares.iter().map(|(&p, &s)| (p, s)).collect()
    }
}

pub fn write_shares(file: &ShareFile) -> String {
    let mut out = format!("field {}\n", file.field);
    if let Some(s) = file.secret {
        let _ = writeln!(out, "secret {s}");
    }
    if let Some(s) = file.seed {
        let _ = writeln!(out, "seed {s}");
    }
    for (p, s) in &file.shares {
        let _ = writeln!(out, "share {p} {s}");
    }
    out
}

pub fn parse_shares(text: &str) -> Result<ShareFile, IoError> {
    let mut field = None;
    let mut secret = None;
    let mut seed = None;
    let mut shares = BTreeMap::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let words: Vec<&str> = content.split_whitespace().collect();
        let (directive, args) = (words[0], &words[1..]);
        match directive {
            "field" => {
                let p: u64 = parse_number(line, single_arg(line, directive, args)?, "a prime")?;
                set_once(&mut field, p, line, directive)?;
            }
            "secret" => {
                let s = parse_number(line, single_arg(line, directive, args)?, "a field element")?;
                set_once(&mut secret, s, line, directive)?;
            }
            "seed" => {
                let s = parse_number(line, single_arg(line, directive, args)?, "a seed")?;
                set_once(&mut seed, s, line, directive)?;
            }
            "share" => {
                let [p, s] = args else {
                    return Err(syntax(line, "`share` takes a participant and a value"));
                };
                let p: usize = parse_number(line, p, "a participant number")?;
                if p == 0 {
                    return Err(syntax(line, "participants are numbered from 1"));
                }
                let s: u64 = parse_number(line, s, "a field element")?;
                if shares.insert(p, s).is_some() {
                    return Err(syntax(line, format!("second share for participant {p}")));
                }
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| syntax(last_line.max(1), "missing `field` header"))?;
    Ok(ShareFile {
        field,
        secret,
        seed,
        shares,
    })
}

// ---------------------------------------------------------------------------
// scheme files

/// ```text
/// field 7
/// dimension 3
/// dealer 1 0 0
/// vector 1 1 1 1
/// vector 2 1 2 4
/// ```
pub fn write_scheme(field: &PrimeField, assignment: &VectorAssignment) -> String {
    let mut out = format!(
        "field {}\ndimension {}\ndealer {}\n",
        field.modulus(),
        assignment.dimension(),
        join_values(assignment.dealer())
    );
    for (i, v) in assignment.vectors().iter().enumerate() {
        let _ = writeln!(out, "vector {} {}", i + 1, join_values(v));
    }
    out
}

fn join_values(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses a scheme file. Participant vectors must be listed for `1..=n` in
/// order.
pub fn parse_scheme(text: &str) -> Result<(PrimeField, VectorAssignment), IoError> {
    let mut field: Option<(PrimeField, usize)> = None;
    let mut dimension = None;
    let mut dealer = None;
    let mut vectors: Vec<Vec<u64>> = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let words: Vec<&str> = content.split_whitespace().collect();
        let (directive, args) = (words[0], &words[1..]);
        let values = |args: &[&str]| {
            args.iter()
                .map(|w| parse_number::<u64>(line, w, "a field element"))
                .collect::<Result<Vec<_>, _>>()
        };
        match directive {
            "field" => {
                let p = parse_number(line, single_arg(line, directive, args)?, "a prime")?;
                let f = PrimeField::new(p).map_err(|e| IoError::Scheme {
                    line: Some(line),
                    source: e.into(),
                })?;
                set_once(&mut field, (f, line), line, directive)?;
            }
            "dimension" => {
                let d: usize = parse_number(line, single_arg(line, directive, args)?, "a dimension")?;
                set_once(&mut dimension, d, line, directive)?;
            }
            "dealer" => set_once(&mut dealer, values(args)?, line, directive)?,
            "vector" => {
                let Some((p, rest)) = args.split_first() else {
                    return Err(syntax(line, "`vector` takes a participant and coordinates"));
                };
                let p: usize = parse_number(line, p, "a participant number")?;
                if p != vectors.len() + 1 {
                    return Err(syntax(
                        line,
                        format!("expected vector {}, found vector {p}", vectors.len() + 1),
                    ));
                }
                vectors.push(values(rest)?);
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let end = last_line.max(1);
    let (field, _) = field.ok_or_else(|| syntax(end, "missing `field` header"))?;
    let dimension = dimension.ok_or_else(|| syntax(end, "missing `dimension` header"))?;
    let dealer = dealer.ok_or_else(|| syntax(end, "missing `dealer` line"))?;
    let assignment =
        VectorAssignment::new(&field, dimension, dealer, vectors).map_err(|source| IoError::Scheme {
            line: None,
            source,
        })?;
    Ok((field, assignment))
}

// ---------------------------------------------------------------------------
// reports

/// Output style for [`Report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    /// `key: value` lines.
    #[default]
    Human,
    /// `key=value` lines, spaces in keys replaced by `_`.
    Records,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Format::Human),
            "records" => Ok(Format::Records),
            other => Err(format!("unknown format `{other}` (expected human or records)")),
        }
    }
}

/// An ordered list of facts; both formats carry exactly the same entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(String, String)>) -> Self {
        Report { entries }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn append(&mut self, other: Report) -> &mut Self {
        self.entries.extend(other.entries);
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// First value stored under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match format {
                Format::Human => {
                    let _ = writeln!(out, "{k}: {v}");
                }
                Format::Records => {
                    let _ = writeln!(out, "{}={v}", k.replace(' ', "_"));
                }
            }
        }
        out
    }
}

/// Basic statistics: sizes, `Ω(k+1)`, threshold test and hypotheses.
pub fn analyze_report(g: &AccessStructure) -> Report {
    let mut r = Report::new();
    r.push("participants", g.n())
        .push("k", g.k())
        .push("basis size", g.basis().len());
    match g.check_hypotheses() {
        Ok(h) => {
            r.push(format!("omega({})", g.k() + 1), format_counts(&h.omega));
            r.push("threshold", yes_no(g.is_threshold()));
            r.push("hypotheses", hypotheses_line(&h));
        }
        Err(e) => {
            r.push("threshold", yes_no(g.is_threshold()));
            r.push("hypotheses", format!("UNDEFINED ({e})"));
        }
    }
    r
}

fn hypotheses_line(h: &crate::structure::HypothesisReport) -> String {
    if h.satisfied() {
        "met".to_string()
    } else {
        format!("NOT MET ({})", h.failures().join(", "))
    }
}

/// Classes, representatives and the quotient's basis.
pub fn reduction_report(r: &ReductionResult) -> Report {
    let mut out = Report::new();
    out.push("classes", join_sets(&r.classes));
    out.push(
        "representatives",
        join_values(&r.representatives.iter().map(|&p| p as u64).collect::<Vec<_>>()),
    );
    out.push("trivial", yes_no(r.is_trivial()));
    out.push("fixpoint", yes_no(r.fixpoint));
    out.push("quotient participants", r.quotient.n());
    out.push("quotient threshold", yes_no(r.quotient.is_threshold()));
    for m in r.quotient.basis() {
        out.push(
            "quotient minset",
            join_values(&m.iter().map(|p| p as u64).collect::<Vec<_>>()),
        );
    }
    out
}

pub fn certificate_report(cert: &IndependentSequenceCertificate) -> Report {
    Report::from_entries(certificate_entries(cert))
}

/// Field, dimension, dealer vector and one line per participant vector.
pub fn scheme_report(scheme: &LinearScheme) -> Report {
    let asg = scheme.assignment();
    let mut r = Report::new();
    r.push("field", scheme.field().modulus())
        .push("dimension", asg.dimension())
        .push("dealer", join_values(asg.dealer()));
    for (i, v) in asg.vectors().iter().enumerate() {
        r.push(format!("vector {}", i + 1), join_values(v));
    }
    r
}

pub fn classification_report(c: &Classification) -> Report {
    let k = c.hypotheses.k;
    let mut r = Report::new();
    r.push("status", c.status.label());
    r.push(format!("omega({})", k + 1), format_counts(&c.hypotheses.omega));
    r.push("hypotheses", hypotheses_line(&c.hypotheses));
    r.push("classes", join_sets(&c.reduction.classes));
    r.push("quotient threshold", yes_no(c.reduction.quotient.is_threshold()));
    if c.degenerate {
        r.push("degenerate", "yes");
    }
    match &c.evidence {
        Evidence::Scheme(s) => {
            r.append(scheme_report(s));
            r.push("scheme verified", yes_no(c.scheme_verified));
        }
        Evidence::Certificate(e) => {
            let source = match &e.source {
                CertificateSource::Replay { template, roles } => format!(
                    "replay {template} roles {}",
                    join_values(&roles.iter().map(|&p| p as u64).collect::<Vec<_>>())
                ),
                CertificateSource::Search {
                    on_quotient,
                    exhaustive,
                } => format!(
                    "search on {}{}",
                    if *on_quotient { "quotient" } else { "original" },
                    if *exhaustive { "" } else { " (budget hit)" }
                ),
            };
            r.push("certificate source", source);
            r.append(certificate_report(&e.certificate));
        }
        Evidence::ExhaustedCaps(caps) => {
            r.push("exhausted max m", caps.max_m);
            r.push("exhausted max a", caps.max_a);
        }
        Evidence::None => {}
    }
    r
}

pub fn verification_report(correct: &CorrectnessReport, private: &PrivacyReport) -> Report {
    let mut r = Report::new();
    r.push("dealer states", correct.dealer_states);
    r.push("qualified sets checked", correct.sets_checked);
    match &correct.failure {
        None => {
            r.push("correctness", "PASS");
        }
        Some(f) => {
            r.push("correctness", "FAIL");
            r.push("failing set", f.set);
            r.push("failing dealer vector", join_values(&f.dealer_vector));
            r.push("expected secret", f.expected);
            r.push(
                "recovered",
                f.recovered.map_or("none".to_string(), |v| v.to_string()),
            );
        }
    }
    r.push("unqualified sets checked", private.sets_checked);
    r.push("privacy", if private.passed() { "PASS" } else { "FAIL" });
    for s in &private.leaking_sets {
        r.push("leaking set", s);
    }
    r
}

/// Summary of a theorem sweep. Wall time is left out so the output is
/// reproducible; callers add it on request.
pub fn theorem_report(t: &TheoremCheckReport) -> Report {
    let mut r = Report::new();
    r.push("n", t.n).push("k", t.k).push("dedup", yes_no(t.dedup));
    r.push("examined", t.examined);
    for status in [
        crate::classifier::Status::Ideal,
        crate::classifier::Status::NotIdeal,
        crate::classifier::Status::Unresolved,
    ] {
        r.push(status.label(), t.count(status));
    }
    r.push("non-threshold reductions", t.non_threshold_reductions);
    if let Some(all) = t.k2_all_complete {
        r.push("k=2 all complete", yes_no(all));
    }
    r.push("violations", t.violations.len());
    for v in &t.violations {
        let sets: Vec<ParticipantSet> = v.structure.basis().to_vec();
        r.push("violation", format!("{} [{}]", v.reason, join_sets(&sets)));
    }
    r.push("result", if t.passed() { "PASS" } else { "FAIL" });
    r
}
