//! Batch front end: request files in, reports out.
//!
//! A request is an INI-style document:
//!
//! ```text
//! [field]
//! p = 3
//! k = 1
//!
//! [curve]
//! kind = elliptic
//! a = 1
//! b = 0
//!
//! [places]
//! s = 1:0
//!
//! [cover]
//! kind = identity
//!
//! [group]
//! type = PGL
//! n = 2
//! noncompact = true
//!
//! [commands]
//! run = genera, class-number, hasse
//! ```
//!
//! Field elements are integers or `[c0,c1,...]` coefficient lists. Places
//! are `degree:index` selectors against the canonical place ordering.
//! Explicit covers list, for base place `i` of S, `fiberI = deg:idx/f, ...`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_rational::BigRational;

use crate::abgroup::GroupHom;
use crate::curve::{format_point, Curve};
use crate::error::{Error, Result};
use crate::finitefield::{field_bound, make_field, FFElem, FieldSpec};
use crate::fundgroup::{Flavor, FundGroup};
use crate::groups::{self, ClassNumber, Dynkin, GroupSpec, Isogeny};
use crate::hassedomain::{CoverDescriptor, ExplicitCover, HasseDomain};
use crate::oracle::{self, OracleReport};

pub const MAX_REQUEST_BYTES: u64 = 1 << 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ORACLE_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNAVAILABLE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants,
    Genera,
    ClassNumber,
    Hasse,
    Tamagawa,
    Report,
    OracleCheck,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Invariants,
        Command::Genera,
        Command::ClassNumber,
        Command::Hasse,
        Command::Tamagawa,
        Command::Report,
        Command::OracleCheck,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Genera => "genera",
            Command::ClassNumber => "class-number",
            Command::Hasse => "hasse",
            Command::Tamagawa => "tamagawa",
            Command::Report => "report",
            Command::OracleCheck => "oracle-check",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.iter().copied().find(|c| c.name() == s)
    }

    fn needs_group(&self) -> bool {
        !matches!(self, Command::OracleCheck)
    }
}

#[derive(Clone, Debug)]
pub struct RequestFile {
    pub domain: HasseDomain,
    pub cover: CoverDescriptor,
    pub group: Option<GroupSpec>,
    pub commands: Vec<Command>,
}

struct Entry {
    line: usize,
    value: String,
}

struct Section {
    line: usize,
    keys: BTreeMap<String, Entry>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("field", &["p", "k"]),
    ("curve", &["kind", "a", "b"]),
    ("places", &["s"]),
    ("cover", &["kind", "d", "k", "curve", "a", "b", "degree"]),
    ("group", &["type", "n", "isogeny", "noncompact", "splitting_point"]),
    ("commands", &["run"]),
];

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Request { line, message: message.into() }
}

fn known_key(section: &str, key: &str) -> bool {
    if section == "cover" && key.strip_prefix("fiber").is_some_and(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit())) {
        return true;
    }
    SECTIONS.iter().any(|(s, keys)| *s == section && keys.contains(&key))
}

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split(['#', ';']).next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| bad(line, "unterminated section header"))?.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(bad(line, format!("unknown section [{}]", name)));
            }
            if out.contains_key(name) {
                return Err(bad(line, format!("section [{}] repeated", name)));
            }
            out.insert(name.to_string(), Section { line, keys: BTreeMap::new() });
            current = Some(name.to_string());
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| bad(line, format!("expected key = value, got '{}'", body)))?;
        let (k, v) = (k.trim(), v.trim());
        let sec = current.as_ref().ok_or_else(|| bad(line, format!("key '{}' outside any section", k)))?;
        if !known_key(sec, k) {
            return Err(bad(line, format!("unknown key '{}' in [{}]", k, sec)));
        }
        let s = out.get_mut(sec).unwrap();
        if s.keys.contains_key(k) {
            return Err(bad(line, format!("key '{}' repeated in [{}]", k, sec)));
        }
        s.keys.insert(k.to_string(), Entry { line, value: v.to_string() });
    }
    Ok(out)
}

struct Sections(BTreeMap<String, Section>);

impl Sections {
    fn section(&self, name: &str) -> Result<&Section> {
        self.0.get(name).ok_or_else(|| bad(0, format!("missing section [{}]", name)))
    }

    fn get(&self, sec: &str, key: &str) -> Option<&Entry> {
        self.0.get(sec).and_then(|s| s.keys.get(key))
    }

    fn require(&self, sec: &str, key: &str) -> Result<&Entry> {
        let s = self.section(sec)?;
        s.keys.get(key).ok_or_else(|| bad(s.line, format!("[{}] is missing key '{}'", sec, key)))
    }

    fn number<T: std::str::FromStr>(&self, sec: &str, key: &str, default: Option<T>) -> Result<T> {
        match (self.get(sec, key), default) {
            (None, Some(d)) => Ok(d),
            _ => {
                let e = self.require(sec, key)?;
                e.value.parse().map_err(|_| bad(e.line, format!("{} = '{}' is not a valid number", key, e.value)))
            }
        }
    }

    fn flag(&self, sec: &str, key: &str) -> Result<Option<bool>> {
        match self.get(sec, key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" | "yes" => Ok(Some(true)),
                "false" | "no" => Ok(Some(false)),
                v => Err(bad(e.line, format!("{} = '{}' is not true or false", key, v))),
            },
        }
    }
}

fn at<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Request { .. } => e,
        other => bad(line, other.to_string()),
    })
}

fn parse_elem(field: &FieldSpec, e: &Entry) -> Result<FFElem> {
    let v = e.value.trim();
    let coeffs: Vec<i64> = match v.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        Some(inner) => inner
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(e.line, format!("'{}' is not a coefficient list", v)))?,
        None => vec![v.parse().map_err(|_| bad(e.line, format!("'{}' is not an integer", v)))?],
    };
    at(e.line, field.from_coeffs(&coeffs))
}

fn parse_selector(line: usize, s: &str) -> Result<(usize, usize)> {
    let (d, i) = s.split_once(':').ok_or_else(|| bad(line, format!("place selector '{}' is not degree:index", s)))?;
    match (d.trim().parse(), i.trim().parse()) {
        (Ok(d), Ok(i)) => Ok((d, i)),
        _ => Err(bad(line, format!("place selector '{}' is not degree:index", s))),
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn build_curve(secs: &Sections, sec: &str, field: FieldSpec) -> Result<Curve> {
    let kind_key = if sec == "cover" { "curve" } else { "kind" };
    let kind = secs.require(sec, kind_key)?;
    match kind.value.as_str() {
        "line" | "projective_line" => Ok(Curve::projective_line(field)),
        "elliptic" => {
            let a = parse_elem(&field, secs.require(sec, "a")?)?;
            let b = parse_elem(&field, secs.require(sec, "b")?)?;
            at(kind.line, Curve::elliptic(field, a, b))
        }
        v => Err(bad(kind.line, format!("curve kind '{}' is neither line nor elliptic", v))),
    }
}

fn build_cover(secs: &Sections, base: &HasseDomain) -> Result<CoverDescriptor> {
    let Ok(sec) = secs.section("cover") else {
        return Ok(CoverDescriptor::identity(base));
    };
    let kind = secs.get("cover", "kind").map_or("identity", |e| e.value.as_str());
    match kind {
        "identity" => Ok(CoverDescriptor::identity(base)),
        "constant" => {
            let d: usize = secs.number("cover", "d", None)?;
            at(secs.require("cover", "d")?.line, CoverDescriptor::constant_extension(base, d))
        }
        "explicit" => {
            let p = base.curve().field().p();
            let k: usize = secs.number("cover", "k", Some(base.curve().field().k()))?;
            let field = at(sec.line, make_field(p, k))?;
            let curve = build_curve(secs, "cover", field)?;
            let degree: usize = secs.number("cover", "degree", None)?;
            let mut fibers = Vec::new();
            for i in 0..base.s_size() {
                let e = secs.require("cover", &format!("fiber{}", i))?;
                let mut fib = Vec::new();
                for item in list(&e.value) {
                    let (sel, f) = item.split_once('/').ok_or_else(|| bad(e.line, format!("fiber entry '{}' is not deg:idx/f", item)))?;
                    let f: usize = f.trim().parse().map_err(|_| bad(e.line, format!("residue degree '{}' is not a number", f)))?;
                    fib.push((parse_selector(e.line, sel)?, f));
                }
                fibers.push(fib);
            }
            if let Some((name, e)) = sec.keys.iter().find(|(name, _)| {
                name.strip_prefix("fiber").and_then(|r| r.parse::<usize>().ok()).is_some_and(|i| i >= base.s_size())
            }) {
                return Err(bad(e.line, format!("{} names a place outside S", name)));
            }
            at(sec.line, CoverDescriptor::explicit(base, ExplicitCover { curve, degree, fibers }))
        }
        v => Err(bad(secs.require("cover", "kind")?.line, format!("cover kind '{}' is not identity, constant or explicit", v))),
    }
}

fn build_group(secs: &Sections, base: &HasseDomain, cover: &CoverDescriptor) -> Result<Option<GroupSpec>> {
    let Ok(sec) = secs.section("group") else {
        return Ok(None);
    };
    let ty = secs.require("group", "type")?;
    let n = match secs.get("group", "n") {
        Some(_) => Some(secs.number::<usize>("group", "n", None)?),
        None => None,
    };
    let dynkin = at(ty.line, Dynkin::parse(&ty.value, n))?;
    let isogeny = match secs.get("group", "isogeny") {
        Some(e) => at(e.line, e.value.parse::<Isogeny>())?,
        None => Isogeny::Adjoint,
    };
    let twist = if cover.is_identity() { None } else { Some(cover.clone()) };
    let spec = at(
        sec.line,
        GroupSpec::new(dynkin, isogeny, base.clone(), twist, secs.flag("group", "noncompact")?, secs.flag("group", "splitting_point")?),
    )?;
    at(sec.line, spec.fundamental_group())?;
    Ok(Some(spec))
}

pub fn parse_request_str(text: &str) -> Result<RequestFile> {
    let secs = Sections(split_sections(text)?);
    let p: u64 = secs.number("field", "p", None)?;
    let k: usize = secs.number("field", "k", Some(1))?;
    let field = at(secs.require("field", "p")?.line, make_field(p, k))?;
    let curve = build_curve(&secs, "curve", field)?;
    let s = secs.require("places", "s")?;
    let selectors = list(&s.value).map(|x| parse_selector(s.line, x)).collect::<Result<Vec<_>>>()?;
    let domain = at(s.line, HasseDomain::from_selectors(curve, &selectors))?;
    let cover = build_cover(&secs, &domain)?;
    let group = build_group(&secs, &domain, &cover)?;
    let commands = match secs.get("commands", "run") {
        None => Vec::new(),
        Some(e) => list(&e.value)
            .map(|c| Command::parse(c).ok_or_else(|| bad(e.line, format!("unknown command '{}'", c))))
            .collect::<Result<_>>()?,
    };
    Ok(RequestFile { domain, cover, group, commands })
}

pub fn parse_request(path: &Path) -> Result<RequestFile> {
    let meta = fs::metadata(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
    if meta.len() > MAX_REQUEST_BYTES {
        return Err(Error::Io(format!("{}: request exceeds {} bytes", path.display(), MAX_REQUEST_BYTES)));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
    parse_request_str(&text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub key: String,
    pub value: String,
    pub tags: Vec<(String, String)>,
    /// Free text shown only in human output.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub title: String,
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub blocks: Vec<Block>,
    pub unavailable: bool,
    pub oracle_failed: bool,
}

fn reason_tag(e: &Error) -> &'static str {
    match e {
        Error::UnitsUnavailable(_) => "unit-norm-data",
        Error::NotAdmissible(_) => "not-admissible",
        Error::NoSplittingPoint => "no-splitting-point",
        Error::UnsupportedCover(_) => "unsupported-cover",
        Error::NotApplicable(_) => "not-applicable",
        _ => "error",
    }
}

fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn machine_safe(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join("_")
}

impl Block {
    fn new(title: &str) -> Self {
        Block { title: title.to_string(), lines: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl ToString, tags: &[(&str, &str)]) {
        self.lines.push(Line {
            key: key.to_string(),
            value: value.to_string(),
            tags: tags.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            note: None,
        });
    }

    fn missing(&mut self, key: &str, e: &Error, report_flag: &mut bool) {
        *report_flag = true;
        self.lines.push(Line {
            key: key.to_string(),
            value: "unavailable".into(),
            tags: vec![("reason".into(), reason_tag(e).into())],
            note: Some(e.to_string()),
        });
    }
}

impl Report {
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            let _ = writeln!(out, "block={}", b.title);
            for l in &b.lines {
                let _ = write!(out, "{}={}", l.key, machine_safe(&l.value));
                for (k, v) in &l.tags {
                    let _ = write!(out, " {}={}", k, machine_safe(v));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            let _ = writeln!(out, "== {} ==", b.title);
            for l in &b.lines {
                let _ = write!(out, "  {}: {}", l.key, l.value);
                if !l.tags.is_empty() {
                    let tags: Vec<String> = l.tags.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
                    let _ = write!(out, "  [{}]", tags.join(", "));
                }
                if let Some(n) = &l.note {
                    let _ = write!(out, "  ({})", n);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn exit_code(&self) -> i32 {
        if self.oracle_failed {
            EXIT_ORACLE_MISMATCH
        } else if self.unavailable {
            EXIT_UNAVAILABLE
        } else {
            EXIT_OK
        }
    }

    pub fn render(&self, machine: bool) -> String {
        if machine { self.render_machine() } else { self.render_human() }
    }
}

fn echo(req: &RequestFile) -> Block {
    let mut b = Block::new("request");
    let curve = req.domain.curve();
    let field = curve.field();
    b.put("field", format!("F_{}", field.q()), &[("p", &field.p().to_string()), ("k", &field.k().to_string())]);
    b.put("modulus", field.modulus_string(), &[]);
    b.put("curve", curve.describe(), &[]);
    for (i, pl) in req.domain.places().iter().enumerate() {
        let pt = format_point(&pl.residue_field, &pl.points[0]);
        b.put(&format!("place{}", i), format!("{}:{}", pl.degree, pl.index), &[("point", &pt)]);
    }
    b.put("cover", req.cover.describe(), &[("degree", &req.cover.degree().to_string())]);
    if !req.cover.is_identity() {
        b.put("cover_curve", req.cover.cover().curve().describe(), &[("s_prime", &req.cover.cover_s_size().to_string())]);
    }
    if let Some(g) = &req.group {
        let iso = match g.isogeny {
            Isogeny::Adjoint => "adjoint",
            Isogeny::SimplyConnected => "simply_connected",
        };
        b.put(
            "group",
            g.dynkin,
            &[
                ("isogeny", iso),
                ("noncompact", &g.noncompact.to_string()),
                ("splitting_point", &g.splitting_point.to_string()),
            ],
        );
    }
    b
}

fn group_of(req: &RequestFile) -> &GroupSpec {
    req.group.as_ref().expect("checked before running")
}

fn invariants_block(fg: &FundGroup, rep: &mut Report) -> Block {
    let mut b = Block::new("invariants");
    b.put("F", fg, &[("order", &fg.order().to_string())]);
    let inv = match fg.invariants() {
        Ok(inv) => inv,
        Err(e) => {
            b.missing("i_order", &e, &mut rep.unavailable);
            return b;
        }
    };
    b.put("i_order", inv.i_order(), &[("group", &inv.i.to_string()), ("route", "i-group")]);
    match &inv.j {
        Ok(j) => b.put("j_order", j.order().unwrap_or_default(), &[("group", &j.to_string()), ("route", "j-group")]),
        Err(e) => b.missing("j_order", e, &mut rep.unavailable),
    }
    match &inv.l {
        Ok(l) => b.put("l", rational(l), &[("route", "unit-kernels")]),
        Err(e) => b.missing("l", e, &mut rep.unavailable),
    }
    match &inv.h {
        Ok([h0, h1, h2]) => b.put("h", format!("{},{},{}", h0, h1, h2), &[("route", "h-vector")]),
        Err(e) => b.missing("h", e, &mut rep.unavailable),
    }
    match &inv.chi {
        Ok(c) => b.put("chi", rational(c), &[("route", "h-vector")]),
        Err(e) => b.missing("chi", e, &mut rep.unavailable),
    }
    match inv.identity_holds() {
        Some(ok) => b.put("chi_identity", if ok { "ok" } else { "mismatch" }, &[("route", "chi-identity")]),
        None => b.put("chi_identity", "unchecked", &[("route", "chi-identity")]),
    }
    b
}

fn genera_line(g: &GroupSpec, b: &mut Block, rep: &mut Report) {
    match groups::genera_count(g) {
        Ok(n) => b.put("genera_count", n, &[("route", "i-group")]),
        Err(e) => b.missing("genera_count", &e, &mut rep.unavailable),
    }
}

fn class_line(g: &GroupSpec, b: &mut Block, rep: &mut Report) {
    match groups::class_number(g) {
        Ok(ClassNumber::Exact(n)) => b.put("class_number", n, &[("bound", "exact"), ("route", "j-group")]),
        Ok(ClassNumber::AtLeast(n)) => b.put("class_number", n, &[("bound", "lower"), ("route", "j-surjection")]),
        Err(e) => b.missing("class_number", &e, &mut rep.unavailable),
    }
}

fn hasse_line(g: &GroupSpec, b: &mut Block, rep: &mut Report) {
    match groups::hasse_verdict(g) {
        Ok(h) => b.put(
            "hasse",
            h.outcome,
            &[
                ("criterion", &h.criterion.to_string()),
                ("gcd_condition", if h.gcd_condition { "met" } else { "violated" }),
                ("route", "j-group"),
            ],
        ),
        Err(e) => b.missing("hasse", &e, &mut rep.unavailable),
    }
}

fn tau_line(g: &GroupSpec, b: &mut Block, rep: &mut Report) {
    match groups::tamagawa(g) {
        Ok(t) => {
            let cross = match t.crosscheck_ok() {
                Some(true) => "ok",
                Some(false) => "mismatch",
                None => "unavailable",
            };
            b.put("tau", rational(&t.tau), &[("crosscheck", cross), ("route", t.route)]);
            if t.crosscheck_ok() == Some(false) {
                rep.oracle_failed = true;
            }
        }
        Err(e) => b.missing("tau", &e, &mut rep.unavailable),
    }
}

fn oracle_line(b: &mut Block, r: &OracleReport, rep: &mut Report) {
    if !r.passed() {
        rep.oracle_failed = true;
    }
    b.lines.push(Line {
        key: "oracle".into(),
        value: r.subject.clone(),
        tags: vec![
            ("instances".into(), r.instances.to_string()),
            ("mismatches".into(), r.mismatches.len().to_string()),
        ],
        note: r.mismatches.first().cloned(),
    });
}

pub const ORACLE_SNF_SAMPLES: usize = 10_000;
pub const ORACLE_SEED: u64 = 0x5eed;

fn oracle_block(req: &RequestFile, rep: &mut Report) -> Block {
    let mut b = Block::new("oracle-check");
    oracle_line(&mut b, &oracle::oracle_snf(3, 5, ORACLE_SNF_SAMPLES, ORACLE_SEED), rep);
    let mut curves = vec![req.domain.curve().clone()];
    if !req.cover.is_identity() {
        curves.push(req.cover.cover().curve().clone());
    }
    let bound = field_bound().min(100_000);
    for c in &curves {
        let q = c.field().q();
        if c.is_elliptic() && q + 1 + 2 * (q as f64).sqrt() as u64 + 2 <= oracle::MAX_ORACLE_POINTS {
            oracle_line(&mut b, &oracle::oracle_ec_structure(c), rep);
        }
        let mut d_max = 0;
        while d_max < 3 && q.checked_pow(d_max as u32 + 1).is_some_and(|v| v <= bound) {
            d_max += 1;
        }
        if d_max > 0 {
            oracle_line(&mut b, &oracle::oracle_zeta(c, d_max), rep);
        }
    }
    if let Some(g) = &req.group {
        if let Ok(fg) = g.fundamental_group() {
            for f in &fg.factors {
                let pic = f.cover.cover().pic();
                if pic.is_finite() {
                    let mult = GroupHom::scalar(pic, f.m as i64);
                    oracle_line(&mut b, &oracle::oracle_kernels(&mult), rep);
                }
                if f.flavor == Flavor::ResOneMu {
                    if let Ok(n2) = f.cover.norm_n2(f.m) {
                        oracle_line(&mut b, &oracle::oracle_kernels(&n2), rep);
                    }
                }
            }
        }
    }
    b
}

fn command_block(req: &RequestFile, cmd: Command, rep: &mut Report) -> Block {
    let mut b = Block::new(cmd.name());
    match cmd {
        Command::Invariants => {
            let fg = group_of(req).fundamental_group().expect("validated at parse time");
            return invariants_block(&fg, rep);
        }
        Command::Genera => genera_line(group_of(req), &mut b, rep),
        Command::ClassNumber => class_line(group_of(req), &mut b, rep),
        Command::Hasse => hasse_line(group_of(req), &mut b, rep),
        Command::Tamagawa => tau_line(group_of(req), &mut b, rep),
        Command::OracleCheck => return oracle_block(req, rep),
        Command::Report => {
            let g = group_of(req);
            let fg = g.fundamental_group().expect("validated at parse time");
            b.lines.extend(invariants_block(&fg, rep).lines);
            genera_line(g, &mut b, rep);
            class_line(g, &mut b, rep);
            match groups::h1_size(g) {
                Ok(h) => b.put("h1_size", h, &[("route", "h-vector")]),
                Err(e) => b.missing("h1_size", &e, &mut rep.unavailable),
            }
            if let Ok(v) = groups::verdict(g) {
                match v.consistency() {
                    Some(ok) => b.put("consistency", if ok { "ok" } else { "mismatch" }, &[("route", "genera-times-class")]),
                    None => b.put("consistency", "unchecked", &[("route", "genera-times-class")]),
                }
            }
            hasse_line(g, &mut b, rep);
            tau_line(g, &mut b, rep);
        }
    }
    b
}

/// Runs `commands` (or the request's own list when empty) in order.
pub fn run(req: &RequestFile, commands: &[Command]) -> Result<Report> {
    let cmds = if commands.is_empty() { &req.commands[..] } else { commands };
    if cmds.is_empty() {
        return Err(Error::Request { line: 0, message: "no commands requested".into() });
    }
    if req.group.is_none() {
        if let Some(c) = cmds.iter().find(|c| c.needs_group()) {
            return Err(Error::Request { line: 0, message: format!("command '{}' needs a [group] section", c.name()) });
        }
    }
    let mut rep = Report::default();
    rep.blocks.push(echo(req));
    for &c in cmds {
        let b = command_block(req, c, &mut rep);
        rep.blocks.push(b);
    }
    Ok(rep)
}

/// Output text and exit code for `hassegen <command|run> --request <path>`.
pub fn execute(command: &str, path: &Path, machine: bool) -> (String, i32) {
    let cmds = match command {
        "run" => vec![],
        c => match Command::parse(c) {
            Some(c) => vec![c],
            None => return (format!("error: unknown command '{}'\n", c), EXIT_INPUT),
        },
    };
    let result = parse_request(path).and_then(|req| run(&req, &cmds));
    match result {
        Ok(rep) => (rep.render(machine), rep.exit_code()),
        Err(e) if machine => (format!("error={}\n", machine_safe(&e.to_string())), EXIT_INPUT),
        Err(e) => (format!("error: {}\n", e), EXIT_INPUT),
    }
}
