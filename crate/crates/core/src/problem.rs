//! Line-oriented problem files.
//!
//! ```text
//! # diagonal quartic
//! ring p=5 vars=[x1,x2,x3,x4]
//! quotient = [x1^4 + x2^4 + x3^4 + x4^4]
//! ideal I = [x1, x2, x3, x4]
//! module M = cyclic []
//! module N = idealmod [x1, x2]
//! module T = coker rows=2 [[x1, 0], [0, x2]]
//! closedform F = 168/61 * 125^n - 107/61 * 3^n
//! data S = [1, 339, 43017]
//! ```
//!
//! `#` starts a comment. A declaration continues onto following lines while
//! its brackets are unbalanced, and onto any indented line. Coker relations
//! are listed column by column. Modules accept a trailing `rank=<k>`
//! assertion and the ring an `order=grevlex|lex|deglex` option. The module
//! name `R` is predeclared as the ring itself.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::asymptotics::ClosedForm;
use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::hk::{HkSeries, IdealHandle, ModuleKind, ModulePresentation, RingPresentation};
use crate::monomial::MonomialOrder;
use crate::poly::{PolyRing, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub ring: Arc<PolyRing>,
    pub quotient: Vec<Polynomial>,
    pub ideals: Vec<(String, Vec<Polynomial>)>,
    pub modules: Vec<(String, ModulePresentation)>,
    pub closed_forms: Vec<(String, ClosedForm)>,
    pub data: Vec<(String, Vec<BigUint>)>,
}

pub const RING_MODULE: &str = "R";

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Problem {
        line,
        column,
        message: message.into(),
    }
}

/// A logical declaration: text plus where it started.
struct Decl {
    line: usize,
    text: String,
}

fn depth_delta(s: &str) -> i64 {
    s.chars()
        .map(|c| match c {
            '[' | '(' => 1,
            ']' | ')' => -1,
            _ => 0,
        })
        .sum()
}

fn logical_lines(text: &str) -> Vec<Decl> {
    let mut out = Vec::new();
    let mut current: Option<(Decl, i64)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        match current.take() {
            Some((mut decl, depth)) => {
                decl.text.push(' ');
                decl.text.push_str(line);
                let depth = depth + depth_delta(line);
                if depth > 0 {
                    current = Some((decl, depth));
                } else {
                    out.push(decl);
                }
            }
            None => {
                if line.trim().is_empty() {
                    continue;
                }
                if line.starts_with(char::is_whitespace) {
                    if let Some(prev) = out.last_mut() {
                        prev.text.push(' ');
                        prev.text.push_str(line);
                        continue;
                    }
                }
                let decl = Decl {
                    line: i + 1,
                    text: line.to_string(),
                };
                let depth = depth_delta(line);
                if depth > 0 {
                    current = Some((decl, depth));
                } else {
                    out.push(decl);
                }
            }
        }
    }
    if let Some((decl, _)) = current {
        out.push(decl);
    }
    out
}

/// Splits the contents of `[ ... ]` starting at byte `open` on top-level
/// commas. Returns `(byte offset, item)` pairs and the byte after `]`.
fn bracket_items(s: &str, open: usize, line: usize) -> Result<(Vec<(usize, String)>, usize)> {
    if s.as_bytes().get(open) != Some(&b'[') {
        return Err(perr(line, open + 1, "expected `[`"));
    }
    let mut depth = 0i64;
    let mut items = Vec::new();
    let mut start = open + 1;
    for (i, c) in s[open..].char_indices().map(|(i, c)| (i + open, c)) {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth == 0 {
                    let item = &s[start..i];
                    if !item.trim().is_empty() || !items.is_empty() {
                        items.push((start, item.to_string()));
                    }
                    return Ok((items, i + 1));
                }
            }
            ',' if depth == 1 => {
                items.push((start, s[start..i].to_string()));
                start = i + 1;
            }
            _ => {}
        }
    }
    Err(perr(line, open + 1, "unbalanced `[`"))
}

fn skip_ws(s: &str, mut i: usize) -> usize {
    while s.as_bytes().get(i).is_some_and(|b| b.is_ascii_whitespace()) {
        i += 1;
    }
    i
}

fn parse_poly_at(text: &str, offset: usize, ring: &Arc<PolyRing>, line: usize) -> Result<Polynomial> {
    let lead = text.len() - text.trim_start().len();
    Polynomial::parse(text, ring).map_err(|e| match e {
        Error::Syntax { column, message } => perr(line, offset + column, message),
        Error::UnknownVariable { name, column } => {
            perr(line, offset + column, format!("unknown variable `{name}`"))
        }
        other => perr(line, offset + lead + 1, other.to_string()),
    })
}

fn poly_list(s: &str, open: usize, ring: &Arc<PolyRing>, line: usize) -> Result<(Vec<Polynomial>, usize)> {
    let (items, end) = bracket_items(s, open, line)?;
    let polys = items
        .iter()
        .map(|(off, t)| parse_poly_at(t, *off, ring, line))
        .collect::<Result<Vec<_>>>()?;
    Ok((polys, end))
}

/// Reads `key=value` where value runs to whitespace or `[`.
fn key_value<'a>(s: &'a str, i: usize, key: &str) -> Option<(&'a str, usize)> {
    let rest = &s[i..];
    let body = rest.strip_prefix(key)?.strip_prefix('=')?;
    let len = body.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(body.len());
    Some((&body[..len], i + key.len() + 1 + len))
}

fn ident(s: &str, i: usize) -> (&str, usize) {
    let rest = &s[i..];
    let len = rest
        .find(|c: char| !(c.is_alphanumeric() || c == '_'))
        .unwrap_or(rest.len());
    (&rest[..len], i + len)
}

/// `NAME =` after a keyword; returns the name and the index after `=`.
fn name_eq(s: &str, i: usize, line: usize) -> Result<(String, usize)> {
    let i = skip_ws(s, i);
    let (name, j) = ident(s, i);
    if name.is_empty() {
        return Err(perr(line, i + 1, "expected a name"));
    }
    let j = skip_ws(s, j);
    if s.as_bytes().get(j) != Some(&b'=') {
        return Err(perr(line, j + 1, "expected `=`"));
    }
    Ok((name.to_string(), skip_ws(s, j + 1)))
}

fn expect_end(s: &str, i: usize, line: usize) -> Result<()> {
    let i = skip_ws(s, i);
    if i < s.len() {
        return Err(perr(line, i + 1, format!("unexpected `{}`", &s[i..])));
    }
    Ok(())
}

fn parse_ring_line(s: &str, line: usize) -> Result<Arc<PolyRing>> {
    let mut i = skip_ws(s, "ring".len() + s.len() - s.trim_start().len());
    let mut p = None;
    let mut vars = None;
    let mut order = MonomialOrder::GrevLex;
    while i < s.len() {
        if let Some((v, j)) = key_value(s, i, "p") {
            let val: u64 = v.parse().map_err(|_| perr(line, i + 3, "expected an integer characteristic"))?;
            p = Some((val, i + 3));
            i = j;
        } else if s[i..].starts_with("vars=") {
            let (items, end) = bracket_items(s, i + 5, line)?;
            let mut names = Vec::new();
            for (off, it) in items {
                let name = it.trim();
                let (id, _) = ident(name, 0);
                if name.is_empty() || id.len() != name.len() || name.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(perr(line, off + 1, format!("bad variable name `{name}`")));
                }
                if names.iter().any(|n| n == name) {
                    return Err(Error::DuplicateName(name.to_string()));
                }
                names.push(name.to_string());
            }
            vars = Some(names);
            i = end;
        } else if let Some((v, j)) = key_value(s, i, "order") {
            order = MonomialOrder::from_name(v).ok_or_else(|| perr(line, i + 7, format!("unknown order `{v}`")))?;
            i = j;
        } else {
            return Err(perr(line, i + 1, "expected `p=`, `vars=[...]` or `order=`"));
        }
        i = skip_ws(s, i);
    }
    let (p, pcol) = p.ok_or_else(|| perr(line, 1, "ring declaration needs `p=`"))?;
    let vars = vars.ok_or_else(|| perr(line, 1, "ring declaration needs `vars=[...]`"))?;
    PolyRing::new(p, vars, order).map_err(|e| match e {
        Error::NotPrime(_) => perr(line, pcol, format!("non-prime characteristic {p}")),
        other => perr(line, 1, other.to_string()),
    })
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut ring: Option<Arc<PolyRing>> = None;
        let mut quotient: Option<Vec<Polynomial>> = None;
        let mut ideals = Vec::new();
        let mut modules: Vec<(String, ModulePresentation)> = Vec::new();
        let mut closed_forms = Vec::new();
        let mut data = Vec::new();
        let mut names: Vec<String> = vec![RING_MODULE.to_string()];
        let mut claim = |name: &str| -> Result<()> {
            if names.iter().any(|n| n == name) {
                return Err(Error::DuplicateName(name.to_string()));
            }
            names.push(name.to_string());
            Ok(())
        };

        for decl in logical_lines(text) {
            let s = decl.text.as_str();
            let line = decl.line;
            let start = skip_ws(s, 0);
            let (kw, after) = ident(s, start);
            if kw == "ring" {
                if ring.is_some() {
                    return Err(perr(line, start + 1, "second ring declaration"));
                }
                ring = Some(parse_ring_line(s, line)?);
                continue;
            }
            if kw == "closedform" {
                let (name, i) = name_eq(s, after, line)?;
                claim(&name)?;
                let cf: ClosedForm = s[i..].trim().parse().map_err(|e| match e {
                    Error::Syntax { column, message } => perr(line, i + column, message),
                    other => perr(line, i + 1, other.to_string()),
                })?;
                closed_forms.push((name, cf));
                continue;
            }
            if kw == "data" {
                let (name, i) = name_eq(s, after, line)?;
                claim(&name)?;
                let (items, end) = bracket_items(s, i, line)?;
                let vals = items
                    .iter()
                    .map(|(off, t)| {
                        t.trim()
                            .parse::<BigUint>()
                            .map_err(|_| perr(line, off + 1, format!("expected a nonnegative integer, got `{}`", t.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                expect_end(s, end, line)?;
                data.push((name, vals));
                continue;
            }
            let Some(r) = ring.clone() else {
                return Err(perr(line, start + 1, "the ring must be declared first"));
            };
            match kw {
                "quotient" => {
                    if quotient.is_some() {
                        return Err(perr(line, start + 1, "second quotient declaration"));
                    }
                    let i = skip_ws(s, after);
                    if s.as_bytes().get(i) != Some(&b'=') {
                        return Err(perr(line, i + 1, "expected `=`"));
                    }
                    let (polys, end) = poly_list(s, skip_ws(s, i + 1), &r, line)?;
                    expect_end(s, end, line)?;
                    quotient = Some(polys);
                }
                "ideal" => {
                    let (name, i) = name_eq(s, after, line)?;
                    claim(&name)?;
                    let (polys, end) = poly_list(s, i, &r, line)?;
                    expect_end(s, end, line)?;
                    ideals.push((name, polys));
                }
                "module" => {
                    let (name, i) = name_eq(s, after, line)?;
                    claim(&name)?;
                    let (kind, j) = ident(s, i);
                    let j = skip_ws(s, j);
                    let (mut module, end) = match kind {
                        "cyclic" => {
                            let (polys, end) = poly_list(s, j, &r, line)?;
                            (ModulePresentation::cyclic(polys), end)
                        }
                        "idealmod" => {
                            let (polys, end) = poly_list(s, j, &r, line)?;
                            (ModulePresentation::ideal_as_module(polys), end)
                        }
                        "coker" => {
                            let (rows, k) = key_value(s, j, "rows")
                                .ok_or_else(|| perr(line, j + 1, "expected `rows=`"))?;
                            let rows: usize = rows.parse().map_err(|_| perr(line, j + 6, "expected row count"))?;
                            let k = skip_ws(s, k);
                            let (cols, end) = bracket_items(s, k, line)?;
                            let mut relations = Vec::new();
                            for (off, c) in cols {
                                let lead = c.len() - c.trim_start().len();
                                let (col, _) = poly_list(&c, lead, &r, line).map_err(|e| shift(e, off))?;
                                if col.len() != rows {
                                    return Err(perr(
                                        line,
                                        off + lead + 1,
                                        format!("relation column has {} entries, expected {rows}", col.len()),
                                    ));
                                }
                                relations.push(col);
                            }
                            (ModulePresentation::coker(rows, relations)?, end)
                        }
                        other => {
                            return Err(perr(
                                line,
                                i + 1,
                                format!("unknown module kind `{other}`; expected cyclic, idealmod or coker"),
                            ))
                        }
                    };
                    let k = skip_ws(s, end);
                    let end = if let Some((v, k2)) = key_value(s, k, "rank") {
                        module.asserted_rank =
                            Some(v.parse().map_err(|_| perr(line, k + 6, "expected a rank"))?);
                        k2
                    } else {
                        k
                    };
                    expect_end(s, end, line)?;
                    modules.push((name, module));
                }
                other => {
                    return Err(perr(line, start + 1, format!("unknown declaration `{other}`")));
                }
            }
        }
        let ring = ring.ok_or_else(|| perr(1, 1, "missing ring declaration"))?;
        Ok(ProblemFile {
            ring,
            quotient: quotient.unwrap_or_default(),
            ideals,
            modules,
            closed_forms,
            data,
        })
    }

    /// Builds the ring, computing the basis of the quotient ideal.
    pub fn ring_presentation(&self, budget: &Budget) -> Result<RingPresentation> {
        RingPresentation::new(self.ring.clone(), self.quotient.clone(), budget)
    }

    pub fn ideal(&self, name: &str) -> Result<IdealHandle> {
        self.ideals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| IdealHandle::new(g.clone()))
            .ok_or_else(|| Error::UnknownReference(name.to_string()))
    }

    /// The single declared ideal, used when a command names none.
    pub fn default_ideal(&self) -> Result<(String, IdealHandle)> {
        match self.ideals.as_slice() {
            [(name, g)] => Ok((name.clone(), IdealHandle::new(g.clone()))),
            [] => Err(Error::UnknownReference("no ideal declared".into())),
            _ => Err(Error::Invalid("several ideals declared; choose one with --ideal".into())),
        }
    }

    pub fn module(&self, name: &str) -> Result<ModulePresentation> {
        if name == RING_MODULE {
            return Ok(ModulePresentation::ring().with_rank(1));
        }
        self.modules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::UnknownReference(name.to_string()))
    }

    pub fn closed_form(&self, name: &str) -> Result<ClosedForm> {
        self.closed_forms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::UnknownReference(name.to_string()))
    }

    pub fn data_series(&self, name: &str) -> Result<HkSeries> {
        let (_, vals) = self
            .data
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownReference(name.to_string()))?;
        let p = self.ring.characteristic() as u64;
        let mut entries = Vec::with_capacity(vals.len());
        for (n, v) in vals.iter().enumerate() {
            let q = p.checked_pow(n as u32).ok_or(Error::ExponentOverflow)?;
            entries.push(crate::hk::HkEntry {
                n: n as u32,
                q,
                value: v.clone(),
            });
        }
        Ok(HkSeries {
            module: name.to_string(),
            ideal: String::new(),
            p: p as u32,
            entries,
        })
    }

    /// Canonical text; parses back to an equal `ProblemFile`.
    pub fn to_text(&self) -> String {
        let list = |ps: &[Polynomial]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let r = &self.ring;
        let _ = writeln!(
            out,
            "ring p={} vars=[{}] order={}",
            r.characteristic(),
            r.vars().join(","),
            r.order().name()
        );
        if !self.quotient.is_empty() {
            let _ = writeln!(out, "quotient = [{}]", list(&self.quotient));
        }
        for (name, g) in &self.ideals {
            let _ = writeln!(out, "ideal {name} = [{}]", list(g));
        }
        for (name, m) in &self.modules {
            let body = match &m.kind {
                ModuleKind::Cyclic { ideal } => format!("cyclic [{}]", list(ideal)),
                ModuleKind::IdealAsModule { generators } => format!("idealmod [{}]", list(generators)),
                ModuleKind::Coker { rows, relations } => format!(
                    "coker rows={rows} [{}]",
                    relations.iter().map(|c| format!("[{}]", list(c))).collect::<Vec<_>>().join(", ")
                ),
            };
            let rank = m.asserted_rank.map(|k| format!(" rank={k}")).unwrap_or_default();
            let _ = writeln!(out, "module {name} = {body}{rank}");
        }
        for (name, cf) in &self.closed_forms {
            let _ = writeln!(out, "closedform {name} = {cf}");
        }
        for (name, vals) in &self.data {
            let vals: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "data {name} = [{}]", vals.join(", "));
        }
        out
    }
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Problem { line, column, message } => Error::Problem {
            line,
            column: column + offset,
            message,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUARTIC: &str = "\
# diagonal quartic over F_5
ring p=5 vars=[x1,x2,x3,x4]
quotient = [x1^4 + x2^4 + x3^4 + x4^4]
ideal I = [x1, x2, x3, x4]
";

    #[test]
    fn parses_quartic_file() {
        let pf = ProblemFile::parse(QUARTIC).unwrap();
        assert_eq!(pf.ring.characteristic(), 5);
        assert_eq!(pf.ring.nvars(), 4);
        assert_eq!(pf.quotient.len(), 1);
        assert_eq!(pf.ideals.len(), 1);
        assert_eq!(pf.ideal("I").unwrap().generators().len(), 4);
    }

    #[test]
    fn rejects_composite_characteristic() {
        let err = ProblemFile::parse("ring p=6 vars=[x]\n").unwrap_err();
        match err {
            Error::Problem { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("non-prime"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_references_and_duplicates() {
        let pf = ProblemFile::parse(QUARTIC).unwrap();
        assert_eq!(pf.ideal("J").unwrap_err(), Error::UnknownReference("J".into()));
        assert!(matches!(pf.module("T"), Err(Error::UnknownReference(_))));
        let dup = format!("{QUARTIC}ideal I = [x1]\n");
        assert_eq!(ProblemFile::parse(&dup).unwrap_err(), Error::DuplicateName("I".into()));
        let dup_r = format!("{QUARTIC}module R = cyclic []\n");
        assert!(matches!(ProblemFile::parse(&dup_r), Err(Error::DuplicateName(_))));
    }

    #[test]
    fn error_positions() {
        let text = "ring p=5 vars=[x, y]\nideal I = [x, z]\n";
        match ProblemFile::parse(text).unwrap_err() {
            Error::Problem { line, column, message } => {
                assert_eq!((line, column), (2, 15));
                assert!(message.contains("unknown variable `z`"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            ProblemFile::parse("ideal I = [x]\n"),
            Err(Error::Problem { line: 1, .. })
        ));
    }

    #[test]
    fn modules_and_extras_round_trip() {
        let text = "\
ring p=3 vars=[x, y] order=lex
ideal m = [x, y]
module T = coker rows=2
  [[x, 0],
   [0, y]]
module N = idealmod [x, y] rank=1
module C = cyclic [x^2 - y]
closedform F = 13/8 * 81^n - 1/4 * 27^n
data S = [1, 9, 81]
";
        let pf = ProblemFile::parse(text).unwrap();
        assert_eq!(pf.modules.len(), 3);
        let (rows, cols) = pf.module("T").unwrap().as_coker().unwrap();
        assert_eq!((rows, cols.len()), (2, 2));
        assert_eq!(cols[0][0].to_string(), "x");
        assert!(cols[0][1].is_zero());
        assert_eq!(pf.module("N").unwrap().asserted_rank, Some(1));
        assert_eq!(pf.data_series("S").unwrap().entries[2].q, 9);
        let again = ProblemFile::parse(&pf.to_text()).unwrap();
        assert_eq!(again, pf);
    }
}
