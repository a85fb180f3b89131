//! Plain-text series format (PSF) and the sectioned result file.
//!
//! ```text
//! psf 1
//! grading 2 3 6
//! order 16
//! component x
//! 1 0 0 1
//! 0 1 0 1
//! component y
//! 0 1 0 1
//! end
//! ```
//!
//! Each record is `k l m coefficient` for the term `c x^k y^l ε^m`.
//! Coefficients are integers or reduced fractions `p/q`. `#` starts a
//! comment. Records are emitted in lexicographic `(k, l, m)` order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::nf::{GeneratorLog, InvariantTables, LogStep, NormalFormResult};
use crate::rational::{self, Rational};
use crate::series::{FormalSeries, Grading, MapSeriesPair, Monomial};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsfDocument {
    pub grading: Grading,
    pub order: u32,
    pub components: Vec<(String, FormalSeries)>,
}

impl PsfDocument {
    pub fn from_map(f: &MapSeriesPair) -> Self {
        PsfDocument {
            grading: f.grading(),
            order: f.order(),
            components: vec![("x".into(), f.x.clone()), ("y".into(), f.y.clone())],
        }
    }

    pub fn from_series(name: &str, s: &FormalSeries) -> Self {
        PsfDocument {
            grading: s.grading(),
            order: s.order(),
            components: vec![(name.into(), s.clone())],
        }
    }

    pub fn component(&self, name: &str) -> Option<&FormalSeries> {
        self.components.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// The map stored in components `x` and `y`.
    pub fn to_map(&self) -> Result<MapSeriesPair> {
        match (self.component("x"), self.component("y")) {
            (Some(x), Some(y)) if self.components.len() == 2 => MapSeriesPair::new(x.clone(), y.clone()),
            _ => Err(Error::Parameter("a map needs exactly the components x and y".into())),
        }
    }

    /// The single series of a one-component document.
    pub fn to_series(&self) -> Result<FormalSeries> {
        match self.components.as_slice() {
            [(_, s)] => Ok(s.clone()),
            _ => Err(Error::Parameter(format!(
                "expected one component, found {}",
                self.components.len()
            ))),
        }
    }

    /// Same content at a lower order.
    pub fn truncated(&self, order: u32) -> Result<Self> {
        if order > self.order {
            return Err(Error::Parameter(format!(
                "requested order {order} exceeds the input order {}",
                self.order
            )));
        }
        Ok(PsfDocument {
            grading: self.grading,
            order,
            components: self
                .components
                .iter()
                .map(|(n, s)| (n.clone(), s.truncate(order)))
                .collect(),
        })
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns,
/// comments removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((body[..s].chars().count() + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_u32(line: usize, (col, tok): (usize, &str), what: &str) -> Result<u32> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || (tok.len() > 1 && tok.starts_with('0')) {
        return Err(perr(line, col, format!("malformed {what} `{tok}`")));
    }
    tok.parse().map_err(|_| perr(line, col, format!("{what} `{tok}` is out of range")))
}

fn expect_arity(line: usize, toks: &[(usize, &str)], n: usize) -> Result<()> {
    if toks.len() != n {
        let col = toks.get(n).map_or(toks[0].0, |t| t.0);
        return Err(perr(
            line,
            col,
            format!("`{}` takes {} argument(s), found {}", toks[0].1, n - 1, toks.len() - 1),
        ));
    }
    Ok(())
}

/// Parses one document from `lines`, which yields `(line number, text)`.
/// Stops after `end`.
fn parse_lines<'a, I>(lines: &mut I) -> Result<PsfDocument>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut grading = None;
    let mut order = None;
    let mut seen_header = false;
    let mut current: Option<(String, BTreeMap<Monomial, Rational>)> = None;
    let mut done: Vec<(String, BTreeMap<Monomial, Rational>)> = Vec::new();
    let mut last_line = 0;

    for (no, text) in lines.by_ref() {
        last_line = no;
        let toks = tokens(text);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        if !seen_header {
            if head != "psf" {
                return Err(perr(no, col, format!("expected `psf {VERSION}`, found `{head}`")));
            }
            expect_arity(no, &toks, 2)?;
            let v = parse_u32(no, toks[1], "version")?;
            if v != VERSION {
                return Err(perr(no, toks[1].0, format!("unsupported version {v}")));
            }
            seen_header = true;
            continue;
        }
        match head {
            "grading" => {
                expect_arity(no, &toks, 4)?;
                if grading.is_some() {
                    return Err(perr(no, col, "duplicate grading"));
                }
                let w: Vec<u32> = toks[1..]
                    .iter()
                    .map(|&t| parse_u32(no, t, "weight"))
                    .collect::<Result<_>>()?;
                grading = Some(
                    Grading::new(w[0], w[1], w[2]).ok_or_else(|| perr(no, toks[1].0, "weights must be positive"))?,
                );
            }
            "order" => {
                expect_arity(no, &toks, 2)?;
                if order.is_some() {
                    return Err(perr(no, col, "duplicate order"));
                }
                order = Some(parse_u32(no, toks[1], "order")?);
            }
            "component" => {
                expect_arity(no, &toks, 2)?;
                if grading.is_none() || order.is_none() {
                    return Err(perr(no, col, "component before grading and order"));
                }
                let name = toks[1].1.to_string();
                if done.iter().chain(current.iter()).any(|(n, _)| *n == name) {
                    return Err(perr(no, toks[1].0, format!("duplicate component `{name}`")));
                }
                done.extend(current.take());
                current = Some((name, BTreeMap::new()));
            }
            "end" => {
                expect_arity(no, &toks, 1)?;
                done.extend(current.take());
                let (Some(g), Some(n)) = (grading, order) else {
                    return Err(perr(no, col, "missing grading or order"));
                };
                if done.is_empty() {
                    return Err(perr(no, col, "document has no components"));
                }
                let components = done
                    .into_iter()
                    .map(|(name, terms)| (name, FormalSeries::from_terms(g, n, terms)))
                    .collect();
                return Ok(PsfDocument {
                    grading: g,
                    order: n,
                    components,
                });
            }
            _ if head.starts_with(|c: char| c.is_ascii_digit()) => {
                let Some((_, terms)) = current.as_mut() else {
                    return Err(perr(no, col, "record outside a component"));
                };
                expect_arity(no, &toks, 4).map_err(|_| perr(no, col, "a record is `k l m coefficient`"))?;
                let k = parse_u32(no, toks[0], "exponent")?;
                let l = parse_u32(no, toks[1], "exponent")?;
                let m = parse_u32(no, toks[2], "exponent")?;
                let c = rational::parse_canonical(toks[3].1).map_err(|e| perr(no, toks[3].0, e))?;
                let mono = Monomial::new(k, l, m);
                let (g, n) = (grading.unwrap(), order.unwrap());
                if g.weight(&mono) > n {
                    return Err(perr(
                        no,
                        col,
                        format!("{mono} has weight {} above the order {n}", g.weight(&mono)),
                    ));
                }
                if terms.contains_key(&mono) {
                    return Err(perr(no, col, format!("duplicate monomial {mono}")));
                }
                terms.insert(mono, c);
            }
            _ => return Err(perr(no, col, format!("unknown directive `{head}`"))),
        }
    }
    Err(perr(last_line + 1, 1, "unexpected end of input, missing `end`"))
}

/// Parses a complete PSF document; only comments and blank lines may
/// follow `end`.
pub fn parse_psf(text: &str) -> Result<PsfDocument> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let doc = parse_lines(&mut lines)?;
    for (no, rest) in lines {
        if let Some(&(col, tok)) = tokens(rest).first() {
            return Err(perr(no, col, format!("unexpected `{tok}` after `end`")));
        }
    }
    Ok(doc)
}

fn write_body(out: &mut String, s: &FormalSeries) {
    for (m, c) in s.terms() {
        let _ = writeln!(out, "{} {} {} {}", m.k, m.l, m.m, rational::format(c));
    }
}

pub fn emit_psf(doc: &PsfDocument) -> String {
    let g = doc.grading;
    let mut out = format!("psf {VERSION}\ngrading {} {} {}\norder {}\n", g.k0, g.l0, g.m0, doc.order);
    for (name, s) in &doc.components {
        let _ = writeln!(out, "component {name}");
        write_body(&mut out, s);
    }
    out.push_str("end\n");
    out
}

/// `k m value` lines of the invariant tables; diagonal cases prefix the
/// `A` and `B` entries.
pub fn emit_invariants(inv: &InvariantTables) -> String {
    let mut out = String::new();
    for ((k, m), c) in &inv.potential {
        let _ = writeln!(out, "{k} {m} {}", rational::format(c));
    }
    for (tag, table) in [("A", &inv.a_table), ("B", &inv.b_table)] {
        for ((k, m), c) in table {
            let _ = writeln!(out, "{tag} {k} {m} {}", rational::format(c));
        }
    }
    out
}

fn emit_step(out: &mut String, step: &LogStep) {
    match step {
        LogStep::Linear(t) => {
            let _ = writeln!(out, "linear {t}");
        }
        LogStep::Generator(chi) => {
            out.push_str("generator\n");
            out.push_str(&emit_psf(&PsfDocument::from_series("chi", chi.chi())));
        }
        other => {
            let _ = writeln!(out, "{}", other.name());
        }
    }
}

pub fn emit_log(log: &GeneratorLog) -> String {
    let mut out = String::new();
    for step in log.steps() {
        emit_step(&mut out, step);
    }
    out
}

/// Result file of `normalize`.
pub fn emit_result(r: &NormalFormResult) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let inv = &r.invariants;
    let mut out = String::from("[hamiltonian]\n");
    out.push_str(&emit_psf(&PsfDocument::from_series("h", &r.h_normal)));
    out.push_str("[invariants]\n");
    out.push_str(&emit_invariants(inv));
    out.push_str("[meta]\n");
    let _ = writeln!(out, "case={}", r.case);
    let _ = writeln!(out, "n={}", opt(inv.n.map(|n| n.to_string())));
    let _ = writeln!(out, "b={}", opt(inv.b.as_ref().map(rational::format)));
    let _ = writeln!(out, "a={}", opt(inv.a.as_ref().map(rational::format)));
    let _ = writeln!(out, "unique={}", r.unique);
    if matches!(r.case, crate::interp::CaseTag::DiagPlus | crate::interp::CaseTag::DiagMinus) {
        out.push_str("condition=cubic-simple-rational-factor\n");
    }
    out.push_str("[log]\n");
    out.push_str(&emit_log(&r.log));
    out
}

/// Reads back the log section written by [`emit_log`].
pub fn parse_log(text: &str) -> Result<GeneratorLog> {
    use crate::lie::Generator;
    use crate::series::LinearMap;

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut log = GeneratorLog::new();
    while let Some((no, line)) = lines.next() {
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let step = match head {
            "reflect" => LogStep::Reflect,
            "central" => LogStep::Central,
            "axis" => LogStep::AxisReflect,
            "linear" => {
                expect_arity(no, &toks, 5)?;
                let v: Vec<Rational> = toks[1..]
                    .iter()
                    .map(|&(c, t)| rational::parse_canonical(t).map_err(|e| perr(no, c, e)))
                    .collect::<Result<_>>()?;
                LogStep::Linear(LinearMap::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
            }
            "generator" => {
                let doc = parse_lines(&mut lines)?;
                let chi = Generator::new(doc.to_series()?).map_err(|e| perr(no, col, e.to_string()))?;
                LogStep::Generator(chi)
            }
            _ => return Err(perr(no, col, format!("unknown log step `{head}`"))),
        };
        log.push(step);
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHEAR: &str = "psf 1\ngrading 2 3 6\norder 16\ncomponent x\n0 1 0 1\n1 0 0 1\ncomponent y\n0 1 0 1\nend\n";

    #[test]
    fn shear_map() {
        let doc = parse_psf(SHEAR).unwrap();
        let f = doc.to_map().unwrap();
        assert_eq!(f.linear_part(), crate::series::LinearMap::from_ints(1, 1, 0, 1));
        assert_eq!(emit_psf(&doc), SHEAR);
    }

    #[test]
    fn comments_and_sorting() {
        let text = "# a map\npsf 1\ngrading 2 3 6  # weights\norder 16\ncomponent x\n1 0 0 1\n0 1 0 1\n\ncomponent y\n0 1 0 1\nend\n";
        let doc = parse_psf(text).unwrap();
        assert_eq!(emit_psf(&doc), SHEAR);
    }

    fn err_at(text: &str) -> (usize, usize) {
        match parse_psf(text).unwrap_err() {
            Error::Parse { line, column, .. } => (line, column),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(err_at("psf 1\ngrading 2 3 6\norder 16\ncomponent h\n0 0 1 1/0\nend\n"), (5, 7));
        assert_eq!(err_at("psf 1\ngrading 2 3 6\norder 16\ncomponent h\n0 2 0 1\n0 2 0 3\nend\n"), (6, 1));
        assert_eq!(err_at("psf 1\ngrading 2 3 6\norder 16\n  colour h\nend\n"), (4, 3));
        assert_eq!(err_at("psf 1\ngrading 2 3 6\norder 6\ncomponent h\n4 0 0 1\nend\n"), (5, 1));
        assert_eq!(err_at("psf 1\ngrading 2 3 6\norder 6\ncomponent h\n"), (5, 1));
        assert_eq!(err_at("psf 2\n"), (1, 5));
        assert_eq!(err_at("psf 1\ngrading 2 3 6\norder 6\ncomponent h\n0 2 0 2/4\nend\n"), (5, 7));
    }

    #[test]
    fn log_round_trip() {
        let chi = crate::lie::Generator::new(FormalSeries::from_ints(Grading::NONDIAG, 12, &[(3, 1, 0, 1, 2)])).unwrap();
        let log = GeneratorLog::from(vec![
            LogStep::Reflect,
            LogStep::Linear(crate::series::LinearMap::new(rational::frac(1, 2), rational::int(0), rational::int(3), rational::int(2))),
            LogStep::Generator(chi),
            LogStep::Central,
            LogStep::AxisReflect,
        ]);
        let text = emit_log(&log);
        assert_eq!(parse_log(&text).unwrap(), log);
        assert!(text.starts_with("reflect\nlinear 1/2 0 3 2\ngenerator\npsf 1\n"));
    }
}
