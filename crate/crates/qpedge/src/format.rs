//! The line-oriented `.qp` document format.
//!
//! ```text
//! # comment
//! quiver NAME
//! vertices: v1, v2
//! arrows: a: v1 -> v2; l: v2 -> v2
//! potential: 1 * a.b + -1/2 * l.l.l
//! invert: a
//! element f: gamma: v1=1,v2=1; poly: x[v1,1]*x[v2,1] + 2
//! ```
//!
//! In a path `f.g`, `g` acts first. `arrows:` and `potential:` lines may be
//! repeated and accumulate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_traits::Zero;
use qpedge_core::path::{PathSymbol, Potential, QuiverWithPotential};
use qpedge_core::quiver::{Arrow, Quiver};
use qpedge_core::shuffle::{ShuffleAlgebra, SymPoly};
use qpedge_core::Rational;

use crate::element::{parse_element, print_element};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A message attached to a byte range of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Range<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Range<usize>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, span, message: message.into() }
    }

    /// `line:col: error: message` for a source text.
    pub fn render(&self, src: &str) -> String {
        let start = self.span.start.min(src.len());
        let line = src[..start].matches('\n').count() + 1;
        let col = start - src[..start].rfind('\n').map_or(0, |p| p + 1) + 1;
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        format!("{line}:{col}: {sev}: {}", self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}: {}", self.span.start, self.span.end, self.message)
    }
}

/// A named shuffle element carried alongside the quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedElement {
    pub name: String,
    pub element: SymPoly,
}

/// A parsed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPDocument {
    pub name: String,
    pub qp: QuiverWithPotential,
    pub elements: Vec<NamedElement>,
}

impl QPDocument {
    pub fn new(name: impl Into<String>, qp: QuiverWithPotential) -> Self {
        QPDocument { name: name.into(), qp, elements: Vec::new() }
    }

    pub fn element(&self, name: &str) -> Option<&SymPoly> {
        self.elements.iter().find(|e| e.name == name).map(|e| &e.element)
    }
}

/// A token and the byte offset where it starts.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tok<'a> {
    pub text: &'a str,
    pub start: usize,
}

impl<'a> Tok<'a> {
    pub fn span(&self) -> Range<usize> {
        self.start..self.start + self.text.len()
    }

    pub fn trimmed(self) -> Tok<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Tok { text: self.text.trim(), start: self.start + lead }
    }

    pub fn split(self, sep: char) -> Vec<Tok<'a>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, c) in self.text.char_indices() {
            if c == sep {
                out.push(Tok { text: &self.text[start..i], start: self.start + start }.trimmed());
                start = i + c.len_utf8();
            }
        }
        out.push(Tok { text: &self.text[start..], start: self.start + start }.trimmed());
        out
    }

    /// Splits at the first `sep`.
    pub fn split_once(self, sep: &str) -> Option<(Tok<'a>, Tok<'a>)> {
        let i = self.text.find(sep)?;
        let a = Tok { text: &self.text[..i], start: self.start }.trimmed();
        let b = Tok { text: &self.text[i + sep.len()..], start: self.start + i + sep.len() }.trimmed();
        Some((a, b))
    }

    pub fn words(self) -> Vec<Tok<'a>> {
        let mut out = Vec::new();
        let mut cur: Option<usize> = None;
        for (i, c) in self.text.char_indices() {
            match (c.is_whitespace(), cur) {
                (true, Some(s)) => {
                    out.push(Tok { text: &self.text[s..i], start: self.start + s });
                    cur = None;
                }
                (false, None) => cur = Some(i),
                _ => {}
            }
        }
        if let Some(s) = cur {
            out.push(Tok { text: &self.text[s..], start: self.start + s });
        }
        out
    }
}

/// Characters that cannot appear in vertex or arrow ids.
const RESERVED: &[char] = &[',', ';', ':', '.', '#', '='];

/// Brackets would clash with `x[vertex,slot]` in element polynomials, but
/// arrow ids (e.g. composites `[b*a]`) may use them.
const VERTEX_RESERVED: &[char] = &['[', ']'];

fn check_id(t: Tok, what: &str, diags: &mut Vec<Diagnostic>) -> bool {
    if t.text.is_empty() {
        diags.push(Diagnostic::error(t.span(), format!("missing {what} id")));
        return false;
    }
    let vertex = what == "vertex";
    let bad = |c: char| c.is_whitespace() || RESERVED.contains(&c) || (vertex && VERTEX_RESERVED.contains(&c));
    if t.text.chars().any(bad) || matches!(t.text, "*" | "+" | "-" | "->") {
        diags.push(Diagnostic::error(t.span(), format!("invalid {what} id `{}`", t.text)));
        return false;
    }
    true
}

pub(crate) fn parse_rational(t: Tok) -> Result<Rational, Diagnostic> {
    Rational::from_str(t.text).map_err(|_| Diagnostic::error(t.span(), format!("invalid coefficient `{}`", t.text)))
}

struct Sections<'a> {
    name: Option<Tok<'a>>,
    vertices: Vec<Tok<'a>>,
    arrows: Vec<Tok<'a>>,
    potential: Vec<Tok<'a>>,
    invert: Option<Tok<'a>>,
    elements: Vec<(Tok<'a>, Tok<'a>)>,
    saw_vertices: bool,
}

fn collect_sections<'a>(src: &'a str, diags: &mut Vec<Diagnostic>) -> Sections<'a> {
    let mut s = Sections {
        name: None,
        vertices: Vec::new(),
        arrows: Vec::new(),
        potential: Vec::new(),
        invert: None,
        elements: Vec::new(),
        saw_vertices: false,
    };
    let mut offset = 0;
    for raw in src.split_inclusive('\n') {
        let content = raw.split('#').next().unwrap_or("").trim_end_matches(['\n', '\r']);
        let line = Tok { text: content, start: offset }.trimmed();
        offset += raw.len();
        if line.text.is_empty() {
            continue;
        }
        let key_end = line.text.find([' ', '\t', ':']).unwrap_or(line.text.len());
        let key = &line.text[..key_end];
        let rest = Tok { text: &line.text[key_end..], start: line.start + key_end }.trimmed();
        let after_colon = |r: Tok<'a>, diags: &mut Vec<Diagnostic>| -> Option<Tok<'a>> {
            match r.text.strip_prefix(':') {
                Some(body) => Some(Tok { text: body, start: r.start + 1 }.trimmed()),
                None => {
                    diags.push(Diagnostic::error(r.span(), format!("expected `:` after `{key}`")));
                    None
                }
            }
        };
        match key {
            "quiver" => {
                if s.name.is_some() {
                    diags.push(Diagnostic::error(line.span(), "duplicate `quiver` line"));
                } else if rest.text.is_empty() || rest.text.contains(char::is_whitespace) {
                    diags.push(Diagnostic::error(line.span(), "expected `quiver NAME`"));
                } else {
                    s.name = Some(rest);
                }
            }
            "vertices" => {
                if let Some(body) = after_colon(rest, diags) {
                    if s.saw_vertices {
                        diags.push(Diagnostic::error(line.span(), "duplicate `vertices` line"));
                    }
                    s.saw_vertices = true;
                    if !body.text.is_empty() {
                        s.vertices.extend(body.split(','));
                    }
                }
            }
            "arrows" => {
                if let Some(body) = after_colon(rest, diags) {
                    if !body.text.is_empty() {
                        s.arrows.extend(body.split(';').into_iter().filter(|t| !t.text.is_empty()));
                    }
                }
            }
            "potential" => {
                if let Some(body) = after_colon(rest, diags) {
                    if !body.text.is_empty() {
                        s.potential.push(body);
                    }
                }
            }
            "invert" => {
                if let Some(body) = after_colon(rest, diags) {
                    if s.invert.is_some() {
                        diags.push(Diagnostic::error(line.span(), "duplicate `invert` line"));
                    }
                    s.invert = Some(body);
                }
            }
            "element" => match rest.split_once(":") {
                Some((name, body)) if !name.text.is_empty() => s.elements.push((name, body)),
                _ => diags.push(Diagnostic::error(line.span(), "expected `element NAME: gamma: ...; poly: ...`")),
            },
            _ => diags.push(Diagnostic::error(
                Tok { text: key, start: line.start }.span(),
                format!("unknown directive `{key}`"),
            )),
        }
    }
    s
}

fn build_quiver(s: &Sections, diags: &mut Vec<Diagnostic>) -> Option<Quiver> {
    let mut vertices: Vec<String> = Vec::new();
    for v in &s.vertices {
        if !check_id(*v, "vertex", diags) {
            continue;
        }
        if vertices.iter().any(|w| w == v.text) {
            diags.push(Diagnostic::error(v.span(), format!("duplicate vertex `{}`", v.text)));
            continue;
        }
        vertices.push(v.text.to_string());
    }
    let mut arrows: Vec<Arrow> = Vec::new();
    for a in &s.arrows {
        let Some((id, ends)) = a.split_once(":") else {
            diags.push(Diagnostic::error(a.span(), "expected `id: source -> target`"));
            continue;
        };
        let Some((src, tgt)) = ends.split_once("->") else {
            diags.push(Diagnostic::error(ends.span(), "expected `source -> target`"));
            continue;
        };
        if !check_id(id, "arrow", diags) {
            continue;
        }
        let mut ok = true;
        for v in [src, tgt] {
            if !vertices.iter().any(|w| w == v.text) {
                diags.push(Diagnostic::error(v.span(), format!("unknown vertex `{}`", v.text)));
                ok = false;
            }
        }
        if arrows.iter().any(|b| b.id == id.text) {
            diags.push(Diagnostic::error(id.span(), format!("duplicate arrow `{}`", id.text)));
            ok = false;
        }
        if ok {
            arrows.push(Arrow::new(id.text, src.text, tgt.text));
        }
    }
    Quiver::new(vertices, arrows).ok()
}

fn parse_symbol(q: &Quiver, invert: Option<&str>, t: Tok, diags: &mut Vec<Diagnostic>) -> Option<PathSymbol> {
    if q.arrow(t.text).is_some() {
        return Some(PathSymbol::fwd(t.text));
    }
    if let Some(base) = t.text.strip_suffix("^-1") {
        if q.arrow(base).is_some() {
            if invert == Some(base) {
                return Some(PathSymbol::inv(base));
            }
            diags.push(Diagnostic::error(t.span(), format!("`{base}` is not the designated invertible arrow")));
            return None;
        }
    }
    diags.push(Diagnostic::error(t.span(), format!("unknown arrow `{}`", t.text)));
    None
}

/// A path `s1.s2...sn`; `sn` acts first. Checks composability at each join
/// and that the path is closed.
fn parse_cycle(q: &Quiver, invert: Option<&str>, t: Tok, diags: &mut Vec<Diagnostic>) -> Option<Vec<PathSymbol>> {
    let parts = t.split('.');
    let mut syms = Vec::new();
    let mut ok = true;
    for p in &parts {
        match parse_symbol(q, invert, *p, diags) {
            Some(s) => syms.push(s),
            None => ok = false,
        }
    }
    if !ok {
        return None;
    }
    let ends: Vec<(String, String)> = syms.iter().map(|s| s.ends(q).expect("arrow exists")).collect();
    for k in 0..syms.len().saturating_sub(1) {
        // syms[k+1] acts before syms[k]
        if ends[k + 1].1 != ends[k].0 {
            diags.push(Diagnostic::error(
                parts[k].start..parts[k + 1].span().end,
                format!(
                    "not composable: `{}` ends at `{}` but `{}` starts at `{}`",
                    parts[k + 1].text,
                    ends[k + 1].1,
                    parts[k].text,
                    ends[k].0
                ),
            ));
            return None;
        }
    }
    let (first, last) = (&ends[0], &ends[ends.len() - 1]);
    if first.1 != last.0 {
        diags.push(Diagnostic::error(
            t.span(),
            format!("potential term is not closed: it starts at `{}` and ends at `{}`", last.0, first.1),
        ));
        return None;
    }
    Some(syms)
}

fn parse_potential(q: &Quiver, invert: Option<&str>, lines: &[Tok], diags: &mut Vec<Diagnostic>) -> Potential {
    let mut w = Potential::zero();
    for line in lines {
        let toks = line.words();
        if toks.len() == 1 && toks[0].text == "0" {
            continue;
        }
        let mut k = 0;
        let mut sign = Rational::from_integer(1.into());
        loop {
            if k + 3 > toks.len() {
                let span = toks.get(k).map_or(line.span(), |t| t.start..line.span().end);
                diags.push(Diagnostic::error(span, "expected `coefficient * path`"));
                break;
            }
            let (c, star, path) = (toks[k], toks[k + 1], toks[k + 2]);
            if star.text != "*" {
                diags.push(Diagnostic::error(star.span(), format!("expected `*`, found `{}`", star.text)));
                break;
            }
            let coeff = match parse_rational(c) {
                Ok(r) => r * &sign,
                Err(d) => {
                    diags.push(d);
                    break;
                }
            };
            if let Some(syms) = parse_cycle(q, invert, path, diags) {
                if !coeff.is_zero() {
                    if let Err(e) = w.add_word(q, &syms, coeff) {
                        diags.push(Diagnostic::error(path.span(), e.to_string()));
                    }
                }
            }
            k += 3;
            match toks.get(k) {
                None => break,
                Some(op) if op.text == "+" => sign = Rational::from_integer(1.into()),
                Some(op) if op.text == "-" => sign = Rational::from_integer((-1).into()),
                Some(op) => {
                    diags.push(Diagnostic::error(op.span(), format!("expected `+` or `-`, found `{}`", op.text)));
                    break;
                }
            }
            k += 1;
        }
    }
    w
}

/// Parses a document, or returns every diagnostic found.
pub fn parse_qp(src: &str) -> Result<QPDocument, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let s = collect_sections(src, &mut diags);
    if s.name.is_none() {
        diags.push(Diagnostic::error(0..0, "missing `quiver NAME` line"));
    }
    if !s.saw_vertices {
        diags.push(Diagnostic::error(0..0, "missing `vertices:` line"));
    }
    let quiver = build_quiver(&s, &mut diags);
    let Some(q) = quiver.filter(|_| diags.is_empty()) else {
        return Err(diags);
    };
    let invert = s.invert.and_then(|t| {
        if q.arrow(t.text).is_some() {
            Some(t.text.to_string())
        } else {
            diags.push(Diagnostic::error(t.span(), format!("unknown arrow `{}`", t.text)));
            None
        }
    });
    let w = parse_potential(&q, invert.as_deref(), &s.potential, &mut diags);
    let alg = ShuffleAlgebra::new(&q);
    let mut elements: Vec<NamedElement> = Vec::new();
    for (name, body) in &s.elements {
        if elements.iter().any(|e| e.name == name.text) {
            diags.push(Diagnostic::error(name.span(), format!("duplicate element `{}`", name.text)));
            continue;
        }
        match parse_element(&alg, *body) {
            Ok(f) => elements.push(NamedElement { name: name.text.to_string(), element: f }),
            Err(d) => diags.push(d),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let name = s.name.expect("checked").text.to_string();
    match QuiverWithPotential::new(q, w, invert) {
        Ok(qp) => Ok(QPDocument { name, qp, elements }),
        Err(e) => Err(vec![Diagnostic::error(0..src.len(), e.to_string())]),
    }
}

/// The canonical text of a document; `parse_qp` inverts it.
pub fn print_qp(doc: &QPDocument) -> String {
    let q = &doc.qp.quiver;
    let mut out = String::new();
    out.push_str(&format!("quiver {}\n", doc.name));
    out.push_str(&format!("vertices: {}\n", q.vertices().join(", ")));
    let arrows: Vec<String> = q.arrows().iter().map(|a| format!("{}: {} -> {}", a.id, a.source, a.target)).collect();
    if arrows.is_empty() {
        out.push_str("arrows:\n");
    } else {
        out.push_str(&format!("arrows: {}\n", arrows.join("; ")));
    }
    out.push_str(&format!("potential: {}\n", doc.qp.potential));
    if let Some(a) = &doc.qp.invertible {
        out.push_str(&format!("invert: {a}\n"));
    }
    let alg = ShuffleAlgebra::new(q);
    for e in &doc.elements {
        out.push_str(&format!("element {}: {}\n", e.name, print_element(&alg, &e.element)));
    }
    out
}

/// Renders all diagnostics against their source, one per line.
pub fn render_diagnostics(src: &str, diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.render(src)).collect::<Vec<_>>().join("\n")
}

/// Arrow ids by vertex pair, used in summaries.
pub fn arrow_table(q: &Quiver) -> BTreeMap<(String, String), Vec<String>> {
    let mut m: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for a in q.arrows() {
        m.entry((a.source.clone(), a.target.clone())).or_default().push(a.id.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_documents() {
        let d = parse_qp("quiver P\nvertices: i\narrows:\n").unwrap();
        assert!(d.qp.quiver.arrows().is_empty());
        assert!(d.qp.potential.is_zero());
        assert_eq!(print_qp(&d), "quiver P\nvertices: i\narrows:\npotential: 0\n");
    }

    #[test]
    fn spans_point_at_the_problem() {
        let src = "quiver X\nvertices: a, b\narrows: x: a -> b; y: a -> b\npotential: 1 * x.y\n";
        let errs = parse_qp(src).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("not composable"));
        assert_eq!(&src[errs[0].span.clone()], "x.y");
        let src = "quiver X\nvertices: a\narrows: x: a -> c\n";
        let errs = parse_qp(src).unwrap_err();
        assert_eq!(&src[errs[0].span.clone()], "c");
        assert_eq!(errs[0].render(src), "3:17: error: unknown vertex `c`");
    }
}
