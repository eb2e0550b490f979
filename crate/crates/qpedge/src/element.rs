//! Text syntax of shuffle elements: `gamma: i=1,j=1; poly: x[i,1]*x[j,1] + 2`.

use qpedge_core::poly::Poly;
use qpedge_core::quiver::DimVector;
use qpedge_core::shuffle::{ShuffleAlgebra, SymPoly};

use crate::format::{parse_rational, Diagnostic, Tok};

/// Parses `gamma: ...; poly: ...` against an algebra.
pub(crate) fn parse_element(alg: &ShuffleAlgebra, t: Tok) -> Result<SymPoly, Diagnostic> {
    let (g, p) = t
        .split_once(";")
        .ok_or_else(|| Diagnostic::error(t.span(), "expected `gamma: ...; poly: ...`"))?;
    let gbody = strip_key(g, "gamma")?;
    let pbody = strip_key(p, "poly")?;
    let gamma = parse_gamma(alg, gbody)?;
    let poly = parse_poly(alg, pbody)?;
    alg.sym(gamma, poly).map_err(|e| Diagnostic::error(t.span(), e.to_string()))
}

/// Parses an element given as a standalone string.
pub fn parse_element_str(alg: &ShuffleAlgebra, text: &str) -> Result<SymPoly, Diagnostic> {
    parse_element(alg, Tok { text, start: 0 }.trimmed())
}

fn strip_key<'a>(t: Tok<'a>, key: &str) -> Result<Tok<'a>, Diagnostic> {
    let body = t
        .text
        .strip_prefix(key)
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| Diagnostic::error(t.span(), format!("expected `{key}:`")))?;
    let start = t.start + (t.text.len() - body.len());
    Ok(Tok { text: body, start }.trimmed())
}

fn parse_gamma(alg: &ShuffleAlgebra, t: Tok) -> Result<DimVector, Diagnostic> {
    let q = alg.quiver();
    let mut gamma = q.zero_dim();
    if t.text == "0" || t.text.is_empty() {
        return Ok(gamma);
    }
    for entry in t.split(',') {
        let (v, n) =
            entry.split_once("=").ok_or_else(|| Diagnostic::error(entry.span(), "expected `vertex=rank`"))?;
        let slot = gamma
            .get_mut(v.text)
            .ok_or_else(|| Diagnostic::error(v.span(), format!("unknown vertex `{}`", v.text)))?;
        *slot = n.text.parse().map_err(|_| Diagnostic::error(n.span(), format!("invalid rank `{}`", n.text)))?;
    }
    Ok(gamma)
}

struct PolyParser<'a, 'b> {
    alg: &'b ShuffleAlgebra,
    src: &'a str,
    base: usize,
    pos: usize,
}

impl PolyParser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, len: usize, msg: impl Into<String>) -> Diagnostic {
        let start = self.base + self.pos;
        Diagnostic::error(start..start + len, msg)
    }

    fn expr(&mut self) -> Result<Poly, Diagnostic> {
        let mut neg = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, Diagnostic> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly, Diagnostic> {
        let base = self.factor()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.digits();
            let n: u32 = e.parse().map_err(|_| self.err(1, "expected an exponent"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn factor(&mut self) -> Result<Poly, Diagnostic> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err(1, "expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some('x') => {
                let start = self.pos;
                if !self.src[self.pos..].starts_with("x[") {
                    return Err(self.err(1, "expected `x[vertex,slot]`"));
                }
                let close = self.src[self.pos..].find(']').ok_or_else(|| self.err(2, "unclosed `x[`"))?;
                let inner = &self.src[self.pos + 2..self.pos + close];
                self.pos += close + 1;
                let (v, s) = inner.rsplit_once(',').ok_or_else(|| {
                    Diagnostic::error(self.base + start..self.base + self.pos, "expected `x[vertex,slot]`")
                })?;
                let span = self.base + start..self.base + self.pos;
                let slot: u16 = s.trim().parse().map_err(|_| Diagnostic::error(span.clone(), "invalid slot"))?;
                let var = self
                    .alg
                    .var(v.trim(), slot)
                    .map_err(|_| Diagnostic::error(span, format!("unknown vertex `{}`", v.trim())))?;
                Ok(Poly::var(var))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.digits();
                if self.src[self.pos..].starts_with('/') {
                    self.pos += 1;
                    self.digits();
                }
                let tok = Tok { text: &self.src[start..self.pos], start: self.base + start };
                Ok(Poly::constant(parse_rational(tok)?))
            }
            _ => Err(self.err(1, "expected a number, `x[vertex,slot]` or `(`")),
        }
    }
}

/// Parses a polynomial in the variables `x[vertex,slot]`.
pub(crate) fn parse_poly(alg: &ShuffleAlgebra, t: Tok) -> Result<Poly, Diagnostic> {
    let mut p = PolyParser { alg, src: t.text, base: t.start, pos: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err(t.text.len() - p.pos, "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a polynomial given as a standalone string.
pub fn parse_poly_str(alg: &ShuffleAlgebra, text: &str) -> Result<Poly, Diagnostic> {
    parse_poly(alg, Tok { text, start: 0 })
}

/// `gamma: i=1,j=1; poly: ...`, listing nonzero ranks in vertex order.
pub fn print_element(alg: &ShuffleAlgebra, f: &SymPoly) -> String {
    format!("gamma: {}; poly: {}", print_gamma(alg, &f.gamma), alg.display(&f.poly))
}

pub fn print_gamma(alg: &ShuffleAlgebra, g: &DimVector) -> String {
    let parts: Vec<String> = alg
        .quiver()
        .vertices()
        .iter()
        .filter(|v| g.get(*v).is_some_and(|n| *n > 0))
        .map(|v| format!("{v}={}", g[v]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(",")
    }
}

/// Parses `i=1,j=2` (or `0`) into a dimension vector.
pub fn parse_gamma_str(alg: &ShuffleAlgebra, text: &str) -> Result<DimVector, Diagnostic> {
    parse_gamma(alg, Tok { text, start: 0 }.trimmed())
}
