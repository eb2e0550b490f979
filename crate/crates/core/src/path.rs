//! The path algebra over the rationals: paths, noncommutative polynomials,
//! cyclic words, potentials, cyclic derivatives, substitution and removal of
//! the quadratic (trivial) part of a potential.
//!
//! Words are written left to right and composed like functions: in `f.g` the
//! right symbol `g` acts first, so `t(g) = s(f)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{Arrow, Quiver};
use crate::rational::format as fmt_q;
use crate::Rational;

/// An arrow traversed forwards, or formally inverted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathSymbol {
    pub arrow: String,
    pub inverse: bool,
}

impl PathSymbol {
    pub fn fwd(a: impl Into<String>) -> Self {
        PathSymbol { arrow: a.into(), inverse: false }
    }

    pub fn inv(a: impl Into<String>) -> Self {
        PathSymbol { arrow: a.into(), inverse: true }
    }

    pub fn inverted(&self) -> Self {
        PathSymbol { arrow: self.arrow.clone(), inverse: !self.inverse }
    }

    /// `(source, target)` in `q`.
    pub fn ends(&self, q: &Quiver) -> Result<(String, String)> {
        let a = q.get_arrow(&self.arrow)?;
        Ok(if self.inverse {
            (a.target.clone(), a.source.clone())
        } else {
            (a.source.clone(), a.target.clone())
        })
    }
}

impl fmt::Display for PathSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.arrow)
        } else {
            f.write_str(&self.arrow)
        }
    }
}

/// Words from a list of forward arrow ids.
pub fn word(ids: &[&str]) -> Vec<PathSymbol> {
    ids.iter().map(|a| PathSymbol::fwd(*a)).collect()
}

/// A path: an idempotent `e_v` or a non-empty composable word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Idem(String),
    Word(Vec<PathSymbol>),
}

impl Path {
    pub fn symbols(&self) -> &[PathSymbol] {
        match self {
            Path::Idem(_) => &[],
            Path::Word(w) => w,
        }
    }

    /// Checks composability and returns `(source, target)`.
    pub fn ends(&self, q: &Quiver) -> Result<(String, String)> {
        match self {
            Path::Idem(v) => {
                q.check_vertex(v)?;
                Ok((v.clone(), v.clone()))
            }
            Path::Word(w) => word_ends(q, w),
        }
    }
}

/// `(source, target)` of a non-empty word after checking composability.
pub fn word_ends(q: &Quiver, w: &[PathSymbol]) -> Result<(String, String)> {
    let (first, last) = match (w.first(), w.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::NotComposable("empty word".into())),
    };
    for k in 0..w.len() - 1 {
        let (s_left, _) = w[k].ends(q)?;
        let (_, t_right) = w[k + 1].ends(q)?;
        if s_left != t_right {
            return Err(Error::NotComposable(format!(
                "{} ends at {t_right} but {} starts at {s_left}",
                w[k + 1],
                w[k]
            )));
        }
    }
    Ok((last.ends(q)?.0, first.ends(q)?.1))
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Idem(v) => write!(f, "e_{v}"),
            Path::Word(w) => write_word(f, w),
        }
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, w: &[PathSymbol]) -> fmt::Result {
    for (k, s) in w.iter().enumerate() {
        if k > 0 {
            f.write_str(".")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

/// Cancels adjacent `x x^-1` pairs in a linear word.
pub fn free_reduce(w: &[PathSymbol]) -> Vec<PathSymbol> {
    let mut out: Vec<PathSymbol> = Vec::with_capacity(w.len());
    for s in w {
        if out.last().is_some_and(|l| l.arrow == s.arrow && l.inverse != s.inverse) {
            out.pop();
        } else {
            out.push(s.clone());
        }
    }
    out
}

/// Free reduction of a composable word into a path with the same endpoints.
pub fn reduce_path(q: &Quiver, w: &[PathSymbol]) -> Result<Path> {
    let (_, t) = word_ends(q, w)?;
    let r = free_reduce(w);
    Ok(if r.is_empty() { Path::Idem(t) } else { Path::Word(r) })
}

/// Rotation-equivalence class of a closed word, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord(Vec<PathSymbol>);

impl CyclicWord {
    /// Checks that `w` is a closed composable word, cancels inverse pairs
    /// (also across the seam) and picks the least rotation.
    pub fn new(q: &Quiver, w: &[PathSymbol]) -> Result<Self> {
        let (s, t) = word_ends(q, w)?;
        if s != t {
            return Err(Error::NotClosed(format!("{} runs from {s} to {t}", DisplayWord(w))));
        }
        Self::from_closed(w.to_vec())
    }

    /// Normal form of a word already known to be closed and composable.
    pub fn from_closed(w: Vec<PathSymbol>) -> Result<Self> {
        let mut r = free_reduce(&w);
        while r.len() >= 2 {
            let (f, l) = (&r[0], &r[r.len() - 1]);
            if f.arrow == l.arrow && f.inverse != l.inverse {
                r.pop();
                r.remove(0);
            } else {
                break;
            }
        }
        if r.is_empty() {
            return Err(Error::DegenerateCycle);
        }
        Ok(CyclicWord(least_rotation(r)))
    }

    pub fn symbols(&self) -> &[PathSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_arrow(&self, a: &str) -> bool {
        self.0.iter().any(|s| s.arrow == a)
    }

    /// Renames arrows; the result is re-canonicalized.
    pub fn rename(&self, f: &impl Fn(&PathSymbol) -> PathSymbol) -> Result<Self> {
        Self::from_closed(self.0.iter().map(f).collect())
    }
}

fn least_rotation(w: Vec<PathSymbol>) -> Vec<PathSymbol> {
    let n = w.len();
    let mut best: Option<Vec<PathSymbol>> = None;
    for k in 0..n {
        let rot: Vec<PathSymbol> = w[k..].iter().chain(w[..k].iter()).cloned().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap_or(w)
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.0)
    }
}

struct DisplayWord<'a>(&'a [PathSymbol]);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, self.0)
    }
}

fn write_sum<K: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<K, Rational>,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, (key, c)) in terms.iter().enumerate() {
        if k == 0 {
            write!(f, "{} * {key}", fmt_q(c))?;
        } else if c.is_negative() {
            write!(f, " - {} * {key}", fmt_q(&-c))?;
        } else {
            write!(f, " + {} * {key}", fmt_q(c))?;
        }
    }
    Ok(())
}

fn add_into<K: Ord + Clone>(terms: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = terms.entry(key.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        terms.remove(&key);
    }
}

/// A finite rational combination of paths.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Path, Rational>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn path(p: Path) -> Self {
        Self::term(p, Rational::one())
    }

    pub fn term(p: Path, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(p, c);
        out
    }

    pub fn arrow(a: &str) -> Self {
        Self::path(Path::Word(vec![PathSymbol::fwd(a)]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Path, Rational> {
        &self.terms
    }

    pub fn add_term(&mut self, p: Path, c: Rational) {
        add_into(&mut self.terms, p, c);
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        let mut out = NCPoly::zero();
        for (p, d) in &self.terms {
            out.add_term(p.clone(), d * c);
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product `self * other` (`other` acts first), with free cancellation.
    pub fn mul(&self, other: &NCPoly, q: &Quiver) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &other.terms {
                let (s1, _) = p1.ends(q)?;
                let (_, t2) = p2.ends(q)?;
                if s1 != t2 {
                    return Err(Error::NotComposable(format!("{p1} after {p2}")));
                }
                let mut w = p1.symbols().to_vec();
                w.extend_from_slice(p2.symbols());
                let p = if w.is_empty() { p1.clone() } else { reduce_path(q, &w)? };
                out.add_term(p, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Arrows appearing in some term.
    pub fn arrows(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|p| p.symbols().iter().map(|s| s.arrow.clone())).collect()
    }

    pub fn contains_arrow(&self, a: &str) -> bool {
        self.terms.keys().any(|p| p.symbols().iter().any(|s| s.arrow == a))
    }

    /// Simultaneous substitution of forward arrows.
    pub fn substitute(&self, q: &Quiver, assignments: &BTreeMap<String, NCPoly>) -> Result<NCPoly> {
        check_assignments(q, assignments)?;
        let mut out = NCPoly::zero();
        for (p, c) in &self.terms {
            match p {
                Path::Idem(_) => out.add_term(p.clone(), c.clone()),
                Path::Word(w) => {
                    let (_, t) = word_ends(q, w)?;
                    for (nw, d) in expand_word(w, assignments)? {
                        let r = free_reduce(&nw);
                        let np = if r.is_empty() { Path::Idem(t.clone()) } else { Path::Word(r) };
                        out.add_term(np, c * d);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks every term is composable with common endpoints; returns them.
    pub fn ends(&self, q: &Quiver) -> Result<Option<(String, String)>> {
        let mut ends: Option<(String, String)> = None;
        for p in self.terms.keys() {
            let e = p.ends(q)?;
            if let Some(prev) = &ends {
                if *prev != e {
                    return Err(Error::NotComposable(format!("{p} has endpoints {e:?}, expected {prev:?}")));
                }
            }
            ends = Some(e);
        }
        Ok(ends)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, &self.terms)
    }
}

fn check_assignments(q: &Quiver, assignments: &BTreeMap<String, NCPoly>) -> Result<()> {
    for (a, rep) in assignments {
        let arrow = q.get_arrow(a)?;
        if let Some((s, t)) = rep.ends(q)? {
            if s != arrow.source || t != arrow.target {
                return Err(Error::EndpointMismatch(a.clone()));
            }
        }
    }
    Ok(())
}

/// Expands a word under an assignment into `(word, coefficient)` pairs.
fn expand_word(
    w: &[PathSymbol],
    assignments: &BTreeMap<String, NCPoly>,
) -> Result<Vec<(Vec<PathSymbol>, Rational)>> {
    let mut acc: Vec<(Vec<PathSymbol>, Rational)> = vec![(Vec::new(), Rational::one())];
    for s in w {
        match assignments.get(&s.arrow) {
            None => {
                for (v, _) in acc.iter_mut() {
                    v.push(s.clone());
                }
            }
            Some(_) if s.inverse => return Err(Error::NotInvertible(s.arrow.clone())),
            Some(rep) => {
                let mut next = Vec::with_capacity(acc.len() * rep.terms.len());
                for (v, c) in &acc {
                    for (p, d) in &rep.terms {
                        let mut nv = v.clone();
                        nv.extend_from_slice(p.symbols());
                        next.push((nv, c * d));
                    }
                }
                acc = next;
            }
        }
    }
    Ok(acc)
}

/// A finite rational combination of cyclic words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Potential {
    terms: BTreeMap<CyclicWord, Rational>,
}

impl Potential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<CyclicWord, Rational> {
        &self.terms
    }

    pub fn add_cyclic(&mut self, w: CyclicWord, c: Rational) {
        add_into(&mut self.terms, w, c);
    }

    /// Adds `c` times the class of the closed word `w`.
    pub fn add_word(&mut self, q: &Quiver, w: &[PathSymbol], c: Rational) -> Result<()> {
        let cw = CyclicWord::new(q, w)?;
        self.add_cyclic(cw, c);
        Ok(())
    }

    /// Builds a potential from `(coefficient, word)` pairs of forward arrows.
    pub fn from_words(q: &Quiver, terms: &[(i64, &[&str])]) -> Result<Self> {
        let mut w = Potential::zero();
        for (c, ids) in terms {
            w.add_word(q, &word(ids), crate::rational::int(*c))?;
        }
        Ok(w)
    }

    pub fn add(&self, other: &Potential) -> Potential {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_cyclic(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Potential {
        let mut out = Potential::zero();
        for (w, d) in &self.terms {
            out.add_cyclic(w.clone(), d * c);
        }
        out
    }

    pub fn arrows(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|w| w.symbols().iter().map(|s| s.arrow.clone())).collect()
    }

    pub fn contains_arrow(&self, a: &str) -> bool {
        self.terms.keys().any(|w| w.contains_arrow(a))
    }

    /// Validates every term against `q`.
    pub fn check(&self, q: &Quiver) -> Result<()> {
        for w in self.terms.keys() {
            CyclicWord::new(q, w.symbols())?;
        }
        Ok(())
    }

    /// Renames symbols term by term and re-canonicalizes.
    pub fn rename(&self, f: impl Fn(&PathSymbol) -> PathSymbol) -> Result<Potential> {
        let mut out = Potential::zero();
        for (w, c) in &self.terms {
            out.add_cyclic(w.rename(&f)?, c.clone());
        }
        Ok(out)
    }

    /// `d W / d a`: for each occurrence of `a`, the rotation starting right
    /// after it, with `a` removed.
    pub fn cyclic_derivative(&self, q: &Quiver, a: &str) -> Result<NCPoly> {
        let arrow = q.get_arrow(a)?;
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let s = w.symbols();
            let n = s.len();
            for k in 0..n {
                if s[k].arrow != a || s[k].inverse {
                    continue;
                }
                let rest: Vec<PathSymbol> =
                    s[k + 1..].iter().chain(s[..k].iter()).cloned().collect();
                let p = if rest.is_empty() {
                    Path::Idem(arrow.source.clone())
                } else {
                    Path::Word(rest)
                };
                out.add_term(p, c.clone());
            }
        }
        Ok(out)
    }

    /// Simultaneous substitution of forward arrows, then re-canonicalization.
    pub fn substitute(&self, q: &Quiver, assignments: &BTreeMap<String, NCPoly>) -> Result<Potential> {
        check_assignments(q, assignments)?;
        let mut out = Potential::zero();
        for (w, c) in &self.terms {
            for (nw, d) in expand_word(w.symbols(), assignments)? {
                out.add_cyclic(CyclicWord::from_closed(nw)?, c * d);
            }
        }
        Ok(out)
    }

    /// Terms of length two.
    pub fn quadratic_terms(&self) -> Vec<(CyclicWord, Rational)> {
        self.terms
            .iter()
            .filter(|(w, _)| w.len() == 2)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, &self.terms)
    }
}

/// A quiver together with a potential and an optional arrow that may appear
/// formally inverted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverWithPotential {
    pub quiver: Quiver,
    pub potential: Potential,
    pub invertible: Option<String>,
}

impl QuiverWithPotential {
    pub fn new(quiver: Quiver, potential: Potential, invertible: Option<String>) -> Result<Self> {
        let qp = QuiverWithPotential { quiver, potential, invertible };
        qp.validate()?;
        Ok(qp)
    }

    pub fn without_potential(quiver: Quiver) -> Self {
        QuiverWithPotential { quiver, potential: Potential::zero(), invertible: None }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(a) = &self.invertible {
            self.quiver.get_arrow(a)?;
        }
        for w in self.potential.terms().keys() {
            for s in w.symbols() {
                if s.inverse && self.invertible.as_deref() != Some(s.arrow.as_str()) {
                    return Err(Error::NotInvertible(s.arrow.clone()));
                }
            }
        }
        self.potential.check(&self.quiver)
    }
}

/// Removes the quadratic part of the potential by repeated substitution.
///
/// For a term `lambda * x y` with `lambda = +-1`, put `W1 = dW/dx - lambda y`
/// and `W2 = dW/dy - lambda x`, substitute `y -> -W1/lambda`,
/// `x -> -W2/lambda` simultaneously, and delete `x` and `y`. Cases this
/// syntactic recipe cannot handle are reported as unsupported.
pub fn reduce_trivial(qp: &QuiverWithPotential) -> Result<QuiverWithPotential> {
    let mut cur = qp.clone();
    let bound = cur.quiver.arrows().len() / 2 + 1;
    for _ in 0..bound {
        let quad = cur.potential.quadratic_terms();
        let Some((w, _)) = quad.into_iter().next() else {
            return Ok(cur);
        };
        cur = eliminate_pair(&cur, &w)?;
    }
    if cur.potential.quadratic_terms().is_empty() {
        Ok(cur)
    } else {
        Err(Error::UnsupportedReduction("elimination did not terminate".into()))
    }
}

/// One elimination step for the quadratic term `w` of the potential.
pub fn eliminate_pair(cur: &QuiverWithPotential, w: &CyclicWord) -> Result<QuiverWithPotential> {
    let lambda = cur
        .potential
        .terms()
        .get(w)
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("{w} is not a term of the potential")))?;
    if w.len() != 2 {
        return Err(Error::Precondition(format!("{w} is not quadratic")));
    }
    let (x, y) = (&w.symbols()[0], &w.symbols()[1]);
    if x.inverse || y.inverse {
        return Err(Error::UnsupportedReduction(format!("quadratic term {w} uses an inverted arrow")));
    }
    if x.arrow == y.arrow {
        return Err(Error::UnsupportedReduction(format!("quadratic term {w} is a loop squared")));
    }
    if lambda.abs() != Rational::one() {
        return Err(Error::UnsupportedReduction(format!(
            "quadratic term {w} has coefficient {}",
            fmt_q(&lambda)
        )));
    }
    let (x, y) = (x.arrow.clone(), y.arrow.clone());
    let q = &cur.quiver;
    let w1 = cur.potential.cyclic_derivative(q, &x)?.sub(&NCPoly::arrow(&y).scale(&lambda));
    let w2 = cur.potential.cyclic_derivative(q, &y)?.sub(&NCPoly::arrow(&x).scale(&lambda));
    for part in [&w1, &w2] {
        if part.contains_arrow(&x) || part.contains_arrow(&y) {
            return Err(Error::UnsupportedReduction(format!(
                "the derivatives for the pair ({x}, {y}) reintroduce an eliminated arrow"
            )));
        }
    }
    let minus_inv = -Rational::one() / &lambda;
    let mut assign = BTreeMap::new();
    assign.insert(y.clone(), w1.scale(&minus_inv));
    assign.insert(x.clone(), w2.scale(&minus_inv));
    let potential = cur.potential.substitute(q, &assign)?;
    if potential.contains_arrow(&x) || potential.contains_arrow(&y) {
        return Err(Error::Internal("eliminated arrow survived substitution".into()));
    }
    let arrows: Vec<Arrow> = q.arrows().iter().filter(|a| a.id != x && a.id != y).cloned().collect();
    let quiver = Quiver::new(q.vertices().to_vec(), arrows)?;
    let invertible = cur.invertible.clone().filter(|a| *a != x && *a != y);
    QuiverWithPotential::new(quiver, potential, invertible)
}

/// Identity assignment helper used in tests and checks.
pub fn identity_assignment(q: &Quiver) -> BTreeMap<String, NCPoly> {
    q.arrows().iter().map(|a| (a.id.clone(), NCPoly::arrow(&a.id))).collect()
}

pub fn path_from(ids: &[&str]) -> Path {
    Path::Word(word(ids))
}

impl From<&str> for PathSymbol {
    fn from(s: &str) -> Self {
        PathSymbol::fwd(s.to_string())
    }
}
