//! The truncated quantum torus `e_a e_b = L^{-chi(a,b)} e_{a+b}`, with
//! coefficients Laurent polynomials in `L^{1/2}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};
use crate::Rational;

/// A Laurent polynomial in `L^{1/2}`, keyed by the exponent of `L^{1/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LPoly(BTreeMap<i64, Rational>);

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        LPoly::monomial(0, c)
    }

    pub fn one() -> Self {
        LPoly::constant(Rational::one())
    }

    /// `c * L^{half / 2}`.
    pub fn monomial(half: i64, c: Rational) -> Self {
        let mut p = LPoly::zero();
        p.add_term(half, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, half: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(half).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&half);
        }
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (h, c) in &other.0 {
            out.add_term(*h, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LPoly {
        let mut out = LPoly::zero();
        for (h, d) in &self.0 {
            out.add_term(*h, d * c);
        }
        out
    }

    pub fn mul(&self, other: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (h1, c1) in &self.0 {
            for (h2, c2) in &other.0 {
                out.add_term(h1 + h2, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by `L^{half / 2}`.
    pub fn shift(&self, half: i64) -> LPoly {
        LPoly(self.0.iter().map(|(h, c)| (h + half, c.clone())).collect())
    }

    /// Terms in decreasing exponent, e.g. `2*L - L^(1/2) + 1`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (h, c)) in self.0.iter().rev().enumerate() {
            let (neg, a) = crate::rational::split_sign(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let power = match (h % 2 == 0, *h) {
                (_, 0) => String::new(),
                (true, 2) => "L".into(),
                (true, e) => format!("L^{}", e / 2),
                (false, e) => format!("L^({e}/2)"),
            };
            if power.is_empty() {
                out.push_str(&crate::rational::format(&a));
            } else if a.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{}*{power}", crate::rational::format(&a)));
            }
        }
        out
    }
}

/// The quantum torus of a quiver truncated at total degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumTorus {
    vertices: Vec<String>,
    /// `chi[i][j]` on unit vectors.
    chi: Vec<Vec<i64>>,
    pub k: u32,
}

/// An element: dimension vectors in vertex order mapped to coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorusElement {
    pub terms: BTreeMap<Vec<u32>, LPoly>,
}

impl TorusElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: Vec<u32>, c: LPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g.clone()).or_default();
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add(&self, other: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> TorusElement {
        let mut out = TorusElement::default();
        for (g, d) in &self.terms {
            out.add_term(g.clone(), d.scale(c));
        }
        out
    }

    pub fn neg(&self) -> TorusElement {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &TorusElement) -> TorusElement {
        self.add(&other.neg())
    }

    /// Coefficient of `e_0`.
    pub fn scalar_part(&self) -> LPoly {
        self.terms.iter().find(|(g, _)| g.iter().all(|n| *n == 0)).map(|(_, c)| c.clone()).unwrap_or_default()
    }
}

impl QuantumTorus {
    pub fn new(q: &Quiver, k: u32) -> Self {
        let vertices = q.vertices().to_vec();
        let n = vertices.len();
        let mut chi = alloc::vec![alloc::vec![0i64; n]; n];
        for (i, row) in chi.iter_mut().enumerate() {
            row[i] = 1;
        }
        for a in q.arrows() {
            let s = q.vertex_index(&a.source).expect("valid quiver");
            let t = q.vertex_index(&a.target).expect("valid quiver");
            chi[s][t] -= 1;
        }
        QuantumTorus { vertices, chi, k }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn chi(&self, a: &[u32], b: &[u32]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                s += self.chi[i][j] * i64::from(*ai) * i64::from(*bj);
            }
        }
        s
    }

    /// `<a, b> = chi(a, b) - chi(b, a)`.
    pub fn antisym(&self, a: &[u32], b: &[u32]) -> i64 {
        self.chi(a, b) - self.chi(b, a)
    }

    pub fn to_vec(&self, g: &DimVector) -> Result<Vec<u32>> {
        if g.len() != self.vertices.len() {
            return Err(Error::DimensionVector(format!("expected {} entries", self.vertices.len())));
        }
        self.vertices
            .iter()
            .map(|v| g.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.clone())))
            .collect()
    }

    pub fn one(&self) -> TorusElement {
        self.basis(&alloc::vec![0; self.vertices.len()], LPoly::one())
    }

    /// `c * e_g`, or zero beyond the truncation.
    pub fn basis(&self, g: &[u32], c: LPoly) -> TorusElement {
        let mut out = TorusElement::default();
        if g.iter().sum::<u32>() <= self.k {
            out.add_term(g.to_vec(), c);
        }
        out
    }

    pub fn mul(&self, x: &TorusElement, y: &TorusElement) -> TorusElement {
        let mut out = TorusElement::default();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let g: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                if g.iter().sum::<u32>() > self.k {
                    continue;
                }
                out.add_term(g, ca.mul(cb).shift(-2 * self.chi(a, b)));
            }
        }
        out
    }

    /// `exp(x)` for `x` without scalar part; the series stops at degree `k`.
    pub fn exp(&self, x: &TorusElement) -> Result<TorusElement> {
        if !x.scalar_part().is_zero() {
            return Err(Error::NotInLieAlgebra);
        }
        let mut out = self.one();
        let mut power = self.one();
        for n in 1..=self.k {
            power = self.mul(&power, x).scale(&(Rational::one() / crate::rational::int(i64::from(n))));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    /// `log(g)` for `g` with scalar part 1.
    pub fn log(&self, g: &TorusElement) -> Result<TorusElement> {
        if g.scalar_part() != LPoly::one() {
            return Err(Error::Precondition("logarithm needs scalar part 1".into()));
        }
        let y = g.sub(&self.one());
        let mut out = TorusElement::default();
        let mut power = self.one();
        for n in 1..=self.k {
            power = self.mul(&power, &y);
            if power.is_zero() {
                break;
            }
            let c = crate::rational::frac(if n % 2 == 1 { 1 } else { -1 }, i64::from(n));
            out = out.add(&power.scale(&c));
        }
        Ok(out)
    }

    /// Inverse of a group element.
    pub fn inverse(&self, g: &TorusElement) -> Result<TorusElement> {
        self.exp(&self.log(g)?.neg())
    }

    pub fn display(&self, x: &TorusElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = x
            .terms
            .iter()
            .map(|(g, c)| {
                let gs: Vec<String> = g.iter().map(|n| format!("{n}")).collect();
                format!("({})*e({})", c.display(), gs.join(","))
            })
            .collect();
        parts.join(" + ")
    }
}
