//! Sparse commutative polynomials over the rationals, products of linear
//! differences `x_b - x_a`, and rational functions whose denominators are
//! such products.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A variable. Ordinary variables `x[v, slot]` are keyed by a vertex rank and
/// a slot starting at 1; a few auxiliary variables sit before all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    /// Spectral variable of the action ratios.
    pub const Z: Var = Var(1);
    /// First formal variable of pairings.
    pub const U: Var = Var(2);
    /// Second formal variable of pairings.
    pub const W: Var = Var(3);
    /// Integration variable of residues.
    pub const T: Var = Var(4);

    pub fn x(rank: u16, slot: u16) -> Var {
        Var(((rank as u32 + 1) << 16) | slot as u32)
    }

    /// `(rank, slot)` for ordinary variables.
    pub fn parts(self) -> Option<(u16, u16)> {
        let hi = self.0 >> 16;
        (hi > 0).then(|| ((hi - 1) as u16, (self.0 & 0xffff) as u16))
    }
}

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 { Monomial::one() } else { Monomial(vec![(v, e)]) }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(l) if l.0 == v => l.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes all powers of `v`, returning the exponent and the rest.
    pub fn split(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().filter(|p| p.0 != v).copied().collect()))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then the exponent of
    /// the smallest variable where the two differ (larger exponent wins).
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        while i < a.len() && i < b.len() {
            if a[i].0 != b[i].0 {
                // the monomial containing the smaller variable is larger
                return if a[i].0 < b[i].0 { Ordering::Greater } else { Ordering::Less };
            }
            if a[i].1 != b[i].1 {
                return a[i].1.cmp(&b[i].1);
            }
            i += 1;
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(crate::rational::int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// `x_b - x_a`.
    pub fn diff(b: Var, a: Var) -> Self {
        &Poly::var(b) - &Poly::var(a)
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut ds = self.terms.keys().map(Monomial::degree);
        match ds.next() {
            None => true,
            Some(d) => ds.all(|e| e == d),
        }
    }

    /// Replaces each variable `v` by `c * f(v)` where `(c, f(v)) = map(v)`.
    pub fn map_vars(&self, map: impl Fn(Var) -> (Rational, Var)) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut pairs = Vec::with_capacity(m.0.len());
            for &(v, e) in &m.0 {
                let (s, w) = map(v);
                for _ in 0..e {
                    coeff *= &s;
                }
                pairs.push((w, e));
            }
            out.add_term(Monomial::from_pairs(pairs), coeff);
        }
        out
    }

    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Poly {
        self.map_vars(|v| (Rational::one(), map(v)))
    }

    /// Coefficients as a polynomial in `v`: exponent to coefficient.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Substitutes the polynomial `value` for `v`.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in self.coefficients_in(v) {
            out = &out + &(&c * &value.pow(e));
        }
        out
    }

    /// Exact quotient by `x_b - x_a`, or `None` when it does not divide.
    pub fn div_diff(&self, b: Var, a: Var) -> Option<Poly> {
        if a == b {
            return None;
        }
        let coeffs = self.coefficients_in(b);
        // remainder is the value at x_b = x_a
        let mut rem = Poly::zero();
        for (e, c) in &coeffs {
            rem = &rem + &(c * &Poly::term(Monomial::var(a, *e), Rational::one()));
        }
        if !rem.is_zero() {
            return None;
        }
        // (x_b^k - x_a^k)/(x_b - x_a) = sum_{j<k} x_b^j x_a^(k-1-j)
        let mut q = Poly::zero();
        for (k, c) in &coeffs {
            for j in 0..*k {
                let m = Monomial::from_pairs(vec![(b, j), (a, k - 1 - j)]);
                for (cm, cc) in &c.terms {
                    q.add_term(cm.mul(&m), cc.clone());
                }
            }
        }
        Some(q)
    }

    /// Human-readable form; `name` prints variables.
    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.0.is_empty() {
                parts.push(crate::rational::format(&abs));
            }
            for &(v, e) in &m.0 {
                if e == 1 {
                    parts.push(name(v));
                } else {
                    let mut t = name(v);
                    let _ = write!(t, "^{e}");
                    parts.push(t);
                }
            }
            s.push_str(&parts.join("*"));
        }
        s
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// The linear form `x_b - x_a`, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diff {
    pub a: Var,
    pub b: Var,
}

impl Diff {
    /// `x_b - x_a` as `sign * Diff`.
    pub fn new(b: Var, a: Var) -> (i64, Diff) {
        if a < b { (1, Diff { a, b }) } else { (-1, Diff { a: b, b: a }) }
    }

    pub fn poly(&self) -> Poly {
        Poly::diff(self.b, self.a)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.a == v || self.b == v
    }
}

/// `scalar * prod Diff^k` with integer exponents `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factored {
    pub scalar: Rational,
    pub factors: BTreeMap<Diff, i32>,
}

impl Factored {
    pub fn one() -> Self {
        Factored { scalar: Rational::one(), factors: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Factored { scalar: Rational::zero(), factors: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Multiplies in `(x_b - x_a)^k`.
    pub fn push(&mut self, b: Var, a: Var, k: i32) {
        if k == 0 || self.is_zero() {
            return;
        }
        if a == b {
            if k > 0 {
                *self = Factored::zero();
                return;
            }
            panic!("pushed a vanishing denominator");
        }
        let (s, d) = Diff::new(b, a);
        if s < 0 && k % 2 != 0 {
            self.scalar = -self.scalar.clone();
        }
        let e = self.factors.entry(d).or_insert(0);
        *e += k;
        if *e == 0 {
            self.factors.remove(&d);
        }
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        if self.is_zero() || other.is_zero() {
            return Factored::zero();
        }
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (d, k) in &other.factors {
            let e = out.factors.entry(*d).or_insert(0);
            *e += k;
            if *e == 0 {
                out.factors.remove(d);
            }
        }
        out
    }

    pub fn inv(&self) -> Result<Factored> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Factored {
            scalar: Rational::one() / &self.scalar,
            factors: self.factors.iter().map(|(d, k)| (*d, -k)).collect(),
        })
    }

    pub fn div(&self, other: &Factored) -> Result<Factored> {
        Ok(self.mul(&other.inv()?))
    }

    /// Renames variables; merged positive factors vanish, merged negative
    /// factors are a division by zero.
    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Result<Factored> {
        let mut out = Factored { scalar: self.scalar.clone(), factors: BTreeMap::new() };
        let mut zero = false;
        for (d, k) in &self.factors {
            let (a, b) = (map(d.a), map(d.b));
            if a == b {
                if *k < 0 {
                    return Err(Error::DivisionByZero);
                }
                zero = true;
                continue;
            }
            out.push(b, a, *k);
        }
        Ok(if zero { Factored::zero() } else { out })
    }

    pub fn to_rational_fn(&self) -> RationalFn {
        let mut num = Poly::constant(self.scalar.clone());
        let mut den = BTreeMap::new();
        for (d, k) in &self.factors {
            if *k > 0 {
                num = &num * &d.poly().pow(*k as u32);
            } else {
                den.insert(*d, (-k) as u32);
            }
        }
        RationalFn::new(num, den)
    }
}

/// `num / prod Diff^k`, kept reduced: no denominator factor divides `num`.
/// Distinct differences are coprime, so the reduced form is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: BTreeMap<Diff, u32>,
}

impl RationalFn {
    pub fn new(num: Poly, den: BTreeMap<Diff, u32>) -> Self {
        let mut r = RationalFn { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFn { num: p, den: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Diff, u32> {
        &self.den
    }

    pub fn denominator_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (d, k) in &self.den {
            p = &p * &d.poly().pow(*k);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<Diff> = self.den.keys().copied().collect();
        for d in keys {
            while let Some(k) = self.den.get(&d).copied().filter(|k| *k > 0) {
                match self.num.div_diff(d.b, d.a) {
                    Some(q) => {
                        self.num = q;
                        if k == 1 {
                            self.den.remove(&d);
                        } else {
                            self.den.insert(d, k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        let mut lcm = self.den.clone();
        for (d, k) in &other.den {
            let e = lcm.entry(*d).or_insert(0);
            *e = (*e).max(*k);
        }
        let lift = |r: &RationalFn| {
            let mut p = r.num.clone();
            for (d, k) in &lcm {
                let have = r.den.get(d).copied().unwrap_or(0);
                if *k > have {
                    p = &p * &d.poly().pow(k - have);
                }
            }
            p
        };
        RationalFn::new(&lift(self) + &lift(other), lcm)
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        let mut den = self.den.clone();
        for (d, k) in &other.den {
            *den.entry(*d).or_insert(0) += k;
        }
        RationalFn::new(&self.num * &other.num, den)
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFn {
        RationalFn::new(&self.num * p, self.den.clone())
    }

    pub fn mul_factored(&self, f: &Factored) -> RationalFn {
        self.mul(&f.to_rational_fn())
    }

    pub fn scale(&self, c: &Rational) -> RationalFn {
        RationalFn { num: self.num.scale(c), den: if c.is_zero() { BTreeMap::new() } else { self.den.clone() } }
    }

    /// Renames variables; a denominator factor whose ends merge is a
    /// division by zero.
    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Result<RationalFn> {
        let num = self.num.rename(&map);
        let mut den = BTreeMap::new();
        let mut sign = 1i64;
        for (d, k) in &self.den {
            let (a, b) = (map(d.a), map(d.b));
            if a == b {
                return Err(Error::DivisionByZero);
            }
            let (s, nd) = Diff::new(b, a);
            if s < 0 && k % 2 == 1 {
                sign = -sign;
            }
            *den.entry(nd).or_insert(0) += k;
        }
        Ok(RationalFn::new(num.scale(&crate::rational::int(sign)), den))
    }

    /// Replaces each variable `v` by `c * v'`; used for `g(-x)`. The
    /// denominator must only see sign changes applied to all its variables
    /// at once.
    pub fn negate_vars(&self) -> RationalFn {
        let num = self.num.map_vars(|v| (-Rational::one(), v));
        let deg: u32 = self.den.values().sum();
        let s = if deg.is_multiple_of(2) { 1 } else { -1 };
        RationalFn::new(num.scale(&crate::rational::int(s)), self.den.clone())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        for d in self.den.keys() {
            v.insert(d.a);
            v.insert(d.b);
        }
        v
    }

    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        let num = self.num.display_with(name);
        if self.den.is_empty() {
            return num;
        }
        let mut den = String::new();
        for (k, (d, e)) in self.den.iter().enumerate() {
            if k > 0 {
                den.push('*');
            }
            let _ = write!(den, "({} - {})", name(d.b), name(d.a));
            if *e > 1 {
                let _ = write!(den, "^{e}");
            }
        }
        alloc::format!("({num})/({den})")
    }
}

/// Residue at infinity in `x`: minus the coefficient of `x^-1` in the
/// expansion at `x = infinity`. Other variables are parameters.
pub fn residue_at_infinity(h: &RationalFn, x: Var) -> RationalFn {
    let mut dx = Poly::one();
    let mut lc = 1i64;
    let mut rest = BTreeMap::new();
    for (d, k) in h.denominator() {
        if d.involves(x) {
            dx = &dx * &d.poly().pow(*k);
            if d.a == x && k % 2 == 1 {
                lc = -lc;
            }
        } else {
            rest.insert(*d, *k);
        }
    }
    let deg = dx.degree_in(x);
    if deg == 0 {
        return RationalFn::zero();
    }
    // remainder of the numerator modulo dx, as a polynomial in x
    let dcoef = dx.coefficients_in(x);
    let mut ncoef = h.numerator().coefficients_in(x);
    let lcr = crate::rational::int(lc);
    loop {
        let Some((&top, _)) = ncoef.iter().next_back() else { break };
        if top < deg {
            break;
        }
        let c = ncoef.remove(&top).expect("present").scale(&lcr);
        for (e, dc) in &dcoef {
            if *e == deg {
                continue;
            }
            let slot = ncoef.entry(top - deg + e).or_default();
            *slot = &*slot - &(&c * dc);
            if slot.is_zero() {
                ncoef.remove(&(top - deg + e));
            }
        }
    }
    let r = ncoef.get(&(deg - 1)).cloned().unwrap_or_default();
    RationalFn::new(r.scale(&-lcr), rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn x(i: u16) -> Var {
        Var::x(0, i)
    }

    #[test]
    fn division_by_differences() {
        let p = &Poly::var(x(2)).pow(3) - &Poly::var(x(1)).pow(3);
        let q = p.div_diff(x(2), x(1)).unwrap();
        assert_eq!(&q * &Poly::diff(x(2), x(1)), p);
        assert!(Poly::var(x(1)).div_diff(x(2), x(1)).is_none());
    }

    #[test]
    fn rational_reduction() {
        let mut den = BTreeMap::new();
        let (s, d) = Diff::new(x(2), x(1));
        assert_eq!(s, 1);
        den.insert(d, 1);
        let r = RationalFn::new(Poly::diff(x(2), x(1)), den.clone());
        assert_eq!(r, RationalFn::one());
        // 1/(x2-x1) + 1/(x1-x2) = 0
        let a = RationalFn::new(Poly::one(), den.clone());
        let b = RationalFn::new(Poly::int(-1), den);
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn factored_signs() {
        let mut f = Factored::one();
        f.push(x(1), x(2), 1);
        assert_eq!(f.to_rational_fn().as_poly().unwrap(), &Poly::diff(x(1), x(2)));
        let g = f.inv().unwrap();
        assert_eq!(f.mul(&g), Factored::one());
        let merged = f.rename(|_| x(1)).unwrap();
        assert!(merged.is_zero());
        assert_eq!(g.rename(|_| x(1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn residues() {
        let xv = x(1);
        let a = x(2);
        let (s, d) = Diff::new(xv, Var::Z);
        let one_over_x = RationalFn::new(Poly::int(s), [(d, 1)].into_iter().collect());
        // with Z as a parameter this is 1/(x - z); residue -1
        assert_eq!(residue_at_infinity(&one_over_x, xv), RationalFn::from_poly(Poly::int(-1)));
        let (s, d) = Diff::new(xv, a);
        let h = RationalFn::new(Poly::int(s), [(d, 1)].into_iter().collect());
        assert_eq!(residue_at_infinity(&h, xv), RationalFn::from_poly(Poly::int(-1)));
        let p = RationalFn::from_poly(&Poly::var(xv).pow(3) + &Poly::int(2));
        assert!(residue_at_infinity(&p, xv).is_zero());
        // x^2/(x-a)^2 = 1 + 2a/x + ...: residue -2a
        let h = RationalFn::new(Poly::var(xv).pow(2), [(d, 2)].into_iter().collect());
        assert_eq!(
            residue_at_infinity(&h, xv),
            RationalFn::from_poly(Poly::var(a).scale(&int(-2)))
        );
        let _ = frac(1, 2);
    }

    #[test]
    fn display() {
        let p = &(&Poly::var(x(1)).pow(2) - &Poly::var(x(2))) + &Poly::constant(frac(1, 2));
        let s = p.display_with(&|v| alloc::format!("x{}", v.parts().unwrap().1));
        assert_eq!(s, "x1^2 - x2 + 1/2");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u32..3, 0u32..3, 0u32..3, -4i64..5), 0..5).prop_map(|ts| {
            let mut p = Poly::zero();
            for (a, b, c, k) in ts {
                p.add_term(Monomial::from_pairs(vec![(x(1), a), (x(2), b), (x(3), c)]), int(k));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn exact_division_roundtrip(a in arb_poly()) {
            let p = &a * &Poly::diff(x(3), x(1));
            prop_assert_eq!(p.div_diff(x(3), x(1)).unwrap(), a);
        }
    }
}
