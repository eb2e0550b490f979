//! The shuffle algebra of a quiver: symmetric polynomials graded by dimension
//! vectors, the shuffle product, the contraction map and the spherical
//! subalgebra.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{in_row_space, rref};
use crate::poly::{Factored, Monomial, Poly, RationalFn, Var};
use crate::quiver::{add_dims, euler_form, DimVector, Quiver};
use crate::Rational;

/// A quiver together with its variable layout. Vertices are ranked by
/// identifier, so variables order by `(vertex id, slot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleAlgebra {
    quiver: Quiver,
    order: Vec<String>,
}

impl ShuffleAlgebra {
    pub fn new(quiver: &Quiver) -> Self {
        let mut order = quiver.vertices().to_vec();
        order.sort();
        ShuffleAlgebra { quiver: quiver.clone(), order }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn rank(&self, v: &str) -> Result<u16> {
        self.order
            .iter()
            .position(|w| w == v)
            .map(|r| r as u16)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    /// The variable `x[v, slot]`.
    pub fn var(&self, v: &str, slot: u16) -> Result<Var> {
        Ok(Var::x(self.rank(v)?, slot))
    }

    /// `(vertex, slot)` of an ordinary variable.
    pub fn locate(&self, x: Var) -> Option<(&str, u16)> {
        let (r, s) = x.parts()?;
        self.order.get(r as usize).map(|v| (v.as_str(), s))
    }

    pub fn var_name(&self, x: Var) -> String {
        match x {
            Var::Z => "z".into(),
            Var::U => "u".into(),
            Var::W => "w".into(),
            Var::T => "t".into(),
            _ => match self.locate(x) {
                Some((v, s)) => format!("x[{v},{s}]"),
                None => format!("?{}", x.0),
            },
        }
    }

    pub fn display(&self, p: &Poly) -> String {
        p.display_with(&|v| self.var_name(v))
    }

    pub fn display_rational(&self, r: &RationalFn) -> String {
        r.display_with(&|v| self.var_name(v))
    }

    /// Variables `x[v, from+1 ..= from+count]` tagged by vertex.
    pub fn block(&self, v: &str, from: u32, count: u32) -> Result<Vec<(String, Var)>> {
        (from + 1..=from + count).map(|s| Ok((v.to_string(), self.var(v, s as u16)?))).collect()
    }

    /// Blocks for a dimension vector, offset per vertex.
    pub fn blocks(&self, offset: &DimVector, g: &DimVector) -> Result<Vec<(String, Var)>> {
        let mut out = Vec::new();
        for v in &self.order {
            let from = offset.get(v).copied().unwrap_or(0);
            out.extend(self.block(v, from, g.get(v).copied().unwrap_or(0))?);
        }
        Ok(out)
    }

    /// `fac(A|B) = prod (x_B - x_A)^{a_ij} / prod_same-vertex (x_B - x_A)`.
    pub fn fac_sets(&self, a: &[(String, Var)], b: &[(String, Var)]) -> Factored {
        let mut f = Factored::one();
        for (i, u) in a {
            for (j, w) in b {
                let n = self.quiver.arrow_count(i, j) as i32 - i32::from(i == j);
                f.push(*w, *u, n);
                if f.is_zero() {
                    return f;
                }
            }
        }
        f
    }

    /// The shuffle kernel for `(g1, g2)`, with the second block indexed
    /// after the first.
    pub fn fac_kernel(&self, g1: &DimVector, g2: &DimVector) -> Result<Factored> {
        self.quiver.check_dim(g1)?;
        self.quiver.check_dim(g2)?;
        let zero = self.quiver.zero_dim();
        Ok(self.fac_sets(&self.blocks(&zero, g1)?, &self.blocks(g1, g2)?))
    }

    /// Validates and wraps a symmetric polynomial of dimension `gamma`.
    pub fn sym(&self, gamma: DimVector, poly: Poly) -> Result<SymPoly> {
        self.quiver.check_dim(&gamma)?;
        for x in poly.vars() {
            let ok = self.locate(x).is_some_and(|(v, s)| s >= 1 && u32::from(s) <= gamma[v]);
            if !ok {
                return Err(Error::Precondition(format!(
                    "variable {} is outside dimension vector",
                    self.var_name(x)
                )));
            }
        }
        for v in &self.order {
            for s in 1..gamma[v] {
                let (a, b) = (self.var(v, s as u16)?, self.var(v, s as u16 + 1)?);
                let swapped = poly.rename(|x| if x == a { b } else if x == b { a } else { x });
                if swapped != poly {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(SymPoly { gamma, poly })
    }

    pub fn one(&self, gamma: DimVector) -> Result<SymPoly> {
        self.sym(gamma, Poly::one())
    }

    /// `x[v,1]^k` in rank `e_v`.
    pub fn generator(&self, v: &str, k: u32) -> Result<SymPoly> {
        let mut g = self.quiver.zero_dim();
        *g.get_mut(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))? = 1;
        self.sym(g, Poly::var(self.var(v, 1)?).pow(k))
    }

    fn shift_second(&self, g1: &DimVector, p: &Poly) -> Poly {
        p.rename(|x| match self.locate(x) {
            Some((v, s)) => Var::x(x.parts().expect("ordinary").0, s + g1[v] as u16),
            None => x,
        })
    }

    /// The shuffle product. Uses
    /// `sum_sigma sigma(F / D) = [sum_sigma sgn(sigma) sigma(F V_1 V_2)] / V`
    /// with Vandermonde products `V`, so every step is polynomial; the final
    /// division must be exact.
    pub fn mul(&self, f: &SymPoly, g: &SymPoly) -> Result<SymPoly> {
        let gamma = add_dims(&f.gamma, &g.gamma);
        let zero = self.quiver.zero_dim();
        let b1 = self.blocks(&zero, &f.gamma)?;
        let b2 = self.blocks(&f.gamma, &g.gamma)?;
        // kernel times its same-vertex denominator is a polynomial
        let mut numer = self.fac_sets(&b1, &b2);
        for (i, u) in &b1 {
            for (j, w) in &b2 {
                if i == j {
                    numer.push(*w, *u, 1);
                }
            }
        }
        let numer = numer.to_rational_fn();
        let numer = numer.as_poly().ok_or_else(|| Error::Internal("kernel numerator".into()))?;
        let mut big = &f.poly * &self.shift_second(&f.gamma, &g.poly);
        big = &big * numer;
        let mixed: Vec<&String> =
            self.order.iter().filter(|v| f.gamma[*v] > 0 && g.gamma[*v] > 0).collect();
        for v in &mixed {
            let (n1, n2) = (f.gamma[*v], g.gamma[*v]);
            big = &big * &vandermonde(&self.slot_vars(v, 1, n1)?);
            big = &big * &vandermonde(&self.slot_vars(v, n1 + 1, n1 + n2)?);
        }
        let mut per_vertex: Vec<Vec<(i64, BTreeMap<Var, Var>)>> = Vec::new();
        for v in &mixed {
            let (n1, n) = (f.gamma[*v], gamma[*v]);
            let mut options = Vec::new();
            for subset in subsets(n as usize, n1 as usize) {
                let comp: Vec<usize> = (0..n as usize).filter(|k| !subset.contains(k)).collect();
                let mut inversions = 0;
                for s in &subset {
                    inversions += comp.iter().filter(|c| *c < s).count();
                }
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                let mut map = BTreeMap::new();
                for (k, s) in subset.iter().chain(comp.iter()).enumerate() {
                    map.insert(self.var(v, k as u16 + 1)?, self.var(v, *s as u16 + 1)?);
                }
                options.push((sign, map));
            }
            per_vertex.push(options);
        }
        let mut total = Poly::zero();
        let mut idx = vec![0usize; per_vertex.len()];
        loop {
            let mut sign = 1;
            let mut map: BTreeMap<Var, Var> = BTreeMap::new();
            for (k, opts) in per_vertex.iter().enumerate() {
                sign *= opts[idx[k]].0;
                map.extend(opts[idx[k]].1.iter().map(|(a, b)| (*a, *b)));
            }
            let term = big.rename(|x| map.get(&x).copied().unwrap_or(x));
            total = if sign > 0 { &total + &term } else { &total - &term };
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < per_vertex[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        for v in &mixed {
            let xs = self.slot_vars(v, 1, gamma[*v])?;
            for b in 0..xs.len() {
                for a in 0..b {
                    total = total.div_diff(xs[b], xs[a]).ok_or_else(|| {
                        Error::Internal("shuffle product is not a polynomial".into())
                    })?;
                }
            }
        }
        self.sym(gamma, total)
            .map_err(|e| Error::Internal(format!("shuffle product failed validation: {e}")))
    }

    /// The product computed term by term in rational-function arithmetic.
    pub fn mul_naive(&self, f: &SymPoly, g: &SymPoly) -> Result<RationalFn> {
        let gamma = add_dims(&f.gamma, &g.gamma);
        let zero = self.quiver.zero_dim();
        let kernel = self.fac_sets(&self.blocks(&zero, &f.gamma)?, &self.blocks(&f.gamma, &g.gamma)?);
        let base = RationalFn::from_poly(&f.poly * &self.shift_second(&f.gamma, &g.poly))
            .mul_factored(&kernel);
        let mut per_vertex: Vec<Vec<BTreeMap<Var, Var>>> = Vec::new();
        for v in &self.order {
            let (n1, n) = (f.gamma[v], gamma[v]);
            let mut options = Vec::new();
            for subset in subsets(n as usize, n1 as usize) {
                let comp: Vec<usize> = (0..n as usize).filter(|k| !subset.contains(k)).collect();
                let mut map = BTreeMap::new();
                for (k, s) in subset.iter().chain(comp.iter()).enumerate() {
                    map.insert(self.var(v, k as u16 + 1)?, self.var(v, *s as u16 + 1)?);
                }
                options.push(map);
            }
            per_vertex.push(options);
        }
        let mut total = RationalFn::zero();
        for choice in cartesian(&per_vertex.iter().map(Vec::len).collect::<Vec<_>>()) {
            let mut map: BTreeMap<Var, Var> = BTreeMap::new();
            for (k, c) in choice.iter().enumerate() {
                map.extend(per_vertex[k][*c].iter().map(|(a, b)| (*a, *b)));
            }
            total = total.add(&base.rename(|x| map.get(&x).copied().unwrap_or(x))?);
        }
        Ok(total)
    }

    fn slot_vars(&self, v: &str, from: u32, to: u32) -> Result<Vec<Var>> {
        (from..=to).map(|s| self.var(v, s as u16)).collect()
    }

    /// Degree of the kernel for `(g1, g2)`, i.e. `-chi(g1, g2)`.
    pub fn kernel_degree(&self, g1: &DimVector, g2: &DimVector) -> Result<i64> {
        Ok(-euler_form(&self.quiver, g1, g2)?)
    }

    /// Row-reduced basis of the span of all products of generators
    /// `x[v,1]^k` of total dimension `gamma` and degree at most `d`.
    pub fn spherical_span(&self, gamma: &DimVector, d: u32) -> Result<Vec<SymPoly>> {
        let products = self.spherical_products(gamma, d)?;
        let (basis, _, monomials) = reduce_products(&products);
        Ok(basis
            .into_iter()
            .map(|row| {
                let mut p = Poly::zero();
                for (c, m) in row.into_iter().zip(monomials.iter()) {
                    p.add_term(m.clone(), c);
                }
                SymPoly { gamma: gamma.clone(), poly: p }
            })
            .collect())
    }

    /// All products of generators of total dimension `gamma`, degree `<= d`.
    pub fn spherical_products(&self, gamma: &DimVector, d: u32) -> Result<Vec<SymPoly>> {
        self.quiver.check_dim(gamma)?;
        let mut out = Vec::new();
        let start = self.one(self.quiver.zero_dim())?;
        self.extend_products(&start, gamma, d as i64, &mut out)?;
        Ok(out)
    }

    fn extend_products(
        &self,
        prefix: &SymPoly,
        target: &DimVector,
        budget: i64,
        out: &mut Vec<SymPoly>,
    ) -> Result<()> {
        if prefix.gamma == *target {
            if !prefix.poly.is_zero() {
                out.push(prefix.clone());
            }
            return Ok(());
        }
        let prefix_deg = prefix.poly.degree().unwrap_or(0) as i64;
        for v in &self.order {
            if prefix.gamma[v] >= target[v] {
                continue;
            }
            let mut ev = self.quiver.zero_dim();
            *ev.get_mut(v).expect("vertex") = 1;
            // degree still needed to reach the target, with zero exponents
            let mut rest = target.clone();
            for (k, x) in rest.iter_mut() {
                *x -= prefix.gamma[k];
            }
            let floor = prefix_deg + self.kernel_degree(&prefix.gamma, &rest)? + min_internal_degree(self, &rest)?;
            let mut k = 0i64;
            while floor + k <= budget {
                let g = self.generator(v, k as u32)?;
                let p = self.mul(prefix, &g)?;
                if !p.poly.is_zero() || prefix.gamma.values().all(|x| *x == 0) {
                    self.extend_products(&p, target, budget, out)?;
                }
                k += 1;
            }
        }
        Ok(())
    }

    /// Exact membership test against the span in degree at most `d`.
    pub fn spherical_membership(&self, f: &SymPoly, d: u32) -> Result<Membership> {
        if f.poly.degree().unwrap_or(0) > d {
            return Ok(Membership::Inconclusive);
        }
        let mut products = self.spherical_products(&f.gamma, d)?;
        products.push(f.clone());
        let (basis, pivots, monomials) = reduce_products(&products[..products.len() - 1]);
        let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
        for (k, m) in monomials.iter().enumerate() {
            index.insert(m, k);
        }
        let mut v = vec![Rational::zero(); monomials.len()];
        for (m, c) in f.poly.terms() {
            match index.get(m) {
                Some(&k) => v[k] = c.clone(),
                None => return Ok(Membership::NotMember),
            }
        }
        Ok(if in_row_space(&basis, &pivots, &v) { Membership::Member } else { Membership::NotMember })
    }
}

/// Smallest possible degree of a product of generators of dimension `g`
/// (all exponents zero), over all orderings: a lower bound used to prune.
fn min_internal_degree(alg: &ShuffleAlgebra, g: &DimVector) -> Result<i64> {
    let mut letters: Vec<String> = Vec::new();
    for (v, n) in g {
        for _ in 0..*n {
            letters.push(v.clone());
        }
    }
    let mut best: Option<i64> = None;
    for perm in permutations(letters.len()) {
        let mut total = 0;
        for s in 0..perm.len() {
            for t in s + 1..perm.len() {
                let (a, b) = (&letters[perm[s]], &letters[perm[t]]);
                let n = alg.quiver.arrow_count(a, b) as i64 - i64::from(a == b);
                total += n;
            }
        }
        best = Some(best.map_or(total, |b: i64| b.min(total)));
    }
    Ok(best.unwrap_or(0))
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

type Reduced = (Vec<Vec<Rational>>, Vec<usize>, Vec<Monomial>);

fn reduce_products(products: &[SymPoly]) -> Reduced {
    let mut monomials: Vec<Monomial> =
        products.iter().flat_map(|p| p.poly.terms().keys().cloned()).collect();
    monomials.sort();
    monomials.dedup();
    monomials.reverse();
    let index: BTreeMap<&Monomial, usize> = monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let rows = products
        .iter()
        .map(|p| {
            let mut row = vec![Rational::zero(); monomials.len()];
            for (m, c) in p.poly.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect();
    let (basis, pivots) = rref(rows, monomials.len());
    (basis, pivots, monomials)
}

/// Products of the generators of the paired subalgebra around `a0`:
/// `x[i,1]^k` for `i` away from the endpoints, and the two-step products
/// `x[i_+,1]^k * x[i_-,1]^l` and `x[i_-,1]^l * x[i_+,1]^k`, multiplied in
/// every order to reach `gamma` (which must be in the equal sector). Only
/// generator exponents summing to at most `d` are used, and only products
/// of degree at most `d` are kept.
pub fn paired_products(alg: &ShuffleAlgebra, a0: &str, gamma: &DimVector, d: u32) -> Result<Vec<SymPoly>> {
    let q = alg.quiver();
    q.check_dim(gamma)?;
    let (ip, im) = crate::quiver::contraction_ends(q, a0)?;
    if gamma[&ip] != gamma[&im] {
        return Err(Error::UnequalRank { arrow: a0.to_string(), plus: gamma[&ip], minus: gamma[&im] });
    }
    let mut blocks: Vec<(DimVector, SymPoly, u32)> = Vec::new();
    for v in &alg.order {
        if *v == ip || *v == im {
            continue;
        }
        for k in 0..=d {
            let g = alg.generator(v, k)?;
            blocks.push((g.gamma.clone(), g, k));
        }
    }
    for k in 0..=d {
        for l in 0..=d - k {
            let (p, m) = (alg.generator(&ip, k)?, alg.generator(&im, l)?);
            for prod in [alg.mul(&p, &m)?, alg.mul(&m, &p)?] {
                if !prod.poly.is_zero() {
                    blocks.push((prod.gamma.clone(), prod, k + l));
                }
            }
        }
    }
    let mut out = Vec::new();
    let start = alg.one(q.zero_dim())?;
    extend_paired(alg, &blocks, &start, 0, gamma, d, &mut out)?;
    Ok(out)
}

fn extend_paired(
    alg: &ShuffleAlgebra,
    blocks: &[(DimVector, SymPoly, u32)],
    prefix: &SymPoly,
    used: u32,
    target: &DimVector,
    d: u32,
    out: &mut Vec<SymPoly>,
) -> Result<()> {
    if prefix.gamma == *target {
        if !prefix.poly.is_zero() && prefix.poly.degree().unwrap_or(0) <= d {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    for (g, f, k) in blocks {
        if used + k > d || g.iter().any(|(v, n)| prefix.gamma[v] + n > target[v]) {
            continue;
        }
        let p = alg.mul(prefix, f)?;
        if !p.poly.is_zero() {
            extend_paired(alg, blocks, &p, used + k, target, d, out)?;
        }
    }
    Ok(())
}

/// Whether the contraction of every paired product lies in the spherical
/// span of the contracted algebra (degree bound `d`). Returns the products
/// that fail, which is empty when the image claim holds.
pub fn paired_products_in_image(
    alg: &ShuffleAlgebra,
    contracted: &ShuffleAlgebra,
    a0: &str,
    gamma: &DimVector,
    d: u32,
) -> Result<Vec<SymPoly>> {
    let mut failures = Vec::new();
    for p in paired_products(alg, a0, gamma, d)? {
        let c = contract_shuffle(alg, contracted, a0, &p)?;
        if contracted.spherical_membership(&c, d)? != Membership::Member {
            failures.push(p);
        }
    }
    Ok(failures)
}

/// Outcome of a bounded membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    /// The degree bound is below the degree of the tested element.
    Inconclusive,
}

fn vandermonde(xs: &[Var]) -> Poly {
    let mut p = Poly::one();
    for b in 0..xs.len() {
        for a in 0..b {
            p = &p * &Poly::diff(xs[b], xs[a]);
        }
    }
    p
}

/// Increasing `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..s {
                let mut p = prefix.clone();
                p.push(k);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// A symmetric polynomial in the variables of a dimension vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    pub gamma: DimVector,
    pub poly: Poly,
}

/// A finite sum of homogeneous pieces.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShuffleElement {
    pub parts: BTreeMap<DimVector, Poly>,
}

impl ShuffleElement {
    pub fn from_sym(f: SymPoly) -> Self {
        let mut e = ShuffleElement::default();
        e.add(f);
        e
    }

    pub fn add(&mut self, f: SymPoly) {
        let slot = self.parts.entry(f.gamma.clone()).or_default();
        *slot = &*slot + &f.poly;
        if slot.is_zero() {
            self.parts.remove(&f.gamma);
        }
    }

    pub fn mul(&self, other: &ShuffleElement, alg: &ShuffleAlgebra) -> Result<ShuffleElement> {
        let mut out = ShuffleElement::default();
        for (g1, p1) in &self.parts {
            for (g2, p2) in &other.parts {
                let f = SymPoly { gamma: g1.clone(), poly: p1.clone() };
                let g = SymPoly { gamma: g2.clone(), poly: p2.clone() };
                out.add(alg.mul(&f, &g)?);
            }
        }
        Ok(out)
    }
}

/// The contraction map on the equal-rank sector: `x[i_-, a]` and
/// `x[i_+, a]` both become `x[i_0, a]`, where `i_0` keeps the name of `i_+`.
pub fn contract_shuffle(
    alg: &ShuffleAlgebra,
    contracted: &ShuffleAlgebra,
    a0: &str,
    f: &SymPoly,
) -> Result<SymPoly> {
    let (ip, im) = crate::quiver::contraction_ends(alg.quiver(), a0)?;
    if f.gamma[&ip] != f.gamma[&im] {
        return Err(Error::UnequalRank { arrow: a0.to_string(), plus: f.gamma[&ip], minus: f.gamma[&im] });
    }
    let mut map = BTreeMap::new();
    for v in alg.quiver().vertices() {
        let tv = if *v == im { ip.as_str() } else { v.as_str() };
        for s in 1..=f.gamma[v] {
            map.insert(alg.var(v, s as u16)?, contracted.var(tv, s as u16)?);
        }
    }
    let poly = f.poly.rename(|x| map.get(&x).copied().unwrap_or(x));
    let mut gamma = f.gamma.clone();
    gamma.remove(&im);
    contracted.sym(gamma, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;
    use proptest::prelude::*;

    fn point() -> ShuffleAlgebra {
        ShuffleAlgebra::new(&Quiver::build(&["i"], &[]))
    }

    fn jordan() -> ShuffleAlgebra {
        ShuffleAlgebra::new(&Quiver::build(&["i"], &[("l", "i", "i")]))
    }

    fn x(alg: &ShuffleAlgebra, v: &str, s: u16) -> Poly {
        Poly::var(alg.var(v, s).unwrap())
    }

    #[test]
    fn kernels() {
        let alg = ShuffleAlgebra::new(&Quiver::build(&["p", "m"], &[("a0", "p", "m")]));
        let q = alg.quiver().clone();
        let k = alg.fac_kernel(&q.dim(&[1, 1]), &q.dim(&[1, 1])).unwrap().to_rational_fn();
        let num = Poly::diff(alg.var("m", 2).unwrap(), alg.var("p", 1).unwrap());
        let den = &Poly::diff(alg.var("p", 2).unwrap(), alg.var("p", 1).unwrap())
            * &Poly::diff(alg.var("m", 2).unwrap(), alg.var("m", 1).unwrap());
        assert_eq!(k.numerator(), &num);
        assert_eq!(k.denominator_poly(), den);
        let j = jordan();
        let g = j.quiver().dim(&[1]);
        assert_eq!(j.fac_kernel(&g, &g).unwrap(), Factored::one());
        let p = point();
        let g = p.quiver().dim(&[1]);
        let k = p.fac_kernel(&g, &g).unwrap().to_rational_fn();
        assert_eq!(k.numerator(), &Poly::one());
        assert_eq!(k.denominator_poly(), Poly::diff(p.var("i", 2).unwrap(), p.var("i", 1).unwrap()));
    }

    #[test]
    fn basic_products() {
        let p = point();
        let one = p.generator("i", 0).unwrap();
        assert!(p.mul(&one, &one).unwrap().poly.is_zero());
        let j = jordan();
        let one = j.generator("i", 0).unwrap();
        assert_eq!(j.mul(&one, &one).unwrap().poly, Poly::int(2));
        let xg = j.generator("i", 1).unwrap();
        assert_eq!(j.mul(&xg, &one).unwrap().poly, &x(&j, "i", 1) + &x(&j, "i", 2));
        // x * 1 on a loop-free vertex is -1
        let xg = p.generator("i", 1).unwrap();
        let one = p.generator("i", 0).unwrap();
        assert_eq!(p.mul(&xg, &one).unwrap().poly, Poly::int(-1));
    }

    #[test]
    fn paired_products_land_in_image() {
        let q = Quiver::build(&["1", "2", "3"], &[("a1", "1", "2"), ("a2", "2", "3"), ("a3", "3", "1")]);
        let alg = ShuffleAlgebra::new(&q);
        let qh = crate::quiver::Quiver::build(&["1", "3"], &[("a2", "1", "3"), ("a3", "3", "1")]);
        let hat = ShuffleAlgebra::new(&qh);
        let g = q.dim(&[1, 1, 1]);
        let products = paired_products(&alg, "a1", &g, 3).unwrap();
        assert!(!products.is_empty());
        assert!(paired_products_in_image(&alg, &hat, "a1", &g, 3).unwrap().is_empty());
        assert!(paired_products(&alg, "a1", &q.dim(&[1, 0, 1]), 2).is_err());
    }

    #[test]
    fn rejects_asymmetric_input() {
        let j = jordan();
        let g = j.quiver().dim(&[2]);
        assert_eq!(j.sym(g, x(&j, "i", 1)), Err(Error::NotSymmetric));
    }

    #[test]
    fn contraction_examples() {
        let q = Quiver::build(&["p", "m"], &[("a0", "p", "m")]);
        let alg = ShuffleAlgebra::new(&q);
        let qh = Quiver::build(&["p"], &[]);
        let hat = ShuffleAlgebra::new(&qh);
        let f = alg.sym(q.dim(&[1, 1]), &x(&alg, "p", 1) * &x(&alg, "m", 1)).unwrap();
        assert_eq!(contract_shuffle(&alg, &hat, "a0", &f).unwrap().poly, x(&hat, "p", 1).pow(2));
        let one = alg.one(q.dim(&[1, 1])).unwrap();
        let prod = alg.mul(&one, &one).unwrap();
        assert!(contract_shuffle(&alg, &hat, "a0", &prod).unwrap().poly.is_zero());
        let c1 = contract_shuffle(&alg, &hat, "a0", &one).unwrap();
        assert_eq!(c1.poly, Poly::one());
        assert!(hat.mul(&c1, &c1).unwrap().poly.is_zero());
        let bad = alg.one(q.dim(&[1, 0])).unwrap();
        assert!(matches!(contract_shuffle(&alg, &hat, "a0", &bad), Err(Error::UnequalRank { .. })));
    }

    #[test]
    fn spans() {
        let p = point();
        let g2 = p.quiver().dim(&[2]);
        // x * 1 = -1, so the span is not empty
        let span = p.spherical_span(&g2, 1).unwrap();
        assert!(!span.is_empty());
        assert_eq!(p.spherical_membership(&p.one(g2.clone()).unwrap(), 2).unwrap(), Membership::Member);
        let j = jordan();
        let g2 = j.quiver().dim(&[2]);
        let span = j.spherical_span(&g2, 1).unwrap();
        assert_eq!(span.len(), 2);
        let two = j.sym(g2.clone(), Poly::int(2)).unwrap();
        assert_eq!(j.spherical_membership(&two, 1).unwrap(), Membership::Member);
        let s = j.sym(g2.clone(), &x(&j, "i", 1) + &x(&j, "i", 2)).unwrap();
        assert_eq!(j.spherical_membership(&s, 1).unwrap(), Membership::Member);
        let big = j.sym(g2, &x(&j, "i", 1).pow(3) + &x(&j, "i", 2).pow(3)).unwrap();
        assert_eq!(j.spherical_membership(&big, 2).unwrap(), Membership::Inconclusive);
        let g1 = j.quiver().dim(&[1]);
        assert_eq!(j.spherical_span(&g1, 2).unwrap().len(), 3);
    }

    fn arb_small_quiver() -> impl Strategy<Value = Quiver> {
        (1usize..4, proptest::collection::vec((0usize..3, 0usize..3), 0..5)).prop_map(|(n, es)| {
            let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let arrows = es
                .into_iter()
                .enumerate()
                .map(|(k, (s, t))| Arrow::new(format!("e{k}"), vs[s % n].clone(), vs[t % n].clone()))
                .collect();
            Quiver::new(vs, arrows).unwrap()
        })
    }

    /// A random symmetric polynomial: sum of a few monomial symmetric
    /// functions in each block.
    fn sym_poly(alg: &ShuffleAlgebra, gamma: &DimVector, seed: &[u8]) -> SymPoly {
        let mut p = Poly::one();
        for (k, (v, n)) in gamma.iter().enumerate() {
            let a = seed.get(k).copied().unwrap_or(0) % 3;
            let mut block = Poly::int(1 + (k as i64));
            for s in 1..=*n {
                block = &block + &x(alg, v, s as u16).pow(a as u32);
            }
            p = &p * &block;
        }
        alg.sym(gamma.clone(), p).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn fast_matches_naive(q in arb_small_quiver(), d in proptest::collection::vec(0u32..3, 6), seed in proptest::collection::vec(0u8..9, 6)) {
            let alg = ShuffleAlgebra::new(&q);
            let n = q.vertices().len();
            let g1 = q.dim(&d[..n].iter().map(|x| x % 2 + u32::from(n == 1)).collect::<Vec<_>>());
            let g2 = q.dim(&d[3..3 + n].iter().map(|x| x % 2).collect::<Vec<_>>());
            let f = sym_poly(&alg, &g1, &seed);
            let g = sym_poly(&alg, &g2, &seed[3..]);
            let fast = alg.mul(&f, &g).unwrap();
            let slow = alg.mul_naive(&f, &g).unwrap();
            prop_assert_eq!(slow.as_poly(), Some(&fast.poly));
        }

        #[test]
        fn associativity(q in arb_small_quiver(), d in proptest::collection::vec(0u32..2, 9), seed in proptest::collection::vec(0u8..9, 9)) {
            let alg = ShuffleAlgebra::new(&q);
            let n = q.vertices().len();
            let g = |k: usize| q.dim(&d[3 * k..3 * k + n]);
            let (f1, f2, f3) = (sym_poly(&alg, &g(0), &seed), sym_poly(&alg, &g(1), &seed[3..]), sym_poly(&alg, &g(2), &seed[6..]));
            let lhs = alg.mul(&alg.mul(&f1, &f2).unwrap(), &f3).unwrap();
            let rhs = alg.mul(&f1, &alg.mul(&f2, &f3).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fermionic_closed_form(a in 0u32..4, b in 0u32..4, c in -3i64..4) {
            let p = point();
            let f = p.sym(p.quiver().dim(&[1]), &x(&p, "i", 1).pow(a) + &Poly::int(c)).unwrap();
            let g = p.generator("i", b).unwrap();
            let prod = p.mul(&f, &g).unwrap();
            let swap = |q: &Poly| q.rename(|v| if v == p.var("i", 1).unwrap() { p.var("i", 2).unwrap() } else { p.var("i", 1).unwrap() });
            let fx1 = &x(&p, "i", 1).pow(a) + &Poly::int(c);
            let gx2 = x(&p, "i", 2).pow(b);
            let num = &(&fx1 * &gx2) - &(&swap(&fx1) * &swap(&gx2));
            let closed = num.div_diff(p.var("i", 2).unwrap(), p.var("i", 1).unwrap()).unwrap();
            prop_assert_eq!(prod.poly, closed);
        }
    }
}
