//! Cones, walls with attached elements, path-ordered products and the
//! consistency test around joints.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scattering::torus::{QuantumTorus, TorusElement};
use crate::Rational;

pub type Point = Vec<Rational>;

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn pair(y: &[Rational], g: &[u32]) -> Rational {
    y.iter().zip(g).map(|(x, n)| x * crate::rational::int(i64::from(*n))).sum()
}

/// A polyhedral cone given by generating rays and/or inequalities
/// `n . y >= 0`. An empty description is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cone {
    pub rays: Vec<Point>,
    pub inequalities: Vec<Point>,
}

impl Cone {
    pub fn whole() -> Self {
        Cone::default()
    }

    pub fn from_inequalities(inequalities: Vec<Point>) -> Self {
        Cone { rays: Vec::new(), inequalities }
    }

    /// Membership by the inequalities; `strict` asks for the interior.
    pub fn contains(&self, y: &[Rational], strict: bool) -> bool {
        self.inequalities.iter().all(|n| {
            let v = dot(n, y);
            if strict {
                v.is_positive()
            } else {
                !v.is_negative()
            }
        })
    }

    /// Generators satisfy the inequalities, and so do positive combinations
    /// of pairs of them.
    pub fn is_consistent(&self) -> bool {
        let ok = |y: &Point| self.contains(y, false);
        self.rays.iter().all(ok)
            && self.rays.iter().enumerate().all(|(i, a)| {
                self.rays[i + 1..].iter().all(|b| {
                    let s: Point = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    ok(&s)
                })
            })
    }
}

/// A codimension-one cone inside `normal^perp` with its attached element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub normal: Vec<u32>,
    pub cone: Cone,
    pub element: TorusElement,
}

impl Wall {
    /// The attached element must be supported on positive multiples of the
    /// normal and lie in the Lie algebra.
    pub fn new(normal: Vec<u32>, cone: Cone, element: TorusElement) -> Result<Self> {
        if normal.iter().all(|n| *n == 0) {
            return Err(Error::Precondition("wall normal is zero".into()));
        }
        for g in element.terms.keys() {
            if !is_multiple(g, &normal) {
                return Err(Error::Precondition(format!("wall element has support {g:?} off the normal {normal:?}")));
            }
        }
        Ok(Wall { normal, cone, element })
    }

    fn contains(&self, y: &[Rational], strict: bool) -> bool {
        pair(y, &self.normal).is_zero() && self.cone.contains(y, strict)
    }
}

fn is_multiple(g: &[u32], n: &[u32]) -> bool {
    if g.iter().all(|x| *x == 0) {
        return false;
    }
    let (i, ni) = n.iter().enumerate().find(|(_, x)| **x > 0).expect("nonzero normal");
    let (p, q) = (u64::from(g[i]), u64::from(*ni));
    g.iter().zip(n).all(|(a, b)| u64::from(*a) * q == u64::from(*b) * p)
}

/// A finite set of walls in a quantum torus.
#[derive(Debug, Clone)]
pub struct GComplex {
    pub torus: QuantumTorus,
    pub walls: Vec<Wall>,
}

/// A piecewise-linear path through rational breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec {
    pub points: Vec<Point>,
}

/// A crossing: wall index, time (segment, parameter) and sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub wall: usize,
    pub segment: usize,
    pub t: Rational,
    pub sign: i64,
}

impl GComplex {
    pub fn new(torus: QuantumTorus, walls: Vec<Wall>) -> Result<Self> {
        let n = torus.vertices().len();
        for w in &walls {
            if w.normal.len() != n || w.cone.inequalities.iter().any(|i| i.len() != n) {
                return Err(Error::DimensionVector("wall data has the wrong length".into()));
            }
        }
        Ok(GComplex { torus, walls })
    }

    /// Crossings in path order; errors if the path touches a wall boundary,
    /// runs inside a wall, has a breakpoint on a wall, or crosses two walls
    /// of different hyperplanes at one point.
    pub fn crossings(&self, p: &PathSpec) -> Result<Vec<Crossing>> {
        if p.points.len() < 2 {
            return Err(Error::Precondition("a path needs two points".into()));
        }
        for (k, y) in p.points.iter().enumerate() {
            if y.len() != self.torus.vertices().len() {
                return Err(Error::DimensionVector(format!("path point {k} has the wrong length")));
            }
            if let Some(i) = self.walls.iter().position(|w| w.contains(y, false)) {
                return Err(Error::NonGenericPath(format!("breakpoint {k} lies on wall {i}")));
            }
        }
        let mut out = Vec::new();
        for s in 0..p.points.len() - 1 {
            let (a, b) = (&p.points[s], &p.points[s + 1]);
            let mut here: Vec<Crossing> = Vec::new();
            for (i, w) in self.walls.iter().enumerate() {
                let (va, vb) = (pair(a, &w.normal), pair(b, &w.normal));
                if va.is_zero() && vb.is_zero() {
                    continue;
                }
                if va.is_positive() == vb.is_positive() {
                    continue;
                }
                let t = &va / (&va - &vb);
                let y: Point = a.iter().zip(b).map(|(x, z)| x + &t * (z - x)).collect();
                if !w.cone.contains(&y, false) {
                    continue;
                }
                if !w.cone.contains(&y, true) {
                    return Err(Error::NonGenericPath(format!("path meets the boundary of wall {i}")));
                }
                let sign = if vb > va { -1 } else { 1 };
                here.push(Crossing { wall: i, segment: s, t, sign });
            }
            here.sort_by(|x, y| x.t.cmp(&y.t).then(x.wall.cmp(&y.wall)));
            for pair_ in here.windows(2) {
                if pair_[0].t == pair_[1].t && !is_parallel(&self.walls[pair_[0].wall], &self.walls[pair_[1].wall]) {
                    return Err(Error::NonGenericPath("path crosses two walls at a joint".into()));
                }
            }
            out.extend(here);
        }
        Ok(out)
    }

    /// `exp(f_m)^{e_m} ... exp(f_1)^{e_1}`, with later crossings on the left
    /// and `e = -sign(d/dt p(t)(gamma))`.
    pub fn path_ordered_product(&self, p: &PathSpec) -> Result<TorusElement> {
        let mut g = self.torus.one();
        for c in self.crossings(p)? {
            let f = &self.walls[c.wall].element;
            let f = if c.sign > 0 { f.clone() } else { f.neg() };
            g = self.torus.mul(&self.torus.exp(&f)?, &g);
        }
        Ok(g)
    }

    /// Around each sample joint point, compares the products along the two
    /// halves of a small loop in the plane transverse to two walls through
    /// it. Returns per-joint verdicts.
    pub fn consistency_check(&self, joints: &[Point]) -> Result<Vec<bool>> {
        joints.iter().map(|y| self.consistent_at(y)).collect()
    }

    fn consistent_at(&self, y: &[Rational]) -> Result<bool> {
        let through: Vec<&Wall> = self.walls.iter().filter(|w| w.contains(y, false)).collect();
        let mut normals: Vec<Point> = Vec::new();
        for w in &through {
            let n: Point = w.normal.iter().map(|x| crate::rational::int(i64::from(*x))).collect();
            if normals.iter().all(|m| !is_parallel_vec(m, &n)) {
                normals.push(n);
            }
        }
        if normals.len() < 2 {
            return Ok(true);
        }
        let (u, v) = dual_pair(&normals[0], &normals[1])?;
        let corners = [(1i64, 1i64), (-1, 1), (-1, -1), (1, -1)];
        for weights in [(2i64, 3i64), (3, 5), (5, 7), (7, 11), (11, 13)] {
            for scale in 1..=8u32 {
                let eps = Rational::new(1.into(), (1u64 << (4 * scale)).into());
                let pts: Vec<Point> = corners
                    .iter()
                    .map(|(s1, s2)| {
                        let a = crate::rational::int(s1 * weights.0) * &eps;
                        let b = crate::rational::int(s2 * weights.1) * &eps;
                        y.iter().zip(u.iter().zip(&v)).map(|(c, (p, q))| c + &a * p + &b * q).collect()
                    })
                    .collect();
                let first = PathSpec { points: alloc::vec![pts[0].clone(), pts[1].clone(), pts[2].clone()] };
                let second = PathSpec { points: alloc::vec![pts[0].clone(), pts[3].clone(), pts[2].clone()] };
                let (Ok(c1), Ok(c2)) = (self.crossings(&first), self.crossings(&second)) else { continue };
                let near = |cs: &[Crossing]| cs.iter().all(|c| self.walls[c.wall].contains(y, false));
                if !near(&c1) || !near(&c2) {
                    continue;
                }
                return Ok(self.path_ordered_product(&first)? == self.path_ordered_product(&second)?);
            }
        }
        Err(Error::NonGenericPath("no generic loop found around the joint".into()))
    }
}

fn is_parallel(a: &Wall, b: &Wall) -> bool {
    is_multiple(&a.normal, &b.normal)
}

fn is_parallel_vec(a: &[Rational], b: &[Rational]) -> bool {
    for i in 0..a.len() {
        for j in 0..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

/// `u, v` in the span of `n1, n2` with `u.n1 = v.n2 = 1`, `u.n2 = v.n1 = 0`.
fn dual_pair(n1: &[Rational], n2: &[Rational]) -> Result<(Point, Point)> {
    let (a, b, d) = (dot(n1, n1), dot(n1, n2), dot(n2, n2));
    let det = &a * &d - &b * &b;
    if det.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let comb = |x: Rational, y: Rational| -> Point { n1.iter().zip(n2).map(|(p, q)| &x * p + &y * q).collect() };
    let u = comb(&d / &det, -&b / &det);
    let v = comb(-&b / &det, &a / &det);
    Ok((u, v))
}

/// Formats a point as `(a, b, ...)`.
pub fn format_point(y: &[Rational]) -> String {
    let parts: Vec<String> = y.iter().map(crate::rational::format).collect();
    format!("({})", parts.join(","))
}
