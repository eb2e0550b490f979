//! Quivers, dimension and framing vectors, Euler forms and derived quivers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Suffix marking a reversed arrow in doubled quivers and mutations.
///
/// A bare `*` would clash with the separator used in composite names such as
/// `a*a0`, so reversals are written `a^*`.
pub const STAR: &str = "^*";

/// Name of the reversed copy of `id`.
pub fn star(id: &str) -> String {
    format!("{id}{STAR}")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Arrow {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Arrow { id: id.into(), source: source.into(), target: target.into() }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A finite directed multigraph with string identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

/// Map from vertex id to a non-negative entry; used for dimension vectors.
pub type DimVector = BTreeMap<String, u32>;
/// Framing vectors share the representation of dimension vectors.
pub type FrameVector = BTreeMap<String, u32>;

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut ids = BTreeSet::new();
        for a in &arrows {
            if !ids.insert(a.id.as_str()) {
                return Err(Error::DuplicateArrow(a.id.clone()));
            }
            for end in [&a.source, &a.target] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::UnknownVertex(end.clone()));
                }
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Convenience constructor from string slices; panics on invalid data.
    pub fn build(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Self {
        Self::new(
            vertices.iter().map(|v| v.to_string()).collect(),
            arrows.iter().map(|(a, s, t)| Arrow::new(*a, *s, *t)).collect(),
        )
        .expect("valid quiver")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    pub fn get_arrow(&self, id: &str) -> Result<&Arrow> {
        self.arrow(id).ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|w| w == v)
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }

    pub fn check_vertex(&self, v: &str) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Number of arrows `i -> j` (computed from the arrow list).
    pub fn arrow_count(&self, i: &str, j: &str) -> u32 {
        self.arrows.iter().filter(|a| a.source == i && a.target == j).count() as u32
    }

    pub fn arrows_into<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.target == v)
    }

    pub fn arrows_out_of<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.source == v)
    }

    /// A dimension vector listing entries in vertex order.
    pub fn dim(&self, entries: &[u32]) -> DimVector {
        assert_eq!(entries.len(), self.vertices.len(), "entry count");
        self.vertices.iter().cloned().zip(entries.iter().copied()).collect()
    }

    pub fn zero_dim(&self) -> DimVector {
        self.vertices.iter().map(|v| (v.clone(), 0)).collect()
    }

    /// Checks that `g` is keyed exactly by the vertex set.
    pub fn check_dim(&self, g: &DimVector) -> Result<()> {
        if g.len() != self.vertices.len() {
            return Err(Error::DimensionVector(format!(
                "expected {} entries, found {}",
                self.vertices.len(),
                g.len()
            )));
        }
        for k in g.keys() {
            if !self.has_vertex(k) {
                return Err(Error::DimensionVector(format!("unknown vertex `{k}`")));
            }
        }
        Ok(())
    }

    /// Renames vertices via `f`, keeping order and arrow ids.
    pub fn rename_vertices(&self, f: impl Fn(&str) -> String) -> Result<Quiver> {
        Quiver::new(
            self.vertices.iter().map(|v| f(v)).collect(),
            self.arrows
                .iter()
                .map(|a| Arrow::new(a.id.clone(), f(&a.source), f(&a.target)))
                .collect(),
        )
    }
}

pub fn add_dims(g1: &DimVector, g2: &DimVector) -> DimVector {
    let mut out = g1.clone();
    for (k, v) in g2 {
        *out.entry(k.clone()).or_insert(0) += v;
    }
    out
}

/// Total dimension `sum_i g^i`.
pub fn total(g: &DimVector) -> u32 {
    g.values().sum()
}

/// `chi(g1, g2) = -sum_{i,j} a_ij g1^i g2^j + sum_i g1^i g2^i`.
pub fn euler_form(q: &Quiver, g1: &DimVector, g2: &DimVector) -> Result<i64> {
    q.check_dim(g1)?;
    q.check_dim(g2)?;
    let mut chi: i64 = 0;
    for a in q.arrows() {
        chi -= g1[&a.source] as i64 * g2[&a.target] as i64;
    }
    for v in q.vertices() {
        chi += g1[v] as i64 * g2[v] as i64;
    }
    Ok(chi)
}

pub fn antisym_form(q: &Quiver, g1: &DimVector, g2: &DimVector) -> Result<i64> {
    Ok(euler_form(q, g1, g2)? - euler_form(q, g2, g1)?)
}

/// The doubled quiver: every arrow `a: i -> j` gains a reverse `a^*: j -> i`.
pub fn double_quiver(q: &Quiver) -> Quiver {
    let mut arrows = q.arrows.clone();
    for a in q.arrows() {
        arrows.push(Arrow::new(star(&a.id), a.target.clone(), a.source.clone()));
    }
    Quiver::new(q.vertices.clone(), arrows).expect("star names are fresh")
}

/// Endpoints `(i_plus, i_minus)` of a contractible arrow.
pub fn contraction_ends(q: &Quiver, a0: &str) -> Result<(String, String)> {
    let a = q.get_arrow(a0)?;
    if a.is_loop() {
        return Err(Error::LoopContraction(a0.to_string()));
    }
    Ok((a.source.clone(), a.target.clone()))
}

/// Dimension and framing vectors of the contracted quiver: `i_-` is dropped
/// and its framing is added to `i_+`.
pub fn contract_vectors(
    q: &Quiver,
    a0: &str,
    g: &DimVector,
    w: &FrameVector,
) -> Result<(DimVector, FrameVector)> {
    let (ip, im) = contraction_ends(q, a0)?;
    q.check_dim(g)?;
    q.check_dim(w)?;
    if g[&ip] != g[&im] {
        return Err(Error::UnequalRank { arrow: a0.to_string(), plus: g[&ip], minus: g[&im] });
    }
    let mut gh = g.clone();
    gh.remove(&im);
    let mut wh = w.clone();
    let extra = wh.remove(&im).unwrap_or(0);
    *wh.get_mut(&ip).expect("i_+ present") += extra;
    Ok((gh, wh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a2() -> Quiver {
        Quiver::build(&["1", "2"], &[("a", "1", "2")])
    }

    #[test]
    fn euler_examples() {
        let q = a2();
        assert_eq!(euler_form(&q, &q.dim(&[1, 0]), &q.dim(&[0, 1])).unwrap(), -1);
        assert_eq!(euler_form(&q, &q.dim(&[1, 1]), &q.dim(&[1, 1])).unwrap(), 1);
        let j = Quiver::build(&["1"], &[("l", "1", "1")]);
        for n in 0..5 {
            assert_eq!(euler_form(&j, &j.dim(&[n]), &j.dim(&[n])).unwrap(), 0);
        }
        assert_eq!(antisym_form(&q, &q.dim(&[1, 0]), &q.dim(&[0, 1])).unwrap(), -1);
        let two = Quiver::build(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]);
        assert_eq!(antisym_form(&two, &two.dim(&[1, 0]), &two.dim(&[0, 1])).unwrap(), 0);
    }

    #[test]
    fn key_mismatch_is_an_error() {
        let q = a2();
        let mut g = q.dim(&[1, 0]);
        g.insert("3".into(), 1);
        assert!(matches!(euler_form(&q, &g, &g), Err(Error::DimensionVector(_))));
    }

    #[test]
    fn doubling() {
        let d = double_quiver(&a2());
        assert_eq!(d.arrows().len(), 2);
        assert_eq!(d.arrow("a^*").unwrap().source, "2");
        let j = double_quiver(&Quiver::build(&["1"], &[("l", "1", "1")]));
        assert!(j.arrows().iter().all(Arrow::is_loop));
        let e = Quiver::build(&["1", "2"], &[]);
        assert_eq!(double_quiver(&e), e);
    }

    #[test]
    fn vectors_under_contraction() {
        let q = Quiver::build(&["i+", "i-", "j"], &[("a0", "i+", "i-")]);
        let (g, w) = contract_vectors(&q, "a0", &q.dim(&[2, 2, 3]), &q.dim(&[1, 1, 0])).unwrap();
        assert_eq!(g, [("i+".to_string(), 2), ("j".to_string(), 3)].into_iter().collect());
        assert_eq!(w, [("i+".to_string(), 2), ("j".to_string(), 0)].into_iter().collect());
        let (g, w) = contract_vectors(&q, "a0", &q.dim(&[0, 0, 1]), &q.zero_dim()).unwrap();
        assert_eq!(g, [("i+".to_string(), 0), ("j".to_string(), 1)].into_iter().collect());
        assert_eq!(w.values().sum::<u32>(), 0);
        assert!(matches!(
            contract_vectors(&q, "a0", &q.dim(&[1, 2, 0]), &q.zero_dim()),
            Err(Error::UnequalRank { .. })
        ));
        let l = Quiver::build(&["1"], &[("l", "1", "1")]);
        assert!(matches!(
            contract_vectors(&l, "l", &l.dim(&[1]), &l.dim(&[0])),
            Err(Error::LoopContraction(_))
        ));
    }

    fn arb_quiver() -> impl Strategy<Value = Quiver> {
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

    proptest! {
        #[test]
        fn euler_bilinear(q in arb_quiver(), xs in proptest::collection::vec(0u32..4, 9)) {
            let n = q.vertices().len();
            let g1 = q.dim(&xs[0..n]);
            let g1b = q.dim(&xs[3..3 + n]);
            let g2 = q.dim(&xs[6..6 + n]);
            let lhs = euler_form(&q, &add_dims(&g1, &g1b), &g2).unwrap();
            prop_assert_eq!(lhs, euler_form(&q, &g1, &g2).unwrap() + euler_form(&q, &g1b, &g2).unwrap());
            prop_assert_eq!(antisym_form(&q, &g1, &g2).unwrap(), -antisym_form(&q, &g2, &g1).unwrap());
        }

        #[test]
        fn double_is_symmetric(q in arb_quiver()) {
            let d = double_quiver(&q);
            prop_assert_eq!(d.arrows().len(), 2 * q.arrows().len());
            for i in q.vertices() {
                for j in q.vertices() {
                    prop_assert_eq!(d.arrow_count(i, j), d.arrow_count(j, i));
                }
            }
        }
    }
}
