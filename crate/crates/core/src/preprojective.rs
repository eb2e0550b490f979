//! Double and triple quivers, the cubic potential `sum [a, a^*] l`, cut
//! relations, the preprojective (ADHM) relations, and their compatibility
//! with edge contraction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::contraction::{contract_qp, ContractionData};
use crate::error::{Error, Result};
use crate::path::{free_reduce, NCPoly, Path, PathSymbol, Potential, QuiverWithPotential};
use crate::quiver::{double_quiver, star, Arrow, Quiver};
use crate::rational::int;
use crate::Rational;

/// The loop added at vertex `v` in the triple quiver.
pub fn loop_name(v: &str) -> String {
    format!("l_{v}")
}

/// Per-vertex relation components.
pub type RelationSet = BTreeMap<String, NCPoly>;

fn word_poly(ids: &[&str], c: i64) -> NCPoly {
    NCPoly::term(Path::Word(ids.iter().map(|a| PathSymbol::fwd(*a)).collect()), int(c))
}

/// The double quiver with a loop `l_v` at every vertex, and the potential
/// `sum_a (a a^* l_{t(a)} - a^* a l_{s(a)})`.
pub fn triple_qp(q: &Quiver) -> Result<QuiverWithPotential> {
    let d = double_quiver(q);
    let mut arrows = d.arrows().to_vec();
    for v in q.vertices() {
        arrows.push(Arrow::new(loop_name(v), v.clone(), v.clone()));
    }
    let t = Quiver::new(q.vertices().to_vec(), arrows)?;
    let mut w = Potential::zero();
    for a in q.arrows() {
        let s = star(&a.id);
        let (lt, ls) = (loop_name(&a.target), loop_name(&a.source));
        w.add_word(&t, &[PathSymbol::fwd(&a.id), PathSymbol::fwd(&s), PathSymbol::fwd(lt)], Rational::one())?;
        w.add_word(&t, &[PathSymbol::fwd(&s), PathSymbol::fwd(&a.id), PathSymbol::fwd(ls)], -Rational::one())?;
    }
    QuiverWithPotential::new(t, w, None)
}

/// `dW / dl` for each loop `l` of the cut, keyed by the loop's vertex.
pub fn cut_relations(qp: &QuiverWithPotential, cut: &[String]) -> Result<RelationSet> {
    let mut out = RelationSet::new();
    for l in cut {
        let a = qp.quiver.get_arrow(l)?;
        if !a.is_loop() {
            return Err(Error::Precondition(format!("cut element {l} is not a loop")));
        }
        out.insert(a.source.clone(), qp.potential.cyclic_derivative(&qp.quiver, l)?);
    }
    Ok(out)
}

/// `sum_{t(a)=i} a a^* - sum_{s(a)=i} a^* a` at every vertex `i`, as paths
/// in the double quiver.
pub fn preprojective_relations(q: &Quiver) -> RelationSet {
    let mut out: RelationSet = q.vertices().iter().map(|v| (v.clone(), NCPoly::zero())).collect();
    for a in q.arrows() {
        let s = star(&a.id);
        let at = out.get_mut(&a.target).expect("valid quiver");
        *at = at.add(&word_poly(&[&a.id, &s], 1));
        let at = out.get_mut(&a.source).expect("valid quiver");
        *at = at.add(&word_poly(&[&s, &a.id], -1));
    }
    out
}

/// Rewrites a word of `Q` (possibly with `a0^-1`) in hatted arrows: the
/// `a0` letters are dropped, every other arrow is hatted, and the expansion
/// of the result must free-reduce back to the word.
fn rewrite_hatted(data: &ContractionData, q: &Quiver, w: &[PathSymbol]) -> Result<Vec<PathSymbol>> {
    let mut out = Vec::new();
    let mut expansion = Vec::new();
    for s in w {
        if s.arrow == data.a0 {
            continue;
        }
        if s.inverse {
            return Err(Error::Precondition(format!("{s} has no hatted form")));
        }
        out.push(PathSymbol::fwd(data.hat(&s.arrow)?.id.clone()));
        expansion.extend(data.expansion(q, &s.arrow)?);
    }
    if free_reduce(&expansion) != free_reduce(w) {
        return Err(Error::Precondition(format!("word {} is not a product of hatted arrows", Path::Word(w.to_vec()))));
    }
    Ok(out)
}

fn rewrite_poly(
    data: &ContractionData,
    q: &Quiver,
    p: &NCPoly,
    rename: &BTreeMap<String, String>,
) -> Result<NCPoly> {
    let mut out = NCPoly::zero();
    for (path, c) in p.terms() {
        let w = rewrite_hatted(data, q, path.symbols())?;
        let w: Vec<PathSymbol> =
            w.into_iter().map(|s| PathSymbol::fwd(rename.get(&s.arrow).cloned().unwrap_or(s.arrow))).collect();
        out.add_term(Path::Word(w), c.clone());
    }
    Ok(out)
}

/// Hatted names of the doubled quiver carried to the double of the
/// contracted quiver: `hat(a^*)` becomes `hat(a)^*`.
fn star_renaming(q: &Quiver, a0: &str, dd: &ContractionData) -> Result<BTreeMap<String, String>> {
    let dq = ContractionData::new(q, a0)?;
    let mut m = BTreeMap::new();
    for a in q.arrows() {
        if a.id == a0 {
            continue;
        }
        m.insert(dd.hat(&star(&a.id))?.id.clone(), star(&dq.hat(&a.id)?.id));
    }
    Ok(m)
}

/// Contracts the triple quiver with potential along `a0` and checks:
/// the contraction expands back to `W`; the terms with the hatted `a0^*`
/// expand to `l_{i-} a0 a0^* - l_{i+} a0^* a0`; and the rest, after merging
/// the two loops at the contracted vertex and renaming `hat(a^*)` to
/// `hat(a)^*`, is the triple potential of the contracted quiver.
pub fn contract_triple_check(q: &Quiver, a0: &str) -> Result<bool> {
    let t = triple_qp(q)?;
    let tq = t.quiver.clone();
    let dd = ContractionData::new(&tq, a0)?;
    let (ip, im) = (dd.i_plus.clone(), dd.i_minus.clone());
    let hatted = contract_qp(&t, a0)?;
    let a0s = dd.hat(&star(a0))?.id.clone();
    let (lp, lm) = (dd.hat(&loop_name(&ip))?.id.clone(), dd.hat(&loop_name(&im))?.id.clone());

    let mut with_a0s = Potential::zero();
    let mut rest = Potential::zero();
    for (w, c) in hatted.potential.terms() {
        if w.contains_arrow(&a0s) {
            with_a0s.add_cyclic(w.clone(), c.clone());
        } else {
            rest.add_cyclic(w.clone(), c.clone());
        }
    }
    let mut expect = Potential::zero();
    expect.add_word(&hatted.quiver, &[PathSymbol::fwd(&lm), PathSymbol::fwd(&a0s)], Rational::one())?;
    expect.add_word(&hatted.quiver, &[PathSymbol::fwd(&lp), PathSymbol::fwd(&a0s)], -Rational::one())?;
    if with_a0s != expect {
        return Ok(false);
    }
    let mut collapse = Potential::zero();
    let s0 = star(a0);
    collapse.add_word(&tq, &[PathSymbol::fwd(loop_name(&im)), PathSymbol::fwd(a0), PathSymbol::fwd(&s0)], Rational::one())?;
    collapse.add_word(&tq, &[PathSymbol::fwd(loop_name(&ip)), PathSymbol::fwd(&s0), PathSymbol::fwd(a0)], -Rational::one())?;
    if crate::contraction::expand_potential(&dd, &tq, &with_a0s)? != collapse {
        return Ok(false);
    }

    let mut rename = star_renaming(q, a0, &dd)?;
    rename.insert(lm.clone(), loop_name(&ip));
    for v in q.vertices() {
        if *v != im {
            rename.insert(dd.hat(&loop_name(v))?.id.clone(), loop_name(v));
        }
    }
    let qh = ContractionData::new(q, a0)?.quiver(q)?;
    let target = triple_qp(&qh)?;
    let merged = rest.rename(|s| PathSymbol { arrow: rename.get(&s.arrow).cloned().unwrap_or(s.arrow.clone()), inverse: s.inverse })?;
    merged.check(&target.quiver)?;
    Ok(merged == target.potential)
}

/// Outcome of eliminating `a0^*` from the preprojective relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdhmReport {
    /// The relation at `i_+` plus the `a0`-conjugate of the one at `i_-`.
    pub combined: NCPoly,
    /// All relations rewritten in the arrows of the contracted double quiver.
    pub rewritten: RelationSet,
    /// The preprojective relations of the contracted quiver.
    pub expected: RelationSet,
    pub agree: bool,
}

/// Forms `R_{i+} + a0^-1 R_{i-} a0`, cancels the `a0^* a0` terms, rewrites
/// every relation in hatted arrows and compares with the preprojective
/// relations of the contracted quiver.
pub fn adhm_elimination(q: &Quiver, a0: &str) -> Result<AdhmReport> {
    let d = double_quiver(q);
    let dd = ContractionData::new(&d, a0)?;
    let (ip, im) = (dd.i_plus.clone(), dd.i_minus.clone());
    let rel = preprojective_relations(q);
    let inv = NCPoly::path(Path::Word(vec![PathSymbol::inv(a0)]));
    let fwd = NCPoly::arrow(a0);
    let conj = inv.mul(&rel[&im], &d)?.mul(&fwd, &d)?;
    let combined = rel[&ip].add(&conj);
    let rename = star_renaming(q, a0, &dd)?;
    let mut rewritten = RelationSet::new();
    for v in q.vertices() {
        if *v == im {
            continue;
        }
        let src = if *v == ip { &combined } else { &rel[v] };
        rewritten.insert(v.clone(), rewrite_poly(&dd, &d, src, &rename)?);
    }
    let expected = preprojective_relations(&ContractionData::new(q, a0)?.quiver(q)?);
    let agree = rewritten == expected;
    Ok(AdhmReport { combined, rewritten, expected, agree })
}

pub fn adhm_elimination_check(q: &Quiver, a0: &str) -> Result<bool> {
    Ok(adhm_elimination(q, a0)?.agree)
}

/// The loops of the triple quiver, as a cut.
pub fn loop_cut(q: &Quiver) -> Vec<String> {
    q.vertices().iter().map(|v| loop_name(v)).collect()
}

/// Reassembles per-vertex components into one element.
pub fn total_relation(r: &RelationSet) -> NCPoly {
    r.values().fold(NCPoly::zero(), |acc, p| acc.add(p))
}

/// `sum_a [a, a^*]` as one element of the double quiver's path algebra.
pub fn commutator_sum(q: &Quiver) -> Result<NCPoly> {
    let d = double_quiver(q);
    let mut out = NCPoly::zero();
    for a in q.arrows() {
        let (x, y) = (NCPoly::arrow(&a.id), NCPoly::arrow(&star(&a.id)));
        out = out.add(&x.mul(&y, &d)?).sub(&y.mul(&x, &d)?);
    }
    Ok(out)
}

/// Display of a relation set, one vertex per line.
pub fn display_relations(r: &RelationSet) -> String {
    r.iter().map(|(v, p)| format!("{v}: {p}")).collect::<Vec<_>>().join("\n")
}

/// Vertex names of a relation set.
pub fn relation_vertices(r: &RelationSet) -> Vec<String> {
    r.keys().map(ToString::to_string).collect()
}
