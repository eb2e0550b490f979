//! Premutation and mutation of quivers with potential at a vertex, and the
//! comparison between mutating around a contracted arrow and mutating the
//! contraction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::contraction::{after_name, before_name, contract_qp};
use crate::error::{Error, Result};
use crate::path::{reduce_trivial, CyclicWord, PathSymbol, Potential, QuiverWithPotential};
use crate::quiver::{star, Arrow, Quiver};
use crate::Rational;

/// Name of the composite arrow `[ba]` (with `a` acting first).
pub fn bracket(b: &str, a: &str) -> String {
    format!("[{b}*{a}]")
}

/// Result of a mutation together with its intermediate steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationReport {
    pub input: QuiverWithPotential,
    pub vertex: String,
    pub premutated: QuiverWithPotential,
    pub reduced: QuiverWithPotential,
    /// Original arrow id to its name after mutation, for surviving arrows.
    pub naming: BTreeMap<String, String>,
}

fn check_mutable(q: &Quiver, i: &str) -> Result<()> {
    q.check_vertex(i)?;
    if q.arrows().iter().any(|a| a.source == i && a.target == i) {
        return Err(Error::MutationAssumption(format!("loop at `{i}`")));
    }
    for a in q.arrows_into(i) {
        if q.arrows_out_of(i).any(|b| b.target == a.source) {
            return Err(Error::MutationAssumption(format!(
                "two-cycle through `{i}` and `{}`",
                a.source
            )));
        }
    }
    Ok(())
}

/// Reverses the arrows at `i`, adds a composite `[ba]` for each path `b a`
/// through `i`, and sets the potential to `[W] + sum [ba] a^* b^*`.
pub fn premutate(qp: &QuiverWithPotential, i: &str) -> Result<QuiverWithPotential> {
    let q = &qp.quiver;
    check_mutable(q, i)?;
    let ins: Vec<&Arrow> = q.arrows_into(i).collect();
    let outs: Vec<&Arrow> = q.arrows_out_of(i).collect();
    let mut arrows = Vec::new();
    for a in q.arrows() {
        if a.target == i {
            arrows.push(Arrow::new(star(&a.id), i, a.source.clone()));
        } else if a.source == i {
            arrows.push(Arrow::new(star(&a.id), a.target.clone(), i));
        } else {
            arrows.push(a.clone());
        }
    }
    for b in &outs {
        for a in &ins {
            arrows.push(Arrow::new(bracket(&b.id, &a.id), a.source.clone(), b.target.clone()));
        }
    }
    let nq = Quiver::new(q.vertices().to_vec(), arrows)?;

    let mut w = Potential::zero();
    for (cw, c) in qp.potential.terms() {
        let s = cw.symbols();
        if s.iter().any(|x| x.inverse) {
            return Err(Error::MutationAssumption(format!("term {cw} has an inverted arrow")));
        }
        let into_i = |x: &PathSymbol| q.arrow(&x.arrow).is_some_and(|a| a.target == i);
        let out_of_i = |x: &PathSymbol| q.arrow(&x.arrow).is_some_and(|a| a.source == i);
        let start = (0..s.len()).find(|&k| !into_i(&s[k])).unwrap_or(0);
        let rot: Vec<&PathSymbol> = s[start..].iter().chain(s[..start].iter()).collect();
        let mut nw = Vec::new();
        let mut k = 0;
        while k < rot.len() {
            if out_of_i(rot[k]) {
                let a = rot.get(k + 1).ok_or_else(|| Error::Internal("unpaired arrow".into()))?;
                nw.push(PathSymbol::fwd(bracket(&rot[k].arrow, &a.arrow)));
                k += 2;
            } else {
                nw.push(rot[k].clone());
                k += 1;
            }
        }
        w.add_word(&nq, &nw, c.clone())?;
    }
    for b in &outs {
        for a in &ins {
            let nw = vec![
                PathSymbol::fwd(bracket(&b.id, &a.id)),
                PathSymbol::fwd(star(&a.id)),
                PathSymbol::fwd(star(&b.id)),
            ];
            w.add_word(&nq, &nw, Rational::one())?;
        }
    }
    let invertible = qp
        .invertible
        .clone()
        .filter(|a| q.arrow(a).is_some_and(|x| x.source != i && x.target != i));
    QuiverWithPotential::new(nq, w, invertible)
}

/// Premutation followed by removal of the trivial part.
pub fn mutate(qp: &QuiverWithPotential, i: &str) -> Result<MutationReport> {
    let premutated = premutate(qp, i)?;
    let reduced = reduce_trivial(&premutated)?;
    let mut naming = BTreeMap::new();
    for a in qp.quiver.arrows() {
        let new = if a.source == i || a.target == i { star(&a.id) } else { a.id.clone() };
        if reduced.quiver.arrow(&new).is_some() {
            naming.insert(a.id.clone(), new);
        }
    }
    Ok(MutationReport { input: qp.clone(), vertex: i.to_string(), premutated, reduced, naming })
}

/// Which side of the contracted arrow is free of other arrows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationCase {
    /// `i_+` is the source of no arrow except `a0`; uses `mu_+ mu_- mu_+`.
    PlusSourcesOnlyA0,
    /// `i_-` is the target of no arrow except `a0`; uses `mu_- mu_+ mu_-`.
    MinusTargetsOnlyA0,
}

/// Comparison of the two routes around the square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub case: MutationCase,
    /// Triple mutation, then contraction, then the documented renaming.
    pub mutated_then_contracted: QuiverWithPotential,
    /// Contraction, then mutation at the merged vertex.
    pub contracted_then_mutated: QuiverWithPotential,
    /// Renaming used: arrow id to `(image id, sign)`.
    pub correspondence: BTreeMap<String, (String, i64)>,
    pub equal: bool,
    /// Difference of the two potentials (first minus second).
    pub difference: Potential,
    /// Arrows present on only one side.
    pub arrow_mismatch: Vec<String>,
}

/// Checks the mutation assumptions around `a0` and returns the case.
pub fn compatibility_case(q: &Quiver, a0: &str) -> Result<MutationCase> {
    let (ip, im) = crate::quiver::contraction_ends(q, a0)?;
    if let Some(l) = q.arrows().iter().find(|a| a.is_loop()) {
        return Err(Error::MutationAssumption(format!("loop `{}`", l.id)));
    }
    if let Some(x) = q.arrows().iter().find(|a| {
        a.id != a0 && ((a.source == ip && a.target == im) || (a.source == im && a.target == ip))
    }) {
        return Err(Error::MutationAssumption(format!(
            "`{}` is a second arrow between the endpoints of `{a0}`",
            x.id
        )));
    }
    check_mutable(q, &ip)?;
    check_mutable(q, &im)?;
    let qh = contract_qp(&QuiverWithPotential::without_potential(q.clone()), a0)?.quiver;
    check_mutable(&qh, &ip).map_err(|_| {
        Error::MutationAssumption(format!("a cycle of length three passes through `{ip}` or `{im}`"))
    })?;
    if q.arrows_out_of(&ip).all(|a| a.id == a0) {
        Ok(MutationCase::PlusSourcesOnlyA0)
    } else if q.arrows_into(&im).all(|a| a.id == a0) {
        Ok(MutationCase::MinusTargetsOnlyA0)
    } else {
        Err(Error::MutationAssumption(format!(
            "`{ip}` sources another arrow and `{im}` is the target of another arrow"
        )))
    }
}

/// Compares contraction after the triple mutation around `a0` with mutation
/// at the merged vertex after contraction.
///
/// The renaming matches arrows by the role they play. One family of arrows
/// (the reversed composites through `a0`) is matched with a sign `-1`: the
/// syntactic elimination step produces that term with the opposite sign, and
/// rescaling an arrow by `-1` is an automorphism of the path algebra.
pub fn mutation_compatibility_check(
    qp: &QuiverWithPotential,
    a0: &str,
) -> Result<CompatibilityReport> {
    let q = &qp.quiver;
    let case = compatibility_case(q, a0)?;
    let (ip, im) = crate::quiver::contraction_ends(q, a0)?;
    let order: [&str; 3] = match case {
        MutationCase::PlusSourcesOnlyA0 => [&ip, &im, &ip],
        MutationCase::MinusTargetsOnlyA0 => [&im, &ip, &im],
    };
    let mut cur = qp.clone();
    for v in order {
        cur = mutate(&cur, v)?.reduced;
    }
    let big_a0 = star(&star(&star(a0)));
    let contracted = contract_qp(&cur, &big_a0)?;
    // The surviving vertex is i_-; it plays the role of the merged vertex.
    let lhs_quiver = contracted.quiver.rename_vertices(|v| {
        if v == im { ip.clone() } else { v.to_string() }
    })?;

    let mut corr: BTreeMap<String, (String, i64)> = BTreeMap::new();
    match case {
        MutationCase::PlusSourcesOnlyA0 => {
            let ins_p: Vec<&Arrow> = q.arrows_into(&ip).collect();
            let ins_m: Vec<&Arrow> = q.arrows_into(&im).filter(|b| b.id != a0).collect();
            let outs_m: Vec<&Arrow> = q.arrows_out_of(&im).collect();
            for a in &ins_p {
                corr.insert(star(&bracket(a0, &a.id)), (star(&a.id), 1));
            }
            for b in &ins_m {
                corr.insert(
                    after_name(&star(&bracket(&star(a0), &b.id)), &big_a0),
                    (star(&before_name(&b.id, a0)), -1),
                );
            }
            for c in &outs_m {
                let ch = after_name(&c.id, a0);
                corr.insert(star(&c.id), (star(&ch), 1));
                for a in &ins_p {
                    corr.insert(bracket(&c.id, &bracket(a0, &a.id)), (bracket(&ch, &a.id), 1));
                }
                for b in &ins_m {
                    corr.insert(bracket(&c.id, &b.id), (bracket(&ch, &before_name(&b.id, a0)), 1));
                }
            }
        }
        MutationCase::MinusTargetsOnlyA0 => {
            let ins_p: Vec<&Arrow> = q.arrows_into(&ip).collect();
            let outs_p: Vec<&Arrow> = q.arrows_out_of(&ip).filter(|d| d.id != a0).collect();
            let outs_m: Vec<&Arrow> = q.arrows_out_of(&im).collect();
            for a in &ins_p {
                corr.insert(after_name(&star(&a.id), &big_a0), (star(&a.id), 1));
            }
            for d in &outs_p {
                corr.insert(star(&bracket(&d.id, &star(a0))), (star(&d.id), -1));
                for a in &ins_p {
                    corr.insert(bracket(&d.id, &a.id), (bracket(&d.id, &a.id), 1));
                }
            }
            for c in &outs_m {
                let ch = after_name(&c.id, a0);
                corr.insert(
                    before_name(&star(&bracket(&c.id, a0)), &big_a0),
                    (star(&ch), 1),
                );
                for a in &ins_p {
                    corr.insert(bracket(&bracket(&c.id, a0), &a.id), (bracket(&ch, &a.id), 1));
                }
            }
        }
    }

    let rename = |id: &str| corr.get(id).map_or_else(|| id.to_string(), |(n, _)| n.clone());
    let arrows: Vec<Arrow> = lhs_quiver
        .arrows()
        .iter()
        .map(|a| Arrow::new(rename(&a.id), a.source.clone(), a.target.clone()))
        .collect();
    let lhs_quiver = Quiver::new(lhs_quiver.vertices().to_vec(), arrows)?;
    let mut lhs_w = Potential::zero();
    for (cw, c) in contracted.potential.terms() {
        let mut sign = 1i64;
        let mut nw = Vec::with_capacity(cw.len());
        for s in cw.symbols() {
            if let Some((_, sg)) = corr.get(&s.arrow) {
                sign *= sg;
            }
            nw.push(PathSymbol { arrow: rename(&s.arrow), inverse: s.inverse });
        }
        lhs_w.add_cyclic(CyclicWord::from_closed(nw)?, c * crate::rational::int(sign));
    }
    let lhs = QuiverWithPotential::new(lhs_quiver, lhs_w, None)?;

    let contracted_first = contract_qp(qp, a0)?;
    let rhs = mutate(&contracted_first, &ip)?.reduced;

    let difference = lhs.potential.add(&rhs.potential.scale(&-Rational::one()));
    let mut left: Vec<Arrow> = lhs.quiver.arrows().to_vec();
    let mut right: Vec<Arrow> = rhs.quiver.arrows().to_vec();
    left.sort();
    right.sort();
    let mut arrow_mismatch: Vec<String> = left
        .iter()
        .filter(|a| !right.contains(a))
        .map(|a| format!("only after triple mutation: {}: {} -> {}", a.id, a.source, a.target))
        .collect();
    arrow_mismatch.extend(
        right
            .iter()
            .filter(|a| !left.contains(a))
            .map(|a| format!("only after contraction: {}: {} -> {}", a.id, a.source, a.target)),
    );
    let mut lv = lhs.quiver.vertices().to_vec();
    let mut rv = rhs.quiver.vertices().to_vec();
    lv.sort();
    rv.sort();
    if lv != rv {
        arrow_mismatch.push(format!("vertex sets differ: {lv:?} vs {rv:?}"));
    }
    let equal = difference.is_zero() && arrow_mismatch.is_empty();
    Ok(CompatibilityReport {
        case,
        mutated_then_contracted: lhs,
        contracted_then_mutated: rhs,
        correspondence: corr,
        equal,
        difference,
        arrow_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn qp(q: Quiver, terms: &[(i64, &[&str])]) -> QuiverWithPotential {
        let w = Potential::from_words(&q, terms).unwrap();
        QuiverWithPotential::new(q, w, None).unwrap()
    }

    #[test]
    fn premutation_example() {
        let q = Quiver::build(&["j", "p", "m"], &[("a", "j", "p"), ("a0", "p", "m")]);
        let p = premutate(&QuiverWithPotential::without_potential(q), "p").unwrap();
        let ids: Vec<(&str, &str, &str)> = p
            .quiver
            .arrows()
            .iter()
            .map(|a| (a.id.as_str(), a.source.as_str(), a.target.as_str()))
            .collect();
        assert_eq!(ids, [("a^*", "p", "j"), ("a0^*", "m", "p"), ("[a0*a]", "j", "m")]);
        let w = Potential::from_words(&p.quiver, &[(1, &["[a0*a]", "a^*", "a0^*"])]).unwrap();
        assert_eq!(p.potential, w);
    }

    #[test]
    fn trivial_premutations() {
        let q = Quiver::build(&["v", "p", "m"], &[("a0", "p", "m")]);
        let qp0 = QuiverWithPotential::without_potential(q);
        assert_eq!(premutate(&qp0, "v").unwrap(), qp0);
        let p = premutate(&qp0, "p").unwrap();
        assert_eq!(p.quiver.arrows(), [Arrow::new("a0^*", "m", "p")]);
        assert!(p.potential.is_zero());
        let r = mutate(&qp0, "p").unwrap();
        assert_eq!(r.reduced, r.premutated);
        let twice = mutate(&r.reduced, "p").unwrap();
        let back = twice.reduced.quiver.arrows();
        assert_eq!(back, [Arrow::new("a0^*^*", "p", "m")]);
        assert_eq!(r.naming["a0"], "a0^*");
    }

    #[test]
    fn assumption_violations() {
        let l = Quiver::build(&["v"], &[("l", "v", "v")]);
        assert!(matches!(
            premutate(&QuiverWithPotential::without_potential(l), "v"),
            Err(Error::MutationAssumption(_))
        ));
        let two = Quiver::build(&["v", "w"], &[("x", "v", "w"), ("y", "w", "v")]);
        assert!(matches!(
            premutate(&QuiverWithPotential::without_potential(two), "v"),
            Err(Error::MutationAssumption(_))
        ));
    }

    #[test]
    fn first_two_steps_delete_the_expected_pair() {
        let q = Quiver::build(
            &["j", "p", "m", "k"],
            &[("a", "j", "p"), ("a0", "p", "m"), ("b", "k", "m")],
        );
        let qp0 = QuiverWithPotential::without_potential(q);
        let s1 = mutate(&qp0, "p").unwrap().reduced;
        let s2 = mutate(&s1, "m").unwrap();
        assert!(s2.premutated.quiver.arrow("a^*").is_some());
        assert!(s2.premutated.quiver.arrow("[a0^**[a0*a]]").is_some());
        assert!(s2.reduced.quiver.arrow("a^*").is_none());
        assert!(s2.reduced.quiver.arrow("[a0^**[a0*a]]").is_none());
    }

    #[test]
    fn square_commutes_on_small_examples() {
        let q = Quiver::build(
            &["j", "p", "m", "k"],
            &[("a", "j", "p"), ("a0", "p", "m"), ("b", "k", "m")],
        );
        let r = mutation_compatibility_check(&QuiverWithPotential::without_potential(q), "a0").unwrap();
        assert_eq!(r.case, MutationCase::PlusSourcesOnlyA0);
        assert!(r.equal, "{r:?}");

        // case A with a potential through both endpoints
        let q = Quiver::build(
            &["j", "p", "m", "k", "n"],
            &[
                ("a", "j", "p"),
                ("a0", "p", "m"),
                ("b", "k", "m"),
                ("c", "m", "n"),
                ("y", "n", "k"),
                ("z", "n", "j"),
                ("u", "k", "j"),
            ],
        );
        let x = qp(q, &[(1, &["c", "a0", "a", "u", "y"]), (1, &["c", "b", "y"])]);
        let r = mutation_compatibility_check(&x, "a0").unwrap();
        assert!(r.equal, "{r:#?}");

        // case B
        let q = Quiver::build(
            &["j", "p", "m", "k", "n"],
            &[("a", "j", "p"), ("a0", "p", "m"), ("c", "m", "k"), ("d", "p", "n"), ("y", "k", "j")],
        );
        let r = mutation_compatibility_check(&qp(q, &[(1, &["y", "c", "a0", "a"])]), "a0").unwrap();
        assert_eq!(r.case, MutationCase::MinusTargetsOnlyA0);
        assert!(r.equal, "{r:?}");
        let _ = int(0);
    }

    #[test]
    fn square_preconditions() {
        let q = Quiver::build(
            &["j", "p", "m", "k"],
            &[("a0", "p", "m"), ("x", "p", "k"), ("b", "j", "m")],
        );
        assert!(matches!(
            mutation_compatibility_check(&QuiverWithPotential::without_potential(q), "a0"),
            Err(Error::MutationAssumption(_))
        ));
        let tri = Quiver::build(
            &["j", "p", "m"],
            &[("a0", "p", "m"), ("c", "m", "j"), ("a", "j", "p")],
        );
        assert!(matches!(
            mutation_compatibility_check(&QuiverWithPotential::without_potential(tri), "a0"),
            Err(Error::MutationAssumption(_))
        ));
    }
}
