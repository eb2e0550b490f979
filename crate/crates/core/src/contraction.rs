//! Edge contraction of quivers with potential and of representations, and
//! the Higgsing variant of the construction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Matrix};
use crate::path::{CyclicWord, PathSymbol, Potential};
use crate::quiver::{contraction_ends, Arrow, Quiver};

pub use crate::path::QuiverWithPotential;

/// Name of the composite `a a0` for an arrow leaving `i_-`.
pub fn after_name(a: &str, a0: &str) -> String {
    format!("{a}*{a0}")
}

/// Name of the composite `a0^-1 a` for an arrow entering `i_-`.
pub fn before_name(a: &str, a0: &str) -> String {
    format!("{a0}^-1*{a}")
}

/// Name of the conjugate `a0^-1 a a0` for a loop at `i_-`.
pub fn conj_name(a: &str, a0: &str) -> String {
    format!("{a0}^-1*{a}*{a0}")
}

/// How each arrow of `Q` other than `a0` is carried to the contracted quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionData {
    pub a0: String,
    pub i_plus: String,
    pub i_minus: String,
    /// Arrow id in `Q` to its hatted arrow in the contracted quiver.
    pub hats: BTreeMap<String, Arrow>,
}

impl ContractionData {
    pub fn new(q: &Quiver, a0: &str) -> Result<Self> {
        let (ip, im) = contraction_ends(q, a0)?;
        let mv = |v: &str| if v == im { ip.clone() } else { v.to_string() };
        let mut hats = BTreeMap::new();
        for a in q.arrows() {
            if a.id == a0 {
                continue;
            }
            let id = match (a.source == im, a.target == im) {
                (true, true) => conj_name(&a.id, a0),
                (true, false) => after_name(&a.id, a0),
                (false, true) => before_name(&a.id, a0),
                (false, false) => a.id.clone(),
            };
            hats.insert(a.id.clone(), Arrow::new(id, mv(&a.source), mv(&a.target)));
        }
        Ok(ContractionData { a0: a0.to_string(), i_plus: ip, i_minus: im, hats })
    }

    pub fn hat(&self, a: &str) -> Result<&Arrow> {
        self.hats.get(a).ok_or_else(|| Error::UnknownArrow(a.to_string()))
    }

    /// The word in `Q` (with `a0^-1`) that a hatted arrow stands for.
    pub fn expansion(&self, q: &Quiver, a: &str) -> Result<Vec<PathSymbol>> {
        let arrow = q.get_arrow(a)?;
        let mut w = Vec::new();
        if arrow.target == self.i_minus {
            w.push(PathSymbol::inv(self.a0.clone()));
        }
        w.push(PathSymbol::fwd(a));
        if arrow.source == self.i_minus {
            w.push(PathSymbol::fwd(self.a0.clone()));
        }
        Ok(w)
    }

    /// The contracted quiver: `i_-` removed, arrows replaced by their hats in
    /// the original order.
    pub fn quiver(&self, q: &Quiver) -> Result<Quiver> {
        let vertices = q.vertices().iter().filter(|v| **v != self.i_minus).cloned().collect();
        let arrows = q
            .arrows()
            .iter()
            .filter(|a| a.id != self.a0)
            .map(|a| self.hats[&a.id].clone())
            .collect();
        Quiver::new(vertices, arrows)
    }
}

/// Contracts `qp` along `a0: i_+ -> i_-`.
pub fn contract_qp(qp: &QuiverWithPotential, a0: &str) -> Result<QuiverWithPotential> {
    let q = &qp.quiver;
    let data = ContractionData::new(q, a0)?;
    let qh = data.quiver(q)?;
    let mut wh = Potential::zero();
    for (w, c) in qp.potential.terms() {
        let mut nw = Vec::with_capacity(w.len());
        for s in w.symbols() {
            if s.inverse {
                return Err(Error::Precondition(format!(
                    "potential term {w} contains an inverted arrow"
                )));
            }
            if s.arrow != a0 {
                nw.push(PathSymbol::fwd(data.hat(&s.arrow)?.id.clone()));
            }
        }
        wh.add_word(&qh, &nw, c.clone())?;
    }
    let out = QuiverWithPotential::new(qh, wh, None)?;
    if expand_potential(&data, q, &out.potential)? != qp.potential {
        return Err(Error::Internal("contracted potential does not expand back".into()));
    }
    Ok(out)
}

/// Rewrites a potential on the contracted quiver in the arrows of `Q` and
/// `a0^-1`, with cancellation.
pub fn expand_potential(data: &ContractionData, q: &Quiver, w: &Potential) -> Result<Potential> {
    let back: BTreeMap<&str, &str> =
        data.hats.iter().map(|(a, h)| (h.id.as_str(), a.as_str())).collect();
    let mut out = Potential::zero();
    for (cw, c) in w.terms() {
        let mut full = Vec::new();
        for s in cw.symbols() {
            let orig = back.get(s.arrow.as_str()).ok_or_else(|| Error::UnknownArrow(s.arrow.clone()))?;
            full.extend(data.expansion(q, orig)?);
        }
        out.add_cyclic(CyclicWord::new(q, &full)?, c.clone());
    }
    Ok(out)
}

/// A representation: a vector space per vertex and a matrix per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub field: FieldSpec,
    pub dims: BTreeMap<String, usize>,
    pub maps: BTreeMap<String, Matrix>,
}

impl Representation {
    pub fn validate(&self, q: &Quiver) -> Result<()> {
        self.field.check()?;
        for v in q.vertices() {
            if !self.dims.contains_key(v) {
                return Err(Error::DimensionVector(format!("no dimension at `{v}`")));
            }
        }
        for a in q.arrows() {
            let m = self.maps.get(&a.id).ok_or_else(|| Error::UnknownArrow(a.id.clone()))?;
            if m.rows != self.dims[&a.target] || m.cols != self.dims[&a.source] {
                return Err(Error::Precondition(format!(
                    "matrix for `{}` is {}x{}, expected {}x{}",
                    a.id, m.rows, m.cols, self.dims[&a.target], self.dims[&a.source]
                )));
            }
        }
        Ok(())
    }

    /// The linear map of a composable word; `inverses` supplies matrices for
    /// formally inverted arrows.
    pub fn evaluate(
        &self,
        q: &Quiver,
        w: &[PathSymbol],
        inverses: &BTreeMap<String, Matrix>,
    ) -> Result<Matrix> {
        let (s, _) = crate::path::word_ends(q, w)?;
        let mut acc = Matrix::identity(self.dims[&s]);
        for sym in w.iter().rev() {
            let m = if sym.inverse {
                inverses.get(&sym.arrow).ok_or_else(|| Error::NotInvertible(sym.arrow.clone()))?
            } else {
                self.maps.get(&sym.arrow).ok_or_else(|| Error::UnknownArrow(sym.arrow.clone()))?
            };
            acc = m.mul(&acc, self.field)?;
        }
        Ok(acc)
    }
}

/// The contracted representation: composites multiply matrices, loops at
/// `i_-` are conjugated by `M_{a0}`.
pub fn contract_rep(q: &Quiver, a0: &str, m: &Representation) -> Result<Representation> {
    m.validate(q)?;
    let data = ContractionData::new(q, a0)?;
    let ma0 = &m.maps[a0];
    let inv = ma0
        .inverse(m.field)?
        .ok_or_else(|| Error::HeartLocus(format!("the matrix of `{a0}` is not invertible")))?;
    let inverses: BTreeMap<String, Matrix> = [(a0.to_string(), inv)].into_iter().collect();
    let mut maps = BTreeMap::new();
    for a in q.arrows() {
        if a.id == a0 {
            continue;
        }
        let w = data.expansion(q, &a.id)?;
        maps.insert(data.hats[&a.id].id.clone(), m.evaluate(q, &w, &inverses)?);
    }
    let mut dims = m.dims.clone();
    dims.remove(&data.i_minus);
    Ok(Representation { field: m.field, dims, maps })
}

/// Outcome of Higgsing compared with plain contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiggsReport {
    pub contracted: QuiverWithPotential,
    pub higgsed: QuiverWithPotential,
    /// Whether the two potentials and quivers agree syntactically.
    pub agree: bool,
}

/// Gives `a0` a unit expectation value: every cubic term `a0 b c` becomes a
/// mass term for the pair `(b, c)`, which is integrated out by the
/// elimination recipe after contracting. With no such terms the result is the
/// plain contraction.
pub fn higgs(qp: &QuiverWithPotential, a0: &str) -> Result<HiggsReport> {
    let mut massive: Vec<Vec<String>> = Vec::new();
    for w in qp.potential.terms().keys() {
        if !w.contains_arrow(a0) {
            continue;
        }
        match w.len() {
            1 | 2 => {
                return Err(Error::UnsupportedReduction(format!(
                    "`{a0}` appears in the low-order term {w}"
                )))
            }
            3 => massive.push(
                w.symbols().iter().filter(|s| s.arrow != a0).map(|s| s.arrow.clone()).collect(),
            ),
            _ => {}
        }
    }
    let contracted = contract_qp(qp, a0)?;
    let data = ContractionData::new(&qp.quiver, a0)?;
    let mut cur = contracted.clone();
    for pair in massive {
        let hatted: Vec<PathSymbol> = pair
            .iter()
            .map(|a| Ok(PathSymbol::fwd(data.hat(a)?.id.clone())))
            .collect::<Result<_>>()?;
        let cw = CyclicWord::from_closed(hatted)?;
        if cur.potential.terms().contains_key(&cw) {
            cur = crate::path::eliminate_pair(&cur, &cw)?;
        }
    }
    let agree = cur == contracted;
    Ok(HiggsReport { contracted, higgsed: cur, agree })
}

/// The data of the worked example with eight arrows on four vertices.
pub fn example_qp() -> QuiverWithPotential {
    let q = Quiver::build(
        &["i+", "i-", "1", "2"],
        &[
            ("a0", "i+", "i-"),
            ("a1", "i-", "i+"),
            ("a2", "i+", "i-"),
            ("l1", "i-", "i-"),
            ("l2", "i-", "i-"),
            ("b", "i-", "1"),
            ("c", "1", "2"),
            ("d", "2", "i-"),
        ],
    );
    let w = Potential::from_words(
        &q,
        &[(1, &["a1", "l1", "l1", "l2", "l2", "l2", "a0"]), (1, &["l1", "d", "c", "b"])],
    )
    .expect("closed words");
    QuiverWithPotential::new(q, w, None).expect("valid")
}

/// Single-symbol helper.
pub fn sym(a: &str) -> PathSymbol {
    PathSymbol::fwd(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{contract_vectors, euler_form};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let qp = example_qp();
        let out = contract_qp(&qp, "a0").unwrap();
        assert_eq!(out.quiver.vertices(), ["i+", "1", "2"]);
        let mut ids: Vec<(String, String, String)> = out
            .quiver
            .arrows()
            .iter()
            .map(|a| (a.id.clone(), a.source.clone(), a.target.clone()))
            .collect();
        ids.sort();
        let mut expect: Vec<(String, String, String)> = [
            ("a0^-1*a2", "i+", "i+"),
            ("a1*a0", "i+", "i+"),
            ("a0^-1*l1*a0", "i+", "i+"),
            ("a0^-1*l2*a0", "i+", "i+"),
            ("b*a0", "i+", "1"),
            ("c", "1", "2"),
            ("a0^-1*d", "2", "i+"),
        ]
        .iter()
        .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()))
        .collect();
        expect.sort();
        assert_eq!(ids, expect);
        let l1 = "a0^-1*l1*a0";
        let l2 = "a0^-1*l2*a0";
        let w = Potential::from_words(
            &out.quiver,
            &[(1, &["a1*a0", l1, l1, l2, l2, l2]), (1, &[l1, "a0^-1*d", "c", "b*a0"])],
        )
        .unwrap();
        assert_eq!(out.potential, w);
    }

    #[test]
    fn small_cases() {
        let q = Quiver::build(&["p", "m"], &[("a0", "p", "m")]);
        let out = contract_qp(&QuiverWithPotential::without_potential(q), "a0").unwrap();
        assert_eq!(out.quiver.vertices().len(), 1);
        assert!(out.quiver.arrows().is_empty() && out.potential.is_zero());
        let k = Quiver::build(&["p", "m"], &[("a0", "p", "m"), ("a2", "p", "m")]);
        let out = contract_qp(&QuiverWithPotential::without_potential(k), "a0").unwrap();
        assert_eq!(out.quiver.arrows(), [Arrow::new("a0^-1*a2", "p", "p")]);
        let l = Quiver::build(&["p"], &[("l", "p", "p")]);
        assert!(matches!(
            contract_qp(&QuiverWithPotential::without_potential(l), "l"),
            Err(Error::LoopContraction(_))
        ));
        let q = Quiver::build(&["p", "m"], &[("a0", "p", "m")]);
        assert!(matches!(
            contract_qp(&QuiverWithPotential::without_potential(q), "zz"),
            Err(Error::UnknownArrow(_))
        ));
    }

    fn rep(field: FieldSpec, dims: &[(&str, usize)], maps: &[(&str, Matrix)]) -> Representation {
        Representation {
            field,
            dims: dims.iter().map(|(v, d)| (v.to_string(), *d)).collect(),
            maps: maps.iter().map(|(a, m)| (a.to_string(), m.clone())).collect(),
        }
    }

    #[test]
    fn representation_examples() {
        let q = Quiver::build(&["p", "m", "1"], &[("a0", "p", "m"), ("b", "m", "1"), ("l", "m", "m")]);
        let m = rep(
            FieldSpec::Rationals,
            &[("p", 1), ("m", 1), ("1", 1)],
            &[
                ("a0", Matrix::from_ints(1, 1, &[1])),
                ("b", Matrix::from_ints(1, 1, &[3])),
                ("l", Matrix::from_ints(1, 1, &[5])),
            ],
        );
        let h = contract_rep(&q, "a0", &m).unwrap();
        assert_eq!(h.maps["b*a0"], Matrix::from_ints(1, 1, &[3]));
        assert_eq!(h.maps["a0^-1*l*a0"], Matrix::from_ints(1, 1, &[5]));

        let k = Quiver::build(&["p", "m"], &[("a0", "p", "m"), ("a2", "p", "m")]);
        let x = Matrix::from_ints(2, 2, &[1, 2, 3, 4]);
        let m = rep(
            FieldSpec::Rationals,
            &[("p", 2), ("m", 2)],
            &[("a0", Matrix::identity(2)), ("a2", x.clone())],
        );
        assert_eq!(contract_rep(&k, "a0", &m).unwrap().maps["a0^-1*a2"], x);

        let m = rep(
            FieldSpec::Rationals,
            &[("p", 1), ("m", 1)],
            &[("a0", Matrix::from_ints(1, 1, &[0])), ("a2", Matrix::from_ints(1, 1, &[1]))],
        );
        assert!(matches!(contract_rep(&k, "a0", &m), Err(Error::HeartLocus(_))));
    }

    #[test]
    fn higgs_matches_contraction_without_cubic_terms() {
        let qp = example_qp();
        let r = higgs(&qp, "a0").unwrap();
        assert!(r.agree);
        let q = Quiver::build(&["p", "m"], &[("a0", "p", "m")]);
        assert!(higgs(&QuiverWithPotential::without_potential(q), "a0").unwrap().agree);
    }

    #[test]
    fn higgs_integrates_out_cubic_partners() {
        // a0: p -> m, b: m -> k, c: k -> p, plus a longer cycle through b, c.
        let q = Quiver::build(
            &["p", "m", "k"],
            &[("a0", "p", "m"), ("b", "m", "k"), ("c", "k", "p"), ("e", "k", "m"), ("f", "m", "k")],
        );
        let w = Potential::from_words(&q, &[(1, &["c", "b", "a0"]), (1, &["b", "e", "f", "e"])]).unwrap();
        let qp = QuiverWithPotential::new(q, w, None).unwrap();
        let r = higgs(&qp, "a0").unwrap();
        assert!(!r.higgsed.quiver.arrows().iter().any(|a| a.id == "b*a0" || a.id == "c"));
        assert!(r.higgsed.potential.quadratic_terms().is_empty());
        assert!(!r.agree);
        let bad = Quiver::build(&["p", "m"], &[("a0", "p", "m"), ("x", "m", "p")]);
        let w = Potential::from_words(&bad, &[(1, &["x", "a0"])]).unwrap();
        let qp = QuiverWithPotential::new(bad, w, None).unwrap();
        assert!(matches!(higgs(&qp, "a0"), Err(Error::UnsupportedReduction(_))));
    }

    #[test]
    fn expansion_recovers_potential() {
        let qp = example_qp();
        let out = contract_qp(&qp, "a0").unwrap();
        let data = ContractionData::new(&qp.quiver, "a0").unwrap();
        assert_eq!(expand_potential(&data, &qp.quiver, &out.potential).unwrap(), qp.potential);
    }

    fn arb_contractible() -> impl Strategy<Value = Quiver> {
        (0usize..3, proptest::collection::vec((0usize..5, 0usize..5), 0..6)).prop_map(|(extra, es)| {
            let mut vs = vec!["p".to_string(), "m".to_string()];
            for i in 0..extra {
                vs.push(format!("v{i}"));
            }
            let n = vs.len();
            let mut arrows = vec![Arrow::new("a0", "p", "m")];
            for (k, (s, t)) in es.into_iter().enumerate() {
                arrows.push(Arrow::new(format!("e{k}"), vs[s % n].clone(), vs[t % n].clone()));
            }
            Quiver::new(vs, arrows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn counts_drop_by_one(q in arb_contractible()) {
            let out = contract_qp(&QuiverWithPotential::without_potential(q.clone()), "a0").unwrap();
            prop_assert_eq!(out.quiver.vertices().len() + 1, q.vertices().len());
            prop_assert_eq!(out.quiver.arrows().len() + 1, q.arrows().len());
        }

        #[test]
        fn euler_form_is_preserved(q in arb_contractible(), xs in proptest::collection::vec(0u32..4, 10)) {
            let n = q.vertices().len();
            let mut g1 = q.dim(&xs[0..n]);
            let mut g2 = q.dim(&xs[5..5 + n]);
            g1.insert("m".into(), g1["p"]);
            g2.insert("m".into(), g2["p"]);
            let zero = q.zero_dim();
            let (h1, _) = contract_vectors(&q, "a0", &g1, &zero).unwrap();
            let (h2, _) = contract_vectors(&q, "a0", &g2, &zero).unwrap();
            let qh = contract_qp(&QuiverWithPotential::without_potential(q.clone()), "a0").unwrap().quiver;
            prop_assert_eq!(euler_form(&qh, &h1, &h2).unwrap(), euler_form(&q, &g1, &g2).unwrap());
        }
    }
}
