//! Verification suites run by `verify SUITE`: each prints one line per check.

use std::fmt;

use num_traits::{Signed, Zero};
use qpedge_core::contraction::{contract_qp, ContractionData};
use qpedge_core::hopf::{
    contraction_ratio_check, coproduct_small, double_cross_check, Series, SeriesWord, Slot, TensorElement,
};
use qpedge_core::mutation::{mutation_compatibility_check, MutationCase};
use qpedge_core::poly::{Poly, RationalFn};
use qpedge_core::preprojective::{adhm_elimination_check, contract_triple_check};
use qpedge_core::quiver::{contract_vectors, euler_form, DimVector, Quiver};
use qpedge_core::rational::int;
use qpedge_core::scattering::{
    eta_check, king_semistable_exists, wall_support_scan, Cone, GComplex, Kappa, LPoly, QuantumTorus, Wall,
};
use qpedge_core::shuffle::{contract_shuffle, ShuffleAlgebra, SymPoly};
use qpedge_core::{Error, Rational};
use rand::Rng;

use crate::format::{parse_qp, print_qp, QPDocument};
use crate::gen;

/// The worked example with eight arrows on four vertices.
pub const EXAMPLE31_QP: &str = include_str!("../data/example31.qp");

pub const SUITES: &[&str] = &["example31", "homomorphism", "mutation366", "adhm", "hopf", "eta", "fermion"];

/// Knobs shared by the suites.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Scales the number of random cases; 1 gives the documented minimums.
    pub scale: usize,
    pub truncation: u32,
    pub primes: Vec<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, scale: 1, truncation: 3, primes: vec![2, 3] }
    }
}

/// One check of a suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{verdict} {}", self.label)
        } else {
            write!(f, "{verdict} {}: {}", self.label, self.detail)
        }
    }
}

fn check(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { label: label.into(), pass, detail: detail.into() }
}

/// Runs a suite by name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    match name {
        "example31" => example31(),
        "homomorphism" => homomorphism(cfg),
        "mutation366" => mutation_square(cfg),
        "adhm" => adhm(cfg),
        "hopf" => hopf(cfg),
        "eta" => eta(cfg),
        "fermion" => fermion(cfg),
        _ => Err(Error::Scope(format!("unknown suite `{name}`; expected one of {}", SUITES.join(", ")))),
    }
}

/// The worked example as data: parsed from the bundled file.
pub fn example31_document() -> QPDocument {
    parse_qp(EXAMPLE31_QP).expect("bundled example parses")
}

/// The contracted worked example, written out from its published form.
pub const EXAMPLE31_CONTRACTED_QP: &str = "\
quiver example31/a0
vertices: i+, 1, 2
arrows: a1*a0: i+ -> i+; a0^-1*a2: i+ -> i+; a0^-1*l1*a0: i+ -> i+; a0^-1*l2*a0: i+ -> i+; b*a0: i+ -> 1; c: 1 -> 2; a0^-1*d: 2 -> i+
potential: 1 * a1*a0.a0^-1*l1*a0.a0^-1*l1*a0.a0^-1*l2*a0.a0^-1*l2*a0.a0^-1*l2*a0 + 1 * a0^-1*l1*a0.a0^-1*d.c.b*a0
";

/// Contracts a document along `a0`, naming the result `NAME/a0`.
pub fn contract_document(doc: &QPDocument, a0: &str) -> Result<QPDocument, Error> {
    let qp = contract_qp(&doc.qp, a0)?;
    Ok(QPDocument::new(format!("{}/{a0}", doc.name), qp))
}

fn example31() -> Result<Vec<Check>, Error> {
    let doc = example31_document();
    let out = contract_document(&doc, "a0")?;
    let expected = parse_qp(EXAMPLE31_CONTRACTED_QP).expect("expected document parses");
    let q = &out.qp.quiver;
    let mut arrows: Vec<_> = q.arrows().to_vec();
    let mut want: Vec<_> = expected.qp.quiver.arrows().to_vec();
    arrows.sort_by(|a, b| a.id.cmp(&b.id));
    want.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(vec![
        check(
            "vertex count 4 -> 3",
            doc.qp.quiver.vertices().len() == 4 && q.vertices().len() == 3,
            format!("{} -> {}", doc.qp.quiver.vertices().len(), q.vertices().len()),
        ),
        check(
            "arrow count 8 -> 7",
            doc.qp.quiver.arrows().len() == 8 && q.arrows().len() == 7,
            format!("{} -> {}", doc.qp.quiver.arrows().len(), q.arrows().len()),
        ),
        check("contracted arrows", arrows == want, ""),
        check("contracted potential", out.qp.potential == expected.qp.potential, out.qp.potential.to_string()),
        check("canonical text", print_qp(&out) == print_qp(&expected), ""),
    ])
}

fn homomorphism(cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    Ok(vec![multiplicativity(cfg)?, euler_preservation(cfg)?])
}

/// The contraction map against the shuffle product on random equal-sector pairs.
pub fn multiplicativity(cfg: &SuiteConfig) -> Result<Check, Error> {
    let mut rng = gen::rng(cfg.seed);
    let cases = 100 * cfg.scale;
    let mut failures = 0;
    let mut first = String::new();
    for _ in 0..cases {
        let q = gen::contractible_quiver(&mut rng, 4, 6, true);
        let qh = ContractionData::new(&q, "a0")?.quiver(&q)?;
        let (alg, hat) = (ShuffleAlgebra::new(&q), ShuffleAlgebra::new(&qh));
        let (g1, g2) = small_pair(&mut rng, &q);
        let f = gen::symmetric(&mut rng, &alg, &g1, 3);
        let g = gen::symmetric(&mut rng, &alg, &g2, 3);
        let lhs = contract_shuffle(&alg, &hat, "a0", &alg.mul(&f, &g)?)?;
        let rhs = hat.mul(&contract_shuffle(&alg, &hat, "a0", &f)?, &contract_shuffle(&alg, &hat, "a0", &g)?)?;
        if lhs != rhs {
            failures += 1;
            if first.is_empty() {
                first = format!("first failure on {:?}", q.arrows());
            }
        }
    }
    Ok(check(
        format!("contraction is multiplicative on {cases} random equal-sector products"),
        failures == 0,
        if failures == 0 { String::new() } else { format!("{failures} failures; {first}") },
    ))
}

/// The Euler form before and after contraction on random equal-sector pairs.
pub fn euler_preservation(cfg: &SuiteConfig) -> Result<Check, Error> {
    let mut rng = gen::rng(cfg.seed);
    let euler_cases = 200 * cfg.scale;
    let mut euler_failures = 0;
    for _ in 0..euler_cases {
        let q = gen::contractible_quiver(&mut rng, 4, 6, true);
        let qh = ContractionData::new(&q, "a0")?.quiver(&q)?;
        let g1 = gen::equal_sector_gamma(&mut rng, &q, 3);
        let g2 = gen::equal_sector_gamma(&mut rng, &q, 3);
        let zero = q.zero_dim();
        let (h1, _) = contract_vectors(&q, "a0", &g1, &zero)?;
        let (h2, _) = contract_vectors(&q, "a0", &g2, &zero)?;
        if euler_form(&q, &g1, &g2)? != euler_form(&qh, &h1, &h2)? {
            euler_failures += 1;
        }
    }
    Ok(check(
        format!("Euler form preserved on {euler_cases} random equal-sector pairs"),
        euler_failures == 0,
        if euler_failures == 0 { String::new() } else { format!("{euler_failures} failures") },
    ))
}

/// Two equal-sector vectors whose sum has total dimension at most 6, which
/// keeps the shuffle sums small enough to expand.
fn small_pair(rng: &mut gen::SuiteRng, q: &Quiver) -> (DimVector, DimVector) {
    loop {
        let g1 = gen::equal_sector_gamma(rng, q, 2);
        let g2 = gen::equal_sector_gamma(rng, q, 2);
        if g1.values().sum::<u32>() + g2.values().sum::<u32>() <= 6 {
            return (g1, g2);
        }
    }
}

fn mutation_square(cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    let mut rng = gen::rng(cfg.seed);
    let want = 5 * cfg.scale;
    let mut out = Vec::new();
    for (plus, case) in [(true, MutationCase::PlusSourcesOnlyA0), (false, MutationCase::MinusTargetsOnlyA0)] {
        let (mut accepted, mut equal, mut tries) = (0, 0, 0);
        let mut failure = String::new();
        while accepted < want && tries < 2000 {
            tries += 1;
            let qp = gen::mutation_candidate(&mut rng, plus);
            match mutation_compatibility_check(&qp, "a0") {
                Ok(r) if r.case == case => {
                    accepted += 1;
                    if r.equal {
                        equal += 1;
                    } else if failure.is_empty() {
                        failure = format!("differs on {:?}: {}", qp.quiver.arrows(), r.difference);
                    }
                }
                Ok(_) | Err(Error::MutationAssumption(_)) | Err(Error::UnsupportedReduction(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let label = match case {
            MutationCase::PlusSourcesOnlyA0 => "mu+ mu- mu+ then contract = contract then mutate",
            MutationCase::MinusTargetsOnlyA0 => "mu- mu+ mu- then contract = contract then mutate",
        };
        out.push(check(
            format!("{label} ({accepted} admissible quivers)"),
            accepted >= want && equal == accepted,
            failure,
        ));
    }
    Ok(out)
}

fn adhm(cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    let a2 = Quiver::build(&["1", "2"], &[("a0", "1", "2")]);
    let kronecker = Quiver::build(&["1", "2"], &[("a0", "1", "2"), ("b", "1", "2")]);
    let mut out = Vec::new();
    for (name, q) in [("A2", &a2), ("Kronecker", &kronecker)] {
        out.push(check(format!("triple potential contracts on {name}"), contract_triple_check(q, "a0")?, ""));
        out.push(check(format!("ADHM elimination on {name}"), adhm_elimination_check(q, "a0")?, ""));
    }
    let mut rng = gen::rng(cfg.seed);
    let cases = 10 * cfg.scale;
    let (mut triple_ok, mut adhm_ok) = (0, 0);
    for _ in 0..cases {
        let q = gen::contractible_quiver(&mut rng, 4, 6, true);
        triple_ok += usize::from(contract_triple_check(&q, "a0")?);
        adhm_ok += usize::from(adhm_elimination_check(&q, "a0")?);
    }
    out.push(check(format!("triple potential contracts on {cases} random quivers"), triple_ok == cases, format!("{triple_ok}/{cases}")));
    out.push(check(format!("ADHM elimination on {cases} random quivers"), adhm_ok == cases, format!("{adhm_ok}/{cases}")));
    Ok(out)
}

/// `psi_+(x_+) psi_-(x_-) (x) f + f (x) 1`.
pub fn expected_restricted_coproduct(alg: &ShuffleAlgebra, f: &SymPoly) -> Result<TensorElement, Error> {
    let zero = alg.quiver().zero_dim();
    let vars = alg.blocks(&zero, &f.gamma)?;
    let c = RationalFn::from_poly(f.poly.clone());
    let mut t = TensorElement::default();
    t.add_term(
        vec![
            Slot { word: SeriesWord::over(Series::Psi, &vars, 1), gamma: zero.clone() },
            Slot { word: SeriesWord::one(), gamma: f.gamma.clone() },
        ],
        c.clone(),
    );
    t.add_term(
        vec![Slot { word: SeriesWord::one(), gamma: f.gamma.clone() }, Slot { word: SeriesWord::one(), gamma: zero }],
        c,
    );
    Ok(t)
}

fn hopf(cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    let mut rng = gen::rng(cfg.seed);
    let ratio_cases = 20 * cfg.scale;
    let mut ratio_ok = 0;
    for _ in 0..ratio_cases {
        let q = gen::contractible_quiver(&mut rng, 4, 6, true);
        let g = gen::equal_sector_gamma(&mut rng, &q, 2);
        ratio_ok += usize::from(contraction_ratio_check(&ShuffleAlgebra::new(&q), "a0", &g)?);
    }
    let cop_cases = 10 * cfg.scale;
    let mut cop_ok = 0;
    let cross_cases = 10 * cfg.scale;
    let mut cross_ok = 0;
    for _ in 0..cop_cases.max(cross_cases) {
        let q = gen::contractible_quiver(&mut rng, 4, 6, true);
        let alg = ShuffleAlgebra::new(&q);
        let mut g = q.zero_dim();
        g.insert("v0".into(), 1);
        g.insert("v1".into(), 1);
        let f = gen::symmetric(&mut rng, &alg, &g, 3);
        let h = gen::symmetric(&mut rng, &alg, &g, 3);
        let d = coproduct_small(&alg, &f, Some(("v0", "v1")))?;
        cop_ok += usize::from(d == expected_restricted_coproduct(&alg, &f)?);
        cross_ok += usize::from(double_cross_check(&alg, "a0", &f, &h)?);
    }
    Ok(vec![
        check(
            format!("action ratios contract on {ratio_cases} random quivers"),
            ratio_ok == ratio_cases,
            format!("{ratio_ok}/{ratio_cases}"),
        ),
        check(
            format!("restricted coproduct at rank (1,1) on {cop_cases} elements"),
            cop_ok == cop_cases.max(cross_cases),
            format!("{cop_ok}/{}", cop_cases.max(cross_cases)),
        ),
        check(
            format!("double cross relation contracts on {cross_cases} rank-(1,1) pairs"),
            cross_ok == cop_cases.max(cross_cases),
            format!("{cross_ok}/{}", cop_cases.max(cross_cases)),
        ),
    ])
}

fn kappa(q: &Quiver, v: &[Rational]) -> Kappa {
    q.vertices().iter().cloned().zip(v.iter().cloned()).collect()
}

/// The integer grid `-2..=2` used to sample stability parameters.
pub fn default_sample_grid() -> Vec<Rational> {
    (-2..=2).map(int).collect()
}

/// The wall list of `1 -> 2` predicted by hand: `kappa_1 = 0` for `(1,0)`,
/// `kappa_2 = 0` for `(0,1)`, and `kappa_1 + kappa_2 = 0` with
/// `kappa_2 <= 0` for `(1,1)`.
pub fn a2_expected_verdict(g: &[u32], k: &[Rational]) -> bool {
    match g {
        [1, 0] | [0, 1] => true,
        [1, 1] => !k[1].is_positive(),
        _ => false,
    }
}

fn eta(cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    let grid = default_sample_grid();
    let positive = qpedge_core::scattering::default_eta_grid();
    let eta_grid = qpedge_core::scattering::extended_eta_grid();
    let shapes: [(&str, &str); 4] = [("m", "j"), ("j", "m"), ("p", "j"), ("j", "p")];
    for &p in &cfg.primes {
        let (mut samples, mut lifted, mut lifted_positive) = (0, 0, 0);
        for (s, t) in shapes {
            let q = Quiver::build(&["p", "m", "j"], &[("a0", "p", "m"), ("b", s, t)]);
            let mut max_hat = q.zero_dim();
            max_hat.remove("m");
            max_hat.insert("p".into(), 2);
            max_hat.insert("j".into(), 2);
            for e in eta_check(&q, "a0", &max_hat, &grid, &eta_grid, p)? {
                samples += 1;
                lifted += usize::from(e.lifted.is_some());
                lifted_positive += usize::from(e.lifted.as_ref().is_some_and(|(t, _)| positive.contains(t)));
            }
        }
        out.push(check(
            format!("contracted wall points lift under the embedding over F_{p}"),
            samples > 0 && lifted == samples,
            format!("{lifted}/{samples} ({lifted_positive}/{samples} with positive parameters only)"),
        ));
    }

    let a2 = Quiver::build(&["1", "2"], &[("a", "1", "2")]);
    let mut max = a2.zero_dim();
    max.insert("1".into(), 1);
    max.insert("2".into(), 1);
    let scans = wall_support_scan(&a2, &max, &grid, 2)?;
    let mut mismatches = 0;
    let mut walls = Vec::new();
    for s in &scans {
        let g = [s.gamma["1"], s.gamma["2"]];
        if s.is_wall() {
            walls.push(format!("({},{})", g[0], g[1]));
        }
        for (k, verdict) in &s.samples {
            let kv = [k["1"].clone(), k["2"].clone()];
            mismatches += usize::from(*verdict != a2_expected_verdict(&g, &kv));
        }
    }
    out.push(check(
        "A2 wall list",
        mismatches == 0 && walls == ["(0,1)", "(1,0)", "(1,1)"],
        format!("walls {}", walls.join(" ")),
    ));
    let witness = king_semistable_exists(&a2, &a2.dim(&[1, 1]), &kappa(&a2, &[int(1), int(-1)]), 2)?;
    out.push(check("A2 (1,1) semistable at kappa=(1,-1)", witness.is_some(), ""));

    let k = cfg.truncation;
    let flat = QuantumTorus::new(&Quiver::build(&["1", "2"], &[]), k);
    let a2t = QuantumTorus::new(&a2, k);
    let two_walls = |t: &QuantumTorus| -> Result<GComplex, Error> {
        let w1 = Wall::new(vec![1, 0], Cone::whole(), t.basis(&[1, 0], LPoly::one()))?;
        let w2 = Wall::new(vec![0, 1], Cone::whole(), t.basis(&[0, 1], LPoly::one()))?;
        GComplex::new(t.clone(), vec![w1, w2])
    };
    let origin = vec![Rational::zero(), Rational::zero()];
    let consistent = two_walls(&flat)?.consistency_check(std::slice::from_ref(&origin))?;
    let inconsistent = two_walls(&a2t)?.consistency_check(std::slice::from_ref(&origin))?;
    out.push(check(
        format!("consistency separates commuting and non-commuting two-wall diagrams at truncation {k}"),
        consistent == [true] && inconsistent == [false],
        format!("commuting {consistent:?}, non-commuting {inconsistent:?}"),
    ));
    Ok(out)
}

/// `(f(x1) g(x2) - f(x2) g(x1)) / (x2 - x1)` at a loop-free vertex.
pub fn fermionic_closed_form(alg: &ShuffleAlgebra, v: &str, f: &Poly, g: &Poly) -> Result<Poly, Error> {
    let (x1, x2) = (alg.var(v, 1)?, alg.var(v, 2)?);
    let swap = |p: &Poly| p.rename(|x| if x == x1 { x2 } else if x == x2 { x1 } else { x });
    let f2 = swap(f);
    let num = &(f * &swap(g)) - &(&f2 * g);
    num.div_diff(x2, x1).ok_or_else(|| Error::Internal("closed form is not divisible".into()))
}

fn fermion(cfg: &SuiteConfig) -> Result<Vec<Check>, Error> {
    let point = ShuffleAlgebra::new(&Quiver::build(&["i"], &[]));
    let jordan = ShuffleAlgebra::new(&Quiver::build(&["i"], &[("l", "i", "i")]));
    let one_p = point.generator("i", 0)?;
    let one_j = jordan.generator("i", 0)?;
    let x_j = jordan.generator("i", 1)?;
    let (x1, x2) = (Poly::var(jordan.var("i", 1)?), Poly::var(jordan.var("i", 2)?));
    let mut out = vec![
        check("1*1 = 0 at a loop-free vertex", point.mul(&one_p, &one_p)?.poly.is_zero(), ""),
        check("1*1 = 2 on the Jordan quiver", jordan.mul(&one_j, &one_j)?.poly == Poly::int(2), ""),
        check("x*1 = x1 + x2 on the Jordan quiver", jordan.mul(&x_j, &one_j)?.poly == &x1 + &x2, ""),
    ];
    let mut rng = gen::rng(cfg.seed);
    let mut closed_ok = 0;
    let closed_cases = 50 * cfg.scale;
    for _ in 0..closed_cases {
        let f = point.generator("i", rng.gen_range(0..4))?;
        let g = point.generator("i", rng.gen_range(0..4))?;
        let f = SymPoly { gamma: f.gamma.clone(), poly: f.poly.scale(&gen::small_rational(&mut rng)) };
        let prod = point.mul(&f, &g)?;
        closed_ok += usize::from(prod.poly == fermionic_closed_form(&point, "i", &f.poly, &g.poly)?);
    }
    out.push(check(
        format!("rank-one products at a loop-free vertex match the antisymmetric quotient ({closed_cases} cases)"),
        closed_ok == closed_cases,
        format!("{closed_ok}/{closed_cases}"),
    ));
    let cases = 500 * cfg.scale;
    let mut polynomial = 0;
    for _ in 0..cases {
        let q = gen::contractible_quiver(&mut rng, 3, 4, true);
        let alg = ShuffleAlgebra::new(&q);
        let g1 = random_gamma(&mut rng, &q);
        let g2 = random_gamma(&mut rng, &q);
        let f = gen::symmetric(&mut rng, &alg, &g1, 2);
        let g = gen::symmetric(&mut rng, &alg, &g2, 2);
        match alg.mul(&f, &g) {
            Ok(_) => polynomial += 1,
            Err(Error::Internal(_)) => {}
            Err(e) => return Err(e),
        }
    }
    out.push(check(
        format!("every product is a polynomial ({cases} random products)"),
        polynomial == cases,
        format!("{polynomial}/{cases}"),
    ));
    Ok(out)
}

fn random_gamma(rng: &mut gen::SuiteRng, q: &Quiver) -> DimVector {
    loop {
        let mut g = q.zero_dim();
        for v in q.vertices() {
            g.insert(v.clone(), rng.gen_range(0..=2));
        }
        let t: u32 = g.values().sum();
        if (1..=3).contains(&t) {
            return g;
        }
    }
}
