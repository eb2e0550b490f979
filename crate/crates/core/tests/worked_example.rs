use qpedge_core::contraction::{contract_qp, higgs};
use qpedge_core::mutation::mutate;
use qpedge_core::path::{PathSymbol, Potential, QuiverWithPotential};
use qpedge_core::quiver::Quiver;
use qpedge_core::rational::int;

fn example() -> QuiverWithPotential {
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
    let word = |ids: &[&str]| ids.iter().map(|a| PathSymbol::fwd(*a)).collect::<Vec<_>>();
    let mut w = Potential::zero();
    w.add_word(&q, &word(&["a1", "l1", "l1", "l2", "l2", "l2", "a0"]), int(1)).unwrap();
    w.add_word(&q, &word(&["l1", "d", "c", "b"]), int(1)).unwrap();
    QuiverWithPotential::new(q, w, None).unwrap()
}

#[test]
fn contraction_counts_and_loops() {
    let c = contract_qp(&example(), "a0").unwrap();
    assert_eq!(c.quiver.vertices().len(), 3);
    assert_eq!(c.quiver.arrows().len(), 7);
    let loops = c.quiver.arrows().iter().filter(|a| a.source == a.target).count();
    assert_eq!(loops, 4);
    assert_eq!(c.potential.terms().len(), 2);
    assert_eq!(example(), qpedge_core::contraction::example_qp());
}

#[test]
fn higgsing_matches_contraction_without_massive_terms() {
    let r = higgs(&example(), "a0").unwrap();
    assert!(r.agree);
    assert_eq!(r.contracted, r.higgsed);
}

#[test]
fn mutation_refuses_loops() {
    assert!(mutate(&example(), "i-").is_err());
    assert!(mutate(&example(), "1").is_ok());
}
