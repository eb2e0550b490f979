use proptest::prelude::*;
use qpedge::format::{parse_qp, print_qp, QPDocument};
use qpedge::gen;
use qpedge::suites::{contract_document, example31_document};
use qpedge_core::path::QuiverWithPotential;

fn random_document(seed: u64) -> QPDocument {
    let mut rng = gen::rng(seed);
    let q = gen::contractible_quiver(&mut rng, 4, 7, true);
    let w = gen::random_potential(&mut rng, &q);
    QPDocument::new(format!("random{seed}"), QuiverWithPotential::new(q, w, None).expect("valid"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let doc = random_document(seed);
        let text = print_qp(&doc);
        let back = parse_qp(&text).expect("printed text parses");
        prop_assert_eq!(&back.qp, &doc.qp);
        prop_assert_eq!(print_qp(&back), text);
    }

    #[test]
    fn contracted_documents_round_trip(seed in any::<u64>()) {
        let doc = contract_document(&random_document(seed), "a0").expect("a0 is contractible");
        let text = print_qp(&doc);
        let back = parse_qp(&text).expect("contracted text parses");
        prop_assert_eq!(&back.qp, &doc.qp);
    }
}

#[test]
fn bundled_example_round_trips() {
    let doc = example31_document();
    assert_eq!(doc.qp.quiver.vertices().len(), 4);
    assert_eq!(doc.qp.quiver.arrows().len(), 8);
    assert_eq!(parse_qp(&print_qp(&doc)).unwrap(), doc);
}

#[test]
fn arrowless_quiver() {
    let doc = parse_qp("quiver pt\nvertices: i\narrows:\npotential: 0\n").unwrap();
    assert!(doc.qp.quiver.arrows().is_empty());
    let text = print_qp(&doc);
    assert!(text.contains("arrows:\n"));
    assert_eq!(parse_qp(&text).unwrap(), doc);
}

#[test]
fn potential_must_compose() {
    let src = "quiver k\nvertices: 1, 2\narrows: a: 1 -> 2; b: 2 -> 1\npotential: 1 * a.a\n";
    let errs = parse_qp(src).unwrap_err();
    assert!(!errs.is_empty());
    assert!(errs[0].message.contains("compos"), "{}", errs[0].message);
    let span = errs[0].span.clone();
    assert_eq!(&src[span], "a.a");
}

#[test]
fn inverse_needs_designation() {
    let base = "quiver k\nvertices: 1, 2\narrows: a: 1 -> 2; b: 2 -> 2\n";
    let src = format!("{base}potential: 1 * a^-1.b.a\n");
    assert!(parse_qp(&src).is_err());
    let ok = format!("{base}potential: 1 * a^-1.b.a\ninvert: a\n");
    let doc = parse_qp(&ok).unwrap();
    assert_eq!(doc.qp.invertible.as_deref(), Some("a"));
}

#[test]
fn reserved_characters_in_ids() {
    assert!(parse_qp("quiver k\nvertices: a.b\narrows:\npotential: 0\n").is_err());
    assert!(parse_qp("quiver k\nvertices: [v]\narrows:\npotential: 0\n").is_err());
    assert!(parse_qp("quiver k\nvertices: 1\narrows: [a]: 1 -> 1\npotential: 1 * [a].[a].[a]\n").is_ok());
    assert!(parse_qp("quiver k\nvertices: 1\narrows: x=y: 1 -> 1\npotential: 0\n").is_err());
}
