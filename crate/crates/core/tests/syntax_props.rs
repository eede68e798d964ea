mod common;

use common::{arb_formula, arb_pos};
use llmfoc::syntax::{dual, fsize, parse_formula, print_formula, Formula, Neg, Pos};
use proptest::prelude::*;

/// De Morgan duality on printed text: swap every connective for its dual.
fn dual_by_text(s: &str) -> String {
    s.split_inclusive([' ', '(', ')'])
        .map(|tok| {
            let (word, tail) = tok.split_at(tok.trim_end_matches([' ', '(', ')']).len());
            let swapped = match word {
                "atom" => "natom",
                "natom" => "atom",
                "one" => "bot",
                "bot" => "one",
                "zero" => "top",
                "top" => "zero",
                "tensor" => "par",
                "par" => "tensor",
                "plus" => "with",
                "with" => "plus",
                "bang" => "quest",
                "quest" => "bang",
                "up" => "down",
                "down" => "up",
                other => other,
            };
            format!("{swapped}{tail}")
        })
        .collect()
}

/// Nodes counted on printed text: one per connective or constant token.
fn size_by_text(s: &str) -> usize {
    const NODES: [&str; 14] =
        ["atom", "natom", "one", "bot", "zero", "top", "tensor", "par", "plus", "with", "bang", "quest", "up", "down"];
    s.split([' ', '(', ')']).filter(|t| NODES.contains(t)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn dual_is_an_involution(f in arb_formula()) {
        prop_assert_eq!(dual(&dual(&f)), f);
    }

    #[test]
    fn dual_swaps_connectives(f in arb_formula()) {
        prop_assert_eq!(print_formula(&dual(&f)), dual_by_text(&print_formula(&f)));
    }

    #[test]
    fn dual_flips_polarity(p in arb_pos()) {
        let f = Formula::Pos(p.clone());
        prop_assert!(matches!(dual(&f), Formula::Neg(_)));
        prop_assert_eq!(p.dual().dual(), p);
    }

    #[test]
    fn size_counts_nodes(f in arb_formula()) {
        prop_assert_eq!(fsize(&f), size_by_text(&print_formula(&f)));
        prop_assert_eq!(fsize(&dual(&f)), fsize(&f));
    }

    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let s = print_formula(&f);
        let back = parse_formula(&s).unwrap();
        prop_assert_eq!(print_formula(&back), s);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn whitespace_is_insignificant(f in arb_formula()) {
        let s = print_formula(&f).replace(' ', "\n   ").replace('(', "( ");
        prop_assert_eq!(parse_formula(&s).unwrap(), f);
    }
}

#[test]
fn text_oracles_agree_on_fixed_cases() {
    assert_eq!(dual_by_text("(tensor (atom a) (up (natom b)))"), "(par (natom a) (down (atom b)))");
    assert_eq!(size_by_text("(tensor (atom a) (up (natom b)))"), 4);
    let f: Formula = Neg::with(Neg::Top, Neg::quest(Pos::One)).into();
    assert_eq!(fsize(&f), 4);
}

#[test]
fn polarity_mismatch_is_an_error() {
    assert!(parse_formula("(par (atom a) bot)").is_err());
    assert!(parse_formula("(up (atom a))").is_err());
    assert!(parse_formula("(down (natom a))").is_err());
}
