mod common;

use common::{cut_instances, search_corpus};
use llmfoc::analysis::{check_dyadic, check_maximal, erase_derivation, erase_sequent, phases, UDeriv, Verdict};
use llmfoc::corpus;
use llmfoc::format::parse_sequent;
use llmfoc::kernel::{check, dsize, Derivation, Mode, Rule, RuleName};
use llmfoc::rewrite::normalize;
use llmfoc::search::{enumerate, SearchBudget};
use proptest::prelude::*;
use std::sync::OnceLock;

fn corpus_proofs() -> &'static [Derivation] {
    static C: OnceLock<Vec<Derivation>> = OnceLock::new();
    C.get_or_init(|| {
        let mut v = search_corpus(503, 150, 7);
        for c in cut_instances(509, 6) {
            v.push(normalize(&c.derivation, Default::default()).unwrap().0);
        }
        v
    })
}

/// Size of the erasure counted on the focused proof: releases vanish and
/// a decide turns into one copy rule per copy.
fn expected_size(d: &Derivation) -> usize {
    let mut n = 0;
    d.visit(&mut |_, x| {
        n += match &x.rule {
            Rule::Release => 0,
            Rule::Decide { copies, .. } => copies.len(),
            _ => 1,
        }
    });
    n
}

fn count(d: &Derivation, name: RuleName) -> usize {
    let mut n = 0;
    d.visit(&mut |_, x| n += usize::from(x.name() == name));
    n
}

fn rule_names(u: &UDeriv, out: &mut Vec<&'static str>) {
    out.push(u.rule.name());
    u.premises.iter().for_each(|p| rule_names(p, out));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn erasure_is_sound(i in 0usize..10_000) {
        let d = &corpus_proofs()[i % corpus_proofs().len()];
        let u = erase_derivation(d).unwrap();
        prop_assert_eq!(check_dyadic(&u), Ok(()));
        prop_assert_eq!(&u.conclusion, &erase_sequent(&d.conclusion));
        prop_assert_eq!(u.size(), expected_size(d));
        let mut names = Vec::new();
        rule_names(&u, &mut names);
        prop_assert!(!names.contains(&"release") && !names.contains(&"decide"));
    }

    #[test]
    fn one_phase_per_decide(i in 0usize..10_000) {
        let d = &corpus_proofs()[i % corpus_proofs().len()];
        let ps = phases(d).unwrap();
        let opening = usize::from(d.conclusion.is_focused());
        prop_assert_eq!(ps.len(), count(d, RuleName::Decide) + opening);
        let releases: usize = ps.iter().map(|p| p.releases.len()).sum();
        prop_assert_eq!(releases, count(d, RuleName::Release));
        for p in &ps {
            for path in &p.nodes {
                prop_assert!(d.at(path).unwrap().conclusion.is_focused());
            }
        }
    }
}

#[test]
fn tampered_erasure_fails_the_dyadic_check() {
    let mut u = erase_derivation(&corpus::example1()).unwrap();
    assert_eq!(u.rule.name(), "tensor");
    u.premises.swap(0, 1);
    assert!(check_dyadic(&u).is_err());
    let mut u = erase_derivation(&corpus::example1()).unwrap();
    u.conclusion.ctx = u.conclusion.ctx.without(&u.conclusion.ctx.as_slice()[0].clone()).unwrap();
    assert!(check_dyadic(&u).is_err());
}

#[test]
fn erasure_rejects_cuts() {
    assert!(erase_derivation(&corpus::bad_cut()).is_err());
}

#[test]
fn example1_erasure_size() {
    let d = corpus::example1();
    let u = erase_derivation(&d).unwrap();
    // Ten rules, minus one release, minus two decides without copies.
    assert_eq!(dsize(&d), 10);
    assert_eq!(u.size(), 7);
}

#[test]
fn example1_phases() {
    let ps = phases(&corpus::example1()).unwrap();
    assert_eq!(ps.iter().map(|p| p.foci.len()).collect::<Vec<_>>(), vec![2, 1]);
    assert_eq!(ps[0].decide.as_deref(), Some(&[][..]));
    assert_eq!(ps[0].nodes.len(), 5);
}

#[test]
fn witnesses_are_proofs_of_the_same_sequent() {
    let s = &corpus::example1().conclusion;
    let mut proofs = enumerate(s, SearchBudget::depth(8)).unwrap();
    assert!(proofs.len() > 1);
    proofs.push(normalize(&corpus::bad_cut(), Default::default()).unwrap().0);
    let (mut maximal, mut extendable) = (0, 0);
    for d in &proofs {
        let r = check_maximal(d, 10).unwrap();
        for n in &r.nodes {
            match &n.verdict {
                Verdict::Extendable { witness, .. } => {
                    extendable += 1;
                    let node = d.at(&n.path).unwrap();
                    assert_eq!(witness.conclusion, node.conclusion);
                    assert!(check(witness, Mode::Strict).is_ok());
                    let (Rule::Decide { copies: a, theta: x }, Rule::Decide { copies: b, theta: y }) =
                        (&node.rule, &witness.rule)
                    else {
                        panic!("witness is not a decide");
                    };
                    assert_eq!(a.len() + x.len() + 1, b.len() + y.len());
                }
                Verdict::Maximal => maximal += 1,
                Verdict::DepthExhausted => {}
            }
        }
    }
    assert!(maximal > 0 && extendable > 0, "maximal {maximal}, extendable {extendable}");
}

#[test]
fn shallow_probes_report_exhaustion() {
    let d = corpus::example1();
    let r = check_maximal(&d, 1).unwrap();
    assert!(r.nodes.iter().any(|n| n.verdict == Verdict::DepthExhausted), "{r}");
    assert_eq!(r.extendable().count(), 0);
}

#[test]
fn maximality_needs_cut_free_input() {
    assert!(check_maximal(&corpus::bad_cut(), 4).is_err());
}

#[test]
fn copies_erase_to_copy_rules() {
    let s = parse_sequent("(inv (per (atom a)) (ctx (with (natom a) (natom a))))").unwrap();
    let d = llmfoc::search::prove(&s, SearchBudget::depth(6)).unwrap();
    let u = erase_derivation(&d).unwrap();
    let mut names = Vec::new();
    rule_names(&u, &mut names);
    assert_eq!(names.iter().filter(|n| **n == "copy").count(), 2);
    assert_eq!(check_dyadic(&u), Ok(()));
}
