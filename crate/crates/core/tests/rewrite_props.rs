mod common;

use common::{cut_instances, focus_indices, multifocus_corpus, nested, CutInstance};
use llmfoc::kernel::{check, check_with, dsize, is_spent, CheckOptions, Derivation, Mode, RuleName};
use llmfoc::rewrite::{
    decompose, lower_deriv, normalize, reduce_step, CutMeasure, Flavor, NormalizeOptions, RewriteError,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn multi() -> &'static [Derivation] {
    static C: OnceLock<Vec<Derivation>> = OnceLock::new();
    C.get_or_init(|| multifocus_corpus(401, 80, 7))
}

fn cuts() -> &'static [CutInstance] {
    static C: OnceLock<Vec<CutInstance>> = OnceLock::new();
    C.get_or_init(|| cut_instances(409, 15))
}

fn flexible() -> NormalizeOptions {
    NormalizeOptions { flavor: Flavor::Flexible, paranoid: false, trace: false }
}

fn count_rule(d: &Derivation, name: RuleName) -> usize {
    let mut n = 0;
    d.visit(&mut |_, x| n += usize::from(x.name() == name));
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_is_exact(i in 0usize..10_000) {
        let d = &multi()[i % multi().len()];
        for f in focus_indices(d) {
            let r = decompose(d, f).unwrap();
            prop_assert_eq!(dsize(&r.core) + r.suffix.rule_count(), dsize(d));
            prop_assert!(is_spent(&r.sigma));
            prop_assert!(check(&r.core, Mode::Strict).is_ok());
            // Steps are tensors and pluses only.
            let tp = count_rule(d, RuleName::Tensor) + count_rule(d, RuleName::PlusL) + count_rule(d, RuleName::PlusR);
            let core_tp = count_rule(&r.core, RuleName::Tensor) + count_rule(&r.core, RuleName::PlusL) + count_rule(&r.core, RuleName::PlusR);
            let other_tp: usize = r.suffix.steps.iter().map(|s| match s {
                llmfoc::rewrite::SuffixStep::Tensor { other, .. } =>
                    count_rule(other, RuleName::Tensor) + count_rule(other, RuleName::PlusL) + count_rule(other, RuleName::PlusR),
                llmfoc::rewrite::SuffixStep::Plus { .. } => 0,
            }).sum();
            prop_assert_eq!(core_tp + other_tp + r.suffix.steps.len(), tp);
            let back = r.suffix.replay(r.core.clone()).unwrap();
            prop_assert_eq!(&back.conclusion, &d.conclusion);
            prop_assert!(check(&back, Mode::Strict).is_ok());
        }
    }

    #[test]
    fn lowering_keeps_the_skeleton(i in 0usize..10_000) {
        let d = &multi()[i % multi().len()];
        for f in focus_indices(d) {
            let core = decompose(d, f).unwrap().core;
            let p = d.conclusion.foc_ctx().unwrap().get(f).unwrap().clone();
            let idx = core.conclusion.foc_ctx().unwrap().iter().position(|x| *x == p).unwrap();
            let out = lower_deriv(&core, idx).unwrap();
            prop_assert_eq!(out.skeleton(), core.skeleton());
            prop_assert!(check(&out, Mode::Strict).is_ok());
            let foci = out.conclusion.foc_ctx().unwrap().iter().filter(|x| x.is_focus()).count();
            prop_assert_eq!(foci, 1);
        }
    }

    #[test]
    fn normalization_eliminates_cuts(i in 0usize..10_000) {
        let c = &cuts()[i % cuts().len()];
        let (out, trace) = normalize(&c.derivation, flexible()).unwrap();
        prop_assert!(out.is_cut_free());
        prop_assert!(check(&out, Mode::Strict).is_ok());
        let want = if trace.coerced { c.derivation.conclusion.coerce_to_inv().unwrap() } else { c.derivation.conclusion.clone() };
        prop_assert_eq!(&out.conclusion, &want);
        for s in &trace.steps {
            prop_assert!(s.after < s.before, "{}", s);
        }
        prop_assert!(!trace.steps.is_empty());
    }

    #[test]
    fn normalization_is_deterministic(i in 0usize..10_000) {
        let c = &cuts()[i % cuts().len()];
        let a = normalize(&c.derivation, flexible()).unwrap();
        let b = normalize(&c.derivation, flexible()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn paranoid_mode_agrees(i in 0usize..10_000) {
        let c = &cuts()[i % cuts().len()];
        let plain = normalize(&c.derivation, flexible()).unwrap();
        let paranoid = normalize(&c.derivation, NormalizeOptions { paranoid: true, trace: true, ..flexible() }).unwrap();
        prop_assert_eq!(&plain.0, &paranoid.0);
        prop_assert!(paranoid.1.steps.iter().all(|s| s.snapshot.is_some()));
    }

    #[test]
    fn cut_free_output_is_a_fixed_point(i in 0usize..10_000) {
        let c = &cuts()[i % cuts().len()];
        let (out, _) = normalize(&c.derivation, flexible()).unwrap();
        let (again, trace) = normalize(&out, flexible()).unwrap();
        prop_assert_eq!(again, out);
        prop_assert!(trace.steps.is_empty());
    }
}

#[test]
fn nested_cuts_eliminate() {
    let mut seen = 0;
    for a in cuts() {
        for b in cuts() {
            let Some(d) = nested(&a.derivation, &b.derivation) else { continue };
            seen += 1;
            let (out, trace) = normalize(&d, flexible()).unwrap();
            assert!(out.is_cut_free());
            assert!(check(&out, Mode::Strict).is_ok());
            assert!(trace.steps.iter().all(|s| s.after < s.before));
        }
    }
    assert!(seen > 0, "no nested instance");
}

#[test]
fn all_cut_kinds_are_generated() {
    for k in ["cut", "fcut", "cutBang", "fcutBang"] {
        assert!(cuts().iter().any(|c| c.kind == k), "{k}");
    }
}

#[test]
fn strict_flavor_refuses_focused_cut_without_foci() {
    let flexible_root = CheckOptions { mode: Mode::Strict, flexible_root: true };
    let mut seen = 0;
    for c in cuts() {
        let d = &c.derivation;
        let focus_free = d.conclusion.foc_ctx().is_some_and(|x| x.iter().all(|i| !i.is_focus()));
        if d.name() == RuleName::Cut && focus_free {
            seen += 1;
            assert!(!check(d, Mode::Strict).is_ok());
            assert!(check_with(d, flexible_root).is_ok());
            let strict = NormalizeOptions { flavor: Flavor::Strict, ..flexible() };
            assert!(matches!(normalize(d, strict), Err(RewriteError::IllFormedCut { .. })));
            let (out, trace) = normalize(d, flexible()).unwrap();
            assert!(trace.coerced);
            assert!(!out.conclusion.is_focused());
        }
    }
    assert!(seen > 0);
}

#[test]
fn one_root_step_leaves_smaller_cuts() {
    for c in cuts() {
        let d = &c.derivation;
        let before = CutMeasure::of(d).unwrap();
        let out = reduce_step(d, Flavor::Flexible).unwrap();
        out.visit(&mut |_, n| {
            if let Some(m) = CutMeasure::of(n) {
                assert!(m < before, "{}: {m} after {before}", c.kind);
            }
        });
    }
}

#[test]
fn reduce_step_wants_a_root_cut() {
    let d = llmfoc::corpus::example1();
    assert!(matches!(reduce_step(&d, Flavor::Flexible), Err(RewriteError::InvalidInput(_))));
}
