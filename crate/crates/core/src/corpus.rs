//! Hand-built reference derivations used by the tests, the CLI data files
//! and the documentation.

use crate::kernel::{Derivation, FocCtx, FocItem, NegCtx, PosCtx, Rule, Sequent};
use crate::syntax::{Neg, Pos};

fn a(x: &str) -> Pos {
    Pos::atom(x)
}

fn na(x: &str) -> Neg {
    Neg::natom(x)
}

fn none() -> PosCtx {
    PosCtx::new()
}

/// `a ⊗ ⇑b^⊥` for atom names `a`, `b`.
pub fn tensor_up(x: &str, y: &str) -> Pos {
    Pos::tensor(a(x), Pos::up(na(y)))
}

/// The multifocused proof of
/// `⊢ · : ⇓(a⊗⇑b^⊥), a^⊥, c^⊥, ⇓(c⊗⇑d^⊥), ⇓(b⊗d)`
/// whose lower phase focuses both tensors at once.
pub fn example1() -> Derivation {
    example1_upper_phase().and_then(|d| Derivation::decide(d, &none())).expect("example 1 is well built")
}

/// The focused premise of the lowest decide in [`example1`].
pub fn example1_upper() -> Derivation {
    example1_upper_phase().expect("example 1 is well built")
}

/// The inner release of [`example1`]:
/// `⊨ · : [⇑b^⊥], [⇑d^⊥], ⇓(b⊗d)`.
pub fn example1_inner_release() -> Derivation {
    inner_release().expect("example 1 is well built")
}

fn inner_release() -> Result<Derivation, crate::kernel::BuildError> {
    let bd = Derivation::tensor(Derivation::ax(none(), "b"), Derivation::ax(none(), "d"), &a("b"), &a("d"))?;
    let top = Derivation::decide(bd, &none())?;
    Derivation::release(top, &vec![na("b"), na("d")].into())
}

fn example1_upper_phase() -> Result<Derivation, crate::kernel::BuildError> {
    let rel = inner_release()?;
    let cd = Derivation::tensor(Derivation::ax(none(), "c"), rel, &a("c"), &Pos::up(na("d")))?;
    Derivation::tensor(Derivation::ax(none(), "a"), cd, &a("a"), &Pos::up(na("b")))
}

/// The cut formula of the bad-cut configuration: `⇑(a^⊥ ⅋ ⇓b)`.
pub fn bad_cut_formula() -> Pos {
    Pos::up(Neg::par(na("a"), Neg::down(a("b"))))
}

/// A variation of identity expansion proving
/// `⊨ · : ⇓(a⊗⇑b^⊥), [⇑⊥], [⇑(a^⊥ ⅋ ⇓b)]`.
pub fn identity_variation() -> Derivation {
    identity_variation_inner().expect("identity variation is well built")
}

fn identity_variation_inner() -> Result<Derivation, crate::kernel::BuildError> {
    let b = Derivation::decide(Derivation::ax(none(), "b"), &none())?;
    let rel_b = Derivation::release(b, &NegCtx::singleton(na("b")))?;
    let t = Derivation::tensor(Derivation::ax(none(), "a"), rel_b, &a("a"), &Pos::up(na("b")))?;
    let dec = Derivation::decide(t, &none())?;
    let par = Derivation::par(dec, &na("a"), &Neg::down(a("b")))?;
    let bot = Derivation::bot(par)?;
    Derivation::release(bot, &vec![Neg::Bot, Neg::par(na("a"), Neg::down(a("b")))].into())
}

/// The cut of [`identity_variation`] against [`example1`] on `⇑(a^⊥ ⅋ ⇓b)`.
pub fn bad_cut() -> Derivation {
    Derivation::cut(identity_variation(), example1(), &bad_cut_formula()).expect("bad cut is well built")
}

/// `⊢ · : a^⊥, ⇓a` by deciding on `a`; with `broken` the decide records an
/// empty selection, violating its side condition.
pub fn decide_on_atom(broken: bool) -> Derivation {
    let mut d = Derivation::decide(Derivation::ax(none(), "a"), &none()).expect("decide over ax");
    if broken {
        d.rule = Rule::Decide { copies: none(), theta: none() };
    }
    d
}

/// `⊨ · : [⇑⊤]` by releasing `⊤`; with `broken` the conclusion is the
/// focus-free `⊨ · : ⊤`, so the release has an empty `Δ`.
pub fn release_top(broken: bool) -> Derivation {
    let top = Derivation::top(none(), NegCtx::singleton(Neg::Top)).expect("top");
    let mut d = Derivation::release(top, &NegCtx::singleton(Neg::Top)).expect("release");
    if broken {
        d.conclusion = Sequent::foc(none(), FocCtx::singleton(FocItem::Passive(Neg::Top)));
    }
    d
}
