use super::sequent::{foci, has_focus, passives, FocCtx, FocItem, NegCtx, PosCtx, Sequent};
use crate::syntax::{Neg, Pos};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RuleName {
    Ax,
    One,
    Tensor,
    PlusL,
    PlusR,
    Bang,
    Release,
    Bot,
    Par,
    Top,
    With,
    Quest,
    Decide,
    Cut,
    Fcut,
    CutBang,
    FcutBang,
    Acut,
}

impl RuleName {
    pub const ALL: [RuleName; 18] = [
        RuleName::Ax,
        RuleName::One,
        RuleName::Tensor,
        RuleName::PlusL,
        RuleName::PlusR,
        RuleName::Bang,
        RuleName::Release,
        RuleName::Bot,
        RuleName::Par,
        RuleName::Top,
        RuleName::With,
        RuleName::Quest,
        RuleName::Decide,
        RuleName::Cut,
        RuleName::Fcut,
        RuleName::CutBang,
        RuleName::FcutBang,
        RuleName::Acut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Ax => "ax",
            RuleName::One => "one",
            RuleName::Tensor => "tensor",
            RuleName::PlusL => "plusL",
            RuleName::PlusR => "plusR",
            RuleName::Bang => "bang",
            RuleName::Release => "release",
            RuleName::Bot => "bot",
            RuleName::Par => "par",
            RuleName::Top => "top",
            RuleName::With => "with",
            RuleName::Quest => "quest",
            RuleName::Decide => "decide",
            RuleName::Cut => "cut",
            RuleName::Fcut => "fcut",
            RuleName::CutBang => "cutBang",
            RuleName::FcutBang => "fcutBang",
            RuleName::Acut => "acut",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleName> {
        RuleName::ALL.into_iter().find(|r| r.as_str() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            RuleName::Ax | RuleName::One | RuleName::Top => 0,
            RuleName::Tensor | RuleName::With => 2,
            RuleName::Cut | RuleName::Fcut | RuleName::CutBang | RuleName::FcutBang | RuleName::Acut => 2,
            _ => 1,
        }
    }

    pub fn is_cut(self) -> bool {
        matches!(self, RuleName::Cut | RuleName::Fcut | RuleName::CutBang | RuleName::FcutBang | RuleName::Acut)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rule instance together with the choices that cannot be recovered from
/// its conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "camelCase")]
pub enum Rule {
    Ax,
    One,
    /// `principal` is the tensor formula; `left` are the non-principal
    /// conclusion items sent to the first premise.
    Tensor {
        principal: Pos,
        left: FocCtx,
    },
    PlusL {
        principal: Pos,
    },
    PlusR {
        principal: Pos,
    },
    Bang,
    Release,
    Bot,
    Par {
        principal: Neg,
    },
    Top,
    With {
        principal: Neg,
    },
    Quest {
        principal: Neg,
    },
    /// `copies` are taken from the persistent context; `theta` are the `P`
    /// with `⇓P` in the conclusion that become foci.
    Decide {
        copies: PosCtx,
        theta: PosCtx,
    },
    /// `left` is the context `Ψ` of the focused premise (without the cut
    /// focus). The conclusion may be focused, or an inversion sequent when
    /// `Ψ` is focus-free.
    Cut {
        formula: Pos,
        left: FocCtx,
    },
    Fcut {
        formula: Pos,
        left: FocCtx,
    },
    /// Cut on the persistent context; premises `⊢Per:P^⊥` and `⊢Per,P:Γ`.
    CutBang {
        formula: Pos,
    },
    FcutBang {
        formula: Pos,
    },
    /// Activating cut: premises `⊨Per:Ψ,[P]` and `⊢Per:Γ,P^⊥`, conclusion
    /// `⊨Per:Ξ` with `Ψ,Γ ⇗ Ξ`. The witness is the pair of premise contexts.
    Acut {
        formula: Pos,
        psi: FocCtx,
        gamma: NegCtx,
    },
}

impl Rule {
    pub fn name(&self) -> RuleName {
        match self {
            Rule::Ax => RuleName::Ax,
            Rule::One => RuleName::One,
            Rule::Tensor { .. } => RuleName::Tensor,
            Rule::PlusL { .. } => RuleName::PlusL,
            Rule::PlusR { .. } => RuleName::PlusR,
            Rule::Bang => RuleName::Bang,
            Rule::Release => RuleName::Release,
            Rule::Bot => RuleName::Bot,
            Rule::Par { .. } => RuleName::Par,
            Rule::Top => RuleName::Top,
            Rule::With { .. } => RuleName::With,
            Rule::Quest { .. } => RuleName::Quest,
            Rule::Decide { .. } => RuleName::Decide,
            Rule::Cut { .. } => RuleName::Cut,
            Rule::Fcut { .. } => RuleName::Fcut,
            Rule::CutBang { .. } => RuleName::CutBang,
            Rule::FcutBang { .. } => RuleName::FcutBang,
            Rule::Acut { .. } => RuleName::Acut,
        }
    }

    pub fn cut_formula(&self) -> Option<&Pos> {
        match self {
            Rule::Cut { formula, .. }
            | Rule::Fcut { formula, .. }
            | Rule::CutBang { formula }
            | Rule::FcutBang { formula }
            | Rule::Acut { formula, .. } => Some(formula),
            _ => None,
        }
    }
}

/// A rule-labelled tree. Every node stores its full conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

/// Position of a node: the premise indices followed from the root.
pub type Path = Vec<usize>;

pub fn render_path(path: &[usize]) -> String {
    let mut s = String::from("r");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot build {rule}: {msg}")]
pub struct BuildError {
    pub rule: RuleName,
    pub msg: String,
}

fn fail<T>(rule: RuleName, msg: impl Into<String>) -> Result<T, BuildError> {
    Err(BuildError { rule, msg: msg.into() })
}

fn foc_parts(d: &Derivation, rule: RuleName) -> Result<(&PosCtx, &FocCtx), BuildError> {
    match &d.conclusion {
        Sequent::Foc { per, ctx } => Ok((per, ctx)),
        Sequent::Inv { .. } => fail(rule, "premise must be a focused sequent"),
    }
}

fn inv_parts(d: &Derivation, rule: RuleName) -> Result<(&PosCtx, &NegCtx), BuildError> {
    match &d.conclusion {
        Sequent::Inv { per, ctx } => Ok((per, ctx)),
        Sequent::Foc { .. } => fail(rule, "premise must be an inversion sequent"),
    }
}

fn same_per(a: &PosCtx, b: &PosCtx, rule: RuleName) -> Result<(), BuildError> {
    if a == b {
        Ok(())
    } else {
        fail(rule, "premises disagree on the persistent context")
    }
}

// Smart constructors. Each computes the conclusion from the premises, so a
// successfully built node always instantiates its rule schema.
impl Derivation {
    fn node(rule: Rule, conclusion: Sequent, premises: Vec<Derivation>) -> Self {
        Derivation { rule, conclusion, premises }
    }

    pub fn ax(per: PosCtx, atom: &str) -> Self {
        let ctx = vec![FocItem::Passive(Neg::natom(atom)), FocItem::Focus(Pos::atom(atom))].into();
        Self::node(Rule::Ax, Sequent::foc(per, ctx), vec![])
    }

    pub fn one(per: PosCtx) -> Self {
        Self::node(Rule::One, Sequent::foc(per, FocCtx::singleton(FocItem::Focus(Pos::One))), vec![])
    }

    /// `lp` and `rp` are the foci of the left and right premise.
    pub fn tensor(left: Derivation, right: Derivation, lp: &Pos, rp: &Pos) -> Result<Self, BuildError> {
        let r = RuleName::Tensor;
        let (per, lctx) = foc_parts(&left, r)?;
        let (rper, rctx) = foc_parts(&right, r)?;
        same_per(per, rper, r)?;
        let lrest = lctx
            .without(&FocItem::Focus(lp.clone()))
            .ok_or_else(|| BuildError { rule: r, msg: "left focus missing".into() })?;
        let rrest = rctx
            .without(&FocItem::Focus(rp.clone()))
            .ok_or_else(|| BuildError { rule: r, msg: "right focus missing".into() })?;
        let principal = Pos::tensor(lp.clone(), rp.clone());
        let ctx = lrest.union(&rrest).with(FocItem::Focus(principal.clone()));
        let concl = Sequent::foc(per.clone(), ctx);
        Ok(Self::node(Rule::Tensor { principal, left: lrest }, concl, vec![left, right]))
    }

    fn plus(d: Derivation, chosen: &Pos, principal: Pos, rule: Rule) -> Result<Self, BuildError> {
        let r = rule.name();
        let (per, ctx) = foc_parts(&d, r)?;
        let rest = ctx
            .without(&FocItem::Focus(chosen.clone()))
            .ok_or_else(|| BuildError { rule: r, msg: "focus missing".into() })?;
        let concl = Sequent::foc(per.clone(), rest.with(FocItem::Focus(principal)));
        Ok(Self::node(rule, concl, vec![d]))
    }

    pub fn plus_l(d: Derivation, chosen: &Pos, other: Pos) -> Result<Self, BuildError> {
        let principal = Pos::plus(chosen.clone(), other);
        Self::plus(d, chosen, principal.clone(), Rule::PlusL { principal })
    }

    pub fn plus_r(d: Derivation, other: Pos, chosen: &Pos) -> Result<Self, BuildError> {
        let principal = Pos::plus(other, chosen.clone());
        Self::plus(d, chosen, principal.clone(), Rule::PlusR { principal })
    }

    pub fn bang(d: Derivation) -> Result<Self, BuildError> {
        let r = RuleName::Bang;
        let (per, ctx) = inv_parts(&d, r)?;
        match ctx.as_slice() {
            [n] => {
                let concl = Sequent::foc(per.clone(), FocCtx::singleton(FocItem::Focus(Pos::bang(n.clone()))));
                Ok(Self::node(Rule::Bang, concl, vec![d]))
            }
            _ => fail(r, "premise must contain exactly one formula"),
        }
    }

    /// Blurs the members of `delta` into foci `[⇑N]`; the rest stays passive.
    pub fn release(d: Derivation, delta: &NegCtx) -> Result<Self, BuildError> {
        let r = RuleName::Release;
        let (per, ctx) = inv_parts(&d, r)?;
        if delta.is_empty() {
            return fail(r, "Δ must be non-empty");
        }
        let rest = ctx.difference(delta).ok_or_else(|| BuildError { rule: r, msg: "Δ not in premise".into() })?;
        let ups: PosCtx = delta.map(|n| Pos::up(n.clone()));
        let concl = Sequent::foc(per.clone(), passives(&rest).union(&foci(&ups)));
        Ok(Self::node(Rule::Release, concl, vec![d]))
    }

    pub fn bot(d: Derivation) -> Result<Self, BuildError> {
        let (per, ctx) = inv_parts(&d, RuleName::Bot)?;
        let concl = Sequent::inv(per.clone(), ctx.clone().with(Neg::Bot));
        Ok(Self::node(Rule::Bot, concl, vec![d]))
    }

    pub fn par(d: Derivation, n: &Neg, m: &Neg) -> Result<Self, BuildError> {
        let r = RuleName::Par;
        let (per, ctx) = inv_parts(&d, r)?;
        let rest = ctx
            .without(n)
            .and_then(|c| c.without(m))
            .ok_or_else(|| BuildError { rule: r, msg: "components missing".into() })?;
        let principal = Neg::par(n.clone(), m.clone());
        let concl = Sequent::inv(per.clone(), rest.with(principal.clone()));
        Ok(Self::node(Rule::Par { principal }, concl, vec![d]))
    }

    pub fn top(per: PosCtx, ctx: NegCtx) -> Result<Self, BuildError> {
        if !ctx.contains(&Neg::Top) {
            return fail(RuleName::Top, "context has no ⊤");
        }
        Ok(Self::node(Rule::Top, Sequent::inv(per, ctx), vec![]))
    }

    pub fn with(left: Derivation, right: Derivation, n: &Neg, m: &Neg) -> Result<Self, BuildError> {
        let r = RuleName::With;
        let (per, lctx) = inv_parts(&left, r)?;
        let (rper, rctx) = inv_parts(&right, r)?;
        same_per(per, rper, r)?;
        let lrest = lctx.without(n).ok_or_else(|| BuildError { rule: r, msg: "left component missing".into() })?;
        let rrest = rctx.without(m).ok_or_else(|| BuildError { rule: r, msg: "right component missing".into() })?;
        if lrest != rrest {
            return fail(r, "premise contexts differ");
        }
        let principal = Neg::with(n.clone(), m.clone());
        let concl = Sequent::inv(per.clone(), lrest.with(principal.clone()));
        Ok(Self::node(Rule::With { principal }, concl, vec![left, right]))
    }

    pub fn quest(d: Derivation, p: &Pos) -> Result<Self, BuildError> {
        let r = RuleName::Quest;
        let (per, ctx) = inv_parts(&d, r)?;
        let rest = per.without(p).ok_or_else(|| BuildError { rule: r, msg: "formula not persistent".into() })?;
        let principal = Neg::quest(p.clone());
        let concl = Sequent::inv(rest, ctx.clone().with(principal.clone()));
        Ok(Self::node(Rule::Quest { principal }, concl, vec![d]))
    }

    /// Closes a focusing phase: the premise foci are `copies ∪ theta`.
    pub fn decide(d: Derivation, copies: &PosCtx) -> Result<Self, BuildError> {
        let r = RuleName::Decide;
        let (per, ctx) = foc_parts(&d, r)?;
        let mut theta = PosCtx::new();
        let mut gamma = NegCtx::new();
        for item in ctx {
            match item {
                FocItem::Focus(p) => theta.insert(p.clone()),
                FocItem::Passive(n) => gamma.insert(n.clone()),
            }
        }
        let theta = theta
            .difference(copies)
            .ok_or_else(|| BuildError { rule: r, msg: "copies are not foci of the premise".into() })?;
        if copies.iter().any(|c| !per.contains(c)) {
            return fail(r, "copy of a formula outside the persistent context");
        }
        if copies.is_empty() && theta.is_empty() {
            return fail(r, "Per^{vec n} or Θ must be non-empty");
        }
        let concl = Sequent::inv(per.clone(), gamma.union(&theta.map(|p| Neg::down(p.clone()))));
        Ok(Self::node(Rule::Decide { copies: copies.clone(), theta }, concl, vec![d]))
    }

    /// Linear cut of `d ⊨ Ψ,[P]` against `e ⊢ Γ,P^⊥`. Concludes `⊨ Ψ,Γ`
    /// when `Ψ` has a focus and `⊢ Ψ,Γ` otherwise.
    pub fn cut(d: Derivation, e: Derivation, p: &Pos) -> Result<Self, BuildError> {
        let r = RuleName::Cut;
        let (per, dctx) = foc_parts(&d, r)?;
        let (eper, ectx) = inv_parts(&e, r)?;
        same_per(per, eper, r)?;
        let psi = dctx
            .without(&FocItem::Focus(p.clone()))
            .ok_or_else(|| BuildError { rule: r, msg: "cut focus missing".into() })?;
        let gamma =
            ectx.without(&p.dual()).ok_or_else(|| BuildError { rule: r, msg: "dual of cut formula missing".into() })?;
        let concl = if has_focus(&psi) {
            Sequent::foc(per.clone(), psi.union(&passives(&gamma)))
        } else {
            let psi_neg = super::sequent::as_neg_ctx(&psi).expect("focus-free");
            Sequent::inv(per.clone(), psi_neg.union(&gamma))
        };
        Ok(Self::node(Rule::Cut { formula: p.clone(), left: psi }, concl, vec![d, e]))
    }

    /// A linear cut that always concludes a focused sequent, even a
    /// focus-free one. Such nodes only pass the checker in flexible mode.
    pub fn cut_focused_unchecked(d: Derivation, e: Derivation, p: &Pos) -> Result<Self, BuildError> {
        let mut node = Self::cut(d, e, p)?;
        if let Sequent::Inv { per, ctx } = &node.conclusion {
            node.conclusion = Sequent::foc(per.clone(), passives(ctx));
        }
        Ok(node)
    }

    pub fn fcut(d: Derivation, e: Derivation, p: &Pos) -> Result<Self, BuildError> {
        let r = RuleName::Fcut;
        let (per, dctx) = foc_parts(&d, r)?;
        let (eper, ectx) = foc_parts(&e, r)?;
        same_per(per, eper, r)?;
        let psi = dctx
            .without(&FocItem::Focus(p.clone()))
            .ok_or_else(|| BuildError { rule: r, msg: "cut focus missing".into() })?;
        let xi = ectx
            .without(&FocItem::Passive(p.dual()))
            .ok_or_else(|| BuildError { rule: r, msg: "dual of cut formula missing".into() })?;
        let concl = Sequent::foc(per.clone(), psi.union(&xi));
        Ok(Self::node(Rule::Fcut { formula: p.clone(), left: psi }, concl, vec![d, e]))
    }

    fn persistent(d: Derivation, e: Derivation, p: &Pos, focused: bool) -> Result<Self, BuildError> {
        let r = if focused { RuleName::FcutBang } else { RuleName::CutBang };
        let (per, dctx) = inv_parts(&d, r)?;
        if dctx.as_slice() != [p.dual()] {
            return fail(r, "first premise must be ⊢Per:P^⊥");
        }
        if e.conclusion.is_focused() != focused {
            return fail(r, "second premise has the wrong judgment");
        }
        let expected = per.clone().with(p.clone());
        if e.conclusion.per() != &expected {
            return fail(r, "second premise persistent context must be Per,P");
        }
        let mut concl = e.conclusion.clone();
        *concl.per_mut() = per.clone();
        let rule = if focused { Rule::FcutBang { formula: p.clone() } } else { Rule::CutBang { formula: p.clone() } };
        Ok(Self::node(rule, concl, vec![d, e]))
    }

    pub fn cut_bang(d: Derivation, e: Derivation, p: &Pos) -> Result<Self, BuildError> {
        Self::persistent(d, e, p, false)
    }

    pub fn fcut_bang(d: Derivation, e: Derivation, p: &Pos) -> Result<Self, BuildError> {
        Self::persistent(d, e, p, true)
    }

    /// Activating cut concluding `⊨ Per : xi`.
    pub fn acut(d: Derivation, e: Derivation, p: &Pos, xi: FocCtx) -> Result<Self, BuildError> {
        let r = RuleName::Acut;
        let (per, dctx) = foc_parts(&d, r)?;
        let (eper, ectx) = inv_parts(&e, r)?;
        same_per(per, eper, r)?;
        let psi = dctx
            .without(&FocItem::Focus(p.clone()))
            .ok_or_else(|| BuildError { rule: r, msg: "cut focus missing".into() })?;
        let gamma =
            ectx.without(&p.dual()).ok_or_else(|| BuildError { rule: r, msg: "dual of cut formula missing".into() })?;
        if !super::sequent::activates_to(&psi.union(&passives(&gamma)), &xi) {
            return fail(r, "conclusion is not an activation of Ψ,Γ");
        }
        let concl = Sequent::foc(per.clone(), xi);
        Ok(Self::node(Rule::Acut { formula: p.clone(), psi, gamma }, concl, vec![d, e]))
    }
}

impl Derivation {
    pub fn name(&self) -> RuleName {
        self.rule.name()
    }

    /// Number of rule instances.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Longest root-to-leaf node count.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn is_cut_free(&self) -> bool {
        !self.name().is_cut() && self.premises.iter().all(Derivation::is_cut_free)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get_mut(*i)?.at_mut(rest),
        }
    }

    /// Pre-order visit of every node with its path.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&[usize], &'a Derivation)) {
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &'a Derivation)) {
            f(path, d);
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// The rule-name tree, used to compare derivation shapes.
    pub fn skeleton(&self) -> Skeleton {
        Skeleton(self.name(), self.premises.iter().map(Derivation::skeleton).collect())
    }

    /// Adds `p` to the persistent context of every node.
    pub fn weaken(&self, p: &Pos) -> Derivation {
        let mut d = self.clone();
        d.map_per(&mut |per| per.insert(p.clone()));
        d
    }

    /// Applies `f` to the persistent context of every node.
    pub fn map_per(&mut self, f: &mut impl FnMut(&mut PosCtx)) {
        f(self.conclusion.per_mut());
        for p in &mut self.premises {
            p.map_per(f);
        }
    }
}

/// Rule names arranged as the derivation tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Skeleton(pub RuleName, pub Vec<Skeleton>);

pub fn dsize(d: &Derivation) -> usize {
    d.size()
}

pub fn dheight(d: &Derivation) -> usize {
    d.height()
}

pub fn is_cut_free(d: &Derivation) -> bool {
    d.is_cut_free()
}
