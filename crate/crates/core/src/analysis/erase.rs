use super::AnalysisError;
use crate::kernel::{check, render_path, Derivation, FocItem, Mode, Multiset, Rule, Sequent};
use crate::syntax::{Atom, Formula, Neg, Pos};
use serde::Serialize;
use std::fmt;

/// Unpolarized linear-logic formulas.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ULFormula {
    Atom(Atom),
    NAtom(Atom),
    One,
    Bot,
    Zero,
    Top,
    Tensor(Box<ULFormula>, Box<ULFormula>),
    Par(Box<ULFormula>, Box<ULFormula>),
    Plus(Box<ULFormula>, Box<ULFormula>),
    With(Box<ULFormula>, Box<ULFormula>),
    Bang(Box<ULFormula>),
    Quest(Box<ULFormula>),
}

impl ULFormula {
    /// Linear negation.
    pub fn neg(&self) -> ULFormula {
        use ULFormula::*;
        let b = |f: &ULFormula| Box::new(f.neg());
        match self {
            Atom(a) => NAtom(a.clone()),
            NAtom(a) => Atom(a.clone()),
            One => Bot,
            Bot => One,
            Zero => Top,
            Top => Zero,
            Tensor(x, y) => Par(b(x), b(y)),
            Par(x, y) => Tensor(b(x), b(y)),
            Plus(x, y) => With(b(x), b(y)),
            With(x, y) => Plus(b(x), b(y)),
            Bang(x) => Quest(b(x)),
            Quest(x) => Bang(b(x)),
        }
    }

    pub fn size(&self) -> usize {
        use ULFormula::*;
        match self {
            Atom(_) | NAtom(_) | One | Bot | Zero | Top => 1,
            Tensor(x, y) | Par(x, y) | Plus(x, y) | With(x, y) => 1 + x.size() + y.size(),
            Bang(x) | Quest(x) => 1 + x.size(),
        }
    }
}

impl fmt::Display for ULFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ULFormula::*;
        match self {
            Atom(a) => write!(f, "(atom {})", a.as_str()),
            NAtom(a) => write!(f, "(natom {})", a.as_str()),
            One => f.write_str("one"),
            Bot => f.write_str("bot"),
            Zero => f.write_str("zero"),
            Top => f.write_str("top"),
            Tensor(x, y) => write!(f, "(tensor {x} {y})"),
            Par(x, y) => write!(f, "(par {x} {y})"),
            Plus(x, y) => write!(f, "(plus {x} {y})"),
            With(x, y) => write!(f, "(with {x} {y})"),
            Bang(x) => write!(f, "(bang {x})"),
            Quest(x) => write!(f, "(quest {x})"),
        }
    }
}

fn erase_pos(p: &Pos) -> ULFormula {
    let b = |q: &Pos| Box::new(erase_pos(q));
    match p {
        Pos::Atom(a) => ULFormula::Atom(a.clone()),
        Pos::One => ULFormula::One,
        Pos::Zero => ULFormula::Zero,
        Pos::Tensor(x, y) => ULFormula::Tensor(b(x), b(y)),
        Pos::Plus(x, y) => ULFormula::Plus(b(x), b(y)),
        Pos::Bang(n) => ULFormula::Bang(Box::new(erase_neg(n))),
        Pos::Up(n) => erase_neg(n),
    }
}

fn erase_neg(n: &Neg) -> ULFormula {
    let b = |m: &Neg| Box::new(erase_neg(m));
    match n {
        Neg::NAtom(a) => ULFormula::NAtom(a.clone()),
        Neg::Bot => ULFormula::Bot,
        Neg::Top => ULFormula::Top,
        Neg::Par(x, y) => ULFormula::Par(b(x), b(y)),
        Neg::With(x, y) => ULFormula::With(b(x), b(y)),
        Neg::Quest(p) => ULFormula::Quest(Box::new(erase_pos(p))),
        Neg::Down(p) => erase_pos(p),
    }
}

/// Drops the shifts.
pub fn erase_formula(f: &Formula) -> ULFormula {
    match f {
        Formula::Pos(p) => erase_pos(p),
        Formula::Neg(n) => erase_neg(n),
    }
}

/// A dyadic sequent `⊢ Per ; Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct USequent {
    pub per: Multiset<ULFormula>,
    pub ctx: Multiset<ULFormula>,
}

impl fmt::Display for USequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |m: &Multiset<ULFormula>| m.iter().map(|x| format!(" {x}")).collect::<String>();
        write!(f, "(dyadic (per{}) (ctx{}))", join(&self.per), join(&self.ctx))
    }
}

pub fn erase_sequent(s: &Sequent) -> USequent {
    let per = s.per().map(erase_pos);
    let ctx = match s {
        Sequent::Inv { ctx, .. } => ctx.map(erase_neg),
        Sequent::Foc { ctx, .. } => ctx.map(|i| match i {
            FocItem::Passive(n) => erase_neg(n),
            FocItem::Focus(p) => erase_pos(p),
        }),
    };
    USequent { per, ctx }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum URule {
    Ax,
    One,
    Top,
    Bot,
    Tensor { principal: ULFormula, left: Multiset<ULFormula> },
    Par { principal: ULFormula },
    With { principal: ULFormula },
    Plus1 { principal: ULFormula },
    Plus2 { principal: ULFormula },
    Bang { principal: ULFormula },
    Quest { principal: ULFormula },
    Copy { formula: ULFormula },
}

impl URule {
    pub fn name(&self) -> &'static str {
        match self {
            URule::Ax => "ax",
            URule::One => "one",
            URule::Top => "top",
            URule::Bot => "bot",
            URule::Tensor { .. } => "tensor",
            URule::Par { .. } => "par",
            URule::With { .. } => "with",
            URule::Plus1 { .. } => "plus1",
            URule::Plus2 { .. } => "plus2",
            URule::Bang { .. } => "bang",
            URule::Quest { .. } => "quest",
            URule::Copy { .. } => "copy",
        }
    }
}

/// A derivation in the one-sided dyadic calculus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UDeriv {
    pub rule: URule,
    pub conclusion: USequent,
    pub premises: Vec<UDeriv>,
}

impl UDeriv {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(UDeriv::size).sum::<usize>()
    }

    fn write(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{} {}\n", self.rule.name(), self.conclusion));
        for p in &self.premises {
            p.write(depth + 1, out);
        }
    }

    /// One line per node, premises indented below their conclusion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(0, &mut out);
        out
    }
}

fn unode(rule: URule, s: &Sequent, premises: Vec<UDeriv>) -> UDeriv {
    UDeriv { rule, conclusion: erase_sequent(s), premises }
}

fn erase_node(d: &Derivation) -> UDeriv {
    let ps = || d.premises.iter().map(erase_node).collect::<Vec<_>>();
    let s = &d.conclusion;
    match &d.rule {
        Rule::Ax => unode(URule::Ax, s, vec![]),
        Rule::One => unode(URule::One, s, vec![]),
        Rule::Top => unode(URule::Top, s, vec![]),
        Rule::Bot => unode(URule::Bot, s, ps()),
        Rule::Release => erase_node(&d.premises[0]),
        Rule::Bang => unode(URule::Bang { principal: erase_sequent(s).ctx.as_slice()[0].clone() }, s, ps()),
        Rule::Tensor { principal, left } => {
            let left = left.map(|i| match i {
                FocItem::Passive(n) => erase_neg(n),
                FocItem::Focus(p) => erase_pos(p),
            });
            unode(URule::Tensor { principal: erase_pos(principal), left }, s, ps())
        }
        Rule::PlusL { principal } => unode(URule::Plus1 { principal: erase_pos(principal) }, s, ps()),
        Rule::PlusR { principal } => unode(URule::Plus2 { principal: erase_pos(principal) }, s, ps()),
        Rule::Par { principal } => unode(URule::Par { principal: erase_neg(principal) }, s, ps()),
        Rule::With { principal } => unode(URule::With { principal: erase_neg(principal) }, s, ps()),
        Rule::Quest { principal } => unode(URule::Quest { principal: erase_neg(principal) }, s, ps()),
        Rule::Decide { copies, .. } => {
            // Θ is bookkeeping; every copy becomes one copy rule.
            let mut acc = erase_node(&d.premises[0]);
            let mut conclusion = acc.conclusion.clone();
            for c in copies.iter().rev() {
                let f = erase_pos(c);
                conclusion.ctx.remove(&f);
                acc = UDeriv { rule: URule::Copy { formula: f }, conclusion: conclusion.clone(), premises: vec![acc] };
            }
            acc
        }
        Rule::Cut { .. } | Rule::Fcut { .. } | Rule::CutBang { .. } | Rule::FcutBang { .. } | Rule::Acut { .. } => {
            unreachable!("erasure input is cut-free")
        }
    }
}

/// Erases a checked cut-free derivation.
pub fn erase_derivation(d: &Derivation) -> Result<UDeriv, AnalysisError> {
    if !d.is_cut_free() {
        return Err(AnalysisError::InvalidInput("erasure needs a cut-free derivation".into()));
    }
    let report = check(d, Mode::Strict);
    if !report.is_ok() {
        return Err(AnalysisError::InvalidInput(format!("derivation does not check:\n{report}")));
    }
    Ok(erase_node(d))
}

fn expected_premises(u: &UDeriv) -> Result<Vec<USequent>, String> {
    let USequent { per, ctx } = &u.conclusion;
    let with = |c: &Multiset<ULFormula>, xs: &[&ULFormula]| {
        let mut c = c.clone();
        for x in xs {
            c.insert((*x).clone());
        }
        USequent { per: per.clone(), ctx: c }
    };
    let rest = |p: &ULFormula| ctx.without(p).ok_or_else(|| format!("principal {p} not in the context"));
    match &u.rule {
        URule::Ax => match ctx.as_slice() {
            [ULFormula::Atom(a), ULFormula::NAtom(b)] if a == b => Ok(vec![]),
            _ => Err("context must be exactly a, a^⊥".into()),
        },
        URule::One => match ctx.as_slice() {
            [ULFormula::One] => Ok(vec![]),
            _ => Err("context must be exactly 1".into()),
        },
        URule::Top => {
            if ctx.contains(&ULFormula::Top) {
                Ok(vec![])
            } else {
                Err("context has no ⊤".into())
            }
        }
        URule::Bot => Ok(vec![with(&rest(&ULFormula::Bot)?, &[])]),
        URule::Tensor { principal, left } => {
            let ULFormula::Tensor(a, b) = principal else { return Err("principal is not a tensor".into()) };
            let r = rest(principal)?;
            let right = r.difference(left).ok_or("left split is not part of the context")?;
            Ok(vec![with(left, &[a]), with(&right, &[b])])
        }
        URule::Par { principal } => {
            let ULFormula::Par(a, b) = principal else { return Err("principal is not a par".into()) };
            Ok(vec![with(&rest(principal)?, &[a, b])])
        }
        URule::With { principal } => {
            let ULFormula::With(a, b) = principal else { return Err("principal is not a with".into()) };
            let r = rest(principal)?;
            Ok(vec![with(&r, &[a]), with(&r, &[b])])
        }
        URule::Plus1 { principal } | URule::Plus2 { principal } => {
            let ULFormula::Plus(a, b) = principal else { return Err("principal is not a plus".into()) };
            let chosen = if matches!(u.rule, URule::Plus1 { .. }) { a } else { b };
            Ok(vec![with(&rest(principal)?, &[chosen])])
        }
        URule::Bang { principal } => {
            let ULFormula::Bang(a) = principal else { return Err("principal is not a bang".into()) };
            if ctx.as_slice() != [principal.clone()] {
                return Err("promotion needs an otherwise empty linear context".into());
            }
            Ok(vec![with(&Multiset::new(), &[a])])
        }
        URule::Quest { principal } => {
            let ULFormula::Quest(a) = principal else { return Err("principal is not a quest".into()) };
            Ok(vec![USequent { per: per.clone().with((**a).clone()), ctx: rest(principal)? }])
        }
        URule::Copy { formula } => {
            if !per.contains(formula) {
                return Err(format!("{formula} is not in the persistent context"));
            }
            Ok(vec![with(ctx, &[formula])])
        }
    }
}

/// Checks every node of a dyadic derivation; errors name the node path.
pub fn check_dyadic(u: &UDeriv) -> Result<(), String> {
    fn go(u: &UDeriv, path: &mut Vec<usize>) -> Result<(), String> {
        let at = render_path(path);
        let here = |m: String| format!("{}: {}: {}", at, u.rule.name(), m);
        let expected = expected_premises(u).map_err(here)?;
        if expected.len() != u.premises.len() {
            return Err(here(format!("expected {} premise(s)", expected.len())));
        }
        for (i, (p, s)) in u.premises.iter().zip(&expected).enumerate() {
            if &p.conclusion != s {
                return Err(here(format!("premise {i} concludes {} instead of {s}", p.conclusion)));
            }
            path.push(i);
            go(p, path)?;
            path.pop();
        }
        Ok(())
    }
    go(u, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::kernel::PosCtx;
    use crate::syntax::dual;

    fn a(x: &str) -> Atom {
        Atom::new(x).unwrap()
    }

    #[test]
    fn shifts_disappear() {
        let f: Formula = Pos::up(Neg::natom("b")).into();
        assert_eq!(erase_formula(&f), ULFormula::NAtom(a("b")));
        let t: Formula = corpus::tensor_up("a", "b").into();
        assert_eq!(
            erase_formula(&t),
            ULFormula::Tensor(Box::new(ULFormula::Atom(a("a"))), Box::new(ULFormula::NAtom(a("b"))))
        );
        let bang: Formula = Pos::bang(Neg::natom("a")).into();
        assert_eq!(erase_formula(&bang), ULFormula::Bang(Box::new(ULFormula::NAtom(a("a")))));
        assert_eq!(erase_formula(&dual(&t)), erase_formula(&t).neg());
    }

    #[test]
    fn axiom_erases_to_axiom() {
        let u = erase_derivation(&Derivation::ax(PosCtx::new(), "a")).unwrap();
        assert_eq!(u.rule, URule::Ax);
        assert_eq!(u.conclusion.ctx, vec![ULFormula::Atom(a("a")), ULFormula::NAtom(a("a"))].into());
        assert!(check_dyadic(&u).is_ok());
    }

    #[test]
    fn example1_erases_soundly() {
        let d = corpus::example1();
        let u = erase_derivation(&d).unwrap();
        assert!(check_dyadic(&u).is_ok(), "{}", u.render());
        assert_eq!(u.conclusion, erase_sequent(&d.conclusion));
    }

    #[test]
    fn cuts_are_refused() {
        assert!(erase_derivation(&corpus::bad_cut()).is_err());
    }

    #[test]
    fn checker_catches_a_wrong_axiom() {
        let mut u = erase_derivation(&Derivation::ax(PosCtx::new(), "a")).unwrap();
        u.conclusion.ctx = vec![ULFormula::Atom(a("a")), ULFormula::NAtom(a("b"))].into();
        assert!(check_dyadic(&u).is_err());
    }
}
