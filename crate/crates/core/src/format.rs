//! Proof files.
//!
//! ```text
//! proof   ::= "(proof " sequent deriv ")"
//! sequent ::= "(inv (per " formula* ") (ctx " formula* "))"
//!           | "(foc (per " formula* ") (ctx " item* "))"
//! item    ::= formula | "(focus " formula ")"
//! deriv   ::= "(" rulename data* deriv* ")"
//! ```
//!
//! Only the root sequent is stored. Rule data refers to the conclusion
//! context by 0-based index into its canonical (sorted) order:
//!
//! | rule                                 | data                                         |
//! |--------------------------------------|----------------------------------------------|
//! | tensor                               | `(principal i) (left i*)`                    |
//! | plusL, plusR, par, with, quest       | `(principal i)`                              |
//! | decide                               | `(copies formula*) (theta i*)`               |
//! | cut, fcut                            | `(cutformula P) (left i*)`                   |
//! | cutBang, fcutBang                    | `(cutformula P)`                             |
//! | acut                                 | `(cutformula P) (left i*) (activated i*)`    |
//! | ax, one, bang, release, bot, top     | none                                         |
//!
//! `left` lists the conclusion items that belong to the first premise (the
//! principal focus of a tensor is never listed). For `acut`, `activated`
//! lists the conclusion foci `[P]` that stand for a passive `⇓P` of a premise.

use crate::kernel::{
    as_neg_ctx, schema, CheckOptions, Derivation, FocCtx, FocItem, NegCtx, PosCtx, Rule, RuleName, Sequent,
    ValidityReport, Violation,
};
use crate::syntax::{formula_from_sexp, neg_from_sexp, pos_from_sexp, Formula, Neg, ParseError, Pos, Sexp};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProofError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid proof:\n{0}")]
    Invalid(ValidityReport),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Rule data as it appears in a file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawData {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub principal: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub left: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub copies: Option<Vec<Pos>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cutformula: Option<Pos>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub activated: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDeriv {
    pub rule: RuleName,
    #[serde(flatten)]
    pub data: RawData,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub premises: Vec<RawDeriv>,
}

/// A proof file: root sequent plus the derivation skeleton with rule data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofFile {
    pub sequent: Sequent,
    pub deriv: RawDeriv,
}

// ---------------------------------------------------------------- sequents

fn expect_call<'a>(s: &'a Sexp, head: &str) -> Result<&'a [Sexp], ParseError> {
    match s.as_call() {
        Some((h, rest)) if h == head => Ok(rest),
        _ => Err(ParseError::syntax(s.pos(), format!("expected `({head} ...)`"))),
    }
}

fn item_from_sexp(s: &Sexp) -> Result<FocItem, ParseError> {
    if let Some(("focus", args)) = s.as_call() {
        return match args {
            [f] => Ok(FocItem::Focus(pos_from_sexp(f)?)),
            _ => Err(ParseError::syntax(s.pos(), "`focus` expects one formula")),
        };
    }
    Ok(FocItem::Passive(neg_from_sexp(s)?))
}

pub fn sequent_from_sexp(s: &Sexp) -> Result<Sequent, ParseError> {
    let (head, args) = s.as_call().ok_or_else(|| ParseError::syntax(s.pos(), "expected a sequent"))?;
    let [per, ctx] = args else {
        return Err(ParseError::syntax(s.pos(), "a sequent has a `per` and a `ctx` part"));
    };
    let per: PosCtx = expect_call(per, "per")?.iter().map(pos_from_sexp).collect::<Result<Vec<_>, _>>()?.into();
    let ctx = expect_call(ctx, "ctx")?;
    match head {
        "inv" => Ok(Sequent::inv(per, ctx.iter().map(neg_from_sexp).collect::<Result<Vec<_>, _>>()?.into())),
        "foc" => Ok(Sequent::foc(per, ctx.iter().map(item_from_sexp).collect::<Result<Vec<_>, _>>()?.into())),
        other => Err(ParseError::syntax(s.pos(), format!("unknown judgment `{other}`"))),
    }
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    sequent_from_sexp(&Sexp::read(text)?)
}

pub fn print_sequent(s: &Sequent) -> String {
    s.to_string()
}

// ------------------------------------------------------------ raw derivs

fn indices(args: &[Sexp]) -> Result<Vec<usize>, ParseError> {
    args.iter()
        .map(|a| {
            a.as_sym()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| ParseError::syntax(a.pos(), "expected an index"))
        })
        .collect()
}

fn raw_from_sexp(s: &Sexp) -> Result<RawDeriv, ParseError> {
    let (head, args) = s.as_call().ok_or_else(|| ParseError::syntax(s.pos(), "expected a derivation"))?;
    let rule =
        RuleName::from_name(head).ok_or_else(|| ParseError::syntax(s.pos(), format!("unknown rule `{head}`")))?;
    let mut data = RawData::default();
    let mut premises = Vec::new();
    for arg in args {
        let Some((key, vals)) = arg.as_call() else {
            return Err(ParseError::syntax(arg.pos(), "expected rule data or a premise"));
        };
        let dup = |present: bool| {
            if present {
                Err(ParseError::syntax(arg.pos(), format!("duplicate `{key}`")))
            } else {
                Ok(())
            }
        };
        if RuleName::from_name(key).is_some() {
            premises.push(raw_from_sexp(arg)?);
            continue;
        }
        if !premises.is_empty() {
            return Err(ParseError::syntax(arg.pos(), "rule data must precede premises"));
        }
        match key {
            "principal" => {
                dup(data.principal.is_some())?;
                match indices(vals)?.as_slice() {
                    [i] => data.principal = Some(*i),
                    _ => return Err(ParseError::syntax(arg.pos(), "`principal` expects one index")),
                }
            }
            "left" => {
                dup(data.left.is_some())?;
                data.left = Some(indices(vals)?);
            }
            "theta" => {
                dup(data.theta.is_some())?;
                data.theta = Some(indices(vals)?);
            }
            "activated" => {
                dup(data.activated.is_some())?;
                data.activated = Some(indices(vals)?);
            }
            "copies" => {
                dup(data.copies.is_some())?;
                data.copies = Some(vals.iter().map(pos_from_sexp).collect::<Result<_, _>>()?);
            }
            "cutformula" => {
                dup(data.cutformula.is_some())?;
                match vals {
                    [f] => data.cutformula = Some(pos_from_sexp(f)?),
                    _ => return Err(ParseError::syntax(arg.pos(), "`cutformula` expects one formula")),
                }
            }
            other => return Err(ParseError::syntax(arg.pos(), format!("unknown rule data `{other}`"))),
        }
    }
    Ok(RawDeriv { rule, data, premises })
}

pub fn parse_proof_file(text: &str) -> Result<ProofFile, ParseError> {
    let s = Sexp::read(text)?;
    let args = expect_call(&s, "proof")?;
    let [seq, deriv] = args else {
        return Err(ParseError::syntax(s.pos(), "`proof` expects a sequent and a derivation"));
    };
    Ok(ProofFile { sequent: sequent_from_sexp(seq)?, deriv: raw_from_sexp(deriv)? })
}

fn list(out: &mut String, key: &str, items: impl IntoIterator<Item = String>) {
    out.push_str(" (");
    out.push_str(key);
    for x in items {
        out.push(' ');
        out.push_str(&x);
    }
    out.push(')');
}

fn write_raw(r: &RawDeriv, depth: usize, out: &mut String) {
    out.push('(');
    out.push_str(r.rule.as_str());
    let d = &r.data;
    if let Some(i) = d.principal {
        list(out, "principal", [i.to_string()]);
    }
    if let Some(f) = &d.cutformula {
        list(out, "cutformula", [f.to_string()]);
    }
    if let Some(cs) = &d.copies {
        list(out, "copies", cs.iter().map(Pos::to_string));
    }
    if let Some(t) = &d.theta {
        list(out, "theta", t.iter().map(usize::to_string));
    }
    if let Some(l) = &d.left {
        list(out, "left", l.iter().map(usize::to_string));
    }
    if let Some(a) = &d.activated {
        list(out, "activated", a.iter().map(usize::to_string));
    }
    for p in &r.premises {
        out.push('\n');
        out.push_str(&"  ".repeat(depth + 1));
        write_raw(p, depth + 1, out);
    }
    out.push(')');
}

pub fn print_proof_file(p: &ProofFile) -> String {
    let mut out = format!("(proof {}\n  ", p.sequent);
    write_raw(&p.deriv, 1, &mut out);
    out.push_str(")\n");
    out
}

// ---------------------------------------------------------------- encode

/// Assigns each wanted item an unused index of an equal member of `ctx`.
fn pick<T: PartialEq>(ctx: &[T], wanted: impl IntoIterator<Item = T>, used: &mut [bool]) -> Vec<usize> {
    let mut out = Vec::new();
    for w in wanted {
        let i = (0..ctx.len()).find(|&i| !used[i] && ctx[i] == w).expect("item occurs in conclusion");
        used[i] = true;
        out.push(i);
    }
    out.sort_unstable();
    out
}

fn foc_ctx(s: &Sequent) -> &[FocItem] {
    s.foc_ctx().map(|c| c.as_slice()).unwrap_or(&[])
}

fn inv_ctx(s: &Sequent) -> &[Neg] {
    s.inv_ctx().map(|c| c.as_slice()).unwrap_or(&[])
}

fn encode(d: &Derivation) -> RawDeriv {
    let concl = &d.conclusion;
    let mut data = RawData::default();
    match &d.rule {
        Rule::Tensor { principal, left } => {
            let ctx = foc_ctx(concl);
            let mut used = vec![false; ctx.len()];
            data.principal = pick(ctx, [FocItem::Focus(principal.clone())], &mut used).first().copied();
            data.left = Some(pick(ctx, left.iter().cloned(), &mut used));
        }
        Rule::PlusL { principal } | Rule::PlusR { principal } => {
            let ctx = foc_ctx(concl);
            data.principal =
                pick(ctx, [FocItem::Focus(principal.clone())], &mut vec![false; ctx.len()]).first().copied();
        }
        Rule::Par { principal } | Rule::With { principal } | Rule::Quest { principal } => {
            let ctx = inv_ctx(concl);
            data.principal = pick(ctx, [principal.clone()], &mut vec![false; ctx.len()]).first().copied();
        }
        Rule::Decide { copies, theta } => {
            let ctx = inv_ctx(concl);
            data.copies = Some(copies.iter().cloned().collect());
            data.theta = Some(pick(ctx, theta.iter().map(|p| Neg::down(p.clone())), &mut vec![false; ctx.len()]));
        }
        Rule::Cut { formula, left } | Rule::Fcut { formula, left } => {
            data.cutformula = Some(formula.clone());
            data.left = Some(match concl {
                Sequent::Foc { ctx, .. } => pick(ctx.as_slice(), left.iter().cloned(), &mut vec![false; ctx.len()]),
                Sequent::Inv { ctx, .. } => {
                    let psi = as_neg_ctx(left).expect("inversion cut has a focus-free Ψ");
                    pick(ctx.as_slice(), psi.iter().cloned(), &mut vec![false; ctx.len()])
                }
            });
        }
        Rule::CutBang { formula } | Rule::FcutBang { formula } => data.cutformula = Some(formula.clone()),
        Rule::Acut { formula, psi, gamma } => {
            data.cutformula = Some(formula.clone());
            let (left, activated) = acut_indices(foc_ctx(concl), psi, gamma);
            data.left = Some(left);
            data.activated = Some(activated);
        }
        Rule::Ax | Rule::One | Rule::Bang | Rule::Release | Rule::Bot | Rule::Top => {}
    }
    RawDeriv { rule: d.name(), data, premises: d.premises.iter().map(encode).collect() }
}

fn acut_indices(xi: &[FocItem], psi: &FocCtx, gamma: &NegCtx) -> (Vec<usize>, Vec<usize>) {
    let mut used = vec![false; xi.len()];
    let mut left = Vec::new();
    let mut activated = Vec::new();
    let take = |want: &FocItem, used: &mut [bool]| (0..xi.len()).find(|&i| !used[i] && &xi[i] == want);
    // Foci of Ψ and passives that are not downshifts match exactly.
    let mut downs: Vec<(bool, Pos)> = Vec::new();
    for item in psi {
        match item {
            FocItem::Passive(Neg::Down(p)) => downs.push((true, (**p).clone())),
            _ => {
                let i = take(item, &mut used).expect("activation witness");
                used[i] = true;
                left.push(i);
            }
        }
    }
    for n in gamma {
        match n {
            Neg::Down(p) => downs.push((false, (**p).clone())),
            _ => {
                let i = take(&FocItem::Passive(n.clone()), &mut used).expect("activation witness");
                used[i] = true;
            }
        }
    }
    // A passive `⇓P` stays passive or becomes `[P]`.
    for (from_left, p) in downs {
        let i = if let Some(i) = take(&FocItem::Passive(Neg::down(p.clone())), &mut used) {
            i
        } else {
            let i = take(&FocItem::Focus(p), &mut used).expect("activation witness");
            activated.push(i);
            i
        };
        used[i] = true;
        if from_left {
            left.push(i);
        }
    }
    left.sort_unstable();
    activated.sort_unstable();
    (left, activated)
}

pub fn to_proof_file(d: &Derivation) -> ProofFile {
    ProofFile { sequent: d.conclusion.clone(), deriv: encode(d) }
}

pub fn print_proof(d: &Derivation) -> String {
    print_proof_file(&to_proof_file(d))
}

pub fn proof_to_json(d: &Derivation) -> serde_json::Value {
    serde_json::to_value(to_proof_file(d)).expect("proof files serialize")
}

// ---------------------------------------------------------------- decode

struct Decoder {
    violations: Vec<Violation>,
}

impl Decoder {
    fn fail<T>(&mut self, path: &[usize], rule: RuleName, clause: impl Into<String>) -> Option<T> {
        self.violations.push(Violation { path: path.to_vec(), rule, clause: clause.into() });
        None
    }

    fn select<T: Clone>(&mut self, ctx: &[T], idx: &[usize], path: &[usize], rule: RuleName) -> Option<Vec<T>> {
        let mut seen = vec![false; ctx.len()];
        let mut out = Vec::new();
        for &i in idx {
            if i >= ctx.len() || seen[i] {
                self.fail::<()>(path, rule, format!("rule data index {i} is out of range or repeated"));
                return None;
            }
            seen[i] = true;
            out.push(ctx[i].clone());
        }
        Some(out)
    }

    fn rule_of(&mut self, raw: &RawDeriv, concl: &Sequent, path: &[usize]) -> Option<Rule> {
        let name = raw.rule;
        let d = &raw.data;
        let missing = |what: &str| format!("missing rule data `{what}`");
        let principal_foc = |this: &mut Self| -> Option<Pos> {
            let i = d.principal.or_else(|| this.fail(path, name, missing("principal")))?;
            match foc_ctx(concl).get(i) {
                Some(FocItem::Focus(p)) => Some(p.clone()),
                _ => this.fail(path, name, "principal index does not name a focus"),
            }
        };
        let principal_neg = |this: &mut Self| -> Option<Neg> {
            let i = d.principal.or_else(|| this.fail(path, name, missing("principal")))?;
            match inv_ctx(concl).get(i) {
                Some(n) => Some(n.clone()),
                None => this.fail(path, name, "principal index out of range"),
            }
        };
        let cutformula =
            |this: &mut Self| d.cutformula.clone().or_else(|| this.fail(path, name, missing("cutformula")));
        Some(match name {
            RuleName::Ax => Rule::Ax,
            RuleName::One => Rule::One,
            RuleName::Bang => Rule::Bang,
            RuleName::Release => Rule::Release,
            RuleName::Bot => Rule::Bot,
            RuleName::Top => Rule::Top,
            RuleName::Tensor => {
                let principal = principal_foc(self)?;
                let ctx = foc_ctx(concl);
                let left_idx = d.left.clone().unwrap_or_default();
                if left_idx.contains(&d.principal.unwrap_or(usize::MAX)) {
                    return self.fail(path, name, "the principal focus cannot be listed in `left`");
                }
                let left = self.select(ctx, &left_idx, path, name)?;
                Rule::Tensor { principal, left: left.into() }
            }
            RuleName::PlusL => Rule::PlusL { principal: principal_foc(self)? },
            RuleName::PlusR => Rule::PlusR { principal: principal_foc(self)? },
            RuleName::Par => Rule::Par { principal: principal_neg(self)? },
            RuleName::With => Rule::With { principal: principal_neg(self)? },
            RuleName::Quest => Rule::Quest { principal: principal_neg(self)? },
            RuleName::Decide => {
                let ctx = inv_ctx(concl);
                let chosen = self.select(ctx, d.theta.as_deref().unwrap_or(&[]), path, name)?;
                let mut theta = PosCtx::new();
                for n in chosen {
                    match n {
                        Neg::Down(p) => theta.insert(*p),
                        _ => return self.fail(path, name, "Θ index does not name a ⇓-formula"),
                    }
                }
                Rule::Decide { copies: d.copies.clone().unwrap_or_default().into(), theta }
            }
            RuleName::Cut | RuleName::Fcut => {
                let formula = cutformula(self)?;
                let idx = d.left.clone().unwrap_or_default();
                let left: FocCtx = match concl {
                    Sequent::Foc { ctx, .. } => self.select(ctx.as_slice(), &idx, path, name)?.into(),
                    Sequent::Inv { ctx, .. } => {
                        let ns = self.select(ctx.as_slice(), &idx, path, name)?;
                        ns.into_iter().map(FocItem::Passive).collect()
                    }
                };
                if name == RuleName::Cut {
                    Rule::Cut { formula, left }
                } else {
                    Rule::Fcut { formula, left }
                }
            }
            RuleName::CutBang => Rule::CutBang { formula: cutformula(self)? },
            RuleName::FcutBang => Rule::FcutBang { formula: cutformula(self)? },
            RuleName::Acut => {
                let formula = cutformula(self)?;
                let ctx = foc_ctx(concl);
                let left_idx = d.left.clone().unwrap_or_default();
                let act_idx = d.activated.clone().unwrap_or_default();
                self.select(ctx, &left_idx, path, name)?;
                self.select(ctx, &act_idx, path, name)?;
                let mut psi = FocCtx::new();
                let mut gamma = NegCtx::new();
                for (i, item) in ctx.iter().enumerate() {
                    let source = match item {
                        FocItem::Focus(p) if act_idx.contains(&i) => FocItem::Passive(Neg::down(p.clone())),
                        _ if act_idx.contains(&i) => return self.fail(path, name, "only foci can be activated"),
                        other => other.clone(),
                    };
                    if left_idx.contains(&i) {
                        psi.insert(source);
                    } else {
                        match source {
                            FocItem::Passive(n) => gamma.insert(n),
                            FocItem::Focus(_) => {
                                return self.fail(path, name, "the inversion premise cannot hold foci")
                            }
                        }
                    }
                }
                Rule::Acut { formula, psi, gamma }
            }
        })
    }

    fn build(&mut self, raw: &RawDeriv, concl: Sequent, path: &mut Vec<usize>) -> Option<Derivation> {
        let rule = self.rule_of(raw, &concl, path)?;
        if raw.premises.len() != raw.rule.arity() {
            return self.fail(
                path,
                raw.rule,
                format!("expected {} premise(s), found {}", raw.rule.arity(), raw.premises.len()),
            );
        }
        let sch = schema(&rule, &concl, CheckOptions::default(), path.is_empty());
        let Some(expected) = sch.premises else {
            for c in sch.clauses {
                self.fail::<()>(path, raw.rule, c);
            }
            return None;
        };
        let mut premises = Vec::with_capacity(expected.len());
        for (i, (sub, seq)) in raw.premises.iter().zip(expected).enumerate() {
            path.push(i);
            let p = self.build(sub, seq, path);
            path.pop();
            premises.push(p?);
        }
        Some(Derivation { rule, conclusion: concl, premises })
    }
}

/// Rebuilds the full derivation, computing every premise sequent. Fails
/// with violations when a rule instance cannot be read at all; side
/// conditions are left to the checker.
pub fn decode(file: &ProofFile) -> Result<Derivation, ProofError> {
    let mut dec = Decoder { violations: Vec::new() };
    match dec.build(&file.deriv, file.sequent.clone(), &mut Vec::new()) {
        Some(d) => Ok(d),
        None => Err(ProofError::Invalid(ValidityReport { violations: dec.violations })),
    }
}

pub fn parse_proof(text: &str) -> Result<Derivation, ProofError> {
    decode(&parse_proof_file(text)?)
}

pub fn proof_from_json(text: &str) -> Result<Derivation, ProofError> {
    let file: ProofFile = serde_json::from_str(text)?;
    decode(&file)
}

/// Parses a bare formula, sequent or proof, whichever the text holds.
pub fn parse_any_formula(text: &str) -> Result<Formula, ParseError> {
    formula_from_sexp(&Sexp::read(text)?)
}
