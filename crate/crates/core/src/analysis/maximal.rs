use super::AnalysisError;
use crate::kernel::{check, render_path, Derivation, FocItem, Mode, Path, Rule, Sequent};
use crate::search::{prove_outcome, SearchBudget};
use crate::syntax::{Neg, Pos};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Maximal,
    /// Focusing `formula` as well still completes; `witness` is the
    /// replacement decide, with the same conclusion as the original.
    Extendable {
        formula: Pos,
        witness: Derivation,
    },
    DepthExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeVerdict {
    pub path: Path,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl fmt::Display for NodeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "decide@{}: ", render_path(&self.path))?;
        match &self.verdict {
            Verdict::Maximal => f.write_str("maximal"),
            Verdict::Extendable { formula, .. } => write!(f, "extendable({formula})"),
            Verdict::DepthExhausted => f.write_str("depth-exhausted"),
        }
    }
}

/// Per-decide maximality within a search depth.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    pub nodes: Vec<NodeVerdict>,
}

impl MaximalityReport {
    pub fn all_maximal(&self) -> bool {
        self.nodes.iter().all(|n| n.verdict == Verdict::Maximal)
    }

    pub fn extendable(&self) -> impl Iterator<Item = &NodeVerdict> {
        self.nodes.iter().filter(|n| matches!(n.verdict, Verdict::Extendable { .. }))
    }
}

impl fmt::Display for MaximalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            writeln!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Extra foci a decide could have picked: a `⇓X` it left passive, or one
/// more copy of a persistent formula (flagged `true`).
fn candidates(premise: &Sequent) -> Vec<(Pos, bool, Sequent)> {
    let Sequent::Foc { per, ctx } = premise else { return vec![] };
    let mut out = Vec::new();
    for item in ctx.distinct() {
        if let FocItem::Passive(Neg::Down(x)) = item {
            let ext = ctx.without(item).expect("member").with(FocItem::Focus((**x).clone()));
            out.push(((**x).clone(), false, Sequent::foc(per.clone(), ext)));
        }
    }
    for y in per.distinct() {
        out.push((y.clone(), true, Sequent::foc(per.clone(), ctx.clone().with(FocItem::Focus(y.clone())))));
    }
    out
}

fn probe(node: &Derivation, depth: usize) -> Verdict {
    let Rule::Decide { copies, .. } = &node.rule else { unreachable!("decide nodes only") };
    let mut truncated = false;
    for (x, is_copy, ext) in candidates(&node.premises[0].conclusion) {
        let out = prove_outcome(&ext, SearchBudget { depth, ..SearchBudget::default() });
        truncated |= out.truncated;
        if let Some(p) = out.proof {
            let mut copies = copies.clone();
            if is_copy {
                copies.insert(x.clone());
            }
            let witness = Derivation::decide(p, &copies).expect("extended decide");
            debug_assert_eq!(witness.conclusion, node.conclusion);
            return Verdict::Extendable { formula: x, witness };
        }
    }
    if truncated {
        Verdict::DepthExhausted
    } else {
        Verdict::Maximal
    }
}

/// Probes every decide node of a checked cut-free derivation.
pub fn check_maximal(d: &Derivation, depth: usize) -> Result<MaximalityReport, AnalysisError> {
    if !d.is_cut_free() {
        return Err(AnalysisError::InvalidInput("maximality needs a cut-free derivation".into()));
    }
    let report = check(d, Mode::Strict);
    if !report.is_ok() {
        return Err(AnalysisError::InvalidInput(format!("derivation does not check:\n{report}")));
    }
    let mut decides: Vec<(Path, &Derivation)> = Vec::new();
    d.visit(&mut |path, n| {
        if n.name() == crate::kernel::RuleName::Decide {
            decides.push((path.to_vec(), n));
        }
    });
    let verdicts: Vec<Verdict> = std::thread::scope(|s| {
        let handles: Vec<_> = decides.iter().map(|(_, n)| s.spawn(move || probe(n, depth))).collect();
        handles.into_iter().map(|h| h.join().expect("probe thread")).collect()
    });
    let nodes = decides.into_iter().zip(verdicts).map(|((path, _), verdict)| NodeVerdict { path, verdict }).collect();
    Ok(MaximalityReport { nodes })
}
