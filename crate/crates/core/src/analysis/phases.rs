use super::AnalysisError;
use crate::kernel::{check, foci, Derivation, Mode, Path, PosCtx, Rule, RuleName};
use serde::Serialize;

/// A focusing phase: the focused nodes from a decide up to the releases
/// that close it. A derivation whose root is focused also has an opening
/// phase with no decide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Phase {
    /// Path of the decide node, `None` for the opening phase.
    pub decide: Option<Path>,
    /// `Θ` plus the copies; empty for the opening phase.
    pub foci: PosCtx,
    /// Focused nodes of the phase, releases included.
    pub nodes: Vec<Path>,
    pub releases: Vec<Path>,
}

fn collect(d: &Derivation, path: &mut Path, phase: &mut Phase) {
    phase.nodes.push(path.clone());
    if d.name() == RuleName::Release {
        phase.releases.push(path.clone());
        return;
    }
    for (i, p) in d.premises.iter().enumerate() {
        if p.conclusion.is_focused() {
            path.push(i);
            collect(p, path, phase);
            path.pop();
        }
    }
}

/// Phases in pre-order of their decide nodes.
pub fn phases(d: &Derivation) -> Result<Vec<Phase>, AnalysisError> {
    let report = check(d, Mode::Experimental);
    if !report.is_ok() {
        return Err(AnalysisError::InvalidInput(format!("derivation does not check:\n{report}")));
    }
    let mut out = Vec::new();
    if d.conclusion.is_focused() {
        let mut phase = Phase { decide: None, foci: PosCtx::new(), nodes: vec![], releases: vec![] };
        collect(d, &mut Vec::new(), &mut phase);
        out.push(phase);
    }
    d.visit(&mut |path, n| {
        if let Rule::Decide { copies, theta } = &n.rule {
            let mut phase =
                Phase { decide: Some(path.to_vec()), foci: copies.union(theta), nodes: vec![], releases: vec![] };
            let mut p = path.to_vec();
            p.push(0);
            collect(&n.premises[0], &mut p, &mut phase);
            out.push(phase);
        }
    });
    Ok(out)
}

impl Phase {
    /// The foci as a focused context, for display.
    pub fn focus_items(&self) -> crate::kernel::FocCtx {
        foci(&self.foci)
    }
}
