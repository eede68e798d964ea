//! `llmfoc`: batch front end for the proof kernel.
//!
//! Exit status: 0 on success, 1 for a negative answer (invalid proof, no
//! proof found, non-maximal under `--assert-maximal`), 2 for usage and
//! parse errors.

use clap::{Args, Parser, Subcommand};
use llmfoc::analysis::{check_dyadic, check_maximal, erase_derivation, phases, Verdict};
use llmfoc::format::{parse_proof, parse_sequent, print_proof, proof_from_json, proof_to_json, ProofError};
use llmfoc::kernel::{check, dsize, render_path, Derivation, Mode};
use llmfoc::rewrite::{decompose, lower_deriv, normalize, Flavor, NormalizeOptions, RewriteError};
use llmfoc::search::{enumerate_status, prove_outcome, SearchBudget};
use serde_json::{json, Value};
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "llmfoc", version, about = "Multifocused linear logic proof kernel")]
struct Cli {
    #[command(flatten)]
    out: OutputOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result to FILE instead of stdout.
    #[arg(short = 'o', long = "output", value_name = "FILE", global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check proof files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also admit the activating cut.
        #[arg(long)]
        experimental: bool,
    },
    /// Eliminate all cuts.
    Cutelim {
        file: PathBuf,
        #[arg(long, conflicts_with = "flexible")]
        strict: bool,
        #[arg(long)]
        flexible: bool,
        /// Print one line per reduction step.
        #[arg(long)]
        trace: bool,
        /// Recheck the whole derivation after every step.
        #[arg(long)]
        paranoid: bool,
    },
    /// Split a focused proof into a spent core and a replayable suffix.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        focus: usize,
    },
    /// Invert the spent foci `[⇑N]` beside the focus at `--focus`.
    Lower {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        focus: usize,
    },
    /// Erase to the unfocused dyadic calculus.
    Erase { file: PathBuf },
    /// List focusing phases.
    Phases { file: PathBuf },
    /// Probe every decide for a larger focus selection.
    Maximal {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Exit with status 1 unless every decide is maximal.
        #[arg(long)]
        assert_maximal: bool,
    },
    /// Bounded proof search for a sequent.
    Search {
        sequent: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// List every proof within the budget.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long, default_value_t = 2)]
        copy_cap: usize,
    },
}

/// Result of one command: output text or JSON, and the exit status.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, code: 0 }
    }

    fn negative(text: String, json: Value) -> Self {
        Outcome { text, json, code: 1 }
    }
}

enum Failure {
    Usage(String),
    Negative(String),
}

impl From<ProofError> for Failure {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::Invalid(r) => Failure::Negative(r.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Self {
        Failure::Negative(e.to_string())
    }
}

fn color_enabled(opts: &OutputOpts) -> bool {
    match std::env::var("LLMFOC_COLOR").as_deref() {
        Ok("0") => false,
        Ok("1") => true,
        _ => opts.output.is_none() && std::io::stdout().is_terminal(),
    }
}

fn paint(on: bool, code: &str, s: &str) -> String {
    if on {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Reads a proof in either the s-expression or the JSON format.
fn load(path: &Path) -> Result<Derivation, Failure> {
    let text = read_text(path)?;
    let d = if text.trim_start().starts_with('{') { proof_from_json(&text) } else { parse_proof(&text) };
    d.map_err(|e| match e {
        ProofError::Invalid(r) => Failure::Negative(format!("{}:\n{r}", path.display())),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })
}

fn run_check(files: &[PathBuf], experimental: bool, color: bool) -> Result<Outcome, Failure> {
    let mode = if experimental { Mode::Experimental } else { Mode::Strict };
    let results: Vec<Result<llmfoc::kernel::ValidityReport, Failure>> = std::thread::scope(|s| {
        let hs: Vec<_> = files
            .iter()
            .map(|f| {
                s.spawn(move || {
                    let text = read_text(f)?;
                    let parsed =
                        if text.trim_start().starts_with('{') { proof_from_json(&text) } else { parse_proof(&text) };
                    match parsed {
                        Ok(d) => Ok(check(&d, mode)),
                        Err(ProofError::Invalid(r)) => Ok(r),
                        Err(e) => Err(Failure::Usage(format!("{}: {e}", f.display()))),
                    }
                })
            })
            .collect();
        hs.into_iter().map(|h| h.join().expect("check thread")).collect()
    });
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut all_ok = true;
    for (f, r) in files.iter().zip(results) {
        let r = r?;
        all_ok &= r.is_ok();
        let body = if r.is_ok() { paint(color, "32", "ok") } else { paint(color, "31", &r.to_string()) };
        if files.len() > 1 {
            text.push_str(&format!("{}: ", f.display()));
            if !r.is_ok() {
                text.push('\n');
            }
        }
        text.push_str(&body);
        text.push('\n');
        entries.push(json!({ "file": f.display().to_string(), "valid": r.is_ok(), "violations": r.violations }));
    }
    let json = if entries.len() == 1 { entries.pop().unwrap() } else { Value::Array(entries) };
    Ok(if all_ok { Outcome::ok(text, json) } else { Outcome::negative(text, json) })
}

fn run_cutelim(file: &Path, strict: bool, trace: bool, paranoid: bool) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let flavor = if strict { Flavor::Strict } else { Flavor::Flexible };
    let (out, tr) = normalize(&d, NormalizeOptions { flavor, paranoid, trace: false })?;
    let mut text = print_proof(&out);
    if trace {
        text.push_str(&tr.to_string());
    }
    let mut json = json!({ "proof": proof_to_json(&out), "coerced": tr.coerced });
    if trace {
        json["trace"] = serde_json::to_value(&tr.steps).expect("trace json");
    }
    Ok(Outcome::ok(text, json))
}

fn run_decompose(file: &Path, focus: usize) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let r = decompose(&d, focus)?;
    let (total, core, steps) = (dsize(&d), dsize(&r.core), r.suffix.rule_count());
    let holds = core + steps == total;
    let mut text = print_proof(&r.core);
    text.push_str(&format!("sigma: {}\n", r.sigma.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")));
    text.push_str(&format!("suffix: {} step(s)\n", r.suffix.steps.len()));
    for s in &r.suffix.steps {
        let line = match s {
            llmfoc::rewrite::SuffixStep::Tensor { principal, hole, other } => {
                format!("  tensor {principal} hole={hole:?} other-size={}\n", dsize(other))
            }
            llmfoc::rewrite::SuffixStep::Plus { principal, hole } => format!("  plus {principal} hole={hole:?}\n"),
        };
        text.push_str(&line.to_lowercase());
    }
    text.push_str(&format!(
        "size: core {core} + suffix {steps} = {} (input {total}) {}\n",
        core + steps,
        if holds { "ok" } else { "MISMATCH" }
    ));
    let json = json!({
        "core": proof_to_json(&r.core),
        "sigma": r.sigma,
        "suffix": r.suffix,
        "size": { "input": total, "core": core, "suffix": steps, "exact": holds },
    });
    Ok(if holds { Outcome::ok(text, json) } else { Outcome::negative(text, json) })
}

fn run_lower(file: &Path, focus: usize) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let out = lower_deriv(&d, focus)?;
    Ok(Outcome::ok(print_proof(&out), json!({ "proof": proof_to_json(&out) })))
}

fn run_erase(file: &Path) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let u = erase_derivation(&d).map_err(|e| Failure::Negative(e.to_string()))?;
    let verdict = check_dyadic(&u);
    let mut text = u.render();
    text.push_str(&match &verdict {
        Ok(()) => "dyadic: ok\n".to_string(),
        Err(e) => format!("dyadic: {e}\n"),
    });
    let json = json!({ "proof": u, "valid": verdict.is_ok(), "error": verdict.as_ref().err() });
    Ok(if verdict.is_ok() { Outcome::ok(text, json) } else { Outcome::negative(text, json) })
}

fn run_phases(file: &Path) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let ps = phases(&d).map_err(|e| Failure::Negative(e.to_string()))?;
    let mut text = format!("phases: {}\n", ps.len());
    for (i, p) in ps.iter().enumerate() {
        let at = p.decide.as_ref().map_or("root (open)".to_string(), |path| format!("decide@{}", render_path(path)));
        let foci: Vec<String> = p.foci.iter().map(|f| f.to_string()).collect();
        let rel: Vec<String> = p.releases.iter().map(|r| render_path(r)).collect();
        text.push_str(&format!(
            "phase {i}: {at} foci={} [{}] nodes={} releases=[{}]\n",
            p.foci.len(),
            foci.join(" "),
            p.nodes.len(),
            rel.join(" ")
        ));
    }
    Ok(Outcome::ok(text, json!({ "phases": ps })))
}

fn run_maximal(file: &Path, depth: usize, assert_maximal: bool) -> Result<Outcome, Failure> {
    let d = load(file)?;
    let r = check_maximal(&d, depth).map_err(|e| Failure::Negative(e.to_string()))?;
    let mut nodes = Vec::new();
    for n in &r.nodes {
        let mut v = json!({ "path": render_path(&n.path) });
        match &n.verdict {
            Verdict::Maximal => v["verdict"] = json!("maximal"),
            Verdict::DepthExhausted => v["verdict"] = json!("depth-exhausted"),
            Verdict::Extendable { formula, witness } => {
                v["verdict"] = json!("extendable");
                v["formula"] = json!(formula.to_string());
                v["witness"] = proof_to_json(witness);
            }
        }
        nodes.push(v);
    }
    let json = json!({ "depth": depth, "all_maximal": r.all_maximal(), "nodes": nodes });
    let text = r.to_string();
    Ok(if assert_maximal && !r.all_maximal() { Outcome::negative(text, json) } else { Outcome::ok(text, json) })
}

fn run_search(sequent: &str, budget: SearchBudget, all: bool) -> Result<Outcome, Failure> {
    let s = parse_sequent(sequent).map_err(|e| Failure::Usage(format!("sequent: {e}")))?;
    if !s.is_focus_viable() {
        return Err(Failure::Usage(format!("sequent: focused sequent without foci: {s}")));
    }
    if all {
        let e = enumerate_status(&s, budget).map_err(|e| Failure::Usage(e.to_string()))?;
        let text: String = e.proofs.iter().map(print_proof).collect::<Vec<_>>().join("\n");
        let mut text = text;
        text.push_str(&format!("proofs: {}{}\n", e.proofs.len(), if e.limit_hit { " (limit reached)" } else { "" }));
        let json = json!({
            "proofs": e.proofs.iter().map(proof_to_json).collect::<Vec<_>>(),
            "limit_hit": e.limit_hit,
        });
        return Ok(if e.proofs.is_empty() { Outcome::negative(text, json) } else { Outcome::ok(text, json) });
    }
    let out = prove_outcome(&s, budget);
    Ok(match out.proof {
        Some(p) => Outcome::ok(print_proof(&p), json!({ "proof": proof_to_json(&p) })),
        None => {
            let why = if out.truncated { "no proof found within depth" } else { "no proof exists" };
            Outcome::negative(format!("{why}\n"), json!({ "proof": null, "truncated": out.truncated }))
        }
    })
}

fn dispatch(cli: &Cli, color: bool) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { files, experimental } => run_check(files, *experimental, color),
        Command::Cutelim { file, strict, trace, paranoid, .. } => run_cutelim(file, *strict, *trace, *paranoid),
        Command::Decompose { file, focus } => run_decompose(file, *focus),
        Command::Lower { file, focus } => run_lower(file, *focus),
        Command::Erase { file } => run_erase(file),
        Command::Phases { file } => run_phases(file),
        Command::Maximal { file, depth, assert_maximal } => run_maximal(file, *depth, *assert_maximal),
        Command::Search { sequent, depth, all, limit, copy_cap } => {
            run_search(sequent, SearchBudget { depth: *depth, limit: *limit, copy_cap: *copy_cap }, *all)
        }
    }
}

fn emit(opts: &OutputOpts, body: &str) -> Result<(), String> {
    match &opts.output {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let color = !cli.out.json && color_enabled(&cli.out);
    let outcome = match dispatch(&cli, color) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Negative(msg)) => {
            let msg = if msg.ends_with('\n') { msg } else { format!("{msg}\n") };
            Outcome::negative(paint(color, "31", &msg), json!({ "error": msg.trim_end() }))
        }
    };
    let body = if cli.out.json {
        let mut s = serde_json::to_string_pretty(&outcome.json).expect("json");
        s.push('\n');
        s
    } else {
        outcome.text
    };
    if let Err(e) = emit(&cli.out, &body) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code)
}
