//! The proof files under `data/` match the built-in corpus.
//! Run with `LLMFOC_BLESS=1` to rewrite them.

use llmfoc::corpus;
use llmfoc::format::{parse_proof, print_proof};
use llmfoc::kernel::{check, Derivation, Mode};
use std::path::PathBuf;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn golden(name: &str, d: &Derivation) -> String {
    let text = print_proof(d);
    let path = data(name);
    if std::env::var_os("LLMFOC_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(on_disk, text, "{name} is stale");
    on_disk
}

#[test]
fn example1_file() {
    let text = golden("example1.llm", &corpus::example1());
    let d = parse_proof(&text).unwrap();
    assert_eq!(d, corpus::example1());
    assert!(check(&d, Mode::Strict).is_ok());
}

#[test]
fn badcut_file() {
    let text = golden("badcut.llm", &corpus::bad_cut());
    assert_eq!(parse_proof(&text).unwrap(), corpus::bad_cut());
}

#[test]
fn empty_release_file() {
    let text = golden("empty-release.llm", &corpus::release_top(true));
    let r = check(&parse_proof(&text).unwrap(), Mode::Strict);
    assert!(r.has("release: Δ must be non-empty"), "{r}");
}

#[test]
fn empty_decide_file() {
    let text = golden("empty-decide.llm", &corpus::decide_on_atom(true));
    let r = check(&parse_proof(&text).unwrap(), Mode::Strict);
    assert!(r.has("decide: Per^{vec n} or Θ must be non-empty"), "{r}");
}
