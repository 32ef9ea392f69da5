//! Golden-file corpus shared by the golden test and the acceptance runner.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use orbicalc_cli::{parse, run, Outcome, SpecDocument};

pub const BLESS_VAR: &str = "ORBICALC_BLESS";

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Case names, one per `.args` file, sorted.
pub fn cases() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(golden_dir())
        .expect("golden dir")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "args").then(|| path.file_stem()?.to_str().map(String::from))?
        })
        .collect();
    names.sort();
    names
}

/// Spec files in the corpus, sorted.
pub fn spec_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(golden_dir())
        .expect("golden dir")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "orb"))
        .collect();
    files.sort();
    files
}

/// Runs one case with `--file` resolved inside the golden dir.
pub fn run_case(name: &str) -> Outcome {
    let dir = golden_dir();
    let line = fs::read_to_string(dir.join(format!("{name}.args"))).expect("args file");
    let mut args = vec!["orbicalc".to_string()];
    let mut words = line.split_whitespace();
    while let Some(w) = words.next() {
        args.push(w.to_string());
        if w == "--file" || w == "-f" {
            let file = words.next().expect("--file value");
            args.push(dir.join(file).display().to_string());
        }
    }
    run(args)
}

/// Stdout, then stderr, then a trailer for nonzero exits; absolute golden
/// paths are shortened to bare file names.
pub fn render(out: &Outcome) -> String {
    let prefix = format!("{}/", golden_dir().display());
    let mut s = out.stdout.replace(&prefix, "");
    s.push_str(&out.stderr.replace(&prefix, ""));
    if out.code != 0 {
        s.push_str(&format!("[exit {}]\n", out.code));
    }
    s
}

/// Compares every case against its `.out` file, or rewrites the files when
/// blessing. Returns the names of mismatching cases.
pub fn check_all() -> Vec<String> {
    let bless = std::env::var_os(BLESS_VAR).is_some();
    let mut failed = Vec::new();
    for name in cases() {
        let actual = render(&run_case(&name));
        let path = golden_dir().join(format!("{name}.out"));
        if bless {
            fs::write(&path, &actual).expect("write golden");
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(expected) if expected == actual => {}
            _ => failed.push(name),
        }
    }
    failed
}

/// Parses, prints and reparses a spec file, returning both documents.
pub fn round_trip(path: &Path) -> (SpecDocument, SpecDocument, String) {
    let src = fs::read_to_string(path).expect("spec file");
    let first = parse(&src).unwrap_or_else(|d| panic!("{}: {d:?}", path.display()));
    let printed = first.to_string();
    let second = parse(&printed).unwrap_or_else(|d| panic!("reparse {}: {d:?}\n{printed}", path.display()));
    (first, second, printed)
}

/// Spec files expected to parse cleanly.
pub fn valid_spec_files() -> Vec<PathBuf> {
    spec_files()
        .into_iter()
        .filter(|p| p.file_stem().is_some_and(|s| s != "bad"))
        .collect()
}
