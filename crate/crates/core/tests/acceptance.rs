//! Reference criteria 1–12. Runs without the libtest harness so that every
//! `criterion N PASS|FAIL` line is printed; exits nonzero if any fails.

use std::process::ExitCode;

use warpcmp::selftest::{run_criterion, write_artifacts, CRITERION_COUNT};

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut failed = Vec::new();
    for id in 1..=CRITERION_COUNT {
        let r = run_criterion(id, &dir.path().join(format!("c{id}")));
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    // Artifacts written by a separate call must match the criterion-12 run byte for byte.
    let again = write_artifacts(&dir.path().join("again")).expect("artifacts");
    for path in &again {
        let first = dir.path().join("c12").join(path.file_name().unwrap());
        if std::fs::read(&first).ok() != std::fs::read(path).ok() {
            println!("artifact {} differs between runs", first.display());
            failed.push(12);
        }
    }
    failed.dedup();
    if failed.is_empty() {
        println!("acceptance: all {CRITERION_COUNT} criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} failed");
        ExitCode::FAILURE
    }
}
