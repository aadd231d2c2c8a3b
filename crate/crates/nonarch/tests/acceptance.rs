//! Acceptance suite: one line per criterion, every tolerance pinned in the
//! library. Run with `cargo test --test acceptance -- --nocapture` to see
//! the lines.

use nonarch::config::ExperimentConfig;
use nonarch::suite::run_all;

#[test]
fn acceptance_criteria() {
    let cfg = ExperimentConfig::default();
    let results = run_all(&cfg);
    assert_eq!(results.len(), 9);
    let mut failed = Vec::new();
    for r in &results {
        let line = format!(
            "{} criterion {}: {} — {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail
        );
        println!("{line}");
        if !r.pass {
            failed.push(line);
        }
    }
    assert!(
        failed.is_empty(),
        "acceptance criteria failed:\n{}",
        failed.join("\n")
    );
}
