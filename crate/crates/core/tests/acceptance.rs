//! One pass/fail line per acceptance criterion. Runs without the libtest harness so the
//! lines always reach the output; exits non-zero when a criterion fails.

use fnx::suite::{run_all, CRITERIA};

fn main() {
    let seed = std::env::var("FNX_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let results = run_all(seed);
    assert_eq!(results.len(), CRITERIA.len());
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed (seed {seed})", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
