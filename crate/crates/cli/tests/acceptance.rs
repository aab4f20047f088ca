//! Runs every acceptance criterion and prints one pass/fail line for each.
//! Exits nonzero if any criterion fails or the suite takes two minutes or
//! more.

use arith_lg_cli::acceptance;
use arith_lg_core::EnumConfig;

fn main() {
    let summary = acceptance::run_all(&EnumConfig::default());
    println!("\nrunning acceptance suite");
    println!("{}", summary.lines());
    if !summary.passed {
        std::process::exit(1);
    }
}
