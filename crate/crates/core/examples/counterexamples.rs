//! Replays the fixed 2×2 counterexamples and prints one line per case.
//!
//!     cargo run --example counterexamples

use pqinv::verify::run_counterexamples;

fn main() {
    let report = run_counterexamples();
    for case in &report.cases {
        println!("{:<34} {:?}", case.name, case.status);
        for (k, v) in &case.residuals {
            println!("    {k:<24} {v:e}");
        }
        for note in &case.notes {
            println!("    note: {note}");
        }
    }
    println!("{:?}", report.summary);
}
