//! Seeded randomized battery; prints the summary and any non-passing case.
//!
//!     cargo run --release --example fuzz -- [seed] [trials] [max_dim]

use pqinv::verify::{fuzz, Status};
use pqinv::Tolerances;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u64>().expect("integer argument"));
    let seed = args.next().unwrap_or(42);
    let trials = args.next().unwrap_or(200) as usize;
    let dim = args.next().unwrap_or(8) as usize;
    let report = match fuzz(seed, trials, dim, &Tolerances::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    for c in report.cases.iter().filter(|c| c.status != Status::Pass) {
        println!("{} {:?} {:?}", c.name, c.status, c.notes);
    }
    println!(
        "seed {seed}, {trials} trials, n ≤ {dim}: {:?}",
        report.summary
    );
}
