//! Prints the maximum error of every iterate for the built-in examples.
//!
//! cargo run --release --example convergence

use dualbvp::{error_curve, example, max_error, solve, SolveOptions};

fn main() -> dualbvp::Result<()> {
    for id in 1..=5 {
        let ex = example(id)?;
        let report = solve(&ex.problem, &SolveOptions::new(20).with_diagnostics())?;
        println!("example {id}: {}", ex.citation);
        for n in ex.problem.order()..=20 {
            let w = report.iterate(n).expect("diagnostics keep every iterate");
            let e = max_error(&error_curve(w, &ex.reference, 200)?)?;
            println!("  n = {n:2}  E_n = {e:.2e}");
        }
    }
    Ok(())
}
