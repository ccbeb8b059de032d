//! Fourier-Galerkin spectrum of a weighted transfer operator and its leading eigenvalue
//! against the periodic-orbit pressure.

use std::error::Error;

use besov_lab::dynamics::{potential_pressure, CircleMap, Potential, Weight};
use besov_lab::transfer::{stable_eigenvalues, StableOptions, TransferOp};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let map = CircleMap::doubling();
    let g = Weight::trigonometric(0.2);
    let op = TransferOp::new(map, g)?;
    let spec = stable_eigenvalues(&op, &[8, 16, 32], StableOptions::default())?;
    println!("truncation-stable eigenvalues:");
    for e in &spec.stable {
        println!("  {:+.12} {:+.12}i  drift {:.2e}", e.value().re, e.value().im, e.max_drift());
    }
    let p = potential_pressure(&map, Some(&g), &Potential { log_weight: 1.0, ..Potential::zero() }, 10)?;
    let leading = spec.stable[0].value().re;
    println!(
        "leading {leading:.10}  exp(P(log g)) {:.10}  last pressure step {:.2e}",
        p.last().exp(),
        p.last_delta()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
