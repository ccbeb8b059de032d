//! Low- and high-frequency parts of the Lasota-Yorke inequality over a random corpus.

use std::error::Error;

use besov_lab::corpus::CorpusSpec;
use besov_lab::dyadic::{BesovParams, Exponent};
use besov_lab::dynamics::{CircleMap, Weight};
use besov_lab::transfer::TransferOp;
use besov_lab::spectral::verify_ly;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let op = TransferOp::new(CircleMap::perturbed(2, 0.3)?, Weight::inverse_jacobian())?;
    let params = BesovParams::new(1.0, Exponent::Infinity, Exponent::Infinity, f64::INFINITY)?;
    let mut spec = CorpusSpec::new(256);
    spec.random = 12;
    spec.bandwidth = 32;
    spec.seed = 11;
    let report = verify_ly(&op, &params, &spec.build()?)?;
    let c = &report.constants;
    println!(
        "lambda {:.4}  alpha {:.4}  C1 {:.4} (measured {:.4})  gamma~ {:.4e}",
        c.lambda,
        c.alpha,
        c.c1,
        c.c1_measured.unwrap_or(f64::NAN),
        c.gamma_tilde
    );
    println!(
        "violations {}  max low ratio {:.3e}  fitted high constant {:.4e}",
        report.violations, report.max_low_ratio, report.fitted_high_constant
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
