//! Local kernels between separated frequency blocks and their decay constants.

use std::error::Error;

use besov_lab::dyadic::Exponent;
use besov_lab::kernel::{
    b_l1_norm, decay_check, kernel_eval, young_chain_check, LocalBranch, LocalWeight, Regime,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let branch = LocalBranch::Affine { a: 2.0, b: 0.0 };
    let weight = LocalWeight::polynomial(0.0, 0.5, 3);
    let xs: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();

    let report = decay_check(&branch, &weight, &[(7, 1), (8, 1), (8, 2), (9, 2)], Regime::Gain, &xs, &xs)?;
    println!(" n  l     max|V|        C(n,l)");
    for r in &report.rows {
        println!("{:>2} {:>2}  {:.4e}  {:.4e}", r.n, r.l, r.max_abs, r.constant);
    }
    println!("log-slope {:.3}  pass {}", report.slope, report.pass);

    let grid = kernel_eval(&branch, &weight, 7, 1, &xs, &xs)?;
    let phi = LocalWeight::bump(0.0, 0.8);
    for p in [Exponent::Finite(1.0), Exponent::Infinity] {
        let y = young_chain_check(&grid, &weight, |t| phi.eval(t), p, report.fitted_constant, Regime::Gain)?;
        println!("p = {p}: ||H phi|| = {:.4e} <= {:.4e}", y.measured, y.bound);
    }
    println!("||b_3||_1 = {:.10}", b_l1_norm(3)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
