//! Splits a band-limited function into Littlewood-Paley blocks and sums them back.

use std::error::Error;

use besov_lab::dyadic::{block_decomposition, lp_norm, Exponent, FilterKind, GridFunction};
use besov_lab::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 256;
    let u = GridFunction::from_fn(n, |x| {
        let t = 2.0 * std::f64::consts::PI * x;
        Complex64::new((3.0 * t.sin()).exp(), 0.5 * (17.0 * t).cos())
    })?;
    let blocks = block_decomposition(&u, FilterKind::Standard);
    println!("block   ||Delta_n u||_2   ||Delta_n u||_inf");
    let mut sum = GridFunction::zeros(n)?;
    for (i, b) in blocks.iter().enumerate() {
        println!(
            "{i:>5}   {:>15.6e}   {:>17.6e}",
            lp_norm(b, Exponent::Finite(2.0)),
            lp_norm(b, Exponent::Infinity)
        );
        sum = sum.add(b)?;
    }
    let err = sum.sub(&u)?.l2() / u.l2();
    println!("relative reconstruction error {err:.3e}");
    assert!(err < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
