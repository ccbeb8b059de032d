//! Essential-spectral-radius bound from orbit data, compared with the pressure bound and
//! with the truncation-stable spectrum.

use std::error::Error;

use besov_lab::dynamics::{gl_bound, CircleMap, Weight};
use besov_lab::spectral::{essential_radius_probe, thm_bound};
use besov_lab::transfer::{StableOptions, TransferOp};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let map = CircleMap::perturbed(2, 0.2)?;
    let g = Weight::trigonometric(0.2);
    for s in [0.5, 1.0, 2.0] {
        let thm = thm_bound(&map, &g, s, 8)?;
        let gl = gl_bound(&map, &g, s, 8)?;
        println!("s = {s}: exp(-s chi_min) R(g) = {:.6}   pressure bound = {:.6}", thm.value, gl.value);
    }
    let op = TransferOp::new(map, g)?;
    let probe = essential_radius_probe(&op, 2.0, &[8, 16, 32], StableOptions::default(), 8, 1e-3)?;
    println!("radius bound {:.6}", probe.bound);
    for e in &probe.outside {
        println!("  isolated eigenvalue {:.8}", e.value());
    }
    println!("consistent: {}", probe.consistent);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
