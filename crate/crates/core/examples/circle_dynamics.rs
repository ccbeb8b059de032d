//! Inverse branches, periodic orbits, Lyapunov extrema and pressure of a perturbed doubling map.

use std::error::Error;

use besov_lab::dynamics::{
    chi_min, periodic_points, potential_pressure, r_limit, CircleMap, Potential, Weight,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = CircleMap::perturbed(2, 0.3)?;
    println!("expansion in [{:.4}, {:.4}]", f.min_expansion(), f.max_expansion());
    let x = 0.3;
    for y in f.inverse_branches(x)? {
        println!("  f({y:.12}) = {:.12}", f.eval(y));
    }

    let orbits = periodic_points(&f, 6)?;
    println!("Fix(f^6): {} points, max residual {:.2e}", orbits.len(), orbits.max_residual(&f));

    let chi = chi_min(&f, 8);
    println!("chi_min estimates {:?}", chi.sequence);

    let g = Weight::trigonometric(0.2);
    let r = r_limit(&g, &f, 8);
    println!("R(g) estimate {:.6}", r.value);

    let p = potential_pressure(&f, None, &Potential::weighted_jacobian(1.0), 10)?;
    println!(
        "P(-log|f'|) at n = 10: {:.3e} (fixed points) {:.3e} (words)",
        p.last(),
        p.last_symbolic()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
