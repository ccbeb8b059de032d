//! Besov norms of single modes and of a smooth function, on the circle and through charts.

use std::error::Error;

use besov_lab::dyadic::{
    besov_norm, besov_norm_charted, BesovParams, CircleAtlas, Exponent, GridFunction,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 1024;
    let inf = Exponent::Infinity;
    let two = Exponent::Finite(2.0);
    for k in [1i64, 4, 32, 256] {
        let e = GridFunction::exponential(n, k)?;
        println!(
            "e_{k:<4} B^1_inf,inf = {:>10.4}   B^1_2,2 = {:>10.4}",
            besov_norm(&e, 1.0, inf, inf),
            besov_norm(&e, 1.0, two, two)
        );
    }

    let u = GridFunction::from_real_fn(n, |x| (2.0 * std::f64::consts::PI * x).cos().exp())?;
    let params = BesovParams::new(1.5, two, inf, f64::INFINITY)?;
    println!(
        "exp(cos): strong {:.6}  weak (sigma = {}) {:.6}",
        params.strong_norm(&u),
        params.sigma,
        params.weak_norm(&u)
    );
    let atlas = CircleAtlas::two_chart();
    println!(
        "periodic B^1_2,2 {:.6}  charted {:.6}",
        besov_norm(&u, 1.0, two, two),
        besov_norm_charted(&u, &atlas, 1.0, two, two)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
