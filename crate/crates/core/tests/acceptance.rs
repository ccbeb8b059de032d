//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any fails.

mod common;

use std::time::Instant;

use besov_lab::corpus::{random_band_limited, CorpusSpec};
use besov_lab::dyadic::{
    besov_norm, block_decomposition, psi, BesovParams, Exponent, FilterKind, GridFunction,
};
use besov_lab::dynamics::{gl_bound, periodic_points, potential_pressure, pressure, CircleMap, Potential, Weight};
use besov_lab::kernel::{b_l1_norm, decay_check, LocalBranch, LocalWeight, Regime};
use besov_lab::spectral::{remark_diagnostic, thm_bound, verify_ly};
use besov_lab::transfer::{
    assemble_matrix, duality_residual, eigenvalues, stable_eigenvalues, StableOptions, TransferOp,
};
use besov_lab::Complex64;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

fn partition_and_reconstruction() -> Outcome {
    let mut partition = 0.0f64;
    for k in 0..=(1usize << 12) {
        let total: f64 = (0..=13).map(|n| psi(n, FilterKind::Standard, k as f64)).sum();
        partition = partition.max((total - 1.0).abs());
    }
    let mut recon = 0.0f64;
    for u in random_band_limited(1024, 100, 511, 0.5, 7)? {
        let mut sum = GridFunction::zeros(u.len())?;
        for b in block_decomposition(&u, FilterKind::Standard) {
            sum = sum.add(&b)?;
        }
        recon = recon.max(sum.sub(&u)?.l2() / u.l2());
    }
    Ok((
        partition <= 1e-12 && recon <= 1e-10,
        format!("partition residual {partition:.2e}, reconstruction {recon:.2e}"),
    ))
}

fn single_mode_norms() -> Outcome {
    let corners = [
        (Exponent::Finite(1.0), Exponent::Finite(1.0)),
        (Exponent::Finite(1.0), Exponent::Infinity),
        (Exponent::Infinity, Exponent::Finite(1.0)),
        (Exponent::Infinity, Exponent::Infinity),
    ];
    let mut worst = 0.0f64;
    for n in 0..=10 {
        let e = GridFunction::exponential(4096, 1 << n)?;
        for s in [0.5, 1.0, 1.5] {
            let expect = 2f64.powf(s * n as f64);
            for (p, q) in corners {
                worst = worst.max((besov_norm(&e, s, p, q) - expect).abs() / expect);
            }
        }
    }
    Ok((worst <= 1e-10, format!("max relative error {worst:.2e}")))
}

fn duality() -> Outcome {
    let us = random_band_limited(64, 50, 12, 1.0, 31)?;
    let phis = random_band_limited(64, 50, 12, 1.0, 32)?;
    let mut worst = 0.0f64;
    for map in [CircleMap::doubling(), CircleMap::perturbed(2, 0.3)?] {
        for g in [Weight::inverse_jacobian(), Weight::trigonometric(0.2)] {
            let op = TransferOp::new(map, g)?;
            for (u, phi) in us.iter().zip(&phis) {
                worst = worst.max(duality_residual(&op, u, phi)?);
            }
        }
    }
    Ok((worst <= 1e-8, format!("max residual {worst:.2e} over 50 pairs x 4 operators")))
}

fn doubling_spectrum() -> Outcome {
    let op = TransferOp::new(CircleMap::doubling(), Weight::inverse_jacobian())?;
    let k = 32i64;
    let m = assemble_matrix(&op, k as usize, 1024)?;
    let mut entry = 0.0f64;
    for a in -k..=k {
        for j in -k..=k {
            let expect = if j == 2 * a { 1.0 } else { 0.0 };
            entry = entry.max((m.get(a, j) - Complex64::new(expect, 0.0)).norm());
        }
    }
    let ev = eigenvalues(&m);
    let lead = (ev[0] - Complex64::new(1.0, 0.0)).norm();
    // The nilpotent part has Jordan blocks of length at most log2(K) + 2, so rounding
    // of size eps moves its zero eigenvalues by at most about eps^(1/len).
    let jordan = (f64::EPSILON * (2 * k + 1) as f64).powf(1.0 / ((k as f64).log2() + 2.0));
    let rest = ev[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let stable = stable_eigenvalues(&op, &[8, 16, 32], StableOptions::default())?;
    let only_one = stable.stable.len() == 1
        && (stable.stable[0].value() - Complex64::new(1.0, 0.0)).norm() < 1e-10
        && stable.stable[0].max_drift() < 1e-10;
    Ok((
        entry <= 1e-10 && lead <= 1e-10 && rest <= jordan && only_one,
        format!(
            "entry error {entry:.1e}, |lambda_0 - 1| {lead:.1e}, other moduli <= {rest:.1e} (Jordan bound {jordan:.1e}), stable set {:?}",
            stable.stable.iter().map(|e| e.value().re).collect::<Vec<_>>()
        ),
    ))
}

fn bound_arithmetic() -> Outcome {
    let thm = thm_bound(&CircleMap::doubling(), &Weight::inverse_jacobian(), 1.0, 12)?.value;
    let mut gap = 0.0f64;
    for (d, c) in [(2, 0.5), (2, 1.7), (3, 0.3)] {
        let map = CircleMap::linear(d)?;
        let g = Weight::constant(c);
        for s in [0.5, 1.0, 2.0] {
            let t = thm_bound(&map, &g, s, 12)?.value;
            let gl = gl_bound(&map, &g, s, 12)?.value;
            gap = gap.max((t - gl).abs() / t);
        }
    }
    Ok((
        (thm - 0.5).abs() <= 1e-10 && gap <= 1e-6,
        format!("doubling bound {thm:.12}, max relative gap {gap:.2e}"),
    ))
}

fn pressure_convergence() -> Outcome {
    let est = pressure(&CircleMap::doubling(), &|_| 0.0, 12)?;
    let p12 = est.last();
    let exact = (4095f64).ln() / 12.0;
    let count = periodic_points(&CircleMap::doubling(), 12)?.len();
    Ok((
        (p12 - 2f64.ln()).abs() <= 2e-4 && (p12 - exact).abs() <= 1e-12 && count == 4095,
        format!(
            "P_12 {p12:.12}, exact {exact:.12}, |P_12 - log 2| {:.2e}, |Fix f^12| {count}",
            (p12 - 2f64.ln()).abs()
        ),
    ))
}

fn low_part() -> Outcome {
    let op = TransferOp::new(CircleMap::doubling(), Weight::constant(0.5))?;
    let params = BesovParams::new(1.0, Exponent::Infinity, Exponent::Infinity, f64::INFINITY)?;
    let mut spec = CorpusSpec::new(1024);
    spec.random = 50;
    spec.max_exponential = Some(256);
    spec.seed = 17;
    let corpus = spec.build()?;
    let r = verify_ly(&op, &params, &corpus)?;
    Ok((
        r.violations == 0 && r.pass,
        format!(
            "{} members, {} violations, max low ratio {:.3e}, bound factor {:.4e}",
            corpus.len(),
            r.violations,
            r.max_low_ratio,
            r.constants.low_factor()
        ),
    ))
}

fn high_part() -> Outcome {
    let op = TransferOp::new(CircleMap::doubling(), Weight::lacunary(0.2, 2.0, 8)?)?;
    let params = BesovParams::new(1.5, Exponent::Infinity, Exponent::Infinity, op.weight().regularity())?;
    let fit = |random: usize, kmax: Option<usize>| -> Result<f64, Box<dyn std::error::Error>> {
        let mut spec = CorpusSpec::new(1024);
        spec.random = random;
        spec.max_exponential = kmax;
        spec.seed = 1;
        Ok(verify_ly(&op, &params, &spec.build()?)?.fitted_high_constant)
    };
    let small = fit(50, Some(64))?;
    let large = fit(100, Some(128))?;
    let change = (large - small).abs() / small;
    let random_only = fit(100, None)? / fit(50, None)? - 1.0;

    let r = op.weight().regularity();
    let strict = BesovParams::new(1.5, Exponent::Infinity, Exponent::Finite(2.0), r)?;
    let diag = remark_diagnostic(r, strict.sigma, Exponent::Finite(2.0), 2.0, 20)?;
    let last = *diag.partial_norms.last().unwrap();
    Ok((
        small.is_finite() && small > 0.0 && change < 0.1 && diag.unbounded,
        format!(
            "C {small:.4e} -> {large:.4e} under doubling (change {:.2}%; random members alone {:.1}%), diagnostic partial norm at n=20 {last:.3e}, unbounded {}",
            100.0 * change,
            100.0 * random_only,
            diag.unbounded
        ),
    ))
}

fn kernel_oracle() -> Outcome {
    let a = common::spot_check(
        LocalBranch::Affine { a: 2.0, b: 0.0 },
        LocalWeight::bump(0.0, 0.5),
        7,
        1,
        10,
    );
    let b = common::spot_check(
        LocalBranch::Nonlinear { a: 2.5, beta: 0.5 },
        LocalWeight::polynomial(0.1, 0.45, 3),
        8,
        1,
        10,
    );
    Ok((
        a.max(b) <= 1e-4,
        format!("20 points, worst relative error affine {a:.2e}, nonlinear {b:.2e}"),
    ))
}

fn kernel_decay() -> Outcome {
    let xs = common::linspace(-1.0, 1.0, 25);
    let pairs = [(7, 1), (8, 1), (8, 2), (9, 1), (9, 2), (10, 2), (10, 3)];
    let weight = LocalWeight::polynomial(0.0, 0.5, 3);
    let mut ok = true;
    let mut parts = Vec::new();
    for branch in [LocalBranch::Affine { a: 2.0, b: 0.0 }, LocalBranch::Nonlinear { a: 2.5, beta: 0.5 }] {
        for regime in [Regime::Gain, Regime::FiniteLoss] {
            let rep = decay_check(&branch, &weight, &pairs, regime, &xs, &xs)?;
            ok &= rep.pass && rep.slope <= 0.1;
            parts.push(format!("{:.3}", rep.slope));
        }
    }
    let norms: Vec<f64> = (0..=10).map(b_l1_norm).collect::<Result<_, _>>()?;
    let spread = norms.iter().map(|v| (v - norms[0]).abs()).fold(0.0, f64::max);
    Ok((
        ok && spread <= 1e-8,
        format!(
            "slopes (affine gain, affine finite-loss, nonlinear gain, nonlinear finite-loss) {}, ||b_m||_1 spread {spread:.1e}",
            parts.join(" ")
        ),
    ))
}

fn eigenvalue_vs_pressure() -> Outcome {
    let map = CircleMap::doubling();
    let g = Weight::trigonometric(0.2);
    let op = TransferOp::new(map, g)?;
    let spec = stable_eigenvalues(&op, &[8, 16, 32], StableOptions::default())?;
    let lead = spec.stable[0].value();
    let potential = Potential {
        log_weight: 1.0,
        ..Potential::zero()
    };
    let est = potential_pressure(&map, Some(&g), &potential, 12)?;
    let target = est.last().exp();
    let diff = (lead - Complex64::new(target, 0.0)).norm();
    let delta = est.last_delta();
    Ok((
        diff <= 5e-3,
        format!(
            "leading {:.10}, exp P_12 {target:.10}, difference {diff:.2e}, last pressure step {delta:.2e} (within step: {})",
            lead.re,
            diff <= delta
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("partition of unity and reconstruction", partition_and_reconstruction),
        ("single-mode Besov norms", single_mode_norms),
        ("duality", duality),
        ("doubling-map spectrum", doubling_spectrum),
        ("radius bound arithmetic", bound_arithmetic),
        ("pressure convergence", pressure_convergence),
        ("low-part block bound", low_part),
        ("high-part constant and divergence diagnostic", high_part),
        ("kernel oracle agreement", kernel_oracle),
        ("kernel decay", kernel_decay),
        ("leading eigenvalue vs pressure", eigenvalue_vs_pressure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
