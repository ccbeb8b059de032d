use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde_json::{json, Value};

use super::config::Validated;
use crate::dyadic::{psi, rho, support, FilterKind};
use crate::dynamics::{gl_bound, potential_pressure};
use crate::kernel::{
    b_l1_norm, decay_check, kernel_eval, young_chain_check, LocalWeight, Regime,
};
use crate::spectral::{essential_radius_probe, remark_diagnostic, thm_bound, verify_ly, LYConstants};
use crate::transfer::{assemble_matrix, assembly_grid, eigenvalues, stable_eigenvalues};
use crate::dyadic::Exponent;
use crate::Result;

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_writer(dir: &Path, name: &str) -> Result<csv::Writer<File>> {
    Ok(csv::Writer::from_path(dir.join(name))?)
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<()> {
    let f = BufWriter::new(File::create(dir.join(name))?);
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::FiniteLoss => "finite_loss",
        Regime::Gain => "gain",
    }
}

/// Filter profiles at integer frequencies and per-block telescoping residuals.
pub fn cmd_filters(v: &Validated, out: &Path) -> Result<Value> {
    let n_max = v.n_max;
    let max_freq = 1usize << (n_max + 1);
    let mut profiles = csv_writer(out, "filter_profiles.csv")?;
    let mut header = vec!["k".to_string()];
    header.extend((0..=n_max).map(|n| format!("psi_{n}")));
    header.extend((0..=n_max).map(|n| format!("wide_{n}")));
    header.push("partial_sum".into());
    profiles.write_record(&header)?;

    let mut residual = vec![0.0f64; n_max as usize + 1];
    let mut cover = vec![0.0f64; n_max as usize + 1];
    let mut partition = 0.0f64;
    for k in 0..=max_freq {
        let t = k as f64;
        let mut rec = vec![k.to_string()];
        let mut partial = 0.0;
        for n in 0..=n_max {
            let p = psi(n, FilterKind::Standard, t);
            partial += p;
            let r = (partial - rho(t / 2f64.powi(n as i32))).abs();
            residual[n as usize] = residual[n as usize].max(r);
            let w = psi(n, FilterKind::Wide, t);
            if p != 0.0 {
                cover[n as usize] = cover[n as usize].max((w - 1.0).abs());
            }
            rec.push(sci(p));
        }
        for n in 0..=n_max {
            rec.push(sci(psi(n, FilterKind::Wide, t)));
        }
        if k <= 1 << n_max {
            partition = partition.max((partial - 1.0).abs());
        }
        rec.push(sci(partial));
        profiles.write_record(&rec)?;
    }
    profiles.flush()?;

    let mut table = csv_writer(out, "filters.csv")?;
    table.write_record([
        "n",
        "support_lo",
        "support_hi",
        "wide_lo",
        "wide_hi",
        "max_residual",
        "wide_cover_defect",
    ])?;
    for n in 0..=n_max {
        let (lo, hi) = support(n, FilterKind::Standard);
        let (wlo, whi) = support(n, FilterKind::Wide);
        table.write_record([
            n.to_string(),
            sci(lo),
            sci(hi),
            sci(wlo),
            sci(whi),
            sci(residual[n as usize]),
            sci(cover[n as usize]),
        ])?;
    }
    table.flush()?;
    Ok(json!({
        "n_max": n_max,
        "max_freq": max_freq,
        "partition_residual": partition,
        "max_residual": residual.iter().copied().fold(0.0, f64::max),
    }))
}

/// Radius bound against the pressure bound for each smoothness in the sweep.
pub fn cmd_bounds(v: &Validated, out: &Path) -> Result<Value> {
    let cfg = &v.config.bounds;
    let mut rows = Vec::new();
    for &s in &cfg.s {
        let thm = thm_bound(&v.map, &v.weight, s, cfg.n_max)?;
        let gl = gl_bound(&v.map, &v.weight, s, cfg.n_max)?;
        rows.push((s, thm, gl));
    }
    let mut w = csv_writer(out, "bounds.csv")?;
    w.write_record([
        "s",
        "thm_bound",
        "gl_bound",
        "gl_fixed_point",
        "chi_min",
        "r",
        "relative_gap",
        "coincide",
    ])?;
    let mut summary = Vec::new();
    for (s, thm, gl) in &rows {
        let gap = (thm.value - gl.value).abs() / thm.value;
        let coincide = gap <= 1e-6;
        w.write_record([
            sci(*s),
            sci(thm.value),
            sci(gl.value),
            sci(gl.fixed_point_value),
            sci(thm.chi_min.value),
            sci(thm.r.value),
            sci(gap),
            coincide.to_string(),
        ])?;
        summary.push(json!({"s": s, "thm_bound": thm.value, "gl_bound": gl.value, "coincide": coincide}));
    }
    w.flush()?;
    Ok(Value::Array(summary))
}

/// Truncated spectra, the truncation-stable set and the radius probe.
pub fn cmd_spectrum(v: &Validated, out: &Path) -> Result<Value> {
    let sp = &v.config.spectrum;
    let kmax = *sp.truncations.last().unwrap();
    let full = assemble_matrix(&v.op, kmax, assembly_grid(kmax))?;
    let stable = stable_eigenvalues(&v.op, &sp.truncations, v.stable)?;
    let probe = essential_radius_probe(
        &v.op,
        v.params.s,
        &sp.truncations,
        v.stable,
        sp.bound_n_max,
        sp.margin,
    )?;

    let mut w = csv_writer(out, "eigenvalues.csv")?;
    w.write_record(["truncation", "index", "re", "im", "modulus"])?;
    for &k in &sp.truncations {
        for (i, z) in eigenvalues(&full.restrict(k)?).iter().enumerate() {
            w.write_record([k.to_string(), i.to_string(), sci(z.re), sci(z.im), sci(z.norm())])?;
        }
    }
    w.flush()?;
    full.write_csv(BufWriter::new(File::create(out.join("matrix.csv"))?))?;
    write_json(out, "stable_spectrum.json", &stable)?;
    write_json(out, "radius_probe.json", &probe)?;
    let leading = stable.stable.first().map(|e| e.value());
    Ok(json!({
        "truncations": sp.truncations,
        "stable_count": stable.stable.len(),
        "leading_re": leading.map(|z| z.re),
        "leading_im": leading.map(|z| z.im),
        "radius_bound": probe.bound,
        "outside": probe.outside.len(),
        "consistent": probe.consistent,
    }))
}

/// Lasota-Yorke block estimates over the configured corpus.
pub fn cmd_ly_verify(v: &Validated, out: &Path) -> Result<Value> {
    let corpus = v.corpus.build()?;
    let report = verify_ly(&v.op, &v.params, &corpus)?;
    let diagnostic = if v.weight.regularity().is_finite() && !v.params.q.is_infinite() {
        Some(remark_diagnostic(
            v.weight.regularity(),
            v.params.sigma,
            v.params.q,
            report.constants.lambda,
            20,
        )?)
    } else {
        None
    };
    write_json(out, "ly_report.json", &report)?;
    report.write_csv(BufWriter::new(File::create(out.join("ly_records.csv"))?))?;
    let mut w = csv_writer(out, "ly_constants.csv")?;
    w.write_record(LYConstants::table_header())?;
    w.write_record(report.constants.table_row())?;
    w.flush()?;
    if let Some(d) = &diagnostic {
        write_json(out, "remark_diagnostic.json", d)?;
    }
    Ok(json!({
        "corpus": corpus.len(),
        "violations": report.violations,
        "max_low_ratio": report.max_low_ratio,
        "fitted_high_constant": report.fitted_high_constant,
        "resolution_flags": report.resolution_flags,
        "pass": report.pass,
        "remark_unbounded": diagnostic.map(|d| d.unbounded),
    }))
}

/// Kernel decay tables for every configured regime, `||b_m||_1`, and a Young-chain check.
pub fn cmd_kernel_decay(v: &Validated, out: &Path) -> Result<Value> {
    let k = &v.config.kernel;
    let xs = k.x.nodes();
    let ys = k.y.nodes();
    let pairs: Vec<(u32, u32)> = k.pairs.iter().map(|p| (p[0], p[1])).collect();
    let mut summary = serde_json::Map::new();
    let mut reports = Vec::new();
    for &regime in &k.regimes {
        let rep = decay_check(&k.branch, &k.weight, &pairs, regime, &xs, &ys)?;
        rep.write_csv(&out.join(format!("decay_{}.csv", regime_name(regime))))?;
        summary.insert(
            regime_name(regime).into(),
            json!({"slope": rep.slope, "fitted_constant": rep.fitted_constant, "pass": rep.pass}),
        );
        reports.push(rep);
    }

    let (n0, l0) = pairs[0];
    let grid = kernel_eval(&k.branch, &k.weight, n0, l0, &xs, &ys)?;
    let centre = 0.5 * (k.y.lo + k.y.hi);
    let phi = LocalWeight::bump(centre, 0.4 * (k.y.hi - k.y.lo));
    let mut young = csv_writer(out, "young_chain.csv")?;
    young.write_record(["regime", "p", "measured", "bound", "pass"])?;
    for rep in &reports {
        for p in [Exponent::Finite(1.0), Exponent::Infinity] {
            let y = young_chain_check(&grid, &k.weight, |t| phi.eval(t), p, rep.fitted_constant, rep.regime)?;
            young.write_record([
                regime_name(rep.regime).to_string(),
                p.to_string(),
                sci(y.measured),
                sci(y.bound),
                y.pass.to_string(),
            ])?;
        }
    }
    young.flush()?;

    let mut bw = csv_writer(out, "b_norms.csv")?;
    bw.write_record(["m", "l1_norm"])?;
    for m in 0..=10 {
        bw.write_record([m.to_string(), sci(b_l1_norm(m)?)])?;
    }
    bw.flush()?;

    if k.export_grids {
        for &(n, l) in &pairs {
            let g = if (n, l) == (n0, l0) {
                grid.clone()
            } else {
                kernel_eval(&k.branch, &k.weight, n, l, &xs, &ys)?
            };
            g.write_csv(&out.join(format!("kernel_{n}_{l}.csv")))?;
            g.write_heat(&out.join(format!("kernel_{n}_{l}.dat")))?;
        }
    }
    Ok(Value::Object(summary))
}

/// Periodic-orbit pressure sequence of the configured potential.
pub fn cmd_pressure(v: &Validated, out: &Path) -> Result<Value> {
    let cfg = &v.config.pressure;
    let est = potential_pressure(&v.map, Some(&v.weight), &cfg.potential(), cfg.n_max)?;
    let mut w = csv_writer(out, "pressure.csv")?;
    w.write_record(["n", "fixed_point", "symbolic", "delta"])?;
    for (i, (a, b)) in est.fixed_point.iter().zip(&est.symbolic).enumerate() {
        let delta = if i == 0 { f64::NAN } else { (a - est.fixed_point[i - 1]).abs() };
        w.write_record([(i + 1).to_string(), sci(*a), sci(*b), sci(delta)])?;
    }
    w.flush()?;
    Ok(json!({
        "n_max": cfg.n_max,
        "fixed_point": est.last(),
        "symbolic": est.last_symbolic(),
        "last_delta": est.last_delta(),
    }))
}

/// Runs every command into one directory and writes `report.json`.
pub fn cmd_report(v: &Validated, out: &Path) -> Result<Value> {
    let mut all = serde_json::Map::new();
    all.insert("filters".into(), cmd_filters(v, out)?);
    all.insert("pressure".into(), cmd_pressure(v, out)?);
    all.insert("bounds".into(), cmd_bounds(v, out)?);
    all.insert("spectrum".into(), cmd_spectrum(v, out)?);
    all.insert("ly_verify".into(), cmd_ly_verify(v, out)?);
    all.insert("kernel_decay".into(), cmd_kernel_decay(v, out)?);
    let value = Value::Object(all);
    write_json(out, "report.json", &value)?;
    Ok(value)
}
