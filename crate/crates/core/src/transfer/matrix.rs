use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::op::TransferOp;
use crate::dyadic::{check_grid_size, exponential};
use crate::fourier;
use crate::{Error, Result};

/// Galerkin matrix `M[m][j] = (L e_j)^(m)` for `|m|, |j| <= K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMatrix {
    truncation: usize,
    grid: usize,
    aliasing: bool,
    data: DMatrix<Complex64>,
}

impl FourierMatrix {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Size of the assembly grid.
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Set when the assembly grid is coarser than `8K`.
    pub fn aliasing(&self) -> bool {
        self.aliasing
    }

    pub fn dim(&self) -> usize {
        2 * self.truncation + 1
    }

    fn index(&self, k: i64) -> Option<usize> {
        let kk = self.truncation as i64;
        (-kk..=kk).contains(&k).then(|| (k + kk) as usize)
    }

    /// Entry `(m, j)` with signed frequencies; zero outside the truncation.
    pub fn get(&self, m: i64, j: i64) -> Complex64 {
        match (self.index(m), self.index(j)) {
            (Some(a), Some(b)) => self.data[(a, b)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn from_matrix(data: DMatrix<Complex64>, grid: usize) -> Result<Self> {
        let d = data.nrows();
        if d != data.ncols() || d.is_multiple_of(2) {
            return Err(Error::param("Fourier matrix must be square of odd size"));
        }
        let truncation = (d - 1) / 2;
        Ok(Self {
            truncation,
            grid,
            aliasing: grid < 8 * truncation,
            data,
        })
    }

    /// The central block `|m|, |j| <= k`.
    pub fn restrict(&self, k: usize) -> Result<Self> {
        if k > self.truncation {
            return Err(Error::param(format!(
                "cannot restrict truncation {} to {k}",
                self.truncation
            )));
        }
        let off = self.truncation - k;
        let d = 2 * k + 1;
        Ok(Self {
            truncation: k,
            grid: self.grid,
            aliasing: self.grid < 8 * k,
            data: self.data.view((off, off), (d, d)).into_owned(),
        })
    }

    /// Row-major CSV: a header row, then one row per `m` with `re,im` pairs per `j`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let kk = self.truncation as i64;
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["m".to_string()];
        for j in -kk..=kk {
            header.push(format!("re_{j}"));
            header.push(format!("im_{j}"));
        }
        out.write_record(&header)?;
        for m in -kk..=kk {
            let mut rec = vec![m.to_string()];
            for j in -kk..=kk {
                let v = self.get(m, j);
                rec.push(format!("{:.16e}", v.re));
                rec.push(format!("{:.16e}", v.im));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Column `j` is the FFT of `L e_j` sampled on a grid of `n` points, truncated to `|m| <= K`.
pub fn assemble_matrix(op: &TransferOp, k: usize, n: usize) -> Result<FourierMatrix> {
    check_grid_size(n)?;
    if n <= 2 * k {
        return Err(Error::param(format!(
            "assembly grid {n} cannot represent frequencies up to {k}"
        )));
    }
    let pre: Vec<Vec<(f64, Complex64)>> = (0..n)
        .into_par_iter()
        .map(|i| op.preimages(i as f64 / n as f64))
        .collect::<Result<_>>()?;
    let kk = k as i64;
    let columns: Vec<Vec<Complex64>> = (-kk..=kk)
        .into_par_iter()
        .map(|j| {
            let samples: Vec<Complex64> = pre
                .iter()
                .map(|ys| ys.iter().map(|(y, g)| g * exponential(j, *y)).sum())
                .collect();
            let c = fourier::forward(&samples);
            (-kk..=kk)
                .map(|m| c[fourier::slot(m, n).expect("m within grid")])
                .collect()
        })
        .collect();
    let d = 2 * k + 1;
    let data = DMatrix::from_fn(d, d, |r, c| columns[c][r]);
    Ok(FourierMatrix {
        truncation: k,
        grid: n,
        aliasing: n < 8 * k,
        data,
    })
}

/// Eigenvalues of the dense truncation, sorted by decreasing modulus.
pub fn eigenvalues(m: &FourierMatrix) -> Vec<Complex64> {
    matrix_eigenvalues(m.matrix())
}

pub(crate) fn matrix_eigenvalues(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    if a.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return vec![Complex64::new(0.0, 0.0); a.nrows()];
    }
    let schur = nalgebra::linalg::Schur::new(a.clone());
    let mut ev: Vec<Complex64> = schur
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    ev
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableOptions {
    /// Largest distance between matched eigenvalues of consecutive truncations.
    pub match_tol: f64,
    /// Eigenvalues of smaller modulus are not tracked.
    pub min_modulus: f64,
}

impl Default for StableOptions {
    fn default() -> Self {
        Self {
            match_tol: 1e-6,
            min_modulus: 1e-2,
        }
    }
}

/// An eigenvalue present at every truncation level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableEigenvalue {
    /// Value at the finest level.
    pub value: Complex64Repr,
    /// Matched values from coarsest to finest.
    pub levels: Vec<Complex64Repr>,
    /// `|z_{i+1} - z_i|` between consecutive levels.
    pub drift: Vec<f64>,
}

impl StableEigenvalue {
    pub fn value(&self) -> Complex64 {
        self.value.into()
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }
}

/// Serializable complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex64Repr {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex64Repr {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Complex64Repr> for Complex64 {
    fn from(z: Complex64Repr) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableSpectrum {
    pub truncations: Vec<usize>,
    pub grid: usize,
    pub stable: Vec<StableEigenvalue>,
    /// Full spectrum of the finest truncation.
    pub finest: Vec<Complex64Repr>,
}

/// Smallest power of two at least `16 k`.
pub fn assembly_grid(k: usize) -> usize {
    (16 * k).max(8).next_power_of_two()
}

/// Eigenvalues that persist, within `match_tol`, across all truncation levels and
/// whose drift between consecutive levels does not grow.
///
/// All levels are central blocks of one matrix assembled at the largest truncation.
pub fn stable_eigenvalues(
    op: &TransferOp,
    truncations: &[usize],
    opts: StableOptions,
) -> Result<StableSpectrum> {
    if truncations.len() < 3 {
        return Err(Error::param("at least three truncation levels are required"));
    }
    if truncations.windows(2).any(|w| w[0] >= w[1]) || truncations[0] == 0 {
        return Err(Error::param("truncations must be positive and strictly increasing"));
    }
    if !(opts.match_tol > 0.0) || opts.min_modulus < 0.0 {
        return Err(Error::param("match_tol must be positive and min_modulus nonnegative"));
    }
    let kmax = *truncations.last().unwrap();
    let grid = assembly_grid(kmax);
    let full = assemble_matrix(op, kmax, grid)?;
    let spectra: Vec<Vec<Complex64>> = truncations
        .par_iter()
        .map(|&k| full.restrict(k).map(|m| eigenvalues(&m)))
        .collect::<Result<_>>()?;
    let finest = spectra.last().unwrap();
    let mut used: Vec<Vec<bool>> = spectra.iter().map(|s| vec![false; s.len()]).collect();
    let mut stable = Vec::new();
    for (fi, &z) in finest.iter().enumerate() {
        if z.norm() < opts.min_modulus {
            break;
        }
        let mut chain = vec![z];
        let mut picks = vec![];
        let mut current = z;
        for level in (0..spectra.len() - 1).rev() {
            let best = spectra[level]
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[level][*i])
                .map(|(i, w)| (i, (w - current).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, d)) if d <= opts.match_tol => {
                    picks.push((level, i));
                    current = spectra[level][i];
                    chain.push(current);
                }
                _ => break,
            }
        }
        if chain.len() != spectra.len() {
            continue;
        }
        chain.reverse();
        let drift: Vec<f64> = chain.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let monotone = drift.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        if !monotone {
            continue;
        }
        used[spectra.len() - 1][fi] = true;
        for (level, i) in picks {
            used[level][i] = true;
        }
        stable.push(StableEigenvalue {
            value: z.into(),
            levels: chain.into_iter().map(Into::into).collect(),
            drift,
        });
    }
    Ok(StableSpectrum {
        truncations: truncations.to_vec(),
        grid,
        stable,
        finest: finest.iter().copied().map(Into::into).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{CircleMap, Weight};

    #[test]
    fn doubling_matrix_is_a_shift() {
        let op = TransferOp::new(CircleMap::doubling(), Weight::constant(0.5)).unwrap();
        let m = assemble_matrix(&op, 4, 32).unwrap();
        assert!(!m.aliasing());
        for a in -4..=4i64 {
            for j in -4..=4i64 {
                let expect = if j == 2 * a { 1.0 } else { 0.0 };
                assert!((m.get(a, j) - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
        let ij = TransferOp::new(CircleMap::doubling(), Weight::inverse_jacobian()).unwrap();
        assert_eq!(assemble_matrix(&ij, 4, 32).unwrap(), m);
    }

    #[test]
    fn aliasing_flag_and_restriction() {
        let op = TransferOp::new(CircleMap::perturbed(2, 0.1).unwrap(), Weight::trigonometric(0.2)).unwrap();
        assert!(assemble_matrix(&op, 6, 32).unwrap().aliasing());
        let big = assemble_matrix(&op, 8, 128).unwrap();
        let small = assemble_matrix(&op, 5, 128).unwrap();
        assert_eq!(big.restrict(5).unwrap(), small);
    }

    #[test]
    fn eigenvalues_of_trivial_matrices() {
        let z = FourierMatrix::from_matrix(DMatrix::zeros(5, 5), 16).unwrap();
        assert!(eigenvalues(&z).iter().all(|v| v.norm() == 0.0));
        let c = TransferOp::new(CircleMap::doubling(), Weight::constant(0.3)).unwrap();
        let ev = eigenvalues(&assemble_matrix(&c, 4, 32).unwrap());
        assert!((ev[0] - Complex64::new(0.6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn csv_export_shape() {
        let op = TransferOp::new(CircleMap::doubling(), Weight::constant(0.5)).unwrap();
        let m = assemble_matrix(&op, 2, 16).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0].split(',').count(), 11);
    }

    #[test]
    fn stable_set_needs_three_levels() {
        let op = TransferOp::new(CircleMap::doubling(), Weight::constant(0.5)).unwrap();
        assert!(stable_eigenvalues(&op, &[4, 8], StableOptions::default()).is_err());
    }
}
