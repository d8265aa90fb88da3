use rayon::prelude::*;

use super::expm::log_norm_exp;
use crate::domains::{RealCompactSet, RealOpenSet};
use crate::error::{Error, Result};
use crate::matrep::{NumericTriMatrix, TriMatrixElement};
use crate::uea::{int, Rational};

pub const MIN_SAMPLES: usize = 8;

/// Points per compact component in the function case.
pub const K_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Polynomial,
    Exponential,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Polynomial => "polynomial",
            Verdict::Exponential => "exponential",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Thresholds and grid of the growth classification.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthConfig {
    /// Polynomial when the largest deviation of `log ‖·‖` from the fitted
    /// line in `log(1 + |s|)` is below this.
    pub residual_threshold: f64,
    /// Exponential when `log ‖·‖` grows against `|s|` with a larger slope.
    pub slope_threshold: f64,
    /// Smallest positive grid point; the cube root of `s_max` when unset.
    pub s_min: Option<f64>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        Self {
            residual_threshold: 0.25,
            slope_threshold: 0.05,
            s_min: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub s: f64,
    pub log_norm: f64,
}

impl Sample {
    pub fn from_norm(s: f64, norm: f64) -> Self {
        Self {
            s,
            log_norm: norm.ln(),
        }
    }

    /// Infinite when the norm exceeds the double range.
    pub fn norm(&self) -> f64 {
        self.log_norm.exp()
    }
}

/// Fit of `‖e^{isb}‖ ≈ K(1 + |s|)^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub samples: Vec<Sample>,
    pub alpha: f64,
    pub prefactor: f64,
    /// Largest absolute deviation of `log ‖·‖` from the fitted line.
    pub residual: f64,
    /// Least-squares slope of `log ‖·‖` against `|s|`.
    pub exp_slope: f64,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,norm\n");
        for x in &self.samples {
            out.push_str(&format!("{},{}\n", fmt12(x.s), fmt12(x.norm())));
        }
        out
    }
}

/// Twelve significant digits, in the shortest form that reads back the
/// rounded value.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let v: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if (1e-5..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Least-squares line `y ≈ a x + c`.
fn line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (a, my - a * mx)
}

/// Fits the samples and classifies them.
pub fn analyze(samples: Vec<Sample>, cfg: &GrowthConfig) -> Result<GrowthReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    if let Some(x) = samples
        .iter()
        .find(|x| !x.s.is_finite() || x.log_norm.is_nan())
    {
        return Err(Error::Range(format!(
            "sample at s = {} is not a number",
            x.s
        )));
    }
    let ys: Vec<f64> = samples.iter().map(|x| x.log_norm).collect();
    let logs: Vec<f64> = samples.iter().map(|x| x.s.abs().ln_1p()).collect();
    let abs: Vec<f64> = samples.iter().map(|x| x.s.abs()).collect();
    let (alpha, c) = line(&logs, &ys);
    let residual = logs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (alpha * x + c)).abs())
        .fold(0.0, f64::max);
    let (exp_slope, _) = line(&abs, &ys);
    let mut report = GrowthReport {
        samples,
        alpha,
        prefactor: c.exp(),
        residual,
        exp_slope,
        verdict: Verdict::Inconclusive,
    };
    report.verdict = classify_growth(&report, cfg)?;
    Ok(report)
}

pub fn classify_growth(report: &GrowthReport, cfg: &GrowthConfig) -> Result<Verdict> {
    if report.samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: report.samples.len(),
        });
    }
    Ok(if report.residual < cfg.residual_threshold {
        Verdict::Polynomial
    } else if report.exp_slope > cfg.slope_threshold {
        Verdict::Exponential
    } else {
        Verdict::Inconclusive
    })
}

/// Symmetric grid: `n_pts / 2` log-spaced points in `[s_min, s_max]`, their
/// negatives, and 0 when `n_pts` is odd.
pub fn s_grid(s_max: f64, n_pts: usize, cfg: &GrowthConfig) -> Result<Vec<f64>> {
    if !(s_max > 1.0) || !s_max.is_finite() {
        return Err(Error::Range(format!(
            "s_max must be a finite number above 1, got {s_max}"
        )));
    }
    if n_pts < MIN_SAMPLES {
        return Err(Error::Range(format!(
            "need at least {MIN_SAMPLES} grid points, got {n_pts}"
        )));
    }
    let s_min = cfg.s_min.unwrap_or_else(|| s_max.cbrt());
    if !(s_min > 0.0 && s_min < s_max) {
        return Err(Error::Range(format!(
            "s_min must lie in (0, {s_max}), got {s_min}"
        )));
    }
    let half = n_pts / 2;
    let (lo, hi) = (s_min.ln(), s_max.ln());
    let pos: Vec<f64> = (0..half)
        .map(|k| (lo + (hi - lo) * k as f64 / (half - 1) as f64).exp())
        .collect();
    let mut grid: Vec<f64> = pos.iter().rev().map(|s| -s).collect();
    if n_pts % 2 == 1 {
        grid.push(0.0);
    }
    grid.extend(pos);
    Ok(grid)
}

/// Growth of `s ↦ ‖e^{isb}‖_∞` for a constant matrix.
pub fn growth_fit(
    b: &NumericTriMatrix,
    s_max: f64,
    n_pts: usize,
    cfg: &GrowthConfig,
) -> Result<GrowthReport> {
    let grid = s_grid(s_max, n_pts, cfg)?;
    let samples = grid
        .par_iter()
        .map(|&s| Sample {
            s,
            log_norm: log_norm_exp(b, s),
        })
        .collect();
    analyze(samples, cfg)
}

/// `K_GRID` equally spaced points of each component of `K`.
pub fn k_grid(k: &RealCompactSet) -> Vec<Rational> {
    let last = int(K_GRID as i64 - 1);
    k.intervals()
        .iter()
        .flat_map(|iv| {
            let last = last.clone();
            (0..K_GRID).map(move |t| &iv.lo + (&iv.hi - &iv.lo) * int(t as i64) / &last)
        })
        .collect()
}

/// Growth of `s ↦ max_{λ ∈ K} ‖e^{isb(λ)}‖_∞` for a matrix of functions,
/// sampled on [`k_grid`].
pub fn growth_fit_function(
    b: &TriMatrixElement<RealOpenSet>,
    k: &RealCompactSet,
    s_max: f64,
    n_pts: usize,
    cfg: &GrowthConfig,
) -> Result<GrowthReport> {
    if k.is_empty() {
        return Err(Error::EmptyCompact);
    }
    let grid = s_grid(s_max, n_pts, cfg)?;
    let mats = k_grid(k)
        .iter()
        .map(|x| Ok(NumericTriMatrix::from_exact(&b.eval_at(x)?)))
        .collect::<Result<Vec<_>>>()?;
    let samples = grid
        .par_iter()
        .map(|&s| Sample {
            s,
            log_norm: mats
                .iter()
                .map(|m| log_norm_exp(m, s))
                .fold(f64::NEG_INFINITY, f64::max),
        })
        .collect();
    analyze(samples, cfg)
}
