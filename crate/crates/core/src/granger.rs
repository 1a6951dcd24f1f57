//! Granger causality: do lags of `x` improve an autoregression of `y`?
//!
//! For each lag order `L` in `1..=max_lag`, rows `t = L..N` are regressed by
//! ordinary least squares twice:
//!
//! - restricted: `y_t ~ 1 + y_{t-1} + ... + y_{t-L}`
//! - unrestricted: the same plus `x_{t-1} + ... + x_{t-L}`
//!
//! and the Wald statistic `T * (RSS_r - RSS_u) / RSS_u` is referred to a
//! chi-square with `L` degrees of freedom, `T = N - L` being the rows used.
//!
//! The intercept is absorbed by centering every column. Columns are then
//! scaled to unit norm and the normal equations solved twice, with and
//! without a 1e-10 ridge on the diagonal; if the ridge moves the residual
//! sum of squares by more than 1e-6 (relative), the regressors are treated
//! as collinear and the lag is reported as a degenerate fit.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stats::chi_square_sf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrangerOptions {
    pub max_lag: usize,
    pub difference_y: bool,
    pub difference_x: bool,
}

impl GrangerOptions {
    pub fn new(max_lag: usize) -> Self {
        GrangerOptions {
            max_lag,
            difference_y: false,
            difference_x: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagResult {
    pub lag: usize,
    pub chi2: f64,
    pub df: usize,
    pub p_value: f64,
    /// Rows used in both regressions.
    pub nobs: usize,
    pub rss_restricted: f64,
    pub rss_unrestricted: f64,
}

const RIDGE: f64 = 1e-10;
const RIDGE_TOLERANCE: f64 = 1e-6;

fn difference(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Tests whether `x` Granger-causes `y` at every lag up to `opts.max_lag`.
pub fn granger_test(y: &[f64], x: &[f64], opts: &GrangerOptions) -> Result<Vec<LagResult>> {
    if y.len() != x.len() {
        return Err(Error::invalid(format!(
            "series lengths differ: y has {}, x has {}",
            y.len(),
            x.len()
        )));
    }
    if opts.max_lag == 0 {
        return Err(Error::invalid("max_lag must be at least 1"));
    }
    if let Some(i) = y.iter().chain(x).position(|v| !v.is_finite()) {
        let (name, at) = if i < y.len() { ("y", i) } else { ("x", i - y.len()) };
        return Err(Error::invalid(format!("{name}[{at}] is missing or not finite")));
    }

    let y: Vec<f64> = if opts.difference_y { difference(y) } else { y.to_vec() };
    let x: Vec<f64> = if opts.difference_x { difference(x) } else { x.to_vec() };
    // Align on the common tail when only one side was differenced.
    let n = y.len().min(x.len());
    let (y, x) = (&y[y.len() - n..], &x[x.len() - n..]);

    let needed = 3 * opts.max_lag + 5;
    if n < needed {
        return Err(Error::invalid(format!(
            "series too short: {n} observations, need at least {needed} for max_lag {}",
            opts.max_lag
        )));
    }

    (1..=opts.max_lag)
        .map(|lag| {
            let target = &y[lag..];
            let own = lag_block(y, lag);
            let rss_r = least_squares_rss(&own, target)
                .map_err(|why| degenerate(lag, "y", why))?;
            let mut full = own;
            full.extend(lag_block(x, lag));
            let rss_u = least_squares_rss(&full, target)
                .map_err(|why| degenerate(lag, "x", why))?;
            let nobs = target.len();
            let chi2 = (nobs as f64 * (rss_r - rss_u) / rss_u).max(0.0);
            Ok(LagResult {
                lag,
                chi2,
                df: lag,
                p_value: chi_square_sf(chi2, lag),
                nobs,
                rss_restricted: rss_r,
                rss_unrestricted: rss_u,
            })
        })
        .collect()
}

fn degenerate(lag: usize, block: &str, why: String) -> Error {
    Error::DegenerateFit(format!("lag {lag}, {block} lag block: {why}"))
}

/// Columns `s_{t-1}, ..., s_{t-lag}` for `t = lag..len`.
fn lag_block(series: &[f64], lag: usize) -> Vec<Vec<f64>> {
    let rows = series.len() - lag;
    (1..=lag)
        .map(|k| series[lag - k..lag - k + rows].to_vec())
        .collect()
}

fn centered(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Residual sum of squares of `target ~ 1 + columns`.
fn least_squares_rss(columns: &[Vec<f64>], target: &[f64]) -> Result<f64, String> {
    let yc = centered(target);
    let mut xs = Vec::with_capacity(columns.len());
    for (j, col) in columns.iter().enumerate() {
        let c = centered(col);
        let scale = norm(&c);
        if scale <= 1e-12 * norm(col).max(f64::MIN_POSITIVE) {
            return Err(format!("regressor {} has zero variance", j + 1));
        }
        xs.push(c.into_iter().map(|v| v / scale).collect::<Vec<_>>());
    }

    let p = xs.len();
    let mut gram = vec![0.0; p * p];
    let mut rhs = vec![0.0; p];
    for i in 0..p {
        for j in 0..=i {
            let dot: f64 = xs[i].iter().zip(&xs[j]).map(|(a, b)| a * b).sum();
            gram[i * p + j] = dot;
            gram[j * p + i] = dot;
        }
        rhs[i] = xs[i].iter().zip(&yc).map(|(a, b)| a * b).sum();
    }

    let rss_of = |beta: &[f64]| -> f64 {
        (0..yc.len())
            .map(|t| {
                let fit: f64 = (0..p).map(|j| xs[j][t] * beta[j]).sum();
                let r = yc[t] - fit;
                r * r
            })
            .sum()
    };

    let exact = cholesky_solve(&gram, &rhs, p, 0.0).ok_or("regressors are collinear")?;
    let ridged = cholesky_solve(&gram, &rhs, p, RIDGE).ok_or("regressors are collinear")?;
    let rss = rss_of(&exact);
    let rss_ridge = rss_of(&ridged);
    if rss.is_nan() || rss <= 0.0 || rss.is_infinite() {
        return Err(String::from("residual sum of squares is zero (perfect fit)"));
    }
    if (rss_ridge - rss).abs() > RIDGE_TOLERANCE * rss {
        return Err(String::from("regressors are collinear (ridge changes the fit)"));
    }
    Ok(rss)
}

/// Solves `(A + ridge I) b = rhs` for symmetric positive definite `A`
/// (row-major, `p x p`). Returns `None` when a pivot is not positive.
fn cholesky_solve(a: &[f64], rhs: &[f64], p: usize, ridge: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut s = a[i * p + j];
            if i == j {
                s += ridge;
            }
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                // columns have unit norm, so the pivot is a relative measure
                if s <= 1e-13 {
                    return None;
                }
                l[i * p + i] = libm::sqrt(s);
            } else {
                l[i * p + j] = s / l[j * p + j];
            }
        }
    }
    let mut z = vec![0.0; p];
    for i in 0..p {
        let s: f64 = (0..i).map(|k| l[i * p + k] * z[k]).sum();
        z[i] = (rhs[i] - s) / l[i * p + i];
    }
    let mut b = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|k| l[k * p + i] * b[k]).sum();
        b[i] = (z[i] - s) / l[i * p + i];
    }
    Some(b)
}
