//! Uniform-grid bracketing and bisection.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `steps + 1` equally spaced points from `lo` to `hi`, both included.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let h = (hi - lo) / steps as f64;
    (0..=steps).map(|i| if i == steps { hi } else { lo + h * i as f64 }).collect()
}

/// Evaluate `f` on every grid point, in parallel, keeping grid order.
pub fn evaluate<F>(grid: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.par_iter().map(|&x| f(x)).collect()
}

/// Indices `i` where `values[i]` and `values[i + 1]` lie on different sides of zero.
///
/// A value of exactly zero counts as non-positive.
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0] > 0.0) != (w[1] > 0.0))
        .map(|(i, _)| i)
        .collect()
}

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
///
/// Runs until the bracket stops shrinking in floating point or is narrower than
/// `tol`, then returns whichever end has the smaller `|f|`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::InvalidParams(format!("[{lo}, {hi}] does not bracket a root")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

/// Default absolute tolerance on refined roots.
pub const ROOT_TOL: f64 = 1e-14;

/// All sign-change roots of `f` on a uniform grid, bisection-refined.
pub fn grid_roots<F>(f: F, lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let grid = uniform_grid(lo, hi, steps);
    let values = evaluate(&grid, &f)?;
    sign_changes(&values)
        .into_par_iter()
        .map(|i| bisect(&f, grid[i], grid[i + 1], ROOT_TOL))
        .collect()
}
