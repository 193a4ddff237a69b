//! Convergence order estimates and Richardson extrapolation.

use crate::error::{Error, Result};

/// Least-squares line through `(ln x, ln y)`, returned as `(slope, intercept)`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Validation(format!(
            "slope fit needs at least two matching samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Validation("slope fit needs positive finite samples".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Validation("slope fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    loglog_fit(xs, ys).map(|(s, _)| s)
}

/// `|v[k+1] - v[k]|` for consecutive refinements.
pub fn successive_differences(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}

/// Extrapolates two refinements `coarse`, `fine` with refinement ratio `ratio`
/// assuming the error behaves like `C h^order`.
pub fn richardson(coarse: f64, fine: f64, ratio: f64, order: f64) -> f64 {
    let r = ratio.powf(order);
    fine + (fine - coarse) / (r - 1.0)
}

/// Observed order from three refinements with a constant ratio.
pub fn observed_order(v1: f64, v2: f64, v3: f64, ratio: f64) -> Option<f64> {
    let q = (v2 - v1) / (v3 - v2);
    (q > 0.0 && q.is_finite()).then(|| q.ln() / ratio.ln())
}

/// Extrapolates a sequence of refinements with ratio 2 from its last two terms.
pub fn richardson_sequence(values: &[f64], order: f64) -> Option<f64> {
    match values {
        [.., a, b] => Some(richardson(*a, *b, 2.0, order)),
        _ => None,
    }
}
