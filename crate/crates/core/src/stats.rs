//! Minimal least-squares fitting for the empirical growth summaries.
//!
//! Exact arithmetic ends where these helpers begin: fits are reporting
//! aids attached to census output, never part of a verified claim.

/// Result of fitting `y = slope * x + intercept` by least squares.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Per-point residuals `y_i - (slope * x_i + intercept)`.
    pub residuals: Vec<f64>,
}

/// Least-squares line through the points; `None` when fewer than two
/// points are given or all abscissae coincide.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residuals = points
        .iter()
        .map(|&(x, y)| y - (slope * x + intercept))
        .collect();
    Some(LinearFit {
        slope,
        intercept,
        residuals,
    })
}
