//! Least-squares growth fits in log space.

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModel {
    /// `log y = slope * log x + intercept`
    Power,
    /// `log y = slope * x + intercept`
    Exponential,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} has a nonpositive value")]
    NonPositive(usize),
    #[error("all x values are equal")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit<T> {
    pub model: GrowthModel,
    pub slope: T,
    pub intercept: T,
    /// Root mean square of the residuals in the transformed space.
    pub residual: T,
    pub points: Vec<(T, T)>,
}

pub fn fit_growth<T: Float>(
    points: &[(T, T)],
    model: GrowthModel,
) -> Result<GrowthFit<T>, FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for (i, &(x, y)) in points.iter().enumerate() {
        if y <= T::zero() || (model == GrowthModel::Power && x <= T::zero()) {
            return Err(FitError::NonPositive(i));
        }
        xs.push(if model == GrowthModel::Power {
            x.ln()
        } else {
            x
        });
        ys.push(y.ln());
    }
    let (slope, intercept) = least_squares(&xs, &ys).ok_or(FitError::Degenerate)?;
    let n = T::from(xs.len()).expect("small count fits in a float");
    let sse = xs.iter().zip(&ys).fold(T::zero(), |acc, (&x, &y)| {
        let r = y - (slope * x + intercept);
        acc + r * r
    });
    Ok(GrowthFit {
        model,
        slope,
        intercept,
        residual: (sse / n).sqrt(),
        points: points.to_vec(),
    })
}

/// Ordinary least squares line through `(xs, ys)`.
pub fn least_squares<T: Float>(xs: &[T], ys: &[T]) -> Option<(T, T)> {
    let n = T::from(xs.len())?;
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - mx) * (y - my);
        sxx = sxx + (x - mx) * (x - mx);
    }
    if sxx <= T::epsilon() * n {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
