//! Power-law least squares `y = a·x^b`.
//!
//! The log–log regression gives a closed-form seed; Levenberg–Marquardt
//! then minimises the residuals in the original `y` space, which is what
//! the reported `r²` measures.

use super::SensingError;

const MAX_ITERATIONS: usize = 200;

/// Fitted coefficients and goodness of fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
}

fn check_points(points: &[(f64, f64)]) -> Result<(), SensingError> {
    if points.len() < 3 {
        return Err(SensingError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    for &(x, y) in points {
        if !(x.is_finite() && x > 0.0) {
            return Err(SensingError::invalid(
                "x",
                format!("abscissae must be finite and > 0, got {x}"),
            ));
        }
        if !(y.is_finite() && y > 0.0) {
            return Err(SensingError::invalid(
                "y",
                format!("ordinates must be finite and > 0, got {y}"),
            ));
        }
    }
    let x0 = points[0].0;
    if points.iter().all(|&(x, _)| x == x0) {
        return Err(SensingError::RankDeficient);
    }
    Ok(())
}

/// Ordinary least squares of `ln y = ln a + b·ln x`; returns `(ln a, b)`.
fn log_log_seed(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.ln() - my);
    }
    let b = sxy / sxx;
    (my - b * mx, b)
}

fn cost(points: &[(f64, f64)], ln_a: f64, b: f64) -> f64 {
    points
        .iter()
        .map(|&(x, y)| {
            let r = y - (ln_a + b * x.ln()).exp();
            r * r
        })
        .sum()
}

/// Least-squares fit of `y = a·x^b` in `y` space.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit, SensingError> {
    check_points(points)?;
    let (mut ln_a, mut b) = log_log_seed(points);
    let mut current = cost(points, ln_a, b);
    let mut lambda = 1e-3;

    for _ in 0..MAX_ITERATIONS {
        if current == 0.0 {
            break;
        }
        // normal equations J^T J δ = J^T r with J = [f, f·ln x]
        let (mut j00, mut j01, mut j11, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in points {
            let lx = x.ln();
            let f = (ln_a + b * lx).exp();
            let r = y - f;
            j00 += f * f;
            j01 += f * f * lx;
            j11 += f * f * lx * lx;
            g0 += f * r;
            g1 += f * lx * r;
        }
        let mut accepted = false;
        while lambda < 1e12 {
            let (m00, m11) = (j00 * (1.0 + lambda), j11 * (1.0 + lambda));
            let det = m00 * m11 - j01 * j01;
            if !(det.is_finite() && det > 0.0) {
                return Err(SensingError::RankDeficient);
            }
            let d0 = (m11 * g0 - j01 * g1) / det;
            let d1 = (m00 * g1 - j01 * g0) / det;
            let trial = cost(points, ln_a + d0, b + d1);
            if trial <= current {
                let small =
                    d0.abs() <= 1e-15 * (1.0 + ln_a.abs()) && d1.abs() <= 1e-15 * (1.0 + b.abs());
                ln_a += d0;
                b += d1;
                current = trial;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }

    let a = ln_a.exp();
    if !(a.is_finite() && b.is_finite()) {
        return Err(SensingError::NoConvergence);
    }
    Ok(PowerLawFit {
        a,
        b,
        r2: r_squared(points, a, b),
    })
}

/// Coefficient of determination `1 − SS_res/SS_tot` of `y = a·x^b`.
/// Constant data is explained exactly by `b = 0`, so `SS_tot = 0` gives 1.
pub fn r_squared(points: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let n = points.len() as f64;
    let mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| (y - a * x.powf(b)).powi(2))
        .sum();
    if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    }
}
