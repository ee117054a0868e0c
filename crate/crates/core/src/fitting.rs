//! Least-squares fits: the quadratic value-ratio law `f(p)` and log-log
//! power-law exponents of degree histograms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DegreeHistogram;
use crate::valuation::zipf_value;

/// Published coefficients `(a, b, c)` of `f(p) = a·p² + b·p + c`.
pub const FP_COEFFICIENTS: (f64, f64, f64) = (12.045, 6.59, 2.5533);

/// `y = a·x² + b·x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r_squared: f64,
}

impl QuadraticFit {
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

/// `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `log₁₀ count = exponent·log₁₀ degree + log_coefficient`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_coefficient: f64,
    pub r_squared: f64,
}

fn check_finite(points: &[(f64, f64)]) -> Result<()> {
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::input("fit input contains a non-finite value"));
    }
    Ok(())
}

fn distinct_x(points: &[(f64, f64)]) -> usize {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.len()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    sum / count as f64
}

/// `1 − SS_res/SS_tot`, clamped to `[0, 1]`. A constant response is fit
/// exactly by any model with an intercept, so it scores 1.
fn r_squared(points: &[(f64, f64)], predict: impl Fn(f64) -> f64) -> f64 {
    let y_mean = mean(points.iter().map(|p| p.1));
    let ss_tot: f64 = points.iter().map(|&(_, y)| (y - y_mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return 1.0;
    }
    let ss_res: f64 = points.iter().map(|&(x, y)| (y - predict(x)).powi(2)).sum();
    (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Ordinary least squares for `y = a·x² + b·x + c`.
///
/// The normal equations are formed in the centered variable `t = x − x̄`
/// and solved by Cramer's rule, then mapped back to powers of `x`.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<QuadraticFit> {
    check_finite(points)?;
    if distinct_x(points) < 3 {
        return Err(Error::degenerate(
            "quadratic fit needs at least 3 distinct x values",
        ));
    }
    let shift = mean(points.iter().map(|p| p.0));

    // moments of t: s[k] = Σ tᵏ, r[k] = Σ tᵏ·y
    let mut s = [0.0f64; 5];
    let mut r = [0.0f64; 3];
    for &(x, y) in points {
        let t = x - shift;
        let mut tk = 1.0;
        for (k, sk) in s.iter_mut().enumerate() {
            *sk += tk;
            if k < 3 {
                r[k] += tk * y;
            }
            tk *= t;
        }
    }
    // unknowns ordered (c, b, a) for powers t⁰, t¹, t²
    let normal = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = det3(&normal);
    if det == 0.0 || !det.is_finite() {
        return Err(Error::degenerate("normal equations are singular"));
    }
    let solve_col = |col: usize| {
        let mut m = normal;
        for (row, rhs) in m.iter_mut().zip(r) {
            row[col] = rhs;
        }
        det3(&m) / det
    };
    let (c_t, b_t, a_t) = (solve_col(0), solve_col(1), solve_col(2));

    let a = a_t;
    let b = b_t - 2.0 * a_t * shift;
    let c = (a_t * shift - b_t) * shift + c_t;
    let predict = |x: f64| {
        let t = x - shift;
        (a_t * t + b_t) * t + c_t
    };
    Ok(QuadraticFit {
        a,
        b,
        c,
        r_squared: r_squared(points, predict),
    })
}

/// Ordinary least squares for a straight line.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<LinearFit> {
    check_finite(points)?;
    if distinct_x(points) < 2 {
        return Err(Error::degenerate(
            "linear fit needs at least 2 distinct x values",
        ));
    }
    let x_mean = mean(points.iter().map(|p| p.0));
    let y_mean = mean(points.iter().map(|p| p.1));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        let dx = x - x_mean;
        (sxy + dx * (y - y_mean), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    Ok(LinearFit {
        slope,
        intercept,
        r_squared: r_squared(points, |x| slope * x + intercept),
    })
}

/// Straight-line fit of `log₁₀ count` against `log₁₀ degree`.
///
/// Entries with degree 0 are skipped. This is the plain log-log regression
/// used for quick exponent estimates; it is biased by the sparse tail and is
/// not a maximum-likelihood estimator.
pub fn fit_power_law(hist: &DegreeHistogram) -> Result<PowerLawFit> {
    let points: Vec<(f64, f64)> = hist
        .iter()
        .filter(|&(d, c)| d >= 1 && c >= 1)
        .map(|(d, c)| ((d as f64).log10(), (c as f64).log10()))
        .collect();
    if points.len() < 2 {
        return Err(Error::degenerate(
            "power-law fit needs at least 2 entries with degree >= 1",
        ));
    }
    let line = fit_linear(&points)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        log_coefficient: line.intercept,
        r_squared: line.r_squared,
    })
}

/// The published value-ratio law `f(p)`.
pub fn eval_fp(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("probability {p} outside [0, 1]")));
    }
    let (a, b, c) = FP_COEFFICIENTS;
    Ok((a * p + b) * p + c)
}

/// `f(p)·n·log₁₀ n`. Defined for `n ≥ 1` (zero at `n = 1`).
pub fn predicted_value(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::input("predicted value needs n >= 1"));
    }
    Ok(eval_fp(p)? * zipf_value(n))
}
