use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// 95% confidence interval of the slope.
    pub slope_ci: (f64, f64),
}

/// Least squares of `ln q` on `ln n`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 4 {
        return invalid(format!("need at least 4 points, got {}", points.len()));
    }
    if points.iter().any(|&(n, q)| !(n > 0.0 && q > 0.0)) {
        return invalid("all values must be positive");
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("all n values coincide");
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let df = m - 2.0;
    let se = (sse / df / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, df)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    Ok(ExponentFit {
        slope,
        intercept,
        r2,
        slope_ci: (slope - t * se, slope + t * se),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let lin: Vec<_> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n| (n, n)).collect();
        assert!((fit_exponent(&lin).unwrap().slope - 1.0).abs() < 1e-12);
        let cube: Vec<_> = [8.0, 64.0, 512.0, 4096.0, 32768.0]
            .iter()
            .map(|&n: &f64| (n, 7.0 * n.cbrt()))
            .collect();
        let f = fit_exponent(&cube).unwrap();
        assert!((f.slope - 1.0 / 3.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_exponent(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
        assert!(fit_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 3.0), (4.0, 4.0)]).is_err());
    }
}
