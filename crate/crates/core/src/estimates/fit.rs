use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least-squares line through log-log points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    /// Natural logarithms of the abscissas.
    pub log_x: Vec<f64>,
    /// Natural logarithms of the ordinates.
    pub log_y: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the residuals, in log units.
    pub residual_rms: f64,
}

impl SlopeFit {
    /// Fits `log y = slope · log x + intercept`; needs at least three
    /// strictly positive points.
    pub fn from_raw(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidParameter("abscissa/ordinate length mismatch".into()));
        }
        if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter("log-log fit needs positive finite values".into()));
        }
        Self::from_logs(x.iter().map(|v| v.ln()).collect(), y.iter().map(|v| v.ln()).collect())
    }

    pub fn from_logs(log_x: Vec<f64>, log_y: Vec<f64>) -> Result<Self> {
        let n = log_x.len();
        if n < 3 || log_y.len() != n {
            return Err(Error::InvalidParameter(format!("slope fit needs >= 3 points, got {n}")));
        }
        let nf = n as f64;
        let mx = log_x.iter().sum::<f64>() / nf;
        let my = log_y.iter().sum::<f64>() / nf;
        let sxx: f64 = log_x.iter().map(|x| (x - mx) * (x - mx)).sum();
        if sxx == 0.0 {
            return Err(Error::InvalidParameter("degenerate abscissas".into()));
        }
        let sxy: f64 = log_x.iter().zip(&log_y).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss: f64 = log_x.iter().zip(&log_y).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
        Ok(SlopeFit { log_x, log_y, slope, intercept, residual_rms: (ss / nf).sqrt() })
    }

    /// Fitted `log y` at `log x`.
    pub fn predict(&self, log_x: f64) -> f64 {
        self.slope * log_x + self.intercept
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.5)).collect();
        let f = SlopeFit::from_raw(&x, &y).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.residual_rms < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(SlopeFit::from_raw(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(SlopeFit::from_raw(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]).is_err());
        assert!(SlopeFit::from_raw(&[2.0, 2.0, 2.0], &[1.0, 3.0, 2.0]).is_err());
    }

    #[test]
    fn residual_is_reported() {
        let f = SlopeFit::from_logs(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!(f.residual_rms > 0.3);
    }
}
