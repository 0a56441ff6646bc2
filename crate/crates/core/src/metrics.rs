//! Decoding error metrics on the ring (head direction) and in the plane (position).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest arc, in `[0, 180]` degrees, for an angular difference.
pub fn rescale(delta: f64) -> f64 {
    let r = delta.rem_euclid(360.0);
    r.min(360.0 - r)
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            what: "series length",
            expected: a,
            got: b,
        });
    }
    if a == 0 {
        return Err(Error::Empty("error series"));
    }
    Ok(())
}

pub fn angular_errors(decoded: &[f64], truth: &[f64]) -> Result<Vec<f64>> {
    check_lengths(truth.len(), decoded.len())?;
    Ok(decoded.iter().zip(truth).map(|(d, t)| rescale(d - t)).collect())
}

/// Median; even lengths average the two middle values.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("error series"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median absolute error in degrees.
pub fn mae(decoded: &[f64], truth: &[f64]) -> Result<f64> {
    median(&angular_errors(decoded, truth)?)
}

/// Average absolute error in degrees.
pub fn aae(decoded: &[f64], truth: &[f64]) -> Result<f64> {
    Ok(mean(&angular_errors(decoded, truth)?))
}

pub fn euclidean_errors(decoded: &[[f64; 2]], truth: &[[f64; 2]]) -> Result<Vec<f64>> {
    check_lengths(truth.len(), decoded.len())?;
    Ok(decoded
        .iter()
        .zip(truth)
        .map(|(d, t)| (d[0] - t[0]).hypot(d[1] - t[1]))
        .collect())
}

/// Average Euclidean distance, in the units of the positions.
pub fn aed(decoded: &[[f64; 2]], truth: &[[f64; 2]]) -> Result<f64> {
    Ok(mean(&euclidean_errors(decoded, truth)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleRow {
    pub bin: usize,
    pub true_deg: f64,
    pub decoded_deg: f64,
    pub error_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionRow {
    pub bin: usize,
    pub true_x: f64,
    pub true_y: f64,
    pub decoded_x: f64,
    pub decoded_y: f64,
    pub error_cm: f64,
}

/// Summary fields written to `report.json`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Summary {
    Hd { mae_deg: f64, aae_deg: f64, n_bins: usize },
    Grid { aed_cm: f64, n_bins: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ErrorReport {
    Hd { rows: Vec<AngleRow>, mae_deg: f64, aae_deg: f64 },
    Grid { rows: Vec<PositionRow>, aed_cm: f64 },
}

impl ErrorReport {
    pub fn angles(bins: &[usize], decoded: &[f64], truth: &[f64]) -> Result<Self> {
        let errors = angular_errors(decoded, truth)?;
        check_lengths(errors.len(), bins.len())?;
        let rows = bins
            .iter()
            .zip(decoded.iter().zip(truth))
            .zip(&errors)
            .map(|((&bin, (&d, &t)), &e)| AngleRow {
                bin,
                true_deg: t,
                decoded_deg: d,
                error_deg: e,
            })
            .collect();
        Ok(ErrorReport::Hd {
            rows,
            mae_deg: median(&errors)?,
            aae_deg: mean(&errors),
        })
    }

    pub fn positions(bins: &[usize], decoded: &[[f64; 2]], truth: &[[f64; 2]]) -> Result<Self> {
        let errors = euclidean_errors(decoded, truth)?;
        check_lengths(errors.len(), bins.len())?;
        let rows = bins
            .iter()
            .zip(decoded.iter().zip(truth))
            .zip(&errors)
            .map(|((&bin, (d, t)), &e)| PositionRow {
                bin,
                true_x: t[0],
                true_y: t[1],
                decoded_x: d[0],
                decoded_y: d[1],
                error_cm: e,
            })
            .collect();
        Ok(ErrorReport::Grid {
            rows,
            aed_cm: mean(&errors),
        })
    }

    pub fn n_bins(&self) -> usize {
        match self {
            ErrorReport::Hd { rows, .. } => rows.len(),
            ErrorReport::Grid { rows, .. } => rows.len(),
        }
    }

    /// AAE for head direction, AED for position.
    pub fn headline(&self) -> f64 {
        match self {
            ErrorReport::Hd { aae_deg, .. } => *aae_deg,
            ErrorReport::Grid { aed_cm, .. } => *aed_cm,
        }
    }

    pub fn summary(&self) -> Summary {
        match self {
            ErrorReport::Hd { mae_deg, aae_deg, .. } => Summary::Hd {
                mae_deg: *mae_deg,
                aae_deg: *aae_deg,
                n_bins: self.n_bins(),
            },
            ErrorReport::Grid { aed_cm, .. } => Summary::Grid {
                aed_cm: *aed_cm,
                n_bins: self.n_bins(),
            },
        }
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary())?)
    }

    /// Per-bin rows under a header, followed by `# key,value` summary lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match self {
            ErrorReport::Hd { rows, mae_deg, aae_deg } => {
                s.push_str("bin,true_deg,decoded_deg,error_deg\n");
                for r in rows {
                    let _ = writeln!(s, "{},{},{},{}", r.bin, r.true_deg, r.decoded_deg, r.error_deg);
                }
                let _ = writeln!(s, "# mae_deg,{mae_deg}\n# aae_deg,{aae_deg}");
            }
            ErrorReport::Grid { rows, aed_cm } => {
                s.push_str("bin,true_x,true_y,decoded_x,decoded_y,error_cm\n");
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        r.bin, r.true_x, r.true_y, r.decoded_x, r.decoded_y, r.error_cm
                    );
                }
                let _ = writeln!(s, "# aed_cm,{aed_cm}");
            }
        }
        let _ = writeln!(s, "# n_bins,{}", self.n_bins());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale(310.0 - 20.0), 70.0);
        assert_eq!(rescale(0.0), 0.0);
        assert_eq!(rescale(359.0 - 1.0), 2.0);
        assert_eq!(rescale(-180.0), 180.0);
    }

    #[test]
    fn median_and_mean_conventions() {
        let truth = [0.0; 4];
        assert_eq!(mae(&[10.0, 20.0, 30.0], &truth[..3]).unwrap(), 20.0);
        assert_eq!(mae(&[10.0, 20.0, 30.0, 100.0], &truth).unwrap(), 25.0);
        assert_eq!(aae(&[10.0, 20.0, 30.0], &truth[..3]).unwrap(), 20.0);
        assert_eq!(aae(&[10.0, 20.0, 30.0, 100.0], &truth).unwrap(), 40.0);
        assert_eq!(aae(&[5.0, 6.0], &[5.0, 6.0]).unwrap(), 0.0);
        assert!(mae(&[], &[]).is_err());
        assert!(aae(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn aed_examples() {
        assert_eq!(aed(&[[3.0, 4.0]], &[[0.0, 0.0]]).unwrap(), 5.0);
        assert_eq!(aed(&[[3.0, 4.0], [1.0, 1.0]], &[[0.0, 0.0], [1.0, 1.0]]).unwrap(), 2.5);
        assert!(aed(&[], &[]).is_err());
    }

    #[test]
    fn report_schema() {
        let r = ErrorReport::angles(&[4, 5], &[10.0, 350.0], &[0.0, 0.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.summary_json().unwrap()).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["aae_deg", "mae_deg", "n_bins"]);
        assert!(r.to_csv().ends_with("# n_bins,2\n"));

        let g = ErrorReport::positions(&[0], &[[3.0, 4.0]], &[[0.0, 0.0]]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&g.summary_json().unwrap()).unwrap();
        assert_eq!(v["aed_cm"], 5.0);
        assert_eq!(v.as_object().unwrap().len(), 2);
    }
}
