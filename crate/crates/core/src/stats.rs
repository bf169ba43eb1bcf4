//! Agreement, reliability and planning statistics.

use serde::{Deserialize, Serialize};

use crate::error::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Confusion2x2 {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
}

impl Confusion2x2 {
    pub fn new(true_pos: u64, false_pos: u64, false_neg: u64, true_neg: u64) -> Confusion2x2 {
        Confusion2x2 {
            true_pos,
            false_pos,
            false_neg,
            true_neg,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    /// Tallies one (predicted, actual) pair.
    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.true_pos += 1,
            (true, false) => self.false_pos += 1,
            (false, true) => self.false_neg += 1,
            (false, false) => self.true_neg += 1,
        }
    }

    /// Same table with the positive and negative classes swapped.
    pub fn swapped(&self) -> Confusion2x2 {
        Confusion2x2::new(self.true_neg, self.false_neg, self.false_pos, self.true_pos)
    }
}

pub fn cohen_kappa(c: &Confusion2x2) -> Result<f64, StatsError> {
    let n = c.total() as f64;
    if n == 0.0 {
        return Err(StatsError::Degenerate("empty confusion table"));
    }
    let po = (c.true_pos + c.true_neg) as f64 / n;
    let pred_pos = (c.true_pos + c.false_pos) as f64 / n;
    let act_pos = (c.true_pos + c.false_neg) as f64 / n;
    let pe = pred_pos * act_pos + (1.0 - pred_pos) * (1.0 - act_pos);
    if (1.0 - pe).abs() < 1e-15 {
        return Err(StatsError::Degenerate("expected agreement is 1"));
    }
    Ok((po - pe) / (1.0 - pe))
}

/// `(precision, recall)`; `None` where the denominator is zero.
pub fn precision_recall(c: &Confusion2x2) -> (Option<f64>, Option<f64>) {
    let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
    (
        ratio(c.true_pos, c.true_pos + c.false_pos),
        ratio(c.true_pos, c.true_pos + c.false_neg),
    )
}

/// Subjects in rows, raters in columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RaterMatrix {
    rows: Vec<Vec<f64>>,
}

impl RaterMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<RaterMatrix, StatsError> {
        if rows.len() < 2 {
            return Err(StatsError::Domain("need at least two subjects"));
        }
        let k = rows[0].len();
        if k < 2 {
            return Err(StatsError::Domain("need at least two raters"));
        }
        if rows.iter().any(|r| r.len() != k || r.iter().any(|v| !v.is_finite())) {
            return Err(StatsError::Domain("ragged matrix or missing cell"));
        }
        Ok(RaterMatrix { rows })
    }

    pub fn subjects(&self) -> usize {
        self.rows.len()
    }

    pub fn raters(&self) -> usize {
        self.rows[0].len()
    }
}

/// ICC(2,1): two-way random effects, absolute agreement, single rater.
pub fn icc_absolute_agreement(m: &RaterMatrix) -> Result<f64, StatsError> {
    let n = m.subjects() as f64;
    let k = m.raters() as f64;
    let grand = m.rows.iter().flatten().sum::<f64>() / (n * k);
    let sst: f64 = m.rows.iter().flatten().map(|v| (v - grand).powi(2)).sum();
    if sst <= 1e-12 {
        return Err(StatsError::Degenerate("zero total variance"));
    }
    let ssr: f64 = m
        .rows
        .iter()
        .map(|r| (r.iter().sum::<f64>() / k - grand).powi(2))
        .sum::<f64>()
        * k;
    let ssc: f64 = (0..m.raters())
        .map(|j| (m.rows.iter().map(|r| r[j]).sum::<f64>() / n - grand).powi(2))
        .sum::<f64>()
        * n;
    let sse = (sst - ssr - ssc).max(0.0);
    let msr = ssr / (n - 1.0);
    let msc = ssc / (k - 1.0);
    let mse = sse / ((n - 1.0) * (k - 1.0));
    let den = msr + (k - 1.0) * mse + k * (msc - mse) / n;
    if den.abs() < 1e-15 {
        return Err(StatsError::Degenerate("zero denominator"));
    }
    Ok((msr - mse) / den)
}

/// Standard normal quantile, Acklam's rational approximation (relative error below 1.2e-9).
pub fn normal_quantile(p: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::Domain("probability must lie in (0, 1)"));
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    const LOW: f64 = 0.02425;
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    Ok(if p < LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    })
}

/// Participants needed to detect correlation `r` (two-tailed `alpha`) with the
/// given power, via the Fisher transform.
pub fn power_sample_size(r: f64, alpha: f64, power: f64) -> Result<u64, StatsError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(StatsError::Domain("r must lie in (0, 1)"));
    }
    if !(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0) {
        return Err(StatsError::Domain("alpha and power must lie in (0, 1)"));
    }
    let c = 0.5 * ((1.0 + r) / (1.0 - r)).ln();
    let z = normal_quantile(1.0 - alpha / 2.0)? + normal_quantile(power)?;
    Ok(((z / c).powi(2) + 3.0).ceil() as u64)
}

/// Type-7 quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `(median, q1, q3)` with linear interpolation between order statistics.
pub fn median_iqr(values: &[f64]) -> Result<(f64, f64, f64), StatsError> {
    if values.is_empty() {
        return Err(StatsError::Domain("empty sample"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(StatsError::Domain("NaN in sample"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok((quantile_sorted(&v, 0.5), quantile_sorted(&v, 0.25), quantile_sorted(&v, 0.75)))
}

pub fn median(values: &[f64]) -> Result<f64, StatsError> {
    median_iqr(values).map(|(m, _, _)| m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(cohen_kappa(&Confusion2x2::new(50, 0, 0, 50)).unwrap(), 1.0);
        assert!((cohen_kappa(&Confusion2x2::new(40, 5, 10, 45)).unwrap() - 0.70).abs() < 1e-12);
        assert!(cohen_kappa(&Confusion2x2::new(25, 25, 25, 25)).unwrap().abs() < 1e-12);
        assert!(cohen_kappa(&Confusion2x2::new(10, 0, 0, 0)).is_err());
        assert!(cohen_kappa(&Confusion2x2::default()).is_err());
    }

    #[test]
    fn precision_recall_examples() {
        assert_eq!(precision_recall(&Confusion2x2::new(9, 1, 0, 10)), (Some(0.9), Some(1.0)));
        assert_eq!(precision_recall(&Confusion2x2::new(0, 0, 5, 10)), (None, Some(0.0)));
    }

    #[test]
    fn icc_examples() {
        let same = RaterMatrix::new(vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]]).unwrap();
        assert!((icc_absolute_agreement(&same).unwrap() - 1.0).abs() < 1e-12);
        let flat = RaterMatrix::new(vec![vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        assert!(icc_absolute_agreement(&flat).is_err());
        assert!(RaterMatrix::new(vec![vec![1.0, 2.0]]).is_err());
        assert!(RaterMatrix::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn power_examples() {
        assert_eq!(power_sample_size(0.30, 0.05, 0.80).unwrap(), 85);
        assert_eq!(power_sample_size(0.25, 0.05, 0.80).unwrap(), 124);
        assert_eq!(power_sample_size(0.50, 0.05, 0.80).unwrap(), 30);
        assert!(power_sample_size(1.0, 0.05, 0.8).is_err());
        assert!(power_sample_size(0.3, 0.0, 0.8).is_err());
    }

    #[test]
    fn quartile_examples() {
        assert_eq!(median_iqr(&[1.0]).unwrap(), (1.0, 1.0, 1.0));
        assert_eq!(median_iqr(&[1.0, 2.0, 3.0, 4.0]).unwrap(), (2.5, 1.75, 3.25));
        assert_eq!(median_iqr(&[5.0; 4]).unwrap(), (5.0, 5.0, 5.0));
        assert!(median_iqr(&[]).is_err());
    }
}
