//! Per-group regression, one-sample t-tests on slopes, Kruskal-Wallis and
//! MSE. All p-values are two-tailed (the chi-square ones upper-tailed).

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: usize,
    pub p_two_tailed: f64,
    pub mean: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KwResult {
    pub h: f64,
    pub df: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub p: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Ordinary least squares fit of `ys` on `xs`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Result<RegressionResult> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewSamples { need: 2, got: xs.len() });
    }
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateX);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(RegressionResult {
        slope,
        intercept: my - slope * mx,
        n: xs.len(),
    })
}

/// Two-tailed p-value of a t statistic with `df` degrees of freedom.
pub fn t_two_tailed_p(t: f64, df: usize) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(df as f64).expect("df >= 1").sf(x)
}

pub fn one_sample_ttest(values: &[f64], mu0: f64) -> Result<TTestResult> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewSamples { need: 2, got: n });
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    // relative test so that shifting values and mu0 together cannot turn
    // rounding noise into a finite t
    let scale = values.iter().fold(mu0.abs(), |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    if var.sqrt() <= 1e-13 * scale {
        return Err(Error::ZeroVariance);
    }
    let t = (m - mu0) / (var.sqrt() / (n as f64).sqrt());
    let df = n - 1;
    Ok(TTestResult {
        t,
        df,
        p_two_tailed: t_two_tailed_p(t, df),
        mean: m,
        n,
    })
}

/// Slope of each group's regression.
pub fn group_slopes(per_group_xy: &[(Vec<f64>, Vec<f64>)]) -> Result<Vec<f64>> {
    per_group_xy
        .iter()
        .map(|(xs, ys)| linear_regression(xs, ys).map(|r| r.slope))
        .collect()
}

/// Regress each group, then t-test the slopes against `mu0`.
pub fn slope_ttest(per_group_xy: &[(Vec<f64>, Vec<f64>)], mu0: f64) -> Result<TTestResult> {
    if per_group_xy.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: per_group_xy.len(),
        });
    }
    one_sample_ttest(&group_slopes(per_group_xy)?, mu0)
}

/// Average ranks (1-based) of `values`, ties sharing their mean rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Kruskal-Wallis H with average ranks and tie correction.
///
/// When every pooled value is identical the tie correction vanishes; H is
/// then reported as 0 with p = 1.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<KwResult> {
    if groups.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: groups.len(),
        });
    }
    if let Some(i) = groups.iter().position(Vec::is_empty) {
        return Err(Error::EmptyCell(format!("kruskal-wallis group {i} is empty")));
    }
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = pooled.len() as f64;
    let ranks = average_ranks(&pooled);
    let df = groups.len() - 1;

    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        let t = j as f64;
        tie_sum += t * t * t - t;
        i += j;
    }
    let correction = 1.0 - tie_sum / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(KwResult { h: 0.0, df, p: 1.0 });
    }

    let mut offset = 0;
    let mut sum_sq = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum_sq += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = ((12.0 / (n * (n + 1.0)) * sum_sq - 3.0 * (n + 1.0)) / correction).max(0.0);
    Ok(KwResult {
        h,
        df,
        p: chi_square_sf(h, df),
    })
}

/// Mean squared element-wise difference.
pub fn mse(model: &[f64], target: &[f64]) -> Result<f64> {
    if model.len() != target.len() || model.is_empty() {
        return Err(Error::LengthMismatch {
            left: model.len(),
            right: target.len(),
        });
    }
    Ok(model.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / model.len() as f64)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewSamples { need: 1, got: 0 });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    Ok(KsResult {
        d,
        p: kolmogorov_q(lambda),
    })
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let k = f64::from(k);
        let term = sign * (-2.0 * k * k * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
