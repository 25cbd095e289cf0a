//! Summary statistics for Monte Carlo estimates.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;
/// One-sided 95% normal quantile.
pub const Z95_ONE_SIDED: f64 = 1.6448536269514722;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; zero for fewer than two samples.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_error(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Half-width of the normal-approximation 95% interval of the mean.
pub fn ci95(xs: &[f64]) -> f64 {
    Z95 * std_error(xs)
}

/// Half-width for a binomial proportion estimated from `trials` draws.
pub fn proportion_ci95(p: f64, trials: usize) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    Z95 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Welch statistic for `mean(a) > mean(b)`.
pub fn welch_z(a: &[f64], b: &[f64]) -> f64 {
    let se = (variance(a) / a.len() as f64 + variance(b) / b.len() as f64).sqrt();
    let diff = mean(a) - mean(b);
    if se == 0.0 {
        return if diff > 0.0 {
            f64::INFINITY
        } else if diff < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
    }
    diff / se
}

/// One-sided 95% test that `mean(a) > mean(b)`.
pub fn greater_at_95(a: &[f64], b: &[f64]) -> bool {
    welch_z(a, b) > Z95_ONE_SIDED
}
