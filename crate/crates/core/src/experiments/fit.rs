//! Least-squares power laws on log–log data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fit log(value) = intercept + slope·log(N) over points with N inside the
/// closed `window`. Nonpositive or non-finite values are dropped with a warning.
pub fn fit_power_law(points: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = 0;
    for &(n, v) in points {
        if n < window.0 || n > window.1 {
            continue;
        }
        if n > 0.0 && v > 0.0 && v.is_finite() && n.is_finite() {
            xs.push(n.ln());
            ys.push(v.ln());
        } else {
            dropped += 1;
        }
    }
    if dropped > 0 {
        log::warn!("power-law fit dropped {dropped} nonpositive points");
    }
    if xs.len() < 3 {
        return Err(Error::Fit { got: xs.len() });
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::argument("points", "all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(PowerLawFit {
        slope,
        intercept,
        r_squared,
        points: xs.len(),
    })
}

/// Fits on even-N points, odd-N points, and on the parity-averaged series
/// ((v(N) + v(N+1))/2 placed at N + 1/2, for consecutive N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityFits {
    pub even: Option<PowerLawFit>,
    pub odd: Option<PowerLawFit>,
    pub averaged: Option<PowerLawFit>,
}

pub fn parity_averaged(points: &[(usize, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.0);
    sorted
        .windows(2)
        .filter(|w| w[1].0 == w[0].0 + 1)
        .map(|w| (w[0].0 as f64 + 0.5, 0.5 * (w[0].1 + w[1].1)))
        .collect()
}

pub fn fit_parity_aware(points: &[(usize, f64)], window: (f64, f64)) -> ParityFits {
    let select = |parity: usize| -> Vec<(f64, f64)> {
        points
            .iter()
            .filter(|p| p.0 % 2 == parity)
            .map(|&(n, v)| (n as f64, v))
            .collect()
    };
    let attempt = |pts: &[(f64, f64)], label: &str| match fit_power_law(pts, window) {
        Ok(f) => Some(f),
        Err(e) => {
            log::warn!("{label} fit skipped: {e}");
            None
        }
    };
    ParityFits {
        even: attempt(&select(0), "even-N"),
        odd: attempt(&select(1), "odd-N"),
        averaged: attempt(&parity_averaged(points), "parity-averaged"),
    }
}
