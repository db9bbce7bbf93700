// SPDX-License-Identifier: Apache-2.0

//! Rank correlation, histograms and summary statistics over score vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A correlation coefficient, or `Degenerate` when one input is constant and
/// the coefficient is undefined. Serialized as a number or `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Option<f64>", into = "Option<f64>")]
pub enum Correlation {
    Value(f64),
    Degenerate,
}

impl Correlation {
    pub fn value(self) -> Option<f64> {
        match self {
            Correlation::Value(x) => Some(x),
            Correlation::Degenerate => None,
        }
    }
}

impl From<Option<f64>> for Correlation {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Correlation::Degenerate, Correlation::Value)
    }
}

impl From<Correlation> for Option<f64> {
    fn from(c: Correlation) -> Self {
        c.value()
    }
}

/// 1-based ranks in ascending order; tied values share their average rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::param(format!(
            "correlation needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::param("correlation needs at least two values"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Correlation::Degenerate);
    }
    Ok(Correlation::Value((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)))
}

/// Spearman's rank correlation: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return pearson(x, y);
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` ascending bin boundaries.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Sturges' rule: `ceil(log2 n) + 1` bins.
pub fn sturges_bins(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        (n as f64).log2().ceil() as usize + 1
    }
}

/// Equal-width histogram over `[min, max]`; the last bin is closed. A
/// constant input yields a single bin.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::param("histogram needs at least one bin"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("histogram values must be finite"));
    }
    if values.is_empty() {
        return Ok(Histogram {
            edges: vec![0.0, 0.0],
            counts: vec![0],
        });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(Histogram {
            edges: vec![min, max],
            counts: vec![values.len()],
        });
    }
    let width = (max - min) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| min + width * i as f64).collect();
    edges.push(max);
    let mut counts = vec![0; bins];
    for &v in values {
        let b = (((v - min) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(Histogram { edges, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub stddev: f64,
    /// Gini coefficient; 0 when all values are zero.
    pub gini: f64,
}

pub fn summary(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::param("summary of an empty sequence"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let total: f64 = sorted.iter().sum();
    let mean = total / nf;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let var = sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    let gini = if total == 0.0 {
        0.0
    } else {
        let weighted: f64 = sorted
            .iter()
            .enumerate()
            .map(|(i, x)| (2.0 * (i as f64 + 1.0) - nf - 1.0) * x)
            .sum();
        weighted / (nf * total)
    };
    Ok(Summary {
        min: sorted[0],
        max: sorted[n - 1],
        mean,
        median,
        stddev: var.sqrt(),
        gini,
    })
}
