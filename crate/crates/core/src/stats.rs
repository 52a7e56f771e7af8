//! Histograms and small statistics helpers shared by the stats/curvature
//! exports and the change detector.

use serde::Serialize;

/// Equal-width histogram over `[min, max]` of the input values. `edges` has
/// one more entry than `counts`; the last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Bins `values` into `bins` equal-width bins spanning their range. Empty
/// input yields an empty histogram; a degenerate range (all values equal)
/// lands everything in the first bin.
pub fn histogram(values: &[f64], bins: usize) -> Histogram {
    assert!(bins >= 1, "histogram needs at least one bin");
    if values.is_empty() {
        return Histogram {
            edges: Vec::new(),
            counts: Vec::new(),
        };
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in values {
        let idx = if width == 0.0 {
            0
        } else {
            (((x - min) / width) as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    let edges = (0..=bins).map(|i| min + width * i as f64).collect();
    Histogram { edges, counts }
}

/// Basic location/range summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summary(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    Some(Summary {
        mean: values.iter().sum::<f64>() / n as f64,
        median,
        min: sorted[0],
        max: sorted[n - 1],
    })
}

/// Pearson correlation. `None` when either sample is degenerate (constant)
/// or the lengths differ.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return None;
    }
    Some((cov / (var_x.sqrt() * var_y.sqrt())).clamp(-1.0, 1.0))
}

/// Ranks with ties replaced by their average rank (1-based).
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties. `None` on
/// degenerate input. Identical and mirrored rank vectors short-circuit
/// to exactly +/-1: ranks are half-integers, so both checks are exact,
/// while the Pearson denominator would round away the closed-form value.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.is_empty() {
        return None;
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let constant = |r: &[f64]| r.iter().all(|&v| v == r[0]);
    if !constant(&rx) && !constant(&ry) {
        if rx == ry {
            return Some(1.0);
        }
        let mirror = (rx.len() + 1) as f64;
        if rx.iter().zip(&ry).all(|(&a, &b)| a + b == mirror) {
            return Some(-1.0);
        }
    }
    pearson(&rx, &ry)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_bin_arithmetic() {
        let h = histogram(&[2.0, 2.0, 0.0], 2);
        assert_eq!(h.counts, vec![1, 2]);
        assert_eq!(h.edges, vec![0.0, 1.0, 2.0]);
        assert_eq!(h.total(), 3);
    }

    #[test]
    fn histogram_single_bin_and_degenerate() {
        let h = histogram(&[0.0, 0.0, 0.0], 1);
        assert_eq!(h.counts, vec![3]);

        let h = histogram(&[1.5], 4);
        assert_eq!(h.total(), 1);
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
    }

    #[test]
    fn histogram_empty() {
        assert!(histogram(&[], 5).is_empty());
    }

    #[test]
    fn summary_median_even_and_odd() {
        let s = summary(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.median, 2.0);
        assert_eq!(s.min, 1.0);
        assert_eq!(s.max, 3.0);
        let s = summary(&[4.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.median, 2.5);
        assert!(summary(&[]).is_none());
    }

    #[test]
    fn pearson_known_values() {
        // linear inputs land within an ulp of +/-1 (the sqrt in the
        // denominator rounds) and the clamp keeps them inside the range
        let r = pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-12 && r <= 1.0);
        let r = pearson(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap();
        assert!((r + 1.0).abs() < 1e-12 && r >= -1.0);
        // constant input is degenerate
        assert_eq!(pearson(&[1.0, 1.0], &[1.0, 2.0]), None);
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 20.0, 30.0]), vec![
            1.0, 2.5, 2.5, 4.0
        ]);
    }

    #[test]
    fn spearman_monotone_with_ties_is_exactly_one() {
        let x = vec![1.0, 2.0, 2.0, 3.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 4.0 - v).collect();
        assert_eq!(spearman(&x, &y), Some(-1.0));
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        assert_eq!(spearman(&x, &y), Some(1.0));
    }

    #[test]
    fn spearman_shortcut_scope() {
        // mirrored ranks with a different tie pattern than the toy above
        let x = vec![10.0, 10.0, 10.0, 11.0, 12.0, 12.0, 13.0];
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(spearman(&x, &y), Some(-1.0));
        // non-monotone data must take the Pearson path, not a shortcut
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!(r < 1.0 && r > 0.0);
        // constant input stays degenerate
        assert_eq!(spearman(&[1.0, 1.0], &[2.0, 2.0]), None);
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), None);
    }
}
