//! Exponential decay-rate extraction from sampled energies.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Fitted rate `γ` in `E(t) − E₀ ≈ A e^{−γ t}`.
    pub rate: f64,
    pub amplitude: f64,
    pub points: usize,
    /// True when the excess energy oscillated and only its local maxima were fitted.
    pub envelope: bool,
    pub window: (f64, f64),
}

/// Least-squares fit of `ln(E − e0)` against `t` over `window`.
///
/// A monotone, strictly positive excess is fitted point by point. Otherwise
/// (oscillating excess, or one that touches zero) the fit uses the local
/// maxima, i.e. the upper envelope. Returns `None` with fewer than three
/// usable points.
pub fn fit_decay(times: &[f64], energies: &[f64], e0: f64, window: (f64, f64)) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(energies)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(&t, &e)| (t, e - e0))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let monotone = pts.windows(2).all(|w| w[1].1 <= w[0].1) && pts.iter().all(|p| p.1 > 0.0);
    let used: Vec<(f64, f64)> = if monotone {
        pts
    } else {
        pts.windows(3)
            .filter(|w| w[1].1 > 0.0 && w[1].1 >= w[0].1 && w[1].1 > w[2].1)
            .map(|w| w[1])
            .collect()
    };
    if used.len() < 3 {
        return None;
    }
    let n = used.len() as f64;
    let (st, sy) = used.iter().fold((0.0, 0.0), |(a, b), &(t, r)| (a + t, b + r.ln()));
    let (mt, my) = (st / n, sy / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, r) in &used {
        sxy += (t - mt) * (r.ln() - my);
        sxx += (t - mt) * (t - mt);
    }
    let slope = sxy / sxx;
    Some(DecayFit {
        rate: -slope,
        amplitude: (my - slope * mt).exp(),
        points: used.len(),
        envelope: !monotone,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_pure_exponential() {
        let ts: Vec<f64> = (0..200).map(|k| k as f64 * 0.5).collect();
        let es: Vec<f64> = ts.iter().map(|t| 0.1 + 3.0 * (-0.04 * t).exp()).collect();
        let f = fit_decay(&ts, &es, 0.1, (10.0, 90.0)).unwrap();
        assert!((f.rate - 0.04).abs() < 1e-12);
        assert!((f.amplitude - 3.0).abs() < 1e-9);
        assert!(!f.envelope);
    }

    #[test]
    fn oscillating_excess_uses_envelope() {
        let ts: Vec<f64> = (0..4000).map(|k| k as f64 * 0.05).collect();
        let es: Vec<f64> = ts.iter().map(|t| (-0.05 * t).exp() * (0.3 * t).cos().powi(2)).collect();
        let f = fit_decay(&ts, &es, 0.0, (20.0, 150.0)).unwrap();
        assert!(f.envelope);
        assert!((f.rate - 0.05).abs() < 2e-3, "{}", f.rate);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_decay(&[0.0, 1.0], &[1.0, 0.5], 0.0, (0.0, 1.0)).is_none());
    }
}
