//! Adaptive Dormand–Prince 5(4) integrator for small real systems.
//!
//! Steps are clamped so that every requested output time is hit exactly; no
//! dense-output interpolation is involved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_step: 0.05 }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol), ("max_step", self.max_step)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights equal the last row of A (FSAL); these are b5 − b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Integrates `dy/dt = f(t, y)` from `(t0, y0)` and returns `y` at every
/// time in `t_out` (ascending, all `>= t0`).
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_out: &[f64],
    tol: &IntegratorSettings,
) -> Result<(Vec<[f64; N]>, Stats)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    tol.validate()?;
    if t_out.windows(2).any(|w| w[1] < w[0]) || t_out.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidParams("output times must be ascending and >= t0".into()));
    }

    let mut stats = Stats::default();
    let mut out = Vec::with_capacity(t_out.len());
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    stats.evaluations += 1;
    let mut h = initial_step(&y, &k0, tol);

    for &target in t_out {
        while t < target {
            let remaining = target - t;
            let h_try = h.min(tol.max_step).min(remaining);
            let hits_target = h_try >= remaining * (1.0 - 1e-12);
            if h_try <= 1e-14 * t.abs().max(1.0) && !hits_target {
                return Err(Error::StepSizeUnderflow { t, h: h_try });
            }

            let mut k = [[0.0; N]; 7];
            k[0] = k0;
            let mut ytmp = [0.0; N];
            for s in 1..7 {
                for i in 0..N {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    ytmp[i] = y[i] + h_try * acc;
                }
                k[s] = f(t + C[s] * h_try, &ytmp);
                stats.evaluations += 1;
            }
            // ytmp now holds the 5th-order solution (FSAL row)
            let y_new = ytmp;

            let mut err = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h_try;
                let scale = tol.abs_tol + tol.rel_tol * y[i].abs().max(y_new[i].abs());
                err += (e / scale).powi(2);
            }
            let err = (err / N as f64).sqrt();

            if err <= 1.0 {
                t = if hits_target { target } else { t + h_try };
                y = y_new;
                k0 = k[6];
                stats.accepted += 1;
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a target-clamped step says nothing about the natural step size
                if !hits_target || factor < 1.0 {
                    h = h_try * factor;
                }
            } else {
                stats.rejected += 1;
                h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
            if !h.is_finite() || y.iter().any(|v| !v.is_finite()) {
                return Err(Error::StepSizeUnderflow { t, h });
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}

fn initial_step<const N: usize>(y: &[f64; N], dy: &[f64; N], tol: &IntegratorSettings) -> f64 {
    let d0 = rms(y.iter().map(|v| v / (tol.abs_tol + tol.rel_tol * v.abs())));
    let d1 = rms(y.iter().zip(dy).map(|(v, d)| d / (tol.abs_tol + tol.rel_tol * v.abs())));
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(tol.max_step)
}

fn rms(it: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = it.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let ts: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let (ys, _) = integrate(|_, y: &[f64; 1]| [-0.7 * y[0]], 0.0, [2.0], &ts, &IntegratorSettings::default()).unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            let exact = 2.0 * (-0.7 * t).exp();
            assert!((y[0] - exact).abs() <= 1e-9 * exact, "t={t}: {} vs {exact}", y[0]);
        }
    }

    #[test]
    fn harmonic_oscillator_long_run() {
        let tol = IntegratorSettings { max_step: 0.5, ..Default::default() };
        let ts = [100.0];
        let (ys, stats) =
            integrate(|_, y: &[f64; 2]| [y[1], -4.0 * y[0]], 0.0, [1.0, 0.0], &ts, &tol).unwrap();
        assert!((ys[0][0] - (200.0f64).cos()).abs() < 1e-7);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn hits_output_times_exactly() {
        // non-autonomous: dy/dt = t, y(t) = t²/2
        let ts = [0.0, 0.3, 1.7, 1.7, 4.0];
        let (ys, _) = integrate(|t, _y: &[f64; 1]| [t], 0.0, [0.0], &ts, &IntegratorSettings::default()).unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0] - t * t / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_descending_output() {
        let r = integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &[2.0, 1.0], &IntegratorSettings::default());
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y², y(0)=1 blows up at t = 1
        let r = integrate(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], &[2.0], &IntegratorSettings::default());
        assert!(matches!(r, Err(Error::StepSizeUnderflow { .. })));
    }
}
