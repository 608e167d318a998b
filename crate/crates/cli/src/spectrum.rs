//! Peak frequency of a uniformly sampled signal.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Angular frequency of the largest Hann-windowed periodogram peak at or
/// above `min_omega`, after removing the mean. `dt` is the sample spacing.
///
/// The signal is zero-padded to eight times its length (next power of two)
/// and the peak is refined by parabolic interpolation of the magnitude.
pub fn dominant_frequency(values: &[f64], dt: f64, min_omega: f64) -> Option<f64> {
    let n = values.len();
    if n < 8 || !(dt > 0.0) {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let len = (8 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
            Complex::new((v - mean) * w, 0.0)
        })
        .collect();
    buf.resize(len, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    let d_omega = 2.0 * std::f64::consts::PI / (len as f64 * dt);
    let first = ((min_omega / d_omega).ceil() as usize).max(1);
    let last = len / 2;
    if first + 1 >= last {
        return None;
    }
    let mag: Vec<f64> = buf[..=last].iter().map(|z| z.norm()).collect();
    let k = (first..last).max_by(|&a, &b| mag[a].total_cmp(&mag[b]))?;
    if mag[k] == 0.0 {
        return None;
    }
    let shift = if k > first {
        let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
        let den = a - 2.0 * b + c;
        if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 }
    } else {
        0.0
    };
    Some((k as f64 + shift) * d_omega)
}
