//! Rational-ratio polyphase resampling with a Kaiser-windowed sinc low-pass.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const KAISER_BETA: f64 = 8.6;
const CUTOFF_FRACTION: f64 = 0.9;
const HALF_LEN_PER_RATE: usize = 10;
const MAX_FACTOR: u64 = 10_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `fs_out / fs_in` as a reduced `(up, down)` pair with both factors bounded.
pub fn rational_ratio(fs_in: f64, fs_out: f64) -> Result<(usize, usize)> {
    let ratio = fs_out / fs_in;
    if !(fs_in > 0.0 && fs_out > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidRatio(ratio));
    }
    for q in 1..=MAX_FACTOR {
        let p = (ratio * q as f64).round();
        if p >= 1.0 && p <= MAX_FACTOR as f64 && (p / q as f64 - ratio).abs() <= 1e-12 * ratio {
            let p = p as u64;
            let g = gcd(p, q);
            return Ok(((p / g) as usize, (q / g) as usize));
        }
    }
    Err(Error::InvalidRatio(ratio))
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Low-pass prototype for an `up/down` polyphase resampler, gain `up`.
fn design_taps(up: usize, down: usize) -> Vec<f64> {
    let max_rate = up.max(down);
    let half = HALF_LEN_PER_RATE * max_rate;
    let len = 2 * half + 1;
    // cycles per sample at the upsampled rate
    let fc = CUTOFF_FRACTION * 0.5 / max_rate as f64;
    let norm = bessel_i0(KAISER_BETA);
    (0..len)
        .map(|n| {
            let t = n as f64 - half as f64;
            let sinc = if t == 0.0 {
                1.0
            } else {
                (2.0 * PI * fc * t).sin() / (2.0 * PI * fc * t)
            };
            let r = t / half as f64;
            let w = bessel_i0(KAISER_BETA * (1.0 - r * r).max(0.0).sqrt()) / norm;
            up as f64 * 2.0 * fc * sinc * w
        })
        .collect()
}

/// Resamples `x` from `fs_in` to `fs_out`. The output has
/// `round(len * fs_out / fs_in)` samples; signal beyond the edges is taken as zero.
pub fn resample<T: Scalar>(x: &[T], fs_in: f64, fs_out: f64) -> Result<Vec<T>> {
    let (up, down) = rational_ratio(fs_in, fs_out)?;
    if up == down {
        return Ok(x.to_vec());
    }
    let n_out = ((x.len() * up) as f64 / down as f64).round() as usize;
    let taps: Vec<T> = design_taps(up, down).into_iter().map(T::lit).collect();
    let half = (taps.len() - 1) / 2;
    let n_in = x.len() as isize;
    let mut out = Vec::with_capacity(n_out);
    for j in 0..n_out {
        // position in the upsampled stream, shifted to centre the filter
        let centre = (j * down + half) as isize;
        let lo = (centre - taps.len() as isize + 1).max(0);
        let first_m = (lo + up as isize - 1) / up as isize;
        let mut acc = T::zero();
        let mut m = first_m;
        while m < n_in {
            let k = centre - m * up as isize;
            if k < 0 {
                break;
            }
            acc += x[m as usize] * taps[k as usize];
            m += 1;
        }
        out.push(acc);
    }
    Ok(out)
}
