#![allow(dead_code)]

use std::f64::consts::PI;

pub fn sine(freq: f64, fs: f64, n: usize, phase: f64) -> Vec<f64> {
    (0..n).map(|i| (2.0 * PI * freq * i as f64 / fs + phase).sin()).collect()
}

/// Amplitude of the `freq` component by direct projection.
pub fn amplitude_at(x: &[f64], freq: f64, fs: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (i, &v) in x.iter().enumerate() {
        let w = 2.0 * PI * freq * i as f64 / fs;
        re += v * w.cos();
        im -= v * w.sin();
    }
    2.0 * (re * re + im * im).sqrt() / x.len() as f64
}

/// Index of the largest bin of a naive DFT over `1..n/2`.
pub fn dft_peak_bin(x: &[f64]) -> usize {
    let n = x.len();
    (1..n / 2)
        .map(|k| (k, amplitude_at(x, k as f64, n as f64)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .0
}

pub fn interior(x: &[f64], edge: usize) -> &[f64] {
    &x[edge..x.len() - edge]
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}
