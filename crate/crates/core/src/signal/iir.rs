//! Butterworth band-pass and notch filters as second-order sections, with
//! forward-backward (zero-phase) application.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One biquad `(b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    fn response(&self, z: Complex<f64>) -> Complex<f64> {
        let zi = z.inv();
        let zi2 = zi * zi;
        let num = Complex::from(self.b[0]) + zi * self.b[1] + zi2 * self.b[2];
        let den = Complex::from(1.0) + zi * self.a[0] + zi2 * self.a[1];
        num / den
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }
}

/// Cascade of biquads.
#[derive(Debug, Clone, PartialEq)]
pub struct Sos {
    pub sections: Vec<Biquad>,
}

impl Sos {
    /// Complex frequency response at `f_hz`.
    pub fn response(&self, f_hz: f64, fs: f64) -> Complex<f64> {
        let z = Complex::from_polar(1.0, 2.0 * PI * f_hz / fs);
        self.sections
            .iter()
            .fold(Complex::from(1.0), |acc, s| acc * s.response(z))
    }

    /// Edge padding used by [`Sos::filtfilt`]: three times the equivalent
    /// direct-form tap count.
    pub fn pad_len(&self) -> usize {
        3 * (2 * self.sections.len() + 1)
    }

    /// Steady-state section states for a unit step input.
    fn step_state(&self) -> Vec<[f64; 2]> {
        let mut scale = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let y = s.dc_gain() * scale;
                let state = [
                    scale * (s.b[1] + s.b[2]) - y * (s.a[0] + s.a[1]),
                    scale * s.b[2] - y * s.a[1],
                ];
                scale = y;
                state
            })
            .collect()
    }

    /// Single forward pass (transposed direct form II), states scaled by `x0`.
    fn run<T: Scalar>(&self, x: &mut [T], init: &[[f64; 2]]) {
        let x0 = match x.first() {
            Some(&v) => v,
            None => return,
        };
        for (s, st) in self.sections.iter().zip(init) {
            let [b0, b1, b2] = s.b.map(T::lit);
            let [a1, a2] = s.a.map(T::lit);
            let mut z1 = T::lit(st[0]) * x0;
            let mut z2 = T::lit(st[1]) * x0;
            for v in x.iter_mut() {
                let u = *v;
                let y = b0 * u + z1;
                z1 = b1 * u - a1 * y + z2;
                z2 = b2 * u - a2 * y;
                *v = y;
            }
        }
    }

    /// Zero-phase forward-backward filtering with odd-reflection padding.
    pub fn filtfilt<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let n = x.len();
        let pad = self.pad_len();
        if n <= pad {
            return Err(Error::SeriesTooShort { len: n, need: pad });
        }
        let two = T::lit(2.0);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| two * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| two * x[n - 1] - x[n - 1 - i]));

        let init = self.step_state();
        self.run(&mut ext, &init);
        ext.reverse();
        self.run(&mut ext, &init);
        ext.reverse();
        Ok(ext[pad..pad + n].to_vec())
    }
}

/// Digital Butterworth band-pass of analog prototype order `order`.
///
/// The resulting cascade has `order` sections (filter order `2 * order`)
/// and unit gain at the geometric band center.
pub fn butter_bandpass(order: usize, lo_hz: f64, hi_hz: f64, fs: f64) -> Result<Sos> {
    if order == 0 {
        return Err(Error::InvalidFilter("order must be at least 1".into()));
    }
    if !(fs > 0.0 && 0.0 < lo_hz && lo_hz < hi_hz && hi_hz < fs / 2.0) {
        return Err(Error::InvalidFilter(format!(
            "band [{lo_hz}, {hi_hz}] Hz outside (0, {}) Hz",
            fs / 2.0
        )));
    }
    let k2 = 2.0 * fs;
    let w1 = k2 * (PI * lo_hz / fs).tan();
    let w2 = k2 * (PI * hi_hz / fs).tan();
    let bw = w2 - w1;
    let w0sq = w1 * w2;

    let mut poles = Vec::with_capacity(2 * order);
    for k in 0..order {
        let theta = PI * (2 * k + 1 + order) as f64 / (2 * order) as f64;
        let proto = Complex::from_polar(1.0, theta);
        let half = proto * (bw / 2.0);
        let disc = (half * half - w0sq).sqrt();
        for s in [half + disc, half - disc] {
            poles.push((Complex::from(k2) + s) / (Complex::from(k2) - s));
        }
    }

    let tol = 1e-10;
    let mut sections = Vec::with_capacity(order);
    let mut reals = Vec::new();
    for p in &poles {
        if p.im > tol {
            sections.push(Biquad {
                b: [1.0, 0.0, -1.0],
                a: [-2.0 * p.re, p.norm_sqr()],
            });
        } else if p.im.abs() <= tol {
            reals.push(p.re);
        }
    }
    for pair in reals.chunks(2) {
        let (p1, p2) = (pair[0], *pair.get(1).unwrap_or(&0.0));
        sections.push(Biquad {
            b: [1.0, 0.0, -1.0],
            a: [-(p1 + p2), p1 * p2],
        });
    }
    if sections.len() != order {
        return Err(Error::InvalidFilter("pole pairing failed".into()));
    }

    let mut sos = Sos { sections };
    let center = 2.0 * (w0sq.sqrt() / k2).atan() * fs / (2.0 * PI);
    let gain = sos.response(center, fs).norm();
    let per_section = gain.powf(-1.0 / order as f64);
    for s in &mut sos.sections {
        for b in &mut s.b {
            *b *= per_section;
        }
    }
    Ok(sos)
}

/// Second-order IIR notch at `f0_hz` with quality factor `quality`
/// (-3 dB width `f0 / quality`).
pub fn iir_notch(f0_hz: f64, quality: f64, fs: f64) -> Result<Sos> {
    if !(fs > 0.0 && 0.0 < f0_hz && f0_hz < fs / 2.0 && quality > 0.0) {
        return Err(Error::InvalidFilter(format!(
            "notch at {f0_hz} Hz (Q={quality}) invalid for fs={fs}"
        )));
    }
    let w0 = 2.0 * PI * f0_hz / fs;
    let beta = (w0 / quality / 2.0).tan();
    let gain = 1.0 / (1.0 + beta);
    let cos = w0.cos();
    Ok(Sos {
        sections: vec![Biquad {
            b: [gain, -2.0 * gain * cos, gain],
            a: [-2.0 * gain * cos, 2.0 * gain - 1.0],
        }],
    })
}
