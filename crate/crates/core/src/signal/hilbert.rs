//! FFT-based analytic signal and single-sideband frequency shifting.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Analytic signal `x + i * hilbert(x)`: negative frequencies zeroed,
/// positive frequencies doubled. The real part is `x` itself.
pub fn analytic_signal<T: Scalar>(x: &[T]) -> Result<Vec<Complex<T>>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { len: n, need: 1 });
    }
    let mut planner = FftPlanner::<T>::new();
    let mut buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
    planner.plan_fft_forward(n).process(&mut buf);

    let two = T::lit(2.0);
    let nyquist = if n % 2 == 0 { n / 2 } else { (n + 1) / 2 };
    for v in buf.iter_mut().take(nyquist).skip(1) {
        *v = *v * two;
    }
    for v in buf.iter_mut().skip(n / 2 + 1) {
        *v = Complex::new(T::zero(), T::zero());
    }

    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = T::one() / T::from_usize_lossy(n);
    Ok(buf
        .into_iter()
        .zip(x)
        .map(|(z, &re)| Complex::new(re, z.im * scale))
        .collect())
}

/// Shifts every spectral component of `x` by `shift_hz`:
/// `Re(analytic(x) * exp(i 2 pi shift t))`.
pub fn freq_shift<T: Scalar>(x: &[T], fs: f64, shift_hz: f64) -> Result<Vec<T>> {
    if !(fs > 0.0 && shift_hz.abs() < fs / 2.0) {
        return Err(Error::InvalidFilter(format!(
            "frequency shift {shift_hz} Hz not below Nyquist {} Hz",
            fs / 2.0
        )));
    }
    if shift_hz == 0.0 {
        return Ok(x.to_vec());
    }
    let z = analytic_signal(x)?;
    let step = 2.0 * std::f64::consts::PI * shift_hz / fs;
    Ok(z
        .iter()
        .enumerate()
        .map(|(n, zn)| {
            // phase in f64 keeps long f32 series accurate
            let (s, c) = (step * n as f64).sin_cos();
            zn.re * T::lit(c) - zn.im * T::lit(s)
        })
        .collect())
}
