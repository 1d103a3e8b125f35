use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::field::{HarmonicField, Mode};
use super::grid::check_rho;
use crate::error::{Error, Result};

/// Samples of boundary data on a uniform angular grid of one circle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub samples: Vec<C64>,
    pub radius: f64,
}

impl BoundaryTrace {
    /// Samples `g(theta_j)`, `theta_j = 2 pi j / n`.
    pub fn sample(n: usize, radius: f64, g: impl Fn(f64) -> C64) -> Self {
        let samples = (0..n).map(|j| g(TAU * j as f64 / n as f64)).collect();
        Self { samples, radius }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Angular Fourier coefficients `c_n = (1/N) sum_j g_j e^{-i n theta_j}`
    /// in FFT order.
    pub fn fourier_coefficients(&self) -> Vec<C64> {
        let n = self.samples.len();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }
}

/// Harmonic extension into `A_rho` of the data `inner` on `|z| = rho` and
/// `outer` on `|z| = 1`, truncated to `|n| <= n_modes`.
///
/// With `a_n`, `b_n` the inner and outer coefficients:
/// `A_0 = b_0`, `B_0 = (a_0 - b_0)/ln rho`,
/// `A_n = (b_n - a_n rho^|n|)/(1 - rho^2|n|)`,
/// `B_n = rho^|n| (a_n - rho^|n| b_n)/(1 - rho^2|n|)`.
pub fn harmonic_extension(
    inner: &BoundaryTrace,
    outer: &BoundaryTrace,
    rho: f64,
    n_modes: usize,
) -> Result<HarmonicField> {
    check_rho(rho)?;
    let n = outer.len();
    if inner.len() != n {
        return Err(Error::SampleMismatch {
            left: inner.len(),
            right: n,
        });
    }
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "trace length {n} must be even"
        )));
    }
    if n_modes > n / 2 {
        return Err(Error::InvalidParameter(format!(
            "n_modes = {n_modes} exceeds n_theta/2 = {}",
            n / 2
        )));
    }
    let a = inner.fourier_coefficients();
    let b = outer.fourier_coefficients();
    let mut modes = Vec::with_capacity(2 * n_modes);
    for m in 1..=n_modes {
        // The Nyquist coefficient is shared by n = +-N/2.
        let share = if 2 * m == n { 0.5 } else { 1.0 };
        for (n_signed, k) in [(m as i32, m), (-(m as i32), n - m)] {
            let (an, bn) = (a[k] * share, b[k] * share);
            let rm = rho.powi(m as i32);
            let denom = 1.0 - rm * rm;
            modes.push(Mode {
                n: n_signed,
                a: (bn - an * rm) / denom,
                b: (an - bn * rm) * (rm / denom),
            });
        }
    }
    Ok(HarmonicField {
        rho,
        a0: b[0],
        b0: (a[0] - b[0]) / rho.ln(),
        modes,
    })
}
