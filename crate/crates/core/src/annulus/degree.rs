//! Winding numbers of boundary data by discrete phase unwrapping.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C64;

use super::extension::BoundaryTrace;
use crate::error::{Error, Result};

/// Samples below this modulus (relative to the largest sample) make the
/// degree undefined.
pub const MODULUS_FLOOR: f64 = 1e-10;

const MAX_SAMPLES: usize = 1 << 22;

/// Total unwrapped phase change around the closed sample loop, and the
/// largest single-step phase jump.
fn unwrap(samples: &[C64]) -> Result<(f64, f64)> {
    let scale = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    for (index, s) in samples.iter().enumerate() {
        let modulus = s.norm();
        if !(modulus > MODULUS_FLOOR * scale.max(1e-300)) {
            return Err(Error::DegreeUndefined { index, modulus });
        }
    }
    let n = samples.len();
    let mut total = 0.0;
    let mut max_jump: f64 = 0.0;
    for j in 0..n {
        let step = (samples[(j + 1) % n] * samples[j].conj()).arg();
        max_jump = max_jump.max(step.abs());
        total += step;
    }
    Ok((total, max_jump))
}

/// Degree of sampled boundary data: `(1/2pi)` times the unwrapped phase
/// change, rounded. Exact whenever every step turns by less than `pi`.
pub fn winding_degree(trace: &BoundaryTrace) -> Result<i64> {
    if trace.samples.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 samples".into()));
    }
    let (total, max_jump) = unwrap(&trace.samples)?;
    if max_jump >= PI * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "under-resolved trace: phase jump {max_jump} >= pi"
        )));
    }
    Ok((total / TAU).round() as i64)
}

/// Degree of `g(theta)` on a circle, doubling the sample count from
/// `n_start` until every phase step is below `pi/2` at two consecutive
/// resolutions that agree (one resolution alone can alias).
pub fn winding_degree_adaptive(g: impl Fn(f64) -> C64, n_start: usize) -> Result<i64> {
    let mut n = n_start.max(8);
    let mut previous: Option<i64> = None;
    loop {
        let trace = BoundaryTrace::sample(n, 1.0, &g);
        let (total, max_jump) = unwrap(&trace.samples)?;
        let degree = (total / TAU).round() as i64;
        if max_jump < FRAC_PI_2 {
            if previous == Some(degree) {
                return Ok(degree);
            }
            previous = Some(degree);
        } else {
            previous = None;
        }
        if n >= MAX_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "phase still jumps by {max_jump} with {n} samples"
            )));
        }
        n *= 2;
    }
}
