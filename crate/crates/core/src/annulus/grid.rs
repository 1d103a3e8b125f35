use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tensor grid on the annulus `rho < |z| < 1`: `n_r` radial nodes uniform on
/// `[rho, 1]` (endpoints included) and `n_theta` angular nodes uniform on
/// `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    rho: f64,
    n_r: usize,
    n_theta: usize,
}

impl AnnulusGrid {
    pub fn new(rho: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        check_rho(rho)?;
        if n_r < 3 {
            return Err(Error::InvalidParameter(format!("n_r = {n_r} < 3")));
        }
        if n_theta < 8 || n_theta % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "n_theta = {n_theta} must be even and >= 8"
            )));
        }
        Ok(Self { rho, n_r, n_theta })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn dr(&self) -> f64 {
        (1.0 - self.rho) / (self.n_r - 1) as f64
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        if i + 1 == self.n_r {
            1.0
        } else {
            self.rho + i as f64 * self.dr()
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_r).map(|i| self.radius(i)).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|j| self.theta(j)).collect()
    }

    /// Composite Simpson weights on the radial nodes. An odd interval count
    /// closes with the 3/8 rule on the last three intervals.
    pub fn radial_weights(&self) -> Vec<f64> {
        simpson_weights(self.n_r, self.dr())
    }

    /// Same grid with both node counts doubled (radial intervals doubled).
    pub fn refined(&self) -> Self {
        Self {
            rho: self.rho,
            n_r: 2 * self.n_r - 1,
            n_theta: 2 * self.n_theta,
        }
    }

    /// CSV rows `i,j,r,theta` with a header.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["i", "j", "r", "theta"])?;
        for i in 0..self.n_r {
            for j in 0..self.n_theta {
                w.write_record(&[
                    i.to_string(),
                    j.to_string(),
                    format!("{:.17e}", self.radius(i)),
                    format!("{:.17e}", self.theta(j)),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rho = {rho} not in (0, 1)")))
    }
}

pub(crate) fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 3, "need at least two intervals");
    let intervals = n - 1;
    let mut w = vec![0.0; n];
    let simpson_end = if intervals % 2 == 0 { intervals } else { intervals - 3 };
    let mut k = 0;
    while k < simpson_end {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
        k += 2;
    }
    if simpson_end < intervals {
        let s = 3.0 * h / 8.0;
        w[k] += s;
        w[k + 1] += 3.0 * s;
        w[k + 2] += 3.0 * s;
        w[k + 3] += s;
    }
    w
}
