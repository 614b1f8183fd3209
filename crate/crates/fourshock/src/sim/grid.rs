//! Uniform cell-centered grid on the upper half-plane strip
//! `[x_lo, x_hi] x [0, y_hi]` with the wall along `y = 0`.

use crate::error::{Error, Result};
use serde::Serialize;

/// Ghost layers on every edge.
pub const NG: usize = 2;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FvGrid {
    pub nx: usize,
    pub ny: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_hi: f64,
    pub dx: f64,
    pub dy: f64,
    x_mid: f64,
}

impl FvGrid {
    pub fn new(nx: usize, ny: usize, x_lo: f64, x_hi: f64, y_hi: f64) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::ParameterDomain(format!("grid {nx}x{ny} too small")));
        }
        if !(x_lo < x_hi) || !(y_hi > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "bad domain [{x_lo}, {x_hi}] x [0, {y_hi}]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x_lo,
            x_hi,
            y_hi,
            dx: (x_hi - x_lo) / nx as f64,
            dy: y_hi / ny as f64,
            x_mid: 0.5 * (x_lo + x_hi),
        })
    }

    /// Cell-centre abscissa, ghost indices allowed.
    ///
    /// Measured from the domain midpoint so that mirror-symmetric domains
    /// get bitwise mirror-symmetric centres.
    #[inline]
    pub fn cell_x(&self, i: isize) -> f64 {
        self.x_mid + (i as f64 + 0.5 - 0.5 * self.nx as f64) * self.dx
    }

    /// Cell-centre ordinate, ghost indices allowed; ghosts below the wall
    /// mirror the interior exactly.
    #[inline]
    pub fn cell_y(&self, j: isize) -> f64 {
        (j as f64 + 0.5) * self.dy
    }

    /// The same grid relabelled to self-similar coordinates `x/t`.
    pub fn self_similar(&self, t: f64) -> Result<FvGrid> {
        if !(t > 0.0) {
            return Err(Error::ParameterDomain(format!("self-similar scaling needs t > 0, got {t}")));
        }
        Ok(FvGrid {
            nx: self.nx,
            ny: self.ny,
            x_lo: self.x_lo / t,
            x_hi: self.x_hi / t,
            y_hi: self.y_hi / t,
            dx: self.dx / t,
            dy: self.dy / t,
            x_mid: self.x_mid / t,
        })
    }
}
