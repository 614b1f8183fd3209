//! Reflected-shock detection: find the ridge of the density gradient
//! outside the sonic circles and fit a line through it.

use super::{FvField, FvGrid};
use crate::error::{Error, Result};
use crate::riemann::{Point2, Side};
use serde::Serialize;
use std::f64::consts::PI;

/// Where to look for the reflected shock.
#[derive(Debug, Clone)]
pub struct DetectSpec {
    pub side: Side,
    /// Sonic circles to stay out of (self-similar coordinates).
    pub circles: Vec<(Point2, f64)>,
    /// Incident shock lines (anchor point + unit direction) to stay away
    /// from; these are data, not part of the prediction being tested.
    pub exclude_lines: Vec<(Point2, (f64, f64))>,
    /// Ignore cells above this height (focus on the straight segment near
    /// the reflection point).
    pub eta_max: f64,
    /// Ridge threshold as a fraction of the peak gradient magnitude in the
    /// masked region.
    pub threshold: f64,
}

impl DetectSpec {
    pub fn new(side: Side, eta_max: f64) -> Self {
        Self { side, circles: Vec::new(), exclude_lines: Vec::new(), eta_max, threshold: 0.35 }
    }
}

/// A fitted shock line.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FittedLine {
    /// Line angle against the positive x axis, reported in `(pi/2, pi]` for
    /// the right side and around `[0, pi/2)` for the left side.
    pub angle: f64,
    /// Height at which the line crosses the vertical axis.
    pub intercept: f64,
    /// Weighted root-mean-square perpendicular scatter of the ridge cells.
    pub residual: f64,
    /// Ridge cells entering the fit.
    pub cells: usize,
}

/// Fit the reflected shock of the given side on a self-similar snapshot.
///
/// The ridge is the set of cells whose central-difference density gradient
/// exceeds `threshold` times the masked-region peak; the line is the
/// gradient-weighted principal axis of those cells.
pub fn detect_reflected_shock(
    field: &FvField,
    grid_ss: &FvGrid,
    spec: &DetectSpec,
) -> Result<FittedLine> {
    let (nx, ny) = (grid_ss.nx as isize, grid_ss.ny as isize);
    let margin = 3;
    let pad = 2.0 * grid_ss.dx.max(grid_ss.dy);

    let admit = |i: isize, j: isize| -> Option<(f64, f64)> {
        let x = grid_ss.cell_x(i);
        let y = grid_ss.cell_y(j);
        if y > spec.eta_max || y < 1.5 * grid_ss.dy {
            return None;
        }
        match spec.side {
            Side::Right if x < 2.0 * grid_ss.dx => return None,
            Side::Left if x > -2.0 * grid_ss.dx => return None,
            _ => {}
        }
        for &(c, r) in &spec.circles {
            if (x - c.x).hypot(y - c.y) < r + pad {
                return None;
            }
        }
        for &(p, (dx, dy)) in &spec.exclude_lines {
            // perpendicular distance to the (infinite) incident shock line
            let d = ((x - p.x) * dy - (y - p.y) * dx).abs();
            if d < 1.5 * pad {
                return None;
            }
        }
        Some((x, y))
    };

    // pass 1: peak gradient on the masked region
    let grad = |i: isize, j: isize| -> f64 {
        let gx = (field.rho[field.idx(i + 1, j)] - field.rho[field.idx(i - 1, j)])
            / (2.0 * grid_ss.dx);
        let gy = (field.rho[field.idx(i, j + 1)] - field.rho[field.idx(i, j - 1)])
            / (2.0 * grid_ss.dy);
        gx.hypot(gy)
    };
    let mut peak = 0.0f64;
    for j in margin..ny - margin {
        for i in margin..nx - margin {
            if admit(i, j).is_some() {
                peak = peak.max(grad(i, j));
            }
        }
    }
    if peak <= 0.0 {
        return Err(Error::DetectionFailed("no density variation in the search region".into()));
    }

    // pass 2: weighted first and second moments of the ridge cells
    let cut = spec.threshold * peak;
    let (mut w_sum, mut xm, mut ym) = (0.0, 0.0, 0.0);
    let mut ridge: Vec<(f64, f64, f64)> = Vec::new();
    for j in margin..ny - margin {
        for i in margin..nx - margin {
            if let Some((x, y)) = admit(i, j) {
                let g = grad(i, j);
                if g >= cut {
                    ridge.push((x, y, g));
                    w_sum += g;
                    xm += g * x;
                    ym += g * y;
                }
            }
        }
    }
    if ridge.len() < 8 {
        return Err(Error::DetectionFailed(format!(
            "only {} ridge cells above threshold",
            ridge.len()
        )));
    }
    xm /= w_sum;
    ym /= w_sum;

    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y, g) in &ridge {
        sxx += g * (x - xm) * (x - xm);
        sxy += g * (x - xm) * (y - ym);
        syy += g * (y - ym) * (y - ym);
    }
    // principal axis of the weighted scatter
    let phi = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (dir_x, dir_y) = (phi.cos(), phi.sin());

    // perpendicular scatter about the axis through the centroid
    let mut sq = 0.0;
    for &(x, y, g) in &ridge {
        let d = (x - xm) * (-dir_y) + (y - ym) * dir_x;
        sq += g * d * d;
    }
    let residual = (sq / w_sum).sqrt();

    if dir_x.abs() < 1e-12 {
        return Err(Error::DetectionFailed("fitted shock is vertical".into()));
    }
    let slope = dir_y / dir_x;
    let intercept = ym - slope * xm;
    let angle = match spec.side {
        // undirected axis angle in (-pi/2, pi/2]; report per side convention
        Side::Right => phi + PI,
        Side::Left => phi,
    };
    Ok(FittedLine { angle, intercept, residual, cells: ridge.len() })
}
