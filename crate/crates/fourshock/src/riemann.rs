//! Four-sector Riemann data on the upper half-plane: compatibility
//! conditions, states (1)-(4), incident shocks and their wall reflection
//! points, and the pseudo-Mach number of the top state there.
//!
//! Conventions: the wall is the horizontal axis of the self-similar plane;
//! `theta1` is the incident angle of the right shock (between states (1) and
//! (2)), `theta2` the incident angle of the left shock (states (3)/(2)).
//! State (2) is the normalised reference state `(1, 0, v2)` with `v2 < 0`.

use crate::error::{Error, Result};
use crate::roots;
use crate::thermo::GasModel;
use serde::Serialize;

/// A point of the plane (self-similar or physical, per context).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A constant pseudo-state: density plus the affine part of the
/// pseudo-potential `phi(xi) = -|xi|^2/2 + u x + v y + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub k: f64,
}

impl UniformState {
    pub fn pseudo_potential(&self, p: Point2) -> f64 {
        -0.5 * (p.x * p.x + p.y * p.y) + self.u * p.x + self.v * p.y + self.k
    }

    pub fn pseudo_velocity(&self, p: Point2) -> (f64, f64) {
        (self.u - p.x, self.v - p.y)
    }

    pub fn pseudo_speed(&self, p: Point2) -> f64 {
        (self.u - p.x).hypot(self.v - p.y)
    }
}

/// Wall abscissa of a reflection point. The point escapes to infinity as the
/// incident angle vanishes, and that limit is kept symbolic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WallAbscissa {
    Finite(f64),
    AtInfinity,
}

impl WallAbscissa {
    pub fn finite(self) -> Option<f64> {
        match self {
            WallAbscissa::Finite(x) => Some(x),
            WallAbscissa::AtInfinity => None,
        }
    }

    /// Collapse to `f64`, mapping the symbolic point to a signed infinity.
    pub fn as_f64(self, sign: f64) -> f64 {
        match self {
            WallAbscissa::Finite(x) => x,
            WallAbscissa::AtInfinity => f64::INFINITY.copysign(sign),
        }
    }
}

/// Which reflection point / incident shock a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// The right shock, reflecting at positive wall abscissa.
    Right,
    /// The left shock, reflecting at negative wall abscissa.
    Left,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Right => write!(f, "right"),
            Side::Left => write!(f, "left"),
        }
    }
}

/// The vacuum critical angle: incident angles at or beyond it would require
/// a vacuum upstream sector. Equals `arccos(-v2 / ell(0+, 1))`, and exactly
/// `pi/2` for the isothermal gas.
pub fn vacuum_critical_angle(gas: &GasModel, v2: f64) -> Result<f64> {
    check_v2(gas, v2)?;
    if gas.is_isothermal() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    Ok((-v2 / gas.ell_vacuum()).acos())
}

fn check_v2(gas: &GasModel, v2: f64) -> Result<()> {
    if !(v2 < 0.0) || v2 <= gas.v_min() {
        return Err(Error::ParameterDomain(format!(
            "v2 = {v2} outside admissible range ({:.6}, 0)",
            gas.v_min()
        )));
    }
    Ok(())
}

/// Solve the compatibility condition `ell(rho, 1) = -v2 / cos(theta)` for
/// the upstream sector density `rho` in `(0, 1)`.
///
/// The map is strictly decreasing in `rho` on `(0, 1)`, so a bracket always
/// pins the unique root. The iteration runs in the variable `rho^(gamma-1)`
/// (`ln rho` for the isothermal gas), where the slope of `ell` stays O(1)
/// all the way to vacuum; in `rho` itself it blows up like `rho^(gamma-2)`
/// and a density bracket could not certify the residual. Densities below
/// 1e-14 are treated as vacuum, and `theta` at or beyond the vacuum
/// critical angle is a vacuum error. `theta = 0` is allowed and defines the
/// limiting density.
pub fn solve_compatibility(gas: &GasModel, v2: f64, theta: f64) -> Result<f64> {
    check_v2(gas, v2)?;
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::ParameterDomain(format!(
            "incident angle {theta} outside [0, pi/2)"
        )));
    }
    let theta_cr = vacuum_critical_angle(gas, v2)?;
    if theta >= theta_cr {
        return Err(Error::Vacuum { theta, theta_cr });
    }
    let target = -v2 / theta.cos();
    const RHO_FLOOR: f64 = 1e-14;
    let (to_rho, lo, hi): (Box<dyn Fn(f64) -> f64>, f64, f64) = if gas.is_isothermal() {
        (Box::new(|x: f64| x.exp()), RHO_FLOOR.ln(), -1e-16)
    } else {
        let gm1 = gas.gamma() - 1.0;
        (Box::new(move |x: f64| x.powf(1.0 / gm1)), RHO_FLOOR.powf(gm1), 1.0 - 1e-16)
    };
    let f = |x: f64| gas.ell(to_rho(x), 1.0).unwrap() - target;
    if f(lo) <= 0.0 {
        return Err(Error::Vacuum { theta, theta_cr });
    }
    Ok(to_rho(roots::brent_default(f, lo, hi)?))
}

/// The uniquely determined Riemann data for parameters
/// `(gamma, v2, theta1, theta2)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RiemannSetup {
    pub gas: GasModel,
    pub v2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta_cr: f64,
    /// Right sector state (wedge at the right reflection point).
    pub state1: UniformState,
    /// Top reference state `(1, 0, v2)`.
    pub state2: UniformState,
    /// Left sector state.
    pub state3: UniformState,
    /// Bottom state `(1, 0, -v2)` (lower half-plane mirror of state (2)).
    pub state4: UniformState,
    /// Wall abscissa of the right reflection point (positive).
    pub xi_p01: WallAbscissa,
    /// Wall abscissa of the left reflection point (negative).
    pub xi_p02: WallAbscissa,
}

pub(crate) struct SideData {
    pub(crate) rho: f64,
    pub(crate) ell: f64,
    /// Positive wall abscissa of the reflection point in side-local
    /// orientation; `None` when the incident angle is zero.
    pub(crate) xi_wall: Option<f64>,
}

pub(crate) fn side_data(gas: &GasModel, v2: f64, theta: f64) -> Result<SideData> {
    let rho = solve_compatibility(gas, v2, theta)?;
    let ell = gas.ell(rho, 1.0)?;
    let xi_wall = if theta == 0.0 {
        None
    } else {
        Some(ell / ((1.0 - rho) * theta.sin()) - ell * theta.sin())
    };
    Ok(SideData { rho, ell, xi_wall })
}

impl RiemannSetup {
    /// Build states (1)-(4) and the reflection points.
    ///
    /// Both incident angles live in `[0, theta_cr)`; a zero angle collapses
    /// that sector and sends its reflection point to infinity.
    pub fn build(gas: GasModel, v2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let theta_cr = vacuum_critical_angle(&gas, v2)?;
        let right = side_data(&gas, v2, theta1)?;
        let left = side_data(&gas, v2, theta2)?;

        let bernoulli = 0.5 * v2 * v2;
        debug_assert!((gas.bernoulli() - bernoulli).abs() <= 1e-15 * (1.0 + bernoulli));
        let k_of = |rho: f64, u: f64, v: f64| -> Result<f64> {
            Ok(bernoulli - gas.enthalpy(rho)? - 0.5 * (u * u + v * v))
        };

        let u1 = -(right.ell * theta1.sin());
        let u3 = left.ell * theta2.sin();
        let state1 = UniformState { rho: right.rho, u: u1, v: 0.0, k: k_of(right.rho, u1, 0.0)? };
        let state2 = UniformState { rho: 1.0, u: 0.0, v: v2, k: 0.0 };
        let state3 = UniformState { rho: left.rho, u: u3, v: 0.0, k: k_of(left.rho, u3, 0.0)? };
        let state4 = UniformState { rho: 1.0, u: 0.0, v: -v2, k: 0.0 };

        Ok(Self {
            gas,
            v2,
            theta1,
            theta2,
            theta_cr,
            state1,
            state2,
            state3,
            state4,
            xi_p01: right.xi_wall.map_or(WallAbscissa::AtInfinity, WallAbscissa::Finite),
            xi_p02: left.xi_wall.map_or(WallAbscissa::AtInfinity, |x| WallAbscissa::Finite(-x)),
        })
    }

    pub fn incident_angle(&self, side: Side) -> f64 {
        match side {
            Side::Right => self.theta1,
            Side::Left => self.theta2,
        }
    }

    /// Upstream sector state of the given side's incident shock.
    pub fn sector_state(&self, side: Side) -> &UniformState {
        match side {
            Side::Right => &self.state1,
            Side::Left => &self.state3,
        }
    }

    pub fn reflection_abscissa(&self, side: Side) -> WallAbscissa {
        match side {
            Side::Right => self.xi_p01,
            Side::Left => self.xi_p02,
        }
    }

    /// Direction of the given incident shock in the upper half-plane,
    /// pointing away from the wall.
    pub fn incident_direction(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Right => (self.theta1.cos(), self.theta1.sin()),
            Side::Left => (-self.theta2.cos(), self.theta2.sin()),
        }
    }

    /// Pseudo-Mach number of state (2) at the given reflection point,
    /// `M2 = |(xi_P0, 0) - (0, v2)|`. Returns `+inf` when the reflection
    /// point is at infinity (zero incident angle).
    pub fn pseudo_mach_state2(&self, side: Side) -> f64 {
        match self.reflection_abscissa(side) {
            WallAbscissa::Finite(xi) => xi.hypot(self.v2),
            WallAbscissa::AtInfinity => f64::INFINITY,
        }
    }

    /// Acute angle between the state-(2) pseudo-velocity at the reflection
    /// point and the wall; zero in the limit of a vanishing incident angle.
    pub fn turning_angle(&self, side: Side) -> f64 {
        (-self.v2 / self.pseudo_mach_state2(side)).asin()
    }

    /// Largest relative residual of the two jump conditions
    /// (pseudo-potential continuity and normal mass-flux continuity) for
    /// the given incident shock, sampled at arclength parameters `ts` along
    /// the shock. Residuals are scaled by the local magnitudes, which grow
    /// quadratically with the distance of the reflection point.
    pub fn incident_rh_residual(&self, side: Side, ts: &[f64]) -> (f64, f64) {
        let up = self.sector_state(side);
        let down = &self.state2;
        let xi0 = match self.reflection_abscissa(side) {
            WallAbscissa::Finite(x) => x,
            WallAbscissa::AtInfinity => return (0.0, 0.0),
        };
        let (dx, dy) = self.incident_direction(side);
        let nu = (-dy, dx);
        let mut worst_phi = 0.0f64;
        let mut worst_flux = 0.0f64;
        for &t in ts {
            let p = Point2::new(xi0 + t * dx, t * dy);
            let phi_down = down.pseudo_potential(p);
            let phi_jump = up.pseudo_potential(p) - phi_down;
            let (ux, uy) = up.pseudo_velocity(p);
            let (vx, vy) = down.pseudo_velocity(p);
            let flux_down = down.rho * (vx * nu.0 + vy * nu.1);
            let flux_jump = up.rho * (ux * nu.0 + uy * nu.1) - flux_down;
            worst_phi = worst_phi.max(phi_jump.abs() / (1.0 + phi_down.abs()));
            worst_flux = worst_flux.max(flux_jump.abs() / (1.0 + flux_down.abs()));
        }
        (worst_phi, worst_flux)
    }
}

/// Pointwise residuals of the jump conditions between two uniform states at
/// a point of their shock, plus the Bernoulli consistency of the downstream
/// density. All four vanish for an exact shock.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RhResidual {
    /// |[phi]|
    pub phi: f64,
    /// |[grad phi . tangent]|
    pub tangential: f64,
    /// |[rho grad phi . normal]|
    pub normal_flux: f64,
    /// |rho(|grad phi_down|, phi_down) - rho_down| / rho_down
    pub bernoulli: f64,
}

impl RhResidual {
    pub fn max(&self) -> f64 {
        self.phi.max(self.tangential).max(self.normal_flux).max(self.bernoulli)
    }
}

/// Evaluate [`RhResidual`] for the shock between `up` and `down` at `p`.
pub fn rh_residual_at(gas: &GasModel, up: &UniformState, down: &UniformState, p: Point2) -> RhResidual {
    let (nx, ny) = {
        let dx = up.u - down.u;
        let dy = up.v - down.v;
        let n = dx.hypot(dy);
        (dx / n, dy / n)
    };
    let (ux, uy) = up.pseudo_velocity(p);
    let (dxv, dyv) = down.pseudo_velocity(p);
    let bern = match gas.density_from_bernoulli(dxv * dxv + dyv * dyv, down.pseudo_potential(p)) {
        Ok(rho) => (rho - down.rho).abs() / down.rho,
        Err(_) => f64::INFINITY,
    };
    RhResidual {
        phi: (up.pseudo_potential(p) - down.pseudo_potential(p)).abs(),
        tangential: ((ux - dxv) * (-ny) + (uy - dyv) * nx).abs(),
        normal_flux: (up.rho * (ux * nx + uy * ny) - down.rho * (dxv * nx + dyv * ny)).abs(),
        bernoulli: bern,
    }
}
