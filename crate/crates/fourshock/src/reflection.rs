//! Local reflection theory at the wall: the normal-reflection state, the
//! weak/strong reflected states behind each incident shock, the sonic-circle
//! geometry, the intersection point of the two reflected shocks, and the
//! critical angles and critical speeds that organise all of it.
//!
//! Everything is computed for the right side and mirrored through
//! `(x, u) -> (-x, -u)` for the left side, so there is exactly one code path
//! to test.

use crate::error::{Error, Result};
use crate::polar::{self, SteadyPolar};
use crate::riemann::{self, Point2, RhResidual, Side, UniformState, WallAbscissa};
use crate::roots;
use crate::thermo::GasModel;
use serde::Serialize;
use std::f64::consts::PI;

/// The normal reflection background: a horizontal shock at height `eta0`
/// with the stagnant state of density `rho0` beneath it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalState {
    pub rho0: f64,
    pub eta0: f64,
}

impl NormalState {
    /// The stagnant downstream state `(rho0, 0, 0)` with its
    /// pseudo-potential constant.
    pub fn state(&self, v2: f64) -> UniformState {
        UniformState { rho: self.rho0, u: 0.0, v: 0.0, k: v2 * self.eta0 }
    }
}

/// Solve the normal-reflection relations: `ell(rho0, 1) = -v2` with
/// `rho0 > 1`, then `eta0 = -v2 / (rho0 - 1)`.
pub fn normal_state(gas: &GasModel, v2: f64) -> Result<NormalState> {
    if !(v2 < 0.0) || v2 <= gas.v_min() {
        return Err(Error::ParameterDomain(format!(
            "v2 = {v2} outside admissible range ({:.6}, 0)",
            gas.v_min()
        )));
    }
    let target = -v2;
    let mut hi = 2.0;
    while gas.ell(hi, 1.0)? < target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::RootFind("normal-state density exceeds f64 range".into()));
        }
    }
    let rho0 = roots::brent_default(|r| gas.ell(r, 1.0).unwrap() - target, 1.0 + 1e-15, hi)?;
    Ok(NormalState { rho0, eta0: -v2 / (rho0 - 1.0) })
}

/// One reflected state (weak or strong branch) with its shock line and
/// sonic circle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReflectedState {
    /// The uniform downstream state; `v = 0` exactly (slip condition).
    pub state: UniformState,
    /// Angle of the reflected shock against the positive x axis:
    /// in `(pi/2, pi]` on the right side, `[0, pi/2)` on the left.
    pub shock_angle: f64,
    /// Height at which the reflected shock crosses the vertical axis.
    pub eta_intercept: f64,
    /// Sonic circle `B_c(O)` of the state: `O = (u, 0)`.
    pub sonic_center: Point2,
    pub sonic_radius: f64,
    /// `|grad phi_j(P0)|`; `+inf` in the zero-angle (normal) embedding.
    pub pseudo_speed_at_p0: f64,
    pub supersonic_at_reflection: bool,
}

/// Output of [`solve_reflection`]: the local reflection at one reflection
/// point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReflectionSolution {
    pub side: Side,
    /// Incident angle of this side.
    pub theta: f64,
    pub v2: f64,
    pub xi_p0: WallAbscissa,
    /// Pseudo-Mach number of the top state at the reflection point.
    pub mach2: f64,
    /// Acute angle between the upstream pseudo-velocity and the wall.
    pub turning_angle: f64,
    pub weak: ReflectedState,
    /// Absent at `theta = 0` (the strong branch only exists for positive
    /// angles) and at the detachment double root.
    pub strong: Option<ReflectedState>,
    /// The deflection target hit the polar maximum: weak and strong
    /// coalesced into the single detachment root stored in `weak`.
    pub critical: bool,
}

fn mirror_state(r: &ReflectedState) -> ReflectedState {
    ReflectedState {
        state: UniformState { u: -r.state.u, ..r.state },
        shock_angle: PI - r.shock_angle,
        eta_intercept: r.eta_intercept,
        sonic_center: Point2::new(-r.sonic_center.x, r.sonic_center.y),
        ..*r
    }
}

/// Solve the reflection of one incident shock at its reflection point.
///
/// For `theta = 0` the solution degenerates to the normal-reflection
/// embedding (weak branch only). Positive angles require the top state to be
/// pseudo-supersonic at the reflection point, and an angle at or beyond the
/// detachment angle is an error.
pub fn solve_reflection(gas: &GasModel, v2: f64, theta: f64, side: Side) -> Result<ReflectionSolution> {
    let local = solve_reflection_right(gas, v2, theta)?;
    Ok(match side {
        Side::Right => local,
        Side::Left => ReflectionSolution {
            side: Side::Left,
            xi_p0: match local.xi_p0 {
                WallAbscissa::Finite(x) => WallAbscissa::Finite(-x),
                WallAbscissa::AtInfinity => WallAbscissa::AtInfinity,
            },
            weak: mirror_state(&local.weak),
            strong: local.strong.as_ref().map(mirror_state),
            ..local
        },
    })
}

fn solve_reflection_right(gas: &GasModel, v2: f64, theta: f64) -> Result<ReflectionSolution> {
    if theta == 0.0 {
        let norm = normal_state(gas, v2)?;
        let c0 = gas.sonic_speed(norm.rho0);
        let weak = ReflectedState {
            state: norm.state(v2),
            shock_angle: PI,
            eta_intercept: norm.eta0,
            sonic_center: Point2::new(0.0, 0.0),
            sonic_radius: c0,
            pseudo_speed_at_p0: f64::INFINITY,
            supersonic_at_reflection: true,
        };
        return Ok(ReflectionSolution {
            side: Side::Right,
            theta,
            v2,
            xi_p0: WallAbscissa::AtInfinity,
            mach2: f64::INFINITY,
            turning_angle: 0.0,
            weak,
            strong: None,
            critical: false,
        });
    }

    let data = riemann::side_data(gas, v2, theta)?;
    let xi = data.xi_wall.expect("positive incident angle has a finite reflection point");
    let mach2 = xi.hypot(v2);
    if mach2 <= 1.0 {
        return Err(Error::SubsonicUpstream(mach2));
    }
    let turning = (-v2 / mach2).asin();

    let steady = SteadyPolar::new(*gas, mach2)?;
    let crossings = match steady.crossings(turning.tan()) {
        Err(Error::Detachment { .. }) => return Err(Error::Detachment { theta }),
        other => other?,
    };

    let build = |tau: f64| -> Result<ReflectedState> {
        let speed = steady.downstream_speed_at_crossing(tau, turning.tan())?;
        // u = xi - speed in the conjugate form: the direct difference wipes
        // out the leading digits once the reflection point is far out
        let u = (2.0 * gas.enthalpy(tau)? - v2 * v2) / (xi + speed);
        let c = gas.sonic_speed(tau);
        Ok(ReflectedState {
            state: UniformState { rho: tau, u, v: 0.0, k: -u * xi },
            shock_angle: PI + (u / v2).atan(),
            eta_intercept: -xi * u / v2,
            sonic_center: Point2::new(u, 0.0),
            sonic_radius: c,
            pseudo_speed_at_p0: speed,
            supersonic_at_reflection: speed > c,
        })
    };

    let weak = build(crossings.weak())?;
    // the strong density grows like exp(M^2/2) for the isothermal gas and
    // can leave the f64 range entirely; report it as absent then
    let strong = match (crossings.critical, crossings.strong()) {
        (true, _) => None,
        (false, tau) if !tau.is_finite() => None,
        (false, tau) => Some(build(tau)?),
    };
    Ok(ReflectionSolution {
        side: Side::Right,
        theta,
        v2,
        xi_p0: WallAbscissa::Finite(xi),
        mach2,
        turning_angle: turning,
        weak,
        strong,
        critical: crossings.critical,
    })
}

impl ReflectionSolution {
    /// Jump-condition residuals of the given branch at the reflection point
    /// (at a point of the normal shock in the zero-angle embedding).
    pub fn rh_residual(&self, gas: &GasModel, branch: &ReflectedState) -> RhResidual {
        let state2 = UniformState { rho: 1.0, u: 0.0, v: self.v2, k: 0.0 };
        let p = match self.xi_p0 {
            WallAbscissa::Finite(x) => Point2::new(x, 0.0),
            WallAbscissa::AtInfinity => Point2::new(0.7, branch.eta_intercept),
        };
        riemann::rh_residual_at(gas, &state2, &branch.state, p)
    }

    /// Sonic-arc geometry of a branch of this reflection (normally the weak
    /// one). Degenerates to the reflection point itself when the branch is
    /// not supersonic there.
    pub fn sonic_geometry(&self, branch: &ReflectedState) -> Result<SonicGeometry> {
        sonic_geometry_impl(self, branch)
    }
}

/// Sonic-circle corner points of a reflected state.
///
/// On the right side `wall_point` and `shock_point` are the wall and shock
/// ends of the sonic arc; their polar angles about the circle centre are in
/// `arc` (shock end first).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SonicGeometry {
    pub degenerate: bool,
    pub center: Point2,
    pub radius: f64,
    pub wall_point: Point2,
    pub shock_point: Point2,
    pub arc: (f64, f64),
}

fn sonic_geometry_impl(sol: &ReflectionSolution, branch: &ReflectedState) -> Result<SonicGeometry> {
    if !branch.supersonic_at_reflection {
        let p0 = match sol.xi_p0 {
            WallAbscissa::Finite(x) => Point2::new(x, 0.0),
            WallAbscissa::AtInfinity => {
                return Err(Error::Inconsistent(
                    "zero-angle reflection cannot be subsonic at the reflection point".into(),
                ))
            }
        };
        return Ok(SonicGeometry {
            degenerate: true,
            center: branch.sonic_center,
            radius: branch.sonic_radius,
            wall_point: p0,
            shock_point: p0,
            arc: (0.0, 0.0),
        });
    }

    let o = branch.sonic_center;
    let c = branch.sonic_radius;
    let sign = match sol.side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    let wall_point = Point2::new(o.x + sign * c, 0.0);

    // Intersection of the circle with the reflected shock line
    // a x + b y + k = 0; the arc ends at the root on the reflection-point
    // side of the perpendicular foot.
    let (a, b, k) = (branch.state.u, -sol.v2, branch.state.k);
    let nn = a.hypot(b);
    let dist = (a * o.x + k) / nn; // signed; o.y = 0
    let radicand = c * c - dist * dist;
    if radicand <= 0.0 {
        return Err(Error::Inconsistent(format!(
            "sonic circle does not reach the reflected shock (distance {dist:.3e} vs radius {c:.3e})"
        )));
    }
    let foot = Point2::new(o.x - dist * a / nn, -dist * b / nn);
    let half = radicand.sqrt();
    // tangent of the line oriented towards positive x (b > 0 always)
    let (tx, ty) = (b / nn, -a / nn);
    let shock_point = match sol.side {
        Side::Right => Point2::new(foot.x + half * tx, foot.y + half * ty),
        Side::Left => Point2::new(foot.x - half * tx, foot.y - half * ty),
    };

    let angle_of = |p: Point2| (p.y - o.y).atan2(p.x - o.x);
    Ok(SonicGeometry {
        degenerate: false,
        center: o,
        radius: c,
        wall_point,
        shock_point,
        arc: (angle_of(shock_point), angle_of(wall_point)),
    })
}

/// Intersection point of the two reflected shock lines.
///
/// Uses the intercept form, which stays finite in every degenerate limit;
/// when both angles vanish the continuous extension `(0, eta0)` is returned.
pub fn intersection_point(right: &ReflectionSolution, left: &ReflectionSolution) -> Point2 {
    debug_assert_eq!(right.side, Side::Right);
    debug_assert_eq!(left.side, Side::Left);
    let (u5, a25) = (right.weak.state.u, right.weak.eta_intercept);
    let (u6, a26) = (left.weak.state.u, left.weak.eta_intercept);
    if u5 == 0.0 && u6 == 0.0 {
        return Point2::new(0.0, 0.5 * (a25 + a26));
    }
    let x = right.v2 * (a25 - a26) / (u6 - u5);
    Point2::new(x, (u5 / right.v2) * x + a25)
}

/// The critical angles for fixed `(gamma, v2)`, with the sub-case flags the
/// capped definitions leave open.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalAngles {
    /// Vacuum critical angle.
    pub theta_cr: f64,
    /// Largest angle with a pseudo-supersonic top state at the reflection
    /// point (capped at `theta_cr`).
    pub theta_plus: f64,
    /// Detachment angle (capped at `theta_plus`).
    pub theta_d: f64,
    /// Sonic angle (capped at `theta_d`).
    pub theta_s: f64,
    /// `theta_plus == theta_cr`, i.e. the top state stays supersonic all the
    /// way to the vacuum angle.
    pub theta_plus_capped: bool,
    /// `theta_d` solves the detachment crossing equation (otherwise it sits
    /// at the cap and no incident angle detaches).
    pub theta_d_is_root: bool,
    /// `theta_s` solves the sonic crossing equation.
    pub theta_s_is_root: bool,
}

/// Pseudo-Mach number of the top state at the reflection point for the
/// smallest admissible angle window, i.e. its infimum over incident angles:
/// attained as `theta -> theta_cr`.
pub fn mach2_min(gas: &GasModel, v2: f64) -> f64 {
    if gas.is_isothermal() {
        -v2
    } else {
        let vm = gas.v_min();
        v2 * vm / (vm * vm - v2 * v2).sqrt()
    }
}

/// Pseudo-Mach number of the top state at the reflection point, as a
/// function of the incident angle. Unlike building the full Riemann data,
/// this stays evaluable arbitrarily close to the vacuum angle (where the
/// sector density sinks below the compatibility bracket floor) through the
/// vacuum-limit form of the reflection point.
pub fn pseudo_mach2(gas: &GasModel, v2: f64, theta: f64) -> Result<f64> {
    if theta == 0.0 {
        return Ok(f64::INFINITY);
    }
    mach2_of(gas, v2, theta)
}

fn mach2_of(gas: &GasModel, v2: f64, theta: f64) -> Result<f64> {
    match riemann::side_data(gas, v2, theta) {
        Ok(data) => Ok(data.xi_wall.map_or(f64::INFINITY, |xi| xi.hypot(v2))),
        // So close to the vacuum angle that the sector density sinks below
        // the compatibility bracket floor; with rho -> 0 the reflection
        // point tends to xi = ell cos^2(theta)/sin(theta) at the exact jump
        // speed ell = -v2/cos(theta) the compatibility condition demands.
        Err(Error::Vacuum { theta_cr, .. }) if theta < theta_cr => {
            let xi = (-v2 / theta.cos()) * theta.cos() * theta.cos() / theta.sin();
            Ok(xi.hypot(v2))
        }
        Err(e) => Err(e),
    }
}

/// Compute the critical angles for `(gamma, v2)`.
///
/// The crossing equations pit the strictly increasing turning angle against
/// the strictly decreasing steady critical angle of the local Mach number,
/// so each has at most one root; when none exists the angle caps at the next
/// one up.
pub fn critical_angles(gas: &GasModel, v2: f64) -> Result<CriticalAngles> {
    let theta_cr = riemann::vacuum_critical_angle(gas, v2)?;
    let m2min = mach2_min(gas, v2);

    let hi_cap = theta_cr * (1.0 - 1e-13);
    let (theta_plus, theta_plus_capped) = if m2min >= 1.0 {
        (theta_cr, true)
    } else {
        let mut lo = hi_cap;
        while mach2_of(gas, v2, lo)? <= 1.0 {
            lo *= 0.5;
        }
        let root = roots::brent_default(|t| mach2_of(gas, v2, t).unwrap() - 1.0, lo, hi_cap)?;
        (root, false)
    };

    // crossing(theta) = turning(theta) - steady(M2(theta)): negative for
    // small angles, strictly increasing; a sign change pins the root.
    let crossing = |theta: f64, steady: fn(&GasModel, f64) -> Result<polar::SteadyAngle>| -> Result<f64> {
        let m2 = mach2_of(gas, v2, theta)?;
        let turning = (-v2 / m2).asin();
        if m2 <= 1.0 {
            return Ok(turning);
        }
        Ok(turning - steady(gas, m2)?.angle)
    };

    let solve_capped = |cap: f64,
                        steady: fn(&GasModel, f64) -> Result<polar::SteadyAngle>|
     -> Result<(f64, bool)> {
        let hi = cap.min(theta_plus * (1.0 - 1e-12));
        if crossing(hi, steady)? <= 0.0 {
            return Ok((cap, false));
        }
        let mut lo = 0.5 * hi;
        while crossing(lo, steady)? > 0.0 {
            lo *= 0.5;
        }
        let root = roots::brent_default(|t| crossing(t, steady).unwrap(), lo, hi)?;
        Ok((root, true))
    };

    let (theta_d, theta_d_is_root) = solve_capped(theta_plus, polar::detachment_angle)?;
    let (theta_s, theta_s_is_root) = solve_capped(theta_d, polar::sonic_angle)?;

    Ok(CriticalAngles {
        theta_cr,
        theta_plus,
        theta_d,
        theta_s,
        theta_plus_capped,
        theta_d_is_root,
        theta_s_is_root,
    })
}

/// The two critical speeds splitting `(v_min, 0)` by which critical angles
/// coincide: below `v2_s` all three critical angles collapse onto the vacuum
/// angle, between `v2_s` and `v2_d` only the detachment angle does, above
/// `v2_d` all three are distinct. Both are `-inf` for the isothermal gas.
pub fn critical_v2(gas: &GasModel) -> Result<(f64, f64)> {
    if gas.is_isothermal() {
        return Ok((f64::NEG_INFINITY, f64::NEG_INFINITY));
    }
    let vm = gas.v_min();
    // below v_mid the limiting Mach number exceeds 1
    let v_mid = vm / (vm * vm + 1.0).sqrt();

    let solve = |steady: fn(&GasModel, f64) -> Result<polar::SteadyAngle>| -> Result<f64> {
        let f = |v2: f64| -> Result<f64> {
            let m = mach2_min(gas, v2);
            let lhs = (v2 / vm).abs().acos();
            if m <= 1.0 {
                return Ok(lhs);
            }
            Ok(lhs - steady(gas, m)?.angle)
        };
        let mut lo = 0.5 * (vm + v_mid);
        while f(lo)? > 0.0 {
            lo = 0.5 * (vm + lo);
        }
        roots::brent_default(|v| f(v).unwrap(), lo, v_mid)
    };

    let v2_s = solve(polar::sonic_angle)?;
    let v2_d = solve(polar::detachment_angle)?;
    Ok((v2_s, v2_d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas_v2(gamma: f64, v2: f64) -> GasModel {
        GasModel::with_v2(gamma, v2).unwrap()
    }

    #[test]
    fn normal_state_anchors() {
        let v2 = -(2.0f64 / 3.0).sqrt();
        let n = normal_state(&gas_v2(2.0, v2), v2).unwrap();
        assert!((n.rho0 - 2.0).abs() < 1e-13);
        assert!((n.eta0 - (2.0f64 / 3.0).sqrt()).abs() < 1e-13);

        // weak-velocity limit: (rho0, eta0) -> (1, 1)
        let n = normal_state(&gas_v2(1.4, -1e-8), -1e-8).unwrap();
        assert!((n.rho0 - 1.0).abs() < 1e-6);
        assert!((n.eta0 - 1.0).abs() < 1e-6);

        // entropy across a parameter sweep
        for &gamma in &[1.0, 1.4, 2.0, 3.0] {
            let g = GasModel::new(gamma).unwrap();
            for i in 1..20 {
                let v2 = g.v_min().max(-4.0) * i as f64 / 20.5;
                let n = normal_state(&g, v2).unwrap();
                assert!(n.rho0 > 1.0 && n.eta0 > 0.0);
            }
        }
    }

    // golden values from the 50-digit oracle (dense polar scan + bisection)
    // at gamma = 2, v2 = -1/2, theta = theta_d / 2
    const GOLD_THETA: f64 = 0.3066124058577526;

    #[test]
    fn reflection_golden_weak_strong() {
        let gas = gas_v2(2.0, -0.5);
        let sol = solve_reflection(&gas, -0.5, GOLD_THETA, Side::Right).unwrap();

        let xi = sol.xi_p0.finite().unwrap();
        assert!((xi - 3.6175724563758871).abs() < 1e-11);
        assert!((sol.mach2 - 3.6519625514412753).abs() < 1e-11);
        assert!((sol.turning_angle - 0.13734407426854918).abs() < 1e-12);

        let wk = &sol.weak;
        assert!((wk.state.rho - 1.5877220557513267).abs() < 1e-11);
        assert!((wk.state.u - 0.13025452340407155).abs() < 1e-10);
        assert!((wk.pseudo_speed_at_p0 - 3.4873179329718156).abs() < 1e-10);
        assert!((wk.sonic_radius - 1.2600484338910654).abs() < 1e-11);
        assert!((wk.shock_angle - 2.8867478400065420).abs() < 1e-10);
        assert!((wk.eta_intercept - 0.94241035236987519).abs() < 1e-10);
        assert!(wk.supersonic_at_reflection);
        assert_eq!(wk.state.v, 0.0);

        let sg = sol.strong.as_ref().unwrap();
        assert!((sg.state.rho - 7.5484454457078066).abs() < 1e-10);
        assert!((sg.state.u - 3.1277361717726981).abs() < 1e-10);
        assert!((sg.pseudo_speed_at_p0 - 0.48983628460318905).abs() < 1e-10);
        assert!((sg.shock_angle - 1.7293151103379588).abs() < 1e-10);
        assert!(!sg.supersonic_at_reflection);

        // jump conditions at the reflection point, both branches
        for branch in [wk, sg] {
            let r = sol.rh_residual(&gas, branch);
            assert!(r.max() < 1e-11, "residual {:?}", r);
        }

        // sonic-centre ordering
        assert!(0.0 < wk.state.u && wk.state.u < sg.state.u && sg.state.u < xi);
    }

    #[test]
    fn reflection_respects_side_mirror() {
        let gas = gas_v2(1.4, -0.3);
        let r = solve_reflection(&gas, -0.3, 0.37, Side::Right).unwrap();
        let l = solve_reflection(&gas, -0.3, 0.37, Side::Left).unwrap();
        assert_eq!(l.weak.state.u.to_bits(), (-r.weak.state.u).to_bits());
        assert_eq!(l.weak.state.rho.to_bits(), r.weak.state.rho.to_bits());
        assert_eq!(l.weak.eta_intercept.to_bits(), r.weak.eta_intercept.to_bits());
        assert!((l.weak.shock_angle - (PI - r.weak.shock_angle)).abs() < 1e-15);
        assert!(l.weak.shock_angle < PI / 2.0 && r.weak.shock_angle > PI / 2.0);
    }

    #[test]
    fn reflection_zero_angle_embeds_normal_state() {
        let gas = gas_v2(2.0, -0.5);
        let sol = solve_reflection(&gas, -0.5, 0.0, Side::Right).unwrap();
        let n = normal_state(&gas, -0.5).unwrap();
        assert_eq!(sol.weak.state.rho, n.rho0);
        assert_eq!(sol.weak.eta_intercept, n.eta0);
        assert_eq!(sol.weak.shock_angle, PI);
        assert!(sol.strong.is_none());
        let r = sol.rh_residual(&gas, &sol.weak);
        assert!(r.max() < 1e-12, "residual {:?}", r);
    }

    #[test]
    fn reflection_weak_limit_is_normal_state() {
        for (gamma, v2) in [(1.4, -0.4), (2.0, -0.5), (1.0, -0.8)] {
            let gas = gas_v2(gamma, v2);
            let n = normal_state(&gas, v2).unwrap();
            let sol = solve_reflection(&gas, v2, 1e-5, Side::Right).unwrap();
            assert!((sol.weak.state.rho - n.rho0).abs() < 1e-3);
            assert!(sol.weak.state.u.abs() < 1e-3);
            let product = sol.weak.state.u * sol.xi_p0.finite().unwrap();
            assert!((product - (-v2 * n.eta0)).abs() < 1e-3, "u*xi = {product}");
        }
    }

    #[test]
    fn reflection_beyond_detachment_errors() {
        let gas = gas_v2(2.0, -0.5);
        let ca = critical_angles(&gas, -0.5).unwrap();
        let theta = ca.theta_d * 1.01;
        assert!(matches!(
            solve_reflection(&gas, -0.5, theta, Side::Right),
            Err(Error::Detachment { .. })
        ));
    }

    #[test]
    fn critical_angles_golden() {
        // oracle: nested 50-digit bisection
        let gas = gas_v2(2.0, -0.5);
        let ca = critical_angles(&gas, -0.5).unwrap();
        assert!((ca.theta_cr - 1.2094292028881888).abs() < 1e-12);
        assert!((ca.theta_plus - 0.92944431112414960).abs() < 1e-10);
        assert!((ca.theta_d - 0.61322481171550525).abs() < 1e-10);
        assert!((ca.theta_s - 0.59221637747930455).abs() < 1e-10);
        assert!(!ca.theta_plus_capped && ca.theta_d_is_root && ca.theta_s_is_root);

        let gas = gas_v2(1.4, -0.4);
        let ca = critical_angles(&gas, -0.4).unwrap();
        assert!((ca.theta_cr - 1.3909428270024184).abs() < 1e-12);
        assert!((ca.theta_plus - 1.0158273209479041).abs() < 1e-10);
        assert!((ca.theta_d - 0.73351443967853716).abs() < 1e-10);
        assert!((ca.theta_s - 0.71706665776427746).abs() < 1e-10);
    }

    #[test]
    fn critical_angles_ordering() {
        for &gamma in &[1.0, 1.2, 1.4, 2.0, 3.0] {
            let g = GasModel::new(gamma).unwrap();
            for i in 1..=6 {
                let v2 = g.v_min().max(-3.0) * i as f64 / 7.0;
                let ca = critical_angles(&g, v2).unwrap();
                assert!(
                    0.0 < ca.theta_s
                        && ca.theta_s <= ca.theta_d
                        && ca.theta_d <= ca.theta_plus
                        && ca.theta_plus <= ca.theta_cr,
                    "ordering failed at gamma={gamma} v2={v2}: {ca:?}"
                );
            }
        }
    }

    #[test]
    fn critical_v2_golden() {
        let g = GasModel::new(1.4).unwrap();
        let (v2s, v2d) = critical_v2(&g).unwrap();
        assert!((v2s - -1.6848250405361609).abs() < 1e-9, "v2_s = {v2s}");
        assert!((v2d - -1.6295276819449074).abs() < 1e-9, "v2_d = {v2d}");

        let g = GasModel::new(2.0).unwrap();
        let (v2s, v2d) = critical_v2(&g).unwrap();
        assert!((v2s - -1.2418867548978042).abs() < 1e-9);
        assert!((v2d - -1.2177324534892761).abs() < 1e-9);
        assert!(g.v_min() < v2s && v2s < v2d && v2d < 0.0);

        let g1 = GasModel::new(1.0).unwrap();
        let (s, d) = critical_v2(&g1).unwrap();
        assert!(s == f64::NEG_INFINITY && d == f64::NEG_INFINITY);
    }

    #[test]
    fn critical_v2_sign_switch() {
        let g = GasModel::new(1.4).unwrap();
        let (_, v2d) = critical_v2(&g).unwrap();
        let above = critical_angles(&g, v2d + 1e-3).unwrap();
        assert!(above.theta_d < above.theta_cr && above.theta_d_is_root);
        let below = critical_angles(&g, v2d - 1e-3).unwrap();
        assert_eq!(below.theta_d, below.theta_cr);
        assert!(!below.theta_d_is_root);
    }

    #[test]
    fn trichotomy_by_interval() {
        let g = GasModel::new(1.4).unwrap();
        let (v2s, v2d) = critical_v2(&g).unwrap();
        // far below v2_s: full collapse
        let ca = critical_angles(&g, 0.5 * (g.v_min() + v2s)).unwrap();
        assert!(ca.theta_s == ca.theta_d && ca.theta_d == ca.theta_cr);
        // between: only detachment capped
        let ca = critical_angles(&g, 0.5 * (v2s + v2d)).unwrap();
        assert!(ca.theta_s < ca.theta_d && ca.theta_d == ca.theta_cr);
        // above: all strict
        let ca = critical_angles(&g, 0.5 * v2d).unwrap();
        assert!(ca.theta_s < ca.theta_d && ca.theta_d < ca.theta_cr);
    }

    #[test]
    fn sonic_geometry_membership() {
        let gas = gas_v2(2.0, -0.5);
        let sol = solve_reflection(&gas, -0.5, GOLD_THETA, Side::Right).unwrap();
        let geom = sol.sonic_geometry(&sol.weak).unwrap();
        assert!(!geom.degenerate);
        // oracle values for the corner points
        assert!((geom.wall_point.x - 1.3903029572951370).abs() < 1e-10);
        assert!((geom.shock_point.x - 1.2254117547159571).abs() < 1e-10);
        assert!((geom.shock_point.y - 0.62317950420132715).abs() < 1e-10);
        // membership constraints
        assert!((geom.shock_point.dist(geom.center) - geom.radius).abs() < 1e-12);
        let s = &sol.weak.state;
        let on_line = s.u * geom.shock_point.x + 0.5 * geom.shock_point.y + s.k;
        assert!(on_line.abs() < 1e-12);
        // wall end sits between the projection foot and the reflection point
        assert!(geom.wall_point.x < sol.xi_p0.finite().unwrap());

        // left side mirrors
        let lsol = solve_reflection(&gas, -0.5, GOLD_THETA, Side::Left).unwrap();
        let lgeom = lsol.sonic_geometry(&lsol.weak).unwrap();
        assert!((lgeom.shock_point.x + geom.shock_point.x).abs() < 1e-12);
        assert!((lgeom.shock_point.y - geom.shock_point.y).abs() < 1e-12);
    }

    #[test]
    fn sonic_geometry_degenerate_between_sonic_and_detachment() {
        let gas = gas_v2(2.0, -0.5);
        let ca = critical_angles(&gas, -0.5).unwrap();
        let theta = 0.5 * (ca.theta_s + ca.theta_d);
        let sol = solve_reflection(&gas, -0.5, theta, Side::Right).unwrap();
        assert!(!sol.weak.supersonic_at_reflection);
        let geom = sol.sonic_geometry(&sol.weak).unwrap();
        assert!(geom.degenerate);
        let p0 = sol.xi_p0.finite().unwrap();
        assert_eq!(geom.wall_point.x, p0);
        assert_eq!(geom.shock_point.x, p0);
    }

    #[test]
    fn sonic_geometry_zero_angle_limit() {
        let gas = gas_v2(2.0, -0.5);
        let n = normal_state(&gas, -0.5).unwrap();
        let c0 = gas.sonic_speed(n.rho0);
        let sol = solve_reflection(&gas, -0.5, 1e-5, Side::Right).unwrap();
        let geom = sol.sonic_geometry(&sol.weak).unwrap();
        assert!((geom.center.x).abs() < 1e-3);
        assert!((geom.radius - c0).abs() < 1e-3);
        assert!((geom.wall_point.x - c0).abs() < 1e-3);
        assert!((geom.shock_point.y - n.eta0).abs() < 1e-3);
        assert!((geom.shock_point.x - (c0 * c0 - n.eta0 * n.eta0).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn intersection_point_symmetric_and_limits() {
        let gas = gas_v2(2.0, -0.5);
        let r = solve_reflection(&gas, -0.5, 0.3, Side::Right).unwrap();
        let l = solve_reflection(&gas, -0.5, 0.3, Side::Left).unwrap();
        let p = intersection_point(&r, &l);
        assert_eq!(p.x, 0.0);
        // lies on both shock lines
        assert!((p.y - (r.weak.state.u / -0.5 * p.x + r.weak.eta_intercept)).abs() < 1e-14);
        // bounded by the intercepts
        assert!(
            r.weak.eta_intercept.min(l.weak.eta_intercept) <= p.y
                && p.y <= r.weak.eta_intercept.max(l.weak.eta_intercept)
        );

        // the full-degenerate continuous extension
        let r0 = solve_reflection(&gas, -0.5, 0.0, Side::Right).unwrap();
        let l0 = solve_reflection(&gas, -0.5, 0.0, Side::Left).unwrap();
        let p0 = intersection_point(&r0, &l0);
        let n = normal_state(&gas, -0.5).unwrap();
        assert_eq!(p0.x, 0.0);
        assert_eq!(p0.y, n.eta0);

        // towards (0, eta0) along theta = (1e-k, 2e-k), error decreasing
        let mut prev = f64::INFINITY;
        for k in 2..=6 {
            let t = 10f64.powi(-k);
            let r = solve_reflection(&gas, -0.5, t, Side::Right).unwrap();
            let l = solve_reflection(&gas, -0.5, 2.0 * t, Side::Left).unwrap();
            let p = intersection_point(&r, &l);
            let err = p.x.hypot(p.y - n.eta0);
            assert!(err < prev, "P_I error not decreasing at k={k}: {err} vs {prev}");
            prev = err;
        }
    }

    #[test]
    fn reflected_angle_bound() {
        // pi/2 + turning_angle < shock_angle <= pi across the admissible range
        for (gamma, v2) in [(1.4, -0.3), (2.0, -0.5), (1.0, -1.0)] {
            let gas = gas_v2(gamma, v2);
            let ca = critical_angles(&gas, v2).unwrap();
            for i in 1..30 {
                let theta = ca.theta_d * i as f64 / 30.5;
                let sol = solve_reflection(&gas, v2, theta, Side::Right).unwrap();
                assert!(sol.weak.shock_angle > PI / 2.0 + sol.turning_angle);
                assert!(sol.weak.shock_angle <= PI);
            }
        }
    }
}

