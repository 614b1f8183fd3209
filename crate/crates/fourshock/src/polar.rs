//! The steady two-dimensional potential-flow shock polar, normalised to
//! upstream density 1 and sonic speed 1, and the steady detachment and sonic
//! angles.
//!
//! The polar is parameterised by the density ratio `tau` across the shock.
//! All internal evaluation happens in `s = ln(tau)`: the critical density
//! ratios grow like `exp(M^2/2)` for the isothermal gas, so the linear
//! parameterisation would overflow long before the angles stop being
//! meaningful. Public entry points still speak `tau`.
//!
//! Two independent routes exist for both critical angles (a root of the
//! stationarity relation in `tau` versus the inversion of the parametric
//! family in the Mach number, and similarly for the sonic angle); they are
//! cross-checked in the verification suite.

use crate::error::{Error, Result};
use crate::roots;
use crate::thermo::GasModel;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, LN_2};

/// A steady critical angle together with saturation-free representations.
///
/// `angle` is the usual radian value, which rounds to `pi/2` in double
/// precision once the tangent exceeds ~5e15 (isothermal detachment does this
/// already at moderate Mach numbers). `ln_tan` never saturates and is the
/// quantity monotonicity checks should use.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SteadyAngle {
    pub angle: f64,
    pub tan: f64,
    pub ln_tan: f64,
    /// Critical density ratio realising the angle.
    pub tau: f64,
    pub ln_tau: f64,
}

impl SteadyAngle {
    fn from_ln_tan(ln_tan: f64, ln_tau: f64) -> Self {
        let angle = if ln_tan <= 0.0 {
            ln_tan.exp().atan()
        } else {
            FRAC_PI_2 - (-ln_tan).exp().atan()
        };
        Self { angle, tan: ln_tan.exp(), ln_tan, tau: ln_tau.exp(), ln_tau }
    }
}

/// Scale-free pieces of the polar evaluated at `s = ln(tau)`.
///
/// `a = 1 - tau^-2`, `g = h(tau) tau^-gamma`, `b = 2 h(tau) tau^-(gamma+1)`;
/// every polar expression below is a combination of these that stays O(1).
struct TauTerms {
    e_ms: f64,
    e_m2s: f64,
    a: f64,
    h: f64,
    g: f64,
    b: f64,
}

fn tau_terms(gas: &GasModel, s: f64) -> TauTerms {
    debug_assert!(s >= 0.0);
    let e_ms = (-s).exp();
    let e_m2s = (-2.0 * s).exp();
    let a = -f64::exp_m1(-2.0 * s);
    let (h, g) = if gas.is_isothermal() {
        (s, s * e_ms)
    } else {
        let gm1 = gas.gamma() - 1.0;
        let h = f64::exp_m1(gm1 * s) / gm1;
        // h e^{-gamma s} = (e^{-s} - e^{-gamma s}) / (gamma - 1)
        let g = e_ms * (-f64::exp_m1(-gm1 * s)) / gm1;
        (h, g)
    };
    TauTerms { e_ms, e_m2s, a, h, g, b: 2.0 * g * e_ms }
}

/// `M^2` of the upstream state for which `tau` is the detachment ratio
/// (the parametric family of the detachment angle).
fn detachment_mach_sq(gas: &GasModel, s: f64) -> f64 {
    let t = tau_terms(gas, s);
    2.0 * t.h * (2.0 * t.g + 1.0 + t.e_ms) / (2.0 * t.g + t.a)
}

/// `ln tan` of the detachment angle at detachment ratio `exp(s)`.
fn detachment_ln_tan(gas: &GasModel, s: f64) -> f64 {
    let gamma = gas.gamma();
    let t = tau_terms(gas, s);
    -LN_2 + 0.5 * ((gamma + 1.0) * s + (t.a - t.b).ln())
        + 0.5 * (gamma * s + (t.a + 2.0 * t.g).ln())
        - (gamma * s + (1.0 + t.e_ms + t.g).ln())
}

/// `ln tan` of the sonic angle at sonic ratio `exp(s)`.
fn sonic_ln_tan(gas: &GasModel, s: f64) -> f64 {
    let gamma = gas.gamma();
    let t = tau_terms(gas, s);
    0.5 * (2.0 * t.h).ln() + 0.5 * ((gamma + 1.0) * s + (t.a - t.b).ln())
        - (gamma * s + (1.0 + t.e_ms + 2.0 * t.g).ln())
}

fn check_supersonic(mach_inf: f64) -> Result<()> {
    if !(mach_inf > 1.0) {
        return Err(Error::SubsonicUpstream(mach_inf));
    }
    if !mach_inf.is_finite() {
        return Err(Error::ParameterDomain("upstream Mach number must be finite".into()));
    }
    Ok(())
}

/// Steady detachment angle for upstream Mach number `mach_inf`, via the
/// parametric route: invert the (strictly increasing) map from detachment
/// ratio to Mach number, then evaluate the parametric tangent.
pub fn detachment_angle(gas: &GasModel, mach_inf: f64) -> Result<SteadyAngle> {
    check_supersonic(mach_inf)?;
    let target = mach_inf * mach_inf;
    let mut hi = 1.0;
    while detachment_mach_sq(gas, hi) < target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::RootFind("detachment bracket expansion overflow".into()));
        }
    }
    let s = roots::brent_default(|s| detachment_mach_sq(gas, s) - target, 1e-30, hi)?;
    Ok(SteadyAngle::from_ln_tan(detachment_ln_tan(gas, s), s))
}

/// Sonic density ratio in log form: `(gamma+1) h(tau_s) = M^2 - 1` solved in
/// closed form.
fn sonic_ln_tau(gas: &GasModel, mach_inf: f64) -> f64 {
    let m2m1 = mach_inf * mach_inf - 1.0;
    if gas.is_isothermal() {
        0.5 * m2m1
    } else {
        let gm1 = gas.gamma() - 1.0;
        f64::ln_1p(gm1 * m2m1 / (gas.gamma() + 1.0)) / gm1
    }
}

/// Steady sonic angle via the closed-form sonic ratio and the parametric
/// tangent.
pub fn sonic_angle(gas: &GasModel, mach_inf: f64) -> Result<SteadyAngle> {
    check_supersonic(mach_inf)?;
    let s = sonic_ln_tau(gas, mach_inf);
    Ok(SteadyAngle::from_ln_tan(sonic_ln_tan(gas, s), s))
}

/// Steady sonic angle via the closed-form sonic ratio and the generic polar
/// deflection formula; the independent cross-check route for [`sonic_angle`].
pub fn sonic_angle_via_polar(gas: &GasModel, mach_inf: f64) -> Result<SteadyAngle> {
    check_supersonic(mach_inf)?;
    let s = sonic_ln_tau(gas, mach_inf);
    let polar = SteadyPolar::new(*gas, mach_inf)?;
    let w = polar.deflection_at_ln_tau(s);
    Ok(SteadyAngle::from_ln_tan(w.ln(), s))
}

/// The shock polar for a fixed supersonic upstream state `(1, M_inf, 0)`.
#[derive(Debug, Clone)]
pub struct SteadyPolar {
    gas: GasModel,
    mach_inf: f64,
    ln_tau_bar: f64,
}

impl SteadyPolar {
    /// Requires `mach_inf > 1`; computes the maximal density ratio.
    pub fn new(gas: GasModel, mach_inf: f64) -> Result<Self> {
        check_supersonic(mach_inf)?;
        let m2 = mach_inf * mach_inf;
        let residual = |s: f64| {
            let t = tau_terms(&gas, s);
            m2 * t.a - 2.0 * t.h
        };
        let mut hi = 1.0;
        while residual(hi) > 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::RootFind("density-ratio bracket expansion overflow".into()));
            }
        }
        let ln_tau_bar = roots::brent_default(residual, 1e-30, hi)?;
        Ok(Self { gas, mach_inf, ln_tau_bar })
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn mach_inf(&self) -> f64 {
        self.mach_inf
    }

    /// Maximal density ratio `tau_bar` (the normal-shock endpoint of the
    /// polar). Overflows to `+inf` for the isothermal gas at large Mach
    /// numbers; see [`SteadyPolar::ln_max_density_ratio`].
    pub fn max_density_ratio(&self) -> f64 {
        self.ln_tau_bar.exp()
    }

    pub fn ln_max_density_ratio(&self) -> f64 {
        self.ln_tau_bar
    }

    fn check_tau(&self, tau: f64) -> Result<f64> {
        if !(tau >= 1.0) {
            return Err(Error::ParameterDomain(format!("tau = {tau} below 1")));
        }
        let s = tau.ln();
        if s > self.ln_tau_bar * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::ParameterDomain(format!(
                "tau = {tau} beyond the maximal density ratio {}",
                self.max_density_ratio()
            )));
        }
        Ok(s.min(self.ln_tau_bar))
    }

    /// Tangent of the flow deflection across the shock with density ratio
    /// `tau in [1, tau_bar]`; zero at both endpoints.
    pub fn deflection(&self, tau: f64) -> Result<f64> {
        Ok(self.deflection_at_ln_tau(self.check_tau(tau)?))
    }

    fn deflection_at_ln_tau(&self, s: f64) -> f64 {
        let m2 = self.mach_inf * self.mach_inf;
        let t = tau_terms(&self.gas, s);
        let radicand = m2 * t.a - 2.0 * t.h;
        if radicand <= 0.0 {
            // at (or noise-past) the normal-shock endpoint
            return 0.0;
        }
        // denominator rewritten through the radicand: keeps it provably
        // positive even where the direct form cancels to roundoff
        let den = radicand + m2 * (t.e_ms + t.e_m2s);
        (2.0 * t.h).sqrt() * radicand.sqrt() / den
    }

    /// Downstream state `(u, v, rho)` across the shock with density ratio
    /// `tau`, in the frame aligned with the upstream velocity.
    pub fn downstream_state(&self, tau: f64) -> Result<(f64, f64, f64)> {
        let s = self.check_tau(tau)?;
        let h = tau_terms(&self.gas, s).h;
        let u = self.mach_inf - 2.0 * h * tau / ((tau + 1.0) * self.mach_inf);
        let v = (self.mach_inf * self.mach_inf - u * u - 2.0 * h).max(0.0).sqrt();
        Ok((u, v, tau))
    }

    /// Downstream speed `|q| = sqrt(M^2 - 2 h(tau))`, straight from the
    /// Bernoulli relation.
    pub fn downstream_speed(&self, tau: f64) -> Result<f64> {
        let s = self.check_tau(tau)?;
        let h = tau_terms(&self.gas, s).h;
        Ok((self.mach_inf * self.mach_inf - 2.0 * h).max(0.0).sqrt())
    }

    /// Downstream speed at a density ratio known to solve
    /// `deflection(tau) = tan_deflection`.
    ///
    /// Near the normal-shock endpoint the plain Bernoulli difference
    /// `M^2 - 2h` cancels to roundoff (the absolute error `eps M^2` then
    /// multiplies the huge downstream density in the mass flux). Splitting
    /// `speed^2 = radicand + M^2 tau^-2` and refining the radicand through
    /// the crossing relation `radicand = w^2 (radicand + q)^2 / (2h)` keeps
    /// every factor relatively accurate.
    pub fn downstream_speed_at_crossing(&self, tau: f64, tan_deflection: f64) -> Result<f64> {
        let s = self.check_tau(tau)?;
        let m2 = self.mach_inf * self.mach_inf;
        let t = tau_terms(&self.gas, s);
        let q = m2 * (t.e_ms + t.e_m2s);
        let mut r = (m2 * t.a - 2.0 * t.h).max(0.0);
        if r < q && t.h > 0.0 {
            // fixed-point refinement; contraction factor 2r/(r+q) < 1 here
            let w2 = tan_deflection * tan_deflection;
            for _ in 0..4 {
                let den = r + q;
                r = w2 * den * den / (2.0 * t.h);
            }
        }
        Ok((r + m2 * t.e_m2s).sqrt())
    }

    /// Detachment ratio of this polar, solved in log form from the scaled
    /// stationarity relation. Used to split crossing brackets.
    ///
    /// At large upstream Mach numbers the detachment ratio and the maximal
    /// ratio agree to within f64 resolution (their relative gap decays like
    /// `1/tau_bar`); the coalesced case returns `ln_tau_bar`.
    pub fn detachment_ln_tau(&self) -> Result<f64> {
        Ok(self.detachment_ln_tau_impl()?.0)
    }

    fn detachment_ln_tau_impl(&self) -> Result<(f64, bool)> {
        let m2 = self.mach_inf * self.mach_inf;
        let f = |s: f64| {
            let t = tau_terms(&self.gas, s);
            m2 * (2.0 * t.g + t.a) - 2.0 * t.h * (2.0 * t.g + 1.0 + t.e_ms)
        };
        let hi = self.ln_tau_bar;
        if f(hi) >= 0.0 {
            // hat flattened against the normal-shock endpoint
            return Ok((hi, true));
        }
        let s = roots::brent_default(f, 1e-30 * hi.max(1.0), hi)?;
        Ok((s, false))
    }

    /// Detachment ratio by a literal root of the stationarity relation in
    /// `tau` itself (no log rescaling). Independent route used by the
    /// dual-formula checks; fails where `tau_bar` is not representable.
    pub fn detachment_tau_direct(&self) -> Result<f64> {
        let tau_bar = self.max_density_ratio();
        if !tau_bar.is_finite() {
            return Err(Error::RootFind(
                "maximal density ratio exceeds f64 range; use the parametric route".into(),
            ));
        }
        let m2 = self.mach_inf * self.mach_inf;
        let f = |tau: f64| {
            let h = self.gas.enthalpy(tau).unwrap();
            let hp = self.gas.enthalpy_slope(tau);
            m2 * (2.0 * h + (tau * tau - 1.0) * hp)
                - 2.0 * h * (2.0 * h + tau * (tau + 1.0) * hp)
        };
        let lo = 1.0 + 1e-12 * (tau_bar - 1.0).min(1.0);
        roots::brent_default(f, lo, tau_bar * (1.0 - 1e-15))
    }

    /// Both density-ratio roots of `deflection(tau) = tan_target`.
    ///
    /// The weak root is the smaller. A target within 1e-10 of the polar
    /// maximum returns the coalesced detachment ratio flagged `critical`;
    /// a target above the maximum is a detachment error.
    pub fn crossings(&self, tan_target: f64) -> Result<PolarCrossings> {
        if !(tan_target > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "deflection target {tan_target} must be positive"
            )));
        }
        let (mut split, mut collapsed) = self.detachment_ln_tau_impl()?;
        if !collapsed && self.deflection_at_ln_tau(split) < self.deflection_at_ln_tau(0.5 * split) {
            // The deflection is increasing up to the detachment ratio, so a
            // smaller value there means the evaluation at the (numerically
            // endpoint-adjacent) maximum has degenerated.
            collapsed = true;
        }
        if collapsed {
            // The maximum is not resolvable, but it dwarfs any admissible
            // target out here; any interior point above the target splits
            // the two branches.
            match [0.5, 0.25, 0.75, 0.9]
                .iter()
                .map(|f| f * self.ln_tau_bar)
                .find(|&s| self.deflection_at_ln_tau(s) > tan_target)
            {
                Some(s) => split = s,
                None => return Err(Error::Detachment { theta: tan_target.atan() }),
            }
        } else {
            let w_max = self.deflection_at_ln_tau(split);
            if (tan_target - w_max).abs() <= 1e-10 * w_max.max(1.0) {
                return Ok(PolarCrossings {
                    ln_weak: split,
                    ln_strong: split,
                    critical: true,
                });
            }
            if tan_target > w_max {
                return Err(Error::Detachment { theta: tan_target.atan() });
            }
        }
        let f = |s: f64| self.deflection_at_ln_tau(s) - tan_target;
        let mut lo = 1e-30 * split.max(1.0);
        for _ in 0..40 {
            if f(lo) < 0.0 {
                break;
            }
            lo *= 1e-4;
        }
        let ln_weak = roots::brent_default(f, lo, split)?;
        // The strong root merges with the normal-shock endpoint as the
        // deflection target vanishes; once the top-endpoint deflection
        // (whose radicand is pure root-residual noise there) no longer sits
        // below the target, the root is the endpoint to f64 resolution.
        let ln_strong = if tan_target - self.deflection_at_ln_tau(self.ln_tau_bar) <= 0.0 {
            self.ln_tau_bar
        } else {
            roots::brent_default(|s| tan_target - self.deflection_at_ln_tau(s), split, self.ln_tau_bar)?
        };
        Ok(PolarCrossings { ln_weak, ln_strong, critical: false })
    }
}

/// The two polar roots for a prescribed deflection.
#[derive(Debug, Clone, Copy)]
pub struct PolarCrossings {
    pub ln_weak: f64,
    pub ln_strong: f64,
    pub critical: bool,
}

impl PolarCrossings {
    pub fn weak(&self) -> f64 {
        self.ln_weak.exp()
    }

    pub fn strong(&self) -> f64 {
        self.ln_strong.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(gamma: f64, mach: f64) -> SteadyPolar {
        SteadyPolar::new(GasModel::new(gamma).unwrap(), mach).unwrap()
    }

    #[test]
    fn max_density_ratio_anchor() {
        let p = polar(2.0, 2.0);
        assert!((p.max_density_ratio() - (1.0 + 3.0f64.sqrt())).abs() < 1e-13);
        // defining relation holds
        let tb = p.max_density_ratio();
        let gas = GasModel::new(2.0).unwrap();
        let res = 4.0 * (1.0 - tb.powi(-2)) - 2.0 * gas.enthalpy(tb).unwrap();
        assert!(res.abs() < 1e-12);
        // degenerate shock as M -> 1+
        let p = polar(1.4, 1.0 + 1e-8);
        assert!(p.max_density_ratio() - 1.0 < 1e-6);
        assert!(SteadyPolar::new(GasModel::new(1.4).unwrap(), 1.0).is_err());
    }

    #[test]
    fn deflection_anchors() {
        let p = polar(2.0, 2.0);
        assert_eq!(p.deflection(1.0).unwrap(), 0.0);
        assert!(p.deflection(p.max_density_ratio()).unwrap() < 1e-7);
        let w = p.deflection(2.0).unwrap();
        assert!((w - 2.0f64.sqrt() / 4.0).abs() < 1e-14, "w = {w}");
        assert!(p.deflection(0.5).is_err());
        assert!(p.deflection(3.0).is_err());
    }

    #[test]
    fn downstream_state_anchors() {
        let p = polar(2.0, 2.0);
        let (u, v, rho) = p.downstream_state(2.0).unwrap();
        assert!((u - 4.0 / 3.0).abs() < 1e-14);
        assert!((v - 2.0f64.sqrt() / 3.0).abs() < 1e-14);
        assert_eq!(rho, 2.0);
        assert!((v / u - p.deflection(2.0).unwrap()).abs() < 1e-14);
        // speed identity |q|^2 = M^2 - 2h
        let speed = p.downstream_speed(2.0).unwrap();
        assert!((speed - (u * u + v * v).sqrt()).abs() < 1e-13);

        // endpoints
        let (u, v, _) = p.downstream_state(1.0 + 1e-12).unwrap();
        assert!((u - 2.0).abs() < 1e-9 && v < 1e-5);
        let (_, v, _) = p.downstream_state(p.max_density_ratio()).unwrap();
        assert!(v < 1e-7);
    }

    #[test]
    fn detachment_anchor() {
        let gas = GasModel::new(2.0).unwrap();
        let mach = 3.2f64.sqrt();
        let d = detachment_angle(&gas, mach).unwrap();
        assert!((d.tau - 2.0).abs() < 1e-12, "tau_d = {}", d.tau);
        let expect = (5.0f64.sqrt() / 7.0).atan();
        assert!((d.angle - expect).abs() < 1e-13, "angle = {}", d.angle);

        // direct route agrees
        let p = polar(2.0, mach);
        let tau_direct = p.detachment_tau_direct().unwrap();
        assert!((tau_direct - d.tau).abs() < 1e-10);
        let w_direct = p.deflection(tau_direct).unwrap();
        assert!((w_direct - d.tan).abs() < 1e-10);

        assert!(detachment_angle(&gas, 0.9).is_err());
    }

    #[test]
    fn sonic_anchor() {
        let gas = GasModel::new(2.0).unwrap();
        let s = sonic_angle(&gas, 2.0).unwrap();
        assert!((s.tau - 2.0).abs() < 1e-13);
        let expect = (2.0f64.sqrt() / 4.0).atan();
        assert!((s.angle - expect).abs() < 1e-14, "angle = {}", s.angle);

        let dual = sonic_angle_via_polar(&gas, 2.0).unwrap();
        assert!((dual.angle - s.angle).abs() < 1e-12);

        // isothermal closed form
        let g1 = GasModel::new(1.0).unwrap();
        let s1 = sonic_angle(&g1, 2.0).unwrap();
        assert!((s1.tau - ((4.0f64 - 1.0) / 2.0).exp()).abs() < 1e-12 * s1.tau);
    }

    #[test]
    fn ordering_and_limits() {
        for &gamma in &[1.0, 1.4, 2.0] {
            let gas = GasModel::new(gamma).unwrap();
            for &m in &[1.1, 2.0, 5.0] {
                let d = detachment_angle(&gas, m).unwrap();
                let s = sonic_angle(&gas, m).unwrap();
                assert!(s.angle < d.angle, "ordering failed at gamma={gamma} M={m}");
                assert!(s.tau < d.tau);
            }
        }
        // near-sonic upstream gives vanishing angles
        let gas = GasModel::new(2.0).unwrap();
        assert!(detachment_angle(&gas, 1.0 + 1e-6).unwrap().angle < 1e-2);
        assert!(sonic_angle(&gas, 1.0 + 1e-6).unwrap().angle < 1e-2);
    }

    #[test]
    fn isothermal_saturation_is_monotone_in_ln_tan() {
        // in radians both saturate at pi/2, but ln tan keeps strictly increasing
        let gas = GasModel::new(1.0).unwrap();
        let a = detachment_angle(&gas, 20.0).unwrap();
        let b = detachment_angle(&gas, 30.0).unwrap();
        assert_eq!(a.angle, FRAC_PI_2);
        assert_eq!(b.angle, FRAC_PI_2);
        assert!(b.ln_tan > a.ln_tan);
    }

    #[test]
    fn crossings_bracket_the_detachment_ratio() {
        let p = polar(2.0, 2.0);
        let c = p.crossings(0.2).unwrap();
        assert!(!c.critical);
        let d = p.detachment_ln_tau().unwrap();
        assert!(c.ln_weak < d && d < c.ln_strong);
        assert!((p.deflection(c.weak()).unwrap() - 0.2).abs() < 1e-12);
        assert!((p.deflection(c.strong()).unwrap() - 0.2).abs() < 1e-12);

        let w_max = p.deflection_at_ln_tau(d);
        assert!(p.crossings(w_max * (1.0 + 1e-13)).unwrap().critical);
        assert!(matches!(
            p.crossings(w_max + 0.1),
            Err(Error::Detachment { .. })
        ));
    }
}
