//! Polytropic equation-of-state primitives and the Bernoulli density map.
//!
//! Everything is nondimensionalised so that the reference state has density 1
//! and sonic speed 1 (pressure law `p = rho^gamma / gamma`), which makes
//! `h(1) = 0` and `c(1) = 1`. Angles are radians throughout the crate.

use crate::error::{Error, Result};
use serde::Serialize;

/// Below this distance from 1, `gamma` is treated as exactly 1 and the
/// isothermal (log/exp) closed forms are used.
pub const GAMMA_ONE_TOL: f64 = 1e-12;

/// Below this argument separation, `ell` switches to its first-order
/// expansion; the raw formula loses half its digits there.
const ELL_EXPANSION_TOL: f64 = 1e-8;

/// Polytropic gas with exponent `gamma >= 1` and the Bernoulli constant of
/// the self-similar problem.
///
/// With the reference normalisation the Bernoulli constant is `v2^2 / 2`
/// where `v2 < 0` is the vertical velocity of the top sector state; use
/// [`GasModel::with_v2`] when that state is in play and [`GasModel::new`]
/// (zero constant) for purely steady work such as shock polars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasModel {
    gamma: f64,
    bernoulli: f64,
}

impl GasModel {
    /// Gas with `bernoulli = 0`.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidGamma(gamma));
        }
        Ok(Self { gamma, bernoulli: 0.0 })
    }

    /// Gas with the Bernoulli constant fixed by the vertical velocity `v2`
    /// of the reference state, `bernoulli = v2^2 / 2`.
    ///
    /// Requires `v2` in `(v_min, 0)` with `v_min = -ell(0+, 1)`.
    pub fn with_v2(gamma: f64, v2: f64) -> Result<Self> {
        let gas = Self::new(gamma)?;
        if !(v2 < 0.0) || v2 <= gas.v_min() {
            return Err(Error::ParameterDomain(format!(
                "v2 = {v2} outside admissible range ({:.6}, 0) for gamma = {gamma}",
                gas.v_min()
            )));
        }
        Ok(Self { bernoulli: 0.5 * v2 * v2, ..gas })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bernoulli(&self) -> f64 {
        self.bernoulli
    }

    /// Whether the isothermal closed forms are in effect.
    pub fn is_isothermal(&self) -> bool {
        (self.gamma - 1.0).abs() < GAMMA_ONE_TOL
    }

    /// Specific enthalpy `h(rho)`, normalised so `h(1) = 0`.
    ///
    /// `rho = 0` is admitted for `gamma > 1` and returns the finite limit
    /// `-1/(gamma - 1)`.
    pub fn enthalpy(&self, rho: f64) -> Result<f64> {
        if rho < 0.0 || rho.is_nan() {
            return Err(Error::ParameterDomain(format!("enthalpy of density {rho}")));
        }
        if self.is_isothermal() {
            if rho <= 0.0 {
                return Err(Error::ParameterDomain(
                    "enthalpy diverges at vacuum for gamma = 1".into(),
                ));
            }
            return Ok(rho.ln());
        }
        let gm1 = self.gamma - 1.0;
        // expm1 keeps full precision for gamma near 1 and for rho near 1,
        // and ln(0) = -inf gives the vacuum limit -1/(gamma-1) for free.
        Ok(f64::exp_m1(gm1 * rho.ln()) / gm1)
    }

    /// Derivative `h'(rho) = rho^(gamma-2)` for `rho > 0`.
    pub fn enthalpy_slope(&self, rho: f64) -> f64 {
        debug_assert!(rho > 0.0);
        if self.is_isothermal() {
            1.0 / rho
        } else {
            rho.powf(self.gamma - 2.0)
        }
    }

    /// Sonic speed `c(rho) = rho^((gamma-1)/2)`; identically 1 for gamma = 1.
    pub fn sonic_speed(&self, rho: f64) -> f64 {
        debug_assert!(rho >= 0.0);
        if self.is_isothermal() {
            1.0
        } else {
            rho.powf(0.5 * (self.gamma - 1.0))
        }
    }

    /// Sonic speed squared from a known enthalpy value, via
    /// `c^2 = (gamma-1) h + 1`.
    pub fn sonic_speed_sq_from_enthalpy(&self, h: f64) -> f64 {
        (self.gamma - 1.0) * h + 1.0
    }

    /// The jump-speed function
    /// `ell(a, b) = sqrt(2 (a - b)(h(a) - h(b)) / (a + b))`.
    ///
    /// Symmetric in its arguments (bit-for-bit under the same code path),
    /// zero at coincident arguments, and strictly monotone away from a fixed
    /// argument in either direction.
    pub fn ell(&self, rho_a: f64, rho_b: f64) -> Result<f64> {
        if rho_a < 0.0 || rho_b < 0.0 || rho_a.is_nan() || rho_b.is_nan() {
            return Err(Error::ParameterDomain(format!("ell({rho_a}, {rho_b})")));
        }
        if self.is_isothermal() && (rho_a == 0.0 || rho_b == 0.0) {
            return Err(Error::DivergentEll);
        }
        let diff = rho_a - rho_b;
        if diff == 0.0 {
            return Ok(0.0);
        }
        if diff.abs() < ELL_EXPANSION_TOL {
            let mid = 0.5 * (rho_a + rho_b);
            return Ok(diff.abs() * (self.enthalpy_slope(mid) / mid).sqrt());
        }
        let dh = self.enthalpy(rho_a)? - self.enthalpy(rho_b)?;
        Ok((2.0 * diff * dh / (rho_a + rho_b)).sqrt())
    }

    /// `ell(0+, 1)`: the upper bound of jump speeds against the reference
    /// density. Equals `sqrt(2/(gamma-1))` for `gamma > 1` and diverges for
    /// `gamma = 1`.
    pub fn ell_vacuum(&self) -> f64 {
        if self.is_isothermal() {
            f64::INFINITY
        } else {
            (2.0 / (self.gamma - 1.0)).sqrt()
        }
    }

    /// Lower admissible bound for `v2`: `v_min = -ell(0+, 1)`.
    pub fn v_min(&self) -> f64 {
        -self.ell_vacuum()
    }

    /// Density from the Bernoulli law given `|grad phi|^2` and the
    /// pseudo-potential value.
    ///
    /// Errors with [`Error::VacuumExceeded`] when the argument drops below
    /// the vacuum bound for `gamma > 1`.
    pub fn density_from_bernoulli(&self, speed_sq: f64, phi: f64) -> Result<f64> {
        let head = self.bernoulli - 0.5 * speed_sq - phi;
        if self.is_isothermal() {
            return Ok(head.exp());
        }
        let gm1 = self.gamma - 1.0;
        // fused multiply-add: the plain form loses half the digits when the
        // argument sits close to the vacuum bound
        let base = gm1.mul_add(head, 1.0);
        if base < 0.0 {
            return Err(Error::VacuumExceeded { base });
        }
        Ok(base.powf(1.0 / gm1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas(gamma: f64) -> GasModel {
        GasModel::new(gamma).unwrap()
    }

    #[test]
    fn enthalpy_anchors() {
        assert_eq!(gas(1.4).enthalpy(1.0).unwrap(), 0.0);
        assert_eq!(gas(1.0).enthalpy(1.0).unwrap(), 0.0);
        assert!((gas(2.0).enthalpy(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gas(1.0).enthalpy(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        // finite vacuum limit for gamma > 1
        assert!((gas(2.0).enthalpy(0.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(gas(1.0).enthalpy(0.0).is_err());
        assert!(gas(1.4).enthalpy(-1.0).is_err());
    }

    #[test]
    fn sonic_speed_anchors() {
        assert_eq!(gas(1.4).sonic_speed(1.0), 1.0);
        assert!((gas(3.0).sonic_speed(4.0) - 4.0).abs() < 1e-14);
        // isothermal gas has constant sonic speed
        assert_eq!(gas(1.0).sonic_speed(7.0), 1.0);
        assert_eq!(gas(1.0 + 1e-13).sonic_speed(7.0), 1.0);
    }

    #[test]
    fn ell_anchors() {
        assert_eq!(gas(1.4).ell(1.7, 1.7).unwrap(), 0.0);
        let l = gas(2.0).ell(2.0, 1.0).unwrap();
        assert!((l - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let lv = gas(2.0).ell(0.0, 1.0).unwrap();
        assert!((lv - 2.0f64.sqrt()).abs() < 1e-15);
        assert!(matches!(gas(1.0).ell(0.0, 1.0), Err(Error::DivergentEll)));
    }

    #[test]
    fn ell_symmetry_bitwise() {
        let g = gas(1.4);
        for &(a, b) in &[(0.3, 2.5), (1.0, 1.0 + 3e-9), (0.01, 900.0), (2.0, 1.9999)] {
            assert_eq!(
                g.ell(a, b).unwrap().to_bits(),
                g.ell(b, a).unwrap().to_bits(),
                "ell not bitwise symmetric at ({a}, {b})"
            );
        }
    }

    #[test]
    fn ell_monotone_both_sides() {
        // strictly decreasing on (0, rho_bar), strictly increasing on (rho_bar, inf)
        for &gamma in &[1.0, 1.2, 1.4, 2.0, 3.0] {
            let g = gas(gamma);
            for &rho_bar in &[0.5, 1.0, 2.0] {
                let mut prev = f64::INFINITY;
                let lo = if gamma == 1.0 { 1e-6 } else { 0.0 };
                for i in 0..1000 {
                    let rho = lo + (rho_bar - lo) * (i as f64 + 0.5) / 1000.0;
                    let l = g.ell(rho_bar, rho).unwrap();
                    assert!(l < prev, "ell not decreasing below rho_bar at gamma={gamma}");
                    prev = l;
                }
                let mut prev = 0.0;
                for i in 1..=1000 {
                    let rho = rho_bar + (10.0 - rho_bar) * i as f64 / 1000.0;
                    let l = g.ell(rho_bar, rho).unwrap();
                    assert!(l > prev, "ell not increasing above rho_bar at gamma={gamma}");
                    prev = l;
                }
            }
        }
    }

    #[test]
    fn ell_expansion_matches_raw_formula() {
        // continuity across the expansion threshold
        let g = gas(1.4);
        let a = 1.3;
        let raw = |d: f64| {
            let dh = g.enthalpy(a + d).unwrap() - g.enthalpy(a).unwrap();
            (2.0 * d * dh / (a + d + a)).sqrt()
        };
        for &d in &[2e-8, 9.9e-9, 1e-9] {
            let l = g.ell(a + d, a).unwrap();
            assert!((l - raw(d)).abs() <= 1e-6 * l, "mismatch at d={d}: {l} vs {}", raw(d));
        }
    }

    #[test]
    fn bernoulli_density_anchors() {
        // (0, -1/2, gamma=2, B=0) -> 1.5
        assert!((gas(2.0).density_from_bernoulli(0.0, -0.5).unwrap() - 1.5).abs() < 1e-15);
        // (0, -1, gamma=1, B=0) -> e
        let e = gas(1.0).density_from_bernoulli(0.0, -1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
        // below vacuum
        assert!(matches!(
            gas(2.0).density_from_bernoulli(0.0, 2.0),
            Err(Error::VacuumExceeded { .. })
        ));
    }

    #[test]
    fn bernoulli_density_on_reference_state() {
        // the reference state (rho=1, u=0, v=v2) satisfies the Bernoulli law
        // identically at every point of the plane
        let v2 = -0.37;
        let g = GasModel::with_v2(1.4, v2).unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.3, 0.2), (-4.0, 7.0), (0.01, 100.0)] {
            let phi = -0.5 * (x * x + y * y) + v2 * y;
            let speed_sq = x * x + (v2 - y) * (v2 - y);
            let rho = g.density_from_bernoulli(speed_sq, phi).unwrap();
            assert!((rho - 1.0).abs() < 1e-12, "rho = {rho} at ({x}, {y})");
        }
    }

    #[test]
    fn bernoulli_round_trip() {
        // The pseudo-potential argument carries h(rho) inside one f64, whose
        // half-ulp the inverse map amplifies by |d rho / d h| = 1/(rho h').
        // The tolerance is 1e-12 plus exactly that interface term (it only
        // matters within a few orders of the vacuum bound).
        for &gamma in &[1.0, 1.2, 1.4, 2.0, 3.0] {
            let g = gas(gamma);
            for &rho in &[1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3] {
                let h = g.enthalpy(rho).unwrap();
                let back = g.density_from_bernoulli(0.0, g.bernoulli() - h).unwrap();
                let cond = (h.abs() + 1.0) / (rho * g.enthalpy_slope(rho));
                let tol = 1e-12 + 4.0 * f64::EPSILON * cond;
                assert!(
                    (back - rho).abs() <= tol * rho,
                    "round trip failed: gamma={gamma} rho={rho} back={back}"
                );
            }
        }
    }

    #[test]
    fn near_isothermal_matches_isothermal() {
        let g1 = gas(1.0);
        let ge = GasModel::new(1.0 + 1e-8).unwrap();
        assert!(!ge.is_isothermal());
        for i in 0..100 {
            let rho = 0.1 + 9.9 * i as f64 / 99.0;
            let h1 = g1.enthalpy(rho).unwrap();
            let he = ge.enthalpy(rho).unwrap();
            if h1.abs() > 1e-9 {
                assert!((he - h1).abs() <= 1e-6 * h1.abs());
            }
            let c1 = g1.sonic_speed(rho);
            let ce = ge.sonic_speed(rho);
            assert!((ce - c1).abs() <= 1e-6 * c1);
            let l1 = g1.ell(rho, 1.3).unwrap();
            let le = ge.ell(rho, 1.3).unwrap();
            if l1 > 1e-9 {
                assert!((le - l1).abs() <= 1e-6 * l1);
            }
        }
    }

    #[test]
    fn rejects_bad_gamma_and_v2() {
        assert!(GasModel::new(0.9).is_err());
        assert!(GasModel::new(f64::NAN).is_err());
        assert!(GasModel::with_v2(2.0, 0.0).is_err());
        assert!(GasModel::with_v2(2.0, -1.5).is_err()); // below v_min = -sqrt(2)
        assert!(GasModel::with_v2(1.0, -50.0).is_ok()); // v_min = -inf
    }
}
