//! Configuration taxonomy: map `(gamma, v2, theta1, theta2)` to the
//! reflection pattern the local theory predicts, and sweep the incident
//! angle square into a phase diagram.

use crate::error::{Error, Result};
use crate::reflection::{self, CriticalAngles};
use crate::riemann::Side;
use crate::thermo::GasModel;
use serde::Serialize;

/// Which incident angle(s) trip a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sides {
    Right,
    Left,
    Both,
}

impl Sides {
    fn from_flags(right: bool, left: bool) -> Option<Sides> {
        match (right, left) {
            (true, true) => Some(Sides::Both),
            (true, false) => Some(Sides::Right),
            (false, true) => Some(Sides::Left),
            (false, false) => None,
        }
    }
}

impl std::fmt::Display for Sides {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sides::Right => write!(f, "right"),
            Sides::Left => write!(f, "left"),
            Sides::Both => write!(f, "both"),
        }
    }
}

/// The reflection configuration of one parameter tuple.
///
/// Interval conventions (closed on the left, matching the sonic-boundary
/// definitions): an angle in `(0, theta_s)` reflects supersonically, in
/// `[theta_s, theta_d)` subsonically, at or above `theta_d` not at all, and
/// at or above `theta_cr` the data themselves are inadmissible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Configuration {
    /// Both angles zero: a single horizontal reflected shock.
    NormalReflection,
    /// Exactly one angle zero; the payload names the normal (zero-angle)
    /// side.
    UnilateralNormal(Side),
    /// Both reflections supersonic at their reflection points (Case I).
    SupersonicSupersonic,
    /// One supersonic, one subsonic; the payload names the subsonic side
    /// (Case II).
    SupersonicSubsonic(Side),
    /// Both subsonic (Case III).
    SubsonicSubsonic,
    /// Regular reflection impossible on the named side(s).
    NoRegularReflection(Sides),
    /// Incident angle(s) at or beyond the vacuum critical angle.
    VacuumExceeded(Sides),
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Configuration::NormalReflection => write!(f, "normal-reflection"),
            Configuration::UnilateralNormal(s) => write!(f, "unilateral-normal({s})"),
            Configuration::SupersonicSupersonic => write!(f, "supersonic-supersonic"),
            Configuration::SupersonicSubsonic(s) => write!(f, "supersonic-subsonic({s})"),
            Configuration::SubsonicSubsonic => write!(f, "subsonic-subsonic"),
            Configuration::NoRegularReflection(s) => write!(f, "no-regular-reflection({s})"),
            Configuration::VacuumExceeded(s) => write!(f, "vacuum-exceeded({s})"),
        }
    }
}

fn classify_with(angles: &CriticalAngles, theta1: f64, theta2: f64) -> Result<Configuration> {
    if theta1 < 0.0 || theta2 < 0.0 {
        return Err(Error::ParameterDomain(format!(
            "negative incident angle ({theta1}, {theta2})"
        )));
    }
    if let Some(s) = Sides::from_flags(theta1 >= angles.theta_cr, theta2 >= angles.theta_cr) {
        return Ok(Configuration::VacuumExceeded(s));
    }
    if let Some(s) = Sides::from_flags(theta1 >= angles.theta_d, theta2 >= angles.theta_d) {
        return Ok(Configuration::NoRegularReflection(s));
    }
    Ok(match (theta1 == 0.0, theta2 == 0.0) {
        (true, true) => Configuration::NormalReflection,
        (true, false) => Configuration::UnilateralNormal(Side::Right),
        (false, true) => Configuration::UnilateralNormal(Side::Left),
        (false, false) => {
            let sub1 = theta1 >= angles.theta_s;
            let sub2 = theta2 >= angles.theta_s;
            match (sub1, sub2) {
                (false, false) => Configuration::SupersonicSupersonic,
                (true, false) => Configuration::SupersonicSubsonic(Side::Right),
                (false, true) => Configuration::SupersonicSubsonic(Side::Left),
                (true, true) => Configuration::SubsonicSubsonic,
            }
        }
    })
}

/// Classify one parameter tuple.
pub fn classify(gas: &GasModel, v2: f64, theta1: f64, theta2: f64) -> Result<Configuration> {
    let angles = reflection::critical_angles(gas, v2)?;
    classify_with(&angles, theta1, theta2)
}

/// One cell of a phase-diagram sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepCell {
    pub theta1: f64,
    pub theta2: f64,
    pub kind: Configuration,
}

/// Phase diagram over `[0, theta_cr)^2` on an `n x n` grid (row-major in
/// `theta1`), together with the critical angles the cell boundaries come
/// from.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub angles: CriticalAngles,
    pub n: usize,
    pub cells: Vec<SweepCell>,
}

/// Sweep the incident-angle square. The critical angles are computed once;
/// every cell is classified against the same certified thresholds.
pub fn sweep_phase_diagram(gas: &GasModel, v2: f64, n: usize) -> Result<PhaseDiagram> {
    if n < 2 {
        return Err(Error::ParameterDomain(format!("sweep grid size {n} below 2")));
    }
    let angles = reflection::critical_angles(gas, v2)?;
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        let theta1 = angles.theta_cr * i as f64 / n as f64;
        for j in 0..n {
            let theta2 = angles.theta_cr * j as f64 / n as f64;
            cells.push(SweepCell { theta1, theta2, kind: classify_with(&angles, theta1, theta2)? });
        }
    }
    Ok(PhaseDiagram { angles, n, cells })
}

impl PhaseDiagram {
    /// Deterministic row-major CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta1_rad,theta2_rad,kind,theta_s,theta_d,theta_cr\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e}\n",
                c.theta1, c.theta2, c.kind, self.angles.theta_s, self.angles.theta_d,
                self.angles.theta_cr
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas(gamma: f64, v2: f64) -> GasModel {
        GasModel::with_v2(gamma, v2).unwrap()
    }

    #[test]
    fn corner_cases() {
        let g = gas(1.4, -0.3);
        assert_eq!(classify(&g, -0.3, 0.0, 0.0).unwrap(), Configuration::NormalReflection);
        assert_eq!(
            classify(&g, -0.3, 0.0, 0.2).unwrap(),
            Configuration::UnilateralNormal(Side::Right)
        );
        assert_eq!(
            classify(&g, -0.3, 0.2, 0.0).unwrap(),
            Configuration::UnilateralNormal(Side::Left)
        );
        assert!(classify(&g, -0.3, -0.1, 0.2).is_err());
    }

    #[test]
    fn interval_map_matches_critical_angles() {
        let g = gas(1.4, -0.3);
        let ca = reflection::critical_angles(&g, -0.3).unwrap();
        let sup = 0.5 * ca.theta_s;
        let sub = 0.5 * (ca.theta_s + ca.theta_d);
        let beyond = 0.5 * (ca.theta_d + ca.theta_cr);

        assert_eq!(classify(&g, -0.3, sup, sup).unwrap(), Configuration::SupersonicSupersonic);
        assert_eq!(
            classify(&g, -0.3, sub, sup).unwrap(),
            Configuration::SupersonicSubsonic(Side::Right)
        );
        assert_eq!(
            classify(&g, -0.3, sup, sub).unwrap(),
            Configuration::SupersonicSubsonic(Side::Left)
        );
        assert_eq!(classify(&g, -0.3, sub, sub).unwrap(), Configuration::SubsonicSubsonic);
        assert_eq!(
            classify(&g, -0.3, beyond, sup).unwrap(),
            Configuration::NoRegularReflection(Sides::Right)
        );
        assert_eq!(
            classify(&g, -0.3, beyond, beyond).unwrap(),
            Configuration::NoRegularReflection(Sides::Both)
        );
        assert_eq!(
            classify(&g, -0.3, ca.theta_cr, sup).unwrap(),
            Configuration::VacuumExceeded(Sides::Right)
        );
        // exactly theta_s is subsonic-side (closed-left interval)
        assert_eq!(
            classify(&g, -0.3, ca.theta_s, ca.theta_s).unwrap(),
            Configuration::SubsonicSubsonic
        );
        assert_eq!(
            classify(&g, -0.3, ca.theta_d, sup).unwrap(),
            Configuration::NoRegularReflection(Sides::Right)
        );
    }

    #[test]
    fn mirror_symmetry() {
        let g = gas(2.0, -0.5);
        let ca = reflection::critical_angles(&g, -0.5).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let t1 = ca.theta_cr * i as f64 / 6.0;
                let t2 = ca.theta_cr * j as f64 / 6.0;
                let a = classify(&g, -0.5, t1, t2).unwrap();
                let b = classify(&g, -0.5, t2, t1).unwrap();
                let mirrored = match b {
                    Configuration::UnilateralNormal(s) => Configuration::UnilateralNormal(s.other()),
                    Configuration::SupersonicSubsonic(s) => {
                        Configuration::SupersonicSubsonic(s.other())
                    }
                    Configuration::NoRegularReflection(Sides::Right) => {
                        Configuration::NoRegularReflection(Sides::Left)
                    }
                    Configuration::NoRegularReflection(Sides::Left) => {
                        Configuration::NoRegularReflection(Sides::Right)
                    }
                    Configuration::VacuumExceeded(Sides::Right) => {
                        Configuration::VacuumExceeded(Sides::Left)
                    }
                    Configuration::VacuumExceeded(Sides::Left) => {
                        Configuration::VacuumExceeded(Sides::Right)
                    }
                    other => other,
                };
                assert_eq!(a, mirrored, "asymmetry at ({t1}, {t2})");
            }
        }
    }

    #[test]
    fn subsonic_cases_require_v2_above_critical() {
        // below v2_s every admissible nonzero angle reflects supersonically
        let g = GasModel::new(1.4).unwrap();
        let (v2s, _) = reflection::critical_v2(&g).unwrap();
        let v2 = 0.5 * (g.v_min() + v2s);
        let g = gas(1.4, v2);
        let diagram = sweep_phase_diagram(&g, v2, 24).unwrap();
        for cell in &diagram.cells {
            assert!(
                !matches!(
                    cell.kind,
                    Configuration::SupersonicSubsonic(_) | Configuration::SubsonicSubsonic
                ),
                "subsonic cell at ({}, {}) despite v2 < v2_s",
                cell.theta1,
                cell.theta2
            );
        }
    }

    #[test]
    fn sweep_structure() {
        let g = gas(1.4, -0.3);
        let d = sweep_phase_diagram(&g, -0.3, 16).unwrap();
        assert_eq!(d.cells.len(), 256);
        assert_eq!(d.cells[0].kind, Configuration::NormalReflection);
        // down each column the subsonic-ness never decreases with theta1
        let rank = |k: &Configuration| match k {
            Configuration::NormalReflection | Configuration::UnilateralNormal(_) => 0,
            Configuration::SupersonicSupersonic => 1,
            Configuration::SupersonicSubsonic(_) => 2,
            Configuration::SubsonicSubsonic => 3,
            Configuration::NoRegularReflection(_) => 4,
            Configuration::VacuumExceeded(_) => 5,
        };
        for j in 1..16 {
            let mut prev = 0;
            for i in 1..16 {
                let r = rank(&d.cells[i * 16 + j].kind);
                assert!(r >= prev, "rank regression in column {j}");
                prev = r;
            }
        }
        let csv = d.to_csv();
        assert!(csv.starts_with("theta1_rad,theta2_rad,kind,theta_s,theta_d,theta_cr\n"));
        assert_eq!(csv.lines().count(), 257);
        assert!(sweep_phase_diagram(&g, -0.3, 1).is_err());
    }
}
