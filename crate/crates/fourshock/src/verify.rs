//! Property suites shared by the acceptance tests and the `verify` CLI
//! subcommand. Every tolerance is pinned here, next to the check it gates.

use crate::error::{Error, Result};
use crate::polar::{self, SteadyPolar};
use crate::reflection::{self, ReflectionSolution};
use crate::riemann::{Point2, RiemannSetup, Side};
use crate::sim::{detect_reflected_shock, DetectSpec, FvField, FvGrid, SimConfig, Simulation};
use crate::thermo::GasModel;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// One verified property.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::new(name, residual.abs() <= tol, format!("residual {residual:.3e} (tol {tol:.1e})"))
    }
}

/// Render one check as a status line.
pub fn format_check(c: &Check) -> String {
    format!("{} {:58} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)
}

pub const SUITES: &[&str] = &[
    "closed-form",
    "polar-monotonicity",
    "limits",
    "reflection",
    "trichotomy",
    "dual-oracle",
    "fv-normal",
    "fv-case1",
];

/// Run a named suite. `fv_nx` overrides the main grid resolution of the two
/// finite-volume suites.
pub fn run_suite(name: &str, fv_nx: Option<usize>) -> Result<Vec<Check>> {
    match name {
        "closed-form" => Ok(suite_closed_form()),
        "polar-monotonicity" => Ok(suite_polar_monotonicity()),
        "limits" => Ok(suite_limits()),
        "reflection" => Ok(suite_reflection()),
        "trichotomy" => Ok(suite_trichotomy()),
        "dual-oracle" => Ok(suite_dual_oracle()),
        "fv-normal" => suite_fv_normal(fv_nx.unwrap_or(400)),
        "fv-case1" => suite_fv_case1(fv_nx.unwrap_or(800)),
        other => Err(Error::ParameterDomain(format!(
            "unknown suite '{other}' (available: {})",
            SUITES.join(", ")
        ))),
    }
}

// ---------------------------------------------------------------- suite 1

/// Hand-derivable constants, all at 1e-10 relative.
pub fn suite_closed_form() -> Vec<Check> {
    const TOL: f64 = 1e-10;
    let mut out = Vec::new();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);

    let g2 = GasModel::new(2.0).unwrap();
    out.push(Check::residual(
        "ell(2,1; gamma=2) = sqrt(2/3)",
        rel(g2.ell(2.0, 1.0).unwrap(), (2.0f64 / 3.0).sqrt()),
        TOL,
    ));

    let gv = GasModel::with_v2(2.0, -1.0).unwrap();
    out.push(Check::residual(
        "theta_cr(gamma=2, v2=-1) = pi/4",
        rel(crate::riemann::vacuum_critical_angle(&gv, -1.0).unwrap(), FRAC_PI_4),
        TOL,
    ));

    let gv = GasModel::with_v2(2.0, -0.5).unwrap();
    let rho1 = crate::riemann::solve_compatibility(&gv, -0.5, FRAC_PI_4).unwrap();
    out.push(Check::residual(
        "rho1(gamma=2, v2=-1/2, 45deg) = (9-sqrt(33))/8",
        rel(rho1, (9.0 - 33.0f64.sqrt()) / 8.0),
        TOL,
    ));

    let setup = RiemannSetup::build(gv, -0.5, FRAC_PI_4, 0.3).unwrap();
    out.push(Check::residual(
        "xi_P01(gamma=2, v2=-1/2, 45deg)",
        rel(setup.xi_p01.finite().unwrap(), 1.186140661634507),
        TOL,
    ));

    let v2 = -(2.0f64 / 3.0).sqrt();
    let gv = GasModel::with_v2(2.0, v2).unwrap();
    let norm = reflection::normal_state(&gv, v2).unwrap();
    out.push(Check::residual(
        "normal state rho0(gamma=2, v2=-sqrt(2/3)) = 2",
        rel(norm.rho0, 2.0),
        TOL,
    ));
    out.push(Check::residual(
        "normal state eta0 = sqrt(2/3)",
        rel(norm.eta0, (2.0f64 / 3.0).sqrt()),
        TOL,
    ));

    let p = SteadyPolar::new(g2, 2.0).unwrap();
    out.push(Check::residual(
        "tau_bar(gamma=2, M=2) = 1+sqrt(3)",
        rel(p.max_density_ratio(), 1.0 + 3.0f64.sqrt()),
        TOL,
    ));

    let s = polar::sonic_angle(&g2, 2.0).unwrap();
    out.push(Check::residual("tau_s(gamma=2, M=2) = 2", rel(s.tau, 2.0), TOL));
    out.push(Check::residual(
        "theta_s_stdy(gamma=2, M=2) = arctan(sqrt(2)/4)",
        rel(s.angle, (2.0f64.sqrt() / 4.0).atan()),
        TOL,
    ));

    let d = polar::detachment_angle(&g2, 3.2f64.sqrt()).unwrap();
    out.push(Check::residual("tau_d(gamma=2, M^2=3.2) = 2", rel(d.tau, 2.0), TOL));
    out.push(Check::residual(
        "theta_d_stdy(gamma=2, M^2=3.2) = arctan(sqrt(5)/7)",
        rel(d.angle, (5.0f64.sqrt() / 7.0).atan()),
        TOL,
    ));

    out
}

// ---------------------------------------------------------------- suite 2

/// Strict monotonicity of the steady critical angles in the Mach number and
/// of the reflection quantities in the incident angle.
///
/// The steady angles are compared through `ln tan theta`, which is strictly
/// monotone iff the angle is and, unlike the radian value, cannot saturate
/// at `pi/2` in double precision (the isothermal detachment angle does so
/// from Mach numbers around 13).
pub fn suite_polar_monotonicity() -> Vec<Check> {
    let mut out = Vec::new();

    for &gamma in &[1.0, 1.2, 1.4, 2.0, 3.0] {
        let gas = GasModel::new(gamma).unwrap();
        let n = 300;
        let (m_lo, m_hi) = (1.001f64, 1e3f64);
        let mut prev_d = f64::NEG_INFINITY;
        let mut prev_s = f64::NEG_INFINITY;
        let mut ok_d = true;
        let mut ok_s = true;
        for k in 0..n {
            let m = m_lo * (m_hi / m_lo).powf(k as f64 / (n - 1) as f64);
            let d = polar::detachment_angle(&gas, m).unwrap().ln_tan;
            let s = polar::sonic_angle(&gas, m).unwrap().ln_tan;
            ok_d &= d > prev_d;
            ok_s &= s > prev_s && s < d;
            prev_d = d;
            prev_s = s;
        }
        out.push(Check::new(
            format!("theta_d_stdy strictly increasing in M (gamma={gamma})"),
            ok_d,
            "300-point log grid M in [1.001, 1e3]",
        ));
        out.push(Check::new(
            format!("theta_s_stdy strictly increasing, below theta_d (gamma={gamma})"),
            ok_s,
            "300-point log grid M in [1.001, 1e3]",
        ));
    }

    for (gamma, v2) in [(1.4, -0.3), (2.0, -0.5), (1.0, -1.0)] {
        let gas = GasModel::with_v2(gamma, v2).unwrap();
        let theta_cr = crate::riemann::vacuum_critical_angle(&gas, v2).unwrap();
        let ca = reflection::critical_angles(&gas, v2).unwrap();

        let mut ok_m2 = true;
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let theta = 1e-3 + (theta_cr - 2e-3) * k as f64 / 199.0;
            let m2 = reflection::pseudo_mach2(&gas, v2, theta).unwrap();
            ok_m2 &= m2 < prev;
            prev = m2;
        }
        out.push(Check::new(
            format!("M2 strictly decreasing in theta1 (gamma={gamma}, v2={v2})"),
            ok_m2,
            "200-point grid",
        ));

        let mut ok_angle = true;
        let mut ok_intercept = true;
        let (mut prev_angle, mut prev_a) = (f64::INFINITY, 0.0f64);
        for k in 0..100 {
            let theta = ca.theta_d * (k as f64 + 0.5) / 100.5;
            let sol = reflection::solve_reflection(&gas, v2, theta, Side::Right).unwrap();
            ok_angle &= sol.weak.shock_angle < prev_angle;
            ok_intercept &= sol.weak.eta_intercept > prev_a;
            prev_angle = sol.weak.shock_angle;
            prev_a = sol.weak.eta_intercept;
        }
        out.push(Check::new(
            format!("theta_25 strictly decreasing in theta1 (gamma={gamma}, v2={v2})"),
            ok_angle,
            "100-point grid in (0, theta_d)",
        ));
        out.push(Check::new(
            format!("a_25 strictly increasing in theta1 (gamma={gamma}, v2={v2})"),
            ok_intercept,
            "100-point grid in (0, theta_d)",
        ));

        let mut ok_p2 = true;
        let mut prev_eta = f64::INFINITY;
        for k in 0..100 {
            let theta = ca.theta_s * (k as f64 + 0.5) / 100.5;
            let sol = reflection::solve_reflection(&gas, v2, theta, Side::Right).unwrap();
            let geom = sol.sonic_geometry(&sol.weak).unwrap();
            ok_p2 &= geom.shock_point.y < prev_eta;
            prev_eta = geom.shock_point.y;
        }
        out.push(Check::new(
            format!("eta_P2 strictly decreasing in theta1 (gamma={gamma}, v2={v2})"),
            ok_p2,
            "100-point grid in (0, theta_s)",
        ));
    }

    out
}

// ---------------------------------------------------------------- suite 3

/// Limiting values of the steady angles at extreme Mach numbers.
///
/// The stated detachment tolerance is known not to hold at `gamma = 3`: the
/// complement `pi/2 - theta_d_stdy` decays like `2 / M^(1/(gamma-1))` and
/// equals 2.0e-2 exactly at `M = 1e4`. The check reports the measured value
/// honestly instead of loosening the threshold.
pub fn suite_limits() -> Vec<Check> {
    let mut out = Vec::new();
    for &gamma in &[1.4, 2.0, 3.0] {
        let gas = GasModel::new(gamma).unwrap();
        let d = polar::detachment_angle(&gas, 1e4).unwrap();
        out.push(Check::residual(
            format!("|theta_d_stdy(1e4) - pi/2| < 1e-3 (gamma={gamma})"),
            FRAC_PI_2 - d.angle,
            1e-3,
        ));
        let s = polar::sonic_angle(&gas, 1e4).unwrap();
        out.push(Check::residual(
            format!("|theta_s_stdy(1e4) - arctan(sqrt(2/(g-1)))| < 1e-3 (gamma={gamma})"),
            s.angle - (2.0 / (gamma - 1.0)).sqrt().atan(),
            1e-3,
        ));
        let near = polar::sonic_angle(&gas, 1.0 + 1e-6).unwrap();
        out.push(Check::new(
            format!("theta_s_stdy(1+1e-6) < 1e-2 (gamma={gamma})"),
            near.angle < 1e-2,
            format!("value {:.3e}", near.angle),
        ));
    }
    out
}

// ---------------------------------------------------------------- suite 4

fn reflection_samples() -> Vec<(f64, f64, f64)> {
    // 5 gammas x 5 speeds x 4 angle fractions = 100 deterministic samples.
    // The soft-gamma blocks keep away from the smallest angle fractions:
    // the strong density blows up like exp(M2^2/2) towards theta -> 0 and
    // the uniform-state representation (u stored, normal speed u - xi
    // reconstructed) cannot carry jump residuals below eps * xi * rho, so
    // samples stay where that floor is under the 1e-11 budget.
    let mut samples = Vec::with_capacity(100);
    let blocks: [(f64, f64, [f64; 4]); 5] = [
        (1.0, -1.3, [0.55, 0.7, 0.85, 0.97]),
        (1.2, -2.0, [0.45, 0.65, 0.8, 0.95]),
        (1.4, -2.6, [0.4, 0.6, 0.8, 0.95]),
        (2.0, -2.6, [0.3, 0.55, 0.8, 0.95]),
        (3.0, -2.6, [0.3, 0.55, 0.8, 0.95]),
    ];
    for (gamma, v_cap, f_ts) in blocks {
        let gas = GasModel::new(gamma).unwrap();
        let v_lo = gas.v_min().max(v_cap);
        for &f_v in &[0.12, 0.3, 0.5, 0.7, 0.88] {
            let v2 = f_v * v_lo;
            for &f_t in &f_ts {
                samples.push((gamma, v2, f_t));
            }
        }
    }
    samples
}

/// Jump-condition residuals, branch ordering, slip condition, and the
/// reflected-angle bound across 100 deterministic samples, plus the
/// weak-branch limit towards the normal reflection.
pub fn suite_reflection() -> Vec<Check> {
    const RH_TOL: f64 = 1e-11;
    let mut out = Vec::new();

    let mut worst_rh = 0.0f64;
    let mut ok_order = true;
    let mut ok_slip = true;
    let mut ok_angle = true;
    let mut n = 0usize;
    for (gamma, v2, f_t) in reflection_samples() {
        let gas = GasModel::with_v2(gamma, v2).unwrap();
        let ca = reflection::critical_angles(&gas, v2).unwrap();
        let theta = f_t * ca.theta_d;
        let sol = reflection::solve_reflection(&gas, v2, theta, Side::Right).unwrap();
        let strong = sol.strong.expect("strong branch on the sample grid");
        n += 1;

        worst_rh = worst_rh.max(sol.rh_residual(&gas, &sol.weak).max());
        worst_rh = worst_rh.max(sol.rh_residual(&gas, &strong).max());
        ok_order &= 1.0 < sol.weak.state.rho && sol.weak.state.rho < strong.state.rho;
        ok_slip &= sol.weak.state.v == 0.0 && strong.state.v == 0.0;
        // the angle estimate concerns the admissible (weak) state; the
        // strong branch approaches the bound as the incident angle vanishes
        ok_angle &= sol.weak.shock_angle > FRAC_PI_2 + sol.turning_angle
            && sol.weak.shock_angle <= PI;
    }
    out.push(Check::residual(
        format!("jump-condition residuals over {n} samples, both branches"),
        worst_rh,
        RH_TOL,
    ));
    out.push(Check::new("density ordering 1 < rho_wk < rho_sg", ok_order, format!("{n} samples")));
    out.push(Check::new("slip condition v = 0 exact", ok_slip, format!("{n} samples")));
    out.push(Check::new(
        "reflected-angle bound pi/2 + turning < theta_25 <= pi",
        ok_angle,
        format!("{n} samples"),
    ));

    let mut worst_limit = 0.0f64;
    for &gamma in &[1.0, 1.2, 1.4, 2.0, 3.0] {
        let gas = GasModel::new(gamma).unwrap();
        let v_lo = gas.v_min().max(-2.6);
        for &f_v in &[0.12, 0.3, 0.5, 0.7, 0.88] {
            let v2 = f_v * v_lo;
            let gas = GasModel::with_v2(gamma, v2).unwrap();
            let norm = reflection::normal_state(&gas, v2).unwrap();
            let sol = reflection::solve_reflection(&gas, v2, 1e-5, Side::Right).unwrap();
            worst_limit = worst_limit.max((sol.weak.state.rho - norm.rho0).abs());
            worst_limit = worst_limit.max(sol.weak.state.u.abs());
            let product = sol.weak.state.u * sol.xi_p0.finite().unwrap();
            worst_limit = worst_limit.max((product - (-v2 * norm.eta0)).abs());
        }
    }
    out.push(Check::residual(
        "weak branch at theta = 1e-5 matches the normal reflection",
        worst_limit,
        1e-3,
    ));

    out
}

// ---------------------------------------------------------------- suite 5

/// The critical speeds split the admissible range into the three predicted
/// equality patterns, and the reflected-shock intersection point converges
/// to the normal-reflection corner.
pub fn suite_trichotomy() -> Vec<Check> {
    let mut out = Vec::new();

    for &gamma in &[1.4, 2.0] {
        let gas = GasModel::new(gamma).unwrap();
        let (v2s, v2d) = reflection::critical_v2(&gas).unwrap();
        out.push(Check::new(
            format!("v_min < v2_s < v2_d < 0 (gamma={gamma})"),
            gas.v_min() < v2s && v2s < v2d && v2d < 0.0,
            format!("v2_s={v2s:.6}, v2_d={v2d:.6}"),
        ));

        let intervals = [
            (gas.v_min(), v2s, "theta_s = theta_d = theta_cr"),
            (v2s, v2d, "theta_s < theta_d = theta_cr"),
            (v2d, 0.0, "theta_s < theta_d < theta_cr"),
        ];
        for (idx, (lo, hi, pattern)) in intervals.iter().enumerate() {
            let mut ok = true;
            let mut seen = String::new();
            for &f in &[0.25, 0.5, 0.75] {
                let v2 = lo + (hi - lo) * f;
                let ca = reflection::critical_angles(&gas, v2).unwrap();
                let matches = match idx {
                    0 => ca.theta_s == ca.theta_d && ca.theta_d == ca.theta_cr,
                    1 => ca.theta_s < ca.theta_d && ca.theta_d == ca.theta_cr,
                    _ => ca.theta_s < ca.theta_d && ca.theta_d < ca.theta_cr,
                };
                if !matches {
                    ok = false;
                    seen = format!(
                        "v2={v2:.6}: theta_s={:.6}, theta_d={:.6}, theta_cr={:.6}",
                        ca.theta_s, ca.theta_d, ca.theta_cr
                    );
                }
            }
            out.push(Check::new(
                format!("interval {} reproduces {pattern} (gamma={gamma})", idx + 1),
                ok,
                if ok { "3 interior samples".to_string() } else { seen },
            ));
        }
    }

    // P_I -> (0, eta0) along theta = (1e-k, 2e-k), error decreasing in k
    let gas = GasModel::with_v2(2.0, -0.5).unwrap();
    let norm = reflection::normal_state(&gas, -0.5).unwrap();
    let mut prev = f64::INFINITY;
    let mut ok = true;
    let mut detail = String::new();
    for k in 2..=6 {
        let t = 10f64.powi(-k);
        let right = reflection::solve_reflection(&gas, -0.5, t, Side::Right).unwrap();
        let left = reflection::solve_reflection(&gas, -0.5, 2.0 * t, Side::Left).unwrap();
        let p = reflection::intersection_point(&right, &left);
        let err = p.x.hypot(p.y - norm.eta0);
        ok &= err < prev;
        detail = format!("{detail}{}k={k}: {err:.2e}", if k > 2 { ", " } else { "" });
        prev = err;
    }
    out.push(Check::new("P_I -> (0, eta0) with decreasing error", ok, detail));

    out
}

// ---------------------------------------------------------------- suite 6

/// The two algebraically independent routes to each steady critical angle
/// agree: detachment to 1e-10, sonic to 1e-12.
pub fn suite_dual_oracle() -> Vec<Check> {
    let mut out = Vec::new();
    let mut worst_d = 0.0f64;
    let mut worst_s = 0.0f64;
    let grid: &[(f64, &[f64])] = &[
        (1.0, &[1.5, 3.0, 8.0]),
        (1.2, &[1.2, 2.0, 5.0, 20.0]),
        (1.4, &[1.2, 2.0, 5.0, 20.0]),
        (2.0, &[1.2, 2.0, 5.0, 20.0]),
        (3.0, &[1.2, 2.0, 5.0, 20.0]),
    ];
    for &(gamma, machs) in grid {
        let gas = GasModel::new(gamma).unwrap();
        for &m in machs {
            let parametric = polar::detachment_angle(&gas, m).unwrap();
            let p = SteadyPolar::new(gas, m).unwrap();
            let tau_direct = p.detachment_tau_direct().unwrap();
            let w_direct = p.deflection(tau_direct).unwrap();
            worst_d = worst_d.max((w_direct.atan() - parametric.angle).abs());
            worst_d = worst_d.max((tau_direct - parametric.tau).abs() / parametric.tau);

            let s_par = polar::sonic_angle(&gas, m).unwrap();
            let s_dual = polar::sonic_angle_via_polar(&gas, m).unwrap();
            worst_s = worst_s.max((s_par.angle - s_dual.angle).abs());
        }
    }
    out.push(Check::residual("detachment: stationarity root vs parametric family", worst_d, 1e-10));
    out.push(Check::residual("sonic: closed ratio + polar vs parametric family", worst_s, 1e-12));
    out
}

// ---------------------------------------------------------------- suites 7/8

fn wall_plateau_error(sim: &Simulation, rho_ref: f64, half_width: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..sim.grid.nx as isize {
        let xi = sim.grid.cell_x(i) / sim.t;
        if xi.abs() < half_width {
            let rho = sim.field.rho[sim.field.idx(i, 0)];
            worst = worst.max((rho - rho_ref).abs() / rho_ref);
        }
    }
    worst
}

/// Normal-reflection run: wall plateau, shock height, conservation, and
/// monotone improvement under refinement.
pub fn suite_fv_normal(nx: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let v2 = -(2.0f64 / 3.0).sqrt();
    let gas = GasModel::with_v2(2.0, v2)?;
    let setup = RiemannSetup::build(gas, v2, 0.0, 0.0)?;
    let norm = reflection::normal_state(&gas, v2)?;
    let reflected = reflection::solve_reflection(&gas, v2, 0.0, Side::Right)?;

    let run = |nx: usize| -> Result<(Simulation, f64)> {
        let grid = FvGrid::new(nx, nx / 2, -2.0, 2.0, 2.0)?;
        let mut sim = Simulation::new(setup, grid, SimConfig::default())?;
        sim.run()?;
        let err = wall_plateau_error(&sim, norm.rho0, 0.3);
        Ok((sim, err))
    };

    let (sim, err_main) = run(nx)?;
    out.push(Check::residual(
        format!("wall density plateau within 3% of rho0 ({nx}x{})", nx / 2),
        err_main,
        0.03,
    ));

    let ss = sim.grid.self_similar(sim.t)?;
    let mut spec = DetectSpec::new(Side::Right, 1.4 * norm.eta0);
    spec.circles.push((reflected.weak.sonic_center, reflected.weak.sonic_radius));
    let line = detect_reflected_shock(&sim.field, &ss, &spec)?;
    out.push(Check::new(
        "fitted shock height within 2 cells of eta0",
        (line.intercept - norm.eta0).abs() <= 2.0 * ss.dy,
        format!("intercept {:.6} vs eta0 {:.6} (dy {:.4})", line.intercept, norm.eta0, ss.dy),
    ));

    let record = sim.record();
    out.push(Check::residual("mass conservation drift < 1e-10", record.mass_drift_rel, 1e-10));

    let (_, err_coarse) = run(nx / 2)?;
    let (_, err_fine) = run(nx * 2)?;
    out.push(Check::new(
        format!("wall error decreases under refinement ({}, {}, {})", nx / 2, nx, nx * 2),
        err_coarse > err_main && err_main > err_fine,
        format!("errors {err_coarse:.3e} > {err_main:.3e} > {err_fine:.3e}"),
    ));

    Ok(out)
}

/// Density increases from upstream to downstream across every strong front:
/// at each cell whose density gradient exceeds half the global peak, the
/// pseudo-velocity must point up the gradient.
fn entropy_direction_violations(field: &FvField, grid_ss: &FvGrid) -> (usize, Vec<(f64, f64)>) {
    let (nx, ny) = (grid_ss.nx as isize, grid_ss.ny as isize);
    // stay clear of the far-field seam, where the exact (sharp) ghost data
    // meet the smeared interior front and the gradient direction is a
    // boundary artifact rather than a property of the solution
    let inset = 6;
    let grad = |i: isize, j: isize| -> (f64, f64) {
        (
            (field.rho[field.idx(i + 1, j)] - field.rho[field.idx(i - 1, j)]) / (2.0 * grid_ss.dx),
            (field.rho[field.idx(i, j + 1)] - field.rho[field.idx(i, j - 1)]) / (2.0 * grid_ss.dy),
        )
    };
    let mut peak = 0.0f64;
    for j in inset..ny - inset {
        for i in inset..nx - inset {
            let (gx, gy) = grad(i, j);
            peak = peak.max(gx.hypot(gy));
        }
    }
    let mut fronts = 0usize;
    let mut violations = Vec::new();
    for j in inset..ny - inset {
        for i in inset..nx - inset {
            let (gx, gy) = grad(i, j);
            if gx.hypot(gy) >= 0.5 * peak {
                fronts += 1;
                let c = field.idx(i, j);
                // pseudo-velocity in the self-similar frame
                let qx = field.u[c] - grid_ss.cell_x(i);
                let qy = field.v[c] - grid_ss.cell_y(j);
                if qx * gx + qy * gy <= 0.0 {
                    violations.push((grid_ss.cell_x(i), grid_ss.cell_y(j)));
                }
            }
        }
    }
    (fronts, violations)
}

/// Supersonic-supersonic (symmetric) run compared against the local theory:
/// densities behind the reflected shocks, fitted shock angles, entropy
/// direction, and exact mirror symmetry.
pub fn suite_fv_case1(nx: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (gamma, v2) = (1.4, -0.3);
    let gas = GasModel::with_v2(gamma, v2)?;
    let ca = reflection::critical_angles(&gas, v2)?;
    let theta = 0.5 * ca.theta_s;
    let setup = RiemannSetup::build(gas, v2, theta, theta)?;
    let right = reflection::solve_reflection(&gas, v2, theta, Side::Right)?;
    let left = reflection::solve_reflection(&gas, v2, theta, Side::Left)?;

    let grid = FvGrid::new(nx, nx / 2, -4.0, 4.0, 2.0)?;
    let mut sim = Simulation::new(setup, grid, SimConfig::default())?;
    let record = sim.run()?;
    out.push(Check::residual("mass conservation drift < 1e-10", record.mass_drift_rel, 1e-10));

    let ss = sim.grid.self_similar(sim.t)?;
    let geom = right.sonic_geometry(&right.weak)?;

    // density probe inside the uniform pocket behind each reflected shock
    let probe = |sol: &ReflectionSolution| -> f64 {
        let g = sol.sonic_geometry(&sol.weak).unwrap();
        let xi_p0 = sol.xi_p0.finite().unwrap();
        let cx = 0.5 * (g.wall_point.x + xi_p0);
        let cy = 0.25 * g.shock_point.y;
        let r = (0.04f64).max(3.0 * ss.dx);
        let mut sum = 0.0;
        let mut n = 0usize;
        for j in 0..ss.ny as isize {
            for i in 0..ss.nx as isize {
                if (ss.cell_x(i) - cx).hypot(ss.cell_y(j) - cy) <= r {
                    sum += sim.field.rho[sim.field.idx(i, j)];
                    n += 1;
                }
            }
        }
        sum / n as f64
    };
    let rho_right = probe(&right);
    let rho_left = probe(&left);
    out.push(Check::residual(
        "density behind right reflected shock within 5% of rho5_wk",
        (rho_right - right.weak.state.rho) / right.weak.state.rho,
        0.05,
    ));
    out.push(Check::residual(
        "density behind left reflected shock within 5% of rho6_wk",
        (rho_left - left.weak.state.rho) / left.weak.state.rho,
        0.05,
    ));

    // fitted reflected-shock angles
    let fit = |side: Side, sol: &ReflectionSolution| -> Result<f64> {
        let mut spec = DetectSpec::new(side, 1.1 * geom.shock_point.y);
        spec.circles.push((right.weak.sonic_center, right.weak.sonic_radius));
        spec.circles.push((left.weak.sonic_center, left.weak.sonic_radius));
        for s in [Side::Right, Side::Left] {
            let p0 = setup.reflection_abscissa(s).finite().unwrap();
            spec.exclude_lines.push((Point2::new(p0, 0.0), setup.incident_direction(s)));
        }
        let line = detect_reflected_shock(&sim.field, &ss, &spec)?;
        Ok((line.angle - sol.weak.shock_angle).abs())
    };
    out.push(Check::residual(
        "fitted right shock angle within 0.02 rad of theta_25",
        fit(Side::Right, &right)?,
        0.02,
    ));
    out.push(Check::residual(
        "fitted left shock angle within 0.02 rad of theta_26",
        fit(Side::Left, &left)?,
        0.02,
    ));

    let (fronts, violations) = entropy_direction_violations(&sim.field, &ss);
    let detail = if violations.is_empty() {
        format!("0 violations over {fronts} front cells")
    } else {
        let spots: Vec<String> =
            violations.iter().take(4).map(|(x, y)| format!("({x:.3}, {y:.3})")).collect();
        format!("{} violations over {fronts} front cells at {}", violations.len(), spots.join(" "))
    };
    out.push(Check::new(
        "entropy direction across every detected front",
        fronts > 0 && violations.is_empty(),
        detail,
    ));

    let mut worst = 0.0f64;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let m = grid.nx as isize - 1 - i;
            let d = (sim.field.rho[sim.field.idx(i, j)] - sim.field.rho[sim.field.idx(m, j)]).abs();
            worst = worst.max(d);
        }
    }
    out.push(Check::residual("mirror-symmetry error < 1e-12", worst, 1e-12));

    Ok(out)
}
