//! Desk-scale finite-volume simulation of the potential-flow system in
//! gradient form, used as an independent global check on the local
//! reflection algebra.
//!
//! Evolved unknowns are `(rho, u, v)` with fluxes
//!
//! ```text
//!   rho_t + (rho u)_x + (rho v)_y = 0
//!   u_t   + (|q|^2/2 + h(rho))_x  = 0
//!   v_t   + (|q|^2/2 + h(rho))_y  = 0
//! ```
//!
//! whose jump conditions are exactly the potential-flow ones: tangential
//! velocity stays continuous across discontinuities and the Bernoulli head
//! jump balances the shock speed. The scheme is a first-order local
//! max-speed (Rusanov) two-point flux on a uniform grid; robustness near the
//! degenerate sonic circles is worth more here than sharp fronts.
//!
//! The update sequencing keeps every arithmetic operation mirror-symmetric,
//! so a symmetric setup on a symmetric grid stays symmetric to the last bit.

mod detect;
mod grid;

pub use detect::{detect_reflected_shock, DetectSpec, FittedLine};
pub use grid::{FvGrid, NG};

use crate::error::{Error, Result};
use crate::reflection;
use crate::riemann::RiemannSetup;
use crate::thermo::GasModel;
use serde::Serialize;

/// Ghost-cell policy of one domain edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgePolicy {
    /// Mirror ghosts with the normal velocity negated.
    SlipWall,
    /// Ghosts carry the self-similar far-field pattern evaluated at `x/t`.
    SelfSimilar,
    /// Ghosts copy the nearest interior cell.
    ZeroGradient,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimConfig {
    pub cfl: f64,
    pub t_final: f64,
    pub bottom: EdgePolicy,
    pub top: EdgePolicy,
    pub left: EdgePolicy,
    pub right: EdgePolicy,
    /// How often a step may halve `dt` to restore positivity.
    pub max_dt_retries: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            cfl: 0.45,
            t_final: 1.0,
            bottom: EdgePolicy::SlipWall,
            top: EdgePolicy::SelfSimilar,
            left: EdgePolicy::SelfSimilar,
            right: EdgePolicy::SelfSimilar,
            max_dt_retries: 10,
        }
    }
}

/// Cell-centered state arrays with two ghost layers on each side.
#[derive(Debug, Clone)]
pub struct FvField {
    nx: usize,
    ny: usize,
    stride: usize,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl FvField {
    pub fn new(nx: usize, ny: usize) -> Self {
        let stride = nx + 2 * NG;
        let len = stride * (ny + 2 * NG);
        Self { nx, ny, stride, rho: vec![0.0; len], u: vec![0.0; len], v: vec![0.0; len] }
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -(NG as isize) && i < (self.nx + NG) as isize);
        debug_assert!(j >= -(NG as isize) && j < (self.ny + NG) as isize);
        (j + NG as isize) as usize * self.stride + (i + NG as isize) as usize
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Interior minimum density.
    pub fn min_rho(&self) -> f64 {
        let mut m = f64::INFINITY;
        for j in 0..self.ny as isize {
            for i in 0..self.nx as isize {
                m = m.min(self.rho[self.idx(i, j)]);
            }
        }
        m
    }

    /// CSV dump of the interior (`x,y,rho,u,v`, row-major from the wall up),
    /// deterministic byte-for-byte for a given field.
    pub fn to_csv(&self, grid: &FvGrid) -> String {
        let mut out = String::from("x,y,rho,u,v\n");
        for j in 0..self.ny as isize {
            for i in 0..self.nx as isize {
                let c = self.idx(i, j);
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    grid.cell_x(i),
                    grid.cell_y(j),
                    self.rho[c],
                    self.u[c],
                    self.v[c]
                ));
            }
        }
        out
    }
}

/// The analytic far-field pattern: sector states separated by the incident
/// shocks, with the normal-reflection state standing in on any side whose
/// incident angle is zero. Comparisons run on `t * (phi_i - phi_2)(x/t)`,
/// which is affine in `(x, t)` and therefore valid down to `t = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Background {
    v2: f64,
    /// `(rho, u, v)` and `D`-coefficients of the right candidate.
    right: BgCandidate,
    left: BgCandidate,
    state2: (f64, f64, f64),
}

#[derive(Debug, Clone, Copy)]
struct BgCandidate {
    state: (f64, f64, f64),
    /// `t (phi - phi_2)(x/t) = cx * x + cy * y + ct * t`
    cx: f64,
    cy: f64,
    ct: f64,
}

impl Background {
    pub fn new(setup: &RiemannSetup) -> Result<Self> {
        let normal = reflection::normal_state(&setup.gas, setup.v2)?;
        let make = |theta: f64, xi_wall: Option<f64>, state: &crate::riemann::UniformState, sign: f64| {
            match xi_wall {
                // xi is the signed wall abscissa of this side's reflection
                // point (negative on the left)
                Some(xi) => BgCandidate {
                    state: (state.rho, state.u, state.v),
                    // t (phi_i - phi_2)(x/t) for the sector state:
                    // sign * v2 tan(theta) (x - t xi) - v2 y
                    cx: sign * setup.v2 * theta.tan(),
                    cy: -setup.v2,
                    ct: -sign * setup.v2 * theta.tan() * xi,
                },
                // zero incident angle: the normal-reflection state below
                // the horizontal shock, t (phi_0 - phi_2) = v2 (t eta0 - y)
                None => BgCandidate {
                    state: (normal.rho0, 0.0, 0.0),
                    cx: 0.0,
                    cy: -setup.v2,
                    ct: setup.v2 * normal.eta0,
                },
            }
        };
        Ok(Self {
            v2: setup.v2,
            right: make(
                setup.theta1,
                setup.xi_p01.finite(),
                &setup.state1,
                1.0,
            ),
            left: make(setup.theta2, setup.xi_p02.finite(), &setup.state3, -1.0),
            state2: (1.0, 0.0, setup.v2),
        })
    }

    /// State of the background pattern at physical position `(x, y)` and
    /// time `t >= 0`.
    #[inline]
    pub fn state_at(&self, x: f64, y: f64, t: f64) -> (f64, f64, f64) {
        let d_right = self.right.cx * x + self.right.cy * y + self.right.ct * t;
        let d_left = self.left.cx * x + self.left.cy * y + self.left.ct * t;
        if d_right < 0.0 && d_right <= d_left {
            self.right.state
        } else if d_left < 0.0 {
            self.left.state
        } else {
            self.state2
        }
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }
}

/// One accepted time step.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub dt: f64,
    pub retries: u32,
    /// Net mass flown into the interior through all four edges during the
    /// step (already multiplied by `dt` and the face lengths).
    pub boundary_mass_influx: f64,
}

/// Provenance record of a finished run.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub nx: usize,
    pub ny: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_hi: f64,
    pub gamma: f64,
    pub v2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub steps: u64,
    pub retries: u64,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub boundary_influx: f64,
    /// |mass change - boundary influx| / initial mass.
    pub mass_drift_rel: f64,
    /// max |u_y - v_x| dx over the interior at the final time.
    pub irrotationality: f64,
    pub min_rho: f64,
}

impl RunRecord {
    /// Sidecar text header for field dumps.
    pub fn sidecar(&self, t: f64) -> String {
        format!(
            "nx {}\nny {}\nx_lo {:.16e}\nx_hi {:.16e}\ny_lo 0\ny_hi {:.16e}\nt {:.16e}\n\
             gamma {:.16e}\nv2 {:.16e}\ntheta1 {:.16e}\ntheta2 {:.16e}\n",
            self.nx, self.ny, self.x_lo, self.x_hi, self.y_hi, t, self.gamma, self.v2,
            self.theta1, self.theta2
        )
    }
}

struct FluxBuffers {
    /// x-face fluxes, `(nx+1) * ny` per component; face `i` sits between
    /// cells `i-1` and `i`.
    fx: [Vec<f64>; 3],
    /// y-face fluxes, `nx * (ny+1)` per component.
    fy: [Vec<f64>; 3],
}

/// Explicit finite-volume integrator owning the field and its scratch
/// buffers.
pub struct Simulation {
    pub grid: FvGrid,
    pub gas: GasModel,
    pub config: SimConfig,
    pub setup: RiemannSetup,
    background: Background,
    pub field: FvField,
    scratch: FvField,
    head: Vec<f64>,
    sound: Vec<f64>,
    flux: FluxBuffers,
    pub t: f64,
    pub steps: u64,
    pub retries: u64,
    mass_initial: f64,
    influx: KahanSum,
}

#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}

fn kahan_total(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::default();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

impl Simulation {
    /// Initialise from the Riemann data: every cell (ghosts included) takes
    /// the sector state of its centre at `t = 0`.
    pub fn new(setup: RiemannSetup, grid: FvGrid, config: SimConfig) -> Result<Self> {
        if !(config.cfl > 0.0 && config.cfl < 1.0) {
            return Err(Error::ParameterDomain(format!("cfl = {} outside (0, 1)", config.cfl)));
        }
        let background = Background::new(&setup)?;
        let mut field = FvField::new(grid.nx, grid.ny);
        for j in -(NG as isize)..(grid.ny + NG) as isize {
            for i in -(NG as isize)..(grid.nx + NG) as isize {
                let (rho, u, v) = background.state_at(grid.cell_x(i), grid.cell_y(j), 0.0);
                let c = field.idx(i, j);
                field.rho[c] = rho;
                field.u[c] = u;
                field.v[c] = v;
            }
        }
        let scratch = field.clone();
        let ncell = field.rho.len();
        let nfx = (grid.nx + 1) * grid.ny;
        let nfy = grid.nx * (grid.ny + 1);
        let mass_initial = interior_mass_of(&field, &grid);
        Ok(Self {
            grid,
            gas: setup.gas,
            config,
            setup,
            background,
            field,
            scratch,
            head: vec![0.0; ncell],
            sound: vec![0.0; ncell],
            flux: FluxBuffers {
                fx: [vec![0.0; nfx], vec![0.0; nfx], vec![0.0; nfx]],
                fy: [vec![0.0; nfy], vec![0.0; nfy], vec![0.0; nfy]],
            },
            t: 0.0,
            steps: 0,
            retries: 0,
            mass_initial,
            influx: KahanSum::default(),
        })
    }

    pub fn interior_mass(&self) -> f64 {
        interior_mass_of(&self.field, &self.grid)
    }

    fn fill_ghosts(&mut self) {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let t = self.t;

        // left/right edges (interior rows only; corner ghosts are unused by
        // the two-point stencil)
        for j in 0..ny {
            for g in 1..=NG as isize {
                for (i_ghost, i_near, policy) in [
                    (-g, 0, self.config.left),
                    (nx - 1 + g, nx - 1, self.config.right),
                ] {
                    let c = self.field.idx(i_ghost, j);
                    match policy {
                        EdgePolicy::SelfSimilar => {
                            let (rho, u, v) = self.background.state_at(
                                self.grid.cell_x(i_ghost),
                                self.grid.cell_y(j),
                                t,
                            );
                            self.field.rho[c] = rho;
                            self.field.u[c] = u;
                            self.field.v[c] = v;
                        }
                        EdgePolicy::ZeroGradient => {
                            let n = self.field.idx(i_near, j);
                            self.field.rho[c] = self.field.rho[n];
                            self.field.u[c] = self.field.u[n];
                            self.field.v[c] = self.field.v[n];
                        }
                        EdgePolicy::SlipWall => {
                            // vertical wall: mirror with u negated
                            let src = if i_near == 0 {
                                self.field.idx(-i_ghost - 1, j)
                            } else {
                                self.field.idx(2 * nx - 1 - i_ghost, j)
                            };
                            self.field.rho[c] = self.field.rho[src];
                            self.field.u[c] = -self.field.u[src];
                            self.field.v[c] = self.field.v[src];
                        }
                    }
                }
            }
        }

        // bottom/top edges
        for i in 0..nx {
            for g in 1..=NG as isize {
                for (j_ghost, j_near, policy, is_bottom) in [
                    (-g, 0, self.config.bottom, true),
                    (ny - 1 + g, ny - 1, self.config.top, false),
                ] {
                    let c = self.field.idx(i, j_ghost);
                    match policy {
                        EdgePolicy::SelfSimilar => {
                            let (rho, u, v) = self.background.state_at(
                                self.grid.cell_x(i),
                                self.grid.cell_y(j_ghost),
                                t,
                            );
                            self.field.rho[c] = rho;
                            self.field.u[c] = u;
                            self.field.v[c] = v;
                        }
                        EdgePolicy::ZeroGradient => {
                            let n = self.field.idx(i, j_near);
                            self.field.rho[c] = self.field.rho[n];
                            self.field.u[c] = self.field.u[n];
                            self.field.v[c] = self.field.v[n];
                        }
                        EdgePolicy::SlipWall => {
                            let src = if is_bottom {
                                self.field.idx(i, -j_ghost - 1)
                            } else {
                                self.field.idx(i, 2 * ny - 1 - j_ghost)
                            };
                            self.field.rho[c] = self.field.rho[src];
                            self.field.u[c] = self.field.u[src];
                            self.field.v[c] = -self.field.v[src];
                        }
                    }
                }
            }
        }
    }

    /// Bernoulli heads, sound speeds, and the global max signal speed.
    fn prepare_cell_data(&mut self) -> Result<f64> {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let mut smax = 0.0f64;
        for j in -1..ny + 1 {
            for i in -1..nx + 1 {
                let c = self.field.idx(i, j);
                let rho = self.field.rho[c];
                if !(rho > 0.0) {
                    return Err(Error::SimulationAbort(format!(
                        "nonpositive density {rho} at cell ({i}, {j})"
                    )));
                }
                let h = self.gas.enthalpy(rho)?;
                let (u, v) = (self.field.u[c], self.field.v[c]);
                self.head[c] = 0.5 * (u * u + v * v) + h;
                let cs = self.gas.sonic_speed_sq_from_enthalpy(h).max(0.0).sqrt();
                self.sound[c] = cs;
                smax = smax.max(u.abs() + cs).max(v.abs() + cs);
            }
        }
        Ok(smax)
    }

    fn compute_fluxes(&mut self) {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let f = &self.field;
        // x faces
        for j in 0..ny {
            for i in 0..=nx {
                let l = f.idx(i - 1, j);
                let r = f.idx(i, j);
                let s = (f.u[l].abs() + self.sound[l]).max(f.u[r].abs() + self.sound[r]);
                let k = (j * (nx + 1) + i) as usize;
                self.flux.fx[0][k] =
                    0.5 * (f.rho[l] * f.u[l] + f.rho[r] * f.u[r]) - 0.5 * s * (f.rho[r] - f.rho[l]);
                self.flux.fx[1][k] = 0.5 * (self.head[l] + self.head[r]) - 0.5 * s * (f.u[r] - f.u[l]);
                self.flux.fx[2][k] = -0.5 * s * (f.v[r] - f.v[l]);
            }
        }
        // y faces
        for j in 0..=ny {
            for i in 0..nx {
                let b = f.idx(i, j - 1);
                let t = f.idx(i, j);
                let s = (f.v[b].abs() + self.sound[b]).max(f.v[t].abs() + self.sound[t]);
                let k = (j * nx + i) as usize;
                self.flux.fy[0][k] =
                    0.5 * (f.rho[b] * f.v[b] + f.rho[t] * f.v[t]) - 0.5 * s * (f.rho[t] - f.rho[b]);
                self.flux.fy[1][k] = -0.5 * s * (f.u[t] - f.u[b]);
                self.flux.fy[2][k] = 0.5 * (self.head[b] + self.head[t]) - 0.5 * s * (f.v[t] - f.v[b]);
            }
        }
    }

    /// Apply one explicit update with the prepared fluxes; returns the
    /// interior minimum density of the candidate field.
    fn apply_update(&mut self, dt: f64) -> f64 {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let lx = dt / self.grid.dx;
        let ly = dt / self.grid.dy;
        let mut min_rho = f64::INFINITY;
        for j in 0..ny {
            for i in 0..nx {
                let c = self.field.idx(i, j);
                let kxl = (j * (nx + 1) + i) as usize;
                let kxr = kxl + 1;
                let kyb = (j * nx + i) as usize;
                let kyt = ((j + 1) * nx + i) as usize;
                let rho = self.field.rho[c]
                    - lx * (self.flux.fx[0][kxr] - self.flux.fx[0][kxl])
                    - ly * (self.flux.fy[0][kyt] - self.flux.fy[0][kyb]);
                let u = self.field.u[c]
                    - lx * (self.flux.fx[1][kxr] - self.flux.fx[1][kxl])
                    - ly * (self.flux.fy[1][kyt] - self.flux.fy[1][kyb]);
                let v = self.field.v[c]
                    - lx * (self.flux.fx[2][kxr] - self.flux.fx[2][kxl])
                    - ly * (self.flux.fy[2][kyt] - self.flux.fy[2][kyb]);
                self.scratch.rho[c] = rho;
                self.scratch.u[c] = u;
                self.scratch.v[c] = v;
                min_rho = min_rho.min(rho);
            }
        }
        min_rho
    }

    /// Net boundary mass influx for time step `dt` with the prepared fluxes.
    fn boundary_mass_influx(&self, dt: f64) -> f64 {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let mut acc = KahanSum::default();
        for j in 0..ny {
            acc.add(self.flux.fx[0][(j * (nx + 1)) as usize] * dt * self.grid.dy);
            acc.add(-self.flux.fx[0][(j * (nx + 1) + nx) as usize] * dt * self.grid.dy);
        }
        for i in 0..nx {
            acc.add(self.flux.fy[0][i as usize] * dt * self.grid.dx);
            acc.add(-self.flux.fy[0][(ny * nx + i) as usize] * dt * self.grid.dx);
        }
        acc.total()
    }

    /// Advance one accepted step (halving `dt` on positivity failures).
    pub fn step(&mut self) -> Result<StepInfo> {
        self.fill_ghosts();
        let smax = self.prepare_cell_data()?;
        if !(smax > 0.0) {
            return Err(Error::SimulationAbort("vanishing signal speed".into()));
        }
        self.compute_fluxes();

        let remaining = self.config.t_final - self.t;
        let mut dt = (self.config.cfl * self.grid.dx.min(self.grid.dy) / smax).min(remaining);
        let mut retries = 0;
        loop {
            let min_rho = self.apply_update(dt);
            if min_rho > 0.0 {
                break;
            }
            retries += 1;
            if retries > self.config.max_dt_retries {
                return Err(Error::SimulationAbort(format!(
                    "density positivity lost (min rho = {min_rho}) after {retries} dt halvings"
                )));
            }
            dt *= 0.5;
        }

        std::mem::swap(&mut self.field.rho, &mut self.scratch.rho);
        std::mem::swap(&mut self.field.u, &mut self.scratch.u);
        std::mem::swap(&mut self.field.v, &mut self.scratch.v);
        let influx = self.boundary_mass_influx(dt);
        self.influx.add(influx);
        self.t += dt;
        self.steps += 1;
        self.retries += retries as u64;
        Ok(StepInfo { dt, retries, boundary_mass_influx: influx })
    }

    /// Run until `t_final`.
    pub fn run(&mut self) -> Result<RunRecord> {
        let t_end = self.config.t_final;
        while self.t < t_end * (1.0 - 1e-14) {
            self.step()?;
        }
        Ok(self.record())
    }

    /// Provenance record at the current time.
    pub fn record(&self) -> RunRecord {
        let mass_final = self.interior_mass();
        let drift =
            (mass_final - self.mass_initial - self.influx.total()).abs() / self.mass_initial;
        RunRecord {
            nx: self.grid.nx,
            ny: self.grid.ny,
            x_lo: self.grid.x_lo,
            x_hi: self.grid.x_hi,
            y_hi: self.grid.y_hi,
            gamma: self.gas.gamma(),
            v2: self.setup.v2,
            theta1: self.setup.theta1,
            theta2: self.setup.theta2,
            cfl: self.config.cfl,
            t_final: self.config.t_final,
            steps: self.steps,
            retries: self.retries,
            mass_initial: self.mass_initial,
            mass_final,
            boundary_influx: self.influx.total(),
            mass_drift_rel: drift,
            irrotationality: self.irrotationality(),
            min_rho: self.field.min_rho(),
        }
    }

    /// `max |u_y - v_x| dx` over interior cells (one-ring inset).
    pub fn irrotationality(&self) -> f64 {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let f = &self.field;
        let mut worst = 0.0f64;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let uy = (f.u[f.idx(i, j + 1)] - f.u[f.idx(i, j - 1)]) / (2.0 * self.grid.dy);
                let vx = (f.v[f.idx(i + 1, j)] - f.v[f.idx(i - 1, j)]) / (2.0 * self.grid.dx);
                worst = worst.max((uy - vx).abs());
            }
        }
        worst * self.grid.dx
    }
}

fn interior_mass_of(field: &FvField, grid: &FvGrid) -> f64 {
    let cell = grid.dx * grid.dy;
    kahan_total(
        (0..grid.ny as isize)
            .flat_map(|j| (0..grid.nx as isize).map(move |i| (i, j)))
            .map(|(i, j)| field.rho[field.idx(i, j)] * cell),
    )
}

/// Exact sector areas of the initial data inside the grid rectangle, for
/// the initial-mass cross-check: area below `y = x tan(theta)` for `x > 0`
/// within `[0, x_hi] x [0, y_hi]`, and its mirror.
pub fn initial_mass_analytic(setup: &RiemannSetup, grid: &FvGrid) -> f64 {
    let wedge = |theta: f64, width: f64| -> f64 {
        if theta == 0.0 {
            return 0.0;
        }
        let t = theta.tan();
        let x_roof = grid.y_hi / t;
        if x_roof >= width {
            0.5 * width * width * t
        } else {
            0.5 * x_roof * grid.y_hi + (width - x_roof) * grid.y_hi
        }
    };
    let total = (grid.x_hi - grid.x_lo) * grid.y_hi;
    let a1 = wedge(setup.theta1, grid.x_hi);
    let a3 = wedge(setup.theta2, -grid.x_lo);
    setup.state1.rho * a1 + setup.state3.rho * a3 + 1.0 * (total - a1 - a3)
}
