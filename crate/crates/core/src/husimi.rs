//! Phase-plane probability amplitudes and the Husimi Q function.
//!
//! Conventions, for real β and r:
//!
//! ```text
//! ⟨m|α⟩     = e^{-|α|²/2} |α|^m / √m!          · e^{+i m θ}
//! ⟨α|n,β⟩   = e^{-|α-β|²/2} |α-β|^n / √n!      · e^{-i (β y + n θ_β)}
//! ⟨α|β,r⟩   = √sech r · e^{Re E}                · e^{+i (-y β sech r + x y tanh r)}
//! ```
//!
//! with `α = x + iy`, `θ` the angle of `(x, y)`, `θ_β` the angle of
//! `(x − β, y)` and `E = −½(|α|²+β²) + α*β sech r − ½((α*)² − β²) tanh r`.
//! The signs are the ones for which the overcompleteness integral
//! `⟨m|ψ⟩ = (1/π) ∫ d²α ⟨m|α⟩⟨α|ψ⟩` reproduces the exact amplitudes; see
//! [`overlap_amplitudes_oracle`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::exec::Execution;
use crate::numerics::{log_factorial, normalize_angle};
use crate::states::{DisplacedNumberState, PhotonState, TwoPhotonCoherentState};

/// `α = x + iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Modulus and phase of a phase-plane amplitude; phase in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarAmplitude {
    pub modulus: f64,
    pub phase: f64,
}

impl PolarAmplitude {
    fn from_log(log_modulus: f64, phase: f64) -> Self {
        Self {
            modulus: log_modulus.exp(),
            phase: normalize_angle(phase),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }
}

/// `(modulus, phase)` pair with the log modulus kept for the oracle sums.
#[derive(Debug, Clone, Copy)]
struct LogPolar {
    log_modulus: f64,
    phase: f64,
}

fn fock_log_polar(m: u32, p: PhasePoint) -> LogPolar {
    let rho2 = p.x * p.x + p.y * p.y;
    if rho2 == 0.0 {
        return if m == 0 {
            LogPolar {
                log_modulus: 0.0,
                phase: 0.0,
            }
        } else {
            LogPolar {
                log_modulus: f64::NEG_INFINITY,
                phase: 0.0,
            }
        };
    }
    LogPolar {
        log_modulus: -0.5 * rho2 + 0.5 * f64::from(m) * rho2.ln() - 0.5 * log_factorial(u64::from(m)),
        phase: f64::from(m) * p.y.atan2(p.x),
    }
}

fn displaced_log_polar(st: &DisplacedNumberState, p: PhasePoint) -> LogPolar {
    let dx = p.x - st.beta;
    let rho2 = dx * dx + p.y * p.y;
    let displacement_phase = -st.beta * p.y;
    if rho2 == 0.0 {
        return if st.n == 0 {
            LogPolar {
                log_modulus: 0.0,
                phase: displacement_phase,
            }
        } else {
            LogPolar {
                log_modulus: f64::NEG_INFINITY,
                phase: 0.0,
            }
        };
    }
    let n = f64::from(st.n);
    LogPolar {
        log_modulus: -0.5 * rho2 + 0.5 * n * rho2.ln() - 0.5 * log_factorial(u64::from(st.n)),
        phase: displacement_phase - n * p.y.atan2(dx),
    }
}

fn tpcs_log_polar(st: &TwoPhotonCoherentState, p: PhasePoint) -> LogPolar {
    let (x, y, beta) = (p.x, p.y, st.beta);
    let sech = 1.0 / st.r.cosh();
    let tanh = st.r.tanh();
    LogPolar {
        log_modulus: 0.5 * sech.ln() - 0.5 * (x * x + y * y + beta * beta) + x * beta * sech
            - 0.5 * tanh * (x * x - y * y - beta * beta),
        phase: -y * beta * sech + x * y * tanh,
    }
}

fn state_log_polar(state: &PhotonState, p: PhasePoint) -> LogPolar {
    match state {
        PhotonState::Displaced(st) => displaced_log_polar(st, p),
        PhotonState::TwoPhoton(st) => tpcs_log_polar(st, p),
    }
}

/// `⟨m|α⟩`. Phase `m·θ`; zero phase wherever the modulus vanishes.
pub fn fock_projection(m: u32, p: PhasePoint) -> PolarAmplitude {
    let lp = fock_log_polar(m, p);
    PolarAmplitude::from_log(lp.log_modulus, lp.phase)
}

/// `⟨α|n,β⟩`. The returned phase is `−(βy + n θ_β)`.
pub fn displaced_projection(st: &DisplacedNumberState, p: PhasePoint) -> PolarAmplitude {
    let lp = displaced_log_polar(st, p);
    PolarAmplitude::from_log(lp.log_modulus, lp.phase)
}

/// `⟨α|β,r⟩`. The returned phase is `−yβ sech r + xy tanh r`.
pub fn tpcs_projection(st: &TwoPhotonCoherentState, p: PhasePoint) -> PolarAmplitude {
    let lp = tpcs_log_polar(st, p);
    PolarAmplitude::from_log(lp.log_modulus, lp.phase)
}

/// `⟨α|ψ⟩` for either state family.
pub fn state_projection(state: &PhotonState, p: PhasePoint) -> PolarAmplitude {
    let lp = state_log_polar(state, p);
    PolarAmplitude::from_log(lp.log_modulus, lp.phase)
}

/// `Q(α) = |⟨α|ψ⟩|² / π`.
pub fn q_value(projection_modulus: f64) -> f64 {
    projection_modulus * projection_modulus / PI
}

/// Rectangular window sampled at cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self, DomainError> {
        let g = Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(DomainError::InvalidParameter(format!(
                "grid window must satisfy x_min < x_max and y_min < y_max, got {}:{}:{}:{}",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(DomainError::InvalidParameter(format!(
                "grid resolution must be at least 2x2, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    /// Window `[cx ± half_x] × [cy ± half_y]` with cells no wider than `step`.
    pub fn centered(cx: f64, cy: f64, half_x: f64, half_y: f64, step: f64) -> Self {
        let nx = ((2.0 * half_x / step).ceil() as usize).max(2);
        let ny = ((2.0 * half_y / step).ceil() as usize).max(2);
        // stretch the window so the step is exact
        let hx = 0.5 * nx as f64 * step;
        let hy = 0.5 * ny as f64 * step;
        Self {
            x_min: cx - hx,
            x_max: cx + hx,
            y_min: cy - hy,
            y_max: cy + hy,
            nx,
            ny,
        }
    }

    /// Square window about the origin for the overlap integral of photon
    /// numbers up to `m_max`: half-width `√m_max + |β| + extent + 6`, where the
    /// extent is `√n` for displaced states and `e^r` for squeezed ones.
    pub fn for_oracle(m_max: u32, state: &PhotonState, step: f64) -> Self {
        let extent = match state {
            PhotonState::Displaced(st) => st.beta.abs() + f64::from(st.n).sqrt(),
            PhotonState::TwoPhoton(st) => st.beta.abs() + st.r.exp(),
        };
        let half = f64::from(m_max).sqrt() + extent + 6.0;
        Self::centered(0.0, 0.0, half, half, step)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }
}

/// Which surface a Q grid tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QSurface {
    /// `Q` of the Fock state `|m⟩`.
    Fock {
        m: u32,
    },
    Displaced(DisplacedNumberState),
    TwoPhoton(TwoPhotonCoherentState),
    /// `|⟨m|α⟩⟨α|n,β⟩|`: the product of moduli, not a Q function.
    Product {
        m: u32,
        state: DisplacedNumberState,
    },
}

impl QSurface {
    pub fn value(&self, p: PhasePoint) -> f64 {
        match self {
            QSurface::Fock { m } => q_value(fock_projection(*m, p).modulus),
            QSurface::Displaced(st) => q_value(displaced_projection(st, p).modulus),
            QSurface::TwoPhoton(st) => q_value(tpcs_projection(st, p).modulus),
            QSurface::Product { m, state } => {
                (fock_log_polar(*m, p).log_modulus + displaced_log_polar(state, p).log_modulus).exp()
            }
        }
    }

    /// A window holding all but a ~1e-12 fraction of the surface.
    pub fn default_grid(&self, step: f64) -> GridSpec {
        match self {
            QSurface::Fock { m } => {
                let h = f64::from(*m).sqrt() + 7.0;
                GridSpec::centered(0.0, 0.0, h, h, step)
            }
            QSurface::Displaced(st) => {
                let h = f64::from(st.n).sqrt() + 7.0;
                GridSpec::centered(st.beta, 0.0, h, h, step)
            }
            QSurface::TwoPhoton(st) => {
                // Q ∝ exp(-(x-c)²(1+tanh r) - y²(1-tanh r))
                let t = st.r.tanh();
                let hx = 7.0 / (1.0 + t).sqrt();
                let hy = 7.0 / (1.0 - t).sqrt();
                GridSpec::centered(st.displacement(), 0.0, hx, hy, step)
            }
            QSurface::Product { m, state } => {
                let rm = f64::from(*m).sqrt();
                let rn = f64::from(state.n).sqrt();
                let lo = (-rm).min(state.beta - rn) - 4.0;
                let hi = rm.max(state.beta + rn) + 4.0;
                let hy = rm.max(rn) + 4.0;
                GridSpec::centered(0.5 * (lo + hi), 0.0, 0.5 * (hi - lo), hy, step)
            }
        }
    }
}

/// Default sampling step for grids and the quadrature oracle.
pub const DEFAULT_STEP: f64 = 0.05;

/// A surface tabulated row-major (y outer, x inner) at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl QGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    /// `(x, y, q)` in row-major order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let g = self.grid;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &q)| (g.x(k % g.nx), g.y(k / g.nx), q))
    }

    /// Midpoint-rule integral of the tabulated values.
    pub fn integral(&self) -> f64 {
        let row_sums: Vec<f64> = self
            .values
            .chunks(self.grid.nx)
            .map(|row| row.iter().sum::<f64>())
            .collect();
        row_sums.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// Cell with the largest value.
    pub fn argmax(&self) -> (f64, f64, f64) {
        self.rows().fold(
            (0.0, 0.0, f64::NEG_INFINITY),
            |best, r| if r.2 > best.2 { r } else { best },
        )
    }

    /// Interior cells strictly greater than their eight neighbours, ignoring
    /// cells below `min_fraction` of the global maximum.
    pub fn local_maxima(&self, min_fraction: f64) -> Vec<(f64, f64, f64)> {
        let g = self.grid;
        let floor = self.argmax().2 * min_fraction;
        let mut out = Vec::new();
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                let v = self.value(i, j);
                if v < floor {
                    continue;
                }
                let is_max = (-1i64..=1)
                    .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
                    .filter(|&(di, dj)| di != 0 || dj != 0)
                    .all(|(di, dj)| v > self.value((i as i64 + di) as usize, (j as i64 + dj) as usize));
                if is_max {
                    out.push((g.x(i), g.y(j), v));
                }
            }
        }
        out
    }
}

pub fn q_grid(surface: &QSurface, grid: &GridSpec) -> QGrid {
    q_grid_with(surface, grid, Execution::default())
}

/// Tabulates `surface` on `grid`, one row per work item.
pub fn q_grid_with(surface: &QSurface, grid: &GridSpec, exec: Execution) -> QGrid {
    let g = *grid;
    let rows = exec.map_indices(g.ny, |j| {
        let y = g.y(j);
        (0..g.nx)
            .map(|i| surface.value(PhasePoint::new(g.x(i), y)))
            .collect::<Vec<f64>>()
    });
    QGrid {
        grid: g,
        values: rows.into_iter().flatten().collect(),
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.add(other.comp);
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone)]
struct RowAccumulator {
    re: Vec<Compensated>,
    im: Vec<Compensated>,
    max_modulus: Vec<f64>,
    boundary_max: Vec<f64>,
}

impl RowAccumulator {
    fn new(len: usize) -> Self {
        Self {
            re: vec![Compensated::default(); len],
            im: vec![Compensated::default(); len],
            max_modulus: vec![0.0; len],
            boundary_max: vec![0.0; len],
        }
    }
}

/// Midpoint-rule value of `(1/π) ∫ d²α ⟨m|α⟩⟨α|ψ⟩` for `m = 0..=m_max`.
///
/// Fails with [`DomainError::WindowTooSmall`] when, for some `m`, the
/// integrand modulus on the window boundary exceeds 1e-10 of its maximum.
pub fn overlap_amplitudes_oracle(
    m_max: u32,
    state: &PhotonState,
    grid: &GridSpec,
) -> Result<Vec<Complex64>, DomainError> {
    overlap_amplitudes_oracle_with(m_max, state, grid, Execution::default())
}

pub fn overlap_amplitudes_oracle_with(
    m_max: u32,
    state: &PhotonState,
    grid: &GridSpec,
    exec: Execution,
) -> Result<Vec<Complex64>, DomainError> {
    grid.validate()?;
    let g = *grid;
    let len = m_max as usize + 1;
    let half_log_fact: Vec<f64> = (0..=m_max).map(|m| 0.5 * log_factorial(u64::from(m))).collect();

    let rows = exec.map_indices(g.ny, |j| {
        let mut acc = RowAccumulator::new(len);
        let y = g.y(j);
        for i in 0..g.nx {
            let p = PhasePoint::new(g.x(i), y);
            let psi = state_log_polar(state, p);
            if psi.log_modulus == f64::NEG_INFINITY {
                continue;
            }
            let rho2 = p.x * p.x + p.y * p.y;
            let boundary = g.is_boundary(i, j);
            let theta = if rho2 > 0.0 { p.y.atan2(p.x) } else { 0.0 };
            let half_log_rho2 = 0.5 * rho2.ln();
            for (m, &hlf) in half_log_fact.iter().enumerate() {
                let fock_log = if m == 0 {
                    -0.5 * rho2
                } else if rho2 == 0.0 {
                    continue;
                } else {
                    -0.5 * rho2 + m as f64 * half_log_rho2 - hlf
                };
                let modulus = (fock_log + psi.log_modulus).exp();
                let (s, c) = (m as f64 * theta + psi.phase).sin_cos();
                acc.re[m].add(modulus * c);
                acc.im[m].add(modulus * s);
                if modulus > acc.max_modulus[m] {
                    acc.max_modulus[m] = modulus;
                }
                if boundary && modulus > acc.boundary_max[m] {
                    acc.boundary_max[m] = modulus;
                }
            }
        }
        acc
    });

    let mut total = RowAccumulator::new(len);
    for row in &rows {
        for m in 0..len {
            total.re[m].merge(&row.re[m]);
            total.im[m].merge(&row.im[m]);
            total.max_modulus[m] = total.max_modulus[m].max(row.max_modulus[m]);
            total.boundary_max[m] = total.boundary_max[m].max(row.boundary_max[m]);
        }
    }

    for m in 0..len {
        if total.max_modulus[m] > 0.0 {
            let ratio = total.boundary_max[m] / total.max_modulus[m];
            if ratio > 1e-10 {
                return Err(DomainError::WindowTooSmall { m: m as u32, ratio });
            }
        }
    }

    let weight = g.cell_area() / PI;
    Ok((0..len)
        .map(|m| Complex64::new(total.re[m].value() * weight, total.im[m].value() * weight))
        .collect())
}

/// Single-`m` form of [`overlap_amplitudes_oracle`].
pub fn overlap_amplitude_oracle(m: u32, state: &PhotonState, grid: &GridSpec) -> Result<Complex64, DomainError> {
    let all = overlap_amplitudes_oracle(m, state, grid)?;
    Ok(all[m as usize])
}
