//! Photon-number distributions from overlap areas and interference phases.
//!
//! Each overlap region contributes `√A e^{±iψ}` to the amplitude; the two
//! mirror-image regions add up to `P = c·A·cos²ψ`, where the constant `c`
//! depends on the [`PrefactorMode`]. Approximate distributions are returned
//! unnormalized.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::exec::Execution;
use crate::geometry::{
    band_overlap_area, displaced_phase, tpcs_intersection, tpcs_overlap_area, tpcs_phase, tpcs_phase_high_squeeze,
    AbscissaRule,
};
use crate::states::{pmf_table_with, DisplacedNumberState, PhotonState, Pmf, PmfMethod, TwoPhotonCoherentState};

/// Squeezing below which the vertical-line picture is not trusted.
pub const MIN_SQUEEZE: f64 = 2.0;

/// Normalization of `A·cos²ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PrefactorMode {
    /// `4A/π²`: squaring `(√A/π)(e^{iψ} + e^{-iψ})`.
    #[default]
    #[serde(rename = "amplitude")]
    TwoBranchAmplitude,
    /// `A/π`.
    #[serde(rename = "paper-final")]
    AreaOverPi,
}

impl PrefactorMode {
    pub fn factor(self) -> f64 {
        match self {
            PrefactorMode::TwoBranchAmplitude => 4.0 / (PI * PI),
            PrefactorMode::AreaOverPi => 1.0 / PI,
        }
    }
}

/// `cos²ψ` as `(1 + cos 2ψ)/2`, which is exactly zero at odd multiples of π/2.
pub fn interference_weight(psi: f64) -> f64 {
    (0.5 * (1.0 + (2.0 * psi).cos())).max(0.0)
}

/// `c·A_mn·cos²ψ`; zero when the bands miss or the circles of radii `√m`,
/// `√n` do not cross (no phase is defined there).
pub fn approx_displaced_pmf(m: u32, n: u32, beta: f64, mode: PrefactorMode) -> f64 {
    let area = band_overlap_area(m, n, beta);
    if area == 0.0 {
        return 0.0;
    }
    match displaced_phase(m, n, beta) {
        Ok(psi) => mode.factor() * area * interference_weight(psi),
        Err(_) => 0.0,
    }
}

fn warn_weak_squeeze(st: &TwoPhotonCoherentState) {
    if st.r < MIN_SQUEEZE {
        warn!(
            "r = {} below {MIN_SQUEEZE}: the ellipse is not close to a vertical line",
            st.r
        );
    }
}

fn tpcs_approx_with<F>(m: u32, st: &TwoPhotonCoherentState, mode: PrefactorMode, phase: F) -> f64
where
    F: Fn() -> Result<f64, DomainError>,
{
    let area = tpcs_overlap_area(m, st);
    if area == 0.0 {
        return 0.0;
    }
    match phase() {
        Ok(psi) => mode.factor() * area * interference_weight(psi),
        Err(_) => 0.0,
    }
}

/// `c·A_m·cos²ψ` with the full squeezed phase.
pub fn approx_tpcs_pmf(m: u32, st: &TwoPhotonCoherentState, mode: PrefactorMode, rule: AbscissaRule) -> f64 {
    tpcs_approx_with(m, st, mode, || tpcs_phase(m, st, rule))
}

/// `c·A_m·cos²(mπ/2 − 2X₂Y₂)`.
pub fn approx_tpcs_pmf_high_squeeze(
    m: u32,
    st: &TwoPhotonCoherentState,
    mode: PrefactorMode,
    rule: AbscissaRule,
) -> f64 {
    tpcs_approx_with(m, st, mode, || tpcs_phase_high_squeeze(m, st, rule))
}

/// `(A_m/2π)[1 + (−1)^m cos(4X₂Y₂)]`.
pub fn tpcs_parity_limit_pmf(m: u32, st: &TwoPhotonCoherentState, rule: AbscissaRule) -> f64 {
    let area = tpcs_overlap_area(m, st);
    if area == 0.0 {
        return 0.0;
    }
    let Some(c) = tpcs_intersection(m, st, rule) else {
        return 0.0;
    };
    let parity = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    (area / (2.0 * PI) * (1.0 + parity * (4.0 * c.x2 * c.y2).cos())).max(0.0)
}

pub fn approx_displaced_table(st: &DisplacedNumberState, truncation: u32, mode: PrefactorMode, exec: Execution) -> Pmf {
    let values = exec.map_indices(truncation as usize + 1, |m| {
        approx_displaced_pmf(m as u32, st.n, st.beta, mode)
    });
    Pmf::new(values, PmfMethod::Approx)
}

pub fn approx_tpcs_table(
    st: &TwoPhotonCoherentState,
    truncation: u32,
    mode: PrefactorMode,
    rule: AbscissaRule,
    exec: Execution,
) -> Pmf {
    warn_weak_squeeze(st);
    let values = exec.map_indices(truncation as usize + 1, |m| approx_tpcs_pmf(m as u32, st, mode, rule));
    Pmf::new(values, PmfMethod::Approx)
}

pub fn parity_limit_table(st: &TwoPhotonCoherentState, truncation: u32, rule: AbscissaRule, exec: Execution) -> Pmf {
    warn_weak_squeeze(st);
    let values = exec.map_indices(truncation as usize + 1, |m| tpcs_parity_limit_pmf(m as u32, st, rule));
    Pmf::new(values, PmfMethod::ParityLimit)
}

fn interior_extrema(values: &[f64], lower: bool) -> Vec<usize> {
    let beats = |a: f64, b: f64| if lower { a < b } else { a > b };
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        if !beats(values[i], values[i - 1]) {
            continue;
        }
        // skip a plateau; the extremum is reported at its left end
        if let Some(&next) = values[i + 1..].iter().find(|&&v| v != values[i]) {
            if beats(values[i], next) {
                out.push(i);
            }
        }
    }
    out
}

/// Interior strict local minima; a flat run counts once, at its leftmost index.
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    interior_extrema(values, true)
}

/// Interior strict local maxima, with the same plateau rule as [`local_minima`].
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    interior_extrema(values, false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub m: u32,
    pub p_exact: f64,
    pub p_approx: f64,
    pub area: Option<f64>,
    pub phase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub max_abs_diff: f64,
    pub exact_minima: Vec<usize>,
    pub approx_minima: Vec<usize>,
}

/// Threshold below which values are ignored by `max_abs_diff`.
const NEGLIGIBLE: f64 = 1e-15;

pub fn compare(exact: &Pmf, approx: &Pmf) -> Result<ComparisonReport, DomainError> {
    let (e, a) = (exact.values(), approx.values());
    if e.len() != a.len() {
        return Err(DomainError::LengthMismatch {
            left: e.len(),
            right: a.len(),
        });
    }
    let max_abs_diff = e
        .iter()
        .zip(a)
        .filter(|(x, y)| **x > NEGLIGIBLE && **y > NEGLIGIBLE)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let rows = e
        .iter()
        .zip(a)
        .enumerate()
        .map(|(m, (&p_exact, &p_approx))| ComparisonRow {
            m: m as u32,
            p_exact,
            p_approx,
            area: None,
            phase: None,
        })
        .collect();
    Ok(ComparisonReport {
        rows,
        max_abs_diff,
        exact_minima: local_minima(e),
        approx_minima: local_minima(a),
    })
}

/// Exact against approximate for `|n,β⟩`, with areas and phases attached.
pub fn compare_displaced(
    st: &DisplacedNumberState,
    truncation: u32,
    mode: PrefactorMode,
    exec: Execution,
) -> ComparisonReport {
    let exact = pmf_table_with(&PhotonState::from(*st), truncation, exec);
    let approx = approx_displaced_table(st, truncation, mode, exec);
    let mut report = compare(&exact, &approx).expect("tables share the truncation");
    for row in &mut report.rows {
        row.area = Some(band_overlap_area(row.m, st.n, st.beta));
        row.phase = displaced_phase(row.m, st.n, st.beta).ok();
    }
    report
}

/// Exact against approximate for `|β,r⟩`, with areas and phases attached.
pub fn compare_tpcs(
    st: &TwoPhotonCoherentState,
    truncation: u32,
    mode: PrefactorMode,
    rule: AbscissaRule,
    exec: Execution,
) -> ComparisonReport {
    let exact = pmf_table_with(&PhotonState::from(*st), truncation, exec);
    let approx = approx_tpcs_table(st, truncation, mode, rule, exec);
    let mut report = compare(&exact, &approx).expect("tables share the truncation");
    for row in &mut report.rows {
        row.area = Some(tpcs_overlap_area(row.m, st));
        row.phase = tpcs_phase(row.m, st, rule).ok();
    }
    report
}
