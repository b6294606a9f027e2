//! Exact photon-number amplitudes and distributions.
//!
//! Displaced number states `|n,β⟩ = D(β)|n⟩` use the associated-Laguerre
//! closed form of `⟨m|D(β)|n⟩`. The generating-function construction (an
//! `n`-th derivative in an auxiliary coherent amplitude) is kept as
//! [`displaced_amplitude_via_derivative`] and used only to validate it.
//!
//! Two-photon coherent states `|β,r⟩ = S(r)|β⟩` use the Hermite formula,
//! switching to the coherent-state Poisson law for vanishing squeezing.

use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::exec::Execution;
use crate::numerics::{hermite, hermite_sequence, laguerre_assoc, log_factorial, DoubleDouble, LogScaled};

/// Below this squeeze parameter the TPCS formulas switch to the `r = 0` limit.
pub const SMALL_SQUEEZE: f64 = 1e-8;

/// `D(β)|n⟩` for real β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacedNumberState {
    pub n: u32,
    pub beta: f64,
}

impl DisplacedNumberState {
    pub fn new(n: u32, beta: f64) -> Result<Self, DomainError> {
        if !beta.is_finite() {
            return Err(DomainError::InvalidParameter(format!(
                "beta must be finite, got {beta}"
            )));
        }
        Ok(Self { n, beta })
    }

    /// Truncation whose neglected tail is far below 1e-10:
    /// `⌈(√n + |β|)² + 12 (√n + |β|)⌉`.
    pub fn default_truncation(&self) -> u32 {
        let s = f64::from(self.n).sqrt() + self.beta.abs();
        (s * s + 12.0 * s).ceil().max(f64::from(self.n) + 12.0) as u32
    }

    /// `⟨N⟩ = n + β²`.
    pub fn mean_photon_number(&self) -> f64 {
        f64::from(self.n) + self.beta * self.beta
    }
}

/// `S(r)|β⟩` with real β and squeeze parameter `r ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonCoherentState {
    pub beta: f64,
    pub r: f64,
}

impl TwoPhotonCoherentState {
    pub fn new(beta: f64, r: f64) -> Result<Self, DomainError> {
        if !beta.is_finite() {
            return Err(DomainError::InvalidParameter(format!(
                "beta must be finite, got {beta}"
            )));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(DomainError::InvalidParameter(format!(
                "squeeze parameter must be finite and >= 0, got {r}"
            )));
        }
        Ok(Self { beta, r })
    }

    /// Displacement of the equivalent `D(γ) S(r)|0⟩` form, `γ = β e^{-r}`.
    pub fn displacement(&self) -> f64 {
        self.beta * (-self.r).exp()
    }

    /// `⟨N⟩ = sinh² r + β² e^{-2r}`.
    pub fn mean_photon_number(&self) -> f64 {
        let g = self.displacement();
        self.r.sinh().powi(2) + g * g
    }

    /// Truncation whose neglected tail is below ~1e-10.
    ///
    /// The squeezed-vacuum tail decays like `tanh(r)^N`, so a multiple of the
    /// mean alone is not enough at large `r`; the bound
    /// `tanh(r)^N cosh³ r < 1e-13` covers it.
    pub fn default_truncation(&self) -> u32 {
        let by_mean = 8.0 * (self.mean_photon_number() + 10.0);
        let t = self.r.tanh();
        let by_tail = if self.r < SMALL_SQUEEZE || t >= 1.0 {
            0.0
        } else {
            (1e-13_f64.ln() - 3.0 * self.r.cosh().ln()) / t.ln()
        };
        let g = self.displacement().abs();
        let coherent = g * g + 12.0 * g + 12.0;
        by_mean.max(by_tail).max(coherent).ceil() as u32
    }
}

/// Either of the two state families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhotonState {
    Displaced(DisplacedNumberState),
    TwoPhoton(TwoPhotonCoherentState),
}

impl PhotonState {
    /// Real amplitude `⟨m|ψ⟩`.
    pub fn amplitude(&self, m: u32) -> f64 {
        match self {
            PhotonState::Displaced(st) => displaced_amplitude(m, st),
            PhotonState::TwoPhoton(st) => tpcs_amplitude(m, st),
        }
    }

    pub fn probability(&self, m: u32) -> f64 {
        match self {
            PhotonState::Displaced(st) => displaced_pmf(m, st),
            PhotonState::TwoPhoton(st) => tpcs_pmf(m, st),
        }
    }

    pub fn default_truncation(&self) -> u32 {
        match self {
            PhotonState::Displaced(st) => st.default_truncation(),
            PhotonState::TwoPhoton(st) => st.default_truncation(),
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        match self {
            PhotonState::Displaced(st) => st.mean_photon_number(),
            PhotonState::TwoPhoton(st) => st.mean_photon_number(),
        }
    }
}

impl From<DisplacedNumberState> for PhotonState {
    fn from(st: DisplacedNumberState) -> Self {
        PhotonState::Displaced(st)
    }
}

impl From<TwoPhotonCoherentState> for PhotonState {
    fn from(st: TwoPhotonCoherentState) -> Self {
        PhotonState::TwoPhoton(st)
    }
}

/// How a [`Pmf`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PmfMethod {
    Exact,
    Approx,
    Oracle,
    ParityLimit,
}

/// A photon-number distribution truncated at `0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    values: Vec<f64>,
    method: PmfMethod,
}

impl Pmf {
    /// # Panics
    /// If `values` is empty.
    pub fn new(values: Vec<f64>, method: PmfMethod) -> Self {
        assert!(!values.is_empty(), "a Pmf covers at least photon number 0");
        Self { values, method }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> PmfMethod {
        self.method
    }

    /// Largest photon number covered.
    pub fn truncation(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn get(&self, m: u32) -> Option<f64> {
        self.values.get(m as usize).copied()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().enumerate().map(|(m, p)| m as f64 * p).sum()
    }

    /// Variance about [`Pmf::mean`], not renormalized.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.values
            .iter()
            .enumerate()
            .map(|(m, p)| (m as f64 - mean).powi(2) * p)
            .sum()
    }
}

/// `⟨m|n,β⟩` in sign/log form.
///
/// For `m ≥ n`: `√(n!/m!) β^{m-n} e^{-β²/2} L_n^{(m-n)}(β²)`; for `m < n`
/// the roles swap and β → −β, the sign fixed by the derivative construction.
pub fn displaced_amplitude_log(m: u32, st: &DisplacedNumberState) -> LogScaled {
    let beta = st.beta;
    if beta == 0.0 {
        return if m == st.n { LogScaled::ONE } else { LogScaled::ZERO };
    }
    let (hi, lo, base_sign) = if m >= st.n {
        (m, st.n, beta.signum())
    } else {
        (st.n, m, -beta.signum())
    };
    let k = hi - lo;
    let x = beta * beta;
    let lag = laguerre_assoc(lo, k, x);
    if lag.is_zero() {
        return LogScaled::ZERO;
    }
    let log_mag = 0.5 * (log_factorial(u64::from(lo)) - log_factorial(u64::from(hi))) + f64::from(k) * beta.abs().ln()
        - 0.5 * x
        + lag.log_magnitude();
    let power_sign = if k % 2 == 1 && base_sign < 0.0 { -1 } else { 1 };
    LogScaled::new(lag.sign() * power_sign, log_mag)
}

/// `⟨m|n,β⟩`, real for real β.
pub fn displaced_amplitude(m: u32, st: &DisplacedNumberState) -> f64 {
    displaced_amplitude_log(m, st).to_f64()
}

/// `P_{mn}(β) = |⟨m|n,β⟩|²`.
pub fn displaced_pmf(m: u32, st: &DisplacedNumberState) -> f64 {
    displaced_amplitude_log(m, st).squared().to_f64()
}

/// `⟨m|D(β)|n⟩` from the generating function: the `n`-th α-derivative at
/// α = 0 of `e^{α²/2} ⟨m|α+β⟩ = e^{-αβ-β²/2} (α+β)^m / √m!`, expanded by
/// Leibniz into the finite sum
/// `e^{-β²/2}/√(n!m!) Σ_j C(n,j) (-1)^{n-j} m!/(m-j)! β^{n+m-2j}`.
///
/// The alternating sum cancels heavily, so it is accumulated in double-double
/// arithmetic relative to `β^{n+m}`. Validation oracle; intended for small `n`.
pub fn displaced_amplitude_via_derivative(m: u32, st: &DisplacedNumberState) -> f64 {
    let (n, beta) = (st.n, st.beta);
    if beta == 0.0 {
        return if m == n { 1.0 } else { 0.0 };
    }
    let beta_sq = DoubleDouble::from_f64(beta).mul_f64(beta);
    let mut term = if n % 2 == 0 {
        DoubleDouble::ONE
    } else {
        -DoubleDouble::ONE
    };
    let mut sum = term;
    for j in 0..n.min(m) {
        // t_{j+1} / t_j = -(n-j)(m-j) / ((j+1) β²)
        let num = DoubleDouble::from_f64(f64::from(n - j)).mul_f64(f64::from(m - j));
        let den = beta_sq.mul_f64(f64::from(j + 1));
        term = -(term * num / den);
        sum = sum + term;
    }
    let sum = sum.to_f64();
    let power = n + m;
    let power_sign = if beta < 0.0 && power % 2 == 1 { -1 } else { 1 };
    let prefactor = LogScaled::new(
        power_sign,
        f64::from(power) * beta.abs().ln()
            - 0.5 * beta * beta
            - 0.5 * (log_factorial(u64::from(n)) + log_factorial(u64::from(m))),
    );
    (LogScaled::from_f64(sum) * prefactor).to_f64()
}

/// Argument of the Hermite polynomial in the TPCS formulas, `β/√(2 cosh r sinh r)`.
fn tpcs_hermite_argument(st: &TwoPhotonCoherentState) -> f64 {
    st.beta / (2.0 * st.r.cosh() * st.r.sinh()).sqrt()
}

/// Everything in `ln |⟨n|β,r⟩|` except the Hermite factor.
fn tpcs_log_prefactor(n: u32, st: &TwoPhotonCoherentState) -> f64 {
    let (beta, r) = (st.beta, st.r);
    0.5 * (f64::from(n) * ((0.5 * r.tanh()).ln()) - log_factorial(u64::from(n)) - r.cosh().ln()
        + beta * beta * (r.tanh() - 1.0))
}

/// Coherent-state amplitude `e^{-β²/2} β^n / √n!` in log form.
fn coherent_amplitude_log(n: u32, beta: f64) -> LogScaled {
    if beta == 0.0 {
        return if n == 0 { LogScaled::ONE } else { LogScaled::ZERO };
    }
    let sign = if beta < 0.0 && n % 2 == 1 { -1 } else { 1 };
    LogScaled::new(
        sign,
        -0.5 * beta * beta + f64::from(n) * beta.abs().ln() - 0.5 * log_factorial(u64::from(n)),
    )
}

/// `⟨n|β,r⟩` in sign/log form:
/// `(½ tanh r)^{n/2} / √(n! cosh r) · e^{β²(tanh r − 1)/2} · H_n(β/√(2 cosh r sinh r))`.
pub fn tpcs_amplitude_log(n: u32, st: &TwoPhotonCoherentState) -> LogScaled {
    if st.r < SMALL_SQUEEZE {
        return coherent_amplitude_log(n, st.beta);
    }
    let h = hermite(n, tpcs_hermite_argument(st));
    h * LogScaled::new(1, tpcs_log_prefactor(n, st))
}

/// `⟨n|β,r⟩`, real for real β and r.
pub fn tpcs_amplitude(n: u32, st: &TwoPhotonCoherentState) -> f64 {
    tpcs_amplitude_log(n, st).to_f64()
}

/// `P_n = tanhⁿr / (2ⁿ n! cosh r) · exp{β²(tanh r − 1)} · |H_n(β/√(2 cosh r sinh r))|²`,
/// or the Poisson law `e^{-β²} β^{2n}/n!` for `r < 1e-8`.
pub fn tpcs_pmf(n: u32, st: &TwoPhotonCoherentState) -> f64 {
    tpcs_amplitude_log(n, st).squared().to_f64()
}

/// Exact distribution over `0..=truncation`.
pub fn pmf_table(state: &PhotonState, truncation: u32) -> Pmf {
    pmf_table_with(state, truncation, Execution::default())
}

pub fn pmf_table_with(state: &PhotonState, truncation: u32, exec: Execution) -> Pmf {
    let len = truncation as usize + 1;
    let values = match state {
        PhotonState::Displaced(st) => exec.map_indices(len, |m| displaced_pmf(m as u32, st)),
        PhotonState::TwoPhoton(st) if st.r >= SMALL_SQUEEZE => {
            // one Hermite pass shared by all indices
            let hs = hermite_sequence(truncation, tpcs_hermite_argument(st));
            exec.map_indices(len, |n| {
                (hs[n] * LogScaled::new(1, tpcs_log_prefactor(n as u32, st)))
                    .squared()
                    .to_f64()
            })
        }
        PhotonState::TwoPhoton(st) => exec.map_indices(len, |n| tpcs_pmf(n as u32, st)),
    };
    Pmf::new(values, PmfMethod::Exact)
}
