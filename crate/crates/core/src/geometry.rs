//! Ring bands, intersections, overlap areas and interference phases.
//!
//! A photon number `m` is represented by the annulus between radii
//! `√(m−½)` and `√(m+½)` about the origin (the disk of radius `√½` for
//! `m = 0`); each annulus has area π. A displaced number state `|n,β⟩` is the
//! same annulus for `n` centred at `β`, and a two-photon coherent state is the
//! unit-area-π ellipse centred at `βe^{-r}` with semi-axes `e^{-r}` (along x)
//! and `e^{r}` (along y).
//!
//! Every arctangent in the phase formulas is taken as the full angle of its
//! point so that obtuse crossings (intersection abscissa left of β) come out
//! right; [`displaced_phase`] and [`displaced_phase_geometric`] agree only
//! under that reading.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::numerics::full_angle;
use crate::states::TwoPhotonCoherentState;

/// Annulus assigned to photon number `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingBand {
    pub m: u32,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl RingBand {
    pub fn new(m: u32) -> Self {
        let mf = f64::from(m);
        Self {
            m,
            r_inner: if m == 0 { 0.0 } else { (mf - 0.5).sqrt() },
            r_outer: (mf + 0.5).sqrt(),
        }
    }

    pub fn area(&self) -> f64 {
        PI * (self.r_outer * self.r_outer - self.r_inner * self.r_inner)
    }
}

/// Upper crossing `x0 + i y0` of the circles `|α| = √m` and `|α − β| = √n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleIntersection {
    pub x0: f64,
    pub y0: f64,
}

/// `x0 = (β² + m − n) / 2β`, `y0 = √(m − x0²)`; `None` when the circles miss.
pub fn circle_intersection(m: u32, n: u32, beta: f64) -> Option<CircleIntersection> {
    if beta <= 0.0 {
        return None;
    }
    let x0 = (beta * beta + f64::from(m) - f64::from(n)) / (2.0 * beta);
    let d = f64::from(m) - x0 * x0;
    (d >= 0.0).then(|| CircleIntersection { x0, y0: d.sqrt() })
}

/// How two disks sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiskRelation {
    /// Boundaries cross (or touch externally at a single point).
    Crossing,
    Disjoint,
    /// One disk inside the other; the area is the smaller disk.
    Contained,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lens {
    pub area: f64,
    pub relation: DiskRelation,
}

/// Intersection area of disks of radii `r` and `R` with centres `beta` apart.
///
/// For crossing boundaries this is `r²δ + R²γ − βY₁` with
/// `X₁ = (r² + β² − R²)/2β`, `Y₁ = √(r² − X₁²)`, `δ` the angle of
/// `(X₁, Y₁)` and `γ` the angle of `(β − X₁, Y₁)`.
pub fn lens(r: f64, big_r: f64, beta: f64) -> Lens {
    let beta = beta.abs();
    if r <= 0.0 || big_r <= 0.0 {
        return Lens {
            area: 0.0,
            relation: if beta < r.max(big_r) {
                DiskRelation::Contained
            } else {
                DiskRelation::Disjoint
            },
        };
    }
    if beta >= r + big_r {
        return Lens {
            area: 0.0,
            relation: DiskRelation::Disjoint,
        };
    }
    if beta <= (r - big_r).abs() {
        let small = r.min(big_r);
        return Lens {
            area: PI * small * small,
            relation: DiskRelation::Contained,
        };
    }
    let x1 = (r * r + beta * beta - big_r * big_r) / (2.0 * beta);
    let y1 = (r * r - x1 * x1).max(0.0).sqrt();
    let delta = y1.atan2(x1);
    let gamma = y1.atan2(beta - x1);
    Lens {
        area: (r * r * delta + big_r * big_r * gamma - beta * y1).max(0.0),
        relation: DiskRelation::Crossing,
    }
}

/// `a(r, R)`: the disk-intersection area from [`lens`].
pub fn lens_area(r: f64, big_r: f64, beta: f64) -> f64 {
    lens(r, big_r, beta).area
}

/// Area of one of the two symmetric components where the bands of `m`
/// (about the origin) and `n` (about `β`) overlap:
/// `½[a(o_m,o_n) − a(i_m,o_n) − a(o_m,i_n) + a(i_m,i_n)]`.
pub fn band_overlap_area(m: u32, n: u32, beta: f64) -> f64 {
    let bm = RingBand::new(m);
    let bn = RingBand::new(n);
    let area = 0.5
        * (lens_area(bm.r_outer, bn.r_outer, beta)
            - lens_area(bm.r_inner, bn.r_outer, beta)
            - lens_area(bm.r_outer, bn.r_inner, beta)
            + lens_area(bm.r_inner, bn.r_inner, beta));
    area.max(0.0)
}

/// `ψ = m·∠(x0, y0) − n·∠(x0 − β, y0) − β y0`, unreduced.
pub fn displaced_phase(m: u32, n: u32, beta: f64) -> Result<f64, DomainError> {
    let c = circle_intersection(m, n, beta).ok_or(DomainError::NoIntersection { m, n, beta })?;
    let theta_m = if m == 0 { 0.0 } else { full_angle(c.y0, c.x0)? };
    let theta_n = if n == 0 { 0.0 } else { full_angle(c.y0, c.x0 - beta)? };
    Ok(f64::from(m) * theta_m - f64::from(n) * theta_n - beta * c.y0)
}

/// `a(√m, √n) − nπ`, the same phase read as a lens area.
pub fn displaced_phase_geometric(m: u32, n: u32, beta: f64) -> Result<f64, DomainError> {
    circle_intersection(m, n, beta).ok_or(DomainError::NoIntersection { m, n, beta })?;
    Ok(lens_area(f64::from(m).sqrt(), f64::from(n).sqrt(), beta) - f64::from(n) * PI)
}

/// Semiclassical phase
/// `−(m+½) asin(x_c/√(2m+1)) + (n+½) asin((x_c − √2β)/√(2n+1))
///  − (√2β/2)√(2m+1 − x_c²) − (n−m)π/2 + π/4`
/// with `x_c = (m−n)/(√2β) + √2β/2`. Out-of-range arcsin arguments are
/// reported, not clamped.
pub fn wkb_phase(m: u32, n: u32, beta: f64) -> Result<f64, DomainError> {
    let (mf, nf) = (f64::from(m), f64::from(n));
    let s2b = std::f64::consts::SQRT_2 * beta;
    let xc = (mf - nf) / s2b + 0.5 * s2b;
    let u = xc / (2.0 * mf + 1.0).sqrt();
    let v = (xc - s2b) / (2.0 * nf + 1.0).sqrt();
    for arg in [u, v] {
        if !(-1.0..=1.0).contains(&arg) {
            return Err(DomainError::WkbDomain { m, n, argument: arg });
        }
    }
    Ok(-(mf + 0.5) * u.asin() + (nf + 0.5) * v.asin()
        - 0.5 * s2b * (2.0 * mf + 1.0 - xc * xc).max(0.0).sqrt()
        - (nf - mf) * PI / 2.0
        + PI / 4.0)
}

/// The region assigned to `|β,r⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    pub center_x: f64,
    pub semi_x: f64,
    pub semi_y: f64,
}

impl EllipseSpec {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let u = (x - self.center_x) / self.semi_x;
        let v = y / self.semi_y;
        u * u + v * v <= 1.0
    }

    pub fn area(&self) -> f64 {
        PI * self.semi_x * self.semi_y
    }
}

pub fn ellipse_spec(st: &TwoPhotonCoherentState) -> EllipseSpec {
    EllipseSpec {
        center_x: st.displacement(),
        semi_x: (-st.r).exp(),
        semi_y: st.r.exp(),
    }
}

/// Abscissa of the circle–ellipse crossing in the vertical-line limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbscissaRule {
    /// `X₂ = βe^{-r}`, the ellipse centre.
    #[default]
    #[serde(rename = "consistent")]
    EllipseCenter,
    /// `X₂ = βe^{-2r}`.
    #[serde(rename = "paper-literal")]
    DoubledExponent,
}

impl AbscissaRule {
    pub fn abscissa(self, st: &TwoPhotonCoherentState) -> f64 {
        match self {
            AbscissaRule::EllipseCenter => st.beta * (-st.r).exp(),
            AbscissaRule::DoubledExponent => st.beta * (-2.0 * st.r).exp(),
        }
    }
}

/// Upper crossing `X₂ + iY₂` of `|α| = √m` with the (vertical) ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TpcsIntersection {
    pub x2: f64,
    pub y2: f64,
}

/// `X₂` per `rule`, `Y₂ = √(m − X₂²)`; `None` when `m < X₂²`.
///
/// Warns when the ellipse is too wide for the vertical-line picture
/// (`e^{-r} > 0.2 √m`); the result is still returned.
pub fn tpcs_intersection(m: u32, st: &TwoPhotonCoherentState, rule: AbscissaRule) -> Option<TpcsIntersection> {
    let mf = f64::from(m);
    let semi_x = (-st.r).exp();
    if semi_x > 0.2 * mf.sqrt() {
        warn!("vertical-line regime violated: e^-r = {semi_x:.4} > 0.2*sqrt({m}); ellipse crossing is approximate");
    }
    let x2 = rule.abscissa(st);
    let d = mf - x2 * x2;
    (d >= 0.0).then(|| TpcsIntersection { x2, y2: d.sqrt() })
}

fn tpcs_crossing(
    m: u32,
    st: &TwoPhotonCoherentState,
    rule: AbscissaRule,
) -> Result<(TpcsIntersection, f64), DomainError> {
    let c = tpcs_intersection(m, st, rule).ok_or(DomainError::NoEllipseIntersection { m })?;
    let theta = if m == 0 { 0.0 } else { full_angle(c.y2, c.x2)? };
    Ok((c, theta))
}

/// `ψ = m·∠(X₂, Y₂) − Y₂β sech r + X₂Y₂ tanh r`.
pub fn tpcs_phase(m: u32, st: &TwoPhotonCoherentState, rule: AbscissaRule) -> Result<f64, DomainError> {
    let (c, theta) = tpcs_crossing(m, st, rule)?;
    Ok(f64::from(m) * theta - c.y2 * st.beta / st.r.cosh() + c.x2 * c.y2 * st.r.tanh())
}

/// `ψ = m·∠(X₂, Y₂) − X₂Y₂`; equal to [`tpcs_phase`] exactly when `X₂ = βe^{-r}`.
pub fn tpcs_phase_reduced(m: u32, st: &TwoPhotonCoherentState, rule: AbscissaRule) -> Result<f64, DomainError> {
    let (c, theta) = tpcs_crossing(m, st, rule)?;
    Ok(f64::from(m) * theta - c.x2 * c.y2)
}

/// High-squeezing form `ψ = mπ/2 − 2X₂Y₂`.
pub fn tpcs_phase_high_squeeze(m: u32, st: &TwoPhotonCoherentState, rule: AbscissaRule) -> Result<f64, DomainError> {
    let c = tpcs_intersection(m, st, rule).ok_or(DomainError::NoEllipseIntersection { m })?;
    Ok(f64::from(m) * PI / 2.0 - 2.0 * c.x2 * c.y2)
}

/// Which bound of the rectangle approximation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RectangleBound {
    /// `m − ½ < β²e^{-2r}`: the inner circle misses the ellipse axis.
    BelowBand,
    /// `(m − β²e^{-2r}) e^{-2r} > 1`: the circle passes beyond the ellipse tip.
    BeyondTip,
}

/// `A_m = Δy·Δx`, or zero with the failed bound recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleOverlap {
    pub area: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    pub violated: Option<RectangleBound>,
}

/// `Δy = √(m+½−β²e^{-2r}) − √(m−½−β²e^{-2r})`,
/// `Δx = 2e^{-r} √(1 − (m − β²e^{-2r}) e^{-2r})`.
pub fn tpcs_overlap(m: u32, st: &TwoPhotonCoherentState) -> RectangleOverlap {
    let mf = f64::from(m);
    let c2 = st.beta * st.beta * (-2.0 * st.r).exp();
    let e2 = (-2.0 * st.r).exp();
    let zero = |b| RectangleOverlap {
        area: 0.0,
        delta_x: 0.0,
        delta_y: 0.0,
        violated: Some(b),
    };
    if mf - 0.5 < c2 {
        return zero(RectangleBound::BelowBand);
    }
    let tip = 1.0 - (mf - c2) * e2;
    if tip < 0.0 {
        return zero(RectangleBound::BeyondTip);
    }
    let delta_y = (mf + 0.5 - c2).sqrt() - (mf - 0.5 - c2).sqrt();
    let delta_x = 2.0 * (-st.r).exp() * tip.sqrt();
    RectangleOverlap {
        area: delta_x * delta_y,
        delta_x,
        delta_y,
        violated: None,
    }
}

pub fn tpcs_overlap_area(m: u32, st: &TwoPhotonCoherentState) -> f64 {
    tpcs_overlap(m, st).area
}

/// Crossing point, overlap area and phase for one photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapGeometry {
    pub x: f64,
    pub y: f64,
    pub area: f64,
    pub phase: f64,
}

/// `None` when the circles of radii `√m`, `√n` do not cross.
pub fn displaced_overlap(m: u32, n: u32, beta: f64) -> Option<OverlapGeometry> {
    let c = circle_intersection(m, n, beta)?;
    Some(OverlapGeometry {
        x: c.x0,
        y: c.y0,
        area: band_overlap_area(m, n, beta),
        phase: displaced_phase(m, n, beta).ok()?,
    })
}

/// `None` when the circle of radius `√m` misses the ellipse axis.
pub fn tpcs_overlap_geometry(m: u32, st: &TwoPhotonCoherentState, rule: AbscissaRule) -> Option<OverlapGeometry> {
    let c = tpcs_intersection(m, st, rule)?;
    Some(OverlapGeometry {
        x: c.x2,
        y: c.y2,
        area: tpcs_overlap_area(m, st),
        phase: tpcs_phase(m, st, rule).ok()?,
    })
}
