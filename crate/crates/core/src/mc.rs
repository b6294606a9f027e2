//! Seeded Monte-Carlo area estimates for the overlap regions.
//!
//! Samples are drawn in fixed-size batches; batch `b` uses a ChaCha8 stream
//! `b` under the given seed, so the estimate does not depend on how batches
//! are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Execution;
use crate::geometry::{ellipse_spec, RingBand};
use crate::states::TwoPhotonCoherentState;

const BATCH: u64 = 10_000;

/// Region sampled uniformly (by area).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingRegion {
    Box {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    /// `rho_min ≤ |α| ≤ rho_max`, `theta_min ≤ arg α ≤ theta_max`.
    AnnularSector {
        rho_min: f64,
        rho_max: f64,
        theta_min: f64,
        theta_max: f64,
    },
}

impl SamplingRegion {
    pub fn area(&self) -> f64 {
        match *self {
            SamplingRegion::Box {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (x_max - x_min) * (y_max - y_min),
            SamplingRegion::AnnularSector {
                rho_min,
                rho_max,
                theta_min,
                theta_max,
            } => 0.5 * (theta_max - theta_min) * (rho_max * rho_max - rho_min * rho_min),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        match *self {
            SamplingRegion::Box {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (x_min + u * (x_max - x_min), y_min + v * (y_max - y_min)),
            SamplingRegion::AnnularSector {
                rho_min,
                rho_max,
                theta_min,
                theta_max,
            } => {
                let rho2 = rho_min * rho_min + u * (rho_max * rho_max - rho_min * rho_min);
                let rho = rho2.sqrt();
                let theta = theta_min + v * (theta_max - theta_min);
                (rho * theta.cos(), rho * theta.sin())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    pub area: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

pub fn estimate_area<F>(region: SamplingRegion, inside: F, samples: u64, seed: u64) -> AreaEstimate
where
    F: Fn(f64, f64) -> bool + Sync + Send,
{
    estimate_area_with(region, inside, samples, seed, Execution::default())
}

pub fn estimate_area_with<F>(
    region: SamplingRegion,
    inside: F,
    samples: u64,
    seed: u64,
    exec: Execution,
) -> AreaEstimate
where
    F: Fn(f64, f64) -> bool + Sync + Send,
{
    let batches = samples.div_ceil(BATCH);
    let counts = exec.map_indices(batches as usize, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let len = BATCH.min(samples - b as u64 * BATCH);
        (0..len)
            .filter(|_| {
                let (x, y) = region.sample(&mut rng);
                inside(x, y)
            })
            .count() as u64
    });
    let hits: u64 = counts.iter().sum();
    let total = region.area();
    if samples == 0 {
        return AreaEstimate {
            area: 0.0,
            std_error: 0.0,
            hits: 0,
            samples: 0,
        };
    }
    let p = hits as f64 / samples as f64;
    AreaEstimate {
        area: total * p,
        std_error: total * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
    }
}

fn in_band(band: &RingBand, x: f64, y: f64) -> bool {
    let rho2 = x * x + y * y;
    rho2 >= band.r_inner * band.r_inner && rho2 <= band.r_outer * band.r_outer
}

/// Upper-half-plane intersection of the band of `m` (origin) and of `n` (at β).
pub fn band_overlap_area_mc(m: u32, n: u32, beta: f64, samples: u64, seed: u64) -> AreaEstimate {
    let bm = RingBand::new(m);
    let bn = RingBand::new(n);
    let theta_max = if beta > bn.r_outer {
        (bn.r_outer / beta).asin()
    } else {
        std::f64::consts::PI
    };
    let region = SamplingRegion::AnnularSector {
        rho_min: bm.r_inner,
        rho_max: bm.r_outer,
        theta_min: 0.0,
        theta_max,
    };
    estimate_area(region, |x, y| y >= 0.0 && in_band(&bn, x - beta, y), samples, seed)
}

/// Upper-half-plane intersection of the band of `m` with the ellipse of `st`.
pub fn tpcs_overlap_area_mc(m: u32, st: &TwoPhotonCoherentState, samples: u64, seed: u64) -> AreaEstimate {
    let e = ellipse_spec(st);
    let band = RingBand::new(m);
    let (x_min, x_max) = (e.center_x - e.semi_x, e.center_x + e.semi_x);
    let x_far = x_min.abs().max(x_max.abs());
    let y_min = (band.r_inner * band.r_inner - x_far * x_far).max(0.0).sqrt();
    let region = SamplingRegion::Box {
        x_min,
        x_max,
        y_min,
        y_max: band.r_outer.min(e.semi_y),
    };
    estimate_area(region, |x, y| e.contains(x, y) && in_band(&band, x, y), samples, seed)
}

/// Intersection of the disks of radius `r` at 0 and `big_r` at `beta`.
pub fn lens_area_mc(r: f64, big_r: f64, beta: f64, samples: u64, seed: u64) -> AreaEstimate {
    let region = SamplingRegion::Box {
        x_min: (-r).max(beta - big_r),
        x_max: r.min(beta + big_r),
        y_min: -r.min(big_r),
        y_max: r.min(big_r),
    };
    estimate_area(
        region,
        |x, y| x * x + y * y <= r * r && (x - beta).powi(2) + y * y <= big_r * big_r,
        samples,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{band_overlap_area, lens_area, tpcs_overlap_area};
    use std::f64::consts::PI;

    #[test]
    fn unit_disk() {
        let region = SamplingRegion::Box {
            x_min: -1.0,
            x_max: 1.0,
            y_min: -1.0,
            y_max: 1.0,
        };
        let est = estimate_area(region, |x, y| x * x + y * y <= 1.0, 200_000, 7);
        assert!((est.area - PI).abs() < 4.0 * est.std_error);
    }

    #[test]
    fn annular_sector_is_uniform_in_area() {
        let region = SamplingRegion::AnnularSector {
            rho_min: 1.0,
            rho_max: 2.0,
            theta_min: 0.0,
            theta_max: PI,
        };
        let est = estimate_area(region, |x, y| x * x + y * y <= 2.5, 200_000, 3);
        let exact = 0.5 * PI * (2.5 - 1.0);
        assert!((est.area - exact).abs() < 4.0 * est.std_error);
    }

    #[test]
    fn lens_oracle_examples() {
        let est = lens_area_mc(1.0, 1.0, 2f64.sqrt(), 1_000_000, 11);
        assert!((est.area - (PI - 2.0) / 2.0).abs() < 4.0 * est.std_error);
        let (r, big_r) = (100.5f64.sqrt(), 3.5f64.sqrt());
        let est = lens_area_mc(r, big_r, 10.1, 1_000_000, 12);
        let exact = lens_area(r, big_r, 10.1);
        assert!(((est.area - exact) / exact).abs() < 1e-3 + 4.0 * est.std_error / exact);
    }

    #[test]
    fn band_and_ellipse_oracles() {
        let exact = band_overlap_area(100, 3, 10.1);
        let est = band_overlap_area_mc(100, 3, 10.1, 1_000_000, 1);
        assert!(((est.area - exact) / exact).abs() < 0.02);

        let st = TwoPhotonCoherentState::new(5.1, 3.0).unwrap();
        let approx = tpcs_overlap_area(100, &st);
        let est = tpcs_overlap_area_mc(100, &st, 1_000_000, 1);
        assert!(((est.area - approx) / approx).abs() < 0.1);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let region = SamplingRegion::Box {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
        };
        let f = |x: f64, y: f64| x * y > 0.25;
        let a = estimate_area_with(region, f, 123_457, 99, Execution::Sequential);
        let b = estimate_area_with(region, f, 123_457, 99, Execution::Parallel);
        assert_eq!(a, b);
        let c = estimate_area_with(region, f, 123_457, 100, Execution::Sequential);
        assert_ne!(a.hits, c.hits);
    }
}
