//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use photon_phase::approx::{approx_displaced_table, local_maxima, local_minima, parity_limit_table, PrefactorMode};
use photon_phase::geometry::{
    band_overlap_area, circle_intersection, displaced_phase, displaced_phase_geometric, tpcs_overlap_area, wkb_phase,
    AbscissaRule,
};
use photon_phase::husimi::{overlap_amplitudes_oracle, q_grid, GridSpec, QSurface, DEFAULT_STEP};
use photon_phase::mc::{band_overlap_area_mc, tpcs_overlap_area_mc};
use photon_phase::states::{
    displaced_amplitude, displaced_amplitude_via_derivative, pmf_table, DisplacedNumberState, PhotonState,
    TwoPhotonCoherentState,
};
use photon_phase::Execution;

type Criterion = (&'static str, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed<F: FnOnce() -> Outcome>(limit: Option<Duration>, f: F) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail.push_str(&format!("; {:.3}s", elapsed.as_secs_f64()));
    if let Some(limit) = limit {
        if elapsed > limit {
            o.pass = false;
            o.detail.push_str(&format!(" exceeds {:.0}s", limit.as_secs_f64()));
        }
    }
    o
}

fn displaced(n: u32, beta: f64) -> DisplacedNumberState {
    DisplacedNumberState::new(n, beta).unwrap()
}

fn tpcs(beta: f64, r: f64) -> TwoPhotonCoherentState {
    TwoPhotonCoherentState::new(beta, r).unwrap()
}

fn c1() -> Outcome {
    timed(Some(Duration::from_secs(1)), || {
        let pmf = pmf_table(&displaced(3, 10.1).into(), 300);
        let (sum, mean) = (pmf.total(), pmf.mean());
        outcome(
            (sum - 1.0).abs() <= 1e-9 && (mean - 105.01).abs() <= 1e-4,
            format!("sum-1 = {:.3e}, mean = {mean:.9}", sum - 1.0),
        )
    })
}

fn c2() -> Outcome {
    timed(Some(Duration::from_secs(5)), || {
        let mut worst = (0.0f64, 0, 0, 0.0);
        let mut checked = 0usize;
        for &beta in &[0.5, 2.0, 10.1] {
            for n in 0..=10 {
                let st = displaced(n, beta);
                for m in 0..=300 {
                    let a = displaced_amplitude(m, &st);
                    if a.abs() <= 1e-250 {
                        continue;
                    }
                    let b = displaced_amplitude_via_derivative(m, &st);
                    let rel = ((a - b) / a).abs();
                    checked += 1;
                    if rel > worst.0 {
                        worst = (rel, n, m, beta);
                    }
                }
            }
        }
        outcome(
            worst.0 <= 1e-10,
            format!(
                "{checked} amplitudes, worst relative gap {:.2e} at n={} m={} beta={}",
                worst.0, worst.1, worst.2, worst.3
            ),
        )
    })
}

fn c3() -> Outcome {
    timed(Some(Duration::from_secs(120)), || {
        let mut states: Vec<PhotonState> = Vec::new();
        for n in 0..=3 {
            for &beta in &[0.5, 1.0, 2.0] {
                states.push(displaced(n, beta).into());
            }
        }
        for &beta in &[0.0, 0.5, 1.0] {
            for &r in &[0.25, 0.5, 1.0] {
                states.push(tpcs(beta, r).into());
            }
        }
        let m_max = 30;
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        for s in &states {
            let grid = GridSpec::for_oracle(m_max, s, DEFAULT_STEP);
            let amps = match overlap_amplitudes_oracle(m_max, s, &grid) {
                Ok(a) => a,
                Err(e) => return outcome(false, format!("{s:?}: {e}")),
            };
            for (m, a) in amps.iter().enumerate() {
                let gap = (a - s.amplitude(m as u32)).norm();
                if gap > worst {
                    worst = gap;
                    worst_at = format!("{s:?} m={m}");
                }
            }
        }
        outcome(
            worst <= 1e-6,
            format!(
                "{} states, m<=30, worst |oracle-exact| = {worst:.2e} ({worst_at})",
                states.len()
            ),
        )
    })
}

fn c4() -> Outcome {
    timed(Some(Duration::from_secs(5)), || {
        // the moment identity first, against the quadrature oracle at small squeezing
        let small = tpcs(1.0, 0.5);
        let s: PhotonState = small.into();
        let grid = GridSpec::for_oracle(40, &s, DEFAULT_STEP);
        let oracle_mean: f64 = overlap_amplitudes_oracle(40, &s, &grid)
            .unwrap()
            .iter()
            .enumerate()
            .map(|(m, a)| m as f64 * a.norm_sqr())
            .sum();
        let identity_ok = (oracle_mean - small.mean_photon_number()).abs() < 1e-6;

        let st = tpcs(5.1, 3.0);
        let pmf = pmf_table(&st.into(), 2000);
        let (sum, mean) = (pmf.total(), pmf.mean());
        let target = 3f64.sinh().powi(2) + 5.1f64.powi(2) * (-6f64).exp();
        outcome(
            identity_ok && (sum - 1.0).abs() <= 1e-6 && (mean - 100.42).abs() <= 0.1,
            format!(
                "small-r oracle mean {oracle_mean:.9} vs {:.9}; sum-1 = {:.3e} (bound 1e-6); mean = {mean:.4} (identity {target:.4})",
                small.mean_photon_number(),
                sum - 1.0
            ),
        )
    })
}

fn c5() -> Outcome {
    timed(None, || {
        let pmf = pmf_table(&tpcs(0.0, 2.0).into(), 200);
        let nonzero: Vec<usize> = (1..=200).step_by(2).filter(|&n| pmf.values()[n] != 0.0).collect();
        outcome(nonzero.is_empty(), format!("odd entries not exactly zero: {nonzero:?}"))
    })
}

fn c6() -> Outcome {
    timed(None, || {
        let mut worst = 0.0f64;
        let mut count = 0;
        for n in 0..=5 {
            for &beta in &[2.0, 10.1] {
                for m in 0..=400 {
                    if circle_intersection(m, n, beta).is_none() {
                        continue;
                    }
                    let a = displaced_phase(m, n, beta).unwrap();
                    let b = displaced_phase_geometric(m, n, beta).unwrap();
                    worst = worst.max((a - b).abs());
                    count += 1;
                }
            }
        }
        outcome(
            count > 0 && worst <= 1e-9,
            format!("{count} overlapping (m,n,beta), worst gap {worst:.2e}"),
        )
    })
}

fn within(a: &[usize], b: &[usize], tol: usize) -> bool {
    a.iter().all(|&x| b.iter().any(|&y| x.abs_diff(y) <= tol))
}

fn c7() -> Outcome {
    timed(Some(Duration::from_secs(1)), || {
        let st = displaced(3, 10.1);
        let exact = pmf_table(&st.into(), 300);
        let approx = approx_displaced_table(&st, 300, PrefactorMode::TwoBranchAmplitude, Execution::default());
        let alt = approx_displaced_table(&st, 300, PrefactorMode::AreaOverPi, Execution::default());
        let in_window = |v: Vec<usize>| v.into_iter().filter(|m| (85..=115).contains(m)).collect::<Vec<_>>();
        let em = in_window(local_minima(exact.values()));
        let am = in_window(local_minima(approx.values()));
        let minima_ok = !em.is_empty() && within(&em, &am, 1) && within(&am, &em, 1);

        let mut maxima = local_maxima(exact.values());
        maxima.sort_by(|&a, &b| exact.values()[b].total_cmp(&exact.values()[a]));
        maxima.truncate(3);
        let errs: Vec<(usize, f64)> = maxima
            .iter()
            .map(|&m| (m, (approx.values()[m] - exact.values()[m]).abs() / exact.values()[m]))
            .collect();
        let maxima_ok = errs.len() == 3 && errs.iter().all(|&(_, e)| e <= 0.3);

        let diff = |p: &photon_phase::states::Pmf| photon_phase::approx::compare(&exact, p).unwrap().max_abs_diff;
        outcome(
            minima_ok && maxima_ok,
            format!(
                "minima in [85,115]: exact {em:?}, approx {am:?}; relative error at largest maxima {:?}; max|diff| amplitude {:.3e}, paper-final {:.3e}",
                errs.iter().map(|(m, e)| format!("m={m}:{e:.3}")).collect::<Vec<_>>(),
                diff(&approx),
                diff(&alt)
            ),
        )
    })
}

fn even_minima(values: &[f64]) -> Vec<usize> {
    let even: Vec<f64> = values.iter().step_by(2).copied().collect();
    local_minima(&even)
        .into_iter()
        .map(|k| 2 * k)
        .filter(|m| (60..=140).contains(m))
        .collect()
}

fn c8() -> Outcome {
    timed(None, || {
        let st = tpcs(5.1, 3.0);
        let exact = pmf_table(&st.into(), 2000);
        let em = even_minima(exact.values());
        let mut lines = vec![format!("exact even-m envelope minima in [60,140]: {em:?}")];
        let mut consistent_ok = false;
        for (rule, label) in [
            (AbscissaRule::EllipseCenter, "consistent"),
            (AbscissaRule::DoubledExponent, "paper-literal"),
        ] {
            let limit = parity_limit_table(&st, 2000, rule, Execution::default());
            let pm = even_minima(limit.values());
            let ok = !em.is_empty() && within(&em, &pm, 2) && within(&pm, &em, 2);
            if rule == AbscissaRule::EllipseCenter {
                consistent_ok = ok;
            }
            lines.push(format!(
                "{label}: cos(4X2Y2)=-1 minima {pm:?} -> {}",
                if ok { "match" } else { "mismatch" }
            ));
        }
        outcome(consistent_ok, lines.join("; "))
    })
}

fn c9() -> Outcome {
    timed(None, || {
        let (n, beta) = (3u32, 10.1);
        let shift = f64::from(n) * PI;
        let band: Vec<u32> = (0..=300).filter(|&m| displaced_phase(m, n, beta).is_ok()).collect();
        let (lo, hi) = (*band.first().unwrap(), *band.last().unwrap());
        let quarter = (hi - lo) / 4;
        let (c_lo, c_hi) = (lo + quarter, hi - quarter);
        let gap = |m: u32| -> Option<f64> {
            let psi = displaced_phase(m, n, beta).ok()?;
            let w = wkb_phase(m, n, beta).ok()?;
            Some(((psi + shift) - (w + shift)).abs() / PI)
        };
        let central: Vec<(u32, Option<f64>)> = (c_lo..=c_hi).map(|m| (m, gap(m))).collect();
        let central_ok = central.iter().all(|(_, g)| matches!(g, Some(v) if *v <= 0.25));
        let worst = central.iter().filter_map(|(_, g)| *g).fold(0.0, f64::max);

        // edges of the ring-overlap band, where the semiclassical phase should break down
        let overlap: Vec<u32> = (0..=300).filter(|&m| band_overlap_area(m, n, beta) > 0.0).collect();
        let breakdown = |m: u32| wkb_phase(m, n, beta).is_err() || gap(m).is_some_and(|g| g > 0.25);
        let lower: Vec<u32> = overlap.iter().copied().filter(|&m| m < c_lo && breakdown(m)).collect();
        let upper: Vec<u32> = overlap.iter().copied().filter(|&m| m > c_hi && breakdown(m)).collect();

        let csv = {
            let cfg = match photon_phase::cli::parse_args([
                "photon-phase",
                "phases",
                "displaced",
                "--n",
                "3",
                "--beta",
                "10.1",
                "--nmax",
                "200",
            ])
            .unwrap()
            {
                photon_phase::cli::Invocation::Run(c) => c,
                _ => unreachable!(),
            };
            photon_phase::cli::render(&cfg).unwrap()
        };
        let recorded = upper.iter().chain(&lower).all(|&m| {
            let row = csv.lines().nth(m as usize + 1).unwrap();
            wkb_phase(m, n, beta).is_ok() || row.ends_with(',')
        });
        outcome(
            central_ok && !(lower.is_empty() && upper.is_empty()) && recorded,
            format!(
                "phase band m={lo}..{hi}, central m={c_lo}..{c_hi} worst gap {worst:.3}; breakdown in overlap band below {lower:?} above {upper:?}; empty WKB cells recorded: {recorded}"
            ),
        )
    })
}

fn c10() -> Outcome {
    timed(None, || {
        let band = band_overlap_area(100, 3, 10.1);
        let band_mc = band_overlap_area_mc(100, 3, 10.1, 1_000_000, 2024);
        let st = tpcs(5.1, 3.0);
        let rect = tpcs_overlap_area(100, &st);
        let rect_mc = tpcs_overlap_area_mc(100, &st, 1_000_000, 2024);
        let e1 = ((band - band_mc.area) / band_mc.area).abs();
        let e2 = ((rect - rect_mc.area) / rect_mc.area).abs();
        outcome(
            e1 <= 0.02 && e2 <= 0.10,
            format!(
                "A_mn {band:.6e} vs MC {:.6e}±{:.1e} (rel {e1:.4}); A_m {rect:.6e} vs MC {:.6e}±{:.1e} (rel {e2:.4})",
                band_mc.area, band_mc.std_error, rect_mc.area, rect_mc.std_error
            ),
        )
    })
}

fn c11() -> Outcome {
    timed(None, || {
        let surfaces = [
            QSurface::Fock { m: 1 },
            QSurface::Fock { m: 3 },
            QSurface::Fock { m: 10 },
            QSurface::Displaced(displaced(3, 10.1)),
            QSurface::Displaced(displaced(0, 2.0)),
            QSurface::TwoPhoton(tpcs(1.0, 1.0)),
            QSurface::TwoPhoton(tpcs(5.1, 3.0)),
        ];
        let mut pass = true;
        let mut parts = Vec::new();
        for s in &surfaces {
            let grid = s.default_grid(DEFAULT_STEP);
            let q = q_grid(s, &grid);
            let integral = q.integral();
            let mut ok = (integral - 1.0).abs() <= 1e-4;
            let mut note = format!("{:.2e}", integral - 1.0);
            if let QSurface::Fock { m } = s {
                let (x, y, _) = q.argmax();
                let off = ((x * x + y * y).sqrt() - f64::from(*m).sqrt()).abs();
                ok &= off <= grid.dx();
                note.push_str(&format!(" argmax radius off {off:.3}"));
            }
            pass &= ok;
            parts.push(format!("{}: {note}", surface_label(s)));
        }
        outcome(pass, format!("integral-1: {}", parts.join(", ")))
    })
}

fn surface_label(s: &QSurface) -> String {
    match s {
        QSurface::Fock { m } => format!("fock m={m}"),
        QSurface::Displaced(st) => format!("displaced n={} beta={}", st.n, st.beta),
        QSurface::TwoPhoton(st) => format!("tpcs beta={} r={}", st.beta, st.r),
        QSurface::Product { m, .. } => format!("product m={m}"),
    }
}

fn c12() -> Outcome {
    timed(None, || {
        let bin = env!("CARGO_BIN_EXE_photon-phase");
        let dir = tempfile::tempdir().unwrap();
        let commands: [&[&str]; 8] = [
            &[
                "pmf",
                "exact",
                "displaced",
                "--n",
                "3",
                "--beta",
                "10.1",
                "--nmax",
                "300",
            ],
            &["pmf", "exact", "tpcs", "--beta", "5.1", "--r", "3", "--nmax", "2000"],
            &[
                "pmf",
                "approx",
                "tpcs",
                "--beta",
                "5.1",
                "--r",
                "3",
                "--nmax",
                "300",
                "--x2",
                "paper-literal",
            ],
            &["pmf", "parity", "tpcs", "--beta", "5.1", "--r", "3", "--nmax", "300"],
            &[
                "pmf",
                "oracle",
                "displaced",
                "--n",
                "1",
                "--beta",
                "0.7",
                "--nmax",
                "10",
            ],
            &[
                "compare",
                "displaced",
                "--n",
                "3",
                "--beta",
                "10.1",
                "--nmax",
                "200",
                "--prefactor",
                "paper-final",
                "--mc-samples",
                "20000",
                "--seed",
                "7",
            ],
            &[
                "qgrid",
                "product",
                "--m",
                "100",
                "--n",
                "3",
                "--beta",
                "10.1",
                "--window",
                "-2:14:-6:6",
                "--res",
                "400x300",
            ],
            &["phases", "displaced", "--n", "3", "--beta", "10.1", "--nmax", "200"],
        ];
        let mut failures = Vec::new();
        for (k, args) in commands.iter().enumerate() {
            let first = dir.path().join(format!("run{k}.csv"));
            let second = dir.path().join(format!("rerun{k}.csv"));
            let ok1 = Command::new(bin)
                .args(*args)
                .arg("--out")
                .arg(&first)
                .status()
                .unwrap()
                .success();
            let meta = dir.path().join(format!("run{k}.csv.meta.json"));
            let ok2 = Command::new(bin)
                .arg("rerun")
                .arg(&meta)
                .arg("--out")
                .arg(&second)
                .status()
                .unwrap()
                .success();
            let same = ok1 && ok2 && fs::read(&first).unwrap() == fs::read(&second).unwrap();
            if !same {
                failures.push(args.join(" "));
            }
        }
        outcome(
            failures.is_empty(),
            format!(
                "{} commands re-run from sidecars; differing: {failures:?}",
                commands.len()
            ),
        )
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (
            "C1",
            "displaced-state normalization and mean (n=3, beta=10.1, N=300)",
            c1,
        ),
        ("C2", "Laguerre form equals derivative construction to 1e-10", c2),
        ("C3", "quadrature oracle reproduces exact amplitudes to 1e-6", c3),
        (
            "C4",
            "two-photon coherent state normalization and mean (beta=5.1, r=3, N=2000)",
            c4,
        ),
        ("C5", "squeezed vacuum odd photon numbers vanish", c5),
        ("C6", "phase equals lens area minus n*pi to 1e-9", c6),
        (
            "C7",
            "approximate displaced distribution: minima within 1, maxima within 30%",
            c7,
        ),
        ("C8", "parity envelope minima at cos(4 X2 Y2) = -1 within 2", c8),
        (
            "C9",
            "WKB phase within 0.25 in the central band, breaks down at the edges",
            c9,
        ),
        ("C10", "overlap areas against Monte-Carlo sampling", c10),
        ("C11", "Q integrates to 1 and Fock ring peaks at sqrt(m)", c11),
        ("C12", "CLI re-run from sidecar is byte-identical", c12),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{id} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
