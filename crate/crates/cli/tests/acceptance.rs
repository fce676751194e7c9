use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use peridyn::diagnostics::sign_changes_behind_front;
use peridyn::dispersion::{high_freq_coefficient, high_freq_quadrature, low_freq_coefficient, omega, omega_squared};
use peridyn::initial::{
    dipole_field, dipole_initial_condition, gaussian_profile, gaussian_spectrum, multipole_decompose, FieldFn,
    RadialSpectrum,
};
use peridyn::oracle::{evolution_residual, k_planewave_multiplier, OracleOptions};
use peridyn::solver::{
    anisotropic_solution_3d, field_snapshot, mode_energy, AngularGrid, AnisotropicSynthesizer, EvolutionRequest,
    InitialData, Reach, SolverOptions,
};
use peridyn::special::SphericalHarmonicIndex;
use peridyn::{Dimension, MaterialParams};
use peridyn_cli::{cmd_evolve, cmd_tables, IcKind, RunConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn unit(alpha: f64) -> MaterialParams {
    MaterialParams::unit(alpha).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("runtime {:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs_f64())
}

fn grid(r_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| r_max * k as f64 / (n - 1) as f64).collect()
}

fn group_velocity_tables() -> Outcome {
    let start = Instant::now();
    let csv = cmd_tables(&RunConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let expected = [(2, [3.96, 1.77, 1.32]), (3, [4.58, 2.05, 1.53])];
    let mut worst = 0.0f64;
    let mut found = 0;
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (dim, alpha, vg) = (cols[0] as usize, cols[1], cols[4]);
        for (n, values) in expected {
            for (a, want) in [0.9, 0.5, 0.1].into_iter().zip(values) {
                if dim == n && alpha == a {
                    worst = worst.max(rel(vg, want));
                    found += 1;
                }
            }
        }
    }
    let limit = Duration::from_secs(1);
    Outcome {
        pass: found == 6 && worst < 1e-2 && elapsed < limit,
        detail: format!("max rel err {worst:.2e} over {found} entries (tol 1e-2), {}", within(elapsed, limit)),
    }
}

fn asymptotic_limits() -> Outcome {
    let start = Instant::now();
    let mut worst_low = 0.0f64;
    let mut worst_high = 0.0f64;
    let mut failing = Vec::new();
    for dim in Dimension::ALL {
        for alpha in [0.1, 0.5, 0.9] {
            let p = unit(alpha);
            let lo = 1e-3;
            let low = rel(omega_squared(dim, &p, lo).unwrap() / (lo * lo), low_freq_coefficient(dim, &p));
            let hi = 1e4;
            let high = rel(
                omega_squared(dim, &p, hi).unwrap() * hi.powf(-2.0 * alpha),
                high_freq_coefficient(dim, &p),
            );
            worst_low = worst_low.max(low);
            worst_high = worst_high.max(high);
            if !(low < 1e-4 && high < 1e-2) {
                failing.push(format!("N={} a={alpha} low {low:.2e} high {high:.2e}", dim.n()));
            }
        }
    }
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(30);
    Outcome {
        pass: failing.is_empty() && elapsed < limit,
        detail: format!(
            "max rel err low {worst_low:.2e} (tol 1e-4), high {worst_high:.2e} (tol 1e-2), {}; failing: [{}]",
            within(elapsed, limit),
            failing.join("; ")
        ),
    }
}

fn closed_form_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for dim in Dimension::ALL {
        for alpha in [0.1, 0.3, 0.7, 0.9] {
            let p = unit(alpha);
            let quad = high_freq_quadrature(dim, &p).unwrap();
            worst = worst.max(rel(high_freq_coefficient(dim, &p), quad));
        }
    }
    Outcome {
        pass: worst < 1e-6,
        detail: format!("max rel err {worst:.2e} (tol 1e-6)"),
    }
}

fn plane_wave_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for dim in Dimension::ALL {
        for alpha in [0.1, 0.5, 0.9] {
            let p = unit(alpha);
            for s in [0.1, 1.0, 10.0] {
                let mut xi = vec![0.0; dim.n()];
                xi[0] = s / p.delta();
                let m = k_planewave_multiplier(dim, &p, &xi).unwrap();
                let rho_w2 = p.rho() * omega_squared(dim, &p, s / p.delta()).unwrap();
                worst = worst.max((m + rho_w2).norm() / rho_w2);
            }
        }
    }
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(120);
    Outcome {
        pass: worst < 1e-7 && elapsed < limit,
        detail: format!("max rel err {worst:.2e} (tol 1e-7), {}", within(elapsed, limit)),
    }
}

fn evolution_residual_convergence() -> Outcome {
    let p = unit(0.5);
    let data = InitialData::Radial {
        v0: gaussian_spectrum(1.0, Dimension::Two).unwrap(),
        v1: RadialSpectrum::zero(),
    };
    let opts = OracleOptions::default();
    let x = [1.0, 0.0];
    let res = |h: f64| evolution_residual(Dimension::Two, &p, &data, 1.0, &x, h, &opts).unwrap();
    let (coarse, fine, finest) = (res(1e-2), res(5e-3), res(1e-3));
    let ratio = coarse / fine;
    Outcome {
        pass: ratio >= 3.5 && finest < 1e-3,
        detail: format!("ratio {ratio:.3} (min 3.5), residual at h=1e-3 {finest:.2e} (tol 1e-3)"),
    }
}

fn initial_condition_recovery() -> Outcome {
    let mut worst = 0.0f64;
    for dim in Dimension::ALL {
        for sigma in [0.1, 1.0] {
            let req = EvolutionRequest {
                dim,
                params: unit(0.5),
                data: InitialData::Radial {
                    v0: gaussian_spectrum(sigma, dim).unwrap(),
                    v1: RadialSpectrum::zero(),
                },
                times: vec![0.0],
                radii: grid(6.0 * sigma, 200),
                angles: AngularGrid::uniform(1, 1).unwrap(),
                options: SolverOptions::default(),
            };
            let profile = gaussian_profile(sigma, dim).unwrap();
            for (r, u) in field_snapshot(&req).unwrap()[0].radial_profile() {
                worst = worst.max((u - profile.eval(r)).abs());
            }
        }
    }
    Outcome {
        pass: worst < 1e-6,
        detail: format!("max abs err {worst:.2e} (tol 1e-6)"),
    }
}

fn anisotropic_consistency() -> Outcome {
    let p = unit(0.5);
    let sigma = 1.0;
    let set = dipole_initial_condition(sigma).unwrap();
    let synth = AnisotropicSynthesizer::new(&p, &set, Reach { r_max: 4.0, t_max: 0.0 }, &SolverOptions::default())
        .unwrap();
    let mut dipole_err = 0.0f64;
    for r in grid(4.0, 41) {
        for theta in grid(PI, 13) {
            dipole_err = dipole_err.max((synth.eval(0.0, r, theta, 0.3) - dipole_field(sigma, r, theta)).abs());
        }
    }

    let profile = gaussian_profile(sigma, Dimension::Three).unwrap();
    let field: FieldFn = Arc::new(move |r, _, _| profile.eval(r));
    let mut mono = multipole_decompose(field, 0, sigma).unwrap();
    mono.prune(&grid(4.0, 9), 1e-10);
    let spectrum = gaussian_spectrum(sigma, Dimension::Three).unwrap();
    let mut mono_err = 0.0f64;
    for t in [0.0, 1.0, 2.0] {
        for r in [0.0, 0.5, 1.5, 3.0] {
            let a = anisotropic_solution_3d(&p, &mono, t, r, 0.7, 1.1).unwrap();
            let b = peridyn::solver::radial_solution(Dimension::Three, &p, &spectrum, &RadialSpectrum::zero(), t, r)
                .unwrap();
            mono_err = mono_err.max((a - b).abs());
        }
    }

    let field: FieldFn = Arc::new(move |r, theta, _| dipole_field(sigma, r, theta));
    let decomposed = multipole_decompose(field, 8, sigma).unwrap();
    let y10 = SphericalHarmonicIndex::new(1, 0).unwrap();
    let mut nonvanishing = Vec::new();
    let mut leak = 0.0f64;
    for (idx, ch) in decomposed.channels() {
        let peak = grid(6.0, 61).into_iter().map(|r| ch.v0_at(r).norm()).fold(0.0f64, f64::max);
        if *idx == y10 {
            if peak >= 1e-10 {
                nonvanishing.push(*idx);
            }
        } else {
            leak = leak.max(peak);
            if peak >= 1e-10 {
                nonvanishing.push(*idx);
            }
        }
    }
    let single = nonvanishing == vec![y10];
    Outcome {
        pass: dipole_err < 1e-5 && mono_err < 1e-6 && single,
        detail: format!(
            "(a) dipole err {dipole_err:.2e} (tol 1e-5), (b) monopole vs radial {mono_err:.2e} (tol 1e-6), \
             (c) {} nonvanishing channel(s), max leak {leak:.2e} (tol 1e-10)",
            nonvanishing.len()
        ),
    }
}

fn energy_conservation() -> Outcome {
    let mut worst = 0.0f64;
    let v0 = num_complex::Complex64::new(0.8, -0.3);
    let v1 = num_complex::Complex64::new(-0.2, 0.5);
    for dim in Dimension::ALL {
        let p = unit(0.5);
        for xi in [0.1, 1.0, 10.0] {
            let w = omega(dim, &p, xi).unwrap();
            let e0 = mode_energy(v0, v1, w, 0.0);
            for t in [0.7, 2.3] {
                worst = worst.max(((mode_energy(v0, v1, w, t) - e0) / e0).abs());
            }
        }
    }
    Outcome {
        pass: worst < 1e-12,
        detail: format!("max rel drift {worst:.2e} (tol 1e-12)"),
    }
}

fn sign_changes_from_csv(csv: &str, time: f64) -> usize {
    let values: Vec<f64> = csv
        .lines()
        .skip(1)
        .filter_map(|line| {
            let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            (cols[0] == time).then_some(cols[2])
        })
        .collect();
    sign_changes_behind_front(&values, 1e-3)
}

fn dispersion_contract() -> Outcome {
    let run = |sigma: f64| {
        let cfg = RunConfig {
            dim: Some(2),
            alpha: Some(0.5),
            sigma,
            times: vec![0.0, 2.0],
            ic: IcKind::GaussianRadial,
            grid_n: 601,
            grid_rmax: 6.0,
            ..RunConfig::default()
        };
        let csv = cmd_evolve(&cfg).unwrap();
        (sign_changes_from_csv(&csv, 0.0), sign_changes_from_csv(&csv, 2.0))
    };
    let (narrow0, narrow2) = run(0.1);
    let (_, wide2) = run(1.0);
    Outcome {
        pass: narrow0 == 0 && narrow2 > 0 && wide2 == 0,
        detail: format!("sigma=0.1: {narrow0} -> {narrow2} changes, sigma=1: {wide2} changes at t=2"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 group-velocity tables", group_velocity_tables),
        ("2 asymptotic limits", asymptotic_limits),
        ("3 closed-form/quadrature equivalence", closed_form_equivalence),
        ("4 plane-wave oracle", plane_wave_oracle),
        ("5 evolution-equation residual", evolution_residual_convergence),
        ("6 initial-condition recovery", initial_condition_recovery),
        ("7 anisotropic consistency", anisotropic_consistency),
        ("8 per-mode energy conservation", energy_conservation),
        ("9 qualitative dispersion contract", dispersion_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
