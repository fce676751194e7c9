//! Direct-space application of the nonlocal operator
//!
//! ```text
//! K f(x) = −2κ ∫_{B_δ(0)} (f(x) − f(x + y)) / |y|^{N+2α} dy
//! ```
//!
//! by cubature over the interaction ball, used to check the spectral
//! machinery independently of the dispersion integrals.
//!
//! The radial coordinate is integrated with y = δ u^p, p = 1/(2 − 2α),
//! which turns the y^{1−2α} endpoint behaviour into a bounded integrand.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{self, Dimension, MaterialParams};
use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::quadrature::{adaptive_integrate, gauss_legendre, GaussRule, QuadratureSpec};
use crate::solver::{AnisotropicSynthesizer, InitialData, RadialSynthesizer, Reach, SolverOptions};
use crate::special;

/// Angular resolution for [`k_apply_sampled`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Directions on the circle (2D) or azimuths (3D).
    pub azimuths: usize,
    /// Gauss–Legendre nodes in the polar cosine (3D).
    pub polar_nodes: usize,
    pub rel_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            azimuths: 64,
            polar_nodes: 32,
            rel_tol: 1e-11,
        }
    }
}

fn check_position(dim: Dimension, x: &[f64]) -> Result<()> {
    if x.len() != dim.n() {
        return Err(Error::invalid(format!(
            "expected a vector of length {} (got {})",
            dim.n(),
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("vector components must be finite"));
    }
    Ok(())
}

fn exponent(alpha: f64) -> f64 {
    1.0 / (2.0 - 2.0 * alpha)
}

/// ∫₀^δ g(y) y^{−1−2α} dy over [y_lo, δ] in the variable u.
fn radial_integral<G: Fn(f64) -> f64>(
    params: &MaterialParams,
    y_lo: f64,
    g: &G,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let delta = params.delta();
    let alpha = params.alpha();
    let p = exponent(alpha);
    let scale = p * delta.powf(-2.0 * alpha);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        scale * g(delta * u.powf(p)) * u.powf(-1.0 - 2.0 * alpha * p)
    };
    let u_lo = (y_lo / delta).powf(1.0 / p);
    Ok(adaptive_integrate(&integrand, u_lo, 1.0, spec)?.value)
}

/// Angular mean data of 1 − e^{iξ·y} for |y| = y: returns (Re, Im) of
/// ∫_{S^{N−1}} (1 − e^{i y ξ·n}) dn.
fn planewave_angular(dim: Dimension, xi: &[f64], y: f64) -> (f64, f64) {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    match dim {
        Dimension::One => {
            let a = y * xi[0];
            (2.0 * special::one_minus_cos(a), -a.sin() - (-a).sin())
        }
        Dimension::Two => {
            // Antipodal directions are taken as exact pairs n, −n.
            let half = 2 * (8 + (norm * y).ceil() as usize);
            let dt = PI / half as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..half {
                let (s, c) = (j as f64 * dt).sin_cos();
                let phase = y * (xi[0] * c + xi[1] * s);
                let opposite = y * (xi[0] * -c + xi[1] * -s);
                re += special::one_minus_cos(phase) + special::one_minus_cos(opposite);
                im -= phase.sin() + opposite.sin();
            }
            (re * dt, im * dt)
        }
        Dimension::Three => {
            let perp = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            let n = 2 * (16 + (norm * y).ceil() as usize);
            let (nodes, weights) = gauss_legendre(n);
            let (mut re, mut im) = (0.0, 0.0);
            for (nu, w) in nodes.iter().zip(&weights).filter(|(nu, _)| **nu > 0.0) {
                let b = y * perp * (1.0 - nu * nu).max(0.0).sqrt();
                let deficit = special::one_minus_j0(b);
                let bessel = special::j0(b);
                for a in [y * xi[2] * nu, y * xi[2] * -nu] {
                    re += w * (special::one_minus_cos(a) + a.cos() * deficit);
                    im -= w * a.sin() * bessel;
                }
            }
            (2.0 * PI * re, 2.0 * PI * im)
        }
    }
}

/// −2κ ∫_{B_δ(0)} (1 − e^{iξ·y}) / |y|^{N+2α} dy.
pub fn k_planewave_multiplier(dim: Dimension, params: &MaterialParams, xi: &[f64]) -> Result<Complex64> {
    check_position(dim, xi)?;
    if xi.iter().all(|&v| v == 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-300);
    let re = radial_integral(params, 0.0, &|y| planewave_angular(dim, xi, y).0, &spec)?;
    // The imaginary part cancels pointwise by symmetry; a fixed rule suffices.
    let alpha = params.alpha();
    let p = exponent(alpha);
    let delta = params.delta();
    let im: f64 = GaussRule::new(20)
        .composite_nodes(0.0, 1.0, 32)
        .into_iter()
        .map(|(u, w)| {
            let y = delta * u.powf(p);
            w * p * delta.powf(-2.0 * alpha) * planewave_angular(dim, xi, y).1 * u.powf(-1.0 - 2.0 * alpha * p)
        })
        .sum();
    Ok(Complex64::new(re, im) * (-2.0 * params.kappa()))
}

/// A plane-wave comparison between direct cubature and the dispersion
/// relation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveCheck {
    pub dim: Dimension,
    pub params: MaterialParams,
    pub xi_vector: Vec<f64>,
    pub multiplier_direct: Complex64,
    pub multiplier_spectral: f64,
    pub residual: f64,
}

pub fn plane_wave_check(dim: Dimension, params: &MaterialParams, xi: &[f64]) -> Result<PlaneWaveCheck> {
    let direct = k_planewave_multiplier(dim, params, xi)?;
    let modulus = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let spectral = -params.rho() * dispersion::omega_squared(dim, params, modulus)?;
    Ok(PlaneWaveCheck {
        dim,
        params: *params,
        xi_vector: xi.to_vec(),
        multiplier_direct: direct,
        multiplier_spectral: spectral,
        residual: (direct - spectral).norm(),
    })
}

/// Angular integral of f(x) − f(x + y n) over directions n.
fn difference_angular<F>(dim: Dimension, field: &F, x: &[f64], fx: f64, y: f64, opts: &OracleOptions) -> f64
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    match dim {
        Dimension::One => 2.0 * fx - field(&[x[0] + y]) - field(&[x[0] - y]),
        Dimension::Two => {
            let m = opts.azimuths;
            let dt = 2.0 * PI / m as f64;
            (0..m)
                .map(|j| {
                    let (s, c) = (j as f64 * dt).sin_cos();
                    fx - field(&[x[0] + y * c, x[1] + y * s])
                })
                .sum::<f64>()
                * dt
        }
        Dimension::Three => {
            let (nodes, weights) = gauss_legendre(opts.polar_nodes);
            let m = opts.azimuths;
            let dp = 2.0 * PI / m as f64;
            let mut total = 0.0;
            for (nu, w) in nodes.iter().zip(&weights) {
                let st = (1.0 - nu * nu).max(0.0).sqrt();
                for j in 0..m {
                    let (s, c) = (j as f64 * dp).sin_cos();
                    let p = [x[0] + y * st * c, x[1] + y * st * s, x[2] + y * nu];
                    total += w * dp * (fx - field(&p));
                }
            }
            total
        }
    }
}

/// −2κ ∫_{B_δ(x)} (f(x) − f(x′)) / |x′ − x|^{N+2α} dx′ for a sampled field.
///
/// Below y₀ = 10⁻³δ the angular difference is replaced by its even
/// two-term expansion c₂y² + c₄y⁴, fitted at y₀ and 2y₀ and integrated
/// exactly.
pub fn k_apply_sampled<F>(
    dim: Dimension,
    params: &MaterialParams,
    field: &F,
    x: &[f64],
    opts: &OracleOptions,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    check_position(dim, x)?;
    if opts.azimuths == 0 || opts.polar_nodes == 0 {
        return Err(Error::invalid("angular node counts must be positive"));
    }
    let fx = field(x);
    if !fx.is_finite() {
        return Err(Error::invalid("field is not finite at the evaluation point"));
    }
    let alpha = params.alpha();
    let delta = params.delta();
    let b = |y: f64| difference_angular(dim, field, x, fx, y, opts);

    let y0 = 1e-3 * delta;
    let b1 = b(y0);
    let b2 = b(2.0 * y0);
    let c4 = (b2 - 4.0 * b1) / 12.0;
    let c2 = b1 - c4;
    let near = c2 * y0.powf(-2.0 * alpha) / (2.0 - 2.0 * alpha) + c4 * y0.powf(-2.0 * alpha) / (4.0 - 2.0 * alpha);

    let magnitude = b(delta).abs().max(b1.abs()).max(fx.abs()).max(f64::MIN_POSITIVE);
    let spec = QuadratureSpec::default()
        .with_rel_tol(opts.rel_tol)
        .with_abs_tol(1e-14 * magnitude * delta.powf(-2.0 * alpha));
    let far = radial_integral(params, y0, &b, &spec)?;
    Ok(-2.0 * params.kappa() * (near + far))
}

/// |D²ₜu − K u / ρ| at (t, x) for the spectral solution of `data`, with
/// D²ₜ the centred second difference of step h.
pub fn evolution_residual(
    dim: Dimension,
    params: &MaterialParams,
    data: &InitialData,
    t: f64,
    x: &[f64],
    h: f64,
    opts: &OracleOptions,
) -> Result<f64> {
    check_position(dim, x)?;
    if !(h > 0.0 && h.is_finite()) || !t.is_finite() {
        return Err(Error::invalid(format!("need finite t and h > 0 (got t = {t}, h = {h})")));
    }
    let norm = |p: &[f64]| p.iter().map(|v| v * v).sum::<f64>().sqrt();
    let reach = Reach {
        r_max: norm(x) + params.delta(),
        t_max: t.abs() + h,
    };
    let solver_opts = SolverOptions::default();
    let (second_diff, ku) = match data {
        InitialData::Radial { v0, v1 } => {
            let synth = RadialSynthesizer::new(dim, params, v0, v1, reach, &solver_opts)?;
            let r = norm(x);
            let d2 = (synth.eval(t + h, r) - 2.0 * synth.eval(t, r) + synth.eval(t - h, r)) / (h * h);
            let field = |p: &[f64]| synth.eval(t, norm(p));
            (d2, k_apply_sampled(dim, params, &field, x, opts)?)
        }
        InitialData::Multipole(set) => {
            if dim != Dimension::Three {
                return Err(Error::invalid("multipole initial data requires dim = 3"));
            }
            let synth = AnisotropicSynthesizer::new(params, set, reach, &solver_opts)?;
            let at = |s: f64, p: &[f64]| {
                let r = norm(p);
                let theta = if r == 0.0 { 0.0 } else { (p[2] / r).clamp(-1.0, 1.0).acos() };
                synth.eval(s, r, theta, p[1].atan2(p[0]))
            };
            let d2 = (at(t + h, x) - 2.0 * at(t, x) + at(t - h, x)) / (h * h);
            let field = |p: &[f64]| at(t, p);
            (d2, k_apply_sampled(dim, params, &field, x, opts)?)
        }
    };
    Ok((second_diff - ku / params.rho()).abs())
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub check: String,
    pub dim: Dimension,
    pub alpha: f64,
    pub xi_delta: f64,
    pub value: f64,
    pub reference: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const VERIFY_CSV_HEADER: &str = "check,dim,alpha,xi_delta,value,reference,rel_err,pass";

fn row(check: &str, dim: Dimension, alpha: f64, xi_delta: f64, value: f64, reference: f64, tol: f64) -> VerifyRow {
    let rel_err = if reference == 0.0 {
        (value - reference).abs()
    } else {
        ((value - reference) / reference).abs()
    };
    VerifyRow {
        check: check.to_string(),
        dim,
        alpha,
        xi_delta,
        value,
        reference,
        rel_err,
        tolerance: tol,
        pass: rel_err < tol,
    }
}

fn unit_direction(dim: Dimension, k: usize) -> Vec<f64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    match dim {
        Dimension::One => vec![1.0],
        Dimension::Two => {
            let a = 0.3 + golden * k as f64;
            vec![a.cos(), a.sin()]
        }
        Dimension::Three => {
            let z = 0.9 - 0.45 * k as f64;
            let r = (1.0 - z * z).sqrt();
            let a = 0.3 + golden * k as f64;
            vec![r * a.cos(), r * a.sin(), z]
        }
    }
}

pub const VERIFY_ALPHAS: [f64; 3] = [0.1, 0.5, 0.9];
pub const VERIFY_XI_DELTAS: [f64; 3] = [0.1, 1.0, 10.0];

/// The verification matrix for unit κ, ρ, δ. Tolerances are multiplied by
/// `tolerance_scale`.
///
/// Checks: `planewave` (direct multiplier against −ρω²), `realness`
/// (|Im|/|Re| of the multiplier), `rotation` (2D/3D multipliers along
/// four further directions), `series_quadrature` (the two dispersion
/// routes at ξδ = 1) and `closed_form_tail` (Γ forms against the tail
/// quadrature, xi_delta reported as inf).
pub fn verification_matrix(tolerance_scale: f64) -> Result<Vec<VerifyRow>> {
    let mut jobs: Vec<(Dimension, f64, f64)> = Vec::new();
    for dim in Dimension::ALL {
        for alpha in VERIFY_ALPHAS {
            for s in VERIFY_XI_DELTAS {
                jobs.push((dim, alpha, s));
            }
        }
    }
    let per_job: Vec<Result<Vec<VerifyRow>>> = jobs
        .par_iter()
        .map(|&(dim, alpha, s)| {
            let params = MaterialParams::unit(alpha)?;
            let e = unit_direction(dim, 0);
            let xi: Vec<f64> = e.iter().map(|c| c * s).collect();
            let check = plane_wave_check(dim, &params, &xi)?;
            let re = check.multiplier_direct.re;
            let mut rows = vec![
                row("planewave", dim, alpha, s, re, check.multiplier_spectral, 1e-7 * tolerance_scale),
                row("realness", dim, alpha, s, check.multiplier_direct.im.abs() / re.abs(), 0.0, 1e-10 * tolerance_scale),
            ];
            if dim != Dimension::One {
                let mut worst = 0.0f64;
                for k in 1..=4 {
                    let xi: Vec<f64> = unit_direction(dim, k).iter().map(|c| c * s).collect();
                    let other = k_planewave_multiplier(dim, &params, &xi)?.re;
                    worst = worst.max(((other - re) / re).abs());
                }
                rows.push(row("rotation", dim, alpha, s, re * (1.0 + worst), re, 1e-9 * tolerance_scale));
            }
            if s == 1.0 {
                let series = dispersion::omega_squared_series(dim, &params, s)?;
                let quad = dispersion::omega_squared_quadrature(dim, &params, s)?;
                rows.push(row("series_quadrature", dim, alpha, s, series, quad, 1e-9 * tolerance_scale));
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_job {
        rows.extend(r?);
    }
    for dim in Dimension::ALL {
        for alpha in [0.1, 0.3, 0.7, 0.9] {
            let params = MaterialParams::unit(alpha)?;
            let closed = dispersion::high_freq_closed_form(dim, &params)?;
            let quad = dispersion::high_freq_quadrature(dim, &params)?;
            rows.push(row("closed_form_tail", dim, alpha, f64::INFINITY, closed, quad, 1e-6 * tolerance_scale));
        }
    }
    Ok(rows)
}

/// Writes the report; returns the number of failing rows.
pub fn write_verify_csv<W: Write>(rows: &[VerifyRow], mut out: W) -> io::Result<usize> {
    writeln!(out, "{VERIFY_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.check,
            r.dim.n(),
            fmt_f64(r.alpha),
            fmt_f64(r.xi_delta),
            fmt_f64(r.value),
            fmt_f64(r.reference),
            fmt_f64(r.rel_err),
            r.pass
        )?;
    }
    Ok(rows.iter().filter(|r| !r.pass).count())
}
