//! Explicit spectral solutions of ρ ∂ₜₜu = K u.
//!
//! Every Fourier mode evolves independently, û(ξ, t) = v̂⁰ cos ωt +
//! v̂¹ sin(ωt)/ω. Radial data is synthesized with the radial inverse
//! transform; anisotropic data in three dimensions goes through the
//! spherical-harmonic expansion channel by channel.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{self, Dimension, MaterialParams};
use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::initial::{MultipoleSet, RadialSpectrum, RADIAL_TRUNCATION};
use crate::quadrature::GaussRule;
use crate::special::{self, SphericalHarmonicIndex};

/// sin(ωt)/ω, continuous at ω = 0.
fn sinc_t(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-8 {
        t * (1.0 - x * x / 6.0)
    } else {
        x.sin() / omega
    }
}

/// û(t) = v̂⁰ cos ωt + v̂¹ sin(ωt)/ω.
pub fn evolve_mode(v0: Complex64, v1: Complex64, omega: f64, t: f64) -> Complex64 {
    v0 * (omega * t).cos() + v1 * sinc_t(omega, t)
}

/// ∂ₜû(t).
pub fn evolve_mode_rate(v0: Complex64, v1: Complex64, omega: f64, t: f64) -> Complex64 {
    let (s, c) = (omega * t).sin_cos();
    -v0 * (omega * s) + v1 * c
}

/// |∂ₜû|² + ω²|û|², conserved along the evolution.
pub fn mode_energy(v0: Complex64, v1: Complex64, omega: f64, t: f64) -> f64 {
    evolve_mode_rate(v0, v1, omega, t).norm_sqr() + omega * omega * evolve_mode(v0, v1, omega, t).norm_sqr()
}

/// Discretization controls for spectral synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Gauss–Legendre order per wavenumber panel.
    pub gl_order: usize,
    /// Wavenumbers are integrated up to this many spectral decay scales.
    pub spectral_cutoff: f64,
    /// Highest spherical-harmonic degree accepted.
    pub ell_max: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gl_order: 16,
            spectral_cutoff: 10.0,
            ell_max: 8,
        }
    }
}

/// Largest radius and time a synthesizer must resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reach {
    pub r_max: f64,
    pub t_max: f64,
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite and >= 0 (got {v})")))
    }
}

/// Composite wavenumber grid on [0, ξ_max] with panels of width
/// π/(2·max(r, δ, v·t)), v the large-scale group velocity, so that both
/// the kernel phase ξr and the mode phase ω(ξ)t are resolved.
fn wavenumber_nodes(
    dim: Dimension,
    params: &MaterialParams,
    xi_max: f64,
    reach: Reach,
    options: &SolverOptions,
) -> Result<Vec<(f64, f64, f64)>> {
    if options.gl_order == 0 {
        return Err(Error::invalid("gl_order must be positive"));
    }
    let speed = dispersion::large_scale_group_velocity(dim, params);
    let scale = reach.r_max.max(params.delta()).max(speed * reach.t_max);
    let panels = ((2.0 * xi_max * scale / PI).ceil() as usize).max(4);
    let rule = GaussRule::new(options.gl_order);
    let nodes = rule.composite_nodes(0.0, xi_max, panels);
    nodes
        .into_par_iter()
        .map(|(xi, w)| Ok((xi, w, dispersion::omega(dim, params, xi)?)))
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct RadialNode {
    xi: f64,
    weight: f64,
    omega: f64,
    v0: f64,
    v1: f64,
}

/// Radial inverse transform on a fixed wavenumber grid, so that repeated
/// evaluations at different (t, r) share nodes and frequencies.
#[derive(Debug, Clone)]
pub struct RadialSynthesizer {
    dim: Dimension,
    nodes: Vec<RadialNode>,
}

impl RadialSynthesizer {
    pub fn new(
        dim: Dimension,
        params: &MaterialParams,
        v0_hat: &RadialSpectrum,
        v1_hat: &RadialSpectrum,
        reach: Reach,
        options: &SolverOptions,
    ) -> Result<Self> {
        check_nonneg("r_max", reach.r_max)?;
        check_nonneg("t_max", reach.t_max)?;
        let decay = match (v0_hat.is_zero(), v1_hat.is_zero()) {
            (true, true) => return Ok(Self { dim, nodes: Vec::new() }),
            (false, true) => v0_hat.decay_scale(),
            (true, false) => v1_hat.decay_scale(),
            (false, false) => v0_hat.decay_scale().max(v1_hat.decay_scale()),
        };
        let xi_max = options.spectral_cutoff * decay;
        let grid = wavenumber_nodes(dim, params, xi_max, reach, options)?;
        let measure = |xi: f64| match dim {
            Dimension::One => 2.0,
            Dimension::Two => 2.0 * PI * xi,
            Dimension::Three => 4.0 * PI * xi * xi,
        };
        let nodes = grid
            .into_iter()
            .map(|(xi, w, omega)| RadialNode {
                xi,
                weight: w * measure(xi),
                omega,
                v0: v0_hat.eval(xi),
                v1: v1_hat.eval(xi),
            })
            .collect::<Vec<_>>();
        if nodes.iter().any(|n| !(n.v0.is_finite() && n.v1.is_finite())) {
            return Err(Error::invalid("initial spectrum is not finite on the wavenumber grid"));
        }
        Ok(Self { dim, nodes })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// u(t, r).
    pub fn eval(&self, t: f64, r: f64) -> f64 {
        self.nodes
            .iter()
            .map(|n| {
                let kernel = match self.dim {
                    Dimension::One => (n.xi * r).cos(),
                    Dimension::Two => special::j0(n.xi * r),
                    Dimension::Three => special::sph_jn(0, n.xi * r),
                };
                let mode = n.v0 * (n.omega * t).cos() + n.v1 * sinc_t(n.omega, t);
                n.weight * kernel * mode
            })
            .sum()
    }
}

/// u(t, r) for radial initial data given by its spectra.
pub fn radial_solution(
    dim: Dimension,
    params: &MaterialParams,
    v0_hat: &RadialSpectrum,
    v1_hat: &RadialSpectrum,
    t: f64,
    r: f64,
) -> Result<f64> {
    check_nonneg("r", r)?;
    if !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite (got {t})")));
    }
    let reach = Reach { r_max: r, t_max: t.abs() };
    let synth = RadialSynthesizer::new(dim, params, v0_hat, v1_hat, reach, &SolverOptions::default())?;
    Ok(synth.eval(t, r))
}

struct ChannelTransform {
    idx: SphericalHarmonicIndex,
    v0: Vec<Complex64>,
    v1: Vec<Complex64>,
}

/// Three-dimensional solution for multipole data,
///
/// u = (2/π) Σ Yₗₘ ∫₀^∞ ξ² jₗ(ξr) [cos(ωt) ṽ⁰ₗₘ + sin(ωt)/ω ṽ¹ₗₘ] dξ,
/// ṽₗₘ(ξ) = ∫₀^∞ vₗₘ(s) s² jₗ(ξs) ds.
///
/// The inner transforms are computed once at construction.
pub struct AnisotropicSynthesizer {
    /// (ξ, weight including (2/π)ξ², ω)
    nodes: Vec<(f64, f64, f64)>,
    channels: Vec<ChannelTransform>,
}

impl AnisotropicSynthesizer {
    pub fn new(
        params: &MaterialParams,
        data: &MultipoleSet,
        reach: Reach,
        options: &SolverOptions,
    ) -> Result<Self> {
        check_nonneg("r_max", reach.r_max)?;
        check_nonneg("t_max", reach.t_max)?;
        if data.ell_max() > options.ell_max {
            return Err(Error::invalid(format!(
                "multipole data has ell_max {} above the solver limit {}",
                data.ell_max(),
                options.ell_max
            )));
        }
        let sigma = data.decay_scale();
        let xi_max = options.spectral_cutoff / sigma;
        let grid = wavenumber_nodes(Dimension::Three, params, xi_max, reach, options)?;
        let nodes: Vec<(f64, f64, f64)> = grid
            .into_iter()
            .map(|(xi, w, om)| (xi, w * 2.0 / PI * xi * xi, om))
            .collect();

        let s_max = RADIAL_TRUNCATION * sigma;
        let s_panels = ((2.0 * xi_max * s_max / PI).ceil() as usize).max(4);
        let s_nodes = GaussRule::new(options.gl_order).composite_nodes(0.0, s_max, s_panels);

        let channels = data
            .channels()
            .map(|(idx, ch)| {
                let ell = idx.ell();
                let sample = |f: &dyn Fn(f64) -> Complex64| -> Vec<Complex64> {
                    s_nodes.iter().map(|&(s, w)| f(s) * (w * s * s)).collect()
                };
                let f0 = ch.v0.as_ref().map(|f| sample(f.as_ref()));
                let f1 = ch.v1.as_ref().map(|f| sample(f.as_ref()));
                let transform = |weighted: &Option<Vec<Complex64>>| -> Vec<Complex64> {
                    match weighted {
                        None => vec![Complex64::new(0.0, 0.0); nodes.len()],
                        Some(vals) => nodes
                            .par_iter()
                            .map(|&(xi, _, _)| {
                                s_nodes
                                    .iter()
                                    .zip(vals)
                                    .map(|(&(s, _), v)| v * special::sph_jn(ell, xi * s))
                                    .sum()
                            })
                            .collect(),
                    }
                };
                ChannelTransform {
                    idx: *idx,
                    v0: transform(&f0),
                    v1: transform(&f1),
                }
            })
            .collect();
        Ok(Self { nodes, channels })
    }

    /// Radial factors Rₗₘ(t, r), so that u = Re Σ Rₗₘ Yₗₘ.
    pub fn radial_factors(&self, t: f64, r: f64) -> Vec<(SphericalHarmonicIndex, Complex64)> {
        self.channels
            .iter()
            .map(|ch| {
                let ell = ch.idx.ell();
                let sum: Complex64 = self
                    .nodes
                    .iter()
                    .zip(ch.v0.iter().zip(&ch.v1))
                    .map(|(&(xi, w, om), (a, b))| {
                        let mode = a * (om * t).cos() + b * sinc_t(om, t);
                        mode * (w * special::sph_jn(ell, xi * r))
                    })
                    .sum();
                (ch.idx, sum)
            })
            .collect()
    }

    /// u(t, r, θ, φ).
    pub fn eval(&self, t: f64, r: f64, theta: f64, phi: f64) -> f64 {
        combine(&self.radial_factors(t, r), theta, phi)
    }
}

fn combine(factors: &[(SphericalHarmonicIndex, Complex64)], theta: f64, phi: f64) -> f64 {
    factors
        .iter()
        .map(|(idx, f)| (f * special::ylm(*idx, theta, phi)).re)
        .sum()
}

/// u(t, r, θ, φ) for multipole initial data in three dimensions.
pub fn anisotropic_solution_3d(
    params: &MaterialParams,
    data: &MultipoleSet,
    t: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<f64> {
    check_nonneg("r", r)?;
    check_angles(theta, phi)?;
    let reach = Reach { r_max: r, t_max: t.abs() };
    let synth = AnisotropicSynthesizer::new(params, data, reach, &SolverOptions::default())?;
    Ok(synth.eval(t, r, theta, phi))
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
        return Err(Error::invalid(format!("angles out of range (theta {theta}, phi {phi})")));
    }
    Ok(())
}

/// Initial data for [`field_snapshot`].
#[derive(Debug, Clone)]
pub enum InitialData {
    /// Spectra of radial displacement and velocity.
    Radial { v0: RadialSpectrum, v1: RadialSpectrum },
    /// Anisotropic data in three dimensions.
    Multipole(MultipoleSet),
}

/// Angular sample directions for anisotropic snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl AngularGrid {
    /// `n_theta` polar angles spanning [0, π] and `n_phi` azimuths in [0, 2π).
    pub fn uniform(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::invalid("angular grid needs at least one node per direction"));
        }
        let thetas = if n_theta == 1 {
            vec![0.0]
        } else {
            (0..n_theta).map(|i| PI * i as f64 / (n_theta - 1) as f64).collect()
        };
        let phis = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
        Ok(Self { thetas, phis })
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionRequest {
    pub dim: Dimension,
    pub params: MaterialParams,
    pub data: InitialData,
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    /// Used only for multipole data.
    pub angles: AngularGrid,
    pub options: SolverOptions,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Position {
    Radial { r: f64 },
    Spherical { r: f64, theta: f64, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub position: Position,
    pub value: f64,
}

/// The field sampled at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub samples: Vec<Sample>,
}

impl FieldSnapshot {
    /// (r, u) pairs of a radial snapshot.
    pub fn radial_profile(&self) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .filter_map(|s| match s.position {
                Position::Radial { r } => Some((r, s.value)),
                Position::Spherical { .. } => None,
            })
            .collect()
    }
}

pub const RADIAL_CSV_HEADER: &str = "t,r,u";
pub const SPHERICAL_CSV_HEADER: &str = "t,r,theta,phi,u";

fn validate_request(req: &EvolutionRequest) -> Result<()> {
    for &t in &req.times {
        check_nonneg("time", t)?;
    }
    for &r in &req.radii {
        check_nonneg("radius", r)?;
    }
    if req.radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("radii must be sorted nondecreasing"));
    }
    if let InitialData::Multipole(set) = &req.data {
        if req.dim != Dimension::Three {
            return Err(Error::invalid("multipole initial data requires dim = 3"));
        }
        if set.ell_max() > req.options.ell_max {
            return Err(Error::invalid(format!(
                "multipole data has ell_max {} above the solver limit {}",
                set.ell_max(),
                req.options.ell_max
            )));
        }
        for &th in &req.angles.thetas {
            check_angles(th, 0.0)?;
        }
        for &ph in &req.angles.phis {
            check_angles(0.0, ph)?;
        }
    }
    Ok(())
}

/// Samples the solution at every requested time.
pub fn field_snapshot(req: &EvolutionRequest) -> Result<Vec<FieldSnapshot>> {
    validate_request(req)?;
    if req.times.is_empty() {
        return Ok(Vec::new());
    }
    if req.radii.is_empty() {
        return Ok(req.times.iter().map(|&t| FieldSnapshot { time: t, samples: Vec::new() }).collect());
    }
    let reach = Reach {
        r_max: req.radii.iter().cloned().fold(0.0, f64::max),
        t_max: req.times.iter().cloned().fold(0.0, f64::max),
    };
    match &req.data {
        InitialData::Radial { v0, v1 } => {
            let synth = RadialSynthesizer::new(req.dim, &req.params, v0, v1, reach, &req.options)?;
            Ok(req
                .times
                .iter()
                .map(|&t| FieldSnapshot {
                    time: t,
                    samples: req
                        .radii
                        .par_iter()
                        .map(|&r| Sample {
                            position: Position::Radial { r },
                            value: synth.eval(t, r),
                        })
                        .collect(),
                })
                .collect())
        }
        InitialData::Multipole(set) => {
            let synth = AnisotropicSynthesizer::new(&req.params, set, reach, &req.options)?;
            Ok(req
                .times
                .iter()
                .map(|&t| {
                    let samples = req
                        .radii
                        .par_iter()
                        .flat_map_iter(|&r| {
                            let factors = synth.radial_factors(t, r);
                            let mut out = Vec::new();
                            for &theta in &req.angles.thetas {
                                for &phi in &req.angles.phis {
                                    out.push(Sample {
                                        position: Position::Spherical { r, theta, phi },
                                        value: combine(&factors, theta, phi),
                                    });
                                }
                            }
                            out
                        })
                        .collect();
                    FieldSnapshot { time: t, samples }
                })
                .collect())
        }
    }
}

/// Writes snapshots as CSV; the header depends on the sample kind.
pub fn write_snapshots_csv<W: Write>(snapshots: &[FieldSnapshot], mut out: W) -> io::Result<()> {
    let spherical = snapshots
        .iter()
        .flat_map(|s| s.samples.first())
        .any(|s| matches!(s.position, Position::Spherical { .. }));
    writeln!(out, "{}", if spherical { SPHERICAL_CSV_HEADER } else { RADIAL_CSV_HEADER })?;
    for snap in snapshots {
        for s in &snap.samples {
            match s.position {
                Position::Radial { r } => {
                    writeln!(out, "{},{},{}", fmt_f64(snap.time), fmt_f64(r), fmt_f64(s.value))?
                }
                Position::Spherical { r, theta, phi } => writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_f64(snap.time),
                    fmt_f64(r),
                    fmt_f64(theta),
                    fmt_f64(phi),
                    fmt_f64(s.value)
                )?,
            }
        }
    }
    Ok(())
}
