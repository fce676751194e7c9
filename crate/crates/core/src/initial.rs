//! Initial data: radial profiles and their spectra, and spherical-harmonic
//! multipole decompositions of anisotropic fields.
//!
//! Fourier convention: v̂(ξ) = (2π)^{−N} ∫ v(x) e^{ix·ξ} dx, inverse
//! v(x) = ∫ v̂(ξ) e^{−iξ·x} dξ. For radial data this reduces to
//!
//! ```text
//! N = 1:  v̂(ξ) = (1/π)   ∫₀^∞ v(r) cos(ξr) dr
//! N = 2:  v̂(ξ) = (1/2π)  ∫₀^∞ r v(r) J₀(ξr) dr
//! N = 3:  v̂(ξ) = (1/2π²) ∫₀^∞ r² v(r) j₀(ξr) dr
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dispersion::Dimension;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_integrate, gauss_legendre, QuadratureSpec};
use crate::special::{self, SphericalHarmonicIndex};

/// Profiles are integrated out to this many decay scales.
pub const RADIAL_TRUNCATION: f64 = 12.0;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
/// A scalar field on ℝ³ in spherical coordinates (r, θ, φ).
pub type FieldFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite (got {v})")))
    }
}

/// A radial function r ↦ h(r) with a characteristic width.
#[derive(Clone)]
pub struct RadialProfile {
    eval: RealFn,
    decay_scale: f64,
}

impl RadialProfile {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, decay_scale: f64) -> Result<Self> {
        check_scale("decay scale", decay_scale)?;
        Ok(Self {
            eval: Arc::new(eval),
            decay_scale,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn decay_scale(&self) -> f64 {
        self.decay_scale
    }
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("decay_scale", &self.decay_scale)
            .finish_non_exhaustive()
    }
}

/// A radial function of the Fourier modulus ξ. `decay_scale` is the
/// wavenumber scale beyond which the spectrum is negligible.
#[derive(Clone)]
pub struct RadialSpectrum {
    eval: RealFn,
    decay_scale: f64,
    zero: bool,
}

impl RadialSpectrum {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, decay_scale: f64) -> Result<Self> {
        check_scale("decay scale", decay_scale)?;
        Ok(Self {
            eval: Arc::new(eval),
            decay_scale,
            zero: false,
        })
    }

    /// The identically vanishing spectrum.
    pub fn zero() -> Self {
        Self {
            eval: Arc::new(|_| 0.0),
            decay_scale: 1.0,
            zero: true,
        }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        (self.eval)(xi)
    }

    pub fn decay_scale(&self) -> f64 {
        self.decay_scale
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// a·first + b·second.
    pub fn linear_combination(a: f64, first: &Self, b: f64, second: &Self) -> Self {
        let (f, g) = (first.eval.clone(), second.eval.clone());
        Self {
            eval: Arc::new(move |xi| a * f(xi) + b * g(xi)),
            decay_scale: first.decay_scale.max(second.decay_scale),
            zero: (first.zero || a == 0.0) && (second.zero || b == 0.0),
        }
    }
}

impl fmt::Debug for RadialSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialSpectrum")
            .field("decay_scale", &self.decay_scale)
            .field("zero", &self.zero)
            .finish_non_exhaustive()
    }
}

/// r ↦ (2π)^{N/2} exp(−r²/(2σ²)).
pub fn gaussian_profile(sigma: f64, dim: Dimension) -> Result<RadialProfile> {
    check_scale("sigma", sigma)?;
    let amp = (2.0 * PI).powf(dim.n() as f64 / 2.0);
    RadialProfile::new(move |r| amp * (-r * r / (2.0 * sigma * sigma)).exp(), sigma)
}

/// ξ ↦ σ^N exp(−ξ²σ²/2), the transform of [`gaussian_profile`].
pub fn gaussian_spectrum(sigma: f64, dim: Dimension) -> Result<RadialSpectrum> {
    check_scale("sigma", sigma)?;
    let amp = sigma.powi(dim.n() as i32);
    RadialSpectrum::new(move |xi| amp * (-xi * xi * sigma * sigma / 2.0).exp(), 1.0 / sigma)
}

fn transform_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-16)
}

/// Radial Fourier transform ĥ(ξ) of a profile, by quadrature over
/// [0, 12·decay_scale] in panels that resolve the kernel oscillation.
pub fn radial_spectrum(profile: &RadialProfile, dim: Dimension, xi: f64) -> Result<f64> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be finite and >= 0 (got {xi})")));
    }
    let reach = RADIAL_TRUNCATION * profile.decay_scale;
    let width = if xi > 0.0 {
        profile.decay_scale.min(PI / xi)
    } else {
        profile.decay_scale
    };
    let panels = (reach / width).ceil().max(1.0) as usize;
    let h = |r: f64| profile.eval(r);
    let integrand = |r: f64| match dim {
        Dimension::One => h(r) * (xi * r).cos(),
        Dimension::Two => r * h(r) * special::j0(xi * r),
        Dimension::Three => r * r * h(r) * special::sph_jn(0, xi * r),
    };
    let spec = transform_spec();
    let mut total = 0.0;
    for k in 0..panels {
        let a = reach * k as f64 / panels as f64;
        let b = reach * (k + 1) as f64 / panels as f64;
        total += adaptive_integrate(&integrand, a, b, &spec)?.value;
    }
    let norm = match dim {
        Dimension::One => 1.0 / PI,
        Dimension::Two => 1.0 / (2.0 * PI),
        Dimension::Three => 1.0 / (2.0 * PI * PI),
    };
    Ok(norm * total)
}

/// The transform of `profile` as a lazily evaluated spectrum. Evaluation
/// failures surface as NaN.
pub fn spectrum_of(profile: &RadialProfile, dim: Dimension) -> RadialSpectrum {
    let p = profile.clone();
    RadialSpectrum {
        eval: Arc::new(move |xi| radial_spectrum(&p, dim, xi).unwrap_or(f64::NAN)),
        decay_scale: 1.0 / profile.decay_scale,
        zero: false,
    }
}

/// Radial coefficient functions v⁰ₗₘ(r), v¹ₗₘ(r) of one channel; `None`
/// stands for an identically vanishing function.
#[derive(Clone, Default)]
pub struct MultipoleChannel {
    pub v0: Option<ComplexFn>,
    pub v1: Option<ComplexFn>,
}

impl MultipoleChannel {
    pub fn v0_at(&self, r: f64) -> Complex64 {
        self.v0.as_ref().map_or(Complex64::new(0.0, 0.0), |f| f(r))
    }

    pub fn v1_at(&self, r: f64) -> Complex64 {
        self.v1.as_ref().map_or(Complex64::new(0.0, 0.0), |f| f(r))
    }
}

/// Spherical-harmonic expansion of anisotropic initial data,
/// v(r, n) = Σ vₗₘ(r) Yₗₘ(n), truncated at `ell_max`.
#[derive(Clone)]
pub struct MultipoleSet {
    ell_max: usize,
    decay_scale: f64,
    channels: BTreeMap<SphericalHarmonicIndex, MultipoleChannel>,
}

impl fmt::Debug for MultipoleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultipoleSet")
            .field("ell_max", &self.ell_max)
            .field("decay_scale", &self.decay_scale)
            .field("channels", &self.channels.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl MultipoleSet {
    pub fn new(ell_max: usize, decay_scale: f64) -> Result<Self> {
        check_scale("decay scale", decay_scale)?;
        check_degree(ell_max)?;
        Ok(Self {
            ell_max,
            decay_scale,
            channels: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, idx: SphericalHarmonicIndex, channel: MultipoleChannel) -> Result<()> {
        if idx.ell() > self.ell_max {
            return Err(Error::invalid(format!(
                "channel degree {} exceeds the set's ell_max {}",
                idx.ell(),
                self.ell_max
            )));
        }
        self.channels.insert(idx, channel);
        Ok(())
    }

    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    /// Radial width of the data, in the units of r.
    pub fn decay_scale(&self) -> f64 {
        self.decay_scale
    }

    pub fn channel(&self, idx: SphericalHarmonicIndex) -> Option<&MultipoleChannel> {
        self.channels.get(&idx)
    }

    pub fn channels(&self) -> impl Iterator<Item = (&SphericalHarmonicIndex, &MultipoleChannel)> {
        self.channels.iter()
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Copy restricted to the given channel.
    pub fn only(&self, idx: SphericalHarmonicIndex) -> Self {
        let mut out = Self {
            ell_max: self.ell_max,
            decay_scale: self.decay_scale,
            channels: BTreeMap::new(),
        };
        if let Some(c) = self.channels.get(&idx) {
            out.channels.insert(idx, c.clone());
        }
        out
    }

    /// Drops channels whose coefficients stay below `threshold` in modulus
    /// at every sampled radius.
    pub fn prune(&mut self, radii: &[f64], threshold: f64) {
        self.channels.retain(|_, c| {
            radii
                .iter()
                .any(|&r| c.v0_at(r).norm() >= threshold || c.v1_at(r).norm() >= threshold)
        });
    }

    /// Σ v⁰ₗₘ(r) Yₗₘ(θ, φ), real part.
    pub fn displacement(&self, r: f64, theta: f64, phi: f64) -> f64 {
        self.channels
            .iter()
            .map(|(idx, c)| (c.v0_at(r) * special::ylm(*idx, theta, phi)).re)
            .sum()
    }

    /// Σ v¹ₗₘ(r) Yₗₘ(θ, φ), real part.
    pub fn velocity(&self, r: f64, theta: f64, phi: f64) -> f64 {
        self.channels
            .iter()
            .map(|(idx, c)| (c.v1_at(r) * special::ylm(*idx, theta, phi)).re)
            .sum()
    }
}

fn check_degree(ell_max: usize) -> Result<()> {
    if ell_max > special::MAX_DEGREE {
        Err(Error::invalid(format!(
            "ell_max {ell_max} exceeds the supported maximum {}",
            special::MAX_DEGREE
        )))
    } else {
        Ok(())
    }
}

/// Product rule on the unit sphere: Gauss–Legendre in cos θ and uniform
/// in φ, exact for band limit 2·`ell_max` in the integrand.
#[derive(Debug, Clone)]
pub struct SphereRule {
    /// (θ, φ, weight)
    nodes: Vec<(f64, f64, f64)>,
}

impl SphereRule {
    pub fn for_band_limit(ell_max: usize) -> Self {
        let (xs, ws) = gauss_legendre(ell_max + 1);
        let n_phi = 2 * ell_max + 2;
        let dphi = 2.0 * PI / n_phi as f64;
        let nodes = xs
            .iter()
            .zip(&ws)
            .flat_map(|(x, w)| {
                let theta = x.acos();
                (0..n_phi).map(move |j| (theta, j as f64 * dphi, w * dphi))
            })
            .collect();
        Self { nodes }
    }

    pub fn nodes(&self) -> &[(f64, f64, f64)] {
        &self.nodes
    }
}

fn project(field: FieldFn, rule: Arc<SphereRule>, idx: SphericalHarmonicIndex) -> ComplexFn {
    let conj_y: Arc<Vec<Complex64>> = Arc::new(
        rule.nodes()
            .iter()
            .map(|&(t, p, _)| special::ylm(idx, t, p).conj())
            .collect(),
    );
    Arc::new(move |r| {
        rule.nodes()
            .iter()
            .zip(conj_y.iter())
            .map(|(&(t, p, w), y)| y * (w * field(r, t, p)))
            .sum()
    })
}

/// vₗₘ(r) = ∫ field(r, n) Y*ₗₘ(n) dn for all ℓ ≤ `ell_max`, evaluated by
/// spherical quadrature whenever a coefficient is requested.
pub fn multipole_decompose(field: FieldFn, ell_max: usize, decay_scale: f64) -> Result<MultipoleSet> {
    multipole_decompose_pair(field, None, ell_max, decay_scale)
}

/// Decomposition of displacement and (optionally) velocity data.
pub fn multipole_decompose_pair(
    displacement: FieldFn,
    velocity: Option<FieldFn>,
    ell_max: usize,
    decay_scale: f64,
) -> Result<MultipoleSet> {
    check_degree(ell_max)?;
    let rule = Arc::new(SphereRule::for_band_limit(ell_max));
    let mut set = MultipoleSet::new(ell_max, decay_scale)?;
    for idx in SphericalHarmonicIndex::up_to(ell_max) {
        let channel = MultipoleChannel {
            v0: Some(project(displacement.clone(), rule.clone(), idx)),
            v1: velocity.clone().map(|v| project(v, rule.clone(), idx)),
        };
        set.insert(idx, channel)?;
    }
    Ok(set)
}

/// 4π²√(2/3) e^{−r²/(2σ²)} r, the dipole channel amplitude.
pub fn dipole_amplitude(sigma: f64, r: f64) -> f64 {
    4.0 * PI * PI * (2.0f64 / 3.0).sqrt() * (-r * r / (2.0 * sigma * sigma)).exp() * r
}

/// (2π)^{3/2} e^{−r²/(2σ²)} r cos θ as a single (ℓ, m) = (1, 0) channel
/// with vanishing velocity.
pub fn dipole_initial_condition(sigma: f64) -> Result<MultipoleSet> {
    check_scale("sigma", sigma)?;
    let mut set = MultipoleSet::new(1, sigma)?;
    set.insert(
        SphericalHarmonicIndex::new(1, 0)?,
        MultipoleChannel {
            v0: Some(Arc::new(move |r| Complex64::new(dipole_amplitude(sigma, r), 0.0))),
            v1: None,
        },
    )?;
    Ok(set)
}

/// The dipole field in closed form.
pub fn dipole_field(sigma: f64, r: f64, theta: f64) -> f64 {
    (2.0 * PI).powf(1.5) * (-r * r / (2.0 * sigma * sigma)).exp() * r * theta.cos()
}
