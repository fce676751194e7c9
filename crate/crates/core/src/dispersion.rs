//! Dispersion relation ω(ξ) of the linear peridynamic operator in
//! N = 1, 2, 3 dimensions, its asymptotic constants and group velocity.
//!
//! With s = ξδ and the kernel K_N ∈ {cos, J₀, j₀},
//!
//! ```text
//! ω²(ξ) = C_N κ / (ρ δ^{2α}) ∫₀¹ (1 − K_N(s z)) z^{−1−2α} dz,   C_N ∈ {4, 4π, 8π}
//! ```
//!
//! Two evaluation routes are provided. For s ≤ 1 the integrand's power
//! series is integrated term by term; above that the substituted form
//! C_N κ/ρ · ξ^{2α} ∫₀^s (1 − K_N(τ)) τ^{−1−2α} dτ is integrated numerically.

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::quadrature::{self, check_alpha, Kernel, QuadratureSpec};
use crate::special;

/// Constitutive parameters (κ, ρ, δ, α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    kappa: f64,
    rho: f64,
    delta: f64,
    alpha: f64,
}

impl MaterialParams {
    pub fn new(kappa: f64, rho: f64, delta: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("kappa", kappa), ("rho", rho), ("delta", delta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite (got {v})")));
            }
        }
        check_alpha(alpha)?;
        Ok(Self {
            kappa,
            rho,
            delta,
            alpha,
        })
    }

    /// κ = ρ = δ = 1 with the given α.
    pub fn unit(alpha: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, alpha)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Spatial dimension N ∈ {1, 2, 3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::One, Dimension::Two, Dimension::Three];

    pub fn new(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(Error::invalid(format!("dimension must be 1, 2 or 3 (got {n})"))),
        }
    }

    pub fn n(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn kernel(self) -> Kernel {
        match self {
            Dimension::One => Kernel::Cosine,
            Dimension::Two => Kernel::BesselJ0,
            Dimension::Three => Kernel::SphericalJ0,
        }
    }

    /// C_N: the angular measure folded into the dispersion integral.
    pub fn prefactor(self) -> f64 {
        match self {
            Dimension::One => 4.0,
            Dimension::Two => 4.0 * PI,
            Dimension::Three => 8.0 * PI,
        }
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.n())
    }
}

/// ξδ at and below which the series route is used.
pub const SERIES_CROSSOVER: f64 = 1.0;

/// Half-width of the α = 1/2 window where the Γ closed forms are replaced
/// by quadrature.
pub const HALF_ALPHA_WINDOW: f64 = 1e-3;

fn dispersion_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-13).with_abs_tol(1e-300)
}

fn check_xi(xi: f64) -> Result<()> {
    if xi >= 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("wavenumber must be finite and >= 0 (got {xi})")))
    }
}

/// ω²(ξ), dispatching between the series and quadrature routes.
pub fn omega_squared(dim: Dimension, params: &MaterialParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    if xi * params.delta <= SERIES_CROSSOVER {
        omega_squared_series(dim, params, xi)
    } else {
        omega_squared_quadrature(dim, params, xi)
    }
}

/// ω²(ξ) from the term-wise integrated power series
/// C_N κ/(ρδ^{2α}) Σ_{m≥1} (−1)^{m+1} cₘ s^{2m} / (2m − 2α).
///
/// Converges for every s but loses digits to cancellation once s ≫ 1.
pub fn omega_squared_series(dim: Dimension, params: &MaterialParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    let s = xi * params.delta;
    if s == 0.0 {
        return Ok(0.0);
    }
    let kernel = dim.kernel();
    let alpha = params.alpha;
    let s2 = s * s;
    let mut coeff = kernel.series_ratio(1) * s2;
    let mut sum = 0.0;
    for m in 1..400 {
        let mf = m as f64;
        let term = coeff / (2.0 * mf - 2.0 * alpha);
        let signed = if m % 2 == 1 { term } else { -term };
        sum += signed;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        coeff *= kernel.series_ratio(m + 1) * s2;
    }
    Ok(dim.prefactor() * params.kappa / (params.rho * params.delta.powf(2.0 * alpha)) * sum)
}

/// ω²(ξ) from C_N κ/ρ · ξ^{2α} ∫₀^{ξδ} (1 − K_N(τ)) τ^{−1−2α} dτ.
pub fn omega_squared_quadrature(dim: Dimension, params: &MaterialParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    let s = xi * params.delta;
    if s == 0.0 {
        return Ok(0.0);
    }
    let integral = quadrature::deficit_integral(dim.kernel(), params.alpha, s, &dispersion_spec())?;
    Ok(dim.prefactor() * params.kappa / params.rho * xi.powf(2.0 * params.alpha) * integral.value)
}

/// ω(ξ) = √ω²(ξ).
pub fn omega(dim: Dimension, params: &MaterialParams, xi: f64) -> Result<f64> {
    Ok(omega_squared(dim, params, xi)?.sqrt())
}

/// lim_{ξ→0} ξ⁻² ω²(ξ).
pub fn low_freq_coefficient(dim: Dimension, params: &MaterialParams) -> f64 {
    let base = params.kappa * params.delta.powf(2.0 * (1.0 - params.alpha))
        / ((1.0 - params.alpha) * params.rho);
    match dim {
        Dimension::One => base,
        Dimension::Two => PI / 2.0 * base,
        Dimension::Three => 2.0 * PI / 3.0 * base,
    }
}

/// lim_{ξ→∞} ξ^{−2α} ω²(ξ) from the Gamma-function closed forms.
///
/// For N = 1 and N = 3 the expressions are 0·∞ at α = 1/2 and this
/// returns [`Error::GammaPole`] there.
pub fn high_freq_closed_form(dim: Dimension, params: &MaterialParams) -> Result<f64> {
    let a = params.alpha;
    let ratio = params.kappa / params.rho;
    match dim {
        Dimension::One => Ok(-4.0 * ratio * (PI * a).cos() * special::gamma(-2.0 * a)?),
        Dimension::Two => Ok(-(2f64.powf(1.0 - 2.0 * a)) * PI * ratio * special::gamma(-a)?
            / special::gamma(1.0 + a)?),
        Dimension::Three => Ok(8.0 * PI * ratio * (PI * a).cos() * special::gamma(-1.0 - 2.0 * a)?),
    }
}

/// C_N κ/ρ ∫₀^∞ (1 − K_N(τ)) τ^{−1−2α} dτ by oscillatory-tail quadrature.
pub fn high_freq_quadrature(dim: Dimension, params: &MaterialParams) -> Result<f64> {
    let tail = quadrature::integrate_oscillatory_tail(dim.kernel(), params.alpha, f64::INFINITY)?;
    Ok(dim.prefactor() * params.kappa / params.rho * tail)
}

/// lim_{ξ→∞} ξ^{−2α} ω²(ξ).
///
/// Uses the closed forms, except within [`HALF_ALPHA_WINDOW`] of α = 1/2
/// for N = 1, 3 where the quadrature value is returned.
pub fn high_freq_coefficient(dim: Dimension, params: &MaterialParams) -> f64 {
    let near_half = (params.alpha - 0.5).abs() < HALF_ALPHA_WINDOW;
    if near_half && dim != Dimension::Two {
        return match high_freq_quadrature(dim, params) {
            Ok(v) => v,
            Err(e) => {
                let tail = e.best_estimate().unwrap_or(f64::NAN);
                dim.prefactor() * params.kappa / params.rho * tail
            }
        };
    }
    high_freq_closed_form(dim, params).expect("closed form is regular away from alpha = 1/2")
}

/// ω′(ξ) by a Richardson-extrapolated central difference. At ξ = 0 the
/// large-scale limit √(low_freq_coefficient) is returned.
pub fn group_velocity(dim: Dimension, params: &MaterialParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    if xi == 0.0 {
        return Ok(large_scale_group_velocity(dim, params));
    }
    let h = (1e-6f64).max(1e-4 * xi).min(0.5 * xi);
    let central = |h: f64| -> Result<f64> {
        Ok((omega(dim, params, xi + h)? - omega(dim, params, xi - h)?) / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// √(low_freq_coefficient): the speed of long-wavelength fronts.
pub fn large_scale_group_velocity(dim: Dimension, params: &MaterialParams) -> f64 {
    low_freq_coefficient(dim, params).sqrt()
}

/// One sampled row of a [`DispersionTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRow {
    pub xi: f64,
    pub omega_sq: f64,
    pub omega: f64,
    pub group_velocity: f64,
}

/// Sampled dispersion relation for one dimension and parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    pub params: MaterialParams,
    pub dim: Dimension,
    pub rows: Vec<DispersionRow>,
}

pub const DISPERSION_CSV_HEADER: &str = "xi,omega_sq,omega,vg";

impl DispersionTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{DISPERSION_CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(row.xi),
                fmt_f64(row.omega_sq),
                fmt_f64(row.omega),
                fmt_f64(row.group_velocity)
            )?;
        }
        Ok(())
    }
}

/// Tabulates ω², ω and v_g over a strictly increasing, nonnegative grid.
pub fn dispersion_table(dim: Dimension, params: &MaterialParams, xi_grid: &[f64]) -> Result<DispersionTable> {
    if let Some(&bad) = xi_grid.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(Error::invalid(format!("grid contains invalid wavenumber {bad}")));
    }
    if xi_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("wavenumber grid must be strictly increasing"));
    }
    let rows = xi_grid
        .par_iter()
        .map(|&xi| {
            let omega_sq = omega_squared(dim, params, xi)?;
            Ok(DispersionRow {
                xi,
                omega_sq,
                omega: omega_sq.sqrt(),
                group_velocity: group_velocity(dim, params, xi)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DispersionTable {
        params: *params,
        dim,
        rows,
    })
}

/// `n` logarithmically spaced points spanning [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}
