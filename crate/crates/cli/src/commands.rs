use peridyn::dispersion::{
    dispersion_table, high_freq_coefficient, large_scale_group_velocity, log_grid, low_freq_coefficient,
};
use peridyn::export::fmt_f64;
use peridyn::initial::{dipole_initial_condition, gaussian_spectrum, RadialSpectrum};
use peridyn::oracle::{verification_matrix, write_verify_csv};
use peridyn::solver::{field_snapshot, write_snapshots_csv, AngularGrid, EvolutionRequest, InitialData, SolverOptions};

use crate::config::{IcKind, RunConfig};
use crate::CliError;

/// Range of ξδ covered by the dispersion table.
pub const XI_DELTA_RANGE: (f64, f64) = (1e-3, 1e4);

pub const TABLES_CSV_HEADER: &str = "dim,alpha,low_freq_coefficient,high_freq_coefficient,vg_large_scale";

fn utf8(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("CSV output is ASCII")
}

fn in_memory(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<memory>".into(),
        source: e,
    }
}

pub fn cmd_dispersion(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let dim = cfg.dimension()?;
    let params = cfg.params()?;
    let (lo, hi) = XI_DELTA_RANGE;
    let grid: Vec<f64> = log_grid(lo, hi, cfg.xi_points)
        .into_iter()
        .map(|s| s / params.delta())
        .collect();
    let table = dispersion_table(dim, &params, &grid)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf).map_err(in_memory)?;
    Ok(utf8(buf))
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let dim = cfg.dimension()?;
    let data = match cfg.ic {
        IcKind::GaussianRadial => InitialData::Radial {
            v0: gaussian_spectrum(cfg.sigma, dim)?,
            v1: RadialSpectrum::zero(),
        },
        IcKind::Dipole => InitialData::Multipole(dipole_initial_condition(cfg.sigma)?),
    };
    let req = EvolutionRequest {
        dim,
        params: cfg.params()?,
        data,
        times: cfg.times.clone(),
        radii: cfg.radii(),
        angles: AngularGrid::uniform(cfg.grid_ntheta, cfg.grid_nphi)?,
        options: SolverOptions {
            ell_max: cfg.ell_max,
            ..SolverOptions::default()
        },
    };
    let snaps = field_snapshot(&req)?;
    let mut buf = Vec::new();
    if snaps.is_empty() {
        let header = match cfg.ic {
            IcKind::GaussianRadial => peridyn::solver::RADIAL_CSV_HEADER,
            IcKind::Dipole => peridyn::solver::SPHERICAL_CSV_HEADER,
        };
        return Ok(format!("{header}\n"));
    }
    write_snapshots_csv(&snaps, &mut buf).map_err(in_memory)?;
    Ok(utf8(buf))
}

pub fn cmd_tables(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let mut out = format!("{TABLES_CSV_HEADER}\n");
    for dim in cfg.table_dims()? {
        for alpha in cfg.table_alphas() {
            let params = cfg.params_with_alpha(alpha)?;
            let high = high_freq_coefficient(dim, &params);
            if !high.is_finite() {
                return Err(CliError::Validation(format!(
                    "high-frequency coefficient is not finite for N = {dim}, alpha = {alpha}"
                )));
            }
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                dim.n(),
                fmt_f64(alpha),
                fmt_f64(low_freq_coefficient(dim, &params)),
                fmt_f64(high),
                fmt_f64(large_scale_group_velocity(dim, &params)),
            ));
        }
    }
    Ok(out)
}

/// Report text and one description per failing row.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub csv: String,
    pub failures: Vec<String>,
}

pub fn cmd_verify(cfg: &RunConfig, tolerance_scale: f64) -> Result<VerifyOutcome, CliError> {
    cfg.validate()?;
    let rows = verification_matrix(tolerance_scale)?;
    let mut buf = Vec::new();
    write_verify_csv(&rows, &mut buf).map_err(in_memory)?;
    let failures = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "{} dim={} alpha={} xi_delta={} rel_err={:e} tolerance={:e}",
                r.check, r.dim, r.alpha, r.xi_delta, r.rel_err, r.tolerance
            )
        })
        .collect();
    Ok(VerifyOutcome { csv: utf8(buf), failures })
}
