//! Run configuration: a `key = value` file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use peridyn::{Dimension, MaterialParams};

use crate::CliError;

/// Kind of initial displacement; the initial velocity is always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    GaussianRadial,
    Dipole,
}

impl FromStr for IcKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "gaussian-radial" | "gaussian" => Ok(IcKind::GaussianRadial),
            "dipole" => Ok(IcKind::Dipole),
            other => Err(CliError::Validation(format!(
                "unknown initial condition `{other}` (expected gaussian-radial or dipole)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `None` means: 3 for dipole data, 2 otherwise.
    pub dim: Option<usize>,
    pub kappa: f64,
    pub rho: f64,
    pub delta: f64,
    /// `None` means 0.5, or the `alphas` list for tables.
    pub alpha: Option<f64>,
    pub sigma: f64,
    pub times: Vec<f64>,
    pub ic: IcKind,
    pub ell_max: usize,
    pub grid_n: usize,
    pub grid_rmax: f64,
    pub grid_ntheta: usize,
    pub grid_nphi: usize,
    /// Wavenumber samples for the dispersion table.
    pub xi_points: usize,
    /// Dimensions and exponents tabulated by `tables`.
    pub dims: Option<Vec<usize>>,
    pub alphas: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: None,
            kappa: 1.0,
            rho: 1.0,
            delta: 1.0,
            alpha: None,
            sigma: 1.0,
            times: vec![0.0, 1.0, 2.0],
            ic: IcKind::GaussianRadial,
            ell_max: 8,
            grid_n: 201,
            grid_rmax: 10.0,
            grid_ntheta: 13,
            grid_nphi: 1,
            xi_points: 141,
            dims: None,
            alphas: None,
            out: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("`{key}`: cannot parse `{}`", value.trim())))
}

/// Comma- or whitespace-separated list; an empty value is an empty list.
pub fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "dim" => self.dim = Some(parse_num(key, value)?),
            "kappa" => self.kappa = parse_num(key, value)?,
            "rho" => self.rho = parse_num(key, value)?,
            "delta" => self.delta = parse_num(key, value)?,
            "alpha" => self.alpha = Some(parse_num(key, value)?),
            "sigma" => self.sigma = parse_num(key, value)?,
            "times" => self.times = parse_list(key, value)?,
            "ic" => self.ic = value.parse()?,
            "lmax" | "ell_max" => self.ell_max = parse_num(key, value)?,
            "grid_n" => self.grid_n = parse_num(key, value)?,
            "grid_rmax" => self.grid_rmax = parse_num(key, value)?,
            "grid_ntheta" => self.grid_ntheta = parse_num(key, value)?,
            "grid_nphi" => self.grid_nphi = parse_num(key, value)?,
            "xi_points" => self.xi_points = parse_num(key, value)?,
            "dims" => self.dims = Some(parse_list(key, value)?),
            "alphas" => self.alphas = Some(parse_list(key, value)?),
            "out" | "output" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(CliError::Validation(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a configuration text. `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| CliError::Validation(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    pub fn dimension(&self) -> Result<Dimension, CliError> {
        let n = self.dim.unwrap_or(match self.ic {
            IcKind::Dipole => 3,
            IcKind::GaussianRadial => 2,
        });
        Ok(Dimension::new(n)?)
    }

    pub fn alpha_or_default(&self) -> f64 {
        self.alpha.unwrap_or(0.5)
    }

    pub fn params(&self) -> Result<MaterialParams, CliError> {
        self.params_with_alpha(self.alpha_or_default())
    }

    pub fn params_with_alpha(&self, alpha: f64) -> Result<MaterialParams, CliError> {
        Ok(MaterialParams::new(self.kappa, self.rho, self.delta, alpha)?)
    }

    pub fn table_dims(&self) -> Result<Vec<Dimension>, CliError> {
        let dims = match (&self.dims, self.dim) {
            (Some(list), _) => list.clone(),
            (None, Some(d)) => vec![d],
            (None, None) => vec![1, 2, 3],
        };
        dims.into_iter().map(|d| Ok(Dimension::new(d)?)).collect()
    }

    pub fn table_alphas(&self) -> Vec<f64> {
        match (&self.alphas, self.alpha) {
            (Some(list), _) => list.clone(),
            (None, Some(a)) => vec![a],
            (None, None) => vec![0.9, 0.5, 0.1],
        }
    }

    /// Checks every parameter before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |msg: String| Err(CliError::Validation(msg));
        self.dimension()?;
        self.params()?;
        for alpha in self.table_alphas() {
            self.params_with_alpha(alpha)?;
        }
        self.table_dims()?;
        if self.ic == IcKind::Dipole && self.dim.is_some_and(|d| d != 3) {
            return invalid(format!("dipole initial data requires dim = 3 (got {})", self.dim.unwrap_or(0)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return invalid(format!("sigma must be positive and finite (got {})", self.sigma));
        }
        if self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return invalid("times must be finite and nonnegative".into());
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return invalid("times must be sorted nondecreasing".into());
        }
        if self.ell_max > peridyn::special::MAX_DEGREE {
            return invalid(format!(
                "lmax {} exceeds the supported maximum {}",
                self.ell_max,
                peridyn::special::MAX_DEGREE
            ));
        }
        if self.ic == IcKind::Dipole && self.ell_max < 1 {
            return invalid("dipole initial data needs lmax >= 1".into());
        }
        if self.grid_n == 0 || self.grid_ntheta == 0 || self.grid_nphi == 0 || self.xi_points == 0 {
            return invalid("grid sizes must be positive".into());
        }
        if !(self.grid_rmax > 0.0 && self.grid_rmax.is_finite()) {
            return invalid(format!("grid_rmax must be positive and finite (got {})", self.grid_rmax));
        }
        Ok(())
    }

    /// `grid_n` radii spread evenly over [0, grid_rmax].
    pub fn radii(&self) -> Vec<f64> {
        if self.grid_n == 1 {
            return vec![0.0];
        }
        (0..self.grid_n)
            .map(|k| self.grid_rmax * k as f64 / (self.grid_n - 1) as f64)
            .collect()
    }
}
