use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Backend {
    Wkb,
    Exact,
    Both,
}

impl Backend {
    /// The single backends this selection expands to, in output order.
    pub fn expand(self) -> &'static [Backend] {
        match self {
            Backend::Wkb => &[Backend::Wkb],
            Backend::Exact => &[Backend::Exact],
            Backend::Both => &[Backend::Wkb, Backend::Exact],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Wkb => "wkb",
            Backend::Exact => "exact",
            Backend::Both => "both",
        }
    }
}

/// A grid uniform in `|ρ|` on the ray `arg ρ = rho_arg`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub ell: Complex64,
    pub eta: Complex64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_points: usize,
    pub rho_arg: f64,
    pub backend: Backend,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !(self.rho_min > 0.0 && self.rho_min.is_finite()) {
            return bad(format!("--rho-min must be positive, got {}", self.rho_min));
        }
        if !(self.rho_max >= self.rho_min && self.rho_max.is_finite()) {
            return bad(format!("--rho-max must be at least --rho-min, got {}", self.rho_max));
        }
        if self.rho_points < 2 {
            return bad(format!("--rho-points must be at least 2, got {}", self.rho_points));
        }
        if !(self.rho_arg > -PI && self.rho_arg < PI) {
            return bad(format!("--rho-arg must lie in (-pi, pi), got {}", self.rho_arg));
        }
        for (name, v) in [("ell", self.ell), ("eta", self.eta)] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<Complex64> {
        let n = self.rho_points;
        (0..n)
            .map(|k| {
                let m = self.rho_min + (self.rho_max - self.rho_min) * k as f64 / (n - 1) as f64;
                Complex64::from_polar(m, self.rho_arg)
            })
            .collect()
    }
}
