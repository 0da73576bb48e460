use std::fmt::Write as _;
use std::io::{self, Write};

use coulomb_wkb::CoulombQuad;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::CliError;
use crate::record::fmt17;
use crate::spec::{Backend, SweepSpec};
use crate::sweep::evaluate;

pub const FUNCTION_NAMES: [&str; 4] = ["F", "F'", "G", "G'"];

/// Denominators are clamped at this fraction of the local maximum of
/// `|exact|`; points below the clamp are flagged.
pub const FLOOR_FACTOR: f64 = 1e-12;
/// Half-width, in grid points, of the window defining the local maximum.
pub const FLOOR_WINDOW: usize = 5;
/// Largest fraction of the grid the exact backend may fail on.
pub const MAX_ORACLE_FAILURES: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct PointErrors {
    pub rho: Complex64,
    /// Relative errors of `F, F', G, G'`; `NaN` where either backend failed.
    pub errors: [f64; 4],
    pub flagged: [bool; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSummary {
    pub name: &'static str,
    pub median: f64,
    pub p90: f64,
    pub within_1pct: f64,
    pub within_2pct: f64,
    pub within_5pct: f64,
    pub counted: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub points: Vec<PointErrors>,
    pub summaries: Vec<FunctionSummary>,
    pub failed_points: usize,
}

/// Evaluates both backends on the grid of `spec` (its `backend` field is
/// ignored) and summarizes the WKB error.
pub fn compare(spec: &SweepSpec) -> Result<CompareReport, CliError> {
    spec.validate()?;
    let grid = spec.grid();
    let pairs: Vec<(Option<CoulombQuad>, Option<CoulombQuad>)> = grid
        .par_iter()
        .map(|&rho| {
            let w = evaluate(spec.ell, spec.eta, rho, Backend::Wkb).ok();
            let e = evaluate(spec.ell, spec.eta, rho, Backend::Exact).ok();
            (w, e)
        })
        .collect();
    let exact_failures = pairs.iter().filter(|p| p.1.is_none()).count();
    if exact_failures as f64 > MAX_ORACLE_FAILURES * grid.len() as f64 {
        return Err(CliError::Oracle(format!("{exact_failures} of {} points failed", grid.len())));
    }
    let (wkb, exact): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let report = compare_quads(&grid, &wkb, &exact);
    if report.summaries.iter().any(|s| s.counted == 0) {
        return Err(CliError::Numerical("no point left to compare".into()));
    }
    Ok(report)
}

/// Relative errors of `approx` against `exact`, point by point.
pub fn compare_quads(
    grid: &[Complex64],
    approx: &[Option<CoulombQuad>],
    exact: &[Option<CoulombQuad>],
) -> CompareReport {
    let n = grid.len();
    let magnitude = |k: usize, j: usize| exact[k].map_or(0.0, |q| q.as_array()[j].norm());
    let mut points = Vec::with_capacity(n);
    let mut failed_points = 0;
    for k in 0..n {
        let mut errors = [f64::NAN; 4];
        let mut flagged = [false; 4];
        match (approx[k], exact[k]) {
            (Some(a), Some(e)) => {
                let (a, e) = (a.as_array(), e.as_array());
                let lo = k.saturating_sub(FLOOR_WINDOW);
                let hi = (k + FLOOR_WINDOW).min(n - 1);
                for j in 0..4 {
                    let local_max = (lo..=hi).map(|i| magnitude(i, j)).fold(0.0, f64::max);
                    let floor = FLOOR_FACTOR * local_max;
                    flagged[j] = e[j].norm() < floor;
                    errors[j] = (a[j] - e[j]).norm() / e[j].norm().max(floor).max(f64::MIN_POSITIVE);
                }
            }
            _ => failed_points += 1,
        }
        points.push(PointErrors { rho: grid[k], errors, flagged });
    }
    let summaries = (0..4).map(|j| summarize(FUNCTION_NAMES[j], &points, j)).collect();
    CompareReport { points, summaries, failed_points }
}

fn summarize(name: &'static str, points: &[PointErrors], j: usize) -> FunctionSummary {
    let mut errs: Vec<f64> = points
        .iter()
        .filter(|p| !p.flagged[j] && !p.errors[j].is_nan())
        .map(|p| p.errors[j])
        .collect();
    errs.sort_by(f64::total_cmp);
    let flagged = points.iter().filter(|p| p.flagged[j]).count();
    let frac = |t: f64| {
        if errs.is_empty() {
            f64::NAN
        } else {
            errs.iter().filter(|&&e| e <= t).count() as f64 / errs.len() as f64
        }
    };
    FunctionSummary {
        name,
        median: median(&errs),
        p90: percentile(&errs, 0.9),
        within_1pct: frac(0.01),
        within_2pct: frac(0.02),
        within_5pct: frac(0.05),
        counted: errs.len(),
        flagged,
    }
}

/// Median of sorted values; `NaN` for none.
pub fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => sorted[n / 2],
        _ => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
    }
}

/// Nearest-rank percentile of sorted values.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

impl CompareReport {
    pub fn summary(&self, name: &str) -> Option<&FunctionSummary> {
        self.summaries.iter().find(|s| s.name == name)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "points: {}  failed: {}", self.points.len(), self.failed_points);
        let _ = writeln!(s, "fn   median       p90          <=1%    <=2%    <=5%    counted flagged");
        for f in &self.summaries {
            let _ = writeln!(
                s,
                "{:<4} {:<12.4e} {:<12.4e} {:<7.3} {:<7.3} {:<7.3} {:<7} {}",
                f.name, f.median, f.p90, f.within_1pct, f.within_2pct, f.within_5pct, f.counted, f.flagged
            );
        }
        s
    }

    /// Per-point errors: `rho_re,rho_im,err_f,err_fp,err_g,err_gp,flagged`
    /// where `flagged` lists the flagged functions separated by `|`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "rho_re,rho_im,err_f,err_fp,err_g,err_gp,flagged")?;
        for p in &self.points {
            let errs: Vec<String> = p.errors.iter().map(|&e| fmt17(e)).collect();
            let flags: Vec<&str> = (0..4).filter(|&j| p.flagged[j]).map(|j| FUNCTION_NAMES[j]).collect();
            writeln!(out, "{},{},{},{}", fmt17(p.rho.re), fmt17(p.rho.im), errs.join(","), flags.join("|"))?;
        }
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_backends_give_zero_error() {
        let grid: Vec<_> = (1..=6).map(|k| Complex64::new(k as f64, 0.0)).collect();
        let quads: Vec<_> = grid
            .iter()
            .map(|r| {
                Some(CoulombQuad { f: r.sin().into(), fp: r.cos().into(), g: r.cos().into(), gp: (-r.sin()).into() })
            })
            .collect();
        let rep = compare_quads(&grid, &quads, &quads);
        for s in &rep.summaries {
            assert_eq!(s.median, 0.0);
            assert_eq!(s.p90, 0.0);
            assert_eq!(s.within_1pct, 1.0);
        }
    }

    #[test]
    fn zeros_are_flagged_and_skipped() {
        let grid = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)];
        let q = |f: f64| Some(CoulombQuad { f: f.into(), fp: 1.0.into(), g: 1.0.into(), gp: 1.0.into() });
        let exact = vec![q(1.0), q(0.0), q(1.0)];
        let approx = vec![q(1.01), q(1e-3), q(1.01)];
        let rep = compare_quads(&grid, &approx, &exact);
        assert!(rep.points[1].flagged[0]);
        let f = rep.summary("F").unwrap();
        assert_eq!(f.counted, 2);
        assert!((f.median - 0.01).abs() < 1e-12);
    }

    #[test]
    fn order_statistics() {
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), 2.5);
        assert_eq!(median(&[1.0, 2.0, 3.0]), 2.0);
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(percentile(&v, 0.9), 9.0);
        assert!(median(&[]).is_nan());
    }
}
