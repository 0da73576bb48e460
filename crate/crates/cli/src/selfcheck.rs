use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use coulomb_wkb::airy::{airy_quad, airy_quad_asymptotic, airy_quad_series, AiryQuad, SERIES_RADIUS};
use coulomb_wkb::contour::{continue_path, default_max_step, handoff_mismatch, ContourPath};
use coulomb_wkb::exactref::{dual_route_check, exact_quad};
use coulomb_wkb::wkb::{phi_closed_form, phi_jet, phi_series, near_zero_threshold, wkb_quad, BranchState, Region};
use coulomb_wkb::{ComplexParams, CoulombQuad};
use num_complex::Complex64;
use rayon::prelude::*;

pub type AiryProbe = fn(Complex64) -> coulomb_wkb::Result<AiryQuad>;
pub type QuadProbe = fn(&ComplexParams) -> coulomb_wkb::Result<CoulombQuad>;

/// The evaluators under test. Tests swap in broken ones to make sure the
/// checks notice.
#[derive(Clone, Copy)]
pub struct Probes {
    pub airy: AiryProbe,
    pub wkb: QuadProbe,
    pub exact: QuadProbe,
}

impl Default for Probes {
    fn default() -> Self {
        Probes { airy: airy_quad, wkb: wkb_quad, exact: exact_quad }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfcheckReport {
    pub checks: Vec<CheckResult>,
    pub elapsed: Duration,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{status} {:<22} worst {:.3e} (bound {:.0e}) {}", c.name, c.worst, c.bound, c.detail);
        }
        let verdict = if self.passed() { "all checks passed" } else { "some checks failed" };
        let _ = writeln!(s, "{verdict} in {:.2} s", self.elapsed.as_secs_f64());
        s
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Points filling the disc `|z| ≤ radius` on a golden-angle spiral.
pub fn spiral(count: usize, radius: f64) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
            let t = (golden * k as f64).rem_euclid(2.0 * PI) - PI;
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// The two parameter sets and grids of the figures.
pub fn figure_grids() -> Vec<(Complex64, Complex64, Vec<Complex64>)> {
    let fig1 = (0..120).map(|k| c(1.0 + 59.0 * k as f64 / 119.0, 0.0)).collect();
    let fig2 = (0..80).map(|k| Complex64::from_polar(2.0 + 38.0 * k as f64 / 79.0, PI / 4.0)).collect();
    vec![(c(2.0, 0.0), c(10.0, 0.0), fig1), (c(2.0, 1.0), c(10.0, 1.0), fig2)]
}

struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, at: String::new() }
    }

    fn see(&mut self, value: f64, at: impl FnOnce() -> String) {
        if !(value <= self.value) {
            self.value = value;
            self.at = at();
        }
    }

    fn result(self, name: &'static str, bound: f64) -> CheckResult {
        CheckResult { name, passed: self.value <= bound, worst: self.value, bound, detail: self.at }
    }
}

fn airy_wronskian(p: &Probes) -> CheckResult {
    let mut w = Worst::new();
    for z in spiral(100, 15.0) {
        match (p.airy)(z) {
            Ok(q) => {
                let scale = PI * ((q.ai * q.bip).norm() + (q.aip * q.bi).norm());
                let err = (q.wronskian() * PI - 1.0).norm() / scale.max(1.0);
                w.see(err, || format!("at z = {z}"));
            }
            Err(e) => w.see(f64::INFINITY, || format!("at z = {z}: {e}")),
        }
    }
    w.result("airy-wronskian", 1e-11)
}

fn airy_seam() -> CheckResult {
    let mut w = Worst::new();
    for i in 0..64 {
        let z = Complex64::from_polar(SERIES_RADIUS, -PI + 2.0 * PI * (f64::from(i) + 0.5) / 64.0);
        let s = airy_quad_series(z);
        match airy_quad_asymptotic(z) {
            Ok(a) => {
                for (x, y) in [(s.ai, a.ai), (s.aip, a.aip), (s.bi, a.bi), (s.bip, a.bip)] {
                    w.see((x - y).norm() / y.norm(), || format!("at z = {z}"));
                }
            }
            Err(e) => w.see(f64::INFINITY, || format!("at z = {z}: {e}")),
        }
    }
    w.result("airy-seam", 1e-9)
}

fn coulomb_wronskian(name: &'static str, probe: QuadProbe, bound: f64) -> CheckResult {
    let mut w = Worst::new();
    for (ell, eta, grid) in figure_grids() {
        let errs: Vec<(Complex64, Result<f64, String>)> = grid
            .par_iter()
            .map(|&rho| {
                let r = ComplexParams::new(ell, eta, rho)
                    .and_then(|p| probe(&p))
                    .map(|q| q.scaled_wronskian_error())
                    .map_err(|e| e.to_string());
                (rho, r)
            })
            .collect();
        for (rho, r) in errs {
            match r {
                Ok(e) => w.see(e, || format!("at l = {ell}, eta = {eta}, rho = {rho}")),
                Err(e) => w.see(f64::INFINITY, || format!("at rho = {rho}: {e}")),
            }
        }
    }
    w.result(name, bound)
}

fn free_field(p: &Probes) -> CheckResult {
    let mut w = Worst::new();
    for rho in [c(0.5, 0.0), c(3.0, 0.0), c(17.0, 0.0), c(42.0, 0.0), c(80.0, 0.0), c(5.0, 2.0), c(30.0, -3.0)] {
        match ComplexParams::new(c(0.0, 0.0), c(0.0, 0.0), rho).and_then(|q| (p.exact)(&q)) {
            Ok(q) => {
                let want = [rho.sin(), rho.cos(), rho.cos(), -rho.sin()];
                for (got, want) in q.as_array().iter().zip(want) {
                    w.see((got - want).norm() / want.norm().max(1.0), || format!("at rho = {rho}"));
                }
            }
            Err(e) => w.see(f64::INFINITY, || format!("at rho = {rho}: {e}")),
        }
    }
    w.result("free-field", 1e-10)
}

fn a_zero_reduction() -> CheckResult {
    let mut w = Worst::new();
    for k in 0..=40 {
        let x = -0.9 + 10.9 * f64::from(k) / 40.0;
        let x = c(x, 0.0);
        match (phi_jet(x, c(0.0, 0.0)), phi_jet(x, c(1e-9, 0.0))) {
            (Ok(z), Ok(s)) => w.see((s.phi - z.phi).norm() / z.phi.norm().max(1e-300), || format!("at x = {x}")),
            _ => w.see(f64::INFINITY, || format!("at x = {x}")),
        }
    }
    w.result("a-zero-reduction", 1e-6)
}

fn phase_seams() -> CheckResult {
    let mut w = Worst::new();
    for a in [c(0.0, 0.0), c(0.3, 0.0), c(0.0129, 0.0116)] {
        let t = near_zero_threshold(a);
        for x in [c(t, 0.0), c(-t, 0.0), c(0.0, t), c(0.6 * t, -0.8 * t)] {
            let series = phi_series(x, a).phi;
            match phi_closed_form(x, a, Region::of(x), &BranchState::default()) {
                Ok(closed) => w.see((closed - series).norm() / t, || format!("series seam at x = {x}, a = {a}")),
                Err(e) => w.see(f64::INFINITY, || format!("at x = {x}: {e}")),
            }
        }
        for y in [0.02, 0.1, 0.3, -0.02, -0.1, -0.3] {
            let x = c(0.0, y);
            match handoff_mismatch(x, a) {
                Ok(m) => w.see(m * 1e-2, || format!("region handoff at x = {x}, a = {a}")),
                Err(e) => w.see(f64::INFINITY, || format!("at x = {x}: {e}")),
            }
        }
    }
    w.result("phase-seams", 1e-9)
}

fn phase_consistency() -> CheckResult {
    let mut w = Worst::new();
    for a in [c(0.0, 0.0), c(0.05, 0.0), c(0.3, 0.0), c(0.0143, 0.0091)] {
        for k in 0..60 {
            let x = c(-0.95 + 20.95 * f64::from(k) / 59.0, 0.0);
            if x.norm() < 1e-3 {
                continue;
            }
            match phi_jet(x, a) {
                Ok(j) => {
                    let scale = (j.dphi * j.dphi * j.phi).norm().max(1e-300);
                    w.see(j.first_order_residual(x, a).norm() / scale, || format!("at x = {x}, a = {a}"));
                }
                Err(e) => w.see(f64::INFINITY, || format!("at x = {x}: {e}")),
            }
        }
    }
    w.result("phase-consistency", 1e-9)
}

fn dual_route() -> CheckResult {
    let mut w = Worst::new();
    for (ell, eta, rho) in [(c(2.0, 0.0), c(10.0, 0.0), c(50.0, 0.0)), (c(2.0, 1.0), c(10.0, 1.0), Complex64::from_polar(50.0, PI / 4.0))] {
        match ComplexParams::new(ell, eta, rho).and_then(|p| dual_route_check(&p)) {
            Ok(r) => w.see(r.f_mismatch.max(r.h_mismatch), || format!("at l = {ell}, eta = {eta}, rho = {rho}")),
            Err(e) => w.see(f64::INFINITY, || format!("at rho = {rho}: {e}")),
        }
    }
    w.result("dual-route", 1e-7)
}

fn contour_closure() -> CheckResult {
    let mut w = Worst::new();
    let (ell, eta) = (c(2.0, 0.0), c(10.0, 0.0));
    let (lo, hi) = (c(5.0, -8.0), c(45.0, 8.0));
    let run = || -> coulomb_wkb::Result<f64> {
        let path = ContourPath::rectangle(lo, hi, default_max_step(ell, eta, lo)?)?;
        let pts = continue_path(ell, eta, &path)?;
        let (a, b) = (pts[0].quad.as_array(), pts[pts.len() - 1].quad.as_array());
        let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max) / scale)
    };
    match run() {
        Ok(d) => w.see(d, || "rectangle around the turning point".into()),
        Err(e) => w.see(f64::INFINITY, || e.to_string()),
    }
    w.result("contour-closure", 1e-8)
}

/// Runs every invariant check with the given evaluators.
pub fn selfcheck(probes: &Probes) -> SelfcheckReport {
    let start = Instant::now();
    let checks = vec![
        airy_wronskian(probes),
        airy_seam(),
        coulomb_wronskian("wkb-wronskian", probes.wkb, 1e-10),
        coulomb_wronskian("exact-wronskian", probes.exact, 1e-8),
        free_field(probes),
        a_zero_reduction(),
        phase_seams(),
        phase_consistency(),
        dual_route(),
        contour_closure(),
    ];
    SelfcheckReport { checks, elapsed: start.elapsed() }
}
