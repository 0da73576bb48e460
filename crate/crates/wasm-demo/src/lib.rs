//! wasm-bindgen bindings behind `www/index.html`. Every function returns a
//! flat `Float64Array` of fixed-width rows; failed evaluations are `NaN`.

use coulomb_wkb::exactref::exact_quad;
use coulomb_wkb::wkb::{phi_jet, wkb_quad};
use coulomb_wkb::{ComplexParams, CoulombQuad};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

/// Width of a `curves` row.
pub const CURVE_WIDTH: usize = 9;
/// Width of an `errors` row.
pub const ERROR_WIDTH: usize = 5;
/// Width of a `phase_map` row.
pub const PHASE_WIDTH: usize = 5;

fn grid(rho_min: f64, rho_max: f64, points: usize, arg: f64) -> Vec<Complex64> {
    let n = points.clamp(2, 4000);
    (0..n)
        .map(|k| Complex64::from_polar(rho_min + (rho_max - rho_min) * k as f64 / (n - 1) as f64, arg))
        .collect()
}

fn both(ell: Complex64, eta: Complex64, rho: Complex64) -> (Option<CoulombQuad>, Option<CoulombQuad>) {
    match ComplexParams::new(ell, eta, rho) {
        Ok(p) => (wkb_quad(&p).ok(), exact_quad(&p).ok()),
        Err(_) => (None, None),
    }
}

/// Rows `|ρ|, |F|, |G|, Re F, Re G` for WKB then the same four for exact.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn curves(
    ell_re: f64,
    ell_im: f64,
    eta_re: f64,
    eta_im: f64,
    rho_min: f64,
    rho_max: f64,
    points: usize,
    arg: f64,
) -> Vec<f64> {
    let (ell, eta) = (Complex64::new(ell_re, ell_im), Complex64::new(eta_re, eta_im));
    let mut out = Vec::with_capacity(points * CURVE_WIDTH);
    for rho in grid(rho_min, rho_max, points, arg) {
        out.push(rho.norm());
        let (w, e) = both(ell, eta, rho);
        for q in [w, e] {
            match q {
                Some(q) => out.extend([q.f.norm(), q.g.norm(), q.f.re, q.g.re]),
                None => out.extend([f64::NAN; 4]),
            }
        }
    }
    out
}

/// Rows `|ρ|` and the relative WKB error of `F, F', G, G'`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn errors(
    ell_re: f64,
    ell_im: f64,
    eta_re: f64,
    eta_im: f64,
    rho_min: f64,
    rho_max: f64,
    points: usize,
    arg: f64,
) -> Vec<f64> {
    let (ell, eta) = (Complex64::new(ell_re, ell_im), Complex64::new(eta_re, eta_im));
    let mut out = Vec::with_capacity(points * ERROR_WIDTH);
    for rho in grid(rho_min, rho_max, points, arg) {
        out.push(rho.norm());
        match both(ell, eta, rho) {
            (Some(w), Some(e)) => {
                for (a, b) in w.as_array().iter().zip(e.as_array()) {
                    out.push((a - b).norm() / b.norm().max(f64::MIN_POSITIVE));
                }
            }
            _ => out.extend([f64::NAN; 4]),
        }
    }
    out
}

/// Rows `x, Re φ, Im φ, Re φ', Im φ'` of the phase map along real `x`.
#[wasm_bindgen]
pub fn phase_map(a_re: f64, a_im: f64, x_min: f64, x_max: f64, points: usize) -> Vec<f64> {
    let a = Complex64::new(a_re, a_im);
    let n = points.clamp(2, 4000);
    let mut out = Vec::with_capacity(n * PHASE_WIDTH);
    for k in 0..n {
        let x = x_min + (x_max - x_min) * k as f64 / (n - 1) as f64;
        out.push(x);
        match phi_jet(Complex64::new(x, 0.0), a) {
            Ok(j) => out.extend([j.phi.re, j.phi.im, j.dphi.re, j.dphi.im]),
            Err(_) => out.extend([f64::NAN; 4]),
        }
    }
    out
}
