//! Reference Coulomb functions from their hypergeometric definitions and
//! from direct integration of the radial equation
//! `u'' = (ℓ(ℓ+1)/ρ² + 2η/ρ - 1) u`.
//!
//! `F` comes from the `₁F₁` power series near the origin and is carried
//! outward by the integrator when the series loses too much to cancellation.
//! `H^ω` comes from the `₂F₀` asymptotic series far out and is carried inward
//! along the ray through `ρ`, choosing `ω` so that `H^ω` is the solution that
//! grows in that direction; `G = H^ω - iωF`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complexops::log_gamma;
use crate::coulomb::{check_rho, ComplexParams, CoulombQuad, Omega};
use crate::error::{CoulombError, Result};
use crate::wkb::turning_geometry;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Term-to-sum ratio at which the `₁F₁` series stops.
pub const SERIES_TOLERANCE: f64 = 1e-15;
pub const SERIES_MAX_TERMS: usize = 10_000;
/// `Σ|t_n| / |Σ t_n|` beyond which `f_series` refuses to answer.
pub const CANCELLATION_LIMIT: f64 = 1e8;
/// Smallest-term ratio an asymptotic sum must reach.
pub const ASYMPTOTIC_TOLERANCE: f64 = 1e-10;
/// Local relative tolerance of the integrator.
pub const ODE_TOLERANCE: f64 = 1e-12;

// exact_quad only trusts series sums with at most this much cancellation.
const TRUSTED_CANCELLATION: f64 = 1e6;
const MAX_ODE_STEPS: usize = 400_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationConstants {
    /// Gamow factor `C_ℓ(η)`.
    pub c_l: Complex64,
    /// `ln C_ℓ(η)`, usable where `C_ℓ` itself under- or overflows.
    pub ln_c_l: Complex64,
    /// Coulomb phase shift `σ_ℓ(η)`.
    pub sigma_l: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    /// `|last term| / |sum|`.
    pub last_term_ratio: f64,
    /// `Σ|t_n| / |Σ t_n|`; 1 means no cancellation.
    pub cancellation: f64,
    pub converged: bool,
}

fn is_real(z: Complex64) -> bool {
    z.im == 0.0
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `σ_ℓ = (lnΓ(1+ℓ+iη) - lnΓ(1+ℓ-iη))/2i` and
/// `C_ℓ = 2^ℓ exp[(-πη + lnΓ(1+ℓ+iη) + lnΓ(1+ℓ-iη))/2 - lnΓ(2ℓ+2)]`.
pub fn norm_constants(ell: Complex64, eta: Complex64) -> Result<NormalizationConstants> {
    let g_plus = log_gamma(ell + 1.0 + I * eta)?;
    let g_minus = log_gamma(ell + 1.0 - I * eta)?;
    let g_den = log_gamma(2.0 * ell + 2.0)?;
    let mut sigma_l = (g_plus - g_minus) / (2.0 * I);
    let ln_c_l = ell * 2f64.ln() + (g_plus + g_minus - PI * eta) * 0.5 - g_den;
    let mut c_l = ln_c_l.exp();
    if is_real(ell) && is_real(eta) {
        sigma_l.im = 0.0;
        c_l.im = 0.0;
    }
    Ok(NormalizationConstants { c_l, ln_c_l, sigma_l })
}

/// `F` and `F'` from `C_ℓ ρ^{ℓ+1} e^{iωρ} ₁F₁(1+ℓ+iωη; 2ℓ+2; -2iωρ)`, using
/// `params.omega`.
pub fn f_series(params: &ComplexParams) -> Result<(Complex64, Complex64, SeriesDiagnostics)> {
    let (ell, eta, rho) = (params.ell, params.eta, params.rho);
    let w = params.omega.sign();
    let a = ell + 1.0 + I * w * eta;
    let b = 2.0 * ell + 2.0;
    let z = -2.0 * I * w * rho;

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 1.0;
    let mut quiet = 0;
    let mut n = 0usize;
    let mut ratio;
    let converged = loop {
        let denom = (b + n as f64) * (n as f64 + 1.0);
        if denom.norm() == 0.0 {
            return Err(CoulombError::Pole(b + n as f64));
        }
        term = term * (a + n as f64) * z / denom;
        n += 1;
        sum += term;
        dsum += term * n as f64;
        abs_sum += term.norm();
        ratio = term.norm() / sum.norm();
        if term.norm() == 0.0 {
            break true;
        }
        quiet = if ratio <= SERIES_TOLERANCE { quiet + 1 } else { 0 };
        if quiet >= 2 && n as f64 > z.norm() {
            break true;
        }
        if n >= SERIES_MAX_TERMS {
            break false;
        }
    };
    let diag = SeriesDiagnostics {
        terms_used: n + 1,
        last_term_ratio: ratio,
        cancellation: abs_sum / sum.norm(),
        converged,
    };
    if !converged {
        return Err(CoulombError::NonConvergence { terms: diag.terms_used, ratio });
    }
    if !(diag.cancellation <= CANCELLATION_LIMIT) {
        return Err(CoulombError::Cancellation(diag.cancellation));
    }
    let nc = norm_constants(ell, eta)?;
    let log_pref = nc.ln_c_l + (ell + 1.0) * rho.ln() + I * w * rho;
    if log_pref.re > 700.0 {
        return Err(CoulombError::Overflow { z: rho, exponent: log_pref.re });
    }
    let pref = log_pref.exp();
    // dM/dρ = (dM/dz)(dz/dρ) = Σ n t_n / z · (-2iω) = Σ n t_n / ρ.
    let f = pref * sum;
    let fp = pref * (((ell + 1.0) / rho + I * w) * sum + dsum / rho);
    Ok((f, fp, diag))
}

/// `H^ω` and its derivative from
/// `e^{iωθ} ₂F₀(-ℓ+iωη, 1+ℓ+iωη;; 1/(2iωρ))`, `θ = ρ - η ln 2ρ - ℓπ/2 + σ_ℓ`,
/// truncated at the smallest term.
pub fn h_asymptotic(params: &ComplexParams) -> Result<(Complex64, Complex64, SeriesDiagnostics)> {
    let (ell, eta, rho) = (params.ell, params.eta, params.rho);
    let w = params.omega.sign();
    let a = -ell + I * w * eta;
    let b = ell + 1.0 + I * w * eta;
    let z = (2.0 * I * w * rho).inv();

    let terminates = [a, b].iter().any(|p| p.im == 0.0 && p.re <= 0.0 && p.re.fract() == 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut smallest = 1.0f64;
    let mut prev_ratio = f64::INFINITY;
    let mut n = 0usize;
    let converged = loop {
        let next = term * (a + n as f64) * (b + n as f64) * z / (n as f64 + 1.0);
        if next.norm() == 0.0 {
            smallest = 0.0;
            break true;
        }
        // Early terms may grow when |η| or |ℓ| is large; divergence sets in
        // only once the term ratio itself increases.
        let ratio = next.norm() / term.norm();
        if !terminates && ratio >= 1.0 && ratio > prev_ratio {
            break smallest <= ASYMPTOTIC_TOLERANCE * sum.norm();
        }
        if n >= SERIES_MAX_TERMS {
            break false;
        }
        prev_ratio = ratio;
        term = next;
        n += 1;
        sum += term;
        dsum -= term * n as f64;
        smallest = smallest.min(term.norm());
        if !terminates && term.norm() <= 1e-17 * sum.norm() {
            break true;
        }
    };
    let diag = SeriesDiagnostics {
        terms_used: n + 1,
        last_term_ratio: smallest / sum.norm(),
        cancellation: 1.0,
        converged,
    };
    if !converged {
        return Err(CoulombError::AsymptoticFailure { rho, smallest: diag.last_term_ratio });
    }
    let nc = norm_constants(ell, eta)?;
    let theta = rho - eta * (2.0 * rho).ln() - ell * PI / 2.0 + nc.sigma_l;
    let phase_exp = I * w * theta;
    if phase_exp.re > 700.0 {
        return Err(CoulombError::Overflow { z: rho, exponent: phase_exp.re });
    }
    let phase = phase_exp.exp();
    let h = phase * sum;
    let hp = I * w * (1.0 - eta / rho) * h + phase * dsum / rho;
    Ok((h, hp, diag))
}

/// Adaptive Dormand–Prince 5(4) integration of `(u, u')` along the straight
/// segment from `start` to `end`.
pub fn propagate_solution(
    ell: Complex64,
    eta: Complex64,
    start: Complex64,
    y0: [Complex64; 2],
    end: Complex64,
) -> Result<[Complex64; 2]> {
    check_segment(start, end)?;
    let delta = end - start;
    if delta.norm() == 0.0 {
        return Ok(y0);
    }
    let l2 = ell * (ell + 1.0);
    let rhs = |s: f64, y: &[Complex64; 2]| -> [Complex64; 2] {
        let rho = start + delta * s;
        let q = l2 / (rho * rho) + 2.0 * eta / rho - 1.0;
        [delta * y[1], delta * q * y[0]]
    };
    dormand_prince(rhs, y0, start, delta)
}

fn check_segment(start: Complex64, end: Complex64) -> Result<()> {
    check_rho(start)?;
    check_rho(end)?;
    let err = || CoulombError::PathThroughSingularity { start, end };
    let d = end - start;
    // Closest approach of the segment to the origin.
    let t = (-(start.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0);
    let closest = start + d * t;
    if d.norm() > 0.0 && closest.norm() <= 1e-12 * start.norm().max(end.norm()) {
        return Err(err());
    }
    // Crossing of the negative real axis.
    if (start.im < 0.0 && end.im > 0.0) || (start.im > 0.0 && end.im < 0.0) {
        let s = start.im / (start.im - end.im);
        if start.re + s * d.re < 0.0 {
            return Err(err());
        }
    }
    Ok(())
}

const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn dormand_prince<F>(rhs: F, y0: [Complex64; 2], start: Complex64, delta: Complex64) -> Result<[Complex64; 2]>
where
    F: Fn(f64, &[Complex64; 2]) -> [Complex64; 2],
{
    let mut s = 0.0f64;
    let mut y = y0;
    let mut h = (0.05 / delta.norm()).min(0.1);
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
    k[0] = rhs(0.0, &y);
    for _ in 0..MAX_ODE_STEPS {
        if s >= 1.0 {
            return Ok(y);
        }
        h = h.min(1.0 - s);
        if h < 1e-14 {
            return Err(CoulombError::StepUnderflow(start + delta * s));
        }
        for stage in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let c = DP_A[stage][j] * h;
                if c != 0.0 {
                    yi[0] += kj[0] * c;
                    yi[1] += kj[1] * c;
                }
            }
            k[stage] = rhs(s + DP_C[stage] * h, &yi);
        }
        let mut y_new = y;
        let mut err = [Complex64::new(0.0, 0.0); 2];
        for (j, kj) in k.iter().enumerate() {
            y_new[0] += kj[0] * (DP_B[j] * h);
            y_new[1] += kj[1] * (DP_B[j] * h);
            err[0] += kj[0] * (DP_E[j] * h);
            err[1] += kj[1] * (DP_E[j] * h);
        }
        let scale = ODE_TOLERANCE * y[0].norm().max(y[1].norm()).max(y_new[0].norm()).max(y_new[1].norm());
        let ratio = err[0].norm().max(err[1].norm()) / scale.max(f64::MIN_POSITIVE);
        if !ratio.is_finite() && !(y_new[0].norm().is_finite() && y_new[1].norm().is_finite()) {
            return Err(CoulombError::Overflow { z: start + delta * s, exponent: f64::INFINITY });
        }
        if ratio <= 1.0 {
            s += h;
            y = y_new;
            k[0] = k[6];
        }
        let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h *= if ratio <= 1.0 { grow } else { grow.min(1.0) };
    }
    Err(CoulombError::StepUnderflow(start + delta * s))
}

/// Carries both `(F, F')` and `(G, G')` from `start` to `end`.
pub fn ode_propagate(
    ell: Complex64,
    eta: Complex64,
    start: Complex64,
    quad: &CoulombQuad,
    end: Complex64,
) -> Result<CoulombQuad> {
    let [f, fp] = propagate_solution(ell, eta, start, [quad.f, quad.fp], end)?;
    let [g, gp] = propagate_solution(ell, eta, start, [quad.g, quad.gp], end)?;
    Ok(CoulombQuad { f, fp, g, gp })
}

/// Radius beyond which `h_asymptotic` is used directly.
pub fn asymptotic_radius(eta: Complex64) -> f64 {
    50f64.max(eta.norm_sqr() / 5.0)
}

/// Radius up to which the `₁F₁` series is attempted.
pub fn series_radius(params: &ComplexParams) -> f64 {
    let rt = turning_geometry(params).map(|g| g.rho_t.norm()).unwrap_or(0.0);
    30f64.max(2.0 * rt)
}

/// The `ω` whose `H^ω` grows when moving inward along the ray through `ρ`.
pub fn inward_omega(rho: Complex64) -> Omega {
    if rho.im < 0.0 {
        Omega::Minus
    } else {
        Omega::Plus
    }
}

/// `F` by the series at `ρ` itself or, if the sum cancels too much there, at
/// a smaller radius on the same ray followed by outward integration.
pub fn f_route(params: &ComplexParams) -> Result<(Complex64, Complex64)> {
    let rho = params.rho;
    let dir = rho / rho.norm();
    let mut radius = rho.norm().min(series_radius(params));
    let mut last_err = None;
    for _ in 0..60 {
        let start = dir * radius;
        let trial = params.with_rho(start)?;
        match best_series(&trial) {
            Ok((f, fp)) => {
                if start == rho {
                    return Ok((f, fp));
                }
                let [f, fp] = propagate_solution(params.ell, params.eta, start, [f, fp], rho)?;
                return Ok((f, fp));
            }
            Err(e) => last_err = Some(e),
        }
        radius *= 0.8;
        if radius < 1e-3 {
            break;
        }
    }
    Err(last_err.unwrap_or(CoulombError::NoStrategy { rho, detail: "series radius exhausted".into() }))
}

fn best_series(params: &ComplexParams) -> Result<(Complex64, Complex64)> {
    let mut best: Option<(Complex64, Complex64, f64)> = None;
    let mut last_err = None;
    for omega in [Omega::Plus, Omega::Minus] {
        match f_series(&params.with_omega(omega)) {
            Ok((f, fp, d)) if best.is_none_or(|b| d.cancellation < b.2) => best = Some((f, fp, d.cancellation)),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some((f, fp, c)) if c <= TRUSTED_CANCELLATION => Ok((f, fp)),
        Some((_, _, c)) => Err(CoulombError::Cancellation(c)),
        None => Err(last_err.unwrap()),
    }
}

/// `H^ω` with `ω = inward_omega(ρ)`, from the asymptotic series on the ray
/// through `ρ` (pushed outward until it is accurate) integrated inward.
pub fn h_route(params: &ComplexParams) -> Result<(Omega, Complex64, Complex64)> {
    let rho = params.rho;
    let omega = inward_omega(rho);
    let dir = rho / rho.norm();
    let mut radius = asymptotic_radius(params.eta).max(rho.norm());
    let mut last_err = None;
    for _ in 0..6 {
        let far = params.with_rho(dir * radius)?.with_omega(omega);
        match h_asymptotic(&far) {
            Ok((h, hp, _)) => {
                if far.rho == rho {
                    return Ok((omega, h, hp));
                }
                let [h, hp] = propagate_solution(params.ell, params.eta, far.rho, [h, hp], rho)?;
                return Ok((omega, h, hp));
            }
            Err(e) => last_err = Some(e),
        }
        radius *= 2.0;
    }
    Err(last_err.unwrap())
}

/// Full quad by the asymptotic series for both `H⁺` and `H⁻`.
pub fn asymptotic_quad(params: &ComplexParams) -> Result<CoulombQuad> {
    let (hp, hpp, _) = h_asymptotic(&params.with_omega(Omega::Plus))?;
    let (hm, hmp, _) = h_asymptotic(&params.with_omega(Omega::Minus))?;
    Ok(CoulombQuad::from_h_pair((hp, hpp), (hm, hmp)))
}

/// Regular and irregular functions from whichever routes cover `ρ`.
pub fn exact_quad(params: &ComplexParams) -> Result<CoulombQuad> {
    let rho = params.rho;
    let quad = if rho.norm() >= asymptotic_radius(params.eta) {
        asymptotic_quad(params).or_else(|_| inner_quad(params))
    } else {
        inner_quad(params)
    };
    let mut quad = quad.map_err(|e| CoulombError::NoStrategy { rho, detail: e.to_string() })?;
    if quad.as_array().iter().any(|v| !finite(*v)) {
        return Err(CoulombError::NoStrategy { rho, detail: "non-finite result".into() });
    }
    if is_real(params.ell) && is_real(params.eta) && is_real(rho) {
        quad.f.im = 0.0;
        quad.fp.im = 0.0;
        quad.g.im = 0.0;
        quad.gp.im = 0.0;
    }
    Ok(quad)
}

fn inner_quad(params: &ComplexParams) -> Result<CoulombQuad> {
    let (f, fp) = f_route(params)?;
    let (omega, h, hp) = h_route(params)?;
    let iw = I * omega.sign();
    Ok(CoulombQuad { f, fp, g: h - iw * f, gp: hp - iw * fp })
}

/// Discrepancies between independent routes at `ρ`, relative to the size
/// of the compared values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRouteReport {
    /// `F, F'` from the series carried outward vs the asymptotic pair.
    pub f_mismatch: f64,
    /// `H^ω, H^ω'` from further out carried inward vs asymptotics at `ρ`.
    pub h_mismatch: f64,
}

/// Cross-checks at a point where both the series and the asymptotic
/// expansion are usable (`|ρ|` at or beyond the asymptotic radius).
pub fn dual_route_check(params: &ComplexParams) -> Result<DualRouteReport> {
    let far = asymptotic_quad(params)?;
    let (f, fp) = f_route(params)?;
    let f_scale = far.f.norm() + far.fp.norm();
    let f_mismatch = ((f - far.f).norm() + (fp - far.fp).norm()) / f_scale;

    let omega = inward_omega(params.rho);
    let (h, hp, _) = h_asymptotic(&params.with_omega(omega))?;
    let outer = params.with_rho(params.rho * 2.0)?.with_omega(omega);
    let (ho, hop, _) = h_asymptotic(&outer)?;
    let [hi, hip] = propagate_solution(params.ell, params.eta, outer.rho, [ho, hop], params.rho)?;
    let h_mismatch = ((hi - h).norm() + (hip - hp).norm()) / (h.norm() + hp.norm());
    Ok(DualRouteReport { f_mismatch, h_mismatch })
}
