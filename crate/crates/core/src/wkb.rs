//! Uniform WKB approximation of `F`, `G` and their `ρ`-derivatives.
//!
//! With the turning point `ρ_t = η + √(η² + ℓ(ℓ+1))`, the offset
//! `x = (ρ - ρ_t)/ρ_t` and `a = ℓ(ℓ+1)/ρ_t²`, the functions are written as
//!
//! ```text
//! F = √π ρ_t^{1/6} φ'(x)^{-1/2} Ai(-ρ_t^{2/3} φ(x))
//! G = √π ρ_t^{1/6} φ'(x)^{-1/2} Bi(-ρ_t^{2/3} φ(x))
//! ```
//!
//! where the phase map solves `φ'² φ = x/(x+1) + a x/(x+1)²` with `φ(0) = 0`.
//! That first-order equation integrates in closed form through `log`,
//! `arctan` (for `Re x ≥ 0`) and `arccos`, `arctanh` (for `Re x < 0`); near
//! `x = 0`, where the closed forms cancel badly, a power series takes over.
//!
//! Because the Airy pair has Wronskian `1/π`, the normalization makes
//! `F'G - FG' = 1` hold exactly whatever the quality of `φ`.

use num_complex::Complex64;

use crate::airy::airy_quad;
use crate::complexops::{branch_arccos, branch_arctan, branch_arctanh, branch_log, branch_sqrt, BranchedFn};
use crate::coulomb::{ComplexParams, CoulombQuad};
use crate::error::{CoulombError, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Order of the near-zero power series for `φ(x)/x`.
const SERIES_TERMS: usize = 14;

/// Turning point, shape parameter and scaled offset for one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningGeometry {
    pub rho_t: Complex64,
    pub a: Complex64,
    pub x: Complex64,
}

/// Computes the outer turning point (principal square root) and the derived
/// coordinates.
///
/// `a` is formed as `ℓ(ℓ+1)/ρ_t²`, which equals `1 - 2η/ρ_t` on the turning
/// point but does not cancel when `ρ_t ≈ 2η`.
pub fn turning_geometry(params: &ComplexParams) -> Result<TurningGeometry> {
    let eta = params.eta;
    let l2 = params.centrifugal();
    let disc = eta * eta + l2;
    if disc.im == 0.0 && disc.re < 0.0 {
        return Err(CoulombError::BranchAmbiguity(disc));
    }
    let root = disc.sqrt();
    let sum = eta + root;
    // η + √d cancels when η points against √d; use the conjugate root form.
    let rho_t = if sum.norm() < 0.5 * eta.norm() { -l2 / (eta - root) } else { sum };
    if rho_t.norm() == 0.0 || !rho_t.re.is_finite() || !rho_t.im.is_finite() {
        return Err(CoulombError::Domain(format!(
            "turning point vanishes for ell = {}, eta = {eta}",
            params.ell
        )));
    }
    Ok(TurningGeometry {
        rho_t,
        a: l2 / (rho_t * rho_t),
        x: (params.rho - rho_t) / rho_t,
    })
}

/// Which closed form of the phase integral applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `Re x ≥ 0`: the `log` / `arctan` form.
    NonNegative,
    /// `Re x < 0`: the `arccos` / `arctanh` form.
    Negative,
}

impl Region {
    pub fn of(x: Complex64) -> Region {
        if x.re >= 0.0 {
            Region::NonNegative
        } else {
            Region::Negative
        }
    }
}

/// Sheet selection for every multi-valued function in the phase map.
/// All zero is the principal evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BranchState {
    /// `log(√x + √(1+x+a))`.
    pub log: i32,
    /// `arctan` (`Re x ≥ 0`) or `arctanh` (`Re x < 0`).
    pub inverse_trig: i32,
    /// `arccos(1 + 2x/(1+a))`.
    pub arccos: i32,
    /// The outer inversion `φ = (3S/2)^{2/3}`.
    pub power: i32,
    /// The root in `φ' = √(R/φ)`.
    pub dphi_root: i32,
    /// The amplitude factor `φ'^{1/2}`.
    pub amplitude_root: i32,
    /// `√x` inside the log.
    pub root_x: i32,
    /// `√(1+x+a)` inside the log.
    pub root_span: i32,
    /// `√(x(1+a+x))` or `√(-x(1+a+x))`.
    pub root_product: i32,
    /// `√(ax/(1+a+x))` or `√(-ax/(1+a+x))`.
    pub root_ratio: i32,
}

impl BranchState {
    pub fn is_principal(&self) -> bool {
        *self == BranchState::default()
    }

    pub fn winding(&self, slot: Slot) -> i32 {
        let mut copy = *self;
        *copy.winding_mut(slot)
    }

    pub fn winding_mut(&mut self, slot: Slot) -> &mut i32 {
        match slot {
            Slot::Log => &mut self.log,
            Slot::InverseTrig => &mut self.inverse_trig,
            Slot::Arccos => &mut self.arccos,
            Slot::Power => &mut self.power,
            Slot::DphiRoot => &mut self.dphi_root,
            Slot::AmplitudeRoot => &mut self.amplitude_root,
            Slot::RootX => &mut self.root_x,
            Slot::RootSpan => &mut self.root_span,
            Slot::RootProduct => &mut self.root_product,
            Slot::RootRatio => &mut self.root_ratio,
        }
    }

    /// Whether `self` and `other` sum to zero in every slot. Square roots
    /// have two sheets, so their windings only count modulo 2.
    pub fn cancels(&self, other: &BranchState) -> bool {
        Slot::ALL.iter().all(|&s| {
            let sum = self.winding(s) + other.winding(s);
            if s.is_square_root() {
                sum.rem_euclid(2) == 0
            } else {
                sum == 0
            }
        })
    }
}

/// Names one winding of a [`BranchState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Log,
    InverseTrig,
    Arccos,
    Power,
    DphiRoot,
    AmplitudeRoot,
    RootX,
    RootSpan,
    RootProduct,
    RootRatio,
}

impl Slot {
    pub fn is_square_root(self) -> bool {
        !matches!(self, Slot::Log | Slot::InverseTrig | Slot::Arccos | Slot::Power)
    }

    pub const ALL: [Slot; 10] = [
        Slot::Log,
        Slot::InverseTrig,
        Slot::Arccos,
        Slot::Power,
        Slot::DphiRoot,
        Slot::AmplitudeRoot,
        Slot::RootX,
        Slot::RootSpan,
        Slot::RootProduct,
        Slot::RootRatio,
    ];
}

/// The square roots inside the closed form for `region`, with their
/// arguments at `x`. Their sheets must be settled before those of the
/// outer terms, whose arguments they feed.
pub fn inner_roots(x: Complex64, a: Complex64, region: Region) -> Vec<(Slot, Complex64)> {
    let span = a + x + 1.0;
    let has_a = a != Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(4);
    match region {
        Region::NonNegative => {
            out.push((Slot::RootX, x));
            out.push((Slot::RootSpan, span));
            out.push((Slot::RootProduct, x * span));
            if has_a {
                out.push((Slot::RootRatio, a * x / span));
            }
        }
        Region::Negative => {
            out.push((Slot::RootProduct, -x * span));
            if has_a {
                out.push((Slot::RootRatio, -a * x / span));
            }
        }
    }
    out
}

/// The log, inverse-trigonometric and arccos terms of the closed form for
/// `region`, with their arguments at `x` given the root sheets in `sheets`.
pub fn outer_terms(
    x: Complex64,
    a: Complex64,
    region: Region,
    sheets: &BranchState,
) -> Result<Vec<(Slot, BranchedFn, Complex64)>> {
    let span = a + x + 1.0;
    let has_a = a != Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(2);
    match region {
        Region::NonNegative => {
            let arg = branch_sqrt(x, sheets.root_x)? + branch_sqrt(span, sheets.root_span)?;
            out.push((Slot::Log, BranchedFn::Log, arg));
            if has_a {
                let arg = branch_sqrt(a * x / span, sheets.root_ratio)?;
                out.push((Slot::InverseTrig, BranchedFn::Arctan, arg));
            }
        }
        Region::Negative => {
            out.push((Slot::Arccos, BranchedFn::Arccos, 1.0 + 2.0 * x / (a + 1.0)));
            if has_a {
                let arg = branch_sqrt(-a * x / span, sheets.root_ratio)?;
                out.push((Slot::InverseTrig, BranchedFn::Arctanh, arg));
            }
        }
    }
    Ok(out)
}

/// `φ`, `φ'`, `φ''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiJet {
    pub phi: Complex64,
    pub dphi: Complex64,
    pub d2phi: Complex64,
}

impl PhiJet {
    /// `φ'²φ - R(x)`: how well the jet satisfies the first-order equation.
    pub fn first_order_residual(&self, x: Complex64, a: Complex64) -> Complex64 {
        self.dphi * self.dphi * self.phi - source(x, a)
    }
}

/// `R(x) = x/(x+1) + a x/(x+1)²`.
pub fn source(x: Complex64, a: Complex64) -> Complex64 {
    let inv = (x + 1.0).inv();
    x * inv + a * x * inv * inv
}

/// `R'(x) = 1/(x+1)² + a(1-x)/(x+1)³`.
pub fn source_derivative(x: Complex64, a: Complex64) -> Complex64 {
    let inv = (x + 1.0).inv();
    let inv2 = inv * inv;
    inv2 + a * (1.0 - x) * inv2 * inv
}

/// `|x|` below which the near-zero series replaces the closed forms.
pub fn near_zero_threshold(a: Complex64) -> f64 {
    1e-2 * (a + 1.0).norm().min(1.0)
}

/// Phase map and its first two derivatives on the principal sheets.
pub fn phi_jet(x: Complex64, a: Complex64) -> Result<PhiJet> {
    phi_jet_on_sheets(x, a, &BranchState::default())
}

/// Phase map on the sheets selected by `sheets`; the region follows `Re x`.
pub fn phi_jet_on_sheets(x: Complex64, a: Complex64, sheets: &BranchState) -> Result<PhiJet> {
    check_x(x)?;
    if x.norm() < near_zero_threshold(a) {
        return Ok(phi_series(x, a));
    }
    let phi = phi_closed_form(x, a, Region::of(x), sheets)?;
    jet_from_phi(x, a, phi, sheets.dphi_root)
}

fn check_x(x: Complex64) -> Result<()> {
    if (x + 1.0).norm() == 0.0 {
        return Err(CoulombError::Singularity);
    }
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(CoulombError::Domain(format!("x is not finite: {x}")));
    }
    Ok(())
}

/// Completes `φ` with `φ' = √(R/φ)` and `φ'' = (R' - φ'³)/(2φφ')`.
pub fn jet_from_phi(x: Complex64, a: Complex64, phi: Complex64, dphi_root: i32) -> Result<PhiJet> {
    let r = source(x, a);
    let dphi = branch_sqrt(r / phi, dphi_root)?;
    let d2phi = (source_derivative(x, a) - dphi * dphi * dphi) / (2.0 * phi * dphi);
    let jet = PhiJet { phi, dphi, d2phi };
    if [jet.phi, jet.dphi, jet.d2phi].iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(CoulombError::Domain(format!("phase map not finite at x = {x}, a = {a}")));
    }
    Ok(jet)
}

/// `S = (2/3)φ^{3/2}` (`NonNegative`) or `S = (2/3)(-φ)^{3/2}` (`Negative`),
/// evaluated from the closed form of the phase integral.
pub fn phase_integral(x: Complex64, a: Complex64, region: Region, sheets: &BranchState) -> Result<Complex64> {
    check_x(x)?;
    let one = Complex64::new(1.0, 0.0);
    let span = one + a + x;
    let root_a = a.sqrt();
    let has_a = a != Complex64::new(0.0, 0.0);
    let s = match region {
        Region::NonNegative => {
            let root_x = branch_sqrt(x, sheets.root_x)?;
            let root_span = branch_sqrt(span, sheets.root_span)?;
            let log_term = branch_log(root_x + root_span, sheets.log)?;
            let product = branch_sqrt(x * span, sheets.root_product)?;
            let mut s = (one - a) * ((one + a).sqrt().ln() - log_term) + product;
            if has_a {
                let t = branch_arctan(branch_sqrt(a * x / span, sheets.root_ratio)?, sheets.inverse_trig)?;
                s -= 2.0 * root_a * t;
            }
            s
        }
        Region::Negative => {
            let acos = branch_arccos(one + 2.0 * x / (one + a), sheets.arccos)?;
            let product = branch_sqrt(-x * span, sheets.root_product)?;
            let mut s = -product + (one - a) * 0.5 * acos;
            if has_a {
                let t = branch_arctanh(branch_sqrt(-a * x / span, sheets.root_ratio)?, sheets.inverse_trig)?;
                s += 2.0 * root_a * t;
            }
            s
        }
    };
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(CoulombError::Domain(format!("phase integral not finite at x = {x}, a = {a}")));
    }
    Ok(s)
}

/// `φ` from one of the two closed forms, regardless of the sign of `Re x`.
pub fn phi_closed_form(x: Complex64, a: Complex64, region: Region, sheets: &BranchState) -> Result<Complex64> {
    let s = phase_integral(x, a, region, sheets)?;
    let magnitude = invert_phase(s, sheets.power)?;
    Ok(match region {
        Region::NonNegative => magnitude,
        Region::Negative => -magnitude,
    })
}

/// `(3S/2)^{2/3}` on sheet `power`.
pub fn invert_phase(s: Complex64, power: i32) -> Result<Complex64> {
    if s == Complex64::new(0.0, 0.0) {
        return Ok(s);
    }
    Ok((branch_log(1.5 * s, power)? * (2.0 / 3.0)).exp())
}

/// Coefficients `h_n` of `φ(x) = x Σ h_n xⁿ`.
///
/// `√(R(t)/t)` is expanded as a power series, integrated against `√t`, and
/// the result raised to the 2/3 power, all with the J.C.P. Miller recurrence.
/// `h_0 = (1+a)^{1/3}` and `h_1/h_0 = -(1+2a)/(5(1+a))`.
pub fn phi_series_coefficients(a: Complex64) -> [Complex64; SERIES_TERMS] {
    let mut r = [Complex64::new(0.0, 0.0); SERIES_TERMS];
    for (n, rn) in r.iter_mut().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        *rn = (a * (n as f64 + 1.0) + 1.0) * sign;
    }
    let s = series_power(&r, 0.5, r[0].sqrt());
    let mut m = [Complex64::new(0.0, 0.0); SERIES_TERMS];
    for (n, mn) in m.iter_mut().enumerate() {
        *mn = s[n] * 3.0 / (2.0 * n as f64 + 3.0);
    }
    let h0 = (m[0].ln() * (2.0 / 3.0)).exp();
    series_power(&m, 2.0 / 3.0, h0)
}

// B = A^p given b_0, via a_0 n b_n = Σ_{k=1..n} ((p+1)k - n) a_k b_{n-k}.
fn series_power(
    a: &[Complex64; SERIES_TERMS],
    p: f64,
    b0: Complex64,
) -> [Complex64; SERIES_TERMS] {
    let mut b = [Complex64::new(0.0, 0.0); SERIES_TERMS];
    b[0] = b0;
    for n in 1..SERIES_TERMS {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            acc += a[k] * b[n - k] * ((p + 1.0) * k as f64 - n as f64);
        }
        b[n] = acc / (a[0] * n as f64);
    }
    b
}

/// Near-zero evaluation of the jet from the power series.
pub fn phi_series(x: Complex64, a: Complex64) -> PhiJet {
    let h = phi_series_coefficients(a);
    let zero = Complex64::new(0.0, 0.0);
    let (mut phi, mut dphi, mut d2phi) = (zero, zero, zero);
    for n in (0..SERIES_TERMS).rev() {
        let nf = n as f64;
        phi = phi * x + h[n];
        dphi = dphi * x + h[n] * (nf + 1.0);
        if n >= 1 {
            d2phi = d2phi * x + h[n] * (nf + 1.0) * nf;
        }
    }
    PhiJet { phi: phi * x, dphi, d2phi }
}

/// Residual of the full third-order equation for `φ`,
///
/// ```text
/// φ'²φ + φ'''/(2ρ_t² φ') - 3φ''²/(4ρ_t² φ'²) - x/(x+1) - a x/(x+1)²,
/// ```
///
/// with `φ'''` from a five-point difference of `φ''`. The jet solves the
/// equation without the `ρ_t^{-2}` terms, so this measures what was dropped.
pub fn phi_residual(x: Complex64, a: Complex64, rho_t: Complex64) -> Result<Complex64> {
    let h = 1e-3 * x.norm().max(1.0);
    if x.norm() <= 2.5 * h {
        return Err(CoulombError::Conditioning(x));
    }
    if (x + 1.0).norm() <= 2.5 * h {
        return Err(CoulombError::Conditioning(x));
    }
    let jet = phi_jet(x, a)?;
    let d2 = |dx: f64| phi_jet(x + dx, a).map(|j| j.d2phi);
    let d3phi = (-d2(2.0 * h)? + d2(h)? * 8.0 - d2(-h)? * 8.0 + d2(-2.0 * h)?) / (12.0 * h);
    let inv_rt2 = (rho_t * rho_t).inv();
    let ratio = jet.d2phi / jet.dphi;
    Ok(jet.first_order_residual(x, a) + inv_rt2 * 0.5 * d3phi / jet.dphi - inv_rt2 * 0.75 * ratio * ratio)
}

/// `F`, `F'`, `G`, `G'` from the uniform approximation on principal sheets.
pub fn wkb_quad(params: &ComplexParams) -> Result<CoulombQuad> {
    wkb_quad_on_sheets(params, &BranchState::default())
}

pub fn wkb_quad_on_sheets(params: &ComplexParams, sheets: &BranchState) -> Result<CoulombQuad> {
    let geo = turning_geometry(params)?;
    let jet = phi_jet_on_sheets(geo.x, geo.a, sheets)?;
    assemble(&geo, &jet, sheets.amplitude_root)
}

/// Builds the Coulomb quad from a phase jet. The `φ''` term of the
/// derivatives is kept in full.
pub fn assemble(geo: &TurningGeometry, jet: &PhiJet, amplitude_root: i32) -> Result<CoulombQuad> {
    let ln_rt = geo.rho_t.ln();
    let rt23 = (ln_rt * (2.0 / 3.0)).exp();
    let norm = (ln_rt / 6.0).exp() * SQRT_PI;
    let airy = airy_quad(-rt23 * jet.phi)?;
    let s = branch_sqrt(jet.dphi, amplitude_root)?;
    let amp = norm / s;
    let slope = -0.5 * jet.d2phi / (s * jet.dphi);
    let lift = rt23 * s;
    let scale = norm / geo.rho_t;
    Ok(CoulombQuad {
        f: amp * airy.ai,
        fp: scale * (slope * airy.ai - lift * airy.aip),
        g: amp * airy.bi,
        gp: scale * (slope * airy.bi - lift * airy.bip),
    })
}
