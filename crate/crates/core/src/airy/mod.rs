//! Airy functions `Ai`, `Bi` and their first derivatives for complex argument.
//!
//! Inside `|z| ≤ SERIES_RADIUS` the Maclaurin series is summed in complex
//! double-double arithmetic: the two power series behind `Ai` grow like
//! `e^{|ζ|}` while `Ai` itself can be as small as `e^{-|ζ|}`, and the extra
//! 53 bits absorb that cancellation. Outside, `Ai` comes from its large-`z`
//! expansion (truncated at the smallest term) for `|arg z| ≤ 2π/3` and from
//! `Ai(z) = -ω Ai(ωz) - ω² Ai(ω²z)` beyond; `Bi` always comes from the
//! rotation formula `Bi(z) = e^{iπ/6} Ai(ωz) + e^{-iπ/6} Ai(ω̄z)`.

mod dd;

use std::f64::consts::{FRAC_PI_3, PI};

use num_complex::Complex64;

use crate::error::{CoulombError, Result};
use dd::{CDd, Dd};

/// Radius separating the Maclaurin and asymptotic regimes.
pub const SERIES_RADIUS: f64 = 8.0;

/// Largest `|Re ζ|` (with `ζ = (2/3) z^{3/2}`) before `Bi` is reported as an
/// overflow.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

// Ai(0), -Ai'(0), and both times √3, as double-double pairs.
const C1: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const C2: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);
const SQRT3_C1: Dd = Dd::new(0.614_926_627_446_000_7, 5.089_920_779_489_141_6e-17);
const SQRT3_C2: Dd = Dd::new(0.448_288_357_353_826_4, -2.536_323_777_441_730_5e-17);

const FRAC_1_2SQRT_PI: f64 = 0.282_094_791_773_878_14;

/// `Ai`, `Ai'`, `Bi`, `Bi'` at one complex point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryQuad {
    pub ai: Complex64,
    pub aip: Complex64,
    pub bi: Complex64,
    pub bip: Complex64,
}

impl AiryQuad {
    /// `Ai·Bi' - Ai'·Bi`, which is `1/π` everywhere.
    pub fn wronskian(&self) -> Complex64 {
        self.ai * self.bip - self.aip * self.bi
    }
}

/// All four Airy values at `z`, choosing the regime by `|z|`.
pub fn airy_quad(z: Complex64) -> Result<AiryQuad> {
    check_finite(z)?;
    let q = if z.norm() <= SERIES_RADIUS {
        airy_quad_series(z)
    } else {
        airy_quad_asymptotic(z)?
    };
    if z.im == 0.0 {
        // Real on the real axis; the rotation formulas leave rounding noise.
        let re = |w: Complex64| Complex64::new(w.re, 0.0);
        return Ok(AiryQuad { ai: re(q.ai), aip: re(q.aip), bi: re(q.bi), bip: re(q.bip) });
    }
    Ok(q)
}

/// The Maclaurin regime on its own, valid (if slow) at any moderate `|z|`.
pub fn airy_quad_series(z: Complex64) -> AiryQuad {
    let s = maclaurin(z);
    let lin = |a: Dd, x: CDd, b: Dd, y: CDd| x.scale(a).add(y.scale(b)).to_complex();
    AiryQuad {
        ai: lin(C1, s.f, C2.neg(), s.g),
        aip: lin(C1, s.fp, C2.neg(), s.gp),
        bi: lin(SQRT3_C1, s.f, SQRT3_C2, s.g),
        bip: lin(SQRT3_C1, s.fp, SQRT3_C2, s.gp),
    }
}

/// The large-`|z|` regime on its own. Accurate to double precision only for
/// `|z|` of order `SERIES_RADIUS` and above.
pub fn airy_quad_asymptotic(z: Complex64) -> Result<AiryQuad> {
    check_finite(z)?;
    let exponent = zeta(z).re.abs();
    if exponent > OVERFLOW_EXPONENT {
        return Err(CoulombError::Overflow { z, exponent });
    }
    let (ai, aip) = ai_pair_asymptotic(z);
    let w = omega();
    let (a_plus, ap_plus) = ai_pair_asymptotic(z * w);
    let (a_minus, ap_minus) = ai_pair_asymptotic(z * w.conj());
    let e6 = Complex64::from_polar(1.0, PI / 6.0);
    let e56 = Complex64::from_polar(1.0, 5.0 * PI / 6.0);
    Ok(AiryQuad {
        ai,
        aip,
        bi: e6 * a_plus + e6.conj() * a_minus,
        bip: e56 * ap_plus + e56.conj() * ap_minus,
    })
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(CoulombError::Domain(format!("Airy function of non-finite {z}")))
    }
}

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * FRAC_PI_3)
}

fn zeta(z: Complex64) -> Complex64 {
    z * z.sqrt() * (2.0 / 3.0)
}

struct Maclaurin {
    f: CDd,
    g: CDd,
    fp: CDd,
    gp: CDd,
}

// f = Σ 1·4···(3k-2) z^{3k}/(3k)!, g = Σ 2·5···(3k-1) z^{3k+1}/(3k+1)!,
// and their derivatives, each advanced by its own term ratio.
fn maclaurin(z: Complex64) -> Maclaurin {
    let zd = CDd::from_parts(z.re, z.im);
    let z2 = zd.mul(zd);
    let z3 = z2.mul(zd);
    let one = CDd::from_parts(1.0, 0.0);

    let mut tf = one;
    let mut tg = zd;
    let mut tfp = z2.div_f64(2.0);
    let mut tgp = one;
    let (mut f, mut g, mut fp, mut gp) = (tf, tg, tfp, tgp);
    let mut peak = 1.0f64.max(z.norm()).max(tfp.approx_norm());

    for k in 0..400u32 {
        let k3 = 3.0 * f64::from(k);
        tf = tf.mul(z3).div_f64((k3 + 2.0) * (k3 + 3.0));
        tg = tg.mul(z3).div_f64((k3 + 3.0) * (k3 + 4.0));
        tfp = tfp.mul(z3).div_f64((k3 + 3.0) * (k3 + 5.0));
        tgp = tgp.mul(z3).div_f64((k3 + 1.0) * (k3 + 3.0));
        f = f.add(tf);
        g = g.add(tg);
        fp = fp.add(tfp);
        gp = gp.add(tgp);
        let size = tf
            .approx_norm()
            .max(tg.approx_norm())
            .max(tfp.approx_norm())
            .max(tgp.approx_norm());
        peak = peak.max(size);
        let past_peak = z.norm().powi(3) < (k3 + 3.0) * (k3 + 4.0);
        if past_peak && size <= 1e-34 * peak {
            break;
        }
    }
    Maclaurin { f, g, fp, gp }
}

// (Ai, Ai') for any z outside the series disk: the direct expansion inside
// |arg z| ≤ 2π/3, one rotation step outside it.
fn ai_pair_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    if z.arg().abs() <= 2.0 * FRAC_PI_3 + 1e-12 {
        return ai_pair_direct(z);
    }
    let w = omega();
    let w2 = w * w;
    let (a1, ap1) = ai_pair_direct(z * w);
    let (a2, ap2) = ai_pair_direct(z * w2);
    (-w * a1 - w2 * a2, -w2 * ap1 - w * ap2)
}

// Ai(z) ~ e^{-ζ}/(2√π z^{1/4}) Σ (-1)^k u_k ζ^{-k},
// Ai'(z) ~ -z^{1/4} e^{-ζ}/(2√π) Σ (-1)^k v_k ζ^{-k}.
fn ai_pair_direct(z: Complex64) -> (Complex64, Complex64) {
    let root = z.sqrt();
    let quarter = root.sqrt();
    let zeta = z * root * (2.0 / 3.0);
    let inv = -zeta.inv();

    let (su, sv) = superasymptotic_sums(inv);
    let e = (-zeta).exp() * FRAC_1_2SQRT_PI;
    (e / quarter * su, -e * quarter * sv)
}

/// Partial sums of `Σ u_k x^k` and `Σ v_k x^k`, each stopped at machine
/// precision or just before its terms start to grow.
fn superasymptotic_sums(x: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let (mut su, mut sv) = (one, one);
    let (mut last_u, mut last_v) = (f64::INFINITY, f64::INFINITY);
    let (mut u_done, mut v_done) = (false, false);
    let mut u = 1.0f64;
    let mut xp = one;
    for k in 1..200 {
        let kf = f64::from(k);
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        xp *= x;
        let tu = xp * u;
        let tv = xp * v;
        if !u_done {
            if tu.norm() >= last_u {
                u_done = true;
            } else {
                su += tu;
                last_u = tu.norm();
                u_done = last_u <= 1e-17 * su.norm();
            }
        }
        if !v_done {
            if tv.norm() >= last_v {
                v_done = true;
            } else {
                sv += tv;
                last_v = tv.norm();
                v_done = last_v <= 1e-17 * sv.norm();
            }
        }
        if u_done && v_done {
            break;
        }
    }
    (su, sv)
}
