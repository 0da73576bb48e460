//! Branch-aware complex elementary functions and the complex log-gamma.
//!
//! Principal branches follow the usual table conventions (and `num_complex`):
//!
//! | function  | principal cut(s)                   | sheet shift for winding `k`        |
//! |-----------|------------------------------------|------------------------------------|
//! | `log`     | `(-∞, 0]`                          | `+ 2πi·k`                          |
//! | `sqrt`    | `(-∞, 0)`                          | `× (-1)^k`                         |
//! | `arctan`  | `[i, i∞)` and `(-i∞, -i]`          | `+ π·k`                            |
//! | `arctanh` | `(-∞, -1]` and `[1, ∞)`            | `+ iπ·k`                           |
//! | `arccos`  | `(-∞, -1]` and `[1, ∞)`            | see [`branch_arccos`]              |
//!
//! Windings are always supplied by the caller. Detecting when a path has
//! crossed a cut is the contour module's job; [`BranchedFn::crosses_cut`] only
//! answers the geometric question for one segment.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CoulombError, Result};

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_7;

/// A value on a definite sheet of a multi-valued function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedValue {
    pub value: Complex64,
    /// Sheet corrections applied relative to the principal branch.
    pub winding: i32,
}

/// The multi-valued elementary functions that appear in the phase map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchedFn {
    Log,
    Sqrt,
    Arctan,
    Arctanh,
    Arccos,
}

impl BranchedFn {
    pub fn eval(self, z: Complex64, winding: i32) -> Result<BranchedValue> {
        let value = match self {
            BranchedFn::Log => branch_log(z, winding)?,
            BranchedFn::Sqrt => branch_sqrt(z, winding)?,
            BranchedFn::Arctan => branch_arctan(z, winding)?,
            BranchedFn::Arctanh => branch_arctanh(z, winding)?,
            BranchedFn::Arccos => branch_arccos(z, winding)?,
        };
        Ok(BranchedValue { value, winding })
    }

    /// Whether the straight segment `from → to` crosses this function's
    /// principal cut. Landing exactly on a cut counts as a crossing when the
    /// other end lies strictly on the opposite side.
    pub fn crosses_cut(self, from: Complex64, to: Complex64) -> bool {
        match self {
            BranchedFn::Log | BranchedFn::Sqrt => {
                straddles(from.im, to.im) && crossing_coord(from, to, true) < 0.0
            }
            BranchedFn::Arctan => {
                straddles(from.re, to.re) && crossing_coord(from, to, false).abs() > 1.0
            }
            BranchedFn::Arctanh | BranchedFn::Arccos => {
                straddles(from.im, to.im) && crossing_coord(from, to, true).abs() > 1.0
            }
        }
    }
}

fn straddles(a: f64, b: f64) -> bool {
    (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0) || (a == 0.0 && b != 0.0)
}

// Where the segment meets the real axis (`on_real_axis`) or the imaginary axis,
// the other coordinate of the intersection point.
fn crossing_coord(from: Complex64, to: Complex64, on_real_axis: bool) -> f64 {
    if on_real_axis {
        let t = from.im / (from.im - to.im);
        from.re + t * (to.re - from.re)
    } else {
        let t = from.re / (from.re - to.re);
        from.im + t * (to.im - from.im)
    }
}

/// `log z + 2πi·winding`.
pub fn branch_log(z: Complex64, winding: i32) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(CoulombError::BranchPoint { function: "log", z });
    }
    Ok(z.ln() + Complex64::new(0.0, 2.0 * PI * f64::from(winding)))
}

/// `(-1)^winding · √z`. At `z = 0` every sheet gives 0, so no error is raised.
pub fn branch_sqrt(z: Complex64, winding: i32) -> Result<Complex64> {
    let root = z.sqrt();
    Ok(if winding.rem_euclid(2) == 0 { root } else { -root })
}

/// `arctan z + π·winding`; singular at `±i`.
pub fn branch_arctan(z: Complex64, winding: i32) -> Result<Complex64> {
    if z.re == 0.0 && z.im.abs() == 1.0 {
        return Err(CoulombError::BranchPoint { function: "arctan", z });
    }
    Ok(z.atan() + PI * f64::from(winding))
}

/// `arctanh z + iπ·winding`; singular at `±1`.
pub fn branch_arctanh(z: Complex64, winding: i32) -> Result<Complex64> {
    if z.im == 0.0 && z.re.abs() == 1.0 {
        return Err(CoulombError::BranchPoint { function: "arctanh", z });
    }
    Ok(z.atanh() + Complex64::new(0.0, PI * f64::from(winding)))
}

/// Sheets of `arccos` are `±w + 2πn` with `w` the principal value. Winding
/// `k` selects `(-1)^k·w + π·(k + (k mod 2))`, so that crossing the
/// `[1, ∞)` cut from sheet 0 lands on `k = -1` (`-w`) and crossing the
/// `(-∞, -1]` cut lands on `k = 1` (`2π - w`). Every crossing moves `k` by one.
///
/// The branch points `±1` have finite values and are not errors.
pub fn branch_arccos(z: Complex64, winding: i32) -> Result<Complex64> {
    let w = z.acos();
    let k = winding;
    let odd = k.rem_euclid(2);
    let sign = if odd == 0 { 1.0 } else { -1.0 };
    Ok(w * sign + PI * f64::from(k + odd))
}

/// Principal branch of `log Γ(z)`: analytic off `(-∞, 0]`, real on the
/// positive axis, `lnΓ(conj z) = conj lnΓ(z)`.
///
/// Stirling's series with eight Bernoulli terms, after shifting the argument
/// up to `|z| ≥ 15`, `Re z ≥ 0.5` with the recurrence
/// `lnΓ(z) = lnΓ(z + n) - Σ log(z + k)`. Each `log(z + k)` is principal, and
/// the sum can only jump where some `z + k` crosses the negative axis, i.e.
/// on the cut itself, so no sheet correction is needed.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(CoulombError::Domain(format!("log_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(CoulombError::Pole(z));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

// B_{2k} / (2k(2k-1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut tail = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        tail = tail * inv2 + c;
    }
    (w - 0.5) * w.ln() - w + LN_2PI_HALF + tail * inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn log_gamma_trivial_points() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half - c(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
    }

    // 50-digit mpmath.loggamma values.
    #[test]
    fn log_gamma_against_arbitrary_precision() {
        let cases = [
            (c(1.0, 1.0), c(-0.650_923_199_301_856_3, -0.301_640_320_467_533_2)),
            (c(-2.5, 0.3), c(-0.432_088_892_613_201_9, -9.093_345_421_289_741)),
            (c(3.0, 20.0), c(-23.001_433_713_282_405, 43.687_842_225_716_585)),
            (c(0.2, -7.0), c(-10.660_245_035_487_833, -6.149_654_062_087_331)),
            (c(60.0, 70.0), c(149.740_310_858_537_95, 297.972_182_466_802_6)),
            (c(-40.5, 2.0), c(-116.570_930_022_897_14, -121.377_312_599_822_22)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "z = {z}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_poles() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(n, 0.0)), Err(CoulombError::Pole(_))));
        }
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(branch_log(c(1.0, 0.0), 0).unwrap(), c(0.0, 0.0));
        assert!((branch_log(c(1.0, 0.0), 1).unwrap() - c(0.0, 2.0 * PI)).norm() < 1e-15);
        let z = c(0.5, 0.0);
        let oracle = 0.5 * ((1.0 + z) / (1.0 - z)).ln();
        assert!((branch_arctanh(z, 0).unwrap() - oracle).norm() < 1e-15);
        assert!(matches!(
            branch_log(c(0.0, 0.0), 0),
            Err(CoulombError::BranchPoint { .. })
        ));
        assert!(branch_arctan(c(0.0, 1.0), 0).is_err());
        assert!(branch_arctanh(c(-1.0, 0.0), 2).is_err());
        assert_eq!(branch_sqrt(c(0.0, 0.0), 1).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn sheet_shifts() {
        let z = c(-0.3, 1.7);
        let s0 = branch_sqrt(z, 0).unwrap();
        assert_eq!(branch_sqrt(z, 3).unwrap(), -s0);
        let t0 = branch_arctan(z, 0).unwrap();
        assert!((branch_arctan(z, -2).unwrap() - t0 + 2.0 * PI).norm() < 1e-14);
        let h0 = branch_arctanh(z, 0).unwrap();
        assert!((branch_arctanh(z, 1).unwrap() - h0 - c(0.0, PI)).norm() < 1e-14);
    }

    // Walk once around each branch point of arccos; the sheet reached by the
    // documented winding step must continue the principal value.
    #[test]
    fn arccos_windings_continue_across_cuts() {
        for (centre, step) in [(1.0, -1), (-1.0, 1)] {
            let above = c(centre * 1.5, 1e-9);
            let below = c(centre * 1.5, -1e-9);
            let start = branch_arccos(above, 0).unwrap();
            let crossed = branch_arccos(below, step).unwrap();
            assert!((start - crossed).norm() < 1e-6, "{start} vs {crossed}");
        }
        // From sheet 1 (2π - w), crossing [1, ∞) moves to sheet 2 (w + 2π).
        let a = branch_arccos(c(1.5, 1e-9), 1).unwrap();
        let b = branch_arccos(c(1.5, -1e-9), 2).unwrap();
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn cut_crossing_geometry() {
        assert!(BranchedFn::Log.crosses_cut(c(-1.0, 0.1), c(-1.0, -0.1)));
        assert!(!BranchedFn::Log.crosses_cut(c(1.0, 0.1), c(1.0, -0.1)));
        assert!(BranchedFn::Arctan.crosses_cut(c(0.1, 2.0), c(-0.1, 2.0)));
        assert!(!BranchedFn::Arctan.crosses_cut(c(0.1, 0.5), c(-0.1, 0.5)));
        assert!(BranchedFn::Arctanh.crosses_cut(c(1.5, 0.1), c(1.5, -0.1)));
        assert!(!BranchedFn::Arccos.crosses_cut(c(0.5, 0.1), c(0.5, -0.1)));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn z_strategy() -> impl Strategy<Value = Complex64> {
        (-30.0f64..30.0, -30.0f64..30.0).prop_map(|(re, im)| Complex64::new(re, im))
    }

    proptest! {
        #[test]
        fn log_inverts_exp(z in z_strategy()) {
            prop_assume!(z.norm() > 1e-3);
            let back = branch_log(z, 0).unwrap().exp();
            prop_assert!((back - z).norm() <= 1e-14 * z.norm());
        }

        #[test]
        fn sqrt_squares_back(z in z_strategy()) {
            let r = branch_sqrt(z, 0).unwrap();
            prop_assert!((r * r - z).norm() <= 1e-14 * z.norm().max(1e-300));
        }

        #[test]
        fn log_gamma_recurrence(z in z_strategy()) {
            prop_assume!(z.im.abs() > 1e-3 || z.re > 0.0);
            let step = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
            let k = step.im / (2.0 * PI);
            prop_assert!(step.re.abs() < 1e-11 * (1.0 + z.norm()));
            prop_assert!((k - k.round()).abs() < 1e-11 * (1.0 + z.norm()));
            if z.re > 0.0 {
                prop_assert!(step.norm() < 1e-11 * (1.0 + z.norm()));
            }
        }

        #[test]
        fn log_gamma_conjugation(z in z_strategy()) {
            prop_assume!(z.im.abs() > 1e-6 || z.re > 0.0);
            let a = log_gamma(z.conj()).unwrap();
            let b = log_gamma(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
        }
    }
}
