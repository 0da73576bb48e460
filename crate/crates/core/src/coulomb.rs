//! Evaluation points and results shared by every backend.

use num_complex::Complex64;

use crate::error::{CoulombError, Result};

/// Sign `ω` selecting `H⁺` (`Plus`) or `H⁻` (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Omega {
    Plus,
    Minus,
}

impl Omega {
    pub fn sign(self) -> f64 {
        match self {
            Omega::Plus => 1.0,
            Omega::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Omega {
        match self {
            Omega::Plus => Omega::Minus,
            Omega::Minus => Omega::Plus,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Omega> {
        match sign {
            1 => Ok(Omega::Plus),
            -1 => Ok(Omega::Minus),
            other => Err(CoulombError::Domain(format!("omega must be +1 or -1, got {other}"))),
        }
    }
}

/// Angular momentum `ℓ`, Sommerfeld parameter `η` and radius `ρ`, all complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParams {
    pub ell: Complex64,
    pub eta: Complex64,
    pub rho: Complex64,
    pub omega: Omega,
}

impl ComplexParams {
    /// Rejects `ρ = 0` and `ρ` on the negative real axis.
    pub fn new(ell: Complex64, eta: Complex64, rho: Complex64) -> Result<Self> {
        check_rho(rho)?;
        for (name, v) in [("ell", ell), ("eta", eta), ("rho", rho)] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(CoulombError::Domain(format!("{name} is not finite: {v}")));
            }
        }
        Ok(ComplexParams { ell, eta, rho, omega: Omega::Plus })
    }

    pub fn real(ell: f64, eta: f64, rho: f64) -> Result<Self> {
        Self::new(ell.into(), eta.into(), rho.into())
    }

    pub fn with_omega(mut self, omega: Omega) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_rho(self, rho: Complex64) -> Result<Self> {
        check_rho(rho)?;
        Ok(ComplexParams { rho, ..self })
    }

    /// `ℓ(ℓ+1)`.
    pub fn centrifugal(&self) -> Complex64 {
        self.ell * (self.ell + 1.0)
    }
}

pub(crate) fn check_rho(rho: Complex64) -> Result<()> {
    if rho == Complex64::new(0.0, 0.0) {
        return Err(CoulombError::Domain("rho must be nonzero".into()));
    }
    if rho.im == 0.0 && rho.re < 0.0 {
        return Err(CoulombError::CutRay(rho));
    }
    Ok(())
}

/// `F`, `F'`, `G`, `G'` at one point; derivatives are with respect to `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombQuad {
    pub f: Complex64,
    pub fp: Complex64,
    pub g: Complex64,
    pub gp: Complex64,
}

impl CoulombQuad {
    /// `F'G - FG'`, equal to 1 for a correctly normalized pair.
    pub fn wronskian(&self) -> Complex64 {
        self.fp * self.g - self.f * self.gp
    }

    pub fn wronskian_error(&self) -> f64 {
        (self.wronskian() - 1.0).norm()
    }

    /// `|F'G| + |FG'|`: the size of the terms that cancel in the Wronskian.
    pub fn wronskian_scale(&self) -> f64 {
        (self.fp * self.g).norm() + (self.f * self.gp).norm()
    }

    /// Wronskian error relative to `max(1, wronskian_scale)`; the absolute
    /// error cannot go below about `ε·wronskian_scale` in double precision.
    pub fn scaled_wronskian_error(&self) -> f64 {
        self.wronskian_error() / self.wronskian_scale().max(1.0)
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.f, self.fp, self.g, self.gp]
    }

    /// `H^ω` and its derivative.
    pub fn h(&self, omega: Omega) -> (Complex64, Complex64) {
        h_from_quad(self, omega)
    }

    /// Rebuilds `F`, `G` from `H⁺`, `H⁻` (and derivatives).
    pub fn from_h_pair(
        h_plus: (Complex64, Complex64),
        h_minus: (Complex64, Complex64),
    ) -> CoulombQuad {
        let i2 = Complex64::new(0.0, 2.0);
        CoulombQuad {
            f: (h_plus.0 - h_minus.0) / i2,
            fp: (h_plus.1 - h_minus.1) / i2,
            g: (h_plus.0 + h_minus.0) * 0.5,
            gp: (h_plus.1 + h_minus.1) * 0.5,
        }
    }
}

/// `(H^ω, H^ω') = (G + iωF, G' + iωF')`.
pub fn h_from_quad(quad: &CoulombQuad, omega: Omega) -> (Complex64, Complex64) {
    let iw = Complex64::new(0.0, omega.sign());
    (quad.g + iw * quad.f, quad.gp + iw * quad.fp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h_of_pure_g_is_one() {
        let q = CoulombQuad { f: c(0.0, 0.0), fp: c(0.0, 0.0), g: c(1.0, 0.0), gp: c(0.0, 0.0) };
        assert_eq!(h_from_quad(&q, Omega::Plus).0, c(1.0, 0.0));
        assert_eq!(h_from_quad(&q, Omega::Minus).0, c(1.0, 0.0));
    }

    #[test]
    fn free_field_gives_plane_waves() {
        let rho = 1.234_f64;
        let q = CoulombQuad {
            f: c(rho.sin(), 0.0),
            fp: c(rho.cos(), 0.0),
            g: c(rho.cos(), 0.0),
            gp: c(-rho.sin(), 0.0),
        };
        for omega in [Omega::Plus, Omega::Minus] {
            let (h, hp) = h_from_quad(&q, omega);
            let want = c(0.0, omega.sign() * rho).exp();
            assert!((h - want).norm() < 1e-15);
            assert!((hp - c(0.0, omega.sign()) * want).norm() < 1e-15);
        }
    }

    #[test]
    fn h_pair_round_trip() {
        let q = CoulombQuad { f: c(0.3, -1.1), fp: c(2.0, 0.5), g: c(-0.7, 0.2), gp: c(0.1, 4.0) };
        let back = CoulombQuad::from_h_pair(q.h(Omega::Plus), q.h(Omega::Minus));
        for (a, b) in back.as_array().iter().zip(q.as_array()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn params_validation() {
        assert!(ComplexParams::real(0.0, 1.0, 0.0).is_err());
        assert!(matches!(ComplexParams::real(0.0, 1.0, -2.0), Err(CoulombError::CutRay(_))));
        assert!(ComplexParams::new(c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 1e-9)).is_ok());
        assert!(Omega::from_sign(0).is_err());
    }
}
