use std::io::{self, Write};

use coulomb_wkb::CoulombQuad;
use num_complex::Complex64;

pub const CSV_HEADER: &str =
    "rho_re,rho_im,f_re,f_im,fp_re,fp_im,g_re,g_im,gp_re,gp_im,backend,wronskian_error";

/// One CSV row. A point where the backend failed keeps its `ρ`, carries
/// `nan` in every value column and `<backend>:error` as its backend.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    pub rho_re: f64,
    pub rho_im: f64,
    pub f_re: f64,
    pub f_im: f64,
    pub fp_re: f64,
    pub fp_im: f64,
    pub g_re: f64,
    pub g_im: f64,
    pub gp_re: f64,
    pub gp_im: f64,
    pub backend: String,
    pub wronskian_error: f64,
}

impl EvaluationRecord {
    pub fn new(rho: Complex64, quad: &CoulombQuad, backend: &str) -> Self {
        EvaluationRecord {
            rho_re: rho.re,
            rho_im: rho.im,
            f_re: quad.f.re,
            f_im: quad.f.im,
            fp_re: quad.fp.re,
            fp_im: quad.fp.im,
            g_re: quad.g.re,
            g_im: quad.g.im,
            gp_re: quad.gp.re,
            gp_im: quad.gp.im,
            backend: backend.to_string(),
            wronskian_error: quad.wronskian_error(),
        }
    }

    pub fn failed(rho: Complex64, backend: &str) -> Self {
        let nan = f64::NAN;
        EvaluationRecord {
            rho_re: rho.re,
            rho_im: rho.im,
            f_re: nan,
            f_im: nan,
            fp_re: nan,
            fp_im: nan,
            g_re: nan,
            g_im: nan,
            gp_re: nan,
            gp_im: nan,
            backend: format!("{backend}:error"),
            wronskian_error: nan,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.backend.ends_with(":error")
    }

    pub fn quad(&self) -> CoulombQuad {
        CoulombQuad {
            f: Complex64::new(self.f_re, self.f_im),
            fp: Complex64::new(self.fp_re, self.fp_im),
            g: Complex64::new(self.g_re, self.g_im),
            gp: Complex64::new(self.gp_re, self.gp_im),
        }
    }

    pub fn csv_row(&self) -> String {
        let nums = [
            self.rho_re,
            self.rho_im,
            self.f_re,
            self.f_im,
            self.fp_re,
            self.fp_im,
            self.g_re,
            self.g_im,
            self.gp_re,
            self.gp_im,
        ];
        let mut row: Vec<String> = nums.iter().map(|&v| fmt17(v)).collect();
        row.push(self.backend.clone());
        row.push(fmt17(self.wronskian_error));
        row.join(",")
    }
}

/// 17 significant digits in scientific notation; `nan`, `inf`, `-inf` for
/// non-finite values.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_csv<W: Write>(records: &[EvaluationRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1.0] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
        assert_eq!(fmt17(f64::NAN), "nan");
    }

    #[test]
    fn header_matches_row_width() {
        let q = CoulombQuad {
            f: Complex64::new(1.0, 0.0),
            fp: Complex64::new(0.0, 0.0),
            g: Complex64::new(0.0, 0.0),
            gp: Complex64::new(-1.0, 0.0),
        };
        let row = EvaluationRecord::new(Complex64::new(2.0, 0.0), &q, "wkb").csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        let failed = EvaluationRecord::failed(Complex64::new(2.0, 0.0), "exact");
        assert!(failed.is_failure());
        assert!(failed.csv_row().contains(",exact:error,nan"));
    }
}
