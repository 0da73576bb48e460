use coulomb_wkb::exactref::exact_quad;
use coulomb_wkb::wkb::wkb_quad;
use coulomb_wkb::{ComplexParams, CoulombQuad};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::CliError;
use crate::record::EvaluationRecord;
use crate::spec::{Backend, SweepSpec};

/// One backend at one point. `Backend::Both` evaluates as WKB.
pub fn evaluate(ell: Complex64, eta: Complex64, rho: Complex64, backend: Backend) -> coulomb_wkb::Result<CoulombQuad> {
    let params = ComplexParams::new(ell, eta, rho)?;
    match backend {
        Backend::Wkb | Backend::Both => wkb_quad(&params),
        Backend::Exact => exact_quad(&params),
    }
}

/// Rows in grid order, one per point per backend (WKB before exact).
/// Points are evaluated in parallel.
pub fn sweep_records(spec: &SweepSpec) -> Result<Vec<EvaluationRecord>, CliError> {
    spec.validate()?;
    let backends = spec.backend.expand();
    let records: Vec<EvaluationRecord> = spec
        .grid()
        .into_par_iter()
        .flat_map_iter(|rho| {
            backends.iter().map(move |&b| match evaluate(spec.ell, spec.eta, rho, b) {
                Ok(q) => EvaluationRecord::new(rho, &q, b.name()),
                Err(_) => EvaluationRecord::failed(rho, b.name()),
            })
        })
        .collect();
    if records.iter().all(EvaluationRecord::is_failure) {
        return Err(CliError::Numerical("every grid point failed".into()));
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(points: usize, backend: Backend) -> SweepSpec {
        SweepSpec {
            ell: Complex64::new(2.0, 0.0),
            eta: Complex64::new(10.0, 0.0),
            rho_min: 1.0,
            rho_max: 60.0,
            rho_points: points,
            rho_arg: 0.0,
            backend,
            out: None,
        }
    }

    #[test]
    fn row_count_contract() {
        assert_eq!(sweep_records(&spec(2, Backend::Wkb)).unwrap().len(), 2);
        let both = sweep_records(&spec(5, Backend::Both)).unwrap();
        assert_eq!(both.len(), 10);
        assert_eq!(both[0].backend, "wkb");
        assert_eq!(both[1].backend, "exact");
        assert_eq!(both[0].rho_re, both[1].rho_re);
    }

    #[test]
    fn failed_points_do_not_abort() {
        // ℓ = 0, η = 0: no turning point, so every WKB point fails.
        let s = SweepSpec { ell: Complex64::new(0.0, 0.0), eta: Complex64::new(0.0, 0.0), ..spec(3, Backend::Both) };
        let rows = sweep_records(&s).unwrap();
        assert!(rows.iter().filter(|r| r.backend == "wkb:error").count() == 3);
        assert!(rows.iter().filter(|r| r.backend == "exact").count() == 3);
        let s = SweepSpec { backend: Backend::Wkb, ..s };
        assert!(matches!(sweep_records(&s), Err(CliError::Numerical(_))));
    }
}
