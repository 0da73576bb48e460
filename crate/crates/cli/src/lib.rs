//! Command-line front end for `coulomb-wkb`: parameter sweeps written as
//! CSV, WKB-versus-exact error reports, and an invariant self-check.

pub mod compare;
pub mod error;
pub mod record;
pub mod selfcheck;
pub mod spec;
pub mod sweep;

pub use compare::{compare, CompareReport, FunctionSummary};
pub use error::CliError;
pub use record::{write_csv, EvaluationRecord, CSV_HEADER};
pub use selfcheck::{selfcheck, CheckResult, Probes, SelfcheckReport};
pub use spec::{Backend, SweepSpec};
pub use sweep::{evaluate, sweep_records};
