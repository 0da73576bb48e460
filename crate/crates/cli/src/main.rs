use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coulomb_cli::{compare, selfcheck, sweep_records, write_csv, Backend, CliError, Probes, SweepSpec};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "coulomb", version, about = "Coulomb wave functions from the uniform WKB approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F, F', G, G' on a grid and write CSV.
    Sweep(GridArgs),
    /// Relative error of WKB against the exact backend.
    Compare(GridArgs),
    /// Run the invariant suite.
    Selfcheck,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    ell_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    ell_im: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    eta_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta_im: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    rho_min: f64,
    #[arg(long, default_value_t = 60.0, allow_negative_numbers = true)]
    rho_max: f64,
    #[arg(long, default_value_t = 120)]
    rho_points: usize,
    /// Argument of ρ in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    rho_arg: f64,
    #[arg(long, value_enum, default_value_t = Backend::Both)]
    backend: Backend,
    /// Output file; standard output when absent. For compare, the per-point CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GridArgs {
    fn spec(self) -> SweepSpec {
        SweepSpec {
            ell: Complex64::new(self.ell_re, self.ell_im),
            eta: Complex64::new(self.eta_re, self.eta_im),
            rho_min: self.rho_min,
            rho_max: self.rho_max,
            rho_points: self.rho_points,
            rho_arg: self.rho_arg,
            backend: self.backend,
            out: self.out,
        }
    }
}

fn with_output(
    path: Option<&PathBuf>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    let wrap = |p: &PathBuf| {
        let path = p.display().to_string();
        move |source| CliError::Output { path, source }
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(wrap(p))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(wrap(p))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).map_err(|source| CliError::Output { path: "<stdout>".into(), source })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Sweep(args) => {
            let spec = args.spec();
            let rows = sweep_records(&spec)?;
            with_output(spec.out.as_ref(), |w| write_csv(&rows, w))?;
        }
        Command::Compare(args) => {
            let spec = args.spec();
            let report = compare(&spec)?;
            match &spec.out {
                Some(p) => {
                    with_output(Some(p), |w| report.write_csv(w))?;
                    print!("{}", report.text());
                }
                None => {
                    eprint!("{}", report.text());
                    with_output(None, |w| report.write_csv(w))?;
                }
            }
        }
        Command::Selfcheck => {
            let report = selfcheck(&Probes::default());
            print!("{}", report.text());
            if !report.passed() {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.downcast_ref::<CliError>().map_or(2, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
