//! `akr8`: exact hybrid sums of cubic-field ideal counts against the
//! eight-squares function, plus the analytic main term they track.

use akr8::{checkpoint, csvio, jsonio, parallel, verify, CliError};
use akr8_core::field::CubicField;
use akr8_core::hybrid::GridSpec;
use akr8_core::{fit, series, SplittingTable};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "akr8", version, about, max_term_width = 100)]
struct Cli {
    /// Suppress timestamps so identical configurations give identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads (default: AKR8_WORKERS env var, then 1).
    #[arg(long, global = true)]
    workers: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PolyArg {
    /// Coefficients a,b,c of the monic cubic x^3 + a x^2 + b x + c.
    #[arg(long, value_parser = akr8::parse_poly, allow_hyphen_values = true)]
    poly: (i64, i64, i64),
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a field: discriminant and the maximality certificate.
    Field {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Tabulate the ideal-count coefficients a_K(n), n <= limit.
    Ak {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate r_8(n), n <= limit.
    R8 {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact hybrid sums S(x) on a sample grid, written as CSV.
    Sum {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        limit: u64,
        /// Geometric grid ratio (> 1).
        #[arg(long, conflicts_with = "grid_file")]
        grid_ratio: Option<f64>,
        /// File with one explicit grid point per line.
        #[arg(long)]
        grid_file: Option<PathBuf>,
        /// Reuse/store the computed series at this path.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Main-term coefficients c1, c0 and all constituent values, as JSON.
    Constants {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 100_000)]
        prime_cutoff: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit sampled sums against the analytic main term.
    Fit {
        /// Series CSV produced by `sum`.
        #[arg(long)]
        input: PathBuf,
        /// Constants JSON produced by `constants`.
        #[arg(long)]
        constants: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        x_min: u64,
        /// Relative tolerance on c1 agreement.
        #[arg(long, default_value_t = 0.05)]
        c1_tolerance: f64,
        /// Residual-slope acceptance window.
        #[arg(long, default_value_t = 3.0)]
        slope_min: f64,
        #[arg(long, default_value_t = 4.0)]
        slope_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity/oracle suites and print a pass/fail table.
    Verify {
        #[command(flatten)]
        poly: PolyArg,
        /// Shrink ranges for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = akr8::resolve_workers(cli.workers);
    match run(cli, workers) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => csvio::write_file(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn field_for(poly: (i64, i64, i64)) -> Result<CubicField, CliError> {
    Ok(CubicField::new(poly.0, poly.1, poly.2)?)
}

fn run(cli: Cli, workers: u32) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::Field { poly } => {
            let field = field_for(poly.poly)?;
            let (a, b, c) = field.coefficients();
            println!("poly: x^3 + ({a})x^2 + ({b})x + ({c})");
            println!("D_K = {}", field.field_disc());
            if field.certificate().is_empty() {
                println!("certificate: OK (polynomial discriminant squarefree)");
            } else {
                for &(p, ok) in field.certificate() {
                    println!(
                        "certificate: p = {p} {}",
                        if ok { "maximal (Dedekind criterion)" } else { "NOT MAXIMAL" }
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ak { poly, limit, out } => {
            let field = field_for(poly.poly)?;
            let table = parallel::build_table(&field, limit, workers)?;
            let sieved =
                akr8_core::arith::sieve_multiplicative(&table.spec_ak(), limit, 1 << 18)?;
            let content = csvio::write_pairs_i128(
                "n,ak",
                (1..=limit).map(|n| (n, sieved.get(n))),
                Some(poly.poly),
                cli.deterministic,
            );
            emit(out.as_deref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::R8 { limit, out } => {
            let mut rows = Vec::with_capacity(limit as usize);
            for n in 1..=limit {
                rows.push((n, akr8_core::squares::r8(n)?));
            }
            let content =
                csvio::write_pairs_i128("n,r8", rows.into_iter(), None, cli.deterministic);
            emit(out.as_deref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sum { poly, limit, grid_ratio, grid_file, checkpoint: ckpt, out } => {
            let field = field_for(poly.poly)?;
            let grid_spec = match (grid_ratio, grid_file) {
                (Some(r), None) => GridSpec::Geometric { ratio: r },
                (None, Some(f)) => {
                    let text = csvio::read_file(&f)?;
                    let mut pts = Vec::new();
                    for line in text.lines() {
                        let line = line.trim();
                        if line.is_empty() || line.starts_with('#') {
                            continue;
                        }
                        pts.push(line.parse::<u64>().map_err(|_| CliError::Corruption {
                            path: f.display().to_string(),
                            reason: format!("bad grid point {line:?}"),
                        })?);
                    }
                    GridSpec::Explicit(pts)
                }
                (None, None) => GridSpec::default_geometric(),
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let series = match &ckpt {
                Some(path) if path.exists() => {
                    let series = checkpoint::load_for(path, poly.poly)?;
                    if series.limit != limit {
                        return Err(CliError::Corruption {
                            path: path.display().to_string(),
                            reason: format!(
                                "checkpoint limit {} does not match requested {limit}",
                                series.limit
                            ),
                        });
                    }
                    series
                }
                _ => {
                    let table = parallel::build_table(&field, limit, workers)?;
                    let series = parallel::hybrid_sum(
                        &table,
                        limit,
                        &grid_spec,
                        akr8_core::hybrid::DEFAULT_SEGMENT_SIZE,
                        workers,
                    )?;
                    if let Some(path) = &ckpt {
                        checkpoint::save(&series, path)?;
                    }
                    series
                }
            };
            csvio::write_file(&out, &csvio::write_series(&series, cli.deterministic))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Constants { poly, prime_cutoff, out } => {
            let field = field_for(poly.poly)?;
            let table = SplittingTable::build(&field, prime_cutoff.max(1_000));
            let coeffs = series::main_term_coeffs(&table, prime_cutoff)?;
            let doc = jsonio::ConstantsDoc::from_coeffs(poly.poly, &coeffs);
            emit(
                out.as_deref(),
                &jsonio::render(&doc, Some(poly.poly), workers, cli.deterministic),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fit { input, constants, x_min, c1_tolerance, slope_min, slope_max, out } => {
            let series = csvio::read_series(&csvio::read_file(&input)?, &input)?;
            let cdoc: jsonio::ConstantsDoc =
                jsonio::parse(&csvio::read_file(&constants)?, &constants)?;
            if cdoc.poly != [series.poly.0, series.poly.1, series.poly.2] {
                return Err(CliError::FieldMismatch {
                    path: constants.display().to_string(),
                    found: (cdoc.poly[0], cdoc.poly[1], cdoc.poly[2]),
                    expected: series.poly,
                });
            }
            let fitted = fit::fit_main_term(&series, x_min)?;
            let analytic = verify::analytic_stub(cdoc.c1, cdoc.c0);
            let residual = fit::residual_exponent(&series, &analytic, x_min)?;
            let tol = jsonio::Tolerances {
                c1_rel: c1_tolerance,
                slope_min,
                slope_max,
            };
            let doc = jsonio::FitDoc::build(&fitted, &residual, &cdoc, x_min, tol);
            let pass = doc.pass.all;
            emit(
                out.as_deref(),
                &jsonio::render(&doc, Some(series.poly), workers, cli.deterministic),
            )?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Verify { poly, quick } => {
            let field = field_for(poly.poly)?;
            let report = verify::run(&field, quick, workers)?;
            print!("{}", report.render_table());
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                println!("verification FAILED");
                ExitCode::from(1)
            })
        }
    }
}
