//! `cartier`: Cartier–Manin invariants of plane curves from the command line.
//!
//! Exit codes: 0 on success, 1 when computation paths disagree, 2 on bad input.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use cartier_core::curve::{make_fermat, make_general, make_hurwitz, CurveModel, FamilyKind};
use cartier_core::formulas::Variant;
use cartier_core::input::parse_poly_file;
use cartier_core::par::with_jobs;
use cartier_core::report::ReportDocument;
use cartier_core::singular::scan;
use cartier_core::sweep::{
    golden_records, goldens_to_json_lines, rows_to_csv, rows_to_json_lines, rows_to_table, sweep,
    verify_grid, GridOptions, GridOutcome,
};
use cartier_core::{BuildOptions, Error, Execution};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cartier",
    version,
    about = "Cartier-Manin matrices and invariants of plane curves over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a single curve
    Invariants {
        #[command(subcommand)]
        curve: CurveCmd,
    },
    /// Cross-check matrix, counting and closed forms over a grid of (p, n)
    Verify(VerifyArgs),
    /// Evaluate a closed-form subfamily n = sp+1, sp-1 or sp over ranges of p and s
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum CurveCmd {
    /// x^n + y^n + 1
    Fermat(FamilyArgs),
    /// x^n y + y^n + x
    Hurwitz(FamilyArgs),
    /// Polynomial read from a file (`p <prime>` then `<coeff> <i> <j>` lines)
    General(GeneralArgs),
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(short = 'p')]
    p: u64,
    #[arg(short = 'n')]
    n: u32,
    #[command(flatten)]
    report: ReportOpts,
}

#[derive(Args, Debug)]
struct GeneralArgs {
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    report: ReportOpts,
}

#[derive(Args, Debug)]
struct ReportOpts {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Refuse curves of larger genus
    #[arg(long, default_value_t = 2500)]
    max_genus: usize,
    /// Also search for affine singular points over F_{p^k}, k <= K (at most 4)
    #[arg(long, value_name = "K")]
    scan_singular: Option<u32>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated primes
    #[arg(long, value_delimiter = ',', required_unless_present = "p_max")]
    p_list: Vec<u32>,
    /// All primes up to this bound (alternative to --p-list)
    #[arg(long, conflicts_with = "p_list")]
    p_max: Option<u32>,
    #[arg(long)]
    n_max: u32,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Fam::Fermat, Fam::Hurwitz])]
    family: Vec<Fam>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 2500)]
    max_genus: usize,
    /// Write matrix-path goldens for the grid to DIR/reports.jsonl
    #[arg(long, value_name = "DIR")]
    seed_goldens: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(value_enum)]
    family: Fam,
    #[arg(long, value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, value_delimiter = ',', required = true)]
    p_list: Vec<u32>,
    /// Range of s, written a..b (inclusive)
    #[arg(long = "s", value_parser = parse_range)]
    s: RangeInclusive<u32>,
    /// Closed forms and counting only
    #[arg(long)]
    no_matrix: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, default_value_t = 2500)]
    max_genus: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fam {
    Fermat,
    Hurwitz,
}

impl From<Fam> for FamilyKind {
    fn from(f: Fam) -> Self {
        match f {
            Fam::Fermat => FamilyKind::Fermat,
            Fam::Hurwitz => FamilyKind::Hurwitz,
        }
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("invalid number {t:?}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if a == 0 || a > b {
        return Err(format!("expected 1 <= a <= b in a..b, got {s:?}"));
    }
    Ok(a..=b)
}

// Outcome of a subcommand that ran to completion.
enum Status {
    Agree,
    Disagree,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Agree) => ExitCode::SUCCESS,
        Ok(Status::Disagree) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Status, Error> {
    match cli.command {
        Command::Invariants { curve } => {
            let (curve, opts) = match curve {
                CurveCmd::Fermat(a) => (make_fermat(a.p, a.n)?, a.report),
                CurveCmd::Hurwitz(a) => (make_hurwitz(a.p, a.n)?, a.report),
                CurveCmd::General(a) => {
                    let (field, poly) = parse_poly_file(&a.file)?;
                    (make_general(field.modulus() as u64, poly)?, a.report)
                }
            };
            invariants(&curve, &opts)
        }
        Command::Verify(a) => {
            let jobs = a.jobs;
            with_jobs(jobs, || verify(a))
        }
        Command::Sweep(a) => {
            let jobs = a.jobs;
            with_jobs(jobs, || run_sweep(a))
        }
    }
}

fn invariants(curve: &CurveModel, opts: &ReportOpts) -> Result<Status, Error> {
    if curve.genus() > opts.max_genus {
        return Err(Error::GenusGuard {
            genus: curve.genus(),
            max: opts.max_genus,
        });
    }
    if let Some(k) = opts.scan_singular {
        let report = scan(curve, k)?;
        eprintln!("singularity scan: {}", report.summary());
        for pt in &report.points {
            eprintln!("  singular point {pt}");
        }
    }
    let doc = with_jobs(opts.jobs, || {
        ReportDocument::compute(curve, BuildOptions::default())
    })?;
    let text = match opts.format {
        Format::Table => doc.to_table(),
        Format::Json => doc.to_json()? + "\n",
        Format::Csv => doc.to_csv()?,
    };
    print!("{text}");
    Ok(if doc.agree() {
        Status::Agree
    } else {
        Status::Disagree
    })
}

fn primes_up_to(bound: u32) -> Vec<u32> {
    (2..=bound)
        .filter(|&q| cartier_core::field::is_prime(q as u64))
        .collect()
}

fn check_grid_genus(n_max: u32, families: &[FamilyKind], max_genus: usize) -> Result<(), Error> {
    let n = n_max as usize;
    let worst = families
        .iter()
        .map(|f| match f {
            FamilyKind::Hurwitz => n * n.saturating_sub(1) / 2,
            _ => n.saturating_sub(1) * n.saturating_sub(2) / 2,
        })
        .max()
        .unwrap_or(0);
    if worst > max_genus {
        return Err(Error::GenusGuard {
            genus: worst,
            max: max_genus,
        });
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<Status, Error> {
    let p_list = match a.p_max {
        Some(bound) => primes_up_to(bound),
        None => a.p_list,
    };
    if p_list.is_empty() {
        return Err(Error::InvalidArgument("no primes to verify".into()));
    }
    let families: Vec<FamilyKind> = a.family.iter().map(|&f| f.into()).collect();
    check_grid_genus(a.n_max, &families, a.max_genus)?;
    let opts = GridOptions {
        exec: Execution::Parallel,
        with_matrix: true,
        max_genus: a.max_genus,
    };
    let outcome = verify_grid(&p_list, a.n_max, &families, opts)?;

    if let Some(dir) = &a.seed_goldens {
        let records = golden_records(&p_list, a.n_max, &families, Execution::Parallel)?;
        std::fs::create_dir_all(dir)?;
        let path = dir.join("reports.jsonl");
        std::fs::write(&path, goldens_to_json_lines(&records)?)?;
        eprintln!(
            "wrote {} golden records to {}",
            records.len(),
            path.display()
        );
    }
    emit(&outcome, a.format)
}

fn run_sweep(a: SweepArgs) -> Result<Status, Error> {
    let family: FamilyKind = a.family.into();
    if !a.no_matrix {
        let worst = a
            .p_list
            .iter()
            .filter_map(|&p| a.variant.degree_parameter(p, *a.s.end()))
            .max()
            .unwrap_or(0);
        check_grid_genus(worst, &[family], a.max_genus)?;
    }
    let opts = GridOptions {
        exec: Execution::Parallel,
        with_matrix: !a.no_matrix,
        max_genus: a.max_genus,
    };
    let outcome = sweep(family, a.variant, &a.p_list, a.s.clone(), opts)?;
    emit(&outcome, a.format)
}

fn emit(outcome: &GridOutcome, format: Format) -> Result<Status, Error> {
    let text = match format {
        Format::Table => rows_to_table(&outcome.rows),
        Format::Json => rows_to_json_lines(&outcome.rows)?,
        Format::Csv => rows_to_csv(&outcome.rows)?,
    };
    print!("{text}");
    for s in &outcome.skipped {
        eprintln!("skipped {} p={} n={}: {}", s.family, s.p, s.n, s.reason);
    }
    let mut status = Status::Agree;
    for row in outcome.disagreements() {
        status = Status::Disagree;
        eprintln!(
            "disagreement {} p={} n={}: {}",
            row.family,
            row.p,
            row.n,
            row.note.as_deref().unwrap_or("paths differ")
        );
    }
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..4").unwrap(), 1..=4);
        assert_eq!(parse_range("2..=3").unwrap(), 2..=3);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("4..1").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn grid_guard() {
        assert!(check_grid_genus(11, &[FamilyKind::Fermat], 45).is_ok());
        assert!(check_grid_genus(11, &[FamilyKind::Hurwitz], 45).is_err());
        assert_eq!(primes_up_to(12), [2, 3, 5, 7, 11]);
    }
}
