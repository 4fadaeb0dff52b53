use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlie_core::catalog::{vector_product, BilinearForm, BracketKind};
use nlie_core::charp::CharPSeed;
use nlie_core::error::Error;
use nlie_core::nlie::{FiniteAlgebra, NAryAlgebra};
use nlie_core::report::{charp_lab, pairs_report, verify_finite, verify_polynomial, Report};
use nlie_core::superalgebras::Pair;
use nlie_core::Field;

/// Exact verification of n-Lie algebras and their graded Lie companions.
#[derive(Parser, Debug)]
#[command(name = "nlie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification suite on a catalog algebra or a bracket table.
    Verify(VerifyArgs),
    /// Check one of the four admissible pairs and its induced bracket.
    Pairs(PairsArgs),
    /// The one-dimensional odd n-algebra over F_p.
    Charp(CharpArgs),
    /// Re-render a JSON report as a text summary.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algebra {
    #[value(name = "O")]
    O,
    #[value(name = "S")]
    S,
    #[value(name = "W")]
    W,
    #[value(name = "SW")]
    Sw,
}

#[derive(Args, Debug)]
struct Common {
    /// Base field: `q` or `fp:P`.
    #[arg(long, default_value = "q")]
    field: String,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Catalog algebra; omit when `--table` is given.
    algebra: Option<Algebra>,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Monomial degree window for polynomial carriers.
    #[arg(long, default_value_t = 3)]
    window: u32,
    /// Degree cap for generation (default n + 1).
    #[arg(long)]
    cap: Option<i64>,
    /// Bracket-table file.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Symmetric form for the vector product, one row per line.
    #[arg(long)]
    form: Option<PathBuf>,
    /// Seed for the random-combination spot check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PairsArgs {
    /// i, ii, iii or iv.
    which: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// x-degree window for the realization.
    #[arg(long, default_value_t = 3)]
    xwindow: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CharpArgs {
    #[arg(long)]
    p: u64,
    /// n = s·p + 1.
    #[arg(long, conflicts_with = "n")]
    s: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 15)]
    cap: i64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    path: PathBuf,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn config(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn run_verify(a: &VerifyArgs) -> Result<Report, Error> {
    let field = Field::parse(&a.common.field)?;
    if let Some(path) = &a.table {
        let alg = FiniteAlgebra::from_table_text(&read(path)?)?;
        let n = alg.arity();
        let cap = a.cap.unwrap_or(n as i64 + 1);
        let cfg = config(&[
            ("table", path.display().to_string()),
            ("n", n.to_string()),
            ("cap", cap.to_string()),
            ("field", alg.field().to_string()),
            ("seed", a.seed.to_string()),
        ]);
        return verify_finite(&alg, cap, a.seed, cfg);
    }
    let algebra = a.algebra.ok_or_else(|| Error::InvalidParameter("an algebra (O, S, W, SW) or --table is required".into()))?;
    match algebra {
        Algebra::O => {
            let form = match &a.form {
                Some(p) => BilinearForm::parse(field, &read(p)?)?,
                None => BilinearForm::identity(field, a.n + 1),
            };
            if form.dim() != a.n + 1 {
                return Err(Error::DimensionMismatch { expected: a.n + 1, found: form.dim() });
            }
            let alg = vector_product(form.matrix())?;
            let cap = a.cap.unwrap_or(a.n as i64 + 1);
            let mut cfg = config(&[
                ("algebra", "O".into()),
                ("n", a.n.to_string()),
                ("cap", cap.to_string()),
                ("field", field.to_string()),
                ("seed", a.seed.to_string()),
            ]);
            if let Some(p) = &a.form {
                cfg.insert("form".into(), p.display().to_string());
            }
            verify_finite(&alg, cap, a.seed, cfg)
        }
        other => {
            let (kind, name) = match other {
                Algebra::S => (BracketKind::S, "S"),
                Algebra::W => (BracketKind::W, "W"),
                _ => (BracketKind::SW, "SW"),
            };
            let cfg = config(&[
                ("algebra", name.into()),
                ("n", a.n.to_string()),
                ("window", a.window.to_string()),
                ("field", field.to_string()),
            ]);
            verify_polynomial(field, kind, a.n, a.window, cfg)
        }
    }
}

fn run_pairs(a: &PairsArgs) -> Result<Report, Error> {
    let field = Field::parse(&a.common.field)?;
    let which = Pair::parse(&a.which)?;
    let cfg = config(&[
        ("pair", which.to_string()),
        ("n", a.n.to_string()),
        ("xwindow", a.xwindow.to_string()),
        ("field", field.to_string()),
    ]);
    pairs_report(field, which, a.n, a.xwindow, cfg)
}

fn run_charp(a: &CharpArgs) -> Result<Report, Error> {
    let seed = match (a.s, a.n) {
        (Some(s), _) => CharPSeed::from_s(a.p, s)?,
        (None, Some(n)) => CharPSeed::new(a.p, n)?,
        (None, None) => CharPSeed::from_s(a.p, 1)?,
    };
    let cfg = config(&[("p", seed.p.to_string()), ("n", seed.n.to_string()), ("cap", a.cap.to_string())]);
    charp_lab(&seed, a.cap, cfg)
}

fn emit(report: &Report, json: Option<&PathBuf>) -> Result<(), Error> {
    print!("{}", report.summary());
    if let Some(path) = json {
        std::fs::write(path, report.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => run_verify(a).and_then(|r| emit(&r, a.common.json.as_ref()).map(|_| r)),
        Command::Pairs(a) => run_pairs(a).and_then(|r| emit(&r, a.common.json.as_ref()).map(|_| r)),
        Command::Charp(a) => run_charp(a).and_then(|r| emit(&r, a.json.as_ref()).map(|_| r)),
        Command::Report(a) => read(&a.path).and_then(|t| Report::from_json(&t)).and_then(|r| emit(&r, None).map(|_| r)),
    };
    match result {
        Ok(r) => ExitCode::from(r.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
