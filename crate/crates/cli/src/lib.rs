//! Command-line front end: reads a document, runs one command, renders the
//! report. Exit codes are 0 (all checks pass), 1 (a check failed) and 2
//! (the input could not be used).

pub mod commands;
pub mod document;
pub mod emit;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use deformq_core::{Report, Result};

use commands::Options;
use document::Document;
use emit::Format;

#[derive(Debug, Parser)]
#[command(name = "deformq", version, about = "Exact checks for formal deformations of polynomial algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Input document, or `-` for stdin.
    doc: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total degree of the monomial grid used by identity checks.
    #[arg(long, default_value_t = 3)]
    grid_degree: u32,
    /// Random series added to every grid.
    #[arg(long, default_value_t = 2)]
    samples: usize,
    /// Largest number of morphisms enumerated by the groupoid checks.
    #[arg(long, default_value_t = 400)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Maurer-Cartan equation for `omega`.
    CheckMc(Common),
    /// Star product of `a` and `b`.
    StarMul(Common),
    /// Transport `omega` along `exp(gamma)`.
    GaugeApply(Common),
    /// Baker-Campbell-Hausdorff series of `gamma1` and `gamma2`.
    Bch(Common),
    /// Poisson bracket of `a` and `b`, with Jacobi and Leibniz checks.
    Poisson(Common),
    /// Crossed groupoid axioms of the Deligne groupoid.
    DeligneVerify(Common),
    /// Full geometric verification of a deformation.
    GeoVerify(Common),
    /// Localize at `s` (and `t`) and check the cover square.
    Localize(Common),
    /// Star inverse of `a`.
    StarInverse(Common),
    /// Recover a differential operator from `op` or a point evaluation.
    RecognizeOp {
        #[command(flatten)]
        common: Common,
        /// Test polynomials go up to this total degree.
        #[arg(long)]
        test_degree: Option<u32>,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        #[arg(long, default_value_t = 3)]
        coeff_degree: u32,
    },
    /// Print a document holding the Moyal product of a constant matrix.
    Moyal {
        #[arg(long)]
        d: usize,
        /// Rows separated by `;`, entries by spaces.
        #[arg(long)]
        pi: String,
        #[arg(long = "N")]
        order: usize,
    },
}

type Handler = fn(&Document, &Options) -> Result<Report>;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

/// Run with `stdin` standing in for the process input.
pub fn run_with_input<I, T>(args: I, stdin: &str) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    let (common, opts, f): (&Common, Options, Handler) = match &cli.command {
        Command::Moyal { d, pi, order } => return moyal(*d, pi, *order),
        Command::RecognizeOp {
            common,
            test_degree,
            max_order,
            coeff_degree,
        } => {
            let mut o = options(common);
            o.test_degree = *test_degree;
            o.max_order = *max_order;
            o.coeff_degree = *coeff_degree;
            (common, o, commands::recognize)
        }
        Command::CheckMc(c) => (c, options(c), commands::check_mc),
        Command::StarMul(c) => (c, options(c), commands::star_mul),
        Command::GaugeApply(c) => (c, options(c), commands::gauge_apply),
        Command::Bch(c) => (c, options(c), commands::bch_cmd),
        Command::Poisson(c) => (c, options(c), commands::poisson),
        Command::DeligneVerify(c) => (c, options(c), commands::deligne_verify),
        Command::GeoVerify(c) => (c, options(c), commands::geo),
        Command::Localize(c) => (c, options(c), commands::localize),
        Command::StarInverse(c) => (c, options(c), commands::star_inverse),
    };
    let src = if common.doc == "-" {
        stdin.to_string()
    } else {
        match std::fs::read_to_string(&common.doc) {
            Ok(s) => s,
            Err(e) => return Outcome::usage(format!("error: cannot read {}: {e}\n", common.doc)),
        }
    };
    let report = match Document::parse(&src).and_then(|d| f(&d, &opts)) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("error: {}: {e}\n", common.doc)),
    };
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, emit::json(&report)) {
            return Outcome::usage(format!("error: cannot write {}: {e}\n", path.display()));
        }
    }
    Outcome {
        code: if report.all_passed() { 0 } else { 1 },
        stdout: emit::render(&report, common.format),
        stderr: String::new(),
    }
}

/// Run reading `-` from the real stdin.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let mut stdin = String::new();
    if args.iter().any(|a| a == "-") {
        use std::io::Read;
        if let Err(e) = std::io::stdin().read_to_string(&mut stdin) {
            return Outcome::usage(format!("error: cannot read stdin: {e}\n"));
        }
    }
    run_with_input(args, &stdin)
}

fn options(c: &Common) -> Options {
    Options {
        seed: c.seed,
        grid_degree: c.grid_degree,
        samples: c.samples,
        budget: c.budget,
        ..Options::default()
    }
}

fn moyal(d: usize, pi: &str, order: usize) -> Outcome {
    let doc = commands::parse_matrix(pi).and_then(|m| {
        if m.len() != d || m.iter().any(|row| row.len() != d) {
            return Err(deformq_core::Error::Precondition(format!("--pi must be {d} by {d}")));
        }
        commands::moyal_document(&m, order)
    });
    match doc {
        Ok(text) => Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}
