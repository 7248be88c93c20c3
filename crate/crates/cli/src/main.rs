//! `lnd-lab`: command-line front end for locally nilpotent derivation computations.
//!
//! Exit codes: 0 on success, 1 when the mathematics rejects the job, 2 when
//! the job or its input cannot be read. Errors are a single stderr line
//! starting with `error[<kind>]:`.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lnd_core::kernel::DEFAULT_PIECE_LIMIT;
use lnd_core::{par, Error, DEFAULT_CAP};
use serde_json::json;

use commands::{KernelArgs, Report, Settings};
use source::Source;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(Error::Parse { .. }) => "parse",
            CliError::Core(Error::Input(_)) => "input",
            CliError::Core(_) => "domain",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind() {
            "domain" => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        let m = match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
        };
        m.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "lnd-lab", version, about = "Exact computations with locally nilpotent derivations")]
struct Cli {
    /// Input file in the ring/derivation/module format.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Catalog entry instead of an input file (see `lnd-lab examples`).
    #[arg(long, global = true, value_name = "ID")]
    example: Option<String>,
    /// Catalog parameter, e.g. `--param n=3`.
    #[arg(long = "param", global = true, value_name = "K=V")]
    params: Vec<String>,
    /// Derivation to use when the input defines several.
    #[arg(long, global = true, value_name = "NAME")]
    derivation: Option<String>,
    /// Act on a module; `--module=NAME` picks one when the input defines several.
    #[arg(long, global = true, value_name = "NAME", num_args = 0..=1, require_equals = true, default_missing_value = "")]
    module: Option<String>,
    /// Second module for `tensor` and `hom`.
    #[arg(long, global = true, value_name = "NAME")]
    other: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for graded pieces; 1 runs sequentially, 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Iteration cap for nilpotency checks.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct KernelOpts {
    /// Largest positive degree to compute.
    #[arg(long)]
    max_weight: Option<i64>,
    /// Single weight, comma separated; prints a basis of that piece only.
    #[arg(long)]
    target: Option<String>,
    /// Weight rows `a,b,c;d,e,f` instead of inferred ones.
    #[arg(long)]
    weights: Option<String>,
    /// Pieces with more monomials are skipped.
    #[arg(long, default_value_t = DEFAULT_PIECE_LIMIT)]
    piece_limit: usize,
    /// Print the basis of every nonzero piece.
    #[arg(long)]
    show_basis: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries.
    Examples,
    /// Certify local nilpotency (triangular order or iteration on variables).
    CheckLnd,
    /// Apply the derivation (or the module derivation with --module) to an element.
    Apply {
        expr: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// The exponential map φ_t.
    PhiT {
        expr: String,
        #[arg(long, default_value = "t")]
        var: String,
    },
    /// δ-degree of an element.
    Nu { expr: String },
    /// Kernel images φ_{-u}(g) for a slice u; generators default to the variables.
    SliceKernel {
        #[arg(long)]
        slice: String,
        generators: Vec<String>,
    },
    /// Kernel elements over B[1/δ(u')] for a local slice u'.
    LocalSliceKernel {
        #[arg(long)]
        slice: String,
        generators: Vec<String>,
    },
    /// Truncated kernel of the derivation.
    Kernel(KernelOpts),
    /// Truncated kernel of a module derivation.
    ModuleKernel {
        #[command(flatten)]
        opts: KernelOpts,
        /// Use the module of differentials of the derivation.
        #[arg(long)]
        omega: bool,
    },
    /// Module of differentials; `--differential f` also prints df and δ(df).
    Omega {
        #[arg(long)]
        differential: Option<String>,
    },
    /// Derivation on the symmetric algebra of a free module.
    SymExtend {
        #[arg(long)]
        omega: bool,
    },
    /// Tensor product with the `--other` module, by default with itself.
    Tensor {
        #[arg(long)]
        omega: bool,
    },
    /// Hom into the `--other` module, by default into itself.
    Hom {
        #[arg(long)]
        omega: bool,
    },
    /// Whether an ideal (or submodule) is stable under the derivation.
    DeltaIdealCheck {
        #[arg(long)]
        ideal: Option<String>,
        /// Comma separated module elements.
        #[arg(long)]
        submodule: Option<String>,
        #[arg(long)]
        omega: bool,
    },
    /// Kuroda's feasibility criterion for monomial derivations.
    Kuroda {
        #[arg(long)]
        trace: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Examples => "examples",
            Command::CheckLnd => "check-lnd",
            Command::Apply { .. } => "apply",
            Command::PhiT { .. } => "phi-t",
            Command::Nu { .. } => "nu",
            Command::SliceKernel { .. } => "slice-kernel",
            Command::LocalSliceKernel { .. } => "local-slice-kernel",
            Command::Kernel(_) => "kernel",
            Command::ModuleKernel { .. } => "module-kernel",
            Command::Omega { .. } => "omega",
            Command::SymExtend { .. } => "sym-extend",
            Command::Tensor { .. } => "tensor",
            Command::Hom { .. } => "hom",
            Command::DeltaIdealCheck { .. } => "delta-ideal-check",
            Command::Kuroda { .. } => "kuroda",
        }
    }
}

fn kernel_args(o: &KernelOpts) -> KernelArgs<'_> {
    KernelArgs {
        max_weight: o.max_weight,
        target: o.target.as_deref(),
        weights: o.weights.as_deref(),
        show_basis: o.show_basis,
    }
}

fn dispatch(cli: &Cli) -> Result<(Report, serde_json::Value), CliError> {
    if let Command::Examples = cli.command {
        return Ok((commands::examples(), json!(null)));
    }
    let (loaded, src_json) = source::load(cli.input.as_deref(), cli.example.as_deref(), &cli.params)?;
    let src = Source {
        loaded,
        json: src_json,
        derivation: cli.derivation.clone(),
        module: cli.module.clone().map(|m| if m.is_empty() { None } else { Some(m) }),
        other: cli.other.clone(),
    };
    let piece_limit = match &cli.command {
        Command::Kernel(o) | Command::ModuleKernel { opts: o, .. } => o.piece_limit,
        _ => DEFAULT_PIECE_LIMIT,
    };
    let s = Settings { cap: cli.cap, parallel: cli.jobs != 1, piece_limit };
    let report = match &cli.command {
        Command::Examples => unreachable!(),
        Command::CheckLnd => commands::check_lnd(&src, s.cap),
        Command::Apply { expr, times } => commands::apply(&src, expr, *times),
        Command::PhiT { expr, var } => commands::phi_t(&src, expr, var, s.cap),
        Command::Nu { expr } => commands::nu(&src, expr, s.cap),
        Command::SliceKernel { slice, generators } => commands::slice_kernel(&src, slice, generators),
        Command::LocalSliceKernel { slice, generators } => commands::local_slice_kernel(&src, slice, generators),
        Command::Kernel(o) => commands::kernel(&src, &kernel_args(o), &s),
        Command::ModuleKernel { opts, omega } => commands::module_kernel(&src, &kernel_args(opts), *omega, &s),
        Command::Omega { differential } => commands::omega_cmd(&src, differential.as_deref()),
        Command::SymExtend { omega } => commands::sym_extend_cmd(&src, *omega),
        Command::Tensor { omega } => commands::tensor_cmd(&src, *omega, false),
        Command::Hom { omega } => commands::tensor_cmd(&src, *omega, true),
        Command::DeltaIdealCheck { ideal, submodule, omega } => {
            commands::delta_ideal_check(&src, ideal.as_deref(), submodule.as_deref(), *omega)
        }
        Command::Kuroda { trace } => commands::kuroda(&src, *trace, s.parallel),
    }?;
    Ok((report, src.json))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let head: Vec<&str> =
                msg.lines().take_while(|l| !l.starts_with("Usage:")).map(str::trim).filter(|l| !l.is_empty()).collect();
            eprintln!("error[usage]: {}", head.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match par::with_jobs(cli.jobs, || dispatch(&cli)) {
        Ok((report, src_json)) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => {
                    let doc = json!({
                        "schema": 1,
                        "command": cli.command.name(),
                        "source": src_json,
                        "result": report.result,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
