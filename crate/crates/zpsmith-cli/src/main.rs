use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;
use zpsmith::Int;
use zpsmith_cli::commands::{self, parse_bytes};
use zpsmith_cli::error::CliError;
use zpsmith_cli::files::{to_json, write_text};

#[derive(Parser)]
#[command(
    name = "zpsmith",
    version,
    about = "Smith classes and index of simplicial Z_p-complexes"
)]
struct Cli {
    /// Abort with exit code 3 when matrices would exceed this many bytes (suffix K, M or G).
    #[arg(long, global = true, value_parser = parse_bytes)]
    memory_cap: Option<usize>,

    /// More logging (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex file and print its size.
    Validate { file: PathBuf },
    /// Smith classes, index and certificates.
    Smith {
        file: PathBuf,
        /// Also report the index mod p^m.
        #[arg(long = "mod")]
        mod_exp: Option<u32>,
        /// Stop after this class dimension.
        #[arg(long)]
        max_dim: Option<i32>,
        /// Skip certificates.
        #[arg(long)]
        no_certificates: bool,
    },
    /// Torsion certificate for one class.
    Certificate {
        file: PathBuf,
        #[arg(long = "dim")]
        dim: i32,
        /// Modulus n; defaults to the smallest p^m the class is nonzero modulo.
        #[arg(long = "mod")]
        modulus: Option<String>,
    },
    /// Join of two Z_p-complexes.
    Join {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Deleted join (default) or deleted product of a simplicial complex.
    Deleted {
        file: PathBuf,
        #[arg(long, conflicts_with = "product")]
        join: bool,
        #[arg(long)]
        product: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smith data of a join from the factors' resolutions.
    JoinSmith {
        left: PathBuf,
        right: PathBuf,
        /// Also resolve the join directly and compare.
        #[arg(long)]
        direct: bool,
    },
    /// Embeddability verdict for M*N in R^{2(dim M + dim N + 1)}.
    EmbedVerdict {
        left: PathBuf,
        right: PathBuf,
        /// Cross-check each obstruction on the deleted product.
        #[arg(long)]
        product_check: bool,
    },
    /// Write a built-in complex.
    Corpus {
        name: String,
        params: Vec<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        file: PathBuf,
        /// Also print U, S, V with A = V S U.
        #[arg(long)]
        full: bool,
    },
}

fn emit(v: &Value, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(p) => write_text(p, &to_json(v)),
        None => {
            print!("{}", to_json(v));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cap = cli.memory_cap;
    match cli.command {
        Command::Validate { file } => emit(&commands::cmd_validate(&file)?, None),
        Command::Smith {
            file,
            mod_exp,
            max_dim,
            no_certificates,
        } => emit(
            &commands::cmd_smith(&file, mod_exp, max_dim, !no_certificates, cap)?,
            None,
        ),
        Command::Certificate { file, dim, modulus } => {
            let n = modulus
                .map(|s| {
                    s.parse::<Int>()
                        .map_err(|_| CliError::parse(format!("invalid modulus {s:?}")))
                })
                .transpose()?;
            emit(&commands::cmd_certificate(&file, dim, n, cap)?, None)
        }
        Command::Join {
            left,
            right,
            output,
        } => emit(&commands::cmd_join(&left, &right, cap)?, output.as_ref()),
        Command::Deleted {
            file,
            join: _,
            product,
            output,
        } => emit(
            &commands::cmd_deleted(&file, product, cap)?,
            output.as_ref(),
        ),
        Command::JoinSmith {
            left,
            right,
            direct,
        } => emit(&commands::cmd_join_smith(&left, &right, direct, cap)?, None),
        Command::EmbedVerdict {
            left,
            right,
            product_check,
        } => emit(
            &commands::cmd_embed_verdict(&left, &right, product_check, cap)?,
            None,
        ),
        Command::Corpus {
            name,
            params,
            output,
        } => emit(&commands::cmd_corpus(&name, &params)?, output.as_ref()),
        Command::Snf { file, full } => emit(&commands::cmd_snf(&file, full, cap)?, None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
