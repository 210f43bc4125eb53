//! `multiplex`: checks and constructions on JSON documents.
//!
//! Exit status 0 means every check passed or the construction succeeded,
//! 1 a verified mathematical failure, 2 an input or schema error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "multiplex", version, about = "Exact computations with twisted complexes and derived A-infinity algebras")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the axioms of every object of one kind.
    Check { kind: CheckKind, file: PathBuf },
    /// Totalize twisted complexes into split filtered complexes.
    Tot { file: PathBuf },
    /// Recover twisted complexes from split filtered complexes.
    TotInverse { file: PathBuf },
    /// Page `r` of the column filtration spectral sequence.
    Spectral {
        file: PathBuf,
        #[arg(long)]
        page: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decide whether morphisms are E_r-quasi-isomorphisms.
    ErQis {
        file: PathBuf,
        #[arg(short)]
        r: usize,
        /// Decide through acyclicity of the r-cone instead of comparing pages.
        #[arg(long)]
        via_cone: bool,
    },
    /// The r-cone of every morphism.
    Cone {
        file: PathBuf,
        #[arg(short)]
        r: usize,
    },
    /// The r-path of every complex (or dA-infinity algebra) with its structure maps.
    Path {
        file: PathBuf,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        dainf: bool,
    },
    /// Check or solve r-homotopies.
    Homotopy(HomotopyArgs),
    /// Tensor product of the complexes in two documents.
    Tensor { a: PathBuf, b: PathBuf },
    /// The composite `f ∘ g` of the morphisms in two documents.
    Compose {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        dainf: bool,
    },
    /// Cross-checks through the coderivation formulation.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Random instances.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Twisted,
    Morphism,
    Dainf,
    DainfMorphism,
    FilteredAinf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum HomotopyAction {
    Check,
    Solve,
}

#[derive(Args, Debug)]
pub struct HomotopyArgs {
    action: HomotopyAction,
    file: PathBuf,
    #[arg(short)]
    r: usize,
    #[arg(long)]
    dainf: bool,
    /// Source morphism for `solve`; defaults to the first of exactly two.
    #[arg(long)]
    from: Option<String>,
    /// Target morphism for `solve`; defaults to the second of exactly two.
    #[arg(long)]
    to: Option<String>,
    /// Largest arity of the unknown components for `solve --dainf`.
    #[arg(long, default_value_t = 2)]
    max_arity: usize,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Compare the coalgebra check of every r-homotopy with the direct one.
    Coderh {
        file: PathBuf,
        #[arg(short)]
        r: usize,
        /// Polynomial truncation; defaults to the joint width plus r plus 2.
        #[arg(short = 'N')]
        n: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// A random twisted complex on the given dimensions.
    RandomTwisted {
        #[arg(long)]
        seed: u64,
        /// Dimensions as `i,j,n;i,j,n;..`.
        #[arg(long)]
        dims: String,
        /// `q` for the rationals or a prime.
        #[arg(long, default_value = "32003")]
        field: String,
    },
}

fn threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("MULTIPLEX_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow::anyhow!("MULTIPLEX_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = threads().and_then(|_| commands::run(&cli.command));
    match run {
        Ok(out) => {
            let mut text = out.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &cli.output {
                Some(p) => std::fs::write(p, &text).map_err(|e| anyhow::anyhow!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
