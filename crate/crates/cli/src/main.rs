mod commands;
mod docs;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "unialg", version, about = "Finite universal algebra workbench")]
pub struct Cli {
    /// Largest universe or point space a command may build.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_universe: usize,
    /// Seed for randomized steps; corpus-run defaults to the manifest's.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Named signature documents that other documents refer to.
    #[arg(long = "signature", global = true)]
    pub signatures: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args)]
pub struct Geometry {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Args)]
pub struct Pair {
    #[arg(long)]
    pub c: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Args)]
pub struct ClassArgs {
    #[arg(long)]
    pub class: PathBuf,
    #[arg(long)]
    pub c: PathBuf,
}

#[derive(Args)]
pub struct SentenceArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long)]
    pub sentence: PathBuf,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solution set of a system.
    Solve(Geometry),
    /// Whether an equation holds on the whole solution set.
    RadicalMember {
        #[command(flatten)]
        geo: Geometry,
        #[arg(long)]
        equation: String,
    },
    /// Coordinate algebra of a solution set.
    Coordinate(Geometry),
    Irreducible(Geometry),
    /// Irreducible components.
    Decompose {
        #[command(flatten)]
        geo: Geometry,
        /// Try cuts in reverse order.
        #[arg(long)]
        reverse: bool,
    },
    /// Homomorphisms from C to B.
    Homs {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        injective: bool,
        /// Report at most this many maps.
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// An embedding of C into B.
    Embed(Pair),
    Separates(ClassArgs),
    Discriminates(ClassArgs),
    /// Local embeddability of C into the class.
    UclMember(ClassArgs),
    SentenceCheck(SentenceArgs),
    QiCheck(SentenceArgs),
    Product {
        #[arg(long = "factor", required = true)]
        factors: Vec<PathBuf>,
    },
    /// Quotient by the congruence generated by the given pairs.
    Quotient {
        #[arg(long)]
        algebra: PathBuf,
        /// `a,b`; repeatable.
        #[arg(long = "pair")]
        pairs: Vec<String>,
    },
    /// Reduced product over the principal filter on the generator set.
    Filterproduct {
        #[arg(long = "factor", required = true)]
        factors: Vec<PathBuf>,
        /// Factor indices generating the filter; all indices by default.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Limit of a chain of algebras.
    DirectLimit {
        #[arg(long = "algebra", required = true)]
        algebras: Vec<PathBuf>,
        /// Images of one step, `m0,m1,...`; one per consecutive pair.
        #[arg(long = "map")]
        maps: Vec<String>,
    },
    ClosureQuery {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        equation: String,
        /// Depth of the extra term universe; defaults to the deepest
        /// relation or query side.
        #[arg(long)]
        depth: Option<usize>,
    },
    LimitValidate {
        #[arg(long)]
        system: PathBuf,
    },
    LimitBuild {
        #[arg(long)]
        system: PathBuf,
    },
    CanonicalSystem {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Embed the limit into a principal ultrapower of the targets.
    LimitEmbed {
        #[arg(long)]
        system: PathBuf,
        /// One per index, or a single algebra used for all of them.
        #[arg(long = "target", required = true)]
        targets: Vec<PathBuf>,
    },
    /// Atomic type of a tuple.
    Atp {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        tuple: String,
    },
    UnifyA(Pair),
    /// Coefficient variant; `coefficients` of C and B hold the embeddings of A.
    UnifyB {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Every suite over the corpus a manifest names.
    CorpusRun {
        #[arg(long, default_value = "corpus/manifest.json")]
        manifest: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| commands::execute(&cli)));
    match outcome {
        Ok(Ok((text, failed))) => {
            print!("{text}");
            if let Some(msg) = failed {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error: internal defect");
            ExitCode::from(1)
        }
    }
}
