use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kapranov::prelie::TowerVariant;
use kapranov_cli::commands::{run, CliError, Command, Options};
use kapranov_cli::document::load;

/// Kapranov brackets on graded pre-Lie algebras and truncated
/// homotopy-abelian certification, in exact rational arithmetic.
#[derive(Parser)]
#[command(name = "kapranov", version)]
struct Cli {
    #[command(subcommand)]
    command: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Re-verify every axiom of a document.
    Validate(Common),
    /// Build and emit the tower Φ(d)_1..Φ(d)_N of a pre-Lie document.
    Kapranov {
        #[command(flatten)]
        common: Common,
        /// Write the tower as a linfty document.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check Q•Q = 0 up to arity N.
    CheckLinfty(Common),
    /// Solve for a dg splitting of the evaluation map or certify there is none.
    Splitting(Common),
    /// Truncated CE cohomologies and the kernel of H(i).
    CeCohomology(Common),
    /// Homotopy transfer to the minimal model.
    MinimalModel(Common),
    /// All three checks and the composite verdict.
    HomotopyAbelian(Common),
    /// Brute-force cross-checks of the formulas used by the other commands.
    Oracle(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Alternating,
}

#[derive(Args)]
struct Common {
    /// Document path, or one of the built-in names fixture, w4-theta, sl2.
    input: String,
    #[arg(long, default_value_t = 4)]
    max_arity: usize,
    #[arg(long, value_enum, default_value = "plain")]
    variant: VariantArg,
    /// Also write the report to this path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Add wall-clock time to the report. Reports are then no longer
    /// reproducible byte for byte.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common, emit) = match cli.command {
        Verb::Validate(c) => (Command::Validate, c, None),
        Verb::Kapranov { common, emit } => (Command::Kapranov, common, emit),
        Verb::CheckLinfty(c) => (Command::CheckLinfty, c, None),
        Verb::Splitting(c) => (Command::Splitting, c, None),
        Verb::CeCohomology(c) => (Command::CeCohomology, c, None),
        Verb::MinimalModel(c) => (Command::MinimalModel, c, None),
        Verb::HomotopyAbelian(c) => (Command::HomotopyAbelian, c, None),
        Verb::Oracle(c) => (Command::Oracle, c, None),
    };
    match execute(cmd, &common, emit) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("kapranov {}: {e}", cmd.name());
            ExitCode::from(2)
        }
    }
}

fn execute(cmd: Command, c: &Common, emit: Option<PathBuf>) -> Result<bool, CliError> {
    let start = Instant::now();
    let input = load(&c.input)?;
    let variant = match c.variant {
        VariantArg::Plain => TowerVariant::Plain,
        VariantArg::Alternating => TowerVariant::Alternating,
    };
    let mut out = run(cmd, &input, &Options { max_arity: c.max_arity, variant })?;
    if c.timing {
        out.report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = out.report.to_json();
    let write = |p: &PathBuf, s: &str| {
        std::fs::write(p, s).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))
    };
    if let (Some(p), Some(doc)) = (&emit, &out.tower) {
        let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
        s.push('\n');
        write(p, &s)?;
    }
    if let Some(p) = &c.output {
        write(p, &text)?;
    }
    print!("{text}");
    Ok(out.success)
}
