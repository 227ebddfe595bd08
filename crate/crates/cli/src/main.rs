mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{CliError, Sink};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "wgroups",
    version,
    about = "Reports on W-groups, V-groups and their cohomology as JSON lines"
)]
pub struct Cli {
    /// Worker threads for the suite.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// p-adic working precision in digits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Top degree for resolutions.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Write the report stream here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Polycyclic 2-groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Modules over elementary abelian 2-groups.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Minimal resolutions, restriction, E∞^{1,1}.
    #[command(subcommand)]
    Cohom(CohomCmd),
    /// LHS spectral sequence pages.
    #[command(subcommand)]
    Ss(SsCmd),
    /// Quadratic-symbol models of fields.
    #[command(subcommand)]
    Field(FieldCmd),
    /// The Hilbert 90 analogue on J.
    #[command(subcommand)]
    J90(J90Cmd),
    /// Local fields.
    #[command(subcommand)]
    Padic(PadicCmd),
    /// The acceptance criteria.
    Suite(SuiteArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    E,
    W,
    V,
}

/// A group given by family and rank or by a presentation file.
#[derive(Args, Debug, Clone)]
pub struct GroupSel {
    #[arg(long, value_enum, conflicts_with = "group")]
    pub family: Option<FamilyArg>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Presentation file.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Quotient rank of a presentation file (its first generators map onto E_n).
    #[arg(long)]
    pub tail: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Build a family member and report its invariants.
    Build {
        #[command(flatten)]
        sel: GroupSel,
        /// Save the presentation text here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Exhaustive metabelian identities.
    Identities {
        #[command(flatten)]
        sel: GroupSel,
    },
    /// ±1-monomial sphere actions of V(2).
    Sphere,
}

/// A module given by a file or as Ω^shift of the trivial module.
#[derive(Args, Debug, Clone)]
pub struct ModuleSel {
    #[arg(long = "in", conflicts_with = "trivial")]
    pub input: Option<PathBuf>,
    /// Rank n of E_n for the trivial module.
    #[arg(long)]
    pub trivial: Option<usize>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub shift: i32,
}

#[derive(Subcommand, Debug)]
pub enum ModuleCmd {
    Socle {
        #[command(flatten)]
        sel: ModuleSel,
    },
    Heller {
        #[command(flatten)]
        sel: ModuleSel,
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Indecomposable summands over E₂.
    Decompose {
        #[command(flatten)]
        sel: ModuleSel,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    Abelian,
    Elementary,
}

#[derive(Subcommand, Debug)]
pub enum CohomCmd {
    /// Ranks of the minimal resolution.
    Betti {
        #[command(flatten)]
        sel: GroupSel,
    },
    /// dim E∞^{1,1} of a central extension of E_n.
    Einfty11 {
        #[command(flatten)]
        sel: GroupSel,
        /// Use the W-extension of a symbol field instead.
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Joint restriction ranks to a family of subgroups.
    Restrict {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long, value_enum, default_value = "abelian")]
        kind: SubgroupKind,
        /// File of subgroups, one per line as generator codes; overrides --kind.
        #[arg(long)]
        subgroups: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SsCmd {
    X2 {
        #[arg(long, default_value_t = 8)]
        pmax: usize,
    },
    V2 {
        #[arg(long, default_value_t = 10)]
        pmax: usize,
        #[arg(long, default_value_t = 6)]
        qmax: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseArg {
    Q2,
    Qp,
}

#[derive(Args, Debug, Clone)]
pub struct FieldSel {
    #[arg(long = "in", conflicts_with = "base")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub base: Option<BaseArg>,
    #[arg(long, default_value_t = 5)]
    pub p: u64,
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// C-field test, checked against dim E∞^{1,1}.
    Cfield {
        #[command(flatten)]
        sel: FieldSel,
    },
}

#[derive(Subcommand, Debug)]
pub enum J90Cmd {
    /// One assignment: lines `i bits` with 1-based index i and a J coordinate vector.
    Verify {
        #[command(flatten)]
        sel: GroupSel,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Every assignment on J of V(2), with witnesses checked.
    Exhaustive,
    /// Kummer pairing compatibility and the commutator dictionary.
    Kummer {
        #[command(flatten)]
        sel: GroupSel,
    },
}

#[derive(Subcommand, Debug)]
pub enum PadicCmd {
    /// Socle series of J from norm conditions.
    Socle {
        #[arg(long, value_enum, default_value = "q2")]
        base: BaseArg,
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
    /// Hilbert symbol (a, b)_p.
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        p: u64,
    },
    /// Norm lemma and norm transitivity on random samples.
    Norms {
        #[arg(long, value_enum, default_value = "q2")]
        base: BaseArg,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Layer dimensions of J for a Demuškin group from the closed forms.
    Formula {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Default settings only (the default).
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Include the stretch runs.
    #[arg(long)]
    pub full: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub criterion: Vec<u8>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink = match Sink::open(cli.out.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(report::EXIT_USAGE);
        }
    };
    match commands::run(&cli, &mut sink) {
        Ok(()) => ExitCode::from(sink.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) | CliError::Io { .. } => report::EXIT_USAGE,
                CliError::Compute(_) => report::EXIT_ERROR,
            })
        }
    }
}
