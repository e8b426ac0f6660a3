//! Command-line front end: argument parsing, input validation and report
//! rendering. [`run`] does all the work and returns the captured output so
//! that `main` only has to print it.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use covermap_core::classify::{classify, ClassKind, Classification, SearchConfig, SummandLayout};
use covermap_core::monodromy::{stabilized_two_fold, BranchData};
use covermap_core::planner::{BaseManifold, ManifoldInvariants, Planner};
use covermap_core::selfcheck;
use serde::de::DeserializeOwned;

mod report;

pub use report::{AnalysisReport, BranchMode, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

/// Environment variable overriding the enumeration ceiling.
pub const CEILING_VAR: &str = "COVERMAP_ENUM_CEILING";

#[derive(Debug, Parser)]
#[command(name = "covermap", version, about = "Decide which standard 4-manifolds a closed 4-manifold branch-covers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Feasibility report for one base or all bases up to a sum bound.
    Analyze(AnalyzeArgs),
    /// Branch data of coverings of S².
    #[command(subcommand)]
    Monodromy(MonodromyCommand),
    /// Intersection form utilities.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Re-verify the built-in constants.
    Selfcheck,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// JSON file with `gram`, optional `b1` and `free_quotient_rank`.
    #[arg(long)]
    input: PathBuf,
    /// Base tag such as CP2, S2xS2, sum:1,0 or sum-s3xs1:2.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    base: Option<String>,
    /// Every base with at most `--max-sum` summands.
    #[arg(long)]
    all: bool,
    #[arg(long, requires = "all", default_value_t = 2)]
    max_sum: u32,
    /// Show witnesses for the embedded branch surface.
    #[arg(long)]
    embedded: bool,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Format {
    #[arg(long)]
    json: bool,
    /// Default.
    #[arg(long)]
    text: bool,
}

#[derive(Debug, Subcommand)]
enum MonodromyCommand {
    /// Stabilized 2-fold covering of a genus `g` surface, as degree `d` data
    /// (JSON unless `--text`).
    Build {
        #[arg(short = 'g', long)]
        genus: usize,
        #[arg(short = 'd', long)]
        degree: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Check identity product and transitivity of a branch data file.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum LatticeCommand {
    /// Canonical form and basis change of a unimodular form.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        format: Format,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn invalid(message: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code: EXIT_INVALID }
    }
}

/// Parses `args` (program name first) and runs the command. `ceiling` is the
/// raw value of [`CEILING_VAR`], if set.
pub fn run<I, T>(args: I, ceiling: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_INVALID }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let config = || search_config(ceiling);
    match cli.command {
        Command::Analyze(a) => config().map_or_else(|o| o, |c| analyze(&a, c)),
        Command::Monodromy(MonodromyCommand::Build { genus, degree, format }) => build(genus, degree, !format.text),
        Command::Monodromy(MonodromyCommand::Verify { file, format }) => verify(&file, format.json),
        Command::Lattice(LatticeCommand::Classify { input, format }) => {
            config().map_or_else(|o| o, |c| lattice_classify(&input, format.json, c))
        }
        Command::Selfcheck => {
            let r = selfcheck::run();
            let code = if r.passed() { EXIT_OK } else { EXIT_INVALID };
            Outcome { stdout: r.to_string(), stderr: String::new(), code }
        }
    }
}

fn search_config(ceiling: Option<&str>) -> Result<SearchConfig, Outcome> {
    match ceiling {
        None => Ok(SearchConfig::default()),
        Some(raw) => match raw.trim().parse::<u32>() {
            Ok(c) if c >= 1 => Ok(SearchConfig::with_ceiling(c)),
            _ => Err(Outcome::invalid(format!("{CEILING_VAR} must be a positive integer, got {raw:?}"))),
        },
    }
}

/// Reads and deserializes `path`, reporting the JSON path of any failure.
fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        if at == "." {
            Outcome::invalid(format!("{}: {inner}", path.display()))
        } else {
            Outcome::invalid(format!("{}: at {at}: {inner}", path.display()))
        }
    })
}

fn analyze(args: &AnalyzeArgs, config: SearchConfig) -> Outcome {
    let inv: ManifoldInvariants = match read_json(&args.input) {
        Ok(inv) => inv,
        Err(o) => return o,
    };
    let planner = Planner::new(&inv, config);
    let reports = match &args.base {
        Some(tag) => tag.parse::<BaseManifold>().and_then(|b| planner.decide(b)).map(|r| vec![r]),
        None => planner.decide_all(args.max_sum),
    };
    let reports = match reports {
        Ok(r) => r,
        Err(e) => return Outcome::invalid(e),
    };
    let inconclusive = planner.inconclusive();
    let branch = if args.embedded { BranchMode::Embedded } else { BranchMode::Immersed };
    let report = AnalysisReport::new(inv.clone(), branch, inconclusive, reports);
    let stdout = if args.format.json { report.to_json() } else { report.to_text() };
    let (code, stderr) = if inconclusive {
        (EXIT_INCONCLUSIVE, format!("warning: classification inconclusive; raise {CEILING_VAR}\n"))
    } else {
        (EXIT_OK, String::new())
    };
    Outcome { stdout, stderr, code }
}

fn build(genus: usize, degree: usize, json: bool) -> Outcome {
    if degree < 2 {
        return Outcome::invalid(format!("degree {degree} is below 2"));
    }
    let data = stabilized_two_fold(genus, degree);
    if json {
        return Outcome::ok(format!("{}\n", serde_json::to_string(&data).expect("branch data serializes")));
    }
    Outcome::ok(format!("{data}\nbranch points {}  genus {genus}\n", data.branch_count()))
}

fn verify(file: &Path, json: bool) -> Outcome {
    let data: BranchData = match read_json(file) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let checked = data.verify().map(|_| data.total_genus());
    let (code, stdout) = match (checked, json) {
        (Ok(Ok(g)), true) => (
            EXIT_OK,
            serde_json::json!({"valid": true, "degree": data.degree, "branch_points": data.branch_count(), "genus": g})
                .to_string(),
        ),
        (Ok(Ok(g)), false) => (EXIT_OK, format!("ok: degree {} with {} branch points, genus {g}", data.degree, data.branch_count())),
        (Ok(Err(e)), true) => (EXIT_INVALID, serde_json::json!({"valid": false, "error": e.to_string()}).to_string()),
        (Ok(Err(e)), false) => (EXIT_INVALID, format!("invalid: {e}")),
        (Err(v), true) => (EXIT_INVALID, serde_json::json!({"valid": false, "violation": v}).to_string()),
        (Err(v), false) => (EXIT_INVALID, format!("invalid: {v}")),
    };
    Outcome { stdout: stdout + "\n", stderr: String::new(), code }
}

fn lattice_classify(path: &Path, json: bool, config: SearchConfig) -> Outcome {
    let inv: ManifoldInvariants = match read_json(path) {
        Ok(inv) => inv,
        Err(o) => return o,
    };
    match classify(&inv.form, &config) {
        Ok(c) if json => Outcome::ok(format!("{}\n", serde_json::to_string_pretty(&c).expect("classification serializes"))),
        Ok(c) => Outcome::ok(classification_text(&c)),
        Err(e) => {
            let code = if e.is_inconclusive() { EXIT_INCONCLUSIVE } else { EXIT_INVALID };
            Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code }
        }
    }
}

fn classification_text(c: &Classification) -> String {
    let kind = match c.kind {
        ClassKind::OddDiagonal => "odd indefinite, diagonal",
        ClassKind::EvenIndefinite => "even indefinite",
        ClassKind::DefiniteDiagonal => "definite, diagonal",
        ClassKind::Unrecognized => "definite, not congruent to ±I",
    };
    let layout = match &c.layout {
        SummandLayout::Diagonal { entries } => {
            let p = entries.iter().filter(|&&e| e > 0).count();
            format!("{p}⟨1⟩ ⊕ {}⟨−1⟩", entries.len() - p)
        }
        SummandLayout::EvenIndefinite { a, b, .. } => format!("{a}·E8 ⊕ {b}·H"),
        SummandLayout::Partial { unit_entries, leftover_rank } => {
            format!("{} unit vectors split off, leftover rank {leftover_rank}", unit_entries.len())
        }
    };
    let mut out = format!("kind: {kind}\nform: {layout}\ncanonical:\n{}change (columns in input coordinates):\n{}", c.canonical.entries(), c.change.matrix);
    for n in &c.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}
