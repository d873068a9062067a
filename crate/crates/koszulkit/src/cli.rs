//! Command-line front end: one binary, one subcommand per pipeline.
//!
//! Every subcommand reads JSON files in the schemas of [`crate::quadalg`]
//! and [`crate::progroup`] (documented in `docs/formats.md`) and writes a
//! single JSON document to standard output. `--format table` switches to a
//! human-readable rendition of the same data; the JSON is the stable
//! surface, the tables are advisory. Exit codes: 0 on success, 1 on domain
//! errors with the error's machine name on standard error, 2 on malformed
//! input (bad flags, unreadable files, JSON or word-grammar errors).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::koszul::{is_koszul_up_to_with_limit, KoszulReport, DEFAULT_RESOURCE_LIMIT};
use crate::ncpoly::{magnus_expand, parse_word, NcPoly};
use crate::progroup::{GroupPresentation, GroupSpec, GroupSpecJson};
use crate::quadalg::{PresentationJson, QuadraticPresentation};
use crate::{cocycle, Error, Result};

/// Degree cap used when `--cap` is not given.
pub const DEFAULT_CAP: usize = 6;

/// Truncation bound used when `--bound` is not given.
pub const DEFAULT_BOUND: usize = 4;

/// Environment variable overriding the chain-space resource limit of the
/// `koszul` subcommand.
pub const RESOURCE_LIMIT_VAR: &str = "KOSZULKIT_RESOURCE_LIMIT";

#[derive(Parser)]
#[command(
    name = "koszulkit",
    version,
    about = "Quadratic algebras, Koszul duals, and oriented pro-p groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupAction {
    /// Generators, orientation, and relation words
    Presentation,
    /// Mod-p cohomology ring as a quadratic presentation
    Cohomology,
    /// Graded algebra of the filtration quotients
    Gr,
    /// Ranks, abelianization, and orientation invariants
    Invariants,
    /// Filtration-layer dimensions up to the cap
    Zassenhaus,
    /// Check the dual of cohomology against the graded algebra
    VerifyDuality,
}

#[derive(Subcommand)]
enum Command {
    /// Graded dimensions of a quadratic algebra up to the cap
    Hilbert {
        /// Algebra presentation file
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Koszul dual of a quadratic algebra, as a presentation
    Dual {
        /// Algebra presentation file
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Truncated Koszulity test: off-diagonal Tor and the Hilbert defect
    Koszul {
        /// Algebra presentation file
        file: PathBuf,
        /// Homological and internal truncation degree
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Pipelines over a pro-p group specification
    Group {
        /// Group specification file
        file: PathBuf,
        #[arg(value_enum)]
        action: GroupAction,
        /// Degree cap for zassenhaus and verify-duality
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Orientation obstruction table of a group's canonical presentation
    Obstruction {
        /// Group specification file
        file: PathBuf,
        /// Working precision: values are classes mod p^precision
        #[arg(long, default_value_t = cocycle::DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Magnus expansion of a word, with its initial form
    Magnus {
        /// Word in the grammar: x1, inv(w), pow(w, n), comm(u, v), u * v
        word: String,
        /// Alphabet size
        #[arg(long)]
        d: usize,
        /// Truncation degree
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Coefficient prime; 3 by default so signs stay visible
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Parses arguments and runs. Returns the process exit code; flag errors
/// print usage and exit 2 inside clap.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command).and_then(|out| emit(&out)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            if e.is_parse_error() {
                2
            } else {
                1
            }
        }
    }
}

/// Writes the document to stdout. A reader that closes early (`| head`)
/// is not an error: the write stops and the run still exits 0.
fn emit(out: &str) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{out}").and_then(|()| stdout.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Hilbert { file, cap, format } => {
            let a = read_algebra(&file)?;
            let dims = a.hilbert(cap)?;
            match format {
                Format::Json => to_json(&dims),
                Format::Table => Ok(dims_table(&dims.dims)),
            }
        }
        Command::Dual { file, format } => {
            let a = read_algebra(&file)?;
            let dual = a.koszul_dual();
            match format {
                Format::Json => to_json(&dual.to_json()),
                Format::Table => Ok(presentation_table(&dual)),
            }
        }
        Command::Koszul { file, bound, format } => {
            let a = read_algebra(&file)?;
            let limit = resource_limit()?;
            let report = is_koszul_up_to_with_limit(&a, bound, limit)?;
            match format {
                Format::Json => to_json(&report),
                Format::Table => Ok(koszul_table(&report)),
            }
        }
        Command::Group { file, action, cap, format } => {
            let spec = read_group(&file)?;
            run_group(&spec, action, cap, format)
        }
        Command::Obstruction { file, precision, format } => {
            if precision < 2 {
                return Err(Error::InvalidInput(format!(
                    "precision must be at least 2, got {precision}"
                )));
            }
            let spec = read_group(&file)?;
            let table = cocycle::cyclotomic_obstruction(&spec.presentation(), precision)?;
            match format {
                Format::Json => table.to_json(),
                Format::Table => Ok(obstruction_table(&table)),
            }
        }
        Command::Magnus { word, d, cap, p, format } => {
            let w = parse_word(&word)?;
            let field = crate::fpfield::PrimeField::new(p)?;
            let a = magnus_expand(&w, field, d, cap)?;
            match format {
                Format::Json => to_json(&magnus_json(&a)),
                Format::Table => Ok(magnus_table(&a)),
            }
        }
    }
}

fn run_group(spec: &GroupSpec, action: GroupAction, cap: usize, format: Format) -> Result<String> {
    match action {
        GroupAction::Presentation => {
            let pres = spec.presentation();
            match format {
                Format::Json => to_json(&group_presentation_json(&pres)),
                Format::Table => Ok(group_presentation_table(&pres)),
            }
        }
        GroupAction::Cohomology => {
            let h = spec.cohomology_ring()?;
            match format {
                Format::Json => to_json(&h.to_json()),
                Format::Table => Ok(presentation_table(&h)),
            }
        }
        GroupAction::Gr => {
            let g = spec.gr_algebra()?;
            match format {
                Format::Json => to_json(&g.to_json()),
                Format::Table => Ok(presentation_table(&g)),
            }
        }
        GroupAction::Invariants => {
            let inv = spec.invariants();
            match format {
                Format::Json => to_json(&inv),
                Format::Table => {
                    let mut s = String::new();
                    let _ = writeln!(s, "generators          {}", inv.d);
                    let _ = writeln!(s, "relations           {}", inv.r);
                    let _ = writeln!(s, "ab. free rank       {}", inv.abelianization_free_rank);
                    let torsion: Vec<String> =
                        inv.abelianization_torsion.iter().map(|t| t.to_string()).collect();
                    let _ = writeln!(s, "ab. torsion         [{}]", torsion.join(", "));
                    let _ = writeln!(s, "theta-centre rank   {}", inv.theta_centre_rank);
                    let _ = writeln!(s, "t1                  {}", inv.t1);
                    let _ = write!(s, "f1                  {}", inv.f1);
                    Ok(s)
                }
            }
        }
        GroupAction::Zassenhaus => {
            let dims = spec.zassenhaus_dims(cap)?;
            match format {
                Format::Json => to_json(&dims),
                Format::Table => {
                    let mut s = String::from("layer  dim");
                    for (i, d) in dims.iter().enumerate() {
                        let _ = write!(s, "\n{:<5}  {d}", i + 1);
                    }
                    Ok(s)
                }
            }
        }
        GroupAction::VerifyDuality => {
            if cap < 2 {
                return Err(Error::InvalidInput(format!(
                    "duality checks need a cap of at least 2, got {cap}"
                )));
            }
            let report = spec.verify_koszul_duality(cap)?;
            match format {
                Format::Json => to_json(&report),
                Format::Table => Ok(format!(
                    "relation subspaces equal  {}\ndims equal up to          {}",
                    report.relation_subspaces_equal, report.dims_equal_up_to
                )),
            }
        }
    }
}

// ---- input ----

fn read_algebra(path: &Path) -> Result<QuadraticPresentation> {
    let text = std::fs::read_to_string(path)?;
    let j: PresentationJson = serde_json::from_str(&text)?;
    QuadraticPresentation::from_json(&j)
}

fn read_group(path: &Path) -> Result<GroupSpec> {
    let text = std::fs::read_to_string(path)?;
    let j: GroupSpecJson = serde_json::from_str(&text)?;
    GroupSpec::from_json(&j)
}

fn resource_limit() -> Result<usize> {
    match std::env::var(RESOURCE_LIMIT_VAR) {
        Err(_) => Ok(DEFAULT_RESOURCE_LIMIT),
        Ok(v) => v.parse().map_err(|_| {
            Error::InvalidInput(format!("{RESOURCE_LIMIT_VAR} must be an integer, got {v:?}"))
        }),
    }
}

// ---- output ----

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// On-disk form of a group presentation: relation words in the grammar
/// accepted by the `magnus` subcommand.
#[derive(Debug, Clone, Serialize)]
struct GroupPresentationJson {
    p: u64,
    generators: Vec<String>,
    theta: Vec<i64>,
    relations: Vec<String>,
}

fn group_presentation_json(pres: &GroupPresentation) -> GroupPresentationJson {
    GroupPresentationJson {
        p: pres.field().p(),
        generators: pres.labels.clone(),
        theta: pres.theta.clone(),
        relations: pres.relations.iter().map(|r| r.to_string()).collect(),
    }
}

fn group_presentation_table(pres: &GroupPresentation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p           {}", pres.field().p());
    let _ = writeln!(s, "generators  {}", pres.labels.join(", "));
    let theta: Vec<String> = pres.theta.iter().map(|t| t.to_string()).collect();
    let _ = write!(s, "theta       {}", theta.join(", "));
    if pres.relations.is_empty() {
        let _ = write!(s, "\nrelations   none");
    } else {
        for r in &pres.relations {
            let _ = write!(s, "\nrelation    {r}");
        }
    }
    s
}

fn dims_table(dims: &[usize]) -> String {
    let mut s = String::from("degree  dim");
    for (n, d) in dims.iter().enumerate() {
        let _ = write!(s, "\n{n:<6}  {d}");
    }
    s
}

fn presentation_table(a: &QuadraticPresentation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p           {}", a.field().p());
    let _ = writeln!(s, "generators  {}", a.labels().join(", "));
    let _ = write!(s, "relations   {}", a.relations().dim());
    for row in a.relations().basis_rows() {
        let entries: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let _ = write!(s, "\n  [{}]", entries.join(", "));
    }
    s
}

fn koszul_table(report: &KoszulReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "koszul up to degree  {}", report.koszul_up_to);
    match report.witness {
        None => {
            let _ = writeln!(s, "off-diagonal tor     none");
        }
        Some((i, j)) => {
            let _ = writeln!(s, "off-diagonal tor     at ({i}, {j})");
        }
    }
    let defect: Vec<String> = report.hilbert_defect.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "hilbert defect       [{}]", defect.join(", "));
    let _ = write!(s, "tor (rows i, cols j)");
    for i in 0..=report.tor.imax {
        let row: Vec<String> =
            (0..=report.tor.jmax).map(|j| report.tor.tor(i, j).to_string()).collect();
        let _ = write!(s, "\n  {}", row.join("  "));
    }
    s
}

fn obstruction_table(table: &cocycle::ObstructionTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", table.summary());
    if table.columns.is_empty() {
        let _ = write!(s, "(no relations)");
        return s;
    }
    for (j, col) in table.columns.iter().enumerate() {
        let _ = writeln!(s, "relation {}: {col}", j + 1);
    }
    let _ = write!(s, "values mod {}^{} (rows = duals, cols = relations)", table.p, table.precision);
    for (i, dual) in table.rows.iter().enumerate() {
        let row: Vec<String> =
            table.entries[i].iter().map(|e| e.value().to_string()).collect();
        let _ = write!(s, "\n{:<6}  {}", dual, row.join("  "));
    }
    s
}

fn magnus_json(a: &NcPoly) -> serde_json::Value {
    let initial = a.min_positive_degree().map(|k| {
        serde_json::json!({
            "degree": k,
            "coeffs": a.homogeneous_part(k).coeffs,
        })
    });
    serde_json::json!({
        "p": a.field().p(),
        "d": a.alphabet_size(),
        "cap": a.cap(),
        "expansion": a.to_string(),
        "initial_form": initial,
    })
}

fn magnus_table(a: &NcPoly) -> String {
    let mut s = format!("expansion     {a}");
    match a.min_positive_degree() {
        None => {
            let _ = write!(s, "\ninitial form  none up to cap {}", a.cap());
        }
        Some(k) => {
            let coeffs: Vec<String> =
                a.homogeneous_part(k).coeffs.iter().map(|c| c.to_string()).collect();
            let _ = write!(s, "\ninitial form  degree {k}, coeffs [{}]", coeffs.join(", "));
        }
    }
    s
}
