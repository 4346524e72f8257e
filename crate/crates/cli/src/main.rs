//! `tristate` command-line front end.

use std::{ fmt::Write as _, path::Path, process::ExitCode };
use clap::{ Parser, Subcommand, ValueEnum };
use serde_json::json;
use tristate::{
    catalog::{ self, CatalogError, EntryKind },
    family::FamilyError,
    hilbert::{ HilbertError, Operator, Party },
    linalg::LinalgError,
    ppt::{ self, Threshold, DEFAULT_B_TOL, DEFAULT_PSD_TOL },
    range::RangeError,
    report::{ self, Evidence, ReportError },
    statefile::{ self, StateFileError },
    upb::{ self, UpbError },
};

#[derive(Debug, Parser)]
#[command(name = "tristate", version)]
#[command(about = "PPT and inseparability checks for tripartite quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog identifiers with their local dimensions
    Catalog,

    /// Per-cut PPT report for a catalog state or a JSON state file
    Check {
        /// Catalog id or path to a state file.
        state: String,

        /// Parameter for parameterized families.
        #[arg(long)]
        b: Option<f64>,

        /// Eigenvalues above -tol count as nonnegative.
        #[arg(long, env = "TRISTATE_TOL", default_value_t = DEFAULT_PSD_TOL)]
        tol: f64,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// CSV of the smallest partial-transpose eigenvalue per party along b
    Sweep {
        /// Parameterized family id.
        family: String,

        #[arg(long)]
        from: f64,

        #[arg(long)]
        to: f64,

        /// Number of rows, endpoints included.
        #[arg(long)]
        steps: usize,
    },

    /// Locate the b at which the partial transpose on one party turns PSD
    Threshold {
        /// Parameterized family id.
        family: String,

        /// Party to transpose: A, B or C.
        #[arg(long)]
        party: Party,

        /// Eigenvalues above -tol count as nonnegative in the coarse scan.
        #[arg(long, env = "TRISTATE_TOL", default_value_t = DEFAULT_PSD_TOL)]
        tol: f64,

        /// Width of the final bisection bracket.
        #[arg(long, default_value_t = DEFAULT_B_TOL)]
        b_tol: f64,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Product-set checks
    Upb {
        #[command(subcommand)]
        command: UpbCommand,
    },
}

#[derive(Debug, Subcommand)]
enum UpbCommand {
    /// Orthogonality, span and unextendibility of a catalog product set
    Verify {
        set: String,

        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/* Failures and exit codes ****************************************************/

/// Exit 2: the input was rejected. Exit 3: a numeric routine failed.
#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numeric(m) => m,
        }
    }
}

fn linalg_failure(e: &LinalgError) -> bool {
    matches!(e, LinalgError::NoConvergence { .. } | LinalgError::Dependent)
}

fn hilbert_failure(e: &HilbertError) -> bool {
    matches!(e, HilbertError::Linalg(l) if linalg_failure(l))
}

fn family_failure(e: &FamilyError) -> bool {
    match e {
        FamilyError::Hilbert(h) => hilbert_failure(h),
        FamilyError::Linalg(l) => linalg_failure(l),
        _ => false,
    }
}

fn upb_failure(e: &UpbError) -> bool {
    match e {
        UpbError::Hilbert(h) => hilbert_failure(h),
        UpbError::Linalg(l) => linalg_failure(l),
        _ => false,
    }
}

fn classify_error(numeric: bool, e: impl std::fmt::Display) -> Failure {
    if numeric {
        Failure::Numeric(e.to_string())
    } else {
        Failure::Input(e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let numeric = matches!(&e, CatalogError::Family(f) if family_failure(f));
        classify_error(numeric, e)
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self { classify_error(family_failure(&e), e) }
}

impl From<HilbertError> for Failure {
    fn from(e: HilbertError) -> Self { classify_error(hilbert_failure(&e), e) }
}

impl From<UpbError> for Failure {
    fn from(e: UpbError) -> Self { classify_error(upb_failure(&e), e) }
}

impl From<StateFileError> for Failure {
    fn from(e: StateFileError) -> Self { Failure::Input(e.to_string()) }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        let numeric = match &e {
            ReportError::NotPositive(..) | ReportError::BadTrace(_) => false,
            ReportError::Hilbert(h) => hilbert_failure(h),
            ReportError::Upb(u) => upb_failure(u),
            ReportError::Range(RangeError::Family(f)) => family_failure(f),
            ReportError::Range(_) => false,
        };
        classify_error(numeric, e)
    }
}

fn check_tol(name: &str, tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("{name} must be a positive number, got {tol}")))
    }
}

/* Commands *******************************************************************/

fn cmd_catalog() -> String {
    let mut out = String::new();
    for entry in catalog::ENTRIES {
        writeln!(out, "{entry}").unwrap();
    }
    out
}

/// A catalog id wins over a file of the same name; anything else must be an
/// existing file.
fn resolve_state(state: &str, b: Option<f64>) -> Result<(Operator, Evidence), Failure> {
    match catalog::lookup(state) {
        Ok(entry) => {
            let op = catalog::state(entry.id, b)?;
            Ok((op, catalog::evidence(entry.id, b)?))
        },
        Err(unknown) => {
            if !Path::new(state).exists() {
                return Err(unknown.into());
            }
            if b.is_some() {
                return Err(Failure::Input("--b applies only to catalog families".into()));
            }
            Ok((statefile::load_state(state)?, Evidence::None))
        },
    }
}

fn cmd_check(state: &str, b: Option<f64>, tol: f64, format: Format) -> Result<String, Failure> {
    check_tol("--tol", tol)?;
    let (op, evidence) = resolve_state(state, b)?;
    let report = report::classify(&op, tol, &evidence)?;
    Ok(match format {
        Format::Text => format!("{report}\n"),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")),
    })
}

fn sweep_points(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if !(from.is_finite() && to.is_finite()) || steps == 0 || from > to || (steps > 1 && from == to) {
        return Err(Failure::Input(format!("empty sweep range: --from {from} --to {to} --steps {steps}")));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let n = (steps - 1) as f64;
    Ok((0..steps).map(|k| if k == steps - 1 { to } else { from + (to - from) * k as f64 / n }).collect())
}

fn cmd_sweep(family: &str, from: f64, to: f64, steps: usize) -> Result<String, Failure> {
    let f = catalog::family_fn(family)?;
    let mut out = String::from("b,lmin_A,lmin_B,lmin_C\n");
    for b in sweep_points(from, to, steps)? {
        let rho = f(b)?;
        write!(out, "{b:.16e}").unwrap();
        for party in Party::ALL {
            write!(out, ",{:.16e}", ppt::lmin_pt(&rho, party)?).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_threshold(family: &str, party: Party, tol: f64, b_tol: f64, format: Format) -> Result<String, Failure> {
    check_tol("--tol", tol)?;
    check_tol("--b-tol", b_tol)?;
    let f = catalog::family_fn(family)?;
    let id = catalog::lookup(family)?.id;
    let t = ppt::ppt_threshold(f, party, (0.0, 1.0), b_tol, tol)?;
    Ok(match (format, &t) {
        (Format::Json, Threshold::Root { b, bracket, evaluations }) => format!("{}\n", json!({
            "family": id, "party": party.to_string(), "root": b,
            "bracket": [bracket.0, bracket.1], "evaluations": evaluations,
        })),
        (Format::Json, Threshold::NoSignChange { lmin_low, lmin_high }) => format!("{}\n", json!({
            "family": id, "party": party.to_string(), "root": null,
            "lmin_low": lmin_low, "lmin_high": lmin_high,
        })),
        (Format::Text, Threshold::Root { b, bracket, evaluations }) => format!(
            "{id} party {party}: lambda_min changes sign at b = {b:.16e}\n  bracket [{}, {}], {evaluations} evaluations\n",
            bracket.0, bracket.1,
        ),
        (Format::Text, Threshold::NoSignChange { lmin_low, lmin_high }) => format!(
            "{id} party {party}: no sign change on [0, 1]\n  lambda_min ranges over [{lmin_low:.6e}, {lmin_high:.6e}]\n",
        ),
    })
}

fn cmd_upb_verify(set: &str, format: Format) -> Result<String, Failure> {
    let entry = catalog::lookup(set)?;
    if entry.kind != EntryKind::ProductSet {
        return Err(catalog::product_set(entry.id).unwrap_err().into());
    }
    let members = catalog::product_set(entry.id)?;
    let v = upb::verify_unextendible(&members)?;
    let witness = v.witness.as_ref().map(|w| {
        w.vector.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()
    });
    Ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json!({
            "set": entry.id,
            "dims": members.dims().as_array(),
            "members": members.len(),
            "orthogonal": v.is_orthogonal,
            "max_overlap": v.max_overlap,
            "unextendible": v.is_unextendible,
            "complement_dim": v.complement_dim,
            "nodes": v.nodes,
            "witness": witness,
        })).expect("serializes")),
        Format::Text => {
            let yes = |x: bool| if x { "yes" } else { "no" };
            let mut out = format!("{} {}: {} members\n", entry.id, members.dims(), members.len());
            writeln!(out, "orthogonal: {} (max overlap {:.3e})", yes(v.is_orthogonal), v.max_overlap).unwrap();
            writeln!(out, "unextendible: {} ({} search nodes)", yes(v.is_unextendible), v.nodes).unwrap();
            write!(out, "complement dimension: {}", v.complement_dim).unwrap();
            if v.complement_dim == 0 {
                out.push_str(" (complete basis)");
            }
            out.push('\n');
            if let Some(w) = &v.witness {
                let parties: String = w.assignment.iter().map(|p| p.to_string()).collect();
                writeln!(out, "extension found; members orthogonal on parties {parties}").unwrap();
            }
            out
        },
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Catalog => Ok(cmd_catalog()),
        Command::Check { state, b, tol, format } => cmd_check(&state, b, tol, format),
        Command::Sweep { family, from, to, steps } => cmd_sweep(&family, from, to, steps),
        Command::Threshold { family, party, tol, b_tol, format } => cmd_threshold(&family, party, tol, b_tol, format),
        Command::Upb { command: UpbCommand::Verify { set, format } } => cmd_upb_verify(&set, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        },
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        },
    }
}
