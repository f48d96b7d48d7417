//! Command implementations behind the `pseudocycle` binary.
//!
//! Each command returns a [`RunReport`] plus a short human summary; the
//! binary prints the report on stdout and the summary on stderr. Exit codes:
//! 0 success, 1 verification failure, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pseudocycle_core::{
    cocycle_from_spec, Chain, Cocycle3, HomologyContext, PseudoCycleFinder, Quandle, QuandleSpec,
    TriplePointDataset, DEFAULT_POINT_CAP,
};
use serde_json::{json, Value};

mod report;
mod verify;

pub use report::{InputDigest, RunReport, Verdict};

#[derive(Debug, Parser)]
#[command(
    name = "pseudocycle",
    version,
    about = "Quandle homology and pseudo-cycles of colored triple-point data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute the counterexample from the bundled D and D' datasets.
    VerifyPaper(VerifyArgs),
    /// Integral quandle homology group H_n^Q.
    Homology(HomologyArgs),
    /// Pseudo-cycles of a triple-point dataset.
    PseudoCycles(PseudoCycleArgs),
    /// Pair a 3-cocycle with a chain.
    EvalCocycle(EvalArgs),
    /// Brute-force check of the cocycle condition.
    CheckCocycle(CheckArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Dataset for D (defaults to the bundled yashiro_d.json).
    #[arg(long = "d", value_name = "PATH")]
    pub d: Option<PathBuf>,
    /// Dataset for D' (defaults to the bundled yashiro_dprime.json).
    #[arg(long = "dprime", value_name = "PATH")]
    pub dprime: Option<PathBuf>,
    /// Directory holding the bundled datasets.
    #[arg(long, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HomologyArgs {
    /// dihedral:<n>, trivial:<n> or table:<path to JSON table>
    #[arg(long)]
    pub quandle: String,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct PseudoCycleArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Maximum number of pairwise disjoint pseudo-cycles with a witness.
    #[arg(long, group = "mode")]
    pub max: bool,
    /// Every pseudo-cycle subset.
    #[arg(long, group = "mode")]
    pub list: bool,
    /// Full report (the default).
    #[arg(long, group = "mode")]
    pub all: bool,
    /// Largest dataset the exhaustive search accepts.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// mochizuki:<p>
    #[arg(long)]
    pub cocycle: String,
    /// Chain JSON file.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["input", "subset"], required_unless_present = "input")]
    pub chain: Option<PathBuf>,
    /// Quandle of the chain given with --chain (defaults to the cocycle's).
    #[arg(long, requires = "chain")]
    pub quandle: Option<String>,
    /// Dataset file; the chain is the signed sum over --subset.
    #[arg(long, value_name = "PATH", requires = "subset")]
    pub input: Option<PathBuf>,
    /// Comma-separated triple point ids.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub subset: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// mochizuki:<p>
    #[arg(long)]
    pub cocycle: String,
    /// Include the full value table in the report.
    #[arg(long)]
    pub table: bool,
}

/// Bad input: unreadable file, schema violation, invalid spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl std::fmt::Display) -> InputError {
    InputError(msg.to_string())
}

/// A finished command: the report and a one-line summary for stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self.report.verdict {
            Some(Verdict::Fail) => 1,
            _ => 0,
        }
    }
}

pub fn run(cli: &Cli, arguments: Vec<String>) -> Result<Outcome, InputError> {
    match &cli.command {
        Command::VerifyPaper(a) => verify::verify_paper(a, arguments),
        Command::Homology(a) => homology(a, arguments),
        Command::PseudoCycles(a) => pseudo_cycles(a, arguments),
        Command::EvalCocycle(a) => eval_cocycle(a, arguments),
        Command::CheckCocycle(a) => check_cocycle(a, arguments),
    }
}

pub(crate) fn read_input(path: &Path) -> Result<(String, InputDigest), InputError> {
    let bytes = fs::read(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let digest = InputDigest::of(path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| input_err(format!("{}: not valid UTF-8", path.display())))?;
    Ok((text, digest))
}

pub(crate) fn load_dataset(path: &Path) -> Result<(TriplePointDataset, InputDigest), InputError> {
    let (text, digest) = read_input(path)?;
    let ds = TriplePointDataset::from_json_str(&text)
        .map_err(|e| input_err(format!("{}: schema error at {}", path.display(), e)))?;
    Ok((ds, digest))
}

/// Parses `dihedral:<n>`, `trivial:<n>` or `table:<path>`.
pub fn parse_quandle(spec: &str) -> Result<(Quandle, Option<InputDigest>), InputError> {
    let (kind, param) = spec.split_once(':').ok_or_else(|| {
        input_err(format!(
            "malformed quandle spec {spec:?}, expected kind:param"
        ))
    })?;
    let order = || {
        param
            .trim()
            .parse::<usize>()
            .map_err(|_| input_err(format!("malformed quandle order in {spec:?}")))
    };
    let built = match kind {
        "dihedral" => QuandleSpec::Dihedral { order: order()? }.build(),
        "trivial" => QuandleSpec::Trivial { order: order()? }.build(),
        "table" => {
            let path = Path::new(param);
            let (text, digest) = read_input(path)?;
            let table: Vec<Vec<usize>> = serde_json::from_str(&text)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            let q = Quandle::from_table(&table)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            return Ok((q, Some(digest)));
        }
        other => return Err(input_err(format!("unknown quandle kind {other:?}"))),
    };
    built
        .map(|q| (q, None))
        .map_err(|e| input_err(format!("invalid quandle {spec:?}: {e}")))
}

fn homology(a: &HomologyArgs, arguments: Vec<String>) -> Result<Outcome, InputError> {
    let (q, digest) = parse_quandle(&a.quandle)?;
    if a.degree == 0 {
        return Err(input_err("degree must be at least 1"));
    }
    let entries = boundary_entries(q.order(), a.degree + 1);
    if entries.is_none_or(|e| e > MAX_MATRIX_ENTRIES) {
        return Err(input_err(format!(
            "boundary matrix for degree {} over a quandle of order {} exceeds {} entries",
            a.degree + 1,
            q.order(),
            MAX_MATRIX_ENTRIES
        )));
    }
    let group = HomologyContext::new(q)
        .homology_group(a.degree)
        .map_err(input_err)?;
    let summary = format!("H_{}^Q({}) = {}", a.degree, a.quandle, group);
    Ok(Outcome {
        report: RunReport {
            command: "homology".into(),
            arguments,
            inputs: digest.into_iter().collect(),
            results: serde_json::to_value(&group).expect("group serializes"),
            verdict: None,
        },
        summary,
    })
}

/// Largest dense boundary matrix `homology` will build.
pub const MAX_MATRIX_ENTRIES: u128 = 1 << 20;

/// Entries of the matrix of the boundary from degree `n` to `n - 1`; the
/// quandle complex has `k (k-1)^(n-1)` generators in degree `n`.
fn boundary_entries(order: usize, n: usize) -> Option<u128> {
    let dim = |d: usize| -> Option<u128> {
        let k = order as u128;
        k.checked_mul((k - 1).checked_pow(u32::try_from(d.checked_sub(1)?).ok()?)?)
    };
    dim(n)?.checked_mul(dim(n - 1)?)
}

fn pseudo_cycles(a: &PseudoCycleArgs, arguments: Vec<String>) -> Result<Outcome, InputError> {
    let (ds, digest) = load_dataset(&a.input)?;
    let finder = PseudoCycleFinder::with_cap(&ds, a.cap);
    let (results, summary) = if a.max {
        let packing = finder.max_disjoint_packing().map_err(input_err)?;
        let summary = format!("max_disjoint_count = {}", packing.count);
        (
            json!({ "max_disjoint_count": packing.count, "witness_packing": packing.witness }),
            summary,
        )
    } else if a.list {
        let found = finder.enumerate().map_err(input_err)?;
        let summary = format!("{} pseudo-cycle subsets", found.len());
        (json!({ "pseudo_cycles": found }), summary)
    } else {
        let report = finder.report().map_err(input_err)?;
        let summary = format!(
            "{} pseudo-cycle subsets, max_disjoint_count = {}",
            report.distinct_count, report.max_disjoint_count
        );
        (
            serde_json::to_value(&report).expect("report serializes"),
            summary,
        )
    };
    Ok(Outcome {
        report: RunReport {
            command: "pseudo-cycles".into(),
            arguments,
            inputs: vec![digest],
            results,
            verdict: None,
        },
        summary,
    })
}

fn parse_cocycle(spec: &str) -> Result<Cocycle3, InputError> {
    cocycle_from_spec(spec).map_err(|e| input_err(format!("invalid cocycle {spec:?}: {e}")))
}

fn eval_cocycle(a: &EvalArgs, arguments: Vec<String>) -> Result<Outcome, InputError> {
    let cocycle = parse_cocycle(&a.cocycle)?;
    let mut inputs = Vec::new();
    let (quandle, chain) = match (&a.chain, &a.input) {
        (Some(path), _) => {
            let (text, digest) = read_input(path)?;
            inputs.push(digest);
            let chain: Chain = serde_json::from_str(&text)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            let quandle = match &a.quandle {
                Some(spec) => {
                    let (q, d) = parse_quandle(spec)?;
                    inputs.extend(d);
                    q
                }
                None => cocycle.quandle().clone(),
            };
            (quandle, chain)
        }
        (None, Some(path)) => {
            let (ds, digest) = load_dataset(path)?;
            inputs.push(digest);
            let ids = a.subset.clone().unwrap_or_default();
            let chain = ds.chain_of(&ids).map_err(input_err)?;
            (ds.quandle().clone(), chain)
        }
        (None, None) => {
            return Err(input_err(
                "either --chain or --input with --subset is required",
            ))
        }
    };
    let value = cocycle.pair(&quandle, &chain).map_err(input_err)?;
    let summary = format!(
        "<{}, {}> = {} mod {}",
        a.cocycle,
        chain,
        value,
        cocycle.modulus()
    );
    Ok(Outcome {
        report: RunReport {
            command: "eval-cocycle".into(),
            arguments,
            inputs,
            results: json!({
                "chain": chain,
                "cocycle": a.cocycle,
                "modulus": cocycle.modulus(),
                "value": value,
            }),
            verdict: None,
        },
        summary,
    })
}

fn check_cocycle(a: &CheckArgs, arguments: Vec<String>) -> Result<Outcome, InputError> {
    let cocycle = parse_cocycle(&a.cocycle)?;
    let check = cocycle.check();
    let verdict = if check.is_ok() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut results = json!({
        "cocycle": a.cocycle,
        "modulus": cocycle.modulus(),
        "quandle_order": cocycle.quandle().order(),
        "quadruples_checked": cocycle.quadruples_checked(),
        "violation": check.as_ref().err(),
    });
    if a.table {
        results["table"] = serde_json::to_value(cocycle.table()).expect("table serializes");
    }
    let summary = match &check {
        Ok(()) => format!(
            "{} satisfies the cocycle condition on all {} quadruples",
            a.cocycle,
            cocycle.quadruples_checked()
        ),
        Err(v) => format!("{} is not a cocycle: {v}", a.cocycle),
    };
    Ok(Outcome {
        report: RunReport {
            command: "check-cocycle".into(),
            arguments,
            inputs: vec![],
            results,
            verdict: Some(verdict),
        },
        summary,
    })
}

pub(crate) fn value_of<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializes")
}
