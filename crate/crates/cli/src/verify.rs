//! `verify-paper`: the counterexample pipeline over the D and D' datasets.

use std::path::{Path, PathBuf};

use pseudocycle_core::{
    boundary_quandle, boundary_rack, mochizuki_theta, Chain, PseudoCycleFinder, PseudoCycleReport,
    Quandle, TriplePointDataset,
};
use serde::Serialize;
use serde_json::json;

use crate::{load_dataset, value_of, InputError, Outcome, RunReport, Verdict, VerifyArgs};

pub const D_FILE: &str = "yashiro_d.json";
pub const DPRIME_FILE: &str = "yashiro_dprime.json";

const C1_IDS: [&str; 2] = ["t2", "t3"];
const C2_IDS: [&str; 2] = ["t5", "t6"];

/// Where the bundled datasets live when no path is given: `./data` if it
/// holds them, else the `data/` directory of the source checkout.
pub fn default_data_dir() -> PathBuf {
    let local = PathBuf::from("data");
    if local.join(DPRIME_FILE).is_file() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

struct Checks(Vec<Check>);

impl Checks {
    fn record(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) -> bool {
        self.0.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
        passed
    }

    fn first_failure(&self) -> Option<&'static str> {
        self.0.iter().find(|c| !c.passed).map(|c| c.name)
    }
}

pub(crate) fn verify_paper(a: &VerifyArgs, arguments: Vec<String>) -> Result<Outcome, InputError> {
    let dir = a.data_dir.clone().unwrap_or_else(default_data_dir);
    let d_path = a.d.clone().unwrap_or_else(|| dir.join(D_FILE));
    let dp_path = a.dprime.clone().unwrap_or_else(|| dir.join(DPRIME_FILE));
    // all input validation happens before any computation
    let (d, d_digest) = load_dataset(&d_path)?;
    let (dp, dp_digest) = load_dataset(&dp_path)?;

    let mut checks = Checks(Vec::new());
    let r3 = Quandle::dihedral(3).expect("R_3");
    let theta = mochizuki_theta();

    let over_r3 = checks.record(
        "datasets_over_r3",
        d.quandle() == &r3 && dp.quandle() == &r3,
        format!(
            "orders {} and {}",
            d.quandle().order(),
            dp.quandle().order()
        ),
    );

    let c1 = chain_for(&dp, &C1_IDS);
    let c2 = chain_for(&dp, &C2_IDS);
    let mut rack_boundary = None;
    match (&c1, &c2) {
        (Ok(c1), Ok(c2)) if over_r3 => {
            let rack = boundary_rack(c1, &r3).map_err(|e| InputError(e.to_string()))?;
            rack_boundary = Some(rack.clone());
            let quandle_boundary = c1
                .has_degenerate_term()
                .is_none()
                .then(|| boundary_quandle(c1, &r3).ok())
                .flatten();
            checks.record(
                "c1_is_quandle_cycle",
                quandle_boundary.as_ref().is_some_and(Chain::is_zero),
                format!(
                    "c1 = {c1}; rack boundary {rack}; quandle boundary {}",
                    quandle_boundary.map_or("undefined".to_string(), |b| b.to_string())
                ),
            );
            checks.record("c2_is_minus_c1", *c2 == -c1, format!("c2 = {c2}"));
            let value = theta.pair(&r3, c1).map_err(|e| InputError(e.to_string()))?;
            checks.record(
                "theta_is_cocycle",
                theta.is_quandle_3cocycle(),
                format!("{} quadruples", theta.quadruples_checked()),
            );
            checks.record(
                "theta_pairs_nontrivially_with_c1",
                value != 0,
                format!("<theta, c1> = {value} mod 3"),
            );
            let finder = PseudoCycleFinder::new(&dp);
            let not_null = if checks.0.iter().all(|c| c.passed) {
                let null = finder
                    .homology()
                    .is_null_homologous(c1)
                    .map_err(|e| InputError(e.to_string()))?;
                !null
            } else {
                false
            };
            checks.record(
                "c1_not_null_homologous",
                not_null,
                "decided by integer image membership",
            );
            let both = finder.is_pseudo_cycle(&C1_IDS).unwrap_or(false)
                && finder.is_pseudo_cycle(&C2_IDS).unwrap_or(false);
            checks.record("c1_and_c2_are_pseudo_cycles", both, "{t2,t3} and {t5,t6}");
        }
        _ => {
            let detail = match (&c1, &c2) {
                (Err(e), _) | (_, Err(e)) => e.clone(),
                _ => "datasets are not over R_3".to_string(),
            };
            checks.record("c1_is_quandle_cycle", false, detail);
        }
    }

    let report_d = analyze(&d)?;
    let report_dp = analyze(&dp)?;
    let (count_d, count_dp) = (report_d.max_disjoint_count, report_dp.max_disjoint_count);
    checks.record(
        "count_d_is_zero",
        count_d == 0,
        format!("max_disjoint_count(D) = {count_d}"),
    );
    checks.record(
        "count_dprime_is_two",
        count_dp == 2,
        format!("max_disjoint_count(D') = {count_dp}"),
    );
    checks.record(
        "counts_differ",
        count_d != count_dp,
        format!("{count_d} vs {count_dp}"),
    );

    let first_failure = checks.first_failure();
    let verdict = if first_failure.is_none() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let summary = match first_failure {
        None => format!(
            "pass: D has {count_d} and D' has {count_dp} disjoint pseudo-cycles; the statistic is not invariant"
        ),
        Some(name) => format!("fail: check {name} did not hold"),
    };
    let results = json!({
        "checks": value_of(&checks.0),
        "counts": { "D": count_d, "D'": count_dp },
        "d": value_of(&report_d),
        "dprime": value_of(&report_dp),
        "rack_boundary_of_c1": rack_boundary.map(|c| value_of(&c)),
        "first_failure": first_failure,
    });
    Ok(Outcome {
        report: RunReport {
            command: "verify-paper".into(),
            arguments,
            inputs: vec![d_digest, dp_digest],
            results,
            verdict: Some(verdict),
        },
        summary,
    })
}

fn chain_for(ds: &TriplePointDataset, ids: &[&str]) -> Result<Chain, String> {
    ds.chain_of(ids)
        .map_err(|e| format!("D' lacks {ids:?}: {e}"))
}

fn analyze(ds: &TriplePointDataset) -> Result<PseudoCycleReport, InputError> {
    PseudoCycleFinder::new(ds)
        .report()
        .map_err(|e| InputError(e.to_string()))
}
