//! Range sweeps that cross-check the diagonal constructions against ground
//! truth, entry by entry.
//!
//! Each entry is computed independently of every other, so the sweep is a
//! pure map over an index range. With the `parallel` feature the map fans out
//! through a work-stealing pool and is collected back in index order; without
//! it the same map runs sequentially. Reports are byte-identical either way.

use serde::Serialize;

use crate::atm::{atm_run, AtmParams, AtmProgram, AtmVerdict};
use crate::godel::{diagonal_h, universal_eval};
use crate::halting::{
    diagonal_g, lba_halt_decide, replay_cycle, replay_halts, ExactAnswer, GOutcome, SpaceBound,
};
use crate::ittm::{ittm_decide_halting, replay_decision, LimitRule};
use crate::pairing::unpair;
use crate::pr::EvalLimits;
use crate::tm::decode_tm;
use crate::{nat, Nat};

/// Which construction the sweep audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    /// Successor diagonal against the universal evaluator.
    PrDiagonal,
    /// Anti-halting diagonal against replayed halting certificates.
    TmDiagonal,
    /// Limit-stage halting decisions against the exact tier, both rules.
    IttmDecision,
    /// Accelerated solver verdicts against the exact tier; the index is read
    /// as the pair code of the question.
    AtmSolver,
}

impl SweepTarget {
    pub const ALL: [SweepTarget; 4] = [
        SweepTarget::PrDiagonal,
        SweepTarget::TmDiagonal,
        SweepTarget::IttmDecision,
        SweepTarget::AtmSolver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepTarget::PrDiagonal => "pr-diagonal",
            SweepTarget::TmDiagonal => "tm-diagonal",
            SweepTarget::IttmDecision => "ittm-decision",
            SweepTarget::AtmSolver => "atm-solver",
        }
    }

    pub fn from_name(name: &str) -> Option<SweepTarget> {
        SweepTarget::ALL.into_iter().find(|t| t.name() == name)
    }
}

impl std::fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Verdict for one index. `Unknown` is a budget running out, `OutOfSpace` the
/// windowed instrument refusing the case; neither is ever folded into the
/// definite two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    Agree,
    Disagree,
    Unknown,
    OutOfSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepParams {
    pub space: SpaceBound,
    pub budget: u64,
    pub limits: EvalLimits,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            space: SpaceBound::default(),
            budget: crate::halting::DEFAULT_BUDGET,
            limits: EvalLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub index: u64,
    pub status: SweepStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SweepSummary {
    pub agree: u64,
    pub disagree: u64,
    pub unknown: u64,
    pub out_of_space: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub target: SweepTarget,
    pub start: u64,
    pub end: u64,
    pub summary: SweepSummary,
    pub entries: Vec<SweepEntry>,
}

/// Maps `f` over `[start, end)` and returns results in index order. This is
/// the crate's one fan-out point; everything mapped through it must be a pure
/// function of the index for the parallel and sequential builds to agree.
#[cfg(feature = "parallel")]
pub fn map_range<T, F>(start: u64, end: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (start..end).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<T, F>(start: u64, end: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_range_sequential(start, end, f)
}

/// The sequential map, kept callable under every feature set so the parallel
/// path always has an in-process baseline to diff against.
pub fn map_range_sequential<T, F>(start: u64, end: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (start..end).map(f).collect()
}

/// Values too wide to print whole are reported by their width.
fn short_nat(n: &Nat) -> String {
    if n.bits() <= 64 {
        n.to_string()
    } else {
        format!("{}-bit value", n.bits())
    }
}

fn entry(index: u64, status: SweepStatus, detail: String) -> SweepEntry {
    SweepEntry { index, status, detail }
}

/// One index of the chosen sweep. Public so single points can be probed
/// without paying for a range.
pub fn sweep_entry(target: SweepTarget, index: u64, params: &SweepParams) -> SweepEntry {
    match target {
        SweepTarget::PrDiagonal => pr_diagonal_entry(index, params),
        SweepTarget::TmDiagonal => tm_diagonal_entry(index, params),
        SweepTarget::IttmDecision => ittm_decision_entry(index, params),
        SweepTarget::AtmSolver => atm_solver_entry(index, params),
    }
}

fn pr_diagonal_entry(index: u64, params: &SweepParams) -> SweepEntry {
    let x = nat(index);
    match universal_eval(&x, &x, &params.limits) {
        Err(e) => entry(index, SweepStatus::Unknown, e.to_string()),
        Ok(v) => match diagonal_h(&x, &params.limits) {
            Ok(h) if h == &v + 1u32 && h != v => entry(
                index,
                SweepStatus::Agree,
                format!("self-value {} escaped to {}", short_nat(&v), short_nat(&h)),
            ),
            Ok(h) => entry(
                index,
                SweepStatus::Disagree,
                format!("diagonal gave {} over self-value {}", short_nat(&h), short_nat(&v)),
            ),
            Err(e) => entry(
                index,
                SweepStatus::Disagree,
                format!("diagonal refused a settled self-value: {e}"),
            ),
        },
    }
}

fn tm_diagonal_entry(index: u64, params: &SweepParams) -> SweepEntry {
    let x = nat(index);
    let spec = decode_tm(&x);
    match diagonal_g(&x, params.space) {
        Err(e) => entry(index, SweepStatus::OutOfSpace, e.to_string()),
        Ok(GOutcome::Value { output, cycle_start, cycle_len }) => {
            if output == 0 && replay_cycle(&spec, &x, params.space, cycle_start, cycle_len) {
                entry(
                    index,
                    SweepStatus::Agree,
                    format!("defined as 0; divergence cycle ({cycle_start},{cycle_len}) replays"),
                )
            } else {
                entry(index, SweepStatus::Disagree, "divergence side failed replay".to_owned())
            }
        }
        Ok(GOutcome::DivergesMarker { halt_steps }) => {
            if replay_halts(&spec, &x, halt_steps) {
                entry(
                    index,
                    SweepStatus::Agree,
                    format!("marked divergent; the {halt_steps}-step halt replays"),
                )
            } else {
                entry(index, SweepStatus::Disagree, "halting side failed replay".to_owned())
            }
        }
    }
}

fn ittm_decision_entry(index: u64, params: &SweepParams) -> SweepEntry {
    let x = nat(index);
    let ground = match lba_halt_decide(&decode_tm(&x), &x, params.space) {
        Err(e) => return entry(index, SweepStatus::OutOfSpace, e.to_string()),
        Ok(answer) => matches!(answer, ExactAnswer::Halts { .. }),
    };
    for rule in [LimitRule::Limsup, LimitRule::Liminf] {
        match ittm_decide_halting(&x, &x, rule, params.space) {
            Err(e) => return entry(index, SweepStatus::OutOfSpace, e.to_string()),
            Ok(decision) => {
                if decision.halts != ground {
                    return entry(
                        index,
                        SweepStatus::Disagree,
                        format!("{rule:?} decision contradicts ground truth"),
                    );
                }
                if !replay_decision(&x, &x, params.space, &decision) {
                    return entry(
                        index,
                        SweepStatus::Disagree,
                        format!("{rule:?} decision failed replay"),
                    );
                }
            }
        }
    }
    entry(
        index,
        SweepStatus::Agree,
        format!("both limit rules decide {}", if ground { "halts" } else { "diverges" }),
    )
}

fn atm_solver_entry(index: u64, params: &SweepParams) -> SweepEntry {
    let code = nat(index);
    let (x, y) = unpair(&code);
    let atm_params = AtmParams { budget: params.budget, space: params.space };
    let verdict = match atm_run(&AtmProgram::HaltingSolver, &code, &atm_params) {
        Ok(v) => v,
        Err(e) => return entry(index, SweepStatus::Disagree, format!("solver errored: {e}")),
    };
    match lba_halt_decide(&decode_tm(&x), &y, params.space) {
        Ok(ExactAnswer::Halts { .. }) => match verdict {
            AtmVerdict::Marked { step } => entry(
                index,
                SweepStatus::Agree,
                format!("pair ({x},{y}) halts and the square marks at step {step}"),
            ),
            other => entry(index, SweepStatus::Disagree, format!("halting pair got {other:?}")),
        },
        Ok(ExactAnswer::DivergesProven { .. }) => match verdict {
            AtmVerdict::UnmarkedProven { .. } => entry(
                index,
                SweepStatus::Agree,
                format!("pair ({x},{y}) provably diverges and the square provably stays clean"),
            ),
            other => entry(index, SweepStatus::Disagree, format!("diverging pair got {other:?}")),
        },
        Err(e) => match verdict {
            AtmVerdict::Marked { step } => entry(
                index,
                SweepStatus::Agree,
                format!("window refused but the budgeted run halts at step {step}"),
            ),
            AtmVerdict::UnmarkedAtBudget { .. } => {
                entry(index, SweepStatus::OutOfSpace, e.to_string())
            }
            AtmVerdict::UnmarkedProven { .. } => entry(
                index,
                SweepStatus::Disagree,
                "unmarked proof without a window for it".to_owned(),
            ),
        },
    }
}

/// Sweeps `[start, end)` and tallies. Entries come back in index order
/// regardless of how the map was scheduled.
pub fn sweep_range(
    target: SweepTarget,
    start: u64,
    end: u64,
    params: &SweepParams,
) -> SweepReport {
    let entries = map_range(start, end, |i| sweep_entry(target, i, params));
    let mut summary = SweepSummary::default();
    for e in &entries {
        match e.status {
            SweepStatus::Agree => summary.agree += 1,
            SweepStatus::Disagree => summary.disagree += 1,
            SweepStatus::Unknown => summary.unknown += 1,
            SweepStatus::OutOfSpace => summary.out_of_space += 1,
        }
    }
    SweepReport { target, start, end, summary, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_roundtrip() {
        for t in SweepTarget::ALL {
            assert_eq!(SweepTarget::from_name(t.name()), Some(t));
        }
        assert_eq!(SweepTarget::from_name("bogus"), None);
    }

    #[test]
    fn entries_arrive_in_index_order_with_matching_summary() {
        let report = sweep_range(SweepTarget::TmDiagonal, 5, 90, &SweepParams::default());
        assert_eq!(report.entries.len(), 85);
        for (offset, e) in report.entries.iter().enumerate() {
            assert_eq!(e.index, 5 + offset as u64);
        }
        let total = report.summary.agree
            + report.summary.disagree
            + report.summary.unknown
            + report.summary.out_of_space;
        assert_eq!(total, 85);
        assert_eq!(report.summary.disagree, 0);
        assert!(report.summary.agree > 0);
    }

    #[test]
    fn no_target_disagrees_on_a_shared_prefix() {
        let params = SweepParams::default();
        for target in SweepTarget::ALL {
            let report = sweep_range(target, 0, 60, &params);
            assert_eq!(report.summary.disagree, 0, "{target}: {:?}", report.entries.iter().find(|e| e.status == SweepStatus::Disagree));
        }
    }

    #[test]
    fn sweeps_are_reproducible() {
        let params = SweepParams::default();
        let a = sweep_range(SweepTarget::PrDiagonal, 0, 120, &params);
        let b = sweep_range(SweepTarget::PrDiagonal, 0, 120, &params);
        assert_eq!(a, b);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_maps_agree() {
        let params = SweepParams::default();
        for target in [SweepTarget::TmDiagonal, SweepTarget::AtmSolver] {
            let par = map_range(0, 80, |i| sweep_entry(target, i, &params));
            let seq = map_range_sequential(0, 80, |i| sweep_entry(target, i, &params));
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn reports_serialize_with_stable_field_order() {
        let report = sweep_range(SweepTarget::IttmDecision, 0, 2, &SweepParams::default());
        let json = serde_json::to_string(&report).unwrap();
        let order =
            ["\"target\"", "\"start\"", "\"end\"", "\"summary\"", "\"entries\"", "\"index\""];
        let positions: Vec<usize> = order.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"target\":\"ittm_decision\""));
    }
}
