//! Transfinite stepping: machine runs indexed by ordinals up to a few omegas.
//!
//! Successor stages are ordinary transitions. At each limit stage the tape is
//! replaced cellwise by the limit of its history under one of two rules, the
//! head returns to cell 0, and the machine restarts in a distinguished limit
//! state. Executably, a limit is computed only when the stage's trajectory is
//! provably eventually periodic: the cells' values over one period determine
//! their limsup or liminf, and the detected cycle doubles as a replayable
//! certificate. Trajectories that neither halt nor cycle within the stage
//! budget are refused rather than guessed at.
//!
//! The alphabet must be binary: the limit rules are bitwise by definition, a
//! restriction enforced at construction.

use std::collections::HashMap;

use crate::halting::{lba_halt_decide, ExactAnswer, SpaceBound, SpaceError};
use crate::tm::{decode_tm, halted, step_mut, SymId, TmConfig, TmSpec, ONE};
use crate::Nat;

/// Highest omega multiple a clock may name. Runs this long are already far
/// beyond what the cycle-based limits can distinguish.
pub const OMEGA_CAP: u64 = 4;

pub const DEFAULT_STAGE_BUDGET: u64 = 10_000;

/// The ordinal `omega * omegas + successors`, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct OrdinalClock {
    pub omegas: u64,
    pub successors: u64,
}

impl OrdinalClock {
    pub fn new(omegas: u64, successors: u64) -> Option<OrdinalClock> {
        (omegas <= OMEGA_CAP).then_some(OrdinalClock { omegas, successors })
    }
}

impl std::fmt::Display for OrdinalClock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.omegas, self.successors) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "w"),
            (1, b) => write!(f, "w+{b}"),
            (a, 0) => write!(f, "w*{a}"),
            (a, b) => write!(f, "w*{a}+{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitRule {
    /// A cell is marked in the limit iff it is marked cofinally often.
    Limsup,
    /// A cell is marked in the limit iff it is unmarked only finitely often.
    Liminf,
}

/// A machine table prepared for transfinite runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IttmSpec {
    spec: TmSpec,
    limit_state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IttmSpecError {
    #[error("limit rules are bitwise: the alphabet must be exactly blank and mark")]
    NonBinaryAlphabet,
    #[error("limit state {0} does not exist")]
    LimitStateOutOfRange(usize),
}

impl IttmSpec {
    pub fn new(spec: TmSpec, limit_state: usize) -> Result<IttmSpec, IttmSpecError> {
        if spec.n_symbols() != 2 {
            return Err(IttmSpecError::NonBinaryAlphabet);
        }
        if limit_state >= spec.n_states() {
            return Err(IttmSpecError::LimitStateOutOfRange(limit_state));
        }
        Ok(IttmSpec { spec, limit_state })
    }

    pub fn spec(&self) -> &TmSpec {
        &self.spec
    }

    pub fn limit_state(&self) -> usize {
        self.limit_state
    }
}

/// Proof that a limit stage was well-defined: the stage's trajectory entered a
/// cycle, and the limit was read off that cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LimitCert {
    /// Which omega boundary this certifies, counting from 1.
    pub stage: u64,
    pub cycle_start: u64,
    pub cycle_len: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IttmOutcome {
    Halted { at: OrdinalClock, output: u64, limits: Vec<LimitCert> },
    Running { at: OrdinalClock, state: usize, head: i64, ones: u64, limits: Vec<LimitCert> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IttmError {
    #[error("stage {stage} neither halted nor cycled within {budget} steps")]
    NoCycleWithinBudget { stage: u64, budget: u64 },
}

/// Runs `ittm` on unary input up to the given clock and reports what an
/// observer there sees.
pub fn run_to_clock(
    ittm: &IttmSpec,
    input: &Nat,
    clock: OrdinalClock,
    rule: LimitRule,
    stage_budget: u64,
) -> Result<IttmOutcome, IttmError> {
    let mut cfg = TmConfig::with_unary_input(input);
    let mut limits = Vec::new();
    for stage in 1..=clock.omegas {
        match run_stage(&ittm.spec, cfg, stage_budget) {
            StageEnd::Halted { cfg, at } => {
                return Ok(IttmOutcome::Halted {
                    at: OrdinalClock { omegas: stage - 1, successors: at },
                    output: cfg.ones(),
                    limits,
                });
            }
            StageEnd::Lasso { cycle, cycle_start } => {
                limits.push(LimitCert {
                    stage,
                    cycle_start,
                    cycle_len: cycle.len() as u64,
                });
                cfg = limit_of_cycle(&cycle, rule, ittm.limit_state);
            }
            StageEnd::NoCycle => {
                return Err(IttmError::NoCycleWithinBudget { stage, budget: stage_budget });
            }
        }
    }
    for b in 0..clock.successors {
        if halted(&ittm.spec, &cfg) {
            return Ok(IttmOutcome::Halted {
                at: OrdinalClock { omegas: clock.omegas, successors: b },
                output: cfg.ones(),
                limits,
            });
        }
        step_mut(&ittm.spec, &mut cfg);
    }
    if halted(&ittm.spec, &cfg) {
        return Ok(IttmOutcome::Halted { at: clock, output: cfg.ones(), limits });
    }
    Ok(IttmOutcome::Running {
        at: clock,
        state: cfg.state,
        head: cfg.head,
        ones: cfg.ones(),
        limits,
    })
}

/// Re-derives every certified limit stage and checks each cycle by direct
/// configuration comparison, independent of the detection path.
pub fn replay_limits(
    ittm: &IttmSpec,
    input: &Nat,
    rule: LimitRule,
    stage_budget: u64,
    certs: &[LimitCert],
) -> bool {
    let mut cfg = TmConfig::with_unary_input(input);
    for (i, cert) in certs.iter().enumerate() {
        if cert.stage != i as u64 + 1 || cert.cycle_len == 0 {
            return false;
        }
        // A stage run under this budget can only certify what it saw, so any
        // larger claim is rejected before it is walked.
        if cert.cycle_start.saturating_add(cert.cycle_len) > stage_budget {
            return false;
        }
        // Walk to the cycle entry, snapshot, walk one period, compare.
        for _ in 0..cert.cycle_start {
            if !step_mut(&ittm.spec, &mut cfg) {
                return false;
            }
        }
        let entry = cfg.snapshot();
        let mut probe = cfg.clone();
        let mut cycle = Vec::with_capacity(cert.cycle_len as usize);
        for _ in 0..cert.cycle_len {
            cycle.push(probe.clone());
            if !step_mut(&ittm.spec, &mut probe) {
                return false;
            }
        }
        if probe.snapshot() != entry {
            return false;
        }
        cfg = limit_of_cycle(&cycle, rule, ittm.limit_state);
    }
    true
}

enum StageEnd {
    Halted { cfg: TmConfig, at: u64 },
    Lasso { cycle: Vec<TmConfig>, cycle_start: u64 },
    NoCycle,
}

fn run_stage(spec: &TmSpec, start: TmConfig, budget: u64) -> StageEnd {
    let mut seen: HashMap<(std::collections::BTreeMap<i64, SymId>, i64, usize), u64> =
        HashMap::new();
    let mut trajectory: Vec<TmConfig> = Vec::new();
    let mut cfg = start;
    for b in 0..=budget {
        if halted(spec, &cfg) {
            return StageEnd::Halted { cfg, at: b };
        }
        if let Some(&first) = seen.get(&cfg.snapshot()) {
            let cycle = trajectory[first as usize..].to_vec();
            return StageEnd::Lasso { cycle, cycle_start: first };
        }
        if b == budget {
            break;
        }
        seen.insert(cfg.snapshot(), b);
        trajectory.push(cfg.clone());
        step_mut(spec, &mut cfg);
    }
    StageEnd::NoCycle
}

/// The tail of the stage repeats `cycle` forever, so each cell's limit is its
/// limsup or liminf over one period. The head returns to cell 0 and the
/// machine re-enters its limit state.
fn limit_of_cycle(cycle: &[TmConfig], rule: LimitRule, limit_state: usize) -> TmConfig {
    let mut limit = TmConfig::blank();
    let mut cells: Vec<i64> = cycle.iter().flat_map(|c| c.non_blank().map(|(i, _)| i)).collect();
    cells.sort_unstable();
    cells.dedup();
    for cell in cells {
        let marked = match rule {
            LimitRule::Limsup => cycle.iter().any(|c| c.read(cell) == ONE),
            LimitRule::Liminf => cycle.iter().all(|c| c.read(cell) == ONE),
        };
        if marked {
            limit.write(cell, ONE);
        }
    }
    limit.state = limit_state;
    limit
}

/// What the flag cell of the halt-watching construction does over its stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum FlagHistory {
    SetAt { step: u64 },
    NeverSet { cycle_start: u64, cycle_len: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct IttmHaltDecision {
    pub halts: bool,
    pub rule: LimitRule,
    /// The flag is read one step past the first limit.
    pub read_at: OrdinalClock,
    pub flag: FlagHistory,
}

/// Decides whether machine `x` halts on `y` by the watch-a-flag construction:
/// simulate, raise a flag on halt, read the flag just past the limit stage.
/// The simulation is the windowed one, so the flag's eventual behavior is
/// certified, not guessed; window refusals surface as errors.
pub fn ittm_decide_halting(
    x: &Nat,
    y: &Nat,
    rule: LimitRule,
    space: SpaceBound,
) -> Result<IttmHaltDecision, SpaceError> {
    let flag = match lba_halt_decide(&decode_tm(x), y, space)? {
        ExactAnswer::Halts { steps } => FlagHistory::SetAt { step: steps },
        ExactAnswer::DivergesProven { cycle_start, cycle_len } => {
            FlagHistory::NeverSet { cycle_start, cycle_len }
        }
    };
    // The flag either flips once to mark and stays, or never leaves blank.
    // Either way it is eventually constant, so limsup and liminf coincide on
    // it and the rule choice cannot bias the reading.
    let halts = match (flag, rule) {
        (FlagHistory::SetAt { .. }, LimitRule::Limsup) => true, // marked cofinally
        (FlagHistory::SetAt { .. }, LimitRule::Liminf) => true, // unmarked only finitely often
        (FlagHistory::NeverSet { .. }, _) => false,             // never marked at all
    };
    Ok(IttmHaltDecision {
        halts,
        rule,
        read_at: OrdinalClock { omegas: 1, successors: 1 },
        flag,
    })
}

/// Checks the decision's certificate against a fresh simulation.
pub fn replay_decision(x: &Nat, y: &Nat, space: SpaceBound, decision: &IttmHaltDecision) -> bool {
    let spec = decode_tm(x);
    match decision.flag {
        FlagHistory::SetAt { step } => {
            decision.halts && crate::halting::replay_halts(&spec, y, step)
        }
        FlagHistory::NeverSet { cycle_start, cycle_len } => {
            !decision.halts && crate::halting::replay_cycle(&spec, y, space, cycle_start, cycle_len)
        }
    }
}

/// True when both limit rules yield the same halting verdict at `(x, y)`.
pub fn bias_invariance(x: &Nat, y: &Nat, space: SpaceBound) -> Result<bool, SpaceError> {
    let up = ittm_decide_halting(x, y, LimitRule::Limsup, space)?;
    let down = ittm_decide_halting(x, y, LimitRule::Liminf, space)?;
    Ok(up.halts == down.halts)
}
