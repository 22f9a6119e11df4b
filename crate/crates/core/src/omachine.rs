//! Machines with a halting oracle wired into designated states.
//!
//! A query state carries no ordinary rules. Entering it consumes one step:
//! the machine reads `z` off its own tape as "mark count minus one", asks an
//! exact halting oracle whether machine `z` halts on input `z`, and continues
//! in the yes- or no-state with tape and head untouched. The oracle is the
//! windowed exact tier, so its answers are definite and its refusals (machines
//! outside the windowed class) surface as errors instead of guesses.

use crate::halting::{lba_halt_decide, ExactAnswer, SpaceBound, SpaceError};
use crate::tm::{decode_tm, halted, step_mut, RunOutcome, StateId, TmConfig, TmSpec};
use crate::{nat, Nat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleQuery {
    pub state: StateId,
    pub yes: StateId,
    pub no: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTm {
    spec: TmSpec,
    queries: Vec<OracleQuery>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleTmError {
    #[error("query state {0} also carries ordinary rules")]
    QueryStateHasRules(StateId),
    #[error("query state {0} is marked as a halt state")]
    QueryStateIsHalt(StateId),
    #[error("state {0} has two oracle queries")]
    DuplicateQueryState(StateId),
    #[error("query on state {state} targets state {target} which does not exist")]
    TargetOutOfRange { state: StateId, target: StateId },
}

impl OracleTm {
    pub fn new(spec: TmSpec, queries: Vec<OracleQuery>) -> Result<OracleTm, OracleTmError> {
        let n = spec.n_states();
        for (i, q) in queries.iter().enumerate() {
            if queries[..i].iter().any(|p| p.state == q.state) {
                return Err(OracleTmError::DuplicateQueryState(q.state));
            }
            if spec.is_halt_state(q.state) {
                return Err(OracleTmError::QueryStateIsHalt(q.state));
            }
            if (0..spec.n_symbols()).any(|s| spec.rule(q.state, s).is_some()) {
                return Err(OracleTmError::QueryStateHasRules(q.state));
            }
            for target in [q.yes, q.no] {
                if target >= n {
                    return Err(OracleTmError::TargetOutOfRange { state: q.state, target });
                }
            }
        }
        Ok(OracleTm { spec, queries })
    }

    pub fn spec(&self) -> &TmSpec {
        &self.spec
    }

    fn query_for(&self, state: StateId) -> Option<&OracleQuery> {
        self.queries.iter().find(|q| q.state == state)
    }
}

/// Runs under the usual unary conventions; oracle consultations count as steps.
pub fn run_oracle(
    om: &OracleTm,
    input: &Nat,
    budget: u64,
    space: SpaceBound,
) -> Result<RunOutcome, SpaceError> {
    let mut cfg = TmConfig::with_unary_input(input);
    for step in 0..budget {
        if let Some(q) = om.query_for(cfg.state) {
            let z = nat(cfg.ones().saturating_sub(1));
            cfg.state = match lba_halt_decide(&decode_tm(&z), &z, space)? {
                ExactAnswer::Halts { .. } => q.yes,
                ExactAnswer::DivergesProven { .. } => q.no,
            };
            cfg.steps = step + 1;
            continue;
        }
        if !step_mut(&om.spec, &mut cfg) {
            return Ok(RunOutcome::Halted { output: cfg.ones(), steps: step });
        }
        cfg.steps = step + 1;
    }
    if om.query_for(cfg.state).is_none() && halted(&om.spec, &cfg) {
        return Ok(RunOutcome::Halted { output: cfg.ones(), steps: budget });
    }
    Ok(RunOutcome::Unknown { budget })
}

/// The anti-diagonal made executable by strength: asks the oracle about the
/// input's own index and outputs the opposite of the halting answer, 0 where
/// the plain diagonal value is defined and 1 where it diverges. No machine of
/// the queried class computes this function of `x`; one query to the stronger
/// tier suffices.
pub fn negation_demo() -> OracleTm {
    use crate::tm::Move::Right;
    let spec = TmSpec::from_rules(
        4,
        2,
        &[
            // state 1: halting answer was yes, erase everything: output 0
            ((1, 1), (0, Right, 1)),
            // states 2 and 3: answer was no, keep one mark: output 1
            ((2, 1), (1, Right, 3)),
            ((3, 1), (0, Right, 3)),
        ],
    )
    .expect("demo table is well-formed");
    OracleTm::new(spec, vec![OracleQuery { state: 0, yes: 1, no: 2 }])
        .expect("state 0 has no rules")
}
