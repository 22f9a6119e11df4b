//! Accelerated-run semantics.
//!
//! The device here runs a machine whose successive transitions take halved
//! durations, so an observer at a fixed external moment sees the outcome of
//! unboundedly many internal steps. Output lives on a single square, cell 0,
//! that may change at most once; the input block sits at cells `1..=n+1` with
//! the head starting on cell 1. The observer reads the square after the whole
//! internal run, so a verdict is either "marked at internal step k", "provably
//! never marked" with a replayable reason, or an honest "unmarked within this
//! budget, no proof".
//!
//! Two idealized programs are modeled beside ordinary tables: a watcher that
//! marks the square exactly when a fixed machine halts on the program input,
//! and the full halting solver over paired `(machine, input)` codes. Both get
//! their verdicts from the halting tiers rather than from table simulation,
//! and both are rejected by [`compose_check`]: their square settles only in
//! the limit, so no internal step exists after which a second stage could
//! safely read it. That asymmetry, solving the halting problem while refusing
//! to feed the answer onward, is the point of the model.

use crate::halting::{
    lba_halt_decide, semi_decide_halt, ExactAnswer, SemiAnswer, SpaceBound, SpaceError, Window,
    VISITED_CAP,
};
use crate::pairing::unpair;
use crate::tm::{decode_tm, halted, step_mut, StateId, SymId, TmConfig, TmSpec, BLANK, ONE};
use crate::{nat, Nat};
use num_traits::ToPrimitive;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtmParams {
    pub budget: u64,
    pub space: SpaceBound,
}

impl Default for AtmParams {
    fn default() -> Self {
        AtmParams { budget: crate::halting::DEFAULT_BUDGET, space: SpaceBound::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtmProgram {
    /// An ordinary table run under the accelerated conventions.
    Table(TmSpec),
    /// Marks the square exactly when machine `index` halts on the program input.
    WatchHalting { index: Nat },
    /// Marks the square exactly when machine `x` halts on `y`, the program
    /// input read as the pair code of `(x, y)`.
    HaltingSolver,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AtmVerdict {
    /// The square changed at internal step `step` and write-once held after.
    Marked { step: u64 },
    /// The square can never change; the certificate replays.
    UnmarkedProven { cert: UnmarkedCert },
    /// Clean square so far, nothing proven.
    UnmarkedAtBudget { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum UnmarkedCert {
    /// The table halted with the square untouched.
    HaltedUnmarked { steps: u64 },
    /// The windowed table run cycles with the square untouched.
    NeverMarks { cycle_start: u64, cycle_len: u64 },
    /// The watched machine provably diverges, so the mark never lands.
    NeverHalts { cycle_start: u64, cycle_len: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtmError {
    #[error("output square changed a second time at internal step {step}")]
    WriteOnceViolation { step: u64 },
    #[error(transparent)]
    Oracle(SpaceError),
}

/// Observes one accelerated run of `program` on `input`.
pub fn atm_run(
    program: &AtmProgram,
    input: &Nat,
    params: &AtmParams,
) -> Result<AtmVerdict, AtmError> {
    match program {
        AtmProgram::Table(spec) => run_table(spec, input, params),
        AtmProgram::WatchHalting { index } => watch_verdict(index, input, params),
        AtmProgram::HaltingSolver => {
            let (x, y) = unpair(input);
            watch_verdict(&x, &y, params)
        }
    }
}

/// The ideal device marks iff machine `x` halts on `y`. Executably: a definite
/// exact-tier answer becomes a definite verdict; outside that class the budget
/// probe either sees the halt or reports honest ignorance.
fn watch_verdict(x: &Nat, y: &Nat, params: &AtmParams) -> Result<AtmVerdict, AtmError> {
    let spec = decode_tm(x);
    match lba_halt_decide(&spec, y, params.space) {
        Ok(ExactAnswer::Halts { steps }) => Ok(AtmVerdict::Marked { step: steps }),
        Ok(ExactAnswer::DivergesProven { cycle_start, cycle_len }) => {
            Ok(AtmVerdict::UnmarkedProven {
                cert: UnmarkedCert::NeverHalts { cycle_start, cycle_len },
            })
        }
        Err(_) => Ok(match semi_decide_halt(&spec, y, params.budget) {
            SemiAnswer::Halts { steps } => AtmVerdict::Marked { step: steps },
            SemiAnswer::Unknown { budget } => AtmVerdict::UnmarkedAtBudget { budget },
        }),
    }
}

fn run_table(spec: &TmSpec, input: &Nat, params: &AtmParams) -> Result<AtmVerdict, AtmError> {
    if let Some(verdict) = run_table_windowed(spec, input, params.space) {
        return verdict;
    }
    run_table_sparse(spec, input, params.budget)
}

/// Windowed run: definite whenever the machine stays inside the window and
/// under the visited cap. `None` means fall back to the budgeted run.
fn run_table_windowed(
    spec: &TmSpec,
    input: &Nat,
    space: SpaceBound,
) -> Option<Result<AtmVerdict, AtmError>> {
    let s = space.cells();
    if input + 2u32 > nat(s as u64) {
        return None;
    }
    let n = input.to_usize().expect("input fits the window");
    let mut tape = vec![BLANK; s];
    for cell in &mut tape[1..=n + 1] {
        *cell = ONE;
    }
    let mut win = Window::from_cells(tape, 1);
    let mut square = SquareMonitor::new();
    let mut seen: HashMap<(StateId, usize, Vec<SymId>), u64> = HashMap::new();
    for step in 0u64.. {
        if win.halted(spec) {
            return Some(Ok(match square.changed_at {
                Some(at) => AtmVerdict::Marked { step: at },
                None => {
                    AtmVerdict::UnmarkedProven { cert: UnmarkedCert::HaltedUnmarked { steps: step } }
                }
            }));
        }
        let key = win.snapshot_key();
        if let Some(&first) = seen.get(&key) {
            return Some(Ok(match square.changed_at {
                Some(at) => AtmVerdict::Marked { step: at },
                None => AtmVerdict::UnmarkedProven {
                    cert: UnmarkedCert::NeverMarks { cycle_start: first, cycle_len: step - first },
                },
            }));
        }
        if seen.len() as u64 >= VISITED_CAP {
            return None;
        }
        seen.insert(key, step);
        if win.step(spec, step).is_err() {
            return None;
        }
        // A violation seen here is real: the same prefix runs unwindowed too.
        if let Err(e) = square.observe(win.tape[0], step + 1) {
            return Some(Err(e));
        }
    }
    unreachable!("the window admits finitely many configurations")
}

fn run_table_sparse(spec: &TmSpec, input: &Nat, budget: u64) -> Result<AtmVerdict, AtmError> {
    let mut cfg = TmConfig::blank();
    let n = input.to_u64().expect("accelerated input must fit addressable cells");
    for cell in 1..=n + 1 {
        cfg.write(cell as i64, ONE);
    }
    cfg.head = 1;
    let mut square = SquareMonitor::new();
    for _ in 0..budget {
        if !step_mut(spec, &mut cfg) {
            break;
        }
        square.observe(cfg.read(0), cfg.steps)?;
    }
    match square.changed_at {
        Some(at) => Ok(AtmVerdict::Marked { step: at }),
        None if halted(spec, &cfg) => {
            Ok(AtmVerdict::UnmarkedProven { cert: UnmarkedCert::HaltedUnmarked { steps: cfg.steps } })
        }
        None => Ok(AtmVerdict::UnmarkedAtBudget { budget }),
    }
}

/// Tracks the one permitted change of the output square.
struct SquareMonitor {
    current: SymId,
    changed_at: Option<u64>,
}

impl SquareMonitor {
    fn new() -> SquareMonitor {
        SquareMonitor { current: BLANK, changed_at: None }
    }

    fn observe(&mut self, now: SymId, at_step: u64) -> Result<(), AtmError> {
        if now != self.current {
            if self.changed_at.is_some() {
                return Err(AtmError::WriteOnceViolation { step: at_step });
            }
            self.changed_at = Some(at_step);
            self.current = now;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ComposeVerdict {
    /// Every in-bound input has a step after which the square is final.
    Accept { certs: Vec<ComposeCert> },
    Reject { reason: ComposeReject },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ComposeCert {
    pub input: u64,
    /// The square can no longer change from this internal step on.
    pub final_from_step: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ComposeReject {
    /// The stage's square settles only in the limit; no internal step bounds it.
    LimitOnlyOutput,
    /// No proof either way within the given resources.
    Unresolved { input: u64, budget: u64 },
    WriteOnceViolation { input: u64, step: u64 },
}

/// Gate for feeding one accelerated stage into another. A second stage may
/// read the square only if, for every input it might be handed, some internal
/// step provably finalizes the square. Idealized solver stages never pass:
/// their unmarked answers exist only at the limit of the whole run.
pub fn compose_check(first: &AtmProgram, params: &AtmParams) -> ComposeVerdict {
    match first {
        AtmProgram::WatchHalting { .. } | AtmProgram::HaltingSolver => {
            ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput }
        }
        AtmProgram::Table(spec) => {
            let mut certs = Vec::new();
            for input in 0..=(params.space.cells() as u64).saturating_sub(2) {
                let verdict = match run_table(spec, &nat(input), params) {
                    Ok(v) => v,
                    Err(AtmError::WriteOnceViolation { step }) => {
                        return ComposeVerdict::Reject {
                            reason: ComposeReject::WriteOnceViolation { input, step },
                        };
                    }
                    Err(AtmError::Oracle(_)) => {
                        unreachable!("table runs consult no oracle")
                    }
                };
                let final_from_step = match verdict {
                    AtmVerdict::Marked { step } => step,
                    AtmVerdict::UnmarkedProven { cert: UnmarkedCert::HaltedUnmarked { steps } } => {
                        steps
                    }
                    // A square that provably never changes is final from the start.
                    AtmVerdict::UnmarkedProven { .. } => 0,
                    AtmVerdict::UnmarkedAtBudget { budget } => {
                        return ComposeVerdict::Reject {
                            reason: ComposeReject::Unresolved { input, budget },
                        };
                    }
                };
                certs.push(ComposeCert { input, final_from_step });
            }
            ComposeVerdict::Accept { certs }
        }
    }
}

/// The negation pipeline: solve halting on the diagonal, then flip the square.
/// Its first stage is the idealized solver, so the gate always refuses it; this
/// is the executable shape of the fact that the anti-diagonal stays out of
/// reach even for a device that solves its own halting problem.
pub fn negation_pipeline_check(params: &AtmParams) -> ComposeVerdict {
    compose_check(&AtmProgram::HaltingSolver, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halting::replay_cycle;
    use crate::pairing::pair;
    use crate::tm::encode_tm;
    use crate::tm::fixtures::{
        bb2_champion, eraser, halts_on_odd, runner, spinner, square_marker, square_toggler,
        successor,
    };

    fn params() -> AtmParams {
        AtmParams { budget: 1000, space: SpaceBound::new(16).unwrap() }
    }

    #[test]
    fn marker_table_marks_at_a_fixed_step() {
        // Hand trace: move left onto the square at step 1, mark it at step 2.
        for input in 0u64..6 {
            let v = atm_run(&AtmProgram::Table(square_marker()), &nat(input), &params()).unwrap();
            assert_eq!(v, AtmVerdict::Marked { step: 2 });
        }
    }

    #[test]
    fn toggler_table_trips_the_write_once_monitor() {
        let err = atm_run(&AtmProgram::Table(square_toggler()), &nat(0), &params()).unwrap_err();
        assert_eq!(err, AtmError::WriteOnceViolation { step: 3 });
    }

    #[test]
    fn halting_table_with_clean_square_is_proven_unmarked() {
        // The eraser only ever moves right, away from the square.
        let v = atm_run(&AtmProgram::Table(eraser()), &nat(2), &params()).unwrap();
        assert_eq!(
            v,
            AtmVerdict::UnmarkedProven { cert: UnmarkedCert::HaltedUnmarked { steps: 3 } }
        );
    }

    #[test]
    fn champion_crosses_onto_the_square_and_marks_it() {
        // Hand trace under the accelerated layout: it steps left onto cell 0
        // at step 1 and marks it at step 2, then wanders back right and halts.
        let v = atm_run(&AtmProgram::Table(bb2_champion()), &nat(0), &params()).unwrap();
        assert_eq!(v, AtmVerdict::Marked { step: 2 });
    }

    #[test]
    fn cycling_table_with_clean_square_is_proven_unmarked() {
        let v = atm_run(&AtmProgram::Table(spinner()), &nat(0), &params()).unwrap();
        let AtmVerdict::UnmarkedProven {
            cert: UnmarkedCert::NeverMarks { cycle_start, cycle_len },
        } = v
        else {
            panic!("{v:?}");
        };
        assert_eq!((cycle_start, cycle_len), (0, 1));
    }

    #[test]
    fn escaping_table_degrades_to_budget_honesty() {
        // The runner leaves every window and never marks the square.
        let v = atm_run(&AtmProgram::Table(runner()), &nat(0), &params()).unwrap();
        assert_eq!(v, AtmVerdict::UnmarkedAtBudget { budget: 1000 });
    }

    #[test]
    fn watcher_realizes_a_partial_characteristic_function() {
        let index = encode_tm(&halts_on_odd());
        let program = AtmProgram::WatchHalting { index };
        for y in 0u64..8 {
            let v = atm_run(&program, &nat(y), &params()).unwrap();
            if y % 2 == 1 {
                assert!(matches!(v, AtmVerdict::Marked { .. }), "y = {y}: {v:?}");
            } else {
                // Divergence here is by escape, so no proof exists in-window.
                assert_eq!(v, AtmVerdict::UnmarkedAtBudget { budget: 1000 }, "y = {y}");
            }
        }
    }

    #[test]
    fn watcher_proves_the_negative_side_for_windowed_machines() {
        let program = AtmProgram::WatchHalting { index: encode_tm(&spinner()) };
        let v = atm_run(&program, &nat(3), &params()).unwrap();
        let AtmVerdict::UnmarkedProven { cert: UnmarkedCert::NeverHalts { cycle_start, cycle_len } } =
            v
        else {
            panic!("{v:?}");
        };
        assert!(replay_cycle(&spinner(), &nat(3), params().space, cycle_start, cycle_len));
    }

    #[test]
    fn solver_agrees_with_the_exact_tier_on_paired_codes() {
        // Machine 0 halts on everything; the spinner (code 45) on nothing.
        let yes = pair(&nat(0), &nat(5));
        let v = atm_run(&AtmProgram::HaltingSolver, &yes, &params()).unwrap();
        assert_eq!(v, AtmVerdict::Marked { step: 0 });
        let no = pair(&nat(45), &nat(2));
        let v = atm_run(&AtmProgram::HaltingSolver, &no, &params()).unwrap();
        assert!(matches!(
            v,
            AtmVerdict::UnmarkedProven { cert: UnmarkedCert::NeverHalts { .. } }
        ));
    }

    #[test]
    fn compose_accepts_tables_with_settled_squares() {
        let verdict = compose_check(&AtmProgram::Table(square_marker()), &params());
        let ComposeVerdict::Accept { certs } = verdict else {
            panic!("{verdict:?}");
        };
        assert_eq!(certs.len(), 15);
        assert!(certs.iter().all(|c| c.final_from_step == 2));
        // Never-marking machines are certified too, from step 0.
        let verdict = compose_check(&AtmProgram::Table(spinner()), &params());
        let ComposeVerdict::Accept { certs } = verdict else {
            panic!("{verdict:?}");
        };
        assert!(certs.iter().all(|c| c.final_from_step == 0));
    }

    #[test]
    fn compose_rejects_the_solver_stages() {
        for program in
            [AtmProgram::HaltingSolver, AtmProgram::WatchHalting { index: nat(0) }]
        {
            assert_eq!(
                compose_check(&program, &params()),
                ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput }
            );
        }
        assert_eq!(
            negation_pipeline_check(&params()),
            ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput }
        );
    }

    #[test]
    fn compose_rejects_unresolved_and_violating_tables() {
        let verdict = compose_check(&AtmProgram::Table(runner()), &params());
        assert_eq!(
            verdict,
            ComposeVerdict::Reject { reason: ComposeReject::Unresolved { input: 0, budget: 1000 } }
        );
        let verdict = compose_check(&AtmProgram::Table(square_toggler()), &params());
        assert_eq!(
            verdict,
            ComposeVerdict::Reject {
                reason: ComposeReject::WriteOnceViolation { input: 0, step: 3 }
            }
        );
    }

    #[test]
    fn successor_machine_under_accelerated_layout_is_certified() {
        // No rules at all: halts at step 0 with the square clean on every input.
        let verdict = compose_check(&AtmProgram::Table(successor()), &params());
        let ComposeVerdict::Accept { certs } = verdict else {
            panic!("{verdict:?}");
        };
        assert!(certs.iter().all(|c| c.final_from_step == 0));
    }
}
