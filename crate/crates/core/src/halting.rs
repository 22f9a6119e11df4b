//! Halting analysis in two tiers.
//!
//! The semi tier runs a machine under a step budget and reports either a halt,
//! whose step count doubles as a replayable certificate, or that the budget ran
//! out, which proves nothing. The exact tier confines the head to a fixed tape
//! window; there the configuration space is finite, so a visited-set either
//! reaches a halt or certifies a cycle, and every answer is definite. The price
//! is partiality of a different kind: machines that leave the window are
//! rejected as outside the decidable class, never silently misjudged, and that
//! rejection is kept distinct from both halting and proven divergence.

use std::collections::HashMap;

use crate::tm::{
    decode_tm, halted, run_bounded, step_mut, RunOutcome, StateId, SymId, TmConfig, TmSpec, BLANK,
    ONE,
};
use crate::{nat, Nat};
use num_traits::ToPrimitive;

pub const DEFAULT_SPACE: usize = 16;
pub const DEFAULT_BUDGET: u64 = 100_000;

/// Visited-configuration cap for the exact tier. At the default window this is
/// far beyond what small machines can reach; hitting it is a resource report,
/// not a judgment about the machine.
pub const VISITED_CAP: u64 = 1 << 20;

/// Width of the exact tier's tape window, always at least one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SpaceBound(usize);

impl SpaceBound {
    pub fn new(cells: usize) -> Option<SpaceBound> {
        (cells >= 1).then_some(SpaceBound(cells))
    }

    pub fn cells(&self) -> usize {
        self.0
    }
}

impl Default for SpaceBound {
    fn default() -> Self {
        SpaceBound(DEFAULT_SPACE)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum SemiAnswer {
    Halts { steps: u64 },
    Unknown { budget: u64 },
}

/// The exact tier never shrugs: both variants carry enough to replay the proof.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum ExactAnswer {
    Halts { steps: u64 },
    DivergesProven { cycle_start: u64, cycle_len: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("unary input needs {need} cells but the window has {space}")]
    InputTooWide { need: Nat, space: usize },
    #[error("head left the {space}-cell window on transition {at_step}")]
    OutOfSpace { space: usize, at_step: u64 },
    #[error("distinct configurations exceeded the tracking cap of {cap}")]
    VisitedCapExceeded { cap: u64 },
}

/// Budgeted halting probe: sound for `Halts`, silent otherwise.
pub fn semi_decide_halt(spec: &TmSpec, input: &Nat, budget: u64) -> SemiAnswer {
    match run_bounded(spec, input, budget) {
        RunOutcome::Halted { steps, .. } => SemiAnswer::Halts { steps },
        _ => SemiAnswer::Unknown { budget },
    }
}

/// Decides halting for runs confined to the window `[0, space)`.
pub fn lba_halt_decide(
    spec: &TmSpec,
    input: &Nat,
    space: SpaceBound,
) -> Result<ExactAnswer, SpaceError> {
    lba_halt_decide_capped(spec, input, space, VISITED_CAP)
}

pub(crate) fn lba_halt_decide_capped(
    spec: &TmSpec,
    input: &Nat,
    space: SpaceBound,
    cap: u64,
) -> Result<ExactAnswer, SpaceError> {
    let mut win = Window::start(input, space)?;
    let mut seen: HashMap<(StateId, usize, Vec<SymId>), u64> = HashMap::new();
    for step in 0u64.. {
        if win.halted(spec) {
            return Ok(ExactAnswer::Halts { steps: step });
        }
        let key = win.snapshot_key();
        if let Some(&first) = seen.get(&key) {
            return Ok(ExactAnswer::DivergesProven { cycle_start: first, cycle_len: step - first });
        }
        if seen.len() as u64 >= cap {
            return Err(SpaceError::VisitedCapExceeded { cap });
        }
        seen.insert(key, step);
        win.step(spec, step)?;
    }
    unreachable!("the window admits finitely many configurations")
}

/// Checks a halting certificate: exactly `steps` transitions, then no rule fires.
pub fn replay_halts(spec: &TmSpec, input: &Nat, steps: u64) -> bool {
    let mut cfg = TmConfig::with_unary_input(input);
    for _ in 0..steps {
        if !step_mut(spec, &mut cfg) {
            return false;
        }
    }
    halted(spec, &cfg)
}

/// Checks a divergence certificate: the windowed run revisits, `cycle_len`
/// transitions after `cycle_start`, the exact configuration it had there.
pub fn replay_cycle(
    spec: &TmSpec,
    input: &Nat,
    space: SpaceBound,
    cycle_start: u64,
    cycle_len: u64,
) -> bool {
    if cycle_len == 0 {
        return false;
    }
    let Ok(mut win) = Window::start(input, space) else {
        return false;
    };
    for step in 0..cycle_start {
        if win.halted(spec) || win.step(spec, step).is_err() {
            return false;
        }
    }
    let entry = win.snapshot_key();
    for step in cycle_start..cycle_start + cycle_len {
        if win.halted(spec) || win.step(spec, step).is_err() {
            return false;
        }
    }
    win.snapshot_key() == entry
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Semi { budget: u64 },
    Exact { space: SpaceBound },
}

/// Two-argument halting function at index `x`, input `y`: 1 when machine `x`
/// halts on `y`, 0 when it provably never does.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "value", rename_all = "snake_case")]
pub enum FValue {
    One { steps: u64 },
    Zero { cycle_start: u64, cycle_len: u64 },
    Unknown { budget: u64 },
}

pub fn halting_f(x: &Nat, y: &Nat, tier: Tier) -> Result<FValue, SpaceError> {
    let spec = decode_tm(x);
    match tier {
        Tier::Semi { budget } => Ok(match semi_decide_halt(&spec, y, budget) {
            SemiAnswer::Halts { steps } => FValue::One { steps },
            SemiAnswer::Unknown { budget } => FValue::Unknown { budget },
        }),
        Tier::Exact { space } => Ok(match lba_halt_decide(&spec, y, space)? {
            ExactAnswer::Halts { steps } => FValue::One { steps },
            ExactAnswer::DivergesProven { cycle_start, cycle_len } => {
                FValue::Zero { cycle_start, cycle_len }
            }
        }),
    }
}

/// Anti-diagonal over the exact tier: defined, with value 0, exactly where
/// machine `x` provably never halts on its own index; marked divergent where it
/// halts. `output` is always 0 and is kept so reports stay self-describing.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GOutcome {
    Value { output: u64, cycle_start: u64, cycle_len: u64 },
    DivergesMarker { halt_steps: u64 },
}

pub fn diagonal_g(x: &Nat, space: SpaceBound) -> Result<GOutcome, SpaceError> {
    match lba_halt_decide(&decode_tm(x), x, space)? {
        ExactAnswer::DivergesProven { cycle_start, cycle_len } => {
            Ok(GOutcome::Value { output: 0, cycle_start, cycle_len })
        }
        ExactAnswer::Halts { steps } => Ok(GOutcome::DivergesMarker { halt_steps: steps }),
    }
}

/// Dense tape window with the head confined to it. Shared with the layers that
/// run machines under other input layouts but the same space discipline.
pub(crate) struct Window {
    pub(crate) tape: Vec<SymId>,
    pub(crate) head: usize,
    pub(crate) state: StateId,
    space: usize,
}

impl Window {
    pub(crate) fn start(input: &Nat, space: SpaceBound) -> Result<Window, SpaceError> {
        let s = space.cells();
        let need = input + 1u32;
        if need > nat(s as u64) {
            return Err(SpaceError::InputTooWide { need, space: s });
        }
        let mut tape = vec![BLANK; s];
        for cell in tape.iter_mut().take(input.to_usize().expect("input fits the window") + 1) {
            *cell = ONE;
        }
        Ok(Window { tape, head: 0, state: 0, space: s })
    }

    pub(crate) fn from_cells(tape: Vec<SymId>, head: usize) -> Window {
        assert!(head < tape.len());
        let space = tape.len();
        Window { tape, head, state: 0, space }
    }

    pub(crate) fn snapshot_key(&self) -> (StateId, usize, Vec<SymId>) {
        (self.state, self.head, self.tape.clone())
    }

    pub(crate) fn halted(&self, spec: &TmSpec) -> bool {
        spec.is_halt_state(self.state) || spec.rule(self.state, self.tape[self.head]).is_none()
    }

    pub(crate) fn step(&mut self, spec: &TmSpec, at_step: u64) -> Result<(), SpaceError> {
        let rule = *spec
            .rule(self.state, self.tape[self.head])
            .expect("caller checks halted() first");
        self.tape[self.head] = rule.write;
        let space = self.space;
        let out = move || SpaceError::OutOfSpace { space, at_step };
        match rule.mv {
            crate::tm::Move::Left => self.head = self.head.checked_sub(1).ok_or_else(out)?,
            crate::tm::Move::Right => {
                self.head += 1;
                if self.head >= self.space {
                    return Err(out());
                }
            }
            crate::tm::Move::Stay => {}
        }
        self.state = rule.next;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::encode_tm;
    use crate::tm::fixtures::{bb2_champion, eraser, halts_on_odd, runner, spinner, successor};

    fn space(cells: usize) -> SpaceBound {
        SpaceBound::new(cells).unwrap()
    }

    #[test]
    fn space_bound_rejects_zero() {
        assert!(SpaceBound::new(0).is_none());
        assert_eq!(SpaceBound::default().cells(), DEFAULT_SPACE);
    }

    #[test]
    fn semi_tier_on_fixtures() {
        // Hand-traced: the champion on input 0 halts after 4 transitions.
        assert_eq!(semi_decide_halt(&bb2_champion(), &nat(0), 10), SemiAnswer::Halts { steps: 4 });
        assert_eq!(semi_decide_halt(&spinner(), &nat(0), 10), SemiAnswer::Unknown { budget: 10 });
    }

    #[test]
    fn exact_tier_proves_divergence_of_the_spinner() {
        let answer = lba_halt_decide(&spinner(), &nat(0), space(8)).unwrap();
        assert_eq!(answer, ExactAnswer::DivergesProven { cycle_start: 0, cycle_len: 1 });
        assert!(replay_cycle(&spinner(), &nat(0), space(8), 0, 1));
    }

    #[test]
    fn exact_tier_halts_match_the_semi_tier() {
        let answer = lba_halt_decide(&eraser(), &nat(2), space(8)).unwrap();
        assert_eq!(answer, ExactAnswer::Halts { steps: 3 });
        assert!(replay_halts(&eraser(), &nat(2), 3));
        // A wrong step count must not replay.
        assert!(!replay_halts(&eraser(), &nat(2), 2));
        assert!(!replay_halts(&eraser(), &nat(2), 4));
    }

    #[test]
    fn runner_walks_out_of_the_window() {
        let err = lba_halt_decide(&runner(), &nat(0), space(8)).unwrap_err();
        // Head reaches cell k after k transitions; transition 7 would leave.
        assert_eq!(err, SpaceError::OutOfSpace { space: 8, at_step: 7 });
    }

    #[test]
    fn too_wide_input_is_rejected_up_front() {
        let err = lba_halt_decide(&successor(), &nat(20), space(8)).unwrap_err();
        assert_eq!(err, SpaceError::InputTooWide { need: nat(21), space: 8 });
    }

    #[test]
    fn parity_machine_distinguishes_halt_from_exit() {
        // Odd inputs halt inside the window, even ones run off the right edge:
        // the exact tier reports the first as answers and the second as errors.
        assert!(matches!(
            lba_halt_decide(&halts_on_odd(), &nat(3), space(8)),
            Ok(ExactAnswer::Halts { .. })
        ));
        assert!(matches!(
            lba_halt_decide(&halts_on_odd(), &nat(2), space(8)),
            Err(SpaceError::OutOfSpace { .. })
        ));
    }

    #[test]
    fn replay_rejects_nonsense_certificates() {
        // Zero-length cycles prove nothing.
        assert!(!replay_cycle(&spinner(), &nat(0), space(8), 0, 0));
        // A halting machine has no cycle to replay.
        assert!(!replay_cycle(&eraser(), &nat(1), space(8), 0, 2));
        // A certificate must survive its own space premise.
        assert!(!replay_cycle(&spinner(), &nat(20), space(8), 0, 1));
    }

    #[test]
    fn visited_cap_is_a_distinct_error() {
        // The runner erases its way right: each transition yields a fresh
        // configuration, so a tiny cap trips before the window edge does.
        let err = lba_halt_decide_capped(&runner(), &nat(0), space(8), 2).unwrap_err();
        assert_eq!(err, SpaceError::VisitedCapExceeded { cap: 2 });
    }

    #[test]
    fn halting_f_pinned_on_the_empty_machine() {
        // Machine 0 has no rules: it halts at once on every input.
        let f = halting_f(&nat(0), &nat(7), Tier::Exact { space: space(16) }).unwrap();
        assert_eq!(f, FValue::One { steps: 0 });
        let f = halting_f(&nat(0), &nat(7), Tier::Semi { budget: 5 }).unwrap();
        assert_eq!(f, FValue::One { steps: 0 });
    }

    #[test]
    fn spinner_code_derived_by_hand() {
        // Stratum (1,2), radix 7. Cell (0,_) = stay, write blank, next 0:
        // digit 1 + (0*3 + 2)*1 + 0 = 3. Cell (0,1) = stay, write mark:
        // digit 1 + (1*3 + 2)*1 + 0 = 6. Code 3 + 7*6 = 45.
        assert_eq!(encode_tm(&spinner()), nat(45));
    }

    #[test]
    fn diagonal_g_takes_value_zero_exactly_on_proven_divergence() {
        // The empty machine halts on its own index: marked divergent.
        assert_eq!(
            diagonal_g(&nat(0), space(16)).unwrap(),
            GOutcome::DivergesMarker { halt_steps: 0 }
        );
        // The spinner diverges on its own index 45, given room to hold it.
        let g = diagonal_g(&nat(45), space(64)).unwrap();
        assert_eq!(g, GOutcome::Value { output: 0, cycle_start: 0, cycle_len: 1 });
    }

    #[test]
    fn tiers_agree_and_certificates_replay_across_small_codes() {
        let sp = space(8);
        for code in 0u64..400 {
            let spec = decode_tm(&nat(code));
            for input in 0u64..3 {
                let Ok(exact) = lba_halt_decide(&spec, &nat(input), sp) else {
                    continue;
                };
                match exact {
                    ExactAnswer::Halts { steps } => {
                        assert_eq!(
                            semi_decide_halt(&spec, &nat(input), 1000),
                            SemiAnswer::Halts { steps },
                            "machine {code} on {input}"
                        );
                        assert!(replay_halts(&spec, &nat(input), steps));
                    }
                    ExactAnswer::DivergesProven { cycle_start, cycle_len } => {
                        assert_eq!(
                            semi_decide_halt(&spec, &nat(input), 1000),
                            SemiAnswer::Unknown { budget: 1000 },
                            "machine {code} on {input}"
                        );
                        assert!(replay_cycle(&spec, &nat(input), sp, cycle_start, cycle_len));
                    }
                }
            }
        }
    }
}
