//! Deterministic single-tape Turing machines with sparse tapes.
//!
//! Conventions, used consistently by every layer above:
//! * symbol 0 is the blank, symbol 1 is the mark `1`;
//! * a machine halts when it sits in a declared halt state or when no rule covers
//!   the current (state, scanned symbol) pair — decoded machines use only the
//!   latter, which keeps every natural a valid program;
//! * numeric input `n` is written as `n + 1` marks with the head on the leftmost
//!   one; numeric output is the count of marks on the tape at halt.

mod code;
pub mod fixtures;
mod parse;

pub use code::{canonicalize, decode_tm, encode_tm};
pub use parse::{parse_tm, ErrorKind as TmParseErrorKind, TmParseError};

use std::collections::BTreeMap;
use std::fmt;

use crate::Nat;
use num_traits::ToPrimitive;

pub type StateId = usize;
pub type SymId = usize;

pub const BLANK: SymId = 0;
pub const ONE: SymId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub write: SymId,
    pub mv: Move,
    pub next: StateId,
}

/// A machine table. The start state is always state 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmSpec {
    state_names: Vec<String>,
    sym_names: Vec<String>,
    halt: Vec<bool>,
    rules: Vec<Option<Rule>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("a machine needs at least one state")]
    NoStates,
    #[error("the alphabet needs the blank and the mark")]
    AlphabetTooSmall,
    #[error("rule for ({state}, {symbol}) given twice")]
    DuplicateRule { state: String, symbol: String },
    #[error("rule target out of range: state {state}, symbol {symbol}")]
    TargetOutOfRange { state: usize, symbol: usize },
    #[error("halt state {state} may not carry outgoing rules")]
    RuleFromHaltState { state: String },
}

/// One table row for [`TmSpec::from_rules`]: `((state, read), (write, move, next))`.
pub type RuleRow = ((StateId, SymId), (SymId, Move, StateId));

impl TmSpec {
    /// Builds a machine over canonical names: states `q0..`, symbols `_ 1 2 ..`.
    pub fn from_rules(
        n_states: usize,
        n_symbols: usize,
        rules: &[RuleRow],
    ) -> Result<TmSpec, SpecError> {
        let state_names = (0..n_states).map(|i| format!("q{i}")).collect();
        let sym_names = canonical_symbol_names(n_symbols);
        let mut table: Vec<Option<Rule>> = vec![None; n_states * n_symbols];
        for &((state, sym), (write, mv, next)) in rules {
            if state >= n_states || sym >= n_symbols {
                return Err(SpecError::TargetOutOfRange { state, symbol: sym });
            }
            let slot = &mut table[state * n_symbols + sym];
            if slot.is_some() {
                return Err(SpecError::DuplicateRule {
                    state: format!("q{state}"),
                    symbol: sym.to_string(),
                });
            }
            *slot = Some(Rule { write, mv, next });
        }
        TmSpec::from_parts(state_names, sym_names, vec![false; n_states], table)
    }

    pub(crate) fn from_parts(
        state_names: Vec<String>,
        sym_names: Vec<String>,
        halt: Vec<bool>,
        rules: Vec<Option<Rule>>,
    ) -> Result<TmSpec, SpecError> {
        if state_names.is_empty() {
            return Err(SpecError::NoStates);
        }
        if sym_names.len() < 2 {
            return Err(SpecError::AlphabetTooSmall);
        }
        let (n, g) = (state_names.len(), sym_names.len());
        assert_eq!(halt.len(), n);
        assert_eq!(rules.len(), n * g);
        for (idx, rule) in rules.iter().enumerate() {
            if let Some(rule) = rule {
                if rule.next >= n || rule.write >= g {
                    return Err(SpecError::TargetOutOfRange { state: idx / g, symbol: idx % g });
                }
                if halt[idx / g] {
                    return Err(SpecError::RuleFromHaltState {
                        state: state_names[idx / g].clone(),
                    });
                }
            }
        }
        Ok(TmSpec { state_names, sym_names, halt, rules })
    }

    pub fn n_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn n_symbols(&self) -> usize {
        self.sym_names.len()
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.state_names[id]
    }

    pub fn symbol_name(&self, id: SymId) -> &str {
        &self.sym_names[id]
    }

    pub fn is_halt_state(&self, id: StateId) -> bool {
        self.halt[id]
    }

    pub fn rule(&self, state: StateId, sym: SymId) -> Option<&Rule> {
        self.rules[state * self.n_symbols() + sym].as_ref()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.iter().flatten().count()
    }
}

fn canonical_symbol_names(n_symbols: usize) -> Vec<String> {
    let mut names = vec!["_".to_string(), "1".to_string()];
    names.extend((2..n_symbols).map(|i| i.to_string()));
    names.truncate(n_symbols.max(2));
    names
}

impl fmt::Display for TmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.state_names[0])?;
        writeln!(f, "states: {}", self.state_names.join(" "))?;
        let halts: Vec<&str> =
            (0..self.n_states()).filter(|&s| self.halt[s]).map(|s| self.state_name(s)).collect();
        if !halts.is_empty() {
            writeln!(f, "halt: {}", halts.join(" "))?;
        }
        writeln!(f, "blank: {}", self.sym_names[0])?;
        for state in 0..self.n_states() {
            for sym in 0..self.n_symbols() {
                if let Some(rule) = self.rule(state, sym) {
                    writeln!(
                        f,
                        "{} {} -> {} {} {}",
                        self.state_name(state),
                        self.symbol_name(sym),
                        self.state_name(rule.next),
                        self.symbol_name(rule.write),
                        rule.mv,
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// A full machine configuration. Only non-blank cells are stored, which keeps
/// equality canonical: equal configurations compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmConfig {
    tape: BTreeMap<i64, SymId>,
    pub head: i64,
    pub state: StateId,
    pub steps: u64,
}

impl TmConfig {
    pub fn blank() -> TmConfig {
        TmConfig { tape: BTreeMap::new(), head: 0, state: 0, steps: 0 }
    }

    /// Input convention: `n + 1` marks on cells `0..=n`, head on cell 0.
    pub fn with_unary_input(input: &Nat) -> TmConfig {
        let mut cfg = TmConfig::blank();
        let n = input.to_u64().expect("unary input must fit the tape we can hold");
        for cell in 0..=n {
            cfg.tape.insert(cell as i64, ONE);
        }
        cfg
    }

    pub fn read(&self, cell: i64) -> SymId {
        self.tape.get(&cell).copied().unwrap_or(BLANK)
    }

    pub fn write(&mut self, cell: i64, sym: SymId) {
        if sym == BLANK {
            self.tape.remove(&cell);
        } else {
            self.tape.insert(cell, sym);
        }
    }

    /// Count of marks on the tape: the numeric output convention.
    pub fn ones(&self) -> u64 {
        self.tape.values().filter(|&&s| s == ONE).count() as u64
    }

    pub fn non_blank(&self) -> impl Iterator<Item = (i64, SymId)> + '_ {
        self.tape.iter().map(|(&c, &s)| (c, s))
    }

    /// Strips the step counter, leaving only what the machine can ever see again.
    pub fn snapshot(&self) -> (BTreeMap<i64, SymId>, i64, StateId) {
        (self.tape.clone(), self.head, self.state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped(TmConfig),
    Halted,
}

/// One transition. Halting (halt state or uncovered pair) is a signal, not a step.
pub fn step(spec: &TmSpec, cfg: &TmConfig) -> StepOutcome {
    let mut next = cfg.clone();
    if step_mut(spec, &mut next) {
        StepOutcome::Stepped(next)
    } else {
        StepOutcome::Halted
    }
}

/// In-place variant of [`step`]; returns false when the machine has halted.
pub fn step_mut(spec: &TmSpec, cfg: &mut TmConfig) -> bool {
    if spec.is_halt_state(cfg.state) {
        return false;
    }
    let Some(rule) = spec.rule(cfg.state, cfg.read(cfg.head)) else {
        return false;
    };
    let rule = *rule;
    cfg.write(cfg.head, rule.write);
    match rule.mv {
        Move::Left => cfg.head -= 1,
        Move::Right => cfg.head += 1,
        Move::Stay => {}
    }
    cfg.state = rule.next;
    cfg.steps += 1;
    true
}

/// Outcome of a budgeted run. `Diverges` is never produced by [`run_bounded`]
/// itself — budget exhaustion proves nothing — only by the analyses in
/// [`crate::halting`] that actually certify a cycle.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RunOutcome {
    Halted { output: u64, steps: u64 },
    Diverges { cycle_start: u64, cycle_len: u64 },
    Unknown { budget: u64 },
}

/// True when no further transition applies to `cfg`.
pub fn halted(spec: &TmSpec, cfg: &TmConfig) -> bool {
    spec.is_halt_state(cfg.state) || spec.rule(cfg.state, cfg.read(cfg.head)).is_none()
}

/// Runs from an explicit configuration for at most `budget` transitions.
pub fn run_config_bounded(spec: &TmSpec, mut cfg: TmConfig, budget: u64) -> (RunOutcome, TmConfig) {
    for _ in 0..budget {
        if !step_mut(spec, &mut cfg) {
            return (RunOutcome::Halted { output: cfg.ones(), steps: cfg.steps }, cfg);
        }
    }
    if halted(spec, &cfg) {
        return (RunOutcome::Halted { output: cfg.ones(), steps: cfg.steps }, cfg);
    }
    (RunOutcome::Unknown { budget }, cfg)
}

/// Runs on unary input `n` for at most `budget` transitions.
pub fn run_bounded(spec: &TmSpec, input: &Nat, budget: u64) -> RunOutcome {
    run_config_bounded(spec, TmConfig::with_unary_input(input), budget).0
}
