//! Workbench for executable diagonalization across a tower of machine models.
//!
//! The crate stacks several layers:
//!
//! * [`pr`] — a primitive-recursion term calculus with a resource-capped evaluator,
//! * [`godel`] — a bijective numbering of that calculus plus the `h(x) = eval(x, x) + 1`
//!   diagonal that escapes it,
//! * [`tm`] — a small Turing-machine model with sparse tapes and a total numbering,
//! * [`halting`] — two halting tiers: a budgeted simulator sound for halts and an
//!   exact decider for the windowed machine class, plus the `g` diagonal built on
//!   top of them,
//! * [`atm`] — accelerating-machine semantics (write-once output square, verdicts at
//!   an external time scale) and the composition check they fail,
//! * [`omachine`] — query-state machines consulting the exact tier as an oracle,
//! * [`ittm`] — transfinite stepping to `omega * a + b` with limsup/liminf limit rules,
//! * [`diagonal`] — the generalized diagonal `j`, a registry of machine models with a
//!   seven-property capability audit, and contradiction witnesses for flawed models,
//! * [`sweep`] — index-range sweeps over all of the above, parallel when the
//!   `parallel` feature (default) is enabled.

pub mod atm;
pub mod diagonal;
pub mod godel;
pub mod halting;
pub mod ittm;
pub mod omachine;
pub mod pairing;
pub mod pr;
pub mod sweep;
pub mod tm;

/// Arbitrary-precision natural number used for all machine indices and values.
pub type Nat = num_bigint::BigUint;

/// Shorthand used throughout the crate for small literal naturals.
pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}
