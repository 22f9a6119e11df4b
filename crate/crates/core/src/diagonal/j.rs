//! One schema behind every diagonal in the crate.
//!
//! An instance names an index set `I`, an output space `Y` with a default
//! element, a post-map `k` on `Y` with no fixed points, and a way to evaluate
//! a machine on its own index. Applying the instance to `x` then reads:
//! outside `I`, or where the self-application provably diverges, answer the
//! default; where it settles on `v`, answer `k(v)`. Because `k` moves every
//! point, the result differs from machine `x` at `x` whenever the machine
//! settles there, which is the entire escape argument in executable form.

use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::godel::universal_eval;
use crate::halting::{lba_halt_decide, ExactAnswer, SpaceBound};
use crate::pr::EvalLimits;
use crate::tm::{decode_tm, run_bounded, RunOutcome};
use crate::{nat, Nat};

/// Which arguments the construction guards on.
pub enum IndexSet {
    All,
    Finite(Vec<Nat>),
    Predicate { description: String, member: Box<dyn Fn(&Nat) -> bool + Send + Sync> },
}

impl IndexSet {
    pub fn contains(&self, x: &Nat) -> bool {
        match self {
            IndexSet::All => true,
            IndexSet::Finite(members) => members.contains(x),
            IndexSet::Predicate { member, .. } => member(x),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            IndexSet::All => "all naturals".to_owned(),
            IndexSet::Finite(members) => format!("finite set of {} indices", members.len()),
            IndexSet::Predicate { description, .. } => description.clone(),
        }
    }
}

/// The space the post-map acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputSpace {
    AllNaturals,
    Finite(Vec<Nat>),
}

impl OutputSpace {
    pub fn contains(&self, y: &Nat) -> bool {
        match self {
            OutputSpace::AllNaturals => true,
            OutputSpace::Finite(members) => members.contains(y),
        }
    }
}

/// `k` may refuse a point; a refusal can never collide with the input, so it
/// counts toward fixed-point freedom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KResult {
    Value(Nat),
    Diverges,
}

/// What evaluating machine `x` on its own index reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagEval {
    Value(Nat),
    DivergesProven,
    /// Budget ran out or the instrument refused the case; no verdict either way.
    Indeterminate { why: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultReason {
    OutsideIndexSet,
    DiagonalDiverges,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JOutcome {
    Default { why: DefaultReason },
    Mapped { from: Nat, to: Nat },
    /// The self-application settled but `k` refuses its value, so the
    /// instance itself diverges at this argument.
    KDiverges { from: Nat },
    Indeterminate { why: String },
}

/// How fixed-point freedom of the post-map was established at build time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationReport {
    Exhaustive { outputs_checked: u64 },
    /// An infinite output space can only be probed. The obligation names what
    /// the caller still owes a proof of.
    Sampled { seed: u64, samples: u64, obligation: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JBuildError {
    #[error("the default output lies outside the output space")]
    DefaultOutsideOutputs,
    #[error("post-map fixes the point {at}")]
    KFixedPoint { at: Nat },
    #[error("post-map sends {at} to {to}, outside the output space")]
    KEscapesOutputs { at: Nat, to: Nat },
}

type KFn = Box<dyn Fn(&Nat) -> KResult + Send + Sync>;
type EvalFn = Box<dyn Fn(&Nat) -> DiagEval + Send + Sync>;

pub struct JSpec {
    name: String,
    index_set: IndexSet,
    outputs: OutputSpace,
    default: Nat,
    k: KFn,
    eval: EvalFn,
    validation: ValidationReport,
}

impl std::fmt::Debug for JSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JSpec")
            .field("name", &self.name)
            .field("index_set", &self.index_set.describe())
            .field("outputs", &self.outputs)
            .field("default", &self.default)
            .field("validation", &self.validation)
            .finish_non_exhaustive()
    }
}

impl JSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    pub fn default_output(&self) -> &Nat {
        &self.default
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.validation
    }

    /// The instance at `x`. Total over definite evidence; anything the
    /// instruments cannot settle comes back `Indeterminate`, never guessed.
    pub fn apply(&self, x: &Nat) -> JOutcome {
        if !self.index_set.contains(x) {
            return JOutcome::Default { why: DefaultReason::OutsideIndexSet };
        }
        match (self.eval)(x) {
            DiagEval::DivergesProven => JOutcome::Default { why: DefaultReason::DiagonalDiverges },
            DiagEval::Value(v) => match (self.k)(&v) {
                KResult::Value(to) => JOutcome::Mapped { from: v, to },
                KResult::Diverges => JOutcome::KDiverges { from: v },
            },
            DiagEval::Indeterminate { why } => JOutcome::Indeterminate { why },
        }
    }
}

/// How many points a sampled validation probes.
const SAMPLE_COUNT: u64 = 512;

/// Checks one candidate output point against the post-map.
fn check_point(
    k: &dyn Fn(&Nat) -> KResult,
    outputs: &OutputSpace,
    y: &Nat,
) -> Result<(), JBuildError> {
    match k(y) {
        KResult::Diverges => Ok(()),
        KResult::Value(to) if to == *y => Err(JBuildError::KFixedPoint { at: y.clone() }),
        KResult::Value(to) if !outputs.contains(&to) => {
            Err(JBuildError::KEscapesOutputs { at: y.clone(), to })
        }
        KResult::Value(_) => Ok(()),
    }
}

/// Assembles an instance, refusing defaults outside the output space and
/// post-maps with a reachable fixed point. A finite space is swept in full; an
/// infinite one is sampled from a fixed seed and the residual proof obligation
/// is recorded on the instance rather than silently assumed.
pub fn build_j(
    name: &str,
    index_set: IndexSet,
    outputs: OutputSpace,
    default: Nat,
    k: KFn,
    eval: EvalFn,
    seed: u64,
) -> Result<JSpec, JBuildError> {
    if !outputs.contains(&default) {
        return Err(JBuildError::DefaultOutsideOutputs);
    }
    let validation = match &outputs {
        OutputSpace::Finite(members) => {
            for y in members {
                check_point(&k, &outputs, y)?;
            }
            ValidationReport::Exhaustive { outputs_checked: members.len() as u64 }
        }
        OutputSpace::AllNaturals => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut samples = 0;
            for small in 0u64..64 {
                check_point(&k, &outputs, &nat(small))?;
                samples += 1;
            }
            while samples < SAMPLE_COUNT {
                // Mix magnitudes: a random bit width first, then a value of
                // that width, so huge points get probed alongside small ones.
                let bits = rng.gen_range(1..=96u32);
                let mut y = Nat::default();
                for _ in 0..bits.div_ceil(32) {
                    y = (y << 32usize) | nat(u64::from(rng.gen::<u32>()));
                }
                y |= Nat::one() << (bits - 1) as usize;
                check_point(&k, &outputs, &y)?;
                samples += 1;
            }
            ValidationReport::Sampled {
                seed,
                samples,
                obligation: "fixed-point freedom was probed on samples only; use on the full \
                             space still owes a pointwise argument"
                    .to_owned(),
            }
        }
    };
    Ok(JSpec { name: name.to_owned(), index_set, outputs, default, k, eval, validation })
}

/// The successor diagonal over the recursion calculus, reassembled from the
/// schema: every index participates, the self-application is the universal
/// evaluator, and the post-map adds one.
pub fn instantiate_h_as_j(limits: EvalLimits) -> JSpec {
    build_j(
        "successor-diagonal",
        IndexSet::All,
        OutputSpace::AllNaturals,
        nat(0),
        Box::new(|v| KResult::Value(v + 1u32)),
        Box::new(move |x| match universal_eval(x, x, &limits) {
            Ok(v) => DiagEval::Value(v),
            // The calculus has no divergence; every refusal is a resource cap.
            Err(e) => DiagEval::Indeterminate { why: e.to_string() },
        }),
        0x6a5f68,
    )
    .expect("successor has no fixed point")
}

/// The anti-halting diagonal over machine tables, reassembled from the schema:
/// output space `{0}`, default 0, and a post-map that refuses everything. The
/// refusal is what makes the instance diverge exactly where the machine
/// settles on itself.
pub fn instantiate_g_as_j(space: SpaceBound) -> JSpec {
    build_j(
        "anti-halting-diagonal",
        IndexSet::All,
        OutputSpace::Finite(vec![nat(0)]),
        nat(0),
        Box::new(|_| KResult::Diverges),
        Box::new(move |x| {
            let spec = decode_tm(x);
            match lba_halt_decide(&spec, x, space) {
                Ok(ExactAnswer::Halts { steps }) => {
                    // The window proved the halt; replaying one step past it
                    // recovers the value the post-map is handed.
                    match run_bounded(&spec, x, steps + 1) {
                        RunOutcome::Halted { output, .. } => DiagEval::Value(nat(output)),
                        _ => DiagEval::Indeterminate {
                            why: "halt certificate failed to replay".to_owned(),
                        },
                    }
                }
                Ok(ExactAnswer::DivergesProven { .. }) => DiagEval::DivergesProven,
                Err(e) => DiagEval::Indeterminate { why: e.to_string() },
            }
        }),
        0x6a5f67,
    )
    .expect("an everywhere-refusing post-map has no fixed point")
}
