use std::rc::Rc;

use crate::pr::term::{PrTerm, TermKind};
use crate::Nat;
use num_traits::{One, ToPrimitive, Zero};

/// Resource caps for evaluation. Exceeding one is an engineering limit and is
/// reported as such; terms themselves are total, so this is never divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalLimits {
    /// Constructor-node visits allowed before giving up.
    pub max_steps: u64,
    /// Bit width any intermediate value may reach.
    pub max_value_bits: u64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits { max_steps: 10_000_000, max_value_bits: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("argument count {found} does not match term arity {expected}")]
    ArityMismatch { expected: Nat, found: usize },
    #[error("evaluation exceeded the step cap of {limit}")]
    StepLimit { limit: u64 },
    #[error("intermediate value exceeded the {limit}-bit cap")]
    ValueWidth { limit: u64 },
    #[error("coerced argument tuple of width {needed} exceeds the cap of {limit}")]
    TupleWidth { needed: Nat, limit: usize },
}

enum Frame<'t> {
    Enter { term: &'t PrTerm, args: Rc<Vec<Nat>> },
    CompCollect { outer: &'t PrTerm, inners: &'t [PrTerm], args: Rc<Vec<Nat>>, vals: Vec<Nat> },
    RecLoop { step: &'t PrTerm, rest: Rc<Vec<Nat>>, total: u64, next: u64 },
}

/// Evaluates `term` on `args` (one value per argument position).
///
/// Runs on an explicit work stack, so term depth never consumes host stack.
/// Recursion on the first argument is unrolled iteratively: the counter value
/// must fit a machine word, which the step cap enforces anyway.
pub fn eval(term: &PrTerm, args: &[Nat], limits: &EvalLimits) -> Result<Nat, EvalError> {
    if term.arity() != &Nat::from(args.len()) {
        return Err(EvalError::ArityMismatch { expected: term.arity().clone(), found: args.len() });
    }

    let mut stack: Vec<Frame> = vec![Frame::Enter { term, args: Rc::new(args.to_vec()) }];
    let mut value: Nat = Nat::zero();
    let mut steps: u64 = 0;

    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter { term, args } => {
                steps += 1;
                if steps > limits.max_steps {
                    return Err(EvalError::StepLimit { limit: limits.max_steps });
                }
                match term.kind() {
                    TermKind::Zero => value = Nat::zero(),
                    TermKind::Succ => {
                        value = &args[0] + Nat::one();
                        if value.bits() > limits.max_value_bits {
                            return Err(EvalError::ValueWidth { limit: limits.max_value_bits });
                        }
                    }
                    TermKind::Proj { index, .. } => {
                        // 1-based, and at most the arity = args.len(), so it fits usize.
                        let i = index.to_usize().expect("projection index bounded by arity");
                        value = args[i - 1].clone();
                    }
                    TermKind::Comp { outer, inners } => {
                        stack.push(Frame::CompCollect {
                            outer,
                            inners,
                            args: args.clone(),
                            vals: Vec::with_capacity(inners.len()),
                        });
                        stack.push(Frame::Enter { term: &inners[0], args });
                    }
                    TermKind::PrimRec { base, step } => {
                        // A counter beyond u64 needs more loop iterations than any step
                        // budget we can hold, so it is the step cap that has been hit.
                        let total = args[0]
                            .to_u64()
                            .ok_or(EvalError::StepLimit { limit: limits.max_steps })?;
                        let rest = Rc::new(args[1..].to_vec());
                        stack.push(Frame::RecLoop { step, rest: rest.clone(), total, next: 0 });
                        stack.push(Frame::Enter { term: base, args: rest });
                    }
                }
            }
            Frame::CompCollect { outer, inners, args, mut vals } => {
                vals.push(value.clone());
                if vals.len() < inners.len() {
                    let idx = vals.len();
                    stack.push(Frame::CompCollect { outer, inners, args: args.clone(), vals });
                    stack.push(Frame::Enter { term: &inners[idx], args });
                } else {
                    stack.push(Frame::Enter { term: outer, args: Rc::new(vals) });
                }
            }
            Frame::RecLoop { step, rest, total, next } => {
                // `value` holds f(next, rest); stop once next reaches the counter.
                if next < total {
                    let mut step_args = Vec::with_capacity(rest.len() + 2);
                    step_args.push(Nat::from(next));
                    step_args.push(value.clone());
                    step_args.extend(rest.iter().cloned());
                    stack.push(Frame::RecLoop { step, rest, total, next: next + 1 });
                    stack.push(Frame::Enter { term: step, args: Rc::new(step_args) });
                }
            }
        }
    }

    Ok(value)
}
