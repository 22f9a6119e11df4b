use std::fmt;

use crate::{nat, Nat};
use num_traits::{One, Zero};

/// A well-formed primitive-recursion term.
///
/// Well-formedness is established at construction and never rechecked:
/// * `Zero` and `Succ` are unary, so every term has positive arity;
/// * `Proj(i, n)` requires `1 <= i <= n`;
/// * `Comp(outer, inners)` requires a nonempty `inners` sharing one arity, with
///   the outer arity equal to the number of inners;
/// * `PrimRec(base, step)` requires `arity(step) = arity(base) + 2` and yields
///   arity `arity(base) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrTerm {
    kind: TermKind,
    arity: Nat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Zero,
    Succ,
    Proj { index: Nat, of: Nat },
    Comp { outer: Box<PrTerm>, inners: Vec<PrTerm> },
    PrimRec { base: Box<PrTerm>, step: Box<PrTerm> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WellFormedError {
    #[error("projection index must be at least 1 in {node}")]
    ProjIndexZero { node: String },
    #[error("projection index exceeds arity in {node}")]
    ProjIndexTooLarge { node: String },
    #[error("composition needs at least one inner term")]
    CompEmptyInners,
    #[error("composition outer arity {expected} does not match {found} inner terms")]
    CompOuterArityMismatch { expected: Nat, found: usize },
    #[error("composition inner #{position} has arity {found}, expected {expected}")]
    CompInnerArityMismatch { position: usize, expected: Nat, found: Nat },
    #[error("recursion step arity {step} is not base arity {base} + 2")]
    PrimRecArityMismatch { base: Nat, step: Nat },
}

impl PrTerm {
    pub fn zero() -> Self {
        PrTerm { kind: TermKind::Zero, arity: Nat::one() }
    }

    pub fn succ() -> Self {
        PrTerm { kind: TermKind::Succ, arity: Nat::one() }
    }

    pub fn proj(index: Nat, of: Nat) -> Result<Self, WellFormedError> {
        if index.is_zero() {
            return Err(WellFormedError::ProjIndexZero { node: format!("P[{index},{of}]") });
        }
        if index > of {
            return Err(WellFormedError::ProjIndexTooLarge { node: format!("P[{index},{of}]") });
        }
        Ok(PrTerm { arity: of.clone(), kind: TermKind::Proj { index, of } })
    }

    pub fn comp(outer: PrTerm, inners: Vec<PrTerm>) -> Result<Self, WellFormedError> {
        if inners.is_empty() {
            return Err(WellFormedError::CompEmptyInners);
        }
        if outer.arity != nat(inners.len() as u64) {
            return Err(WellFormedError::CompOuterArityMismatch {
                expected: outer.arity.clone(),
                found: inners.len(),
            });
        }
        let common = inners[0].arity.clone();
        for (i, inner) in inners.iter().enumerate().skip(1) {
            if inner.arity != common {
                return Err(WellFormedError::CompInnerArityMismatch {
                    position: i + 1,
                    expected: common,
                    found: inner.arity.clone(),
                });
            }
        }
        Ok(PrTerm { kind: TermKind::Comp { outer: Box::new(outer), inners }, arity: common })
    }

    pub fn prim_rec(base: PrTerm, step: PrTerm) -> Result<Self, WellFormedError> {
        if step.arity != &base.arity + 2u32 {
            return Err(WellFormedError::PrimRecArityMismatch {
                base: base.arity.clone(),
                step: step.arity.clone(),
            });
        }
        let arity = &base.arity + Nat::one();
        Ok(PrTerm { kind: TermKind::PrimRec { base: Box::new(base), step: Box::new(step) }, arity })
    }

    pub fn kind(&self) -> &TermKind {
        &self.kind
    }

    pub fn arity(&self) -> &Nat {
        &self.arity
    }

    /// Number of constructor nodes, mostly a test aid.
    pub fn node_count(&self) -> u64 {
        let mut count = 0;
        let mut work = vec![self];
        while let Some(term) = work.pop() {
            count += 1;
            match &term.kind {
                TermKind::Zero | TermKind::Succ | TermKind::Proj { .. } => {}
                TermKind::Comp { outer, inners } => {
                    work.push(outer);
                    work.extend(inners.iter());
                }
                TermKind::PrimRec { base, step } => work.extend([&**base, &**step]),
            }
        }
        count
    }
}

/// The derived drop would recurse to the term's depth; terms built
/// programmatically can be deep enough to overrun the host stack, so children
/// are unlinked onto a worklist instead.
impl Drop for PrTerm {
    fn drop(&mut self) {
        match self.kind {
            TermKind::Comp { .. } | TermKind::PrimRec { .. } => {}
            _ => return,
        }
        let mut work = vec![std::mem::replace(&mut self.kind, TermKind::Zero)];
        let unlink = |mut term: PrTerm, work: &mut Vec<TermKind>| {
            work.push(std::mem::replace(&mut term.kind, TermKind::Zero));
        };
        while let Some(kind) = work.pop() {
            match kind {
                TermKind::Zero | TermKind::Succ | TermKind::Proj { .. } => {}
                TermKind::Comp { outer, inners } => {
                    unlink(*outer, &mut work);
                    for inner in inners {
                        unlink(inner, &mut work);
                    }
                }
                TermKind::PrimRec { base, step } => {
                    unlink(*base, &mut work);
                    unlink(*step, &mut work);
                }
            }
        }
    }
}

/// Canonical concrete syntax: `Z`, `S`, `P[i,n]`, `C[outer; inner; ...]`,
/// `R[base; step]`. The printer emits a single space after each `;` and no other
/// whitespace; the parser accepts arbitrary whitespace.
impl fmt::Display for PrTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TermKind::Zero => write!(f, "Z"),
            TermKind::Succ => write!(f, "S"),
            TermKind::Proj { index, of } => write!(f, "P[{index},{of}]"),
            TermKind::Comp { outer, inners } => {
                write!(f, "C[{outer}")?;
                for inner in inners {
                    write!(f, "; {inner}")?;
                }
                write!(f, "]")
            }
            TermKind::PrimRec { base, step } => write!(f, "R[{base}; {step}]"),
        }
    }
}
