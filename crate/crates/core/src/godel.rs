//! Bijective numbering of the primitive-recursion calculus, the universal
//! evaluator over it, and the successor diagonal `h`.
//!
//! The numbering is total in both directions: every natural decodes to exactly one
//! well-formed term and every term has exactly one code. Atoms are pinned
//! (`code(Z) = 0`, `code(S) = 1`); everything else is `2 + 3*payload + tag` with a
//! Cantor-pair payload. Because composition and recursion constrain the arities of
//! their parts, payloads for subterms in a known argument position use a second
//! family of per-arity codes; both families are bijections, which makes the global
//! map one too.

use crate::pairing::{pack, pair, unpack, unpair};
use crate::pr::{eval, EvalError, EvalLimits, PrTerm, TermKind};
use crate::{nat, Nat};
use num_traits::{One, ToPrimitive, Zero};

/// Widest argument tuple the unary coercion will materialize.
pub const COERCE_WIDTH_MAX: usize = 1 << 16;

const TAG_PROJ: u32 = 0;
const TAG_COMP: u32 = 1;
const TAG_REC: u32 = 2;

/// Code of a term in the global numbering.
pub fn encode_term(term: &PrTerm) -> Nat {
    match term.kind() {
        TermKind::Zero => nat(0),
        TermKind::Succ => nat(1),
        TermKind::Proj { index, of } => {
            let payload = pair(&(index - 1u32), &(of - index));
            tagged(TAG_PROJ, &payload)
        }
        TermKind::Comp { outer, inners } => {
            let k = inners[0].arity();
            let parts: Vec<Nat> = inners.iter().map(|t| encode_in_arity(k, t)).collect();
            let payload = pair(&encode_term(outer), &pair(&(k - 1u32), &pack(&parts)));
            tagged(TAG_COMP, &payload)
        }
        TermKind::PrimRec { base, step } => {
            let step_arity = base.arity() + 2u32;
            let payload = pair(&encode_term(base), &encode_in_arity(&step_arity, step));
            tagged(TAG_REC, &payload)
        }
    }
}

/// Term of a code in the global numbering; total on all naturals.
pub fn decode_index(code: &Nat) -> PrTerm {
    if code.is_zero() {
        return PrTerm::zero();
    }
    if code.is_one() {
        return PrTerm::succ();
    }
    let shifted = code - 2u32;
    let tag = (&shifted % 3u32).to_u32().expect("mod 3 fits u32");
    let payload = shifted / 3u32;
    match tag {
        TAG_PROJ => {
            let (a, b) = unpair(&payload);
            let index = &a + Nat::one();
            let of = &index + &b;
            PrTerm::proj(index, of).expect("index <= arity by construction")
        }
        TAG_COMP => {
            let (outer_code, rest) = unpair(&payload);
            let outer = decode_index(&outer_code);
            let (k_minus_one, packed) = unpair(&rest);
            let k = &k_minus_one + Nat::one();
            let count = outer.arity().to_usize().expect("inner count fits memory");
            let inners =
                unpack(&packed, count).iter().map(|c| decode_in_arity(&k, c)).collect();
            PrTerm::comp(outer, inners).expect("arity-matched by construction")
        }
        TAG_REC => {
            let (base_code, step_code) = unpair(&payload);
            let base = decode_index(&base_code);
            let step_arity = base.arity() + 2u32;
            let step = decode_in_arity(&step_arity, &step_code);
            PrTerm::prim_rec(base, step).expect("arity-matched by construction")
        }
        _ => unreachable!(),
    }
}

fn tagged(tag: u32, payload: &Nat) -> Nat {
    payload * 3u32 + tag + 2u32
}

/// Code of `term` within the enumeration of terms of its own arity.
fn encode_in_arity(arity: &Nat, term: &PrTerm) -> Nat {
    debug_assert_eq!(term.arity(), arity);
    if arity.is_one() {
        return match term.kind() {
            TermKind::Zero => nat(0),
            TermKind::Succ => nat(1),
            TermKind::Proj { .. } => nat(2),
            TermKind::Comp { outer, inners } => {
                let parts: Vec<Nat> =
                    inners.iter().map(|t| encode_in_arity(&nat(1), t)).collect();
                pair(&encode_term(outer), &pack(&parts)) + 3u32
            }
            TermKind::PrimRec { .. } => unreachable!("recursion terms have arity >= 2"),
        };
    }
    match term.kind() {
        TermKind::Proj { index, .. } => index - 1u32,
        TermKind::Comp { outer, inners } => {
            let parts: Vec<Nat> = inners.iter().map(|t| encode_in_arity(arity, t)).collect();
            let payload = pair(&encode_term(outer), &pack(&parts));
            payload * 2u32 + arity
        }
        TermKind::PrimRec { base, step } => {
            let step_arity = base.arity() + 2u32;
            let payload = pair(&encode_in_arity(&(arity - 1u32), base), &encode_in_arity(&step_arity, step));
            payload * 2u32 + Nat::one() + arity
        }
        TermKind::Zero | TermKind::Succ => unreachable!("atoms have arity 1"),
    }
}

/// Term of a code within the enumeration of terms of arity `arity`.
fn decode_in_arity(arity: &Nat, code: &Nat) -> PrTerm {
    if arity.is_one() {
        if code.is_zero() {
            return PrTerm::zero();
        }
        if code.is_one() {
            return PrTerm::succ();
        }
        if code == &nat(2) {
            return PrTerm::proj(nat(1), nat(1)).expect("P[1,1] well-formed");
        }
        let payload = code - 3u32;
        let (outer_code, packed) = unpair(&payload);
        let outer = decode_index(&outer_code);
        let count = outer.arity().to_usize().expect("inner count fits memory");
        let inners = unpack(&packed, count).iter().map(|c| decode_in_arity(&nat(1), c)).collect();
        return PrTerm::comp(outer, inners).expect("arity-matched by construction");
    }
    if code < arity {
        return PrTerm::proj(code + 1u32, arity.clone()).expect("index <= arity");
    }
    let rest = code - arity;
    let payload = &rest / 2u32;
    if (&rest % 2u32).is_zero() {
        let (outer_code, packed) = unpair(&payload);
        let outer = decode_index(&outer_code);
        let count = outer.arity().to_usize().expect("inner count fits memory");
        let inners = unpack(&packed, count).iter().map(|c| decode_in_arity(arity, c)).collect();
        PrTerm::comp(outer, inners).expect("arity-matched by construction")
    } else {
        let (base_code, step_code) = unpair(&payload);
        let base = decode_in_arity(&(arity - 1u32), &base_code);
        let step_arity = arity + Nat::one();
        let step = decode_in_arity(&step_arity, &step_code);
        PrTerm::prim_rec(base, step).expect("arity-matched by construction")
    }
}

/// Applies the machine with index `x` to `arg` through the unary coercion: an
/// arity-`n` term is applied to `(arg, 0, ..., 0)`.
pub fn universal_eval(x: &Nat, arg: &Nat, limits: &EvalLimits) -> Result<Nat, EvalError> {
    let term = decode_index(x);
    let width = term.arity().to_usize().filter(|w| *w <= COERCE_WIDTH_MAX).ok_or(
        EvalError::TupleWidth { needed: term.arity().clone(), limit: COERCE_WIDTH_MAX },
    )?;
    let mut args = vec![Nat::zero(); width];
    args[0] = arg.clone();
    eval(&term, &args, limits)
}

/// The successor diagonal `h(x) = eval(x, x) + 1`. Total up to resource caps, and
/// different from every enumerated function at its own index.
pub fn diagonal_h(x: &Nat, limits: &EvalLimits) -> Result<Nat, EvalError> {
    Ok(universal_eval(x, x, limits)? + Nat::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pinned_atom_codes() {
        assert_eq!(encode_term(&PrTerm::zero()), nat(0));
        assert_eq!(encode_term(&PrTerm::succ()), nat(1));
        assert_eq!(decode_index(&nat(0)), PrTerm::zero());
        assert_eq!(decode_index(&nat(1)), PrTerm::succ());
    }

    #[test]
    fn simple_composition_code_derived_by_hand() {
        // Applying the scheme manually: outer S has global code 1, the single inner Z
        // has arity-1 code 0, the shared arity is 1, so the payload is
        // pair(1, pair(0, 0)) and the code is 2 + 3*payload + 1.
        let term = PrTerm::comp(PrTerm::succ(), vec![PrTerm::zero()]).unwrap();
        let expected = &pair(&nat(1), &pair(&nat(0), &nat(0))) * 3u32 + 3u32;
        assert_eq!(encode_term(&term), expected);
        assert_eq!(decode_index(&expected), term);
    }

    #[test]
    fn decode_encode_identity_on_initial_segment() {
        for x in 0u64..3000 {
            let x = nat(x);
            let term = decode_index(&x);
            assert_eq!(encode_term(&term), x, "code {x} did not round-trip");
        }
    }

    #[test]
    fn encode_decode_identity_on_handmade_terms() {
        let add = crate::pr::parse("R[P[1,1]; C[S; P[2,3]]]").unwrap();
        let mul = crate::pr::parse("R[Z; C[R[P[1,1]; C[S; P[2,3]]]; P[2,3]; P[3,3]]]").unwrap();
        for t in [PrTerm::zero(), PrTerm::succ(), add, mul] {
            assert_eq!(decode_index(&encode_term(&t)), t);
        }
    }

    #[test]
    fn universal_eval_pinned_values() {
        let limits = EvalLimits::default();
        assert_eq!(universal_eval(&nat(0), &nat(9), &limits).unwrap(), nat(0));
        assert_eq!(universal_eval(&nat(1), &nat(9), &limits).unwrap(), nat(10));
    }

    #[test]
    fn universal_eval_agrees_with_direct_eval() {
        let limits = EvalLimits::default();
        for x in 0u64..100 {
            let x = nat(x);
            let term = decode_index(&x);
            let width = term.arity().to_usize().unwrap();
            let mut args = vec![nat(0); width];
            args[0] = nat(5);
            let direct = eval(&term, &args, &limits);
            let universal = universal_eval(&x, &nat(5), &limits);
            assert_eq!(universal, direct, "disagreement at index {x}");
        }
    }

    #[test]
    fn diagonal_h_pinned_values() {
        let limits = EvalLimits::default();
        // Z at its own code evaluates to 0; S at code 1 evaluates to 2.
        assert_eq!(diagonal_h(&nat(0), &limits).unwrap(), nat(1));
        assert_eq!(diagonal_h(&nat(1), &limits).unwrap(), nat(3));
    }

    #[test]
    fn diagonal_h_escapes_on_initial_segment() {
        let limits = EvalLimits { max_steps: 200_000, max_value_bits: 4096 };
        let mut definite = 0u32;
        for x in 0u64..300 {
            let x = nat(x);
            if let (Ok(h), Ok(v)) = (diagonal_h(&x, &limits), universal_eval(&x, &x, &limits)) {
                assert_eq!(h, &v + 1u32);
                assert_ne!(h, v);
                definite += 1;
            }
        }
        assert!(definite > 200, "only {definite} definite evaluations in 0..300");
    }

    fn fuzz_term(target_arity: u64, bytes: &[u8]) -> PrTerm {
        fn build(arity: u64, bytes: &[u8], at: &mut usize, depth: u32) -> PrTerm {
            let next = |at: &mut usize| {
                let b = bytes.get(*at).copied().unwrap_or(0);
                *at += 1;
                b
            };
            if depth == 0 {
                return fallback(arity);
            }
            let choice = next(at);
            if arity == 1 {
                match choice % 4 {
                    0 => PrTerm::zero(),
                    1 => PrTerm::succ(),
                    2 => PrTerm::proj(nat(1), nat(1)).unwrap(),
                    _ => comp(arity, bytes, at, depth),
                }
            } else {
                match choice % 3 {
                    0 => {
                        let i = u64::from(next(at)) % arity + 1;
                        PrTerm::proj(nat(i), nat(arity)).unwrap()
                    }
                    1 => comp(arity, bytes, at, depth),
                    _ => {
                        let base = build(arity - 1, bytes, at, depth - 1);
                        let step = build(arity + 1, bytes, at, depth - 1);
                        PrTerm::prim_rec(base, step).unwrap()
                    }
                }
            }
        }
        fn comp(arity: u64, bytes: &[u8], at: &mut usize, depth: u32) -> PrTerm {
            let m = u64::from(bytes.get(*at).copied().unwrap_or(0)) % 3 + 1;
            *at += 1;
            let outer = build(m, bytes, at, depth - 1);
            let inners = (0..m).map(|_| build(arity, bytes, at, depth - 1)).collect();
            PrTerm::comp(outer, inners).unwrap()
        }
        fn fallback(arity: u64) -> PrTerm {
            if arity == 1 {
                PrTerm::zero()
            } else {
                PrTerm::proj(nat(1), nat(arity)).unwrap()
            }
        }
        let mut at = 0;
        build(target_arity.max(1), bytes, &mut at, 4)
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

        #[test]
        fn encode_decode_roundtrip(arity in 1u64..4, bytes in proptest::collection::vec(any::<u8>(), 0..48)) {
            let term = fuzz_term(arity, &bytes);
            prop_assert_eq!(decode_index(&encode_term(&term)), term);
        }

        #[test]
        fn print_parse_roundtrip(arity in 1u64..4, bytes in proptest::collection::vec(any::<u8>(), 0..48)) {
            let term = fuzz_term(arity, &bytes);
            prop_assert_eq!(crate::pr::parse(&term.to_string()).unwrap(), term);
        }

        #[test]
        fn decode_total_and_injective(x in 0u64..1 << 40) {
            let term = decode_index(&nat(x));
            prop_assert_eq!(encode_term(&term), nat(x));
        }
    }
}
