use crate::tm::{Move, Rule, RuleRow, TmSpec};
use crate::{nat, Nat};
use num_traits::{ToPrimitive, Zero};

/// Total numbering of machine tables.
///
/// Machines are stratified by (state count `n >= 1`, alphabet size `g >= 2`),
/// strata ordered by `n + g` ascending and `n` ascending within a tier. Inside a
/// stratum a table is a number in mixed radix `1 + 3*g*n` with one digit per
/// (state, symbol) cell: digit 0 leaves the cell uncovered (an implicit halt),
/// digit `1 + ((write*3 + move)*n + next)` fills it. Both directions are total on
/// canonical tables, and code 0 is the one-state machine with no rules.
pub fn decode_tm(code: &Nat) -> TmSpec {
    let mut rest = code.clone();
    for (n, g, size) in strata() {
        if rest < size {
            return decode_in_stratum(n, g, &rest);
        }
        rest -= size;
    }
    unreachable!("strata cover all naturals");
}

/// Code of `spec`'s canonical form; inverse of [`decode_tm`] on canonical specs.
pub fn encode_tm(spec: &TmSpec) -> Nat {
    let spec = canonicalize(spec);
    let (n, g) = (spec.n_states() as u64, spec.n_symbols() as u64);
    let mut offset = Nat::zero();
    for (sn, sg, size) in strata() {
        if (sn, sg) == (n, g) {
            break;
        }
        offset += size;
    }
    let radix = nat(1 + 3 * g * n);
    let mut value = Nat::zero();
    for cell in (0..(n * g) as usize).rev() {
        let (state, sym) = (cell / g as usize, cell % g as usize);
        let digit = match spec.rule(state, sym) {
            None => 0,
            Some(rule) => {
                let mv = match rule.mv {
                    Move::Left => 0,
                    Move::Right => 1,
                    Move::Stay => 2,
                };
                1 + ((rule.write as u64 * 3 + mv) * n + rule.next as u64)
            }
        };
        value = value * &radix + nat(digit);
    }
    offset + value
}

/// Strips names and halt markings: states become `q0..`, symbols `_ 1 2 ..`, and
/// halt states become ordinary states without rules (same behavior, since rules
/// out of halt states are rejected at construction).
pub fn canonicalize(spec: &TmSpec) -> TmSpec {
    let (n, g) = (spec.n_states(), spec.n_symbols());
    let mut rules: Vec<RuleRow> = Vec::new();
    for state in 0..n {
        for sym in 0..g {
            if let Some(&Rule { write, mv, next }) = spec.rule(state, sym) {
                rules.push(((state, sym), (write, mv, next)));
            }
        }
    }
    TmSpec::from_rules(n, g, &rules).expect("canonical rebuild preserves validity")
}

fn decode_in_stratum(n: u64, g: u64, value: &Nat) -> TmSpec {
    let radix = nat(1 + 3 * g * n);
    let mut rest = value.clone();
    let mut rules: Vec<RuleRow> = Vec::new();
    for cell in 0..n * g {
        let digit = (&rest % &radix).to_u64().expect("digit below radix");
        rest /= &radix;
        if digit == 0 {
            continue;
        }
        let d = digit - 1;
        let next = d % n;
        let mv = match (d / n) % 3 {
            0 => Move::Left,
            1 => Move::Right,
            _ => Move::Stay,
        };
        let write = d / n / 3;
        let (state, sym) = (cell / g, cell % g);
        rules.push(((state as usize, sym as usize), (write as usize, mv, next as usize)));
    }
    TmSpec::from_rules(n as usize, g as usize, &rules).expect("digits decode to valid rules")
}

/// Endless stratum walk `(n, g, size)` in code order.
fn strata() -> impl Iterator<Item = (u64, u64, Nat)> {
    (3u64..).flat_map(|tier| {
        (1..=tier - 2).map(move |n| {
            let g = tier - n;
            let size = nat(1 + 3 * g * n).pow((n * g) as u32);
            (n, g, size)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{run_bounded, RunOutcome};

    #[test]
    fn code_zero_is_the_empty_machine() {
        let m = decode_tm(&nat(0));
        assert_eq!(m.n_states(), 1);
        assert_eq!(m.n_symbols(), 2);
        assert_eq!(m.rule_count(), 0);
        // Halts before doing anything, so the input marks are the output.
        assert_eq!(run_bounded(&m, &nat(3), 10), RunOutcome::Halted { output: 4, steps: 0 });
        assert_eq!(encode_tm(&m), nat(0));
    }

    #[test]
    fn stratum_boundaries_follow_the_size_formula() {
        // (1,2) holds 7^2 = 49 tables, (1,3) holds 10^3 = 1000, then (2,2) begins.
        let first_13 = decode_tm(&nat(49));
        assert_eq!((first_13.n_states(), first_13.n_symbols()), (1, 3));
        assert_eq!(first_13.rule_count(), 0);
        let first_22 = decode_tm(&nat(49 + 1000));
        assert_eq!((first_22.n_states(), first_22.n_symbols()), (2, 2));
        assert_eq!(first_22.rule_count(), 0);
    }

    #[test]
    fn roundtrip_on_initial_segment() {
        for x in 0u64..3000 {
            let x = nat(x);
            assert_eq!(encode_tm(&decode_tm(&x)), x, "code {x} did not round-trip");
        }
    }

    #[test]
    fn busy_beaver_fixture_roundtrips() {
        let champion = crate::tm::fixtures::bb2_champion();
        let code = encode_tm(&champion);
        assert_eq!(decode_tm(&code), canonicalize(&champion));
    }

    #[test]
    fn canonicalize_preserves_behavior() {
        let text = "\
start: A
halt: H
blank: _
A _ -> B 1 R
A 1 -> B 1 L
B _ -> A 1 L
B 1 -> H 1 R
";
        let named = crate::tm::parse_tm(text).unwrap();
        let canon = canonicalize(&named);
        assert_eq!(canon.state_name(0), "q0");
        assert!(!canon.is_halt_state(2));
        for input in 0u64..4 {
            assert_eq!(
                run_bounded(&named, &nat(input), 100),
                run_bounded(&canon, &nat(input), 100),
            );
        }
        assert_eq!(encode_tm(&named), encode_tm(&canon));
    }
}
