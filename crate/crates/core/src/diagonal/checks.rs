//! Named, executable evidence behind the capability ledger.
//!
//! Every `Checked` status in the model registry names one of these. A check
//! passing means the recorded status is backed by something this build
//! actually ran, whether the status records a capability (the evidence
//! exercises it) or a refusal (the evidence exhibits the escape). Checks keep
//! their ranges small enough to run inside an ordinary test pass.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::atm::{
    atm_run, compose_check, negation_pipeline_check, AtmError, AtmParams, AtmProgram, AtmVerdict,
    ComposeReject, ComposeVerdict,
};
use crate::godel::{decode_index, diagonal_h, encode_term, universal_eval};
use crate::halting::{
    diagonal_g, halting_f, lba_halt_decide, replay_cycle, replay_halts, semi_decide_halt,
    ExactAnswer, FValue, GOutcome, SemiAnswer, SpaceBound, Tier, DEFAULT_BUDGET,
};
use crate::ittm::{
    bias_invariance, ittm_decide_halting, replay_decision, run_to_clock, IttmOutcome, IttmSpec,
    LimitRule, OrdinalClock,
};
use crate::omachine::{negation_demo, run_oracle};
use crate::pairing::pair;
use crate::pr::{eval, EvalLimits, PrTerm};
use crate::tm::fixtures::{constant_one, spinner, square_marker, square_toggler, successor};
use crate::tm::{decode_tm, encode_tm, run_bounded, RunOutcome};
use crate::{nat, Nat};

/// Outcome of one named check. `details` is for humans reading a report; the
/// ledger only relies on `name` and `passed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

fn report(name: &str, passed: bool, details: String) -> CheckReport {
    CheckReport { name: name.to_owned(), passed, details }
}

/// Every check this build knows, in the order reports list them.
pub fn check_names() -> &'static [&'static str] {
    &[
        "atm-compose-reject",
        "atm-halting-solver",
        "atm-write-once",
        "g-escape-sweep",
        "ittm-halt-agreement",
        "ittm-rule-bias",
        "omachine-negation-demo",
        "pr-code-roundtrip",
        "pr-composition",
        "pr-constant-one",
        "pr-diagonal-sweep",
        "pr-eval-agreement",
        "pr-successor-term",
        "tm-basic-kit",
        "tm-code-roundtrip",
        "tm-partial-index-witness",
        "tm-tier-agreement",
    ]
}

/// Runs the named check; `None` for names not in the catalogue.
pub fn run_check(name: &str) -> Option<CheckReport> {
    let out = match name {
        "atm-compose-reject" => atm_compose_reject(),
        "atm-halting-solver" => atm_halting_solver(),
        "atm-write-once" => atm_write_once(),
        "g-escape-sweep" => g_escape_sweep(),
        "ittm-halt-agreement" => ittm_halt_agreement(),
        "ittm-rule-bias" => ittm_rule_bias(),
        "omachine-negation-demo" => omachine_negation(),
        "pr-code-roundtrip" => pr_code_roundtrip(),
        "pr-composition" => pr_composition(),
        "pr-constant-one" => pr_constant_one(),
        "pr-diagonal-sweep" => pr_diagonal_sweep(),
        "pr-eval-agreement" => pr_eval_agreement(),
        "pr-successor-term" => pr_successor_term(),
        "tm-basic-kit" => tm_basic_kit(),
        "tm-code-roundtrip" => tm_code_roundtrip(),
        "tm-partial-index-witness" => tm_partial_index_witness(),
        "tm-tier-agreement" => tm_tier_agreement(),
        _ => return None,
    };
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<CheckReport>,
    pub all_passed: bool,
}

/// Runs the whole catalogue in name order.
pub fn capability_audit() -> AuditReport {
    let checks: Vec<CheckReport> =
        check_names().iter().map(|n| run_check(n).expect("catalogue is closed")).collect();
    let all_passed = checks.iter().all(|c| c.passed);
    AuditReport { checks, all_passed }
}

/// Terms the calculus-side checks lean on. `C[S; C[Z; P[1,n]]]` is the n-ary
/// constant 1.
fn constant_one_term(arity: u64) -> PrTerm {
    let inner = PrTerm::comp(
        PrTerm::zero(),
        vec![PrTerm::proj(nat(1), nat(arity)).expect("1 <= arity")],
    )
    .expect("arities line up");
    PrTerm::comp(PrTerm::succ(), vec![inner]).expect("arities line up")
}

fn pr_code_roundtrip() -> CheckReport {
    let name = "pr-code-roundtrip";
    for x in 0u64..500 {
        let x = nat(x);
        if encode_term(&decode_index(&x)) != x {
            return report(name, false, format!("code {x} does not survive decode/encode"));
        }
    }
    let built = [
        PrTerm::succ(),
        constant_one_term(1),
        constant_one_term(3),
        PrTerm::prim_rec(PrTerm::zero(), constant_one_term(3)).expect("arities line up"),
    ];
    for term in &built {
        if &decode_index(&encode_term(term)) != term {
            return report(name, false, "a built term does not survive encode/decode".to_owned());
        }
    }
    report(
        name,
        true,
        format!("500 codes and {} built terms round-trip both ways", built.len()),
    )
}

fn pr_eval_agreement() -> CheckReport {
    let name = "pr-eval-agreement";
    let limits = EvalLimits::default();
    let mut definite = 0u64;
    let mut capped = 0u64;
    for x in 0u64..120 {
        let arg = nat(x % 7);
        let x = nat(x);
        let term = decode_index(&x);
        // Re-derive the unary coercion by hand so the two paths share nothing
        // past the numbering itself.
        let width = term.arity().to_usize().expect("small arities in range");
        let mut args = vec![nat(0); width];
        args[0] = arg.clone();
        let direct = eval(&term, &args, &limits);
        let through = universal_eval(&x, &arg, &limits);
        match (direct, through) {
            (Ok(a), Ok(b)) if a == b => definite += 1,
            (Err(_), Err(_)) => capped += 1,
            (a, b) => {
                return report(name, false, format!("paths split at {x}: {a:?} vs {b:?}"));
            }
        }
    }
    report(name, true, format!("two evaluation paths agree on 120 indices ({definite} definite, {capped} capped)"))
}

fn pr_constant_one() -> CheckReport {
    let name = "pr-constant-one";
    let limits = EvalLimits::default();
    for arity in [1u64, 2] {
        let term = constant_one_term(arity);
        for a in 0u64..6 {
            for b in 0u64..6 {
                let args: Vec<Nat> =
                    if arity == 1 { vec![nat(a)] } else { vec![nat(a), nat(b)] };
                match eval(&term, &args, &limits) {
                    Ok(v) if v == nat(1) => {}
                    other => {
                        return report(
                            name,
                            false,
                            format!("constant-1 term of arity {arity} gave {other:?} on {args:?}"),
                        )
                    }
                }
                if arity == 1 {
                    break;
                }
            }
        }
    }
    report(
        name,
        true,
        "in-calculus constant 1 covers a total halting answer and a full index set".to_owned(),
    )
}

fn pr_successor_term() -> CheckReport {
    let name = "pr-successor-term";
    let limits = EvalLimits::default();
    let mut points: Vec<Nat> = (0u64..50).map(nat).collect();
    points.push(nat(1) << 80usize);
    for n in &points {
        match eval(&PrTerm::succ(), std::slice::from_ref(n), &limits) {
            Ok(v) if v == n + 1u32 && v != *n => {}
            other => return report(name, false, format!("successor misbehaved at {n}: {other:?}")),
        }
    }
    report(name, true, format!("successor moves all {} sampled points", points.len()))
}

fn pr_composition() -> CheckReport {
    let name = "pr-composition";
    let limits = EvalLimits::default();
    let double = PrTerm::comp(PrTerm::succ(), vec![PrTerm::succ()]).expect("arities line up");
    for n in 0u64..40 {
        let inner = match eval(&PrTerm::succ(), &[nat(n)], &limits) {
            Ok(v) => v,
            Err(e) => return report(name, false, format!("inner stage failed at {n}: {e}")),
        };
        let outer = match eval(&PrTerm::succ(), &[inner], &limits) {
            Ok(v) => v,
            Err(e) => return report(name, false, format!("outer stage failed at {n}: {e}")),
        };
        match eval(&double, &[nat(n)], &limits) {
            Ok(v) if v == outer => {}
            other => {
                return report(
                    name,
                    false,
                    format!("composed term disagrees with staged run at {n}: {other:?}"),
                )
            }
        }
    }
    report(name, true, "one composed term equals its two stages run by hand on 40 points".to_owned())
}

fn pr_diagonal_sweep() -> CheckReport {
    let name = "pr-diagonal-sweep";
    let limits = EvalLimits::default();
    let mut definite = 0u64;
    for x in 0u64..300 {
        let x = nat(x);
        if let Ok(v) = universal_eval(&x, &x, &limits) {
            let escaped = match diagonal_h(&x, &limits) {
                Ok(h) => h == &v + 1u32 && h != v,
                Err(_) => false,
            };
            if !escaped {
                return report(name, false, format!("diagonal failed to escape at {x}"));
            }
            definite += 1;
        }
    }
    if definite < 200 {
        return report(name, false, format!("only {definite} definite points of 300"));
    }
    report(
        name,
        true,
        format!("h differs from machine x at x on all {definite} definite points of 300"),
    )
}

fn tm_code_roundtrip() -> CheckReport {
    let name = "tm-code-roundtrip";
    for x in 0u64..500 {
        let x = nat(x);
        if encode_tm(&decode_tm(&x)) != x {
            return report(name, false, format!("code {x} does not survive decode/encode"));
        }
    }
    let marker_code = encode_tm(&square_marker());
    if encode_tm(&decode_tm(&marker_code)) != marker_code {
        return report(name, false, "a fixture's code does not survive decode/encode".to_owned());
    }
    report(name, true, "500 codes and a hand-built machine round-trip both ways".to_owned())
}

fn tm_tier_agreement() -> CheckReport {
    let name = "tm-tier-agreement";
    let space = SpaceBound::default();
    let mut halts = 0u64;
    let mut refusals = 0u64;
    for code in 0u64..300 {
        let spec = decode_tm(&nat(code));
        for input in 0u64..3 {
            let input = nat(input);
            match lba_halt_decide(&spec, &input, space) {
                Err(_) => refusals += 1,
                Ok(ExactAnswer::Halts { steps }) => {
                    match semi_decide_halt(&spec, &input, DEFAULT_BUDGET) {
                        SemiAnswer::Halts { steps: s } if s == steps => halts += 1,
                        other => {
                            return report(
                                name,
                                false,
                                format!("tiers split on code {code}, input {input}: {other:?} vs {steps} steps"),
                            )
                        }
                    }
                }
                Ok(ExactAnswer::DivergesProven { .. }) => {
                    if let SemiAnswer::Halts { steps } =
                        semi_decide_halt(&spec, &input, DEFAULT_BUDGET)
                    {
                        return report(
                            name,
                            false,
                            format!("code {code} halts in {steps} steps against a divergence proof"),
                        );
                    }
                }
            }
        }
    }
    report(
        name,
        true,
        format!("independent tiers agree on 900 runs ({halts} halts matched step-for-step, {refusals} window refusals)"),
    )
}

fn tm_basic_kit() -> CheckReport {
    let name = "tm-basic-kit";
    if encode_tm(&successor()) != nat(0) {
        return report(name, false, "the successor table is not index 0".to_owned());
    }
    let constant = constant_one();
    let constant_code = encode_tm(&constant);
    for n in 0u64..20 {
        match run_bounded(&successor(), &nat(n), 10) {
            RunOutcome::Halted { output, steps: 0 } if output == n + 1 => {}
            other => return report(name, false, format!("successor table gave {other:?} at {n}")),
        }
        match run_bounded(&constant, &nat(n), 100) {
            RunOutcome::Halted { output: 1, .. } => {}
            other => return report(name, false, format!("constant-1 table gave {other:?} at {n}")),
        }
        match run_bounded(&decode_tm(&constant_code), &nat(n), 100) {
            RunOutcome::Halted { output: 1, .. } => {}
            other => {
                return report(
                    name,
                    false,
                    format!("re-decoded constant-1 table gave {other:?} at {n}"),
                )
            }
        }
    }
    report(
        name,
        true,
        format!("successor is index 0; constant 1 lives at index {constant_code} and both behave on 20 inputs"),
    )
}

fn tm_partial_index_witness() -> CheckReport {
    let name = "tm-partial-index-witness";
    let witness = encode_tm(&spinner());
    let spec = decode_tm(&witness);
    match lba_halt_decide(&spec, &nat(0), SpaceBound::default()) {
        Ok(ExactAnswer::DivergesProven { cycle_start, cycle_len }) => {
            if !replay_cycle(&spec, &nat(0), SpaceBound::default(), cycle_start, cycle_len) {
                return report(name, false, "divergence certificate does not replay".to_owned());
            }
            report(
                name,
                true,
                format!("index {witness} provably diverges on input 0, so the numbering reaches partial functions"),
            )
        }
        other => report(name, false, format!("expected a divergence proof, got {other:?}")),
    }
}

fn g_escape_sweep() -> CheckReport {
    let name = "g-escape-sweep";
    // Wider than the default window: the diagonal feeds machine x its own
    // index, so a window of w cells proves nothing past x = w - 2.
    let space = SpaceBound::new(64).expect("nonzero");
    let mut zeros = 0u64;
    let mut markers = 0u64;
    let mut refusals = 0u64;
    for x in 0u64..200 {
        let x = nat(x);
        let spec = decode_tm(&x);
        match diagonal_g(&x, space) {
            Err(_) => refusals += 1,
            Ok(GOutcome::Value { output, cycle_start, cycle_len }) => {
                if output != 0 || !replay_cycle(&spec, &x, space, cycle_start, cycle_len) {
                    return report(name, false, format!("bad divergence side at {x}"));
                }
                zeros += 1;
            }
            Ok(GOutcome::DivergesMarker { halt_steps }) => {
                if !replay_halts(&spec, &x, halt_steps) {
                    return report(name, false, format!("bad halting side at {x}"));
                }
                markers += 1;
            }
        }
    }
    if zeros == 0 || markers == 0 {
        return report(name, false, "sweep failed to exercise both arms".to_owned());
    }
    report(
        name,
        true,
        format!("the anti-halting diagonal is 0 on {zeros} proven-diverging indices, marked divergent on {markers} halting ones, honest on {refusals} refusals"),
    )
}

fn atm_halting_solver() -> CheckReport {
    let name = "atm-halting-solver";
    let params = AtmParams::default();
    let mut matched = 0u64;
    let mut fallbacks = 0u64;
    for x in 0u64..30 {
        for y in 0u64..3 {
            let (x, y) = (nat(x), nat(y));
            let code = pair(&x, &y);
            let verdict = match atm_run(&AtmProgram::HaltingSolver, &code, &params) {
                Ok(v) => v,
                Err(e) => return report(name, false, format!("solver errored on ({x},{y}): {e}")),
            };
            match halting_f(&x, &y, Tier::Exact { space: params.space }) {
                Ok(FValue::One { .. }) => match verdict {
                    AtmVerdict::Marked { .. } => matched += 1,
                    other => {
                        return report(
                            name,
                            false,
                            format!("halting pair ({x},{y}) got {other:?}"),
                        )
                    }
                },
                Ok(FValue::Zero { .. }) => match verdict {
                    AtmVerdict::UnmarkedProven { .. } => matched += 1,
                    other => {
                        return report(
                            name,
                            false,
                            format!("diverging pair ({x},{y}) got {other:?}"),
                        )
                    }
                },
                Ok(FValue::Unknown { .. }) => unreachable!("exact tier is definite"),
                Err(_) => match verdict {
                    AtmVerdict::Marked { .. } | AtmVerdict::UnmarkedAtBudget { .. } => {
                        fallbacks += 1
                    }
                    AtmVerdict::UnmarkedProven { .. } => {
                        return report(
                            name,
                            false,
                            format!("({x},{y}): unmarked proof without a window for it"),
                        )
                    }
                },
            }
        }
    }
    report(
        name,
        true,
        format!("solver verdicts match the exact tier on {matched} pairs, degrade honestly on {fallbacks}"),
    )
}

fn atm_write_once() -> CheckReport {
    let name = "atm-write-once";
    let params = AtmParams::default();
    match atm_run(&AtmProgram::Table(square_toggler()), &nat(0), &params) {
        Err(AtmError::WriteOnceViolation { step: 3 }) => {}
        other => return report(name, false, format!("toggler gave {other:?}")),
    }
    for n in 0u64..5 {
        match atm_run(&AtmProgram::Table(square_marker()), &nat(n), &params) {
            Ok(AtmVerdict::Marked { step: 2 }) => {}
            other => return report(name, false, format!("marker gave {other:?} at {n}")),
        }
    }
    report(
        name,
        true,
        "the one permitted square write is accepted, the second is caught at its exact step"
            .to_owned(),
    )
}

fn atm_compose_reject() -> CheckReport {
    let name = "atm-compose-reject";
    let params = AtmParams::default();
    match negation_pipeline_check(&params) {
        ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput } => {}
        other => return report(name, false, format!("negation pipeline gave {other:?}")),
    }
    match compose_check(&AtmProgram::HaltingSolver, &params) {
        ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput } => {}
        other => return report(name, false, format!("solver stage gave {other:?}")),
    }
    match compose_check(&AtmProgram::Table(square_marker()), &params) {
        ComposeVerdict::Accept { certs } if !certs.is_empty() => {}
        other => return report(name, false, format!("finite-step stage gave {other:?}")),
    }
    report(
        name,
        true,
        "stages answering at the limit are refused downstream readers; finite-step stages certify"
            .to_owned(),
    )
}

fn omachine_negation() -> CheckReport {
    let name = "omachine-negation-demo";
    let om = negation_demo();
    let space = SpaceBound::default();
    let mut flipped = 0u64;
    let mut refusals = 0u64;
    for x in 0u64..60 {
        let x = nat(x);
        match (run_oracle(&om, &x, 10_000, space), halting_f(&x, &x, Tier::Exact { space })) {
            (Err(_), Err(_)) => refusals += 1,
            (Ok(RunOutcome::Halted { output, .. }), Ok(f)) => {
                let expected = match f {
                    FValue::One { .. } => 0,
                    FValue::Zero { .. } => 1,
                    FValue::Unknown { .. } => unreachable!("exact tier is definite"),
                };
                if output != expected {
                    return report(name, false, format!("negation wrong at {x}: {output}"));
                }
                flipped += 1;
            }
            (a, b) => return report(name, false, format!("split at {x}: {a:?} vs {b:?}")),
        }
    }
    report(
        name,
        true,
        format!("oracle machine computes the flipped self-halting answer on {flipped} indices ({refusals} shared refusals)"),
    )
}

fn ittm_halt_agreement() -> CheckReport {
    let name = "ittm-halt-agreement";
    let space = SpaceBound::default();
    let mut agreed = 0u64;
    let mut refusals = 0u64;
    for x in 0u64..150 {
        for y in 0u64..2 {
            let (x, y) = (nat(x), nat(y));
            let ground = lba_halt_decide(&decode_tm(&x), &y, space);
            for rule in [LimitRule::Limsup, LimitRule::Liminf] {
                match (ittm_decide_halting(&x, &y, rule, space), &ground) {
                    (Err(_), Err(_)) => refusals += 1,
                    (Ok(decision), Ok(answer)) => {
                        let halts = matches!(answer, ExactAnswer::Halts { .. });
                        if decision.halts != halts {
                            return report(name, false, format!("wrong decision at ({x},{y})"));
                        }
                        if !replay_decision(&x, &y, space, &decision) {
                            return report(
                                name,
                                false,
                                format!("decision at ({x},{y}) does not replay"),
                            );
                        }
                        agreed += 1;
                    }
                    (a, b) => return report(name, false, format!("split at ({x},{y}): {a:?} vs {b:?}")),
                }
            }
        }
    }
    report(
        name,
        true,
        format!("limit-stage decisions match ground truth on {agreed} runs across both limit rules ({refusals} shared refusals)"),
    )
}

fn ittm_rule_bias() -> CheckReport {
    let name = "ittm-rule-bias";
    let blinker = IttmSpec::new(crate::tm::fixtures::blinker(), 0).expect("binary fixture");
    let at_limit = |rule| {
        run_to_clock(&blinker, &nat(0), OrdinalClock::new(1, 0).expect("under cap"), rule, 100)
    };
    let up = match at_limit(LimitRule::Limsup) {
        Ok(IttmOutcome::Running { ones, .. }) => ones,
        other => return report(name, false, format!("limsup run gave {other:?}")),
    };
    let down = match at_limit(LimitRule::Liminf) {
        Ok(IttmOutcome::Running { ones, .. }) => ones,
        other => return report(name, false, format!("liminf run gave {other:?}")),
    };
    if (up, down) != (1, 0) {
        return report(name, false, format!("flip-forever limits came out ({up},{down})"));
    }
    let space = SpaceBound::default();
    let mut checked = 0u64;
    for x in 0u64..100 {
        let x = nat(x);
        match bias_invariance(&x, &x, space) {
            Err(_) => {}
            Ok(true) => checked += 1,
            Ok(false) => {
                return report(name, false, format!("halting decision depends on the rule at {x}"))
            }
        }
    }
    report(
        name,
        true,
        format!("limit rules genuinely differ on a flipping cell, yet {checked} halting decisions are rule-invariant"),
    )
}
