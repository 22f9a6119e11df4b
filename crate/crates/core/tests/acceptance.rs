//! Acceptance sweep. One test per numbered criterion, each ending in a single
//! `criterion N PASS`/`FAIL` line (run with `--nocapture` to see them). Every
//! bound, seed, and tolerance is pinned here so reruns are comparable.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use diagforge_core::atm::{
    atm_run, compose_check, negation_pipeline_check, AtmError, AtmParams, AtmProgram, AtmVerdict,
    ComposeReject, ComposeVerdict, UnmarkedCert,
};
use diagforge_core::diagonal::{
    capability_audit, contradiction_witness, registry, registry_invariants, run_check, PropertyId,
    PropertyStatus, WitnessRefusal, WitnessTarget,
};
use diagforge_core::godel::{decode_index, diagonal_h, encode_term, universal_eval};
use diagforge_core::halting::{
    diagonal_g, lba_halt_decide, replay_cycle, replay_halts, ExactAnswer, GOutcome, SpaceBound,
};
use diagforge_core::ittm::{
    bias_invariance, ittm_decide_halting, replay_decision, replay_limits, run_to_clock,
    IttmOutcome, IttmSpec, LimitRule, OrdinalClock, DEFAULT_STAGE_BUDGET,
};
use diagforge_core::pr::{eval, EvalLimits, PrTerm};
use diagforge_core::tm::decode_tm;
use diagforge_core::tm::fixtures::{blinker, square_marker, square_toggler};
use diagforge_core::nat;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints the one-line verdict and fails the test if anything went wrong.
/// Only the first few failures are echoed; the count is what matters.
fn conclude(number: u32, label: &str, detail: String, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {number} PASS: {label} ({detail})");
    } else {
        let shown = failures.iter().take(5).cloned().collect::<Vec<_>>().join("; ");
        println!(
            "criterion {number} FAIL: {label}: {} failure(s), e.g. {shown}",
            failures.len()
        );
        panic!("criterion {number} failed: {shown}");
    }
}

// ---------------------------------------------------------------------------
// 1: the index/term coding is a bijection.

/// All terms of depth <= 3 under pinned caps: projection arity <= 3, at most
/// two composition inners (outer arity <= 2), recursion base arity 1 (forced
/// by the arity cap on the step term). Caps keep the enumeration finite; the
/// unbounded side of the bijection is covered by the numeric sweep.
fn depth_layers() -> Vec<PrTerm> {
    let mut atoms: BTreeMap<u64, Vec<PrTerm>> = BTreeMap::new();
    atoms.entry(1).or_default().push(PrTerm::zero());
    atoms.entry(1).or_default().push(PrTerm::succ());
    for of in 1..=3u64 {
        for index in 1..=of {
            atoms
                .entry(of)
                .or_default()
                .push(PrTerm::proj(nat(index), nat(of)).expect("in-range projection"));
        }
    }

    let close = |pool: &BTreeMap<u64, Vec<PrTerm>>| -> BTreeMap<u64, Vec<PrTerm>> {
        let mut next = atoms.clone();
        for outer_arity in 1..=2u64 {
            for outer in pool.get(&outer_arity).into_iter().flatten() {
                for (&inner_arity, inners) in pool {
                    if outer_arity == 1 {
                        for g in inners {
                            let t = PrTerm::comp(outer.clone(), vec![g.clone()])
                                .expect("arities line up");
                            next.entry(inner_arity).or_default().push(t);
                        }
                    } else {
                        for g_one in inners {
                            for g_two in inners {
                                let t = PrTerm::comp(
                                    outer.clone(),
                                    vec![g_one.clone(), g_two.clone()],
                                )
                                .expect("arities line up");
                                next.entry(inner_arity).or_default().push(t);
                            }
                        }
                    }
                }
            }
        }
        for base in pool.get(&1).into_iter().flatten() {
            for step in pool.get(&3).into_iter().flatten() {
                let t = PrTerm::prim_rec(base.clone(), step.clone()).expect("arities line up");
                next.entry(2).or_default().push(t);
            }
        }
        next
    };

    let depth_two = close(&atoms);
    let depth_three = close(&depth_two);
    depth_three.into_values().flatten().collect()
}

#[test]
fn criterion_1_term_code_bijection() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for x in 0..10_000u64 {
        let code = nat(x);
        let back = encode_term(&decode_index(&code));
        if back != code {
            failures.push(format!("index {x} re-encodes as {back}"));
        }
    }

    let terms = depth_layers();
    for term in &terms {
        let back = decode_index(&encode_term(term));
        if &back != term {
            failures.push(format!("term {term} decodes as {back}"));
        }
    }

    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}, budget is 10s"));
    }
    conclude(
        1,
        "coding bijects indices and terms",
        format!("10000 indices + {} capped depth<=3 terms in {elapsed:?}", terms.len()),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 2: the universal evaluator agrees with direct evaluation.

/// Tight enough that runaway recursions exhaust in milliseconds rather than
/// minutes; what matters is that both evaluation routes share the fate.
const SWEEP_LIMITS: EvalLimits = EvalLimits { max_steps: 200_000, max_value_bits: 4096 };

#[test]
fn criterion_2_universal_agreement() {
    let limits = SWEEP_LIMITS;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut failures = Vec::new();
    let mut definite = 0u32;
    let mut exhausted = 0u32;

    for picked in rand::seq::index::sample(&mut rng, 10_000, 500).into_iter() {
        let x = nat(picked as u64);
        let arg = nat(rng.gen_range(0..=10u64));

        let term = decode_index(&x);
        let width = usize::try_from(term.arity()).expect("small arity");
        let mut args = vec![nat(0); width];
        args[0] = arg.clone();
        let direct = eval(&term, &args, &limits);
        let hosted = universal_eval(&x, &arg, &limits);

        match (&hosted, &direct) {
            (Ok(a), Ok(b)) if a == b => definite += 1,
            (Err(a), Err(b)) if a == b => exhausted += 1,
            _ => failures.push(format!(
                "x={picked} arg={arg}: universal {hosted:?} vs direct {direct:?}"
            )),
        }
    }

    conclude(
        2,
        "universal evaluation matches direct evaluation",
        format!("{definite} agreed, {exhausted} exhausted on both sides"),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 3: the successor diagonal escapes every index it is defined on.

#[test]
fn criterion_3_successor_diagonal_escapes() {
    let limits = SWEEP_LIMITS;
    let mut failures = Vec::new();
    let mut definite = 0u32;

    for x in 0..2000u64 {
        let code = nat(x);
        let own = universal_eval(&code, &code, &limits);
        let shifted = diagonal_h(&code, &limits);
        match (own, shifted) {
            (Ok(u), Ok(h)) => {
                definite += 1;
                if h != &u + 1u32 || h == u {
                    failures.push(format!("x={x}: own value {u}, diagonal {h}"));
                }
            }
            (Err(_), Err(_)) => {}
            (own, shifted) => {
                failures.push(format!("x={x}: definedness split {own:?} vs {shifted:?}"))
            }
        }
    }

    conclude(
        3,
        "successor diagonal differs at every defined index",
        format!("{definite} of 2000 indices definite"),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 4: the windowed tier is total on its window and every certificate replays.

#[test]
fn criterion_4_windowed_tier_certificates() {
    let started = Instant::now();
    let space = SpaceBound::new(8).expect("positive window");
    let mut failures = Vec::new();
    let mut halts = 0u32;
    let mut diverges = 0u32;

    for x in 0..500u64 {
        let spec = decode_tm(&nat(x));
        for y in 0..500u64 {
            let input = nat(y);
            match lba_halt_decide(&spec, &input, space) {
                Ok(ExactAnswer::Halts { steps }) => {
                    halts += 1;
                    if !replay_halts(&spec, &input, steps) {
                        failures.push(format!("x={x} y={y}: halt cert {steps} fails replay"));
                    }
                }
                Ok(ExactAnswer::DivergesProven { cycle_start, cycle_len }) => {
                    diverges += 1;
                    if !replay_cycle(&spec, &input, space, cycle_start, cycle_len) {
                        failures.push(format!(
                            "x={x} y={y}: cycle cert ({cycle_start},{cycle_len}) fails replay"
                        ));
                    }
                }
                Err(_) => {} // outside the window's class
            }
        }
    }

    if halts == 0 || diverges == 0 {
        failures.push(format!("degenerate sweep: {halts} halt certs, {diverges} cycle certs"));
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}, budget is 60s"));
    }
    conclude(
        4,
        "every windowed answer carries a replaying certificate",
        format!("{halts} halts + {diverges} divergences over 500x500 in {elapsed:?}"),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 5: the anti-diagonal takes its value exactly on proven non-halters.

#[test]
fn criterion_5_anti_diagonal_alignment() {
    let space = SpaceBound::new(1024).expect("positive window");
    let mut failures = Vec::new();
    let mut values = 0u32;
    let mut markers = 0u32;

    for x in 0..1000u64 {
        let code = nat(x);
        let spec = decode_tm(&code);
        let own = lba_halt_decide(&spec, &code, space);
        match (diagonal_g(&code, space), own) {
            (Ok(GOutcome::Value { output, cycle_start, cycle_len }),
             Ok(ExactAnswer::DivergesProven { cycle_start: cs, cycle_len: cl })) => {
                values += 1;
                if output != 0 || cycle_start != cs || cycle_len != cl {
                    failures.push(format!("x={x}: value arm disagrees with its own certificate"));
                }
            }
            (Ok(GOutcome::DivergesMarker { halt_steps }),
             Ok(ExactAnswer::Halts { steps })) => {
                markers += 1;
                if halt_steps != steps {
                    failures.push(format!("x={x}: marker step {halt_steps} vs halt step {steps}"));
                }
            }
            (Err(a), Err(b)) => {
                if a != b {
                    failures.push(format!("x={x}: refusal split {a:?} vs {b:?}"));
                }
            }
            (g, f) => failures.push(format!("x={x}: arms crossed: {g:?} vs {f:?}")),
        }
    }

    if values == 0 || markers == 0 {
        failures.push(format!("degenerate sweep: {values} values, {markers} markers"));
    }
    conclude(
        5,
        "anti-diagonal value iff proven divergence on own index",
        format!("{values} values + {markers} markers over 1000 indices"),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 6: the accelerated watcher tracks the windowed tier, and the composition
// gate admits finite pipelines while refusing limit-only ones.

#[test]
fn criterion_6_accelerated_watcher() {
    let space = SpaceBound::new(512).expect("positive window");
    let params = AtmParams { budget: 100_000, space };
    let mut failures = Vec::new();
    let mut marked = 0u32;
    let mut proven_unmarked = 0u32;

    for x in 0..500u64 {
        let code = nat(x);
        let exact = lba_halt_decide(&decode_tm(&code), &code, space);
        let verdict = atm_run(&AtmProgram::WatchHalting { index: code.clone() }, &code, &params);
        match (exact, verdict) {
            (Ok(ExactAnswer::Halts { steps }), Ok(AtmVerdict::Marked { step })) => {
                marked += 1;
                if step != steps {
                    failures.push(format!("x={x}: marked at {step}, halt at {steps}"));
                }
            }
            (
                Ok(ExactAnswer::DivergesProven { .. }),
                Ok(AtmVerdict::UnmarkedProven { cert: UnmarkedCert::NeverHalts { .. } }),
            ) => proven_unmarked += 1,
            (Err(_), Ok(_)) => {} // outside the window; budget probe answered instead
            (exact, verdict) => {
                failures.push(format!("x={x}: watcher {verdict:?} against tier {exact:?}"))
            }
        }
    }
    if marked == 0 || proven_unmarked == 0 {
        failures.push(format!("degenerate sweep: {marked} marked, {proven_unmarked} unmarked"));
    }

    // The negated-own-halting pipeline must be refused for its output discipline.
    match negation_pipeline_check(&AtmParams::default()) {
        ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput } => {}
        other => failures.push(format!("negation pipeline not refused: {other:?}")),
    }

    // A table that finalizes its square on every probed input composes.
    match compose_check(&AtmProgram::Table(square_marker()), &AtmParams::default()) {
        ComposeVerdict::Accept { certs } => {
            if certs.len() != AtmParams::default().space.cells() - 1 {
                failures.push(format!("marker pipeline certified {} inputs", certs.len()));
            }
        }
        other => failures.push(format!("marker pipeline refused: {other:?}")),
    }

    // Re-flipping the square is detected on every probed input, not just one.
    for input in 0..3u64 {
        match atm_run(&AtmProgram::Table(square_toggler()), &nat(input), &AtmParams::default()) {
            Err(AtmError::WriteOnceViolation { .. }) => {}
            other => failures.push(format!("toggler on {input} not caught: {other:?}")),
        }
    }

    conclude(
        6,
        "watcher matches the tier; composition gate filters pipelines",
        format!("{marked} marked + {proven_unmarked} proven unmarked over 500 indices"),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 7: the limit-stage decision agrees with the windowed tier under both limit
// rules, and every certified limit stage replays.

#[test]
fn criterion_7_limit_stage_decisions() {
    let space = SpaceBound::new(512).expect("positive window");
    let mut failures = Vec::new();
    let mut decided = 0u32;

    for x in 0..500u64 {
        let code = nat(x);
        let exact = lba_halt_decide(&decode_tm(&code), &code, space);
        for rule in [LimitRule::Limsup, LimitRule::Liminf] {
            match (&exact, ittm_decide_halting(&code, &code, rule, space)) {
                (Ok(answer), Ok(decision)) => {
                    decided += 1;
                    let halts = matches!(answer, ExactAnswer::Halts { .. });
                    if decision.halts != halts {
                        failures.push(format!("x={x} {rule:?}: decision {decision:?}"));
                    }
                    if !replay_decision(&code, &code, space, &decision) {
                        failures.push(format!("x={x} {rule:?}: decision fails replay"));
                    }
                }
                (Err(_), Err(_)) => {}
                (exact, got) => {
                    failures.push(format!("x={x} {rule:?}: definedness split {exact:?} / {got:?}"))
                }
            }
        }
    }
    // Rule invariance over a short stretch; the long sweep above already pins
    // both rules to the same tier answer, so this is the direct-form check.
    for x in 0..50u64 {
        match bias_invariance(&nat(x), &nat(x), space) {
            Ok(true) | Err(_) => {}
            Ok(false) => failures.push(format!("x={x}: limit rules disagree")),
        }
    }
    if decided == 0 {
        failures.push("degenerate sweep: nothing decided".to_owned());
    }

    // Certified limit stages replay, both on the canonical oscillator and
    // across a stretch of decoded tables run to the second limit.
    let osc = IttmSpec::new(blinker(), 0).expect("binary two-state oscillator");
    let clock_one = OrdinalClock::new(1, 0).expect("within cap");
    for (rule, ones_at_limit) in [(LimitRule::Limsup, 1u64), (LimitRule::Liminf, 0u64)] {
        match run_to_clock(&osc, &nat(0), clock_one, rule, DEFAULT_STAGE_BUDGET) {
            Ok(IttmOutcome::Running { ones, limits, .. }) => {
                if ones != ones_at_limit {
                    failures.push(format!("oscillator under {rule:?}: {ones} marks at limit"));
                }
                if !replay_limits(&osc, &nat(0), rule, DEFAULT_STAGE_BUDGET, &limits) {
                    failures.push(format!("oscillator cert under {rule:?} fails replay"));
                }
            }
            other => failures.push(format!("oscillator under {rule:?}: {other:?}")),
        }
    }
    let clock_two = OrdinalClock::new(2, 0).expect("within cap");
    let mut replayed = 0u32;
    for x in 0..200u64 {
        // Only machines the windowed tier proves cyclic can certify a limit
        // stage; a drifter would just march to the stage budget on an
        // ever-growing tape, burning memory to report nothing.
        let code = nat(x);
        let spec = decode_tm(&code);
        if !matches!(
            lba_halt_decide(&spec, &code, SpaceBound::new(64).expect("positive window")),
            Ok(ExactAnswer::DivergesProven { .. })
        ) {
            continue;
        }
        let table = IttmSpec::new(spec, 0).expect("decoded tables are binary");
        for rule in [LimitRule::Limsup, LimitRule::Liminf] {
            match run_to_clock(&table, &nat(x), clock_two, rule, DEFAULT_STAGE_BUDGET) {
                Ok(IttmOutcome::Halted { limits, .. })
                | Ok(IttmOutcome::Running { limits, .. }) => {
                    if !replay_limits(&table, &nat(x), rule, DEFAULT_STAGE_BUDGET, &limits) {
                        failures.push(format!("x={x} {rule:?}: limit certs fail replay"));
                    } else {
                        replayed += limits.len() as u32;
                    }
                }
                Err(_) => {} // no lasso within the stage budget
            }
        }
    }
    if replayed == 0 {
        failures.push("degenerate sweep: no limit certificates produced".to_owned());
    }

    conclude(
        7,
        "limit-stage decisions track the tier and their certs replay",
        format!("{decided} decisions, {replayed} limit certs replayed"),
        failures,
    );
}

// ---------------------------------------------------------------------------
// 8: the ledger holds its designed shape and every claim it makes is backed.

#[test]
fn criterion_8_ledger_and_witnesses() {
    let mut failures = Vec::new();

    if let Err(why) = registry_invariants() {
        failures.push(format!("registry invariant: {why}"));
    }

    use diagforge_core::diagonal::PropertyId::*;
    let designed: &[(&str, &[PropertyId])] = &[
        ("turing-machine", &[OwnHaltingComputable]),
        ("primitive-recursion", &[SelfUniversality]),
        ("total-recursive", &[SelfUniversality]),
        ("accelerating-machine", &[CompositionClosure]),
        ("oracle-machine", &[OwnHaltingComputable]),
        ("transfinite-machine", &[OwnHaltingComputable]),
        (
            "processor-network",
            &[DeterminateFunctions, FaithfulIndexing, OwnHaltingComputable, SelfUniversality],
        ),
        (
            "adiabatic-quantum",
            &[DeterminateFunctions, FaithfulIndexing, OwnHaltingComputable, SelfUniversality],
        ),
    ];

    let rows = registry();
    if rows.len() != designed.len() {
        failures.push(format!("{} models on file, designed {}", rows.len(), designed.len()));
    }
    for (row, (name, missing)) in rows.iter().zip(designed) {
        if row.name != *name {
            failures.push(format!("row order: {} where {name} was designed", row.name));
        }
        if row.missing() != *missing {
            failures.push(format!("{name} missing set {:?}", row.missing()));
        }
        for entry in &row.properties {
            if let PropertyStatus::FailsChecked { check } = &entry.status {
                match run_check(check) {
                    Some(report) if report.passed => {}
                    Some(report) => {
                        failures.push(format!("{name}: refutation {check} failed: {}", report.details))
                    }
                    None => failures.push(format!("{name}: refutation {check} is not a check")),
                }
            }
        }
    }
    let alternate = rows
        .iter()
        .find(|r| r.name == "total-recursive")
        .and_then(|r| r.alternate_coding.as_ref());
    match alternate {
        Some(alt) if alt.missing == vec![FaithfulIndexing] => {}
        other => failures.push(format!("alternate coding of total functions: {other:?}")),
    }

    let audit = capability_audit();
    if !audit.all_passed {
        let broken: Vec<_> =
            audit.checks.iter().filter(|r| !r.passed).map(|r| r.name.clone()).collect();
        failures.push(format!("capability audit broke: {broken:?}"));
    }

    for target in [WitnessTarget::ToyLookupClass, WitnessTarget::ForcedComposition] {
        match contradiction_witness(&target) {
            Ok(transcript) => {
                if transcript.steps.is_empty() || transcript.clashes.is_empty() {
                    failures.push(format!("{target:?}: transcript is hollow"));
                }
                for clash in &transcript.clashes {
                    if clash.model_value == clash.diagonal_value {
                        failures.push(format!(
                            "{target:?}: no inequality at index {}",
                            clash.index
                        ));
                    }
                }
                if transcript.conclusion.is_empty() {
                    failures.push(format!("{target:?}: transcript trails off"));
                }
            }
            Err(refused) => failures.push(format!("{target:?} refused: {refused}")),
        }
    }
    match contradiction_witness(&WitnessTarget::Registered("turing-machine".to_owned())) {
        Err(WitnessRefusal::ModelHonest { .. }) => {}
        other => failures.push(format!("honest model not refused: {other:?}")),
    }

    conclude(
        8,
        "ledger shape, backed refutations, and both contradiction transcripts",
        format!("{} models, {} checks audited", rows.len(), audit.checks.len()),
        failures,
    );
}
