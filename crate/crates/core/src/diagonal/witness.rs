//! Transcripts for the one step the ledger never takes: granting a model
//! every closure property at once and running the diagonal inside it.
//!
//! Each witness builds the construction from parts the build has actually
//! exercised, then derives the resulting self-inequality in the open. Honest
//! models, meaning every row the registry actually carries, are refused: with
//! a property already conceded, the construction stays outside the class and
//! there is nothing to witness.

use serde::Serialize;

use super::j::{build_j, DiagEval, IndexSet, JOutcome, KResult, OutputSpace, ValidationReport};
use super::registry::registry;
use crate::atm::{negation_pipeline_check, AtmParams, ComposeReject, ComposeVerdict};
use crate::halting::{halting_f, FValue, SpaceBound, Tier};
use crate::nat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessTarget {
    /// A four-function lookup class granted every property; small enough that
    /// the whole contradiction is computed, nothing stays schematic.
    ToyLookupClass,
    /// The accelerated model with its one conceded property forced back on.
    ForcedComposition,
    /// Any model as the registry actually records it.
    Registered(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    pub label: String,
    pub detail: String,
}

/// One row of the final inequality: what the model says at an index versus
/// what the construction built from the model says at the same index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalClash {
    pub index: String,
    pub model_value: String,
    pub diagonal_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessTranscript {
    pub target: String,
    pub flawed_claim: String,
    pub steps: Vec<WitnessStep>,
    pub clashes: Vec<DiagonalClash>,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessRefusal {
    #[error("model {name} already concedes properties {missing:?}; the construction stays outside the class")]
    ModelHonest { name: String, missing: Vec<u8> },
    #[error("no model named {name} is on file")]
    UnknownModel { name: String },
}

/// Runs the requested witness. Registered models are always refused, because
/// every row on file concedes a property; the two synthetic targets carry a
/// deliberately flawed claim and produce the transcript that punishes it.
pub fn contradiction_witness(
    target: &WitnessTarget,
) -> Result<WitnessTranscript, WitnessRefusal> {
    match target {
        WitnessTarget::ToyLookupClass => Ok(toy_lookup_witness()),
        WitnessTarget::ForcedComposition => Ok(forced_composition_witness()),
        WitnessTarget::Registered(name) => {
            let rows = registry();
            let row = rows
                .iter()
                .find(|r| r.name == *name)
                .ok_or_else(|| WitnessRefusal::UnknownModel { name: name.clone() })?;
            Err(WitnessRefusal::ModelHonest {
                name: row.name.clone(),
                missing: row.missing().iter().map(|p| p.number()).collect(),
            })
        }
    }
}

fn step(label: &str, detail: String) -> WitnessStep {
    WitnessStep { label: label.to_owned(), detail }
}

/// Four total functions on {0,1,2,3}, by lookup table.
const TOY_TABLES: [[u64; 4]; 4] = [[1, 2, 3, 0], [0, 0, 0, 0], [0, 1, 2, 3], [3, 2, 1, 0]];

fn toy_lookup_witness() -> WitnessTranscript {
    let outputs: Vec<_> = (0u64..4).map(nat).collect();
    let spec = build_j(
        "toy-diagonal",
        IndexSet::Finite((0u64..4).map(nat).collect()),
        OutputSpace::Finite(outputs),
        nat(0),
        Box::new(|y| {
            let y = u64::try_from(y).expect("toy outputs fit");
            KResult::Value(nat((y + 1) % 4))
        }),
        Box::new(|x| {
            let x = u64::try_from(x).expect("toy indices fit");
            DiagEval::Value(nat(TOY_TABLES[x as usize][x as usize]))
        }),
        0,
    )
    .expect("adding one modulo four fixes no point");

    let mut steps = vec![step(
        "class",
        format!(
            "four functions on {{0,1,2,3}} by lookup: {}",
            TOY_TABLES
                .iter()
                .enumerate()
                .map(|(i, t)| format!("f{i}={t:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )];
    steps.push(step(
        "post-map",
        match spec.validation() {
            ValidationReport::Exhaustive { outputs_checked } => format!(
                "y + 1 modulo 4; all {outputs_checked} outputs checked, no fixed point"
            ),
            ValidationReport::Sampled { .. } => unreachable!("toy output space is finite"),
        },
    ));
    steps.push(step(
        "claim",
        "the class is granted every closure property, so the diagonal built from it \
         must itself be one of the four functions"
            .to_owned(),
    ));

    let mut clashes = Vec::new();
    for d in 0u64..4 {
        let at = TOY_TABLES[d as usize][d as usize];
        match spec.apply(&nat(d)) {
            JOutcome::Mapped { from, to } => {
                assert_eq!(from, nat(at), "lookup and schema disagree");
                steps.push(step(
                    "diagonal",
                    format!("at index {d}: f{d}({d}) = {at}, so the construction answers {to}"),
                ));
                clashes.push(DiagonalClash {
                    index: d.to_string(),
                    model_value: at.to_string(),
                    diagonal_value: to.to_string(),
                });
            }
            other => unreachable!("toy diagonal is total: {other:?}"),
        }
    }

    WitnessTranscript {
        target: "toy-lookup-class".to_owned(),
        flawed_claim: "a four-function class closed under its own diagonal construction"
            .to_owned(),
        steps,
        clashes,
        conclusion: "the construction differs from every member at that member's own index, \
                     so it lies outside the class; were it member d, the value at d would \
                     have to equal its own successor modulo 4"
            .to_owned(),
    }
}

fn forced_composition_witness() -> WitnessTranscript {
    let params = AtmParams::default();
    let mut steps = Vec::new();

    let refusal = match negation_pipeline_check(&params) {
        ComposeVerdict::Reject { reason: ComposeReject::LimitOnlyOutput } => {
            "solver stages answer on the output square only at the limit of the run, so the \
             gate refuses to hand the square to a second stage"
        }
        other => unreachable!("the pipeline gate is deterministic: {other:?}"),
    };
    steps.push(step("checked refusal", refusal.to_owned()));
    steps.push(step(
        "forced claim",
        "composition is asserted anyway: any stage's square may feed a negating stage"
            .to_owned(),
    ));

    let space = SpaceBound::default();
    let mut sampled = Vec::new();
    for x in 0u64..12 {
        let xn = nat(x);
        if let Ok(f) = halting_f(&xn, &xn, Tier::Exact { space }) {
            let (f, flipped) = match f {
                FValue::One { .. } => (1, 0),
                FValue::Zero { .. } => (0, 1),
                FValue::Unknown { .. } => unreachable!("exact tier is definite"),
            };
            sampled.push(format!("x={x}: square {f}, negated {flipped}"));
        }
    }
    steps.push(step(
        "sampled pipeline",
        format!(
            "the solver square followed by the forced negating stage, on proven points: {}",
            sampled.join("; ")
        ),
    ));
    steps.push(step(
        "self-application",
        "under the claim the negated pipeline is itself an accelerated program, so it has \
         an index d in the same numbering, and its own square at input d shows the \
         self-halting answer f(d,d)"
            .to_owned(),
    ));

    WitnessTranscript {
        target: "forced-composition".to_owned(),
        flawed_claim: "accelerated stages compose, in particular with a negating stage"
            .to_owned(),
        steps,
        clashes: vec![DiagonalClash {
            index: "d".to_owned(),
            model_value: "f(d,d)".to_owned(),
            diagonal_value: "1 - f(d,d)".to_owned(),
        }],
        conclusion: "the pipeline marks its square on input d exactly when it leaves it \
                     unmarked; a value equal to its own negation is the self-inequality \
                     the gate's refusal was protecting against"
            .to_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_witness_computes_all_four_clashes() {
        let transcript = contradiction_witness(&WitnessTarget::ToyLookupClass).unwrap();
        assert_eq!(transcript.clashes.len(), 4);
        let expected = [("0", "1", "2"), ("1", "0", "1"), ("2", "2", "3"), ("3", "0", "1")];
        for (clash, (i, at, to)) in transcript.clashes.iter().zip(expected) {
            assert_eq!(clash.index, i);
            assert_eq!(clash.model_value, at);
            assert_eq!(clash.diagonal_value, to);
            assert_ne!(clash.model_value, clash.diagonal_value);
        }
        assert!(transcript.steps.iter().any(|s| s.label == "post-map"));
        assert!(!transcript.conclusion.is_empty());
    }

    #[test]
    fn forced_witness_records_the_checked_refusal_before_forcing() {
        let transcript = contradiction_witness(&WitnessTarget::ForcedComposition).unwrap();
        assert_eq!(transcript.steps[0].label, "checked refusal");
        assert_eq!(transcript.steps[1].label, "forced claim");
        assert!(transcript
            .steps
            .iter()
            .any(|s| s.label == "sampled pipeline" && s.detail.contains("x=0: square 1, negated 0")));
        assert_eq!(transcript.clashes.len(), 1);
        assert_eq!(transcript.clashes[0].model_value, "f(d,d)");
        assert_eq!(transcript.clashes[0].diagonal_value, "1 - f(d,d)");
    }

    #[test]
    fn honest_models_are_refused_with_their_concessions() {
        let err = contradiction_witness(&WitnessTarget::Registered("turing-machine".to_owned()))
            .unwrap_err();
        assert_eq!(
            err,
            WitnessRefusal::ModelHonest { name: "turing-machine".to_owned(), missing: vec![3] }
        );
        for row in registry() {
            let err = contradiction_witness(&WitnessTarget::Registered(row.name.clone()))
                .unwrap_err();
            assert!(matches!(err, WitnessRefusal::ModelHonest { .. }));
        }
    }

    #[test]
    fn unknown_models_are_a_distinct_refusal() {
        let err =
            contradiction_witness(&WitnessTarget::Registered("lambda-calculus".to_owned()))
                .unwrap_err();
        assert_eq!(err, WitnessRefusal::UnknownModel { name: "lambda-calculus".to_owned() });
    }

    #[test]
    fn transcripts_serialize_with_stable_field_order() {
        let transcript = contradiction_witness(&WitnessTarget::ToyLookupClass).unwrap();
        let json = serde_json::to_string(&transcript).unwrap();
        let order = ["\"target\"", "\"flawed_claim\"", "\"steps\"", "\"clashes\"", "\"conclusion\""];
        let positions: Vec<usize> = order.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}
