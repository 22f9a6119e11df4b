//! Report values and their two renderings.
//!
//! JSON is the machine interface: every subcommand builds one of these values
//! and serializes it with a fixed field order. The text form is a reading of
//! the same value, never a separate computation.

use serde::Serialize;

use diagforge_core::atm::{AtmVerdict, ComposeReject, ComposeVerdict, UnmarkedCert};
use diagforge_core::diagonal::{ModelRow, PropertyId, PropertyStatus, WitnessTranscript};
use diagforge_core::halting::{ExactAnswer, GOutcome, SemiAnswer};
use diagforge_core::ittm::{IttmHaltDecision, IttmOutcome, LimitCert, LimitRule};
use diagforge_core::sweep::{SweepEntry, SweepStatus, SweepSummary, SweepTarget};
use diagforge_core::tm::RunOutcome;

use crate::config::Format;

pub trait Render: Serialize {
    fn text(&self) -> String;
}

pub fn emit<R: Render>(report: &R, format: Format) {
    let rendered = match format {
        Format::Json => serde_json::to_string(report).expect("reports serialize"),
        Format::Text => report.text(),
    };
    use std::io::Write;
    if let Err(e) = writeln!(std::io::stdout().lock(), "{rendered}") {
        // A reader that hung up is not an error; anything else still is.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write report: {e}");
        std::process::exit(1);
    }
}

#[derive(Serialize)]
pub struct PrDecodeReport {
    pub index: String,
    pub term: String,
}

impl Render for PrDecodeReport {
    fn text(&self) -> String {
        self.term.clone()
    }
}

#[derive(Serialize)]
pub struct PrEvalReport {
    pub index: String,
    pub arg: String,
    pub value: String,
}

impl Render for PrEvalReport {
    fn text(&self) -> String {
        self.value.clone()
    }
}

#[derive(Serialize)]
pub struct PrHReport {
    pub index: String,
    pub value: String,
}

impl Render for PrHReport {
    fn text(&self) -> String {
        self.value.clone()
    }
}

#[derive(Serialize)]
pub struct TmRunReport {
    pub input: String,
    pub budget: u64,
    pub outcome: RunOutcome,
}

impl Render for TmRunReport {
    fn text(&self) -> String {
        match &self.outcome {
            RunOutcome::Halted { output, steps } => {
                format!("halted: output {output} after {steps} steps")
            }
            RunOutcome::Diverges { cycle_start, cycle_len } => {
                format!("proven divergent: cycle from step {cycle_start}, period {cycle_len}")
            }
            RunOutcome::Unknown { budget } => format!("no halt within budget {budget}"),
        }
    }
}

/// Certificate payloads for the `{answer, certificate}` reports. Untagged: the
/// field names alone identify the kind.
#[derive(Serialize)]
#[serde(untagged)]
pub enum Certificate {
    Steps { steps: u64 },
    Cycle { cycle_start: u64, cycle_len: u64 },
    Budget { budget: u64 },
    HaltSteps { halt_steps: u64 },
}

#[derive(Serialize)]
pub struct HaltReport {
    pub x: String,
    pub y: String,
    pub tier: &'static str,
    pub answer: &'static str,
    pub certificate: Certificate,
}

impl HaltReport {
    pub fn semi(x: String, y: String, answer: &SemiAnswer) -> HaltReport {
        let (answer, certificate) = match answer {
            SemiAnswer::Halts { steps } => ("halts", Certificate::Steps { steps: *steps }),
            SemiAnswer::Unknown { budget } => {
                ("unknown", Certificate::Budget { budget: *budget })
            }
        };
        HaltReport { x, y, tier: "semi", answer, certificate }
    }

    pub fn exact(x: String, y: String, answer: &ExactAnswer) -> HaltReport {
        let (answer, certificate) = match answer {
            ExactAnswer::Halts { steps } => ("halts", Certificate::Steps { steps: *steps }),
            ExactAnswer::DivergesProven { cycle_start, cycle_len } => (
                "diverges_proven",
                Certificate::Cycle { cycle_start: *cycle_start, cycle_len: *cycle_len },
            ),
        };
        HaltReport { x, y, tier: "exact", answer, certificate }
    }
}

impl Render for HaltReport {
    fn text(&self) -> String {
        match &self.certificate {
            Certificate::Steps { steps } => format!("halts after {steps} steps"),
            Certificate::Cycle { cycle_start, cycle_len } => format!(
                "provably never halts: cycle from step {cycle_start}, period {cycle_len}"
            ),
            Certificate::Budget { budget } => format!("unknown within budget {budget}"),
            Certificate::HaltSteps { .. } => unreachable!("not a halting certificate"),
        }
    }
}

#[derive(Serialize)]
pub struct DiagGReport {
    pub x: String,
    pub answer: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<u64>,
    pub certificate: Certificate,
}

impl DiagGReport {
    pub fn new(x: String, outcome: &GOutcome) -> DiagGReport {
        match outcome {
            GOutcome::Value { output, cycle_start, cycle_len } => DiagGReport {
                x,
                answer: "value",
                output: Some(*output),
                certificate: Certificate::Cycle {
                    cycle_start: *cycle_start,
                    cycle_len: *cycle_len,
                },
            },
            GOutcome::DivergesMarker { halt_steps } => DiagGReport {
                x,
                answer: "diverges_marker",
                output: None,
                certificate: Certificate::HaltSteps { halt_steps: *halt_steps },
            },
        }
    }
}

impl Render for DiagGReport {
    fn text(&self) -> String {
        match &self.certificate {
            Certificate::Cycle { cycle_start, cycle_len } => format!(
                "g = {} (machine {} provably never halts on its own index: cycle from step {cycle_start}, period {cycle_len})",
                self.output.unwrap_or(0),
                self.x
            ),
            Certificate::HaltSteps { halt_steps } => format!(
                "g diverges: machine {} halts on its own index after {halt_steps} steps",
                self.x
            ),
            _ => unreachable!("g certificates are cycles or halt steps"),
        }
    }
}

#[derive(Serialize)]
pub struct AtmRunReport {
    pub input: String,
    pub verdict: AtmVerdict,
}

fn unmarked_cert_text(cert: &UnmarkedCert) -> String {
    match cert {
        UnmarkedCert::HaltedUnmarked { steps } => {
            format!("the table halts clean after {steps} steps")
        }
        UnmarkedCert::NeverMarks { cycle_start, cycle_len } => format!(
            "the windowed run cycles from step {cycle_start} with period {cycle_len}, square untouched"
        ),
        UnmarkedCert::NeverHalts { cycle_start, cycle_len } => format!(
            "the watched machine provably never halts (cycle from step {cycle_start}, period {cycle_len})"
        ),
    }
}

impl Render for AtmRunReport {
    fn text(&self) -> String {
        match &self.verdict {
            AtmVerdict::Marked { step } => format!("marked at internal step {step}"),
            AtmVerdict::UnmarkedProven { cert } => {
                format!("provably never marked: {}", unmarked_cert_text(cert))
            }
            AtmVerdict::UnmarkedAtBudget { budget } => {
                format!("unmarked within budget {budget}, nothing proven")
            }
        }
    }
}

#[derive(Serialize)]
pub struct AtmComposeReport {
    pub first_stage: String,
    pub second_stage: String,
    pub verdict: ComposeVerdict,
}

impl Render for AtmComposeReport {
    fn text(&self) -> String {
        match &self.verdict {
            ComposeVerdict::Accept { certs } => format!(
                "composition accepted: all {} probed inputs finalize the square",
                certs.len()
            ),
            ComposeVerdict::Reject { reason } => match reason {
                ComposeReject::LimitOnlyOutput => {
                    "composition rejected: the first stage's square settles only in the limit; \
                     no internal step bounds it"
                        .to_owned()
                }
                ComposeReject::Unresolved { input, budget } => format!(
                    "composition rejected: input {input} unresolved within budget {budget}"
                ),
                ComposeReject::WriteOnceViolation { input, step } => format!(
                    "composition rejected: write-once violated on input {input} at step {step}"
                ),
            },
        }
    }
}

fn rule_name(rule: LimitRule) -> &'static str {
    match rule {
        LimitRule::Limsup => "limsup",
        LimitRule::Liminf => "liminf",
    }
}

#[derive(Serialize)]
pub struct IttmDecideReport {
    pub x: String,
    pub decision: IttmHaltDecision,
}

impl Render for IttmDecideReport {
    fn text(&self) -> String {
        use diagforge_core::ittm::FlagHistory;
        let flag = match self.decision.flag {
            FlagHistory::SetAt { step } => format!("flag set at step {step}"),
            FlagHistory::NeverSet { cycle_start, cycle_len } => format!(
                "flag never set (cycle from step {cycle_start}, period {cycle_len})"
            ),
        };
        format!(
            "halts: {}; rule {}; {flag}; read at {}",
            self.decision.halts,
            rule_name(self.decision.rule),
            self.decision.read_at
        )
    }
}

#[derive(Serialize)]
pub struct IttmLimitReport {
    pub input: String,
    pub rule: LimitRule,
    pub stage_budget: u64,
    pub outcome: IttmOutcome,
}

fn limit_lines(certs: &[LimitCert], out: &mut String) {
    for c in certs {
        out.push_str(&format!(
            "\n  limit stage {}: cycle from step {}, period {}",
            c.stage, c.cycle_start, c.cycle_len
        ));
    }
}

impl Render for IttmLimitReport {
    fn text(&self) -> String {
        let mut out = match &self.outcome {
            IttmOutcome::Halted { at, output, .. } => {
                format!("halted at {at} with output {output}")
            }
            IttmOutcome::Running { at, state, head, ones, .. } => {
                format!("running at {at}: state {state}, head {head}, {ones} marks")
            }
        };
        let certs = match &self.outcome {
            IttmOutcome::Halted { limits, .. } | IttmOutcome::Running { limits, .. } => limits,
        };
        limit_lines(certs, &mut out);
        out
    }
}

fn property_id_str(id: PropertyId) -> &'static str {
    match id {
        PropertyId::DeterminateFunctions => "determinate_functions",
        PropertyId::FaithfulIndexing => "faithful_indexing",
        PropertyId::OwnHaltingComputable => "own_halting_computable",
        PropertyId::SelfUniversality => "self_universality",
        PropertyId::PostMapComputable => "post_map_computable",
        PropertyId::IndexSetDecidable => "index_set_decidable",
        PropertyId::CompositionClosure => "composition_closure",
    }
}

#[derive(Serialize)]
pub struct PropertyReport {
    pub id: &'static str,
    pub number: u8,
    pub status: PropertyStatus,
    pub justification: String,
}

#[derive(Serialize)]
pub struct AltCodingReport {
    pub label: String,
    pub note: String,
    pub missing: Vec<&'static str>,
    pub evidence: Vec<String>,
}

#[derive(Serialize)]
pub struct ModelReport {
    pub model: String,
    pub description: String,
    pub properties: Vec<PropertyReport>,
    pub missing: Vec<&'static str>,
    pub demonstrations: Vec<String>,
    pub literature: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate_coding: Option<AltCodingReport>,
}

#[derive(Serialize)]
pub struct LedgerReport {
    pub models: Vec<ModelReport>,
}

fn justification(status: &PropertyStatus) -> String {
    match status {
        PropertyStatus::HoldsChecked { check } => format!("verified by check {check}"),
        PropertyStatus::FailsChecked { check } => format!("refuted by check {check}"),
        PropertyStatus::HoldsDeclared { citation } | PropertyStatus::FailsDeclared { citation } => {
            citation.clone()
        }
    }
}

pub fn ledger_report(rows: Vec<ModelRow>) -> LedgerReport {
    let models = rows
        .into_iter()
        .map(|row| {
            let properties = row
                .properties
                .iter()
                .map(|e| PropertyReport {
                    id: property_id_str(e.property),
                    number: e.property.number(),
                    justification: justification(&e.status),
                    status: e.status.clone(),
                })
                .collect();
            let missing = row.missing().into_iter().map(property_id_str).collect();
            let alternate_coding = row.alternate_coding.as_ref().map(|alt| AltCodingReport {
                label: alt.label.clone(),
                note: alt.note.clone(),
                missing: alt.missing.iter().copied().map(property_id_str).collect(),
                evidence: alt.evidence.clone(),
            });
            ModelReport {
                model: row.name.clone(),
                description: row.description.clone(),
                properties,
                missing,
                demonstrations: row.demonstrations.clone(),
                literature: row.literature.clone(),
                alternate_coding,
            }
        })
        .collect();
    LedgerReport { models }
}

impl Render for LedgerReport {
    fn text(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.models.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            out.push_str(&format!("{} — {}", m.model, m.description));
            out.push_str(&format!("\n  missing: {}", m.missing.join(", ")));
            for p in &m.properties {
                let verdict = if p.status.holds() { "holds" } else { "fails" };
                out.push_str(&format!(
                    "\n  {} {:<24} {:<6} {}",
                    p.number, p.id, verdict, p.justification
                ));
            }
            if !m.demonstrations.is_empty() {
                out.push_str(&format!("\n  demonstrations: {}", m.demonstrations.join(", ")));
            }
            if let Some(alt) = &m.alternate_coding {
                out.push_str(&format!(
                    "\n  alternate coding {}: missing {}; evidence {}",
                    alt.label,
                    alt.missing.join(", "),
                    alt.evidence.join(", ")
                ));
                out.push_str(&format!("\n    {}", alt.note));
            }
        }
        out
    }
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub model: String,
    pub transcript: WitnessTranscript,
}

impl Render for WitnessReport {
    fn text(&self) -> String {
        let t = &self.transcript;
        let mut out = format!("target: {}\nclaim: {}", t.target, t.flawed_claim);
        for (i, s) in t.steps.iter().enumerate() {
            out.push_str(&format!("\n  {}. {}: {}", i + 1, s.label, s.detail));
        }
        if !t.clashes.is_empty() {
            out.push_str("\nclashes:");
            for c in &t.clashes {
                out.push_str(&format!(
                    "\n  index {}: model says {}, diagonal says {}",
                    c.index, c.model_value, c.diagonal_value
                ));
            }
        }
        out.push_str(&format!("\nconclusion: {}", t.conclusion));
        out
    }
}

#[derive(Serialize)]
pub struct SampleInfo {
    pub seed: u64,
    pub requested: u64,
    pub taken: u64,
}

#[derive(Serialize)]
pub struct SweepCliReport {
    pub target: SweepTarget,
    pub start: u64,
    pub end: u64,
    pub sample: Option<SampleInfo>,
    pub summary: SweepSummary,
    pub entries: Vec<SweepEntry>,
}

fn status_name(status: SweepStatus) -> &'static str {
    match status {
        SweepStatus::Agree => "agree",
        SweepStatus::Disagree => "disagree",
        SweepStatus::Unknown => "unknown",
        SweepStatus::OutOfSpace => "out-of-space",
    }
}

impl Render for SweepCliReport {
    fn text(&self) -> String {
        let mut out = format!("sweep {} over [{}, {})", self.target, self.start, self.end);
        if let Some(s) = &self.sample {
            out.push_str(&format!(
                "\nsampled {} of {} indices with seed {}",
                s.taken,
                self.end - self.start,
                s.seed
            ));
        }
        out.push_str(&format!(
            "\nagree {}  disagree {}  unknown {}  out-of-space {}",
            self.summary.agree, self.summary.disagree, self.summary.unknown,
            self.summary.out_of_space
        ));
        for e in self.entries.iter().filter(|e| e.status != SweepStatus::Agree) {
            out.push_str(&format!(
                "\n  {} {}: {}",
                e.index,
                status_name(e.status),
                e.detail
            ));
        }
        out
    }
}
