//! The capability ledger: which closure properties each model on file has.
//!
//! The schema in `j` needs a handful of things from a model before the
//! diagonal turns into a contradiction: honest indexing, self-evaluation, a
//! post-map, a decidable guard, composition. No model on file has all of
//! them, and the ledger records, per model, which one gives way. Each status
//! is either backed by a named check from this build or declared with a
//! citation to published work; the two are never mixed in one entry.

use serde::Serialize;

use super::checks::check_names;

/// The closure properties the diagonal schema consumes, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyId {
    /// Each index names one determinate function of naturals.
    DeterminateFunctions,
    /// Every index names a member of the intended class.
    FaithfulIndexing,
    /// The model computes its own two-argument halting function.
    OwnHaltingComputable,
    /// Some machine of the model evaluates any index on any argument.
    SelfUniversality,
    /// The model computes a fixed-point-free map on outputs.
    PostMapComputable,
    /// The model decides membership of the construction's guard set.
    IndexSetDecidable,
    /// Functions of the model compose without leaving the model.
    CompositionClosure,
}

impl PropertyId {
    pub const ALL: [PropertyId; 7] = [
        PropertyId::DeterminateFunctions,
        PropertyId::FaithfulIndexing,
        PropertyId::OwnHaltingComputable,
        PropertyId::SelfUniversality,
        PropertyId::PostMapComputable,
        PropertyId::IndexSetDecidable,
        PropertyId::CompositionClosure,
    ];

    /// Position in the canonical order, counting from 1.
    pub fn number(self) -> u8 {
        PropertyId::ALL.iter().position(|p| *p == self).expect("member of ALL") as u8 + 1
    }

    pub fn blurb(self) -> &'static str {
        match self {
            PropertyId::DeterminateFunctions => {
                "each index names one determinate function of naturals"
            }
            PropertyId::FaithfulIndexing => "every index names a member of the intended class",
            PropertyId::OwnHaltingComputable => {
                "the model computes its own two-argument halting function"
            }
            PropertyId::SelfUniversality => {
                "some machine of the model evaluates any index on any argument"
            }
            PropertyId::PostMapComputable => {
                "the model computes a fixed-point-free map on outputs"
            }
            PropertyId::IndexSetDecidable => {
                "the model decides membership of the construction's guard set"
            }
            PropertyId::CompositionClosure => {
                "functions of the model compose without leaving the model"
            }
        }
    }
}

/// One audited claim. Checked statuses name a check this build can run;
/// declared statuses carry a citation into published literature instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PropertyStatus {
    HoldsChecked { check: String },
    HoldsDeclared { citation: String },
    FailsChecked { check: String },
    FailsDeclared { citation: String },
}

impl PropertyStatus {
    pub fn holds(&self) -> bool {
        matches!(self, PropertyStatus::HoldsChecked { .. } | PropertyStatus::HoldsDeclared { .. })
    }

    pub fn check_name(&self) -> Option<&str> {
        match self {
            PropertyStatus::HoldsChecked { check } | PropertyStatus::FailsChecked { check } => {
                Some(check)
            }
            _ => None,
        }
    }

    pub fn citation(&self) -> Option<&str> {
        match self {
            PropertyStatus::HoldsDeclared { citation }
            | PropertyStatus::FailsDeclared { citation } => Some(citation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyEntry {
    pub property: PropertyId,
    pub status: PropertyStatus,
}

/// A second way of indexing the same class that shifts which property gives
/// way. Only the failing side is re-recorded; the evidence names checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternateCoding {
    pub label: String,
    pub note: String,
    pub missing: Vec<PropertyId>,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelRow {
    pub name: String,
    pub description: String,
    /// General literature for the model as a whole, beyond per-status citations.
    pub literature: Vec<String>,
    pub properties: Vec<PropertyEntry>,
    /// Checks that exhibit the model's characteristic strength rather than
    /// auditing a single property.
    pub demonstrations: Vec<String>,
    pub alternate_coding: Option<AlternateCoding>,
}

impl ModelRow {
    pub fn missing(&self) -> Vec<PropertyId> {
        self.properties.iter().filter(|e| !e.status.holds()).map(|e| e.property).collect()
    }

    pub fn status_of(&self, id: PropertyId) -> &PropertyStatus {
        &self.properties.iter().find(|e| e.property == id).expect("all seven present").status
    }
}

const TURING_1936: &str =
    "A. M. Turing, On Computable Numbers, with an Application to the Entscheidungsproblem, 1936";
const TURING_1939: &str = "A. M. Turing, Systems of Logic Based on Ordinals, 1939";
const PETER_1967: &str = "R. Peter, Recursive Functions, 3rd edition, 1967";
const ROGERS_1967: &str =
    "H. Rogers, Theory of Recursive Functions and Effective Computability, 1967";
const ODIFREDDI_1989: &str = "P. Odifreddi, Classical Recursion Theory, 1989";
const COPELAND_2002: &str = "B. J. Copeland, Accelerating Turing Machines, Minds and Machines 12, 2002";
const HAMKINS_LEWIS_2000: &str =
    "J. D. Hamkins and A. Lewis, Infinite Time Turing Machines, Journal of Symbolic Logic 65, 2000";
const SIEGELMANN_SONTAG_1994: &str =
    "H. T. Siegelmann and E. D. Sontag, Analog Computation via Neural Networks, Theoretical Computer Science 131, 1994";
const HAGAR_KOROLEV_2007: &str =
    "A. Hagar and A. Korolev, Quantum Hypercomputation: Hype or Computation?, Philosophy of Science 74, 2007";

fn entries(statuses: [PropertyStatus; 7]) -> Vec<PropertyEntry> {
    PropertyId::ALL
        .iter()
        .zip(statuses)
        .map(|(property, status)| PropertyEntry { property: *property, status })
        .collect()
}

fn holds_checked(check: &str) -> PropertyStatus {
    PropertyStatus::HoldsChecked { check: check.to_owned() }
}

fn holds_declared(citation: &str) -> PropertyStatus {
    PropertyStatus::HoldsDeclared { citation: citation.to_owned() }
}

fn fails_checked(check: &str) -> PropertyStatus {
    PropertyStatus::FailsChecked { check: check.to_owned() }
}

fn fails_declared(citation: &str) -> PropertyStatus {
    PropertyStatus::FailsDeclared { citation: citation.to_owned() }
}

/// The eight models on file, in presentation order.
pub fn registry() -> Vec<ModelRow> {
    vec![
        ModelRow {
            name: "turing-machine".to_owned(),
            description: "Finite tables over an unbounded tape under the unary conventions; \
                          the numbering reaches every table and every table has a code."
                .to_owned(),
            literature: vec![TURING_1936.to_owned()],
            properties: entries([
                holds_checked("tm-tier-agreement"),
                holds_checked("tm-code-roundtrip"),
                fails_declared(TURING_1936),
                holds_declared(TURING_1936),
                holds_checked("tm-basic-kit"),
                holds_checked("tm-basic-kit"),
                holds_declared(ROGERS_1967),
            ]),
            demonstrations: vec!["g-escape-sweep".to_owned()],
            alternate_coding: None,
        },
        ModelRow {
            name: "primitive-recursion".to_owned(),
            description: "The calculus of zero, successor, projections, composition and \
                          primitive recursion; every term is total and the numbering of \
                          terms is a bijection."
                .to_owned(),
            literature: vec![PETER_1967.to_owned()],
            properties: entries([
                holds_checked("pr-eval-agreement"),
                holds_checked("pr-code-roundtrip"),
                holds_checked("pr-constant-one"),
                fails_checked("pr-diagonal-sweep"),
                holds_checked("pr-successor-term"),
                holds_checked("pr-constant-one"),
                holds_checked("pr-composition"),
            ]),
            demonstrations: vec![],
            alternate_coding: None,
        },
        ModelRow {
            name: "total-recursive".to_owned(),
            description: "Everywhere-defined computable functions, indexed so that every \
                          index names a total function; audited through the calculus \
                          fragment, whose escape argument applies to any such indexing."
                .to_owned(),
            literature: vec![ODIFREDDI_1989.to_owned()],
            properties: entries([
                holds_checked("pr-eval-agreement"),
                holds_checked("pr-code-roundtrip"),
                holds_checked("pr-constant-one"),
                fails_checked("pr-diagonal-sweep"),
                holds_checked("pr-successor-term"),
                holds_checked("pr-constant-one"),
                holds_checked("pr-composition"),
            ]),
            demonstrations: vec![],
            alternate_coding: Some(AlternateCoding {
                label: "partial-host-indices".to_owned(),
                note: "Indexing the class by host machine tables instead keeps an index \
                       for every member but lets provably partial indices through, so \
                       faithfulness is what gives way under this coding."
                    .to_owned(),
                missing: vec![PropertyId::FaithfulIndexing],
                evidence: vec!["tm-partial-index-witness".to_owned()],
            }),
        },
        ModelRow {
            name: "accelerating-machine".to_owned(),
            description: "Ordinary tables stepped against a halving schedule with a \
                          write-once answer square; the whole run fits in finite wall \
                          time, and the square answers halting questions."
                .to_owned(),
            literature: vec![COPELAND_2002.to_owned()],
            properties: entries([
                holds_declared(COPELAND_2002),
                holds_checked("tm-code-roundtrip"),
                holds_checked("atm-halting-solver"),
                holds_declared(COPELAND_2002),
                holds_checked("tm-basic-kit"),
                holds_checked("tm-basic-kit"),
                fails_checked("atm-compose-reject"),
            ]),
            demonstrations: vec!["atm-write-once".to_owned()],
            alternate_coding: None,
        },
        ModelRow {
            name: "oracle-machine".to_owned(),
            description: "Tables extended with query states whose answers come from a \
                          halting oracle; the query is answered in one step and the run \
                          continues as an ordinary table."
                .to_owned(),
            literature: vec![TURING_1939.to_owned(), ROGERS_1967.to_owned()],
            properties: entries([
                holds_declared(TURING_1939),
                holds_declared(ROGERS_1967),
                fails_declared(ROGERS_1967),
                holds_declared(ROGERS_1967),
                holds_checked("tm-basic-kit"),
                holds_checked("tm-basic-kit"),
                holds_declared(ROGERS_1967),
            ]),
            demonstrations: vec!["omachine-negation-demo".to_owned()],
            alternate_coding: None,
        },
        ModelRow {
            name: "transfinite-machine".to_owned(),
            description: "Binary tables that keep stepping past every finite stage, with \
                          cellwise limits taken at each boundary and computation \
                          continuing from the limit configuration."
                .to_owned(),
            literature: vec![HAMKINS_LEWIS_2000.to_owned()],
            properties: entries([
                holds_declared(HAMKINS_LEWIS_2000),
                holds_declared(HAMKINS_LEWIS_2000),
                fails_declared(HAMKINS_LEWIS_2000),
                holds_declared(HAMKINS_LEWIS_2000),
                holds_checked("tm-basic-kit"),
                holds_checked("tm-basic-kit"),
                holds_declared(HAMKINS_LEWIS_2000),
            ]),
            demonstrations: vec!["ittm-halt-agreement".to_owned(), "ittm-rule-bias".to_owned()],
            alternate_coding: None,
        },
        ModelRow {
            name: "processor-network".to_owned(),
            description: "Networks of simple processors with real-valued weights or \
                          unboundedly growing structure; recorded from the literature, \
                          with no executable fragment here."
                .to_owned(),
            literature: vec![SIEGELMANN_SONTAG_1994.to_owned(), COPELAND_2002.to_owned()],
            properties: entries([
                fails_declared(SIEGELMANN_SONTAG_1994),
                fails_declared(SIEGELMANN_SONTAG_1994),
                fails_declared(SIEGELMANN_SONTAG_1994),
                fails_declared(SIEGELMANN_SONTAG_1994),
                holds_declared(SIEGELMANN_SONTAG_1994),
                holds_declared(SIEGELMANN_SONTAG_1994),
                holds_declared(SIEGELMANN_SONTAG_1994),
            ]),
            demonstrations: vec![],
            alternate_coding: None,
        },
        ModelRow {
            name: "adiabatic-quantum".to_owned(),
            description: "Proposed ground-state searches run by slow quantum evolution, \
                          claimed to settle unbounded searches in finite physical time; \
                          recorded from the literature, with no executable fragment here."
                .to_owned(),
            literature: vec![HAGAR_KOROLEV_2007.to_owned()],
            properties: entries([
                fails_declared(HAGAR_KOROLEV_2007),
                fails_declared(HAGAR_KOROLEV_2007),
                fails_declared(HAGAR_KOROLEV_2007),
                fails_declared(HAGAR_KOROLEV_2007),
                holds_declared(HAGAR_KOROLEV_2007),
                holds_declared(HAGAR_KOROLEV_2007),
                holds_declared(HAGAR_KOROLEV_2007),
            ]),
            demonstrations: vec![],
            alternate_coding: None,
        },
    ]
}

/// Structural soundness of the ledger. Separate from the per-status evidence:
/// this validates the bookkeeping, `capability_audit` validates the claims.
pub fn registry_invariants() -> Result<(), String> {
    let rows = registry();
    if rows.len() != 8 {
        return Err(format!("expected 8 models, found {}", rows.len()));
    }
    let catalogue = check_names();
    let mut seen = std::collections::BTreeSet::new();
    for row in &rows {
        if !seen.insert(row.name.clone()) {
            return Err(format!("duplicate model name {}", row.name));
        }
        let listed: Vec<PropertyId> = row.properties.iter().map(|e| e.property).collect();
        if listed != PropertyId::ALL {
            return Err(format!("{} does not list all seven properties in order", row.name));
        }
        if row.missing().is_empty() {
            return Err(format!("{} claims every property at once", row.name));
        }
        for entry in &row.properties {
            if let Some(check) = entry.status.check_name() {
                if !catalogue.contains(&check) {
                    return Err(format!("{} cites unknown check {check}", row.name));
                }
            }
            if let Some(citation) = entry.status.citation() {
                if citation.is_empty() {
                    return Err(format!("{} has an empty citation", row.name));
                }
            }
        }
        for demo in &row.demonstrations {
            if !catalogue.contains(&demo.as_str()) {
                return Err(format!("{} demonstrates unknown check {demo}", row.name));
            }
        }
        if let Some(alt) = &row.alternate_coding {
            if alt.missing.is_empty() {
                return Err(format!("{}'s alternate coding misses nothing", row.name));
            }
            for check in &alt.evidence {
                if !catalogue.contains(&check.as_str()) {
                    return Err(format!(
                        "{}'s alternate coding cites unknown check {check}",
                        row.name
                    ));
                }
            }
        }
    }
    Ok(())
}
