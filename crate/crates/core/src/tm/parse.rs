use std::collections::HashMap;

use crate::tm::{Move, Rule, SpecError, TmSpec};

/// Text format, one rule per line: `state symbol -> state symbol move` with move in
/// `L R S`. Header lines `start:`, `states:` and `halt:` (zero or more names each)
/// and `blank:` (default `_`) may appear anywhere; `#` starts a comment. States are
/// declared by appearing in `start:`, `states:`, `halt:`, or as a rule source; a
/// rule may only target declared states, which catches misspelled names.
pub fn parse_tm(text: &str) -> Result<TmSpec, TmParseError> {
    let mut start: Option<(String, usize)> = None;
    let mut listed_names: Vec<String> = Vec::new();
    let mut halt_names: Vec<String> = Vec::new();
    let mut blank: Option<String> = None;
    let mut raw_rules: Vec<RawRule> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            if start.is_some() {
                return Err(TmParseError { line: line_no, kind: ErrorKind::DuplicateDirective("start") });
            }
            let name = rest.trim();
            if name.is_empty() || name.split_whitespace().count() != 1 {
                return Err(TmParseError { line: line_no, kind: ErrorKind::MalformedDirective("start") });
            }
            start = Some((name.to_string(), line_no));
        } else if let Some(rest) = line.strip_prefix("states:") {
            listed_names.extend(rest.split_whitespace().map(str::to_string));
        } else if let Some(rest) = line.strip_prefix("halt:") {
            halt_names.extend(rest.split_whitespace().map(str::to_string));
        } else if let Some(rest) = line.strip_prefix("blank:") {
            if blank.is_some() {
                return Err(TmParseError { line: line_no, kind: ErrorKind::DuplicateDirective("blank") });
            }
            let name = rest.trim();
            if name.is_empty() || name.split_whitespace().count() != 1 {
                return Err(TmParseError { line: line_no, kind: ErrorKind::MalformedDirective("blank") });
            }
            blank = Some(name.to_string());
        } else {
            raw_rules.push(parse_rule_line(line, line_no)?);
        }
    }

    let (start_name, _) = start.ok_or(TmParseError { line: 0, kind: ErrorKind::MissingStart })?;

    // Declared states: start, listed, halts, rule sources, in first-appearance order.
    let mut state_names: Vec<String> = Vec::new();
    let mut state_ids: HashMap<String, usize> = HashMap::new();
    let declare_state = |name: &str, names: &mut Vec<String>, ids: &mut HashMap<String, usize>| {
        if !ids.contains_key(name) {
            ids.insert(name.to_string(), names.len());
            names.push(name.to_string());
        }
    };
    declare_state(&start_name, &mut state_names, &mut state_ids);
    for name in listed_names.iter().chain(&halt_names) {
        declare_state(name, &mut state_names, &mut state_ids);
    }
    for rule in &raw_rules {
        declare_state(&rule.from_state, &mut state_names, &mut state_ids);
    }

    // Symbols: the blank, the mark, then the rest in order of appearance.
    let blank_name = blank.unwrap_or_else(|| "_".to_string());
    let mut sym_names: Vec<String> = vec![blank_name.clone()];
    if blank_name != "1" {
        sym_names.push("1".to_string());
    }
    let mut sym_ids: HashMap<String, usize> =
        sym_names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    for rule in &raw_rules {
        for name in [&rule.read, &rule.write] {
            if !sym_ids.contains_key(name.as_str()) {
                sym_ids.insert(name.clone(), sym_names.len());
                sym_names.push(name.clone());
            }
        }
    }

    let n = state_names.len();
    let g = sym_names.len();
    let mut halt = vec![false; n];
    for name in &halt_names {
        halt[state_ids[name]] = true;
    }

    let mut table: Vec<Option<Rule>> = vec![None; n * g];
    for rule in &raw_rules {
        let from = state_ids[&rule.from_state];
        let next = *state_ids.get(&rule.to_state).ok_or(TmParseError {
            line: rule.line,
            kind: ErrorKind::UndeclaredState(rule.to_state.clone()),
        })?;
        if halt[from] {
            return Err(TmParseError {
                line: rule.line,
                kind: ErrorKind::RuleFromHaltState(rule.from_state.clone()),
            });
        }
        let read = sym_ids[&rule.read];
        let write = sym_ids[&rule.write];
        let slot = &mut table[from * g + read];
        if slot.is_some() {
            return Err(TmParseError {
                line: rule.line,
                kind: ErrorKind::DuplicateRule(rule.from_state.clone(), rule.read.clone()),
            });
        }
        *slot = Some(Rule { write, mv: rule.mv, next });
    }

    TmSpec::from_parts(state_names, sym_names, halt, table)
        .map_err(|e| TmParseError { line: 0, kind: ErrorKind::Spec(e) })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct TmParseError {
    pub line: usize,
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ErrorKind {
    #[error("no start state declared")]
    MissingStart,
    #[error("directive '{0}:' given twice")]
    DuplicateDirective(&'static str),
    #[error("directive '{0}:' needs exactly one name")]
    MalformedDirective(&'static str),
    #[error("expected 'state symbol -> state symbol move'")]
    MalformedRule,
    #[error("unknown move '{0}' (expected L, R or S)")]
    UnknownMove(String),
    #[error("rule targets undeclared state '{0}'")]
    UndeclaredState(String),
    #[error("second rule for ({0}, {1})")]
    DuplicateRule(String, String),
    #[error("halt state '{0}' may not carry rules")]
    RuleFromHaltState(String),
    #[error(transparent)]
    Spec(SpecError),
}

struct RawRule {
    from_state: String,
    read: String,
    to_state: String,
    write: String,
    mv: Move,
    line: usize,
}

fn parse_rule_line(line: &str, line_no: usize) -> Result<RawRule, TmParseError> {
    let malformed = || TmParseError { line: line_no, kind: ErrorKind::MalformedRule };
    let (lhs, rhs) = line.split_once("->").ok_or_else(malformed)?;
    let lhs: Vec<&str> = lhs.split_whitespace().collect();
    let rhs: Vec<&str> = rhs.split_whitespace().collect();
    let ([from_state, read], [to_state, write, mv]) = (lhs.as_slice(), rhs.as_slice()) else {
        return Err(malformed());
    };
    let mv = match *mv {
        "L" => Move::Left,
        "R" => Move::Right,
        "S" => Move::Stay,
        other => {
            return Err(TmParseError { line: line_no, kind: ErrorKind::UnknownMove(other.into()) })
        }
    };
    Ok(RawRule {
        from_state: from_state.to_string(),
        read: read.to_string(),
        to_state: to_state.to_string(),
        write: write.to_string(),
        mv,
        line: line_no,
    })
}
