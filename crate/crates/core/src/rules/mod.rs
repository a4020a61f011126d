//! Rewrite rules: the rule-file format, bidirectional expansion and the
//! domain-soundness validator.

mod domain;
mod pattern;
mod validate;

use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

use crate::expr::{Op, ParseError};

pub use domain::{DomainTable, InvalidDomain, Real};
pub use pattern::Pattern;
pub use validate::{validate_rule, Violation, Witness};

/// Rule set shipped with the crate.
pub const DEFAULT_RULES: &str = include_str!("../../data/default.rules");

#[derive(Clone, Debug, PartialEq)]
pub enum RuleStatus {
    /// Hand-checked and shipped in a rule file.
    CuratedSound,
    /// Passed sampling validation.
    Validated,
    /// Sampling found an assignment where the two sides disagree on
    /// definedness.
    FlaggedUnsound(Witness),
}

impl RuleStatus {
    pub fn is_usable(&self) -> bool {
        !matches!(self, RuleStatus::FlaggedUnsound(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub name: String,
    pub lhs: Pattern,
    pub rhs: Pattern,
    pub bidirectional: bool,
    pub status: RuleStatus,
}

impl Rule {
    pub fn new(name: impl Into<String>, lhs: Pattern, rhs: Pattern, bidirectional: bool) -> Self {
        Rule { name: name.into(), lhs, rhs, bidirectional, status: RuleStatus::CuratedSound }
    }

    pub fn parse_directed(name: &str, lhs: &str, rhs: &str) -> Result<Rule, ParseError> {
        Ok(Rule::new(name, Pattern::parse(lhs)?, Pattern::parse(rhs)?, false))
    }
}

/// One direction of a rule, as consumed by the saturation engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedRule {
    pub name: String,
    pub lhs: Pattern,
    pub rhs: Pattern,
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: duplicate rule name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: rule `{name}`: variable `{var}` of the right-hand side is not bound by the left-hand side")]
    UnboundVariable { line: usize, name: String, var: char },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Parses rule-file text. Each non-comment line is `name: LHS => RHS` or
/// `name: LHS <=> RHS`.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleError> {
    let mut rules = Vec::new();
    let mut names = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let format_err = |message: &str| RuleError::Format { line, message: message.to_string() };
        let (name, body) = content.split_once(':').ok_or_else(|| format_err("expected `name: LHS => RHS`"))?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(format_err("rule name must be a non-empty word"));
        }
        let (lhs, rhs, bidirectional) = if let Some((l, r)) = body.split_once("<=>") {
            (l, r, true)
        } else if let Some((l, r)) = body.split_once("=>") {
            (l, r, false)
        } else {
            return Err(format_err("expected `=>` or `<=>`"));
        };
        let parse = |s: &str| Pattern::parse(s.trim()).map_err(|source| RuleError::Parse { line, source });
        let (lhs, rhs) = (parse(lhs)?, parse(rhs)?);
        if lhs.contains_op(Op::Thefunc) || rhs.contains_op(Op::Thefunc) {
            return Err(format_err("rules may not mention thefunc"));
        }
        let unbound = |from: &Pattern, to: &Pattern| {
            let bound = from.var_set();
            to.vars().into_iter().find(|v| !bound.contains(v))
        };
        if let Some(var) = unbound(&lhs, &rhs) {
            return Err(RuleError::UnboundVariable { line, name: name.to_string(), var });
        }
        if bidirectional {
            if let Some(var) = unbound(&rhs, &lhs) {
                return Err(RuleError::UnboundVariable { line, name: name.to_string(), var });
            }
        }
        if !names.insert(name.to_string()) {
            return Err(RuleError::DuplicateName { line, name: name.to_string() });
        }
        rules.push(Rule::new(name, lhs, rhs, bidirectional));
    }
    Ok(rules)
}

pub fn load_rules(path: impl AsRef<Path>) -> Result<Vec<Rule>, RuleError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| RuleError::Io { path: path.display().to_string(), source })?;
    parse_rules(&text)
}

pub fn default_rules() -> Vec<Rule> {
    parse_rules(DEFAULT_RULES).expect("shipped rule file parses")
}

/// Expands bidirectional rules into two directed rules (`name` and
/// `name-rev`), keeping input order. Flagged rules are dropped.
pub fn rule_closure(rules: &[Rule]) -> Vec<DirectedRule> {
    let mut out = Vec::new();
    for r in rules.iter().filter(|r| r.status.is_usable()) {
        out.push(DirectedRule { name: r.name.clone(), lhs: r.lhs.clone(), rhs: r.rhs.clone() });
        if r.bidirectional {
            out.push(DirectedRule { name: format!("{}-rev", r.name), lhs: r.rhs.clone(), rhs: r.lhs.clone() });
        }
    }
    out
}
