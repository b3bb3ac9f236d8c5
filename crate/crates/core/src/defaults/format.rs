//! Text format for default theories.
//!
//! ```text
//! # Tweety
//! atoms: b p f
//! background: p -> b
//! policy: most=0.7 small=0.3 very_small=0.05
//! d1: b ~> f
//! d2: p ~> ~f [except: p & q] [surprise: 0.01] [homogeneous]
//! d3: q ~> r [neg] [provenance: expert]
//! prefer: d2 > d1
//! block d1 at p & q
//! ```
//!
//! `atoms` must come first. `background` lines accumulate. `prefer` lines
//! switch the specificity order from scope inclusion to the listed pairs.
//! Options follow the conclusion, each in square brackets.

use std::fmt::Write as _;

use super::rule::{DefaultRule, Provenance};
use super::theory::{DefaultTheory, SpecificityOrder};
use crate::error::{Error, Result};
use crate::logic::{parse_formula, Formula, Signature};
use crate::size::SizePolicy;

fn format_error(line: usize, message: impl Into<String>) -> Error {
    Error::TheoryFormat {
        line,
        message: message.into(),
    }
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| format_error(line, e.to_string())
}

struct PendingBlock {
    line: usize,
    id: String,
    at: Formula,
}

/// Parses a theory file.
pub fn parse_theory(text: &str) -> Result<DefaultTheory> {
    let mut sig: Option<Signature> = None;
    let mut background = Vec::new();
    let mut policy = SizePolicy::<f64>::standard();
    let mut rules: Vec<(usize, DefaultRule)> = Vec::new();
    let mut blocks: Vec<PendingBlock> = Vec::new();
    let mut prefer: Vec<(String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("atoms:") {
            if sig.is_some() {
                return Err(format_error(line, "atoms declared twice"));
            }
            sig = Some(Signature::new(rest.split_whitespace()).map_err(at_line(line))?);
            continue;
        }
        let Some(s) = sig.as_ref() else {
            return Err(format_error(line, "expected `atoms:` declaration first"));
        };
        if let Some(rest) = content.strip_prefix("background:") {
            background.push(parse_formula(rest.trim(), s).map_err(at_line(line))?);
        } else if let Some(rest) = content.strip_prefix("policy:") {
            policy = parse_policy(rest).map_err(at_line(line))?;
        } else if let Some(rest) = content.strip_prefix("prefer:") {
            let (a, b) = rest
                .split_once('>')
                .ok_or_else(|| format_error(line, "expected `prefer: STRONGER > WEAKER`"))?;
            prefer.push((a.trim().to_string(), b.trim().to_string()));
        } else if let Some(rest) = content.strip_prefix("block ") {
            let (id, at) = rest
                .split_once(" at ")
                .ok_or_else(|| format_error(line, "expected `block ID at FORMULA`"))?;
            blocks.push(PendingBlock {
                line,
                id: id.trim().to_string(),
                at: parse_formula(at.trim(), s).map_err(at_line(line))?,
            });
        } else if let Some((id, rest)) = content.split_once(':') {
            let id = id.trim();
            if !crate::logic::is_atom_name(id) {
                return Err(format_error(line, format!("invalid default id `{id}`")));
            }
            rules.push((line, parse_rule(id, rest, s).map_err(at_line(line))?));
        } else {
            return Err(format_error(line, format!("unrecognized line `{content}`")));
        }
    }

    let sig = sig.ok_or_else(|| format_error(1, "missing `atoms:` declaration"))?;
    let mut theory = DefaultTheory::new(sig, background)?.with_policy(policy);
    for (line, rule) in rules {
        theory = theory.attach(rule).map_err(at_line(line))?;
    }
    for b in blocks {
        theory = theory.block_inheritance(&b.id, b.at).map_err(at_line(b.line))?;
    }
    if !prefer.is_empty() {
        for (a, b) in &prefer {
            for id in [a, b] {
                if theory.index_of(id).is_none() {
                    return Err(Error::UnknownDefault(id.clone()));
                }
            }
        }
        theory = theory.with_specificity(SpecificityOrder::Explicit(prefer));
    }
    Ok(theory)
}

fn parse_policy(text: &str) -> Result<SizePolicy<f64>> {
    let mut p = SizePolicy::<f64>::standard();
    for part in text.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidSizePolicy(format!("expected key=value, got `{part}`")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::InvalidSizePolicy(format!("`{value}` is not a number")))?;
        match key {
            "most" => p.most = value,
            "small" => p.small = value,
            "very_small" => p.very_small = value,
            _ => return Err(Error::InvalidSizePolicy(format!("unknown key `{key}`"))),
        }
    }
    SizePolicy::new(p.most, p.small, p.very_small)
}

fn parse_rule(id: &str, text: &str, sig: &Signature) -> Result<DefaultRule> {
    let (body, options) = match text.find('[') {
        Some(i) => (&text[..i], &text[i..]),
        None => (text, ""),
    };
    let (scope, conclusion) = body.split_once("~>").ok_or_else(|| Error::Syntax {
        position: 1,
        message: "expected `SCOPE ~> CONCLUSION`".into(),
    })?;
    let mut rule = DefaultRule::new(
        id,
        parse_formula(scope.trim(), sig)?,
        parse_formula(conclusion.trim(), sig)?,
    );
    let mut rest = options.trim();
    while !rest.is_empty() {
        let inner_end = rest.find(']').ok_or_else(|| Error::Syntax {
            position: 1,
            message: "unclosed `[`".into(),
        })?;
        let option = rest[1..inner_end].trim();
        rest = rest[inner_end + 1..].trim_start();
        if !rest.is_empty() && !rest.starts_with('[') {
            return Err(Error::Syntax {
                position: 1,
                message: format!("unexpected text `{rest}` after option"),
            });
        }
        let (key, value) = match option.split_once(':') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (option, None),
        };
        match (key, value) {
            ("neg", None) => rule = rule.negated(),
            ("homogeneous", None) => rule = rule.homogeneous(),
            ("except", Some(v)) => {
                for part in v.split(',') {
                    rule = rule.with_exception(parse_formula(part.trim(), sig)?);
                }
            }
            ("surprise", Some(v)) => {
                let eps: f64 = v.parse().map_err(|_| Error::Syntax {
                    position: 1,
                    message: format!("`{v}` is not a number"),
                })?;
                rule = rule.with_surprise(eps);
            }
            ("provenance", Some(v)) => {
                let p = Provenance::parse(v).ok_or_else(|| Error::Syntax {
                    position: 1,
                    message: format!("unknown provenance `{v}`"),
                })?;
                rule = rule.with_provenance(p);
            }
            _ => {
                return Err(Error::Syntax {
                    position: 1,
                    message: format!("unknown option `[{option}]`"),
                })
            }
        }
    }
    Ok(rule)
}

/// One default as a theory-file line (without trailing newline).
pub fn format_rule(rule: &DefaultRule, sig: &Signature) -> String {
    let mut out = format!(
        "{}: {} ~> {}",
        rule.id,
        rule.scope.to_text(sig),
        rule.conclusion.to_text(sig)
    );
    if !rule.exceptions.is_empty() {
        let parts: Vec<String> = rule.exceptions.iter().map(|e| e.to_text(sig)).collect();
        let _ = write!(out, " [except: {}]", parts.join(", "));
    }
    if rule.surprise_budget != 0.0 {
        let _ = write!(out, " [surprise: {}]", rule.surprise_budget);
    }
    if rule.homogeneous {
        out.push_str(" [homogeneous]");
    }
    if rule.is_negated() {
        out.push_str(" [neg]");
    }
    if rule.provenance != Provenance::Plain {
        let _ = write!(out, " [provenance: {}]", rule.provenance.as_str());
    }
    out
}

/// Prints a theory in the format read by [`parse_theory`].
pub fn format_theory(theory: &DefaultTheory) -> String {
    let sig = theory.signature();
    let mut out = String::new();
    let _ = writeln!(out, "atoms: {}", sig.atoms().join(" "));
    for b in theory.background() {
        let _ = writeln!(out, "background: {}", b.to_text(sig));
    }
    let p = theory.policy();
    if *p != SizePolicy::standard() {
        let _ = writeln!(
            out,
            "policy: most={} small={} very_small={}",
            p.most, p.small, p.very_small
        );
    }
    for rule in theory.defaults() {
        let _ = writeln!(out, "{}", format_rule(rule, sig));
    }
    if let SpecificityOrder::Explicit(pairs) = theory.specificity() {
        for (a, b) in pairs {
            let _ = writeln!(out, "prefer: {a} > {b}");
        }
    }
    for b in theory.blocks() {
        let _ = writeln!(out, "block {} at {}", b.default_id, b.at.to_text(sig));
    }
    out
}
