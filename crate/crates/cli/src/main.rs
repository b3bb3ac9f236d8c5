//! `dialectic`: inspect default theories, query them, and run argumentation
//! sessions over stdio or HTTP.

use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dialectic_core::defaults::{parse_theory, DefaultTheory, Violation};
use dialectic_core::hierarchy::Hierarchy;
use dialectic_core::logic::{parse_formula, Formula};
use dialectic_core::preference::{InnerVariant, ModelOrderRelation, PreferenceConfig};
use dialectic_core::size::Measure;
use dialectic_protocol::service::run_stdio;
use dialectic_protocol::view::StateView;
use dialectic_protocol::{http, transcript, Participant, Session, SessionRegistry};

#[derive(Parser)]
#[command(name = "dialectic", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Consistency conditions, size gates and valid defaults of a theory.
    /// Exits with status 1 when a consistency condition fails.
    Check {
        theory: PathBuf,
        /// Points at which to list valid defaults; defaults to every cell.
        #[arg(long = "at")]
        points: Vec<String>,
    },
    /// Cells, the exceptionality order and the packet order.
    Hierarchy {
        theory: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: HierarchyFormat,
        /// With `--format order`, also list the element pairs.
        #[arg(long)]
        elements: bool,
        #[command(flatten)]
        preference: PreferenceArgs,
    },
    /// Minimal models, default consequences and classification.
    Query {
        theory: PathBuf,
        #[command(subcommand)]
        query: Query,
        #[command(flatten)]
        preference: PreferenceArgs,
    },
    /// Newline-delimited JSON session loop on stdin and stdout.
    Session {
        /// Open a session preloaded with this theory.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long, default_value = "arbiter")]
        arbiter: String,
        /// Participant ids for a seeded session.
        #[arg(long = "participant")]
        participants: Vec<String>,
        #[command(flatten)]
        preference: PreferenceArgs,
    },
    /// Replays a transcript and prints the resulting state.
    Replay {
        transcript: PathBuf,
        /// Print the full state as JSON instead of a summary.
        #[arg(long)]
        json: bool,
    },
    /// Serves the session endpoints over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Preferred models of a formula.
    Minimal { gamma: String },
    /// Whether `gamma` defeasibly yields `psi`.
    Holds { gamma: String, psi: String },
    /// Cell, packet and conclusions for an individual described by facts.
    Classify {
        #[arg(required = true)]
        facts: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HierarchyFormat {
    Table,
    Dot,
    Order,
}

#[derive(clap::Args)]
struct PreferenceArgs {
    /// Inner order on o packets: subset, cardinality, specificity, or
    /// priority:ID,ID,...
    #[arg(long, default_value = "subset")]
    variant: String,
    /// Place every o packet above all μ packets.
    #[arg(long)]
    radical: bool,
}

impl PreferenceArgs {
    fn config(&self) -> Result<PreferenceConfig> {
        let variant = match self.variant.as_str() {
            "subset" => InnerVariant::Subset,
            "cardinality" => InnerVariant::Cardinality,
            "specificity" => InnerVariant::Specificity,
            other => match other.strip_prefix("priority:") {
                Some(ids) => InnerVariant::Priority(ids.split(',').map(|s| s.trim().to_string()).collect()),
                None => bail!("unknown variant `{other}`"),
            },
        };
        let config = PreferenceConfig::new(variant);
        Ok(if self.radical { config.radical() } else { config })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_theory(path: &Path) -> Result<DefaultTheory> {
    parse_theory(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn formula(theory: &DefaultTheory, text: &str) -> Result<Formula> {
    parse_formula(text, theory.signature()).with_context(|| format!("parsing `{text}`"))
}

fn check(path: &Path, points: &[String], out: &mut impl Write) -> Result<bool> {
    let t = load_theory(path)?;
    let report = t.check_consistency_conditions();
    for v in &report.violations {
        match v {
            Violation::InconsistentBackground => writeln!(out, "violation: background has no model")?,
            Violation::InconsistentAttachment { scope, defaults } => writeln!(
                out,
                "violation: defaults {} at `{scope}` are jointly inconsistent",
                defaults.join(", ")
            )?,
        }
    }
    if !report.passed() {
        return Ok(false);
    }
    writeln!(out, "consistency: ok")?;
    for d in t.defaults() {
        let gate = t.check_size_gate(&d.id, &Measure::<f64>::Counting, t.policy())?;
        writeln!(
            out,
            "size {}: {} (most {:.3}, exceptions {:.3}, surprise {:.3})",
            d.id,
            if gate.passed() { "pass" } else { "fail" },
            gate.most_ratio,
            gate.exception_ratio,
            gate.surprise_ratio
        )?;
    }
    if points.is_empty() {
        let r = ModelOrderRelation::build(&t, &PreferenceConfig::default())?;
        for p in &r.partitions {
            let code = if p.code.is_empty() { "-" } else { &p.code };
            let valid: Vec<&str> = p.valid.iter().map(String::as_str).collect();
            writeln!(out, "valid at cell {code}: {{{}}}", valid.join(", "))?;
        }
    }
    for point in points {
        let v = t.valid_defaults(&formula(&t, point)?)?;
        let valid: Vec<&str> = v.valid.iter().map(String::as_str).collect();
        writeln!(out, "valid at {point}: {{{}}}", valid.join(", "))?;
        for (id, phase) in &v.eliminated {
            writeln!(out, "  eliminated {id} ({phase:?})")?;
        }
    }
    Ok(true)
}

fn hierarchy(
    path: &Path,
    format: HierarchyFormat,
    elements: bool,
    preference: &PreferenceArgs,
    out: &mut impl Write,
) -> Result<()> {
    let t = load_theory(path)?;
    match format {
        HierarchyFormat::Table => {
            let h = Hierarchy::from_theory(&t)?;
            write!(out, "{}", h.cell_table())?;
            for &(a, b) in &h.order.hasse {
                writeln!(out, "{} < {}", h.cells[a].code, h.cells[b].code)?;
            }
        }
        HierarchyFormat::Dot => write!(out, "{}", Hierarchy::from_theory(&t)?.export_dot())?,
        HierarchyFormat::Order => {
            let r = ModelOrderRelation::build(&t, &preference.config()?)?;
            write!(out, "{}", r.dump(elements))?;
        }
    }
    Ok(())
}

fn query(path: &Path, q: &Query, preference: &PreferenceArgs, out: &mut impl Write) -> Result<()> {
    let t = load_theory(path)?;
    let r = ModelOrderRelation::build(&t, &preference.config()?)?;
    match q {
        Query::Minimal { gamma } => writeln!(out, "{}", r.minimal_models(&formula(&t, gamma)?)?)?,
        Query::Holds { gamma, psi } => {
            let v = r.default_holds(&formula(&t, gamma)?, &formula(&t, psi)?)?;
            writeln!(out, "{}", if v.holds { "holds" } else { "does not hold" })?;
            writeln!(out, "minimal {}", v.minimal_models)?;
            for w in &v.witnesses {
                writeln!(out, "witness {} {}", w.packet, w.models)?;
            }
        }
        Query::Classify { facts } => {
            let facts = facts.iter().map(|f| formula(&t, f)).collect::<Result<Vec<_>>>()?;
            let c = r.classify(&facts)?;
            writeln!(out, "cells {}", c.cells.join(" "))?;
            writeln!(out, "packets {}", c.packets.join(" "))?;
            writeln!(out, "models {}", c.models)?;
            writeln!(out, "conclusions {}", c.conclusions.join(" "))?;
            writeln!(out, "defeasible {}", c.defeasible.join(" "))?;
        }
    }
    Ok(())
}

fn replay(path: &Path, json: bool, out: &mut impl Write) -> Result<()> {
    let s = transcript::load(&read(path)?).with_context(|| format!("replaying {}", path.display()))?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&StateView::of(&s))?)?;
        return Ok(());
    }
    writeln!(out, "moves {}", s.moves.len())?;
    writeln!(out, "phase {}", s.phase.as_str())?;
    for set in &s.report.mis {
        let names: Vec<&str> = set.iter().map(|id| s.get(id).map_or(id.as_str(), |m| m.name())).collect();
        writeln!(out, "culprits {{{}}}", names.join(", "))?;
    }
    let retracted: Vec<&str> = s.retracted.iter().map(String::as_str).collect();
    writeln!(out, "retracted {{{}}}", retracted.join(", "))?;
    if let Some(v) = &s.verdict {
        writeln!(out, "verdict {:?}", v.outcome)?;
    }
    Ok(())
}

fn session(
    seed: Option<&Path>,
    arbiter: &str,
    participants: &[String],
    preference: &PreferenceArgs,
) -> Result<()> {
    let initial = match seed {
        Some(path) => {
            if participants.is_empty() {
                bail!("a seeded session needs at least one --participant");
            }
            let mut people = vec![Participant::arbiter(arbiter)];
            people.extend(participants.iter().map(Participant::participant));
            Some(Session::seeded(people, preference.config()?, &read(path)?)?)
        }
        None => None,
    };
    let stdin = io::stdin();
    run_stdio(stdin.lock(), io::stdout().lock(), initial)?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Check { theory, points } => return check(theory, points, &mut out),
        Command::Hierarchy {
            theory,
            format,
            elements,
            preference,
        } => hierarchy(theory, *format, *elements, preference, &mut out)?,
        Command::Query {
            theory,
            query: q,
            preference,
        } => query(theory, q, preference, &mut out)?,
        Command::Session {
            seed,
            arbiter,
            participants,
            preference,
        } => {
            drop(out);
            session(seed.as_deref(), arbiter, participants, preference)?
        }
        Command::Replay { transcript, json } => replay(transcript, *json, &mut out)?,
        Command::Serve { addr } => {
            let runtime = tokio::runtime::Runtime::new()?;
            eprintln!("listening on {addr}");
            runtime.block_on(http::serve(*addr, Arc::new(SessionRegistry::new())))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
