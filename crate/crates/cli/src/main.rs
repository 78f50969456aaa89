//! `mckay`: command-line front end for the counting formulas and the oracle.
//!
//! Exit codes: 0 on success, 1 on a mismatch (or an internal
//! inconsistency), 2 when the input falls outside the supported hypotheses.

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mckay_core::center_lattice::{h1_order, GroupSpec};
use mckay_core::counting::{self, tables, CountReport, Kind, McKayReport, Route, Verdict};
use mckay_core::oracle::compare::{compare, CompareReport, Outcome};
use mckay_core::oracle::dixon::character_table;
use mckay_core::oracle::group::{build_group, GroupName};
use mckay_core::{CondPoly, Error, Isogeny, Series, Twist};

#[derive(Parser)]
#[command(name = "mckay", version, about = "Semisimple class and character counts of finite reductive groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count as a polynomial in q, optionally evaluated at --q.
    Count {
        #[arg(value_enum)]
        kind: CountKind,
        #[command(flatten)]
        group: GroupArgs,
        /// Evaluate at this prime power.
        #[arg(long)]
        q: Option<u64>,
        /// Gelfand-Graev labels (center elements).
        #[arg(long, default_value_t = 0)]
        z1: u32,
        #[arg(long, default_value_t = 0)]
        z2: u32,
        /// Central character label for relative counts.
        #[arg(long, default_value_t = 0)]
        nu: u32,
    },
    /// Compare both sides of the McKay equality.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Brute-force checks on explicit matrix groups.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Regenerate a closed-form table (1: classes, 4: characters).
    EmitTable {
        table: tables::Table,
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    Mckay {
        #[command(flatten)]
        group: OptionalGroupArgs,
        /// Every spec in the grid up to --max-rank.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Oracle counts against the formulas at q.
    Compare {
        #[arg(long)]
        group: GroupName,
        #[arg(long)]
        q: u64,
    },
    /// Character degrees and p' counts of a small group.
    Table {
        #[arg(long)]
        group: GroupName,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountKind {
    Classes,
    ClassesTable,
    SsChars,
    SsCharsTable,
    Borel,
    BorelLattice,
    BorelClosed,
    Gg,
    Relative,
    Td,
    H1,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    series: Series,
    #[arg(long)]
    rank: usize,
    /// sc, adjoint, SO, HS, r=<k> or gl.
    #[arg(long, default_value = "sc")]
    isogeny: Isogeny,
    /// + (split) or - (non-split).
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    twist: Twist,
}

#[derive(Args)]
struct OptionalGroupArgs {
    #[arg(long, required_unless_present = "all")]
    series: Option<Series>,
    #[arg(long, required_unless_present = "all")]
    rank: Option<usize>,
    #[arg(long, default_value = "sc")]
    isogeny: Isogeny,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    twist: Twist,
}

fn make_spec(series: Series, rank: usize, isogeny: Isogeny, twist: Twist) -> mckay_core::Result<GroupSpec> {
    if isogeny.is_connected_center() && series == Series::A {
        // The center order depends on the twist: q - 1 or q + 1.
        return GroupSpec::connected_center(rank, twist);
    }
    GroupSpec::new(series, rank, isogeny, twist)
}

/// A count report, evaluated at `q` when one was given.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CountOutput {
    #[serde(flatten)]
    report: CountReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

/// Drops branches that only contain bad characteristics, refusing when
/// nothing is left.
fn good_part(spec: &GroupSpec, c: &CondPoly) -> mckay_core::Result<CondPoly> {
    let good = counting::restrict_to_good(spec, c)?;
    if good.is_empty() {
        return Err(Error::Unsupported(format!(
            "{} has no branch in good characteristic here (hypothesis: p good, |H^1| trivial or prime)",
            spec.name()
        )));
    }
    Ok(good)
}

fn count_reports(kind: CountKind, spec: &GroupSpec, z1: u32, z2: u32, nu: u32) -> Result<Vec<CountReport>> {
    let one = |k: Kind, route: Route, c: mckay_core::Result<CondPoly>| -> Result<Vec<CountReport>> {
        Ok(vec![CountReport::new(spec, k, route, good_part(spec, &c?)?)])
    };
    match kind {
        CountKind::Classes => one(Kind::Classes, Route::Theorem, counting::semisimple_class_count(spec)),
        CountKind::ClassesTable => one(Kind::Classes, Route::Table, tables::semisimple_class_count_table(spec)),
        CountKind::SsChars => one(Kind::SsChars, Route::Theorem, counting::semisimple_char_count(spec)),
        CountKind::SsCharsTable => one(Kind::SsChars, Route::Table, tables::semisimple_char_count_table(spec)),
        CountKind::Borel => one(Kind::Borel, Route::Direct, counting::borel_pprime_count(spec)),
        CountKind::BorelLattice => one(Kind::Borel, Route::Lattice, counting::borel_pprime_lattice(spec)),
        CountKind::BorelClosed => one(Kind::Borel, Route::ClosedForm, counting::borel_prime_closed_form(spec)),
        CountKind::Gg => one(Kind::GgInner, Route::Theorem, counting::gg_inner_product(spec, z1, z2)),
        CountKind::Relative => one(Kind::Relative, Route::Theorem, counting::relative_count(spec, nu)),
        CountKind::H1 => one(Kind::H1, Route::Theorem, Ok(h1_order(spec))),
        CountKind::Td => {
            let td = counting::td_counts(spec)?;
            Ok(vec![
                CountReport::new(spec, Kind::H1, Route::Theorem, good_part(spec, &td.ell)?),
                CountReport::new(spec, Kind::TdTotal, Route::Theorem, good_part(spec, &td.total)?),
                CountReport::new(spec, Kind::TdOne, Route::Theorem, good_part(spec, &td.one)?),
                CountReport::new(spec, Kind::TdEll, Route::Theorem, good_part(spec, &td.ell_part)?),
            ])
        }
    }
}

fn write_branches(out: &mut impl Write, c: &CondPoly) -> io::Result<()> {
    let branches = c.branches();
    if branches.is_empty() {
        return writeln!(out, "  (no branch)");
    }
    for b in branches {
        let eps = b.twist.map_or("any".to_string(), |t| t.to_string());
        let residues: Vec<String> = b.residues.iter().map(u64::to_string).collect();
        writeln!(out, "  eps {eps}, q ≡ {} mod {}: {}", residues.join(","), b.modulus, b.poly)?;
    }
    Ok(())
}

fn kind_name(k: Kind) -> String {
    serde_json::to_value(k).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn run_count(format: Format, reports: Vec<CountReport>, q: Option<u64>) -> Result<ExitCode> {
    let mut outputs = Vec::new();
    for mut report in reports {
        let value = match q {
            Some(q) => {
                report.spec = report.spec.with_q(q);
                Some(counting::evaluate(&report.spec, &report.result, q)?.to_string())
            }
            None => None,
        };
        outputs.push(CountOutput { report, value });
    }
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            if outputs.len() == 1 {
                serde_json::to_writer_pretty(&mut out, &outputs[0])?;
            } else {
                serde_json::to_writer_pretty(&mut out, &outputs)?;
            }
            writeln!(out)?;
        }
        Format::Text => {
            for o in &outputs {
                let r = &o.report;
                writeln!(out, "{} {} ({})", r.spec.name(), kind_name(r.kind), r.route)?;
                write_branches(&mut out, &r.result)?;
                if let (Some(q), Some(v)) = (r.spec.q, &o.value) {
                    writeln!(out, "  at q = {q}: {v}")?;
                }
                for s in &r.side_conditions {
                    writeln!(out, "  assuming {s}")?;
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["group", "kind", "route", "eps", "modulus", "residues", "count", "q", "value"])?;
            for o in &outputs {
                let r = &o.report;
                for b in r.result.branches() {
                    let residues: Vec<String> = b.residues.iter().map(u64::to_string).collect();
                    w.write_record([
                        r.spec.name(),
                        kind_name(r.kind),
                        r.route.to_string(),
                        b.twist.map_or("any".to_string(), |t| t.to_string()),
                        b.modulus.to_string(),
                        residues.join(" "),
                        b.poly.to_string(),
                        r.spec.q.map(|q| q.to_string()).unwrap_or_default(),
                        o.value.clone().unwrap_or_default(),
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(format: Format, reports: Vec<McKayReport>) -> Result<ExitCode> {
    let mismatch = reports.iter().any(|r| r.verdict == Verdict::Mismatch);
    let mut out = io::stdout().lock();
    let verdict = |v: Verdict| serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    match format {
        Format::Json => {
            if reports.len() == 1 {
                serde_json::to_writer_pretty(&mut out, &reports[0])?;
            } else {
                serde_json::to_writer_pretty(&mut out, &reports)?;
            }
            writeln!(out)?;
        }
        Format::Text => {
            for r in &reports {
                write!(out, "{}: {}", r.spec.name(), verdict(r.verdict))?;
                if let Some(w) = &r.witness {
                    write!(out, " (witness: {w})")?;
                }
                if let Some(w) = r.relative.as_ref().and_then(|rel| rel.witness.as_ref()) {
                    write!(out, " (relative witness: {w})")?;
                }
                if let Some(reason) = &r.reason {
                    write!(out, " ({reason})")?;
                }
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["group", "verdict", "witness", "reason"])?;
            for r in &reports {
                w.write_record([
                    r.spec.name(),
                    verdict(r.verdict),
                    r.witness.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                    r.reason.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if mismatch { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run_compare(format: Format, report: CompareReport) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    let outcome = |o: Outcome| match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "FAIL",
        Outcome::Skipped => "skipped",
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Text => {
            writeln!(out, "{} (|G| = {}, {})", report.group, report.order, report.spec.name())?;
            for c in &report.checks {
                write!(out, "  {}: {}", c.name, outcome(c.outcome))?;
                if let (Some(o), Some(f)) = (&c.oracle, &c.formula) {
                    write!(out, " (oracle {o}, formula {f})")?;
                }
                if let Some(n) = &c.note {
                    write!(out, " [{n}]")?;
                }
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["group", "check", "oracle", "formula", "outcome", "note"])?;
            for c in &report.checks {
                w.write_record([
                    report.group.as_str(),
                    c.name.as_str(),
                    c.oracle.as_deref().unwrap_or(""),
                    c.formula.as_deref().unwrap_or(""),
                    outcome(c.outcome),
                    c.note.as_deref().unwrap_or(""),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_table(format: Format, name: GroupName, q: u64) -> Result<ExitCode> {
    let g = build_group(name, q)?;
    let table = character_table(&g, false)?;
    let snapshot = table.snapshot(g.p);
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &snapshot)?;
            writeln!(out)?;
        }
        Format::Text => {
            writeln!(out, "{} (|G| = {}, {} classes)", snapshot.group, snapshot.order, snapshot.class_count)?;
            let degrees: Vec<String> = snapshot.degrees.iter().map(u32::to_string).collect();
            writeln!(out, "  degrees: {}", degrees.join(" "))?;
            for (nu, n) in &snapshot.pprime_counts {
                writeln!(out, "  p' characters over central character {nu}: {n}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["character", "degree"])?;
            for (i, d) in snapshot.degrees.iter().enumerate() {
                w.write_record([i.to_string(), d.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_emit(format: Format, which: tables::Table, max_rank: usize) -> Result<ExitCode> {
    let lines = tables::emit_table(which, max_rank)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &lines)?;
            writeln!(out)?;
        }
        Format::Text => {
            for l in &lines {
                writeln!(out, "{:<12} eps {} {:<24} {}", l.group, l.twist, l.condition, l.count)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for l in &lines {
                w.serialize(l)?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Count { kind, group, q, z1, z2, nu } => {
            let spec = make_spec(group.series, group.rank, group.isogeny, group.twist)?;
            let reports = count_reports(kind, &spec, z1, z2, nu)?;
            run_count(format, reports, q)
        }
        Command::Verify { what: VerifyCommand::Mckay { group, all, max_rank } } => {
            let specs = if all {
                counting::spec_grid(max_rank)
            } else {
                let series = group.series.context("--series is required")?;
                let rank = group.rank.context("--rank is required")?;
                vec![make_spec(series, rank, group.isogeny, group.twist)?]
            };
            let reports = specs.iter().map(counting::mckay_verify).collect::<mckay_core::Result<Vec<_>>>()?;
            run_verify(format, reports)
        }
        Command::Oracle { what: OracleCommand::Compare { group, q } } => run_compare(format, compare(group, q)?),
        Command::Oracle { what: OracleCommand::Table { group, q } } => run_table(format, group, q),
        Command::EmitTable { table, max_rank } => run_emit(format, table, max_rank),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<mckay_core::Error>() {
                Some(core) if core.is_refusal() => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
