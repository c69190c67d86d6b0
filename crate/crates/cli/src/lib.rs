//! Command-line front end for the `hzpos` positivity criteria.
//!
//! Exit codes: 0 on success, 2 for malformed input, 3 for I/O failures.

pub mod commands;
pub mod input;
pub mod output;
pub mod scan;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hzpos::{all_criteria, BlowupModel, CriterionId};
use num_bigint::BigInt;

pub use input::{BundleSpec, CliError};
use commands::Limits;
use input::{parse_csv, parse_position, BundleFlags};
use output::{render_document, Sink};
use scan::ScanSpec;

#[derive(Debug, Parser)]
#[command(name = "hzpos", version, about = "Positivity criteria for line bundles on blown-up Hirzebruch surfaces")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add a generation timestamp to JSON output.
    #[arg(long)]
    pub timestamps: bool,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    #[arg(long)]
    pub e: Option<u64>,
    #[arg(long)]
    pub r: Option<usize>,
    /// arbitrary, off_ce_distinct_fibers or very_general (default).
    #[arg(long)]
    pub position: Option<String>,
    #[arg(long)]
    pub a: Option<BigInt>,
    #[arg(long)]
    pub b: Option<BigInt>,
    /// Multiplicities as a comma-separated list.
    #[arg(long)]
    pub m: Option<String>,
    /// Use the same multiplicity at every point.
    #[arg(long)]
    pub m_uniform: Option<BigInt>,
    /// k for the k-very ampleness criteria (default 1).
    #[arg(long)]
    pub k: Option<u32>,
    /// Read the bundle from a JSON file with fields e, r, position, a, b, m and optional k.
    #[arg(long, conflicts_with_all = ["e", "r", "position", "a", "b", "m", "m_uniform"])]
    pub json: Option<PathBuf>,
}

impl BundleArgs {
    fn flags(&self) -> BundleFlags {
        BundleFlags {
            e: self.e,
            r: self.r,
            position: self.position.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            m: self.m.clone(),
            m_uniform: self.m_uniform.clone(),
            k: self.k,
            json: self.json.clone(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run all twelve criteria and the obstruction checks on one bundle.
    Check {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Largest beta for section-type catalog classes (default lambda + 1).
        #[arg(long)]
        beta_max: Option<u64>,
        /// Bound on alpha, beta for the generic obstruction sweep.
        #[arg(long, default_value_t = 3)]
        generic_bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lower bounds for the Seshadri constant of a C_e + b f at r very general points.
    Seshadri {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate criteria over a box of (a, b) values.
    Scan {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        position: Option<String>,
        #[arg(long)]
        a_min: i64,
        #[arg(long)]
        a_max: i64,
        #[arg(long)]
        b_min: i64,
        #[arg(long)]
        b_max: i64,
        /// Multiplicity template as a comma-separated list.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        m_uniform: Option<BigInt>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Comma-separated subset of columns, e.g. ampI,ampIII,ggII.
        #[arg(long)]
        criteria: Option<String>,
        /// Report cells where a satisfied criterion stops being satisfied as b grows.
        #[arg(long)]
        audit_monotonicity: bool,
        #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
        format: ScanFormat,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// h^0 of a C_e + b f on F_e.
    Hzero {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Intersection number of two classes, or the self-intersection of one.
    Intersect {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        r: usize,
        /// A class as a,b,m1,...,mr; give it once or twice.
        #[arg(long = "class", required = true)]
        classes: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the candidate curve classes for a model.
    Catalog {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        beta_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses names such as `ampI` or `kvaIII` into criteria at the given `k`.
pub fn parse_criteria(list: &str, k: u32) -> Result<Vec<CriterionId>, CliError> {
    let known = all_criteria(k);
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            known
                .iter()
                .find(|id| id.short_name().eq_ignore_ascii_case(name))
                .copied()
                .ok_or_else(|| CliError::input("criteria", format!("unknown criterion {name:?}")))
        })
        .collect()
}

fn emit_lines(output: &OutputArgs, lines: &[String]) -> Result<(), CliError> {
    let mut sink = Sink::open(output.out.as_deref())?;
    for l in lines {
        sink.line(l)?;
    }
    sink.finish()
}

fn emit_json(output: &OutputArgs, doc: serde_json::Value) -> Result<(), CliError> {
    emit_lines(output, &[render_document(doc, output.timestamps)])
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check {
            bundle,
            beta_max,
            generic_bound,
            format,
            output,
        } => {
            let spec = bundle.flags().resolve()?;
            let limits = Limits { beta_max, generic_bound };
            let doc = commands::check_document(&spec, limits)?;
            match format {
                Format::Json => emit_json(&output, doc),
                Format::Text => {
                    let reports = commands::criteria_reports(&spec)?;
                    emit_lines(&output, &commands::check_text(&spec, &doc, &reports))
                }
            }
        }
        Command::Seshadri { e, r, a, b, format, output } => {
            let doc = commands::seshadri_document(&a, &b, e, r);
            match format {
                Format::Json => emit_json(&output, doc),
                Format::Text => emit_lines(&output, &commands::seshadri_text(&doc)),
            }
        }
        Command::Scan {
            e,
            r,
            position,
            a_min,
            a_max,
            b_min,
            b_max,
            m,
            m_uniform,
            k,
            criteria,
            audit_monotonicity,
            format,
            output,
        } => {
            let position = parse_position(position.as_deref())?;
            let m = input::multiplicities(m.as_deref(), m_uniform.as_ref(), r)?;
            if m.len() != r {
                return Err(CliError::input("m", format!("expected r = {r} multiplicities, found {}", m.len())));
            }
            let criteria = match criteria {
                Some(list) => parse_criteria(&list, k)?,
                None => all_criteria(k),
            };
            let spec = ScanSpec {
                model: BlowupModel::new(e, r, position),
                a_range: (a_min, a_max),
                b_range: (b_min, b_max),
                m,
                criteria,
                audit_monotonicity,
            };
            // Open the sink first so an unwritable path fails before the scan runs.
            let mut sink = Sink::open(output.out.as_deref())?;
            let rows = scan::run(&spec)?;
            let violations = spec.audit_monotonicity.then(|| scan::audit(&spec, &rows));
            match format {
                ScanFormat::Csv => scan::write_csv(&spec, &rows, violations.as_deref(), &mut sink)?,
                ScanFormat::Json => {
                    let doc = scan::json_document(&spec, &rows, violations.as_deref());
                    sink.line(&render_document(doc, output.timestamps))?;
                }
            }
            sink.finish()
        }
        Command::Hzero { e, a, b, format, output } => match format {
            Format::Json => emit_json(&output, commands::hzero_document(&a, &b, e)?),
            Format::Text => emit_lines(&output, &[commands::hzero(&a, &b, e)?.to_string()]),
        },
        Command::Intersect {
            e,
            r,
            classes,
            format,
            output,
        } => {
            let parsed = classes
                .iter()
                .map(|c| parse_csv(c, "class"))
                .collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Json => emit_json(&output, commands::intersect_document(e, r, &parsed)?),
                Format::Text => emit_lines(&output, &[commands::intersect_value(e, r, &parsed)?.to_string()]),
            }
        }
        Command::Catalog {
            bundle,
            beta_max,
            format,
            output,
        } => {
            let mut flags = bundle.flags();
            if flags.json.is_none() {
                flags.a.get_or_insert_with(|| BigInt::from(0));
                flags.b.get_or_insert_with(|| BigInt::from(0));
            }
            let spec = flags.resolve()?;
            let limits = Limits {
                beta_max,
                generic_bound: 0,
            };
            let doc = commands::catalog_document(&spec, limits)?;
            match format {
                Format::Json => emit_json(&output, doc),
                Format::Text => emit_lines(&output, &commands::catalog_text(&doc)),
            }
        }
    }
}
