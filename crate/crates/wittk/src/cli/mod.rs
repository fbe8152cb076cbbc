//! Command-line surface. `run` parses arguments and returns the exit code with
//! the rendered output, so the binary only forwards streams.
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 size cap exceeded,
//! 4 selfcheck failure.

mod render;
pub mod selfcheck;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value as Json};

use crate::decomp::decompose;
use crate::error::{Error, Result};
use crate::kgroup::{
    cdvr_even_recursive, cdvr_from_polynomial, cdvr_k_groups, integral_agh, perfectoid_k_groups,
    CdvrData, KGroupResult, NumberRingData, RECURSION_GRID,
};
use crate::ring::json::bigint_to_json;
use crate::ring::RingDescriptor;
use crate::tr::tr_groups;
use crate::witt::{
    frobenius, from_ghost, ghost, verschiebung, witt_add, witt_mul, GhostVector, TruncationSet,
    WittVector,
};
use render::{cell, Report};
pub use selfcheck::{run_selfcheck, SelfcheckReport, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_SELFCHECK: i32 = 4;

/// Largest `n_max * i_max` accepted by `table agh`.
pub const AGH_TABLE_CELLS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Parser, Debug)]
#[command(name = "wittk", version, about = "Witt vectors and relative K-groups of truncated polynomial algebras")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Witt vector arithmetic on JSON-encoded vectors.
    Witt {
        #[command(subcommand)]
        op: WittOp,
    },
    /// p-typical decomposition of a big Witt vector.
    Decomp {
        #[arg(long)]
        p: u64,
        /// WittVector JSON over a full truncation set.
        #[arg(long)]
        vector: String,
    },
    /// Relative K-groups.
    Kgroup {
        #[command(subcommand)]
        kind: KgroupCmd,
    },
    /// Tables over parameter grids.
    Table {
        #[command(subcommand)]
        table: TableCmd,
    },
    /// TR of a finite field through the θ complexes.
    Tr {
        /// GF(q) or GF(p^f).
        #[arg(long)]
        field: String,
        #[arg(long)]
        degree_bound: u64,
        #[arg(long)]
        precision: u32,
    },
    /// Run the property suites.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum WittOp {
    /// Witt sum of two vectors over the same ring and truncation set
    Add {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Witt product of two vectors over the same ring and truncation set
    Mul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Verschiebung V_n.
    #[command(visible_alias = "V")]
    Ver {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: String,
        /// Target truncation set as a JSON index list; defaults to {1..n*max}.
        #[arg(long)]
        target: Option<String>,
    },
    /// Frobenius F_n.
    #[command(visible_alias = "F")]
    Frob {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: String,
    },
    /// Ghost components.
    Ghost {
        #[arg(long)]
        a: String,
    },
    /// Witt vector with the given ghost components (Z coefficients).
    FromGhost {
        /// GhostVector JSON.
        #[arg(long)]
        g: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum KgroupCmd {
    /// K_{2r-1} of R[x]/x^e for perfectoid R with the given residue field.
    Perfectoid {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        field: String,
        /// Report the degree-2r companion instead.
        #[arg(long)]
        even: bool,
    },
    /// K_{2i}, K_{2i+1} of A[x]/x^n for a complete discrete valuation ring A.
    Cdvr {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, required_unless_present = "eisenstein")]
        e: Option<u64>,
        #[arg(long = "dE", required_unless_present = "eisenstein")]
        d_e: Option<u64>,
        /// Eisenstein polynomial coefficients, constant term first, e.g. "-2,0,1".
        #[arg(long, conflicts_with_all = ["e", "d_e"], allow_hyphen_values = true)]
        eisenstein: Option<String>,
        /// p-adic precision for reading the Eisenstein polynomial.
        #[arg(long, default_value_t = 20)]
        precision: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        i: u64,
    },
    /// Order of K_{2i} and rank of K_{2i+1} for O_K[x]/x^n (K = Q by default).
    Integral {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        i: u64,
        /// NumberRingData JSON for a general number field.
        #[arg(long)]
        number_ring: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TableCmd {
    /// Orders (ni)!(i!)^{n-2} and ranks n-1 over Z.
    Agh {
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        i_max: u64,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let text = e.render().to_string();
            return match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let (code, report) = match dispatch(&cli.command) {
        Ok(ok) => ok,
        Err(e) => {
            return Outcome {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let stdout = match cli.format {
        Format::Json => render::json(&report),
        Format::Csv => render::csv(&report),
        Format::Markdown => render::markdown(&report),
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn parse_json(s: &str) -> Result<Json> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad JSON argument: {e}")))
}

fn parse_vector(s: &str) -> Result<WittVector> {
    WittVector::from_json(&parse_json(s)?)
}

/// Accepts `GF(q)`, `GF(p^f)`, `F_q` and `Fq`.
pub fn parse_field(s: &str) -> Result<RingDescriptor> {
    let t = s.trim();
    let inner = t
        .strip_prefix("GF(")
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| t.strip_prefix("F_"))
        .or_else(|| t.strip_prefix('F'))
        .ok_or_else(|| Error::Parse(format!("unrecognized field '{s}'")))?;
    let bad = || Error::Parse(format!("unrecognized field '{s}'"));
    let (p, f) = match inner.split_once('^') {
        Some((a, b)) => (
            a.trim().parse::<u64>().map_err(|_| bad())?,
            b.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => {
            let q = inner.trim().parse::<u64>().map_err(|_| bad())?;
            crate::arith::prime_power(q)
                .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?
        }
    };
    RingDescriptor::gf(p, f)
}

fn vector_report(w: &WittVector) -> Report {
    let rows = w
        .trunc()
        .iter()
        .zip(w.values())
        .map(|(n, v)| vec![n.to_string(), cell(&w.ring().value_to_json(v))])
        .collect();
    Report::new(w.to_json(), &["index", "coefficient"], rows)
}

fn kgroup_report(k: &KGroupResult) -> Report {
    let doc = k.to_json();
    let row = ["degree", "free_rank", "torsion", "order_valuation", "provenance", "notes"]
        .iter()
        .map(|key| cell(&doc[*key]))
        .collect();
    Report::new(
        doc.clone(),
        &["degree", "free_rank", "torsion", "order_valuation", "provenance", "notes"],
        vec![row],
    )
}

fn dispatch(cmd: &Command) -> Result<(i32, Report)> {
    let report = match cmd {
        Command::Witt { op } => witt_cmd(op)?,
        Command::Decomp { p, vector } => {
            let rep = decompose(&parse_vector(vector)?, *p)?;
            let rows = rep
                .components
                .iter()
                .map(|c| vec![c.u.to_string(), c.length.to_string(), c.vector.to_string()])
                .collect();
            Report::new(
                serde_json::to_value(&rep).expect("plain data"),
                &["u", "length", "component"],
                rows,
            )
        }
        Command::Kgroup { kind } => kgroup_cmd(kind)?,
        Command::Table {
            table: TableCmd::Agh { n_max, i_max },
        } => agh_table(*n_max, *i_max)?,
        Command::Tr {
            field,
            degree_bound,
            precision,
        } => tr_cmd(field, *degree_bound, *precision)?,
        Command::Selfcheck { suite, seed } => {
            let rep = run_selfcheck(*suite, *seed);
            return Ok((rep.exit_code(), rep.report()));
        }
    };
    Ok((EXIT_OK, report))
}

fn witt_cmd(op: &WittOp) -> Result<Report> {
    Ok(match op {
        WittOp::Add { a, b } => vector_report(&witt_add(&parse_vector(a)?, &parse_vector(b)?)?),
        WittOp::Mul { a, b } => vector_report(&witt_mul(&parse_vector(a)?, &parse_vector(b)?)?),
        WittOp::Ver { n, a, target } => {
            let w = parse_vector(a)?;
            let t = match target {
                Some(t) => serde_json::from_str::<TruncationSet>(t)
                    .map_err(|e| Error::Parse(format!("bad target: {e}")))?,
                None => TruncationSet::full(n * w.trunc().max().unwrap_or(0)),
            };
            t.check_cap()?;
            vector_report(&verschiebung(*n, &w, &t)?)
        }
        WittOp::Frob { n, a } => vector_report(&frobenius(*n, &parse_vector(a)?)?),
        WittOp::Ghost { a } => {
            let g = ghost(&parse_vector(a)?);
            let rows = g
                .trunc()
                .iter()
                .zip(g.values())
                .map(|(n, v)| vec![n.to_string(), cell(&g.ring().value_to_json(v))])
                .collect();
            Report::new(g.to_json(), &["index", "ghost"], rows)
        }
        WittOp::FromGhost { g } => {
            let g = GhostVector::from_json(&parse_json(g)?)?;
            vector_report(&from_ghost(&g)?)
        }
    })
}

fn kgroup_cmd(kind: &KgroupCmd) -> Result<Report> {
    match kind {
        KgroupCmd::Perfectoid { p, e, r, field, even } => {
            let (odd, ev) = perfectoid_k_groups(*p, *e, *r, &parse_field(field)?)?;
            Ok(kgroup_report(if *even { &ev } else { &odd }))
        }
        KgroupCmd::Cdvr {
            p,
            f,
            e,
            d_e,
            eisenstein,
            precision,
            n,
            i,
        } => {
            let data = match eisenstein {
                Some(text) => {
                    let coeffs = text
                        .split(',')
                        .map(|c| c.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Error::Parse(format!("bad coefficient list '{text}'")))?;
                    cdvr_from_polynomial(*p, *f, &coeffs, *precision)?
                }
                None => CdvrData::new(
                    *p,
                    *f,
                    e.expect("required by parser"),
                    d_e.expect("required by parser"),
                )?,
            };
            let (odd, mut even) = cdvr_k_groups(&data, *n, *i)?;
            if *n <= RECURSION_GRID && *i <= RECURSION_GRID {
                let rec = cdvr_even_recursive(&data, *n, *i)?;
                if rec != even.order_valuation() {
                    return Err(Error::Precondition(format!(
                        "level sum {rec} differs from closed form {}",
                        even.order_valuation()
                    )));
                }
                even.provenance.push("recurrence".into());
            }
            let doc = json!({
                "data": serde_json::to_value(&data).expect("plain data"),
                "odd": odd.to_json(),
                "even": even.to_json(),
            });
            let rows = [&even, &odd]
                .iter()
                .map(|k| {
                    let j = k.to_json();
                    vec![
                        k.degree.to_string(),
                        k.free_rank.to_string(),
                        cell(&j["torsion"]),
                        cell(&j["order_valuation"]),
                    ]
                })
                .collect();
            Ok(Report::new(doc, &["degree", "free_rank", "torsion", "order_valuation"], rows))
        }
        KgroupCmd::Integral { n, i, number_ring } => {
            let ring = match number_ring {
                Some(s) => serde_json::from_value::<NumberRingData>(parse_json(s)?)
                    .map_err(|e| Error::Parse(format!("bad number ring data: {e}")))?,
                None => NumberRingData::rationals(),
            };
            let r = integral_agh(*n, *i, &ring)?;
            let order = bigint_to_json(&BigInt::from(r.order.clone()));
            let doc = json!({"order": order, "rank": r.rank});
            Ok(Report::new(
                doc,
                &["order", "rank"],
                vec![vec![r.order.to_string(), r.rank.to_string()]],
            ))
        }
    }
}

fn agh_table(n_max: u64, i_max: u64) -> Result<Report> {
    if n_max == 0 || i_max == 0 {
        return Err(Error::invalid("n-max and i-max must be positive"));
    }
    if n_max.saturating_mul(i_max) > AGH_TABLE_CELLS {
        return Err(Error::CapExceeded {
            what: format!("{n_max} x {i_max} table"),
            limit: AGH_TABLE_CELLS,
        });
    }
    let q = NumberRingData::rationals();
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut grid = vec![vec![String::new(); i_max as usize]; n_max as usize];
    for n in 1..=n_max {
        for i in 1..=i_max {
            let r = integral_agh(n, i, &q)?;
            let vals: serde_json::Map<String, Json> = r
                .valuations
                .iter()
                .map(|(p, v)| (p.to_string(), json!(v)))
                .collect();
            entries.push(json!({
                "n": n,
                "i": i,
                "order": bigint_to_json(&BigInt::from(r.order.clone())),
                "rank": r.rank,
                "valuations": vals,
            }));
            let factored = r
                .valuations
                .iter()
                .map(|(p, v)| format!("{p}^{v}"))
                .collect::<Vec<_>>()
                .join("*");
            rows.push(vec![
                n.to_string(),
                i.to_string(),
                r.order.to_string(),
                r.rank.to_string(),
                factored,
            ]);
            grid[n as usize - 1][i as usize - 1] = format!("{} / {}", r.order, r.rank);
        }
    }
    let mut headers = vec!["n \\ i".to_string()];
    headers.extend((1..=i_max).map(|i| i.to_string()));
    let md_rows: Vec<Vec<String>> = grid
        .into_iter()
        .enumerate()
        .map(|(k, mut row)| {
            row.insert(0, (k + 1).to_string());
            row
        })
        .collect();
    let mut report = Report::new(
        json!({"rows": entries}),
        &["n", "i", "order", "rank", "factorization"],
        rows,
    );
    report.markdown = Some(format!(
        "cells: order of K_2i / rank of K_2i+1\n\n{}",
        render::markdown_table(&headers, &md_rows)
    ));
    Ok(report)
}

fn tr_cmd(field: &str, degree_bound: u64, precision: u32) -> Result<Report> {
    let k = parse_field(field)?;
    let groups = tr_groups(&k, degree_bound, precision)?;
    let entries: Vec<Json> = groups
        .iter()
        .map(|(j, g)| {
            json!({
                "degree": j,
                "group": g.group.to_json(),
                "zp_rank": g.saturated(),
                "display": g.to_string(),
            })
        })
        .collect();
    let rows = groups
        .iter()
        .map(|(j, g)| vec![j.to_string(), g.to_string(), g.saturated().to_string()])
        .collect();
    Ok(Report::new(
        json!({"field": k.to_string(), "precision": precision, "groups": entries}),
        &["degree", "group", "zp_rank"],
        rows,
    ))
}
