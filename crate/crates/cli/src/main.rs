use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ncd_core::antipode::{antipode_hypertrees, antipode_schmitt_with_budget, HopfElement};
use ncd_core::chains::{all_chains, chain_to_parking, parking_to_chain, DParkingFunction};
use ncd_core::parking_tree::{enumerate_parking_trees, parking_to_tree};
use ncd_core::plane_tree::partition_to_tree;
use ncd_core::poset::{build_poset_with, BuildOptions, GradedPoset, PosetDump, DEFAULT_BUDGET};
use ncd_core::series::{closed_form, solve_cc_star, ClosedForm, TruncatedSeries};
use ncd_core::verify::{brute_count, run_suite};
use ncd_core::{svg, NoncrossingPartition};

#[derive(Parser, Debug)]
#[command(name = "ncd", version, about = "Posets of d-indivisible noncrossing partitions")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Largest poset (in elements) to construct.
    #[arg(long, global = true, env = "NCD_BUDGET", default_value_t = DEFAULT_BUDGET, value_name = "ELEMS")]
    budget: u128,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone)]
struct Size {
    #[arg(long)]
    d: usize,
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    k: Option<usize>,
    /// Ground set size, `d*k + 1`.
    #[arg(long)]
    n: Option<usize>,
}

impl Size {
    /// `(n, k)` after checking `n = dk + 1`.
    fn resolve(&self) -> Result<(usize, usize)> {
        if self.d == 0 {
            bail!("--d must be at least 1");
        }
        match (self.k, self.n) {
            (Some(k), None) => Ok((self.d * k + 1, k)),
            (None, Some(n)) if n >= 1 && (n - 1) % self.d == 0 => Ok((n, (n - 1) / self.d)),
            (None, Some(n)) => bail!("n = {n} is not congruent to 1 mod {}", self.d),
            _ => bail!("give exactly one of --k and --n"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a closed-form count, optionally against brute force.
    Count {
        #[command(flatten)]
        size: Size,
        #[arg(long, default_value = "cardinality", value_parser = clap::builder::PossibleValuesParser::new(ClosedForm::NAMES))]
        kind: String,
        /// Rank, for the rank-refined kinds.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        brute: bool,
    },
    /// Rank-count triangle for k = 0..=K.
    Table {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "rank-count")]
        kind: TableKind,
    },
    /// Build the poset and dump it, or validate a dump with --input.
    Poset {
        #[arg(long, required_unless_present = "input")]
        d: Option<usize>,
        #[arg(long, conflicts_with = "n")]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_name = "FILE", conflicts_with_all = ["d", "k", "n"])]
        input: Option<PathBuf>,
    },
    /// Möbius function from bottom to top.
    Mobius {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        brute: bool,
    },
    /// Maximal chains of the poset.
    Chains {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value = "labels")]
        emit: ChainEmit,
    },
    /// Images of one d-parking function.
    Parking {
        #[arg(long)]
        d: usize,
        /// Comma-separated values, e.g. 2,1,3,1,3.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<usize>,
        #[arg(long, value_enum, default_value = "chain")]
        emit: ParkingEmit,
    },
    /// Labeled plane trees of the poset elements, or all d-parking trees.
    Trees {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value = "plane")]
        emit: TreeEmit,
    },
    /// Antipode of the poset in the Hopf algebra.
    Antipode {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Run the cross-check suite; exits 1 on any failure.
    Verify {
        #[command(flatten)]
        size: Size,
    },
    /// SVG of a partition, its plane tree, or a parking tree.
    Render {
        /// Partition in block notation, e.g. 1|2,9,10|3|4,5,6,7,8|11.
        #[arg(long, group = "what")]
        partition: Option<String>,
        /// Labeled plane tree of this partition.
        #[arg(long, group = "what")]
        tree: Option<String>,
        /// Parking tree of these comma-separated values (needs --d).
        #[arg(long, group = "what", value_delimiter = ',', requires = "d")]
        parking: Option<Vec<usize>>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Coefficients of C, C* or B = C C* with a = a* = 1.
    Series {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, value_enum, default_value = "b")]
        which: Which,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    RankCount,
    SingletonRank,
    SmallBlocksRank,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChainEmit {
    Labels,
    Chains,
    Parking,
    Count,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParkingEmit {
    Chain,
    Tree,
    Straightened,
    Expansion,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TreeEmit {
    Plane,
    Parking,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Schmitt,
    Hypertree,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    C,
    CStar,
    B,
}

/// What a subcommand produced, and whether its checks held.
struct Output {
    body: String,
    ok: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, ok: true }
    }
}

fn pretty(v: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn build(size: &Size, budget: u128) -> Result<GradedPoset> {
    let (n, _) = size.resolve()?;
    Ok(build_poset_with(
        n,
        size.d,
        &BuildOptions {
            budget,
            ..Default::default()
        },
    )?)
}

fn unsupported(cmd: &str, f: Format) -> anyhow::Error {
    anyhow!("`{cmd}` does not support --format {f:?}")
}

fn csv_rows(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn hopf_json(h: &HopfElement) -> Result<String> {
    pretty(&h.terms())
}

fn run(cli: &Cli) -> Result<Output> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Count { size, kind, j, brute } => {
            let (_, k) = size.resolve()?;
            let kind = ClosedForm::from_name(kind, k, *j)?;
            let formula = closed_form(kind, size.d)?;
            let brute = if *brute { Some(brute_count(kind, size.d, cli.budget)?) } else { None };
            let ok = brute.as_ref().is_none_or(|b| *b == formula);
            let body = match fmt(Format::Text) {
                Format::Text => match &brute {
                    Some(b) => format!("formula={formula} brute={b} {}\n", if ok { "OK" } else { "MISMATCH" }),
                    None => format!("formula={formula}\n"),
                },
                Format::Json => pretty(&json!({
                    "kind": kind,
                    "d": size.d,
                    "formula": formula.to_string(),
                    "brute": brute.as_ref().map(|b| b.to_string()),
                    "ok": ok,
                }))?,
                f => return Err(unsupported("count", f)),
            };
            Ok(Output { body, ok })
        }
        Command::Table { d, k, kind } => {
            let mut rows = Vec::new();
            for kk in 0..=*k {
                let mut row = vec![kk.to_string()];
                for j in 0..=kk {
                    let i = kk - j;
                    let cf = match kind {
                        TableKind::RankCount => ClosedForm::RankCount { i, j },
                        TableKind::SingletonRank => ClosedForm::SingletonRank { i, j },
                        TableKind::SmallBlocksRank => ClosedForm::SmallBlocksRank { i, j },
                    };
                    row.push(closed_form(cf, *d)?.to_string());
                }
                rows.push(row);
            }
            let header: Vec<String> =
                std::iter::once("k".to_string()).chain((0..=*k).map(|j| format!("j={j}"))).collect();
            let body = match fmt(Format::Text) {
                Format::Text => {
                    let mut all = vec![header];
                    all.extend(rows);
                    aligned(&all)
                }
                Format::Csv => {
                    let padded: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            let mut r = r.clone();
                            r.resize(header.len(), String::new());
                            r
                        })
                        .collect();
                    csv_rows(&header, &padded)?
                }
                Format::Json => {
                    let v: Vec<Vec<&String>> = rows.iter().map(|r| r[1..].iter().collect()).collect();
                    pretty(&v)?
                }
                f => return Err(unsupported("table", f)),
            };
            Ok(Output::ok(body))
        }
        Command::Poset { d, k, n, input } => {
            let p = match (d, input) {
                (_, Some(path)) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let dump: PosetDump = serde_json::from_str(&text)?;
                    GradedPoset::from_dump(&dump)?
                }
                (Some(d), None) => build(&Size { d: *d, k: *k, n: *n }, cli.budget)?,
                (None, None) => bail!("give --d with --k or --n, or --input"),
            };
            let body = match fmt(Format::Json) {
                Format::Json => pretty(&p.to_dump())?,
                Format::Text => {
                    let mut out = format!(
                        "NC^{}_{}: {} elements, rank {}, rank counts {:?}\n",
                        p.d(),
                        p.n(),
                        p.len(),
                        p.rank(),
                        p.rank_counts()
                    );
                    for r in 0..=p.rank() {
                        let xs: Vec<String> = (0..p.len())
                            .filter(|&i| p.rank_of(i) == r)
                            .map(|i| p.element(i).to_string())
                            .collect();
                        out.push_str(&format!("rank {r}: {}\n", xs.join("  ")));
                    }
                    out
                }
                f => return Err(unsupported("poset", f)),
            };
            Ok(Output::ok(body))
        }
        Command::Mobius { size, brute } => {
            let (_, k) = size.resolve()?;
            let formula = closed_form(ClosedForm::Mobius { k }, size.d)?;
            let brute = if *brute {
                let p = build(size, cli.budget)?;
                let (rec, hall) = (p.mobius_recursive(), p.mobius_hall());
                if rec != hall {
                    bail!("recursive and chain-sum Möbius values differ: {rec} vs {hall}");
                }
                Some(rec)
            } else {
                None
            };
            let ok = brute.is_none_or(|b| formula == b.into());
            let body = match fmt(Format::Text) {
                Format::Text => match brute {
                    Some(b) => format!("formula={formula} brute={b} {}\n", if ok { "OK" } else { "MISMATCH" }),
                    None => format!("{formula}\n"),
                },
                Format::Json => pretty(&json!({
                    "d": size.d,
                    "k": k,
                    "mobius": formula.to_string(),
                    "brute": brute,
                    "ok": ok,
                }))?,
                f => return Err(unsupported("mobius", f)),
            };
            Ok(Output { body, ok })
        }
        Command::Chains { size, emit } => {
            let p = build(size, cli.budget)?;
            let format = fmt(Format::Json);
            if !matches!(format, Format::Json | Format::Text) {
                return Err(unsupported("chains", format));
            }
            let chains = all_chains(&p);
            let body = match (emit, format) {
                (ChainEmit::Count, _) => format!("{}\n", chains.len()),
                (ChainEmit::Labels, Format::Json) => {
                    pretty(&chains.iter().map(|c| c.labels()).collect::<Vec<_>>())?
                }
                (ChainEmit::Chains, Format::Json) => pretty(&chains)?,
                (ChainEmit::Parking, Format::Json) => {
                    pretty(&chains.iter().map(chain_to_parking).collect::<Vec<_>>())?
                }
                (ChainEmit::Labels, _) => chains
                    .iter()
                    .map(|c| format!("{:?}\n", c.labels()))
                    .collect(),
                (ChainEmit::Chains, _) => chains.iter().map(|c| format!("{c}\n")).collect(),
                (ChainEmit::Parking, _) => chains.iter().map(|c| format!("{}\n", chain_to_parking(c))).collect(),
            };
            Ok(Output::ok(body))
        }
        Command::Parking { d, values, emit } => {
            let pf = DParkingFunction::new(*d, values.clone())?;
            let tree = parking_to_tree(&pf);
            let tree = match emit {
                ParkingEmit::Chain => None,
                ParkingEmit::Tree => Some(tree),
                ParkingEmit::Straightened => Some(tree.straighten()),
                ParkingEmit::Expansion => Some(tree.expansion()),
            };
            let body = match (tree, fmt(Format::Json)) {
                (None, Format::Json) => pretty(&parking_to_chain(&pf))?,
                (None, Format::Text) => format!("{}\n", parking_to_chain(&pf)),
                (Some(t), Format::Json) => pretty(&json!({
                    "tree": t.to_dump(),
                    "parking": t.to_parking(),
                }))?,
                (Some(t), Format::Text) => format!("{t}\n{}\n", t.to_parking()),
                (Some(t), Format::Svg) => svg::parking_tree(&t),
                (_, f) => return Err(unsupported("parking", f)),
            };
            Ok(Output::ok(body))
        }
        Command::Trees { size, emit } => {
            let (_, k) = size.resolve()?;
            let body = match (emit, fmt(Format::Json)) {
                (TreeEmit::Plane, f @ (Format::Json | Format::Text)) => {
                    let p = build(size, cli.budget)?;
                    let pairs: Vec<_> = p.elements().iter().map(|pi| (pi, partition_to_tree(pi))).collect();
                    if f == Format::Json {
                        pretty(
                            &pairs
                                .iter()
                                .map(|(pi, t)| json!({"partition": pi, "tree": t}))
                                .collect::<Vec<Value>>(),
                        )?
                    } else {
                        pairs
                            .iter()
                            .map(|(pi, t)| format!("{pi}\t{:?}\n", t.preorder_labels()))
                            .collect()
                    }
                }
                (TreeEmit::Parking, Format::Json) => pretty(
                    &enumerate_parking_trees(size.d, k)
                        .iter()
                        .map(|t| t.to_dump())
                        .collect::<Vec<_>>(),
                )?,
                (TreeEmit::Parking, Format::Text) => enumerate_parking_trees(size.d, k)
                    .iter()
                    .map(|t| format!("{t}\n"))
                    .collect(),
                (_, f) => return Err(unsupported("trees", f)),
            };
            Ok(Output::ok(body))
        }
        Command::Antipode { size, method } => {
            let (n, _) = size.resolve()?;
            let schmitt = match method {
                Method::Hypertree => None,
                _ => Some(antipode_schmitt_with_budget(&build(size, cli.budget)?, u128::MAX)?),
            };
            let hyper = match method {
                Method::Schmitt => None,
                _ => Some(antipode_hypertrees(n, size.d)?),
            };
            let ok = match (&schmitt, &hyper) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            };
            let value = schmitt.as_ref().or(hyper.as_ref()).expect("at least one method runs");
            let body = match fmt(Format::Json) {
                Format::Json => hopf_json(value)?,
                Format::Text => {
                    let mut out = format!("{value}\n");
                    if *method == Method::Both {
                        out.push_str(if ok { "methods agree\n" } else { "methods DISAGREE\n" });
                    }
                    out
                }
                f => return Err(unsupported("antipode", f)),
            };
            if !ok {
                eprintln!(
                    "antipode mismatch: schmitt = {}, hypertrees = {}",
                    schmitt.unwrap(),
                    hyper.unwrap()
                );
            }
            Ok(Output { body, ok })
        }
        Command::Verify { size } => {
            let (n, _) = size.resolve()?;
            let report = run_suite(n, size.d, cli.budget, cli.seed)?;
            let body = match fmt(Format::Text) {
                Format::Text => {
                    let mut out: String = report
                        .checks
                        .iter()
                        .map(|c| {
                            let tag = if c.passed { "PASS" } else { "FAIL" };
                            format!("{tag} {}: {}\n", c.name, c.detail)
                        })
                        .collect();
                    let failed = report.checks.iter().filter(|c| !c.passed).count();
                    out.push_str(&format!(
                        "{} checks, {failed} failed\n",
                        report.checks.len()
                    ));
                    out
                }
                Format::Json => pretty(&report)?,
                f => return Err(unsupported("verify", f)),
            };
            Ok(Output {
                body,
                ok: report.passed(),
            })
        }
        Command::Render { partition, tree, parking, d } => {
            let f = fmt(Format::Svg);
            if f != Format::Svg {
                return Err(unsupported("render", f));
            }
            let body = match (partition, tree, parking) {
                (Some(p), _, _) => svg::partition_circle(&p.parse::<NoncrossingPartition>()?),
                (_, Some(p), _) => svg::labeled_plane_tree(&partition_to_tree(&p.parse()?)),
                (_, _, Some(values)) => {
                    let d = d.ok_or_else(|| anyhow!("--parking needs --d"))?;
                    svg::parking_tree(&parking_to_tree(&DParkingFunction::new(d, values.clone())?))
                }
                _ => bail!("give one of --partition, --tree, --parking"),
            };
            Ok(Output::ok(body))
        }
        Command::Series { d, order, which } => {
            if *d == 0 {
                bail!("--d must be at least 1");
            }
            let a = TruncatedSeries::geometric(*order);
            let (c, c_star) = solve_cc_star(&a, &a, *d, *order)?;
            let s = match which {
                Which::C => c,
                Which::CStar => c_star,
                Which::B => &c * &c_star,
            };
            let dump = s.to_dump();
            let rows: Vec<Vec<String>> = dump
                .terms
                .iter()
                .map(|t| {
                    let v = |x: &Value| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
                    vec![t.x.to_string(), t.s.to_string(), t.t.to_string(), v(&t.num), v(&t.den)]
                })
                .collect();
            let header: Vec<String> = ["x", "s", "t", "num", "den"].iter().map(|h| h.to_string()).collect();
            let body = match fmt(Format::Text) {
                Format::Json => pretty(&dump)?,
                Format::Csv => csv_rows(&header, &rows)?,
                Format::Text => {
                    let mut all = vec![header];
                    all.extend(rows);
                    aligned(&all)
                }
                f => return Err(unsupported("series", f)),
            };
            Ok(Output::ok(body))
        }
    }
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    let mut body = body.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &out.body) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
