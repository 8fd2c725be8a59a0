use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rayclass::bounds::{hbar, BoundReport};
use rayclass::curve::{PlaceSpec, PlaneCurve};
use rayclass::ffield::{prime_power, FieldCtx};
use rayclass::harness::output::{aligned, write_census, write_json, write_report, write_rows};
use rayclass::harness::{
    census, generate_table, verify, with_jobs, CensusOptions, CurveGround, Format, GoldenCorpus, Ground,
    HarnessError, RowGroup, SetFamily, VerifyOptions,
};
use rayclass::lambda::{Description, LambdaSeq, LambdaSource};
use rayclass::method_a::{lambda_seq_a, RationalSet};
use rayclass::method_b::{describe_units, lambda_seq_b, UnitSystem};
use rayclass::raygenus::{field_invariants, FieldInvariants};

/// Ray class field invariants, record tables and their verification.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hasse-Weil, Serre and Oesterle bounds, with the S-class number bound when --n is set.
    Bounds {
        /// Size of the constant field.
        #[arg(long)]
        q: u64,
        /// Genus.
        #[arg(long)]
        g: u64,
        /// Number of rational places in S.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Method A over F_q(x).
    MethodA {
        #[command(flatten)]
        set: RationalArgs,
        /// Last n of the lambda sequence.
        #[arg(long, default_value_t = 24)]
        n_max: usize,
    },
    /// Method B, on a curve with a units file or over F_q(x).
    MethodB {
        #[command(flatten)]
        ground: MethodBArgs,
        /// Last n of the lambda sequence.
        #[arg(long, default_value_t = 24)]
        n_max: usize,
    },
    /// Genus and place count of L_{l,S} from a description or a lambda JSON file.
    Genus {
        /// Size of the constant field.
        #[arg(long)]
        q: u32,
        /// Values of l, as `5` or `1..9`.
        #[arg(long, value_parser = parse_range)]
        l: RangeInclusive<u32>,
        /// Description such as `t^2 + t^5`.
        #[arg(long, conflicts_with = "lambda")]
        description: Option<String>,
        /// JSON from `method-a` or `method-b` (or a bare lambda object).
        #[arg(long)]
        lambda: Option<PathBuf>,
        /// Genus of the ground field.
        #[arg(long, default_value_t = 0)]
        g_k: u64,
        /// S-class number of the ground field.
        #[arg(long, default_value_t = 1)]
        h_s: u64,
        /// Rational places in S.
        #[arg(long)]
        s1: u64,
        /// h_S equals h of S together with P.
        #[arg(long)]
        eps: bool,
    },
    /// Rows over F_q(x) for several |S|, or over a curve.
    Table {
        /// Values of l, as `5` or `1..9`.
        #[arg(long, value_parser = parse_range)]
        l: RangeInclusive<u32>,
        /// Over F_q(x): one set per size.
        #[arg(long, requires = "sizes", conflicts_with = "curve")]
        q: Option<u32>,
        /// Sizes of S, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u32>,
        #[command(flatten)]
        curve: CurveArgs,
        /// S-class number of the curve.
        #[arg(long, default_value_t = 1)]
        h_s: u64,
        /// h_S equals h of S together with P.
        #[arg(long)]
        eps: bool,
    },
    /// Distinct descriptions over all sets of rational places of F_q(x).
    Census {
        /// Size of the constant field, at most 32.
        #[arg(long)]
        q: u32,
        /// Restrict |S|, as `4` or `2..6`.
        #[arg(long, value_parser = parse_range)]
        sizes: Option<RangeInclusive<u32>>,
        /// Skip the scaling normalization.
        #[arg(long)]
        full: bool,
        /// Run Method B on every set and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Recompute the golden corpus; exit status 0 only if everything reproducible passes.
    Verify {
        /// Groups: rational-prime, rational-q4, example, record.
        #[arg(long, value_delimiter = ',')]
        groups: Vec<String>,
        /// Candidate sets, and swaps per local search, for each record row.
        #[arg(long, default_value_t = 4000)]
        budget: usize,
        /// Skip the census over F_16.
        #[arg(long)]
        no_census: bool,
        /// Alternative corpus file.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RationalArgs {
    /// Size of the constant field.
    #[arg(long)]
    q: u32,
    /// Exponents j of the alpha = w^j in A_S, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "size")]
    set: Vec<u32>,
    /// Take S = {0, w, .., w^(size-2)}.
    #[arg(long)]
    size: Option<u32>,
}

#[derive(Args)]
struct CurveArgs {
    /// Curve file.
    #[arg(long, requires_all = ["units", "r"])]
    curve: Option<PathBuf>,
    /// Units file.
    #[arg(long)]
    units: Option<PathBuf>,
    /// `pole` or `affine:a,b`.
    #[arg(long, default_value = "affine:0,0")]
    place: String,
    /// Number of units spanning S.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Args)]
struct MethodBArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Over F_q(x) instead of a curve.
    #[arg(long, conflicts_with = "curve")]
    q: Option<u32>,
    /// Exponents j of the alpha = w^j in A_S, comma separated.
    #[arg(long, value_delimiter = ',')]
    set: Vec<u32>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not a number: {t:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => num(s).map(|v| v..=v),
    }
}

#[derive(Serialize)]
struct MethodAOutput {
    profile: rayclass::method_a::EProfile,
    description: Option<String>,
    lambda: LambdaSeq,
}

#[derive(Serialize)]
struct MethodBOutput {
    description: String,
    truncation: Option<usize>,
    lambda: LambdaSeq,
}

#[derive(Serialize)]
struct BoundsOutput {
    #[serde(flatten)]
    report: BoundReport,
    hbar: Option<String>,
    hbar_value: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, jobs) = (cli.format, cli.jobs);
    match with_jobs(jobs, move || run(cli.command, format)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) | Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, HarnessError> {
    Ok(std::fs::read_to_string(path)?)
}

fn curve_ground(args: &CurveArgs, h_s: u64, eps: bool) -> Result<Option<CurveGround>, HarnessError> {
    let (Some(cpath), Some(upath), Some(r)) = (&args.curve, &args.units, args.r) else {
        return Ok(None);
    };
    let curve = PlaneCurve::parse(&read(cpath)?)?;
    let units = UnitSystem::parse(curve.field(), &read(upath)?)?;
    let place = PlaceSpec::parse(&curve, &args.place)?;
    Ok(Some(CurveGround { curve, place, units, r, h_s, eps }))
}

fn rational_set(ctx: &FieldCtx, set: &[u32], size: Option<u32>) -> Result<RationalSet, HarnessError> {
    Ok(match size {
        Some(s) => RationalSet::initial_segment(ctx, s)?,
        None => RationalSet::from_exponents(ctx, set)?,
    })
}

fn usage(msg: &str) -> HarnessError {
    HarnessError::Io(io::Error::new(io::ErrorKind::InvalidInput, msg.to_string()))
}

fn run(command: Command, format: Format) -> Result<ExitCode, HarnessError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Bounds { q, g, n } => {
            let report = BoundReport::new(q, g);
            let hb = n.map(|n| hbar(q, g, n)).transpose().map_err(|e| usage(&e.to_string()))?;
            let output = BoundsOutput {
                report,
                hbar: hb.as_ref().map(|h| h.to_string()),
                hbar_value: hb.as_ref().map(|h| h.to_f64()),
            };
            match format {
                Format::Json => write_json(&output, &mut out)?,
                _ => {
                    let r = &output.report;
                    let mut cells = vec![
                        vec!["hasse-weil".into(), r.hasse_weil.to_string()],
                        vec!["serre".into(), r.serre.to_string()],
                        vec!["oesterle".into(), r.oesterle.to_string()],
                        vec!["maximal admissible".into(), r.maximal_admissible.to_string()],
                    ];
                    if let (Some(h), Some(v)) = (&output.hbar, output.hbar_value) {
                        cells.push(vec!["hbar".into(), format!("{h} = {v:.6}")]);
                    }
                    let sep = if format == Format::Csv { "," } else { "" };
                    if sep.is_empty() {
                        write!(out, "{}", aligned(&["bound", "value"], &cells))?;
                    } else {
                        writeln!(out, "bound,value")?;
                        for c in cells {
                            writeln!(out, "{},\"{}\"", c[0], c[1])?;
                        }
                    }
                }
            }
        }
        Command::MethodA { set, n_max } => {
            let ctx = FieldCtx::with_order(u64::from(set.q))?;
            let s = rational_set(&ctx, &set.set, set.size)?;
            let (profile, lambda) = lambda_seq_a(&ctx, &s, n_max);
            let description = profile.fully_valid().then(|| profile.description().to_string());
            let output = MethodAOutput { profile, description, lambda };
            match format {
                Format::Json => write_json(&output, &mut out)?,
                _ => {
                    let p = &output.profile;
                    writeln!(out, "q = {}, |S| = {}, n_S' = {}, n_S = {}", p.q, s.size(), p.n_s_prime, p.n_s)?;
                    let e_s: Vec<String> = (1..p.q).map(|n| p.e_s(u64::from(n)).to_string()).collect();
                    writeln!(out, "e_S^(1..q-1): {}", e_s.join(" "))?;
                    match &output.description {
                        Some(d) => writeln!(out, "delta_S = {d}")?,
                        None => writeln!(out, "recursion proven up to n = {}; use method-b", p.p * p.n_s_prime)?,
                    }
                    writeln!(out, "lambda^(1..): {}", join(output.lambda.from_one()))?;
                }
            }
        }
        Command::MethodB { ground, n_max } => {
            let (desc, truncation, p, e) = match curve_ground(&ground.curve, 1, false)? {
                Some(c) => {
                    let f = c.curve.field();
                    let d = describe_units(&c.curve, &c.place, &c.units.prefix(c.r), None)?;
                    (d.description, Some(d.truncation), f.p(), f.e())
                }
                None => {
                    let q = ground.q.ok_or_else(|| usage("give --curve/--units/--r or --q/--set"))?;
                    let ctx = FieldCtx::with_order(u64::from(q))?;
                    let set = RationalSet::from_exponents(&ctx, &ground.set)?;
                    let mut oracle = rayclass::harness::RationalOracle::new(ctx.clone());
                    (oracle.description_b(&set)?, None, ctx.p(), ctx.e())
                }
            };
            let lambda = lambda_seq_b(&desc, p, e, n_max);
            let output = MethodBOutput { description: desc.to_string(), truncation, lambda };
            match format {
                Format::Json => write_json(&output, &mut out)?,
                _ => {
                    writeln!(out, "delta_S = {}", output.description)?;
                    writeln!(out, "lambda^(1..): {}", join(output.lambda.from_one()))?;
                }
            }
        }
        Command::Genus { q, l, description, lambda, g_k, h_s, s1, eps } => {
            let (p, e) = prime_power(u64::from(q)).ok_or_else(|| usage("q must be a prime power"))?;
            let seq = match (description, lambda) {
                (Some(d), _) => {
                    let d = Description::parse(&d).ok_or_else(|| usage("unreadable description"))?;
                    rayclass::harness::table::lambda_reaching(&d, p, e, *l.end())
                }
                (None, Some(path)) => {
                    let value: serde_json::Value = serde_json::from_str(&read(&path)?)?;
                    let inner = value.get("lambda").cloned().unwrap_or(value);
                    serde_json::from_value::<LambdaSeq>(inner)?
                }
                (None, None) => return Err(usage("give --description or --lambda")),
            };
            let rows: Vec<FieldInvariants> = l
                .map(|l| field_invariants(u64::from(q), g_k, h_s, &seq, l, s1, eps, false))
                .collect::<Result<_, _>>()?;
            match format {
                Format::Json => write_json(&rows, &mut out)?,
                _ => {
                    let cells: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            [r.l as u64, r.n as u64, r.degree, r.genus, r.n_lower].iter().map(u64::to_string).collect()
                        })
                        .collect();
                    if format == Format::Csv {
                        writeln!(out, "l,n,degree,g,N")?;
                        for c in cells {
                            writeln!(out, "{}", c.join(","))?;
                        }
                    } else {
                        write!(out, "{}", aligned(&["l", "n", "[L:K]", "g", "N>="], &cells))?;
                        if seq.source() != LambdaSource::Hayes && !seq.is_fully_valid() {
                            writeln!(out, "lambda proven only up to n = {:?}", seq.valid_to())?;
                        }
                    }
                }
            }
        }
        Command::Table { l, q, sizes, curve, h_s, eps } => {
            let ground = match (q, curve_ground(&curve, h_s, eps)?) {
                (Some(q), _) => Ground::Rational { q, family: SetFamily::Sizes(sizes) },
                (None, Some(c)) => Ground::Curve(Box::new(c)),
                (None, None) => return Err(usage("give --q with --sizes, or --curve/--units/--r")),
            };
            let rows = generate_table(&ground, l)?;
            write_rows(&rows, format, &mut out)?;
        }
        Command::Census { q, sizes, full, cross_check } => {
            let opts = CensusOptions { sizes, full, cross_check, ..CensusOptions::new(q) };
            let report = census(&opts)?;
            write_census(&report, format, &mut out)?;
        }
        Command::Verify { groups, budget, no_census, corpus } => {
            let corpus = match corpus {
                Some(path) => GoldenCorpus::parse(&read(&path)?)?,
                None => GoldenCorpus::bundled(),
            };
            let groups = groups
                .iter()
                .map(|g| match g.as_str() {
                    "rational-prime" => Ok(RowGroup::RationalPrime),
                    "rational-q4" => Ok(RowGroup::RationalQ4),
                    "example" => Ok(RowGroup::Example),
                    "record" => Ok(RowGroup::Record),
                    other => Err(usage(&format!("unknown group {other:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let opts = VerifyOptions { groups, budget, census: !no_census, ..VerifyOptions::default() };
            let report = verify(&corpus, &opts)?;
            write_report(&report, format, &mut out)?;
            return Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}
