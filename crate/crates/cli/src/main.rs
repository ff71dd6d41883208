mod cache;
mod points;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qlevi_core::deformed_ring::{render_table, DeformedRing, TableFormat};
use qlevi_core::eigencone::{
    distinctness_check, inequalities_from_rings, irredundancy_check, maximal_rings_with, membership, Certificate,
    Criterion, Inequality, Verdict,
};
use qlevi_core::rational::{format_rational, Rational};
use qlevi_core::root_system::{parse_type_label, CartanPoint, RootSystem};
use qlevi_core::unitary_oracle::{numeric_membership, Group, GroupRep, NumericVerdict, OracleOptions};
use qlevi_core::weyl::{format_word, ParabolicContext};

use cache::TableCache;

#[derive(Parser)]
#[command(name = "qlevi", version, about = "Deformed quantum cohomology and multiplicative eigenvalue inequalities")]
struct Cli {
    /// Worker threads for parallel enumeration and search (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Always rebuild structure tables instead of reading the disk cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SpaceArgs {
    /// Root system type, e.g. G2, or a bare letter together with --rank.
    #[arg(long = "type")]
    ty: String,

    /// Rank, when not part of the type label.
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the deformed multiplication table of a maximal parabolic.
    Tables {
        #[command(flatten)]
        space: SpaceArgs,
        /// The omitted simple root (1-based, Bourbaki numbering).
        #[arg(long)]
        parabolic: usize,
        /// Prefix for class labels.
        #[arg(long, default_value = "s")]
        prefix: String,
    },
    /// List the inequalities cutting out the multiplicative eigenvalue polytope.
    Inequalities {
        #[command(flatten)]
        space: SpaceArgs,
        /// Number of factors (at least 2).
        #[arg(short = 'n')]
        n: usize,
        /// Use the undeformed criterion (Gromov-Witten invariant equal to 1).
        #[arg(long)]
        baseline: bool,
    },
    /// Decide membership of one point of the n-fold alcove.
    Member {
        #[command(flatten)]
        space: SpaceArgs,
        /// Number of factors (at least 2).
        #[arg(short = 'n')]
        n: usize,
        /// JSON file `{"points": [["p/q", ...], ...]}` with one row per factor.
        #[arg(long)]
        point: PathBuf,
    },
    /// Certify irredundancy and pairwise distinctness by exact linear programming.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Number of factors (at least 2).
        #[arg(short = 'n')]
        n: usize,
    },
    /// Compare exact membership with the numerical unitary search.
    OracleCompare {
        #[command(flatten)]
        space: SpaceArgs,
        /// Number of factors (at least 2).
        #[arg(short = 'n')]
        n: usize,
        /// Point files; when absent, random grid points are sampled.
        #[arg(long)]
        point: Vec<PathBuf>,
        /// Number of sampled points when no point file is given.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Minimum slack of sampled points against every wall and inequality.
        #[arg(long, default_value = "1/20")]
        margin: String,
        /// Seed for point sampling and for the random restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random starting points per sample for the unitary search.
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Residual below which a unitary solution counts as found.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// A failed run with its exit code: 1 for failed verification, 2 for bad input.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<qlevi_core::Error>() {
            Some(qlevi_core::Error::Internal(_)) => 1,
            _ => 2,
        };
        Self { code, error }
    }
}

impl From<qlevi_core::Error> for Failure {
    fn from(e: qlevi_core::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn verification_failure(msg: String) -> Failure {
    Failure {
        code: 1,
        error: anyhow!(msg),
    }
}

type Run = Result<String, Failure>;

fn root_system(space: &SpaceArgs) -> anyhow::Result<Arc<RootSystem>> {
    let (ty, label_rank) = parse_type_label(&space.ty)?;
    let rank = match (label_rank, space.rank) {
        (Some(a), Some(b)) if a != b => bail!("type label {} conflicts with --rank {b}", space.ty),
        (Some(r), _) | (None, Some(r)) => r,
        (None, None) => return Ok(Arc::new(RootSystem::from_label(&space.ty)?)),
    };
    Ok(Arc::new(RootSystem::new(ty, rank)?))
}

struct Session {
    cache: TableCache,
    format: Format,
}

impl Session {
    fn rings(&self, rs: &Arc<RootSystem>) -> qlevi_core::Result<Vec<Arc<DeformedRing>>> {
        maximal_rings_with(rs, |ctx| self.cache.table(ctx))
    }

    fn inequalities(&self, rs: &Arc<RootSystem>, n: usize, criterion: Criterion) -> qlevi_core::Result<Vec<Inequality>> {
        inequalities_from_rings(&self.rings(rs)?, n, criterion)
    }

    fn json(&self, value: &impl Serialize) -> String {
        let mut s = serde_json::to_string_pretty(value).expect("output serializes");
        s.push('\n');
        s
    }
}

fn words(q: &Inequality) -> String {
    q.words.iter().map(|w| format_word(w)).collect::<Vec<_>>().join(" | ")
}

fn cmd_tables(s: &Session, space: &SpaceArgs, parabolic: usize, prefix: &str) -> Run {
    let rs = root_system(space)?;
    if parabolic == 0 || parabolic > rs.rank() {
        return Err(qlevi_core::Error::NoSuchNode {
            node: parabolic,
            rank: rs.rank(),
        }
        .into());
    }
    let ctx = Arc::new(ParabolicContext::maximal(rs, parabolic - 1)?);
    let ring = DeformedRing::new(s.cache.table(ctx)?)?;
    let format = match s.format {
        Format::Text => TableFormat::Text,
        Format::Json => TableFormat::Json,
    };
    let mut out = render_table(&ring, format, prefix)?;
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}

fn cmd_inequalities(s: &Session, space: &SpaceArgs, n: usize, baseline: bool) -> Run {
    let rs = root_system(space)?;
    let criterion = if baseline { Criterion::Baseline } else { Criterion::Deformed };
    let ineqs = s.inequalities(&rs, n, criterion)?;
    Ok(match s.format {
        Format::Json => s.json(&ineqs.iter().map(|q| q.to_json(&rs)).collect::<Vec<_>>()),
        Format::Text => {
            let mut out = format!("{} inequalities for {}, n = {n}\n", ineqs.len(), rs.label());
            for (i, q) in ineqs.iter().enumerate() {
                let _ = writeln!(out, "[{i}] P{} d={} u=({}): {}", q.parabolic + 1, q.d, words(q), q.describe());
            }
            out
        }
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Inside => "inside",
        Verdict::Boundary => "boundary",
        Verdict::Outside => "outside",
    }
}

fn cmd_member(s: &Session, space: &SpaceArgs, n: usize, point: &Path) -> Run {
    let rs = root_system(space)?;
    let pts = points::read_point_file(point, n, rs.rank())?;
    let ineqs = s.inequalities(&rs, n, Criterion::Deformed)?;
    let m = membership(&rs, n, &pts, &ineqs)?;
    let slack = m.slack.as_ref().map(format_rational);
    Ok(match s.format {
        Format::Json => s.json(&json!({
            "verdict": verdict_name(m.verdict),
            "violated": m.violated,
            "tight": m.tight,
            "slack": slack,
            "violated_inequalities": m.violated.iter().map(|&i| ineqs[i].to_json(&rs)).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = format!("verdict: {}\n", verdict_name(m.verdict));
            let _ = writeln!(out, "slack: {}", slack.as_deref().unwrap_or("none"));
            for (name, list) in [("violated", &m.violated), ("tight", &m.tight)] {
                let _ = writeln!(out, "{name}: {}", list.len());
                for &i in list {
                    let _ = writeln!(out, "  [{i}] {}", ineqs[i].describe());
                }
            }
            out
        }
    })
}

fn cert_json(i: usize, c: &Certificate) -> serde_json::Value {
    let fmt = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
    match c {
        Certificate::ViolatingPoint { point, value } => json!({
            "index": i, "kind": "violating-point", "point": fmt(point), "value": format_rational(value),
        }),
        Certificate::Facet { dimension, points } => json!({
            "index": i, "kind": "facet", "dimension": dimension,
            "points": points.iter().map(|p| fmt(p)).collect::<Vec<_>>(),
        }),
        Certificate::Redundant { optimum, face_dimension } => json!({
            "index": i, "kind": "redundant", "optimum": format_rational(optimum), "face_dimension": face_dimension,
        }),
    }
}

fn cmd_verify(s: &Session, space: &SpaceArgs, n: usize) -> Run {
    let rs = root_system(space)?;
    let ineqs = s.inequalities(&rs, n, Criterion::Deformed)?;
    let report = irredundancy_check(&rs, n, &ineqs)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let dist = distinctness_check(&ineqs);
    let certified = report.certificates.iter().filter(|c| c.is_irredundant()).count();
    let checked = !report.certificates.is_empty() || ineqs.is_empty();
    let out = match s.format {
        Format::Json => s.json(&json!({
            "type": rs.label(),
            "n": n,
            "total": ineqs.len(),
            "checked": checked,
            "irredundant": certified,
            "failures": report.failures,
            "duplicate_pairs": dist.proportional_pairs,
            "warnings": report.warnings,
            "certificates": report.certificates.iter().enumerate().map(|(i, c)| cert_json(i, c)).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            for (i, c) in report.certificates.iter().enumerate() {
                let what = match c {
                    Certificate::ViolatingPoint { value, .. } => {
                        format!("irredundant (violating point, excess {})", format_rational(value))
                    }
                    Certificate::Facet { dimension, .. } => format!("irredundant (facet of dimension {dimension})"),
                    Certificate::Redundant { optimum, .. } => {
                        format!("REDUNDANT (optimum {})", format_rational(optimum))
                    }
                };
                let _ = writeln!(out, "[{i}] {what}: {}", ineqs[i].describe());
            }
            for (i, j) in &dist.proportional_pairs {
                let _ = writeln!(out, "duplicate pair: [{i}] [{j}]");
            }
            if checked {
                let _ = writeln!(
                    out,
                    "{certified}/{} irredundant, {} duplicate pairs",
                    ineqs.len(),
                    dist.proportional_pairs.len()
                );
            } else {
                let _ = writeln!(
                    out,
                    "irredundancy not checked for n = {n}; {} duplicate pairs",
                    dist.proportional_pairs.len()
                );
            }
            out
        }
    };
    if !report.all_irredundant() || !dist.passed() {
        print!("{out}");
        return Err(verification_failure(format!(
            "{} redundant inequalities, {} duplicate pairs",
            report.failures.len(),
            dist.proportional_pairs.len()
        )));
    }
    Ok(out)
}

#[derive(Serialize)]
struct OracleRow {
    index: usize,
    point: Vec<Vec<String>>,
    exact: &'static str,
    numeric: &'static str,
    residual: f64,
    restart: Option<usize>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle_compare(
    s: &Session,
    space: &SpaceArgs,
    n: usize,
    files: &[PathBuf],
    samples: usize,
    margin: &str,
    opts: OracleOptions,
) -> Run {
    let rs = root_system(space)?;
    let group = Group::for_type(&rs.label()).ok_or_else(|| {
        anyhow!("no unitary model for type {}; supported: A1, A2, A3, B2 (C2)", rs.label())
    })?;
    let rep = GroupRep::new(group)?;
    let ineqs = s.inequalities(&rs, n, Criterion::Deformed)?;
    let margin = qlevi_core::rational::parse_rational(margin).ok_or_else(|| anyhow!("invalid --margin {margin:?}"))?;
    let tuples: Vec<Vec<CartanPoint>> = if files.is_empty() {
        points::sample(&rs, &ineqs, n, samples, &margin, opts.seed)
    } else {
        files
            .iter()
            .map(|f| points::read_point_file(f, n, rs.rank()))
            .collect::<anyhow::Result<_>>()?
    };
    let mut rows = Vec::new();
    let (mut inside, mut certified, mut outside, mut false_pos, mut boundary) = (0, 0, 0, 0, 0);
    for (index, pts) in tuples.iter().enumerate() {
        let exact = membership(&rs, n, pts, &ineqs)?.verdict;
        let numeric = numeric_membership(&rep, pts, &opts)?;
        match exact {
            Verdict::Inside => {
                inside += 1;
                certified += numeric.is_feasible() as usize;
            }
            Verdict::Outside => {
                outside += 1;
                false_pos += numeric.is_feasible() as usize;
            }
            Verdict::Boundary => boundary += 1,
        }
        rows.push(OracleRow {
            index,
            point: pts.iter().map(|p| p.coords.iter().map(format_rational).collect()).collect(),
            exact: verdict_name(exact),
            numeric: if numeric.is_feasible() { "feasible" } else { "no-witness" },
            residual: numeric.residual(),
            restart: match numeric {
                NumericVerdict::Feasible { restart, .. } => Some(restart),
                NumericVerdict::NoWitness { .. } => None,
            },
        });
    }
    let out = match s.format {
        Format::Json => s.json(&json!({
            "group": group.to_string(),
            "n": n,
            "seed": opts.seed,
            "restarts": opts.restarts,
            "tol": opts.tol,
            "points": rows,
            "summary": {
                "inside": inside, "inside_certified": certified,
                "outside": outside, "outside_certified": false_pos, "boundary": boundary,
            },
        })),
        Format::Text => {
            let mut out = format!("{group}, n = {n}, seed {}, {} restarts\n", opts.seed, opts.restarts);
            let _ = writeln!(out, "{:>4}  {:<9} {:<11} {:<24}  point", "#", "exact", "numeric", "residual");
            for r in &rows {
                let pt: Vec<String> = r.point.iter().map(|p| format!("({})", p.join(", "))).collect();
                let _ = writeln!(
                    out,
                    "{:>4}  {:<9} {:<11} {:<24e}  {}",
                    r.index,
                    r.exact,
                    r.numeric,
                    r.residual,
                    pt.join(" ")
                );
            }
            let _ = writeln!(
                out,
                "inside: {inside} ({certified} certified), outside: {outside} ({false_pos} certified), boundary: {boundary}"
            );
            out
        }
    };
    if false_pos > 0 {
        print!("{out}");
        return Err(verification_failure(format!(
            "{false_pos} exactly-outside points were certified feasible"
        )));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Run {
    let session = Session {
        cache: TableCache::new(!cli.no_cache),
        format: cli.format,
    };
    match &cli.command {
        Command::Tables {
            space,
            parabolic,
            prefix,
        } => cmd_tables(&session, space, *parabolic, prefix),
        Command::Inequalities { space, n, baseline } => cmd_inequalities(&session, space, *n, *baseline),
        Command::Member { space, n, point } => cmd_member(&session, space, *n, point),
        Command::Verify { space, n } => cmd_verify(&session, space, *n),
        Command::OracleCompare {
            space,
            n,
            point,
            samples,
            margin,
            seed,
            restarts,
            tol,
        } => {
            let opts = OracleOptions {
                tol: *tol,
                restarts: *restarts,
                seed: *seed,
                ..OracleOptions::default()
            };
            cmd_oracle_compare(&session, space, *n, point, *samples, margin, opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(0) => Err(Failure {
            code: 2,
            error: anyhow!("--workers must be positive"),
        }),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .context("cannot start worker pool")
            .map_err(Failure::from)
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
