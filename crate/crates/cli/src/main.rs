use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coarsekit::fdc::{
    assign_targets, certificate_dot, check_cover, decompose, decompose_lattice, intersection_families,
    weaken_to_subneighborhoods, CertifiedFamily, RefinedCover,
};
use coarsekit::groups::{cayley_ball, heisenberg_spec, node_cap_from_env, GroupSpec, MatrixGeneratorFile};
use coarsekit::rips::{build_rips, check_metric_comparison_with, skeleton_dot, ComparisonOptions, DEFAULT_DIM_CAP};
use coarsekit::suite::{self, Profile};
use coarsekit::{CheckRecord, Error, MetricSpace, Result, RunReport};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "coarsekit", version, about = "Rips complexes, decomposition certificates and controlled algebra on finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate metric spaces
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Rips complexes
    #[command(subcommand)]
    Rips(RipsCmd),
    /// Decomposition certificates
    #[command(subcommand)]
    Fdc(FdcCmd),
    /// Decomposed sequences
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Geometric modules
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Run every property check
    Suite {
        #[arg(long, default_value = "quick")]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Args)]
struct ReportOut {
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct Out {
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Cayley ball, lattice ball or integer interval as a JSON space
    Gen {
        /// free<k>, z<k>, heisenberg or matrix
        #[arg(long, conflicts_with_all = ["lattice", "interval"])]
        group: Option<String>,
        /// Generator file for --group matrix
        #[arg(long)]
        file: Option<PathBuf>,
        /// ℓ¹ ball in Z^n
        #[arg(long)]
        lattice: Option<usize>,
        /// Integer interval lo,hi
        #[arg(long, value_parser = parse_interval)]
        interval: Option<(i64, i64)>,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct ComplexArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    scale: f64,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
}

#[derive(Subcommand)]
enum RipsCmd {
    /// Build P_s(X) and write its simplices
    Build {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Sample paths and check the distance comparison
    CheckMetric {
        #[command(flatten)]
        complex: ComplexArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_steps: usize,
        /// Multiply distances, as a negative control
        #[arg(long, default_value_t = 1.0)]
        inflate: f64,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Graphviz 1-skeleton
    Dot {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum FdcCmd {
    /// Decompose a space, or an ℓ¹ lattice ball with --lattice
    Decompose {
        #[arg(long, required_unless_present = "lattice")]
        space: Option<PathBuf>,
        #[arg(long)]
        lattice: Option<usize>,
        #[arg(long, default_value_t = 20)]
        radius: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        schedule: Vec<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// Check every clause of a certificate
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Transport a certificate to subsets of t-neighborhoods
    Weaken {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        t: f64,
        /// {"targets": [[ids]], "assignment": [part]} with optional assignment
        #[arg(long)]
        targets: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Graphviz certificate tree
    Dot {
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Check N_1(P(U)) ∪ N_1(P(V)) = P(Z) level by level
    CoverCheck {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Intersection families N_T(U_i) ∩ N_T(V_j) ∩ Z
    Wfam {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraSuite {
    Propagation,
    Split,
    Factor,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Randomized identities of geometric morphisms
    Check {
        #[arg(long, value_enum)]
        suite: AlgebraSuite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
        #[command(flatten)]
        report: ReportOut,
    },
}

fn parse_interval(text: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = text.split_once(',').ok_or("expected lo,hi")?;
    let num = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("{v}: {e}"));
    Ok((num(lo)?, num(hi)?))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn located<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Json(j) => Error::Invalid(format!("{}: malformed JSON at line {} column {}: {j}", path.display(), j.line(), j.column())),
        other => other,
    })
}

fn load_space(path: &Path) -> Result<Arc<MetricSpace>> {
    Ok(Arc::new(located(path, MetricSpace::from_json_str(&read(path)?))?))
}

fn load_cert(path: &Path) -> Result<CertifiedFamily> {
    located(path, CertifiedFamily::from_json_str(&read(path)?))
}

fn emit(out: &Out, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Out, value: &Value) -> Result<()> {
    emit(out, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// The command line without the report destination, so reports do not depend on it.
fn command_echo() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--json" {
            args.next();
        } else if !a.starts_with("--json=") {
            out.push(a);
        }
    }
    out
}

fn finish(mut report: RunReport, dest: &ReportOut, start: std::time::Instant) -> Result<ExitCode> {
    report.wall_time = start.elapsed();
    if let Some(p) = &dest.json {
        fs::write(p, report.to_json_string()).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
    }
    print!("{}", report.human());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn single(check: CheckRecord, seed: u64, dest: &ReportOut, start: std::time::Instant) -> Result<ExitCode> {
    let mut report = RunReport::new(command_echo(), seed);
    report.checks.push(check);
    finish(report, dest, start)
}

fn group_spec(name: &str, file: Option<&Path>) -> Result<GroupSpec> {
    let rank = |prefix: &str| name.strip_prefix(prefix).and_then(|k| k.parse::<usize>().ok());
    match name {
        "heisenberg" => Ok(heisenberg_spec()),
        "matrix" => {
            let path = file.ok_or_else(|| Error::Invalid("--group matrix needs --file".into()))?;
            let doc: MatrixGeneratorFile = located(path, serde_json::from_str(&read(path)?).map_err(Error::from))?;
            Ok(GroupSpec::IntegerMatrix(doc.generators))
        }
        _ => match (rank("free"), rank("z")) {
            (Some(k), _) => Ok(GroupSpec::Free(k)),
            (_, Some(k)) => Ok(GroupSpec::FreeAbelian(k)),
            _ => Err(Error::Invalid(format!("unknown group {name:?}"))),
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let start = std::time::Instant::now();
    match cli.command {
        Command::Space(SpaceCmd::Gen { group, file, lattice, interval, radius, out }) => {
            let space = match (group, lattice, interval) {
                (Some(g), _, _) => cayley_ball(&group_spec(&g, file.as_deref())?, radius, node_cap_from_env())?,
                (_, Some(n), _) => MetricSpace::l1_ball(n, radius.into())?,
                (_, _, Some((lo, hi))) => MetricSpace::integer_interval(lo, hi)?,
                _ => return Err(Error::Invalid("one of --group, --lattice or --interval is required".into())),
            };
            emit_json(&out, &space.to_json())?;
        }
        Command::Rips(cmd) => match cmd {
            RipsCmd::Build { complex, out } => {
                let k = build_rips(load_space(&complex.space)?, complex.scale, complex.dim_cap)?;
                emit_json(&out, &k.to_json())?;
            }
            RipsCmd::Dot { complex, out } => {
                let k = build_rips(load_space(&complex.space)?, complex.scale, complex.dim_cap)?;
                emit(&out, &skeleton_dot(&k, "rips"))?;
            }
            RipsCmd::CheckMetric { complex, samples, seed, max_steps, inflate, report } => {
                let k = build_rips(load_space(&complex.space)?, complex.scale, complex.dim_cap)?;
                let opts = ComparisonOptions { samples, seed, max_steps, distance_inflation: inflate, ..ComparisonOptions::default() };
                let r = check_metric_comparison_with(&k, &opts)?;
                let mut c = CheckRecord::new("metric_comparison")
                    .extreme("samples", r.samples as f64)
                    .extreme("max_ratio", r.max_ratio)
                    .extreme("constant", r.constant)
                    .extreme("dimension", r.dimension as f64)
                    .extreme("failures", r.failures.len() as f64);
                c.require(r.passed(), || json!(r.failures.first()));
                return single(c, seed, &report, start);
            }
        },
        Command::Fdc(cmd) => match cmd {
            FdcCmd::Decompose { space, lattice, radius, schedule, out } => {
                let (space, certificate) = match (space, lattice) {
                    (Some(p), _) => {
                        let x = Arc::unwrap_or_clone(load_space(&p)?);
                        let c = decompose(&x, &[x.full()], &schedule)?;
                        (x, c)
                    }
                    (None, Some(n)) => decompose_lattice(n, radius, &schedule)?,
                    (None, None) => unreachable!("clap requires --space or --lattice"),
                };
                let family = vec![space.full()];
                emit_json(&out, &CertifiedFamily { space, family, certificate }.to_json())?;
            }
            FdcCmd::Verify { cert, report } => {
                let doc = load_cert(&cert)?;
                let v = doc.verify()?;
                let mut c = CheckRecord::new("certificate")
                    .extreme("nodes", v.nodes as f64)
                    .extreme("depth", v.depth as f64)
                    .extreme("failures", v.failures.len() as f64);
                c.require(v.accepted, || json!(v.failures.iter().take(20).collect::<Vec<_>>()));
                return single(c, 0, &report, start);
            }
            FdcCmd::Weaken { cert, t, targets, out } => {
                let doc = load_cert(&cert)?;
                let text = read(&targets)?;
                let value: Value = located(&targets, serde_json::from_str(&text).map_err(Error::from))?;
                let ids: Vec<Vec<String>> = serde_json::from_value(value.get("targets").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::Invalid(format!("{}: \"targets\" must be a list of id lists: {e}", targets.display())))?;
                let sets = ids.iter().map(|set| doc.space.subspace_of_ids(set)).collect::<Result<Vec<_>>>()?;
                let assignment: Vec<usize> = match value.get("assignment") {
                    Some(a) => serde_json::from_value(a.clone())?,
                    None => assign_targets(&doc.space, &doc.family, &sets, t)?,
                };
                let weak = weaken_to_subneighborhoods(&doc.space, &doc.family, &doc.certificate, t, &sets, &assignment)?;
                emit_json(&out, &CertifiedFamily { space: doc.space, family: sets, certificate: weak }.to_json())?;
            }
            FdcCmd::Dot { cert, out } => {
                emit(&out, &certificate_dot(&load_cert(&cert)?.certificate))?;
            }
        },
        Command::Seq(cmd) => match cmd {
            SeqCmd::CoverCheck { cover, scales, dim_cap, report } => {
                let refined = located(&cover, RefinedCover::from_json_str(&read(&cover)?))?;
                let check = check_cover(refined.cover(), &scales, dim_cap)?;
                let mut c = CheckRecord::new("sequence_cover").extreme("simplices_checked", check.simplices_checked as f64);
                c.require(check.covered, || json!(check.witness));
                return single(c, 0, &report, start);
            }
            SeqCmd::Wfam { cover, t, out } => {
                let refined = located(&cover, RefinedCover::from_json_str(&read(&cover)?))?;
                let space = refined.cover().z().space().clone();
                let families = intersection_families(&refined, &t)?;
                let doc: Vec<Value> = families
                    .iter()
                    .map(|f| {
                        json!({
                            "level": f.level,
                            "part": f.part,
                            "omittedEmpty": f.omitted_empty,
                            "members": f.members.iter().map(|(i, j, w)| json!({"i": i, "j": j, "points": space.ids_of(w)})).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                emit_json(&out, &json!({ "families": doc }))?;
            }
        },
        Command::Algebra(AlgebraCmd::Check { suite: which, seed, cases, report }) => {
            let (name, f): (&str, fn(u64, usize) -> CheckRecord) = match which {
                AlgebraSuite::Propagation => ("algebra_propagation", suite::check_algebra_propagation),
                AlgebraSuite::Split => ("algebra_split", suite::check_algebra_split),
                AlgebraSuite::Factor => ("algebra_factor", suite::check_algebra_factor),
            };
            let default = suite::JOBS.iter().find(|j| j.0 == name).map_or(200, |j| j.2);
            return single(f(seed, cases.unwrap_or(default)), seed, &report, start);
        }
        Command::Suite { profile, seed, report } => {
            let profile = Profile::parse(&profile)?;
            let r = suite::run_suite(profile, seed, command_echo());
            return finish(r, &report, start);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
