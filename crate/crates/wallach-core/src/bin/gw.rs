//! `gw` — inspect three-module homogeneous spaces, test the geodesic-vector
//! criterion, enumerate solution families, and classify metrics.
//!
//! Exit codes: `0` success; `1` a negative mathematical finding (vector not
//! geodesic, no completion, failed space check, undetermined classification,
//! failed dynamical verification); `2` usage or input errors; `3` invalid
//! space descriptions.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use wallach_core::algebra::AlgebraVector;
use wallach_core::catalog;
use wallach_core::classify::{classify_space, ClassifyOptions, Verdict};
use wallach_core::families;
use wallach_core::flow::{self, FlowOptions};
use wallach_core::geodesic;
use wallach_core::metric::InvariantMetric;
use wallach_core::report::{to_json_string, Envelope, Mode};
use wallach_core::sampler::{self, SamplerOptions};
use wallach_core::scalar::{rat_to_f64, Rat, Scalar};
use wallach_core::space::{Part, SpaceDescriptor, SpaceJson};
use wallach_core::{tol, Error, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "gw",
    version,
    about = "Geodesic-vector analysis of three-module homogeneous spaces",
    propagate_version = true
)]
struct Cli {
    /// Arithmetic mode; `float` switches the geodesic commands to SVD-based
    /// linear algebra at --tolerance. Metrics with decimal components also
    /// select float mode.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,

    /// Zero threshold for float sessions.
    #[arg(long, global = true, default_value_t = tol::ZERO_ABS)]
    tolerance: f64,

    /// Seed for randomized probing/sampling; defaults to $GW_SEED, then a
    /// fixed constant.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect space descriptions.
    Space {
        #[command(subcommand)]
        action: SpaceCmd,
    },
    /// The normalized triple bracket symbols of a space.
    Symbols(SpaceOnly),
    /// Check or complete geodesic vectors.
    Geodesic {
        #[command(subcommand)]
        action: GeodesicCmd,
    },
    /// Decide for which metrics every tangent direction extends to a
    /// geodesic vector.
    Classify(ClassifyArgs),
    /// Enumerate the exact solution families (supported spaces only).
    Enumerate(EnumerateArgs),
    /// Search for geodesic vectors numerically and compare with the exact
    /// families.
    Sample(SampleArgs),
    /// Independent dynamical verification.
    Verify {
        #[command(subcommand)]
        action: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// List the built-in space catalog.
    List,
    /// Show the structure of one space.
    Show(SpaceOnly),
    /// Verify the defining properties of a space description.
    Check(SpaceOnly),
}

#[derive(Args)]
struct SpaceOnly {
    /// Space: `name[:params]` from the catalog, or `@file.json`.
    #[arg(long)]
    space: String,
}

#[derive(Subcommand)]
enum GeodesicCmd {
    /// Is the given algebra vector geodesic for the metric?
    Check(GeodesicArgs),
    /// Does some isotropy completion make the tangent vector geodesic?
    Complete(GeodesicArgs),
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long)]
    space: String,
    /// Metric scalars `l1,l2,l3` (rationals like `1,1/2,3`; decimals select
    /// float mode).
    #[arg(long)]
    metric: String,
    /// Vector: sparse `label=value,...` or a dense comma list over the whole
    /// algebra basis.
    #[arg(long)]
    vector: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    space: String,
    #[arg(long, default_value_t = 3)]
    grid_max: i64,
    #[arg(long, default_value_t = 50)]
    random_metrics: usize,
    #[arg(long, default_value_t = 200)]
    random_probes: usize,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    metric: String,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    metric: String,
    #[arg(long, default_value_t = 100)]
    starts: usize,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Integrate the body-coordinate geodesic flow: geodesic vectors must
    /// sit still, generic vectors must move, energy must be conserved.
    EulerArnold(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "su2_trivial")]
    space: String,
    #[arg(long, default_value = "1,2,3")]
    metric: String,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Number of rejection-sampled non-geodesic starts.
    #[arg(long, default_value_t = 20)]
    random_starts: usize,
}

/// Errors annotated with the exit code they deserve.
enum CliError {
    /// The space description itself is invalid (exit 3).
    Descriptor(Error),
    /// Everything else (exit 2).
    Other(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Other(e)
    }
}

enum Outcome {
    Clean,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(CliError::Descriptor(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let seed = resolve_seed(cli.seed);
    let emitter = Emitter { format: cli.format, output: cli.output.clone() };
    match &cli.command {
        Command::Space { action } => match action {
            SpaceCmd::List => space_list(&emitter),
            SpaceCmd::Show(args) => space_show(&emitter, &args.space),
            SpaceCmd::Check(args) => space_check(&emitter, &args.space),
        },
        Command::Symbols(args) => symbols(&emitter, &args.space),
        Command::Geodesic { action } => {
            let (args, complete) = match action {
                GeodesicCmd::Check(a) => (a, false),
                GeodesicCmd::Complete(a) => (a, true),
            };
            geodesic_cmd(&emitter, &cli, args, complete)
        }
        Command::Classify(args) => classify_cmd(&emitter, seed, args),
        Command::Enumerate(args) => enumerate_cmd(&emitter, args),
        Command::Sample(args) => sample_cmd(&emitter, seed, args),
        Command::Verify { action } => match action {
            VerifyCmd::EulerArnold(args) => verify_cmd(&emitter, seed, args),
        },
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("GW_SEED")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
    })
    .unwrap_or(DEFAULT_SEED)
}

fn load_space(spec: &str) -> Result<SpaceDescriptor, CliError> {
    let build = || -> Result<SpaceDescriptor, Error> {
        if let Some(path) = spec.strip_prefix('@') {
            let text = std::fs::read_to_string(path)?;
            let json: SpaceJson = serde_json::from_str(&text)?;
            SpaceDescriptor::from_json(&json)
        } else {
            catalog::parse_spec(spec)
        }
    };
    build().map_err(CliError::Descriptor)
}

fn parse_metric(s: &str) -> Result<(InvariantMetric, bool), CliError> {
    InvariantMetric::parse(s).map_err(CliError::Other)
}

fn parse_vector(desc: &SpaceDescriptor, s: &str) -> Result<AlgebraVector<Rat>, CliError> {
    AlgebraVector::parse(desc.algebra(), s).map_err(CliError::Other)
}

fn vector_to_f64(v: &AlgebraVector<Rat>) -> AlgebraVector<f64> {
    let coeffs: Vec<f64> = v.coeffs().iter().map(rat_to_f64).collect();
    AlgebraVector::new(v.algebra().clone(), coeffs).expect("same length")
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

struct Emitter {
    format: FormatArg,
    output: Option<PathBuf>,
}

impl Emitter {
    fn emit<T: Serialize>(
        &self,
        envelope: &Envelope<T>,
        table: String,
        csv: Option<String>,
    ) -> Result<(), CliError> {
        let text = match self.format {
            FormatArg::Table => table,
            FormatArg::Json => to_json_string(envelope).map_err(CliError::Other)?,
            FormatArg::Csv => csv.ok_or_else(|| {
                CliError::Other(Error::InvalidInput(
                    "--format csv is not supported for this command".into(),
                ))
            })?,
        };
        match &self.output {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Other(e.into())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn sparse_coords(desc: &SpaceDescriptor, coeffs: &[Rat]) -> Vec<String> {
    let algebra = desc.algebra();
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero_with(0.0))
        .map(|(i, c)| format!("{} = {}", algebra.label(i), c))
        .collect()
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn space_list(emitter: &Emitter) -> Result<Outcome, CliError> {
    let entries = catalog::list();
    let mut table = String::new();
    for e in &entries {
        let params = if e.params.is_empty() { String::new() } else { format!(":{}", e.params) };
        let _ = writeln!(table, "{:<28}  {}", format!("{}{}", e.name, params), e.summary);
    }
    let mut csv = String::from("name,params,summary\n");
    for e in &entries {
        let _ = writeln!(csv, "{},{},\"{}\"", e.name, e.params, e.summary);
    }
    emitter.emit(
        &Envelope::new("space-list", Mode::Exact, &entries),
        table,
        Some(csv),
    )?;
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct ShowPayload {
    name: String,
    dim_g: usize,
    dim_k: usize,
    dim_m: usize,
    module_dims: [usize; 3],
    isotropy: Vec<String>,
    modules: [Vec<String>; 3],
    user_supplied: bool,
    description: SpaceJson,
}

fn space_show(emitter: &Emitter, spec: &str) -> Result<Outcome, CliError> {
    let desc = load_space(spec)?;
    let algebra = desc.algebra();
    let labels = |idx: &[usize]| -> Vec<String> {
        idx.iter().map(|&i| algebra.label(i).to_string()).collect()
    };
    let payload = ShowPayload {
        name: desc.name.clone(),
        dim_g: desc.dim_g(),
        dim_k: desc.dim_k(),
        dim_m: desc.dim_m(),
        module_dims: desc.module_dims(),
        isotropy: labels(desc.indices(Part::K)),
        modules: [
            labels(desc.indices(Part::M(0))),
            labels(desc.indices(Part::M(1))),
            labels(desc.indices(Part::M(2))),
        ],
        user_supplied: desc.user_supplied,
        description: desc.to_json(),
    };
    let mut table = String::new();
    let _ = writeln!(table, "space {}", payload.name);
    let _ = writeln!(
        table,
        "dim g = {}, dim k = {}, modules {:?}",
        payload.dim_g, payload.dim_k, payload.module_dims
    );
    let _ = writeln!(table, "k : {}", payload.isotropy.join(", "));
    for (i, m) in payload.modules.iter().enumerate() {
        let _ = writeln!(table, "m{}: {}", i + 1, m.join(", "));
    }
    emitter.emit(&Envelope::new("space-show", Mode::Exact, &payload), table, None)?;
    Ok(Outcome::Clean)
}

fn space_check(emitter: &Emitter, spec: &str) -> Result<Outcome, CliError> {
    let desc = load_space(spec)?;
    let report = desc.verify();
    let ok = report.ok();
    let mut table = String::new();
    let _ = writeln!(table, "space {}", report.space);
    for c in &report.checks {
        if c.ok {
            let _ = writeln!(table, "  ok   {}", c.name);
        } else {
            let _ = writeln!(table, "  FAIL {}", c.name);
            for w in &c.witnesses {
                let _ = writeln!(table, "         {w}");
            }
        }
    }
    for w in &report.warnings {
        let _ = writeln!(table, "  note {w}");
    }
    let _ = writeln!(table, "result: {}", if ok { "ok" } else { "FAILED" });
    emitter.emit(&Envelope::new("space-check", Mode::Exact, &report), table, None)?;
    Ok(if ok { Outcome::Clean } else { Outcome::Negative })
}

fn symbols(emitter: &Emitter, spec: &str) -> Result<Outcome, CliError> {
    let desc = load_space(spec)?;
    let symbols = desc.triple_symbols();
    let mut table = String::new();
    let _ = writeln!(table, "normalized triple symbols of {}", desc.name);
    for v in &symbols.values {
        let _ = writeln!(
            table,
            "  [{} {} {}] = {}",
            v.modules[0], v.modules[1], v.modules[2], v.value
        );
    }
    let mut csv = String::from("m1,m2,m3,value\n");
    for v in &symbols.values {
        let _ = writeln!(csv, "{},{},{},{}", v.modules[0], v.modules[1], v.modules[2], v.value);
    }
    emitter.emit(
        &Envelope::new("symbols", Mode::Exact, &symbols),
        table,
        Some(csv),
    )?;
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct GeodesicPayload {
    space: String,
    metric: InvariantMetric,
    vector: Vec<String>,
    geodesic: bool,
    max_residual: f64,
    residuals: Vec<ResidualEntry>,
}

#[derive(Serialize)]
struct ResidualEntry {
    against: String,
    value: String,
}

#[derive(Serialize)]
struct CompletePayload {
    space: String,
    metric: InvariantMetric,
    tangent_vector: Vec<String>,
    rank_a: usize,
    rank_augmented: usize,
    exists: bool,
    completion: Option<Vec<String>>,
    verified: Option<bool>,
}

fn geodesic_cmd(
    emitter: &Emitter,
    cli: &Cli,
    args: &GeodesicArgs,
    complete: bool,
) -> Result<Outcome, CliError> {
    let desc = load_space(&args.space)?;
    let (metric, saw_decimal) = parse_metric(&args.metric)?;
    let vector = parse_vector(&desc, &args.vector)?;
    let float_mode = cli.mode == ModeArg::Float || saw_decimal;
    let mode = if float_mode { Mode::Float } else { Mode::Exact };
    let zero_tol = cli.tolerance;

    if complete {
        let (payload, exists) = if float_mode {
            let v = vector_to_f64(&vector);
            let out = geodesic::complete(&desc, &metric, &v).map_err(CliError::Other)?;
            let exists = out.exists();
            let completion = out.completion.as_ref().map(|c| {
                c.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero_with(zero_tol))
                    .map(|(i, x)| format!("{} = {}", desc.algebra().label(i), x))
                    .collect()
            });
            let verified = out.completion.as_ref().map(|c| {
                geodesic::is_geodesic_vector(&desc, &metric, c, zero_tol)
                    .map(|ch| ch.ok)
                    .unwrap_or(false)
            });
            (
                CompletePayload {
                    space: desc.name.clone(),
                    metric: metric.clone(),
                    tangent_vector: sparse_coords(&desc, vector.coeffs()),
                    rank_a: out.rank_a,
                    rank_augmented: out.rank_augmented,
                    exists,
                    completion,
                    verified,
                },
                exists,
            )
        } else {
            let out = geodesic::complete(&desc, &metric, &vector).map_err(CliError::Other)?;
            let exists = out.exists();
            let completion = out.completion.as_ref().map(|c| sparse_coords(&desc, c.coeffs()));
            let verified = out.completion.as_ref().map(|c| {
                geodesic::is_geodesic_vector(&desc, &metric, c, 0.0)
                    .map(|ch| ch.ok)
                    .unwrap_or(false)
            });
            (
                CompletePayload {
                    space: desc.name.clone(),
                    metric: metric.clone(),
                    tangent_vector: sparse_coords(&desc, vector.coeffs()),
                    rank_a: out.rank_a,
                    rank_augmented: out.rank_augmented,
                    exists,
                    completion,
                    verified,
                },
                exists,
            )
        };
        let mut table = String::new();
        let _ = writeln!(table, "space {}  metric {}", payload.space, metric.display());
        let _ = writeln!(table, "tangent vector: {}", payload.tangent_vector.join(", "));
        let _ = writeln!(
            table,
            "rank A = {}, rank [A|b] = {}",
            payload.rank_a, payload.rank_augmented
        );
        match &payload.completion {
            Some(c) => {
                let shown = if c.is_empty() { "0 (zero isotropy part)".to_string() } else { c.join(", ") };
                let _ = writeln!(table, "completion exists: {shown}");
                let _ = writeln!(
                    table,
                    "full vector re-checked: {}",
                    if payload.verified == Some(true) { "geodesic" } else { "NOT geodesic" }
                );
            }
            None => {
                let _ = writeln!(
                    table,
                    "no completion: the system is inconsistent, so no isotropy part makes \
                     this tangent vector geodesic"
                );
            }
        }
        let mut envelope = Envelope::new("geodesic-complete", mode, &payload);
        if float_mode {
            envelope = envelope.with_tolerance(zero_tol);
        }
        emitter.emit(&envelope, table, None)?;
        return Ok(if exists { Outcome::Clean } else { Outcome::Negative });
    }

    let (payload, ok) = if float_mode {
        let v = vector_to_f64(&vector);
        let check = geodesic::is_geodesic_vector(&desc, &metric, &v, zero_tol)
            .map_err(CliError::Other)?;
        (
            GeodesicPayload {
                space: desc.name.clone(),
                metric: metric.clone(),
                vector: sparse_coords(&desc, vector.coeffs()),
                geodesic: check.ok,
                max_residual: check.max_residual,
                residuals: check
                    .residuals
                    .iter()
                    .map(|(l, v)| ResidualEntry { against: l.clone(), value: format!("{v}") })
                    .collect(),
            },
            check.ok,
        )
    } else {
        let check = geodesic::is_geodesic_vector(&desc, &metric, &vector, 0.0)
            .map_err(CliError::Other)?;
        (
            GeodesicPayload {
                space: desc.name.clone(),
                metric: metric.clone(),
                vector: sparse_coords(&desc, vector.coeffs()),
                geodesic: check.ok,
                max_residual: check.max_residual,
                residuals: check
                    .residuals
                    .iter()
                    .map(|(l, v)| ResidualEntry { against: l.clone(), value: v.to_string() })
                    .collect(),
            },
            check.ok,
        )
    };
    let mut table = String::new();
    let _ = writeln!(table, "space {}  metric {}", payload.space, metric.display());
    let _ = writeln!(table, "vector: {}", payload.vector.join(", "));
    for r in &payload.residuals {
        let _ = writeln!(table, "  residual vs {:<8} {}", r.against, r.value);
    }
    let _ = writeln!(table, "verdict: {}", if ok { "geodesic vector" } else { "NOT a geodesic vector" });
    let mut csv = String::from("against,residual\n");
    for r in &payload.residuals {
        let _ = writeln!(csv, "{},{}", r.against, r.value);
    }
    let mut envelope = Envelope::new("geodesic-check", mode, &payload);
    if float_mode {
        envelope = envelope.with_tolerance(zero_tol);
    }
    emitter.emit(&envelope, table, Some(csv))?;
    Ok(if ok { Outcome::Clean } else { Outcome::Negative })
}

fn classify_cmd(emitter: &Emitter, seed: u64, args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let desc = load_space(&args.space)?;
    let opts = ClassifyOptions {
        grid_max: args.grid_max,
        random_metrics: args.random_metrics,
        random_probes: args.random_probes,
    };
    let report = classify_space(&desc, seed, opts).map_err(CliError::Other)?;
    let mut table = String::new();
    let _ = writeln!(table, "space {}", report.space);
    let _ = writeln!(
        table,
        "metrics tested: {} ({} grid + {} random), probes run: {}",
        report.metrics_tested, report.grid_metrics, report.random_metrics, report.total_probes_run
    );
    let _ = writeln!(table, "verdict: {}", report.verdict_display);
    for mw in report.failing.iter().take(5) {
        let w = &mw.witness;
        let modules = w
            .modules
            .map(|(i, j)| format!(" in modules ({i},{j})"))
            .unwrap_or_default();
        let _ = writeln!(
            table,
            "  witness at metric {}: {}{} with rank A = {} < rank [A|b] = {}",
            mw.metric.display(),
            w.coords.join(", "),
            modules,
            w.rank_a,
            w.rank_augmented
        );
    }
    if report.failing.len() > 5 {
        let _ = writeln!(table, "  ... and {} more failing metrics", report.failing.len() - 5);
    }
    for m in &report.passing_non_standard {
        let _ = writeln!(table, "  non-standard metric with no witness found: {}", m.display());
    }
    let envelope = Envelope::new("classify", Mode::Exact, &report).with_seed(seed);
    emitter.emit(&envelope, table, None)?;
    Ok(match report.verdict_enum() {
        Verdict::Undetermined => Outcome::Negative,
        _ => Outcome::Clean,
    })
}

fn enumerate_cmd(emitter: &Emitter, args: &EnumerateArgs) -> Result<Outcome, CliError> {
    let desc = load_space(&args.space)?;
    let (metric, _) = parse_metric(&args.metric)?;
    let report = families::enumerate(&desc, &metric).map_err(CliError::Other)?;
    let mut table = String::new();
    let _ = writeln!(
        table,
        "space {}  metric {}  pattern {}",
        report.space,
        metric.display(),
        report.pattern_display
    );
    for fam in &report.families {
        let _ = writeln!(table, "family {}", fam.id);
        let _ = writeln!(table, "  {}", fam.description);
        if !fam.zero.is_empty() {
            let _ = writeln!(table, "  zero     : {}", fam.zero.join(", "));
        }
        if !fam.nonzero.is_empty() {
            let _ = writeln!(table, "  nonzero  : {}", fam.nonzero.join(", "));
        }
        if !fam.free.is_empty() {
            let _ = writeln!(table, "  free     : {}", fam.free.join(", "));
        }
        for c in &fam.constraints {
            let _ = writeln!(table, "  relation : {c} = 0");
        }
        for s in &fam.samples {
            let _ = writeln!(
                table,
                "  sample   : {}  [{}]",
                s.coords.join(", "),
                if s.geodesic { "verified geodesic" } else { "NOT GEODESIC" }
            );
        }
    }
    for n in &report.reduced_system_notes {
        let _ = writeln!(table, "caution: {}", n.message);
    }
    for n in &report.notes {
        let _ = writeln!(table, "note: {n}");
    }
    // Defensive: the enumeration re-verifies its own samples; surface any
    // failure loudly in the exit code.
    let all_verified = report
        .families
        .iter()
        .all(|f| f.samples.iter().all(|s| s.geodesic));
    emitter.emit(&Envelope::new("enumerate", Mode::Exact, &report), table, None)?;
    Ok(if all_verified { Outcome::Clean } else { Outcome::Negative })
}

fn sample_cmd(emitter: &Emitter, seed: u64, args: &SampleArgs) -> Result<Outcome, CliError> {
    let desc = load_space(&args.space)?;
    let (metric, _) = parse_metric(&args.metric)?;
    let opts = SamplerOptions {
        starts: args.starts,
        max_iters: args.max_iters,
        ..SamplerOptions::default()
    };
    let report = sampler::sample_space(&desc, &metric, seed, opts).map_err(CliError::Other)?;
    let mut table = String::new();
    let _ = writeln!(
        table,
        "space {}  metric {}  starts {}  converged {}",
        report.space,
        metric.display(),
        report.starts,
        report.converged
    );
    for d in &report.distinct {
        let coords = d
            .coords
            .iter()
            .map(|c| format!("{c:.6}"))
            .collect::<Vec<_>>()
            .join(", ");
        let family = match (&d.nearest_family, d.family_distance) {
            (Some(f), Some(dist)) => format!("  nearest family {f} (distance {dist:.2e})"),
            _ => String::new(),
        };
        let _ = writeln!(
            table,
            "  hits {:>3}  [{}]  residual {:.2e}{}",
            d.count, coords, d.residual, family
        );
    }
    let mut csv = String::from("count,residual,nearest_family,family_distance,coords\n");
    for d in &report.distinct {
        let _ = writeln!(
            csv,
            "{},{},{},{},\"{}\"",
            d.count,
            d.residual,
            d.nearest_family.as_deref().unwrap_or(""),
            d.family_distance.map(|x| x.to_string()).unwrap_or_default(),
            d.coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";")
        );
    }
    let envelope = Envelope::new("sample", Mode::Float, &report).with_seed(seed);
    emitter.emit(&envelope, table, Some(csv))?;
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct VerifyPayload {
    space: String,
    metric: InvariantMetric,
    t_end: f64,
    steps: usize,
    cases: Vec<VerifyCase>,
    all_pass: bool,
}

#[derive(Serialize)]
struct VerifyCase {
    kind: String,
    start: Vec<f64>,
    position_drift: f64,
    energy_rel_drift: f64,
    pass: bool,
}

fn verify_cmd(emitter: &Emitter, seed: u64, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let desc = load_space(&args.space)?;
    let (metric, _) = parse_metric(&args.metric)?;
    let opts = FlowOptions { t_end: args.t_end, steps: args.steps, record_every: args.steps.max(1) };
    let dim = desc.algebra().dim();
    let mut cases = Vec::new();

    // Geodesic representatives: one basis axis per module (always
    // equilibria), plus a generic direction when the metric is standard.
    for module in 0..3 {
        let i = desc.indices(Part::M(module))[0];
        let mut v0 = vec![0.0; dim];
        v0[i] = 1.0;
        let r = flow::integrate(&desc, &metric, &v0, opts).map_err(CliError::Other)?;
        let pass = r.position_drift < tol::ENERGY_DRIFT && r.energy_rel_drift < tol::ENERGY_DRIFT;
        cases.push(VerifyCase {
            kind: format!("module-axis-m{}", module + 1),
            start: v0,
            position_drift: r.position_drift,
            energy_rel_drift: r.energy_rel_drift,
            pass,
        });
    }
    if metric.is_standard() {
        let v0: Vec<f64> = (0..dim).map(|i| 1.0 / ((i + 2) as f64)).collect();
        let r = flow::integrate(&desc, &metric, &v0, opts).map_err(CliError::Other)?;
        let pass = r.position_drift < tol::ENERGY_DRIFT && r.energy_rel_drift < tol::ENERGY_DRIFT;
        cases.push(VerifyCase {
            kind: "standard-generic".to_string(),
            start: v0,
            position_drift: r.position_drift,
            energy_rel_drift: r.energy_rel_drift,
            pass,
        });
    } else {
        // Non-geodesic starts by rejection sampling: unit vectors whose
        // criterion residual is clearly nonzero must visibly move, while
        // conserving energy.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = 0usize;
        let mut attempts = 0usize;
        while found < args.random_starts && attempts < args.random_starts * 200 {
            attempts += 1;
            let mut v0: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let n = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-9 {
                continue;
            }
            for x in v0.iter_mut() {
                *x /= n;
            }
            if sampler::residual_vec(&desc, &metric, &v0)
                .iter()
                .map(|x| x.abs())
                .fold(0.0, f64::max)
                < 0.05
            {
                continue;
            }
            found += 1;
            let r = flow::integrate(&desc, &metric, &v0, opts).map_err(CliError::Other)?;
            let pass = r.position_drift > 1e-3 && r.energy_rel_drift < tol::ENERGY_DRIFT;
            cases.push(VerifyCase {
                kind: "non-geodesic".to_string(),
                start: v0,
                position_drift: r.position_drift,
                energy_rel_drift: r.energy_rel_drift,
                pass,
            });
        }
        if found < args.random_starts {
            return Err(CliError::Other(Error::InvalidInput(format!(
                "could only find {found} of {} clearly non-geodesic starts; \
                 is the metric (nearly) standard?",
                args.random_starts
            ))));
        }
    }

    let all_pass = cases.iter().all(|c| c.pass);
    let payload = VerifyPayload {
        space: desc.name.clone(),
        metric: metric.clone(),
        t_end: args.t_end,
        steps: args.steps,
        cases,
        all_pass,
    };
    let mut table = String::new();
    let _ = writeln!(
        table,
        "flow verification on {}  metric {}  horizon {}  steps {}",
        payload.space,
        metric.display(),
        payload.t_end,
        payload.steps
    );
    for c in &payload.cases {
        let _ = writeln!(
            table,
            "  {:<18} drift {:.3e}  energy drift {:.3e}  {}",
            c.kind,
            c.position_drift,
            c.energy_rel_drift,
            if c.pass { "ok" } else { "FAIL" }
        );
    }
    let _ = writeln!(table, "result: {}", if all_pass { "ok" } else { "FAILED" });
    let mut csv = String::from("kind,position_drift,energy_rel_drift,pass\n");
    for c in &payload.cases {
        let _ = writeln!(csv, "{},{},{},{}", c.kind, c.position_drift, c.energy_rel_drift, c.pass);
    }
    let envelope = Envelope::new("verify-euler-arnold", Mode::Float, &payload).with_seed(seed);
    emitter.emit(&envelope, table, Some(csv))?;
    Ok(if all_pass { Outcome::Clean } else { Outcome::Negative })
}
