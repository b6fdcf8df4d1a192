mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ford_spheres::farey;
use ford_spheres::moment::{self, Caps, Method, Normalization};
use ford_spheres::region::{self, OmegaSpec};
use ford_spheres::verify::{self, Suite};
use ford_spheres::{CanonicalGInt, Error, GInt};

use output::{Artifact, Format, Metadata};

#[derive(Parser, Debug)]
#[command(name = "ford-spheres", version, about = "Ford spheres over the Gaussian integers: enumeration, constants and first-moment sweeps")]
struct Cli {
    /// Worker threads (defaults to all cores). Does not affect output bytes.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for Monte Carlo validators.
    #[arg(long, global = true, default_value_t = region::DEFAULT_SEED)]
    seed: u64,

    /// Artifact format.
    #[arg(long = "out", visible_alias = "format", global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the artifact here and print a table to stdout.
    #[arg(long = "output", short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Record wall-clock time per row (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the reduced Gaussian fractions of the unit square up to |s| <= S.
    Enumerate(EnumerateArgs),
    /// Constants of the asymptotic formula.
    Constants(ConstantsArgs),
    /// Area and lattice counts of the partner region for one denominator.
    Area(AreaArgs),
    /// First-moment values by method.
    Moment(MomentArgs),
    /// Run invariant suites.
    Verify(VerifyArgs),
    /// Constants, calibration, moment ladder and auxiliary sums in one artifact.
    Report(ReportArgs),
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[arg(long = "S", required_unless_present = "q")]
    #[serde(rename = "S")]
    s: Option<u64>,
    /// Real Farey fractions of order Q instead.
    #[arg(long = "Q", conflicts_with = "s")]
    #[serde(rename = "Q")]
    q: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct ConstantsArgs {
    /// Skip the log-fit estimate of the secondary constant.
    #[arg(long)]
    no_z2: bool,
}

#[derive(Args, Debug, Serialize)]
struct AreaArgs {
    /// Denominator, e.g. 2+i (any associate is accepted).
    #[arg(long = "s", allow_hyphen_values = true)]
    s: String,
    #[arg(long = "S")]
    #[serde(rename = "S")]
    big_s: u64,
    /// Monte Carlo samples for the area cross-check (0 disables it).
    #[arg(long, default_value_t = 200_000)]
    samples: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Direct,
    Counting,
    MainTerm,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Counting => Method::Counting,
            MethodArg::MainTerm => Method::MainTerm,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NormalizationArg {
    OmegaFull,
    OmegaQuarter,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::OmegaFull => Normalization::OmegaFull,
            NormalizationArg::OmegaQuarter => Normalization::OmegaQuarter,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct MomentArgs {
    /// One or more S values, comma separated.
    #[arg(long = "S", value_delimiter = ',', required = true)]
    #[serde(rename = "S")]
    s: Vec<u64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Direct, MethodArg::Counting, MethodArg::MainTerm])]
    method: Vec<MethodArg>,
    #[arg(long, value_enum, default_value_t = NormalizationArg::OmegaFull)]
    normalization: NormalizationArg,
    /// Exponent in the error envelope S^(1+eps) and the B-sum.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
}

#[derive(Args, Debug, Serialize)]
struct ReportArgs {
    /// Moment ladder.
    #[arg(long = "S", value_delimiter = ',', default_values_t = [1u64, 2, 4, 8, 12, 16, 32, 64, 128])]
    #[serde(rename = "S")]
    s: Vec<u64>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

/// Exit codes.
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_INVARIANT: u8 = 4;
const EXIT_CAP: u8 = 5;
const EXIT_IO: u8 = 6;

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Invariant(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Domain(_) | Error::Input(_)) | Failure::Usage(_) => EXIT_USAGE,
            Failure::Lib(Error::Numerical(_) | Error::Overflow(_)) => EXIT_NUMERIC,
            Failure::Lib(Error::CapExceeded { .. }) => EXIT_CAP,
            Failure::Invariant(_) => EXIT_INVARIANT,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Lib(Error::Domain(_)) => "domain",
            Failure::Lib(Error::Input(_)) => "input",
            Failure::Lib(Error::Numerical(_)) => "numerical",
            Failure::Lib(Error::Overflow(_)) => "overflow",
            Failure::Lib(Error::CapExceeded { .. }) => "cap-exceeded",
            Failure::Invariant(_) => "invariant",
            Failure::Io(_) => "io",
            Failure::Usage(_) => "usage",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Invariant(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

fn cap_from_env(var: &str, default: u64) -> Result<u64, Failure> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{var} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn caps() -> Result<Caps, Failure> {
    Ok(Caps {
        direct: cap_from_env("FORD_DIRECT_CAP", moment::DEFAULT_DIRECT_CAP)?,
        counting: cap_from_env("FORD_COUNTING_CAP", moment::DEFAULT_COUNTING_CAP)?,
    })
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn metadata(cli: &Cli, command: &str, parameters: Value, extra: BTreeMap<String, Value>) -> Result<Metadata, Failure> {
    Ok(Metadata::new(command, parameters, cli.seed, cli.format, moment::constants()?, extra))
}

fn run_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<Artifact, Failure> {
    let meta = metadata(cli, "enumerate", params(args), BTreeMap::new())?;
    if let Some(q) = args.q {
        let rows: Vec<Value> = farey::enumerate_fq(q)?
            .into_iter()
            .map(|f| json!({"fraction": f.to_string(), "numerator": f.p, "denominator": f.q}))
            .collect();
        return Ok(Artifact::table(meta, rows));
    }
    let s = args.s.ok_or_else(|| Failure::Usage("--S or --Q is required".into()))?;
    if s == 0 {
        return Err(Error::Domain("S must be >= 1".into()).into());
    }
    let rows: Vec<Value> = farey::enumerate_gs(s)
        .into_iter()
        .map(|f| {
            let sp = f.sphere();
            json!({
                "fraction": f.to_string(),
                "numerator": f.num().to_string(),
                "denominator": f.den().to_string(),
                "norm": f.den().norm(),
                "base_re": sp.base_re.to_string(),
                "base_im": sp.base_im.to_string(),
                "radius": sp.radius.to_string(),
            })
        })
        .collect();
    Ok(Artifact::table(meta, rows))
}

fn run_constants(cli: &Cli, args: &ConstantsArgs) -> Result<Artifact, Failure> {
    let bundle = if args.no_z2 {
        moment::constants()?
    } else {
        moment::constants_with_z2()?
    };
    let mut extra = BTreeMap::new();
    extra.insert("z2_ladder".into(), json!(moment::PHI4_LADDER));
    let meta = metadata(cli, "constants", params(args), extra)?;
    Ok(Artifact::record(meta, serde_json::to_value(bundle).expect("bundle serializes")))
}

fn run_area(cli: &Cli, args: &AreaArgs) -> Result<Artifact, Failure> {
    let s: GInt = args.s.parse()?;
    let s = CanonicalGInt::associate(s)?;
    let spec = OmegaSpec::new(s, args.big_s)?;
    let mut record = json!({
        "s": s.to_string(),
        "S": args.big_s,
        "area_closed_form": region::omega_area(&spec),
        "lattice_count": region::omega_lattice_count(&spec, false),
        "lattice_count_coprime": region::omega_lattice_count(&spec, true),
        "prediction": region::coprime_count_prediction(&spec),
        "area_bounds_hold": region::omega_area_bounds_check(&spec),
        "boundary_surrogate": region::boundary_length_surrogate(&spec),
    });
    if args.samples > 0 {
        let abs_s = (s.norm() as f64).sqrt();
        record["area_monte_carlo"] =
            json!(region::omega_area_monte_carlo(abs_s, args.big_s as f64, args.samples, cli.seed));
    }
    let mut extra = BTreeMap::new();
    extra.insert("boundary_surrogate_factor".into(), json!(region::BOUNDARY_SURROGATE_FACTOR));
    let meta = metadata(cli, "area", params(args), extra)?;
    Ok(Artifact::record(meta, record))
}

fn calibration_extra(extra: &mut BTreeMap<String, Value>, caps: Caps) -> Result<f64, Failure> {
    let cal = moment::calibrate(&(4..=12).collect::<Vec<_>>(), caps.direct.max(12), caps.counting)?;
    extra.insert("calibration".into(), serde_json::to_value(&cal).expect("calibration serializes"));
    Ok(cal.constant)
}

fn run_moment(cli: &Cli, args: &MomentArgs) -> Result<Artifact, Failure> {
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {}", args.epsilon)).into());
    }
    let caps = caps()?;
    let methods: Vec<Method> = args.method.iter().map(|&m| m.into()).collect();
    let normalization: Normalization = args.normalization.into();
    let mut extra = BTreeMap::new();
    extra.insert("caps".into(), serde_json::to_value(caps).expect("caps serialize"));
    let calibration = if methods.contains(&Method::Counting) {
        Some(calibration_extra(&mut extra, caps)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for &s in &args.s {
        for &method in &methods {
            let report = moment::run_method(s, method, normalization, caps, cli.timing)?;
            rows.push(output::MomentRow::new(&report, calibration, args.epsilon));
        }
    }
    let meta = metadata(cli, "moment", params(args), extra)?;
    Ok(Artifact::moment(meta, rows))
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<Artifact, Failure> {
    let suite: Suite = args.suite.parse()?;
    let checks = verify::run(suite);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let meta = metadata(cli, "verify", params(args), BTreeMap::new())?;
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| serde_json::to_value(c).expect("check serializes"))
        .collect();
    let artifact = Artifact::checks(meta, rows, failed);
    Ok(artifact)
}

fn run_report(cli: &Cli, args: &ReportArgs) -> Result<Artifact, Failure> {
    let caps = caps()?;
    let mut extra = BTreeMap::new();
    let calibration = calibration_extra(&mut extra, caps)?;
    let bundle = moment::constants_with_z2()?;
    let sweep = moment::report_sweep(
        &args.s,
        &[Method::Direct, Method::Counting, Method::MainTerm],
        Normalization::OmegaFull,
        caps,
        cli.timing,
    );
    let mut rows = Vec::new();
    let mut row_errors = Vec::new();
    for row in &sweep {
        match (&row.report, &row.error) {
            (Some(r), _) => rows.push(output::MomentRow::new(r, Some(calibration), args.epsilon)),
            (None, Some(e)) => row_errors.push(json!({"S": row.s_max, "method": row.method, "error": e})),
            (None, None) => {}
        }
    }
    let sum_a: Vec<_> = [64u64, 128, 256, 512]
        .iter()
        .map(|&s| moment::sum_a(s))
        .collect::<Result<_, _>>()?;
    let phi2: Vec<_> = [64u64, 128, 256, 512]
        .iter()
        .map(|&s| moment::sum_phi_over_norm2(s))
        .collect::<Result<_, _>>()?;
    extra.insert("constants_with_z2".into(), serde_json::to_value(bundle).expect("serializes"));
    extra.insert("row_errors".into(), json!(row_errors));
    extra.insert("sum_a".into(), json!(sum_a));
    extra.insert("sum_b_growth".into(), json!(moment::sum_b_growth(&[16, 32, 64, 128], args.epsilon)?));
    extra.insert("sum_phi_over_norm2".into(), json!(phi2));
    extra.insert("sum_phi_over_norm4_fit".into(), json!(moment::fit_phi_over_norm4(&moment::PHI4_LADDER)?));
    extra.insert("boundary_surrogate_factor".into(), json!(region::BOUNDARY_SURROGATE_FACTOR));
    let meta = metadata(cli, "report", params(args), extra)?;
    Ok(Artifact::moment(meta, rows))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    let artifact = match &cli.command {
        Command::Enumerate(a) => run_enumerate(cli, a)?,
        Command::Constants(a) => run_constants(cli, a)?,
        Command::Area(a) => run_area(cli, a)?,
        Command::Moment(a) => run_moment(cli, a)?,
        Command::Verify(a) => run_verify(cli, a)?,
        Command::Report(a) => run_report(cli, a)?,
    };
    let rendered = artifact.render(cli.format).map_err(Failure::Io)?;
    match &cli.output {
        Some(path) => {
            std::fs::write(path, rendered)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            print!("{}", artifact.human_table());
        }
        // verification is read by people; everything else is an artifact
        None if artifact.failed_checks().is_some() => print!("{}", artifact.human_table()),
        None => print!("{rendered}"),
    }
    if let Some(failed) = artifact.failed_checks() {
        if failed > 0 {
            return Err(Failure::Invariant(format!("{failed} invariant check(s) failed")));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let record = json!({"error": f.kind(), "message": f.message(), "exit_code": f.code()});
            eprintln!("{record}");
            ExitCode::from(f.code())
        }
    }
}
