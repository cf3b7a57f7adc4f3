//! Command-line front end. Every command writes one report (JSON by default,
//! CSV for the table commands) and exits 0 on success, 1 on usage or domain
//! errors and 2 when a numerical check exceeds its tolerance.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{self, ZeroScanConfig, TAIL_QUOTIENT_LIMIT};
use crate::domain::{DomainSpec, PathKind, Point2C};
use crate::error::{Error, Result};
use crate::kernel::{self, ThinDenominator};
use crate::oracle::{self, Function2C};
use crate::polycoeff;
use crate::report::SCHEMA_VERSION;
use crate::transform::{self, ProperMap};

const TABLES_HELP: &str = "\
Reports are JSON objects {schema_version, command, version, params, passed, results}.
ramadanov, zero-scan and asymptotics default to CSV; the first line is a comment
'# hartogs <command> schema_version=N', followed by a header row:
  ramadanov:   k,pair,error,max_error,min_abs_kernel   (error empty before the pair enters H_k)
  zero-scan:   kind,s,p,q,t_re,t_im,t_abs,value,realizable
               (kind=root: value is the relative residual; kind=cell: value is |numerator|)
  asymptotics: spec,path,step,eps,z1_abs,z2_abs,diagonal,ratio,delta_ratio
               (delta_ratio = B(z,z)·δ(z)², origin paths only)
Complex numbers are written re,im (or just re); a point is two of them.
Exit status: 0 ok, 1 usage or domain error, 2 check failed.";

#[derive(Debug, Parser)]
#[command(name = "hartogs", version, about = "Bergman kernels of generalized Hartogs triangles", after_help = TABLES_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format [default: csv for table commands, json otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form kernel B(z, w)
    Eval(EvalArgs),
    /// Monomial-series kernel against the closed form
    SeriesCompare(SeriesArgs),
    /// Bell's transformation rule for the power map H_1 -> H_k
    BellCheck(BellArgs),
    /// Biholomorphic transformation rule for a shear map
    BiholoCheck(BiholoArgs),
    /// Zero witnesses of the fat kernels and zero-freeness of the thin ones
    Lqk(LqkArgs),
    /// Roots of the fat-kernel numerator over a real s slice (table)
    ZeroScan(ZeroScanArgs),
    /// Diagonal blow-up along boundary approach paths (table)
    Asymptotics(AsymptoticsArgs),
    /// Convergence of B_k to the punctured-bidisc kernel (table)
    Ramadanov(RamadanovArgs),
    /// Monte Carlo check of the reproducing property
    Reproduce(ReproduceArgs),
    /// Exact polynomial identities for the numerator coefficients
    Identities(IdentitiesArgs),
    /// Monte Carlo volume against the exact volume
    Volume(VolumeArgs),
}

fn parse_spec(s: &str) -> std::result::Result<DomainSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("{x:?} is not a number"));
    let c = match s.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(s)?, 0.0),
    };
    if c.is_finite() {
        Ok(c)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_function(s: &str) -> std::result::Result<Function2C, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_map(s: &str) -> std::result::Result<ProperMap, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_path(s: &str) -> std::result::Result<PathKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn point(v: &[Complex64]) -> Point2C {
    Point2C::new(v[0], v[1])
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Domain: fat:K, thin:K, classical, bidisc or punctured-bidisc
    #[arg(long, value_parser = parse_spec)]
    pub spec: DomainSpec,
    /// First point
    #[arg(long, num_args = 2, value_names = ["Z1", "Z2"], allow_hyphen_values = true, value_parser = parse_complex, required = true)]
    pub z: Vec<Complex64>,
    /// Second point
    #[arg(long, num_args = 2, value_names = ["W1", "W2"], allow_hyphen_values = true, value_parser = parse_complex, required = true)]
    pub w: Vec<Complex64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SeriesArgs {
    #[arg(long, value_parser = parse_spec)]
    pub spec: DomainSpec,
    /// First point; with --w, compares at this pair instead of random pairs
    #[arg(long, num_args = 2, value_names = ["Z1", "Z2"], allow_hyphen_values = true, value_parser = parse_complex, requires = "w")]
    pub z: Option<Vec<Complex64>>,
    #[arg(long, num_args = 2, value_names = ["W1", "W2"], allow_hyphen_values = true, value_parser = parse_complex, requires = "z")]
    pub w: Option<Vec<Complex64>>,
    /// Random pairs when no point is given
    #[arg(long, default_value_t = 50)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random pairs keep |z1 w1*| and |z2 w2*| at most this
    #[arg(long, default_value_t = 0.4)]
    pub max_modulus: f64,
    /// Series tail bound, relative to the partial sum
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Largest accepted relative deviation from the closed form
    #[arg(long, default_value_t = 1e-6)]
    pub max_dev: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BellArgs {
    /// Order of the power map
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest accepted relative residual
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThinCandidate {
    OneMinusT,
    OneMinusS,
}

impl From<ThinCandidate> for ThinDenominator {
    fn from(c: ThinCandidate) -> Self {
        match c {
            ThinCandidate::OneMinusT => ThinDenominator::OneMinusT,
            ThinCandidate::OneMinusS => ThinDenominator::OneMinusS,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BiholoArgs {
    /// shear, shear-inv, shear-iter:K or shear-iter-inv:K
    #[arg(long, value_parser = parse_map, default_value = "shear")]
    #[serde(serialize_with = "ser_display")]
    pub map: ProperMap,
    /// Source domain [default: the map's canonical source]
    #[arg(long, value_parser = parse_spec)]
    pub src: Option<DomainSpec>,
    /// Target domain [default: the map's canonical target]
    #[arg(long, value_parser = parse_spec)]
    pub dst: Option<DomainSpec>,
    /// With shear-iter:K, test this thin-kernel candidate instead of the closed form
    #[arg(long, value_enum)]
    pub thin_candidate: Option<ThinCandidate>,
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Args, Serialize)]
pub struct LqkArgs {
    /// A single k; otherwise every k in 2..=kmax
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 50)]
    pub kmax: u32,
    /// Random pairs per thin triangle H_{1/k}, k = 1..=thin-kmax (0 skips)
    #[arg(long, default_value_t = 100_000)]
    pub thin_pairs: usize,
    #[arg(long, default_value_t = 4)]
    pub thin_kmax: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ZeroScanArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// s runs over -1 + 2i/s-steps, 0 < i < s-steps
    #[arg(long, default_value_t = 40)]
    pub s_steps: usize,
    /// Radial cells of the |t| < 1 grid
    #[arg(long, default_value_t = 20)]
    pub t_radii: usize,
    /// Angular cells of the |t| < 1 grid
    #[arg(long, default_value_t = 64)]
    pub t_args: usize,
    /// Report cells with |numerator| at most this, relative to its term moduli
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, value_parser = parse_spec)]
    pub spec: DomainSpec,
    /// origin, smooth-levi-flat, top-face or corner; repeatable [default: all]
    #[arg(long = "path", value_parser = parse_path)]
    pub paths: Vec<PathKind>,
    /// Path samples at ε = 2^-m, m = 1..=steps
    #[arg(long, default_value_t = analysis::DEFAULT_PATH_STEPS)]
    pub steps: usize,
    /// Largest accepted max/min ratio over the last 10 samples
    #[arg(long, default_value_t = TAIL_QUOTIENT_LIMIT)]
    pub max_quotient: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RamadanovArgs {
    /// Diagonal pair (z, z); repeatable [default: (0.5,0.6) (0.3,0.7) (0.2,0.9)]
    #[arg(long = "point", num_args = 2, value_names = ["Z1", "Z2"], allow_hyphen_values = true, value_parser = parse_complex, action = clap::ArgAction::Append)]
    pub points: Vec<Complex64>,
    #[arg(long, default_value_t = 25)]
    pub kmax: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    #[arg(long, value_parser = parse_spec)]
    pub spec: DomainSpec,
    /// one, z1, z2, z2inv or z1^A*z2^B
    #[arg(long = "f", value_parser = parse_function, default_value = "one")]
    #[serde(serialize_with = "ser_display")]
    pub function: Function2C,
    #[arg(long, num_args = 2, value_names = ["Z1", "Z2"], allow_hyphen_values = true, value_parser = parse_complex, required = true)]
    pub z: Vec<Complex64>,
    /// Bidisc draws
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest accepted |estimate - f(z)| / max(1, |f(z)|)
    #[arg(long, default_value_t = 0.02)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 50)]
    pub kmax: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct VolumeArgs {
    #[arg(long, value_parser = parse_spec)]
    pub spec: DomainSpec,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Accepted deviation in standard errors
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,
}

#[derive(Serialize)]
struct Envelope<'a, P: Serialize, R: Serialize> {
    schema_version: u32,
    command: &'a str,
    version: &'static str,
    params: &'a P,
    passed: bool,
    results: R,
}

/// A rendered report and whether its check passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn json<P: Serialize, R: Serialize>(command: &str, params: &P, passed: bool, results: R) -> Result<Outcome> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        version: env!("CARGO_PKG_VERSION"),
        params,
        passed,
        results,
    };
    let mut body = serde_json::to_string_pretty(&env).map_err(|e| Error::Parse(e.to_string()))?;
    body.push('\n');
    Ok(Outcome { body, passed })
}

fn csv<R: Serialize>(command: &str, rows: impl IntoIterator<Item = R>, passed: bool) -> Result<Outcome> {
    let io = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    let data = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    let mut body = format!("# hartogs {command} schema_version={SCHEMA_VERSION}\n");
    body.push_str(&String::from_utf8_lossy(&data));
    Ok(Outcome { body, passed })
}

fn eval(a: &EvalArgs) -> Result<Outcome> {
    let kv = kernel::bergman(&a.spec, &point(&a.z), &point(&a.w))?;
    json("eval", a, true, kv)
}

#[derive(Serialize)]
struct SeriesResults {
    max_rel_deviation: f64,
    comparisons: Vec<oracle::SeriesComparison>,
}

fn series_compare(a: &SeriesArgs) -> Result<Outcome> {
    let pairs = match (&a.z, &a.w) {
        (Some(z), Some(w)) => vec![(point(z), point(w))],
        _ => oracle::sample_pairs_bounded(&a.spec, a.pairs, a.seed, a.max_modulus)?,
    };
    let comparisons = pairs
        .iter()
        .map(|(z, w)| oracle::compare_with_closed_form(&a.spec, z, w, a.tol))
        .collect::<Result<Vec<_>>>()?;
    let max = comparisons.iter().map(|c| c.rel_deviation).fold(0.0, f64::max);
    json("series-compare", a, max <= a.max_dev, SeriesResults { max_rel_deviation: max, comparisons })
}

fn bell_check(a: &BellArgs) -> Result<Outcome> {
    let r = transform::bell_check(a.k, a.pairs, a.seed)?;
    json("bell-check", a, r.max_residual <= a.tol, r)
}

fn biholo_check(a: &BiholoArgs) -> Result<Outcome> {
    let r = match (a.thin_candidate, a.map) {
        (Some(c), ProperMap::ShearIter(k)) => transform::thin_variant_check(k, c.into(), a.pairs, a.seed)?,
        (Some(_), m) => return Err(Error::Precondition(format!("--thin-candidate needs a shear-iter map, not {m}"))),
        (None, m) => {
            let src = a.src.map_or_else(|| m.source(), Ok)?;
            let dst = a.dst.map_or_else(|| m.target(), Ok)?;
            transform::biholo_check(m, &src, &dst, a.pairs, a.seed)?
        }
    };
    json("biholo-check", a, r.max_residual <= a.tol, r)
}

#[derive(Serialize)]
struct LqkResults {
    witnesses: Vec<analysis::ZeroWitness>,
    thin: Vec<analysis::NonvanishingReport>,
}

fn lqk(a: &LqkArgs) -> Result<Outcome> {
    let ks: Vec<u32> = match a.k {
        Some(k) => vec![k],
        None => (2..=a.kmax).collect(),
    };
    let witnesses = ks.into_iter().map(analysis::lqk_witness).collect::<Result<Vec<_>>>()?;
    let thin = if a.thin_pairs == 0 {
        Vec::new()
    } else {
        (1..=a.thin_kmax).map(|k| analysis::thin_nonvanishing(k, a.thin_pairs, a.seed)).collect::<Result<Vec<_>>>()?
    };
    let passed = witnesses.iter().all(|w| w.confirmed) && thin.iter().all(|t| t.zero_hits == 0);
    json("lqk", a, passed, LqkResults { witnesses, thin })
}

#[derive(Serialize)]
struct ScanCsvRow {
    kind: &'static str,
    s: f64,
    p: f64,
    q: f64,
    t_re: f64,
    t_im: f64,
    t_abs: f64,
    value: f64,
    realizable: bool,
}

fn zero_scan(a: &ZeroScanArgs, format: Format) -> Result<Outcome> {
    let cfg = ZeroScanConfig { k: a.k, s_steps: a.s_steps, t_radii: a.t_radii, t_args: a.t_args, tol: a.tol };
    let rows = analysis::zero_locus_scan(&cfg)?;
    if format == Format::Json {
        return json("zero-scan", a, true, rows);
    }
    let mut out = Vec::new();
    for r in &rows {
        let base = |kind, t: Complex64, value, realizable| ScanCsvRow {
            kind,
            s: r.s,
            p: r.p,
            q: r.q,
            t_re: t.re,
            t_im: t.im,
            t_abs: t.norm(),
            value,
            realizable,
        };
        out.extend(r.roots.iter().map(|x| base("root", x.t, x.residual, x.realizable)));
        out.extend(r.small_cells.iter().map(|x| base("cell", x.t, x.numerator_abs, x.realizable)));
    }
    csv("zero-scan", out, true)
}

#[derive(Serialize)]
struct AsymptoticsCsvRow {
    spec: String,
    path: PathKind,
    step: usize,
    eps: f64,
    z1_abs: f64,
    z2_abs: f64,
    diagonal: f64,
    ratio: f64,
    delta_ratio: Option<f64>,
}

#[derive(Serialize)]
struct PathSummary {
    path: PathKind,
    ratio: analysis::AsymptoticReport,
    delta: Option<analysis::AsymptoticReport>,
}

fn asymptotics(a: &AsymptoticsArgs, format: Format, err: &mut dyn Write) -> Result<Outcome> {
    let kinds = if a.paths.is_empty() { PathKind::ALL.to_vec() } else { a.paths.clone() };
    let mut summaries = Vec::new();
    for kind in kinds {
        let path = a.spec.boundary_path(kind, a.steps)?;
        let delta = if kind == PathKind::Origin { Some(analysis::delta_rate(&a.spec, path.clone())?) } else { None };
        let ratio = analysis::diagonal_ratio(&a.spec, path)?;
        summaries.push(PathSummary { path: kind, ratio, delta });
    }
    let ok = |r: &analysis::AsymptoticReport| r.tail_quotient <= a.max_quotient;
    let passed = summaries.iter().all(|s| ok(&s.ratio) && s.delta.as_ref().is_none_or(ok));
    if format == Format::Json {
        return json("asymptotics", a, passed, summaries);
    }
    let mut rows = Vec::new();
    for s in &summaries {
        let _ = writeln!(err, "{} {}: tail quotient {:.4}", a.spec, s.path, s.ratio.tail_quotient);
        for (i, p) in s.ratio.path.samples.iter().enumerate() {
            rows.push(AsymptoticsCsvRow {
                spec: a.spec.to_string(),
                path: s.path,
                step: i + 1,
                eps: s.ratio.path.params[i],
                z1_abs: p.z1.norm(),
                z2_abs: p.z2.norm(),
                diagonal: s.ratio.diagonal[i],
                ratio: s.ratio.ratios[i],
                delta_ratio: s.delta.as_ref().map(|d| d.ratios[i]),
            });
        }
    }
    csv("asymptotics", rows, passed)
}

#[derive(Serialize)]
struct RamadanovCsvRow {
    k: u32,
    pair: usize,
    error: Option<f64>,
    max_error: f64,
    min_abs_kernel: f64,
}

#[derive(Serialize)]
struct RamadanovResults {
    tail_decreasing: bool,
    first_max_error: f64,
    last_max_error: f64,
    table: analysis::RamadanovTable,
}

fn ramadanov(a: &RamadanovArgs, format: Format) -> Result<Outcome> {
    let pairs = if a.points.is_empty() {
        analysis::default_ramadanov_pairs()
    } else {
        a.points.chunks_exact(2).map(|c| (point(c), point(c))).collect()
    };
    let table = analysis::ramadanov_table(&pairs, a.kmax)?;
    let first = table.rows.first().map_or(0.0, |r| r.max_error);
    let last = table.rows.last().map_or(0.0, |r| r.max_error);
    let tail_decreasing = table.tail_decreasing(10);
    let passed = tail_decreasing && last < first / 10.0;
    if format == Format::Json {
        let results = RamadanovResults { tail_decreasing, first_max_error: first, last_max_error: last, table };
        return json("ramadanov", a, passed, results);
    }
    let rows = table.rows.iter().flat_map(|r| {
        r.errors.iter().enumerate().map(move |(i, e)| RamadanovCsvRow {
            k: r.k,
            pair: i,
            error: *e,
            max_error: r.max_error,
            min_abs_kernel: r.min_abs_kernel,
        })
    });
    csv("ramadanov", rows, passed)
}

fn reproduce(a: &ReproduceArgs) -> Result<Outcome> {
    let r = oracle::reproducing_check(&a.spec, a.function, &point(&a.z), a.n, a.seed)?;
    json("reproduce", a, r.residual <= a.tol, r)
}

fn identities(a: &IdentitiesArgs) -> Result<Outcome> {
    let r = polycoeff::verify_identities(a.kmax)?;
    json("identities", a, r.all_passed, r)
}

#[derive(Serialize)]
struct VolumeResults {
    estimate: oracle::McEstimate,
    exact: f64,
}

fn volume(a: &VolumeArgs) -> Result<Outcome> {
    let est = oracle::inner_product_mc(&a.spec, Function2C::One, Function2C::One, a.n, a.seed)?;
    let exact = a.spec.volume();
    let passed = est.within(Complex64::new(exact, 0.0), a.sigmas);
    json("volume", a, passed, VolumeResults { estimate: est, exact })
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Result<Outcome> {
    let table = matches!(cli.command, Command::ZeroScan(_) | Command::Asymptotics(_) | Command::Ramadanov(_));
    let format = cli.format.unwrap_or(if table { Format::Csv } else { Format::Json });
    if format == Format::Csv && !table {
        return Err(Error::Precondition(
            "csv output is only available for ramadanov, zero-scan and asymptotics".into(),
        ));
    }
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::SeriesCompare(a) => series_compare(a),
        Command::BellCheck(a) => bell_check(a),
        Command::BiholoCheck(a) => biholo_check(a),
        Command::Lqk(a) => lqk(a),
        Command::ZeroScan(a) => zero_scan(a, format),
        Command::Asymptotics(a) => asymptotics(a, format, err),
        Command::Ramadanov(a) => ramadanov(a, format),
        Command::Reproduce(a) => reproduce(a),
        Command::Identities(a) => identities(a),
        Command::Volume(a) => volume(a),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match dispatch(&cli, err) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.body),
        None => out.write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return 1;
    }
    let _ = writeln!(err, "wall time: {:.3} s", start.elapsed().as_secs_f64());
    if outcome.passed {
        0
    } else {
        let _ = writeln!(err, "check failed");
        2
    }
}
