//! Command-line front end. [`parse_and_dispatch`] returns the process exit
//! code: `0` all checks passed, `1` some identity or verdict failed, `2`
//! usage, input or I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use casalvero::ca::{ca_check, CAReport, Mode, Verdict};
use casalvero::explorer::{
    ca_search, identity_sweep, schoenberg_experiment, Distribution, SampleConfig, SearchConfig,
};
use casalvero::goncharov::{
    bound_classical, bound_tight, goncharov_expand, goncharov_integral, goncharov_levinson,
    goncharov_recurrence, full_det_polynomial, LevinsonMethod, NodeSequence,
};
use casalvero::identities::IdentityId;
use casalvero::io::{
    load_nodes_json, load_poly_json, write_report, AnyNodes, AnyPoly, Format, PolyDocument,
};
use casalvero::numeric::{parse_scalar, to_float, Field, Scalar};
use casalvero::poly::Poly;
use casalvero::{Error, Exact, Float, Tolerance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser, Serialize)]
#[command(name = "casalvero", version, about = "Abel-Goncharov constructions, root identities and Casas-Alvero experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalOpts {
    /// Absolute tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_abs: f64,
    /// Relative tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_rel: f64,
    /// Require exact arithmetic; float input is an error.
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,
    /// Convert input to binary64 before computing.
    #[arg(long, global = true)]
    pub float: bool,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "casalvero-out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the rayon default.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Construct G_n by several routes and compare them.
    Goncharov {
        #[arg(long)]
        nodes: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
    },
    /// Randomised sweep of one identity (or `all`).
    Verify {
        #[arg(long)]
        identity: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
    },
    /// Casas-Alvero root-sharing check of a polynomial file.
    Check {
        #[arg(long)]
        poly: PathBuf,
    },
    /// |G_n(z)| against both bounds.
    Bounds {
        #[arg(long)]
        nodes: PathBuf,
        /// Evaluation point(s), e.g. `1/2`, `(1,-2)`, `0.3`.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Schoenberg gap surveillance on random root sets.
    Schoenberg {
        #[arg(long, value_delimiter = ',', default_values_t = vec![5])]
        degree: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value = "uniform-unit-disk")]
        distribution: String,
    },
    /// Multistart search for non-trivial CA polynomials.
    Search {
        #[arg(long, value_delimiter = ',', default_values_t = vec![4])]
        degree: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Recurrence,
    Integral,
    LevinsonIntegral,
    LevinsonFactorial,
    LevinsonBinomial,
    Determinant,
    All,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Goncharov { .. } => "goncharov",
            Command::Verify { .. } => "verify",
            Command::Check { .. } => "check",
            Command::Bounds { .. } => "bounds",
            Command::Schoenberg { .. } => "schoenberg",
            Command::Search { .. } => "search",
        }
    }

    fn inputs(&self) -> Vec<&Path> {
        match self {
            Command::Goncharov { nodes, .. } | Command::Bounds { nodes, .. } => vec![nodes.as_path()],
            Command::Check { poly } => vec![poly.as_path()],
            _ => Vec::new(),
        }
    }

    fn seeded(&self) -> bool {
        matches!(
            self,
            Command::Verify { .. } | Command::Schoenberg { .. } | Command::Search { .. }
        )
    }
}

/// Written next to the outputs of every run that reaches execution.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub tool_version: String,
    pub seeds: Vec<u64>,
    pub input_digests: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub exit_code: i32,
    pub started: String,
    pub finished: String,
}

pub const MANIFEST_NAME: &str = "manifest.json";

fn sha256_file(path: &Path) -> Result<String, Error> {
    let bytes = fs::read(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Parses `argv` (without the program name), runs the subcommand and maps
/// the outcome to an exit code.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("casalvero")).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("casalvero: {e}");
            EXIT_USAGE
        }
    }
}

struct Session<'a> {
    cli: &'a Cli,
    tol: Tolerance,
    outputs: Vec<String>,
}

impl Session<'_> {
    fn write<R: Serialize + ?Sized>(&mut self, name: &str, report: &R, format: Format) -> Result<(), Error> {
        write_report(report, self.cli.global.out.join(name), format)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// `Some(true)` for `--exact`, `Some(false)` for `--float`.
    fn arithmetic(&self) -> Option<bool> {
        match (self.cli.global.exact, self.cli.global.float) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }

    fn float_only(&self, what: &str) -> Result<(), Error> {
        if self.cli.global.exact {
            return Err(Error::Type(format!("{what} runs in binary64; --exact is not available")));
        }
        Ok(())
    }
}

fn run(cli: &Cli, argv: &[OsString]) -> Result<i32, Error> {
    let started = chrono::Utc::now();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Error::Domain("--threads must be positive".into()));
        }
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let tol = Tolerance::new(cli.global.tol_abs, cli.global.tol_rel)?;
    let mut digests = BTreeMap::new();
    for p in cli.command.inputs() {
        digests.insert(p.display().to_string(), sha256_file(p)?);
    }
    fs::create_dir_all(&cli.global.out).map_err(|e| Error::Io {
        path: cli.global.out.display().to_string(),
        detail: e.to_string(),
    })?;

    let mut s = Session {
        cli,
        tol,
        outputs: Vec::new(),
    };
    let passed = match &cli.command {
        Command::Goncharov { nodes, method } => goncharov_cmd(&mut s, nodes, *method)?,
        Command::Verify {
            identity,
            trials,
            max_degree,
        } => verify_cmd(&mut s, identity, *trials, *max_degree)?,
        Command::Check { poly } => check_cmd(&mut s, poly)?,
        Command::Bounds { nodes, z } => bounds_cmd(&mut s, nodes, z)?,
        Command::Schoenberg {
            degree,
            trials,
            distribution,
        } => schoenberg_cmd(&mut s, degree, *trials, distribution)?,
        Command::Search {
            degree,
            restarts,
            max_iterations,
        } => search_cmd(&mut s, degree, *restarts, *max_iterations)?,
    };
    let exit_code = if passed { EXIT_OK } else { EXIT_FAILED };
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        argv: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        config: serde_json::to_value(cli).map_err(|e| Error::Consistency(e.to_string()))?,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seeds: if cli.command.seeded() { vec![cli.global.seed] } else { Vec::new() },
        input_digests: digests,
        outputs: s.outputs,
        exit_code,
        started: started.to_rfc3339(),
        finished: chrono::Utc::now().to_rfc3339(),
    };
    write_report(&manifest, cli.global.out.join(MANIFEST_NAME), Format::Json)?;
    Ok(exit_code)
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn load_nodes(s: &Session, path: &Path) -> Result<AnyNodes, Error> {
    let loaded = load_nodes_json(path)?;
    warn_all(&loaded.warnings);
    match (loaded.value, s.arithmetic()) {
        (AnyNodes::Float(_), Some(true)) => Err(Error::Type("--exact given but the nodes are not exact".into())),
        (AnyNodes::Exact(q), Some(false)) => Ok(AnyNodes::Float(q.map(Field::to_c64))),
        (v, _) => Ok(v),
    }
}

#[derive(Serialize)]
struct Construction {
    method: &'static str,
    polynomial: PolyDocument,
}

#[derive(Serialize)]
struct GoncharovReport {
    degree: usize,
    exact: bool,
    methods: Vec<&'static str>,
    agree: bool,
    /// Largest coefficient gap against the first method.
    max_coefficient_gap: f64,
    constructions: Vec<Construction>,
}

fn constructions<T: Field>(nodes: &NodeSequence<T>, method: MethodArg) -> Result<Vec<(&'static str, Poly<T>)>, Error> {
    let zero_base = nodes.nodes()[0].is_zero();
    let all = method == MethodArg::All;
    let mut out = Vec::new();
    let want = |m: MethodArg| all || method == m;
    if want(MethodArg::Recurrence) {
        out.push(("recurrence", goncharov_recurrence(nodes)));
    }
    if want(MethodArg::Integral) {
        out.push(("integral", goncharov_integral(nodes)));
    }
    for (arg, name, lm) in [
        (MethodArg::LevinsonIntegral, "levinson-integral", LevinsonMethod::Integral),
        (MethodArg::LevinsonFactorial, "levinson-factorial", LevinsonMethod::DetFactorial),
        (MethodArg::LevinsonBinomial, "levinson-binomial", LevinsonMethod::DetBinomial),
    ] {
        if want(arg) {
            out.push((name, goncharov_levinson(nodes, lm)));
        }
    }
    if method == MethodArg::Determinant || (all && zero_base) {
        // The Hessenberg determinant is (-1)^{n+1} G_n.
        let sign = T::from_i64(-1).powi(nodes.degree() + 1);
        out.push(("determinant", full_det_polynomial(nodes)?.scale(&sign)));
        if all {
            out.push(("expansion", goncharov_expand(nodes, LevinsonMethod::DetBinomial)?));
        }
    }
    Ok(out)
}

fn goncharov_report<T: Field>(
    nodes: &NodeSequence<T>,
    method: MethodArg,
    tol: &Tolerance,
    doc: impl Fn(&Poly<T>) -> PolyDocument,
) -> Result<GoncharovReport, Error> {
    let built = constructions(nodes, method)?;
    let reference = &built[0].1;
    let mut gap: f64 = 0.0;
    let mut agree = true;
    for (_, p) in &built[1..] {
        let len = p.coeffs().len().max(reference.coeffs().len());
        for k in 0..len {
            let (a, b) = (p.coeff(k), reference.coeff(k));
            let d = (a.clone() - b.clone()).modulus();
            gap = gap.max(d);
            let ok = if T::EXACT { a == b } else { tol.accepts(d, a.modulus(), b.modulus()) };
            agree &= ok;
        }
    }
    Ok(GoncharovReport {
        degree: nodes.degree(),
        exact: T::EXACT,
        methods: built.iter().map(|(m, _)| *m).collect(),
        agree,
        max_coefficient_gap: gap,
        constructions: built
            .iter()
            .map(|(m, p)| Construction {
                method: m,
                polynomial: doc(p),
            })
            .collect(),
    })
}

fn goncharov_cmd(s: &mut Session, path: &Path, method: MethodArg) -> Result<bool, Error> {
    let report = match load_nodes(s, path)? {
        AnyNodes::Exact(n) => goncharov_report(&n, method, &s.tol, PolyDocument::from_exact)?,
        AnyNodes::Float(n) => goncharov_report(&n, method, &s.tol, PolyDocument::from_float)?,
    };
    s.write("goncharov.json", &report, Format::Json)?;
    println!(
        "G_{} via {}: {}",
        report.degree,
        report.methods.join(", "),
        if report.agree { "agree" } else { "DISAGREE" }
    );
    Ok(report.agree)
}

fn verify_cmd(s: &mut Session, identity: &str, trials: usize, max_degree: usize) -> Result<bool, Error> {
    s.float_only("verify")?;
    let ids: Vec<IdentityId> = if identity.eq_ignore_ascii_case("all") {
        IdentityId::ALL.to_vec()
    } else {
        vec![identity.parse()?]
    };
    let mut all_passed = true;
    for id in ids {
        let rows = identity_sweep(id, trials, s.cli.global.seed, max_degree, &s.tol)?;
        let failed = rows.iter().filter(|r| !r.passed).count();
        let worst = rows
            .iter()
            .map(|r| r.residual / r.scale.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        println!("{id}: {} trials, {failed} failed, worst residual/scale {worst:.3e}", rows.len());
        all_passed &= failed == 0;
        s.write(&format!("verify_{id}.csv"), &rows, Format::Csv)?;
    }
    Ok(all_passed)
}

fn print_ca_table(r: &CAReport) {
    println!("degree {} ({:?}): verdict {}", r.degree, r.method, verdict_name(r.verdict));
    println!("{:>5}  {:>6}  {:>7}  shared", "order", "#roots", "#shared");
    for o in &r.orders {
        let shared: Vec<String> = o.shared.iter().map(|z| format_scalar(z)).collect();
        println!(
            "{:>5}  {:>6}  {:>7}  {}",
            o.order,
            o.derivative_roots.len(),
            o.shared_count,
            shared.join(" ")
        );
    }
}

fn format_scalar(z: &Scalar) -> String {
    match z {
        Scalar::Exact(q) => q.to_string(),
        Scalar::Float(c) => format!("({:.6e},{:.6e})", c.re, c.im),
    }
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|x| x.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn check_cmd(s: &mut Session, path: &Path) -> Result<bool, Error> {
    let loaded = load_poly_json(path)?;
    warn_all(&loaded.warnings);
    let report = match (loaded.value, s.arithmetic()) {
        (AnyPoly::Float(_), Some(true)) => {
            return Err(Error::Type("--exact given but the polynomial is not exact".into()))
        }
        (AnyPoly::Exact(f), Some(false)) => ca_check(&f.to_c64(), Mode::Numeric, &s.tol)?,
        (AnyPoly::Exact(f), _) => ca_check(&f, Mode::Exact, &s.tol)?,
        (AnyPoly::Float(f), _) => ca_check(&f, Mode::Numeric, &s.tol)?,
    };
    print_ca_table(&report);
    s.write("check.json", &report, Format::Json)?;
    Ok(report.verdict != Verdict::CaCandidate)
}

#[derive(Serialize)]
struct BoundRow {
    z: Scalar,
    value: f64,
    bound_tight: f64,
    bound_classical: f64,
    /// `value <= bound_tight <= bound_classical` within tolerance.
    ordered: bool,
    /// `bound_tight < bound_classical`.
    strict: bool,
}

fn bound_rows<T: Field>(nodes: &NodeSequence<T>, zs: &[T], tol: &Tolerance) -> Vec<BoundRow> {
    let g = goncharov_recurrence(nodes);
    zs.iter()
        .map(|z| {
            let value = g.eval(z).modulus();
            let tight = bound_tight(nodes, z);
            let classical = bound_classical(nodes, z);
            let le = |a: f64, b: f64| a <= b || tol.accepts(a - b, a, b);
            BoundRow {
                z: z.to_scalar(),
                value,
                bound_tight: tight,
                bound_classical: classical,
                ordered: le(value, tight) && le(tight, classical),
                strict: tight < classical,
            }
        })
        .collect()
}

fn bounds_cmd(s: &mut Session, path: &Path, zs: &[String]) -> Result<bool, Error> {
    let points: Vec<Scalar> = zs.iter().map(|z| parse_scalar(z)).collect::<Result<_, _>>()?;
    let nodes = load_nodes(s, path)?;
    let exact_points: Option<Vec<Exact>> = points.iter().map(|p| p.as_exact().cloned()).collect();
    let rows = match (nodes, exact_points) {
        (AnyNodes::Exact(n), Some(zq)) => bound_rows(&n, &zq, &s.tol),
        (AnyNodes::Exact(_), None) if s.cli.global.exact => {
            return Err(Error::Type("--exact given but an evaluation point is not exact".into()))
        }
        (nodes, _) => {
            let n: NodeSequence<Float> = match nodes {
                AnyNodes::Exact(q) => q.map(Field::to_c64),
                AnyNodes::Float(f) => f,
            };
            let zf: Vec<Complex64> = points.iter().map(to_float).collect::<Result<_, _>>()?;
            bound_rows(&n, &zf, &s.tol)
        }
    };
    for r in &rows {
        println!(
            "z = {}: |G| = {:.6e}, tight = {:.6e}, classical = {:.6e}{}",
            format_scalar(&r.z),
            r.value,
            r.bound_tight,
            r.bound_classical,
            if r.ordered { "" } else { "  ORDER VIOLATED" }
        );
    }
    s.write("bounds.json", &rows, Format::Json)?;
    Ok(rows.iter().all(|r| r.ordered))
}

fn schoenberg_cmd(s: &mut Session, degrees: &[usize], trials: usize, distribution: &str) -> Result<bool, Error> {
    s.float_only("schoenberg")?;
    let distribution: Distribution = distribution.parse()?;
    let mut summaries = Vec::new();
    let mut rows = Vec::new();
    for &degree in degrees {
        let cfg = SampleConfig {
            degree,
            trials,
            seed: s.cli.global.seed,
            distribution,
        };
        let (summary, r) = schoenberg_experiment(&cfg)?;
        println!(
            "degree {degree}: min gap {:.3e}, {} violations, {} equality cases (all collinear: {})",
            summary.min_gap, summary.violation_count, summary.equality_count, summary.equality_all_collinear
        );
        summaries.push(summary);
        rows.extend(r);
    }
    s.write("schoenberg.csv", &rows, Format::Csv)?;
    s.write("schoenberg_summary.json", &summaries, Format::Json)?;
    Ok(summaries
        .iter()
        .all(|x| x.violation_count == 0 && x.equality_all_collinear))
}

#[derive(Serialize)]
struct SearchRow {
    degree: usize,
    restart: usize,
    seed: u64,
    objective: f64,
    dispersion: f64,
    iterations: usize,
    converged: bool,
    classification: casalvero::explorer::Classification,
}

fn search_cmd(s: &mut Session, degrees: &[usize], restarts: usize, max_iterations: usize) -> Result<bool, Error> {
    s.float_only("search")?;
    let mut rows = Vec::new();
    let mut clean = true;
    for &degree in degrees {
        let mut cfg = SearchConfig::new(degree, restarts, s.cli.global.seed);
        cfg.max_iterations = max_iterations;
        let result = ca_search(&cfg)?;
        println!(
            "degree {degree}: best objective {:.3e}, {} trivial_basin, {} candidate, {} non_converged",
            result.best_objective, result.trivial_basin_count, result.candidate_count, result.non_converged_count
        );
        for r in &result.trace {
            rows.push(SearchRow {
                degree,
                restart: r.restart,
                seed: cfg.seed,
                objective: r.objective,
                dispersion: r.dispersion,
                iterations: r.iterations,
                converged: r.converged,
                classification: r.classification,
            });
        }
        for c in &result.candidates {
            let dir = s.cli.global.out.join("findings");
            fs::create_dir_all(&dir).map_err(|e| Error::Io {
                path: dir.display().to_string(),
                detail: e.to_string(),
            })?;
            s.write(
                &format!("findings/candidate_n{degree}_r{}.json", c.restart),
                c,
                Format::Json,
            )?;
        }
        clean &= result.candidate_count == 0;
        s.write(&format!("search_n{degree}.json"), &result, Format::Json)?;
    }
    s.write("search.csv", &rows, Format::Csv)?;
    Ok(clean)
}
