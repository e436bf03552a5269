//! The `kdep` command line.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 parse error, 3 budget
//! exceeded, 4 unsupported field order, 5 bad parameters, 10 obstruction
//! found by `certify`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use kdep_core::bounds::{self, certify_profile, BoundsError, Certificate, Trigger, Verdict, CLOSED_FORM_MIN_CODIMENSION};
use kdep_core::field::FieldError;
use kdep_core::matroid::{DependenceProfile, MatroidError, DEFAULT_PROFILE_BUDGET};
use kdep_core::montecarlo::{check_markov, EmpiricalDistribution, MonteCarloError, SampleConfig, DEFAULT_SAMPLE_BUDGET};
use kdep_core::search::{
    combine_outcomes, projective_multiset, search_ind, search_min_dependence, PartitionRunner, PointSpace, SearchConfig,
    SearchError, ThresholdSearch, DEFAULT_NODE_BUDGET,
};
use kdep_core::table::{ExtremalTable, Provenance, TableRow};
use kdep_core::{Field, LinalgError, Matroid};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::document::{BuildError, MatroidDocument, ParseError};
use crate::parallel::{default_workers, Workers, WORKERS_ENV};
use crate::report::{parse_rational, Entry, Format, Report};
use crate::tables::{parse_table, write_row};

/// Exit code when `certify` finds an obstruction.
pub const EXIT_OBSTRUCTION: i32 = 10;

/// Default node budget for the searches `certify` runs on its own.
pub const DEFAULT_CERTIFY_BUDGET: u64 = 100_000_000;

#[derive(Parser, Debug)]
#[command(name = "kdep", version, about = "k-dependence profiles, representability bounds and extremal search over small finite fields")]
struct Cli {
    /// Worker threads (default: $KDEP_WORKERS, else available parallelism).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print d(M,k) for every k.
    Profile {
        input: PathBuf,
        /// Most subsets to enumerate in total.
        #[arg(long, default_value_t = DEFAULT_PROFILE_BUDGET)]
        budget: u64,
    },
    /// Look for a non-representability certificate over each F_q.
    ///
    /// Without --tables, the exact D_q(r,k,s) values a certificate needs are
    /// found by exhaustive search within --budget nodes per query.
    Certify {
        input: PathBuf,
        /// Field orders, comma separated or repeated.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u32>,
        /// Table document with exact D and Ind values.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Use only the closed form and --tables.
        #[arg(long)]
        no_search: bool,
        /// Node budget per search query.
        #[arg(long, default_value_t = DEFAULT_CERTIFY_BUDGET)]
        budget: u64,
    },
    /// Closed-form bound, independence probability and Markov bounds.
    Bounds {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        /// Probability for the dependence bound (1-pi)/p.
        #[arg(long)]
        p: Option<String>,
        /// Dependence level for the probability bound (1-pi)/d.
        #[arg(long)]
        d: Option<String>,
    },
    /// Exact Ind_q(r,k,d) (with --d) or D_q(r,k,s) (with --s).
    #[command(group(ArgGroup::new("target").required(true).args(["d", "s"])))]
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        s: Option<usize>,
        /// Most search nodes.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Table document to append the row to.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random matrices and check the Markov bounds.
    Sample {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probabilities for the Markov check, comma separated.
        #[arg(long, alias = "p-grid", value_delimiter = ',', default_values_t = ["1/2".to_string(), "1/4".to_string(), "1/8".to_string()])]
        p: Vec<String>,
        /// Most subsets enumerated per sample.
        #[arg(long, default_value_t = DEFAULT_SAMPLE_BUDGET)]
        budget: u64,
    },
    /// Write the matrix of n copies of every projective point of F_q^r.
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Output document (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Most subsets enumerated for the printed profile.
        #[arg(long, default_value_t = DEFAULT_PROFILE_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{}:{}: {}", .error.line, .error.column, .error.message)]
    Parse { path: PathBuf, error: ParseError },
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    UnsupportedField(String),
    #[error("{0}")]
    BadParameters(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Internal(_) => 1,
            CliError::Parse { error, .. } if error.unsupported_field => 4,
            CliError::Parse { .. } => 2,
            CliError::Budget(_) => 3,
            CliError::UnsupportedField(_) => 4,
            CliError::BadParameters(_) => 5,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> CliError {
        match e {
            FieldError::NotPrimePower(_) | FieldError::TooLarge { .. } => CliError::UnsupportedField(e.to_string()),
            _ => CliError::BadParameters(e.to_string()),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> CliError {
        match e {
            LinalgError::Overflow { .. } => CliError::Budget(e.to_string()),
            _ => CliError::BadParameters(e.to_string()),
        }
    }
}

impl From<MatroidError> for CliError {
    fn from(e: MatroidError) -> CliError {
        match e {
            MatroidError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            MatroidError::Linalg(e) => e.into(),
            _ => CliError::BadParameters(e.to_string()),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> CliError {
        match e {
            BuildError::Field(e) => e.into(),
            BuildError::Matroid(e) => e.into(),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> CliError {
        match e {
            BoundsError::NotPrimePower(_) => CliError::UnsupportedField(e.to_string()),
            BoundsError::Matroid(e) => e.into(),
            _ => CliError::BadParameters(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> CliError {
        match e {
            SearchError::Field(e) => e.into(),
            SearchError::Linalg(e) => e.into(),
            SearchError::Matroid(e) => e.into(),
            SearchError::BudgetExceeded { .. } | SearchError::SizeLimit { .. } => CliError::Budget(e.to_string()),
            SearchError::MonotonicityViolated { .. } | SearchError::WitnessMismatch => CliError::Internal(e.to_string()),
            _ => CliError::BadParameters(e.to_string()),
        }
    }
}

impl From<MonteCarloError> for CliError {
    fn from(e: MonteCarloError) -> CliError {
        match e {
            MonteCarloError::Field(e) => e.into(),
            MonteCarloError::Bounds(e) => e.into(),
            MonteCarloError::BudgetExceeded { .. } | MonteCarloError::EnumerationLimit { .. } => CliError::Budget(e.to_string()),
            _ => CliError::BadParameters(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "kdep: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let count = cli.workers.unwrap_or_else(default_workers);
    if count == 0 {
        return Err(CliError::BadParameters("--workers must be positive".into()));
    }
    let workers = Workers::new(count);
    let format = cli.format;
    let emit = |out: &mut dyn Write, text: &str| out.write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e });
    match cli.command {
        Command::Profile { input, budget } => {
            let doc = read_document(&input)?;
            let m = doc.to_matroid()?;
            let profile = workers.dependence_profile(&m, budget)?;
            let mut report = Report::new();
            if let Some(name) = &doc.name {
                report.push("name", name.as_str());
            }
            report.extend(profile_report(&profile));
            emit(out, &report.render(format))?;
            Ok(0)
        }
        Command::Certify { input, q, tables, no_search, budget } => {
            let doc = read_document(&input)?;
            for &qi in &q {
                Field::new(qi)?;
            }
            let loaded = match &tables {
                Some(path) => Some(parse_table(&read(path)?).map_err(|error| CliError::Parse { path: path.clone(), error })?),
                None => None,
            };
            let m = doc.to_matroid()?;
            let profile = workers.dependence_profile(&m, DEFAULT_PROFILE_BUDGET)?;
            let mut report = Report::new();
            if let Some(name) = &doc.name {
                report.push("name", name.as_str());
            }
            report.extend(profile_report(&profile));
            let mut obstruction = false;
            for &qi in &q {
                let (table, skipped) = match (&loaded, no_search) {
                    (Some(t), _) => (t.clone(), Vec::new()),
                    (None, true) => (ExtremalTable::new(), Vec::new()),
                    (None, false) => {
                        let cfg = SearchConfig { node_budget: budget, ..SearchConfig::default() };
                        needed_rows(&profile, qi, &cfg, &workers)?
                    }
                };
                let cert = certify_profile(profile.clone(), qi, Some(&table))?;
                obstruction |= cert.verdict == Verdict::NotRepresentable;
                report.extend(certificate_report(&cert, &table, &skipped));
            }
            emit(out, &report.render(format))?;
            Ok(if obstruction { EXIT_OBSTRUCTION } else { 0 })
        }
        Command::Bounds { q, r, k, p, d } => {
            let p = p.map(|s| rational_arg("--p", &s)).transpose()?;
            let d = d.map(|s| rational_arg("--d", &s)).transpose()?;
            let report = bounds_report(q, r, k, p.as_ref(), d.as_ref())?;
            emit(out, &report.render(format))?;
            Ok(0)
        }
        Command::Search { q, r, k, d, s, budget, out: table_out } => {
            let cfg = SearchConfig { node_budget: budget, ..SearchConfig::default() };
            let result = match (d, s) {
                (Some(d), _) => search_ind(q, r, k, &rational_arg("--d", &d)?, &cfg, &workers),
                (None, Some(s)) => search_min_dependence(q, r, k, s, &cfg, &workers),
                (None, None) => unreachable!("clap requires --d or --s"),
            }
            .map_err(|e| match CliError::from(e) {
                CliError::Budget(msg) => CliError::Budget(format!("{msg}; no rows written")),
                other => other,
            })?;
            let row = result.to_row();
            let line = write_row(&row);
            if let Some(path) = &table_out {
                append(path, &line)?;
            }
            let _ = writeln!(err, "search nodes: {}", result.stats.nodes);
            match format {
                Format::Text => emit(out, &line)?,
                _ => {
                    let mut report = Report::new();
                    let (q, r, k) = row.key();
                    report.push("q", q);
                    report.push("r", r);
                    report.push("k", k);
                    match &row {
                        TableRow::MinDependence { s, value, .. } => {
                            report.push("s", *s);
                            report.push("D", value.clone());
                        }
                        TableRow::MaxSize { d, value, .. } => {
                            report.push("d", d.clone());
                            report.push("Ind", *value);
                        }
                    }
                    report.push("witness", row.witness().iter().map(u64::to_string).collect::<Vec<_>>().join(","));
                    report.push("provenance", row_provenance(&row).as_str());
                    emit(out, &report.render(format))?;
                }
            }
            Ok(0)
        }
        Command::Sample { q, r, s, k, trials, seed, p, budget } => {
            let grid = p.iter().map(|x| rational_arg("--p", x)).collect::<Result<Vec<_>, _>>()?;
            let config = SampleConfig { q, r, s, k, trials, seed, workers: count };
            config.validate()?;
            let dist = workers.estimate_distribution(&config, budget)?;
            let rows = check_markov(&config, &dist, &grid)?;
            let mut report = Report::new();
            report.push("q", q);
            report.push("r", r);
            report.push("s", s);
            report.push("k", k);
            report.push("trials", trials);
            report.push("seed", seed);
            let mean = dist.mean();
            let expected = bounds::mean_dependence(q, r, k)?;
            report.push("mean", mean.clone());
            report.push("expected_mean", expected.clone());
            report.push("mean_within_3sigma", within_three_sigma(&dist, &mean, &expected));
            for level in [rat(1, 2), rat(9, 10), rat(99, 100)] {
                let key = format!("quantile({})", show(&level));
                report.push(key, dist.quantile(&level).expect("nonempty"));
            }
            for (value, n) in dist.support() {
                report.push(format!("count(d={value})"), n);
            }
            for row in &rows {
                let key = format!("markov(p={})", show(&row.p));
                report.push(format!("{key}.threshold"), row.threshold.value.clone());
                report.push(format!("{key}.vacuous"), row.threshold.vacuous);
                report.push(format!("{key}.quantile"), row.quantile.clone());
                report.push(format!("{key}.quantile_within"), row.quantile_within());
                report.push(format!("{key}.tail"), row.tail.clone());
                report.push(format!("{key}.variance"), row.variance.clone());
                report.push(format!("{key}.pass"), row.pass);
            }
            emit(out, &report.render(format))?;
            Ok(0)
        }
        Command::Construct { q, r, n, out: doc_out, budget } => {
            if n == 0 {
                return Err(CliError::BadParameters("--n must be positive".into()));
            }
            if r == 0 {
                return Err(CliError::BadParameters("--r must be positive".into()));
            }
            Field::new(q)?;
            let mat = projective_multiset(q, r, n, &SearchConfig::default())?;
            let doc = MatroidDocument::from_matrix(Some(format!("projective q={q} r={r} n={n}")), &mat);
            let m = Matroid::from_matrix(mat)?;
            let profile = workers.dependence_profile(&m, budget)?;
            let summary = profile_report(&profile).render(format);
            match &doc_out {
                Some(path) => {
                    fs::write(path, doc.to_string()).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    emit(out, &summary)?;
                }
                None => {
                    emit(out, &doc.to_string())?;
                    let _ = err.write_all(summary.as_bytes());
                }
            }
            Ok(0)
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn show(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn rational_arg(flag: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::BadParameters(format!("{flag}: expected a rational such as 1/4 or 0.25, found {s:?}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn append(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}

fn read_document(path: &Path) -> Result<MatroidDocument, CliError> {
    MatroidDocument::parse(&read(path)?).map_err(|error| CliError::Parse { path: path.to_path_buf(), error })
}

fn row_provenance(row: &TableRow) -> Provenance {
    match row {
        TableRow::MinDependence { provenance, .. } | TableRow::MaxSize { provenance, .. } => *provenance,
    }
}

pub fn profile_report(profile: &DependenceProfile) -> Report {
    let mut report = Report::new();
    report.push("r", profile.rank());
    report.push("s", profile.size());
    for (k, d) in profile.values().iter().enumerate() {
        report.push(format!("d(M,{k})"), d.clone());
    }
    report
}

/// Exact check that the sample mean lies within three standard errors of
/// `expected`, using the sample's own variance.
fn within_three_sigma(dist: &EmpiricalDistribution, mean: &BigRational, expected: &BigRational) -> bool {
    let n = BigRational::from_integer(BigInt::from(dist.trials()));
    let second: BigRational = dist
        .support()
        .map(|(d, c)| {
            let x = d.ratio();
            &x * &x * BigRational::from_integer(BigInt::from(c))
        })
        .fold(BigRational::zero(), |a, b| a + b)
        / &n;
    let var = second - mean * mean;
    let diff = mean - expected;
    &diff * &diff <= BigRational::from_integer(BigInt::from(9)) * var / n
}

fn bounds_report(q: u32, r: usize, k: usize, p: Option<&BigRational>, d: Option<&BigRational>) -> Result<Report, CliError> {
    if kdep_core::field::prime_power(q).is_none() {
        return Err(CliError::UnsupportedField(format!("{q} is not a prime power")));
    }
    if k > r {
        return Err(CliError::BadParameters(format!("k = {k} exceeds r = {r}")));
    }
    let mut report = Report::new();
    report.push("q", q);
    report.push("r", r);
    report.push("k", k);
    match bounds::ind_upper_zero_dep(q, r, k) {
        Ok(v) => {
            report.push("ind_upper_zero_dep", Entry::Int(v.into()));
            if k + CLOSED_FORM_MIN_CODIMENSION > r {
                report.push("ind_upper_zero_dep.note", "not an upper bound at k = r - 2, where Ind_q(r,k,0) = (q^r - 1)/(q - 1)");
            }
        }
        Err(BoundsError::KOutOfRange { .. }) => report.push("ind_upper_zero_dep", "undefined (needs k <= r - 2)"),
        Err(e) => return Err(e.into()),
    }
    let pi = bounds::pi_independent(q, r, k)?;
    report.push("pi", pi.clone());
    report.push("one_minus_pi", BigRational::one() - pi);
    if let Some(p) = p {
        let b = bounds::markov_dependence_bound(q, r, k, p)?;
        let key = format!("markov_dependence(p={})", show(p));
        report.push(key.clone(), b.value);
        report.push(format!("{key}.vacuous"), b.vacuous);
    }
    if let Some(d) = d {
        let b = bounds::markov_probability_bound(q, r, k, d)?;
        let key = format!("markov_probability(d={})", show(d));
        report.push(key.clone(), b.value);
        report.push(format!("{key}.vacuous"), b.vacuous);
    }
    Ok(report)
}

/// Exact `D_q(r, k, s(M))` rows for the `k` at which `M`'s own
/// k-dependence is not attainable over `F_q`, found by exhaustive search.
/// Also returns the `k` whose query ran out of budget.
pub fn needed_rows<R: PartitionRunner>(profile: &DependenceProfile, q: u32, cfg: &SearchConfig, runner: &R) -> Result<(ExtremalTable, Vec<usize>), CliError> {
    let field = Field::with_max_order(q, cfg.max_field_order)?;
    let (r, s) = (profile.rank(), profile.size());
    let mut table = ExtremalTable::new();
    let mut skipped = Vec::new();
    if r == 0 {
        return Ok((table, skipped));
    }
    for (k, d) in profile.values().iter().enumerate() {
        let m = r - k;
        // single points and the empty set are never dependent
        if m < 2 {
            continue;
        }
        let threshold = u64::try_from(&d.dependent).expect("subset counts fit in u64");
        let space = match PointSpace::new(&field, r, m, cfg.enumeration_limit) {
            Ok(space) => space,
            Err(SearchError::Linalg(LinalgError::Overflow { .. })) => {
                skipped.push(k);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let search = ThresholdSearch::new(&space, s, threshold, cfg.node_budget);
        match combine_outcomes(runner.run(&search), cfg.node_budget) {
            Ok((Some(_), _)) => {}
            Ok((None, _)) => match search_min_dependence(q, r, k, s, cfg, runner) {
                Ok(res) => table.push(res.to_row()),
                Err(SearchError::BudgetExceeded { .. }) => skipped.push(k),
                Err(e) => return Err(e.into()),
            },
            Err(SearchError::BudgetExceeded { .. }) => skipped.push(k),
            Err(e) => return Err(e.into()),
        }
    }
    Ok((table, skipped))
}

fn certificate_report(cert: &Certificate, table: &ExtremalTable, skipped: &[usize]) -> Report {
    let key = format!("certificate(q={})", cert.q);
    let mut report = Report::new();
    let verdict = match cert.verdict {
        Verdict::NotRepresentable => "not-representable",
        Verdict::Inconclusive => "inconclusive",
    };
    report.push(format!("{key}.verdict"), verdict);
    if let Some((trigger, provenance)) = &cert.trigger {
        report.push(format!("{key}.k"), trigger.k());
        match trigger {
            Trigger::IndBound { d, d_bound, ind, s, .. } => {
                report.push(format!("{key}.rule"), "s(M) > Ind_q(r,k,d_bound) with d(M,k) <= d_bound");
                report.push(format!("{key}.d"), d.clone());
                report.push(format!("{key}.d_bound"), d_bound.clone());
                report.push(format!("{key}.ind"), Entry::Int(ind.clone().into()));
                report.push(format!("{key}.s"), *s);
            }
            Trigger::DTable { d, d_min, s, .. } => {
                report.push(format!("{key}.rule"), "d(M,k) < D_q(r,k,s)");
                report.push(format!("{key}.d"), d.clone());
                report.push(format!("{key}.D"), d_min.clone());
                report.push(format!("{key}.s"), *s);
            }
        }
        report.push(format!("{key}.provenance"), provenance.as_str());
        report.push(format!("{key}.recheck"), cert.recheck(Some(table)));
    }
    if !skipped.is_empty() {
        let ks = skipped.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        report.push(format!("{key}.over_budget_k"), ks);
    }
    report
}
