use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use fkalg::braided::{check_yang_baxter, BraidError, BraidedSpace};
use fkalg::groebner::{
    truncated_groebner_with, GroebnerError, GroebnerOptions, TruncatedGroebnerBasis,
};
use fkalg::hilbert::{factor_t_numbers, numerology_report, prefix_consistency};
use fkalg::nichols::{
    nichols_dimension, quadratic_kernel_compare, NicholsDims, NicholsError, RankBackend,
    RankReport, DEFAULT_PRIMES,
};
use fkalg::presentations::{load_presentation, PresentationError};
use fkalg::{
    dimension, fk_presentation, hilbert_coefficients, Dimension, HilbertSeries, MonomialOrder,
    Presentation, ScalarField,
};
use thiserror::Error;

use crate::args::{
    Backend, CompareArgs, DimsArgs, FactorArgs, GroebnerBudgetArgs, NicholsArgs, OutputArgs,
    YbeArgs,
};
use crate::report::{
    Budgets, CompareReport, CompareRow, DimensionReport, FactorReport, GroebnerReport, Report,
    RunConfig, Status, YbeReport,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read presentation: {0}")]
    Presentation(#[from] PresentationError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

impl From<GroebnerError> for CliError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::MaxDegreeTooSmall { .. } | GroebnerError::OrderMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<NicholsError> for CliError {
    fn from(e: NicholsError) -> Self {
        match e {
            NicholsError::Braid(BraidError::TooSmall(_))
            | NicholsError::BadPrime(_)
            | NicholsError::NoPrimes => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

struct Clock {
    enabled: bool,
    start: Instant,
    phases: BTreeMap<String, f64>,
}

impl Clock {
    fn new(out: &OutputArgs) -> Self {
        Clock {
            enabled: !out.no_timings,
            start: Instant::now(),
            phases: BTreeMap::new(),
        }
    }

    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let v = f();
        *self.phases.entry(phase.to_string()).or_default() += ms(t.elapsed());
        v
    }

    fn finish(mut self) -> Option<BTreeMap<String, f64>> {
        self.phases.insert("total".into(), ms(self.start.elapsed()));
        self.enabled.then_some(self.phases)
    }
}

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn config(command: &'static str, out: &OutputArgs) -> RunConfig {
    RunConfig::new(
        command,
        out.format,
        out.output.as_ref().map(|p| p.display().to_string()),
    )
}

fn groebner_options(b: &GroebnerBudgetArgs, field: ScalarField) -> GroebnerOptions {
    GroebnerOptions {
        field,
        max_basis_size: b.max_basis_size.map(|v| v as usize),
        max_reductions: b.max_reductions,
        time_limit: b.time_limit.map(Duration::from_secs_f64),
        workers: None,
    }
}

fn record_groebner_budgets(budgets: &mut Budgets, b: &GroebnerBudgetArgs) {
    budgets.max_basis_size = b.max_basis_size;
    budgets.max_reductions = b.max_reductions;
    budgets.time_limit_secs = b.time_limit;
}

fn parse_field(s: &str) -> Result<ScalarField, CliError> {
    if s.eq_ignore_ascii_case("rational") {
        return Ok(ScalarField::Rational);
    }
    let p: u64 = s.parse().map_err(|_| {
        CliError::Usage(format!("--field expects `rational` or a prime, got `{s}`"))
    })?;
    if p >= 1 << 32 {
        return Err(CliError::Usage(format!(
            "field modulus {p} does not fit in 32 bits"
        )));
    }
    ScalarField::prime(p).map_err(|e| CliError::Usage(e.to_string()))
}

/// Runs the Gröbner pipeline; a budget abort yields the partial basis and a message.
fn run_groebner(
    p: &Presentation,
    ord: &MonomialOrder,
    max_degree: u32,
    opts: &GroebnerOptions,
) -> Result<(TruncatedGroebnerBasis, Option<String>), CliError> {
    match truncated_groebner_with(p, ord, max_degree, opts) {
        Ok(gb) => Ok((gb, None)),
        Err(GroebnerError::BudgetExceeded { kind, partial }) => {
            let msg = format!(
                "{kind} budget exceeded; results are exact through degree {}",
                partial.complete_to()
            );
            Ok((*partial, Some(msg)))
        }
        Err(e) => Err(e.into()),
    }
}

fn groebner_report(gb: &TruncatedGroebnerBasis) -> GroebnerReport {
    GroebnerReport {
        basis_size: gb.len(),
        complete_to: gb.complete_to(),
        stats: gb.stats().clone(),
    }
}

pub fn dims(a: &DimsArgs) -> Result<Report, CliError> {
    let mut clock = Clock::new(&a.out);
    let mut cfg = config("dims", &a.out);
    let (presentation, fk_n) = match (&a.presentation, a.n) {
        (Some(path), _) => {
            cfg.presentation = Some(path.display().to_string());
            (load_presentation(path)?, None)
        }
        (None, Some(n)) => (fk_presentation(n)?, Some(n)),
        (None, None) => {
            return Err(CliError::Usage(
                "either --n or --presentation is required".into(),
            ))
        }
    };
    let field = parse_field(&a.field)?;
    cfg.n = fk_n.or((presentation.n() > 0).then(|| presentation.n()));
    cfg.max_degree = Some(a.max_degree as usize);
    cfg.order_seed = a.order_seed;
    cfg.field = Some(match field {
        ScalarField::Rational => "rational".into(),
        ScalarField::Prime(p) => p.to_string(),
    });
    record_groebner_budgets(&mut cfg.budgets, &a.budget);

    let m = presentation.num_generators();
    let ord = match a.order_seed {
        Some(seed) => MonomialOrder::shuffled(m, seed),
        None => MonomialOrder::identity(m),
    };
    let opts = groebner_options(&a.budget, field);
    let (gb, budget_msg) = clock.time("groebner", || {
        run_groebner(&presentation, &ord, a.max_degree, &opts)
    })?;
    let (series, dim) = clock.time("hilbert", || -> Result<_, CliError> {
        Ok((
            hilbert_coefficients(&gb, gb.complete_to())?,
            dimension(&gb)?,
        ))
    })?;

    let mut report = Report::new(cfg);
    report.status = match (&budget_msg, dim) {
        (Some(_), _) => Status::BudgetExceeded,
        (None, Dimension::Finite(_)) => Status::Ok,
        (None, Dimension::Inconclusive { .. }) => Status::Inconclusive,
    };
    report.message = budget_msg.or_else(|| match dim {
        Dimension::Inconclusive { .. } => Some(format!(
            "no vanishing degree up to {}; dimension not established",
            gb.complete_to()
        )),
        Dimension::Finite(_) => None,
    });
    report.dimension = Some(match dim {
        Dimension::Finite(value) => DimensionReport::Finite { value },
        Dimension::Inconclusive { partial_sum } => DimensionReport::Inconclusive { partial_sum },
    });
    if series.complete {
        report.factorization = Some(factor_t_numbers(&series));
    }
    if let Some(n) = fk_n {
        report.numerology = Some(numerology_report(n, &series));
    }
    report.groebner = Some(groebner_report(&gb));
    report.series = Some(series);
    report.timings = clock.finish();
    Ok(report)
}

fn backend_for(backend: Backend, primes: &[u64]) -> RankBackend {
    match backend {
        Backend::Rational => RankBackend::Rational,
        Backend::Modular => RankBackend::Modular {
            primes: if primes.is_empty() {
                DEFAULT_PRIMES.to_vec()
            } else {
                primes.to_vec()
            },
        },
    }
}

/// Nichols dimensions degree by degree, stopping at the first degree over budget.
fn run_nichols(
    n: usize,
    max_degree: usize,
    backend: &RankBackend,
    budget: u128,
) -> Result<(NicholsDims, Option<String>), CliError> {
    let space = BraidedSpace::new(n).map_err(NicholsError::from)?;
    let mut per_degree: Vec<RankReport> = Vec::new();
    let mut msg = None;
    for k in 0..=max_degree {
        match nichols_dimension(&space, k, backend, budget) {
            Ok(r) => per_degree.push(r),
            Err(NicholsError::Braid(BraidError::TooLarge { dim, budget })) => {
                msg = Some(format!("tensor dimension {dim} at degree {k} exceeds the budget {budget}; dimensions stop at degree {}", k - 1));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let method = if per_degree.iter().any(|r| r.method == "rational-fallback") {
        "rational-fallback"
    } else {
        match backend {
            RankBackend::Rational => "rational",
            RankBackend::Modular { .. } => "modular",
        }
    };
    let primes_used = match backend {
        RankBackend::Rational => Vec::new(),
        RankBackend::Modular { primes } => primes.clone(),
    };
    let dims = NicholsDims {
        n,
        dims: per_degree.iter().map(|r| r.rank as u64).collect(),
        method: method.into(),
        primes_used,
        per_degree,
    };
    Ok((dims, msg))
}

pub fn nichols(a: &NicholsArgs) -> Result<Report, CliError> {
    let mut clock = Clock::new(&a.out);
    let mut cfg = config("nichols", &a.out);
    let backend = backend_for(a.backend, &a.primes);
    cfg.n = Some(a.n);
    cfg.max_degree = Some(a.max_degree);
    cfg.backend = Some(a.backend);
    if let RankBackend::Modular { primes } = &backend {
        cfg.primes = Some(primes.clone());
    }
    cfg.budgets.max_tensor_dim = Some(a.budget.max_tensor_dim);

    let (dims, msg) = clock.time("nichols", || {
        run_nichols(a.n, a.max_degree, &backend, a.budget.max_tensor_dim as u128)
    })?;
    let mut report = Report::new(cfg);
    report.status = if msg.is_some() {
        Status::BudgetExceeded
    } else {
        Status::Ok
    };
    report.message = msg;
    report.nichols = Some(dims);
    report.timings = clock.finish();
    Ok(report)
}

pub fn compare(a: &CompareArgs) -> Result<Report, CliError> {
    let mut clock = Clock::new(&a.out);
    let mut cfg = config("compare", &a.out);
    let backend = backend_for(Backend::Modular, &a.primes);
    cfg.n = Some(a.n);
    cfg.max_degree = Some(a.max_degree);
    if let RankBackend::Modular { primes } = &backend {
        cfg.primes = Some(primes.clone());
    }
    record_groebner_budgets(&mut cfg.budgets, &a.groebner_budget);
    cfg.budgets.max_tensor_dim = Some(a.tensor_budget.max_tensor_dim);

    let p = fk_presentation(a.n)?;
    let ord = MonomialOrder::identity(p.num_generators());
    let opts = groebner_options(&a.groebner_budget, ScalarField::Rational);
    let gb_degree = (a.max_degree as u32).max(p.max_relation_degree());
    let (gb, gb_msg) = clock.time("groebner", || run_groebner(&p, &ord, gb_degree, &opts))?;
    let series = clock.time("hilbert", || hilbert_coefficients(&gb, gb.complete_to()))?;
    let budget = a.tensor_budget.max_tensor_dim as u128;
    let (nd, nichols_msg) = clock.time("nichols", || {
        run_nichols(a.n, a.max_degree, &backend, budget)
    })?;

    let rows: Vec<CompareRow> = (0..=a.max_degree)
        .map(|d| {
            let fk = series.coefficients.get(d).copied();
            let nichols = nd.dims.get(d).copied();
            let equal = fk.zip(nichols).map(|(x, y)| x == y);
            CompareRow {
                degree: d,
                fk,
                nichols,
                equal,
            }
        })
        .collect();
    let all_equal = rows.iter().all(|r| r.equal == Some(true));

    let m = (a.n * (a.n - 1) / 2) as u128;
    let kernel = if m * m <= budget {
        Some(clock.time("kernel", || quadratic_kernel_compare(a.n))?)
    } else {
        None
    };
    let kernel_msg = kernel.is_none().then(|| {
        format!(
            "quadratic kernel skipped: tensor dimension {} exceeds the budget {budget}",
            m * m
        )
    });

    let msgs: Vec<String> = [gb_msg, nichols_msg, kernel_msg]
        .into_iter()
        .flatten()
        .collect();
    let mut report = Report::new(cfg);
    report.status = if msgs.is_empty() {
        Status::Ok
    } else {
        Status::BudgetExceeded
    };
    report.message = (!msgs.is_empty()).then(|| msgs.join("; "));
    report.compare = Some(CompareReport {
        rows,
        all_equal,
        kernel_verdict: kernel.as_ref().map(|k| k.verdict.to_string()),
        kernel,
    });
    report.groebner = Some(groebner_report(&gb));
    report.series = Some(series);
    report.nichols = Some(nd);
    report.timings = clock.finish();
    Ok(report)
}

fn parse_coefficients(text: &str) -> Result<Vec<u64>, CliError> {
    let values: Vec<u64> = text
        .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| CliError::Usage(format!("not a nonnegative integer: `{t}`")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliError::Usage("no coefficients given".into()));
    }
    Ok(values)
}

/// Coefficients and, for JSON objects, the stored completeness flag.
fn read_series_file(path: &Path) -> Result<(Vec<u64>, Option<bool>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    match serde_json::from_str::<serde_json::Value>(&text) {
        Ok(serde_json::Value::Object(obj)) => {
            let series: HilbertSeries =
                serde_json::from_value(serde_json::Value::Object(obj.clone()))
                    .or_else(|_| {
                        let coefficients = obj.get("coefficients").cloned().unwrap_or_default();
                        let coefficients: Vec<u64> = serde_json::from_value(coefficients)?;
                        let complete = obj
                            .get("complete")
                            .and_then(|v| v.as_bool())
                            .unwrap_or(true);
                        Ok::<_, serde_json::Error>(HilbertSeries {
                            exact_to: coefficients.len().saturating_sub(1),
                            coefficients,
                            complete,
                        })
                    })
                    .map_err(|e| CliError::Usage(format!("malformed series file: {e}")))?;
            if series.coefficients.is_empty() {
                return Err(CliError::Usage("no coefficients given".into()));
            }
            let complete = obj.get("complete").and_then(|v| v.as_bool());
            Ok((series.coefficients, complete))
        }
        Ok(serde_json::Value::Array(_)) => {
            let v: Vec<u64> = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("malformed series file: {e}")))?;
            if v.is_empty() {
                return Err(CliError::Usage("no coefficients given".into()));
            }
            Ok((v, None))
        }
        _ => Ok((parse_coefficients(&text)?, None)),
    }
}

pub fn factor(a: &FactorArgs) -> Result<Report, CliError> {
    let clock = Clock::new(&a.out);
    let mut cfg = config("factor", &a.out);
    let (coeffs, stored_complete) = match (&a.coefficients, &a.series) {
        (Some(text), _) => (parse_coefficients(text)?, None),
        (None, Some(path)) => read_series_file(path)?,
        (None, None) => return Err(CliError::Usage("give coefficients or --series".into())),
    };
    let complete = if a.prefix {
        false
    } else if a.complete {
        true
    } else {
        stored_complete.unwrap_or(true)
    };
    cfg.input = Some(coeffs.clone());
    cfg.mode = Some(if complete { "complete" } else { "prefix" });

    let result = if complete {
        FactorReport::Complete(factor_t_numbers(&HilbertSeries::complete(coeffs)))
    } else {
        if coeffs[0] != 1 {
            return Err(CliError::Usage("a prefix must start with 1".into()));
        }
        let depth = a.depth.unwrap_or(coeffs.len() - 1);
        if depth >= coeffs.len() {
            return Err(CliError::Usage(format!(
                "depth {depth} needs {} coefficients, got {}",
                depth + 1,
                coeffs.len()
            )));
        }
        cfg.depth = Some(depth);
        FactorReport::Prefix(prefix_consistency(&coeffs, depth))
    };
    let mut report = Report::new(cfg);
    report.factor = Some(result);
    report.timings = clock.finish();
    Ok(report)
}

pub fn ybe(a: &YbeArgs) -> Result<Report, CliError> {
    let mut clock = Clock::new(&a.out);
    let mut cfg = config("ybe", &a.out);
    cfg.n = Some(a.n);
    let space = BraidedSpace::new(a.n).map_err(NicholsError::from)?;
    let holds = clock.time("ybe", || check_yang_baxter(&space));
    let dim = space.dim();
    let mut report = Report::new(cfg);
    report.status = if holds { Status::Ok } else { Status::Failed };
    if !holds {
        report.message = Some("the braiding violates the braid relation; this is a bug".into());
    }
    report.ybe = Some(YbeReport {
        n: a.n,
        dim,
        triples: (dim as u64).pow(3),
        holds,
    });
    report.timings = clock.finish();
    Ok(report)
}
