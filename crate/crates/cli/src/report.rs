use std::collections::BTreeMap;
use std::fmt::Write as _;

use fkalg::groebner::GroebnerStats;
use fkalg::hilbert::{NumerologyReport, PrefixVerdict, TNumberFactorization};
use fkalg::nichols::{KernelComparison, NicholsDims};
use fkalg::HilbertSeries;
use serde::Serialize;

use crate::args::{Backend, Format};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Inconclusive,
    BudgetExceeded,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Inconclusive | Status::BudgetExceeded | Status::Failed => 1,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Budgets {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_basis_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_reductions: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tensor_dim: Option<u64>,
}

/// Everything that determines a run's results. Worker count is left out on
/// purpose: it never changes the output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub budgets: Budgets,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn new(command: &'static str, format: Format, output: Option<String>) -> Self {
        RunConfig {
            command,
            n: None,
            max_degree: None,
            presentation: None,
            order_seed: None,
            field: None,
            backend: None,
            primes: None,
            input: None,
            mode: None,
            depth: None,
            budgets: Budgets::default(),
            format,
            output,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DimensionReport {
    Finite { value: u128 },
    Inconclusive { partial_sum: u128 },
}

#[derive(Debug, Clone, Serialize)]
pub struct GroebnerReport {
    pub basis_size: usize,
    pub complete_to: u32,
    pub stats: GroebnerStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub degree: usize,
    pub fk: Option<u64>,
    pub nichols: Option<u64>,
    pub equal: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub all_equal: bool,
    /// Absent when `C(n,2)^2` exceeds the tensor budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_verdict: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum FactorReport {
    Complete(TNumberFactorization),
    Prefix(PrefixVerdict),
}

#[derive(Debug, Clone, Serialize)]
pub struct YbeReport {
    pub n: usize,
    pub dim: usize,
    pub triples: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub config: RunConfig,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<HilbertSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<DimensionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groebner: Option<GroebnerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<TNumberFactorization>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerology: Option<NumerologyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nichols: Option<NicholsDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<FactorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ybe: Option<YbeReport>,
    /// Milliseconds per phase.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: "fkalg",
                version: env!("CARGO_PKG_VERSION"),
            },
            config,
            status: Status::Ok,
            message: None,
            series: None,
            dimension: None,
            groebner: None,
            factorization: None,
            numerology: None,
            nichols: None,
            compare: None,
            factor: None,
            ybe: None,
            timings: None,
        }
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Human => self.render_human(),
        }
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        if let Some(cmp) = &self.compare {
            s.push_str("degree,fk,nichols,equal\n");
            for r in &cmp.rows {
                let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
                let eq = r.equal.map_or(String::new(), |b| b.to_string());
                writeln!(s, "{},{},{},{}", r.degree, opt(r.fk), opt(r.nichols), eq).unwrap();
            }
        } else if let Some(series) = &self.series {
            s.push_str("degree,coefficient\n");
            for (d, c) in series.coefficients.iter().enumerate() {
                writeln!(s, "{d},{c}").unwrap();
            }
        } else if let Some(nd) = &self.nichols {
            s.push_str("degree,dimension,method\n");
            for (d, r) in nd.per_degree.iter().enumerate() {
                writeln!(s, "{d},{},{}", r.rank, r.method).unwrap();
            }
        } else if let Some(f) = &self.factor {
            s.push_str("result,factors,detail\n");
            match f {
                FactorReport::Complete(TNumberFactorization::Product { factors }) => {
                    writeln!(s, "product,{},", join(factors, " ")).unwrap();
                }
                FactorReport::Complete(TNumberFactorization::Refuted { reason }) => {
                    writeln!(s, "refuted,,\"{}\"", reason.replace('"', "'")).unwrap();
                }
                FactorReport::Prefix(PrefixVerdict::Consistent { witness }) => {
                    writeln!(s, "consistent,{},", join(witness, " ")).unwrap();
                }
                FactorReport::Prefix(PrefixVerdict::Refuted { degree, reason }) => {
                    writeln!(
                        s,
                        "refuted,,\"degree {degree}: {}\"",
                        reason.replace('"', "'")
                    )
                    .unwrap();
                }
            }
        } else if let Some(y) = &self.ybe {
            s.push_str("n,dim,triples,holds\n");
            writeln!(s, "{},{},{},{}", y.n, y.dim, y.triples, y.holds).unwrap();
        }
        s
    }

    fn render_human(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        write!(s, "{} {}", self.tool.name, c.command).unwrap();
        if let Some(n) = c.n {
            write!(s, "  n = {n}").unwrap();
        }
        if let Some(d) = c.max_degree {
            write!(s, "  max degree = {d}").unwrap();
        }
        s.push('\n');

        let tables = self.compare.is_none();
        if let Some(series) = self.series.as_ref().filter(|_| tables) {
            s.push_str("\ndegree  coefficient\n");
            for (d, v) in series.coefficients.iter().enumerate() {
                writeln!(s, "{d:>6}  {v}").unwrap();
            }
            let kind = if series.complete {
                "complete"
            } else {
                "prefix"
            };
            writeln!(
                s,
                "series: {kind}, exact through degree {}",
                series.exact_to
            )
            .unwrap();
        }
        if let Some(dim) = &self.dimension {
            match dim {
                DimensionReport::Finite { value } => writeln!(s, "dimension: {value}").unwrap(),
                DimensionReport::Inconclusive { partial_sum } => {
                    writeln!(s, "dimension: inconclusive (partial sum {partial_sum})").unwrap()
                }
            }
        }
        if let Some(g) = &self.groebner {
            writeln!(
                s,
                "basis size: {} (complete through degree {})",
                g.basis_size, g.complete_to
            )
            .unwrap();
        }
        if let Some(f) = &self.factorization {
            writeln!(s, "factorization: {f}").unwrap();
        }
        if let Some(num) = &self.numerology {
            writeln!(s, "numerology: {}", num.message).unwrap();
        }
        if let Some(nd) = self.nichols.as_ref().filter(|_| tables) {
            s.push_str("\ndegree  dimension  method\n");
            for (d, r) in nd.per_degree.iter().enumerate() {
                writeln!(s, "{d:>6}  {:>9}  {}", r.rank, r.method).unwrap();
            }
        }
        if let Some(cmp) = &self.compare {
            s.push_str("\ndegree        E_n   Nichols  equal\n");
            for r in &cmp.rows {
                let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
                let eq = r.equal.map_or("-", |b| if b { "yes" } else { "no" });
                writeln!(
                    s,
                    "{:>6}  {:>9}  {:>8}  {eq}",
                    r.degree,
                    opt(r.fk),
                    opt(r.nichols)
                )
                .unwrap();
            }
            if let Some(v) = &cmp.kernel_verdict {
                writeln!(s, "quadratic kernel vs FK relations: {v}").unwrap();
            }
        }
        if let Some(f) = &self.factor {
            match f {
                FactorReport::Complete(t) => writeln!(s, "{t}").unwrap(),
                FactorReport::Prefix(PrefixVerdict::Consistent { witness }) => {
                    writeln!(s, "consistent; witness {{{}}}", join(witness, ", ")).unwrap()
                }
                FactorReport::Prefix(PrefixVerdict::Refuted { degree, reason }) => {
                    writeln!(s, "refuted at degree {degree}: {reason}").unwrap()
                }
            }
        }
        if let Some(y) = &self.ybe {
            let verdict = if y.holds { "holds" } else { "FAILS" };
            writeln!(
                s,
                "braid relation on {} basis triples (dim V = {}): {verdict}",
                y.triples, y.dim
            )
            .unwrap();
        }
        if let Some(msg) = &self.message {
            writeln!(s, "\n{msg}").unwrap();
        }
        if let Some(t) = &self.timings {
            let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k} {v:.1} ms")).collect();
            writeln!(s, "timings: {}", parts.join(", ")).unwrap();
        }
        s
    }
}

fn join(v: &[u32], sep: &str) -> String {
    v.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}
