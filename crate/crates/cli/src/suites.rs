//! The `verify` suites. Each suite is a fixed list of tasks; every task yields
//! one record, and the records are emitted in task order so repeated runs give
//! identical reports.

use jackfac::characters::{
    verify_content_formulas, verify_k2_top_degree, verify_k3_vanishing, verify_k4_laurent_degree,
};
use jackfac::combinatorics::partitions_up_to;
use jackfac::cumulants::ScanRecord;
use jackfac::cumulants::{check_steroids, cumulant_tuples, verify_brillinger, verify_main_theorem, BrillingerPath};
use jackfac::free::scan_kerov_lassalle_positivity;
use jackfac::rows::{
    graded_kernel, sample_homogeneous_kernels, verify_cool_vanishing, verify_kernel_cumulant_formula,
    verify_kernel_reconstruction, verify_small_degree_killed, verify_vanishing_kappa_row, verify_z3_for_tuple,
    Z3Recipe,
};
use jackfac::symgroup::verify_delta_zero;
use jackfac::{Error, EvaluableFunction, Partition, Report, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::commands::tuple_text;
use crate::{cached, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    MainTheorem,
    Kconditions,
    Brillinger,
    DeltaZero,
    Z3,
    Vanishing,
    KlPositivity,
    Steroids,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::MainTheorem => "main-theorem",
            Suite::Kconditions => "kconditions",
            Suite::Brillinger => "brillinger",
            Suite::DeltaZero => "delta-zero",
            Suite::Z3 => "z3",
            Suite::Vanishing => "vanishing",
            Suite::KlPositivity => "kl-positivity",
            Suite::Steroids => "steroids",
        }
    }
}

/// Range flags of `verify`; `None` selects the suite's default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub max_size: Option<usize>,
    pub max_parts: Option<usize>,
    pub rank: Option<usize>,
    pub max: Option<usize>,
}

/// One line of a suite report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Record {
    Scan(ScanRecord),
    Check(Report),
}

impl Record {
    pub fn probes(&self) -> usize {
        match self {
            Record::Scan(_) => 1,
            Record::Check(r) => r.probes,
        }
    }

    pub fn violations(&self) -> usize {
        match self {
            Record::Scan(s) => s.violations.len(),
            Record::Check(r) => r.violations.len(),
        }
    }

    fn label(&self) -> String {
        match self {
            Record::Scan(s) => format!(
                "{} bound={} degree={}",
                tuple_text(&s.tuple),
                opt(s.bound),
                opt(s.degree)
            ),
            Record::Check(r) => {
                let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{} {}", r.check, params.join(" "))
            }
        }
    }

    fn details(&self) -> Vec<String> {
        match self {
            Record::Scan(s) => s.violations.clone(),
            Record::Check(r) => r.violations.iter().map(|v| format!("{}: {}", v.at, v.detail)).collect(),
        }
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |d| d.to_string())
}

/// Closing line of a JSON-lines report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: String,
    pub records: usize,
    pub probes: usize,
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub suite: Suite,
    pub records: Vec<Record>,
}

impl SuiteRun {
    pub fn violations(&self) -> usize {
        self.records.iter().map(Record::violations).sum()
    }

    pub fn summary(&self) -> Summary {
        Summary {
            suite: self.suite.name().to_string(),
            records: self.records.len(),
            probes: self.records.iter().map(Record::probes).sum(),
            violations: self.violations(),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let json_err = |e: serde_json::Error| Error::InvalidInput(e.to_string());
        let mut out = String::new();
        match format {
            Format::Json => {
                for r in &self.records {
                    out.push_str(&serde_json::to_string(r).map_err(json_err)?);
                    out.push('\n');
                }
                out.push_str(&serde_json::to_string(&self.summary()).map_err(json_err)?);
                out.push('\n');
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let csv_err = |e: csv::Error| Error::InvalidInput(e.to_string());
                w.write_record(["record", "probes", "violations", "details"])
                    .map_err(csv_err)?;
                for r in &self.records {
                    w.write_record([
                        r.label(),
                        r.probes().to_string(),
                        r.violations().to_string(),
                        r.details().join("; "),
                    ])
                    .map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
                out = String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))?;
            }
            Format::Pretty => {
                for r in &self.records {
                    let mark = if r.violations() == 0 { "ok  " } else { "FAIL" };
                    out.push_str(&format!("{mark} {} ({} probes)\n", r.label(), r.probes()));
                    for d in r.details() {
                        out.push_str(&format!("     {d}\n"));
                    }
                }
                let s = self.summary();
                out.push_str(&format!(
                    "{}: {} records, {} probes, {} violations\n",
                    s.suite, s.records, s.probes, s.violations
                ));
            }
        }
        Ok(out)
    }
}

type TaskFn = Box<dyn Fn() -> Result<Record> + Send + Sync>;

struct Task {
    key: String,
    run: TaskFn,
}

fn task(key: String, run: impl Fn() -> Result<Record> + Send + Sync + 'static) -> Task {
    Task {
        key,
        run: Box::new(run),
    }
}

fn check(key: String, run: impl Fn() -> Result<Report> + Send + Sync + 'static) -> Task {
    task(key, move || run().map(Record::Check))
}

fn nonempty_partitions_up_to(n: usize) -> Vec<Partition> {
    partitions_up_to(n).into_iter().filter(|p| !p.is_empty()).collect()
}

fn main_theorem_tasks(limits: Limits) -> Vec<Task> {
    let max_size = limits.max_size.unwrap_or(7);
    let max_parts = limits.max_parts.unwrap_or(3);
    cumulant_tuples(max_size, max_parts)
        .into_iter()
        .map(|t| {
            task(format!("main-theorem {}", tuple_text(&t)), move || {
                verify_main_theorem(&t).map(Record::Scan)
            })
        })
        .collect()
}

fn steroids_tasks(limits: Limits) -> Vec<Task> {
    let max_size = limits.max_size.unwrap_or(6);
    let max_parts = limits.max_parts.unwrap_or(max_size);
    cumulant_tuples(max_size, max_parts)
        .into_iter()
        .map(|t| {
            task(format!("steroids {}", tuple_text(&t)), move || {
                check_steroids(&t).map(Record::Scan)
            })
        })
        .collect()
}

fn kconditions_tasks(limits: Limits) -> Vec<Task> {
    let diagrams = limits.max_size.unwrap_or(8);
    let max_pi = limits.max.unwrap_or(5);
    let rows = limits.rank.unwrap_or(2);
    let mut tasks = Vec::new();
    for pi in nonempty_partitions_up_to(max_pi) {
        let p = pi.clone();
        tasks.push(check(format!("K3 {pi} {diagrams}"), move || {
            verify_k3_vanishing(&p, diagrams)
        }));
        let p = pi.clone();
        tasks.push(check(format!("K4 {pi} {diagrams}"), move || {
            verify_k4_laurent_degree(&p, diagrams)
        }));
    }
    for pi in nonempty_partitions_up_to(max_pi.saturating_sub(1)) {
        for m in 1..=rows {
            let p = pi.clone();
            tasks.push(check(format!("K2 {pi} rows={m}"), move || {
                let fit = verify_k2_top_degree(&p, m)?;
                let mut report = Report::new("K2-top-degree")
                    .param("pi", &p)
                    .param("rows", m)
                    .param("fit_points", fit.fit_points)
                    .param("held_out_points", fit.held_out_points);
                report.probe(
                    format!("{p} with {m} rows"),
                    (!fit.matches).then(|| "top homogeneous part differs from A^{|pi|-l(pi)} p_pi".to_string()),
                );
                Ok(report)
            }));
        }
    }
    tasks.push(check(format!("content-formulas {diagrams}"), move || {
        verify_content_formulas(diagrams)
    }));
    tasks
}

fn brillinger_tasks(limits: Limits) -> Vec<Task> {
    let max_size = limits.max_size.unwrap_or(6);
    let max_parts = limits.max_parts.unwrap_or(3);
    let mut tasks = Vec::new();
    for t in cumulant_tuples(max_size, max_parts) {
        for path in [
            BrillingerPath::DisjointPointwiseSeparate,
            BrillingerPath::DisjointPointwiseDisjoint,
        ] {
            let tt = t.clone();
            tasks.push(check(format!("brillinger {path:?} {}", tuple_text(&t)), move || {
                verify_brillinger(&tt, path)
            }));
        }
    }
    tasks
}

fn delta_zero_tasks(limits: Limits) -> Vec<Task> {
    let max = limits.max.unwrap_or(6);
    let rank = limits.rank.unwrap_or(7);
    let mut tasks = Vec::new();
    for pi in nonempty_partitions_up_to(max) {
        for sigma in nonempty_partitions_up_to(max - pi.size()) {
            for n in pi.size() + sigma.size()..=rank {
                let (p, s) = (pi.clone(), sigma.clone());
                tasks.push(check(format!("delta-zero {pi} {sigma} {n}"), move || {
                    verify_delta_zero(&p, &s, n)
                }));
            }
        }
    }
    tasks
}

/// Coefficient seeds of the graded kernels fed to the small-degree check.
const GRADED_SEEDS: [&[i64]; 3] = [&[1, -2, 3], &[2, 1], &[-1]];

fn z3_tasks(limits: Limits) -> Vec<Task> {
    let max_size = limits.max_size.unwrap_or(6);
    let max_parts = limits.max_parts.unwrap_or(max_size);
    let mut tasks: Vec<Task> = cumulant_tuples(max_size, max_parts)
        .into_iter()
        .filter(|t| t.len() >= 2)
        .map(|t| {
            check(format!("z3 {}", tuple_text(&t)), move || {
                verify_z3_for_tuple(&t, Z3Recipe::Consistent)
            })
        })
        .collect();
    for degree in 2..=7 {
        for seeds in GRADED_SEEDS {
            let text: Vec<String> = seeds.iter().map(i64::to_string).collect();
            let text = text.join(",");
            tasks.push(check(format!("small-degree-killed {degree} {text}"), move || {
                let k = graded_kernel(degree, seeds.to_vec());
                Ok(verify_small_degree_killed(&k, degree as usize, 5, 3)?.param("seeds", &text))
            }));
        }
    }
    tasks
}

fn vanishing_tasks(limits: Limits) -> Vec<Task> {
    let max_size = limits.max_size.unwrap_or(6);
    let diagrams = max_size + 2;
    let mut tasks = Vec::new();
    for pi in nonempty_partitions_up_to(4) {
        let p = pi.clone();
        tasks.push(check(format!("kernel-reconstruction {pi} {diagrams}"), move || {
            Ok(verify_kernel_reconstruction(&EvaluableFunction::character(&p), diagrams)?.param("pi", &p))
        }));
    }
    for pi in nonempty_partitions_up_to(max_size) {
        for sigma in nonempty_partitions_up_to(max_size - pi.size()) {
            let (p, s) = (pi.clone(), sigma.clone());
            tasks.push(check(format!("cool-vanishing {pi} {sigma}"), move || {
                verify_cool_vanishing(&p, &s)
            }));
        }
    }
    for t in cumulant_tuples(max_size, max_size) {
        tasks.push(check(format!("vanishing {}", tuple_text(&t)), move || {
            verify_vanishing_kappa_row(&t)
        }));
    }
    // every multiset of one to three of the sample kernels
    let n = sample_homogeneous_kernels().len();
    let mut choices: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        choices.push(vec![a]);
        for b in a..n {
            choices.push(vec![a, b]);
            for c in b..n {
                choices.push(vec![a, b, c]);
            }
        }
    }
    choices.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    for choice in choices {
        let text: Vec<String> = choice.iter().map(usize::to_string).collect();
        let text = text.join(",");
        tasks.push(check(format!("kernel-cumulant-formula {text} {max_size}"), move || {
            let samples = sample_homogeneous_kernels();
            let xs: Vec<_> = choice.iter().map(|&i| samples[i].clone()).collect();
            Ok(verify_kernel_cumulant_formula(&xs, max_size)?.param("kernels", &text))
        }));
    }
    tasks
}

fn kl_positivity_tasks(limits: Limits) -> Vec<Task> {
    let max = limits.max.unwrap_or(5);
    vec![check(format!("kl-positivity {max}"), move || {
        scan_kerov_lassalle_positivity(max)
    })]
}

fn tasks_for(suite: Suite, limits: Limits) -> Vec<Task> {
    match suite {
        Suite::MainTheorem => main_theorem_tasks(limits),
        Suite::Kconditions => kconditions_tasks(limits),
        Suite::Brillinger => brillinger_tasks(limits),
        Suite::DeltaZero => delta_zero_tasks(limits),
        Suite::Z3 => z3_tasks(limits),
        Suite::Vanishing => vanishing_tasks(limits),
        Suite::KlPositivity => kl_positivity_tasks(limits),
        Suite::Steroids => steroids_tasks(limits),
    }
}

/// Runs every task of `suite` on the global worker pool.
pub fn run_suite(suite: Suite, limits: Limits, cache: Option<&Cache>) -> Result<SuiteRun> {
    let records = tasks_for(suite, limits)
        .par_iter()
        .map(|t| cached(cache, &t.key, || (t.run)()))
        .collect::<Result<Vec<Record>>>()?;
    Ok(SuiteRun { suite, records })
}
