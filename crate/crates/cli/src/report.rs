//! Renderings: delimited tables, plain-text reports, SVG panels and the
//! JSON audit bundle.

use std::fmt::Write as _;

use fairaudit::audit::{ContributionStats, Summary};
use fairaudit::pareto::Frontier;
use fairaudit::{
    Classification, Dataset64, FfmcReport, Histogram, Measure, RiskWeight64, SweepResult64,
    ValidationReport,
};
use serde::Serialize;

use crate::svg::{Axis, Chart, PALETTE};

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

// ---------------------------------------------------------------- validate

pub fn validation_table(rep: &ValidationReport) -> String {
    let criteria = rep.criteria.iter().map(|c| {
        vec![
            "criterion".into(),
            c.id.into(),
            if c.passed { "pass" } else { "fail" }.into(),
            c.detail.clone(),
            c.offenders.join("; "),
        ]
    });
    let warnings = rep.warnings.iter().map(|w| {
        vec![
            "warning".into(),
            w.algorithm.clone(),
            "warn".into(),
            w.message.clone(),
            String::new(),
        ]
    });
    csv_string(
        &["kind", "id", "status", "detail", "offenders"],
        criteria.chain(warnings),
    )
}

pub fn validation_text(rep: &ValidationReport) -> String {
    let mut s = format!("Data criteria ({} records)\n", rep.record_count);
    s.push_str(&rep.to_string());
    let _ = writeln!(
        s,
        "structural criteria: {}",
        if rep.structural_ok() { "PASS" } else { "FAIL" }
    );
    s
}

// ------------------------------------------------------------------- score

#[derive(Debug, Clone, Serialize)]
pub struct ScoreRow {
    pub algorithm: String,
    pub value: Option<f64>,
    pub term_a: Option<f64>,
    pub term_b: Option<f64>,
    pub contribution_a: Option<f64>,
    pub status: String,
}

pub fn score_rows(d: &Dataset64, measure: Measure, w: RiskWeight64) -> Vec<ScoreRow> {
    d.records()
        .iter()
        .map(|r| match measure.evaluate(r.rates(), w) {
            Ok(m) => ScoreRow {
                algorithm: r.name().to_owned(),
                value: Some(m.value),
                term_a: Some(m.term_a),
                term_b: Some(m.term_b),
                contribution_a: Some(m.contribution_a),
                status: "ok".into(),
            },
            Err(e) => ScoreRow {
                algorithm: r.name().to_owned(),
                value: None,
                term_a: None,
                term_b: None,
                contribution_a: None,
                status: format!("incalculable: {e}"),
            },
        })
        .collect()
}

pub fn score_table(measure: Measure, w: RiskWeight64, rows: &[ScoreRow]) -> String {
    csv_string(
        &[
            "algorithm",
            "measure",
            "alpha",
            "value",
            "term_a",
            "term_b",
            "contribution_a",
            "status",
        ],
        rows.iter().map(|r| {
            vec![
                r.algorithm.clone(),
                measure.to_string(),
                num(w.alpha()),
                opt(r.value),
                opt(r.term_a),
                opt(r.term_b),
                opt(r.contribution_a),
                r.status.clone(),
            ]
        }),
    )
}

pub fn score_text(measure: Measure, w: RiskWeight64, rows: &[ScoreRow]) -> String {
    let mut s = format!("{measure} at alpha = {}\n", w.alpha());
    let _ = writeln!(
        s,
        "{:<32} {:>12} {:>12} {:>12} {:>8}",
        "algorithm", "value", "A", "B", "contrib"
    );
    for r in rows {
        match r.value {
            Some(v) => {
                let _ = writeln!(
                    s,
                    "{:<32} {:>12.6} {:>12.6} {:>12.6} {:>8.4}",
                    r.algorithm,
                    v,
                    r.term_a.unwrap_or_default(),
                    r.term_b.unwrap_or_default(),
                    r.contribution_a.unwrap_or_default()
                );
            }
            None => {
                let _ = writeln!(s, "{:<32} {}", r.algorithm, r.status);
            }
        }
    }
    if let Some(st) = Summary::of(rows.iter().filter_map(|r| r.value)) {
        let _ = writeln!(
            s,
            "n = {}  min {:.6}  median {:.6}  max {:.6}",
            st.count, st.min, st.median, st.max
        );
    }
    let bad = rows.iter().filter(|r| r.value.is_none()).count();
    if bad > 0 {
        let _ = writeln!(s, "{bad} record(s) incalculable");
    }
    s
}

// ------------------------------------------------------------------- sweep

pub fn sweep_stats_table(s: &SweepResult64) -> String {
    csv_string(
        &[
            "alpha",
            "count",
            "min",
            "max",
            "mean",
            "median",
            "p05",
            "p95",
            "contribution_mean",
            "contribution_median",
        ],
        s.alphas.iter().enumerate().map(|(k, w)| {
            let v = s.value_stats[k];
            let c = s.contribution_stats[k];
            vec![
                num(w.alpha()),
                v.map(|v| v.count.to_string()).unwrap_or_else(|| "0".into()),
                opt(v.map(|v| v.min)),
                opt(v.map(|v| v.max)),
                opt(v.map(|v| v.mean)),
                opt(v.map(|v| v.median)),
                opt(v.map(|v| v.p05)),
                opt(v.map(|v| v.p95)),
                opt(c.map(|c| c.mean)),
                opt(c.map(|c| c.median)),
            ]
        }),
    )
}

fn matrix_table(s: &SweepResult64, cells: &[Vec<Option<f64>>]) -> String {
    let alphas: Vec<String> = s.alphas.iter().map(|w| num(w.alpha())).collect();
    let mut header = vec!["algorithm"];
    header.extend(alphas.iter().map(String::as_str));
    csv_string(
        &header,
        s.records.iter().zip(cells).map(|(name, row)| {
            let mut r = vec![name.clone()];
            r.extend(row.iter().map(|v| opt(*v)));
            r
        }),
    )
}

pub fn sweep_values_table(s: &SweepResult64) -> String {
    matrix_table(s, &s.values)
}

pub fn sweep_contribution_table(s: &SweepResult64) -> String {
    matrix_table(s, &s.contributions)
}

pub fn terms_table(s: &SweepResult64) -> String {
    csv_string(
        &["algorithm", "term_a", "term_b", "status"],
        s.records.iter().zip(&s.terms).map(|(name, t)| match t {
            Some(t) => vec![name.clone(), num(t.term_a), num(t.term_b), "ok".into()],
            None => vec![
                name.clone(),
                String::new(),
                String::new(),
                "incalculable".into(),
            ],
        }),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub measure: Measure,
    pub grid_points: usize,
    pub grid_first: f64,
    pub grid_last: f64,
    pub incalculable: Vec<String>,
    pub crossover_median: Option<f64>,
    pub crossover_mean: Option<f64>,
    pub max_value: Option<f64>,
    pub max_value_alpha: Option<f64>,
    pub max_value_algorithm: Option<String>,
    pub term_a: Option<Summary<f64>>,
    pub term_b: Option<Summary<f64>>,
    pub at_alpha: Option<f64>,
    pub values_at_alpha: Option<Summary<f64>>,
    pub contribution_at_alpha: Option<ContributionStats<f64>>,
}

pub fn sweep_summary(s: &SweepResult64, alpha: f64) -> SweepSummary {
    let (ta, tb) = s.term_summaries();
    let max = s.max_value();
    let k = s.alpha_index(alpha);
    SweepSummary {
        measure: s.measure,
        grid_points: s.alphas.len(),
        grid_first: s.alphas[0].alpha(),
        grid_last: s.alphas[s.alphas.len() - 1].alpha(),
        incalculable: s.incalculable.iter().map(|(n, _)| n.clone()).collect(),
        crossover_median: s
            .crossover(fairaudit::Statistic::Median, 0.5)
            .map(|w| w.alpha()),
        crossover_mean: s
            .crossover(fairaudit::Statistic::Mean, 0.5)
            .map(|w| w.alpha()),
        max_value: max.map(|m| m.0),
        max_value_alpha: max.map(|m| m.1.alpha()),
        max_value_algorithm: max.map(|m| m.2.to_owned()),
        term_a: ta,
        term_b: tb,
        at_alpha: k.map(|_| alpha),
        values_at_alpha: k.and_then(|k| s.value_stats[k]),
        contribution_at_alpha: k.and_then(|k| s.contribution_stats[k]),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.2}"))
        .unwrap_or_else(|| "never".into())
}

pub fn sweep_text(sum: &SweepSummary) -> String {
    let mut s = format!(
        "{} sweep over {} alpha values [{}, {}]\n",
        sum.measure, sum.grid_points, sum.grid_first, sum.grid_last
    );
    if !sum.incalculable.is_empty() {
        let _ = writeln!(s, "incalculable records: {}", sum.incalculable.join(", "));
    }
    if let (Some(a), Some(b)) = (&sum.term_a, &sum.term_b) {
        let _ = writeln!(
            s,
            "term A median {:.6} (range {:.6} to {:.6}); term B median {:.6} (range {:.6} to {:.6})",
            a.median, a.min, a.max, b.median, b.min, b.max
        );
    }
    if let (Some(alpha), Some(v)) = (sum.at_alpha, &sum.values_at_alpha) {
        let _ = writeln!(
            s,
            "alpha = {alpha}: min {:.6}  p05 {:.6}  median {:.6}  mean {:.6}  p95 {:.6}  max {:.6}",
            v.min, v.p05, v.median, v.mean, v.p95, v.max
        );
    }
    let _ = writeln!(
        s,
        "alpha-term contribution reaches 0.5: median at {}, mean at {}",
        fmt_opt(sum.crossover_median),
        fmt_opt(sum.crossover_mean)
    );
    if let (Some(v), Some(a), Some(n)) =
        (sum.max_value, sum.max_value_alpha, &sum.max_value_algorithm)
    {
        let _ = writeln!(
            s,
            "largest value over the sweep: {v:.6} at alpha = {a} ({n})"
        );
    }
    s
}

fn value_axis(measure: Measure, hi: f64) -> Axis {
    match measure.theoretical_bounds() {
        Some((lo, hi)) => Axis::linear(lo, hi),
        None => Axis::linear(1.0, (hi * 1.05).max(2.0)),
    }
}

pub struct Panels {
    pub distribution: String,
    pub terms: String,
    pub range: String,
    pub contribution: String,
}

pub fn sweep_panels(s: &SweepResult64, hist: &Histogram<f64>, comment: Option<&str>) -> Panels {
    let m = s.measure;
    let xs: Vec<f64> = s.alphas.iter().map(|w| w.alpha()).collect();

    let peak = hist.counts.iter().copied().max().unwrap_or(1) as f64;
    let (lo, hi) = match m.theoretical_bounds() {
        Some(b) => b,
        None => (1.0, hist.max().max(2.0) * 1.05),
    };
    let mut a = Chart::new(
        &format!("{m} distribution (alpha = {})", hist.alpha.alpha()),
        m.name(),
        "algorithms",
        Axis::linear(lo, hi),
        Axis::linear(0.0, peak * 1.1),
    );
    a.bars(&hist.edges, &hist.counts, PALETTE[0]);

    let ta: Vec<f64> = s.terms.iter().flatten().map(|t| t.term_a).collect();
    let tb: Vec<f64> = s.terms.iter().flatten().map(|t| t.term_b).collect();
    let positive = ta.iter().chain(&tb).copied().filter(|v| *v > 0.0);
    let (pmin, pmax) = positive.fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let y = if pmax > 0.0 {
        Axis::log10(pmin, pmax)
    } else {
        Axis::linear(0.0, 1.0)
    };
    let mut b = Chart::new(
        &format!("{m} term magnitudes"),
        "term (0 = A, 1 = B)",
        "value",
        Axis::linear(-0.5, 1.5),
        y,
    );
    let jitter = |i: usize| ((i * 37) % 41) as f64 / 41.0 * 0.5 - 0.25;
    let pa: Vec<(f64, f64)> = ta
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, &v)| (jitter(i), v))
        .collect();
    let pb: Vec<(f64, f64)> = tb
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, &v)| (1.0 + jitter(i), v))
        .collect();
    b.points(&pa, PALETTE[0], 2.5, Some("A (FMR side)"));
    b.points(&pb, PALETTE[1], 2.5, Some("B (FNMR side)"));

    let mins: Vec<Option<f64>> = s.value_stats.iter().map(|v| v.map(|v| v.min)).collect();
    let maxs: Vec<Option<f64>> = s.value_stats.iter().map(|v| v.map(|v| v.max)).collect();
    let meds: Vec<Option<f64>> = s.value_stats.iter().map(|v| v.map(|v| v.median)).collect();
    let top = maxs.iter().flatten().copied().fold(1.0f64, f64::max);
    let mut c = Chart::new(
        &format!("{m} range by alpha"),
        "alpha",
        m.name(),
        Axis::linear(0.0, 1.0),
        value_axis(m, top),
    );
    c.line(&xs, &mins, PALETTE[0], "min");
    c.line(&xs, &meds, PALETTE[2], "median");
    c.line(&xs, &maxs, PALETTE[1], "max");

    let cmean: Vec<Option<f64>> = s
        .contribution_stats
        .iter()
        .map(|c| c.map(|c| c.mean))
        .collect();
    let cmed: Vec<Option<f64>> = s
        .contribution_stats
        .iter()
        .map(|c| c.map(|c| c.median))
        .collect();
    let mut d = Chart::new(
        &format!("{m} relative contribution of the alpha term"),
        "alpha",
        "contribution",
        Axis::linear(0.0, 1.0),
        Axis::linear(0.0, 1.0),
    );
    d.hline(0.5, "#999");
    d.line(&xs, &cmean, PALETTE[0], "mean");
    d.line(&xs, &cmed, PALETTE[3], "median");

    Panels {
        distribution: a.render(comment),
        terms: b.render(comment),
        range: c.render(comment),
        contribution: d.render(comment),
    }
}

// -------------------------------------------------------------------- ffmc

pub fn ffmc_table(reports: &[FfmcReport]) -> String {
    let pf = |b: bool| if b { "pass" } else { "fail" }.to_string();
    csv_string(
        &[
            "measure",
            "ffmc1",
            "ffmc2",
            "ffmc3",
            "crossover_alpha",
            "bounds",
            "zero_probe",
        ],
        reports.iter().map(|r| {
            vec![
                r.measure.to_string(),
                pf(r.ffmc1.passed),
                pf(r.ffmc2.passed),
                pf(r.ffmc3.passed),
                opt(r.crossover),
                r.bounds
                    .map(|(a, b)| format!("[{a}, {b}]"))
                    .unwrap_or_else(|| "unbounded".into()),
                r.ffmc3.detail.clone(),
            ]
        }),
    )
}

pub fn ffmc_text(reports: &[FfmcReport]) -> String {
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    let mut s = String::from("FFMC criteria");
    for r in reports {
        let _ = write!(s, " {:>6}", r.measure.name());
    }
    s.push('\n');
    for (i, label) in ["FFMC.1", "FFMC.2", "FFMC.3"].iter().enumerate() {
        let _ = write!(s, "{label:<13}");
        for r in reports {
            let _ = write!(s, " {:>6}", mark(r.verdicts()[i]));
        }
        s.push('\n');
    }
    for r in reports {
        let _ = writeln!(s, "\n{}:", r.measure);
        let _ = writeln!(s, "  FFMC.1 {}", r.ffmc1.detail);
        let _ = writeln!(s, "  FFMC.2 {}", r.ffmc2.detail);
        let _ = writeln!(s, "  FFMC.3 {}", r.ffmc3.detail);
        for n in &r.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    s
}

// ------------------------------------------------------------------ pareto

pub fn pareto_table(f: &Frontier<f64>) -> String {
    csv_string(
        &[
            "algorithm",
            "total_fnmr",
            "fairness_objective",
            "measure_value",
            "classification",
            "strictly_minimal",
        ],
        f.points.iter().map(|p| {
            vec![
                p.algorithm.clone(),
                num(p.objective_accuracy),
                num(p.objective_fairness),
                num(p.measure_value),
                p.classification.as_str().into(),
                p.strictly_minimal.to_string(),
            ]
        }),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct ParetoSummary {
    pub measure: Measure,
    pub alpha: f64,
    pub total: usize,
    pub efficient: Vec<(String, f64, f64)>,
    pub weakly_efficient: usize,
    pub kept_ratio: f64,
    pub eliminated_percent: f64,
    pub excluded: Vec<String>,
    pub inset_threshold: Option<f64>,
    pub inset: Vec<String>,
}

pub fn pareto_summary(f: &Frontier<f64>, inset: Option<f64>) -> ParetoSummary {
    ParetoSummary {
        measure: f.measure,
        alpha: f.alpha.alpha(),
        total: f.points.len(),
        efficient: f
            .efficient
            .iter()
            .map(|p| {
                (
                    p.algorithm.clone(),
                    p.objective_accuracy,
                    p.objective_fairness,
                )
            })
            .collect(),
        weakly_efficient: f.count(Classification::WeaklyEfficient),
        kept_ratio: f.kept_ratio(),
        eliminated_percent: 100.0 * (1.0 - f.kept_ratio()),
        excluded: f.excluded.iter().map(|(n, _)| n.clone()).collect(),
        inset_threshold: inset,
        inset: inset
            .map(|t| {
                f.inset(t)
                    .into_iter()
                    .map(|p| p.algorithm.clone())
                    .collect()
            })
            .unwrap_or_default(),
    }
}

pub fn pareto_text(sum: &ParetoSummary) -> String {
    let objective = if sum.measure.higher_is_fairer() {
        format!("1 - {}", sum.measure)
    } else {
        sum.measure.to_string()
    };
    let mut s = format!(
        "Pareto frontier: total FNMR vs {objective} (alpha = {})\n{} efficient of {} ({:.1}% eliminated), {} weakly efficient\n",
        sum.alpha,
        sum.efficient.len(),
        sum.total,
        sum.eliminated_percent,
        sum.weakly_efficient
    );
    for (name, x, y) in &sum.efficient {
        let _ = writeln!(s, "  {name:<32} total FNMR {x:.6}  {objective} {y:.6}");
    }
    if !sum.excluded.is_empty() {
        let _ = writeln!(s, "excluded (incalculable): {}", sum.excluded.join(", "));
    }
    if let Some(t) = sum.inset_threshold {
        let _ = writeln!(
            s,
            "efficient with total FNMR < {t}: {} [{}]",
            sum.inset.len(),
            sum.inset.join(", ")
        );
    }
    s
}

pub fn pareto_plot(f: &Frontier<f64>, inset: Option<f64>, comment: Option<&str>) -> String {
    let visible: Vec<_> = f
        .points
        .iter()
        .filter(|p| inset.is_none_or(|t| p.objective_accuracy < t))
        .collect();
    let xmax = visible
        .iter()
        .map(|p| p.objective_accuracy)
        .fold(0.0f64, f64::max)
        * 1.05;
    let ymax = visible
        .iter()
        .map(|p| p.objective_fairness)
        .fold(0.0f64, f64::max)
        * 1.05;
    let ylabel = if f.measure.higher_is_fairer() {
        format!("1 - {}", f.measure)
    } else {
        f.measure.to_string()
    };
    let title = match inset {
        Some(t) => format!("{ylabel} vs total FNMR (total FNMR < {t})"),
        None => format!("{ylabel} vs total FNMR"),
    };
    let mut c = Chart::new(
        &title,
        "total FNMR",
        &ylabel,
        Axis::linear(0.0, xmax),
        Axis::linear(0.0, ymax),
    );
    let others: Vec<(f64, f64)> = visible
        .iter()
        .filter(|p| p.classification != Classification::Efficient)
        .map(|p| (p.objective_accuracy, p.objective_fairness))
        .collect();
    c.points(&others, PALETTE[0], 2.5, Some("algorithm"));
    let eff: Vec<_> = f
        .efficient
        .iter()
        .filter(|p| inset.is_none_or(|t| p.objective_accuracy < t))
        .collect();
    let xs: Vec<f64> = eff.iter().map(|p| p.objective_accuracy).collect();
    let ys: Vec<Option<f64>> = eff.iter().map(|p| Some(p.objective_fairness)).collect();
    c.line(&xs, &ys, PALETTE[1], "Pareto efficient");
    c.points(
        &eff.iter()
            .map(|p| (p.objective_accuracy, p.objective_fairness))
            .collect::<Vec<_>>(),
        PALETTE[1],
        3.5,
        None,
    );
    for p in &eff {
        c.text(p.objective_accuracy, p.objective_fairness, &p.algorithm);
    }
    c.render(comment)
}

// ------------------------------------------------------------------ bundle

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: String,
    pub input_sha256: String,
    pub weights: Option<String>,
    pub weights_sha256: Option<String>,
    pub generated_at_unix: Option<u64>,
    pub parameters: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetSummary {
    pub record_count: usize,
    pub groups: Vec<String>,
    pub validation: ValidationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureScores {
    pub measure: Measure,
    pub alpha: f64,
    pub rows: Vec<ScoreRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub provenance: Provenance,
    pub dataset: DatasetSummary,
    pub scores: Vec<MeasureScores>,
    pub sweeps: Vec<SweepSummary>,
    pub ffmc: Vec<FfmcReport>,
    pub pareto: ParetoSummary,
}

impl AuditReport {
    pub fn text(&self) -> String {
        let mut s = format!(
            "fairaudit {} audit of {} ({} algorithms, groups: {})\ninput sha256 {}\n",
            self.provenance.version,
            self.provenance.input,
            self.dataset.record_count,
            self.dataset.groups.join(", "),
            self.provenance.input_sha256
        );
        if let Some(t) = self.provenance.generated_at_unix {
            let _ = writeln!(s, "generated at unix time {t}");
        }
        s.push('\n');
        s.push_str(&validation_text(&self.dataset.validation));
        for sw in &self.sweeps {
            s.push('\n');
            s.push_str(&sweep_text(sw));
        }
        s.push('\n');
        s.push_str(&ffmc_text(&self.ffmc));
        s.push('\n');
        s.push_str(&pareto_text(&self.pareto));
        s.push_str(
            "\nGini-based figures depend on how groups are formed; merging groups can hide dispersion. \
             Group labels and counts are listed above.\n",
        );
        s
    }
}
