use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use fairaudit::audit::{self, FfmcConfig};
use fairaudit::model::{self, validate};
use fairaudit::{pareto, Dataset64, Measure, RiskWeight64, WideLayout};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::report::{self, AuditReport, DatasetSummary, MeasureScores, Provenance};
use crate::{Cli, Command, Emit, InputArgs, Layout, OutputArgs};

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let comment = plot_comment(cli.no_timestamps);
    match &cli.command {
        Command::Validate(a) => validate_cmd(&a.input, &a.output),
        Command::Score(a) => {
            let d = load_records(&a.input)?;
            let w = RiskWeight64::new(a.alpha)?;
            let rows = report::score_rows(&d, a.measure, w);
            if rows.iter().all(|r| r.value.is_none()) {
                return Err(CliError::Incalculable(format!(
                    "{} is incalculable for every record",
                    a.measure
                )));
            }
            let out = Outputs::new(&a.output, &[Emit::Table])?;
            let stem = format!("score_{}", a.measure.name().to_lowercase());
            out.table(&stem, &report::score_table(a.measure, w, &rows))?;
            out.report(&stem, &report::score_text(a.measure, w, &rows))?;
            out.reject_plots()?;
            Ok(0)
        }
        Command::Sweep(a) => {
            let d = load_records(&a.input)?;
            let grid = audit::parse_grid::<f64>(&a.grid)?;
            let s = audit::sweep(&d, a.measure, &grid)?;
            let out = Outputs::new(&a.output, &[Emit::Table])?;
            let m = a.measure.name().to_lowercase();
            let summary = report::sweep_summary(&s, 0.5);
            out.table(&format!("sweep_{m}_stats"), &report::sweep_stats_table(&s))?;
            if out.dir.is_some() {
                out.table(
                    &format!("sweep_{m}_values"),
                    &report::sweep_values_table(&s),
                )?;
                out.table(
                    &format!("sweep_{m}_contribution"),
                    &report::sweep_contribution_table(&s),
                )?;
                out.table(&format!("sweep_{m}_terms"), &report::terms_table(&s))?;
            }
            out.report(&format!("sweep_{m}"), &report::sweep_text(&summary))?;
            if out.wants(Emit::Plots) {
                let hist = audit::distribution(&d, a.measure, RiskWeight64::balanced(), a.bins)?;
                write_panels(&out, &m, &s, &hist, comment.as_deref())?;
            }
            Ok(0)
        }
        Command::Ffmc(a) => {
            let d = load_records(&a.input)?;
            let cfg = ffmc_config(&a.grid, &a.band)?;
            let reports = Measure::ALL
                .iter()
                .map(|&m| audit::ffmc_audit_with(&d, m, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let out = Outputs::new(&a.output, &[Emit::Report])?;
            out.table("ffmc", &report::ffmc_table(&reports))?;
            out.report("ffmc", &report::ffmc_text(&reports))?;
            out.reject_plots()?;
            Ok(0)
        }
        Command::Pareto(a) => {
            let d = load_records(&a.input)?;
            let w = RiskWeight64::new(a.alpha)?;
            check_inset(a.inset_fnmr)?;
            let f = pareto::frontier(&d, a.measure, w)?;
            let out = Outputs::new(&a.output, &[Emit::Table])?;
            out.table("pareto", &report::pareto_table(&f))?;
            out.report(
                "pareto",
                &report::pareto_text(&report::pareto_summary(&f, a.inset_fnmr)),
            )?;
            if out.wants(Emit::Plots) {
                out.write(
                    "pareto.svg",
                    &report::pareto_plot(&f, None, comment.as_deref()),
                )?;
                if let Some(t) = a.inset_fnmr {
                    out.write(
                        "pareto_inset.svg",
                        &report::pareto_plot(&f, Some(t), comment.as_deref()),
                    )?;
                }
            }
            Ok(0)
        }
        Command::Report(a) => full_report(cli, a, comment.as_deref()),
    }
}

fn plot_comment(no_timestamps: bool) -> Option<String> {
    (!no_timestamps).then(|| {
        format!(
            "generated by fairaudit {} at unix time {}",
            env!("CARGO_PKG_VERSION"),
            now()
        )
    })
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn check_inset(t: Option<f64>) -> Result<(), CliError> {
    match t {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::BadArgs(format!(
            "--inset-fnmr must be a positive number, got {t}"
        ))),
        _ => Ok(()),
    }
}

fn ffmc_config(grid: &str, band: &str) -> Result<FfmcConfig<f64>, CliError> {
    let bad = || {
        CliError::BadArgs(format!(
            "--band `{band}` is not lo:hi with 0 <= lo <= hi <= 1"
        ))
    };
    let (lo, hi) = band.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(bad());
    }
    Ok(FfmcConfig {
        band: (lo, hi),
        grid: audit::parse_grid(grid)?,
        ..FfmcConfig::default()
    })
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn load(args: &InputArgs) -> Result<Dataset64, CliError> {
    let bytes = read(&args.input)?;
    let d = match args.format {
        Layout::Wide => {
            let layout = if args.positional_rows {
                WideLayout::Positional
            } else {
                WideLayout::Prefixed {
                    fmr_prefix: args.fmr_prefix.clone(),
                    fnmr_prefix: args.fnmr_prefix.clone(),
                }
            };
            model::parse_wide_csv_with_layout(bytes.as_slice(), args.fmr_scale, &layout)
        }
        Layout::Long => model::parse_long_csv_scaled(bytes.as_slice(), args.fmr_scale),
    }
    .map_err(|e| CliError::model(&args.input, e))?;
    match &args.weights {
        None => Ok(d),
        Some(p) => {
            let counts =
                model::parse_counts_csv(read(p)?.as_slice()).map_err(|e| CliError::model(p, e))?;
            d.with_global_counts(&counts)
                .map_err(|e| CliError::model(p, e))
        }
    }
}

/// [`load`], rejecting a dataset without algorithm columns.
fn load_records(args: &InputArgs) -> Result<Dataset64, CliError> {
    let d = load(args)?;
    if d.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: dataset has no algorithms",
            args.input.display()
        )));
    }
    Ok(d)
}

fn validate_cmd(input: &InputArgs, output: &OutputArgs) -> Result<u8, CliError> {
    let d = load(input)?;
    let rep = validate(&d);
    let out = Outputs::new(output, &[Emit::Report])?;
    out.table("validation", &report::validation_table(&rep))?;
    out.report("validation", &report::validation_text(&rep))?;
    out.reject_plots()?;
    Ok(if rep.structural_ok() {
        0
    } else {
        CliError::VALIDATION
    })
}

struct Outputs {
    dir: Option<PathBuf>,
    emit: Vec<Emit>,
}

impl Outputs {
    fn new(args: &OutputArgs, default: &[Emit]) -> Result<Self, CliError> {
        let emit = if args.emit.is_empty() {
            default.to_vec()
        } else {
            args.emit.clone()
        };
        if emit.contains(&Emit::Plots) && args.out.is_none() {
            return Err(CliError::BadArgs("--emit plots requires --out DIR".into()));
        }
        if let Some(dir) = &args.out {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        Ok(Self {
            dir: args.out.clone(),
            emit,
        })
    }

    fn wants(&self, e: Emit) -> bool {
        self.emit.contains(&e)
    }

    fn reject_plots(&self) -> Result<(), CliError> {
        if self.wants(Emit::Plots) {
            return Err(CliError::BadArgs(
                "this command has no plots; use --emit table or report".into(),
            ));
        }
        Ok(())
    }

    fn write(&self, name: &str, content: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => {
                let path = dir.join(name);
                fs::write(&path, content).map_err(|e| CliError::io(&path, e))?;
                println!("{}", path.display());
            }
            None => print!("{content}"),
        }
        Ok(())
    }

    fn table(&self, stem: &str, content: &str) -> Result<(), CliError> {
        if self.wants(Emit::Table) {
            self.write(&format!("{stem}.csv"), content)?;
        }
        Ok(())
    }

    fn report(&self, stem: &str, content: &str) -> Result<(), CliError> {
        if self.wants(Emit::Report) {
            self.write(&format!("{stem}.txt"), content)?;
        }
        Ok(())
    }
}

fn write_panels(
    out: &Outputs,
    m: &str,
    s: &fairaudit::SweepResult64,
    hist: &fairaudit::Histogram<f64>,
    comment: Option<&str>,
) -> Result<(), CliError> {
    let p = report::sweep_panels(s, hist, comment);
    out.write(&format!("{m}_a_distribution.svg"), &p.distribution)?;
    out.write(&format!("{m}_b_terms.svg"), &p.terms)?;
    out.write(&format!("{m}_c_range.svg"), &p.range)?;
    out.write(&format!("{m}_d_contribution.svg"), &p.contribution)?;
    Ok(())
}

fn full_report(cli: &Cli, a: &crate::ReportArgs, comment: Option<&str>) -> Result<u8, CliError> {
    let bytes = read(&a.input.input)?;
    let d = load_records(&a.input)?;
    let w = RiskWeight64::new(a.alpha)?;
    check_inset(a.inset_fnmr)?;
    let cfg = ffmc_config(&a.grid, &a.band)?;
    let validation = validate(&d);
    if d.is_empty() {
        return Err(CliError::Validation("dataset has no records".into()));
    }

    let out = Outputs::new(
        &OutputArgs {
            out: Some(a.out.clone()),
            emit: vec![Emit::Table, Emit::Report, Emit::Plots],
        },
        &[],
    )?;
    out.table("validation", &report::validation_table(&validation))?;

    let mut scores = Vec::new();
    let mut sweeps = Vec::new();
    let mut ffmc = Vec::new();
    for m in Measure::ALL {
        let name = m.name().to_lowercase();
        let rows = report::score_rows(&d, m, w);
        out.table(&format!("score_{name}"), &report::score_table(m, w, &rows))?;
        scores.push(MeasureScores {
            measure: m,
            alpha: a.alpha,
            rows,
        });

        let s = audit::sweep(&d, m, &cfg.grid)?;
        out.table(
            &format!("sweep_{name}_stats"),
            &report::sweep_stats_table(&s),
        )?;
        out.table(
            &format!("sweep_{name}_values"),
            &report::sweep_values_table(&s),
        )?;
        out.table(
            &format!("sweep_{name}_contribution"),
            &report::sweep_contribution_table(&s),
        )?;
        out.table(&format!("sweep_{name}_terms"), &report::terms_table(&s))?;
        match audit::distribution(&d, m, w, a.bins) {
            Ok(hist) => write_panels(&out, &name, &s, &hist, comment)?,
            Err(audit::AuditError::AllIncalculable(_)) => {}
            Err(e) => return Err(e.into()),
        }
        sweeps.push(report::sweep_summary(&s, a.alpha));
        ffmc.push(audit::ffmc_audit_with(&d, m, &cfg)?);
    }
    out.table("ffmc", &report::ffmc_table(&ffmc))?;

    let f = pareto::frontier(&d, Measure::Garbe, w)?;
    out.table("pareto", &report::pareto_table(&f))?;
    out.write("pareto.svg", &report::pareto_plot(&f, None, comment))?;
    if let Some(t) = a.inset_fnmr {
        out.write(
            "pareto_inset.svg",
            &report::pareto_plot(&f, Some(t), comment),
        )?;
    }

    let weights_bytes = a.input.weights.as_deref().map(read).transpose()?;
    let bundle = AuditReport {
        provenance: Provenance {
            tool: "fairaudit",
            version: env!("CARGO_PKG_VERSION"),
            input: a.input.input.display().to_string(),
            input_sha256: sha256_hex(&bytes),
            weights: a.input.weights.as_ref().map(|p| p.display().to_string()),
            weights_sha256: weights_bytes.as_deref().map(sha256_hex),
            generated_at_unix: (!cli.no_timestamps).then(now),
            parameters: json!({
                "format": format!("{:?}", a.input.format).to_lowercase(),
                "fmr_scale": a.input.fmr_scale,
                "fmr_prefix": a.input.fmr_prefix,
                "fnmr_prefix": a.input.fnmr_prefix,
                "positional_rows": a.input.positional_rows,
                "alpha": a.alpha,
                "grid": a.grid,
                "ffmc1_band": [cfg.band.0, cfg.band.1],
                "bins": a.bins,
                "inset_fnmr": a.inset_fnmr,
                "pareto_measure": "GARBE",
            }),
        },
        dataset: DatasetSummary {
            record_count: d.len(),
            groups: d.group_labels().into_iter().map(String::from).collect(),
            validation,
        },
        scores,
        sweeps,
        ffmc,
        pareto: report::pareto_summary(&f, a.inset_fnmr),
    };
    let json = serde_json::to_string_pretty(&bundle).expect("report serialises");
    out.write("report.json", &(json + "\n"))?;
    out.write("report.txt", &bundle.text())?;
    Ok(if bundle.dataset.validation.structural_ok() {
        0
    } else {
        CliError::VALIDATION
    })
}
