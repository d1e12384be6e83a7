//! Wide and long CSV layouts.
//!
//! Wide: first row is a corner cell followed by algorithm names; each later
//! row is one (rate kind, group) pair with one cell per algorithm. Long:
//! `algorithm,group,fmr,fnmr[,mated_count]`, one row per (algorithm, group).

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::Read;

use csv::{ReaderBuilder, StringRecord, Trim};

use super::{AlgorithmRecord, Dataset, FmrScale, GroupRates, ModelError, RateKind};
use crate::Scalar;

/// How wide-format row labels map onto (rate kind, group).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WideLayout {
    /// Labels are `<fmr_prefix><group>` / `<fnmr_prefix><group>`, rows in any order.
    Prefixed {
        fmr_prefix: String,
        fnmr_prefix: String,
    },
    /// First half of the rows are FMR, second half FNMR, paired by position.
    /// Group names are taken verbatim from the FMR rows' labels.
    Positional,
}

impl Default for WideLayout {
    fn default() -> Self {
        WideLayout::Prefixed {
            fmr_prefix: "fmr:".into(),
            fnmr_prefix: "fnmr:".into(),
        }
    }
}

fn line_of(rec: &StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_cell<T: Scalar>(cell: &str, row: u64, column: usize) -> Result<T, ModelError> {
    cell.parse::<T>().map_err(|_| ModelError::NonNumeric {
        row,
        column,
        cell: cell.to_owned(),
    })
}

fn decode_rate<T: Scalar>(
    cell: &str,
    kind: RateKind,
    scale: FmrScale,
    row: u64,
    column: usize,
) -> Result<T, ModelError> {
    let raw: T = parse_cell(cell, row, column)?;
    let v = match kind {
        RateKind::Fmr => scale.decode(raw),
        RateKind::Fnmr => raw,
    };
    if !(v.is_finite() && v >= T::zero() && v <= T::one()) {
        return Err(ModelError::CellOutOfRange {
            row,
            column,
            value: v.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(v)
}

/// Parses the wide layout with the default `fmr:`/`fnmr:` row labels.
pub fn parse_wide_csv<T: Scalar, R: Read>(
    input: R,
    scale: FmrScale,
) -> Result<Dataset<T>, ModelError> {
    parse_wide_csv_with_layout(input, scale, &WideLayout::default())
}

pub fn parse_wide_csv_with_layout<T: Scalar, R: Read>(
    input: R,
    scale: FmrScale,
    layout: &WideLayout,
) -> Result<Dataset<T>, ModelError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(input);
    let rows = reader.records().collect::<Result<Vec<_>, _>>()?;
    let (header, body) = rows.split_first().ok_or(ModelError::EmptyInput)?;
    let width = header.len();
    let names: Vec<&str> = header.iter().skip(1).collect();
    let mut seen = HashSet::new();
    for name in &names {
        if name.is_empty() {
            return Err(ModelError::EmptyAlgorithmName);
        }
        if !seen.insert(*name) {
            return Err(ModelError::DuplicateAlgorithm((*name).to_owned()));
        }
    }
    for row in body {
        if row.len() != width {
            return Err(ModelError::RaggedRow {
                row: line_of(row),
                expected: width,
                found: row.len(),
            });
        }
    }

    // (kind, group label, row) triples.
    let mut labelled: Vec<(RateKind, String, &StringRecord)> = Vec::with_capacity(body.len());
    match layout {
        WideLayout::Prefixed {
            fmr_prefix,
            fnmr_prefix,
        } => {
            for row in body {
                let label = &row[0];
                // Check the longer prefix first so that one prefix being a
                // prefix of the other cannot misclassify a row.
                let (first, second) = if fnmr_prefix.len() >= fmr_prefix.len() {
                    ((RateKind::Fnmr, fnmr_prefix), (RateKind::Fmr, fmr_prefix))
                } else {
                    ((RateKind::Fmr, fmr_prefix), (RateKind::Fnmr, fnmr_prefix))
                };
                let hit = [first, second]
                    .into_iter()
                    .find_map(|(kind, p)| label.strip_prefix(p.as_str()).map(|g| (kind, g.trim())));
                match hit {
                    Some((kind, group)) if !group.is_empty() => {
                        labelled.push((kind, group.to_owned(), row))
                    }
                    _ => {
                        return Err(ModelError::BadRowLabel {
                            row: line_of(row),
                            label: label.to_owned(),
                        })
                    }
                }
            }
        }
        WideLayout::Positional => {
            if body.len() % 2 != 0 {
                let last = body.last().map(line_of).unwrap_or(1);
                return Err(ModelError::BadRowLabel {
                    row: last,
                    label: format!("odd number of rate rows ({})", body.len()),
                });
            }
            let half = body.len() / 2;
            for (i, row) in body.iter().enumerate() {
                let kind = if i < half {
                    RateKind::Fmr
                } else {
                    RateKind::Fnmr
                };
                let group = body[i % half.max(1)][0].to_owned();
                if group.is_empty() {
                    return Err(ModelError::BadRowLabel {
                        row: line_of(row),
                        label: String::new(),
                    });
                }
                labelled.push((kind, group, row));
            }
        }
    }

    let mut fmr_rows: Vec<(String, &StringRecord)> = Vec::new();
    let mut fnmr_rows: HashMap<String, &StringRecord> = HashMap::new();
    for (kind, group, row) in labelled {
        match kind {
            RateKind::Fmr => {
                if fmr_rows.iter().any(|(g, _)| *g == group) {
                    return Err(ModelError::DuplicateGroup(group));
                }
                fmr_rows.push((group, row));
            }
            RateKind::Fnmr => {
                if fnmr_rows.insert(group.clone(), row).is_some() {
                    return Err(ModelError::DuplicateGroup(group));
                }
            }
        }
    }
    if let Some((g, _)) = fmr_rows.iter().find(|(g, _)| !fnmr_rows.contains_key(g)) {
        return Err(ModelError::GroupSetMismatch(g.clone()));
    }
    if let Some(g) = fnmr_rows
        .keys()
        .find(|g| !fmr_rows.iter().any(|(f, _)| f == *g))
    {
        return Err(ModelError::GroupSetMismatch(g.clone()));
    }
    if fmr_rows.len() < 2 {
        return Err(ModelError::TooFewGroups(fmr_rows.len()));
    }

    let mut records = Vec::with_capacity(names.len());
    for (col, name) in names.iter().enumerate() {
        let column = col + 2;
        let mut triples = Vec::with_capacity(fmr_rows.len());
        for (group, fmr_row) in &fmr_rows {
            let fnmr_row = fnmr_rows[group];
            let a = decode_rate::<T>(
                &fmr_row[col + 1],
                RateKind::Fmr,
                scale,
                line_of(fmr_row),
                column,
            )?;
            let b = decode_rate::<T>(
                &fnmr_row[col + 1],
                RateKind::Fnmr,
                scale,
                line_of(fnmr_row),
                column,
            )?;
            triples.push((group.clone(), a, b));
        }
        records.push(AlgorithmRecord::new(*name, GroupRates::new(triples)?)?);
    }
    Dataset::new(records)
}

/// Parses the long layout with linear FMR cells.
pub fn parse_long_csv<T: Scalar, R: Read>(input: R) -> Result<Dataset<T>, ModelError> {
    parse_long_csv_scaled(input, FmrScale::Linear)
}

pub fn parse_long_csv_scaled<T: Scalar, R: Read>(
    input: R,
    scale: FmrScale,
) -> Result<Dataset<T>, ModelError> {
    let mut reader = ReaderBuilder::new().trim(Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let col = |name: &str| find(name).ok_or_else(|| ModelError::MissingColumn(name.to_owned()));
    let (c_alg, c_group, c_fmr, c_fnmr) =
        (col("algorithm")?, col("group")?, col("fmr")?, col("fnmr")?);
    let c_count = find("mated_count");

    let mut algorithms: Vec<String> = Vec::new();
    let mut groups: Vec<String> = Vec::new();
    let mut cells: HashMap<(String, String), (T, T, Option<u64>)> = HashMap::new();
    let mut any_count = false;
    let mut any_missing_count = false;
    for row in reader.records() {
        let row = row?;
        let line = line_of(&row);
        if row.len() != headers.len() {
            return Err(ModelError::RaggedRow {
                row: line,
                expected: headers.len(),
                found: row.len(),
            });
        }
        let alg = row[c_alg].to_owned();
        let group = row[c_group].to_owned();
        if alg.is_empty() {
            return Err(ModelError::EmptyAlgorithmName);
        }
        if group.is_empty() {
            return Err(ModelError::EmptyGroupLabel);
        }
        let a = decode_rate::<T>(&row[c_fmr], RateKind::Fmr, scale, line, c_fmr + 1)?;
        let b = decode_rate::<T>(&row[c_fnmr], RateKind::Fnmr, scale, line, c_fnmr + 1)?;
        let count = match c_count.map(|c| (c, &row[c])) {
            Some((_, "")) | None => {
                any_missing_count = true;
                None
            }
            Some((c, cell)) => {
                any_count = true;
                let n = cell.parse::<u64>().map_err(|_| ModelError::NonNumeric {
                    row: line,
                    column: c + 1,
                    cell: cell.to_owned(),
                })?;
                if n == 0 {
                    return Err(ModelError::ZeroMatedCount(group));
                }
                Some(n)
            }
        };
        if !algorithms.contains(&alg) {
            algorithms.push(alg.clone());
        }
        if !groups.contains(&group) {
            groups.push(group.clone());
        }
        if cells
            .insert((alg.clone(), group.clone()), (a, b, count))
            .is_some()
        {
            return Err(ModelError::DuplicateRow {
                row: line,
                algorithm: alg,
                group,
            });
        }
    }
    if any_count && any_missing_count {
        return Err(ModelError::MissingColumn(
            "mated_count (present for some rows only)".into(),
        ));
    }

    let mut records = Vec::with_capacity(algorithms.len());
    for alg in &algorithms {
        let mut triples = Vec::with_capacity(groups.len());
        let mut counts = Vec::new();
        for g in &groups {
            let &(a, b, c) =
                cells
                    .get(&(alg.clone(), g.clone()))
                    .ok_or_else(|| ModelError::MissingCell {
                        algorithm: alg.clone(),
                        group: g.clone(),
                    })?;
            triples.push((g.clone(), a, b));
            if let Some(c) = c {
                counts.push((g.as_str(), c));
            }
        }
        let mut record = AlgorithmRecord::new(alg.clone(), GroupRates::new(triples)?)?;
        if any_count {
            record = record.with_mated_counts(counts)?;
        }
        records.push(record);
    }
    Dataset::new(records)
}

/// Parses a `group,count` sidecar of mated-comparison counts.
pub fn parse_counts_csv<R: Read>(input: R) -> Result<Vec<(String, u64)>, ModelError> {
    let mut reader = ReaderBuilder::new().trim(Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| ModelError::MissingColumn(name.to_owned()))
    };
    let (c_group, c_count) = (find("group")?, find("count")?);
    let mut out: Vec<(String, u64)> = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = line_of(&row);
        let group = row[c_group].to_owned();
        let cell = &row[c_count];
        let n = cell.parse::<u64>().map_err(|_| ModelError::NonNumeric {
            row: line,
            column: c_count + 1,
            cell: cell.to_owned(),
        })?;
        if out.iter().any(|(g, _)| *g == group) {
            return Err(ModelError::DuplicateGroup(group));
        }
        out.push((group, n));
    }
    Ok(out)
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}

/// Serialises to the wide layout (linear FMR, `fmr:`/`fnmr:` labels).
///
/// Group order follows the first record. Mated counts and threshold notes
/// have no place in this layout and are dropped.
pub fn to_wide_csv<T: Scalar>(d: &Dataset<T>) -> String {
    let mut out = String::from("algorithm");
    for r in d.records() {
        out.push(',');
        out.push_str(&quote(r.name()));
    }
    out.push('\n');
    let labels = d.group_labels();
    for (kind, prefix) in [(RateKind::Fmr, "fmr:"), (RateKind::Fnmr, "fnmr:")] {
        for label in &labels {
            out.push_str(&quote(&format!("{prefix}{label}")));
            for r in d.records() {
                let v = r
                    .rates()
                    .index_of(label)
                    .map(|i| r.rates().rates(kind)[i])
                    .unwrap_or_else(T::nan);
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
    }
    out
}

/// Serialises to the long layout, with a `mated_count` column when every
/// record carries counts.
pub fn to_long_csv<T: Scalar>(d: &Dataset<T>) -> String {
    let with_counts = !d.is_empty() && d.records().iter().all(|r| r.mated_counts().is_some());
    let mut out = String::from("algorithm,group,fmr,fnmr");
    if with_counts {
        out.push_str(",mated_count");
    }
    out.push('\n');
    for r in d.records() {
        for (i, (g, a, b)) in r.rates().iter().enumerate() {
            let _ = write!(out, "{},{},{a},{b}", quote(r.name()), quote(g.as_str()));
            if let (true, Some(c)) = (with_counts, r.mated_counts()) {
                let _ = write!(out, ",{}", c[i]);
            }
            out.push('\n');
        }
    }
    out
}
