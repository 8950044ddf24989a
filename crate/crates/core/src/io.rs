//! File formats: CSV for graphs, coordinates, signals, eigenbases and
//! spectra; JSON for models and reports.
//!
//! Signals are `vertices x time` matrices. A signal CSV may be a bare
//! numeric matrix, or carry a header row; when the header's first column
//! is `id`, the first column holds vertex identifiers and rows are
//! reordered by ascending id.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::eval::ForecastReport;
use crate::graph::{Edge, Graph};
use crate::spectral::{EigenBasis, JointSpectrum, TimeVertexSignal};

fn parse_f64(field: &str, context: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{context}: cannot parse '{field}' as a number")))
}

fn parse_usize(field: &str, context: &str) -> Result<usize> {
    field
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("{context}: cannot parse '{field}' as an index")))
}

/// Read an edge-list CSV with header `i,j,w`. The vertex count is taken
/// as one past the largest endpoint.
pub fn load_graph(path: &Path) -> Result<Graph> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    {
        let headers = reader.headers()?;
        let names: Vec<String> = headers.iter().map(|h| h.trim().to_lowercase()).collect();
        if names.len() < 3 || names[0] != "i" || names[1] != "j" || names[2] != "w" {
            return Err(Error::Parse(format!(
                "graph CSV must start with header 'i,j,w', got '{}'",
                names.join(",")
            )));
        }
    }
    let mut edges = Vec::new();
    let mut n = 0usize;
    for record in reader.records() {
        let record = record?;
        let i = parse_usize(&record[0], "graph CSV column i")?;
        let j = parse_usize(&record[1], "graph CSV column j")?;
        let weight = parse_f64(&record[2], "graph CSV column w")?;
        n = n.max(i + 1).max(j + 1);
        edges.push(Edge { i, j, weight });
    }
    Graph::new(n, edges, None)
}

/// Write a graph as an `i,j,w` edge list.
pub fn save_graph(path: &Path, graph: &Graph) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["i", "j", "w"])?;
    for e in graph.edges() {
        writer.write_record([e.i.to_string(), e.j.to_string(), format!("{:.17e}", e.weight)])?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a coordinates CSV with header `id,x,y[,z]`; rows are ordered by
/// ascending id and ids must be unique.
pub fn load_coords(path: &Path) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let dims = {
        let headers = reader.headers()?;
        let names: Vec<String> = headers.iter().map(|h| h.trim().to_lowercase()).collect();
        if names.len() < 3 || names[0] != "id" || names[1] != "x" || names[2] != "y" {
            return Err(Error::Parse(format!(
                "coordinates CSV must start with header 'id,x,y[,z]', got '{}'",
                names.join(",")
            )));
        }
        names.len() - 1
    };
    let mut rows: Vec<(u64, Vec<f64>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let id = record[0]
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("coordinate id '{}' is not an integer", &record[0])))?;
        let mut point = Vec::with_capacity(dims);
        for d in 0..dims {
            point.push(parse_f64(&record[d + 1], "coordinates CSV")?);
        }
        rows.push((id, point));
    }
    rows.sort_by_key(|(id, _)| *id);
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse("duplicate coordinate ids".into()));
    }
    let n = rows.len();
    let mut coords = Array2::<f64>::zeros((n, dims));
    for (r, (_, point)) in rows.into_iter().enumerate() {
        for (d, v) in point.into_iter().enumerate() {
            coords[[r, d]] = v;
        }
    }
    Ok(coords)
}

pub fn save_coords(path: &Path, coords: &Array2<f64>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec!["id".to_string(), "x".to_string(), "y".to_string()];
    if coords.ncols() > 2 {
        header.push("z".to_string());
    }
    writer.write_record(&header)?;
    for (id, row) in coords.rows().into_iter().enumerate() {
        let mut record = vec![id.to_string()];
        record.extend(row.iter().map(|v| format!("{v:.17e}")));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// A signal read from disk, with the number of missing cells that were
/// filled by interpolation along the time axis.
#[derive(Debug)]
pub struct LoadedSignal {
    pub signal: TimeVertexSignal,
    pub interpolated: usize,
}

/// Fill missing values in place by linear interpolation along time;
/// missing runs at either end take the nearest observed value. Errors
/// when a whole row is missing. Returns the number of cells filled.
fn interpolate_row(row: &mut [Option<f64>], index: usize) -> Result<usize> {
    let observed: Vec<usize> = row
        .iter()
        .enumerate()
        .filter_map(|(t, v)| v.is_some().then_some(t))
        .collect();
    if observed.is_empty() {
        return Err(Error::Parse(format!(
            "signal row {index} has no observed values to interpolate from"
        )));
    }
    let mut filled = 0usize;
    for t in 0..row.len() {
        if row[t].is_some() {
            continue;
        }
        let after = observed.iter().find(|&&o| o > t);
        let before = observed.iter().rev().find(|&&o| o < t);
        row[t] = Some(match (before, after) {
            (Some(&b), Some(&a)) => {
                let frac = (t - b) as f64 / (a - b) as f64;
                row[b].unwrap() * (1.0 - frac) + row[a].unwrap() * frac
            }
            (Some(&b), None) => row[b].unwrap(),
            (None, Some(&a)) => row[a].unwrap(),
            (None, None) => unreachable!("observed is non-empty"),
        });
        filled += 1;
    }
    Ok(filled)
}

/// Read a signal CSV. A bare numeric matrix is `vertices x time`; an
/// optional header row is detected by a non-numeric first row, and a
/// header starting with `id` marks an id column used to order the rows.
/// Empty or `nan` cells count as missing and are linearly interpolated
/// along time.
pub fn load_signal_counting(path: &Path) -> Result<LoadedSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_path(path)?;
    let mut records: Vec<csv::StringRecord> = Vec::new();
    for record in reader.records() {
        records.push(record?);
    }
    if records.is_empty() {
        return Err(Error::Parse("signal CSV is empty".into()));
    }
    let is_value = |field: &str| {
        let f = field.trim();
        f.is_empty() || f.eq_ignore_ascii_case("nan") || f.parse::<f64>().is_ok()
    };
    let first_is_header = records[0].iter().any(|field| !is_value(field));
    let has_ids = first_is_header
        && records[0]
            .get(0)
            .map(|f| f.trim().eq_ignore_ascii_case("id"))
            .unwrap_or(false);
    let data_rows = if first_is_header { &records[1..] } else { &records[..] };
    if data_rows.is_empty() {
        return Err(Error::Parse("signal CSV has a header but no data".into()));
    }

    let value_offset = usize::from(has_ids);
    let t_len = data_rows[0].len() - value_offset;
    let mut rows: Vec<(u64, Vec<Option<f64>>)> = Vec::with_capacity(data_rows.len());
    for (r, record) in data_rows.iter().enumerate() {
        if record.len() != t_len + value_offset {
            return Err(Error::Parse(format!(
                "signal CSV row {r} has {} fields, expected {}",
                record.len(),
                t_len + value_offset
            )));
        }
        let id = if has_ids {
            record[0]
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("signal id '{}' is not an integer", &record[0])))?
        } else {
            r as u64
        };
        let mut values = Vec::with_capacity(t_len);
        for field in record.iter().skip(value_offset) {
            let f = field.trim();
            if f.is_empty() || f.eq_ignore_ascii_case("nan") {
                values.push(None);
            } else {
                values.push(Some(parse_f64(f, "signal CSV")?));
            }
        }
        rows.push((id, values));
    }
    rows.sort_by_key(|(id, _)| *id);
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse("duplicate signal row ids".into()));
    }
    let n = rows.len();
    let mut interpolated = 0usize;
    let mut values = Array2::<f64>::zeros((n, t_len));
    for (r, (_, mut row)) in rows.into_iter().enumerate() {
        interpolated += interpolate_row(&mut row, r)?;
        for (t, v) in row.into_iter().enumerate() {
            values[[r, t]] = v.unwrap();
        }
    }
    Ok(LoadedSignal {
        signal: TimeVertexSignal::new(values)?,
        interpolated,
    })
}

/// [`load_signal_counting`] without the interpolation count.
pub fn load_signal(path: &Path) -> Result<TimeVertexSignal> {
    Ok(load_signal_counting(path)?.signal)
}

/// Write a signal as a bare numeric matrix, one row per vertex.
pub fn save_signal(path: &Path, signal: &TimeVertexSignal) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in signal.values().rows() {
        let record: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Write an eigenbasis: row `n` holds `lambda_n` followed by the entries
/// of eigenvector `n`.
pub fn save_basis(path: &Path, basis: &EigenBasis) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let n = basis.dim();
    for f in 0..n {
        let mut record = vec![format!("{:.17e}", basis.eigenvalues()[f])];
        for i in 0..n {
            record.push(format!("{:.17e}", basis.eigenvectors()[[i, f]]));
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn load_basis(path: &Path) -> Result<EigenBasis> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut eigenvalues: Vec<f64> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        eigenvalues.push(parse_f64(&record[0], "basis CSV")?);
        let mut column = Vec::with_capacity(record.len() - 1);
        for field in record.iter().skip(1) {
            column.push(parse_f64(field, "basis CSV")?);
        }
        columns.push(column);
    }
    let n = eigenvalues.len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Parse(format!(
            "basis CSV must be {n} rows of 1 + {n} values"
        )));
    }
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (f, column) in columns.into_iter().enumerate() {
        for (i, v) in column.into_iter().enumerate() {
            vectors[[i, f]] = v;
        }
    }
    EigenBasis::from_parts(Array1::from_vec(eigenvalues), vectors)
}

/// Export joint spectral coefficients as `n,tau,re,im` rows.
pub fn save_spectrum(path: &Path, spectrum: &JointSpectrum) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["n", "tau", "re", "im"])?;
    for n in 0..spectrum.vertex_count() {
        for tau in 0..spectrum.time_len() {
            let c = spectrum.coefficients()[[n, tau]];
            writer.write_record([
                n.to_string(),
                tau.to_string(),
                format!("{:.17e}", c.re),
                format!("{:.17e}", c.im),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Export a JPSD as `n,tau,h` rows.
pub fn save_jpsd(path: &Path, jpsd: &crate::baselines::Jpsd) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["n", "tau", "h"])?;
    for n in 0..jpsd.vertex_count() {
        for tau in 0..jpsd.window_len() {
            writer.write_record([
                n.to_string(),
                tau.to_string(),
                format!("{:.17e}", jpsd.values()[[n, tau]]),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn load_jpsd(path: &Path) -> Result<crate::baselines::Jpsd> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut n_max = 0usize;
    let mut tau_max = 0usize;
    for record in reader.records() {
        let record = record?;
        let n = parse_usize(&record[0], "JPSD CSV column n")?;
        let tau = parse_usize(&record[1], "JPSD CSV column tau")?;
        let h = parse_f64(&record[2], "JPSD CSV column h")?;
        n_max = n_max.max(n + 1);
        tau_max = tau_max.max(tau + 1);
        entries.push((n, tau, h));
    }
    if entries.len() != n_max * tau_max {
        return Err(Error::Parse(format!(
            "JPSD CSV has {} entries for a {n_max} x {tau_max} grid",
            entries.len()
        )));
    }
    let mut h = Array2::<f64>::zeros((n_max, tau_max));
    for (n, tau, v) in entries {
        h[[n, tau]] = v;
    }
    crate::baselines::Jpsd::new(h)
}

/// Forecast matrix writer: one row per vertex, one column per step.
pub fn save_forecast(path: &Path, forecast: &Array2<f64>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in forecast.rows() {
        let record: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Per-step summary CSV for plotting: `k,median,mean,std,count,skipped`.
pub fn save_report_csv(path: &Path, report: &ForecastReport) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["k", "median", "mean", "std", "count", "skipped"])?;
    for step in &report.steps {
        writer.write_record([
            step.k.to_string(),
            format!("{:.9e}", step.median),
            format!("{:.9e}", step.mean),
            format!("{:.9e}", step.std),
            step.count.to_string(),
            step.skipped.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn save_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}
