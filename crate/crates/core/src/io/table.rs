//! Tabular output: CSV for plotting tools, JSON with full metadata.
//!
//! CSV has a header row and one row per time sample. For every curve `L`
//! the columns `L:re_c1`, `L:im_c1`, `L:re_c2`, `L:im_c2` and
//! `L:concurrence` follow the leading `t` column. Numbers are written with
//! 17 significant digits, which round-trips every `f64`.

use serde::{Deserialize, Serialize};

use super::CODE_VERSION;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::OracleConfig;
use crate::scenarios::{
    CurveFailure, CurveSet, Engine, Param, Reducer, SweepRow, SweepTable, TimeWindow,
};
use crate::trajectory::Source;

use super::config::Format;

pub const CURVE_COLUMNS: [&str; 5] = ["re_c1", "im_c1", "re_c2", "im_c2", "concurrence"];

/// JSON representation of a [`CurveSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub version: String,
    pub name: String,
    pub description: String,
    pub engine: Engine,
    pub varied: Option<Param>,
    pub t_window: TimeWindow,
    pub solver: OracleConfig,
    pub times: Vec<f64>,
    pub curves: Vec<CurveColumns>,
    pub failures: Vec<CurveFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveColumns {
    pub label: String,
    pub value: Option<f64>,
    pub params: ModelParams,
    pub source: Source,
    pub re_c1: Vec<f64>,
    pub im_c1: Vec<f64>,
    pub re_c2: Vec<f64>,
    pub im_c2: Vec<f64>,
    pub concurrence: Vec<f64>,
}

impl CurveColumns {
    /// Columns in [`CURVE_COLUMNS`] order.
    pub fn columns(&self) -> [&[f64]; 5] {
        [
            &self.re_c1,
            &self.im_c1,
            &self.re_c2,
            &self.im_c2,
            &self.concurrence,
        ]
    }
}

impl TableDocument {
    pub fn from_curves(set: &CurveSet) -> Self {
        let curves = set
            .curves
            .iter()
            .map(|c| {
                let t = &c.trajectory;
                CurveColumns {
                    label: c.label.clone(),
                    value: c.value,
                    params: c.params,
                    source: t.source,
                    re_c1: t.c1.iter().map(|z| z.re).collect(),
                    im_c1: t.c1.iter().map(|z| z.im).collect(),
                    re_c2: t.c2.iter().map(|z| z.re).collect(),
                    im_c2: t.c2.iter().map(|z| z.im).collect(),
                    concurrence: c.concurrence.clone(),
                }
            })
            .collect();
        Self {
            version: CODE_VERSION.to_string(),
            name: set.name.clone(),
            description: set.description.clone(),
            engine: set.engine,
            varied: set.varied,
            t_window: set.t_window,
            solver: set.solver,
            times: set.times.clone(),
            curves,
            failures: set.failures.clone(),
        }
    }
}

fn check_shared_grid(set: &CurveSet) -> Result<()> {
    if set.curves.is_empty() {
        return Err(Error::Numeric(format!(
            "curve set `{}` has no successful curves",
            set.name
        )));
    }
    for c in &set.curves {
        if c.trajectory.times != set.times || c.concurrence.len() != set.times.len() {
            return Err(Error::Numeric(format!(
                "curve `{}` is not sampled on the shared time grid",
                c.label
            )));
        }
    }
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Numeric(format!("csv: {e}"))
}

/// Serializes a curve set as CSV or JSON. SVG goes through
/// [`super::emit_plot`].
pub fn emit_table(set: &CurveSet, format: Format) -> Result<Vec<u8>> {
    check_shared_grid(set)?;
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&TableDocument::from_curves(set))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let doc = TableDocument::from_curves(set);
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["t".to_string()];
            for c in &doc.curves {
                header.extend(CURVE_COLUMNS.iter().map(|col| format!("{}:{col}", c.label)));
            }
            w.write_record(&header).map_err(csv_error)?;
            for (i, &t) in doc.times.iter().enumerate() {
                let mut row = vec![num(t)];
                for c in &doc.curves {
                    row.extend(c.columns().iter().map(|col| num(col[i])));
                }
                w.write_record(&row).map_err(csv_error)?;
            }
            w.into_inner()
                .map_err(|e| Error::Numeric(format!("csv: {e}")))
        }
        Format::Svg => Err(Error::Config(
            "SVG output is produced by the plot emitter, not the table emitter".into(),
        )),
    }
}

/// Parses a document written by [`emit_table`] in JSON format.
pub fn parse_json_table(bytes: &[u8]) -> Result<TableDocument> {
    Ok(serde_json::from_slice(bytes)?)
}

/// A CSV table read back column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }
}

/// Parses a CSV table of numbers with a header row.
pub fn parse_csv_table(bytes: &[u8]) -> Result<CsvTable> {
    let mut r = csv::Reader::from_reader(bytes);
    let header: Vec<String> = r
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        for (col, field) in columns.iter_mut().zip(rec.iter()) {
            let v = field
                .parse::<f64>()
                .map_err(|e| Error::Numeric(format!("csv row {}: `{field}`: {e}", line + 2)))?;
            col.push(v);
        }
    }
    Ok(CsvTable { header, columns })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDocument {
    pub version: String,
    pub axes: Vec<Param>,
    pub reduce: Reducer,
    pub engine: Engine,
    pub t_window: TimeWindow,
    pub base: ModelParams,
    pub solver: OracleConfig,
    pub rows: Vec<SweepRow>,
}

/// Serializes a sweep table. CSV columns are the axis names, the reduced
/// value (empty on failure) and the failure reason.
pub fn emit_sweep(table: &SweepTable, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let doc = SweepDocument {
                version: CODE_VERSION.to_string(),
                axes: table.axes.clone(),
                reduce: table.reduce,
                engine: table.engine,
                t_window: table.t_window,
                base: table.base,
                solver: table.solver,
                rows: table.rows.clone(),
            };
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<String> = table.axes.iter().map(|p| p.name().to_string()).collect();
            header.push(table.reduce.name().to_string());
            header.push("error".into());
            w.write_record(&header).map_err(csv_error)?;
            for row in &table.rows {
                let mut rec: Vec<String> = row.coords.iter().map(|&v| num(v)).collect();
                rec.push(row.value.map(num).unwrap_or_default());
                rec.push(row.error.clone().unwrap_or_default());
                w.write_record(&rec).map_err(csv_error)?;
            }
            w.into_inner()
                .map_err(|e| Error::Numeric(format!("csv: {e}")))
        }
        Format::Svg => Err(Error::Config(
            "sweep results are tabular; choose csv or json".into(),
        )),
    }
}
