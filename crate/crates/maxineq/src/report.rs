//! CSV and JSON reports. Floats use Rust's shortest round-trip formatting,
//! so reports are byte-stable for identical inputs.

use std::io::{Read, Write};

use maxineq_core::inequalities::{Outcome, VerificationRecord};
use maxineq_core::markov::{ConditionReport, SpectralMeasure};
use maxineq_core::simulate::{McEstimate, OscillationTable};
use serde_json::{json, Value};

use crate::error::CliResult;

pub const VERIFY_HEADER: [&str; 11] = ["id", "p", "seed", "atoms", "n", "dim", "lhs", "rhs", "ratio", "constant", "pass"];

fn num(x: f64) -> String {
    format!("{x}")
}

/// One row of a verification report. Inspection rows carry no constant and
/// `pass = inspect`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub id: String,
    pub p: f64,
    pub seed: u64,
    pub atoms: usize,
    pub n: usize,
    pub dim: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: Option<f64>,
    pub outcome: Option<Outcome>,
}

impl ReportRow {
    pub fn ratio(&self) -> f64 {
        if self.outcome == Some(Outcome::Skipped) {
            f64::NAN
        } else {
            self.lhs / self.rhs
        }
    }

    pub fn failed(&self) -> bool {
        self.outcome == Some(Outcome::Fail)
    }

    fn fields(&self) -> [String; 11] {
        [
            self.id.clone(),
            num(self.p),
            self.seed.to_string(),
            self.atoms.to_string(),
            self.n.to_string(),
            self.dim.to_string(),
            num(self.lhs),
            num(self.rhs),
            num(self.ratio()),
            self.constant.map(num).unwrap_or_default(),
            self.outcome.map_or("inspect", Outcome::as_str).to_string(),
        ]
    }
}

impl From<&VerificationRecord> for ReportRow {
    fn from(r: &VerificationRecord) -> Self {
        Self {
            id: r.id.as_str().to_string(),
            p: r.p,
            seed: r.instance.seed,
            atoms: r.instance.size,
            n: r.instance.n,
            dim: r.instance.dim,
            lhs: r.lhs,
            rhs: r.rhs,
            constant: Some(r.constant),
            outcome: Some(r.outcome),
        }
    }
}

pub fn write_verify_csv<W: Write>(out: W, rows: &[ReportRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(VERIFY_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_spectrum_csv<W: Write>(out: W, sm: &SpectralMeasure) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "mass"])?;
    for atom in sm.atoms() {
        w.write_record([num(atom.lambda), num(atom.mass)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `trial,k,T_k` for `k = 1..`; `paths[t][k-1] = T_k`.
pub fn write_trajectories_csv<W: Write>(out: W, paths: &[Vec<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "k", "T_k"])?;
    for (t, path) in paths.iter().enumerate() {
        for (k, v) in path.iter().enumerate() {
            w.write_record([t.to_string(), (k + 1).to_string(), num(*v)])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_diagnostics_csv<W: Write>(out: W, table: &OscillationTable) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["checkpoint", "median_osc", "q95_osc"])?;
    for row in &table.rows {
        w.write_record([row.checkpoint.to_string(), num(row.median), num(row.q95)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_mc_csv<W: Write>(out: W, n: usize, est: &McEstimate) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "trials", "estimate", "standard_error"])?;
    w.write_record([n.to_string(), est.trials.to_string(), num(est.estimate), num(est.standard_error)])?;
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// JSON number (negative zero normalized), or the string `"inf"` for an
/// infinite quantity.
fn extended(x: f64) -> Value {
    if x.is_finite() {
        json!(x + 0.0)
    } else {
        json!(num(x))
    }
}

pub fn condition_report_json(r: &ConditionReport) -> Value {
    json!({
        "a_bounded": r.a_bounded,
        "b_bounded": r.b_bounded,
        "c_finite": r.c_finite,
        "d_finite": r.d_finite,
        "e_member": r.e_member,
        "all_agree": r.all_agree(),
        "diagnostics": {
            "a_partial_sums": r.a_partial_sums.iter().map(|&(n, s)| json!([n, extended(s)])).collect::<Vec<_>>(),
            "b_sup": extended(r.b_sup),
            "b_bound": extended(r.b_bound),
            "c_sigma2": extended(r.c_sigma2),
            "c_sigma2_integral": extended(r.c_sigma2_integral),
            "d_integral": extended(r.d_integral),
            "e_kernel_mass": extended(r.e_kernel_mass),
            "unit_mass": extended(r.unit_mass),
            "components": r.components,
        }
    })
}

/// Converts a CSV report into gnuplot data: a `#` header line, whitespace
/// separated columns, and a double blank line between groups whenever the
/// first column (`id`, `trial`) changes.
pub fn csv_to_gnuplot<R: Read, W: Write>(input: R, mut out: W) -> CliResult<usize> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let grouped = matches!(headers.get(0), Some("id") | Some("trial"));
    writeln!(out, "# {}", headers.iter().collect::<Vec<_>>().join(" ")).map_err(csv::Error::from)?;
    let mut previous: Option<String> = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        let key = record.get(0).unwrap_or_default().to_string();
        if grouped && previous.as_ref().is_some_and(|p| *p != key) {
            writeln!(out, "\n").map_err(csv::Error::from)?;
        }
        let fields: Vec<&str> = record.iter().map(|f| if f.is_empty() { "NaN" } else { f }).collect();
        writeln!(out, "{}", fields.join(" ")).map_err(csv::Error::from)?;
        previous = Some(key);
        rows += 1;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(rows)
}
