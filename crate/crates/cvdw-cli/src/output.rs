//! Report serialization: versioned JSON, locale-free CSV and TSV dumps.
//! Identical inputs produce byte-identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use cvdw::extremal::{KnotSearch, LagrangeResidual, TaikovReport, VerificationOutcome};
use cvdw::oscillation::CvdReport;
use cvdw::widths::WidthRow;

pub const SCHEMA_VERSION: u32 = 1;

/// One generic report row; unused fields stay empty/zero so the CSV header
/// is stable.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub statement: String,
    pub class: String,
    pub n: u32,
    pub q: String,
    pub trials: usize,
    pub violations: usize,
    pub value: f64,
    pub reference: f64,
    pub defect: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Row {
    pub fn suite(out: &VerificationOutcome) -> Self {
        Row {
            statement: match out.suite.as_str() {
                "comparison" => "comparison-theorem".into(),
                "landau" => "landau-kolmogorov".into(),
                "theorem22" => "integral-majorant".into(),
                "rearrangement" => "rearrangement-domination".into(),
                other => other.into(),
            },
            class: out.class.clone(),
            n: out.n,
            q: String::new(),
            trials: out.trials,
            violations: out.violations,
            value: out.worst_margin,
            reference: 0.0,
            defect: (-out.worst_margin).max(0.0),
            tolerance: out.tolerance,
            detail: out.notes.join("; "),
        }
    }

    pub fn taikov(rep: &TaikovReport) -> Self {
        Row {
            statement: "taikov-inequality".into(),
            class: rep.class.clone(),
            n: rep.n,
            q: format!("{}", rep.q),
            trials: rep.candidates,
            violations: rep.violations,
            value: rep.candidate_sup,
            reference: rep.phi_norm,
            defect: rep.gap.abs(),
            tolerance: rep.tolerance,
            detail: String::new(),
        }
    }

    pub fn cvd(statement: &str, parameter: f64, rep: &CvdReport) -> Self {
        Row {
            statement: statement.into(),
            class: format!("parameter={parameter}"),
            n: 0,
            q: String::new(),
            trials: rep.trials,
            violations: rep.violations.len(),
            value: rep.max_output_count as f64,
            reference: 0.0,
            defect: rep.violations.len() as f64,
            tolerance: 0.0,
            detail: String::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn identity(
        statement: &str,
        class: &str,
        n: u32,
        value: f64,
        reference: f64,
        defect: f64,
        tolerance: f64,
    ) -> Self {
        Row {
            statement: statement.into(),
            class: class.into(),
            n,
            q: String::new(),
            trials: 1,
            violations: usize::from(defect >= tolerance),
            value,
            reference,
            defect,
            tolerance,
            detail: String::new(),
        }
    }

    pub fn knots(
        class: &str,
        n: u32,
        q: String,
        search: &KnotSearch,
        reference: f64,
        residual: &LagrangeResidual,
    ) -> Self {
        Row {
            statement: "knot-optimality".into(),
            class: class.into(),
            n,
            q,
            trials: search.start_values.len(),
            violations: 0,
            value: search.value,
            reference,
            defect: (search.value - reference).abs(),
            tolerance: 1e-4,
            detail: format!(
                "gap_spread={:.3e}; stationarity={:.3e}",
                search.gap_spread,
                residual.stacked_max()
            ),
        }
    }
}

pub struct OutputSink {
    format: Format,
    target: Option<std::path::PathBuf>,
}

enum Format {
    Json,
    Csv,
    Tsv,
}

impl OutputSink {
    pub fn new(format: &str, target: Option<&Path>) -> io::Result<Self> {
        let format = match format {
            "json" => Format::Json,
            "csv" => Format::Csv,
            "tsv" => Format::Tsv,
            other => {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidInput,
                    format!("unknown format '{other}'"),
                ))
            }
        };
        Ok(OutputSink {
            format,
            target: target.map(Path::to_path_buf),
        })
    }

    fn writer(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.target {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }

    pub fn write_width_rows(&self, rows: &[WidthRow]) -> io::Result<()> {
        match self.format {
            Format::Json => self.write_json(rows),
            Format::Csv | Format::Tsv => {
                let sep = self.sep();
                let mut w = self.writer()?;
                writeln!(
                    w,
                    "class{sep}kind{sep}index{sep}q{sep}value{sep}method{sep}defect{sep}tolerance{sep}statement{sep}note"
                )?;
                for r in rows {
                    writeln!(
                        w,
                        "{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}",
                        r.class,
                        r.kind,
                        r.index,
                        r.q,
                        fmt_f64(r.value),
                        r.method,
                        fmt_f64(r.defect),
                        fmt_f64(r.tolerance),
                        r.statement,
                        r.note
                    )?;
                }
                w.flush()
            }
        }
    }

    pub fn write_rows(&self, rows: &[Row]) -> io::Result<()> {
        match self.format {
            Format::Json => self.write_json(rows),
            Format::Csv | Format::Tsv => {
                let sep = self.sep();
                let mut w = self.writer()?;
                writeln!(
                    w,
                    "statement{sep}class{sep}n{sep}q{sep}trials{sep}violations{sep}value{sep}reference{sep}defect{sep}tolerance{sep}detail"
                )?;
                for r in rows {
                    writeln!(
                        w,
                        "{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}",
                        r.statement,
                        r.class,
                        r.n,
                        r.q,
                        r.trials,
                        r.violations,
                        fmt_f64(r.value),
                        fmt_f64(r.reference),
                        fmt_f64(r.defect),
                        fmt_f64(r.tolerance),
                        r.detail
                    )?;
                }
                w.flush()
            }
        }
    }

    pub fn write_samples(&self, samples: &[(f64, f64)]) -> io::Result<()> {
        let mut w = self.writer()?;
        for (t, v) in samples {
            writeln!(w, "{}\t{}", fmt_f64(*t), fmt_f64(*v))?;
        }
        w.flush()
    }

    fn write_json<T: Serialize>(&self, rows: &[T]) -> io::Result<()> {
        let doc = serde_json::json!({
            "schema": SCHEMA_VERSION,
            "rows": rows,
        });
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        w.flush()
    }

    fn sep(&self) -> char {
        match self.format {
            Format::Tsv => '\t',
            _ => ',',
        }
    }
}

/// Deterministic, locale-free float formatting ('.' decimal separator).
fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}
