use std::path::Path;

use anyhow::{bail, Context};
use nalgebra::DMatrix;
use qgd::mds::{classical_scaling, mds_optimize, quantum_column_step, Configuration, Dissimilarities, MdsOptions, Weights};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::{Format, InitArg, MdsArgs};
use crate::output::{emit, emit_summary, json_bytes, read};
use crate::Status;

type Rows = Vec<Vec<f64>>;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Plain(Vec<Vec<f64>>),
    Bundle {
        delta: Vec<Vec<f64>>,
        #[serde(default)]
        weights: Option<Vec<Vec<f64>>>,
    },
}

fn parse_csv(text: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|v| v.parse::<f64>().with_context(|| format!("row {}: bad number {v:?}", i + 1)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a matrix file, returning any weights bundled alongside.
fn read_matrix(path: &Path) -> anyhow::Result<(Rows, Option<Rows>)> {
    let text = read(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let parsed: MatrixFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(match parsed {
            MatrixFile::Plain(m) => (m, None),
            MatrixFile::Bundle { delta, weights } => (delta, weights),
        })
    } else {
        Ok((parse_csv(&text).with_context(|| format!("parsing {}", path.display()))?, None))
    }
}

fn square(rows: Vec<Vec<f64>>, what: &str) -> anyhow::Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        bail!("{what} must be a non-empty square matrix");
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[derive(Debug, Serialize)]
struct StressRow {
    iter: usize,
    stress: f64,
}

pub fn run(args: &MdsArgs) -> anyhow::Result<Status> {
    let (delta_rows, bundled) = read_matrix(&args.delta)?;
    let delta = Dissimilarities::new(square(delta_rows, "dissimilarity matrix")?)?;
    let n = delta.n();
    let weights = match (&args.weights, bundled) {
        (Some(path), _) => Weights::new(square(read_matrix(path)?.0, "weight matrix")?)?,
        (None, Some(w)) => Weights::new(square(w, "weight matrix")?)?,
        (None, None) => Weights::ones(n),
    };
    let x0 = match &args.x0 {
        Some(path) => Configuration::from_rows(&read_matrix(path)?.0)?,
        None => {
            if args.dims == 0 {
                bail!("--dims must be at least 1");
            }
            match args.init {
                InitArg::Classical => classical_scaling(&delta, args.dims)?,
                InitArg::Random => Configuration::random(n, args.dims, args.seed),
            }
        }
    };

    let demo = args
        .demo_column
        .map(|col| quantum_column_step(&delta, &weights, &x0, col, args.eta))
        .transpose()?;

    let options = MdsOptions {
        eta: args.eta,
        max_iters: args.max_iters,
        tol: args.tol,
    };
    let run = mds_optimize(&delta, &weights, &x0, &options)?;
    let rows: Vec<StressRow> = run
        .steps
        .iter()
        .map(|s| StressRow {
            iter: s.iter,
            stress: s.stress,
        })
        .collect();
    let body = match args.output.format {
        Format::Json => json_bytes(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().context("formatting CSV")?
        }
    };
    emit(args.output.out.as_deref(), &body)?;

    let last = run.final_step();
    if let Some(path) = &args.coords {
        let coords = json!({
            "coordinates": last.config.rows(),
            "stress": last.stress,
            "iterations": last.iter,
            "converged": run.converged,
        });
        emit(Some(path), &json_bytes(&coords)?)?;
    }
    emit_summary(
        &args.output,
        &json!({
            "converged": run.converged,
            "iterations": last.iter,
            "final_stress": last.stress,
            "stress_increases": run.increases,
            "quantum_column": demo,
        }),
    )?;
    Ok(if run.converged { Status::Converged } else { Status::Exhausted })
}
