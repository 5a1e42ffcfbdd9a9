use anyhow::Context;
use qgd::lcu::{estimate_b, Mode};
use qgd::poly::io::Problem;
use serde::Serialize;

use crate::cli::{CoeffArgs, Format};
use crate::optimize::{load_problem, start_point};
use crate::output::{emit, json_bytes};
use crate::Status;

/// One flattened factor `m = α·p + j`.
#[derive(Debug, Serialize)]
struct Row {
    m: usize,
    alpha: usize,
    j: usize,
    factor: String,
    b_exact: f64,
    b_sampled: Option<f64>,
    shots: Option<u64>,
    /// `|b̂² − b²|` against the four-sigma binomial bound.
    abs_dev_sq: Option<f64>,
    four_sigma: Option<f64>,
    big_m: f64,
    c: f64,
    beta: f64,
}

fn table(problem: &Problem, args: &CoeffArgs) -> anyhow::Result<Vec<Row>> {
    let decomp = &problem.decomposition;
    let x = start_point(problem, args.x0.as_deref())?;
    let coeffs = decomp.coefficients(&x)?;
    if !(args.eta > 0.0) {
        anyhow::bail!("--eta must be positive");
    }
    let beta = 1.0 + args.eta * (coeffs.total_weight - 1.0);
    let mode = args.sampling.mode()?;
    let sampled = match mode {
        Mode::Exact => None,
        Mode::Sampled { .. } => Some(estimate_b(decomp, &x, mode)?),
    };
    let p = decomp.order();
    let mut rows = Vec::new();
    for (m, factor) in decomp.flat_factors().enumerate() {
        let (alpha, j) = (m / p, m % p);
        let b = coeffs.b[alpha][j];
        let branch = sampled.as_ref().map(|s| (s.values[alpha][j], s.branches.as_ref().expect("sampled")[m]));
        let q = b * b;
        rows.push(Row {
            m,
            alpha,
            j,
            factor: factor.pauli_label().map_or_else(|| "dense".to_string(), str::to_string),
            b_exact: b,
            b_sampled: branch.map(|(v, _)| v),
            shots: branch.map(|(_, c)| c.shots),
            abs_dev_sq: branch.map(|(_, c)| (c.frequency() - q).abs()),
            four_sigma: branch.map(|(_, c)| 4.0 * ((q * (1.0 - q)).max(0.0) / c.shots as f64).sqrt()),
            big_m: coeffs.big_m[alpha],
            c: coeffs.c[m],
            beta,
        });
    }
    Ok(rows)
}

pub fn run(args: &CoeffArgs) -> anyhow::Result<Status> {
    let problem = load_problem(&args.problem)?;
    let rows = table(&problem, args)?;
    let body = match args.format {
        Format::Json => json_bytes(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().context("formatting CSV")?
        }
    };
    emit(args.out.as_deref(), &body)?;
    Ok(Status::Converged)
}
