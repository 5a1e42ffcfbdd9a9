use std::thread;

use anyhow::Context;
use qgd::experiment::{run_case, write_csv, CaseRun, ExperimentConfig};
use serde_json::json;

use crate::cli::{Format, ReproArgs};
use crate::output::{emit, emit_summary, json_bytes};
use crate::Status;

pub fn run(args: &ReproArgs) -> anyhow::Result<Status> {
    let mut config = ExperimentConfig::quartic();
    if let Some(eta) = args.eta {
        config.eta = eta;
    }
    if let Some(t) = args.threshold {
        config.threshold = t;
    }
    if let Some(n) = args.max_iters {
        config.max_iters = n;
    }
    let mode = args.sampling.mode()?;
    let cases = args.case.cases();
    let one = |case| run_case(&config, case, mode.reseeded(case.index()), args.noise);

    let runs: Vec<CaseRun> = if args.parallel {
        thread::scope(|s| {
            let handles: Vec<_> = cases.iter().map(|&c| s.spawn(move || one(c))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("case thread panicked"))
                .collect::<Result<_, _>>()
        })?
    } else {
        cases.iter().map(|&c| one(c)).collect::<Result<_, _>>()?
    };

    let body = match args.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &runs).context("formatting CSV")?;
            buf
        }
        Format::Json => json_bytes(&runs)?,
    };
    emit(args.output.out.as_deref(), &body)?;

    let summary: Vec<_> = runs
        .iter()
        .map(|r| {
            json!({
                "case": r.case.to_string(),
                "converged": r.converged,
                "iterations": r.records.len() - 1,
                "overlaps": r.records.iter().map(|x| x.overlap).collect::<Vec<_>>(),
                "final_point": r.final_record().point.coords(),
                "final_f": r.final_record().f_value,
            })
        })
        .collect();
    emit_summary(&args.output, &summary)?;
    Ok(if runs.iter().all(|r| r.converged) {
        Status::Converged
    } else {
        Status::Exhausted
    })
}
