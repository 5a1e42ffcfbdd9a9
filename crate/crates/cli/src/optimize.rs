use anyhow::{bail, Context};
use qgd::experiment::{Case, ExperimentConfig};
use qgd::lcu::{optimize, OptimizeOptions, ResourceEstimate, Trajectory};
use qgd::poly::io::Problem;
use qgd::poly::Point;
use serde_json::json;

use crate::cli::{CaseArg, ExampleArgs, Format, OptimizeArgs};
use crate::output::{emit, emit_summary, json_bytes, read};
use crate::Status;

pub fn load_problem(path: &std::path::Path) -> anyhow::Result<Problem> {
    let text = read(path)?;
    Problem::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `--x0` wins over the file's `x0`; either is renormalised.
pub fn start_point(problem: &Problem, x0: Option<&[f64]>) -> anyhow::Result<Point> {
    match (x0, &problem.x0) {
        (Some(coords), _) => {
            let dim = problem.decomposition.dim();
            if coords.len() != dim {
                bail!("--x0 has {} coordinates, the problem has dimension {dim}", coords.len());
            }
            Ok(Point::normalized(coords.to_vec())?)
        }
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => bail!("no start point: pass --x0 or set x0 in the problem file"),
    }
}

fn trajectory_csv(traj: &Trajectory, dim: usize) -> anyhow::Result<Vec<u8>> {
    let noisy = traj.records.iter().any(|r| r.fidelity.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["iter".to_string()];
    header.extend((1..=dim).map(|i| format!("x{i}")));
    header.extend(["f", "success_prob", "overlap"].map(String::from));
    if noisy {
        header.push("fidelity".into());
    }
    w.write_record(&header)?;

    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut row = |iter: usize, point: &Point, f: f64, prob: Option<f64>, overlap: Option<f64>, fid: Option<f64>| {
        let mut rec = vec![iter.to_string()];
        rec.extend(point.coords().iter().map(f64::to_string));
        rec.extend([f.to_string(), opt(prob), opt(overlap)]);
        if noisy {
            rec.push(opt(fid));
        }
        w.write_record(&rec)
    };
    row(0, &traj.initial, traj.initial_f, None, traj.initial_overlap, None)?;
    for r in &traj.records {
        row(r.iter, &r.point, r.f_value, Some(r.success_prob), r.overlap, r.fidelity)?;
    }
    Ok(w.into_inner()?)
}

pub fn run(args: &OptimizeArgs) -> anyhow::Result<Status> {
    let problem = load_problem(&args.problem)?;
    let x0 = start_point(&problem, args.x0.as_deref())?;
    let decomp = &problem.decomposition;
    let options = OptimizeOptions {
        eta: args.eta,
        threshold: args.threshold,
        max_iters: args.max_iters,
        mode: args.sampling.mode()?,
        noise_eps: args.noise,
        reference: problem.reference.clone(),
    };
    let traj = optimize(decomp, &x0, &options)?;

    let body = match args.output.format {
        Format::Csv => trajectory_csv(&traj, decomp.dim())?,
        Format::Json => json_bytes(&traj)?,
    };
    emit(args.output.out.as_deref(), &body)?;

    let last = traj.records.last();
    let summary = json!({
        "converged": traj.converged,
        "iterations": traj.records.len(),
        "final_point": traj.final_point().coords(),
        "final_f": traj.final_f(),
        "final_overlap": last.and_then(|r| r.overlap),
        "final_success_prob": last.map(|r| r.success_prob),
        "aa_reps_estimate": last.map(|r| r.aa_reps_estimate),
        "resources": ResourceEstimate::new(decomp.num_terms(), decomp.order(), decomp.dim()),
    });
    emit_summary(&args.output, &summary)?;
    Ok(if traj.converged { Status::Converged } else { Status::Exhausted })
}

pub fn example(args: &ExampleArgs) -> anyhow::Result<Status> {
    let config = ExperimentConfig::quartic();
    let case = match args.case {
        CaseArg::S1 => Case::S1,
        CaseArg::S2 => Case::S2,
        CaseArg::Both => bail!("example-problem takes a single case"),
    };
    let problem = Problem {
        decomposition: config.decomposition.clone(),
        x0: Some(config.start(case).clone()),
        reference: Some(config.x_opt.clone()),
    };
    let mut text = problem.to_json();
    text.push('\n');
    emit(args.out.as_deref(), text.as_bytes())?;
    Ok(Status::Converged)
}
