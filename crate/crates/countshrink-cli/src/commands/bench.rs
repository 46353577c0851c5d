//! `countshrink bench`: wall-clock timing of each estimation pipeline on a
//! seeded synthetic sparse panel.

use std::time::Instant;

use countshrink::estimators::{global_gamma, kw_npmle, kw_posterior_mean, robbins, zip_bayes};
use countshrink::sim::{gen_sparse_t3, suite_fit_config, SignalKind, SimConfig};
use countshrink::{CountDataset, FitConfig};
use serde_json::json;

use crate::args::BenchArgs;
use crate::record::{fmt_f64, write_run};
use crate::Failure;

/// Panel sparsity; matches the densest risk-experiment scenario.
const OMEGA: f64 = 0.2;

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let started = Instant::now();
    if args.reps == 0 {
        return Err(Failure::Usage("--reps must be at least 1".to_string()));
    }
    let mut cfg = SimConfig::new(args.n, OMEGA, args.seed, SignalKind::FoldedT3)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    cfg.replications = args.reps;

    // One dataset per repetition, generated up front so only estimation is
    // inside the timed region.
    let panels: Vec<CountDataset> = (0..args.reps)
        .map(|rep| CountDataset::new(gen_sparse_t3(&cfg, rep).1))
        .collect();

    let header = vec!["pipeline", "n", "reps", "total_ms", "mean_ms"];
    let mut rows = Vec::new();
    let mut time_pipeline =
        |name: &str, f: &mut dyn FnMut(&CountDataset) -> Result<(), String>| {
            let t0 = Instant::now();
            for panel in &panels {
                if let Err(msg) = f(panel) {
                    return Err(Failure::Data(format!("pipeline {name} failed: {msg}")));
                }
            }
            let total = t0.elapsed().as_secs_f64() * 1e3;
            rows.push(vec![
                name.to_string(),
                args.n.to_string(),
                args.reps.to_string(),
                fmt_f64(total),
                fmt_f64(total / args.reps as f64),
            ]);
            Ok(())
        };

    time_pipeline("gh_fit_shrink", &mut |panel| {
        let fitted = countshrink::fit(panel, &suite_fit_config()).map_err(|e| e.to_string())?;
        countshrink::shrink(panel, &fitted.params).map_err(|e| e.to_string())?;
        Ok(())
    })?;
    time_pipeline("hs_fit_shrink", &mut |panel| {
        let cfg = FitConfig {
            gamma_range: (1.0, 1.0),
            ..suite_fit_config()
        };
        let fitted = countshrink::fit(panel, &cfg).map_err(|e| e.to_string())?;
        countshrink::shrink(panel, &fitted.params).map_err(|e| e.to_string())?;
        Ok(())
    })?;
    time_pipeline("kw_npmle", &mut |panel| {
        let sol = kw_npmle(panel, 300, 1e-8, 2000).map_err(|e| e.to_string())?;
        for &y in panel.counts() {
            std::hint::black_box(kw_posterior_mean(&sol, y));
        }
        Ok(())
    })?;
    time_pipeline("robbins", &mut |panel| {
        robbins(panel).map(|_| ()).map_err(|e| e.to_string())
    })?;
    time_pipeline("global_gamma", &mut |panel| {
        global_gamma(panel).map(|_| ()).map_err(|e| e.to_string())
    })?;
    time_pipeline("zip_bayes", &mut |panel| {
        zip_bayes(panel).map(|_| ()).map_err(|e| e.to_string())
    })?;

    let config = json!({
        "n": args.n,
        "omega": OMEGA,
        "seed": args.seed,
        "reps": args.reps,
    });
    let summary = json!({
        "pipelines": rows.len(),
    });
    write_run("bench", &args.out, &header, &rows, None, config, summary, started)?;
    Ok(())
}
