//! `countshrink fit`: empirical-Bayes fit plus per-observation shrinkage.

use std::time::Instant;

use serde_json::json;

use crate::args::FitArgs;
use crate::ingest::ingest_csv;
use crate::record::{fmt_f64, write_run};
use crate::Failure;

pub fn run(args: &FitArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let cfg = args.prior.to_config();
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let ingested = ingest_csv(&args.input)?;
    let data = &ingested.data;
    let fitted = countshrink::fit(data, &cfg).map_err(|e| Failure::Data(e.to_string()))?;
    let shrunk =
        countshrink::shrink(data, &fitted.params).map_err(|e| Failure::Data(e.to_string()))?;

    let labels = data.labels();
    let exposure = data.exposure();

    let mut header = Vec::new();
    if labels.is_some() {
        header.push("id");
    }
    header.extend(["count", "kappa_mean", "theta_mean", "inclusion"]);
    if exposure.is_some() {
        header.push("rate");
    }

    let rows: Vec<Vec<String>> = (0..data.len())
        .map(|i| {
            let mut row = Vec::with_capacity(header.len());
            if let Some(labels) = labels {
                row.push(labels[i].clone());
            }
            row.push(data.counts()[i].to_string());
            row.push(fmt_f64(shrunk.kappa_mean[i]));
            row.push(fmt_f64(shrunk.theta_mean[i]));
            row.push(fmt_f64(shrunk.inclusion[i]));
            if let Some(n) = exposure {
                row.push(fmt_f64(shrunk.theta_mean[i] / n));
            }
            row
        })
        .collect();

    let config = json!({
        "input": args.input.input.display().to_string(),
        "fit": cfg,
        "exposure": exposure,
    });
    let summary = json!({
        "params": fitted.params,
        "log_marginal": fitted.log_marginal,
        "gamma_at_cap": fitted.gamma_at_cap,
        "n_observations": data.len(),
    });
    write_run(
        "fit",
        &args.out,
        &header,
        &rows,
        Some(ingested.digest),
        config,
        summary,
        started,
    )?;
    Ok(())
}
