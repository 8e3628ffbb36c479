//! Batch execution: rollouts in parallel, one trace file per (scenario, model).

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::export::{trace_to_csv, trace_to_json};
use crate::harness::summary::{render, summarize, SummaryRow};
use crate::planner::Planner;
use crate::rollout::{rollout, MODELS};
use crate::scenarios::ScenarioSpec;

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub scenarios: Vec<ScenarioSpec>,
    pub models: Vec<String>,
    pub out: PathBuf,
    pub jobs: usize,
}

#[derive(Debug, Default)]
pub struct RunReport {
    pub rows: Vec<SummaryRow>,
    pub failures: Vec<(String, String)>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Worker count from `SOCMDP_JOBS`, else the number of CPUs.
pub fn default_jobs() -> usize {
    std::env::var("SOCMDP_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        for m in &self.models {
            if !MODELS.contains(&m.as_str()) {
                return Err(Error::Invalid(format!("unknown model {m:?}")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for s in &self.scenarios {
            if !seen.insert(&s.id) {
                return Err(Error::Invalid(format!("scenario {} listed twice", s.id)));
            }
            s.validate()?;
        }
        if self.jobs == 0 {
            return Err(Error::Invalid("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Run every scenario, write traces and the summary. Scenarios that fail are
/// reported and skipped; the rest still run.
pub fn run(manifest: &RunManifest) -> Result<RunReport> {
    manifest.validate()?;
    std::fs::create_dir_all(&manifest.out)
        .map_err(|source| Error::Io { path: manifest.out.display().to_string(), source })?;

    // Scenarios on the same world share a planner and its table cache.
    let mut planners: HashMap<String, Arc<Planner>> = HashMap::new();
    let mut jobs = Vec::new();
    for spec in &manifest.scenarios {
        let key = format!("{:?}{:?}", spec.grid(), spec.config.key());
        let p = match planners.get(&key) {
            Some(p) => p.clone(),
            None => {
                let p = Arc::new(Planner::new(spec.grid().clone(), spec.config)?);
                planners.insert(key, p.clone());
                p
            }
        };
        jobs.push((spec, p));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(manifest.jobs)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let results: Vec<std::result::Result<(Vec<SummaryRow>, String), (String, String)>> = pool.install(|| {
        jobs.par_iter()
            .map(|(spec, planner)| {
                let one = || -> Result<(Vec<SummaryRow>, String)> {
                    let ep = rollout(planner, spec)?;
                    let mut rows = Vec::new();
                    let mut lines = String::new();
                    for m in &manifest.models {
                        let tr = ep.trace(m).expect("validated model id");
                        write(&manifest.out.join(format!("{}.{m}.json", spec.id)), &trace_to_json(tr)?)?;
                        write(&manifest.out.join(format!("{}.{m}.csv", spec.id)), &trace_to_csv(tr)?)?;
                        rows.push(summarize(tr));
                        lines.push_str(&render(tr));
                    }
                    Ok((rows, lines))
                };
                one().map_err(|e| {
                    log::error!("{} failed: {e}", spec.id);
                    (spec.id.clone(), e.to_string())
                })
            })
            .collect()
    });

    let mut report = RunReport::default();
    let mut sparks = String::new();
    for r in results {
        match r {
            Ok((rows, lines)) => {
                report.rows.extend(rows);
                sparks.push_str(&lines);
            }
            Err(f) => report.failures.push(f),
        }
    }
    write(&manifest.out.join("summary.csv"), &summary_csv(&report.rows)?)?;
    write(&manifest.out.join("summary.txt"), &sparks)?;
    Ok(report)
}

pub fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
