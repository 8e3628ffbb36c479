//! Trace serialization.

use crate::error::Result;
use crate::rollout::Trace;
use crate::scenarios::AGENT_NAMES;

pub fn trace_to_json(trace: &Trace) -> Result<String> {
    let mut s = serde_json::to_string_pretty(trace)?;
    s.push('\n');
    Ok(s)
}

pub fn trace_from_json(text: &str) -> Result<Trace> {
    Ok(serde_json::from_str(text)?)
}

pub fn csv_header(trace: &Trace) -> Vec<String> {
    let mut h: Vec<String> = ["t", "agent", "action", "reward"].iter().map(|s| s.to_string()).collect();
    h.extend(trace.landmarks.iter().map(|l| format!("p_goal_{l}")));
    h.extend(trace.socials.iter().map(|x| format!("p_social_{}", x.name())));
    h
}

/// One row per (timestep, agent). Both rows of a timestep carry the
/// observer's posterior after that step.
pub fn trace_to_csv(trace: &Trace) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(trace))?;
    for step in &trace.steps {
        for (k, name) in AGENT_NAMES.iter().enumerate() {
            let mut row = vec![
                step.t.to_string(),
                name.to_string(),
                step.joint[k].name().to_string(),
                step.rewards[k].total.to_string(),
            ];
            row.extend(step.posterior_physical.iter().map(|p| format!("{p:.6}")));
            row.extend(step.posterior_social.iter().map(|p| format!("{p:.6}")));
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
