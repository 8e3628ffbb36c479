//! Per-trace summary rows and ASCII sparklines.

use serde::{Deserialize, Serialize};

use crate::rollout::Trace;
use crate::social::SocialGoal;

/// Accepted as a correct social label for `truth`: at level one conflict and
/// competition are the same reward.
pub fn equivalence_class(truth: SocialGoal, level: u8) -> Vec<SocialGoal> {
    match truth {
        SocialGoal::Conflict | SocialGoal::Competition if level <= 1 => {
            vec![SocialGoal::Conflict, SocialGoal::Competition]
        }
        g => vec![g],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub model: String,
    pub yellow_social: SocialGoal,
    pub red_social: SocialGoal,
    pub red_landmark: String,
    pub steps: usize,
    pub terminated: String,
    pub yellow_steps_to_goal: Option<usize>,
    pub red_steps_to_goal: Option<usize>,
    pub map_social: Option<SocialGoal>,
    pub p_true_social: f64,
    pub p_true_class: f64,
    pub p_true_landmark: f64,
    pub recognized: bool,
}

/// Summary of a trace, computed from the trace alone.
pub fn summarize(trace: &Trace) -> SummaryRow {
    let red = &trace.agents[1];
    let last = trace.steps.last();
    let social_p = |g: SocialGoal| -> f64 {
        last.map_or(0.0, |s| trace.socials.iter().position(|&x| x == g).map_or(0.0, |i| s.posterior_social[i]))
    };
    let p_true_class: f64 = equivalence_class(red.social, red.level).into_iter().map(social_p).sum();
    let map_social = last.map(|s| {
        let mut best = 0;
        for (i, &p) in s.posterior_social.iter().enumerate() {
            if p > s.posterior_social[best] {
                best = i;
            }
        }
        trace.socials[best]
    });
    let p_true_landmark = last.map_or(0.0, |s| {
        trace.landmarks.iter().position(|l| *l == red.landmark).map_or(0.0, |i| s.posterior_physical[i])
    });
    SummaryRow {
        scenario: trace.scenario.clone(),
        model: trace.model.clone(),
        yellow_social: trace.agents[0].social,
        red_social: red.social,
        red_landmark: red.landmark.clone(),
        steps: trace.steps.len(),
        terminated: trace.terminated_reason.name().into(),
        yellow_steps_to_goal: trace.steps_to_goal[0],
        red_steps_to_goal: trace.steps_to_goal[1],
        map_social,
        p_true_social: social_p(red.social),
        p_true_class,
        p_true_landmark,
        recognized: p_true_class >= 0.5,
    }
}

const LEVELS: &[u8] = b" .:-=+*#%@";

/// One character per value in [0, 1].
pub fn sparkline(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| {
            let i = (v.clamp(0.0, 1.0) * (LEVELS.len() - 1) as f64).round() as usize;
            LEVELS[i] as char
        })
        .collect()
}

/// Sparklines of the posterior on red's true social class and landmark.
pub fn render(trace: &Trace) -> String {
    let red = &trace.agents[1];
    let class = equivalence_class(red.social, red.level);
    let social: Vec<f64> = trace
        .steps
        .iter()
        .map(|s| trace.socials.iter().zip(&s.posterior_social).filter(|(g, _)| class.contains(g)).map(|(_, p)| p).sum())
        .collect();
    let li = trace.landmarks.iter().position(|l| *l == red.landmark);
    let goal: Vec<f64> = trace.steps.iter().map(|s| li.map_or(0.0, |i| s.posterior_physical[i])).collect();
    format!(
        "{:<4} {:<16} social {:<11} |{}|\n{:<4} {:<16} goal   {:<11} |{}|\n",
        trace.scenario,
        trace.model,
        red.social.name(),
        sparkline(&social),
        "",
        "",
        red.landmark,
        sparkline(&goal)
    )
}
