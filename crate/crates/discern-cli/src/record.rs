//! Serializable decision records and the bench report.

use rules_catalog::Decision;
use serde::{Deserialize, Serialize};

/// One frame's decision, as printed by `decide` and `run`. In JSON mode each
/// record is one object per line; the `justification` field appears only
/// under `--explain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub scenario: String,
    pub t: u64,
    pub action: String,
    pub suggested: Vec<String>,
    pub latency_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
}

impl DecisionRecord {
    pub fn new(scenario: &str, decision: &Decision, explain: bool) -> DecisionRecord {
        DecisionRecord {
            scenario: scenario.to_string(),
            t: decision.timestamp,
            action: decision.action.to_string(),
            suggested: decision.suggested_actions().iter().map(|a| a.to_string()).collect(),
            latency_ms: decision.latency_ms(),
            justification: explain.then(|| decision.render_justification(None)),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn to_text(&self) -> String {
        let suggested = if self.suggested.is_empty() {
            "none".to_string()
        } else {
            self.suggested.join(", ")
        };
        let mut out = format!(
            "{} t={}: {}  (suggested: {}; {:.2} ms)\n",
            self.scenario, self.t, self.action, suggested, self.latency_ms
        );
        if let Some(justification) = &self.justification {
            out.push_str(justification);
        }
        out
    }
}

/// One environment row of the bench report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub environment: String,
    pub frames: usize,
    pub avg_ms: f64,
    pub max_ms: f64,
}

/// Per-scenario latency detail: one averaged latency per frame, in timestamp
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioLatencies {
    pub scenario: String,
    pub frame_latencies_ms: Vec<f64>,
}

/// The bench report: Table-shaped environment rows plus per-scenario detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub reps: u32,
    pub rows: Vec<BenchRow>,
    pub scenarios: Vec<ScenarioLatencies>,
}

impl BenchReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("environment    frames   avg ms   max ms\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:<14} {:>6} {:>8.2} {:>8.2}\n",
                row.environment, row.frames, row.avg_ms, row.max_ms
            ));
        }
        out.push_str(&format!(
            "\nper-scenario frame latencies (ms, averaged over {} reps):\n",
            self.reps
        ));
        for s in &self.scenarios {
            let joined: Vec<String> =
                s.frame_latencies_ms.iter().map(|v| format!("{v:.2}")).collect();
            out.push_str(&format!("  {}: {}\n", s.scenario, joined.join(", ")));
        }
        out
    }
}
