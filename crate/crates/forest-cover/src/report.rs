//! Machine-readable run reports.
//!
//! One JSON document per run with a fixed, versioned field set
//! (deserialization rejects unknown fields). Optional fields are omitted
//! when absent rather than serialized as null, and every numeric field is
//! checked finite before emission.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InstanceInfo {
    /// "fc" or "bfc".
    pub kind: String,
    pub vertices: usize,
    pub edges: usize,
    /// File path or generator descriptor.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportDiagnostics {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lp_solves: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cuts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub experiments_requested: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub experiments_run: Option<usize>,
    /// Present and true when the experiment cap truncated the run; the
    /// result is then labeled heuristic rather than proven.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cap_hit: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_dual_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selected_experiment: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selected_experiment_objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trees: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wi_before_removal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wi_after_removal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub valid: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchSummary {
    pub trials: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// What the ratios were measured against, e.g. "exact-fc".
    pub reference: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema_version: u32,
    pub method: String,
    pub instance: InstanceInfo,
    /// Weighted index for FC methods, tree count for BFC, max ratio for
    /// bench runs.
    pub objective: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio_vs_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(default)]
    pub diagnostics: ReportDiagnostics,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bench: Option<BenchSummary>,
}

impl RunReport {
    pub fn new(method: &str, instance: InstanceInfo, objective: f64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            method: method.to_string(),
            instance,
            objective,
            lower_bound: None,
            ratio_vs_bound: None,
            seed: None,
            epsilon: None,
            lambda: None,
            timings_ms: BTreeMap::new(),
            diagnostics: ReportDiagnostics::default(),
            bench: None,
        }
    }

    /// Set the lower bound and the derived ratio in one step.
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.lower_bound = Some(bound);
        self.ratio_vs_bound = Some(if bound > 0.0 {
            self.objective / bound
        } else {
            1.0
        });
        self
    }

    /// Every numeric field must be finite before the report is emitted.
    pub fn validate(&self) -> Result<()> {
        let mut numbers = vec![self.objective];
        numbers.extend(self.lower_bound);
        numbers.extend(self.ratio_vs_bound);
        numbers.extend(self.epsilon);
        numbers.extend(self.lambda);
        numbers.extend(self.timings_ms.values());
        let d = &self.diagnostics;
        numbers.extend(d.mean_dual_bound);
        numbers.extend(d.selected_experiment_objective);
        numbers.extend(d.wi_before_removal);
        numbers.extend(d.wi_after_removal);
        if let Some(b) = &self.bench {
            numbers.extend([b.max_ratio, b.mean_ratio]);
        }
        if let Some(bad) = numbers.iter().find(|v| !v.is_finite()) {
            return Err(Error::BadParams(format!(
                "non-finite value {bad} in report"
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::BadParams(format!("report serialization failed: {e}")))
    }

    /// One-paragraph summary for stderr.
    pub fn text_summary(&self) -> String {
        let mut s = format!(
            "{}: objective {:.6} on {} ({} vertices, {} edges)",
            self.method,
            self.objective,
            self.instance.kind,
            self.instance.vertices,
            self.instance.edges
        );
        if let Some(lb) = self.lower_bound {
            s.push_str(&format!(", lower bound {lb:.6}"));
        }
        if let Some(r) = self.ratio_vs_bound {
            s.push_str(&format!(", ratio {r:.4}"));
        }
        if let Some(seed) = self.seed {
            s.push_str(&format!(", seed {seed}"));
        }
        if let Some(b) = &self.bench {
            s.push_str(&format!(
                "; {} trials vs {}, max ratio {:.4}, mean {:.4}",
                b.trials, b.reference, b.max_ratio, b.mean_ratio
            ));
        }
        s
    }
}
