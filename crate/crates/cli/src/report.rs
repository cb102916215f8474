//! Machine-readable report document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use wronski_core::{CriterionReport, Polynomial};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub computed: usize,
    pub by_symmetry: usize,
    pub by_trace: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    /// 1-based.
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub provenance: String,
    pub value_in_x: String,
    /// `null` when membership was not decided.
    pub member: Option<bool>,
    /// Expression in `y1..yn`, standing for `F1..Fn`.
    pub f_expression: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub map_label: String,
    pub n: usize,
    pub verdict: Option<String>,
    pub jacobian_det: String,
    pub counts: Counts,
    pub entries: Vec<EntryDoc>,
    pub inverse: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

fn y_text(p: &Polynomial) -> String {
    p.display_with("y").to_string()
}

impl ReportDocument {
    pub fn from_report(report: &CriterionReport, with_timings: bool) -> Self {
        let mut entries: Vec<EntryDoc> = report
            .entries
            .iter()
            .map(|e| EntryDoc {
                k: e.index.k + 1,
                i: e.index.i + 1,
                j: e.index.j + 1,
                provenance: e.index.provenance.as_str().to_string(),
                value_in_x: e.value.to_string(),
                member: e.membership.as_ref().map(|m| m.is_member),
                f_expression: e.membership.as_ref().and_then(|m| m.f_expression.as_ref()).map(y_text),
            })
            .collect();
        entries.sort_by_key(|e| (e.k, e.i, e.j));
        let timings_ms = with_timings.then(|| {
            report
                .timings
                .phases()
                .iter()
                .map(|(name, d)| (name.to_string(), d.as_secs_f64() * 1000.0))
                .collect()
        });
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            map_label: report.map_label.clone(),
            n: report.n,
            verdict: report.verdict.map(|v| v.as_str().to_string()),
            jacobian_det: report.jacobian_det.to_string(),
            counts: Counts {
                computed: report.computed_count,
                by_symmetry: report.by_symmetry_count,
                by_trace: report.by_trace_count,
            },
            entries,
            inverse: report.inverse.as_ref().map(|g| g.iter().map(y_text).collect()),
            timings_ms,
        }
    }
}
