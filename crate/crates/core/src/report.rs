//! JSON enumeration report and oracle comparison.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::analysis::{region_statistics, RegionStatistics};
use crate::enumerate::EnumerationResult;
use crate::oracle::PatternSet;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub sign_key: String,
    pub representative: Vec<f64>,
    pub radius: f64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportStats {
    pub lp_calls: usize,
    pub skipped_candidates: usize,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub method: String,
    pub pattern_count: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Oracle patterns absent from the report.
    pub missing: Vec<String>,
    /// Report keys the oracle does not certify.
    pub extra: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub network: String,
    pub domain: String,
    pub per_layer_counts: Vec<usize>,
    pub regions: Vec<RegionRecord>,
    pub stats: ReportStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<RegionStatistics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

impl EnumerationReport {
    pub fn new(network: &str, domain: &str, result: &EnumerationResult) -> Self {
        let regions = result
            .regions
            .iter()
            .map(|r| {
                let (a, b) = r.polytope.to_rows();
                RegionRecord {
                    sign_key: r.sign_key.to_bitstring(),
                    representative: r.representative.clone(),
                    radius: r.radius,
                    a,
                    b,
                }
            })
            .collect();
        Self {
            network: network.to_string(),
            domain: domain.to_string(),
            per_layer_counts: result.per_layer_counts.clone(),
            regions,
            stats: ReportStats {
                lp_calls: result.stats.lp_calls,
                skipped_candidates: result.stats.skipped_candidates,
                wall_ms: result.stats.wall_ms,
            },
            summary: Some(region_statistics(result)),
            oracle: None,
        }
    }

    pub fn sign_keys(&self) -> BTreeSet<String> {
        self.regions.iter().map(|r| r.sign_key.clone()).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("report: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Compares the report's keys with an oracle pattern set and stores the result.
    pub fn attach_oracle(&mut self, oracle: &PatternSet) -> &OracleComparison {
        self.oracle = Some(compare(&self.sign_keys(), oracle));
        self.oracle.as_ref().expect("just set")
    }
}

pub fn compare(keys: &BTreeSet<String>, oracle: &PatternSet) -> OracleComparison {
    let truth: BTreeSet<String> = oracle.patterns.iter().map(|p| p.to_bitstring()).collect();
    let missing: Vec<String> = truth.difference(keys).cloned().collect();
    let extra: Vec<String> = keys.difference(&truth).cloned().collect();
    OracleComparison {
        method: oracle.method.as_str().to_string(),
        pattern_count: truth.len(),
        matches: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
    }
}
