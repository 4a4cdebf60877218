use serde::{Deserialize, Serialize};

use crate::enumerate::EnumerationResult;

/// Summary of one enumeration run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionStatistics {
    pub per_layer_counts: Vec<usize>,
    pub total: usize,
    pub active_hyperplane_counts: Vec<usize>,
    pub radius_min: f64,
    pub radius_median: f64,
    pub radius_max: f64,
    pub lp_calls: usize,
    pub skipped_candidates: usize,
    pub completeness_verified: bool,
    pub wall_ms: u128,
}

impl RegionStatistics {
    /// Per-layer counts as CSV with header `layer,count`; layers are 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("layer,count\n");
        for (i, c) in self.per_layer_counts.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, c));
        }
        out
    }
}

pub fn region_statistics(result: &EnumerationResult) -> RegionStatistics {
    let mut radii: Vec<f64> = result.regions.iter().map(|r| r.radius).collect();
    radii.sort_by(f64::total_cmp);
    let n = radii.len();
    let median = match n {
        0 => 0.0,
        _ if n % 2 == 1 => radii[n / 2],
        _ => 0.5 * (radii[n / 2 - 1] + radii[n / 2]),
    };
    RegionStatistics {
        per_layer_counts: result.per_layer_counts.clone(),
        total: n,
        active_hyperplane_counts: result.active_hyperplane_counts.clone(),
        radius_min: radii.first().copied().unwrap_or(0.0),
        radius_median: median,
        radius_max: radii.last().copied().unwrap_or(0.0),
        lp_calls: result.stats.lp_calls,
        skipped_candidates: result.stats.skipped_candidates,
        completeness_verified: result.stats.completeness_verified(),
        wall_ms: result.stats.wall_ms,
    }
}
