//! Layer-by-layer region enumeration.

mod cells;
mod slice;

pub use cells::{filter_active_hyperplanes, search_sub_regions, ActiveSplit, CellSearch};
pub use slice::slice_network;

use std::collections::HashSet;
use std::sync::Mutex;
use std::time::Instant;

use crate::geometry::{GeometryError, HPolytope, LpKernel, Tolerances};
use crate::network::{Network, SignPattern};
use crate::parallel::{Executor, Parallelism};
use crate::Error;

/// A full-dimensional region on which the first `depth` activation layers
/// have a fixed sign pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub depth: usize,
    pub polytope: HPolytope,
    /// Center of a ball of `radius` inside `polytope`.
    pub representative: Vec<f64>,
    pub radius: f64,
    pub sign_key: SignPattern,
}

impl Region {
    /// Depth-0 region covering the whole domain. The representative is
    /// `seed` when given, otherwise the domain's Chebyshev center.
    pub fn root(kernel: &LpKernel, domain: &HPolytope, seed: Option<&[f64]>) -> Result<Self, Error> {
        let ball = match kernel.chebyshev_center(domain) {
            Ok(b) => b,
            Err(GeometryError::Unbounded) => return Err(Error::UnboundedDomain),
            Err(GeometryError::Infeasible) => return Err(Error::EmptyDomain),
            Err(e) => return Err(e.into()),
        };
        if ball.radius <= kernel.tolerances().eps_dim {
            return Err(Error::EmptyDomain);
        }
        let (representative, radius) = match seed {
            None => (ball.center, ball.radius),
            Some(s) => {
                if s.len() != domain.dim() {
                    return Err(Error::DomainDimension {
                        domain: domain.dim(),
                        network: s.len(),
                    });
                }
                let slack = domain.min_slack(s);
                if !slack.is_finite() || slack <= kernel.tolerances().eps_dim {
                    return Err(Error::SeedOutside);
                }
                (s.to_vec(), slack)
            }
        };
        Ok(Self {
            depth: 0,
            polytope: domain.clone(),
            representative,
            radius,
            sign_key: SignPattern::default(),
        })
    }
}

/// Per-parent split record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentSplit {
    /// Depth of the children.
    pub depth: usize,
    /// Number of active hyperplanes.
    pub active: usize,
    pub children: usize,
}

impl ParentSplit {
    /// Largest possible number of full-dimensional cells cut by `active`
    /// hyperplanes in `dim` dimensions.
    pub fn cell_bound(active: usize, dim: usize) -> u128 {
        (0..=dim.min(active)).map(|i| binomial(active, i)).sum()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnumerationStats {
    pub lp_calls: usize,
    pub skipped_candidates: usize,
    pub wall_ms: u128,
    /// Children over the arrangement bound; always zero for a correct run.
    pub bound_violations: usize,
    /// Regions reached twice; always zero for a correct run.
    pub duplicate_keys: usize,
}

impl EnumerationStats {
    /// Completeness is certified only when no candidate was skipped.
    pub fn completeness_verified(&self) -> bool {
        self.skipped_candidates == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult {
    /// Maximal regions.
    pub regions: Vec<Region>,
    /// Region count after each activation layer.
    pub per_layer_counts: Vec<usize>,
    /// Sum of active hyperplanes over all parents, per layer.
    pub active_hyperplane_counts: Vec<usize>,
    pub splits: Vec<ParentSplit>,
    pub stats: EnumerationStats,
}

impl EnumerationResult {
    pub fn sign_keys(&self) -> HashSet<SignPattern> {
        self.regions.iter().map(|r| r.sign_key.clone()).collect()
    }
}

/// Enumerates the affine regions of a network. Holds the LP kernel (and
/// its call counter) and the worker pool.
pub struct Enumerator<'a> {
    net: &'a Network,
    kernel: LpKernel,
    executor: Executor,
}

impl<'a> Enumerator<'a> {
    pub fn new(net: &'a Network, tol: Tolerances, parallelism: Parallelism) -> Result<Self, Error> {
        Ok(Self {
            net,
            kernel: LpKernel::new(tol),
            executor: Executor::new(parallelism)?,
        })
    }

    pub fn kernel(&self) -> &LpKernel {
        &self.kernel
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    /// Active/fixed split of activation layer `layer` over `parent`, with
    /// hyperplanes taken at the parent's representative.
    pub fn split_for(&self, parent: &Region, layer: usize) -> Result<ActiveSplit, Error> {
        let boundaries = self.net.layer_hyperplanes(&parent.representative, layer)?;
        Ok(filter_active_hyperplanes(&self.kernel, parent, &boundaries)?)
    }

    /// Children of `parent` at the next activation layer.
    pub fn expand(&self, parent: &Region) -> Result<(CellSearch, ParentSplit), Error> {
        let layer = parent.depth + 1;
        let split = self.split_for(parent, layer)?;
        let cells = search_sub_regions(&self.kernel, parent, &split)?;
        let record = ParentSplit {
            depth: layer,
            active: split.active_count(),
            children: cells.regions.len(),
        };
        Ok((cells, record))
    }

    /// All maximal full-dimensional regions of the network on `domain`.
    pub fn find_cpas(&self, domain: &HPolytope, seed: Option<&[f64]>) -> Result<EnumerationResult, Error> {
        let started = Instant::now();
        if domain.dim() != self.net.input_dim() {
            return Err(Error::DomainDimension {
                domain: domain.dim(),
                network: self.net.input_dim(),
            });
        }
        let calls_before = self.kernel.lp_calls();
        let root = Region::root(&self.kernel, domain, seed)?;
        let dim = domain.dim();
        let seen: Mutex<HashSet<SignPattern>> = Mutex::new(HashSet::new());
        let mut stats = EnumerationStats::default();
        let mut frontier = vec![root];
        let mut per_layer_counts = Vec::new();
        let mut active_hyperplane_counts = Vec::new();
        let mut splits = Vec::new();

        for _ in 0..self.net.activation_layers().len() {
            let outcomes = self.executor.map(&frontier, |parent| {
                let (cells, record) = self.expand(parent)?;
                let mut published = Vec::with_capacity(cells.regions.len());
                let mut duplicates = 0;
                for r in cells.regions {
                    let fresh = seen
                        .lock()
                        .expect("seen-set lock poisoned")
                        .insert(r.sign_key.clone());
                    if fresh {
                        published.push(r);
                    } else {
                        duplicates += 1;
                    }
                }
                Ok::<_, Error>((published, record, cells.skipped, duplicates))
            });
            let mut next = Vec::new();
            let mut active_total = 0;
            for outcome in outcomes {
                let (children, record, skipped, duplicates) = outcome?;
                if record.children as u128 > ParentSplit::cell_bound(record.active, dim) {
                    stats.bound_violations += 1;
                }
                stats.skipped_candidates += skipped;
                stats.duplicate_keys += duplicates;
                active_total += record.active;
                splits.push(record);
                next.extend(children);
            }
            per_layer_counts.push(next.len());
            active_hyperplane_counts.push(active_total);
            frontier = next;
        }

        stats.lp_calls = self.kernel.lp_calls() - calls_before;
        stats.wall_ms = started.elapsed().as_millis();
        Ok(EnumerationResult {
            regions: frontier,
            per_layer_counts,
            active_hyperplane_counts,
            splits,
            stats,
        })
    }
}

/// Convenience wrapper: enumerate with default tolerances.
pub fn find_cpas(
    net: &Network,
    domain: &HPolytope,
    seed: Option<&[f64]>,
    parallelism: Parallelism,
) -> Result<EnumerationResult, Error> {
    Enumerator::new(net, Tolerances::default(), parallelism)?.find_cpas(domain, seed)
}
