//! Splitting one region by the hyperplanes of the next activation layer.

use std::collections::{HashSet, VecDeque};

use crate::geometry::{GeometryError, HPolytope, Hyperplane, LpKernel};
use crate::network::NeuronBoundary;

use super::Region;

/// Candidates with a radius in `(BRIDGE_RADIUS, eps_dim]` are too thin to
/// count as regions but are still expanded, so that a sliver cell cannot
/// cut the walk off from the cells behind it.
const BRIDGE_RADIUS: f64 = 1e-12;

/// Tolerance for treating two unit hyperplanes as the same set.
const COINCIDENT: f64 = 1e-9;

/// Neurons of one layer, split into those whose hyperplane crosses the
/// parent region and those with a fixed sign on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSplit {
    pub width: usize,
    pub active: Vec<(usize, Hyperplane)>,
    /// Fixed sign per neuron, with the hyperplane when there is one.
    pub fixed: Vec<(usize, bool, Option<Hyperplane>)>,
}

impl ActiveSplit {
    /// Every hyperplane counts as active; used to split a region by an
    /// arbitrary arrangement.
    pub fn all_active(hyperplanes: Vec<Hyperplane>) -> Self {
        Self {
            width: hyperplanes.len(),
            active: hyperplanes.into_iter().enumerate().collect(),
            fixed: Vec::new(),
        }
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }
}

/// Sorts neuron boundaries into active hyperplanes and fixed-sign neurons
/// with two LPs per hyperplane.
pub fn filter_active_hyperplanes(
    kernel: &LpKernel,
    parent: &Region,
    boundaries: &[NeuronBoundary],
) -> Result<ActiveSplit, GeometryError> {
    let eps = kernel.tolerances().eps_cross;
    let mut split = ActiveSplit {
        width: boundaries.len(),
        active: Vec::new(),
        fixed: Vec::new(),
    };
    for (i, b) in boundaries.iter().enumerate() {
        match b {
            NeuronBoundary::Constant { positive } => split.fixed.push((i, *positive, None)),
            NeuronBoundary::Hyperplane(h) => match kernel.hyperplane_range(&parent.polytope, h)? {
                Some((lo, hi)) if lo < -eps && hi > eps => split.active.push((i, h.clone())),
                Some((_, hi)) => split.fixed.push((i, hi > eps, Some(h.clone()))),
                None => return Err(GeometryError::Infeasible),
            },
        }
    }
    Ok(split)
}

/// Active hyperplanes that describe the same set, crossed together.
#[derive(Debug, Clone)]
struct Group {
    plane: Hyperplane,
    /// Neuron index and whether its hyperplane points the same way as `plane`.
    members: Vec<(usize, bool)>,
}

fn group_coincident(active: &[(usize, Hyperplane)]) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for (idx, h) in active {
        let unit = h.positive_side().normalized();
        let lead = unit
            .normal
            .iter()
            .find(|v| v.abs() > 1e-9)
            .copied()
            .unwrap_or(1.0);
        let (canon, same) = if lead < 0.0 {
            (unit.negated(), false)
        } else {
            (unit, true)
        };
        let found = groups.iter_mut().find(|g| {
            (g.plane.offset - canon.offset).abs() <= COINCIDENT
                && g
                    .plane
                    .normal
                    .iter()
                    .zip(&canon.normal)
                    .all(|(a, b)| (a - b).abs() <= COINCIDENT)
        });
        match found {
            Some(g) => g.members.push((*idx, same)),
            None => groups.push(Group {
                plane: Hyperplane::new(canon.normal, canon.offset).expect("unit normal"),
                members: vec![(*idx, same)],
            }),
        }
    }
    groups
}

/// Result of one sub-region search.
#[derive(Debug, Clone)]
pub struct CellSearch {
    pub regions: Vec<Region>,
    /// Candidates dropped after repeated LP failure.
    pub skipped: usize,
}

/// A fixed generic direction used to nudge the start point off hyperplanes.
fn nudge_direction(dim: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..dim)
        .map(|k| (0.754_877_666 * (k as f64 + 1.0) + 0.123_456_789).fract() - 0.5 + 1e-3)
        .collect();
    let n = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    raw.into_iter().map(|v| v / n).collect()
}

/// Finds every full-dimensional cell of the active arrangement inside
/// `parent` by a breadth-first walk: start from the cell containing the
/// parent's representative, flip one hyperplane at a time and keep each
/// flip whose Chebyshev radius exceeds `eps_dim`.
pub fn search_sub_regions(
    kernel: &LpKernel,
    parent: &Region,
    split: &ActiveSplit,
) -> Result<CellSearch, GeometryError> {
    let tol = *kernel.tolerances();
    let mut base = parent.polytope.clone();
    for (_, positive, plane) in &split.fixed {
        if let Some(h) = plane {
            base.push(h.side(*positive))?;
        }
    }
    let groups = group_coincident(&split.active);

    let key_for = |sides: &[bool]| {
        let mut bits = vec![false; split.width];
        for (i, positive, _) in &split.fixed {
            bits[*i] = *positive;
        }
        for (g, side) in groups.iter().zip(sides) {
            for (i, same) in &g.members {
                bits[*i] = *side == *same;
            }
        }
        parent.sign_key.with_layer(bits)
    };
    let cell_polytope = |sides: &[bool], reversed: bool| -> Result<HPolytope, GeometryError> {
        let mut rows = base.halfspaces().to_vec();
        rows.extend(groups.iter().zip(sides).map(|(g, s)| g.plane.side(*s)));
        if reversed {
            rows.reverse();
        }
        HPolytope::new(base.dim(), rows)
    };

    let depth = parent.depth + 1;
    let mut regions = Vec::new();
    let mut skipped = 0;
    let accept = |poly: HPolytope, center: Vec<f64>, radius: f64, sides: &[bool]| -> Region {
        let polytope = kernel.remove_redundant(&poly).unwrap_or(poly);
        Region {
            depth,
            polytope,
            representative: center,
            radius,
            sign_key: key_for(sides),
        }
    };

    let dir = nudge_direction(base.dim());
    let step = 0.5 * parent.radius;
    let start: Vec<f64> = parent
        .representative
        .iter()
        .zip(&dir)
        .map(|(c, d)| c + step * d)
        .collect();
    let seed: Vec<bool> = groups.iter().map(|g| g.plane.eval(&start) > 0.0).collect();

    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut queue: VecDeque<Vec<bool>> = VecDeque::new();
    seen.insert(seed.clone());

    let mut evaluate = |sides: &[bool]| -> Result<Option<(HPolytope, Vec<f64>, f64)>, GeometryError> {
        for attempt in 0..2 {
            let poly = cell_polytope(sides, attempt == 1)?;
            match kernel.chebyshev_center(&poly) {
                Ok(ball) => return Ok(Some((poly, ball.center, ball.radius))),
                Err(GeometryError::Infeasible) => return Ok(None),
                Err(GeometryError::NumericalFailure(_)) if attempt == 0 => continue,
                Err(GeometryError::NumericalFailure(_)) => {
                    skipped += 1;
                    return Ok(None);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    };

    // The seed cell is always expanded, even when it is degenerate.
    if let Some((poly, center, radius)) = evaluate(&seed)? {
        if radius > tol.eps_dim {
            regions.push(accept(poly, center, radius, &seed));
        }
    }
    queue.push_back(seed);

    while let Some(sides) = queue.pop_front() {
        for g in 0..groups.len() {
            let mut next = sides.clone();
            next[g] = !next[g];
            if !seen.insert(next.clone()) {
                continue;
            }
            if let Some((poly, center, radius)) = evaluate(&next)? {
                if radius > tol.eps_dim {
                    regions.push(accept(poly, center, radius, &next));
                    queue.push_back(next);
                } else if radius > BRIDGE_RADIUS {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(CellSearch { regions, skipped })
}
