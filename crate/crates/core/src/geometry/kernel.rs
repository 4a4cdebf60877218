use std::sync::atomic::{AtomicUsize, Ordering};

use super::lp::{DenseLp, LpSolution, LpStatus, Outcome, Sense};
use super::{norm, GeometryError, HPolytope, Halfspace, Hyperplane, Tolerances};

/// Center and radius of a largest ball inscribed in a polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// LP-backed polytope queries. Reentrant: one kernel can serve many
/// threads, and it counts every LP it solves.
#[derive(Debug, Default)]
pub struct LpKernel {
    tol: Tolerances,
    calls: AtomicUsize,
}

impl LpKernel {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Number of LPs solved so far.
    pub fn lp_calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn dense(&self, n: usize, a: &[f64], b: &[f64], c: &[f64]) -> Result<Outcome, GeometryError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        DenseLp { n, a, b, c }.solve(self.tol.eps_feas)
    }

    /// Solves `min c·x` (or max) over `rows`, resolving a dual-infeasible
    /// outcome into unbounded or infeasible with a phase-1 check.
    fn solve_rows(
        &self,
        n: usize,
        a: &[f64],
        b: &[f64],
        c: &[f64],
    ) -> Result<LpSolution, GeometryError> {
        match self.dense(n, a, b, c)? {
            Outcome::Optimal { x, objective } => Ok(LpSolution::optimal(x, objective)),
            Outcome::Infeasible => Ok(LpSolution::without_point(LpStatus::Infeasible)),
            Outcome::Ambiguous => match self.dense(n, a, b, &vec![0.0; n])? {
                Outcome::Optimal { .. } => Ok(LpSolution::without_point(LpStatus::Unbounded)),
                _ => Ok(LpSolution::without_point(LpStatus::Infeasible)),
            },
        }
    }

    /// Optimizes `objective·x` over the polytope.
    pub fn solve_lp(
        &self,
        objective: &[f64],
        polytope: &HPolytope,
        sense: Sense,
    ) -> Result<LpSolution, GeometryError> {
        if objective.len() != polytope.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: polytope.dim(),
                found: objective.len(),
            });
        }
        let (a, b) = flatten(polytope.halfspaces());
        let c: Vec<f64> = match sense {
            Sense::Minimize => objective.to_vec(),
            Sense::Maximize => objective.iter().map(|v| -v).collect(),
        };
        let mut sol = self.solve_rows(polytope.dim(), &a, &b, &c)?;
        if sense == Sense::Maximize {
            sol.objective = sol.objective.map(|v| -v);
        }
        Ok(sol)
    }

    /// Whether the polytope contains at least one point. Says nothing about
    /// full-dimensionality.
    pub fn is_feasible(&self, polytope: &HPolytope) -> Result<bool, GeometryError> {
        let (a, b) = flatten(polytope.halfspaces());
        Ok(matches!(
            self.dense(polytope.dim(), &a, &b, &vec![0.0; polytope.dim()])?,
            Outcome::Optimal { .. }
        ))
    }

    /// Largest inscribed ball. A radius at or below `eps_dim` means the
    /// polytope is not full-dimensional; an empty polytope is an error.
    pub fn chebyshev_center(&self, polytope: &HPolytope) -> Result<ChebyshevBall, GeometryError> {
        let n = polytope.dim();
        let rows = polytope.halfspaces();
        let mut a = Vec::with_capacity(rows.len() * (n + 1));
        let mut b = Vec::with_capacity(rows.len());
        for h in rows {
            a.extend_from_slice(&h.normal);
            a.push(-norm(&h.normal));
            b.push(h.offset);
        }
        let mut c = vec![0.0; n + 1];
        c[n] = -1.0;
        let sol = self.solve_rows(n + 1, &a, &b, &c)?;
        match sol.status {
            LpStatus::Unbounded => Err(GeometryError::Unbounded),
            // The radius is free, so this LP is always feasible; guard anyway.
            LpStatus::Infeasible => Err(GeometryError::Infeasible),
            LpStatus::Optimal => {
                let mut z = sol.point.expect("optimal LP carries a point");
                let radius = z.pop().expect("radius variable");
                if radius < -self.tol.eps_feas {
                    return Err(GeometryError::Infeasible);
                }
                Ok(ChebyshevBall {
                    center: z,
                    radius: radius.max(0.0),
                })
            }
        }
    }

    /// Chebyshev ball, or `None` when the polytope is empty or its radius
    /// does not exceed `threshold`.
    pub(crate) fn inscribed_ball(
        &self,
        polytope: &HPolytope,
        threshold: f64,
    ) -> Result<Option<ChebyshevBall>, GeometryError> {
        match self.chebyshev_center(polytope) {
            Ok(ball) if ball.radius > threshold => Ok(Some(ball)),
            Ok(_) | Err(GeometryError::Infeasible) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Minimum and maximum signed distance to `h` over the polytope, or
    /// `None` when the polytope is empty.
    pub fn hyperplane_range(
        &self,
        polytope: &HPolytope,
        h: &Hyperplane,
    ) -> Result<Option<(f64, f64)>, GeometryError> {
        if h.dim() != polytope.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: polytope.dim(),
                found: h.dim(),
            });
        }
        let scale = norm(&h.normal);
        let unit: Vec<f64> = h.normal.iter().map(|v| v / scale).collect();
        let offset = h.offset / scale;
        let lo = self.solve_lp(&unit, polytope, Sense::Minimize)?;
        let hi = match lo.status {
            LpStatus::Infeasible => return Ok(None),
            _ => self.solve_lp(&unit, polytope, Sense::Maximize)?,
        };
        let value = |s: &LpSolution, unbounded: f64| match s.status {
            LpStatus::Optimal => s.objective.unwrap_or(unbounded) + offset,
            _ => unbounded,
        };
        Ok(Some((
            value(&lo, f64::NEG_INFINITY),
            value(&hi, f64::INFINITY),
        )))
    }

    /// True iff `h` separates interior points: its signed distance takes
    /// values below `-eps_cross` and above `eps_cross` on the polytope.
    /// A hyperplane that only touches the boundary does not intersect.
    pub fn hyperplane_intersects(
        &self,
        polytope: &HPolytope,
        h: &Hyperplane,
    ) -> Result<bool, GeometryError> {
        Ok(match self.hyperplane_range(polytope, h)? {
            Some((lo, hi)) => lo < -self.tol.eps_cross && hi > self.tol.eps_cross,
            None => false,
        })
    }

    /// Drops every row whose removal leaves the point set unchanged. Each
    /// test minimizes the row's value subject to the remaining rows.
    pub fn remove_redundant(&self, polytope: &HPolytope) -> Result<HPolytope, GeometryError> {
        let n = polytope.dim();
        let mut kept: Vec<Halfspace> = polytope
            .halfspaces()
            .iter()
            .filter(|h| !(h.is_degenerate() && h.offset >= 0.0))
            .cloned()
            .collect();
        let mut i = 0;
        while i < kept.len() {
            if kept[i].is_degenerate() {
                i += 1;
                continue;
            }
            let target = &kept[i];
            let mut a = Vec::with_capacity(kept.len() * n);
            let mut b = Vec::with_capacity(kept.len());
            for (j, h) in kept.iter().enumerate() {
                if j != i {
                    a.extend_from_slice(&h.normal);
                    b.push(h.offset);
                }
            }
            // Keeps the test bounded: the row may be violated by at most 1.
            a.extend_from_slice(&target.normal);
            b.push(target.offset + 1.0);
            let redundant = match self.dense(n, &a, &b, &target.normal)? {
                Outcome::Optimal { objective, .. } => {
                    objective + target.offset >= -self.tol.eps_feas
                }
                _ => false,
            };
            if redundant {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(HPolytope::from_normalized(n, kept))
    }

    /// Axis-aligned bounding box `(lo, hi)` of a bounded, non-empty polytope.
    pub fn bounding_box(&self, polytope: &HPolytope) -> Result<(Vec<f64>, Vec<f64>), GeometryError> {
        let n = polytope.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            for (sense, slot) in [(Sense::Minimize, &mut lo), (Sense::Maximize, &mut hi)] {
                let sol = self.solve_lp(&e, polytope, sense)?;
                match sol.status {
                    LpStatus::Optimal => slot[i] = sol.objective.unwrap_or_default(),
                    LpStatus::Infeasible => return Err(GeometryError::Infeasible),
                    LpStatus::Unbounded => return Err(GeometryError::Unbounded),
                }
            }
        }
        Ok((lo, hi))
    }

    /// Vertices of a full-dimensional polygon in counter-clockwise order.
    pub fn enumerate_vertices_2d(&self, polytope: &HPolytope) -> Result<Vec<[f64; 2]>, GeometryError> {
        if polytope.dim() != 2 {
            return Err(GeometryError::DimensionMismatch {
                expected: 2,
                found: polytope.dim(),
            });
        }
        let ball = self.chebyshev_center(polytope)?;
        if ball.radius <= self.tol.eps_dim {
            return Err(GeometryError::Degenerate(ball.radius));
        }
        Ok(polygon_vertices(polytope.halfspaces(), self.tol.eps_feas))
    }
}

fn flatten(rows: &[Halfspace]) -> (Vec<f64>, Vec<f64>) {
    let a = rows.iter().flat_map(|h| h.normal.iter().copied()).collect();
    let b = rows.iter().map(|h| h.offset).collect();
    (a, b)
}

/// Pairwise line intersections that satisfy every row, sorted CCW.
pub(crate) fn polygon_vertices(rows: &[Halfspace], eps: f64) -> Vec<[f64; 2]> {
    let lines: Vec<&Halfspace> = rows.iter().filter(|h| !h.is_degenerate()).collect();
    let tol = eps.max(1e-9);
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (p, q) = (lines[i], lines[j]);
            let det = p.normal[0] * q.normal[1] - p.normal[1] * q.normal[0];
            if det.abs() < 1e-14 {
                continue;
            }
            let x = (-p.offset * q.normal[1] + q.offset * p.normal[1]) / det;
            let y = (-p.normal[0] * q.offset + q.normal[0] * p.offset) / det;
            let v = [x, y];
            if rows.iter().all(|h| h.eval(&v) >= -tol)
                && !pts
                    .iter()
                    .any(|w| (w[0] - x).abs() <= 1e-9 && (w[1] - y).abs() <= 1e-9)
            {
                pts.push(v);
            }
        }
    }
    if pts.is_empty() {
        return pts;
    }
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    pts
}

/// Shoelace area; positive for counter-clockwise input.
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * twice
}
