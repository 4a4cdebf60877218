//! H-representation polytopes and the LP kernel behind every feasibility,
//! intersection, representative and redundancy decision.

mod io;
mod kernel;
mod lp;

pub use io::PolytopeJson;
pub(crate) use kernel::polygon_vertices;
pub use kernel::{polygon_area, ChebyshevBall, LpKernel};
pub use lp::{LpSolution, LpStatus, Sense};

use thiserror::Error;

/// Normals shorter than this are treated as exactly zero.
pub const ZERO_NORMAL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("LP solver did not converge within {0} iterations")]
    NumericalFailure(usize),
    #[error("polytope is empty")]
    Infeasible,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("region is not full-dimensional (radius {0:e})")]
    Degenerate(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid polytope: {0}")]
    Invalid(String),
}

/// Numerical tolerances shared by all geometric decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Constraint satisfaction slack.
    pub eps_feas: f64,
    /// Chebyshev radius above which a region counts as full-dimensional.
    pub eps_dim: f64,
    /// Margin a hyperplane must clear on both sides to count as crossing.
    pub eps_cross: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_feas: 1e-9,
            eps_dim: 1e-8,
            eps_cross: 1e-8,
        }
    }
}

impl Tolerances {
    /// Defaults, with `eps_feas` overridden by `AFFINELENS_EPS_FEAS` when set.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = std::env::var("AFFINELENS_EPS_FEAS")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            tol.eps_feas = v;
        }
        tol
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `{x | normal·x + offset >= 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) + self.offset
    }

    pub fn is_finite(&self) -> bool {
        self.offset.is_finite() && self.normal.iter().all(|v| v.is_finite())
    }

    /// Zero normal: the row is either a tautology or a contradiction.
    pub fn is_degenerate(&self) -> bool {
        norm(&self.normal) <= ZERO_NORMAL
    }

    /// Rescaled to a unit normal. Degenerate rows are returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = norm(&self.normal);
        if n <= ZERO_NORMAL {
            return self.clone();
        }
        Self {
            normal: self.normal.iter().map(|v| v / n).collect(),
            offset: self.offset / n,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -self.offset,
        }
    }
}

/// `{x | normal·x + offset = 0}`; the normal is never zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    /// Returns `None` for a zero normal, which does not define a hyperplane.
    pub fn new(normal: Vec<f64>, offset: f64) -> Option<Self> {
        if norm(&normal) <= ZERO_NORMAL {
            None
        } else {
            Some(Self { normal, offset })
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) + self.offset
    }

    /// Signed distance from `x` to the hyperplane.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.eval(x) / norm(&self.normal)
    }

    /// The closed side where `normal·x + offset >= 0`.
    pub fn positive_side(&self) -> Halfspace {
        Halfspace::new(self.normal.clone(), self.offset)
    }

    /// The closed side where `normal·x + offset <= 0`.
    pub fn negative_side(&self) -> Halfspace {
        self.positive_side().negated()
    }

    pub fn side(&self, positive: bool) -> Halfspace {
        if positive {
            self.positive_side()
        } else {
            self.negative_side()
        }
    }
}

/// A convex polytope `{x | Ax + b >= 0}` stored as unit-normal rows.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<Halfspace>,
}

impl HPolytope {
    /// Unconstrained `R^dim`.
    pub fn whole_space(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, GeometryError> {
        let mut poly = Self::whole_space(dim);
        for h in halfspaces {
            poly.push(h)?;
        }
        Ok(poly)
    }

    /// Builds the polytope from `A x + b >= 0`.
    pub fn from_rows(dim: usize, a: &[Vec<f64>], b: &[f64]) -> Result<Self, GeometryError> {
        if a.len() != b.len() {
            return Err(GeometryError::Invalid(format!(
                "{} rows in A but {} entries in b",
                a.len(),
                b.len()
            )));
        }
        Self::new(
            dim,
            a.iter()
                .zip(b)
                .map(|(row, off)| Halfspace::new(row.clone(), *off))
                .collect(),
        )
    }

    /// The box `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self, GeometryError> {
        let lo = vec![-half_width; dim];
        let hi = vec![half_width; dim];
        Self::aabb(&lo, &hi)
    }

    /// Axis-aligned box `lo <= x <= hi`.
    pub fn aabb(lo: &[f64], hi: &[f64]) -> Result<Self, GeometryError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(GeometryError::Invalid("box bounds must be non-empty and match".into()));
        }
        if lo.iter().chain(hi).any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite("box bounds"));
        }
        if lo.iter().zip(hi).any(|(l, h)| l >= h) {
            return Err(GeometryError::Invalid("box must have positive extent".into()));
        }
        let dim = lo.len();
        let mut rows = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            rows.push(Halfspace::new(e.clone(), -lo[i]));
            e[i] = -1.0;
            rows.push(Halfspace::new(e, hi[i]));
        }
        Self::new(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Appends a constraint in place, normalizing it. Zero-normal tautologies
    /// are dropped; zero-normal contradictions are kept and make the set empty.
    pub fn push(&mut self, h: Halfspace) -> Result<(), GeometryError> {
        if h.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: h.dim(),
            });
        }
        if !h.is_finite() {
            return Err(GeometryError::NonFinite("halfspace"));
        }
        if h.is_degenerate() {
            if h.offset >= 0.0 {
                return Ok(());
            }
            self.rows.push(Halfspace::new(vec![0.0; self.dim], -1.0));
            return Ok(());
        }
        self.rows.push(h.normalized());
        Ok(())
    }

    /// Returns a new polytope with `h` appended; `self` is unchanged.
    pub fn add_halfspace(&self, h: Halfspace) -> Result<Self, GeometryError> {
        let mut out = self.clone();
        out.push(h)?;
        Ok(out)
    }

    /// Smallest constraint slack at `x`; positive means strictly inside.
    pub fn min_slack(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|h| h.eval(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &[f64], eps: f64) -> bool {
        self.rows.iter().all(|h| h.eval(x) >= -eps)
    }

    /// Dense `(A, b)` rows.
    pub fn to_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        (
            self.rows.iter().map(|h| h.normal.clone()).collect(),
            self.rows.iter().map(|h| h.offset).collect(),
        )
    }

    pub(crate) fn from_normalized(dim: usize, rows: Vec<Halfspace>) -> Self {
        Self { dim, rows }
    }
}
