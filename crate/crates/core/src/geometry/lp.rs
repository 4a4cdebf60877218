//! Dense simplex for `min c·x  s.t.  A x + b >= 0` with free `x`.
//!
//! The problems here have few variables (input dimension, plus one for the
//! Chebyshev radius) and many rows, so the solver works on the dual
//! `min b·y  s.t.  Aᵀy = c, y >= 0`, whose basis is only `n × n`. Primal
//! values are read off the simplex multipliers of the optimal dual basis.

use nalgebra::DMatrix;

use super::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Option<Vec<f64>>,
    pub objective: Option<f64>,
}

impl LpSolution {
    pub(crate) fn optimal(point: Vec<f64>, objective: f64) -> Self {
        Self {
            status: LpStatus::Optimal,
            point: Some(point),
            objective: Some(objective),
        }
    }

    pub(crate) fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            point: None,
            objective: None,
        }
    }
}

/// Outcome of one dense solve of `min c·x`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Outcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    /// Dual infeasible: the primal is unbounded or infeasible.
    Ambiguous,
}

const REFACTOR_EVERY: usize = 64;
const PIVOT_TOL: f64 = 1e-9;

/// Constraint matrix in row-major order, `m × n`.
pub(crate) struct DenseLp<'a> {
    pub n: usize,
    pub a: &'a [f64],
    pub b: &'a [f64],
    pub c: &'a [f64],
}

impl DenseLp<'_> {
    fn m(&self) -> usize {
        self.b.len()
    }

    pub(crate) fn solve(&self, feas_tol: f64) -> Result<Outcome, GeometryError> {
        debug_assert_eq!(self.a.len(), self.m() * self.n);
        debug_assert_eq!(self.c.len(), self.n);
        let mut tab = Tableau::new(self);
        let cap = 200 + 50 * (self.m() + self.n);

        // Phase 1: drive the artificial variables to zero.
        match tab.run(Phase::One, cap)? {
            Step::Optimal => {}
            Step::Unbounded => return Err(GeometryError::NumericalFailure(tab.iterations)),
        }
        let scale = 1.0 + self.c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if tab.artificial_mass() > 1e-9 * scale {
            return Ok(Outcome::Ambiguous);
        }
        tab.evict_artificials();

        match tab.run(Phase::Two, cap)? {
            Step::Unbounded => return Ok(Outcome::Infeasible),
            Step::Optimal => {}
        }
        tab.refactor()?;
        let x = tab.primal_point();
        let violation = (0..self.m())
            .map(|j| -(super::dot(&self.a[j * self.n..(j + 1) * self.n], &x) + self.b[j]))
            .fold(0.0_f64, f64::max);
        if violation > feas_tol {
            return Err(GeometryError::NumericalFailure(tab.iterations));
        }
        let objective = super::dot(self.c, &x);
        Ok(Outcome::Optimal { x, objective })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

enum Step {
    Optimal,
    Unbounded,
}

struct Tableau<'a> {
    lp: &'a DenseLp<'a>,
    n: usize,
    m: usize,
    /// Equation `k` is multiplied by `sign[k]` so that its right-hand side is non-negative.
    sign: Vec<f64>,
    rhs: Vec<f64>,
    /// Basic variable per row: `j < m` is `y_j`, `m + k` is the artificial of row `k`.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    bland: bool,
    degenerate_run: usize,
    rc_tol: f64,
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a DenseLp<'a>) -> Self {
        let n = lp.n;
        let m = lp.m();
        let sign: Vec<f64> = lp.c.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let rhs: Vec<f64> = lp.c.iter().map(|v| v.abs()).collect();
        let mut binv = vec![0.0; n * n];
        for k in 0..n {
            binv[k * n + k] = 1.0;
        }
        let mut is_basic = vec![false; m + n];
        for k in 0..n {
            is_basic[m + k] = true;
        }
        let bmax = lp.b.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        Self {
            lp,
            n,
            m,
            sign,
            xb: rhs.clone(),
            rhs,
            basis: (m..m + n).collect(),
            is_basic,
            binv,
            iterations: 0,
            bland: false,
            degenerate_run: 0,
            rc_tol: 1e-10 * bmax.max(1.0),
        }
    }

    fn column(&self, var: usize, out: &mut [f64]) {
        if var < self.m {
            let row = &self.lp.a[var * self.n..(var + 1) * self.n];
            for k in 0..self.n {
                out[k] = self.sign[k] * row[k];
            }
        } else {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[var - self.m] = 1.0;
        }
    }

    fn cost(&self, var: usize, phase: Phase) -> f64 {
        match phase {
            Phase::One => {
                if var >= self.m {
                    1.0
                } else {
                    0.0
                }
            }
            Phase::Two => {
                if var < self.m {
                    self.lp.b[var]
                } else {
                    0.0
                }
            }
        }
    }

    fn prices(&self, phase: Phase) -> Vec<f64> {
        let mut pi = vec![0.0; self.n];
        for r in 0..self.n {
            let cb = self.cost(self.basis[r], phase);
            if cb != 0.0 {
                let row = &self.binv[r * self.n..(r + 1) * self.n];
                for k in 0..self.n {
                    pi[k] += cb * row[k];
                }
            }
        }
        pi
    }

    fn ftran(&self, col: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| super::dot(&self.binv[r * self.n..(r + 1) * self.n], col))
            .collect()
    }

    fn reduced_cost(&self, var: usize, pi: &[f64], phase: Phase, col: &mut [f64]) -> f64 {
        self.column(var, col);
        self.cost(var, phase) - super::dot(pi, col)
    }

    fn choose_entering(&self, phase: Phase) -> Option<usize> {
        let pi = self.prices(phase);
        let mut col = vec![0.0; self.n];
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.m {
            if self.is_basic[j] {
                continue;
            }
            let d = self.reduced_cost(j, &pi, phase, &mut col);
            if d < -self.rc_tol {
                if self.bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn choose_leaving(&self, u: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.n {
            if u[r] <= PIVOT_TOL {
                continue;
            }
            let ratio = self.xb[r].max(0.0) / u[r];
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                    let better = if tie {
                        if self.bland {
                            self.basis[r] < self.basis[br]
                        } else {
                            u[r] > u[br]
                        }
                    } else {
                        ratio < bratio
                    };
                    if better {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best
    }

    fn pivot(&mut self, r: usize, entering: usize, u: &[f64]) {
        let n = self.n;
        let ur = u[r];
        for c in 0..n {
            self.binv[r * n + c] /= ur;
        }
        self.xb[r] /= ur;
        for k in 0..n {
            if k == r || u[k] == 0.0 {
                continue;
            }
            let f = u[k];
            for c in 0..n {
                self.binv[k * n + c] -= f * self.binv[r * n + c];
            }
            self.xb[k] -= f * self.xb[r];
            if self.xb[k] < 0.0 && self.xb[k] > -1e-12 {
                self.xb[k] = 0.0;
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[entering] = true;
        self.basis[r] = entering;
    }

    fn refactor(&mut self) -> Result<(), GeometryError> {
        let n = self.n;
        let mut bmat = DMatrix::<f64>::zeros(n, n);
        let mut col = vec![0.0; n];
        for r in 0..n {
            self.column(self.basis[r], &mut col);
            for k in 0..n {
                bmat[(k, r)] = col[k];
            }
        }
        let inv = bmat
            .try_inverse()
            .ok_or(GeometryError::NumericalFailure(self.iterations))?;
        for r in 0..n {
            for c in 0..n {
                self.binv[r * n + c] = inv[(r, c)];
            }
        }
        self.xb = self.ftran(&self.rhs.clone());
        for v in &mut self.xb {
            if *v < 0.0 && *v > -1e-10 {
                *v = 0.0;
            }
        }
        Ok(())
    }

    fn run(&mut self, phase: Phase, cap: usize) -> Result<Step, GeometryError> {
        let mut col = vec![0.0; self.n];
        let mut since_refactor = 0;
        self.bland = false;
        self.degenerate_run = 0;
        loop {
            if self.iterations >= cap {
                return Err(GeometryError::NumericalFailure(self.iterations));
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
            }
            let Some(entering) = self.choose_entering(phase) else {
                return Ok(Step::Optimal);
            };
            self.column(entering, &mut col);
            let u = self.ftran(&col);
            let Some((r, ratio)) = self.choose_leaving(&u) else {
                return Ok(Step::Unbounded);
            };
            if ratio <= 1e-12 {
                self.degenerate_run += 1;
                if self.degenerate_run > 2 * self.n + 8 {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, entering, &u);
            self.iterations += 1;
            since_refactor += 1;
        }
    }

    fn artificial_mass(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(&v, _)| v >= self.m)
            .map(|(_, x)| x.abs())
            .sum()
    }

    /// Pivots zero-valued artificials out of the basis where a structural
    /// column can replace them. Artificials that remain mark dependent rows.
    fn evict_artificials(&mut self) {
        let mut col = vec![0.0; self.n];
        for r in 0..self.n {
            if self.basis[r] < self.m {
                continue;
            }
            let mut best: Option<(usize, f64, Vec<f64>)> = None;
            for j in 0..self.m {
                if self.is_basic[j] {
                    continue;
                }
                self.column(j, &mut col);
                let u = self.ftran(&col);
                let mag = u[r].abs();
                if mag > 1e-7 && best.as_ref().is_none_or(|(_, bm, _)| mag > *bm) {
                    best = Some((j, mag, u));
                }
            }
            if let Some((j, _, u)) = best {
                self.pivot(r, j, &u);
                self.xb[r] = self.xb[r].max(0.0);
            }
        }
    }

    fn primal_point(&self) -> Vec<f64> {
        let pi = self.prices(Phase::Two);
        (0..self.n).map(|k| -self.sign[k] * pi[k]).collect()
    }
}
