//! Brute-force ground truth for small instances.
//!
//! The exhaustive oracle walks the full sign-vector tree and certifies each
//! pattern with its own Chebyshev LP. Slopes are read off the candidate bits,
//! never from a reference point, so nothing here goes through the
//! enumerator's region logic.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::geometry::{HPolytope, Halfspace, Hyperplane, LpKernel, Tolerances, ZERO_NORMAL};
use crate::network::{is_positive, LayerSpec, Network, SignPattern};
use crate::parallel::{Executor, Parallelism};
use crate::Error;

/// Largest total neuron count the exhaustive oracle accepts.
pub const EXHAUSTIVE_CAP: usize = 20;

/// Points closer than this to a neuron boundary are not sampled by the grid.
const GRID_BOUNDARY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternMethod {
    ExhaustiveLp,
    Grid,
}

impl PatternMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExhaustiveLp => "exhaustive_lp",
            Self::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternSet {
    pub patterns: BTreeSet<SignPattern>,
    pub method: PatternMethod,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, p: &SignPattern) -> bool {
        self.patterns.contains(p)
    }
}

/// Walks the op list with activation `k` frozen to the slopes chosen by
/// `bits[k]`. Stops at activation layer `stop` (0-based) and returns its
/// pre-activation map, or returns the output map when `stop` is `None`.
fn pattern_map(net: &Network, bits: &[Vec<bool>], stop: Option<usize>) -> (DMatrix<f64>, DVector<f64>) {
    let d = net.input_dim();
    let mut w = DMatrix::<f64>::identity(d, d);
    let mut b = DVector::<f64>::zeros(d);
    let mut skips: Vec<(DMatrix<f64>, DVector<f64>)> = Vec::new();
    let mut k = 0;
    for op in net.layers() {
        match op {
            LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias } => {
                w = weight * &w;
                b = weight * &b + bias;
            }
            LayerSpec::Activation { slope_pos, slope_neg } => {
                if stop == Some(k) {
                    return (w, b);
                }
                for (i, &bit) in bits[k].iter().enumerate() {
                    let g = if bit { *slope_pos } else { *slope_neg };
                    w.row_mut(i).scale_mut(g);
                    b[i] *= g;
                }
                k += 1;
            }
            LayerSpec::BatchNorm { scale, shift } => {
                for i in 0..w.nrows() {
                    w.row_mut(i).scale_mut(scale[i]);
                }
                b = b.component_mul(scale) + shift;
            }
            LayerSpec::ResidualBegin => skips.push((w.clone(), b.clone())),
            LayerSpec::ResidualEnd => {
                let (sw, sb) = skips.pop().expect("validated residual nesting");
                w += sw;
                b += sb;
            }
        }
    }
    assert!(stop.is_none(), "activation layer {stop:?} exists");
    (w, b)
}

fn pattern_preactivation(net: &Network, bits: &[Vec<bool>], layer: usize) -> (DMatrix<f64>, DVector<f64>) {
    pattern_map(net, bits, Some(layer))
}

enum Side {
    /// The row is a real hyperplane; constrain to this halfspace.
    Constrain(Halfspace),
    /// Constant row that agrees with the bit.
    Holds,
    /// Constant row that contradicts the bit.
    Fails,
}

fn side_of(normal: Vec<f64>, offset: f64, positive: bool) -> Side {
    let n = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n <= ZERO_NORMAL {
        return if is_positive(offset) == positive { Side::Holds } else { Side::Fails };
    }
    let h = Hyperplane::new(normal, offset).expect("non-zero normal");
    Side::Constrain(h.side(positive))
}

struct Walk<'a> {
    net: &'a Network,
    kernel: LpKernel,
    widths: Vec<usize>,
}

impl Walk<'_> {
    /// Every feasible completion of `bits`, where `bits` ends inside
    /// activation layer `layer`, given the polytope of the prefix.
    fn extend(
        &self,
        poly: &HPolytope,
        bits: &mut Vec<Vec<bool>>,
        rows: &Option<(DMatrix<f64>, DVector<f64>)>,
        out: &mut Vec<SignPattern>,
    ) -> Result<(), Error> {
        let layer = bits.len() - 1;
        let done = bits[layer].len();
        if done == self.widths[layer] {
            if layer + 1 == self.widths.len() {
                out.push(SignPattern::new(bits.clone()));
                return Ok(());
            }
            bits.push(Vec::new());
            let next = Some(pattern_preactivation(self.net, bits, layer + 1));
            let r = self.extend(poly, bits, &next, out);
            bits.pop();
            return r;
        }
        let (w, b) = rows.as_ref().expect("rows computed on layer entry");
        for positive in [false, true] {
            let normal: Vec<f64> = w.row(done).iter().copied().collect();
            let child = match side_of(normal, b[done], positive) {
                Side::Fails => continue,
                Side::Holds => poly.clone(),
                Side::Constrain(h) => {
                    let child = poly.add_halfspace(h)?;
                    let eps_dim = self.kernel.tolerances().eps_dim;
                    if self.kernel.inscribed_ball(&child, eps_dim)?.is_none() {
                        continue;
                    }
                    child
                }
            };
            bits[layer].push(positive);
            let r = self.extend(&child, bits, rows, out);
            bits[layer].pop();
            r?;
        }
        Ok(())
    }
}

/// All sign vectors whose region inside `a0` has Chebyshev radius above
/// `eps_dim`. A prefix whose polytope is already thin is pruned, since adding
/// constraints never enlarges it.
pub fn enumerate_patterns_bruteforce(
    net: &Network,
    a0: &HPolytope,
    tol: Tolerances,
    parallelism: Parallelism,
) -> Result<PatternSet, Error> {
    let neurons = net.neuron_count();
    if neurons > EXHAUSTIVE_CAP {
        return Err(Error::OracleCap {
            neurons,
            cap: EXHAUSTIVE_CAP,
        });
    }
    if a0.dim() != net.input_dim() {
        return Err(Error::DomainDimension {
            domain: a0.dim(),
            network: net.input_dim(),
        });
    }
    let walk = Walk {
        net,
        kernel: LpKernel::new(tol),
        widths: net.activation_widths(),
    };
    let mut patterns = BTreeSet::new();
    if walk.kernel.inscribed_ball(a0, tol.eps_dim)?.is_none() {
        return Ok(PatternSet {
            patterns,
            method: PatternMethod::ExhaustiveLp,
        });
    }
    if walk.widths.is_empty() {
        patterns.insert(SignPattern::default());
        return Ok(PatternSet {
            patterns,
            method: PatternMethod::ExhaustiveLp,
        });
    }

    // Split the tree on the first layer's patterns and walk the subtrees in parallel.
    let w1 = walk.widths[0];
    let first = pattern_preactivation(net, &[], 0);
    let heads: Vec<Vec<bool>> = (0..1u32 << w1)
        .map(|m| (0..w1).map(|i| m >> i & 1 == 1).collect())
        .collect();
    let executor = Executor::new(parallelism)?;
    let found = executor.map(&heads, |head| -> Result<Vec<SignPattern>, Error> {
        let mut poly = a0.clone();
        for (i, &positive) in head.iter().enumerate() {
            let normal: Vec<f64> = first.0.row(i).iter().copied().collect();
            match side_of(normal, first.1[i], positive) {
                Side::Fails => return Ok(Vec::new()),
                Side::Holds => {}
                Side::Constrain(h) => poly.push(h)?,
            }
        }
        if walk.kernel.inscribed_ball(&poly, tol.eps_dim)?.is_none() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut bits = vec![head.clone()];
        walk.extend(&poly, &mut bits, &Some(first.clone()), &mut out)?;
        Ok(out)
    });
    for f in found {
        patterns.extend(f?);
    }
    Ok(PatternSet {
        patterns,
        method: PatternMethod::ExhaustiveLp,
    })
}

/// Sign patterns observed on a regular `resolution^d0` grid over the
/// bounding box of `a0`. Points outside `a0` or within 1e-12 of a neuron
/// boundary are skipped, so every observed pattern is a real region.
pub fn grid_sample_patterns(net: &Network, a0: &HPolytope, resolution: usize) -> Result<PatternSet, Error> {
    let d = a0.dim();
    if d != net.input_dim() {
        return Err(Error::DomainDimension {
            domain: d,
            network: net.input_dim(),
        });
    }
    if d > 3 {
        return Err(Error::Invalid(format!("grid sampling supports d0 <= 3, found {d}")));
    }
    if resolution < 2 {
        return Err(Error::Invalid("grid resolution must be at least 2".into()));
    }
    let kernel = LpKernel::new(Tolerances::default());
    let (lo, hi) = kernel.bounding_box(a0).map_err(|e| match e {
        crate::geometry::GeometryError::Unbounded => Error::UnboundedDomain,
        crate::geometry::GeometryError::Infeasible => Error::EmptyDomain,
        e => e.into(),
    })?;
    let depth = net.activation_layers().len();
    let mut patterns = BTreeSet::new();
    let total = resolution.pow(d as u32);
    let mut x = vec![0.0; d];
    for idx in 0..total {
        let mut rest = idx;
        for k in 0..d {
            let i = rest % resolution;
            rest /= resolution;
            x[k] = lo[k] + (hi[k] - lo[k]) * i as f64 / (resolution - 1) as f64;
        }
        if !a0.contains(&x, 0.0) {
            continue;
        }
        let trace = net.forward_trace(&x)?;
        if trace.preactivations.iter().flatten().any(|t| t.abs() <= GRID_BOUNDARY) {
            continue;
        }
        patterns.insert(SignPattern::new(
            trace
                .preactivations
                .iter()
                .take(depth)
                .map(|z| z.iter().map(|t| is_positive(*t)).collect())
                .collect(),
        ));
    }
    Ok(PatternSet {
        patterns,
        method: PatternMethod::Grid,
    })
}

/// Number of sidedness vectors of `hyperplanes` whose cell inside `bounds`
/// has Chebyshev radius above `eps_dim`.
pub fn count_cells_bruteforce(hyperplanes: &[Hyperplane], bounds: &HPolytope, tol: Tolerances) -> Result<usize, Error> {
    let m = hyperplanes.len();
    if m > EXHAUSTIVE_CAP {
        return Err(Error::OracleCap {
            neurons: m,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let kernel = LpKernel::new(tol);
    let mut count = 0;
    for mask in 0..1u64 << m {
        let mut poly = bounds.clone();
        for (i, h) in hyperplanes.iter().enumerate() {
            poly.push(h.side(mask >> i & 1 == 1))?;
        }
        if kernel.inscribed_ball(&poly, tol.eps_dim)?.is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// Slope-frozen output map of a full sign pattern, from the bits alone.
pub fn pattern_output_affine(net: &Network, pattern: &SignPattern) -> (DMatrix<f64>, DVector<f64>) {
    pattern_map(net, pattern.layers(), None)
}
