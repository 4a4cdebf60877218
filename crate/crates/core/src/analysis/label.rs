use crate::enumerate::{EnumerationResult, Region};
use crate::geometry::Hyperplane;
use crate::network::{EffectiveAffine, Network};
use crate::Error;

/// A maximal region with its class and output map.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRegion {
    pub region: Region,
    /// Argmax of the network output at the representative.
    pub label: usize,
    pub output_affine: EffectiveAffine,
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

impl LabeledRegion {
    /// Score gap `(W_i - W_j)·x + (b_i - b_j)` between classes `i` and `j`.
    pub fn score_gap(&self, i: usize, j: usize, x: &[f64]) -> f64 {
        let y = self.output_affine.eval(x);
        y[i] - y[j]
    }

    /// Hyperplane where classes `i` and `j` tie on this region, or `None`
    /// when their scores differ by a constant.
    pub fn decision_boundary(&self, i: usize, j: usize) -> Option<Hyperplane> {
        let w = &self.output_affine.weight;
        let normal: Vec<f64> = (w.row(i) - w.row(j)).iter().copied().collect();
        Hyperplane::new(normal, self.output_affine.bias[i] - self.output_affine.bias[j])
    }
}

pub fn label_regions(net: &Network, result: &EnumerationResult) -> Result<Vec<LabeledRegion>, Error> {
    let depth = net.depth();
    result
        .regions
        .iter()
        .map(|r| {
            let y = net.forward(&r.representative)?;
            Ok(LabeledRegion {
                region: r.clone(),
                label: argmax(y.as_slice()),
                output_affine: net.effective_affine(&r.representative, depth)?,
            })
        })
        .collect()
}
