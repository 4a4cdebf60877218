//! Continuous piecewise-affine networks: a list of affine ops and two-slope
//! activations, with residual blocks expressed as begin/end markers.

mod conv;
mod fold;
mod io;

pub use conv::{lower_conv, ConvSpec};
pub use fold::fold_batchnorm;
pub use io::{LayerJson, NetworkJson};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::geometry::{Hyperplane, ZERO_NORMAL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("dimension mismatch at layer {layer}: expected {expected}, found {found}")]
    DimensionMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("invalid network structure: {0}")]
    Structure(String),
    #[error("invalid convolution shape: {0}")]
    Shape(String),
    #[error("invalid network document: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayerSpec {
    Dense {
        weight: DMatrix<f64>,
        bias: DVector<f64>,
    },
    /// `σ(t) = slope_pos·t` for `t > 0`, `slope_neg·t` otherwise.
    Activation { slope_pos: f64, slope_neg: f64 },
    /// Inference-mode batch norm with statistics already folded into `scale` and `shift`.
    BatchNorm {
        scale: DVector<f64>,
        shift: DVector<f64>,
    },
    ResidualBegin,
    ResidualEnd,
    /// A convolution lowered to its dense matrix.
    FlattenedConv {
        weight: DMatrix<f64>,
        bias: DVector<f64>,
    },
}

impl LayerSpec {
    pub fn dense(weight: DMatrix<f64>, bias: DVector<f64>) -> Self {
        Self::Dense { weight, bias }
    }

    pub fn relu() -> Self {
        Self::Activation {
            slope_pos: 1.0,
            slope_neg: 0.0,
        }
    }

    pub fn leaky_relu(slope_neg: f64) -> Self {
        Self::Activation {
            slope_pos: 1.0,
            slope_neg,
        }
    }

    fn is_affine_map(&self) -> bool {
        matches!(self, Self::Dense { .. } | Self::FlattenedConv { .. })
    }
}

/// Slope selector: `slope_pos` for `t > 0`, `slope_neg` for `t <= 0`.
pub fn slope(t: f64, slope_pos: f64, slope_neg: f64) -> f64 {
    if t > 0.0 {
        slope_pos
    } else {
        slope_neg
    }
}

/// Sign convention for pre-activations: `t <= 0` counts as negative.
pub fn is_positive(t: f64) -> bool {
    t > 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationLayer {
    /// Position in the op list.
    pub op_index: usize,
    pub width: usize,
    pub slope_pos: f64,
    pub slope_neg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    input_dim: usize,
    output_dim: usize,
    layers: Vec<LayerSpec>,
    activations: Vec<ActivationLayer>,
}

/// Pre-activations of every activation layer plus the network output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub preactivations: Vec<DVector<f64>>,
    pub output: DVector<f64>,
}

/// Per-activation-layer sign bits; `true` marks a strictly positive pre-activation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignPattern {
    layers: Vec<Vec<bool>>,
}

impl SignPattern {
    pub fn new(layers: Vec<Vec<bool>>) -> Self {
        Self { layers }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<bool>] {
        &self.layers
    }

    /// Total number of bits.
    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn with_layer(&self, bits: Vec<bool>) -> Self {
        let mut layers = self.layers.clone();
        layers.push(bits);
        Self { layers }
    }

    pub fn truncated(&self, depth: usize) -> Self {
        Self {
            layers: self.layers[..depth.min(self.layers.len())].to_vec(),
        }
    }

    /// Layer-major `0/1` string, `1` for positive.
    pub fn to_bitstring(&self) -> String {
        self.bits().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Splits a flat bitstring into layers of the given widths.
    pub fn from_bitstring(s: &str, widths: &[usize]) -> Option<Self> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '1' => Some(true),
                '0' => Some(false),
                _ => None,
            })
            .collect::<Option<_>>()?;
        if bits.len() != widths.iter().sum::<usize>() {
            return None;
        }
        let mut layers = Vec::with_capacity(widths.len());
        let mut start = 0;
        for &w in widths {
            layers.push(bits[start..start + w].to_vec());
            start += w;
        }
        Some(Self { layers })
    }
}

/// The affine map `x ↦ W x + b` a network realizes on one region.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveAffine {
    pub weight: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl EffectiveAffine {
    pub fn identity(dim: usize) -> Self {
        Self {
            weight: DMatrix::identity(dim, dim),
            bias: DVector::zeros(dim),
        }
    }

    pub fn eval(&self, x: &[f64]) -> DVector<f64> {
        &self.weight * DVector::from_column_slice(x) + &self.bias
    }

    pub fn rows(&self) -> usize {
        self.weight.nrows()
    }

    fn compose_dense(&mut self, weight: &DMatrix<f64>, bias: &DVector<f64>) {
        self.weight = weight * &self.weight;
        self.bias = weight * &self.bias + bias;
    }

    fn scale_rows(&mut self, factors: &DVector<f64>) {
        for (i, f) in factors.iter().enumerate() {
            self.weight.row_mut(i).scale_mut(*f);
            self.bias[i] *= f;
        }
    }
}

/// What one neuron contributes to a region split.
#[derive(Debug, Clone, PartialEq)]
pub enum NeuronBoundary {
    Hyperplane(Hyperplane),
    /// Zero effective weight row: the pre-activation is constant with this sign.
    Constant { positive: bool },
}

impl Network {
    pub fn new(input_dim: usize, layers: Vec<LayerSpec>) -> Result<Self, NetworkError> {
        if input_dim == 0 {
            return Err(NetworkError::Structure("input dimension must be positive".into()));
        }
        let mut dim = input_dim;
        let mut stack: Vec<usize> = Vec::new();
        let mut activations = Vec::new();
        for (i, layer) in layers.iter().enumerate() {
            match layer {
                LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias } => {
                    if weight.ncols() != dim {
                        return Err(NetworkError::DimensionMismatch {
                            layer: i,
                            expected: dim,
                            found: weight.ncols(),
                        });
                    }
                    if bias.len() != weight.nrows() {
                        return Err(NetworkError::DimensionMismatch {
                            layer: i,
                            expected: weight.nrows(),
                            found: bias.len(),
                        });
                    }
                    if !weight.iter().chain(bias.iter()).all(|v| v.is_finite()) {
                        return Err(NetworkError::NonFinite(format!("weights of layer {i}")));
                    }
                    dim = weight.nrows();
                }
                LayerSpec::Activation {
                    slope_pos,
                    slope_neg,
                } => {
                    if !slope_pos.is_finite() || !slope_neg.is_finite() {
                        return Err(NetworkError::NonFinite(format!("slopes of layer {i}")));
                    }
                    activations.push(ActivationLayer {
                        op_index: i,
                        width: dim,
                        slope_pos: *slope_pos,
                        slope_neg: *slope_neg,
                    });
                }
                LayerSpec::BatchNorm { scale, shift } => {
                    for v in [scale, shift] {
                        if v.len() != dim {
                            return Err(NetworkError::DimensionMismatch {
                                layer: i,
                                expected: dim,
                                found: v.len(),
                            });
                        }
                    }
                    if !scale.iter().chain(shift.iter()).all(|v| v.is_finite()) {
                        return Err(NetworkError::NonFinite(format!("batch norm of layer {i}")));
                    }
                }
                LayerSpec::ResidualBegin => stack.push(dim),
                LayerSpec::ResidualEnd => {
                    let skip = stack.pop().ok_or_else(|| {
                        NetworkError::Structure(format!("residual end at layer {i} has no begin"))
                    })?;
                    if skip != dim {
                        return Err(NetworkError::DimensionMismatch {
                            layer: i,
                            expected: skip,
                            found: dim,
                        });
                    }
                }
            }
        }
        if !stack.is_empty() {
            return Err(NetworkError::Structure("unclosed residual block".into()));
        }
        if matches!(layers.last(), Some(LayerSpec::Activation { .. })) {
            return Err(NetworkError::Structure(
                "the final layer must be affine, not an activation".into(),
            ));
        }
        Ok(Self {
            input_dim,
            output_dim: dim,
            layers,
            activations,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    pub fn activation_layers(&self) -> &[ActivationLayer] {
        &self.activations
    }

    pub fn activation_widths(&self) -> Vec<usize> {
        self.activations.iter().map(|a| a.width).collect()
    }

    /// Number of activation neurons across all layers.
    pub fn neuron_count(&self) -> usize {
        self.activations.iter().map(|a| a.width).sum()
    }

    /// Depth `L`: activation layers plus the output layer. Layer `l < L` is
    /// the pre-activation of the `l`-th activation; layer `L` is the output.
    pub fn depth(&self) -> usize {
        self.activations.len() + 1
    }

    fn check_input(&self, x: &[f64]) -> Result<(), NetworkError> {
        if x.len() != self.input_dim {
            return Err(NetworkError::DimensionMismatch {
                layer: 0,
                expected: self.input_dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn forward_trace(&self, x: &[f64]) -> Result<Trace, NetworkError> {
        self.check_input(x)?;
        let mut v = DVector::from_column_slice(x);
        let mut stack: Vec<DVector<f64>> = Vec::new();
        let mut pre = Vec::with_capacity(self.activations.len());
        for (i, layer) in self.layers.iter().enumerate() {
            match layer {
                LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias } => {
                    v = weight * v + bias;
                }
                LayerSpec::Activation {
                    slope_pos,
                    slope_neg,
                } => {
                    pre.push(v.clone());
                    v.apply(|t| *t *= slope(*t, *slope_pos, *slope_neg));
                }
                LayerSpec::BatchNorm { scale, shift } => {
                    v = v.component_mul(scale) + shift;
                }
                LayerSpec::ResidualBegin => stack.push(v.clone()),
                LayerSpec::ResidualEnd => {
                    v += stack.pop().expect("validated residual nesting");
                }
            }
            if v.iter().any(|t| !t.is_finite()) {
                return Err(NetworkError::NonFinite(format!("output of layer {i}")));
            }
        }
        Ok(Trace {
            preactivations: pre,
            output: v,
        })
    }

    pub fn forward(&self, x: &[f64]) -> Result<DVector<f64>, NetworkError> {
        Ok(self.forward_trace(x)?.output)
    }

    /// Sign bits of the first `depth` activation layers at `x`.
    pub fn sign_pattern(&self, x: &[f64], depth: usize) -> Result<SignPattern, NetworkError> {
        let trace = self.forward_trace(x)?;
        Ok(SignPattern::new(
            trace
                .preactivations
                .iter()
                .take(depth)
                .map(|z| z.iter().map(|t| is_positive(*t)).collect())
                .collect(),
        ))
    }

    /// Effective `(W, b)` of layer `layer` (1-based, see [`Network::depth`])
    /// with every earlier activation frozen at its slope at `reference`.
    pub fn effective_affine(
        &self,
        reference: &[f64],
        layer: usize,
    ) -> Result<EffectiveAffine, NetworkError> {
        if layer == 0 || layer > self.depth() {
            return Err(NetworkError::Structure(format!(
                "layer {layer} is outside 1..={}",
                self.depth()
            )));
        }
        let trace = self.forward_trace(reference)?;
        let mut slopes = trace.preactivations.iter().zip(&self.activations).map(|(z, act)| {
            DVector::from_iterator(
                z.len(),
                z.iter().map(|t| slope(*t, act.slope_pos, act.slope_neg)),
            )
        });
        let mut affine = EffectiveAffine::identity(self.input_dim);
        let mut stack: Vec<EffectiveAffine> = Vec::new();
        let mut seen = 0;
        for op in &self.layers {
            match op {
                LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias } => {
                    affine.compose_dense(weight, bias);
                }
                LayerSpec::Activation { .. } => {
                    seen += 1;
                    if seen == layer {
                        return Ok(affine);
                    }
                    let gamma = slopes.next().expect("one trace entry per activation");
                    affine.scale_rows(&gamma);
                }
                LayerSpec::BatchNorm { scale, shift } => {
                    affine.scale_rows(scale);
                    affine.bias += shift;
                }
                LayerSpec::ResidualBegin => stack.push(affine.clone()),
                LayerSpec::ResidualEnd => {
                    let skip = stack.pop().expect("validated residual nesting");
                    affine.weight += skip.weight;
                    affine.bias += skip.bias;
                }
            }
        }
        Ok(affine)
    }

    /// One boundary per neuron of activation layer `layer` (1-based).
    pub fn layer_hyperplanes(
        &self,
        reference: &[f64],
        layer: usize,
    ) -> Result<Vec<NeuronBoundary>, NetworkError> {
        if layer == 0 || layer > self.activations.len() {
            return Err(NetworkError::Structure(format!(
                "activation layer {layer} is outside 1..={}",
                self.activations.len()
            )));
        }
        let affine = self.effective_affine(reference, layer)?;
        Ok(neuron_boundaries(&affine))
    }
}

/// Splits an effective map into per-neuron hyperplanes, screening zero rows.
pub fn neuron_boundaries(affine: &EffectiveAffine) -> Vec<NeuronBoundary> {
    (0..affine.rows())
        .map(|i| {
            let normal: Vec<f64> = affine.weight.row(i).iter().copied().collect();
            let offset = affine.bias[i];
            let norm = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= ZERO_NORMAL {
                NeuronBoundary::Constant {
                    positive: is_positive(offset),
                }
            } else {
                NeuronBoundary::Hyperplane(
                    Hyperplane::new(normal, offset).expect("non-zero normal"),
                )
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use nalgebra::dvector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar_net(act: LayerSpec) -> Network {
        Network::new(
            1,
            vec![
                LayerSpec::dense(dmatrix![2.0], dvector![1.0]),
                act,
                LayerSpec::dense(dmatrix![1.0], dvector![0.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn forward_examples() {
        let relu = scalar_net(LayerSpec::relu());
        assert_eq!(relu.forward(&[1.0]).unwrap()[0], 3.0);
        assert_eq!(relu.forward(&[-1.0]).unwrap()[0], 0.0);
        let leaky = scalar_net(LayerSpec::leaky_relu(0.5));
        assert_eq!(leaky.forward(&[-1.0]).unwrap()[0], -0.5);
    }

    #[test]
    fn forward_rejects_bad_input_and_overflow() {
        let relu = scalar_net(LayerSpec::relu());
        assert!(relu.forward(&[1.0, 2.0]).is_err());
        let huge = Network::new(
            1,
            vec![
                LayerSpec::dense(dmatrix![1e300], dvector![0.0]),
                LayerSpec::relu(),
                LayerSpec::dense(dmatrix![1e300], dvector![0.0]),
            ],
        )
        .unwrap();
        assert!(matches!(huge.forward(&[1e10]), Err(NetworkError::NonFinite(_))));
    }

    #[test]
    fn sign_pattern_examples() {
        let relu = scalar_net(LayerSpec::relu());
        assert_eq!(relu.sign_pattern(&[1.0], 1).unwrap().to_bitstring(), "1");
        // Pre-activation exactly zero counts as negative.
        assert_eq!(relu.sign_pattern(&[-0.5], 1).unwrap().to_bitstring(), "0");

        let net = Network::new(
            1,
            vec![
                LayerSpec::dense(dmatrix![1.0; -1.0], dvector![0.5, 0.5]),
                LayerSpec::relu(),
                LayerSpec::dense(dmatrix![1.0, 1.0; 1.0, -1.0], dvector![0.0, -5.0]),
                LayerSpec::relu(),
                LayerSpec::dense(dmatrix![1.0, 1.0], dvector![0.0]),
            ],
        )
        .unwrap();
        let p = net.sign_pattern(&[0.0], 2).unwrap();
        assert_eq!(p.depth(), 2);
        assert_eq!(p.len(), 4);
        assert_eq!(p.to_bitstring(), "1110");
        assert_eq!(SignPattern::from_bitstring("1110", &[2, 2]), Some(p));
    }

    #[test]
    fn validation() {
        assert!(Network::new(
            2,
            vec![LayerSpec::dense(DMatrix::zeros(3, 3), DVector::zeros(3))]
        )
        .is_err());
        assert!(Network::new(
            2,
            vec![LayerSpec::dense(DMatrix::zeros(3, 2), DVector::zeros(3)), LayerSpec::relu()]
        )
        .is_err());
        assert!(Network::new(2, vec![LayerSpec::ResidualBegin]).is_err());
        assert!(Network::new(2, vec![LayerSpec::ResidualEnd]).is_err());
        assert!(Network::new(
            2,
            vec![
                LayerSpec::ResidualBegin,
                LayerSpec::dense(DMatrix::zeros(3, 2), DVector::zeros(3)),
                LayerSpec::ResidualEnd
            ]
        )
        .is_err());
        assert!(Network::new(
            1,
            vec![
                LayerSpec::Activation {
                    slope_pos: f64::NAN,
                    slope_neg: 0.0
                },
                LayerSpec::dense(dmatrix![1.0], dvector![0.0])
            ]
        )
        .is_err());
    }

    fn two_layer(w1: DMatrix<f64>, b1: DVector<f64>, w2: DMatrix<f64>, b2: DVector<f64>) -> Network {
        let out = w2.nrows();
        Network::new(
            w1.ncols(),
            vec![
                LayerSpec::dense(w1, b1),
                LayerSpec::relu(),
                LayerSpec::dense(w2, b2),
                LayerSpec::relu(),
                LayerSpec::dense(DMatrix::identity(out, out), DVector::zeros(out)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn effective_affine_all_active_and_all_dead() {
        let w1 = dmatrix![1.0, 0.5; -0.3, 1.0];
        let b1 = dvector![2.0, 3.0];
        let w2 = dmatrix![0.7, -1.1; 0.2, 0.4];
        let b2 = dvector![0.1, -0.2];
        let net = two_layer(w1.clone(), b1.clone(), w2.clone(), b2.clone());
        // At the origin both first-layer pre-activations are positive.
        let eff = net.effective_affine(&[0.0, 0.0], 2).unwrap();
        assert!((eff.weight.clone() - &w2 * &w1).abs().max() < 1e-15);
        assert!((eff.bias.clone() - (&b2 + &w2 * &b1)).abs().max() < 1e-15);

        let dead = two_layer(w1.clone(), dvector![-5.0, -5.0], w2, b2.clone());
        let eff = dead.effective_affine(&[0.0, 0.0], 2).unwrap();
        assert_eq!(eff.weight, DMatrix::zeros(2, 2));
        assert_eq!(eff.bias, b2);
    }

    #[test]
    fn effective_affine_reproduces_preactivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rnd = |r: usize, c: usize| DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0));
        let net = Network::new(
            2,
            vec![
                LayerSpec::dense(rnd(3, 2), rnd(3, 1).column(0).into()),
                LayerSpec::relu(),
                LayerSpec::dense(rnd(3, 3), rnd(3, 1).column(0).into()),
                LayerSpec::leaky_relu(0.1),
                LayerSpec::dense(rnd(2, 3), rnd(2, 1).column(0).into()),
            ],
        )
        .unwrap();
        let x = [0.3, -0.6];
        let trace = net.forward_trace(&x).unwrap();
        for l in 1..=2 {
            let eff = net.effective_affine(&x, l).unwrap();
            assert!((eff.eval(&x) - &trace.preactivations[l - 1]).abs().max() <= 1e-10);
        }
        let eff = net.effective_affine(&x, 3).unwrap();
        assert!((eff.eval(&x) - &trace.output).abs().max() <= 1e-10);
        assert!(net.effective_affine(&x, 4).is_err());
    }

    #[test]
    fn first_layer_hyperplanes_ignore_reference() {
        let w1 = dmatrix![1.0, 0.5; -0.3, 1.0];
        let b1 = dvector![0.2, -0.1];
        let net = two_layer(w1, b1, dmatrix![1.0, -1.0; 0.5, 0.5], dvector![0.0, 0.1]);
        let a = net.layer_hyperplanes(&[0.9, 0.9], 1).unwrap();
        let b = net.layer_hyperplanes(&[-0.9, -0.9], 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a[0],
            NeuronBoundary::Hyperplane(Hyperplane::new(vec![1.0, 0.5], 0.2).unwrap())
        );
    }

    #[test]
    fn dead_neuron_yields_no_hyperplane() {
        let net = two_layer(
            dmatrix![0.0, 0.0; 1.0, 0.0],
            dvector![-1.0, 0.0],
            DMatrix::identity(2, 2),
            DVector::zeros(2),
        );
        let h = net.layer_hyperplanes(&[0.5, 0.5], 1).unwrap();
        assert_eq!(h[0], NeuronBoundary::Constant { positive: false });
        assert!(matches!(h[1], NeuronBoundary::Hyperplane(_)));
    }

    #[test]
    fn second_layer_hyperplanes_depend_on_first_layer_region() {
        // Layer 1 splits at x1 = 0 (neuron 0) and x2 = 0 (neuron 1).
        let net = two_layer(
            dmatrix![1.0, 0.0; 0.0, 1.0],
            dvector![0.0, 0.0],
            dmatrix![1.0, 1.0; 1.0, -2.0],
            dvector![-0.5, 0.0],
        );
        // Quadrant (+,+): normals are the rows of w2; quadrant (+,-): second column zeroed.
        let pp = net.layer_hyperplanes(&[0.5, 0.5], 2).unwrap();
        let pm = net.layer_hyperplanes(&[0.5, -0.5], 2).unwrap();
        let NeuronBoundary::Hyperplane(h_pp) = &pp[0] else { panic!() };
        let NeuronBoundary::Hyperplane(h_pm) = &pm[0] else { panic!() };
        assert_eq!(h_pp.normal, vec![1.0, 1.0]);
        assert_eq!(h_pm.normal, vec![1.0, 0.0]);
    }

    #[test]
    fn residual_with_zero_body_is_identity() {
        let net = Network::new(
            2,
            vec![
                LayerSpec::ResidualBegin,
                LayerSpec::dense(DMatrix::zeros(2, 2), DVector::zeros(2)),
                LayerSpec::relu(),
                LayerSpec::dense(DMatrix::zeros(2, 2), DVector::zeros(2)),
                LayerSpec::ResidualEnd,
            ],
        )
        .unwrap();
        let eff = net.effective_affine(&[0.3, 0.4], 2).unwrap();
        assert_eq!(eff.weight, DMatrix::identity(2, 2));
        assert_eq!(eff.bias, DVector::zeros(2));
        assert_eq!(net.forward(&[0.3, 0.4]).unwrap(), dvector![0.3, 0.4]);
    }

    #[test]
    fn activation_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..10_000 {
            let t: f64 = if i == 0 { 0.0 } else { rng.random_range(-5.0..5.0) };
            let (a, b) = (rng.random_range(0.1..2.0), rng.random_range(-1.0..1.0));
            let sigma = if t > 0.0 { a * t } else { b * t };
            assert_eq!(slope(t, a, b) * t, sigma);
        }
    }
}
