//! Seeded networks and arrangements used by tests, benches and the CLI.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Hyperplane;
use crate::network::{fold_batchnorm, LayerSpec, Network};

fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, half: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-half..half))
}

fn uniform_vector(rng: &mut ChaCha8Rng, len: usize, half: f64) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-half..half))
}

/// Fully connected net `input_dim -> widths... -> output_dim` with a
/// two-slope activation `(1, slope_neg)` after every hidden layer. Weights are
/// U(-1, 1) and biases U(-0.5, 0.5).
pub fn random_mlp(input_dim: usize, widths: &[usize], output_dim: usize, slope_neg: f64, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::new();
    let mut prev = input_dim;
    for &w in widths {
        layers.push(LayerSpec::dense(
            uniform_matrix(&mut rng, w, prev, 1.0),
            uniform_vector(&mut rng, w, 0.5),
        ));
        layers.push(LayerSpec::leaky_relu(slope_neg));
        prev = w;
    }
    layers.push(LayerSpec::dense(
        uniform_matrix(&mut rng, output_dim, prev, 1.0),
        uniform_vector(&mut rng, output_dim, 0.5),
    ));
    Network::new(input_dim, layers).expect("generated layers chain")
}

/// Same architecture as [`residual_batchnorm_net`] before batch norm is folded.
pub fn residual_batchnorm_ops(seed: u64) -> Vec<LayerSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 3;
    let mut dense = |rows, cols| LayerSpec::dense(uniform_matrix(&mut rng, rows, cols, 1.0), uniform_vector(&mut rng, rows, 0.5));
    let stem = dense(w, 2);
    let b1 = dense(w, w);
    let b2a = dense(w, w);
    let b2b = dense(w, w);
    let head = dense(2, w);
    let bn = LayerSpec::BatchNorm {
        scale: DVector::from_vec(vec![1.5, 0.5, -0.8]),
        shift: DVector::from_vec(vec![0.1, -0.2, 0.05]),
    };
    vec![
        stem,
        LayerSpec::relu(),
        LayerSpec::ResidualBegin,
        b1,
        bn,
        LayerSpec::relu(),
        LayerSpec::ResidualEnd,
        LayerSpec::ResidualBegin,
        b2a,
        LayerSpec::leaky_relu(0.1),
        b2b,
        LayerSpec::ResidualEnd,
        head,
    ]
}

/// A 2D net with two residual blocks, one holding a batch norm, with the
/// batch norm folded into the adjacent dense layer. Nine activation neurons.
pub fn residual_batchnorm_net(seed: u64) -> Network {
    let raw = Network::new(2, residual_batchnorm_ops(seed)).expect("fixture layers chain");
    fold_batchnorm(&raw).expect("batch norm follows a dense layer")
}

/// `count` lines whose pairwise intersections are distinct and lie inside
/// `[-inner, inner]^2`, no two parallel and no three concurrent.
pub fn general_position_lines(count: usize, inner: f64, seed: u64) -> Vec<Hyperplane> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: loop {
        let lines: Vec<Hyperplane> = (0..count)
            .map(|_| {
                let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
                let p = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
                let n = [theta.cos(), theta.sin()];
                Hyperplane::new(n.to_vec(), -(n[0] * p[0] + n[1] * p[1])).expect("unit normal")
            })
            .collect();
        let mut points = Vec::new();
        for i in 0..count {
            for j in i + 1..count {
                let (a, b) = (&lines[i], &lines[j]);
                let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
                if det.abs() < 0.1 {
                    continue 'attempt;
                }
                let x = (-a.offset * b.normal[1] + b.offset * a.normal[1]) / det;
                let y = (-a.normal[0] * b.offset + b.normal[0] * a.offset) / det;
                if x.abs() > inner || y.abs() > inner {
                    continue 'attempt;
                }
                points.push([x, y]);
            }
        }
        for (k, p) in points.iter().enumerate() {
            if points[k + 1..]
                .iter()
                .any(|q| (p[0] - q[0]).hypot(p[1] - q[1]) < 1e-3)
            {
                continue 'attempt;
            }
        }
        return lines;
    }
}

/// A one-activation-layer net whose neurons are exactly `lines`.
pub fn arrangement_net(lines: &[Hyperplane]) -> Network {
    let d = lines.first().map_or(2, |h| h.dim());
    let weight = DMatrix::from_fn(lines.len(), d, |i, j| lines[i].normal[j]);
    let bias = DVector::from_iterator(lines.len(), lines.iter().map(|h| h.offset));
    let m = lines.len();
    Network::new(
        d,
        vec![
            LayerSpec::dense(weight, bias),
            LayerSpec::relu(),
            LayerSpec::dense(DMatrix::from_element(1, m, 1.0), DVector::zeros(1)),
        ],
    )
    .expect("arrangement layers chain")
}
