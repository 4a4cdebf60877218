use nalgebra::{DMatrix, DVector};

use super::{LayerSpec, Network, NetworkError};

/// Merges every batch-norm layer into an adjacent dense layer: the one
/// right before it if there is one, otherwise the one right after it.
pub fn fold_batchnorm(net: &Network) -> Result<Network, NetworkError> {
    let layers = net.layers();
    let mut out: Vec<LayerSpec> = Vec::with_capacity(layers.len());
    let mut pending: Option<(DVector<f64>, DVector<f64>)> = None;
    for (i, layer) in layers.iter().enumerate() {
        match layer {
            LayerSpec::BatchNorm { scale, shift } => {
                if let Some(LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias }) =
                    out.last_mut()
                {
                    scale_rows(weight, bias, scale);
                    *bias += shift;
                } else if layers.get(i + 1).is_some_and(LayerSpec::is_affine_map) {
                    pending = Some((scale.clone(), shift.clone()));
                } else {
                    return Err(NetworkError::Structure(format!(
                        "batch norm at layer {i} is not adjacent to a dense layer"
                    )));
                }
            }
            LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias } => {
                let mut weight = weight.clone();
                let mut bias = bias.clone();
                if let Some((scale, shift)) = pending.take() {
                    bias += &weight * &shift;
                    for (j, s) in scale.iter().enumerate() {
                        weight.column_mut(j).scale_mut(*s);
                    }
                }
                out.push(match layer {
                    LayerSpec::Dense { .. } => LayerSpec::Dense { weight, bias },
                    _ => LayerSpec::FlattenedConv { weight, bias },
                });
            }
            other => out.push(other.clone()),
        }
    }
    Network::new(net.input_dim(), out)
}

fn scale_rows(weight: &mut DMatrix<f64>, bias: &mut DVector<f64>, scale: &DVector<f64>) {
    for (j, s) in scale.iter().enumerate() {
        weight.row_mut(j).scale_mut(*s);
        bias[j] *= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn folds_into_preceding_dense() {
        let net = Network::new(
            1,
            vec![
                LayerSpec::dense(dmatrix![3.0], dvector![0.5]),
                LayerSpec::BatchNorm {
                    scale: dvector![2.0],
                    shift: dvector![1.0],
                },
            ],
        )
        .unwrap();
        let folded = fold_batchnorm(&net).unwrap();
        assert_eq!(
            folded.layers(),
            &[LayerSpec::dense(dmatrix![6.0], dvector![2.0])]
        );
    }

    #[test]
    fn identity_batchnorm_is_a_no_op() {
        let w = dmatrix![1.0, -2.0; 0.5, 0.25];
        let b = dvector![0.1, 0.2];
        let net = Network::new(
            2,
            vec![
                LayerSpec::dense(w.clone(), b.clone()),
                LayerSpec::BatchNorm {
                    scale: dvector![1.0, 1.0],
                    shift: dvector![0.0, 0.0],
                },
            ],
        )
        .unwrap();
        assert_eq!(fold_batchnorm(&net).unwrap().layers(), &[LayerSpec::dense(w, b)]);
    }

    #[test]
    fn rejects_isolated_batchnorm() {
        let net = Network::new(
            1,
            vec![
                LayerSpec::dense(dmatrix![1.0], dvector![0.0]),
                LayerSpec::relu(),
                LayerSpec::BatchNorm {
                    scale: dvector![2.0],
                    shift: dvector![1.0],
                },
                LayerSpec::relu(),
                LayerSpec::dense(dmatrix![1.0], dvector![0.0]),
            ],
        )
        .unwrap();
        assert!(matches!(fold_batchnorm(&net), Err(NetworkError::Structure(_))));
    }

    #[test]
    fn folded_forward_matches_unfolded() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut m = |r: usize, c: usize| DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0));
        let v = |m: DMatrix<f64>| -> DVector<f64> { m.column(0).into() };
        let net = Network::new(
            3,
            vec![
                LayerSpec::BatchNorm { scale: v(m(3, 1)), shift: v(m(3, 1)) },
                LayerSpec::dense(m(4, 3), v(m(4, 1))),
                LayerSpec::BatchNorm { scale: v(m(4, 1)), shift: v(m(4, 1)) },
                LayerSpec::relu(),
                LayerSpec::ResidualBegin,
                LayerSpec::dense(m(4, 4), v(m(4, 1))),
                LayerSpec::BatchNorm { scale: v(m(4, 1)), shift: v(m(4, 1)) },
                LayerSpec::leaky_relu(0.1),
                LayerSpec::dense(m(4, 4), v(m(4, 1))),
                LayerSpec::ResidualEnd,
                LayerSpec::relu(),
                LayerSpec::dense(m(2, 4), v(m(2, 1))),
            ],
        )
        .unwrap();
        let folded = fold_batchnorm(&net).unwrap();
        assert!(folded
            .layers()
            .iter()
            .all(|l| !matches!(l, LayerSpec::BatchNorm { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = net.forward(&x).unwrap();
            let b = folded.forward(&x).unwrap();
            assert!((a - b).abs().max() <= 1e-12);
        }
    }
}
