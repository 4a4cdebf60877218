use nalgebra::{DMatrix, DVector};

use crate::network::{LayerSpec, Network};
use crate::Error;

/// Restricts a network to the plane `base + t1·dir1 + t2·dir2`, giving a
/// network of input dimension 2 in `(t1, t2)`.
pub fn slice_network(net: &Network, base: &[f64], dir1: &[f64], dir2: &[f64]) -> Result<Network, Error> {
    let d = net.input_dim();
    for v in [base, dir1, dir2] {
        if v.len() != d {
            return Err(Error::Invalid(format!(
                "slice vectors must have length {d}, found {}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("slice vectors must be finite".into()));
        }
    }
    let (a, b) = (DVector::from_column_slice(dir1), DVector::from_column_slice(dir2));
    let gram = a.norm_squared() * b.norm_squared() - a.dot(&b).powi(2);
    if gram <= 1e-12 * a.norm_squared() * b.norm_squared() || a.norm_squared() == 0.0 {
        return Err(Error::DependentDirections);
    }
    let embed = DMatrix::from_columns(&[a, b]);
    let offset = DVector::from_column_slice(base);

    let mut layers = net.layers().to_vec();
    match layers.first_mut() {
        Some(LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias }) => {
            let composed = LayerSpec::Dense {
                weight: &*weight * &embed,
                bias: &*weight * &offset + &*bias,
            };
            layers[0] = composed;
        }
        _ => layers.insert(0, LayerSpec::dense(embed, offset)),
    }
    Ok(Network::new(2, layers)?)
}
