use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{fold_batchnorm, lower_conv, ConvSpec, LayerSpec, Network, NetworkError};

/// Interchange form of a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub input_dim: usize,
    pub layers: Vec<LayerJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerJson {
    Dense {
        #[serde(rename = "W")]
        w: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    Activation {
        a: f64,
        b: f64,
    },
    Batchnorm {
        scale: Vec<f64>,
        shift: Vec<f64>,
    },
    Residual {
        body: Vec<LayerJson>,
    },
    Conv2d {
        /// `[out_channel][in_channel][kernel_row][kernel_col]`.
        weight: Vec<Vec<Vec<Vec<f64>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bias: Option<Vec<f64>>,
        shape: ConvShapeJson,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvShapeJson {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default)]
    pub padding: usize,
}

fn one() -> usize {
    1
}

fn matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, NetworkError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(NetworkError::Format("dense weight matrix is empty".into()));
    }
    if rows.iter().any(|r| r.len() != cols) {
        return Err(NetworkError::Format("dense weight rows differ in length".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn conv_spec(
    weight: &[Vec<Vec<Vec<f64>>>],
    bias: Option<&[f64]>,
    shape: &ConvShapeJson,
) -> Result<ConvSpec, NetworkError> {
    let out_channels = weight.len();
    let in_channels = weight.first().map_or(0, Vec::len);
    let kernel_h = weight.first().and_then(|w| w.first()).map_or(0, Vec::len);
    let kernel_w = weight
        .first()
        .and_then(|w| w.first())
        .and_then(|k| k.first())
        .map_or(0, Vec::len);
    if in_channels != shape.channels {
        return Err(NetworkError::Shape(format!(
            "kernel has {in_channels} input channels, shape declares {}",
            shape.channels
        )));
    }
    let ragged = weight.iter().any(|o| {
        o.len() != in_channels
            || o.iter()
                .any(|i| i.len() != kernel_h || i.iter().any(|r| r.len() != kernel_w))
    });
    if ragged {
        return Err(NetworkError::Shape("ragged convolution kernel".into()));
    }
    Ok(ConvSpec {
        in_channels,
        out_channels,
        height: shape.height,
        width: shape.width,
        kernel_h,
        kernel_w,
        stride: shape.stride,
        padding: shape.padding,
        weight: weight.iter().flatten().flatten().flatten().copied().collect(),
        bias: bias.map_or_else(|| vec![0.0; out_channels], <[f64]>::to_vec),
    })
}

fn flatten_layers(layers: &[LayerJson], out: &mut Vec<LayerSpec>) -> Result<(), NetworkError> {
    for layer in layers {
        match layer {
            LayerJson::Dense { w, b } => out.push(LayerSpec::Dense {
                weight: matrix(w)?,
                bias: DVector::from_column_slice(b),
            }),
            LayerJson::Activation { a, b } => out.push(LayerSpec::Activation {
                slope_pos: *a,
                slope_neg: *b,
            }),
            LayerJson::Batchnorm { scale, shift } => out.push(LayerSpec::BatchNorm {
                scale: DVector::from_column_slice(scale),
                shift: DVector::from_column_slice(shift),
            }),
            LayerJson::Residual { body } => {
                out.push(LayerSpec::ResidualBegin);
                flatten_layers(body, out)?;
                out.push(LayerSpec::ResidualEnd);
            }
            LayerJson::Conv2d {
                weight,
                bias,
                shape,
            } => out.push(lower_conv(&conv_spec(weight, bias.as_deref(), shape)?)?),
        }
    }
    Ok(())
}

fn nest_layers(layers: &[LayerSpec]) -> Vec<LayerJson> {
    let mut stack: Vec<Vec<LayerJson>> = vec![Vec::new()];
    for layer in layers {
        let json = match layer {
            LayerSpec::Dense { weight, bias } | LayerSpec::FlattenedConv { weight, bias } => {
                LayerJson::Dense {
                    w: weight
                        .row_iter()
                        .map(|r| r.iter().copied().collect())
                        .collect(),
                    b: bias.iter().copied().collect(),
                }
            }
            LayerSpec::Activation {
                slope_pos,
                slope_neg,
            } => LayerJson::Activation {
                a: *slope_pos,
                b: *slope_neg,
            },
            LayerSpec::BatchNorm { scale, shift } => LayerJson::Batchnorm {
                scale: scale.iter().copied().collect(),
                shift: shift.iter().copied().collect(),
            },
            LayerSpec::ResidualBegin => {
                stack.push(Vec::new());
                continue;
            }
            LayerSpec::ResidualEnd => LayerJson::Residual {
                body: stack.pop().expect("validated residual nesting"),
            },
        };
        stack.last_mut().expect("root frame").push(json);
    }
    stack.pop().expect("root frame")
}

impl NetworkJson {
    /// Validates the document, lowers convolutions and folds batch norm.
    pub fn into_network(self) -> Result<Network, NetworkError> {
        let mut layers = Vec::new();
        flatten_layers(&self.layers, &mut layers)?;
        let net = Network::new(self.input_dim, layers)?;
        fold_batchnorm(&net)
    }
}

impl From<&Network> for NetworkJson {
    fn from(net: &Network) -> Self {
        Self {
            input_dim: net.input_dim(),
            layers: nest_layers(net.layers()),
        }
    }
}

impl Network {
    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let doc: NetworkJson =
            serde_json::from_str(text).map_err(|e| NetworkError::Format(e.to_string()))?;
        doc.into_network()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetworkJson::from(self)).expect("network serializes")
    }
}
