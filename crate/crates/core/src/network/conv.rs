use nalgebra::{DMatrix, DVector};

use super::{LayerSpec, NetworkError};

/// A 2D convolution over a `channels × height × width` input, flattened in
/// channel-major (CHW) order. `weight` is laid out as
/// `[out_channel][in_channel][kernel_row][kernel_col]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvSpec {
    pub in_channels: usize,
    pub out_channels: usize,
    pub height: usize,
    pub width: usize,
    pub kernel_h: usize,
    pub kernel_w: usize,
    pub stride: usize,
    pub padding: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl ConvSpec {
    pub fn output_hw(&self) -> Result<(usize, usize), NetworkError> {
        if self.stride == 0 {
            return Err(NetworkError::Shape("stride must be positive".into()));
        }
        let ph = self.height + 2 * self.padding;
        let pw = self.width + 2 * self.padding;
        if self.kernel_h == 0 || self.kernel_w == 0 || self.kernel_h > ph || self.kernel_w > pw {
            return Err(NetworkError::Shape(format!(
                "kernel {}x{} does not fit padded input {ph}x{pw}",
                self.kernel_h, self.kernel_w
            )));
        }
        Ok((
            (ph - self.kernel_h) / self.stride + 1,
            (pw - self.kernel_w) / self.stride + 1,
        ))
    }

    pub fn input_len(&self) -> usize {
        self.in_channels * self.height * self.width
    }

    fn kernel(&self, o: usize, i: usize, r: usize, c: usize) -> f64 {
        self.weight[((o * self.in_channels + i) * self.kernel_h + r) * self.kernel_w + c]
    }
}

/// Lowers a convolution to the equivalent dense matrix, with zero entries
/// where the kernel does not reach and shared weights repeated.
pub fn lower_conv(spec: &ConvSpec) -> Result<LayerSpec, NetworkError> {
    let (oh, ow) = spec.output_hw()?;
    let expected = spec.out_channels * spec.in_channels * spec.kernel_h * spec.kernel_w;
    if spec.weight.len() != expected {
        return Err(NetworkError::Shape(format!(
            "expected {expected} kernel weights, found {}",
            spec.weight.len()
        )));
    }
    if spec.bias.len() != spec.out_channels {
        return Err(NetworkError::Shape(format!(
            "expected {} biases, found {}",
            spec.out_channels,
            spec.bias.len()
        )));
    }
    let rows = spec.out_channels * oh * ow;
    let mut weight = DMatrix::zeros(rows, spec.input_len());
    let mut bias = DVector::zeros(rows);
    for o in 0..spec.out_channels {
        for y in 0..oh {
            for x in 0..ow {
                let row = (o * oh + y) * ow + x;
                bias[row] = spec.bias[o];
                for i in 0..spec.in_channels {
                    for r in 0..spec.kernel_h {
                        for c in 0..spec.kernel_w {
                            let iy = (y * spec.stride + r) as isize - spec.padding as isize;
                            let ix = (x * spec.stride + c) as isize - spec.padding as isize;
                            if iy < 0 || ix < 0 || iy >= spec.height as isize || ix >= spec.width as isize {
                                continue;
                            }
                            let col = (i * spec.height + iy as usize) * spec.width + ix as usize;
                            weight[(row, col)] += spec.kernel(o, i, r, c);
                        }
                    }
                }
            }
        }
    }
    Ok(LayerSpec::FlattenedConv { weight, bias })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(in_c: usize, out_c: usize, hw: usize, k: usize, stride: usize, pad: usize) -> ConvSpec {
        ConvSpec {
            in_channels: in_c,
            out_channels: out_c,
            height: hw,
            width: hw,
            kernel_h: k,
            kernel_w: k,
            stride,
            padding: pad,
            weight: vec![0.0; out_c * in_c * k * k],
            bias: vec![0.0; out_c],
        }
    }

    /// Direct sliding-window convolution.
    fn direct(s: &ConvSpec, input: &[f64]) -> Vec<f64> {
        let (oh, ow) = s.output_hw().unwrap();
        let mut out = vec![0.0; s.out_channels * oh * ow];
        for o in 0..s.out_channels {
            for y in 0..oh {
                for x in 0..ow {
                    let mut acc = s.bias[o];
                    for i in 0..s.in_channels {
                        for r in 0..s.kernel_h {
                            for c in 0..s.kernel_w {
                                let iy = (y * s.stride + r) as isize - s.padding as isize;
                                let ix = (x * s.stride + c) as isize - s.padding as isize;
                                if iy >= 0 && ix >= 0 && (iy as usize) < s.height && (ix as usize) < s.width {
                                    acc += s.kernel(o, i, r, c)
                                        * input[(i * s.height + iy as usize) * s.width + ix as usize];
                                }
                            }
                        }
                    }
                    out[(o * oh + y) * ow + x] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn one_by_one_is_diagonal() {
        let mut s = spec(1, 1, 3, 1, 1, 0);
        s.weight = vec![2.5];
        let LayerSpec::FlattenedConv { weight, .. } = lower_conv(&s).unwrap() else { panic!() };
        assert_eq!(weight, DMatrix::identity(9, 9) * 2.5);
    }

    #[test]
    fn three_by_three_on_four_by_four() {
        let s = spec(1, 2, 4, 3, 1, 0);
        let LayerSpec::FlattenedConv { weight, bias } = lower_conv(&s).unwrap() else { panic!() };
        assert_eq!((weight.nrows(), weight.ncols()), (8, 16));
        assert_eq!(bias.len(), 8);
    }

    #[test]
    fn shape_errors() {
        let mut s = spec(1, 1, 2, 3, 1, 0);
        assert!(lower_conv(&s).is_err());
        s = spec(1, 1, 4, 3, 0, 0);
        assert!(lower_conv(&s).is_err());
        s = spec(1, 1, 4, 3, 1, 0);
        s.weight.pop();
        assert!(lower_conv(&s).is_err());
    }

    #[test]
    fn lowered_matches_direct_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (stride, pad) in [(1, 0), (2, 1), (1, 1)] {
            let mut s = spec(2, 2, 5, 3, stride, pad);
            s.weight.iter_mut().for_each(|w| *w = rng.random_range(-1.0..1.0));
            s.bias.iter_mut().for_each(|b| *b = rng.random_range(-1.0..1.0));
            let LayerSpec::FlattenedConv { weight, bias } = lower_conv(&s).unwrap() else { panic!() };
            for _ in 0..50 {
                let x: Vec<f64> = (0..s.input_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let lowered = &weight * DVector::from_column_slice(&x) + &bias;
                let expected = direct(&s, &x);
                for (a, b) in lowered.iter().zip(&expected) {
                    assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }
}
