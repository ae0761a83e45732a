use serde::{Deserialize, Serialize};

use super::ModelConfig;
use crate::error::{Error, Result};
use crate::numeric::{glorot_init, Matrix, Scalar, SeededRng};

/// One matrix per trainable tensor of the LSTM regressor. Used for the
/// parameters themselves, their gradients and both Adam moment accumulators.
///
/// Gate weights `w_*` are `hidden × input`, recurrent weights `u_*` are
/// `hidden × hidden`, biases are column vectors. The head is a `tanh` dense
/// layer (`w_1`, `b_1`) followed by a linear output layer (`w_2`, `b_2`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet<T> {
    pub w_i: Matrix<T>,
    pub w_f: Matrix<T>,
    pub w_o: Matrix<T>,
    pub w_g: Matrix<T>,
    pub u_i: Matrix<T>,
    pub u_f: Matrix<T>,
    pub u_o: Matrix<T>,
    pub u_g: Matrix<T>,
    pub b_i: Matrix<T>,
    pub b_f: Matrix<T>,
    pub b_o: Matrix<T>,
    pub b_g: Matrix<T>,
    pub w_1: Matrix<T>,
    pub b_1: Matrix<T>,
    pub w_2: Matrix<T>,
    pub b_2: Matrix<T>,
}

pub type ModelParams<T> = ParamSet<T>;
pub type Gradients<T> = ParamSet<T>;

impl<T: Scalar> ParamSet<T> {
    pub const NAMES: [&'static str; 16] = [
        "w_i", "w_f", "w_o", "w_g", "u_i", "u_f", "u_o", "u_g", "b_i", "b_f", "b_o", "b_g", "w_1", "b_1", "w_2", "b_2",
    ];

    pub fn zeros(cfg: &ModelConfig) -> Self {
        let (h, x, d, y) = (cfg.hidden_dim, cfg.input_dim, cfg.dense_dim, cfg.output_dim);
        Self {
            w_i: Matrix::zeros(h, x),
            w_f: Matrix::zeros(h, x),
            w_o: Matrix::zeros(h, x),
            w_g: Matrix::zeros(h, x),
            u_i: Matrix::zeros(h, h),
            u_f: Matrix::zeros(h, h),
            u_o: Matrix::zeros(h, h),
            u_g: Matrix::zeros(h, h),
            b_i: Matrix::zeros(h, 1),
            b_f: Matrix::zeros(h, 1),
            b_o: Matrix::zeros(h, 1),
            b_g: Matrix::zeros(h, 1),
            w_1: Matrix::zeros(d, h),
            b_1: Matrix::zeros(d, 1),
            w_2: Matrix::zeros(y, d),
            b_2: Matrix::zeros(y, 1),
        }
    }

    pub fn tensors(&self) -> [&Matrix<T>; 16] {
        [
            &self.w_i, &self.w_f, &self.w_o, &self.w_g, &self.u_i, &self.u_f, &self.u_o, &self.u_g, &self.b_i,
            &self.b_f, &self.b_o, &self.b_g, &self.w_1, &self.b_1, &self.w_2, &self.b_2,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut Matrix<T>; 16] {
        [
            &mut self.w_i,
            &mut self.w_f,
            &mut self.w_o,
            &mut self.w_g,
            &mut self.u_i,
            &mut self.u_f,
            &mut self.u_o,
            &mut self.u_g,
            &mut self.b_i,
            &mut self.b_f,
            &mut self.b_o,
            &mut self.b_g,
            &mut self.w_1,
            &mut self.b_1,
            &mut self.w_2,
            &mut self.b_2,
        ]
    }

    pub fn len(&self) -> usize {
        self.tensors().iter().map(|m| m.as_slice().len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|m| m.is_finite())
    }

    pub fn global_norm(&self) -> T {
        self.tensors().iter().map(|m| m.sum_sq()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    pub fn scale(&mut self, s: T) {
        for m in self.tensors_mut() {
            m.scale(s);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            a.add_assign(b);
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.tensors().iter().zip(other.tensors()).all(|(a, b)| a.shape() == b.shape())
    }

    /// Checks every tensor has the shape `cfg` implies.
    pub fn check_shapes(&self, cfg: &ModelConfig) -> Result<()> {
        let expected = Self::zeros(cfg);
        for ((name, got), want) in Self::NAMES.iter().zip(self.tensors()).zip(expected.tensors()) {
            if got.shape() != want.shape() {
                return Err(Error::Shape(format!("{name} is {:?}, expected {:?}", got.shape(), want.shape())));
            }
        }
        Ok(())
    }

    pub fn cast<U: Scalar>(&self) -> ParamSet<U> {
        let t = self.tensors();
        ParamSet {
            w_i: t[0].cast(),
            w_f: t[1].cast(),
            w_o: t[2].cast(),
            w_g: t[3].cast(),
            u_i: t[4].cast(),
            u_f: t[5].cast(),
            u_o: t[6].cast(),
            u_g: t[7].cast(),
            b_i: t[8].cast(),
            b_f: t[9].cast(),
            b_o: t[10].cast(),
            b_g: t[11].cast(),
            w_1: t[12].cast(),
            b_1: t[13].cast(),
            w_2: t[14].cast(),
            b_2: t[15].cast(),
        }
    }
}

/// Glorot-uniform weights in field order, zero biases except the forget gate
/// bias, which starts at 1.
pub fn init_model<T: Scalar>(cfg: &ModelConfig, rng: &mut SeededRng) -> Result<ModelParams<T>> {
    cfg.validate()?;
    let (h, x, d, y) = (cfg.hidden_dim, cfg.input_dim, cfg.dense_dim, cfg.output_dim);
    let mut p = ParamSet::zeros(cfg);
    p.w_i = glorot_init(h, x, rng);
    p.w_f = glorot_init(h, x, rng);
    p.w_o = glorot_init(h, x, rng);
    p.w_g = glorot_init(h, x, rng);
    p.u_i = glorot_init(h, h, rng);
    p.u_f = glorot_init(h, h, rng);
    p.u_o = glorot_init(h, h, rng);
    p.u_g = glorot_init(h, h, rng);
    p.b_f = Matrix::filled(h, 1, T::one());
    p.w_1 = glorot_init(d, h, rng);
    p.w_2 = glorot_init(y, d, rng);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biases_follow_init_rule() {
        let cfg = ModelConfig { hidden_dim: 6, dense_dim: 4, ..ModelConfig::default() };
        let p: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(1)).unwrap();
        for b in [&p.b_i, &p.b_o, &p.b_g, &p.b_1, &p.b_2] {
            assert!(b.as_slice().iter().all(|&v| v == 0.0));
        }
        assert!(p.b_f.as_slice().iter().all(|&v| v == 1.0));
        assert!(p.w_i.as_slice().iter().any(|&v| v != 0.0));
        p.check_shapes(&cfg).unwrap();
        assert_eq!(p.len(), 4 * (6 * 5 + 6 * 6 + 6) + 4 * 6 + 4 + 2 * 4 + 2);
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = ModelConfig { hidden_dim: 3, dense_dim: 3, ..ModelConfig::default() };
        let a: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(4)).unwrap();
        let b: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(4)).unwrap();
        let c: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = ModelConfig { hidden_dim: 0, ..ModelConfig::default() };
        assert!(init_model::<f64>(&cfg, &mut SeededRng::new(0)).is_err());
        let cfg = ModelConfig { learning_rate: 0.0, ..ModelConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
