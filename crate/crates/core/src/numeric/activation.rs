use serde::{Deserialize, Serialize};

use super::{Matrix, Scalar};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Sigmoid,
    Tanh,
    Linear,
}

/// Logistic function in the branch form that never exponentiates a large positive argument.
#[inline]
pub fn sigmoid<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

impl Activation {
    #[inline]
    pub fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Activation::Sigmoid => sigmoid(x),
            Activation::Tanh => x.tanh(),
            Activation::Linear => x,
        }
    }

    /// Derivative written in terms of the activation's output `y`.
    #[inline]
    pub fn grad_from_output<T: Scalar>(self, y: T) -> T {
        match self {
            Activation::Sigmoid => y * (T::one() - y),
            Activation::Tanh => T::one() - y * y,
            Activation::Linear => T::one(),
        }
    }
}

pub fn activation<T: Scalar>(kind: Activation, x: &Matrix<T>) -> Result<Matrix<T>> {
    x.ensure_finite("activation input")?;
    Ok(x.map(|v| kind.apply(v)))
}

pub fn activation_grad<T: Scalar>(kind: Activation, y: &Matrix<T>) -> Matrix<T> {
    y.map(|v| kind.grad_from_output(v))
}
