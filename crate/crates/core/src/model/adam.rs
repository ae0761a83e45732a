use serde::{Deserialize, Serialize};

use super::params::{Gradients, ModelParams, ParamSet};
use super::ModelConfig;
use crate::error::{Error, Result};
use crate::numeric::Scalar;

/// First and second moment estimates per parameter plus the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState<T> {
    pub m: ParamSet<T>,
    pub v: ParamSet<T>,
    pub t: u64,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        let zeros = Gradients::zeros_like(params);
        Self { m: zeros.clone(), v: zeros, t: 0 }
    }
}

/// One bias-corrected Adam update in place.
pub fn adam_step<T: Scalar>(
    params: &mut ModelParams<T>,
    grads: &Gradients<T>,
    state: &mut AdamState<T>,
    cfg: &ModelConfig,
) -> Result<()> {
    if !params.same_shape(grads) || !params.same_shape(&state.m) || !params.same_shape(&state.v) {
        return Err(Error::Shape("parameters, gradients and Adam moments differ in shape".into()));
    }
    state.t += 1;
    let b1 = T::of(cfg.adam_beta1);
    let b2 = T::of(cfg.adam_beta2);
    let eps = T::of(cfg.adam_epsilon);
    let lr = T::of(cfg.learning_rate);
    let t = i32::try_from(state.t).unwrap_or(i32::MAX);
    let bc1 = T::one() - b1.powi(t);
    let bc2 = T::one() - b2.powi(t);

    let params_t = params.tensors_mut();
    let grads_t = grads.tensors();
    let m_t = state.m.tensors_mut();
    let v_t = state.v.tensors_mut();
    for (((p, g), m), v) in params_t.into_iter().zip(grads_t).zip(m_t).zip(v_t) {
        for (((p, &g), m), v) in p
            .as_mut_slice()
            .iter_mut()
            .zip(g.as_slice())
            .zip(m.as_mut_slice().iter_mut())
            .zip(v.as_mut_slice().iter_mut())
        {
            *m = b1 * *m + (T::one() - b1) * g;
            *v = b2 * *v + (T::one() - b2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    if !params.is_finite() {
        return Err(Error::NonFinite("Adam update produced non-finite parameters".into()));
    }
    Ok(())
}

/// Rescales `grads` so its global L2 norm is at most `max_norm`. Returns the norm before clipping.
pub fn clip_global_norm<T: Scalar>(grads: &mut Gradients<T>, max_norm: T) -> T {
    let norm = grads.global_norm();
    if norm > max_norm {
        grads.scale(max_norm / norm);
    }
    norm
}
