//! Forward pass and backpropagation through time for the LSTM regressor.
//!
//! Per step, from a zero state:
//!
//! ```text
//! i = σ(W_i x + U_i h + b_i)    f = σ(W_f x + U_f h + b_f)
//! o = σ(W_o x + U_o h + b_o)    g = tanh(W_g x + U_g h + b_g)
//! c ← f ⊙ c + i ⊙ g             h ← o ⊙ tanh(c)
//! ```
//!
//! then `z = tanh(W_1 h_T + b_1)` and `y = W_2 z + b_2`.

use std::sync::Arc;

use super::params::{Gradients, ModelParams};
use crate::data::WindowedSample;
use crate::error::{Error, Result};
use crate::numeric::{sigmoid, Matrix, Scalar};

/// A `(window, target)` pair the model can train on.
pub trait Example<T> {
    fn inputs(&self) -> &Matrix<T>;
    fn targets(&self) -> &[T];
    fn describe(&self) -> String;
}

impl<T: Scalar> Example<T> for WindowedSample<T> {
    fn inputs(&self) -> &Matrix<T> {
        &self.inputs
    }
    fn targets(&self) -> &[T] {
        &self.targets
    }
    fn describe(&self) -> String {
        self.origin.to_string()
    }
}

impl<T: Scalar> Example<T> for (Matrix<T>, Vec<T>) {
    fn inputs(&self) -> &Matrix<T> {
        &self.0
    }
    fn targets(&self) -> &[T] {
        &self.1
    }
    fn describe(&self) -> String {
        format!("{}x{} window", self.0.rows(), self.0.cols())
    }
}

impl<T, E: Example<T>> Example<T> for Arc<E> {
    fn inputs(&self) -> &Matrix<T> {
        (**self).inputs()
    }
    fn targets(&self) -> &[T] {
        (**self).targets()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<T, E: Example<T>> Example<T> for &E {
    fn inputs(&self) -> &Matrix<T> {
        (**self).inputs()
    }
    fn targets(&self) -> &[T] {
        (**self).targets()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Per-step activations retained for BPTT. Each gate buffer is `steps × hidden`, row per step.
#[derive(Debug, Clone)]
pub struct ForwardCache<T> {
    pub steps: usize,
    pub hidden: usize,
    pub i: Vec<T>,
    pub f: Vec<T>,
    pub o: Vec<T>,
    pub g: Vec<T>,
    pub c: Vec<T>,
    pub tanh_c: Vec<T>,
    pub h: Vec<T>,
    pub z: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> ForwardCache<T> {
    fn at<'a>(&self, buf: &'a [T], t: usize) -> &'a [T] {
        &buf[t * self.hidden..(t + 1) * self.hidden]
    }
}

fn check_window<T: Scalar>(params: &ModelParams<T>, window: &Matrix<T>) -> Result<()> {
    if window.cols() != params.w_i.cols() || window.rows() == 0 {
        return Err(Error::Shape(format!(
            "window is {}x{}, model expects n x {} with n >= 1",
            window.rows(),
            window.cols(),
            params.w_i.cols()
        )));
    }
    Ok(())
}

pub fn forward<T: Scalar>(params: &ModelParams<T>, window: &Matrix<T>) -> Result<(Vec<T>, ForwardCache<T>)> {
    check_window(params, window)?;
    let hidden = params.w_i.rows();
    let steps = window.rows();
    let n = steps * hidden;
    let mut cache = ForwardCache {
        steps,
        hidden,
        i: vec![T::zero(); n],
        f: vec![T::zero(); n],
        o: vec![T::zero(); n],
        g: vec![T::zero(); n],
        c: vec![T::zero(); n],
        tanh_c: vec![T::zero(); n],
        h: vec![T::zero(); n],
        z: vec![T::zero(); params.w_1.rows()],
        y: vec![T::zero(); params.w_2.rows()],
    };

    let mut h_prev = vec![T::zero(); hidden];
    let mut c_prev = vec![T::zero(); hidden];
    let mut a = [vec![T::zero(); hidden], vec![T::zero(); hidden], vec![T::zero(); hidden], vec![T::zero(); hidden]];
    let gates = [
        (&params.w_i, &params.u_i, &params.b_i),
        (&params.w_f, &params.u_f, &params.b_f),
        (&params.w_o, &params.u_o, &params.b_o),
        (&params.w_g, &params.u_g, &params.b_g),
    ];
    for t in 0..steps {
        let x = window.row(t);
        for (acc, (w, u, b)) in a.iter_mut().zip(gates) {
            acc.copy_from_slice(b.as_slice());
            w.matvec_into(x, acc);
            u.matvec_into(&h_prev, acc);
        }
        let base = t * hidden;
        for k in 0..hidden {
            let i = sigmoid(a[0][k]);
            let f = sigmoid(a[1][k]);
            let o = sigmoid(a[2][k]);
            let g = a[3][k].tanh();
            let c = f * c_prev[k] + i * g;
            let tc = c.tanh();
            cache.i[base + k] = i;
            cache.f[base + k] = f;
            cache.o[base + k] = o;
            cache.g[base + k] = g;
            cache.c[base + k] = c;
            cache.tanh_c[base + k] = tc;
            cache.h[base + k] = o * tc;
            c_prev[k] = c;
            h_prev[k] = o * tc;
        }
    }

    let h_last = &cache.h[(steps - 1) * hidden..];
    cache.z.copy_from_slice(params.b_1.as_slice());
    params.w_1.matvec_into(h_last, &mut cache.z);
    cache.z.iter_mut().for_each(|v| *v = v.tanh());
    cache.y.copy_from_slice(params.b_2.as_slice());
    params.w_2.matvec_into(&cache.z, &mut cache.y);

    if cache.y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("forward produced a non-finite prediction".into()));
    }
    Ok((cache.y.clone(), cache))
}

/// Accumulates into `grads` the gradient of `Σ_k weight·(y_k − target_k)²` for one window.
fn accumulate_sample<T: Scalar>(
    params: &ModelParams<T>,
    window: &Matrix<T>,
    cache: &ForwardCache<T>,
    dy: &[T],
    grads: &mut Gradients<T>,
) {
    let hidden = cache.hidden;
    let steps = cache.steps;
    let h_last = cache.at(&cache.h, steps - 1);

    grads.w_2.add_outer(dy, &cache.z);
    grads.b_2.add_assign(&Matrix::column(dy));

    let mut dz = vec![T::zero(); cache.z.len()];
    params.w_2.matvec_t_acc(dy, &mut dz);
    for (d, &z) in dz.iter_mut().zip(&cache.z) {
        *d = *d * (T::one() - z * z);
    }
    grads.w_1.add_outer(&dz, h_last);
    grads.b_1.add_assign(&Matrix::column(&dz));

    let mut dh = vec![T::zero(); hidden];
    params.w_1.matvec_t_acc(&dz, &mut dh);
    let mut dc_next = vec![T::zero(); hidden];
    let mut da = [vec![T::zero(); hidden], vec![T::zero(); hidden], vec![T::zero(); hidden], vec![T::zero(); hidden]];

    for t in (0..steps).rev() {
        let (i, f, o, g) = (cache.at(&cache.i, t), cache.at(&cache.f, t), cache.at(&cache.o, t), cache.at(&cache.g, t));
        let tc = cache.at(&cache.tanh_c, t);
        for k in 0..hidden {
            let dc = dc_next[k] + dh[k] * o[k] * (T::one() - tc[k] * tc[k]);
            let c_prev = if t == 0 { T::zero() } else { cache.c[(t - 1) * hidden + k] };
            da[0][k] = dc * g[k] * i[k] * (T::one() - i[k]);
            da[1][k] = dc * c_prev * f[k] * (T::one() - f[k]);
            da[2][k] = dh[k] * tc[k] * o[k] * (T::one() - o[k]);
            da[3][k] = dc * i[k] * (T::one() - g[k] * g[k]);
            dc_next[k] = dc * f[k];
        }

        let x = window.row(t);
        let gate_grads = [
            (&mut grads.w_i, &mut grads.u_i, &mut grads.b_i),
            (&mut grads.w_f, &mut grads.u_f, &mut grads.b_f),
            (&mut grads.w_o, &mut grads.u_o, &mut grads.b_o),
            (&mut grads.w_g, &mut grads.u_g, &mut grads.b_g),
        ];
        for ((gw, gu, gb), d) in gate_grads.into_iter().zip(&da) {
            gw.add_outer(d, x);
            if t > 0 {
                gu.add_outer(d, cache.at(&cache.h, t - 1));
            }
            for (b, &v) in gb.as_mut_slice().iter_mut().zip(d) {
                *b = *b + v;
            }
        }

        if t > 0 {
            dh.iter_mut().for_each(|v| *v = T::zero());
            for (u, d) in [&params.u_i, &params.u_f, &params.u_o, &params.u_g].into_iter().zip(&da) {
                u.matvec_t_acc(d, &mut dh);
            }
        }
    }
}

/// Batch-mean squared error over all outputs and its exact gradient.
pub fn backward<T: Scalar, E: Example<T>>(params: &ModelParams<T>, batch: &[E]) -> Result<(T, Gradients<T>)> {
    if batch.is_empty() {
        return Err(Error::Empty("backward needs at least one sample".into()));
    }
    let out_dim = params.w_2.rows();
    let denom = T::of((batch.len() * out_dim) as f64);
    let scale = T::of(2.0) / denom;
    let mut grads = Gradients::zeros_like(params);
    let mut sum_sq = T::zero();
    let mut dy = vec![T::zero(); out_dim];
    for sample in batch {
        let targets = sample.targets();
        if targets.len() != out_dim {
            return Err(Error::Shape(format!("{} targets for a model with {out_dim} outputs", targets.len())));
        }
        let (y, cache) = forward(params, sample.inputs()).map_err(|e| match e {
            Error::NonFinite(_) => Error::NonFiniteLoss { origin: sample.describe() },
            other => other,
        })?;
        let mut sample_sq = T::zero();
        for k in 0..out_dim {
            let err = y[k] - targets[k];
            sample_sq = sample_sq + err * err;
            dy[k] = scale * err;
        }
        if !sample_sq.is_finite() {
            return Err(Error::NonFiniteLoss { origin: sample.describe() });
        }
        sum_sq = sum_sq + sample_sq;
        accumulate_sample(params, sample.inputs(), &cache, &dy, &mut grads);
    }
    let loss = sum_sq / denom;
    if !loss.is_finite() || !grads.is_finite() {
        return Err(Error::NonFiniteLoss { origin: batch[0].describe() });
    }
    Ok((loss, grads))
}

/// Predictions for every window, one row each. Windows never share state.
pub fn predict_batch<T: Scalar, E: Example<T>>(params: &ModelParams<T>, windows: &[E]) -> Result<Matrix<T>> {
    let out_dim = params.w_2.rows();
    let mut data = Vec::with_capacity(windows.len() * out_dim);
    for w in windows {
        let (y, _) = forward(params, w.inputs())?;
        data.extend(y);
    }
    Matrix::from_vec(windows.len(), out_dim, data)
}

impl<T: Scalar> Gradients<T> {
    pub fn zeros_like(params: &ModelParams<T>) -> Self {
        let mut g = params.clone();
        for m in g.tensors_mut() {
            m.fill(T::zero());
        }
        g
    }
}
