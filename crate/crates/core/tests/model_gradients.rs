//! Forward-pass oracles and the finite-difference gradient check.

use ghadapt::model::{adam_step, backward, forward, init_model, predict_batch, AdamState, ModelConfig, ModelParams};
use ghadapt::numeric::{Matrix, SeededRng};

fn small_config(hidden: usize, window: usize) -> ModelConfig {
    ModelConfig { hidden_dim: hidden, dense_dim: 3, window_len: window, ..ModelConfig::default() }
}

fn random_batch(cfg: &ModelConfig, n: usize, rng: &mut SeededRng) -> Vec<(Matrix<f64>, Vec<f64>)> {
    (0..n)
        .map(|_| {
            let data = (0..cfg.window_len * cfg.input_dim).map(|_| rng.unit()).collect();
            let x = Matrix::from_vec(cfg.window_len, cfg.input_dim, data).unwrap();
            let y = (0..cfg.output_dim).map(|_| rng.unit()).collect();
            (x, y)
        })
        .collect()
}

fn loss_of(params: &ModelParams<f64>, batch: &[(Matrix<f64>, Vec<f64>)]) -> f64 {
    let mut total = 0.0;
    for (x, t) in batch {
        let (y, _) = forward(params, x).unwrap();
        total += y.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    }
    total / (batch.len() * t_len(batch)) as f64
}

fn t_len(batch: &[(Matrix<f64>, Vec<f64>)]) -> usize {
    batch[0].1.len()
}

#[test]
fn zero_weights_predict_exactly_zero() {
    let cfg = small_config(5, 7);
    let params = ModelParams::<f64>::zeros(&cfg);
    let mut rng = SeededRng::new(0);
    for (x, _) in random_batch(&cfg, 4, &mut rng) {
        let (y, _) = forward(&params, &x).unwrap();
        assert_eq!(y, vec![0.0, 0.0]);
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[test]
fn single_unit_single_step_matches_hand_computation() {
    let cfg = ModelConfig { input_dim: 2, hidden_dim: 1, dense_dim: 1, output_dim: 1, window_len: 1, ..ModelConfig::default() };
    let mut p = ModelParams::<f64>::zeros(&cfg);
    let set = |m: &mut Matrix<f64>, v: &[f64]| m.as_mut_slice().copy_from_slice(v);
    set(&mut p.w_i, &[0.3, -0.2]);
    set(&mut p.w_f, &[0.1, 0.4]);
    set(&mut p.w_o, &[-0.5, 0.6]);
    set(&mut p.w_g, &[0.7, 0.2]);
    set(&mut p.b_i, &[0.05]);
    set(&mut p.b_f, &[1.0]);
    set(&mut p.b_o, &[-0.1]);
    set(&mut p.b_g, &[0.2]);
    set(&mut p.w_1, &[1.3]);
    set(&mut p.b_1, &[-0.4]);
    set(&mut p.w_2, &[0.9]);
    set(&mut p.b_2, &[0.25]);
    let x = [0.8, 0.35];

    let i = sigmoid(0.3 * x[0] - 0.2 * x[1] + 0.05);
    let o = sigmoid(-0.5 * x[0] + 0.6 * x[1] - 0.1);
    let g = (0.7 * x[0] + 0.2 * x[1] + 0.2f64).tanh();
    let c = i * g; // c_prev = 0 so the forget gate drops out
    let h = o * c.tanh();
    let z = (1.3 * h - 0.4f64).tanh();
    let expected = 0.9 * z + 0.25;

    let (y, _) = forward(&p, &Matrix::from_vec(1, 2, x.to_vec()).unwrap()).unwrap();
    assert!((y[0] - expected).abs() < 1e-12, "{} vs {expected}", y[0]);
}

#[test]
fn two_step_recurrence_matches_hand_computation() {
    let cfg = ModelConfig { input_dim: 1, hidden_dim: 1, dense_dim: 1, output_dim: 1, window_len: 2, ..ModelConfig::default() };
    let mut p = ModelParams::<f64>::zeros(&cfg);
    let (wi, wf, wo, wg) = (0.4, -0.3, 0.2, 0.9);
    let (ui, uf, uo, ug) = (0.5, 0.6, -0.7, 0.1);
    for (m, v) in [(&mut p.w_i, wi), (&mut p.w_f, wf), (&mut p.w_o, wo), (&mut p.w_g, wg), (&mut p.u_i, ui), (&mut p.u_f, uf), (&mut p.u_o, uo), (&mut p.u_g, ug)] {
        m.as_mut_slice()[0] = v;
    }
    p.b_f.as_mut_slice()[0] = 1.0;
    p.w_1.as_mut_slice()[0] = 1.0;
    p.w_2.as_mut_slice()[0] = 1.0;
    let xs = [0.6, -0.2];

    let (mut h, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let i = sigmoid(wi * x + ui * h);
        let f = sigmoid(wf * x + uf * h + 1.0);
        let o = sigmoid(wo * x + uo * h);
        let g = (wg * x + ug * h).tanh();
        c = f * c + i * g;
        h = o * c.tanh();
    }
    let expected = h.tanh();

    let (y, _) = forward(&p, &Matrix::from_vec(2, 1, xs.to_vec()).unwrap()).unwrap();
    assert!((y[0] - expected).abs() < 1e-12);
}

#[test]
fn default_window_produces_two_outputs() {
    let cfg = ModelConfig::default();
    assert_eq!(cfg.window_len, 250);
    let p: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(1)).unwrap();
    let batch = random_batch(&cfg, 1, &mut SeededRng::new(2));
    let (y, _) = forward(&p, &batch[0].0).unwrap();
    assert_eq!(y.len(), 2);
}

#[test]
fn wrong_window_width_is_rejected() {
    let cfg = small_config(3, 4);
    let p: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(1)).unwrap();
    assert!(forward(&p, &Matrix::zeros(4, 6)).is_err());
    assert!(forward(&p, &Matrix::zeros(0, 5)).is_err());
}

/// Central differences with h = 1e-5 against BPTT, relative error < 1e-4.
fn gradient_check(seed: u64) -> (usize, f64) {
    let cfg = small_config(4, 6);
    let mut rng = SeededRng::new(seed);
    let mut params: ModelParams<f64> = init_model(&cfg, &mut rng).unwrap();
    // random biases so no gradient entry is structurally degenerate
    for b in [&mut params.b_i, &mut params.b_o, &mut params.b_g, &mut params.b_1, &mut params.b_2] {
        b.as_mut_slice().iter_mut().for_each(|v| *v = rng.uniform(-0.5, 0.5));
    }
    let batch = random_batch(&cfg, 3, &mut rng);
    let (_, grads) = backward(&params, &batch).unwrap();

    let h = 1e-5;
    let mut checked = 0;
    let mut worst = 0.0f64;
    for k in 0..16 {
        let len = params.tensors()[k].as_slice().len();
        for e in 0..len {
            let orig = params.tensors()[k].as_slice()[e];
            params.tensors_mut()[k].as_mut_slice()[e] = orig + h;
            let plus = loss_of(&params, &batch);
            params.tensors_mut()[k].as_mut_slice()[e] = orig - h;
            let minus = loss_of(&params, &batch);
            params.tensors_mut()[k].as_mut_slice()[e] = orig;
            let fd = (plus - minus) / (2.0 * h);
            let g = grads.tensors()[k].as_slice()[e];
            let rel = (g - fd).abs() / g.abs().max(fd.abs()).max(1e-8);
            assert!(
                rel < 1e-4,
                "seed {seed}: {}[{e}] bptt {g:e} fd {fd:e} rel {rel:e}",
                ModelParams::<f64>::NAMES[k]
            );
            worst = worst.max(rel);
            checked += 1;
        }
    }
    (checked, worst)
}

#[test]
fn bptt_matches_finite_differences() {
    for seed in 0..5 {
        let (checked, worst) = gradient_check(seed);
        assert_eq!(checked, 4 * (4 * 5 + 4 * 4 + 4) + 3 * 4 + 3 + 2 * 3 + 2);
        assert!(worst < 1e-4);
    }
}

#[test]
fn fitted_batch_has_zero_gradient() {
    let cfg = small_config(3, 5);
    let params: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(3)).unwrap();
    let mut batch = random_batch(&cfg, 4, &mut SeededRng::new(4));
    for (x, t) in &mut batch {
        *t = forward(&params, x).unwrap().0;
    }
    let (loss, grads) = backward(&params, &batch).unwrap();
    assert_eq!(loss, 0.0);
    assert!(grads.tensors().iter().all(|m| m.as_slice().iter().all(|&v| v == 0.0)));
}

#[test]
fn batch_gradient_is_mean_of_sample_gradients() {
    let cfg = small_config(4, 6);
    let params: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(5)).unwrap();
    let batch = random_batch(&cfg, 2, &mut SeededRng::new(6));
    let (_, both) = backward(&params, &batch).unwrap();
    let (_, g0) = backward(&params, &batch[..1]).unwrap();
    let (_, g1) = backward(&params, &batch[1..]).unwrap();
    for ((b, a), c) in both.tensors().iter().zip(g0.tensors()).zip(g1.tensors()) {
        for ((&b, &a), &c) in b.as_slice().iter().zip(a.as_slice()).zip(c.as_slice()) {
            assert!((b - 0.5 * (a + c)).abs() < 1e-10);
        }
    }
}

#[test]
fn backward_rejects_empty_batch() {
    let cfg = small_config(2, 2);
    let params: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(0)).unwrap();
    let empty: Vec<(Matrix<f64>, Vec<f64>)> = Vec::new();
    assert!(backward(&params, &empty).is_err());
}

#[test]
fn non_finite_loss_names_the_sample() {
    let cfg = small_config(2, 2);
    let params: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(0)).unwrap();
    let mut batch = random_batch(&cfg, 2, &mut SeededRng::new(1));
    batch[1].1[0] = f64::INFINITY;
    let err = backward(&params, &batch).unwrap_err();
    assert!(matches!(err, ghadapt::Error::NonFiniteLoss { .. }), "{err}");
}

#[test]
fn predict_batch_is_a_stateless_map() {
    let cfg = small_config(4, 8);
    let params: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(7)).unwrap();
    let batch = random_batch(&cfg, 100, &mut SeededRng::new(8));
    let preds = predict_batch(&params, &batch).unwrap();
    assert_eq!(preds.shape(), (100, 2));
    for (r, (x, _)) in batch.iter().enumerate() {
        let (y, _) = forward(&params, x).unwrap();
        assert!((preds.get(r, 0) - y[0]).abs() < 1e-12 && (preds.get(r, 1) - y[1]).abs() < 1e-12);
    }
    let single = predict_batch(&params, &batch[..1]).unwrap();
    assert_eq!(single.row(0), preds.row(0));

    let mut reversed = batch.clone();
    reversed.reverse();
    let rev = predict_batch(&params, &reversed).unwrap();
    for r in 0..100 {
        assert_eq!(rev.row(r), preds.row(99 - r));
    }
    // bit-identical on repeat
    assert_eq!(predict_batch(&params, &batch).unwrap(), preds);
}

#[test]
fn adam_overfits_a_tiny_batch() {
    let cfg = ModelConfig { learning_rate: 3e-3, ..small_config(8, 6) };
    let mut params: ModelParams<f64> = init_model(&cfg, &mut SeededRng::new(9)).unwrap();
    let batch = random_batch(&cfg, 4, &mut SeededRng::new(10));
    let mut state = AdamState::new(&params);
    let mut losses = Vec::new();
    for _ in 0..200 {
        let (loss, grads) = backward(&params, &batch).unwrap();
        losses.push(loss);
        adam_step(&mut params, &grads, &mut state, &cfg).unwrap();
    }
    let final_loss = backward(&params, &batch).unwrap().0;
    assert!(final_loss < 1e-3, "final loss {final_loss}");
    losses.push(final_loss);
    for (step, w) in losses.windows(2).enumerate() {
        assert!(w[1] <= w[0], "loss rose at step {step}: {} -> {}", w[0], w[1]);
    }
}

#[test]
fn f32_model_runs() {
    let cfg = small_config(3, 4);
    let p: ModelParams<f32> = init_model(&cfg, &mut SeededRng::new(1)).unwrap();
    let x = Matrix::<f32>::filled(4, 5, 0.5);
    let (y, _) = forward(&p, &x).unwrap();
    let p64: ModelParams<f64> = p.cast();
    let (y64, _) = forward(&p64, &x.cast()).unwrap();
    assert!((f64::from(y[0]) - y64[0]).abs() < 1e-5);
}
