use super::{Matrix, Scalar, SeededRng};

/// Glorot/Xavier uniform initialisation: entries drawn from `U(-a, a)` with
/// `a = sqrt(6 / (rows + cols))`, filled in row-major order.
pub fn glorot_init<T: Scalar>(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix<T> {
    assert!(rows >= 1 && cols >= 1, "glorot_init needs a non-empty shape");
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    let data = (0..rows * cols).map(|_| T::of(rng.uniform(-bound, bound))).collect();
    Matrix::from_vec(rows, cols, data).expect("shape and finiteness hold by construction")
}
