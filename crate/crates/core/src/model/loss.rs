use crate::error::{Error, Result};
use crate::numeric::{Matrix, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct MseReport<T> {
    /// Mean over all `n × outputs` squared errors, equal to the mean of `per_output`.
    pub total: T,
    pub per_output: Vec<T>,
}

/// Column-wise mean squared errors. Sums run in row order so the result is reproducible.
pub fn mse_loss<T: Scalar>(predictions: &Matrix<T>, targets: &Matrix<T>) -> Result<MseReport<T>> {
    if predictions.shape() != targets.shape() {
        return Err(Error::Shape(format!(
            "predictions {:?} vs targets {:?}",
            predictions.shape(),
            targets.shape()
        )));
    }
    let (n, k) = predictions.shape();
    if n == 0 {
        return Err(Error::Empty("mse_loss needs at least one row".into()));
    }
    let mut sums = vec![T::zero(); k];
    for r in 0..n {
        for ((s, &p), &t) in sums.iter_mut().zip(predictions.row(r)).zip(targets.row(r)) {
            *s = *s + (p - t) * (p - t);
        }
    }
    let nf = T::of(n as f64);
    let per_output: Vec<T> = sums.into_iter().map(|s| s / nf).collect();
    let total = per_output.iter().fold(T::zero(), |a, &b| a + b) / T::of(k as f64);
    Ok(MseReport { total, per_output })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[f64]) -> Matrix<f64> {
        Matrix::from_vec(1, v.len(), v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let t = row(&[0.3, 0.7]);
        assert_eq!(mse_loss(&t, &t).unwrap().total, 0.0);

        let r = mse_loss(&row(&[1.0, 0.0]), &row(&[0.0, 1.0])).unwrap();
        assert_eq!(r.total, 1.0);
        assert_eq!(r.per_output, vec![1.0, 1.0]);

        assert_eq!(mse_loss(&row(&[0.5, 0.5]), &row(&[0.0, 1.0])).unwrap().total, 0.25);
    }

    #[test]
    fn total_is_mean_of_columns() {
        let p = Matrix::from_vec(3, 2, vec![0.1, 0.9, 0.4, 0.2, 0.3, 0.3]).unwrap();
        let t = Matrix::from_vec(3, 2, vec![0.0, 1.0, 0.5, 0.0, 0.1, 0.8]).unwrap();
        let r = mse_loss(&p, &t).unwrap();
        assert_eq!(r.total, (r.per_output[0] + r.per_output[1]) / 2.0);
        let all: f64 = p.as_slice().iter().zip(t.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / 6.0;
        assert!((r.total - all).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let empty = Matrix::<f64>::zeros(0, 2);
        assert!(matches!(mse_loss(&empty, &empty), Err(Error::Empty(_))));
        assert!(mse_loss(&row(&[0.0, 0.0]), &row(&[0.0])).is_err());
    }
}
