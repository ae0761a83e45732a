//! Dense matrices, activations, initialisation and seeded randomness.

mod activation;
mod init;
mod matrix;
mod rng;
mod scalar;

pub use activation::{activation, activation_grad, sigmoid, Activation};
pub use init::glorot_init;
pub use matrix::{matmul, Matrix};
pub use rng::SeededRng;
pub use scalar::Scalar;
