//! Wave matrix Lindbladization: simulating Lindblad evolution by repeatedly
//! coupling a system to fresh program states that encode the jump operators.
//!
//! Every routine is generic over the real scalar type (`f32` or `f64`); the
//! aliases below fix it to `f64`, which all tolerances are tuned for.

pub mod channels;
pub mod engine;
pub mod error;
pub mod fit;
pub mod lcu;
pub mod program;
pub mod scalar;
pub mod tensor;

pub use error::{Result, WmlError};
pub use scalar::{Real, C};
pub use tensor::{Matrix, SystemDims};

pub type Operator = Matrix<f64>;
pub type Operator32 = Matrix<f32>;
pub type State = channels::DensityMatrix<f64>;
pub type Lindblad = channels::LindbladSpec<f64>;
pub type Channel = channels::SuperOperator<f64>;
pub type Choi = channels::ChoiState<f64>;
pub type Program = program::ProgramState<f64>;
pub type Linear = engine::LinearSpec<f64>;
pub type Poly = engine::PolySpec<f64>;
pub type Config = engine::RunConfig<f64>;
pub type Report = engine::RunReport<f64>;
pub type Prepared = lcu::LcuReport<f64>;
