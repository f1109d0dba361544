//! Exact and numeric building blocks.

pub mod cjson;
pub mod exppoly;
pub mod matrix;
pub mod ode;
pub mod quad;
pub mod rational;
pub mod roots;
pub mod series;

pub use exppoly::{ExpPolynomial, Monomial};
pub use matrix::{exact_solve, ComplexMatrix, ExactMatrix};
pub use quad::QuadScalar;
pub use rational::{rat, Rational};
pub use series::GWSeries;
