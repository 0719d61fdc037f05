//! Floating-point towers of finite-dimensional algebras for Hadamard
//! commuting squares, and the relative-commutant dimensions they yield.

pub mod algebra;
pub mod commutant;
pub mod error;
pub mod tower;

pub use algebra::{conditional_expectation, CMat, ConcreteAlgebra};
pub use commutant::{
    commutant_is_abelian, commutant_is_abelian_unitary, commuting_square_defect, commuting_square_holds,
    relative_commutant_dim, relative_commutant_dim_unitary, tower_orientation, Method, TowerOrientation,
};
pub use error::{NumericsError, Result};
pub use tower::TowerLevel;
