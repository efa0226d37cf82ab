//! Exact computations for the classical Lie superalgebras gl, osp, πsp and q,
//! their parabolic subalgebras, and the flag supermanifolds they act on.
//!
//! Everything is rational. Odd coordinates live in a Grassmann algebra
//! [`GrassmannElement`]; even coordinates are substituted by rationals.

pub mod atlas;
pub mod classifier;
pub mod exec;
pub mod grassmann;
pub mod linalg;
pub mod parabolic;
pub mod rational;
pub mod superalgebra;
pub mod supermatrix;

pub use num_rational::BigRational as Rational;

pub use atlas::{ChartIndex, ChartPoint, GroupElement};
pub use classifier::{ClosedFormCase, H0Result};
pub use exec::Execution;
pub use grassmann::{GrassmannElement, Parity};
pub use parabolic::{FlagType, Subalgebra, WeightTuple};
pub use superalgebra::{LieSuperAlgebra, Root, RootSystem, Series};
pub use supermatrix::SuperMatrix;
