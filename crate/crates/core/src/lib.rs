//! Hilbert–Kunz functions of modules over quotients of polynomial rings in
//! positive characteristic.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`], [`monomial`], [`poly`], [`parse`]: exact arithmetic in
//!   `F_p[x_1..x_v]` and free modules over it;
//! * [`groebner`]: Buchberger's algorithm, normal forms, syzygies, colength
//!   and dimension computations;
//! * [`hk`]: rings `R = P/Q`, Frobenius bracket powers, module
//!   presentations, the lengths `e_n(M, I) = λ(M / I^{[q]} M)` and Tor
//!   lengths;
//! * [`asymptotics`]: exact closed-form checks and coefficient extraction
//!   from computed sequences;
//! * [`problem`]: the declarative problem-file format.

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hk;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod problem;

pub use error::{Error, Result};
pub use field::{PrimeModulus, Scalar};
pub use groebner::{buchberger, ideal_basis, Budget, Colength, GroebnerBasis};
pub use hk::{HkSeries, IdealHandle, ModulePresentation, RingPresentation};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{FreeModuleElement, PolyRing, Polynomial};
