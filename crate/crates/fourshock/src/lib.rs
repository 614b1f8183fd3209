//! Shock-reflection configurations of the four-shock Riemann problem for
//! compressible potential flow.
//!
//! The crate has two halves that check each other:
//!
//! * exact local algebra — equation-of-state primitives ([`thermo`]),
//!   the four-sector Riemann data ([`riemann`]), the steady shock polar
//!   ([`polar`]), the reflection states and critical angles
//!   ([`reflection`]), and the configuration taxonomy ([`classify`]);
//! * a desk-scale finite-volume simulator ([`sim`]) that evolves the same
//!   Riemann data in physical time and measures the reflection pattern
//!   independently.
//!
//! The `fourshock` binary exposes both halves; the [`verify`] module holds
//! the property suites the binary and the acceptance tests share.
//!
//! The narrative guide lives in `book/`; its code snippets compile as
//! doc-tests through [`doctest`].

pub mod classify;
pub mod cli;
pub mod error;
pub mod polar;
pub mod reflection;
pub mod riemann;
pub mod roots;
pub mod sim;
pub mod thermo;
pub mod verify;

mod doctest;

pub use error::{Error, Result};
pub use thermo::GasModel;
