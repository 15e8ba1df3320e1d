//! Entangled-representation phase-space numerics for two bosonic modes.
//!
//! Everything here works on a truncated two-mode Fock space and on uniform
//! quadrature grids over one or two complex planes. The crate builds without
//! `std` (it needs `alloc`); the default `std` feature adds a per-point cache
//! to [`weyl::WeylMaps`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod entangled;
pub mod error;
pub mod fock;
pub mod grid;
pub mod linalg;
pub mod ordering;
pub mod series;
pub mod symbol;
pub mod weyl;
pub mod xform;

pub use num_complex::Complex64 as C64;

pub use entangled::{EntangledLabel, Flavor};
pub use error::{Error, Result};
pub use fock::{FockSpace, Ladder, Mode, Operator, Quadrature, StateVector};
pub use grid::{Axes, ComplexGrid, GridFunction};
pub use ordering::PowerOrder;
pub use symbol::SymbolPolynomial;
pub use weyl::{DeltaOrder, PhasePoint, WeylMaps};
