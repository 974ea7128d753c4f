#![cfg_attr(not(test), no_std)]

//! Rational orthogonal systems on the unit disk.
//!
//! This crate builds Takenaka–Malmquist (TM) systems from dyadic pole
//! lattices, evaluates them anywhere on the closed disk, and provides the
//! boundary calculus (FFT, quadrature inner products, `L^p` norms, maximal
//! operators) needed to compute square-function norms and to run
//! sign-scramble experiments against them.
//!
//! The crate is `no_std` + `alloc`; all grids are powers of two and every
//! operation is a pure function of immutable inputs. File formats, CSV
//! output and the CLI live in the companion `tmlab` crate.

extern crate alloc;

pub mod basis;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod grid;
pub mod khintchine;
pub mod maximal;
pub mod norms;
pub mod report;
pub mod scheme;
pub mod signal;
pub mod signs;
pub mod stats;
pub mod tree;
pub mod zoo;

pub use error::{Error, Result};
pub use grid::BoundaryGrid;
pub use scheme::{BasisPosition, DyadicIndex, Pole, PoleScheme, SchemeKind};
pub use signal::BoundarySignal;
pub use tree::CoefficientTree;

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex<f64>;
