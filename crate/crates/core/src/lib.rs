//! Transfer-matrix analysis of one-dimensional chains of delta wells.
//!
//! Cells `S` and `L` consist of a tunnel of length `b` or `q b` and one delta
//! well of strength `gamma`. Strings of cells are described by [`Word`]s, most
//! prominently the Fibonacci words. The crate computes band germs and bound
//! states at negative energy, Bloch and bound wavefunctions, and scattering
//! matrices at positive energy, all from exponential-basis 2x2 matrices.
//!
//! ```
//! use deltachain::{bound_states, Chain, Scan, Word};
//!
//! let single: Word = "S".parse().unwrap();
//! let roots = bound_states(&single, &Chain::bound(4.0, 1.0), &Scan::default()).unwrap();
//! assert!((roots[0].beta_star - 2.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod matrix;
pub mod params;
pub mod roots;
pub mod scattering;
pub mod spectra;
pub mod states;
pub mod substitution;
pub mod transfer;

pub use error::{Error, Result};
pub use matrix::TransferMatrix;
pub use params::{Chain, ChainParams, Regime, TAU};
pub use scattering::{s_matrix, SMatrix};
pub use spectra::{band_germs, bound_states, BandGerm, BoundState, EdgeKind, Scan};
pub use substitution::{fibonacci_word, word_matrix, Word};
pub use transfer::{cell_matrix, power_closed, CellKind};
