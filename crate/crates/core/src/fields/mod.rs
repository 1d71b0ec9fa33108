//! Grids, gridded fields, discrete calculus, norms and the symmetrizing
//! change of variables.

pub mod calculus;
pub mod field;
pub mod grid;
pub mod lemmas;
pub mod norms;
pub mod snapshot;
pub mod state;

pub use calculus::{divergence, gradient, jacobian, partial, DiffMethod};
pub use field::{ScalarField, TensorField, VectorField};
pub use grid::Grid;
pub use lemmas::{check_interpolation_lemmas, check_interpolation_lemmas_with, LemmaRatios};
pub use norms::{l2_norm, linf_magnitude, linf_norm, seminorm, sobolev_norm, sobolev_norm_with, Components};
pub use snapshot::{read_snapshot, write_snapshot, write_state, Snapshot, SnapshotFormat};
pub use state::{from_symmetrized, to_symmetrized, FluidState, SymmetrizedState};
