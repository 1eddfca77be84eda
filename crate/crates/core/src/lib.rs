//! Magic (stabilizer Rényi entropy), squeezing and Bell correlations of permutation-symmetric
//! qubit states, computed in the Dicke basis.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod coherent;
pub mod error;
pub mod io;
pub mod logc;
pub mod metrics;
pub mod numeric;
pub mod protocols;
pub mod readout;
pub mod state;
pub mod tridiag;

pub use coherent::{cardinal_table, coherent_matrix_element, elementary_coefficients, sre_exact_coherent, CoherentSuperposition, PauliClass};
pub use error::{Error, Result};
pub use logc::LogComplex;
pub use metrics::{
    bell_correlator, magic_coefficients, pauli_class_expectation, squeezing_parameter, sre_approx, sre_approx_state, sre_exact_symmetric,
    sre_oracle_statevector, BellResult, MagicCoefficients,
};
pub use numeric::Real;
pub use protocols::{dicke_state, evolve_oat, evolve_tact, find_best_squeezing, generalized_ghz, kitten_state, kitten_superposition, Protocol, SqueezingOptimum};
pub use readout::{calibrate, estimate_overlap, estimate_sextet, readout_probability, CalibrationGain, CalibrationMode, ReadoutPlan};
pub use state::{
    apply_rotation, coherent_state, collective_generator, fidelity, husimi, make_state, overlap, overlap_sextet, Axis, Cardinal, HusimiGrid,
    OverlapSextet, Sign, SymmetricState,
};
pub use tridiag::TridiagonalOperator;

pub type State = SymmetricState<f64>;
pub type Operator = TridiagonalOperator<f64>;
pub type Sextet = OverlapSextet<f64>;
pub type Superposition = CoherentSuperposition<f64>;
pub type Plan = ReadoutPlan<f64>;
pub type Amplitude = LogComplex<f64>;
