//! Growth-mitigated iterative qubit coupled cluster.
//!
//! Hamiltonians are real linear combinations of Pauli products stored in
//! symplectic form. Each iteration screens gradient partitions on a
//! computational-basis reference, picks a generator (optionally trading
//! gradient against term growth), minimizes the one-angle energy in closed
//! form, and dresses the Hamiltonian exactly.
//!
//! ```
//! use iqcc_core::{run, PauliHamiltonian, ReferenceState, RunConfig};
//!
//! let h = PauliHamiltonian::from_terms(
//!     1,
//!     0.0,
//!     [("X".parse().unwrap(), 1.0)],
//!     1e-8,
//! )
//! .unwrap();
//! let reference = ReferenceState::parse("0").unwrap();
//! let out = run(&h, &reference, &RunConfig::default()).unwrap();
//! assert!((out.trajectory.final_energy() + 1.0).abs() < 1e-12);
//! ```

pub mod bits;
pub mod engine;
pub mod error;
pub mod exact;
pub mod growth;
pub mod hamiltonian;
pub mod io;
pub mod pauli;
pub mod screen;
pub mod selection;

pub use bits::BitString;
pub use engine::{
    minimize_tau, replay, run, Engine, IterationRecord, RunConfig, RunResult, RunStatus,
    TauSolution, Trajectory,
};
pub use error::{Error, Result};
pub use growth::{
    growth_exact, GrowthReport, GrowthSearch, GrowthSearchRegistry, RankLimit, SearchConfig,
    SearchContext, SearchOutcome,
};
pub use hamiltonian::{IsingGrouping, PauliHamiltonian, ReferenceState, DEFAULT_PRUNE_EPS};
pub use io::HamiltonianFile;
pub use pauli::{PauliProduct, PhasedPauli};
pub use screen::{canonical_element, gradient_of, screen, GradientPartition, PartitionTable};
pub use selection::{PolicyRegistry, ScoringConfig, Selection, SelectionPolicy};
