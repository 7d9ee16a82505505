//! Entanglement and nonlocality of spin pairs in the infinite XXZ chain.
//!
//! The crate computes, across the three phases of the spin-1/2 XXZ model,
//!
//! - the thermodynamic-limit ground-state energy per site `e0(Δ)` from the
//!   Bethe-ansatz contour integral ([`bethe`]),
//! - two-site correlators `t^xx`, `t^zz` for first neighbors (exact, from
//!   `e0` and its derivative) and for second/third neighbors (exact
//!   diagonalization of finite rings plus finite-size extrapolation)
//!   ([`correlations`], [`ed`]),
//! - the two-qubit reduced state they define and its region in the
//!   `(t^xx, t^zz)` parameter plane ([`pair_state`]),
//! - concurrence and the maximal CHSH value, both through closed forms for
//!   the symmetric state and through general-state routes that serve as
//!   independent cross-checks ([`measures`]),
//! - Δ-sweeps with derivative estimates that locate the first-order
//!   transition at Δ = -1 and the Kosterlitz-Thouless transition at Δ = 1
//!   ([`sweep`], [`output`]).
//!
//! All computations are deterministic for a fixed configuration and seed.

pub mod bethe;
pub mod correlations;
pub mod ed;
pub mod error;
pub mod lanczos;
pub mod measures;
pub mod output;
pub mod pair_state;
pub mod quad;
pub mod sweep;

pub use bethe::{classify, ground_energy, ground_energy_at, ground_energy_derivative,
                ground_energy_derivative_sided, AnisotropyPoint, Branch, Side};
pub use correlations::{ed_correlations, far_correlations, nn_correlations, CorrelationSet,
                       CorrelationSource};
pub use ed::{diagonalize, extrapolate, Boundary, EdConfig, EdResult, Quantity, SectorStrategy};
pub use error::{Error, Result};
pub use measures::{bell_measure_horodecki, bell_measure_symmetric, chsh_value,
                   concurrence_general, concurrence_symmetric, maximize_chsh,
                   maximize_chsh_seeded, MeasurementSettings};
pub use output::{build_trajectory, emit, OutputFormat, SweepTable, TrajectoryPoint};
pub use pair_state::{classify_region, region_boundaries, symmetric_state, BoundaryPolyline,
                     PairState, RegionLabel};
pub use quad::QuadratureConfig;
pub use sweep::{detect_transitions, run_sweep, BellBranch, FirstOrderCandidate, KtCandidate,
                NeighborRecord, SweepConfig, SweepRecord, TransitionReport};
