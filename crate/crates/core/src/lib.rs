//! Chains in the Boolean lattice: exact chain counting, symmetric chain
//! decompositions and chain weights, weighted supersaturation with
//! compressions, hypergraph degrees, exhaustive and heuristic search for
//! families with few k-chains, and chains in grid posets.

pub mod chains;
pub mod degrees;
pub mod error;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod scd;
pub mod search;
pub mod supersat;
pub mod weight_bounds;

pub use chains::{count_k_chains, weight, Chain, Direction, ExactWeight, StepVector};
pub use error::{Error, Result};
pub use grid::{Convention, GridFamily};
pub use lattice::{centered, sigma, CenteredOrderKey, Family, SubsetCode};
pub use scd::{McEstimate, Scd};
pub use search::{SearchConfig, SearchMode, SearchResult};
pub use supersat::{ChainHypergraph, ChainOrder, MeasuredSubhypergraph};
