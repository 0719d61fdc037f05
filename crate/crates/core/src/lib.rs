//! Exact computations for twisted tensor products of group Fourier matrices:
//! phase arithmetic, finite groups, Hadamard matrices, free-product words,
//! the quotient group `G = HKN` and its principal graphs.

pub mod error;
pub mod graph;
pub mod group;
pub mod hadamard;
pub mod phase;
pub mod quotient;
pub mod snf;
pub mod verdict;
pub mod word;

pub use error::{Error, Result};
pub use group::{Elem, FinGroup};
pub use graph::{dual_graph, principal_graph, truncated_graph, BipartiteGraph};
pub use hadamard::HadamardMatrix;
pub use phase::{Phase, PhaseArray, PhaseOrder, SymbolBinding};
pub use snf::{smith_normal_form, subgroup_structure, AbelianStructure};
pub use word::{classify_automorphism, AutomorphismClass, Orientation, TwistedPerm, Twist, Word};
pub use verdict::{subfactor_verdict, Verdict, VerdictReport};
