//! Higher-rank graphs from coloured graphs and commuting squares.
//!
//! A k-coloured directed graph E together with a complete associative
//! collection C of commuting squares presents a unique k-graph Lambda_(E,C)
//! whose paths are coloured-graph morphisms from model grid graphs into E.
//! This crate builds that k-graph concretely: it normalizes edge words to cube
//! morphisms, decides path equivalence with explicit flip-chain witnesses,
//! reconstructs skeletons, and runs bounded three-valued analyses for
//! aperiodicity, cofinality, and the simplicity of the associated C*-algebra.

pub mod category;
pub mod cube;
pub mod degree;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod iso;
pub mod quotient;
pub mod skeleton;
pub mod squares;

pub use category::{KGraph, LawReport, SourcesReport};
pub use cube::CubeMorphism;
pub use degree::{abelianize, box_points, Colour, ColourWord, Degree};
pub use dynamics::{
    check_aperiodic, check_cofinal, noncofinal_ray, separating_path, simplicity_verdict,
    AnalysisVerdict, AnalysisWitness, CofinalityCertificate, PeriodicityWitness, SimplicityReport,
    Status,
};
pub use error::{Error, Result};
pub use graph::{build_grid, ColouredGraph, ColouredPath, EdgeIx, GridGraph, VertexIx};
pub use instance::{Instance, Metadata};
pub use iso::{find_coloured_isomorphisms, ColouredIsomorphism};
pub use quotient::{shuffle_chain, PathPrefixFamily, QuotientReport, SwapChain};
pub use skeleton::{build_theta, extract_skeleton, relabel_instance, verify_rho, Skeleton};
pub use squares::{Limits, Square, SquareCollection};
