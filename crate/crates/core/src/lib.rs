//! Spectra of (0,3,6)-fullerenes and other Cayley sum graphs.
//!
//! A cubic plane graph with faces of size 3 and 6 (semiedges allowed) is a
//! Cayley sum graph `CayS(Γ, S)` over a two-generated abelian group. Its
//! spectrum then splits as `M ∪ L ∪ −L` with a small fixed multiset `M`.
//! This crate builds such graphs from triangles on the triangular grid,
//! computes their spectra exactly from group characters, and checks the
//! result against independent constructions: a geometric fold of the grid
//! and a dense Jacobi eigensolver.
//!
//! Modules, bottom up:
//!
//! * [`intlinalg`]: determinants, Smith and Hermite normal forms;
//! * [`abelian`]: finite abelian groups, characters, lattice quotients;
//! * [`caysum`]: Cayley sum graphs and Cayley graphs;
//! * [`spectra`]: character spectra, eigenvectors, Jacobi oracle;
//! * [`fullerene`]: triangle specs, folding, census and verification;
//! * [`crystal`]: the same construction in dimension `d`.

pub mod abelian;
pub mod caysum;
pub mod crystal;
pub mod error;
pub mod fullerene;
pub mod intlinalg;
pub mod spectra;

pub use abelian::{quotient_group, FiniteAbelianGroup, GroupElement, QuotientMap};
pub use caysum::{cayley_graph, cayley_sum_graph, AdjacencyMatrix, CaySumGraph, GraphJson, SumSet};
pub use error::{Error, LinalgError, Result};
pub use fullerene::{classify, fold_construction, group_and_sumset, FullereneReport, TriangleSpec};
pub use intlinalg::{snf, IntMatrix, SnfDecomposition};
pub use spectra::{character_spectrum, numeric_spectrum, SpectrumPartition};
