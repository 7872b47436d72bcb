//! Entanglement analysis of small multi-qubit pure states, with exact
//! teleportation, dense-coding and key-distribution checks built on top.
//!
//! Qubits are labeled from 1; label 1 is the most significant bit of an
//! amplitude index (see [`ket`]).

pub mod catalog;
pub mod densecoding;
pub mod entropy;
pub mod error;
pub mod ket;
pub mod ket_io;
pub mod linalg;
pub mod qkd;
pub mod random;
pub mod teleport;

pub use catalog::{catalog_entry, catalog_state, CatalogEntry};
pub use entropy::{
    entropy_table, partial_trace, schmidt_decompose, von_neumann_entropy, Bipartition, EntropyTable, SchmidtForm,
};
pub use error::{Error, Result};
pub use ket::Ket;
pub use ket_io::{format_ket, parse_ket, parse_scalar};
pub use linalg::{gram_matrix, hermitian_eigenvalues, tensor_product, ComplexMatrix, HermitianMatrix};
