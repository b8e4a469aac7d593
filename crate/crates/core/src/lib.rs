//! Reconstruction of level-2 phylogenetic networks from trinets.

pub mod collection;
pub mod cutset;
pub mod enewick;
pub mod error;
pub mod fixtures;
pub mod generator;
pub mod network;
pub mod random;
pub mod reconstruct;
pub mod restriction;
pub mod simple;
pub mod trinet_file;

pub use collection::{Entry, TrinetCollection};
pub use cutset::{find_cut_arc_set, Digraph};
pub use enewick::{canonical_key, parse, ParseError};
pub use error::{Error, Result};
pub use generator::{CatalogId, Generator};
pub use network::{Network, NetworkBuilder, NodeId, Taxon, TaxonSet};
pub use random::{random_network, random_simple_network, RandomNetSpec};
pub use reconstruct::{reconstruct, reconstruct_with_report, ReconstructReport};
pub use simple::{build_simple, build_simple_with_report, SimpleReport};
