//! Smith classes, Smith index, moduli sequences and torsion certificates for
//! finite simplicial Z_p-complexes, with joins, deleted joins and products,
//! and an embeddability verdict for joins built on top of them.

pub mod certificates;
pub mod complex;
pub mod corpus;
pub mod deleted;
pub mod embed;
pub mod int;
pub mod join;
pub mod linalg;
pub mod smith;

pub use int::Int;
