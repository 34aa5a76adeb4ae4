//! Spectra of k-power hypergraphs and signed graphs computed from
//! parity-closed walk counts, with brute-force oracles for every identity
//! used along the way.

pub mod bigfloat;
pub mod budget;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod mean;
pub mod poly;
pub mod serde_util;
pub mod signed;
pub mod spectrum;
pub mod tensor;
pub mod verify;
pub mod walks;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{parse_graph, Graph};
