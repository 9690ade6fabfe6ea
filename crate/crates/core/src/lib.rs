//! Symmetric tensors and tests for doubly nonnegative and completely
//! positive structure.

pub mod cp;
pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod index;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod spectral;
pub mod structured;
pub mod tcp;
pub mod tensor;
pub mod verdict;

pub use decomposition::RankOneDecomposition;
pub use error::{Result, TensorError};
pub use index::MultiIndex;
pub use tensor::SymmetricTensor;
pub use verdict::{Status, Verdict, Witness};
