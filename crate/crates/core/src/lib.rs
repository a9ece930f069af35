//! Exact counting of the k-mers that share a given XOR-keyed minimizer.
//!
//! For a key `γ ∈ Σ^m`, the vigemin of a k-mer is its leftmost m-mer `w` for
//! which `w ⊕ γ` is lexicographically minimal. [`counting::pi`] returns
//! `π_k^γ(w)`, the number of k-mers whose vigemin is `w`, through a dynamic
//! program over antemers (what may precede `w`) and postmers (what may follow
//! it) in `O(|Σ|·k·m²)` time.

pub mod antemers;
pub mod approx;
pub mod count;
pub mod counting;
pub mod distribution;
pub mod empirical;
pub mod error;
pub mod oracle;
pub mod postmers;
pub mod precompute;
pub mod stats;
pub mod words;

pub use counting::{pi, pi_batch, CountingFunction, OpStats, PiResult};
pub use distribution::Distribution;
pub use error::{Error, Result};
pub use words::{vigemin, Alphabet, Letter, LetterSet, VigeminResult, Word};
