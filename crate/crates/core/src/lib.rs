pub mod dimension;
pub mod error;
pub mod generators;
mod par;
pub mod primes;
pub mod reals;
pub mod shiftspace;
pub mod word;

pub use error::{Error, Result};
pub use word::{IndexSet, Word};
