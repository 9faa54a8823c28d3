//! Misleading-video detection from metadata and viewer comments.
//!
//! The crate covers dataset handling and candidate mining ([`corpus`]), the
//! simple lexical features ([`features`], [`title_scorer`]), word-vector
//! lookup ([`embeddings`]), a small neural toolkit ([`nn`]), the comment
//! network ([`ucnet`]), baseline classifiers ([`classic`]) and evaluation
//! ([`eval`]). It is `no_std` with `alloc`; file formats and the command
//! line live in the `fakevid` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classic;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod features;
pub mod lexicon;
pub mod nn;
pub mod parallel;
pub mod synthetic;
pub mod text;
pub mod title_scorer;
pub mod ucnet;

pub use error::{Error, Result};
