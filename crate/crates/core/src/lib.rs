//! Constant GC-content DNA codes.
//!
//! Packed DNA words, upper and lower bounds on the largest code with length
//! `n`, minimum distance `d` and GC-content `w` (optionally with reverse or
//! reverse-complement distance constraints), greedy lexicographic and product
//! constructions, and an independent verifier.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod bounds;
pub mod error;
pub mod lexicode;
mod math;
pub mod products;
pub mod verify;
pub mod words;

pub use bounds::{Bound, BoundTable, ConstraintKind, Direction, Formula, Step};
pub use error::{Error, Result};
pub use lexicode::{construct, construct_with, register_result, Code, CodeParams, Engine, Origin};
pub use products::{
    gc_d2_witness, gcrc_d2_witness, odd_weight_r_code, parity_code, product_gc, product_ternary, r_to_rc,
    BinaryCode, ComponentCode, TernaryCode,
};
pub use verify::{exact_max_code, verify, MinDistance, VerifyReport};
pub use words::{
    odot, oslash, parse_word, BinaryWord, DnaWord, Nucleotide, NucleotideOrdering, OffsetSpec,
    TernaryWord,
};
