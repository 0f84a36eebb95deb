//! Convolutional codes as linear state-space systems over GF(2).
//!
//! An encoder is the tuple `(A, B, C, D)` stepped one stage at a time
//! ([`encoder`]). The same matrices drive control-theoretic analysis
//! ([`analysis`]) and a backward dynamic-programming maximum-likelihood
//! decoder ([`decoder`]), which is cross-checked by a forward Viterbi pass
//! and exhaustive search. [`channel`] and [`cli::sweep`] provide seeded
//! BSC/AWGN simulation for bit-error-rate sweeps.
//!
//! ```
//! use ssconv::{decoder, DecodeProblem, StateSpaceEncoder, Termination};
//! use ssconv::gf2::BitVector;
//!
//! let enc = StateSpaceEncoder::rsc_example();
//! let input: Vec<BitVector> = ["1", "0", "1"].iter().map(|s| s.parse().unwrap()).collect();
//! let out = enc.encode(&input, &enc.zero_state(), Termination::Free).unwrap();
//! let received: Vec<f64> = out.codeword.iter().flat_map(|y| y.iter().map(|b| b as u8 as f64)).collect();
//! let problem = DecodeProblem::with_defaults(&enc, &received).unwrap();
//! let res = decoder::decode(&enc, &problem).unwrap();
//! assert_eq!(res.inputs, input);
//! assert_eq!(res.total_cost, 0.0);
//! ```

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod exec;
pub mod gf2;

pub use decoder::{DecodeProblem, DecodeResult, Decoder, SymbolMap, ValueTable};
pub use encoder::{StateSpaceEncoder, Termination, TransitionRow};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
