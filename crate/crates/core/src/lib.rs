//! Exact construction and evaluation of valuations on `K[x]` for the perfect
//! hull `K = F_p(y)^{1/p^∞}`: MacLane chains with augmented and limit stages,
//! truncations by key polynomials, the ε/δ invariants, pseudo-convergent
//! sequences and minimal pairs.

pub mod error;
pub mod family;
pub mod hahn;
pub mod keypoly;
pub mod polyring;
pub mod sample;
pub mod valgroup;
pub mod valuation;

pub use error::{Error, Result};
pub use hahn::{AlgebraicBase, FpElem, HahnApprox, HahnPoint, KElem};
pub use keypoly::{Element, PcsPrefix, RootData, Verdict};
pub use polyring::{PolyK, QExpansion};
pub use valgroup::{GValue, Rat};
pub use valuation::{ChainGenerator, LimitOutcome, ValChain, ValuationOracle};
