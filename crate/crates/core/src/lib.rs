//! Exact-arithmetic lattice-ordered permutation groups on the rationals.
//!
//! Two computable families of transitive ℓ-permutation groups are provided:
//! piecewise-linear order-automorphisms of ℚ with slope-1 tails (the o-2
//! transitive o-primitive component) and automorphisms of finite
//! lexicographic towers ℚ^n with finite override data. On top of them sit
//! the group-definable sets X_h and W_h, explicit non-commutation witnesses
//! for the centralizer machinery, and a certificate checker so every claim
//! is re-verifiable by evaluation alone.

pub mod cert;
pub mod error;
pub mod interval;
pub mod lex;
pub mod plmap;
pub mod rat;
pub mod sampler;
pub mod witness;

pub use error::{Error, Result};
pub use interval::{Endpoint, Interval, IntervalSet, SetRelation};
pub use lex::{Component, ComponentKind, CongruenceLevel, LexAut, OBlock, Point, TowerModel};
pub use plmap::PLMap;
pub use rat::Rat;
