//! Exact computations in the graded diagram groups attached to grope
//! cobordism of knots.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`graph`]: uni-trivalent graphs (open Jacobi diagrams) and closed
//!   diagrams on an oriented circle, with their Vassiliev, grope, Euler and
//!   loop degrees;
//! * [`canon`]: signed canonical forms, so that an oriented diagram is a
//!   canonical generator times a sign;
//! * [`enumerate`]: exhaustive generation of diagram bases;
//! * [`relations`]: AS, IHX and STU relation rows (plus the rows that kill
//!   products, isolated chords and high-loop diagrams);
//! * [`linalg`]: sparse Smith normal form, cokernels and rational ranks;
//! * [`spaces`]: the groups `B^v_k`, `B^g_k`, `A_k`, `A^I_k`, `A^I_k[m]` and
//!   the structural cross-checks between them;
//! * [`knot`]: Gauss codes and the low degree invariants `c2`, `v3`, Arf.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod canon;
pub mod enumerate;
pub mod graph;
pub mod knot;
pub mod linalg;
pub mod relations;
pub mod spaces;

pub use canon::{canonical_form, self_negative_automorphism, CanonicalKey, Sign, SignedCanonical};

pub use graph::{ClosedDiagram, Degrees, GraphError, UniTrivalentGraph, Vertex};

pub use enumerate::{attach_legs, enumerate, EnumError, EnumSpec, Generator, Grading, Space};
pub use knot::{parse_gauss, GaussCode};
pub use linalg::{cokernel, rational_rank, smith_invariants, GradedAbelianGroup, LinalgError, SparseIntMatrix};
pub use relations::{RelationRow, Tag};
pub use spaces::{Engine, Flags, Presentation, SpaceError, SpaceId, SpaceResult};
