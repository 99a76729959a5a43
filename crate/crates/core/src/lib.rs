//! Associahedra `K_r` and 2-associahedra `W_n` as explicit graded posets.
//!
//! Faces come in two models: trees ([`rrt::Rrt`], [`treepair::TreePair`])
//! and bracketings ([`bracketing::OneBracketing`],
//! [`twobracketing::TwoBracketing`]). Enumeration runs breadth first from
//! the top face along codimension-one moves; [`poset::GradedPoset`] then
//! certifies the abstract-polytope axioms, and [`structure`] checks the
//! forgetful map, the recursive face decomposition and the symmetries.
//!
//! ```
//! use twoassoc::treepair::enumerate_wn;
//!
//! let w = enumerate_wn(&[2, 1]).unwrap();
//! assert_eq!(w.poset.face_vector(), vec![8, 8, 1]);
//! assert!(w.poset.adjoin_bottom().unwrap().check_abstract_polytope().is_polytope());
//! ```

#![allow(clippy::needless_range_loop)]

pub mod bracketing;
pub mod cli;
pub mod io;
pub mod poset;
pub mod rrt;
pub mod structure;
pub mod treepair;
pub mod twobracketing;
