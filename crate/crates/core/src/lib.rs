//! Kasteleyn theory for planar bipartite graphs in the disk.
//!
//! The crate covers graph validation and face tracing, positroid
//! combinatorics, edge and face weights with their moves, Kasteleyn
//! signatures and matrices, geometric signatures built from flows, systems of
//! relations on the vertices, and the construction of KP-II divisors on the
//! reducible rational curve dual to a network.

pub mod corpus;
pub mod kasteleyn;
pub mod error;
pub mod geometric;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod positroid;
pub mod rational;
pub mod relations;
pub mod kp;
pub mod weights;

pub use error::{Error, ErrorClass};
pub use rational::Rational;
