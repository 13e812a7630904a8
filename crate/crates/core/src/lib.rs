//! Exact combinatorial checks that the cycle group of the primitive Venkov
//! graph of a four-dimensional parallelohedron is generated by gain cycles.
//!
//! * [`linalg`]: exact rationals, rank and row-space membership.
//! * [`zonograph`]: the graph calculus of zonotopes with zone vectors `e_i - e_j`.
//! * [`venkov`]: primitive Venkov graphs, gain cycles and the rank criterion.
//! * [`oracle`]: facet and belt enumeration straight from zonotope generators.
//! * [`catalog`]: the sweep over all five-vertex graphs and their zonotope classes.
//! * [`polytope`]: face lattices of small exact polytopes.
//! * [`delone`]: the star of the origin in sliced Delone tilings of `D4`.
//! * [`report`]: JSON, DOT and Markdown reports and batch runs.

pub mod catalog;
pub mod delone;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod polytope;
pub mod report;
pub mod venkov;
pub mod zonograph;

pub use error::{DeloneError, GraphError, GraphParseError, LinalgError, OracleError, PolytopeError};
pub use linalg::{RatMatrix, Rational};
pub use zonograph::{Belt, FacetPair, Parallelohedron3Kind, ZonotopeGraph};
