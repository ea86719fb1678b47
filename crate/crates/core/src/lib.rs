//! Instances, solutions and sequential reference algorithms.
//!
//! Graphs and set systems are generic over the weight scalar; the default
//! parameter is the exact [`Rational`]. Aliases for the common
//! instantiations live here.

pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod setcover;
pub mod solution;
pub mod validate;
pub mod weight;

use num_rational::{BigRational, Ratio};

pub use error::{CoreError, Result};
pub use generate::{edge_quota, generate_graph, generate_graph_with_edges, generate_set_cover};
pub use graph::{Edge, EdgeId, Graph, VertexId};
pub use setcover::{ElementId, SetCoverInstance, SetId};
pub use solution::{Colour, Colouring, ColouringKind, Cover, Matching, VertexSet};
pub use validate::{Objective, Report, Verdict, Violation};
pub use weight::{ceil_log, ceil_pow, floor_pow, harmonic, Weight};

/// Arbitrary-precision rational; the default weight type.
pub type Rational = BigRational;
/// Machine-word rational, exact until it overflows.
pub type SmallRational = Ratio<i64>;

pub type ExactGraph = Graph<Rational>;
pub type FloatGraph = Graph<f64>;
pub type Float32Graph = Graph<f32>;
pub type ExactSetCover = SetCoverInstance<Rational>;
pub type FloatSetCover = SetCoverInstance<f64>;

/// Integer as a [`Rational`].
pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `num / den` as a [`Rational`].
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
