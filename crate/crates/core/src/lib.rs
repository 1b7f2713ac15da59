//! Exact verification of Gelfand and pm+ properties for graded commutative rings.

pub mod ambient;
pub mod bitset;
pub mod cli;
pub mod construct;
pub mod criteria;
pub mod degree;
pub mod element;
pub mod error;
pub mod finite;
pub mod ideal;
pub(crate) mod node;
pub mod report;
pub mod ring;
pub mod spectrum;
pub mod topology;
pub mod verdict;

pub use construct::{build_ring, ConstructionSpec};
pub use element::Element;
pub use error::{Error, Result};
pub use ideal::GradedIdeal;
pub use ring::{Flag, GradedRing, HeightBound};
pub use spectrum::SpectrumPoset;
pub use verdict::Verdict;
