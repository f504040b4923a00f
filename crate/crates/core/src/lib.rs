//! Exact graded-ring models of Chow rings of Hilbert schemes of two and three
//! points, and of the nested Hilbert scheme between them.

pub mod construct;
pub mod error;
pub mod hilb;
pub mod io;
pub mod linalg;
pub mod oracles;
pub mod poly;
pub mod ring;
pub mod suite;

pub use error::{Error, Result};
pub use poly::{Generator, Monomial, Polynomial, Rational, VarList};
pub use ring::{QuotientRing, RankTable, RingPresentation};
