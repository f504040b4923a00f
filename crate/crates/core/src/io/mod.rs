pub mod parser;
pub mod report;
pub mod ringfile;

pub use parser::{parse_expression, parse_ring_file, ParseError};
pub use ringfile::{RingFile, TensorTerm, Term};
