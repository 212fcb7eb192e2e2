use std::fmt;

use thiserror::Error;

/// Structural description of a port bundle, used to check that two processes
/// agree on the communication pattern before any of them runs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Shape {
    /// A single channel communicating one value per transfer.
    Item,
    /// An element bundle plus an end-of-transmission channel.
    Stream(Box<Shape>),
    /// `n` independent copies of the inner bundle, one transfer each.
    Vector(usize, Box<Shape>),
    /// Two unrelated bundles owned by the same process.
    Pair(Box<Shape>, Box<Shape>),
    /// No channels at all (sources and sinks).
    Nil,
}

impl Shape {
    pub fn stream(inner: Shape) -> Shape {
        Shape::Stream(Box::new(inner))
    }

    pub fn vector(n: usize, inner: Shape) -> Shape {
        Shape::Vector(n, Box::new(inner))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Item => write!(f, "item"),
            Shape::Stream(s) => write!(f, "stream<{s}>"),
            Shape::Vector(n, s) => write!(f, "vector<{n}, {s}>"),
            Shape::Pair(a, b) => write!(f, "pair<{a}, {b}>"),
            Shape::Nil => write!(f, "nil"),
        }
    }
}

/// Construction-time wiring failures.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("port shape mismatch: output {output} cannot feed input {input}")]
    Mismatch { output: Shape, input: Shape },
    #[error("{what}: expected {expected} elements, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0}")]
    Invalid(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_nested() {
        let s = Shape::stream(Shape::vector(4, Shape::Item));
        assert_eq!(s.to_string(), "stream<vector<4, item>>");
        let p = Shape::Pair(Box::new(s.clone()), Box::new(Shape::Item));
        assert_eq!(p.to_string(), "pair<stream<vector<4, item>>, item>");
    }
}
