//! The 8-dimensional torus algebra over F2: the path algebra of a two-vertex
//! quiver with basis {i0, i1, r1, r2, r3, r12, r23, r123}.

use crate::error::{Error, Result};
use crate::grading::GradingElement;
use std::collections::BTreeSet;
use std::fmt;

/// One of the two vertex idempotents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Idem {
    I0,
    I1,
}

impl fmt::Display for Idem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idem::I0 => write!(f, "i0"),
            Idem::I1 => write!(f, "i1"),
        }
    }
}

/// A basis element of the torus algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraBasis {
    I0,
    I1,
    R1,
    R2,
    R3,
    R12,
    R23,
    R123,
}

pub const ALL_BASIS: [AlgebraBasis; 8] = [
    AlgebraBasis::I0,
    AlgebraBasis::I1,
    AlgebraBasis::R1,
    AlgebraBasis::R2,
    AlgebraBasis::R3,
    AlgebraBasis::R12,
    AlgebraBasis::R23,
    AlgebraBasis::R123,
];

/// The six non-idempotent elements.
pub const RHO_BASIS: [AlgebraBasis; 6] = [
    AlgebraBasis::R1,
    AlgebraBasis::R2,
    AlgebraBasis::R3,
    AlgebraBasis::R12,
    AlgebraBasis::R23,
    AlgebraBasis::R123,
];

impl AlgebraBasis {
    pub fn is_idempotent(self) -> bool {
        matches!(self, AlgebraBasis::I0 | AlgebraBasis::I1)
    }

    /// (left, right) idempotents per the quiver: i0 r1 i1, i1 r2 i0, i0 r3 i1,
    /// i0 r12 i0, i1 r23 i1, i0 r123 i1.
    pub fn idempotent_sides(self) -> (Idem, Idem) {
        match self {
            AlgebraBasis::I0 => (Idem::I0, Idem::I0),
            AlgebraBasis::I1 => (Idem::I1, Idem::I1),
            AlgebraBasis::R1 => (Idem::I0, Idem::I1),
            AlgebraBasis::R2 => (Idem::I1, Idem::I0),
            AlgebraBasis::R3 => (Idem::I0, Idem::I1),
            AlgebraBasis::R12 => (Idem::I0, Idem::I0),
            AlgebraBasis::R23 => (Idem::I1, Idem::I1),
            AlgebraBasis::R123 => (Idem::I0, Idem::I1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraBasis::I0 => "i0",
            AlgebraBasis::I1 => "i1",
            AlgebraBasis::R1 => "r1",
            AlgebraBasis::R2 => "r2",
            AlgebraBasis::R3 => "r3",
            AlgebraBasis::R12 => "r12",
            AlgebraBasis::R23 => "r23",
            AlgebraBasis::R123 => "r123",
        }
    }

    pub fn parse(s: &str) -> Result<AlgebraBasis> {
        ALL_BASIS
            .iter()
            .copied()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown algebra element {s:?}")))
    }
}

impl fmt::Display for AlgebraBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Product of two basis elements: path concatenation, zero when the paths do
/// not compose. Returns `None` for the zero product.
pub fn multiply_basis(a: AlgebraBasis, b: AlgebraBasis) -> Option<AlgebraBasis> {
    use AlgebraBasis::*;
    let (_, ra) = a.idempotent_sides();
    let (lb, _) = b.idempotent_sides();
    if ra != lb {
        return None;
    }
    match (a, b) {
        (I0, x) | (x, I0) => Some(x),
        (I1, x) | (x, I1) => Some(x),
        (R1, R2) => Some(R12),
        (R2, R3) => Some(R23),
        (R1, R23) => Some(R123),
        (R12, R3) => Some(R123),
        _ => None,
    }
}

/// An F2-linear combination of basis elements; the empty set is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraValue {
    pub support: BTreeSet<AlgebraBasis>,
}

impl AlgebraValue {
    pub fn zero() -> Self {
        AlgebraValue {
            support: BTreeSet::new(),
        }
    }

    /// The unit 1 = i0 + i1.
    pub fn unit() -> Self {
        AlgebraValue {
            support: [AlgebraBasis::I0, AlgebraBasis::I1].into_iter().collect(),
        }
    }

    pub fn single(b: AlgebraBasis) -> Self {
        AlgebraValue {
            support: [b].into_iter().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, rhs: &AlgebraValue) -> AlgebraValue {
        AlgebraValue {
            support: self
                .support
                .symmetric_difference(&rhs.support)
                .copied()
                .collect(),
        }
    }

    pub fn multiply(&self, rhs: &AlgebraValue) -> AlgebraValue {
        let mut out = BTreeSet::new();
        for &a in &self.support {
            for &b in &rhs.support {
                if let Some(c) = multiply_basis(a, b) {
                    if !out.insert(c) {
                        out.remove(&c);
                    }
                }
            }
        }
        AlgebraValue { support: out }
    }
}

/// Grading of a basis element in the enhanced grading group. Idempotents are
/// graded by the identity and the longer elements by products of the three
/// generators.
pub fn grading_of(x: AlgebraBasis) -> GradingElement {
    use AlgebraBasis::*;
    let r1 = GradingElement::from_doubled(-1, 1, -1, 0);
    let r2 = GradingElement::from_doubled(-1, 1, 1, 0);
    let r3 = GradingElement::from_doubled(-1, -1, 1, 0);
    match x {
        I0 | I1 => GradingElement::IDENTITY,
        R1 => r1,
        R2 => r2,
        R3 => r3,
        R12 => r1.compose(r2),
        R23 => r2.compose(r3),
        R123 => r1.compose(r2).compose(r3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AlgebraBasis::*;

    #[test]
    fn quiver_products() {
        assert_eq!(multiply_basis(R1, R2), Some(R12));
        assert_eq!(multiply_basis(R2, R3), Some(R23));
        assert_eq!(multiply_basis(R1, R23), Some(R123));
        assert_eq!(multiply_basis(R12, R3), Some(R123));
        assert_eq!(multiply_basis(R2, R1), None);
        assert_eq!(multiply_basis(R3, R2), None);
        assert_eq!(multiply_basis(R23, R23), None);
        assert_eq!(multiply_basis(I0, R1), Some(R1));
        assert_eq!(multiply_basis(R1, I1), Some(R1));
        assert_eq!(multiply_basis(R1, I0), None);
    }

    #[test]
    fn multiplication_is_associative_exhaustively() {
        for &a in &ALL_BASIS {
            for &b in &ALL_BASIS {
                for &c in &ALL_BASIS {
                    let left = multiply_basis(a, b).and_then(|ab| multiply_basis(ab, c));
                    let right = multiply_basis(b, c).and_then(|bc| multiply_basis(a, bc));
                    assert_eq!(left, right, "associativity fails at {a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn grading_is_multiplicative_on_composable_pairs() {
        for &a in &ALL_BASIS {
            for &b in &ALL_BASIS {
                if let Some(ab) = multiply_basis(a, b) {
                    assert_eq!(
                        grading_of(a).compose(grading_of(b)),
                        grading_of(ab),
                        "gr not multiplicative at {a} * {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn idempotent_consistency() {
        for &a in &ALL_BASIS {
            for &b in &ALL_BASIS {
                if multiply_basis(a, b).is_some() {
                    assert_eq!(a.idempotent_sides().1, b.idempotent_sides().0);
                }
            }
        }
    }

    #[test]
    fn grading_table_values() {
        assert_eq!(grading_of(R2), GradingElement::from_doubled(-1, 1, 1, 0));
        assert_eq!(grading_of(I1), GradingElement::IDENTITY);
        assert_eq!(
            grading_of(R123),
            grading_of(R1)
                .compose(grading_of(R2))
                .compose(grading_of(R3))
        );
        assert_eq!(grading_of(R23), GradingElement::from_doubled(-1, 0, 2, 0));
    }

    #[test]
    fn idempotent_sides_examples() {
        assert_eq!(R23.idempotent_sides(), (Idem::I1, Idem::I1));
        assert_eq!(I0.idempotent_sides(), (Idem::I0, Idem::I0));
        assert_eq!(R123.idempotent_sides(), (Idem::I0, Idem::I1));
    }

    #[test]
    fn value_arithmetic() {
        let unit = AlgebraValue::unit();
        let r1 = AlgebraValue::single(R1);
        assert_eq!(unit.multiply(&r1), r1);
        assert_eq!(r1.multiply(&unit), r1);
        assert!(r1.multiply(&AlgebraValue::single(R3)).is_zero());
        let sum = r1.add(&AlgebraValue::single(R1));
        assert!(sum.is_zero());
    }

    #[test]
    fn parse_round_trip() {
        for &b in &ALL_BASIS {
            assert_eq!(AlgebraBasis::parse(b.name()).unwrap(), b);
        }
        assert!(AlgebraBasis::parse("r13").is_err());
    }
}
