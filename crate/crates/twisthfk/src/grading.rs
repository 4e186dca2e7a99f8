//! Exact arithmetic in the noncommutative grading group and extraction of
//! relative (Maslov, Alexander) bigradings from double cosets.
//!
//! Elements are quadruples (maslov; spin_i, spin_j; alex) with half-integer
//! first three components and the group law
//! `(m1;i1,j1;a1)*(m2;i2,j2;a2) = (m1+m2+i1*j2-j1*i2; i1+i2, j1+j2; a1+a2)`.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A half-integer stored as twice its value, so all arithmetic is exact.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };

    pub fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    pub fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integral(self) -> bool {
        self.doubled % 2 == 0
    }

    /// The integer value; panics if the value is not integral.
    pub fn to_int(self) -> i64 {
        assert!(self.is_integral(), "half-integer {self} is not integral");
        self.doubled / 2
    }

    pub fn times_int(self, n: i64) -> Self {
        HalfInt {
            doubled: self.doubled * n,
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled + rhs.doubled,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled - rhs.doubled,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt {
            doubled: -self.doubled,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_integral() {
            s.serialize_i64(self.doubled / 2)
        } else {
            s.serialize_str(&format!("{}/2", self.doubled))
        }
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(HalfInt::from_int(n)),
            Raw::Str(s) => parse_halfint(&s).map_err(D::Error::custom),
        }
    }
}

fn parse_halfint(s: &str) -> std::result::Result<HalfInt, String> {
    let t = s.trim();
    if let Some(num) = t.strip_suffix("/2") {
        let doubled: i64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad half-integer {s:?}"))?;
        Ok(HalfInt::from_doubled(doubled))
    } else {
        let n: i64 = t.parse().map_err(|_| format!("bad half-integer {s:?}"))?;
        Ok(HalfInt::from_int(n))
    }
}

/// An element of the enhanced grading group: Maslov and Spin^c components in
/// half-integers (with `spin_i + spin_j` integral) plus an integer Alexander
/// factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GradingElement {
    pub maslov: HalfInt,
    pub spin_i: HalfInt,
    pub spin_j: HalfInt,
    pub alex: i64,
}

/// The central element (1;0,0;0).
pub const LAMBDA: GradingElement = GradingElement {
    maslov: HalfInt { doubled: 2 },
    spin_i: HalfInt { doubled: 0 },
    spin_j: HalfInt { doubled: 0 },
    alex: 0,
};

/// The central element (0;0,0;1).
pub const MU: GradingElement = GradingElement {
    maslov: HalfInt { doubled: 0 },
    spin_i: HalfInt { doubled: 0 },
    spin_j: HalfInt { doubled: 0 },
    alex: 1,
};

impl GradingElement {
    pub const IDENTITY: GradingElement = GradingElement {
        maslov: HalfInt { doubled: 0 },
        spin_i: HalfInt { doubled: 0 },
        spin_j: HalfInt { doubled: 0 },
        alex: 0,
    };

    pub fn new(maslov: HalfInt, spin_i: HalfInt, spin_j: HalfInt, alex: i64) -> Result<Self> {
        if (spin_i + spin_j).is_integral() {
            Ok(GradingElement {
                maslov,
                spin_i,
                spin_j,
                alex,
            })
        } else {
            Err(Error::Schema(format!(
                "spin components ({spin_i}, {spin_j}) must sum to an integer"
            )))
        }
    }

    /// Construct from doubled Maslov/spin components and an integer Alexander
    /// factor. Convenient for literals: `from_doubled(-1, 1, -1, 0)` is
    /// (-1/2; 1/2, -1/2; 0).
    pub fn from_doubled(m2: i64, i2: i64, j2: i64, alex: i64) -> Self {
        assert!((i2 + j2) % 2 == 0, "spin components must sum to an integer");
        GradingElement {
            maslov: HalfInt::from_doubled(m2),
            spin_i: HalfInt::from_doubled(i2),
            spin_j: HalfInt::from_doubled(j2),
            alex,
        }
    }

    pub fn compose(self, rhs: GradingElement) -> GradingElement {
        // Cross term i1*j2 - j1*i2; products of two half-integers land in
        // quarter-integers in general, but the i+j parity invariant keeps the
        // result a half-integer (even doubled product below).
        let cross4 = self.spin_i.doubled() * rhs.spin_j.doubled()
            - self.spin_j.doubled() * rhs.spin_i.doubled();
        debug_assert!(cross4 % 2 == 0, "cross term must be a half-integer");
        GradingElement {
            maslov: self.maslov + rhs.maslov + HalfInt::from_doubled(cross4 / 2),
            spin_i: self.spin_i + rhs.spin_i,
            spin_j: self.spin_j + rhs.spin_j,
            alex: self.alex + rhs.alex,
        }
    }

    /// Group inverse; the cross term cancels so components just negate.
    pub fn inverse(self) -> GradingElement {
        GradingElement {
            maslov: -self.maslov,
            spin_i: -self.spin_i,
            spin_j: -self.spin_j,
            alex: -self.alex,
        }
    }

    pub fn power(self, n: i64) -> GradingElement {
        let (base, count) = if n >= 0 {
            (self, n)
        } else {
            (self.inverse(), -n)
        };
        let mut acc = GradingElement::IDENTITY;
        for _ in 0..count {
            acc = acc.compose(base);
        }
        acc
    }

    /// Drops the Alexander factor.
    pub fn without_alex(self) -> GradingElement {
        GradingElement { alex: 0, ..self }
    }
}

impl fmt::Display for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {}, {}; {})",
            self.maslov, self.spin_i, self.spin_j, self.alex
        )
    }
}

impl fmt::Debug for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for GradingElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alex_half = HalfInt::from_int(self.alex);
        [self.maslov, self.spin_i, self.spin_j, alex_half].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradingElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: [HalfInt; 4] = Deserialize::deserialize(d)?;
        if !raw[3].is_integral() {
            return Err(D::Error::custom("Alexander component must be an integer"));
        }
        GradingElement::new(raw[0], raw[1], raw[2], raw[3].to_int()).map_err(D::Error::custom)
    }
}

/// The pair of periodic-subgroup generators that defines the grading double
/// cosets of a paired complex: the pattern side acts on the left, the
/// 1/m-framed solid-torus side on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleCosetContext {
    left_gen: GradingElement,
    right_gen: GradingElement,
    twist_count: u32,
}

impl DoubleCosetContext {
    /// Builds a context from the pattern's periodic generator and the twist
    /// count. The left generator is normalized to spin shape (0, 1); a
    /// generator with spin (0, -1) denotes the same cyclic subgroup and is
    /// inverted. Any other spin shape is rejected.
    pub fn new(pattern_periodic: GradingElement, twist_count: u32) -> Result<Self> {
        if twist_count == 0 {
            return Err(Error::DegenerateContext(
                "twist count must be at least 1".into(),
            ));
        }
        let one = HalfInt::from_int(1);
        let left = if pattern_periodic.spin_i == HalfInt::ZERO && pattern_periodic.spin_j == one {
            pattern_periodic
        } else if pattern_periodic.spin_i == HalfInt::ZERO && pattern_periodic.spin_j == -one {
            pattern_periodic.inverse()
        } else {
            return Err(Error::DegenerateContext(format!(
                "left generator {pattern_periodic} does not have spin shape (0, \u{b1}1)"
            )));
        };
        if left.alex == 0 {
            return Err(Error::DegenerateContext(
                "left generator has zero winding (Alexander component)".into(),
            ));
        }
        let m = i64::from(twist_count);
        // P(eta) for the 1/m family: (-(m-1)/2; 1, -m), Alexander factor 0.
        let right = GradingElement::from_doubled(-(m - 1), 2, -2 * m, 0);
        let ctx = DoubleCosetContext {
            left_gen: left,
            right_gen: right,
            twist_count,
        };
        ctx.check_nondegenerate()?;
        Ok(ctx)
    }

    fn check_nondegenerate(&self) -> Result<()> {
        let det = self.left_gen.spin_i.doubled() * self.right_gen.spin_j.doubled()
            - self.left_gen.spin_j.doubled() * self.right_gen.spin_i.doubled();
        if det == 0 {
            return Err(Error::DegenerateContext(
                "left and right generator spins are linearly dependent".into(),
            ));
        }
        Ok(())
    }

    pub fn left_gen(&self) -> GradingElement {
        self.left_gen
    }

    pub fn right_gen(&self) -> GradingElement {
        self.right_gen
    }

    pub fn twist_count(&self) -> u32 {
        self.twist_count
    }

    /// Maslov component of the normalized left generator.
    pub fn maslov_m(&self) -> HalfInt {
        self.left_gen.maslov
    }

    /// Alexander component of the normalized left generator.
    pub fn omega(&self) -> i64 {
        self.left_gen.alex
    }

    /// Relative (Maslov, Alexander) bigrading of `g1` against `g2`:
    /// the unique integers (h, a) with [g1] = [g2 * lambda^h * mu^a] in the
    /// double coset space, or `None` when no such integers exist (the two
    /// elements lie in different Spin^c structures).
    ///
    /// Specialized to the (0,1)/(1,-m) spin shapes enforced at construction:
    /// right-translate by `t = spin_i(g2) - spin_i(g1)` powers, then
    /// left-translate by `s = spin_j(g2) - spin_j(g1) + t*m` powers.
    pub fn relative_bigrading(&self, g1: GradingElement, g2: GradingElement) -> Option<(i64, i64)> {
        let t_half = g2.spin_i - g1.spin_i;
        if !t_half.is_integral() {
            return None;
        }
        let t = t_half.to_int();
        let s_half = (g2.spin_j - g1.spin_j) + t_half.times_int(i64::from(self.twist_count));
        debug_assert!(
            s_half.is_integral(),
            "spin parity forces an integral left exponent"
        );
        let s = s_half.to_int();
        let moved = self
            .left_gen
            .power(s)
            .compose(g1)
            .compose(self.right_gen.power(t));
        debug_assert_eq!(moved.spin_i, g2.spin_i);
        debug_assert_eq!(moved.spin_j, g2.spin_j);
        let h = moved.maslov - g2.maslov;
        if !h.is_integral() {
            // Gradings of generators in one complex always differ by integral
            // Maslov; arbitrary group elements need not.
            return None;
        }
        Some((h.to_int(), moved.alex - g2.alex))
    }
}
