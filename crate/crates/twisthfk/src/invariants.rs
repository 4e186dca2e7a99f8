//! Bigraded invariants of a paired complex: homology table, Alexander
//! polynomial, genus, tau, thickness and the Alexander jump sequence.

use crate::box_tensor::{blockwise_dims, BoxComplex};
use crate::error::{Error, Result};
use crate::f2::{self, BitVec};
use crate::type_a::View;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Homology dimensions per (alexander, maslov) bigrading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HFKTable {
    /// (alexander, maslov) -> dimension, nonzero entries only.
    pub dims: BTreeMap<(i64, i64), usize>,
    pub twist_count: u32,
}

impl HFKTable {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Largest Alexander grading carrying homology.
    pub fn genus(&self) -> i64 {
        self.dims.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn min_alexander(&self) -> i64 {
        self.dims.keys().map(|&(a, _)| a).min().unwrap_or(0)
    }

    /// The bigraded dimensions of one Alexander column: maslov -> dim.
    pub fn column(&self, a: i64) -> BTreeMap<i64, usize> {
        self.dims
            .iter()
            .filter(|(&(col, _), _)| col == a)
            .map(|(&(_, h), &d)| (h, d))
            .collect()
    }

    fn check_symmetry(&self) -> Result<()> {
        for (&(a, h), &d) in &self.dims {
            let mirror = self.dims.get(&(-a, h - 2 * a)).copied().unwrap_or(0);
            if mirror != d {
                return Err(Error::AsymmetricHfk(format!(
                    "dims({a},{h}) = {d} but dims({},{}) = {mirror}",
                    -a,
                    h - 2 * a
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for HFKTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(a, h), &d) in &self.dims {
            writeln!(f, "({a},{h}): {d}")?;
        }
        Ok(())
    }
}

/// Laurent-polynomial coefficients of the Alexander polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlexanderPoly {
    /// exponent -> coefficient, nonzero entries only.
    pub coeffs: BTreeMap<i64, i64>,
}

impl AlexanderPoly {
    pub fn coeff(&self, i: i64) -> i64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().max().copied().unwrap_or(0)
    }

    pub fn min_degree(&self) -> i64 {
        self.coeffs.keys().min().copied().unwrap_or(0)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

impl fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (mag, e) {
                (1, 0) => write!(f, "1")?,
                (m, 0) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (m, 1) => write!(f, "{m}t")?,
                (1, ex) => write!(f, "t^{ex}")?,
                (m, ex) => write!(f, "{m}t^{ex}")?,
            }
        }
        Ok(())
    }
}

/// Blockwise homology dimensions of a bigraded knot-view complex, with the
/// symmetry dims(a,h) = dims(-a, h-2a) asserted.
pub fn hfk_table(knot_c: &BoxComplex) -> Result<HFKTable> {
    assert_eq!(knot_c.view, View::Knot);
    let grading = knot_c
        .bigrading
        .as_ref()
        .ok_or_else(|| Error::Invalid("complex must be bigraded".into()))?;
    let dims = blockwise_dims(knot_c, grading);
    let table = HFKTable {
        dims,
        twist_count: knot_c.twist_count,
    };
    table.check_symmetry()?;
    Ok(table)
}

/// Signed column sums of the table: alpha_i = sum_h (-1)^h dims(i, h).
/// Asserts the symmetry alpha_i = alpha_{-i} and the normalization
/// Delta(1) = 1.
pub fn alexander_polynomial(table: &HFKTable) -> Result<AlexanderPoly> {
    let mut coeffs: BTreeMap<i64, i64> = BTreeMap::new();
    for (&(a, h), &d) in &table.dims {
        let sign = if h.rem_euclid(2) == 0 { 1 } else { -1 };
        *coeffs.entry(a).or_insert(0) += sign * d as i64;
    }
    coeffs.retain(|_, c| *c != 0);
    let poly = AlexanderPoly { coeffs };
    match poly.eval_at_one() {
        1 => {}
        0 => {
            return Err(Error::Invalid(
                "Alexander polynomial vanishes at 1: normalization failed upstream".into(),
            ))
        }
        other => {
            return Err(Error::Invalid(format!(
                "Alexander polynomial evaluates to {other} at 1, expected 1"
            )))
        }
    }
    for (&e, &c) in &poly.coeffs {
        if poly.coeff(-e) != c {
            return Err(Error::AsymmetricHfk(format!(
                "alpha_{e} = {c} but alpha_{} = {}",
                -e,
                poly.coeff(-e)
            )));
        }
    }
    Ok(poly)
}

/// The minimal Alexander filtration level whose homology maps onto the
/// z-view generator class: sweep the filtration upward and test membership
/// of the generator in span(cycles of the sublevel) + boundaries.
pub fn tau(knot_c: &BoxComplex, z_c: &BoxComplex) -> Result<i64> {
    assert_eq!(z_c.view, View::Full);
    let grading = knot_c
        .bigrading
        .as_ref()
        .ok_or_else(|| Error::Invalid("complex must be bigraded".into()))?;
    let n = z_c.dim();
    let h = z_c.homology();
    if h.dim() != 1 {
        return Err(Error::NotKnotPattern { dim: h.dim() });
    }
    let generator = h.classes[0].clone();

    let mut levels: Vec<i64> = grading.iter().map(|&(_, a)| a).collect();
    levels.sort();
    levels.dedup();

    let mut reached = false;
    let mut answer = None;
    for &level in &levels {
        let members: Vec<usize> = (0..n).filter(|&i| grading[i].1 <= level).collect();
        // Cycles of the z-view differential restricted to the sublevel.
        // The differential never raises the Alexander grading, so the
        // sublevel is a subcomplex.
        let index_of: BTreeMap<usize, usize> = members
            .iter()
            .enumerate()
            .map(|(k, &pos)| (pos, k))
            .collect();
        let cycles: Vec<BitVec> = f2::kernel_basis(members.len(), |k| {
            let full = z_c.boundary_of(members[k]);
            debug_assert!(full.ones().iter().all(|pos| index_of.contains_key(pos)));
            full
        })
        .into_iter()
        .map(|local| {
            let mut global = BitVec::zeros(n);
            for one in local.ones() {
                global.set(members[one], true);
            }
            global
        })
        .collect();
        let hit = f2::class_in_span(n, |i| z_c.boundary_of(i), &generator, &cycles);
        if reached && !hit {
            return Err(Error::Invalid(
                "filtration map lost surjectivity at a higher level".into(),
            ));
        }
        if hit && !reached {
            reached = true;
            answer = Some(level);
        }
    }
    answer.ok_or_else(|| Error::Invalid("generator never reached by the filtration".into()))
}

/// Spread of the delta grading h - a over the nonzero homology groups.
pub fn thickness(table: &HFKTable) -> i64 {
    let deltas: Vec<i64> = table.dims.keys().map(|&(a, h)| h - a).collect();
    match (deltas.iter().min(), deltas.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    }
}

pub fn delta_range(table: &HFKTable) -> (i64, i64) {
    let deltas: Vec<i64> = table.dims.keys().map(|&(a, h)| h - a).collect();
    match (deltas.iter().min(), deltas.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    }
}

/// The jump sequence d_i = alpha_i - alpha_{i+omega}, over the index range
/// where either term can be nonzero.
pub fn jump_sequence(poly: &AlexanderPoly, omega: i64) -> BTreeMap<i64, i64> {
    assert_ne!(omega, 0, "jump sequence requires nonzero winding");
    let mut jumps = BTreeMap::new();
    if poly.coeffs.is_empty() {
        return jumps;
    }
    let lo = poly.min_degree() - omega.abs();
    let hi = poly.degree() + omega.abs();
    for i in lo..=hi {
        let d = poly.coeff(i) - poly.coeff(i + omega);
        if d != 0 {
            jumps.insert(i, d);
        }
    }
    jumps
}
