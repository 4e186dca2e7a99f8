//! Immersed-curve dimension oracle: slope systems, the Dehn-twist action on
//! slopes, and the intersection-count prediction of homology dimensions.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One immersed component: a local-system dimension and the slopes of its
/// linear segments. A slope (p, q) is a lift direction with q horizontal
/// (meridian) steps and p vertical ones; vertical lines are (+-1, 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub k: u32,
    pub slopes: Vec<(i64, i64)>,
}

/// A collection of decorated components, as read from a curve file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSystem {
    pub components: Vec<CurveComponent>,
    /// Marks systems recovered from measured dimensions rather than
    /// transcribed geometry.
    #[serde(default)]
    pub fitted: bool,
}

impl CurveSystem {
    pub fn load(path: &Path) -> Result<CurveSystem> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<CurveSystem> {
        let system: CurveSystem =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        system.validate()?;
        Ok(system)
    }

    fn validate(&self) -> Result<()> {
        for comp in &self.components {
            if comp.k == 0 {
                return Err(Error::Schema(
                    "local-system dimension must be positive".into(),
                ));
            }
            for &(p, q) in &comp.slopes {
                if q < 0 {
                    return Err(Error::Schema(format!("slope ({p},{q}) must have q >= 0")));
                }
                let g = gcd(p.unsigned_abs(), q.unsigned_abs());
                if q > 0 && g != 1 {
                    return Err(Error::Schema(format!("slope ({p},{q}) is not primitive")));
                }
                if q == 0 && p.abs() != 1 {
                    return Err(Error::Schema(format!(
                        "vertical slope ({p},{q}) must be (+-1, 0)"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The meridional Dehn twist acts on slopes by (p, q) -> (p, q + n*p);
    /// local systems and component count are unchanged.
    pub fn dehn_twist(&self, n: i64) -> CurveSystem {
        CurveSystem {
            components: self
                .components
                .iter()
                .map(|c| CurveComponent {
                    k: c.k,
                    slopes: c.slopes.iter().map(|&(p, q)| (p, q + n * p)).collect(),
                })
                .collect(),
            fitted: self.fitted,
        }
    }

    /// Predicted homology dimension at twist m: sum of k * |p - m*q| over all
    /// segments. Errors when a slope coincides with the surgery line (the
    /// transversality hypothesis fails).
    pub fn predicted_dim(&self, m: u32) -> Result<u64> {
        let mi = i64::from(m);
        let mut total: u64 = 0;
        for comp in &self.components {
            for &(p, q) in &comp.slopes {
                let det = p - mi * q;
                if det == 0 {
                    return Err(Error::SlopeCollision { p, q, m });
                }
                total += u64::from(comp.k) * det.unsigned_abs();
            }
        }
        Ok(total)
    }

    /// Asymptotic slope and intercept of the prediction: for m beyond all
    /// slope ratios, predicted = D*m - d.
    pub fn asymptotic_line(&self) -> (i64, i64) {
        let mut slope = 0;
        let mut intercept = 0;
        for comp in &self.components {
            for &(p, q) in &comp.slopes {
                if q > 0 {
                    slope += i64::from(comp.k) * q;
                    intercept += i64::from(comp.k) * p;
                } else {
                    // Vertical lines contribute the constant |p| = 1.
                    intercept -= i64::from(comp.k) * p.abs();
                }
            }
        }
        (slope, intercept)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Recovers (D, d) with total = D*m - d from measured dimensions; the input
/// must be exactly affine with at least two points.
pub fn fit_curve_from_dims(dims: &[(u32, u64)]) -> Result<(u64, i64)> {
    if dims.len() < 2 {
        return Err(Error::NonAffine("need at least two tail points".into()));
    }
    let (m0, v0) = dims[0];
    let (m1, v1) = dims[1];
    if m1 == m0 {
        return Err(Error::NonAffine("duplicate twist values".into()));
    }
    let dm = i64::from(m1) - i64::from(m0);
    let dv = v1 as i64 - v0 as i64;
    if dv % dm != 0 {
        return Err(Error::NonAffine("non-integral slope".into()));
    }
    let slope = dv / dm;
    if slope < 0 {
        return Err(Error::NonAffine(
            "dimension series must be nondecreasing".into(),
        ));
    }
    let d = slope * i64::from(m0) - v0 as i64;
    for &(m, v) in dims {
        if slope * i64::from(m) - d != v as i64 {
            return Err(Error::NonAffine(format!(
                "point (m={m}, {v}) is off the line"
            )));
        }
    }
    Ok((slope as u64, d))
}

pub const MAZUR_CURVES_JSON: &str = include_str!("../fixtures/mazur_curves.json");
pub const UNKNOT_CURVES_JSON: &str = include_str!("../fixtures/unknot_curves.json");

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn system(components: Vec<(u32, Vec<(i64, i64)>)>) -> CurveSystem {
        CurveSystem {
            components: components
                .into_iter()
                .map(|(k, slopes)| CurveComponent { k, slopes })
                .collect(),
            fitted: false,
        }
    }

    #[test]
    fn direct_formula_arithmetic() {
        let c = system(vec![(1, vec![(3, 1)]), (2, vec![(1, 1)])]);
        assert_eq!(c.predicted_dim(5).unwrap(), 10);
    }

    #[test]
    fn vertical_line_is_the_core() {
        let c = CurveSystem::from_json(UNKNOT_CURVES_JSON).unwrap();
        for m in 1..=30 {
            assert_eq!(c.predicted_dim(m).unwrap(), 1);
        }
    }

    #[test]
    fn twist_examples() {
        let c = system(vec![(1, vec![(1, 1)])]);
        assert_eq!(c.dehn_twist(1).components[0].slopes, vec![(1, 2)]);
        assert_eq!(c.dehn_twist(0), c);
        assert_eq!(c.dehn_twist(3).dehn_twist(-3), c);
    }

    #[test]
    fn slope_collision_is_an_error() {
        let c = system(vec![(1, vec![(4, 1)])]);
        assert!(matches!(
            c.predicted_dim(4),
            Err(Error::SlopeCollision { .. })
        ));
        assert!(c.predicted_dim(5).is_ok());
    }

    #[test]
    fn asymptotic_line_matches_prediction_for_large_m() {
        let c = system(vec![(1, vec![(3, 1), (1, 0)]), (2, vec![(-1, 2)])]);
        let (slope, intercept) = c.asymptotic_line();
        for m in 10..=20 {
            assert_eq!(
                c.predicted_dim(m).unwrap() as i64,
                slope * i64::from(m) - intercept,
                "m={m}"
            );
        }
    }

    #[test]
    fn mazur_fitted_system_predicts_measured_dimensions() {
        let c = CurveSystem::from_json(MAZUR_CURVES_JSON).unwrap();
        assert!(c.fitted);
        for m in 1..=30 {
            assert_eq!(c.predicted_dim(m).unwrap(), 8 * u64::from(m) - 1);
        }
        assert_eq!(c.asymptotic_line(), (8, 1));
    }

    #[test]
    fn fit_examples() {
        assert_eq!(
            fit_curve_from_dims(&[(20, 159), (21, 167)]).unwrap(),
            (8, 1)
        );
        assert_eq!(fit_curve_from_dims(&[(5, 1), (6, 1)]).unwrap(), (0, -1));
        assert_eq!(fit_curve_from_dims(&[(3, 7), (4, 12)]).unwrap(), (5, 8));
        assert!(fit_curve_from_dims(&[(1, 1), (2, 4), (3, 9)]).is_err());
        assert!(fit_curve_from_dims(&[(1, 1)]).is_err());
    }

    /// Intersection number of two primitive directions by determinant; the
    /// test-local generalization of `predicted_dim` to an arbitrary line.
    fn intersections_with_line(c: &CurveSystem, lp: i64, lq: i64) -> i64 {
        c.components
            .iter()
            .map(|comp| {
                comp.slopes
                    .iter()
                    .map(|&(p, q)| i64::from(comp.k) * (p * lq - q * lp).abs())
                    .sum::<i64>()
            })
            .sum()
    }

    #[test]
    fn twisting_preserves_intersections_with_the_twisted_line() {
        // The twist is a shear, so pairing both sides with it preserves all
        // intersection determinants; with the fixed surgery line the twisted
        // prediction generally differs, which is why the oracle always pairs
        // an untwisted system against the m-line.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let comps: Vec<(u32, Vec<(i64, i64)>)> = (0..rng.gen_range(1..4))
                .map(|_| {
                    let k = rng.gen_range(1..4);
                    let slopes = (0..rng.gen_range(1..4))
                        .map(|_| loop {
                            let p = rng.gen_range(-6i64..=6);
                            let q = rng.gen_range(0i64..=6);
                            if q == 0 {
                                break (if p >= 0 { 1 } else { -1 }, 0);
                            }
                            if gcd(p.unsigned_abs(), q as u64) == 1 {
                                break (p, q);
                            }
                        })
                        .collect();
                    (k, slopes)
                })
                .collect();
            let c = system(comps);
            let n = rng.gen_range(-10i64..=10);
            let m = rng.gen_range(1i64..=10);
            let twisted = c.dehn_twist(n);
            // Surgery line (p, q) = (m, 1) twists to (m, 1 + n*m).
            assert_eq!(
                intersections_with_line(&twisted, m, 1 + n * m),
                intersections_with_line(&c, m, 1),
            );
        }
    }
}
