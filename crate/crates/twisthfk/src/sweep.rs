//! Parameter sweeps over the twist count: per-m invariants, exact affine
//! tail fits, stabilization verdicts, and the empirically derived norm and
//! shift invariants.

use crate::box_tensor::build_bigraded_pair;
use crate::error::{Error, Result};
use crate::grading::DoubleCosetContext;
use crate::invariants::{
    alexander_polynomial, delta_range, hfk_table, jump_sequence, tau, thickness,
};
use crate::type_a::TypeAStructure;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// An exact rational number; denominators stay positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.is_integral().then_some(self.num)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// An exact affine law value = slope*m + intercept, with the twist count at
/// which the fitted tail starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFit {
    pub slope: Rational,
    pub intercept: Rational,
    pub tail_start: u32,
}

impl LinearFit {
    pub fn eval(&self, m: u32) -> Rational {
        let mi = i64::from(m);
        Rational::new(
            self.slope.num * mi * self.intercept.den + self.intercept.num * self.slope.den,
            self.slope.den * self.intercept.den,
        )
    }
}

/// The line exactly interpolating the last `window` points, if one exists.
pub fn fit_linear_tail(series: &[(u32, i64)], window: usize) -> Option<LinearFit> {
    assert!(window >= 3, "tail window must be at least 3");
    if series.len() < window {
        return None;
    }
    let tail = &series[series.len() - window..];
    let (m0, v0) = tail[0];
    let (m1, v1) = tail[1];
    if m1 == m0 {
        return None;
    }
    let slope = Rational::new(v1 - v0, i64::from(m1) - i64::from(m0));
    let intercept = Rational::new(v0 * slope.den - slope.num * i64::from(m0), slope.den);
    let fit = LinearFit {
        slope,
        intercept,
        tail_start: m0,
    };
    for &(m, v) in tail {
        if fit.eval(m) != Rational::integer(v) {
            return None;
        }
    }
    Some(fit)
}

/// Verdict of one stabilization check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// Not enough data to attempt the check.
    Skipped(String),
}

impl Verdict {
    pub fn failed(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

/// Invariants of a single twist count.
#[derive(Clone, Debug, Serialize)]
pub struct PerTwist {
    pub m: u32,
    pub total_dim: u64,
    pub genus: i64,
    pub tau: i64,
    pub thickness: i64,
    pub alex_degree: i64,
    pub delta_min: i64,
    pub delta_max: i64,
    /// exponent -> coefficient of the Alexander polynomial.
    pub alexander: BTreeMap<i64, i64>,
    /// index -> nonzero jump value.
    pub jumps: BTreeMap<i64, i64>,
    /// extremal_groups[j]: bigraded dims of the column at -genus + j.
    pub extremal_groups: Vec<Vec<(i64, usize)>>,
}

/// Quantities derived from the sweep as a whole.
#[derive(Clone, Debug, Serialize)]
pub struct Derived {
    /// Alexander component of the normalized periodic generator.
    pub omega: i64,
    pub lk: i64,
    /// |lk|: the winding number used for slope quantization.
    pub wind: i64,
    pub x_norm: Option<i64>,
    pub f_k: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub m_from: u32,
    pub m_to: u32,
    pub k: usize,
    pub tail_window: usize,
    pub per_m: Vec<PerTwist>,
    pub fits: BTreeMap<String, Option<LinearFit>>,
    pub derived: Derived,
    pub verdicts: Vec<(String, Verdict)>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        !self.verdicts.iter().any(|(_, v)| v.failed())
    }

    /// Deterministic TSV rows under the frontend header.
    pub fn tsv(&self) -> String {
        let mut out =
            String::from("m\ttotal_dim\tgenus\ttau\tthickness\talex_degree\tdelta_span\n");
        for row in &self.per_m {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                row.m,
                row.total_dim,
                row.genus,
                row.tau,
                row.thickness,
                row.alex_degree,
                row.delta_max - row.delta_min
            ));
        }
        out
    }
}

/// Computes the invariants of one twist count.
pub fn compute_one(pattern: &TypeAStructure, m: u32, k: usize) -> Result<PerTwist> {
    let (knot, z) = build_bigraded_pair(pattern, m)?;
    let table = hfk_table(&knot)?;
    let poly = alexander_polynomial(&table)?;
    let ctx = DoubleCosetContext::new(pattern.periodic_gen, m)?;
    let (delta_min, delta_max) = delta_range(&table);
    let genus = table.genus();
    let extremal_groups = (0..k)
        .map(|j| table.column(-genus + j as i64).into_iter().collect())
        .collect();
    let jumps = jump_sequence(&poly, ctx.omega());
    Ok(PerTwist {
        m,
        total_dim: table.total_dim() as u64,
        genus,
        tau: tau(&knot, &z)?,
        thickness: thickness(&table),
        alex_degree: poly.degree(),
        delta_min,
        delta_max,
        alexander: poly.coeffs,
        jumps,
        extremal_groups,
    })
}

/// Sweeps the twist count over [m_from, m_to], in parallel across `jobs`
/// worker threads, and assembles fits and stabilization verdicts.
pub fn sweep(
    pattern: &TypeAStructure,
    m_from: u32,
    m_to: u32,
    k: usize,
    tail_window: usize,
    jobs: usize,
) -> Result<SweepReport> {
    if m_from == 0 || m_from > m_to {
        return Err(Error::Invalid(format!(
            "bad twist range [{m_from}, {m_to}]"
        )));
    }
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let ms: Vec<u32> = (m_from..=m_to).collect();
    let jobs = jobs.clamp(1, ms.len());

    let mut results: Vec<Option<Result<PerTwist>>> = Vec::new();
    results.resize_with(ms.len(), || None);
    std::thread::scope(|scope| {
        let chunk = ms.len().div_ceil(jobs);
        for (ms_chunk, out_chunk) in ms.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (m, slot) in ms_chunk.iter().zip(out_chunk.iter_mut()) {
                    *slot = Some(compute_one(pattern, *m, k));
                }
            });
        }
    });
    let mut per_m = Vec::with_capacity(ms.len());
    for (m, slot) in ms.iter().zip(results) {
        match slot.expect("all slots are filled") {
            Ok(row) => per_m.push(row),
            Err(cause) => {
                return Err(Error::SweepFailure {
                    m: *m,
                    cause: Box::new(cause),
                })
            }
        }
    }

    let ctx = DoubleCosetContext::new(pattern.periodic_gen, m_from)?;
    let omega = ctx.omega();
    let lk = -omega;
    let wind = lk.abs();

    let series = |f: &dyn Fn(&PerTwist) -> i64| -> Vec<(u32, i64)> {
        per_m.iter().map(|row| (row.m, f(row))).collect()
    };
    let series_map: Vec<(&str, Vec<(u32, i64)>)> = vec![
        ("total_dim", series(&|r| r.total_dim as i64)),
        ("genus2", series(&|r| 2 * r.genus)),
        ("tau", series(&|r| r.tau)),
        ("thickness", series(&|r| r.thickness)),
        ("alex_degree", series(&|r| r.alex_degree)),
    ];

    let mut fits: BTreeMap<String, Option<LinearFit>> = BTreeMap::new();
    let mut verdicts: Vec<(String, Verdict)> = Vec::new();
    for (name, data) in &series_map {
        let fit = fit_linear_tail(data, tail_window);
        let verdict = match (&fit, data.len()) {
            (_, len) if len < tail_window + 3 => {
                Verdict::Skipped(format!("need {} points, have {len}", tail_window + 3))
            }
            (None, _) => Verdict::Fail("tail is not affine".into()),
            (Some(f), len) => {
                // Re-verify on the three points preceding the window.
                let extra = &data[len - tail_window - 3..len - tail_window];
                if extra
                    .iter()
                    .all(|&(m, v)| f.eval(m) == Rational::integer(v))
                {
                    Verdict::Pass
                } else {
                    Verdict::Fail("affine tail does not extend three points back".into())
                }
            }
        };
        fits.insert((*name).to_string(), fit);
        verdicts.push((format!("{name} affine on tail"), verdict));
    }

    let (x_norm, f_k, fk_verdict) = match derive_fk_parts(&fits, wind) {
        Ok((x, f)) => (Some(x), Some(f), Verdict::Pass),
        Err(Error::NonAffine(msg)) => (None, None, Verdict::Skipped(msg)),
        Err(e) => (None, None, Verdict::Fail(e.to_string())),
    };
    verdicts.push(("norm and shift derivation".into(), fk_verdict));

    // Alexander-degree slope quantization: slope = (l/2) * wind for an
    // integer l in [0, x_norm].
    let quant = match (&fits["alex_degree"], x_norm) {
        (Some(fit), Some(x)) => {
            let twice = Rational::new(2 * fit.slope.num, fit.slope.den * wind);
            match twice.as_integer() {
                Some(l) if (0..=x).contains(&l) => Verdict::Pass,
                Some(l) => Verdict::Fail(format!("l = {l} outside [0, {x}]")),
                None => Verdict::Fail(format!(
                    "slope {} is not a half-integer multiple",
                    fit.slope
                )),
            }
        }
        _ => Verdict::Skipped("needs the degree fit and the derived norm".into()),
    };
    verdicts.push(("alexander degree slope quantization".into(), quant));

    verdicts.push((
        "jump stabilization".into(),
        jump_verdict(&per_m, tail_window, 3),
    ));
    verdicts.push((
        "extremal group stabilization".into(),
        extremal_verdict(&per_m, tail_window, k, f_k),
    ));

    Ok(SweepReport {
        m_from,
        m_to,
        k,
        tail_window,
        per_m,
        fits,
        derived: Derived {
            omega,
            lk,
            wind,
            x_norm,
            f_k,
        },
        verdicts,
    })
}

/// x([D]) and F_K from the genus slope: x = slope(2g)/wind must divide
/// exactly; F_K = ((wind - x + 1)(wind - x - 1))/4 must be an integer.
pub fn derive_fk(report: &SweepReport) -> Result<(i64, i64)> {
    derive_fk_parts(&report.fits, report.derived.wind)
}

fn derive_fk_parts(fits: &BTreeMap<String, Option<LinearFit>>, wind: i64) -> Result<(i64, i64)> {
    let fit = fits
        .get("genus2")
        .and_then(|f| f.as_ref())
        .ok_or_else(|| Error::NonAffine("genus series has no affine tail".into()))?;
    let x = Rational::new(fit.slope.num, fit.slope.den * wind)
        .as_integer()
        .ok_or_else(|| Error::Invalid(format!("2g slope {} not divisible by {wind}", fit.slope)))?;
    let product = (wind - x + 1) * (wind - x - 1);
    if product % 4 != 0 {
        return Err(Error::Invalid(format!(
            "shift product {product} is not divisible by 4"
        )));
    }
    Ok((x, product / 4))
}

fn jump_verdict(per_m: &[PerTwist], tail_window: usize, bottom: usize) -> Verdict {
    if per_m.len() < tail_window {
        return Verdict::Skipped(format!("need {tail_window} points",));
    }
    let tail = &per_m[per_m.len() - tail_window..];
    let signature = |row: &PerTwist| -> (Vec<i64>, usize) {
        let values: Vec<i64> = row.jumps.values().copied().take(bottom).collect();
        (values, row.jumps.len())
    };
    let first = signature(&tail[0]);
    for row in &tail[1..] {
        let sig = signature(row);
        if sig != first {
            return Verdict::Fail(format!(
                "jump signature changed between m={} and m={}",
                tail[0].m, row.m
            ));
        }
    }
    Verdict::Pass
}

fn extremal_verdict(per_m: &[PerTwist], tail_window: usize, k: usize, f_k: Option<i64>) -> Verdict {
    let Some(shift) = f_k else {
        return Verdict::Skipped("needs the derived shift".into());
    };
    if per_m.len() < tail_window {
        return Verdict::Skipped(format!("need {tail_window} points"));
    }
    let tail = &per_m[per_m.len() - tail_window..];
    for pair in tail.windows(2) {
        for j in 0..k {
            let at_m: &Vec<(i64, usize)> = &pair[0].extremal_groups[j];
            let at_next: &Vec<(i64, usize)> = &pair[1].extremal_groups[j];
            // The group at m equals the group at m+1 with every Maslov
            // grading decreased by F_K.
            let shifted: Vec<(i64, usize)> = at_next.iter().map(|&(h, d)| (h - shift, d)).collect();
            if *at_m != shifted {
                return Verdict::Fail(format!(
                    "column -g+{j} differs between m={} and m={}",
                    pair[0].m, pair[1].m
                ));
            }
        }
    }
    Verdict::Pass
}
