//! Minimal-codeword analysis and Griesmer-bound reporting.

use std::collections::{HashMap, HashSet};

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::codes::{CodeSpec, WeightDistribution};
use crate::defining_sets::SetKind;
use crate::dual::mod_inverse;
use crate::error::{Error, Result};
use crate::gf::FieldElement;

/// Default cap on `p^{2m}` for the pairwise support scan.
pub const DEFAULT_MINIMALITY_BUDGET: u128 = 729;

fn ratio_str<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// `w_min / w_max` against the threshold `(p - 1)/p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbRatioReport {
    #[serde(serialize_with = "ratio_str")]
    pub ratio: Ratio<u64>,
    #[serde(serialize_with = "ratio_str")]
    pub threshold: Ratio<u64>,
    pub pass: bool,
    pub w_min: u64,
    pub w_max: u64,
}

/// Returns `None` when the code has no nonzero weight.
pub fn ab_ratio_check(wd: &WeightDistribution) -> Option<AbRatioReport> {
    let w_min = wd.min_distance()?;
    let w_max = wd.max_weight()?;
    let p = wd.p as u64;
    let ratio = Ratio::new(w_min, w_max);
    let threshold = Ratio::new(p - 1, p);
    Some(AbRatioReport {
        ratio,
        threshold,
        pass: ratio > threshold,
        w_min,
        w_max,
    })
}

/// `w_min / w_max` written directly in terms of the tabulated weights.
pub fn weight_ratio_formula(kind: SetKind, p: u64, m: u32) -> Result<Ratio<u64>> {
    if m < 2 {
        return Err(Error::DegreeTooSmall(m));
    }
    let pm1 = p.pow(m - 1);
    let p2m2 = p.pow(2 * m - 2);
    Ok(match kind {
        SetKind::D0 => Ratio::new((p - 1) * (pm1 - 1) * pm1, (p - 1) * p2m2),
        SetKind::DStar => Ratio::new((p - 1) * (pm1 - 2) * pm1, (p - 1) * (pm1 - 1) * pm1),
        SetKind::DLambda(_) => Ratio::new((p - 1) * p2m2 - 2 * pm1, (p - 1) * p2m2),
        other => return Err(Error::NoClosedForm(format!("ratio formula for {other}"))),
    })
}

/// Simplified form of the ratio: `1 - 1/p^{m-1}` for `D_0`,
/// `1 - 1/(p^{m-1} - 1)` for `D*`, `1 - 2/((p-1)p^{m-1})` for `D_λ`.
pub fn simplified_ratio(kind: SetKind, p: u64, m: u32) -> Result<Ratio<u64>> {
    if m < 2 {
        return Err(Error::DegreeTooSmall(m));
    }
    let one = Ratio::from_integer(1u64);
    let pm1 = p.pow(m - 1);
    Ok(match kind {
        SetKind::D0 => one - Ratio::new(1, pm1),
        SetKind::DStar => one - Ratio::new(1, pm1 - 1),
        SetKind::DLambda(_) => one - Ratio::new(2, (p - 1) * pm1),
        other => return Err(Error::NoClosedForm(format!("ratio formula for {other}"))),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub all_minimal: bool,
    /// Distinct nonzero codewords.
    pub codewords: u64,
    /// Classes of codewords up to nonzero scalar multiples.
    pub projective_classes: u64,
    /// Codewords covering a non-proportional codeword.
    pub non_minimal_scalar_identified: u64,
    /// Codewords covering any other nonzero codeword, multiples included.
    pub non_minimal_raw: u64,
    pub scanned: bool,
}

fn support(codeword: &[u32]) -> Vec<u64> {
    let mut bits = vec![0u64; codeword.len().div_ceil(64)];
    for (i, &s) in codeword.iter().enumerate() {
        if s != 0 {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Pairwise support-inclusion scan over all nonzero codewords.
///
/// A codeword is minimal when the only nonzero codewords whose support it
/// contains are its own scalar multiples.
pub fn all_minimal_bruteforce(spec: &CodeSpec<'_>, budget: u128) -> Result<MinimalityReport> {
    let f = spec.field();
    let q = f.order();
    let required = q as u128 * q as u128;
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let p = f.p();
    let mut distinct: HashSet<Vec<u32>> = HashSet::new();
    for a in 0..q {
        for b in 0..q {
            let c = spec.codeword(FieldElement(a), FieldElement(b));
            if c.iter().any(|&s| s != 0) {
                distinct.insert(c);
            }
        }
    }
    let mut classes: HashMap<Vec<u32>, (Vec<u64>, u64)> = HashMap::new();
    for c in &distinct {
        let lead = *c.iter().find(|&&s| s != 0).unwrap();
        let inv = mod_inverse(lead, p) as u64;
        let normalized: Vec<u32> = c
            .iter()
            .map(|&s| (s as u64 * inv % p as u64) as u32)
            .collect();
        classes
            .entry(normalized)
            .or_insert_with(|| (support(c), 0))
            .1 += 1;
    }
    let classes: Vec<(Vec<u64>, u64)> = classes.into_values().collect();
    let mut scalar_identified = 0u64;
    let mut raw = 0u64;
    for (i, (supp, members)) in classes.iter().enumerate() {
        let covered = classes
            .iter()
            .enumerate()
            .any(|(j, (other, _))| i != j && subset(other, supp));
        if covered {
            scalar_identified += members;
        }
        if covered || *members > 1 {
            raw += members;
        }
    }
    Ok(MinimalityReport {
        all_minimal: scalar_identified == 0,
        codewords: distinct.len() as u64,
        projective_classes: classes.len() as u64,
        non_minimal_scalar_identified: scalar_identified,
        non_minimal_raw: raw,
        scanned: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GriesmerReport {
    pub bound: u64,
    pub slack: i64,
}

/// `Σ_{i<k} ⌈d / p^i⌉` and the gap `n - bound`.
pub fn griesmer_bound(n: u64, k: u32, d: u64, p: u64) -> GriesmerReport {
    let bound: u64 = (0..k).map(|i| d.div_ceil(p.pow(i))).sum();
    GriesmerReport {
        bound,
        slack: n as i64 - bound as i64,
    }
}
