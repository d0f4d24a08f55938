//! Trace codes `c(a, b) = (Tr(a y x^d + b x))_{(x, y) ∈ D}` and their
//! complete weight enumerators.
//!
//! Enumeration runs over all `p^{2m}` parameter pairs `(a, b)`. Because the
//! trace is additive, each symbol is `Tr(a·u_j) + Tr(b·x_j) mod p` with
//! `u_j = y_j x_j^d`, so two per-parameter lookup tables reduce the inner
//! loop to one addition per coordinate.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defining_sets::{DefiningSet, SetKind};
use crate::error::{Error, Result};
use crate::gf::{legendre, ExtensionField, FieldElement};

/// Default cap on `p^{2m}·n` symbol evaluations.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 33;

/// A defining set together with the per-coordinate data the encoder needs.
#[derive(Debug, Clone)]
pub struct CodeSpec<'f> {
    set: DefiningSet<'f>,
    /// `(y x^d, x)` per coordinate.
    coords: Vec<(FieldElement, FieldElement)>,
}

impl<'f> CodeSpec<'f> {
    pub fn new(set: DefiningSet<'f>) -> Self {
        let f = set.field();
        let d = set.d();
        let coords = set
            .pairs()
            .iter()
            .map(|&(x, y)| (f.mul(y, f.pow(x, d)), x))
            .collect();
        CodeSpec { set, coords }
    }

    pub fn set(&self) -> &DefiningSet<'f> {
        &self.set
    }

    pub fn field(&self) -> &'f ExtensionField {
        self.set.field()
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// Dimension bound `2m`, the number of F_p coordinates of `(a, b)`.
    pub fn k_bound(&self) -> u32 {
        2 * self.field().m()
    }

    pub fn coordinate_functionals(&self) -> &[(FieldElement, FieldElement)] {
        &self.coords
    }

    pub fn codeword(&self, a: FieldElement, b: FieldElement) -> Vec<u32> {
        let f = self.field();
        let p = f.p();
        self.coords
            .iter()
            .map(|&(u, x)| (f.trace(f.mul(a, u)) + f.trace(f.mul(b, x))) % p)
            .collect()
    }

    /// `p^{2m}·n`, the number of symbol evaluations a full enumeration costs.
    pub fn enumeration_cost(&self) -> u128 {
        let q = self.field().order() as u128;
        q * q * self.n() as u128
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        let required = self.enumeration_cost();
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(())
    }

    /// Row-major `q × n` tables of `Tr(a·u_j)` and `Tr(b·x_j)`.
    fn symbol_tables(&self) -> (Vec<u32>, Vec<u32>) {
        let f = self.field();
        let n = self.n();
        let q = f.order() as usize;
        let mut ta = vec![0u32; q * n];
        let mut tb = vec![0u32; q * n];
        ta.par_chunks_mut(n.max(1))
            .zip(tb.par_chunks_mut(n.max(1)))
            .enumerate()
            .for_each(|(e, (ra, rb))| {
                let e = FieldElement(e as u32);
                for (j, &(u, x)) in self.coords.iter().enumerate() {
                    ra[j] = f.trace(f.mul(e, u));
                    rb[j] = f.trace(f.mul(e, x));
                }
            });
        (ta, tb)
    }

    /// Visits every parameter pair in parallel, handing the visitor the
    /// symbol histogram of `c(a, b)`.
    fn fold_compositions<T, I, V, R>(&self, init: I, visit: V, reduce: R) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        V: Fn(&mut T, u32, u32, &[u32]) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let p = self.field().p();
        let q = self.field().order();
        let n = self.n();
        let (ta, tb) = self.symbol_tables();
        (0..q)
            .into_par_iter()
            .fold(
                || (init(), vec![0u32; p as usize]),
                |(mut acc, mut counts), a| {
                    let ra = &ta[a as usize * n..(a as usize + 1) * n];
                    for b in 0..q {
                        let rb = &tb[b as usize * n..(b as usize + 1) * n];
                        counts.iter_mut().for_each(|c| *c = 0);
                        for (&s, &t) in ra.iter().zip(rb) {
                            let v = s + t;
                            counts[(if v >= p { v - p } else { v }) as usize] += 1;
                        }
                        visit(&mut acc, a, b, &counts);
                    }
                    (acc, counts)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(&init, reduce)
    }
}

/// Histogram from symbol compositions `(t_0, …, t_{p-1})` to the number of
/// parameter pairs `(a, b)` producing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteWeightEnumerator {
    pub p: u32,
    pub n: u64,
    /// `2m`: the parameter space has `p^{param_dim}` elements.
    pub param_dim: u32,
    pub terms: BTreeMap<Vec<u64>, u64>,
}

#[derive(Serialize, Deserialize)]
struct CompositionTerm {
    t: Vec<u64>,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct CweJson {
    p: u32,
    n: u64,
    param_dim: u32,
    compositions: Vec<CompositionTerm>,
}

impl Serialize for CompleteWeightEnumerator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CweJson {
            p: self.p,
            n: self.n,
            param_dim: self.param_dim,
            compositions: self
                .terms
                .iter()
                .rev()
                .map(|(t, &count)| CompositionTerm { t: t.clone(), count })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompleteWeightEnumerator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CweJson::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for term in raw.compositions {
            *terms.entry(term.t).or_insert(0) += term.count;
        }
        Ok(CompleteWeightEnumerator {
            p: raw.p,
            n: raw.n,
            param_dim: raw.param_dim,
            terms,
        })
    }
}

impl CompleteWeightEnumerator {
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Composition of the zero codeword, `(n, 0, …, 0)`.
    pub fn zero_composition(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.p as usize];
        t[0] = self.n;
        t
    }

    /// Number of parameter pairs mapping to the zero codeword.
    pub fn kernel_size(&self) -> u64 {
        self.terms.get(&self.zero_composition()).copied().unwrap_or(0)
    }

    /// Every codeword has the same count for all nonzero symbols.
    pub fn nonzero_symbols_balanced(&self) -> bool {
        self.terms.keys().all(|t| t[1..].windows(2).all(|w| w[0] == w[1]))
    }
}

/// Weight enumerator `1 + A_1 z + … + A_n z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub p: u32,
    pub n: u64,
    pub k: u32,
    #[serde(rename = "weights")]
    pub counts: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.counts
            .iter()
            .filter(|&(&w, &c)| w > 0 && c > 0)
            .map(|(&w, _)| w)
            .collect()
    }

    pub fn min_distance(&self) -> Option<u64> {
        self.nonzero_weights().first().copied()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.nonzero_weights().last().copied()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Renders as `1 +24z^{12}+56z^{18}`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}", self.counts.get(&0).copied().unwrap_or(0));
        for (i, (w, c)) in self.counts.iter().filter(|(&w, _)| w > 0).enumerate() {
            let sep = if i == 0 { " +" } else { "+" };
            let _ = write!(out, "{sep}{c}z^{{{w}}}");
        }
        out
    }
}

/// Exact composition histogram over all `p^{2m}` pairs `(a, b)`.
pub fn complete_weight_enumerator(spec: &CodeSpec<'_>) -> Result<CompleteWeightEnumerator> {
    complete_weight_enumerator_with_budget(spec, DEFAULT_ENUMERATION_BUDGET)
}

pub fn complete_weight_enumerator_with_budget(
    spec: &CodeSpec<'_>,
    budget: u128,
) -> Result<CompleteWeightEnumerator> {
    spec.check_budget(budget)?;
    let hist: HashMap<Vec<u32>, u64> = spec.fold_compositions(
        HashMap::new,
        |acc, _, _, counts| {
            if let Some(c) = acc.get_mut(counts) {
                *c += 1;
            } else {
                acc.insert(counts.to_vec(), 1);
            }
        },
        |mut left, right| {
            for (k, v) in right {
                *left.entry(k).or_insert(0) += v;
            }
            left
        },
    );
    Ok(CompleteWeightEnumerator {
        p: spec.field().p(),
        n: spec.n() as u64,
        param_dim: spec.k_bound(),
        terms: hist
            .into_iter()
            .map(|(t, c)| (t.into_iter().map(u64::from).collect(), c))
            .collect(),
    })
}

/// Hamming weight of `c(a, b)` for every pair, indexed by `a·p^m + b`.
pub fn codeword_weights(spec: &CodeSpec<'_>, budget: u128) -> Result<Vec<u32>> {
    spec.check_budget(budget)?;
    let q = spec.field().order() as usize;
    let n = spec.n() as u32;
    let parts: Vec<(u32, u32, u32)> = spec.fold_compositions(
        Vec::new,
        |acc, a, b, counts| acc.push((a, b, n - counts[0])),
        |mut l, r| {
            l.extend(r);
            l
        },
    );
    let mut out = vec![0u32; q * q];
    for (a, b, w) in parts {
        out[a as usize * q + b as usize] = w;
    }
    Ok(out)
}

/// Collapses a composition histogram to Hamming weights, dividing out the
/// kernel of the (linear) parameterization so that `A_0 = 1`.
pub fn weight_distribution(cwe: &CompleteWeightEnumerator) -> WeightDistribution {
    let kernel = cwe.kernel_size().max(1);
    let mut kernel_dim = 0u32;
    let mut rest = kernel;
    while rest > 1 && rest % cwe.p as u64 == 0 {
        rest /= cwe.p as u64;
        kernel_dim += 1;
    }
    let mut counts = BTreeMap::new();
    for (t, &c) in &cwe.terms {
        *counts.entry(cwe.n - t[0]).or_insert(0) += c;
    }
    for c in counts.values_mut() {
        *c /= kernel;
    }
    WeightDistribution {
        p: cwe.p,
        n: cwe.n,
        k: cwe.param_dim - kernel_dim,
        counts,
    }
}

fn pow(p: u64, e: u32) -> u64 {
    p.pow(e)
}

fn closed_form_prereqs(p: u32, m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::DegreeTooSmall(m));
    }
    if p < 3 || p % 2 == 0 || !crate::gf::is_prime(p as u64) {
        return Err(Error::NotOddPrime(p as u64));
    }
    Ok(())
}

fn check_lambda_kind(kind: SetKind, p: u32) -> Result<()> {
    match kind {
        SetKind::DLambda(0) | SetKind::PuncturedDLambda(0) => {
            Err(Error::NoClosedForm("D_lambda with lambda = 0 (use d0)".into()))
        }
        SetKind::DLambda(l) | SetKind::PuncturedDLambda(l) if l >= p => {
            Err(Error::InvalidLambda { lambda: l, p })
        }
        _ => Ok(()),
    }
}

/// Two-weight distribution predicted by the closed-form tables for `kind`.
pub fn predict_wd(kind: SetKind, p: u32, m: u32) -> Result<WeightDistribution> {
    closed_form_prereqs(p, m)?;
    check_lambda_kind(kind, p)?;
    let pp = p as u64;
    let pm = pow(pp, m);
    let pm1 = pow(pp, m - 1);
    let p2m2 = pow(pp, 2 * m - 2);
    let half = (pp - 1) / 2;
    let (n, entries): (u64, [(u64, u64); 2]) = match kind {
        SetKind::D0 => (
            crate::defining_sets::d_lambda_size(pp, m),
            [
                ((pp - 1) * p2m2, (pm - 1) * (pm - pm1 + 1)),
                ((pp - 1) * (pm1 - 1) * pm1, (pm - 1) * pm1),
            ],
        ),
        SetKind::DStar => (
            crate::defining_sets::d_star_size(pp, m),
            [
                ((pp - 1) * (pm1 - 1) * pm1, (pm - 1) * (pm - pm1 + 2)),
                ((pp - 1) * (pm1 - 2) * pm1, (pm - 1) * (pm1 - 1)),
            ],
        ),
        SetKind::DLambda(_) => (
            crate::defining_sets::d_lambda_size(pp, m),
            [
                ((pp - 1) * p2m2, ((pp + 1) / 2 * pm1 + 1) * (pm - 1)),
                ((pm - pm1 - 2) * pm1, half * pm1 * (pm - 1)),
            ],
        ),
        SetKind::PuncturedD0 => (
            crate::defining_sets::d_lambda_size(pp, m) / (pp - 1),
            [
                (p2m2, (pm - pm1 + 1) * (pm - 1)),
                ((pm1 - 1) * pm1, pm1 * (pm - 1)),
            ],
        ),
        SetKind::PuncturedDStar => (
            crate::defining_sets::d_star_size(pp, m) / (pp - 1),
            [
                ((pm1 - 1) * pm1, (pm - pm1 + 2) * (pm - 1)),
                ((pm1 - 2) * pm1, (pm - 1) * (pm1 - 1)),
            ],
        ),
        SetKind::PuncturedDLambda(_) => (
            crate::defining_sets::d_lambda_size(pp, m) / 2,
            [
                (half * p2m2, ((pp + 1) / 2 * pm1 + 1) * (pm - 1)),
                ((pm - pm1 - 2) * pm1 / 2, half * pm1 * (pm - 1)),
            ],
        ),
    };
    let mut counts = BTreeMap::from([(0u64, 1u64)]);
    for (w, c) in entries {
        *counts.entry(w).or_insert(0) += c;
    }
    Ok(WeightDistribution {
        p,
        n,
        k: 2 * m,
        counts,
    })
}

/// Explicit composition histogram of the closed-form complete weight
/// enumerators of `C_{D_0}`, `C_{D*}` and `C_{D_λ}`.
///
/// For `D_λ` each `j ∈ F_p^*` contributes the composition with
/// `t_i = p^{2m-2} + η_1(i² - 4λj) p^{m-1}` and multiplicity
/// `#A(j) = p^{m-1}(p^m - 1)`.
pub fn predict_cwe(kind: SetKind, p: u32, m: u32) -> Result<CompleteWeightEnumerator> {
    closed_form_prereqs(p, m)?;
    check_lambda_kind(kind, p)?;
    let pp = p as u64;
    let pm = pow(pp, m);
    let pm1 = pow(pp, m - 1);
    let p2m2 = pow(pp, 2 * m - 2);
    let uniform = |t0: u64, rest: u64| -> Vec<u64> {
        let mut t = vec![rest; p as usize];
        t[0] = t0;
        t
    };
    let mut terms: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut add = |t: Vec<u64>, c: u64| *terms.entry(t).or_insert(0) += c;
    let n = match kind {
        SetKind::D0 => {
            let n = crate::defining_sets::d_lambda_size(pp, m);
            add(uniform(n, 0), 1);
            add(uniform(p2m2 - pm1, p2m2), (pm - pm1 + 1) * (pm - 1));
            add(uniform(p2m2 + (pp - 2) * pm1, p2m2 - pm1), pm1 * (pm - 1));
            n
        }
        SetKind::DStar => {
            let n = crate::defining_sets::d_star_size(pp, m);
            add(uniform(n, 0), 1);
            add(
                uniform(p2m2 - 2 * pm1 + 1, (pm1 - 1) * pm1),
                (pm - pm1 + 2) * (pm - 1),
            );
            add(
                uniform(p2m2 + (pp - 3) * pm1 + 1, (pm1 - 2) * pm1),
                (pm1 - 1) * (pm - 1),
            );
            n
        }
        SetKind::DLambda(lambda) => {
            let n = crate::defining_sets::d_lambda_size(pp, m);
            add(uniform(n, 0), 1);
            add(uniform(p2m2 - pm1, p2m2), (pm1 + 1) * (pm - 1));
            for j in 1..p as i64 {
                let t: Vec<u64> = (0..p as i64)
                    .map(|i| {
                        let eta = legendre(i * i - 4 * lambda as i64 * j, p);
                        (p2m2 as i64 + eta as i64 * pm1 as i64) as u64
                    })
                    .collect();
                add(t, pm1 * (pm - 1));
            }
            n
        }
        other => {
            return Err(Error::NoClosedForm(format!(
                "complete weight enumerator of {other}"
            )))
        }
    };
    Ok(CompleteWeightEnumerator {
        p,
        n,
        param_dim: 2 * m,
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch<K> {
    pub key: K,
    pub actual: u64,
    pub predicted: u64,
}

/// Exact, key-by-key comparison of two integer histograms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison<K> {
    pub length_matches: bool,
    pub mismatches: Vec<Mismatch<K>>,
}

impl<K> Comparison<K> {
    pub fn is_match(&self) -> bool {
        self.length_matches && self.mismatches.is_empty()
    }
}

fn diff_maps<K: Ord + Clone>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> Vec<Mismatch<K>> {
    let mut keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let actual = a.get(k).copied().unwrap_or(0);
            let predicted = b.get(k).copied().unwrap_or(0);
            (actual != predicted).then(|| Mismatch {
                key: k.clone(),
                actual,
                predicted,
            })
        })
        .collect()
}

pub fn compare_cwe(
    actual: &CompleteWeightEnumerator,
    predicted: &CompleteWeightEnumerator,
) -> Comparison<Vec<u64>> {
    Comparison {
        length_matches: actual.n == predicted.n,
        mismatches: diff_maps(&actual.terms, &predicted.terms),
    }
}

pub fn compare_wd(actual: &WeightDistribution, predicted: &WeightDistribution) -> Comparison<u64> {
    Comparison {
        length_matches: actual.n == predicted.n && actual.k == predicted.k,
        mismatches: diff_maps(&actual.counts, &predicted.counts),
    }
}
