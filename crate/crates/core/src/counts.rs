//! Point counts behind the weight computations.
//!
//! `N_{λ,λ₁}(a,b)` counts pairs `(x, y) ∈ F*×F` with `Tr(x^{d+1} y) = λ` and
//! `Tr(a x^d y + b x) = λ₁`; the starred variant additionally requires
//! `y ≠ 0` (and `λ = 0`). Each count has a brute-force scan and a closed
//! form; the weight of `c(a, b)` on `D_λ` is `n - N_{λ,0}(a, b)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{weight_distribution, CompleteWeightEnumerator, WeightDistribution};
use crate::defining_sets::{d_lambda_size, d_star_size, SetKind};
use crate::error::{Error, Result};
use crate::gf::{legendre, ExtensionField, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountQuery {
    pub lambda: u32,
    pub lambda1: u32,
    pub a: FieldElement,
    pub b: FieldElement,
    /// Restrict to `y ≠ 0`.
    pub star: bool,
}

/// Exact count by scanning every `(x, y)` with `x ≠ 0`.
pub fn count_bruteforce(f: &ExtensionField, d: u64, q: &CountQuery) -> u64 {
    let p = f.p();
    let y_start = u32::from(q.star);
    let mut count = 0u64;
    for x in f.nonzero_elements() {
        let xd = f.pow(x, d);
        let xd1 = f.mul(xd, x);
        let a_xd = f.mul(q.a, xd);
        let tr_bx = f.trace(f.mul(q.b, x));
        for y in (y_start..f.order()).map(FieldElement) {
            if f.trace(f.mul(xd1, y)) == q.lambda
                && (f.trace(f.mul(a_xd, y)) + tr_bx) % p == q.lambda1
            {
                count += 1;
            }
        }
    }
    count
}

/// The features of `(a, b)` the closed forms depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CaseData {
    pub a_zero: bool,
    pub b_zero: bool,
    pub tr_ab: u32,
}

impl CaseData {
    pub fn of(f: &ExtensionField, a: FieldElement, b: FieldElement) -> Self {
        CaseData {
            a_zero: a.is_zero(),
            b_zero: b.is_zero(),
            tr_ab: f.trace(f.mul(a, b)),
        }
    }
}

/// Closed-form `#N_{λ,λ₁}(a,b)` (or `#N*_{λ₁}(a,b)` when `star`).
///
/// The branches follow the case tables of the counting lemmas in order;
/// combinations the lemmas do not cover are errors, never zero.
pub fn count_closed_form(
    p: u32,
    m: u32,
    lambda: u32,
    lambda1: u32,
    star: bool,
    case: CaseData,
) -> Result<u64> {
    let CaseData {
        a_zero,
        b_zero,
        tr_ab,
    } = case;
    if a_zero && b_zero {
        return Err(Error::UndefinedCase("(a, b) = (0, 0)".into()));
    }
    if star && lambda != 0 {
        return Err(Error::UndefinedCase("starred count with lambda != 0".into()));
    }
    let pi = p as i64;
    let p2m2 = pi.pow(2 * m - 2);
    let pm1 = pi.pow(m - 1);
    let tr = tr_ab as i64;
    let (l, l1) = (lambda as i64, lambda1 as i64);
    let only_b = a_zero && !b_zero;
    let a_tr0 = !a_zero && tr == 0;
    let a_trn = !a_zero && tr != 0;

    let value = match (star, lambda == 0, lambda1 == 0) {
        (false, true, true) => {
            if only_b || tr != 0 {
                Some(p2m2 - pm1)
            } else if a_tr0 {
                Some(p2m2 + (pi - 2) * pm1)
            } else {
                None
            }
        }
        (false, true, false) => {
            if only_b || a_trn {
                Some(p2m2)
            } else if a_tr0 {
                Some(p2m2 - pm1)
            } else {
                None
            }
        }
        (false, false, true) => {
            if only_b || a_tr0 {
                Some(p2m2 - pm1)
            } else if tr != 0 {
                Some(p2m2 + legendre(-l * tr, p) as i64 * pm1)
            } else {
                None
            }
        }
        (false, false, false) => {
            if only_b || a_tr0 {
                Some(p2m2)
            } else if a_trn {
                Some(p2m2 + legendre(l1 * l1 - 4 * l * tr, p) as i64 * pm1)
            } else {
                None
            }
        }
        (true, _, true) => {
            if only_b || tr != 0 || (!a_zero && b_zero) {
                Some(p2m2 - 2 * pm1 + 1)
            } else if !a_zero && !b_zero && tr == 0 {
                Some(p2m2 + (pi - 3) * pm1 + 1)
            } else {
                None
            }
        }
        (true, _, false) => {
            if only_b || a_trn || (!a_zero && b_zero) {
                Some(p2m2 - pm1)
            } else if !a_zero && !b_zero && tr == 0 {
                Some(p2m2 - 2 * pm1)
            } else {
                None
            }
        }
    };
    value
        .map(|v| v as u64)
        .ok_or_else(|| Error::UndefinedCase(format!("{case:?} lambda={lambda} lambda1={lambda1}")))
}

/// `#A(t)` by scan and by the closed form `p^{m-1}(p^m - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountA {
    pub bruteforce: u64,
    pub closed_form: u64,
}

impl CountA {
    pub fn agrees(&self) -> bool {
        self.bruteforce == self.closed_form
    }
}

pub fn count_a(f: &ExtensionField, t: u32) -> CountA {
    let bruteforce = f
        .nonzero_elements()
        .map(|a| f.elements().filter(|&b| f.trace(f.mul(a, b)) == t).count() as u64)
        .sum();
    CountA {
        bruteforce,
        closed_form: count_a_closed_form(f.p(), f.m()),
    }
}

pub fn count_a_closed_form(p: u32, m: u32) -> u64 {
    let p = p as u64;
    p.pow(m - 1) * (p.pow(m) - 1)
}

/// Classes of nonzero `(a, b)` with the number of pairs in each.
pub fn parameter_classes(p: u32, m: u32) -> Vec<(CaseData, u64)> {
    let pm = (p as u64).pow(m);
    let a_t = count_a_closed_form(p, m);
    let mut out = vec![
        (
            CaseData {
                a_zero: true,
                b_zero: false,
                tr_ab: 0,
            },
            pm - 1,
        ),
        (
            CaseData {
                a_zero: false,
                b_zero: true,
                tr_ab: 0,
            },
            pm - 1,
        ),
        (
            CaseData {
                a_zero: false,
                b_zero: false,
                tr_ab: 0,
            },
            a_t - (pm - 1),
        ),
    ];
    out.extend((1..p).map(|t| {
        (
            CaseData {
                a_zero: false,
                b_zero: false,
                tr_ab: t,
            },
            a_t,
        )
    }));
    out
}

/// Complete weight enumerator assembled from the closed-form counts: the
/// composition of `c(a, b)` is `(N_{λ,0}, …, N_{λ,p-1})` and each class of
/// `(a, b)` contributes its size.
pub fn reconstruct_cwe(kind: SetKind, p: u32, m: u32) -> Result<CompleteWeightEnumerator> {
    if m < 2 {
        return Err(Error::DegreeTooSmall(m));
    }
    let (lambda, star, n) = match kind {
        SetKind::D0 => (0, false, d_lambda_size(p as u64, m)),
        SetKind::DLambda(l) => (l, false, d_lambda_size(p as u64, m)),
        SetKind::DStar => (0, true, d_star_size(p as u64, m)),
        other => return Err(Error::NoClosedForm(format!("counting route for {other}"))),
    };
    let mut terms: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut zero = vec![0u64; p as usize];
    zero[0] = n;
    terms.insert(zero, 1);
    for (case, size) in parameter_classes(p, m) {
        let t = (0..p)
            .map(|l1| count_closed_form(p, m, lambda, l1, star, case))
            .collect::<Result<Vec<u64>>>()?;
        *terms.entry(t).or_insert(0) += size;
    }
    Ok(CompleteWeightEnumerator {
        p,
        n,
        param_dim: 2 * m,
        terms,
    })
}

pub fn reconstruct_wd(kind: SetKind, p: u32, m: u32) -> Result<WeightDistribution> {
    reconstruct_cwe(kind, p, m).map(|c| weight_distribution(&c))
}

/// `count` seeded uniform samples of `(a, b) ≠ (0, 0)`.
pub fn sample_pairs(f: &ExtensionField, count: usize, seed: u64) -> Vec<(FieldElement, FieldElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = f.order();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = FieldElement(rng.gen_range(0..q));
        let b = FieldElement(rng.gen_range(0..q));
        if !(a.is_zero() && b.is_zero()) {
            out.push((a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::predict_wd;
    use crate::gf::build_field;

    #[test]
    fn bruteforce_examples_f9() {
        let f = build_field(3, 2).unwrap();
        let q = CountQuery {
            lambda: 0,
            lambda1: 0,
            a: FieldElement::ZERO,
            b: FieldElement::ONE,
            star: false,
        };
        assert_eq!(count_bruteforce(&f, 2, &q), 6);
        let case = CaseData::of(&f, q.a, q.b);
        assert_eq!(count_closed_form(3, 2, 0, 0, false, case).unwrap(), 6);
    }

    #[test]
    fn closed_form_examples() {
        let a_tr0 = CaseData {
            a_zero: false,
            b_zero: false,
            tr_ab: 0,
        };
        assert_eq!(count_closed_form(3, 2, 0, 0, false, a_tr0).unwrap(), 12);
        let a_only = CaseData {
            a_zero: false,
            b_zero: true,
            tr_ab: 0,
        };
        assert_eq!(count_closed_form(3, 2, 0, 0, true, a_only).unwrap(), 4);
        // λ ≠ 0, λ₁ ≠ 0, Tr(ab) ≠ 0 at p = 5: η_1(1 - 4·1·1) = η_1(2) = -1.
        let trn = CaseData {
            a_zero: false,
            b_zero: false,
            tr_ab: 1,
        };
        assert_eq!(count_closed_form(5, 2, 1, 1, false, trn).unwrap(), 25 - 5);
    }

    #[test]
    fn undefined_cases_are_errors() {
        let zero = CaseData {
            a_zero: true,
            b_zero: true,
            tr_ab: 0,
        };
        assert!(count_closed_form(3, 2, 0, 0, false, zero).is_err());
        let ok = CaseData {
            a_zero: true,
            b_zero: false,
            tr_ab: 0,
        };
        assert!(count_closed_form(3, 2, 1, 0, true, ok).is_err());
    }

    #[test]
    fn slices_partition_the_set() {
        let f = build_field(3, 2).unwrap();
        for (a, b) in sample_pairs(&f, 20, 7) {
            for lambda in 0..3 {
                let total: u64 = (0..3)
                    .map(|l1| {
                        count_bruteforce(
                            &f,
                            2,
                            &CountQuery {
                                lambda,
                                lambda1: l1,
                                a,
                                b,
                                star: false,
                            },
                        )
                    })
                    .sum();
                assert_eq!(total, d_lambda_size(3, 2));
            }
        }
    }

    #[test]
    fn count_a_examples() {
        let f9 = build_field(3, 2).unwrap();
        let f25 = build_field(5, 2).unwrap();
        for t in 0..3 {
            let c = count_a(&f9, t);
            assert_eq!(c.bruteforce, 24);
            assert!(c.agrees());
        }
        let total: u64 = (0..3).map(|t| count_a(&f9, t).bruteforce).sum();
        assert_eq!(total, 9 * 8);
        for t in 0..5 {
            assert_eq!(count_a(&f25, t).bruteforce, 120);
        }
    }

    #[test]
    fn counting_route_reproduces_tables() {
        for (p, m) in [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3)] {
            assert_eq!(
                reconstruct_wd(SetKind::D0, p, m).unwrap(),
                predict_wd(SetKind::D0, p, m).unwrap()
            );
            assert_eq!(
                reconstruct_wd(SetKind::DStar, p, m).unwrap(),
                predict_wd(SetKind::DStar, p, m).unwrap()
            );
            for l in 1..p {
                assert_eq!(
                    reconstruct_wd(SetKind::DLambda(l), p, m).unwrap(),
                    predict_wd(SetKind::DLambda(l), p, m).unwrap()
                );
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let f = build_field(3, 3).unwrap();
        let a = sample_pairs(&f, 200, 42);
        assert_eq!(a, sample_pairs(&f, 200, 42));
        assert_eq!(a.len(), 200);
        assert!(a.iter().all(|(x, y)| !(x.is_zero() && y.is_zero())));
    }
}
