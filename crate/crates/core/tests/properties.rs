use std::collections::HashSet;

use proptest::prelude::*;
use twf_core::applications::griesmer_bound;
use twf_core::codes::{complete_weight_enumerator, weight_distribution, CodeSpec};
use twf_core::defining_sets::{build, SetKind};
use twf_core::gf::{build_field, ExtensionField, FieldElement};

const FIELDS: [(u64, u32); 6] = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)];

fn field(i: usize) -> ExtensionField {
    let (p, m) = FIELDS[i % FIELDS.len()];
    build_field(p, m).unwrap()
}

fn elem(f: &ExtensionField, raw: u32) -> FieldElement {
    FieldElement(raw % f.order())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms(i in 0usize..6, x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let f = field(i);
        let (x, y, z) = (elem(&f, x), elem(&f, y), elem(&f, z));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), FieldElement::ZERO);
        prop_assert_eq!(f.pow(x, f.order() as u64), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn trace_is_linear_over_prime_field(i in 0usize..6, x in any::<u32>(), y in any::<u32>(), c in 0i64..7) {
        let f = field(i);
        let (x, y) = (elem(&f, x), elem(&f, y));
        let p = f.p();
        prop_assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
        let c = f.from_prime(c);
        prop_assert_eq!(f.trace(f.mul(c, x)), (c.0 * f.trace(x)) % p);
        prop_assert_eq!(f.trace(f.pow(x, p as u64)), f.trace(x));
    }

    #[test]
    fn codewords_are_linear(
        i in 1usize..3, d in 1u64..5, a1 in any::<u32>(), b1 in any::<u32>(),
        a2 in any::<u32>(), b2 in any::<u32>(), c in 1i64..3,
    ) {
        let f = field(i);
        let p = f.p();
        let spec = CodeSpec::new(build(&f, SetKind::D0, d).unwrap());
        let (a1, b1, a2, b2) = (elem(&f, a1), elem(&f, b1), elem(&f, a2), elem(&f, b2));
        let sum = spec.codeword(f.add(a1, a2), f.add(b1, b2));
        let parts: Vec<u32> = spec.codeword(a1, b1).iter().zip(spec.codeword(a2, b2))
            .map(|(u, v)| (u + v) % p).collect();
        prop_assert_eq!(sum, parts);
        let c = f.from_prime(c);
        let scaled: Vec<u32> = spec.codeword(a1, b1).iter().map(|&s| s * c.0 % p).collect();
        prop_assert_eq!(spec.codeword(f.mul(c, a1), f.mul(c, b1)), scaled);
    }

    #[test]
    fn punctured_weight_is_a_fraction_of_the_full_weight(
        a in any::<u32>(), b in any::<u32>(), scalar in any::<bool>(),
    ) {
        let f = build_field(5, 2).unwrap();
        let (a, b) = (elem(&f, a), elem(&f, b));
        let (full, punctured, factor) = if scalar {
            (SetKind::D0, SetKind::PuncturedD0, 4)
        } else {
            (SetKind::DLambda(3), SetKind::PuncturedDLambda(3), 2)
        };
        let weight = |kind| {
            let spec = CodeSpec::new(build(&f, kind, 4).unwrap());
            spec.codeword(a, b).iter().filter(|&&s| s != 0).count()
        };
        prop_assert_eq!(weight(full), factor * weight(punctured));
    }

    #[test]
    fn defining_sets_satisfy_their_predicate(i in 1usize..6, d in 1u64..9, lambda in 0u32..7, star in any::<bool>()) {
        let f = field(i);
        prop_assume!(lambda < f.p());
        let kind = if star { SetKind::DStar } else { SetKind::DLambda(lambda) };
        let set = build(&f, kind, d).unwrap();
        prop_assert!(set.verify());
        let pairs: HashSet<_> = set.pairs().iter().copied().collect();
        prop_assert_eq!(pairs.len(), set.len());
        prop_assert!(set.pairs().iter().all(|(x, y)| !x.is_zero() && !(star && y.is_zero())));
        prop_assert!(set.pairs().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn griesmer_bound_is_monotone(n in 1u64..500, k in 1u32..7, d in 1u64..200, p in prop::sample::select(vec![3u64, 5, 7])) {
        let g = griesmer_bound(n, k, d, p);
        prop_assert!(g.bound >= d);
        prop_assert!(griesmer_bound(n, k + 1, d, p).bound > g.bound);
        prop_assert!(griesmer_bound(n, k, d + 1, p).bound > g.bound);
        prop_assert_eq!(g.slack, n as i64 - g.bound as i64);
    }
}

#[test]
fn distributions_account_for_every_parameter_pair() {
    for (p, m) in [(3u64, 2u32), (3, 3), (5, 2)] {
        let f = build_field(p, m).unwrap();
        for kind in [SetKind::D0, SetKind::DStar, SetKind::DLambda(1), SetKind::PuncturedD0] {
            let d = if kind.is_punctured() { p - 1 } else { 1 };
            let cwe = complete_weight_enumerator(&CodeSpec::new(build(&f, kind, d).unwrap())).unwrap();
            assert_eq!(cwe.total(), p.pow(2 * m));
            if matches!(kind, SetKind::D0 | SetKind::DStar) {
                assert!(cwe.nonzero_symbols_balanced());
            }
            let wd = weight_distribution(&cwe);
            assert_eq!(wd.total(), p.pow(wd.k));
            assert_eq!(wd.counts[&0], 1);
        }
    }
}
