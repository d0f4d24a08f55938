//! Arithmetic in the prime field F_p and its extensions F_{p^m}.
//!
//! Elements are integer indices in `[0, p^m)` whose base-p digits are the
//! coordinates in the polynomial basis `1, α, …, α^{m-1}`, where `α` is the
//! class of `x` modulo the field's defining polynomial. Multiplication goes
//! through discrete log/antilog tables built once per field; addition is
//! digit-wise.
//!
//! Character sums are evaluated in double precision and are only meant for
//! verification.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex value produced by character and Gauss sums.
pub type ComplexValue = Complex64;

/// Largest supported field order `p^m`.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Tolerance used for every character-sum comparison.
pub const COMPLEX_TOLERANCE: f64 = 1e-9;

/// Characteristic, degree and defining polynomial of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    /// Monic degree-m modulus, constant term first (length m + 1).
    pub modulus: Vec<u32>,
}

/// An element of F_{p^m}, stored as its base-p coordinate index.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable arithmetic context for F_{p^m}.
#[derive(Debug, Clone)]
pub struct ExtensionField {
    params: FieldParams,
    order: u32,
    primitive: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Quadratic character of F_p (Legendre symbol), with `η_1(0) = 0`.
pub fn legendre(a: i64, p: u32) -> i8 {
    let p64 = p as i64;
    let a = a.rem_euclid(p64) as u64;
    if a == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = a;
    let mut e = (p as u64 - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Dense polynomial helpers over F_p on coefficient vectors (constant term first).
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` modulo `b` (b nonzero).
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        while r.len() > db && !(r.len() == 1 && r[0] == 0) {
            let dr = r.len() - 1;
            let c = r[dr] as u64 * lead_inv % p as u64;
            if c != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    let idx = dr - db + i;
                    let sub = c * bi as u64 % p as u64;
                    r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
            r.pop();
            r = trim(r);
            if r.is_empty() {
                r.push(0);
            }
        }
        r
    }

    /// Product of `a` and `b` reduced modulo the monic `modulus`; inputs and
    /// output have exactly `m` coefficients.
    pub fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
        let m = modulus.len() - 1;
        let p64 = p as u64;
        let mut prod = vec![0u64; 2 * m.max(1)];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p64;
            }
        }
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..m {
                let idx = deg - m + i;
                let sub = c * modulus[i] as u64 % p64;
                prod[idx] = (prod[idx] + p64 - sub) % p64;
            }
        }
        prod.truncate(m);
        prod.into_iter().map(|c| c as u32).collect()
    }

    /// Exhaustive factor search: no monic factor of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        if deg <= 1 {
            return deg == 1;
        }
        for fd in 1..=deg / 2 {
            let count = (p as u64).pow(fd as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(fd + 1);
                let mut rest = idx;
                for _ in 0..fd {
                    g.push((rest % p as u64) as u32);
                    rest /= p as u64;
                }
                g.push(1);
                let r = rem(f, &g, p);
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `m`
/// over F_p, comparing coefficient vectors from the constant term upward.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for idx in 0..count {
        // c_0 is the most significant digit of idx, so idx order is the
        // lexicographic order of (c_0, c_1, ..., c_{m-1}).
        let mut coeffs = vec![0u32; m as usize + 1];
        let mut rest = idx;
        for i in (0..m as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[m as usize] = 1;
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

/// Builds F_{p^m} with the canonical modulus and primitive element.
pub fn build_field(p: u64, m: u32) -> Result<ExtensionField> {
    if p < 3 || p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if m == 0 || (p as f64).powi(m as i32) > MAX_FIELD_ORDER as f64 {
        return Err(Error::FieldTooLarge { p, m });
    }
    let p = p as u32;
    let order = p.pow(m);
    let modulus = smallest_irreducible(p, m);
    let params = FieldParams { p, m, modulus };

    let to_digits = |x: u32| -> Vec<u32> {
        let mut d = Vec::with_capacity(m as usize);
        let mut rest = x;
        for _ in 0..m {
            d.push(rest % p);
            rest /= p;
        }
        d
    };
    let from_digits = |d: &[u32]| -> u32 { d.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
    let slow_mul = |a: u32, b: u32| -> u32 {
        from_digits(&poly::mulmod(&to_digits(a), &to_digits(b), &params.modulus, p))
    };
    let slow_pow = |x: u32, mut e: u64| -> u32 {
        let mut result = 1u32;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = slow_mul(result, base);
            }
            base = slow_mul(base, base);
            e >>= 1;
        }
        result
    };

    let group = order as u64 - 1;
    let factors = prime_factors(group);
    let primitive = (1..order)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, group / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic");

    let mut exp = Vec::with_capacity(group as usize);
    let mut log = vec![NO_LOG; order as usize];
    let mut cur = 1u32;
    for i in 0..group as u32 {
        assert_eq!(log[cur as usize], NO_LOG, "primitive element repeats a power");
        exp.push(cur);
        log[cur as usize] = i;
        cur = slow_mul(cur, primitive);
    }
    assert_eq!(cur, 1, "primitive element order mismatch");

    let mut field = ExtensionField {
        params,
        order,
        primitive: FieldElement(primitive),
        exp,
        log,
        trace: Vec::new(),
    };

    // Trace is F_p-linear: evaluate on the polynomial basis, extend by digits.
    let basis_traces: Vec<u32> = (0..m)
        .map(|i| {
            let t = field.trace_element(FieldElement(p.pow(i)));
            assert!(t.0 < p, "trace must land in the prime field");
            t.0
        })
        .collect();
    field.trace = (0..order)
        .map(|x| {
            let mut rest = x;
            let mut acc = 0u64;
            for &bt in &basis_traces {
                acc += (rest % p) as u64 * bt as u64;
                rest /= p;
            }
            (acc % p as u64) as u32
        })
        .collect();
    Ok(field)
}

impl ExtensionField {
    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.params.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.params.m
    }

    /// Number of elements, `p^m`.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.order).map(FieldElement)
    }

    /// Embeds `c mod p` as a prime-subfield element.
    #[inline]
    pub fn from_prime(&self, c: i64) -> FieldElement {
        FieldElement(c.rem_euclid(self.params.p as i64) as u32)
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.order
    }

    /// Polynomial-basis coordinates of `x`, constant term first.
    pub fn digits(&self, x: FieldElement) -> Vec<u32> {
        let p = self.params.p;
        let mut rest = x.0;
        (0..self.params.m)
            .map(|_| {
                let d = rest % p;
                rest /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        let p = self.params.p;
        FieldElement(digits.iter().rev().fold(0u32, |acc, &c| acc * p + c % p))
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let p = self.params.p;
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.params.m {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        let p = self.params.p;
        let mut a = x.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.params.m {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = self.order - 1;
        let s = self.log[x.index()] + self.log[y.index()];
        let s = if s >= group { s - group } else { s };
        FieldElement(self.exp[s as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let group = self.order - 1;
        let l = self.log[x.index()];
        Ok(FieldElement(self.exp[((group - l) % group) as usize]))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if x.is_zero() {
            return FieldElement::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = self.log[x.index()] as u64 * (e % group) % group;
        FieldElement(self.exp[l as usize])
    }

    /// Discrete logarithm to the base of the primitive element.
    pub fn log(&self, x: FieldElement) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(self.log[x.index()])
        }
    }

    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % (self.order as u64 - 1)) as usize])
    }

    /// Absolute trace `Tr(x)` as an integer in `[0, p)`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.trace[x.index()]
    }

    pub fn trace_table(&self) -> &[u32] {
        &self.trace
    }

    /// `Σ_{i<m} x^{p^i}` evaluated with field operations.
    pub fn trace_element(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut power = x;
        for _ in 0..self.params.m {
            acc = self.add(acc, power);
            power = self.pow(power, self.params.p as u64);
        }
        acc
    }

    /// Quadratic character `η_m`, extended by `η_m(0) = 0`.
    pub fn quadratic_character(&self, x: FieldElement) -> i8 {
        match self.log(x) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    /// Canonical additive character `χ(x) = ζ_p^{Tr(x)}`.
    pub fn character(&self, x: FieldElement) -> ComplexValue {
        root_of_unity(self.trace(x), self.params.p)
    }
}

fn root_of_unity(t: u32, p: u32) -> ComplexValue {
    Complex64::from_polar(1.0, 2.0 * PI * t as f64 / p as f64)
}

/// `G_m = Σ_{c≠0} η_m(c) χ(c)` by direct summation.
pub fn gauss_sum_bruteforce(f: &ExtensionField) -> ComplexValue {
    f.nonzero_elements()
        .map(|c| f.character(c) * f.quadratic_character(c) as f64)
        .sum()
}

/// `G_m = (-1)^{m-1} (√-1)^{(p-1)² m / 4} p^{m/2}`.
pub fn gauss_sum_closed_form(p: u32, m: u32) -> ComplexValue {
    let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let quarter_turns = ((p as u64 - 1).pow(2) * m as u64 / 4) % 4;
    let unit = match quarter_turns {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    unit * sign * (p as f64).powf(m as f64 / 2.0)
}

/// `Σ_{c ∈ F_{p^m}} χ(a2 c² + a1 c + a0)` by direct summation.
pub fn quadratic_sum_bruteforce(
    f: &ExtensionField,
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
) -> Result<ComplexValue> {
    if a2.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    Ok(f.elements()
        .map(|c| {
            let v = f.add(f.add(f.mul(a2, f.mul(c, c)), f.mul(a1, c)), a0);
            f.character(v)
        })
        .sum())
}

/// `G_m η_m(a2) χ(a0 - a1² (4 a2)^{-1})`.
pub fn quadratic_sum_closed_form(
    f: &ExtensionField,
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
) -> Result<ComplexValue> {
    if a2.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let four_a2 = f.mul(f.from_prime(4), a2);
    let shift = f.mul(f.mul(a1, a1), f.inv(four_a2)?);
    let g = gauss_sum_closed_form(f.p(), f.m());
    Ok(g * f.quadratic_character(a2) as f64 * f.character(f.sub(a0, shift)))
}
