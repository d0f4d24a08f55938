//! Generator matrices, small dual distances and the first two Pless power
//! moments.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{CodeSpec, WeightDistribution};
use crate::gf::FieldElement;

/// `k × n` matrix over F_p; row `r` is the codeword of the `r`-th basis
/// vector of `F_{p^m}×F_{p^m}` (polynomial basis on each factor, `a` first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    p: u32,
    k: usize,
    n: usize,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    p: u32,
    k: usize,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Serialize for GeneratorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            p: self.p,
            k: self.k,
            n: self.n,
            rows: (0..self.k).map(|r| self.row(r).to_vec()).collect(),
        }
        .serialize(s)
    }
}

pub fn mod_inverse(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
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

pub fn generator_matrix(spec: &CodeSpec<'_>) -> GeneratorMatrix {
    let f = spec.field();
    let m = f.m() as usize;
    let p = f.p();
    let n = spec.n();
    let mut entries = Vec::with_capacity(2 * m * n);
    for r in 0..2 * m {
        let basis = FieldElement(p.pow((r % m) as u32));
        let row = if r < m {
            spec.codeword(basis, FieldElement::ZERO)
        } else {
            spec.codeword(FieldElement::ZERO, basis)
        };
        entries.extend(row);
    }
    GeneratorMatrix {
        p,
        k: 2 * m,
        n,
        entries,
    }
}

impl GeneratorMatrix {
    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n), "ragged matrix");
        GeneratorMatrix {
            p,
            k,
            n,
            entries: rows.iter().flatten().map(|&v| v % p).collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.k
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.k).map(|r| self.entries[r * self.n + j]).collect()
    }

    /// Polynomial-basis coordinates of `(a, b)` in row order.
    pub fn message_of(spec: &CodeSpec<'_>, a: FieldElement, b: FieldElement) -> Vec<u32> {
        let f = spec.field();
        let mut v = f.digits(a);
        v.extend(f.digits(b));
        v
    }

    pub fn encode(&self, message: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut out = vec![0u64; self.n];
        for (r, &c) in message.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = (*o + c as u64 * g as u64) % p;
            }
        }
        out.into_iter().map(|v| v as u32).collect()
    }

    pub fn rank(&self) -> usize {
        let p = self.p as u64;
        let mut rows: Vec<Vec<u32>> = (0..self.k).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = mod_inverse(rows[rank][col], self.p) as u64;
            for v in rows[rank].iter_mut() {
                *v = (*v as u64 * inv % p) as u32;
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col] as u64;
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = ((*v as u64 + p * p - factor * pv as u64) % p) as u32;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// `p^rank`, the number of codewords spanned by the rows.
    pub fn row_space_size(&self) -> u128 {
        (self.p as u128).pow(self.rank() as u32)
    }

    /// Base-p index of the column scaled so its first nonzero entry is 1,
    /// or `None` for a zero column.
    fn normalized_key(&self, col: &[u32]) -> Option<u64> {
        let lead = col.iter().find(|&&v| v != 0)?;
        let inv = mod_inverse(*lead, self.p) as u64;
        let p = self.p as u64;
        Some(
            col.iter()
                .rev()
                .fold(0u64, |acc, &v| acc * p + v as u64 * inv % p),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualDistance {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = ">=4")]
    AtLeastFour,
}

impl DualDistance {
    /// Projective means dual distance at least 3.
    pub fn is_projective(self) -> bool {
        matches!(self, DualDistance::Three | DualDistance::AtLeastFour)
    }
}

/// Minimum distance of the dual code, resolved up to `≥ 4`.
pub fn dual_distance_upto_3(g: &GeneratorMatrix) -> DualDistance {
    let columns: Vec<Vec<u32>> = (0..g.n).map(|j| g.column(j)).collect();
    let mut keys = Vec::with_capacity(g.n);
    for col in &columns {
        match g.normalized_key(col) {
            Some(k) => keys.push(k),
            None => return DualDistance::One,
        }
    }
    let mut index: HashMap<u64, usize> = HashMap::with_capacity(g.n);
    for (j, &k) in keys.iter().enumerate() {
        if index.insert(k, j).is_some() {
            return DualDistance::Two;
        }
    }
    let p = g.p;
    let found = (0..g.n).into_par_iter().any(|i| {
        let mut combo = vec![0u32; g.k];
        for j in i + 1..g.n {
            for beta in 1..p {
                for (r, c) in combo.iter_mut().enumerate() {
                    *c = (columns[i][r] + beta * columns[j][r]) % p;
                }
                // combo is never zero here: columns i and j are not proportional.
                if let Some(&l) = g.normalized_key(&combo).and_then(|k| index.get(&k)) {
                    if l != i && l != j {
                        return true;
                    }
                }
            }
        }
        false
    });
    if found {
        DualDistance::Three
    } else {
        DualDistance::AtLeastFour
    }
}

/// Both sides of the first two Pless power moments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlessReport {
    pub sum_a: u128,
    pub p_pow_k: u128,
    /// `p · Σ j A_j`.
    pub scaled_first_moment: u128,
    /// `p^k (pn - n - A_1^⊥)`.
    pub scaled_expected_moment: u128,
    pub a1_dual: u64,
    pub count_identity: bool,
    pub moment_identity: bool,
}

impl PlessReport {
    pub fn holds(&self) -> bool {
        self.count_identity && self.moment_identity
    }
}

/// Pless moments with `A_1^⊥ = 0`, which holds whenever no coordinate is
/// identically zero (guaranteed by `(0, 0) ∉ D`).
pub fn pless_check(wd: &WeightDistribution) -> PlessReport {
    pless_check_with(wd, 0)
}

pub fn pless_check_with(wd: &WeightDistribution, a1_dual: u64) -> PlessReport {
    let p = wd.p as u128;
    let n = wd.n as u128;
    let sum_a: u128 = wd.counts.values().map(|&c| c as u128).sum();
    let first: u128 = wd
        .counts
        .iter()
        .map(|(&w, &c)| w as u128 * c as u128)
        .sum();
    let p_pow_k = p.pow(wd.k);
    let expected = p_pow_k * (p * n - n).saturating_sub(a1_dual as u128);
    PlessReport {
        sum_a,
        p_pow_k,
        scaled_first_moment: p * first,
        scaled_expected_moment: expected,
        a1_dual,
        count_identity: sum_a == p_pow_k,
        moment_identity: p * first == expected,
    }
}
