//! Cayley graphs `G(Ω)` built from projective two-weight codes and
//! strong-regularity checks.
//!
//! Vertices are the vectors of `F_p^k`, indexed by their base-p encoding
//! (coordinate 0 least significant). `Ω` collects every nonzero multiple of
//! every generator column; `u ~ v` iff `u - v ∈ Ω`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::codes::{complete_weight_enumerator_with_budget, weight_distribution, CodeSpec};
use crate::defining_sets::SetKind;
use crate::dual::{generator_matrix, GeneratorMatrix};
use crate::error::{Error, Result};

/// Largest graph order that is built and verified explicitly.
pub const DEFAULT_SRG_VERTEX_BUDGET: u64 = 729;

/// Simple undirected graph with one bitset row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(order: usize) -> Self {
        let words = order.div_ceil(64).max(1);
        Graph {
            order,
            words,
            adj: vec![0; order * words],
        }
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(order);
        for &(u, v) in edges {
            g.connect(u, v);
        }
        g
    }

    fn connect(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&v| self.is_adjacent(u, v))
    }

    /// `(A²)_{uv}`: the number of common neighbours.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.order
    }
}

fn decode(mut v: u64, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = (v % p as u64) as u32;
            v /= p as u64;
            d
        })
        .collect()
}

fn encode(digits: &[u32], p: u32) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64)
}

/// All nonzero scalar multiples of all columns, deduplicated and sorted.
pub fn build_omega(g: &GeneratorMatrix) -> Result<Vec<u64>> {
    let p = g.p();
    let mut omega = Vec::with_capacity(g.cols() * (p as usize - 1));
    for j in 0..g.cols() {
        let col = g.column(j);
        if col.iter().all(|&v| v == 0) {
            return Err(Error::ZeroColumn(j));
        }
        for c in 1..p {
            let scaled: Vec<u32> = col.iter().map(|&v| (v * c) % p).collect();
            omega.push(encode(&scaled, p));
        }
    }
    omega.sort_unstable();
    omega.dedup();
    Ok(omega)
}

/// Cayley graph on `F_p^k` with connection set `omega`.
pub fn build_graph(omega: &[u64], p: u32, k: u32, max_vertices: u64) -> Result<Graph> {
    let order = (p as u64).pow(k);
    if order > max_vertices {
        return Err(Error::BudgetExceeded {
            required: order as u128,
            budget: max_vertices as u128,
        });
    }
    let order = order as usize;
    let shifts: Vec<Vec<u32>> = omega.iter().map(|&w| decode(w, p, k)).collect();
    let mut g = Graph::empty(order);
    let mut sum = vec![0u32; k as usize];
    for u in 0..order {
        let du = decode(u as u64, p, k);
        for s in &shifts {
            for ((o, &a), &b) in sum.iter_mut().zip(&du).zip(s) {
                *o = (a + b) % p;
            }
            let v = encode(&sum, p) as usize;
            g.adj[u * g.words + v / 64] |= 1 << (v % 64);
        }
    }
    Ok(g)
}

/// `(N, K, λ, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    #[serde(rename = "N")]
    pub vertices: i64,
    #[serde(rename = "K")]
    pub valency: i64,
    pub lambda: i64,
    pub mu: i64,
}

impl SrgParams {
    /// `K(K - λ - 1) = (N - K - 1) μ`.
    pub fn feasible(&self) -> bool {
        self.valency * (self.valency - self.lambda - 1)
            == (self.vertices - self.valency - 1) * self.mu
    }
}

/// Parameters of `G(Ω)` for a projective two-weight `[n, k]` code with
/// nonzero weights `w1`, `w2`.
pub fn predict_srg_params(n: u64, k: u32, w1: u64, w2: u64, p: u32) -> SrgParams {
    let p = p as i64;
    let kk = (p - 1) * n as i64;
    let s = w1 as i64 + w2 as i64;
    let prod = w1 as i64 * w2 as i64;
    SrgParams {
        vertices: p.pow(k),
        valency: kk,
        lambda: kk * kk + 3 * kk - p * s - kk * p * s + p * p * prod,
        mu: kk * kk + kk - kk * p * s + p * p * prod,
    }
}

/// Family-specific parameter formulas as printed for the punctured `D_0`
/// and `D*` graphs.
pub fn printed_family_params(kind: SetKind, p: u32, m: u32) -> Option<SrgParams> {
    let p = p as i64;
    let pm = p.pow(m);
    let pm1 = p.pow(m - 1);
    let p2m1 = p.pow(2 * m - 1);
    let p2m2 = p.pow(2 * m - 2);
    match kind {
        SetKind::PuncturedD0 => Some(SrgParams {
            vertices: p.pow(2 * m),
            valency: p2m1 - pm1,
            lambda: p2m2 + pm - 3 * pm1,
            mu: p2m2 - pm1,
        }),
        SetKind::PuncturedDStar => Some(SrgParams {
            vertices: p.pow(2 * m),
            valency: p2m1 - pm - pm1 - 1,
            lambda: p2m2 + pm - 5 * pm1 + 4,
            mu: (pm1 - 1) * (pm1 - 2),
        }),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SrgVerification {
    pub params: Option<SrgParams>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<(usize, usize)>,
}

impl SrgVerification {
    fn fail(reason: impl Into<String>, counterexample: Option<(usize, usize)>) -> Self {
        SrgVerification {
            params: None,
            verified: false,
            reason: Some(reason.into()),
            counterexample,
        }
    }
}

/// Checks `A² = K·I + λ·A + μ·(J - I - A)` entry by entry.
pub fn verify_srg(g: &Graph) -> SrgVerification {
    verify_with(g, |u, v| g.common_neighbors(u, v))
}

/// Same check with common neighbours counted vertex by vertex.
pub fn verify_srg_naive(g: &Graph) -> SrgVerification {
    verify_with(g, |u, v| {
        (0..g.order())
            .filter(|&w| g.is_adjacent(u, w) && g.is_adjacent(v, w))
            .count()
    })
}

fn verify_with<F: Fn(usize, usize) -> usize>(g: &Graph, common: F) -> SrgVerification {
    let n = g.order();
    if n == 0 {
        return SrgVerification::fail("empty graph", None);
    }
    if let Some(u) = (0..n).find(|&u| g.is_adjacent(u, u)) {
        return SrgVerification::fail("graph has a loop", Some((u, u)));
    }
    let valency = g.degree(0);
    if let Some(u) = (1..n).find(|&u| g.degree(u) != valency) {
        return SrgVerification::fail("graph is not regular", Some((0, u)));
    }
    if !g.is_connected() {
        return SrgVerification::fail("graph is disconnected", None);
    }
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for u in 0..n {
        for v in u + 1..n {
            let c = common(u, v);
            let slot = if g.is_adjacent(u, v) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(c),
                Some(expected) if expected != c => {
                    let what = if g.is_adjacent(u, v) { "lambda" } else { "mu" };
                    return SrgVerification::fail(
                        format!("{what} is not constant: {expected} vs {c}"),
                        Some((u, v)),
                    );
                }
                _ => {}
            }
        }
    }
    let Some(mu) = mu else {
        return SrgVerification::fail("complete graph: no non-adjacent pairs", None);
    };
    if mu == 0 {
        return SrgVerification::fail("mu = 0", None);
    }
    SrgVerification {
        params: Some(SrgParams {
            vertices: n as i64,
            valency: valency as i64,
            lambda: lambda.unwrap_or(0) as i64,
            mu: mu as i64,
        }),
        verified: true,
        reason: None,
        counterexample: None,
    }
}

/// Report for the graph of a punctured code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SrgReport {
    #[serde(rename = "N")]
    pub vertices: i64,
    #[serde(rename = "K")]
    pub valency: i64,
    pub lambda: i64,
    pub mu: i64,
    /// `None` when the graph was too large to build.
    pub verified: Option<bool>,
    pub source: String,
    pub weights_used: (u64, u64),
    pub predicted: SrgParams,
    pub predicted_feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<SrgParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<SrgVerification>,
}

/// Enumerates the code, predicts `(N, K, λ, μ)` from its two weights and,
/// when `p^k` is within `max_vertices`, verifies the graph explicitly.
pub fn srg_report(
    spec: &CodeSpec<'_>,
    enumeration_budget: u128,
    max_vertices: u64,
) -> Result<SrgReport> {
    let f = spec.field();
    let (p, m) = (f.p(), f.m());
    let kind = spec.set().kind();
    let wd = weight_distribution(&complete_weight_enumerator_with_budget(
        spec,
        enumeration_budget,
    )?);
    let weights = wd.nonzero_weights();
    if weights.len() != 2 {
        return Err(Error::UndefinedCase(format!(
            "expected a two-weight code, found weights {weights:?}"
        )));
    }
    let (w1, w2) = (weights[0], weights[1]);
    let predicted = predict_srg_params(wd.n, wd.k, w1, w2, p);
    let printed = printed_family_params(kind, p, m);
    let note = printed.and_then(|pr| {
        (pr != predicted).then(|| {
            format!(
                "paper-K-discrepancy: printed (N,K,lambda,mu) = ({},{},{},{}), \
                 (p-1)n gives ({},{},{},{})",
                pr.vertices,
                pr.valency,
                pr.lambda,
                pr.mu,
                predicted.vertices,
                predicted.valency,
                predicted.lambda,
                predicted.mu
            )
        })
    });
    let source = format!("{} p={} m={} d={}", kind_label(kind), p, m, spec.set().d());
    let mut report = SrgReport {
        vertices: predicted.vertices,
        valency: predicted.valency,
        lambda: predicted.lambda,
        mu: predicted.mu,
        verified: None,
        source,
        weights_used: (w1, w2),
        predicted,
        predicted_feasible: predicted.feasible(),
        printed,
        note,
        verification: None,
    };
    let k = wd.k;
    if (p as u64).pow(k) <= max_vertices {
        let g = generator_matrix(spec);
        let omega = build_omega(&g)?;
        let graph = build_graph(&omega, p, k, max_vertices)?;
        let v = verify_srg(&graph);
        if let Some(actual) = v.params {
            report.vertices = actual.vertices;
            report.valency = actual.valency;
            report.lambda = actual.lambda;
            report.mu = actual.mu;
        }
        report.verified = Some(v.verified && v.params == Some(predicted));
        report.verification = Some(v);
    }
    Ok(report)
}

fn kind_label(kind: SetKind) -> String {
    match kind {
        SetKind::PuncturedD0 => "punctured-D0".into(),
        SetKind::PuncturedDStar => "punctured-D*".into(),
        SetKind::PuncturedDLambda(l) => format!("punctured-D{l}"),
        SetKind::D0 => "D0".into(),
        SetKind::DStar => "D*".into(),
        SetKind::DLambda(l) => format!("D{l}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::DEFAULT_ENUMERATION_BUDGET;
    use crate::defining_sets::build;
    use crate::gf::build_field;

    fn graph_for(kind: SetKind) -> (Vec<u64>, Graph) {
        let f = build_field(3, 2).unwrap();
        let spec = CodeSpec::new(build(&f, kind, 2).unwrap());
        let omega = build_omega(&generator_matrix(&spec)).unwrap();
        let g = build_graph(&omega, 3, 4, DEFAULT_SRG_VERTEX_BUDGET).unwrap();
        (omega, g)
    }

    #[test]
    fn omega_sizes_and_symmetry() {
        for (kind, size) in [(SetKind::PuncturedD0, 24), (SetKind::PuncturedDStar, 16)] {
            let (omega, g) = graph_for(kind);
            assert_eq!(omega.len(), size);
            for &w in &omega {
                let neg: Vec<u32> = decode(w, 3, 4).iter().map(|&d| (3 - d) % 3).collect();
                assert!(omega.binary_search(&encode(&neg, 3)).is_ok());
            }
            assert_eq!(g.order(), 81);
            assert!((0..81).all(|u| g.degree(u) == size));
            let nbrs: Vec<u64> = g.neighbors(0).map(|v| v as u64).collect();
            assert_eq!(nbrs, omega);
            for u in 0..81 {
                for v in 0..81 {
                    assert_eq!(g.is_adjacent(u, v), g.is_adjacent(v, u));
                }
            }
        }
    }

    #[test]
    fn verification_f9() {
        let (_, g0) = graph_for(SetKind::PuncturedD0);
        let v = verify_srg(&g0);
        assert!(v.verified);
        let expected = SrgParams { vertices: 81, valency: 24, lambda: 9, mu: 6 };
        assert_eq!(v.params, Some(expected));
        assert_eq!(verify_srg_naive(&g0), v);
        let (_, gs) = graph_for(SetKind::PuncturedDStar);
        let expected = SrgParams { vertices: 81, valency: 16, lambda: 7, mu: 2 };
        assert_eq!(verify_srg(&gs).params, Some(expected));
    }

    #[test]
    fn predicted_params() {
        let p0 = predict_srg_params(12, 4, 9, 6, 3);
        assert_eq!(p0, SrgParams { vertices: 81, valency: 24, lambda: 9, mu: 6 });
        let ps = predict_srg_params(8, 4, 6, 3, 3);
        assert_eq!(ps, SrgParams { vertices: 81, valency: 16, lambda: 7, mu: 2 });
        assert!(p0.feasible() && ps.feasible());
        assert_eq!(printed_family_params(SetKind::PuncturedD0, 3, 2), Some(p0));
        let printed = printed_family_params(SetKind::PuncturedDStar, 3, 2).unwrap();
        assert_eq!(printed.valency, 14);
        assert_eq!((printed.lambda, printed.mu), (7, 2));
        assert!(!printed.feasible());
    }

    #[test]
    fn complete_graph_is_rejected() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        let k4 = Graph::from_edges(4, &edges);
        let v = verify_srg(&k4);
        assert!(!v.verified);
        assert!(v.reason.unwrap().contains("complete"));
    }

    #[test]
    fn irregular_and_disconnected_graphs_are_rejected() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(!verify_srg(&path).verified);
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let v = verify_srg(&two_edges);
        assert_eq!(v.reason.as_deref(), Some("graph is disconnected"));
        // C_6 is regular and connected but common-neighbour counts vary.
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let v = verify_srg(&c6);
        assert!(!v.verified);
        assert!(v.counterexample.is_some());
        // C_5 is SRG(5, 2, 0, 1).
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let expected = SrgParams { vertices: 5, valency: 2, lambda: 0, mu: 1 };
        assert_eq!(verify_srg(&c5).params, Some(expected));
    }

    #[test]
    fn report_with_discrepancy_note() {
        let f = build_field(3, 2).unwrap();
        let spec = CodeSpec::new(build(&f, SetKind::PuncturedDStar, 2).unwrap());
        let r = srg_report(&spec, DEFAULT_ENUMERATION_BUDGET, DEFAULT_SRG_VERTEX_BUDGET).unwrap();
        assert_eq!(r.verified, Some(true));
        assert_eq!((r.vertices, r.valency, r.lambda, r.mu), (81, 16, 7, 2));
        assert!(r.note.as_deref().unwrap().starts_with("paper-K-discrepancy"));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["N"], 81);
        assert_eq!(v["source"], "punctured-D* p=3 m=2 d=2");
    }

    #[test]
    fn zero_column_rejected() {
        let g = GeneratorMatrix::from_rows(3, &[vec![1, 0], vec![1, 0]]);
        assert_eq!(build_omega(&g), Err(Error::ZeroColumn(1)));
    }

    #[test]
    fn graph_budget() {
        assert!(matches!(
            build_graph(&[1], 5, 5, DEFAULT_SRG_VERTEX_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
