//! Dense exact graph layer: bit-matrix graphs, strong-regularity and
//! integral-spectrum certification, Hoffman's ratio bound, deterministic
//! clique/coclique searches, automorphism counting for tiny graphs, triple
//! common-neighbor statistics, and the graph families attached to polar
//! spaces (collinearity, generator-distance, non-isotropic unitary,
//! line-system concurrency, linear representations).
//!
//! Everything is exact: adjacency is one bit per pair, eigenvalue claims
//! are integers certified by polynomial annihilation, and multiplicities
//! are solved as exact rationals that must come out as non-negative
//! integers.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::linalg;
use crate::polar::{PolarError, PolarFamily, PolarSpace};
use crate::projspace::{gaussian_binomial, normalize, ProjError, Subspace};

/// Vertex cap for collinearity graphs.
pub const COLLINEARITY_BUDGET: usize = 12_000;
/// Vertex cap for generator-distance graphs.
pub const DUAL_POLAR_BUDGET: usize = 6_000;
/// Vertex cap for non-isotropic unitary graphs.
pub const NU_BUDGET: usize = 2_000;
/// Vertex cap for exact spectrum certification (dense integer matrices).
pub const SPECTRUM_BUDGET: usize = 2_000;
/// Vertex cap for the maximal-clique census.
pub const CLIQUE_CENSUS_BUDGET: usize = 5_000;
/// Degree cap for the maximal-clique census.
pub const CLIQUE_CENSUS_DEGREE: usize = 300;
/// Vertex cap for the triple common-neighbor census.
pub const TRIPLE_BUDGET: usize = 500;
/// Vertex cap for automorphism counting.
pub const AUTOMORPHISM_BUDGET: usize = 40;
/// Vertex cap for linear representation graphs.
pub const LINEAR_REP_BUDGET: usize = 5_000;

#[derive(Debug, Error)]
pub enum GraphsError {
    #[error("too large for {what}: {got} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph is not connected")]
    NotConnected,
    #[error("bad eigenvalue claim: {0}")]
    BadClaim(String),
    #[error("annihilation check failed at entry ({u},{v}): got {got}, expected {expected}")]
    AnnihilationFailed {
        u: usize,
        v: usize,
        got: i128,
        expected: i128,
    },
    #[error("multiplicity solve failed: {0}")]
    BadMultiplicities(String),
    #[error(
        "line system is not point-regular: point {point} lies on {count} lines, expected {expected}"
    )]
    NotRegularSystem {
        point: usize,
        count: usize,
        expected: usize,
    },
    #[error("node budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("malformed graph text: {0}")]
    BadFormat(String),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Proj(#[from] ProjError),
}

/// A loop-free undirected graph stored as a symmetric bit matrix.
///
/// Equality compares vertex count and adjacency only; labels are carried
/// for reporting but do not affect identity.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    wpr: usize,
    bits: Vec<u64>,
    labels: Vec<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        let wpr = n.div_ceil(64).max(1);
        Graph {
            n,
            wpr,
            bits: vec![0u64; n * wpr],
            labels: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
    }

    pub fn label(&self, u: usize) -> String {
        if self.labels.is_empty() {
            u.to_string()
        } else {
            self.labels[u].clone()
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        assert_ne!(u, v, "loops are not allowed");
        self.bits[u * self.wpr + v / 64] |= 1u64 << (v % 64);
        self.bits[v * self.wpr + u / 64] |= 1u64 << (u % 64);
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.wpr..(u + 1) * self.wpr]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.wpr + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree(u));
        for (wi, &word) in self.row(u).iter().enumerate() {
            let mut w = word;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn edge_count(&self) -> u64 {
        let total: u64 = self.bits.iter().map(|w| w.count_ones() as u64).sum();
        total / 2
    }

    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let k = self.degree(0);
        (1..self.n).all(|u| self.degree(u) == k).then_some(k)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        g.labels = self.labels.clone();
        let tail_mask = if self.n % 64 == 0 {
            !0u64
        } else {
            (1u64 << (self.n % 64)) - 1
        };
        for u in 0..self.n {
            for wi in 0..self.wpr {
                let mut word = !self.bits[u * self.wpr + wi];
                if wi == self.wpr - 1 {
                    word &= tail_mask;
                }
                if self.n <= wi * 64 {
                    word = 0;
                }
                g.bits[u * g.wpr + wi] = word;
            }
            // no loops
            g.bits[u * g.wpr + u / 64] &= !(1u64 << (u % 64));
        }
        g
    }

    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut g = Graph::empty(verts.len());
        if !self.labels.is_empty() {
            g.labels = verts.iter().map(|&v| self.labels[v].clone()).collect();
        }
        for (a, &u) in verts.iter().enumerate() {
            for (b, &v) in verts.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|u| self.degree(u) == self.n - 1)
    }

    /// Connected components, each sorted ascending, ordered by least vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().len() == 1
    }

    /// Header line with the vertex count, then one lower-triangle bit row
    /// per vertex as lowercase hex (vertex 0 contributes an empty line).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for u in 0..self.n {
            let mut bytes = vec![0u8; u.div_ceil(8)];
            for v in 0..u {
                if self.has_edge(u, v) {
                    bytes[v / 8] |= 1 << (v % 8);
                }
            }
            for b in bytes {
                out.push_str(&format!("{b:02x}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Graph, GraphsError> {
        let mut lines = s.lines();
        let n: usize = lines
            .next()
            .ok_or_else(|| GraphsError::BadFormat("missing header".into()))?
            .trim()
            .parse()
            .map_err(|_| GraphsError::BadFormat("header is not a vertex count".into()))?;
        let mut g = Graph::empty(n);
        for u in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| GraphsError::BadFormat(format!("missing row {u}")))?
                .trim();
            let expect = u.div_ceil(8) * 2;
            if line.len() != expect {
                return Err(GraphsError::BadFormat(format!(
                    "row {u} has {} hex digits, expected {expect}",
                    line.len()
                )));
            }
            for (bi, chunk) in line.as_bytes().chunks(2).enumerate() {
                let txt = std::str::from_utf8(chunk).unwrap();
                let byte = u8::from_str_radix(txt, 16)
                    .map_err(|_| GraphsError::BadFormat(format!("row {u} is not hex")))?;
                for bit in 0..8 {
                    let v = bi * 8 + bit;
                    if v < u && byte >> bit & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        Ok(g)
    }

    /// One "u v" line per edge, ascending.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push_str(&format!("{u} {v}\n"));
                }
            }
        }
        out
    }

    pub fn from_edge_list_text(n: usize, s: &str) -> Result<Graph, GraphsError> {
        let mut g = Graph::empty(n);
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |t: Option<&str>| -> Result<usize, GraphsError> {
                t.and_then(|x| x.parse().ok())
                    .ok_or_else(|| GraphsError::BadFormat(format!("bad edge line: {line}")))
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if u >= n || v >= n || u == v {
                return Err(GraphsError::BadFormat(format!("bad edge line: {line}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

/// Parameters (v, k, lambda, mu) of a strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

/// Arithmetic feasibility of strong-regularity parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SrgFeasibility {
    /// Integral eigenvalues r > s with their multiplicities.
    Integral {
        r: i64,
        s: i64,
        mult_r: u64,
        mult_s: u64,
    },
    /// Conference case: irrational eigenvalue pair, equal multiplicities.
    Conference { mult: u64 },
    Infeasible { reason: String },
}

impl SrgParams {
    pub fn new(v: u64, k: u64, lambda: u64, mu: u64) -> SrgParams {
        SrgParams { v, k, lambda, mu }
    }

    fn as_i128(&self) -> (i128, i128, i128, i128) {
        (
            self.v as i128,
            self.k as i128,
            self.lambda as i128,
            self.mu as i128,
        )
    }

    /// Both sides of the counting identity k(k-lambda-1) = mu(v-k-1).
    pub fn fundamental_identity(&self) -> (i128, i128) {
        let (v, k, l, m) = self.as_i128();
        (k * (k - l - 1), m * (v - k - 1))
    }

    /// Parameters of the complementary graph.
    pub fn complement(&self) -> SrgParams {
        let (v, k, l, m) = self.as_i128();
        let ck = v - k - 1;
        let cl = v - 2 * k + m - 2;
        let cm = v - 2 * k + l;
        assert!(
            ck >= 0 && cl >= 0 && cm >= 0,
            "complement parameters are negative"
        );
        SrgParams::new(self.v, ck as u64, cl as u64, cm as u64)
    }

    /// Counting identity plus exact eigenvalue/multiplicity integrality.
    pub fn feasibility(&self) -> SrgFeasibility {
        let (lhs, rhs) = self.fundamental_identity();
        if lhs != rhs {
            return SrgFeasibility::Infeasible {
                reason: format!("k(k-lambda-1) = {lhs} but mu(v-k-1) = {rhs}"),
            };
        }
        let (v, k, l, m) = self.as_i128();
        let disc = (l - m) * (l - m) + 4 * (k - m);
        if disc <= 0 {
            return SrgFeasibility::Infeasible {
                reason: "eigenvalue discriminant is not positive".into(),
            };
        }
        let root = isqrt_i128(disc);
        let num = 2 * k + (v - 1) * (l - m);
        if root * root == disc {
            let r = (l - m + root) / 2;
            let s = (l - m - root) / 2;
            if num % root != 0 || ((v - 1) - num / root) % 2 != 0 {
                return SrgFeasibility::Infeasible {
                    reason: "multiplicities are not integers".into(),
                };
            }
            let mult_r = ((v - 1) - num / root) / 2;
            let mult_s = ((v - 1) + num / root) / 2;
            if mult_r < 0 || mult_s < 0 {
                return SrgFeasibility::Infeasible {
                    reason: "negative multiplicity".into(),
                };
            }
            SrgFeasibility::Integral {
                r: r as i64,
                s: s as i64,
                mult_r: mult_r as u64,
                mult_s: mult_s as u64,
            }
        } else if num == 0 && (v - 1) % 2 == 0 {
            SrgFeasibility::Conference {
                mult: ((v - 1) / 2) as u64,
            }
        } else {
            SrgFeasibility::Infeasible {
                reason: "irrational eigenvalues with unequal multiplicities".into(),
            }
        }
    }
}

fn isqrt_i128(x: i128) -> i128 {
    if x < 2 {
        return x.max(0);
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Why a graph failed the strong-regularity definition, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotSrgWitness {
    Irregular {
        u: usize,
        v: usize,
        deg_u: usize,
        deg_v: usize,
    },
    AdjacentPairMismatch {
        u: usize,
        v: usize,
        common: usize,
        expected: usize,
    },
    NonAdjacentPairMismatch {
        u: usize,
        v: usize,
        common: usize,
        expected: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SrgOutcome {
    StronglyRegular(SrgParams),
    /// Complete, empty, or a disconnected union of cliques.
    Trivial { reason: String },
    NotStronglyRegular { witness: NotSrgWitness },
}

/// Brute-force check of the strong-regularity definition over all pairs.
pub fn srg_check(g: &Graph) -> SrgOutcome {
    let n = g.n();
    if n < 2 {
        return SrgOutcome::Trivial {
            reason: "fewer than two vertices".into(),
        };
    }
    let k = g.degree(0);
    for u in 1..n {
        let du = g.degree(u);
        if du != k {
            return SrgOutcome::NotStronglyRegular {
                witness: NotSrgWitness::Irregular {
                    u: 0,
                    v: u,
                    deg_u: k,
                    deg_v: du,
                },
            };
        }
    }
    if k == 0 {
        return SrgOutcome::Trivial {
            reason: "empty graph".into(),
        };
    }
    if k == n - 1 {
        return SrgOutcome::Trivial {
            reason: "complete graph: no non-adjacent pairs".into(),
        };
    }
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for u in 0..n {
        for v in u + 1..n {
            let c = g.common_neighbors(u, v);
            if g.has_edge(u, v) {
                match lambda {
                    None => lambda = Some(c),
                    Some(l) if l != c => {
                        return SrgOutcome::NotStronglyRegular {
                            witness: NotSrgWitness::AdjacentPairMismatch {
                                u,
                                v,
                                common: c,
                                expected: l,
                            },
                        }
                    }
                    _ => {}
                }
            } else {
                match mu {
                    None => mu = Some(c),
                    Some(m) if m != c => {
                        return SrgOutcome::NotStronglyRegular {
                            witness: NotSrgWitness::NonAdjacentPairMismatch {
                                u,
                                v,
                                common: c,
                                expected: m,
                            },
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    let lambda = lambda.expect("a regular graph with k > 0 has an edge");
    let mu = mu.expect("a regular graph with k < n-1 has a non-adjacent pair");
    if mu == 0 {
        return SrgOutcome::Trivial {
            reason: "disconnected union of complete graphs: mu = 0".into(),
        };
    }
    let params = SrgParams::new(n as u64, k as u64, lambda as u64, mu as u64);
    let (lhs, rhs) = params.fundamental_identity();
    debug_assert_eq!(lhs, rhs);
    SrgOutcome::StronglyRegular(params)
}

/// An integral spectrum proved by exact polynomial annihilation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumCertificate {
    pub n: u64,
    pub k: i64,
    /// Distinct eigenvalues, descending, starting with the valency.
    pub eigenvalues: Vec<i64>,
    /// Multiplicities aligned with `eigenvalues`; all positive integers.
    pub multiplicities: Vec<u64>,
    /// c with prod_{theta != k} (A - theta I) = c J, exactly.
    pub rank_one_scale: i64,
    /// Trace of A^2 = n k, restated for the certificate reader.
    pub trace_square: u64,
}

/// Certify that a connected regular graph has exactly the claimed distinct
/// integer eigenvalues: the product of (A - theta I) over the non-principal
/// claims must equal an exact rational multiple of the all-ones matrix, and
/// the trace system must give positive integer multiplicities.
pub fn spectrum_certify(g: &Graph, claimed: &[i64]) -> Result<SpectrumCertificate, GraphsError> {
    let n = g.n();
    if n < 2 {
        return Err(GraphsError::BadInput(
            "spectrum certification needs at least two vertices".into(),
        ));
    }
    if n > SPECTRUM_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "spectrum certification",
            got: n,
            limit: SPECTRUM_BUDGET,
        });
    }
    let k = g.regular_degree().ok_or(GraphsError::NotRegular)?;
    if !g.is_connected() {
        return Err(GraphsError::NotConnected);
    }
    let mut eigs: Vec<i64> = claimed.to_vec();
    eigs.sort_unstable_by(|a, b| b.cmp(a));
    eigs.dedup();
    if eigs.len() != claimed.len() {
        return Err(GraphsError::BadClaim("repeated eigenvalue claim".into()));
    }
    if eigs.first() != Some(&(k as i64)) {
        return Err(GraphsError::BadClaim(format!(
            "largest claimed eigenvalue must be the valency {k}"
        )));
    }
    let t = eigs.len();
    if !(2..=4).contains(&t) {
        return Err(GraphsError::BadClaim(
            "between two and four distinct eigenvalues are supported".into(),
        ));
    }

    let a2 = (t >= 3).then(|| square_matrix(g));
    let a3 = (t == 4).then(|| cube_matrix(g, a2.as_ref().unwrap()));

    // prod (x - theta) over the non-principal claims, ascending coefficients.
    let mut poly: Vec<i128> = vec![1];
    for &th in &eigs[1..] {
        let mut next = vec![0i128; poly.len() + 1];
        for (p, &c) in poly.iter().enumerate() {
            next[p + 1] += c;
            next[p] -= th as i128 * c;
        }
        poly = next;
    }
    let c_full: i128 = eigs[1..].iter().map(|&th| k as i128 - th as i128).product();
    if c_full % n as i128 != 0 {
        return Err(GraphsError::BadClaim(format!(
            "rank-one scale {c_full} is not a multiple of the vertex count {n}"
        )));
    }
    let scale = c_full / n as i128;
    for u in 0..n {
        for v in 0..n {
            let mut acc = if u == v { poly[0] } else { 0 };
            if g.has_edge(u, v) {
                acc += poly[1];
            }
            if let Some(m2) = &a2 {
                acc += poly[2] * m2[u * n + v] as i128;
            }
            if let Some(m3) = &a3 {
                acc += poly[3] * m3[u * n + v] as i128;
            }
            if acc != scale {
                return Err(GraphsError::AnnihilationFailed {
                    u,
                    v,
                    got: acc,
                    expected: scale,
                });
            }
        }
    }

    // Trace system: sum_i m_i theta_i^p = tr A^p for p < t.
    let mut traces: Vec<i128> = vec![n as i128, 0];
    if t >= 3 {
        traces.push(n as i128 * k as i128);
    }
    if t == 4 {
        let m3 = a3.as_ref().unwrap();
        traces.push((0..n).map(|u| m3[u * n + u] as i128).sum());
    }
    let mut mat: Vec<Vec<BigRational>> = Vec::new();
    for p in 0..t {
        let mut row = Vec::new();
        for &th in &eigs {
            let mut pw = BigInt::one();
            for _ in 0..p {
                pw *= BigInt::from(th);
            }
            row.push(BigRational::from_integer(pw));
        }
        row.push(BigRational::from_integer(BigInt::from(traces[p])));
        mat.push(row);
    }
    let solved = solve_rational(&mut mat, t)
        .ok_or_else(|| GraphsError::BadMultiplicities("singular trace system".into()))?;
    let mut multiplicities = Vec::with_capacity(t);
    for (idx, m) in solved.iter().enumerate() {
        if !m.denom().is_one() || m.numer().is_negative() || m.numer().is_zero() {
            return Err(GraphsError::BadMultiplicities(format!(
                "multiplicity of {} is {}, not a positive integer",
                eigs[idx], m
            )));
        }
        multiplicities.push(m.numer().to_u64().ok_or_else(|| {
            GraphsError::BadMultiplicities("multiplicity out of range".into())
        })?);
    }
    if multiplicities[0] != 1 {
        return Err(GraphsError::BadMultiplicities(
            "the valency must be a simple eigenvalue of a connected graph".into(),
        ));
    }
    debug_assert_eq!(multiplicities.iter().sum::<u64>(), n as u64);
    Ok(SpectrumCertificate {
        n: n as u64,
        k: k as i64,
        eigenvalues: eigs,
        multiplicities,
        rank_one_scale: scale as i64,
        trace_square: (n * k) as u64,
    })
}

/// A^2 as a dense i64 matrix via word-wise common-neighbor counts.
fn square_matrix(g: &Graph) -> Vec<i64> {
    let n = g.n();
    let mut m = vec![0i64; n * n];
    for u in 0..n {
        m[u * n + u] = g.degree(u) as i64;
        for v in u + 1..n {
            let c = g.common_neighbors(u, v) as i64;
            m[u * n + v] = c;
            m[v * n + u] = c;
        }
    }
    m
}

/// A^3 = A^2 * A using neighbor lists.
fn cube_matrix(g: &Graph, a2: &[i64]) -> Vec<i64> {
    let n = g.n();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut m = vec![0i64; n * n];
    for u in 0..n {
        let base = u * n;
        for v in 0..n {
            let mut s = 0i64;
            for &w in &nbrs[v] {
                s += a2[base + w];
            }
            m[base + v] = s;
        }
    }
    m
}

/// Gaussian elimination on a t x (t+1) rational system; returns the unique
/// solution if one exists.
fn solve_rational(mat: &mut [Vec<BigRational>], t: usize) -> Option<Vec<BigRational>> {
    for col in 0..t {
        let pivot = (col..t).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        let inv = mat[col][col].clone();
        for c in col..=t {
            mat[col][c] = &mat[col][c] / &inv;
        }
        for r in 0..t {
            if r != col && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..=t {
                    mat[r][c] = &mat[r][c] - &factor * &mat[col][c];
                }
            }
        }
    }
    Some((0..t).map(|r| mat[r][t].clone()).collect())
}

/// Hoffman's ratio bound -n*s/(k-s) for the size of a coclique, as an
/// exact rational, from a certified spectrum.
pub fn hoffman_bound(cert: &SpectrumCertificate) -> BigRational {
    let smallest = *cert.eigenvalues.last().unwrap();
    BigRational::new(
        BigInt::from(cert.n) * BigInt::from(-smallest),
        BigInt::from(cert.k - smallest),
    )
}

/// Outcome of a deterministic branch-and-bound coclique search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocliqueReport {
    pub target: usize,
    pub found: Option<Vec<usize>>,
    /// True when the whole search space was exhausted without success.
    pub exhaustive: bool,
    pub nodes: u64,
    pub note: Option<String>,
}

/// Search for a coclique of the given size: branch and bound on cliques of
/// the complement with a greedy-coloring upper bound, fixed vertex order,
/// and an explicit node budget.
pub fn coclique_search(g: &Graph, target: usize, node_budget: u64) -> CocliqueReport {
    let n = g.n();
    if target == 0 {
        return CocliqueReport {
            target,
            found: Some(Vec::new()),
            exhaustive: true,
            nodes: 0,
            note: None,
        };
    }
    if g.edge_count() == 0 {
        let found = (target <= n).then(|| (0..target).collect());
        return CocliqueReport {
            target,
            found,
            exhaustive: true,
            nodes: 0,
            note: Some("all vertices independent".into()),
        };
    }
    let h = g.complement();
    let mut state = CliqueSearchState {
        h: &h,
        target,
        budget: node_budget,
        nodes: 0,
        budget_hit: false,
        found: None,
    };
    let mut all = vec![!0u64; h.wpr];
    let tail = n % 64;
    if tail != 0 {
        all[h.wpr - 1] = (1u64 << tail) - 1;
    }
    if n <= (h.wpr - 1) * 64 {
        // degenerate tiny case, nothing to mask
    }
    let mut r = Vec::new();
    state.expand(&mut r, &all);
    let exhaustive = !state.budget_hit && state.found.is_none();
    if let Some(w) = &state.found {
        debug_assert!(w
            .iter()
            .enumerate()
            .all(|(i, &u)| w[i + 1..].iter().all(|&v| !g.has_edge(u, v))));
    }
    CocliqueReport {
        target,
        found: state.found,
        exhaustive,
        nodes: state.nodes,
        note: None,
    }
}

struct CliqueSearchState<'a> {
    h: &'a Graph,
    target: usize,
    budget: u64,
    nodes: u64,
    budget_hit: bool,
    found: Option<Vec<usize>>,
}

impl CliqueSearchState<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, p: &[u64]) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.budget_hit = true;
            return;
        }
        if r.len() == self.target {
            self.found = Some(r.clone());
            return;
        }
        // Greedy coloring of the candidates, ascending vertex order.
        let verts = bits_of(p);
        if verts.is_empty() {
            return;
        }
        let mut classes: Vec<Vec<u64>> = Vec::new();
        let mut colored: Vec<(usize, usize)> = Vec::with_capacity(verts.len());
        for &v in &verts {
            let row = self.h.row(v);
            let ci = match classes
                .iter()
                .position(|cm| cm.iter().zip(row).all(|(a, b)| a & b == 0))
            {
                Some(ci) => ci,
                None => {
                    classes.push(vec![0u64; self.h.wpr]);
                    classes.len() - 1
                }
            };
            classes[ci][v / 64] |= 1u64 << (v % 64);
            colored.push((v, ci + 1));
        }
        colored.sort_unstable_by_key(|&(v, c)| (c, v));
        let mut p_work = p.to_vec();
        for &(v, color) in colored.iter().rev() {
            if r.len() + color < self.target {
                break;
            }
            let row = self.h.row(v);
            let next: Vec<u64> = p_work.iter().zip(row).map(|(a, b)| a & b).collect();
            r.push(v);
            self.expand(r, &next);
            r.pop();
            if self.found.is_some() || self.budget_hit {
                return;
            }
            p_work[v / 64] &= !(1u64 << (v % 64));
        }
    }
}

fn bits_of(mask: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &word) in mask.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            out.push(wi * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

/// Count maximal cliques by size with deterministic pivoting (largest
/// candidate intersection, ties by least vertex).
pub fn clique_census(g: &Graph) -> Result<BTreeMap<usize, u64>, GraphsError> {
    let n = g.n();
    if n > CLIQUE_CENSUS_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "clique census",
            got: n,
            limit: CLIQUE_CENSUS_BUDGET,
        });
    }
    let max_deg = (0..n).map(|u| g.degree(u)).max().unwrap_or(0);
    if max_deg > CLIQUE_CENSUS_DEGREE {
        return Err(GraphsError::TooLarge {
            what: "clique census degree",
            got: max_deg,
            limit: CLIQUE_CENSUS_DEGREE,
        });
    }
    let mut census = BTreeMap::new();
    let mut p = vec![!0u64; g.wpr];
    let tail = n % 64;
    if tail != 0 {
        p[g.wpr - 1] = (1u64 << tail) - 1;
    }
    if n == 0 {
        return Ok(census);
    }
    let x = vec![0u64; g.wpr];
    bron_kerbosch(g, 0, &p, &x, &mut census);
    Ok(census)
}

fn bron_kerbosch(
    g: &Graph,
    r_len: usize,
    p: &[u64],
    x: &[u64],
    census: &mut BTreeMap<usize, u64>,
) {
    let p_empty = p.iter().all(|&w| w == 0);
    let x_empty = x.iter().all(|&w| w == 0);
    if p_empty && x_empty {
        *census.entry(r_len).or_insert(0) += 1;
        return;
    }
    if p_empty {
        return;
    }
    // Pivot: maximize |P ∩ N(u)| over u in P ∪ X, ties to the least vertex.
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    for wi in 0..g.wpr {
        let mut w = p[wi] | x[wi];
        while w != 0 {
            let u = wi * 64 + w.trailing_zeros() as usize;
            w &= w - 1;
            let cnt: usize = g
                .row(u)
                .iter()
                .zip(p)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            if best == usize::MAX || cnt > best {
                best = cnt;
                pivot = u;
            }
        }
    }
    let pivot_row = g.row(pivot);
    let branch: Vec<usize> = {
        let mut out = Vec::new();
        for wi in 0..g.wpr {
            let mut w = p[wi] & !pivot_row[wi];
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    };
    let mut p_work = p.to_vec();
    let mut x_work = x.to_vec();
    for v in branch {
        let row = g.row(v);
        let p_next: Vec<u64> = p_work.iter().zip(row).map(|(a, b)| a & b).collect();
        let x_next: Vec<u64> = x_work.iter().zip(row).map(|(a, b)| a & b).collect();
        bron_kerbosch(g, r_len + 1, &p_next, &x_next, census);
        p_work[v / 64] &= !(1u64 << (v % 64));
        x_work[v / 64] |= 1u64 << (v % 64);
    }
}

/// Count automorphisms by backtracking over color-preserving vertex maps,
/// after iterated degree/neighbor-color refinement. Capped at 40 vertices.
pub fn automorphism_count(g: &Graph, node_budget: u64) -> Result<u64, GraphsError> {
    let n = g.n();
    if n > AUTOMORPHISM_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "automorphism counting",
            got: n,
            limit: AUTOMORPHISM_BUDGET,
        });
    }
    if n == 0 {
        return Ok(1);
    }
    // Stable coloring: start from degrees, refine by neighbor color
    // multisets until the number of classes stops growing.
    let mut color: Vec<usize> = {
        let degs: BTreeSet<usize> = (0..n).map(|u| g.degree(u)).collect();
        let rank: BTreeMap<usize, usize> = degs.into_iter().enumerate().map(|(i, d)| (d, i)).collect();
        (0..n).map(|u| rank[&g.degree(u)]).collect()
    };
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for u in 0..n {
            let mut nb: Vec<usize> = g.neighbors(u).iter().map(|&v| color[v]).collect();
            nb.sort_unstable();
            sigs.push((color[u], nb));
        }
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let old = color.iter().collect::<BTreeSet<_>>().len();
        if distinct.len() == old {
            break;
        }
        let lookup: BTreeMap<&(usize, Vec<usize>), usize> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        color = sigs.iter().map(|s| lookup[s]).collect();
    }
    // Fixed mapping order: by color class, then index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&u| (color[u], u));
    let rows: Vec<u64> = (0..n)
        .map(|u| {
            let mut w = 0u64;
            for v in g.neighbors(u) {
                w |= 1 << v;
            }
            w
        })
        .collect();
    struct Ctx<'a> {
        order: &'a [usize],
        color: &'a [usize],
        rows: &'a [u64],
        n: usize,
        budget: u64,
        nodes: u64,
        count: u64,
    }
    fn rec(ctx: &mut Ctx, pos: usize, image: &mut Vec<usize>, used: u64) -> Result<(), GraphsError> {
        if pos == ctx.n {
            ctx.count += 1;
            return Ok(());
        }
        let u = ctx.order[pos];
        for w in 0..ctx.n {
            if used >> w & 1 == 1 || ctx.color[w] != ctx.color[u] {
                continue;
            }
            ctx.nodes += 1;
            if ctx.nodes > ctx.budget {
                return Err(GraphsError::BudgetExhausted { nodes: ctx.nodes });
            }
            let ok = (0..pos).all(|p| {
                let prev = ctx.order[p];
                (ctx.rows[u] >> prev & 1) == (ctx.rows[w] >> image[p] & 1)
            });
            if ok {
                image.push(w);
                rec(ctx, pos + 1, image, used | 1 << w)?;
                image.pop();
            }
        }
        Ok(())
    }
    let mut ctx = Ctx {
        order: &order,
        color: &color,
        rows: &rows,
        n,
        budget: node_budget,
        nodes: 0,
        count: 0,
    };
    let mut image = Vec::with_capacity(n);
    rec(&mut ctx, 0, &mut image, 0)?;
    Ok(ctx.count)
}

/// For every triangle, the number of common neighbors of its three
/// vertices; returned as a multiset (value -> frequency).
pub fn triple_census(g: &Graph) -> Result<BTreeMap<u64, u64>, GraphsError> {
    let n = g.n();
    if n > TRIPLE_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "triple census",
            got: n,
            limit: TRIPLE_BUDGET,
        });
    }
    let mut census = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                continue;
            }
            let uv: Vec<u64> = g.row(u).iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
            for w in bits_of(&uv) {
                if w <= v {
                    continue;
                }
                let c: u64 = uv
                    .iter()
                    .zip(g.row(w))
                    .map(|(a, b)| (a & b).count_ones() as u64)
                    .sum();
                *census.entry(c).or_insert(0) += 1;
            }
        }
    }
    Ok(census)
}

fn coord_label(v: &[Fe]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(":")
}

fn subspace_label(s: &Subspace) -> String {
    s.rows()
        .iter()
        .map(|r| coord_label(r))
        .collect::<Vec<_>>()
        .join(";")
}

/// Collinearity graph of a polar space: vertices are the isotropic points,
/// adjacent when perpendicular (joined by a totally isotropic line).
pub fn collinearity_graph(ps: &PolarSpace) -> Result<Graph, GraphsError> {
    let v = ps.num_points();
    if v > COLLINEARITY_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "collinearity graph",
            got: v,
            limit: COLLINEARITY_BUDGET,
        });
    }
    let mut g = Graph::empty(v);
    g.set_labels(
        ps.points()
            .iter()
            .map(|&a| coord_label(ps.ambient().point(a)))
            .collect(),
    );
    for i in 0..v {
        for j in i + 1..v {
            if ps.beta_pos(i, j) == 0 {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Closed-form strong-regularity parameters of the collinearity graph, for
/// rank at least two.
pub fn collinearity_srg_params(ps: &PolarSpace) -> Option<SrgParams> {
    let d = ps.rank_d();
    if d < 2 {
        return None;
    }
    let q = BigUint::from(ps.field().q());
    let one = BigUint::one();
    let theta = |pw: u32| -> BigUint {
        // (q^pw - 1)/(q - 1)
        (q.pow(pw) - &one) / (&q - &one)
    };
    let a1 = ps.q_pow_d_e_minus(1);
    let a2 = ps.q_pow_d_e_minus(2);
    let v = (&a1 + &one) * theta(d);
    let k = &q * (&a2 + &one) * theta(d - 1);
    let mu = (&a2 + &one) * theta(d - 1);
    let lambda = if d >= 3 {
        let a3 = ps.q_pow_d_e_minus(3);
        (&q - &one) + &q * &q * (&a3 + &one) * theta(d - 2)
    } else {
        &q - &one
    };
    let to = |b: BigUint| b.to_u64().expect("parameter fits in 64 bits");
    Some(SrgParams::new(to(v), to(k), to(lambda), to(mu)))
}

/// Distance-i graph on the generators (maximal totally isotropic
/// subspaces): adjacent when the meet has codimension i in each.
pub fn dual_polar_graph(ps: &PolarSpace, i: u32) -> Result<Graph, GraphsError> {
    let d = ps.rank_d();
    if i == 0 {
        let gens = ps.generators()?;
        check_dual_polar_budget(gens.len())?;
        let mut g = Graph::empty(gens.len());
        g.set_labels(gens.iter().map(subspace_label).collect());
        return Ok(g);
    }
    if i > d {
        return Err(GraphsError::BadInput(format!(
            "distance index {i} exceeds the rank {d}"
        )));
    }
    Ok(dual_polar_graphs_all(ps)?.swap_remove(i as usize - 1))
}

/// All distance graphs D^1..D^d on the generators, built in one pass.
pub fn dual_polar_graphs_all(ps: &PolarSpace) -> Result<Vec<Graph>, GraphsError> {
    let d = ps.rank_d() as usize;
    let gens = ps.generators()?;
    check_dual_polar_budget(gens.len())?;
    let f = ps.field();
    let labels: Vec<String> = gens.iter().map(subspace_label).collect();
    let mut graphs: Vec<Graph> = (0..d)
        .map(|_| {
            let mut g = Graph::empty(gens.len());
            g.set_labels(labels.clone());
            g
        })
        .collect();
    let mut stacked: Vec<Vec<Fe>> = Vec::with_capacity(2 * d);
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            stacked.clear();
            stacked.extend(gens[a].rows().iter().cloned());
            stacked.extend(gens[b].rows().iter().cloned());
            let rank = linalg::rank(f, stacked.clone());
            let i = rank - d;
            debug_assert!((1..=d).contains(&i));
            graphs[i - 1].add_edge(a, b);
        }
    }
    Ok(graphs)
}

fn check_dual_polar_budget(got: usize) -> Result<(), GraphsError> {
    if got > DUAL_POLAR_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "generator distance graph",
            got,
            limit: DUAL_POLAR_BUDGET,
        });
    }
    Ok(())
}

/// Exact eigenvalues of the generator distance graphs: entry [i][j] is the
/// eigenvalue of D^i on the j-th common eigenspace, for 0 <= i, j <= d.
/// `q` is the ambient field order (a square for the Hermitian families,
/// signalled by odd `two_e`).
pub fn dual_polar_eigenvalue_table(d: u32, two_e: u32, q: u64) -> Vec<Vec<i64>> {
    let odd = two_e % 2 == 1;
    let s = if odd {
        let r = (q as f64).sqrt().round() as u64;
        assert_eq!(r * r, q, "Hermitian ambient order must be a square");
        r
    } else {
        q
    };
    // q^{x(x + 2e - 1)/2 + y(y-1)/2} via the doubled exponent in base s.
    let power = |x: i64, y: i64| -> BigInt {
        let e2 = x * (x + two_e as i64 - 1) + y * (y - 1);
        debug_assert!(e2 >= 0);
        if odd {
            BigInt::from(s).pow(e2 as u32)
        } else {
            debug_assert_eq!(e2 % 2, 0);
            BigInt::from(q).pow((e2 / 2) as u32)
        }
    };
    let mut table = Vec::new();
    for i in 0..=d as i64 {
        let mut row = Vec::new();
        for j in 0..=d as i64 {
            let mut sum = BigInt::zero();
            let lo = 0.max(j - i);
            let hi = (d as i64 - i).min(j);
            for u in lo..=hi {
                let b1 = gaussian_binomial((d - j as u32) as u32, (d as i64 - i - u) as u32, q);
                let b2 = gaussian_binomial(j as u32, u as u32, q);
                let mut term = BigInt::from(b1) * BigInt::from(b2) * power(u + i - j, j - u);
                if (j + u) % 2 == 1 {
                    term = -term;
                }
                sum += term;
            }
            row.push(sum.to_i64().expect("eigenvalue fits in 64 bits"));
        }
        table.push(row);
    }
    table
}

/// Graph on the points off a Hermitian polar space in PG(vdim-1, q^2):
/// adjacent when the joining line is tangent (meets the space in exactly
/// one point).
pub fn nu_graph(vdim: usize, q: u32) -> Result<Graph, GraphsError> {
    if vdim < 3 {
        return Err(GraphsError::BadInput(
            "the ambient projective space needs dimension at least 2".into(),
        ));
    }
    let n = vdim - 1;
    let family = if n % 2 == 1 {
        PolarFamily::HermitianOdd
    } else {
        PolarFamily::HermitianEven
    };
    let ps = PolarSpace::new(family, n, q * q)?;
    let amb = ps.ambient();
    let f = ps.field();
    let verts: Vec<usize> = (0..amb.num_points())
        .filter(|&i| !ps.has_ambient_index(i))
        .collect();
    if verts.len() > NU_BUDGET {
        return Err(GraphsError::TooLarge {
            what: "non-isotropic unitary graph",
            got: verts.len(),
            limit: NU_BUDGET,
        });
    }
    let mut g = Graph::empty(verts.len());
    g.set_labels(verts.iter().map(|&i| coord_label(amb.point(i))).collect());
    let mut w = vec![0 as Fe; vdim];
    for a in 0..verts.len() {
        let pu = amb.point(verts[a]).clone();
        for b in a + 1..verts.len() {
            let pv = amb.point(verts[b]);
            let mut hits = 0;
            for t in f.elements() {
                for (c, slot) in w.iter_mut().enumerate() {
                    *slot = f.add(pu[c], f.mul(t, pv[c]));
                }
                if ps.is_isotropic(&w) {
                    hits += 1;
                    if hits > 1 {
                        break;
                    }
                }
            }
            if hits == 1 {
                g.add_edge(a, b);
            }
        }
    }
    Ok(g)
}

/// Closed-form strong-regularity parameters of the non-isotropic unitary
/// graph on PG(vdim-1, q^2).
pub fn nu_srg_params(vdim: usize, q: u32) -> SrgParams {
    assert!(vdim >= 3);
    let n = (vdim - 1) as u32;
    let eps: i128 = if vdim % 2 == 0 { 1 } else { -1 };
    let q = q as i128;
    let v = q.pow(n) * (q.pow(n + 1) - eps) / (q + 1);
    let k = (q.pow(n) + eps) * (q.pow(n - 1) - eps);
    let lambda = q.pow(2 * n - 3) * (q + 1) - eps * q.pow(n - 1) * (q - 1) - 2;
    let mu = q.pow(n - 2) * (q + 1) * (q.pow(n - 1) - eps);
    assert!(v > 0 && k > 0 && lambda >= 0 && mu > 0);
    SrgParams::new(v as u64, k as u64, lambda as u64, mu as u64)
}

/// Verify that a set of totally isotropic lines covers every point of the
/// space the same number m of times, then return its concurrency graph
/// (lines adjacent when they share a point) together with m.
pub fn hemisystem_line_graph(
    ps: &PolarSpace,
    lines: &[Subspace],
) -> Result<(Graph, u64), GraphsError> {
    if lines.is_empty() {
        return Err(GraphsError::BadInput("no lines given".into()));
    }
    let f = ps.field();
    let mut seen = BTreeSet::new();
    for l in lines {
        if l.vdim() != 2 || l.ambient() != ps.ambient().n() {
            return Err(GraphsError::BadInput(
                "line system must consist of lines of the ambient space".into(),
            ));
        }
        let r = l.rows();
        if !ps.is_isotropic(&r[0]) || !ps.is_isotropic(&r[1]) || ps.beta(&r[0], &r[1]) != 0 {
            return Err(GraphsError::BadInput(
                "line system contains a non-isotropic line".into(),
            ));
        }
        if !seen.insert(l.clone()) {
            return Err(GraphsError::BadInput("repeated line".into()));
        }
    }
    let mut m: Option<usize> = None;
    for &pt in ps.points() {
        let p = ps.ambient().point(pt);
        let c = lines.iter().filter(|l| l.contains_point(f, p)).count();
        match m {
            None => m = Some(c),
            Some(expected) if expected != c => {
                return Err(GraphsError::NotRegularSystem {
                    point: pt,
                    count: c,
                    expected,
                });
            }
            _ => {}
        }
    }
    let m = m.unwrap() as u64;
    let mut g = Graph::empty(lines.len());
    g.set_labels(lines.iter().map(subspace_label).collect());
    let mut stacked: Vec<Vec<Fe>> = Vec::with_capacity(4);
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            stacked.clear();
            stacked.extend(lines[a].rows().iter().cloned());
            stacked.extend(lines[b].rows().iter().cloned());
            if linalg::rank(f, stacked.clone()) == 3 {
                g.add_edge(a, b);
            }
        }
    }
    Ok((g, m))
}

/// Parameters of the line graph of an m-regular line system on the
/// rank-two Hermitian space of order q^2.
pub fn regular_system_line_graph_params(q: u64, m: u64) -> SrgParams {
    let q = q as i128;
    let m = m as i128;
    let v = (q.pow(3) + 1) * (q + 1 - m);
    let k = (q * q + 1) * (q - m);
    let lambda = q - 1 - m;
    let mu = q * q + 1 - m * (q + 1);
    assert!(v > 0 && k >= 0 && lambda >= 0 && mu >= 0);
    SrgParams::new(v as u64, k as u64, lambda as u64, mu as u64)
}

/// Graph on the vectors of F_q^dim, adjacent when their difference lies in
/// one of the given projective directions.
pub fn linear_representation_graph(
    f: &Field,
    dim: usize,
    directions: &[Vec<Fe>],
) -> Result<Graph, GraphsError> {
    let q = f.q() as usize;
    let nv = q
        .checked_pow(dim as u32)
        .filter(|&nv| nv <= LINEAR_REP_BUDGET)
        .ok_or(GraphsError::TooLarge {
            what: "linear representation graph",
            got: usize::MAX,
            limit: LINEAR_REP_BUDGET,
        })?;
    let mut dirset: BTreeSet<Vec<Fe>> = BTreeSet::new();
    for d in directions {
        if d.len() != dim || d.iter().all(|&c| c == 0) {
            return Err(GraphsError::BadInput(
                "directions must be nonzero vectors of the ambient dimension".into(),
            ));
        }
        dirset.insert(normalize(f, d));
    }
    let vectors: Vec<Vec<Fe>> = (0..nv)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let digit = (idx % q) as Fe;
                    idx /= q;
                    digit
                })
                .collect()
        })
        .collect();
    let mut g = Graph::empty(nv);
    g.set_labels(vectors.iter().map(|v| coord_label(v)).collect());
    let mut diff = vec![0 as Fe; dim];
    for a in 0..nv {
        for b in a + 1..nv {
            for c in 0..dim {
                diff[c] = f.sub(vectors[a][c], vectors[b][c]);
            }
            if dirset.contains(&normalize(f, &diff)) {
                g.add_edge(a, b);
            }
        }
    }
    Ok(g)
}
