//! Exact association-scheme layer on the generators of a polar space of
//! rank at most three: the meet-dimension relations with their fully
//! verified intersection numbers, integer eigenvalue matrices with exact
//! multiplicities, rational minimal idempotents with Krein parameters,
//! design vectors with dual degree sets, containment incidence matrices,
//! and transfer of regular systems between nested spaces (lifting to the
//! quadric or Hermitian space one dimension up, restricting to a hyperplane
//! section one dimension down, and switching a generator family of a split
//! quadric across a fixed flag).
//!
//! All spectral data is certified twice over: eigenvalues are recovered by
//! an integer root scan over the intersection-matrix algebra and verified
//! against every intersection matrix at once, while the idempotents are
//! evaluated through the Lagrange interpolation polynomial in the faithful
//! regular representation, cross-checked coefficient by coefficient against
//! the eigenbasis formula, materialised as dense rational matrices, and
//! re-tested densely as eigenvectors of the concurrency relation. Design
//! membership is decided by a projector census (positive semidefiniteness
//! makes the quadratic form vanish exactly on the kernel) and can be
//! confirmed densely through `Idempotents::image_is_zero`.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::constructions::{split_generator_families, verify_regular_system, ConstructionsError};
use crate::gf::Fe;
use crate::graphs::Graph;
use crate::polar::{PolarError, PolarFamily, PolarSpace};
use crate::projspace::{ProjError, Subspace};

/// Generator cap for the dense scheme algebra (rational n-by-n matrices).
pub const SCHEME_GENERATOR_CAP: usize = 1_500;
/// Largest polar rank carried by the scheme layer.
pub const SCHEME_RANK_CAP: u32 = 3;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{got} generators exceed the dense scheme cap of {cap}")]
    Budget { got: usize, cap: usize },
    #[error("rank {d} exceeds the supported scheme rank of 3")]
    RankUnsupported { d: u32 },
    #[error("the concurrency relation has a repeated eigenvalue {value}")]
    RepeatedEigenvalue { value: i64 },
    #[error("non-integral spectral data: {0}")]
    NonIntegral(String),
    #[error("algebra identity violated: {0}")]
    AlgebraViolation(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("no {direction} step in the nesting chain from family {family}")]
    DirectionIncompatible { family: String, direction: String },
    #[error("member {index} is not in the generator list")]
    MemberNotListed { index: usize },
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Constructions(#[from] ConstructionsError),
}

type Result<T> = std::result::Result<T, SchemeError>;

fn bad(msg: impl Into<String>) -> SchemeError {
    SchemeError::BadParameters(msg.into())
}

fn violated(msg: impl Into<String>) -> SchemeError {
    SchemeError::AlgebraViolation(msg.into())
}

fn big(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

// ------------------------------------------------------------------ scheme

/// A symmetric association scheme on the generators of a polar space:
/// two generators are in relation i exactly when their intersection has
/// codimension i in each of them. Relation 0 is the identity. Every
/// intersection number p(i,j,k) has been verified over all vertex pairs.
pub struct Scheme {
    n: usize,
    classes: usize,
    rel: Vec<u8>,
    valencies: Vec<u64>,
    p_nums: Vec<u64>,
}

impl Scheme {
    /// Number of non-identity relations (the polar rank).
    pub fn classes(&self) -> usize {
        self.classes
    }

    /// Number of vertices (generators).
    pub fn size(&self) -> usize {
        self.n
    }

    /// The relation index of a vertex pair, 0 on the diagonal.
    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    /// Number of vertices in relation i to any fixed vertex.
    pub fn valency(&self, i: usize) -> u64 {
        self.valencies[i]
    }

    /// The intersection number p^k_{ij}: for any pair (x, y) in relation k,
    /// the number of vertices z with (x, z) in relation i and (z, y) in
    /// relation j. Constant by the verified closure property.
    pub fn p(&self, i: usize, j: usize, k: usize) -> u64 {
        let nc = self.classes + 1;
        self.p_nums[(i * nc + j) * nc + k]
    }
}

fn and_popcount(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

/// Builds the meet-dimension scheme on the generators of `ps` and returns
/// it together with the generator list indexing its vertices.
///
/// The relation of a pair is rank minus the vector dimension of the meet,
/// computed by exact row reduction for every pair. The intersection numbers
/// are read off one representative pair per relation and then re-verified
/// over every pair of vertices through bit-row intersections, so the
/// closure property of the algebra is checked exhaustively rather than
/// assumed. Fails on spaces of rank above three or with more than
/// `SCHEME_GENERATOR_CAP` generators.
pub fn scheme_from_polar(ps: &PolarSpace) -> Result<(Scheme, Vec<Subspace>)> {
    let d = ps.rank_d();
    if d > SCHEME_RANK_CAP {
        return Err(SchemeError::RankUnsupported { d });
    }
    let expected = ps.count_ti_formula(d);
    if expected > BigUint::from(SCHEME_GENERATOR_CAP as u64) {
        let got = u64::try_from(&expected).map(|v| v as usize).unwrap_or(usize::MAX);
        return Err(SchemeError::Budget {
            got,
            cap: SCHEME_GENERATOR_CAP,
        });
    }
    let gens = ps.generators()?;
    let n = gens.len();
    if BigUint::from(n as u64) != expected {
        return Err(violated(format!(
            "enumerated {n} generators but the counting formula gives {expected}"
        )));
    }
    if n == 0 {
        return Err(bad("the space has no generators"));
    }

    let f = ps.field();
    let nc = d as usize + 1;
    let mut rel = vec![0u8; n * n];
    for x in 0..n {
        for y in x + 1..n {
            let meet = gens[x].meet(f, &gens[y]);
            let r = d as usize - meet.vdim();
            if r == 0 {
                return Err(violated(format!("generators {x} and {y} coincide")));
            }
            rel[x * n + y] = r as u8;
            rel[y * n + x] = r as u8;
        }
    }

    // Each relation must be regular: the class distribution of every row
    // equals that of row zero.
    let mut valencies = vec![0u64; nc];
    for y in 0..n {
        valencies[rel[y] as usize] += 1;
    }
    for (i, &v) in valencies.iter().enumerate().skip(1) {
        if v == 0 {
            return Err(violated(format!("relation {i} never occurs")));
        }
    }
    for x in 1..n {
        let mut cnt = vec![0u64; nc];
        for y in 0..n {
            cnt[rel[x * n + y] as usize] += 1;
        }
        if cnt != valencies {
            return Err(violated(format!("vertex {x} has an irregular relation row")));
        }
    }

    // Bit rows per relation for exhaustive closure verification.
    let wpr = n.div_ceil(64);
    let mut bits = vec![0u64; nc * n * wpr];
    for x in 0..n {
        for y in 0..n {
            let i = rel[x * n + y] as usize;
            bits[(i * n + x) * wpr + y / 64] |= 1u64 << (y % 64);
        }
    }
    let row = |i: usize, x: usize| &bits[(i * n + x) * wpr..(i * n + x) * wpr + wpr];

    // Intersection numbers from one representative pair per relation.
    let mut p_nums = vec![0u64; nc * nc * nc];
    for k in 0..nc {
        let y = (0..n)
            .find(|&y| rel[y] as usize == k)
            .ok_or_else(|| violated(format!("relation {k} has no representative")))?;
        for i in 0..nc {
            for j in 0..nc {
                p_nums[(i * nc + j) * nc + k] = and_popcount(row(i, 0), row(j, y));
            }
        }
    }

    // Closure over every pair: the counts must match the representative.
    for x in 0..n {
        for y in x..n {
            let k = rel[x * n + y] as usize;
            for i in 0..nc {
                for j in 0..nc {
                    let cnt = and_popcount(row(i, x), row(j, y));
                    if cnt != p_nums[(i * nc + j) * nc + k] {
                        return Err(violated(format!(
                            "pair ({x},{y}) in relation {k} sees {cnt} two-step walks \
                             of type ({i},{j}), expected {}",
                            p_nums[(i * nc + j) * nc + k]
                        )));
                    }
                }
            }
        }
    }

    // Arithmetic identities of the intersection algebra.
    for k in 0..nc {
        for i in 0..nc {
            for j in 0..nc {
                let p = p_nums[(i * nc + j) * nc + k];
                if p_nums[(j * nc + i) * nc + k] != p {
                    return Err(violated("intersection numbers are not symmetric"));
                }
                if i == 0 && p != u64::from(j == k) {
                    return Err(violated("the identity relation multiplies wrongly"));
                }
                if valencies[k] * p != valencies[i] * p_nums[(k * nc + j) * nc + i] {
                    return Err(violated("the triangle double count fails"));
                }
            }
            let s: u64 = (0..nc).map(|j| p_nums[(i * nc + j) * nc + k]).sum();
            if s != valencies[i] {
                return Err(violated("an intersection row does not sum to its valency"));
            }
        }
    }

    Ok((
        Scheme {
            n,
            classes: d as usize,
            rel,
            valencies,
            p_nums,
        },
        gens,
    ))
}

/// The graph of one non-identity relation of the scheme.
pub fn relation_graph(sch: &Scheme, i: usize) -> Result<Graph> {
    if i == 0 || i > sch.classes {
        return Err(bad(format!(
            "relation index must lie in 1..={}, got {i}",
            sch.classes
        )));
    }
    let n = sch.n;
    let mut g = Graph::empty(n);
    for x in 0..n {
        for y in x + 1..n {
            if sch.rel[x * n + y] as usize == i {
                g.add_edge(x, y);
            }
        }
    }
    Ok(g)
}

// ------------------------------------------------------------- eigenvalues

/// The exact common eigensystem of a scheme: row j of `p_matrix` lists the
/// eigenvalues of the relation matrices A_0..A_d on the j-th common
/// eigenspace (row 0 lists the valencies), and `multiplicities[j]` is the
/// dimension of that eigenspace.
pub struct SchemeSpectrum {
    pub p_matrix: Vec<Vec<i64>>,
    pub multiplicities: Vec<u64>,
}

impl SchemeSpectrum {
    /// The distinct eigenvalues of relation graph i, descending; the first
    /// entry is its valency.
    pub fn distinct_eigenvalues(&self, i: usize) -> Vec<i64> {
        let mut out: Vec<i64> = self.p_matrix.iter().map(|r| r[i]).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }
}

fn to_i64(v: &BigRational) -> Result<i64> {
    if !v.is_integer() {
        return Err(SchemeError::NonIntegral(format!("{v} is not an integer")));
    }
    i64::try_from(&v.to_integer()).map_err(|_| SchemeError::Overflow("eigenvalue conversion"))
}

/// Basis of the right kernel of a square rational matrix, by exact
/// Gauss-Jordan elimination.
fn rational_kernel(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for cc in 0..cols {
            m[r][cc] = &m[r][cc] / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for cc in 0..cols {
                    let t = &factor * &m[r][cc];
                    m[i][cc] = &m[i][cc] - &t;
                }
            }
        }
        pivot_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivots: BTreeSet<usize> = pivot_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for fc in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[fc] = BigRational::one();
        for (row, &pc) in pivot_of_row.iter().enumerate() {
            v[pc] = -m[row][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Recovers the full eigenvalue matrix and the multiplicities of a scheme
/// from its intersection numbers alone.
///
/// The concurrency intersection matrix acts on eigenvalue vectors: for each
/// common eigenspace, the vector of eigenvalues of A_0..A_d is a kernel
/// vector of that matrix shifted by the concurrency eigenvalue. An integer
/// scan over the Perron interval finds all shifts with non-trivial kernel;
/// each kernel must be one-dimensional, the normalised vector must be
/// integral and is re-verified against every intersection matrix, and the
/// product of all shifted matrices must annihilate exactly. Multiplicities
/// are solved as exact rationals and must come out as positive integers
/// that satisfy both orthogonality sum rules.
pub fn scheme_spectrum(sch: &Scheme) -> Result<SchemeSpectrum> {
    let nc = sch.classes + 1;
    let n = sch.n as u64;
    let k1 = sch.valency(1) as i64;

    // m1[j][k] = p^k_{1j}: the eigenvalue vector u satisfies m1 u = theta_1 u.
    let m1: Vec<Vec<i64>> = (0..nc)
        .map(|j| (0..nc).map(|k| sch.p(1, j, k) as i64).collect())
        .collect();

    let mut strata: Vec<(i64, Vec<i64>)> = Vec::new();
    for lam in -k1..=k1 {
        let shifted: Vec<Vec<BigRational>> = (0..nc)
            .map(|j| {
                (0..nc)
                    .map(|k| {
                        let v = m1[j][k] - if j == k { lam } else { 0 };
                        BigRational::from_integer(BigInt::from(v))
                    })
                    .collect()
            })
            .collect();
        let kernel = rational_kernel(shifted);
        if kernel.is_empty() {
            continue;
        }
        if kernel.len() > 1 {
            return Err(SchemeError::RepeatedEigenvalue { value: lam });
        }
        let v = &kernel[0];
        if v[0].is_zero() {
            return Err(violated(
                "an eigenvalue vector has vanishing identity coordinate",
            ));
        }
        let u: Vec<i64> = v
            .iter()
            .map(|c| to_i64(&(c / &v[0])))
            .collect::<Result<_>>()?;
        for (i, &ui) in u.iter().enumerate() {
            if ui.unsigned_abs() > sch.valency(i) {
                return Err(violated(format!(
                    "eigenvalue {ui} of relation {i} exceeds its valency"
                )));
            }
        }
        // The vector must diagonalise every intersection matrix at once.
        for i in 0..nc {
            for j in 0..nc {
                let lhs: i128 = (0..nc).map(|k| sch.p(i, j, k) as i128 * u[k] as i128).sum();
                if lhs != u[i] as i128 * u[j] as i128 {
                    return Err(violated(format!(
                        "the candidate eigenvalue vector for shift {lam} fails \
                         the intersection matrix of relation {i}"
                    )));
                }
            }
        }
        strata.push((lam, u));
    }
    if strata.len() != nc {
        return Err(SchemeError::NonIntegral(format!(
            "found {} integer concurrency eigenvalues, need {nc}",
            strata.len()
        )));
    }
    strata.sort_by(|a, b| b.0.cmp(&a.0));
    if strata[0].0 != k1 {
        return Err(violated("the Perron eigenvalue is not the valency"));
    }
    let valency_row: Vec<i64> = (0..nc).map(|i| sch.valency(i) as i64).collect();
    if strata[0].1 != valency_row {
        return Err(violated("the Perron stratum does not carry the valencies"));
    }

    // Exact annihilation of the concurrency intersection matrix.
    let mut prod: Vec<i128> = (0..nc * nc).map(|t| i128::from(t / nc == t % nc)).collect();
    for &(lam, _) in &strata {
        let mut next = vec![0i128; nc * nc];
        for r in 0..nc {
            for c in 0..nc {
                let mut acc = 0i128;
                for t in 0..nc {
                    let m_entry = m1[t][c] as i128 - if t == c { lam as i128 } else { 0 };
                    acc = prod[r * nc + t]
                        .checked_mul(m_entry)
                        .and_then(|v| acc.checked_add(v))
                        .ok_or(SchemeError::Overflow("annihilation product"))?;
                }
                next[r * nc + c] = acc;
            }
        }
        prod = next;
    }
    if prod.iter().any(|&v| v != 0) {
        return Err(violated(
            "the shifted concurrency matrices do not annihilate",
        ));
    }

    // Multiplicities: m_j = n / sum_i theta_ij^2 / k_i, a positive integer.
    let mut multiplicities = Vec::with_capacity(nc);
    for (_, u) in &strata {
        let mut denom = BigRational::zero();
        for (i, &ui) in u.iter().enumerate() {
            let sq = BigRational::from_integer(BigInt::from(ui) * BigInt::from(ui));
            denom += sq / big(sch.valency(i));
        }
        let mj = big(n) / denom;
        if !mj.is_integer() || !mj.is_positive() {
            return Err(SchemeError::NonIntegral(format!(
                "multiplicity {mj} is not a positive integer"
            )));
        }
        let mj =
            u64::try_from(&mj.to_integer()).map_err(|_| SchemeError::Overflow("multiplicity"))?;
        multiplicities.push(mj);
    }
    if multiplicities.iter().sum::<u64>() != n {
        return Err(violated("multiplicities do not sum to the vertex count"));
    }
    for i in 0..nc {
        let s1: i128 = strata
            .iter()
            .zip(&multiplicities)
            .map(|((_, u), &m)| u[i] as i128 * m as i128)
            .sum();
        let s2: i128 = strata
            .iter()
            .zip(&multiplicities)
            .map(|((_, u), &m)| u[i] as i128 * u[i] as i128 * m as i128)
            .sum();
        if i >= 1 && s1 != 0 {
            return Err(violated("weighted eigenvalue columns do not sum to zero"));
        }
        if s2 != n as i128 * sch.valency(i) as i128 {
            return Err(violated("the weighted square sum misses n times the valency"));
        }
    }

    Ok(SchemeSpectrum {
        p_matrix: strata.into_iter().map(|(_, u)| u).collect(),
        multiplicities,
    })
}

/// Krein parameters from the spectrum alone: q^k_{ij} scaled by the
/// multiplicities through the dual triple-product formula. All entries of
/// a genuine scheme are non-negative; callers assert that separately.
pub fn krein_parameters(sch: &Scheme, sp: &SchemeSpectrum) -> Vec<Vec<Vec<BigRational>>> {
    let nc = sch.classes + 1;
    let n = big(sch.n as u64);
    let mut out = vec![vec![vec![BigRational::zero(); nc]; nc]; nc];
    for i in 0..nc {
        for j in 0..nc {
            for k in 0..nc {
                let mut acc = BigRational::zero();
                for u in 0..nc {
                    let t = BigInt::from(sp.p_matrix[i][u])
                        * BigInt::from(sp.p_matrix[j][u])
                        * BigInt::from(sp.p_matrix[k][u]);
                    let ku = BigInt::from(sch.valency(u));
                    acc += BigRational::new(t, &ku * &ku);
                }
                let scale = big(sp.multiplicities[i]) * big(sp.multiplicities[j]) / n.clone();
                out[i][j][k] = scale * acc;
            }
        }
    }
    out
}

// ------------------------------------------------------------- idempotents

/// A dense rational matrix with a common denominator, stored as integer
/// numerators.
pub struct RationalMatrix {
    n: usize,
    num: Vec<i64>,
    den: i64,
}

impl RationalMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.num[r * self.n + c]),
            BigInt::from(self.den),
        )
    }
}

/// The minimal idempotents of a scheme: exact rational projectors onto the
/// common eigenspaces, with the eigenvalue matrix, the multiplicities, the
/// coefficients of each projector over the relation matrices, and the full
/// Krein table (computed here from the projector coefficients, a different
/// route than `krein_parameters`).
pub struct Idempotents {
    pub p_matrix: Vec<Vec<i64>>,
    pub multiplicities: Vec<u64>,
    /// a_coeffs[j][s] is the coefficient of the class-s relation matrix in
    /// the j-th projector.
    pub a_coeffs: Vec<Vec<BigRational>>,
    /// Dense materialisations, indexed by stratum.
    pub matrices: Vec<RationalMatrix>,
    /// krein[i][j][k] = q^k_{ij}, all verified non-negative.
    pub krein: Vec<Vec<Vec<BigRational>>>,
    n: usize,
    classes: usize,
    rel: Vec<u8>,
    class_nums: Vec<Vec<i64>>,
}

impl Idempotents {
    /// Whether the j-th projector annihilates the 0/1 vector `chi`,
    /// decided by exact dense evaluation of every coordinate of the image.
    pub fn image_is_zero(&self, j: usize, chi: &[bool]) -> bool {
        assert!(j <= self.classes, "stratum index out of range");
        assert_eq!(chi.len(), self.n, "vector length mismatch");
        let members: Vec<usize> = (0..self.n).filter(|&y| chi[y]).collect();
        let nc = self.classes + 1;
        let nums = &self.class_nums[j];
        for x in 0..self.n {
            let mut cnt = vec![0i128; nc];
            for &y in &members {
                cnt[self.rel[x * self.n + y] as usize] += 1;
            }
            let coord: i128 = (0..nc).map(|s| nums[s] as i128 * cnt[s]).sum();
            if coord != 0 {
                return false;
            }
        }
        true
    }
}

fn checked_small_mul(a: &[i128], b: &[i128], nc: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; nc * nc];
    for r in 0..nc {
        for c in 0..nc {
            let mut acc = 0i128;
            for t in 0..nc {
                acc = a[r * nc + t]
                    .checked_mul(b[t * nc + c])
                    .and_then(|v| acc.checked_add(v))
                    .ok_or(SchemeError::Overflow("regular representation product"))?;
            }
            out[r * nc + c] = acc;
        }
    }
    Ok(out)
}

/// Computes the minimal idempotents by evaluating the Lagrange
/// interpolation polynomials of the concurrency eigenvalues inside the
/// faithful regular representation of the intersection algebra.
///
/// Reading off the first column of each evaluated polynomial gives the
/// exact coefficients of the projector over the relation matrices; these
/// must agree with the eigenbasis formula m_j theta / (n k), the shifted
/// product over all eigenvalues must annihilate, the projectors must
/// multiply as an orthogonal resolution of the identity (verified in the
/// representation, and densely for schemes with at most 150 vertices), and
/// every dense matrix is re-checked as an exact eigenvector family of the
/// concurrency relation. The Krein table is assembled from the projector
/// coefficients and each entry is verified non-negative.
pub fn minimal_idempotents(sch: &Scheme) -> Result<Idempotents> {
    let sp = scheme_spectrum(sch)?;
    let nc = sch.classes + 1;
    let n = sch.n;
    let lambdas: Vec<i64> = (0..nc).map(|j| sp.p_matrix[j][1]).collect();
    for a in 0..nc {
        for b in a + 1..nc {
            if lambdas[a] == lambdas[b] {
                return Err(SchemeError::RepeatedEigenvalue { value: lambdas[a] });
            }
        }
    }

    // Left-multiplication matrix of the concurrency relation in the basis
    // of relation matrices: column j holds the expansion of A_1 A_j.
    let m1: Vec<i128> = {
        let mut m = vec![0i128; nc * nc];
        for k in 0..nc {
            for j in 0..nc {
                m[k * nc + j] = sch.p(1, j, k) as i128;
            }
        }
        m
    };
    let shift = |lam: i64| -> Vec<i128> {
        let mut s = m1.clone();
        for t in 0..nc {
            s[t * nc + t] -= lam as i128;
        }
        s
    };

    let mut a_coeffs: Vec<Vec<BigRational>> = Vec::with_capacity(nc);
    let mut lagrange_nums: Vec<Vec<i128>> = Vec::with_capacity(nc);
    let mut lagrange_dens: Vec<i128> = Vec::with_capacity(nc);
    for j in 0..nc {
        let mut prod: Vec<i128> = (0..nc * nc).map(|t| i128::from(t / nc == t % nc)).collect();
        for (l, &lam) in lambdas.iter().enumerate() {
            if l != j {
                prod = checked_small_mul(&prod, &shift(lam), nc)?;
            }
        }
        // Full annihilation: one more shift kills the product.
        let ann = checked_small_mul(&prod, &shift(lambdas[j]), nc)?;
        if ann.iter().any(|&v| v != 0) {
            return Err(violated(
                "the concurrency matrix is not annihilated by its eigenvalues",
            ));
        }
        let den: i128 = lambdas
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != j)
            .map(|(_, &lam)| lambdas[j] as i128 - lam as i128)
            .product();
        // Column 0 of the evaluated polynomial is its expansion over the
        // relation matrices.
        let coeffs: Vec<BigRational> = (0..nc)
            .map(|k| BigRational::new(BigInt::from(prod[k * nc]), BigInt::from(den)))
            .collect();
        // Cross-check against the eigenbasis formula.
        for (k, c) in coeffs.iter().enumerate() {
            let formula = BigRational::new(
                BigInt::from(sp.multiplicities[j]) * BigInt::from(sp.p_matrix[j][k]),
                BigInt::from(n as u64) * BigInt::from(sch.valency(k)),
            );
            if *c != formula {
                return Err(violated(format!(
                    "projector {j} disagrees between the interpolation and \
                     eigenbasis routes on relation {k}"
                )));
            }
        }
        a_coeffs.push(coeffs);
        lagrange_nums.push(prod);
        lagrange_dens.push(den);
    }

    // Resolution of the identity and orthogonality, in the representation:
    // N_j N_l = [j == l] den_l N_j exactly.
    for j in 0..nc {
        for l in 0..nc {
            let prod = checked_small_mul(&lagrange_nums[j], &lagrange_nums[l], nc)?;
            for t in 0..nc * nc {
                let rhs = if j == l {
                    lagrange_dens[l]
                        .checked_mul(lagrange_nums[j][t])
                        .ok_or(SchemeError::Overflow("orthogonality check"))?
                } else {
                    0
                };
                if prod[t] != rhs {
                    return Err(violated(format!(
                        "projectors {j} and {l} do not multiply orthogonally"
                    )));
                }
            }
        }
    }
    for k in 0..nc {
        let total: BigRational = (0..nc).map(|j| a_coeffs[j][k].clone()).sum();
        let expect = if k == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        if total != expect {
            return Err(violated("the projectors do not resolve the identity"));
        }
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n as u64));
        if a_coeffs[0][k] != inv_n {
            return Err(violated("the principal projector is not all-ones over n"));
        }
    }
    for j in 0..nc {
        let trace = big(n as u64) * a_coeffs[j][0].clone();
        if trace != big(sp.multiplicities[j]) {
            return Err(violated("a projector trace misses its multiplicity"));
        }
    }

    // Dense materialisation with one denominator per stratum.
    let rel = sch.rel.clone();
    let mut matrices = Vec::with_capacity(nc);
    let mut class_nums: Vec<Vec<i64>> = Vec::with_capacity(nc);
    for j in 0..nc {
        let mut den_big = BigInt::one();
        for c in &a_coeffs[j] {
            den_big = den_big.lcm(c.denom());
        }
        let den =
            i64::try_from(&den_big).map_err(|_| SchemeError::Overflow("projector denominator"))?;
        let nums: Vec<i64> = a_coeffs[j]
            .iter()
            .map(|c| {
                let scaled = c * BigRational::from_integer(den_big.clone());
                to_i64(&scaled)
            })
            .collect::<Result<_>>()?;
        let mut num = vec![0i64; n * n];
        for x in 0..n {
            for y in 0..n {
                num[x * n + y] = nums[rel[x * n + y] as usize];
            }
        }
        matrices.push(RationalMatrix { n, num, den });
        class_nums.push(nums);
    }

    // Dense re-check: every column of the j-th matrix is an eigenvector of
    // the concurrency relation with eigenvalue theta_1j. The shared
    // denominator cancels, so this is an exact integer identity.
    let neighbors: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| rel[x * n + y] == 1)
                .map(|y| y as u32)
                .collect()
        })
        .collect();
    let mut acc = vec![0i128; n];
    for j in 0..nc {
        let num = &matrices[j].num;
        let lam = sp.p_matrix[j][1] as i128;
        for x in 0..n {
            acc.iter_mut().for_each(|v| *v = 0);
            for &z in &neighbors[x] {
                let base = z as usize * n;
                for (a, &v) in acc.iter_mut().zip(&num[base..base + n]) {
                    *a += v as i128;
                }
            }
            for y in 0..n {
                if acc[y] != lam * num[x * n + y] as i128 {
                    return Err(violated(format!(
                        "dense projector {j} fails the eigenvector identity at \
                         row {x}, column {y}"
                    )));
                }
            }
        }
    }

    // For small schemes, also multiply the dense matrices outright.
    if n <= 150 {
        for j in 0..nc {
            for l in 0..nc {
                let (a, b) = (&matrices[j], &matrices[l]);
                for r in 0..n {
                    for c in 0..n {
                        let mut s = 0i128;
                        for t in 0..n {
                            s += a.num[r * n + t] as i128 * b.num[t * n + c] as i128;
                        }
                        let rhs = if j == l {
                            b.den as i128 * a.num[r * n + c] as i128
                        } else {
                            0
                        };
                        if s != rhs {
                            return Err(violated(format!(
                                "dense projectors {j} and {l} fail orthogonality"
                            )));
                        }
                    }
                }
            }
        }
    }

    // Krein table through the projector coefficients: the entrywise product
    // of two projectors is constant on classes, and expanding it back over
    // the idempotent basis displays q^k_{ij} directly.
    let mut krein = vec![vec![vec![BigRational::zero(); nc]; nc]; nc];
    for i in 0..nc {
        for j in 0..nc {
            for k in 0..nc {
                let mut acc = BigRational::zero();
                for s in 0..nc {
                    let t = &a_coeffs[i][s] * &a_coeffs[j][s];
                    acc += t * BigRational::from_integer(BigInt::from(sp.p_matrix[k][s]));
                }
                let q = big(n as u64) * acc;
                if q.is_negative() {
                    return Err(violated(format!(
                        "Krein parameter ({i},{j};{k}) is negative: {q}"
                    )));
                }
                krein[i][j][k] = q;
            }
        }
    }
    for i in 0..nc {
        for j in 0..nc {
            let expect = if i == j {
                big(sp.multiplicities[i])
            } else {
                BigRational::zero()
            };
            if krein[i][j][0] != expect {
                return Err(violated("the identity column of the Krein table is wrong"));
            }
        }
    }

    Ok(Idempotents {
        p_matrix: sp.p_matrix,
        multiplicities: sp.multiplicities,
        a_coeffs,
        matrices,
        krein,
        n,
        classes: sch.classes,
        rel,
        class_nums,
    })
}

// ----------------------------------------------------------------- designs

/// The characteristic vector of a vertex subset together with its dual
/// degree set: the strata whose projectors do not annihilate it.
pub struct DesignVector {
    pub chi: Vec<bool>,
    pub size: usize,
    pub dual_degree: BTreeSet<usize>,
}

impl DesignVector {
    /// A k-design avoids the first k strata entirely.
    pub fn is_design(&self, k: usize) -> bool {
        self.dual_degree.iter().all(|&i| i > k)
    }

    /// An r-antidesign lives inside the first r strata.
    pub fn is_antidesign(&self, r: usize) -> bool {
        self.dual_degree.iter().all(|&i| i <= r)
    }
}

/// Computes the dual degree set of a vertex subset by the projector census:
/// the quadratic form of each projector on the characteristic vector is a
/// weighted sum of the pair counts per relation, and because projectors are
/// positive semidefinite it vanishes exactly when the projector annihilates
/// the vector.
pub fn design_vector(sch: &Scheme, sp: &SchemeSpectrum, members: &[usize]) -> Result<DesignVector> {
    let n = sch.n;
    let nc = sch.classes + 1;
    let mut chi = vec![false; n];
    for &x in members {
        if x >= n {
            return Err(bad(format!("vertex {x} out of range")));
        }
        if chi[x] {
            return Err(bad(format!("vertex {x} listed twice")));
        }
        chi[x] = true;
    }

    // Ordered pair counts per relation.
    let mut census = vec![0u64; nc];
    for &a in members {
        for &b in members {
            census[sch.rel[a * n + b] as usize] += 1;
        }
    }

    let mut dual_degree = BTreeSet::new();
    for j in 1..nc {
        let mut acc = BigRational::zero();
        for s in 0..nc {
            let t = BigRational::new(
                BigInt::from(census[s]) * BigInt::from(sp.p_matrix[j][s]),
                BigInt::from(sch.valency(s)),
            );
            acc += t;
        }
        let val = big(sp.multiplicities[j]) / big(n as u64) * acc;
        if !val.is_zero() {
            dual_degree.insert(j);
        }
    }

    Ok(DesignVector {
        chi,
        size: members.len(),
        dual_degree,
    })
}

/// Translates subspaces into vertex indices of the generator list.
pub fn member_indices(gens: &[Subspace], members: &[Subspace]) -> Result<Vec<usize>> {
    let map: BTreeMap<&Subspace, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    members
        .iter()
        .enumerate()
        .map(|(index, m)| {
            map.get(m)
                .copied()
                .ok_or(SchemeError::MemberNotListed { index })
        })
        .collect()
}

/// The set of generators through a fixed totally isotropic flag is an
/// antidesign whose dual degree set lies inside the first r strata, r being
/// the vector dimension of the flag. Builds that set, checks its size
/// against the closed counting formula, verifies the antidesign property,
/// and returns the design vector.
pub fn antidesign_witness(
    sch: &Scheme,
    sp: &SchemeSpectrum,
    ps: &PolarSpace,
    gens: &[Subspace],
    sigma: &Subspace,
) -> Result<DesignVector> {
    let d = sch.classes;
    let r = sigma.vdim();
    if r == 0 || r >= d {
        return Err(bad(format!("the flag dimension must lie in 1..={}", d - 1)));
    }
    if sigma.ambient() != ps.ambient().n() {
        return Err(bad("the flag lives in a different ambient space"));
    }
    if !totally_isotropic(ps, sigma) {
        return Err(bad("the flag is not totally isotropic"));
    }
    let f = ps.field();
    let members: Vec<usize> = (0..gens.len())
        .filter(|&c| gens[c].contains_sub(f, sigma))
        .collect();
    let expected = generators_through_count(ps, r as u32);
    if BigUint::from(members.len() as u64) != expected {
        return Err(violated(format!(
            "{} generators contain the flag, but the counting formula gives {expected}",
            members.len()
        )));
    }
    let dv = design_vector(sch, sp, &members)?;
    if !dv.is_antidesign(r) {
        return Err(violated(
            "the generators through the flag do not vanish beyond its strata",
        ));
    }
    Ok(dv)
}

// --------------------------------------------------------------- incidence

/// Number of generators containing a fixed totally isotropic k-space.
pub fn generators_through_count(ps: &PolarSpace, k: u32) -> BigUint {
    let d = ps.rank_d();
    let mut acc = BigUint::one();
    for i in k + 1..=d {
        acc *= ps.q_pow_d_e_minus(i) + 1u32;
    }
    acc
}

/// The 0/1 containment matrix between all totally isotropic k-spaces
/// (rows) and the generators (columns). Every row sums to the same
/// verified constant.
pub struct IncidenceMatrix {
    pub k: u32,
    pub row_spaces: Vec<Subspace>,
    pub row_sum: u64,
    cols: usize,
    wpr: usize,
    bits: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.wpr + c / 64] >> (c % 64) & 1 == 1
    }
}

/// Builds the containment incidence between t.i. k-spaces and generators
/// by enumerating the k-spaces inside each generator, then verifies that
/// every row count matches the closed residual-space formula.
pub fn incidence_matrix(ps: &PolarSpace, gens: &[Subspace], k: u32) -> Result<IncidenceMatrix> {
    let d = ps.rank_d();
    if d > SCHEME_RANK_CAP {
        return Err(SchemeError::RankUnsupported { d });
    }
    if k == 0 || k > d {
        return Err(bad(format!("k must lie in 1..={d}")));
    }
    let f = ps.field();
    let nn = ps.ambient().n();
    let row_spaces = ps.enumerate_ti(k)?;
    let index: BTreeMap<&Subspace, usize> = row_spaces
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let cols = gens.len();
    let wpr = cols.div_ceil(64);
    let mut bits = vec![0u64; row_spaces.len() * wpr];
    let mut counts = vec![0u64; row_spaces.len()];
    for (c, gen) in gens.iter().enumerate() {
        if gen.vdim() != d as usize {
            return Err(bad(format!("column {c} is not a generator")));
        }
        let inside: Vec<Subspace> = if k == d {
            vec![gen.clone()]
        } else if k == 1 {
            gen.points(f)
                .iter()
                .map(|p| Subspace::from_rows(f, nn, std::slice::from_ref(p)))
                .collect()
        } else {
            // Only k = 2 inside a rank-3 generator remains.
            ps.ti_lines_in(gen)?
        };
        for sb in &inside {
            let r = *index
                .get(sb)
                .ok_or_else(|| violated("a subspace of a generator is missing from the rows"))?;
            bits[r * wpr + c / 64] |= 1u64 << (c % 64);
            counts[r] += 1;
        }
    }
    let expected = generators_through_count(ps, k);
    let row_sum = u64::try_from(&expected).map_err(|_| SchemeError::Overflow("row sum"))?;
    for (r, &cnt) in counts.iter().enumerate() {
        if cnt != row_sum {
            return Err(violated(format!(
                "row {r} carries {cnt} generators, the counting formula gives {row_sum}"
            )));
        }
    }
    Ok(IncidenceMatrix {
        k,
        row_spaces,
        row_sum,
        cols,
        wpr,
        bits,
    })
}

// ------------------------------------------------------------ chain lifts

/// A verified m-regular system: every totally isotropic (k-1)-space of
/// `space` lies on exactly m members.
pub struct RegularSystem {
    pub space: PolarSpace,
    pub members: Vec<Subspace>,
    pub k: u32,
    pub m: u64,
}

impl RegularSystem {
    /// Verifies regularity from scratch and wraps the result.
    pub fn verified(space: PolarSpace, members: Vec<Subspace>, k: u32) -> Result<RegularSystem> {
        let m = verify_regular_system(&space, &members, k)?;
        Ok(RegularSystem { space, members, k, m })
    }
}

/// Direction of a step along the nesting chain of polar spaces sharing a
/// generator fibration: `Ambient` passes to the space one dimension up,
/// `Section` restricts to a hyperplane section one dimension down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainDirection {
    Ambient,
    Section,
}

fn chain_factor(ps: &PolarSpace) -> u64 {
    let two_e = ps.two_e();
    if two_e % 2 == 1 {
        (ps.form().s as u64).pow(two_e - 2) + 1
    } else {
        (ps.field().q() as u64).pow((two_e - 2) / 2) + 1
    }
}

fn chain_target(family: PolarFamily) -> Option<PolarFamily> {
    match family {
        PolarFamily::Parabolic => Some(PolarFamily::Hyperbolic),
        PolarFamily::Elliptic => Some(PolarFamily::Parabolic),
        PolarFamily::HermitianEven => Some(PolarFamily::HermitianOdd),
        _ => None,
    }
}

fn pad_form_matrix(mat: &[Vec<Fe>], tail: Fe) -> Vec<Vec<Fe>> {
    let m = mat.len();
    let mut out = vec![vec![0u32; m + 1]; m + 1];
    for (r, row) in mat.iter().enumerate() {
        out[r][..m].copy_from_slice(row);
    }
    out[m][m] = tail;
    out
}

/// Transfers a verified regular system one step along the nesting chain.
///
/// Going up (`Ambient`): the generators of the next space each contain
/// exactly one generator of the current space, so collecting all top
/// generators through the members multiplies the regularity by the fibre
/// size (two for a parabolic quadric inside a split one, q+1 for an
/// elliptic quadric inside a parabolic one, sqrt(q)+1 for a Hermitian
/// space of even projective dimension inside the odd one). Going down
/// (`Section`): the members inside a non-degenerate hyperplane section of
/// the right type form a system of the section with the same multiplied
/// regularity, taken with respect to flags one dimension lower, so the
/// flag dimension must be at least two. Both directions re-verify the
/// resulting system from scratch and check the predicted multiplier.
pub fn chain_lift(rs: &RegularSystem, dir: ChainDirection) -> Result<RegularSystem> {
    let family = rs.space.family();
    let Some(target) = chain_target(family) else {
        return Err(SchemeError::DirectionIncompatible {
            family: format!("{family:?}"),
            direction: match dir {
                ChainDirection::Ambient => "upward".into(),
                ChainDirection::Section => "downward".into(),
            },
        });
    };
    let factor = chain_factor(&rs.space);
    let d = rs.space.rank_d();
    let field = rs.space.field().clone();
    let kind = rs.space.form().kind;
    let proj_n = rs.space.ambient().n();

    match dir {
        ChainDirection::Ambient => {
            let matrix = &rs.space.form().matrix;
            let big_ps = match family {
                PolarFamily::Elliptic | PolarFamily::HermitianEven => {
                    let padded = pad_form_matrix(matrix, 1);
                    PolarSpace::from_form(field, proj_n + 1, kind, &padded)?
                }
                PolarFamily::Parabolic => {
                    // The diagonal tail decides the type of the extended
                    // quadric; scan the field for a scalar splitting it.
                    let mut found = None;
                    for c in 1..field.q() {
                        let padded = pad_form_matrix(matrix, c);
                        if let Ok(cand) =
                            PolarSpace::from_form(field.clone(), proj_n + 1, kind, &padded)
                        {
                            if cand.family() == PolarFamily::Hyperbolic {
                                found = Some(cand);
                                break;
                            }
                        }
                    }
                    found.ok_or_else(|| {
                        violated("no diagonal extension splits the parabolic quadric")
                    })?
                }
                _ => unreachable!("gated by chain_target"),
            };
            if big_ps.family() != target || big_ps.rank_d() != d + 1 {
                return Err(violated(format!(
                    "the extended space is {} of rank {}, expected the chain neighbour",
                    big_ps.descriptor(),
                    big_ps.rank_d()
                )));
            }
            let bf = big_ps.field();
            let bn = big_ps.ambient().n();
            let mut members = Vec::with_capacity(rs.members.len() * factor as usize);
            let mut seen = BTreeSet::new();
            for (idx, mem) in rs.members.iter().enumerate() {
                let rows: Vec<Vec<Fe>> = mem
                    .rows()
                    .iter()
                    .map(|r| {
                        let mut v = r.clone();
                        v.push(0);
                        v
                    })
                    .collect();
                let emb = Subspace::from_rows(bf, bn, &rows);
                if emb.vdim() != mem.vdim() {
                    return Err(violated(format!("member {idx} degenerates when embedded")));
                }
                let exts = big_ps.ti_extensions(&emb)?;
                if exts.len() as u64 != factor {
                    return Err(violated(format!(
                        "member {idx} lies in {} top generators, the fibre size is {factor}",
                        exts.len()
                    )));
                }
                for e in exts {
                    if !seen.insert(e.clone()) {
                        return Err(violated(
                            "two members lift into the same top generator",
                        ));
                    }
                    members.push(e);
                }
            }
            let m = verify_regular_system(&big_ps, &members, rs.k)?;
            if m != rs.m * factor {
                return Err(violated(format!(
                    "the lifted system is {m}-regular, predicted {}",
                    rs.m * factor
                )));
            }
            Ok(RegularSystem {
                space: big_ps,
                members,
                k: rs.k,
                m,
            })
        }
        ChainDirection::Section => {
            if rs.k < 2 {
                return Err(bad(
                    "restriction lowers the flag dimension, so the system must be \
                     regular with respect to flags of vector dimension at least two",
                ));
            }
            let matrix = &rs.space.form().matrix;
            let m_dim = matrix.len();
            let mut found = None;
            for drop in (0..m_dim).rev() {
                let sub: Vec<Vec<Fe>> = matrix
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != drop)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != drop)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                if let Ok(cand) = PolarSpace::from_form(field.clone(), proj_n - 1, kind, &sub) {
                    if cand.family() == target && cand.rank_d() == d {
                        found = Some((drop, cand));
                        break;
                    }
                }
            }
            let Some((drop, small)) = found else {
                return Err(bad(
                    "no coordinate hyperplane cuts the space in its chain neighbour",
                ));
            };
            let sf = small.field();
            let sn = small.ambient().n();
            let mut members = Vec::new();
            let mut seen = BTreeSet::new();
            for (idx, mem) in rs.members.iter().enumerate() {
                if !mem.rows().iter().all(|r| r[drop] == 0) {
                    continue;
                }
                let rows: Vec<Vec<Fe>> = mem
                    .rows()
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != drop)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let cut = Subspace::from_rows(sf, sn, &rows);
                if cut.vdim() != mem.vdim() {
                    return Err(violated(format!("member {idx} degenerates when cut")));
                }
                if !seen.insert(cut.clone()) {
                    return Err(violated("two members cut to the same generator"));
                }
                members.push(cut);
            }
            let m = verify_regular_system(&small, &members, rs.k - 1)?;
            if m != rs.m * factor {
                return Err(violated(format!(
                    "the restricted system is {m}-regular, predicted {}",
                    rs.m * factor
                )));
            }
            Ok(RegularSystem {
                space: small,
                members,
                k: rs.k - 1,
                m,
            })
        }
    }
}

// --------------------------------------------------------------- switching

fn totally_isotropic(ps: &PolarSpace, sub: &Subspace) -> bool {
    let f = ps.field();
    let rows = sub.rows();
    sub.points(f).iter().all(|p| ps.is_isotropic(p))
        && rows
            .iter()
            .enumerate()
            .all(|(i, u)| rows.iter().skip(i + 1).all(|v| ps.beta(u, v) == 0))
}

/// Exchanges, between the two generator families of a split quadric, the
/// generators through a fixed totally singular flag of vector dimension s
/// with 1 <= s <= d-2. The result keeps the half-system regularity of one
/// family with respect to flags of vector dimension up to d-s-1 (returned
/// as the second component) but in general loses it one dimension higher.
pub fn hyperbolic_switch(ps: &PolarSpace, sigma: &Subspace) -> Result<(Vec<Subspace>, u32)> {
    if ps.family() != PolarFamily::Hyperbolic {
        return Err(bad("family switching needs a split quadric"));
    }
    let d = ps.rank_d();
    if sigma.ambient() != ps.ambient().n() {
        return Err(bad("the flag lives in a different ambient space"));
    }
    let s = sigma.vdim() as u32;
    if d < 3 || s < 1 || s > d - 2 {
        return Err(bad(format!(
            "the switching flag needs vector dimension between 1 and rank minus 2, \
             got {s} at rank {d}"
        )));
    }
    if !totally_isotropic(ps, sigma) {
        return Err(bad("the switching flag is not totally singular"));
    }
    let (greeks, latins) = split_generator_families(ps)?;
    let f = ps.field();
    let z1: usize = greeks.iter().filter(|g| g.contains_sub(f, sigma)).count();
    let z2: usize = latins.iter().filter(|l| l.contains_sub(f, sigma)).count();
    if z1 != z2 || z1 == 0 {
        return Err(violated(format!(
            "the families meet the flag in {z1} and {z2} generators"
        )));
    }
    let mut switched: Vec<Subspace> = greeks
        .iter()
        .filter(|g| !g.contains_sub(f, sigma))
        .cloned()
        .collect();
    switched.extend(latins.iter().filter(|l| l.contains_sub(f, sigma)).cloned());
    Ok((switched, d - s - 1))
}

