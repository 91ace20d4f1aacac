//! Projective geometry PG(n,q): canonical points and subspaces, counting
//! formulas, classical group orders, the Klein correspondence between lines
//! of PG(3,q) and points of a hyperbolic quadric in PG(5,q), and field
//! reduction from PG(r-1,q^n) down to PG(rn-1,q).

use std::collections::HashMap;

use num::BigUint;
use thiserror::Error;

use crate::gf::{Fe, Field, GfError, SubfieldExpansion};
use crate::linalg;

/// Safety cap on eager point enumeration.
const POINT_BUDGET: u64 = 2_000_000;
/// Safety cap on eager subspace enumeration.
const SUBSPACE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum ProjError {
    #[error("enumeration budget exceeded: {what} has {size} elements (cap {cap})")]
    BudgetExceeded { what: String, size: u64, cap: u64 },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("expected a line (projective dimension 1), got projective dimension {0}")]
    NotALine(i64),
    #[error("point is not on the Klein quadric")]
    NotOnKleinQuadric,
    #[error("unsupported group family/rank combination: {0}")]
    UnsupportedFamily(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// theta_r(q) = (q^{r+1}-1)/(q-1): points of PG(r,q); theta_{-1} = 0.
pub fn theta(r: i64, q: u64) -> BigUint {
    if r < 0 {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::from(0u32);
    let mut pw = BigUint::from(1u32);
    for _ in 0..=r {
        acc += &pw;
        pw *= &q;
    }
    acc
}

/// Gaussian binomial [r choose h]_q: number of h-dimensional vector
/// subspaces of an r-dimensional GF(q)-space; 0 when h > r.
pub fn gaussian_binomial(r: u32, h: u32, q: u64) -> BigUint {
    if h > r {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..h {
        num *= q.pow(r - i) - 1u32;
        den *= q.pow(i + 1) - 1u32;
    }
    num / den
}

/// Canonical projective representative: first nonzero coordinate scaled to 1.
pub fn normalize(f: &Field, v: &[Fe]) -> Vec<Fe> {
    match v.iter().position(|&c| c != 0) {
        None => v.to_vec(),
        Some(i) => {
            let inv = f.inv(v[i]).expect("nonzero coordinate");
            v.iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

/// PG(n,q) with all points eagerly enumerated in ascending lexicographic
/// order of their normalized coordinate vectors.
pub struct ProjSpace {
    field: Field,
    n: usize,
    points: Vec<Vec<Fe>>,
    index: HashMap<Vec<Fe>, usize>,
}

impl ProjSpace {
    pub fn new(field: Field, n: usize) -> Result<ProjSpace, ProjError> {
        let count = theta(n as i64, field.q() as u64);
        if count > BigUint::from(POINT_BUDGET) {
            return Err(ProjError::BudgetExceeded {
                what: format!("PG({},{})", n, field.q()),
                size: u64::MAX,
                cap: POINT_BUDGET,
            });
        }
        let q = field.q();
        let mut points = Vec::new();
        // ascending lex = first-nonzero position from the right end inward
        for fnz in (0..=n).rev() {
            let tail_len = n - fnz;
            let mut tail = vec![0u32; tail_len];
            loop {
                let mut v = vec![0u32; n + 1];
                v[fnz] = 1;
                v[fnz + 1..].copy_from_slice(&tail);
                points.push(v);
                // odometer with the leftmost digit most significant
                let mut i = tail_len;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    tail[i] += 1;
                    if tail[i] < q {
                        break;
                    }
                    tail[i] = 0;
                }
                if tail.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Ok(ProjSpace {
            field,
            n,
            points,
            index,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<Fe>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Vec<Fe> {
        &self.points[i]
    }

    /// Index of a (not necessarily normalized) point.
    pub fn point_index(&self, v: &[Fe]) -> Option<usize> {
        self.index.get(&normalize(&self.field, v)).copied()
    }

    /// All subspaces of the given projective dimension, ascending lex order
    /// on their echelon matrices flattened row-major.
    pub fn enumerate_subspaces(&self, projdim: usize) -> Result<Vec<Subspace>, ProjError> {
        let k = projdim + 1;
        let m = self.n + 1;
        let count = gaussian_binomial(m as u32, k as u32, self.field.q() as u64);
        if count > BigUint::from(SUBSPACE_BUDGET) {
            return Err(ProjError::BudgetExceeded {
                what: format!("subspaces of projdim {} in PG({},{})", projdim, self.n, self.field.q()),
                size: u64::MAX,
                cap: SUBSPACE_BUDGET,
            });
        }
        let mut out = Vec::new();
        let mut pivots = (0..k).collect::<Vec<usize>>();
        loop {
            emit_rref_with_pivots(&self.field, k, m, &pivots, &mut out);
            // next k-combination of 0..m in lex order
            let mut i = k;
            loop {
                if i == 0 {
                    pivots.clear();
                    break;
                }
                i -= 1;
                if pivots[i] < m - (k - i) {
                    pivots[i] += 1;
                    for j in i + 1..k {
                        pivots[j] = pivots[j - 1] + 1;
                    }
                    break;
                }
            }
            if pivots.is_empty() {
                break;
            }
        }
        out.sort();
        debug_assert_eq!(BigUint::from(out.len() as u64), count);
        Ok(out)
    }
}

/// All reduced echelon matrices with the given pivot columns.
fn emit_rref_with_pivots(
    f: &Field,
    k: usize,
    m: usize,
    pivots: &[usize],
    out: &mut Vec<Subspace>,
) {
    let q = f.q();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    // free positions: (row i, col j) with j > pivots[i] and j not a pivot
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in (p + 1)..m {
            if !is_pivot[j] {
                free.push((i, j));
            }
        }
    }
    let nfree = free.len();
    let mut vals = vec![0u32; nfree];
    loop {
        let mut rows = vec![vec![0u32; m]; k];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i][p] = 1;
        }
        for (t, &(i, j)) in free.iter().enumerate() {
            rows[i][j] = vals[t];
        }
        out.push(Subspace { n: m - 1, rows });
        let mut t = nfree;
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            vals[t] += 1;
            if vals[t] < q {
                break;
            }
            vals[t] = 0;
        }
    }
}

/// A projective subspace in canonical form: its row space is stored as the
/// unique reduced row echelon basis (k rows of length n+1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Fe>>,
}

impl Subspace {
    pub fn from_rows(f: &Field, n: usize, rows: &[Vec<Fe>]) -> Subspace {
        for r in rows {
            assert_eq!(r.len(), n + 1, "row length must be n+1");
        }
        Subspace {
            n,
            rows: linalg::rref(f, rows.to_vec()),
        }
    }

    /// The empty subspace (projective dimension -1).
    pub fn empty(n: usize) -> Subspace {
        Subspace { n, rows: Vec::new() }
    }

    /// Ambient projective dimension n.
    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Vector-space dimension k of the row space.
    pub fn vdim(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension k-1 (so -1 for the empty subspace).
    pub fn projdim(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    /// The canonical echelon basis rows.
    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn span(&self, f: &Field, other: &Subspace) -> Subspace {
        assert_eq!(self.n, other.n, "ambient mismatch");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace {
            n: self.n,
            rows: linalg::rref(f, rows),
        }
    }

    /// Intersection of row spaces, computed through kernel duality:
    /// meet = ((A-kernel) + (B-kernel))-kernel.
    pub fn meet(&self, f: &Field, other: &Subspace) -> Subspace {
        assert_eq!(self.n, other.n, "ambient mismatch");
        let m = self.n + 1;
        let ka = linalg::kernel_basis_n(f, self.rows.clone(), m);
        let kb = linalg::kernel_basis_n(f, other.rows.clone(), m);
        let mut stacked = ka;
        stacked.extend(kb);
        Subspace {
            n: self.n,
            rows: linalg::kernel_basis_n(f, stacked, m),
        }
    }

    pub fn contains_point(&self, f: &Field, v: &[Fe]) -> bool {
        assert_eq!(v.len(), self.n + 1, "point length must be n+1");
        // reduce v against the echelon basis; membership iff remainder is 0
        let mut r = v.to_vec();
        for row in &self.rows {
            let p = row.iter().position(|&c| c != 0).unwrap();
            if r[p] != 0 {
                let factor = r[p];
                for c in 0..r.len() {
                    let t = f.mul(factor, row[c]);
                    r[c] = f.sub(r[c], t);
                }
            }
        }
        r.iter().all(|&c| c == 0)
    }

    pub fn contains_sub(&self, f: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_point(f, r))
    }

    /// All projective points of the subspace, normalized, ascending lex.
    /// One coefficient vector per point: first nonzero coefficient is 1.
    pub fn points(&self, f: &Field) -> Vec<Vec<Fe>> {
        let k = self.rows.len();
        let q = f.q();
        let mut out = std::collections::BTreeSet::new();
        for lead in 0..k {
            let tail_len = k - lead - 1;
            let mut tail = vec![0u32; tail_len];
            loop {
                let mut v = self.rows[lead].clone();
                for (t, row) in tail.iter().zip(&self.rows[lead + 1..]) {
                    if *t != 0 {
                        for (slot, &rc) in v.iter_mut().zip(row) {
                            *slot = f.add(*slot, f.mul(*t, rc));
                        }
                    }
                }
                out.insert(normalize(f, &v));
                let mut i = tail_len;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    tail[i] += 1;
                    if tail[i] < q {
                        break;
                    }
                    tail[i] = 0;
                }
                if tail.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        out.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// classical group orders

/// Group families with exact order formulas. For the unitary families the
/// parameter q is the subfield order: the matrices live over GF(q^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    GL,
    SL,
    PGL,
    PSL,
    PGammaL,
    Sp,
    GU,
    SU,
    PGU,
    GOPlus,
    GOMinus,
    GOParabolic,
}

pub fn group_order(family: GroupFamily, r: u32, q: u32) -> Result<BigUint, ProjError> {
    use GroupFamily::*;
    let qb = BigUint::from(q);
    let one = BigUint::from(1u32);
    let gl = |r: u32| -> BigUint {
        let mut acc = qb.pow(r * (r - 1) / 2);
        for j in 1..=r {
            acc *= qb.pow(j) - &one;
        }
        acc
    };
    let q_minus_1 = &qb - &one;
    match family {
        GL => Ok(gl(r)),
        SL => Ok(gl(r) / &q_minus_1),
        PGL => Ok(gl(r) / &q_minus_1),
        PSL => {
            let g = gcd(r as u64, q as u64 - 1);
            Ok(gl(r) / &q_minus_1 / BigUint::from(g))
        }
        PGammaL => {
            let (_, e) = factor_prime_power(q)
                .ok_or_else(|| ProjError::BadParameters(format!("{q} is not a prime power")))?;
            Ok(gl(r) / &q_minus_1 * BigUint::from(e))
        }
        Sp => {
            if r % 2 != 0 || r == 0 {
                return Err(ProjError::UnsupportedFamily(format!("Sp({r},{q})")));
            }
            let m = r / 2;
            let mut acc = qb.pow(m * m);
            for i in 1..=m {
                acc *= qb.pow(2 * i) - &one;
            }
            Ok(acc)
        }
        GU | SU | PGU => {
            // |GU(r,q)| = q^{r(r-1)/2} prod (q^i - (-1)^i)
            let mut acc = qb.pow(r * (r - 1) / 2);
            for i in 1..=r {
                if i % 2 == 0 {
                    acc *= qb.pow(i) - &one;
                } else {
                    acc *= qb.pow(i) + &one;
                }
            }
            if family == GU {
                Ok(acc)
            } else {
                Ok(acc / (&qb + &one))
            }
        }
        GOPlus | GOMinus => {
            if r % 2 != 0 || r < 2 {
                return Err(ProjError::UnsupportedFamily(format!("GO^eps({r},{q})")));
            }
            let m = r / 2;
            let mut acc = BigUint::from(2u32) * qb.pow(m * (m - 1));
            acc *= if family == GOPlus {
                qb.pow(m) - &one
            } else {
                qb.pow(m) + &one
            };
            for i in 1..m {
                acc *= qb.pow(2 * i) - &one;
            }
            Ok(acc)
        }
        GOParabolic => {
            if r % 2 == 0 || r < 3 {
                return Err(ProjError::UnsupportedFamily(format!("GO({r},{q})")));
            }
            let m = (r - 1) / 2;
            let mut acc = qb.pow(m * m);
            for i in 1..=m {
                acc *= qb.pow(2 * i) - &one;
            }
            // odd q has the central -1: full group is twice the even-q one
            if q % 2 == 1 {
                acc *= BigUint::from(2u32);
            }
            Ok(acc)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    for p in 2..=q {
        if q % p == 0 {
            let mut e = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            return if r == 1 { Some((p, e)) } else { None };
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Klein correspondence

/// Pluecker coordinates (p01, p02, p03, p12, p13, p23) of a line of PG(3,q),
/// normalized to the canonical projective representative.
pub fn klein_map(f: &Field, line: &Subspace) -> Result<Vec<Fe>, ProjError> {
    if line.projdim() != 1 {
        return Err(ProjError::NotALine(line.projdim()));
    }
    if line.ambient() != 3 {
        return Err(ProjError::AmbientMismatch(line.ambient(), 3));
    }
    let x = &line.rows()[0];
    let y = &line.rows()[1];
    let pl = |i: usize, j: usize| f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]));
    let p = vec![pl(0, 1), pl(0, 2), pl(0, 3), pl(1, 2), pl(1, 3), pl(2, 3)];
    Ok(normalize(f, &p))
}

/// Value of the Klein quadratic form X0 X5 - X1 X4 + X2 X3 at a point.
pub fn klein_quadric_value(f: &Field, p: &[Fe]) -> Fe {
    let a = f.mul(p[0], p[5]);
    let b = f.mul(p[1], p[4]);
    let c = f.mul(p[2], p[3]);
    f.add(f.sub(a, b), c)
}

/// Polarization of the Klein form:
/// B(u,v) = u0 v5 + u5 v0 - u1 v4 - u4 v1 + u2 v3 + u3 v2.
pub fn klein_bilinear(f: &Field, u: &[Fe], v: &[Fe]) -> Fe {
    let mut acc = f.add(f.mul(u[0], v[5]), f.mul(u[5], v[0]));
    acc = f.sub(acc, f.mul(u[1], v[4]));
    acc = f.sub(acc, f.mul(u[4], v[1]));
    acc = f.add(acc, f.mul(u[2], v[3]));
    f.add(acc, f.mul(u[3], v[2]))
}

/// Inverse of the Klein map: rebuilds the rank-2 antisymmetric matrix whose
/// entries are the Pluecker coordinates and returns its column space.
pub fn klein_inverse(f: &Field, p: &[Fe]) -> Result<Subspace, ProjError> {
    if p.len() != 6 || klein_quadric_value(f, p) != 0 || p.iter().all(|&c| c == 0) {
        return Err(ProjError::NotOnKleinQuadric);
    }
    let mut m = vec![vec![0u32; 4]; 4];
    let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (t, &(i, j)) in idx.iter().enumerate() {
        m[i][j] = p[t];
        m[j][i] = f.neg(p[t]);
    }
    let cols = linalg::transpose(&m);
    let rows = linalg::rref(f, cols);
    if rows.len() != 2 {
        return Err(ProjError::NotOnKleinQuadric);
    }
    Ok(Subspace { n: 3, rows })
}

// ---------------------------------------------------------------------------
// field reduction

/// The field-reduction map PG(r-1, q^n) -> PG(rn-1, q): a point with
/// coordinates over GF(q^n) becomes the (n-1)-subspace of its GF(q)-scalar
/// multiples, written over GF(q) coordinates. Coordinate k of the big space
/// occupies columns k*n .. (k+1)*n of the small space.
pub struct FieldReduction {
    big: Field,
    small: Field,
    r: usize,
    n: usize,
    expansion: SubfieldExpansion,
    /// subfield-of-big element -> index in the canonical small field
    to_small: HashMap<Fe, Fe>,
}

impl FieldReduction {
    pub fn new(big: &Field, sub_q: u32, r: usize) -> Result<FieldReduction, ProjError> {
        let expansion = SubfieldExpansion::new(big, sub_q)?;
        let n = expansion.n();
        let (p, _) = factor_prime_power(sub_q)
            .ok_or_else(|| ProjError::BadParameters(format!("{sub_q} is not a prime power")))?;
        let m = {
            let mut m = 0u32;
            let mut acc = 1u64;
            while acc < sub_q as u64 {
                acc *= p as u64;
                m += 1;
            }
            m.max(1)
        };
        let small = Field::new(p, m)?;
        let embed = big.embedding_from(&small)?;
        let to_small = embed
            .iter()
            .enumerate()
            .map(|(s, &b)| (b, s as Fe))
            .collect();
        Ok(FieldReduction {
            big: big.clone(),
            small,
            r,
            n,
            expansion,
            to_small,
        })
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    /// The canonical GF(q) used for the reduced coordinates.
    pub fn small(&self) -> &Field {
        &self.small
    }

    /// Extension degree n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Big-side vector dimension r.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Expands one big-field vector into a length r*n small-field vector.
    fn expand_vector(&self, v: &[Fe]) -> Vec<Fe> {
        let mut out = Vec::with_capacity(self.r * self.n);
        for &c in v {
            for coord in self.expansion.expand(&self.big, c) {
                out.push(*self.to_small.get(&coord).expect("coordinate is in the subfield"));
            }
        }
        out
    }

    /// Image of a point: the (n-1)-subspace of PG(rn-1, q).
    pub fn map_point(&self, v: &[Fe]) -> Result<Subspace, ProjError> {
        if v.len() != self.r {
            return Err(ProjError::AmbientMismatch(v.len(), self.r));
        }
        let xbar = if self.big.e() == 1 { 0 } else { self.big.p() };
        let mut rows = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let s = self.big.pow(xbar, j as i64);
            let scaled: Vec<Fe> = v.iter().map(|&c| self.big.mul(s, c)).collect();
            rows.push(self.expand_vector(&scaled));
        }
        Ok(Subspace::from_rows(&self.small, self.r * self.n - 1, &rows))
    }

    /// Image of a subspace: the span of the images of its basis points.
    pub fn map_subspace(&self, s: &Subspace) -> Result<Subspace, ProjError> {
        if s.ambient() != self.r - 1 {
            return Err(ProjError::AmbientMismatch(s.ambient(), self.r - 1));
        }
        let mut acc = Subspace::empty(self.r * self.n - 1);
        for row in s.rows() {
            let img = self.map_point(row)?;
            acc = acc.span(&self.small, &img);
        }
        Ok(acc)
    }
}
