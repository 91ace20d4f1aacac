//! Finite fields GF(p^e) with exact table-based arithmetic.
//!
//! Elements are integer indices: the element with polynomial-basis digits
//! `(c_0, ..., c_{e-1})` (little-endian over Z_p) has index `sum c_i p^i`.
//! The modulus is the lexicographically least monic irreducible of degree e,
//! coefficient tuples compared low-degree-first (c_0 most significant), so
//! every field here is reproducible from `(p, e)` alone.

use thiserror::Error;

/// A field element, stored as its integer index in `0..q`.
pub type Fe = u32;

/// Default bound on the field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Add-table fast path is built for orders up to this bound.
const ADD_TABLE_MAX: u64 = 1024;

#[derive(Debug, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u32),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("field order {p}^{e} exceeds the bound {bound}")]
    TooLarge { p: u32, e: u32, bound: u64 },
    #[error("modulus must be monic of degree {expected}: got {got:?}")]
    BadModulus { expected: u32, got: Vec<u32> },
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("no subfield of order {0} in a field of order {1}")]
    NoSuchSubfield(u32, u32),
    #[error("{0} is not an odd prime within the supported range")]
    BadEllipticPrime(u64),
    #[error("incompatible characteristic: {0} vs {1}")]
    CharMismatch(u32, u32),
}

/// GF(p^e): immutable after construction; all operations are pure.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1), doubled so products need no modulo
    exp: Vec<u32>,
    /// log[x] for x in 1..q; log[0] is a sentinel
    log: Vec<u32>,
    primitive: Fe,
    add_table: Option<Vec<u32>>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.e, self.modulus)
    }
}

impl Field {
    /// Builds GF(p^e) with the deterministic lex-least modulus.
    pub fn new(p: u32, e: u32) -> Result<Field, GfError> {
        check_size(p, e)?;
        let modulus = lex_least_irreducible(p, e);
        Self::build(p, e, modulus)
    }

    /// Builds GF(p^e) with a caller-supplied modulus (little-endian, monic).
    pub fn with_modulus(p: u32, e: u32, modulus: &[u32]) -> Result<Field, GfError> {
        check_size(p, e)?;
        let m: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        if m.len() != e as usize + 1 || m[e as usize] != 1 {
            return Err(GfError::BadModulus {
                expected: e,
                got: modulus.to_vec(),
            });
        }
        if e >= 1 && !is_irreducible(&m, p) {
            return Err(GfError::ReducibleModulus(m));
        }
        Self::build(p, e, m)
    }

    /// Convenience constructor for the prime field Z_p.
    pub fn prime(p: u32) -> Result<Field, GfError> {
        Self::new(p, 1)
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Result<Field, GfError> {
        let q = p.pow(e);
        let ctx = RawCtx {
            p,
            e: e as usize,
            modulus: &modulus,
        };
        // Least primitive element: order q-1 checked against the prime
        // factorization of q-1.
        let factors = prime_factors((q - 1) as u64);
        let mut primitive = 1u32; // correct for q = 2
        if q > 2 {
            primitive = (2..q)
                .find(|&g| {
                    factors
                        .iter()
                        .all(|&r| ctx.pow(g, ((q - 1) as u64 / r) as u64) != 1)
                })
                .expect("multiplicative group of a finite field is cyclic");
        }
        let ord = (q - 1) as usize;
        let mut exp = vec![1u32; 2 * ord.max(1)];
        let mut log = vec![u32::MAX; q as usize];
        let mut acc = 1u32;
        for (i, slot) in exp.iter_mut().enumerate().take(ord) {
            *slot = acc;
            if log[acc as usize] == u32::MAX {
                log[acc as usize] = i as u32;
            }
            acc = ctx.mul(acc, primitive);
        }
        if acc != 1 {
            // primitive order must come back to 1 after q-1 steps
            return Err(GfError::ReducibleModulus(modulus));
        }
        for i in 0..ord {
            exp[ord + i] = exp[i];
        }
        let add_table = if (q as u64) <= ADD_TABLE_MAX {
            let mut t = vec![0u32; (q as usize) * (q as usize)];
            for a in 0..q {
                for b in a..q {
                    let s = add_digits(a, b, p, e);
                    t[(a * q + b) as usize] = s;
                    t[(b * q + a) as usize] = s;
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(Field {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            primitive,
            add_table,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The cached least primitive element.
    pub fn primitive(&self) -> Fe {
        self.primitive
    }
    /// All element indices, ascending.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    /// Interprets `c in 0..p` as a prime-subfield element (identity on indices).
    pub fn scalar(&self, c: u32) -> Fe {
        c % self.p
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(a < self.q && b < self.q);
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => add_digits(a, b, self.p, self.e),
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        neg_digits(a, self.p, self.e)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let ord = self.q - 1;
        Some(self.exp[((ord - self.log[a as usize]) % ord) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// a^k with k possibly negative (a must be nonzero for k < 0); 0^0 = 1.
    pub fn pow(&self, a: Fe, k: i64) -> Fe {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let ord = (self.q - 1) as i64;
        let mut r = k % ord;
        if r < 0 {
            r += ord;
        }
        let idx = (self.log[a as usize] as u64 * r as u64) % ord as u64;
        self.exp[idx as usize]
    }

    /// Multiplicative order of a (None for 0).
    pub fn element_order(&self, a: Fe) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let ord = self.q - 1;
        let l = self.log[a as usize];
        Some(ord / gcd(ord, l))
    }

    /// The Frobenius map x -> x^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as i64)
    }

    /// x -> x^(p^k).
    pub fn frobenius_iter(&self, a: Fe, k: u32) -> Fe {
        let mut x = a;
        for _ in 0..(k % self.e.max(1)) {
            x = self.frobenius(x);
        }
        x
    }

    fn subfield_degree(&self, sub_q: u32) -> Result<u32, GfError> {
        let mut m = 0;
        let mut acc = 1u64;
        while acc < sub_q as u64 {
            acc *= self.p as u64;
            m += 1;
        }
        if acc != sub_q as u64 || m == 0 || self.e % m != 0 {
            return Err(GfError::NoSuchSubfield(sub_q, self.q));
        }
        Ok(m)
    }

    /// Norm onto the subfield of order sub_q: x^((q-1)/(sub_q-1)).
    pub fn norm_to_sub(&self, a: Fe, sub_q: u32) -> Result<Fe, GfError> {
        self.subfield_degree(sub_q)?;
        if a == 0 {
            return Ok(0);
        }
        let exp = (self.q as u64 - 1) / (sub_q as u64 - 1);
        let n = self.pow(a, exp as i64);
        debug_assert_eq!(self.pow(n, sub_q as i64), n, "norm lands in the subfield");
        Ok(n)
    }

    /// Trace onto the subfield of order sub_q: sum of x^(sub_q^i).
    pub fn trace_to_sub(&self, a: Fe, sub_q: u32) -> Result<Fe, GfError> {
        let m = self.subfield_degree(sub_q)?;
        let n = self.e / m;
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..n {
            acc = self.add(acc, x);
            x = self.frobenius_iter(x, m);
        }
        debug_assert_eq!(self.pow(acc, sub_q as i64), acc, "trace lands in the subfield");
        Ok(acc)
    }

    /// In even characteristic every element is a square.
    pub fn is_square(&self, a: Fe) -> bool {
        if self.p == 2 || a == 0 {
            return true;
        }
        self.pow(a, ((self.q - 1) / 2) as i64) == 1
    }

    /// Square root: exact in char 2 (x^(q/2)); for odd q via discrete logs.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            return Some(self.pow(a, (self.q / 2) as i64));
        }
        let l = self.log[a as usize];
        if l % 2 != 0 {
            return None;
        }
        Some(self.exp[(l / 2) as usize])
    }

    /// When 3 does not divide q-1 every element is a cube.
    pub fn is_cube(&self, a: Fe) -> bool {
        if a == 0 || (self.q - 1) % 3 != 0 {
            return true;
        }
        self.pow(a, ((self.q - 1) / 3) as i64) == 1
    }

    /// Least-index non-square (None in even characteristic).
    pub fn nonsquare_witness(&self) -> Option<Fe> {
        if self.p == 2 {
            return None;
        }
        (0..self.q).find(|&x| !self.is_square(x))
    }

    /// Elements of the subfield of order sub_q: fixed points of x -> x^sub_q.
    pub fn subfield_elements(&self, sub_q: u32) -> Result<Vec<Fe>, GfError> {
        self.subfield_degree(sub_q)?;
        Ok((0..self.q).filter(|&x| self.pow(x, sub_q as i64) == x).collect())
    }

    /// Embedding table from a smaller field with the same characteristic:
    /// `table[idx_small] = idx_big`. The small field's generator is sent to
    /// the least-index root of the small modulus; the resulting map is
    /// verified to be a ring homomorphism.
    pub fn embedding_from(&self, small: &Field) -> Result<Vec<Fe>, GfError> {
        if small.p != self.p {
            return Err(GfError::CharMismatch(small.p, self.p));
        }
        self.subfield_degree(small.q)?;
        // least root of the small modulus inside self
        let root = self
            .elements()
            .find(|&x| {
                // Horner evaluation of the small modulus at x
                let mut acc = 0u32;
                for &c in small.modulus.iter().rev() {
                    acc = self.add(self.mul(acc, x), self.scalar(c));
                }
                acc == 0
            })
            .expect("the big field splits the small modulus");
        let m = small.e as usize;
        let mut table = vec![0u32; small.q as usize];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut digits = idx as u32;
            let mut img = 0u32;
            let mut pw = 1u32; // root^i
            for _ in 0..m {
                let c = digits % small.p;
                digits /= small.p;
                img = self.add(img, self.mul(self.scalar(c), pw));
                pw = self.mul(pw, root);
            }
            *slot = img;
        }
        // full verification: ring homomorphism and injectivity
        for a in 0..small.q {
            for b in 0..small.q {
                if table[small.add(a, b) as usize] != self.add(table[a as usize], table[b as usize])
                    || table[small.mul(a, b) as usize]
                        != self.mul(table[a as usize], table[b as usize])
                {
                    return Err(GfError::ReducibleModulus(small.modulus.clone()));
                }
            }
        }
        Ok(table)
    }
}

/// Expansion of GF(p^e) over its subfield of order sub_q = p^m, with respect
/// to the deterministic basis {zeta^i xbar^j} where xbar is the class of X
/// and zeta is the least-index degree-m generator of the subfield.
pub struct SubfieldExpansion {
    sub_q: u32,
    n: usize,
    m: usize,
    zeta: Fe,
    /// inverse of the basis change matrix over Z_p, row-major e x e
    minv: Vec<Vec<u32>>,
}

impl SubfieldExpansion {
    pub fn new(field: &Field, sub_q: u32) -> Result<Self, GfError> {
        let m = field.subfield_degree(sub_q)? as usize;
        let e = field.e as usize;
        let n = e / m;
        let p = field.p;
        // zeta: least-index subfield element whose powers 1..zeta^(m-1) are
        // linearly independent over Z_p (degree exactly m).
        let sub = field.subfield_elements(sub_q)?;
        let zeta = *sub
            .iter()
            .find(|&&z| {
                let rows: Vec<Vec<u32>> = (0..m)
                    .map(|i| digits_of(field.pow(z, i as i64), p, e))
                    .collect();
                rank_mod_p(&rows, p) == m
            })
            .expect("a generator of the subfield exists");
        let xbar = if e == 1 { 0 } else { p }; // class of X (index p) for e >= 2
        // columns: digits of zeta^i * xbar^j at column i + j*m
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(e);
        for j in 0..n {
            let xj = field.pow(xbar, j as i64);
            for i in 0..m {
                let b = field.mul(field.pow(zeta, i as i64), xj);
                cols.push(digits_of(b, p, e));
            }
        }
        // invert the e x e matrix whose columns are `cols`
        let mut mat: Vec<Vec<u32>> = (0..e)
            .map(|r| (0..e).map(|c| cols[c][r]).collect())
            .collect();
        let minv = invert_mod_p(&mut mat, p).expect("basis matrix is invertible");
        Ok(SubfieldExpansion {
            sub_q,
            n,
            m,
            zeta,
            minv,
        })
    }

    /// Extension degree over the subfield.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sub_q(&self) -> u32 {
        self.sub_q
    }

    /// Coordinates of x over the subfield (each returned as a subfield
    /// element of the big field), with respect to the deterministic basis.
    pub fn expand(&self, field: &Field, x: Fe) -> Vec<Fe> {
        let p = field.p;
        let e = field.e as usize;
        let d = digits_of(x, p, e);
        // v = minv * d over Z_p
        let v: Vec<u32> = self
            .minv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&d)
                    .fold(0u32, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect();
        (0..self.n)
            .map(|j| {
                let mut c = 0u32;
                for i in 0..self.m {
                    c = field.add(
                        c,
                        field.mul(field.scalar(v[i + j * self.m]), field.pow(self.zeta, i as i64)),
                    );
                }
                c
            })
            .collect()
    }

    /// Inverse of `expand`: sum of coords[j] * xbar^j.
    pub fn combine(&self, field: &Field, coords: &[Fe]) -> Fe {
        let xbar = if field.e == 1 { 0 } else { field.p };
        let mut acc = 0u32;
        for (j, &c) in coords.iter().enumerate() {
            acc = field.add(acc, field.mul(c, field.pow(xbar, j as i64)));
        }
        acc
    }
}

/// Exact point counts of the elliptic curve Y^2 Z = X^3 - X Z^2 over F_p:
/// returns (affine, projective) where projective = affine + 1 (the point at
/// infinity). Both conventions are reported because membership criteria in
/// the literature are stated against the projective count.
pub fn elliptic_curve_counts(p: u64) -> Result<(u64, u64), GfError> {
    if p < 3 || p % 2 == 0 || p > 1_000_000 || !is_prime_u64(p) {
        return Err(GfError::BadEllipticPrime(p));
    }
    let mut is_sq = vec![false; p as usize];
    for x in 0..p {
        is_sq[((x * x) % p) as usize] = true;
    }
    let mut affine = 0u64;
    for x in 0..p {
        let v = ((x * x % p) * x % p + p - x % p) % p;
        if v == 0 {
            affine += 1;
        } else if is_sq[v as usize] {
            affine += 2;
        }
    }
    Ok((affine, affine + 1))
}

// ---------------------------------------------------------------------------
// construction-time helpers (raw polynomial arithmetic, no tables)

struct RawCtx<'a> {
    p: u32,
    e: usize,
    modulus: &'a [u32],
}

impl RawCtx<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let da = digits_of(a, self.p, self.e);
        let db = digits_of(b, self.p, self.e);
        let mut prod = vec![0u64; 2 * self.e];
        for (i, &ai) in da.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
            }
        }
        // reduce by the monic modulus
        for i in (self.e..2 * self.e).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (k, &mk) in self.modulus.iter().enumerate().take(self.e) {
                let idx = i - self.e + k;
                prod[idx] = (prod[idx] + p * p - c * mk as u64 % p) % p;
            }
        }
        let digits: Vec<u32> = prod[..self.e].iter().map(|&c| c as u32).collect();
        index_of(&digits, self.p)
    }

    fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
}

fn check_size(p: u32, e: u32) -> Result<(), GfError> {
    if !is_prime_u64(p as u64) {
        return Err(GfError::NonPrime(p));
    }
    if e < 1 {
        return Err(GfError::BadDegree);
    }
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p as u64);
        if acc > MAX_ORDER {
            return Err(GfError::TooLarge {
                p,
                e,
                bound: MAX_ORDER,
            });
        }
    }
    Ok(())
}

fn digits_of(idx: u32, p: u32, e: usize) -> Vec<u32> {
    let mut d = vec![0u32; e];
    let mut r = idx;
    for slot in d.iter_mut() {
        *slot = r % p;
        r /= p;
    }
    d
}

fn index_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn add_digits(a: u32, b: u32, p: u32, e: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0u32;
    let mut pw = 1u32;
    let (mut ra, mut rb) = (a, b);
    for _ in 0..e {
        out += ((ra % p + rb % p) % p) * pw;
        ra /= p;
        rb /= p;
        pw *= p;
    }
    out
}

fn neg_digits(a: u32, p: u32, e: u32) -> u32 {
    let mut out = 0u32;
    let mut pw = 1u32;
    let mut r = a;
    for _ in 0..e {
        out += ((p - r % p) % p) * pw;
        r /= p;
        pw *= p;
    }
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// polynomial arithmetic over Z_p for irreducibility testing

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let mut bb = b.to_vec();
    poly_trim(&mut bb);
    let db = bb.len() - 1;
    let lead = bb[db];
    let lead_inv = (1..p).find(|&x| (x * lead) % p == 1).unwrap();
    while r.len() > 1 || r[0] != 0 {
        let dr = r.len() - 1;
        if dr < db || (r.len() == 1 && r[0] == 0) {
            break;
        }
        let f = (r[dr] * lead_inv) % p;
        let shift = dr - db;
        for k in 0..=db {
            let v = (f * bb[k]) % p;
            r[k + shift] = (r[k + shift] + p - v) % p;
        }
        poly_trim(&mut r);
        if r.len() - 1 < db {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin irreducibility: f (monic, degree e) is irreducible over Z_p iff
/// X^(p^e) = X mod f and gcd(X^(p^(e/r)) - X, f) = 1 for every prime r | e.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let e = (f.len() - 1) as u32;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // divisible by X
    }
    let x = vec![0u32, 1];
    // X^(p^e) mod f by e-fold p-th powering
    let frob_steps = |k: u32| -> Vec<u32> {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = poly_powmod(&acc, p as u64, f, p);
        }
        acc
    };
    let xe = frob_steps(e);
    let mut diff = xe;
    // diff = X^(p^e) - X
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !(diff.len() == 1 && diff[0] == 0) {
        return false;
    }
    for r in prime_factors(e as u64) {
        let sub = frob_steps(e / r as u32);
        let mut d = sub;
        if d.len() < 2 {
            d.resize(2, 0);
        }
        d[1] = (d[1] + p - 1) % p;
        poly_trim(&mut d);
        let g = poly_gcd(f, &d, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree e over Z_p, with
/// coefficient tuples compared low-degree-first (c_0 most significant).
fn lex_least_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1]; // X itself
    }
    let e = e as usize;
    let mut coeffs = vec![0u32; e];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment with c_0 most significant: bump the last position first
        let mut i = e;
        loop {
            if i == 0 {
                unreachable!("an irreducible of every degree exists over Z_p");
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

// small linear algebra over Z_p for the subfield expansion

fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..m.len()).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        let inv = (1..p).find(|&x| (x * m[rank][col]) % p == 1).unwrap();
        for c in 0..ncols {
            m[rank][c] = (m[rank][c] * inv) % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + p - (f * m[rank][c]) % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn invert_mod_p(mat: &mut [Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let mut inv: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| mat[r][col] != 0)?;
        mat.swap(col, pr);
        inv.swap(col, pr);
        let piv_inv = (1..p).find(|&x| (x * mat[col][col]) % p == 1).unwrap();
        for c in 0..n {
            mat[col][c] = (mat[col][c] * piv_inv) % p;
            inv[col][c] = (inv[col][c] * piv_inv) % p;
        }
        for r in 0..n {
            if r != col && mat[r][col] != 0 {
                let f = mat[r][col];
                for c in 0..n {
                    mat[r][c] = (mat[r][c] + p - (f * mat[col][c]) % p) % p;
                    inv[r][c] = (inv[r][c] + p - (f * inv[col][c]) % p) % p;
                }
            }
        }
    }
    Some(inv)
}
