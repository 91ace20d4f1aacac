//! Finite classical polar spaces: symplectic spaces, quadrics and Hermitian
//! varieties, with exact isotropic-point enumeration, canonical
//! totally-isotropic subspace enumeration, perps, sections and the
//! generalized-quadrangle axioms.
//!
//! Every family is parametrized by its rank d and the exponent e with
//! 2e in {0,1,2,3,4}; the number of totally isotropic subspaces of vector
//! dimension k is  [d choose k]_q * prod_{i=1..k} (q^{d+e-i} + 1),
//! where q is the ambient field order (square for Hermitian families).

use std::collections::BTreeSet;

use num::BigUint;
use thiserror::Error;

use crate::gf::{Fe, Field, GfError};
use crate::linalg;
use crate::projspace::{gaussian_binomial, theta, ProjError, ProjSpace, Subspace};

/// Cap on t.i. subspace enumeration output size.
const TI_BUDGET: u64 = 30_000_000;

#[derive(Debug, Error)]
pub enum PolarError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("Hermitian spaces need a square ambient order, got {0}")]
    NonSquareOrder(u32),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("point count {got} does not match the counting formula {expected}")]
    CountMismatch { expected: BigUint, got: u64 },
    #[error("totally isotropic rank k={k} out of range 1..={d}")]
    BadRank { k: u32, d: u32 },
    #[error("budget exceeded: {what} (cap {cap})")]
    Budget { what: String, cap: u64 },
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolarFamily {
    /// W(2d-1,q), e = 1
    Symplectic,
    /// Q+(2d-1,q), e = 0
    Hyperbolic,
    /// Q(2d,q), e = 1
    Parabolic,
    /// Q-(2d+1,q), e = 2
    Elliptic,
    /// H(2d-1,q^2), e = 1/2
    HermitianOdd,
    /// H(2d,q^2), e = 3/2
    HermitianEven,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Alternating,
    Quadratic,
    Hermitian,
}

/// A non-degenerate reflexive form. For quadratic kind, `matrix` is the
/// upper-triangular coefficient matrix of Q; otherwise it is the Gram matrix
/// of the (sesqui)bilinear form. For Hermitian kind, `s` is the order of the
/// fixed subfield of the conjugation x -> x^s (s^2 = ambient order).
#[derive(Clone, Debug)]
pub struct Form {
    pub kind: FormKind,
    pub matrix: Vec<Vec<Fe>>,
    pub s: u32,
}

impl Form {
    /// The bilinear companion used for perps and collinearity: the Gram
    /// itself, or the polarization C + C^T of a quadratic coefficient matrix.
    pub fn bilinear_gram(&self, f: &Field) -> Vec<Vec<Fe>> {
        match self.kind {
            FormKind::Alternating | FormKind::Hermitian => self.matrix.clone(),
            FormKind::Quadratic => {
                let n = self.matrix.len();
                let mut g = vec![vec![0u32; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        g[i][j] = f.add(self.matrix[i][j], self.matrix[j][i]);
                    }
                }
                g
            }
        }
    }

    /// Q(v) for quadratic, h(v,v) for Hermitian, 0 for alternating.
    pub fn value(&self, f: &Field, v: &[Fe]) -> Fe {
        match self.kind {
            FormKind::Alternating => 0,
            FormKind::Quadratic => {
                let mut acc = 0;
                for (i, row) in self.matrix.iter().enumerate() {
                    for (j, &c) in row.iter().enumerate() {
                        if c != 0 {
                            acc = f.add(acc, f.mul(c, f.mul(v[i], v[j])));
                        }
                    }
                }
                acc
            }
            FormKind::Hermitian => self.beta(f, v, v),
        }
    }

    /// The reflexive (sesqui)bilinear evaluation used for collinearity.
    pub fn beta(&self, f: &Field, u: &[Fe], v: &[Fe]) -> Fe {
        match self.kind {
            FormKind::Hermitian => {
                let mut acc = 0;
                for (i, row) in self.matrix.iter().enumerate() {
                    if u[i] == 0 {
                        continue;
                    }
                    for (j, &c) in row.iter().enumerate() {
                        if c != 0 && v[j] != 0 {
                            let vj = f.pow(v[j], self.s as i64);
                            acc = f.add(acc, f.mul(u[i], f.mul(c, vj)));
                        }
                    }
                }
                acc
            }
            _ => {
                let g = match self.kind {
                    FormKind::Alternating => &self.matrix,
                    _ => unreachable!(),
                };
                let mut acc = 0;
                for (i, row) in g.iter().enumerate() {
                    if u[i] == 0 {
                        continue;
                    }
                    for (j, &c) in row.iter().enumerate() {
                        if c != 0 && v[j] != 0 {
                            acc = f.add(acc, f.mul(u[i], f.mul(c, v[j])));
                        }
                    }
                }
                acc
            }
        }
    }
}

/// Section classification tags, shared by quadric solids and Hermitian
/// plane sections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SectionType {
    Hyperbolic,
    Elliptic,
    Cone,
    FullLine,
    HermitianCurve,
}

/// Classifies a solid section of a quadric in PG(5,q) by its point count:
/// (q+1)^2 hyperbolic, q^2+1 elliptic, q^2+q+1 cone over a conic.
pub fn quadric_solid_section_type(count: usize, q: u32) -> Option<SectionType> {
    let q = q as usize;
    if count == (q + 1) * (q + 1) {
        Some(SectionType::Hyperbolic)
    } else if count == q * q + 1 {
        Some(SectionType::Elliptic)
    } else if count == q * q + q + 1 {
        Some(SectionType::Cone)
    } else {
        None
    }
}

/// Classifies a plane section of a Hermitian variety with conjugation
/// subfield order s: s^2+1 a full line, s^3+s^2+1 a pencil cone,
/// s^3+1 a Hermitian curve.
pub fn hermitian_plane_section_type(count: usize, s: u32) -> Option<SectionType> {
    let s = s as usize;
    if count == s * s + 1 {
        Some(SectionType::FullLine)
    } else if count == s * s * s + s * s + 1 {
        Some(SectionType::Cone)
    } else if count == s * s * s + 1 {
        Some(SectionType::HermitianCurve)
    } else {
        None
    }
}

/// Splits the 2(q+1) ruling lines of a hyperbolic solid section into its two
/// reguli: the regulus of the least line consists of the lines disjoint from
/// it (plus itself); the rest form the opposite regulus.
pub fn split_into_reguli(
    f: &Field,
    lines: &[Subspace],
) -> Result<(Vec<Subspace>, Vec<Subspace>), PolarError> {
    if lines.is_empty() {
        return Err(PolarError::BadParameters("no lines to split".into()));
    }
    let l0 = lines.iter().min().unwrap();
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for l in lines {
        if l == l0 || l.meet(f, l0).vdim() == 0 {
            r1.push(l.clone());
        } else {
            r2.push(l.clone());
        }
    }
    if r1.len() != r2.len() {
        return Err(PolarError::BadParameters(format!(
            "ruling split is not balanced: {} vs {}",
            r1.len(),
            r2.len()
        )));
    }
    Ok((r1, r2))
}

/// A finite classical polar space with its isotropic points enumerated.
pub struct PolarSpace {
    family: PolarFamily,
    d: u32,
    two_e: u32,
    /// sqrt of the ambient order for Hermitian families, else the order
    s: u32,
    form: Form,
    bil: Vec<Vec<Fe>>,
    ambient: ProjSpace,
    points: Vec<usize>,
    is_pt: Vec<bool>,
    elliptic_tail: Option<(Fe, Fe)>,
}

impl PolarSpace {
    /// The canonical model of the given family on PG(n,q). For Hermitian
    /// families q must be a square (the conjugation is x -> x^sqrt(q)).
    pub fn new(family: PolarFamily, n: usize, q: u32) -> Result<PolarSpace, PolarError> {
        use PolarFamily::*;
        let parity_ok = match family {
            Symplectic | Hyperbolic | Elliptic | HermitianOdd => n % 2 == 1,
            Parabolic | HermitianEven => n % 2 == 0,
        };
        if !parity_ok || n < 1 {
            return Err(PolarError::BadParameters(format!(
                "family {family:?} needs the right ambient parity, got n={n}"
            )));
        }
        let field = match family {
            HermitianOdd | HermitianEven => {
                let s = int_sqrt(q).ok_or(PolarError::NonSquareOrder(q))?;
                let (p, e) = factor_prime_power(s)
                    .ok_or_else(|| PolarError::BadParameters(format!("{q} not a prime power")))?;
                Field::new(p, 2 * e)?
            }
            _ => {
                let (p, e) = factor_prime_power(q)
                    .ok_or_else(|| PolarError::BadParameters(format!("{q} not a prime power")))?;
                Field::new(p, e)?
            }
        };
        let m = n + 1;
        let mut elliptic_tail = None;
        let form = match family {
            Symplectic => {
                let mut g = vec![vec![0u32; m]; m];
                for i in 0..m / 2 {
                    g[2 * i][2 * i + 1] = 1;
                    g[2 * i + 1][2 * i] = field.neg(1);
                }
                Form {
                    kind: FormKind::Alternating,
                    matrix: g,
                    s: q,
                }
            }
            Hyperbolic => {
                let mut c = vec![vec![0u32; m]; m];
                for i in 0..m / 2 {
                    c[2 * i][2 * i + 1] = 1;
                }
                Form {
                    kind: FormKind::Quadratic,
                    matrix: c,
                    s: q,
                }
            }
            Parabolic => {
                let mut c = vec![vec![0u32; m]; m];
                for i in 0..(m - 1) / 2 {
                    c[2 * i][2 * i + 1] = 1;
                }
                c[m - 1][m - 1] = 1;
                Form {
                    kind: FormKind::Quadratic,
                    matrix: c,
                    s: q,
                }
            }
            Elliptic => {
                let mut c = vec![vec![0u32; m]; m];
                for i in 0..(m - 2) / 2 {
                    c[2 * i][2 * i + 1] = 1;
                }
                let (b, coef_c) = least_irreducible_pair(&field)?;
                c[m - 2][m - 2] = 1;
                c[m - 2][m - 1] = b;
                c[m - 1][m - 1] = coef_c;
                elliptic_tail = Some((b, coef_c));
                Form {
                    kind: FormKind::Quadratic,
                    matrix: c,
                    s: q,
                }
            }
            HermitianOdd | HermitianEven => {
                let s = int_sqrt(q).unwrap();
                let g: Vec<Vec<Fe>> = (0..m)
                    .map(|i| (0..m).map(|j| u32::from(i == j)).collect())
                    .collect();
                Form {
                    kind: FormKind::Hermitian,
                    matrix: g,
                    s,
                }
            }
        };
        let mut ps = Self::assemble(field, n, form)?;
        if ps.family != family {
            return Err(PolarError::BadParameters(format!(
                "canonical form classified as {:?}, expected {:?}",
                ps.family, family
            )));
        }
        ps.elliptic_tail = elliptic_tail;
        Ok(ps)
    }

    /// Builds a polar space from a caller-supplied form. Quadratic input may
    /// be any coefficient matrix (it is folded to upper-triangular);
    /// alternating input must be antisymmetric with zero diagonal; Hermitian
    /// input must be conjugate-symmetric. The family is classified from the
    /// form kind, the ambient dimension and the exact point count.
    pub fn from_form(
        field: Field,
        n: usize,
        kind: FormKind,
        matrix: &[Vec<Fe>],
    ) -> Result<PolarSpace, PolarError> {
        let m = n + 1;
        if matrix.len() != m || matrix.iter().any(|r| r.len() != m) {
            return Err(PolarError::BadParameters(format!(
                "form matrix must be {m}x{m}"
            )));
        }
        let form = match kind {
            FormKind::Alternating => {
                for i in 0..m {
                    if matrix[i][i] != 0 {
                        return Err(PolarError::DegenerateForm(
                            "alternating Gram must have zero diagonal".into(),
                        ));
                    }
                    for j in 0..m {
                        if matrix[i][j] != field.neg(matrix[j][i]) {
                            return Err(PolarError::DegenerateForm(
                                "alternating Gram must be antisymmetric".into(),
                            ));
                        }
                    }
                }
                Form {
                    kind,
                    matrix: matrix.to_vec(),
                    s: field.q(),
                }
            }
            FormKind::Quadratic => {
                // fold to the canonical upper-triangular coefficient matrix
                let mut c = vec![vec![0u32; m]; m];
                for i in 0..m {
                    c[i][i] = matrix[i][i];
                    for j in (i + 1)..m {
                        c[i][j] = field.add(matrix[i][j], matrix[j][i]);
                    }
                }
                Form {
                    kind,
                    matrix: c,
                    s: field.q(),
                }
            }
            FormKind::Hermitian => {
                let s = int_sqrt(field.q()).ok_or(PolarError::NonSquareOrder(field.q()))?;
                for i in 0..m {
                    for j in 0..m {
                        if matrix[j][i] != field.pow(matrix[i][j], s as i64) {
                            return Err(PolarError::DegenerateForm(
                                "Hermitian Gram must be conjugate-symmetric".into(),
                            ));
                        }
                    }
                }
                Form {
                    kind,
                    matrix: matrix.to_vec(),
                    s,
                }
            }
        };
        Self::assemble(field, n, form)
    }

    /// Common construction path: nondegeneracy, point enumeration,
    /// classification, and the counting-formula cross-check.
    fn assemble(field: Field, n: usize, form: Form) -> Result<PolarSpace, PolarError> {
        let m = n + 1;
        let bil = form.bilinear_gram(&field);
        // nondegeneracy: the singular radical must be trivial
        let rad = linalg::kernel_basis_n(&field, bil.clone(), m);
        match form.kind {
            FormKind::Alternating | FormKind::Hermitian => {
                if !rad.is_empty() {
                    return Err(PolarError::DegenerateForm(format!(
                        "Gram matrix has nullity {}",
                        rad.len()
                    )));
                }
            }
            FormKind::Quadratic => {
                // the radical of the polarization must be at most a nucleus
                // point with Q nonzero (possible only for odd dimension in
                // characteristic 2)
                let allowed = usize::from(field.p() == 2 && m % 2 == 1);
                if rad.len() > allowed {
                    return Err(PolarError::DegenerateForm(format!(
                        "polarization has nullity {}",
                        rad.len()
                    )));
                }
                let rad_sub = Subspace::from_rows(&field, n, &rad);
                for v in rad_sub.points(&field) {
                    if form.value(&field, &v) == 0 {
                        return Err(PolarError::DegenerateForm(
                            "a radical point lies on the quadric".into(),
                        ));
                    }
                }
            }
        }
        let ambient = ProjSpace::new(field, n)?;
        let field = ambient.field().clone();
        let mut points = Vec::new();
        let mut is_pt = vec![false; ambient.num_points()];
        for (i, v) in ambient.points().iter().enumerate() {
            let iso = match form.kind {
                FormKind::Alternating => true,
                _ => form.value(&field, v) == 0,
            };
            if iso {
                points.push(i);
                is_pt[i] = true;
            }
        }
        // classify the family and rank from kind, parity and point count
        let q = field.q();
        let (family, d, two_e, s) = match form.kind {
            FormKind::Alternating => (PolarFamily::Symplectic, ((n + 1) / 2) as u32, 2, q),
            FormKind::Hermitian => {
                if n % 2 == 1 {
                    (PolarFamily::HermitianOdd, ((n + 1) / 2) as u32, 1, form.s)
                } else {
                    (PolarFamily::HermitianEven, (n / 2) as u32, 3, form.s)
                }
            }
            FormKind::Quadratic => {
                if n % 2 == 0 {
                    (PolarFamily::Parabolic, (n / 2) as u32, 2, q)
                } else {
                    let dh = ((n + 1) / 2) as u32;
                    let de = ((n - 1) / 2) as u32;
                    let got = BigUint::from(points.len() as u64);
                    if got == point_count_formula(dh, 0, q, q) {
                        (PolarFamily::Hyperbolic, dh, 0, q)
                    } else if got == point_count_formula(de, 4, q, q) {
                        (PolarFamily::Elliptic, de, 4, q)
                    } else {
                        return Err(PolarError::CountMismatch {
                            expected: point_count_formula(dh, 0, q, q),
                            got: points.len() as u64,
                        });
                    }
                }
            }
        };
        let expected = point_count_formula(d, two_e, q, s);
        if BigUint::from(points.len() as u64) != expected {
            return Err(PolarError::CountMismatch {
                expected,
                got: points.len() as u64,
            });
        }
        Ok(PolarSpace {
            family,
            d,
            two_e,
            s,
            form,
            bil,
            ambient,
            points,
            is_pt,
            elliptic_tail: None,
        })
    }

    /// Parses descriptors in standard notation — "W(3,5)", "Q+(3,4)",
    /// "Q(4,3)", "Q-(5,3)", "H(3,9)" with the Hermitian order given as the
    /// square — as well as the shell-friendly colon form "W:3:5" /
    /// "H:3:q2=9" (family : ambient projective dimension : order).
    pub fn from_descriptor(desc: &str) -> Result<PolarSpace, PolarError> {
        if !desc.contains(':') {
            return Self::from_paren_descriptor(desc);
        }
        let parts: Vec<&str> = desc.split(':').collect();
        if parts.len() != 3 {
            return Err(PolarError::BadDescriptor(desc.into()));
        }
        let n: usize = parts[1]
            .parse()
            .map_err(|_| PolarError::BadDescriptor(desc.into()))?;
        let parse_q = |s: &str| -> Result<u32, PolarError> {
            s.parse().map_err(|_| PolarError::BadDescriptor(desc.into()))
        };
        match parts[0] {
            "W" => PolarSpace::new(PolarFamily::Symplectic, n, parse_q(parts[2])?),
            "Q+" => PolarSpace::new(PolarFamily::Hyperbolic, n, parse_q(parts[2])?),
            "Q" => PolarSpace::new(PolarFamily::Parabolic, n, parse_q(parts[2])?),
            "Q-" => PolarSpace::new(PolarFamily::Elliptic, n, parse_q(parts[2])?),
            "H" => {
                let Some(qs) = parts[2].strip_prefix("q2=") else {
                    return Err(PolarError::BadDescriptor(format!(
                        "Hermitian descriptors use q2=<square order>: {desc}"
                    )));
                };
                let q = parse_q(qs)?;
                if int_sqrt(q).is_none() {
                    return Err(PolarError::BadDescriptor(format!(
                        "Hermitian order {q} is not a square"
                    )));
                }
                let family = if n % 2 == 1 {
                    PolarFamily::HermitianOdd
                } else {
                    PolarFamily::HermitianEven
                };
                PolarSpace::new(family, n, q)
            }
            _ => Err(PolarError::BadDescriptor(desc.into())),
        }
    }

    fn from_paren_descriptor(desc: &str) -> Result<PolarSpace, PolarError> {
        let err = || PolarError::BadDescriptor(desc.into());
        let (tag, rest) = ["Q+", "Q-", "W", "Q", "H"]
            .into_iter()
            .find_map(|t| desc.strip_prefix(t).map(|r| (t, r)))
            .ok_or_else(err)?;
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (ns, qs) = inner.split_once(',').ok_or_else(err)?;
        let n: usize = ns.trim().parse().map_err(|_| err())?;
        let q: u32 = qs.trim().parse().map_err(|_| err())?;
        match tag {
            "W" => PolarSpace::new(PolarFamily::Symplectic, n, q),
            "Q+" => PolarSpace::new(PolarFamily::Hyperbolic, n, q),
            "Q" => PolarSpace::new(PolarFamily::Parabolic, n, q),
            "Q-" => PolarSpace::new(PolarFamily::Elliptic, n, q),
            "H" => {
                if int_sqrt(q).is_none() {
                    return Err(PolarError::BadDescriptor(format!(
                        "Hermitian order {q} is not a square"
                    )));
                }
                let family = if n % 2 == 1 {
                    PolarFamily::HermitianOdd
                } else {
                    PolarFamily::HermitianEven
                };
                PolarSpace::new(family, n, q)
            }
            _ => unreachable!("tag list is exhaustive"),
        }
    }

    pub fn descriptor(&self) -> String {
        let n = self.ambient.n();
        let q = self.ambient.field().q();
        match self.family {
            PolarFamily::Symplectic => format!("W({n},{q})"),
            PolarFamily::Hyperbolic => format!("Q+({n},{q})"),
            PolarFamily::Parabolic => format!("Q({n},{q})"),
            PolarFamily::Elliptic => format!("Q-({n},{q})"),
            PolarFamily::HermitianOdd | PolarFamily::HermitianEven => format!("H({n},{q})"),
        }
    }

    pub fn family(&self) -> PolarFamily {
        self.family
    }

    pub fn rank_d(&self) -> u32 {
        self.d
    }

    /// Twice the family exponent e (an integer in 0..=4).
    pub fn two_e(&self) -> u32 {
        self.two_e
    }

    pub fn field(&self) -> &Field {
        self.ambient.field()
    }

    pub fn ambient(&self) -> &ProjSpace {
        &self.ambient
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    /// Ambient indices of the isotropic points, ascending.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Whether an ambient point index is on the polar space.
    pub fn has_ambient_index(&self, i: usize) -> bool {
        self.is_pt[i]
    }

    /// Coefficients (b,c) of the canonical elliptic tail X^2 + b XY + c Y^2.
    pub fn elliptic_tail_coeffs(&self) -> Option<(Fe, Fe)> {
        self.elliptic_tail
    }

    pub fn is_isotropic(&self, v: &[Fe]) -> bool {
        match self.form.kind {
            FormKind::Alternating => true,
            _ => self.form.value(self.field(), v) == 0,
        }
    }

    /// The reflexive form between two coordinate vectors.
    pub fn beta(&self, u: &[Fe], v: &[Fe]) -> Fe {
        match self.form.kind {
            FormKind::Hermitian => self.form.beta(self.field(), u, v),
            _ => {
                let f = self.field();
                let mut acc = 0;
                for (i, row) in self.bil.iter().enumerate() {
                    if u[i] == 0 {
                        continue;
                    }
                    for (j, &c) in row.iter().enumerate() {
                        if c != 0 && v[j] != 0 {
                            acc = f.add(acc, f.mul(u[i], f.mul(c, v[j])));
                        }
                    }
                }
                acc
            }
        }
    }

    /// The form between two polar points given by their positions in
    /// `points()`.
    pub fn beta_pos(&self, i: usize, j: usize) -> Fe {
        self.beta(
            self.ambient.point(self.points[i]),
            self.ambient.point(self.points[j]),
        )
    }

    /// Exact count of totally isotropic subspaces of vector dimension k.
    pub fn count_ti_formula(&self, k: u32) -> BigUint {
        let q = self.field().q() as u64;
        let mut acc = gaussian_binomial(self.d, k, q);
        for i in 1..=k {
            acc *= self.q_pow_d_e_minus(i) + 1u32;
        }
        acc
    }

    /// q^{d+e-i} as an exact integer (via s = sqrt(q) for Hermitian).
    pub fn q_pow_d_e_minus(&self, i: u32) -> BigUint {
        let exp2 = 2 * self.d + self.two_e - 2 * i;
        if self.two_e % 2 == 1 {
            BigUint::from(self.s).pow(exp2)
        } else {
            BigUint::from(self.field().q()).pow(exp2 / 2)
        }
    }

    /// The ovoid number q^{d+e-1} + 1.
    pub fn ovoid_number(&self) -> BigUint {
        self.q_pow_d_e_minus(1) + 1u32
    }

    /// GQ parameters (s,t) for rank-2 spaces: s+1 points per line,
    /// t+1 lines per point.
    pub fn gq_params(&self) -> Option<(u64, u64)> {
        if self.d != 2 {
            return None;
        }
        let s_gq = self.field().q() as u64;
        let t_plus_1 = if self.two_e % 2 == 1 {
            (self.s as u64).pow(self.two_e)
        } else {
            (self.field().q() as u64).pow(self.two_e / 2)
        } + 1;
        Some((s_gq, t_plus_1 - 1))
    }

    /// All totally isotropic subspaces of vector dimension k, ascending.
    /// Canonical depth-first generation: each subspace is produced exactly
    /// once through its greedy basis (b1 = least point, b_{i+1} = least
    /// point outside the span of b1..b_i).
    pub fn enumerate_ti(&self, k: u32) -> Result<Vec<Subspace>, PolarError> {
        if k == 0 || k > self.d {
            return Err(PolarError::BadRank { k, d: self.d });
        }
        let expected = self.count_ti_formula(k);
        if expected > BigUint::from(TI_BUDGET) {
            return Err(PolarError::Budget {
                what: format!("{} t.i. {k}-spaces", expected),
                cap: TI_BUDGET,
            });
        }
        let mut out = Vec::new();
        let f = self.field();
        let n = self.ambient.n();
        for (pos, &pid) in self.points.iter().enumerate() {
            let v = self.ambient.point(pid);
            let sub = Subspace::from_rows(f, n, &[v.clone()]);
            let pts = vec![pid];
            if k == 1 {
                out.push(sub);
            } else {
                self.extend_ti(pos, &sub, &pts, 1, k, &mut out);
            }
        }
        out.sort();
        if BigUint::from(out.len() as u64) != expected {
            return Err(PolarError::CountMismatch {
                expected,
                got: out.len() as u64,
            });
        }
        Ok(out)
    }

    fn extend_ti(
        &self,
        last_pos: usize,
        sub: &Subspace,
        sub_pts: &[usize],
        depth: u32,
        k: u32,
        out: &mut Vec<Subspace>,
    ) {
        let f = self.field();
        for (pos, &pid) in self.points.iter().enumerate().skip(last_pos + 1) {
            let v = self.ambient.point(pid);
            if sub.rows().iter().any(|row| self.beta(row, v) != 0) {
                continue;
            }
            if sub.contains_point(f, v) {
                continue;
            }
            let mut rows = sub.rows().to_vec();
            rows.push(v.clone());
            let newsub = Subspace::from_rows(f, self.ambient.n(), &rows);
            // canonical condition: pid is the least new point of the span
            let newpts: Vec<usize> = newsub
                .points(f)
                .iter()
                .map(|p| self.ambient.point_index(p).expect("t.i. points are isotropic"))
                .collect();
            let least_new = newpts
                .iter()
                .find(|id| !sub_pts.contains(id))
                .copied()
                .expect("the span grew");
            if least_new != pid {
                continue;
            }
            if depth + 1 == k {
                out.push(newsub);
            } else {
                let mut sorted = newpts;
                sorted.sort_unstable();
                self.extend_ti(pos, &newsub, &sorted, depth + 1, k, out);
            }
        }
    }

    /// Generators: maximal totally isotropic subspaces (vdim d).
    pub fn generators(&self) -> Result<Vec<Subspace>, PolarError> {
        self.enumerate_ti(self.d)
    }

    /// The polar image S^perp = {x : beta(x, u) = 0 for all u in S}.
    pub fn perp(&self, sub: &Subspace) -> Subspace {
        let f = self.field();
        let m = self.ambient.n() + 1;
        let rows: Vec<Vec<Fe>> = sub
            .rows()
            .iter()
            .map(|u| {
                // row_i = sum_j G[i][j] sigma(u_j): then x.row = beta(x,u)
                (0..m)
                    .map(|i| {
                        let mut acc = 0;
                        for (j, &uj) in u.iter().enumerate() {
                            if self.bil[i][j] != 0 && uj != 0 {
                                let val = if self.form.kind == FormKind::Hermitian {
                                    f.pow(uj, self.form.s as i64)
                                } else {
                                    uj
                                };
                                acc = f.add(acc, f.mul(self.bil[i][j], val));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let ker = linalg::kernel_basis_n(f, rows, m);
        Subspace::from_rows(f, self.ambient.n(), &ker)
    }

    /// Ambient indices of the isotropic points inside a subspace, ascending.
    pub fn isotropic_points_in(&self, sub: &Subspace) -> Vec<usize> {
        let f = self.field();
        sub.points(f)
            .iter()
            .filter(|v| self.is_isotropic(v))
            .map(|v| self.ambient.point_index(v).expect("ambient point"))
            .collect()
    }

    /// Totally isotropic lines of the space lying inside a subspace.
    pub fn ti_lines_in(&self, sub: &Subspace) -> Result<Vec<Subspace>, PolarError> {
        let f = self.field();
        let ids = self.isotropic_points_in(sub);
        let mut out = Vec::new();
        for (ai, &a) in ids.iter().enumerate() {
            let va = self.ambient.point(a);
            for &b in ids.iter().skip(ai + 1) {
                let vb = self.ambient.point(b);
                if self.beta(va, vb) != 0 {
                    continue;
                }
                let line = Subspace::from_rows(f, self.ambient.n(), &[va.clone(), vb.clone()]);
                let pts: Vec<usize> = line
                    .points(f)
                    .iter()
                    .map(|p| self.ambient.point_index(p).unwrap())
                    .collect();
                // canonical: a and b are the two least points of the line
                let mut sorted = pts;
                sorted.sort_unstable();
                if sorted[0] == a && sorted[1] == b {
                    out.push(line);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Totally isotropic (k+1)-spaces containing a given t.i. k-space.
    pub fn ti_extensions(&self, sub: &Subspace) -> Result<Vec<Subspace>, PolarError> {
        let f = self.field();
        let perp = self.perp(sub);
        let mut out = BTreeSet::new();
        for &pid in &self.isotropic_points_in(&perp) {
            let v = self.ambient.point(pid);
            if sub.contains_point(f, v) {
                continue;
            }
            if sub.rows().iter().any(|row| self.beta(row, v) != 0) {
                continue;
            }
            let mut rows = sub.rows().to_vec();
            rows.push(v.clone());
            out.insert(Subspace::from_rows(f, self.ambient.n(), &rows));
        }
        Ok(out.into_iter().collect())
    }

    /// The one-or-all axiom: for every point P and every t.i. line L not
    /// through P, P is collinear with exactly 1 or all q+1 points of L.
    pub fn check_one_or_all(&self) -> Result<(), String> {
        let f = self.field();
        let lines = self
            .enumerate_ti(2)
            .map_err(|e| format!("line enumeration failed: {e}"))?;
        let line_pts: Vec<Vec<usize>> = lines
            .iter()
            .map(|l| {
                l.points(f)
                    .iter()
                    .map(|p| self.ambient.point_index(p).unwrap())
                    .collect()
            })
            .collect();
        let all = self.field().q() as usize + 1;
        for &pid in &self.points {
            let v = self.ambient.point(pid).clone();
            for (li, pts) in line_pts.iter().enumerate() {
                if pts.contains(&pid) {
                    continue;
                }
                let coll = pts
                    .iter()
                    .filter(|&&x| self.beta(&v, self.ambient.point(x)) == 0)
                    .count();
                if coll != 1 && coll != all {
                    return Err(format!(
                        "point {pid} sees {coll} of the {all} points of line #{li}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// The polarity is involutory: perp(perp(P)) = P on every ambient point,
    /// and perps of points are hyperplanes. Requires a nondegenerate
    /// companion bilinear form.
    pub fn check_polarity_involution(&self) -> Result<(), String> {
        let f = self.field();
        let n = self.ambient.n();
        if !linalg::kernel_basis_n(f, self.bil.clone(), n + 1).is_empty() {
            return Err("companion bilinear form is degenerate".into());
        }
        for v in self.ambient.points() {
            let p_sub = Subspace::from_rows(f, n, &[v.clone()]);
            let h = self.perp(&p_sub);
            if h.vdim() != n {
                return Err(format!("perp of {v:?} is not a hyperplane"));
            }
            let back = self.perp(&h);
            if back != p_sub {
                return Err(format!("perp of perp of {v:?} is {back:?}"));
            }
        }
        Ok(())
    }
}

/// theta_{d-1}(q) * (q^{d+e-1} + 1) with q^{d+e-1} computed through s.
fn point_count_formula(d: u32, two_e: u32, q: u32, s: u32) -> BigUint {
    let exp2 = 2 * d + two_e - 2;
    let pw = if two_e % 2 == 1 {
        BigUint::from(s).pow(exp2)
    } else {
        BigUint::from(q).pow(exp2 / 2)
    };
    theta(d as i64 - 1, q as u64) * (pw + 1u32)
}

/// Least (b,c) in lex order (b major) with t^2 + b t + c irreducible.
fn least_irreducible_pair(f: &Field) -> Result<(Fe, Fe), PolarError> {
    for b in 0..f.q() {
        for c in 0..f.q() {
            let irreducible = (0..f.q()).all(|t| {
                let v = f.add(f.add(f.mul(t, t), f.mul(b, t)), c);
                v != 0
            });
            if irreducible {
                return Ok((b, c));
            }
        }
    }
    Err(PolarError::BadParameters(
        "no irreducible quadratic over the field".into(),
    ))
}

fn int_sqrt(q: u32) -> Option<u32> {
    let s = (q as f64).sqrt().round() as u32;
    for c in s.saturating_sub(1)..=s + 1 {
        if c * c == q {
            return Some(c);
        }
    }
    None
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
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
