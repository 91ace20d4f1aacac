//! Combinatorial substructures of finite classical polar spaces, each
//! generator paired with an independent verifier: m-regular systems of
//! generators (with an exhaustive backtracking search), hemisystem-style
//! line sets on elliptic quadrics, a 1-system of the parabolic quadric in
//! six projective dimensions, several families of maximal partial ovoids,
//! Sherk sets in cubic field extensions, pencils of Hermitian surfaces with
//! their tangent sets and lifts to one dimension higher, embedded unitals,
//! and fans of Hermitian ovoids.
//!
//! Every constructor re-checks its own output through a route independent
//! of the way the object was built (incidence counts, pairwise form values,
//! exhaustive line classification), so a returned value is a certificate,
//! not just a recipe.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::BigUint;
use thiserror::Error;

use crate::gf::{Fe, Field, GfError, SubfieldExpansion};
use crate::graphs::Graph;
use crate::linalg;
use crate::polar::{split_into_reguli, FormKind, PolarError, PolarFamily, PolarSpace};
use crate::projspace::{normalize, ProjError, ProjSpace, Subspace};

#[derive(Debug, Error)]
pub enum ConstructionsError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("member {index} is not a generator of the space")]
    NonGenerator { index: usize },
    #[error("member {index} appears more than once")]
    DuplicateMember { index: usize },
    #[error("object {object} lies on {count} members but {expected} elsewhere")]
    NotRegular {
        object: usize,
        count: u64,
        expected: u64,
    },
    #[error("{got} members, but regularity {m} requires {expected}")]
    SizeMismatch { got: u64, expected: u64, m: u64 },
    #[error("members {a} and {b} violate the pair condition: {detail}")]
    PairCondition { a: usize, b: usize, detail: String },
    #[error("points {a} and {b} are collinear: not a partial ovoid")]
    NotPartialOvoid { a: usize, b: usize },
    #[error("claimed maximal, but point {point} extends the set")]
    NotMaximal { point: usize },
    #[error("a tangent or fully isotropic line carries {hits} members")]
    NotTangentSet { hits: usize },
    #[error("the sheet ovoids disagree on the fixed hyperplane")]
    PlaneDisagreement,
    #[error("a line meets the point set in {hits} points, expected 1 or {secant}")]
    NotUnital { hits: u64, secant: u64 },
    #[error("not a 2-design: {0}")]
    NotDesign(String),
    #[error("no admissible element found: {0}")]
    NoElement(String),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Polar(#[from] PolarError),
}

type Result<T> = std::result::Result<T, ConstructionsError>;

// ------------------------------------------------------------------ helpers

fn bad(msg: impl Into<String>) -> ConstructionsError {
    ConstructionsError::BadParameters(msg.into())
}

/// Smallest prime factorization q = p^e, if q is a prime power > 1.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return (rest == 1).then_some((p, e));
        }
        p += 1;
    }
    Some((q, 1))
}

fn unit_vec(m: usize, i: usize) -> Vec<Fe> {
    let mut v = vec![0; m];
    v[i] = 1;
    v
}

/// Ambient point indices of a subspace, in span-enumeration order.
fn member_point_ids(ps: &PolarSpace, sub: &Subspace) -> Result<Vec<usize>> {
    let f = ps.field();
    sub.points(f)
        .iter()
        .map(|p| {
            ps.ambient()
                .point_index(p)
                .ok_or_else(|| bad("subspace point outside the ambient space"))
        })
        .collect()
}

fn is_totally_isotropic(ps: &PolarSpace, sub: &Subspace) -> bool {
    let f = ps.field();
    let rows = sub.rows();
    sub.points(f).iter().all(|p| ps.is_isotropic(p))
        && rows
            .iter()
            .enumerate()
            .all(|(i, u)| rows.iter().skip(i + 1).all(|v| ps.beta(u, v) == 0))
}

/// All lines (vector dimension 2) inside a subspace, ascending.
fn lines_in_subspace(f: &Field, sub: &Subspace) -> Vec<Subspace> {
    let pts = sub.points(f);
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            out.insert(Subspace::from_rows(
                f,
                sub.ambient(),
                &[pts[i].clone(), pts[j].clone()],
            ));
        }
    }
    out.into_iter().collect()
}

// ---------------------------------------------------------- regular systems

/// Check that `members` is an m-regular system of generators with respect to
/// totally isotropic (k-1)-subspaces: every such subspace lies in exactly m
/// members. Returns m. Rejects duplicates, non-generators, irregular
/// incidence, and any size that contradicts the double count
/// |members| = m * prod_{i=1..k} (q^{d+e-i} + 1).
pub fn verify_regular_system(ps: &PolarSpace, members: &[Subspace], k: u32) -> Result<u64> {
    let d = ps.rank_d();
    if k == 0 || k > d {
        return Err(bad(format!("k must lie in 1..={d}")));
    }
    let mut seen = BTreeSet::new();
    for (index, mem) in members.iter().enumerate() {
        if mem.vdim() != d as usize || !is_totally_isotropic(ps, mem) {
            return Err(ConstructionsError::NonGenerator { index });
        }
        if !seen.insert(mem.clone()) {
            return Err(ConstructionsError::DuplicateMember { index });
        }
    }
    let m = if k == 1 {
        let mut counts = vec![0u64; ps.ambient().num_points()];
        for mem in members {
            for pid in member_point_ids(ps, mem)? {
                counts[pid] += 1;
            }
        }
        let mut m_opt: Option<u64> = None;
        for &pid in ps.points() {
            match m_opt {
                None => m_opt = Some(counts[pid]),
                Some(m0) if m0 != counts[pid] => {
                    return Err(ConstructionsError::NotRegular {
                        object: pid,
                        count: counts[pid],
                        expected: m0,
                    })
                }
                _ => {}
            }
        }
        m_opt.unwrap_or(0)
    } else {
        let f = ps.field();
        let subs = ps.enumerate_ti(k)?;
        let mut m_opt: Option<u64> = None;
        for (si, sub) in subs.iter().enumerate() {
            let c = members.iter().filter(|mem| mem.contains_sub(f, sub)).count() as u64;
            match m_opt {
                None => m_opt = Some(c),
                Some(m0) if m0 != c => {
                    return Err(ConstructionsError::NotRegular {
                        object: si,
                        count: c,
                        expected: m0,
                    })
                }
                _ => {}
            }
        }
        m_opt.unwrap_or(0)
    };
    let mut expected = BigUint::from(m);
    for i in 1..=k {
        expected *= ps.q_pow_d_e_minus(i) + 1u32;
    }
    if BigUint::from(members.len() as u64) != expected {
        let exp64 = u64::try_from(&expected).unwrap_or(u64::MAX);
        return Err(ConstructionsError::SizeMismatch {
            got: members.len() as u64,
            expected: exp64,
            m,
        });
    }
    Ok(m)
}

/// Split the generators of a hyperbolic quadric into its two families:
/// two generators share a family exactly when their intersection dimension
/// has the same parity as the rank. Checks consistency over all pairs.
pub fn split_generator_families(ps: &PolarSpace) -> Result<(Vec<Subspace>, Vec<Subspace>)> {
    if ps.family() != PolarFamily::Hyperbolic {
        return Err(bad("generator families split only on hyperbolic quadrics"));
    }
    let f = ps.field();
    let gens = ps.generators()?;
    let d = ps.rank_d() as usize;
    let same_family =
        |a: &Subspace, b: &Subspace| (d - a.meet(f, b).vdim()) % 2 == 0;
    let cls: Vec<bool> = gens.iter().map(|g| same_family(g, &gens[0])).collect();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if (cls[i] == cls[j]) != same_family(&gens[i], &gens[j]) {
                return Err(ConstructionsError::PairCondition {
                    a: i,
                    b: j,
                    detail: "family classes are not consistent across this pair".into(),
                });
            }
        }
    }
    let mut latin = Vec::new();
    let mut greek = Vec::new();
    for (g, &c) in gens.iter().zip(&cls) {
        if c {
            latin.push(g.clone());
        } else {
            greek.push(g.clone());
        }
    }
    if latin.len() != greek.len() {
        return Err(bad("the two families have unequal sizes"));
    }
    Ok((latin, greek))
}

/// Project a parabolic quadric in even characteristic away from its nucleus
/// (which must be the last coordinate direction) onto a symplectic space of
/// ambient dimension one less, carrying the given totally isotropic members
/// along. Fails if any member passes through the nucleus.
pub fn nucleus_projection(
    ps: &PolarSpace,
    members: &[Subspace],
) -> Result<(PolarSpace, Vec<Subspace>)> {
    if ps.family() != PolarFamily::Parabolic || ps.field().p() != 2 {
        return Err(bad(
            "nucleus projection applies to parabolic quadrics in characteristic 2",
        ));
    }
    let f = ps.field();
    let n = ps.ambient().n();
    let m = n + 1;
    let gram: Vec<Vec<Fe>> = (0..m)
        .map(|i| (0..m).map(|j| ps.beta(&unit_vec(m, i), &unit_vec(m, j))).collect())
        .collect();
    let rad = linalg::kernel_basis_n(f, gram, m);
    if rad.len() != 1 || normalize(f, &rad[0]) != unit_vec(m, m - 1) {
        return Err(bad("the nucleus is not the last coordinate direction"));
    }
    let w = PolarSpace::new(PolarFamily::Symplectic, n - 1, f.q())?;
    let wf = w.field().clone();
    let mut projected = Vec::with_capacity(members.len());
    for (index, mem) in members.iter().enumerate() {
        let rows: Vec<Vec<Fe>> = mem.rows().iter().map(|r| r[..m - 1].to_vec()).collect();
        let sub = Subspace::from_rows(&wf, n - 1, &rows);
        if sub.vdim() != mem.vdim() {
            return Err(ConstructionsError::NonGenerator { index });
        }
        if !is_totally_isotropic(&w, &sub) {
            return Err(ConstructionsError::NonGenerator { index });
        }
        projected.push(sub);
    }
    Ok((w, projected))
}

/// For every hyperplane of the ambient space, count the isotropic points in
/// it and the members contained in it; group the member counts by the point
/// count. The keys of the returned map are point counts, the values the sets
/// of member counts that occur alongside them.
pub fn hyperplane_section_profile(
    ps: &PolarSpace,
    members: &[Subspace],
) -> Result<BTreeMap<u64, BTreeSet<u64>>> {
    let f = ps.field();
    let amb = ps.ambient();
    let mut profile: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for w in amb.points() {
        let iso = ps
            .points()
            .iter()
            .filter(|&&pid| linalg::dot(f, w, amb.point(pid)) == 0)
            .count() as u64;
        let mem = members
            .iter()
            .filter(|mem| mem.rows().iter().all(|r| linalg::dot(f, w, r) == 0))
            .count() as u64;
        profile.entry(iso).or_default().insert(mem);
    }
    Ok(profile)
}

// ------------------------------------------------------------ system search

/// Outcome of an exact-cover style search for an m-regular system.
pub struct SystemSearch {
    /// The members found, if any (re-verified before being returned).
    pub members: Option<Vec<Subspace>>,
    /// Number of tentative line choices performed (deterministic).
    pub nodes: u64,
    /// True when the search space was exhausted rather than cut off.
    pub exhausted: bool,
}

#[derive(Clone, Copy)]
enum Op {
    Chose(u32),
    Died(u32),
    Counted(u32),
    Supplied(u32),
}

/// Backtracking state for "cover every point exactly m times by lines".
/// Lines are 0 = free, 1 = chosen, 2 = dead. A trail of operations allows
/// exact undo; forced propagation selects every line a point still needs
/// once its remaining supply equals its remaining demand.
struct Cover {
    m: u32,
    line_pts: Vec<Vec<u32>>,
    pt_lines: Vec<Vec<u32>>,
    count: Vec<u32>,
    supply: Vec<u32>,
    state: Vec<u8>,
    chosen: Vec<u32>,
    trail: Vec<Op>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Cover {
    fn new(line_pts: Vec<Vec<u32>>, npts: usize, m: u32, budget: u64) -> Cover {
        let mut pt_lines = vec![Vec::new(); npts];
        for (li, pts) in line_pts.iter().enumerate() {
            for &p in pts {
                pt_lines[p as usize].push(li as u32);
            }
        }
        let supply = pt_lines.iter().map(|v| v.len() as u32).collect();
        let nlines = line_pts.len();
        Cover {
            m,
            line_pts,
            pt_lines,
            count: vec![0; npts],
            supply,
            state: vec![0; nlines],
            chosen: Vec::new(),
            trail: Vec::new(),
            nodes: 0,
            budget,
            aborted: false,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail is nonempty") {
                Op::Chose(l) => {
                    self.state[l as usize] = 0;
                    self.chosen.pop();
                }
                Op::Died(l) => self.state[l as usize] = 0,
                Op::Counted(p) => self.count[p as usize] -= 1,
                Op::Supplied(p) => self.supply[p as usize] += 1,
            }
        }
    }

    /// Choose a free line. Returns false on any contradiction (overfull
    /// point, or a point whose demand exceeds its remaining supply).
    fn choose(&mut self, l: u32) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return false;
        }
        self.state[l as usize] = 1;
        self.trail.push(Op::Chose(l));
        self.chosen.push(l);
        let pts = self.line_pts[l as usize].clone();
        for &p in &pts {
            self.count[p as usize] += 1;
            self.trail.push(Op::Counted(p));
            self.supply[p as usize] -= 1;
            self.trail.push(Op::Supplied(p));
            if self.count[p as usize] > self.m {
                return false;
            }
        }
        // a filled point kills every free line through it
        for &p in &pts {
            if self.count[p as usize] == self.m {
                let lines = self.pt_lines[p as usize].clone();
                for l2 in lines {
                    if self.state[l2 as usize] != 0 {
                        continue;
                    }
                    self.state[l2 as usize] = 2;
                    self.trail.push(Op::Died(l2));
                    let pts2 = self.line_pts[l2 as usize].clone();
                    for &p2 in &pts2 {
                        self.supply[p2 as usize] -= 1;
                        self.trail.push(Op::Supplied(p2));
                        if self.count[p2 as usize] + self.supply[p2 as usize] < self.m {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Repeatedly choose lines forced by a point whose remaining supply
    /// exactly matches its remaining demand. Sound for completeness: forced
    /// choices are necessary in every extension of the current state.
    fn propagate(&mut self) -> bool {
        loop {
            if self.aborted {
                return false;
            }
            let mut forced = None;
            for p in 0..self.count.len() {
                let need = self.m - self.count[p];
                if need == 0 {
                    continue;
                }
                if self.supply[p] < need {
                    return false;
                }
                if self.supply[p] == need {
                    forced = Some(p);
                    break;
                }
            }
            let Some(p) = forced else { return true };
            let lines = self.pt_lines[p].clone();
            for l in lines {
                if self.state[l as usize] == 0 && !self.choose(l) {
                    return false;
                }
            }
        }
    }

    /// Depth-first search branching on the least-index deficient point.
    /// `floor` remembers the candidate position already passed at this
    /// branching point, which is sound because the least deficient point
    /// index never decreases along a branch.
    fn dfs(&mut self, floor_pt: usize, floor_pos: usize) -> Option<Vec<u32>> {
        if self.aborted {
            return None;
        }
        let Some(p) = (0..self.count.len()).find(|&p| self.count[p] < self.m) else {
            return Some(self.chosen.clone());
        };
        let start = if p == floor_pt { floor_pos } else { 0 };
        let cands: Vec<(usize, u32)> = self.pt_lines[p]
            .iter()
            .enumerate()
            .skip(start)
            .map(|(i, &l)| (i, l))
            .collect();
        for (i, l) in cands {
            if self.state[l as usize] != 0 {
                continue;
            }
            let mark = self.trail.len();
            if self.choose(l) && self.propagate() {
                if let Some(sol) = self.dfs(p, i + 1) {
                    return Some(sol);
                }
            }
            self.undo_to(mark);
            if self.aborted {
                return None;
            }
        }
        None
    }
}

fn run_cover_search(
    ps: &PolarSpace,
    m: u64,
    node_budget: u64,
    force_first: bool,
) -> Result<SystemSearch> {
    if m == 0 || m > u64::from(u32::MAX) {
        return Err(bad("the regularity m must be a small positive integer"));
    }
    let gens = ps.generators()?;
    let mut local = HashMap::new();
    for (i, &pid) in ps.points().iter().enumerate() {
        local.insert(pid, i as u32);
    }
    let mut line_pts = Vec::with_capacity(gens.len());
    for g in &gens {
        let ids = member_point_ids(ps, g)?;
        line_pts.push(ids.iter().map(|pid| local[pid]).collect::<Vec<u32>>());
    }
    let mut cov = Cover::new(line_pts, ps.num_points(), m as u32, node_budget);
    let root_ok = if force_first {
        cov.choose(0) && cov.propagate()
    } else {
        cov.propagate()
    };
    let sol = if root_ok { cov.dfs(usize::MAX, 0) } else { None };
    if cov.aborted {
        return Ok(SystemSearch {
            members: None,
            nodes: cov.nodes,
            exhausted: false,
        });
    }
    match sol {
        Some(ids) => {
            let mut ids = ids;
            ids.sort_unstable();
            let members: Vec<Subspace> = ids.iter().map(|&i| gens[i as usize].clone()).collect();
            let got = verify_regular_system(ps, &members, 1)?;
            if got != m {
                return Err(bad(format!("search returned an {got}-regular system")));
            }
            Ok(SystemSearch {
                members: Some(members),
                nodes: cov.nodes,
                exhausted: false,
            })
        }
        None => Ok(SystemSearch {
            members: None,
            nodes: cov.nodes,
            exhausted: true,
        }),
    }
}

/// Exhaustively search for an m-regular system of generators (every point on
/// exactly m members) under a node budget. When the budget runs out the
/// result has `exhausted == false` and no members.
pub fn search_regular_system(ps: &PolarSpace, m: u64, node_budget: u64) -> Result<SystemSearch> {
    run_cover_search(ps, m, node_budget, false)
}

/// Search for a half-regular system on a rank-2 space whose per-point line
/// count t+1 is even: m = (t+1)/2. Complementation swaps solutions, so the
/// first generator can be pinned into the system without losing
/// completeness.
pub fn search_hemisystem(ps: &PolarSpace, node_budget: u64) -> Result<SystemSearch> {
    let (_, t) = ps
        .gq_params()
        .ok_or_else(|| bad("hemisystem search needs a rank-2 space"))?;
    if t % 2 == 0 {
        return Err(bad("the per-point line count t+1 must be even"));
    }
    run_cover_search(ps, (t + 1) / 2, node_budget, true)
}

// --------------------------------------------------- elliptic quadric lines

/// (q^n + 1)(q^{n+1} + 1) / (2(q + 1)) when integral: the size of a
/// partition of an elliptic quadric's points into hyperbolic sections.
pub fn elliptic_partition_count(q: u64, n: u32) -> Option<u64> {
    let qn = q.checked_pow(n)?;
    let qn1 = q.checked_pow(n + 1)?;
    let num = (qn as u128 + 1) * (qn1 as u128 + 1);
    let den = 2 * (q as u128 + 1);
    (num % den == 0).then_some((num / den) as u64)
}

/// A half-of-the-lines structure on the elliptic quadric in five projective
/// dimensions, odd q: built from a partition of the generators into
/// hyperbolic solid sections, one regulus chosen per section.
pub struct EllipticHemisystem {
    pub space: PolarSpace,
    /// Sizes of the three constituent external-line families.
    pub part_sizes: (usize, usize, usize),
    /// All external lines, one per hyperbolic section, pairwise compatible.
    pub external_lines: Vec<Subspace>,
    /// The 2(q+1) generators inside each section, indexed like
    /// `external_lines`; sections partition all generators.
    pub section_generators: Vec<Vec<Subspace>>,
    /// Per section, the chosen regulus and its opposite.
    pub reguli: Vec<(Vec<Subspace>, Vec<Subspace>)>,
    /// Concatenation of the chosen reguli.
    pub members: Vec<Subspace>,
    /// Every point lies on exactly this many members: (q^2 + 1)/2.
    pub m: u64,
}

impl EllipticHemisystem {
    /// The member set with one section's regulus swapped for its opposite.
    pub fn flipped_members(&self, section: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        for (i, (chosen, other)) in self.reguli.iter().enumerate() {
            out.extend_from_slice(if i == section { other } else { chosen });
        }
        out
    }
}

pub fn elliptic_hemisystem(q: u32) -> Result<EllipticHemisystem> {
    if q < 3 || q % 2 == 0 {
        return Err(bad("odd q >= 3 required"));
    }
    let expected_sections = elliptic_partition_count(q as u64, 2)
        .ok_or_else(|| bad("the section count is not integral"))?;
    let ps = PolarSpace::new(PolarFamily::Elliptic, 5, q)?;
    let f = ps.field().clone();
    let e = |i: usize| unit_vec(6, i);
    let qs = q as usize;

    // Hyperbolic solid on the first four coordinates; its perp is a line
    // without isotropic points.
    let solid = Subspace::from_rows(&f, 5, &[e(0), e(1), e(2), e(3)]);
    if ps.isotropic_points_in(&solid).len() != (qs + 1) * (qs + 1) {
        return Err(bad("the coordinate solid is not a hyperbolic section"));
    }
    let ell = ps.perp(&solid);
    let is_external = |line: &Subspace| ps.isotropic_points_in(line).is_empty();
    if ell.vdim() != 2 || !is_external(&ell) {
        return Err(bad("the perp of the coordinate solid is not external"));
    }

    // Family one: all external lines of the solid.
    let x0: Vec<Subspace> = lines_in_subspace(&f, &solid)
        .into_iter()
        .filter(is_external)
        .collect();
    let l1 = x0.first().cloned().ok_or_else(|| bad("no external line"))?;
    let l2 = ps.perp(&l1).meet(&f, &solid);
    if l2.vdim() != 2 || !is_external(&l2) || l2 == l1 {
        return Err(bad("the conjugate external line is degenerate"));
    }
    let pi1 = ps.perp(&l1);
    let pi2 = ps.perp(&l2);

    // Family two: external lines of the first perp solid that meet the base
    // line (that solid contains it).
    let x1: Vec<Subspace> = lines_in_subspace(&f, &pi1)
        .into_iter()
        .filter(|r| is_external(r) && r.meet(&f, &ell).vdim() >= 1)
        .collect();
    // Family three: external lines of the second perp solid meeting both the
    // base line and the first chosen line in exactly one point.
    let x2: Vec<Subspace> = lines_in_subspace(&f, &pi2)
        .into_iter()
        .filter(|r| {
            is_external(r) && r.meet(&f, &ell).vdim() == 1 && r.meet(&f, &l1).vdim() == 1
        })
        .collect();
    let part_sizes = (x0.len(), x1.len(), x2.len());

    let mut external_lines: Vec<Subspace> = Vec::new();
    let mut line_set = BTreeSet::new();
    for r in x0.iter().chain(&x1).chain(&x2) {
        if !line_set.insert(r.clone()) {
            return Err(bad("the external-line families overlap"));
        }
        external_lines.push(r.clone());
    }
    if external_lines.len() as u64 != expected_sections {
        return Err(bad(format!(
            "{} external lines, expected {expected_sections}",
            external_lines.len()
        )));
    }

    // Pairwise compatibility: a common point forces a non-tangent span, a
    // skew pair forces a span that is not (q+1)-secant.
    for i in 0..external_lines.len() {
        for j in (i + 1)..external_lines.len() {
            let a = &external_lines[i];
            let b = &external_lines[j];
            let meet = a.meet(&f, b).vdim();
            let span = a.span(&f, b);
            let iso = ps.isotropic_points_in(&span).len();
            let offends = (meet == 1 && iso == 1) || (meet == 0 && iso == qs + 1);
            if offends {
                return Err(ConstructionsError::PairCondition {
                    a: i,
                    b: j,
                    detail: format!("meet dimension {meet} with {iso} isotropic span points"),
                });
            }
        }
    }

    // Perp sections: hyperbolic solids partitioning all generators.
    let total_gens = ps.count_ti_formula(2);
    let mut section_generators = Vec::new();
    let mut reguli = Vec::new();
    let mut seen_gens: BTreeSet<Subspace> = BTreeSet::new();
    for r in &external_lines {
        let sec = ps.perp(r);
        if ps.isotropic_points_in(&sec).len() != (qs + 1) * (qs + 1) {
            return Err(bad("a perp section is not hyperbolic"));
        }
        let sec_lines = ps.ti_lines_in(&sec)?;
        if sec_lines.len() != 2 * (qs + 1) {
            return Err(bad("a perp section has the wrong number of generators"));
        }
        for l in &sec_lines {
            if !seen_gens.insert(l.clone()) {
                return Err(bad("perp sections share a generator"));
            }
        }
        let least = sec_lines.iter().min().expect("sections are nonempty").clone();
        let (ra, rb) = split_into_reguli(&f, &sec_lines)?;
        let (chosen, other) = if ra.contains(&least) { (ra, rb) } else { (rb, ra) };
        reguli.push((chosen, other));
        section_generators.push(sec_lines);
    }
    if BigUint::from(seen_gens.len() as u64) != total_gens {
        return Err(bad("the sections do not partition the generators"));
    }

    let members: Vec<Subspace> = reguli.iter().flat_map(|(c, _)| c.clone()).collect();
    let m = verify_regular_system(&ps, &members, 1)?;
    if m != (u64::from(q) * u64::from(q) + 1) / 2 {
        return Err(bad(format!("regularity {m}, expected (q^2+1)/2")));
    }
    Ok(EllipticHemisystem {
        space: ps,
        part_sizes,
        external_lines,
        section_generators,
        reguli,
        members,
        m,
    })
}

// ----------------------------------------------------- parabolic 1-system

/// A 1-system of the parabolic quadric in PG(6,3): 28 lines, one on each
/// generator-plane's worth of structure, together with the opposite reguli
/// and the plane systems they induce.
pub struct OneSystem {
    pub space: PolarSpace,
    pub members: Vec<Subspace>,
    pub opposite: Vec<Subspace>,
    /// Number of distinct points covered by the members.
    pub covered_points: usize,
    /// Rank of the span of all member and opposite rows.
    pub span_rank: usize,
    /// All generator planes through the members.
    pub base_planes: Vec<Subspace>,
    pub base_m: u64,
    /// All generator planes through members or opposites.
    pub derived_planes: Vec<Subspace>,
    pub derived_m: u64,
}

pub fn parabolic_one_system_q3() -> Result<OneSystem> {
    let f = Field::new(3, 1)?;
    let m = 7usize;
    let identity: Vec<Vec<Fe>> = (0..m).map(|i| unit_vec(m, i)).collect();
    let ps = PolarSpace::from_form(f.clone(), 6, FormKind::Quadratic, &identity)?;
    if ps.descriptor() != "Q(6,3)" {
        return Err(bad("the sum-of-squares form is not parabolic here"));
    }
    let e = |i: usize| unit_vec(m, i);

    // A simplex of pairwise orthogonal non-singular points.
    for i in 0..m {
        if ps.is_isotropic(&e(i)) {
            return Err(bad("a coordinate point is singular"));
        }
    }

    // Six solids pairing triangle edges with disjoint line pairs on the
    // complementary coordinates, plus the perp of the triangle plane.
    let pairs: [([usize; 2], [usize; 2]); 6] = [
        ([0, 1], [3, 4]),
        ([0, 1], [5, 6]),
        ([1, 2], [3, 6]),
        ([1, 2], [4, 5]),
        ([2, 0], [3, 5]),
        ([2, 0], [4, 6]),
    ];
    let mut solids: Vec<Subspace> = pairs
        .iter()
        .map(|(r, l)| Subspace::from_rows(&f, 6, &[e(r[0]), e(r[1]), e(l[0]), e(l[1])]))
        .collect();
    let triangle = Subspace::from_rows(&f, 6, &[e(0), e(1), e(2)]);
    solids.push(ps.perp(&triangle));

    let mut members = Vec::new();
    let mut opposite = Vec::new();
    for s in &solids {
        if s.vdim() != 4 || ps.isotropic_points_in(s).len() != 16 {
            return Err(bad("a solid is not a hyperbolic section"));
        }
        let sec_lines = ps.ti_lines_in(s)?;
        if sec_lines.len() != 8 {
            return Err(bad("a solid section has the wrong number of lines"));
        }
        let least = sec_lines.iter().min().expect("nonempty").clone();
        let (ra, rb) = split_into_reguli(&f, &sec_lines)?;
        let (chosen, other) = if ra.contains(&least) { (ra, rb) } else { (rb, ra) };
        members.extend(chosen);
        opposite.extend(other);
    }
    let member_set: BTreeSet<Subspace> = members.iter().cloned().collect();
    let opp_set: BTreeSet<Subspace> = opposite.iter().cloned().collect();
    if member_set.len() != 28 || opp_set.len() != 28 || member_set.intersection(&opp_set).count() != 0
    {
        return Err(bad("regulus selection produced overlapping line sets"));
    }

    // Covered points, and the defining property: generators through one
    // member avoid every other member.
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut per_member_pts: Vec<BTreeSet<usize>> = Vec::new();
    for mem in &members {
        let pts: BTreeSet<usize> = member_point_ids(&ps, mem)?.into_iter().collect();
        covered.extend(&pts);
        per_member_pts.push(pts);
    }
    let mut base_set: BTreeSet<Subspace> = BTreeSet::new();
    for (mi, mem) in members.iter().enumerate() {
        let planes = ps.ti_extensions(mem)?;
        if planes.len() != 4 {
            return Err(bad("a member lies on the wrong number of generators"));
        }
        for pl in &planes {
            for pid in member_point_ids(&ps, pl)? {
                if covered.contains(&pid) && !per_member_pts[mi].contains(&pid) {
                    return Err(ConstructionsError::PairCondition {
                        a: mi,
                        b: usize::MAX,
                        detail: "a generator through a member meets another member".into(),
                    });
                }
            }
            base_set.insert(pl.clone());
        }
    }

    let mut all_rows: Vec<Vec<Fe>> = Vec::new();
    for sub in members.iter().chain(&opposite) {
        all_rows.extend(sub.rows().iter().cloned());
    }
    let span_rank = linalg::rank(&f, all_rows);

    let mut derived_set = base_set.clone();
    for opp in &opposite {
        for pl in ps.ti_extensions(opp)? {
            derived_set.insert(pl);
        }
    }
    let base_planes: Vec<Subspace> = base_set.into_iter().collect();
    let derived_planes: Vec<Subspace> = derived_set.into_iter().collect();
    let base_m = verify_regular_system(&ps, &base_planes, 1)?;
    let derived_m = verify_regular_system(&ps, &derived_planes, 1)?;
    Ok(OneSystem {
        space: ps,
        covered_points: covered.len(),
        members,
        opposite,
        span_rank,
        base_planes,
        base_m,
        derived_planes,
        derived_m,
    })
}

// ------------------------------------------------------------ partial ovoids

/// A set of pairwise non-collinear points of a polar space, optionally
/// claimed maximal (no point of the space extends it).
pub struct PartialOvoid {
    pub space: PolarSpace,
    pub points: Vec<usize>,
    pub maximal: bool,
}

/// Pairwise route: every two members must be non-orthogonal; if maximality
/// is claimed, every non-member must be orthogonal to some member.
pub fn verify_partial_ovoid(po: &PartialOvoid) -> Result<()> {
    let ps = &po.space;
    let amb = ps.ambient();
    let mut seen = BTreeSet::new();
    for (index, &pid) in po.points.iter().enumerate() {
        if pid >= amb.num_points() || !ps.has_ambient_index(pid) {
            return Err(bad(format!("member {index} is not a point of the space")));
        }
        if !seen.insert(pid) {
            return Err(ConstructionsError::DuplicateMember { index });
        }
    }
    for i in 0..po.points.len() {
        for j in (i + 1)..po.points.len() {
            let (a, b) = (po.points[i], po.points[j]);
            if ps.beta(amb.point(a), amb.point(b)) == 0 {
                return Err(ConstructionsError::NotPartialOvoid { a, b });
            }
        }
    }
    if po.maximal {
        for &pid in ps.points() {
            if seen.contains(&pid) {
                continue;
            }
            let v = amb.point(pid);
            if po
                .points
                .iter()
                .all(|&r| ps.beta(v, amb.point(r)) != 0)
            {
                return Err(ConstructionsError::NotMaximal { point: pid });
            }
        }
    }
    Ok(())
}

/// Independent route: enumerate every totally isotropic line of the space
/// and check none carries two members.
pub fn verify_partial_ovoid_lines(po: &PartialOvoid) -> Result<()> {
    let ps = &po.space;
    let set: BTreeSet<usize> = po.points.iter().copied().collect();
    if set.len() != po.points.len() {
        return Err(bad("duplicate members"));
    }
    for line in ps.enumerate_ti(2)? {
        let hits: Vec<usize> = member_point_ids(ps, &line)?
            .into_iter()
            .filter(|pid| set.contains(pid))
            .collect();
        if hits.len() > 1 {
            return Err(ConstructionsError::NotPartialOvoid {
                a: hits[0],
                b: hits[1],
            });
        }
    }
    Ok(())
}

/// Lexicographically first partial ovoid of the given size, optionally
/// constrained to meet the hyperplane "last coordinate zero" in exactly the
/// given number of points. Depth-first over ascending ambient indices.
pub fn ovoid_search(
    ps: &PolarSpace,
    size: usize,
    plane_points: Option<usize>,
) -> Option<Vec<usize>> {
    let amb = ps.ambient();
    let pts = ps.points();
    let coords: Vec<&Vec<Fe>> = pts.iter().map(|&pid| amb.point(pid)).collect();
    let on_plane: Vec<bool> = coords
        .iter()
        .map(|c| *c.last().expect("nonempty coordinates") == 0)
        .collect();
    fn dfs(
        ps: &PolarSpace,
        coords: &[&Vec<Fe>],
        on_plane: &[bool],
        size: usize,
        plane_points: Option<usize>,
        start: usize,
        chosen: &mut Vec<usize>,
        plane_cnt: usize,
    ) -> bool {
        if chosen.len() == size {
            return plane_points.is_none_or(|t| plane_cnt == t);
        }
        for i in start..coords.len() {
            if coords.len() - i < size - chosen.len() {
                break;
            }
            let pc = plane_cnt + usize::from(on_plane[i]);
            if let Some(t) = plane_points {
                if pc > t {
                    continue;
                }
            }
            if chosen
                .iter()
                .any(|&j| ps.beta(coords[i], coords[j]) == 0)
            {
                continue;
            }
            chosen.push(i);
            if dfs(ps, coords, on_plane, size, plane_points, i + 1, chosen, pc) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    dfs(ps, &coords, &on_plane, size, plane_points, 0, &mut chosen, 0)
        .then(|| chosen.iter().map(|&i| pts[i]).collect())
}

/// Greedy maximal partial ovoid: scan points in ascending ambient order and
/// keep each one non-orthogonal to everything kept so far. The result is
/// maximal by construction.
pub fn greedy_partial_ovoid(ps: &PolarSpace) -> Vec<usize> {
    let amb = ps.ambient();
    let mut out: Vec<usize> = Vec::new();
    for &pid in ps.points() {
        let v = amb.point(pid);
        if out.iter().all(|&r| ps.beta(v, amb.point(r)) != 0) {
            out.push(pid);
        }
    }
    out
}

// ------------------------------------------------- twisted cubic ovoids

/// A partial ovoid of a symplectic space in three projective dimensions
/// over a square field: the rational normal cubic plus one orbit of its
/// subfield stabilizer, together with the subgeometry data used to extend
/// it by one more point.
pub struct TwistedCubicOvoid {
    pub ovoid: PartialOvoid,
    /// Ambient indices of the cubic's points (including its infinite one).
    pub cubic: Vec<usize>,
    /// Ambient indices of the extra orbit.
    pub orbit: Vec<usize>,
    /// Order of the acting matrix group modulo scalars.
    pub group_order: u64,
    /// group_order / |orbit|.
    pub stabilizer_order: u64,
    /// The non-cube field constant steering the orbit.
    pub x_param: Fe,
    /// Number of points of the subgeometry that carries extension points.
    pub carrier_size: usize,
    /// Number of cubic points on that subgeometry.
    pub cubic_on_carrier: usize,
    /// First carrier point extending the partial ovoid.
    pub extension_point: usize,
}

pub fn twisted_cubic_partial_ovoid(q: u32, eps: i32) -> Result<TwistedCubicOvoid> {
    let (p, e) = prime_power(q).ok_or_else(|| bad("q must be a prime power"))?;
    if e % 2 != 0 || p < 5 {
        return Err(bad("q must be the square of a prime power, characteristic >= 5"));
    }
    let s = p.pow(e / 2);
    let want_eps = if s % 3 == 1 { 1 } else { -1 };
    if eps != want_eps {
        return Err(bad(format!("the sign must be {want_eps} for sqrt(q) = {s}")));
    }
    let f = Field::new(p, e)?;
    let small = Field::new(p, e / 2)?;
    let emb = f.embedding_from(&small)?;
    let sub_elems: BTreeSet<Fe> = emb.iter().copied().collect();

    // The symplectic form that pairs the cubic with its osculating planes.
    let mut gram = vec![vec![0; 4]; 4];
    gram[0][3] = 1;
    gram[1][2] = 1;
    gram[2][1] = f.neg(1);
    gram[3][0] = f.neg(1);
    let ps = PolarSpace::from_form(f.clone(), 3, FormKind::Alternating, &gram)?;
    let f = ps.field().clone();
    let amb = ps.ambient();
    let idx = |v: &[Fe]| -> Result<usize> {
        amb.point_index(v).ok_or_else(|| bad("point outside the ambient space"))
    };

    let three = 3 % p;
    let neg3 = f.neg(three);
    let norm_exp = i64::from(s) + 1;

    // The cubic and its parameter-to-point map.
    let mut cubic = Vec::new();
    for t in 0..f.q() {
        let v = [
            1,
            f.mul(neg3, t),
            f.mul(t, t),
            f.mul(t, f.mul(t, t)),
        ];
        cubic.push(idx(&v)?);
    }
    cubic.push(idx(&[0, 0, 0, 1])?);
    let cubic_set: BTreeSet<usize> = cubic.iter().copied().collect();
    if cubic_set.len() != cubic.len() {
        return Err(bad("the cubic points are not distinct"));
    }

    // Steering constant: least non-cube outside the subfield (with
    // non-trivial subfield norm in the minus case).
    let x_param = (0..f.q())
        .find(|&x| {
            !f.is_cube(x)
                && !sub_elems.contains(&x)
                && (eps == 1 || f.pow(x, norm_exp) != 1)
        })
        .ok_or_else(|| ConstructionsError::NoElement("no admissible steering constant".into()))?;

    // Value tables.
    let sq: Vec<Fe> = (0..f.q()).map(|a| f.mul(a, a)).collect();
    let cube: Vec<Fe> = (0..f.q()).map(|a| f.mul(a, sq[a as usize])).collect();
    let frob: Vec<Fe> = (0..f.q()).map(|a| f.pow(a, i64::from(s))).collect();
    let nrm: Vec<Fe> = (0..f.q()).map(|a| f.pow(a, norm_exp)).collect();
    let t3x = f.mul(three, x_param);

    let orbit_point = |a: Fe, b: Fe, c: Fe, d: Fe| -> [Fe; 4] {
        [
            f.add(cube[a as usize], f.mul(x_param, cube[b as usize])),
            f.neg(f.add(
                f.mul(three, f.mul(sq[a as usize], c)),
                f.mul(t3x, f.mul(sq[b as usize], d)),
            )),
            f.add(f.mul(a, sq[c as usize]), f.mul(x_param, f.mul(b, sq[d as usize]))),
            f.add(cube[c as usize], f.mul(x_param, cube[d as usize])),
        ]
    };

    let mut orbit_set: BTreeSet<usize> = BTreeSet::new();
    let mut quadruples: u64 = 0;
    let scalars: u64;
    if eps == 1 {
        scalars = u64::from(s) - 1;
        for &a in &emb {
            for &b in &emb {
                for &c in &emb {
                    for &d in &emb {
                        if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
                            continue;
                        }
                        quadruples += 1;
                        orbit_set.insert(idx(&orbit_point(a, b, c, d))?);
                    }
                }
            }
        }
    } else {
        scalars = u64::from(f.q()) - 1;
        for a in 0..f.q() {
            for b in 0..f.q() {
                let ab = f.mul(a, frob[b as usize]);
                let nab = f.add(nrm[a as usize], nrm[b as usize]);
                for c in 0..f.q() {
                    for d in 0..f.q() {
                        if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
                            continue;
                        }
                        if f.sub(ab, f.mul(c, frob[d as usize])) != 0 {
                            continue;
                        }
                        if f.sub(nab, f.add(nrm[c as usize], nrm[d as usize])) != 0 {
                            continue;
                        }
                        quadruples += 1;
                        orbit_set.insert(idx(&orbit_point(a, b, c, d))?);
                    }
                }
            }
        }
    }
    if quadruples % scalars != 0 {
        return Err(bad("the group order is not divisible by the scalar count"));
    }
    let group_order = quadruples / scalars;
    let orbit: Vec<usize> = orbit_set.iter().copied().collect();
    if orbit.is_empty() || group_order % orbit.len() as u64 != 0 {
        return Err(bad("the orbit size does not divide the group order"));
    }
    let stabilizer_order = group_order / orbit.len() as u64;
    if orbit.iter().any(|pid| cubic_set.contains(pid)) {
        return Err(bad("the orbit meets the cubic"));
    }

    let mut points = cubic.clone();
    points.extend(&orbit);
    points.sort_unstable();
    let su = u64::from(s);
    let qu = u64::from(q);
    let expected = (qu * su + 3 * qu - su + 3) / 3;
    if points.len() as u64 != expected {
        return Err(bad(format!("{} points, expected {expected}", points.len())));
    }
    let ovoid = PartialOvoid {
        space: ps,
        points,
        maximal: false,
    };
    verify_partial_ovoid(&ovoid)?;
    let ps = &ovoid.space;

    // The carrier subgeometry for extension points.
    let carrier: BTreeSet<usize> = if eps == 1 {
        // Subfield-coordinate points.
        ps.ambient()
            .points()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.iter().all(|c| sub_elems.contains(c)))
            .map(|(i, _)| i)
            .collect()
    } else {
        // The twisted subgeometry (alpha, -3 beta, beta^s, alpha^s): fixed
        // points of a non-standard involution, still a copy of PG(3, s).
        let s_exp = i64::from(s);
        let mut set = BTreeSet::new();
        for alpha in 0..f.q() {
            for beta in 0..f.q() {
                if alpha == 0 && beta == 0 {
                    continue;
                }
                let v = [
                    alpha,
                    f.mul(neg3, beta),
                    f.pow(beta, s_exp),
                    f.pow(alpha, s_exp),
                ];
                let pid = ps
                    .ambient()
                    .point_index(&v)
                    .ok_or_else(|| bad("carrier point outside the ambient space"))?;
                set.insert(pid);
            }
        }
        set
    };
    let carrier_size = carrier.len();
    let cubic_on_carrier = cubic.iter().filter(|pid| carrier.contains(pid)).count();

    // First carrier point off every osculating plane of the carrier's own
    // cubic and non-orthogonal to every member. The carrier cubic is the
    // subfield parameter set in the plus case, the norm-one parameter set
    // in the minus case (passing through the infinite point only in the
    // plus case).
    let osc_plane = |t: Fe| {
        vec![
            f.mul(t, f.mul(t, t)),
            f.mul(t, t),
            f.mul(three, t),
            f.neg(1),
        ]
    };
    let oscul: Vec<Vec<Fe>> = if eps == 1 {
        emb.iter()
            .map(|&t| osc_plane(t))
            .chain(std::iter::once(vec![1, 0, 0, 0]))
            .collect()
    } else {
        (0..f.q())
            .filter(|&t| f.pow(t, i64::from(s) + 1) == 1)
            .map(osc_plane)
            .collect()
    };
    let member_coords: Vec<&Vec<Fe>> = ovoid
        .points
        .iter()
        .map(|&pid| ps.ambient().point(pid))
        .collect();
    let ovoid_set: BTreeSet<usize> = ovoid.points.iter().copied().collect();
    let extension_point = carrier
        .iter()
        .copied()
        .find(|pid| {
            if ovoid_set.contains(pid) {
                return false;
            }
            let v = ps.ambient().point(*pid);
            oscul.iter().all(|w| linalg::dot(&f, w, v) != 0)
                && member_coords.iter().all(|r| ps.beta(v, r) != 0)
        })
        .ok_or_else(|| ConstructionsError::NoElement("no extension point on the carrier".into()))?;

    Ok(TwistedCubicOvoid {
        cubic,
        orbit,
        group_order,
        stabilizer_order,
        x_param,
        carrier_size,
        cubic_on_carrier,
        extension_point,
        ovoid,
    })
}

// ------------------------------------------------- cyclic W(5,q) ovoids

/// A maximal partial ovoid of a symplectic space in five projective
/// dimensions obtained from the norm-one cycle of a cubic field extension.
pub struct CyclicOvoid {
    pub ovoid: PartialOvoid,
    /// Points of the ambient subgeometry model (the full point count).
    pub subgeometry_points: u64,
    pub orbit_size: usize,
}

pub fn w5_cyclic_partial_ovoid(q: u32, c: Fe) -> Result<CyclicOvoid> {
    let (p, e) = prime_power(q).ok_or_else(|| bad("q must be a prime power"))?;
    if c == 0 || c >= q {
        return Err(bad("the orbit constant must be a nonzero field element"));
    }
    let small = Field::new(p, e)?;
    let big = Field::new(p, 3 * e)?;
    let expansion = SubfieldExpansion::new(&big, q)?;
    let emb = big.embedding_from(&small)?;
    let emb_back: HashMap<Fe, Fe> = emb
        .iter()
        .enumerate()
        .map(|(sm, &bg)| (bg, sm as Fe))
        .collect();
    let xbar = p as Fe; // the class of X generates the big field over GF(q)

    // Cross-check the expansion basis: coordinates must recombine through
    // powers of the generator.
    for x in 0..big.q() {
        let coords = expansion.expand(&big, x);
        let mut acc = 0;
        let mut pw = 1;
        for &cj in &coords {
            acc = big.add(acc, big.mul(cj, pw));
            pw = big.mul(pw, xbar);
        }
        if acc != x {
            return Err(bad("expansion basis mismatch"));
        }
    }

    // Trace Gram of the extension pairing and the symplectic form it induces
    // on pairs.
    let mut tr = vec![vec![0; 3]; 3];
    for (i, row) in tr.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let t = big.trace_to_sub(big.pow(xbar, (i + j) as i64), q)?;
            *cell = *emb_back
                .get(&t)
                .ok_or_else(|| bad("trace landed outside the subfield"))?;
        }
    }
    let mut gram = vec![vec![0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            gram[i][3 + j] = tr[i][j];
            gram[3 + i][j] = small.neg(tr[i][j]);
        }
    }
    let ps = PolarSpace::from_form(small.clone(), 5, FormKind::Alternating, &gram)?;
    if ps.descriptor() != format!("W(5,{q})") {
        return Err(bad("the trace form is degenerate"));
    }

    // Norm-one orbit: (a, c / a) across the norm-one cycle.
    let norm_exp = i64::from(q) * i64::from(q) + i64::from(q) + 1;
    let c_big = emb[c as usize];
    let mut orbit_ids: BTreeSet<usize> = BTreeSet::new();
    let mut raw: Vec<(Fe, Fe, Vec<Fe>)> = Vec::new();
    for a in 1..big.q() {
        if big.pow(a, norm_exp) != 1 {
            continue;
        }
        let b = big.mul(c_big, big.inv(a).ok_or_else(|| bad("nonzero element"))?);
        let mut v: Vec<Fe> = Vec::with_capacity(6);
        for half in [a, b] {
            for cj in expansion.expand(&big, half) {
                v.push(
                    *emb_back
                        .get(&cj)
                        .ok_or_else(|| bad("expansion landed outside the subfield"))?,
                );
            }
        }
        let pid = ps
            .ambient()
            .point_index(&v)
            .ok_or_else(|| bad("orbit point outside the ambient space"))?;
        orbit_ids.insert(pid);
        raw.push((a, b, v));
    }
    let orbit_size = orbit_ids.len();
    let expected = (u64::from(q) * u64::from(q) + u64::from(q) + 1) as usize;
    if orbit_size != expected || raw.len() != expected {
        return Err(bad(format!("orbit size {orbit_size}, expected {expected}")));
    }

    // Form agreement: the trace of the extension-field determinant must
    // equal the matrix form on the raw coordinates, for every pair.
    for i in 0..raw.len() {
        for j in (i + 1)..raw.len() {
            let (ai, bi, vi) = &raw[i];
            let (aj, bj, vj) = &raw[j];
            let det = big.sub(big.mul(*ai, *bj), big.mul(*aj, *bi));
            let t = big.trace_to_sub(det, q)?;
            let t_small = *emb_back.get(&t).ok_or_else(|| bad("trace outside subfield"))?;
            if ps.beta(vi, vj) != t_small {
                return Err(bad("the trace pairing disagrees with the matrix form"));
            }
        }
    }

    // Extra grounding at q = 2: the pair-to-point map is a bijection onto
    // the whole ambient point set.
    if q == 2 {
        let mut all = BTreeSet::new();
        for a in 0..big.q() {
            for b in 0..big.q() {
                if a == 0 && b == 0 {
                    continue;
                }
                let mut v = Vec::with_capacity(6);
                for half in [a, b] {
                    for cj in expansion.expand(&big, half) {
                        v.push(*emb_back.get(&cj).expect("subfield coordinate"));
                    }
                }
                all.insert(
                    ps.ambient()
                        .point_index(&v)
                        .ok_or_else(|| bad("pair point outside the ambient space"))?,
                );
            }
        }
        if all.len() != ps.ambient().num_points() {
            return Err(bad("the pair map is not a bijection"));
        }
    }

    let subgeometry_points = ps.ambient().num_points() as u64;
    let ovoid = PartialOvoid {
        space: ps,
        points: orbit_ids.into_iter().collect(),
        maximal: true,
    };
    verify_partial_ovoid(&ovoid)?;
    Ok(CyclicOvoid {
        ovoid,
        subgeometry_points,
        orbit_size,
    })
}

// ------------------------------------------------------------ Sherk sets

/// Parameters of a Sherk set in a cubic extension: alpha and delta must lie
/// in the base subfield.
pub struct SherkParams {
    pub alpha: Fe,
    pub beta: Fe,
    pub gamma: Fe,
    pub delta: Fe,
}

/// The solution set of alpha N(x) + T(beta^{q^2} x^{q+1}) + T(gamma x)
/// + delta = 0 over the cubic extension, plus an infinite point exactly
/// when alpha vanishes.
pub struct SherkSet {
    pub elements: Vec<Fe>,
    pub has_infinity: bool,
}

impl SherkSet {
    pub fn size(&self) -> usize {
        self.elements.len() + usize::from(self.has_infinity)
    }
}

pub fn sherk_surface(f3: &Field, sub_q: u32, pr: &SherkParams) -> Result<SherkSet> {
    let q = u64::from(sub_q);
    if u64::from(f3.q()) != q * q * q {
        return Err(bad("the field must be the cubic extension of the subfield"));
    }
    let sub: BTreeSet<Fe> = f3.subfield_elements(sub_q)?.into_iter().collect();
    if !sub.contains(&pr.alpha) || !sub.contains(&pr.delta) {
        return Err(bad("alpha and delta must lie in the subfield"));
    }
    if pr.alpha == 0 && pr.beta == 0 && pr.gamma == 0 && pr.delta == 0 {
        return Err(bad("the zero tuple is degenerate"));
    }
    let norm_exp = (q * q + q + 1) as i64;
    let beta_conj = f3.pow(pr.beta, (q * q) as i64);
    let mut elements = Vec::new();
    for x in 0..f3.q() {
        let t1 = f3.mul(pr.alpha, f3.pow(x, norm_exp));
        let t2 = f3.trace_to_sub(f3.mul(beta_conj, f3.pow(x, (q + 1) as i64)), sub_q)?;
        let t3 = f3.trace_to_sub(f3.mul(pr.gamma, x), sub_q)?;
        if f3.add(f3.add(t1, t2), f3.add(t3, pr.delta)) == 0 {
            elements.push(x);
        }
    }
    let out = SherkSet {
        elements,
        has_infinity: pr.alpha == 0,
    };
    let allowed = [
        1,
        (q * q - q + 1) as usize,
        (q * q + 1) as usize,
        (q * q + q + 1) as usize,
    ];
    if !allowed.contains(&out.size()) {
        return Err(bad(format!("inadmissible size {}", out.size())));
    }
    Ok(out)
}

// --------------------------------------------- even-characteristic W(5,q)

/// A maximal partial ovoid of the symplectic space in five projective
/// dimensions over an even-order field: one elliptic-quadric half glued to
/// a tangent-cone half.
pub struct EvenCharOvoid {
    pub ovoid: PartialOvoid,
    /// Least field element of absolute trace one.
    pub delta: Fe,
    /// The elliptic-quadric half (q^2 + 1 points).
    pub elliptic_part: Vec<usize>,
    /// The cone-side half (q^2 + 1 points).
    pub quadric_part: Vec<usize>,
}

pub fn w5_even_partial_ovoid(q: u32) -> Result<EvenCharOvoid> {
    let (p, _) = prime_power(q).ok_or_else(|| bad("q must be a prime power"))?;
    if p != 2 {
        return Err(bad("even order required"));
    }
    let ps = PolarSpace::new(PolarFamily::Symplectic, 5, q)?;
    let f = ps.field().clone();
    let delta = (0..q)
        .find(|&d| f.trace_to_sub(d, 2).is_ok_and(|t| t == 1))
        .ok_or_else(|| ConstructionsError::NoElement("no trace-one element".into()))?;
    let amb = ps.ambient();
    let idx = |v: &[Fe]| -> Result<usize> {
        amb.point_index(v).ok_or_else(|| bad("point outside the ambient space"))
    };
    let quad = |a: Fe, b: Fe| f.add(f.add(f.mul(a, a), f.mul(a, b)), f.mul(delta, f.mul(b, b)));

    let u2 = idx(&[0, 1, 0, 0, 0, 0])?;
    let mut elliptic = BTreeSet::new();
    let mut off_plane = Vec::new();
    for a in 0..q {
        for b in 0..q {
            let pid = idx(&[1, quad(a, b), a, b, 0, 0])?;
            elliptic.insert(pid);
            if b != 0 {
                off_plane.push(pid);
            }
        }
    }
    elliptic.insert(u2);
    let mut cone = BTreeSet::new();
    for c in 0..q {
        for d in 0..q {
            let v = quad(c, d);
            let r = f.sqrt(v).ok_or_else(|| bad("square root exists in characteristic 2"))?;
            cone.insert(idx(&[1, v, r, 0, c, d])?);
        }
    }
    cone.insert(u2);
    let target = (q as usize) * (q as usize) + 1;
    if elliptic.len() != target || cone.len() != target {
        return Err(bad("a half has the wrong size"));
    }

    let mut points: BTreeSet<usize> = cone.clone();
    points.extend(&off_plane);
    let expected = 2 * (q as usize) * (q as usize) - (q as usize) + 1;
    if points.len() != expected {
        return Err(bad(format!("{} points, expected {expected}", points.len())));
    }
    let ovoid = PartialOvoid {
        space: ps,
        points: points.into_iter().collect(),
        maximal: true,
    };
    verify_partial_ovoid(&ovoid)?;
    Ok(EvenCharOvoid {
        ovoid,
        delta,
        elliptic_part: elliptic.into_iter().collect(),
        quadric_part: cone.into_iter().collect(),
    })
}

// ------------------------------------------- Hermitian pencils and lifts

/// A pencil of Hermitian surfaces in PG(3,q^2) sharing a symplectic
/// substrate over GF(q): sheet i is the surface of parameter `lambdas[i]`,
/// and `embed` shears the substrate into it.
pub struct HermitianPencil {
    pub q: u32,
    pub big: Field,
    pub small: Field,
    /// Skew constant: iota + iota^q = 0, iota != 0.
    pub iota: Fe,
    /// The subfield parameters of the sheets, ascending.
    pub lambdas: Vec<Fe>,
    /// Shear offsets: iota (xi^q - xi) = lambda, least solution per sheet.
    pub xis: Vec<Fe>,
    pub substrate: PolarSpace,
    pub sheets: Vec<PolarSpace>,
    emb: Vec<Fe>,
}

impl HermitianPencil {
    /// Ambient plane of the sheets.
    pub fn plane(&self) -> &ProjSpace {
        self.sheets[0].ambient()
    }

    /// Image of a substrate coordinate vector on sheet `i`.
    pub fn embed(&self, i: usize, v: &[Fe]) -> Vec<Fe> {
        let b = &self.big;
        let w = [
            self.emb[v[0] as usize],
            b.add(self.emb[v[1] as usize], b.mul(self.xis[i], self.emb[v[3] as usize])),
            self.emb[v[2] as usize],
            self.emb[v[3] as usize],
        ];
        normalize(b, &w)
    }
}

pub fn hermitian_pencil(q: u32) -> Result<HermitianPencil> {
    let (p, e) = prime_power(q).ok_or_else(|| bad("q must be a prime power"))?;
    let small = Field::new(p, e)?;
    let big = Field::new(p, 2 * e)?;
    let emb = big.embedding_from(&small)?;
    let sub: BTreeSet<Fe> = emb.iter().copied().collect();
    let iota = (1..big.q())
        .find(|&i| big.add(i, big.pow(i, i64::from(q))) == 0)
        .ok_or_else(|| ConstructionsError::NoElement("no skew constant".into()))?;
    let lambdas = big.subfield_elements(q)?;
    let mut xis = Vec::with_capacity(lambdas.len());
    for &lam in &lambdas {
        let xi = (0..big.q())
            .find(|&xi| big.mul(iota, big.sub(big.pow(xi, i64::from(q)), xi)) == lam)
            .ok_or_else(|| ConstructionsError::NoElement("no shear offset".into()))?;
        xis.push(xi);
    }
    if xis[0] != 0 {
        return Err(bad("the zero sheet must have zero shear"));
    }
    // Distinct sheets need offsets in distinct additive subfield cosets.
    for i in 0..xis.len() {
        for j in (i + 1)..xis.len() {
            if sub.contains(&big.sub(xis[j], xis[i])) {
                return Err(bad("two shear offsets share a subfield coset"));
            }
        }
    }

    let mut skew = vec![vec![0; 4]; 4];
    skew[0][2] = 1;
    skew[1][3] = 1;
    skew[2][0] = small.neg(1);
    skew[3][1] = small.neg(1);
    let substrate = PolarSpace::from_form(small.clone(), 3, FormKind::Alternating, &skew)?;

    let mut sheets = Vec::with_capacity(lambdas.len());
    for &lam in &lambdas {
        let mut g = vec![vec![0; 4]; 4];
        g[0][2] = iota;
        g[1][3] = iota;
        g[2][0] = big.neg(iota);
        g[3][1] = big.neg(iota);
        g[3][3] = lam;
        sheets.push(PolarSpace::from_form(big.clone(), 3, FormKind::Hermitian, &g)?);
    }

    let pencil = HermitianPencil {
        q,
        big,
        small,
        iota,
        lambdas,
        xis,
        substrate,
        sheets,
        emb,
    };

    // The shear carries substrate points and lines onto each sheet.
    let sf = pencil.substrate.field();
    for i in 0..pencil.sheets.len() {
        for &pid in pencil.substrate.points() {
            let w = pencil.embed(i, pencil.substrate.ambient().point(pid));
            if !pencil.sheets[i].is_isotropic(&w) {
                return Err(bad("a substrate point misses its sheet"));
            }
        }
        for line in pencil.substrate.enumerate_ti(2)? {
            let rows: Vec<Vec<Fe>> = line.rows().iter().map(|r| pencil.embed(i, r)).collect();
            let _ = sf;
            if pencil.sheets[i].beta(&rows[0], &rows[1]) != 0 {
                return Err(bad("a substrate line breaks on its sheet"));
            }
        }
    }
    Ok(pencil)
}

/// A set of plane points met by every tangent and every fully isotropic
/// line of the first sheet in at most one point: images of one ovoid (or
/// partial ovoid) per sheet, all sharing the same part on the fixed
/// hyperplane.
pub struct TangentSet {
    /// Ambient indices in the pencil's plane.
    pub points: Vec<usize>,
    /// Per-sheet count of ovoid points off the fixed hyperplane.
    pub off_plane: u64,
    /// Count of shared ovoid points on the fixed hyperplane.
    pub on_plane: u64,
    /// Claimed maximal (true when the sheet sets are full ovoids).
    pub maximal: bool,
}

pub fn tangent_set(pencil: &HermitianPencil, ovoids: &[Vec<usize>]) -> Result<TangentSet> {
    if ovoids.len() != pencil.q as usize {
        return Err(bad("one substrate set per sheet required"));
    }
    let sub = &pencil.substrate;
    let samb = sub.ambient();
    let size0 = ovoids[0].len();
    if size0 == 0 {
        return Err(bad("sheet sets must be nonempty"));
    }
    let mut base: Option<BTreeSet<usize>> = None;
    for ov in ovoids {
        if ov.len() != size0 {
            return Err(bad("sheet sets must share a size"));
        }
        let po = check_substrate_partial_ovoid(sub, ov)?;
        match &base {
            None => base = Some(po),
            Some(b) if *b != po => return Err(ConstructionsError::PlaneDisagreement),
            _ => {}
        }
    }
    let on_plane = base.expect("at least one sheet").len();
    let off_plane = size0 - on_plane;

    let mut points = BTreeSet::new();
    for (i, ov) in ovoids.iter().enumerate() {
        for &pid in ov {
            let w = pencil.embed(i, samb.point(pid));
            let wid = pencil
                .plane()
                .point_index(&w)
                .ok_or_else(|| bad("image point outside the plane"))?;
            points.insert(wid);
        }
    }
    let expected = pencil.q as usize * off_plane + on_plane;
    if points.len() != expected {
        return Err(bad(format!(
            "{} image points, expected {expected}",
            points.len()
        )));
    }
    let full = size0 == (pencil.q as usize) * (pencil.q as usize) + 1;
    Ok(TangentSet {
        points: points.into_iter().collect(),
        off_plane: off_plane as u64,
        on_plane: on_plane as u64,
        maximal: full,
    })
}

/// Pairwise non-collinearity of a substrate point set; returns its part on
/// the fixed hyperplane (last coordinate zero).
fn check_substrate_partial_ovoid(sub: &PolarSpace, ov: &[usize]) -> Result<BTreeSet<usize>> {
    let amb = sub.ambient();
    let mut seen = BTreeSet::new();
    for (index, &pid) in ov.iter().enumerate() {
        if pid >= amb.num_points() || !sub.has_ambient_index(pid) {
            return Err(bad(format!("sheet member {index} is not a substrate point")));
        }
        if !seen.insert(pid) {
            return Err(ConstructionsError::DuplicateMember { index });
        }
    }
    for i in 0..ov.len() {
        for j in (i + 1)..ov.len() {
            if sub.beta(amb.point(ov[i]), amb.point(ov[j])) == 0 {
                return Err(ConstructionsError::NotPartialOvoid {
                    a: ov[i],
                    b: ov[j],
                });
            }
        }
    }
    Ok(ov
        .iter()
        .copied()
        .filter(|&pid| amb.point(pid)[3] == 0)
        .collect())
}

/// Exhaustive verification: classify every line of the plane against the
/// first sheet; tangent lines (one sheet point) and fully isotropic lines
/// must carry at most one member. If maximality is claimed, every
/// non-member must lie on some such line through a member.
pub fn verify_tangent_set(pencil: &HermitianPencil, ts: &TangentSet) -> Result<()> {
    let h1 = &pencil.sheets[0];
    let plane = pencil.plane();
    let big = &pencil.big;
    let set: BTreeSet<usize> = ts.points.iter().copied().collect();
    let full = plane.field().q() as usize + 1;
    let mut covered: Vec<bool> = set
        .iter()
        .fold(vec![false; plane.num_points()], |mut acc, &pid| {
            acc[pid] = true;
            acc
        });
    for line in plane.enumerate_subspaces(1)? {
        let ids: Vec<usize> = line
            .points(big)
            .iter()
            .map(|p| plane.point_index(p).expect("line point"))
            .collect();
        let iso = ids.iter().filter(|&&pid| h1.has_ambient_index(pid)).count();
        if iso != 1 && iso != full {
            continue;
        }
        let hits = ids.iter().filter(|pid| set.contains(pid)).count();
        if hits > 1 {
            return Err(ConstructionsError::NotTangentSet { hits });
        }
        if hits == 1 {
            for &pid in &ids {
                covered[pid] = true;
            }
        }
    }
    if ts.maximal {
        if let Some(point) = covered.iter().position(|&c| !c) {
            return Err(ConstructionsError::NotMaximal { point });
        }
    }
    Ok(())
}

/// Lift a tangent set through an external point into the Hermitian space
/// one dimension up: members on the first sheet lift to themselves, the
/// rest spread over the q+1 norm solutions. The result is a partial ovoid.
pub fn hermitian_lift(pencil: &HermitianPencil, ts: &TangentSet) -> Result<PartialOvoid> {
    let big = &pencil.big;
    let q = pencil.q;
    if pencil.lambdas[0] != 0 {
        return Err(bad("the pencil must start at the zero sheet"));
    }
    let mut g = vec![vec![0; 5]; 5];
    g[0][2] = pencil.iota;
    g[1][3] = pencil.iota;
    g[2][0] = big.neg(pencil.iota);
    g[3][1] = big.neg(pencil.iota);
    g[4][4] = 1;
    let h4 = PolarSpace::from_form(big.clone(), 4, FormKind::Hermitian, &g)?;
    let form = h4.form().clone();
    let plane = pencil.plane();
    let mut out = BTreeSet::new();
    let mut off = 0u64;
    let mut on = 0u64;
    for &pid in &ts.points {
        let r = plane.point(pid);
        let mut r5 = r.clone();
        r5.push(0);
        let hval = form.value(big, &r5);
        if hval == 0 {
            on += 1;
            out.insert(
                h4.ambient()
                    .point_index(&r5)
                    .ok_or_else(|| bad("lifted point outside the space"))?,
            );
        } else {
            off += 1;
            let target = big.neg(hval);
            for t in 0..big.q() {
                if big.pow(t, i64::from(q) + 1) != target {
                    continue;
                }
                let mut v = r.clone();
                v.push(t);
                out.insert(
                    h4.ambient()
                        .point_index(&v)
                        .ok_or_else(|| bad("lifted point outside the space"))?,
                );
            }
        }
    }
    let expected = (u64::from(q) + 1) * off + on;
    if out.len() as u64 != expected {
        return Err(bad(format!("{} lifted points, expected {expected}", out.len())));
    }
    let po = PartialOvoid {
        space: h4,
        points: out.into_iter().collect(),
        maximal: ts.maximal,
    };
    verify_partial_ovoid(&po)?;
    Ok(po)
}

// ------------------------------------------------------------- ovoid fans

/// A fan of ovoids of a Hermitian surface: q+1 ovoids partitioning the
/// points, derived from the perp of a fixed external point and the tangent
/// line it spans with one surface point.
pub struct OvoidFan {
    pub space: PolarSpace,
    /// Ambient index of the external base point.
    pub base_point: usize,
    pub ovoids: Vec<Vec<usize>>,
}

pub fn hermitian_fan(q2: u32) -> Result<OvoidFan> {
    let ps = PolarSpace::new(PolarFamily::HermitianOdd, 3, q2)?;
    let f = ps.field().clone();
    let amb_n = ps.ambient().n();
    let base_point = (0..ps.ambient().num_points())
        .find(|&i| !ps.has_ambient_index(i))
        .ok_or_else(|| ConstructionsError::NoElement("no external point".into()))?;
    let pv = ps.ambient().point(base_point).clone();
    let p_sub = Subspace::from_rows(&f, amb_n, &[pv.clone()]);
    let perp_p = ps.perp(&p_sub);

    let mut first: Vec<usize> = ps.isotropic_points_in(&perp_p);
    first.sort_unstable();
    let x_id = *first.first().ok_or_else(|| bad("empty perp section"))?;
    let xv = ps.ambient().point(x_id).clone();
    let x_sub = Subspace::from_rows(&f, amb_n, &[xv.clone()]);
    let tangent = perp_p.meet(&f, &ps.perp(&x_sub));
    if tangent.vdim() != 2 {
        return Err(bad("the shared perp is not a line"));
    }
    let mut t_ids: Vec<usize> = tangent
        .points(&f)
        .iter()
        .map(|p| ps.ambient().point_index(p).expect("tangent point"))
        .collect();
    t_ids.sort_unstable();
    let iso_on_t = t_ids.iter().filter(|&&i| ps.has_ambient_index(i)).count();
    if iso_on_t != 1 {
        return Err(bad("the shared perp line is not tangent"));
    }

    let mut ovoids = vec![first];
    for &y_id in &t_ids {
        if y_id == x_id {
            continue;
        }
        let yv = ps.ambient().point(y_id).clone();
        let y_sub = Subspace::from_rows(&f, amb_n, &[yv.clone()]);
        let mut o: BTreeSet<usize> = ps
            .isotropic_points_in(&ps.perp(&y_sub))
            .into_iter()
            .filter(|&pid| !perp_p.contains_point(&f, ps.ambient().point(pid)))
            .collect();
        let join = Subspace::from_rows(&f, amb_n, &[pv.clone(), yv.clone()]);
        o.extend(ps.isotropic_points_in(&join));
        ovoids.push(o.into_iter().collect());
    }

    let mut seen = BTreeSet::new();
    for o in &ovoids {
        if o.len() != ovoids[0].len() {
            return Err(bad("fan ovoids differ in size"));
        }
        for &pid in o {
            if !seen.insert(pid) {
                return Err(bad("fan ovoids overlap"));
            }
        }
    }
    if seen.len() != ps.num_points() {
        return Err(bad("the fan does not cover the surface"));
    }
    Ok(OvoidFan {
        space: ps,
        base_point,
        ovoids,
    })
}

// --------------------------------------------------------------- unitals

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnitalKind {
    /// The classical embedded unital: points of a Hermitian curve.
    Hermitian,
    /// Orthogonal Buekenhout-Metz unital (parabolic pencil model).
    BuekenhoutMetz,
    /// Buekenhout-Tits unital (even order 2^m, m odd > 1).
    BuekenhoutTits,
}

/// A unital of order a embedded in PG(2,a^2): a^3 + 1 points meeting every
/// line in 1 or a+1 points.
pub struct Unital {
    pub kind: UnitalKind,
    pub order: u32,
    pub field: Field,
    pub plane: ProjSpace,
    pub points: Vec<usize>,
    /// The (alpha, beta) steering pair for Buekenhout-Metz unitals.
    pub parameters: Option<(Fe, Fe)>,
}

/// Line classification and the block design extracted from the secants.
pub struct UnitalCheck {
    pub tangent_lines: u64,
    pub secant_lines: u64,
    pub blocks: Vec<Vec<usize>>,
    pub lambda: u64,
}

pub fn make_unital(kind: UnitalKind, a: u32) -> Result<Unital> {
    let (p, e) = prime_power(a).ok_or_else(|| bad("the order must be a prime power"))?;
    let big = Field::new(p, 2 * e)?;
    let plane = ProjSpace::new(big.clone(), 2)?;
    let mut parameters = None;
    let mut point_set: BTreeSet<usize> = BTreeSet::new();
    let pid_of = |v: &[Fe]| -> Result<usize> {
        plane.point_index(v).ok_or_else(|| bad("point outside the plane"))
    };
    match kind {
        UnitalKind::Hermitian => {
            let curve = PolarSpace::new(PolarFamily::HermitianEven, 2, a * a)?;
            if curve.ambient().num_points() != plane.num_points() {
                return Err(bad("ambient mismatch"));
            }
            point_set.extend(curve.points().iter().copied());
        }
        UnitalKind::BuekenhoutMetz => {
            if a < 3 {
                return Err(bad("the parabolic model needs order at least 3"));
            }
            let small = Field::new(p, e)?;
            let emb = big.embedding_from(&small)?;
            let sub: BTreeSet<Fe> = emb.iter().copied().collect();
            let emb_back: HashMap<Fe, Fe> = emb
                .iter()
                .enumerate()
                .map(|(sm, &bg)| (bg, sm as Fe))
                .collect();
            let conj = i64::from(a);
            let norm = i64::from(a) + 1;
            let mut found = None;
            'search: for alpha in 1..big.q() {
                for beta in 0..big.q() {
                    let ok = if p != 2 {
                        let diff = big.sub(beta, big.pow(beta, conj));
                        let c4 = 4 % p;
                        let v = big.add(big.mul(diff, diff), big.mul(c4, big.pow(alpha, norm)));
                        match emb_back.get(&v) {
                            Some(&vs) => !small.is_square(vs),
                            None => false,
                        }
                    } else {
                        if sub.contains(&beta) {
                            false
                        } else {
                            let s_val = big.add(beta, big.pow(beta, conj));
                            let den = big.mul(s_val, s_val);
                            let w = big
                                .div(big.pow(alpha, norm), den)
                                .ok_or_else(|| bad("nonzero denominator"))?;
                            match emb_back.get(&w) {
                                Some(&ws) => small.trace_to_sub(ws, 2)? == 0,
                                None => false,
                            }
                        }
                    };
                    if ok {
                        found = Some((alpha, beta));
                        break 'search;
                    }
                }
            }
            let (alpha, beta) =
                found.ok_or_else(|| ConstructionsError::NoElement("no steering pair".into()))?;
            parameters = Some((alpha, beta));
            for x in 0..big.q() {
                let base = big.add(
                    big.mul(alpha, big.mul(x, x)),
                    big.mul(beta, big.pow(x, norm)),
                );
                for &z in &emb {
                    point_set.insert(pid_of(&[x, big.add(base, z), 1])?);
                }
            }
            point_set.insert(pid_of(&[0, 1, 0])?);
        }
        UnitalKind::BuekenhoutTits => {
            if p != 2 || e < 3 || e % 2 == 0 {
                return Err(bad("the order must be 2^m with m odd and greater than one"));
            }
            let small = Field::new(p, e)?;
            let emb = big.embedding_from(&small)?;
            let sub: BTreeSet<Fe> = emb.iter().copied().collect();
            let beta = (0..big.q())
                .find(|b| !sub.contains(b))
                .ok_or_else(|| ConstructionsError::NoElement("no basis complement".into()))?;
            let delta_exp = 1i64 << ((e + 1) / 2);
            for &x0 in &emb {
                for &x1 in &emb {
                    let coef = big.add(
                        big.add(big.pow(x0, delta_exp + 2), big.mul(x0, x1)),
                        big.pow(x1, delta_exp),
                    );
                    let first = big.add(x0, big.mul(x1, beta));
                    let second_base = big.mul(coef, beta);
                    for &z in &emb {
                        point_set.insert(pid_of(&[first, big.add(second_base, z), 1])?);
                    }
                }
            }
            point_set.insert(pid_of(&[0, 1, 0])?);
        }
    }
    let expected = (a as usize).pow(3) + 1;
    if point_set.len() != expected {
        return Err(bad(format!(
            "{} unital points, expected {expected}",
            point_set.len()
        )));
    }
    Ok(Unital {
        kind,
        order: a,
        field: big,
        plane,
        points: point_set.into_iter().collect(),
        parameters,
    })
}

/// Classify every line of the plane against the unital: each must be a
/// tangent (1 point) or a secant (order + 1 points); the secant sections
/// then form a 2-design with lambda = 1.
pub fn verify_unital(u: &Unital) -> Result<UnitalCheck> {
    let set: BTreeSet<usize> = u.points.iter().copied().collect();
    let k = u64::from(u.order) + 1;
    let mut tangent_lines = 0u64;
    let mut secant_lines = 0u64;
    let mut blocks = Vec::new();
    for line in u.plane.enumerate_subspaces(1)? {
        let hits: Vec<usize> = line
            .points(&u.field)
            .iter()
            .filter_map(|p| u.plane.point_index(p))
            .filter(|pid| set.contains(pid))
            .collect();
        match hits.len() as u64 {
            1 => tangent_lines += 1,
            h if h == k => {
                secant_lines += 1;
                let mut b = hits;
                b.sort_unstable();
                blocks.push(b);
            }
            h => {
                return Err(ConstructionsError::NotUnital {
                    hits: h,
                    secant: k,
                })
            }
        }
    }
    let lambda = verify_block_design(set.len() as u64, k, &blocks)?;
    Ok(UnitalCheck {
        tangent_lines,
        secant_lines,
        blocks,
        lambda,
    })
}

/// Check a uniform 2-design: v ground points, constant block size k, every
/// unordered point pair in the same number of blocks. Returns lambda.
pub fn verify_block_design(v: u64, k: u64, blocks: &[Vec<usize>]) -> Result<u64> {
    let mut ground: BTreeSet<usize> = BTreeSet::new();
    for b in blocks {
        let s: BTreeSet<usize> = b.iter().copied().collect();
        if s.len() != b.len() || b.len() as u64 != k {
            return Err(ConstructionsError::NotDesign(format!(
                "a block has size {} instead of {k}",
                b.len()
            )));
        }
        ground.extend(&s);
    }
    if ground.len() as u64 != v {
        return Err(ConstructionsError::NotDesign(format!(
            "{} ground points, expected {v}",
            ground.len()
        )));
    }
    let index: HashMap<usize, u32> = ground
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u32))
        .collect();
    let mut pair_counts: HashMap<(u32, u32), u64> = HashMap::new();
    for b in blocks {
        for i in 0..b.len() {
            for j in (i + 1)..b.len() {
                let (x, y) = (index[&b[i]], index[&b[j]]);
                let key = if x < y { (x, y) } else { (y, x) };
                *pair_counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    let n = ground.len() as u32;
    let mut lambda: Option<u64> = None;
    for x in 0..n {
        for y in (x + 1)..n {
            let c = pair_counts.get(&(x, y)).copied().unwrap_or(0);
            match lambda {
                None => lambda = Some(c),
                Some(l) if l != c => {
                    return Err(ConstructionsError::NotDesign(format!(
                        "pair counts {l} and {c} both occur"
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(lambda.unwrap_or(0))
}

/// Per-line data over the plane of a unital: for every unordered pair of
/// plane points, the line joining them, plus each line's tangency flag.
struct LineTables {
    pair_line: HashMap<(u32, u32), u32>,
    tangent: Vec<bool>,
}

fn line_tables(u: &Unital) -> Result<LineTables> {
    let set: BTreeSet<usize> = u.points.iter().copied().collect();
    let mut pair_line = HashMap::new();
    let mut tangent = Vec::new();
    for (li, line) in u.plane.enumerate_subspaces(1)?.iter().enumerate() {
        let ids: Vec<u32> = line
            .points(&u.field)
            .iter()
            .map(|p| u.plane.point_index(p).expect("line point") as u32)
            .collect();
        let hits = ids.iter().filter(|pid| set.contains(&(**pid as usize))).count();
        tangent.push(hits == 1);
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                let key = if ids[i] < ids[j] {
                    (ids[i], ids[j])
                } else {
                    (ids[j], ids[i])
                };
                pair_line.insert(key, li as u32);
            }
        }
    }
    Ok(LineTables { pair_line, tangent })
}

fn joining_line(t: &LineTables, a: u32, b: u32) -> u32 {
    let key = if a < b { (a, b) } else { (b, a) };
    t.pair_line[&key]
}

/// Search for four points off the unital whose six joining lines are all
/// tangent and pairwise distinct; returns the lexicographically first such
/// quadruple of plane indices, or None after exhaustion.
pub fn dual_onan_search(u: &Unital) -> Result<Option<[usize; 4]>> {
    let tables = line_tables(u)?;
    let set: BTreeSet<usize> = u.points.iter().copied().collect();
    let off: Vec<u32> = (0..u.plane.num_points() as u32)
        .filter(|pid| !set.contains(&(*pid as usize)))
        .collect();
    let n = off.len();
    let adj = |x: usize, y: usize| tables.tangent[joining_line(&tables, off[x], off[y]) as usize];
    for a in 0..n {
        for b in (a + 1)..n {
            if !adj(a, b) {
                continue;
            }
            let lab = joining_line(&tables, off[a], off[b]);
            let common: Vec<usize> = ((b + 1)..n).filter(|&c| adj(a, c) && adj(b, c)).collect();
            for (ci, &c) in common.iter().enumerate() {
                if joining_line(&tables, off[a], off[c]) == lab {
                    continue; // collinear triple
                }
                for &d in &common[(ci + 1)..] {
                    if !adj(c, d) {
                        continue;
                    }
                    let lines = [
                        lab,
                        joining_line(&tables, off[a], off[c]),
                        joining_line(&tables, off[a], off[d]),
                        joining_line(&tables, off[b], off[c]),
                        joining_line(&tables, off[b], off[d]),
                        joining_line(&tables, off[c], off[d]),
                    ];
                    let distinct: BTreeSet<u32> = lines.iter().copied().collect();
                    if distinct.len() == 6 {
                        return Ok(Some([
                            off[a] as usize,
                            off[b] as usize,
                            off[c] as usize,
                            off[d] as usize,
                        ]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The graph on the plane points off the unital, two joined exactly when
/// their connecting line is tangent to the unital.
pub fn unital_tangent_graph(u: &Unital) -> Result<Graph> {
    let tables = line_tables(u)?;
    let set: BTreeSet<usize> = u.points.iter().copied().collect();
    let off: Vec<u32> = (0..u.plane.num_points() as u32)
        .filter(|pid| !set.contains(&(*pid as usize)))
        .collect();
    let mut g = Graph::empty(off.len());
    for i in 0..off.len() {
        for j in (i + 1)..off.len() {
            if tables.tangent[joining_line(&tables, off[i], off[j]) as usize] {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

// ------------------------------------------------------- quartic counting

/// Number of field elements xi for which xi^4 - 48 xi^2 + 64 is a square
/// (zero counts as a square). The prime must be at least 5.
pub fn quartic_square_count(q: u32) -> Result<u64> {
    let f = Field::new(q, 1)?;
    if q < 5 {
        return Err(bad("the prime must be at least 5"));
    }
    let c48 = 48 % q;
    let c64 = 64 % q;
    let mut count = 0;
    for xi in 0..q {
        let x2 = f.mul(xi, xi);
        let val = f.add(f.sub(f.mul(x2, x2), f.mul(c48, x2)), c64);
        if f.is_square(val) {
            count += 1;
        }
    }
    Ok(count)
}
