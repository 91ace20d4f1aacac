//! Oracle tests for projective-space machinery: point/subspace enumeration,
//! Gaussian binomials, classical group orders, the Klein correspondence and
//! field reduction. Expected values are frozen here and re-derived by
//! independent brute force where feasible.

use finpolar::gf::{Fe, Field};
use finpolar::linalg;
use finpolar::projspace::{
    gaussian_binomial, group_order, klein_bilinear, klein_inverse, klein_map,
    klein_quadric_value, normalize, theta, FieldReduction, GroupFamily, ProjSpace, Subspace,
};
use num::BigUint;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn theta_counts_points_and_hyperplanes() {
    assert_eq!(theta(-1, 2), big(0), "proj-oracle-theta empty");
    assert_eq!(theta(0, 7), big(1), "proj-oracle-theta single point");
    assert_eq!(theta(2, 2), big(7), "proj-oracle-theta Fano");
    assert_eq!(theta(3, 3), big(40), "proj-oracle-theta PG(3,3)");
    assert_eq!(theta(3, 25), big(16276), "proj-oracle-theta PG(3,25)");
    assert_eq!(theta(5, 4), big(1365), "proj-oracle-theta PG(5,4)");
    assert_eq!(theta(6, 3), big(1093), "proj-oracle-theta PG(6,3)");
}

/// Independent count of h-dimensional subspaces of F_q^r for tiny cases:
/// numerator/denominator of ordered-basis counts.
fn naive_subspace_count(r: u32, h: u32, q: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..h {
        num *= q.pow(r) - q.pow(i);
        den *= q.pow(h) - q.pow(i);
    }
    num / den
}

#[test]
fn gaussian_binomials_match_the_product_formula_and_brute_force() {
    // brute force: enumerate all 2-dim subspaces of F_2^4 as sorted point sets
    let f = Field::new(2, 1).unwrap();
    let vecs: Vec<Vec<Fe>> = (0..16u32)
        .map(|m| (0..4).map(|i| (m >> i) & 1).collect())
        .collect();
    let mut spans = std::collections::BTreeSet::new();
    for a in 1..16usize {
        for b in (a + 1)..16 {
            let rows = linalg::rref(&f, vec![vecs[a].clone(), vecs[b].clone()]);
            if rows.len() == 2 {
                spans.insert(rows);
            }
        }
    }
    assert_eq!(spans.len(), 35, "proj-oracle-gauss brute-force (4,2,2)");
    assert_eq!(gaussian_binomial(4, 2, 2), big(35), "proj-oracle-gauss (4,2,2)");
    assert_eq!(
        gaussian_binomial(4, 2, 2),
        big(naive_subspace_count(4, 2, 2)),
        "proj-oracle-gauss formula vs ordered-basis count"
    );
    for (r, q) in [(3u32, 2u64), (5, 2), (4, 3), (6, 2)] {
        assert_eq!(gaussian_binomial(r, 0, q), big(1), "proj-oracle-gauss (r,0,q)=1");
        assert_eq!(gaussian_binomial(r, r, q), big(1), "proj-oracle-gauss (r,r,q)=1");
    }
    // symmetry in the lower index
    assert_eq!(
        gaussian_binomial(5, 2, 3),
        gaussian_binomial(5, 3, 3),
        "proj-oracle-gauss symmetry (5,2,3)=(5,3,3)"
    );
    assert_eq!(gaussian_binomial(5, 2, 3), big(1210), "proj-oracle-gauss (5,2,3)");
    assert_eq!(gaussian_binomial(4, 2, 3), big(130), "proj-oracle-gauss lines of PG(3,3)");
    assert_eq!(gaussian_binomial(6, 5, 3), big(364), "proj-oracle-gauss hyperplanes of PG(5,3)");
    // h > r is 0 by convention
    assert_eq!(gaussian_binomial(3, 5, 2), big(0), "proj-oracle-gauss h>r");
}

#[test]
fn point_enumeration_is_lexicographic_and_counts_match_theta() {
    let f2 = Field::new(2, 1).unwrap();
    let pg22 = ProjSpace::new(f2.clone(), 2).unwrap();
    let expected: Vec<Vec<Fe>> = vec![
        vec![0, 0, 1],
        vec![0, 1, 0],
        vec![0, 1, 1],
        vec![1, 0, 0],
        vec![1, 0, 1],
        vec![1, 1, 0],
        vec![1, 1, 1],
    ];
    assert_eq!(pg22.points(), expected.as_slice(), "proj-oracle-points PG(2,2) full list");
    for (i, p) in expected.iter().enumerate() {
        assert_eq!(pg22.point_index(p), Some(i), "proj-oracle-points index round-trip");
    }

    let f3 = Field::new(3, 1).unwrap();
    let pg33 = ProjSpace::new(f3.clone(), 3).unwrap();
    assert_eq!(pg33.num_points(), 40, "proj-oracle-points PG(3,3) count");
    // sorted ascending and all normalized
    for w in pg33.points().windows(2) {
        assert!(w[0] < w[1], "proj-oracle-points strict lex order");
    }
    for p in pg33.points() {
        assert_eq!(&normalize(&f3, p), p, "proj-oracle-points normalized reps");
    }

    let pg0 = ProjSpace::new(Field::new(5, 1).unwrap(), 0).unwrap();
    assert_eq!(pg0.num_points(), 1, "proj-oracle-points PG(0,q) single point");

    // normalization is canonical: scaling is invisible
    let f9 = Field::new(3, 2).unwrap();
    let v: Vec<Fe> = vec![0, 5, 7];
    for s in 1..9u32 {
        let sv: Vec<Fe> = v.iter().map(|&c| f9.mul(s, c)).collect();
        assert_eq!(normalize(&f9, &sv), normalize(&f9, &v), "proj-oracle-points scaling");
    }
}

#[test]
fn subspace_enumeration_matches_gaussian_binomials() {
    let f2 = Field::new(2, 1).unwrap();
    let pg32 = ProjSpace::new(f2.clone(), 3).unwrap();
    let lines = pg32.enumerate_subspaces(1).unwrap();
    assert_eq!(lines.len(), 35, "proj-oracle-subspaces lines of PG(3,2)");
    for w in lines.windows(2) {
        assert!(w[0] < w[1], "proj-oracle-subspaces lex order");
    }
    for l in &lines {
        assert_eq!(l.vdim(), 2, "proj-oracle-subspaces line rank");
        assert_eq!(l.points(&f2).len(), 3, "proj-oracle-subspaces line size");
    }
    let planes = pg32.enumerate_subspaces(2).unwrap();
    assert_eq!(planes.len(), 15, "proj-oracle-subspaces planes of PG(3,2)");

    let f3 = Field::new(3, 1).unwrap();
    let pg33 = ProjSpace::new(f3.clone(), 3).unwrap();
    assert_eq!(
        pg33.enumerate_subspaces(1).unwrap().len(),
        130,
        "proj-oracle-subspaces lines of PG(3,3)"
    );

    let pg22 = ProjSpace::new(f2.clone(), 2).unwrap();
    let fano_lines = pg22.enumerate_subspaces(1).unwrap();
    assert_eq!(fano_lines.len(), 7, "proj-oracle-subspaces Fano has 7 lines");
    let first = Subspace::from_rows(&f2, 2, &[vec![0, 1, 0], vec![0, 0, 1]]);
    let last = Subspace::from_rows(&f2, 2, &[vec![1, 1, 0], vec![0, 0, 1]]);
    assert_eq!(fano_lines[0], first, "proj-oracle-subspaces first Fano line");
    assert_eq!(fano_lines[6], last, "proj-oracle-subspaces last Fano line");
}

#[test]
fn span_meet_and_containment_satisfy_the_dimension_law() {
    let f2 = Field::new(2, 1).unwrap();
    // two distinct lines of a common plane meet in a point
    let a = Subspace::from_rows(&f2, 2, &[vec![1, 0, 0], vec![0, 1, 0]]);
    let b = Subspace::from_rows(&f2, 2, &[vec![1, 0, 0], vec![0, 0, 1]]);
    let m = a.meet(&f2, &b);
    assert_eq!(m.vdim(), 1, "proj-oracle-meet two plane lines share a point");
    assert!(m.contains_point(&f2, &[1, 0, 0]), "proj-oracle-meet the shared point");

    // span of a point and a disjoint line is a plane
    let p = Subspace::from_rows(&f2, 3, &[vec![0, 0, 0, 1]]);
    let l = Subspace::from_rows(&f2, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    let s = p.span(&f2, &l);
    assert_eq!(s.projdim(), 2, "proj-oracle-span point + disjoint line = plane");
    assert!(s.contains_sub(&f2, &p) && s.contains_sub(&f2, &l), "proj-oracle-span contains both");

    // complementary solids of PG(7,2) meet in the empty subspace
    let id8: Vec<Vec<Fe>> = (0..8)
        .map(|i| (0..8).map(|j| u32::from(i == j)).collect())
        .collect();
    let s1 = Subspace::from_rows(&f2, 7, &id8[..4]);
    let s2 = Subspace::from_rows(&f2, 7, &id8[4..]);
    let empty = s1.meet(&f2, &s2);
    assert_eq!(empty.vdim(), 0, "proj-oracle-meet complementary solids");
    assert_eq!(empty.projdim(), -1, "proj-oracle-meet empty has projdim -1");
    assert_eq!(s1.span(&f2, &s2).vdim(), 8, "proj-oracle-span complementary solids fill");

    // exhaustive modular dimension law over all pairs of lines of PG(3,2)
    let pg32 = ProjSpace::new(f2.clone(), 3).unwrap();
    let lines = pg32.enumerate_subspaces(1).unwrap();
    for x in &lines {
        for y in &lines {
            let sp = x.span(&f2, y);
            let mt = x.meet(&f2, y);
            assert_eq!(
                sp.vdim() + mt.vdim(),
                x.vdim() + y.vdim(),
                "proj-oracle-dimension-law over PG(3,2) line pairs"
            );
        }
    }
}

/// Brute-force order of GL(2,q): count invertible 2x2 matrices.
fn naive_gl2_order(f: &Field) -> u64 {
    let q = f.q();
    let mut count = 0u64;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if f.sub(f.mul(a, d), f.mul(b, c)) != 0 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Brute-force order of Sp(4,2): 4x4 GF(2) matrices preserving the
/// alternating form with Gram pairs (0,1),(2,3).
fn naive_sp4_2_order() -> u64 {
    let f = Field::new(2, 1).unwrap();
    let gram: [[Fe; 4]; 4] = [
        [0, 1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ];
    let beta = |x: &[Fe], y: &[Fe]| -> Fe {
        let mut acc = 0;
        for i in 0..4 {
            for j in 0..4 {
                acc = f.add(acc, f.mul(f.mul(x[i], gram[i][j]), y[j]));
            }
        }
        acc
    };
    let mut count = 0u64;
    for code in 0..(1u32 << 16) {
        let rows: Vec<Vec<Fe>> = (0..4)
            .map(|i| (0..4).map(|j| (code >> (4 * i + j)) & 1).collect())
            .collect();
        if linalg::rank(&f, rows.clone()) != 4 {
            continue;
        }
        let ok = (0..4).all(|i| {
            (0..4).all(|j| beta(&rows[i], &rows[j]) == gram[i][j])
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// Brute-force order of GU(2,2): 2x2 GF(4) matrices M with M^T M^sigma = I,
/// sigma the conjugation x -> x^2.
fn naive_gu2_2_order() -> u64 {
    let f = Field::new(2, 2).unwrap();
    let sigma = |x: Fe| f.frobenius(x);
    let mut count = 0u64;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    // M = [[a,b],[c,d]]; want M^T M^sigma = I
                    let e00 = f.add(f.mul(a, sigma(a)), f.mul(c, sigma(c)));
                    let e01 = f.add(f.mul(a, sigma(b)), f.mul(c, sigma(d)));
                    let e10 = f.add(f.mul(b, sigma(a)), f.mul(d, sigma(c)));
                    let e11 = f.add(f.mul(b, sigma(b)), f.mul(d, sigma(d)));
                    if e00 == 1 && e01 == 0 && e10 == 0 && e11 == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn classical_group_orders_match_formulas_and_brute_force() {
    use GroupFamily::*;
    let go = |fam, r, q| group_order(fam, r, q).unwrap();

    assert_eq!(go(GL, 2, 2), big(naive_gl2_order(&Field::new(2, 1).unwrap())), "proj-oracle-groups GL(2,2) brute force");
    assert_eq!(go(GL, 2, 2), big(6), "proj-oracle-groups GL(2,2)");
    assert_eq!(
        go(PGL, 2, 3),
        big(naive_gl2_order(&Field::new(3, 1).unwrap()) / 2),
        "proj-oracle-groups PGL(2,3) brute force"
    );
    assert_eq!(go(PGL, 2, 3), big(24), "proj-oracle-groups PGL(2,3)");
    assert_eq!(go(SL, 3, 2), go(GL, 3, 2), "proj-oracle-groups SL=GL at q=2");
    assert_eq!(go(SL, 3, 2), big(168), "proj-oracle-groups SL(3,2)");
    assert_eq!(go(GL, 4, 2), big(20160), "proj-oracle-groups GL(4,2)");
    assert_eq!(go(PSL, 2, 7), big(168), "proj-oracle-groups PSL(2,7)");
    assert_eq!(go(PGammaL, 2, 4), big(120), "proj-oracle-groups PGammaL(2,4)");

    assert_eq!(go(Sp, 4, 2), big(naive_sp4_2_order()), "proj-oracle-groups Sp(4,2) brute force");
    assert_eq!(go(Sp, 4, 2), big(720), "proj-oracle-groups Sp(4,2)");
    assert_eq!(go(Sp, 4, 3), big(51840), "proj-oracle-groups Sp(4,3)");
    assert_eq!(go(Sp, 6, 2), big(1451520), "proj-oracle-groups Sp(6,2)");

    // unitary families: q is the subfield order, matrices live over GF(q^2)
    assert_eq!(go(GU, 2, 2), big(naive_gu2_2_order()), "proj-oracle-groups GU(2,2) brute force");
    assert_eq!(go(GU, 2, 2), big(18), "proj-oracle-groups GU(2,2)");
    assert_eq!(go(GU, 3, 2), big(648), "proj-oracle-groups GU(3,2)");
    assert_eq!(go(SU, 3, 2), big(216), "proj-oracle-groups SU(3,2)");
    assert_eq!(go(PGU, 3, 2), big(216), "proj-oracle-groups PGU(3,2)");

    assert_eq!(go(GOPlus, 4, 2), big(72), "proj-oracle-groups GO+(4,2)");
    assert_eq!(go(GOMinus, 6, 2), big(51840), "proj-oracle-groups GO-(6,2)");
    assert_eq!(go(GOParabolic, 5, 3), big(103680), "proj-oracle-groups GO(5,3)");

    // PSL = PGL / gcd(r, q-1) across a small grid
    for r in 2u32..=4 {
        for q in [2u32, 3, 4, 5, 7, 9] {
            let g = gcd(r as u64, q as u64 - 1);
            assert_eq!(
                go(PSL, r, q) * big(g),
                go(PGL, r, q),
                "proj-oracle-groups PSL index in PGL"
            );
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn klein_correspondence_is_a_bijection_onto_the_quadric() {
    let f2 = Field::new(2, 1).unwrap();
    let pg32 = ProjSpace::new(f2.clone(), 3).unwrap();
    let lines = pg32.enumerate_subspaces(1).unwrap();
    assert_eq!(lines.len(), 35, "proj-oracle-klein domain size");

    // frozen direct image: <e0,e1> has p01 = 1, all others 0
    let l01 = Subspace::from_rows(&f2, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    assert_eq!(
        klein_map(&f2, &l01).unwrap(),
        vec![1, 0, 0, 0, 0, 0],
        "proj-oracle-klein image of <e0,e1>"
    );

    let mut images = std::collections::BTreeSet::new();
    for l in &lines {
        let p = klein_map(&f2, l).unwrap();
        assert_eq!(klein_quadric_value(&f2, &p), 0, "proj-oracle-klein image on quadric");
        assert_eq!(&normalize(&f2, &p), &p, "proj-oracle-klein image normalized");
        // inverse round-trip
        let back = klein_inverse(&f2, &p).unwrap();
        assert_eq!(&back, l, "proj-oracle-klein inverse round-trip");
        images.insert(p);
    }
    assert_eq!(images.len(), 35, "proj-oracle-klein injective");

    // image = full quadric: count quadric points of PG(5,2) independently
    let pg52 = ProjSpace::new(f2.clone(), 5).unwrap();
    let quadric: Vec<&Vec<Fe>> = pg52
        .points()
        .iter()
        .filter(|p| klein_quadric_value(&f2, p) == 0)
        .collect();
    assert_eq!(quadric.len(), 35, "proj-oracle-klein quadric size at q=2");
    for p in &quadric {
        assert!(images.contains(*p), "proj-oracle-klein surjective onto quadric");
    }

    // intersecting lines map to orthogonal points (exhaustive over pairs)
    for (i, a) in lines.iter().enumerate() {
        let pa = klein_map(&f2, a).unwrap();
        for b in lines.iter().skip(i + 1) {
            let pb = klein_map(&f2, b).unwrap();
            let meets = a.meet(&f2, b).vdim() > 0;
            let orth = klein_bilinear(&f2, &pa, &pb) == 0;
            assert_eq!(meets, orth, "proj-oracle-klein incidence dictionary");
        }
    }

    // q=3: still a bijection onto the 130 quadric points
    let f3 = Field::new(3, 1).unwrap();
    let pg33 = ProjSpace::new(f3.clone(), 3).unwrap();
    let lines3 = pg33.enumerate_subspaces(1).unwrap();
    let mut images3 = std::collections::BTreeSet::new();
    for l in &lines3 {
        let p = klein_map(&f3, l).unwrap();
        assert_eq!(klein_quadric_value(&f3, &p), 0, "proj-oracle-klein q=3 on quadric");
        assert_eq!(klein_inverse(&f3, &p).unwrap(), *l, "proj-oracle-klein q=3 round-trip");
        images3.insert(p);
    }
    assert_eq!(images3.len(), 130, "proj-oracle-klein q=3 injective on 130 lines");

    // rejecting non-lines
    let pt = Subspace::from_rows(&f2, 3, &[vec![1, 0, 0, 0]]);
    assert!(klein_map(&f2, &pt).is_err(), "proj-oracle-klein rejects non-lines");
}

#[test]
fn field_reduction_produces_desarguesian_spreads() {
    // PG(1,9) -> line spread of PG(3,3) of size 10
    let f9 = Field::new(3, 2).unwrap();
    let fr = FieldReduction::new(&f9, 3, 2).unwrap();
    let pg19 = ProjSpace::new(f9.clone(), 1).unwrap();
    let images: Vec<Subspace> = pg19.points().iter().map(|p| fr.map_point(p).unwrap()).collect();
    assert_eq!(images.len(), 10, "proj-oracle-reduction spread size (q^4-1)/(q^2-1)");
    let small = fr.small().clone();
    verify_spread_clauses(&small, 3, &images, 40, "PG(1,9)->PG(3,3)");

    // PG(2,4) -> line spread of PG(5,2) of size 21
    let f4 = Field::new(2, 2).unwrap();
    let fr2 = FieldReduction::new(&f4, 2, 3).unwrap();
    let pg24 = ProjSpace::new(f4.clone(), 2).unwrap();
    let images2: Vec<Subspace> = pg24.points().iter().map(|p| fr2.map_point(p).unwrap()).collect();
    assert_eq!(images2.len(), 21, "proj-oracle-reduction spread size (2^6-1)/(2^2-1)");
    let small2 = fr2.small().clone();
    verify_spread_clauses(&small2, 5, &images2, 63, "PG(2,4)->PG(5,2)");

    // the map commutes with spans: image of the line PQ of PG(2,4) equals
    // the span of the two image lines and contains every other point image
    let p = &pg24.points()[0];
    let q = &pg24.points()[5];
    let line_pq = Subspace::from_rows(&f4, 2, &[p.clone(), q.clone()]);
    let img_line = fr2.map_subspace(&line_pq).unwrap();
    let spanned = fr2.map_point(p).unwrap().span(&small2, &fr2.map_point(q).unwrap());
    assert_eq!(img_line, spanned, "proj-oracle-reduction commutes with span");
    for r in line_pq.points(&f4) {
        assert!(
            img_line.contains_sub(&small2, &fr2.map_point(&r).unwrap()),
            "proj-oracle-reduction line image contains point images"
        );
    }
}

/// The four defining clauses of a Desarguesian spread image: injectivity,
/// pairwise disjointness, covering, and the exact cardinality.
fn verify_spread_clauses(
    small: &Field,
    amb: usize,
    images: &[Subspace],
    total_points: usize,
    tag: &str,
) {
    let mut seen = std::collections::BTreeSet::new();
    for s in images {
        assert!(seen.insert(s.clone()), "spread injectivity [{tag}]");
    }
    let mut covered = std::collections::BTreeSet::new();
    for s in images {
        for p in s.points(small) {
            assert!(covered.insert(p), "spread pairwise disjointness [{tag}]");
        }
    }
    assert_eq!(covered.len(), total_points, "spread covers PG({amb},q) [{tag}]");
}

#[test]
fn hermitian_curve_reduces_to_a_regulus_of_a_hyperbolic_quadric() {
    // H(1,9): x0^4 + x1^4 = 0 over GF(9); its 4 points reduce to 4 disjoint
    // lines of PG(3,3) whose union supports a unique nondegenerate quadric,
    // and every common transversal meets all four lines: one regulus.
    let f9 = Field::new(3, 2).unwrap();
    let pg19 = ProjSpace::new(f9.clone(), 1).unwrap();
    let on_h: Vec<Vec<Fe>> = pg19
        .points()
        .iter()
        .filter(|p| {
            let t = f9.add(f9.pow(p[0], 4), f9.pow(p[1], 4));
            t == 0
        })
        .cloned()
        .collect();
    assert_eq!(on_h.len(), 4, "proj-oracle-regulus H(1,9) has q+1 points");

    let fr = FieldReduction::new(&f9, 3, 2).unwrap();
    let f3 = fr.small().clone();
    let lines: Vec<Subspace> = on_h.iter().map(|p| fr.map_point(p).unwrap()).collect();

    let mut union = std::collections::BTreeSet::new();
    for l in &lines {
        assert_eq!(l.vdim(), 2, "proj-oracle-regulus images are lines");
        for p in l.points(&f3) {
            assert!(union.insert(p), "proj-oracle-regulus lines pairwise disjoint");
        }
    }
    assert_eq!(union.len(), 16, "proj-oracle-regulus union is (q+1)^2 points");

    // fit a quadratic form: monomials x_i x_j (i <= j) in 10 columns
    let union_vec: Vec<Vec<Fe>> = union.iter().cloned().collect();
    let rows: Vec<Vec<Fe>> = union_vec.iter().map(|p| quad_monomials(&f3, p)).collect();
    let ker = linalg::kernel_basis(&f3, rows);
    assert_eq!(ker.len(), 1, "proj-oracle-regulus unique quadric through the 16 points");
    let coeffs = &ker[0];
    let pg33 = ProjSpace::new(f3.clone(), 3).unwrap();
    let zero_set: Vec<&Vec<Fe>> = pg33
        .points()
        .iter()
        .filter(|p| eval_quad(&f3, coeffs, p) == 0)
        .collect();
    assert_eq!(zero_set.len(), 16, "proj-oracle-regulus zero set is exactly the union");
    for p in &zero_set {
        assert!(union.contains(*p), "proj-oracle-regulus zero set matches");
    }

    // transversals: lines meeting each of the four in exactly one point
    let all_lines = pg33.enumerate_subspaces(1).unwrap();
    let mut transversals = 0usize;
    for t in &all_lines {
        if lines.contains(t) {
            continue;
        }
        let meets: Vec<usize> = lines.iter().map(|l| l.meet(&f3, t).vdim()).collect();
        if meets.iter().all(|&d| d == 1) {
            transversals += 1;
        } else {
            // a line meeting three of the four must meet the fourth
            let cnt = meets.iter().filter(|&&d| d == 1).count();
            assert!(cnt < 3, "proj-oracle-regulus three transversal hits force a fourth");
        }
    }
    assert_eq!(transversals, 4, "proj-oracle-regulus opposite regulus size q+1");
}

#[test]
fn hermitian_plane_reduces_to_a_spread_of_an_elliptic_quadric() {
    // H(2,4): x0^3+x1^3+x2^3 = 0 over GF(4); its 9 points reduce to a line
    // spread of a quadric in PG(5,2) with 27 points (elliptic count).
    let f4 = Field::new(2, 2).unwrap();
    let pg24 = ProjSpace::new(f4.clone(), 2).unwrap();
    let on_h: Vec<Vec<Fe>> = pg24
        .points()
        .iter()
        .filter(|p| {
            let t = f4.add(f4.add(f4.pow(p[0], 3), f4.pow(p[1], 3)), f4.pow(p[2], 3));
            t == 0
        })
        .cloned()
        .collect();
    assert_eq!(on_h.len(), 9, "proj-oracle-elliptic-spread H(2,4) has q^3+1 points");

    let fr = FieldReduction::new(&f4, 2, 3).unwrap();
    let f2 = fr.small().clone();
    let lines: Vec<Subspace> = on_h.iter().map(|p| fr.map_point(p).unwrap()).collect();
    let mut union = std::collections::BTreeSet::new();
    for l in &lines {
        for p in l.points(&f2) {
            assert!(union.insert(p), "proj-oracle-elliptic-spread disjointness");
        }
    }
    assert_eq!(union.len(), 27, "proj-oracle-elliptic-spread 27 = (q+1)(q^3+1) points");

    // fit a quadratic form on the 27 points: 21 monomial columns over GF(2)
    let union_vec: Vec<Vec<Fe>> = union.iter().cloned().collect();
    let rows: Vec<Vec<Fe>> = union_vec.iter().map(|p| quad_monomials(&f2, p)).collect();
    let ker = linalg::kernel_basis(&f2, rows);
    assert!(!ker.is_empty(), "proj-oracle-elliptic-spread a quadric exists");
    let coeffs = &ker[0];
    let pg52 = ProjSpace::new(f2.clone(), 5).unwrap();
    let zero_set: Vec<&Vec<Fe>> = pg52
        .points()
        .iter()
        .filter(|p| eval_quad(&f2, coeffs, p) == 0)
        .collect();
    assert_eq!(zero_set.len(), 27, "proj-oracle-elliptic-spread quadric has 27 points");
    for p in &zero_set {
        assert!(union.contains(*p), "proj-oracle-elliptic-spread zero set matches");
    }

    // nondegenerate: the polarization bilinear form has full rank 6
    let n = 6usize;
    let q_of = |p: &[Fe]| eval_quad(&f2, coeffs, p);
    let mut gram: Vec<Vec<Fe>> = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut ei = vec![0; n];
            let mut ej = vec![0; n];
            ei[i] = 1;
            ej[j] = 1;
            let mut sum = vec![0; n];
            sum[i] = f2.add(sum[i], 1);
            sum[j] = f2.add(sum[j], 1);
            gram[i][j] = f2.add(f2.add(q_of(&sum), q_of(&ei)), q_of(&ej));
        }
    }
    assert_eq!(linalg::rank(&f2, gram), 6, "proj-oracle-elliptic-spread nondegenerate");
}

/// Values of the monomials x_i x_j (i <= j, lex on (i,j)) at a point.
fn quad_monomials(f: &Field, p: &[Fe]) -> Vec<Fe> {
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(f.mul(p[i], p[j]));
        }
    }
    out
}

/// Evaluates a coefficient vector in the same monomial order.
fn eval_quad(f: &Field, coeffs: &[Fe], p: &[Fe]) -> Fe {
    let vals = quad_monomials(f, p);
    let mut acc = 0;
    for (c, v) in coeffs.iter().zip(&vals) {
        acc = f.add(acc, f.mul(*c, *v));
    }
    acc
}
