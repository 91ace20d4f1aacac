//! Frozen expectations for the constructions module: regular-system
//! verification and search, special partial ovoids, Sherk sets, Hermitian
//! pencils with their tangent sets and lifts, unitals, ovoid fans, and a few
//! arithmetic side checks that tie into the elliptic-curve point counts.

use std::collections::BTreeSet;

use finpolar::constructions::{
    dual_onan_search, elliptic_hemisystem, elliptic_partition_count, greedy_partial_ovoid,
    hermitian_fan, hermitian_lift, hermitian_pencil, hyperplane_section_profile, make_unital,
    nucleus_projection, ovoid_search, parabolic_one_system_q3, quartic_square_count,
    search_hemisystem, search_regular_system, sherk_surface, split_generator_families,
    tangent_set, twisted_cubic_partial_ovoid, unital_tangent_graph, verify_block_design,
    verify_partial_ovoid, verify_partial_ovoid_lines, verify_regular_system, verify_tangent_set,
    verify_unital, w5_cyclic_partial_ovoid, w5_even_partial_ovoid, PartialOvoid, SherkParams,
    UnitalKind,
};
use finpolar::gf::{elliptic_curve_counts, Field};
use finpolar::graphs::{srg_check, SrgOutcome, SrgParams};
use finpolar::polar::{split_into_reguli, PolarFamily, PolarSpace};
use finpolar::projspace::ProjSpace;

fn space(desc: &str) -> PolarSpace {
    PolarSpace::from_descriptor(desc).unwrap()
}

// ---------------------------------------------------------------- regular systems

#[test]
fn regular_system_verifier_basics() {
    // All 27 generators of H(3,4): every point lies on q+1 = 3 of them.
    let h34 = space("H(3,4)");
    let gens = h34.generators().unwrap();
    assert_eq!(gens.len(), 27);
    assert_eq!(verify_regular_system(&h34, &gens, 1).unwrap(), 3);

    // The empty set is 0-regular.
    assert_eq!(verify_regular_system(&h34, &[], 1).unwrap(), 0);

    // Dropping one generator breaks regularity.
    assert!(verify_regular_system(&h34, &gens[1..], 1).is_err());

    // A duplicated member is rejected.
    let mut dup = gens.clone();
    dup.push(gens[0].clone());
    assert!(verify_regular_system(&h34, &dup, 1).is_err());

    // One regulus of Q+(3,2) is a spread: m = 1.
    let q32 = space("Q+(3,2)");
    let lines = q32.generators().unwrap();
    assert_eq!(lines.len(), 6);
    let (r1, r2) = split_into_reguli(q32.field(), &lines).unwrap();
    assert_eq!((r1.len(), r2.len()), (3, 3));
    assert_eq!(verify_regular_system(&q32, &r1, 1).unwrap(), 1);
    assert_eq!(verify_regular_system(&q32, &r2, 1).unwrap(), 1);
}

#[test]
fn hyperbolic_family_split_q52() {
    // The two plane families of Q+(5,2), each a hemisystem of the generators.
    let q52 = space("Q+(5,2)");
    let (latin, greek) = split_generator_families(&q52).unwrap();
    assert_eq!((latin.len(), greek.len()), (15, 15));
    assert_eq!(verify_regular_system(&q52, &latin, 1).unwrap(), 3);
    assert_eq!(verify_regular_system(&q52, &greek, 1).unwrap(), 3);
    let all: Vec<_> = latin.iter().chain(greek.iter()).cloned().collect();
    assert_eq!(verify_regular_system(&q52, &all, 1).unwrap(), 6);
    // With respect to totally isotropic lines each family is 1-regular:
    // through every t.i. line passes exactly one plane per family.
    assert_eq!(verify_regular_system(&q52, &latin, 2).unwrap(), 1);
    assert_eq!(verify_regular_system(&q52, &greek, 2).unwrap(), 1);
    assert_eq!(verify_regular_system(&q52, &all, 2).unwrap(), 2);
}

#[test]
fn regular_system_search_exhausts_small_cases() {
    // H(3,4) has no spread (m = 1); the search proves it by exhaustion.
    let h34 = space("H(3,4)");
    let out = search_regular_system(&h34, 1, 10_000_000).unwrap();
    assert!(out.members.is_none());
    assert!(out.exhausted);
    assert!(out.nodes > 0);
    // Determinism: a rerun visits the identical node count.
    let again = search_regular_system(&h34, 1, 10_000_000).unwrap();
    assert_eq!(out.nodes, again.nodes);

    // Q(4,2) has a line spread; Q(4,3) has none.
    let q42 = space("Q(4,2)");
    let found = search_regular_system(&q42, 1, 10_000_000).unwrap();
    let members = found.members.expect("Q(4,2) spread");
    assert_eq!(members.len(), 5);
    assert_eq!(verify_regular_system(&q42, &members, 1).unwrap(), 1);
    // Projection away from the nucleus carries the spread to W(3,2).
    let (w32, proj) = nucleus_projection(&q42, &members).unwrap();
    assert_eq!(w32.descriptor(), "W(3,2)");
    assert_eq!(verify_regular_system(&w32, &proj, 1).unwrap(), 1);

    let q43 = space("Q(4,3)");
    let none = search_regular_system(&q43, 1, 10_000_000).unwrap();
    assert!(none.members.is_none());
    assert!(none.exhausted);
}

#[test]
fn hemisystem_search_h39() {
    // The half-the-lines search on H(3,9) finds a 56-line 2-regular system.
    let h39 = space("H(3,9)");
    let out = search_hemisystem(&h39, 50_000_000).unwrap();
    let members = out.members.expect("hemisystem of H(3,9)");
    assert_eq!(members.len(), 56);
    assert_eq!(verify_regular_system(&h39, &members, 1).unwrap(), 2);
    // The search pins the first generator into the system.
    let gens = h39.generators().unwrap();
    assert!(members.contains(&gens[0]));

    // No 1-regular system exists: exhaustion, not budget.
    let none = search_regular_system(&h39, 1, 50_000_000).unwrap();
    assert!(none.members.is_none());
    assert!(none.exhausted);
}

// ---------------------------------------------------------------- elliptic hemisystem

#[test]
fn elliptic_partition_counts() {
    assert_eq!(elliptic_partition_count(3, 2), Some(35));
    assert_eq!(elliptic_partition_count(5, 2), Some(273));
    assert_eq!(elliptic_partition_count(2, 2), None);
}

#[test]
fn elliptic_hemisystem_q3() {
    let eh = elliptic_hemisystem(3).unwrap();
    assert_eq!(eh.space.descriptor(), "Q-(5,3)");
    assert_eq!(eh.part_sizes, (18, 9, 8));
    assert_eq!(eh.external_lines.len(), 35);

    // The 35 perp sections partition the 280 generators into 8-line quadrics.
    assert_eq!(eh.section_generators.len(), 35);
    let mut seen = BTreeSet::new();
    for sec in &eh.section_generators {
        assert_eq!(sec.len(), 8);
        for line in sec {
            assert!(seen.insert(line.clone()), "sections must not overlap");
        }
    }
    assert_eq!(seen.len(), 280);

    // One regulus per section gives 140 lines covering every point 5 times.
    assert_eq!(eh.members.len(), 140);
    assert_eq!(eh.m, 5);
    assert_eq!(verify_regular_system(&eh.space, &eh.members, 1).unwrap(), 5);

    // Swapping any single regulus for its opposite is again 5-regular.
    let flipped = eh.flipped_members(0);
    assert_eq!(flipped.len(), 140);
    assert_ne!(flipped, eh.members);
    assert_eq!(verify_regular_system(&eh.space, &flipped, 1).unwrap(), 5);

    // Every nondegenerate hyperplane section (40 isotropic points) contains
    // exactly m(q+1) = 20 members.
    let profile = hyperplane_section_profile(&eh.space, &eh.members).unwrap();
    let counts = profile.get(&40).expect("parabolic sections exist");
    assert_eq!(counts.iter().copied().collect::<Vec<_>>(), vec![20]);

    // Even characteristic is rejected.
    assert!(elliptic_hemisystem(2).is_err());
}

// ---------------------------------------------------------------- parabolic 1-system

#[test]
fn parabolic_one_system() {
    let os = parabolic_one_system_q3().unwrap();
    assert_eq!(os.space.descriptor(), "Q(6,3)");
    assert_eq!(os.members.len(), 28);
    assert_eq!(os.covered_points, 112);
    assert_eq!(os.opposite.len(), 28);
    for line in &os.opposite {
        assert!(!os.members.contains(line));
    }
    // All 28 + 28 lines together span the full ambient space.
    assert_eq!(os.span_rank, 7);

    // Planes through the chosen lines: a 4-regular system of 112 planes;
    // adding the opposite reguli doubles it to 224 planes meeting every
    // point 8 times.
    assert_eq!(os.base_planes.len(), 112);
    assert_eq!(os.base_m, 4);
    assert_eq!(verify_regular_system(&os.space, &os.base_planes, 1).unwrap(), 4);
    assert_eq!(os.derived_planes.len(), 224);
    assert_eq!(os.derived_m, 8);
    assert_eq!(
        verify_regular_system(&os.space, &os.derived_planes, 1).unwrap(),
        8
    );
}

// ---------------------------------------------------------------- twisted cubic ovoids

#[test]
fn twisted_cubic_q25() {
    let tc = twisted_cubic_partial_ovoid(25, -1).unwrap();
    assert_eq!(tc.cubic.len(), 26);
    assert_eq!(tc.orbit.len(), 40);
    assert_eq!(tc.group_order, 120);
    assert_eq!(tc.stabilizer_order, 3);
    assert_eq!(tc.ovoid.points.len(), 66);
    // The carrier x: a non-cube outside the square-root subfield whose
    // subfield norm is not 1.
    let f = tc.ovoid.space.field();
    assert!(!f.is_cube(tc.x_param));
    assert!(!f.subfield_elements(5).unwrap().contains(&tc.x_param));
    assert_ne!(f.pow(tc.x_param, 6), 1);

    // Pairwise check and the independent all-lines check both pass.
    verify_partial_ovoid(&tc.ovoid).unwrap();
    verify_partial_ovoid_lines(&tc.ovoid).unwrap();

    // The subgeometry carrying the extension point has 156 points and meets
    // the cubic in the 6 norm-one parameter points.
    assert_eq!(tc.carrier_size, 156);
    assert_eq!(tc.cubic_on_carrier, 6);

    // An extension point off the osculating planes of the carrier's cubic
    // exists, so the ovoid is not complete: the extended set is still a
    // partial ovoid.
    let n = tc.extension_point;
    assert!(!tc.ovoid.points.contains(&n));
    let mut extended = tc.ovoid.points.clone();
    extended.push(n);
    let po = PartialOvoid {
        space: tc.ovoid.space,
        points: extended,
        maximal: false,
    };
    verify_partial_ovoid(&po).unwrap();

    // The sign parameter must match sqrt(q) mod 3.
    assert!(twisted_cubic_partial_ovoid(25, 1).is_err());
}

#[test]
fn twisted_cubic_q49() {
    let tc = twisted_cubic_partial_ovoid(49, 1).unwrap();
    assert_eq!(tc.cubic.len(), 50);
    assert_eq!(tc.orbit.len(), 112);
    assert_eq!(tc.group_order, 336);
    assert_eq!(tc.stabilizer_order, 3);
    assert_eq!(tc.ovoid.points.len(), 162);
    verify_partial_ovoid(&tc.ovoid).unwrap();
    let n = tc.extension_point;
    assert!(!tc.ovoid.points.contains(&n));
    assert!(twisted_cubic_partial_ovoid(49, -1).is_err());
}

// ---------------------------------------------------------------- cyclic W(5,q) ovoids

#[test]
fn w5_cyclic_ovoids() {
    for (q, subgeometry, size) in [(2u32, 63u64, 7usize), (3, 364, 13), (4, 1365, 21)] {
        let co = w5_cyclic_partial_ovoid(q, 1).unwrap();
        assert_eq!(co.subgeometry_points, subgeometry, "q = {q}");
        assert_eq!(co.ovoid.points.len(), size, "q = {q}");
        assert!(co.ovoid.maximal);
        verify_partial_ovoid(&co.ovoid).unwrap();
        assert_eq!(co.ovoid.space.descriptor(), format!("W(5,{q})"));
    }
    assert!(w5_cyclic_partial_ovoid(3, 0).is_err());
}

// ---------------------------------------------------------------- Sherk sets

#[test]
fn sherk_surface_sizes() {
    // q = 2: sets live in GF(8) plus an infinity marker.
    let f8 = Field::new(2, 3).unwrap();
    let one = 1;
    // alpha = 0, beta = gamma = 0, delta = 1: only infinity satisfies it.
    let s = sherk_surface(&f8, 2, &SherkParams { alpha: 0, beta: 0, gamma: 0, delta: one })
        .unwrap();
    assert_eq!(s.size(), 1);
    assert!(s.has_infinity);

    // Norm-one elements: alpha = 1, delta = -1 (= 1 in characteristic 2).
    let s = sherk_surface(&f8, 2, &SherkParams { alpha: one, beta: 0, gamma: 0, delta: one })
        .unwrap();
    assert_eq!(s.size(), 7);
    assert!(!s.has_infinity);

    // The one-point family: (1, b, b^{q^2+q}, N(b)) for every b.
    for b in 0..8u32 {
        let gamma = f8.pow(b, 6);
        let delta = f8.pow(b, 7);
        let s = sherk_surface(&f8, 2, &SherkParams { alpha: one, beta: b, gamma, delta })
            .unwrap();
        assert_eq!(s.size(), 1, "b = {b}");
    }

    // Every nonzero parameter tuple over GF(8)/GF(2) has an admissible size.
    let mut sizes = BTreeSet::new();
    for alpha in 0..2u32 {
        for beta in 0..8u32 {
            for gamma in 0..8u32 {
                for delta in 0..2u32 {
                    if alpha == 0 && beta == 0 && gamma == 0 && delta == 0 {
                        assert!(sherk_surface(
                            &f8,
                            2,
                            &SherkParams { alpha, beta, gamma, delta }
                        )
                        .is_err());
                        continue;
                    }
                    let s = sherk_surface(&f8, 2, &SherkParams { alpha, beta, gamma, delta })
                        .unwrap();
                    sizes.insert(s.size());
                }
            }
        }
    }
    assert_eq!(sizes.into_iter().collect::<Vec<_>>(), vec![1, 3, 5, 7]);

    // q = 3: sizes are drawn from {1, 7, 10, 13}.
    let f27 = Field::new(3, 3).unwrap();
    let mut sizes = BTreeSet::new();
    for alpha in 0..3u32 {
        for beta in 0..27u32 {
            for gamma in 0..27u32 {
                for delta in 0..3u32 {
                    if alpha == 0 && beta == 0 && gamma == 0 && delta == 0 {
                        continue;
                    }
                    let s = sherk_surface(&f27, 3, &SherkParams { alpha, beta, gamma, delta })
                        .unwrap();
                    sizes.insert(s.size());
                }
            }
        }
    }
    assert!(sizes.iter().all(|s| [1, 7, 10, 13].contains(s)));
    assert!(sizes.contains(&13));
}

// ---------------------------------------------------------------- even-characteristic W(5,q)

#[test]
fn w5_even_ovoids() {
    let eo2 = w5_even_partial_ovoid(2).unwrap();
    assert_eq!(eo2.delta, 1);
    assert_eq!(eo2.ovoid.points.len(), 7);
    assert!(eo2.ovoid.maximal);
    verify_partial_ovoid(&eo2.ovoid).unwrap();
    assert_eq!(eo2.elliptic_part.len(), 5);
    assert_eq!(eo2.quadric_part.len(), 5);

    let eo4 = w5_even_partial_ovoid(4).unwrap();
    assert_eq!(eo4.delta, 2);
    assert_eq!(eo4.ovoid.points.len(), 29);
    assert!(eo4.ovoid.maximal);
    verify_partial_ovoid(&eo4.ovoid).unwrap();
    // Both halves are elliptic-type partial ovoids of size q^2 + 1.
    assert_eq!(eo4.elliptic_part.len(), 17);
    assert_eq!(eo4.quadric_part.len(), 17);
    for part in [&eo4.elliptic_part, &eo4.quadric_part] {
        let po = PartialOvoid {
            space: w5_even_partial_ovoid(4).unwrap().ovoid.space,
            points: part.clone(),
            maximal: false,
        };
        verify_partial_ovoid(&po).unwrap();
    }

    assert!(w5_even_partial_ovoid(3).is_err());
}

// ---------------------------------------------------------------- tangent sets and lifts

#[test]
fn tangent_set_and_lift_q2() {
    let pencil = hermitian_pencil(2).unwrap();
    assert_eq!(pencil.sheets.len(), 2);
    assert_eq!(pencil.xis.len(), 2);
    assert_eq!(pencil.xis[0], 0);
    for sheet in &pencil.sheets {
        assert_eq!(sheet.num_points(), 45);
    }
    assert_eq!(pencil.substrate.descriptor(), "W(3,2)");

    // An ovoid of W(3,2) meeting the hyperplane X3 = 0 in exactly one point.
    let ovoid = ovoid_search(&pencil.substrate, 5, Some(1)).expect("ovoid of W(3,2)");
    assert_eq!(ovoid.len(), 5);
    let ts = tangent_set(&pencil, &[ovoid.clone(), ovoid.clone()]).unwrap();
    assert_eq!(ts.points.len(), 9);
    assert_eq!((ts.off_plane, ts.on_plane), (4, 1));
    assert!(ts.maximal);
    verify_tangent_set(&pencil, &ts).unwrap();

    // Lifting through an external point gives a maximal 17-point partial
    // ovoid of H(4,4): q^2 x + y with x = 4, y = 1.
    let lift = hermitian_lift(&pencil, &ts).unwrap();
    assert_eq!(lift.space.descriptor(), "H(4,4)");
    assert_eq!(lift.points.len(), 17);
    assert!(lift.maximal);
    verify_partial_ovoid(&lift).unwrap();

    // A single point shared by both sheets (so it must lie on the fixed
    // hyperplane X3 = 0) is a (trivial) tangent set.
    let shared = *ovoid
        .iter()
        .find(|&&p| pencil.substrate.ambient().point(p)[3] == 0)
        .expect("the ovoid meets the plane");
    let single = vec![shared];
    let ts1 = tangent_set(&pencil, &[single.clone(), single]).unwrap();
    assert_eq!(ts1.points.len(), 1);
    verify_tangent_set(&pencil, &ts1).unwrap();
}

#[test]
fn tangent_set_q3_from_partial_ovoids() {
    let pencil = hermitian_pencil(3).unwrap();
    assert_eq!(pencil.sheets.len(), 3);
    for sheet in &pencil.sheets {
        assert_eq!(sheet.num_points(), 280);
    }
    // W(3,3) has no ovoids; a greedy maximal partial ovoid still glues into
    // a tangent set (without the maximality claim). The ascending scan
    // settles on a 4-point maximal partial ovoid.
    let po = greedy_partial_ovoid(&pencil.substrate);
    assert_eq!(po.len(), 4);
    let ovoids = vec![po.clone(), po.clone(), po.clone()];
    let ts = tangent_set(&pencil, &ovoids).unwrap();
    let y = u64::try_from(po.iter().filter(|&&p| {
        pencil.substrate.ambient().point(p).last() == Some(&0)
    }).count())
    .unwrap();
    let x = u64::try_from(po.len()).unwrap() - y;
    assert_eq!(u64::try_from(ts.points.len()).unwrap(), 3 * x + y);
    verify_tangent_set(&pencil, &ts).unwrap();

    let lift = hermitian_lift(&pencil, &ts).unwrap();
    assert_eq!(u64::try_from(lift.points.len()).unwrap(), 9 * x + y);
    verify_partial_ovoid(&lift).unwrap();
}

// ---------------------------------------------------------------- ovoid fans

#[test]
fn hermitian_fan_q2() {
    let fan = hermitian_fan(4).unwrap();
    assert_eq!(fan.space.descriptor(), "H(3,4)");
    assert_eq!(fan.ovoids.len(), 5);
    let mut seen = BTreeSet::new();
    for ovoid in &fan.ovoids {
        assert_eq!(ovoid.len(), 9);
        for &p in ovoid {
            assert!(seen.insert(p), "fan ovoids must partition the points");
        }
    }
    assert_eq!(seen.len(), 45);
    // Every generator meets every fan ovoid in exactly one point.
    let f = fan.space.field();
    for gen in fan.space.generators().unwrap() {
        for ovoid in &fan.ovoids {
            let hits = ovoid
                .iter()
                .filter(|&&p| gen.contains_point(f, fan.space.ambient().point(p)))
                .count();
            assert_eq!(hits, 1);
        }
    }
}

// ---------------------------------------------------------------- unitals

#[test]
fn hermitian_unitals() {
    for (a, tangents, secants) in [(2u32, 9u64, 12u64), (3, 28, 63)] {
        let u = make_unital(UnitalKind::Hermitian, a).unwrap();
        assert_eq!(u.order, a);
        assert_eq!(u.points.len(), (a * a * a + 1) as usize);
        let check = verify_unital(&u).unwrap();
        assert_eq!(check.tangent_lines, tangents);
        assert_eq!(check.secant_lines, secants);
        assert_eq!(check.lambda, 1);
        assert_eq!(check.blocks.len(), secants as usize);
        // Hermitian unitals carry no dual four-point tangent configuration.
        assert!(dual_onan_search(&u).unwrap().is_none());
    }
}

#[test]
fn orthogonal_buekenhout_metz_unital_q3() {
    let u = make_unital(UnitalKind::BuekenhoutMetz, 3).unwrap();
    assert_eq!(u.order, 3);
    assert_eq!(u.points.len(), 28);
    // Least admissible parameter pair with alpha nonzero, over GF(9) with
    // modulus X^2 + 1: alpha = 1 + x, beta = 0.
    assert_eq!(u.parameters, Some((4, 0)));
    let check = verify_unital(&u).unwrap();
    assert_eq!(check.tangent_lines, 28);
    assert_eq!(check.secant_lines, 63);
    assert_eq!(check.lambda, 1);

    // Non-classical: a dual four-point configuration exists...
    let onan = dual_onan_search(&u).unwrap();
    assert!(onan.is_some());

    // ...and the tangent graph on the 63 outer points is an SRG(63,32,16,16).
    let g = unital_tangent_graph(&u).unwrap();
    assert_eq!(g.n(), 63);
    match srg_check(&g) {
        SrgOutcome::StronglyRegular(p) => {
            assert_eq!(p, SrgParams { v: 63, k: 32, lambda: 16, mu: 16 })
        }
        other => panic!("expected an SRG, got {other:?}"),
    }
}

#[test]
fn buekenhout_tits_unital_q8() {
    let u = make_unital(UnitalKind::BuekenhoutTits, 8).unwrap();
    assert_eq!(u.order, 8);
    assert_eq!(u.points.len(), 513);
    let check = verify_unital(&u).unwrap();
    assert_eq!(check.tangent_lines, 513);
    assert_eq!(check.secant_lines, 3648);
    assert_eq!(check.lambda, 1);
    // The construction needs q = 2^m with m odd and greater than one.
    assert!(make_unital(UnitalKind::BuekenhoutTits, 4).is_err());
    assert!(make_unital(UnitalKind::BuekenhoutTits, 2).is_err());
}

#[test]
fn block_design_verifier() {
    // The lines of PG(2,2) form a 2-(7,3,1) design.
    let f2 = Field::new(2, 1).unwrap();
    let pg = ProjSpace::new(f2.clone(), 2).unwrap();
    let blocks: Vec<Vec<usize>> = pg
        .enumerate_subspaces(1)
        .unwrap()
        .iter()
        .map(|l| {
            l.points(&f2)
                .iter()
                .map(|p| pg.point_index(p).unwrap())
                .collect()
        })
        .collect();
    assert_eq!(blocks.len(), 7);
    assert_eq!(verify_block_design(7, 3, &blocks).unwrap(), 1);
    // Unequal block sizes are rejected.
    let bad = vec![vec![0, 1, 2], vec![3, 4]];
    assert!(verify_block_design(7, 3, &bad).is_err());
}

// ---------------------------------------------------------------- quartic count bridge

#[test]
fn quartic_count_matches_curve_membership() {
    // #{xi : xi^4 - 48 xi^2 + 64 is a square in GF(q)} lands in
    // {(q+1)/2, (q-3)/2} exactly when the projective point count of
    // Y^2 Z = X^3 - X Z^2 lands in {q-1, q+3}.
    assert_eq!(quartic_square_count(5).unwrap(), 1);
    for (q, expected) in [(5u64, true), (13, false), (17, true)] {
        let n = quartic_square_count(q as u32).unwrap();
        let quartic_side = n == (q + 1) / 2 || n == (q - 3) / 2;
        let (_, projective) = elliptic_curve_counts(q).unwrap();
        let curve_side = projective == q - 1 || projective == q + 3;
        assert_eq!(quartic_side, expected, "q = {q}");
        assert_eq!(curve_side, expected, "q = {q}");
    }
}

// ---------------------------------------------------------------- misc guards

#[test]
fn hyperplane_profile_families_guard() {
    // The profile helper refuses families whose ambient is even-dimensional
    // projectively trivial cases are fine; here we only pin the happy path
    // shape on a tiny instance: W(3,2) with all 15 lines, every hyperplane
    // holds the same member count pattern.
    let w32 = space("W(3,2)");
    let lines = w32.generators().unwrap();
    let profile = hyperplane_section_profile(&w32, &lines).unwrap();
    // Each of the 15 hyperplanes of PG(3,2) meets W(3,2) in 7 points and
    // contains exactly 3 of the 15 lines.
    assert_eq!(profile.len(), 1);
    assert_eq!(
        profile.get(&7).unwrap().iter().copied().collect::<Vec<_>>(),
        vec![3]
    );
}
