mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use stewart_core::fk_nonsingular::{fk_solve, quaternions_from_w, PositionBranch};
use stewart_core::fk_singular::{build_singular_system, sweep, w_at};
use stewart_core::geometry::{build_q, conic_check};
use stewart_core::ik::{d_from_lengths, leg_lengths, w_from_pose};
use stewart_core::numkernel::{lu_factor, null_vector, solve6, Mat6, Vec3, Vec6};
use stewart_core::{LegLengths, Mat3, PlatformGeometry, Pose};

fn random_matrix(rng: &mut impl Rng) -> Mat6 {
    let mut m = Mat6::zeros();
    for row in m.0.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    m
}

#[test]
fn lu_reconstructs_random_matrices() {
    let mut rng = rng(1);
    for _ in 0..1000 {
        let m = random_matrix(&mut rng);
        let f = lu_factor(&m);
        let lu = f.lower() * f.upper();
        let perm = f.permutation();
        let mut sorted = perm;
        sorted.sort();
        assert_eq!(sorted, [0, 1, 2, 3, 4, 5]);
        for i in 0..6 {
            for j in 0..6 {
                assert!((lu.0[i][j] - m.0[perm[i]][j]).abs() <= 1e-12 * m.max_abs());
            }
        }
    }
}

#[test]
fn solve6_recovers_rhs() {
    let mut rng = rng(2);
    let mut trials = 0;
    while trials < 1000 {
        // diagonally dominant: well conditioned
        let mut m = random_matrix(&mut rng);
        for i in 0..6 {
            m.0[i][i] += 4.0;
        }
        let x0 = Vec6(std::array::from_fn(|_| rng.gen_range(-3.0..3.0)));
        let rhs = &m * x0;
        let x = solve6(&lu_factor(&m), &rhs).unwrap();
        assert!((&m * x - rhs).max_abs() <= 1e-10 * (1.0 + rhs.max_abs()));
        assert!((x - x0).max_abs() <= 1e-9);
        trials += 1;
    }
}

#[test]
fn null_vectors_of_conic_bases() {
    let mut rng = rng(3);
    let kinds = [
        ConicKind::Circle,
        ConicKind::Ellipse,
        ConicKind::Parabola,
        ConicKind::Hyperbola,
        ConicKind::LinePair,
    ];
    for k in 0..250 {
        let base = random_conic_points(&mut rng, kinds[k % kinds.len()]);
        let q = build_q(&base);
        let f = lu_factor(&q);
        assert!(f.rank() <= 5, "{:?} {base:?}", kinds[k % kinds.len()]);
        if f.rank() == 5 {
            let n = null_vector(&f).unwrap();
            assert!((n.norm() - 1.0).abs() < 1e-14);
            assert!((&q * n).max_abs() <= 1e-9 * q.max_abs());
        }
    }
}

#[test]
fn radially_perturbed_hexagons_are_off_conic() {
    let mut rng = rng(4);
    for _ in 0..20 {
        let report = conic_check(&radially_perturbed_hexagon(&mut rng));
        assert_eq!(report.numerical_rank, 6);
        assert!(!report.on_conic);
    }
}

#[test]
fn fundamental_identity_holds() {
    let mut rng = rng(5);
    for k in 0..1000 {
        let base = if k % 2 == 0 {
            random_generic_base(&mut rng)
        } else {
            random_circle_base(&mut rng)
        };
        let geom = PlatformGeometry::new(base, random_orthogonal(&mut rng), rng.gen_range(0.05..0.95)).unwrap();
        let pose = random_pose(&mut rng);
        let Ok(lengths) = leg_lengths(&geom, &pose) else { continue };
        let lhs = &geom.q_matrix() * w_from_pose(&geom, &pose).0;
        let rhs = d_from_lengths(&geom, &lengths).0;
        assert!((lhs - rhs).max_abs() <= 1e-9);
    }
}

#[test]
fn leg_lengths_are_homogeneous() {
    let mut rng = rng(6);
    for _ in 0..200 {
        let base = random_generic_base(&mut rng);
        let a = random_orthogonal(&mut rng);
        let mu = rng.gen_range(0.1..0.9);
        let pose = random_pose(&mut rng);
        let g1 = PlatformGeometry::new(base, a, mu).unwrap();
        let g2 = PlatformGeometry::new(base.map(|p| p.map(|c| 2.0 * c)), a, mu).unwrap();
        let scaled = Pose::new(pose.orientation, pose.position * 2.0);
        let l1 = leg_lengths(&g1, &pose).unwrap();
        let l2 = leg_lengths(&g2, &scaled).unwrap();
        for i in 0..6 {
            assert!((l2[i] - 2.0 * l1[i]).abs() <= 1e-12 * (1.0 + l2[i]));
        }
    }
}

#[test]
fn nonsingular_round_trip_on_random_bases() {
    let mut rng = rng(7);
    let mut checked = 0;
    while checked < 200 {
        let base = random_generic_base(&mut rng);
        if conic_check(&base).numerical_rank != 6 {
            continue;
        }
        let geom = PlatformGeometry::new(base, random_orthogonal(&mut rng), rng.gen_range(0.2..0.8)).unwrap();
        let pose = random_pose(&mut rng);
        let Ok(lengths) = leg_lengths(&geom, &pose) else { continue };
        let sols = fk_solve(&geom, &lengths).unwrap();
        assert!(sols.len() <= 8);
        assert!(sols.iter().any(|s| s.pose.distance(&pose) < 1e-6), "{sols:?} {pose:?}");
        for s in &sols {
            let back = leg_lengths(&geom, &s.pose).unwrap();
            assert!(back.max_deviation(&lengths) <= 1e-8 * (1.0 + lengths.max()));
        }
        // position branches pair up except at tangency
        for index in 1..=4u8 {
            let branches: Vec<_> = sols
                .iter()
                .filter(|s| s.rotation_index == index)
                .map(|s| s.position_branch)
                .collect();
            assert!(
                branches.is_empty()
                    || branches == [PositionBranch::Tangent]
                    || branches == [PositionBranch::Plus, PositionBranch::Minus]
            );
        }
        checked += 1;
    }
}

#[test]
fn circle_family_keeps_position_terms_constant() {
    let mut rng = rng(8);
    for _ in 0..50 {
        let geom = PlatformGeometry::new(random_circle_base(&mut rng), random_orthogonal(&mut rng), rng.gen_range(0.2..0.8)).unwrap();
        let pose = random_pose(&mut rng);
        let lengths = leg_lengths(&geom, &pose).unwrap();
        let system = build_singular_system(&geom, &lengths).unwrap();
        let n = system.null_dir;
        assert!(n[1].abs() < 1e-9 && n[2].abs() < 1e-9 && n[4].abs() < 1e-9);

        let a = w_at(&system, 0.3).unwrap();
        let b = w_at(&system, 1.7).unwrap();
        let diff = a.0 - b.0;
        let along = diff.dot(&n);
        assert!((diff - n.scale(along)).max_abs() <= 1e-10);
        for (x, y) in [(a.w2(), b.w2()), (a.w3(), b.w3()), (a.w5(), b.w5())] {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn sweep_through_seed_recovers_seed() {
    let mut rng = rng(9);
    let mut checked = 0;
    while checked < 30 {
        let geom = PlatformGeometry::new(random_circle_base(&mut rng), Mat3::IDENTITY, rng.gen_range(0.2..0.8)).unwrap();
        let pose = random_pose(&mut rng);
        let lengths = leg_lengths(&geom, &pose).unwrap();
        let system = build_singular_system(&geom, &lengths).unwrap();
        let w1 = pose.position.norm_squared();
        // seed sits on the middle grid point
        let (lo, hi) = ((w1 - 0.2).max(0.0), w1 + 0.2);
        let mid = if lo == 0.0 { w1 } else { 0.5 * (lo + hi) };
        let samples = if lo == 0.0 {
            sweep(&system, &geom, 0.0, 2.0 * w1, 3).unwrap()
        } else {
            sweep(&system, &geom, lo, hi, 3).unwrap()
        };
        let at_seed = &samples[1];
        assert!((at_seed.parameter - mid).abs() < 1e-12);
        assert!(at_seed.feasible);
        assert!(
            at_seed.poses.iter().any(|p| p.pose.distance(&pose) < 1e-8),
            "{:?} vs {pose:?}",
            at_seed.poses
        );
        for s in samples.iter().filter(|s| s.feasible) {
            assert!(s.leg_residual.unwrap() <= 1e-8 * (1.0 + lengths.max()));
        }
        checked += 1;
    }
}

proptest! {
    #[test]
    fn cross_is_orthogonal(a in prop::array::uniform3(-10.0f64..10.0), b in prop::array::uniform3(-10.0f64..10.0)) {
        let (u, v) = (Vec3::from_array(a), Vec3::from_array(b));
        let c = u.cross(v);
        let scale = (u.norm() * v.norm()).max(1.0);
        prop_assert!(c.dot(u).abs() <= 1e-14 * scale * u.norm().max(1.0));
        prop_assert!(c.dot(v).abs() <= 1e-14 * scale * v.norm().max(1.0));
    }

    #[test]
    fn leg_lengths_ignore_quaternion_sign(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let geom = PlatformGeometry::new(random_generic_base(&mut rng), random_orthogonal(&mut rng), 0.5).unwrap();
        let pose = random_pose(&mut rng);
        let [a, b, c, d] = pose.orientation.components();
        let flipped = Pose::new(stewart_core::Quaternion::new(-a, -b, -c, -d).unwrap(), pose.position);
        let (l1, l2) = (leg_lengths(&geom, &pose).unwrap(), leg_lengths(&geom, &flipped).unwrap());
        prop_assert!(l1.max_deviation(&l2) <= 1e-14 * (1.0 + l1.max()));
    }

    #[test]
    fn candidates_are_exact_preimages(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let mu = rng.gen_range(0.1..0.9);
        let geom = PlatformGeometry::new(random_generic_base(&mut rng), Mat3::IDENTITY, mu).unwrap();
        let w = w_from_pose(&geom, &random_pose(&mut rng));
        let c = quaternions_from_w(&w, mu).unwrap();
        prop_assert!(c.gamma >= c.alpha.abs());
        for (_, q) in &c.candidates {
            let r = q.to_matrix();
            prop_assert!((-2.0 * mu * r.0[0][0] - w.w4()).abs() <= 1e-8);
            prop_assert!((-2.0 * mu * (r.0[0][1] + r.0[1][0]) - w.w5()).abs() <= 1e-8);
            prop_assert!((-2.0 * mu * r.0[1][1] - w.w6()).abs() <= 1e-8);
        }
        for (i, (_, a)) in c.candidates.iter().enumerate() {
            for (_, b) in &c.candidates[i + 1..] {
                prop_assert!(a.rotation_distance(b) > 1e-9);
            }
        }
    }

    #[test]
    fn random_lengths_never_yield_spurious_poses(l in prop::array::uniform6(0.05f64..3.0)) {
        let geom = perturbed_hexagon();
        let lengths = LegLengths::new(l).unwrap();
        if let Ok(sols) = fk_solve(&geom, &lengths) {
            for s in sols {
                let back = leg_lengths(&geom, &s.pose).unwrap();
                prop_assert!(back.max_deviation(&lengths) <= 1e-8 * (1.0 + lengths.max()));
            }
        }
    }
}
