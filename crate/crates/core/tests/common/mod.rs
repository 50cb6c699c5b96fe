#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stewart_core::geometry::{make_circle_base, BasePoint};
use stewart_core::{Mat3, PlatformGeometry, Pose, Quaternion, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed unit quaternion (Shoemake's subgroup algorithm).
pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    Quaternion::new(
        a * (TAU * u2).sin(),
        a * (TAU * u2).cos(),
        b * (TAU * u3).sin(),
        b * (TAU * u3).cos(),
    )
    .unwrap()
}

/// Random orthogonal matrix; improper (det −1) half of the time.
pub fn random_orthogonal(rng: &mut impl Rng) -> Mat3 {
    let r = random_quaternion(rng).to_matrix();
    if rng.gen_bool(0.5) {
        r * Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]])
    } else {
        r
    }
}

pub fn random_position(rng: &mut impl Rng) -> Vec3 {
    Vec3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_pose(rng: &mut impl Rng) -> Pose {
    Pose::new(random_quaternion(rng), random_position(rng))
}

/// Six angles with pairwise circular gaps of at least `min_gap`.
pub fn spread_angles(rng: &mut impl Rng, min_gap: f64) -> [f64; 6] {
    loop {
        let mut a: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.0..TAU));
        let mut sorted = a;
        sorted.sort_by(f64::total_cmp);
        let mut ok = TAU - sorted[5] + sorted[0] >= min_gap;
        for k in 1..6 {
            ok &= sorted[k] - sorted[k - 1] >= min_gap;
        }
        if ok {
            // keep the unsorted order so bases are not always counter-clockwise
            a.rotate_left(rng.gen_range(0..6));
            return a;
        }
    }
}

pub fn random_circle_base(rng: &mut impl Rng) -> [BasePoint; 6] {
    make_circle_base(spread_angles(rng, 0.15)).unwrap()
}

/// Six points in [−1.5, 1.5]² with no common conic (verified by the caller
/// where it matters).
pub fn random_generic_base(rng: &mut impl Rng) -> [BasePoint; 6] {
    loop {
        let base: [BasePoint; 6] =
            std::array::from_fn(|_| [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)]);
        let separated = (0..6).all(|i| {
            (i + 1..6).all(|j| (base[i][0] - base[j][0]).hypot(base[i][1] - base[j][1]) > 0.2)
        });
        if separated {
            return base;
        }
    }
}

pub fn hexagon_angles() -> [f64; 6] {
    std::array::from_fn(|k| k as f64 * PI / 3.0)
}

pub fn hexagon() -> PlatformGeometry {
    PlatformGeometry::circle(hexagon_angles(), 0.5).unwrap()
}

/// Regular hexagon on the unit circle with vertex 0 moved to (1.2, 0).
pub fn perturbed_hexagon() -> PlatformGeometry {
    let mut base = make_circle_base(hexagon_angles()).unwrap();
    base[0] = [1.2, 0.0];
    PlatformGeometry::new(base, Mat3::IDENTITY, 0.5).unwrap()
}

/// Hexagon with one vertex pushed radially by 0.02..0.1 in either direction.
pub fn radially_perturbed_hexagon(rng: &mut impl Rng) -> [BasePoint; 6] {
    let mut base = make_circle_base(hexagon_angles()).unwrap();
    let k = rng.gen_range(0..6);
    let delta = rng.gen_range(0.02..0.1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    base[k] = base[k].map(|c| c * (1.0 + delta));
    base
}

#[derive(Debug, Clone, Copy)]
pub enum ConicKind {
    Circle,
    Ellipse,
    Parabola,
    Hyperbola,
    LinePair,
}

fn place(rng: &mut impl Rng, pts: [[f64; 2]; 6]) -> [BasePoint; 6] {
    let phi = rng.gen_range(0.0..TAU);
    let (c, s) = (phi.cos(), phi.sin());
    let (tx, ty) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    pts.map(|[x, y]| [c * x - s * y + tx, s * x + c * y + ty])
}

/// Six points on a random conic of the given kind, rotated and translated.
pub fn random_conic_points(rng: &mut impl Rng, kind: ConicKind) -> [BasePoint; 6] {
    let t = spread_angles(rng, 0.25);
    let pts = match kind {
        ConicKind::Circle => {
            let r = rng.gen_range(0.5..2.0);
            t.map(|a| [r * a.cos(), r * a.sin()])
        }
        ConicKind::Ellipse => {
            let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
            t.map(|th| [a * th.cos(), b * th.sin()])
        }
        ConicKind::Parabola => {
            let a = rng.gen_range(0.3..1.5);
            t.map(|th| {
                let x = th / PI - 1.0;
                [x, a * x * x]
            })
        }
        ConicKind::Hyperbola => {
            let (a, b) = (rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
            t.map(|th| {
                let u = th / PI - 1.0;
                let branch = if th < PI { 1.0 } else { -1.0 };
                [branch * a * u.cosh(), b * u.sinh()]
            })
        }
        ConicKind::LinePair => {
            let slope = rng.gen_range(0.5..2.0);
            let mut k = 0;
            t.map(|th| {
                k += 1;
                let x = th / PI - 1.0;
                if k % 2 == 0 {
                    [x, slope * x + 0.3]
                } else {
                    [x, -slope * x - 0.3]
                }
            })
        }
    };
    place(rng, pts)
}
