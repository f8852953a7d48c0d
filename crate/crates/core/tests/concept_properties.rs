//! Membership, α-cuts, projection and nearest-point distance.

mod common;

use common::{fruit, Gen};
use conceptspace_core::concept::distance_to_cuboid;
use conceptspace_core::geometry::combined_distance;
use conceptspace_core::{Cuboid, DomainSet, Point, WeightSet};

/// Brute-force minimum of `d_C(x, ·)` over a cuboid: a grid search that
/// repeatedly halves a window centred on the best grid node. The objective
/// is convex, so a window of several grid spacings keeps the minimizer.
fn grid_minimum(w: &WeightSet, x: &Point, cuboid: &Cuboid) -> f64 {
    let n = x.coords().len();
    let mut lo: Vec<f64> = cuboid.lower().to_vec();
    let mut hi: Vec<f64> = cuboid.upper().to_vec();
    let steps = 8usize;
    let mut best = f64::INFINITY;
    let mut best_node = lo.clone();
    for _ in 0..90 {
        let mut index = vec![0usize; n];
        loop {
            let y: Vec<f64> = (0..n)
                .map(|i| lo[i] + (hi[i] - lo[i]) * index[i] as f64 / steps as f64)
                .collect();
            let d = combined_distance(w, x, &Point::new(y.clone())).unwrap();
            if d < best {
                best = d;
                best_node = y;
            }
            let mut k = 0;
            while k < n {
                index[k] += 1;
                if index[k] <= steps {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        for i in 0..n {
            let half = (hi[i] - lo[i]) / 4.0;
            lo[i] = (best_node[i] - half).max(cuboid.lower()[i]);
            hi[i] = (best_node[i] + half).min(cuboid.upper()[i]);
        }
    }
    best
}

#[test]
fn cuboid_distance_matches_grid_search() {
    let mut g = Gen::new(11);
    for _ in 0..40 {
        let domains = 1 + g.below(2);
        let space = g.space(domains, 2);
        let w = g.weights(&space);
        let centre: Vec<f64> = (0..space.dimension_count()).map(|_| g.unit()).collect();
        let cuboid = g.cuboid(&space, &centre);
        let x = g.point(&space, -0.5, 1.5);
        let fast = distance_to_cuboid(&w, &x, &cuboid).unwrap();
        let slow = grid_minimum(&w, &x, &cuboid);
        assert!((fast - slow).abs() < 1e-6, "{fast} vs {slow}");
    }
}

#[test]
fn membership_is_mu0_exactly_on_the_core() {
    let mut g = Gen::new(12);
    for _ in 0..50 {
        let space = g.space(2, 2);
        let m = 1 + g.below(3);
        let concept = g.concept(&space, m);
        for cuboid in concept.core().cuboids() {
            let inside: Vec<f64> = cuboid
                .lower()
                .iter()
                .zip(cuboid.upper())
                .map(|(lo, hi)| lo + g.unit() * (hi - lo))
                .collect();
            assert_eq!(
                concept.membership(&Point::new(inside)).unwrap(),
                concept.mu0()
            );
        }
        let x = g.point(&space, -1.0, 2.0);
        let m = concept.membership(&x).unwrap();
        if concept.core().contains(&x) {
            assert_eq!(m, concept.mu0());
        } else {
            assert!(m < concept.mu0() && m > 0.0);
        }
    }
}

#[test]
fn membership_vanishes_along_rays() {
    let f = fruit();
    let mut g = Gen::new(13);
    for _ in 0..20 {
        let dir: Vec<f64> = (0..3).map(|_| g.range(-1.0, 1.0)).collect();
        let mut last = f64::INFINITY;
        for step in [1.0, 10.0, 100.0, 1000.0] {
            let x = Point::new(dir.iter().map(|d| 0.75 + step * d).collect());
            let m = f.apple.membership(&x).unwrap();
            assert!(m <= last);
            last = m;
        }
        assert!(last < 1e-12);
    }
}

#[test]
fn membership_is_the_max_over_fuzzified_cuboids() {
    let mut g = Gen::new(14);
    for _ in 0..30 {
        let space = g.space(2, 2);
        let concept = g.concept(&space, 3);
        for _ in 0..20 {
            let x = g.point(&space, -1.0, 2.0);
            let parts = concept.cuboid_memberships(&x).unwrap();
            let max = parts.into_iter().fold(0.0, f64::max);
            assert_eq!(concept.membership(&x).unwrap(), max);
        }
    }
}

#[test]
fn alpha_cut_matches_epsilon_neighbourhood() {
    let mut g = Gen::new(15);
    for _ in 0..30 {
        let space = g.space(2, 2);
        let concept = g.concept(&space, 2);
        let alpha = g.range(0.01, 1.0) * concept.mu0();
        let eps = concept.alpha_radius(alpha);
        for _ in 0..50 {
            let x = g.point(&space, -1.0, 2.0);
            let dist = concept
                .core()
                .cuboids()
                .iter()
                .map(|c| distance_to_cuboid(concept.weights(), &x, c).unwrap())
                .fold(f64::INFINITY, f64::min);
            let member = concept.membership(&x).unwrap();
            // Skip points sitting on the boundary up to rounding.
            if (dist - eps).abs() > 1e-12 {
                assert_eq!(member >= alpha, dist <= eps);
            }
        }
    }
}

/// α-cuts are star-shaped with respect to the central region: the straight
/// segment from a central point to any member of the cut stays in the cut.
#[test]
fn alpha_cuts_are_star_shaped_around_the_central_region() {
    let mut g = Gen::new(16);
    for _ in 0..40 {
        let space = g.space(2, 2);
        let concept = g.concept(&space, 3);
        let p_box = concept.core().central_region();
        let alpha = g.range(0.05, 1.0) * concept.mu0();
        for _ in 0..30 {
            let p: Vec<f64> = p_box
                .lower()
                .iter()
                .zip(p_box.upper())
                .map(|(lo, hi)| lo + g.unit() * (hi - lo))
                .collect();
            let x = g.point(&space, -0.5, 1.5);
            if concept.membership(&x).unwrap() < alpha {
                continue;
            }
            for k in 1..20 {
                let t = k as f64 / 20.0;
                let y: Vec<f64> = p
                    .iter()
                    .zip(x.coords())
                    .map(|(a, b)| a + t * (b - a))
                    .collect();
                assert!(concept.membership(&Point::new(y)).unwrap() >= alpha - 1e-9);
            }
        }
    }
}

#[test]
fn projection_composes() {
    let mut g = Gen::new(17);
    for _ in 0..30 {
        let space = g.space(3, 2);
        let m = 1 + g.below(3);
        let concept = g.concept(&space, m);
        let middle = DomainSet::new([0, 2]);
        let last = DomainSet::new([2]);
        let stepwise = concept.project(&middle).unwrap().project(&last).unwrap();
        let direct = concept.project(&last).unwrap();
        assert_eq!(stepwise.core(), direct.core());
        assert_eq!(stepwise.mu0(), direct.mu0());
        let (a, b) = (stepwise.weights(), direct.weights());
        assert!((a.domain_weight(2).unwrap() - b.domain_weight(2).unwrap()).abs() < 1e-12);
        for i in space.dimensions_of(2) {
            assert_eq!(a.dimension_weight(i), b.dimension_weight(i));
        }
    }
}
