mod common;

use common::{fruit, simpson, Gen};
use conceptspace_core::concept::distance_to_cuboid;
use conceptspace_core::geometry::combined_distance;
use conceptspace_core::measure::{
    alpha_cut_volume, concept_alpha_cut_volume, fuzzified_cuboid_measure, hyperball_volume,
};
use conceptspace_core::{Concept, Core, Cuboid, DomainStructure, Limits, Point, WeightSet};

/// Plain Monte-Carlo mean of `f` over the box `[lo, hi]`, with its standard error.
fn box_monte_carlo<F: FnMut(&Point) -> f64>(
    gen: &mut Gen,
    lo: &[f64],
    hi: &[f64],
    samples: usize,
    mut f: F,
) -> (f64, f64) {
    let volume: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut x = Point::new(vec![0.0; lo.len()]);
    for _ in 0..samples {
        for (i, v) in x.coords_mut().iter_mut().enumerate() {
            *v = gen.range(lo[i], hi[i]);
        }
        let y = f(&x);
        sum += y;
        sum_sq += y * y;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    (volume * mean, volume * (var / n).sqrt())
}

fn scale(w: &WeightSet, space: &DomainStructure, i: usize) -> f64 {
    w.domain_weight(space.domain_of(i)).unwrap() * w.dimension_weight(i).unwrap().sqrt()
}

/// Box holding every point within combined distance `r` of `cuboid`.
fn padded_box(
    w: &WeightSet,
    space: &DomainStructure,
    cuboid: &Cuboid,
    r: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = space.dimension_count();
    let lo = (0..n)
        .map(|i| cuboid.lower()[i] - r / scale(w, space, i))
        .collect();
    let hi = (0..n)
        .map(|i| cuboid.upper()[i] + r / scale(w, space, i))
        .collect();
    (lo, hi)
}

fn single(concept: &Concept) -> &Cuboid {
    &concept.core().cuboids()[0]
}

fn volume(cuboid: &Cuboid) -> f64 {
    (0..cuboid.lower().len()).map(|i| cuboid.width(i)).product()
}

#[test]
fn measure_grows_with_the_core() {
    let mut gen = Gen::new(11);
    for _ in 0..200 {
        let domains = 1 + gen.below(3);
        let space = gen.space(domains, 2);
        let inner = gen.concept(&space, 1);
        let cuboid = single(&inner);
        let lower: Vec<f64> = cuboid
            .lower()
            .iter()
            .map(|v| v - gen.range(0.0, 0.2))
            .collect();
        let upper: Vec<f64> = cuboid
            .upper()
            .iter()
            .map(|v| v + gen.range(0.0, 0.2))
            .collect();
        let outer_box = Cuboid::new(&space, space.all_domains(), lower, upper).unwrap();
        let outer = Concept::new(
            Core::new(&space, vec![outer_box]).unwrap(),
            inner.mu0(),
            inner.sensitivity(),
            inner.weights().clone(),
        )
        .unwrap();
        assert!(inner.measure().unwrap() <= outer.measure().unwrap());
    }
}

#[test]
fn measure_is_linear_in_mu0() {
    let mut gen = Gen::new(12);
    for _ in 0..100 {
        let space = gen.space(2, 2);
        let cuboids = 1 + gen.below(3);
        let concept = gen.concept(&space, cuboids);
        let unit = concept
            .with_parameters(concept.sensitivity(), concept.weights().clone())
            .unwrap();
        let unit = Concept::new(
            unit.core().clone(),
            1.0,
            unit.sensitivity(),
            unit.weights().clone(),
        )
        .unwrap();
        assert_eq!(
            concept.measure().unwrap(),
            concept.mu0() * unit.measure().unwrap()
        );
    }
}

#[test]
fn crisp_limit_recovers_box_volume() {
    let mut gen = Gen::new(13);
    for _ in 0..50 {
        let space = gen.space(2, 2);
        let n = space.dimension_count();
        let lower: Vec<f64> = (0..n).map(|_| gen.range(0.0, 0.5)).collect();
        let upper: Vec<f64> = lower.iter().map(|l| l + gen.range(0.1, 0.5)).collect();
        let cuboid = Cuboid::new(&space, space.all_domains(), lower, upper).unwrap();
        let w = gen.weights(&space);
        let m = fuzzified_cuboid_measure(&cuboid, 1.0, 1e6, &w, &Limits::default()).unwrap();
        let exact = volume(&cuboid);
        assert!((m - exact).abs() <= 1e-3 * exact, "{m} vs {exact}");
    }
}

#[test]
fn top_alpha_cut_is_the_core() {
    let mut gen = Gen::new(14);
    for _ in 0..50 {
        let space = gen.space(3, 2);
        let concept = gen.concept(&space, 1);
        let v = alpha_cut_volume(
            single(&concept),
            concept.mu0(),
            concept.mu0(),
            concept.sensitivity(),
            concept.weights(),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(v, volume(single(&concept)));
    }
}

#[test]
fn measure_equals_integral_of_alpha_cut_volumes() {
    let mut gen = Gen::new(15);
    for _ in 0..30 {
        let space = gen.space(2, 3);
        let concept = gen.concept(&space, 1);
        let mu0 = concept.mu0();
        // α = μ₀·e^{-t}, dα = -α dt
        let integrand = |t: f64| {
            let alpha = mu0 * (-t).exp();
            alpha * concept_alpha_cut_volume(&concept, alpha, &Limits::default()).unwrap()
        };
        let quadrature = simpson(integrand, 0.0, 80.0, 8000);
        let closed = concept.measure().unwrap();
        assert!(
            (quadrature - closed).abs() <= 1e-6 * closed,
            "{quadrature} vs {closed}"
        );
    }
}

#[test]
fn log_power_integrals() {
    // ∫₀¹ ln(x)ⁿ dx with x = e^{-t}
    let mut factorial = 1.0;
    for n in 0..=6 {
        if n > 0 {
            factorial *= n as f64;
        }
        let value = simpson(|t: f64| (-t).powi(n) * (-t).exp(), 0.0, 80.0, 8000);
        let expected = if n % 2 == 0 { factorial } else { -factorial };
        assert!((value - expected).abs() <= 1e-4, "n = {n}: {value}");
    }
}

#[test]
fn hyperball_volume_matches_hit_rate() {
    let mut gen = Gen::new(16);
    for trial in 0..20 {
        let space = gen.space(1 + trial % 3, 2);
        let w = gen.weights(&space);
        let r = gen.range(0.5, 2.0);
        let centre = Point::new(vec![0.0; space.dimension_count()]);
        let n = space.dimension_count();
        let hi: Vec<f64> = (0..n).map(|i| r / scale(&w, &space, i)).collect();
        let lo: Vec<f64> = hi.iter().map(|v| -v).collect();
        let (est, se) = box_monte_carlo(&mut gen, &lo, &hi, 1_000_000, |x| {
            (combined_distance(&w, &centre, x).unwrap() <= r) as u8 as f64
        });
        let closed = hyperball_volume(r, &w).unwrap();
        assert!(
            (est - closed).abs() <= 3.0 * se + 1e-12 * closed,
            "trial {trial}: {est} ± {se} vs {closed}"
        );
    }
}

#[test]
fn weighted_planar_disc() {
    let space = DomainStructure::from_names([("plane", vec!["x", "y"])]).unwrap();
    let w = WeightSet::new(&space, &[(0, 1.0)], &[(0, 0.25), (1, 0.75)]).unwrap();
    // Ellipse with semi-axes r/√0.25 and r/√0.75.
    let expected = std::f64::consts::PI * 1.5f64.powi(2) / (0.25f64.sqrt() * 0.75f64.sqrt());
    assert!((hyperball_volume(1.5, &w).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn alpha_cut_volume_matches_hit_rate() {
    let mut gen = Gen::new(17);
    for trial in 0..20 {
        let space = gen.space(1 + trial % 2, 2);
        let concept = gen.concept(&space, 1);
        let cuboid = single(&concept);
        let alpha = concept.mu0() * gen.range(0.05, 0.9);
        let radius = concept.alpha_radius(alpha);
        let w = concept.weights();
        let (lo, hi) = padded_box(w, &space, cuboid, radius);
        let (est, se) = box_monte_carlo(&mut gen, &lo, &hi, 1_000_000, |x| {
            (distance_to_cuboid(w, x, cuboid).unwrap() <= radius) as u8 as f64
        });
        let closed = alpha_cut_volume(
            cuboid,
            alpha,
            concept.mu0(),
            concept.sensitivity(),
            w,
            &Limits::default(),
        )
        .unwrap();
        assert!(
            (est - closed).abs() <= 3.0 * se + 1e-12 * closed,
            "trial {trial}: {est} ± {se} vs {closed}"
        );
    }
}

#[test]
fn measure_matches_membership_integral() {
    let mut gen = Gen::new(18);
    for trial in 0..20 {
        let space = gen.space(1 + trial % 2, 2);
        let concept = gen.concept(&space, 1);
        let reach = 25.0 / concept.sensitivity();
        let (lo, hi) = padded_box(concept.weights(), &space, single(&concept), reach);
        let (est, se) = box_monte_carlo(&mut gen, &lo, &hi, 200_000, |x| {
            concept.membership(x).unwrap()
        });
        let closed = concept.measure().unwrap();
        assert!(
            (est - closed).abs() <= 3.0 * se + 1e-9,
            "trial {trial}: {est} ± {se} vs {closed}"
        );
    }
}

#[test]
fn fruit_measures_match_membership_integral() {
    let f = fruit();
    let mut gen = Gen::new(19);
    for concept in [&f.orange, &f.lemon, &f.granny_smith] {
        let reach = 25.0 / concept.sensitivity();
        let (lo, hi) = padded_box(concept.weights(), &f.space, single(concept), reach);
        let (est, se) = box_monte_carlo(&mut gen, &lo, &hi, 400_000, |x| {
            concept.membership(x).unwrap()
        });
        let closed = concept.measure().unwrap();
        assert!((est - closed).abs() <= 3.0 * se, "{est} ± {se} vs {closed}");
    }
}
