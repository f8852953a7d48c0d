mod common;

use std::ops::Range;

use common::{fruit, Gen};
use conceptspace_core::oracle::{
    bounding_box_for, discrepancy_report, integrate, integrate_to_precision, integrate_with,
    membership_integral, IntegrationSpec, Method, Moments, OracleSettings, Regime, Serial,
};
use conceptspace_core::{Concept, Core, Limits, Point};

/// Runs chunks back to front, to show the result does not depend on the
/// order in which chunks complete.
struct Reversed;

impl conceptspace_core::oracle::Executor for Reversed {
    fn map_chunks(
        &self,
        range: Range<usize>,
        job: &(dyn Fn(usize) -> Moments + Sync),
    ) -> Vec<Moments> {
        let mut out: Vec<(usize, Moments)> = range.rev().map(|k| (k, job(k))).collect();
        out.sort_by_key(|(k, _)| *k);
        out.into_iter().map(|(_, m)| m).collect()
    }
}

fn mu(concept: &Concept, x: &[f64]) -> f64 {
    concept.membership(&Point::new(x.to_vec())).unwrap()
}

fn settings(samples: usize, seed: u64) -> OracleSettings {
    OracleSettings {
        samples,
        seed,
        ..OracleSettings::default()
    }
}

#[test]
fn estimates_are_deterministic() {
    let f = fruit();
    let a = membership_integral(&f.apple, &settings(100_000, 7), &Serial).unwrap();
    let b = membership_integral(&f.apple, &settings(100_000, 7), &Serial).unwrap();
    let c = membership_integral(&f.apple, &settings(100_000, 7), &Reversed).unwrap();
    let d = membership_integral(&f.apple, &settings(100_000, 8), &Serial).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.value.to_bits(), c.value.to_bits());
    assert_eq!(a.standard_error.to_bits(), c.standard_error.to_bits());
    assert_ne!(a.value, d.value);
    assert_eq!(a.samples, 100_000);
}

#[test]
fn standard_error_scales_with_root_of_samples() {
    let f = fruit();
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let small = membership_integral(&f.orange, &settings(65_536, seed), &Serial).unwrap();
        let large = membership_integral(&f.orange, &settings(131_072, seed), &Serial).unwrap();
        ratios.push(large.standard_error / small.standard_error);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let expected = std::f64::consts::FRAC_1_SQRT_2;
    assert!((mean - expected).abs() <= 0.2 * expected, "{ratios:?}");
}

#[test]
fn truncation_bound_covers_the_missing_mass() {
    let mut gen = Gen::new(21);
    for _ in 0..10 {
        let domains = 1 + gen.below(2);
        let space = gen.space(domains, 2);
        let concept = gen.concept(&space, 1);
        for cutoff in [1e-2, 1e-3, 1e-6] {
            let bounds = bounding_box_for(&[&concept], cutoff, &Limits::default()).unwrap();
            let spec = IntegrationSpec {
                integrand: |x: &[f64]| mu(&concept, x),
                region: bounds.region.clone(),
                sample_count: 200_000,
                seed: 3,
                method: Method::MonteCarlo,
                truncated_mass_bound: bounds.tail_bounds[0],
            };
            let inside = integrate(&spec).unwrap();
            let missing = concept.measure().unwrap() - inside.value;
            assert!(missing <= bounds.tail_bounds[0] + 3.0 * inside.standard_error);

            // Every sampled point outside the region is below the cutoff.
            let region = &bounds.region;
            for _ in 0..2000 {
                let mut x = vec![0.0; space.dimension_count()];
                for (k, &i) in region.dimensions.iter().enumerate() {
                    let (lo, hi) = (region.lower[k], region.upper[k]);
                    let span = hi - lo;
                    x[i] = gen.range(lo - span, hi + span);
                }
                let outside = region
                    .dimensions
                    .iter()
                    .enumerate()
                    .any(|(k, &i)| x[i] < region.lower[k] || x[i] > region.upper[k]);
                if outside {
                    assert!(mu(&concept, &x) < cutoff * (1.0 + 1e-12));
                }
            }
        }
    }
}

#[test]
fn nested_minimum_matches_closed_form() {
    let f = fruit();
    let gs = f
        .granny_smith
        .with_parameters(f.apple.sensitivity(), f.apple.weights().clone())
        .unwrap();
    let bounds = bounding_box_for(&[&gs, &f.apple], 1e-6, &Limits::default()).unwrap();
    let spec = IntegrationSpec {
        integrand: |x: &[f64]| mu(&gs, x).min(mu(&f.apple, x)),
        region: bounds.region,
        sample_count: 1_000_000,
        seed: 5,
        method: Method::MonteCarlo,
        truncated_mass_bound: bounds.tail_bounds[0],
    };
    let estimate = integrate(&spec).unwrap();
    let closed = gs.measure().unwrap();
    assert!(
        (estimate.value - closed).abs()
            <= 3.0 * estimate.standard_error + estimate.truncated_mass_bound,
        "{} ± {} vs {closed}",
        estimate.value,
        estimate.standard_error
    );
}

#[test]
fn precision_driver_reaches_its_target() {
    let f = fruit();
    let bounds = bounding_box_for(&[&f.orange], 1e-6, &Limits::default()).unwrap();
    let spec = IntegrationSpec {
        integrand: |x: &[f64]| mu(&f.orange, x),
        region: bounds.region,
        sample_count: 16_384,
        seed: 9,
        method: Method::MonteCarlo,
        truncated_mass_bound: bounds.tail_bounds[0],
    };
    let estimate = integrate_to_precision(&spec, 1e-4, 1 << 24, &Serial).unwrap();
    assert!(estimate.standard_error <= 1e-4);
    assert!(estimate.samples > 16_384);
    assert!((estimate.value - f.orange.measure().unwrap()).abs() <= 3.0 * estimate.standard_error);
    assert!(integrate_to_precision(&spec, 1e-9, 1 << 16, &Serial).is_err());
}

#[test]
fn tensor_grid_converges_on_orange() {
    let f = fruit();
    let bounds = bounding_box_for(&[&f.orange], 1e-3, &Limits::default()).unwrap();
    let spec = IntegrationSpec {
        integrand: |x: &[f64]| mu(&f.orange, x),
        region: bounds.region,
        sample_count: 200 * 200 * 200,
        seed: 0,
        method: Method::TensorGrid,
        truncated_mass_bound: bounds.tail_bounds[0],
    };
    let estimate = integrate_with(&spec, &Serial).unwrap();
    let closed = f.orange.measure().unwrap();
    assert!(estimate.value <= closed * (1.0 + 1e-3));
    assert!(estimate.value >= (closed - estimate.truncated_mass_bound) * (1.0 - 1e-3));
}

#[test]
fn discrepancy_regimes() {
    let f = fruit();
    let s = OracleSettings::default();

    let orange = discrepancy_report(&f.orange, &s, &Serial).unwrap();
    assert_eq!(orange.regime, Regime::Exact);
    assert!(orange.sigma_distance() <= 3.0);

    let apple = discrepancy_report(&f.apple, &settings(4_000_000, s.seed), &Serial).unwrap();
    assert_eq!(apple.regime, Regime::Diagnostic);
    assert!((apple.closed_form - 0.104_833_333_333_333).abs() < 1e-12);
    // Overlapping fuzzified cuboids are counted more than once by the closed form.
    assert!(apple.absolute_gap() < 0.0);
    assert!(apple.sigma_distance() > 5.0);

    let cuboid = f.lemon.core().cuboids()[0].clone();
    let doubled = Concept::new(
        Core::new(&f.space, vec![cuboid.clone(), cuboid]).unwrap(),
        f.lemon.mu0(),
        f.lemon.sensitivity(),
        f.lemon.weights().clone(),
    )
    .unwrap();
    let report = discrepancy_report(&doubled, &s, &Serial).unwrap();
    assert_eq!(report.regime, Regime::Exact);
    assert!((report.closed_form - f.lemon.measure().unwrap()).abs() < 1e-15);
    assert!(report.sigma_distance() <= 3.0);
}
