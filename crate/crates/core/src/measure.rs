//! Closed-form concept size.
//!
//! The α-cut of a fuzzified cuboid `C̃` is the ε-neighbourhood of `C` with
//! `ε = −ln(α/μ₀)/c`. Its volume splits by the set of dimensions on which a
//! point lies outside `C`: each such part is a lower-dimensional
//! combined-metric hyperball extruded along the remaining edges of `C`.
//! Integrating over α turns every `ε^i / i!` into `1/c^i`, which gives the
//! measure `M(C̃)` as a finite sum over dimension subsets. Concepts with
//! several cuboids are combined by inclusion-exclusion over the crisp
//! intersections of their cuboids.

use alloc::format;
use alloc::vec::Vec;

use crate::concept::{Concept, Cuboid};
use crate::error::{Error, LimitKind, Result};
use crate::geometry::WeightSet;
use crate::numeric::{domain_ball_factor, factorial, CompensatedSum};

/// Caps on the size of the subset enumerations. Both sums are exponential,
/// `2^n` over dimensions and `2^m` over cuboids; values above
/// [`Limits::HARD_CAP`] are clamped to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_dimensions: usize,
    pub max_cuboids: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_dimensions: 12,
            max_cuboids: 10,
        }
    }
}

impl Limits {
    pub const HARD_CAP: usize = 30;

    fn check_dimensions(&self, n: usize) -> Result<()> {
        let limit = self.max_dimensions.min(Self::HARD_CAP);
        if n > limit {
            return Err(Error::LimitExceeded {
                kind: LimitKind::Dimensions,
                value: n,
                limit,
            });
        }
        Ok(())
    }

    fn check_cuboids(&self, m: usize) -> Result<()> {
        let limit = self.max_cuboids.min(Self::HARD_CAP);
        if m > limit {
            return Err(Error::LimitExceeded {
                kind: LimitKind::Cuboids,
                value: m,
                limit,
            });
        }
        Ok(())
    }
}

/// The dimensions a measure runs over, with their domain grouping and
/// stretch factors `w_δ(d)·√w_d`.
struct Scope {
    /// Position of each active dimension's domain among the active domains.
    group: Vec<usize>,
    scale: Vec<f64>,
    /// Coordinate index of each active dimension.
    index: Vec<usize>,
    group_count: usize,
}

impl Scope {
    fn new(weights: &WeightSet, limits: &Limits) -> Result<Self> {
        let space = weights.space();
        let mut scope = Scope {
            group: Vec::new(),
            scale: Vec::new(),
            index: Vec::new(),
            group_count: weights.domains().len(),
        };
        for (g, d) in weights.domains().iter().enumerate() {
            for i in space.dimensions_of(d) {
                scope.group.push(g);
                scope.scale.push(weights.scale(i));
                scope.index.push(i);
            }
        }
        limits.check_dimensions(scope.len())?;
        Ok(scope)
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    /// `Π_δ |δ ∩ mask|! · π^{k/2} / Γ(k/2 + 1)` over the domains hit by `mask`,
    /// together with `Π_{d ∈ mask} w_δ(d)√w_d`.
    fn ball_factors(&self, mask: u32) -> (f64, f64) {
        let mut counts = [0u32; Limits::HARD_CAP];
        let mut stretch = 1.0;
        for j in 0..self.len() {
            if mask & (1 << j) != 0 {
                counts[self.group[j]] += 1;
                stretch *= self.scale[j];
            }
        }
        let shape = counts[..self.group_count]
            .iter()
            .map(|&k| domain_ball_factor(k))
            .product();
        (shape, stretch)
    }

    /// Bounded edge lengths `b_d` of a cuboid over this scope.
    fn widths(&self, cuboid: &Cuboid, weights: &WeightSet) -> Result<Vec<f64>> {
        self.index
            .iter()
            .map(|&i| {
                let b = cuboid.width(i);
                if b.is_finite() {
                    Ok(b)
                } else {
                    Err(Error::UnboundedCuboid {
                        dimension: weights.space().dimension_name(i).into(),
                    })
                }
            })
            .collect()
    }
}

/// Volume of the combined-metric ball of radius `r` over the domains the
/// weight set covers:
///
/// `V = r^n / (n! · Π_d w_δ(d)·√w_d) · Π_δ |δ|! · π^{|δ|/2} / Γ(|δ|/2 + 1)`.
///
/// The stretch product runs over dimensions, so a domain weight enters once
/// per dimension of its domain (the Jacobian of `u_d ↦ w_δ √w_d · u_d`).
pub fn hyperball_volume(r: f64, weights: &WeightSet) -> Result<f64> {
    hyperball_volume_with_limits(r, weights, &Limits::default())
}

pub fn hyperball_volume_with_limits(r: f64, weights: &WeightSet, limits: &Limits) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be non-negative, got {r}"
        )));
    }
    let scope = Scope::new(weights, limits)?;
    let n = scope.len() as u32;
    let (shape, stretch) = scope.ball_factors(full_mask(scope.len()));
    Ok(libm::pow(r, n as f64) / factorial(n) * shape / stretch)
}

fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

fn check_parameters(mu0: f64, c: f64) -> Result<()> {
    if !(mu0 > 0.0 && mu0 <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "maximal membership must lie in (0, 1], got {mu0}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sensitivity must be positive and finite, got {c}"
        )));
    }
    Ok(())
}

/// Volume of the α-cut of a fuzzified cuboid, `α ∈ (0, μ₀]`.
pub fn alpha_cut_volume(
    cuboid: &Cuboid,
    alpha: f64,
    mu0: f64,
    c: f64,
    weights: &WeightSet,
    limits: &Limits,
) -> Result<f64> {
    check_parameters(mu0, c)?;
    if !(alpha > 0.0 && alpha <= mu0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, {mu0}], got {alpha}"
        )));
    }
    let scope = Scope::new(weights, limits)?;
    let widths = scope.widths(cuboid, weights)?;
    let radius = -libm::log(alpha / mu0) / c;
    let mut sum = CompensatedSum::new();
    for mask in 0..=full_mask(scope.len()) {
        let i = mask.count_ones();
        if i > 0 && radius == 0.0 {
            continue;
        }
        let extrusion: f64 = (0..scope.len())
            .filter(|j| mask & (1 << j) == 0)
            .map(|j| widths[j])
            .product();
        let (shape, stretch) = scope.ball_factors(mask);
        let ball = libm::pow(radius, i as f64) / factorial(i) * shape / stretch;
        sum.add(extrusion * ball);
    }
    Ok(sum.value())
}

/// The sum `Σ_{mask} Π_{d∉mask} a_d · Π_δ ball(|δ ∩ mask|)` with
/// `a_d = w_δ(d)·√w_d·b_d·c`, grouped by `|mask|`.
fn scaled_terms(scope: &Scope, widths: &[f64], c: f64) -> Vec<f64> {
    let n = scope.len();
    let mut by_size = alloc::vec![0.0; n + 1];
    for mask in 0..=full_mask(n) {
        let mut term = 1.0;
        for (j, (scale, width)) in scope.scale.iter().zip(widths).enumerate() {
            if mask & (1 << j) == 0 {
                term *= scale * width * c;
            }
        }
        term *= scope.ball_factors(mask).0;
        by_size[mask.count_ones() as usize] += term;
    }
    by_size
}

fn normalizer(scope: &Scope, c: f64) -> f64 {
    libm::pow(c, scope.len() as f64) * scope.scale.iter().product::<f64>()
}

/// Measure (membership integral) of a single fuzzified cuboid:
///
/// `M(C̃) = μ₀ / (cⁿ · Π_d w_δ(d)√w_d) · Σ_{mask} Π_{d∉mask} a_d · Π_δ ball(|δ ∩ mask|)`.
pub fn fuzzified_cuboid_measure(
    cuboid: &Cuboid,
    mu0: f64,
    c: f64,
    weights: &WeightSet,
    limits: &Limits,
) -> Result<f64> {
    check_parameters(mu0, c)?;
    let scope = Scope::new(weights, limits)?;
    let widths = scope.widths(cuboid, weights)?;
    let total: CompensatedSum = scaled_terms(&scope, &widths, c).into_iter().collect();
    Ok(mu0 * (total.value() / normalizer(&scope, c)))
}

/// Mass `∫ μ · [μ < t] dx` of a fuzzified cuboid below the level `t`,
/// i.e. everything outside its `t`-cut.
///
/// With `L = −ln(t/μ₀)` and `∫_0^s (−ln u)^i du = i!·s·Σ_{k≤i} L^k/k!`,
/// the mass is `t · Σ_{mask} term(mask)/(cⁿΠ) · Σ_{k<|mask|} L^k/k!`.
/// For `t ≥ μ₀` the whole measure is returned.
pub fn fuzzified_cuboid_tail_mass(
    cuboid: &Cuboid,
    threshold: f64,
    mu0: f64,
    c: f64,
    weights: &WeightSet,
    limits: &Limits,
) -> Result<f64> {
    check_parameters(mu0, c)?;
    if threshold >= mu0 {
        return fuzzified_cuboid_measure(cuboid, mu0, c, weights, limits);
    }
    if !(threshold > 0.0) {
        return Ok(0.0);
    }
    let scope = Scope::new(weights, limits)?;
    let widths = scope.widths(cuboid, weights)?;
    let by_size = scaled_terms(&scope, &widths, c);
    let log_ratio = -libm::log(threshold / mu0);
    let mut total = CompensatedSum::new();
    let mut partial = 0.0;
    let mut power = 1.0;
    for (i, term) in by_size.iter().enumerate() {
        // partial = Σ_{k<i} L^k / k!
        total.add(term * partial);
        partial += power / factorial(i as u32);
        power *= log_ratio;
    }
    Ok(threshold * total.value() / normalizer(&scope, c))
}

/// Runs `f` over every non-empty subset of cuboids in canonical (bitmask)
/// order on their crisp intersection, and sums with alternating signs.
fn inclusion_exclusion<F>(cuboids: &[Cuboid], limits: &Limits, mut f: F) -> Result<f64>
where
    F: FnMut(&Cuboid) -> Result<f64>,
{
    limits.check_cuboids(cuboids.len())?;
    if cuboids.len() == 1 {
        return f(&cuboids[0]);
    }
    let mut sum = CompensatedSum::new();
    for subset in 1u32..(1 << cuboids.len()) {
        let mut members = (0..cuboids.len()).filter(|i| subset & (1 << i) != 0);
        let first = members.next().expect("non-empty subset");
        let mut meet = cuboids[first].clone();
        for i in members {
            meet = meet
                .intersect(&cuboids[i])
                .expect("cuboids of a core share the central region");
        }
        let value = f(&meet)?;
        if subset.count_ones() % 2 == 1 {
            sum.add(value);
        } else {
            sum.add(-value);
        }
    }
    Ok(sum.value())
}

/// Measure of a concept under its own parameters.
pub fn concept_measure(concept: &Concept, limits: &Limits) -> Result<f64> {
    concept_measure_with_params(concept, concept.sensitivity(), concept.weights(), limits)
}

/// Measure of a concept with its sensitivity and weights replaced; the
/// core and `μ₀` are kept.
pub fn concept_measure_with_params(
    concept: &Concept,
    c: f64,
    weights: &WeightSet,
    limits: &Limits,
) -> Result<f64> {
    if weights.space() != concept.space() {
        return Err(Error::StructureMismatch);
    }
    if weights.domains() != concept.domains() {
        return Err(Error::InvalidArgument(
            "override weights must cover exactly the concept's domains".into(),
        ));
    }
    // μ₀ factors out of every term, so it is applied once at the end.
    let unit = inclusion_exclusion(concept.core().cuboids(), limits, |cuboid| {
        fuzzified_cuboid_measure(cuboid, 1.0, c, weights, limits)
    })?;
    Ok(concept.mu0() * unit)
}

/// Volume of a concept's α-cut, by the same inclusion-exclusion over the
/// crisp cuboid intersections that the measure uses.
pub fn concept_alpha_cut_volume(concept: &Concept, alpha: f64, limits: &Limits) -> Result<f64> {
    let (mu0, c, w) = (concept.mu0(), concept.sensitivity(), concept.weights());
    inclusion_exclusion(concept.core().cuboids(), limits, |cuboid| {
        alpha_cut_volume(cuboid, alpha, mu0, c, w, limits)
    })
}

impl Concept {
    /// [`concept_measure`] with default limits.
    pub fn measure(&self) -> Result<f64> {
        concept_measure(self, &Limits::default())
    }
}
