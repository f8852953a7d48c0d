//! Relations between concepts.
//!
//! The second concept supplies the context: subsethood and similarity are
//! evaluated with its sensitivity and its weights. Concepts on different
//! domains are compared on the domains they share.

use crate::concept::Concept;
use crate::error::{Error, Result};
use crate::geometry::{
    between_points_over, combined_distance_over, DomainSet, DEFAULT_BETWEENNESS_TOLERANCE,
};
use crate::measure::{concept_measure, Limits};
use crate::oracle::{
    bounding_box_for, integrate_to_precision, membership_unchecked, Executor, IntegrationSpec,
    Method, OracleSettings,
};

/// Parameters of the overlap integral used for non-nested subsethood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationSettings {
    pub oracle: OracleSettings,
    /// Absolute standard error the overlap integral is driven down to.
    pub target_standard_error: f64,
    pub max_samples: usize,
    pub tolerance: f64,
}

impl Default for RelationSettings {
    fn default() -> Self {
        Self {
            oracle: OracleSettings::default(),
            target_standard_error: 1e-4,
            max_samples: 1 << 26,
            tolerance: DEFAULT_BETWEENNESS_TOLERANCE,
        }
    }
}

/// How the numerator `M(S₁ ∩ S₂)` was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OverlapMethod {
    /// `S₁`'s core lies in `S₂`'s and `μ₀⁽¹⁾ ≤ μ₀⁽²⁾`, so the pointwise
    /// minimum is `S₁` itself.
    FirstInSecond,
    /// The reverse nesting; the minimum is `S₂`.
    SecondInFirst,
    /// Monte-Carlo integral of the pointwise minimum.
    Oracle { standard_error: f64, samples: usize },
}

impl OverlapMethod {
    pub fn is_closed_form(&self) -> bool {
        !matches!(self, OverlapMethod::Oracle { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subsethood {
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub method: OverlapMethod,
}

fn shared_domains(a: &Concept, b: &Concept) -> Result<DomainSet> {
    if a.space() != b.space() {
        return Err(Error::StructureMismatch);
    }
    let shared = a.domains().intersection(b.domains());
    if shared.is_empty() {
        return Err(Error::NoCommonDomain);
    }
    Ok(shared)
}

/// Degree to which `s1` is a subset of `s2`, `M(S₁ ∩ S₂) / M(S₁)`.
///
/// Both concepts are projected onto their shared domains and evaluated with
/// `s2`'s sensitivity and (projected) weights; each keeps its own `μ₀`. The
/// intersection is the pointwise minimum of the memberships. When one
/// core's union contains the other's, the minimum is the smaller concept
/// and the numerator has a closed form; otherwise it is integrated
/// numerically to the configured standard error.
pub fn subsethood(
    s1: &Concept,
    s2: &Concept,
    settings: &RelationSettings,
    executor: &dyn Executor,
) -> Result<Subsethood> {
    let shared = shared_domains(s1, s2)?;
    let context = s2.project(&shared)?;
    let first = s1
        .project(&shared)?
        .with_parameters(context.sensitivity(), context.weights().clone())?;
    let limits: &Limits = &settings.oracle.limits;
    let denominator = concept_measure(&first, limits)?;

    let (numerator, method) =
        if context.core().union_contains(first.core()) && first.mu0() <= context.mu0() {
            (denominator, OverlapMethod::FirstInSecond)
        } else if first.core().union_contains(context.core()) && context.mu0() <= first.mu0() {
            (
                concept_measure(&context, limits)?,
                OverlapMethod::SecondInFirst,
            )
        } else {
            let bounds = bounding_box_for(&[&first, &context], settings.oracle.cutoff, limits)?;
            let tail = bounds
                .tail_bounds
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            let spec = IntegrationSpec {
                integrand: |x: &[f64]| {
                    membership_unchecked(&first, x).min(membership_unchecked(&context, x))
                },
                region: bounds.region,
                sample_count: settings.oracle.samples,
                seed: settings.oracle.seed,
                method: Method::MonteCarlo,
                truncated_mass_bound: tail,
            };
            let estimate = integrate_to_precision(
                &spec,
                settings.target_standard_error,
                settings.max_samples,
                executor,
            )?;
            (
                estimate.value,
                OverlapMethod::Oracle {
                    standard_error: estimate.standard_error,
                    samples: estimate.samples,
                },
            )
        };
    Ok(Subsethood {
        value: numerator / denominator,
        numerator,
        denominator,
        method,
    })
}

/// Degree to which membership in `s1` implies membership in `s2`; the same
/// quantity as [`subsethood`].
pub fn implication(
    s1: &Concept,
    s2: &Concept,
    settings: &RelationSettings,
    executor: &dyn Executor,
) -> Result<Subsethood> {
    subsethood(s1, s2, settings, executor)
}

/// `exp(−c⁽²⁾ · d(mid₁, mid₂))` between the central-region midpoints on the
/// shared domains.
///
/// The distance uses `s2`'s weights for the shared domains as they are,
/// without rescaling the domain weights to the smaller domain count.
pub fn concept_similarity(s1: &Concept, s2: &Concept) -> Result<f64> {
    let shared = shared_domains(s1, s2)?;
    let a = s1.central_midpoint(&shared)?;
    let b = s2.central_midpoint(&shared)?;
    let d = combined_distance_over(s2.weights(), &shared, &a, &b)?;
    Ok(libm::exp(-s2.sensitivity() * d))
}

/// Whether `s2`'s central-region midpoint lies between those of `s1` and
/// `s3`, on the domains all three share.
pub fn concept_between(s1: &Concept, s2: &Concept, s3: &Concept, tolerance: f64) -> Result<bool> {
    let shared = shared_domains(s1, s2)?.intersection(s3.domains());
    if s3.space() != s1.space() {
        return Err(Error::StructureMismatch);
    }
    if shared.is_empty() {
        return Err(Error::NoCommonDomain);
    }
    let space = s1.space();
    between_points_over(
        space,
        &shared,
        &s1.central_midpoint(&shared)?,
        &s2.central_midpoint(&shared)?,
        &s3.central_midpoint(&shared)?,
        tolerance,
    )
}
