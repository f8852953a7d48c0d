//! Numerical integration of membership functions.
//!
//! This is the independent check on the closed-form measure, and the
//! evaluator for overlap integrals that have no closed form. Integrands are
//! sampled uniformly over a finite box large enough that everything left
//! outside has membership below a cutoff.
//!
//! Sampling is split into fixed-size chunks. Chunk `k` draws from a ChaCha8
//! stream seeded with the user seed and stream id `k`, and chunk statistics
//! are merged by a fixed pairwise tree. A parallel [`Executor`] therefore
//! produces bit-identical estimates to the serial one.

use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::concept::Concept;
use crate::error::{Error, LimitKind, Result};
use crate::measure::{concept_measure, fuzzified_cuboid_tail_mass, Limits};

/// Samples per chunk.
pub const CHUNK_SIZE: usize = 16_384;
pub const MIN_MONTE_CARLO_SAMPLES: usize = 10_000;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_CUTOFF: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// A finite axis-parallel integration region over a subset of dimensions.
/// Points handed to integrands are full-length; coordinates outside
/// `dimensions` are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub dimension_count: usize,
    pub dimensions: Vec<usize>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Region {
    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    fn validate(&self) -> Result<()> {
        if self.dimensions.len() != self.lower.len() || self.lower.len() != self.upper.len() {
            return Err(Error::InvalidArgument(
                "region bounds do not match its dimensions".into(),
            ));
        }
        if self.dimensions.iter().any(|&d| d >= self.dimension_count) {
            return Err(Error::InvalidArgument(
                "region dimension out of range".into(),
            ));
        }
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidArgument(
                    "integration region must be finite".into(),
                ));
            }
        }
        if self.dimensions.is_empty() || !(self.volume() > 0.0) {
            return Err(Error::DegenerateDomain);
        }
        Ok(())
    }
}

/// An integration region for a group of concepts, plus for each concept an
/// upper bound on its membership mass outside the region.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub region: Region,
    pub tail_bounds: Vec<f64>,
}

/// Covers the cores of `concepts`, expanded per dimension by
/// `ε / (w_δ(d)·√w_d)` with `ε = −ln(cutoff/μ₀)/c` under each concept's own
/// parameters. Every point left outside has membership below `cutoff` in
/// every concept. All concepts must be defined on the same domains.
pub fn bounding_box_for(
    concepts: &[&Concept],
    cutoff: f64,
    limits: &Limits,
) -> Result<BoundingBox> {
    let first = concepts
        .first()
        .ok_or_else(|| Error::InvalidArgument("no concepts to bound".into()))?;
    if !(cutoff > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    let space = first.space();
    for c in concepts {
        if c.space() != space {
            return Err(Error::StructureMismatch);
        }
        if c.domains() != first.domains() {
            return Err(Error::InvalidArgument(
                "concepts in one integration region must share their domains".into(),
            ));
        }
    }
    let dimensions = space.dimensions_in(first.domains());
    let mut lower = alloc::vec![f64::INFINITY; dimensions.len()];
    let mut upper = alloc::vec![f64::NEG_INFINITY; dimensions.len()];
    let mut tail_bounds = Vec::with_capacity(concepts.len());
    for concept in concepts {
        let radius = if cutoff >= concept.mu0() {
            0.0
        } else {
            concept.alpha_radius(cutoff)
        };
        let w = concept.weights();
        for cuboid in concept.core().cuboids() {
            for (k, &i) in dimensions.iter().enumerate() {
                let (lo, hi) = (cuboid.lower()[i], cuboid.upper()[i]);
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::UnboundedCuboid {
                        dimension: space.dimension_name(i).into(),
                    });
                }
                let reach = radius / w.scale(i);
                lower[k] = lower[k].min(lo - reach);
                upper[k] = upper[k].max(hi + reach);
            }
        }
        tail_bounds.push(if cutoff >= concept.mu0() {
            concept_measure(concept, limits)?
        } else {
            let mut total = 0.0;
            for cuboid in concept.core().cuboids() {
                total += fuzzified_cuboid_tail_mass(
                    cuboid,
                    cutoff,
                    concept.mu0(),
                    concept.sensitivity(),
                    w,
                    limits,
                )?;
            }
            total
        });
    }
    Ok(BoundingBox {
        region: Region {
            dimension_count: space.dimension_count(),
            dimensions,
            lower,
            upper,
        },
        tail_bounds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MonteCarlo,
    /// Midpoint rule on a regular grid with `⌊samples^{1/k}⌋` points per axis.
    TensorGrid,
}

#[derive(Debug, Clone)]
pub struct IntegrationSpec<F> {
    pub integrand: F,
    pub region: Region,
    pub sample_count: usize,
    pub seed: u64,
    pub method: Method,
    /// Upper bound on the integrand's mass outside `region`, passed through
    /// to the estimate.
    pub truncated_mass_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Zero for the tensor grid.
    pub standard_error: f64,
    pub truncated_mass_bound: f64,
    pub samples: usize,
}

/// Count, mean and centred sum of squares of a batch of samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise merge.
    pub fn merge(&self, other: &Moments) -> Moments {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        Moments {
            count,
            mean: self.mean + delta * nb / count as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / count as f64,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Merges chunk moments by a balanced binary tree in index order, so the
/// result depends only on the chunk list.
pub fn reduce(chunks: &[Moments]) -> Moments {
    match chunks.len() {
        0 => Moments::default(),
        1 => chunks[0],
        n => {
            let (a, b) = chunks.split_at(n / 2);
            reduce(a).merge(&reduce(b))
        }
    }
}

/// Runs chunk jobs. Implementations may run them in any order or in
/// parallel but must return results indexed by chunk.
pub trait Executor {
    fn map_chunks(
        &self,
        range: core::ops::Range<usize>,
        job: &(dyn Fn(usize) -> Moments + Sync),
    ) -> Vec<Moments>;
}

/// Runs every chunk on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map_chunks(
        &self,
        range: core::ops::Range<usize>,
        job: &(dyn Fn(usize) -> Moments + Sync),
    ) -> Vec<Moments> {
        range.map(job).collect()
    }
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Moments of the integrand over Monte-Carlo chunk `chunk` of a run with
/// `total` samples.
pub fn monte_carlo_chunk<F>(
    integrand: &F,
    region: &Region,
    seed: u64,
    total: usize,
    chunk: usize,
) -> Moments
where
    F: Fn(&[f64]) -> f64,
{
    let start = chunk * CHUNK_SIZE;
    let len = CHUNK_SIZE.min(total.saturating_sub(start));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut point = alloc::vec![f64::NAN; region.dimension_count];
    let mut moments = Moments::default();
    for _ in 0..len {
        for (k, &i) in region.dimensions.iter().enumerate() {
            let u = uniform01(&mut rng);
            point[i] = region.lower[k] + (region.upper[k] - region.lower[k]) * u;
        }
        moments.push(integrand(&point));
    }
    moments
}

pub fn chunk_count(samples: usize) -> usize {
    samples.div_ceil(CHUNK_SIZE)
}

/// Serial integration.
pub fn integrate<F>(spec: &IntegrationSpec<F>) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    integrate_with(spec, &Serial)
}

pub fn integrate_with<F>(
    spec: &IntegrationSpec<F>,
    executor: &dyn Executor,
) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.region.validate()?;
    if !(spec.truncated_mass_bound >= 0.0) {
        return Err(Error::InvalidArgument(
            "truncated mass bound must be non-negative".into(),
        ));
    }
    match spec.method {
        Method::MonteCarlo => {
            if spec.sample_count < MIN_MONTE_CARLO_SAMPLES {
                return Err(Error::InvalidArgument(format!(
                    "Monte-Carlo integration needs at least {MIN_MONTE_CARLO_SAMPLES} samples, got {}",
                    spec.sample_count
                )));
            }
            let chunks = monte_carlo_moments(spec, executor, 0..chunk_count(spec.sample_count));
            Ok(estimate_from(&reduce(&chunks), spec))
        }
        Method::TensorGrid => tensor_grid(spec),
    }
}

fn monte_carlo_moments<F>(
    spec: &IntegrationSpec<F>,
    executor: &dyn Executor,
    range: core::ops::Range<usize>,
) -> Vec<Moments>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let job = |k: usize| {
        monte_carlo_chunk(
            &spec.integrand,
            &spec.region,
            spec.seed,
            spec.sample_count,
            k,
        )
    };
    executor.map_chunks(range, &job)
}

fn estimate_from<F>(moments: &Moments, spec: &IntegrationSpec<F>) -> IntegralEstimate {
    let volume = spec.region.volume();
    IntegralEstimate {
        value: volume * moments.mean,
        standard_error: volume * libm::sqrt(moments.variance() / moments.count as f64),
        truncated_mass_bound: spec.truncated_mass_bound,
        samples: moments.count as usize,
    }
}

/// Monte-Carlo integration that keeps doubling the sample count, reusing the
/// chunks already drawn, until the standard error is at most
/// `target_standard_error` or `max_samples` is reached.
///
/// Chunk `k` is independent of the total, apart from the final partial
/// chunk, so counts are rounded up to whole chunks.
pub fn integrate_to_precision<F>(
    spec: &IntegrationSpec<F>,
    target_standard_error: f64,
    max_samples: usize,
    executor: &dyn Executor,
) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.region.validate()?;
    if spec.method != Method::MonteCarlo {
        return integrate_with(spec, executor);
    }
    let mut chunks = chunk_count(spec.sample_count.max(MIN_MONTE_CARLO_SAMPLES));
    let max_chunks = chunk_count(max_samples).max(chunks);
    let mut moments = {
        let full = IntegrationSpec {
            sample_count: chunks * CHUNK_SIZE,
            ..spec_view(spec)
        };
        monte_carlo_moments(&full, executor, 0..chunks)
    };
    loop {
        let full = IntegrationSpec {
            sample_count: chunks * CHUNK_SIZE,
            ..spec_view(spec)
        };
        let estimate = estimate_from(&reduce(&moments), &full);
        if estimate.standard_error <= target_standard_error {
            return Ok(estimate);
        }
        if chunks >= max_chunks {
            return Err(Error::LimitExceeded {
                kind: LimitKind::Samples,
                value: chunks * CHUNK_SIZE,
                limit: max_samples,
            });
        }
        let next = (chunks * 2).min(max_chunks);
        let grown = IntegrationSpec {
            sample_count: next * CHUNK_SIZE,
            ..spec_view(spec)
        };
        moments.extend(monte_carlo_moments(&grown, executor, chunks..next));
        chunks = next;
    }
}

fn spec_view<F>(spec: &IntegrationSpec<F>) -> IntegrationSpec<&F> {
    IntegrationSpec {
        integrand: &spec.integrand,
        region: spec.region.clone(),
        sample_count: spec.sample_count,
        seed: spec.seed,
        method: spec.method,
        truncated_mass_bound: spec.truncated_mass_bound,
    }
}

fn tensor_grid<F>(spec: &IntegrationSpec<F>) -> Result<IntegralEstimate>
where
    F: Fn(&[f64]) -> f64,
{
    let region = &spec.region;
    let k = region.dimensions.len();
    let mut per_axis = libm::floor(libm::pow(spec.sample_count as f64, 1.0 / k as f64)) as usize;
    // Guard against pow rounding just below an exact integer root.
    while (per_axis + 1)
        .checked_pow(k as u32)
        .is_some_and(|t| t <= spec.sample_count)
    {
        per_axis += 1;
    }
    let per_axis = per_axis.max(1);
    let total = per_axis.pow(k as u32);
    let mut point = alloc::vec![f64::NAN; region.dimension_count];
    let mut index = alloc::vec![0usize; k];
    let mut sum = crate::numeric::CompensatedSum::new();
    for _ in 0..total {
        for (a, &i) in region.dimensions.iter().enumerate() {
            let step = (region.upper[a] - region.lower[a]) / per_axis as f64;
            point[i] = region.lower[a] + (index[a] as f64 + 0.5) * step;
        }
        sum.add((spec.integrand)(&point));
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < per_axis {
                break;
            }
            *slot = 0;
        }
    }
    Ok(IntegralEstimate {
        value: region.volume() * sum.value() / total as f64,
        standard_error: 0.0,
        truncated_mass_bound: spec.truncated_mass_bound,
        samples: total,
    })
}

/// Sampling parameters shared by the concept-level oracle entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub samples: usize,
    pub seed: u64,
    pub cutoff: f64,
    pub limits: Limits,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            cutoff: DEFAULT_CUTOFF,
            limits: Limits::default(),
        }
    }
}

/// Monte-Carlo estimate of `∫ μ(x) dx` for one concept over its domains.
pub fn membership_integral(
    concept: &Concept,
    settings: &OracleSettings,
    executor: &dyn Executor,
) -> Result<IntegralEstimate> {
    let bounds = bounding_box_for(&[concept], settings.cutoff, &settings.limits)?;
    let spec = IntegrationSpec {
        integrand: |x: &[f64]| membership_unchecked(concept, x),
        region: bounds.region,
        sample_count: settings.samples,
        seed: settings.seed,
        method: Method::MonteCarlo,
        truncated_mass_bound: bounds.tail_bounds[0],
    };
    integrate_with(&spec, executor)
}

/// Membership of a sampled point. Sample points are finite on every
/// dimension of the concept, which is all the distance needs.
pub(crate) fn membership_unchecked(concept: &Concept, x: &[f64]) -> f64 {
    let space = concept.space();
    let w = concept.weights();
    let mut best = f64::INFINITY;
    for cuboid in concept.core().cuboids() {
        let mut total = 0.0;
        for d in concept.domains().iter() {
            let mut inner = 0.0;
            for i in space.dimensions_of(d) {
                let v = x[i];
                let (lo, hi) = (cuboid.lower()[i], cuboid.upper()[i]);
                let gap = if v < lo {
                    lo - v
                } else if v > hi {
                    v - hi
                } else {
                    0.0
                };
                inner += w.dimension_weight(i).unwrap_or(0.0) * gap * gap;
            }
            total += w.domain_weight(d).unwrap_or(0.0) * libm::sqrt(inner);
        }
        best = best.min(total);
    }
    concept.mu0() * libm::exp(-concept.sensitivity() * best)
}

/// How closely the closed form is expected to match the membership integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// One distinct cuboid: the closed form is the exact integral.
    Exact,
    /// Several cuboids: inclusion-exclusion over fuzzified crisp
    /// intersections need not equal the integral of the max membership.
    Diagnostic,
}

/// Closed form versus oracle for one concept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyReport {
    pub closed_form: f64,
    pub estimate: IntegralEstimate,
    pub regime: Regime,
}

impl DiscrepancyReport {
    pub fn absolute_gap(&self) -> f64 {
        self.estimate.value - self.closed_form
    }

    pub fn relative_gap(&self) -> f64 {
        self.absolute_gap() / self.closed_form
    }

    /// Gap in units of the oracle's standard error.
    pub fn sigma_distance(&self) -> f64 {
        libm::fabs(self.absolute_gap()) / self.estimate.standard_error
    }
}

pub fn discrepancy_report(
    concept: &Concept,
    settings: &OracleSettings,
    executor: &dyn Executor,
) -> Result<DiscrepancyReport> {
    let closed_form = concept_measure(concept, &settings.limits)?;
    let estimate = membership_integral(concept, settings, executor)?;
    let cuboids = concept.core().cuboids();
    let distinct = cuboids
        .iter()
        .enumerate()
        .filter(|(i, c)| !cuboids[..*i].contains(c))
        .count();
    Ok(DiscrepancyReport {
        closed_form,
        estimate,
        regime: if distinct == 1 {
            Regime::Exact
        } else {
            Regime::Diagnostic
        },
    })
}
