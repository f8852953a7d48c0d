//! Cuboids, simple star-shaped cores, and fuzzy concepts.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{require_finite, DomainSet, DomainStructure, Point, WeightSet};

/// An axis-parallel box `⟨Δ_C, p⁻, p⁺⟩`.
///
/// Bounds are finite with `lower ≤ upper` on every dimension of a defined
/// domain, and `(−∞, +∞)` everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct Cuboid {
    domains: DomainSet,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Cuboid {
    pub fn new(
        space: &DomainStructure,
        domains: DomainSet,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        space.check_domains(&domains)?;
        space.check_len(lower.len())?;
        space.check_len(upper.len())?;
        for i in 0..space.dimension_count() {
            let name = space.dimension_name(i);
            let (lo, hi) = (lower[i], upper[i]);
            if domains.contains(space.domain_of(i)) {
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::InvalidCuboid(format!(
                        "bounds on defined dimension `{name}` must be finite, got [{lo}, {hi}]"
                    )));
                }
                if lo > hi {
                    return Err(Error::InvalidCuboid(format!(
                        "lower bound {lo} exceeds upper bound {hi} on dimension `{name}`"
                    )));
                }
            } else if lo != f64::NEG_INFINITY || hi != f64::INFINITY {
                return Err(Error::InvalidCuboid(format!(
                    "dimension `{name}` is outside the cuboid's domains and must be unbounded"
                )));
            }
        }
        Ok(Self {
            domains,
            lower,
            upper,
        })
    }

    pub fn domains(&self) -> &DomainSet {
        &self.domains
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Edge length `b_d = p⁺_d − p⁻_d` (infinite outside `Δ_C`).
    pub fn width(&self, dimension: usize) -> f64 {
        self.upper[dimension] - self.lower[dimension]
    }

    /// Closed-box membership test on every dimension.
    pub fn contains(&self, x: &Point) -> bool {
        x.coords()
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| {
                (lo == f64::NEG_INFINITY && hi == f64::INFINITY) || (lo <= v && v <= hi)
            })
    }

    /// Crisp intersection of two cuboids on the same domains, `None` if empty.
    pub fn intersect(&self, other: &Cuboid) -> Option<Cuboid> {
        debug_assert_eq!(self.domains, other.domains);
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        for i in 0..lower.len() {
            lower[i] = lower[i].max(other.lower[i]);
            upper[i] = upper[i].min(other.upper[i]);
            if lower[i] > upper[i] {
                return None;
            }
        }
        Some(Cuboid {
            domains: self.domains.clone(),
            lower,
            upper,
        })
    }

    /// Drops every domain outside `keep` (bounds become `(−∞, +∞)` there).
    pub fn project(&self, space: &DomainStructure, keep: &DomainSet) -> Cuboid {
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        for i in 0..lower.len() {
            if !keep.contains(space.domain_of(i)) {
                lower[i] = f64::NEG_INFINITY;
                upper[i] = f64::INFINITY;
            }
        }
        Cuboid {
            domains: self.domains.intersection(keep),
            lower,
            upper,
        }
    }

    /// Whether this cuboid contains `other` as a set.
    pub fn contains_cuboid(&self, other: &Cuboid) -> bool {
        (0..self.lower.len())
            .all(|i| self.lower[i] <= other.lower[i] && other.upper[i] <= self.upper[i])
    }
}

/// Minimum combined distance from `x` to any point of `cuboid`, over the
/// domains the weight set covers.
///
/// The nearest point of an axis-parallel box is `x` clamped coordinate-wise
/// to the box, because the combined metric is monotone in every
/// per-dimension difference.
pub fn distance_to_cuboid(weights: &WeightSet, x: &Point, cuboid: &Cuboid) -> Result<f64> {
    let space = weights.space();
    space.check_len(x.coords().len())?;
    space.check_len(cuboid.lower.len())?;
    let mut total = 0.0;
    for d in weights.domains().iter() {
        let mut inner = 0.0;
        for i in space.dimensions_of(d) {
            let (lo, hi) = (cuboid.lower[i], cuboid.upper[i]);
            if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
                continue;
            }
            let v = require_finite(space, x.coords(), i)?;
            let gap = if v < lo {
                lo - v
            } else if v > hi {
                v - hi
            } else {
                0.0
            };
            inner += weights.dimension_weight(i).unwrap_or(0.0) * gap * gap;
        }
        total += weights.domain_weight(d).unwrap_or(0.0) * libm::sqrt(inner);
    }
    Ok(total)
}

/// A simple star-shaped set: a union of cuboids on the same domains whose
/// intersection, the central region `P`, is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Core {
    domains: DomainSet,
    cuboids: Vec<Cuboid>,
    central: Cuboid,
}

impl Core {
    pub fn new(space: &DomainStructure, cuboids: Vec<Cuboid>) -> Result<Self> {
        validate_core(space, cuboids)
    }

    pub fn domains(&self) -> &DomainSet {
        &self.domains
    }

    pub fn cuboids(&self) -> &[Cuboid] {
        &self.cuboids
    }

    /// The central region `P`, the intersection of all cuboids.
    pub fn central_region(&self) -> &Cuboid {
        &self.central
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.cuboids.iter().any(|c| c.contains(x))
    }

    /// Whether `other`'s union of cuboids lies inside this core's union.
    ///
    /// Each cuboid of `other` is cut down by subtracting this core's
    /// cuboids one at a time; it is covered when nothing of positive
    /// volume is left. Dimensions on which the tested cuboid is flat are
    /// handled by keeping only the covering cuboids that contain that flat
    /// coordinate, so point-like and slab-like cores are decided exactly.
    pub fn union_contains(&self, other: &Core) -> bool {
        other
            .cuboids
            .iter()
            .all(|c| covered_by_union(c, &self.cuboids))
    }
}

fn covered_by_union(target: &Cuboid, cover: &[Cuboid]) -> bool {
    let n = target.lower.len();
    let flat: Vec<usize> = (0..n)
        .filter(|&i| target.lower[i] == target.upper[i])
        .collect();
    let relevant: Vec<&Cuboid> = cover
        .iter()
        .filter(|c| {
            flat.iter()
                .all(|&i| c.lower[i] <= target.lower[i] && target.upper[i] <= c.upper[i])
        })
        .collect();
    let free: Vec<usize> = (0..n)
        .filter(|&i| !flat.contains(&i) && target.lower[i].is_finite())
        .collect();
    if free.is_empty() {
        return !relevant.is_empty();
    }
    // Pieces of the target still uncovered, as (lower, upper) over `free`.
    let mut pieces: Vec<(Vec<f64>, Vec<f64>)> = alloc::vec![(
        free.iter().map(|&i| target.lower[i]).collect(),
        free.iter().map(|&i| target.upper[i]).collect(),
    )];
    for c in relevant {
        let mut next = Vec::new();
        for (mut lo, mut hi) in pieces {
            let overlaps = free
                .iter()
                .enumerate()
                .all(|(k, &i)| c.lower[i].max(lo[k]) < c.upper[i].min(hi[k]));
            if !overlaps {
                next.push((lo, hi));
                continue;
            }
            // Peel off the slabs of the piece that stick out of `c`.
            for (k, &i) in free.iter().enumerate() {
                if lo[k] < c.lower[i] {
                    let mut slab_hi = hi.clone();
                    slab_hi[k] = c.lower[i];
                    next.push((lo.clone(), slab_hi));
                    lo[k] = c.lower[i];
                }
                if hi[k] > c.upper[i] {
                    let mut slab_lo = lo.clone();
                    slab_lo[k] = c.upper[i];
                    next.push((slab_lo, hi.clone()));
                    hi[k] = c.upper[i];
                }
            }
        }
        pieces = next;
        if pieces.is_empty() {
            return true;
        }
    }
    false
}

/// Checks the cuboids of a core and computes its central region.
pub fn validate_core(space: &DomainStructure, cuboids: Vec<Cuboid>) -> Result<Core> {
    let first = cuboids
        .first()
        .ok_or_else(|| Error::InvalidArgument("a core needs at least one cuboid".into()))?;
    let domains = first.domains.clone();
    if domains.is_empty() {
        return Err(Error::InvalidArgument(
            "a core must be defined on at least one domain".into(),
        ));
    }
    if cuboids.iter().any(|c| c.domains != domains) {
        return Err(Error::InvalidArgument(
            "all cuboids of a core must be defined on the same domains".into(),
        ));
    }
    let n = space.dimension_count();
    if cuboids.iter().any(|c| c.lower.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cuboids
                .iter()
                .map(|c| c.lower.len())
                .find(|&l| l != n)
                .unwrap_or(0),
        });
    }
    let mut lower = first.lower.clone();
    let mut upper = first.upper.clone();
    for c in &cuboids[1..] {
        for i in 0..n {
            lower[i] = lower[i].max(c.lower[i]);
            upper[i] = upper[i].min(c.upper[i]);
        }
    }
    if let Some(i) = (0..n).find(|&i| lower[i] > upper[i]) {
        return Err(Error::EmptyCentralRegion {
            dimension: space.dimension_name(i).into(),
            max_lower: lower[i],
            min_upper: upper[i],
        });
    }
    let central = Cuboid {
        domains: domains.clone(),
        lower,
        upper,
    };
    Ok(Core {
        domains,
        cuboids,
        central,
    })
}

/// A fuzzy simple star-shaped set `⟨S, μ₀, c, W⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Concept {
    core: Core,
    mu0: f64,
    c: f64,
    weights: WeightSet,
}

impl Concept {
    pub fn new(core: Core, mu0: f64, c: f64, weights: WeightSet) -> Result<Self> {
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
        if weights.domains() != core.domains() {
            return Err(Error::InvalidWeights(
                "weights must cover exactly the domains of the core".into(),
            ));
        }
        if weights.space().dimension_count() != core.central.lower.len() {
            return Err(Error::StructureMismatch);
        }
        Ok(Self {
            core,
            mu0,
            c,
            weights,
        })
    }

    pub fn space(&self) -> &DomainStructure {
        self.weights.space()
    }

    pub fn core(&self) -> &Core {
        &self.core
    }

    pub fn domains(&self) -> &DomainSet {
        self.core.domains()
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    /// Sensitivity parameter `c`.
    pub fn sensitivity(&self) -> f64 {
        self.c
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    /// Same core and `μ₀` with another sensitivity and weight set.
    pub fn with_parameters(&self, c: f64, weights: WeightSet) -> Result<Self> {
        Self::new(self.core.clone(), self.mu0, c, weights)
    }

    /// `μ(x) = μ₀ · max_i exp(−c · min_{y ∈ C_i} d_C(x, y))`.
    pub fn membership(&self, x: &Point) -> Result<f64> {
        let mut best = f64::INFINITY;
        for cuboid in &self.core.cuboids {
            best = best.min(distance_to_cuboid(&self.weights, x, cuboid)?);
        }
        Ok(self.mu0 * libm::exp(-self.c * best))
    }

    /// Memberships of the individual fuzzified cuboids `C̃_i`.
    pub fn cuboid_memberships(&self, x: &Point) -> Result<Vec<f64>> {
        self.core
            .cuboids
            .iter()
            .map(|c| Ok(self.mu0 * libm::exp(-self.c * distance_to_cuboid(&self.weights, x, c)?)))
            .collect()
    }

    /// Radius `ε = −ln(α/μ₀)/c` of the α-cut seen as an ε-neighbourhood
    /// of the core.
    pub fn alpha_radius(&self, alpha: f64) -> f64 {
        -libm::log(alpha / self.mu0) / self.c
    }

    /// Restricts the concept to `keep ⊆ Δ_S`. Domain weights are rescaled to
    /// sum to `|keep|`; everything else carries over.
    pub fn project(&self, keep: &DomainSet) -> Result<Concept> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot project onto no domains".into(),
            ));
        }
        if !keep.is_subset(self.domains()) {
            return Err(Error::InvalidArgument(
                "projection target is not a subset of the concept's domains".into(),
            ));
        }
        let space = self.space();
        let cuboids = self
            .core
            .cuboids
            .iter()
            .map(|c| c.project(space, keep))
            .collect();
        let core = validate_core(space, cuboids)?;
        Concept::new(core, self.mu0, self.c, self.weights.project(keep)?)
    }

    /// Midpoint of the central region on the dimensions of `on`; all other
    /// coordinates are NaN.
    pub fn central_midpoint(&self, on: &DomainSet) -> Result<Point> {
        let space = self.space();
        space.check_domains(on)?;
        let p = &self.core.central;
        let mut mid = Point::undefined(space);
        for i in space.dimensions_in(on) {
            let (lo, hi) = (p.lower[i], p.upper[i]);
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::MidpointUndefined {
                    dimension: space.dimension_name(i).into(),
                });
            }
            mid.coords_mut()[i] = 0.5 * (lo + hi);
        }
        Ok(mid)
    }
}
