//! Domain structures, salience weights, points, and the point-level
//! distance, similarity and betweenness relations.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};

/// Relative tolerance for the domain-weight sum and absolute tolerance for
/// per-domain dimension-weight sums.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Default absolute tolerance on per-domain collinearity residuals.
pub const DEFAULT_BETWEENNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub dimensions: Vec<String>,
}

#[derive(Debug, PartialEq, Eq)]
struct Layout {
    domains: Vec<Domain>,
    /// Start of each domain's block in the point layout, plus a trailing `n`.
    offsets: Vec<usize>,
    /// Domain index of every dimension.
    owner: Vec<usize>,
}

/// The set of domains of a conceptual space and the dimensions they group.
///
/// Dimension order is domain by domain, in declaration order, and defines
/// the coordinate layout of every [`Point`] and [`Cuboid`](crate::Cuboid)
/// built on this structure. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct DomainStructure(Arc<Layout>);

impl PartialEq for DomainStructure {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for DomainStructure {}

impl DomainStructure {
    pub fn new(domains: Vec<Domain>) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::InvalidStructure("no domains".into()));
        }
        let mut offsets = Vec::with_capacity(domains.len() + 1);
        let mut owner = Vec::new();
        let mut seen: Vec<&str> = Vec::new();
        for (i, domain) in domains.iter().enumerate() {
            if domain.dimensions.is_empty() {
                return Err(Error::InvalidStructure(format!(
                    "domain `{}` has no dimensions",
                    domain.name
                )));
            }
            if domains[..i].iter().any(|d| d.name == domain.name) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate domain `{}`",
                    domain.name
                )));
            }
            offsets.push(owner.len());
            for dim in &domain.dimensions {
                if seen.contains(&dim.as_str()) {
                    return Err(Error::InvalidStructure(format!(
                        "dimension `{dim}` appears more than once"
                    )));
                }
                seen.push(dim);
                owner.push(i);
            }
        }
        offsets.push(owner.len());
        Ok(Self(Arc::new(Layout {
            domains,
            offsets,
            owner,
        })))
    }

    /// Convenience constructor from `(domain, [dimension, ...])` name pairs.
    pub fn from_names<'a, I, D>(domains: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, D)>,
        D: IntoIterator<Item = &'a str>,
    {
        Self::new(
            domains
                .into_iter()
                .map(|(name, dims)| Domain {
                    name: name.into(),
                    dimensions: dims.into_iter().map(String::from).collect(),
                })
                .collect(),
        )
    }

    /// Total number of dimensions `n`.
    pub fn dimension_count(&self) -> usize {
        self.0.owner.len()
    }

    pub fn domain_count(&self) -> usize {
        self.0.domains.len()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.0.domains
    }

    pub fn domain(&self, index: usize) -> &Domain {
        &self.0.domains[index]
    }

    /// Coordinate indices belonging to a domain.
    pub fn dimensions_of(&self, domain: usize) -> Range<usize> {
        self.0.offsets[domain]..self.0.offsets[domain + 1]
    }

    /// The domain `δ(d)` that owns dimension `d`.
    pub fn domain_of(&self, dimension: usize) -> usize {
        self.0.owner[dimension]
    }

    pub fn domain_index(&self, name: &str) -> Option<usize> {
        self.0.domains.iter().position(|d| d.name == name)
    }

    pub fn dimension_index(&self, name: &str) -> Option<usize> {
        self.0
            .domains
            .iter()
            .flat_map(|d| d.dimensions.iter())
            .position(|d| d == name)
    }

    pub fn dimension_name(&self, dimension: usize) -> &str {
        let domain = self.domain_of(dimension);
        &self.0.domains[domain].dimensions[dimension - self.0.offsets[domain]]
    }

    /// Every domain of the structure.
    pub fn all_domains(&self) -> DomainSet {
        DomainSet((0..self.domain_count()).collect())
    }

    /// Coordinate indices of all dimensions in the given domains, ascending.
    pub fn dimensions_in(&self, domains: &DomainSet) -> Vec<usize> {
        domains.iter().flat_map(|d| self.dimensions_of(d)).collect()
    }

    pub(crate) fn check_domains(&self, domains: &DomainSet) -> Result<()> {
        match domains.iter().find(|&d| d >= self.domain_count()) {
            Some(d) => Err(Error::InvalidArgument(format!(
                "domain index {d} out of range"
            ))),
            None => Ok(()),
        }
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dimension_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension_count(),
                found: len,
            })
        }
    }
}

/// A set of domain indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DomainSet(Vec<usize>);

impl DomainSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, domain: usize) -> bool {
        self.0.binary_search(&domain).is_ok()
    }

    pub fn is_subset(&self, other: &DomainSet) -> bool {
        self.iter().all(|d| other.contains(d))
    }

    pub fn intersection(&self, other: &DomainSet) -> DomainSet {
        DomainSet(self.iter().filter(|&d| other.contains(d)).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl FromIterator<usize> for DomainSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Domain weights `w_δ` and dimension weights `w_d` for a set of domains.
///
/// Domain weights sum to the number of covered domains, dimension weights
/// sum to one inside every domain, and all weights are strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    space: DomainStructure,
    domains: DomainSet,
    /// Indexed by domain; 0 for uncovered domains.
    domain: Vec<f64>,
    /// Indexed by dimension; 0 for dimensions of uncovered domains.
    dimension: Vec<f64>,
}

impl WeightSet {
    /// Builds a weight set covering exactly the domains named in
    /// `domain_weights`. Every dimension of those domains needs a weight.
    pub fn new(
        space: &DomainStructure,
        domain_weights: &[(usize, f64)],
        dimension_weights: &[(usize, f64)],
    ) -> Result<Self> {
        let domains = DomainSet::new(domain_weights.iter().map(|&(d, _)| d));
        if domains.len() != domain_weights.len() {
            return Err(Error::InvalidWeights("a domain is weighted twice".into()));
        }
        space.check_domains(&domains)?;
        let mut domain = alloc::vec![0.0; space.domain_count()];
        for &(d, w) in domain_weights {
            domain[d] = w;
        }
        let mut dimension = alloc::vec![0.0; space.dimension_count()];
        for &(d, w) in dimension_weights {
            if d >= space.dimension_count() {
                return Err(Error::InvalidArgument(format!(
                    "dimension index {d} out of range"
                )));
            }
            if !domains.contains(space.domain_of(d)) {
                return Err(Error::InvalidWeights(format!(
                    "dimension `{}` is weighted but its domain is not",
                    space.dimension_name(d)
                )));
            }
            dimension[d] = w;
        }
        let set = Self {
            space: space.clone(),
            domains,
            domain,
            dimension,
        };
        set.validate()?;
        Ok(set)
    }

    /// Unit domain weights and equal dimension weights on `domains`.
    pub fn uniform(space: &DomainStructure, domains: &DomainSet) -> Result<Self> {
        space.check_domains(domains)?;
        let domain_weights: Vec<(usize, f64)> = domains.iter().map(|d| (d, 1.0)).collect();
        let dimension_weights: Vec<(usize, f64)> = domains
            .iter()
            .flat_map(|d| {
                let dims = space.dimensions_of(d);
                let w = 1.0 / dims.len() as f64;
                dims.map(move |i| (i, w))
            })
            .collect();
        Self::new(space, &domain_weights, &dimension_weights)
    }

    fn validate(&self) -> Result<()> {
        if self.domains.is_empty() {
            return Err(Error::InvalidWeights("no domain is weighted".into()));
        }
        let mut total = 0.0;
        for d in self.domains.iter() {
            let name = &self.space.domain(d).name;
            let w = self.domain[d];
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidWeights(format!(
                    "domain `{name}` has non-positive weight {w}"
                )));
            }
            total += w;
            let mut inner = 0.0;
            for i in self.space.dimensions_of(d) {
                let wd = self.dimension[i];
                if !(wd > 0.0 && wd.is_finite()) {
                    return Err(Error::InvalidWeights(format!(
                        "dimension `{}` has non-positive or missing weight {wd}",
                        self.space.dimension_name(i)
                    )));
                }
                inner += wd;
            }
            if libm::fabs(inner - 1.0) > WEIGHT_TOLERANCE {
                return Err(Error::InvalidWeights(format!(
                    "dimension weights of domain `{name}` sum to {inner}, expected 1"
                )));
            }
        }
        let target = self.domains.len() as f64;
        if libm::fabs(total - target) > WEIGHT_TOLERANCE * target {
            return Err(Error::InvalidWeights(format!(
                "domain weights sum to {total}, expected {target} (one per weighted domain)"
            )));
        }
        Ok(())
    }

    pub fn space(&self) -> &DomainStructure {
        &self.space
    }

    /// The domains this weight set covers.
    pub fn domains(&self) -> &DomainSet {
        &self.domains
    }

    pub fn domain_weight(&self, domain: usize) -> Option<f64> {
        self.domains.contains(domain).then(|| self.domain[domain])
    }

    pub fn dimension_weight(&self, dimension: usize) -> Option<f64> {
        self.domains
            .contains(self.space.domain_of(dimension))
            .then(|| self.dimension[dimension])
    }

    /// `w_δ(d) · √w_d`, the factor by which dimension `d` is stretched.
    pub(crate) fn scale(&self, dimension: usize) -> f64 {
        self.domain[self.space.domain_of(dimension)] * libm::sqrt(self.dimension[dimension])
    }

    /// Restricts to `keep` and rescales the domain weights by a common factor
    /// so that they again sum to `|keep|`. Dimension weights are unchanged.
    pub fn project(&self, keep: &DomainSet) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot project onto no domains".into(),
            ));
        }
        if !keep.is_subset(&self.domains) {
            return Err(Error::InvalidArgument(
                "projection target is not a subset of the weighted domains".into(),
            ));
        }
        let kept_total: f64 = keep.iter().map(|d| self.domain[d]).sum();
        let factor = keep.len() as f64 / kept_total;
        let mut domain = alloc::vec![0.0; self.domain.len()];
        let mut dimension = alloc::vec![0.0; self.dimension.len()];
        for d in keep.iter() {
            domain[d] = self.domain[d] * factor;
            for i in self.space.dimensions_of(d) {
                dimension[i] = self.dimension[i];
            }
        }
        Ok(Self {
            space: self.space.clone(),
            domains: keep.clone(),
            domain,
            dimension,
        })
    }
}

/// A point of the conceptual space, one coordinate per dimension in the
/// structure's layout.
///
/// Coordinates on dimensions a computation does not touch may be NaN; the
/// metric functions reject non-finite coordinates only where they need them.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    /// A point with every coordinate undefined.
    pub fn undefined(space: &DomainStructure) -> Self {
        Self(alloc::vec![f64::NAN; space.dimension_count()])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Self(coords)
    }
}

pub(crate) fn require_finite(space: &DomainStructure, coords: &[f64], dim: usize) -> Result<f64> {
    let v = coords[dim];
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::UndefinedCoordinate {
            dimension: space.dimension_name(dim).into(),
        })
    }
}

/// Combined distance over every domain the weight set covers: Euclidean
/// within a domain, weighted Manhattan across domains.
pub fn combined_distance(weights: &WeightSet, x: &Point, y: &Point) -> Result<f64> {
    combined_distance_over(weights, weights.domains(), x, y)
}

/// Combined distance restricted to `scope`, using the given weights for the
/// domains in scope as they are (no renormalization).
pub fn combined_distance_over(
    weights: &WeightSet,
    scope: &DomainSet,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    let space = weights.space();
    space.check_len(x.0.len())?;
    space.check_len(y.0.len())?;
    if !scope.is_subset(weights.domains()) {
        return Err(Error::InvalidArgument(
            "distance scope contains unweighted domains".into(),
        ));
    }
    let mut total = 0.0;
    for d in scope.iter() {
        let mut inner = 0.0;
        for i in space.dimensions_of(d) {
            let diff = require_finite(space, &x.0, i)? - require_finite(space, &y.0, i)?;
            inner += weights.dimension[i] * diff * diff;
        }
        total += weights.domain[d] * libm::sqrt(inner);
    }
    Ok(total)
}

/// `exp(−c · d_C(x, y))`.
pub fn point_similarity(weights: &WeightSet, c: f64, x: &Point, y: &Point) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sensitivity must be positive, got {c}"
        )));
    }
    Ok(libm::exp(-c * combined_distance(weights, x, y)?))
}

/// Whether `y` lies between `x` and `z` on every domain of the structure.
pub fn between_points(
    space: &DomainStructure,
    x: &Point,
    y: &Point,
    z: &Point,
    tolerance: f64,
) -> Result<bool> {
    between_points_over(space, &space.all_domains(), x, y, z, tolerance)
}

/// Betweenness restricted to `scope`.
///
/// Under the combined metric, `d(x,y) + d(y,z) = d(x,z)` holds iff it holds
/// term by term in every domain, and inside a domain the weighted Euclidean
/// metric makes that equivalent to `y_δ` lying on the segment `[x_δ, z_δ]`.
/// The test is therefore a per-domain segment-membership check with an
/// absolute residual tolerance, and does not depend on weights.
pub fn between_points_over(
    space: &DomainStructure,
    scope: &DomainSet,
    x: &Point,
    y: &Point,
    z: &Point,
    tolerance: f64,
) -> Result<bool> {
    for p in [x, y, z] {
        space.check_len(p.0.len())?;
    }
    space.check_domains(scope)?;
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }
    for d in scope.iter() {
        let dims = space.dimensions_of(d);
        let mut seg_sq = 0.0;
        let mut dot = 0.0;
        for i in dims.clone() {
            let xi = require_finite(space, &x.0, i)?;
            let yi = require_finite(space, &y.0, i)?;
            let zi = require_finite(space, &z.0, i)?;
            seg_sq += (zi - xi) * (zi - xi);
            dot += (yi - xi) * (zi - xi);
        }
        let t = if seg_sq > 0.0 {
            (dot / seg_sq).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let mut residual_sq = 0.0;
        for i in dims {
            let foot = x.0[i] + t * (z.0[i] - x.0[i]);
            residual_sq += (y.0[i] - foot) * (y.0[i] - foot);
        }
        if libm::sqrt(residual_sq) > tolerance {
            return Ok(false);
        }
    }
    Ok(true)
}
