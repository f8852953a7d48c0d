#![allow(dead_code)]

use conceptspace_core::{Concept, Core, Cuboid, DomainSet, DomainStructure, WeightSet};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub const INF: f64 = f64::INFINITY;

pub fn fruit_space() -> DomainStructure {
    DomainStructure::from_names([
        ("color", vec!["hue"]),
        ("shape", vec!["round"]),
        ("taste", vec!["sweet"]),
    ])
    .unwrap()
}

pub fn fruit_weights(space: &DomainStructure, w: [f64; 3]) -> WeightSet {
    WeightSet::new(
        space,
        &[(0, w[0]), (1, w[1]), (2, w[2])],
        &[(0, 1.0), (1, 1.0), (2, 1.0)],
    )
    .unwrap()
}

pub fn fruit_concept(
    space: &DomainStructure,
    boxes: &[([f64; 3], [f64; 3])],
    c: f64,
    w: [f64; 3],
) -> Concept {
    let cuboids = boxes
        .iter()
        .map(|(lo, hi)| Cuboid::new(space, space.all_domains(), lo.to_vec(), hi.to_vec()).unwrap())
        .collect();
    Concept::new(
        Core::new(space, cuboids).unwrap(),
        1.0,
        c,
        fruit_weights(space, w),
    )
    .unwrap()
}

pub struct Fruit {
    pub space: DomainStructure,
    pub orange: Concept,
    pub lemon: Concept,
    pub granny_smith: Concept,
    pub apple: Concept,
    pub red: Concept,
}

pub fn fruit() -> Fruit {
    let space = fruit_space();
    let orange = fruit_concept(
        &space,
        &[([0.80, 0.90, 0.60], [0.90, 1.00, 0.70])],
        15.0,
        [1.0; 3],
    );
    let lemon = fruit_concept(
        &space,
        &[([0.70, 0.45, 0.00], [0.80, 0.55, 0.10])],
        20.0,
        [0.5, 0.5, 2.0],
    );
    let granny_smith = fruit_concept(
        &space,
        &[([0.55, 0.70, 0.35], [0.60, 0.80, 0.45])],
        25.0,
        [1.0; 3],
    );
    let apple = fruit_concept(
        &space,
        &[
            ([0.50, 0.65, 0.35], [0.80, 0.80, 0.50]),
            ([0.65, 0.65, 0.40], [0.85, 0.80, 0.55]),
            ([0.70, 0.65, 0.45], [1.00, 0.80, 0.60]),
        ],
        10.0,
        [0.5, 1.5, 1.0],
    );
    let color = DomainSet::new([0]);
    let red_box = Cuboid::new(
        &space,
        color.clone(),
        vec![0.9, -INF, -INF],
        vec![1.0, INF, INF],
    )
    .unwrap();
    let red = Concept::new(
        Core::new(&space, vec![red_box]).unwrap(),
        1.0,
        20.0,
        WeightSet::uniform(&space, &color).unwrap(),
    )
    .unwrap();
    Fruit {
        space,
        orange,
        lemon,
        granny_smith,
        apple,
        red,
    }
}

/// Deterministic generator for randomized instances.
pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    /// A space of `domains` domains with 1 to `max_dims` dimensions each.
    pub fn space(&mut self, domains: usize, max_dims: usize) -> DomainStructure {
        let mut names = Vec::new();
        for d in 0..domains {
            let k = 1 + self.below(max_dims);
            names.push((
                format!("d{d}"),
                (0..k).map(|i| format!("d{d}x{i}")).collect::<Vec<_>>(),
            ));
        }
        DomainStructure::new(
            names
                .into_iter()
                .map(|(name, dimensions)| conceptspace_core::geometry::Domain { name, dimensions })
                .collect(),
        )
        .unwrap()
    }

    /// Random normalized weights over all domains.
    pub fn weights(&mut self, space: &DomainStructure) -> WeightSet {
        let m = space.domain_count();
        let raw: Vec<f64> = (0..m).map(|_| self.range(0.2, 2.0)).collect();
        let total: f64 = raw.iter().sum();
        let domain: Vec<(usize, f64)> = raw
            .iter()
            .enumerate()
            .map(|(i, w)| (i, w * m as f64 / total))
            .collect();
        let mut dims = Vec::new();
        for d in 0..m {
            let range = space.dimensions_of(d);
            let raw: Vec<f64> = range.clone().map(|_| self.range(0.2, 1.0)).collect();
            let total: f64 = raw.iter().sum();
            dims.extend(range.zip(raw).map(|(i, w)| (i, w / total)));
        }
        WeightSet::new(space, &domain, &dims).unwrap()
    }

    pub fn cuboid(&mut self, space: &DomainStructure, around: &[f64]) -> Cuboid {
        let lower: Vec<f64> = around.iter().map(|&p| p - self.range(0.0, 0.4)).collect();
        let upper: Vec<f64> = around.iter().map(|&p| p + self.range(0.0, 0.4)).collect();
        Cuboid::new(space, space.all_domains(), lower, upper).unwrap()
    }

    /// A concept on all domains whose `cuboids` cuboids share `centre`.
    pub fn concept(&mut self, space: &DomainStructure, cuboids: usize) -> Concept {
        let centre: Vec<f64> = (0..space.dimension_count())
            .map(|_| self.range(0.0, 1.0))
            .collect();
        let boxes = (0..cuboids).map(|_| self.cuboid(space, &centre)).collect();
        let core = Core::new(space, boxes).unwrap();
        let mu0 = self.range(0.2, 1.0);
        let c = self.range(2.0, 20.0);
        Concept::new(core, mu0, c, self.weights(space)).unwrap()
    }

    pub fn point(&mut self, space: &DomainStructure, lo: f64, hi: f64) -> conceptspace_core::Point {
        conceptspace_core::Point::new(
            (0..space.dimension_count())
                .map(|_| self.range(lo, hi))
                .collect(),
        )
    }
}

/// Composite Simpson rule on `[a, b]` with `intervals` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for i in 1..intervals {
        let x = a + i as f64 * h;
        sum += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    sum * h / 3.0
}
