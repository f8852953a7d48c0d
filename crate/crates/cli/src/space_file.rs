//! The concept-space file format.
//!
//! A file is a JSON document:
//!
//! ```json
//! {
//!   "schemaVersion": 1,
//!   "space": { "domains": [{ "name": "color", "dimensions": ["hue"] }] },
//!   "concepts": [{
//!     "name": "red",
//!     "domains": ["color"],
//!     "cuboids": [{ "lower": [0.9], "upper": [1.0] }],
//!     "mu0": 1.0,
//!     "c": 20.0,
//!     "domainWeights": { "color": 1.0 },
//!     "dimensionWeights": { "hue": 1.0 }
//!   }]
//! }
//! ```
//!
//! Cuboid bounds list every dimension of the space in declaration order.
//! Dimensions outside a concept's domains take the tokens `"-inf"` and
//! `"+inf"`. `dimensionWeights` may be omitted, in which case each domain's
//! dimensions are weighted equally.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use conceptspace_core::geometry::Domain;
use conceptspace_core::{Concept, Core, Cuboid, DomainSet, DomainStructure, WeightSet};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// The fruit space shipped with the tool, used when no `--space` is given.
pub const FRUIT_SPACE: &str = include_str!("../fixtures/fruit_space.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SpaceFile {
    pub schema_version: u32,
    pub space: SpaceEntry,
    pub concepts: Vec<ConceptEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceEntry {
    pub domains: Vec<DomainEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainEntry {
    pub name: String,
    pub dimensions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConceptEntry {
    pub name: String,
    pub domains: Vec<String>,
    pub cuboids: Vec<CuboidEntry>,
    pub mu0: f64,
    pub c: f64,
    pub domain_weights: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension_weights: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuboidEntry {
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
}

/// A cuboid bound: a number, or one of the tokens `"-inf"`, `"+inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Token(String),
}

impl Bound {
    fn from_f64(v: f64) -> Self {
        if v == f64::INFINITY {
            Bound::Token("+inf".into())
        } else if v == f64::NEG_INFINITY {
            Bound::Token("-inf".into())
        } else {
            Bound::Number(v)
        }
    }

    fn value(&self) -> Option<f64> {
        match self {
            Bound::Number(v) => Some(*v),
            Bound::Token(t) => match t.as_str() {
                "-inf" => Some(f64::NEG_INFINITY),
                "+inf" | "inf" => Some(f64::INFINITY),
                _ => None,
            },
        }
    }
}

/// One validation problem, located by a JSON pointer into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.pointer, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadError {
    Io {
        source: String,
        message: String,
    },
    Syntax {
        source: String,
        line: usize,
        column: usize,
        message: String,
    },
    Invalid {
        source: String,
        diagnostics: Vec<Diagnostic>,
    },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { source, message } => write!(f, "{source}: {message}"),
            LoadError::Syntax {
                source,
                line,
                column,
                message,
            } => write!(f, "{source}:{line}:{column}: {message}"),
            LoadError::Invalid {
                source,
                diagnostics,
            } => {
                let n = diagnostics.len();
                write!(
                    f,
                    "{source}: {n} validation error{}",
                    if n == 1 { "" } else { "s" }
                )?;
                for d in diagnostics {
                    write!(f, "\n  {source}: {d}")?;
                }
                Ok(())
            }
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid { .. } => CliError::Validation(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// A validated space with its named concepts, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    space: DomainStructure,
    concepts: Vec<(String, Concept)>,
}

impl Registry {
    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
            source: source.clone(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &source)
    }

    /// Parses and validates `text`; `source` names it in error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self, LoadError> {
        let file: SpaceFile = serde_json::from_str(text).map_err(|e| LoadError::Syntax {
            source: source.into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file).map_err(|diagnostics| LoadError::Invalid {
            source: source.into(),
            diagnostics,
        })
    }

    pub fn fruit() -> Self {
        Self::parse(FRUIT_SPACE, "fruit_space.json").expect("bundled fixture is valid")
    }

    /// Validates a parsed document, reporting every problem found.
    pub fn from_file(file: &SpaceFile) -> Result<Self, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        if file.schema_version != SCHEMA_VERSION {
            diags.push(diag(
                "/schemaVersion",
                format!(
                    "unsupported schema version {}, expected {SCHEMA_VERSION}",
                    file.schema_version
                ),
            ));
        }
        let domains = file
            .space
            .domains
            .iter()
            .map(|d| Domain {
                name: d.name.clone(),
                dimensions: d.dimensions.clone(),
            })
            .collect();
        let space = match DomainStructure::new(domains) {
            Ok(s) => s,
            Err(e) => {
                diags.push(diag("/space/domains", e.to_string()));
                return Err(diags);
            }
        };

        let mut seen = HashSet::new();
        let mut concepts = Vec::new();
        for (i, entry) in file.concepts.iter().enumerate() {
            let at = format!("/concepts/{i}");
            if entry.name.is_empty() {
                diags.push(diag(format!("{at}/name"), "concept name is empty"));
            } else if !seen.insert(entry.name.as_str()) {
                diags.push(diag(
                    format!("{at}/name"),
                    format!("duplicate concept name `{}`", entry.name),
                ));
            }
            if let Some(concept) = build_concept(&space, entry, &at, &mut diags) {
                concepts.push((entry.name.clone(), concept));
            }
        }
        if diags.is_empty() {
            Ok(Self { space, concepts })
        } else {
            Err(diags)
        }
    }

    pub fn space(&self) -> &DomainStructure {
        &self.space
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.concepts.iter().map(|(n, _)| n.as_str())
    }

    pub fn concepts(&self) -> &[(String, Concept)] {
        &self.concepts
    }

    pub fn get(&self, name: &str) -> Result<&Concept, CliError> {
        self.concepts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| CliError::Validation(unknown_name("concept", name, self.names())))
    }

    /// Resolves a comma-separated list of domain names.
    pub fn domain_set(&self, list: &str) -> Result<DomainSet, CliError> {
        let names = self.space.domains().iter().map(|d| d.name.as_str());
        let mut indices = Vec::new();
        for name in list.split(',').map(str::trim) {
            let index = self
                .space
                .domain_index(name)
                .ok_or_else(|| CliError::Validation(unknown_name("domain", name, names.clone())))?;
            indices.push(index);
        }
        Ok(DomainSet::new(indices))
    }

    /// The canonical document for this registry.
    pub fn to_file(&self) -> SpaceFile {
        let space = &self.space;
        let domains = space
            .domains()
            .iter()
            .map(|d| DomainEntry {
                name: d.name.clone(),
                dimensions: d.dimensions.clone(),
            })
            .collect();
        let concepts = self
            .concepts
            .iter()
            .map(|(name, concept)| {
                let w = concept.weights();
                let on = concept.domains();
                ConceptEntry {
                    name: name.clone(),
                    domains: on.iter().map(|d| space.domain(d).name.clone()).collect(),
                    cuboids: concept
                        .core()
                        .cuboids()
                        .iter()
                        .map(|c| CuboidEntry {
                            lower: c.lower().iter().copied().map(Bound::from_f64).collect(),
                            upper: c.upper().iter().copied().map(Bound::from_f64).collect(),
                        })
                        .collect(),
                    mu0: concept.mu0(),
                    c: concept.sensitivity(),
                    domain_weights: on
                        .iter()
                        .map(|d| {
                            (
                                space.domain(d).name.clone(),
                                w.domain_weight(d).unwrap_or(0.0),
                            )
                        })
                        .collect(),
                    dimension_weights: Some(
                        space
                            .dimensions_in(on)
                            .into_iter()
                            .map(|i| {
                                (
                                    space.dimension_name(i).to_owned(),
                                    w.dimension_weight(i).unwrap_or(0.0),
                                )
                            })
                            .collect(),
                    ),
                }
            })
            .collect();
        SpaceFile {
            schema_version: SCHEMA_VERSION,
            space: SpaceEntry { domains },
            concepts,
        }
    }

    /// Canonical pretty-printed JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("registry serializes");
        s.push('\n');
        s
    }
}

fn diag(pointer: impl Into<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Escapes a key for use as a JSON pointer segment.
fn segment(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn unknown_name<'a>(kind: &str, name: &str, candidates: impl Iterator<Item = &'a str>) -> String {
    let candidates: Vec<&str> = candidates.collect();
    let mut close: Vec<(usize, &str)> = candidates
        .iter()
        .map(|c| (strsim::levenshtein(name, c), *c))
        .filter(|(d, c)| *d <= 2.max(c.len() / 3) || c.contains(name) || name.contains(c))
        .collect();
    close.sort();
    let mut msg = format!("unknown {kind} `{name}`");
    if close.is_empty() {
        msg.push_str(&format!("; available: {}", candidates.join(", ")));
    } else {
        let list: Vec<String> = close.iter().map(|(_, c)| format!("`{c}`")).collect();
        msg.push_str(&format!("; did you mean {}?", list.join(" or ")));
    }
    msg
}

fn build_concept(
    space: &DomainStructure,
    entry: &ConceptEntry,
    at: &str,
    diags: &mut Vec<Diagnostic>,
) -> Option<Concept> {
    let before = diags.len();
    let domain_names = || space.domains().iter().map(|d| d.name.as_str());

    let mut indices = Vec::new();
    if entry.domains.is_empty() {
        diags.push(diag(
            format!("{at}/domains"),
            "a concept needs at least one domain",
        ));
    }
    for (k, name) in entry.domains.iter().enumerate() {
        match space.domain_index(name) {
            Some(d) if indices.contains(&d) => diags.push(diag(
                format!("{at}/domains/{k}"),
                format!("domain `{name}` listed twice"),
            )),
            Some(d) => indices.push(d),
            None => diags.push(diag(
                format!("{at}/domains/{k}"),
                unknown_name("domain", name, domain_names()),
            )),
        }
    }
    let domains = DomainSet::new(indices);

    if !(entry.mu0 > 0.0 && entry.mu0 <= 1.0) {
        diags.push(diag(
            format!("{at}/mu0"),
            format!("mu0 must lie in (0, 1], got {}", entry.mu0),
        ));
    }
    if !(entry.c > 0.0 && entry.c.is_finite()) {
        diags.push(diag(
            format!("{at}/c"),
            format!("c must be positive and finite, got {}", entry.c),
        ));
    }

    let weights = build_weights(space, entry, &domains, at, diags);

    let n = space.dimension_count();
    let mut cuboids = Vec::new();
    if entry.cuboids.is_empty() {
        diags.push(diag(
            format!("{at}/cuboids"),
            "a concept needs at least one cuboid",
        ));
    }
    for (j, cuboid) in entry.cuboids.iter().enumerate() {
        let here = format!("{at}/cuboids/{j}");
        let clean = diags.len();
        let mut sides = Vec::new();
        for (side, bounds) in [("lower", &cuboid.lower), ("upper", &cuboid.upper)] {
            if bounds.len() != n {
                diags.push(diag(
                    format!("{here}/{side}"),
                    format!(
                        "expected {n} bounds (one per dimension), found {}",
                        bounds.len()
                    ),
                ));
                continue;
            }
            let mut values = Vec::with_capacity(n);
            for (k, b) in bounds.iter().enumerate() {
                match b.value() {
                    Some(v) => values.push(v),
                    None => diags.push(diag(
                        format!("{here}/{side}/{k}"),
                        format!("bound must be a number, \"-inf\" or \"+inf\", got {b:?}"),
                    )),
                }
            }
            sides.push(values);
        }
        if diags.len() == clean && sides.len() == 2 {
            let upper = sides.pop().unwrap_or_default();
            let lower = sides.pop().unwrap_or_default();
            match Cuboid::new(space, domains.clone(), lower, upper) {
                Ok(c) => cuboids.push(c),
                Err(e) => diags.push(diag(here, e.to_string())),
            }
        }
    }
    if diags.len() != before {
        return None;
    }
    let core = match Core::new(space, cuboids) {
        Ok(core) => core,
        Err(e) => {
            diags.push(diag(format!("{at}/cuboids"), e.to_string()));
            return None;
        }
    };
    match Concept::new(core, entry.mu0, entry.c, weights?) {
        Ok(c) => Some(c),
        Err(e) => {
            diags.push(diag(at, e.to_string()));
            None
        }
    }
}

fn build_weights(
    space: &DomainStructure,
    entry: &ConceptEntry,
    domains: &DomainSet,
    at: &str,
    diags: &mut Vec<Diagnostic>,
) -> Option<WeightSet> {
    let before = diags.len();
    let mut domain_weights = Vec::new();
    for (name, &w) in &entry.domain_weights {
        let here = format!("{at}/domainWeights/{}", segment(name));
        match space.domain_index(name) {
            Some(d) if domains.contains(d) => domain_weights.push((d, w)),
            Some(_) => diags.push(diag(
                here,
                format!("domain `{name}` is not one of the concept's domains"),
            )),
            None => diags.push(diag(
                here,
                unknown_name(
                    "domain",
                    name,
                    space.domains().iter().map(|d| d.name.as_str()),
                ),
            )),
        }
    }
    for d in domains.iter() {
        if !domain_weights.iter().any(|&(e, _)| e == d) {
            diags.push(diag(
                format!("{at}/domainWeights"),
                format!("missing weight for domain `{}`", space.domain(d).name),
            ));
        }
    }

    let mut dimension_weights = Vec::new();
    match &entry.dimension_weights {
        None => {
            for d in domains.iter() {
                let dims = space.dimensions_of(d);
                let w = 1.0 / dims.len() as f64;
                dimension_weights.extend(dims.map(|i| (i, w)));
            }
        }
        Some(map) => {
            for (name, &w) in map {
                let here = format!("{at}/dimensionWeights/{}", segment(name));
                match space.dimension_index(name) {
                    Some(i) if domains.contains(space.domain_of(i)) => {
                        dimension_weights.push((i, w))
                    }
                    Some(_) => diags.push(diag(
                        here,
                        format!("dimension `{name}` is outside the concept's domains"),
                    )),
                    None => {
                        let all = space
                            .domains()
                            .iter()
                            .flat_map(|d| d.dimensions.iter().map(String::as_str));
                        diags.push(diag(here, unknown_name("dimension", name, all)))
                    }
                }
            }
            for i in space.dimensions_in(domains) {
                if !dimension_weights.iter().any(|&(j, _)| j == i) {
                    diags.push(diag(
                        format!("{at}/dimensionWeights"),
                        format!("missing weight for dimension `{}`", space.dimension_name(i)),
                    ));
                }
            }
        }
    }
    if diags.len() != before || domains.is_empty() {
        return None;
    }
    match WeightSet::new(space, &domain_weights, &dimension_weights) {
        Ok(w) => Some(w),
        Err(e) => {
            let message = e.to_string();
            let field = if message.contains("dimension weights") {
                "dimensionWeights"
            } else {
                "domainWeights"
            };
            diags.push(diag(format!("{at}/{field}"), message));
            None
        }
    }
}
