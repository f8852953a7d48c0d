//! Reproduction of the fruit-space relation tables.
//!
//! Each reproduced cell is labelled HARD when it has a closed form (measures,
//! nested or crisp subsethood, similarity, betweenness) and must match the
//! printed value at its printed precision, or SOFT when it depends on how the
//! overlap of two non-nested concepts is modelled, in which case it is
//! compared with a tolerance of 0.05.

use conceptspace_core::oracle::Executor;
use conceptspace_core::relations::{
    concept_between, concept_similarity, subsethood, OverlapMethod, RelationSettings, Subsethood,
};

use crate::error::CliError;
use crate::output::{columns, fixed, Cell, Record};
use crate::space_file::Registry;

/// Printed precision of the reference tables.
pub const PRINTED_DIGITS: usize = 4;
pub const SOFT_TOLERANCE: f64 = 0.05;

pub const PAIRS: [(&str, &str); 4] = [
    ("granny_smith", "apple"),
    ("orange", "apple"),
    ("lemon", "apple"),
    ("red", "apple"),
];

/// Reference `M(S1), M(S2), Sub(S1,S2), Sub(S2,S1), Sim(S1,S2), Sim(S2,S1)` per pair.
pub const REFERENCE: [[&str; 6]; 4] = [
    ["0.0042", "0.1048", "1.0000", "0.1171", "0.1353", "0.0010"],
    ["0.0127", "0.1048", "0.1800", "0.0333", "0.0036", "0.0006"],
    ["0.0135", "0.1048", "0.0422", "0.0054", "0.0005", "0.0000"],
    ["0.2000", "0.1048", "1.0000", "0.3333", "0.3679", "0.0183"],
];

pub const TRIPLES: [[&str; 3]; 3] = [
    ["lemon", "apple", "orange"],
    ["lemon", "granny_smith", "orange"],
    ["granny_smith", "apple", "orange"],
];

pub const REFERENCE_BETWEEN: [bool; 3] = [true, false, false];

/// Which subsethood cells are SOFT, as `[Sub(S1,S2), Sub(S2,S1)]` per pair.
const SOFT_SUBSETHOOD: [[bool; 2]; 4] = [[false, true], [true, true], [true, true], [false, false]];

#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub s1: &'static str,
    pub s2: &'static str,
    pub m1: f64,
    pub m2: f64,
    pub sub12: Subsethood,
    pub sub21: Subsethood,
    pub sim12: f64,
    pub sim21: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetweenRow {
    pub names: [&'static str; 3],
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    pub pairs: Vec<PairRow>,
    pub between: Vec<BetweenRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hard,
    Soft,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Hard => "HARD",
            Kind::Soft => "SOFT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Number(f64),
    Flag(bool),
}

/// One reproduced cell compared with its reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub cell: String,
    pub kind: Kind,
    pub computed: Value,
    pub reference: String,
    pub standard_error: Option<f64>,
    pub passed: bool,
}

pub fn compute(
    registry: &Registry,
    settings: &RelationSettings,
    executor: &dyn Executor,
) -> Result<Tables, CliError> {
    let mut pairs = Vec::new();
    for (s1, s2) in PAIRS {
        let (a, b) = (registry.get(s1)?, registry.get(s2)?);
        pairs.push(PairRow {
            s1,
            s2,
            m1: a.measure()?,
            m2: b.measure()?,
            sub12: subsethood(a, b, settings, executor)?,
            sub21: subsethood(b, a, settings, executor)?,
            sim12: concept_similarity(a, b)?,
            sim21: concept_similarity(b, a)?,
        });
    }
    let mut between = Vec::new();
    for names in TRIPLES {
        let [a, b, c] = names.map(|n| registry.get(n));
        between.push(BetweenRow {
            names,
            value: concept_between(a?, b?, c?, settings.tolerance)?,
        });
    }
    Ok(Tables { pairs, between })
}

fn standard_error(s: &Subsethood) -> Option<f64> {
    match s.method {
        OverlapMethod::Oracle { standard_error, .. } => Some(standard_error / s.denominator),
        _ => None,
    }
}

fn number(
    cell: String,
    kind: Kind,
    computed: f64,
    reference: &str,
    standard_error: Option<f64>,
) -> CellCheck {
    let passed = match kind {
        Kind::Hard => fixed(computed, PRINTED_DIGITS) == reference,
        Kind::Soft => {
            let target: f64 = reference.parse().expect("reference values are numbers");
            (computed - target).abs() <= SOFT_TOLERANCE
        }
    };
    CellCheck {
        cell,
        kind,
        computed: Value::Number(computed),
        reference: reference.into(),
        standard_error,
        passed,
    }
}

/// Every reproduced cell, measures first (each concept once), then
/// subsethood, similarity and betweenness.
pub fn checks(tables: &Tables) -> Vec<CellCheck> {
    let mut out = Vec::new();
    for (row, reference) in tables.pairs.iter().zip(REFERENCE) {
        out.push(number(
            format!("M({})", row.s1),
            Kind::Hard,
            row.m1,
            reference[0],
            None,
        ));
    }
    if let (Some(row), Some(reference)) = (tables.pairs.first(), REFERENCE.first()) {
        out.push(number(
            format!("M({})", row.s2),
            Kind::Hard,
            row.m2,
            reference[1],
            None,
        ));
    }
    for ((row, reference), soft) in tables.pairs.iter().zip(REFERENCE).zip(SOFT_SUBSETHOOD) {
        let kind = |soft: bool| if soft { Kind::Soft } else { Kind::Hard };
        out.push(number(
            format!("Sub({},{})", row.s1, row.s2),
            kind(soft[0]),
            row.sub12.value,
            reference[2],
            standard_error(&row.sub12),
        ));
        out.push(number(
            format!("Sub({},{})", row.s2, row.s1),
            kind(soft[1]),
            row.sub21.value,
            reference[3],
            standard_error(&row.sub21),
        ));
    }
    for (row, reference) in tables.pairs.iter().zip(REFERENCE) {
        out.push(number(
            format!("Sim({},{})", row.s1, row.s2),
            Kind::Hard,
            row.sim12,
            reference[4],
            None,
        ));
        out.push(number(
            format!("Sim({},{})", row.s2, row.s1),
            Kind::Hard,
            row.sim21,
            reference[5],
            None,
        ));
    }
    for (row, reference) in tables.between.iter().zip(REFERENCE_BETWEEN) {
        let [a, b, c] = row.names;
        out.push(CellCheck {
            cell: format!("B({a},{b},{c})"),
            kind: Kind::Hard,
            computed: Value::Flag(row.value),
            reference: reference.to_string(),
            standard_error: None,
            passed: row.value == reference,
        });
    }
    out
}

fn status(c: &CellCheck) -> String {
    match (c.kind, c.passed) {
        (Kind::Hard, true) => "match".into(),
        (Kind::Hard, false) => "MISMATCH".into(),
        (Kind::Soft, true) => format!("within ±{SOFT_TOLERANCE}"),
        (Kind::Soft, false) => format!("outside ±{SOFT_TOLERANCE}"),
    }
}

fn computed_text(v: Value, digits: usize) -> String {
    match v {
        Value::Number(x) => fixed(x, digits),
        Value::Flag(b) => b.to_string(),
    }
}

pub fn records(checks: &[CellCheck]) -> Vec<Record> {
    checks
        .iter()
        .map(|c| {
            let computed = match c.computed {
                Value::Number(x) => Cell::Num(x),
                Value::Flag(b) => Cell::Bool(b),
            };
            let reference = match c.computed {
                Value::Number(_) => Cell::Text(c.reference.clone()),
                Value::Flag(_) => Cell::Bool(c.reference == "true"),
            };
            Record::new()
                .with("cell", c.cell.clone())
                .with("kind", c.kind.label())
                .with("computed", computed)
                .with("reference", reference)
                .with(
                    "standard_error",
                    c.standard_error.map_or(Cell::Empty, Cell::Num),
                )
                .with("status", status(c))
        })
        .collect()
}

/// The two tables at printed precision, then the cell-by-cell comparison at
/// `digits` decimals.
pub fn render(tables: &Tables, checks: &[CellCheck], digits: usize) -> String {
    let p = |x: f64| fixed(x, PRINTED_DIGITS);
    let mut out = String::from("Measure, subsethood and similarity\n");
    let mut rows = vec![[
        "S1",
        "S2",
        "M(S1)",
        "M(S2)",
        "Sub(S1,S2)",
        "Sub(S2,S1)",
        "Sim(S1,S2)",
        "Sim(S2,S1)",
    ]
    .map(String::from)
    .to_vec()];
    for r in &tables.pairs {
        rows.push(vec![
            r.s1.into(),
            r.s2.into(),
            p(r.m1),
            p(r.m2),
            p(r.sub12.value),
            p(r.sub21.value),
            p(r.sim12),
            p(r.sim21),
        ]);
    }
    out.push_str(&columns(&rows));

    out.push_str("\nBetweenness\n");
    let mut rows = vec![["S1", "S2", "S3", "B(S1,S2,S3)"].map(String::from).to_vec()];
    for r in &tables.between {
        let [a, b, c] = r.names;
        rows.push(vec![a.into(), b.into(), c.into(), r.value.to_string()]);
    }
    out.push_str(&columns(&rows));

    out.push_str("\nCells (HARD: closed form, must match the printed value; SOFT: overlap integral, ±0.05)\n");
    let mut rows = vec![["cell", "kind", "computed", "reference", "se", "status"]
        .map(String::from)
        .to_vec()];
    for c in checks {
        rows.push(vec![
            c.cell.clone(),
            c.kind.label().into(),
            computed_text(c.computed, digits),
            c.reference.clone(),
            c.standard_error
                .map(|s| fixed(s, digits))
                .unwrap_or_else(|| "-".into()),
            status(c),
        ]);
    }
    out.push_str(&columns(&rows));

    let count = |kind: Kind| {
        let of: Vec<&CellCheck> = checks.iter().filter(|c| c.kind == kind).collect();
        (of.iter().filter(|c| c.passed).count(), of.len())
    };
    let (hard_ok, hard) = count(Kind::Hard);
    let (soft_ok, soft) = count(Kind::Soft);
    out.push_str(&format!("\nHARD cells matching: {hard_ok} of {hard}\n"));
    out.push_str(&format!(
        "SOFT cells within ±{SOFT_TOLERANCE}: {soft_ok} of {soft}\n"
    ));
    out
}
