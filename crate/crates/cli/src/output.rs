use std::fmt::Write as _;

/// Output layout selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    JsonLines,
}

/// Fixed notation with `digits` decimals. Ties round half to even, which is
/// what the standard formatter does on the exact binary value.
pub fn fixed(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.digits$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => s,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

/// One output row: ordered named fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }
}

impl Cell {
    fn plain(&self, digits: usize) -> String {
        match self {
            Cell::Num(v) => fixed(*v, digits),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn csv(&self, digits: usize) -> String {
        let s = self.plain(digits);
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s
        }
    }

    fn json(&self, digits: usize) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => fixed(*v, digits),
            Cell::Num(_) | Cell::Empty => "null".into(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }
}

/// Header plus one line per record; the header comes from the first record.
pub fn csv(records: &[Record], digits: usize) -> String {
    let mut out = String::new();
    if let Some(first) = records.first() {
        let keys: Vec<&str> = first.0.iter().map(|(k, _)| *k).collect();
        out.push_str(&keys.join(","));
        out.push('\n');
    }
    for r in records {
        let cells: Vec<String> = r.0.iter().map(|(_, c)| c.csv(digits)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One JSON object per line, fields in record order. Numbers keep their
/// fixed-notation rounding.
pub fn json_lines(records: &[Record], digits: usize) -> String {
    let mut out = String::new();
    for r in records {
        out.push('{');
        for (i, (k, c)) in r.0.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "{}:{}",
                serde_json::to_string(k).expect("keys serialize"),
                c.json(digits)
            );
        }
        out.push_str("}\n");
    }
    out
}

/// Renders records in a machine format, or calls `text` for the human one.
pub fn render(
    format: Format,
    digits: usize,
    records: &[Record],
    text: impl FnOnce() -> String,
) -> String {
    match format {
        Format::Text => text(),
        Format::Csv => csv(records, digits),
        Format::JsonLines => json_lines(records, digits),
    }
}

/// Left-aligned columns separated by two spaces, without trailing blanks.
pub fn columns(rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; width];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                line.extend(std::iter::repeat_n(' ', widths[i] - cell.chars().count()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
