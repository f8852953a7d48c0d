use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use conceptspace_core::geometry::DEFAULT_BETWEENNESS_TOLERANCE;
use conceptspace_core::measure::concept_alpha_cut_volume;
use conceptspace_core::oracle::{
    bounding_box_for, discrepancy_report, OracleSettings, Regime, DEFAULT_CUTOFF, DEFAULT_SAMPLES,
    DEFAULT_SEED, MIN_MONTE_CARLO_SAMPLES,
};
use conceptspace_core::relations::{
    concept_between, concept_similarity, implication, subsethood, OverlapMethod, RelationSettings,
    Subsethood,
};
use conceptspace_core::{Concept, Limits, Point};

use crate::error::CliError;
use crate::exec::Parallel;
use crate::output::{fixed, render, Cell, Format, Record};
use crate::space_file::{Registry, FRUIT_SPACE};
use crate::tables;

#[derive(Debug, Parser)]
#[command(
    name = "conceptspace",
    version,
    about = "Measures and relations of fuzzy concepts in a conceptual space"
)]
pub struct Cli {
    /// Concept-space file; the bundled fruit space when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub space: Option<PathBuf>,
    /// Seed of the Monte-Carlo streams.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Initial Monte-Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Membership level below which the integration region is truncated.
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: f64,
    /// Absolute tolerance of the betweenness test.
    #[arg(long, global = true, default_value_t = DEFAULT_BETWEENNESS_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimal places of printed numbers.
    #[arg(long, global = true, default_value_t = 6)]
    pub digits: usize,
    /// Worker threads for sampling; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuzzy measure (membership integral) of a concept.
    Measure { concept: String },
    /// Degree to which S1 is a subset of S2.
    Subsethood { s1: String, s2: String },
    /// Degree to which S1 implies S2 (equal to subsethood).
    Implication { s1: String, s2: String },
    /// Similarity of S1 to S2, in S2's context.
    Similarity { s1: String, s2: String },
    /// Whether S2 lies between S1 and S3.
    Between { s1: String, s2: String, s3: String },
    /// Membership of a point, given as comma-separated coordinates for every dimension.
    Membership {
        concept: String,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Volume of a concept's alpha-cut.
    AlphaVolume { concept: String, alpha: f64 },
    /// Recompute the reference fruit-space tables and compare cell by cell.
    ReproduceTables,
    /// Closed-form measure against a Monte-Carlo membership integral.
    OracleCheck { concept: String },
    /// Membership values on a grid over one or two dimensions, as CSV.
    ExportGrid {
        concept: String,
        /// Comma-separated domain names.
        domains: String,
        /// Grid points per axis.
        resolution: usize,
        /// Grid extent per axis as `lo:hi`, comma-separated; defaults to the
        /// concept's bounding box at the cutoff.
        #[arg(long, allow_hyphen_values = true)]
        bounds: Option<String>,
    },
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 1;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => 0,
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn check_flags(cli: &Cli) -> Result<(), CliError> {
    if cli.samples < MIN_MONTE_CARLO_SAMPLES {
        return Err(CliError::Usage(format!(
            "--samples must be at least {MIN_MONTE_CARLO_SAMPLES}, got {}",
            cli.samples
        )));
    }
    if !(cli.cutoff > 0.0 && cli.cutoff < 1.0) {
        return Err(CliError::Usage(format!(
            "--cutoff must lie in (0, 1), got {}",
            cli.cutoff
        )));
    }
    if !(cli.tolerance >= 0.0 && cli.tolerance.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tolerance must be non-negative and finite, got {}",
            cli.tolerance
        )));
    }
    if cli.digits > 17 {
        return Err(CliError::Usage(format!(
            "--digits must be at most 17, got {}",
            cli.digits
        )));
    }
    Ok(())
}

pub fn relation_settings(cli: &Cli) -> RelationSettings {
    RelationSettings {
        oracle: OracleSettings {
            samples: cli.samples,
            seed: cli.seed,
            cutoff: cli.cutoff,
            limits: Limits::default(),
        },
        tolerance: cli.tolerance,
        ..RelationSettings::default()
    }
}

fn load(cli: &Cli) -> Result<Registry, CliError> {
    Ok(match &cli.space {
        Some(path) => Registry::load(path)?,
        None => Registry::parse(FRUIT_SPACE, "fruit_space.json")?,
    })
}

/// Runs the parsed command and returns everything it prints.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    check_flags(cli)?;
    let registry = load(cli)?;
    let settings = relation_settings(cli);
    let exec = Parallel::new(cli.threads)?;
    let (format, digits) = (cli.format, cli.digits);
    let line = |x: f64| format!("{}\n", fixed(x, digits));

    Ok(match &cli.command {
        Command::Measure { concept } => {
            let m = registry.get(concept)?.measure()?;
            let rec = [Record::new()
                .with("concept", concept.as_str())
                .with("measure", m)];
            render(format, digits, &rec, || line(m))
        }
        Command::Subsethood { s1, s2 } | Command::Implication { s1, s2 } => {
            let (a, b) = (registry.get(s1)?, registry.get(s2)?);
            let sub = if matches!(cli.command, Command::Implication { .. }) {
                implication(a, b, &settings, &exec)?
            } else {
                subsethood(a, b, &settings, &exec)?
            };
            let rec = [subsethood_record(s1, s2, &sub)];
            render(format, digits, &rec, || line(sub.value))
        }
        Command::Similarity { s1, s2 } => {
            let sim = concept_similarity(registry.get(s1)?, registry.get(s2)?)?;
            let rec = [Record::new()
                .with("s1", s1.as_str())
                .with("s2", s2.as_str())
                .with("similarity", sim)];
            render(format, digits, &rec, || line(sim))
        }
        Command::Between { s1, s2, s3 } => {
            let b = concept_between(
                registry.get(s1)?,
                registry.get(s2)?,
                registry.get(s3)?,
                cli.tolerance,
            )?;
            let rec = [Record::new()
                .with("s1", s1.as_str())
                .with("s2", s2.as_str())
                .with("s3", s3.as_str())
                .with("between", b)];
            render(format, digits, &rec, || format!("{b}\n"))
        }
        Command::Membership { concept, point } => {
            let c = registry.get(concept)?;
            let x = parse_point(point, registry.space().dimension_count())?;
            let mu = c.membership(&x)?;
            let rec = [Record::new()
                .with("concept", concept.as_str())
                .with("point", point.as_str())
                .with("membership", mu)];
            render(format, digits, &rec, || line(mu))
        }
        Command::AlphaVolume { concept, alpha } => {
            let v =
                concept_alpha_cut_volume(registry.get(concept)?, *alpha, &settings.oracle.limits)?;
            let rec = [Record::new()
                .with("concept", concept.as_str())
                .with("alpha", *alpha)
                .with("volume", v)];
            render(format, digits, &rec, || line(v))
        }
        Command::ReproduceTables => {
            let t = tables::compute(&registry, &settings, &exec)?;
            let checks = tables::checks(&t);
            render(format, digits, &tables::records(&checks), || {
                tables::render(&t, &checks, digits)
            })
        }
        Command::OracleCheck { concept } => {
            oracle_check(&registry, concept, &settings.oracle, &exec, format, digits)?
        }
        Command::ExportGrid {
            concept,
            domains,
            resolution,
            bounds,
        } => export_grid(
            &registry,
            concept,
            domains,
            *resolution,
            bounds.as_deref(),
            cli.cutoff,
            format,
            digits,
        )?,
    })
}

fn method_name(m: &OverlapMethod) -> &'static str {
    match m {
        OverlapMethod::FirstInSecond => "first-in-second",
        OverlapMethod::SecondInFirst => "second-in-first",
        OverlapMethod::Oracle { .. } => "oracle",
    }
}

fn subsethood_record(s1: &str, s2: &str, sub: &Subsethood) -> Record {
    let (se, samples) = match sub.method {
        OverlapMethod::Oracle {
            standard_error,
            samples,
        } => (Cell::Num(standard_error), Cell::from(samples)),
        _ => (Cell::Empty, Cell::Empty),
    };
    Record::new()
        .with("s1", s1)
        .with("s2", s2)
        .with("value", sub.value)
        .with("numerator", sub.numerator)
        .with("denominator", sub.denominator)
        .with("method", method_name(&sub.method))
        .with("numerator_standard_error", se)
        .with("samples", samples)
}

fn parse_point(text: &str, n: usize) -> Result<Point, CliError> {
    let coords = text
        .split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                CliError::Usage(format!(
                    "invalid coordinate `{}` in point `{text}`",
                    s.trim()
                ))
            })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if coords.len() != n {
        return Err(CliError::Usage(format!(
            "point `{text}` has {} coordinates, the space has {n} dimensions",
            coords.len()
        )));
    }
    Ok(Point::new(coords))
}

fn oracle_check(
    registry: &Registry,
    name: &str,
    settings: &OracleSettings,
    exec: &Parallel,
    format: Format,
    digits: usize,
) -> Result<String, CliError> {
    let r = discrepancy_report(registry.get(name)?, settings, exec)?;
    let regime = match r.regime {
        Regime::Exact => "exact",
        Regime::Diagnostic => "diagnostic",
    };
    let within = r.sigma_distance() <= 3.0;
    let rec = [Record::new()
        .with("concept", name)
        .with("closed_form", r.closed_form)
        .with("estimate", r.estimate.value)
        .with("standard_error", r.estimate.standard_error)
        .with("truncated_mass_bound", r.estimate.truncated_mass_bound)
        .with("absolute_gap", r.absolute_gap())
        .with("relative_gap", r.relative_gap())
        .with("sigma_distance", r.sigma_distance())
        .with("samples", r.estimate.samples)
        .with("regime", regime)
        .with(
            "within_3_sigma",
            match r.regime {
                Regime::Exact => Cell::Bool(within),
                Regime::Diagnostic => Cell::Empty,
            },
        )];
    Ok(render(format, digits, &rec, || {
        let f = |x: f64| fixed(x, digits);
        let verdict = match r.regime {
            Regime::Exact => format!(
                "exact regime (single cuboid): {} 3 standard errors",
                if within { "within" } else { "NOT within" }
            ),
            Regime::Diagnostic => {
                "diagnostic regime (several cuboids): gap reported, not judged".into()
            }
        };
        [
            format!("concept: {name}"),
            format!("closed form: {}", f(r.closed_form)),
            format!("estimate: {}", f(r.estimate.value)),
            format!("standard error: {}", f(r.estimate.standard_error)),
            format!(
                "truncated mass bound: {}",
                f(r.estimate.truncated_mass_bound)
            ),
            format!("absolute gap: {}", f(r.absolute_gap())),
            format!("relative gap: {}", f(r.relative_gap())),
            format!("sigma distance: {}", fixed(r.sigma_distance(), 2)),
            format!("samples: {}", r.estimate.samples),
            verdict,
        ]
        .map(|l| l + "\n")
        .concat()
    }))
}

fn parse_bounds(text: &str, axes: usize) -> Result<Vec<(f64, f64)>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "invalid --bounds `{text}`, expected lo:hi per axis"
        ))
    };
    let parsed = text
        .split(',')
        .map(|part| {
            let (lo, hi) = part.split_once(':').ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            if lo.is_finite() && hi.is_finite() && lo < hi {
                Ok((lo, hi))
            } else {
                Err(bad())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.len() != axes {
        return Err(CliError::Usage(format!(
            "--bounds gives {} axes, the grid has {axes}",
            parsed.len()
        )));
    }
    Ok(parsed)
}

#[allow(clippy::too_many_arguments)]
fn export_grid(
    registry: &Registry,
    name: &str,
    domains: &str,
    resolution: usize,
    bounds: Option<&str>,
    cutoff: f64,
    format: Format,
    digits: usize,
) -> Result<String, CliError> {
    let concept = registry.get(name)?;
    let keep = registry.domain_set(domains)?;
    if !keep.is_subset(concept.domains()) {
        return Err(CliError::Validation(format!(
            "concept `{name}` is not defined on all of `{domains}`"
        )));
    }
    let space = registry.space();
    let dims = space.dimensions_in(&keep);
    if dims.len() > 2 {
        return Err(CliError::Usage(format!(
            "export-grid takes one or two dimensions, `{domains}` has {}",
            dims.len()
        )));
    }
    if resolution < 2 {
        return Err(CliError::Usage(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let projected: Concept = concept.project(&keep)?;
    let extent = match bounds {
        Some(text) => parse_bounds(text, dims.len())?,
        None => {
            let region = bounding_box_for(&[&projected], cutoff, &Limits::default())?.region;
            region.lower.into_iter().zip(region.upper).collect()
        }
    };
    let axis = |k: usize, j: usize| {
        let (lo, hi) = extent[k];
        lo + (hi - lo) * j as f64 / (resolution - 1) as f64
    };

    let mut records = Vec::with_capacity(resolution.pow(dims.len() as u32));
    let mut x = Point::undefined(space);
    let inner = if dims.len() == 2 { resolution } else { 1 };
    for i in 0..resolution {
        for j in 0..inner {
            x.coords_mut()[dims[0]] = axis(0, i);
            let mut rec = Record::new().with("coord1", axis(0, i));
            if dims.len() == 2 {
                x.coords_mut()[dims[1]] = axis(1, j);
                rec = rec.with("coord2", axis(1, j));
            }
            records.push(rec.with("membership", projected.membership(&x)?));
        }
    }
    Ok(match format {
        Format::JsonLines => crate::output::json_lines(&records, digits),
        Format::Text | Format::Csv => crate::output::csv(&records, digits),
    })
}
