//! Command-line surface: spectrum, polynomials, wavefunction, verify, 2d
//! and oracle subcommands with reproducible JSON/CSV/table output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
//! A flat key=value config file can predefine any long flag; explicit flags
//! win. Identical invocations produce byte-identical output.

mod discrepancy;
mod output;
mod verify;

pub use discrepancy::{collect as collect_discrepancies, render as render_discrepancies, DiscrepancyEntry};
pub use output::{fmt_f64, json_f64, sig15, validate_document, Doc, Format, SCHEMA_VERSION};
pub use verify::{run_suite, CheckResult, VerifyConfig, CHECK_NAMES};

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::oracle::{self, GridSpec};
use crate::recurrence::{self, RecurrenceSpec};
use crate::separable2d;
use crate::spectra::{self, ForcedParameter, PotentialModel};
use crate::wavefunction::{self, eval_psi, normalizability_report};

#[derive(Debug, Parser)]
#[command(
    name = "qes",
    version,
    about = "Quasi-exactly solvable spectra of 1D and 2D double-well potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// QES eigenvalues and energies of a 1D family at index j
    Spectrum(SpectrumArgs),
    /// Spectral polynomials P_0..P_j and the critical polynomial
    Polynomials(PolyArgs),
    /// Sample one eigenfunction over a grid
    Wavefunction(WaveArgs),
    /// Run the aggregate invariant suite
    Verify(VerifyArgs),
    /// Solve a separable 2D family
    #[command(name = "2d")]
    TwoD(TwoDArgs),
    /// Finite-difference grid oracle: harmonic check or QES contrast table
    Oracle(OracleArgs),
}

#[derive(Debug, Args, Clone, Default)]
struct CommonArgs {
    /// Model family: oned1, oned2, twod1, twod2
    #[arg(long)]
    model: Option<String>,
    /// Quartic coefficient A (twod1 x-part)
    #[arg(short = 'A', long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Family parameter B
    #[arg(short = 'B', long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Family parameter C
    #[arg(short = 'C', long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Constant offset of the Burrows-type well
    #[arg(long, allow_negative_numbers = true)]
    v0: Option<f64>,
    /// x-axis quartic coefficient (twod2)
    #[arg(long, allow_negative_numbers = true)]
    a1: Option<f64>,
    /// y-axis quartic coefficient (twod2)
    #[arg(long, allow_negative_numbers = true)]
    a2: Option<f64>,
    /// x-axis quadratic coefficient (twod2)
    #[arg(long, allow_negative_numbers = true)]
    b1: Option<f64>,
    /// y-axis quadratic coefficient (twod2)
    #[arg(long, allow_negative_numbers = true)]
    b2: Option<f64>,
    /// Representation index j
    #[arg(short = 'j', long)]
    j: Option<u32>,
    /// Output format: json, csv or table
    #[arg(long)]
    format: Option<String>,
    /// Write output to this path instead of stdout
    #[arg(long)]
    output: Option<String>,
    /// Flat key=value defaults file; flags override it
    #[arg(long)]
    config: Option<String>,
    /// Dump the derived-versus-tabulated discrepancy log to stderr
    #[arg(long)]
    discrepancy_log: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Real/complex classification tolerance
    #[arg(long)]
    root_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct PolyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Axis for the two-quartic family: x or y
    #[arg(long)]
    axis: Option<String>,
}

#[derive(Debug, Args)]
struct WaveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Level index within the block, ascending in energy
    #[arg(long)]
    level: Option<usize>,
    /// Number of samples
    #[arg(long)]
    samples: Option<usize>,
    /// Left end of the sample interval
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    /// Right end of the sample interval
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Skip a named check (repeatable); names: commutators, tabulated,
    /// eigen-identity, residuals, gauge, separation, assembly2d, oracle
    #[arg(long)]
    skip: Vec<String>,
    /// Residual tolerance for the pointwise checks
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Eigen-identity tolerance
    #[arg(long)]
    eigen_tol: Option<f64>,
    /// Run the checks concurrently
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Args)]
struct TwoDArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Oscillator ladder depth for the quartic-harmonic family
    #[arg(long)]
    kmax: Option<u32>,
    /// x-axis representation index (twod2)
    #[arg(long)]
    jx: Option<u32>,
    /// y-axis representation index (twod2)
    #[arg(long)]
    jy: Option<u32>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Check the harmonic ladder (2n+1)·C instead of a model contrast
    #[arg(long)]
    harmonic: bool,
    /// Grid left end
    #[arg(long, allow_negative_numbers = true)]
    grid_lo: Option<f64>,
    /// Grid right end
    #[arg(long, allow_negative_numbers = true)]
    grid_hi: Option<f64>,
    /// Interior grid points
    #[arg(long)]
    grid_n: Option<usize>,
    /// Number of eigenvalues
    #[arg(long)]
    count: Option<usize>,
}

/// Parse the process arguments, dispatch, and map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Polynomials(args) => cmd_polynomials(args),
        Command::Wavefunction(args) => cmd_wavefunction(args),
        Command::Verify(args) => cmd_verify(args),
        Command::TwoD(args) => cmd_2d(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

/// Flat key=value defaults, lowest precedence.
#[derive(Debug, Default)]
struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&str>) -> Result<Settings> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read config {path}: {e}")))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::invalid(format!("config {path}:{}: expected key=value", lineno + 1))
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Settings { map })
    }

    fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("config key {key}: bad number '{v}'")))
            })
            .transpose()
    }

    fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("config key {key}: bad integer '{v}'")))
            })
            .transpose()
    }

    fn get_u32(&self, key: &str) -> Result<Option<u32>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<u32>()
                    .map_err(|_| Error::invalid(format!("config key {key}: bad index '{v}'")))
            })
            .transpose()
    }

    fn get_str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }
}

/// Everything resolved: flags beat config beats defaults.
struct Resolved {
    settings: Settings,
    common: CommonArgs,
}

impl Resolved {
    fn new(common: CommonArgs) -> Result<Resolved> {
        let settings = Settings::load(common.config.as_deref())?;
        Ok(Resolved { settings, common })
    }

    fn f64_of(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.settings.get_f64(key)?,
        })
    }

    fn required_f64(&self, flag: Option<f64>, key: &str) -> Result<f64> {
        self.f64_of(flag, key)?
            .ok_or_else(|| Error::invalid(format!("missing required parameter {key}")))
    }

    fn j(&self) -> Result<u32> {
        Ok(match self.common.j {
            Some(j) => j,
            None => self
                .settings
                .get_u32("j")?
                .ok_or_else(|| Error::invalid("missing required index j"))?,
        })
    }

    fn format(&self) -> Result<Format> {
        let name = self
            .common
            .format
            .as_deref()
            .or_else(|| self.settings.get_str("format"))
            .unwrap_or("json");
        name.parse()
    }

    fn model(&self) -> Result<PotentialModel> {
        let family = self
            .common
            .model
            .as_deref()
            .or_else(|| self.settings.get_str("model"))
            .ok_or_else(|| Error::invalid("missing --model"))?;
        let model = match family {
            "oned1" => PotentialModel::OneDimI {
                b: self.required_f64(self.common.b, "b")?,
                c: self.required_f64(self.common.c, "c")?,
            },
            "oned2" => PotentialModel::OneDimII {
                v0: self.f64_of(self.common.v0, "v0")?.unwrap_or(0.0),
                b: self.required_f64(self.common.b, "b")?,
                c: self.required_f64(self.common.c, "c")?,
            },
            "twod1" => PotentialModel::TwoDimI {
                a: self.required_f64(self.common.a, "a")?,
                b: self.required_f64(self.common.b, "b")?,
                c: self.required_f64(self.common.c, "c")?,
            },
            "twod2" => PotentialModel::TwoDimII {
                a1: self.required_f64(self.common.a1, "a1")?,
                a2: self.required_f64(self.common.a2, "a2")?,
                b1: self.required_f64(self.common.b1, "b1")?,
                b2: self.required_f64(self.common.b2, "b2")?,
            },
            other => {
                return Err(Error::invalid(format!(
                    "unknown model '{other}' (expected oned1, oned2, twod1, twod2)"
                )))
            }
        };
        model.validate()?;
        Ok(model)
    }

    /// Write the document; also dump the discrepancy log to stderr when the
    /// flag is set, keeping the machine output stream clean.
    fn emit(&self, text: &str) -> Result<i32> {
        if self.common.discrepancy_log {
            eprint!("{}", render_discrepancies(&collect_discrepancies()));
        }
        match self
            .common
            .output
            .as_deref()
            .or_else(|| self.settings.get_str("output"))
        {
            Some(path) => {
                let mut file = std::fs::File::create(path)
                    .map_err(|e| Error::invalid(format!("cannot write {path}: {e}")))?;
                file.write_all(text.as_bytes())
                    .map_err(|e| Error::invalid(format!("cannot write {path}: {e}")))?;
            }
            None => {
                print!("{text}");
            }
        }
        Ok(0)
    }
}

fn params_json(model: &PotentialModel, j: u32) -> Result<Value> {
    let mut doc = serde_json::Map::new();
    match *model {
        PotentialModel::OneDimI { b, c } => {
            doc.insert("b".into(), json_f64(b));
            doc.insert("c".into(), json_f64(c));
        }
        PotentialModel::OneDimII { v0, b, c } => {
            doc.insert("v0".into(), json_f64(v0));
            doc.insert("b".into(), json_f64(b));
            doc.insert("c".into(), json_f64(c));
        }
        PotentialModel::TwoDimI { a, b, c } => {
            doc.insert("a".into(), json_f64(a));
            doc.insert("b".into(), json_f64(b));
            doc.insert("c".into(), json_f64(c));
        }
        PotentialModel::TwoDimII { a1, a2, b1, b2 } => {
            doc.insert("a1".into(), json_f64(a1));
            doc.insert("a2".into(), json_f64(a2));
            doc.insert("b1".into(), json_f64(b1));
            doc.insert("b2".into(), json_f64(b2));
        }
    }
    match spectra::qes_constraint(model, j)? {
        ForcedParameter::Slope(a) => {
            doc.insert("a_forced".into(), json_f64(a));
        }
        ForcedParameter::StateParameter(alpha) => {
            doc.insert("alpha_forced".into(), Value::Number(alpha.into()));
        }
    }
    Ok(Value::Object(doc))
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<i32> {
    let resolved = Resolved::new(args.common.clone())?;
    let model = resolved.model()?;
    if !model.is_one_dimensional() {
        return Err(Error::invalid("spectrum handles 1D families; use the 2d subcommand"));
    }
    let j = resolved.j()?;
    let root_tol = resolved.f64_of(args.root_tol, "root-tol")?.unwrap_or(1e-9);
    let spectrum = spectra::full_spectrum_with_tol(&model, j, root_tol)?;
    let levels = wavefunction::solve_levels(&model, j)?;

    let mut doc = Doc::new("spectrum");
    doc.text("family", model.family_name());
    doc.int("j", i64::from(j));
    doc.set("params", params_json(&model, j)?);
    doc.num("root_tol", root_tol);
    doc.set("eps_roots", output::json_f64_vec(&spectrum.eps_roots));
    doc.set("energies", output::json_f64_vec(&spectrum.energies));
    doc.int("complex_root_count", spectrum.complex_root_count as i64);

    let level_values: Vec<Value> = levels
        .iter()
        .map(|level| {
            let mut m = serde_json::Map::new();
            m.insert("eps".into(), json_f64(level.eps));
            m.insert("energy".into(), json_f64(level.energy));
            m.insert("node_count".into(), Value::Number(level.node_count.into()));
            m.insert("residual_max".into(), json_f64(level.max_residual));
            m.insert(
                "normalizability".into(),
                Value::String(level.normalizable.as_str().into()),
            );
            m.insert(
                "r_coeffs".into(),
                output::json_f64_vec(level.r.coeffs()),
            );
            Value::Object(m)
        })
        .collect();
    doc.set("levels", Value::Array(level_values));

    let gauge = wavefunction::GaugeFactor::for_model(&model, j)?;
    let tails = normalizability_report(&gauge);
    let mut diag = serde_json::Map::new();
    diag.insert(
        "gauge".into(),
        serde_json::json!({
            "g3": json_f64(gauge.g3),
            "g2": json_f64(gauge.g2),
            "g1": json_f64(gauge.g1),
        }),
    );
    diag.insert(
        "tail_classification".into(),
        Value::String(tails.classification.as_str().into()),
    );
    let stationary: Vec<Value> = spectra::stationary_points(&model, j)?
        .iter()
        .map(|p| {
            serde_json::json!({
                "x": json_f64(p.x),
                "kind": match p.kind {
                    spectra::StationaryKind::Minimum => "minimum",
                    spectra::StationaryKind::Maximum => "maximum",
                    spectra::StationaryKind::Inflection => "inflection",
                },
            })
        })
        .collect();
    diag.insert("stationary_points".into(), Value::Array(stationary));
    if let PotentialModel::OneDimI { .. } = model {
        diag.insert(
            "symmetric_well".into(),
            Value::Bool(spectra::symmetry_condition(&model, j)?),
        );
    }
    diag.insert("self_test_max".into(), json_f64(spectrum.self_test_max));
    doc.set("diagnostics", Value::Object(diag));

    let value = doc.finish();
    validate_document(&value)?;
    let text = match resolved.format()? {
        Format::Json => output::render_json(&value),
        Format::Csv => {
            let rows: Vec<Vec<String>> = levels
                .iter()
                .map(|l| {
                    vec![
                        model.family_name().to_string(),
                        j.to_string(),
                        fmt_f64(l.eps),
                        fmt_f64(l.energy),
                        l.node_count.to_string(),
                        fmt_f64(l.max_residual),
                        l.normalizable.as_str().to_string(),
                    ]
                })
                .collect();
            output::render_csv(
                &["family", "j", "eps", "energy", "nodes", "residual_max", "normalizability"],
                &rows,
            )
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = levels
                .iter()
                .map(|l| {
                    vec![
                        fmt_f64(l.eps),
                        fmt_f64(l.energy),
                        l.node_count.to_string(),
                        fmt_f64(l.max_residual),
                        l.normalizable.as_str().to_string(),
                    ]
                })
                .collect();
            output::render_table(&["eps", "energy", "nodes", "residual", "tails"], &rows)
        }
    };
    resolved.emit(&text)
}

fn cmd_polynomials(args: PolyArgs) -> Result<i32> {
    let resolved = Resolved::new(args.common.clone())?;
    let model = resolved.model()?;
    let j = resolved.j()?;
    let axis = args
        .axis
        .as_deref()
        .or_else(|| resolved.settings.get_str("axis"))
        .unwrap_or("x");

    let spec = match (&model, axis) {
        (PotentialModel::TwoDimII { a2, b2, .. }, "y") => {
            RecurrenceSpec::quartic_axis(&model, *a2, *b2, j)?
        }
        (_, "x") => RecurrenceSpec::new(&model, j)?,
        (_, other) => {
            return Err(Error::invalid(format!("unknown axis '{other}' (expected x or y)")))
        }
    };
    let table = recurrence::generate_polynomials(&spec)?;

    let variable = match (&model, axis) {
        (PotentialModel::OneDimI { .. }, _) | (PotentialModel::OneDimII { .. }, _) => "eps",
        (PotentialModel::TwoDimI { .. }, _) => "v = c1 - e0 + e",
        (PotentialModel::TwoDimII { .. }, "y") => "c1",
        (PotentialModel::TwoDimII { .. }, _) => "u = e - e0 - c1",
    };

    let mut doc = Doc::new("polynomials");
    doc.text("family", model.family_name());
    doc.int("j", i64::from(j));
    doc.text("spectral_variable", variable);
    let polys: Vec<Value> = table
        .polys
        .iter()
        .enumerate()
        .map(|(m, p)| {
            serde_json::json!({
                "m": m,
                "coeffs": output::json_f64_vec(p.coeffs()),
            })
        })
        .collect();
    doc.set("polynomials", Value::Array(polys));
    doc.set(
        "critical",
        serde_json::json!({
            "degree": table.critical.degree().unwrap_or(0),
            "coeffs": output::json_f64_vec(table.critical.coeffs()),
        }),
    );

    let comparison = if axis == "x" {
        recurrence::tabulated_critical(&model, j)
    } else {
        None
    };
    let comparison_value = match comparison {
        Some(printed) => {
            let prop = recurrence::proportionality_check(&table.critical, &printed, 1e-10)?;
            serde_json::json!({
                "available": true,
                "proportional": prop.proportional,
                "scale": json_f64(prop.scale),
                "max_defect": json_f64(prop.max_defect),
            })
        }
        None => serde_json::json!({ "available": false }),
    };
    doc.set("tabulated_comparison", comparison_value);

    let value = doc.finish();
    validate_document(&value)?;
    let text = match resolved.format()? {
        Format::Json => output::render_json(&value),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = table
                .polys
                .iter()
                .enumerate()
                .map(|(m, p)| {
                    vec![
                        format!("P{m}"),
                        p.coeffs().iter().map(|&c| fmt_f64(c)).collect::<Vec<_>>().join(" "),
                    ]
                })
                .collect();
            rows.push(vec![
                "critical".to_string(),
                table
                    .critical
                    .coeffs()
                    .iter()
                    .map(|&c| fmt_f64(c))
                    .collect::<Vec<_>>()
                    .join(" "),
            ]);
            output::render_csv(&["polynomial", "coeffs_low_to_high"], &rows)
        }
        Format::Table => {
            let mut rows: Vec<Vec<String>> = table
                .polys
                .iter()
                .enumerate()
                .map(|(m, p)| {
                    vec![
                        format!("P{m}"),
                        p.coeffs().iter().map(|&c| fmt_f64(c)).collect::<Vec<_>>().join("  "),
                    ]
                })
                .collect();
            rows.push(vec![
                "critical".to_string(),
                table
                    .critical
                    .coeffs()
                    .iter()
                    .map(|&c| fmt_f64(c))
                    .collect::<Vec<_>>()
                    .join("  "),
            ]);
            output::render_table(&["name", "coefficients (constant first)"], &rows)
        }
    };
    resolved.emit(&text)
}

fn cmd_wavefunction(args: WaveArgs) -> Result<i32> {
    let resolved = Resolved::new(args.common.clone())?;
    let model = resolved.model()?;
    if !model.is_one_dimensional() {
        return Err(Error::invalid("wavefunction sampling handles 1D families"));
    }
    let j = resolved.j()?;
    let level_index = match args.level {
        Some(i) => i,
        None => resolved.settings.get_usize("level")?.unwrap_or(0),
    };
    let n = match args.samples {
        Some(n) => n,
        None => resolved.settings.get_usize("samples")?.unwrap_or(201),
    };
    let lo = resolved.f64_of(args.lo, "lo")?.unwrap_or(-3.0);
    let hi = resolved.f64_of(args.hi, "hi")?.unwrap_or(3.0);
    if !(lo < hi) {
        return Err(Error::invalid("sample interval requires lo < hi"));
    }

    let levels = wavefunction::solve_levels(&model, j)?;
    let level = levels
        .get(level_index)
        .ok_or_else(|| {
            Error::invalid(format!(
                "level {level_index} out of range: block has {} levels",
                levels.len()
            ))
        })?
        .clone();

    let xs = wavefunction::uniform_samples(lo, hi, n);
    let samples: Vec<_> = xs.iter().map(|&x| eval_psi(&level, x)).collect();

    let header = ["x", "r", "exponent", "psi", "saturated"];
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|s| {
            vec![
                fmt_f64(s.x),
                fmt_f64(s.r_value),
                fmt_f64(s.exponent),
                fmt_f64(s.psi),
                s.saturated.to_string(),
            ]
        })
        .collect();

    let text = match resolved.format()? {
        Format::Json => {
            let mut doc = Doc::new("wavefunction");
            doc.text("family", model.family_name());
            doc.int("j", i64::from(j));
            doc.set(
                "level",
                serde_json::json!({
                    "index": level_index,
                    "eps": json_f64(level.eps),
                    "energy": json_f64(level.energy),
                    "node_count": level.node_count,
                    "normalizability": level.normalizable.as_str(),
                }),
            );
            let sample_values: Vec<Value> = samples
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "x": json_f64(s.x),
                        "r": json_f64(s.r_value),
                        "exponent": json_f64(s.exponent),
                        "psi": json_f64(s.psi),
                        "saturated": s.saturated,
                    })
                })
                .collect();
            doc.set("samples", Value::Array(sample_values));
            let value = doc.finish();
            validate_document(&value)?;
            output::render_json(&value)
        }
        Format::Csv => output::render_csv(&header, &rows),
        Format::Table => output::render_table(&header, &rows),
    };
    resolved.emit(&text)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let resolved = Resolved::new(args.common.clone())?;
    let config = VerifyConfig {
        residual_tol: resolved
            .f64_of(args.residual_tol, "residual-tol")?
            .unwrap_or(1e-8),
        eigen_tol: resolved.f64_of(args.eigen_tol, "eigen-tol")?.unwrap_or(1e-10),
        parallel: args.parallel || resolved.settings.get_str("parallel") == Some("true"),
    };
    let mut skip = args.skip;
    if let Some(from_config) = resolved.settings.get_str("skip") {
        skip.extend(from_config.split(',').map(|s| s.trim().to_string()));
    }
    for name in &skip {
        if !CHECK_NAMES.contains(&name.as_str()) {
            return Err(Error::invalid(format!("unknown check '{name}' in --skip")));
        }
    }
    let results = run_suite(&config, &skip);
    let all_passed = results.iter().all(|r| r.passed);

    let text = match resolved.format()? {
        Format::Json => {
            let mut doc = Doc::new("verify");
            let checks: Vec<Value> = results
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                    })
                })
                .collect();
            doc.set("checks", Value::Array(checks));
            doc.set("passed", Value::Bool(all_passed));
            let value = doc.finish();
            validate_document(&value)?;
            output::render_json(&value)
        }
        _ => {
            let mut out = String::new();
            for r in &results {
                out.push_str(&format!(
                    "{} {}: {}\n",
                    if r.passed { "ok  " } else { "FAIL" },
                    r.name,
                    r.detail
                ));
            }
            out.push_str(if all_passed { "all checks ok\n" } else { "FAILURES\n" });
            out
        }
    };
    resolved.emit(&text)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn cmd_2d(args: TwoDArgs) -> Result<i32> {
    let resolved = Resolved::new(args.common.clone())?;
    let model = resolved.model()?;
    let spectrum = match model {
        PotentialModel::TwoDimI { .. } => {
            let j = resolved.j()?;
            let kmax = match args.kmax {
                Some(k) => k,
                None => resolved.settings.get_u32("kmax")?.unwrap_or(5),
            };
            separable2d::solve_2d_model1(&model, j, kmax)?
        }
        PotentialModel::TwoDimII { .. } => {
            let jx = match args.jx {
                Some(j) => j,
                None => resolved
                    .settings
                    .get_u32("jx")?
                    .ok_or_else(|| Error::invalid("missing --jx"))?,
            };
            let jy = match args.jy {
                Some(j) => j,
                None => resolved
                    .settings
                    .get_u32("jy")?
                    .ok_or_else(|| Error::invalid("missing --jy"))?,
            };
            separable2d::solve_2d_model2(&model, jx, jy)?
        }
        _ => return Err(Error::invalid("the 2d solver handles twod1 and twod2")),
    };

    let j_for_params = resolved.common.j.or(args.jx).unwrap_or(0);
    let mut doc = Doc::new("2d");
    doc.text("family", model.family_name());
    doc.set("params", params_json(&model, j_for_params)?);
    doc.num("e0", spectrum.e0);
    let levels: Vec<Value> = spectrum
        .levels
        .iter()
        .map(|l| {
            serde_json::json!({
                "k": l.k,
                "root_index": l.root_index,
                "c1": json_f64(l.c1),
                "e_total": json_f64(l.e_total),
                "e_x": json_f64(l.e_x),
                "e_y": json_f64(l.e_y),
                "r_coeffs": output::json_f64_vec(l.r.coeffs()),
                "q_coeffs": output::json_f64_vec(l.q.coeffs()),
                "residual_x": json_f64(l.residual_x),
                "residual_y": json_f64(l.residual_y),
            })
        })
        .collect();
    doc.set("levels", Value::Array(levels));
    doc.int("complex_root_count", spectrum.complex_root_count as i64);
    doc.int("complex_pairs", (spectrum.complex_root_count / 2) as i64);

    let value = doc.finish();
    validate_document(&value)?;
    let text = match resolved.format()? {
        Format::Json => output::render_json(&value),
        Format::Csv => {
            let rows: Vec<Vec<String>> = spectrum
                .levels
                .iter()
                .map(|l| {
                    vec![
                        l.k.to_string(),
                        l.root_index.to_string(),
                        fmt_f64(l.c1),
                        fmt_f64(l.e_total),
                        fmt_f64(l.residual_x),
                        fmt_f64(l.residual_y),
                    ]
                })
                .collect();
            output::render_csv(&["k", "root", "c1", "e_total", "residual_x", "residual_y"], &rows)
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = spectrum
                .levels
                .iter()
                .map(|l| {
                    vec![
                        l.k.to_string(),
                        l.root_index.to_string(),
                        fmt_f64(l.c1),
                        fmt_f64(l.e_total),
                    ]
                })
                .collect();
            output::render_table(&["k", "root", "c1", "e_total"], &rows)
        }
    };
    resolved.emit(&text)
}

fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let resolved = Resolved::new(args.common.clone())?;
    let grid_lo = resolved.f64_of(args.grid_lo, "grid-lo")?.unwrap_or(-12.0);
    let grid_hi = resolved.f64_of(args.grid_hi, "grid-hi")?.unwrap_or(12.0);
    let grid_n = match args.grid_n {
        Some(n) => n,
        None => resolved.settings.get_usize("grid-n")?.unwrap_or(4000),
    };
    let grid = GridSpec::new(grid_lo, grid_hi, grid_n)?;
    let count = match args.count {
        Some(c) => c,
        None => resolved.settings.get_usize("count")?.unwrap_or(6),
    };

    let mut doc = Doc::new("oracle");
    doc.set(
        "grid",
        serde_json::json!({
            "lo": json_f64(grid.lo),
            "hi": json_f64(grid.hi),
            "n": grid.n,
        }),
    );

    let (rows_json, header, rows_text) = if args.harmonic {
        let c = resolved.f64_of(args.common.c, "c")?.unwrap_or(1.0);
        if !(c > 0.0) {
            return Err(Error::domain("harmonic check requires C > 0"));
        }
        let evs = oracle::refined_eigenvalues(|y| c * c * y * y, &grid, count)?;
        doc.text("mode", "harmonic");
        doc.num("stiffness", c);
        let rows_json: Vec<Value> = evs
            .iter()
            .enumerate()
            .map(|(n, &ev)| {
                let exact = (2 * n + 1) as f64 * c;
                serde_json::json!({
                    "n": n,
                    "eigenvalue": json_f64(ev),
                    "exact": json_f64(exact),
                    "defect": json_f64(ev - exact),
                    "c1_from_quantization": json_f64(2.0 * c * n as f64),
                    "c1_from_oracle": json_f64(ev - c),
                })
            })
            .collect();
        let rows_text: Vec<Vec<String>> = evs
            .iter()
            .enumerate()
            .map(|(n, &ev)| {
                let exact = (2 * n + 1) as f64 * c;
                vec![
                    n.to_string(),
                    fmt_f64(ev),
                    fmt_f64(exact),
                    fmt_f64(ev - exact),
                ]
            })
            .collect();
        (rows_json, vec!["n", "eigenvalue", "exact", "defect"], rows_text)
    } else {
        let model = resolved.model()?;
        let j = resolved.j()?;
        let report = oracle::qes_contrast_report(&model, j, &grid)?;
        doc.text("mode", "contrast");
        doc.text("family", model.family_name());
        doc.int("j", i64::from(j));
        doc.text("tail_diagnosis", report.tail_diagnosis.as_str());
        let rows_json: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "level": r.level_index,
                    "eps": json_f64(r.eps),
                    "qes_energy": json_f64(r.qes_energy),
                    "nearest_grid_eigenvalue": json_f64(r.nearest_grid_eigenvalue),
                    "gap": json_f64(r.gap),
                })
            })
            .collect();
        let rows_text: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.level_index.to_string(),
                    fmt_f64(r.eps),
                    fmt_f64(r.qes_energy),
                    fmt_f64(r.nearest_grid_eigenvalue),
                    fmt_f64(r.gap),
                ]
            })
            .collect();
        (
            rows_json,
            vec!["level", "eps", "qes_energy", "nearest_grid", "gap"],
            rows_text,
        )
    };
    doc.set("rows", Value::Array(rows_json));

    let value = doc.finish();
    validate_document(&value)?;
    let text = match resolved.format()? {
        Format::Json => output::render_json(&value),
        Format::Csv => output::render_csv(&header.iter().map(|s| *s).collect::<Vec<_>>(), &rows_text),
        Format::Table => output::render_table(&header.iter().map(|s| *s).collect::<Vec<_>>(), &rows_text),
    };
    resolved.emit(&text)
}
