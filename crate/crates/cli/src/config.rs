//! Command-line parsing into validated run configurations.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nelab_core::properties::Sign;
use nelab_core::{format_scalar, parse_scalar, EntireFunction, Field, Scalar, SpaceDesc};

use crate::CliError;

/// One subcommand per property check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Daugavet,
    Omega,
    OmegaGroup,
    FShape,
    Lemma43,
    Tsquare,
    Geom,
    Slice,
    Denting,
    Hull,
    Badproj,
    Dual,
    Spread,
    Scalar,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Daugavet => "daugavet",
            CheckKind::Omega => "omega",
            CheckKind::OmegaGroup => "omega-group",
            CheckKind::FShape => "f-shape",
            CheckKind::Lemma43 => "lemma43",
            CheckKind::Tsquare => "tsquare",
            CheckKind::Geom => "geom",
            CheckKind::Slice => "slice",
            CheckKind::Denting => "denting",
            CheckKind::Hull => "hull",
            CheckKind::Badproj => "badproj",
            CheckKind::Dual => "dual",
            CheckKind::Spread => "spread",
            CheckKind::Scalar => "scalar",
        }
    }

    fn needs_space(self) -> bool {
        self != CheckKind::Scalar
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Check-specific parameters; unset ones take per-check defaults at run time.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckParams {
    pub omega: Option<Scalar>,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub g: Option<String>,
    pub g0: Option<Scalar>,
    pub lambda: Option<Scalar>,
    pub eps: Option<f64>,
    pub eps_grid: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub sign: Option<Sign>,
    pub t: Option<Vec<f64>>,
    pub x: Option<Vec<Scalar>>,
    pub f: Option<Vec<Scalar>>,
}

/// A validated `check` invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub check: CheckKind,
    pub space: Option<String>,
    pub field: Field,
    pub params: CheckParams,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Worker threads; 0 lets the pool pick.
    pub parallelism: usize,
}

/// A validated `suite` invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub parallelism: usize,
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Invocation {
    Check(RunConfig),
    Suite(SuiteConfig),
}

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const SUITE_SAMPLES: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "nelab", version, about = "Check norm identities for rank-one perturbations of the identity on finite-dimensional spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run one property check and emit its report.
    Check(CheckArgs),
    /// Run the fixed battery of checks with expected verdicts.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for all sampling (default 42, or NELAB_SEED).
    #[arg(long, env = "NELAB_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    parallelism: usize,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    check: CheckKind,
    /// Space descriptor, e.g. linf(3) or sum2(l1(2),linf(2)).
    #[arg(long)]
    space: Option<String>,
    #[arg(long, default_value = "real")]
    field: String,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Entire function: poly:a0,a1,..., exp, sin, cos, sinh or cosh.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<f64>,
    /// Comma-separated eps values for the denting check.
    #[arg(long, allow_hyphen_values = true)]
    eps_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Sign constraint for tsquare: + or - (also plus, minus).
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    /// Comma-separated t values for the fixtures.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Comma-separated coordinates of a unit vector.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Comma-separated coordinates of a unit functional.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, default_value_t = SUITE_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn scalar_arg(name: &str, v: Option<String>) -> Result<Option<Scalar>, CliError> {
    v.map(|s| parse_scalar(&s).map_err(|e| usage(format!("--{name}: {e}")))).transpose()
}

fn list_arg<T>(
    name: &str,
    v: Option<String>,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<Vec<T>>, CliError> {
    v.map(|s| s.split(',').map(|p| parse(p.trim()).map_err(|e| usage(format!("--{name}: {e}")))).collect()).transpose()
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn check_unimodular(name: &str, z: Scalar) -> Result<(), CliError> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(usage(format!("--{name} {} is not unimodular (|{name}| = {})", format_scalar(z), z.norm())));
    }
    Ok(())
}

fn finish_common(c: &Common) -> Result<(u64, f64), CliError> {
    if !(c.tolerance.is_finite() && c.tolerance > 0.0) {
        return Err(usage(format!("--tolerance must be positive (got {})", c.tolerance)));
    }
    Ok((c.seed.unwrap_or(DEFAULT_SEED), c.tolerance))
}

impl CheckArgs {
    fn validate(self) -> Result<RunConfig, CliError> {
        let field: Field = self.field.parse().map_err(|e| usage(format!("--field: {e}")))?;
        let (seed, tolerance) = finish_common(&self.common)?;
        let space = match (&self.space, self.check.needs_space()) {
            (Some(s), _) => {
                SpaceDesc::parse(s, field).map_err(|e| usage(format!("--space {s}: {e}")))?;
                Some(s.clone())
            }
            (None, true) => return Err(usage(format!("check {} needs --space", self.check.name()))),
            (None, false) => None,
        };
        let params = CheckParams {
            omega: scalar_arg("omega", self.omega)?,
            a: scalar_arg("a", self.a)?,
            b: scalar_arg("b", self.b)?,
            g: self.g,
            g0: scalar_arg("g0", self.g0)?,
            lambda: scalar_arg("lambda", self.lambda)?,
            eps: self.eps,
            eps_grid: list_arg("eps-grid", self.eps_grid, parse_f64)?,
            alpha: self.alpha,
            sign: self.sign.map(|s| s.parse::<Sign>().map_err(|e| usage(format!("--sign: {e}")))).transpose()?,
            t: list_arg("t", self.t, parse_f64)?,
            x: list_arg("x", self.x, |s| parse_scalar(s).map_err(|e| e.to_string()))?,
            f: list_arg("f", self.f, |s| parse_scalar(s).map_err(|e| e.to_string()))?,
        };
        if let Some(w) = params.omega {
            check_unimodular("omega", w)?;
        }
        if let Some(g) = &params.g {
            EntireFunction::parse(g).map_err(|e| usage(format!("--g: {e}")))?;
        }
        for (name, z) in
            [("omega", params.omega), ("a", params.a), ("b", params.b), ("g0", params.g0), ("lambda", params.lambda)]
        {
            if let Some(z) = z {
                if self.check.needs_space() {
                    field.check_scalar(z).map_err(|e| usage(format!("--{name}: {e}")))?;
                }
            }
        }
        Ok(RunConfig {
            check: self.check,
            space,
            field,
            params,
            samples: self.samples,
            seed,
            tolerance,
            output: self.common.output,
            format: self.common.format,
            parallelism: self.common.parallelism,
        })
    }
}

/// Parse a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    match cli.command {
        Command::Check(args) => Ok(Invocation::Check(args.validate()?)),
        Command::Suite(args) => {
            let (seed, tolerance) = finish_common(&args.common)?;
            Ok(Invocation::Suite(SuiteConfig {
                samples: args.samples,
                seed,
                tolerance,
                output: args.common.output,
                format: args.common.format,
                parallelism: args.common.parallelism,
            }))
        }
    }
}

fn join<T>(v: &[T], f: impl Fn(&T) -> String) -> String {
    v.iter().map(f).collect::<Vec<_>>().join(",")
}

fn f64_text(v: f64) -> String {
    format!("{v:?}")
}

impl RunConfig {
    /// Arguments that parse back to this configuration, program name excluded.
    pub fn render(&self) -> Vec<String> {
        let mut out = vec!["check".to_string(), self.check.name().to_string()];
        let mut push = |k: &str, v: String| {
            out.push(format!("--{k}"));
            out.push(v);
        };
        if let Some(s) = &self.space {
            push("space", s.clone());
        }
        push("field", self.field.to_string());
        let p = &self.params;
        for (k, z) in [("omega", p.omega), ("a", p.a), ("b", p.b), ("g0", p.g0), ("lambda", p.lambda)] {
            if let Some(z) = z {
                push(k, format_scalar(z));
            }
        }
        if let Some(g) = &p.g {
            push("g", g.clone());
        }
        if let Some(e) = p.eps {
            push("eps", f64_text(e));
        }
        if let Some(v) = &p.eps_grid {
            push("eps-grid", join(v, |e| f64_text(*e)));
        }
        if let Some(a) = p.alpha {
            push("alpha", f64_text(a));
        }
        if let Some(s) = p.sign {
            push("sign", s.symbol().to_string());
        }
        if let Some(v) = &p.t {
            push("t", join(v, |e| f64_text(*e)));
        }
        if let Some(v) = &p.x {
            push("x", join(v, |z| format_scalar(*z)));
        }
        if let Some(v) = &p.f {
            push("f", join(v, |z| format_scalar(*z)));
        }
        push("samples", self.samples.to_string());
        push("seed", self.seed.to_string());
        push("tolerance", f64_text(self.tolerance));
        if let Some(o) = &self.output {
            push("output", o.display().to_string());
        }
        push("format", self.format.name().to_string());
        push("parallelism", self.parallelism.to_string());
        out
    }
}
