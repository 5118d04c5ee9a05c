//! Command-line surface and the validated job it produces.

use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heattrace::oracles::SpectralConfig;
use heattrace::parametrix::{PotentialSpec, DEFAULT_MAX_DEPTH};

use crate::fixtures::FixtureCase;
use crate::parse::parse_potential;

pub const MAX_K_ENV: &str = "HEATTRACE_MAX_K";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Expand,
    Coeff,
    VerifyHarmonic,
    VerifyPaper,
    VerifyNumeric,
    OracleQuadrature,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::Coeff => "coeff",
            Command::VerifyHarmonic => "verify-harmonic",
            Command::VerifyPaper => "verify-paper",
            Command::VerifyNumeric => "verify-numeric",
            Command::OracleQuadrature => "oracle-quadrature",
        }
    }

    fn has_table(self) -> bool {
        matches!(self, Command::VerifyNumeric | Command::OracleQuadrature)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "heattrace",
    version,
    about = "Small-t heat-trace expansions for radial polynomial potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Trace expansion up to order J, optionally evaluated at --t.
    Expand(JobArgs),
    /// Diagonal parametrix coefficients A_k(r) for k up to --order.
    Coeff(JobArgs),
    /// Exact comparison against the oscillator closed form.
    VerifyHarmonic(JobArgs),
    /// Compare a_j against the published formulas for --case.
    VerifyPaper(JobArgs),
    /// Compare the expansion against the numerical spectrum at --t.
    VerifyNumeric(JobArgs),
    /// Compare radial integrals by quadrature against their series, k up to --order.
    OracleQuadrature(JobArgs),
}

impl CliCommand {
    pub fn split(self) -> (Command, JobArgs) {
        match self {
            CliCommand::Expand(a) => (Command::Expand, a),
            CliCommand::Coeff(a) => (Command::Coeff, a),
            CliCommand::VerifyHarmonic(a) => (Command::VerifyHarmonic, a),
            CliCommand::VerifyPaper(a) => (Command::VerifyPaper, a),
            CliCommand::VerifyNumeric(a) => (Command::VerifyNumeric, a),
            CliCommand::OracleQuadrature(a) => (Command::OracleQuadrature, a),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct JobArgs {
    /// Space dimension n.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Potential such as "1 + 2*r^2 + 3*r^4", or @path to a file holding one.
    #[arg(long)]
    pub potential: Option<String>,
    /// Expansion order J (or highest k for coeff / oracle-quadrature).
    #[arg(long)]
    pub order: Option<usize>,
    /// Comma-separated evaluation times.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Spectral grid intervals m (the oracle also runs at 2m).
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Spectral box radius.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Highest angular channel for the spectral oracle.
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Fixture for verify-paper.
    #[arg(long)]
    pub case: Option<FixtureCase>,
    /// Relative tolerance of the main comparison.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative tolerance of spectral vs closed form (harmonic potentials).
    #[arg(long)]
    pub oracle_tol: Option<f64>,
    /// Require the fitted remainder exponent within this distance of the predicted one.
    #[arg(long)]
    pub exponent_window: Option<f64>,
    /// Highest series index p for oracle-quadrature.
    #[arg(long)]
    pub terms: Option<usize>,
    /// Cap on the parametrix depth.
    #[arg(long, env = MAX_K_ENV)]
    pub max_k: Option<usize>,
}

impl Default for JobArgs {
    /// Same defaults as the command line.
    fn default() -> Self {
        Self {
            dim: 3,
            potential: None,
            order: None,
            t: Vec::new(),
            format: Format::Human,
            grid_n: None,
            rmax: None,
            lmax: None,
            case: None,
            tol: None,
            oracle_tol: None,
            exponent_window: None,
            terms: None,
            max_k: None,
        }
    }
}

impl clap::ValueEnum for FixtureCase {
    fn value_variants<'a>() -> &'a [Self] {
        &FixtureCase::ALL
    }
    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError {
    pub field: &'static str,
    pub message: String,
}

impl UsageError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "--{}: {}", self.field, self.message)
    }
}

impl std::error::Error for UsageError {}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralOverrides {
    pub grid_n: Option<usize>,
    pub rmax: Option<f64>,
    pub lmax: Option<usize>,
}

impl SpectralOverrides {
    pub fn config(&self) -> SpectralConfig {
        let mut cfg = SpectralConfig::default();
        if let Some(g) = self.grid_n {
            cfg.grid = g;
        }
        if self.rmax.is_some() {
            cfg.radius = self.rmax;
        }
        if let Some(l) = self.lmax {
            cfg.l_max = l;
        }
        cfg
    }
}

/// A fully validated job.
#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub dim: usize,
    pub potential: PotentialSpec,
    pub order: usize,
    pub t_values: Vec<f64>,
    pub format: Format,
    pub spectral: SpectralOverrides,
    pub case: Option<FixtureCase>,
    pub tol: f64,
    pub oracle_tol: f64,
    pub exponent_window: Option<f64>,
    pub terms: usize,
    pub max_k: usize,
}

fn read_potential(text: &str) -> Result<String, UsageError> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_owned())
            .map_err(|e| UsageError::new("potential", format!("cannot read '{path}': {e}"))),
        None => Ok(text.to_owned()),
    }
}

fn positive(field: &'static str, x: Option<f64>) -> Result<Option<f64>, UsageError> {
    match x {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(UsageError::new(
            field,
            format!("must be a positive number, got {v}"),
        )),
        _ => Ok(x),
    }
}

impl JobSpec {
    pub fn from_args(command: Command, args: JobArgs) -> Result<Self, UsageError> {
        if args.dim == 0 {
            return Err(UsageError::new("dim", "must be at least 1"));
        }
        if args.format == Format::Csv && !command.has_table() {
            return Err(UsageError::new(
                "format",
                format!(
                    "csv is only available for numeric tables, not for {}",
                    command.name()
                ),
            ));
        }
        if args.case.is_some() && command != Command::VerifyPaper {
            return Err(UsageError::new("case", "only used by verify-paper"));
        }

        let potential = match (&args.potential, command) {
            (Some(text), _) => parse_potential(&read_potential(text)?, args.dim)
                .map_err(|e| UsageError::new("potential", e.to_string()))?,
            (None, Command::VerifyPaper) => {
                let case = args
                    .case
                    .ok_or_else(|| UsageError::new("case", "required by verify-paper"))?;
                case.default_potential()
                    .with_dimension(args.dim)
                    .map_err(|e| UsageError::new("dim", e.to_string()))?
            }
            (None, Command::VerifyHarmonic) => {
                PotentialSpec::harmonic(args.dim, heattrace::exactalg::int(1)).expect("valid")
            }
            (None, _) => return Err(UsageError::new("potential", "required")),
        };

        let default_order = match command {
            Command::VerifyPaper => args.case.map_or(10, FixtureCase::order),
            Command::Coeff | Command::OracleQuadrature => 3,
            _ => 8,
        };
        let order = args.order.unwrap_or(default_order);

        if let Some(&t) = args.t.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(UsageError::new("t", format!("times must be positive, got {t}")));
        }
        let mut t_values = args.t.clone();
        if t_values.is_empty() {
            t_values = match command {
                Command::VerifyNumeric => vec![0.1, 0.05, 0.025],
                Command::OracleQuadrature => vec![0.05],
                _ => Vec::new(),
            };
        }

        match command {
            Command::VerifyPaper => {
                let case = args
                    .case
                    .ok_or_else(|| UsageError::new("case", "required by verify-paper"))?;
                if !case.accepts(&potential) {
                    return Err(UsageError::new(
                        "potential",
                        format!("{potential} on R^{} is not a {case} potential", args.dim),
                    ));
                }
                if order > case.order() {
                    return Err(UsageError::new(
                        "order",
                        format!("{case} has printed formulas only up to {}", case.order()),
                    ));
                }
            }
            Command::VerifyHarmonic if potential.harmonic_coupling().is_none() => {
                return Err(UsageError::new("potential", "verify-harmonic needs V = c*r^2"));
            }
            Command::VerifyNumeric => {
                if args.dim != 1 && args.dim != 3 {
                    return Err(UsageError::new(
                        "dim",
                        "the spectral oracle supports dimensions 1 and 3",
                    ));
                }
                if t_values.len() > 1 && t_values.windows(2).any(|w| w[0] == w[1]) {
                    return Err(UsageError::new("t", "times must be distinct"));
                }
            }
            _ => {}
        }

        let spectral = SpectralOverrides {
            grid_n: args.grid_n,
            rmax: positive("rmax", args.rmax)?,
            lmax: args.lmax,
        };
        if let Some(g) = spectral.grid_n {
            if g < 8 {
                return Err(UsageError::new("grid-n", "must be at least 8"));
            }
        }

        let default_tol = match command {
            Command::VerifyPaper => 1e-10,
            Command::OracleQuadrature => 1e-5,
            _ => 1e-3,
        };
        let tol = positive("tol", args.tol)?.unwrap_or(default_tol);
        let oracle_tol = positive("oracle-tol", args.oracle_tol)?.unwrap_or(1e-6);
        let exponent_window = positive("exponent-window", args.exponent_window)?;
        let max_k = args.max_k.unwrap_or(DEFAULT_MAX_DEPTH);
        if max_k < 2 {
            return Err(UsageError::new("max-k", "must be at least 2"));
        }

        Ok(Self {
            command,
            dim: args.dim,
            potential,
            order,
            t_values,
            format: args.format,
            spectral,
            case: args.case,
            tol,
            oracle_tol,
            exponent_window,
            terms: args.terms.unwrap_or(40),
            max_k,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(potential: &str) -> JobArgs {
        JobArgs {
            potential: Some(potential.into()),
            ..JobArgs::default()
        }
    }

    fn field(command: Command, a: JobArgs) -> &'static str {
        JobSpec::from_args(command, a).unwrap_err().field
    }

    #[test]
    fn defaults_per_command() {
        let j = JobSpec::from_args(Command::VerifyNumeric, args("r^2")).unwrap();
        assert_eq!(j.t_values, [0.1, 0.05, 0.025]);
        assert_eq!((j.order, j.max_k), (8, DEFAULT_MAX_DEPTH));
        let j = JobSpec::from_args(
            Command::VerifyPaper,
            JobArgs {
                case: Some(FixtureCase::Sestic3d),
                ..JobArgs::default()
            },
        )
        .unwrap();
        assert_eq!(j.potential, FixtureCase::Sestic3d.default_potential());
        assert_eq!((j.order, j.tol), (10, 1e-10));
        let j = JobSpec::from_args(Command::VerifyHarmonic, JobArgs::default()).unwrap();
        assert_eq!(
            j.potential.harmonic_coupling(),
            Some(&heattrace::exactalg::int(1))
        );
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field(Command::Expand, JobArgs::default()), "potential");
        assert_eq!(field(Command::Expand, args("r^5")), "potential");
        assert_eq!(
            field(
                Command::Expand,
                JobArgs {
                    dim: 0,
                    ..args("r^2")
                }
            ),
            "dim"
        );
        assert_eq!(
            field(
                Command::Coeff,
                JobArgs {
                    format: Format::Csv,
                    ..args("r^2")
                }
            ),
            "format"
        );
        assert_eq!(
            field(
                Command::Expand,
                JobArgs {
                    t: vec![0.1, -1.0],
                    ..args("r^2")
                }
            ),
            "t"
        );
        assert_eq!(field(Command::VerifyPaper, args("r^2")), "case");
        assert_eq!(
            field(
                Command::Expand,
                JobArgs {
                    case: Some(FixtureCase::Quartic3d),
                    ..args("r^2")
                }
            ),
            "case"
        );
        assert_eq!(field(Command::VerifyHarmonic, args("r^4")), "potential");
        assert_eq!(
            field(
                Command::VerifyNumeric,
                JobArgs {
                    dim: 2,
                    ..args("r^2")
                }
            ),
            "dim"
        );
        assert_eq!(
            field(
                Command::VerifyNumeric,
                JobArgs {
                    rmax: Some(-1.0),
                    ..args("r^2")
                }
            ),
            "rmax"
        );
        assert_eq!(
            field(
                Command::VerifyNumeric,
                JobArgs {
                    grid_n: Some(2),
                    ..args("r^2")
                }
            ),
            "grid-n"
        );
        assert_eq!(
            field(
                Command::Expand,
                JobArgs {
                    max_k: Some(1),
                    ..args("r^2")
                }
            ),
            "max-k"
        );
        let order = JobArgs {
            case: Some(FixtureCase::Harmonic3d),
            order: Some(8),
            ..JobArgs::default()
        };
        assert_eq!(field(Command::VerifyPaper, order), "order");
    }

    #[test]
    fn spectral_overrides() {
        let o = SpectralOverrides {
            grid_n: Some(100),
            rmax: Some(6.0),
            lmax: None,
        };
        let cfg = o.config();
        assert_eq!(
            (cfg.grid, cfg.radius, cfg.l_max),
            (100, Some(6.0), SpectralConfig::default().l_max)
        );
    }
}
