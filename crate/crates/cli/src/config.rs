//! Command-line flags, the JSON config file and their merge into a
//! resolved [`RunConfig`].

use biortho::emission::EmissionConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "biortho", version, about = "Biorthogonal relativistic wave mechanics: verification suites and exporters")]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args, Default)]
pub struct Globals {
    /// Samples per axis (even).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Momentum spacing.
    #[arg(long, global = true)]
    pub dk: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Seed for the ChaCha8 generator behind every random state.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent or "-".
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON config file; its keys override the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run invariant suites and write a JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        #[arg(long)]
        all: bool,
    },
    /// Position probability densities of a seeded Klein-Gordon state.
    KgDensity {
        #[arg(long)]
        t: Option<f64>,
        /// Line through the origin instead of the full grid.
        #[arg(long, value_enum)]
        slice: Option<Axis>,
        /// Causality probe of a localized Gaussian instead of a density.
        #[arg(long, value_enum)]
        probe: Option<ProbeMode>,
        /// Number of probe times in the CSV series.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Photon wave function and probability summary of a seeded state.
    PhotonDensity {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum)]
        slice: Option<Axis>,
        #[arg(long, value_enum)]
        epsilon: Option<Sign>,
        #[arg(long, value_enum)]
        helicity: Option<Sign>,
    },
    /// Spontaneous-emission photon number, radial profile or density map.
    Emission {
        #[arg(long)]
        omega0: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum)]
        profile: Option<Profile>,
        /// Number of samples in the profile.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Scalar product of two seeded profiles before and after a boost.
    BoostCheck {
        #[arg(long, allow_hyphen_values = true)]
        rapidity: Option<f64>,
        /// Boost direction as x,y,z.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        axis: Option<Vec<f64>>,
    },
    /// Helicity completeness on the grid and the transverse delta kernel.
    TransverseDelta {
        #[arg(long, value_enum)]
        slice: Option<Axis>,
        /// Tensor component as i,j with indices in 0..3.
        #[arg(long, value_delimiter = ',')]
        component: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Spectral,
    Kg,
    Photon,
    Emission,
    Lorentz,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Spectral, Suite::Kg, Suite::Photon, Suite::Emission, Suite::Lorentz];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectral => "spectral",
            Suite::Kg => "kg",
            Suite::Photon => "photon",
            Suite::Emission => "emission",
            Suite::Lorentz => "lorentz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    PositiveOnly,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Radial,
    Number,
    Map,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Verify,
    KgDensity,
    PhotonDensity,
    Emission,
    BoostCheck,
    TransverseDelta,
}

/// Every setting as an optional value. Filled once from flags and once
/// from the config file; the file wins.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub command: Option<CommandName>,
    pub grid: Option<usize>,
    pub dk: Option<f64>,
    pub mass: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub suite: Option<Vec<Suite>>,
    pub all: Option<bool>,
    pub t: Option<f64>,
    pub slice: Option<Axis>,
    pub probe: Option<ProbeMode>,
    pub epsilon: Option<Sign>,
    pub helicity: Option<Sign>,
    pub profile: Option<Profile>,
    pub samples: Option<usize>,
    pub rapidity: Option<f64>,
    pub axis: Option<[f64; 3]>,
    pub component: Option<[usize; 2]>,
    pub omega0: Option<f64>,
    pub dipole: Option<[[f64; 2]; 3]>,
    pub g0: Option<f64>,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    pub n_radial: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Params { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Params {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let g = cli.globals;
        let mut p = Params {
            grid: g.grid,
            dk: g.dk,
            mass: g.mass,
            seed: g.seed,
            out: g.out,
            format: g.format,
            ..Default::default()
        };
        match cli.command {
            None => {}
            Some(Command::Verify { suite, all }) => {
                p.command = Some(CommandName::Verify);
                p.suite = (!suite.is_empty()).then_some(suite);
                p.all = all.then_some(true);
            }
            Some(Command::KgDensity { t, slice, probe, samples }) => {
                p.command = Some(CommandName::KgDensity);
                (p.t, p.slice, p.probe, p.samples) = (t, slice, probe, samples);
            }
            Some(Command::PhotonDensity { t, slice, epsilon, helicity }) => {
                p.command = Some(CommandName::PhotonDensity);
                (p.t, p.slice, p.epsilon, p.helicity) = (t, slice, epsilon, helicity);
            }
            Some(Command::Emission { omega0, t, profile, samples }) => {
                p.command = Some(CommandName::Emission);
                (p.omega0, p.t, p.profile, p.samples) = (omega0, t, profile, samples);
            }
            Some(Command::BoostCheck { rapidity, axis }) => {
                p.command = Some(CommandName::BoostCheck);
                p.rapidity = rapidity;
                p.axis = axis.map(|v| <[f64; 3]>::try_from(v).map_err(|v| format!("--axis takes x,y,z, got {v:?}"))).transpose()?;
            }
            Some(Command::TransverseDelta { slice, component }) => {
                p.command = Some(CommandName::TransverseDelta);
                p.slice = slice;
                p.component = component
                    .map(|v| <[usize; 2]>::try_from(v).map_err(|v| format!("--component takes i,j, got {v:?}")))
                    .transpose()?;
            }
        }
        Ok(p)
    }

    /// Parse a config file. An empty file or one that sets nothing is
    /// rejected like a missing command.
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        if text.trim().is_empty() {
            return Err(format!("config {} is empty", path.display()));
        }
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        if v.as_object().is_some_and(|m| m.is_empty()) {
            return Err(format!("config {} sets no keys", path.display()));
        }
        serde_json::from_value(v).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn overlay(self, top: Params) -> Params {
        overlay!(
            self, top, command, grid, dk, mass, seed, out, format, suite, all, t, slice, probe, epsilon, helicity,
            profile, samples, rapidity, axis, component, omega0, dipole, g0, w, n_radial, n_theta, n_phi
        )
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandName,
    pub grid: usize,
    pub dk: f64,
    pub mass: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub suites: Vec<Suite>,
    pub t: Option<f64>,
    pub slice: Option<Axis>,
    pub probe: Option<ProbeMode>,
    pub epsilon: Sign,
    pub helicity: Sign,
    pub profile: Profile,
    pub samples: Option<usize>,
    pub rapidity: f64,
    pub axis: [f64; 3],
    pub component: [usize; 2],
    pub emission: EmissionConfig,
}

impl RunConfig {
    pub fn resolve(p: Params) -> Result<Self, String> {
        let command = p.command.ok_or("no command given")?;
        let grid = p.grid.unwrap_or(32);
        if grid < 4 || grid % 2 != 0 {
            return Err(format!("--grid must be even and at least 4, got {grid}"));
        }
        let dk = p.dk.unwrap_or(0.1);
        let mass = p.mass.unwrap_or(1.0);
        if !(dk > 0.0) || !dk.is_finite() {
            return Err(format!("--dk must be positive, got {dk}"));
        }
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(format!("--mass must be non-negative, got {mass}"));
        }
        let suites = if p.all == Some(true) {
            Suite::ALL.to_vec()
        } else {
            let mut s = p.suite.unwrap_or_default();
            s.sort();
            s.dedup();
            s
        };
        if command == CommandName::Verify && suites.is_empty() {
            return Err("verify needs --suite or --all".into());
        }
        if let Some(t) = p.t {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(format!("--t must be a non-negative time, got {t}"));
            }
        }
        let component = p.component.unwrap_or([0, 0]);
        if component.iter().any(|&c| c > 2) {
            return Err(format!("--component indices must lie in 0..3, got {component:?}"));
        }
        let defaults = EmissionConfig::default();
        let emission = EmissionConfig {
            omega0: p.omega0.unwrap_or(defaults.omega0),
            dipole: p.dipole.unwrap_or([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]),
            g0: p.g0.unwrap_or(defaults.g0),
            w: p.w,
            n_radial: p.n_radial,
            n_theta: p.n_theta.unwrap_or(defaults.n_theta),
            n_phi: p.n_phi.unwrap_or(defaults.n_phi),
        };
        if !(emission.omega0 > 0.0) {
            return Err(format!("omega0 must be positive, got {}", emission.omega0));
        }
        Ok(RunConfig {
            command,
            grid,
            dk,
            mass,
            seed: p.seed.unwrap_or(0),
            out: p.out.filter(|o| o.as_os_str() != "-"),
            format: p.format.unwrap_or(if command == CommandName::Verify || command == CommandName::BoostCheck {
                Format::Json
            } else {
                Format::Csv
            }),
            suites,
            t: p.t,
            slice: p.slice,
            probe: p.probe,
            epsilon: p.epsilon.unwrap_or(Sign::Plus),
            helicity: p.helicity.unwrap_or(Sign::Plus),
            profile: p.profile.unwrap_or(Profile::Radial),
            samples: p.samples,
            rapidity: p.rapidity.unwrap_or(0.5),
            axis: p.axis.unwrap_or([0.0, 0.0, 1.0]),
            component,
            emission,
        })
    }
}
