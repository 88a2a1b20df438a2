//! Run configuration and its layering: built-in defaults, then a named
//! preset, then a `key = value` config file, then command-line flags.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use entlab_core::analytic::default_kmax;

use crate::CliError;

pub const THREADS_ENV: &str = "ENTLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Vacuum cavities: closed form, brute force and all pairwise concurrences.
    Vacuum,
    /// Coherent fields: exact truncated-Fock concurrence.
    Coherent,
    /// Saddle-point formulas alone.
    Analytic,
    /// Exact and analytic concurrence on one grid.
    Compare,
    /// Revival envelope heights per revival index.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BellKind {
    /// (|eg⟩ + |ge⟩)/√2.
    PsiPlus,
    /// cos(bell_angle)|ee⟩ + sin(bell_angle)|gg⟩.
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// C_AB and C_ab for bell angles π/4, π/6 and π/12 over τ ∈ [0, 2π].
    FigEsd,
    /// Compare run, α_c = 10, τ ∈ [0, 140], 4000 steps.
    #[value(name = "fig-revivals-10")]
    FigRevivals10,
    /// Compare run, α_c = 10, τ within 8 of the first revival center.
    #[value(name = "fig-revival-detail-10")]
    FigRevivalDetail10,
    /// Coherent run, α_c = 5 unless set, τ within 8 of 2πα_c.
    #[value(name = "fig-revival-detail-5-6")]
    FigRevivalDetail56,
}

impl Preset {
    fn command(self) -> Command {
        match self {
            Preset::FigEsd => Command::Vacuum,
            Preset::FigRevivals10 | Preset::FigRevivalDetail10 => Command::Compare,
            Preset::FigRevivalDetail56 => Command::Coherent,
        }
    }

    fn layer(self) -> Layer {
        match self {
            Preset::FigEsd => Layer {
                tau_min: Some(0.0),
                tau_max: Some(2.0 * PI),
                steps: Some(1000),
                ..Layer::default()
            },
            Preset::FigRevivals10 => Layer {
                coherent_amp: Some(10.0),
                tau_min: Some(0.0),
                tau_max: Some(140.0),
                steps: Some(4000),
                ..Layer::default()
            },
            Preset::FigRevivalDetail10 => Layer {
                coherent_amp: Some(10.0),
                tau_min: Some(20.0 * PI - 8.0),
                tau_max: Some(20.0 * PI + 8.0),
                steps: Some(1600),
                ..Layer::default()
            },
            Preset::FigRevivalDetail56 => Layer {
                coherent_amp: Some(5.0),
                steps: Some(1600),
                ..Layer::default()
            },
        }
    }
}

/// Command line of `entlab`.
#[derive(Debug, Parser)]
#[command(name = "entlab", version, about = "Two-atom Jaynes-Cummings entanglement sweeps")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Figure-reproduction preset; must match the command.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Plain-text `key = value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub values: Flags,
}

/// Every flag is optional here so the layers can be merged; defaults are
/// listed in each help line.
#[derive(Debug, Default, clap::Args)]
pub struct Flags {
    /// Vacuum Bell angle in radians; accepts forms like `pi/6` [default: pi/4].
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub bell_angle: Option<f64>,
    /// Two-atom state for the coherent engine [default: psi-plus].
    #[arg(long, value_enum)]
    pub bell_state: Option<BellKind>,
    /// Real coherent amplitude α_c, n̄ = α_c² [default: 10].
    #[arg(long)]
    pub coherent_amp: Option<f64>,
    /// Coupling g; τ = g·t [default: 1].
    #[arg(long)]
    pub g: Option<f64>,
    /// Detuning Δ, vacuum engine only [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub detuning: Option<f64>,
    /// Grid start in τ [default: 0].
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub tau_min: Option<f64>,
    /// Grid end in τ [default: 2π for vacuum, 140 otherwise].
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub tau_max: Option<f64>,
    /// Grid intervals; the grid has steps + 1 points [default: 1000 for
    /// vacuum, else enough for 12 points per period π/(2α_c)].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Photon-number cutoff N, bypassing the tail rule.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Poisson tail mass allowed beyond the cutoff [default: 1e-12].
    #[arg(long)]
    pub tail_tolerance: Option<f64>,
    /// Largest revival index [default: ceil(tau_max/(2π α_c)) + 1].
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Output file [default: standard output].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads, or `auto` [default: auto]. ENTLAB_THREADS overrides.
    #[arg(long)]
    pub threads: Option<Threads>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "auto" | "0" => Ok(Threads::Auto),
            t => t
                .parse::<usize>()
                .map(Threads::Fixed)
                .map_err(|_| format!("expected a thread count or `auto`, got `{t}`")),
        }
    }
}

/// A number, or `[c*]pi[/d]` with optional sign.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("expected a number or a form like 2*pi/3, got `{s}`");
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let num = num.trim();
    let coef = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c.trim_end_matches('*').trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    Ok(sign * coef * PI / den)
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Layer {
    preset: Option<Preset>,
    bell_angle: Option<f64>,
    bell_state: Option<BellKind>,
    coherent_amp: Option<f64>,
    g: Option<f64>,
    detuning: Option<f64>,
    tau_min: Option<f64>,
    tau_max: Option<f64>,
    steps: Option<usize>,
    cutoff: Option<usize>,
    tail_tolerance: Option<f64>,
    kmax: Option<usize>,
    output: Option<PathBuf>,
    format: Option<Format>,
    threads: Option<Threads>,
}

impl Layer {
    /// Fields set in `self` win over `lower`.
    fn over(self, lower: Layer) -> Layer {
        Layer {
            preset: self.preset.or(lower.preset),
            bell_angle: self.bell_angle.or(lower.bell_angle),
            bell_state: self.bell_state.or(lower.bell_state),
            coherent_amp: self.coherent_amp.or(lower.coherent_amp),
            g: self.g.or(lower.g),
            detuning: self.detuning.or(lower.detuning),
            tau_min: self.tau_min.or(lower.tau_min),
            tau_max: self.tau_max.or(lower.tau_max),
            steps: self.steps.or(lower.steps),
            cutoff: self.cutoff.or(lower.cutoff),
            tail_tolerance: self.tail_tolerance.or(lower.tail_tolerance),
            kmax: self.kmax.or(lower.kmax),
            output: self.output.or(lower.output),
            format: self.format.or(lower.format),
            threads: self.threads.or(lower.threads),
        }
    }

    fn from_flags(f: Flags, preset: Option<Preset>) -> Layer {
        Layer {
            preset,
            bell_angle: f.bell_angle,
            bell_state: f.bell_state,
            coherent_amp: f.coherent_amp,
            g: f.g,
            detuning: f.detuning,
            tau_min: f.tau_min,
            tau_max: f.tau_max,
            steps: f.steps,
            cutoff: f.cutoff,
            tail_tolerance: f.tail_tolerance,
            kmax: f.kmax,
            output: f.output,
            format: f.format,
            threads: f.threads,
        }
    }
}

fn value_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T, CliError> {
    T::from_str(v, true).map_err(|e| CliError::Config(format!("{key}: {e}")))
}

fn number<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse::<T>()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse `{v}`")))
}

/// Parses a config file: one `key = value` per line, `#` starts a comment.
/// Keys are the long flag names with `-` or `_`.
fn parse_config_text(text: &str) -> Result<Layer, CliError> {
    let mut l = Layer::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        let angle = |v: &str| parse_angle(v).map_err(|e| CliError::Config(format!("{key}: {e}")));
        match key.as_str() {
            "preset" => l.preset = Some(value_enum(&key, v)?),
            "bell_angle" => l.bell_angle = Some(angle(v)?),
            "bell_state" => l.bell_state = Some(value_enum(&key, v)?),
            "coherent_amp" => l.coherent_amp = Some(number(&key, v)?),
            "g" => l.g = Some(number(&key, v)?),
            "detuning" => l.detuning = Some(number(&key, v)?),
            "tau_min" => l.tau_min = Some(angle(v)?),
            "tau_max" => l.tau_max = Some(angle(v)?),
            "steps" => l.steps = Some(number(&key, v)?),
            "cutoff" => l.cutoff = Some(number(&key, v)?),
            "tail_tolerance" => l.tail_tolerance = Some(number(&key, v)?),
            "kmax" => l.kmax = Some(number(&key, v)?),
            "output" => l.output = Some(PathBuf::from(v)),
            "format" => l.format = Some(value_enum(&key, v)?),
            "threads" => l.threads = Some(v.parse().map_err(|e: String| CliError::Config(e))?),
            other => return Err(CliError::Config(format!("unknown config key `{other}`"))),
        }
    }
    Ok(l)
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub preset: Option<Preset>,
    pub bell_angle: f64,
    pub bell_state: BellKind,
    pub coherent_amp: f64,
    pub g: f64,
    pub detuning: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub steps: usize,
    pub cutoff_override: Option<usize>,
    pub tail_tolerance: f64,
    pub kmax: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Threads,
}

impl RunConfig {
    /// Built-in defaults for `command`.
    pub fn defaults(command: Command) -> RunConfig {
        Self::build(command, Layer::default(), None).expect("defaults are valid")
    }

    /// Merges the layers. `env_threads` is the value of ENTLAB_THREADS.
    pub fn resolve(cli: Cli, env_threads: Option<&str>) -> Result<RunConfig, CliError> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => Layer::default(),
        };
        let upper = Layer::from_flags(cli.values, cli.preset).over(file);
        Self::build(cli.command, upper, env_threads)
    }

    fn build(command: Command, upper: Layer, env_threads: Option<&str>) -> Result<RunConfig, CliError> {
        let preset = upper.preset;
        if let Some(p) = preset {
            if p.command() != command {
                return Err(CliError::Config(format!(
                    "preset {} runs the {} command",
                    p.to_possible_value().unwrap().get_name(),
                    p.command().to_possible_value().unwrap().get_name()
                )));
            }
        }
        let l = upper.over(preset.map(Preset::layer).unwrap_or_default());

        let coherent_amp = l.coherent_amp.unwrap_or(10.0);
        let (tau_min, tau_max) = match (preset, l.tau_min, l.tau_max) {
            (Some(Preset::FigRevivalDetail56), lo, hi) => {
                let c = 2.0 * PI * coherent_amp;
                (lo.unwrap_or(c - 8.0), hi.unwrap_or(c + 8.0))
            }
            (_, lo, hi) => {
                let default_hi = if command == Command::Vacuum { 2.0 * PI } else { 140.0 };
                (lo.unwrap_or(0.0), hi.unwrap_or(default_hi))
            }
        };
        let steps = match l.steps {
            Some(s) => s,
            None if command == Command::Vacuum => 1000,
            None => {
                // 12 points per fast period π/(2α_c)
                let per = PI / (2.0 * coherent_amp);
                ((12.0 * (tau_max - tau_min) / per).ceil() as usize).max(1000)
            }
        };
        let threads = match env_threads.map(str::trim).filter(|s| !s.is_empty()) {
            Some(v) => v
                .parse::<Threads>()
                .map_err(|e| CliError::Config(format!("{THREADS_ENV}: {e}")))?,
            None => l.threads.unwrap_or(Threads::Auto),
        };
        let cfg = RunConfig {
            command,
            preset,
            bell_angle: l.bell_angle.unwrap_or(FRAC_PI_4),
            bell_state: l.bell_state.unwrap_or(BellKind::PsiPlus),
            coherent_amp,
            g: l.g.unwrap_or(1.0),
            detuning: l.detuning.unwrap_or(0.0),
            tau_min,
            tau_max,
            steps,
            cutoff_override: l.cutoff,
            tail_tolerance: l.tail_tolerance.unwrap_or(1e-12),
            kmax: l.kmax.unwrap_or_else(|| default_kmax(tau_max, coherent_amp)),
            output: l.output,
            format: l.format.unwrap_or(Format::Csv),
            threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        let finite = [self.bell_angle, self.coherent_amp, self.g, self.detuning, self.tau_min, self.tau_max];
        if finite.iter().any(|v| !v.is_finite()) {
            return fail("all numeric settings must be finite".into());
        }
        if self.steps < 2 {
            return fail(format!("steps must be >= 2, got {}", self.steps));
        }
        if !(self.tau_max > 0.0) {
            return fail(format!("tau_max must be > 0, got {}", self.tau_max));
        }
        if !(self.tau_min >= 0.0 && self.tau_min < self.tau_max) {
            return fail(format!("tau_min must lie in [0, tau_max), got {}", self.tau_min));
        }
        if !(self.g > 0.0) {
            return fail(format!("g must be > 0, got {}", self.g));
        }
        if !(self.coherent_amp > 0.0) {
            return fail(format!("coherent_amp must be > 0, got {}", self.coherent_amp));
        }
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1.0) {
            return fail(format!("tail_tolerance must lie in (0, 1), got {}", self.tail_tolerance));
        }
        if self.kmax < 1 {
            return fail("kmax must be >= 1".into());
        }
        if self.cutoff_override == Some(0) {
            return fail("cutoff must be >= 1".into());
        }
        if self.detuning != 0.0 && self.command != Command::Vacuum {
            return fail("only the vacuum engine supports nonzero detuning".into());
        }
        let half_pi = PI / 2.0;
        if self.command == Command::Vacuum && !(self.bell_angle > -half_pi && self.bell_angle <= half_pi) {
            return fail(format!("bell_angle must lie in (-pi/2, pi/2], got {}", self.bell_angle));
        }
        Ok(())
    }

    /// The τ grid: `steps + 1` evenly spaced points from tau_min to tau_max.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.tau_max - self.tau_min;
        (0..=self.steps)
            .map(|i| {
                if i == self.steps {
                    self.tau_max
                } else {
                    self.tau_min + span * i as f64 / self.steps as f64
                }
            })
            .collect()
    }
}
