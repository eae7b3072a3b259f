//! Run configuration: a flat `key = value` file, overridden by command-line flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use fermibundle::bohm::Evolution;
use fermibundle::confspace::LatticeBox;
use fermibundle::fock::Statistics;
use fermibundle::potential::Potential;
use fermibundle::PhysicalParams;
use serde::Serialize;

pub const EXPERIMENTS: [&str; 8] = [
    "holonomy-audit",
    "constructions-compare",
    "equivalence",
    "anyon-sweep",
    "d1-boundary",
    "bohm-run",
    "bohm-ensemble",
    "fock-demo",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Everything a run depends on. Serialized into the report as given, after defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: String,
    /// Box side lengths; empty means the experiment's default.
    pub sides: Vec<usize>,
    pub periodic: bool,
    pub spacing: f64,
    pub particles: usize,
    pub statistics: String,
    pub potential: String,
    pub potential_seed: u64,
    pub potential_strength: f64,
    pub potential_range: f64,
    pub potential_omega: f64,
    pub hbar: f64,
    pub mass: f64,
    pub loops: usize,
    pub probes: usize,
    pub beta_count: usize,
    pub n_max: usize,
    pub dim: usize,
    pub evolution: String,
    pub omega: f64,
    pub t_end: f64,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: String::new(),
            sides: Vec::new(),
            periodic: false,
            spacing: 1.0,
            particles: 2,
            statistics: "fermi".into(),
            potential: "onsite_random".into(),
            potential_seed: 17,
            potential_strength: 0.5,
            potential_range: 1.0,
            potential_omega: 0.5,
            hbar: 1.0,
            mass: 1.0,
            loops: 100,
            probes: 5,
            beta_count: 9,
            n_max: 3,
            dim: 1,
            evolution: "free".into(),
            omega: 1.0,
            t_end: 1.0,
            samples: 10_000,
            tol: 1e-9,
            seed: 1,
            out: PathBuf::from("out"),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError(format!("invalid value for {key}: {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError(format!("invalid value for {key}: {value:?}"))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Later keys win.
    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| ConfigError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "experiment" => self.experiment = value.to_string(),
            "sides" => {
                self.sides = value
                    .split(|c: char| c == ',' || c == 'x' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| parse(key, s))
                    .collect::<Result<_, _>>()?
            }
            "periodic" => self.periodic = parse_bool(key, value)?,
            "spacing" => self.spacing = parse(key, value)?,
            "particles" => self.particles = parse(key, value)?,
            "statistics" => self.statistics = value.to_string(),
            "potential" => self.potential = value.to_string(),
            "potential_seed" => self.potential_seed = parse(key, value)?,
            "potential_strength" => self.potential_strength = parse(key, value)?,
            "potential_range" => self.potential_range = parse(key, value)?,
            "potential_omega" => self.potential_omega = parse(key, value)?,
            "hbar" => self.hbar = parse(key, value)?,
            "mass" => self.mass = parse(key, value)?,
            "loops" => self.loops = parse(key, value)?,
            "probes" => self.probes = parse(key, value)?,
            "beta_count" => self.beta_count = parse(key, value)?,
            "n_max" => self.n_max = parse(key, value)?,
            "dim" => self.dim = parse(key, value)?,
            "evolution" => self.evolution = value.to_string(),
            "omega" => self.omega = parse(key, value)?,
            "t_end" => self.t_end = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            _ => return Err(ConfigError(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Fills experiment-dependent defaults and rejects values no experiment accepts.
    pub fn resolve(mut self) -> Result<Self, ConfigError> {
        if self.experiment.is_empty() {
            return Err(ConfigError("no experiment given".into()));
        }
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(ConfigError(format!(
                "unknown experiment {:?}; expected one of {}",
                self.experiment,
                EXPERIMENTS.join(", ")
            )));
        }
        if self.sides.is_empty() {
            self.sides = if self.experiment == "d1-boundary" { vec![6] } else { vec![3, 3] };
        }
        self.statistics()?;
        self.potential()?;
        self.evolution()?;
        Ok(self)
    }

    pub fn statistics(&self) -> Result<Statistics, ConfigError> {
        match self.statistics.as_str() {
            "fermi" => Ok(Statistics::Fermi),
            "bose" => Ok(Statistics::Bose),
            s => Err(ConfigError(format!("statistics must be fermi or bose, got {s:?}"))),
        }
    }

    pub fn potential(&self) -> Result<Potential, ConfigError> {
        match self.potential.as_str() {
            "zero" => Ok(Potential::Zero),
            "onsite_random" => Ok(Potential::OnSiteRandom { seed: self.potential_seed, strength: self.potential_strength }),
            "pairwise" => Ok(Potential::Pairwise { strength: self.potential_strength, range: self.potential_range }),
            "harmonic" => Ok(Potential::Harmonic { omega: self.potential_omega }),
            s => Err(ConfigError(format!(
                "potential must be zero, onsite_random, pairwise or harmonic, got {s:?}"
            ))),
        }
    }

    pub fn evolution(&self) -> Result<Evolution, ConfigError> {
        match self.evolution.as_str() {
            "free" => Ok(Evolution::Free),
            "harmonic" => Ok(Evolution::Harmonic { omega: self.omega }),
            s => Err(ConfigError(format!("evolution must be free or harmonic, got {s:?}"))),
        }
    }

    pub fn params(&self) -> PhysicalParams {
        PhysicalParams { hbar: self.hbar, mass: self.mass, spacing: self.spacing }
    }

    pub fn lattice(&self) -> fermibundle::Result<LatticeBox> {
        LatticeBox::new(self.sides.clone(), vec![self.periodic; self.sides.len()], self.spacing)
    }
}
