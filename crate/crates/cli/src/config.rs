//! Flat `key = value` run configuration. Command-line flags carry the same
//! names as the keys and override the file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use netform::firms::FirmType;
use netform::NUM_PARAMS;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Estimate,
    Mple,
    Gof,
    Counterfactual,
    Stable,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Simulate, Command::Estimate, Command::Mple, Command::Gof, Command::Counterfactual, Command::Stable];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Estimate => "estimate",
            Command::Mple => "mple",
            Command::Gof => "gof",
            Command::Counterfactual => "counterfactual",
            Command::Stable => "stable",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown subcommand `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelChoice {
    Game,
    Metropolis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Entry,
    MinCapital,
}

/// Every recognised key, with a one-line description for `--help`.
pub const KEYS: [(&str, &str); 32] = [
    ("subcommand", "simulate | estimate | mple | gof | counterfactual | stable"),
    ("firms", "firm attribute CSV (id,type,state,capital_musd,age)"),
    ("edges", "edge list CSV (src,dst)"),
    ("out", "output directory"),
    ("seed", "master seed for every stochastic step"),
    ("threads", "worker threads"),
    ("theta", "seven comma-separated parameters alpha0..alpha4,beta,gamma"),
    ("theta_from", "summary.json whose posterior means (or estimates) give theta"),
    ("steps", "simulation length"),
    ("stride", "trace every this many steps"),
    ("kernel", "game | metropolis"),
    ("S", "exchange iterations per chain, burn-in included"),
    ("burn_in", "discarded iterations per chain"),
    ("R", "auxiliary or re-simulation network steps"),
    ("proposal_sd", "seven comma-separated random-walk scales"),
    ("chains", "parallel exchange chains"),
    ("swap_prob", "complement-proposal probability"),
    ("exogenous", "fix beta = gamma = 0"),
    ("adapt", "tune proposals during burn-in"),
    ("start", "seven comma-separated starting values"),
    ("prior_mean", "seven comma-separated prior means"),
    ("prior_sd", "seven comma-separated prior standard deviations"),
    ("mple", "estimate by maximum pseudolikelihood"),
    ("posterior", "draws CSV to sample parameters from"),
    ("m", "number of simulated networks"),
    ("kind", "entry | min_capital"),
    ("entry_count", "number of entrants"),
    ("entry_state", "entrants' state"),
    ("entry_type", "entrants' firm type"),
    ("min_capital_q", "capital quantile below which firms exit"),
    ("stable_limit", "maximum number of stable networks listed"),
    ("config", "configuration file"),
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub subcommand: Option<Command>,
    pub firms: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub theta: Option<[f64; NUM_PARAMS]>,
    pub theta_from: Option<PathBuf>,
    pub steps: Option<u64>,
    pub stride: Option<u64>,
    pub kernel: Option<KernelChoice>,
    pub draws: Option<usize>,
    pub burn_in: Option<usize>,
    pub aux_steps: Option<u64>,
    pub proposal_sd: Option<[f64; NUM_PARAMS]>,
    pub chains: Option<usize>,
    pub swap_prob: Option<f64>,
    pub exogenous: Option<bool>,
    pub adapt: Option<bool>,
    pub start: Option<[f64; NUM_PARAMS]>,
    pub prior_mean: Option<[f64; NUM_PARAMS]>,
    pub prior_sd: Option<[f64; NUM_PARAMS]>,
    pub mple: Option<bool>,
    pub posterior: Option<PathBuf>,
    pub m: Option<usize>,
    pub kind: Option<ScenarioKind>,
    pub entry_count: Option<usize>,
    pub entry_state: Option<String>,
    pub entry_type: Option<FirmType>,
    pub min_capital_q: Option<f64>,
    pub stable_limit: Option<usize>,
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Usage(format!("invalid value for `{key}`: `{value}`"))
}

fn num<V: FromStr>(key: &str, value: &str) -> Result<V, CliError> {
    value.parse().map_err(|_| bad(key, value))
}

fn vector(key: &str, value: &str) -> Result<[f64; NUM_PARAMS], CliError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != NUM_PARAMS {
        return Err(CliError::Usage(format!("`{key}` needs {NUM_PARAMS} comma-separated values, got {}", parts.len())));
    }
    let mut out = [0.0; NUM_PARAMS];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = num(key, p)?;
    }
    Ok(out)
}

fn flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, value)),
    }
}

fn join(v: &[f64; NUM_PARAMS]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut pairs = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", k + 1)))?;
            pairs.insert(key.trim().to_string(), value.trim().to_string());
        }
        let mut cfg = RunConfig::default();
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "subcommand" => self.subcommand = Some(value.parse()?),
            "firms" => self.firms = Some(value.into()),
            "edges" => self.edges = Some(value.into()),
            "out" => self.out = Some(value.into()),
            "seed" => self.seed = Some(num(key, value)?),
            "threads" => self.threads = Some(num(key, value)?),
            "theta" => self.theta = Some(vector(key, value)?),
            "theta_from" => self.theta_from = Some(value.into()),
            "steps" => self.steps = Some(num(key, value)?),
            "stride" => self.stride = Some(num(key, value)?),
            "kernel" => {
                self.kernel = Some(match value {
                    "game" => KernelChoice::Game,
                    "metropolis" => KernelChoice::Metropolis,
                    _ => return Err(bad(key, value)),
                })
            }
            "S" => self.draws = Some(num(key, value)?),
            "burn_in" => self.burn_in = Some(num(key, value)?),
            "R" => self.aux_steps = Some(num(key, value)?),
            "proposal_sd" => self.proposal_sd = Some(vector(key, value)?),
            "chains" => self.chains = Some(num(key, value)?),
            "swap_prob" => self.swap_prob = Some(num(key, value)?),
            "exogenous" => self.exogenous = Some(flag(key, value)?),
            "adapt" => self.adapt = Some(flag(key, value)?),
            "start" => self.start = Some(vector(key, value)?),
            "prior_mean" => self.prior_mean = Some(vector(key, value)?),
            "prior_sd" => self.prior_sd = Some(vector(key, value)?),
            "mple" => self.mple = Some(flag(key, value)?),
            "posterior" => self.posterior = Some(value.into()),
            "m" => self.m = Some(num(key, value)?),
            "kind" => {
                self.kind = Some(match value {
                    "entry" => ScenarioKind::Entry,
                    "min_capital" => ScenarioKind::MinCapital,
                    _ => return Err(bad(key, value)),
                })
            }
            "entry_count" => self.entry_count = Some(num(key, value)?),
            "entry_state" => self.entry_state = Some(value.to_string()),
            "entry_type" => self.entry_type = Some(value.parse().map_err(|_| bad(key, value))?),
            "min_capital_q" => self.min_capital_q = Some(num(key, value)?),
            "stable_limit" => self.stable_limit = Some(num(key, value)?),
            _ => return Err(CliError::Usage(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Keys that are set, in [`KEYS`] order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(out, "{k} = {v}");
            }
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        put("subcommand", self.subcommand.map(|c| c.name().to_string()));
        put("firms", path(&self.firms));
        put("edges", path(&self.edges));
        put("out", path(&self.out));
        put("seed", self.seed.map(|v| v.to_string()));
        put("threads", self.threads.map(|v| v.to_string()));
        put("theta", self.theta.as_ref().map(join));
        put("theta_from", path(&self.theta_from));
        put("steps", self.steps.map(|v| v.to_string()));
        put("stride", self.stride.map(|v| v.to_string()));
        put(
            "kernel",
            self.kernel.map(|k| match k {
                KernelChoice::Game => "game".into(),
                KernelChoice::Metropolis => "metropolis".into(),
            }),
        );
        put("S", self.draws.map(|v| v.to_string()));
        put("burn_in", self.burn_in.map(|v| v.to_string()));
        put("R", self.aux_steps.map(|v| v.to_string()));
        put("proposal_sd", self.proposal_sd.as_ref().map(join));
        put("chains", self.chains.map(|v| v.to_string()));
        put("swap_prob", self.swap_prob.map(|v| v.to_string()));
        put("exogenous", self.exogenous.map(|v| v.to_string()));
        put("adapt", self.adapt.map(|v| v.to_string()));
        put("start", self.start.as_ref().map(join));
        put("prior_mean", self.prior_mean.as_ref().map(join));
        put("prior_sd", self.prior_sd.as_ref().map(join));
        put("mple", self.mple.map(|v| v.to_string()));
        put("posterior", path(&self.posterior));
        put("m", self.m.map(|v| v.to_string()));
        put(
            "kind",
            self.kind.map(|k| match k {
                ScenarioKind::Entry => "entry".into(),
                ScenarioKind::MinCapital => "min_capital".into(),
            }),
        );
        put("entry_count", self.entry_count.map(|v| v.to_string()));
        put("entry_state", self.entry_state.clone());
        put("entry_type", self.entry_type.map(|t| t.label().to_string()));
        put("min_capital_q", self.min_capital_q.map(|v| v.to_string()));
        put("stable_limit", self.stable_limit.map(|v| v.to_string()));
        out
    }
}
