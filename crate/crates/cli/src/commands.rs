use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use netform::counterfactual::{apply_scenario, run_counterfactual, summarize, NetworkSummary, Scenario, DEGREE_CURVE_PROBS, METRICS};
use netform::dynamics::{default_steps, find_stable, simulate_with, Kernel, MeetingProcess, DEFAULT_SWAP_PROB};
use netform::firms::{format_edges, format_firms, load_edges, load_firms, FirmType};
use netform::gof::{gof_run, Family};
use netform::inference::{exchange_sample, mple_masked, ChainDraws, ExchangeConfig, PosteriorSample};
use netform::rng::stream;
use netform::{Error, Firms, Network, ParamMask, Params, Posterior, Prior, NUM_PARAMS, PARAM_NAMES};

use crate::config::{Command, KernelChoice, RunConfig, ScenarioKind};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need<'a, V>(v: &'a Option<V>, key: &str, cmd: Command) -> Result<&'a V> {
    v.as_ref().ok_or_else(|| usage(format!("`{}` requires `{key}`", cmd.name())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| Error::Io { path, source })?;
    Ok(())
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    write(dir, name, &text)
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?)
}

fn inputs(cfg: &RunConfig, cmd: Command, edges_required: bool) -> Result<(Firms, Network)> {
    let firms: Firms = load_firms(need(&cfg.firms, "firms", cmd)?)?;
    let g = match (&cfg.edges, edges_required) {
        (Some(p), _) => load_edges(p, &firms)?,
        (None, false) => Network::empty(firms.len()),
        (None, true) => return Err(usage(format!("`{}` requires `edges`", cmd.name()))),
    };
    Ok((firms, g))
}

/// Theta inline, or the posterior means (or point estimates) of a summary file.
fn theta(cfg: &RunConfig, cmd: Command) -> Result<Params> {
    if let Some(t) = cfg.theta {
        return Ok(Params::from_f64(t));
    }
    let path = cfg
        .theta_from
        .as_ref()
        .ok_or_else(|| usage(format!("`{}` requires `theta` or `theta_from`", cmd.name())))?;
    let text = read(path)?;
    let file = path.display().to_string();
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Input { file: file.clone(), row: e.line(), msg: e.to_string() })?;
    let mut out = [0.0; NUM_PARAMS];
    for (k, name) in PARAM_NAMES.iter().enumerate() {
        let p = &v["parameters"][name];
        out[k] = p["mean"]
            .as_f64()
            .or_else(|| p["estimate"].as_f64())
            .ok_or_else(|| Error::Input { file: file.clone(), row: 0, msg: format!("no mean or estimate for {name}") })?;
    }
    Ok(Params::from_f64(out))
}

fn seed(cfg: &RunConfig, cmd: Command) -> Result<u64> {
    cfg.seed.ok_or_else(|| usage(format!("`{}` is stochastic and requires `seed`", cmd.name())))
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
    Ok(dir)
}

/// Runs the configured subcommand inside a pool of `threads` workers.
pub fn run(cfg: &RunConfig) -> Result<()> {
    let cmd = cfg.subcommand.ok_or_else(|| usage("no subcommand given"))?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        if t == 0 {
            return Err(usage("`threads` must be at least 1"));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| usage(e.to_string()))?;
    pool.install(|| match cmd {
        Command::Simulate => cmd_simulate(cfg),
        Command::Estimate if cfg.mple == Some(true) => cmd_mple(cfg, Command::Estimate),
        Command::Estimate => cmd_estimate(cfg),
        Command::Mple => cmd_mple(cfg, Command::Mple),
        Command::Gof => cmd_gof(cfg),
        Command::Counterfactual => cmd_counterfactual(cfg),
        Command::Stable => cmd_stable(cfg),
    })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<()> {
    let cmd = Command::Simulate;
    let (firms, g0) = inputs(cfg, cmd, false)?;
    let theta = theta(cfg, cmd)?;
    let seed = seed(cfg, cmd)?;
    let steps = cfg.steps.unwrap_or_else(|| default_steps(firms.len()));
    let stride = cfg.stride.unwrap_or_else(|| (steps / 1000).max(1));
    let kernel = match cfg.kernel.unwrap_or(KernelChoice::Game) {
        KernelChoice::Game => Kernel::Gibbs(MeetingProcess::Uniform),
        KernelChoice::Metropolis => Kernel::Metropolis { swap_prob: cfg.swap_prob.unwrap_or(DEFAULT_SWAP_PROB) },
    };
    let trace = simulate_with(g0, &firms, &theta, steps, &kernel, &mut stream(seed, "simulate", 0), stride)?;
    let dir = out_dir(cfg)?;
    write(&dir, "trace.csv", &trace.to_csv())?;
    write(&dir, "final_edges.csv", &format_edges(&trace.final_network, &firms))?;
    Ok(())
}

fn exchange_config(cfg: &RunConfig, seed: u64) -> ExchangeConfig {
    let d = ExchangeConfig::default();
    ExchangeConfig {
        draws: cfg.draws.unwrap_or(d.draws),
        burn_in: cfg.burn_in.unwrap_or(d.burn_in),
        aux_steps: cfg.aux_steps,
        proposal_sd: cfg.proposal_sd,
        chains: cfg.chains.unwrap_or(d.chains),
        seed,
        swap_prob: cfg.swap_prob.unwrap_or(d.swap_prob),
        mask: mask(cfg),
        start: cfg.start,
        aux_start: d.aux_start,
        adapt: cfg.adapt.unwrap_or(d.adapt),
    }
}

fn mask(cfg: &RunConfig) -> ParamMask {
    if cfg.exogenous == Some(true) {
        ParamMask::EXOGENOUS
    } else {
        ParamMask::FULL
    }
}

fn prior(cfg: &RunConfig) -> Result<Prior> {
    let d = Prior::default();
    Ok(Prior::new(cfg.prior_mean.unwrap_or(d.mean), cfg.prior_sd.unwrap_or(d.sd))?)
}

/// Summary JSON: per-parameter mean, sd, mcse, q2.5, q97.5 and the acceptance rate.
pub fn summary_json(sample: &Posterior) -> Value {
    let mut params = Map::new();
    for s in sample.summary() {
        params.insert(
            s.name.to_string(),
            json!({ "mean": s.mean, "sd": s.sd, "mcse": s.mcse, "q2.5": s.q025, "q97.5": s.q975 }),
        );
    }
    let mut out = json!({
        "parameters": params,
        "acceptance_rate": sample.acceptance_rate(),
        "chains": sample.chains.len(),
        "draws_per_chain": sample.chains.first().map_or(0, |c| c.draws.len()),
        "warnings": sample.warnings,
    });
    if let Ok(report) = sample.diagnostics() {
        let mut d = Map::new();
        for p in &report.params {
            d.insert(p.name.to_string(), json!({ "psrf": p.psrf, "ess": p.ess }));
        }
        out["diagnostics"] = json!({ "parameters": d, "flags": report.flags });
    }
    out
}

pub fn cmd_estimate(cfg: &RunConfig) -> Result<()> {
    let cmd = Command::Estimate;
    let (firms, g) = inputs(cfg, cmd, true)?;
    let seed = seed(cfg, cmd)?;
    let sample = exchange_sample(&g, &firms, &prior(cfg)?, &exchange_config(cfg, seed))?;
    for w in &sample.warnings {
        eprintln!("warning: {w}");
    }
    let dir = out_dir(cfg)?;
    write(&dir, "draws.csv", &sample.to_csv())?;
    write_json(&dir, "summary.json", &summary_json(&sample))?;
    Ok(())
}

pub fn cmd_mple(cfg: &RunConfig, cmd: Command) -> Result<()> {
    let (firms, g) = inputs(cfg, cmd, true)?;
    let fit = mple_masked(&g, &firms, mask(cfg))?;
    let mut params = Map::new();
    for (k, name) in PARAM_NAMES.iter().enumerate() {
        params.insert(
            name.to_string(),
            json!({ "estimate": fit.estimates[k], "std_error": fit.std_errors[k], "free": fit.mask.is_free(k) }),
        );
    }
    let dir = out_dir(cfg)?;
    write_json(
        &dir,
        "summary.json",
        &json!({
            "method": "mple",
            "parameters": params,
            "log_pseudolikelihood": fit.log_pseudolikelihood,
            "iterations": fit.iterations,
            "note": "standard errors treat dyads as independent and understate uncertainty",
        }),
    )
}

/// Draws from `posterior`, or `m` copies of a fixed theta.
fn posterior_draws(cfg: &RunConfig, cmd: Command, m: usize) -> Result<Posterior> {
    if let Some(path) = &cfg.posterior {
        return Ok(PosteriorSample::from_csv(&read(path)?, &path.display().to_string())?);
    }
    let t = theta(cfg, cmd).map_err(|_| usage(format!("`{}` requires `posterior`, `theta` or `theta_from`", cmd.name())))?;
    Ok(PosteriorSample {
        mask: ParamMask::FULL,
        burn_in: 0,
        chains: vec![ChainDraws { draws: vec![t; m], accepted: 0, proposed: 0 }],
        warnings: Vec::new(),
    })
}

pub fn cmd_gof(cfg: &RunConfig) -> Result<()> {
    let cmd = Command::Gof;
    let (firms, g) = inputs(cfg, cmd, true)?;
    let seed = seed(cfg, cmd)?;
    let m = cfg.m.unwrap_or(netform::gof::DEFAULT_SIMULATIONS);
    let sample = posterior_draws(cfg, cmd, m)?;
    let steps = cfg.aux_steps.unwrap_or_else(|| default_steps(firms.len()));
    let bands = gof_run(&g, &firms, &sample, m, steps, seed)?;
    let dir = out_dir(cfg)?;
    let mut fit = Map::new();
    for f in Family::ALL {
        let b = bands.family(f);
        write(&dir, &format!("gof_{}.csv", f.name()), &b.to_csv())?;
        fit.insert(f.name().to_string(), json!({ "coverage": b.coverage(), "fit": b.fits() }));
    }
    write_json(&dir, "gof_summary.json", &json!({ "simulations": bands.simulations, "families": fit, "fit": bands.fits() }))
}

fn scenario(cfg: &RunConfig) -> Result<Scenario> {
    let cmd = Command::Counterfactual;
    Ok(match need(&cfg.kind, "kind", cmd)? {
        ScenarioKind::Entry => Scenario::Entry {
            count: *need(&cfg.entry_count, "entry_count", cmd)?,
            state: need(&cfg.entry_state, "entry_state", cmd)?.clone(),
            firm_type: cfg.entry_type.unwrap_or(FirmType::PrivateEquity),
        },
        ScenarioKind::MinCapital => Scenario::MinCapital { q: *need(&cfg.min_capital_q, "min_capital_q", cmd)? },
    })
}

fn summary_value(s: &NetworkSummary) -> Value {
    json!({
        "n": s.n,
        "edges": s.edges,
        "density": s.density,
        "clustering": s.clustering,
        "homophily_type": s.homophily_type,
        "homophily_state": s.homophily_state,
        "zero_edges": s.zero_edges,
        "mean_degree": s.mean_degree,
        "isolates": s.isolates,
    })
}

pub fn cmd_counterfactual(cfg: &RunConfig) -> Result<()> {
    let cmd = Command::Counterfactual;
    let (firms, g) = inputs(cfg, cmd, true)?;
    let seed = seed(cfg, cmd)?;
    let scenario = scenario(cfg)?;
    let m = cfg.m.unwrap_or(netform::gof::DEFAULT_SIMULATIONS);
    let sample = posterior_draws(cfg, cmd, m)?;
    let (x2, g0) = apply_scenario(&firms, &g, &scenario, &mut stream(seed, "scenario", 0))?;
    let steps = cfg.aux_steps.unwrap_or_else(|| default_steps(x2.len()));
    let run = run_counterfactual(&x2, &g0, &sample, m, steps, seed)?;
    let baseline = summarize(&g, &firms)?;

    let dir = out_dir(cfg)?;
    write(&dir, "cf_firms.csv", &format_firms(&x2))?;
    write(&dir, "cf_edges.csv", &format_edges(&g0, &x2))?;
    let mut metrics = Map::new();
    for name in METRICS {
        write(&dir, &format!("cf_{name}.csv"), &run.histogram_csv(name))?;
        let v = run.values(name);
        metrics.insert(name.to_string(), json!({ "mean": v.iter().sum::<f64>() / v.len() as f64 }));
    }
    let mut curve = String::from("p,simulated_mean,baseline\n");
    for ((p, sim), base) in DEGREE_CURVE_PROBS.iter().zip(run.mean_degree_curve()).zip(&baseline.degree_curve) {
        curve.push_str(&format!("{p},{sim},{base}\n"));
    }
    write(&dir, "cf_degree_curve.csv", &curve)?;
    write_json(
        &dir,
        "cf_summary.json",
        &json!({
            "simulations": run.summaries.len(),
            "firms": x2.len(),
            "baseline": summary_value(&baseline),
            "start": summary_value(&run.start),
            "simulated": metrics,
        }),
    )
}

pub fn cmd_stable(cfg: &RunConfig) -> Result<()> {
    let cmd = Command::Stable;
    let firms: Firms = load_firms(need(&cfg.firms, "firms", cmd)?)?;
    let theta = theta(cfg, cmd)?;
    let stable = find_stable(&firms, &theta)?;
    let limit = cfg.stable_limit.unwrap_or(usize::MAX);
    let mut out = String::new();
    for g in stable.iter().take(limit) {
        let edges: Vec<String> = g.edges().map(|(i, j)| format!("{}-{}", firms.ids()[i], firms.ids()[j])).collect();
        out.push_str(&format!("{{{}}}\n", edges.join(", ")));
    }
    print!("{out}");
    let dir = out_dir(cfg)?;
    write(&dir, "stable.txt", &out)
}
