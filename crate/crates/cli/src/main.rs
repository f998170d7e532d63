use std::fs;
use std::process::ExitCode;

use clap::{Arg, ArgAction};

use netform_cli::{run, CliError, Command, RunConfig, KEYS};

const SWITCHES: [&str; 3] = ["mple", "exogenous", "adapt"];

fn cli() -> clap::Command {
    let mut app = clap::Command::new("netform")
        .about("Simulate, estimate and stress-test strategic network formation models")
        .arg(
            Arg::new("subcommand")
                .required(true)
                .value_parser(Command::ALL.map(|c| c.name()))
                .help("what to run"),
        );
    for (key, help) in KEYS.iter().filter(|(k, _)| *k != "subcommand") {
        let mut arg = Arg::new(*key).long(*key).help(*help).action(ArgAction::Set).value_name("VALUE");
        if SWITCHES.contains(key) {
            arg = arg.num_args(0..=1).default_missing_value("true");
        } else {
            arg = arg.allow_hyphen_values(true);
        }
        app = app.arg(arg);
    }
    app
}

fn configure() -> Result<RunConfig, CliError> {
    let matches = cli().get_matches();
    let mut cfg = match matches.get_one::<String>("config") {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| netform::Error::Io { path: path.into(), source })?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for (key, _) in KEYS.iter().filter(|(k, _)| *k != "config") {
        if let Some(v) = matches.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    match configure().and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
