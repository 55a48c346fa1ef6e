//! `qlab`: run one experiment and write its CSV tables.

mod config;
mod error;
mod experiments;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};

use config::{Params, OUT_KEY};
use error::CliError;
use experiments::{Experiment, EXPERIMENTS};

fn cli() -> Command {
    let mut cmd = Command::new("qlab")
        .about("Exactly solvable measurement models: experiments and acceptance checks")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for e in EXPERIMENTS {
        let mut sub = Command::new(e.id)
            .about(e.about)
            .arg(Arg::new("config").long("config").value_name("PATH").help("flat key = value config file"))
            .arg(Arg::new(OUT_KEY).long(OUT_KEY).value_name("DIR").help("output directory [default: .]"));
        for k in e.keys {
            sub = sub.arg(
                Arg::new(k.name)
                    .long(k.name)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(format!("{} [default: {}]", k.help, k.default)),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn run(e: &Experiment, m: &ArgMatches) -> Result<Vec<String>, CliError> {
    let mut overrides = Vec::new();
    for name in e.keys.iter().map(|k| k.name).chain([OUT_KEY]) {
        if let Some(v) = m.get_one::<String>(name) {
            overrides.push((name.to_string(), v.clone()));
        }
    }
    let config = m.get_one::<String>("config").map(PathBuf::from);
    let params = Params::resolve(e.id, e.keys, config.as_deref(), &overrides)?;
    let report = (e.run)(&params)?;
    let out = PathBuf::from(params.str(OUT_KEY));
    let mut lines = report.summary;
    for t in &report.tables {
        lines.push(format!("wrote {}", t.write_to(&out)?.display()));
    }
    if !report.violations.is_empty() {
        for l in &lines {
            println!("{l}");
        }
        return Err(CliError::Invariant(report.violations.join("; ")));
    }
    Ok(lines)
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (id, sub) = matches.subcommand().expect("subcommand required");
    let e = experiments::find(id).expect("registered subcommand");
    match run(e, sub) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("qlab {id}: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
