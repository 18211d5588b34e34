//! `--config FILE` support: `key = value` lines become `--key value` flags
//! placed before the user's own flags, so the command line wins.

use std::fs;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::{CliError, CliResult};

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Parses the file into (flag name, values) pairs. `true` marks a bare
/// flag; `false` drops the entry.
pub fn parse(text: &str) -> CliResult<Vec<(String, Vec<String>)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!("config line {}: bad key", n + 1)));
        }
        let value = value.trim();
        match value {
            "true" => out.push((key, Vec::new())),
            "false" => {}
            v => out.push((key, v.split_whitespace().map(str::to_string).collect())),
        }
    }
    Ok(out)
}

/// Returns `args` with the config file's flags inserted right after the
/// subcommand. Keys that no subcommand knows are an error; keys that only
/// other subcommands know are skipped.
pub fn expand(args: Vec<String>) -> CliResult<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("reading config {path}: {e}")))?;
    let entries = parse(&text)?;

    let mut cmd = Cli::command();
    cmd.build();
    let sub_pos = args.iter().skip(1).position(|a| cmd.find_subcommand(a).is_some()).map(|p| p + 1);
    let Some(sub_pos) = sub_pos else {
        return Ok(args);
    };
    let sub = cmd.find_subcommand(&args[sub_pos]).expect("found above");
    let known = |c: &clap::Command, key: &str| c.get_arguments().any(|a| a.get_long() == Some(key));

    let mut injected = Vec::new();
    for (key, values) in entries {
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if known(sub, &key) {
            injected.push(format!("--{key}"));
            injected.extend(values);
        } else if !cmd.get_subcommands().any(|s| known(s, &key)) {
            return Err(CliError::Usage(format!("config key `{key}` is not a known flag")));
        }
    }
    let mut out = args;
    out.splice(sub_pos + 1..sub_pos + 1, injected);
    Ok(out)
}
