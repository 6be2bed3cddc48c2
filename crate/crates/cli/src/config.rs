//! `key = value` config files, spliced into the argument list ahead of the
//! real flags so that later flags win.

use std::ffi::OsString;
use std::path::Path;

use crate::args::SWITCHES;
use crate::error::CliError;

/// Parses a config file into flag arguments.
pub fn parse_config(text: &str, origin: &Path) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "{}:{}: expected key = value",
                origin.display(),
                k + 1
            )));
        };
        let key = normalize_key(key.trim());
        let value = value.trim();
        if key == "config" {
            return Err(CliError::Config(format!(
                "{}:{}: config files cannot include other config files",
                origin.display(),
                k + 1
            )));
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" | "1" | "yes" => out.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                _ => {
                    return Err(CliError::Config(format!(
                        "{}:{}: {key} expects true or false, got {value:?}",
                        origin.display(),
                        k + 1
                    )))
                }
            }
        } else {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}

/// `gamma_deg` and `gamma-deg` both name `--gamma-deg`; `N` stays as is.
fn normalize_key(key: &str) -> String {
    key.trim_start_matches("--").replace('_', "-")
}

/// Finds `--config FILE` or `--config=FILE` in the raw arguments.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

/// Inserts the config-derived flags right after the subcommand name.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let extra = parse_config(&text, path)?;
    let split = args.len().min(2);
    let mut out: Vec<OsString> = args[..split].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[split..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: Vec<OsString>) -> Vec<String> {
        v.into_iter().map(|s| s.into_string().unwrap()).collect()
    }

    #[test]
    fn parses_pairs_switches_and_comments() {
        let text =
            "# shell\ngamma_deg = 5.2\nN=500 # inline\ncoupled = true\nskip-infeasible = false\n\n";
        let got = strings(parse_config(text, Path::new("x.cfg")).unwrap());
        assert_eq!(got, ["--gamma-deg", "5.2", "--N", "500", "--coupled"]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_config("gamma_deg 5.2", Path::new("x")).is_err());
        assert!(parse_config("coupled = maybe", Path::new("x")).is_err());
        assert!(parse_config("config = other.cfg", Path::new("x")).is_err());
    }

    #[test]
    fn finds_config_flag() {
        let args: Vec<OsString> = ["bin", "sweep", "--config=a.cfg"].map(Into::into).to_vec();
        assert_eq!(config_path(&args), Some("a.cfg".into()));
        let args: Vec<OsString> = ["bin", "sweep", "--config", "b.cfg"]
            .map(Into::into)
            .to_vec();
        assert_eq!(config_path(&args), Some("b.cfg".into()));
    }
}
