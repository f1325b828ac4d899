//! `batch`: run a TOML list of commands.
//!
//! ```toml
//! [[step]]
//! args = ["gen", "celebrity", "--k", "20", "--m", "3", "--out", "cel.txt"]
//!
//! [[step]]
//! args = ["simulate", "--graph", "cel.txt", "--p", "7/10", "--trials", "1000"]
//! out = "sim.json"
//! ```
//!
//! Steps without `--seed` inherit the batch seed. A step's stdout goes to its
//! `out` file when given, otherwise to the batch's stdout. The first failing
//! step stops the batch.

use std::io::Write;
use std::path::Path;
use std::time::SystemTime;

use serde::Deserialize;

use crate::output::{self, RunManifest, StepRecord};
use crate::CliError;
use seqlearn_core::Error;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchFile {
    #[serde(default)]
    step: Vec<Step>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Step {
    args: Vec<String>,
    out: Option<String>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn parse(text: &str) -> Result<BatchFile, Error> {
    toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })
}

pub(crate) fn run_batch(
    config: &Path,
    manifest_path: &Path,
    mut manifest: RunManifest,
    started: SystemTime,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config).map_err(Error::from)?;
    let file = parse(&text)?;
    let mut failed = None;
    for (index, step) in file.step.iter().enumerate() {
        if step.args.first().is_some_and(|a| a == "batch") {
            return Err(CliError::Usage(format!("step {index}: batches cannot nest")));
        }
        let mut argv = vec!["seqlearn".to_string()];
        if !step.args.iter().any(|a| a == "--seed" || a.starts_with("--seed=")) {
            argv.extend(["--seed".to_string(), manifest.seed.to_string()]);
        }
        argv.extend(step.args.iter().cloned());
        let mut buf = Vec::new();
        let exit_code = crate::run(&argv, &mut buf);
        match &step.out {
            Some(path) if exit_code == 0 => {
                output::write_file(Path::new(path), &String::from_utf8_lossy(&buf))?;
                manifest.outputs.push(path.clone());
            }
            _ => out.write_all(&buf).map_err(Error::from)?,
        }
        manifest.steps.push(StepRecord { index, args: argv[1..].to_vec(), exit_code, output: step.out.clone() });
        if exit_code != 0 {
            failed = Some((index, exit_code));
            break;
        }
    }
    manifest.finish(started);
    manifest.write(manifest_path)?;
    match failed {
        Some((index, code)) => Err(CliError::Step { index, code }),
        None => Ok(()),
    }
}
