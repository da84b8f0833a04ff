//! Scenario runner for relative sheaf cohomology on finite spaces.

pub mod builtins;
pub mod error;
pub mod ops;
pub mod report;
pub mod scenario;
pub mod universe;

use std::path::Path;

use relcoh::cech::CochainMode;

pub use error::InputError;
pub use report::Report;
pub use scenario::{Mode, Scenario};

use ops::{resolve, run, Context};
use universe::Universe;

/// Resolves every operation before running any, so input errors surface
/// before work starts.
pub fn run_scenario(sc: &Scenario, bound: Option<usize>, mode: Option<Mode>) -> Result<Report, InputError> {
    let u = Universe::build(sc)?;
    let resolved = sc.operations.iter().map(|op| resolve(op, &u)).collect::<Result<Vec<_>, _>>()?;
    let mode = mode.or(sc.mode).unwrap_or(Mode::Alternating);
    let ctx = Context {
        bound: bound.or(sc.bound),
        mode: match mode {
            Mode::Alternating => CochainMode::Alternating,
            Mode::Full => CochainMode::Full,
        },
    };
    let ops = sc
        .operations
        .iter()
        .zip(resolved)
        .enumerate()
        .map(|(i, (op, r))| run(i, op.name(), r, &ctx))
        .collect();
    Ok(Report::new(&sc.name, &sc.description, mode.name(), ops))
}

/// A builtin scenario name or a path to a JSON file.
pub fn load(target: &str) -> Result<Scenario, InputError> {
    if let Some(text) = builtins::get(target) {
        return scenario::parse(text);
    }
    let path = Path::new(target);
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound && !target.contains(['/', '.']) {
            InputError::NotFound(target.to_string())
        } else {
            InputError::Io {
                path: target.to_string(),
                message: e.to_string(),
            }
        }
    })?;
    scenario::parse(&text)
}
