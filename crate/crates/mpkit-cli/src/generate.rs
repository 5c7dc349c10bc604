use std::fs;
use std::path::Path;

use mpkit::idempotent::random_idempotent;

use crate::config::CampaignConfig;
use crate::files::{MatrixFile, Provenance};
use crate::CliError;

/// Writes one matrix file per campaign trial, named by (size, skew, trial)
/// so directory order matches generation order. Deterministic per seed,
/// byte for byte.
pub fn run(cfg: &CampaignConfig, out: &Path) -> Result<usize, CliError> {
    cfg.validate()?;
    fs::create_dir_all(out).map_err(|e| CliError::input(format!("{}: {e}", out.display())))?;
    let trials = cfg.trials();
    for t in &trials {
        let (q, _) = random_idempotent(t.n, t.rank, t.skew, t.seed);
        let file = MatrixFile::from_matrix(
            q.matrix(),
            Some(Provenance {
                n: t.n,
                rank: t.rank,
                skew: t.skew,
                seed: t.seed,
                trial: t.trial,
            }),
        );
        file.write(&out.join(trial_file_name(t.n, t.skew, t.trial)))?;
    }
    Ok(trials.len())
}

pub fn trial_file_name(n: usize, skew: f64, trial: usize) -> String {
    format!("q_n{n:03}_s{skew}_t{trial:03}.json")
}
