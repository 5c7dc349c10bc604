use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use mpkit::idempotent::{random_idempotent, validate_idempotent};
use mpkit::verify::{verify_all_described, InputDescriptor, VerificationReport, CHECK_IDS};
use mpkit::Idempotent;

use crate::config::CampaignConfig;
use crate::files::MatrixFile;
use crate::CliError;

pub struct VerifyRequest {
    pub inputs: Vec<PathBuf>,
    pub campaign: CampaignConfig,
    pub out_dir: Option<PathBuf>,
    pub json: bool,
}

#[derive(Debug, Serialize)]
struct CheckSummary {
    id: String,
    passed: usize,
    total: usize,
    worst_residual: f64,
}

#[derive(Debug, Serialize)]
struct CampaignSummary {
    inputs: usize,
    passed: usize,
    checks: Vec<CheckSummary>,
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    summary: CampaignSummary,
    reports: Vec<NamedReport>,
}

#[derive(Debug, Serialize)]
struct NamedReport {
    name: String,
    #[serde(flatten)]
    report: VerificationReport,
}

pub fn run(req: &VerifyRequest) -> Result<(), CliError> {
    let tol = req.campaign.tolerances;
    // (file name for the report, label, validated input, descriptor)
    let mut jobs: Vec<(String, Idempotent, InputDescriptor)> = Vec::new();

    if req.inputs.is_empty() {
        req.campaign.validate()?;
        for t in req.campaign.trials() {
            let (q, _) = random_idempotent(t.n, t.rank, t.skew, t.seed);
            let descriptor =
                InputDescriptor::new("random", t.n, t.rank, Some(t.skew), Some(t.seed));
            let name = crate::generate::trial_file_name(t.n, t.skew, t.trial);
            jobs.push((name, q, descriptor));
        }
    } else {
        // reject the whole run if any input fails to parse or validate
        for path in &req.inputs {
            let file = MatrixFile::read(path)?;
            let matrix = file.to_matrix().map_err(|e| {
                CliError::input(format!("{}: {}", path.display(), e.message))
            })?;
            let q = validate_idempotent(matrix, &tol)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let descriptor = match &file.provenance {
                Some(p) => InputDescriptor::new(
                    path.display().to_string(),
                    q.dim(),
                    q.rank(),
                    Some(p.skew),
                    Some(p.seed),
                ),
                None => InputDescriptor::new(path.display().to_string(), q.dim(), q.rank(), None, None),
            };
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            jobs.push((name, q, descriptor));
        }
    }

    let reports: Vec<NamedReport> = jobs
        .par_iter()
        .map(|(name, q, descriptor)| NamedReport {
            name: name.clone(),
            report: verify_all_described(q, &tol, descriptor.clone()),
        })
        .collect();

    if let Some(dir) = &req.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
        for named in &reports {
            let file = report_file_name(&named.name);
            crate::files::write_json(&dir.join(file), &named.report)?;
        }
    }

    let summary = summarize(&reports);
    let passed = summary.passed;
    let total = summary.inputs;

    if req.json {
        let output = VerifyOutput { summary, reports };
        println!(
            "{}",
            serde_json::to_string_pretty(&output)
                .map_err(|e| CliError::input(format!("serialization failed: {e}")))?
        );
    } else {
        print_summary(&summary);
    }

    if passed == total {
        Ok(())
    } else {
        Err(CliError::failure(format!(
            "{} of {total} inputs failed verification",
            total - passed
        )))
    }
}

fn report_file_name(input_name: &str) -> String {
    let stem = input_name.strip_suffix(".json").unwrap_or(input_name);
    format!("{stem}.report.json")
}

fn summarize(reports: &[NamedReport]) -> CampaignSummary {
    let mut checks: Vec<CheckSummary> = CHECK_IDS
        .iter()
        .map(|id| CheckSummary {
            id: id.to_string(),
            passed: 0,
            total: 0,
            worst_residual: 0.0,
        })
        .collect();
    for named in reports {
        for (slot, check) in checks.iter_mut().zip(named.report.checks.iter()) {
            debug_assert_eq!(slot.id, check.check_id);
            slot.total += 1;
            if check.passed {
                slot.passed += 1;
            }
            if check.residual.is_finite() {
                slot.worst_residual = slot.worst_residual.max(check.residual);
            } else {
                slot.worst_residual = f64::MAX;
            }
        }
    }
    CampaignSummary {
        inputs: reports.len(),
        passed: reports.iter().filter(|r| r.report.overall).count(),
        checks,
    }
}

fn print_summary(summary: &CampaignSummary) {
    println!(
        "verified {} inputs: {} passed, {} failed",
        summary.inputs,
        summary.passed,
        summary.inputs - summary.passed
    );
    for check in &summary.checks {
        println!(
            "  {:<26} {:>5}/{:<5} worst residual {:>14.6e}",
            check.id, check.passed, check.total, check.worst_residual
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_names_replace_extension() {
        assert_eq!(report_file_name("q_n004_s0_t000.json"), "q_n004_s0_t000.report.json");
        assert_eq!(report_file_name("plain"), "plain.report.json");
    }
}
