use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mpkit::idempotent::validate_idempotent;
use mpkit::matched::{
    matched, matched_block, matched_original, matched_simplified_q, matched_simplified_qstar,
    matched_symmetric, Formula,
};
use mpkit::{extract_block_form, CMatrix, Idempotent, Tolerances};

use crate::files::{MatchOutput, MatrixFile};
use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub enum FormulaChoice {
    All,
    One(Formula),
}

pub struct MatchRequest {
    pub input: PathBuf,
    pub formula: FormulaChoice,
    pub out_dir: Option<PathBuf>,
    pub json: bool,
    pub tolerances: Tolerances,
}

pub fn run(req: &MatchRequest) -> Result<(), CliError> {
    let file = MatrixFile::read(&req.input)?;
    let matrix = file.to_matrix()?;
    if matrix.nrows() != matrix.ncols() {
        return Err(CliError::input(format!(
            "{}: matrix is {}x{}, expected square",
            req.input.display(),
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let tol = req.tolerances;
    let q = validate_idempotent(matrix, &tol)
        .map_err(|e| CliError::input(format!("{}: {e}", req.input.display())))?;

    let output = match &req.formula {
        FormulaChoice::All => run_all(&q, &tol, &req.input)?,
        FormulaChoice::One(formula) => run_one(&q, &tol, *formula, &req.input)?,
    };

    let out_dir = req
        .out_dir
        .clone()
        .or_else(|| req.input.parent().map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::input(format!("{}: {e}", out_dir.display())))?;
    let stem = req
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "matrix".into());
    let out_path = out_dir.join(format!("{stem}.m.json"));
    crate::files::write_json(&out_path, &output)?;

    if req.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&output)
                .map_err(|e| CliError::input(format!("serialization failed: {e}")))?
        );
    } else {
        println!("input            : {}", req.input.display());
        println!("formula          : {}", output.formula);
        if let Some(dev) = output.max_pairwise_dev {
            println!("max_pairwise_dev : {dev:>14.6e}");
        }
        if let Some(res) = output.proj_residual {
            println!("proj_residual    : {res:>14.6e}");
        }
        println!("result           : {}", out_path.display());
    }
    Ok(())
}

fn run_all(q: &Idempotent, tol: &Tolerances, input: &Path) -> Result<MatchOutput, CliError> {
    let result = matched(q, tol).map_err(|e| classify(e, input))?;
    let per_formula: BTreeMap<String, MatrixFile> = result
        .per_formula
        .iter()
        .map(|(f, m)| (f.name().to_string(), MatrixFile::from_matrix(m, None)))
        .collect();
    Ok(MatchOutput {
        input: input.display().to_string(),
        formula: "all".into(),
        m: MatrixFile::from_matrix(&result.m, None),
        per_formula: Some(per_formula),
        max_pairwise_dev: Some(result.max_pairwise_dev),
        proj_residual: Some(result.proj_residual),
    })
}

fn run_one(
    q: &Idempotent,
    tol: &Tolerances,
    formula: Formula,
    input: &Path,
) -> Result<MatchOutput, CliError> {
    let m: CMatrix = match formula {
        Formula::Original => matched_original(q, tol),
        Formula::SimplifiedQStar => matched_simplified_qstar(q, tol),
        Formula::SimplifiedQ => matched_simplified_q(q, tol),
        Formula::Symmetric => matched_symmetric(q, tol),
        Formula::Block => extract_block_form(q, tol).and_then(|bf| matched_block(&bf, tol)),
    }
    .map_err(|e| classify(e, input))?;
    Ok(MatchOutput {
        input: input.display().to_string(),
        formula: formula.name().into(),
        m: MatrixFile::from_matrix(&m, None),
        per_formula: None,
        max_pairwise_dev: None,
        proj_residual: None,
    })
}

/// Input-shaped problems exit 2; numerical/verification failures exit 1.
fn classify(err: mpkit::Error, input: &Path) -> CliError {
    use mpkit::Error::*;
    let message = format!("{}: {err}", input.display());
    match err {
        NotIdempotent { .. } | BasisNotUnitary { .. } | ShapeMismatch(_)
        | NonFiniteEntry { .. } | InvalidTolerance(_) => CliError::input(message),
        FormulaDisagreement { .. } | NotProjection { .. } | NoConvergence { .. }
        | NotPSD { .. } | DecompositionFailed { .. } | NotHermitian { .. } => {
            CliError::failure(message)
        }
    }
}
