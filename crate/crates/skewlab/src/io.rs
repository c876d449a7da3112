//! File formats shared with the command-line front end: matrix JSON,
//! quantity-report and verdict JSON, trial aggregates, and the sweep CSV.
//! Output floats are rendered with 17 significant digits so every value
//! round-trips bit-exactly.

use num_complex::Complex64;
use serde::Deserialize;
use std::path::Path;

use crate::checks::InequalityVerdict;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::skew::QuantityReport;
use crate::trials::{SweepRow, TrialAggregate, TrialRecord, Witness};

/// 17 significant digits; enough for f64 round-tripping.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

#[derive(Deserialize)]
struct MatrixFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Parses the matrix JSON object {"dim": n, "re": [[..]], "im": [[..]]}.
/// The "im" field may be omitted for real matrices.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    if file.dim == 0 {
        return Err(Error::Parse("matrix dim must be at least 1".into()));
    }
    check_shape("re", &file.re, file.dim)?;
    if let Some(im) = &file.im {
        check_shape("im", im, file.dim)?;
    }
    let m = ComplexMatrix::from_fn(file.dim, |i, j| {
        let re = file.re[i][j];
        let im = file.im.as_ref().map_or(0.0, |im| im[i][j]);
        Complex64::new(re, im)
    });
    m.check_finite()?;
    Ok(m)
}

fn check_shape(field: &str, rows: &[Vec<f64>], dim: usize) -> Result<()> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!(
            "field \"{field}\" does not have shape {dim}x{dim}"
        )));
    }
    Ok(())
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text)
}

/// Renders a matrix in the JSON format above; "im" is omitted when every
/// imaginary part is exactly zero.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let grid = |f: &dyn Fn(Complex64) -> f64| -> String {
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let cells: Vec<String> = (0..n).map(|j| fmt_f64(f(m[(i, j)]))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    };
    let re = grid(&|z| z.re);
    if (0..n).any(|i| (0..n).any(|j| m[(i, j)].im != 0.0)) {
        let im = grid(&|z| z.im);
        format!("{{\"dim\":{n},\"re\":{re},\"im\":{im}}}")
    } else {
        format!("{{\"dim\":{n},\"re\":{re}}}")
    }
}

pub fn verdict_to_json(v: &InequalityVerdict) -> String {
    format!(
        "{{\"name\":\"{}\",\"lhs\":{},\"rhs\":{},\"slack\":{},\"holds\":{},\"tol\":{}}}",
        v.name,
        fmt_f64(v.lhs),
        fmt_f64(v.rhs),
        fmt_f64(v.slack),
        v.holds,
        fmt_f64(v.tol)
    )
}

pub fn parse_verdict(text: &str) -> Result<InequalityVerdict> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("verdict JSON: {e}")))
}

pub fn report_to_json(r: &QuantityReport) -> String {
    format!(
        "{{\"alpha\":{},\"beta\":{},\"region\":\"{}\",\"V\":{},\"I\":{},\"J\":{},\"U\":{},\"dual_path_delta\":{}}}",
        fmt_f64(r.params.alpha()),
        fmt_f64(r.params.beta()),
        r.params.region().as_str(),
        fmt_f64(r.variance),
        fmt_f64(r.skew_i),
        fmt_f64(r.skew_j),
        fmt_f64(r.skew_u),
        fmt_f64(r.dual_path_delta)
    )
}

fn witness_to_json(w: &Witness) -> String {
    let b = match &w.b {
        Some(b) => matrix_to_json(b),
        None => "null".to_string(),
    };
    format!(
        "{{\"rho\":{},\"a\":{},\"b\":{},\"alpha\":{},\"beta\":{},\"eigen_floor\":{}}}",
        matrix_to_json(&w.rho),
        matrix_to_json(&w.a),
        b,
        fmt_f64(w.params.alpha()),
        fmt_f64(w.params.beta()),
        fmt_f64(w.eigen_floor)
    )
}

pub fn record_to_json(r: &TrialRecord) -> String {
    format!(
        "{{\"seed\":{},\"trial_index\":{},\"dim\":{},\"alpha\":{},\"beta\":{},\"region\":\"{}\",\"verdict\":{},\"witness\":{}}}",
        r.seed,
        r.trial_index,
        r.dim,
        fmt_f64(r.params.alpha()),
        fmt_f64(r.params.beta()),
        r.params.region().as_str(),
        verdict_to_json(&r.verdict),
        witness_to_json(&r.witness)
    )
}

pub fn aggregate_to_json(a: &TrialAggregate) -> String {
    let worst = match &a.worst {
        Some(rec) => record_to_json(rec),
        None => "null".to_string(),
    };
    format!(
        "{{\"target\":\"{}\",\"seed\":{},\"trials\":{},\"violations\":{},\"min_slack\":{},\"tol\":{},\"worst\":{}}}",
        a.target.as_str(),
        a.seed,
        a.trials,
        a.violations,
        fmt_f64(a.min_slack),
        fmt_f64(a.tol),
        worst
    )
}

/// CSV with header `alpha,beta,region,trials,min_slack,mean_slack,violations`,
/// `\n` line endings and no quoting.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("alpha,beta,region,trials,min_slack,mean_slack,violations\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(r.alpha),
            fmt_f64(r.beta),
            r.region.as_str(),
            r.trials,
            fmt_f64(r.min_slack),
            fmt_f64(r.mean_slack),
            r.violations
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::DEFAULT_TOL;

    #[test]
    fn parses_pauli_x() {
        let m = parse_matrix(r#"{"dim":2,"re":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(m[(0, 1)], Complex64::ONE);
        assert_eq!(m[(0, 0)], Complex64::ZERO);
    }

    #[test]
    fn parses_pauli_y_with_imaginary_part() {
        let m =
            parse_matrix(r#"{"dim":2,"re":[[0,0],[0,0]],"im":[[0,-1],[1,0]]}"#).unwrap();
        assert_eq!(m[(0, 1)], -Complex64::I);
        assert_eq!(m[(1, 0)], Complex64::I);
    }

    #[test]
    fn rejects_bad_shapes_and_nonfinite() {
        assert!(parse_matrix(r#"{"dim":2,"re":[[1,0]]}"#).is_err());
        assert!(parse_matrix(r#"{"dim":2,"re":[[1,0],[0,1]],"im":[[0]]}"#).is_err());
        assert!(parse_matrix("not json").is_err());
        assert!(parse_matrix(r#"{"dim":0,"re":[]}"#).is_err());
    }

    #[test]
    fn matrix_round_trips_exactly() {
        let m = ComplexMatrix::from_fn(3, |i, j| {
            Complex64::new(
                (i as f64 + 0.1) / (j as f64 + 1.7),
                if i == j { 0.0 } else { -0.325_f64.powi(i as i32 + 1) },
            )
        });
        let back = parse_matrix(&matrix_to_json(&m)).unwrap();
        assert_eq!(m.entries(), back.entries());

        let real = ComplexMatrix::diagonal(&[0.6, 0.4]);
        let json = matrix_to_json(&real);
        assert!(!json.contains("\"im\""));
        assert_eq!(parse_matrix(&json).unwrap().entries(), real.entries());
    }

    #[test]
    fn verdict_round_trips() {
        let v = InequalityVerdict::evaluate("thm31", 0.0625, 0.0625, DEFAULT_TOL);
        let parsed = parse_verdict(&verdict_to_json(&v)).unwrap();
        assert_eq!(parsed.name, v.name);
        assert_eq!(parsed.lhs, v.lhs);
        assert_eq!(parsed.rhs, v.rhs);
        assert_eq!(parsed.slack, v.slack);
        assert_eq!(parsed.holds, v.holds);
        assert_eq!(parsed.tol, v.tol);
    }

    #[test]
    fn float_formatting_has_17_significant_digits() {
        let x = std::f64::consts::PI;
        let s = fmt_f64(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert!(s.starts_with("3.1415926535897931"));
    }
}
