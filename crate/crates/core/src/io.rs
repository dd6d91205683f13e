//! CSV/JSON persistence for problems and generated instances.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::objectives::{KernelGramian, LogisticProblem, RegressionProblem};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("not a number: '{s}'")))
}

/// Writes a dense matrix, one row per line, with an optional header.
pub fn write_matrix_csv(path: &Path, m: &DMatrix<f64>, header: Option<&[String]>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if let Some(h) = header {
        w.write_record(h)?;
    }
    for i in 0..m.nrows() {
        w.write_record(m.row(i).iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dense matrix; `has_header` skips the first line.
pub fn read_matrix_csv(path: &Path, has_header: bool) -> Result<DMatrix<f64>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(rec.iter().map(parse_f64).collect::<Result<_>>()?);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::invalid(format!("ragged rows in {}", path.display())));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn labelled_header(first: &str, prefix: &str, p: usize) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain((0..p).map(|j| format!("{prefix}{j}")))
        .collect()
}

fn split_first_column(m: DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    if m.ncols() < 2 {
        return Err(Error::invalid("expected a label column and at least one feature"));
    }
    let y = m.column(0).into_owned();
    let x = m.columns(1, m.ncols() - 1).into_owned();
    Ok((y, x))
}

/// Header `y,x0,x1,…`; response in the first column.
pub fn save_regression(problem: &RegressionProblem, path: &Path) -> Result<()> {
    let x = problem.design();
    let mut m = DMatrix::zeros(x.nrows(), x.ncols() + 1);
    m.set_column(0, problem.response());
    m.columns_mut(1, x.ncols()).copy_from(x);
    write_matrix_csv(path, &m, Some(&labelled_header("y", "x", x.ncols())))
}

pub fn load_regression(path: &Path) -> Result<RegressionProblem> {
    let (y, x) = split_first_column(read_matrix_csv(path, true)?)?;
    RegressionProblem::new(x, y)
}

/// Header `label,x0,x1,…`; label in the first column. The ridge is not stored.
pub fn save_logistic(problem: &LogisticProblem, path: &Path) -> Result<()> {
    let x = problem.features();
    let mut m = DMatrix::zeros(x.nrows(), x.ncols() + 1);
    m.set_column(0, problem.labels());
    m.columns_mut(1, x.ncols()).copy_from(x);
    write_matrix_csv(path, &m, Some(&labelled_header("label", "x", x.ncols())))
}

pub fn load_logistic(path: &Path, ridge: f64) -> Result<LogisticProblem> {
    let (y, x) = split_first_column(read_matrix_csv(path, true)?)?;
    LogisticProblem::new(x, y, ridge)
}

/// Headerless dense matrix.
pub fn save_gramian(gram: &KernelGramian, path: &Path) -> Result<()> {
    write_matrix_csv(path, gram.matrix(), None)
}

pub fn load_gramian(path: &Path) -> Result<KernelGramian> {
    KernelGramian::from_matrix(read_matrix_csv(path, false)?)
}

pub(crate) fn write_vector_csv(path: &Path, name: &str, v: &DVector<f64>) -> Result<()> {
    let m = DMatrix::from_column_slice(v.len(), 1, v.as_slice());
    write_matrix_csv(path, &m, Some(&[name.to_string()]))
}

pub(crate) fn read_vector_csv(path: &Path) -> Result<DVector<f64>> {
    let m = read_matrix_csv(path, true)?;
    if m.ncols() != 1 {
        return Err(Error::invalid(format!(
            "{} should have one column",
            path.display()
        )));
    }
    Ok(m.column(0).into_owned())
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            assert_eq!(parse_f64(&fmt_f64(x)).unwrap(), x);
        }
    }

    #[test]
    fn regression_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let x = DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 1.0 / 3.0, -4.0]);
        let y = DVector::from_vec(vec![1.5, -0.25]);
        let p = RegressionProblem::new(x, y).unwrap();
        let path = dir.path().join("reg.csv");
        save_regression(&p, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("y,x0,x1\n"));
        assert_eq!(load_regression(&path).unwrap(), p);
    }

    #[test]
    fn logistic_and_gramian_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        let y = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let p = LogisticProblem::new(x, y, 1e-6).unwrap();
        let path = dir.path().join("log.csv");
        save_logistic(&p, &path).unwrap();
        assert_eq!(load_logistic(&path, 1e-6).unwrap(), p);

        let g = KernelGramian::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0])).unwrap();
        let path = dir.path().join("gram.csv");
        save_gramian(&g, &path).unwrap();
        assert_eq!(load_gramian(&path).unwrap().matrix(), g.matrix());
    }
}
