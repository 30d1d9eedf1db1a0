//! Plain CSV export for tools without HDF5 support.
//!
//! Comma separated, LF line endings, no quoting. Floats are written with
//! 17 significant digits so they parse back to the same bits.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;

use super::DatasetBundle;
use crate::error::{Error, Result};

fn write_matrix(path: &Path, prefix: &str, m: &Array2<f64>) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    let header: Vec<String> = (0..m.ncols()).map(|j| format!("{prefix}{j}")).collect();
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    let mut line = String::new();
    for row in m.rows() {
        line.clear();
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{x:.16e}"));
        }
        line.push('\n');
        out.write_all(line.as_bytes()).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Writes `features.csv`, `labels.csv` and, when the hidden matrix is
/// present, `hidden_features.csv` into `dir`. Returns the written paths.
pub fn export_csv(bundle: &DatasetBundle, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let features = dir.join("features.csv");
    write_matrix(&features, "f", &bundle.visible)?;
    written.push(features);

    let labels = dir.join("labels.csv");
    let mut text = String::from("label\n");
    for l in &bundle.labels {
        text.push_str(&format!("{l}\n"));
    }
    std::fs::write(&labels, text).map_err(|e| Error::io(&labels, e))?;
    written.push(labels);

    if let Some(hidden) = &bundle.hidden {
        let path = dir.join("hidden_features.csv");
        write_matrix(&path, "h", hidden)?;
        written.push(path);
    }
    Ok(written)
}

/// Reads a matrix written by [`export_csv`].
pub fn read_features_csv(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format(format!("{} is empty", path.display())))?
        .map_err(|e| Error::io(path, e))?;
    let n_cols = header.split(',').count();
    let mut data = Vec::new();
    let mut n_rows = 0;
    for (n, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let before = data.len();
        for cell in line.split(',') {
            data.push(cell.parse::<f64>().map_err(|e| {
                Error::Format(format!("{}:{}: bad number {cell:?}: {e}", path.display(), n + 2))
            })?);
        }
        if data.len() - before != n_cols {
            return Err(Error::Format(format!("{}:{}: expected {n_cols} fields", path.display(), n + 2)));
        }
        n_rows += 1;
    }
    Array2::from_shape_vec((n_rows, n_cols), data).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_labels_csv(path: impl AsRef<Path>) -> Result<Vec<u32>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .skip(1)
        .map(|l| l.trim().parse().map_err(|e| Error::Format(format!("bad label {l:?}: {e}"))))
        .collect()
}
