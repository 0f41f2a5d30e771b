//! CSV serialization for signals, weight matrices, Laplacians, and eigen
//! systems. All floats are written in plain decimal notation with 17
//! significant digits, which round-trips `f64` exactly and keeps reruns
//! byte-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::laplacian::GraphLaplacian;
use crate::scalar::Scalar;
use crate::signal::Signal;
use crate::spectral::EigenSystem;
use crate::weights::WeightMatrix;

/// Formats a float in decimal notation with 17 significant digits.
pub fn format_float<T: Scalar>(v: T) -> String {
    let v = v.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let exponent = v.abs().log10().floor() as i64;
    let decimals = (16 - exponent).clamp(0, 340) as usize;
    format!("{v:.decimals$}")
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes a signal as `index,value` rows.
pub fn write_signal_csv<T: Scalar, W: Write>(out: &mut W, signal: &Signal<T>) -> std::io::Result<()> {
    writeln!(out, "index,value")?;
    for (i, &v) in signal.values().iter().enumerate() {
        writeln!(out, "{i},{}", format_float(v))?;
    }
    Ok(())
}

pub fn save_signal_csv<T: Scalar>(path: &Path, signal: &Signal<T>) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    write_signal_csv(&mut w, signal).map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))
}

/// Reads a signal from `index,value` rows. Indices must count up from 0.
pub fn read_signal_csv<T: Scalar, R: BufRead>(reader: R) -> Result<Signal<T>> {
    let mut values = Vec::new();
    let mut lines = reader.lines().enumerate();
    match lines.next() {
        Some((_, Ok(header))) if header.trim_end() == "index,value" => {}
        Some((_, Ok(header))) => {
            return Err(Error::CsvParse {
                line: 1,
                message: format!("expected header 'index,value', got '{}'", header.trim_end()),
            })
        }
        Some((_, Err(e))) => {
            return Err(Error::CsvParse {
                line: 1,
                message: e.to_string(),
            })
        }
        None => {
            return Err(Error::CsvParse {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::CsvParse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let (index_part, value_part) = line.split_once(',').ok_or_else(|| Error::CsvParse {
            line: line_no,
            message: "expected 'index,value'".into(),
        })?;
        let index: usize = index_part.trim().parse().map_err(|_| Error::CsvParse {
            line: line_no,
            message: format!("bad index '{index_part}'"),
        })?;
        if index != values.len() {
            return Err(Error::CsvParse {
                line: line_no,
                message: format!("expected index {}, got {index}", values.len()),
            });
        }
        let value: f64 = value_part.trim().parse().map_err(|_| Error::CsvParse {
            line: line_no,
            message: format!("bad value '{value_part}'"),
        })?;
        if !value.is_finite() {
            return Err(Error::CsvParse {
                line: line_no,
                message: format!("value '{value_part}' is not finite"),
            });
        }
        values.push(T::from_f64(value).ok_or_else(|| Error::CsvParse {
            line: line_no,
            message: format!("value '{value_part}' not representable"),
        })?);
    }
    Signal::new(values)
}

pub fn load_signal_csv<T: Scalar>(path: &Path) -> Result<Signal<T>> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_signal_csv(BufReader::new(file))
}

/// Writes the upper triangle (plus diagonal) as `i,j,w` triplets.
pub fn write_weights_csv<T: Scalar, W: Write>(out: &mut W, w: &WeightMatrix<T>) -> std::io::Result<()> {
    writeln!(out, "i,j,w")?;
    for (i, j, wij) in w.upper_triangle() {
        writeln!(out, "{i},{j},{}", format_float(wij))?;
    }
    Ok(())
}

/// Weight triplets plus the row-sum column: `i,j,w,d_i`.
pub fn write_laplacian_csv<T: Scalar, W: Write>(
    out: &mut W,
    gl: &GraphLaplacian<T>,
) -> std::io::Result<()> {
    writeln!(out, "i,j,w,d_i")?;
    for (i, j, wij) in gl.weights().upper_triangle() {
        writeln!(
            out,
            "{i},{j},{},{}",
            format_float(wij),
            format_float(gl.degrees()[i])
        )?;
    }
    Ok(())
}

/// Eigen system rows: `mode_index,eigenvalue,component_0..component_{n-1}`.
pub fn write_eigen_csv<T: Scalar, W: Write>(
    out: &mut W,
    es: &EigenSystem<T>,
    n: usize,
) -> std::io::Result<()> {
    write!(out, "mode_index,eigenvalue")?;
    for i in 0..n {
        write!(out, ",component_{i}")?;
    }
    writeln!(out)?;
    for m in 0..es.k() {
        write!(out, "{m},{}", format_float(es.eigenvalues()[m]))?;
        for &c in es.eigenvector(m) {
            write!(out, ",{}", format_float(c))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn save_eigen_csv<T: Scalar>(path: &Path, es: &EigenSystem<T>, n: usize) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    write_eigen_csv(&mut w, es, n).map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))
}
