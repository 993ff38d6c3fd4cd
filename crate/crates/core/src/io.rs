//! CSV formats shared with the CLI: points as `x,y,label`, curves as ordered
//! `x,y` rows. Floats are printed with 17 significant digits so files
//! round-trip bit-exactly.

use crate::error::{Error, Result};
use crate::geom::Point2;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

/// 17 significant digits: enough to reconstruct any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_points_csv(path: &Path, points: &[Point2], labels: Option<&[i32]>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != points.len() {
            return Err(Error::LengthMismatch(points.len(), l.len()));
        }
    }
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "x,y,label")?;
    for (i, p) in points.iter().enumerate() {
        let label = labels.map_or(0, |l| l[i]);
        writeln!(w, "{},{},{}", fmt_f64(p.x), fmt_f64(p.y), label)?;
    }
    Ok(())
}

pub fn write_curve_csv(path: &Path, points: &[Point2]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "x,y")?;
    for p in points {
        writeln!(w, "{},{}", fmt_f64(p.x), fmt_f64(p.y))?;
    }
    Ok(())
}

/// Read `x,y[,label]` rows; a non-numeric first row is treated as a header.
/// Missing labels default to 0.
pub fn read_points_csv(path: &Path) -> Result<(Vec<Point2>, Vec<i32>)> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::Parse(format!(
                "line {}: expected at least 2 comma-separated fields",
                lineno + 1
            )));
        }
        let x = fields[0].parse::<f64>();
        let y = fields[1].parse::<f64>();
        match (x, y) {
            (Ok(x), Ok(y)) => {
                let label = if fields.len() > 2 {
                    fields[2].parse::<i32>().map_err(|_| {
                        Error::Parse(format!("line {}: bad label '{}'", lineno + 1, fields[2]))
                    })?
                } else {
                    0
                };
                points.push(Point2::new(x, y));
                labels.push(label);
            }
            _ if lineno == 0 => continue, // header
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: non-numeric coordinates '{}'",
                    lineno + 1,
                    line
                )))
            }
        }
    }
    Ok((points, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_roundtrip_bit_exactly() {
        let dir = std::env::temp_dir().join("filament_io_test");
        std::fs::create_dir_all(&dir).expect("mkdir");
        let path = dir.join("pts.csv");
        let pts = vec![
            Point2::new(0.1, -0.2),
            Point2::new(std::f64::consts::PI, 1e-17),
            Point2::new(-1.0 / 3.0, 2.0f64.sqrt()),
        ];
        let labels = vec![0, -1, 7];
        write_points_csv(&path, &pts, Some(&labels)).expect("write");
        let (rp, rl) = read_points_csv(&path).expect("read");
        assert_eq!(rl, labels);
        for (a, b) in pts.iter().zip(&rp) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn curve_csv_reads_back_without_labels() {
        let dir = std::env::temp_dir().join("filament_io_test");
        std::fs::create_dir_all(&dir).expect("mkdir");
        let path = dir.join("curve.csv");
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 2.0)];
        write_curve_csv(&path, &pts).expect("write");
        let (rp, rl) = read_points_csv(&path).expect("read");
        assert_eq!(rp.len(), 2);
        assert_eq!(rl, vec![0, 0]);
        std::fs::remove_file(&path).ok();
    }
}
