//! Output formats: 16-bit binary graymaps, headered CSV and `key: value` reports.
//!
//! Floats are written with 17 significant digits so that they round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::iteration::PointCloud;
use crate::markov::{BBox, Raster};

/// Round-trip formatting of a float.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidParameter(format!("csv: {other:?}")),
    }
}

/// Binary PGM (`P5`), 16-bit big-endian samples, row-major with row 0 at the top.
pub fn write_pgm16<W: Write>(mut w: W, width: usize, height: usize, samples: &[u16]) -> Result<()> {
    if samples.len() != width * height {
        return Err(Error::InvalidParameter("graymap size mismatch".into()));
    }
    write!(w, "P5\n{width} {height}\n65535\n")?;
    let mut bytes = Vec::with_capacity(samples.len() * 2);
    for s in samples {
        bytes.extend_from_slice(&s.to_be_bytes());
    }
    w.write_all(&bytes)?;
    Ok(())
}

fn to_u16(x: f64) -> u16 {
    (x.clamp(0.0, 1.0) * 65535.0).round() as u16
}

/// Raster midpoints scaled linearly to `0..=65535`.
pub fn raster_graymap(raster: &Raster) -> Vec<u16> {
    raster.cells.iter().map(|c| to_u16(c.mid())).collect()
}

/// Point density of a cloud on a grid, `log(1 + count)` scaled to the full range.
pub fn cloud_graymap(cloud: &PointCloud, bbox: BBox, nx: usize, ny: usize) -> Vec<u16> {
    let template = Raster::constant(bbox, nx, ny, Interval::ZERO);
    let mut counts = vec![0u32; nx * ny];
    for z in &cloud.points {
        if let Some((ix, iy)) = template.pixel_of(*z) {
            counts[iy * nx + ix] += 1;
        }
    }
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    counts.iter().map(|&c| to_u16((1.0 + c as f64).ln() / (1.0 + top).ln())).collect()
}

pub fn write_raster_pgm(path: &Path, raster: &Raster) -> Result<()> {
    write_pgm16(BufWriter::new(File::create(path)?), raster.nx, raster.ny, &raster_graymap(raster))
}

/// Columns `re,im,weight,provenance`; provenance is the 1-based generator label.
pub fn write_cloud_csv<W: Write>(w: W, cloud: &PointCloud) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["re", "im", "weight", "provenance"]).map_err(csv_error)?;
    for k in 0..cloud.len() {
        let z = cloud.points[k];
        out.write_record([
            fmt_f64(z.re),
            fmt_f64(z.im),
            fmt_f64(cloud.weights[k]),
            (cloud.provenance[k] + 1).to_string(),
        ])
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_cloud_csv<R: std::io::Read>(r: R) -> Result<PointCloud> {
    let mut input = csv::Reader::from_reader(r);
    let (mut points, mut weights, mut provenance) = (Vec::new(), Vec::new(), Vec::new());
    for (line, record) in input.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let field = |i: usize| -> Result<&str> {
            record.get(i).ok_or_else(|| Error::InvalidParameter(format!("cloud row {} has too few fields", line + 2)))
        };
        let num = |i: usize| -> Result<f64> {
            field(i)?.trim().parse().map_err(|_| Error::InvalidParameter(format!("cloud row {}: bad number", line + 2)))
        };
        points.push(Complex64::new(num(0)?, num(1)?));
        weights.push(num(2)?);
        let label: usize = field(3)?
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cloud row {}: bad label", line + 2)))?;
        provenance
            .push(label.checked_sub(1).ok_or_else(|| Error::InvalidParameter("provenance labels start at 1".into()))?);
    }
    PointCloud::new(points, weights, provenance)
}

/// Columns `ix,iy,re,im,lo,hi`, rows in raster order.
pub fn write_raster_csv<W: Write>(w: W, raster: &Raster) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["ix", "iy", "re", "im", "lo", "hi"]).map_err(csv_error)?;
    for iy in 0..raster.ny {
        for ix in 0..raster.nx {
            let z = raster.center(ix, iy);
            let c = raster.get(ix, iy);
            out.write_record([
                ix.to_string(),
                iy.to_string(),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(c.lo),
                fmt_f64(c.hi),
            ])
            .map_err(csv_error)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Columns `x,lo,hi`.
pub fn write_staircase_csv<W: Write>(w: W, table: &[(f64, Interval)]) -> Result<()> {
    write_columns(w, &["x", "lo", "hi"], table.iter().map(|(x, v)| vec![*x, v.lo, v.hi]))
}

/// Headered CSV of numeric rows.
pub fn write_columns<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_error)?;
    for row in rows {
        out.write_record(row.iter().map(|x| fmt_f64(*x))).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

/// Plain-text report, one `key: value` pair per line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{k}: {v}")?;
        }
        Ok(())
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_header_and_byte_order() {
        let mut buf = Vec::new();
        write_pgm16(&mut buf, 2, 1, &[0x0102, 0xffff]).unwrap();
        assert_eq!(&buf[..buf.len() - 4], b"P5\n2 1\n65535\n");
        assert_eq!(&buf[buf.len() - 4..], &[1, 2, 255, 255]);
        assert!(write_pgm16(&mut Vec::new(), 2, 2, &[0]).is_err());
    }

    #[test]
    fn cloud_round_trip_is_exact() {
        let pts = vec![Complex64::new(0.1, -1.0 / 3.0), Complex64::new(std::f64::consts::PI, 1e-300)];
        let cloud = PointCloud::new(pts, vec![0.25, 0.75], vec![0, 1]).unwrap();
        let mut buf = Vec::new();
        write_cloud_csv(&mut buf, &cloud).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("re,im,weight,provenance\n"));
        assert_eq!(read_cloud_csv(&buf[..]).unwrap(), cloud);
    }

    #[test]
    fn report_lines() {
        let mut r = Report::new();
        r.push("delta", 1.5).push("scene", "dc1");
        assert_eq!(r.to_string(), "delta: 1.5\nscene: dc1\n");
        assert_eq!(r.get("scene"), Some("dc1"));
    }
}
