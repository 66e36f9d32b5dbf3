//! File formats: field snapshots (binary PGM, CSV), error tables (CSV and a
//! whitespace-separated plot file) and the JSON run manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CellField;
use crate::mesh::UniformMesh;
use crate::mms::{ErrorRow, ErrorTable, StudyAxis};

/// Exact header of every error table.
pub const TABLE_HEADER: [&str; 7] = [
    "h",
    "dt",
    "err_Linf_L2_u",
    "err_Linf_L2_v",
    "err_Linf_Linf_u",
    "err_Linf_Linf_v",
    "runtime_s",
];

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotFormat {
    Pgm,
    Csv,
}

impl SnapshotFormat {
    pub fn extension(self) -> &'static str {
        match self {
            SnapshotFormat::Pgm => "pgm",
            SnapshotFormat::Csv => "csv",
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// 16-bit gray level of `x` on the range `[lo, hi]`, rounding half up.
pub fn gray_level(x: f64, lo: f64, hi: f64) -> u16 {
    let s = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
    (s * 65535.0 + 0.5).floor() as u16
}

/// Write `field` as a snapshot. PGM output maps `[0, 1]` to `[0, 65535]`.
pub fn write_field_snapshot(field: &CellField, path: &Path, format: SnapshotFormat) -> Result<()> {
    match format {
        SnapshotFormat::Pgm => write_pgm(field, path, (0.0, 1.0), None),
        SnapshotFormat::Csv => write_field_csv(field, path),
    }
}

/// Binary P5 graymap, maxval 65535, big-endian samples. The top image row is
/// the last mesh row so that `y` points up. An optional comment line goes
/// into the header.
pub fn write_pgm(
    field: &CellField,
    path: &Path,
    range: (f64, f64),
    comment: Option<&str>,
) -> Result<()> {
    let mesh = field.mesh();
    let (nx, ny) = (mesh.nx(), mesh.ny());
    let mut out = create(path)?;
    let io = |e| Error::io(path, e);
    out.write_all(b"P5\n").map_err(io)?;
    if let Some(c) = comment {
        writeln!(out, "# {c}").map_err(io)?;
    }
    write!(out, "{nx} {ny}\n65535\n").map_err(io)?;
    let values = field.values();
    let mut row = Vec::with_capacity(2 * nx);
    for j in (0..ny).rev() {
        row.clear();
        for &x in &values[j * nx..(j + 1) * nx] {
            row.extend_from_slice(&gray_level(x, range.0, range.1).to_be_bytes());
        }
        out.write_all(&row).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Parsed P5 image: `(width, height, maxval, samples top row first)`.
pub fn read_pgm(path: &Path) -> Result<(usize, usize, u16, Vec<u16>)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut pos = 0;
    let mut tokens = Vec::new();
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PGM header".into()));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    pos += 1;
    if tokens[0] != "P5" {
        return Err(Error::Format(format!("not a binary PGM: {}", tokens[0])));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad PGM header field {s:?}")))
    };
    let (w, h, maxval) = (parse(&tokens[1])?, parse(&tokens[2])?, parse(&tokens[3])?);
    if maxval != 65535 {
        return Err(Error::Format(format!("unsupported maxval {maxval}")));
    }
    let data = &bytes[pos..];
    if data.len() != 2 * w * h {
        return Err(Error::Format("PGM payload has the wrong length".into()));
    }
    let samples = data
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok((w, h, maxval as u16, samples))
}

/// One line per mesh row (`j = 0` first), shortest round-trip decimal form.
pub fn write_field_csv(field: &CellField, path: &Path) -> Result<()> {
    let nx = field.mesh().nx();
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(create(path)?);
    for row in field.values().chunks(nx) {
        wtr.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))
}

pub fn read_field_csv(path: &Path, mesh: &Arc<UniformMesh>) -> Result<CellField> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::Format(e.to_string()))?;
    let mut values = Vec::with_capacity(mesh.num_cells());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        if rec.len() != mesh.nx() {
            return Err(Error::Format(format!(
                "row of length {} on a mesh with nx = {}",
                rec.len(),
                mesh.nx()
            )));
        }
        for cell in rec.iter() {
            values.push(
                cell.parse::<f64>()
                    .map_err(|e| Error::Format(e.to_string()))?,
            );
        }
    }
    CellField::from_values(mesh, values)
}

/// CSV error table: the fixed header, one line per row and a final
/// `order,<s1>,<s2>,<s3>,<s4>` line with the observed orders of the four error columns.
pub fn write_error_table(table: &ErrorTable, path: &Path) -> Result<()> {
    let fmt_err = |e: csv::Error| Error::Format(e.to_string());
    let mut wtr = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(create(path)?);
    wtr.write_record(TABLE_HEADER).map_err(fmt_err)?;
    for r in &table.rows {
        let mut rec = vec![r.h.to_string(), r.dt.to_string()];
        rec.extend(r.errors().iter().map(|e| e.to_string()));
        rec.push(format!("{:.6}", r.runtime_s));
        wtr.write_record(&rec).map_err(fmt_err)?;
    }
    let mut last = vec!["order".to_string()];
    last.extend(table.orders.iter().map(|o| o.to_string()));
    wtr.write_record(&last).map_err(fmt_err)?;
    wtr.flush().map_err(|e| Error::io(path, e))
}

/// Rows and orders read back from [`write_error_table`] output.
pub fn read_error_table(path: &Path) -> Result<(Vec<ErrorRow>, [f64; 4])> {
    let fmt = |e: csv::Error| Error::Format(e.to_string());
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(fmt)?;
    let header = rdr.headers().map_err(fmt)?.clone();
    if header.iter().ne(TABLE_HEADER.iter().copied()) {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| Error::Format(format!("{s:?}: {e}")))
    };
    let mut rows = Vec::new();
    let mut orders = None;
    for rec in rdr.records() {
        let rec = rec.map_err(fmt)?;
        if &rec[0] == "order" {
            if rec.len() != 5 {
                return Err(Error::Format("order line must carry four slopes".into()));
            }
            orders = Some([num(&rec[1])?, num(&rec[2])?, num(&rec[3])?, num(&rec[4])?]);
            continue;
        }
        if rec.len() != 7 {
            return Err(Error::Format(format!("row with {} fields", rec.len())));
        }
        let f: Vec<f64> = rec.iter().map(num).collect::<Result<_>>()?;
        rows.push(ErrorRow {
            h: f[0],
            dt: f[1],
            err_linf_l2_u: f[2],
            err_linf_l2_v: f[3],
            err_linf_linf_u: f[4],
            err_linf_linf_v: f[5],
            runtime_s: f[6],
            finite: f[2..6].iter().all(|e| e.is_finite()),
        });
    }
    let orders = orders.ok_or_else(|| Error::Format("missing order line".into()))?;
    Ok((rows, orders))
}

/// Whitespace-separated columns for external log-log plotting.
pub fn write_plot_data(table: &ErrorTable, path: &Path, manifest: &str) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut out = create(path)?;
    let axis = match table.axis {
        StudyAxis::CellVolume => "h2",
        StudyAxis::TimeStep => "dt",
        StudyAxis::InterfaceThickness => "eps",
    };
    writeln!(out, "# {} ({manifest})", table.label).map_err(io)?;
    writeln!(
        out,
        "# {axis} err_Linf_L2_u err_Linf_L2_v err_Linf_Linf_u err_Linf_Linf_v"
    )
    .map_err(io)?;
    for (k, r) in table.keys.iter().zip(&table.rows) {
        let [a, b, c, d] = r.errors();
        writeln!(out, "{k:e} {a:e} {b:e} {c:e} {d:e}").map_err(io)?;
    }
    let [a, b, c, d] = table.orders;
    writeln!(out, "# order {a:.4} {b:.4} {c:.4} {d:.4}").map_err(io)?;
    out.flush().map_err(io)
}

/// Configuration echo written next to every set of outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub created_unix_s: u64,
    pub finished_unix_s: u64,
    pub config: serde_json::Value,
    pub monitor: Option<serde_json::Value>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config: serde_json::Value) -> Self {
        let now = unix_now();
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            created_unix_s: now,
            finished_unix_s: now,
            config,
            monitor: None,
            outputs: Vec::new(),
        }
    }

    pub fn write(&mut self, dir: &Path) -> Result<()> {
        self.finished_unix_s = unix_now();
        let path = dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))
    }
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn mesh(nx: usize, ny: usize) -> Arc<UniformMesh> {
        Arc::new(UniformMesh::new(nx, ny, nx as f64, ny as f64).unwrap())
    }

    #[test]
    fn gray_levels() {
        assert_eq!(gray_level(1.0, 0.0, 1.0), 65535);
        assert_eq!(gray_level(0.5, 0.0, 1.0), 32768);
        assert_eq!(gray_level(0.0, 0.0, 1.0), 0);
        assert_eq!(gray_level(-3.0, 0.0, 1.0), 0);
        assert_eq!(gray_level(7.0, 0.0, 1.0), 65535);
    }

    #[test]
    fn pgm_layout() {
        let dir = tempfile::tempdir().unwrap();
        let m = mesh(3, 2);
        let ones = CellField::constant(&m, 1.0);
        let p = dir.path().join("one.pgm");
        write_field_snapshot(&ones, &p, SnapshotFormat::Pgm).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert!(bytes.starts_with(b"P5\n3 2\n65535\n"));
        let (w, h, max, samples) = read_pgm(&p).unwrap();
        assert_eq!((w, h, max), (3, 2, 65535));
        assert!(samples.iter().all(|&s| s == 65535));

        let half = CellField::constant(&m, 0.5);
        write_pgm(&half, &p, (0.0, 1.0), Some("manifest.json")).unwrap();
        let (_, _, _, samples) = read_pgm(&p).unwrap();
        assert!(samples.iter().all(|&s| s == 32768));

        // bottom mesh row is the last image row
        let ramp = CellField::from_values(&m, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        write_pgm(&ramp, &p, (0.0, 1.0), None).unwrap();
        let (_, _, _, samples) = read_pgm(&p).unwrap();
        assert_eq!(samples, vec![65535, 65535, 65535, 0, 0, 0]);
    }

    #[test]
    fn io_failure() {
        let m = mesh(2, 2);
        let err = write_field_snapshot(
            &CellField::zeros(&m),
            Path::new("/nonexistent-dir/x.pgm"),
            SnapshotFormat::Pgm,
        )
        .unwrap_err();
        assert!(matches!(err, Error::IoFailure { .. }));
    }

    #[test]
    fn table_format() {
        let dir = tempfile::tempdir().unwrap();
        let rows: Vec<ErrorRow> = [0.25f64, 0.125]
            .iter()
            .map(|&h| ErrorRow {
                h,
                dt: h * h,
                err_linf_l2_u: 2.0 * h * h,
                err_linf_l2_v: h * h,
                err_linf_linf_u: 3.0 * h * h,
                err_linf_linf_v: 0.5 * h * h,
                runtime_s: 0.01,
                finite: true,
            })
            .collect();
        let keys = rows.iter().map(|r| r.h * r.h).collect();
        let table = ErrorTable::new(
            "t".into(),
            StudyAxis::CellVolume,
            keys,
            rows.clone(),
            vec![1.0],
            1.0,
        );
        let p = dir.path().join("t.csv");
        write_error_table(&table, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "h,dt,err_Linf_L2_u,err_Linf_L2_v,err_Linf_Linf_u,err_Linf_Linf_v,runtime_s"
        );
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("order,"));
        let (back, orders) = read_error_table(&p).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].err_linf_l2_u, rows[1].err_linf_l2_u);
        for o in orders {
            assert!((o - 1.0).abs() < 1e-12);
        }
        write_plot_data(&table, &dir.path().join("t.dat"), "manifest.json").unwrap();
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 12)) {
            let dir = tempfile::tempdir().unwrap();
            let m = mesh(4, 3);
            let f = CellField::from_values(&m, values).unwrap();
            let p = dir.path().join("f.csv");
            write_field_csv(&f, &p).unwrap();
            let back = read_field_csv(&p, &m).unwrap();
            for (a, b) in f.values().iter().zip(back.values()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
