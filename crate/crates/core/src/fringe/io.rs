//! Scan files: a two-column CSV plus a JSON sidecar holding [`ScanMeta`].

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::scan::{FringeScan, ScanMeta};
use crate::error::{Error, Result};
use crate::lindblad::generator::check_schema;

pub const CSV_HEADER: [&str; 2] = ["omega_offset_rad_s", "pe"];

#[derive(Serialize, Deserialize)]
struct Row {
    omega_offset_rad_s: f64,
    pe: f64,
}

/// `scan.csv` → `scan.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_scan_csv<W: Write>(scan: &FringeScan, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (&omega_offset_rad_s, &pe) in scan.omegas().iter().zip(scan.pe()) {
        w.serialize(Row {
            omega_offset_rad_s,
            pe,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scan_csv<R: Read>(input: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().map(str::trim).ne(CSV_HEADER) {
        return Err(Error::InvalidInput(format!(
            "scan CSV header must be {}, got {}",
            CSV_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let (mut omegas, mut pe) = (Vec::new(), Vec::new());
    for row in r.deserialize::<Row>() {
        let row = row?;
        omegas.push(row.omega_offset_rad_s);
        pe.push(row.pe);
    }
    Ok((omegas, pe))
}

/// Writes `csv_path` and its sidecar.
pub fn write_scan(scan: &FringeScan, csv_path: &Path) -> Result<()> {
    write_scan_csv(scan, BufWriter::new(File::create(csv_path)?))?;
    let mut side = BufWriter::new(File::create(sidecar_path(csv_path))?);
    serde_json::to_writer_pretty(&mut side, &scan.meta)?;
    side.write_all(b"\n")?;
    side.flush()?;
    Ok(())
}

pub fn read_scan_meta(path: &Path) -> Result<ScanMeta> {
    let meta: ScanMeta = serde_json::from_reader(File::open(path)?)?;
    check_schema(meta.schema_version)?;
    meta.ramsey.validate()?;
    Ok(meta)
}

/// Reads `csv_path` with metadata from its sidecar.
pub fn read_scan(csv_path: &Path) -> Result<FringeScan> {
    let side = sidecar_path(csv_path);
    if !side.exists() {
        return Err(Error::InvalidInput(format!(
            "missing sidecar {} for {}",
            side.display(),
            csv_path.display()
        )));
    }
    read_scan_with_meta(csv_path, read_scan_meta(&side)?)
}

pub fn read_scan_with_meta(csv_path: &Path, meta: ScanMeta) -> Result<FringeScan> {
    let (omegas, pe) = read_scan_csv(File::open(csv_path)?)?;
    FringeScan::new(omegas, pe, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fringe::scan::{linear_grid, scan_fringe, FringeSource, NoiseSpec};
    use crate::ramsey::{FringeParams, RamseyConfig};

    fn sample() -> FringeScan {
        let cfg = RamseyConfig::with_pulse_area(1.0, 2.0, 0.01, 0.0).unwrap();
        let p = FringeParams::new(0.3, 0.1, 1.0).unwrap();
        let grid = linear_grid(0.0, 7.0, 64).unwrap();
        scan_fringe(
            &FringeSource::Params(p),
            &cfg,
            &grid,
            Some(NoiseSpec {
                seed: 3,
                sigma: 0.01,
            }),
        )
        .unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let scan = sample();
        let mut buf = Vec::new();
        write_scan_csv(&scan, &mut buf).unwrap();
        assert!(buf.starts_with(b"omega_offset_rad_s,pe\n"));
        let (o, p) = read_scan_csv(buf.as_slice()).unwrap();
        assert_eq!(o, scan.omegas());
        assert_eq!(p, scan.pe());
    }

    #[test]
    fn file_round_trip_with_sidecar() {
        let dir = std::env::temp_dir().join(format!("clock-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("scan.csv");
        let scan = sample();
        write_scan(&scan, &path).unwrap();
        assert_eq!(read_scan(&path).unwrap(), scan);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(read_scan_csv(&b"omega,pe\n0,0.5\n"[..]).is_err());
    }

    #[test]
    fn future_schema_rejected() {
        let mut v = serde_json::to_value(sample().meta).unwrap();
        v["schema_version"] = 99.into();
        let dir = std::env::temp_dir().join(format!("clock-io-schema-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("meta.json");
        std::fs::write(&p, v.to_string()).unwrap();
        assert!(read_scan_meta(&p).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
