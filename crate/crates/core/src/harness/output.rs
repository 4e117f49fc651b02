//! CSV results: one header row, one row per SNR point.
//!
//! Floating-point columns are written with 17 significant digits so a
//! reload reproduces every value bit for bit.

use std::path::Path;

use super::config::SimConfig;
use super::run::FerPoint;
use crate::error::{Error, Result};

const HEADER: [&str; 13] = [
    "snr_db",
    "frames",
    "errors",
    "fer",
    "scheme",
    "decoder",
    "list",
    "n_code",
    "rate",
    "channel",
    "seed",
    "user_errors",
    "wall_time_s",
];

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub point: FerPoint,
    pub scheme: String,
    pub decoder: String,
    pub list: usize,
    pub n_code: usize,
    pub rate: f64,
    pub channel: String,
    pub seed: u64,
}

fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_results(points: &[FerPoint], cfg: &SimConfig, path: impl AsRef<Path>) -> Result<()> {
    if points.is_empty() {
        return Err(Error::invalid("no points to write"));
    }
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(HEADER)?;
    for p in points {
        let users: Vec<String> = p.user_errors.iter().map(u64::to_string).collect();
        w.write_record([
            exact(p.snr_db),
            p.frames_run.to_string(),
            p.frame_errors.to_string(),
            exact(p.fer),
            cfg.scheme.name().to_string(),
            cfg.decoder.name().to_string(),
            cfg.decoder.list_size().to_string(),
            cfg.n_code.to_string(),
            exact(cfg.rate),
            cfg.fading.name(),
            cfg.seed.to_string(),
            users.join(";"),
            exact(p.wall_time_s),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: usize, name: &str) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::format(name, line, format!("bad `{}` column", HEADER[i])))
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let mut r = csv::Reader::from_path(path)?;
    if r.headers()?.iter().ne(HEADER) {
        return Err(Error::format(&name, 1, "unexpected header"));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let users = rec.get(11).unwrap_or("");
        let user_errors = if users.is_empty() {
            Vec::new()
        } else {
            users
                .split(';')
                .map(|s| s.parse().map_err(|_| Error::format(&name, line, "bad `user_errors` column")))
                .collect::<Result<_>>()?
        };
        rows.push(ResultRow {
            point: FerPoint {
                snr_db: field(&rec, 0, line, &name)?,
                frames_run: field(&rec, 1, line, &name)?,
                frame_errors: field(&rec, 2, line, &name)?,
                fer: field(&rec, 3, line, &name)?,
                user_errors,
                wall_time_s: field(&rec, 12, line, &name)?,
            },
            scheme: field(&rec, 4, line, &name)?,
            decoder: field(&rec, 5, line, &name)?,
            list: field(&rec, 6, line, &name)?,
            n_code: field(&rec, 7, line, &name)?,
            rate: field(&rec, 8, line, &name)?,
            channel: field(&rec, 9, line, &name)?,
            seed: field(&rec, 10, line, &name)?,
        });
    }
    Ok(rows)
}
