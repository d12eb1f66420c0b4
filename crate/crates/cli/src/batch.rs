//! Batch runs over a list of polynomials, written as CSV in input order.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use genbound::numberfield::Polynomial;
use genbound::Error;
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::report::{self, FieldReport};
use crate::{compute, CliError, RunConfig};

/// One input line: a polynomial and an optional discriminant after `;`.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchLine {
    pub index: usize,
    pub poly: String,
    pub disc: Option<String>,
}

pub fn parse_lines(text: &str) -> Vec<BatchLine> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                return None;
            }
            let (poly, disc) = match line.split_once(';') {
                Some((p, d)) => (p.trim(), Some(d.trim()).filter(|d| !d.is_empty())),
                None => (line, None),
            };
            Some(BatchLine { index: i + 1, poly: poly.to_string(), disc: disc.map(str::to_string) })
        })
        .collect()
}

fn checkpoint_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".ckpt");
    PathBuf::from(s)
}

fn read_checkpoint(path: &Path) -> Option<usize> {
    fs::read_to_string(path).ok()?.trim().parse().ok()
}

/// Integrity failures are reported as such; everything else lands in the
/// errors column.
fn process(line: &BatchLine, cfg: &RunConfig) -> (FieldReport, bool) {
    let failed = |poly: &str, msg: String| {
        let rep = FieldReport { poly: poly.to_string(), errors: vec![msg], ..Default::default() };
        (rep, false)
    };
    let poly: Polynomial = match line.poly.parse() {
        Ok(p) => p,
        Err(e) => return failed(&line.poly, e.to_string()),
    };
    let disc = match &line.disc {
        Some(d) => match d.parse::<BigInt>() {
            Ok(v) => Some(v),
            Err(e) => return failed(&line.poly, format!("discriminant {d}: {e}")),
        },
        None => None,
    };
    let cache = cfg.cache.as_ref().map(|dir| dir.join(format!("{}.json", poly.content_hash())));
    let mut cfg = cfg.clone();
    cfg.list_ideals = false;
    match compute(poly.clone(), disc.as_ref(), &cfg, cache.as_deref()) {
        Ok(rep) => (rep, false),
        Err(e) => {
            let integrity = matches!(e, CliError::Core(Error::Integrity(_) | Error::Coverage { .. }));
            let mut rep = FieldReport {
                poly: poly.to_string(),
                hash: poly.content_hash(),
                ..Default::default()
            };
            rep.errors.push(e.to_string());
            (rep, integrity)
        }
    }
}

pub fn run_batch(list: &Path, out: Option<&Path>, jobs: usize, cfg: &RunConfig) -> Result<u8, CliError> {
    let io = |e: io::Error| CliError::Io(e.to_string());
    let text = fs::read_to_string(list).map_err(|e| CliError::Io(format!("{}: {e}", list.display())))?;
    let lines = parse_lines(&text);
    if let Some(dir) = &cfg.cache {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;

    let ckpt = out.map(checkpoint_path);
    let resume_from = match (out, &ckpt) {
        (Some(o), Some(c)) if o.exists() => read_checkpoint(c),
        _ => None,
    };
    let sink: Box<dyn Write> = match out {
        Some(o) if resume_from.is_some() => {
            Box::new(OpenOptions::new().append(true).open(o).map_err(io)?)
        }
        Some(o) => Box::new(File::create(o).map_err(io)?),
        None => Box::new(io::stdout()),
    };
    let mut writer = csv::WriterBuilder::new().from_writer(sink);
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    if resume_from.is_none() {
        writer.write_record(report::CSV_HEADER).map_err(csv_err)?;
        writer.flush().map_err(io)?;
    }
    let done = resume_from.unwrap_or(0);
    if done > 0 {
        log::info!("resuming after input line {done}");
    }
    let pending: Vec<&BatchLine> = lines.iter().filter(|l| l.index > done).collect();
    let mut integrity_failures = 0usize;
    for chunk in pending.chunks(jobs.max(1) * 4) {
        let results: Vec<(FieldReport, bool)> =
            pool.install(|| chunk.par_iter().map(|l| process(l, cfg)).collect());
        for (line, (rep, integrity)) in chunk.iter().zip(&results) {
            writer.write_record(report::csv_row(line.index, rep)).map_err(csv_err)?;
            if *integrity {
                integrity_failures += 1;
            }
        }
        writer.flush().map_err(io)?;
        if let (Some(c), Some(last)) = (&ckpt, chunk.last()) {
            fs::write(c, format!("{}\n", last.index)).map_err(io)?;
        }
    }
    if let Some(c) = &ckpt {
        if c.exists() {
            fs::remove_file(c).map_err(io)?;
        }
    }
    Ok(if integrity_failures > 0 { 3 } else { 0 })
}
