//! The `bench` subcommand: every selected method over every image at every
//! mask size, written as one MSE table and one PSNR table in CSV.

use std::borrow::Cow;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use htv_core::metrics::{evaluate, MetricsReport};
use htv_core::pnm::load_pnm;
use htv_core::raster::apply_mask_zero;
use htv_core::Error;

use crate::cli::BenchArgs;
use crate::mask_gen::{gen_mask, mix, MaskSpec};
use crate::run::{resolve_params, run_method, Method};

/// One (area_pct, image) work unit.
struct Task {
    pct: f64,
    name: String,
    path: PathBuf,
}

/// Outcome of a task: one optional report per selected method.
struct RowResult {
    pct: f64,
    name: String,
    cells: Vec<Option<MetricsReport>>,
    failures: usize,
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), Error> {
    let images = list_images(&args.images)?;
    if images.is_empty() {
        return Err(Error::InvalidParameter {
            reason: format!("no PNM images found in {}", args.images.display()),
        });
    }
    let methods = canonical_methods(&args.methods)?;
    let pcts = canonical_pcts(&args.area_pcts)?;
    let params = resolve_params(&args.solver);

    let tasks: Vec<Task> = pcts
        .iter()
        .flat_map(|&pct| {
            images.iter().map(move |(name, path)| Task {
                pct,
                name: name.clone(),
                path: path.clone(),
            })
        })
        .collect();

    let run_task = |task: &Task| -> RowResult {
        let mut row = RowResult {
            pct: task.pct,
            name: task.name.clone(),
            cells: vec![None; methods.len()],
            failures: 0,
        };
        // The mask depends only on (seed, image name, area), never on
        // scheduling, so reruns and thread counts cannot change it.
        let task_seed = mix(args.seed ^ fnv1a(&task.name) ^ task.pct.to_bits());
        let prepared = load_pnm(&task.path).map_err(Error::from).and_then(|original| {
            let spec = MaskSpec {
                shape: args.shape,
                area_pct: task.pct,
                placement: args.placement,
                seed: task_seed,
            };
            let mask = gen_mask(original.width(), original.height(), &spec)?;
            let input = apply_mask_zero(&original, &mask)?;
            Ok((original, mask, input))
        });
        let (original, mask, input) = match prepared {
            Ok(t) => t,
            Err(err) => {
                eprintln!("skipping {} at {}%: {err}", task.name, task.pct);
                row.failures = methods.len();
                return row;
            }
        };
        for (i, &method) in methods.iter().enumerate() {
            let start = Instant::now();
            let outcome = run_method(&input, &mask, method, &params).and_then(|(out, _)| {
                evaluate(&original, &out, &mask, method.name(), start.elapsed().as_secs_f64())
            });
            match outcome {
                Ok(report) => row.cells[i] = Some(report),
                Err(err) => {
                    eprintln!("{} failed on {} at {}%: {err}", method.name(), task.name, task.pct);
                    row.failures += 1;
                }
            }
        }
        row
    };

    #[cfg(feature = "parallel")]
    let results: Vec<RowResult> = {
        use rayon::prelude::*;
        tasks.par_iter().map(run_task).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<RowResult> = tasks.iter().map(run_task).collect();

    let header = table_header(&methods);
    let mse_rows = table_rows(&pcts, &results, &methods, |rep| rep.mse, fmt_mse);
    let psnr_rows = table_rows(&pcts, &results, &methods, |rep| rep.psnr_db, fmt_psnr);
    write_file(&suffixed(&args.out_csv, "_mse.csv"), &write_csv(&header, &mse_rows))?;
    write_file(&suffixed(&args.out_csv, "_psnr.csv"), &write_csv(&header, &psnr_rows))?;
    Ok(())
}

fn list_images(dir: &Path) -> Result<Vec<(String, PathBuf)>, Error> {
    let entries = fs::read_dir(dir).map_err(|err| Error::InvalidParameter {
        reason: format!("cannot read image directory {}: {err}", dir.display()),
    })?;
    let mut images = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|err| Error::InvalidParameter {
            reason: format!("cannot read image directory {}: {err}", dir.display()),
        })?;
        let path = entry.path();
        let is_pnm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "ppm" | "pnm"));
        if is_pnm {
            images.push((entry.file_name().to_string_lossy().into_owned(), path));
        }
    }
    images.sort();
    Ok(images)
}

/// Deduplicates and reorders the selection into the canonical column order.
fn canonical_methods(selected: &[Method]) -> Result<Vec<Method>, Error> {
    let out: Vec<Method> = Method::ALL
        .iter()
        .copied()
        .filter(|m| selected.contains(m))
        .collect();
    if out.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "at least one method is required".to_string(),
        });
    }
    Ok(out)
}

fn canonical_pcts(raw: &[f64]) -> Result<Vec<f64>, Error> {
    for &pct in raw {
        if !pct.is_finite() || pct <= 0.0 || pct > 50.0 {
            return Err(Error::InvalidParameter {
                reason: format!("area_pct must be in (0, 50], got {pct}"),
            });
        }
    }
    let mut pcts = raw.to_vec();
    pcts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pcts.dedup();
    Ok(pcts)
}

/// FNV-1a over the image name; a stable per-image salt for mask seeds.
fn fnv1a(s: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in s.as_bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

fn table_header(methods: &[Method]) -> Vec<String> {
    let mut header = vec!["area_pct".to_string(), "image".to_string()];
    header.extend(methods.iter().map(|m| m.name().to_string()));
    header.push("failures".to_string());
    header
}

/// Data rows in (area_pct, image) order with a mean summary row after each
/// area_pct group. Means are taken over the successful cells of a column.
fn table_rows(
    pcts: &[f64],
    results: &[RowResult],
    methods: &[Method],
    value: impl Fn(&MetricsReport) -> f64,
    format: impl Fn(f64) -> String,
) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for &pct in pcts {
        let group: Vec<&RowResult> = results.iter().filter(|r| r.pct == pct).collect();
        for r in &group {
            let mut row = vec![format!("{pct}"), r.name.clone()];
            row.extend(
                r.cells
                    .iter()
                    .map(|c| c.as_ref().map(|rep| format(value(rep))).unwrap_or_default()),
            );
            row.push(r.failures.to_string());
            rows.push(row);
        }
        let mut mean_row = vec![format!("{pct}"), "mean".to_string()];
        for i in 0..methods.len() {
            let values: Vec<f64> = group
                .iter()
                .filter_map(|r| r.cells[i].as_ref())
                .map(&value)
                .collect();
            if values.is_empty() {
                mean_row.push(String::new());
            } else {
                mean_row.push(format(values.iter().sum::<f64>() / values.len() as f64));
            }
        }
        mean_row.push(group.iter().map(|r| r.failures).sum::<usize>().to_string());
        rows.push(mean_row);
    }
    rows
}

/// MSE cell: scientific notation, 4 significant digits.
pub fn fmt_mse(v: f64) -> String {
    format!("{v:.3e}")
}

/// PSNR cell: fixed 4 decimals; unbounded (exact recovery) prints as inf.
pub fn fmt_psnr(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

/// RFC 4180 style: comma separated, LF line endings, fields quoted only
/// when they contain a comma, quote, or line break.
pub fn write_csv(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = Vec::new();
    push_record(&mut out, header);
    for row in rows {
        push_record(&mut out, row);
    }
    out
}

fn push_record(out: &mut Vec<u8>, fields: &[String]) {
    for (i, field) in fields.iter().enumerate() {
        if i > 0 {
            out.push(b',');
        }
        out.extend_from_slice(escape(field).as_bytes());
    }
    out.push(b'\n');
}

fn escape(field: &str) -> Cow<'_, str> {
    if field.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", field.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(field)
    }
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|err| Error::InvalidParameter {
        reason: format!("cannot write {}: {err}", path.display()),
    })
}
