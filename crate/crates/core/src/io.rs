//! Persistence: the `riesz-config v1` point format, the scaling-study CSV,
//! and JSON float serialization.
//!
//! Every float that leaves the process is written with 17 significant
//! digits, which round-trips an f64 exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::ser::{Error as _, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::analysis::ScalingRow;
use crate::config::{ConfigMeta, PointConfiguration};
use crate::error::{Error, Result};

pub const CONFIG_MAGIC: &str = "riesz-config v1";
pub const SCALING_CSV_HEADER: &str = "N,energy,tau,normalized,min_sep,scaled_sep,restarts,seed,runtime_s";

/// 17 significant digits in scientific notation, e.g. `1.0000000000000000e0`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn ser_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return s.serialize_none();
    }
    RawValue::from_string(fmt17(*v))
        .map_err(S::Error::custom)?
        .serialize(s)
}

pub(crate) fn ser_opt_f64<S: Serializer>(
    v: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_f64(x, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_vec_f64<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    struct F(f64);
    impl Serialize for F {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            ser_f64(&self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&F(*x))?;
    }
    seq.end()
}

/// Pretty JSON with 17-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn format_config(config: &PointConfiguration) -> String {
    let meta = &config.meta;
    let manifold = if meta.manifold.is_empty() { "none" } else { &meta.manifold };
    let mut out = String::with_capacity(64 + config.coords().len() * 25);
    out.push_str(CONFIG_MAGIC);
    out.push('\n');
    out.push_str(&format!(
        "d'={} N={} s={:?} manifold={} seed={}\n",
        config.dim(),
        config.len(),
        meta.s,
        manifold,
        meta.seed
    ));
    for p in config.points() {
        let row: Vec<String> = p.iter().map(|&c| fmt17(c)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_config(text: &str) -> Result<PointConfiguration> {
    let fmt_err = |line: usize, msg: String| Error::Format { line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == CONFIG_MAGIC => {}
        Some((_, l)) => {
            return Err(fmt_err(1, format!("expected '{CONFIG_MAGIC}', found '{}'", l.trim_end())))
        }
        None => return Err(fmt_err(1, "empty file".into())),
    }
    let (_, header) = lines
        .next()
        .ok_or_else(|| fmt_err(2, "missing header line".into()))?;
    let mut dim = None;
    let mut n = None;
    let mut meta = ConfigMeta {
        generator: "file".into(),
        ..ConfigMeta::default()
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let keys = ["d'", "N", "s", "manifold", "seed"];
    if fields.len() != keys.len() {
        return Err(fmt_err(2, format!("header needs fields {keys:?}")));
    }
    for (field, key) in fields.iter().zip(keys) {
        let value = field
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| fmt_err(2, format!("expected '{key}=...', found '{field}'")))?;
        let bad = || fmt_err(2, format!("invalid value in '{field}'"));
        match key {
            "d'" => dim = Some(value.parse::<usize>().map_err(|_| bad())?),
            "N" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            "s" => meta.s = value.parse::<f64>().map_err(|_| bad())?,
            "manifold" => meta.manifold = if value == "none" { String::new() } else { value.into() },
            _ => meta.seed = value.parse::<u64>().map_err(|_| bad())?,
        }
    }
    let (dim, n) = (dim.unwrap_or(0), n.unwrap_or(0));
    if dim == 0 {
        return Err(fmt_err(2, "d' must be positive".into()));
    }
    let mut coords = Vec::with_capacity(dim * n);
    let mut rows = 0;
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        let vals: Vec<&str> = line.split_whitespace().collect();
        if vals.len() != dim {
            return Err(fmt_err(
                line_no,
                format!("row {rows}: expected {dim} values, found {}", vals.len()),
            ));
        }
        for v in vals {
            coords.push(
                v.parse::<f64>()
                    .map_err(|_| fmt_err(line_no, format!("row {rows}: '{v}' is not a number")))?,
            );
        }
    }
    if rows != n {
        return Err(fmt_err(2, format!("header declares N={n} but file has {rows} rows")));
    }
    Ok(PointConfiguration::new(dim, coords)?.with_meta(meta))
}

pub fn write_config_file(path: impl AsRef<Path>, config: &PointConfiguration) -> Result<()> {
    fs::write(path, format_config(config))?;
    Ok(())
}

pub fn read_config_file(path: impl AsRef<Path>) -> Result<PointConfiguration> {
    parse_config(&fs::read_to_string(path)?)
}

pub fn format_scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::new();
    out.push_str(SCALING_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            fmt17(r.energy),
            fmt17(r.tau),
            fmt17(r.normalized),
            fmt17(r.min_sep),
            fmt17(r.scaled_sep),
            r.restarts,
            r.seed,
            fmt17(r.runtime_s)
        ));
    }
    out
}

pub fn write_scaling_csv(mut w: impl Write, rows: &[ScalingRow]) -> Result<()> {
    w.write_all(format_scaling_csv(rows).as_bytes())?;
    Ok(())
}

pub fn parse_scaling_csv(text: &str) -> Result<Vec<ScalingRow>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim_end() == SCALING_CSV_HEADER => {}
        _ => {
            return Err(Error::Format {
                line: 1,
                msg: format!("expected header '{SCALING_CSV_HEADER}'"),
            })
        }
    }
    let mut rows = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let err = |msg: &str| Error::Format {
            line: line_no,
            msg: msg.to_string(),
        };
        if f.len() != 9 {
            return Err(err("expected 9 columns"));
        }
        let num = |k: usize| f[k].trim().parse::<f64>().map_err(|_| err("bad number"));
        let int = |k: usize| f[k].trim().parse::<u64>().map_err(|_| err("bad integer"));
        rows.push(ScalingRow {
            n: int(0)? as usize,
            energy: num(1)?,
            tau: num(2)?,
            normalized: num(3)?,
            min_sep: num(4)?,
            scaled_sep: num(5)?,
            restarts: int(6)? as usize,
            seed: int(7)?,
            runtime_s: num(8)?,
        });
    }
    Ok(rows)
}
