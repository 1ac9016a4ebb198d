//! Edge-list readers and writers for SNAP signed and KONECT timestamped files.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};

use super::{NodeId, RawEdge, TrustNetwork};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeFormat {
    /// `src dst sign` with sign `1` or `-1`.
    SnapSigned,
    /// `src dst weight timestamp`; the sign of `weight` is the edge sign.
    KonectTimestamped,
}

impl FromStr for EdgeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snap-signed" | "snap" => Ok(EdgeFormat::SnapSigned),
            "konect-timestamped" | "konect" => Ok(EdgeFormat::KonectTimestamped),
            other => Err(Error::Config(format!(
                "unknown edge-list format '{other}' (expected snap-signed or konect-timestamped)"
            ))),
        }
    }
}

/// Parses an edge list. Node ids are remapped to `0..n` in ascending order of
/// their dataset ids, which are kept as labels.
pub fn parse_edge_list<R: BufRead>(mut reader: R, format: EdgeFormat) -> Result<TrustNetwork> {
    let mut records: Vec<(u64, u64, i64, Option<i64>)> = Vec::new();
    let mut line = String::new();
    let mut line_no = 0;
    loop {
        line.clear();
        let read = reader
            .read_line(&mut line)
            .map_err(|e| Error::parse(line_no + 1, e.to_string()))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        records.push(parse_record(trimmed, format, line_no)?);
    }

    let mut ids: Vec<u64> = records.iter().flat_map(|r| [r.0, r.1]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, NodeId> = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i as NodeId))
        .collect();
    let raw = records
        .into_iter()
        .map(|(src, dst, sign, timestamp)| RawEdge {
            src: index[&src],
            dst: index[&dst],
            sign,
            timestamp,
        })
        .collect();
    TrustNetwork::assemble(ids, raw)
}

fn parse_record(
    line: &str,
    format: EdgeFormat,
    line_no: usize,
) -> Result<(u64, u64, i64, Option<i64>)> {
    let mut fields = line.split_whitespace();
    let mut next = |what: &str| {
        fields
            .next()
            .ok_or_else(|| Error::parse(line_no, format!("missing {what}")))
    };
    let src = parse_id(next("source")?, line_no)?;
    let dst = parse_id(next("target")?, line_no)?;
    match format {
        EdgeFormat::SnapSigned => {
            let raw = next("sign")?;
            let sign = match raw.parse::<i64>() {
                Ok(1) => 1,
                Ok(-1) => -1,
                Ok(0) => return Err(Error::parse(line_no, "sign 0 is not a valid edge sign")),
                _ => return Err(Error::parse(line_no, format!("invalid sign '{raw}'"))),
            };
            Ok((src, dst, sign, None))
        }
        EdgeFormat::KonectTimestamped => {
            let raw = next("weight")?;
            let weight: f64 = raw
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid weight '{raw}'")))?;
            if !weight.is_finite() {
                return Err(Error::parse(line_no, format!("invalid weight '{raw}'")));
            }
            let raw_ts = next("timestamp")?;
            let timestamp = parse_timestamp(raw_ts)
                .ok_or_else(|| Error::parse(line_no, format!("invalid timestamp '{raw_ts}'")))?;
            let sign = if weight > 0.0 {
                1
            } else if weight < 0.0 {
                -1
            } else {
                0
            };
            Ok((src, dst, sign, Some(timestamp)))
        }
    }
}

fn parse_id(field: &str, line_no: usize) -> Result<u64> {
    field
        .parse()
        .map_err(|_| Error::parse(line_no, format!("invalid node id '{field}'")))
}

fn parse_timestamp(field: &str) -> Option<i64> {
    field.parse::<i64>().ok().or_else(|| {
        let f: f64 = field.parse().ok()?;
        (f.is_finite() && f.fract() == 0.0).then_some(f as i64)
    })
}

/// Guesses the format from the first non-blank line: KONECT files open with a
/// `%` header, SNAP files with `#`; otherwise the field count decides.
pub fn sniff_format<R: BufRead>(reader: R) -> Option<EdgeFormat> {
    for line in reader.lines().take(64) {
        let line = line.ok()?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('%') {
            return Some(EdgeFormat::KonectTimestamped);
        }
        if trimmed.starts_with('#') {
            return Some(EdgeFormat::SnapSigned);
        }
        return match trimmed.split_whitespace().count() {
            3 => Some(EdgeFormat::SnapSigned),
            n if n >= 4 => Some(EdgeFormat::KonectTimestamped),
            _ => None,
        };
    }
    None
}

fn open(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let inner: Box<dyn Read> = if path.extension().is_some_and(|ext| ext == "gz") {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    Ok(Box::new(BufReader::with_capacity(1 << 20, inner)))
}

/// Reads an edge-list file, gunzipping `.gz` files. Without an explicit
/// format the file is sniffed.
pub fn read_edge_list(path: &Path, format: Option<EdgeFormat>) -> Result<TrustNetwork> {
    let format = match format {
        Some(f) => f,
        None => sniff_format(open(path)?).ok_or_else(|| {
            Error::Config(format!("cannot detect edge-list format of {}", path.display()))
        })?,
    };
    parse_edge_list(open(path)?, format)
}

/// Writes `net` with dataset labels as node ids.
pub fn write_edge_list<W: Write>(net: &TrustNetwork, mut out: W, format: EdgeFormat) -> Result<()> {
    let io = |e| Error::io("<edge list>", e);
    for e in net.edges() {
        let (src, dst, sign) = (net.label(e.src), net.label(e.dst), e.sign.as_i8());
        match format {
            EdgeFormat::SnapSigned => writeln!(out, "{src}\t{dst}\t{sign}").map_err(io)?,
            EdgeFormat::KonectTimestamped => {
                let ts = e.timestamp.ok_or(Error::MissingTimestamps)?;
                writeln!(out, "{src} {dst} {sign} {ts}").map_err(io)?
            }
        }
    }
    Ok(())
}
