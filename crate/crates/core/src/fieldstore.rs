//! Ingestion of externally computed field tables and a binary cache for
//! Frobenius trace series.
//!
//! Table lines are strict CSV with no quoting:
//! `degree,c0,c1,...,c_{deg-1},1,d_K,r2`, `#`-prefixed lines are
//! comments. The cache is little-endian with a checksummed header; a
//! corrupt or version-skewed cache is always reported, never silently
//! recomputed.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;

use crate::densities::Group;
use crate::error::{Error, Result};
use crate::frobenius::{resolve_poly, TraceEntry, TraceSeries};
use crate::primes;
use crate::splitting::SplittingSymbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTableRecord {
    pub degree: u32,
    /// Monic defining polynomial, coefficients ascending.
    pub coeffs: Vec<i64>,
    pub d_k: i128,
    pub r1: u32,
    pub r2: u32,
    pub group: Group,
    /// 1-based source line, kept for diagnostics.
    pub line: usize,
}

impl FieldTableRecord {
    pub fn field_disc(&self) -> BigInt {
        BigInt::from(self.d_k)
    }

    pub fn to_table_line(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!(
            "{},{},{},{}",
            self.degree,
            coeffs.join(","),
            self.d_k,
            self.r2
        )
    }
}

fn parse_token<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {what} from {token:?}"),
    })
}

/// Parse a field table. Records must match the stated group's degree;
/// signatures must satisfy r1 + 2 r2 = degree and sign(d_K) = (-1)^r2.
pub fn parse_field_table(input: &str, group: Group) -> Result<Vec<FieldTableRecord>> {
    let mut records = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = text.split(',').collect();
        let degree: u32 = parse_token(tokens[0], line, "degree")?;
        if degree < 2 || degree > 16 {
            return Err(Error::Parse {
                line,
                message: format!("degree {degree} out of range"),
            });
        }
        let expected = degree as usize + 4;
        if tokens.len() != expected {
            return Err(Error::Parse {
                line,
                message: format!("expected {expected} fields, found {}", tokens.len()),
            });
        }
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        for token in &tokens[1..=degree as usize + 1] {
            coeffs.push(parse_token::<i64>(token, line, "coefficient")?);
        }
        let d_k: i128 = parse_token(tokens[degree as usize + 2], line, "field discriminant")?;
        let r2: u32 = parse_token(tokens[degree as usize + 3], line, "r2")?;
        if degree != group.degree() {
            return Err(Error::DataQuality(format!(
                "line {line}: degree {degree} does not match group {group}"
            )));
        }
        if *coeffs.last().unwrap() != 1 {
            return Err(Error::DataQuality(format!(
                "line {line}: defining polynomial is not monic"
            )));
        }
        if d_k == 0 {
            return Err(Error::DataQuality(format!(
                "line {line}: field discriminant must be nonzero"
            )));
        }
        if 2 * r2 > degree {
            return Err(Error::DataQuality(format!(
                "line {line}: signature violates r1 + 2 r2 = degree (r2 = {r2})"
            )));
        }
        // disc sign is (-1)^r2 for any number field
        if (d_k < 0) != (r2 % 2 == 1) {
            return Err(Error::DataQuality(format!(
                "line {line}: sign of d_K contradicts r2 = {r2}"
            )));
        }
        records.push(FieldTableRecord {
            degree,
            coeffs,
            d_k,
            r1: degree - 2 * r2,
            r2,
            group,
            line,
        });
    }
    Ok(records)
}

const DEDUP_PRIME_COUNT: usize = 20;

fn record_fingerprint(record: &FieldTableRecord) -> Result<Vec<String>> {
    let ps = primes::primes_up_to(100);
    let disc = record.field_disc();
    let mut out = Vec::with_capacity(DEDUP_PRIME_COUNT);
    for &p in ps.iter().take(DEDUP_PRIME_COUNT) {
        let sym = resolve_poly(&record.coeffs, &disc, p)?;
        out.push(match sym {
            Some(s) => s.to_string(),
            None => "?".to_string(),
        });
    }
    Ok(out)
}

/// Drop records that repeat an earlier (degree, d_K, splitting
/// fingerprint) key, collecting a human-readable collision log instead
/// of attempting any isomorphism decision.
pub fn dedup_field_records(
    records: Vec<FieldTableRecord>,
) -> Result<(Vec<FieldTableRecord>, Vec<String>)> {
    let mut seen: Vec<((u32, i128, Vec<String>), usize)> = Vec::new();
    let mut unique = Vec::new();
    let mut log = Vec::new();
    for record in records {
        let key = (record.degree, record.d_k, record_fingerprint(&record)?);
        if let Some((_, first_line)) = seen.iter().find(|(k, _)| *k == key) {
            log.push(format!(
                "line {}: duplicate of line {} (degree {}, d_K {})",
                record.line, first_line, record.degree, record.d_k
            ));
        } else {
            seen.push((key, record.line));
            unique.push(record);
        }
    }
    Ok((unique, log))
}

// ---------------------------------------------------------------------
// Binary trace cache

const CACHE_MAGIC: [u8; 4] = *b"FRTC";
const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct TraceCacheFile {
    pub group: Group,
    pub x: u64,
    /// (field id, series) pairs; the id is the field discriminant.
    pub blocks: Vec<(i64, TraceSeries)>,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn encode_payload(cache: &TraceCacheFile) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (id, series) in &cache.blocks {
        if series.x != cache.x {
            return Err(Error::Argument(format!(
                "series bound {} disagrees with cache bound {}",
                series.x, cache.x
            )));
        }
        out.extend_from_slice(&id.to_le_bytes());
        out.extend_from_slice(&(series.entries.len() as u64).to_le_bytes());
        for entry in &series.entries {
            out.extend_from_slice(&entry.p.to_le_bytes());
            match &entry.symbol {
                None => {
                    out.push(0);
                    out.push(0u8); // trace slot, unused for unresolved
                }
                Some(symbol) => {
                    let pairs = symbol.pairs();
                    out.push(pairs.len() as u8);
                    for &(e, f) in pairs {
                        out.push(e);
                        out.push(f);
                    }
                    out.push(symbol.artin_trace() as i8 as u8);
                }
            }
        }
    }
    Ok(out)
}

/// Serialize the cache: magic, version, group degree, x, block count,
/// payload checksum (FNV-1a), payload.
pub fn encode_trace_cache(cache: &TraceCacheFile) -> Result<Vec<u8>> {
    let payload = encode_payload(cache)?;
    let mut out = Vec::with_capacity(payload.len() + 33);
    out.extend_from_slice(&CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.push(cache.group.degree() as u8);
    out.extend_from_slice(&cache.x.to_le_bytes());
    out.extend_from_slice(&(cache.blocks.len() as u64).to_le_bytes());
    out.extend_from_slice(&fnv1a(&payload).to_le_bytes());
    out.extend_from_slice(&payload);
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Cache("truncated cache file".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
}

pub fn decode_trace_cache(bytes: &[u8]) -> Result<TraceCacheFile> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(4)? != CACHE_MAGIC {
        return Err(Error::Cache("bad magic; not a trace cache".into()));
    }
    let version = u32::from_le_bytes(cur.take(4)?.try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "cache version {version}, expected {CACHE_VERSION}"
        )));
    }
    let degree = cur.u8()? as u32;
    let group = Group::from_degree(degree)
        .ok_or_else(|| Error::Cache(format!("unknown group degree {degree}")))?;
    let x = cur.u64()?;
    let block_count = cur.u64()?;
    let checksum = cur.u64()?;
    let payload = &bytes[cur.pos..];
    if fnv1a(payload) != checksum {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let mut blocks = Vec::with_capacity(block_count as usize);
    for _ in 0..block_count {
        let id = cur.i64()?;
        let entry_count = cur.u64()?;
        let mut entries = Vec::with_capacity(entry_count as usize);
        for _ in 0..entry_count {
            let p = cur.u64()?;
            let len = cur.u8()? as usize;
            let symbol = if len == 0 {
                cur.u8()?;
                None
            } else {
                let mut shape = Vec::with_capacity(len);
                for _ in 0..len {
                    let e = cur.u8()? as u32;
                    let f = cur.u8()? as u32;
                    shape.push((e, f));
                }
                let symbol = SplittingSymbol::from_shape(&shape)
                    .map_err(|e| Error::Cache(format!("invalid symbol in cache: {e}")))?;
                let stored = cur.u8()? as i8;
                if stored as i64 != symbol.artin_trace() {
                    return Err(Error::Cache(format!(
                        "stored trace {stored} contradicts symbol {symbol} at p = {p}"
                    )));
                }
                Some(symbol)
            };
            entries.push(TraceEntry { p, symbol });
        }
        blocks.push((id, TraceSeries { x, entries }));
    }
    if cur.pos != bytes.len() {
        return Err(Error::Cache("trailing bytes after last block".into()));
    }
    Ok(TraceCacheFile { group, x, blocks })
}

/// Atomic write: serialize to a sibling temp file, then rename over the
/// destination.
pub fn write_trace_cache(path: &Path, cache: &TraceCacheFile) -> Result<()> {
    let bytes = encode_trace_cache(cache)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, &bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_trace_cache(path: &Path) -> Result<TraceCacheFile> {
    decode_trace_cache(&fs::read(path)?)
}

/// Text mirror of a cache: `field_id,p,symbol,a` per entry, `?,?` for
/// unresolved primes.
pub fn trace_cache_to_text(cache: &TraceCacheFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("# group={} x={}\n", cache.group, cache.x));
    for (id, series) in &cache.blocks {
        for entry in &series.entries {
            match &entry.symbol {
                Some(s) => {
                    out.push_str(&format!("{id},{},{s},{}\n", entry.p, s.artin_trace()));
                }
                None => out.push_str(&format!("{id},{},?,?\n", entry.p)),
            }
        }
    }
    out
}
