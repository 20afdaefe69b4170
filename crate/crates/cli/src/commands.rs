//! One function per subcommand. Every command resolves its inputs from
//! the merged configuration, writes a `#`-header (command tag, config
//! echo, input hashes) followed by comma-separated data lines, and
//! returns the number of data lines written.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use rayon::prelude::*;

use frobclt_core::clt::{
    family_moments, normalized_statistic, sample_family_statistics, sample_symbols, MomentReport,
    SamplerConfig,
};
use frobclt_core::cubic::{
    dedup_candidates, enumerate_fields, enumerate_partition, max_leading_coefficient,
    BinaryCubicForm, CubicFieldRecord,
};
use frobclt_core::densities::{density_table, Group};
use frobclt_core::fieldstore::{
    dedup_field_records, parse_field_table, read_trace_cache, trace_cache_to_text,
    write_trace_cache, FieldTableRecord, TraceCacheFile,
};
use frobclt_core::frobenius::{resolve_poly, scan_form, scan_poly, PrimeTable, TraceSeries};
use frobclt_core::hecke;
use frobclt_core::satotate::{
    cdf_measure_moment, horizontal_moment, vertical_moment, vertical_reference,
    MeasureMomentRequest, MeasurePoint,
};
use frobclt_core::splitting::SplittingSymbol;

use crate::config::Config;
use crate::report::{header, Sink};

fn rational_str(q: &num_rational::BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// User-input problem: reported as an argument error (exit code 2).
fn arg_err(msg: impl Into<String>) -> anyhow::Error {
    frobclt_core::Error::Argument(msg.into()).into()
}

fn load_table(cfg: &Config, group: Group) -> Result<(PathBuf, Vec<FieldTableRecord>)> {
    let path = cfg
        .get_path("table")
        .ok_or_else(|| arg_err("no field table given (--table or table= in config)"))?;
    let path = PathBuf::from(path);
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading table {}", path.display()))?;
    let records = parse_field_table(&text, group)?;
    Ok((path, records))
}

/// `c0,c1,...,1` ascending coefficients of a monic polynomial.
pub fn parse_poly(text: &str) -> Result<Vec<i64>> {
    let coeffs: Vec<i64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| arg_err(format!("polynomial coefficient {t:?} is not an integer")))
        })
        .collect::<Result<_>>()?;
    if coeffs.len() < 3 {
        return Err(arg_err(format!(
            "polynomial needs degree >= 2 (got {} coefficients)",
            coeffs.len()
        )));
    }
    if *coeffs.last().unwrap() != 1 {
        return Err(arg_err("polynomial must be monic (last coefficient 1)"));
    }
    Ok(coeffs)
}

fn record_line(r: &CubicFieldRecord) -> String {
    let m = r.monic;
    format!("3,{},{},{},1,{},{}", m[0], m[1], m[2], r.d_k, r.r2)
}

// ---------------------------------------------------------------------
// enumerate

/// Header line a checkpoint must start with; ties the file to its bound.
fn checkpoint_head(bound: u64) -> String {
    format!("# frobclt enum checkpoint v1 bound={bound}")
}

/// Completed partitions (leading coefficient -> candidate forms) read
/// back from a checkpoint. Trailing candidates of an interrupted
/// partition (no `D` marker) are discarded and recomputed.
fn read_checkpoint(path: &Path, bound: u64) -> Result<Vec<(i64, Vec<BinaryCubicForm>)>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading checkpoint {}", path.display()))?;
    let mut lines = text.lines();
    let head = lines.next().unwrap_or("");
    if head != checkpoint_head(bound) {
        bail!(
            "checkpoint {} was written for a different run ({head:?})",
            path.display()
        );
    }
    let mut done: Vec<(i64, Vec<BinaryCubicForm>)> = Vec::new();
    let mut pending: Vec<BinaryCubicForm> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let mut tok = line.split(',');
        match tok.next() {
            Some("C") => {
                let nums: Vec<i64> = tok
                    .map(|t| {
                        t.parse()
                            .map_err(|_| anyhow!("checkpoint line {}", idx + 2))
                    })
                    .collect::<Result<_>>()?;
                if nums.len() != 4 {
                    bail!("checkpoint line {}: bad candidate", idx + 2);
                }
                pending.push(BinaryCubicForm::new(nums[0], nums[1], nums[2], nums[3]));
            }
            Some("D") => {
                let a: i64 = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| anyhow!("checkpoint line {}: bad marker", idx + 2))?;
                // candidates of partition a all carry leading coefficient a
                if pending.iter().any(|f| f.a != a) {
                    bail!(
                        "checkpoint line {}: candidates from a different partition",
                        idx + 2
                    );
                }
                done.push((a, std::mem::take(&mut pending)));
            }
            _ => bail!("checkpoint line {}: unknown record", idx + 2),
        }
    }
    Ok(done)
}

pub fn enumerate(cfg: &Config, out: Option<&str>) -> Result<usize> {
    let group = cfg.group()?;
    if group != Group::S3 {
        return Err(arg_err(
            "enumeration is implemented for the cubic family only (group s3)",
        ));
    }
    let bound = cfg.get_u64("bound")?;
    let filter = cfg.signature()?;

    let records = match cfg.get_path("checkpoint") {
        None => enumerate_fields(bound, filter)?,
        Some(ck_path) => {
            let ck_path = Path::new(ck_path);
            let mut committed: Vec<(i64, Vec<BinaryCubicForm>)> = if ck_path.exists() {
                read_checkpoint(ck_path, bound)?
            } else {
                std::fs::write(ck_path, format!("{}\n", checkpoint_head(bound)))?;
                Vec::new()
            };
            let a_max = max_leading_coefficient(bound);
            let have: Vec<i64> = committed.iter().map(|(a, _)| *a).collect();
            let todo: Vec<i64> = (1..=a_max).filter(|a| !have.contains(a)).collect();
            if !todo.is_empty() {
                let mut file = std::fs::OpenOptions::new().append(true).open(ck_path)?;
                use std::io::Write as _;
                // compute in parallel, append in deterministic a-order
                let fresh: Vec<(i64, Vec<BinaryCubicForm>)> = todo
                    .par_iter()
                    .map(|&a| (a, enumerate_partition(bound, a)))
                    .collect();
                for (a, forms) in fresh {
                    let mut block = String::new();
                    for f in &forms {
                        block.push_str(&format!("C,{},{},{},{}\n", f.a, f.b, f.c, f.d));
                    }
                    block.push_str(&format!("D,{a}\n"));
                    file.write_all(block.as_bytes())?;
                    committed.push((a, forms));
                }
                file.sync_all()?;
            }
            let candidates: Vec<BinaryCubicForm> =
                committed.into_iter().flat_map(|(_, forms)| forms).collect();
            dedup_candidates(candidates)
                .into_iter()
                .filter(|r| filter.admits(r.d_k))
                .collect()
        }
    };

    let mut sink = Sink::open(out)?;
    header(&mut sink, "enumerate", &cfg.echo(), &[])?;
    for r in &records {
        sink.line(&record_line(r))?;
    }
    sink.finish()?;
    Ok(records.len())
}

// ---------------------------------------------------------------------
// frobscan

fn scan_series_lines(sink: &mut Sink, id: i64, series: &TraceSeries) -> Result<()> {
    for e in &series.entries {
        match &e.symbol {
            Some(s) => sink.line(&format!("{id},{},{s},{}", e.p, s.artin_trace()))?,
            None => sink.line(&format!("{id},{},?,?", e.p))?,
        }
    }
    Ok(())
}

pub fn frobscan(cfg: &Config, out: Option<&str>) -> Result<usize> {
    let x = cfg.get_u64("primes")?;
    let table = PrimeTable::up_to(x)?;
    let mut sink = Sink::open(out)?;
    let mut lines = 0usize;
    let group = cfg.group()?;
    let (path, records) = load_table(cfg, group)?;
    header(&mut sink, "frobscan", &cfg.echo(), &[("table", &path)])?;
    let series: Vec<(i64, TraceSeries)> = records
        .par_iter()
        .map(|r| {
            let d = i64::try_from(r.d_k).map_err(|_| {
                frobclt_core::Error::Argument(format!("d_K {} overflows i64", r.d_k))
            })?;
            Ok((d, scan_poly(&r.coeffs, &r.field_disc(), &table)?))
        })
        .collect::<frobclt_core::Result<_>>()?;
    for (id, s) in &series {
        scan_series_lines(&mut sink, *id, s)?;
        lines += s.entries.len();
    }
    sink.finish()?;
    Ok(lines)
}

/// Single-polynomial scan; the field discriminant must be supplied so
/// index primes can be masked rather than mislabeled.
pub fn frobscan_poly(cfg: &Config, poly: &str, disc: i128, out: Option<&str>) -> Result<usize> {
    let x = cfg.get_u64("primes")?;
    let table = PrimeTable::up_to(x)?;
    let coeffs = parse_poly(poly)?;
    let series = scan_poly(&coeffs, &BigInt::from(disc), &table)?;
    let mut sink = Sink::open(out)?;
    header(&mut sink, "frobscan", &cfg.echo(), &[])?;
    let id = i64::try_from(disc).map_err(|_| anyhow!("d_K {disc} overflows i64"))?;
    scan_series_lines(&mut sink, id, &series)?;
    sink.finish()?;
    Ok(series.entries.len())
}

// ---------------------------------------------------------------------
// clt

fn moment_lines(sink: &mut Sink, reports: &[MomentReport], tol: f64) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    for m in reports {
        sink.line(&format!(
            "{},{},{},{},{}",
            m.r,
            m.empirical,
            rational_str(&m.reference),
            m.deviation,
            m.stderr
        ))?;
        if m.deviation.abs() > tol * m.stderr {
            warnings.push(format!(
                "warn,moment r={} deviates {:.2} standard errors (tolerance {tol})",
                m.r,
                m.deviation / m.stderr
            ));
        }
    }
    Ok(warnings)
}

pub fn clt(cfg: &Config, out: Option<&str>) -> Result<(usize, Vec<String>)> {
    let group = cfg.group()?;
    let x = cfg.get_u64("primes")?;
    let max_r = cfg.get_u32("max_r")?;
    let policy = cfg.ramified()?;
    let tol = cfg.get_f64("tol")?;
    let mut sink = Sink::open(out)?;

    let reports = match cfg.mode() {
        "mc" => {
            let sampler = SamplerConfig {
                group,
                x,
                samples: cfg.get_u64("samples")?,
                seed: cfg.get_u64("seed")?,
                include_ramified: policy == frobclt_core::satotate::RamifiedPolicy::Include,
            };
            let stats = sample_family_statistics(&sampler)?;
            header(&mut sink, "clt", &cfg.echo(), &[])?;
            family_moments(&stats, max_r, x)?
        }
        "family" => {
            let table = PrimeTable::up_to(x)?;
            let stats: Vec<f64> = if cfg.get_path("table").is_some() {
                let (path, records) = load_table(cfg, group)?;
                header(&mut sink, "clt", &cfg.echo(), &[("table", &path)])?;
                records
                    .par_iter()
                    .map(|r| {
                        let series = scan_poly(&r.coeffs, &r.field_disc(), &table)?;
                        normalized_statistic(&series, policy)
                    })
                    .collect::<frobclt_core::Result<_>>()?
            } else {
                if group != Group::S3 {
                    return Err(arg_err(
                        "family mode without --table only supports group s3 (enumeration)",
                    ));
                }
                header(&mut sink, "clt", &cfg.echo(), &[])?;
                let fields = enumerate_fields(cfg.get_u64("bound")?, cfg.signature()?)?;
                if fields.is_empty() {
                    return Err(arg_err("empty family: no fields below the bound"));
                }
                fields
                    .par_iter()
                    .map(|r| {
                        let f = &r.form;
                        let series = scan_form(f.a, f.b, f.c, f.d, &table)?;
                        normalized_statistic(&series, policy)
                    })
                    .collect::<frobclt_core::Result<_>>()?
            };
            family_moments(&stats, max_r, x)?
        }
        other => {
            return Err(arg_err(format!(
                "clt mode must be family or mc, got {other:?}"
            )))
        }
    };

    let warnings = moment_lines(&mut sink, &reports, tol)?;
    sink.finish()?;
    Ok((reports.len(), warnings))
}

// ---------------------------------------------------------------------
// satotate

pub fn satotate(
    cfg: &Config,
    poly: Option<&str>,
    disc: Option<i128>,
    limit: bool,
    out: Option<&str>,
) -> Result<usize> {
    let mut sink = Sink::open(out)?;
    let max_r = cfg.get_u32("max_r")?;
    let lines = match cfg.mode() {
        "horizontal" => {
            let text = poly.ok_or_else(|| arg_err("horizontal mode requires --poly"))?;
            let disc = disc.ok_or_else(|| arg_err("horizontal mode requires --disc"))?;
            let coeffs = parse_poly(text)?;
            let table = PrimeTable::up_to(cfg.get_u64("primes")?)?;
            let series = scan_poly(&coeffs, &BigInt::from(disc), &table)?;
            header(&mut sink, "satotate", &cfg.echo(), &[])?;
            for r in 1..=max_r {
                sink.line(&format!("{r},{}", horizontal_moment(&series, r)?))?;
            }
            max_r as usize
        }
        "vertical" => {
            let group = cfg.group()?;
            let p = cfg.get_u64("p")?;
            let policy = cfg.ramified()?;
            let symbols: Vec<Option<SplittingSymbol>> = if cfg.get_path("table").is_some() {
                let (path, records) = load_table(cfg, group)?;
                header(&mut sink, "satotate", &cfg.echo(), &[("table", &path)])?;
                records
                    .par_iter()
                    .map(|r| resolve_poly(&r.coeffs, &r.field_disc(), p))
                    .collect::<frobclt_core::Result<_>>()?
            } else if group == Group::S3 {
                header(&mut sink, "satotate", &cfg.echo(), &[])?;
                let fields = enumerate_fields(cfg.get_u64("bound")?, cfg.signature()?)?;
                fields
                    .par_iter()
                    .map(|r| {
                        let f = &r.form;
                        frobclt_core::frobenius::form_splitting(f.a, f.b, f.c, f.d, p).map(Some)
                    })
                    .collect::<frobclt_core::Result<_>>()?
            } else {
                header(&mut sink, "satotate", &cfg.echo(), &[])?;
                sample_symbols(group, p, cfg.get_u64("samples")?, cfg.get_u64("seed")?)?
                    .into_iter()
                    .map(Some)
                    .collect()
            };
            for r in 1..=max_r {
                let emp = vertical_moment(&symbols, r, policy)?;
                let reference = vertical_reference(group, p, r, policy)?;
                let ref_f: f64 = {
                    use num_traits::ToPrimitive;
                    reference.to_f64().unwrap_or(f64::NAN)
                };
                sink.line(&format!(
                    "{r},{emp},{},{}",
                    rational_str(&reference),
                    emp - ref_f
                ))?;
            }
            max_r as usize
        }
        "measure" => {
            let point = if limit {
                MeasurePoint::Limit
            } else {
                MeasurePoint::Finite(cfg.get_u64("p")?)
            };
            let req = MeasureMomentRequest {
                point,
                order: cfg.get_u32("order")?,
                resolution: cfg.get_u32("resolution")?,
            };
            let value = cdf_measure_moment(&req)?;
            header(&mut sink, "satotate", &cfg.echo(), &[])?;
            sink.line(&format!("{},{value}", req.order))?;
            1
        }
        other => {
            return Err(arg_err(format!(
                "satotate mode must be horizontal, vertical, or measure, got {other:?}"
            )))
        }
    };
    sink.finish()?;
    Ok(lines)
}

// ---------------------------------------------------------------------
// densities / hecke

pub fn densities_cmd(cfg: &Config, group: &str, p: u64, out: Option<&str>) -> Result<usize> {
    let group: Group = group.parse()?;
    let table = density_table(group, p)?;
    let mut sink = Sink::open(out)?;
    header(&mut sink, "densities", &cfg.echo(), &[])?;
    for (symbol, q) in &table {
        sink.line(&format!("{symbol},{},{}", q.numer(), q.denom()))?;
    }
    sink.finish()?;
    Ok(table.len())
}

pub enum HeckeAction {
    Expand(u32),
    Psi(u64),
    Dim { level: u64, weight: u32 },
    Moment(u32),
}

pub fn hecke_cmd(cfg: &Config, action: HeckeAction, out: Option<&str>) -> Result<usize> {
    let mut sink = Sink::open(out)?;
    header(&mut sink, "hecke", &cfg.echo(), &[])?;
    let lines = match action {
        HeckeAction::Expand(n) => {
            let exp = hecke::hecke_power_expand(n)?;
            for (j, h) in exp.coefficients().iter().enumerate() {
                sink.line(&format!("{j},{h}"))?;
            }
            exp.coefficients().len()
        }
        HeckeAction::Psi(n) => {
            sink.line(&format!("{n},{}", hecke::psi(n)?))?;
            1
        }
        HeckeAction::Dim { level, weight } => {
            sink.line(&format!(
                "{level},{weight},{}",
                hecke::dim_main_term(level, weight)?
            ))?;
            1
        }
        HeckeAction::Moment(r) => {
            let q = hecke::hecke_moment_main_term(r)?;
            sink.line(&format!("{r},{}", rational_str(&q)))?;
            1
        }
    };
    sink.finish()?;
    Ok(lines)
}

// ---------------------------------------------------------------------
// ingest / cache

pub fn ingest(cfg: &Config, out: Option<&str>) -> Result<(usize, Vec<String>)> {
    let group = cfg.group()?;
    let (path, records) = load_table(cfg, group)?;
    let (unique, collisions) = dedup_field_records(records)?;
    let mut sink = Sink::open(out)?;
    header(&mut sink, "ingest", &cfg.echo(), &[("table", &path)])?;
    for r in &unique {
        sink.line(&r.to_table_line())?;
    }
    sink.finish()?;
    let log = collisions
        .into_iter()
        .map(|c| format!("collision,{}", c.replace(',', ";")))
        .collect();
    Ok((unique.len(), log))
}

pub fn cache_write(cfg: &Config, cache_path: &str) -> Result<usize> {
    let group = cfg.group()?;
    let (_, records) = load_table(cfg, group)?;
    let x = cfg.get_u64("primes")?;
    let table = PrimeTable::up_to(x)?;
    let blocks: Vec<(i64, TraceSeries)> = records
        .par_iter()
        .map(|r| {
            let id = i64::try_from(r.d_k).map_err(|_| {
                frobclt_core::Error::Argument(format!("d_K {} overflows the cache id", r.d_k))
            })?;
            Ok((id, scan_poly(&r.coeffs, &r.field_disc(), &table)?))
        })
        .collect::<frobclt_core::Result<_>>()?;
    let n = blocks.len();
    let cache = TraceCacheFile { group, x, blocks };
    write_trace_cache(Path::new(cache_path), &cache)?;
    Ok(n)
}

pub fn cache_read(cfg: &Config, cache_path: &str, out: Option<&str>) -> Result<usize> {
    let cache = read_trace_cache(Path::new(cache_path))?;
    let mut sink = Sink::open(out)?;
    header(
        &mut sink,
        "cache",
        &cfg.echo(),
        &[("cache", Path::new(cache_path))],
    )?;
    let text = trace_cache_to_text(&cache);
    let mut lines = 0usize;
    for line in text.lines() {
        sink.line(line)?;
        lines += 1;
    }
    sink.finish()?;
    Ok(lines)
}

pub fn cache_verify(cache_path: &str, out: Option<&str>) -> Result<()> {
    let cache = read_trace_cache(Path::new(cache_path))?;
    let mut sink = Sink::open(out)?;
    sink.line(&format!(
        "ok,{},{},{}",
        cache.group,
        cache.x,
        cache.blocks.len()
    ))?;
    sink.finish()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_parsing() {
        assert_eq!(parse_poly("-1,-1,0,1").unwrap(), vec![-1, -1, 0, 1]);
        assert!(parse_poly("-1,-1,0,2").is_err()); // not monic
        assert!(parse_poly("1,1").is_err()); // degree too small
        assert!(parse_poly("a,b,1").is_err());
    }

    #[test]
    fn checkpoint_round_trip_and_interruption() {
        let dir = std::env::temp_dir().join("frobclt-ckpt-unit");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ck.txt");
        let head = checkpoint_head(300);
        std::fs::write(
            &path,
            format!("{head}\nC,1,1,0,-1\nD,1\nC,2,1,1,-1\n"), // partition 2 interrupted
        )
        .unwrap();
        let done = read_checkpoint(&path, 300).unwrap();
        assert_eq!(done.len(), 1);
        assert_eq!(done[0].0, 1);
        assert_eq!(done[0].1.len(), 1);
        // bound mismatch is refused
        assert!(read_checkpoint(&path, 400).is_err());
    }
}
