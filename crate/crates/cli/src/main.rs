//! frobclt: command-line surface over the field-counting, trace-scan,
//! and moment-comparison machinery.
//!
//! Every run resolves a configuration in three layers (built-in
//! defaults, then `--config` file entries, then flags), echoes it into
//! the report header, and writes the report atomically to `--out` or
//! stdout. Reports are byte-identical across reruns with the same
//! configuration and seed; wall-clock timing therefore goes to stderr
//! as a `timing,<command>,<ms>` record, never into the report itself.
//! Diagnostics (`error,<kind>,<message>`, collision and deviation
//! warnings) also go to stderr. Exit code 2 flags a bad request (range,
//! argument, parse, unsupported symbol), 1 an operational failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::HeckeAction;
use config::Config;

#[derive(Parser)]
#[command(
    name = "frobclt",
    version,
    about = "Reproducible splitting-data experiments"
)]
struct Cli {
    /// key=value configuration file; flags override its entries
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads, 0 = all cores; FROBCLT_THREADS caps the result
    #[arg(long, global = true)]
    threads: Option<u64>,

    /// Report destination (written atomically); stdout when omitted
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate cubic fields with |d_K| <= bound into table records
    Enumerate {
        /// Discriminant bound X
        #[arg(long)]
        bound: Option<u64>,
        /// all | c (complex) | r (totally real)
        #[arg(long)]
        signature: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Resumable candidate checkpoint, keyed by leading coefficient
        #[arg(long, value_name = "FILE")]
        checkpoint: Option<String>,
    },
    /// Frobenius trace scan of a field table or one polynomial
    Frobscan {
        /// Ascending monic coefficients, e.g. -1,-1,0,1
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Field discriminant for --poly (masks index primes)
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i128>,
        #[arg(long, value_name = "FILE")]
        table: Option<String>,
        /// Scan primes p <= this cap
        #[arg(long)]
        primes: Option<u64>,
        #[arg(long)]
        group: Option<String>,
    },
    /// Family moment statistics against Gaussian references
    Clt {
        /// family (scan a concrete family) | mc (Monte Carlo sampler)
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_name = "FILE")]
        table: Option<String>,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        signature: Option<String>,
        #[arg(long)]
        primes: Option<u64>,
        #[arg(long)]
        max_r: Option<u32>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// exclude | include ramified primes in the statistic
        #[arg(long)]
        ramified: Option<String>,
        /// Deviation warning threshold, in standard errors
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Splitting-distribution moments: horizontal, vertical, or measure
    Satotate {
        /// horizontal | vertical | measure
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i128>,
        #[arg(long)]
        primes: Option<u64>,
        #[arg(long)]
        max_r: Option<u32>,
        #[arg(long)]
        group: Option<String>,
        /// Fixed prime for vertical moments / finite measure point
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_name = "FILE")]
        table: Option<String>,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        ramified: Option<String>,
        /// Moment order for measure mode
        #[arg(long)]
        order: Option<u32>,
        /// Quadrature panels for measure mode
        #[arg(long)]
        resolution: Option<u32>,
        /// Evaluate the p -> infinity measure instead of a finite p
        #[arg(long)]
        limit: bool,
    },
    /// Exact splitting-type density table for a group at a prime
    Densities { group: String, p: u64 },
    /// Power-sum expansions and modular main terms
    Hecke {
        /// Expand the n-th power sum in complete homogeneous terms
        #[arg(long)]
        expand: Option<u32>,
        /// Evaluate the index [SL2(Z) : Gamma_0(n)]
        #[arg(long)]
        psi: Option<u64>,
        /// Newform-count main term: level (with --weight)
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        weight: Option<u32>,
        /// Main-term coefficient of the r-th trace moment
        #[arg(long)]
        moment: Option<u32>,
    },
    /// Validate and deduplicate a field table
    Ingest {
        #[arg(long, value_name = "FILE")]
        table: Option<String>,
        #[arg(long)]
        group: Option<String>,
    },
    /// Binary trace-cache operations
    Cache {
        #[command(subcommand)]
        op: CacheOp,
    },
}

#[derive(Subcommand)]
enum CacheOp {
    /// Scan a field table and write the binary cache
    Write {
        #[arg(long, value_name = "FILE")]
        table: Option<String>,
        #[arg(long)]
        primes: Option<u64>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_name = "FILE")]
        cache: Option<String>,
    },
    /// Decode a cache back to text records
    Read {
        #[arg(long, value_name = "FILE")]
        cache: Option<String>,
    },
    /// Check magic, version, and checksum
    Verify {
        #[arg(long, value_name = "FILE")]
        cache: Option<String>,
    },
}

fn arg_err(msg: &str) -> anyhow::Error {
    frobclt_core::Error::Argument(msg.to_string()).into()
}

/// Effective worker count: the request (0 = all cores), clamped by the
/// FROBCLT_THREADS environment cap when that is set and nonzero.
fn thread_budget(requested: u64) -> usize {
    let want = if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested as usize
    };
    let cap = std::env::var("FROBCLT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0);
    cap.map_or(want, |c| want.min(c))
}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    use frobclt_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::Range(..)) => ("range", 2),
        Some(E::Argument(..)) => ("argument", 2),
        Some(E::UnsupportedSymbol { .. }) => ("unsupported-symbol", 2),
        Some(E::Parse { .. }) => ("parse", 2),
        // rejected input data is a bad request, same as a bad flag
        Some(E::DataQuality(..)) => ("data-quality", 2),
        Some(E::Resource(..)) => ("resource", 1),
        Some(E::Cache(..)) => ("cache", 1),
        Some(E::Quadrature(..)) => ("quadrature", 1),
        Some(E::Overflow(..)) => ("overflow", 1),
        Some(E::Io(..)) => ("io", 1),
        None => ("error", 1),
    }
}

/// Runs one subcommand; returns its tag for the timing record.
fn run(cli: Cli) -> anyhow::Result<&'static str> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    cfg.override_with("threads", cli.threads);
    cfg.override_with("out", cli.out.clone());

    let n = thread_budget(cfg.get_u64("threads")?);
    // a failure here means a pool already exists (tests); that is fine
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();

    let tag = match cli.command {
        Command::Enumerate {
            bound,
            signature,
            group,
            checkpoint,
        } => {
            cfg.override_with("bound", bound);
            cfg.override_with("signature", signature);
            cfg.override_with("group", group);
            cfg.override_with("checkpoint", checkpoint);
            let out = cfg.get_path("out").map(str::to_owned);
            commands::enumerate(&cfg, out.as_deref())?;
            "enumerate"
        }
        Command::Frobscan {
            poly,
            disc,
            table,
            primes,
            group,
        } => {
            cfg.override_with("table", table);
            cfg.override_with("primes", primes);
            cfg.override_with("group", group);
            let out = cfg.get_path("out").map(str::to_owned);
            match (poly, disc) {
                (Some(p), Some(d)) => {
                    commands::frobscan_poly(&cfg, &p, d, out.as_deref())?;
                }
                (Some(_), None) => {
                    return Err(arg_err("--poly requires --disc (the field discriminant)"))
                }
                (None, Some(_)) => return Err(arg_err("--disc is only meaningful with --poly")),
                (None, None) => {
                    commands::frobscan(&cfg, out.as_deref())?;
                }
            }
            "frobscan"
        }
        Command::Clt {
            mode,
            group,
            table,
            bound,
            signature,
            primes,
            max_r,
            samples,
            seed,
            ramified,
            tol,
        } => {
            cfg.override_with("mode", mode);
            cfg.override_with("group", group);
            cfg.override_with("table", table);
            cfg.override_with("bound", bound);
            cfg.override_with("signature", signature);
            cfg.override_with("primes", primes);
            cfg.override_with("max_r", max_r);
            cfg.override_with("samples", samples);
            cfg.override_with("seed", seed);
            cfg.override_with("ramified", ramified);
            cfg.override_with("tol", tol);
            let out = cfg.get_path("out").map(str::to_owned);
            let (_, warnings) = commands::clt(&cfg, out.as_deref())?;
            for w in warnings {
                eprintln!("{w}");
            }
            "clt"
        }
        Command::Satotate {
            mode,
            poly,
            disc,
            primes,
            max_r,
            group,
            p,
            table,
            bound,
            samples,
            seed,
            ramified,
            order,
            resolution,
            limit,
        } => {
            cfg.override_with("mode", mode);
            cfg.override_with("primes", primes);
            cfg.override_with("max_r", max_r);
            cfg.override_with("group", group);
            cfg.override_with("p", p);
            cfg.override_with("table", table);
            cfg.override_with("bound", bound);
            cfg.override_with("samples", samples);
            cfg.override_with("seed", seed);
            cfg.override_with("ramified", ramified);
            cfg.override_with("order", order);
            cfg.override_with("resolution", resolution);
            let out = cfg.get_path("out").map(str::to_owned);
            commands::satotate(&cfg, poly.as_deref(), disc, limit, out.as_deref())?;
            "satotate"
        }
        Command::Densities { group, p } => {
            let out = cfg.get_path("out").map(str::to_owned);
            commands::densities_cmd(&cfg, &group, p, out.as_deref())?;
            "densities"
        }
        Command::Hecke {
            expand,
            psi,
            level,
            weight,
            moment,
        } => {
            let action =
                match (expand, psi, level, weight, moment) {
                    (Some(n), None, None, None, None) => HeckeAction::Expand(n),
                    (None, Some(n), None, None, None) => HeckeAction::Psi(n),
                    (None, None, Some(l), Some(w), None) => HeckeAction::Dim {
                        level: l,
                        weight: w,
                    },
                    (None, None, None, None, Some(r)) => HeckeAction::Moment(r),
                    _ => return Err(arg_err(
                        "hecke takes exactly one of --expand, --psi, --level + --weight, --moment",
                    )),
                };
            let out = cfg.get_path("out").map(str::to_owned);
            commands::hecke_cmd(&cfg, action, out.as_deref())?;
            "hecke"
        }
        Command::Ingest { table, group } => {
            cfg.override_with("table", table);
            cfg.override_with("group", group);
            let out = cfg.get_path("out").map(str::to_owned);
            let (_, collisions) = commands::ingest(&cfg, out.as_deref())?;
            for c in collisions {
                eprintln!("{c}");
            }
            "ingest"
        }
        Command::Cache { op } => {
            match op {
                CacheOp::Write {
                    table,
                    primes,
                    group,
                    cache,
                } => {
                    cfg.override_with("table", table);
                    cfg.override_with("primes", primes);
                    cfg.override_with("group", group);
                    cfg.override_with("cache", cache);
                    let path = cfg
                        .get_path("cache")
                        .ok_or_else(|| arg_err("no cache path given (--cache)"))?
                        .to_owned();
                    commands::cache_write(&cfg, &path)?;
                }
                CacheOp::Read { cache } => {
                    cfg.override_with("cache", cache);
                    let path = cfg
                        .get_path("cache")
                        .ok_or_else(|| arg_err("no cache path given (--cache)"))?
                        .to_owned();
                    let out = cfg.get_path("out").map(str::to_owned);
                    commands::cache_read(&cfg, &path, out.as_deref())?;
                }
                CacheOp::Verify { cache } => {
                    cfg.override_with("cache", cache);
                    let path = cfg
                        .get_path("cache")
                        .ok_or_else(|| arg_err("no cache path given (--cache)"))?
                        .to_owned();
                    let out = cfg.get_path("out").map(str::to_owned);
                    commands::cache_verify(&path, out.as_deref())?;
                }
            }
            "cache"
        }
    };
    Ok(tag)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli) {
        Ok(tag) => {
            eprintln!("timing,{tag},{}", started.elapsed().as_millis());
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (kind, code) = classify(&err);
            // the record stays machine-splittable: commas inside the
            // message become semicolons
            eprintln!("error,{kind},{}", format!("{err:#}").replace(',', ";"));
            ExitCode::from(code)
        }
    }
}
