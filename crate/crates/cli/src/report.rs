//! Report plumbing: an output sink that is either stdout or an
//! atomically written file (temp-then-rename), plus input content
//! hashing. Reports never contain wall-clock data — outputs must be
//! byte-identical across reruns with the same config and seed — so
//! timing is emitted on stderr by main.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

pub enum Sink {
    Stdout(std::io::Stdout),
    File {
        writer: BufWriter<fs::File>,
        tmp: PathBuf,
        dest: PathBuf,
    },
}

impl Sink {
    /// File sink when a path is given, stdout otherwise.
    pub fn open(path: Option<&str>) -> Result<Sink> {
        match path {
            None => Ok(Sink::Stdout(std::io::stdout())),
            Some(path) => {
                let dest = PathBuf::from(path);
                let mut tmp = dest.as_os_str().to_owned();
                tmp.push(".tmp");
                let tmp = PathBuf::from(tmp);
                let file = fs::File::create(&tmp)
                    .with_context(|| format!("creating {}", tmp.display()))?;
                Ok(Sink::File {
                    writer: BufWriter::new(file),
                    tmp,
                    dest,
                })
            }
        }
    }

    pub fn line(&mut self, text: &str) -> Result<()> {
        match self {
            Sink::Stdout(out) => writeln!(out, "{text}")?,
            Sink::File { writer, .. } => writeln!(writer, "{text}")?,
        }
        Ok(())
    }

    /// Publish the file (rename over the destination); no-op for stdout.
    pub fn finish(self) -> Result<()> {
        match self {
            Sink::Stdout(mut out) => out.flush()?,
            Sink::File { writer, tmp, dest } => {
                writer.into_inner().context("flushing output")?.sync_all()?;
                fs::rename(&tmp, &dest).with_context(|| {
                    format!("renaming {} over {}", tmp.display(), dest.display())
                })?;
            }
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Standard report head: command tag, resolved config echo, and one
/// content-hash line per input file.
pub fn header(sink: &mut Sink, command: &str, echo: &str, inputs: &[(&str, &Path)]) -> Result<()> {
    sink.line(&format!("# frobclt {command} v1"))?;
    sink.line(echo)?;
    for (label, path) in inputs {
        let bytes = fs::read(path).with_context(|| format!("hashing input {}", path.display()))?;
        sink.line(&format!("# input_sha256: {label}={}", sha256_hex(&bytes)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha_matches_known_vector() {
        // SHA-256("abc")
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn file_sink_is_atomic() {
        let dir = tempfile::tempdir().unwrap();
        let dest = dir.path().join("report.csv");
        let dest_str = dest.to_str().unwrap().to_string();
        let mut sink = Sink::open(Some(&dest_str)).unwrap();
        sink.line("1,2").unwrap();
        // nothing visible at the destination until finish
        assert!(!dest.exists());
        sink.finish().unwrap();
        assert_eq!(fs::read_to_string(&dest).unwrap(), "1,2\n");
        assert!(!dir.path().join("report.csv.tmp").exists());
    }
}
