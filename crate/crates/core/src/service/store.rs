//! Append-only JSON Lines judgment log.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::annotation::Judgment;
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct JudgmentStore {
    path: PathBuf,
    file: File,
}

/// What `open` found on disk.
#[derive(Debug, Default)]
pub struct Recovered {
    pub judgments: Vec<Judgment>,
    /// Bytes dropped from a torn final record.
    pub truncated_bytes: u64,
}

impl JudgmentStore {
    /// Opens (or creates) the log. A torn or unparsable final record is cut
    /// off; a bad record followed by good ones is an error.
    pub fn open(path: &Path) -> Result<(JudgmentStore, Recovered)> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        let mut buf = Vec::new();
        file.read_to_end(&mut buf)?;

        let mut rec = Recovered::default();
        let mut good_end = 0usize;
        let mut pos = 0usize;
        let mut line_no = 0usize;
        while pos < buf.len() {
            line_no += 1;
            let (end, complete) = match buf[pos..].iter().position(|&b| b == b'\n') {
                Some(i) => (pos + i, true),
                None => (buf.len(), false),
            };
            let raw = &buf[pos..end];
            let next = if complete { end + 1 } else { end };
            if raw.iter().all(u8::is_ascii_whitespace) && complete {
                pos = next;
                good_end = next;
                continue;
            }
            let parsed = if complete {
                serde_json::from_slice::<Judgment>(raw).ok()
            } else {
                None
            };
            match parsed {
                Some(j) => {
                    rec.judgments.push(j);
                    good_end = next;
                    pos = next;
                }
                None if buf[next..].iter().all(u8::is_ascii_whitespace) => break,
                None => {
                    return Err(Error::parse(path, line_no, "corrupt judgment record"));
                }
            }
        }
        if good_end < buf.len() {
            rec.truncated_bytes = (buf.len() - good_end) as u64;
            log::warn!(
                "{}: dropping {} bytes of incomplete trailing record",
                path.display(),
                rec.truncated_bytes
            );
            file.set_len(good_end as u64)?;
            file.sync_all()?;
        }
        file.seek(SeekFrom::End(0))?;
        Ok((
            JudgmentStore {
                path: path.to_path_buf(),
                file,
            },
            rec,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Writes one record with a single write and syncs it to disk.
    pub fn append(&mut self, j: &Judgment) -> Result<()> {
        let mut line = serde_json::to_vec(j)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(())
    }
}
