//! Filesystem snapshot cache: `<dir>/MM-DD-YYYY.csv` per report plus a
//! `LATEST` marker naming the newest file that parsed successfully.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use super::{IngestError, ReportDate};

const MARKER: &str = "LATEST";
const LOCK: &str = ".lock";
/// A lock file older than this is assumed to be left over from a crash.
const STALE_LOCK: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotCache {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::CacheIo {
        path: path.to_owned(),
        source,
    }
}

impl SnapshotCache {
    /// Opens (creating if needed) a cache rooted at `dir`.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, IngestError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, date: ReportDate) -> PathBuf {
        self.dir.join(date.filename())
    }

    fn write_atomic(&self, name: &str, contents: &[u8]) -> Result<PathBuf, IngestError> {
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp-{}", std::process::id()));
        fs::write(&tmp, contents).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &target).map_err(io_err(&target))?;
        Ok(target)
    }

    fn lock(&self) -> Result<LockGuard, IngestError> {
        let path = self.dir.join(LOCK);
        for attempt in 0..2 {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(LockGuard(path));
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists && attempt == 0 => {
                    let stale = fs::metadata(&path)
                        .and_then(|m| m.modified())
                        .ok()
                        .and_then(|t| SystemTime::now().duration_since(t).ok())
                        .is_some_and(|age| age > STALE_LOCK);
                    if !stale {
                        return Err(IngestError::CacheLocked(path));
                    }
                    let _ = fs::remove_file(&path);
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    return Err(IngestError::CacheLocked(path))
                }
                Err(e) => return Err(io_err(&path)(e)),
            }
        }
        Err(IngestError::CacheLocked(path))
    }

    /// Stores a raw report and points `LATEST` at it. Callers must only
    /// commit text that parsed.
    pub fn commit(&self, date: ReportDate, raw: &str) -> Result<PathBuf, IngestError> {
        let _guard = self.lock()?;
        let path = self.write_atomic(&date.filename(), raw.as_bytes())?;
        self.write_atomic(MARKER, format!("{}\n", date.filename()).as_bytes())?;
        Ok(path)
    }

    /// Raw text stored for a date, if any.
    pub fn read(&self, date: ReportDate) -> Result<Option<String>, IngestError> {
        let path = self.entry_path(date);
        match fs::read_to_string(&path) {
            Ok(t) => Ok(Some(t)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    /// The entry `LATEST` points at, or `None` for a cold cache.
    pub fn latest(&self) -> Result<Option<(ReportDate, String)>, IngestError> {
        let marker = self.dir.join(MARKER);
        let name = match fs::read_to_string(&marker) {
            Ok(t) => t.trim().to_owned(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_err(&marker)(e)),
        };
        let date: ReportDate = name
            .strip_suffix(".csv")
            .and_then(|stem| stem.parse().ok())
            .ok_or_else(|| IngestError::CacheCorrupt(name.clone()))?;
        let raw = self.read(date)?.ok_or(IngestError::CacheCorrupt(name))?;
        Ok(Some((date, raw)))
    }

    /// Dates with a stored report, oldest first.
    pub fn dates(&self) -> Result<Vec<ReportDate>, IngestError> {
        let mut out: Vec<ReportDate> = fs::read_dir(&self.dir)
            .map_err(io_err(&self.dir))?
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().to_str()?.strip_suffix(".csv")?.parse().ok())
            .collect();
        out.sort();
        Ok(out)
    }
}
