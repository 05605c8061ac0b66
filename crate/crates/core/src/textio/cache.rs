//! Persistent inverse tables.
//!
//! One file per permutation length:
//!
//! ```text
//! clipseq-undissect v1
//! n 4
//! entries 3
//! sha256 <hex digest of the body>
//! <dissection>\t<permutation>
//! ...
//! ```
//!
//! Anything that does not match exactly (other version, other length,
//! truncated body, bad digest) is treated as a miss and rebuilt.

use std::collections::BTreeMap;
use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "CLIPSEQ_CACHE";

const MAGIC: &str = "clipseq-undissect";
const VERSION: u32 = 1;

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("undissect-n{n}.v{VERSION}.tbl"))
}

fn body(table: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (k, v) in table {
        out.push_str(k);
        out.push('\t');
        out.push_str(v);
        out.push('\n');
    }
    out
}

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// `Ok(None)` on a miss, whether the file is absent or untrustworthy.
pub fn cache_read(dir: &Path, n: usize) -> Result<Option<BTreeMap<String, String>>> {
    let path = cache_path(dir, n);
    let text = match fs::read(&path) {
        Ok(bytes) => match String::from_utf8(bytes) {
            Ok(text) => text,
            Err(_) => return Ok(None),
        },
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    Ok(decode(&text, n))
}

fn decode(text: &str, n: usize) -> Option<BTreeMap<String, String>> {
    let mut parts = text.splitn(5, '\n');
    let magic = parts.next()?;
    if magic != format!("{MAGIC} v{VERSION}") {
        return None;
    }
    let file_n: usize = parts.next()?.strip_prefix("n ")?.parse().ok()?;
    let count: usize = parts.next()?.strip_prefix("entries ")?.parse().ok()?;
    let sum = parts.next()?.strip_prefix("sha256 ")?;
    let body = parts.next().unwrap_or("");
    if file_n != n || digest(body) != sum {
        return None;
    }
    let mut table = BTreeMap::new();
    for line in body.lines() {
        let (k, v) = line.split_once('\t')?;
        table.insert(k.to_string(), v.to_string());
    }
    (table.len() == count).then_some(table)
}

/// Writes to a temporary file in `dir` and renames it into place, so a
/// reader never sees a partial table.
pub fn cache_write(dir: &Path, n: usize, table: &BTreeMap<String, String>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let body = body(table);
    let text = format!(
        "{MAGIC} v{VERSION}\nn {n}\nentries {}\nsha256 {}\n{body}",
        table.len(),
        digest(&body)
    );
    let path = cache_path(dir, n);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(text.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissect::decent_to_dissection;
    use crate::enumerate::all_decent_312_avoiders;

    fn table_for(n: u32) -> BTreeMap<String, String> {
        all_decent_312_avoiders(n)
            .unwrap()
            .map(|p| {
                let d = decent_to_dissection(&p).unwrap().dissection;
                (d.to_string(), p.to_string())
            })
            .collect()
    }

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let table = table_for(4);
        assert_eq!(table.len(), 3);
        cache_write(dir.path(), 4, &table).unwrap();
        assert_eq!(cache_read(dir.path(), 4).unwrap(), Some(table));
    }

    #[test]
    fn absent_file_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(cache_read(dir.path(), 4).unwrap(), None);
    }

    #[test]
    fn truncated_file_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        cache_write(dir.path(), 6, &table_for(6)).unwrap();
        let path = cache_path(dir.path(), 6);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() - 5]).unwrap();
        assert_eq!(cache_read(dir.path(), 6).unwrap(), None);
    }

    #[test]
    fn other_version_or_length_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let table = table_for(4);
        cache_write(dir.path(), 4, &table).unwrap();
        let path = cache_path(dir.path(), 4);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen(" v1", " v0", 1)).unwrap();
        assert_eq!(cache_read(dir.path(), 4).unwrap(), None);
        fs::write(&path, text.replacen("n 4", "n 5", 1)).unwrap();
        assert_eq!(cache_read(dir.path(), 4).unwrap(), None);
    }
}
