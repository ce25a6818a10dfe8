use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

/// Paths written for one report.
#[derive(Debug)]
pub struct Written {
    pub json: PathBuf,
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    command: &'a str,
    config: &'a C,
    result: &'a R,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    report: &'a str,
    created_unix: u64,
}

fn io(path: &Path, e: std::io::Error) -> Failure {
    Failure::io(format!("{}: {e}", path.display()))
}

/// Serialized report bytes: the command, the fully resolved config and the result.
pub fn render<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(&Envelope { command, config, result })
        .map_err(|e| Failure::io(format!("serializing report: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `<command>-<sha256 prefix>.json` (plus `.csv` when given) under `dir`
/// and a `.meta.json` sidecar holding the timestamp. Existing files with the
/// same name already hold identical bytes and are left alone.
pub fn persist(dir: &Path, command: &str, json: &[u8], csv: Option<&[u8]>) -> Result<Written, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let digest = hex::encode(Sha256::digest(json));
    let stem = format!("{command}-{}", &digest[..16]);
    let json_path = dir.join(format!("{stem}.json"));
    write_once(&json_path, json)?;
    let csv_path = match csv {
        Some(bytes) => {
            let p = dir.join(format!("{stem}.csv"));
            write_once(&p, bytes)?;
            Some(p)
        }
        None => None,
    };
    let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let name = json_path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let meta = serde_json::to_vec_pretty(&Sidecar { report: name, created_unix })
        .map_err(|e| Failure::io(format!("serializing sidecar: {e}")))?;
    let meta_path = dir.join(format!("{stem}.meta.json"));
    std::fs::write(&meta_path, meta).map_err(|e| io(&meta_path, e))?;
    Ok(Written { json: json_path, csv: csv_path })
}

fn write_once(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if path.exists() {
        return Ok(());
    }
    std::fs::write(path, bytes).map_err(|e| io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_content_gives_identical_names() {
        let dir = tempfile::tempdir().unwrap();
        let bytes = render("suite", &1u8, &[1.5f64, 2.0]).unwrap();
        let a = persist(dir.path(), "suite", &bytes, None).unwrap();
        let b = persist(dir.path(), "suite", &bytes, None).unwrap();
        assert_eq!(a.json, b.json);
        assert_eq!(std::fs::read(&a.json).unwrap(), bytes);
        let other = render("suite", &2u8, &[1.5f64, 2.0]).unwrap();
        assert_ne!(persist(dir.path(), "suite", &other, None).unwrap().json, a.json);
    }
}
