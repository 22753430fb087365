use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cusp::Triplet;
use crate::wdvv::{Potential, ReconstructionConfig};

pub const CACHE_ENV: &str = "CUSP_FROBENIUS_CACHE_DIR";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `$CUSP_FROBENIUS_CACHE_DIR`, else `$XDG_CACHE_HOME/cusp-frobenius`, else
/// `$HOME/.cache/cusp-frobenius`.
pub fn cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("cusp-frobenius"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cusp-frobenius"))
}

pub fn cache_key(a: Triplet, cfg: &ReconstructionConfig) -> String {
    let norm = match &cfg.normalization {
        None => "default".to_string(),
        Some(n) => format!("{}={}", n.monomial.display(a), n.coefficient),
    };
    let text = format!("potential|v{CODE_VERSION}|A={a}|K={}|D={}|strict={}|norm={norm}", cfg.k, cfg.d, cfg.strict);
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub enum Lookup {
    Hit(Potential),
    Miss,
    /// Unreadable or stale-looking entry; the message says why.
    Corrupt(String),
}

pub fn lookup(dir: &Path, key: &str) -> Lookup {
    let path = dir.join(format!("{key}.json"));
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(_) => return Lookup::Miss,
    };
    let v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
    };
    if v["version"] != CODE_VERSION || v["key"] != key {
        return Lookup::Miss;
    }
    match Potential::from_json_value(&v["potential"]) {
        Ok(p) => Lookup::Hit(p),
        Err(e) => Lookup::Corrupt(format!("{}: {e}", path.display())),
    }
}

/// Writes through a temporary file so readers never see a partial entry.
pub fn store(dir: &Path, key: &str, p: &Potential) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let body = json!({ "version": CODE_VERSION, "key": key, "potential": p.to_json_value() });
    let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(&body)?.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(tmp, dir.join(format!("{key}.json")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_differ_by_config() {
        let a = Triplet::new(2, 2, 2).unwrap();
        let k1 = cache_key(a, &ReconstructionConfig::new(2, 8));
        let k2 = cache_key(a, &ReconstructionConfig::new(2, 9));
        assert_ne!(k1, k2);
        assert_eq!(k1.len(), 64);
        assert_eq!(k1, cache_key(a, &ReconstructionConfig::new(2, 8)));
    }
}
