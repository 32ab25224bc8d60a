//! Zero-table cache keyed by (spec id, window, tolerances). A cached run is
//! returned byte-for-byte; keys hash the canonical JSON of the key tuple.

use std::path::{Path, PathBuf};

use atlas_core::geom::Rect;
use atlas_core::zeros::ZeroRecord;
use atlas_core::Tolerances;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn cache_key(spec_id: &str, target: &str, rect: Rect, tol: f64, cfg: &Tolerances) -> String {
    let canon = format!(
        "{spec_id}|{target}|{:.17e},{:.17e},{:.17e},{:.17e}|{tol:.17e}|{}",
        rect.sigma_min,
        rect.sigma_max,
        rect.t_min,
        rect.t_max,
        serde_json::to_string(cfg).unwrap_or_default()
    );
    format!("{:016x}", fnv1a(canon.as_bytes()))
}

pub fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("zeros_{key}.json"))
}

pub fn load(dir: &Path, key: &str) -> Option<Vec<ZeroRecord>> {
    let text = std::fs::read_to_string(cache_path(dir, key)).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn store(dir: &Path, key: &str, zeros: &[ZeroRecord]) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(zeros)?;
    std::fs::write(cache_path(dir, key), text)?;
    Ok(())
}
