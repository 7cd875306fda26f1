//! On-disk persistence of kernel tables.
//!
//! One JSON file per order, `kernel_k{k}.json`, holding a header, the grid
//! values and a SHA-256 checksum of header plus values. A file whose checksum
//! or parameters do not match is logged and rebuilt.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kernels::table::{build_kernel_table, KernelTable, TableParams};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheHeader {
    pub format_version: u32,
    pub k: i32,
    pub grid_min: f64,
    pub grid_max: f64,
    pub n_points: usize,
    pub crossover_x: f64,
    pub asymptote_constant: f64,
    pub params: TableParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheFile {
    header: CacheHeader,
    values: Vec<f64>,
    checksum: String,
}

/// How [`load_or_build`] obtained its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded,
    Built,
    /// A file existed but was unreadable, corrupted or built with other parameters.
    Rebuilt,
}

pub fn cache_path(dir: &Path, k: i32) -> PathBuf {
    dir.join(format!("kernel_k{k}.json"))
}

fn checksum(header: &CacheHeader, values: &[f64]) -> Result<String> {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(header)?);
    hasher.update(serde_json::to_vec(values)?);
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// Writes `table` (built with `params`) to `path`.
pub fn write_table(path: &Path, table: &KernelTable, params: &TableParams) -> Result<()> {
    let header = CacheHeader {
        format_version: CACHE_FORMAT_VERSION,
        k: table.k(),
        grid_min: table.grid_min(),
        grid_max: table.grid_max(),
        n_points: table.values().len(),
        crossover_x: table.crossover_x(),
        asymptote_constant: table.asymptote_constant(),
        params: *params,
    };
    let values = table.values().to_vec();
    let file = CacheFile {
        checksum: checksum(&header, &values)?,
        header,
        values,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    // unique per writer so concurrent builders never share a partial file
    static WRITES: AtomicU64 = AtomicU64::new(0);
    let tmp = path.with_extension(format!(
        "json.{}.{}.tmp",
        std::process::id(),
        WRITES.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, serde_json::to_string(&file)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads and validates a cached table. Any mismatch is a cache error.
pub fn read_table(path: &Path, k: i32, params: &TableParams) -> Result<KernelTable> {
    let text = fs::read_to_string(path)?;
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    let h = &file.header;
    if checksum(h, &file.values)? != file.checksum {
        return Err(Error::Cache(format!("{}: checksum mismatch", path.display())));
    }
    if h.format_version != CACHE_FORMAT_VERSION {
        return Err(Error::Cache(format!(
            "{}: format version {} (expected {CACHE_FORMAT_VERSION})",
            path.display(),
            h.format_version
        )));
    }
    if h.k != k || h.params != *params || h.n_points != file.values.len() {
        return Err(Error::Cache(format!(
            "{}: built for different order or parameters",
            path.display()
        )));
    }
    KernelTable::from_values(h.k, h.crossover_x, file.values, h.asymptote_constant)
}

/// Returns the cached table for order `k`, building and storing it when the
/// cache is missing or stale.
pub fn load_or_build(dir: &Path, k: i32, params: &TableParams) -> Result<(KernelTable, CacheStatus)> {
    params.validate()?;
    let path = cache_path(dir, k);
    let status = if path.exists() {
        match read_table(&path, k, params) {
            Ok(table) => {
                log::debug!("loaded kernel table {}", path.display());
                return Ok((table, CacheStatus::Loaded));
            }
            Err(e) => {
                log::warn!("stale kernel cache, rebuilding: {e}");
                CacheStatus::Rebuilt
            }
        }
    } else {
        CacheStatus::Built
    };
    log::info!("building kernel table k = {k}");
    let table = build_kernel_table(k, params)?;
    write_table(&path, &table, params)?;
    Ok((table, status))
}
