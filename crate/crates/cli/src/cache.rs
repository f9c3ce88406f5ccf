//! File cache for the J matrices, keyed by interval endpoints, degrees and
//! a weight fingerprint; stored in the canonical text format so cached
//! doubles round-trip exactly. The directory comes from `CHEBK_CACHE_DIR`.

use crate::docfmt::{Document, Value};
use chebk_core::RationalWeight;
use nalgebra::DMatrix;
use std::path::{Path, PathBuf};

/// FNV-1a over the exact bit patterns of the weight coefficients.
pub fn weight_fingerprint(w: &RationalWeight) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bits: u64| {
        for byte in bits.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for c in w.sigma().coeffs() {
        eat(c.to_bits());
    }
    eat(u64::MAX); // separator
    for c in w.omega().coeffs() {
        eat(c.to_bits());
    }
    h
}

pub struct JCacheKey {
    pub a: f64,
    pub b: f64,
    pub d: usize,
    pub n: usize,
    pub fingerprint: u64,
}

impl JCacheKey {
    fn file_name(&self) -> String {
        format!(
            "j-{:016x}-{:016x}-{:016x}-{}-{}.txt",
            self.fingerprint,
            self.a.to_bits(),
            self.b.to_bits(),
            self.d,
            self.n
        )
    }
}

pub fn load(dir: &Path, key: &JCacheKey) -> Option<DMatrix<f64>> {
    let path = dir.join(key.file_name());
    let text = std::fs::read_to_string(path).ok()?;
    let doc = Document::parse(&text).ok()?;
    // key echo must match bit-exactly
    let same = doc.get("a")?.as_f64()?.to_bits() == key.a.to_bits()
        && doc.get("b")?.as_f64()?.to_bits() == key.b.to_bits()
        && doc.get("d")?.as_usize()? == key.d
        && doc.get("n")?.as_usize()? == key.n
        && doc.get("fingerprint")?.as_str()? == format!("fp{:016x}", key.fingerprint);
    if !same {
        return None;
    }
    let rows = doc.get("rows")?.as_list()?;
    if rows.len() != key.d + 1 {
        return None;
    }
    let mut m = DMatrix::<f64>::zeros(key.d + 1, key.n + 1);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_list()?;
        if row.len() != key.n + 1 {
            return None;
        }
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = v.as_f64()?;
        }
    }
    Some(m)
}

pub fn store(dir: &Path, key: &JCacheKey, m: &DMatrix<f64>) {
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    let mut doc = Document::new();
    doc.push("a", Value::Float(key.a));
    doc.push("b", Value::Float(key.b));
    doc.push("d", Value::Int(key.d as i64));
    doc.push("n", Value::Int(key.n as i64));
    doc.push(
        "fingerprint",
        Value::Str(format!("fp{:016x}", key.fingerprint)),
    );
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::List((0..m.ncols()).map(|j| Value::Float(m[(i, j)])).collect()))
        .collect();
    doc.push("rows", Value::List(rows));
    let path = dir.join(key.file_name());
    let tmp = dir.join(format!("{}.tmp", key.file_name()));
    if std::fs::write(&tmp, doc.to_text()).is_ok() {
        let _ = std::fs::rename(&tmp, &path);
    }
}

/// Cache directory from the environment, if configured.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("CHEBK_CACHE_DIR").map(PathBuf::from)
}
