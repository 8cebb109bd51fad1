//! On-disk memo cache for count tables.
//!
//! Plain text, one cell per line: `n k <decimal integer>`. Loading
//! validates every cell against the recurrence identity (and `t(n,0) = 1`)
//! before trusting anything, so a corrupted or hand-edited file is rejected
//! as a whole and the caller recomputes.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{CheckedSub, One};

use crate::counting::CountTable;
use crate::{Error, Result};

/// Syntax-only parse of the cache text: `n k value` per line, blank lines
/// and `#` comments allowed.
pub fn parse_cache_text(text: &str) -> Result<Vec<(u32, u32, BigUint)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(n), Some(k), Some(v), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::CacheInvalid(format!(
                "line {}: expected `n k value`",
                lineno + 1
            )));
        };
        let n: u32 = n
            .parse()
            .map_err(|_| Error::CacheInvalid(format!("line {}: bad n", lineno + 1)))?;
        let k: u32 = k
            .parse()
            .map_err(|_| Error::CacheInvalid(format!("line {}: bad k", lineno + 1)))?;
        let v = v
            .parse::<BigUint>()
            .map_err(|_| Error::CacheInvalid(format!("line {}: bad value", lineno + 1)))?;
        out.push((n, k, v));
    }
    Ok(out)
}

/// Checks every parsed cell: no duplicates, `t(n,0) = 1`, in-domain
/// coordinates, and for `k >= 1` both parents present with
/// `2 t(n,k) = (n+2k-1) t(n,k-1) + (n-k) t(n+1,k-1)`.
pub fn validate_cells(cells: &[(u32, u32, BigUint)]) -> Result<HashMap<(u32, u32), BigUint>> {
    let mut map = HashMap::with_capacity(cells.len());
    for (n, k, v) in cells {
        if (*k as u64) > (*n as u64) + 1 {
            return Err(Error::CacheInvalid(format!(
                "cell ({n},{k}) is outside the combinatorial domain"
            )));
        }
        if map.insert((*n, *k), v.clone()).is_some() {
            return Err(Error::CacheInvalid(format!("duplicate cell ({n},{k})")));
        }
    }
    for ((n, k), v) in &map {
        if *k == 0 {
            if !v.is_one() {
                return Err(Error::CacheInvalid(format!("cell ({n},0) must be 1")));
            }
            continue;
        }
        let a = map.get(&(*n, k - 1)).ok_or_else(|| {
            Error::CacheInvalid(format!("cell ({n},{k}) misses parent ({n},{})", k - 1))
        })?;
        let b = map.get(&(n + 1, k - 1)).ok_or_else(|| {
            Error::CacheInvalid(format!(
                "cell ({n},{k}) misses parent ({},{})",
                n + 1,
                k - 1
            ))
        })?;
        let lhs = v * 2u32;
        let n64 = *n as u64;
        let k64 = *k as u64;
        let first = a * BigUint::from(n64 + 2 * k64 - 1);
        let rhs = if n64 >= k64 {
            first + b * BigUint::from(n64 - k64)
        } else {
            first
                .checked_sub(&(b * BigUint::from(k64 - n64)))
                .ok_or_else(|| {
                    Error::CacheInvalid(format!("cell ({n},{k}) fails the recurrence identity"))
                })?
        };
        if lhs != rhs {
            return Err(Error::CacheInvalid(format!(
                "cell ({n},{k}) fails the recurrence identity"
            )));
        }
    }
    Ok(map)
}

/// Tries to assemble the full `(n,k)` triangle from validated cells.
/// `Ok(None)` when the cache simply does not cover this shape.
pub fn table_from_cells(
    n: u32,
    k: u32,
    cells: &HashMap<(u32, u32), BigUint>,
) -> Result<Option<CountTable>> {
    if (k as u64) > (n as u64) + 1 {
        return Err(Error::InvalidShape { n, k });
    }
    let mut rows = Vec::with_capacity(k as usize + 1);
    for d in 0..=k {
        let mut row = Vec::with_capacity(d as usize + 1);
        for j in 0..=d {
            match cells.get(&(n + j, k - d)) {
                Some(v) => row.push(v.clone()),
                None => return Ok(None),
            }
        }
        rows.push(row);
    }
    Ok(Some(CountTable::from_rows(n, k, rows)))
}

/// Loads a table for `(n,k)` from a cache file. `Ok(None)` when the file
/// does not exist or does not cover the shape; `Err` when it exists but is
/// corrupt (so the caller can warn before recomputing).
pub fn load_count_table(path: &Path, n: u32, k: u32) -> Result<Option<CountTable>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let cells = parse_cache_text(&text)?;
    let map = validate_cells(&cells)?;
    table_from_cells(n, k, &map)
}

/// Writes the full triangle of a table, one `n k value` line per cell.
pub fn save_count_table(path: &Path, table: &CountTable) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let (n, k) = table.base();
    writeln!(out, "# count-table cache for n={n} k={k}")?;
    for (cn, ck, v) in table.cells() {
        writeln!(out, "{cn} {ck} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::build_count_table;

    #[test]
    fn roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let table = build_count_table(6, 5).unwrap();
        save_count_table(&path, &table).unwrap();
        let loaded = load_count_table(&path, 6, 5).unwrap().expect("covered");
        assert_eq!(loaded.total(), table.total());
        // the same file answers covered sub-triangles too
        let sub = load_count_table(&path, 7, 4).unwrap().expect("covered");
        assert_eq!(sub.total(), table.get(7, 4).unwrap());
        let sub = load_count_table(&path, 6, 4).unwrap().expect("covered");
        assert_eq!(sub.total(), table.get(6, 4).unwrap());
        // but not shapes outside the stored triangle
        assert!(load_count_table(&path, 5, 2).unwrap().is_none());
    }

    #[test]
    fn missing_file_is_none() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_count_table(&dir.path().join("nope"), 3, 2)
            .unwrap()
            .is_none());
    }

    #[test]
    fn corrupted_value_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let table = build_count_table(5, 4).unwrap();
        save_count_table(&path, &table).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let bad = text.replace("5 4 1270", "5 4 1271");
        std::fs::write(&path, bad).unwrap();
        assert!(matches!(
            load_count_table(&path, 5, 4),
            Err(Error::CacheInvalid(_))
        ));
    }

    #[test]
    fn syntax_errors_are_rejected() {
        assert!(parse_cache_text("1 2").is_err());
        assert!(parse_cache_text("a b c").is_err());
        assert!(parse_cache_text("1 2 3 4").is_err());
        assert!(parse_cache_text("# comment\n\n3 0 1\n").is_ok());
    }

    #[test]
    fn merged_apex_validates() {
        // triangle for (1,2): includes the k = n+1 apex with its subtraction
        let table = build_count_table(1, 2).unwrap();
        let cells: Vec<_> = table.cells().map(|(n, k, v)| (n, k, v.clone())).collect();
        let map = validate_cells(&cells).unwrap();
        let rebuilt = table_from_cells(1, 2, &map).unwrap().expect("covered");
        assert_eq!(rebuilt.total(), table.total());
    }

    #[test]
    fn base_row_must_be_one() {
        let cells = vec![(4u32, 0u32, BigUint::from(2u32))];
        assert!(validate_cells(&cells).is_err());
    }
}
