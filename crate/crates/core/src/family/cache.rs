//! On-disk table of family values `(gen a, gen b, chi_a(b))`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::HeckeFamily;
use crate::error::{Error, Result};
use crate::ring::Gaussian;

const MAGIC: &str = "# hecke-family-cache v1";

/// Header lines identifying the family; a cache is reused only when these match exactly.
pub fn cache_header(family: &HeckeFamily) -> String {
    let reps: Vec<String> = family.representatives().iter().map(|r| format!("{}:{}", r.ideal.gen(), r.m)).collect();
    format!(
        "{MAGIC}\n# field={} c={} seed={} reps={}\n",
        family.field_id(),
        family.modulus().gen(),
        family.choices_seed(),
        reps.join(";")
    )
}

/// Writes the current value memo; returns the number of rows.
pub fn write_cache(family: &HeckeFamily, path: &Path) -> Result<usize> {
    let rows = family.memo_entries();
    let mut s = cache_header(family);
    s.push_str("a,b,value\n");
    for ((a, b), v) in &rows {
        let _ = writeln!(s, "{a},{b},{v}");
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::Configuration(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, s).map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))?;
    Ok(rows.len())
}

/// Loads a cache into the memo. Returns `Ok(None)` when the file is absent or its header differs.
pub fn load_cache(family: &HeckeFamily, path: &Path) -> Result<Option<usize>> {
    let Ok(text) = fs::read_to_string(path) else { return Ok(None) };
    let header = cache_header(family);
    let Some(body) = text.strip_prefix(header.as_str()) else { return Ok(None) };
    let mut lines = body.lines();
    if lines.next() != Some("a,b,value") {
        return Err(Error::Parse(format!("{}: missing column header", path.display())));
    }
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let parts: Vec<&str> = line.split(',').collect();
        let bad = || Error::Parse(format!("bad cache row '{line}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: Gaussian = parts[0].parse().map_err(|_| bad())?;
        let b: Gaussian = parts[1].parse().map_err(|_| bad())?;
        let v: i8 = parts[2].parse().map_err(|_| bad())?;
        if !(-1..=1).contains(&v) {
            return Err(bad());
        }
        rows.push((a, b, v));
    }
    for &(a, b, v) in &rows {
        family.memo_insert(a, b, v);
    }
    Ok(Some(rows.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyOptions;
    use crate::ring::{FieldId, Ideal};

    #[test]
    fn round_trip_and_header_mismatch() {
        let dir = std::env::temp_dir().join(format!("hecke-cache-test-{}", std::process::id()));
        let path = dir.join("q.csv");
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap();
        for a in [3i128, 5, 7, 11] {
            for b in [13i128, 17, 19] {
                fam.chi_eval(&Ideal::rational(a).unwrap(), &Ideal::rational(b).unwrap()).unwrap();
            }
        }
        let before = fam.memo_entries();
        assert_eq!(write_cache(&fam, &path).unwrap(), before.len());
        fam.clear_memo();
        assert_eq!(load_cache(&fam, &path).unwrap(), Some(before.len()));
        assert_eq!(fam.memo_entries(), before);

        let mut opts = FamilyOptions::new(FieldId::Q);
        opts.choices_seed = 1;
        let other = HeckeFamily::build(&opts).unwrap();
        if cache_header(&other) != cache_header(&fam) {
            assert_eq!(load_cache(&other, &path).unwrap(), None);
        }
        let qi = HeckeFamily::build(&FamilyOptions::new(FieldId::Qi)).unwrap();
        assert_eq!(load_cache(&qi, &path).unwrap(), None);
        let _ = fs::remove_dir_all(dir);
    }
}
