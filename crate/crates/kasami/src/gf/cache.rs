//! On-disk Zech table cache.
//!
//! Layout: `ZECH1`, p and n as u64 LE, n + 1 modulus bytes (constant term
//! first), then p^n - 1 Zech entries as u64 LE with `u64::MAX` marking a
//! zero result.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{FieldCtx, ZERO_LOG};
use crate::error::{Error, Result};

const MAGIC: &[u8; 5] = b"ZECH1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZechFile {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub zech: Vec<u32>,
}

pub(crate) fn cache_path(dir: &Path, p: u32, n: u32, modulus: &[u32]) -> PathBuf {
    let m: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
    dir.join(format!("zech_p{p}_n{n}_m{}.bin", m.join("-")))
}

pub fn write_zech_file(path: &Path, ctx: &FieldCtx) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(ctx.p() as u64).to_le_bytes())?;
    w.write_all(&(ctx.n() as u64).to_le_bytes())?;
    for &c in ctx.modulus() {
        w.write_all(&[c as u8])?;
    }
    for &z in ctx.zech_table() {
        let v = if z == ZERO_LOG { u64::MAX } else { z as u64 };
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::CacheFormat(msg.into())
}

pub fn read_zech_file(path: &Path) -> Result<ZechFile> {
    let bytes = fs::read(path)?;
    if bytes.len() < 21 || &bytes[..5] != MAGIC {
        return Err(bad("missing ZECH1 header"));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let (p, n) = (word(5), word(13));
    if p > 255 || n == 0 || n > 64 {
        return Err(bad(format!("implausible parameters p = {p}, n = {n}")));
    }
    let q = (p as u128).pow(n as u32);
    let mod_end = 21 + n as usize + 1;
    let expected = mod_end as u128 + 8 * (q - 1);
    if bytes.len() as u128 != expected {
        return Err(bad(format!("length {} but expected {expected}", bytes.len())));
    }
    let modulus = bytes[21..mod_end].iter().map(|&b| b as u32).collect();
    let zech = bytes[mod_end..]
        .chunks_exact(8)
        .map(|c| {
            let v = u64::from_le_bytes(c.try_into().unwrap());
            if v == u64::MAX {
                Ok(ZERO_LOG)
            } else if (v as u128) < q - 1 {
                Ok(v as u32)
            } else {
                Err(bad(format!("entry {v} out of range")))
            }
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(ZechFile {
        p: p as u32,
        n: n as u32,
        modulus,
        zech,
    })
}

#[cfg(test)]
mod tests {
    use super::super::FieldOptions;
    use super::*;

    #[test]
    fn roundtrip_and_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let opts = FieldOptions {
            cache_dir: Some(dir.path().to_path_buf()),
            ..FieldOptions::default()
        };
        let a = FieldCtx::build(3, 4, None, &opts).unwrap();
        let path = cache_path(dir.path(), 3, 4, a.modulus());
        let file = read_zech_file(&path).unwrap();
        assert_eq!(file.zech, a.zech_table());
        assert_eq!(fs::metadata(&path).unwrap().len(), 5 + 16 + 5 + 8 * 80);
        let b = FieldCtx::build(3, 4, None, &opts).unwrap();
        assert_eq!(b.zech_table(), a.zech_table());
    }

    #[test]
    fn corrupted_cache_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let opts = FieldOptions {
            cache_dir: Some(dir.path().to_path_buf()),
            ..FieldOptions::default()
        };
        let a = FieldCtx::build(3, 2, None, &opts).unwrap();
        let path = cache_path(dir.path(), 3, 2, a.modulus());
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 8;
        bytes[last] ^= 1;
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            FieldCtx::build(3, 2, None, &opts),
            Err(Error::CacheFormat(_))
        ));
        fs::write(&path, b"nope").unwrap();
        assert!(matches!(read_zech_file(&path), Err(Error::CacheFormat(_))));
    }
}
