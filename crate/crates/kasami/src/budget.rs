//! Compute caps, checked before any large allocation or loop.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::gf::FieldOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// field tables hold at most 2^max_field_log2 elements
    pub max_field_log2: u32,
    /// brute-force codeword enumeration cap
    pub max_brute_codewords: u64,
    /// cap on elementary operations of a census
    pub max_census_ops: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_field_log2: 28,
            max_brute_codewords: 1 << 20,
            max_census_ops: 1 << 34,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            max_field_log2: 31,
            max_brute_codewords: u64::MAX,
            max_census_ops: u64::MAX,
        }
    }

    pub fn field_options(&self, cache_dir: Option<PathBuf>) -> FieldOptions {
        FieldOptions {
            max_elements: 1u64 << self.max_field_log2.min(62),
            cache_dir,
        }
    }

    pub fn check_ops(&self, what: &'static str, ops: u128) -> Result<()> {
        if ops > self.max_census_ops as u128 {
            return Err(Error::BudgetExceeded {
                what,
                requested: ops,
                cap: self.max_census_ops as u128,
            });
        }
        Ok(())
    }

    pub fn check_codewords(&self, count: u128) -> Result<()> {
        if count > self.max_brute_codewords as u128 {
            return Err(Error::BudgetExceeded {
                what: "brute-force codewords",
                requested: count,
                cap: self.max_brute_codewords as u128,
            });
        }
        Ok(())
    }
}
