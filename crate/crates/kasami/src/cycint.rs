//! Exact elements of Z[w], w a primitive p-th root of unity.
//!
//! Stored as p integer coefficients of w^0..w^(p-1) with the last one
//! pinned to zero (using 1 + w + ... + w^(p-1) = 0), so equal values have
//! equal representations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CycInt {
    coeffs: Vec<BigInt>,
}

impl CycInt {
    /// Canonicalizes an arbitrary coefficient vector of length p.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> CycInt {
        assert!(coeffs.len() >= 3 && coeffs.len() % 2 == 1, "p must be an odd prime");
        let last = coeffs.last().unwrap().clone();
        if !last.is_zero() {
            for c in coeffs.iter_mut() {
                *c -= &last;
            }
        }
        CycInt { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> CycInt {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(p: u32) -> CycInt {
        CycInt {
            coeffs: vec![BigInt::zero(); p as usize],
        }
    }

    pub fn one(p: u32) -> CycInt {
        Self::from_int(p, BigInt::one())
    }

    pub fn from_int(p: u32, v: impl Into<BigInt>) -> CycInt {
        let mut z = Self::zero(p);
        z.coeffs[0] = v.into();
        z
    }

    /// w^e for any integer e.
    pub fn omega_pow(p: u32, e: i64) -> CycInt {
        let mut c = vec![BigInt::zero(); p as usize];
        c[e.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_coeffs(c)
    }

    /// sum over rho of counts[rho] w^rho
    pub fn from_counts(counts: &[u64]) -> CycInt {
        Self::from_coeffs(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn p(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this equals, if any.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// w -> w^(-1)
    pub fn conj(&self) -> CycInt {
        let p = self.coeffs.len();
        let mut out = vec![BigInt::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(p - i) % p] = c.clone();
        }
        Self::from_coeffs(out)
    }

    /// Multiplication by w^e.
    pub fn rotate(&self, e: i64) -> CycInt {
        let p = self.coeffs.len();
        let mut out = vec![BigInt::zero(); p];
        let s = e.rem_euclid(p as i64) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(i + s) % p] = c.clone();
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut acc = CycInt::one(self.p());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// |z|^2 = z conj(z), an element of the real subring.
    pub fn norm_sq(&self) -> CycInt {
        self * &self.conj()
    }

    /// Complex embedding with w = exp(2 pi i / p).
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.coeffs.len() as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, c)| {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let th = 2.0 * std::f64::consts::PI * i as f64 / p;
            (re + v * th.cos(), im + v * th.sin())
        })
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    /// Compares |z|^2 with an integer bound.
    ///
    /// Exact when |z|^2 is a rational integer; otherwise decided from the
    /// complex embedding with an error margin, `None` when inside the margin.
    pub fn cmp_norm_sq(&self, bound: &BigInt) -> Option<Ordering> {
        let nsq = self.norm_sq();
        if let Some(v) = nsq.as_integer() {
            return Some(v.cmp(bound));
        }
        let diff = &nsq - &CycInt::from_int(self.p(), bound.clone());
        let (re, _) = diff.to_complex();
        let mass: f64 = diff.coeffs.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum();
        let margin = 1e-9 * (1.0 + mass);
        if re > margin {
            Some(Ordering::Greater)
        } else if re < -margin {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Semicolon-separated coefficients, the CSV cell form.
    pub fn to_csv(&self) -> String {
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
    }

    pub fn from_csv(s: &str) -> Result<CycInt> {
        let coeffs = s
            .split(';')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Params(format!("bad cyclotomic integer {s:?}: {e}")))?;
        Self::checked(coeffs).map_err(Error::Params)
    }

    fn checked(coeffs: Vec<BigInt>) -> std::result::Result<CycInt, String> {
        if coeffs.len() < 3 || coeffs.len() % 2 == 0 {
            return Err(format!("need an odd number (>= 3) of coefficients, got {}", coeffs.len()));
        }
        if !coeffs.last().unwrap().is_zero() {
            return Err("last coefficient must be 0 in canonical form".into());
        }
        Ok(CycInt { coeffs })
    }

    fn same_p(&self, other: &CycInt) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "cyclotomic integers over different p");
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "w".to_string(),
                (1, false) => format!("{mag}w"),
                (_, true) => format!("w^{i}"),
                (_, false) => format!("{mag}w^{i}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.same_p(rhs);
        CycInt {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.same_p(rhs);
        CycInt {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.same_p(rhs);
        let p = self.coeffs.len();
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % p] += a * b;
                }
            }
        }
        CycInt::from_coeffs(out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $m(self, rhs: CycInt) -> CycInt {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct CycIntJson {
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntJson {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<CycInt, D::Error> {
        let raw = CycIntJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::checked(coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_all_roots_is_zero() {
        let all = CycInt::from_i64s(&[1, 1, 1, 1, 1]);
        assert!(all.is_zero());
        let w = CycInt::omega_pow(5, 1);
        assert_eq!(w.pow(5), CycInt::one(5));
        assert_eq!(CycInt::omega_pow(5, -1), w.conj());
    }

    #[test]
    fn canonical_form_pins_last_coefficient() {
        let a = CycInt::from_i64s(&[3, 1, 2]);
        assert_eq!(a.coeffs().last().unwrap(), &BigInt::zero());
        assert_eq!(a, CycInt::from_i64s(&[1, -1, 0]));
    }

    #[test]
    fn display_and_csv() {
        let a = CycInt::from_i64s(&[0, 1, -1]);
        assert_eq!(a.to_string(), "1+2w");
        assert_eq!(CycInt::from_i64s(&[-3, 0, 1, 0, 0]).to_string(), "-3+w^2");
        let back = CycInt::from_csv(&a.to_csv()).unwrap();
        assert_eq!(a, back);
        assert!(CycInt::from_csv("1;2;3").is_err());
        assert_eq!(CycInt::zero(3).to_string(), "0");
    }

    #[test]
    fn json_roundtrip() {
        let a = CycInt::from_i64s(&[-7, 3, 0, 12, 1]);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with("{\"coeffs\":[\""));
        let b: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn norm_comparison() {
        let w = CycInt::omega_pow(3, 1);
        let c = &w.scale(&BigInt::from(9)) - &CycInt::one(3);
        // |9w - 1|^2 = 81 + 1 + 9 = 91
        assert_eq!(c.norm_sq().as_integer(), Some(&BigInt::from(91)));
        assert_eq!(c.cmp_norm_sq(&BigInt::from(100)), Some(Ordering::Less));
        // |3w - 1|^2 = 10 - 6 cos(2 pi / 5), not rational for p = 5
        let e = &CycInt::omega_pow(5, 1).scale(&BigInt::from(3)) - &CycInt::one(5);
        assert!(e.norm_sq().as_integer().is_none());
        assert_eq!(e.cmp_norm_sq(&BigInt::from(8)), Some(Ordering::Greater));
        assert_eq!(e.cmp_norm_sq(&BigInt::from(9)), Some(Ordering::Less));
    }
}
