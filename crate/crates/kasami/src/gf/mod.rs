//! Table-driven arithmetic in F_(p^n) for odd p.
//!
//! Nonzero elements are stored by their discrete logarithm to a fixed
//! primitive element alpha; addition goes through a Zech-logarithm table.
//! Every element also has a *vector index*: its coefficient vector over
//! the polynomial basis {1, x, ..., x^(n-1)} read as a base-p integer
//! with the constant term as the least significant digit.

mod cache;
pub(crate) mod poly;

use std::path::PathBuf;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};
use crate::fp;

pub use cache::{read_zech_file, write_zech_file, ZechFile};

/// Sentinel log for the zero element.
pub const ZERO_LOG: u32 = u32::MAX;

/// Default cap on the number of field elements tables may hold.
pub const DEFAULT_MAX_ELEMENTS: u64 = 1 << 28;

static NEXT_TAG: AtomicU32 = AtomicU32::new(1);

/// An element of one particular [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    tag: u32,
    log: u32,
}

impl FieldElem {
    pub fn is_zero(self) -> bool {
        self.log == ZERO_LOG
    }

    /// Discrete log to the context's primitive element, `None` for zero.
    pub fn log(self) -> Option<u32> {
        (self.log != ZERO_LOG).then_some(self.log)
    }

    /// Raw log with [`ZERO_LOG`] for zero.
    pub fn raw_log(self) -> u32 {
        self.log
    }
}

#[derive(Clone, Debug)]
pub struct FieldOptions {
    pub max_elements: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            max_elements: DEFAULT_MAX_ELEMENTS,
            cache_dir: None,
        }
    }
}

/// Immutable field context for F_(p^n).
#[derive(Debug)]
pub struct FieldCtx {
    tag: u32,
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    alpha: Vec<u32>,
    /// log -> vector index, length q - 1
    exp: Vec<u32>,
    /// vector index -> log (ZERO_LOG at 0)
    log: Vec<u32>,
    /// i -> log(1 + alpha^i), ZERO_LOG when 1 + alpha^i = 0
    zech: Vec<u32>,
    /// vector index -> Tr^n_1 as an F_p residue
    abs_trace: Vec<u32>,
    /// p^j mod (q - 1), j = 0..n
    frob_mult: Vec<u64>,
    digit_weights: Vec<u32>,
}

fn check_budget(p: u32, n: u32, max_elements: u64) -> Result<u32> {
    let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    let cap = max_elements.min(u32::MAX as u64 - 1) as u128;
    if q > cap {
        return Err(Error::BudgetExceeded {
            what: "field size p^n",
            requested: q,
            cap,
        });
    }
    Ok(q as u32)
}

fn vec_to_index(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn index_to_vec(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(v % p);
        v /= p;
    }
    out
}

/// Lexicographically smallest monic irreducible of degree n, comparing
/// coefficients from the constant term upwards.
pub fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let total = (p as u64).pow(n);
    for idx in 0..total {
        // first coefficient is the most significant in this ordering
        let mut coeffs = vec![0u32; n as usize];
        let mut v = idx;
        for j in (0..n as usize).rev() {
            coeffs[j] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs.push(1);
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Builds F_(p^n) with the default modulus and budget.
    pub fn new(p: u32, n: u32) -> Result<FieldCtx> {
        Self::build(p, n, None, &FieldOptions::default())
    }

    pub fn build(p: u32, n: u32, modulus: Option<&[u32]>, opts: &FieldOptions) -> Result<FieldCtx> {
        if p % 2 == 0 || !fp::is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        check_budget(p, n, opts.max_elements)?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus {
                        expected: n,
                        got: m.len(),
                    });
                }
                m.to_vec()
            }
            None => default_modulus(p, n),
        };

        if let Some(dir) = &opts.cache_dir {
            let path = cache::cache_path(dir, p, n, &modulus);
            if path.exists() {
                let file = read_zech_file(&path)?;
                if file.p != p || file.n != n || file.modulus != modulus {
                    return Err(Error::CacheFormat(format!(
                        "{} does not match key ({p}, {n}, {modulus:?})",
                        path.display()
                    )));
                }
                let ctx = Self::from_trusted_modulus(p, n, modulus)?;
                if ctx.zech != file.zech {
                    return Err(Error::CacheFormat(format!(
                        "{}: Zech table disagrees with the modulus",
                        path.display()
                    )));
                }
                return Ok(ctx);
            }
        }

        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::Reducible(modulus));
        }
        let ctx = Self::from_trusted_modulus(p, n, modulus)?;
        if let Some(dir) = &opts.cache_dir {
            std::fs::create_dir_all(dir)?;
            write_zech_file(&cache::cache_path(dir, p, n, &ctx.modulus), &ctx)?;
        }
        Ok(ctx)
    }

    fn from_trusted_modulus(p: u32, n: u32, modulus: Vec<u32>) -> Result<FieldCtx> {
        let q = (p as u64).pow(n) as u32;
        let order = q as u64 - 1;
        let factors = fp::prime_factors(order);

        // smallest vector index whose order is q - 1
        let alpha = (1..q)
            .map(|v| index_to_vec(v, p, n))
            .find(|cand| {
                factors
                    .iter()
                    .all(|&r| poly::powmod(cand, order / r, &modulus, p) != vec![1u32])
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![ZERO_LOG; q as usize];
        let mut cur = vec![1u32];
        for (i, slot) in exp.iter_mut().enumerate() {
            let mut padded = cur.clone();
            padded.resize(n as usize, 0);
            let v = vec_to_index(&padded, p);
            *slot = v;
            debug_assert_eq!(log[v as usize], ZERO_LOG);
            log[v as usize] = i as u32;
            cur = poly::mulmod(&cur, &alpha, &modulus, p);
        }

        let zech = exp
            .iter()
            .map(|&v| {
                let c0 = v % p;
                let bumped = v - c0 + (c0 + 1) % p;
                log[bumped as usize]
            })
            .collect();

        let mut frob_mult = Vec::with_capacity(n as usize + 1);
        let mut f = 1u64 % order.max(1);
        for _ in 0..=n {
            frob_mult.push(f);
            f = (f * p as u64) % order.max(1);
        }
        let digit_weights = (0..n).map(|j| p.pow(j)).collect();

        let mut ctx = FieldCtx {
            tag: NEXT_TAG.fetch_add(1, Ordering::Relaxed),
            p,
            n,
            q,
            modulus,
            alpha,
            exp,
            log,
            zech,
            abs_trace: Vec::new(),
            frob_mult,
            digit_weights,
        };
        // absolute trace is F_p-linear: tabulate from the basis values
        let basis_tr: Vec<u32> = (0..n)
            .map(|j| {
                let b = ctx.from_vector(p.pow(j));
                ctx.to_fp(ctx.trace_def(b, 1)).expect("trace lands in F_p")
            })
            .collect();
        ctx.abs_trace = (0..q)
            .map(|v| {
                index_to_vec(v, p, n)
                    .iter()
                    .zip(&basis_tr)
                    .fold(0u32, |acc, (&c, &t)| fp::add(acc, fp::mul(c, t, p), p))
            })
            .collect();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field size p^n.
    pub fn size(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, p^n - 1.
    pub fn group_order(&self) -> u32 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficients (constant first) of the primitive element.
    pub fn alpha_coeffs(&self) -> Vec<u32> {
        let mut a = self.alpha.clone();
        a.resize(self.n as usize, 0);
        a
    }

    pub fn zech_table(&self) -> &[u32] {
        &self.zech
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    /// Absolute trace indexed by vector index.
    pub fn trace_table(&self) -> &[u32] {
        &self.abs_trace
    }

    pub fn owns(&self, x: FieldElem) -> bool {
        x.tag == self.tag
    }

    pub fn check(&self, x: FieldElem) -> Result<FieldElem> {
        if self.owns(x) {
            Ok(x)
        } else {
            Err(Error::ContextMismatch)
        }
    }

    #[inline]
    fn own(&self, x: FieldElem) -> u32 {
        assert!(x.tag == self.tag, "field element used with a foreign context");
        x.log
    }

    #[inline]
    fn elem(&self, log: u32) -> FieldElem {
        FieldElem { tag: self.tag, log }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(ZERO_LOG)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(0)
    }

    /// The primitive element alpha.
    pub fn alpha(&self) -> FieldElem {
        self.elem(1 % self.group_order())
    }

    /// alpha^e for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> FieldElem {
        self.elem(e.rem_euclid(self.group_order() as i64) as u32)
    }

    pub fn from_raw_log(&self, log: u32) -> FieldElem {
        assert!(log == ZERO_LOG || log < self.group_order());
        self.elem(log)
    }

    /// Canonical enumeration: index 0 is zero, index i >= 1 is alpha^(i-1).
    pub fn element(&self, index: u32) -> FieldElem {
        assert!(index < self.q);
        if index == 0 {
            self.zero()
        } else {
            self.elem(index - 1)
        }
    }

    pub fn index_of(&self, x: FieldElem) -> u32 {
        let l = self.own(x);
        if l == ZERO_LOG {
            0
        } else {
            l + 1
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |i| self.element(i))
    }

    pub fn from_vector(&self, v: u32) -> FieldElem {
        self.elem(self.log[v as usize])
    }

    pub fn to_vector(&self, x: FieldElem) -> u32 {
        let l = self.own(x);
        if l == ZERO_LOG {
            0
        } else {
            self.exp[l as usize]
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        assert!(coeffs.len() <= self.n as usize);
        let mut padded = coeffs.iter().map(|&c| c % self.p).collect::<Vec<_>>();
        padded.resize(self.n as usize, 0);
        self.from_vector(vec_to_index(&padded, self.p))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        index_to_vec(self.to_vector(x), self.p, self.n)
    }

    /// Embeds an F_p residue.
    pub fn from_fp(&self, c: u32) -> FieldElem {
        self.from_vector(c % self.p)
    }

    /// The F_p residue of an element of the prime subfield.
    pub fn to_fp(&self, x: FieldElem) -> Option<u32> {
        let v = self.to_vector(x);
        (v < self.p).then_some(v)
    }

    /// Polynomial basis element x^j as a field element.
    pub fn basis(&self, j: u32) -> FieldElem {
        self.from_vector(self.digit_weights[j as usize])
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (la, lb) = (self.own(a), self.own(b));
        if la == ZERO_LOG {
            return b;
        }
        if lb == ZERO_LOG {
            return a;
        }
        let ord = self.q - 1;
        let diff = if lb >= la { lb - la } else { lb + ord - la };
        let z = self.zech[diff as usize];
        if z == ZERO_LOG {
            self.zero()
        } else {
            self.elem(((la as u64 + z as u64) % ord as u64) as u32)
        }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let la = self.own(a);
        if la == ZERO_LOG {
            return a;
        }
        let ord = self.q - 1;
        self.elem(((la as u64 + (ord / 2) as u64) % ord as u64) as u32)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (la, lb) = (self.own(a), self.own(b));
        if la == ZERO_LOG || lb == ZERO_LOG {
            return self.zero();
        }
        let ord = (self.q - 1) as u64;
        self.elem(((la as u64 + lb as u64) % ord) as u32)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let la = self.own(a);
        if la == ZERO_LOG {
            return Err(Error::ZeroElement);
        }
        let ord = self.q - 1;
        Ok(self.elem((ord - la) % ord))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e, with 0^0 = 1.
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        let la = self.own(a);
        if e == 0 {
            return self.one();
        }
        if la == ZERO_LOG {
            return a;
        }
        let ord = (self.q - 1) as u128;
        self.elem(((la as u128 * e as u128) % ord) as u32)
    }

    /// a^(p^j)
    pub fn frobenius(&self, a: FieldElem, j: u32) -> FieldElem {
        let la = self.own(a);
        if la == ZERO_LOG {
            return a;
        }
        let ord = (self.q - 1) as u64;
        let mult = self.frob_mult[(j % self.n) as usize];
        self.elem(((la as u64 * mult) % ord) as u32)
    }

    fn trace_def(&self, x: FieldElem, l: u32) -> FieldElem {
        (0..self.n / l).fold(self.zero(), |acc, i| self.add(acc, self.frobenius(x, l * i)))
    }

    /// Tr^n_l(x) = sum of x^(p^(l i)) for i < n/l, an element of F_(p^l).
    pub fn trace(&self, x: FieldElem, l: u32) -> Result<FieldElem> {
        self.check(x)?;
        if l == 0 || self.n % l != 0 {
            return Err(Error::NotDivisor {
                l: l as u64,
                n: self.n as u64,
            });
        }
        Ok(self.trace_def(x, l))
    }

    /// Tr^m_l(y) for y in the subfield F_(p^m).
    pub fn subfield_trace(&self, y: FieldElem, m: u32, l: u32) -> Result<FieldElem> {
        self.check(y)?;
        if m == 0 || self.n % m != 0 {
            return Err(Error::NotDivisor {
                l: m as u64,
                n: self.n as u64,
            });
        }
        if l == 0 || m % l != 0 {
            return Err(Error::NotDivisor {
                l: l as u64,
                n: m as u64,
            });
        }
        if !self.in_subfield(y, m) {
            return Err(Error::NotInSubfield(m));
        }
        Ok((0..m / l).fold(self.zero(), |acc, i| self.add(acc, self.frobenius(y, l * i))))
    }

    /// Absolute trace Tr^n_1 as an F_p residue (table lookup).
    #[inline]
    pub fn abs_trace(&self, x: FieldElem) -> u32 {
        self.abs_trace[self.to_vector(x) as usize]
    }

    /// Quadratic character: 0 at zero, +1 on squares, -1 on nonsquares.
    pub fn quad_char(&self, x: FieldElem) -> i8 {
        match self.own(x) {
            ZERO_LOG => 0,
            l if l % 2 == 0 => 1,
            _ => -1,
        }
    }

    /// Whether nonzero `x` is an e-th power, for e | p^n - 1.
    pub fn is_power_residue(&self, x: FieldElem, e: u64) -> Result<bool> {
        let lx = self.own(x);
        if lx == ZERO_LOG {
            return Err(Error::ZeroElement);
        }
        let ord = self.group_order() as u64;
        if e == 0 || ord % e != 0 {
            return Err(Error::NotDivisor { l: e, n: ord });
        }
        Ok(lx as u64 % e == 0)
    }

    pub fn in_subfield(&self, x: FieldElem, m: u32) -> bool {
        self.frobenius(x, m) == x
    }

    /// Log of the generator g = alpha^((p^n - 1)/(p^m - 1)) of F_(p^m)^*.
    pub fn subfield_generator_log(&self, m: u32) -> Result<u32> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::NotDivisor {
                l: m as u64,
                n: self.n as u64,
            });
        }
        let sub_order = (self.p as u64).pow(m) - 1;
        Ok((self.group_order() as u64 / sub_order) as u32)
    }

    /// g^t for t in 0..p^m - 1, or zero when `t` is `None`.
    pub fn subfield_embed(&self, m: u32, t: Option<u64>) -> Result<FieldElem> {
        let g = self.subfield_generator_log(m)?;
        let size = (self.p as u64).pow(m) - 1;
        match t {
            None => Ok(self.zero()),
            Some(t) if t < size => Ok(self.elem((g as u64 * t) as u32)),
            Some(t) => Err(Error::IndexOutOfRange { index: t, size }),
        }
    }

    /// Canonical subfield enumeration: index 0 is zero, index t + 1 is g^t.
    pub fn subfield_element(&self, m: u32, index: u64) -> Result<FieldElem> {
        self.subfield_embed(m, index.checked_sub(1))
    }

    pub fn subfield_index_of(&self, x: FieldElem, m: u32) -> Result<u64> {
        let g = self.subfield_generator_log(m)?;
        match self.own(x) {
            ZERO_LOG => Ok(0),
            l if l % g == 0 => Ok((l / g) as u64 + 1),
            _ => Err(Error::NotInSubfield(m)),
        }
    }
}
