//! The sequence family s_(a,b)(alpha^t) = Tr^m(a alpha^((p^m+1)t)) + Tr(b alpha^((p^k+1)t) + alpha^t)
//! and its correlation values.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};

use crate::budget::Budget;
use crate::census::{s_slice, SpectrumCensus};
use crate::code::{materialize_codeword, CodewordLabel};
use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::expsum::s_closed_form;
use crate::gf::FieldElem;
use crate::parallel::chunked_fold;
use crate::qform::{FormLabel, KasamiCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SequenceId {
    /// in the subfield F_(p^m)
    pub a: FieldElem,
    pub b: FieldElem,
}

impl SequenceId {
    pub fn new(ctx: &KasamiCtx, a: FieldElem, b: FieldElem) -> Result<SequenceId> {
        let l = ctx.label(a, b)?;
        Ok(SequenceId { a: l.gamma, b: l.delta })
    }

    /// Family member `index`, ordered as form labels.
    pub fn at(ctx: &KasamiCtx, index: u64) -> SequenceId {
        let l = ctx.label_at(index);
        SequenceId { a: l.gamma, b: l.delta }
    }

    pub fn index(&self, ctx: &KasamiCtx) -> u64 {
        ctx.label_index(&self.form())
    }

    fn form(&self) -> FormLabel {
        FormLabel { gamma: self.a, delta: self.b }
    }
}

pub fn family_size(ctx: &KasamiCtx) -> u64 {
    ctx.params.label_count()
}

/// s(t) for t = 0..p^n - 2.
pub fn sequence(ctx: &KasamiCtx, id: &SequenceId) -> Vec<u8> {
    materialize_codeword(ctx, &CodewordLabel::from_form(id.form(), ctx.field.one()))
}

/// Smallest T > 0 with s(t + T) = s(t) for all t.
pub fn least_period(s: &[u8]) -> usize {
    let n = s.len();
    (1..=n)
        .filter(|t| n % t == 0)
        .find(|&t| (0..n).all(|i| s[i] == s[(i + t) % n]))
        .unwrap_or(n)
}

/// sum_t w^(s1(t) - s2(t + tau)) for two sequences of equal length.
pub fn correlation_of(s1: &[u8], s2: &[u8], tau: usize, p: u32) -> CycInt {
    let n = s1.len();
    let mut counts = vec![0u64; p as usize];
    for t in 0..n {
        let d = (s1[t] as u32 + p - s2[(t + tau) % n] as u32) % p;
        counts[d as usize] += 1;
    }
    CycInt::from_counts(&counts)
}

fn check_tau(ctx: &KasamiCtx, tau: u64) -> Result<()> {
    let period = ctx.field.group_order() as u64;
    if tau >= period {
        return Err(Error::ShiftOutOfRange { tau, period });
    }
    Ok(())
}

/// C_(i,j)(tau) by direct summation.
pub fn correlation(ctx: &KasamiCtx, id1: &SequenceId, id2: &SequenceId, tau: u64) -> Result<CycInt> {
    check_tau(ctx, tau)?;
    Ok(correlation_of(&sequence(ctx, id1), &sequence(ctx, id2), tau as usize, ctx.p()))
}

/// (lambda_1, lambda_2, lambda_3) with C_(i,j)(tau) = S(lambda) - 1.
pub fn transported_label(ctx: &KasamiCtx, id1: &SequenceId, id2: &SequenceId, tau: u64) -> Result<(FormLabel, FieldElem)> {
    check_tau(ctx, tau)?;
    let f = &ctx.field;
    let at = f.alpha_pow(tau as i64);
    let moved = ctx.act(&id2.form(), at);
    let l1 = f.sub(id1.a, moved.gamma);
    let l2 = f.sub(id1.b, moved.delta);
    let l3 = f.sub(f.one(), at);
    Ok((FormLabel { gamma: l1, delta: l2 }, l3))
}

/// C_(i,j)(tau) as S(lambda_1, lambda_2, lambda_3) - 1, with S in closed form.
pub fn correlation_via_s(ctx: &KasamiCtx, id1: &SequenceId, id2: &SequenceId, tau: u64) -> Result<CycInt> {
    let (label, eps) = transported_label(ctx, id1, id2, tau)?;
    let p = ctx.p();
    let s = if label == ctx.zero_label() {
        if eps.is_zero() {
            CycInt::from_int(p, ctx.q())
        } else {
            CycInt::zero(p)
        }
    } else {
        s_closed_form(ctx, &label, eps)?
    };
    Ok(&s - &CycInt::one(p))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrelationSpectrum {
    pub entries: BTreeMap<CycInt, BigUint>,
}

impl CorrelationSpectrum {
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn get(&self, key: &CycInt) -> BigUint {
        self.entries.get(key).cloned().unwrap_or_default()
    }

    pub fn distinct_values(&self) -> usize {
        self.entries.len()
    }

    pub fn matches(&self, predicted: &BTreeMap<CycInt, BigInt>) -> bool {
        let theirs: BTreeMap<CycInt, BigUint> = predicted
            .iter()
            .filter(|(_, c)| **c != BigInt::ZERO)
            .filter_map(|(k, c)| Some((k.clone(), c.to_biguint()?)))
            .collect();
        theirs.len() == predicted.values().filter(|c| **c != BigInt::ZERO).count() && self.entries == theirs
    }

    /// Spectrum without the M in-phase autocorrelations (i = j, tau = 0).
    pub fn nontrivial(&self, family: u64, p: u32, period: u64) -> CorrelationSpectrum {
        let mut out = self.clone();
        let key = CycInt::from_int(p, period);
        let family = BigUint::from(family);
        if let Some(c) = out.entries.get_mut(&key) {
            if *c <= family {
                out.entries.remove(&key);
            } else {
                *c -= family;
            }
        }
        out
    }

    /// A value of largest magnitude, with that magnitude.
    pub fn max_magnitude(&self) -> Option<(CycInt, f64)> {
        self.entries
            .keys()
            .map(|k| (k.clone(), k.abs_f64()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
    }

    /// Whether every value satisfies |C| <= bound. `None` if a comparison is
    /// too close to decide in floating point.
    pub fn within(&self, bound: &BigInt) -> Option<bool> {
        let sq = bound * bound;
        let mut ok = true;
        for k in self.entries.keys() {
            if k.cmp_norm_sq(&sq)? == Ordering::Greater {
                ok = false;
            }
        }
        Some(ok)
    }

    /// Whether some value has |C| = bound exactly.
    pub fn attains(&self, bound: &BigInt) -> bool {
        let sq = bound * bound;
        self.entries.keys().any(|k| k.cmp_norm_sq(&sq) == Some(Ordering::Equal))
    }

    pub fn from_census(census: &SpectrumCensus) -> CorrelationSpectrum {
        CorrelationSpectrum {
            entries: census.entries.clone(),
        }
    }
}

/// All (ordered pair, shift) correlation values from two label slices of S:
/// M times [the eps = 0 slice plus (p^n - 2) copies of the eps = 1 slice], shifted by -1.
pub fn correlation_distribution(ctx: &KasamiCtx, workers: usize, budget: &Budget) -> Result<CorrelationSpectrum> {
    let params = &ctx.params;
    budget.check_ops("correlation census", 2 * params.label_count() as u128 * ctx.q() as u128)?;
    let p = ctx.p();
    let family = BigUint::from(params.label_count());
    let others = BigUint::from(ctx.q() as u64 - 2);
    let zero = s_slice(ctx, ctx.field.zero(), workers);
    let one = s_slice(ctx, ctx.field.one(), workers);
    let m1 = CycInt::one(p);
    let mut entries: BTreeMap<CycInt, BigUint> = BTreeMap::new();
    for (s, c) in zero.entries {
        *entries.entry(&s - &m1).or_default() += c * &family;
    }
    for (s, c) in one.entries {
        *entries.entry(&s - &m1).or_default() += c * &family * &others;
    }
    Ok(CorrelationSpectrum { entries })
}

/// All (ordered pair, shift) correlation values by direct summation over the
/// materialized family, using bit-sliced symbol indicators.
pub fn brute_correlation_spectrum(ctx: &KasamiCtx, workers: usize, budget: &Budget) -> Result<CorrelationSpectrum> {
    let fam = family_size(ctx) as usize;
    let period = ctx.field.group_order() as usize;
    let p = ctx.p() as usize;
    let words = period.div_ceil(64);
    budget.check_ops(
        "pairwise correlation census",
        (fam as u128).pow(2) * period as u128 * (p * p * words) as u128,
    )?;
    budget.check_ops("rotated indicator tables", (fam * period * p * words) as u128)?;
    let seqs: Vec<Vec<u8>> = (0..fam).map(|i| sequence(ctx, &SequenceId::at(ctx, i as u64))).collect();
    // rot[((j * period + tau) * p + a) * words ..]: bits t with s_j(t + tau) = a
    let mut rot = vec![0u64; fam * period * p * words];
    for (j, s) in seqs.iter().enumerate() {
        for tau in 0..period {
            let base = (j * period + tau) * p * words;
            for t in 0..period {
                let a = s[(t + tau) % period] as usize;
                rot[base + a * words + t / 64] |= 1 << (t % 64);
            }
        }
    }
    let block = p * words;
    // dense key over counts of rho = 1..p-1; count at 0 is implied
    let radix = period + 1;
    let dense_len = radix.checked_pow(p as u32 - 1).filter(|&l| l <= 1 << 24);
    type Tally = (Vec<u64>, HashMap<Vec<u32>, u64>);
    let (dense, sparse): Tally = chunked_fold(
        fam as u64,
        workers,
        |range| {
            let mut dense = vec![0u64; dense_len.unwrap_or(0)];
            let mut sparse: HashMap<Vec<u32>, u64> = HashMap::new();
            let mut counts = vec![0u32; p];
            for i in range {
                let own = &rot[i as usize * period * block..][..block];
                for j in 0..fam {
                    for tau in 0..period {
                        let other = &rot[(j * period + tau) * block..][..block];
                        let mut rest = period as u32;
                        for rho in 1..p {
                            let mut c = 0u32;
                            for a in 0..p {
                                let b = (a + p - rho) % p;
                                let x = &own[a * words..(a + 1) * words];
                                let y = &other[b * words..(b + 1) * words];
                                c += x.iter().zip(y).map(|(u, v)| (u & v).count_ones()).sum::<u32>();
                            }
                            counts[rho] = c;
                            rest -= c;
                        }
                        counts[0] = rest;
                        if dense_len.is_some() {
                            let key = counts[1..].iter().rev().fold(0usize, |acc, &c| acc * radix + c as usize);
                            dense[key] += 1;
                        } else {
                            *sparse.entry(counts.clone()).or_default() += 1;
                        }
                    }
                }
            }
            (dense, sparse)
        },
        |acc, (d, s)| {
            if acc.0.is_empty() {
                acc.0 = d;
            } else {
                for (a, b) in acc.0.iter_mut().zip(d) {
                    *a += b;
                }
            }
            for (k, v) in s {
                *acc.1.entry(k).or_default() += v;
            }
        },
    );
    let mut entries: BTreeMap<CycInt, BigUint> = BTreeMap::new();
    let mut add = |counts: &[u64], c: u64| {
        *entries.entry(CycInt::from_counts(counts)).or_default() += c;
    };
    for (key, &c) in dense.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut counts = vec![0u64; p];
        let mut k = key;
        for slot in counts.iter_mut().skip(1) {
            *slot = (k % radix) as u64;
            k /= radix;
        }
        counts[0] = period as u64 - counts[1..].iter().sum::<u64>();
        add(&counts, c);
    }
    for (counts, c) in sparse {
        add(&counts.iter().map(|&x| x as u64).collect::<Vec<_>>(), c);
    }
    Ok(CorrelationSpectrum { entries })
}

/// Sequences as digit lines, preceded by one header line.
pub fn export_sequences(ctx: &KasamiCtx) -> String {
    let params = &ctx.params;
    let mut out = format!(
        "# p={} m={} k={}; line i+1 holds a-index={} b-index={}\n",
        params.p, params.m, params.k, "i/p^n", "i%p^n"
    );
    for i in 0..family_size(ctx) {
        let id = SequenceId::at(ctx, i);
        for s in sequence(ctx, &id) {
            out.push((b'0' + s) as char);
        }
        out.push('\n');
    }
    out
}
