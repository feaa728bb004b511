//! Dense polynomials over F_p, constant term first. Only what field
//! construction needs: reduction, modular powers, gcd and Rabin's test.

use crate::fp;

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo `f` (f nonzero).
pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = fp::inv(f[df], p);
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let c = fp::mul(r[dr], lead_inv, p);
        let shift = dr - df;
        for (i, &fi) in f[..=df].iter().enumerate() {
            r[i + shift] = fp::sub(r[i + shift], fp::mul(c, fi, p), p);
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let pp = p as u64;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % pp;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        e >>= 1;
    }
    rem(&acc, f, p)
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            fp::sub(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                p,
            )
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let li = fp::inv(a[d], p);
        for c in a.iter_mut() {
            *c = fp::mul(*c, li, p);
        }
    }
    a
}

/// Rabin's irreducibility test for a monic `f` of degree `n`:
/// x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1 for every prime r | n.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // frob[j] = x^(p^j) mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(rem(&x, f, p));
    for j in 1..=n {
        let next = powmod(&frob[j - 1], p as u64, f, p);
        frob.push(next);
    }
    if frob[n] != rem(&x, f, p) {
        return false;
    }
    for r in fp::prime_factors(n as u64) {
        let h = sub(&frob[n / r as usize], &x, p);
        let g = gcd(f, &h, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
