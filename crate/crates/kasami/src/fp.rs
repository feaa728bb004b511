//! Scalar arithmetic in the prime field F_p and small integer helpers.
//!
//! Values are plain `u32` residues in `0..p`.

pub fn add(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - (b % p) as u64) % p as u64) as u32
}

pub fn neg(a: u32, p: u32) -> u32 {
    if a % p == 0 {
        0
    } else {
        p - a % p
    }
}

pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero mod `p`.
pub fn inv(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    pow(a, p as u64 - 2, p)
}

/// Legendre symbol: the quadratic character of F_p.
pub fn legendre(a: u32, p: u32) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow(a, (p as u64 - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Reduce a signed integer into `0..p`.
pub fn from_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn ipow(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("integer power overflow")
}

/// v(x) from the solution-count formula for quadratic forms: q - 1 at zero, -1 elsewhere.
pub fn upsilon(x: u32, q: i64) -> i64 {
    if x == 0 {
        q - 1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small_primes() {
        assert_eq!(legendre(2, 3), -1);
        assert_eq!(legendre(1, 3), 1);
        assert_eq!(legendre(0, 3), 0);
        let squares: Vec<u32> = (1..7).map(|x| x * x % 7).collect();
        for a in 1..7 {
            assert_eq!(legendre(a, 7) == 1, squares.contains(&a));
        }
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(80), vec![2, 5]);
        assert_eq!(prime_factors(728), vec![2, 7, 13]);
        assert_eq!(prime_factors(624), vec![2, 3, 13]);
        assert_eq!(prime_factors(97), vec![97]);
        assert!(is_prime(13) && !is_prime(15) && !is_prime(1));
    }

    #[test]
    fn inverses() {
        for p in [3u32, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(mul(a, inv(a, p), p), 1);
            }
        }
    }
}
