//! Closed-form distributions evaluated in exact integer arithmetic.
//!
//! Every division must be exact; a remainder means a transcription error
//! in a formula and is reported as [`Error::InexactDivision`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::expsum::gauss_sum;
use crate::fp;
use crate::qform::KasamiParams;

fn div_exact(num: BigInt, den: BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision(format!("{what}: {num} / {den}")))
    }
}

/// Powers of p.
struct P(BigInt);

impl P {
    fn pow(&self, e: u32) -> BigInt {
        self.0.pow(e)
    }
}

/// v(x): p - 1 at zero, -1 elsewhere.
fn v(rho: u32, p: u32) -> BigInt {
    BigInt::from(fp::upsilon(rho, p as i64))
}

/// eta(-rho) over F_p.
fn eta_neg(rho: u32, p: u32) -> BigInt {
    BigInt::from(fp::legendre(fp::neg(rho, p), p))
}

fn nonneg(map: BTreeMap<CycInt, BigInt>, what: &str) -> Result<BTreeMap<CycInt, BigInt>> {
    if let Some((k, c)) = map.iter().find(|(_, c)| c.is_negative()) {
        return Err(Error::InexactDivision(format!("{what}: negative frequency {c} for {k}")));
    }
    Ok(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// Predicted frequency of each rank over labels (gamma, delta) != (0, 0).
pub fn rank_distribution(params: &KasamiParams) -> Result<BTreeMap<u32, BigInt>> {
    params.require_strict()?;
    let (m, n, d) = (params.m, params.n, params.d);
    let pp = P(BigInt::from(params.p));
    let den = pp.pow(2u32 * d) - 1u32;
    let full = div_exact(
        pp.pow(m + n + 2u32 * d) + pp.pow(n) + pp.pow(m + d) - pp.pow(m + n) - pp.pow(m + n + d) - pp.pow(2u32 * d),
        den.clone(),
        "rank n frequency",
    )?;
    let minus_d = pp.pow(m - d) * (pp.pow(n) - 1u32);
    let minus_2d = div_exact((pp.pow(m - d) - 1u32) * (pp.pow(n) - 1u32), den, "rank n-2d frequency")?;
    Ok(BTreeMap::from([(n, full), (n - d, minus_d), (n - 2 * d, minus_2d)]))
}

/// Predicted |R_(i,j)|: labels of rank n - i with discriminant class j.
pub fn class_distribution(params: &KasamiParams) -> Result<BTreeMap<(u32, i8), BigInt>> {
    params.require_strict()?;
    let (m, n, d) = (params.m, params.n, params.d);
    let pp = P(BigInt::from(params.p));
    let r01 = div_exact(
        pp.pow(d) * (pp.pow(m) + 1u32) * (pp.pow(n) - 1u32),
        2u32 * (pp.pow(d) + 1u32),
        "|R_(0,1)|",
    )?;
    let r0m = div_exact(
        (pp.pow(n + d) - 2u32 * pp.pow(n) + pp.pow(d)) * (pp.pow(m) - 1u32),
        2u32 * (pp.pow(d) - 1u32),
        "|R_(0,-1)|",
    )?;
    let rd = div_exact(pp.pow(m - d) * (pp.pow(n) - 1u32), BigInt::from(2u32), "|R_(d,+-1u32)|")?;
    let r2m = div_exact((pp.pow(m - d) - 1u32) * (pp.pow(n) - 1u32), pp.pow(2u32 * d) - 1u32, "|R_(2d,-1u32)|")?;
    Ok(BTreeMap::from([
        ((n, 1), r01),
        ((n, -1), r0m),
        ((n - d, 1), rd.clone()),
        ((n - d, -1), rd),
        ((n - 2 * d, 1), BigInt::zero()),
        ((n - 2 * d, -1), r2m),
    ]))
}

/// Number of (x, y) with x^(p^m+1) + y^(p^m+1) = 0 = x^(p^k+1) + y^(p^k+1).
pub fn t2(params: &KasamiParams) -> BigInt {
    if params.p % 4 == 3 {
        BigInt::from(1)
    } else {
        2 * BigInt::from(params.p).pow(params.n) - 1
    }
}

/// Number of (x, y, z) with x^e + y^e + z^e = 0 for both exponents.
pub fn t3(params: &KasamiParams) -> BigInt {
    let p = BigInt::from(params.p);
    p.pow(params.n + params.d) + p.pow(params.n) - p.pow(params.d)
}

/// Sums of S(gamma, delta, 0)^j over all labels, j = 1, 2, 3.
pub fn power_sums(params: &KasamiParams) -> Result<[BigInt; 3]> {
    params.require_strict()?;
    let base = BigInt::from(params.p).pow(params.n + params.m);
    Ok([base.clone(), &base * t2(params), &base * t3(params)])
}

/// The ten weight/frequency rows, in table order and unmerged.
pub fn weight_rows(params: &KasamiParams) -> Result<Vec<(BigInt, BigInt)>> {
    params.require_strict()?;
    let (m, n, d) = (params.m, params.n, params.d);
    let pp = P(BigInt::from(params.p));
    let p1 = BigInt::from(params.p - 1);
    let qn = pp.pow(n) - 1u32;
    let base = &p1 * pp.pow(n - 1u32);
    let h = pp.pow((n - 2u32) / 2u32);
    let hd = pp.pow((n + d - 1u32) / 2u32);
    let h2d = pp.pow((n + 2u32 * d - 2u32) / 2u32);
    let big = pp.pow(n + d) - 2u32 * pp.pow(n) + pp.pow(d);
    let two = BigInt::from(2);

    let rows = vec![
        (BigInt::zero(), BigInt::from(1)),
        (
            base.clone(),
            &qn * (1u32 + pp.pow(m + n - d) - pp.pow(m + n - 2u32 * d) + pp.pow(m + n - 2u32 * d - 1u32) + pp.pow(m + n - 3 * d)
                - pp.pow(n - 2u32 * d)),
        ),
        (
            &p1 * (pp.pow(n - 1u32) - &h),
            div_exact(
                pp.pow(d) * (pp.pow(m) + 1u32) * &qn * (pp.pow(n - 1u32) + &p1 * &h),
                &two * (pp.pow(d) + 1u32),
                "weight row 3",
            )?,
        ),
        (
            &p1 * (pp.pow(n - 1u32) + &h),
            div_exact(
                &big * (pp.pow(m) - 1u32) * (pp.pow(n - 1u32) - &p1 * &h),
                &two * (pp.pow(d) - 1u32),
                "weight row 4",
            )?,
        ),
        (
            &base + &h,
            div_exact(
                pp.pow(d) * (pp.pow(m) + 1u32) * &qn * &p1 * (pp.pow(n - 1u32) - &h),
                &two * (pp.pow(d) + 1u32),
                "weight row 5",
            )?,
        ),
        (
            &base - &h,
            div_exact(
                &big * (pp.pow(m) - 1u32) * &p1 * (pp.pow(n - 1u32) + &h),
                &two * (pp.pow(d) - 1u32),
                "weight row 6",
            )?,
        ),
        (
            &base - &hd,
            div_exact(
                pp.pow(m - d) * &qn * &p1 * (pp.pow(n - d - 1u32) + pp.pow((n - d - 1u32) / 2u32)),
                two.clone(),
                "weight row 7",
            )?,
        ),
        (
            &base + &hd,
            div_exact(
                pp.pow(m - d) * &qn * &p1 * (pp.pow(n - d - 1u32) - pp.pow((n - d - 1u32) / 2u32)),
                two.clone(),
                "weight row 8",
            )?,
        ),
        (
            &p1 * (pp.pow(n - 1u32) + &h2d),
            div_exact(
                (pp.pow(m - d) - 1u32) * &qn * (pp.pow(n - 2u32 * d - 1u32) - &p1 * pp.pow((n - 2u32 * d - 2u32) / 2u32)),
                pp.pow(2u32 * d) - 1u32,
                "weight row 9",
            )?,
        ),
        (
            &base - &h2d,
            div_exact(
                (pp.pow(m - d) - 1u32) * &qn * &p1 * (pp.pow(n - 2u32 * d - 1u32) + pp.pow((n - 2u32 * d - 2u32) / 2u32)),
                pp.pow(2u32 * d) - 1u32,
                "weight row 10",
            )?,
        ),
    ];
    Ok(rows)
}

/// Merges rows sharing a weight value and drops zero frequencies.
pub fn merge_weight_rows(rows: &[(BigInt, BigInt)]) -> Result<BTreeMap<u64, BigInt>> {
    let mut out: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (w, c) in rows {
        if c.is_negative() {
            return Err(Error::InexactDivision(format!("negative frequency {c} for weight {w}")));
        }
        let w: u64 = w.try_into().map_err(|_| Error::Params(format!("weight {w} out of range")))?;
        *out.entry(w).or_default() += c;
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

pub fn weight_distribution(params: &KasamiParams) -> Result<BTreeMap<u64, BigInt>> {
    merge_weight_rows(&weight_rows(params)?)
}

/// Weights that the rank analysis rules out: (p-1)(p^(n-1) - p^((n+2d-2)/2))
/// and (p-1)p^(n-1) + p^((n+2d-2)/2).
pub fn excluded_weights(params: &KasamiParams) -> [u64; 2] {
    let p = params.p as u64;
    let (n, d) = (params.n, params.d);
    let h2d = fp::ipow(p, (n + 2 * d - 2) / 2);
    let base = fp::ipow(p, n - 1);
    [(p - 1) * (base - h2d), (p - 1) * base + h2d]
}

/// p^((n+d-1)/2) g, the exact form of p^((n+d)/2) sqrt((-1)^((p-1)/2)).
fn sqrt_value(params: &KasamiParams) -> CycInt {
    let p = params.p;
    let scale = BigInt::from(p).pow((params.n + params.d - 1) / 2);
    gauss_sum(p).scale(&scale)
}

fn add(map: &mut BTreeMap<CycInt, BigInt>, key: CycInt, count: BigInt) {
    *map.entry(key).or_default() += count;
}

/// Predicted distribution of S(gamma, delta, eps) over all triples.
pub fn s_distribution(params: &KasamiParams) -> Result<BTreeMap<CycInt, BigInt>> {
    params.require_strict()?;
    let (p, m, n, d) = (params.p, params.m, params.n, params.d);
    let pp = P(BigInt::from(p));
    let qn = pp.pow(n) - 1u32;
    let big = pp.pow(n + d) - 2u32 * pp.pow(n) + pp.pow(d);
    let two = BigInt::from(2);
    let h = pp.pow((n - 2u32) / 2u32);
    let sq = sqrt_value(params);
    let int = |v: BigInt| CycInt::from_int(p, v);

    let mut out = BTreeMap::new();
    add(&mut out, int(pp.pow(n)), BigInt::from(1u32));
    add(
        &mut out,
        CycInt::zero(p),
        &qn * (1u32 + pp.pow(m + n - d) - pp.pow(m + n - 2u32 * d) + pp.pow(m + n - 3 * d) - pp.pow(n - 2u32 * d)),
    );
    for rho in 0..p {
        let w = |c: &CycInt| c.rotate(rho as i64);
        let vr = v(rho, p);
        add(
            &mut out,
            w(&int(pp.pow(n / 2u32))),
            div_exact(
                pp.pow(d) * (pp.pow(m) + 1u32) * &qn * (pp.pow(n - 1u32) + &vr * &h),
                &two * (pp.pow(d) + 1u32),
                "S row p^(n/2)",
            )?,
        );
        add(
            &mut out,
            w(&int(-pp.pow(n / 2u32))),
            div_exact(
                &big * (pp.pow(m) - 1u32) * (pp.pow(n - 1u32) - &vr * &h),
                &two * (pp.pow(d) - 1u32),
                "S row -p^(n/2)",
            )?,
        );
        let e = eta_neg(rho, p);
        let half = pp.pow((n - d - 1u32) / 2u32);
        add(
            &mut out,
            w(&sq),
            div_exact(pp.pow(m - d) * &qn * (pp.pow(n - d - 1u32) + &e * &half), two.clone(), "S row +sqrt")?,
        );
        add(
            &mut out,
            w(&-&sq),
            div_exact(pp.pow(m - d) * &qn * (pp.pow(n - d - 1u32) - &e * &half), two.clone(), "S row -sqrt")?,
        );
        add(
            &mut out,
            w(&int(-pp.pow(n / 2u32 + d))),
            div_exact(
                (pp.pow(m - d) - 1u32) * &qn * (pp.pow(n - 2u32 * d - 1u32) - &vr * pp.pow((n - 2u32 * d - 2u32) / 2u32)),
                pp.pow(2u32 * d) - 1u32,
                "S row -p^(n/2+d)",
            )?,
        );
    }
    nonneg(out, "S distribution")
}

/// Predicted correlation distribution of the sequence family over ordered
/// pairs and all shifts.
pub fn correlation_distribution(params: &KasamiParams) -> Result<BTreeMap<CycInt, BigInt>> {
    params.require_strict()?;
    let (p, n, d) = (params.p, params.n, params.d);
    let pp = P(BigInt::from(p));
    let h = n / 2;
    let q2 = pp.pow(n) - 2u32;
    let big = pp.pow(n + d) - 2u32 * pp.pow(n) + pp.pow(d);
    let two = BigInt::from(2);
    let one = CycInt::one(p);
    let int = |v: BigInt| CycInt::from_int(p, v);
    let minus1 = |c: CycInt| &c - &one;
    let sq = sqrt_value(params);

    let mut out = BTreeMap::new();
    add(&mut out, int(pp.pow(n) - 1u32), pp.pow(3 * h));
    add(
        &mut out,
        int(BigInt::from(-1)),
        pp.pow(3 * h) * &q2 * (1u32 + pp.pow(3 * h - d) - pp.pow(3 * h - 2u32 * d) + pp.pow(3 * h - 3 * d) - pp.pow(n - 2u32 * d)),
    );
    add(
        &mut out,
        int(pp.pow(h) - 1u32),
        div_exact(
            pp.pow(3 * h + d) * (pp.pow(h) + 1u32) * (&q2 * (pp.pow(n - 1u32) + pp.pow(h) - pp.pow(h - 1u32)) + 1u32),
            &two * (pp.pow(d) + 1u32),
            "correlation row p^(n/2) - 1",
        )?,
    );
    add(
        &mut out,
        int(-pp.pow(h) - 1u32),
        div_exact(
            pp.pow(3 * h) * &big * (&q2 * (pp.pow(n - 1u32) - pp.pow(h) + pp.pow(h - 1u32)) + 1u32),
            &two * (pp.pow(h) + 1u32) * (pp.pow(d) - 1u32),
            "correlation row -p^(n/2) - 1",
        )?,
    );
    let sq_real = div_exact(pp.pow(2u32 * n - d) * (&q2 * pp.pow(n - d - 1u32) + 1u32), two.clone(), "correlation row sqrt")?;
    add(&mut out, minus1(sq.clone()), sq_real.clone());
    add(&mut out, minus1(-&sq), sq_real);
    add(
        &mut out,
        int(-pp.pow(h + d) - 1u32),
        div_exact(
            pp.pow(3 * h) * (pp.pow(h - d) - 1u32) * (&q2 * (pp.pow(n - 2u32 * d - 1u32) - pp.pow(h - d) + pp.pow(h - d - 1u32)) + 1u32),
            pp.pow(2u32 * d) - 1u32,
            "correlation row -p^(n/2+d) - 1",
        )?,
    );
    for rho in 1..p {
        let w = |c: &CycInt| minus1(c.rotate(rho as i64));
        add(
            &mut out,
            w(&int(pp.pow(h))),
            div_exact(
                pp.pow(3 * h + d) * (pp.pow(h) + 1u32) * &q2 * (pp.pow(n - 1u32) - pp.pow(h - 1u32)),
                &two * (pp.pow(d) + 1u32),
                "correlation row p^(n/2) w",
            )?,
        );
        add(
            &mut out,
            w(&int(-pp.pow(h))),
            div_exact(pp.pow(2u32 * n - 1u32) * &big * &q2, &two * (pp.pow(d) - 1u32), "correlation row -p^(n/2u32) w")?,
        );
        let e = eta_neg(rho, p);
        let half = pp.pow((n - d - 1u32) / 2u32);
        add(
            &mut out,
            w(&sq),
            div_exact(pp.pow(2u32 * n - d) * &q2 * (pp.pow(n - d - 1u32) + &e * &half), two.clone(), "correlation row +sqrt w")?,
        );
        add(
            &mut out,
            w(&-&sq),
            div_exact(pp.pow(2u32 * n - d) * &q2 * (pp.pow(n - d - 1u32) - &e * &half), two.clone(), "correlation row -sqrt w")?,
        );
        add(
            &mut out,
            w(&int(-pp.pow(h + d))),
            div_exact(
                pp.pow(3 * h) * (pp.pow(h - d) - 1u32) * &q2 * (pp.pow(n - 2u32 * d - 1u32) + pp.pow(h - d - 1u32)),
                pp.pow(2u32 * d) - 1u32,
                "correlation row -p^(n/2+d) w",
            )?,
        );
    }
    nonneg(out, "correlation distribution")
}

/// p^(n/2+d) + 1
pub fn max_correlation(params: &KasamiParams) -> BigInt {
    BigInt::from(params.p).pow(params.n / 2 + params.d) + 1
}

/// Minimum distance claims: (p-1)p^(n-1) - p^(n/2) for strict d = 1 and
/// (p-1)p^(n-1) - p^(n/2+1) for p = 3 with (m, k) in {(3, 1), (4, 2)}.
pub fn min_distance(params: &KasamiParams) -> Option<u64> {
    let p = params.p as u64;
    let n = params.n;
    let base = (p - 1) * fp::ipow(p, n - 1);
    if params.strict && params.d == 1 {
        Some(base - fp::ipow(p, n / 2))
    } else if params.p == 3 && matches!((params.m, params.k), (3, 1) | (4, 2)) {
        Some(base - fp::ipow(p, n / 2 + 1))
    } else {
        None
    }
}
