//! Exhaustive distributions over label space: ranks with discriminant
//! classes, power sums of S(gamma, delta, 0), and the full S distribution.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::expsum::{CountVector, Transform};
use crate::gf::{FieldElem, ZERO_LOG};
use crate::parallel::chunked_fold;
use crate::qform::{diagonalize_symmetric, FormLabel, KasamiCtx, KasamiParams};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankCensus {
    pub by_rank: BTreeMap<u32, BigUint>,
    /// (rank, disc_class) -> count
    pub by_class: BTreeMap<(u32, i8), BigUint>,
}

impl RankCensus {
    pub fn total(&self) -> BigUint {
        self.by_rank.values().sum()
    }
}

/// Rank and discriminant class of every label except (0, 0).
///
/// Rank comes from the radical; the class from a congruence diagonalization,
/// whose rank is cross-checked against the radical.
pub fn rank_census(ctx: &KasamiCtx, workers: usize) -> RankCensus {
    let n = ctx.n();
    let tally = chunked_fold(
        ctx.params.label_count(),
        workers,
        |range| {
            let mut t: BTreeMap<(u32, i8), u64> = BTreeMap::new();
            for idx in range {
                if idx == 0 {
                    continue;
                }
                let label = ctx.label_at(idx);
                let rank = n - ctx.radical(&label).expect("nonzero label").len() as u32;
                let form = diagonalize_symmetric(&ctx.gram_matrix(&label), ctx.p());
                assert_eq!(form.rank as u32, rank, "diagonal rank disagrees with radical");
                *t.entry((rank, form.disc_class)).or_default() += 1;
            }
            t
        },
        |acc, part| {
            for (k, v) in part {
                *acc.entry(k).or_default() += v;
            }
        },
    );
    let mut out = RankCensus::default();
    for ((r, j), c) in tally {
        *out.by_rank.entry(r).or_default() += c;
        out.by_class.insert((r, j), BigUint::from(c));
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectrumCensus {
    pub entries: BTreeMap<CycInt, BigUint>,
}

impl SpectrumCensus {
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn get(&self, key: &CycInt) -> BigUint {
        self.entries.get(key).cloned().unwrap_or_default()
    }

    fn from_tally(tally: HashMap<Vec<u32>, u64>) -> SpectrumCensus {
        let mut entries: BTreeMap<CycInt, BigUint> = BTreeMap::new();
        for (counts, c) in tally {
            let cv: Vec<u64> = counts.iter().map(|&x| x as u64).collect();
            *entries.entry(CycInt::from_counts(&cv)).or_default() += c;
        }
        SpectrumCensus { entries }
    }

    /// Compares against a predicted map, ignoring zero entries.
    pub fn matches(&self, predicted: &BTreeMap<CycInt, BigInt>) -> bool {
        let ours: BTreeMap<&CycInt, BigInt> = self.entries.iter().map(|(k, v)| (k, BigInt::from(v.clone()))).collect();
        let theirs: BTreeMap<&CycInt, BigInt> = predicted.iter().filter(|(_, v)| **v != BigInt::ZERO).map(|(k, v)| (k, v.clone())).collect();
        ours == theirs
    }
}

fn merge_tally(acc: &mut HashMap<Vec<u32>, u64>, part: HashMap<Vec<u32>, u64>) {
    for (k, v) in part {
        *acc.entry(k).or_default() += v;
    }
}

/// Estimated elementary operations of one all-eps transform per label.
pub fn transform_ops(params: &KasamiParams) -> u128 {
    let p = params.p as u128;
    params.n as u128 * params.q() as u128 * p * p
}

/// Distribution of S(gamma, delta, eps) over all triples, via the all-eps transform.
pub fn s_distribution(ctx: &KasamiCtx, workers: usize, budget: &Budget) -> Result<SpectrumCensus> {
    let params = &ctx.params;
    budget.check_ops("S distribution census", params.label_count() as u128 * transform_ops(params))?;
    let p = ctx.p() as usize;
    let q = ctx.q() as usize;
    let tally = chunked_fold(
        params.label_count(),
        workers,
        |range| {
            let mut tr = Transform::new(ctx);
            let mut t: HashMap<Vec<u32>, u64> = HashMap::new();
            for idx in range {
                let table = tr.run(ctx, &ctx.label_at(idx));
                for u in 0..q {
                    *t.entry(table[u * p..(u + 1) * p].to_vec()).or_default() += 1;
                }
            }
            t
        },
        merge_tally,
    );
    Ok(SpectrumCensus::from_tally(tally))
}

/// N(rho) for one label at one eps, from the log-indexed form values.
pub fn counts_at(ctx: &KasamiCtx, values_by_log: &[u8], eps: FieldElem) -> CountVector {
    let p = ctx.p() as usize;
    let ord = ctx.field.group_order() as usize;
    let mut counts = vec![0u64; p];
    counts[0] = 1; // x = 0
    let el = eps.raw_log();
    if el == ZERO_LOG {
        for &v in values_by_log {
            counts[v as usize] += 1;
        }
    } else {
        let tr = ctx.field.trace_table();
        let exp = ctx.field.exp_table();
        let mut idx = el as usize;
        for &v in values_by_log {
            let s = v as usize + tr[exp[idx] as usize] as usize;
            counts[if s >= p { s - p } else { s }] += 1;
            idx += 1;
            if idx == ord {
                idx = 0;
            }
        }
    }
    CountVector { counts }
}

/// Distribution of S(gamma, delta, eps) over all labels for a fixed eps.
pub fn s_slice(ctx: &KasamiCtx, eps: FieldElem, workers: usize) -> SpectrumCensus {
    let ord = ctx.field.group_order() as usize;
    let tally = chunked_fold(
        ctx.params.label_count(),
        workers,
        |range| {
            let mut buf = vec![0u8; ord];
            let mut t: HashMap<Vec<u32>, u64> = HashMap::new();
            for idx in range {
                ctx.form_values_by_log(&ctx.label_at(idx), &mut buf);
                let cv = counts_at(ctx, &buf, eps);
                *t.entry(cv.counts.iter().map(|&c| c as u32).collect()).or_default() += 1;
            }
            t
        },
        merge_tally,
    );
    SpectrumCensus::from_tally(tally)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSums {
    pub s1: CycInt,
    pub s2: CycInt,
    pub s3: CycInt,
}

impl PowerSums {
    /// The three sums as rational integers, if they are.
    pub fn as_integers(&self) -> Option<[BigInt; 3]> {
        Some([
            self.s1.as_integer()?.clone(),
            self.s2.as_integer()?.clone(),
            self.s3.as_integer()?.clone(),
        ])
    }
}

pub fn power_sums_from_slice(slice: &SpectrumCensus, p: u32) -> PowerSums {
    let mut sums = [CycInt::zero(p), CycInt::zero(p), CycInt::zero(p)];
    for (s, c) in &slice.entries {
        let c = BigInt::from(c.clone());
        let mut pow = s.clone();
        for acc in sums.iter_mut() {
            *acc = &*acc + &pow.scale(&c);
            pow = &pow * s;
        }
    }
    let [s1, s2, s3] = sums;
    PowerSums { s1, s2, s3 }
}

/// Sums of S(gamma, delta, 0)^j over all labels, (0, 0) included.
pub fn power_sums(ctx: &KasamiCtx, workers: usize) -> PowerSums {
    power_sums_from_slice(&s_slice(ctx, ctx.field.zero(), workers), ctx.p())
}

/// x^(p^m+1) and x^(p^k+1) for every element, in element order.
fn power_tables(ctx: &KasamiCtx) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let f = &ctx.field;
    let em = crate::fp::ipow(ctx.p() as u64, ctx.params.m) + 1;
    let ek = crate::fp::ipow(ctx.p() as u64, ctx.params.k) + 1;
    f.elements().map(|x| (f.pow(x, em), f.pow(x, ek))).unzip()
}

/// Exhaustive count of (x, y) with x^(p^m+1) + y^(p^m+1) = 0 = x^(p^k+1) + y^(p^k+1).
pub fn count_t2(ctx: &KasamiCtx) -> u64 {
    let f = &ctx.field;
    let (a, b) = power_tables(ctx);
    let mut count = 0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if f.add(a[i], a[j]).is_zero() && f.add(b[i], b[j]).is_zero() {
                count += 1;
            }
        }
    }
    count
}

/// Count of (x, y, z) with x^e + y^e + z^e = 0 for e = p^m+1 and p^k+1.
///
/// Solutions with a zero coordinate reduce to the pair system; the rest
/// scale to z = 1, so only pairs are scanned.
pub fn count_t3(ctx: &KasamiCtx) -> u64 {
    let f = &ctx.field;
    let (a, b) = power_tables(ctx);
    let one = f.one();
    let mut pairs_zero = 0u64;
    let mut pairs_one = 0u64;
    for i in 1..a.len() {
        for j in 1..a.len() {
            let (sa, sb) = (f.add(a[i], a[j]), f.add(b[i], b[j]));
            if sa.is_zero() && sb.is_zero() {
                pairs_zero += 1;
            }
            if f.add(sa, one).is_zero() && f.add(sb, one).is_zero() {
                pairs_one += 1;
            }
        }
    }
    1 + 3 * pairs_zero + (f.group_order() as u64) * pairs_one
}

/// Direct scan over all triples; only for small fields.
pub fn count_t3_exhaustive(ctx: &KasamiCtx, budget: &Budget) -> Result<u64> {
    let q = ctx.q() as u128;
    budget.check_ops("triple scan", q * q * q)?;
    let f = &ctx.field;
    let (a, b) = power_tables(ctx);
    let mut count = 0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            let (sa, sb) = (f.add(a[i], a[j]), f.add(b[i], b[j]));
            for l in 0..a.len() {
                if f.add(sa, a[l]).is_zero() && f.add(sb, b[l]).is_zero() {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Orbits of labels under c: (gamma, delta) -> (gamma c^(p^m+1), delta c^(p^k+1)),
/// as (smallest label index, orbit size). S values of a label's eps-slice are
/// permuted within an orbit, so every eps-independent statistic is constant on it.
pub fn label_orbits(ctx: &KasamiCtx) -> Vec<(u64, u64)> {
    let total = ctx.params.label_count();
    let mut seen = vec![false; total as usize];
    let alpha = ctx.field.alpha();
    let mut out = Vec::new();
    for idx in 0..total {
        if seen[idx as usize] {
            continue;
        }
        let start = ctx.label_at(idx);
        let mut cur = start;
        let mut size = 0;
        loop {
            let ci = ctx.label_index(&cur);
            if seen[ci as usize] {
                break;
            }
            seen[ci as usize] = true;
            size += 1;
            cur = ctx.act(&cur, alpha);
        }
        out.push((idx, size));
    }
    out
}

/// Machine-readable census file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusExport {
    pub params: KasamiParams,
    pub kind: String,
    pub entries: Vec<CensusEntry>,
    pub verified_against: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub key: Value,
    pub count: String,
}

impl CensusExport {
    pub fn rank(params: &KasamiParams, census: &RankCensus, verified: bool) -> CensusExport {
        CensusExport {
            params: *params,
            kind: "rank".into(),
            entries: census
                .by_class
                .iter()
                .map(|(&(rank, j), c)| CensusEntry {
                    key: json!({"rank": rank, "disc_class": j}),
                    count: c.to_string(),
                })
                .collect(),
            verified_against: if verified { "Table2" } else { "none" }.into(),
        }
    }

    pub fn spectrum(params: &KasamiParams, census: &SpectrumCensus, verified: bool) -> CensusExport {
        Self::cycint(params, "spectrum", &census.entries, if verified { "Table3" } else { "none" })
    }

    /// Any distribution keyed by cyclotomic integers.
    pub fn cycint(params: &KasamiParams, kind: &str, entries: &BTreeMap<CycInt, BigUint>, verified_against: &str) -> CensusExport {
        CensusExport {
            params: *params,
            kind: kind.into(),
            entries: entries
                .iter()
                .map(|(k, c)| CensusEntry {
                    key: serde_json::to_value(k).expect("serializable"),
                    count: c.to_string(),
                })
                .collect(),
            verified_against: verified_against.into(),
        }
    }

    /// `key,count` lines; cyclotomic keys as `c0;c1;...`, rank keys as `rank,disc_class`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.kind == "rank" {
            out.push_str("rank,disc_class,count\n");
            for e in &self.entries {
                out.push_str(&format!("{},{},{}\n", e.key["rank"], e.key["disc_class"], e.count));
            }
        } else if self.kind == "power" {
            out.push_str("power,sum\n");
            for e in &self.entries {
                out.push_str(&format!("{},{}\n", e.key["power"], e.count));
            }
        } else {
            out.push_str("key,count\n");
            for e in &self.entries {
                let key = serde_json::from_value::<CycInt>(e.key.clone()).map(|c| c.to_csv()).unwrap_or_default();
                out.push_str(&format!("{key},{}\n", e.count));
            }
        }
        out
    }

    pub fn power(params: &KasamiParams, sums: &PowerSums, verified: bool) -> CensusExport {
        let entries = [(1, &sums.s1), (2, &sums.s2), (3, &sums.s3)]
            .into_iter()
            .map(|(j, s)| CensusEntry {
                key: json!({"power": j}),
                count: s.as_integer().map(|v| v.to_string()).unwrap_or_else(|| s.to_csv()),
            })
            .collect();
        CensusExport {
            params: *params,
            kind: "power".into(),
            entries,
            verified_against: if verified { "Prop4" } else { "none" }.into(),
        }
    }

    /// Rebuilds a cyclotomic-keyed distribution from the exported entries.
    pub fn to_spectrum(&self) -> Result<SpectrumCensus> {
        let mut entries = BTreeMap::new();
        for e in &self.entries {
            let key: CycInt = serde_json::from_value(e.key.clone())?;
            let count: BigUint = e
                .count
                .parse()
                .map_err(|_| Error::Params(format!("bad count {:?}", e.count)))?;
            entries.insert(key, count);
        }
        Ok(SpectrumCensus { entries })
    }

    pub fn to_rank(&self) -> Result<RankCensus> {
        let mut out = RankCensus::default();
        for e in &self.entries {
            let rank = e.key["rank"].as_u64().ok_or_else(|| Error::Params("missing rank".into()))? as u32;
            let j = e.key["disc_class"].as_i64().ok_or_else(|| Error::Params("missing disc_class".into()))? as i8;
            let count: BigUint = e
                .count
                .parse()
                .map_err(|_| Error::Params(format!("bad count {:?}", e.count)))?;
            *out.by_rank.entry(rank).or_default() += &count;
            out.by_class.insert((rank, j), count);
        }
        Ok(out)
    }
}

/// Labels in enumeration order; convenience for callers iterating by hand.
pub fn labels(ctx: &KasamiCtx) -> impl Iterator<Item = FormLabel> + '_ {
    (0..ctx.params.label_count()).map(move |i| ctx.label_at(i))
}
