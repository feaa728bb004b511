//! The code itself: codewords, weights, weight distributions and minimum distance.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::census::{label_orbits, transform_ops};
use crate::error::{Error, Result};
use crate::expsum::{counts_brute, predicted_counts, Transform};
use crate::gf::FieldElem;
use crate::parallel::chunked_fold;
use crate::predicted;
use crate::qform::{FormLabel, KasamiCtx, KasamiParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodewordLabel {
    /// in the subfield F_(p^m)
    pub gamma: FieldElem,
    pub delta: FieldElem,
    pub eps: FieldElem,
}

impl CodewordLabel {
    pub fn new(ctx: &KasamiCtx, gamma: FieldElem, delta: FieldElem, eps: FieldElem) -> Result<CodewordLabel> {
        let form = ctx.label(gamma, delta)?;
        ctx.field.check(eps)?;
        Ok(CodewordLabel::from_form(form, eps))
    }

    pub fn from_form(form: FormLabel, eps: FieldElem) -> CodewordLabel {
        CodewordLabel {
            gamma: form.gamma,
            delta: form.delta,
            eps,
        }
    }

    pub fn form(&self) -> FormLabel {
        FormLabel {
            gamma: self.gamma,
            delta: self.delta,
        }
    }

    /// Codeword number `index` of p^(5m): form label index times p^n plus the element index of eps.
    pub fn at(ctx: &KasamiCtx, index: u64) -> CodewordLabel {
        let q = ctx.q() as u64;
        CodewordLabel::from_form(ctx.label_at(index / q), ctx.field.element((index % q) as u32))
    }
}

/// Hamming weight p^n - N(0); closed form when the label is nonzero and
/// the parameters strict, direct count otherwise.
pub fn weight(ctx: &KasamiCtx, label: &CodewordLabel) -> u64 {
    let form = label.form();
    let counts = if ctx.params.strict && form != ctx.zero_label() {
        predicted_counts(ctx, &form, label.eps).expect("nonzero label")
    } else {
        counts_brute(ctx, &form, label.eps)
    };
    ctx.q() as u64 - counts.counts[0]
}

/// Pi(x) + Tr(eps x) at x = alpha^t, t = 0..p^n - 2, from field arithmetic.
pub fn materialize_codeword(ctx: &KasamiCtx, label: &CodewordLabel) -> Vec<u8> {
    let f = &ctx.field;
    let form = label.form();
    let p = ctx.p();
    (0..f.group_order())
        .map(|t| {
            let x = f.alpha_pow(t as i64);
            let v = ctx.eval_form(&form, x) + f.abs_trace(f.mul(label.eps, x));
            (v % p) as u8
        })
        .collect()
}

pub fn hamming_weight(word: &[u8]) -> u64 {
    word.iter().filter(|&&s| s != 0).count() as u64
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightDistribution {
    pub entries: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn min_nonzero(&self) -> Option<u64> {
        self.entries.keys().copied().find(|&w| w > 0)
    }

    pub fn nonzero_weights(&self) -> usize {
        self.entries.keys().filter(|&&w| w > 0).count()
    }

    pub fn get(&self, w: u64) -> BigUint {
        self.entries.get(&w).cloned().unwrap_or_default()
    }

    fn from_tally(tally: Vec<u64>) -> WeightDistribution {
        WeightDistribution {
            entries: tally
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c > 0)
                .map(|(w, c)| (w as u64, BigUint::from(c)))
                .collect(),
        }
    }

    pub fn from_predicted(map: &BTreeMap<u64, BigInt>) -> WeightDistribution {
        WeightDistribution {
            entries: map
                .iter()
                .map(|(&w, c)| (w, c.to_biguint().expect("nonnegative multiplicity")))
                .collect(),
        }
    }

    /// Weight/count pairs where `self` and `other` disagree, as (weight, ours, theirs).
    pub fn diff(&self, other: &WeightDistribution) -> Vec<(u64, BigUint, BigUint)> {
        let keys: std::collections::BTreeSet<u64> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.into_iter()
            .filter_map(|w| {
                let (a, b) = (self.get(w), other.get(w));
                (a != b).then_some((w, a, b))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,count\n");
        for (w, c) in &self.entries {
            s.push_str(&format!("{w},{c}\n"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// every form label
    #[default]
    Full,
    /// one label per orbit of the scaling action, weighted by orbit size
    Orbits,
}

fn add_tally(acc: &mut Vec<u64>, part: Vec<u64>) {
    if acc.is_empty() {
        *acc = part;
    } else {
        for (a, b) in acc.iter_mut().zip(part) {
            *a += b;
        }
    }
}

/// Weight distribution from the all-eps transform of every form label.
pub fn weight_distribution_fast(ctx: &KasamiCtx, workers: usize, strategy: Strategy, budget: &Budget) -> Result<WeightDistribution> {
    let params = &ctx.params;
    let q = ctx.q() as usize;
    let p = ctx.p() as usize;
    let tally_label = |tr: &mut Transform, t: &mut Vec<u64>, label: &FormLabel, mult: u64| {
        let table = tr.run(ctx, label);
        for u in 0..q {
            t[q - table[u * p] as usize] += mult;
        }
    };
    let tally = match strategy {
        Strategy::Full => {
            budget.check_ops("weight census", params.label_count() as u128 * transform_ops(params))?;
            chunked_fold(
                params.label_count(),
                workers,
                |range| {
                    let mut tr = Transform::new(ctx);
                    let mut t = vec![0u64; q + 1];
                    for idx in range {
                        tally_label(&mut tr, &mut t, &ctx.label_at(idx), 1);
                    }
                    t
                },
                add_tally,
            )
        }
        Strategy::Orbits => {
            budget.check_ops("label orbit scan", params.label_count() as u128 * params.n as u128)?;
            let orbits = label_orbits(ctx);
            budget.check_ops("weight census", orbits.len() as u128 * transform_ops(params))?;
            chunked_fold(
                orbits.len() as u64,
                workers,
                |range| {
                    let mut tr = Transform::new(ctx);
                    let mut t = vec![0u64; q + 1];
                    for i in range {
                        let (idx, size) = orbits[i as usize];
                        tally_label(&mut tr, &mut t, &ctx.label_at(idx), size);
                    }
                    t
                },
                add_tally,
            )
        }
    };
    Ok(WeightDistribution::from_tally(tally))
}

/// Weight distribution by materializing every codeword.
pub fn weight_distribution_brute(ctx: &KasamiCtx, workers: usize, budget: &Budget) -> Result<WeightDistribution> {
    let params = &ctx.params;
    let q = ctx.q() as usize;
    let total = params.label_count() as u128 * q as u128;
    budget.check_codewords(total)?;
    let f = &ctx.field;
    let p = ctx.p() as u8;
    let ord = f.group_order() as usize;
    // Tr(eps alpha^t) for every eps (element order) and t
    let traces: Vec<u8> = f
        .elements()
        .flat_map(|e| (0..ord).map(move |t| f.abs_trace(f.mul(e, f.alpha_pow(t as i64))) as u8))
        .collect();
    let tally = chunked_fold(
        params.label_count(),
        workers,
        |range| {
            let mut t = vec![0u64; q + 1];
            for idx in range {
                let form = materialize_codeword(ctx, &CodewordLabel::from_form(ctx.label_at(idx), f.zero()));
                for e in 0..q {
                    let tr = &traces[e * ord..(e + 1) * ord];
                    let w = form
                        .iter()
                        .zip(tr)
                        .filter(|(&a, &b)| {
                            let s = a + b;
                            s != 0 && s != p
                        })
                        .count();
                    t[w] += 1;
                }
            }
            t
        },
        add_tally,
    );
    Ok(WeightDistribution::from_tally(tally))
}

/// The predicted table with coincident weights merged.
pub fn weight_table(params: &KasamiParams) -> Result<WeightDistribution> {
    Ok(WeightDistribution::from_predicted(&predicted::weight_distribution(params)?))
}

/// Minimum nonzero weight via the fast census.
pub fn min_distance(ctx: &KasamiCtx, workers: usize, strategy: Strategy, allow_non_strict: bool, budget: &Budget) -> Result<u64> {
    if !allow_non_strict {
        ctx.params.require_strict()?;
    }
    let wd = weight_distribution_fast(ctx, workers, strategy, budget)?;
    wd.min_nonzero().ok_or_else(|| Error::Params("code has no nonzero codeword".into()))
}

/// JSON form of a weight distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightExport {
    pub params: KasamiParams,
    pub distribution: Vec<WeightEntry>,
    pub matches_table1: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub weight: u64,
    pub count: String,
}

impl WeightExport {
    pub fn new(params: &KasamiParams, wd: &WeightDistribution) -> WeightExport {
        let matches = weight_table(params).map(|t| t == *wd).unwrap_or(false);
        WeightExport {
            params: *params,
            distribution: wd
                .entries
                .iter()
                .map(|(&weight, c)| WeightEntry {
                    weight,
                    count: c.to_string(),
                })
                .collect(),
            matches_table1: matches,
        }
    }

    pub fn to_distribution(&self) -> Result<WeightDistribution> {
        let mut entries = BTreeMap::new();
        for e in &self.distribution {
            let c: BigUint = e.count.parse().map_err(|_| Error::Params(format!("bad count {:?}", e.count)))?;
            entries.insert(e.weight, c);
        }
        Ok(WeightDistribution { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u32, m: u32, k: u32) -> KasamiCtx {
        KasamiCtx::new(KasamiParams::new(p, m, k).unwrap()).unwrap()
    }

    fn random_label(c: &KasamiCtx, rng: &mut ChaCha8Rng) -> CodewordLabel {
        let idx = rng.gen_range(0..c.params.label_count() * c.q() as u64);
        CodewordLabel::at(c, idx)
    }

    #[test]
    fn trivial_weights() {
        let c = ctx(3, 2, 1);
        let f = &c.field;
        let zero = CodewordLabel::new(&c, f.zero(), f.zero(), f.zero()).unwrap();
        assert_eq!(weight(&c, &zero), 0);
        assert!(materialize_codeword(&c, &zero).iter().all(|&s| s == 0));
        let l = CodewordLabel::new(&c, f.zero(), f.zero(), f.alpha()).unwrap();
        assert_eq!(weight(&c, &l), 54);
    }

    #[test]
    fn materialized_weight_and_linearity() {
        let c = ctx(3, 2, 1);
        let f = &c.field;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_label(&c, &mut rng);
            let b = random_label(&c, &mut rng);
            let wa = materialize_codeword(&c, &a);
            assert_eq!(hamming_weight(&wa), weight(&c, &a));
            let sum = CodewordLabel {
                gamma: f.add(a.gamma, b.gamma),
                delta: f.add(a.delta, b.delta),
                eps: f.add(a.eps, b.eps),
            };
            let wb = materialize_codeword(&c, &b);
            let ws = materialize_codeword(&c, &sum);
            for t in 0..wa.len() {
                assert_eq!(ws[t], (wa[t] + wb[t]) % 3);
            }
        }
    }

    #[test]
    fn cyclic_shift_transports_label() {
        let c = ctx(3, 2, 1);
        let f = &c.field;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let l = random_label(&c, &mut rng);
            let w = materialize_codeword(&c, &l);
            let moved = c.act(&l.form(), f.alpha());
            let shifted = CodewordLabel::from_form(moved, f.mul(l.eps, f.alpha()));
            let ws = materialize_codeword(&c, &shifted);
            for t in 0..w.len() {
                assert_eq!(ws[t], w[(t + 1) % w.len()]);
            }
        }
    }

    #[test]
    fn weight_distribution_small() {
        let c = ctx(3, 2, 1);
        let b = Budget::default();
        let fast = weight_distribution_fast(&c, 1, Strategy::Full, &b).unwrap();
        assert_eq!(fast.total(), BigUint::from(59049u32));
        assert_eq!(fast.get(0), BigUint::from(1u32));
        assert_eq!(fast.get(54), BigUint::from(16640u32));
        assert_eq!(fast.get(48), BigUint::from(9900u32));
        assert_eq!(fast, weight_table(&c.params).unwrap());
        assert_eq!(weight_distribution_fast(&c, 1, Strategy::Orbits, &b).unwrap(), fast);
        assert_eq!(weight_distribution_fast(&c, 3, Strategy::Full, &b).unwrap(), fast);
        assert_eq!(fast.min_nonzero(), Some(45));
    }

    #[test]
    fn budget_refuses_brute() {
        let c = ctx(3, 2, 1);
        let b = Budget {
            max_brute_codewords: 1000,
            ..Budget::default()
        };
        assert!(matches!(weight_distribution_brute(&c, 1, &b), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn min_distance_requires_flag_when_non_strict() {
        let c = ctx(3, 3, 1);
        assert!(matches!(
            min_distance(&c, 1, Strategy::Orbits, false, &Budget::default()),
            Err(Error::NonStrict { .. })
        ));
    }

    #[test]
    fn export_roundtrip() {
        let c = ctx(3, 2, 1);
        let wd = weight_table(&c.params).unwrap();
        let ex = WeightExport::new(&c.params, &wd);
        assert!(ex.matches_table1);
        let back: WeightExport = serde_json::from_str(&serde_json::to_string(&ex).unwrap()).unwrap();
        assert_eq!(back.to_distribution().unwrap(), wd);
    }
}
