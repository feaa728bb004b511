//! Exponential sums S(gamma, delta, eps) = sum over x of w^(Pi(x) + Tr(eps x)).
//!
//! Three independent routes: direct counting, a p-ary butterfly over the
//! additive group that yields every eps at once, and the closed form read
//! off a diagonalization.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::fp;
use crate::gf::FieldElem;
use crate::linalg::Matrix;
use crate::qform::{diagonalize_symmetric, DiagonalizedForm, FormLabel, KasamiCtx};

/// g = sum over k in F_p^* of eta(k) w^k.
pub fn gauss_sum(p: u32) -> CycInt {
    let coeffs: Vec<i64> = (0..p).map(|k| fp::legendre(k, p) as i64).collect();
    CycInt::from_i64s(&coeffs)
}

/// N(rho) = #{x : Pi(x) + Tr(eps x) = rho} for rho in F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountVector {
    pub counts: Vec<u64>,
}

impl CountVector {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// S = sum of N(rho) w^rho
    pub fn to_cycint(&self) -> CycInt {
        CycInt::from_counts(&self.counts)
    }
}

pub fn counts_brute(ctx: &KasamiCtx, label: &FormLabel, eps: FieldElem) -> CountVector {
    let f = &ctx.field;
    let p = ctx.p();
    let mut counts = vec![0u64; p as usize];
    for x in f.elements() {
        let v = fp::add(ctx.eval_form(label, x), f.abs_trace(f.mul(eps, x)), p);
        counts[v as usize] += 1;
    }
    CountVector { counts }
}

pub fn s_brute(ctx: &KasamiCtx, label: &FormLabel, eps: FieldElem) -> CycInt {
    counts_brute(ctx, label, eps).to_cycint()
}

/// Reusable scratch space for the all-eps transform.
pub struct Transform {
    p: usize,
    n: usize,
    q: usize,
    table: Vec<u32>,
    block_in: Vec<u32>,
    block_out: Vec<u32>,
    by_log: Vec<u8>,
    by_vec: Vec<u8>,
}

impl Transform {
    pub fn new(ctx: &KasamiCtx) -> Transform {
        let (p, n, q) = (ctx.p() as usize, ctx.n() as usize, ctx.q() as usize);
        Transform {
            p,
            n,
            q,
            table: vec![0; q * p],
            block_in: vec![0; p * p],
            block_out: vec![0; p * p],
            by_log: vec![0; q - 1],
            by_vec: vec![0; q],
        }
    }

    /// Counts for every character at once. Entry `u * p + rho` of the result
    /// is #{x : Pi(x) + sum_j u_j x_j = rho}, with x_j the coordinates of x
    /// and u written base p; use [`KasamiCtx::eps_to_u`] to index by eps.
    pub fn run(&mut self, ctx: &KasamiCtx, label: &FormLabel) -> &[u32] {
        ctx.form_values_by_vector(label, &mut self.by_log, &mut self.by_vec);
        self.run_values()
    }

    /// Transform of the values currently held in `by_vec`.
    fn run_values(&mut self) -> &[u32] {
        let p = self.p;
        self.table.fill(0);
        for (v, &f) in self.by_vec.iter().enumerate() {
            self.table[v * p + f as usize] = 1;
        }
        let mut stride = 1;
        for _ in 0..self.n {
            let span = stride * p;
            for hi in (0..self.q).step_by(span) {
                for lo in 0..stride {
                    let base = hi + lo;
                    for a in 0..p {
                        let src = (base + a * stride) * p;
                        self.block_in[a * p..(a + 1) * p].copy_from_slice(&self.table[src..src + p]);
                    }
                    self.block_out.fill(0);
                    for u in 0..p {
                        let out = &mut self.block_out[u * p..(u + 1) * p];
                        for a in 0..p {
                            let shift = (u * a) % p;
                            let inp = &self.block_in[a * p..(a + 1) * p];
                            for rho in 0..p {
                                let t = rho + shift;
                                out[if t >= p { t - p } else { t }] += inp[rho];
                            }
                        }
                    }
                    for u in 0..p {
                        let dst = (base + u * stride) * p;
                        self.table[dst..dst + p].copy_from_slice(&self.block_out[u * p..(u + 1) * p]);
                    }
                }
            }
            stride = span;
        }
        &self.table
    }
}

/// Counts for every eps, indexed by the vector index of eps.
pub fn counts_all_eps(ctx: &KasamiCtx, label: &FormLabel) -> Vec<CountVector> {
    let p = ctx.p() as usize;
    let mut tr = Transform::new(ctx);
    let table = tr.run(ctx, label);
    ctx.eps_to_u()
        .iter()
        .map(|&u| CountVector {
            counts: table[u as usize * p..(u as usize + 1) * p].iter().map(|&c| c as u64).collect(),
        })
        .collect()
}

/// Per-label data for evaluating the closed form at any eps.
#[derive(Clone, Debug)]
pub struct ClosedFormPlan {
    pub label: FormLabel,
    pub form: DiagonalizedForm,
    pub radical: Vec<FieldElem>,
    /// C B, so that b = Lambda^T (C B)
    cb: Matrix,
}

impl ClosedFormPlan {
    pub fn new(ctx: &KasamiCtx, label: &FormLabel) -> Result<ClosedFormPlan> {
        let radical = ctx.radical(label)?;
        let form = diagonalize_symmetric(&ctx.gram_matrix(label), ctx.p());
        debug_assert_eq!(form.rank + radical.len(), ctx.n() as usize);
        let cb = ctx.trace_form_matrix().mul(&form.basis_change, ctx.p());
        Ok(ClosedFormPlan {
            label: *label,
            form,
            radical,
            cb,
        })
    }

    pub fn rank(&self) -> usize {
        self.form.rank
    }

    /// Whether x -> Tr(eps x) vanishes on the radical.
    pub fn linear_part_vanishes(&self, ctx: &KasamiCtx, eps: FieldElem) -> bool {
        let f = &ctx.field;
        self.radical.iter().all(|&z| f.abs_trace(f.mul(eps, z)) == 0)
    }

    pub fn linear_coefficients(&self, ctx: &KasamiCtx, eps: FieldElem) -> Vec<u32> {
        let lam = Matrix {
            rows: 1,
            cols: ctx.n() as usize,
            data: ctx.field.coeffs(eps),
        };
        lam.mul(&self.cb, ctx.p()).data
    }

    /// lambda = sum of b_i^2 / (4 a_i) over nonzero a_i, or `None` when the
    /// linear part does not vanish on the radical (then S = 0).
    pub fn lambda(&self, ctx: &KasamiCtx, eps: FieldElem) -> Option<u32> {
        if !self.linear_part_vanishes(ctx, eps) {
            return None;
        }
        let p = ctx.p();
        let b = self.linear_coefficients(ctx, eps);
        Some((0..self.form.rank).fold(0, |acc, i| {
            let a4 = fp::mul(4, self.form.diag[i], p);
            fp::add(acc, fp::mul(fp::mul(b[i], b[i], p), fp::inv(a4, p), p), p)
        }))
    }

    fn prod_diag(&self, p: u32) -> u32 {
        self.form.diag[..self.form.rank].iter().fold(1, |acc, &a| fp::mul(acc, a, p))
    }

    /// S by rank case: eta p^(n/2) w^-lambda, eta p^((n+d-1)/2) g w^-lambda,
    /// eta p^(n/2+d) w^-lambda. Falls back to [`Self::s_generic`] for ranks
    /// outside {n, n-d, n-2d} or non-strict parameters.
    pub fn s(&self, ctx: &KasamiCtx, eps: FieldElem) -> CycInt {
        let params = &ctx.params;
        let p = params.p;
        let Some(lambda) = self.lambda(ctx, eps) else {
            return CycInt::zero(p);
        };
        let (n, d, r) = (params.n, params.d, self.form.rank as u32);
        let eta = BigInt::from(self.form.disc_class);
        let pp = |e: u32| BigInt::from(p).pow(e);
        let rot = -(lambda as i64);
        if !params.strict {
            return self.s_generic(ctx, eps);
        }
        if r == n {
            CycInt::from_int(p, eta * pp(n / 2)).rotate(rot)
        } else if r == n - d {
            (&CycInt::from_int(p, eta * pp((n + d - 1) / 2)) * &gauss_sum(p)).rotate(rot)
        } else if r + 2 * d == n {
            CycInt::from_int(p, eta * pp(n / 2 + d)).rotate(rot)
        } else {
            self.s_generic(ctx, eps)
        }
    }

    /// Rank-generic evaluation: p^(n-r) eta(prod a) g^r w^-lambda.
    pub fn s_generic(&self, ctx: &KasamiCtx, eps: FieldElem) -> CycInt {
        let p = ctx.p();
        let Some(lambda) = self.lambda(ctx, eps) else {
            return CycInt::zero(p);
        };
        let (n, r) = (ctx.n(), self.form.rank as u32);
        let eta = fp::legendre(self.prod_diag(p), p);
        let eta_m1 = fp::legendre(p - 1, p) as i64;
        // g^2 = eta(-1) p
        let half = BigInt::from(eta_m1 * p as i64).pow(r / 2);
        let base = CycInt::from_int(p, BigInt::from(p).pow(n - r) * eta * half);
        let base = if r % 2 == 1 { &base * &gauss_sum(p) } else { base };
        base.rotate(-(lambda as i64))
    }

    /// Solution counts from the diagonal form: uniform p^(n-1) when the
    /// linear part survives on the radical, otherwise the nondegenerate
    /// quadratic form counts in rank r scaled by p^(n-r).
    pub fn counts(&self, ctx: &KasamiCtx, eps: FieldElem) -> CountVector {
        let p = ctx.p();
        let n = ctx.n();
        let pu = p as i128;
        let Some(lambda) = self.lambda(ctx, eps) else {
            return CountVector {
                counts: vec![pu.pow(n - 1) as u64; p as usize],
            };
        };
        let r = self.form.rank as u32;
        let scale = pu.pow(n - r);
        let disc = self.form.disc_class as i128;
        let counts = (0..p)
            .map(|rho| {
                let t = fp::add(rho, lambda, p);
                let inner = if r == 0 {
                    if t == 0 {
                        1
                    } else {
                        0
                    }
                } else if r % 2 == 0 {
                    let v = if t == 0 { pu - 1 } else { -1 };
                    pu.pow(r - 1) + v * pu.pow((r - 2) / 2) * disc
                } else {
                    pu.pow(r - 1) + pu.pow((r - 1) / 2) * fp::legendre(t, p) as i128 * disc
                };
                (scale * inner) as u64
            })
            .collect();
        CountVector { counts }
    }
}

pub fn s_closed_form(ctx: &KasamiCtx, label: &FormLabel, eps: FieldElem) -> Result<CycInt> {
    Ok(ClosedFormPlan::new(ctx, label)?.s(ctx, eps))
}

pub fn predicted_counts(ctx: &KasamiCtx, label: &FormLabel, eps: FieldElem) -> Result<CountVector> {
    Ok(ClosedFormPlan::new(ctx, label)?.counts(ctx, eps))
}

/// The label (gamma eps^-(p^m+1), delta eps^-(p^k+1)) whose eps = 1 sum equals S(gamma, delta, eps).
pub fn normalize_eps(ctx: &KasamiCtx, label: &FormLabel, eps: FieldElem) -> Result<FormLabel> {
    let inv = ctx.field.inv(eps).map_err(|_| Error::ZeroElement)?;
    Ok(ctx.act(label, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::KasamiParams;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};

    fn ctx(p: u32, m: u32, k: u32) -> KasamiCtx {
        KasamiCtx::new(KasamiParams::new(p, m, k).unwrap()).unwrap()
    }

    #[test]
    fn gauss_sum_squares() {
        let g = gauss_sum(3);
        assert_eq!(g, CycInt::from_i64s(&[0, 1, -1]));
        assert_eq!(g.pow(2), CycInt::from_int(3, -3));
        assert_eq!(gauss_sum(5).pow(2), CycInt::from_int(5, 5));
        for p in [3u32, 5, 7, 11, 13] {
            let g = gauss_sum(p);
            assert_eq!(g.norm_sq(), CycInt::from_int(p, p));
        }
    }

    #[test]
    fn trivial_sums() {
        let c = ctx(3, 2, 1);
        let zero = c.zero_label();
        assert_eq!(s_brute(&c, &zero, c.field.zero()), CycInt::from_int(3, 81));
        for e in c.field.elements().skip(1) {
            assert!(s_brute(&c, &zero, e).is_zero());
        }
    }

    #[test]
    fn transform_matches_brute_and_parseval() {
        let c = ctx(3, 2, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let label = c.label_at(rng.gen_range(0..c.params.label_count()));
            let all = counts_all_eps(&c, &label);
            let mut energy = CycInt::zero(3);
            for v in 0..c.q() {
                let eps = c.field.from_vector(v);
                let brute = counts_brute(&c, &label, eps);
                assert_eq!(all[v as usize], brute);
                assert_eq!(brute.total(), 81);
                let s = brute.to_cycint();
                energy = &energy + &s.norm_sq();
            }
            assert_eq!(energy, CycInt::from_int(3, BigInt::from(3).pow(8)));
        }
    }

    #[test]
    fn transform_matches_brute_p5() {
        let c = ctx(5, 2, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let label = c.label_at(rng.gen_range(0..c.params.label_count()));
            let all = counts_all_eps(&c, &label);
            for v in (0..c.q()).step_by(13) {
                assert_eq!(all[v as usize], counts_brute(&c, &label, c.field.from_vector(v)));
            }
        }
    }

    #[test]
    fn closed_form_agrees_everywhere_small() {
        let c = ctx(3, 2, 1);
        for idx in 1..c.params.label_count() {
            let label = c.label_at(idx);
            let plan = ClosedFormPlan::new(&c, &label).unwrap();
            let all = counts_all_eps(&c, &label);
            for v in 0..c.q() {
                let eps = c.field.from_vector(v);
                let s = all[v as usize].to_cycint();
                assert_eq!(plan.s(&c, eps), s);
                assert_eq!(plan.s_generic(&c, eps), s);
                assert_eq!(plan.counts(&c, eps), all[v as usize]);
                if plan.rank() == 3 {
                    if plan.lambda(&c, eps).is_some() {
                        assert_eq!(s.norm_sq(), CycInt::from_int(3, 243));
                    } else {
                        assert!(s.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_generic_rank_nonstrict() {
        let c = ctx(3, 3, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let idx = rng.gen_range(1..c.params.label_count());
            let label = c.label_at(idx);
            let plan = ClosedFormPlan::new(&c, &label).unwrap();
            let all = counts_all_eps(&c, &label);
            for v in (0..c.q()).step_by(17) {
                let eps = c.field.from_vector(v);
                assert_eq!(plan.counts(&c, eps), all[v as usize]);
                assert_eq!(plan.s(&c, eps), all[v as usize].to_cycint());
            }
        }
    }

    #[test]
    fn rank_n_eps_zero_is_rational() {
        let c = ctx(3, 2, 1);
        for idx in 1..c.params.label_count() {
            let label = c.label_at(idx);
            if c.rank(&label).unwrap() == 4 {
                let s = s_brute(&c, &label, c.field.zero());
                let v = s.as_integer().unwrap().clone();
                assert!(v == BigInt::from(9) || v == BigInt::from(-9));
            }
        }
    }

    #[test]
    fn eps_normalization() {
        let c = ctx(3, 2, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let label = c.label_at(rng.gen_range(0..c.params.label_count()));
            let eps = c.field.element(rng.gen_range(1..c.q()));
            let moved = normalize_eps(&c, &label, eps).unwrap();
            assert_eq!(s_brute(&c, &label, eps), s_brute(&c, &moved, c.field.one()));
        }
    }
}
