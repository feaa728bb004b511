//! The quadratic form Pi_(gamma,delta)(x) = Tr^m_1(gamma x^(p^m+1)) + Tr^n_1(delta x^(p^k+1))
//! over F_(p^n), n = 2m: evaluation, radical, rank, congruence
//! diagonalization and the root analysis behind the rank classification.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp;
use crate::gf::{FieldCtx, FieldElem, FieldOptions, ZERO_LOG};
use crate::linalg::Matrix;

/// Validated (p, m, k) with n = 2m and d = gcd(m, k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KasamiParams {
    pub p: u32,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub d: u32,
    /// gcd(m, k) = gcd(m - k, 2k) = d with d odd.
    pub strict: bool,
}

impl KasamiParams {
    /// Checks ranges only; `strict` records whether the gcd condition holds.
    pub fn new(p: u32, m: u32, k: u32) -> Result<KasamiParams> {
        if p % 2 == 0 || !fp::is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if m < 2 {
            return Err(Error::Params(format!("m = {m} must be at least 2 (n = 2m >= 4)")));
        }
        if k < 1 || k >= m {
            return Err(Error::Params(format!("k = {k} must satisfy 1 <= k < m = {m}")));
        }
        let d = fp::gcd(m as u64, k as u64) as u32;
        let d2 = fp::gcd((m - k) as u64, 2 * k as u64) as u32;
        Ok(KasamiParams {
            p,
            m,
            k,
            n: 2 * m,
            d,
            strict: d == d2 && d % 2 == 1,
        })
    }

    /// Like [`KasamiParams::new`] but rejects parameters violating the gcd condition.
    pub fn strict(p: u32, m: u32, k: u32) -> Result<KasamiParams> {
        let params = Self::new(p, m, k)?;
        params.require_strict()?;
        Ok(params)
    }

    pub fn require_strict(&self) -> Result<()> {
        if self.strict {
            Ok(())
        } else {
            Err(Error::NonStrict {
                p: self.p,
                m: self.m,
                k: self.k,
            })
        }
    }

    /// p^n
    pub fn q(&self) -> u64 {
        fp::ipow(self.p as u64, self.n)
    }

    /// p^m, the size of the subfield gamma ranges over.
    pub fn q_half(&self) -> u64 {
        fp::ipow(self.p as u64, self.m)
    }

    /// Number of (gamma, delta) labels, zero label included.
    pub fn label_count(&self) -> u64 {
        self.q_half() * self.q()
    }
}

/// A label (gamma, delta) with gamma in F_(p^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormLabel {
    pub gamma: FieldElem,
    pub delta: FieldElem,
}

/// Diagonal congruence form of a symmetric matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalizedForm {
    /// a_1..a_n, nonzero entries first
    pub diag: Vec<u32>,
    /// B with B^T A B = diag(a)
    pub basis_change: Matrix,
    pub rank: usize,
    /// eta((-1)^(rank/2) * product of the nonzero a_i)
    pub disc_class: i8,
}

/// Symmetric congruence reduction over F_p.
///
/// Pivots on the first nonzero remaining diagonal entry; when the remaining
/// diagonal vanishes, `x_i <- x_i + x_j` creates one from an off-diagonal entry.
pub fn diagonalize_symmetric(a: &Matrix, p: u32) -> DiagonalizedForm {
    let n = a.rows;
    let mut m = a.clone();
    let mut b = Matrix::identity(n);

    let swap = |m: &mut Matrix, b: &mut Matrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in 0..n {
            let (x, y) = (m.get(r, i), m.get(r, j));
            m.set(r, i, y);
            m.set(r, j, x);
            let (x, y) = (b.get(r, i), b.get(r, j));
            b.set(r, i, y);
            b.set(r, j, x);
        }
        for c in 0..n {
            let (x, y) = (m.get(i, c), m.get(j, c));
            m.set(i, c, y);
            m.set(j, c, x);
        }
    };
    // column/row t += c * column/row s
    let axpy = |m: &mut Matrix, b: &mut Matrix, t: usize, s: usize, c: u32| {
        for r in 0..n {
            m.set(r, t, fp::add(m.get(r, t), fp::mul(c, m.get(r, s), p), p));
            b.set(r, t, fp::add(b.get(r, t), fp::mul(c, b.get(r, s), p), p));
        }
        for col in 0..n {
            m.set(t, col, fp::add(m.get(t, col), fp::mul(c, m.get(s, col), p), p));
        }
    };

    let mut rank = 0;
    for s in 0..n {
        if let Some(i) = (s..n).find(|&i| m.get(i, i) != 0) {
            swap(&mut m, &mut b, s, i);
        } else {
            let off = (s..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| m.get(i, j) != 0);
            let Some((i, j)) = off else { break };
            axpy(&mut m, &mut b, i, j, 1);
            swap(&mut m, &mut b, s, i);
        }
        let inv = fp::inv(m.get(s, s), p);
        for t in s + 1..n {
            let c = fp::mul(m.get(t, s), inv, p);
            if c != 0 {
                axpy(&mut m, &mut b, t, s, fp::neg(c, p));
            }
        }
        rank += 1;
    }

    let diag: Vec<u32> = (0..n).map(|i| m.get(i, i)).collect();
    let disc_class = disc_of(&diag[..rank], p);
    DiagonalizedForm {
        diag,
        basis_change: b,
        rank,
        disc_class,
    }
}

/// eta((-1)^(r/2) * product) for the r nonzero diagonal entries.
fn disc_of(nonzero: &[u32], p: u32) -> i8 {
    let prod = nonzero.iter().fold(1u32, |acc, &a| fp::mul(acc, a, p));
    let sign = if (nonzero.len() / 2) % 2 == 1 { p - 1 } else { 1 };
    fp::legendre(fp::mul(sign, prod, p), p)
}

/// Shared context: the field F_(p^n) plus lookup tables for fast evaluation.
#[derive(Debug)]
pub struct KasamiCtx {
    pub params: KasamiParams,
    pub field: Arc<FieldCtx>,
    inv2: u32,
    /// (p^m + 1) and (p^k + 1) reduced mod p^n - 1
    em: u32,
    ek: u32,
    trace_by_log: Vec<u8>,
    eps_to_u: Vec<u32>,
}

impl KasamiCtx {
    pub fn new(params: KasamiParams) -> Result<KasamiCtx> {
        Self::with_options(params, None, &FieldOptions::default())
    }

    pub fn with_options(params: KasamiParams, modulus: Option<&[u32]>, opts: &FieldOptions) -> Result<KasamiCtx> {
        let field = FieldCtx::build(params.p, params.n, modulus, opts)?;
        Ok(Self::from_field(params, Arc::new(field)))
    }

    pub fn from_field(params: KasamiParams, field: Arc<FieldCtx>) -> KasamiCtx {
        assert_eq!((field.p(), field.n()), (params.p, params.n));
        let p = params.p;
        let ord = field.group_order() as u64;
        let em = ((fp::ipow(p as u64, params.m) + 1) % ord) as u32;
        let ek = ((fp::ipow(p as u64, params.k) + 1) % ord) as u32;
        let trace_by_log = field.exp_table().iter().map(|&v| field.trace_table()[v as usize] as u8).collect();
        let basis: Vec<FieldElem> = (0..params.n).map(|j| field.basis(j)).collect();
        let eps_to_u = (0..field.size())
            .map(|v| {
                let e = field.from_vector(v);
                basis
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &b| acc * p + field.abs_trace(field.mul(e, b)))
            })
            .collect();
        KasamiCtx {
            params,
            inv2: fp::inv(2, p),
            em,
            ek,
            trace_by_log,
            eps_to_u,
            field,
        }
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn q(&self) -> u32 {
        self.field.size()
    }

    /// Linear coordinates of the character x -> Tr(eps x), indexed by the
    /// vector index of eps: u_j = Tr(eps x^j), packed base p.
    pub fn eps_to_u(&self) -> &[u32] {
        &self.eps_to_u
    }

    pub fn label(&self, gamma: FieldElem, delta: FieldElem) -> Result<FormLabel> {
        self.field.check(gamma)?;
        self.field.check(delta)?;
        if !self.field.in_subfield(gamma, self.params.m) {
            return Err(Error::NotInSubfield(self.params.m));
        }
        Ok(FormLabel { gamma, delta })
    }

    pub fn zero_label(&self) -> FormLabel {
        FormLabel {
            gamma: self.field.zero(),
            delta: self.field.zero(),
        }
    }

    /// Label enumeration: gamma by subfield index (major), then delta by element index.
    pub fn label_at(&self, index: u64) -> FormLabel {
        let q = self.q() as u64;
        FormLabel {
            gamma: self.field.subfield_element(self.params.m, index / q).expect("index in range"),
            delta: self.field.element((index % q) as u32),
        }
    }

    pub fn label_index(&self, label: &FormLabel) -> u64 {
        let gi = self.field.subfield_index_of(label.gamma, self.params.m).expect("gamma in subfield");
        gi * self.q() as u64 + self.field.index_of(label.delta) as u64
    }

    /// The orbit action c: (gamma, delta) -> (gamma c^(p^m+1), delta c^(p^k+1)).
    pub fn act(&self, label: &FormLabel, c: FieldElem) -> FormLabel {
        let f = &self.field;
        FormLabel {
            gamma: f.mul(label.gamma, f.pow(c, self.em as u64)),
            delta: f.mul(label.delta, f.pow(c, self.ek as u64)),
        }
    }

    /// Pi_(gamma,delta)(x).
    pub fn eval_form(&self, label: &FormLabel, x: FieldElem) -> u32 {
        let f = &self.field;
        let p = self.p();
        let g_part = f.abs_trace(f.mul(label.gamma, f.pow(x, self.em as u64)));
        let d_part = f.abs_trace(f.mul(label.delta, f.pow(x, self.ek as u64)));
        fp::add(fp::mul(g_part, self.inv2, p), d_part, p)
    }

    /// Reference evaluation straight from the trace definitions, no tables.
    pub fn eval_form_reference(&self, label: &FormLabel, x: FieldElem) -> Result<u32> {
        let f = &self.field;
        let (m, k) = (self.params.m, self.params.k);
        let xm = f.mul(f.frobenius(x, m), x);
        let xk = f.mul(f.frobenius(x, k), x);
        let a = f.subfield_trace(f.mul(label.gamma, xm), m, 1)?;
        let b = f.trace(f.mul(label.delta, xk), 1)?;
        Ok(f.to_fp(f.add(a, b)).expect("absolute trace lies in F_p"))
    }

    /// Pi(alpha^t) for t = 0..p^n - 2 written into `out`.
    pub fn form_values_by_log(&self, label: &FormLabel, out: &mut [u8]) {
        let ord = self.field.group_order();
        assert_eq!(out.len(), ord as usize);
        let p = self.p() as u8;
        let inv2 = self.inv2 as u8;
        let tr = &self.trace_by_log;
        let (gl, dl) = (label.gamma.raw_log(), label.delta.raw_log());
        out.fill(0);
        if gl != ZERO_LOG {
            let mut idx = gl;
            for o in out.iter_mut() {
                *o = (tr[idx as usize] * inv2) % p;
                idx += self.em;
                if idx >= ord {
                    idx -= ord;
                }
            }
        }
        if dl != ZERO_LOG {
            let mut idx = dl;
            for o in out.iter_mut() {
                let s = *o + tr[idx as usize];
                *o = if s >= p { s - p } else { s };
                idx += self.ek;
                if idx >= ord {
                    idx -= ord;
                }
            }
        }
    }

    /// Pi(x) indexed by the vector index of x, into a buffer of length p^n.
    pub fn form_values_by_vector(&self, label: &FormLabel, by_log: &mut [u8], out: &mut [u8]) {
        self.form_values_by_log(label, by_log);
        out[0] = 0;
        for (&v, &val) in self.field.exp_table().iter().zip(by_log.iter()) {
            out[v as usize] = val;
        }
    }

    /// Matrix of z -> gamma z^(p^m) + delta z^(p^k) + (delta z)^(p^(n-k)) on the polynomial basis.
    pub fn radical_map(&self, label: &FormLabel) -> Matrix {
        let f = &self.field;
        let (n, m, k) = (self.params.n, self.params.m, self.params.k);
        let mut mat = Matrix::zeros(n as usize, n as usize);
        for j in 0..n {
            let z = f.basis(j);
            let lz = f.add(
                f.add(f.mul(label.gamma, f.frobenius(z, m)), f.mul(label.delta, f.frobenius(z, k))),
                f.frobenius(f.mul(label.delta, z), n - k),
            );
            for (i, c) in f.coeffs(lz).into_iter().enumerate() {
                mat.set(i, j as usize, c);
            }
        }
        mat
    }

    /// F_p-basis of the radical {z : gamma z^(p^m) + delta z^(p^k) + (delta z)^(p^(n-k)) = 0}.
    pub fn radical(&self, label: &FormLabel) -> Result<Vec<FieldElem>> {
        if label.gamma.is_zero() && label.delta.is_zero() {
            return Err(Error::ZeroLabel);
        }
        Ok(self
            .radical_map(label)
            .nullspace(self.p())
            .iter()
            .map(|v| self.field.from_coeffs(v))
            .collect())
    }

    /// n minus the radical dimension.
    pub fn rank(&self, label: &FormLabel) -> Result<usize> {
        if label.gamma.is_zero() && label.delta.is_zero() {
            return Err(Error::ZeroLabel);
        }
        Ok(self.radical_map(label).rank(self.p()))
    }

    /// A_ii = Pi(b_i), A_ij = (Pi(b_i + b_j) - Pi(b_i) - Pi(b_j)) / 2 on the polynomial basis.
    pub fn gram_matrix(&self, label: &FormLabel) -> Matrix {
        let f = &self.field;
        let n = self.n() as usize;
        let p = self.p();
        let diag: Vec<u32> = (0..n).map(|i| self.eval_form(label, f.basis(i as u32))).collect();
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, diag[i]);
            for j in i + 1..n {
                let both = self.eval_form(label, f.add(f.basis(i as u32), f.basis(j as u32)));
                let v = fp::mul(fp::sub(fp::sub(both, diag[i], p), diag[j], p), self.inv2, p);
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        a
    }

    /// Trace-form matrix C_ij = Tr(b_i b_j).
    pub fn trace_form_matrix(&self) -> Matrix {
        let f = &self.field;
        let n = self.n() as usize;
        let mut c = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                c.set(i, j, f.abs_trace(f.mul(f.basis(i as u32), f.basis(j as u32))));
            }
        }
        c
    }

    /// Diagonal form of Pi plus the linear coefficients b = Lambda^T C B of x -> Tr(eps x).
    pub fn diagonalize(&self, label: &FormLabel, eps: FieldElem) -> (DiagonalizedForm, Vec<u32>) {
        let form = diagonalize_symmetric(&self.gram_matrix(label), self.p());
        let b = self.linear_coefficients(&form, eps);
        (form, b)
    }

    pub fn linear_coefficients(&self, form: &DiagonalizedForm, eps: FieldElem) -> Vec<u32> {
        let p = self.p();
        let lambda = Matrix {
            rows: 1,
            cols: self.n() as usize,
            data: self.field.coeffs(eps),
        };
        lambda.mul(&self.trace_form_matrix(), p).mul(&form.basis_change, p).data
    }

    pub fn disc_class(&self, label: &FormLabel) -> Result<i8> {
        if label.gamma.is_zero() && label.delta.is_zero() {
            return Err(Error::ZeroLabel);
        }
        Ok(diagonalize_symmetric(&self.gram_matrix(label), self.p()).disc_class)
    }

    /// All roots in F_(p^n) of delta^(p^(n-k)) y^(p^(m-k)+1) + gamma y + delta, by exhaustive scan.
    pub fn g_roots(&self, label: &FormLabel) -> Result<Vec<FieldElem>> {
        if label.gamma.is_zero() || label.delta.is_zero() {
            return Err(Error::DegenerateRootLabel);
        }
        let f = &self.field;
        let (n, m, k) = (self.params.n, self.params.m, self.params.k);
        let lead = f.frobenius(label.delta, n - k);
        let e = fp::ipow(self.p() as u64, m - k) + 1;
        Ok(f.elements()
            .filter(|&y| {
                let v = f.add(f.add(f.mul(lead, f.pow(y, e)), f.mul(label.gamma, y)), label.delta);
                v.is_zero()
            })
            .collect())
    }
}

/// Root-count statistics of g over all labels with gamma delta != 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootCensus {
    /// root count -> number of labels
    pub histogram: BTreeMap<usize, u64>,
    /// unique-root labels whose root is a (p^d - 1)-th power
    pub single_root_ok: u64,
    /// labels with two or more roots where every pair y1 y2 is a (p^d - 1)-th power
    pub multi_root_ok: u64,
    pub multi_root_labels: u64,
}

pub fn g_root_census(ctx: &KasamiCtx) -> RootCensus {
    let f = &ctx.field;
    let exp = ((f.group_order() as u64) / (fp::ipow(ctx.p() as u64, ctx.params.d) - 1)) as u64;
    let is_power = |y: FieldElem| f.pow(y, exp) == f.one();
    let mut out = RootCensus::default();
    for idx in 0..ctx.params.label_count() {
        let label = ctx.label_at(idx);
        if label.gamma.is_zero() || label.delta.is_zero() {
            continue;
        }
        let roots = ctx.g_roots(&label).expect("nondegenerate label");
        *out.histogram.entry(roots.len()).or_default() += 1;
        if roots.len() == 1 && is_power(roots[0]) {
            out.single_root_ok += 1;
        }
        if roots.len() >= 2 {
            out.multi_root_labels += 1;
            let all = roots
                .iter()
                .enumerate()
                .all(|(i, &a)| roots[i + 1..].iter().all(|&b| is_power(f.mul(a, b))));
            if all {
                out.multi_root_ok += 1;
            }
        }
    }
    out
}

/// Root counts of h_c(x) = x^(p^s+1) - c x + c over c in F_(p^l)^*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BluherCensus {
    pub p: u32,
    pub s: u32,
    pub l: u32,
    pub gcd: u32,
    /// root count in F_(p^l)^* -> number of c
    pub histogram: BTreeMap<usize, u64>,
    /// unique roots x0 with (x0 - 1)^((p^l-1)/(p^gcd-1)) = 1
    pub unique_root_ok: u64,
}

pub fn bluher_census(p: u32, s: u32, l: u32, opts: &FieldOptions) -> Result<BluherCensus> {
    let f = FieldCtx::build(p, l, None, opts)?;
    let g = fp::gcd(s as u64, l as u64) as u32;
    let e = fp::ipow(p as u64, s) + 1;
    let power = f.group_order() as u64 / (fp::ipow(p as u64, g) - 1);
    // x^(p^s+1) for every nonzero x, by log
    let xs: Vec<FieldElem> = f.elements().skip(1).collect();
    let xpow: Vec<FieldElem> = xs.iter().map(|&x| f.pow(x, e)).collect();
    let mut histogram = BTreeMap::new();
    let mut unique_root_ok = 0;
    for c in f.elements().skip(1) {
        let roots: Vec<FieldElem> = xs
            .iter()
            .zip(&xpow)
            .filter(|(&x, &xe)| f.add(f.sub(xe, f.mul(c, x)), c).is_zero())
            .map(|(&x, _)| x)
            .collect();
        *histogram.entry(roots.len()).or_default() += 1;
        if roots.len() == 1 && f.pow(f.sub(roots[0], f.one()), power) == f.one() {
            unique_root_ok += 1;
        }
    }
    Ok(BluherCensus {
        p,
        s,
        l,
        gcd: g,
        histogram,
        unique_root_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ctx(p: u32, m: u32, k: u32) -> KasamiCtx {
        KasamiCtx::new(KasamiParams::new(p, m, k).unwrap()).unwrap()
    }

    #[test]
    fn params_validation() {
        let a = KasamiParams::new(3, 2, 1).unwrap();
        assert!(a.strict && a.d == 1 && a.n == 4);
        let b = KasamiParams::new(3, 3, 1).unwrap();
        assert!(!b.strict);
        assert!(KasamiParams::new(3, 3, 2).unwrap().strict);
        assert!(matches!(KasamiParams::strict(3, 3, 1), Err(Error::NonStrict { .. })));
        assert!(KasamiParams::new(3, 2, 2).is_err());
        assert!(KasamiParams::new(3, 1, 0).is_err());
        assert!(matches!(KasamiParams::new(4, 2, 1), Err(Error::NotOddPrime(4))));
        // d = 3 with m/d = 3, k/d = 2: gcd(9, 6) = 3 = gcd(3, 12)
        let c = KasamiParams::new(3, 9, 6).unwrap();
        assert!(c.strict && c.d == 3);
    }

    #[test]
    fn fast_eval_matches_reference() {
        for (p, m, k) in [(3, 2, 1), (5, 2, 1), (3, 3, 1)] {
            let c = ctx(p, m, k);
            let ord = c.field.group_order() as usize;
            let mut buf = vec![0u8; ord];
            for idx in (0..c.params.label_count()).step_by(7) {
                let label = c.label_at(idx);
                c.form_values_by_log(&label, &mut buf);
                for t in 0..ord {
                    let x = c.field.alpha_pow(t as i64);
                    let r = c.eval_form_reference(&label, x).unwrap();
                    assert_eq!(buf[t] as u32, r);
                    assert_eq!(c.eval_form(&label, x), r);
                }
            }
        }
    }

    #[test]
    fn form_is_homogeneous_of_degree_two() {
        let c = ctx(3, 2, 1);
        for idx in 0..c.params.label_count() {
            let label = c.label_at(idx);
            assert_eq!(c.eval_form(&label, c.field.zero()), 0);
            for x in c.field.elements() {
                let v = c.eval_form(&label, x);
                for lam in 1..3u32 {
                    let lx = c.field.mul(c.field.from_fp(lam), x);
                    assert_eq!(c.eval_form(&label, lx), fp::mul(fp::mul(lam, lam, 3), v, 3));
                }
                if idx == 0 {
                    assert_eq!(v, 0);
                }
            }
        }
    }

    #[test]
    fn radical_dimension_matches_brute_force_count() {
        let c = ctx(3, 2, 1);
        let f = &c.field;
        let (n, m, k) = (4, 2, 1);
        for idx in 1..c.params.label_count() {
            let label = c.label_at(idx);
            let dim = c.radical(&label).unwrap().len();
            let count = f
                .elements()
                .filter(|&z| {
                    let v = f.add(
                        f.add(f.mul(label.gamma, f.frobenius(z, m)), f.mul(label.delta, f.frobenius(z, k))),
                        f.frobenius(f.mul(label.delta, z), n - k),
                    );
                    v.is_zero()
                })
                .count();
            assert_eq!(3usize.pow(dim as u32), count);
            assert!([0, 1, 2].contains(&dim));
            // radical vectors leave the form invariant under translation
            for z in c.radical(&label).unwrap() {
                for x in f.elements() {
                    assert_eq!(c.eval_form(&label, f.add(x, z)), c.eval_form(&label, x));
                }
            }
        }
        assert!(matches!(c.radical(&c.zero_label()), Err(Error::ZeroLabel)));
    }

    #[test]
    fn gamma_only_labels_are_nondegenerate() {
        let c = ctx(3, 2, 1);
        for gi in 1..9u64 {
            let label = c.label_at(gi * 81);
            assert!(label.delta.is_zero());
            assert!(c.radical(&label).unwrap().is_empty());
            assert_eq!(c.rank(&label).unwrap(), 4);
        }
    }

    #[test]
    fn delta_only_labels_have_rank_n_or_n_minus_2d() {
        for (p, m, k) in [(3, 2, 1), (5, 2, 1)] {
            let c = ctx(p, m, k);
            let n = c.n() as usize;
            for di in 1..c.q() as u64 {
                let r = c.rank(&c.label_at(di)).unwrap();
                assert!(r == n || r == n - 2, "rank {r}");
            }
        }
    }

    #[test]
    fn diagonal_form_reproduces_evaluation() {
        let c = ctx(3, 2, 1);
        let p = 3;
        for idx in 1..c.params.label_count() {
            let label = c.label_at(idx);
            let a = c.gram_matrix(&label);
            let (form, b) = c.diagonalize(&label, c.field.zero());
            assert!(b.iter().all(|&x| x == 0));
            assert_eq!(form.rank, 4 - c.radical(&label).unwrap().len());
            assert!(form.diag[form.rank..].iter().all(|&x| x == 0));
            assert!(form.diag[..form.rank].iter().all(|&x| x != 0));
            let bt_a_b = form.basis_change.transpose().mul(&a, p).mul(&form.basis_change, p);
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { form.diag[i] } else { 0 };
                    assert_eq!(bt_a_b.get(i, j), want);
                }
            }
            for x in c.field.elements() {
                let xv = c.field.coeffs(x);
                let ax = a.mul_vec(&xv, p);
                let quad = xv.iter().zip(&ax).fold(0, |acc, (&u, &v)| fp::add(acc, fp::mul(u, v, p), p));
                assert_eq!(quad, c.eval_form(&label, x));
            }
        }
    }

    #[test]
    fn off_diagonal_pivot_path() {
        // x1 x2 over F_3: zero diagonal, hyperbolic plane
        let a = Matrix::from_rows(&[vec![0, 2], vec![2, 0]]);
        let form = diagonalize_symmetric(&a, 3);
        assert_eq!(form.rank, 2);
        // hyperbolic plane: -a1 a2 is a square
        assert_eq!(form.disc_class, 1);
        let z = diagonalize_symmetric(&Matrix::zeros(3, 3), 3);
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn disc_class_invariant_under_basis_change() {
        let c = ctx(3, 2, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for idx in (1..c.params.label_count()).step_by(5) {
            let label = c.label_at(idx);
            let a = c.gram_matrix(&label);
            let base = diagonalize_symmetric(&a, 3);
            for _ in 0..20 {
                let pm = Matrix::random_invertible(4, 3, &mut rng);
                let moved = pm.transpose().mul(&a, 3).mul(&pm, 3);
                let other = diagonalize_symmetric(&moved, 3);
                assert_eq!(other.rank, base.rank);
                assert_eq!(other.disc_class, base.disc_class);
            }
        }
    }

    #[test]
    fn g_roots_prime_field_counts() {
        let c = ctx(3, 2, 1);
        let rc = g_root_census(&c);
        assert!(rc.histogram.keys().all(|k| [0, 1, 2, 4].contains(k)));
        assert_eq!(rc.histogram.get(&1), Some(&240));
        assert_eq!(rc.single_root_ok, 240);
        assert_eq!(rc.multi_root_ok, rc.multi_root_labels);
        assert!(matches!(c.g_roots(&c.label_at(1)), Err(Error::DegenerateRootLabel)));
    }

    #[test]
    fn bluher_small() {
        let opts = FieldOptions::default();
        let b = bluher_census(3, 1, 2, &opts).unwrap();
        assert_eq!(b.histogram.get(&1), Some(&3));
        assert_eq!(b.histogram.values().sum::<u64>(), 8);
        let b = bluher_census(3, 1, 3, &opts).unwrap();
        assert_eq!(b.histogram.get(&1), Some(&9));
        assert_eq!(b.unique_root_ok, 9);
    }
}
