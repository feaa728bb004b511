//! Command-line front end: argument parsing, verification driver and exports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;

use crate::budget::Budget;
use crate::census::{self, CensusExport};
use crate::code::{self, Strategy, WeightDistribution, WeightExport};
use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::fp;
use crate::gf::ZERO_LOG;
use crate::predicted;
use crate::qform::{self, KasamiCtx, KasamiParams};
use crate::seq::{self, CorrelationSpectrum};

#[derive(Parser, Debug)]
#[command(name = "kasami", version, about = "Exact computations for nonbinary Kasami codes and sequence families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check (p, m, k) and report d and strictness
    Validate(ValidateArgs),
    /// Print the Zech logarithm table of F_(p^n)
    FieldTable(CommonArgs),
    /// Rank and discriminant census over all form labels
    RankCensus(CommonArgs),
    /// Weight distribution of the code
    WeightDist {
        #[command(flatten)]
        common: CommonArgs,
        /// enumerate every codeword instead of the transform census
        #[arg(long)]
        brute: bool,
    },
    /// Minimum distance via the weight census
    MinDist(CommonArgs),
    /// All sequences of the family, one per line
    SeqFamily(CommonArgs),
    /// Correlation distribution of the sequence family
    CorrDist {
        #[command(flatten)]
        common: CommonArgs,
        /// sum every pair and shift directly
        #[arg(long)]
        brute: bool,
    },
    /// Check computed distributions against the closed forms
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, value_delimiter = ',')]
        targets: Option<Vec<Target>>,
        /// add one to the multiplicity of this predicted weight row (test fixture)
        #[arg(long, hide = true)]
        perturb_table1: Option<usize>,
    },
    /// Write a machine-readable file
    Export {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        what: ExportKind,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Args, Debug, Clone)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// modulus coefficients c0,c1,...,cn (monic, low degree first)
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: u32,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 28, value_parser = clap::value_parser!(u32).range(1..=31))]
    pub max_field_log2: u32,
    #[arg(long, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_brute_codewords: u64,
    /// cap on elementary operations per census
    #[arg(long, default_value_t = 1 << 34, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_census_ops: u64,
    #[arg(long)]
    pub allow_non_strict: bool,
    /// weight census over orbits of the scaling action
    #[arg(long)]
    pub orbits: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Table4,
    Prop1,
    Prop3,
    Prop4,
    Lemma3,
    Lemma5,
    Mindist,
}

impl Target {
    pub const ALL: [Target; 10] = [
        Target::Table1,
        Target::Table2,
        Target::Table3,
        Target::Table4,
        Target::Prop1,
        Target::Prop3,
        Target::Prop4,
        Target::Lemma3,
        Target::Lemma5,
        Target::Mindist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Table3 => "table3",
            Target::Table4 => "table4",
            Target::Prop1 => "prop1",
            Target::Prop3 => "prop3",
            Target::Prop4 => "prop4",
            Target::Lemma3 => "lemma3",
            Target::Lemma5 => "lemma5",
            Target::Mindist => "mindist",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Weights,
    Spectrum,
    Sequences,
    Census,
}

/// Everything a command needs, resolved from the arguments.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: KasamiParams,
    pub modulus: Option<Vec<u32>>,
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub budget: Budget,
    pub targets: Vec<Target>,
    pub allow_non_strict: bool,
    pub strategy: Strategy,
    pub out: Option<PathBuf>,
    pub table1_perturbation: Option<usize>,
}

impl RunConfig {
    pub fn new(params: KasamiParams) -> RunConfig {
        RunConfig {
            params,
            modulus: None,
            workers: 1,
            cache_dir: None,
            format: Format::Text,
            budget: Budget::default(),
            targets: Target::ALL.to_vec(),
            allow_non_strict: false,
            strategy: Strategy::Full,
            out: None,
            table1_perturbation: None,
        }
    }

    pub fn from_args(a: &CommonArgs) -> Result<RunConfig> {
        let params = KasamiParams::new(a.params.p, a.params.m, a.params.k)?;
        Ok(RunConfig {
            modulus: a.modulus.clone(),
            workers: a.workers as usize,
            cache_dir: a.cache_dir.clone(),
            format: a.format,
            budget: Budget {
                max_field_log2: a.max_field_log2,
                max_brute_codewords: a.max_brute_codewords,
                max_census_ops: a.max_census_ops,
            },
            allow_non_strict: a.allow_non_strict,
            strategy: if a.orbits { Strategy::Orbits } else { Strategy::Full },
            out: a.out.clone(),
            ..RunConfig::new(params)
        })
    }

    pub fn context(&self) -> Result<KasamiCtx> {
        KasamiCtx::with_options(
            self.params,
            self.modulus.as_deref(),
            &self.budget.field_options(self.cache_dir.clone()),
        )
    }

    fn require_strict(&self) -> Result<()> {
        if self.allow_non_strict {
            Ok(())
        } else {
            self.params.require_strict()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedBudget,
    NotAsserted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedBudget => "skipped-budget",
            Status::NotAsserted => "not-asserted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub what: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TargetReport {
    pub target: Target,
    pub status: Status,
    pub elapsed_ms: u128,
    pub mismatches: Vec<Mismatch>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: KasamiParams,
    pub targets: Vec<TargetReport>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.targets.iter().all(|t| t.status != Status::Fail)
    }

    pub fn get(&self, target: Target) -> Option<&TargetReport> {
        self.targets.iter().find(|t| t.target == target)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => {
                let mut s = String::from("target,status,elapsed_ms,what,expected,computed\n");
                for t in &self.targets {
                    s.push_str(&format!("{},{},{},,,\n", t.target.name(), t.status.as_str(), t.elapsed_ms));
                    for m in &t.mismatches {
                        s.push_str(&format!("{},{},,{},{},{}\n", t.target.name(), t.status.as_str(), m.what, m.expected, m.computed));
                    }
                }
                s
            }
            Format::Text => {
                let p = &self.params;
                let mut s = format!(
                    "verify p={} m={} k={} (n={}, d={}, {})\n",
                    p.p,
                    p.m,
                    p.k,
                    p.n,
                    p.d,
                    if p.strict { "strict" } else { "non-strict" }
                );
                for t in &self.targets {
                    s.push_str(&format!("{:<8} {:<15} {:>8} ms\n", t.target.name(), t.status.as_str(), t.elapsed_ms));
                    for m in &t.mismatches {
                        s.push_str(&format!("    {}: expected {}, computed {}\n", m.what, m.expected, m.computed));
                    }
                    for n in &t.notes {
                        s.push_str(&format!("    note: {n}\n"));
                    }
                }
                s.push_str(if self.all_pass() { "overall: pass\n" } else { "overall: FAIL\n" });
                s
            }
        }
    }
}

#[derive(Default)]
struct Outcome {
    mismatches: Vec<Mismatch>,
    notes: Vec<String>,
    not_asserted: bool,
}

impl Outcome {
    fn check(&mut self, what: impl Into<String>, expected: impl Display, computed: impl Display) {
        let (e, c) = (expected.to_string(), computed.to_string());
        if e != c {
            self.mismatches.push(Mismatch {
                what: what.into(),
                expected: e,
                computed: c,
            });
        }
    }

    fn check_map<K: Ord + Display, V: Display + PartialEq + Default>(&mut self, what: &str, expected: &BTreeMap<K, V>, computed: &BTreeMap<K, V>) {
        let zero = V::default();
        for k in expected.keys().chain(computed.keys()).collect::<std::collections::BTreeSet<_>>() {
            let (e, c) = (expected.get(k).unwrap_or(&zero), computed.get(k).unwrap_or(&zero));
            if e != c {
                self.check(format!("{what} {k}"), e, c);
            }
        }
    }

    fn not_asserted(note: impl Into<String>) -> Outcome {
        Outcome {
            notes: vec![note.into()],
            not_asserted: true,
            ..Outcome::default()
        }
    }
}

fn big(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

struct Verifier<'a> {
    cfg: &'a RunConfig,
    ctx: &'a KasamiCtx,
    ranks: Option<census::RankCensus>,
}

impl Verifier<'_> {
    fn rank_census(&mut self) -> Result<&census::RankCensus> {
        if self.ranks.is_none() {
            let p = &self.cfg.params;
            self.cfg
                .budget
                .check_ops("rank census", p.label_count() as u128 * (p.n as u128).pow(3))?;
            self.ranks = Some(census::rank_census(self.ctx, self.cfg.workers));
        }
        Ok(self.ranks.as_ref().expect("just filled"))
    }

    fn run(&mut self, target: Target) -> Result<Outcome> {
        let strict = self.cfg.params.strict;
        let strict_only = !matches!(target, Target::Lemma3 | Target::Lemma5 | Target::Mindist);
        if strict_only && !strict {
            return Ok(Outcome::not_asserted("closed forms need gcd(m, k) = gcd(m - k, 2k) = d odd"));
        }
        match target {
            Target::Table1 => self.table1(),
            Target::Table2 => self.table2(),
            Target::Table3 => self.table3(),
            Target::Table4 => self.table4(),
            Target::Prop1 => self.prop1(),
            Target::Prop3 => self.prop3(),
            Target::Prop4 => self.prop4(),
            Target::Lemma3 => self.lemma3(),
            Target::Lemma5 => self.lemma5(),
            Target::Mindist => self.mindist(),
        }
    }

    fn table1(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let params = &cfg.params;
        let mut rows = predicted::weight_rows(params)?;
        if let Some(i) = cfg.table1_perturbation {
            let row = rows.get_mut(i).ok_or_else(|| Error::Params(format!("no weight row {i}")))?;
            row.1 += 1;
        }
        let table = WeightDistribution::from_predicted(&predicted::merge_weight_rows(&rows)?);
        let fast = code::weight_distribution_fast(ctx, cfg.workers, cfg.strategy, &cfg.budget)?;
        let mut o = Outcome::default();
        for (w, ours, theirs) in fast.diff(&table) {
            o.check(format!("multiplicity of weight {w}"), theirs, ours);
        }
        match code::weight_distribution_brute(ctx, cfg.workers, &cfg.budget) {
            Ok(brute) => {
                for (w, b, f) in brute.diff(&fast) {
                    o.check(format!("enumerated multiplicity of weight {w}"), f, b);
                }
                o.notes.push("codeword enumeration agrees".into());
            }
            Err(Error::BudgetExceeded { .. }) => o.notes.push("codeword enumeration skipped (budget)".into()),
            Err(e) => return Err(e),
        }
        let distinct = if params.d == 1 { 9 } else { 10 };
        o.check("distinct weights including 0", distinct, fast.entries.len());
        let [low, high] = predicted::excluded_weights(params);
        o.check(format!("multiplicity of weight {low}"), 0, fast.get(low));
        if params.d > 1 {
            o.check(format!("multiplicity of weight {high}"), 0, fast.get(high));
        } else {
            o.notes.push(format!("weight {high} coincides with a regular row when d = 1"));
        }
        Ok(o)
    }

    fn table2(&mut self) -> Result<Outcome> {
        let expected = predicted::rank_distribution(&self.cfg.params)?;
        let rc = self.rank_census()?;
        let computed: BTreeMap<u32, BigInt> = rc.by_rank.iter().map(|(&r, c)| (r, big(c))).collect();
        let mut o = Outcome::default();
        o.check_map("labels of rank", &expected, &computed);
        Ok(o)
    }

    fn prop3(&mut self) -> Result<Outcome> {
        let expected: BTreeMap<String, BigInt> = predicted::class_distribution(&self.cfg.params)?
            .into_iter()
            .map(|((r, j), c)| (format!("(rank {r}, class {j})"), c))
            .collect();
        let rc = self.rank_census()?;
        let computed: BTreeMap<String, BigInt> = rc
            .by_class
            .iter()
            .map(|(&(r, j), c)| (format!("(rank {r}, class {j})"), big(c)))
            .collect();
        let mut o = Outcome::default();
        o.check_map("labels", &expected, &computed);
        Ok(o)
    }

    fn prop4(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let q = ctx.q() as u128;
        cfg.budget
            .check_ops("power sums", cfg.params.label_count() as u128 * q + 2 * q * q)?;
        let mut o = Outcome::default();
        let sums = census::power_sums(ctx, cfg.workers);
        let expected = predicted::power_sums(&cfg.params)?;
        for (j, (e, c)) in expected.iter().zip([&sums.s1, &sums.s2, &sums.s3]).enumerate() {
            o.check(format!("sum of S^{}", j + 1), CycInt::from_int(ctx.p(), e.clone()), c);
        }
        o.check("|T2|", predicted::t2(&cfg.params), census::count_t2(ctx));
        o.check("|T3|", predicted::t3(&cfg.params), census::count_t3(ctx));
        Ok(o)
    }

    fn table3(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let expected = predicted::s_distribution(&cfg.params)?;
        let computed = census::s_distribution(ctx, cfg.workers, &cfg.budget)?;
        let computed: BTreeMap<CycInt, BigInt> = computed.entries.iter().map(|(k, c)| (k.clone(), big(c))).collect();
        let expected: BTreeMap<CycInt, BigInt> = expected.into_iter().filter(|(_, c)| *c != BigInt::ZERO).collect();
        let mut o = Outcome::default();
        o.check_map("frequency of S =", &expected, &computed);
        Ok(o)
    }

    fn table4(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let params = &cfg.params;
        let p = ctx.p();
        let spectrum = seq::correlation_distribution(ctx, cfg.workers, &cfg.budget)?;
        let expected: BTreeMap<CycInt, BigInt> = predicted::correlation_distribution(params)?
            .into_iter()
            .filter(|(_, c)| *c != BigInt::ZERO)
            .collect();
        let computed: BTreeMap<CycInt, BigInt> = spectrum.entries.iter().map(|(k, c)| (k.clone(), big(c))).collect();
        let mut o = Outcome::default();
        o.check_map("frequency of C =", &expected, &computed);
        o.check("distinct correlation values", 5 * p + 2, spectrum.distinct_values());
        let period = ctx.q() as u64 - 1;
        let nontrivial = spectrum.nontrivial(params.label_count(), p, period);
        let bound = predicted::max_correlation(params);
        match nontrivial.within(&bound) {
            Some(ok) => o.check(format!("all nontrivial |C| <= {bound}"), true, ok),
            None => o.notes.push("magnitude bound undecided in floating point".into()),
        }
        o.check(format!("some |C| = {bound}"), true, nontrivial.attains(&bound));
        let below_period = nontrivial
            .entries
            .keys()
            .all(|k| k.cmp_norm_sq(&BigInt::from(period * period)) == Some(std::cmp::Ordering::Less));
        o.check(format!("all nontrivial |C| < {period}"), true, below_period);
        match seq::brute_correlation_spectrum(ctx, cfg.workers, &cfg.budget) {
            Ok(brute) => {
                let b: BTreeMap<CycInt, BigInt> = brute.entries.iter().map(|(k, c)| (k.clone(), big(c))).collect();
                o.check_map("pairwise frequency of C =", &computed, &b);
                o.notes.push("pairwise spectrum agrees".into());
            }
            Err(Error::BudgetExceeded { .. }) => o.notes.push("pairwise spectrum skipped (budget)".into()),
            Err(e) => return Err(e),
        }
        Ok(o)
    }

    fn prop1(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let params = &cfg.params;
        cfg.budget
            .check_ops("root census", params.label_count() as u128 * ctx.q() as u128)?;
        let rc = qform::g_root_census(ctx);
        let big_count = fp::ipow(params.p as u64, params.d) as usize + 1;
        let mut o = Outcome::default();
        for &r in rc.histogram.keys() {
            if ![0, 1, 2, big_count].contains(&r) {
                o.check("root count in {0, 1, 2, p^d + 1}", "yes", format!("{r} roots"));
            }
        }
        let single = rc.histogram.get(&1).copied().unwrap_or(0);
        o.check("unique roots that are (p^d - 1)-th powers", single, rc.single_root_ok);
        o.check("root pairs that are (p^d - 1)-th powers", rc.multi_root_labels, rc.multi_root_ok);
        let rd = fp::ipow(params.p as u64, params.m - params.d) * (ctx.q() as u64 - 1);
        o.check("labels with exactly one root", rd, single);
        o.notes.push(format!("histogram {:?}", rc.histogram));
        Ok(o)
    }

    fn lemma3(&mut self) -> Result<Outcome> {
        let cfg = self.cfg;
        let p = cfg.params.p;
        let mut o = Outcome::default();
        for l in 2..=4u32 {
            let size = fp::ipow(p as u64, l) as u128;
            if size > 1 << cfg.budget.max_field_log2 || cfg.budget.check_ops("Bluher census", size * size).is_err() {
                o.notes.push(format!("(s, l) = (1, {l}) skipped (budget)"));
                continue;
            }
            let b = qform::bluher_census(p, 1, l, &cfg.budget.field_options(cfg.cache_dir.clone()))?;
            let n1 = b.histogram.get(&1).copied().unwrap_or(0);
            o.check(format!("N_1 at (s, l) = (1, {l})"), fp::ipow(p as u64, l - b.gcd), n1);
            o.check(format!("unique roots with (x0 - 1) a power at (1, {l})"), n1, b.unique_root_ok);
            let big_count = fp::ipow(p as u64, b.gcd) as usize + 1;
            for &r in b.histogram.keys() {
                if ![0, 1, 2, big_count].contains(&r) {
                    o.check(format!("root count at (1, {l})"), "0, 1, 2 or p^gcd + 1", r);
                }
            }
        }
        Ok(o)
    }

    /// S(gamma, delta, eps) = S(normalized label, 1) for every label and eps != 0:
    /// transform rows against directly counted eps = 1 histograms.
    fn lemma5(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let params = &cfg.params;
        let p = ctx.p() as usize;
        let labels = params.label_count();
        cfg.budget.check_ops(
            "eps normalization check",
            labels as u128 * (census::transform_ops(params) + ctx.q() as u128 * p as u128),
        )?;
        let f = &ctx.field;
        let at_one: Vec<u32> = crate::parallel::chunked_fold(
            labels,
            cfg.workers,
            |range| {
                let mut buf = vec![0u8; f.group_order() as usize];
                let mut out = Vec::new();
                for idx in range {
                    ctx.form_values_by_log(&ctx.label_at(idx), &mut buf);
                    out.extend(census::counts_at(ctx, &buf, f.one()).counts.iter().map(|&c| c as u32));
                }
                out
            },
            |a, b| a.extend(b),
        );
        let inverses: Vec<_> = (1..ctx.q()).map(|v| f.inv(f.from_vector(v)).expect("nonzero")).collect();
        let failures = crate::parallel::chunked_fold(
            labels,
            cfg.workers,
            |range| {
                let mut tr = crate::expsum::Transform::new(ctx);
                let mut bad = 0u64;
                for idx in range {
                    let label = ctx.label_at(idx);
                    let table = tr.run(ctx, &label);
                    for (v, &inv) in inverses.iter().enumerate() {
                        let u = ctx.eps_to_u()[v + 1] as usize;
                        let j = ctx.label_index(&ctx.act(&label, inv)) as usize;
                        if table[u * p..(u + 1) * p] != at_one[j * p..(j + 1) * p] {
                            bad += 1;
                        }
                    }
                }
                bad
            },
            |a, b| *a += b,
        );
        let mut o = Outcome::default();
        o.check("(label, eps) pairs breaking the normalization identity", 0, failures);
        Ok(o)
    }

    fn mindist(&mut self) -> Result<Outcome> {
        let (cfg, ctx) = (self.cfg, self.ctx);
        let d = code::min_distance(ctx, cfg.workers, cfg.strategy, true, &cfg.budget)?;
        match predicted::min_distance(&cfg.params) {
            Some(e) => {
                let mut o = Outcome::default();
                o.check("minimum distance", e, d);
                Ok(o)
            }
            None => Ok(Outcome::not_asserted(format!("minimum distance {d}; no closed form for these parameters"))),
        }
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.require_strict()?;
    let ctx = cfg.context()?;
    let mut v = Verifier {
        cfg,
        ctx: &ctx,
        ranks: None,
    };
    let mut targets = cfg.targets.clone();
    targets.sort();
    targets.dedup();
    let mut reports = Vec::new();
    for target in targets {
        let start = Instant::now();
        let (status, o) = match v.run(target) {
            Ok(o) if o.not_asserted => (Status::NotAsserted, o),
            Ok(o) if o.mismatches.is_empty() => (Status::Pass, o),
            Ok(o) => (Status::Fail, o),
            Err(e @ Error::BudgetExceeded { .. }) => (Status::SkippedBudget, Outcome::not_asserted(e.to_string())),
            Err(e) => (
                Status::Fail,
                Outcome {
                    notes: vec![e.to_string()],
                    ..Outcome::default()
                },
            ),
        };
        reports.push(TargetReport {
            target,
            status,
            elapsed_ms: start.elapsed().as_millis(),
            mismatches: o.mismatches,
            notes: o.notes,
        });
    }
    Ok(VerifyReport {
        params: cfg.params,
        targets: reports,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamReport {
    pub p: u32,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub gcd_m_k: u64,
    pub gcd_m_minus_k_2k: u64,
    pub d: u32,
    pub strict: bool,
    /// k = m - t with t odd and coprime to m, which forces d = 1
    pub odd_coprime_offset: bool,
}

pub fn cmd_validate(p: u32, m: u32, k: u32) -> Result<ParamReport> {
    let params = KasamiParams::new(p, m, k)?;
    let t = (m - k) as u64;
    Ok(ParamReport {
        p,
        m,
        k,
        n: params.n,
        gcd_m_k: fp::gcd(m as u64, k as u64),
        gcd_m_minus_k_2k: fp::gcd(t, 2 * k as u64),
        d: params.d,
        strict: params.strict,
        odd_coprime_offset: t % 2 == 1 && fp::gcd(t, m as u64) == 1,
    })
}

impl ParamReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => format!(
                "p,m,k,n,gcd_m_k,gcd_m_minus_k_2k,d,strict,odd_coprime_offset\n{},{},{},{},{},{},{},{},{}\n",
                self.p, self.m, self.k, self.n, self.gcd_m_k, self.gcd_m_minus_k_2k, self.d, self.strict, self.odd_coprime_offset
            ),
            Format::Text => {
                let mut s = format!(
                    "p={} m={} k={} n={}\ngcd(m, k) = {}, gcd(m - k, 2k) = {}\nd = {}, {}\n",
                    self.p,
                    self.m,
                    self.k,
                    self.n,
                    self.gcd_m_k,
                    self.gcd_m_minus_k_2k,
                    self.d,
                    if self.strict { "strict" } else { "non-strict" }
                );
                if self.odd_coprime_offset {
                    s.push_str(&format!("k = m - {} with m - k odd and coprime to m, so d = 1\n", self.m - self.k));
                }
                s
            }
        }
    }
}

fn field_table(ctx: &KasamiCtx, format: Format) -> String {
    let f = &ctx.field;
    let ord = f.group_order();
    let zech = f.zech_table();
    let row = |t: u32| {
        let x = f.alpha_pow(t as i64);
        let z = zech[t as usize];
        (t, f.to_vector(x), f.coeffs(x), (z != ZERO_LOG).then_some(z))
    };
    match format {
        Format::Json => {
            let rows: Vec<_> = (0..ord)
                .map(|t| {
                    let (t, v, c, z) = row(t);
                    json!({"log": t, "vector": v, "coeffs": c, "zech": z})
                })
                .collect();
            let doc = json!({
                "p": f.p(), "n": f.n(), "modulus": f.modulus(), "alpha": f.alpha_coeffs(), "rows": rows
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut s = if format == Format::Csv {
                String::from("log,vector,coeffs,zech\n")
            } else {
                format!(
                    "F_{}^{}  modulus {:?}  alpha {:?}\nlog vector coeffs zech\n",
                    f.p(),
                    f.n(),
                    f.modulus(),
                    f.alpha_coeffs()
                )
            };
            for t in 0..ord {
                let (t, v, c, z) = row(t);
                let c = c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
                let z = z.map(|z| z.to_string()).unwrap_or_else(|| "-".into());
                s.push_str(&[t.to_string(), v.to_string(), c, z].join(sep));
                s.push('\n');
            }
            s
        }
    }
}

fn render_weights(params: &KasamiParams, wd: &WeightDistribution, format: Format) -> String {
    let ex = WeightExport::new(params, wd);
    match format {
        Format::Json => serde_json::to_string_pretty(&ex).expect("serializable") + "\n",
        Format::Csv => wd.to_csv(),
        Format::Text => {
            let mut s = String::from("weight count\n");
            for (w, c) in &wd.entries {
                s.push_str(&format!("{w} {c}\n"));
            }
            s.push_str(&format!("matches_table1: {}\n", ex.matches_table1));
            s
        }
    }
}

fn render_census(ex: &CensusExport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(ex).expect("serializable") + "\n",
        Format::Csv => ex.to_csv(),
        Format::Text => {
            let mut s = format!("{} census, verified against {}\n", ex.kind, ex.verified_against);
            for e in &ex.entries {
                let key = match serde_json::from_value::<CycInt>(e.key.clone()) {
                    Ok(c) => c.to_string(),
                    Err(_) => e.key.to_string(),
                };
                s.push_str(&format!("{key} {}\n", e.count));
            }
            s
        }
    }
}

fn rank_export(cfg: &RunConfig, ctx: &KasamiCtx) -> Result<CensusExport> {
    let rc = census::rank_census(ctx, cfg.workers);
    let verified = cfg.params.strict
        && predicted::class_distribution(&cfg.params)?
            .into_iter()
            .all(|(key, c)| rc.by_class.get(&key).map(big).unwrap_or_default() == c);
    Ok(CensusExport::rank(&cfg.params, &rc, verified))
}

fn correlation_export(cfg: &RunConfig, ctx: &KasamiCtx, brute: bool) -> Result<CensusExport> {
    let spectrum: CorrelationSpectrum = if brute {
        seq::brute_correlation_spectrum(ctx, cfg.workers, &cfg.budget)?
    } else {
        seq::correlation_distribution(ctx, cfg.workers, &cfg.budget)?
    };
    let verified = cfg.params.strict && spectrum.matches(&predicted::correlation_distribution(&cfg.params)?);
    Ok(CensusExport::cycint(&cfg.params, "correlation", &spectrum.entries, if verified { "Table4" } else { "none" }))
}

fn weights(cfg: &RunConfig, ctx: &KasamiCtx, brute: bool) -> Result<WeightDistribution> {
    if brute {
        code::weight_distribution_brute(ctx, cfg.workers, &cfg.budget)
    } else {
        code::weight_distribution_fast(ctx, cfg.workers, cfg.strategy, &cfg.budget)
    }
}

fn sequences(cfg: &RunConfig, ctx: &KasamiCtx) -> Result<String> {
    let period = ctx.q() as u128 - 1;
    cfg.budget
        .check_ops("sequence export", cfg.params.label_count() as u128 * period)?;
    Ok(match cfg.format {
        Format::Json => {
            let text = seq::export_sequences(ctx);
            let lines: Vec<&str> = text.lines().skip(1).collect();
            serde_json::to_string_pretty(&json!({"params": cfg.params, "sequences": lines})).expect("serializable") + "\n"
        }
        _ => seq::export_sequences(ctx),
    })
}

/// What an export writes; structured formats default to JSON when text is asked.
pub fn cmd_export(cfg: &RunConfig, what: ExportKind) -> Result<String> {
    cfg.require_strict()?;
    let ctx = cfg.context()?;
    let format = if cfg.format == Format::Text && what != ExportKind::Sequences {
        Format::Json
    } else {
        cfg.format
    };
    match what {
        ExportKind::Weights => Ok(render_weights(&cfg.params, &weights(cfg, &ctx, false)?, format)),
        ExportKind::Spectrum => Ok(render_census(&correlation_export(cfg, &ctx, false)?, format)),
        ExportKind::Sequences => sequences(cfg, &ctx),
        ExportKind::Census => Ok(render_census(&rank_export(cfg, &ctx)?, format)),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate(a) => {
            print!("{}", cmd_validate(a.params.p, a.params.m, a.params.k)?.render(a.format));
            Ok(0)
        }
        Command::FieldTable(a) => {
            let cfg = RunConfig::from_args(&a)?;
            emit(&cfg.out, &field_table(&cfg.context()?, cfg.format))?;
            Ok(0)
        }
        Command::RankCensus(a) => {
            let cfg = RunConfig::from_args(&a)?;
            let ctx = cfg.context()?;
            emit(&cfg.out, &render_census(&rank_export(&cfg, &ctx)?, cfg.format))?;
            Ok(0)
        }
        Command::WeightDist { common, brute } => {
            let cfg = RunConfig::from_args(&common)?;
            let ctx = cfg.context()?;
            emit(&cfg.out, &render_weights(&cfg.params, &weights(&cfg, &ctx, brute)?, cfg.format))?;
            Ok(0)
        }
        Command::MinDist(a) => {
            let cfg = RunConfig::from_args(&a)?;
            let ctx = cfg.context()?;
            let d = code::min_distance(&ctx, cfg.workers, cfg.strategy, cfg.allow_non_strict, &cfg.budget)?;
            let predicted = predicted::min_distance(&cfg.params);
            let text = match cfg.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({"params": cfg.params, "min_distance": d, "predicted": predicted}))
                        .expect("serializable")
                        + "\n"
                }
                Format::Csv => format!("min_distance,predicted\n{d},{}\n", predicted.map(|v| v.to_string()).unwrap_or_default()),
                Format::Text => match predicted {
                    Some(e) => format!("minimum distance {d} (closed form {e})\n"),
                    None => format!("minimum distance {d}\n"),
                },
            };
            emit(&cfg.out, &text)?;
            Ok(0)
        }
        Command::SeqFamily(a) => {
            let cfg = RunConfig::from_args(&a)?;
            let ctx = cfg.context()?;
            emit(&cfg.out, &sequences(&cfg, &ctx)?)?;
            Ok(0)
        }
        Command::CorrDist { common, brute } => {
            let cfg = RunConfig::from_args(&common)?;
            cfg.require_strict()?;
            let ctx = cfg.context()?;
            emit(&cfg.out, &render_census(&correlation_export(&cfg, &ctx, brute)?, cfg.format))?;
            Ok(0)
        }
        Command::Verify {
            common,
            targets,
            perturb_table1,
        } => {
            let mut cfg = RunConfig::from_args(&common)?;
            if let Some(t) = targets {
                cfg.targets = t;
            }
            cfg.table1_perturbation = perturb_table1;
            let report = cmd_verify(&cfg)?;
            emit(&cfg.out, &report.render(cfg.format))?;
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Export { common, what } => {
            let cfg = RunConfig::from_args(&common)?;
            emit(&cfg.out, &cmd_export(&cfg, what)?)?;
            Ok(0)
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let r = cmd_validate(3, 2, 1).unwrap();
        assert!(r.strict && r.d == 1 && r.odd_coprime_offset);
        assert!(!cmd_validate(3, 3, 1).unwrap().strict);
        let r = cmd_validate(3, 3, 2).unwrap();
        assert!(r.strict && r.d == 1);
        assert!(cmd_validate(4, 2, 1).is_err());
        assert!(cmd_validate(3, 2, 2).is_err());
    }

    #[test]
    fn verify_quick_targets() {
        let mut cfg = RunConfig::new(KasamiParams::new(3, 2, 1).unwrap());
        cfg.targets = vec![Target::Table2, Target::Prop3, Target::Prop4, Target::Mindist];
        let r = cmd_verify(&cfg).unwrap();
        assert!(r.all_pass(), "{}", r.render(Format::Text));
        assert!(r.targets.iter().all(|t| t.status == Status::Pass));
    }

    #[test]
    fn perturbed_table_fails() {
        let mut cfg = RunConfig::new(KasamiParams::new(3, 2, 1).unwrap());
        cfg.targets = vec![Target::Table1];
        cfg.table1_perturbation = Some(1);
        let r = cmd_verify(&cfg).unwrap();
        let t = r.get(Target::Table1).unwrap();
        assert_eq!(t.status, Status::Fail);
        assert_eq!(
            t.mismatches[0],
            Mismatch {
                what: "multiplicity of weight 54".into(),
                expected: "16641".into(),
                computed: "16640".into()
            }
        );
    }

    #[test]
    fn non_strict_needs_flag() {
        let cfg = RunConfig::new(KasamiParams::new(3, 3, 1).unwrap());
        assert!(matches!(cmd_verify(&cfg), Err(Error::NonStrict { .. })));
    }

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(run(["kasami", "validate", "--p", "3"]), 2);
        assert_eq!(run(["kasami", "validate", "--p", "4", "--m", "2", "--k", "1"]), 2);
        assert_eq!(run(["kasami", "verify", "--p", "3", "--m", "2", "--k", "1", "--workers", "0"]), 2);
    }
}
