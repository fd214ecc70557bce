//! Seeded Monte Carlo trials, bound tables and oracle cross-checks.
//!
//! Trial `i` draws everything from `trial_rng(seed, i)`, and tallies merge
//! by addition, so results do not depend on the worker count or on the
//! order in which trials finish.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::channel::{qsc_rank_channel, random_message, sample_erasure_scenario, sample_rank_error, trial_rng};
use crate::codes::{rank_distance, InterleavedCode, MessageTuple};
use crate::erasure::decode_error_erasure;
use crate::error::{Error, Result};
use crate::ffield::Field;
use crate::interp::{self, decode_report, radius, radius_unique, DecodeOutcome, FailureReason, Mode, DEFAULT_LIST_CAP};
use crate::linalg;
use crate::reference::{bounds, rr_fails, sb_fails, BoundsReport};

/// z for a two-sided 95% interval.
pub const WILSON_Z: f64 = 1.96;

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    /// Uniform errors of rank exactly `t`.
    FixedT(usize),
    /// Rank drawn from `Bin(n, p)`.
    Qsc(f64),
    Erasure { rho: Vec<usize>, gamma: usize, t: usize },
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: Vec<usize>,
    pub channel: ChannelSpec,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// 0 uses every available core, 1 runs on the calling thread.
    pub workers: usize,
    /// Also evaluate the prior-art predicates on rank-`tau_u` draws.
    pub compare: bool,
    pub list_cap: u64,
}

impl ExperimentConfig {
    pub fn new(q: u32, m: usize, n: usize, k: &[usize], channel: ChannelSpec) -> ExperimentConfig {
        ExperimentConfig {
            q,
            m,
            n,
            k: k.to_vec(),
            channel,
            trials: 1000,
            seed: 0,
            mode: Mode::Unique,
            workers: 0,
            compare: false,
            list_cap: DEFAULT_LIST_CAP,
        }
    }

    pub fn code(&self) -> Result<InterleavedCode> {
        InterleavedCode::new(&Field::new(self.q, self.m)?, self.n, &self.k)
    }

    /// Builds the code and checks the channel against it.
    pub fn validate(&self) -> Result<InterleavedCode> {
        if self.trials == 0 {
            return Err(Error::InvalidParameters("trials must be at least 1".into()));
        }
        let code = self.code()?;
        let max_t = self.n.min(code.s() * self.m);
        match &self.channel {
            ChannelSpec::FixedT(t) if *t > max_t => Err(Error::InvalidParameters(format!(
                "t = {t} exceeds min(n, s m) = {max_t}"
            ))),
            ChannelSpec::Qsc(p) if !(0.0..=1.0).contains(p) => {
                Err(Error::InvalidParameters(format!("p_qsc = {p} outside [0, 1]")))
            }
            ChannelSpec::Erasure { rho, gamma, t } => {
                if self.n != self.m {
                    return Err(Error::InvalidErasures("erasure decoding needs n = m".into()));
                }
                if rho.len() != code.s() {
                    return Err(Error::InvalidErasures(format!(
                        "{} row-erasure ranks for interleaving order {}",
                        rho.len(),
                        code.s()
                    )));
                }
                if *gamma > self.n || *t > max_t {
                    return Err(Error::InvalidErasures(format!(
                        "gamma = {gamma} or t = {t} too large for n = {}",
                        self.n
                    )));
                }
                augmented(&code, rho, *gamma)?;
                Ok(code)
            }
            _ => Ok(code),
        }
    }
}

fn augmented(code: &InterleavedCode, rho: &[usize], gamma: usize) -> Result<InterleavedCode> {
    let dims: Vec<usize> = code.k().iter().zip(rho).map(|(k, r)| k + r + gamma).collect();
    if let Some(d) = dims.iter().find(|&&d| d > code.n()) {
        return Err(Error::RadiusInfeasible(format!(
            "augmented dimension {d} exceeds n = {}",
            code.n()
        )));
    }
    code.with_dims(&dims)
}

/// Outcome classes. They partition the trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub trials: u64,
    pub success: u64,
    /// Declared failure, or an empty list.
    pub failure: u64,
    /// A unique answer other than the sent message, or a list without it.
    pub wrong: u64,
    pub overflow: u64,
}

impl Counters {
    fn merge(&mut self, o: &Counters) {
        self.trials += o.trials;
        self.success += o.success;
        self.failure += o.failure;
        self.wrong += o.wrong;
        self.overflow += o.overflow;
    }

    pub fn block_errors(&self) -> u64 {
        self.trials - self.success
    }
}

/// Co-measured ranks and predicates on draws whose error rank equals
/// `tau_u`. Implication counters name the antecedent first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaCounters {
    /// Trials where everything below was evaluated.
    pub evaluated: u64,
    pub rk_q_deficient: u64,
    pub q_bar0_deficient: u64,
    pub rr_fails: u64,
    pub sb_fails: u64,
    pub sb_rr_disagree: u64,
    /// `rk Q` deficient while `rk Q_bar_0 = s`.
    pub q_not_q_bar0: u64,
    /// `rk Q_bar_0 < s` without `rr_fails`.
    pub q_bar0_not_rr: u64,
    /// `rk Q` deficient without `rr_fails`.
    pub q_not_rr: u64,
    /// `rr_fails` with full `rk Q`: the converse that is not claimed.
    pub rr_not_q: u64,
    /// Interpolation kernel dimensions seen.
    pub d_i: BTreeMap<usize, u64>,
}

impl LemmaCounters {
    fn merge(&mut self, o: &LemmaCounters) {
        self.evaluated += o.evaluated;
        self.rk_q_deficient += o.rk_q_deficient;
        self.q_bar0_deficient += o.q_bar0_deficient;
        self.rr_fails += o.rr_fails;
        self.sb_fails += o.sb_fails;
        self.sb_rr_disagree += o.sb_rr_disagree;
        self.q_not_q_bar0 += o.q_not_q_bar0;
        self.q_bar0_not_rr += o.q_bar0_not_rr;
        self.q_not_rr += o.q_not_rr;
        self.rr_not_q += o.rr_not_q;
        for (d, c) in &o.d_i {
            *self.d_i.entry(*d).or_default() += c;
        }
    }

    /// Violations of the proven relations. They are asserted only for
    /// equal dimensions.
    pub fn violations(&self, equal_k: bool) -> u64 {
        if !equal_k {
            return 0;
        }
        self.sb_rr_disagree + self.q_not_q_bar0 + self.q_bar0_not_rr + self.q_not_rr
    }

    /// Fraction of `rr_fails` draws that the new decoder still decodes.
    pub fn converse_gap(&self) -> f64 {
        if self.rr_fails == 0 {
            0.0
        } else {
            self.rr_not_q as f64 / self.rr_fails as f64
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointCounts {
    pub trials: u64,
    pub success: u64,
}

#[derive(Clone, Debug, Default)]
struct Tally {
    counters: Counters,
    per_t: BTreeMap<usize, PointCounts>,
    lemma: LemmaCounters,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.counters.merge(&o.counters);
        for (t, p) in o.per_t {
            let e = self.per_t.entry(t).or_default();
            e.trials += p.trials;
            e.success += p.success;
        }
        self.lemma.merge(&o.lemma);
        self
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub counters: Counters,
    /// Trials and successes by error rank.
    pub per_t: BTreeMap<usize, PointCounts>,
    pub lemma: Option<LemmaCounters>,
    /// Formulas at the channel's `t` (or `tau_u` for the qsc channel), on
    /// the augmented code for erasure runs.
    pub bounds: BoundsReport,
    /// Decoding radius of the mode, on the decoded code.
    pub tau: usize,
    /// Per-point bounds on the block-error rate, averaged over the channel.
    pub bound_lo: Option<f64>,
    pub bound_alt: f64,
    /// Probability that the channel rank exceeds `tau`.
    pub p_exceed: f64,
    pub elapsed: Duration,
}

impl ExperimentResult {
    pub fn failure_rate(&self) -> f64 {
        self.counters.block_errors() as f64 / self.counters.trials as f64
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.counters.block_errors(), self.counters.trials)
    }

    pub fn half_width(&self) -> f64 {
        let (lo, hi) = self.wilson();
        (hi - lo) / 2.0
    }
}

/// Wilson score interval at `WILSON_Z`.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn binomial_pmf(n: usize, t: usize, p: f64) -> f64 {
    if t > n {
        return 0.0;
    }
    let mut c = 1.0;
    for i in 0..t {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(t as i32) * (1.0 - p).powi((n - t) as i32)
}

/// Block-error bounds for error rank `t`: zero inside half the minimum
/// distance, one beyond the radius, the closed forms in between. Where the
/// received-word bound is undefined it is replaced by one.
pub fn failure_bounds_at(code: &InterleavedCode, mode: Mode, t: usize) -> (Option<f64>, f64) {
    let tau = radius(code, mode);
    if t > tau {
        return (Some(1.0), 1.0);
    }
    if t <= (code.min_distance() - 1) / 2 {
        return (Some(0.0), 0.0);
    }
    let b = bounds(code, t);
    (Some(b.p_lo.unwrap_or(1.0)), b.p_alt)
}

fn qsc_bounds(code: &InterleavedCode, mode: Mode, p: f64) -> (Option<f64>, f64, f64) {
    let n = code.n();
    let tau = radius(code, mode);
    let (mut lo, mut alt, mut exceed) = (0.0, 0.0, 0.0);
    for t in 0..=n {
        let w = binomial_pmf(n, t, p);
        let (l, a) = failure_bounds_at(code, mode, t.min(code.s() * code.field().m()));
        lo += w * l.unwrap_or(1.0);
        alt += w * a;
        if t > tau {
            exceed += w;
        }
    }
    (Some(lo.min(1.0)), alt.min(1.0), exceed)
}

fn classify(outcome: &DecodeOutcome, msg: &MessageTuple) -> Counters {
    let mut c = Counters {
        trials: 1,
        ..Counters::default()
    };
    match outcome {
        DecodeOutcome::Unique(m) if m == msg => c.success = 1,
        DecodeOutcome::Unique(_) => c.wrong = 1,
        DecodeOutcome::List(l) if l.contains(msg) => c.success = 1,
        DecodeOutcome::List(l) if l.is_empty() => c.failure = 1,
        DecodeOutcome::List(_) => c.wrong = 1,
        DecodeOutcome::Failure(FailureReason::ListOverflow) => c.overflow = 1,
        DecodeOutcome::Failure(_) => c.failure = 1,
    }
    c
}

struct Prepared<'a> {
    cfg: &'a ExperimentConfig,
    code: InterleavedCode,
    tau_u: usize,
}

impl Prepared<'_> {
    fn trial(&self, index: u64) -> Result<Tally> {
        let cfg = self.cfg;
        let code = &self.code;
        let field = code.field();
        let (s, n) = (code.s(), code.n());
        let mut rng = trial_rng(cfg.seed, index);
        let msg = random_message(code, &mut rng);
        let c = code.encode(&msg)?;
        let (e, info, t) = match &cfg.channel {
            ChannelSpec::FixedT(t) => (sample_rank_error(field, s, n, *t, &mut rng)?, None, *t),
            ChannelSpec::Qsc(p) => {
                let d = qsc_rank_channel(field, s, n, *p, &mut rng)?;
                (d.error, None, d.t_full)
            }
            ChannelSpec::Erasure { rho, gamma, t } => {
                let d = sample_erasure_scenario(code, rho, *gamma, *t, &mut rng)?;
                (d.error, d.erasures, *t)
            }
        };
        let r = linalg::add(field, &c, &e);

        let mut tally = Tally::default();
        let mut report = None;
        let outcome = match info {
            Some(info) => decode_error_erasure(code, &r, &info, cfg.mode, cfg.list_cap)?,
            None => {
                let rep = decode_report(code, &r, cfg.mode, cfg.list_cap)?;
                let out = rep.outcome.clone();
                report = Some(rep);
                out
            }
        };
        tally.counters = classify(&outcome, &msg);
        tally.per_t.insert(
            t,
            PointCounts {
                trials: 1,
                success: tally.counters.success,
            },
        );

        let feasible = t >= 1 && t == self.tau_u && code.k().iter().all(|&k| k + t < n);
        if cfg.compare && feasible && !matches!(cfg.channel, ChannelSpec::Erasure { .. }) {
            let rep = match (cfg.mode, report) {
                (Mode::Unique, Some(rep)) => rep,
                _ => decode_report(code, &r, Mode::Unique, cfg.list_cap)?,
            };
            let q_def = rep.rank_q < rep.full_rank;
            let q0_def = rep.rank_q_bar0 < s;
            let rr = rr_fails(code, &r, t)?;
            let sb = sb_fails(code, &r, t)?;
            let l = &mut tally.lemma;
            l.evaluated = 1;
            l.rk_q_deficient = u64::from(q_def);
            l.q_bar0_deficient = u64::from(q0_def);
            l.rr_fails = u64::from(rr);
            l.sb_fails = u64::from(sb);
            l.sb_rr_disagree = u64::from(rr != sb);
            l.q_not_q_bar0 = u64::from(q_def && !q0_def);
            l.q_bar0_not_rr = u64::from(q0_def && !rr);
            l.q_not_rr = u64::from(q_def && !rr);
            l.rr_not_q = u64::from(rr && !q_def);
            l.d_i.insert(rep.d_i, 1);
        }
        Ok(tally)
    }
}

#[cfg(feature = "parallel")]
fn run_trials(p: &Prepared<'_>) -> Result<Tally> {
    use rayon::prelude::*;
    let go = || {
        (0..p.cfg.trials)
            .into_par_iter()
            .map(|i| p.trial(i))
            .try_fold(Tally::default, |acc, t| t.map(|t| acc.merge(t)))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    };
    match p.cfg.workers {
        0 => go(),
        1 => run_sequential(p),
        w => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?
            .install(go),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_trials(p: &Prepared<'_>) -> Result<Tally> {
    run_sequential(p)
}

fn run_sequential(p: &Prepared<'_>) -> Result<Tally> {
    (0..p.cfg.trials).try_fold(Tally::default(), |acc, i| Ok(acc.merge(p.trial(i)?)))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let code = cfg.validate()?;
    let prepared = Prepared {
        cfg,
        tau_u: radius_unique(&code),
        code,
    };
    let start = Instant::now();
    let tally = run_trials(&prepared)?;
    let elapsed = start.elapsed();
    let code = &prepared.code;

    let (report, tau, bound_lo, bound_alt, p_exceed) = match &cfg.channel {
        ChannelSpec::FixedT(t) => {
            let tau = radius(code, cfg.mode);
            let (lo, alt) = failure_bounds_at(code, cfg.mode, *t);
            (bounds(code, *t), tau, lo, alt, if *t > tau { 1.0 } else { 0.0 })
        }
        ChannelSpec::Qsc(p) => {
            let (lo, alt, ex) = qsc_bounds(code, cfg.mode, *p);
            (bounds(code, prepared.tau_u), radius(code, cfg.mode), lo, alt, ex)
        }
        ChannelSpec::Erasure { rho, gamma, t } => {
            let aug = augmented(code, rho, *gamma)?;
            let tau = radius(&aug, cfg.mode);
            let (lo, alt) = failure_bounds_at(&aug, cfg.mode, *t);
            (bounds(&aug, *t), tau, lo, alt, if *t > tau { 1.0 } else { 0.0 })
        }
    };
    Ok(ExperimentResult {
        counters: tally.counters,
        per_t: tally.per_t,
        lemma: cfg.compare.then_some(tally.lemma),
        bounds: report,
        tau,
        bound_lo,
        bound_alt,
        p_exceed,
        elapsed,
    })
}

pub const CSV_HEADER: [&str; 12] = [
    "point",
    "trials",
    "successes",
    "failures",
    "wrong",
    "overflow",
    "failure_rate",
    "wilson_lo",
    "wilson_hi",
    "bound_lo",
    "bound_alt",
    "p_exceed",
];

/// One row per `(label, result)`. Timing is left out so equal inputs give
/// equal bytes.
pub fn results_csv(rows: &[(String, ExperimentResult)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for (label, r) in rows {
        let c = &r.counters;
        let (lo, hi) = r.wilson();
        w.write_record([
            label.clone(),
            c.trials.to_string(),
            c.success.to_string(),
            c.failure.to_string(),
            c.wrong.to_string(),
            c.overflow.to_string(),
            r.failure_rate().to_string(),
            lo.to_string(),
            hi.to_string(),
            r.bound_lo.map(|b| b.to_string()).unwrap_or_default(),
            r.bound_alt.to_string(),
            r.p_exceed.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Runs `base` once per channel in `points`, labelled by the channel value.
pub fn run_sweep(
    base: &ExperimentConfig,
    points: &[ChannelSpec],
) -> Result<Vec<(String, ExperimentResult)>> {
    points
        .iter()
        .map(|ch| {
            let label = match ch {
                ChannelSpec::FixedT(t) => t.to_string(),
                ChannelSpec::Qsc(p) => p.to_string(),
                ChannelSpec::Erasure { t, .. } => t.to_string(),
            };
            let cfg = ExperimentConfig {
                channel: ch.clone(),
                ..base.clone()
            };
            Ok((label, run_experiment(&cfg)?))
        })
        .collect()
}

/// Exhaustive list-decoding cross-check on a tiny code.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    /// Error ranks, used cyclically.
    pub ts: Vec<usize>,
    pub list_cap: u64,
}

#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub trials: u64,
    pub tau: usize,
    pub mismatches: u64,
    pub overflows: u64,
    /// Trials whose list holds the sent message.
    pub contains_sent: u64,
    pub list_sizes: BTreeMap<usize, u64>,
    pub first_mismatch: Option<String>,
}

/// Largest codebook the oracle enumerates.
pub const ORACLE_CODEBOOK_LIMIT: u64 = 1 << 20;

pub fn run_oracle_check(cfg: &OracleConfig) -> Result<OracleReport> {
    let code = InterleavedCode::new(&Field::new(cfg.q, cfg.m)?, cfg.n, &cfg.k)?;
    if cfg.ts.is_empty() {
        return Err(Error::InvalidParameters("no error ranks given".into()));
    }
    let size = code.codebook_size(ORACLE_CODEBOOK_LIMIT).ok_or_else(|| {
        Error::InvalidParameters(format!(
            "codebook larger than {ORACLE_CODEBOOK_LIMIT} words"
        ))
    })?;
    let field = code.field();
    let (s, n) = (code.s(), code.n());
    let tau = interp::radius_list(&code);
    let book: Vec<_> = (0..size)
        .map(|i| {
            let m = code.message_at(i);
            code.encode(&m).map(|c| (m, c))
        })
        .collect::<Result<_>>()?;

    let mut rep = OracleReport {
        tau,
        ..OracleReport::default()
    };
    for i in 0..cfg.trials {
        let t = cfg.ts[(i % cfg.ts.len() as u64) as usize];
        let mut rng = trial_rng(cfg.seed, i);
        let msg = random_message(&code, &mut rng);
        let e = sample_rank_error(field, s, n, t, &mut rng)?;
        let r = linalg::add(field, &code.encode(&msg)?, &e);
        let mut expected = Vec::new();
        for (m, c) in &book {
            if rank_distance(field, c, &r)? <= tau {
                expected.push(m.clone());
            }
        }
        rep.trials += 1;
        match interp::decode(&code, &r, Mode::List, cfg.list_cap)? {
            DecodeOutcome::List(mut got) => {
                if got.contains(&msg) {
                    rep.contains_sent += 1;
                }
                *rep.list_sizes.entry(got.len()).or_default() += 1;
                got.sort();
                expected.sort();
                if got != expected {
                    rep.mismatches += 1;
                    rep.first_mismatch.get_or_insert_with(|| {
                        format!(
                            "trial {i}, t = {t}: decoder listed {}, ball holds {}",
                            got.len(),
                            expected.len()
                        )
                    });
                }
            }
            DecodeOutcome::Failure(FailureReason::ListOverflow) => rep.overflows += 1,
            other => {
                rep.mismatches += 1;
                rep.first_mismatch
                    .get_or_insert_with(|| format!("trial {i}, t = {t}: unexpected {other:?}"));
            }
        }
    }
    Ok(rep)
}

/// Unique decoding of rank-`tau_u` draws with the predicates co-measured.
pub fn lemma_config(q: u32, m: usize, n: usize, k: &[usize]) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(q, m, n, k, ChannelSpec::FixedT(0));
    let tau = radius_unique(&cfg.code()?);
    cfg.channel = ChannelSpec::FixedT(tau);
    cfg.compare = true;
    Ok(cfg)
}
