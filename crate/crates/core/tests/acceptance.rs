//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::time::Instant;

use igab::channel::{random_message, sample_rank_error, trial_rng, ErasureInfo};
use igab::codes::InterleavedCode;
use igab::erasure::decode_error_erasure;
use igab::experiment::{
    lemma_config, run_experiment, run_oracle_check, run_sweep, ChannelSpec, ExperimentConfig,
    ExperimentResult, LemmaCounters, OracleConfig,
};
use igab::ffield::{find_normal_basis, Elem, Field};
use igab::interp::{decode, interpolate, radius_list, Mode, DEFAULT_LIST_CAP};
use igab::linalg;
use igab::linpoly::LinPoly;
use igab::reference::bounds;

const SEED: u64 = 20_240_601;

/// Relative tolerance on the printed bound values.
const BOUND_REL_TOL: f64 = 0.01;
/// Absolute tolerance on the received-word bound.
const P_LO_ABS_TOL: f64 = 1e-4;
const P_ALT_EXAMPLE: f64 = 2.44e-4;
const P_LO_EXAMPLE: f64 = 0.04632;
const LIST_EXCESS_EXAMPLE: f64 = 6.104e-5;
/// Statistical slack, in Wilson half-widths.
const WILSON_SLACK: f64 = 3.0;

const TRIALS_EXAMPLE: u64 = 100_000;
const TRIALS_BMD: u64 = 10_000;
const TRIALS_INTERP: u64 = 1_000;
const TRIALS_ORACLE: u64 = 200;
const TRIALS_LEMMA: u64 = 1_000;
const TRIALS_ERASURE: u64 = 1_000;
const TRIALS_QSC: u64 = 10_000;

fn base_config(channel: ChannelSpec, trials: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(2, 7, 7, &[2, 2], channel);
    cfg.trials = trials;
    cfg.seed = SEED;
    cfg
}

fn within_bound(r: &ExperimentResult, bound: f64) -> bool {
    r.failure_rate() <= bound + WILSON_SLACK * r.half_width()
}

fn rate(r: &ExperimentResult) -> String {
    let (lo, hi) = r.wilson();
    format!(
        "{}/{} = {:.3e} [{:.3e}, {:.3e}]",
        r.counters.block_errors(),
        r.counters.trials,
        r.failure_rate(),
        lo,
        hi
    )
}

fn criterion_1() -> (bool, String) {
    let code = InterleavedCode::new(&Field::new(2, 7).unwrap(), 7, &[2, 2]).unwrap();
    let start = Instant::now();
    let b = bounds(&code, 3);
    let secs = start.elapsed().as_secs_f64();
    let p_lo = b.p_lo.unwrap_or(f64::NAN);
    let ok = (b.p_alt - P_ALT_EXAMPLE).abs() <= BOUND_REL_TOL * P_ALT_EXAMPLE
        && (p_lo - P_LO_EXAMPLE).abs() <= P_LO_ABS_TOL
        && b.avg_list_excess < LIST_EXCESS_EXAMPLE * (1.0 + BOUND_REL_TOL)
        && secs < 1.0;
    (
        ok,
        format!(
            "p_alt = {:.4e}, p_lo = {:.5}, list excess = {:.4e}, {secs:.1e} s",
            b.p_alt, p_lo, b.avg_list_excess
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let r = run_experiment(&base_config(ChannelSpec::FixedT(3), TRIALS_EXAMPLE)).unwrap();
    let bound = r.bounds.p_alt;
    (
        within_bound(&r, bound) && r.counters.wrong == 0,
        format!(
            "failures {} (bound {bound:.3e}), wrong {}, {:.1} s",
            rate(&r),
            r.counters.wrong,
            r.elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in 0..=2 {
        let r = run_experiment(&base_config(ChannelSpec::FixedT(t), TRIALS_BMD)).unwrap();
        let c = r.counters;
        ok &= c.failure == 0 && c.wrong == 0 && c.overflow == 0 && c.success == c.trials;
        parts.push(format!("t={t}: {} ok", c.success));
    }
    (ok, parts.join(", "))
}

fn criterion_4() -> (bool, String) {
    let sets: [(u32, usize, usize, &[usize]); 6] = [
        (2, 7, 7, &[2, 2]),
        (2, 7, 7, &[1, 3]),
        (2, 6, 6, &[1, 2, 3]),
        (2, 5, 5, &[2]),
        (2, 7, 6, &[2, 2, 2]),
        (3, 4, 4, &[1, 2]),
    ];
    let per_set = TRIALS_INTERP / sets.len() as u64 + 1;
    let (mut trials, mut polys, mut bad) = (0u64, 0u64, 0u64);
    for (si, &(q, m, n, k)) in sets.iter().enumerate() {
        let code = InterleavedCode::new(&Field::new(q, m).unwrap(), n, k).unwrap();
        let f = code.field();
        let tau = radius_list(&code);
        for i in 0..per_set {
            let mut rng = trial_rng(SEED + si as u64, i);
            let msg = random_message(&code, &mut rng);
            let t = (i as usize) % (tau + 1);
            let e = sample_rank_error(f, code.s(), n, t, &mut rng).unwrap();
            let r = linalg::add(f, &code.encode(&msg).unwrap(), &e);
            let sol = interpolate(&code, &r, tau).unwrap();
            for h in 0..sol.d_i() {
                polys += 1;
                if !sol.apply(f, h, &msg).is_zero() {
                    bad += 1;
                }
            }
            trials += 1;
        }
    }
    (
        bad == 0,
        format!("{trials} trials over {} codes, {polys} kernel polynomials, {bad} nonzero", sets.len()),
    )
}

fn criterion_5() -> (bool, String) {
    let start = Instant::now();
    let rep = run_oracle_check(&OracleConfig {
        q: 2,
        m: 4,
        n: 4,
        k: vec![1, 1],
        trials: TRIALS_ORACLE,
        seed: SEED,
        ts: vec![0, 1, 2, 3],
        list_cap: DEFAULT_LIST_CAP,
    })
    .unwrap();
    let secs = start.elapsed().as_secs_f64();
    (
        rep.tau == 2 && rep.mismatches == 0 && rep.overflows == 0 && secs < 60.0,
        format!(
            "tau {}, {} trials, {} mismatches, list sizes {:?}, {secs:.2} s",
            rep.tau, rep.trials, rep.mismatches, rep.list_sizes
        ),
    )
}

/// The seven-point code, and a small field where the predicates do fail.
fn lemma_runs() -> Vec<(String, LemmaCounters)> {
    [(7, 2usize), (4, 1)]
        .iter()
        .map(|&(m, k)| (format!("F_2^{m} k=({k},{k})"), lemma_run(m, k)))
        .collect()
}

fn lemma_run(m: usize, k: usize) -> LemmaCounters {
    let mut cfg = lemma_config(2, m, m, &[k, k]).unwrap();
    cfg.trials = TRIALS_LEMMA;
    cfg.seed = SEED;
    run_experiment(&cfg).unwrap().lemma.unwrap()
}

fn criterion_6(runs: &[(String, LemmaCounters)]) -> (bool, String) {
    let ok = runs
        .iter()
        .all(|(_, l)| l.evaluated == TRIALS_LEMMA && l.sb_rr_disagree == 0);
    let parts: Vec<String> = runs
        .iter()
        .map(|(name, l)| {
            format!(
                "{name}: {} rank-tau trials, sb fails {}, rr fails {}, disagreements {}",
                l.evaluated, l.sb_fails, l.rr_fails, l.sb_rr_disagree
            )
        })
        .collect();
    (ok, parts.join("; "))
}

fn criterion_7(runs: &[(String, LemmaCounters)]) -> (bool, String) {
    let ok = runs.iter().all(|(_, l)| {
        l.evaluated == TRIALS_LEMMA && l.q_not_rr == 0 && l.q_bar0_not_rr == 0 && l.q_not_q_bar0 == 0
    });
    let parts: Vec<String> = runs
        .iter()
        .map(|(name, l)| {
            format!(
                "{name}: rk Q deficient {}, Q_bar_0 deficient {}, rr fails {}, implication breaks {}, \
                 converse gap {}/{} (reported only), d_I {:?}",
                l.rk_q_deficient,
                l.q_bar0_deficient,
                l.rr_fails,
                l.q_not_rr + l.q_bar0_not_rr + l.q_not_q_bar0,
                l.rr_not_q,
                l.rr_fails,
                l.d_i
            )
        })
        .collect();
    (ok, parts.join("; "))
}

fn criterion_8() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in 0..=1 {
        let ch = ChannelSpec::Erasure {
            rho: vec![1, 1],
            gamma: 1,
            t,
        };
        let r = run_experiment(&base_config(ch, TRIALS_ERASURE)).unwrap();
        let bound = r.bounds.p_alt;
        ok &= within_bound(&r, bound);
        parts.push(format!("t={t}: {} (bound {bound:.3e}, tau {})", rate(&r), r.tau));
    }

    let code = InterleavedCode::new(&Field::new(2, 7).unwrap(), 7, &[2, 2]).unwrap();
    let f = code.field();
    let none = ErasureInfo::none(2, 7);
    let mut differ = 0;
    for i in 0..TRIALS_ERASURE {
        let mut rng = trial_rng(SEED ^ 0xe5, i);
        let msg = random_message(&code, &mut rng);
        let e = sample_rank_error(f, 2, 7, (i % 6) as usize, &mut rng).unwrap();
        let r = linalg::add(f, &code.encode(&msg).unwrap(), &e);
        for mode in [Mode::Unique, Mode::List] {
            let plain = decode(&code, &r, mode, DEFAULT_LIST_CAP).unwrap();
            if decode_error_erasure(&code, &r, &none, mode, DEFAULT_LIST_CAP).unwrap() != plain {
                differ += 1;
            }
        }
    }
    ok &= differ == 0;
    parts.push(format!("zero-erasure outcomes differing from plain decoding: {differ}"));
    (ok, parts.join("; "))
}

fn criterion_9() -> (bool, String) {
    let points: Vec<ChannelSpec> = (1..=10).map(|i| ChannelSpec::Qsc(f64::from(i) / 20.0)).collect();
    let rows = run_sweep(&base_config(ChannelSpec::Qsc(0.0), TRIALS_QSC), &points).unwrap();
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut monotone = true;
    let mut prev = 0.0;
    for (_, r) in &rows {
        let dev = (r.failure_rate() - r.p_exceed).abs() / r.half_width().max(f64::MIN_POSITIVE);
        worst = worst.max(dev);
        ok &= dev <= WILSON_SLACK;
        monotone &= r.failure_rate() >= prev;
        prev = r.failure_rate();
    }
    let curve: Vec<String> = rows
        .iter()
        .map(|(p, r)| format!("{p}:{:.4}/{:.4}", r.failure_rate(), r.p_exceed))
        .collect();
    (
        ok,
        format!(
            "max deviation {worst:.2} half-widths, monotone {monotone}, measured/floor {}",
            curve.join(" ")
        ),
    )
}

/// `F_q`-basis of the polynomials of q-degree below `m`.
fn poly_basis(f: &Field) -> Vec<LinPoly> {
    let m = f.m();
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| LinPoly::monomial(f.pow(Elem(f.q()), j as u64), i))
        .collect()
}

fn field_axioms(f: &Field) -> bool {
    let elems: Vec<Elem> = f.elements().collect();
    let m = f.m() as i64;
    for &a in &elems {
        if f.from_coords(&f.coords(a)) != a || f.frobenius(a, m) != a || f.trace(a) >= f.q() {
            return false;
        }
        if !a.is_zero() && f.mul(a, f.inv(a)) != Elem::ONE {
            return false;
        }
        for &b in &elems {
            let ab = f.mul(a, b);
            if ab != f.mul_reference(a, b)
                || ab != f.mul(b, a)
                || f.frobenius(ab, 1) != f.mul(f.frobenius(a, 1), f.frobenius(b, 1))
                || f.frobenius(f.add(a, b), 1) != f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                || f.trace(f.add(a, b)) != (f.trace(a) + f.trace(b)) % f.q()
            {
                return false;
            }
            for &c in &elems {
                if f.mul(ab, c) != f.mul(a, f.mul(b, c))
                    || f.mul(a, f.add(b, c)) != f.add(ab, f.mul(a, c))
                {
                    return false;
                }
            }
        }
    }
    true
}

fn linpoly_axioms(f: &Field, basis: &[LinPoly]) -> bool {
    let elems: Vec<Elem> = f.elements().collect();
    let m = f.m();
    for p in basis {
        for &a in &elems {
            for &b in &elems {
                if p.eval(f, f.add(a, b)) != f.add(p.eval(f, a), p.eval(f, b)) {
                    return false;
                }
            }
        }
        for r in basis {
            let c = r.compose(f, p);
            let reduced = c.mod_xqm(f, m);
            if elems.iter().any(|&x| {
                let direct = r.eval(f, p.eval(f, x));
                c.eval(f, x) != direct || reduced.eval(f, x) != direct
            }) {
                return false;
            }
        }
    }
    true
}

fn all_polys(f: &Field) -> Vec<LinPoly> {
    let m = f.m();
    let order = u64::from(f.order());
    (0..order.pow(m as u32))
        .map(|mut idx| {
            LinPoly::new(
                (0..m)
                    .map(|_| {
                        let c = Elem((idx % order) as u32);
                        idx /= order;
                        c
                    })
                    .collect(),
            )
        })
        .collect()
}

fn criterion_10() -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for m in 1..=5 {
        let f = Field::new(2, m).unwrap();
        let nb = find_normal_basis(&f);
        let basis = poly_basis(&f);
        let axioms = field_axioms(&f) && linpoly_axioms(&f, &basis);
        // both sides are F_q-linear in p, so a basis covers every polynomial
        let reverse = basis.iter().all(|p| common::qreverse_transposes(&f, &nb, p));
        // exhaustive in a up to m = 4, seeded samples beyond
        let outer: Vec<LinPoly> = if m <= 4 {
            all_polys(&f)
        } else {
            let mut rng = trial_rng(SEED, m as u64);
            (0..400)
                .map(|_| LinPoly::new(igab::channel::random_vec(&f, m, &mut rng)))
                .collect()
        };
        let row_space = outer
            .iter()
            .all(|a| basis.iter().all(|b| common::composition_row_space(&f, &nb, a, b)));
        ok &= axioms && reverse && row_space;
        notes.push(format!(
            "m={m}: axioms {axioms}, q-reverse {reverse}, row space {row_space} ({} outer)",
            outer.len()
        ));
    }

    let (mut draws, mut bad_rank, mut bad_key, mut vacuous) = (0, 0, 0, 0);
    for m in 3..=5 {
        let code = InterleavedCode::new(&Field::new(2, m).unwrap(), m, &[1, 1]).unwrap();
        let scenarios: &[(&[usize], usize)] = &[(&[1, 0], 1), (&[1, 1], 0), (&[0, 1], 1), (&[0, 0], 1)];
        for (si, &(rho, gamma)) in scenarios.iter().enumerate() {
            let room = m - 1 - rho.iter().max().unwrap() - gamma;
            for i in 0..50u64 {
                let t = (i as usize) % (room + 1);
                let c = common::erasure_draw(&code, rho, gamma, t, SEED + si as u64, i + 100 * m as u64);
                draws += 1;
                bad_rank += usize::from(c.modified_rank > c.t);
                bad_key += usize::from(!c.key_equation);
                vacuous += usize::from(c.vacuous && c.t > 0);
            }
        }
    }
    ok &= bad_rank == 0 && bad_key == 0;
    notes.push(format!(
        "erasure draws {draws}: modified rank above t {bad_rank}, key equation breaks {bad_key}, \
         vanishing without the error factor at t>0 {vacuous}"
    ));
    (ok, notes.join("; "))
}

fn main() {
    let mut failed = Vec::new();
    let mut report = |n: u32, f: &dyn Fn() -> (bool, String)| {
        let start = Instant::now();
        let (ok, detail) = f();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {n}: {verdict} [{:.1} s] {detail}",
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed.push(n);
        }
    };
    report(1, &criterion_1);
    report(2, &criterion_2);
    report(3, &criterion_3);
    report(4, &criterion_4);
    report(5, &criterion_5);
    let lemma = lemma_runs();
    report(6, &|| criterion_6(&lemma));
    report(7, &|| criterion_7(&lemma));
    report(8, &criterion_8);
    report(9, &criterion_9);
    report(10, &criterion_10);
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
