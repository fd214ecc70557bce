use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use igab::codes::InterleavedCode;
use igab::erasure::decode_error_erasure;
use igab::experiment::{
    lemma_config, results_csv, run_oracle_check, run_sweep, ChannelSpec, ExperimentConfig,
    ExperimentResult, OracleConfig,
};
use igab::ffield::Field;
use igab::interp::{decode, radius_list, radius_unique, Mode, DEFAULT_LIST_CAP};
use igab::reference::bounds;
use igab::textio::{format_outcome, format_word, parse_erasures, parse_messages, parse_word};

/// Interleaved Gabidulin codes: encoding, interpolation-based decoding and
/// seeded failure-rate experiments.
#[derive(Parser, Debug)]
#[command(name = "igab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode message polynomials into a word file.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Message file, one polynomial per line; stdin if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decode a word file.
    Decode {
        /// Dimensions, one per row of the word.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value = "unique")]
        mode: Mode,
        /// Largest list enumerated before giving up.
        #[arg(long, default_value_t = DEFAULT_LIST_CAP)]
        cap: u64,
        /// Erasure side-information file.
        #[arg(long)]
        erasures: Option<PathBuf>,
        /// Word file; stdin if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded Monte Carlo run, one row per channel point.
    Simulate(SimulateArgs),
    /// Closed-form failure bounds.
    Bounds {
        #[command(flatten)]
        code: CodeArgs,
        /// Error ranks; the unique radius if omitted.
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        /// Print CSV instead of a table.
        #[arg(long)]
        csv: bool,
    },
    /// List decoding against an exhaustive search of the codebook.
    OracleCheck {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Error ranks, used in turn; 0 up to one past the radius if omitted.
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_LIST_CAP)]
        cap: u64,
    },
    /// Co-measure the new decoder's ranks and the earlier decoders'
    /// predicates on errors of rank equal to the unique radius.
    LemmaCheck {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    m: usize,
    /// Code length; m if omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Interleaving order; a single --k value is repeated s times.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
}

impl CodeArgs {
    fn n(&self) -> usize {
        self.n.unwrap_or(self.m)
    }

    fn dims(&self) -> Result<Vec<usize>> {
        match self.s {
            None => Ok(self.k.clone()),
            Some(s) if self.k.len() == 1 => Ok(vec![self.k[0]; s]),
            Some(s) if self.k.len() == s => Ok(self.k.clone()),
            Some(s) => bail!("--s {s} does not match {} values of --k", self.k.len()),
        }
    }

    fn build(&self) -> Result<InterleavedCode> {
        let field = Field::new(self.q, self.m)?;
        Ok(InterleavedCode::new(&field, self.n(), &self.dims()?)?)
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "unique")]
    mode: Mode,
    /// Worker threads; 0 uses all cores, 1 stays on one thread.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Also evaluate the earlier decoders' predicates on rank-tau draws.
    #[arg(long)]
    compare: bool,
    #[arg(long, default_value_t = DEFAULT_LIST_CAP)]
    cap: u64,
    /// Fixed error ranks, one point each.
    #[arg(long, value_delimiter = ',', conflicts_with = "p_qsc")]
    t: Vec<usize>,
    /// Channel parameters of the q-ary symmetric rank channel.
    #[arg(long = "p-qsc", value_delimiter = ',')]
    p_qsc: Vec<f64>,
    /// Row-erasure ranks, one per row; turns on the erasure channel.
    #[arg(long, value_delimiter = ',', conflicts_with = "p_qsc")]
    rho: Vec<usize>,
    /// Column-erasure rank for the erasure channel.
    #[arg(long, default_value_t = 0)]
    gamma: usize,
    /// Write CSV here ("-" for stdout).
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into())
}

fn simulate(a: &SimulateArgs) -> Result<ExitCode> {
    let code = a.code.build()?;
    let points: Vec<ChannelSpec> = if !a.rho.is_empty() {
        let ts = if a.t.is_empty() { vec![0] } else { a.t.clone() };
        ts.into_iter()
            .map(|t| ChannelSpec::Erasure {
                rho: a.rho.clone(),
                gamma: a.gamma,
                t,
            })
            .collect()
    } else if !a.p_qsc.is_empty() {
        a.p_qsc.iter().map(|&p| ChannelSpec::Qsc(p)).collect()
    } else if !a.t.is_empty() {
        a.t.iter().map(|&t| ChannelSpec::FixedT(t)).collect()
    } else {
        bail!("give --t, --p-qsc or --rho");
    };
    let mut base = ExperimentConfig::new(a.code.q, a.code.m, a.code.n(), code.k(), points[0].clone());
    base.trials = a.trials;
    base.seed = a.seed;
    base.mode = a.mode;
    base.workers = a.workers;
    base.compare = a.compare;
    base.list_cap = a.cap;
    let rows = run_sweep(&base, &points)?;

    if let Some(path) = &a.csv {
        write_output(&Some(path.clone()), &results_csv(&rows)?)?;
        if path.as_os_str() == "-" {
            return Ok(ExitCode::SUCCESS);
        }
    }
    println!(
        "{:>8} {:>8} {:>8} {:>8} {:>6} {:>8} {:>11} {:>25} {:>11} {:>11} {:>11} {:>8}",
        "point", "trials", "success", "failure", "wrong", "overflow", "rate", "wilson 95%", "bound_lo",
        "bound_alt", "p_exceed", "seconds"
    );
    for (label, r) in &rows {
        print_row(label, r);
    }
    for (label, r) in &rows {
        if let Some(l) = &r.lemma {
            println!(
                "{label}: compared {} rank-{} draws: rk Q deficient {}, Q_bar_0 deficient {}, \
                 received-word fails {}, syndrome fails {}, disagreements {}, implication breaks {}, \
                 converse gap {}, d_I {:?}",
                l.evaluated,
                radius_unique(&code),
                l.rk_q_deficient,
                l.q_bar0_deficient,
                l.rr_fails,
                l.sb_fails,
                l.sb_rr_disagree,
                l.q_not_rr + l.q_bar0_not_rr + l.q_not_q_bar0,
                l.rr_not_q,
                l.d_i
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_row(label: &str, r: &ExperimentResult) {
    let c = &r.counters;
    let (lo, hi) = r.wilson();
    println!(
        "{:>8} {:>8} {:>8} {:>8} {:>6} {:>8} {:>11.4e} {:>25} {:>11} {:>11.4e} {:>11.4e} {:>8.2}",
        label,
        c.trials,
        c.success,
        c.failure,
        c.wrong,
        c.overflow,
        r.failure_rate(),
        format!("[{lo:.4e}, {hi:.4e}]"),
        fmt_opt(r.bound_lo),
        r.bound_alt,
        r.p_exceed,
        r.elapsed.as_secs_f64()
    );
}

fn bounds_cmd(code_args: &CodeArgs, ts: &[usize], csv: bool) -> Result<ExitCode> {
    let code = code_args.build()?;
    let ts = if ts.is_empty() { vec![radius_unique(&code)] } else { ts.to_vec() };
    let reports: Vec<_> = ts.iter().map(|&t| bounds(&code, t)).collect();
    if csv {
        println!("t,tau_u,tau_list,p_lo,p_sb,p_alt,avg_list_excess");
        for b in &reports {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            println!(
                "{},{},{},{},{},{},{}",
                b.t,
                b.tau_u,
                b.tau_list,
                opt(b.p_lo),
                opt(b.p_sb),
                b.p_alt,
                b.avg_list_excess
            );
        }
        return Ok(ExitCode::SUCCESS);
    }
    let b0 = &reports[0];
    println!("unique radius tau_u            {}", b0.tau_u);
    println!("list radius tau_list           {}", b0.tau_list);
    println!("average list size bound        1 + {:.4e}", b0.avg_list_excess);
    for b in &reports {
        println!("t = {}", b.t);
        println!("  rk Q deficiency bound        {:.4e}", b.p_alt);
        println!("  received-word decoder bound  {}", fmt_opt(b.p_lo));
        println!("  syndrome decoder bound       {}", fmt_opt(b.p_sb));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Encode {
            code,
            input,
            output,
        } => {
            let c = code.build()?;
            let msg = parse_messages(c.field(), &read_input(&input)?, c.s())?;
            write_output(&output, &format_word(c.field(), &c.encode(&msg)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode {
            k,
            mode,
            cap,
            erasures,
            input,
            output,
        } => {
            let (header, field, word) = parse_word(&read_input(&input)?)?;
            if k.len() != header.s {
                bail!("{} dimensions for a word with {} rows", k.len(), header.s);
            }
            let code = InterleavedCode::new(&field, header.n, &k)?;
            let outcome = match erasures {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let info = parse_erasures(&field, &text, header.n)?;
                    decode_error_erasure(&code, &word, &info, mode, cap)?
                }
                None => decode(&code, &word, mode, cap)?,
            };
            write_output(&output, &format_outcome(&outcome))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate(a) => simulate(&a),
        Command::Bounds { code, t, csv } => bounds_cmd(&code, &t, csv),
        Command::OracleCheck {
            code,
            trials,
            seed,
            t,
            cap,
        } => {
            let c = code.build()?;
            let ts = if t.is_empty() {
                (0..=radius_list(&c) + 1).collect()
            } else {
                t
            };
            let rep = run_oracle_check(&OracleConfig {
                q: code.q,
                m: code.m,
                n: code.n(),
                k: c.k().to_vec(),
                trials,
                seed,
                ts,
                list_cap: cap,
            })?;
            println!(
                "trials {}, radius {}, mismatches {}, overflows {}, sent word listed {}, list sizes {:?}",
                rep.trials, rep.tau, rep.mismatches, rep.overflows, rep.contains_sent, rep.list_sizes
            );
            if let Some(first) = &rep.first_mismatch {
                eprintln!("mismatch: {first}");
            }
            Ok(if rep.mismatches == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::LemmaCheck {
            code,
            trials,
            seed,
            workers,
        } => {
            let c = code.build()?;
            let mut cfg = lemma_config(code.q, code.m, code.n(), c.k())?;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.workers = workers;
            let r = igab::experiment::run_experiment(&cfg)?;
            let l = r.lemma.unwrap_or_default();
            let equal_k = c.k().iter().all(|&k| k == c.k()[0]);
            let rows = [
                (format!("draws of rank {}", radius_unique(&c)), l.evaluated),
                ("rk Q deficient".into(), l.rk_q_deficient),
                ("rk Q_bar_0 deficient".into(), l.q_bar0_deficient),
                ("received-word decoder fails".into(), l.rr_fails),
                ("syndrome decoder fails".into(), l.sb_fails),
                ("the two predicates differ".into(), l.sb_rr_disagree),
                ("rk Q def. with full Q_bar_0".into(), l.q_not_q_bar0),
                ("Q_bar_0 def. without rr fail".into(), l.q_bar0_not_rr),
                ("rk Q def. without rr fail".into(), l.q_not_rr),
                ("rr fail with full rk Q".into(), l.rr_not_q),
            ];
            for (label, v) in rows {
                println!("{label:<30} {v}");
            }
            println!("{:<30} {:?}", "kernel dimensions", l.d_i);
            if !equal_k {
                println!("unequal dimensions: relations reported, not checked");
            }
            Ok(if l.violations(equal_k) == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
