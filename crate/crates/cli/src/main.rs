//! diagforge: command-line front end over the workbench library.
//!
//! Every subcommand resolves one report value and prints it as text or JSON;
//! exit 0 means the report was produced, 1 a semantic rejection, 2 a usage
//! error. Resource knobs are global flags that override the optional config
//! file, which in turn overrides built-in defaults.

mod config;
mod reports;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use diagforge_core::atm::{atm_run, compose_check, AtmParams, AtmProgram, ComposeVerdict};
use diagforge_core::diagonal::{contradiction_witness, registry, WitnessRefusal, WitnessTarget};
use diagforge_core::godel::{decode_index, diagonal_h, universal_eval};
use diagforge_core::halting::{
    diagonal_g, lba_halt_decide, semi_decide_halt, SpaceBound,
};
use diagforge_core::ittm::{
    ittm_decide_halting, run_to_clock, IttmSpec, LimitRule, OrdinalClock,
};
use diagforge_core::sweep::{
    sweep_entry, sweep_range, SweepEntry, SweepParams, SweepStatus, SweepSummary, SweepTarget,
};
use diagforge_core::tm::{decode_tm, parse_tm, run_bounded, TmSpec};
use diagforge_core::Nat;

use config::{Format, Settings};
use reports::emit;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Semantic(String),
    /// Semantic rejection already reported on stdout; carries only the exit code.
    Rejection,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Rejection) => ExitCode::from(1),
        Err(CliError::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_nat(s: &str) -> Result<Nat, String> {
    s.parse::<Nat>().map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "diagforge",
    version,
    about = "Workbench for diagonal constructions over machine models"
)]
struct Cli {
    /// Config file (JSON); flags override its values.
    #[arg(long, global = true, env = "DIAGFORGE_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format for reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for sampled work.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Tape window of the exact tier, in cells.
    #[arg(long, global = true)]
    space: Option<u64>,

    /// Step budget of the semi tier and other bounded runs.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Step budget of each transfinite stage.
    #[arg(long, global = true)]
    stage_budget: Option<u64>,

    /// Work-stack step cap of the recursive-term evaluator.
    #[arg(long, global = true)]
    max_steps: Option<u64>,

    /// Bit-width cap on values the recursive-term evaluator builds.
    #[arg(long, global = true)]
    max_value_bits: Option<u64>,

    /// Highest omega multiple the ordinal clock may reach.
    #[arg(long, global = true)]
    clock_cap: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recursive-term calculus: decoding, evaluation, and the successor diagonal.
    Pr {
        #[command(subcommand)]
        cmd: PrCmd,
    },
    /// Direct machine runs.
    Tm {
        #[command(subcommand)]
        cmd: TmCmd,
    },
    /// The two halting tiers over machine codes.
    Halt {
        #[command(subcommand)]
        cmd: HaltCmd,
    },
    /// Diagonal constructions over machine codes.
    Diag {
        #[command(subcommand)]
        cmd: DiagCmd,
    },
    /// Accelerated runs with the write-once output square.
    Atm {
        #[command(subcommand)]
        cmd: AtmCmd,
    },
    /// Transfinite runs and the past-the-limit halting decision.
    Ittm {
        #[command(subcommand)]
        cmd: IttmCmd,
    },
    /// The capability ledger and its contradiction witnesses.
    Ledger {
        #[command(subcommand)]
        cmd: LedgerCmd,
    },
    /// Cross-check a diagonal construction over an index range.
    ///
    /// Targets: pr-diagonal, tm-diagonal, ittm-decision, atm-solver, with the
    /// aliases "pr h", "diag g", "ittm decide", "atm solver". The range is
    /// A..B or A..=B, defaulting to the configured sweep range. With
    /// --sample N the indices are drawn by the configured seed; with --jobs
    /// the fan-out width is pinned (sequential builds run in order
    /// regardless, producing the same report bytes).
    Sweep {
        target: String,
        range: Option<String>,
        /// Sweep only N indices drawn from the range by the configured seed.
        #[arg(long)]
        sample: Option<u64>,
        /// Worker threads for the fan-out.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PrCmd {
    /// Print the term a code names.
    Decode {
        #[arg(value_parser = parse_nat)]
        x: Nat,
    },
    /// Evaluate the term at code X on ARG through the universal evaluator.
    Eval {
        #[arg(value_parser = parse_nat)]
        x: Nat,
        #[arg(value_parser = parse_nat)]
        arg: Nat,
    },
    /// The successor diagonal at X: self-application plus one.
    H {
        #[arg(value_parser = parse_nat)]
        x: Nat,
    },
}

#[derive(Subcommand)]
enum TmCmd {
    /// Run the machine in FILE on unary INPUT under the step budget.
    Run {
        file: PathBuf,
        #[arg(value_parser = parse_nat)]
        input: Nat,
    },
}

#[derive(Subcommand)]
enum HaltCmd {
    /// Budgeted probe of machine X on Y: sound for halts, silent otherwise.
    Semi {
        #[arg(value_parser = parse_nat)]
        x: Nat,
        #[arg(value_parser = parse_nat)]
        y: Nat,
    },
    /// Windowed decision for machine X on Y: always definite or refused.
    Exact {
        #[arg(value_parser = parse_nat)]
        x: Nat,
        #[arg(value_parser = parse_nat)]
        y: Nat,
    },
}

#[derive(Subcommand)]
enum DiagCmd {
    /// Anti-halting diagonal at X: 0 exactly where machine X provably never
    /// halts on its own index, marked divergent where it halts.
    G {
        #[arg(value_parser = parse_nat)]
        x: Nat,
    },
}

#[derive(Subcommand)]
enum AtmCmd {
    /// Accelerated run of the table in FILE on INPUT; reports the square.
    Run {
        file: PathBuf,
        #[arg(value_parser = parse_nat)]
        input: Nat,
    },
    /// Gate FIRST feeding SECOND: accepted only if every probed input has a
    /// step after which the first stage's square is final.
    Compose { first: PathBuf, second: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Limsup,
    Liminf,
}

impl RuleArg {
    fn rule(self) -> LimitRule {
        match self {
            RuleArg::Limsup => LimitRule::Limsup,
            RuleArg::Liminf => LimitRule::Liminf,
        }
    }
}

#[derive(Subcommand)]
enum IttmCmd {
    /// Decide whether machine X halts on its own index by reading the halt
    /// flag one step past the limit.
    Decide {
        #[arg(value_parser = parse_nat)]
        x: Nat,
        #[arg(long, value_enum, default_value = "limsup")]
        rule: RuleArg,
    },
    /// Run the machine in FILE through limit stages up to the given clock.
    ///
    /// Stages are bounded by steps (--stage-budget), not cells: a stage either
    /// halts, provably cycles (certifying its limit), or is refused.
    Limit {
        file: PathBuf,
        #[arg(long, value_parser = parse_nat, default_value = "0")]
        input: Nat,
        #[arg(long, value_enum, default_value = "limsup")]
        rule: RuleArg,
        /// State the machine restarts in at each limit.
        #[arg(long, default_value_t = 0)]
        limit_state: usize,
        /// Omega coefficient of the clock to run to.
        #[arg(long, default_value_t = 1)]
        omegas: u64,
        /// Finite part of the clock to run to.
        #[arg(long, default_value_t = 0)]
        plus: u64,
    },
}

#[derive(Subcommand)]
enum LedgerCmd {
    /// The eight-model capability table with statuses and check pointers.
    Report {
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
    },
    /// Contradiction transcript for MODEL. The synthetic targets
    /// toy-lookup-class and forced-composition produce transcripts; every
    /// registered model is refused, since its row already concedes a property.
    Witness { model: String },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = settle(&cli)?;
    match cli.cmd {
        Cmd::Pr { cmd } => run_pr(cmd, &settings),
        Cmd::Tm { cmd } => run_tm(cmd, &settings),
        Cmd::Halt { cmd } => run_halt(cmd, &settings),
        Cmd::Diag { cmd } => run_diag(cmd, &settings),
        Cmd::Atm { cmd } => run_atm(cmd, &settings),
        Cmd::Ittm { cmd } => run_ittm(cmd, &settings),
        Cmd::Ledger { cmd } => run_ledger(cmd, &settings),
        Cmd::Sweep { target, range, sample, jobs } => {
            run_sweep(&target, range.as_deref(), sample, jobs, &settings)
        }
    }
}

fn settle(cli: &Cli) -> Result<Settings, CliError> {
    let mut s = config::load(cli.config.as_deref())?;
    if let Some(v) = cli.space {
        s.space = usize::try_from(v)
            .map_err(|_| CliError::Usage(format!("space {v} does not fit this host")))?;
    }
    if let Some(v) = cli.budget {
        s.budget = v;
    }
    if let Some(v) = cli.stage_budget {
        s.stage_budget = v;
    }
    if let Some(v) = cli.max_steps {
        s.limits.max_steps = v;
    }
    if let Some(v) = cli.max_value_bits {
        s.limits.max_value_bits = v;
    }
    if let Some(v) = cli.clock_cap {
        s.clock_cap = v;
    }
    if let Some(v) = cli.seed {
        s.seed = v;
    }
    if let Some(v) = cli.format {
        s.format = v;
    }
    config::validate(&s)?;
    Ok(s)
}

fn space_bound(s: &Settings) -> SpaceBound {
    SpaceBound::new(s.space).expect("settings are validated positive")
}

/// Guard for paths that lay the input out in unary on an unbounded tape.
/// The windowed tiers enforce their own width check instead.
fn check_unary_layout(n: &Nat) -> Result<(), CliError> {
    if n.bits() > 24 {
        return Err(CliError::Semantic(format!(
            "input needs {n} + 1 marked cells; unary layouts beyond 2^24 cells are refused"
        )));
    }
    Ok(())
}

fn read_machine(path: &Path) -> Result<TmSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Semantic(format!("cannot read {}: {e}", path.display())))?;
    parse_tm(&text).map_err(|e| CliError::Semantic(format!("{}: {e}", path.display())))
}

fn run_pr(cmd: PrCmd, s: &Settings) -> Result<(), CliError> {
    match cmd {
        PrCmd::Decode { x } => {
            let term = decode_index(&x);
            emit(
                &reports::PrDecodeReport { index: x.to_string(), term: term.to_string() },
                s.format,
            );
        }
        PrCmd::Eval { x, arg } => {
            let value = universal_eval(&x, &arg, &s.limits)
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            emit(
                &reports::PrEvalReport {
                    index: x.to_string(),
                    arg: arg.to_string(),
                    value: value.to_string(),
                },
                s.format,
            );
        }
        PrCmd::H { x } => {
            let value =
                diagonal_h(&x, &s.limits).map_err(|e| CliError::Semantic(e.to_string()))?;
            emit(&reports::PrHReport { index: x.to_string(), value: value.to_string() }, s.format);
        }
    }
    Ok(())
}

fn run_tm(cmd: TmCmd, s: &Settings) -> Result<(), CliError> {
    let TmCmd::Run { file, input } = cmd;
    let spec = read_machine(&file)?;
    check_unary_layout(&input)?;
    let outcome = run_bounded(&spec, &input, s.budget);
    emit(
        &reports::TmRunReport { input: input.to_string(), budget: s.budget, outcome },
        s.format,
    );
    Ok(())
}

fn run_halt(cmd: HaltCmd, s: &Settings) -> Result<(), CliError> {
    match cmd {
        HaltCmd::Semi { x, y } => {
            check_unary_layout(&y)?;
            let answer = semi_decide_halt(&decode_tm(&x), &y, s.budget);
            emit(
                &reports::HaltReport::semi(x.to_string(), y.to_string(), &answer),
                s.format,
            );
        }
        HaltCmd::Exact { x, y } => {
            let answer = lba_halt_decide(&decode_tm(&x), &y, space_bound(s))
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            emit(
                &reports::HaltReport::exact(x.to_string(), y.to_string(), &answer),
                s.format,
            );
        }
    }
    Ok(())
}

fn run_diag(cmd: DiagCmd, s: &Settings) -> Result<(), CliError> {
    let DiagCmd::G { x } = cmd;
    let outcome =
        diagonal_g(&x, space_bound(s)).map_err(|e| CliError::Semantic(e.to_string()))?;
    emit(&reports::DiagGReport::new(x.to_string(), &outcome), s.format);
    Ok(())
}

fn run_atm(cmd: AtmCmd, s: &Settings) -> Result<(), CliError> {
    let params = AtmParams { budget: s.budget, space: space_bound(s) };
    match cmd {
        AtmCmd::Run { file, input } => {
            let spec = read_machine(&file)?;
            check_unary_layout(&input)?;
            let verdict = atm_run(&AtmProgram::Table(spec), &input, &params)
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            emit(&reports::AtmRunReport { input: input.to_string(), verdict }, s.format);
            Ok(())
        }
        AtmCmd::Compose { first, second } => {
            let first_spec = read_machine(&first)?;
            // The second stage must at least be a valid table before the gate
            // on the first is worth reporting.
            read_machine(&second)?;
            let verdict = compose_check(&AtmProgram::Table(first_spec), &params);
            let rejected = matches!(verdict, ComposeVerdict::Reject { .. });
            emit(
                &reports::AtmComposeReport {
                    first_stage: first.display().to_string(),
                    second_stage: second.display().to_string(),
                    verdict,
                },
                s.format,
            );
            if rejected {
                return Err(CliError::Rejection);
            }
            Ok(())
        }
    }
}

fn run_ittm(cmd: IttmCmd, s: &Settings) -> Result<(), CliError> {
    match cmd {
        IttmCmd::Decide { x, rule } => {
            let decision = ittm_decide_halting(&x, &x, rule.rule(), space_bound(s))
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            emit(&reports::IttmDecideReport { x: x.to_string(), decision }, s.format);
            Ok(())
        }
        IttmCmd::Limit { file, input, rule, limit_state, omegas, plus } => {
            if omegas > s.clock_cap {
                return Err(CliError::Usage(format!(
                    "clock reaches w*{omegas}, above the configured cap w*{}",
                    s.clock_cap
                )));
            }
            let spec = read_machine(&file)?;
            let ittm = IttmSpec::new(spec, limit_state)
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            check_unary_layout(&input)?;
            let clock = OrdinalClock::new(omegas, plus).expect("cap validated");
            let outcome = run_to_clock(&ittm, &input, clock, rule.rule(), s.stage_budget)
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            emit(
                &reports::IttmLimitReport {
                    input: input.to_string(),
                    rule: rule.rule(),
                    stage_budget: s.stage_budget,
                    outcome,
                },
                s.format,
            );
            Ok(())
        }
    }
}

fn run_ledger(cmd: LedgerCmd, s: &Settings) -> Result<(), CliError> {
    match cmd {
        LedgerCmd::Report { json } => {
            let format = if json { Format::Json } else { s.format };
            emit(&reports::ledger_report(registry()), format);
            Ok(())
        }
        LedgerCmd::Witness { model } => {
            let target = match model.as_str() {
                "toy-lookup-class" => WitnessTarget::ToyLookupClass,
                "forced-composition" => WitnessTarget::ForcedComposition,
                other => WitnessTarget::Registered(other.to_owned()),
            };
            match contradiction_witness(&target) {
                Ok(transcript) => {
                    emit(&reports::WitnessReport { model, transcript }, s.format);
                    Ok(())
                }
                Err(refusal @ WitnessRefusal::ModelHonest { .. }) => {
                    Err(CliError::Semantic(refusal.to_string()))
                }
                Err(refusal @ WitnessRefusal::UnknownModel { .. }) => Err(CliError::Usage(
                    format!(
                        "{refusal}; valid targets are toy-lookup-class, forced-composition, \
                         or a registered model name"
                    ),
                )),
            }
        }
    }
}

fn parse_sweep_target(raw: &str) -> Result<SweepTarget, CliError> {
    let squashed = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    if let Some(t) = SweepTarget::from_name(&squashed) {
        return Ok(t);
    }
    match squashed.as_str() {
        "diag g" | "g" => Ok(SweepTarget::TmDiagonal),
        "pr h" | "h" => Ok(SweepTarget::PrDiagonal),
        "ittm decide" => Ok(SweepTarget::IttmDecision),
        "atm solver" | "halt solver" => Ok(SweepTarget::AtmSolver),
        other => Err(CliError::Usage(format!(
            "unknown sweep target {other:?}; use pr-diagonal, tm-diagonal, ittm-decision, \
             atm-solver, or the aliases \"pr h\", \"diag g\", \"ittm decide\", \"atm solver\""
        ))),
    }
}

fn parse_range(raw: &str) -> Result<(u64, u64), CliError> {
    let (lo, hi, inclusive) = if let Some((a, b)) = raw.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = raw.split_once("..") {
        (a, b, false)
    } else {
        return Err(CliError::Usage(format!("range {raw:?} must look like A..B or A..=B")));
    };
    let parse = |part: &str| {
        part.trim()
            .parse::<u64>()
            .map_err(|e| CliError::Usage(format!("bad range bound {:?}: {e}", part.trim())))
    };
    let start = parse(lo)?;
    let mut end = parse(hi)?;
    if inclusive {
        end = end
            .checked_add(1)
            .ok_or_else(|| CliError::Usage("inclusive range end overflows".to_owned()))?;
    }
    if start >= end {
        return Err(CliError::Usage(format!("index range [{start}, {end}) is empty")));
    }
    Ok((start, end))
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("jobs must be at least 1".to_owned())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Semantic(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("jobs must be at least 1".to_owned()));
    }
    Ok(f())
}

fn tally(entries: &[SweepEntry]) -> SweepSummary {
    let mut summary = SweepSummary::default();
    for e in entries {
        match e.status {
            SweepStatus::Agree => summary.agree += 1,
            SweepStatus::Disagree => summary.disagree += 1,
            SweepStatus::Unknown => summary.unknown += 1,
            SweepStatus::OutOfSpace => summary.out_of_space += 1,
        }
    }
    summary
}

fn run_sweep(
    target: &str,
    range: Option<&str>,
    sample: Option<u64>,
    jobs: Option<usize>,
    s: &Settings,
) -> Result<(), CliError> {
    use rand::SeedableRng;

    let target = parse_sweep_target(target)?;
    let (start, end) = match range {
        Some(raw) => parse_range(raw)?,
        None if s.sweep_start < s.sweep_end => (s.sweep_start, s.sweep_end),
        None => {
            return Err(CliError::Usage(format!(
                "configured sweep range [{}, {}) is empty",
                s.sweep_start, s.sweep_end
            )))
        }
    };
    let params = SweepParams { space: space_bound(s), budget: s.budget, limits: s.limits };
    let report = match sample {
        None => {
            let core = with_jobs(jobs, || sweep_range(target, start, end, &params))?;
            reports::SweepCliReport {
                target: core.target,
                start: core.start,
                end: core.end,
                sample: None,
                summary: core.summary,
                entries: core.entries,
            }
        }
        Some(0) => return Err(CliError::Usage("sample must be at least 1".to_owned())),
        Some(n) => {
            let len = end - start;
            let mut chosen: Vec<u64> = if n >= len {
                (start..end).collect()
            } else {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s.seed);
                rand::seq::index::sample(&mut rng, len as usize, n as usize)
                    .into_iter()
                    .map(|i| start + i as u64)
                    .collect()
            };
            chosen.sort_unstable();
            let entries: Vec<SweepEntry> =
                with_jobs(jobs, || chosen.iter().map(|&i| sweep_entry(target, i, &params)).collect())?;
            reports::SweepCliReport {
                target,
                start,
                end,
                sample: Some(reports::SampleInfo {
                    seed: s.seed,
                    requested: n,
                    taken: entries.len() as u64,
                }),
                summary: tally(&entries),
                entries,
            }
        }
    };
    emit(&report, s.format);
    Ok(())
}
