use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cfcolor::adversary::{self, AdversaryKind, StopReason, Transcript};
use cfcolor::kinetic::{self, Audit, Exact, KineticRun};
use cfcolor::online::nested_lowerbound_instance;
use cfcolor::oracle::{self, Verdict};
use cfcolor::trace::{self, format_event, format_op, LogLine, UpdateOp};
use cfcolor::workload::{self, random_trace, Shape, TraceSpec};
use cfcolor::{Color, ColoringEngine, Interval, IntervalId, MethodSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("conflict: {0}")]
    Violation(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn with_context(self, ctx: &str) -> Self {
        match self {
            CliError::Input(m) => CliError::Input(format!("{ctx}: {m}")),
            CliError::Violation(m) => CliError::Violation(format!("{ctx}: {m}")),
            CliError::Internal(m) => CliError::Internal(format!("{ctx}: {m}")),
        }
    }
}

impl From<cfcolor::Error> for CliError {
    fn from(e: cfcolor::Error) -> Self {
        match e {
            cfcolor::Error::Internal(_) | cfcolor::Error::MissingColor(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "cfcolor",
    version,
    about = "Conflict-free coloring of dynamic and kinetic intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replay an update trace through an engine
    Run(RunArgs),
    /// Generate traces and kinetic scenarios
    Gen(GenArgs),
    /// Run a method x size matrix and print CSV
    Bench(BenchArgs),
    /// Check a recorded run log against its trace
    Verify(VerifyArgs),
    /// Drive an engine with a lower-bound adversary
    Adversary(AdversaryArgs),
    /// Simulate linear motion with the four-color maintainer
    Kinetic(KineticArgs),
}

#[derive(Args, Debug)]
struct MethodArgs {
    /// Method name, optionally with parameters (`dynamic:t=3`)
    #[arg(long)]
    method: String,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    universe: Option<u64>,
    #[arg(long = "L", id = "L")]
    l: Option<u64>,
    /// Inner engine of the grid method: trivial, dynamic or eps
    #[arg(long)]
    inner: Option<String>,
}

impl MethodArgs {
    fn spec(&self) -> CliResult<MethodSpec> {
        let mut extra = Vec::new();
        if let Some(t) = self.t {
            extra.push(format!("t={t}"));
        }
        if let Some(e) = self.eps {
            extra.push(format!("eps={e}"));
        }
        if let Some(u) = self.universe {
            extra.push(format!("universe={u}"));
        }
        if let Some(l) = self.l {
            extra.push(format!("L={l}"));
        }
        if let Some(i) = &self.inner {
            extra.push(format!("inner={i}"));
        }
        let mut s = self.method.clone();
        if !extra.is_empty() {
            s.push(if s.contains(':') { ',' } else { ':' });
            s.push_str(&extra.join(","));
        }
        Ok(s.parse()?)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AuditMode {
    Every,
    Final,
    None,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, value_enum, default_value = "final")]
    audit: AuditMode,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenKind {
    Random,
    NestedLb,
    BoundedLength,
    KineticLb,
    KineticRandom,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Integer endpoints in 0..U (random traces)
    #[arg(long)]
    universe: Option<u64>,
    /// Length bound of bounded-length traces
    #[arg(long = "L", id = "L", default_value_t = 8)]
    l: u64,
    #[arg(long)]
    span: Option<f64>,
    #[arg(long)]
    max_len: Option<f64>,
    #[arg(long, default_value_t = 0.4)]
    delete_prob: f64,
    /// Time horizon of random kinetic scenarios
    #[arg(long, default_value_t = 10.0)]
    horizon: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Method spec, repeatable (`dynamic:t=4`)
    #[arg(long = "method", required = true)]
    methods: Vec<String>,
    /// Trace lengths, comma separated or repeated
    #[arg(long = "n", required = true, value_delimiter = ',')]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    delete_prob: f64,
    /// Fill the wall_time column
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    log: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    General,
    Local,
}

#[derive(Args, Debug)]
struct AdversaryArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    /// Color budget used for the per-round survivor floors
    #[arg(long)]
    budget_c: Option<usize>,
    /// Recoloring budget the construction is sized for; the general
    /// adversary adapts it when omitted
    #[arg(long)]
    budget_r: Option<usize>,
    #[arg(long)]
    engine: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KineticAudit {
    Every,
    Final,
}

#[derive(Args, Debug)]
struct KineticArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    until: f64,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    #[arg(long, value_enum, default_value = "every")]
    audit: KineticAudit,
    /// Exact rational event times
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// `CFCOLOR_SEED` wins over the flag.
fn effective_seed(flag: u64) -> CliResult<u64> {
    match std::env::var("CFCOLOR_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("CFCOLOR_SEED is not an integer: `{v}`"))),
        Err(_) => Ok(flag),
    }
}

fn check(e: &dyn ColoringEngine, update: usize) -> CliResult<()> {
    e.check_invariants()?;
    match e.verify()? {
        Verdict::Ok => Ok(()),
        Verdict::Violation { witness } => Err(CliError::Violation(format!(
            "after update {update}: point {witness} sees no unique color"
        ))),
    }
}

fn cmd_run(a: &RunArgs, out: &mut String) -> CliResult<()> {
    let ops = trace::parse_trace(&read(&a.trace)?)?;
    let spec = a.method.spec()?;
    let mut e = spec.build()?;
    writeln!(out, "# method {spec}").unwrap();
    for (k, op) in ops.iter().enumerate() {
        let rep = e
            .apply(op)
            .map_err(|err| CliError::from(err).with_context(&format!("update {}", k + 1)))?;
        writeln!(out, "{}", format_op(op)).unwrap();
        for ev in &rep.events {
            writeln!(out, "{}", format_event(ev)).unwrap();
        }
        if a.audit == AuditMode::Every {
            check(e.as_ref(), k + 1)?;
        }
    }
    if a.audit == AuditMode::Final {
        check(e.as_ref(), ops.len())?;
    }
    let ledger = e.coloring().ledger();
    writeln!(
        out,
        "SUMMARY colors={} recolor_total={} recolor_max={} updates={}",
        e.coloring().colors_ever().len(),
        ledger.total(),
        ledger.max_per_update(),
        ops.len()
    )
    .unwrap();
    Ok(())
}

fn cmd_gen(a: &GenArgs, out: &mut String) -> CliResult<()> {
    let seed = effective_seed(a.seed)?;
    let bad = |m: &str| CliError::Input(m.to_string());
    if !(0.0..=1.0).contains(&a.delete_prob) {
        return Err(bad("--delete-prob must lie in [0, 1]"));
    }
    match a.kind {
        GenKind::Random => {
            let shape = match a.universe {
                Some(u) if u < 2 => return Err(bad("--universe must be at least 2")),
                Some(u) => Shape::Universe {
                    u,
                    max_len: a.max_len.map_or((u / 8).max(1), |m| m.max(1.0) as u64),
                },
                None => Shape::Free {
                    span: a.span.unwrap_or(1000.0),
                    max_len: a.max_len.unwrap_or(20.0),
                },
            };
            if let Shape::Free { span, max_len } = shape {
                if !(span > 0.0 && max_len > 0.0) {
                    return Err(bad("--span and --max-len must be positive"));
                }
            }
            let spec = TraceSpec::new(a.n, shape).delete_prob(a.delete_prob);
            out.push_str(&trace::format_trace(&random_trace(&spec, seed)));
        }
        GenKind::NestedLb => {
            let ops: Vec<UpdateOp> = nested_lowerbound_instance(a.n)
                .into_iter()
                .map(UpdateOp::Insert)
                .collect();
            out.push_str(&trace::format_trace(&ops));
        }
        GenKind::BoundedLength => {
            if a.l < 2 {
                return Err(bad("--L must be at least 2"));
            }
            let span = a.span.unwrap_or(50.0 * a.l as f64);
            let spec = TraceSpec::new(a.n, Shape::BoundedLength { l: a.l, span })
                .delete_prob(a.delete_prob);
            out.push_str(&trace::format_trace(&random_trace(&spec, seed)));
        }
        GenKind::KineticLb => {
            if a.n == 0 {
                return Err(bad("--n must be positive"));
            }
            writeln!(out, "# until {}", kinetic::lowerbound_until(a.n)).unwrap();
            out.push_str(&kinetic::format_scenario(&kinetic::lowerbound_scenario(
                a.n,
            )));
        }
        GenKind::KineticRandom => {
            if a.horizon.is_nan() || a.horizon <= 0.0 {
                return Err(bad("--horizon must be positive"));
            }
            let mut rng = workload::rng(seed);
            let sc = kinetic::random_scenario(&mut rng, a.n, a.span.unwrap_or(100.0), a.horizon);
            out.push_str(&kinetic::format_scenario(&sc));
        }
    }
    Ok(())
}

/// Trace a bench row runs, shaped to what the method accepts.
fn bench_trace(spec: &MethodSpec, n: usize, seed: u64, delete_prob: f64) -> Vec<UpdateOp> {
    let free = Shape::Free {
        span: (n as f64).max(10.0),
        max_len: 20.0,
    };
    let (shape, p) = match *spec {
        MethodSpec::GreedyNested => {
            return nested_lowerbound_instance(n)
                .into_iter()
                .map(UpdateOp::Insert)
                .collect();
        }
        MethodSpec::FreshLocal => (free, 0.0),
        MethodSpec::FixedDistinct { universe, .. } | MethodSpec::FixedChain { universe, .. } => (
            Shape::Universe {
                u: universe,
                max_len: (universe / 16).max(1),
            },
            delete_prob,
        ),
        MethodSpec::Grid { l, .. } => (
            Shape::BoundedLength {
                l,
                span: (n as f64 / 4.0).max(4.0 * l as f64),
            },
            delete_prob,
        ),
        _ => (free, delete_prob),
    };
    random_trace(&TraceSpec::new(n, shape).delete_prob(p), seed)
}

fn bench_row(
    spec: &MethodSpec,
    n: usize,
    seed: u64,
    delete_prob: f64,
    timing: bool,
) -> CliResult<String> {
    let ops = bench_trace(spec, n, seed, delete_prob);
    let mut e = spec.build()?;
    let start = Instant::now();
    for op in &ops {
        e.apply(op)?;
    }
    let wall = start.elapsed().as_secs_f64();
    let ledger = e.coloring().ledger();
    let wall_time = if timing {
        format!("{wall:.6}")
    } else {
        "-".to_string()
    };
    Ok(format!(
        "{},{},{},{},{},{},{:.6},{}",
        spec.name(),
        n,
        spec.params(),
        e.coloring().colors_ever().len(),
        ledger.total(),
        ledger.max_per_update(),
        ledger.amortized(),
        wall_time
    ))
}

fn cmd_bench(a: &BenchArgs, out: &mut String) -> CliResult<()> {
    let seed = effective_seed(a.seed)?;
    let specs: Vec<MethodSpec> = a
        .methods
        .iter()
        .map(|m| m.parse())
        .collect::<Result<_, _>>()?;
    let matrix: Vec<(&MethodSpec, usize)> = specs
        .iter()
        .flat_map(|s| a.ns.iter().map(move |&n| (s, n)))
        .collect();
    let rows: Vec<CliResult<String>> = matrix
        .par_iter()
        .map(|&(s, n)| bench_row(s, n, seed, a.delete_prob, a.timing))
        .collect();
    writeln!(
        out,
        "method,n,params,colors,recolor_total,recolor_max,recolor_amortized,wall_time"
    )
    .unwrap();
    let mut failed = 0;
    for ((s, n), row) in matrix.iter().zip(rows) {
        match row {
            Ok(line) => writeln!(out, "{line}").unwrap(),
            Err(e) => {
                failed += 1;
                eprintln!("row {} n={n} failed: {e}", s);
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Internal(format!("{failed} bench row(s) failed")));
    }
    Ok(())
}

fn verify_state(
    live: &BTreeMap<IntervalId, Interval>,
    colors: &BTreeMap<IntervalId, Color>,
    update: usize,
    line: usize,
) -> CliResult<()> {
    let ivs: Vec<Interval> = live.values().copied().collect();
    match oracle::is_conflict_free(&ivs, colors) {
        Ok(Verdict::Ok) => Ok(()),
        Ok(Verdict::Violation { witness }) => Err(CliError::Violation(format!(
            "after update {update} (log line {line}): point {witness} sees no unique color"
        ))),
        Err(e) => Err(CliError::Input(format!("log line {line}: {e}"))),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut String) -> CliResult<()> {
    let ops = trace::parse_trace(&read(&a.trace)?)?;
    let log = trace::parse_log(&read(&a.log)?)?;
    let mut live: BTreeMap<IntervalId, Interval> = BTreeMap::new();
    let mut colors: BTreeMap<IntervalId, Color> = BTreeMap::new();
    let mut next = 0;
    let mut last_line = 0;
    for (line, entry) in log {
        match entry {
            LogLine::Op(op) => {
                if next > 0 {
                    verify_state(&live, &colors, next, last_line)?;
                }
                if ops.get(next) != Some(&op) {
                    return Err(CliError::Input(format!(
                        "log line {line}: `{}` does not match update {} of the trace",
                        format_op(&op),
                        next + 1
                    )));
                }
                match op {
                    UpdateOp::Insert(iv) => {
                        live.insert(iv.id, iv);
                    }
                    UpdateOp::Delete(id) => {
                        live.remove(&id);
                        colors.remove(&id);
                    }
                }
                next += 1;
            }
            LogLine::Recolor(ev) => {
                if !live.contains_key(&ev.id) {
                    return Err(CliError::Input(format!(
                        "log line {line}: interval {} is not live",
                        ev.id
                    )));
                }
                colors.insert(ev.id, ev.color);
            }
            LogLine::Other(_) => {}
        }
        last_line = line;
    }
    if next != ops.len() {
        return Err(CliError::Input(format!(
            "log covers {next} of {} updates",
            ops.len()
        )));
    }
    if next > 0 {
        verify_state(&live, &colors, next, last_line)?;
    }
    writeln!(out, "VERIFIED updates={next}").unwrap();
    Ok(())
}

fn write_transcript(t: &Transcript, out: &mut String) {
    for (op, rep) in t.ops.iter().zip(&t.reports) {
        writeln!(out, "{}", format_op(op)).unwrap();
        for ev in &rep.events {
            writeln!(out, "{}", format_event(ev)).unwrap();
        }
    }
}

fn cmd_adversary(a: &AdversaryArgs, out: &mut String) -> CliResult<()> {
    let spec: MethodSpec = a.engine.parse()?;
    let kind = match a.kind {
        KindArg::General => AdversaryKind::General,
        KindArg::Local => AdversaryKind::Local,
    };
    if a.budget_r == Some(0) {
        return Err(CliError::Input("--budget-r must be positive".into()));
    }
    let t = match kind {
        AdversaryKind::General => match a.budget_r {
            Some(r) => adversary::run_general(spec.build()?.as_mut(), a.n, r)?,
            None => adversary::run_general_adaptive(&|| spec.build(), a.n, 1)?,
        },
        AdversaryKind::Local => {
            adversary::run_local(spec.build()?.as_mut(), a.n, a.budget_r.unwrap_or(1))?
        }
    };
    writeln!(out, "# adversary {kind} n={} r={} engine={spec}", a.n, t.r).unwrap();
    write_transcript(&t, out);
    for (i, round) in t.rounds.iter().enumerate() {
        let designated = match round.designated {
            None => "none".to_string(),
            Some(Color::Dummy) => "dummy".to_string(),
            Some(Color::Palette { level, index }) => format!("{level}:{index}"),
        };
        write!(
            out,
            "# round {} inserted={} color={} survivors={}",
            i + 1,
            round.inserted.len(),
            designated,
            round.survivors.len()
        )
        .unwrap();
        if let Some(c) = a.budget_c {
            let floor = adversary::survivor_floor(kind, a.n, c, t.r, i + 1);
            write!(out, " floor={floor:.3}").unwrap();
        }
        writeln!(out).unwrap();
    }
    let tradeoff = match adversary::check_tradeoff(a.n, t.c_obs, t.r_obs, kind) {
        Some(b) => b.to_string(),
        None => "n/a".into(),
    };
    writeln!(
        out,
        "# stop={} designated_distinct={} tradeoff={} audit_failures={}",
        t.stop,
        t.designated_distinct(),
        tradeoff,
        t.audit_failures
    )
    .unwrap();
    writeln!(
        out,
        "SUMMARY colors={} max_recolor={} rounds={}",
        t.c_obs,
        t.r_obs,
        t.rho()
    )
    .unwrap();
    if let StopReason::Violation { op, witness } = t.stop {
        return Err(CliError::Violation(format!(
            "after update {}: point {witness} sees no unique color",
            op + 1
        )));
    }
    Ok(())
}

fn cmd_kinetic(a: &KineticArgs, out: &mut String) -> CliResult<()> {
    let scenario = kinetic::parse_scenario(&read(&a.scenario)?)?;
    if a.until.is_nan() || a.until < a.t0 {
        return Err(CliError::Input("--until must not precede --t0".into()));
    }
    let audit = match a.audit {
        KineticAudit::Every => Audit::Every,
        KineticAudit::Final => Audit::Final,
    };
    let run: KineticRun = if a.exact {
        kinetic::simulate::<Exact>(&scenario, a.t0, a.until, audit)?
    } else {
        kinetic::simulate::<f64>(&scenario, a.t0, a.until, audit)?
    };
    for ev in &run.initial {
        writeln!(out, "{}", format_event(ev)).unwrap();
    }
    for e in &run.events {
        writeln!(out, "E {:.6} {} {} {}", e.time, e.kind, e.first, e.second).unwrap();
        for ev in &e.report.events {
            writeln!(out, "{}", format_event(ev)).unwrap();
        }
    }
    writeln!(
        out,
        "SUMMARY events={} recolor_total={} recolor_max={} colors={}",
        run.events.len(),
        run.total_recolorings,
        run.max_recolorings,
        run.colors_ever
    )
    .unwrap();
    Ok(())
}

fn output_of(c: &Command) -> Option<&Path> {
    match c {
        Command::Run(a) => a.output.as_deref(),
        Command::Gen(a) => a.output.as_deref(),
        Command::Bench(a) => a.output.as_deref(),
        Command::Adversary(a) => a.output.as_deref(),
        Command::Kinetic(a) => a.output.as_deref(),
        Command::Verify(_) => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, &mut out),
        Command::Gen(a) => cmd_gen(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Adversary(a) => cmd_adversary(a, &mut out),
        Command::Kinetic(a) => cmd_kinetic(a, &mut out),
    };
    let written = match output_of(&cli.command) {
        Some(p) => {
            std::fs::write(p, &out).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{out}");
            Ok(())
        }
    };
    match result.and(written) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
