//! Command-line front end. Every subcommand takes a seed (flag, then the
//! `QUBITKIT_SEED` env var, then entropy) and echoes it, so any run can be
//! replayed bit for bit. `--json` emits one pretty-printed object; the
//! default output is the same report flattened to `path = value` lines,
//! except where a raw amplitude dump is the natural product.

use std::fs;
use std::io::BufReader;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result, anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qubitkit::gates::apply_circuit;
use qubitkit::qft::apply_qft;
use qubitkit::{
    Circuit, Complex, Direction, FiveQubitCode, Grid1D, LogicalQubit, PauliError, QftSpec,
    SearchOracle, Span, SplitHamiltonian, SplitOrder, StateVector, grover, hamsim,
    logical_error_rate, shor,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value, json};

#[derive(Parser)]
#[command(name = "qubitkit", version, about = "State-vector quantum computer simulator")]
struct Cli {
    /// RNG seed; defaults to the QUBITKIT_SEED env var, then to entropy.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Emit the report as one pretty-printed JSON object.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an integer by quantum period finding.
    Shor(ShorArgs),
    /// Amplify and measure one marked item among 2^n.
    Grover(GroverArgs),
    /// Integrate the 1-d Schrodinger equation by operator splitting.
    Evolve(EvolveArgs),
    /// Encode, corrupt, and recover with the five-qubit code.
    Qecc(QeccArgs),
    /// Fourier-transform an amplitude dump.
    Qft(QftArgs),
    /// Run a gate-list circuit file on an initial state.
    Circuit(CircuitArgs),
}

#[derive(Args)]
struct ShorArgs {
    /// Number to factor.
    #[arg(long)]
    n: u64,

    /// Fixed base instead of random ones (one attempt).
    #[arg(long)]
    a: Option<u64>,

    /// Measure the function register before the transform.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    premeasure: bool,

    /// Random bases to try before giving up.
    #[arg(long, default_value_t = 20)]
    attempts: usize,
}

#[derive(Args)]
struct GroverArgs {
    /// Register width n; the search space is 2^n items.
    #[arg(long)]
    qubits: usize,

    /// Index of the marked item.
    #[arg(long)]
    marked: usize,

    /// Grover iterations; defaults to the optimal count.
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Args)]
struct EvolveArgs {
    /// Grid qubits m; the grid has 2^m points.
    #[arg(long)]
    qubits: usize,

    /// Box length L.
    #[arg(long)]
    length: f64,

    /// Time step.
    #[arg(long)]
    dt: f64,

    /// Number of steps.
    #[arg(long)]
    steps: usize,

    /// `harmonic`, `free`, or a file with one potential sample per grid point.
    #[arg(long)]
    potential: String,

    /// `gaussian(x0,sigma,p0)` or a file with one amplitude per grid point.
    #[arg(long)]
    psi0: String,

    /// Splitting order.
    #[arg(long, value_enum, default_value_t = Order::Lie)]
    order: Order,

    /// Particle mass.
    #[arg(long, default_value_t = 1.0)]
    mass: f64,

    /// Write a per-step CSV trace of norm, <x>, <p>, <E> here.
    #[arg(long)]
    out: Option<String>,

    /// Write the final state's amplitude dump here.
    #[arg(long)]
    dump_final: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lie,
    Strang,
}

#[derive(Args)]
struct QeccArgs {
    #[arg(long, value_enum)]
    mode: Option<QeccMode>,

    /// Error to inject in roundtrip mode, like `X2`, `Z0`, `Y4`, or `I`;
    /// omitted means all sixteen.
    #[arg(long)]
    error: Option<String>,

    /// Physical error probability per qubit (montecarlo).
    #[arg(long, default_value_t = 0.01)]
    p: f64,

    /// Monte-Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    trials: usize,

    /// Dump the two logical codewords instead of running a mode.
    #[arg(long)]
    print_code: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum QeccMode {
    Roundtrip,
    Montecarlo,
}

#[derive(Args)]
struct QftArgs {
    /// Register width.
    #[arg(long)]
    qubits: usize,

    /// Amplitude dump to transform; |0...0> when omitted.
    #[arg(long)]
    input: Option<String>,

    /// Apply the inverse transform.
    #[arg(long)]
    inverse: bool,

    /// Write the transformed dump here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CircuitArgs {
    /// Register width.
    #[arg(long)]
    qubits: usize,

    /// Circuit file, one gate per line.
    #[arg(long)]
    file: String,

    /// Amplitude dump for the initial state; |0...0> when omitted.
    #[arg(long)]
    input: Option<String>,

    /// Write the final dump here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

/// What a subcommand hands back: a JSON object, optional raw text that
/// replaces the flat listing in human mode, and whether the algorithm
/// succeeded (exit 1 otherwise).
struct Report {
    payload: Value,
    text: Option<String>,
    ok: bool,
}

fn report(payload: Value) -> Report {
    Report { payload, text: None, ok: true }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let seed = resolve_seed(cli.seed)?;
    let started = Instant::now();
    let out = dispatch(&cli.command, seed)?;
    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut body = Map::new();
    body.insert("seed".into(), json!(seed));
    body.insert("subcommand".into(), json!(subcommand_name(&cli.command)));
    body.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    body.insert("wall_time_ms".into(), json!(wall_time_ms));
    let Value::Object(payload) = out.payload else {
        bail!("internal: report payload is not an object");
    };
    for (key, value) in payload {
        body.insert(key, value);
    }

    if cli.json {
        println!("{}", serde_json::to_string_pretty(&Value::Object(body))?);
    } else if let Some(text) = &out.text {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    } else {
        for line in flat_lines(&Value::Object(body)) {
            println!("{line}");
        }
    }
    Ok(out.ok)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("QUBITKIT_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| anyhow!("QUBITKIT_SEED must be an unsigned 64-bit integer, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(rand::random()),
        Err(err) => Err(err).context("reading QUBITKIT_SEED"),
    }
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Shor(_) => "shor",
        Command::Grover(_) => "grover",
        Command::Evolve(_) => "evolve",
        Command::Qecc(_) => "qecc",
        Command::Qft(_) => "qft",
        Command::Circuit(_) => "circuit",
    }
}

/// Flattens a JSON value to sorted `path = value` lines, so the human
/// format carries exactly the numbers the JSON format does.
fn flat_lines(value: &Value) -> Vec<String> {
    let mut out = Vec::new();
    flatten("", value, &mut out);
    out
}

fn flatten(path: &str, value: &Value, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (key, item) in map {
                let sub = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                flatten(&sub, item, out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push(format!("{path} = []"));
            }
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), item, out);
            }
        }
        leaf => out.push(format!("{path} = {leaf}")),
    }
}

fn dispatch(command: &Command, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match command {
        Command::Shor(args) => run_shor(args, &mut rng),
        Command::Grover(args) => run_grover(args, &mut rng),
        Command::Evolve(args) => run_evolve(args),
        Command::Qecc(args) => run_qecc(args, seed, &mut rng),
        Command::Qft(args) => run_qft(args),
        Command::Circuit(args) => run_circuit(args),
    }
}

fn run_shor(args: &ShorArgs, rng: &mut ChaCha8Rng) -> Result<Report> {
    let result = match args.a {
        Some(base) => shor::factor_with_base(args.n, base, args.premeasure, rng)?,
        None => shor::factor_with_options(args.n, args.attempts, args.premeasure, rng)?,
    };
    let attempts: Vec<Value> = result
        .attempts
        .iter()
        .map(|att| {
            json!({
                "a": att.base,
                "measured": att.measured,
                "period": att.period,
                "outcome": att.outcome.to_string(),
            })
        })
        .collect();
    let ok = result.factors.is_some();
    Ok(Report {
        payload: json!({
            "n": result.n,
            "factors": result.factors.map(|(p, q)| vec![p, q]),
            "premeasure": args.premeasure,
            "attempts": attempts,
        }),
        text: None,
        ok,
    })
}

fn run_grover(args: &GroverArgs, rng: &mut ChaCha8Rng) -> Result<Report> {
    if args.qubits < 2 {
        bail!("grover needs at least 2 qubits, got {}", args.qubits);
    }
    let mut oracle = SearchOracle::new(args.qubits, args.marked)?;
    let outcome = grover::grover_search(&mut oracle, args.iterations, rng)?;
    Ok(Report {
        payload: json!({
            "qubits": args.qubits,
            "marked": args.marked,
            "iterations": outcome.iterations,
            "queries": outcome.queries,
            "hit": outcome.hit,
            "found": outcome.found,
            "success_prob_analytic": grover::success_probability(args.qubits, outcome.iterations),
        }),
        text: None,
        ok: outcome.found,
    })
}

fn run_evolve(args: &EvolveArgs) -> Result<Report> {
    let grid = Grid1D::new(args.qubits, args.length, args.dt)?;
    let h = parse_potential(&args.potential, &grid, args.mass)?;
    let mut state = parse_psi0(&args.psi0, &grid)?;
    if args.steps == 0 {
        bail!("evolution needs at least one step");
    }
    let order = match args.order {
        Order::Lie => SplitOrder::Lie,
        Order::Strang => SplitOrder::Strang,
    };

    // Stepping one at a time keeps the trace rows and the final state on
    // the same arithmetic path whether or not a trace was requested.
    let mut rows = Vec::new();
    if args.out.is_some() {
        rows.push(trace_row(0, &state, &grid, &h)?);
    }
    for step in 1..=args.steps {
        hamsim::evolve(&mut state, &h, &grid, 1, order)?;
        if args.out.is_some() {
            rows.push(trace_row(step, &state, &grid, &h)?);
        }
    }

    if let Some(path) = &args.out {
        let mut text = String::from("step,time,norm,mean_x,mean_p,energy\n");
        for row in &rows {
            text.push_str(row);
        }
        fs::write(path, text).with_context(|| format!("writing {path}"))?;
    }
    if let Some(path) = &args.dump_final {
        fs::write(path, state.to_dump()).with_context(|| format!("writing {path}"))?;
    }

    let obs = hamsim::observables(&state, &grid, &h)?;
    let Value::Object(mut payload) = json!({
        "qubits": args.qubits,
        "length": args.length,
        "dt": args.dt,
        "steps": args.steps,
        "order": order_name(args.order),
        "mass": args.mass,
        "norm": state.norm_sqr().sqrt(),
        "mean_x": obs.mean_x,
        "mean_p": obs.mean_p,
        "energy": obs.energy,
    }) else {
        unreachable!()
    };
    if let Some(path) = &args.out {
        payload.insert("trace".into(), json!(path));
    }
    if let Some(path) = &args.dump_final {
        payload.insert("final_dump".into(), json!(path));
    }
    Ok(report(Value::Object(payload)))
}

fn order_name(order: Order) -> &'static str {
    match order {
        Order::Lie => "lie",
        Order::Strang => "strang",
    }
}

fn trace_row(step: usize, state: &StateVector, grid: &Grid1D, h: &SplitHamiltonian) -> Result<String> {
    let obs = hamsim::observables(state, grid, h)?;
    Ok(format!(
        "{step},{t},{norm},{x},{p},{e}\n",
        t = step as f64 * grid.dt(),
        norm = state.norm_sqr().sqrt(),
        x = obs.mean_x,
        p = obs.mean_p,
        e = obs.energy,
    ))
}

fn parse_potential(spec: &str, grid: &Grid1D, mass: f64) -> Result<SplitHamiltonian> {
    let h = match spec {
        "harmonic" => {
            let center = grid.length() / 2.0;
            SplitHamiltonian::with_mass(grid, move |x| (x - center) * (x - center) / 2.0, mass)?
        }
        "free" => SplitHamiltonian::with_mass(grid, |_| 0.0, mass)?,
        path => {
            let samples =
                read_real_samples(path).with_context(|| format!("reading potential file {path}"))?;
            SplitHamiltonian::from_potential_samples(grid, samples, mass)?
        }
    };
    Ok(h)
}

fn parse_psi0(spec: &str, grid: &Grid1D) -> Result<StateVector> {
    if let Some(params) = spec.strip_prefix("gaussian(").and_then(|rest| rest.strip_suffix(')')) {
        let values: Vec<f64> = params
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| anyhow!("bad gaussian parameter {:?}", t.trim()))
            })
            .collect::<Result<_>>()?;
        let [x0, sigma, p0] = values[..] else {
            bail!("gaussian takes three parameters (x0,sigma,p0), got {}", values.len());
        };
        return Ok(hamsim::gaussian_packet(grid, x0, sigma, p0)?);
    }
    let samples =
        read_complex_samples(spec).with_context(|| format!("reading psi0 file {spec}"))?;
    Ok(hamsim::init_wavefunction(grid, &samples)?)
}

/// One real per line; `#` comments and blank lines are skipped.
fn read_real_samples(path: &str) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<f64>()
            .map_err(|_| anyhow!("line {}: bad number {line:?}", lineno + 1))?;
        out.push(v);
    }
    Ok(out)
}

/// One amplitude per line, either `re` or `re im` (space, tab, or comma
/// separated); `#` comments and blank lines are skipped.
fn read_complex_samples(path: &str) -> Result<Vec<Complex>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split([' ', '\t', ',']).filter(|t| !t.is_empty()).collect();
        let bad = || anyhow!("line {}: expected `re` or `re im`, got {raw:?}", lineno + 1);
        let c = match parts[..] {
            [re] => Complex::new(re.parse().map_err(|_| bad())?, 0.0),
            [re, im] => {
                Complex::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        out.push(c);
    }
    Ok(out)
}

fn run_qecc(args: &QeccArgs, seed: u64, rng: &mut ChaCha8Rng) -> Result<Report> {
    let code = FiveQubitCode::new();
    if args.print_code {
        let zero = code.logical_zero().to_dump();
        let one = code.logical_one().to_dump();
        let text = format!("{zero}\n{one}");
        return Ok(Report {
            payload: json!({ "zero": zero, "one": one }),
            text: Some(text),
            ok: true,
        });
    }
    let Some(mode) = args.mode else {
        bail!("qecc needs --mode roundtrip|montecarlo or --print-code");
    };
    match mode {
        QeccMode::Roundtrip => {
            let q = LogicalQubit::random(rng);
            if let Some(name) = &args.error {
                let error: PauliError = name.parse()?;
                let (fidelity, syndrome, recovered) = roundtrip(&code, &q, error, rng)?;
                Ok(report(json!({
                    "mode": "roundtrip",
                    "error": error.to_string(),
                    "syndrome": syndrome.value,
                    "syndrome_bits": syndrome.bits,
                    "recovered_error": recovered.to_string(),
                    "fidelity": fidelity,
                })))
            } else {
                let mut fidelities = Map::new();
                let mut syndromes = Map::new();
                let mut min_fidelity = f64::INFINITY;
                for error in PauliError::all() {
                    let (fidelity, syndrome, _) = roundtrip(&code, &q, error, rng)?;
                    fidelities.insert(error.to_string(), json!(fidelity));
                    syndromes.insert(error.to_string(), json!(syndrome.value));
                    min_fidelity = min_fidelity.min(fidelity);
                }
                Ok(report(json!({
                    "mode": "roundtrip",
                    "fidelities": fidelities,
                    "syndromes": syndromes,
                    "min_fidelity": min_fidelity,
                })))
            }
        }
        QeccMode::Montecarlo => {
            let estimate = logical_error_rate(&code, args.p, args.trials, seed)?;
            Ok(report(json!({
                "mode": "montecarlo",
                "p": estimate.p,
                "trials": estimate.trials,
                "failures": estimate.failures,
                "logical_rate": estimate.rate,
                "stderr": estimate.stderr,
            })))
        }
    }
}

fn roundtrip(
    code: &FiveQubitCode,
    q: &LogicalQubit,
    error: PauliError,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, qubitkit::Syndrome, PauliError)> {
    let mut state = code.encode(q);
    error.apply(&mut state)?;
    let syndrome = code.syndrome_extract(&mut state, rng)?;
    let recovered = code.recovery_for(syndrome.value)?;
    code.recover(&mut state, syndrome)?;
    let decoded = code.decode(&state)?;
    Ok((q.fidelity(&decoded), syndrome, recovered))
}

fn run_qft(args: &QftArgs) -> Result<Report> {
    let mut state = load_state(args.qubits, args.input.as_deref())?;
    let direction = if args.inverse { Direction::Inverse } else { Direction::Forward };
    apply_qft(&mut state, &QftSpec { span: Span::new(0, args.qubits), direction })?;
    finish_dump(
        json!({
            "qubits": args.qubits,
            "direction": if args.inverse { "inverse" } else { "forward" },
        }),
        &state,
        args.out.as_deref(),
    )
}

fn run_circuit(args: &CircuitArgs) -> Result<Report> {
    let text =
        fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file))?;
    let circuit = Circuit::parse(args.qubits, &text)?;
    let mut state = load_state(args.qubits, args.input.as_deref())?;
    apply_circuit(&mut state, &circuit)?;
    finish_dump(
        json!({
            "qubits": args.qubits,
            "gates": circuit.len(),
        }),
        &state,
        args.out.as_deref(),
    )
}

fn load_state(qubits: usize, input: Option<&str>) -> Result<StateVector> {
    match input {
        None => Ok(StateVector::basis_state(qubits, 0)?),
        Some(path) => {
            let file = fs::File::open(path).with_context(|| format!("opening {path}"))?;
            Ok(StateVector::from_dump(qubits, BufReader::new(file))?)
        }
    }
}

/// Shared tail of `qft` and `circuit`: dump to the `--out` file or stdout,
/// and carry the same dump in the JSON payload.
fn finish_dump(meta: Value, state: &StateVector, out: Option<&str>) -> Result<Report> {
    let dump = state.to_dump();
    let Value::Object(mut payload) = meta else {
        bail!("internal: dump metadata is not an object");
    };
    payload.insert("norm".into(), json!(state.norm_sqr().sqrt()));
    payload.insert("dump".into(), json!(dump));
    let text = match out {
        Some(path) => {
            fs::write(path, &dump).with_context(|| format!("writing {path}"))?;
            payload.insert("out".into(), json!(path));
            format!("wrote {path}\n")
        }
        None => dump,
    };
    Ok(Report { payload: Value::Object(payload), text: Some(text), ok: true })
}
