//! `lhz`: layouts, encoders, compilation, simulation, verification and
//! error-model sweeps for the LHZ parity architecture.

mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lhz_core::circuit::{LogicalCircuit, PhysicalCircuit};
use lhz_core::codec::{decode_full, encode_full, plan_to_text};
use lhz_core::compiler::{compile_circuit, compile_gate, LoweringOptions, RotationSite};
use lhz_core::error_model::{logical_error_probability, monte_carlo_logical_error, parse_grid, ErrorParams, FlipScope, SWEEP_HEADER};
use lhz_core::format::{circuit_from_str, physical_to_json, physical_to_text, AnyCircuit};
use lhz_core::sim::{non_data_population, ChipState, Register, Statevector};
use lhz_core::budget::{ReportRow, CSV_HEADER};
use lhz_core::verify::{check_equivalence, reference_circuit, MAX_VERIFY_N};
use lhz_core::{build_layout, Layout};

use manifest::Manifest;

#[derive(Parser, Debug)]
#[command(name = "lhz", version, about = "LHZ parity-architecture compiler and verification tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Site {
    Center,
    Data,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the qubit layout, constraints and logical lines as JSON.
    Layout {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the full-chip encoding circuit (or decoding with --reverse).
    Encode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        reverse: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Lower a logical circuit to a nearest-neighbor physical circuit.
    Compile {
        #[arg(long)]
        input: PathBuf,
        /// Logical qubit count for text inputs without a header.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        peephole: bool,
        #[arg(long, value_enum, default_value = "center")]
        site: Site,
        /// Print the per-gate resource comparison CSV to stdout.
        #[arg(long)]
        report: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a circuit on the statevector simulator.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Data-qubit bit string (character k is qubit k) or `random`.
        #[arg(long, default_value = "random")]
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Encode before and decode after the circuit; implied for logical inputs.
        #[arg(long)]
        wrap: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a compiled circuit against the logical reference unitary.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Use this physical circuit instead of compiling the input.
        #[arg(long)]
        physical: Option<PathBuf>,
        #[arg(long)]
        peephole: bool,
        #[arg(long, value_enum, default_value = "center")]
        site: Site,
    },
    /// Sweep the logical error model over code sizes and physical error rates.
    Errors {
        #[arg(long, default_value = "3,5,7,9", value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value = "1e-5:1e-2:log20")]
        pphys_grid: String,
        /// Add Monte Carlo columns with this many trials per row.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Count scenario (a) per logical line instead of chip-wide.
        #[arg(long)]
        per_line: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Failure of a subcommand, mapped to the process exit code.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<lhz_core::Error> for Failure {
    fn from(e: lhz_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let manifest = Manifest::capture(&cli.command);
    match run(cli.command, &manifest) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, body: &str) -> CmdResult {
    match output {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path, n: Option<usize>) -> Result<AnyCircuit, Failure> {
    let text = read(path)?;
    circuit_from_str(&text, n).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_logical(path: &Path, n: Option<usize>) -> Result<LogicalCircuit, Failure> {
    match load_circuit(path, n)? {
        AnyCircuit::Logical(c) => Ok(c),
        AnyCircuit::Physical(_) => Err(Failure::Usage(format!("{}: expected a logical circuit", path.display()))),
    }
}

fn options(site: Site, peephole: bool) -> LoweringOptions {
    let site = match site {
        Site::Center => RotationSite::Center,
        Site::Data => RotationSite::Data,
    };
    LoweringOptions::new(site, peephole)
}

/// JSON object with the manifest as its first field, then the body fields.
fn with_manifest<T: Serialize>(manifest: &Manifest, body: &T) -> Result<String, Failure> {
    let mut v = serde_json::to_value(body)?;
    let mut out = serde_json::Map::new();
    out.insert("manifest".into(), serde_json::to_value(manifest)?);
    if let serde_json::Value::Object(fields) = &mut v {
        out.append(fields);
    } else {
        out.insert("result".into(), v);
    }
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(out))?;
    s.push('\n');
    Ok(s)
}

fn json_circuit(manifest: &Manifest, json: String) -> Result<String, Failure> {
    let v: serde_json::Value = serde_json::from_str(&json)?;
    with_manifest(manifest, &v)
}

fn run(cmd: Command, manifest: &Manifest) -> CmdResult {
    match cmd {
        Command::Layout { n, output } => {
            let layout = build_layout(n)?;
            emit(output.as_deref(), &with_manifest(manifest, &layout.to_doc())?)
        }
        Command::Encode {
            n,
            reverse,
            format,
            output,
        } => {
            let layout = build_layout(n)?;
            let plan = if reverse { decode_full(&layout) } else { encode_full(&layout) };
            let body = match format {
                Format::Json => json_circuit(manifest, physical_to_json(&plan.circuit)?)?,
                Format::Text => format!("{}{}", manifest.comment_line(), plan_to_text(&plan)),
            };
            emit(output.as_deref(), &body)
        }
        Command::Compile {
            input,
            n,
            peephole,
            site,
            report,
            format,
            output,
        } => {
            let logical = load_logical(&input, n)?;
            let layout = build_layout(logical.n)?;
            let opts = options(site, peephole);
            let compiled = compile_circuit(&layout, &logical, opts)?;
            let body = match format {
                Format::Json => json_circuit(manifest, physical_to_json(&compiled.physical)?)?,
                Format::Text => format!("{}{}", manifest.comment_line(), physical_to_text(&compiled.physical)),
            };
            if report {
                let mut csv = format!("{}{CSV_HEADER}\n", manifest.comment_line());
                for g in &logical.gates {
                    let row = ReportRow::from_compiled(&compile_gate(&layout, g, opts)?, layout.n());
                    csv.push_str(&row.to_csv());
                    csv.push('\n');
                }
                print!("{csv}");
                if let Some(p) = output {
                    fs::write(p, body)?;
                }
                Ok(())
            } else {
                emit(output.as_deref(), &body)
            }
        }
        Command::Simulate {
            circuit,
            n,
            input,
            seed,
            wrap,
            output,
        } => simulate(manifest, &circuit, n, &input, seed, wrap, output.as_deref()),
        Command::Verify {
            input,
            n,
            seed,
            trials,
            physical,
            peephole,
            site,
        } => verify(manifest, &input, n, seed, trials, physical.as_deref(), options(site, peephole)),
        Command::Errors {
            n_list,
            pphys_grid,
            mc,
            seed,
            per_line,
            output,
        } => errors(manifest, &n_list, &pphys_grid, mc, seed, per_line, output.as_deref()),
    }
}

#[derive(Serialize)]
struct Amplitude {
    index: usize,
    basis: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SimulationOutput {
    n: usize,
    register: Vec<String>,
    /// `data` when the parity qubits ended in |0> and only data amplitudes are listed.
    amplitudes_over: &'static str,
    residual_parity: f64,
    amplitudes: Vec<Amplitude>,
    outcomes: Vec<(String, u8)>,
}

fn initial_state(n: usize, input: &str, rng: &mut ChaCha8Rng) -> Result<Statevector, Failure> {
    if input == "random" {
        return Ok(Statevector::random(n, rng)?);
    }
    if input.len() != n || !input.chars().all(|c| c == '0' || c == '1') {
        return Err(Failure::Usage(format!("--input must be `random` or {n} binary digits, got {input:?}")));
    }
    let index = input.chars().enumerate().filter(|(_, c)| *c == '1').map(|(k, _)| 1usize << k).sum();
    Ok(Statevector::basis(n, index)?)
}

fn simulate(manifest: &Manifest, path: &Path, n: Option<usize>, input: &str, seed: u64, wrap: bool, output: Option<&Path>) -> CmdResult {
    let (layout, physical, wrap): (Layout, PhysicalCircuit, bool) = match load_circuit(path, n)? {
        AnyCircuit::Logical(lc) => {
            let layout = build_layout(lc.n)?;
            let c = compile_circuit(&layout, &lc, LoweringOptions::default())?.physical;
            (layout, c, true)
        }
        AnyCircuit::Physical(c) => (build_layout(c.n)?, c, wrap),
    };
    physical.validate(&layout)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = initial_state(layout.n(), input, &mut rng)?;
    let reg = Register::for_circuit(&layout, &physical);
    let mut chip = ChipState::with_data_state(reg, &psi)?;
    if wrap {
        chip.run_unitary(&encode_full(&layout).circuit)?;
    }
    chip.run(&physical, &mut rng)?;
    if wrap {
        chip.run_unitary(&decode_full(&layout).circuit)?;
    }
    let residual = non_data_population(&chip.state, layout.n());
    let decoded = residual <= 1e-10;
    let amps = chip.state.amplitudes();
    let ids = chip.register.ids();
    let limit = if decoded { 1usize << layout.n() } else { amps.len() };
    let amplitudes = amps[..limit]
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 1e-24)
        .map(|(index, a)| Amplitude {
            index,
            basis: (0..if decoded { layout.n() } else { ids.len() })
                .map(|k| if index >> k & 1 == 1 { '1' } else { '0' })
                .collect(),
            re: a.re,
            im: a.im,
        })
        .collect();
    let out = SimulationOutput {
        n: layout.n(),
        register: if decoded {
            ids[..layout.n()].iter().map(|q| q.to_string()).collect()
        } else {
            ids.iter().map(|q| q.to_string()).collect()
        },
        amplitudes_over: if decoded { "data" } else { "register" },
        residual_parity: residual,
        amplitudes,
        outcomes: chip.outcomes.iter().map(|(q, o)| (q.to_string(), *o)).collect(),
    };
    emit(output, &with_manifest(manifest, &out)?)
}

#[derive(Serialize)]
struct VerifyOutput {
    n: usize,
    trials: usize,
    min_fidelity: f64,
    max_residual: f64,
    passed: bool,
}

fn verify(manifest: &Manifest, input: &Path, n: Option<usize>, seed: u64, trials: usize, physical: Option<&Path>, opts: LoweringOptions) -> CmdResult {
    let logical = load_logical(input, n)?;
    if logical.n > MAX_VERIFY_N {
        return Err(Failure::Usage(format!(
            "n = {} exceeds the simulator cap of n = {MAX_VERIFY_N} ({} physical qubits)",
            logical.n,
            logical.n * (logical.n + 1) / 2
        )));
    }
    let layout = build_layout(logical.n)?;
    let circuit = match physical {
        Some(p) => match load_circuit(p, Some(logical.n))? {
            AnyCircuit::Physical(c) if c.n == logical.n => c,
            AnyCircuit::Physical(c) => {
                return Err(Failure::Usage(format!("physical circuit is over n = {}, logical over n = {}", c.n, logical.n)))
            }
            AnyCircuit::Logical(_) => return Err(Failure::Usage(format!("{}: expected a physical circuit", p.display()))),
        },
        None => compile_circuit(&layout, &logical, opts)?.physical,
    };
    circuit.validate(&layout)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = check_equivalence(&layout, &circuit, &reference_circuit(&logical)?, trials, &mut rng)?;
    let out = VerifyOutput {
        n: logical.n,
        trials,
        min_fidelity: r.min_fidelity,
        max_residual: r.max_residual,
        passed: r.passed(),
    };
    print!("{}", with_manifest(manifest, &out)?);
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "min fidelity {:e}, max parity residual {:e}",
            r.min_fidelity, r.max_residual
        )))
    }
}

fn errors(manifest: &Manifest, ns: &[usize], grid: &str, mc: Option<u64>, seed: u64, per_line: bool, output: Option<&Path>) -> CmdResult {
    let grid = parse_grid(grid)?;
    let scope = if per_line { FlipScope::Line } else { FlipScope::Chip };
    let mut csv = manifest.comment_line();
    csv.push_str(SWEEP_HEADER);
    if mc.is_some() {
        csv.push_str(",p_L_mc,se_mc");
    }
    csv.push('\n');
    for &n in ns {
        for &p in &grid {
            let params = ErrorParams::uniform(n, p).with_scope(scope);
            let r = logical_error_probability(&params)?;
            csv.push_str(&format!("{n},{p:e},{:e},{:e},{:e}", r.p_a, r.p_b, r.p_l));
            if let Some(trials) = mc {
                let m = monte_carlo_logical_error(&params, trials, seed)?;
                csv.push_str(&format!(",{:e},{:e}", m.p_l, m.std_error.unwrap_or(0.0)));
            }
            csv.push('\n');
        }
    }
    emit(output, &csv)
}
