use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use brauer_core::blocks::{block_classes, same_limiting_block_with_trace, BlockCertificate};
use brauer_core::diagram::{multiply, parse_rational, BrauerDiagram, Residue, Scalar};
use brauer_core::homs::{enumerate_homs, SearchBounds};
use brauer_core::par::Execution;
use brauer_core::reduction::{is_b_reduced, reduce};
use brauer_core::weyl::{same_finite_w_orbit, same_wp_orbit, stable_truncation};
use brauer_core::{Abacus, Error, OddPrime, Partition};

/// Bumped whenever the shape of `--json` output changes.
const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "brauer", version, about = "Abacus combinatorics and limiting blocks of Brauer algebras")]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing; the exit code carries the answer.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw the abacus of a partition.
    Abacus {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        b: usize,
        partition: String,
    },
    /// p-core and p-weight.
    Core {
        #[arg(long)]
        p: u32,
        partition: String,
    },
    /// Reduce an abacus, printing the move word.
    Reduce {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        b: usize,
        partition: String,
    },
    /// Orbit questions.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Limiting-block questions.
    #[command(subcommand)]
    Block(BlockCmd),
    /// Homomorphism predictions.
    #[command(subcommand)]
    Homs(HomsCmd),
    /// Brauer diagram arithmetic.
    #[command(subcommand)]
    Diagram(DiagramCmd),
}

#[derive(Args)]
struct PairArgs {
    /// Integer δ; reduced mod p where a prime is involved.
    #[arg(long, allow_hyphen_values = true)]
    delta: i64,
    lambda: String,
    mu: String,
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Same orbit under the shifted action: W_p with --p, the finite W without.
    Same {
        #[arg(long)]
        p: Option<u32>,
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Subcommand)]
enum BlockCmd {
    /// Whether two partitions lie in one limiting block (exit 0 yes, 1 no).
    Same {
        #[arg(long)]
        p: u32,
        /// Treat the inputs as cell-module labels (transpose first).
        #[arg(long)]
        labels: bool,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Group the labels of sizes n, n-2, ... into limiting-block classes.
    Classes {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum HomsCmd {
    /// Predicted non-zero homomorphisms out of a partition.
    Predict {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Largest row index tried in reflections.
        #[arg(long, requires = "max_r")]
        max_index: Option<usize>,
        /// Largest |r| tried in reflections.
        #[arg(long, requires = "max_index")]
        max_r: Option<i64>,
        partition: String,
    },
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// Multiply two diagrams, x on top of y.
    Mul {
        #[arg(long)]
        n: usize,
        /// A rational such as 3 or -1/2, or an integer residue with --p.
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        p: Option<u32>,
        x: String,
        y: String,
    },
}

/// What a command produced: a verdict (for predicates) plus printable output.
struct Outcome {
    verdict: Option<bool>,
    inputs: Value,
    result: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run(&cli.command) {
        Ok(out) => {
            if !cli.quiet {
                let body = if cli.json {
                    let envelope = json!({
                        "command": name,
                        "version": FORMAT_VERSION,
                        "inputs": out.inputs,
                        "result": out.result,
                    });
                    serde_json::to_string_pretty(&envelope).expect("JSON values serialize") + "\n"
                } else {
                    out.text
                };
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = std::io::stdout().lock().write_all(body.as_bytes());
            }
            match out.verdict {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("brauer: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::Usage(_) => 2,
                Error::Domain(_) | Error::IllegalMove(_) | Error::Internal(_) => 3,
            })
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Abacus { .. } => "abacus",
        Command::Core { .. } => "core",
        Command::Reduce { .. } => "reduce",
        Command::Orbit(OrbitCmd::Same { .. }) => "orbit same",
        Command::Block(BlockCmd::Same { .. }) => "block same",
        Command::Block(BlockCmd::Classes { .. }) => "block classes",
        Command::Homs(HomsCmd::Predict { .. }) => "homs predict",
        Command::Diagram(DiagramCmd::Mul { .. }) => "diagram mul",
    }
}

fn partition(text: &str) -> Result<Partition, Error> {
    text.parse()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn char_p_inputs(p: OddPrime, delta: i64) -> Value {
    json!({ "p": p.get(), "delta": delta, "delta_mod_p": p.reduce(delta) })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Abacus { p, b, partition: text } => {
            let (p, lambda) = (OddPrime::new(*p)?, partition(text)?);
            let ab = Abacus::from_partition(&lambda, p, *b)?;
            let occupied: Vec<String> = ab.occupied().iter().map(u32::to_string).collect();
            Ok(Outcome {
                verdict: None,
                inputs: json!({ "partition": lambda, "p": p.get(), "b": b }),
                result: to_value(&ab),
                text: format!("{lambda} on {b} beads, p = {p}\n{}occupied: {}\n", ab.render(), occupied.join(" ")),
            })
        }
        Command::Core { p, partition: text } => {
            let (p, lambda) = (OddPrime::new(*p)?, partition(text)?);
            let (core, weight) = lambda.p_core_strip(p.get())?;
            Ok(Outcome {
                verdict: None,
                inputs: json!({ "partition": lambda, "p": p.get() }),
                result: json!({ "core": core, "weight": weight }),
                text: format!("core {core}, weight {weight}\n"),
            })
        }
        Command::Reduce { p, b, partition: text } => {
            let (p, lambda) = (OddPrime::new(*p)?, partition(text)?);
            let start = Abacus::from_partition(&lambda, p, *b)?;
            let (end, trace) = reduce(&lambda, p, *b)?;
            let mut text = format!("start {lambda}\n{}", start.render());
            text.push_str(&format!("{} moves\n", trace.len()));
            for mv in trace.moves() {
                text.push_str(&format!("  {mv}\n"));
            }
            text.push_str(&format!("end {}\n{}", end.to_partition(), end.render()));
            Ok(Outcome {
                verdict: None,
                inputs: json!({ "partition": lambda, "p": p.get(), "b": b }),
                result: json!({
                    "start": start,
                    "end": end,
                    "end_partition": end.to_partition(),
                    "reduced": is_b_reduced(&end),
                    "trace": trace,
                }),
                text,
            })
        }
        Command::Orbit(OrbitCmd::Same { p, pair }) => {
            let (lambda, mu) = (partition(&pair.lambda)?, partition(&pair.mu)?);
            let (same, inputs) = match p {
                Some(p) => {
                    let p = OddPrime::new(*p)?;
                    let same = same_wp_orbit(&lambda, &mu, p.reduce(pair.delta), p)?;
                    (same, merge(json!({ "lambda": lambda, "mu": mu, "group": "affine" }), char_p_inputs(p, pair.delta)))
                }
                None => {
                    let n = stable_truncation(&lambda, &mu, pair.delta);
                    let same = same_finite_w_orbit(&lambda, &mu, pair.delta, n)?;
                    (same, json!({ "lambda": lambda, "mu": mu, "delta": pair.delta, "group": "finite", "truncation": n }))
                }
            };
            Ok(Outcome {
                verdict: Some(same),
                inputs,
                result: json!({ "same_orbit": same }),
                text: format!("{}\n", if same { "same orbit" } else { "different orbits" }),
            })
        }
        Command::Block(BlockCmd::Same { p, labels, pair }) => {
            let p = OddPrime::new(*p)?;
            let (lambda, mu) = (partition(&pair.lambda)?, partition(&pair.mu)?);
            let (a, b) = if *labels { (lambda.transpose(), mu.transpose()) } else { (lambda.clone(), mu.clone()) };
            let delta = p.reduce(pair.delta);
            let cert: BlockCertificate = same_limiting_block_with_trace(&a, &b, delta, p)?;
            let show = |inv: &brauer_core::OrbitInvariant| {
                format!("runner0 {} paired {:?} parity {}", inv.runner0, inv.paired, inv.parity)
            };
            let mut text = format!(
                "{}\nb = {}\n  {}\n  {}\n",
                if cert.verdict { "same limiting block" } else { "different limiting blocks" },
                cert.b_used,
                show(&cert.invariant_lambda),
                show(&cert.invariant_mu)
            );
            if let Some(trace) = &cert.trace {
                text.push_str(&format!("connecting trace ({} moves):", trace.len()));
                for mv in trace.moves() {
                    text.push_str(&format!(" {mv}"));
                }
                text.push('\n');
            }
            Ok(Outcome {
                verdict: Some(cert.verdict),
                inputs: merge(json!({ "lambda": lambda, "mu": mu, "labels": labels }), char_p_inputs(p, pair.delta)),
                result: to_value(&cert),
                text,
            })
        }
        Command::Block(BlockCmd::Classes { p, delta, n }) => {
            let p = OddPrime::new(*p)?;
            let classes = block_classes(*n, p.reduce(*delta), p, Execution::default())?;
            let mut text = format!("{} limiting-block classes\n", classes.len());
            for class in &classes {
                let members: Vec<String> = class.iter().map(Partition::to_string).collect();
                text.push_str(&format!("  {}\n", members.join(" ")));
            }
            Ok(Outcome {
                verdict: None,
                inputs: merge(json!({ "n": n }), char_p_inputs(p, *delta)),
                result: json!({ "kind": "limiting-block classes", "classes": classes }),
                text,
            })
        }
        Command::Homs(HomsCmd::Predict { p, delta, max_index, max_r, partition: text }) => {
            let (p, lambda) = (OddPrime::new(*p)?, partition(text)?);
            let bounds = max_index.zip(*max_r).map(|(max_index, max_r)| SearchBounds { max_index, max_r });
            let preds = enumerate_homs(&lambda, p.reduce(*delta), p, bounds, Execution::default())?;
            let mut text = format!("{} predictions\n", preds.len());
            for pr in &preds {
                text.push_str(&format!(
                    "  Hom(Δ({}), Δ({})) ≠ 0 via {} [{:?}]\n",
                    pr.source, pr.target, pr.witness, pr.mechanism
                ));
            }
            Ok(Outcome {
                verdict: None,
                inputs: merge(json!({ "partition": lambda, "bounds": bounds }), char_p_inputs(p, *delta)),
                result: json!({ "predictions": preds }),
                text,
            })
        }
        Command::Diagram(DiagramCmd::Mul { n, delta, p, x, y }) => {
            let (x, y) = (BrauerDiagram::parse(x, *n)?, BrauerDiagram::parse(y, *n)?);
            let (loops, _) = x.compose(&y)?;
            let (coefficient, diagram) = match p {
                Some(p) => {
                    let p = OddPrime::new(*p)?;
                    let d: i64 = delta.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {delta:?}")))?;
                    describe(multiply(&x, &y, &Residue::new(d, p))?, |r| r.value().to_string())
                }
                None => {
                    let d: BigRational = parse_rational(delta)?;
                    describe(multiply(&x, &y, &d)?, |r| r.to_string())
                }
            };
            let text = match &diagram {
                Some(dg) => format!("{coefficient} * {dg}\n"),
                None => "0\n".to_string(),
            };
            Ok(Outcome {
                verdict: None,
                inputs: json!({ "n": n, "delta": delta, "p": p, "x": x.to_text(), "y": y.to_text() }),
                result: json!({ "loops": loops, "coefficient": coefficient, "diagram": diagram.map(|d| d.to_text()) }),
                text,
            })
        }
    }
}

fn describe<F: Scalar>(
    product: Option<brauer_core::diagram::ScaledDiagram<F>>,
    show: impl Fn(&F) -> String,
) -> (String, Option<BrauerDiagram>) {
    match product {
        Some(s) => (show(&s.coefficient), Some(s.diagram)),
        None => ("0".to_string(), None),
    }
}
