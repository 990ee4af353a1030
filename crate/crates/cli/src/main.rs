use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sicaut::analysis::{
    hadamard_aut, sandwich_report, sic_aut, tilde_strong_aut, weak_equiv_to_strong_sic_witness, EquivalenceWitness,
    GroupSummary, Strength,
};
use sicaut::autgraph::DEFAULT_BUDGET;
use sicaut::exactalg::{ConjRing, RingSpec};
use sicaut::hadamard::{check_modular_hadamard, HadamardSpec, DEFAULT_ORDER_CAP};
use sicaut::permgroup::PermGroup;
use sicaut::sic::{applicable_primes, construct_sic, ring_from_json, scan_dimensions, vectors_from_json, verify_sic};
use sicaut::{with_ring, Error};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sicaut", version, about = "Build SICs from modular Hadamard matrices and compute their symmetry groups")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest matrix order any recipe may build.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cap: usize,

    /// Search-tree node budget for automorphism searches.
    #[arg(long, global = true, env = "SICAUT_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Accepted for reproducible invocations; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate or check sign matrices.
    Hadamard {
        #[command(subcommand)]
        action: HadamardCmd,
    },
    /// Build, verify and scan SICs.
    Sic {
        #[command(subcommand)]
        action: SicCmd,
    },
    /// Automorphism groups.
    Aut {
        #[command(subcommand)]
        target: AutCmd,
    },
    /// The inclusion chain iota(Aut_w(H)) <= Aut_s(x) <= Aut_w(x) <= Aut_s(H~).
    Sandwich(SicInput),
    /// Equivalence witnesses.
    Witness {
        #[command(subcommand)]
        action: WitnessCmd,
    },
}

#[derive(Subcommand, Debug)]
enum HadamardCmd {
    /// Print a generated matrix.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Write the matrix here instead of standard output.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Check H^T H = d I modulo a prime (0 for integer equality).
    Check {
        #[arg(long)]
        had: HadamardSpec,
        #[arg(long = "mod")]
        modulus: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Sylvester matrix of order 2^k.
    Sylvester { k: u32 },
    /// Paley matrix from a prime q.
    Paley {
        q: u64,
        #[arg(long, value_enum, default_value_t = PaleyArg::I)]
        kind: PaleyArg,
    },
    /// Kronecker product of two recipes.
    Kron { a: HadamardSpec, b: HadamardSpec },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PaleyArg {
    #[value(name = "1", alias = "I")]
    I,
    #[value(name = "2", alias = "II")]
    II,
}

#[derive(Args, Debug)]
struct SicInput {
    /// Recipe (`sylvester:k`, `paley1:q`, `paley2:q`, `kron:a,b`) or .had file.
    #[arg(long)]
    had: HadamardSpec,
    /// `gf:p` (p = 3 mod 4), `gauss` or `gaussq`.
    #[arg(long)]
    ring: RingSpec,
}

#[derive(Subcommand, Debug)]
enum SicCmd {
    /// Construct the SIC of a sign matrix and verify it.
    Build {
        #[command(flatten)]
        input: SicInput,
        /// Also write the SIC document (JSON) here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Verify the SIC axioms for vectors in a JSON document.
    Verify {
        input: PathBuf,
        /// Override the document's ring.
        #[arg(long)]
        ring: Option<RingSpec>,
    },
    /// Primes p = 3 mod 4 that admit the construction in dimension d.
    Primes {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Dimensions up to a bound that admit the construction over F_{p^2}.
    Scan {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Subcommand, Debug)]
enum AutCmd {
    /// Weak (pairs on rows and columns) or strong automorphisms of a matrix.
    Hadamard {
        #[arg(long)]
        had: HadamardSpec,
        #[arg(long, default_value = "weak")]
        strength: Strength,
    },
    /// Weak or strong automorphisms of the constructed SIC.
    Sic {
        #[command(flatten)]
        input: SicInput,
        #[arg(long, default_value = "strong")]
        strength: Strength,
    },
    /// Strong automorphisms of H~.
    Tilde {
        #[arg(long)]
        had: HadamardSpec,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Check a weak equivalence H -> H' and the SIC map it induces.
    Check {
        #[arg(long)]
        had: HadamardSpec,
        #[arg(long = "had2")]
        had2: HadamardSpec,
        /// JSON object with `pi`, `sigma`, `row_signs`, `col_signs`.
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        ring: RingSpec,
    },
}

/// What a command produced: a document and whether its check passed.
struct Output {
    doc: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn passed(doc: Value, text: String) -> Self {
        Output { doc, text, ok: true }
    }
}

fn read_json(path: &Path) -> sicaut::Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> sicaut::Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn group_text(name: &str, g: &GroupSummary) -> String {
    let orbits: Vec<String> = g.orbit_sizes().iter().map(usize::to_string).collect();
    let transitivity = match g.transitivity {
        0 => "intransitive".to_string(),
        k => format!("{k}-transitive"),
    };
    format!(
        "{name}: order {}, {} generators, orbit sizes [{}], {transitivity}",
        g.order,
        g.generators.len(),
        orbits.join(", "),
    )
}

fn group_output(kind: &str, group: PermGroup, extra: Value) -> Output {
    let summary = GroupSummary::of(group);
    let text = group_text(kind, &summary);
    let mut doc = serde_json::to_value(&summary).expect("summary serializes");
    doc["kind"] = Value::from(kind);
    doc["degree"] = Value::from(summary.group.degree());
    if let Value::Object(map) = extra {
        for (k, v) in map {
            doc[k] = v;
        }
    }
    Output::passed(doc, text)
}

fn run(cli: &Cli) -> sicaut::Result<Output> {
    let (cap, budget) = (cli.cap, cli.budget);
    match &cli.command {
        Command::Hadamard { action } => match action {
            HadamardCmd::Gen { kind, out } => {
                let spec = match kind {
                    GenKind::Sylvester { k } => HadamardSpec::Sylvester(*k),
                    GenKind::Paley { q, kind: PaleyArg::I } => HadamardSpec::Paley1(*q),
                    GenKind::Paley { q, kind: PaleyArg::II } => HadamardSpec::Paley2(*q),
                    GenKind::Kron { a, b } => HadamardSpec::Kron(Box::new(a.clone()), Box::new(b.clone())),
                };
                let m = spec.build(cap)?;
                let text = m.render();
                let rows: Vec<&str> = text.lines().collect();
                let mut doc = json!({"recipe": spec.to_string(), "order": m.order(), "rows": rows});
                if let Some(path) = out {
                    write_file(path, &text)?;
                    let shown = format!("wrote order-{} matrix to {}", m.order(), path.display());
                    doc = json!({"recipe": spec.to_string(), "order": m.order(), "path": path.display().to_string()});
                    return Ok(Output::passed(doc, shown));
                }
                Ok(Output::passed(doc, text.trim_end().to_string()))
            }
            HadamardCmd::Check { had, modulus } => {
                let m = had.build(cap)?;
                let cert = check_modular_hadamard(&m, *modulus)?;
                let text = match cert.failure_witness {
                    None => format!("order {}: H^T H = d I holds modulo {}", m.order(), modulus),
                    Some((i, j, v)) => format!(
                        "order {}: fails modulo {modulus} at ({i}, {j}) with inner product {v}",
                        m.order()
                    ),
                };
                let mut doc = serde_json::to_value(&cert).expect("certificate serializes");
                doc["order"] = Value::from(m.order());
                Ok(Output { doc, text, ok: cert.valid })
            }
        },
        Command::Sic { action } => match action {
            SicCmd::Build { input, out } => {
                let h = input.had.build(cap)?;
                with_ring!(input.ring, |r| {
                    let s = construct_sic(&h, r)?;
                    let verdict = verify_sic(s.ring(), s.vectors());
                    let mut doc = s.to_json();
                    doc["recipe"] = Value::from(input.had.to_string());
                    if let Some(path) = out {
                        let body = serde_json::to_string_pretty(&doc).expect("document serializes");
                        write_file(path, &(body + "\n"))?;
                    }
                    doc["verdict"] = verdict.to_json(s.ring());
                    let fmt = |x: &Option<_>| x.as_ref().map_or("-".to_string(), |x| s.ring().format(x));
                    let text = format!(
                        "{}verdict: {} (a, b, c) = ({}, {}, {})",
                        s.render_matrix(),
                        if verdict.pass { "pass" } else { "FAIL" },
                        fmt(&verdict.a),
                        fmt(&verdict.b),
                        fmt(&verdict.c)
                    );
                    Ok(Output { doc, text, ok: verdict.pass })
                })
            }
            SicCmd::Verify { input, ring } => {
                let doc = read_json(input)?;
                let spec = match ring {
                    Some(r) => *r,
                    None => ring_from_json(&doc)?,
                };
                with_ring!(spec, |r| {
                    let vectors = vectors_from_json(&r, &doc)?;
                    let verdict = verify_sic(&r, &vectors);
                    let text = match &verdict.failed {
                        None => format!("pass: {} vectors in dimension {}", vectors.len(), vectors.first().map_or(0, Vec::len)),
                        Some(f) => format!("FAIL: {}", serde_json::to_string(f).expect("failure serializes")),
                    };
                    Ok(Output { doc: verdict.to_json(&r), text, ok: verdict.pass })
                })
            }
            SicCmd::Primes { dim, bound } => {
                let ap = applicable_primes(*dim, *bound);
                let list: Vec<String> = ap.primes.iter().map(u64::to_string).collect();
                let text = if ap.all {
                    format!("d = {dim}: every prime p = 3 mod 4 (listed up to {bound}): {}", list.join(" "))
                } else {
                    format!("d = {dim}: {}", if list.is_empty() { "none".to_string() } else { list.join(" ") })
                };
                Ok(Output::passed(serde_json::to_value(&ap).expect("serializes"), text))
            }
            SicCmd::Scan { prime, max } => {
                let entries = scan_dimensions(*prime, *max, cap)?;
                let text = entries.iter().map(|e| format!("{} {}", e.d, e.recipe)).collect::<Vec<_>>().join("\n");
                let doc = json!({"prime": prime, "max": max, "dimensions": entries});
                Ok(Output::passed(doc, text))
            }
        },
        Command::Aut { target } => match target {
            AutCmd::Hadamard { had, strength } => {
                let m = had.build(cap)?;
                let a = hadamard_aut(&m, *strength, budget)?;
                let pairs: Vec<Value> = a
                    .generator_pairs()
                    .into_iter()
                    .map(|(p, s)| json!({"pi": p, "sigma": s}))
                    .collect();
                let kind = format!("{strength} automorphisms of H");
                let extra = json!({"strength": strength, "d": m.order(), "pairs": pairs, "nodes": a.nodes});
                Ok(group_output(&kind, a.group, extra))
            }
            AutCmd::Sic { input, strength } => {
                let h = input.had.build(cap)?;
                with_ring!(input.ring, |r| {
                    let s = construct_sic(&h, r)?;
                    let a = sic_aut(&s, *strength, budget)?;
                    let recolorings: Vec<Value> = a
                        .recolorings
                        .iter()
                        .map(|(rc, p)| json!({"eps": rc.eps, "conj": rc.conj, "witness": p}))
                        .collect();
                    let kind = format!("{strength} automorphisms of the SIC");
                    let extra = json!({
                        "strength": strength,
                        "ring": s.ring().spec().to_string(),
                        "d": s.d(),
                        "color_fixed_order": a.color_fixed.order().to_string(),
                        "recolorings": recolorings,
                        "nodes": a.nodes,
                    });
                    Ok(group_output(&kind, a.group, extra))
                })
            }
            AutCmd::Tilde { had } => {
                let m = had.build(cap)?;
                let a = tilde_strong_aut(&m, budget)?;
                let extra = json!({"d": m.order(), "nodes": a.nodes});
                Ok(group_output("strong automorphisms of H~", a.group, extra))
            }
        },
        Command::Sandwich(input) => {
            let h = input.had.build(cap)?;
            let report = sandwich_report(&h, input.ring, budget)?;
            let names = ["iota(Aut_w(H))", "Aut_s(x)", "Aut_w(x)", "Aut_s(H~)"];
            let mut lines: Vec<String> = names
                .iter()
                .zip(report.groups.chain())
                .map(|(n, g)| group_text(n, g))
                .collect();
            let idx: Vec<String> = report.indices.iter().map(|i| i.to_string()).collect();
            lines.push(format!("indices: {}", idx.join(", ")));
            lines.push(format!("totally asymmetric: {}", report.totally_asymmetric));
            let mut doc = report.to_json();
            doc["recipe"] = Value::from(input.had.to_string());
            Ok(Output::passed(doc, lines.join("\n")))
        }
        Command::Witness { action } => match action {
            WitnessCmd::Check { had, had2, witness, ring } => {
                let h = had.build(cap)?;
                let h2 = had2.build(cap)?;
                let w: EquivalenceWitness = serde_json::from_value(read_json(witness)?)
                    .map_err(|e| Error::Parse(format!("{}: {e}", witness.display())))?;
                with_ring!(*ring, |r| {
                    match weak_equiv_to_strong_sic_witness(&h, &h2, &w, &r) {
                        Ok(map) => {
                            let text = format!(
                                "valid: iota(pi, sigma) maps the SIC of H to that of H' ({} vectors checked)",
                                map.scalars.len()
                            );
                            let doc = json!({"valid": true, "ring": r.spec().to_string(), "induced": map});
                            Ok(Output::passed(doc, text))
                        }
                        Err(Error::InvalidWitness(msg)) => Ok(Output {
                            doc: json!({"valid": false, "reason": msg}),
                            text: format!("invalid witness: {msg}"),
                            ok: false,
                        }),
                        Err(e) => Err(e),
                    }
                })
            }
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::InvalidWitness(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.doc).expect("document serializes")
            } else {
                out.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let mut stdout = io::stdout().lock();
            if !body.is_empty() {
                let _ = writeln!(stdout, "{body}");
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
