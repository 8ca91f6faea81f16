use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcat_core::dsl::{run_equation, Env};
use qcat_core::frobenius::{check_simple_seeded, full_report, wedderburn_irrep, FrobeniusMonoid};
use qcat_core::galois::roundtrip_report;
use qcat_core::morita::{check_bimodule, morita_report, rel_tensor_split, DaggerBimodule};
use qcat_core::qgraph::{check_quantum_graph, from_classical_graph, named, QuantumGraph};
use qcat_core::qiso::{
    brute_force_isos, check_endo_frobenius_seeded, check_quantum_iso, magic_unitary_iso, naturality_report,
    pair_of_pants, standard_projections, EndoFrobenius, QuantumIso,
};
use qcat_core::split::{split_report, SplitFunctor};
use qcat_core::{Execution, Json, Morphism, Report};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qcat", version, about = "Check quantum graph and quantum isomorphism data")]
struct Cli {
    /// Print a JSON report on stdout
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, env = "QCAT_TOL", default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, env = "QCAT_SEED", default_value_t = 42)]
    seed: u64,
    /// Run equation suites on one thread
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frobenius, special and symmetric axioms of a monoid
    CheckMonoid { path: PathBuf },
    /// Quantum graph axioms
    CheckGraph { path: PathBuf },
    /// Quantum isomorphism equations plus naturality on short words
    CheckIso {
        path: PathBuf,
        #[arg(long, default_value_t = 2)]
        words: usize,
    },
    /// Split a simple endo monoid: {"graph", "endo"} file, or the pair of pants of --iso
    Split {
        path: Option<PathBuf>,
        #[arg(long, conflicts_with = "path")]
        iso: Option<PathBuf>,
    },
    /// Simplicity verdict and matrix-algebra decomposition
    Wedderburn { path: PathBuf },
    /// α → π_α → α and the algebra laws of π_α on sampled elements
    Roundtrip {
        path: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Relative tensor product M ⊗_B N
    Relprod { m: PathBuf, n: PathBuf },
    /// Morita witness {"m", "n", "u1", "u2"}
    MoritaCheck { path: PathBuf },
    /// Compare two diagram expressions
    Eq {
        lhs: String,
        rhs: String,
        /// name=morphism.json
        #[arg(long = "bind", value_name = "NAME=PATH")]
        binds: Vec<String>,
        /// prefix=monoid.json, binds {prefix}m, {prefix}u, ...
        #[arg(long = "monoid", value_name = "PREFIX=PATH")]
        monoids: Vec<String>,
        /// prefix=graph.json, monoid names plus {prefix}g
        #[arg(long = "graph", value_name = "PREFIX=PATH")]
        graphs: Vec<String>,
    },
    /// Built-in worked examples
    Demo { which: Demo },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    K3Perms,
    Magic4,
    Pipeline,
}

struct Outcome {
    report: Report,
    extra: Option<Value>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, extra: None }
    }
}

fn split_pair(s: &str) -> Result<(&str, &str)> {
    s.split_once('=').ok_or_else(|| anyhow!("expected NAME=PATH, got `{s}`"))
}

fn read<T: Json>(p: &Path) -> Result<T> {
    T::read(p).with_context(|| format!("reading {}", p.display()))
}

fn magic() -> QuantumIso {
    let (p, q) = standard_projections();
    magic_unitary_iso(&p, &q).expect("magic unitary")
}

fn iso_report(q: &QuantumIso, words: usize, cli: &Cli, exec: Execution) -> Report {
    let mut rep = check_quantum_iso(q, cli.tol);
    rep.extend_prefixed("naturality", &naturality_report(q, words, cli.tol, exec));
    rep
}

fn split_outcome(e: &EndoFrobenius, cli: &Cli) -> Result<Outcome> {
    let mut rep = Report::new(cli.tol).with_seed(cli.seed);
    rep.extend_prefixed("endo", &check_endo_frobenius_seeded(e, cli.tol, cli.seed));
    let s = SplitFunctor::from_endo(e, cli.seed, cli.tol)?;
    let (g, q, r) = split_report(&s, cli.tol)?;
    for c in r.checks {
        rep.push_flag(c.name, c.residual, c.pass);
    }
    let extra = json!({ "graph": g.to_value(), "sqrt_alpha": q.to_value() });
    Ok(Outcome { report: rep, extra: Some(extra) })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    Ok(match &cli.cmd {
        Cmd::CheckMonoid { path } => full_report(&read::<FrobeniusMonoid>(path)?, cli.tol).into(),
        Cmd::CheckGraph { path } => check_quantum_graph(&read::<QuantumGraph>(path)?, cli.tol).into(),
        Cmd::CheckIso { path, words } => iso_report(&read::<QuantumIso>(path)?, *words, cli, exec).into(),
        Cmd::Split { path, iso } => {
            let e = match (path, iso) {
                (_, Some(iso)) => pair_of_pants(&read::<QuantumIso>(iso)?),
                (Some(p), None) => {
                    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    let mut v: Value = serde_json::from_str(&text)?;
                    let endo = v.get_mut("endo").map(Value::take).ok_or_else(|| anyhow!("missing \"endo\""))?;
                    let mut e = EndoFrobenius::from_value(endo)?;
                    if let Some(graph) = v.get_mut("graph").map(Value::take) {
                        e.base = QuantumGraph::from_value(graph)?;
                    }
                    e
                }
                (None, None) => bail!("give a {{graph, endo}} file or --iso"),
            };
            split_outcome(&e, cli)?
        }
        Cmd::Wedderburn { path } => {
            let a = read::<FrobeniusMonoid>(path)?;
            let verdict = check_simple_seeded(&a, cli.tol, cli.seed);
            let mut rep = full_report(&a, cli.tol).with_seed(cli.seed);
            rep.push_flag("simple", 0.0, verdict.simple);
            let mut extra = json!({ "verdict": verdict });
            if verdict.simple {
                let w = wedderburn_irrep(&a, cli.seed, cli.tol)?;
                rep.push("irrep", w.residual);
                extra["w"] = w.w.to_value();
                extra["k"] = json!(w.k);
            }
            Outcome { report: rep, extra: Some(extra) }
        }
        Cmd::Roundtrip { path, samples } => {
            roundtrip_report(&read::<QuantumIso>(path)?, *samples, cli.seed, cli.tol, exec).into()
        }
        Cmd::Relprod { m, n } => {
            let (m, n) = (read::<DaggerBimodule>(m)?, read::<DaggerBimodule>(n)?);
            let s = rel_tensor_split(&m, &n, cli.tol)?;
            let mut rep = Report::new(cli.tol);
            rep.push("idempotent.hermitian", s.hermitian_residual);
            rep.push("idempotent.idempotent", s.idempotent_residual);
            rep.extend_prefixed("bimodule", &check_bimodule(&s.bimodule, cli.tol));
            let extra = json!({ "bimodule": s.bimodule.to_value(), "iota": s.iota.to_value() });
            Outcome { report: rep, extra: Some(extra) }
        }
        Cmd::MoritaCheck { path } => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut v: Value = serde_json::from_str(&text)?;
            let mut take = |k: &str| v.get_mut(k).map(Value::take).ok_or_else(|| anyhow!("missing \"{k}\""));
            let m = DaggerBimodule::from_value(take("m")?)?;
            let n = DaggerBimodule::from_value(take("n")?)?;
            let u1 = Morphism::from_value(take("u1")?)?;
            let u2 = Morphism::from_value(take("u2")?)?;
            morita_report(&m, &n, &u1, &u2, cli.tol)?.into()
        }
        Cmd::Eq { lhs, rhs, binds, monoids, graphs } => {
            let mut env = Env::new();
            for b in binds {
                let (name, p) = split_pair(b)?;
                env.bind(name, read::<Morphism>(Path::new(p))?)?;
            }
            for b in monoids {
                let (prefix, p) = split_pair(b)?;
                env.bind_monoid(prefix, &read::<FrobeniusMonoid>(Path::new(p))?)?;
            }
            for b in graphs {
                let (prefix, p) = split_pair(b)?;
                env.bind_graph(prefix, &read::<QuantumGraph>(Path::new(p))?)?;
            }
            run_equation(lhs, rhs, &env, cli.tol)?.into()
        }
        Cmd::Demo { which } => demo(*which, cli, exec)?,
    })
}

fn demo(which: Demo, cli: &Cli, exec: Execution) -> Result<Outcome> {
    Ok(match which {
        Demo::K3Perms => {
            let k3 = from_classical_graph(&named::complete(3))?;
            let found = brute_force_isos(&k3, &k3, cli.tol, exec)?;
            let mut rep = Report::new(cli.tol);
            rep.push("automorphism_count", (found.len() as f64 - 6.0).abs());
            Outcome { report: rep, extra: Some(json!({ "isomorphisms": found })) }
        }
        Demo::Magic4 => {
            let q = magic();
            let mut rep = iso_report(&q, 2, cli, exec).with_seed(cli.seed);
            rep.extend_prefixed("roundtrip", &roundtrip_report(&q, 20, cli.seed, cli.tol, exec));
            Outcome { report: rep, extra: Some(json!({ "iso": q.to_value() })) }
        }
        Demo::Pipeline => split_outcome(&pair_of_pants(&magic()), cli)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut v = serde_json::to_value(&out.report).expect("report");
                if let Some(Value::Object(extra)) = out.extra {
                    v.as_object_mut().expect("object").extend(extra);
                }
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                print!("{}", out.report);
                let verdict = if out.report.all_pass() { "all checks pass" } else { "FAILED" };
                println!("{verdict} (tol {:e})", out.report.tol);
            }
            if out.report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
