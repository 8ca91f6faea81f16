//! Fixtures shared by the corpus and acceptance targets.
#![allow(dead_code)]

use qcat_core::dsl::{evaluate, parse, Env};
use qcat_core::frobenius::{check_comonoid, full_report, FrobeniusMonoid};
use qcat_core::hilb::residual;
use qcat_core::qgraph::{check_quantum_graph, from_classical_graph, named, QuantumGraph};
use qcat_core::qiso::{check_quantum_iso, magic_unitary_iso, standard_projections, QuantumIso};
use qcat_core::random::{random_morphism, random_unitary, rng};
use qcat_core::Morphism;

pub const CORPUS: &str = include_str!("../golden/dsl_corpus.txt");

#[derive(Debug)]
pub struct Entry {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub check: Option<String>,
}

pub fn corpus() -> Vec<Entry> {
    CORPUS
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split(" | ").collect();
            assert_eq!(parts.len(), 4, "malformed corpus line `{l}`");
            Entry {
                label: parts[0].to_string(),
                lhs: parts[1].to_string(),
                rhs: parts[2].to_string(),
                check: (parts[3] != "-").then(|| parts[3].to_string()),
            }
        })
        .collect()
}

pub struct Fixture {
    pub graph: QuantumGraph,
    pub iso: QuantumIso,
    pub f: Morphism,
}

/// K₃ moved off the computational basis by a seeded unitary, the magic
/// unitary iso, and a random 2 → 3 map.
pub fn fixture() -> Fixture {
    let mut r = rng(2024);
    let k3 = from_classical_graph(&named::complete(3)).unwrap();
    let graph = k3.transport(&random_unitary(&mut r, 3)).unwrap();
    let (p, q) = standard_projections();
    let iso = magic_unitary_iso(&p, &q).unwrap();
    Fixture { graph, iso, f: random_morphism(&mut r, &[2], &[3]) }
}

/// Same shapes with every structure map pushed off its axioms.
pub fn perturbed(fx: &Fixture, eps: f64) -> Fixture {
    let mut r = rng(77);
    let mut noise = |f: &Morphism| {
        let n = random_morphism(&mut r, f.dom().factors(), f.cod().factors()).scale_re(eps);
        f.add(&n).unwrap()
    };
    let a = &fx.graph.monoid;
    let monoid = FrobeniusMonoid { dim: a.dim, mult: noise(&a.mult), unit: noise(&a.unit) };
    let graph = QuantumGraph::new(monoid, noise(&fx.graph.gamma)).unwrap();
    let mut iso = fx.iso.clone();
    iso.p = noise(&iso.p);
    iso.source.gamma = noise(&iso.source.gamma);
    iso.target = iso.source.clone();
    Fixture { graph, iso, f: fx.f.clone() }
}

pub fn env(fx: &Fixture) -> Env {
    let mut env = Env::new();
    env.bind_graph("", &fx.graph).unwrap();
    env.bind_graph("X.", &fx.iso.source).unwrap();
    env.bind_iso("", &fx.iso).unwrap();
    env.bind("f", fx.f.clone()).unwrap();
    env
}

/// The residual a module suite reports for `suite.check`.
pub fn module_residual(fx: &Fixture, check: &str, tol: f64) -> f64 {
    let (suite, name) = check.split_once('.').unwrap();
    let rep = match suite {
        "frobenius" => full_report(&fx.graph.monoid, tol),
        "comonoid" => check_comonoid(&fx.graph.monoid, tol),
        "graph" => check_quantum_graph(&fx.graph, tol),
        "iso" => check_quantum_iso(&fx.iso, tol),
        other => panic!("unknown suite {other}"),
    };
    rep.residual(name).unwrap_or_else(|| panic!("no check {check}"))
}

pub struct CorpusOutcome {
    pub entries: usize,
    pub round_trip_failures: Vec<String>,
    /// Worst residual of any equation on the exact fixture.
    pub max_equation_residual: f64,
    /// Worst |DSL residual − module residual| across both fixtures.
    pub max_disagreement: f64,
    pub cross_checked: usize,
}

pub fn run_corpus(tol: f64) -> CorpusOutcome {
    let entries = corpus();
    let exact = fixture();
    let noisy = perturbed(&exact, 1e-3);
    let mut out = CorpusOutcome {
        entries: entries.len(),
        round_trip_failures: Vec::new(),
        max_equation_residual: 0.0,
        max_disagreement: 0.0,
        cross_checked: 0,
    };
    for (fx, is_exact) in [(&exact, true), (&noisy, false)] {
        let env = env(fx);
        for e in &entries {
            let l = parse(&e.lhs).unwrap_or_else(|err| panic!("{}: {err}", e.label));
            let r = parse(&e.rhs).unwrap_or_else(|err| panic!("{}: {err}", e.label));
            if is_exact {
                for (text, ast) in [(&e.lhs, &l), (&e.rhs, &r)] {
                    if ast.to_string() != *text || parse(&ast.to_string()).unwrap() != *ast {
                        out.round_trip_failures.push(format!("{}: `{text}` -> `{ast}`", e.label));
                    }
                }
            }
            let lv = evaluate(&l, &env).unwrap_or_else(|err| panic!("{}: {err}", e.label));
            let rv = evaluate(&r, &env).unwrap_or_else(|err| panic!("{}: {err}", e.label));
            let res = residual(&lv, &rv).unwrap();
            if is_exact {
                out.max_equation_residual = out.max_equation_residual.max(res);
            }
            if let Some(check) = &e.check {
                let m = module_residual(fx, check, tol);
                out.max_disagreement = out.max_disagreement.max((res - m).abs());
                out.cross_checked += 1;
            }
        }
    }
    out
}
