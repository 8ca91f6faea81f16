//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use qcat_core::frobenius::{check_simple, classical_monoid, endo_algebra, endo_monoid, transport, FrobeniusMonoid};
use qcat_core::galois::{alpha_from_pi, pi_generators, roundtrip_report};
use qcat_core::hilb::{
    cap, chain, compose, cup, dagger, residual, tensor, trace, transpose, Mat, Morphism, Shape,
};
use qcat_core::morita::{absorption_unitary, bimodule_morphism_residuals, rel_tensor_split, trivial_bimodule};
use qcat_core::qgraph::{check_quantum_graph, from_classical_graph, named};
use qcat_core::qiso::{
    brute_force_isos, check_endo_frobenius, check_quantum_iso, from_permutation, magic_unitary_iso, pair_of_pants,
    permutations, standard_projections, Letter, QuantumIso,
};
use qcat_core::random::{random_morphism, random_unitary, rng};
use qcat_core::split::{split_report, SplitFunctor};
use qcat_core::{Execution, C64};
use rand::Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn res(a: &Morphism, b: &Morphism) -> f64 {
    residual(a, b).unwrap()
}

fn id(n: usize) -> Morphism {
    Morphism::id(n)
}

fn magic() -> QuantumIso {
    let (p, q) = standard_projections();
    magic_unitary_iso(&p, &q).unwrap()
}

/// gᵀ drawn with a cup and a cap.
fn bent_transpose(g: &Morphism) -> Morphism {
    let (m, n) = (g.cod().total(), g.dom().total());
    chain(&[&tensor(&cup(n), &id(m)), &tensor(&tensor(&id(n), g), &id(m)), &tensor(&id(n), &cap(m))]).unwrap()
}

fn kernel_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let (m, n) = (r.random_range(1..=6), r.random_range(1..=6));
        let f = random_morphism(&mut r, &[m], &[n]);
        let g = random_morphism(&mut r, &[n], &[n]);
        // snakes on both sides
        let s1 = chain(&[&tensor(&id(n), &cup(n)), &tensor(&cap(n), &id(n))]).unwrap();
        let s2 = chain(&[&tensor(&cup(n), &id(n)), &tensor(&id(n), &cap(n))]).unwrap();
        worst = worst.max(res(&s1, &id(n))).max(res(&s2, &id(n)));
        // sliding through cups and caps
        let ft = Morphism::new(Shape::of(&[n]), Shape::of(&[m]), f.matrix().transpose()).unwrap();
        let slides = [
            (compose(&tensor(&f, &id(m)), &cup(m)), compose(&tensor(&id(n), &ft), &cup(n))),
            (compose(&cap(n), &tensor(&f, &id(n))), compose(&cap(m), &tensor(&id(m), &ft))),
            (compose(&tensor(&id(m), &f), &cup(m)), compose(&tensor(&ft, &id(n)), &cup(n))),
            (compose(&cap(n), &tensor(&id(n), &f)), compose(&cap(m), &tensor(&ft, &id(m)))),
        ];
        for (l, r) in slides {
            worst = worst.max(res(&l.unwrap(), &r.unwrap()));
        }
        worst = worst.max(res(&bent_transpose(&f), &ft)).max(res(&transpose(&f), &ft));
        // the transpose of the dagger is the entrywise conjugate
        let conj = Morphism::new(Shape::of(&[m]), Shape::of(&[n]), f.matrix().conjugate()).unwrap();
        worst = worst.max(res(&bent_transpose(&dagger(&f)), &conj));
        // left trace, right trace, matrix trace
        let lt = chain(&[&cup(n), &tensor(&id(n), &g), &cap(n)]).unwrap().as_scalar().unwrap();
        let rt = chain(&[&cup(n), &tensor(&g, &id(n)), &cap(n)]).unwrap().as_scalar().unwrap();
        let tr = g.matrix().trace();
        let scale = 1.0f64.max(g.norm());
        worst = worst.max((lt - rt).norm() / scale).max((lt - tr).norm() / scale);
        worst = worst.max((trace(&g).unwrap() - tr).norm() / scale);
    }
    let t = start.elapsed();
    let pass = worst <= 1e-10 && t < Duration::from_secs(5);
    outcome(pass, format!("200 morphisms, max residual {worst:.2e} (<= 1e-10), {:.2} s (< 5 s)", secs(t)))
}

fn preserves(ax: &[Vec<i64>], ay: &[Vec<i64>], perm: &[usize]) -> bool {
    let n = ax.len();
    (0..n).all(|i| (0..n).all(|j| ax[i][j] == ay[perm[i]][perm[j]]))
}

fn classical_completeness() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("K3", named::complete(3), named::complete(3), 6),
        ("P3", named::path(3), named::path(3), 2),
        ("C4", named::cycle(4), named::cycle(4), 8),
        ("C5", named::cycle(5), named::cycle(5), 10),
        ("K3->P3", named::complete(3), named::path(3), 0),
    ];
    let mut pass = true;
    let mut counts = Vec::new();
    for (name, ax, ay, expect) in cases {
        let x = from_classical_graph(&ax).unwrap();
        let y = from_classical_graph(&ay).unwrap();
        let found = brute_force_isos(&x, &y, 1e-9, Execution::Parallel).unwrap();
        let oracle: Vec<Vec<usize>> = permutations(ax.len()).into_iter().filter(|p| preserves(&ax, &ay, p)).collect();
        pass &= found == oracle && found.len() == expect;
        counts.push(format!("{name} {}/{}", found.len(), oracle.len()));
    }
    let t = start.elapsed();
    pass &= t < Duration::from_secs(10);
    outcome(pass, format!("found/oracle: {}, {:.2} s (< 10 s)", counts.join(", "), secs(t)))
}

/// Worst residual of x ↦ X·s as a *-isomorphism onto d×d matrices, X the carrier vector read row-major.
fn matrix_units_residual(a: &FrobeniusMonoid, d: usize, s: f64) -> f64 {
    let phi = |v: &Morphism| -> Mat {
        let e = v.entries();
        Mat::from_fn(d, d, |i, j| e[i * d + j] * s)
    };
    let unit = (phi(&a.unit) - Mat::identity(d, d)).norm();
    let mut worst = unit;
    let basis = |k: usize| Morphism::ket(d * d, k);
    for x in 0..d * d {
        let star = (phi(&a.star(&basis(x))) - phi(&basis(x)).adjoint()).norm();
        worst = worst.max(star);
        for y in 0..d * d {
            let prod = compose(&a.mult, &tensor(&basis(x), &basis(y))).unwrap();
            worst = worst.max((phi(&prod) - phi(&basis(x)) * phi(&basis(y))).norm());
        }
    }
    let mut r = rng(d as u64);
    let (x, y) = (random_morphism(&mut r, &[], &[d * d]), random_morphism(&mut r, &[], &[d * d]));
    let prod = compose(&a.mult, &tensor(&x, &y)).unwrap();
    let scale = 1.0f64.max(x.norm() * y.norm());
    worst.max((phi(&prod) - phi(&x) * phi(&y)).norm() / scale)
}

fn endo_algebra_iso() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=4 {
        worst = worst.max(matrix_units_residual(&endo_algebra(d), d, 1.0));
        worst = worst.max(matrix_units_residual(&endo_monoid(d), d, 1.0 / (d as f64).sqrt()));
    }
    outcome(worst <= 1e-12, format!("d = 2,3,4, mult/unit/involution max residual {worst:.2e} (<= 1e-12)"))
}

fn pipeline() -> Outcome {
    let start = Instant::now();
    let q = magic();
    let pants = pair_of_pants(&q);
    let endo_ok = check_endo_frobenius(&pants, 1e-9).all_pass();
    let simple = check_simple(&pants.monoid(), 1e-9).simple;
    let s = SplitFunctor::from_iso(&q, 42, 1e-9).unwrap();
    let tr = trace(&s.splitting_idempotent(&[Letter::A]).unwrap()).unwrap();
    let tr_err = (tr - C64::new(4.0, 0.0)).norm();
    let (graph, sqrt, rep) = split_report(&s, 1e-8).unwrap();
    let graph_ok = check_quantum_graph(&graph, 1e-9).all_pass();
    let sqrt_ok = check_quantum_iso(&sqrt, 1e-9).all_pass();
    let ident = res(&pair_of_pants(&sqrt).beta, &pants.beta);
    let t = start.elapsed();
    let pass = endo_ok && simple && tr_err <= 1e-9 && graph_ok && sqrt_ok && ident <= 1e-8 && rep.all_pass()
        && t < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "endo {endo_ok}, simple {simple}, |tr - 4| {tr_err:.1e}, graph {graph_ok}, sqrt_alpha {sqrt_ok}, \
             splitting identity {ident:.2e} (<= 1e-8), {:.2} s (< 10 s)",
            secs(t)
        ),
    )
}

fn galois_round_trip() -> Outcome {
    let k3 = from_classical_graph(&named::complete(3)).unwrap();
    let mut isos = vec![QuantumIso::identity(&k3)];
    isos.extend(permutations(3).iter().map(|p| from_permutation(&k3, &k3, p).unwrap()));
    isos.push(magic());
    let mut entrywise = 0.0f64;
    for q in &isos {
        let back = alpha_from_pi(&pi_generators(q), &q.source, &q.target, 1e-10).unwrap();
        let diff = back.p.matrix() - q.p.matrix();
        entrywise = entrywise.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    let rep = roundtrip_report(&magic(), 100, 42, 1e-8, Execution::Parallel);
    let laws = ["unit", "multiplicative", "star", "star_involution", "relation_invariance"]
        .iter()
        .map(|n| rep.residual(n).unwrap())
        .fold(0.0, f64::max);
    let pass = entrywise <= 1e-10 && laws <= 1e-8 && rep.all_pass();
    outcome(
        pass,
        format!("{} isos entrywise {entrywise:.2e} (<= 1e-10), 100 samples laws {laws:.2e} (<= 1e-8)", isos.len()),
    )
}

fn simplicity() -> Outcome {
    let mut pass = true;
    let mut transported = 0;
    for d in [2, 3] {
        let a = endo_monoid(d);
        pass &= check_simple(&a, 1e-9).simple;
        for seed in 0..10 {
            let w = random_unitary(&mut rng(1000 * d as u64 + seed), d * d);
            pass &= check_simple(&transport(&a, &w).unwrap(), 1e-9).simple;
            transported += 1;
        }
    }
    let c4 = check_simple(&classical_monoid(4), 1e-9);
    pass &= !c4.simple && c4.center_dim == 4;
    outcome(
        pass,
        format!(
            "endo 2,3 plus {transported} transports simple; classical(4) simple {} center dim {}",
            c4.simple, c4.center_dim
        ),
    )
}

fn relative_tensor() -> Outcome {
    let mut worst = 0.0f64;
    for a in [classical_monoid(3), endo_monoid(2)] {
        let t = trivial_bimodule(&a);
        let s = rel_tensor_split(&t, &t, 1e-10).unwrap();
        let u = absorption_unitary(&a, &s);
        let (action, unitary) = bimodule_morphism_residuals(&u, &s.bimodule, &t).unwrap();
        worst = worst.max(action).max(unitary).max(s.hermitian_residual).max(s.idempotent_residual);
    }
    outcome(worst <= 1e-10, format!("classical(3), endo(2): max residual {worst:.2e} (<= 1e-10)"))
}

fn dsl_corpus() -> Outcome {
    let out = common::run_corpus(1e-9);
    let labels: Vec<String> = common::corpus().into_iter().map(|e| e.label).collect();
    let has = |p: &str| labels.iter().any(|l| l.contains(p));
    let covered = has("snake") && has("frobenius") && has("symmetry") && has("swap");
    let pass = out.entries >= 20
        && covered
        && out.round_trip_failures.is_empty()
        && out.max_equation_residual <= 1e-10
        && out.max_disagreement <= 1e-12;
    outcome(
        pass,
        format!(
            "{} entries, {} round-trip failures, {} cross-checks disagree by {:.2e} (<= 1e-12)",
            out.entries,
            out.round_trip_failures.len(),
            out.cross_checked,
            out.max_disagreement
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("diagram kernel", kernel_suite),
        ("classical completeness", classical_completeness),
        ("endomorphism algebra", endo_algebra_iso),
        ("splitting pipeline", pipeline),
        ("Hopf-Galois round trip", galois_round_trip),
        ("simplicity", simplicity),
        ("relative tensor product", relative_tensor),
        ("DSL corpus", dsl_corpus),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {} [{:.2} s]", i + 1, o.detail, secs(start.elapsed()));
        failed += usize::from(!o.pass);
    }
    println!("{}/8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
