//! Generators-and-relations layer of the Hopf–Galois correspondence. Elements
//! [V, v] of Z are kept as formal pairs and only ever evaluated through π_α.

use crate::error::{Error, Result};
use crate::frobenius::{frob_cup, FrobeniusMonoid};
use crate::hilb::{
    c, compose, dagger, partial_trace, residual, tensor, Mat, Morphism, Shape,
};
use crate::par::Execution;
use crate::qgraph::QuantumGraph;
use crate::qiso::{
    check_quantum_iso, component_on_word, dual_word, intertwiner_basis, naturality_report, placements, Letter,
    QuantumIso,
};
use crate::random::{gaussian, stream, Rng};
use crate::report::Report;
use rand::Rng as _;

/// A formal element [V, v] with v: F₂(V) → F₁(V).
#[derive(Clone, Debug, PartialEq)]
pub struct ZElement {
    pub word: Vec<Letter>,
    pub v: Morphism,
}

impl ZElement {
    pub fn new(word: Vec<Letter>, v: Morphism) -> Self {
        ZElement { word, v: v.flatten() }
    }
}

pub fn z_unit() -> ZElement {
    ZElement { word: Vec::new(), v: Morphism::scalar(c(1.0, 0.0)) }
}

/// [V,v]·[W,w] = [V⊗W, v⊗w]; both functors carry trivial multiplicators.
pub fn z_mult(z1: &ZElement, z2: &ZElement) -> ZElement {
    let mut word = z1.word.clone();
    word.extend_from_slice(&z2.word);
    ZElement { word, v: tensor(&z1.v, &z2.v).flatten() }
}

/// Nested cup 1 → W*⊗W for a word of length n over a self-dual carrier, as a
/// D×D matrix indexed (W*, W). Letter k of W pairs with position n−1−k of W*.
fn nested_cup_matrix(a: &FrobeniusMonoid, n: usize) -> Mat {
    let d = a.dim;
    let cup = frob_cup(a).entries();
    let dd = d.pow(n as u32);
    // entry (s, w) is Π_k cup[s_{n-1-k}, w_k], digits most significant first
    Mat::from_fn(dd, dd, |s, w| {
        let (mut s, mut w, mut z) = (s, w, c(1.0, 0.0));
        for _ in 0..n {
            // s's least significant digit is position n-1, paired with w's most significant
            let wk = w / d.pow(n as u32 - 1);
            z *= cup[(s % d) * d + wk];
            s /= d;
            w = (w % d.pow(n as u32 - 1)) * d;
        }
        z
    })
}

/// Transpose of g: P → Q under the nested Frobenius dualities,
/// (id_{P*}⊗ε_Q)∘(id⊗g⊗id)∘(η_P⊗id_{Q*}).
pub fn frobenius_transpose(g: &Morphism, p: &FrobeniusMonoid, q: &FrobeniusMonoid, n: usize) -> Morphism {
    let np = nested_cup_matrix(p, n);
    // ε_Q pairs Q with Q*; it is the dagger of the nested cup into Q⊗Q*, whose
    // matrix is the transpose of the (Q*, Q) one.
    let eq = nested_cup_matrix(q, n).map(|z| z.conj());
    let gt = g.matrix().transpose();
    let m = &np * gt * eq;
    Morphism::from_fn(g.cod().flat(), g.dom().flat(), |r, col| m[(r, col)])
}

/// Source and target functors of a quantum isomorphism.
#[derive(Clone, Debug)]
pub struct ZContext {
    pub f1: QuantumGraph,
    pub f2: QuantumGraph,
}

impl ZContext {
    pub fn of(q: &QuantumIso) -> Self {
        ZContext { f1: q.source.clone(), f2: q.target.clone() }
    }
}

/// [V,v]* = [V*, (v†)ᵀ].
pub fn z_star(ctx: &ZContext, z: &ZElement) -> ZElement {
    let n = z.word.len();
    let vd = dagger(&z.v);
    let v = if n == 0 { vd } else { frobenius_transpose(&vd, &ctx.f1.monoid, &ctx.f2.monoid, n) };
    ZElement { word: dual_word(&z.word), v: v.flatten() }
}

/// Partial trace over F₂(V) of α_V∘(v⊗id_H).
pub fn pi_alpha(q: &QuantumIso, z: &ZElement) -> Result<Morphism> {
    let h = q.h_dim;
    let comp = component_on_word(q, &z.word).flatten();
    let dd = comp.dom().total() / h;
    if z.v.dom().total() != dd || z.v.cod().total() != dd {
        return Err(crate::error::shape_err("pi_alpha", format!("{} <- {}", z.v.cod(), z.v.dom()), dd));
    }
    let comp = comp.reshape(Shape::of(&[dd, h]), Shape::of(&[h, dd]))?;
    let v = z.v.reshape(Shape::of(&[dd]), Shape::of(&[dd]))?;
    let m = compose(&comp, &tensor(&v, &Morphism::id(h)))?;
    partial_trace(&m, &[(0, 1)])
}

/// Matrix unit |i⟩⟨j| on the generator.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> Morphism {
    Morphism::from_fn(Shape::of(&[d]), Shape::of(&[d]), |r, col| {
        if r == i && col == j {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// π_α([A, |i⟩⟨j|]) for all i, j, indexed [i][j].
pub fn pi_generators(q: &QuantumIso) -> Vec<Vec<Mat>> {
    let d = q.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let z = ZElement::new(vec![Letter::A], matrix_unit(d, i, j));
                    pi_alpha(q, &z).expect("generator shapes").into_matrix()
                })
                .collect()
        })
        .collect()
}

/// P with blocks p_ji = π([A, |i⟩⟨j|]), before any check.
pub fn assemble_from_pi(pi: &[Vec<Mat>], x: &QuantumGraph, y: &QuantumGraph) -> Result<QuantumIso> {
    let d = x.dim();
    if pi.len() != d || pi.iter().any(|r| r.len() != d) {
        return Err(crate::error::shape_err("pi generators", pi.len(), d));
    }
    let u: Vec<Vec<Mat>> = (0..d).map(|j| (0..d).map(|i| pi[i][j].clone()).collect()).collect();
    QuantumIso::from_blocks(x.clone(), y.clone(), &u)
}

/// Reconstructs the component from generator values and verifies every relation.
pub fn alpha_from_pi(pi: &[Vec<Mat>], x: &QuantumGraph, y: &QuantumGraph, tol: f64) -> Result<QuantumIso> {
    let q = assemble_from_pi(pi, x, y)?;
    let rep = check_quantum_iso(&q, tol);
    if let Some(bad) = rep.checks.iter().filter(|c| !c.pass).max_by(|a, b| a.residual.total_cmp(&b.residual)) {
        return Err(Error::RelationViolation { relation: bad.name.clone(), residual: bad.residual });
    }
    Ok(q)
}

fn random_word(r: &mut Rng, len: usize) -> Vec<Letter> {
    (0..len).map(|_| if r.random_bool(0.5) { Letter::A } else { Letter::AStar }).collect()
}

fn random_v(r: &mut Rng, d: usize, rows_len: usize, cols_len: usize) -> Morphism {
    let (rows, cols) = (d.pow(rows_len as u32), d.pow(cols_len as u32));
    let m = Mat::from_fn(rows, cols, |_, _| gaussian(r));
    Morphism::new(Shape::of(&[cols]), Shape::of(&[rows]), m).unwrap()
}

pub fn random_z(r: &mut Rng, d: usize, len: usize) -> ZElement {
    let word = random_word(r, len);
    ZElement { word, v: random_v(r, d, len, len) }
}

#[derive(Clone, Debug, Default)]
struct SampleResiduals {
    mult: f64,
    star: f64,
    involution: f64,
    relation: f64,
    intertwiner: f64,
}

fn sample(q: &QuantumIso, ctx: &ZContext, selfints: &[Morphism], seed: u64, idx: usize, max_len: usize) -> SampleResiduals {
    let mut r = stream(seed, idx as u64);
    let d = q.dim();
    let l1 = r.random_range(0..=max_len);
    let l2 = r.random_range(0..=(max_len - l1));
    let z1 = random_z(&mut r, d, l1);
    let z2 = random_z(&mut r, d, l2);
    let pi = |z: &ZElement| pi_alpha(q, z).unwrap();
    let (p1, p2) = (pi(&z1), pi(&z2));
    let mut out = SampleResiduals {
        mult: residual(&pi(&z_mult(&z1, &z2)), &compose(&p1, &p2).unwrap()).unwrap(),
        ..Default::default()
    };
    let s1 = z_star(ctx, &z1);
    out.star = residual(&pi(&s1), &dagger(&p1)).unwrap();
    out.involution = residual(&pi(&z_star(ctx, &s1)), &p1).unwrap();
    // relation [V, x∘F₂(f)] ~ [W, F₁(f)∘x] for a random placed generator f: V → W
    let pls = placements(max_len);
    let pl = &pls[r.random_range(0..pls.len())];
    let x = random_v(&mut r, d, pl.word_in.len(), pl.word_out.len());
    let f1 = pl.realize(&q.source).flatten();
    let f2 = pl.realize(&q.target).flatten();
    let x = x.reshape(f2.cod().clone(), f1.dom().clone()).unwrap();
    let lhs = ZElement::new(pl.word_in.clone(), compose(&x, &f2).unwrap());
    let rhs = ZElement::new(pl.word_out.clone(), compose(&f1, &x).unwrap());
    out.relation = residual(&pi(&lhs), &pi(&rhs)).unwrap();
    for f in selfints {
        let a = compose(f, &p1).unwrap();
        let b = compose(&p1, f).unwrap();
        out.intertwiner = out.intertwiner.max(residual(&a, &b).unwrap());
    }
    out
}

/// Round trip α → π_α → α, *-homomorphism laws of π_α on sampled elements,
/// relation invariance, intertwiner transport and naturality of α.
pub fn roundtrip_report(q: &QuantumIso, n_samples: usize, seed: u64, tol: f64, exec: Execution) -> Report {
    let mut rep = Report::new(tol).with_seed(seed);
    let pis = pi_generators(q);
    let back = assemble_from_pi(&pis, &q.source, &q.target);
    rep.push("alpha_pi_alpha", back.map(|b| residual(&b.p, &q.p).unwrap()).unwrap_or(f64::INFINITY));
    let blocks = q.blocks();
    let gen_formula = (0..q.dim())
        .flat_map(|i| (0..q.dim()).map(move |j| (i, j)))
        .map(|(i, j)| (&pis[i][j] - &blocks[j][i]).norm())
        .fold(0.0, f64::max);
    rep.push("generator_formula", gen_formula);
    rep.push("unit", residual(&pi_alpha(q, &z_unit()).unwrap(), &Morphism::id(q.h_dim)).unwrap());
    let ctx = ZContext::of(q);
    let selfints = intertwiner_basis(q, q);
    let samples = exec.map_range(n_samples, |i| sample(q, &ctx, &selfints, seed, i, 3));
    let worst = |f: fn(&SampleResiduals) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    rep.push("multiplicative", worst(|s| s.mult));
    rep.push("star", worst(|s| s.star));
    rep.push("star_involution", worst(|s| s.involution));
    rep.push("relation_invariance", worst(|s| s.relation));
    rep.push("intertwiner_transport", worst(|s| s.intertwiner));
    let iso = check_quantum_iso(q, tol);
    let nat = naturality_report(q, 2, tol, exec);
    rep.push("naturality", iso.max_residual().max(nat.max_residual()));
    rep
}
