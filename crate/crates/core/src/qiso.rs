//! Quantum isomorphisms P: A⊗H → H⊗A′ between quantum graphs, their
//! composites, duals, induced components on tensor words, intertwiners and the
//! pair-of-pants Frobenius monoid.

use crate::error::{shape_err, Error, Result};
use crate::frobenius::{check_simple_seeded, endo_monoid, frob_cap, frob_cup, FrobeniusMonoid};
use crate::hilb::{
    c, chain, compose, cup, dagger, residual, tensor, tensor_all, unitarity_residual, Leg, Mat, Morphism, Shape,
    DEFAULT_TOL,
};
use crate::linalg::null_space;
use crate::par::Execution;
use crate::qgraph::{identity_graph, is_classical, QuantumGraph};
use crate::report::Report;

/// A letter of a tensor word: the generating object or its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    AStar,
}

impl Letter {
    pub fn dual(self) -> Letter {
        match self {
            Letter::A => Letter::AStar,
            Letter::AStar => Letter::A,
        }
    }
}

pub fn word_to_string(word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter().map(|l| if *l == Letter::A { "A" } else { "A*" }).collect::<Vec<_>>().join(".")
}

/// Dual word: reversed, each letter dualized.
pub fn dual_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.dual()).collect()
}

/// All words over {A, A*} of length ≤ n, shortest first.
pub fn all_words(n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for l in [Letter::A, Letter::AStar] {
                let mut v: Vec<Letter> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumIso {
    pub source: QuantumGraph,
    pub target: QuantumGraph,
    pub h_dim: usize,
    /// dom [d, h], cod [h, d′]
    pub p: Morphism,
}

impl QuantumIso {
    pub fn new(source: QuantumGraph, target: QuantumGraph, h_dim: usize, p: Morphism) -> Result<Self> {
        let (d, d2) = (source.dim(), target.dim());
        if d != d2 {
            return Err(shape_err("quantum iso carriers", d, d2));
        }
        if h_dim == 0 || p.dom().total() != d * h_dim || p.cod().total() != d * h_dim {
            return Err(shape_err(
                "quantum iso component",
                format!("{} <- {}", p.cod(), p.dom()),
                format!("[{h_dim},{d}] <- [{d},{h_dim}]"),
            ));
        }
        let p = p.reshape(Shape::of(&[d, h_dim]), Shape::of(&[h_dim, d]))?;
        Ok(QuantumIso { source, target, h_dim, p })
    }

    pub fn identity(x: &QuantumGraph) -> QuantumIso {
        let d = x.dim();
        let p = Morphism::identity(Shape::of(&[d])).reshape(Shape::of(&[d, 1]), Shape::of(&[1, d])).unwrap();
        QuantumIso { source: x.clone(), target: x.clone(), h_dim: 1, p }
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// The h×h block p_ji = (id_H⊗⟨j|)∘P∘(|i⟩⊗id_H).
    pub fn block(&self, j: usize, i: usize) -> Mat {
        let (h, d) = (self.h_dim, self.dim());
        Mat::from_fn(h, h, |b, a| self.p.entry(b * d + j, i * h + a))
    }

    pub fn blocks(&self) -> Vec<Vec<Mat>> {
        let d = self.dim();
        (0..d).map(|j| (0..d).map(|i| self.block(j, i)).collect()).collect()
    }

    /// Assembles P from blocks u[j][i], with P(|i⟩⊗h) = Σ_j u_ji h ⊗ |j⟩.
    pub fn from_blocks(source: QuantumGraph, target: QuantumGraph, u: &[Vec<Mat>]) -> Result<Self> {
        let d = source.dim();
        if u.len() != d || u.iter().any(|row| row.len() != d) {
            return Err(shape_err("magic blocks", u.len(), d));
        }
        let h = u[0][0].nrows();
        let p = Morphism::from_fn(Shape::of(&[d, h]), Shape::of(&[h, d]), |r, col| {
            let (b, j) = (r / d, r % d);
            let (i, a) = (col / h, col % h);
            u[j][i][(b, a)]
        });
        QuantumIso::new(source, target, h, p)
    }
}

fn res(l: &Morphism, r: &Morphism) -> f64 {
    residual(l, r).unwrap_or(f64::INFINITY)
}

/// Unitarity plus the defining equations against source and target structure.
pub fn check_quantum_iso(q: &QuantumIso, tol: f64) -> Report {
    let mut rep = Report::new(tol);
    let (a, b) = (&q.source.monoid, &q.target.monoid);
    let h = Morphism::id(q.h_dim);
    let (ida, idb) = (a.id(), b.id());
    let p = &q.p;
    rep.push("unitary", unitarity_residual(p));
    let two = chain(&[&tensor(&ida, p), &tensor(p, &idb)]).unwrap();
    rep.push(
        "mult",
        res(&compose(p, &tensor(&a.mult, &h)).unwrap(), &compose(&tensor(&h, &b.mult), &two).unwrap()),
    );
    rep.push("unit", res(&compose(p, &tensor(&a.unit, &h)).unwrap(), &tensor(&h, &b.unit)));
    rep.push(
        "comult",
        res(
            &compose(&tensor(&h, &b.comult()), p).unwrap(),
            &compose(&two, &tensor(&a.comult(), &h)).unwrap(),
        ),
    );
    rep.push("counit", res(&compose(&tensor(&h, &b.counit()), p).unwrap(), &tensor(&a.counit(), &h)));
    rep.push(
        "gamma",
        res(
            &compose(p, &tensor(&q.source.gamma, &h)).unwrap(),
            &compose(&tensor(&h, &q.target.gamma), p).unwrap(),
        ),
    );
    rep.push("conjugation", conjugation_residual(q));
    rep
}

/// (id_A⊗P)∘(cup_A⊗id_H) against (P†⊗id_A′)∘(id_H⊗cup_A′), Frobenius cups.
pub fn conjugation_residual(q: &QuantumIso) -> f64 {
    let h = Morphism::id(q.h_dim);
    let lhs = chain(&[&tensor(&frob_cup(&q.source.monoid), &h), &tensor(&q.source.monoid.id(), &q.p)]).unwrap();
    let rhs = chain(&[&tensor(&h, &frob_cup(&q.target.monoid)), &tensor(&dagger(&q.p), &q.target.monoid.id())])
        .unwrap();
    res(&lhs, &rhs)
}

pub fn from_permutation(x: &QuantumGraph, y: &QuantumGraph, perm: &[usize]) -> Result<QuantumIso> {
    let n = x.dim();
    if y.dim() != n || perm.len() != n {
        return Err(shape_err("permutation iso", format!("{n} -> {}", y.dim()), perm.len()));
    }
    if !is_classical(x) || !is_classical(y) {
        return Err(Error::Mismatch("permutation isos need classical graphs".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let p = Morphism::from_fn(Shape::of(&[n, 1]), Shape::of(&[1, n]), |r, col| {
        if perm[col] == r {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    QuantumIso::new(x.clone(), y.clone(), 1, p)
}

fn projection_residual(p: &Mat) -> f64 {
    ((p * p - p).norm()).max((p.adjoint() - p).norm())
}

/// Block magic unitary [[p,1−p,0,0],[1−p,p,0,0],[0,0,q,1−q],[0,0,1−q,q]] on the
/// 4-point identity graph, auxiliary dimension 2.
pub fn magic_unitary_iso(p: &Morphism, q: &Morphism) -> Result<QuantumIso> {
    let (p, q) = (p.matrix().clone(), q.matrix().clone());
    for (name, m) in [("p", &p), ("q", &q)] {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(shape_err("magic unitary entry", format!("{}x{}", m.nrows(), m.ncols()), "2x2"));
        }
        let r = projection_residual(m);
        if r > DEFAULT_TOL {
            return Err(Error::NotProjection { what: name.into(), residual: r });
        }
    }
    let id = Mat::identity(2, 2);
    let z = Mat::zeros(2, 2);
    let (pc, qc) = (&id - &p, &id - &q);
    let u = vec![
        vec![p.clone(), pc.clone(), z.clone(), z.clone()],
        vec![pc, p, z.clone(), z.clone()],
        vec![z.clone(), z.clone(), q.clone(), qc.clone()],
        vec![z.clone(), z, qc, q],
    ];
    let x = identity_graph(&crate::frobenius::classical_monoid(4))?;
    QuantumIso::from_blocks(x.clone(), x, &u)
}

/// |0⟩⟨0| and |+⟩⟨+|, the standard non-commuting pair.
pub fn standard_projections() -> (Morphism, Morphism) {
    let p = Morphism::from_real(&[2], &[2], &[&[1.0, 0.0], &[0.0, 0.0]]);
    let q = Morphism::from_real(&[2], &[2], &[&[0.5, 0.5], &[0.5, 0.5]]);
    (p, q)
}

/// (id_{H1}⊗P2)∘(P1⊗id_{H2}) for raw components.
pub fn compose_components(p2: &Morphism, h2: usize, p1: &Morphism, h1: usize) -> Result<Morphism> {
    let d = p1.dom().total() / h1;
    let d2 = p2.cod().total() / h2;
    let p1 = p1.reshape(Shape::of(&[d, h1]), Shape::of(&[h1, d]))?;
    let p2 = p2.reshape(Shape::of(&[d, h2]), Shape::of(&[h2, d2]))?;
    let m = chain(&[&tensor(&p1, &Morphism::id(h2)), &tensor(&Morphism::id(h1), &p2)])?;
    m.reshape(Shape::of(&[d, h1 * h2]), Shape::of(&[h1 * h2, d2]))
}

pub fn compose_iso(q2: &QuantumIso, q1: &QuantumIso) -> Result<QuantumIso> {
    if !q1.target.approx_same(&q2.source, DEFAULT_TOL) {
        return Err(Error::Mismatch("target of the first iso differs from source of the second".into()));
    }
    let p = compose_components(&q2.p, q2.h_dim, &q1.p, q1.h_dim)?;
    QuantumIso::new(q1.source.clone(), q2.target.clone(), q1.h_dim * q2.h_dim, p)
}

/// Dual component (id_H⊗id_X⊗cap_H)∘(id_H⊗P†⊗id_H)∘(cup_H⊗id_Y⊗id_H), computed
/// by reindexing: P*[(b,i),(j,c)] = conj P[(b,j),(i,c)].
pub fn dual_component(p: &Morphism) -> Morphism {
    conj_legs(p)
}

fn conj_legs(p: &Morphism) -> Morphism {
    // P has dom [x, h], cod [h, y]; the dual has dom [y, h], cod [h, x].
    let t = p.rearrange(&[Leg::Cod(0), Leg::Dom(0)], &[Leg::Cod(1), Leg::Dom(1)]).expect("component legs");
    crate::hilb::conjugate(&t)
}

pub fn dual(q: &QuantumIso) -> QuantumIso {
    QuantumIso {
        source: q.target.clone(),
        target: q.source.clone(),
        h_dim: q.h_dim,
        p: dual_component(&q.p),
    }
}

/// The induced component for a dual letter:
/// (cap_A⊗id_H⊗id_A′)∘(id_A⊗P†⊗id_A′)∘(id_A⊗id_H⊗cup_A′), Frobenius cups.
pub fn star_component(q: &QuantumIso) -> Morphism {
    let (a, b) = (&q.source.monoid, &q.target.monoid);
    let h = Morphism::id(q.h_dim);
    chain(&[
        &tensor_all(&[&a.id(), &h, &frob_cup(b)]),
        &tensor_all(&[&a.id(), &dagger(&q.p), &b.id()]),
        &tensor_all(&[&frob_cap(a), &h, &b.id()]),
    ])
    .expect("component shapes")
}

/// Component on a tensor word: α_{X⊗Y} = (α_X⊗id)∘(id⊗α_Y). Domain
/// [d,…,d,h], codomain [h,d′,…,d′]; the empty word gives id_H.
pub fn component_on_word(q: &QuantumIso, word: &[Letter]) -> Morphism {
    let gens = (q.p.clone(), if word.contains(&Letter::AStar) { Some(star_component(q)) } else { None });
    component_from_generators(&gens.0, gens.1.as_ref(), q.dim(), q.target.dim(), q.h_dim, word)
}

pub(crate) fn component_from_generators(
    p: &Morphism,
    pstar: Option<&Morphism>,
    d: usize,
    d2: usize,
    h: usize,
    word: &[Letter],
) -> Morphism {
    let mut comp = Morphism::id(h);
    let mut suffix_in: Vec<usize> = Vec::new();
    let mut suffix_out: Vec<usize> = Vec::new();
    for letter in word.iter().rev() {
        let gen = match letter {
            Letter::A => p,
            Letter::AStar => pstar.expect("star component"),
        };
        // id_X⊗comp : X⊗S⊗H → X⊗H⊗S′, then gen⊗id_S′ : → H⊗X′⊗S′
        let step1 = tensor(&Morphism::id(d), &comp);
        let sprime = Shape::of(&suffix_out);
        let step2 = tensor(gen, &Morphism::identity(sprime));
        let step1 = step1.reshape(
            Shape::of(&[d]).concat(&Shape::of(&suffix_in)).concat(&Shape::of(&[h])),
            Shape::of(&[d, h]).concat(&Shape::of(&suffix_out)),
        )
        .unwrap();
        comp = compose(&step2, &step1).unwrap();
        suffix_in.insert(0, d);
        suffix_out.insert(0, d2);
        let mut cod = vec![h];
        cod.extend_from_slice(&suffix_out);
        let mut dom = suffix_in.clone();
        dom.push(h);
        comp = comp.reshape(Shape::of(&dom), Shape::of(&cod)).unwrap();
    }
    comp
}

/// A generating intertwiner of the word category, realized for either graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Mult,
    Unit,
    Comult,
    Counit,
    Gamma,
    Cup,
    Cap,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::Mult,
        Generator::Unit,
        Generator::Comult,
        Generator::Counit,
        Generator::Gamma,
        Generator::Cup,
        Generator::Cap,
    ];

    pub fn arity(self) -> (usize, usize) {
        match self {
            Generator::Mult => (2, 1),
            Generator::Unit => (0, 1),
            Generator::Comult => (1, 2),
            Generator::Counit => (1, 0),
            Generator::Gamma => (1, 1),
            Generator::Cup => (0, 2),
            Generator::Cap => (2, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Mult => "mult",
            Generator::Unit => "unit",
            Generator::Comult => "comult",
            Generator::Counit => "counit",
            Generator::Gamma => "gamma",
            Generator::Cup => "cup",
            Generator::Cap => "cap",
        }
    }

    pub fn realize(self, x: &QuantumGraph) -> Morphism {
        let a = &x.monoid;
        match self {
            Generator::Mult => a.mult.clone(),
            Generator::Unit => a.unit.clone(),
            Generator::Comult => a.comult(),
            Generator::Counit => a.counit(),
            Generator::Gamma => x.gamma.clone(),
            Generator::Cup => frob_cup(a),
            Generator::Cap => frob_cap(a),
        }
    }
}

/// A generator placed at position `at` of an input word, padded with identities.
#[derive(Clone, Debug)]
pub struct Placement {
    pub gen: Generator,
    pub at: usize,
    pub word_in: Vec<Letter>,
    pub word_out: Vec<Letter>,
}

impl Placement {
    pub fn realize(&self, x: &QuantumGraph) -> Morphism {
        let d = x.dim();
        let (k, _) = self.gen.arity();
        let left = Morphism::identity(Shape::of(&vec![d; self.at]));
        let right = Morphism::identity(Shape::of(&vec![d; self.word_in.len() - self.at - k]));
        tensor_all(&[&left, &self.gen.realize(x), &right])
    }
}

/// Every placement of a generator whose input and output words have length ≤ max_len.
pub fn placements(max_len: usize) -> Vec<Placement> {
    let mut out = Vec::new();
    for w in all_words(max_len) {
        for gen in Generator::ALL {
            let (k, l) = gen.arity();
            if w.len() < k || w.len() - k + l > max_len {
                continue;
            }
            for at in 0..=(w.len() - k) {
                let mut word_out = w[..at].to_vec();
                word_out.extend(std::iter::repeat_n(Letter::A, l));
                word_out.extend_from_slice(&w[at + k..]);
                out.push(Placement { gen, at, word_in: w.clone(), word_out });
            }
        }
    }
    out
}

/// α_out∘(F₁(f)⊗id_H) against (id_H⊗F₂(f))∘α_in.
pub fn naturality_residual(q: &QuantumIso, pl: &Placement) -> f64 {
    let h = Morphism::id(q.h_dim);
    let f1 = pl.realize(&q.source).flatten();
    let f2 = pl.realize(&q.target).flatten();
    let a_in = component_on_word(q, &pl.word_in).flatten();
    let a_out = component_on_word(q, &pl.word_out).flatten();
    let lhs = compose(&a_out, &tensor(&f1, &h).flatten()).unwrap();
    let rhs = compose(&tensor(&h, &f2).flatten(), &a_in).unwrap();
    res(&lhs, &rhs)
}

/// Naturality on all generator placements with words up to `max_len`, one
/// check per generator holding the worst residual.
pub fn naturality_report(q: &QuantumIso, max_len: usize, tol: f64, exec: Execution) -> Report {
    let pls = placements(max_len);
    let residuals = exec.map(pls.clone(), |pl| naturality_residual(q, &pl));
    let mut rep = Report::new(tol);
    for gen in Generator::ALL {
        let worst = pls
            .iter()
            .zip(&residuals)
            .filter(|(p, _)| p.gen == gen)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max);
        rep.push(format!("naturality.{}", gen.name()), worst);
    }
    rep.push("star_component", res(&star_component(q), &q.p));
    rep
}

/// P′∘(id_A⊗f) against (f⊗id_A′)∘P.
pub fn intertwiner_residual(f: &Morphism, q: &QuantumIso, q2: &QuantumIso) -> Result<f64> {
    if f.dom().total() != q.h_dim || f.cod().total() != q2.h_dim {
        return Err(shape_err("intertwiner", format!("{} <- {}", f.cod(), f.dom()), format!("{} <- {}", q2.h_dim, q.h_dim)));
    }
    let f = f.reshape(Shape::of(&[q.h_dim]), Shape::of(&[q2.h_dim]))?;
    let lhs = compose(&q2.p, &tensor(&q.source.monoid.id(), &f))?;
    let rhs = compose(&tensor(&f, &q.target.monoid.id()), &q.p)?;
    Ok(res(&lhs, &rhs))
}

pub fn check_intertwiner(f: &Morphism, q: &QuantumIso, q2: &QuantumIso, tol: f64) -> bool {
    intertwiner_residual(f, q, q2).is_ok_and(|r| r <= tol)
}

/// Orthonormal basis of the intertwiners Q → Q′.
pub fn intertwiner_basis(q: &QuantumIso, q2: &QuantumIso) -> Vec<Morphism> {
    let (h, h2) = (q.h_dim, q2.h_dim);
    let rows = q2.p.matrix().nrows() * q.p.matrix().ncols();
    let mut t = Mat::zeros(rows, h * h2);
    for col in 0..h * h2 {
        let e = Morphism::from_fn(Shape::of(&[h]), Shape::of(&[h2]), |r, cl| {
            if r * h + cl == col {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let lhs = compose(&q2.p, &tensor(&q.source.monoid.id(), &e)).unwrap();
        let rhs = compose(&tensor(&e, &q.target.monoid.id()), &q.p).unwrap();
        let diff = lhs.matrix() - rhs.matrix();
        for (k, z) in diff.iter().enumerate() {
            t[(k, col)] = *z;
        }
    }
    let ns = null_space(&t, crate::frobenius::RANK_TOL);
    (0..ns.ncols())
        .map(|k| Morphism::from_fn(Shape::of(&[h]), Shape::of(&[h2]), |r, cl| ns[(r * h + cl, k)]))
        .collect()
}

/// cup_H as a modification id → dual(Q)∘Q, and cap_H as one back.
pub fn dual_modification_residuals(q: &QuantumIso) -> (f64, f64) {
    let h = q.h_dim;
    let beta = compose_components(&dual_component(&q.p), h, &q.p, h).unwrap();
    let ida = q.source.monoid.id();
    let cup_h = cup(h).reshape(Shape::unit(), Shape::of(&[h * h])).unwrap();
    let lhs = compose(&beta, &tensor(&ida, &cup_h)).unwrap();
    let rhs = tensor(&cup_h, &ida);
    let cap_h = dagger(&cup_h);
    let lhs2 = tensor(&ida, &cap_h);
    let rhs2 = compose(&tensor(&cap_h, &ida), &beta).unwrap();
    (res(&lhs, &rhs), res(&lhs2, &rhs2))
}

/// Simple Frobenius monoid in the endomorphisms of the fibre functor, given
/// by its generator component on carrier k.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoFrobenius {
    pub base: QuantumGraph,
    pub h_dim: usize,
    /// dom [d, k], cod [k, d]
    pub beta: Morphism,
    pub mult: Morphism,
    pub unit: Morphism,
}

impl EndoFrobenius {
    pub fn new(base: QuantumGraph, h_dim: usize, beta: Morphism, mult: Morphism, unit: Morphism) -> Result<Self> {
        let d = base.dim();
        let beta = beta.reshape(Shape::of(&[d, h_dim]), Shape::of(&[h_dim, d]))?;
        let m = FrobeniusMonoid::new(mult, unit)?;
        if m.dim != h_dim {
            return Err(shape_err("endo carrier", m.dim, h_dim));
        }
        Ok(EndoFrobenius { base, h_dim, beta, mult: m.mult, unit: m.unit })
    }

    pub fn monoid(&self) -> FrobeniusMonoid {
        FrobeniusMonoid { dim: self.h_dim, mult: self.mult.clone(), unit: self.unit.clone() }
    }

    pub fn as_iso(&self) -> QuantumIso {
        QuantumIso {
            source: self.base.clone(),
            target: self.base.clone(),
            h_dim: self.h_dim,
            p: self.beta.clone(),
        }
    }

    /// √k when the carrier is a square.
    pub fn root(&self) -> Option<usize> {
        let h = (self.h_dim as f64).sqrt().round() as usize;
        (h * h == self.h_dim).then_some(h)
    }
}

pub fn pair_of_pants(q: &QuantumIso) -> EndoFrobenius {
    let h = q.h_dim;
    let beta = compose_components(&dual_component(&q.p), h, &q.p, h).expect("component shapes");
    let m = endo_monoid(h);
    EndoFrobenius { base: q.source.clone(), h_dim: h * h, beta, mult: m.mult, unit: m.unit }
}

pub fn check_endo_frobenius(e: &EndoFrobenius, tol: f64) -> Report {
    check_endo_frobenius_seeded(e, tol, 42)
}

pub fn check_endo_frobenius_seeded(e: &EndoFrobenius, tol: f64, seed: u64) -> Report {
    let mut rep = Report::new(tol).with_seed(seed);
    rep.extend_prefixed("iso", &check_quantum_iso(&e.as_iso(), tol));
    let (mm, mu) = modification_residuals(e);
    rep.push("modification_mult", mm);
    rep.push("modification_unit", mu);
    let v = check_simple_seeded(&e.monoid(), tol, seed);
    rep.push_flag("simple", (v.center_dim as f64 - 1.0).abs(), v.simple);
    rep
}

/// β(id⊗m) = (m⊗id)(id_K⊗β)(β⊗id_K) and β(id⊗u) = u⊗id.
pub fn modification_residuals(e: &EndoFrobenius) -> (f64, f64) {
    let k = e.h_dim;
    let ida = e.base.monoid.id();
    let d = e.base.dim();
    let beta2 = compose_components(&e.beta, k, &e.beta, k)
        .and_then(|b| b.reshape(Shape::of(&[d, k, k]), Shape::of(&[k, k, d])))
        .unwrap();
    let lhs = compose(&e.beta, &tensor(&ida, &e.mult)).unwrap();
    let rhs = compose(&tensor(&e.mult, &ida), &beta2).unwrap();
    let mm = res(&lhs, &rhs);
    let lhs_u = compose(&e.beta, &tensor(&ida, &e.unit)).unwrap();
    let rhs_u = tensor(&e.unit, &ida);
    (mm, res(&lhs_u, &rhs_u))
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Permutations whose h = 1 isomorphism passes every equation.
pub fn brute_force_isos(x: &QuantumGraph, y: &QuantumGraph, tol: f64, exec: Execution) -> Result<Vec<Vec<usize>>> {
    let perms = permutations(x.dim());
    let verdicts = exec.map(perms.clone(), |perm| {
        from_permutation(x, y, &perm).map(|q| check_quantum_iso(&q, tol).all_pass())
    });
    let mut out = Vec::new();
    for (perm, v) in perms.into_iter().zip(verdicts) {
        if v? {
            out.push(perm);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{classical_monoid, endo_monoid};
    use crate::hilb::approx_eq;
    use crate::qgraph::{from_classical_graph, named};

    fn k3() -> QuantumGraph {
        from_classical_graph(&named::complete(3)).unwrap()
    }

    fn magic() -> QuantumIso {
        let (p, q) = standard_projections();
        magic_unitary_iso(&p, &q).unwrap()
    }

    #[test]
    fn identity_iso_passes() {
        for x in [k3(), identity_graph(&endo_monoid(2)).unwrap()] {
            assert!(check_quantum_iso(&QuantumIso::identity(&x), 1e-12).all_pass());
        }
    }

    #[test]
    fn k3_permutations() {
        let x = k3();
        let missing = from_classical_graph(&named::without_edge(named::complete(3), 0, 1)).unwrap();
        for perm in permutations(3) {
            assert!(check_quantum_iso(&from_permutation(&x, &x, &perm).unwrap(), 1e-9).all_pass());
            assert!(!check_quantum_iso(&from_permutation(&x, &missing, &perm).unwrap(), 1e-9).all_pass());
        }
    }

    #[test]
    fn path_leaf_swap() {
        let p3 = from_classical_graph(&named::path(3)).unwrap();
        assert!(check_quantum_iso(&from_permutation(&p3, &p3, &[2, 1, 0]).unwrap(), 1e-9).all_pass());
        assert!(!check_quantum_iso(&from_permutation(&p3, &p3, &[1, 0, 2]).unwrap(), 1e-9).all_pass());
    }

    #[test]
    fn magic_isos() {
        let q = magic();
        let rep = check_quantum_iso(&q, 1e-12);
        assert!(rep.all_pass(), "{rep}");
        let (p, _) = standard_projections();
        assert!(check_quantum_iso(&magic_unitary_iso(&p, &p).unwrap(), 1e-12).all_pass());
        let half = Morphism::id(2).scale_re(0.5);
        assert!(matches!(magic_unitary_iso(&half, &p), Err(Error::NotProjection { .. })));
        // the blocks genuinely fail to commute
        let b = q.blocks();
        assert!((&b[0][0] * &b[2][2] - &b[2][2] * &b[0][0]).norm() > 0.1);
    }

    #[test]
    fn conjugation_rejects_complex_phase() {
        let x = k3();
        let mut q = from_permutation(&x, &x, &[0, 1, 2]).unwrap();
        q.p = q.p.scale(c(0.0, 1.0));
        let rep = check_quantum_iso(&q, 1e-9);
        assert!(rep.get("unitary").unwrap().pass);
        assert!(!rep.get("conjugation").unwrap().pass);
    }

    #[test]
    fn composition() {
        let x = k3();
        let s = [1, 2, 0];
        let t = [1, 0, 2];
        let qs = from_permutation(&x, &x, &s).unwrap();
        let qt = from_permutation(&x, &x, &t).unwrap();
        let comp = compose_iso(&qt, &qs).unwrap();
        let st: Vec<usize> = (0..3).map(|i| t[s[i]]).collect();
        assert_eq!(comp.p, from_permutation(&x, &x, &st).unwrap().p);
        let id = QuantumIso::identity(&x);
        assert_eq!(compose_iso(&id, &qs).unwrap().p, qs.p);
        let m = magic();
        let md = compose_iso(&dual(&m), &m).unwrap();
        assert!(check_quantum_iso(&md, 1e-12).all_pass());
        assert!(compose_iso(&m, &qs).is_err());
    }

    #[test]
    fn composition_associative() {
        let m = magic();
        let (p, _) = standard_projections();
        let m2 = magic_unitary_iso(&p, &p).unwrap();
        let a = compose_iso(&compose_iso(&m, &m2).unwrap(), &m).unwrap();
        let b = compose_iso(&m, &compose_iso(&m2, &m).unwrap()).unwrap();
        assert!(residual(&a.p, &b.p).unwrap() < 1e-14);
    }

    #[test]
    fn duals() {
        let x = k3();
        let id = QuantumIso::identity(&x);
        assert_eq!(dual(&id), id);
        let s = [1, 2, 0];
        let inv = [2, 0, 1];
        assert_eq!(dual(&from_permutation(&x, &x, &s).unwrap()).p, from_permutation(&x, &x, &inv).unwrap().p);
        let m = magic();
        assert_eq!(dual(&dual(&m)), m);
        assert!(check_quantum_iso(&dual(&m), 1e-12).all_pass());
        let (a, b) = dual_modification_residuals(&m);
        assert!(a < 1e-12 && b < 1e-12);
    }

    #[test]
    fn dual_matches_diagram() {
        let m = magic();
        let h = m.h_dim;
        let d = m.dim();
        let hh = Morphism::id(h);
        let diag = chain(&[
            &tensor_all(&[&cup(h), &Morphism::id(d), &hh]),
            &tensor_all(&[&hh, &dagger(&m.p), &hh]),
            &tensor_all(&[&hh, &Morphism::id(d), &dagger(&cup(h))]),
        ])
        .unwrap();
        assert!(residual(&diag, &dual(&m).p).unwrap() < 1e-14);
    }

    #[test]
    fn words() {
        let m = magic();
        assert_eq!(component_on_word(&m, &[Letter::A]), m.p);
        assert_eq!(component_on_word(&m, &[]), Morphism::id(2));
        let aa = component_on_word(&m, &[Letter::A, Letter::A]);
        let pasted = chain(&[&tensor(&Morphism::id(4), &m.p), &tensor(&m.p, &Morphism::id(4))]).unwrap();
        assert!(residual(&aa.flatten(), &pasted.flatten()).unwrap() < 1e-14);
        assert!(residual(&star_component(&m), &m.p).unwrap() < 1e-12);
        let rep = naturality_report(&m, 3, 1e-10, Execution::Sequential);
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn word_pasting_property() {
        let m = magic();
        let w1 = [Letter::A, Letter::AStar];
        let w2 = [Letter::A];
        let full: Vec<Letter> = w1.iter().chain(&w2).copied().collect();
        let c1 = component_on_word(&m, &w1);
        let c2 = component_on_word(&m, &w2);
        let pasted = chain(&[
            &tensor(&Morphism::identity(Shape::of(&[4, 4])), &c2),
            &tensor(&c1, &Morphism::id(4)),
        ])
        .unwrap();
        assert!(residual(&component_on_word(&m, &full).flatten(), &pasted.flatten()).unwrap() < 1e-13);
    }

    #[test]
    fn intertwiners() {
        let m = magic();
        assert!(check_intertwiner(&Morphism::id(2), &m, &m, 1e-12));
        assert!(check_intertwiner(&Morphism::zero(Shape::of(&[2]), Shape::of(&[2])), &m, &m, 1e-12));
        let (p, _) = standard_projections();
        let other = magic_unitary_iso(&p, &p).unwrap();
        let mut r = crate::random::rng(5);
        let f = crate::random::random_morphism(&mut r, &[2], &[2]);
        assert!(!check_intertwiner(&f, &m, &other, 1e-6));
        // the only self-intertwiners of an irreducible magic iso are scalars
        assert_eq!(intertwiner_basis(&m, &m).len(), 1);
    }

    #[test]
    fn pants() {
        let x = k3();
        let e = pair_of_pants(&QuantumIso::identity(&x));
        assert_eq!(e.h_dim, 1);
        assert!(check_endo_frobenius(&e, 1e-12).all_pass());
        let e = pair_of_pants(&from_permutation(&x, &x, &[2, 0, 1]).unwrap());
        assert_eq!(e.h_dim, 1);
        assert!(check_endo_frobenius(&e, 1e-12).all_pass());
        let e = pair_of_pants(&magic());
        assert_eq!(e.h_dim, 4);
        let rep = check_endo_frobenius(&e, 1e-10);
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn perturbed_pants_fail() {
        let mut e = pair_of_pants(&magic());
        let mut r = crate::random::rng(1);
        let noise = crate::random::random_morphism(&mut r, &[4, 4], &[4]).scale_re(1e-3);
        e.mult = e.mult.add(&noise).unwrap();
        assert!(!check_endo_frobenius(&e, 1e-9).get("modification_mult").unwrap().pass);
        let mut e = pair_of_pants(&magic());
        let cm = classical_monoid(4);
        e.mult = cm.mult;
        e.unit = cm.unit;
        let rep = check_endo_frobenius(&e, 1e-9);
        assert!(!rep.get("simple").unwrap().pass);
    }

    #[test]
    fn perms_enumerated() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn brute_force_counts() {
        let c4 = from_classical_graph(&named::cycle(4)).unwrap();
        assert_eq!(brute_force_isos(&c4, &c4, 1e-9, Execution::Sequential).unwrap().len(), 8);
        let p3 = from_classical_graph(&named::path(3)).unwrap();
        assert_eq!(brute_force_isos(&p3, &p3, 1e-9, Execution::Parallel).unwrap().len(), 2);
        let _ = approx_eq(&Morphism::id(1), &Morphism::id(1), 0.0);
    }
}
