//! Dagger bimodules, their relative tensor product, and witnesses for Morita
//! equivalence of Frobenius monoids and for equivalence of quantum isomorphisms.

use crate::error::{shape_err, Error, Result};
use crate::frobenius::{frob_cap, frob_cup, star_hom_report, FrobeniusMonoid};
use crate::hilb::{
    c, chain, compose, conjugate, dagger, residual, tensor, tensor_all, unitarity_residual, Morphism, Shape,
};
use crate::qiso::{pair_of_pants, QuantumIso};
use crate::report::Report;
use crate::split::split_projector;

/// An A–B dagger bimodule with combined action ρ: A⊗M⊗B → M.
#[derive(Clone, Debug, PartialEq)]
pub struct DaggerBimodule {
    pub left: FrobeniusMonoid,
    pub right: FrobeniusMonoid,
    pub m_dim: usize,
    pub rho: Morphism,
}

impl DaggerBimodule {
    pub fn new(left: FrobeniusMonoid, right: FrobeniusMonoid, m_dim: usize, rho: Morphism) -> Result<Self> {
        let rho = rho.reshape(Shape::of(&[left.dim, m_dim, right.dim]), Shape::of(&[m_dim]))?;
        Ok(DaggerBimodule { left, right, m_dim, rho })
    }

    pub fn id(&self) -> Morphism {
        Morphism::id(self.m_dim)
    }

    /// A⊗M → M, with the unit of B inserted.
    pub fn left_action(&self) -> Morphism {
        let m = tensor_all(&[&self.left.id(), &self.id(), &self.right.unit]);
        compose(&self.rho, &m).unwrap()
    }

    /// M⊗B → M, with the unit of A inserted.
    pub fn right_action(&self) -> Morphism {
        let m = tensor_all(&[&self.left.unit, &self.id(), &self.right.id()]);
        compose(&self.rho, &m).unwrap()
    }

    /// Pulls both monoids back along unitary *-isomorphisms w_A: A → A′, w_B: B → B′.
    pub fn transport(&self, wa: &Morphism, wb: &Morphism) -> Result<DaggerBimodule> {
        let left = crate::frobenius::transport(&self.left, wa)?;
        let right = crate::frobenius::transport(&self.right, wb)?;
        let wa = wa.reshape(Shape::of(&[self.left.dim]), Shape::of(&[self.left.dim]))?;
        let wb = wb.reshape(Shape::of(&[self.right.dim]), Shape::of(&[self.right.dim]))?;
        let rho = compose(&self.rho, &tensor_all(&[&dagger(&wa), &self.id(), &dagger(&wb)]))?;
        DaggerBimodule::new(left, right, self.m_dim, rho)
    }
}

pub fn check_bimodule(m: &DaggerBimodule, tol: f64) -> Report {
    let (a, b) = (&m.left, &m.right);
    let mut rep = Report::new(tol);
    let outer = compose(&m.rho, &tensor_all(&[&a.mult, &m.id(), &b.mult])).unwrap();
    let nested = compose(&m.rho, &tensor_all(&[&a.id(), &m.rho, &b.id()])).unwrap();
    rep.push("associativity", residual(&outer, &nested).unwrap());
    let unit = compose(&m.rho, &tensor_all(&[&a.unit, &m.id(), &b.unit])).unwrap();
    rep.push("unit", residual(&unit, &m.id()).unwrap());
    // ρ† with its A and B outputs capped against the incoming A and B wires
    let bent = chain(&[
        &tensor_all(&[&a.id(), &dagger(&m.rho), &b.id()]),
        &tensor_all(&[&frob_cap(a), &m.id(), &frob_cap(b)]),
    ])
    .unwrap();
    rep.push("dagger", residual(&bent, &m.rho).unwrap());
    rep
}

/// ₐA_A with action a⊗x⊗b ↦ (a·x)·b.
pub fn trivial_bimodule(a: &FrobeniusMonoid) -> DaggerBimodule {
    let rho = compose(&a.mult, &tensor(&a.mult, &a.id())).unwrap();
    DaggerBimodule::new(a.clone(), a.clone(), a.dim, rho).expect("trivial shapes")
}

/// Bimodule over classical monoids C^p and C^q with blocks M = ⊕ C^{k[i][j]}; e_i and
/// e_j act by projecting onto block (i, j).
pub fn classical_bimodule(k: &[Vec<usize>]) -> Result<DaggerBimodule> {
    let p = k.len();
    let q = k.first().map_or(0, Vec::len);
    if k.iter().any(|r| r.len() != q) {
        return Err(Error::Invalid("ragged block dimensions".into()));
    }
    let mut block = Vec::new();
    for (i, row) in k.iter().enumerate() {
        for (j, &n) in row.iter().enumerate() {
            block.extend(std::iter::repeat_n((i, j), n));
        }
    }
    let md = block.len();
    let rho = Morphism::from_fn(Shape::of(&[p, md, q]), Shape::of(&[md]), |r, col| {
        let (i, rest) = (col / (md * q), col % (md * q));
        let (x, j) = (rest / q, rest % q);
        if x == r && block[x] == (i, j) {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    DaggerBimodule::new(
        crate::frobenius::classical_monoid(p),
        crate::frobenius::classical_monoid(q),
        md,
        rho,
    )
}

/// The relative tensor product together with its splitting data.
#[derive(Clone, Debug)]
pub struct RelTensor {
    pub bimodule: DaggerBimodule,
    /// Isometry M⊗_B N → M⊗N.
    pub iota: Morphism,
    pub idempotent: Morphism,
    pub hermitian_residual: f64,
    pub idempotent_residual: f64,
}

/// (r_M⊗l_N)∘(id_M⊗frob_cup_B⊗id_N) on M⊗N.
pub fn rel_idempotent(m: &DaggerBimodule, n: &DaggerBimodule) -> Result<Morphism> {
    if m.right.dim != n.left.dim || residual(&m.right.mult, &n.left.mult)? > crate::hilb::DEFAULT_TOL {
        return Err(Error::Mismatch("right monoid of M differs from left monoid of N".into()));
    }
    let b = &m.right;
    chain(&[&tensor_all(&[&m.id(), &frob_cup(b), &n.id()]), &tensor(&m.right_action(), &n.left_action())])
}

pub fn rel_tensor_split(m: &DaggerBimodule, n: &DaggerBimodule, tol: f64) -> Result<RelTensor> {
    let e = rel_idempotent(m, n)?;
    let hermitian_residual = residual(&dagger(&e), &e)?;
    let idempotent_residual = residual(&compose(&e, &e)?, &e)?;
    let worst = hermitian_residual.max(idempotent_residual);
    if worst > tol {
        return Err(Error::NotProjection { what: "relative tensor idempotent".into(), residual: worst });
    }
    let iota = split_projector(&e.flatten(), tol)?;
    let k = iota.dom().total();
    let iota_mn = iota.reshape(Shape::of(&[k]), Shape::of(&[m.m_dim, n.m_dim]))?;
    let action = tensor(&m.left_action(), &n.right_action());
    let rho = chain(&[
        &tensor_all(&[&m.left.id(), &iota_mn, &n.right.id()]),
        &action,
        &dagger(&iota_mn),
    ])?;
    let bimodule = DaggerBimodule::new(m.left.clone(), n.right.clone(), k, rho)?;
    Ok(RelTensor { bimodule, iota, idempotent: e, hermitian_residual, idempotent_residual })
}

pub fn rel_tensor(m: &DaggerBimodule, n: &DaggerBimodule, tol: f64) -> Result<DaggerBimodule> {
    rel_tensor_split(m, n, tol).map(|r| r.bimodule)
}

/// Residual of f∘ρ_M = ρ_N∘(id⊗f⊗id), and the unitarity residual of f.
pub fn bimodule_morphism_residuals(f: &Morphism, m: &DaggerBimodule, n: &DaggerBimodule) -> Result<(f64, f64)> {
    if m.left.dim != n.left.dim || m.right.dim != n.right.dim {
        return Err(Error::Mismatch("bimodules over different monoids".into()));
    }
    if f.dom().total() != m.m_dim || f.cod().total() != n.m_dim {
        return Err(shape_err("bimodule morphism", format!("{} <- {}", f.cod(), f.dom()), format!("{} <- {}", n.m_dim, m.m_dim)));
    }
    let f = f.reshape(Shape::of(&[m.m_dim]), Shape::of(&[n.m_dim]))?;
    let lhs = compose(&f, &m.rho)?;
    let rhs = compose(&n.rho, &tensor_all(&[&m.left.id(), &f, &m.right.id()]))?;
    Ok((residual(&lhs, &rhs)?, unitarity_residual(&f)))
}

pub fn check_bimodule_morphism(f: &Morphism, m: &DaggerBimodule, n: &DaggerBimodule, tol: f64) -> bool {
    bimodule_morphism_residuals(f, m, n).is_ok_and(|(a, _)| a <= tol)
}

/// The unitary m∘ι: A⊗_A A → A.
pub fn absorption_unitary(a: &FrobeniusMonoid, split: &RelTensor) -> Morphism {
    let iota = split.iota.reshape(split.iota.dom().clone(), Shape::of(&[a.dim, a.dim])).unwrap();
    compose(&a.mult, &iota).unwrap()
}

/// Data for a Morita equivalence between M.left and M.right.
#[derive(Clone, Debug)]
pub struct MoritaWitness {
    pub m: DaggerBimodule,
    pub n: DaggerBimodule,
    /// M⊗_B N → ₐA_A
    pub u1: Morphism,
    /// N⊗_A M → _BB_B
    pub u2: Morphism,
}

pub fn morita_report(m: &DaggerBimodule, n: &DaggerBimodule, u1: &Morphism, u2: &Morphism, tol: f64) -> Result<Report> {
    let mut rep = Report::new(tol);
    rep.extend_prefixed("m", &check_bimodule(m, tol));
    rep.extend_prefixed("n", &check_bimodule(n, tol));
    let mn = rel_tensor(m, n, tol)?;
    let nm = rel_tensor(n, m, tol)?;
    let (a1, u1r) = bimodule_morphism_residuals(u1, &mn, &trivial_bimodule(&m.left))?;
    let (a2, u2r) = bimodule_morphism_residuals(u2, &nm, &trivial_bimodule(&m.right))?;
    rep.push("u1.action", a1);
    rep.push("u1.unitary", u1r);
    rep.push("u2.action", a2);
    rep.push("u2.unitary", u2r);
    Ok(rep)
}

pub fn check_morita_witness(m: &DaggerBimodule, n: &DaggerBimodule, u1: &Morphism, u2: &Morphism, tol: f64) -> bool {
    morita_report(m, n, u1, u2, tol).is_ok_and(|r| r.all_pass())
}

/// Witness from a unitary *-isomorphism φ: A → B. M = B with A acting through φ
/// on the left, N = B with A acting through φ on the right.
pub fn morita_witness_from_iso(a: &FrobeniusMonoid, b: &FrobeniusMonoid, phi: &Morphism, tol: f64) -> Result<MoritaWitness> {
    let sh = star_hom_report(phi, a, b, tol)?;
    if !sh.is_star_hom() || !sh.is_unitary() {
        return Err(Error::AxiomFailure {
            what: "unitary *-isomorphism".into(),
            residual: sh.report.max_residual().max(sh.unitary_residual),
        });
    }
    let phi = phi.reshape(Shape::of(&[a.dim]), Shape::of(&[b.dim]))?;
    let mm = compose(&b.mult, &tensor(&b.mult, &b.id()))?;
    let m = DaggerBimodule::new(a.clone(), b.clone(), b.dim, compose(&mm, &tensor_all(&[&phi, &b.id(), &b.id()]))?)?;
    let n = DaggerBimodule::new(b.clone(), a.clone(), b.dim, compose(&mm, &tensor_all(&[&b.id(), &b.id(), &phi]))?)?;
    let mn = rel_tensor_split(&m, &n, tol)?;
    let nm = rel_tensor_split(&n, &m, tol)?;
    let u1 = chain(&[&mn.iota.reshape(mn.iota.dom().clone(), Shape::of(&[b.dim, b.dim]))?, &b.mult, &dagger(&phi)])?;
    let u2 = compose(&b.mult, &nm.iota.reshape(nm.iota.dom().clone(), Shape::of(&[b.dim, b.dim]))?)?;
    Ok(MoritaWitness { m, n, u1, u2 })
}

/// Equivalence of quantum isomorphisms Q1: X → Y1, Q2: X → Y2 witnessed by a
/// unitary *-isomorphism e: Y2 → Y1 of quantum graphs and a unitary τ: H1 → H2
/// with (id⊗e)∘P2∘(id⊗τ) = (τ⊗id)∘P1.
pub fn equivalence_report(q1: &QuantumIso, q2: &QuantumIso, e: &Morphism, tau: &Morphism, tol: f64) -> Result<Report> {
    let (y1, y2) = (&q1.target, &q2.target);
    let (h1, h2) = (q1.h_dim, q2.h_dim);
    if q1.dim() != q2.dim() {
        return Err(Error::Mismatch("sources differ".into()));
    }
    if e.dom().total() != y2.dim() || e.cod().total() != y1.dim() {
        return Err(shape_err("equivalence e", format!("{} <- {}", e.cod(), e.dom()), format!("{} <- {}", y1.dim(), y2.dim())));
    }
    if tau.dom().total() != h1 || tau.cod().total() != h2 {
        return Err(shape_err("equivalence tau", format!("{} <- {}", tau.cod(), tau.dom()), format!("{h2} <- {h1}")));
    }
    let e = e.reshape(Shape::of(&[y2.dim()]), Shape::of(&[y1.dim()]))?;
    let tau = tau.reshape(Shape::of(&[h1]), Shape::of(&[h2]))?;
    let mut rep = Report::new(tol);
    rep.push("tau_unitary", unitarity_residual(&tau));
    let sh = star_hom_report(&e, &y2.monoid, &y1.monoid, tol)?;
    rep.push("e_unitary", sh.unitary_residual);
    rep.extend_prefixed("e_star_hom", &sh.report);
    rep.push("e_gamma", residual(&compose(&e, &y2.gamma)?, &compose(&y1.gamma, &e)?)?);
    let d = q1.dim();
    let p1 = q1.p.reshape(Shape::of(&[d, h1]), Shape::of(&[h1, y1.dim()]))?;
    let p2 = q2.p.reshape(Shape::of(&[d, h2]), Shape::of(&[h2, y2.dim()]))?;
    let lhs = chain(&[&tensor(&Morphism::id(d), &tau), &p2, &tensor(&Morphism::id(h2), &e)])?;
    let rhs = compose(&tensor(&tau, &Morphism::id(y1.dim())), &p1)?;
    rep.push("modification", residual(&lhs, &rhs)?);
    Ok(rep)
}

pub fn check_equivalent_upts(q1: &QuantumIso, q2: &QuantumIso, e: &Morphism, tau: &Morphism, tol: f64) -> bool {
    equivalence_report(q1, q2, e, tau, tol).is_ok_and(|r| r.all_pass())
}

/// The *-isomorphism τ⊗τ̄ between the pair-of-pants monoids of equivalent
/// isomorphisms, with its Morita witness and the check that it carries β₁ to β₂.
pub fn pants_witness(q1: &QuantumIso, q2: &QuantumIso, tau: &Morphism, tol: f64) -> Result<(Morphism, MoritaWitness, Report)> {
    let (e1, e2) = (pair_of_pants(q1), pair_of_pants(q2));
    let phi = tensor(tau, &conjugate(tau)).flatten();
    let w = morita_witness_from_iso(&e1.monoid(), &e2.monoid(), &phi, tol)?;
    let mut rep = morita_report(&w.m, &w.n, &w.u1, &w.u2, tol)?;
    let d = q1.dim();
    let ida = Morphism::id(d);
    let phi_sq = phi.reshape(Shape::of(&[e1.h_dim]), Shape::of(&[e2.h_dim]))?;
    let lhs = compose(&tensor(&phi_sq, &ida), &e1.beta)?;
    let rhs = compose(&e2.beta, &tensor(&ida, &phi_sq))?;
    rep.push("beta_intertwined", residual(&lhs, &rhs)?);
    Ok((phi, w, rep))
}
