//! Frobenius monoids in Hilb: axiom suites, standard examples, *-homomorphisms
//! and a constructive simplicity test.

use crate::error::{shape_err, Error, Result};
use crate::hilb::{
    c, chain, compose, cup, dagger, residual, swap, tensor, tensor_all, unitarity_residual, Mat, Morphism, Shape,
    DEFAULT_TOL,
};
use crate::linalg::{hermitian_eigen, singular_values, rank_threshold};
use crate::random::{gaussian, rng};
use crate::report::Report;

/// Singular-value threshold for every rank decision.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusMonoid {
    pub dim: usize,
    pub mult: Morphism,
    pub unit: Morphism,
}

impl FrobeniusMonoid {
    /// Normalizes shapes to mult: [d,d] → [d], unit: [] → [d].
    pub fn new(mult: Morphism, unit: Morphism) -> Result<Self> {
        let d = unit.cod().total();
        if unit.dom().total() != 1 || mult.cod().total() != d || mult.dom().total() != d * d {
            return Err(shape_err(
                "frobenius monoid",
                format!("mult {} <- {}", mult.cod(), mult.dom()),
                format!("unit {} <- {}", unit.cod(), unit.dom()),
            ));
        }
        let mult = mult.reshape(Shape::of(&[d, d]), Shape::of(&[d]))?;
        let unit = unit.reshape(Shape::unit(), Shape::of(&[d]))?;
        Ok(FrobeniusMonoid { dim: d, mult, unit })
    }

    pub fn comult(&self) -> Morphism {
        dagger(&self.mult)
    }

    pub fn counit(&self) -> Morphism {
        dagger(&self.unit)
    }

    pub fn id(&self) -> Morphism {
        Morphism::id(self.dim)
    }

    /// Left multiplication operator L_a = m∘(a⊗id) as a d×d matrix.
    pub fn left_op(&self, a: &Morphism) -> Mat {
        compose(&self.mult, &tensor(a, &self.id())).expect("carrier vector").into_matrix()
    }

    pub fn right_op(&self, a: &Morphism) -> Mat {
        compose(&self.mult, &tensor(&self.id(), a)).expect("carrier vector").into_matrix()
    }

    /// Involution a ↦ (a†⊗id)∘frob_cup.
    pub fn star(&self, a: &Morphism) -> Morphism {
        let a = a.reshape(Shape::unit(), Shape::of(&[self.dim])).expect("carrier vector");
        compose(&tensor(&dagger(&a), &self.id()), &frob_cup(self)).expect("shapes")
    }
}

pub fn frob_cup(a: &FrobeniusMonoid) -> Morphism {
    compose(&a.comult(), &a.unit).expect("monoid shapes")
}

pub fn frob_cap(a: &FrobeniusMonoid) -> Morphism {
    compose(&a.counit(), &a.mult).expect("monoid shapes")
}

/// Associativity, unitality and both Frobenius equations.
pub fn check_frobenius_monoid(a: &FrobeniusMonoid, tol: f64) -> Report {
    let mut rep = Report::new(tol);
    let (m, u, id) = (&a.mult, &a.unit, a.id());
    let d = a.comult();
    let r = |l: Morphism, r: Morphism| residual(&l, &r).unwrap_or(f64::INFINITY);
    rep.push(
        "associativity",
        r(chain(&[&tensor(m, &id), m]).unwrap(), chain(&[&tensor(&id, m), m]).unwrap()),
    );
    rep.push("unit_left", r(chain(&[&tensor(u, &id), m]).unwrap(), id.clone()));
    rep.push("unit_right", r(chain(&[&tensor(&id, u), m]).unwrap(), id.clone()));
    let dm = compose(&d, m).unwrap();
    rep.push(
        "frobenius_left",
        r(chain(&[&tensor(&d, &id), &tensor(&id, m)]).unwrap(), dm.clone()),
    );
    rep.push("frobenius_right", r(chain(&[&tensor(&id, &d), &tensor(m, &id)]).unwrap(), dm));
    rep
}

/// Comonoid axioms; these follow from the monoid axioms by taking daggers.
pub fn check_comonoid(a: &FrobeniusMonoid, tol: f64) -> Report {
    let mut rep = Report::new(tol);
    let (d, e, id) = (a.comult(), a.counit(), a.id());
    let r = |l: Morphism, r: Morphism| residual(&l, &r).unwrap_or(f64::INFINITY);
    rep.push(
        "coassociativity",
        r(chain(&[&d, &tensor(&d, &id)]).unwrap(), chain(&[&d, &tensor(&id, &d)]).unwrap()),
    );
    rep.push("counit_left", r(chain(&[&d, &tensor(&e, &id)]).unwrap(), id.clone()));
    rep.push("counit_right", r(chain(&[&d, &tensor(&id, &e)]).unwrap(), id));
    rep
}

pub fn special_residual(a: &FrobeniusMonoid) -> f64 {
    residual(&compose(&a.mult, &a.comult()).unwrap(), &a.id()).unwrap()
}

pub fn symmetric_residual(a: &FrobeniusMonoid) -> f64 {
    let cap = frob_cap(a);
    residual(&chain(&[&swap(a.dim, a.dim), &cap]).unwrap(), &cap).unwrap()
}

pub fn check_special(a: &FrobeniusMonoid, tol: f64) -> bool {
    special_residual(a) <= tol
}

pub fn check_symmetric(a: &FrobeniusMonoid, tol: f64) -> bool {
    symmetric_residual(a) <= tol
}

/// Frobenius axioms together with speciality and symmetry.
pub fn full_report(a: &FrobeniusMonoid, tol: f64) -> Report {
    let mut rep = check_frobenius_monoid(a, tol);
    rep.push("special", special_residual(a));
    rep.push("symmetric", symmetric_residual(a));
    rep
}

/// Normalized pair-of-pants algebra on d⊗d, flattened to one factor of size d².
pub fn endo_monoid(d: usize) -> FrobeniusMonoid {
    let s = (d as f64).sqrt();
    let mult = tensor_all(&[&Morphism::id(d), &dagger(&cup(d)), &Morphism::id(d)]).scale_re(1.0 / s);
    let unit = cup(d).scale_re(s);
    FrobeniusMonoid::new(mult, unit).expect("endo shapes")
}

/// The un-normalized endomorphism algebra on d⊗d: cap multiplication, cup unit.
pub fn endo_algebra(d: usize) -> FrobeniusMonoid {
    let mult = tensor_all(&[&Morphism::id(d), &dagger(&cup(d)), &Morphism::id(d)]);
    FrobeniusMonoid::new(mult, cup(d)).expect("endo shapes")
}

pub fn classical_monoid(n: usize) -> FrobeniusMonoid {
    let mult = Morphism::from_fn(Shape::of(&[n, n]), Shape::of(&[n]), |r, col| {
        if col == r * n + r {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let unit = Morphism::from_fn(Shape::unit(), Shape::of(&[n]), |_, _| c(1.0, 0.0));
    FrobeniusMonoid { dim: n, mult, unit }
}

/// Block direct sum of two monoids.
pub fn direct_sum(a: &FrobeniusMonoid, b: &FrobeniusMonoid) -> FrobeniusMonoid {
    let (da, db) = (a.dim, b.dim);
    let d = da + db;
    let mult = Morphism::from_fn(Shape::of(&[d, d]), Shape::of(&[d]), |r, col| {
        let (x, y) = (col / d, col % d);
        if r < da && x < da && y < da {
            a.mult.entry(r, x * da + y)
        } else if r >= da && x >= da && y >= da {
            b.mult.entry(r - da, (x - da) * db + (y - da))
        } else {
            c(0.0, 0.0)
        }
    });
    let unit = Morphism::from_fn(Shape::unit(), Shape::of(&[d]), |r, _| {
        if r < da {
            a.unit.entry(r, 0)
        } else {
            b.unit.entry(r - da, 0)
        }
    });
    FrobeniusMonoid { dim: d, mult, unit }
}

#[derive(Clone, Debug)]
pub struct StarHomReport {
    pub report: Report,
    pub unitary_residual: f64,
}

impl StarHomReport {
    pub fn is_star_hom(&self) -> bool {
        self.report.all_pass()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary_residual <= self.report.tol
    }
}

pub fn star_hom_report(f: &Morphism, a: &FrobeniusMonoid, b: &FrobeniusMonoid, tol: f64) -> Result<StarHomReport> {
    if f.dom().total() != a.dim || f.cod().total() != b.dim {
        return Err(shape_err("star_hom", format!("{} <- {}", f.cod(), f.dom()), format!("{} <- {}", b.dim, a.dim)));
    }
    let f = f.reshape(Shape::of(&[a.dim]), Shape::of(&[b.dim]))?;
    let mut rep = Report::new(tol);
    rep.push(
        "mult",
        residual(&compose(&f, &a.mult)?, &compose(&b.mult, &tensor(&f, &f))?)?,
    );
    rep.push("unit", residual(&compose(&f, &a.unit)?, &b.unit)?);
    let lhs = compose(&tensor(&a.id(), &f), &frob_cup(a))?;
    let rhs = compose(&tensor(&dagger(&f), &b.id()), &frob_cup(b))?;
    rep.push("involution", residual(&lhs, &rhs)?);
    Ok(StarHomReport { report: rep, unitary_residual: unitarity_residual(&f) })
}

pub fn check_star_hom(f: &Morphism, a: &FrobeniusMonoid, b: &FrobeniusMonoid, tol: f64) -> bool {
    star_hom_report(f, a, b, tol).map(|r| r.is_star_hom()).unwrap_or(false)
}

/// Conjugates the structure maps by a unitary w.
pub fn transport(a: &FrobeniusMonoid, w: &Morphism) -> Result<FrobeniusMonoid> {
    if w.dom().total() != a.dim || w.cod().total() != a.dim {
        return Err(shape_err("transport", format!("{} <- {}", w.cod(), w.dom()), a.dim));
    }
    let res = unitarity_residual(w);
    if res > DEFAULT_TOL {
        return Err(Error::Unitarity { what: "transport map".into(), residual: res });
    }
    let w = w.reshape(Shape::of(&[a.dim]), Shape::of(&[a.dim]))?;
    let wd = dagger(&w);
    let mult = chain(&[&tensor(&wd, &wd), &a.mult, &w])?;
    let unit = compose(&w, &a.unit)?;
    FrobeniusMonoid::new(mult, unit)
}

/// Matrix of x ↦ vec(L_x − R_x).
fn commutator_map(a: &FrobeniusMonoid) -> Mat {
    let d = a.dim;
    let mut t = Mat::zeros(d * d, d);
    for x in 0..d {
        let e = Morphism::ket(d, x);
        let diff = a.left_op(&e) - a.right_op(&e);
        for r in 0..d {
            for col in 0..d {
                t[(r * d + col, x)] = diff[(r, col)];
            }
        }
    }
    t
}

pub fn center_dim(a: &FrobeniusMonoid) -> usize {
    let s = singular_values(&commutator_map(a));
    let t = rank_threshold(&s, RANK_TOL);
    a.dim - s.iter().filter(|&&x| x > t).count()
}

/// An irreducible representation of a simple monoid and the induced unitary
/// *-isomorphism onto `endo_monoid(k)`.
#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub k: usize,
    /// Isometry d → k spanning the chosen minimal left ideal.
    pub basis: Mat,
    /// Images π(e_x) of the carrier basis.
    pub pi_basis: Vec<Mat>,
    /// Unitary carrier → k⊗k (flattened to [k²]).
    pub w: Morphism,
    pub seed: u64,
    pub residual: f64,
}

impl Wedderburn {
    pub fn pi(&self, a: &Morphism) -> Mat {
        let mut out = Mat::zeros(self.k, self.k);
        for (x, px) in self.pi_basis.iter().enumerate() {
            out += px * a.entry(x, 0);
        }
        out
    }
}

fn perfect_sqrt(n: usize) -> Option<usize> {
    let k = (n as f64).sqrt().round() as usize;
    (k * k == n).then_some(k)
}

pub fn wedderburn_irrep(a: &FrobeniusMonoid, seed: u64, tol: f64) -> Result<Wedderburn> {
    let cd = center_dim(a);
    let k = match perfect_sqrt(a.dim) {
        Some(k) if cd == 1 => k,
        Some(_) => {
            return Err(Error::NotSimple { reason: format!("center has dimension {cd}"), center_dim: cd });
        }
        None => {
            return Err(Error::NotSimple { reason: format!("dimension {} is not a square", a.dim), center_dim: cd });
        }
    };
    let mut worst = f64::INFINITY;
    for attempt in 0..3u64 {
        match wedderburn_attempt(a, k, seed.wrapping_add(attempt), tol) {
            Ok(w) => return Ok(w),
            Err(r) => worst = worst.min(r),
        }
    }
    Err(Error::DecompositionFailed { residual: worst })
}

fn wedderburn_attempt(a: &FrobeniusMonoid, k: usize, seed: u64, tol: f64) -> std::result::Result<Wedderburn, f64> {
    let d = a.dim;
    let mut r = rng(seed);
    let lefts: Vec<Mat> = (0..d).map(|x| a.left_op(&Morphism::ket(d, x))).collect();
    let coeffs: Vec<_> = (0..d).map(|_| gaussian(&mut r)).collect();
    let b = Morphism::from_fn(Shape::unit(), Shape::of(&[d]), |i, _| coeffs[i]);
    let rb = a.right_op(&b);
    let h = &rb + rb.adjoint();
    let scale = h.norm().max(1.0);
    // Right multiplications commute with left ones; the adjoint does when the
    // Frobenius form is the ambient inner product.
    let comm = lefts.iter().map(|l| (&h * l - l * &h).norm()).fold(0.0, f64::max) / scale;
    if comm > 1e-8 {
        return Err(comm);
    }
    let (vals, vecs) = hermitian_eigen(&h);
    let spread = (vals[k - 1] - vals[0]).abs() / scale;
    let gap = if k < d { (vals[k] - vals[k - 1]) / scale } else { 1.0 };
    if spread > 1e-7 || gap < 1e-6 {
        return Err(spread.max(1e-6 - gap.min(1e-6)));
    }
    let v = vecs.columns(0, k).into_owned();
    let vd = v.adjoint();
    let pi_basis: Vec<Mat> = lefts.iter().map(|l| &vd * l * &v).collect();
    let sk = (k as f64).sqrt();
    let w = Morphism::from_fn(Shape::of(&[d]), Shape::of(&[k * k]), |row, x| pi_basis[x][(row / k, row % k)] * sk);
    let target = endo_monoid(k);
    let rep = star_hom_report(&w, a, &target, tol).map_err(|_| f64::INFINITY)?;
    let res = rep.report.max_residual().max(rep.unitary_residual);
    if res > tol {
        return Err(res);
    }
    Ok(Wedderburn { k, basis: v, pi_basis, w, seed, residual: res })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SimpleVerdict {
    pub simple: bool,
    pub center_dim: usize,
    pub k: Option<usize>,
    pub symmetric: bool,
    pub reason: Option<String>,
}

pub fn check_simple(a: &FrobeniusMonoid, tol: f64) -> SimpleVerdict {
    check_simple_seeded(a, tol, 42)
}

pub fn check_simple_seeded(a: &FrobeniusMonoid, tol: f64, seed: u64) -> SimpleVerdict {
    let mut v = SimpleVerdict {
        simple: false,
        center_dim: center_dim(a),
        k: None,
        symmetric: check_symmetric(a, tol),
        reason: None,
    };
    let axioms = check_frobenius_monoid(a, tol);
    if !axioms.all_pass() {
        let names: Vec<_> = axioms.failures().iter().map(|c| c.name.clone()).collect();
        v.reason = Some(format!("axioms fail: {}", names.join(", ")));
        return v;
    }
    if !check_special(a, tol) {
        v.reason = Some("not special".into());
        return v;
    }
    match wedderburn_irrep(a, seed, tol) {
        Ok(w) => {
            v.simple = true;
            v.k = Some(w.k);
        }
        Err(e) => v.reason = Some(e.to_string()),
    }
    v
}
