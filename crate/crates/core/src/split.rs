//! Splitting a simple Frobenius monoid in End(F): standardization, the
//! splitting idempotents, the new fibre functor F_α on words, the quantum graph
//! it induces and the splitting isomorphism √α.

use crate::error::{Error, Result};
use crate::frobenius::{endo_monoid, wedderburn_irrep};
use crate::hilb::{
    c, chain, compose, conjugate, cup, dagger, isometry_residual, residual, tensor, tensor_all, trace,
    unitarity_residual, Leg, Mat, Morphism, Shape,
};
use crate::linalg::hermitian_eigen;
use crate::qgraph::{check_quantum_graph, QuantumGraph};
use crate::qiso::{
    check_quantum_iso, component_on_word, pair_of_pants, EndoFrobenius, Letter, QuantumIso,
};
use crate::report::Report;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Conjugates an endo monoid into the standard pair-of-pants form on h⊗h.
pub fn standardize(e: &EndoFrobenius, seed: u64, tol: f64) -> Result<EndoFrobenius> {
    let h = e.root().ok_or_else(|| Error::NotSimple {
        reason: format!("carrier {} is not a square", e.h_dim),
        center_dim: crate::frobenius::center_dim(&e.monoid()),
    })?;
    let std = endo_monoid(h);
    let already = residual(&e.mult, &std.mult).is_ok_and(|r| r <= tol)
        && residual(&e.unit, &std.unit).is_ok_and(|r| r <= tol);
    if already {
        return Ok(e.clone());
    }
    let w = wedderburn_irrep(&e.monoid(), seed, tol)?.w;
    Ok(gauge(e, &w))
}

/// Replaces β by (w⊗id)∘β∘(id⊗w†) and installs the standard monoid.
pub fn gauge(e: &EndoFrobenius, w: &Morphism) -> EndoFrobenius {
    let (d, k) = (e.base.dim(), e.h_dim);
    let w = w.reshape(Shape::of(&[k]), Shape::of(&[k])).expect("carrier unitary");
    let ida = e.base.monoid.id();
    let beta = chain(&[&tensor(&ida, &dagger(&w)), &e.beta, &tensor(&w, &ida)])
        .and_then(|b| b.reshape(Shape::of(&[d, k]), Shape::of(&[k, d])))
        .expect("component shapes");
    let h = e.root().expect("square carrier");
    let std = endo_monoid(h);
    EndoFrobenius { base: e.base.clone(), h_dim: k, beta, mult: std.mult, unit: std.unit }
}

/// Isometry ι with ι∘ι† = p for a Hermitian idempotent p.
///
/// The columns are the Gram–Schmidt orthonormalization of the columns of p,
/// taking at each step the lowest-index column whose residual has at least
/// half the largest residual norm², with the phase fixed so that the entry at
/// that column index is real and positive. p = id gives ι = id.
pub fn split_projector(p: &Morphism, tol: f64) -> Result<Morphism> {
    let herm = (p.matrix() - p.matrix().adjoint()).norm() / p.norm().max(1.0);
    if herm > tol.max(1e-8) * 10.0 {
        return Err(Error::NotProjection { what: "idempotent".into(), residual: herm });
    }
    let (vals, vecs) = hermitian_eigen(p.matrix());
    if let Some(&bad) = vals.iter().find(|&&v| (0.1..=0.9).contains(&v)) {
        return Err(Error::SpectrumNotBinary { eigenvalue: bad });
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
    if keep.is_empty() {
        return Err(Error::Invalid("idempotent is zero, its image has no carrier".into()));
    }
    let n = p.matrix().nrows();
    let v = Mat::from_fn(n, keep.len(), |r, k| vecs[(r, keep[k])]);
    let clean = &v * v.adjoint();
    let mut resid: Vec<Vec<crate::hilb::C64>> = (0..n).map(|j| clean.column(j).iter().copied().collect()).collect();
    let mut used = vec![false; n];
    let mut cols: Vec<Vec<crate::hilb::C64>> = Vec::with_capacity(keep.len());
    for _ in 0..keep.len() {
        let norms: Vec<f64> = resid.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect();
        let max = (0..n).filter(|&j| !used[j]).map(|j| norms[j]).fold(0.0, f64::max);
        let j = (0..n).find(|&j| !used[j] && norms[j] >= 0.5 * max).expect("pivot");
        used[j] = true;
        let nrm = norms[j].sqrt();
        let ph = resid[j][j] / resid[j][j].norm().max(f64::MIN_POSITIVE);
        let q: Vec<_> = resid[j].iter().map(|z| z / (ph * nrm)).collect();
        for (k, r) in resid.iter_mut().enumerate() {
            if used[k] && k != j {
                continue;
            }
            let ip: crate::hilb::C64 = q.iter().zip(r.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in r.iter_mut().zip(&q) {
                *x -= a * ip;
            }
        }
        cols.push(q);
    }
    let mat = Mat::from_fn(n, cols.len(), |r, k| cols[k][r]);
    Morphism::new(Shape::of(&[cols.len()]), p.cod().clone(), mat)
}

/// Dagger idempotent on H*⊗F(word)⊗H, dom and cod shape [h, D, h].
pub fn idempotent_for(e: &EndoFrobenius, word: &[Letter]) -> Morphism {
    let h = e.root().expect("square carrier");
    let bw = component_on_word(&e.as_iso(), word).flatten();
    let dd = bw.dom().total() / e.h_dim;
    // β_word: V⊗(H⊗H*) → (H⊗H*)⊗V, so p[(b,v',c),(x,v,y)] = β[(x,b,v'),(v,y,c)]/h
    let bw = bw.reshape(Shape::of(&[dd, h, h]), Shape::of(&[h, h, dd])).unwrap();
    bw.rearrange(&[Leg::Cod(1), Leg::Cod(2), Leg::Dom(2)], &[Leg::Cod(0), Leg::Dom(0), Leg::Dom(1)])
        .unwrap()
        .scale_re(1.0 / h as f64)
}

#[derive(Clone, Debug)]
pub struct SplitWord {
    pub dim: usize,
    pub idempotent: Morphism,
    /// F_α(word) → H*⊗F(word)⊗H
    pub iota: Morphism,
}

/// The accessible fibre functor F_α, evaluated lazily on words.
#[derive(Debug)]
pub struct SplitFunctor {
    pub base: QuantumGraph,
    pub endo: EndoFrobenius,
    pub h: usize,
    pub tol: f64,
    cache: RwLock<HashMap<Vec<Letter>, Arc<SplitWord>>>,
}

impl SplitFunctor {
    /// Requires a standardized endo monoid.
    pub fn new(endo: EndoFrobenius, tol: f64) -> Result<Self> {
        let h = endo.root().ok_or_else(|| Error::NotSimple { reason: "carrier is not a square".into(), center_dim: 0 })?;
        let std = endo_monoid(h);
        let r = residual(&endo.mult, &std.mult)?.max(residual(&endo.unit, &std.unit)?);
        if r > tol {
            return Err(Error::AxiomFailure { what: "standard form".into(), residual: r });
        }
        Ok(SplitFunctor { base: endo.base.clone(), endo, h, tol, cache: RwLock::new(HashMap::new()) })
    }

    pub fn from_endo(e: &EndoFrobenius, seed: u64, tol: f64) -> Result<Self> {
        SplitFunctor::new(standardize(e, seed, tol)?, tol)
    }

    pub fn from_iso(q: &QuantumIso, seed: u64, tol: f64) -> Result<Self> {
        SplitFunctor::from_endo(&pair_of_pants(q), seed, tol)
    }

    /// Idempotent, rank and isometry for a word; cached, safe to call concurrently.
    pub fn word(&self, word: &[Letter]) -> Result<Arc<SplitWord>> {
        if let Some(w) = self.cache.read().expect("cache lock").get(word) {
            return Ok(w.clone());
        }
        let p = idempotent_for(&self.endo, word);
        let iota = split_projector(&p, self.tol)?;
        let entry = Arc::new(SplitWord { dim: iota.dom().total(), idempotent: p, iota });
        let mut map = self.cache.write().expect("cache lock");
        Ok(map.entry(word.to_vec()).or_insert(entry).clone())
    }

    pub fn cached_words(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn splitting_idempotent(&self, word: &[Letter]) -> Result<Morphism> {
        Ok(self.word(word)?.idempotent.clone())
    }

    pub fn dim(&self, word: &[Letter]) -> Result<usize> {
        Ok(self.word(word)?.dim)
    }

    /// ι_out†∘(id_H*⊗f⊗id_H)∘ι_in.
    pub fn f_alpha_morphism(&self, f: &Morphism, word_in: &[Letter], word_out: &[Letter]) -> Result<Morphism> {
        let (wi, wo) = (self.word(word_in)?, self.word(word_out)?);
        let h = Morphism::id(self.h);
        let f = f.flatten();
        let mid = tensor_all(&[&h, &f, &h]).flatten();
        let out = chain(&[&wi.iota.flatten(), &mid, &dagger(&wo.iota).flatten()])?;
        out.reshape(Shape::of(&[wi.dim]), Shape::of(&[wo.dim]))
    }

    /// m_{V,W} = √h·ι_{VW}†∘(id⊗id_V⊗cap_h⊗id_W⊗id)∘(ι_V⊗ι_W).
    pub fn multiplicator(&self, w1: &[Letter], w2: &[Letter]) -> Result<Morphism> {
        let (a, b) = (self.word(w1)?, self.word(w2)?);
        let w12: Vec<Letter> = w1.iter().chain(w2).copied().collect();
        let ab = self.word(&w12)?;
        let h = self.h;
        let (da, db) = (a.iota.cod().factors()[1], b.iota.cod().factors()[1]);
        let mid = tensor_all(&[
            &Morphism::id(h),
            &Morphism::id(da),
            &dagger(&cup(h)),
            &Morphism::id(db),
            &Morphism::id(h),
        ])
        .reshape(Shape::of(&[h, da, h, h, db, h]), Shape::of(&[h, da * db, h]))?;
        let m = chain(&[&tensor(&a.iota, &b.iota).reshape(
            Shape::of(&[a.dim, b.dim]),
            Shape::of(&[h, da, h, h, db, h]),
        )?, &mid, &dagger(&ab.iota)])?;
        Ok(m.scale_re((h as f64).sqrt()))
    }

    /// (1/√h)·ι_∅†∘cup_h.
    pub fn unitor(&self) -> Result<Morphism> {
        let e = self.word(&[])?;
        let h = self.h;
        let cp = cup(h).reshape(Shape::unit(), e.iota.cod().clone())?;
        Ok(compose(&dagger(&e.iota), &cp)?.scale_re(1.0 / (h as f64).sqrt()))
    }

    pub fn build_graph(&self) -> Result<QuantumGraph> {
        let a = &self.base.monoid;
        let (one, two) = ([Letter::A], [Letter::A, Letter::A]);
        let mult = compose(&self.f_alpha_morphism(&a.mult, &two, &one)?, &self.multiplicator(&one, &one)?)?;
        let unit = compose(&self.f_alpha_morphism(&a.unit, &[], &one)?, &self.unitor()?)?;
        let gamma = self.f_alpha_morphism(&self.base.gamma, &one, &one)?;
        let monoid = crate::frobenius::FrobeniusMonoid::new(mult, unit)?;
        QuantumGraph::new(monoid, gamma)
    }

    /// Component √h·(id_H⊗ι_A†)∘(cup_h⊗id_A⊗id_H): A⊗H → H⊗F_α(A).
    pub fn sqrt_alpha(&self) -> Result<QuantumIso> {
        let target = self.build_graph()?;
        self.sqrt_alpha_onto(target)
    }

    fn sqrt_alpha_onto(&self, target: QuantumGraph) -> Result<QuantumIso> {
        let a = self.word(&[Letter::A])?;
        let (h, d) = (self.h, self.base.dim());
        let bend = tensor_all(&[&cup(h), &Morphism::id(d), &Morphism::id(h)]);
        let proj = tensor(&Morphism::id(h), &dagger(&a.iota).reshape(Shape::of(&[h, d, h]), Shape::of(&[a.dim]))?);
        let p = compose(&proj, &bend)?.scale_re((h as f64).sqrt());
        QuantumIso::new(self.base.clone(), target, h, p)
    }
}

/// Equation suite for a full split: idempotent, built graph, √α and the
/// splitting identity pair_of_pants(√α).β = β.
pub fn split_report(s: &SplitFunctor, tol: f64) -> Result<(QuantumGraph, QuantumIso, Report)> {
    let mut rep = Report::new(tol);
    let a = s.word(&[Letter::A])?;
    let p = &a.idempotent;
    rep.push("idempotent.hermitian", residual(&dagger(p), p)?);
    rep.push("idempotent.idempotent", residual(&compose(p, p)?, p)?);
    let tr = trace(p)?;
    rep.push("idempotent.trace", (tr - c(s.base.dim() as f64, 0.0)).norm());
    rep.push("iota.isometry", isometry_residual(&a.iota));
    rep.push("iota.range", residual(&compose(&a.iota, &dagger(&a.iota))?.flatten(), &p.flatten())?);
    rep.push("multiplicator.unitary", unitarity_residual(&s.multiplicator(&[Letter::A], &[Letter::A])?));
    rep.push("unitor.unitary", unitarity_residual(&s.unitor()?));
    let g = s.build_graph()?;
    rep.extend_prefixed("graph", &check_quantum_graph(&g, tol));
    let q = s.sqrt_alpha_onto(g.clone())?;
    rep.extend_prefixed("sqrt_alpha", &check_quantum_iso(&q, tol));
    let back = pair_of_pants(&q);
    rep.push("splitting_identity", residual(&back.beta, &s.endo.beta)?);
    Ok((g, q, rep))
}

/// Unitary F_α1(A) → F_α2(A) for standardizations related by the gauge
/// g⊗ḡ of H⊗H*: ι2†∘(ḡ⊗id⊗g)∘ι1.
pub fn gauge_intertwiner(s1: &SplitFunctor, s2: &SplitFunctor, g: &Morphism) -> Result<Morphism> {
    let (a1, a2) = (s1.word(&[Letter::A])?, s2.word(&[Letter::A])?);
    let d = s1.base.dim();
    let u = tensor_all(&[&conjugate(g), &Morphism::id(d), g]).flatten();
    chain(&[&a1.iota.flatten(), &u, &dagger(&a2.iota).flatten()])
}
