//! Quantum graphs: a special symmetric Frobenius monoid with an adjacency map.

use crate::error::{Error, Result};
use crate::frobenius::{
    check_special, check_symmetric, frob_cap, frob_cup, full_report, special_residual, symmetric_residual,
    transport, FrobeniusMonoid,
};
use crate::hilb::{c, chain, compose, dagger, residual, swap, tensor, tensor_all, Morphism, Shape};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGraph {
    pub monoid: FrobeniusMonoid,
    pub gamma: Morphism,
}

impl QuantumGraph {
    /// Pairs a monoid with an adjacency map without checking any axiom.
    pub fn new(monoid: FrobeniusMonoid, gamma: Morphism) -> Result<Self> {
        let d = monoid.dim;
        let gamma = gamma.reshape(Shape::of(&[d]), Shape::of(&[d]))?;
        Ok(QuantumGraph { monoid, gamma })
    }

    pub fn dim(&self) -> usize {
        self.monoid.dim
    }

    /// Conjugates monoid and adjacency by a unitary of the carrier.
    pub fn transport(&self, w: &Morphism) -> Result<QuantumGraph> {
        let monoid = transport(&self.monoid, w)?;
        let w = w.reshape(Shape::of(&[self.dim()]), Shape::of(&[self.dim()]))?;
        let gamma = chain(&[&dagger(&w), &self.gamma, &w])?;
        Ok(QuantumGraph { monoid, gamma })
    }

    pub fn approx_same(&self, other: &QuantumGraph, tol: f64) -> bool {
        self.dim() == other.dim()
            && residual(&self.monoid.mult, &other.monoid.mult).is_ok_and(|r| r <= tol)
            && residual(&self.monoid.unit, &other.monoid.unit).is_ok_and(|r| r <= tol)
            && residual(&self.gamma, &other.gamma).is_ok_and(|r| r <= tol)
    }
}

pub fn schur_residual(x: &QuantumGraph) -> f64 {
    let a = &x.monoid;
    let lhs = chain(&[&a.comult(), &tensor(&x.gamma, &x.gamma), &a.mult]).unwrap();
    residual(&lhs, &x.gamma).unwrap()
}

/// (frob_cap⊗id)∘(id⊗Γ⊗id)∘(id⊗frob_cup) compared with Γ.
pub fn transpose_invariance_residual(x: &QuantumGraph) -> f64 {
    let a = &x.monoid;
    let id = a.id();
    let lhs = chain(&[
        &tensor(&id, &frob_cup(a)),
        &tensor_all(&[&id, &x.gamma, &id]),
        &tensor(&frob_cap(a), &id),
    ])
    .unwrap();
    residual(&lhs, &x.gamma).unwrap()
}

pub fn check_quantum_graph(x: &QuantumGraph, tol: f64) -> Report {
    let mut rep = full_report(&x.monoid, tol);
    rep.push("gamma_self_adjoint", residual(&dagger(&x.gamma), &x.gamma).unwrap());
    rep.push("schur_idempotent", schur_residual(x));
    rep.push("transpose_invariant", transpose_invariance_residual(x));
    rep
}

pub fn from_classical_graph(adj: &[Vec<i64>]) -> Result<QuantumGraph> {
    let n = adj.len();
    for (i, row) in adj.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Invalid(format!("adjacency row {i} has length {}", row.len())));
        }
        for (j, &v) in row.iter().enumerate() {
            if v != 0 && v != 1 {
                return Err(Error::NonBoolean { i, j, value: v });
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            if adj[i][j] != adj[j][i] {
                return Err(Error::NonSymmetric { i, j });
            }
        }
    }
    let gamma = Morphism::from_fn(Shape::of(&[n]), Shape::of(&[n]), |i, j| c(adj[i][j] as f64, 0.0));
    Ok(QuantumGraph { monoid: crate::frobenius::classical_monoid(n), gamma })
}

pub fn identity_graph(a: &FrobeniusMonoid) -> Result<QuantumGraph> {
    let tol = crate::hilb::DEFAULT_TOL;
    if !check_special(a, tol) {
        return Err(Error::AxiomFailure { what: "special".into(), residual: special_residual(a) });
    }
    if !check_symmetric(a, tol) {
        return Err(Error::AxiomFailure { what: "symmetric".into(), residual: symmetric_residual(a) });
    }
    Ok(QuantumGraph { monoid: a.clone(), gamma: a.id() })
}

pub fn is_classical(x: &QuantumGraph) -> bool {
    let d = x.dim();
    let m = &x.monoid.mult;
    residual(&compose(m, &swap(d, d)).unwrap(), m).is_ok_and(|r| r <= crate::hilb::DEFAULT_TOL)
}

/// Common small graphs used in demos and tests.
pub mod named {
    pub fn complete(n: usize) -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| i64::from(i != j)).collect()).collect()
    }

    pub fn path(n: usize) -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| i64::from(i.abs_diff(j) == 1)).collect()).collect()
    }

    pub fn cycle(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| i64::from((i + 1) % n == j || (j + 1) % n == i)).collect())
            .collect()
    }

    pub fn without_edge(mut adj: Vec<Vec<i64>>, i: usize, j: usize) -> Vec<Vec<i64>> {
        adj[i][j] = 0;
        adj[j][i] = 0;
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{classical_monoid, endo_monoid, FrobeniusMonoid};
    use crate::random::{random_unitary, rng};

    #[test]
    fn classical_examples() {
        let k3 = from_classical_graph(&named::complete(3)).unwrap();
        assert!(check_quantum_graph(&k3, 1e-12).all_pass());
        assert!(is_classical(&k3));
        let empty = from_classical_graph(&vec![vec![0; 3]; 3]).unwrap();
        assert!(check_quantum_graph(&empty, 1e-12).all_pass());
        assert!(matches!(from_classical_graph(&[vec![0, 1], vec![0, 0]]), Err(Error::NonSymmetric { .. })));
        assert!(matches!(from_classical_graph(&[vec![0, 2], vec![2, 0]]), Err(Error::NonBoolean { .. })));
    }

    #[test]
    fn doubled_complete_graph_fails_schur() {
        let a = classical_monoid(2);
        let j = Morphism::from_fn(Shape::of(&[2]), Shape::of(&[2]), |_, _| c(2.0, 0.0));
        let x = QuantumGraph::new(a, j).unwrap();
        let rep = check_quantum_graph(&x, 1e-9);
        assert!(!rep.get("schur_idempotent").unwrap().pass);
        assert!(rep.get("gamma_self_adjoint").unwrap().pass);
    }

    #[test]
    fn identity_graphs() {
        let x = identity_graph(&endo_monoid(2)).unwrap();
        assert!(check_quantum_graph(&x, 1e-12).all_pass());
        assert!(!is_classical(&x));
        assert!(check_quantum_graph(&identity_graph(&classical_monoid(4)).unwrap(), 1e-12).all_pass());
        assert!(is_classical(&identity_graph(&classical_monoid(1)).unwrap()));
        // convolution algebra of Z2 is not special
        let mult = Morphism::from_fn(Shape::of(&[2, 2]), Shape::of(&[2]), |r, col| {
            c(f64::from(u8::from((col / 2 + col % 2) % 2 == r)), 0.0)
        });
        let g = FrobeniusMonoid::new(mult, Morphism::ket(2, 0)).unwrap();
        assert!(identity_graph(&g).is_err());
    }

    #[test]
    fn brute_force_classical_adjacency() {
        // pass ⟺ symmetric 0/1, over all 0/1 matrices for n ≤ 3
        for n in 1..=3usize {
            for bits in 0u32..(1 << (n * n)) {
                let adj: Vec<Vec<i64>> =
                    (0..n).map(|i| (0..n).map(|j| i64::from(bits >> (i * n + j) & 1 == 1)).collect()).collect();
                let gamma = Morphism::from_fn(Shape::of(&[n]), Shape::of(&[n]), |i, j| c(adj[i][j] as f64, 0.0));
                let x = QuantumGraph::new(classical_monoid(n), gamma).unwrap();
                let symmetric = (0..n).all(|i| (0..n).all(|j| adj[i][j] == adj[j][i]));
                assert_eq!(check_quantum_graph(&x, 1e-9).all_pass(), symmetric, "{adj:?}");
            }
        }
    }

    #[test]
    fn complete_with_loops_passes() {
        for n in 1..=4 {
            let a = classical_monoid(n);
            let gamma = compose(&a.unit, &a.counit()).unwrap();
            let x = QuantumGraph::new(a, gamma).unwrap();
            assert!(check_quantum_graph(&x, 1e-12).all_pass());
        }
    }

    #[test]
    fn transport_preserves_pass_set() {
        let mut r = rng(2);
        let k3 = from_classical_graph(&named::path(3)).unwrap();
        let w = random_unitary(&mut r, 3);
        let t = k3.transport(&w).unwrap();
        assert_eq!(check_quantum_graph(&k3, 1e-9).pass_set(), check_quantum_graph(&t, 1e-9).pass_set());
        let bad = QuantumGraph::new(classical_monoid(3), Morphism::id(3).scale_re(2.0)).unwrap();
        let tb = bad.transport(&w).unwrap();
        assert_eq!(check_quantum_graph(&bad, 1e-9).pass_set(), check_quantum_graph(&tb, 1e-9).pass_set());
    }
}
