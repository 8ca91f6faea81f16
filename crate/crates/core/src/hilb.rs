//! Dense pivotal dagger calculus of finite-dimensional Hilbert spaces.
//!
//! A [`Morphism`] is a complex matrix together with the factor shapes of its
//! domain and codomain. Indices are row-major with the leftmost tensor factor
//! most significant, so `tensor` is the Kronecker product. The dual of a space
//! is identified with the space itself through the computational basis.

use crate::error::{shape_err, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;

pub const DEFAULT_TOL: f64 = 1e-9;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::Invalid(format!("zero-dimensional factor in {factors:?}")));
        }
        Ok(Shape(factors))
    }

    pub fn unit() -> Self {
        Shape(Vec::new())
    }

    pub fn of(factors: &[usize]) -> Self {
        assert!(factors.iter().all(|&f| f > 0), "zero factor in shape");
        Shape(factors.to_vec())
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn concat(&self, other: &Shape) -> Shape {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Shape(v)
    }

    /// Collapses all factors into one (the unit shape stays empty).
    pub fn flat(&self) -> Shape {
        if self.0.is_empty() {
            Shape::unit()
        } else {
            Shape(vec![self.total()])
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl From<&[usize]> for Shape {
    fn from(v: &[usize]) -> Self {
        Shape::of(v)
    }
}

/// A wire of a morphism viewed as a tensor: the i-th domain or codomain factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    Dom(usize),
    Cod(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    dom: Shape,
    cod: Shape,
    mat: Mat,
}

impl Morphism {
    pub fn new(dom: Shape, cod: Shape, mat: Mat) -> Result<Self> {
        if mat.nrows() != cod.total() || mat.ncols() != dom.total() {
            return Err(shape_err(
                "matrix size",
                format!("{}x{}", mat.nrows(), mat.ncols()),
                format!("{cod} <- {dom}"),
            ));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("non-finite entry".into()));
        }
        Ok(Morphism { dom, cod, mat })
    }

    pub(crate) fn raw(dom: Shape, cod: Shape, mat: Mat) -> Self {
        debug_assert_eq!(mat.nrows(), cod.total());
        debug_assert_eq!(mat.ncols(), dom.total());
        Morphism { dom, cod, mat }
    }

    /// Builds from row-major entries.
    pub fn from_entries(dom: Shape, cod: Shape, entries: &[C64]) -> Result<Self> {
        let (r, cl) = (cod.total(), dom.total());
        if entries.len() != r * cl {
            return Err(shape_err(
                "entry count",
                entries.len(),
                format!("{r}x{cl}"),
            ));
        }
        Morphism::new(dom, cod, Mat::from_row_slice(r, cl, entries))
    }

    pub fn from_real(dom: &[usize], cod: &[usize], rows: &[&[f64]]) -> Self {
        let entries: Vec<C64> = rows.iter().flat_map(|r| r.iter().map(|&x| c(x, 0.0))).collect();
        Morphism::from_entries(Shape::of(dom), Shape::of(cod), &entries).expect("literal morphism")
    }

    pub fn from_fn(dom: Shape, cod: Shape, f: impl FnMut(usize, usize) -> C64) -> Self {
        let mat = Mat::from_fn(cod.total(), dom.total(), f);
        Morphism { dom, cod, mat }
    }

    pub fn scalar(z: C64) -> Self {
        Morphism::raw(Shape::unit(), Shape::unit(), Mat::from_element(1, 1, z))
    }

    pub fn zero(dom: Shape, cod: Shape) -> Self {
        let mat = Mat::zeros(cod.total(), dom.total());
        Morphism { dom, cod, mat }
    }

    pub fn identity(shape: Shape) -> Self {
        let n = shape.total();
        Morphism { dom: shape.clone(), cod: shape, mat: Mat::identity(n, n) }
    }

    pub fn id(n: usize) -> Self {
        Morphism::identity(Shape::of(&[n]))
    }

    /// Basis ket |i⟩ of an n-dimensional space, as a morphism from the unit.
    pub fn ket(n: usize, i: usize) -> Self {
        Morphism::from_fn(Shape::unit(), Shape::of(&[n]), |r, _| if r == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    /// A column vector (morphism from the unit) with the given entries.
    pub fn vector(cod: Shape, entries: &[C64]) -> Result<Self> {
        Morphism::from_entries(Shape::unit(), cod, entries)
    }

    pub fn dom(&self) -> &Shape {
        &self.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.cod
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn into_matrix(self) -> Mat {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.mat.len());
        for r in 0..self.mat.nrows() {
            for cl in 0..self.mat.ncols() {
                out.push(self.mat[(r, cl)]);
            }
        }
        out
    }

    /// Reinterprets the factor shapes; totals must agree.
    pub fn reshape(&self, dom: Shape, cod: Shape) -> Result<Self> {
        if dom.total() != self.dom.total() || cod.total() != self.cod.total() {
            return Err(shape_err(
                "reshape",
                format!("{} <- {}", self.cod, self.dom),
                format!("{cod} <- {dom}"),
            ));
        }
        Ok(Morphism { dom, cod, mat: self.mat.clone() })
    }

    pub fn flatten(&self) -> Self {
        Morphism { dom: self.dom.flat(), cod: self.cod.flat(), mat: self.mat.clone() }
    }

    pub fn scale(&self, z: C64) -> Self {
        Morphism { dom: self.dom.clone(), cod: self.cod.clone(), mat: &self.mat * z }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(c(x, 0.0))
    }

    pub fn add(&self, other: &Morphism) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(Morphism { dom: self.dom.clone(), cod: self.cod.clone(), mat: &self.mat + &other.mat })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(Morphism { dom: self.dom.clone(), cod: self.cod.clone(), mat: &self.mat - &other.mat })
    }

    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn is_square(&self) -> bool {
        self.dom == self.cod
    }

    fn same_shape(&self, other: &Morphism, context: &str) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(shape_err(
                context,
                format!("{} <- {}", self.cod, self.dom),
                format!("{} <- {}", other.cod, other.dom),
            ));
        }
        Ok(())
    }

    /// The value of a morphism from the unit to the unit.
    pub fn as_scalar(&self) -> Option<C64> {
        (self.mat.nrows() == 1 && self.mat.ncols() == 1).then(|| self.mat[(0, 0)])
    }

    /// Views the morphism as a tensor and reorders its wires. Every leg must
    /// appear exactly once in `cod` or `dom`; bending a wire between domain and
    /// codomain is the cup/cap transposition of the computational basis.
    pub fn rearrange(&self, cod: &[Leg], dom: &[Leg]) -> Result<Self> {
        let n_legs = self.cod.len() + self.dom.len();
        let mut seen = vec![false; n_legs];
        for leg in cod.iter().chain(dom) {
            let k = match *leg {
                Leg::Cod(i) if i < self.cod.len() => i,
                Leg::Dom(i) if i < self.dom.len() => self.cod.len() + i,
                _ => return Err(Error::Invalid(format!("leg {leg:?} out of range"))),
            };
            if seen[k] {
                return Err(Error::Invalid(format!("leg {leg:?} used twice")));
            }
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("rearrange drops a leg".into()));
        }
        let cod_strides = strides(self.cod.factors());
        let dom_strides = strides(self.dom.factors());
        let describe = |leg: &Leg| -> (usize, bool, usize) {
            match *leg {
                Leg::Cod(i) => (self.cod.factors()[i], true, cod_strides[i]),
                Leg::Dom(i) => (self.dom.factors()[i], false, dom_strides[i]),
            }
        };
        let new_cod: Vec<_> = cod.iter().map(describe).collect();
        let new_dom: Vec<_> = dom.iter().map(describe).collect();
        let row_offsets = offsets(&new_cod);
        let col_offsets = offsets(&new_dom);
        let cod_shape = Shape(new_cod.iter().map(|l| l.0).collect());
        let dom_shape = Shape(new_dom.iter().map(|l| l.0).collect());
        let mat = Mat::from_fn(row_offsets.len(), col_offsets.len(), |r, cl| {
            let (a, b) = row_offsets[r];
            let (x, y) = col_offsets[cl];
            self.mat[(a + x, b + y)]
        });
        Ok(Morphism { dom: dom_shape, cod: cod_shape, mat })
    }
}

fn strides(factors: &[usize]) -> Vec<usize> {
    let mut s = vec![1; factors.len()];
    for i in (0..factors.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * factors[i + 1];
    }
    s
}

/// For each multi-index over `legs` (row-major), the (old row, old col) offset.
fn offsets(legs: &[(usize, bool, usize)]) -> Vec<(usize, usize)> {
    let mut out = vec![(0usize, 0usize)];
    for &(dim, is_row, stride) in legs {
        let mut next = Vec::with_capacity(out.len() * dim);
        for &(r, cl) in &out {
            for k in 0..dim {
                if is_row {
                    next.push((r + k * stride, cl));
                } else {
                    next.push((r, cl + k * stride));
                }
            }
        }
        out = next;
    }
    out
}

pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if f.cod != g.dom {
        return Err(shape_err("compose", format!("f.cod {}", f.cod), format!("g.dom {}", g.dom)));
    }
    Ok(Morphism { dom: f.dom.clone(), cod: g.cod.clone(), mat: &g.mat * &f.mat })
}

/// Composes a chain listed in application order: `chain(&[f, g, h]) = h∘g∘f`.
pub fn chain(steps: &[&Morphism]) -> Result<Morphism> {
    let (first, rest) = steps.split_first().ok_or_else(|| Error::Invalid("empty chain".into()))?;
    let mut acc = (*first).clone();
    for s in rest {
        acc = compose(s, &acc)?;
    }
    Ok(acc)
}

pub fn tensor(f: &Morphism, g: &Morphism) -> Morphism {
    Morphism {
        dom: f.dom.concat(&g.dom),
        cod: f.cod.concat(&g.cod),
        mat: f.mat.kronecker(&g.mat),
    }
}

/// Tensor product of a list, left to right.
pub fn tensor_all(fs: &[&Morphism]) -> Morphism {
    let mut acc = Morphism::scalar(c(1.0, 0.0));
    for f in fs {
        acc = tensor(&acc, f);
    }
    acc
}

pub fn dagger(f: &Morphism) -> Morphism {
    Morphism { dom: f.cod.clone(), cod: f.dom.clone(), mat: f.mat.adjoint() }
}

/// Entrywise matrix transpose, domain and codomain exchanged.
pub fn transpose(f: &Morphism) -> Morphism {
    Morphism { dom: f.cod.clone(), cod: f.dom.clone(), mat: f.mat.transpose() }
}

pub fn conjugate(f: &Morphism) -> Morphism {
    Morphism { dom: f.dom.clone(), cod: f.cod.clone(), mat: f.mat.map(|z| z.conj()) }
}

pub fn swap(m: usize, n: usize) -> Morphism {
    permutation(&[m, n], &[1, 0])
}

/// Wire permutation: codomain factor k is domain factor `perm[k]`.
pub fn permutation(factors: &[usize], perm: &[usize]) -> Morphism {
    let id = Morphism::identity(Shape::of(factors));
    let cod: Vec<Leg> = perm.iter().map(|&p| Leg::Cod(p)).collect();
    let dom: Vec<Leg> = (0..factors.len()).map(Leg::Dom).collect();
    id.rearrange(&cod, &dom).expect("valid permutation")
}

pub fn cup(n: usize) -> Morphism {
    Morphism::from_fn(Shape::unit(), Shape::of(&[n, n]), |r, _| {
        if r / n == r % n {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn cap(n: usize) -> Morphism {
    dagger(&cup(n))
}

pub fn trace(f: &Morphism) -> Result<C64> {
    if f.dom.total() != f.cod.total() || f.dom != f.cod {
        return Err(shape_err("trace", &f.dom, &f.cod));
    }
    Ok(f.mat.trace())
}

/// Traces out each (domain slot, codomain slot) pair, keeping the remaining
/// wires in their original order.
pub fn partial_trace(f: &Morphism, paired: &[(usize, usize)]) -> Result<Morphism> {
    let mut dom_used = vec![false; f.dom.len()];
    let mut cod_used = vec![false; f.cod.len()];
    for &(d, k) in paired {
        if d >= f.dom.len() || k >= f.cod.len() || dom_used[d] || cod_used[k] {
            return Err(Error::Invalid(format!("bad trace pairing ({d}, {k})")));
        }
        if f.dom.factors()[d] != f.cod.factors()[k] {
            return Err(shape_err(
                "partial_trace slot",
                format!("dom[{d}]={}", f.dom.factors()[d]),
                format!("cod[{k}]={}", f.cod.factors()[k]),
            ));
        }
        dom_used[d] = true;
        cod_used[k] = true;
    }
    let cs = strides(f.cod.factors());
    let ds = strides(f.dom.factors());
    let rem_cod: Vec<_> = (0..f.cod.len())
        .filter(|&i| !cod_used[i])
        .map(|i| (f.cod.factors()[i], true, cs[i]))
        .collect();
    let rem_dom: Vec<_> = (0..f.dom.len())
        .filter(|&i| !dom_used[i])
        .map(|i| (f.dom.factors()[i], false, ds[i]))
        .collect();
    let traced: Vec<(usize, usize, usize)> =
        paired.iter().map(|&(d, k)| (f.dom.factors()[d], cs[k], ds[d])).collect();
    let mut trace_offsets = vec![(0usize, 0usize)];
    for &(dim, rs, cst) in &traced {
        let mut next = Vec::with_capacity(trace_offsets.len() * dim);
        for &(r, cl) in &trace_offsets {
            for k in 0..dim {
                next.push((r + k * rs, cl + k * cst));
            }
        }
        trace_offsets = next;
    }
    let rows = offsets(&rem_cod);
    let cols = offsets(&rem_dom);
    let mat = Mat::from_fn(rows.len(), cols.len(), |r, cl| {
        let (r0, _) = rows[r];
        let (_, c0) = cols[cl];
        trace_offsets.iter().map(|&(a, b)| f.mat[(r0 + a, c0 + b)]).sum()
    });
    let cod = Shape(rem_cod.iter().map(|l| l.0).collect());
    let dom = Shape(rem_dom.iter().map(|l| l.0).collect());
    Ok(Morphism { dom, cod, mat })
}

/// ‖lhs − rhs‖_F / max(1, ‖lhs‖_F).
pub fn residual(lhs: &Morphism, rhs: &Morphism) -> Result<f64> {
    if lhs.dom.total() != rhs.dom.total() || lhs.cod.total() != rhs.cod.total() {
        return Err(shape_err(
            "residual",
            format!("{} <- {}", lhs.cod, lhs.dom),
            format!("{} <- {}", rhs.cod, rhs.dom),
        ));
    }
    Ok((&lhs.mat - &rhs.mat).norm() / lhs.mat.norm().max(1.0))
}

pub fn approx_eq(f: &Morphism, g: &Morphism, tol: f64) -> Result<bool> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(shape_err(
            "approx_eq",
            format!("{} <- {}", f.cod, f.dom),
            format!("{} <- {}", g.cod, g.dom),
        ));
    }
    Ok(residual(f, g)? <= tol)
}

/// max(‖f†f − id‖, ‖ff† − id‖), relative.
pub fn unitarity_residual(f: &Morphism) -> f64 {
    if f.dom.total() != f.cod.total() {
        return f64::INFINITY;
    }
    let n = f.dom.total();
    let id = Mat::identity(n, n);
    let a = (f.mat.adjoint() * &f.mat - &id).norm();
    let b = (&f.mat * f.mat.adjoint() - &id).norm();
    a.max(b) / (n as f64).sqrt().max(1.0)
}

/// ‖f†f − id‖ relative to the domain size.
pub fn isometry_residual(f: &Morphism) -> f64 {
    let n = f.dom.total();
    (f.mat.adjoint() * &f.mat - Mat::identity(n, n)).norm() / (n as f64).sqrt().max(1.0)
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} <- {}", self.cod, self.dom)?;
        for r in 0..self.mat.nrows() {
            for cl in 0..self.mat.ncols() {
                let z = self.mat[(r, cl)];
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
