//! Seeded sampling of test data: complex Gaussian morphisms and Haar-ish unitaries.

use crate::hilb::{c, Mat, Morphism, Shape, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for item `index` of a seeded batch.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

pub fn gaussian(r: &mut Rng) -> C64 {
    let a: f64 = StandardNormal.sample(r);
    let b: f64 = StandardNormal.sample(r);
    c(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix(r: &mut Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| gaussian(r))
}

pub fn random_morphism(r: &mut Rng, dom: &[usize], cod: &[usize]) -> Morphism {
    let (dom, cod) = (Shape::of(dom), Shape::of(cod));
    let m = random_matrix(r, cod.total(), dom.total());
    Morphism::new(dom, cod, m).expect("finite gaussian")
}

/// Unitary from the QR factorization of a Gaussian matrix, with phases fixed.
pub fn random_unitary(r: &mut Rng, n: usize) -> Morphism {
    let g = random_matrix(r, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    Morphism::new(Shape::of(&[n]), Shape::of(&[n]), q).expect("finite unitary")
}

/// Random Hermitian matrix.
pub fn random_hermitian(r: &mut Rng, n: usize) -> Mat {
    let g = random_matrix(r, n, n);
    (&g + g.adjoint()) * c(0.5, 0.0)
}
