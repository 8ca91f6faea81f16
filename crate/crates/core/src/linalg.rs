//! Spectral helpers on top of nalgebra: sorted Hermitian eigensystems and SVD-based rank.

use crate::hilb::{c, Mat};
use nalgebra::DVector;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &Mat) -> (Vec<f64>, Mat) {
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = Mat::from_fn(h.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let sv: DVector<f64> = m.clone().svd(false, false).singular_values;
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Threshold relative to max(1, σ_max).
pub fn rank_threshold(svals: &[f64], rel: f64) -> f64 {
    rel * svals.first().copied().unwrap_or(0.0).max(1.0)
}

pub fn rank(m: &Mat, rel: f64) -> usize {
    let s = singular_values(m);
    let t = rank_threshold(&s, rel);
    s.iter().filter(|&&x| x > t).count()
}

/// Orthonormal basis (columns) of the null space of `m`.
pub fn null_space(m: &Mat, rel: f64) -> Mat {
    let cols = m.ncols();
    // Pad to a tall matrix so the thin SVD returns the full right factor.
    let tall = if m.nrows() < cols {
        let mut t = Mat::zeros(cols, cols);
        t.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        t
    } else {
        m.clone()
    };
    let svd = tall.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let t = rel * smax.max(1.0);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= t).collect();
    Mat::from_fn(cols, keep.len(), |r, k| v_t[(keep[k], r)].conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_matrix, rng};

    #[test]
    fn eigen_reconstructs() {
        let mut r = rng(1);
        let h = random_hermitian(&mut r, 6);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = Mat::from_fn(6, 6, |i, j| if i == j { c(vals[i], 0.0) } else { c(0.0, 0.0) });
        let back = &vecs * d * vecs.adjoint();
        assert!((back - h).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_deficient() {
        let mut r = rng(2);
        let a = random_matrix(&mut r, 3, 2);
        let b = random_matrix(&mut r, 2, 5);
        let m = a * b;
        assert_eq!(rank(&m, 1e-8), 2);
        let n = null_space(&m, 1e-8);
        assert_eq!(n.ncols(), 3);
        assert!((&m * &n).norm() < 1e-10);
        assert!((n.adjoint() * &n - Mat::identity(3, 3)).norm() < 1e-10);
    }
}
