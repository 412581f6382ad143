//! Small dense linear-algebra helpers over nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::algebra::Complex;

pub type CMatrix = DMatrix<Complex>;
pub type CVector = DVector<Complex>;

/// Hermitian eigendecomposition with eigenvalues ascending. Ties keep the
/// solver's column order, so results are deterministic for identical input.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let mut vectors = CMatrix::zeros(n, order.len());
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn matrix_commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Minimum-norm least-squares solution of `a x = b` via SVD, with singular
/// values below `rcond * σ_max` treated as zero.
pub fn lstsq_min_norm(a: &CMatrix, b: &CVector, rcond: f64) -> CVector {
    if a.ncols() == 0 {
        return CVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = rcond * smax.max(f64::MIN_POSITIVE);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let mut x = CVector::zeros(a.ncols());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            let coeff = u.column(k).dotc(b) / Complex::new(s, 0.0);
            // row k of V^† is the conjugate of the k-th right singular vector
            for j in 0..a.ncols() {
                x[j] += vt[(k, j)].conj() * coeff;
            }
        }
    }
    x
}

/// Orthonormal basis of the null space of a real matrix, as columns.
/// Singular values `< tol` count as zero.
pub fn real_null_space(a: &DMatrix<f64>, tol: f64) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.ncols();
    // work with the square Gram-free form so that V is complete
    let square = if a.nrows() >= n {
        a.clone()
    } else {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        padded
    };
    let svd = square.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let idx: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] < tol).collect();
    let mut basis = DMatrix::zeros(n, idx.len());
    for (c, &k) in idx.iter().enumerate() {
        for j in 0..n {
            basis[(j, c)] = vt[(k, j)];
        }
    }
    (sv, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_of_pauli_y() {
        let y = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(0.0, 0.0),
                Complex::new(0.0, -1.0),
                Complex::new(0.0, 1.0),
                Complex::new(0.0, 0.0),
            ],
        );
        let (vals, vecs) = eigh(&y);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let recon = &vecs * CMatrix::from_diagonal(&CVector::from_iterator(
            2,
            vals.iter().map(|&v| Complex::new(v, 0.0)),
        )) * vecs.adjoint();
        assert!(max_abs_diff(&recon, &y) < 1e-14);
    }

    #[test]
    fn min_norm_solution_ignores_kernel() {
        // a = diag(2, 0): min-norm solution of a x = (4, 0) is (2, 0)
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex::new(2.0, 0.0),
            Complex::new(0.0, 0.0),
        ]));
        let b = CVector::from_vec(vec![Complex::new(4.0, 0.0), Complex::new(0.0, 0.0)]);
        let x = lstsq_min_norm(&a, &b, 1e-12);
        assert!((x[0] - Complex::new(2.0, 0.0)).norm() < 1e-14);
        assert!(x[1].norm() < 1e-14);
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 2.0, 2.0, 0.0]);
        let (_, basis) = real_null_space(&a, 1e-10);
        assert_eq!(basis.ncols(), 2);
        assert!((&a * &basis).abs().max() < 1e-12);
    }
}
