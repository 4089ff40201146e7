//! Dense symmetric/Hermitian eigenvalue helpers and minimal-norm least squares.
//!
//! Hermitian eigenvalues go through the real embedding [[A, -B], [B, A]] of
//! G = A + iB, which is symmetric and carries every eigenvalue of G twice.
//! This keeps all spectra on nalgebra's real symmetric path and needs no
//! complex eigenvector support.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(g: &DMatrix<C64>) -> Vec<f64> {
    let n = g.nrows();
    assert_eq!(n, g.ncols(), "matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            // Hermitian symmetrization: work with (G + G^H)/2.
            let z = 0.5 * (g[(i, j)] + g[(j, i)].conj());
            big[(i, j)] = z.re;
            big[(n + i, n + j)] = z.re;
            big[(i, n + j)] = -z.im;
            big[(n + i, j)] = z.im;
        }
    }
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev.into_iter().step_by(2).collect()
}

pub fn hermitian_extremes(g: &DMatrix<C64>) -> (f64, f64) {
    let ev = hermitian_eigenvalues(g);
    (ev[0], ev[ev.len() - 1])
}

/// Eigen decomposition of a real symmetric matrix; eigenvalues ascending,
/// eigenvector i in column i.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let sym = 0.5 * (a + a.transpose());
    let se = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    (values, vectors)
}

pub struct Lsq {
    pub solution: DVector<C64>,
    pub rank: usize,
    pub rank_deficient: bool,
    /// Euclidean norm of A x - b.
    pub residual: f64,
}

/// Minimal-norm least-squares solution of A x = b via SVD.
///
/// Singular values at or below `rel_tol * sigma_max` are treated as zero;
/// the solution restricted to the surviving singular directions is the
/// minimum-norm minimizer.
pub fn lstsq_min_norm(a: &DMatrix<C64>, b: &DVector<C64>, rel_tol: f64) -> Lsq {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0f64, f64::max);
    let cut = rel_tol * smax;
    let mut rank = 0usize;
    let mut y = DVector::<C64>::zeros(sigma.len());
    for i in 0..sigma.len() {
        if sigma[i] > cut {
            let proj: C64 = u.column(i).dotc(b);
            y[i] = proj / C64::new(sigma[i], 0.0);
            rank += 1;
        }
    }
    let solution = vt.adjoint() * y;
    let residual = (a * &solution - b).norm();
    Lsq {
        solution,
        rank,
        rank_deficient: rank < a.ncols().min(a.nrows()),
        residual,
    }
}
