//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Matrix = DMatrix<f64>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalized(a: &[f64]) -> Vec<f64> {
    let r = norm(a);
    a.iter().map(|x| x / r).collect()
}

/// Max-entry defect of `g^T g - I`.
pub fn orthogonality_defect(g: &Matrix) -> f64 {
    if g.nrows() != g.ncols() {
        return f64::INFINITY;
    }
    let n = g.nrows();
    let gtg = g.transpose() * g;
    (gtg - Matrix::identity(n, n)).abs().max()
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample by Box-Muller.
pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Haar-distributed orthogonal matrix from the QR factorization of a
/// Gaussian matrix, with the sign of `R`'s diagonal absorbed into `Q`.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let a = Matrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Orthonormal basis of the hyperplane `e^perp` in `R^{n+1}`, `e` the
/// all-ones vector. Row `j` (0-based) is
/// `(e_1 + ... + e_{j+1} - (j+1) e_{j+2}) / sqrt((j+1)(j+2))`.
pub fn helmert_basis(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| {
            let k = (j + 1) as f64;
            let s = (k * (k + 1.0)).sqrt();
            let mut row = vec![0.0; n + 1];
            for x in row.iter_mut().take(j + 1) {
                *x = 1.0 / s;
            }
            row[j + 1] = -k / s;
            row
        })
        .collect()
}

/// Coordinates of `v` in the orthonormal system `basis`.
pub fn project(basis: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    basis.iter().map(|b| dot(b, v)).collect()
}

/// Solve `a x = b`, falling back to a truncated-SVD least-squares solution
/// when the LU factorization is singular.
pub fn solve(a: &Matrix, b: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(x) = a.clone().lu().solve(b) {
        if x.iter().all(|v| v.is_finite()) {
            return Some(x);
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(b, smax * 1e-12).ok()
}

pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
