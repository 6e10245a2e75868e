use crate::tensor_core::CubicForm;
use crate::{Error, Result};

/// Largest dimension for which rank-4 tensors are materialized.
pub const RANK4_MAX_DIM: usize = 40;

/// Dense rank-4 array indexed `[i][j][k][l]`.
#[derive(Clone, Debug)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    fn zeros(n: usize) -> Self {
        Tensor4 { n, data: vec![0.0; n * n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.at(i, j, k, l)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Tensor4) -> f64 {
        self.data.iter().zip(&other.data).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()))
    }

    /// `sum_p T_{p i j p}`.
    pub fn ricci(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|p| self.get(p, i, j, p)).sum()).collect()).collect()
    }

    /// Build from a closure over indices.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor4::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let idx = t.at(i, j, k, l);
                        t.data[idx] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > RANK4_MAX_DIM {
        return Err(Error::TooLarge(format!("rank-4 tensors limited to dim {RANK4_MAX_DIM}, got {n}")));
    }
    Ok(())
}

/// `ass_ijkl = P_li^p P_jkp - P_lj^p P_ikp`.
pub fn ass_tensor(p: &CubicForm) -> Result<Tensor4> {
    let n = p.dim();
    check_size(n)?;
    let r = p.dense_tensor().unfold();
    // a[(l,i),(j,k)] = sum_p P_lip P_jkp
    let a = &r * r.transpose();
    Ok(Tensor4::from_fn(n, |i, j, k, l| a[(l * n + i, j * n + k)] - a[(l * n + j, i * n + k)]))
}

/// Totally trace-free part of [`ass_tensor`]:
///
/// `cass = ass + (2/(n-2)) (h_k[i Ric_j]l - h_l[i Ric_j]k) - (2/((n-1)(n-2))) scal h_k[i h_j]l`
/// with `Ric_ij = ass_pij^p` and brackets denoting antisymmetrization in `i, j`.
pub fn cass_tensor(p: &CubicForm) -> Result<Tensor4> {
    let n = p.dim();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("conformal nonassociativity needs dim >= 3, got {n}")));
    }
    let ass = ass_tensor(p)?;
    let ric = ass.ricci();
    let scal: f64 = (0..n).map(|i| ric[i][i]).sum();
    let nf = n as f64;
    let c1 = 2.0 / (nf - 2.0);
    let c2 = 2.0 * scal / ((nf - 1.0) * (nf - 2.0));
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(Tensor4::from_fn(n, |i, j, k, l| {
        let t1 = 0.5 * (d(k, i) * ric[j][l] - d(k, j) * ric[i][l]);
        let t2 = 0.5 * (d(l, i) * ric[j][k] - d(l, j) * ric[i][k]);
        let t3 = 0.5 * (d(k, i) * d(j, l) - d(k, j) * d(i, l));
        ass.get(i, j, k, l) + c1 * (t1 - t2) - c2 * t3
    }))
}

/// `||cass(P)|| / kappa`, with kappa the mean Gram diagonal.
pub fn cass_norm(p: &CubicForm) -> Result<f64> {
    let kappa = p.kappa();
    if !(kappa > 0.0) {
        return Err(Error::InvalidArgument("cass norm needs a nonzero form".into()));
    }
    Ok(cass_tensor(p)?.frobenius_norm() / kappa)
}
