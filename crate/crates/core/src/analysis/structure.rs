use crate::linalg::{self, dot, Matrix};
use crate::tensor_core::CubicForm;
use crate::{Error, Result};

use super::critical::CriticalLine;

pub const DEFAULT_WITNESS_TOL: f64 = 1e-7;

/// Orthogonality slack for witness pairs.
const ORTH_TOL: f64 = 1e-7;

/// Operator scale `sqrt(tr T / n)`, used to make tolerances relative.
fn hess_scale(p: &CubicForm) -> f64 {
    p.kappa().max(0.0).sqrt().max(1.0)
}

/// Whether the reflection through `r^perp` is an automorphism, tested as
/// `P(r) = 0` and `Hess P(r)` vanishing on `r^perp`.
pub fn reflection_automorphism(p: &CubicForm, r: &[f64], tol: f64) -> Result<bool> {
    if r.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: r.len() });
    }
    let len = linalg::norm(r);
    if !(len > 0.0) {
        return Err(Error::InvalidArgument("reflection vector must be nonzero".into()));
    }
    let u = linalg::normalized(r);
    let n = p.dim();
    let scale = hess_scale(p);
    if p.eval_unchecked(&u).abs() > tol * scale {
        return Ok(false);
    }
    let h = p.hessian(&u)?;
    let q = Matrix::identity(n, n) - Matrix::from_fn(n, n, |i, j| u[i] * u[j]);
    Ok(linalg::max_abs(&(&q * h * &q)) <= tol * scale)
}

/// Orthogonal critical generators `v1, v2` with `Hess P(x)(v1, v2) = 0` for
/// all `x`, i.e. `sum_i |sum_jk P_ijk v1_j v2_k| <= tol * scale`. Finding none
/// certifies orthogonal indecomposability when the line list is complete.
/// Only isolated lines are paired.
pub fn decomposability_witness(p: &CubicForm, lines: &[CriticalLine], tol: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let scale = hess_scale(p);
    // Points of positive-dimensional critical sets depend on sampling.
    let lines: Vec<&CriticalLine> = lines.iter().filter(|l| l.nondegenerate).collect();
    let hessians: Vec<Matrix> = lines.iter().map(|l| p.hessian_into_new(&l.generator)).collect();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let (v1, v2) = (&lines[a].generator, &lines[b].generator);
            if dot(v1, v2).abs() > ORTH_TOL {
                continue;
            }
            let w = &hessians[a] * nalgebra::DVector::from_column_slice(v2);
            if w.iter().map(|x| x.abs()).sum::<f64>() <= tol * scale {
                return Some((v1.clone(), v2.clone()));
            }
        }
    }
    None
}

impl CubicForm {
    fn hessian_into_new(&self, x: &[f64]) -> Matrix {
        let mut h = Matrix::zeros(self.dim(), self.dim());
        self.hessian_into(x, &mut h);
        h
    }
}
