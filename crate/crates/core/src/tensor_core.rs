//! Cubic forms stored as sparse maps over sorted index triples.
//!
//! A form `P(x) = sum c_ijk x_i x_j x_k` (over `i <= j <= k`) has symmetric
//! tensor components `P_ijk = c * 6 / m`, `m` the number of distinct
//! orderings of `{i, j, k}`. The Einstein condition is `sum_p P_ipp = 0`
//! together with `T = kappa I`, where `T_ij = sum_ab P_abi P_abj` is the
//! Hessian-Gram matrix, so that `|Hess P|^2(x) = x^T T x`.

use std::collections::BTreeMap;
use std::io::Read;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, Matrix};
use crate::{Error, Result};

pub type Triple = [usize; 3];

/// Relative tolerance used when none is given.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Above this dimension the Gram matrix is accumulated from the sparse
/// coefficients instead of a transient dense tensor.
const DENSE_GRAM_MAX_DIM: usize = 64;

const ORTHOGONALITY_TOL: f64 = 1e-9;

/// The six position permutations of a triple.
const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn sorted(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

/// `6 / m` for a sorted triple.
fn component_factor(t: &Triple) -> f64 {
    match (t[0] == t[1], t[1] == t[2]) {
        (true, true) => 6.0,
        (false, false) => 1.0,
        _ => 2.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicForm {
    dim: usize,
    monomials: BTreeMap<Triple, f64>,
}

/// One independent tensor component, `P_idx` for a sorted `idx`.
///
/// The component equals `value + err` exactly; `err` is nonzero only for
/// cube terms, where `6c` is not always representable. Carrying the
/// rounding error keeps the map back to coefficients exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub idx: Triple,
    pub value: f64,
    pub err: f64,
}

/// Dense symmetric 3-tensor, row-major.
#[derive(Clone, Debug)]
pub struct DenseTensor {
    n: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(n: usize) -> Self {
        DenseTensor { n, data: vec![0.0; n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.n + j) * self.n + k] += v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// The `n^2 x n` matrix with rows indexed by `(a, b)`.
    pub fn unfold(&self) -> Matrix {
        let n = self.n;
        DMatrix::from_row_slice(n * n, n, &self.data)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub harmonic_defect: f64,
    pub gram: Vec<Vec<f64>>,
    pub kappa: f64,
    pub off_diag_defect: f64,
    pub is_harmonic: bool,
    pub is_einstein: bool,
    pub tol: f64,
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    idx: Triple,
    c: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormJson {
    dim: usize,
    monomials: Vec<MonomialJson>,
}

impl CubicForm {
    pub fn zero(dim: usize) -> Self {
        CubicForm { dim, monomials: BTreeMap::new() }
    }

    /// Build from arbitrary (unsorted, possibly repeated) index triples;
    /// repeated monomials accumulate and exact zeros are dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Triple, f64)>,
    {
        let mut p = CubicForm::zero(dim);
        for (t, c) in terms {
            if t.iter().any(|&i| i >= dim) {
                return Err(Error::InvalidArgument(format!("index {t:?} out of range for dim {dim}")));
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient at {t:?}")));
            }
            *p.monomials.entry(sorted(t)).or_insert(0.0) += c;
        }
        p.monomials.retain(|_, c| *c != 0.0);
        Ok(p)
    }

    /// Build from a map whose keys must already be sorted and in range.
    pub fn from_monomials(dim: usize, monomials: BTreeMap<Triple, f64>) -> Result<Self> {
        for (t, c) in &monomials {
            if t[0] > t[1] || t[1] > t[2] {
                return Err(Error::InvalidArgument(format!("index {t:?} not sorted")));
            }
            if t[2] >= dim {
                return Err(Error::InvalidArgument(format!("index {t:?} out of range for dim {dim}")));
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient at {t:?}")));
            }
        }
        Ok(CubicForm { dim, monomials })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn monomials(&self) -> &BTreeMap<Triple, f64> {
        &self.monomials
    }

    pub fn coefficient(&self, t: Triple) -> f64 {
        self.monomials.get(&sorted(t)).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.values().all(|&c| c == 0.0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.monomials.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_coeff_diff(&self, other: &CubicForm) -> f64 {
        let mut d = 0.0f64;
        for (t, c) in &self.monomials {
            d = d.max((c - other.coefficient(*t)).abs());
        }
        for (t, c) in &other.monomials {
            if !self.monomials.contains_key(t) {
                d = d.max(c.abs());
            }
        }
        d
    }

    /// Drop coefficients with `|c| <= rel * max|c|`.
    pub fn pruned(&self, rel: f64) -> CubicForm {
        let m = self.monomials.values().fold(0.0f64, |a, c| a.max(c.abs()));
        let monomials = self.monomials.iter().filter(|(_, c)| c.abs() > rel * m).map(|(t, c)| (*t, *c)).collect();
        CubicForm { dim: self.dim, monomials }
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.monomials.iter().map(|(t, c)| c * x[t[0]] * x[t[1]] * x[t[2]]).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let mut g = vec![0.0; self.dim];
        self.gradient_into(x, &mut g);
        Ok(g)
    }

    pub(crate) fn gradient_into(&self, x: &[f64], g: &mut [f64]) {
        g.iter_mut().for_each(|v| *v = 0.0);
        for (&[a, b, c], &k) in &self.monomials {
            g[a] += k * x[b] * x[c];
            g[b] += k * x[a] * x[c];
            g[c] += k * x[a] * x[b];
        }
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Matrix> {
        self.check_len(x)?;
        let mut h = Matrix::zeros(self.dim, self.dim);
        self.hessian_into(x, &mut h);
        Ok(h)
    }

    pub(crate) fn hessian_into(&self, x: &[f64], h: &mut Matrix) {
        h.fill(0.0);
        for (t, &k) in &self.monomials {
            for p in PERMS {
                h[(t[p[0]], t[p[1]])] += k * x[t[p[2]]];
            }
        }
    }

    /// Independent tensor components over sorted triples.
    pub fn components(&self) -> Vec<Component> {
        self.monomials
            .iter()
            .map(|(t, &c)| {
                let f = component_factor(t);
                let value = c * f;
                let err = c.mul_add(f, -value);
                Component { idx: *t, value, err }
            })
            .collect()
    }

    /// Inverse of [`CubicForm::components`].
    pub fn from_components(dim: usize, comps: &[Component]) -> Result<Self> {
        let terms = comps.iter().map(|k| {
            let f = component_factor(&sorted(k.idx));
            let c = if f == 6.0 {
                let q = k.value / 6.0;
                let r = (-6.0f64).mul_add(q, k.value) + k.err;
                q + r / 6.0
            } else {
                (k.value + k.err) / f
            };
            (k.idx, c)
        });
        CubicForm::from_terms(dim, terms)
    }

    pub fn dense_tensor(&self) -> DenseTensor {
        let mut t = DenseTensor::zeros(self.dim);
        for (idx, &c) in &self.monomials {
            for p in PERMS {
                t.add(idx[p[0]], idx[p[1]], idx[p[2]], c);
            }
        }
        t
    }

    /// Read coefficients off a symmetric tensor (only the sorted entries are
    /// consulted).
    pub fn from_dense(t: &DenseTensor) -> CubicForm {
        let n = t.dim();
        let mut monomials = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = t.get(i, j, k);
                    if v != 0.0 {
                        monomials.insert([i, j, k], v / component_factor(&[i, j, k]));
                    }
                }
            }
        }
        CubicForm { dim: n, monomials }
    }

    /// `l_i = sum_p P_ipp`, so that `(Delta P)(x) = sum l_i x_i`.
    pub fn laplacian_coefficients(&self) -> Vec<f64> {
        let mut l = vec![0.0; self.dim];
        for (t, &c) in &self.monomials {
            for p in PERMS {
                if t[p[1]] == t[p[2]] {
                    l[t[p[0]]] += c;
                }
            }
        }
        l
    }

    /// `T_ij = sum_ab P_abi P_abj`.
    pub fn hessian_gram(&self) -> Matrix {
        if self.dim <= DENSE_GRAM_MAX_DIM {
            let r = self.dense_tensor().unfold();
            r.transpose() * r
        } else {
            self.hessian_gram_streamed()
        }
    }

    pub(crate) fn hessian_gram_streamed(&self) -> Matrix {
        let n = self.dim;
        let mut slices: BTreeMap<(usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
        for (t, &c) in &self.monomials {
            for p in PERMS {
                *slices.entry((t[p[0]], t[p[1]])).or_default().entry(t[p[2]]).or_insert(0.0) += c;
            }
        }
        let mut g = Matrix::zeros(n, n);
        for v in slices.values() {
            for (&i, &a) in v {
                for (&j, &b) in v {
                    g[(i, j)] += a * b;
                }
            }
        }
        g
    }

    /// Mean of the Gram diagonal.
    pub fn kappa(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        self.hessian_gram().trace() / self.dim as f64
    }

    pub fn verify_einstein(&self, tol: f64) -> VerificationReport {
        let l = self.laplacian_coefficients();
        let harmonic_defect = l.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let gram = self.hessian_gram();
        let n = self.dim;
        let kappa = if n == 0 { 0.0 } else { gram.trace() / n as f64 };
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { kappa } else { 0.0 };
                off = off.max((gram[(i, j)] - want).abs());
            }
        }
        let is_harmonic = harmonic_defect <= tol * self.coeff_norm().max(1.0);
        let is_einstein = is_harmonic && kappa > tol && off <= tol * kappa.max(1.0);
        VerificationReport {
            harmonic_defect,
            gram: (0..n).map(|i| (0..n).map(|j| gram[(i, j)]).collect()).collect(),
            kappa,
            off_diag_defect: off,
            is_harmonic,
            is_einstein,
            tol,
        }
    }

    pub fn is_einstein(&self) -> bool {
        self.verify_einstein(DEFAULT_TOL).is_einstein
    }

    /// `(g . P)(x) = P(g^T x)`.
    pub fn act_orthogonal(&self, g: &Matrix) -> Result<CubicForm> {
        if g.nrows() != self.dim || g.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: g.nrows() });
        }
        let defect = linalg::orthogonality_defect(g);
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal(defect));
        }
        let n = self.dim;
        // Q_ijk = sum g_ia g_jb g_kc P_abc, one mode at a time.
        let p = self.dense_tensor();
        let mut s1 = DenseTensor::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = p.get(a, b, c);
                    if v == 0.0 {
                        continue;
                    }
                    for k in 0..n {
                        s1.add(a, b, k, g[(k, c)] * v);
                    }
                }
            }
        }
        let mut s2 = DenseTensor::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let v = s1.get(a, b, k);
                    if v == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        s2.add(a, j, k, g[(j, b)] * v);
                    }
                }
            }
        }
        let mut q = DenseTensor::zeros(n);
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = s2.get(a, j, k);
                    if v == 0.0 {
                        continue;
                    }
                    for i in 0..n {
                        q.add(i, j, k, g[(i, a)] * v);
                    }
                }
            }
        }
        Ok(CubicForm::from_dense(&q))
    }

    /// `(P + Q)(x (+) y) = P(x) + Q(y)`.
    pub fn direct_sum(&self, other: &CubicForm) -> CubicForm {
        let s = self.dim;
        let mut monomials = self.monomials.clone();
        for (t, &c) in &other.monomials {
            monomials.insert([t[0] + s, t[1] + s, t[2] + s], c);
        }
        CubicForm { dim: s + other.dim, monomials }
    }

    /// Multiply every coefficient by `s`; kappa scales by `s^2`.
    pub fn rescale(&self, s: f64) -> CubicForm {
        let monomials = self.monomials.iter().map(|(t, c)| (*t, c * s)).filter(|(_, c)| *c != 0.0).collect();
        CubicForm { dim: self.dim, monomials }
    }

    pub fn normalize_kappa(&self, target: f64) -> Result<CubicForm> {
        if !(target > 0.0) {
            return Err(Error::InvalidArgument(format!("target kappa must be positive, got {target}")));
        }
        let r = self.verify_einstein(DEFAULT_TOL);
        if !r.is_einstein {
            return Err(Error::NotEinstein(describe_failure(&r)));
        }
        Ok(self.rescale((target / r.kappa).sqrt()))
    }

    /// Rename variable `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<CubicForm> {
        if perm.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: perm.len() });
        }
        let mut seen = vec![false; self.dim];
        for &p in perm {
            if p >= self.dim || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        CubicForm::from_terms(self.dim, self.monomials.iter().map(|(t, &c)| ([perm[t[0]], perm[t[1]], perm[t[2]]], c)))
    }

    pub fn to_json(&self) -> String {
        let doc = FormJson {
            dim: self.dim,
            monomials: self.monomials.iter().map(|(t, &c)| MonomialJson { idx: *t, c }).collect(),
        };
        serde_json::to_string(&doc).expect("form serializes")
    }

    pub fn from_json(s: &str) -> Result<CubicForm> {
        let doc: FormJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut monomials = BTreeMap::new();
        for m in doc.monomials {
            let t = m.idx;
            if t[0] > t[1] || t[1] > t[2] {
                return Err(Error::Parse(format!("idx {t:?} is not sorted")));
            }
            if t[2] >= doc.dim {
                return Err(Error::Parse(format!("idx {t:?} out of range for dim {}", doc.dim)));
            }
            if monomials.insert(t, m.c).is_some() {
                return Err(Error::Parse(format!("duplicate idx {t:?}")));
            }
        }
        Ok(CubicForm { dim: doc.dim, monomials })
    }

    pub fn read_json<R: Read>(mut r: R) -> Result<CubicForm> {
        let mut s = String::new();
        r.read_to_string(&mut s)?;
        CubicForm::from_json(&s)
    }
}

/// One-line reason why a report is not Einstein.
pub fn describe_failure(r: &VerificationReport) -> String {
    if !r.is_harmonic {
        format!("harmonic defect {:.3e}", r.harmonic_defect)
    } else if r.kappa <= r.tol {
        format!("kappa {:.3e} is not positive", r.kappa)
    } else {
        format!("off-diagonal defect {:.3e} at kappa {}", r.off_diag_defect, r.kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basepoly() -> CubicForm {
        CubicForm::from_terms(3, [([0, 1, 2], 1.0)]).unwrap()
    }

    #[test]
    fn eval_product() {
        assert_eq!(basepoly().eval(&[1.0, 2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(basepoly().eval(&[0.0; 3]).unwrap(), 0.0);
        assert!(basepoly().eval(&[1.0]).is_err());
    }

    #[test]
    fn gradient_and_hessian_of_product() {
        let p = basepoly();
        assert_eq!(p.gradient(&[1.0; 3]).unwrap(), vec![1.0; 3]);
        let h = p.hessian(&[1.0; 3]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn cube_laplacian() {
        let p = CubicForm::from_terms(3, [([0, 0, 0], 1.0)]).unwrap();
        assert_eq!(p.laplacian_coefficients(), vec![6.0, 0.0, 0.0]);
    }

    #[test]
    fn product_gram_is_two_identity() {
        let g = basepoly().hessian_gram();
        assert_eq!(g, Matrix::identity(3, 3) * 2.0);
        assert_eq!(basepoly().hessian_gram_streamed(), g);
    }

    #[test]
    fn zero_form_is_harmonic_not_einstein() {
        let r = CubicForm::zero(3).verify_einstein(DEFAULT_TOL);
        assert!(r.is_harmonic && !r.is_einstein);
    }

    #[test]
    fn rescale_scales_kappa_quadratically() {
        let r = basepoly().rescale(3.0).verify_einstein(DEFAULT_TOL);
        assert!(r.is_einstein && (r.kappa - 18.0).abs() < 1e-12);
        assert_eq!(basepoly().rescale(-1.0).hessian_gram(), basepoly().hessian_gram());
    }

    #[test]
    fn permutation_fixes_product() {
        let g = Matrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(basepoly().act_orthogonal(&g).unwrap(), basepoly());
        assert!(basepoly().act_orthogonal(&(g * 2.0)).is_err());
    }

    #[test]
    fn json_rejects_bad_indices() {
        assert!(CubicForm::from_json(r#"{"dim":3,"monomials":[{"idx":[1,0,2],"c":1}]}"#).is_err());
        assert!(CubicForm::from_json(r#"{"dim":2,"monomials":[{"idx":[0,1,2],"c":1}]}"#).is_err());
        let dup = r#"{"dim":3,"monomials":[{"idx":[0,1,2],"c":1},{"idx":[0,1,2],"c":2}]}"#;
        assert!(CubicForm::from_json(dup).is_err());
        let p = CubicForm::from_json(r#"{"dim":3,"monomials":[{"idx":[0,1,2],"c":1.5}]}"#).unwrap();
        assert_eq!(p.coefficient([2, 1, 0]), 1.5);
    }

    #[test]
    fn components_of_mixed_terms() {
        let p = CubicForm::from_terms(2, [([0, 0, 0], 1.0), ([0, 0, 1], 1.0), ([0, 1, 1], -3.0)]).unwrap();
        let t = p.dense_tensor();
        assert_eq!(t.get(0, 0, 0), 6.0);
        assert_eq!(t.get(0, 1, 0), 2.0);
        assert_eq!(t.get(1, 0, 1), -6.0);
        assert_eq!(CubicForm::from_dense(&t), p);
    }
}
