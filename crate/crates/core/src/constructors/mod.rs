//! Explicit Einstein cubic forms and operations producing new ones.

pub mod algebra;
mod catalog;

use std::collections::{BTreeMap, HashMap};

use crate::tensor_core::{describe_failure, CubicForm, Triple, DEFAULT_TOL};
use crate::{Error, Result};

pub use catalog::{catalog, catalog_names, CatalogEntry};

/// Monomial budget for the Pfaffian family.
const PFAFFIAN_MAX_MONOMIALS: usize = 200_000;

fn require_einstein(p: &CubicForm) -> Result<f64> {
    let r = p.verify_einstein(DEFAULT_TOL);
    if r.is_einstein {
        Ok(r.kappa)
    } else {
        Err(Error::NotEinstein(describe_failure(&r)))
    }
}

/// The summand `(1/6) sum_{i<j} (x_j^3 - 3 x_j x_i^2)`, 0-based `j`.
fn apex_terms(j: usize, scale: f64, out: &mut Vec<(Triple, f64)>) {
    for i in 0..j {
        out.push(([j, j, j], scale / 6.0));
        out.push(([i, i, j], -scale / 2.0));
    }
}

/// The simplicial form `P_n`, closed form. Einstein with `kappa = n(n-1)`.
pub fn simplicial(n: usize) -> Result<CubicForm> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("simplicial form needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let lead = (nf * (nf + 1.0)).sqrt();
    let mut terms = Vec::new();
    for j in 1..n {
        let jj = (j + 1) as f64;
        apex_terms(j, lead / (jj * (jj + 1.0)).sqrt(), &mut terms);
    }
    CubicForm::from_terms(n, terms)
}

/// `P_n` built by `P_{k+1} = (1/6) sum_i (x_{k+1}^3 - 3x_{k+1}x_i^2) + sqrt((k+2)/k) P_k`
/// starting from `P_2`.
pub fn simplicial_recursive(n: usize) -> Result<CubicForm> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("simplicial form needs n >= 2, got {n}")));
    }
    let mut p = CubicForm::from_terms(2, [([1, 1, 1], 1.0 / 6.0), ([0, 0, 1], -0.5)])?;
    for k in 2..n {
        let kf = k as f64;
        let mut terms: Vec<(Triple, f64)> = p.rescale(((kf + 2.0) / kf).sqrt()).monomials().iter().map(|(t, c)| (*t, *c)).collect();
        apex_terms(k, 1.0, &mut terms);
        p = CubicForm::from_terms(k + 1, terms)?;
    }
    Ok(p)
}

/// Raise the dimension of an Einstein form `Q` on `R^n` by one, producing
/// an Einstein form with constant `kappa_next`:
///
/// `sqrt(kappa_next/((n+1)n)) * ((1/6) sum_i (x_{n+1}^3 - 3x_{n+1}x_i^2) + sqrt((n+2)(n-1)/kappa_n) Q(x))`.
///
/// Critical lines double plus one, and the conformal nonassociativity
/// tensor is multiplied by `(kappa_next/kappa_n)((n+2)(n-1)/((n+1)n))`.
pub fn extend(q: &CubicForm, kappa_next: f64) -> Result<CubicForm> {
    if !(kappa_next > 0.0) {
        return Err(Error::InvalidArgument(format!("kappa_next must be positive, got {kappa_next}")));
    }
    let kappa = require_einstein(q)?;
    let n = q.dim();
    let nf = n as f64;
    let outer = (kappa_next / ((nf + 1.0) * nf)).sqrt();
    let inner = ((nf + 2.0) * (nf - 1.0) / kappa).sqrt();
    let mut terms: Vec<(Triple, f64)> = q.monomials().iter().map(|(t, c)| (*t, c * inner * outer)).collect();
    apex_terms(n, outer, &mut terms);
    CubicForm::from_terms(n + 1, terms)
}

/// Ordered tensor components `(idx, P_idx)` over all orderings.
fn ordered_components(p: &CubicForm) -> Vec<(Triple, f64)> {
    let mut out = Vec::new();
    for (t, &c) in p.monomials() {
        let mut seen: Vec<Triple> = Vec::with_capacity(6);
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let o = [t[perm[0]], t[perm[1]], t[perm[2]]];
            if !seen.contains(&o) {
                seen.push(o);
            }
        }
        let v = c * 6.0 / seen.len() as f64;
        out.extend(seen.into_iter().map(|o| (o, v)));
    }
    out
}

/// Kronecker tensor product, `(P (x) Q)_{(ia)(jb)(kc)} = P_ijk Q_abc` with
/// flat index `(i, a) -> i*q + a`. Satisfies `(P (x) Q)(a (x) b) = 6 P(a) Q(b)`
/// and multiplies Einstein constants.
pub fn tensor_product(p: &CubicForm, q: &CubicForm) -> CubicForm {
    let qd = q.dim();
    let pc = ordered_components(p);
    let qc = ordered_components(q);
    let mut acc: BTreeMap<Triple, f64> = BTreeMap::new();
    for (a, pv) in &pc {
        for (b, qv) in &qc {
            let mut t = [a[0] * qd + b[0], a[1] * qd + b[1], a[2] * qd + b[2]];
            t.sort_unstable();
            *acc.entry(t).or_insert(0.0) += pv * qv;
        }
    }
    // P(x) = (1/6) sum of T_IJK x_I x_J x_K over ordered triples.
    let terms = acc.into_iter().map(|(t, s)| (t, s / 6.0));
    CubicForm::from_terms(p.dim() * qd, terms).expect("indices in range")
}

/// Permutation taking block coordinates (`a*n + i`, block `a` a copy of
/// `R^n`) to the Kronecker flat index `i*q + a` used by [`tensor_product`].
pub fn block_to_kronecker(n: usize, q: usize) -> Vec<usize> {
    let mut perm = vec![0; n * q];
    for a in 0..q {
        for i in 0..n {
            perm[a * n + i] = i * q + a;
        }
    }
    perm
}

/// `Re P(x + iy)` on `R^{2n}` with coordinates `(x, y)`. Harmonic, and
/// doubles the constant of `|Hess P|^2 = kappa |x|^2`. Equals
/// `tensor_product(P, (x_1^3 - 3x_1x_2^2)/6)` after [`block_to_kronecker`]`(n, 2)`.
pub fn parahurwitzification(p: &CubicForm) -> CubicForm {
    let n = p.dim();
    let mut terms = Vec::new();
    for (&[a, b, c], &k) in p.monomials() {
        terms.push(([a, b, c], k));
        terms.push(([a, b + n, c + n], -k));
        terms.push(([a + n, b, c + n], -k));
        terms.push(([a + n, b + n, c], -k));
    }
    CubicForm::from_terms(2 * n, terms).expect("indices in range")
}

/// `Q(x,y,z) = P(x+y+z) - P(x+y) - P(y+z) - P(z+x) + P(x) + P(y) + P(z)`
/// on `R^{3n}`, i.e. `sum P_ijk x_i y_j z_k`. Harmonic with doubled constant;
/// equals `tensor_product(P, x_1x_2x_3)` after [`block_to_kronecker`]`(n, 3)`.
pub fn triple(p: &CubicForm) -> CubicForm {
    let n = p.dim();
    let terms = ordered_components(p).into_iter().map(|(t, v)| ([t[0], t[1] + n, t[2] + 2 * n], v));
    CubicForm::from_terms(3 * n, terms).expect("indices in range")
}

/// `P^(x, r) = r^3/6 + r|x|^2/2 + P(x)` with `r` the last coordinate.
pub fn affine_extension(p: &CubicForm) -> CubicForm {
    let n = p.dim();
    let mut terms: Vec<(Triple, f64)> = p.monomials().iter().map(|(t, c)| (*t, *c)).collect();
    terms.push(([n, n, n], 1.0 / 6.0));
    for i in 0..n {
        terms.push(([i, i, n], 0.5));
    }
    CubicForm::from_terms(n + 1, terms).expect("indices in range")
}

/// Cartan's isoparametric cubic over the composition algebra of dimension
/// `m`, on `R^{3m+2}` with coordinates `(u, v, z_1, z_2, z_3)`:
///
/// `u^3 + (3/2)u(|z1|^2 + |z2|^2 - 2|z3|^2 - 2v^2) + (3 sqrt3/2) v(|z1|^2 - |z2|^2)
///  + (3 sqrt3/2)((z1 z2) z3 + conj(z3)(conj(z2) conj(z1)))`.
///
/// Einstein with `kappa = 18(n+2)` and `|grad P|^2 = 9|x|^4`.
pub fn cartan_isoparametric(m: usize) -> Result<CubicForm> {
    if ![1, 2, 4, 8].contains(&m) {
        return Err(Error::InvalidArgument(format!("composition algebra dimension must be 1, 2, 4 or 8, got {m}")));
    }
    let n = 3 * m + 2;
    let s3 = 3f64.sqrt();
    let (z1, z2, z3) = (2, 2 + m, 2 + 2 * m);
    let mut terms = vec![([0, 0, 0], 1.0), ([0, 1, 1], -3.0)];
    for a in 0..m {
        terms.push(([0, z1 + a, z1 + a], 1.5));
        terms.push(([0, z2 + a, z2 + a], 1.5));
        terms.push(([0, z3 + a, z3 + a], -3.0));
        terms.push(([1, z1 + a, z1 + a], 1.5 * s3));
        terms.push(([1, z2 + a, z2 + a], -1.5 * s3));
    }
    // (z1 z2) z3 + its conjugate is twice the real part.
    for a in 0..m {
        for b in 0..m {
            let ab = algebra::mul(&algebra::basis(m, a), &algebra::basis(m, b));
            for c in 0..m {
                let re = algebra::mul(&ab, &algebra::basis(m, c))[0];
                if re != 0.0 {
                    terms.push(([z1 + a, z2 + b, z3 + c], 3.0 * s3 * re));
                }
            }
        }
    }
    CubicForm::from_terms(n, terms)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Sign of the permutation given as a sequence of distinct integers.
pub(crate) fn permutation_sign(seq: &[usize]) -> f64 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Cubic form of the top wedge product on the `2n`-th exterior power of
/// `R^{6n}`: variables are `2n`-subsets in lexicographic order, monomials are
/// partitions `{I, J, K}` of `0..6n` signed by the parity of `I J K`.
pub fn pfaffian_form(n: usize) -> Result<CubicForm> {
    if n == 0 {
        return Err(Error::InvalidArgument("pfaffian order must be at least 1".into()));
    }
    let total = 6 * n;
    let k = 2 * n;
    let count = binomial(total - 1, k - 1).saturating_mul(binomial(total - k - 1, k - 1));
    if count > PFAFFIAN_MAX_MONOMIALS {
        return Err(Error::TooLarge(format!("pfaffian order {n} needs {count} monomials (limit {PFAFFIAN_MAX_MONOMIALS})")));
    }
    let vars = subsets(total, k);
    let index: HashMap<Vec<usize>, usize> = vars.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut terms = Vec::with_capacity(count);
    // I holds 0, J holds the least element outside I.
    for rest_i in subsets(total - 1, k - 1) {
        let set_i: Vec<usize> = std::iter::once(0).chain(rest_i.iter().map(|x| x + 1)).collect();
        let left: Vec<usize> = (0..total).filter(|x| !set_i.contains(x)).collect();
        for rest_j in subsets(left.len() - 1, k - 1) {
            let set_j: Vec<usize> = std::iter::once(left[0]).chain(rest_j.iter().map(|&x| left[x + 1])).collect();
            let set_k: Vec<usize> = left.iter().copied().filter(|x| !set_j.contains(x)).collect();
            let seq: Vec<usize> = set_i.iter().chain(&set_j).chain(&set_k).copied().collect();
            terms.push(([index[&set_i], index[&set_j], index[&set_k]], permutation_sign(&seq)));
        }
    }
    CubicForm::from_terms(vars.len(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_closed_form() {
        let p = simplicial(2).unwrap();
        let want = CubicForm::from_terms(2, [([1, 1, 1], 1.0 / 6.0), ([0, 0, 1], -0.5)]).unwrap();
        assert!(p.max_coeff_diff(&want) < 1e-15);
        assert!(simplicial(1).is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
        assert_eq!(subsets(4, 2)[5], vec![2, 3]);
        assert_eq!(binomial(12, 4), 495);
    }

    #[test]
    fn pfaffian_budget() {
        assert!(matches!(pfaffian_form(3), Err(Error::TooLarge(_))));
        assert_eq!(pfaffian_form(1).unwrap().monomials().len(), 15);
    }

    #[test]
    fn product_of_one_variable_cubes() {
        let cube = CubicForm::from_terms(1, [([0, 0, 0], 1.0 / 6.0)]).unwrap();
        let t = tensor_product(&cube, &cube);
        assert!((t.coefficient([0, 0, 0]) - 1.0 / 6.0).abs() < 1e-16);
    }
}
