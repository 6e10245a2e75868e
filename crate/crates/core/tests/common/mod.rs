#![allow(dead_code)]

use cubicforms::linalg::gaussian;
use cubicforms::CubicForm;
use proptest::prelude::*;
use rand::Rng;

/// Cubic with independent standard Gaussian coefficients on every sorted triple.
pub fn random_cubic<R: Rng>(rng: &mut R, n: usize) -> CubicForm {
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                terms.push(([i, j, k], gaussian(rng)));
            }
        }
    }
    CubicForm::from_terms(n, terms).unwrap()
}

/// Sparse random cubic forms of dimension 1..=max_dim with finite coefficients.
pub fn arb_form(max_dim: usize) -> impl Strategy<Value = CubicForm> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(((0..n, 0..n, 0..n), -10.0f64..10.0), 1..12).prop_map(move |terms| {
            CubicForm::from_terms(n, terms.into_iter().map(|((i, j, k), c)| ([i, j, k], c))).unwrap()
        })
    })
}

pub fn arb_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Naive evaluation straight from the definition, independent of the
/// library's evaluation loops.
pub fn naive_eval(p: &CubicForm, x: &[f64]) -> f64 {
    p.monomials().iter().map(|(t, c)| c * x[t[0]] * x[t[1]] * x[t[2]]).sum()
}

/// Build a form from 1-based monomials.
pub fn one_based(dim: usize, terms: &[([usize; 3], f64)]) -> CubicForm {
    CubicForm::from_terms(dim, terms.iter().map(|(t, c)| ([t[0] - 1, t[1] - 1, t[2] - 1], *c))).unwrap()
}

/// Search for a signed coordinate permutation `x_a -> s_a x_{pi(a)}` taking
/// `p` to `q` coefficientwise within `tol`. Exhaustive, so only for small
/// dimensions.
pub fn signed_permutation_between(p: &CubicForm, q: &CubicForm, tol: f64) -> Option<(Vec<usize>, Vec<f64>)> {
    let n = p.dim();
    if q.dim() != n || p.monomials().len() != q.monomials().len() {
        return None;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for mask in 0..(1u32 << n) {
            let signs: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let image = CubicForm::from_terms(
                n,
                p.monomials()
                    .iter()
                    .map(|(t, c)| ([perm[t[0]], perm[t[1]], perm[t[2]]], c * signs[t[0]] * signs[t[1]] * signs[t[2]])),
            )
            .unwrap();
            if image.max_coeff_diff(q) <= tol {
                return Some((perm, signs));
            }
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else { return false };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Permanent of the 3x3 matrix with row-major variables.
pub fn permanent() -> CubicForm {
    one_based(9, &[([1, 5, 9], 1.0), ([2, 6, 7], 1.0), ([3, 4, 8], 1.0), ([1, 6, 8], 1.0), ([2, 4, 9], 1.0), ([3, 5, 7], 1.0)])
}

/// Closed form of the simplicial polynomial in the Helmert basis.
pub fn simplicial_oracle(n: usize) -> CubicForm {
    let lead = ((n * (n + 1)) as f64).sqrt() / 6.0;
    let mut terms = Vec::new();
    for j in 2..=n {
        let w = lead / ((j * (j + 1)) as f64).sqrt();
        for i in 1..j {
            terms.push(([j, j, j], w));
            terms.push(([j, i, i], -3.0 * w));
        }
    }
    one_based(n, &terms)
}

/// Pfaffian of the 6x6 antisymmetric matrix, variables `x_ab` (a < b) in
/// lexicographic order.
pub fn pfaffian_6x6() -> CubicForm {
    let idx = |i: usize, j: usize| -> usize {
        let mut k = 0;
        for a in 1..=6 {
            for b in a + 1..=6 {
                k += 1;
                if (a, b) == (i, j) {
                    return k;
                }
            }
        }
        unreachable!()
    };
    let t = |s: f64, a: (usize, usize), b: (usize, usize), c: (usize, usize)| ([idx(a.0, a.1), idx(b.0, b.1), idx(c.0, c.1)], s);
    one_based(
        15,
        &[
            t(1.0, (1, 2), (3, 4), (5, 6)),
            t(1.0, (1, 2), (3, 6), (4, 5)),
            t(-1.0, (1, 2), (3, 5), (4, 6)),
            t(-1.0, (1, 3), (2, 4), (5, 6)),
            t(1.0, (1, 3), (2, 5), (4, 6)),
            t(-1.0, (1, 3), (2, 6), (4, 5)),
            t(1.0, (1, 4), (2, 3), (5, 6)),
            t(-1.0, (1, 4), (2, 5), (3, 6)),
            t(1.0, (1, 4), (2, 6), (3, 5)),
            t(-1.0, (1, 5), (2, 3), (4, 6)),
            t(1.0, (1, 5), (2, 4), (3, 6)),
            t(-1.0, (1, 5), (2, 6), (3, 4)),
            t(1.0, (1, 6), (2, 3), (4, 5)),
            t(-1.0, (1, 6), (2, 4), (3, 5)),
            t(1.0, (1, 6), (2, 5), (3, 4)),
        ],
    )
}
