//! Critical lines of a cubic form on the unit sphere.
//!
//! Solutions of `grad P(v) = theta v`, `|v| = 1` are found by Newton's method
//! on `F(v, theta) = (grad P(v) - theta v, (|v|^2 - 1)/2)` from a
//! deterministic low-discrepancy set of starting points. Completeness is
//! heuristic; [`CriticalLineSet::stable`] reports whether doubling the start
//! budget finds anything new.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{self, dot, Matrix};
use crate::tensor_core::{CubicForm, DEFAULT_TOL};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 20240001;

/// Relative gap below which two values count as the maximum.
const EXTREME_TOL: f64 = 1e-7;

/// Iteration cap for the ascent phase.
const ASCENT_STEPS: usize = 400;

/// Number of top isolated lines whose pairwise combinations seed the
/// refinement pass.
const REFINE_LINES: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CritOptions {
    /// Number of starting points; `None` means `max(200 n, 2000)`.
    pub starts: Option<usize>,
    pub seed: u64,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub dedup_tol: f64,
}

impl Default for CritOptions {
    fn default() -> Self {
        CritOptions { starts: None, seed: DEFAULT_SEED, newton_tol: 1e-12, max_iter: 60, dedup_tol: 1e-6 }
    }
}

impl CritOptions {
    pub fn start_count(&self, n: usize) -> usize {
        self.starts.unwrap_or_else(|| (200 * n).max(2000))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalLine {
    /// Unit generator with `P(v) >= 0`.
    pub generator: Vec<f64>,
    pub multiplier: f64,
    pub weight: f64,
    pub value: f64,
    /// Whether the constrained Hessian is invertible on `v^perp`; false on
    /// positive-dimensional critical sets.
    pub nondegenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalLineSet {
    pub lines: Vec<CriticalLine>,
    pub starts: usize,
    pub converged: usize,
    /// Line count unchanged when the budget is doubled, if checked.
    pub stable: Option<bool>,
}

impl CriticalLineSet {
    pub fn max_value(&self) -> Option<f64> {
        self.lines.first().map(|l| l.value)
    }
}

/// Points on `S^{n-1}` from an additive recurrence on the torus (the
/// generalized golden ratio sequence) pushed through Box-Muller, with a
/// seeded random shift.
pub fn sphere_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let d = 2 * n.div_ceil(2);
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (d as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=d).map(|i| g.powi(-(i as i32)).fract()).collect();
    let mut rng = linalg::seeded_rng(seed);
    let shift: Vec<f64> = (0..d).map(|_| rand::Rng::gen::<f64>(&mut rng)).collect();
    (1..=count)
        .map(|k| {
            let u: Vec<f64> = (0..d).map(|i| (shift[i] + k as f64 * alpha[i]).fract()).collect();
            let mut z = Vec::with_capacity(d);
            for pair in u.chunks(2) {
                let r = (-2.0 * pair[0].max(1e-300).ln()).sqrt();
                let t = 2.0 * std::f64::consts::PI * pair[1];
                z.push(r * t.cos());
                z.push(r * t.sin());
            }
            z.truncate(n);
            linalg::normalized(&z)
        })
        .collect()
}

fn scale_of(p: &CubicForm) -> f64 {
    p.coeff_norm().max(1.0)
}

/// Newton iteration from `v0`; returns the converged unit vector.
fn newton(p: &CubicForm, v0: &[f64], opts: &CritOptions, scale: f64) -> Option<Vec<f64>> {
    let n = p.dim();
    let mut v = v0.to_vec();
    let mut theta = 3.0 * p.eval_unchecked(&v);
    let mut g = vec![0.0; n];
    let mut h = Matrix::zeros(n, n);
    let mut jac = Matrix::zeros(n + 1, n + 1);
    let mut rhs = DVector::zeros(n + 1);
    for _ in 0..=opts.max_iter {
        p.gradient_into(&v, &mut g);
        let mut res = 0.0;
        for i in 0..n {
            rhs[i] = -(g[i] - theta * v[i]);
            res += rhs[i] * rhs[i];
        }
        rhs[n] = -(dot(&v, &v) - 1.0) / 2.0;
        res += rhs[n] * rhs[n];
        if res.sqrt() <= opts.newton_tol * scale {
            return Some(linalg::normalized(&v));
        }
        p.hessian_into(&v, &mut h);
        for i in 0..n {
            for j in 0..n {
                jac[(i, j)] = h[(i, j)];
            }
            jac[(i, i)] -= theta;
            jac[(i, n)] = -v[i];
            jac[(n, i)] = v[i];
        }
        jac[(n, n)] = 0.0;
        let d = linalg::solve(&jac, &rhs)?;
        for i in 0..n {
            v[i] += d[i];
        }
        theta += d[n];
        if !v.iter().all(|x| x.is_finite()) || !theta.is_finite() {
            return None;
        }
    }
    None
}

fn same_line(a: &[f64], b: &[f64], tol: f64) -> bool {
    let s = if dot(a, b) >= 0.0 { 1.0 } else { -1.0 };
    a.iter().zip(b).map(|(x, y)| (x - s * y).powi(2)).sum::<f64>().sqrt() <= tol
}

fn finish_line(p: &CubicForm, mut v: Vec<f64>, scale: f64) -> CriticalLine {
    let n = p.dim();
    let mut value = p.eval_unchecked(&v);
    let flip = if value.abs() > 1e-12 * scale {
        value < 0.0
    } else {
        // Roundoff-level values are snapped so the sign convention holds.
        value = 0.0;
        v.iter().find(|x| x.abs() > 1e-9).is_some_and(|&x| x < 0.0)
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
        value = -value;
    }
    let theta = 3.0 * value;
    let mut h = Matrix::zeros(n, n);
    p.hessian_into(&v, &mut h);
    // Constrained Hessian on v^perp, with the v direction shifted away from 0.
    let shift = 1.0 + linalg::max_abs(&h);
    let q = Matrix::identity(n, n) - Matrix::from_fn(n, n, |i, j| v[i] * v[j]);
    let m = &q * (h - Matrix::identity(n, n) * theta) * &q + Matrix::from_fn(n, n, |i, j| shift * v[i] * v[j]);
    let smallest = linalg::symmetric_eigenvalues(&m).iter().fold(f64::INFINITY, |a, e| a.min(e.abs()));
    let nondegenerate = smallest > 1e-6 * scale;
    CriticalLine { generator: v, multiplier: theta, weight: value * value, value, nondegenerate }
}

/// Shifted power iteration `v <- (grad P(v) + sigma v)/|...|`, which climbs
/// to a local maximum of `P` on the sphere when `sigma` bounds the Hessian.
fn ascend(p: &CubicForm, v0: &[f64], sigma: f64) -> Vec<f64> {
    let n = p.dim();
    let mut v = v0.to_vec();
    let mut g = vec![0.0; n];
    for _ in 0..ASCENT_STEPS {
        p.gradient_into(&v, &mut g);
        let w: Vec<f64> = (0..n).map(|i| g[i] + sigma * v[i]).collect();
        let w = linalg::normalized(&w);
        let step = w.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        v = w;
        if step < 1e-9 {
            break;
        }
    }
    v
}

type Roots = Vec<[Option<Vec<f64>>; 2]>;

/// Run each start through plain Newton and through ascent followed by Newton.
fn primary(p: &CubicForm, count: usize, opts: &CritOptions, scale: f64) -> Roots {
    let starts = sphere_points(p.dim(), count, opts.seed);
    // sup over the unit sphere of |Hess P(v)|_F is at most sqrt(max eig T).
    let sigma = linalg::symmetric_eigenvalues(&p.hessian_gram()).last().copied().unwrap_or(0.0).max(0.0).sqrt();
    starts
        .par_iter()
        .map(|s| [newton(p, s, opts, scale), newton(p, &ascend(p, s, sigma), opts, scale)])
        .collect()
}

fn push_new(found: &mut Vec<Vec<f64>>, v: Vec<f64>, tol: f64) -> bool {
    if found.iter().any(|w| same_line(&v, w, tol)) {
        return false;
    }
    found.push(v);
    true
}

/// Deduplicate the primary roots, then restart Newton from `(v +- w)/|...|`
/// for pairs of the highest isolated lines, which reaches saddles whose
/// basins the primary starts tend to miss.
fn assemble(p: &CubicForm, roots: &[[Option<Vec<f64>>; 2]], opts: &CritOptions, scale: f64) -> CriticalLineSet {
    let mut found: Vec<Vec<f64>> = Vec::new();
    for v in roots.iter().flatten().flatten() {
        push_new(&mut found, v.clone(), opts.dedup_tol);
    }
    let mut lines: Vec<CriticalLine> = found.par_iter().map(|v| finish_line(p, v.clone(), scale)).collect();
    sort_lines(&mut lines);
    let top: Vec<&CriticalLine> = lines.iter().filter(|l| l.nondegenerate).take(REFINE_LINES).collect();
    let mut seeds = Vec::new();
    for i in 0..top.len() {
        for j in i + 1..top.len() {
            for sign in [1.0, -1.0] {
                let w: Vec<f64> = top[i].generator.iter().zip(&top[j].generator).map(|(a, b)| a + sign * b).collect();
                if linalg::norm(&w) > 1e-6 {
                    seeds.push(linalg::normalized(&w));
                }
            }
        }
    }
    let extra: Vec<Option<Vec<f64>>> = seeds.par_iter().map(|s| newton(p, s, opts, scale)).collect();
    let mut fresh = Vec::new();
    for v in extra.into_iter().flatten() {
        if push_new(&mut found, v.clone(), opts.dedup_tol) {
            fresh.push(v);
        }
    }
    lines.extend(fresh.into_par_iter().map(|v| finish_line(p, v, scale)).collect::<Vec<_>>());
    sort_lines(&mut lines);
    let converged = roots.iter().filter(|r| r.iter().any(Option::is_some)).count();
    CriticalLineSet { lines, starts: roots.len(), converged, stable: None }
}

fn sort_lines(lines: &mut [CriticalLine]) {
    lines.sort_by(|a, b| b.value.total_cmp(&a.value).then_with(|| {
        a.generator.iter().zip(&b.generator).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    }));
}

/// Critical lines at the configured budget.
pub fn critical_lines(p: &CubicForm, opts: &CritOptions) -> CriticalLineSet {
    let count = opts.start_count(p.dim());
    if p.is_zero() {
        return CriticalLineSet { lines: Vec::new(), starts: count, converged: 0, stable: None };
    }
    let scale = scale_of(p);
    assemble(p, &primary(p, count, opts, scale), opts, scale)
}

/// Critical lines at the configured budget, plus the stability flag
/// obtained from a doubled budget (whose first half is the same sequence).
pub fn critical_lines_with_stability(p: &CubicForm, opts: &CritOptions) -> CriticalLineSet {
    let count = opts.start_count(p.dim());
    if p.is_zero() {
        return CriticalLineSet { lines: Vec::new(), starts: count, converged: 0, stable: None };
    }
    let scale = scale_of(p);
    let roots = primary(p, 2 * count, opts, scale);
    let mut set = assemble(p, &roots[..count], opts, scale);
    let doubled = assemble(p, &roots, opts, scale);
    set.stable = Some(set.lines.len() == doubled.lines.len());
    set
}

/// Maximizers of `P` on the unit sphere among the critical generators.
pub fn extreme_set_from(lines: &CriticalLineSet) -> Vec<&CriticalLine> {
    let Some(max) = lines.max_value() else { return Vec::new() };
    lines.lines.iter().filter(|l| max - l.value <= EXTREME_TOL * max.abs().max(1.0)).collect()
}

pub fn extreme_set(p: &CubicForm, opts: &CritOptions) -> Result<Vec<Vec<f64>>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("extreme set of the zero form".into()));
    }
    let lines = critical_lines(p, opts);
    Ok(extreme_set_from(&lines).into_iter().map(|l| l.generator.clone()).collect())
}

/// mkc from precomputed critical lines.
pub fn mkc_from(p: &CubicForm, lines: &CriticalLineSet) -> Result<f64> {
    let max = lines.max_value().ok_or_else(|| Error::InvalidArgument("no critical lines converged".into()))?;
    if !(max > 0.0) {
        return Err(Error::InvalidArgument("form has no positive critical value".into()));
    }
    let report = p.verify_einstein(DEFAULT_TOL);
    if report.is_einstein {
        return Ok(report.kappa / (6.0 * max).powi(2));
    }
    let t = p.hessian_gram();
    let mut best = f64::NEG_INFINITY;
    for l in extreme_set_from(lines) {
        let e = DVector::from_column_slice(&l.generator);
        let hess_sq = (e.transpose() * &t * &e)[(0, 0)];
        best = best.max(hess_sq / (36.0 * l.value * l.value));
    }
    Ok(best)
}

/// `kappa / (6 max P)^2` for Einstein forms, else the supremum of
/// `|Hess P(e)|^2 / (36 P(e)^2)` over the extreme set.
pub fn mkc(p: &CubicForm, opts: &CritOptions) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("mkc of the zero form".into()));
    }
    mkc_from(p, &critical_lines(p, opts))
}
