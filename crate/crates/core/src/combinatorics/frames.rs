use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::linalg::{self, dot, helmert_basis, project, Matrix};
use crate::tensor_core::{CubicForm, DenseTensor};
use crate::{Error, Result};

/// Absolute gap used to cluster inner products.
pub const DISTANCE_CLUSTER_TOL: f64 = 1e-7;

const ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frame {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub count: usize,
    pub spanning: bool,
    pub tight: bool,
    pub frame_constant: f64,
    pub centered: bool,
    pub unit_norm: bool,
    pub norms: Vec<f64>,
    pub distance_values: Vec<f64>,
    pub two_distance: bool,
    pub equiangular: bool,
    pub c: Option<f64>,
}

impl Frame {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let f = Frame { dim, vectors };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        if self.vectors.is_empty() {
            return Err(Error::InvalidArgument("frame has no vectors".into()));
        }
        for v in &self.vectors {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite frame entry".into()));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Frame = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        f.check().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("frame serializes")
    }

    /// `sum v v^T`.
    pub fn frame_operator(&self) -> Matrix {
        let n = self.dim;
        let mut s = Matrix::zeros(n, n);
        for v in &self.vectors {
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] += v[i] * v[j];
                }
            }
        }
        s
    }
}

fn cluster(mut values: Vec<f64>, gap: f64) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in values {
        match groups.last_mut() {
            Some(g) if v - g[g.len() - 1] <= gap => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    groups.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect()
}

pub fn validate_frame(frame: &Frame, tol: f64) -> Result<FrameReport> {
    frame.check()?;
    let n = frame.dim;
    let m = frame.vectors.len();
    let s = frame.frame_operator();
    let ev = linalg::symmetric_eigenvalues(&s);
    let spanning = ev.first().is_some_and(|&e| e > tol);
    let frame_constant = s.trace() / n as f64;
    let tight = linalg::max_abs(&(&s - Matrix::identity(n, n) * frame_constant)) <= tol * frame_constant.max(1.0);
    let mut centroid = vec![0.0; n];
    for v in &frame.vectors {
        for (c, x) in centroid.iter_mut().zip(v) {
            *c += x / m as f64;
        }
    }
    let centered = linalg::norm(&centroid) <= tol;
    let norms: Vec<f64> = frame.vectors.iter().map(|v| linalg::norm(v)).collect();
    let unit_norm = norms.iter().all(|r| (r - 1.0).abs() <= tol);
    let mut products = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            products.push(dot(&frame.vectors[i], &frame.vectors[j]));
        }
    }
    let abs_values = cluster(products.iter().map(|x| x.abs()).collect(), DISTANCE_CLUSTER_TOL);
    let distance_values = cluster(products, DISTANCE_CLUSTER_TOL);
    let two_distance = !distance_values.is_empty() && distance_values.len() <= 2;
    let equiangular = abs_values.len() == 1;
    let c = equiangular.then(|| abs_values[0]);
    Ok(FrameReport {
        count: m,
        spanning,
        tight,
        frame_constant,
        centered,
        unit_norm,
        norms,
        distance_values,
        two_distance,
        equiangular,
        c,
    })
}

/// `6P(x) = sum_v [<x,v>^3 - (3/(n+2)) |x|^2 |v|^2 <x,v>]`, the harmonic part
/// of `sum <x,v>^3 / 6`. Coefficients below `1e-13` of the largest are
/// rounding noise and are dropped.
pub fn frame_polynomial(frame: &Frame) -> Result<CubicForm> {
    frame.check()?;
    let n = frame.dim;
    let mut t = DenseTensor::zeros(n);
    for v in &frame.vectors {
        let w = dot(v, v) / (n as f64 + 2.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.add(i, j, k, v[i] * v[j] * v[k]);
                }
            }
            for k in 0..n {
                // delta_ij v_k + delta_ik v_j + delta_jk v_i
                t.add(i, i, k, -w * v[k]);
                t.add(i, k, i, -w * v[k]);
                t.add(k, i, i, -w * v[k]);
            }
        }
    }
    Ok(CubicForm::from_dense(&t).pruned(1e-13))
}

/// Orbit of `v` under the group generated by `generators`, deduplicated
/// within `tol` and listed in breadth-first order. Each orbit point appears
/// once.
pub fn group_orbit_frame(generators: &[Matrix], v: &[f64], tol: f64) -> Result<Frame> {
    let n = v.len();
    for g in generators {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.nrows() });
        }
        let d = linalg::orthogonality_defect(g);
        if d > 1e-9 {
            return Err(Error::NotOrthogonal(d));
        }
    }
    // Bucket on the first coordinate; neighbors are checked too.
    let width = (10.0 * tol).max(1e-9);
    let key = |w: &[f64]| (w[0] / width).floor() as i64;
    let mut buckets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut orbit: Vec<Vec<f64>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut insert = |w: Vec<f64>, orbit: &mut Vec<Vec<f64>>, queue: &mut VecDeque<usize>| -> Result<()> {
        let k = key(&w);
        for kk in [k - 1, k, k + 1] {
            if let Some(ids) = buckets.get(&kk) {
                if ids.iter().any(|&i| orbit[i].iter().zip(&w).all(|(a, b)| (a - b).abs() <= tol)) {
                    return Ok(());
                }
            }
        }
        if orbit.len() >= ORBIT_CAP {
            return Err(Error::TooLarge(format!("orbit exceeds {ORBIT_CAP} points")));
        }
        buckets.entry(k).or_default().push(orbit.len());
        queue.push_back(orbit.len());
        orbit.push(w);
        Ok(())
    };
    insert(v.to_vec(), &mut orbit, &mut queue)?;
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let w: Vec<f64> = (0..n).map(|r| (0..n).map(|c| g[(r, c)] * orbit[i][c]).sum()).collect();
            insert(w, &mut orbit, &mut queue)?;
        }
    }
    Ok(Frame { dim: n, vectors: orbit })
}

/// Golden ratio.
pub fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Generators of the icosahedral rotation group together with `-I`-type
/// sign changes: `diag(-1,-1,1)`, the cyclic coordinate shift, and an
/// order-5 rotation.
pub fn icosahedral_generators() -> Vec<Matrix> {
    let w = golden();
    let flip = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -1.0, 1.0]));
    let shift = Matrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let rot = Matrix::from_row_slice(3, 3, &[-w, 1.0, w - 1.0, -1.0, 1.0 - w, -w, 1.0 - w, -w, 1.0]) * 0.5;
    vec![flip, shift, rot]
}

pub fn frame_catalog_names() -> &'static [&'static str] {
    &["simplicial(n)", "two_distance_6_8", "etf_6_16", "etf_7_28", "icosahedron"]
}

/// `n+1` unit vectors `(e - (n+1)e_i)/sqrt(n(n+1))` in `e^perp`, written in
/// the basis of [`helmert_basis`].
pub fn simplicial_frame(n: usize) -> Result<Frame> {
    if n < 1 {
        return Err(Error::InvalidArgument("simplicial frame needs n >= 1".into()));
    }
    let basis = helmert_basis(n);
    let s = ((n * (n + 1)) as f64).sqrt();
    let vectors = (0..=n)
        .map(|i| {
            let mut f = vec![1.0 / s; n + 1];
            f[i] -= (n + 1) as f64 / s;
            project(&basis, &f)
        })
        .collect();
    Ok(Frame { dim: n, vectors })
}

fn from_rows(rows: &[&[f64]], scale: f64) -> Frame {
    let n = rows.len();
    let m = rows[0].len();
    let vectors = (0..m).map(|j| (0..n).map(|i| rows[i][j] * scale).collect()).collect();
    Frame { dim: n, vectors }
}

pub fn frame_catalog(name: &str) -> Result<Frame> {
    if let Some(k) = name.strip_prefix("simplicial(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = k.parse().map_err(|_| Error::UnknownName(name.to_string()))?;
        return simplicial_frame(n);
    }
    match name {
        "two_distance_6_8" => Ok(from_rows(
            &[
                &[1., 1., -1., -1., 1., 1., -1., -1.],
                &[1., -1., 1., -1., 1., -1., 1., -1.],
                &[1., -1., -1., 1., 1., -1., -1., 1.],
                &[1., -1., -1., 1., -1., 1., 1., -1.],
                &[1., -1., 1., -1., -1., 1., -1., 1.],
                &[1., 1., -1., -1., -1., -1., 1., 1.],
            ],
            1.0 / 6f64.sqrt(),
        )),
        "etf_6_16" => Ok(from_rows(
            &[
                &[1., -1., 1., -1., 1., -1., 1., -1., 0., 0., 0., 0., 0., 0., 0., 0.],
                &[1., 1., -1., -1., 0., 0., 0., 0., 1., 1., -1., -1., 0., 0., 0., 0.],
                &[1., -1., -1., 1., 0., 0., 0., 0., 0., 0., 0., 0., 1., -1., -1., 1.],
                &[0., 0., 0., 0., 1., -1., -1., 1., 1., -1., -1., 1., 0., 0., 0., 0.],
                &[0., 0., 0., 0., 1., 1., -1., -1., 0., 0., 0., 0., 1., 1., -1., -1.],
                &[0., 0., 0., 0., 0., 0., 0., 0., 1., -1., 1., -1., 1., -1., 1., -1.],
            ],
            1.0 / 3f64.sqrt(),
        )),
        "etf_7_28" => {
            let basis = helmert_basis(7);
            let s = 24f64.sqrt();
            let mut vectors = Vec::with_capacity(28);
            for a in 0..8 {
                for b in a + 1..8 {
                    let mut f = vec![1.0 / s; 8];
                    f[a] = -3.0 / s;
                    f[b] = -3.0 / s;
                    vectors.push(project(&basis, &f));
                }
            }
            Ok(Frame { dim: 7, vectors })
        }
        "icosahedron" => {
            let w = golden();
            let s = 1.0 / (1.0 + w * w).sqrt();
            let mut vectors = Vec::with_capacity(12);
            for shift in 0..3 {
                for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let base = [a * s, b * w * s, 0.0];
                    vectors.push((0..3).map(|i| base[(i + 3 - shift) % 3]).collect());
                }
            }
            Ok(Frame { dim: 3, vectors })
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}
