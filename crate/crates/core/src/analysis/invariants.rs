use serde::Serialize;

use crate::tensor_core::{describe_failure, CubicForm, DEFAULT_TOL};
use crate::{Error, Result};

use super::critical::{critical_lines, extreme_set_from, mkc_from, CritOptions};
use super::nonassoc::{cass_norm, RANK4_MAX_DIM};
use super::structure::{decomposability_witness, DEFAULT_WITNESS_TOL};

/// Relative agreement required between fingerprint entries.
pub const COMPARE_TOL: f64 = 1e-6;

/// cass norms below this count as zero.
pub const CASS_ZERO: f64 = 1e-8;

/// Slack on mkc in the 4-d classifier.
const CLASSIFY_SLACK: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightClass {
    pub weight: f64,
    /// Number of isolated (nondegenerate) critical lines with this weight;
    /// 0 when `continuum` is set.
    pub multiplicity: usize,
    /// Whether degenerate lines of this weight were found, i.e. the weight
    /// is attained on a positive-dimensional critical set.
    pub continuum: bool,
}

/// Orbit invariants in the gauge `kappa = n(n-1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub kappa: f64,
    pub mkc: f64,
    /// `None` when the maximum is attained on a positive-dimensional set.
    pub extreme_count: Option<usize>,
    pub weight_spectrum: Vec<WeightClass>,
    /// `||cass|| / kappa`; `None` below dimension 3 or above the rank-4 limit.
    pub cass_norm: Option<f64>,
    pub decomposability_witness_found: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "field", rename_all = "snake_case")]
pub enum Verdict {
    Distinguished(String),
    IndistinguishableByInvariants,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Distinguished(field) => write!(f, "distinguished({field})"),
            Verdict::IndistinguishableByInvariants => write!(f, "indistinguishable_by_invariants"),
        }
    }
}

fn gauge(p: &CubicForm) -> Result<CubicForm> {
    let n = p.dim();
    if n < 2 {
        return Err(Error::InvalidArgument("fingerprint needs dim >= 2".into()));
    }
    let kappa = p.kappa();
    if !(kappa > 0.0) {
        return Err(Error::InvalidArgument("fingerprint of the zero form".into()));
    }
    Ok(p.rescale(((n * (n - 1)) as f64 / kappa).sqrt()))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn fingerprint(p: &CubicForm, opts: &CritOptions) -> Result<Fingerprint> {
    let q = gauge(p)?;
    let n = q.dim();
    let lines = critical_lines(&q, opts);
    let mkc = mkc_from(&q, &lines)?;
    let extreme = extreme_set_from(&lines);
    let extreme_count = extreme.iter().all(|l| l.nondegenerate).then_some(extreme.len());
    let mut weights: Vec<(f64, bool)> = lines.lines.iter().map(|l| (l.weight, l.nondegenerate)).collect();
    weights.sort_by(|a, b| a.0.total_cmp(&b.0));
    let top = weights.last().map_or(1.0, |w| w.0.max(1.0));
    let mut spectrum: Vec<WeightClass> = Vec::new();
    for (w, iso) in weights {
        match spectrum.last_mut() {
            Some(c) if (w - c.weight).abs() <= COMPARE_TOL * top => {
                c.multiplicity += usize::from(iso);
                c.continuum |= !iso;
            }
            _ => spectrum.push(WeightClass { weight: w, multiplicity: usize::from(iso), continuum: !iso }),
        }
    }
    // Isolated lines sharing a level with a continuum are counted only up to
    // sampling luck.
    for c in spectrum.iter_mut().filter(|c| c.continuum) {
        c.multiplicity = 0;
    }
    let cass = if (3..=RANK4_MAX_DIM).contains(&n) { Some(cass_norm(&q)?) } else { None };
    let witness = decomposability_witness(&q, &lines.lines, DEFAULT_WITNESS_TOL).is_some();
    Ok(Fingerprint {
        dim: n,
        kappa: (n * (n - 1)) as f64,
        mkc,
        extreme_count,
        weight_spectrum: spectrum,
        cass_norm: cass,
        decomposability_witness_found: witness,
    })
}

/// First field on which two fingerprints differ, if any.
pub fn first_difference(a: &Fingerprint, b: &Fingerprint) -> Option<&'static str> {
    if a.dim != b.dim {
        return Some("dim");
    }
    if !close(a.kappa, b.kappa, COMPARE_TOL) {
        return Some("kappa");
    }
    if !close(a.mkc, b.mkc, COMPARE_TOL) {
        return Some("mkc");
    }
    match (a.cass_norm, b.cass_norm) {
        (Some(x), Some(y)) if !(x <= CASS_ZERO && y <= CASS_ZERO) && !close(x, y, COMPARE_TOL) => return Some("cass_norm"),
        (Some(_), None) | (None, Some(_)) => return Some("cass_norm"),
        _ => {}
    }
    if a.decomposability_witness_found != b.decomposability_witness_found {
        return Some("decomposability");
    }
    if a.extreme_count != b.extreme_count {
        return Some("extreme_count");
    }
    let same_spectrum = a.weight_spectrum.len() == b.weight_spectrum.len()
        && a.weight_spectrum.iter().zip(&b.weight_spectrum).all(|(x, y)| {
            close(x.weight, y.weight, COMPARE_TOL) && x.multiplicity == y.multiplicity && x.continuum == y.continuum
        });
    if !same_spectrum {
        return Some("weight_spectrum");
    }
    None
}

/// Compare two Einstein forms by their fingerprints. Never asserts
/// equivalence, only the absence of a separating invariant.
pub fn compare(p: &CubicForm, q: &CubicForm, opts: &CritOptions) -> Result<Verdict> {
    for f in [p, q] {
        let r = f.verify_einstein(DEFAULT_TOL);
        if !r.is_einstein {
            return Err(Error::NotEinstein(describe_failure(&r)));
        }
    }
    if p.dim() != q.dim() {
        return Ok(Verdict::Distinguished("dim".into()));
    }
    let a = fingerprint(p, opts)?;
    let b = fingerprint(q, opts)?;
    Ok(match first_difference(&a, &b) {
        Some(field) => Verdict::Distinguished(field.into()),
        None => Verdict::IndistinguishableByInvariants,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub label: &'static str,
    pub mkc: Option<f64>,
    pub lambda: Option<f64>,
}

/// Normal form of an Einstein cubic in dimension 2, 3 or 4. In dimension 4
/// the class is read off mkc, with `lambda = sqrt((mkc - 4/3)/6) - 1/3`.
pub fn classify_low_dim(p: &CubicForm, opts: &CritOptions) -> Result<Classification> {
    let r = p.verify_einstein(DEFAULT_TOL);
    if !r.is_einstein {
        return Err(Error::NotEinstein(describe_failure(&r)));
    }
    match p.dim() {
        2 => Ok(Classification { label: "two_d", mkc: None, lambda: None }),
        3 => Ok(Classification { label: "basepoly", mkc: None, lambda: None }),
        4 => {
            let m = mkc_from(p, &critical_lines(p, opts))?;
            let lambda = ((m - 4.0 / 3.0) / 6.0).max(0.0).sqrt() - 1.0 / 3.0;
            let label = if (m - 4.0 / 3.0).abs() <= CLASSIFY_SLACK {
                "minusonethird"
            } else if (m - 2.0).abs() <= CLASSIFY_SLACK {
                "lazero"
            } else {
                return Err(Error::Classification(format!("mkc {m} matches no 4-d normal form")));
            };
            Ok(Classification { label, mkc: Some(m), lambda: Some(lambda) })
        }
        d => Err(Error::Classification(format!("no normal forms in dimension {d}"))),
    }
}

/// Residuals of the quadratic system characterizing Einstein forms in terms
/// of the coefficients of a harmonic cubic written as
/// `sum_{i<j<k} a_ijk x_i x_j x_k + (1/6) sum_{i != j} b_ij (3 x_i^2 x_j - x_j^3)`.
///
/// The first `n(n-1)/2` entries are the off-diagonal equations for `i < j`,
/// the last `n` the diagonal equations minus `kappa` (the mean of the
/// diagonal expressions when not given).
pub fn coefficient_residuals(p: &CubicForm, kappa: Option<f64>) -> Result<Vec<f64>> {
    let r = p.verify_einstein(DEFAULT_TOL);
    if !r.is_harmonic {
        return Err(Error::NotHarmonic(r.harmonic_defect));
    }
    let n = p.dim();
    let alpha = |i: usize, j: usize, k: usize| p.coefficient([i, j, k]);
    // x_i^2 x_j carries b_ij / 2.
    let beta = |i: usize, j: usize| 2.0 * p.coefficient([i, i, j]);
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut s = 0.0;
            for k in (0..n).filter(|&k| k != i && k != j) {
                s += -(beta(k, i) * beta(i, j) + beta(k, j) * beta(j, i)) + beta(k, i) * beta(k, j);
                s += 2.0 * beta(i, k) * alpha(i, k, j) + 2.0 * beta(j, k) * alpha(j, k, i);
                for l in (k + 1..n).filter(|&l| l != i && l != j) {
                    s += 2.0 * alpha(i, k, l) * alpha(j, k, l);
                }
            }
            out.push(s);
        }
    }
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = 0.0;
            for k in (0..n).filter(|&k| k != i) {
                s += 2.0 * (beta(k, i).powi(2) + beta(i, k).powi(2));
                for l in (k + 1..n).filter(|&l| l != i) {
                    s += 2.0 * beta(k, i) * beta(l, i) + 2.0 * alpha(i, k, l).powi(2);
                }
            }
            s
        })
        .collect();
    let kappa = kappa.unwrap_or_else(|| diag.iter().sum::<f64>() / n as f64);
    out.extend(diag.iter().map(|d| d - kappa));
    Ok(out)
}
