use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::constructors::{permutation_sign, subsets};
use crate::tensor_core::CubicForm;
use crate::{Error, Result};

/// Blocks are 0-based sorted triples. `signs` defaults to all `+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleSystem {
    pub points: usize,
    pub blocks: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleSystemReport {
    pub is_partial: bool,
    pub is_regular: bool,
    /// Replication number when regular, else 0.
    pub r: usize,
    pub is_steiner: bool,
}

impl TripleSystem {
    /// Build from 1-based blocks.
    pub fn from_one_based(points: usize, blocks: &[[usize; 3]]) -> Self {
        let blocks = blocks.iter().map(|b| [b[0] - 1, b[1] - 1, b[2] - 1]).collect();
        TripleSystem { points, blocks, signs: None }.normalized()
    }

    fn normalized(mut self) -> Self {
        for b in &mut self.blocks {
            b.sort_unstable();
        }
        self
    }

    pub fn sign(&self, i: usize) -> f64 {
        match &self.signs {
            Some(s) => f64::from(s[i]),
            None => 1.0,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ts: TripleSystem = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        ts.check()?;
        Ok(ts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("triple system serializes")
    }

    fn check(&self) -> Result<()> {
        for b in &self.blocks {
            if b[0] >= b[1] || b[1] >= b[2] {
                return Err(Error::Parse(format!("block {b:?} must be strictly increasing")));
            }
            if b[2] >= self.points {
                return Err(Error::Parse(format!("block {b:?} out of range for {} points", self.points)));
            }
        }
        if let Some(s) = &self.signs {
            if s.len() != self.blocks.len() {
                return Err(Error::Parse("signs and blocks differ in length".into()));
            }
            if s.iter().any(|&x| x != 1 && x != -1) {
                return Err(Error::Parse("signs must be +1 or -1".into()));
            }
        }
        Ok(())
    }
}

pub fn validate_triple_system(ts: &TripleSystem) -> Result<TripleSystemReport> {
    ts.check()?;
    let n = ts.points;
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    let mut degree = vec![0usize; n];
    for b in &ts.blocks {
        for &p in b {
            degree[p] += 1;
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            *pair_count.entry((b[i], b[j])).or_insert(0) += 1;
        }
    }
    let is_partial = pair_count.values().all(|&c| c == 1);
    let is_regular = n > 0 && degree.iter().all(|&d| d == degree[0]);
    let r = if is_regular { degree[0] } else { 0 };
    let is_steiner = is_partial && pair_count.len() == n * n.saturating_sub(1) / 2;
    Ok(TripleSystemReport { is_partial, is_regular, r, is_steiner })
}

/// `P = sum eps_B x_a x_b x_c`; Einstein with `kappa = 2r` for regular
/// partial Steiner systems.
pub fn triple_system_polynomial(ts: &TripleSystem) -> Result<CubicForm> {
    let rep = validate_triple_system(ts)?;
    if !rep.is_partial {
        return Err(Error::InvalidArgument("some pair lies in more than one block".into()));
    }
    if !rep.is_regular {
        return Err(Error::InvalidArgument("triple system is not regular".into()));
    }
    CubicForm::from_terms(ts.points, ts.blocks.iter().enumerate().map(|(i, b)| (*b, ts.sign(i))))
}

/// Lines of the projective space over the 2-element field: points are the
/// nonzero vectors of `F_2^{k+1}` numbered `sum x_i 2^(i-1)` (1-based), lines
/// are `{x, y, x xor y}`.
pub fn projective_geometry(k: usize) -> Result<TripleSystem> {
    if !(1..=6).contains(&k) {
        return Err(Error::InvalidArgument(format!("projective dimension must be in 1..=6, got {k}")));
    }
    let n = (1usize << (k + 1)) - 1;
    let mut blocks = Vec::new();
    for x in 1..=n {
        for y in x + 1..=n {
            let z = x ^ y;
            if z > y {
                blocks.push([x - 1, y - 1, z - 1]);
            }
        }
    }
    Ok(TripleSystem { points: n, blocks, signs: None })
}

/// The 15 perfect matchings of `{1..6}` as blocks on the 15 pairs
/// (pairs numbered lexicographically), signed by permutation parity.
pub fn pfaffian_triple_system() -> TripleSystem {
    let pairs = subsets(6, 2);
    let index = |p: &[usize]| pairs.iter().position(|q| q.as_slice() == p).expect("pair");
    let mut blocks = Vec::new();
    let mut signs = Vec::new();
    for a in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&x| x != a).collect();
        for &b in &rest[1..] {
            let p2 = [rest[0], b];
            let p3: Vec<usize> = rest.iter().copied().filter(|&x| x != rest[0] && x != b).collect();
            let seq = [0, a, p2[0], p2[1], p3[0], p3[1]];
            let mut blk = [index(&[0, a]), index(&p2), index(&p3)];
            blk.sort_unstable();
            blocks.push(blk);
            signs.push(permutation_sign(&seq) as i8);
        }
    }
    TripleSystem { points: 15, blocks, signs: Some(signs) }
}

pub fn ts_catalog_names() -> &'static [&'static str] {
    &["fano", "pg(2)", "pg(3)", "pg(4)", "ag2_3", "k4", "pfaff15_signed"]
}

pub fn ts_catalog(name: &str) -> Result<TripleSystem> {
    if let Some(k) = name.strip_prefix("pg(").and_then(|s| s.strip_suffix(')')) {
        let k: usize = k.parse().map_err(|_| Error::UnknownName(name.to_string()))?;
        if !(2..=4).contains(&k) {
            return Err(Error::UnknownName(name.to_string()));
        }
        return projective_geometry(k);
    }
    match name {
        "fano" => Ok(TripleSystem::from_one_based(
            7,
            &[[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]],
        )),
        "ag2_3" => Ok(TripleSystem {
            points: 9,
            blocks: vec![
                [0, 1, 2],
                [3, 4, 5],
                [6, 7, 8],
                [0, 3, 6],
                [1, 4, 7],
                [2, 5, 8],
                [0, 5, 7],
                [1, 3, 8],
                [2, 4, 6],
                [0, 4, 8],
                [1, 5, 6],
                [2, 3, 7],
            ],
            signs: None,
        }),
        "k4" => Ok(TripleSystem::from_one_based(6, &[[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6]])),
        "pfaff15_signed" => Ok(pfaffian_triple_system()),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}
