use crate::tensor_core::{CubicForm, Triple};
use crate::{Error, Result};

use super::pfaffian_form;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: usize,
    pub kappa_expected: Option<f64>,
    pub form: CubicForm,
    pub notes: &'static str,
}

const NAMES: [&str; 13] = [
    "basepoly",
    "two_d",
    "poly3",
    "minusonethird",
    "lazero",
    "d2poly2",
    "triple_parahurwitz",
    "permanent9",
    "det9",
    "immanant9",
    "sym3det",
    "pfaff15",
    "lanminusone5",
];

pub fn catalog_names() -> &'static [&'static str] {
    &NAMES
}

/// Terms given with 1-based variable numbers.
fn one_based(dim: usize, terms: &[([usize; 3], f64)]) -> CubicForm {
    let t = terms.iter().map(|(i, c)| ([i[0] - 1, i[1] - 1, i[2] - 1] as Triple, *c));
    CubicForm::from_terms(dim, t).expect("catalog terms are valid")
}

/// The 3x3 matrix monomials `x_{1,s(1)} x_{2,s(2)} x_{3,s(3)}`, row-major
/// numbering, even permutations first.
const PERM_TERMS: [[usize; 3]; 6] = [[1, 5, 9], [2, 6, 7], [3, 4, 8], [1, 6, 8], [2, 4, 9], [3, 5, 7]];

pub fn catalog(name: &str) -> Result<CatalogEntry> {
    let s2 = 2f64.sqrt();
    let s5 = 5f64.sqrt();
    let (dim, kappa, notes, form) = match name {
        "basepoly" => (3, Some(2.0), "x1 x2 x3", one_based(3, &[([1, 2, 3], 1.0)])),
        "two_d" => (
            2,
            Some(2.0),
            "(x1^3 - 3 x1 x2^2)/6; the harmonic cubic on the plane",
            one_based(2, &[([1, 1, 1], 1.0 / 6.0), ([1, 2, 2], -0.5)]),
        ),
        "poly3" => (
            4,
            Some(4.0),
            "x4^3/6 - x4(x1^2 + x2^2 - x3^2)/2 + x1 x2 x3; orthogonally decomposable",
            one_based(4, &[([4, 4, 4], 1.0 / 6.0), ([1, 1, 4], -0.5), ([2, 2, 4], -0.5), ([3, 3, 4], 0.5), ([1, 2, 3], 1.0)]),
        ),
        "minusonethird" => {
            // sqrt(3 kappa)/12 (x4^3 - x4|x|^2 + 2 sqrt5 x1x2x3) at kappa = 12
            let c = 0.5;
            (
                4,
                Some(12.0),
                "4-d normal form with lambda = -1/3 (simplicial class)",
                one_based(4, &[([4, 4, 4], c), ([1, 1, 4], -c), ([2, 2, 4], -c), ([3, 3, 4], -c), ([1, 2, 3], 2.0 * s5 * c)]),
            )
        }
        "lazero" => {
            // sqrt(2 kappa)/12 (x4^3 - 3x4x3^2 + 3x1^2x2 - x2^3) at kappa = 12
            let c = 24f64.sqrt() / 12.0;
            (
                4,
                Some(12.0),
                "4-d normal form with lambda = 0 (decomposable class)",
                one_based(4, &[([4, 4, 4], c), ([3, 3, 4], -3.0 * c), ([1, 1, 2], 3.0 * c), ([2, 2, 2], -c)]),
            )
        }
        "d2poly2" => (
            6,
            Some(4.0),
            "x1x2x3 + x1x4x5 + x2x4x6 + x3x5x6; sum of two orthogonal products",
            one_based(6, &[([1, 2, 3], 1.0), ([1, 4, 5], 1.0), ([2, 4, 6], 1.0), ([3, 5, 6], 1.0)]),
        ),
        "triple_parahurwitz" => (
            6,
            Some(4.0),
            "x1x3x5 - x1x4x6 - x2x3x6 - x2x4x5; sign change of d2poly2, indecomposable",
            one_based(6, &[([1, 3, 5], 1.0), ([1, 4, 6], -1.0), ([2, 3, 6], -1.0), ([2, 4, 5], -1.0)]),
        ),
        "permanent9" => {
            let t: Vec<_> = PERM_TERMS.iter().map(|i| (*i, 1.0)).collect();
            (9, Some(4.0), "permanent of a 3x3 matrix", one_based(9, &t))
        }
        "det9" => {
            let t: Vec<_> = PERM_TERMS.iter().enumerate().map(|(k, i)| (*i, if k < 3 { 1.0 } else { -1.0 })).collect();
            (9, None, "determinant of a 3x3 matrix (so(3) tensor so(3)); kappa measured", one_based(9, &t))
        }
        "immanant9" => (
            9,
            Some(2.0),
            "x1x5x9 - x2x6x7 - x3x4x8; the (2,1) immanant after diagonal rescaling",
            one_based(9, &[([1, 5, 9], 1.0), ([2, 6, 7], -1.0), ([3, 4, 8], -1.0)]),
        ),
        "sym3det" => (
            6,
            None,
            "determinant of a symmetric 3x3 matrix in (x11,x22,x33,x12,x13,x23); |Hess|^2 = 3|x|^2 but not harmonic",
            one_based(6, &[([1, 2, 3], 1.0), ([1, 6, 6], -0.5), ([2, 5, 5], -0.5), ([3, 4, 4], -0.5), ([4, 5, 6], 1.0 / s2)]),
        ),
        "pfaff15" => (15, Some(6.0), "pfaffian cubic on 2-forms in 6 variables", pfaffian_form(1)?),
        "lanminusone5" => (
            5,
            Some(72.0),
            "x5^3 - 3x5x4^2 + 6 x1x2x3; split sum with a planar factor",
            one_based(5, &[([5, 5, 5], 1.0), ([4, 4, 5], -3.0), ([1, 2, 3], 6.0)]),
        ),
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    let name = NAMES.iter().find(|n| **n == name).expect("listed");
    Ok(CatalogEntry { name, dim, kappa_expected: kappa, form, notes })
}
