//! Real composition algebras of dimension 1, 2, 4, 8 by Cayley-Dickson
//! doubling.
//!
//! An element of the doubled algebra is a pair `(a, b)` stored as the
//! concatenation of coordinates, with product
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
//! The basis `e_0, ..., e_{m-1}` is the coordinate basis, `e_0 = 1`; for the
//! octonions `e_4..e_7` are the second copy of the quaternions `e_0..e_3`.

pub fn conj(x: &[f64]) -> Vec<f64> {
    x.iter().enumerate().map(|(i, &v)| if i == 0 { v } else { -v }).collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 1 {
        return vec![a[0] * b[0]];
    }
    let h = n / 2;
    let (a1, a2) = a.split_at(h);
    let (b1, b2) = b.split_at(h);
    let p = mul(a1, b1);
    let q = mul(&conj(b2), a2);
    let r = mul(b2, a1);
    let s = mul(a2, &conj(b1));
    let mut out: Vec<f64> = p.iter().zip(&q).map(|(x, y)| x - y).collect();
    out.extend(r.iter().zip(&s).map(|(x, y)| x + y));
    out
}

pub fn basis(m: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; m];
    e[i] = 1.0;
    e
}
