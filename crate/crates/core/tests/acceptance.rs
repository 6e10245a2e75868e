//! Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::{one_based, pfaffian_6x6, permanent, random_cubic, simplicial_oracle};
use cubicforms::analysis::{
    ass_tensor, cass_norm, classify_low_dim, compare, critical_lines, critical_lines_with_stability,
    decomposability_witness, extreme_set, fingerprint, first_difference, mkc, reflection_automorphism, CritOptions,
    Verdict,
};
use cubicforms::combinatorics::{
    frame_catalog, frame_polynomial, pfaffian_triple_system, triple_system_polynomial, ts_catalog,
};
use cubicforms::constructors::{
    affine_extension, block_to_kronecker, cartan_isoparametric, catalog, catalog_names, extend, parahurwitzification,
    simplicial, tensor_product, triple,
};
use cubicforms::linalg::{dot, gaussian_vector, normalized, random_orthogonal, seeded_rng};
use cubicforms::tensor_core::DEFAULT_TOL;
use cubicforms::CubicForm;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn opts() -> CritOptions {
    CritOptions::default()
}

fn form(name: &str) -> CubicForm {
    catalog(name).unwrap().form
}

fn sts(name: &str) -> CubicForm {
    triple_system_polynomial(&ts_catalog(name).unwrap()).unwrap()
}

fn basepoly() -> CubicForm {
    one_based(3, &[([1, 2, 3], 1.0)])
}

fn einstein_kappa(p: &CubicForm) -> Result<f64, String> {
    let r = p.verify_einstein(DEFAULT_TOL);
    if r.is_einstein {
        Ok(r.kappa)
    } else {
        Err(format!("not Einstein (harmonic defect {:e}, off-diagonal {:e})", r.harmonic_defect, r.off_diag_defect))
    }
}

fn kappa_table() -> Outcome {
    let mut cases: Vec<(String, CubicForm, f64)> =
        (2..=8).map(|n| (format!("simplicial({n})"), simplicial(n).unwrap(), (n * (n - 1)) as f64)).collect();
    cases.push(("fano".into(), sts("fano"), 6.0));
    cases.push(("ag2_3".into(), sts("ag2_3"), 8.0));
    cases.push(("k4".into(), sts("k4"), 4.0));
    for (name, k) in [("d2poly2", 4.0), ("pfaff15", 6.0), ("immanant9", 2.0), ("permanent9", 4.0)] {
        cases.push((name.into(), form(name), k));
    }
    for (m, k) in [(1, 126.0), (2, 180.0), (4, 288.0), (8, 504.0)] {
        cases.push((format!("cartan({m})"), cartan_isoparametric(m).unwrap(), k));
    }
    cases.push(("etf_6_16".into(), frame_polynomial(&frame_catalog("etf_6_16").unwrap()).unwrap(), 64.0 / 27.0));
    cases.push(("etf_7_28".into(), frame_polynomial(&frame_catalog("etf_7_28").unwrap()).unwrap(), 32.0 / 9.0));
    let mut worst = 0.0f64;
    for (name, p, want) in &cases {
        let k = einstein_kappa(p).map_err(|e| format!("{name}: {e}"))?;
        ensure(rel(k, *want) <= 1e-9, || format!("{name}: kappa {k} vs {want}"))?;
        worst = worst.max(rel(k, *want));
    }
    Ok(format!("{} forms, max relative error {worst:.1e}", cases.len()))
}

fn mkc_values() -> Outcome {
    let mut cases: Vec<(String, CubicForm, f64)> =
        (2..=6).map(|n| (format!("simplicial({n})"), simplicial(n).unwrap(), n as f64 / (n as f64 - 1.0))).collect();
    cases.push(("fano".into(), sts("fano"), 7.0 / 6.0));
    cases.push(("ag2_3".into(), sts("ag2_3"), 9.0 / 8.0));
    cases.push(("lazero".into(), form("lazero"), 2.0));
    cases.push(("minusonethird".into(), form("minusonethird"), 4.0 / 3.0));
    let mut worst = 0.0f64;
    for (name, p, want) in &cases {
        let m = mkc(p, &opts()).map_err(|e| format!("{name}: {e}"))?;
        ensure((m - want).abs() <= 1e-6, || format!("{name}: mkc {m} vs {want}"))?;
        worst = worst.max((m - want).abs());
    }
    Ok(format!("{} forms, max error {worst:.1e}", cases.len()))
}

fn minusonethird_lines() -> Outcome {
    let set = critical_lines_with_stability(&form("minusonethird"), &opts());
    ensure(set.lines.len() == 15, || format!("{} lines", set.lines.len()))?;
    ensure(set.stable == Some(true), || "line count changed when the budget doubled".into())?;
    let top = set.lines.iter().map(|l| l.weight).fold(0.0, f64::max);
    let count = |w: f64| set.lines.iter().filter(|l| (l.weight / top - w).abs() <= 1e-6).count();
    let (a, b) = (count(1.0), count(2.0 / 27.0));
    ensure(a == 5 && b == 10, || format!("{a} lines at weight 1, {b} at 2/27"))?;
    Ok(format!("15 lines ({} starts, stable), 5 at weight 1, 10 at 2/27", set.starts))
}

fn simplicial_extremes() -> Outcome {
    for n in 2..=8 {
        let e = extreme_set(&simplicial(n).unwrap(), &opts()).map_err(|e| e.to_string())?;
        ensure(e.len() == n + 1, || format!("n={n}: {} maximizers", e.len()))?;
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                let ip = dot(&e[a], &e[b]);
                ensure((ip + 1.0 / n as f64).abs() <= 1e-6, || format!("n={n}: inner product {ip}"))?;
            }
        }
        let sum = (0..n).map(|i| e.iter().map(|v| v[i]).sum::<f64>().abs()).fold(0.0, f64::max);
        ensure(sum <= 1e-6, || format!("n={n}: sum {sum}"))?;
    }
    Ok("n = 2..8".into())
}

fn cass_dichotomy() -> Outcome {
    let mut zero = 0.0f64;
    for n in 3..=6 {
        let c = cass_norm(&simplicial(n).unwrap()).map_err(|e| e.to_string())?;
        ensure(c <= 1e-8, || format!("simplicial({n}): {c:e}"))?;
        zero = zero.max(c);
    }
    let fano = cass_norm(&sts("fano")).map_err(|e| e.to_string())?;
    ensure(fano <= 1e-8, || format!("fano: {fano:e}"))?;
    let ag = cass_norm(&sts("ag2_3")).map_err(|e| e.to_string())?;
    ensure(ag >= 1e-2, || format!("ag2_3: {ag}"))?;
    Ok(format!("simplicial max {:.1e}, fano {fano:.1e}, ag2_3 {ag:.4}", zero))
}

fn classifier_round_trip() -> Outcome {
    let mut rng = seeded_rng(1001);
    for (name, lambda) in [("lazero", 0.0), ("minusonethird", -1.0 / 3.0)] {
        for i in 0..20 {
            let g = random_orthogonal(&mut rng, 4);
            let p = form(name).act_orthogonal(&g).unwrap();
            let c = classify_low_dim(&p, &opts()).map_err(|e| format!("{name} #{i}: {e}"))?;
            ensure(c.label == name, || format!("{name} #{i}: classified as {}", c.label))?;
            let l = c.lambda.unwrap();
            ensure((l - lambda).abs() <= 1e-6, || format!("{name} #{i}: lambda {l}"))?;
        }
    }
    let p2 = form("two_d");
    for (what, p) in [("parahurwitz(P2)", parahurwitzification(&p2)), ("P2 x P2", tensor_product(&p2, &p2))] {
        let c = classify_low_dim(&p, &opts()).map_err(|e| format!("{what}: {e}"))?;
        ensure(c.label == "lazero", || format!("{what}: {}", c.label))?;
    }
    Ok("40 conjugates recovered; parahurwitz(P2) and P2 x P2 are lazero".into())
}

fn construction_identities() -> Outcome {
    let mut p = simplicial(2).unwrap();
    for n in 3..=8 {
        p = extend(&p, (n * (n - 1)) as f64).map_err(|e| e.to_string())?;
        let d = p.max_coeff_diff(&simplicial_oracle(n));
        ensure(d <= 1e-12, || format!("extend chain at n={n}: {d:e}"))?;
    }
    let d = triple(&basepoly()).max_coeff_diff(&permanent());
    ensure(d <= 1e-12, || format!("triple(x1x2x3) vs permanent: {d:e}"))?;
    let mut rng = seeded_rng(1002);
    for n in 1..=5 {
        let p = random_cubic(&mut rng, n);
        let t = triple(&p).relabel(&block_to_kronecker(n, 3)).unwrap();
        let d = t.max_coeff_diff(&tensor_product(&p, &basepoly()));
        ensure(d <= 1e-12, || format!("triple vs tensor product at n={n}: {d:e}"))?;
        let h = parahurwitzification(&p).relabel(&block_to_kronecker(n, 2)).unwrap();
        let d = h.max_coeff_diff(&tensor_product(&p, &form("two_d")));
        ensure(d <= 1e-12, || format!("parahurwitz vs tensor product at n={n}: {d:e}"))?;
    }
    let pf = triple_system_polynomial(&pfaffian_triple_system()).unwrap();
    let d = pf.max_coeff_diff(&pfaffian_6x6());
    ensure(d <= 1e-12, || format!("signed PSTS vs Pfaffian: {d:e}"))?;
    Ok("extend chain n<=8, triple/parahurwitz relabelings, Pfaffian".into())
}

fn isoparametric() -> Outcome {
    let mut worst = 0.0f64;
    for m in [1, 2, 4, 8] {
        let p = cartan_isoparametric(m).unwrap();
        let mut rng = seeded_rng(2000 + m as u64);
        for _ in 0..1000 {
            let x = gaussian_vector(&mut rng, p.dim());
            let g = p.gradient(&x).unwrap();
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let ratio = g.iter().map(|v| v * v).sum::<f64>() / (9.0 * r2 * r2);
            ensure((ratio - 1.0).abs() <= 1e-9, || format!("m={m}: ratio {ratio}"))?;
            worst = worst.max((ratio - 1.0).abs());
        }
    }
    Ok(format!("m = 1,2,4,8 at 1000 points each, max deviation {worst:.1e}"))
}

fn property_suites() -> Outcome {
    let mut rng = seeded_rng(1003);
    // Gradient against central differences, Euler identities.
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let p = random_cubic(&mut rng, n);
        let x = gaussian_vector(&mut rng, n);
        let g = p.gradient(&x).unwrap();
        let h = 1e-5;
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        for i in 0..n {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[i] += h;
            xm[i] -= h;
            let fd = (p.eval(&xp).unwrap() - p.eval(&xm).unwrap()) / (2.0 * h);
            ensure((fd - g[i]).abs() / gnorm < 1e-6, || format!("gradient component {i}: {} vs {fd}", g[i]))?;
        }
        let val = p.eval(&x).unwrap();
        let scale = p.coeff_norm() * dot(&x, &x).powf(1.5);
        let euler1 = (dot(&x, &g) - 3.0 * val).abs();
        ensure(euler1 <= 1e-12 * scale.max(1.0), || format!("x.grad P - 3P = {euler1:e}"))?;
        let hx = p.hessian(&x).unwrap() * nalgebra::DVector::from_column_slice(&x);
        let euler2 = (0..n).map(|i| (hx[i] - 2.0 * g[i]).abs()).fold(0.0, f64::max);
        ensure(euler2 <= 1e-12 * scale.max(1.0), || format!("Hess x - 2 grad = {euler2:e}"))?;
    }
    // Affine extension ass identity on 50 random cubics.
    for t in 0..50 {
        let n = rng.gen_range(2..=5);
        let p = random_cubic(&mut rng, n);
        let a = ass_tensor(&p).unwrap();
        let ah = ass_tensor(&affine_extension(&p)).unwrap();
        let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    for l in 0..=n {
                        let want = if i.max(j).max(k).max(l) == n {
                            0.0
                        } else {
                            a.get(i, j, k, l) + d(j, k) * d(i, l) - d(i, k) * d(j, l)
                        };
                        let got = ah.get(i, j, k, l);
                        ensure((got - want).abs() <= 1e-9, || format!("affine ass #{t} at {i}{j}{k}{l}: {got} vs {want}"))?;
                    }
                }
            }
        }
    }
    // Fingerprint invariance under 20 conjugations per catalog Einstein form.
    let mut checked = 0;
    for name in catalog_names() {
        let p = form(name);
        if !p.is_einstein() {
            continue;
        }
        let f0 = fingerprint(&p, &opts()).map_err(|e| format!("{name}: {e}"))?;
        for i in 0..20 {
            let g = random_orthogonal(&mut rng, p.dim());
            let q = p.act_orthogonal(&g).unwrap().rescale(rng.gen_range(0.25..4.0));
            let f1 = fingerprint(&q, &opts()).map_err(|e| format!("{name}: {e}"))?;
            if let Some(field) = first_difference(&f0, &f1) {
                return Err(format!("{name} conjugate #{i}: fingerprint differs in {field}"));
            }
        }
        checked += 1;
    }
    // Zero reflections are automorphisms.
    let mut reflections = 0;
    for p in (3..=6).map(|n| simplicial(n).unwrap()).chain([basepoly(), form("d2poly2"), form("minusonethird")]) {
        let lines = critical_lines(&p, &opts());
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        for a in 0..lines.lines.len().min(12) {
            for b in a + 1..lines.lines.len().min(12) {
                let (u, v) = (&lines.lines[a].generator, &lines.lines[b].generator);
                candidates.push(u.iter().zip(v).map(|(x, y)| x - y).collect());
            }
        }
        candidates.extend((0..p.dim()).map(|i| (0..p.dim()).map(|j| if i == j { 1.0 } else { 0.0 }).collect()));
        for r in candidates {
            if dot(&r, &r) < 1e-12 || !reflection_automorphism(&p, &r, 1e-9).unwrap() {
                continue;
            }
            reflections += 1;
            let u = normalized(&r);
            for _ in 0..100 {
                let x = gaussian_vector(&mut rng, p.dim());
                let t = 2.0 * dot(&x, &u);
                let sx: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a - t * b).collect();
                let (a, b) = (p.eval(&x).unwrap(), p.eval(&sx).unwrap());
                ensure((a - b).abs() <= 1e-9 * a.abs().max(1.0), || format!("reflection changed P: {a} vs {b}"))?;
            }
        }
    }
    ensure(reflections > 0, || "no zero reflections found".into())?;
    Ok(format!("gradient/Euler on 200 cubics, affine ass on 50, fingerprints of {checked} forms x 20, {reflections} reflections"))
}

fn decomposability() -> Outcome {
    let witness = |p: &CubicForm| decomposability_witness(p, &critical_lines(p, &opts()).lines, 1e-7);
    for name in ["poly3", "lazero", "d2poly2"] {
        ensure(witness(&form(name)).is_some(), || format!("{name}: no witness"))?;
    }
    for (name, p) in [
        ("two_d", form("two_d")),
        ("basepoly", basepoly()),
        ("minusonethird", form("minusonethird")),
        ("simplicial(5)", simplicial(5).unwrap()),
    ] {
        ensure(witness(&p).is_none(), || format!("{name}: spurious witness"))?;
    }
    Ok("witnesses for poly3, lazero, d2poly2; none for P2, basepoly, minusonethird, simplicial(5)".into())
}

fn separations() -> Outcome {
    let o = opts();
    let v = compare(&form("triple_parahurwitz"), &form("d2poly2"), &o).map_err(|e| e.to_string())?;
    ensure(matches!(v, Verdict::Distinguished(_)), || format!("triple_parahurwitz vs d2poly2: {v}"))?;
    let v1 = v.to_string();
    let v = compare(&sts("ag2_3"), &simplicial(9).unwrap(), &o).map_err(|e| e.to_string())?;
    ensure(v == Verdict::Distinguished("cass_norm".into()), || format!("ag2_3 vs simplicial(9): {v}"))?;
    let p2 = simplicial(2).unwrap();
    let v = compare(&tensor_product(&p2, &p2), &simplicial(4).unwrap(), &o).map_err(|e| e.to_string())?;
    ensure(v == Verdict::Distinguished("mkc".into()), || format!("P2 x P2 vs simplicial(4): {v}"))?;
    let v = compare(&sts("fano"), &simplicial(7).unwrap(), &o).map_err(|e| e.to_string())?;
    ensure(v == Verdict::IndistinguishableByInvariants, || format!("fano vs simplicial(7): {v}"))?;
    Ok(format!("triple_parahurwitz/d2poly2 {v1}; ag2_3/simplicial(9) cass_norm; P2xP2/simplicial(4) mkc; fano ~ simplicial(7)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("kappa table", kappa_table),
        ("mkc values", mkc_values),
        ("minusonethird critical lines", minusonethird_lines),
        ("simplicial extreme sets", simplicial_extremes),
        ("conformal associativity dichotomy", cass_dichotomy),
        ("classifier round trip", classifier_round_trip),
        ("construction identities", construction_identities),
        ("isoparametric identity", isoparametric),
        ("property suites", property_suites),
        ("decomposability", decomposability),
        ("orbit separations", separations),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
