//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use fibermahler::alexander::{abelian_cover_alexander, ManifoldRecord};
use fibermahler::lpoly::{big_to_f64, char_poly_big, extended_cyclotomic};
use fibermahler::mahler::{is_extended_cyclotomic_product, mahler_multivariate, mahler_univariate};
use fibermahler::pipeline::{run_pipeline, PipelineConfig};
use fibermahler::surfcover::{
    is_intertwiner, lifts, mat_mul, pushforward_matrix, spectral_radius, subgroups, to_big,
    FreeAutomorphism, IntMatrix, PermCover,
};
use fibermahler::torsion::{
    growth_series, monodromy_presentation, torsion_abelian_cover_snf, torsion_cyclic_cover,
    CoverSpec, DEFAULT_DIMENSION_CAP,
};
use fibermahler::{LaurentPoly, MahlerMethod};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn poly(coeffs: &[i64]) -> LaurentPoly {
    LaurentPoly::from_coeffs(coeffs)
}

fn lehmer() -> LaurentPoly {
    poly(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

/// Mahler measure from the eigenvalues of the companion matrix.
fn companion_measure(p: &LaurentPoly) -> f64 {
    let (_, c) = p.univariate_coeffs();
    let c: Vec<f64> = c.iter().map(big_to_f64).collect();
    let n = c.len() - 1;
    let lead = c[n];
    if n == 0 {
        return lead.abs();
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eig = m.complex_eigenvalues();
    lead.abs() * eig.iter().map(|z| z.norm().max(1.0)).product::<f64>()
}

/// Midpoint rule for the circle mean of `log |p|`.
fn circle_mean_log(p: &LaurentPoly, n: usize) -> f64 {
    let (_, c) = p.univariate_coeffs();
    let c: Vec<f64> = c.iter().map(big_to_f64).collect();
    let mut sum = 0.0;
    for j in 0..n {
        let z = Complex64::from_polar(1.0, TAU * (j as f64 + 0.5) / n as f64);
        let v = c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
        sum += v.norm().ln();
    }
    sum / n as f64
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let golden = mahler_univariate(&poly(&[1, -3, 1])).map_err(|e| e.to_string())?;
    let want = (3.0 + 5f64.sqrt()) / 2.0;
    ensure((golden.value - want).abs() < 1e-9, || {
        format!("M(t^2-3t+1) = {}", golden.value)
    })?;
    let l = mahler_univariate(&lehmer()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((l.value - 1.17628081826).abs() < 1e-8, || {
        format!("M(Lehmer) = {}", l.value)
    })?;
    let oracle = companion_measure(&lehmer());
    ensure((l.value - oracle).abs() < 1e-8, || {
        format!("companion oracle {oracle}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "M = {:.12}, {:.12} in {elapsed:.2?}",
        golden.value, l.value
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let deg = rng.gen_range(1..=12);
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if c[deg] == 0 {
            c[deg] = 1;
        }
        let p = poly(&c);
        let roots = mahler_univariate(&p).map_err(|e| e.to_string())?.value;
        let quad = circle_mean_log(&p, 1 << 20).exp();
        let diff = (roots - quad).abs();
        worst = worst.max(diff);
        ensure(diff < 1e-5, || {
            format!("{p}: roots {roots} vs quadrature {quad}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("max difference {worst:.2e} in {elapsed:.2?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let p =
        LaurentPoly::from_terms(2, [(vec![1, 0], 1), (vec![0, 1], 1), (vec![0, 0], 1)]).unwrap();
    // the quadrature always refines once, so start one level lower with a
    // tolerance that accepts the first refinement
    let m2048 = mahler_multivariate(&p, 1024, 1.0)
        .map_err(|e| e.to_string())?
        .value;
    let m4096 = mahler_multivariate(&p, 2048, 1.0)
        .map_err(|e| e.to_string())?
        .value;
    ensure((m2048 - m4096).abs() < 1e-3, || {
        format!("{m2048} vs {m4096}")
    })?;
    let n = 2048;
    let mut sum = 0.0;
    for i in 0..n {
        let x = Complex64::from_polar(1.0, TAU * (i as f64 + 0.5) / n as f64);
        for j in 0..n {
            let y = Complex64::from_polar(1.0, TAU * (j as f64 + 0.5) / n as f64);
            sum += (1.0 + x + y).norm().ln();
        }
    }
    let dense = (sum / (n * n) as f64).exp();
    ensure((m4096 - dense).abs() < 1e-3, || {
        format!("{m4096} vs dense {dense}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "grid 2048 {m2048:.8}, grid 4096 {m4096:.8}, dense {dense:.8} in {elapsed:.2?}"
    ))
}

fn criterion_4() -> Outcome {
    let entries: Vec<i64> = (-3..=3).filter(|&v| v != 0).collect();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for vars in [2usize, 3] {
        let mut vs: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..vars {
            vs = vs
                .into_iter()
                .flat_map(|v| entries.iter().map(move |&e| [v.clone(), vec![e]].concat()))
                .collect();
        }
        let grid = if vars == 2 { 32 } else { 8 };
        for n in 1..=12 {
            for v in &vs {
                let p = extended_cyclotomic(n, v).map_err(|e| e.to_string())?;
                let q =
                    mahler_multivariate(&p, grid, 1e-6).map_err(|e| format!("{n} {v:?}: {e}"))?;
                worst = worst.max((q.value - 1.0).abs());
                ensure((q.value - 1.0).abs() < 1e-6, || {
                    format!("n = {n}, v = {v:?}: M = {}", q.value)
                })?;
                let detected = is_extended_cyclotomic_product(&p, std::slice::from_ref(&p))
                    .map_err(|e| e.to_string())?;
                ensure(detected, || format!("detector rejected n = {n}, v = {v:?}"))?;
                checked += 1;
            }
        }
    }
    for p in [poly(&[1, -3, 1]), lehmer()] {
        let detected = is_extended_cyclotomic_product(&p, std::slice::from_ref(&p))
            .map_err(|e| e.to_string())?;
        ensure(!detected, || format!("detector accepted {p}"))?;
    }
    Ok(format!(
        "{checked} polynomials, max |M - 1| = {worst:.1e}; non-cyclotomic inputs rejected"
    ))
}

fn two_var(terms: &[([i64; 2], i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
}

fn criterion_5() -> Outcome {
    let fixtures = [
        two_var(&[([1, 0], 1), ([0, 1], 1), ([0, 0], 1)]),
        two_var(&[([1, 1], 1), ([1, 0], -3), ([0, 0], 1)]),
        two_var(&[([2, 0], 1), ([1, 1], -3), ([0, 0], 2), ([0, 2], 1)]),
        two_var(&[([2, 1], 1), ([1, 0], -1), ([1, 1], -1), ([0, 0], 1)]),
        two_var(&[([3, 0], 1), ([1, 2], 2), ([0, 1], -1), ([0, 0], 1)]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for delta in &fixtures {
        for k in 2..=4u64 {
            for j in 0..2 {
                let cover = abelian_cover_alexander(delta, k, &[j]).map_err(|e| e.to_string())?;
                for _ in 0..20 {
                    let t = [
                        Complex64::from_polar(1.0, TAU * rng.gen::<f64>()),
                        Complex64::from_polar(1.0, TAU * rng.gen::<f64>()),
                    ];
                    let mut product = 1.0;
                    for i in 0..k {
                        let mut s = t;
                        s[j] *= Complex64::from_polar(1.0, TAU * i as f64 / k as f64);
                        product *= delta.eval_complex(&s).norm();
                    }
                    let got = cover.eval_complex(&t).norm();
                    let rel = (got - product).abs() / product.max(1e-300);
                    worst = worst.max(rel);
                    ensure(rel < 1e-9 || (got - product).abs() < 1e-12, || {
                        format!("{delta}, k = {k}, twist {j}: {got} vs {product}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "5 fixtures x k in 2..=4 x 20 points, max relative error {worst:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let text = std::fs::read_to_string(fixture("tri.json")).map_err(|e| e.to_string())?;
    let rec = ManifoldRecord::from_json(&text).map_err(|e| e.to_string())?;
    let report = run_pipeline(&rec, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let s3 = report.statement3.ok_or("no statement 3")?;
    ensure(s3.k == 4, || format!("k = {}", s3.k))?;
    // slices 1 + x + i^a, measured by the companion-matrix oracle
    let mut product = 1.0;
    for a in 0..4 {
        let w = Complex64::from_polar(1.0, TAU * a as f64 / 4.0);
        let c0 = Complex64::new(1.0, 0.0) + w;
        product *= c0.norm().max(1.0);
    }
    let m = s3.mahler.value;
    let combined = 1e-6 + s3.mahler.error_estimate;
    ensure((m - product).abs() < combined, || {
        format!("M(pullback) {m} vs product {product}")
    })?;
    ensure((s3.character_product - product).abs() < combined, || {
        format!("library product {} vs {product}", s3.character_product)
    })?;
    ensure(m > 1.0, || format!("M(pullback) = {m}"))?;
    let oracle = companion_measure(&s3.pullback);
    ensure((m - oracle).abs() < 1e-6, || {
        format!("companion oracle {oracle}")
    })?;
    Ok(format!(
        "M(pullback) = {m:.10}, product of slice measures = {product:.10}"
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let phi = vec![vec![2, 1], vec![1, 1]];
    let pres = monodromy_presentation(&phi);
    let delta = poly(&[1, -3, 1]);
    let at_one: BigInt = delta.terms().map(|(_, c)| c.clone()).sum();
    let at_one = if at_one < BigInt::from(0) {
        -at_one
    } else {
        at_one
    };
    for n in 1..=12u64 {
        let snf =
            torsion_abelian_cover_snf(&pres, &CoverSpec::cyclic(n).unwrap(), DEFAULT_DIMENSION_CAP)
                .map_err(|e| e.to_string())?;
        let res = torsion_cyclic_cover(&delta, n).map_err(|e| e.to_string())?;
        ensure(snf.torsion == &at_one * &res, || {
            format!("n = {n}: SNF {} vs {}", snf.torsion, res)
        })?;
    }
    let series = growth_series(&delta, 30).map_err(|e| e.to_string())?;
    let g = series[29].log_growth.ok_or("no growth value at n = 30")?;
    let target = 2.6180f64.ln();
    ensure((g - target).abs() < 0.05 * target, || {
        format!("growth {g} vs {target}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "n <= 12 exact, growth at 30 = {g:.6} (log 2.618 = {target:.6}) in {elapsed:.2?}"
    ))
}

fn automorphisms() -> Vec<FreeAutomorphism> {
    ["identity", "cat_map", "swap", "conjugation", "rotation"]
        .iter()
        .map(|n| {
            let text = std::fs::read_to_string(fixture(&format!("{n}.json"))).unwrap();
            serde_json::from_str(&text).unwrap()
        })
        .collect()
}

fn divides(base: &IntMatrix, lift: &IntMatrix) -> bool {
    let cb = char_poly_big(base).unwrap();
    let cl = char_poly_big(lift).unwrap();
    cl.exact_div(&cb).is_some()
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for phi in automorphisms() {
        let base = to_big(&phi.abelianization());
        let base_radius = spectral_radius(&base).map_err(|e| e.to_string())?;
        for d in 1..=4 {
            for cover in subgroups(2, d) {
                let p = pushforward_matrix(&cover);
                for lift in lifts(&cover, &phi).map_err(|e| e.to_string())? {
                    let l = &lift.homology_matrix;
                    let name = phi.name().unwrap_or("?");
                    ensure(
                        is_intertwiner(&cover, &cover, phi.images(), &lift.tau),
                        || format!("{name}: bad tau"),
                    )?;
                    ensure(mat_mul(&p, l) == mat_mul(&base, &p), || {
                        format!("{name}: P L != C P")
                    })?;
                    ensure(divides(&base, l), || {
                        format!("{name}: char poly does not divide")
                    })?;
                    let r = spectral_radius(l).map_err(|e| e.to_string())?;
                    ensure(r >= base_radius - 1e-9, || {
                        format!("{name}: radius {r} < {base_radius}")
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!(
        "{count} lifts checked over all covers of degree <= 4"
    ))
}

fn transitive(a: &[usize], b: &[usize]) -> bool {
    let d = a.len();
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(p) = stack.pop() {
        for q in [a[p], b[p]] {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for i in 0..d {
            let mut q = p.clone();
            q.insert(i, d - 1);
            out.push(q);
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for (d, want) in [(2usize, 3u128), (3, 26)] {
        let perms = permutations(d);
        let brute = perms
            .iter()
            .flat_map(|a| perms.iter().map(move |b| (a, b)))
            .filter(|(a, b)| transitive(a, b))
            .count() as u128;
        let census = fibermahler::surfcover::cover_census(2, d, 7).map_err(|e| e.to_string())?;
        ensure(brute == want, || format!("brute force d = {d}: {brute}"))?;
        ensure(census.transitive_count == brute, || {
            format!(
                "d = {d}: census {} vs brute force {brute}",
                census.transitive_count
            )
        })?;
        let covers = fibermahler::surfcover::enumerate_covers(2, d).map_err(|e| e.to_string())?;
        ensure(covers.iter().all(|c: &PermCover| c.degree() == d), || {
            "wrong degree".into()
        })?;
        parts.push(format!("d = {d}: {brute}"));
    }
    Ok(parts.join(", "))
}

fn run_binary(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fibermahler"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let eight = fixture("figure_eight.json");
    let cyc = fixture("cyclotomic.json");
    let eight = eight.to_str().unwrap();
    let cyc = cyc.to_str().unwrap();
    for format in ["machine", "text"] {
        for path in [eight, cyc] {
            let a = run_binary(&["--format", format, "pipeline", path])?;
            let b = run_binary(&["--format", format, "pipeline", path])?;
            ensure(a == b, || format!("{path}: reruns differ ({format})"))?;
        }
    }
    let parse = |path: &str| -> Result<serde_json::Value, String> {
        serde_json::from_slice(&run_binary(&["--format", "machine", "pipeline", path])?)
            .map_err(|e| e.to_string())
    };
    let e = parse(eight)?;
    for s in ["statement1", "statement2", "statement3"] {
        ensure(e[s]["holds"] == true, || {
            format!("figure-eight {s} does not hold")
        })?;
    }
    let c = parse(cyc)?;
    ensure(c["statement2"]["holds"] == false, || {
        "cyclotomic statement2 holds".into()
    })?;
    ensure(
        c["statement2"]["mahler"]["method"] == MahlerMethod::ExactOne.to_string().as_str(),
        || format!("method {}", c["statement2"]["mahler"]["method"]),
    )?;
    Ok(
        "figure-eight (1)(2)(3) true; cyclotomic (2) false via exact_one; reruns byte-identical"
            .into(),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Mahler exactness", criterion_1),
        ("Jensen equivalence", criterion_2),
        ("multivariate quadrature", criterion_3),
        ("Boyd criterion", criterion_4),
        ("character-product exactness", criterion_5),
        ("pullback product formula", criterion_6),
        ("torsion cross-verification", criterion_7),
        ("lift divisibility suite", criterion_8),
        ("cover census", criterion_9),
        ("pipeline end-to-end", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
