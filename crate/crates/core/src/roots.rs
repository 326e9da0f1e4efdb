//! Simultaneous polynomial root refinement (Aberth–Ehrlich) over `C`.
//!
//! Initial approximations are placed on circles whose radii come from the
//! upper convex hull of the Newton polygon `(k, log|c_k|)`, which keeps the
//! iteration count low for polynomials whose roots have widely different
//! moduli.

use num_complex::Complex64;

const EPS: f64 = f64::EPSILON;
const MAX_ITERS: usize = 800;

/// A refined root and an inclusion-radius estimate around it.
#[derive(Clone, Copy, Debug)]
pub struct Root {
    pub z: Complex64,
    pub radius: f64,
}

/// All roots of `sum coeffs[k] z^k`. The leading coefficient must be nonzero.
pub fn roots(coeffs: &[Complex64]) -> Vec<Root> {
    let n = coeffs.len().saturating_sub(1);
    assert!(
        coeffs.last().is_some_and(|c| c.norm() > 0.0),
        "leading coefficient must be nonzero"
    );
    match n {
        0 => return Vec::new(),
        1 => {
            let z = -coeffs[0] / coeffs[1];
            return vec![Root {
                z,
                radius: 4.0 * EPS * z.norm(),
            }];
        }
        _ => {}
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERS {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, _) = newton_ratio(coeffs, z[i]);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let w = if denom.norm() > 0.0 && denom.is_finite() {
                ratio / denom
            } else {
                ratio
            };
            if !w.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 2.0 * EPS * z[i].norm().max(EPS) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // two Newton polishing steps, then inclusion radii
    z.iter()
        .map(|&zi| {
            let mut x = zi;
            for _ in 0..2 {
                let (r, _) = newton_ratio(coeffs, x);
                if r.is_finite() && r.norm() < 1e-6 * x.norm().max(1.0) {
                    x -= r;
                }
            }
            let (r, err_bound) = newton_ratio(coeffs, x);
            let radius = (n as f64) * (r.norm() + err_bound);
            Root { z: x, radius }
        })
        .collect()
}

/// `p(z)/p'(z)` evaluated stably (reversed polynomial outside the unit disk),
/// together with a rounding-error bound on that ratio.
fn newton_ratio(c: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let n = c.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp, scale) = horner(c.iter().rev(), z);
        let err = 2.0 * n as f64 * EPS * scale / dp.norm().max(f64::MIN_POSITIVE);
        (p / dp, err)
    } else {
        // p(z) = z^n r(y), y = 1/z, r the reversed polynomial
        let y = z.inv();
        let (r, dr, scale) = horner(c.iter(), y);
        let denom = Complex64::new(n as f64, 0.0) * r - y * dr;
        let err = 2.0 * n as f64 * EPS * scale * z.norm() / denom.norm().max(f64::MIN_POSITIVE);
        (z * r / denom, err)
    }
}

/// Horner evaluation of value and derivative; coefficients arrive from the
/// highest degree down. Also returns `sum |c_k| |z|^k` for error bounds.
fn horner<'a>(
    coeffs: impl Iterator<Item = &'a Complex64>,
    z: Complex64,
) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let az = z.norm();
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * az + c.norm();
    }
    (p, dp, scale)
}

fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let logs: Vec<f64> = c
        .iter()
        .map(|x| {
            if x.norm() > 0.0 {
                x.norm().ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    // upper convex hull of the points (k, log|c_k|)
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b as f64 - a as f64) * (logs[k] - logs[a])
                - (k as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let count = b - a;
        let radius = ((logs[a] - logs[b]) / count as f64).exp();
        for j in 0..count {
            let angle = std::f64::consts::TAU * (j as f64 / count as f64)
                + std::f64::consts::TAU * a as f64 / n as f64
                + sigma;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    // zero low coefficients leave a shortfall at the bottom of the hull
    while out.len() < n {
        let k = out.len();
        out.push(Complex64::from_polar(1e-3, k as f64 + sigma));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(c: &[f64]) -> Vec<Complex64> {
        c.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn sorted_moduli(c: &[f64]) -> Vec<f64> {
        let mut m: Vec<f64> = roots(&real(c)).iter().map(|r| r.z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    }

    #[test]
    fn quadratic() {
        let m = sorted_moduli(&[1.0, -3.0, 1.0]);
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((m[1] - phi2).abs() < 1e-13);
        assert!((m[0] - 1.0 / phi2).abs() < 1e-13);
    }

    #[test]
    fn roots_of_unity() {
        let mut c = vec![0.0; 13];
        c[0] = -1.0;
        c[12] = 1.0;
        for r in roots(&real(&c)) {
            assert!((r.z.norm() - 1.0).abs() < 1e-13);
            assert!((r.z.powu(12) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn widely_spread_moduli() {
        // (z - 1e-4)(z - 1)(z - 1e4)
        let a = 1e-4;
        let b = 1e4;
        let c = [-(a * b), a + b + a * b, -(1.0 + a + b), 1.0];
        let m = sorted_moduli(&c);
        assert!((m[0] - a).abs() < 1e-15);
        assert!((m[1] - 1.0).abs() < 1e-12);
        assert!((m[2] - b).abs() < 1e-9);
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z + 2) = z^2 + (2 - i) z - 2i
        let c = [
            Complex64::new(0.0, -2.0),
            Complex64::new(2.0, -1.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut rs = roots(&c);
        rs.sort_by(|a, b| a.z.norm().total_cmp(&b.z.norm()));
        assert!((rs[0].z - Complex64::new(0.0, 1.0)).norm() < 1e-13);
        assert!((rs[1].z - Complex64::new(-2.0, 0.0)).norm() < 1e-13);
    }
}
