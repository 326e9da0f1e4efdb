//! Mahler measures.
//!
//! Univariate values come from the root product `|a_0| prod max(1, |w_k|)`
//! after an exact square-free decomposition, so repeated roots never slow the
//! refinement down. Multivariate values integrate the univariate measure of
//! one-variable slices over the remaining torus coordinates. Deciding
//! `M(P) = 1` is done exactly, by dividing out cyclotomic factors.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpoly::{self, big_ln_abs, big_to_f64, cyclotomic, euler_phi, LaurentPoly, PolyError};
use crate::roots::roots;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MahlerError {
    #[error("Mahler measure of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("slice quadrature needs at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("slice point has {got} coordinates, expected {expected}")]
    SliceDimension { got: usize, expected: usize },
    #[error("the slice polynomial vanishes identically")]
    ZeroSlice,
    #[error(
        "quadrature did not converge: grid {grid}, estimate {estimate}, last difference {difference}"
    )]
    NonConvergence {
        grid: usize,
        estimate: f64,
        difference: f64,
    },
    #[error("product of the supplied factors does not match the polynomial up to a unit")]
    FactorMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerMethod {
    Roots,
    SliceQuadrature,
    ExactOne,
}

impl fmt::Display for MahlerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MahlerMethod::Roots => "roots",
            MahlerMethod::SliceQuadrature => "slice_quadrature",
            MahlerMethod::ExactOne => "exact_one",
        })
    }
}

/// A Mahler-measure value. `error_estimate` is in the units of `value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerResult {
    pub value: f64,
    pub log_value: f64,
    pub method: MahlerMethod,
    pub error_estimate: f64,
}

impl MahlerResult {
    pub fn exact_one() -> Self {
        Self {
            value: 1.0,
            log_value: 0.0,
            method: MahlerMethod::ExactOne,
            error_estimate: 0.0,
        }
    }

    fn from_log(log_value: f64, log_err: f64, method: MahlerMethod) -> Self {
        let value = log_value.exp();
        Self {
            value,
            log_value,
            method,
            error_estimate: value * log_err.exp_m1(),
        }
    }

    /// True when the measure exceeds `1 + tol` (never for `exact_one`).
    pub fn exceeds_one(&self, tol: f64) -> bool {
        self.method != MahlerMethod::ExactOne && self.value > 1.0 + tol
    }
}

/// A rational point `(r_2, ..., r_n)` of the torus, each `r = num/den` with
/// `0 <= num < den` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlicePoint {
    coords: Vec<(i64, i64)>,
}

impl SlicePoint {
    /// Reduces every coordinate into `[0, 1)` and to lowest terms.
    pub fn new(coords: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let coords = coords
            .into_iter()
            .map(|(n, d)| {
                assert!(d > 0, "denominator must be positive");
                let n = n.rem_euclid(d);
                let g = n.gcd(&d).max(1);
                (n / g, d / g)
            })
            .collect();
        Self { coords }
    }

    pub fn coords(&self) -> &[(i64, i64)] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Least common multiple of the denominators (1 for the empty point).
    pub fn common_denominator(&self) -> i64 {
        self.coords.iter().fold(1, |acc, &(_, d)| acc.lcm(&d))
    }
}

impl fmt::Display for SlicePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|&(n, d)| {
                if n == 0 {
                    "0".into()
                } else {
                    format!("{n}/{d}")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Tunables for [`mahler_multivariate_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub grid: usize,
    pub tol: f64,
    /// Largest number of slices a single pass may evaluate.
    pub max_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            grid: 64,
            tol: 1e-4,
            max_points: 1 << 22,
        }
    }
}

/// Relative size below which a slice coefficient is treated as zero.
const SLICE_ZERO: f64 = 1e-13;
/// Root moduli within this distance of 1 are candidates for cyclotomic factors.
const UNIT_CIRCLE_SLACK: f64 = 1e-8;

/// Mahler measure of a univariate integer Laurent polynomial.
pub fn mahler_univariate(p: &LaurentPoly) -> Result<MahlerResult, MahlerError> {
    if p.num_vars() != 1 {
        return Err(MahlerError::NotUnivariate(p.num_vars()));
    }
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let q = p.normalized();
    if q.is_constant() {
        let c = q.constant_value();
        if c.is_one() {
            return Ok(MahlerResult::exact_one());
        }
        return Ok(MahlerResult {
            value: big_to_f64(&c),
            log_value: big_ln_abs(&c),
            method: MahlerMethod::Roots,
            error_estimate: 0.0,
        });
    }
    let content = q.content();
    let mut log_m = big_ln_abs(&content);
    let mut log_err = 0.0;
    let mut near_circle = true;
    for (factor, mult) in squarefree_decomposition(&q) {
        let (_, coeffs) = factor.univariate_coeffs();
        let cf: Vec<Complex64> = coeffs
            .iter()
            .map(|c| Complex64::new(big_to_f64(c), 0.0))
            .collect();
        let lead = coeffs.last().unwrap();
        let (lm, le, on_circle) = log_measure_from_roots(&cf, big_ln_abs(lead));
        log_m += mult as f64 * lm;
        log_err += mult as f64 * le;
        near_circle &= on_circle;
    }
    if near_circle && content.is_one() && is_cyclotomic_product_univariate(p)? {
        return Ok(MahlerResult::exact_one());
    }
    Ok(MahlerResult::from_log(log_m, log_err, MahlerMethod::Roots))
}

/// `(log M, error bound on log M, all roots near |z| = 1)` for a polynomial
/// with nonzero leading and constant coefficient.
fn log_measure_from_roots(c: &[Complex64], log_lead: f64) -> (f64, f64, bool) {
    let mut lm = log_lead;
    let mut err = 0.0;
    let mut on_circle = true;
    for r in roots(c) {
        let m = r.z.norm();
        if m > 1.0 {
            lm += m.ln();
        }
        if m + r.radius > 1.0 {
            err += r.radius / (m - r.radius).max(1.0);
        }
        if (m - 1.0).abs() > UNIT_CIRCLE_SLACK {
            on_circle = false;
        }
    }
    (lm, err, on_circle)
}

/// Square-free decomposition of a primitive integer polynomial (Yun):
/// `p = prod f_i^i` up to sign and content, each `f_i` square-free.
pub fn squarefree_decomposition(p: &LaurentPoly) -> Vec<(LaurentPoly, u32)> {
    let a = p.normalized();
    let a = a.exact_div(&LaurentPoly::constant(1, a.content())).unwrap();
    if a.degree_in(0) == 0 {
        return Vec::new();
    }
    let da = derivative(&a);
    let mut c = lpoly::gcd(&a, &da);
    let mut w = a.exact_div(&c).unwrap();
    let mut out = Vec::new();
    let mut i = 1;
    while c.degree_in(0) > 0 {
        let y = lpoly::gcd(&w, &c);
        let z = w.exact_div(&y).unwrap();
        if z.degree_in(0) > 0 {
            out.push((z.normalized(), i));
        }
        i += 1;
        c = c.exact_div(&y).unwrap();
        w = y;
    }
    if w.degree_in(0) > 0 {
        out.push((w.normalized(), i));
    }
    out
}

fn derivative(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(
        1,
        p.terms()
            .map(|(e, c)| (vec![e[0] - 1], c * BigInt::from(e[0]))),
    )
    .unwrap()
}

/// `log M` of `sum coeffs[k] z^k` with complex coefficients, by the root
/// product formula. Leading and trailing coefficients smaller than
/// `1e-13 * scale` are dropped (degree fall and factors of `z` do not change
/// the measure).
pub fn log_mahler_complex(coeffs: &[Complex64], scale: f64) -> Result<f64, MahlerError> {
    let thresh = SLICE_ZERO * scale.max(f64::MIN_POSITIVE);
    let lo = coeffs.iter().position(|c| c.norm() > thresh);
    let hi = coeffs.iter().rposition(|c| c.norm() > thresh);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(MahlerError::ZeroSlice);
    };
    let c = &coeffs[lo..=hi];
    match c.len() {
        1 => Ok(c[0].norm().ln()),
        2 => Ok(c[0].norm().max(c[1].norm()).ln()),
        _ => Ok(log_measure_from_roots(c, c[c.len() - 1].norm().ln()).0),
    }
}

/// Coefficients (in the inner variable) of the slice of `p` at the given outer
/// angles `(s_j)`, `z_j = e^{2 pi i s_j}`; exponent offsets are taken relative
/// to the inner variable's minimum exponent.
struct SliceBuilder {
    width: usize,
    /// (inner offset, outer exponents, coefficient)
    terms: Vec<(usize, Vec<i64>, f64)>,
    scale: f64,
}

impl SliceBuilder {
    fn new(p: &LaurentPoly, inner: usize) -> Self {
        let inner_min = p.terms().map(|(e, _)| e[inner]).min().unwrap_or(0);
        let width = p.degree_in(inner) as usize + 1;
        let mut scale = 0.0;
        let terms = p
            .terms()
            .map(|(e, c)| {
                let outer: Vec<i64> = e
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != inner)
                    .map(|(_, &k)| k)
                    .collect();
                let cf = big_to_f64(c);
                scale += cf.abs();
                ((e[inner] - inner_min) as usize, outer, cf)
            })
            .collect();
        Self {
            width,
            terms,
            scale,
        }
    }

    fn at_angles(&self, s: &[f64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.width];
        for (k, outer, c) in &self.terms {
            let phase: f64 = outer.iter().zip(s).map(|(&e, &sj)| e as f64 * sj).sum();
            out[*k] += Complex64::from_polar(*c, std::f64::consts::TAU * phase.fract());
        }
        out
    }

    /// Exact root-of-unity phases at a rational point.
    fn at_rational(&self, point: &SlicePoint) -> Vec<Complex64> {
        let den = point.common_denominator();
        let nums: Vec<i64> = point.coords().iter().map(|&(n, d)| n * (den / d)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.width];
        for (k, outer, c) in &self.terms {
            let num: i64 = outer
                .iter()
                .zip(&nums)
                .map(|(&e, &a)| (e.rem_euclid(den) * a).rem_euclid(den))
                .sum::<i64>()
                .rem_euclid(den);
            let angle = std::f64::consts::TAU * num as f64 / den as f64;
            out[*k] += Complex64::from_polar(*c, angle);
        }
        out
    }
}

/// `int_0^1 log |p(e^{2 pi i s}, e^{2 pi i r_2}, ...)| ds`, i.e. `log M` of the
/// slice in the first variable at the rational point `r`.
pub fn jensen_slice_integral(p: &LaurentPoly, point: &SlicePoint) -> Result<f64, MahlerError> {
    if p.num_vars() != point.len() + 1 {
        return Err(MahlerError::SliceDimension {
            got: point.len(),
            expected: p.num_vars().saturating_sub(1),
        });
    }
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let sb = SliceBuilder::new(p, 0);
    log_mahler_complex(&sb.at_rational(point), sb.scale)
}

/// Variable with the highest degree, ties to the lowest index.
pub fn inner_variable(p: &LaurentPoly) -> usize {
    (0..p.num_vars())
        .rev()
        .max_by_key(|&v| p.degree_in(v))
        .unwrap_or(0)
}

/// Multivariate Mahler measure by slice quadrature with grid doubling, using
/// the default point cap.
pub fn mahler_multivariate(
    p: &LaurentPoly,
    grid: usize,
    tol: f64,
) -> Result<MahlerResult, MahlerError> {
    mahler_multivariate_with(
        p,
        &QuadratureConfig {
            grid,
            tol,
            ..QuadratureConfig::default()
        },
    )
}

pub fn mahler_multivariate_with(
    p: &LaurentPoly,
    cfg: &QuadratureConfig,
) -> Result<MahlerResult, MahlerError> {
    let m = p.num_vars();
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    if m < 2 {
        return Err(MahlerError::TooFewVariables(m));
    }
    if p.is_monomial() {
        let c = p.leading_term().unwrap().1.abs();
        if c.is_one() {
            return Ok(MahlerResult::exact_one());
        }
        return Ok(MahlerResult::from_log(
            big_ln_abs(&c),
            0.0,
            MahlerMethod::Roots,
        ));
    }
    let sb = SliceBuilder::new(p, inner_variable(p));
    let dims = (m - 1) as u32;
    let points = |g: usize| g.checked_pow(dims).unwrap_or(usize::MAX);
    let mut g = cfg.grid.max(1);
    if points(g) > cfg.max_points {
        return Err(MahlerError::NonConvergence {
            grid: g,
            estimate: f64::NAN,
            difference: f64::INFINITY,
        });
    }
    let mut prev = slice_quadrature(&sb, g, dims as usize);
    loop {
        let next_g = g * 2;
        if points(next_g) > cfg.max_points {
            return Err(MahlerError::NonConvergence {
                grid: g,
                estimate: prev,
                difference: f64::INFINITY,
            });
        }
        let cur = slice_quadrature(&sb, next_g, dims as usize);
        let diff = (cur.exp() - prev.exp()).abs();
        g = next_g;
        if diff < cfg.tol {
            let value = cur.exp();
            return Ok(MahlerResult {
                value,
                log_value: cur,
                method: MahlerMethod::SliceQuadrature,
                error_estimate: diff,
            });
        }
        prev = cur;
    }
}

/// Fixed irrational offsets (multiples of the golden-ratio conjugate) keep
/// grid points away from rational degeneracies.
fn offset(dim: usize) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    ((dim + 1) as f64 * phi).fract()
}

/// Mean of `log M(slice)` over a `g^dims` offset grid. Summation runs in index
/// order, so the result does not depend on the worker count.
fn slice_quadrature(sb: &SliceBuilder, g: usize, dims: usize) -> f64 {
    let total = g.pow(dims as u32);
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut s = vec![0.0; dims];
            let mut rest = idx;
            for (d, sd) in s.iter_mut().enumerate() {
                *sd = ((rest % g) as f64 + offset(d)) / g as f64;
                rest /= g;
            }
            let mut attempt = 0;
            loop {
                match log_mahler_complex(&sb.at_angles(&s), sb.scale) {
                    Ok(v) => break v,
                    Err(_) if attempt < 8 => {
                        attempt += 1;
                        for (d, sd) in s.iter_mut().enumerate() {
                            *sd += offset(d + attempt) * 1e-3 / g as f64;
                        }
                    }
                    Err(_) => break 0.0,
                }
            }
        })
        .collect();
    values.iter().sum::<f64>() / total as f64
}

/// Orders `n` with `phi(n) <= deg`, ascending.
fn cyclotomic_orders_up_to_degree(deg: u64) -> Vec<u64> {
    let bound = 2 * deg * deg + 2;
    (1..=bound.max(6))
        .filter(|&n| euler_phi(n) <= deg)
        .collect()
}

/// True iff `p` is `±` a monomial times a product of cyclotomic polynomials.
///
/// Roots are screened numerically (all must lie within `1e-8` of the unit
/// circle, which also fixes candidate orders from their arguments); the
/// decision itself is exact: every candidate `Psi_n` is divided out and the
/// quotient must end at `±1`.
pub fn is_cyclotomic_product_univariate(p: &LaurentPoly) -> Result<bool, MahlerError> {
    if p.num_vars() != 1 {
        return Err(MahlerError::NotUnivariate(p.num_vars()));
    }
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let q = p.normalized();
    let (_, coeffs) = q.univariate_coeffs();
    let lead = coeffs.last().unwrap();
    if !lead.abs().is_one() || !coeffs[0].abs().is_one() {
        return Ok(false);
    }
    let deg = (coeffs.len() - 1) as u64;
    if deg == 0 {
        return Ok(true);
    }
    let orders = cyclotomic_orders_up_to_degree(deg);
    let mut candidates: Vec<u64> = Vec::new();
    for (factor, _) in squarefree_decomposition(&q) {
        let (_, fc) = factor.univariate_coeffs();
        let cf: Vec<Complex64> = fc
            .iter()
            .map(|c| Complex64::new(big_to_f64(c), 0.0))
            .collect();
        for r in roots(&cf) {
            if (r.z.norm() - 1.0).abs() > UNIT_CIRCLE_SLACK {
                return Ok(false);
            }
            let x = r.z.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
            let n = orders.iter().copied().find(|&n| {
                let y = x * n as f64;
                (y - y.round()).abs() < 1e-6
            });
            match n {
                Some(n) => candidates.push(n),
                None => return Ok(false),
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut rest = q;
    for n in candidates {
        let psi = cyclotomic(n)?;
        while let Some(next) = rest.exact_div(&psi) {
            rest = next;
        }
    }
    Ok(rest.is_constant() && rest.constant_value().abs().is_one())
}

/// Dispatches on the variable count: roots for one variable, otherwise the
/// measure-one detector on `p` itself and then slice quadrature.
pub fn mahler_measure(
    p: &LaurentPoly,
    cfg: &QuadratureConfig,
) -> Result<MahlerResult, MahlerError> {
    if p.num_vars() <= 1 {
        return mahler_univariate(p);
    }
    if is_extended_cyclotomic_product(p, std::slice::from_ref(p))? {
        return Ok(MahlerResult::exact_one());
    }
    mahler_multivariate_with(p, cfg)
}

/// Boyd's criterion given a factorization: `p` (equal to the product of
/// `factors` up to a unit) has measure one iff every factor is a unit monomial
/// or an extended cyclotomic product, i.e. has collinear support whose
/// collapse to one variable is a cyclotomic product.
pub fn is_extended_cyclotomic_product(
    p: &LaurentPoly,
    factors: &[LaurentPoly],
) -> Result<bool, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let mut prod = LaurentPoly::one(p.num_vars());
    for f in factors {
        prod = prod.try_mul(f)?;
    }
    if !prod.equals_up_to_unit(p) {
        return Err(MahlerError::FactorMismatch);
    }
    for f in factors {
        if f.is_monomial() {
            if !f.leading_term().unwrap().1.abs().is_one() {
                return Ok(false);
            }
            continue;
        }
        let Some((base, dir)) = f.support_direction()? else {
            return Ok(false);
        };
        let uni = f.collapse_along(&base, &dir).expect("collinear support");
        if !is_cyclotomic_product_univariate(&uni)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scans rational points with common denominator `q = 1, 2, ...,
/// max_denominator` and returns the first whose slice integral exceeds
/// `delta`.
pub fn find_positive_slice(
    p: &LaurentPoly,
    max_denominator: i64,
    delta: f64,
) -> Result<Option<SlicePoint>, MahlerError> {
    find_positive_slice_from(p, 1, max_denominator, delta)
}

/// As [`find_positive_slice`], starting the scan at `min_denominator`.
pub fn find_positive_slice_from(
    p: &LaurentPoly,
    min_denominator: i64,
    max_denominator: i64,
    delta: f64,
) -> Result<Option<SlicePoint>, MahlerError> {
    let m = p.num_vars();
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    if m < 2 {
        return Err(MahlerError::TooFewVariables(m));
    }
    let dims = m - 1;
    for q in min_denominator.max(1)..=max_denominator {
        let total = (q as usize).pow(dims as u32);
        for idx in 0..total {
            let mut nums = Vec::with_capacity(dims);
            let mut rest = idx;
            for _ in 0..dims {
                nums.push((rest % q as usize) as i64);
                rest /= q as usize;
            }
            nums.reverse();
            if nums.iter().fold(q, |g, &a| g.gcd(&a)) != 1 {
                continue;
            }
            let point = SlicePoint::new(nums.iter().map(|&a| (a, q)));
            match jensen_slice_integral(p, &point) {
                Ok(v) if v > delta => return Ok(Some(point)),
                Ok(_) | Err(MahlerError::ZeroSlice) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}
