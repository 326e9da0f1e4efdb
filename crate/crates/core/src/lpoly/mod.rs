//! Sparse multivariable Laurent polynomials with arbitrary-precision integer
//! coefficients.
//!
//! A [`LaurentPoly`] is a finite map from exponent vectors (signed, of a fixed
//! length) to nonzero coefficients. It is the common carrier for Alexander
//! polynomials, characteristic polynomials and cyclotomic polynomials in this
//! crate. Polynomial-valued operations return raw output unless they say
//! otherwise; the canonical representative of a class "up to units" is the
//! [`UnitNormalForm`].

mod cyclotomic;
mod gcd;
mod matrix;
mod resultant;
mod serde_impl;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use cyclotomic::{cyclotomic, euler_phi, extended_cyclotomic};
pub use gcd::{gcd, gcd_all};
pub use matrix::{char_poly, char_poly_big, det_bareiss, PolyMatrix};
pub use resultant::resultant;

/// Errors raised by polynomial operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    BadExponent { got: usize, expected: usize },
    #[error("linear map has {cols} columns but the polynomial has {vars} variables")]
    MapDimension { cols: usize, vars: usize },
    #[error("variable index {index} out of range for {vars} variables")]
    VarIndex { index: usize, vars: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("extended cyclotomic exponent vector must be nonzero")]
    ZeroDirection,
    #[error("cyclotomic index must be positive")]
    BadCyclotomicIndex,
    #[error("inexact division in a fraction-free elimination step")]
    InexactDivision,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Sparse Laurent polynomial over the integers in `num_vars` variables.
///
/// Terms are keyed by exponent vector; no stored coefficient is zero and every
/// key has length `num_vars`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

/// An exponent vector.
pub type Exponents = Vec<i64>;

/// `sign * x^shift * poly`, where `poly` has minimum exponent zero in every
/// variable and a positive lexicographically-leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitNormalForm {
    pub poly: LaurentPoly,
    pub sign: i8,
    pub shift: Vec<i64>,
}

impl UnitNormalForm {
    /// Rebuilds the polynomial this normal form was taken from.
    pub fn reconstruct(&self) -> LaurentPoly {
        let p = self.poly.mul_monomial(&self.shift);
        if self.sign < 0 {
            -p
        } else {
            p
        }
    }
}

/// Integer matrix acting on exponent vectors: `rows` is the target rank and
/// `cols` the source rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntLinearMap {
    rows: usize,
    cols: usize,
    data: Vec<Vec<i64>>,
}

impl IntLinearMap {
    pub fn new(data: Vec<Vec<i64>>) -> Result<Self, PolyError> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if let Some(bad) = data.iter().find(|r| r.len() != cols) {
            return Err(PolyError::BadExponent {
                got: bad.len(),
                expected: cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// A single row `a`, i.e. a class `Z^n -> Z`.
    pub fn row(a: &[i64]) -> Self {
        Self {
            rows: 1,
            cols: a.len(),
            data: vec![a.to_vec()],
        }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.data.iter().map(|r| r[j]).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.data
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// True iff the map is onto `Z^rows`, i.e. its Smith invariants are all 1.
    pub fn is_surjective(&self) -> bool {
        if self.rows > self.cols {
            return false;
        }
        let m: Vec<Vec<BigInt>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let snf = crate::torsion::smith_normal_form(&m);
        snf.diagonal.len() == self.rows && snf.diagonal.iter().all(|d| d.is_one())
    }
}

impl LaurentPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigInt::one())
    }

    pub fn constant(num_vars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(num_vars, vec![0; num_vars], c)
    }

    /// `c * x^exp`. Panics if `exp.len() != num_vars`.
    pub fn monomial(num_vars: usize, exp: Vec<i64>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exp.len(), num_vars, "exponent length");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { num_vars, terms }
    }

    /// The variable `x_index`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Self::monomial(num_vars, e, 1)
    }

    /// Builds a polynomial from possibly repeated terms; repeated exponents
    /// are summed and zero results dropped.
    pub fn from_terms<C: Into<BigInt>>(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, C)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(PolyError::BadExponent {
                    got: e.len(),
                    expected: num_vars,
                });
            }
            p.add_term(e, c.into());
        }
        Ok(p)
    }

    /// Univariate polynomial from ascending integer coefficients.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_big_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), 0)
    }

    /// Univariate polynomial `t^shift * sum coeffs[i] t^i`.
    pub fn from_big_coeffs(coeffs: Vec<BigInt>, shift: i64) -> Self {
        let mut p = Self::zero(1);
        for (i, c) in coeffs.into_iter().enumerate() {
            p.add_term(vec![shift + i as i64], c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant polynomials, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Terms in ascending lexicographic order of exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// The term with the lexicographically largest exponent vector.
    pub fn leading_term(&self) -> Option<(&Vec<i64>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Constant term value, for polynomials already known to be constant.
    pub fn constant_value(&self) -> BigInt {
        self.coeff(&vec![0; self.num_vars])
    }

    /// Componentwise minimum exponent; `None` for zero.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for (a, b) in acc.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
            acc
        }))
    }

    pub fn max_exponents(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for (a, b) in acc.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
            acc
        }))
    }

    /// Width of the exponent range in `var` (0 for zero polynomials).
    pub fn degree_in(&self, var: usize) -> i64 {
        let lo = self.terms.keys().map(|e| e[var]).min();
        let hi = self.terms.keys().map(|e| e[var]).max();
        match (lo, hi) {
            (Some(l), Some(h)) => h - l,
            _ => 0,
        }
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::VarMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the unit monomial `x^shift`.
    pub fn mul_monomial(&self, shift: &[i64]) -> Self {
        Self {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Canonical representative of the class of `self` up to units `±x^e`.
    pub fn normalize_unit(&self) -> UnitNormalForm {
        let Some(shift) = self.min_exponents() else {
            return UnitNormalForm {
                poly: self.clone(),
                sign: 1,
                shift: vec![0; self.num_vars],
            };
        };
        let neg: Vec<i64> = shift.iter().map(|s| -s).collect();
        let mut poly = self.mul_monomial(&neg);
        let mut sign = 1;
        if poly.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            poly = -poly;
            sign = -1;
        }
        UnitNormalForm { poly, sign, shift }
    }

    /// Shorthand for `self.normalize_unit().poly`.
    pub fn normalized(&self) -> Self {
        self.normalize_unit().poly
    }

    /// Equality up to multiplication by `±x^e`.
    pub fn equals_up_to_unit(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.normalized() == other.normalized()
    }

    /// Pushes every exponent vector through `f` and sums colliding terms.
    pub fn substitute_linear(&self, f: &IntLinearMap) -> Result<Self, PolyError> {
        if f.cols != self.num_vars {
            return Err(PolyError::MapDimension {
                cols: f.cols,
                vars: self.num_vars,
            });
        }
        let mut out = Self::zero(f.rows);
        for (e, c) in &self.terms {
            out.add_term(f.apply(e), c.clone());
        }
        Ok(out)
    }

    /// Evaluates at a point of `(C^*)^m`.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.num_vars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = Complex64::new(big_to_f64(c), 0.0);
                for (zi, &k) in z.iter().zip(e) {
                    v *= zi.powi(k as i32);
                }
                v
            })
            .sum()
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.num_vars, d.num_vars);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.num_vars));
        }
        if d.is_monomial() {
            let (de, dc) = d.leading_term().unwrap();
            let neg: Vec<i64> = de.iter().map(|x| -x).collect();
            let mut out = Self::zero(self.num_vars);
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.terms
                    .insert(e.iter().zip(&neg).map(|(a, b)| a + b).collect(), q);
            }
            return Some(out);
        }
        // Shift both into the polynomial ring, then divide by lex-leading terms.
        let sp = self.min_exponents().unwrap();
        let sd = d.min_exponents().unwrap();
        let p: Self = self.mul_monomial(&sp.iter().map(|x| -x).collect::<Vec<_>>());
        let dd: Self = d.mul_monomial(&sd.iter().map(|x| -x).collect::<Vec<_>>());
        let (lde, ldc) = {
            let (e, c) = dd.leading_term().unwrap();
            (e.clone(), c.clone())
        };
        let mut rem = p;
        let mut quot = Self::zero(self.num_vars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(&lde).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, r) = rc.div_rem(&ldc);
            if !r.is_zero() {
                return None;
            }
            let qe: Vec<i64> = re.iter().zip(&lde).map(|(a, b)| a - b).collect();
            for (e, c) in &dd.terms {
                let te: Vec<i64> = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(c * &qc));
            }
            quot.terms.insert(qe, qc);
        }
        let back: Vec<i64> = sp.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Some(quot.mul_monomial(&back))
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, in ascending
    /// order starting from the minimum exponent (returned alongside). The
    /// coefficient polynomials keep all variables and have exponent 0 in `var`.
    pub fn coefficients_in(&self, var: usize) -> (i64, Vec<LaurentPoly>) {
        let Some(lo) = self.terms.keys().map(|e| e[var]).min() else {
            return (0, Vec::new());
        };
        let hi = self.terms.keys().map(|e| e[var]).max().unwrap();
        let mut out = vec![Self::zero(self.num_vars); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            let k = (e[var] - lo) as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        (lo, out)
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(num_vars: usize, var: usize, shift: i64, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(num_vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut e2 = e.clone();
                e2[var] += shift + k as i64;
                out.add_term(e2, v.clone());
            }
        }
        out
    }

    /// Ascending integer coefficients of a univariate polynomial together with
    /// its lowest exponent.
    pub fn univariate_coeffs(&self) -> (i64, Vec<BigInt>) {
        assert_eq!(self.num_vars, 1, "univariate polynomial expected");
        let Some(lo) = self.terms.keys().next().map(|e| e[0]) else {
            return (0, Vec::new());
        };
        let hi = self.terms.keys().next_back().unwrap()[0];
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            out[(e[0] - lo) as usize] = c.clone();
        }
        (lo, out)
    }

    /// Appends a new variable (with exponent 0 everywhere) at the end.
    pub fn add_variable(&self) -> Self {
        Self {
            num_vars: self.num_vars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.push(0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Removes variable `var`, which must not occur.
    pub fn drop_variable(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.num_vars {
            return Err(PolyError::VarIndex {
                index: var,
                vars: self.num_vars,
            });
        }
        let mut out = Self::zero(self.num_vars - 1);
        for (e, c) in &self.terms {
            assert_eq!(e[var], 0, "dropped variable still occurs");
            let mut e2 = e.clone();
            e2.remove(var);
            out.terms.insert(e2, c.clone());
        }
        Ok(out)
    }

    /// Replaces `var` by the new last variable: `p(.., x_var, ..) -> p(.., z, ..)`.
    pub fn move_variable_to_end(&self, var: usize) -> Self {
        let mut out = Self::zero(self.num_vars + 1);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            e2.push(k);
            out.terms.insert(e2, c.clone());
        }
        out
    }

    /// Collinear-support test. Returns `(e0, v)` with `v` primitive such that
    /// every exponent equals `e0 + k v` for some `k >= 0`; `None` when the
    /// support is not collinear. A monomial yields the first coordinate
    /// direction.
    pub fn support_direction(&self) -> Result<Option<(Exponents, Exponents)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let exps: Vec<&Vec<i64>> = self.terms.keys().collect();
        let m = self.num_vars;
        if exps.len() == 1 {
            let mut v = vec![0; m];
            if m > 0 {
                v[0] = 1;
            }
            return Ok(Some((exps[0].clone(), v)));
        }
        // Direction from the first difference, made primitive.
        let d: Vec<i64> = exps[1].iter().zip(exps[0]).map(|(a, b)| a - b).collect();
        let g = d.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let mut v: Vec<i64> = d.iter().map(|x| x / g).collect();
        // Orient so the lexicographically smallest exponent is the base. The
        // keys are sorted ascending, so the first key is the base and v points
        // lexicographically upward.
        let base = exps[0].clone();
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        for e in &exps {
            let diff: Vec<i64> = e.iter().zip(&base).map(|(a, b)| a - b).collect();
            let piv = v.iter().position(|&x| x != 0).unwrap();
            if diff[piv] % v[piv] != 0 {
                return Ok(None);
            }
            let k = diff[piv] / v[piv];
            if k < 0 || diff.iter().zip(&v).any(|(a, b)| *a != k * b) {
                return Ok(None);
            }
        }
        Ok(Some((base, v)))
    }

    /// For collinear support `e0 + k v`, the univariate polynomial `sum c_k t^k`.
    pub fn collapse_along(&self, base: &[i64], dir: &[i64]) -> Option<Self> {
        let piv = dir.iter().position(|&x| x != 0)?;
        let mut out = Self::zero(1);
        for (e, c) in &self.terms {
            let k = (e[piv] - base[piv]) / dir[piv];
            if e.iter()
                .zip(base)
                .zip(dir)
                .any(|((a, b), d)| *a != b + k * d)
            {
                return None;
            }
            out.add_term(vec![k], c.clone());
        }
        Some(out)
    }
}

/// Lossy conversion to `f64`, exact for small integers and correctly scaled
/// for huge ones.
pub fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Natural logarithm of `|x|` for a nonzero integer of any size.
pub fn big_ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return big_to_f64(&x.abs()).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    big_to_f64(&top).ln() + shift as f64 * std::f64::consts::LN_2
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("LaurentPoly add")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("LaurentPoly sub")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("LaurentPoly mul")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        self.terms.values_mut().for_each(|c| *c = -c.clone());
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

fn var_name(num_vars: usize, i: usize) -> String {
    if num_vars == 1 {
        "t".to_string()
    } else {
        format!("t{}", i + 1)
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending lexicographic order, e.g. `t1^2 - 3*t1*t2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => mono.push(var_name(self.num_vars, i)),
                    _ => mono.push(format!("{}^{}", var_name(self.num_vars, i), k)),
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.num_vars, self)
    }
}
