//! Alexander polynomials of fibered 3-manifolds: records, Fox calculus,
//! one-variable specializations and Alexander polynomials of abelian covers.

mod fox;

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpoly::{
    big_ln_abs, big_to_f64, char_poly, resultant, IntLinearMap, LaurentPoly, PolyError,
};
use crate::mahler::{
    log_mahler_complex, mahler_univariate, squarefree_decomposition, MahlerError, MahlerResult,
};
use crate::word::{Word, WordError};

pub use fox::{
    alexander_from_presentation, alexander_of_group, fox_presentation_matrix, fox_row, minors_gcd,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlexanderError {
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("presentation matrix is empty or ragged")]
    BadMatrix,
    #[error("every maximal minor vanishes (order zero)")]
    OrderZero,
    #[error("the class is not surjective onto Z")]
    NotSurjective,
    #[error("specialization needs at least two variables, got {0}")]
    RankTooSmall(usize),
    #[error("specialization along the class is zero")]
    ZeroSpecialization,
    #[error("cover degree must be positive")]
    ZeroDegree,
    #[error("variable index {index} out of range for {vars} variables")]
    VarIndex { index: usize, vars: usize },
    #[error("measure changed under the correction factor: {before} vs {after}")]
    MeasureMismatch { before: f64, after: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Mahler(#[from] MahlerError),
}

/// A fibered 3-manifold described by data: first Betti number, whether it is
/// closed, and any of the multivariable Alexander polynomial, a group
/// presentation and fibered classes with their monodromies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldRecord {
    pub name: String,
    pub b1: usize,
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_pi: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<GroupPresentation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibered_classes: Vec<FiberedClass>,
}

/// A fibered class `a` in `H^1` and the action of the monodromy on the first
/// homology of the fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberedClass {
    pub a: Vec<i64>,
    pub monodromy: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberData>,
}

/// Descriptive data about a fiber surface; not used in computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub punctures: Option<u32>,
}

/// `<x_1, ..., x_generators | relators>` with the abelianization `psi`, an
/// `n x generators` matrix whose column `j` is the image of `x_j` in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<String>,
    pub psi: Vec<Vec<i64>>,
}

/// The character of `Z^n` sending `t_i` to `exp(2 pi i exponents[i] / modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterSpec {
    modulus: u64,
    exponents: Vec<u64>,
}

impl CharacterSpec {
    pub fn new(modulus: u64, exponents: &[i64]) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let exponents = exponents
            .iter()
            .map(|&a| a.rem_euclid(modulus as i64) as u64)
            .collect();
        Self { modulus, exponents }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Value on a vector of `Z^n`.
    pub fn eval(&self, v: &[i64]) -> Complex64 {
        let k = self.modulus as i128;
        let s: i128 = v
            .iter()
            .zip(&self.exponents)
            .map(|(&x, &a)| x as i128 * a as i128)
            .sum();
        let r = s.rem_euclid(k) as f64 / self.modulus as f64;
        Complex64::from_polar(1.0, TAU * r)
    }

    /// Value on `t_i`.
    pub fn on_basis(&self, i: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.exponents[i] as f64 / self.modulus as f64)
    }

    /// All characters of `Z_k^m` embedded in the listed coordinates of `Z^n`.
    pub fn all_on(modulus: u64, num_vars: usize, coords: &[usize]) -> Vec<Self> {
        let count = (modulus as usize).pow(coords.len() as u32);
        (0..count)
            .map(|mut idx| {
                let mut e = vec![0i64; num_vars];
                for &c in coords.iter().rev() {
                    e[c] = (idx % modulus as usize) as i64;
                    idx /= modulus as usize;
                }
                Self::new(modulus, &e)
            })
            .collect()
    }
}

impl GroupPresentation {
    pub fn relator_words(&self) -> Result<Vec<Word>, AlexanderError> {
        self.relators
            .iter()
            .map(|s| Ok(s.parse::<Word>()?))
            .collect()
    }

    pub fn psi_map(&self) -> Result<IntLinearMap, AlexanderError> {
        Ok(IntLinearMap::new(self.psi.clone())?)
    }

    pub fn validate(&self) -> Result<(), AlexanderError> {
        if self.psi.is_empty() || self.psi.iter().any(|r| r.len() != self.generators) {
            return Err(AlexanderError::InvalidRecord(format!(
                "psi must have {} columns",
                self.generators
            )));
        }
        for w in self.relator_words()? {
            w.check_rank(self.generators)?;
            if !w.is_reduced() {
                return Err(AlexanderError::InvalidRecord(format!(
                    "relator {w} is not reduced"
                )));
            }
            let ab = w.exponent_sum(self.generators);
            let img = self.psi_map()?.apply(&ab);
            if img.iter().any(|&x| x != 0) {
                return Err(AlexanderError::InvalidRecord(format!(
                    "psi does not kill relator {w}"
                )));
            }
        }
        Ok(())
    }
}

impl FiberedClass {
    pub fn class_map(&self) -> IntLinearMap {
        IntLinearMap::row(&self.a)
    }
}

impl ManifoldRecord {
    /// Parses a JSON record and checks its invariants.
    pub fn from_json(text: &str) -> Result<Self, AlexanderError> {
        let mut rec: Self =
            serde_json::from_str(text).map_err(|e| AlexanderError::InvalidRecord(e.to_string()))?;
        if let Some(d) = rec.delta_pi.take() {
            rec.delta_pi = Some(d.with_num_vars(rec.b1)?);
        }
        rec.validate()?;
        Ok(rec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn validate(&self) -> Result<(), AlexanderError> {
        let bad = |m: String| Err(AlexanderError::InvalidRecord(m));
        if self.b1 == 0 {
            return bad("b1 must be positive".into());
        }
        if self.delta_pi.is_none() && self.presentation.is_none() && self.fibered_classes.is_empty()
        {
            return bad("need delta_pi, presentation or a fibered class".into());
        }
        if let Some(d) = &self.delta_pi {
            if d.num_vars() != self.b1 {
                return bad(format!(
                    "delta_pi has {} variables, b1 = {}",
                    d.num_vars(),
                    self.b1
                ));
            }
        }
        if let Some(p) = &self.presentation {
            p.validate()?;
            if p.psi.len() != self.b1 {
                return bad(format!("psi has {} rows, b1 = {}", p.psi.len(), self.b1));
            }
        }
        for fc in &self.fibered_classes {
            if fc.a.len() != self.b1 {
                return bad(format!("fibered class {:?} has wrong length", fc.a));
            }
            let n = fc.monodromy.len();
            if fc.monodromy.iter().any(|r| r.len() != n) {
                return bad("monodromy must be square".into());
            }
            let det = char_poly(&fc.monodromy)?.coeff(&[0]);
            if !det.abs().is_one() {
                return bad(format!("monodromy of class {:?} has det {}", fc.a, det));
            }
        }
        Ok(())
    }

    /// `delta_pi`, or else the Alexander polynomial of the presentation.
    pub fn alexander_polynomial(&self) -> Result<Option<LaurentPoly>, AlexanderError> {
        if let Some(d) = &self.delta_pi {
            return Ok(Some(d.clone()));
        }
        match &self.presentation {
            Some(p) => Ok(Some(alexander_of_group(p)?)),
            None => Ok(None),
        }
    }
}

/// `det(t I - monodromy)`.
pub fn char_poly_fibered(fc: &FiberedClass) -> Result<LaurentPoly, AlexanderError> {
    Ok(char_poly(&fc.monodromy)?)
}

/// The correction factor relating `a(delta)` to the twisted Alexander
/// polynomial of the restricted character. Roots lie on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Correction {
    One,
    /// `t - root`
    Linear {
        root: [f64; 2],
    },
    /// `(t - root)(t - conj(root))`
    Quadratic {
        root: [f64; 2],
    },
}

impl Correction {
    /// Coefficients in ascending degree.
    pub fn coeffs(&self) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Correction::One => vec![one],
            Correction::Linear { root } => vec![-Complex64::new(root[0], root[1]), one],
            Correction::Quadratic { root } => {
                let r = Complex64::new(root[0], root[1]);
                vec![
                    Complex64::new(r.norm_sqr(), 0.0),
                    Complex64::new(-2.0 * r.re, 0.0),
                    one,
                ]
            }
        }
    }

    /// The factor as an integer polynomial, when its coefficients are
    /// integers.
    pub fn integer_poly(&self) -> Option<LaurentPoly> {
        let mut out = Vec::new();
        for c in self.coeffs() {
            if c.im.abs() > 1e-12 || (c.re - c.re.round()).abs() > 1e-12 {
                return None;
            }
            out.push(c.re.round() as i64);
        }
        Some(LaurentPoly::from_coeffs(&out))
    }
}

/// `a(delta) * p(t)` with both Mahler measures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Specialization {
    pub base: LaurentPoly,
    pub correction: Correction,
    pub base_measure: MahlerResult,
    pub corrected_measure: MahlerResult,
}

impl Specialization {
    /// The product as an integer polynomial, if the correction is integral.
    pub fn product(&self) -> Option<LaurentPoly> {
        self.correction.integer_poly().map(|p| &self.base * &p)
    }
}

/// Specializes `delta` along the class `a: Z^n -> Z` and attaches the
/// correction factor: `1` when the character is nontrivial on the kernel,
/// `t - conj(xi)` when it is trivial there and the manifold has boundary, and
/// `(t - xi)(t - conj(xi))` when it is trivial and the manifold is closed.
/// Here `xi` is the character's value on a preimage of `1` under `a`.
pub fn specialize_with_correction(
    delta: &LaurentPoly,
    a: &IntLinearMap,
    xi_trivial_on_kernel: bool,
    closed: bool,
    xi_at_dual: Complex64,
) -> Result<Specialization, AlexanderError> {
    if delta.num_vars() < 2 {
        return Err(AlexanderError::RankTooSmall(delta.num_vars()));
    }
    if a.rows() != 1 || !a.is_surjective() {
        return Err(AlexanderError::NotSurjective);
    }
    let base = delta.substitute_linear(a)?;
    if base.is_zero() {
        return Err(AlexanderError::ZeroSpecialization);
    }
    let xi = xi_at_dual / xi_at_dual.norm();
    let correction = match (xi_trivial_on_kernel, closed) {
        (false, _) => Correction::One,
        (true, false) => Correction::Linear {
            root: [xi.re, -xi.im],
        },
        (true, true) => Correction::Quadratic {
            root: [xi.re, xi.im],
        },
    };
    let base_measure = mahler_univariate(&base)?;
    let corrected_measure = match correction.integer_poly() {
        Some(p) => mahler_univariate(&(&base * &p))?,
        None => {
            // repeated roots would cost the root finder half its precision, so
            // the correction multiplies one square-free factor of the base
            let pc = correction.coeffs();
            let base_content = base.normalized().content();
            let mut log = big_ln_abs(&base_content);
            let mut factors = squarefree_decomposition(&base);
            if factors.is_empty() {
                factors.push((LaurentPoly::one(1), 1));
            }
            for (i, (f, mult)) in factors.iter().enumerate() {
                let (_, fc) = f.univariate_coeffs();
                let fc: Vec<Complex64> = fc
                    .iter()
                    .map(|c| Complex64::new(big_to_f64(c), 0.0))
                    .collect();
                let alone = log_mahler_complex(&fc, 1.0)?;
                if i == 0 {
                    let mut prod = vec![Complex64::new(0.0, 0.0); fc.len() + pc.len() - 1];
                    for (a, x) in fc.iter().enumerate() {
                        for (b, y) in pc.iter().enumerate() {
                            prod[a + b] += x * y;
                        }
                    }
                    log += log_mahler_complex(&prod, 1.0)? + (*mult as f64 - 1.0) * alone;
                } else {
                    log += *mult as f64 * alone;
                }
            }
            MahlerResult {
                value: log.exp(),
                log_value: log,
                method: crate::mahler::MahlerMethod::Roots,
                error_estimate: base_measure.error_estimate.max(1e-12 * log.exp()),
            }
        }
    };
    let tol = 1e-9 * base_measure.value.max(1.0);
    if (corrected_measure.value - base_measure.value).abs() > tol {
        return Err(AlexanderError::MeasureMismatch {
            before: base_measure.value,
            after: corrected_measure.value,
        });
    }
    Ok(Specialization {
        base,
        correction,
        base_measure,
        corrected_measure,
    })
}

/// Alexander polynomial of the `Z_k^m` cover twisting the listed variables
/// (0-based): for each such `t_j` in ascending order the current polynomial
/// `P` becomes `Res_z(z^k - t_j^k, P(t_j -> z))`, which is the product of
/// `P` over all `k`-th-root-of-unity twists of `t_j`. Unit-normalized.
pub fn abelian_cover_alexander(
    delta: &LaurentPoly,
    k: u64,
    twisted_vars: &[usize],
) -> Result<LaurentPoly, AlexanderError> {
    if delta.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    if k == 0 {
        return Err(AlexanderError::ZeroDegree);
    }
    let n = delta.num_vars();
    let mut vars = twisted_vars.to_vec();
    vars.sort_unstable();
    vars.dedup();
    if let Some(&bad) = vars.iter().find(|&&j| j >= n) {
        return Err(AlexanderError::VarIndex {
            index: bad,
            vars: n,
        });
    }
    let mut p = delta.clone();
    for j in vars {
        let moved = p.move_variable_to_end(j);
        let mut zk = vec![0; n + 1];
        zk[n] = k as i64;
        let mut tk = vec![0; n + 1];
        tk[j] = k as i64;
        let f = LaurentPoly::from_terms(n + 1, [(zk, 1), (tk, -1)])?;
        let r = resultant(&f, &moved, n)?;
        p = r.drop_variable(n)?;
    }
    Ok(p.normalized())
}

/// A cover polynomial pushed to one variable along a class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pullback {
    pub poly: LaurentPoly,
    pub leading_unit: bool,
    pub trailing_unit: bool,
}

impl Pullback {
    pub fn is_monic_up_to_sign(&self) -> bool {
        self.leading_unit && self.trailing_unit
    }
}

/// Substitutes the class `Z^n -> Z` into the cover polynomial and
/// unit-normalizes; records whether the extreme coefficients are `±1`, as they
/// are for fibered classes.
pub fn pullback_class_specialization(
    cover_delta: &LaurentPoly,
    class: &IntLinearMap,
) -> Result<Pullback, AlexanderError> {
    if class.rows() != 1 || !class.is_surjective() {
        return Err(AlexanderError::NotSurjective);
    }
    let poly = cover_delta.substitute_linear(class)?.normalized();
    if poly.is_zero() {
        return Err(AlexanderError::ZeroSpecialization);
    }
    let (_, c) = poly.univariate_coeffs();
    Ok(Pullback {
        leading_unit: c.last().unwrap().abs().is_one(),
        trailing_unit: c[0].abs().is_one(),
        poly,
    })
}
