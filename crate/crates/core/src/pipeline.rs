//! The end-to-end check on a fibered manifold record:
//!
//! 1. every fibered class: spectral radius and Mahler measure of the
//!    monodromy's characteristic polynomial;
//! 2. the Mahler measure of the multivariable Alexander polynomial and, for
//!    `b1 >= 2`, a rational slice with positive logarithmic measure;
//! 3. the `Z_k^(b1-1)` cover built from that slice: its Alexander polynomial,
//!    the specialization along the pulled-back class, and its measure.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::alexander::{
    abelian_cover_alexander, char_poly_fibered, pullback_class_specialization, AlexanderError,
    ManifoldRecord,
};
use crate::lpoly::{IntLinearMap, LaurentPoly, PolyError};
use crate::mahler::{
    find_positive_slice_from, jensen_slice_integral, mahler_measure, mahler_univariate,
    MahlerError, MahlerMethod, MahlerResult, QuadratureConfig, SlicePoint,
};
use crate::surfcover::{spectral_radius_of_char_poly, SurfError};
use crate::torsion::{smith_normal_form_with_transforms, CoverSpec, TorsionError};

/// Always attached: the record's geometric type is taken on trust.
pub const UNVERIFIED_WARNING: &str =
    "hyperbolicity and pseudo-Anosov monodromy are assumed from the record, not verified";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("record has neither an Alexander polynomial nor a fibered class")]
    MissingData,
    #[error(
        "class {class:?} specializes the cover polynomial to zero; \
         apply the correction factor p(t) via specialize_with_correction"
    )]
    ZeroSpecialization { class: Vec<i64> },
    #[error("class {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
    #[error(transparent)]
    Mahler(#[from] MahlerError),
    #[error(transparent)]
    Surf(#[from] SurfError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Radii and measures must exceed `1 + threshold`.
    pub threshold: f64,
    pub quadrature: QuadratureConfig,
    /// Slice search starts at this common denominator, falling back to 1.
    pub min_slice_denominator: i64,
    pub max_slice_denominator: i64,
    /// A slice counts as positive when its log-measure exceeds this.
    pub slice_margin: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            threshold: 1e-9,
            quadrature: QuadratureConfig::default(),
            min_slice_denominator: 2,
            max_slice_denominator: 24,
            slice_margin: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReport {
    pub class: Vec<i64>,
    pub char_poly: LaurentPoly,
    pub spectral_radius: f64,
    pub mahler: MahlerResult,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Statement1 {
    pub classes: Vec<ClassReport>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceReport {
    pub point: String,
    pub denominator: i64,
    pub log_measure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Statement2 {
    pub delta: LaurentPoly,
    /// The class used to adapt coordinates (first coordinate = class).
    pub class: Vec<i64>,
    /// `delta` in coordinates where the class is the first coordinate.
    pub adapted_delta: LaurentPoly,
    pub mahler: MahlerResult,
    pub positive_slice: Option<SliceReport>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Statement3 {
    pub k: u64,
    /// Twisted coordinates (1-based, adapted coordinates).
    pub twisted: Vec<usize>,
    pub cover_delta: LaurentPoly,
    pub pullback_class: Vec<i64>,
    /// Characteristic polynomial of the lifted monodromy, up to factors of
    /// `t - 1`, on a fiber with `fiber_components` components.
    pub pullback: LaurentPoly,
    pub leading_unit: bool,
    pub mahler: MahlerResult,
    /// Product over the characters of the slice measures.
    pub character_product: f64,
    pub fiber_components: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub manifold: String,
    pub b1: usize,
    pub closed: bool,
    pub statement1: Option<Statement1>,
    pub statement2: Option<Statement2>,
    pub statement3: Option<Statement3>,
    pub warnings: Vec<String>,
}

/// A unimodular `W` whose first row is `a`; requires `a` primitive.
fn completion(a: &[i64]) -> Result<Vec<Vec<i64>>, PipelineError> {
    let row: Vec<Vec<BigInt>> = vec![a.iter().map(|&x| BigInt::from(x)).collect()];
    let dec = smith_normal_form_with_transforms(&row);
    if dec
        .snf
        .diagonal
        .first()
        .is_none_or(|d| d != &BigInt::from(1))
    {
        return Err(PipelineError::NotPrimitive(a.to_vec()));
    }
    // left * a * right = e1 with left = ±1, so a = left * e1 * right^-1.
    let right = &dec.right;
    let inv = smith_normal_form_with_transforms(right);
    // inv.left * right * inv.right = I, so right^-1 = inv.right * inv.left.
    let n = a.len();
    let mut w: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: BigInt = (0..n).map(|k| &inv.right[i][k] * &inv.left[k][j]).sum();
                    i64::try_from(s).expect("small unimodular completion")
                })
                .collect()
        })
        .collect();
    if w[0] != a {
        for x in &mut w[0] {
            *x = -*x;
        }
    }
    debug_assert_eq!(w[0], a);
    Ok(w)
}

/// Number of cosets of the image of `ker(e1)` in `Z^n / (Z x kZ^(n-1))`.
fn fiber_components(n: usize, k: u64) -> Result<u64, PipelineError> {
    let mut diag = vec![1u64];
    diag.extend(std::iter::repeat_n(k, n - 1));
    let group = CoverSpec::diagonal(&diag)?.quotient();
    let order = group.order() as u64;
    let gens: Vec<Vec<u64>> = (1..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            group.image(&e)
        })
        .collect();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let zero = vec![0u64; group.orders.len()];
    let mut stack = vec![zero.clone()];
    seen.insert(zero);
    while let Some(g) = stack.pop() {
        for h in &gens {
            let s: Vec<u64> = g
                .iter()
                .zip(h)
                .zip(&group.orders)
                .map(|((a, b), d)| (a + b) % d)
                .collect();
            if seen.insert(s.clone()) {
                stack.push(s);
            }
        }
    }
    Ok(order / seen.len() as u64)
}

/// Runs all three steps on a record.
pub fn run_pipeline(
    rec: &ManifoldRecord,
    cfg: &PipelineConfig,
) -> Result<PipelineReport, PipelineError> {
    rec.validate()?;
    let mut warnings = vec![UNVERIFIED_WARNING.to_string()];
    let n = rec.b1;

    let statement1 = if rec.fibered_classes.is_empty() {
        warnings.push("no fibered class supplied; statement (1) not evaluated".into());
        None
    } else {
        let mut classes = Vec::new();
        for fc in &rec.fibered_classes {
            let cp = char_poly_fibered(fc)?;
            let spectral_radius = spectral_radius_of_char_poly(&cp)?;
            let mahler = mahler_univariate(&cp)?;
            classes.push(ClassReport {
                class: fc.a.clone(),
                holds: spectral_radius > 1.0 + cfg.threshold,
                char_poly: cp,
                spectral_radius,
                mahler,
            });
        }
        let holds = classes.iter().all(|c| c.holds);
        Some(Statement1 { classes, holds })
    };

    let delta = match rec.alexander_polynomial()? {
        Some(d) => d,
        None if n == 1 && !rec.fibered_classes.is_empty() => {
            warnings.push("Alexander polynomial taken from the fibered monodromy".into());
            char_poly_fibered(&rec.fibered_classes[0])?
        }
        None => return Err(PipelineError::MissingData),
    };
    if delta.is_zero() {
        return Err(MahlerError::ZeroPolynomial.into());
    }

    let class: Vec<i64> = match rec.fibered_classes.first() {
        Some(fc) => fc.a.clone(),
        None => {
            warnings.push("no fibered class; the first coordinate class is used".into());
            let mut e = vec![0; n];
            e[0] = 1;
            e
        }
    };
    let w = completion(&class)?;
    let adapted = delta.substitute_linear(&IntLinearMap::new(w)?)?;

    if let Some(s1) = &statement1 {
        let spec = adapted.substitute_linear(&IntLinearMap::row(&{
            let mut e = vec![0; n];
            e[0] = 1;
            e
        }))?;
        if !spec.is_zero() {
            let m = mahler_univariate(&spec)?;
            let first = &s1.classes[0];
            let tol = 1e-6 * m.value.max(first.mahler.value);
            if (m.value - first.mahler.value).abs() > tol {
                warnings.push(format!(
                    "M of the class specialization ({:.10}) differs from M of the monodromy characteristic polynomial ({:.10})",
                    m.value, first.mahler.value
                ));
            }
        }
    }

    let mahler = mahler_measure(&adapted, &cfg.quadrature)?;
    let measure_holds = match mahler.method {
        MahlerMethod::ExactOne => false,
        MahlerMethod::Roots => mahler.exceeds_one(cfg.threshold),
        MahlerMethod::SliceQuadrature => mahler.value - mahler.error_estimate > 1.0 + cfg.threshold,
    };
    let positive_slice = if n >= 2 && measure_holds {
        let found = match find_positive_slice_from(
            &adapted,
            cfg.min_slice_denominator,
            cfg.max_slice_denominator,
            cfg.slice_margin,
        )? {
            Some(p) => Some(p),
            None => {
                find_positive_slice_from(&adapted, 1, cfg.max_slice_denominator, cfg.slice_margin)?
            }
        };
        match found {
            Some(point) => Some(SliceReport {
                denominator: point.common_denominator(),
                log_measure: jensen_slice_integral(&adapted, &point)?,
                point: point.to_string(),
            }),
            None => {
                warnings.push("no positive slice found within the denominator bound".into());
                None
            }
        }
    } else {
        None
    };
    let holds2 = measure_holds && (n == 1 || positive_slice.is_some());
    let statement2 = Statement2 {
        delta: delta.clone(),
        class: class.clone(),
        adapted_delta: adapted.clone(),
        mahler,
        positive_slice,
        holds: holds2,
    };

    let k: u64 = match &statement2.positive_slice {
        Some(s) => s.denominator as u64,
        None => 1,
    };
    let twisted: Vec<usize> = (1..n).collect();
    let cover_delta = if k > 1 {
        abelian_cover_alexander(&adapted, k, &twisted)?
    } else {
        adapted.normalized()
    };
    let mut e1 = vec![0; n];
    e1[0] = 1;
    let pullback = match pullback_class_specialization(&cover_delta, &IntLinearMap::row(&e1)) {
        Ok(p) => p,
        Err(AlexanderError::ZeroSpecialization) => {
            return Err(PipelineError::ZeroSpecialization { class })
        }
        Err(e) => return Err(e.into()),
    };
    let m3 = mahler_univariate(&pullback.poly)?;
    let mut log_product = 0.0;
    if n >= 2 {
        let total = (k as usize).pow((n - 1) as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut coords = Vec::with_capacity(n - 1);
            for _ in 1..n {
                coords.push(((rest % k as usize) as i64, k as i64));
                rest /= k as usize;
            }
            log_product += jensen_slice_integral(&adapted, &SlicePoint::new(coords))?;
        }
    } else {
        log_product = m3.log_value;
    }
    let statement3 = Statement3 {
        k,
        twisted: twisted.iter().map(|j| j + 1).collect(),
        cover_delta,
        pullback_class: class,
        holds: pullback.leading_unit && m3.exceeds_one(cfg.threshold),
        leading_unit: pullback.leading_unit,
        pullback: pullback.poly,
        mahler: m3,
        character_product: log_product.exp(),
        fiber_components: if n >= 2 { fiber_components(n, k)? } else { 1 },
    };
    if !statement3.leading_unit {
        warnings
            .push("pullback is not monic up to sign; the class is not fibered on the cover".into());
    }

    Ok(PipelineReport {
        manifold: rec.name.clone(),
        b1: n,
        closed: rec.closed,
        statement1,
        statement2: Some(statement2),
        statement3: Some(statement3),
        warnings,
    })
}

fn fmt_measure(m: &MahlerResult) -> String {
    format!(
        "{:.10} ({}, error {:.1e})",
        m.value, m.method, m.error_estimate
    )
}

impl PipelineReport {
    /// Machine-readable rendering (pretty JSON, fields as in the struct).
    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let yn = |b: bool| if b { "true" } else { "false" };
        let _ = writeln!(s, "manifold: {}", self.manifold);
        let _ = writeln!(s, "b1: {}  closed: {}", self.b1, self.closed);
        match &self.statement1 {
            Some(s1) => {
                let _ = writeln!(s, "statement 1 (spectral radius > 1): {}", yn(s1.holds));
                for c in &s1.classes {
                    let _ = writeln!(
                        s,
                        "  class {:?}: char poly {}, radius {:.10}, M {}",
                        c.class,
                        c.char_poly,
                        c.spectral_radius,
                        fmt_measure(&c.mahler)
                    );
                }
            }
            None => {
                let _ = writeln!(s, "statement 1 (spectral radius > 1): not evaluated");
            }
        }
        if let Some(s2) = &self.statement2 {
            let _ = writeln!(s, "statement 2 (Mahler measure > 1): {}", yn(s2.holds));
            let _ = writeln!(s, "  delta: {}", s2.delta);
            if self.b1 > 1 {
                let _ = writeln!(s, "  adapted to class {:?}: {}", s2.class, s2.adapted_delta);
            }
            let _ = writeln!(s, "  M: {}", fmt_measure(&s2.mahler));
            if let Some(p) = &s2.positive_slice {
                let _ = writeln!(
                    s,
                    "  positive slice at {} (denominator {}), log M {:.10}",
                    p.point, p.denominator, p.log_measure
                );
            }
        }
        if let Some(s3) = &self.statement3 {
            let _ = writeln!(s, "statement 3 (cover evidence): {}", yn(s3.holds));
            let _ = writeln!(
                s,
                "  cover: Z_{}^{} on coordinates {:?}",
                s3.k,
                s3.twisted.len(),
                s3.twisted
            );
            let _ = writeln!(s, "  cover delta: {}", s3.cover_delta);
            let _ = writeln!(
                s,
                "  pullback along {:?}: {}",
                s3.pullback_class, s3.pullback
            );
            let _ = writeln!(s, "  leading coefficient +-1: {}", yn(s3.leading_unit));
            let _ = writeln!(s, "  M: {}", fmt_measure(&s3.mahler));
            let _ = writeln!(
                s,
                "  character product of slice measures: {:.10}",
                s3.character_product
            );
            let _ = writeln!(s, "  fiber components: {}", s3.fiber_components);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
