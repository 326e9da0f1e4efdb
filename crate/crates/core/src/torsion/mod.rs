//! Torsion in the first homology of finite abelian covers.
//!
//! Two routes are provided. For cyclic covers of a knot-type complement the
//! torsion order is a resultant of the Alexander polynomial against
//! `(t^n - 1)/(t - 1)`. For a general finite-index lattice the presentation
//! matrix is expanded over the regular representation of the quotient group
//! and reduced to Smith normal form.

mod snf;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpoly::{big_ln_abs, resultant, LaurentPoly, PolyError, PolyMatrix};

pub use snf::{
    smith_normal_form, smith_normal_form_i64, smith_normal_form_with_transforms, SnfDecomposition,
    SnfResult,
};

/// Default cap on the side length of an expanded presentation matrix.
pub const DEFAULT_DIMENSION_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("lattice must be square and nonsingular")]
    SingularLattice,
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("the polynomial vanishes at an n-th root of unity other than 1 (n = {0})")]
    RootOfUnityZero(u64),
    #[error("cover degree must be positive")]
    ZeroDegree,
    #[error("presentation matrix is empty or ragged")]
    BadPresentation,
    #[error("presentation has {got} variables but the lattice has rank {expected}")]
    RankMismatch { got: usize, expected: usize },
    #[error("expanded matrix would be {rows}x{cols}, above the cap {cap}")]
    TooLarge {
        rows: usize,
        cols: usize,
        cap: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finite-index sublattice of `Z^n`, given by a matrix whose columns span it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    lattice: Vec<Vec<i64>>,
}

impl CoverSpec {
    pub fn new(lattice: Vec<Vec<i64>>) -> Result<Self, TorsionError> {
        let n = lattice.len();
        if n == 0 || lattice.iter().any(|r| r.len() != n) {
            return Err(TorsionError::SingularLattice);
        }
        let spec = Self { lattice };
        if spec.snf().rank_free > 0 {
            return Err(TorsionError::SingularLattice);
        }
        Ok(spec)
    }

    /// `n Z` inside `Z`.
    pub fn cyclic(n: u64) -> Result<Self, TorsionError> {
        if n == 0 {
            return Err(TorsionError::ZeroDegree);
        }
        Self::new(vec![vec![n as i64]])
    }

    /// `diag(n_1, ..., n_k) Z^k`.
    pub fn diagonal(ns: &[u64]) -> Result<Self, TorsionError> {
        if ns.contains(&0) {
            return Err(TorsionError::ZeroDegree);
        }
        let k = ns.len();
        let lattice = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { ns[i] as i64 } else { 0 })
                    .collect()
            })
            .collect();
        Self::new(lattice)
    }

    pub fn rank(&self) -> usize {
        self.lattice.len()
    }

    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    fn snf(&self) -> SnfResult {
        smith_normal_form_i64(&self.lattice)
    }

    /// `|Z^n / lattice|`.
    pub fn index(&self) -> BigInt {
        self.snf().diagonal.iter().product()
    }

    /// The quotient `Z^n / lattice` as a product of cyclic groups, with the
    /// image of each basis vector of `Z^n`.
    pub fn quotient(&self) -> QuotientGroup {
        let big: Vec<Vec<BigInt>> = self
            .lattice
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let dec = smith_normal_form_with_transforms(&big);
        // left * lattice * right = D, so x -> (left x) mod d identifies
        // Z^n / lattice with the product of the Z/d_i.
        let keep: Vec<usize> = (0..self.rank())
            .filter(|&i| !dec.snf.diagonal[i].is_one())
            .collect();
        let orders: Vec<u64> = keep
            .iter()
            .map(|&i| u64::try_from(&dec.snf.diagonal[i]).expect("cover index fits in u64"))
            .collect();
        let generators: Vec<Vec<u64>> = (0..self.rank())
            .map(|j| {
                keep.iter()
                    .zip(&orders)
                    .map(|(&i, &d)| {
                        let v = &dec.left[i][j] % BigInt::from(d);
                        let v = if v.is_negative() {
                            v + BigInt::from(d)
                        } else {
                            v
                        };
                        u64::try_from(&v).unwrap()
                    })
                    .collect()
            })
            .collect();
        QuotientGroup { orders, generators }
    }
}

/// `Z/d_1 x ... x Z/d_k` with the images of the standard basis of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    pub orders: Vec<u64>,
    pub generators: Vec<Vec<u64>>,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.orders.iter().map(|&d| d as usize).product()
    }

    /// Mixed-radix index of an element.
    fn encode(&self, g: &[u64]) -> usize {
        g.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut g = vec![0; self.orders.len()];
        for (x, &d) in g.iter_mut().zip(&self.orders).rev() {
            *x = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        g
    }

    /// Image of an exponent vector of `Z^n`.
    pub fn image(&self, e: &[i64]) -> Vec<u64> {
        self.orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let s: i128 = e
                    .iter()
                    .zip(&self.generators)
                    .map(|(&k, g)| k as i128 * g[i] as i128)
                    .sum();
                s.rem_euclid(d as i128) as u64
            })
            .collect()
    }

    /// Index of `g + h` for element indices.
    fn add(&self, g: usize, h: &[u64]) -> usize {
        let gv = self.decode(g);
        let sum: Vec<u64> = gv
            .iter()
            .zip(h)
            .zip(&self.orders)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        self.encode(&sum)
    }
}

/// `tI - monodromy` as a univariate presentation matrix.
pub fn monodromy_presentation(monodromy: &[Vec<i64>]) -> PolyMatrix {
    let n = monodromy.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = LaurentPoly::constant(1, -monodromy[i][j]);
                    if i == j {
                        &c + &LaurentPoly::var(1, 0)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

/// `|Res(delta, 1 + t + ... + t^(n-1))|`, the order of the torsion of the
/// `n`-fold cyclic cover of a knot-type complement with Alexander polynomial
/// `delta`.
pub fn torsion_cyclic_cover(delta: &LaurentPoly, n: u64) -> Result<BigInt, TorsionError> {
    if delta.num_vars() != 1 {
        return Err(TorsionError::NotUnivariate(delta.num_vars()));
    }
    if n == 0 {
        return Err(TorsionError::ZeroDegree);
    }
    if delta.is_zero() {
        return Err(TorsionError::RootOfUnityZero(n));
    }
    let geometric = LaurentPoly::from_coeffs(&vec![1; n as usize]);
    let r = resultant(delta, &geometric, 0)?;
    let v = r.constant_value().abs();
    if v.is_zero() {
        return Err(TorsionError::RootOfUnityZero(n));
    }
    Ok(v)
}

/// Torsion order and free rank of the module presented by `presentation`
/// after pulling back to the cover given by `cover`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverHomology {
    pub torsion: BigInt,
    pub free_rank: usize,
    pub snf: SnfResult,
}

/// Expands each entry of `presentation` over the regular representation of
/// `Z^n / lattice` and reads torsion and free rank off the Smith form.
pub fn torsion_abelian_cover_snf(
    presentation: &PolyMatrix,
    cover: &CoverSpec,
    dimension_cap: usize,
) -> Result<CoverHomology, TorsionError> {
    let expanded = expand_presentation(presentation, cover, dimension_cap)?;
    let snf = smith_normal_form(&expanded);
    Ok(CoverHomology {
        torsion: snf.torsion(),
        free_rank: snf.rank_free,
        snf,
    })
}

/// The integer matrix obtained by substituting each `t_i` with the permutation
/// matrix of translation by its image in `Z^n / lattice`.
pub fn expand_presentation(
    presentation: &PolyMatrix,
    cover: &CoverSpec,
    dimension_cap: usize,
) -> Result<Vec<Vec<BigInt>>, TorsionError> {
    let rows = presentation.len();
    let cols = presentation.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || presentation.iter().any(|r| r.len() != cols) {
        return Err(TorsionError::BadPresentation);
    }
    for p in presentation.iter().flatten() {
        if p.num_vars() != cover.rank() {
            return Err(TorsionError::RankMismatch {
                got: p.num_vars(),
                expected: cover.rank(),
            });
        }
    }
    let group = cover.quotient();
    let order = group.order();
    let (big_rows, big_cols) = (rows * order, cols * order);
    if big_rows > dimension_cap || big_cols > dimension_cap {
        return Err(TorsionError::TooLarge {
            rows: big_rows,
            cols: big_cols,
            cap: dimension_cap,
        });
    }
    let mut out = vec![vec![BigInt::zero(); big_cols]; big_rows];
    for (i, row) in presentation.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for (e, c) in entry.terms() {
                let shift = group.image(e);
                for g in 0..order {
                    let h = group.add(g, &shift);
                    out[i * order + g][j * order + h] += c;
                }
            }
        }
    }
    Ok(out)
}

/// One entry of [`growth_series`]. `log_growth` is `None` when the
/// polynomial vanishes at a nontrivial `n`-th root of unity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub n: u64,
    #[serde(serialize_with = "crate::bigser::opt_big")]
    pub torsion: Option<BigInt>,
    pub log_growth: Option<f64>,
}

/// `(n, log(torsion_n) / n)` for `n = 1..=n_max`, computed in parallel and
/// returned in order of `n`.
pub fn growth_series(delta: &LaurentPoly, n_max: u64) -> Result<Vec<GrowthPoint>, TorsionError> {
    if delta.num_vars() != 1 {
        return Err(TorsionError::NotUnivariate(delta.num_vars()));
    }
    (1..=n_max)
        .into_par_iter()
        .map(|n| match torsion_cyclic_cover(delta, n) {
            Ok(t) => Ok(GrowthPoint {
                n,
                log_growth: Some(big_ln_abs(&t) / n as f64),
                torsion: Some(t),
            }),
            Err(TorsionError::RootOfUnityZero(_)) => Ok(GrowthPoint {
                n,
                torsion: None,
                log_growth: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    #[test]
    fn cyclic_torsion_examples() {
        assert_eq!(torsion_cyclic_cover(&poly(&[1]), 7).unwrap(), BigInt::one());
        assert_eq!(
            torsion_cyclic_cover(&poly(&[1, -1, 1]), 2).unwrap(),
            3.into()
        );
        assert_eq!(
            torsion_cyclic_cover(&poly(&[1, -3, 1]), 2).unwrap(),
            5.into()
        );
        assert_eq!(
            torsion_cyclic_cover(&poly(&[1, -3, 1]), 3).unwrap(),
            16.into()
        );
        assert_eq!(
            torsion_cyclic_cover(&poly(&[1, -1, 1]), 6),
            Err(TorsionError::RootOfUnityZero(6))
        );
    }

    #[test]
    fn snf_route_examples() {
        let fig8 = monodromy_presentation(&[vec![2, 1], vec![1, 1]]);
        let h = torsion_abelian_cover_snf(&fig8, &CoverSpec::cyclic(2).unwrap(), 64).unwrap();
        assert_eq!(h.torsion, 5.into());
        assert_eq!(h.free_rank, 0);

        let unknot = vec![vec![poly(&[-1, 1])]];
        let h = torsion_abelian_cover_snf(&unknot, &CoverSpec::cyclic(3).unwrap(), 64).unwrap();
        assert_eq!(h.torsion, BigInt::one());
        assert!(h.snf.diagonal.iter().any(Zero::is_zero));

        let two = vec![vec![poly(&[-2, 1])]];
        let h = torsion_abelian_cover_snf(&two, &CoverSpec::cyclic(3).unwrap(), 64).unwrap();
        assert_eq!(h.torsion, 7.into());
    }

    #[test]
    fn quotient_of_skew_lattice() {
        // columns (2, 0) and (1, 3): index 6, cyclic
        let c = CoverSpec::new(vec![vec![2, 1], vec![0, 3]]).unwrap();
        assert_eq!(c.index(), 6.into());
        let q = c.quotient();
        assert_eq!(q.order(), 6);
        // lattice columns map to zero
        assert!(q.image(&[2, 0]).iter().all(|&x| x == 0));
        assert!(q.image(&[1, 3]).iter().all(|&x| x == 0));
        assert!(CoverSpec::new(vec![vec![1, 2], vec![2, 4]]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let m = monodromy_presentation(&[vec![2, 1], vec![1, 1]]);
        let err = torsion_abelian_cover_snf(&m, &CoverSpec::cyclic(10).unwrap(), 8).unwrap_err();
        assert!(matches!(err, TorsionError::TooLarge { .. }));
    }

    #[test]
    fn growth_flags_roots_of_unity() {
        let s = growth_series(&poly(&[1, -1, 1]), 12).unwrap();
        assert!(s[5].log_growth.is_none() && s[11].log_growth.is_none());
        assert!(s[0].log_growth.is_some());
        let trivial = growth_series(&poly(&[1]), 5).unwrap();
        assert!(trivial.iter().all(|g| g.log_growth == Some(0.0)));
    }
}
