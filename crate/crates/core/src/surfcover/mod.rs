//! Finite covers of punctured surfaces, modelled as transitive permutation
//! actions of a free group, and the homology actions of lifted automorphisms.
//!
//! Points are `0..d` internally and `1..=d` in serialized one-line notation.
//! The action is on the right: `p . x_j = perms[j][p]`.

mod enumerate;
mod homology;
mod search;

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lpoly::{big_to_f64, char_poly_big, LaurentPoly, PolyError};
use crate::mahler::{is_cyclotomic_product_univariate, squarefree_decomposition, MahlerError};
use crate::roots::roots;
use crate::torsion::smith_normal_form;
use crate::word::{Letter, Word, WordError};

pub use enumerate::{
    canonical_form, cover_census, enumerate_covers, isomorphisms, normal_form, subgroups,
    CoverCensus, DEFAULT_DEGREE_CAP,
};
pub use homology::{lifted_homology_action, lifted_homology_map, pushforward_matrix, CycleBasis};
pub use search::{
    lift_power_orbit, spectral_lift_search, DegreeSummary, LiftHit, PowerLift, SearchOutcome,
    RADIUS_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("permutation {0} is not a bijection of the points")]
    NotPermutation(usize),
    #[error("the action is not transitive")]
    NotTransitive,
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("images do not define an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("the point map does not intertwine the actions")]
    NotIntertwiner,
    #[error("the pushforward does not intertwine base and lift")]
    NotIntertwined,
    #[error("matrix shapes do not match")]
    Shape,
    #[error("pushforward is not surjective over the rationals")]
    PushforwardNotSurjective,
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Mahler(#[from] MahlerError),
}

/// Square integer matrix, columns are images of basis vectors.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// An automorphism of the free group `F_rank`, with a supplied inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AutomorphismDoc", into = "AutomorphismDoc")]
pub struct FreeAutomorphism {
    name: Option<String>,
    rank: usize,
    images: Vec<Word>,
    inverse: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomorphismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    rank: usize,
    images: Vec<Word>,
    inverse: Vec<Word>,
}

impl TryFrom<AutomorphismDoc> for FreeAutomorphism {
    type Error = SurfError;
    fn try_from(d: AutomorphismDoc) -> Result<Self, SurfError> {
        let mut f = FreeAutomorphism::new(d.rank, d.images, d.inverse)?;
        f.name = d.name;
        Ok(f)
    }
}

impl From<FreeAutomorphism> for AutomorphismDoc {
    fn from(f: FreeAutomorphism) -> Self {
        Self {
            name: f.name,
            rank: f.rank,
            images: f.images,
            inverse: f.inverse,
        }
    }
}

impl FreeAutomorphism {
    /// Checks that the abelianization is unimodular and that `inverse`
    /// composes with `images` to the identity on generators, both ways.
    pub fn new(rank: usize, images: Vec<Word>, inverse: Vec<Word>) -> Result<Self, SurfError> {
        if images.len() != rank || inverse.len() != rank {
            return Err(SurfError::RankMismatch {
                left: rank,
                right: images.len().min(inverse.len()),
            });
        }
        for w in images.iter().chain(&inverse) {
            w.check_rank(rank)?;
        }
        let images: Vec<Word> = images.iter().map(Word::reduced).collect();
        let inverse: Vec<Word> = inverse.iter().map(Word::reduced).collect();
        let f = Self {
            name: None,
            rank,
            images,
            inverse,
        };
        let det = crate::lpoly::char_poly(&f.abelianization())?.coeff(&[0]);
        if det.magnitude() != &1u32.into() {
            return Err(SurfError::NotAutomorphism(format!(
                "abelianization has det {det}"
            )));
        }
        for j in 0..rank {
            let x = Word::generator(j);
            let there = x.substitute(&f.inverse).substitute(&f.images);
            let back = x.substitute(&f.images).substitute(&f.inverse);
            if there != x || back != x {
                return Err(SurfError::NotAutomorphism(format!(
                    "inverse does not undo x{}",
                    j + 1
                )));
            }
        }
        Ok(f)
    }

    /// Parses image and inverse words.
    pub fn parse(rank: usize, images: &[&str], inverse: &[&str]) -> Result<Self, SurfError> {
        let p = |v: &[&str]| -> Result<Vec<Word>, SurfError> {
            v.iter().map(|s| Ok(s.parse::<Word>()?)).collect()
        };
        Self::new(rank, p(images)?, p(inverse)?)
    }

    pub fn identity(rank: usize) -> Self {
        let id: Vec<Word> = (0..rank).map(Word::generator).collect();
        Self {
            name: Some("identity".into()),
            rank,
            images: id.clone(),
            inverse: id,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse
    }

    /// Action on `H_1(F_rank) = Z^rank`; column `j` is the exponent sum of
    /// the image of `x_j`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        let cols: Vec<Vec<i64>> = self
            .images
            .iter()
            .map(|w| w.exponent_sum(self.rank))
            .collect();
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| cols[j][i]).collect())
            .collect()
    }
}

/// A transitive action of `F_r` on `d` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermCover {
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl PermCover {
    /// `perms[j][p]` is `p . x_j` (0-based).
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self, SurfError> {
        let d = perms.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(SurfError::NotPermutation(0));
        }
        let mut inverses = Vec::with_capacity(perms.len());
        for (j, p) in perms.iter().enumerate() {
            if p.len() != d {
                return Err(SurfError::NotPermutation(j));
            }
            let mut inv = vec![usize::MAX; d];
            for (a, &b) in p.iter().enumerate() {
                if b >= d || inv[b] != usize::MAX {
                    return Err(SurfError::NotPermutation(j));
                }
                inv[b] = a;
            }
            inverses.push(inv);
        }
        let c = Self { perms, inverses };
        if !c.is_transitive() {
            return Err(SurfError::NotTransitive);
        }
        Ok(c)
    }

    /// Builds from 1-based one-line notation.
    pub fn from_one_line(perms: &[Vec<usize>]) -> Result<Self, SurfError> {
        let zero: Vec<Vec<usize>> = perms
            .iter()
            .enumerate()
            .map(|(j, p)| {
                p.iter()
                    .map(|&x| x.checked_sub(1).ok_or(SurfError::NotPermutation(j)))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Self::new(zero)
    }

    /// The trivial cover of degree one.
    pub fn trivial(rank: usize) -> Self {
        Self {
            perms: vec![vec![0]; rank],
            inverses: vec![vec![0]; rank],
        }
    }

    pub fn degree(&self) -> usize {
        self.perms[0].len()
    }

    pub fn rank(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn one_line(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|p| p.iter().map(|x| x + 1).collect())
            .collect()
    }

    pub fn step(&self, p: usize, l: Letter) -> usize {
        if l.inverse {
            self.inverses[l.generator][p]
        } else {
            self.perms[l.generator][p]
        }
    }

    /// `p . w`.
    pub fn act(&self, p: usize, w: &Word) -> usize {
        w.letters().iter().fold(p, |q, &l| self.step(q, l))
    }

    /// The permutation `p -> p . w`.
    pub fn word_perm(&self, w: &Word) -> Vec<usize> {
        (0..self.degree()).map(|p| self.act(p, w)).collect()
    }

    fn is_transitive(&self) -> bool {
        let d = self.degree();
        let mut seen = vec![false; d];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(p) = queue.pop_front() {
            for j in 0..self.rank() {
                for q in [self.perms[j][p], self.inverses[j][p]] {
                    if !seen[q] {
                        seen[q] = true;
                        count += 1;
                        queue.push_back(q);
                    }
                }
            }
        }
        count == d
    }

    /// The cover on which `x_j` acts as `phi(x_j)` acts here.
    pub fn pullback(&self, phi: &FreeAutomorphism) -> Self {
        let perms: Vec<Vec<usize>> = phi.images().iter().map(|w| self.word_perm(w)).collect();
        Self::new(perms).expect("pullback of a transitive action along an automorphism")
    }
}

impl Serialize for PermCover {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc {
            degree: usize,
            perms: Vec<Vec<usize>>,
        }
        Doc {
            degree: self.degree(),
            perms: self.one_line(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermCover {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            degree: usize,
            perms: Vec<Vec<usize>>,
        }
        let doc = Doc::deserialize(d)?;
        let c = PermCover::from_one_line(&doc.perms).map_err(serde::de::Error::custom)?;
        if c.degree() != doc.degree {
            return Err(serde::de::Error::custom(
                "degree does not match the permutations",
            ));
        }
        Ok(c)
    }
}

/// A lift of an automorphism to a cover: the point map and the action on the
/// first homology of the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftData {
    pub tau: Vec<usize>,
    pub homology_matrix: IntMatrix,
}

/// Does `tau` satisfy `tau(p . x_j) = tau(p) . phi(x_j)` from `source` to
/// `target` for every point and generator?
pub fn is_intertwiner(
    source: &PermCover,
    target: &PermCover,
    images: &[Word],
    tau: &[usize],
) -> bool {
    let d = source.degree();
    if tau.len() != d || target.degree() != d {
        return false;
    }
    let mut hit = vec![false; d];
    for &t in tau {
        if t >= d || hit[t] {
            return false;
        }
        hit[t] = true;
    }
    (0..d).all(|p| {
        (0..source.rank()).all(|j| tau[source.perms[j][p]] == target.act(tau[p], &images[j]))
    })
}

/// All point maps `tau` from `source` to `target` with
/// `tau(p . x_j) = tau(p) . images[j]`, found by fixing `tau(0)` and
/// propagating along the Schreier graph.
pub fn intertwiners(source: &PermCover, target: &PermCover, images: &[Word]) -> Vec<Vec<usize>> {
    let d = source.degree();
    if target.degree() != d {
        return Vec::new();
    }
    let inv_images: Vec<Word> = images.iter().map(Word::inverse).collect();
    let mut out = Vec::new();
    'start: for q in 0..d {
        let mut tau = vec![usize::MAX; d];
        tau[0] = q;
        let mut queue = VecDeque::from([0]);
        while let Some(p) = queue.pop_front() {
            for j in 0..source.rank() {
                let moves = [
                    (source.perms[j][p], target.act(tau[p], &images[j])),
                    (source.inverses[j][p], target.act(tau[p], &inv_images[j])),
                ];
                for (p2, t2) in moves {
                    if tau[p2] == usize::MAX {
                        tau[p2] = t2;
                        queue.push_back(p2);
                    } else if tau[p2] != t2 {
                        continue 'start;
                    }
                }
            }
        }
        if is_intertwiner(source, target, images, &tau) {
            out.push(tau);
        }
    }
    out
}

/// Every point map along which `phi` lifts to `cover`; empty if none.
pub fn lift_exists(
    cover: &PermCover,
    phi: &FreeAutomorphism,
) -> Result<Vec<Vec<usize>>, SurfError> {
    if cover.rank() != phi.rank() {
        return Err(SurfError::RankMismatch {
            left: cover.rank(),
            right: phi.rank(),
        });
    }
    Ok(intertwiners(cover, cover, phi.images()))
}

/// All lifts of `phi` to `cover` with their homology matrices.
pub fn lifts(cover: &PermCover, phi: &FreeAutomorphism) -> Result<Vec<LiftData>, SurfError> {
    lift_exists(cover, phi)?
        .into_iter()
        .map(|tau| {
            let homology_matrix = lifted_homology_action(cover, phi, &tau)?;
            Ok(LiftData {
                tau,
                homology_matrix,
            })
        })
        .collect()
}

/// Converts a small-entry matrix.
pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_pow(a: &IntMatrix, k: u32) -> IntMatrix {
    let n = a.len();
    let mut acc: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    for _ in 0..k {
        acc = mat_mul(&acc, a);
    }
    acc
}

/// Largest modulus of an eigenvalue. Exactly `1` when the characteristic
/// polynomial is a product of cyclotomic polynomials and `t`-powers.
pub fn spectral_radius(m: &IntMatrix) -> Result<f64, SurfError> {
    if m.is_empty() {
        return Ok(0.0);
    }
    let cp = char_poly_big(m)?;
    spectral_radius_of_char_poly(&cp)
}

pub fn spectral_radius_of_char_poly(cp: &LaurentPoly) -> Result<f64, SurfError> {
    let core = cp.normalized();
    if core.degree_in(0) == 0 {
        return Ok(0.0);
    }
    if is_cyclotomic_product_univariate(&core)? {
        return Ok(1.0);
    }
    let mut radius: f64 = 0.0;
    for (factor, _) in squarefree_decomposition(&core) {
        let (_, c) = factor.univariate_coeffs();
        if c.len() < 2 {
            continue;
        }
        let cc: Vec<Complex64> = c
            .iter()
            .map(|x| Complex64::new(big_to_f64(x), 0.0))
            .collect();
        for r in roots(&cc) {
            radius = radius.max(r.z.norm());
        }
    }
    Ok(radius)
}

/// Rank over the rationals.
pub fn rational_rank(m: &IntMatrix) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    smith_normal_form(m).rank()
}

/// With `pushforward * lift = base * pushforward` and the pushforward onto
/// over `Q`, decides whether the characteristic polynomial of `base` divides
/// that of `lift` over `Z`.
pub fn verify_quotient_divisibility(
    base: &IntMatrix,
    lift: &IntMatrix,
    pushforward: &IntMatrix,
) -> Result<bool, SurfError> {
    let (c, l) = (base.len(), lift.len());
    if pushforward.len() != c
        || pushforward.iter().any(|r| r.len() != l)
        || base.iter().any(|r| r.len() != c)
        || lift.iter().any(|r| r.len() != l)
    {
        return Err(SurfError::Shape);
    }
    if mat_mul(pushforward, lift) != mat_mul(base, pushforward) {
        return Err(SurfError::NotIntertwined);
    }
    if rational_rank(pushforward) != c {
        return Err(SurfError::PushforwardNotSurjective);
    }
    let cl = char_poly_big(lift)?;
    let cb = char_poly_big(base)?;
    Ok(cl.exact_div(&cb).is_some())
}
