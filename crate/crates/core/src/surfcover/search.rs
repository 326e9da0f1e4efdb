//! Search for a lift of a power of an automorphism to a finite cover whose
//! homological spectral radius exceeds one.
//!
//! Pulling a cover back along `phi` permutes the conjugacy classes of covers
//! of a given degree, so some power `phi^k` with `k` at most the number of
//! classes maps each class to itself, and then `phi^k` lifts. The lift of
//! `phi^k` is assembled from `k` lifts of `phi` between consecutive covers of
//! the orbit and a relabelling back to the starting cover, which avoids
//! expanding the words of `phi^k`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{canonical_form, cover_census, isomorphisms, DEFAULT_DEGREE_CAP};
use super::{
    lifted_homology_map, mat_mul, mat_pow, spectral_radius, to_big, FreeAutomorphism, IntMatrix,
    PermCover, SurfError,
};
use crate::word::Word;

/// Radii above `1 + RADIUS_TOL` count as growth.
pub const RADIUS_TOL: f64 = 1e-9;

/// A lift of `phi^power` to a cover.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLift {
    pub power: usize,
    /// Point map of the lift (0-based).
    pub tau: Vec<usize>,
    #[serde(serialize_with = "ser_matrix")]
    pub homology_matrix: IntMatrix,
    /// Abelianization of `phi^power`.
    #[serde(serialize_with = "ser_matrix")]
    pub base_matrix: IntMatrix,
    pub radius: f64,
}

fn ser_matrix<S: serde::Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&Row(row))?;
    }
    seq.end()
}

struct Row<'a>(&'a [num_bigint::BigInt]);

impl Serialize for Row<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::bigser::big_vec(self.0, s)
    }
}

/// Smallest `k <= max_power` for which `phi^k` lifts to `cover`, with all
/// lifts of `phi^k`; `None` if no such `k`.
pub fn lift_power_orbit(
    cover: &PermCover,
    phi: &FreeAutomorphism,
    max_power: usize,
) -> Result<Option<Vec<PowerLift>>, SurfError> {
    if cover.rank() != phi.rank() {
        return Err(SurfError::RankMismatch {
            left: cover.rank(),
            right: phi.rank(),
        });
    }
    let mut orbit = vec![cover.clone()];
    for k in 1..=max_power {
        let next = orbit[k - 1].pullback(phi);
        orbit.push(next);
        let rhos = isomorphisms(cover, &orbit[k]);
        if rhos.is_empty() {
            continue;
        }
        return lifts_along_orbit(&orbit, phi, &rhos).map(Some);
    }
    Ok(None)
}

fn lifts_along_orbit(
    orbit: &[PermCover],
    phi: &FreeAutomorphism,
    rhos: &[Vec<usize>],
) -> Result<Vec<PowerLift>, SurfError> {
    let k = orbit.len() - 1;
    let d = orbit[0].degree();
    let identity_tau: Vec<usize> = (0..d).collect();
    // phi maps the cover orbit[i] onto orbit[i - 1] with the identity point map
    let mut chain: Option<IntMatrix> = None;
    for i in 1..=k {
        let step = lifted_homology_map(&orbit[i], &orbit[i - 1], phi.images(), &identity_tau)?;
        chain = Some(match chain {
            None => step,
            Some(c) => mat_mul(&c, &step),
        });
    }
    let chain = chain.expect("k >= 1");
    let base_matrix = mat_pow(&to_big(&phi.abelianization()), k as u32);
    let gens: Vec<Word> = (0..phi.rank()).map(Word::generator).collect();
    rhos.iter()
        .map(|rho| {
            let relabel = lifted_homology_map(&orbit[0], &orbit[k], &gens, rho)?;
            let homology_matrix = mat_mul(&chain, &relabel);
            let radius = spectral_radius(&homology_matrix)?;
            Ok(PowerLift {
                power: k,
                tau: rho.clone(),
                homology_matrix,
                base_matrix: base_matrix.clone(),
                radius,
            })
        })
        .collect()
}

/// A lift with spectral radius above one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftHit {
    pub cover: PermCover,
    pub lift: PowerLift,
}

/// Per-degree summary of a search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub classes: usize,
    pub lifts: usize,
    pub max_radius: f64,
    pub max_power: usize,
}

/// Result of [`spectral_lift_search`]. `found == None` is inconclusive: it
/// only says nothing was found up to the searched degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub found: Option<LiftHit>,
    pub degrees: Vec<DegreeSummary>,
    pub covers_checked: usize,
    pub note: Option<String>,
}

/// Scans covers by increasing degree; for each conjugacy class uses the least
/// power of `phi` that lifts. Returns the first lift, in canonical class order,
/// whose homological spectral radius exceeds one.
pub fn spectral_lift_search(
    phi: &FreeAutomorphism,
    d_max: usize,
) -> Result<SearchOutcome, SurfError> {
    let mut outcome = SearchOutcome {
        found: None,
        degrees: Vec::new(),
        covers_checked: 0,
        note: None,
    };
    for degree in 1..=d_max {
        let census = match cover_census(phi.rank(), degree, DEFAULT_DEGREE_CAP) {
            Ok(c) => c,
            Err(SurfError::DegreeCap { degree, cap }) => {
                outcome.note = Some(format!("stopped: degree {degree} above cap {cap}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let classes = census.classes;
        let index: BTreeMap<Vec<Vec<usize>>, usize> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (canonical_form(c), i))
            .collect();
        let next: Vec<usize> = classes
            .iter()
            .map(|c| index[&canonical_form(&c.pullback(phi))])
            .collect();
        let per_class: Vec<Result<Vec<PowerLift>, SurfError>> = classes
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut k = 1;
                let mut j = next[i];
                while j != i {
                    j = next[j];
                    k += 1;
                }
                Ok(lift_power_orbit(c, phi, k)?.unwrap_or_default())
            })
            .collect();
        let mut summary = DegreeSummary {
            degree,
            classes: classes.len(),
            lifts: 0,
            max_radius: 0.0,
            max_power: 0,
        };
        outcome.covers_checked += classes.len();
        for (c, lifts) in classes.iter().zip(per_class) {
            for lift in lifts? {
                summary.lifts += 1;
                summary.max_radius = summary.max_radius.max(lift.radius);
                summary.max_power = summary.max_power.max(lift.power);
                if outcome.found.is_none() && lift.radius > 1.0 + RADIUS_TOL {
                    outcome.found = Some(LiftHit {
                        cover: c.clone(),
                        lift,
                    });
                }
            }
        }
        outcome.degrees.push(summary);
        if outcome.found.is_some() {
            break;
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::super::{lifts, pushforward_matrix, verify_quotient_divisibility};
    use super::*;

    #[test]
    fn hyperbolic_found_at_degree_one() {
        let phi = FreeAutomorphism::parse(2, &["x1x2", "x2x1x2"], &["x1x1X2", "x2X1"]).unwrap();
        let out = spectral_lift_search(&phi, 3).unwrap();
        let hit = out.found.unwrap();
        assert_eq!(hit.cover.degree(), 1);
        assert!((hit.lift.radius - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn identity_never_grows() {
        let out = spectral_lift_search(&FreeAutomorphism::identity(2), 3).unwrap();
        assert!(out.found.is_none());
        assert!(out
            .degrees
            .iter()
            .all(|s| (s.max_radius - 1.0).abs() < 1e-12));
    }

    #[test]
    fn power_lift_matches_direct_lift() {
        // when phi itself lifts, k = 1 and the orbit construction must agree
        // with the direct lift up to the choice of tau
        let phi = FreeAutomorphism::parse(2, &["x1", "x1x2X1"], &["x1", "X1x2x1"]).unwrap();
        let c = PermCover::from_one_line(&[vec![2, 1], vec![1, 2]]).unwrap();
        let orbit = lift_power_orbit(&c, &phi, 3).unwrap().unwrap();
        let direct = lifts(&c, &phi).unwrap();
        assert_eq!(orbit.len(), direct.len());
        for l in &orbit {
            assert!(direct
                .iter()
                .any(|d| d.tau == l.tau && d.homology_matrix == l.homology_matrix));
        }
    }

    #[test]
    fn power_lift_intertwines() {
        let swap = FreeAutomorphism::parse(2, &["x2", "x1"], &["x2", "x1"]).unwrap();
        let c = PermCover::from_one_line(&[vec![2, 1], vec![1, 2]]).unwrap();
        let lifts = lift_power_orbit(&c, &swap, 3).unwrap().unwrap();
        let p = pushforward_matrix(&c);
        for l in lifts {
            assert_eq!(l.power, 2);
            assert!(verify_quotient_divisibility(&l.base_matrix, &l.homology_matrix, &p).unwrap());
        }
    }
}
