//! Enumeration of finite-index subgroups of free groups by coset tables.
//!
//! Tables are built in BFS-normal form: points are labelled in order of first
//! appearance while scanning point by point, generator by generator, forward
//! slot before backward slot. Each subgroup of index `d` (the stabilizer of
//! point 0) then arises from exactly one table.

use std::collections::{BTreeMap, VecDeque};

use super::{PermCover, SurfError};
use crate::word::Letter;

/// Largest degree accepted by default.
pub const DEFAULT_DEGREE_CAP: usize = 7;

const FREE: usize = usize::MAX;

/// Index-`d` subgroups of `F_r` and their conjugacy classes.
#[derive(Clone, Debug)]
pub struct CoverCensus {
    pub rank: usize,
    pub degree: usize,
    /// Transitive `r`-tuples of permutations of `d` points, i.e. before
    /// identifying simultaneous conjugates.
    pub transitive_count: u128,
    /// One BFS-normal cover per subgroup.
    pub subgroups: Vec<PermCover>,
    /// One representative per conjugacy class, in canonical order.
    pub classes: Vec<PermCover>,
}

struct Table {
    d: usize,
    r: usize,
    fwd: Vec<Vec<usize>>,
    bwd: Vec<Vec<usize>>,
    used: usize,
}

impl Table {
    fn first_free(&self) -> Option<(usize, usize, bool)> {
        for p in 0..self.used {
            for j in 0..self.r {
                if self.fwd[j][p] == FREE {
                    return Some((p, j, false));
                }
                if self.bwd[j][p] == FREE {
                    return Some((p, j, true));
                }
            }
        }
        None
    }

    fn set(&mut self, p: usize, j: usize, backward: bool, q: usize) {
        if backward {
            self.bwd[j][p] = q;
            self.fwd[j][q] = p;
        } else {
            self.fwd[j][p] = q;
            self.bwd[j][q] = p;
        }
    }

    fn clear(&mut self, p: usize, j: usize, backward: bool, q: usize) {
        if backward {
            self.bwd[j][p] = FREE;
            self.fwd[j][q] = FREE;
        } else {
            self.fwd[j][p] = FREE;
            self.bwd[j][q] = FREE;
        }
    }

    fn search(&mut self, out: &mut Vec<PermCover>) {
        let Some((p, j, backward)) = self.first_free() else {
            if self.used == self.d {
                out.push(PermCover::new(self.fwd.clone()).expect("complete coset table"));
            }
            return;
        };
        for q in 0..self.used {
            let opposite = if backward {
                self.fwd[j][q]
            } else {
                self.bwd[j][q]
            };
            if opposite == FREE {
                self.set(p, j, backward, q);
                self.search(out);
                self.clear(p, j, backward, q);
            }
        }
        if self.used < self.d {
            let q = self.used;
            self.used += 1;
            self.set(p, j, backward, q);
            self.search(out);
            self.clear(p, j, backward, q);
            self.used -= 1;
        }
    }
}

fn check_cap(degree: usize, cap: usize) -> Result<(), SurfError> {
    if degree > cap {
        return Err(SurfError::DegreeCap { degree, cap });
    }
    Ok(())
}

/// All BFS-normal covers of degree `d`, one per index-`d` subgroup.
pub fn subgroups(rank: usize, degree: usize) -> Vec<PermCover> {
    if degree == 0 {
        return Vec::new();
    }
    let mut t = Table {
        d: degree,
        r: rank,
        fwd: vec![vec![FREE; degree]; rank],
        bwd: vec![vec![FREE; degree]; rank],
        used: 1,
    };
    let mut out = Vec::new();
    t.search(&mut out);
    out
}

/// Relabels `cover` so that `base` becomes point 0 and the rest follow in
/// BFS-normal order. Returns the relabelled permutations and the map from
/// old points to new labels.
pub fn normal_form(cover: &PermCover, base: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let d = cover.degree();
    let r = cover.rank();
    let mut label = vec![FREE; d];
    let mut order = Vec::with_capacity(d);
    label[base] = 0;
    order.push(base);
    let mut queue = VecDeque::from([base]);
    while let Some(p) = queue.pop_front() {
        for j in 0..r {
            for inverse in [false, true] {
                let q = cover.step(p, Letter::new(j, inverse));
                if label[q] == FREE {
                    label[q] = order.len();
                    order.push(q);
                    queue.push_back(q);
                }
            }
        }
    }
    let perms = (0..r)
        .map(|j| order.iter().map(|&p| label[cover.perms()[j][p]]).collect())
        .collect();
    (perms, label)
}

/// Canonical representative of the conjugacy class: the least normal form
/// over all basepoints.
pub fn canonical_form(cover: &PermCover) -> Vec<Vec<usize>> {
    (0..cover.degree())
        .map(|b| normal_form(cover, b).0)
        .min()
        .expect("nonempty cover")
}

/// All bijections `rho` with `rho(p . x) = rho(p) . x` from `a` to `b`.
pub fn isomorphisms(a: &PermCover, b: &PermCover) -> Vec<Vec<usize>> {
    if a.degree() != b.degree() || a.rank() != b.rank() {
        return Vec::new();
    }
    let (na, la) = normal_form(a, 0);
    let mut out = Vec::new();
    for base in 0..b.degree() {
        let (nb, lb) = normal_form(b, base);
        if nb == na {
            let mut inv = vec![0; b.degree()];
            for (p, &l) in lb.iter().enumerate() {
                inv[l] = p;
            }
            out.push(la.iter().map(|&l| inv[l]).collect());
        }
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Subgroups, transitive-action count and conjugacy classes at one degree.
pub fn cover_census(rank: usize, degree: usize, cap: usize) -> Result<CoverCensus, SurfError> {
    check_cap(degree, cap)?;
    let subs = subgroups(rank, degree);
    let mut classes: BTreeMap<Vec<Vec<usize>>, PermCover> = BTreeMap::new();
    for s in &subs {
        let c = canonical_form(s);
        classes
            .entry(c.clone())
            .or_insert_with(|| PermCover::new(c).expect("relabelled cover"));
    }
    Ok(CoverCensus {
        rank,
        degree,
        transitive_count: subs.len() as u128 * factorial(degree.saturating_sub(1)),
        subgroups: subs,
        classes: classes.into_values().collect(),
    })
}

/// Covers of degree `d` up to simultaneous conjugation, in canonical order.
pub fn enumerate_covers(rank: usize, degree: usize) -> Result<Vec<PermCover>, SurfError> {
    Ok(cover_census(rank, degree, DEFAULT_DEGREE_CAP)?.classes)
}
