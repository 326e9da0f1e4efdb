//! First homology of a cover via its Schreier graph.
//!
//! Edge `(p, j)` runs from `p` to `p . x_j` and has index `j * d + p`. A BFS
//! spanning tree rooted at point 0 is fixed; each remaining edge closes one
//! basis cycle, and basis cycles are ordered by edge index. A 1-cycle's
//! coordinates are its coefficients on the non-tree edges.

use std::collections::VecDeque;

use num_bigint::BigInt;

use super::{is_intertwiner, FreeAutomorphism, IntMatrix, PermCover, SurfError};
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct CycleBasis {
    degree: usize,
    rank: usize,
    /// Chain of the tree path from 0 to each point.
    paths: Vec<Vec<i64>>,
    /// Non-tree edge indices, ascending.
    basis: Vec<usize>,
}

impl CycleBasis {
    pub fn new(cover: &PermCover) -> Self {
        let d = cover.degree();
        let r = cover.rank();
        let edges = d * r;
        let mut paths: Vec<Option<Vec<i64>>> = vec![None; d];
        let mut tree = vec![false; edges];
        paths[0] = Some(vec![0; edges]);
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for j in 0..r {
                let w = cover.perms()[j][v];
                if paths[w].is_none() {
                    let e = j * d + v;
                    tree[e] = true;
                    let mut c = paths[v].clone().unwrap();
                    c[e] += 1;
                    paths[w] = Some(c);
                    queue.push_back(w);
                }
                let u = cover.step(v, crate::word::Letter::new(j, true));
                if paths[u].is_none() {
                    let e = j * d + u;
                    tree[e] = true;
                    let mut c = paths[v].clone().unwrap();
                    c[e] -= 1;
                    paths[u] = Some(c);
                    queue.push_back(u);
                }
            }
        }
        let basis = (0..edges).filter(|&e| !tree[e]).collect();
        Self {
            degree: d,
            rank: r,
            paths: paths.into_iter().map(Option::unwrap).collect(),
            basis,
        }
    }

    /// `d (r - 1) + 1`.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.degree * self.rank
    }

    /// Edge chain of the `i`-th basis cycle.
    pub fn cycle(&self, i: usize, cover: &PermCover) -> Vec<i64> {
        let e = self.basis[i];
        let (j, p) = (e / self.degree, e % self.degree);
        let q = cover.perms()[j][p];
        let mut c: Vec<i64> = self.paths[p]
            .iter()
            .zip(&self.paths[q])
            .map(|(a, b)| a - b)
            .collect();
        c[e] += 1;
        c
    }

    /// Coordinates of a 1-cycle.
    pub fn coords(&self, chain: &[i64]) -> Vec<i64> {
        self.basis.iter().map(|&e| chain[e]).collect()
    }
}

/// Edge chain of the walk reading `w` from point `start` of `cover`.
fn walk(cover: &PermCover, start: usize, w: &Word, out: &mut [i64], weight: i64) {
    let d = cover.degree();
    let mut q = start;
    for &l in w.letters() {
        if l.inverse {
            let prev = cover.step(q, l);
            out[l.generator * d + prev] -= weight;
            q = prev;
        } else {
            out[l.generator * d + q] += weight;
            q = cover.step(q, l);
        }
    }
}

/// Homology map from `source` to `target` induced by the graph map sending
/// edge `(p, j)` to the walk of `images[j]` from `tau(p)`. Column `i` is the
/// image of the `i`-th basis cycle of `source`.
pub fn lifted_homology_map(
    source: &PermCover,
    target: &PermCover,
    images: &[Word],
    tau: &[usize],
) -> Result<IntMatrix, SurfError> {
    if !is_intertwiner(source, target, images, tau) {
        return Err(SurfError::NotIntertwiner);
    }
    let sb = CycleBasis::new(source);
    let tb = CycleBasis::new(target);
    let d = source.degree();
    let m = sb.len();
    let mut cols = Vec::with_capacity(m);
    for i in 0..m {
        let cycle = sb.cycle(i, source);
        let mut image = vec![0i64; tb.edge_count()];
        for (e, &c) in cycle.iter().enumerate() {
            if c != 0 {
                let (j, p) = (e / d, e % d);
                walk(target, tau[p], &images[j], &mut image, c);
            }
        }
        cols.push(tb.coords(&image));
    }
    Ok((0..tb.len())
        .map(|r| cols.iter().map(|col| BigInt::from(col[r])).collect())
        .collect())
}

/// Action of the lift of `phi` along `tau` on `H_1` of the cover.
pub fn lifted_homology_action(
    cover: &PermCover,
    phi: &FreeAutomorphism,
    tau: &[usize],
) -> Result<IntMatrix, SurfError> {
    if cover.rank() != phi.rank() {
        return Err(SurfError::RankMismatch {
            left: cover.rank(),
            right: phi.rank(),
        });
    }
    lifted_homology_map(cover, cover, phi.images(), tau)
}

/// Map `H_1(cover) -> H_1(base) = Z^r` induced by the covering projection:
/// column `i` is the generator exponent sum along basis cycle `i`.
pub fn pushforward_matrix(cover: &PermCover) -> IntMatrix {
    let basis = CycleBasis::new(cover);
    let d = cover.degree();
    let r = cover.rank();
    let cols: Vec<Vec<i64>> = (0..basis.len())
        .map(|i| {
            let mut v = vec![0; r];
            for (e, c) in basis.cycle(i, cover).iter().enumerate() {
                v[e / d] += c;
            }
            v
        })
        .collect();
    (0..r)
        .map(|row| cols.iter().map(|c| BigInt::from(c[row])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{mat_mul, to_big};
    use super::*;

    fn cover(p: &[&[usize]]) -> PermCover {
        PermCover::from_one_line(&p.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn trivial_cover_gives_abelianization() {
        let phi = FreeAutomorphism::parse(2, &["x1x2", "x2x1x2"], &["x1x1X2", "x2X1"]).unwrap();
        let m = lifted_homology_action(&PermCover::trivial(2), &phi, &[0]).unwrap();
        assert_eq!(m, to_big(&[vec![1, 1], vec![1, 2]]));
    }

    #[test]
    fn identity_lifts_to_identity() {
        let c = cover(&[&[2, 3, 1], &[1, 3, 2]]);
        let m = lifted_homology_action(&c, &FreeAutomorphism::identity(2), &[0, 1, 2]).unwrap();
        assert_eq!(
            m,
            to_big(&[
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1]
            ])
        );
    }

    #[test]
    fn conjugation_on_double_cover() {
        // worked by hand from the Schreier graph
        let c = cover(&[&[2, 1], &[1, 2]]);
        let phi = FreeAutomorphism::parse(2, &["x1", "x1x2X1"], &["x1", "X1x2x1"]).unwrap();
        let m = lifted_homology_action(&c, &phi, &[0, 1]).unwrap();
        assert_eq!(m, to_big(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]));
        let p = pushforward_matrix(&c);
        let base = to_big(&phi.abelianization());
        assert_eq!(mat_mul(&p, &m), mat_mul(&base, &p));
    }

    #[test]
    fn bad_intertwiner_rejected() {
        let c = cover(&[&[2, 1], &[1, 2]]);
        let phi = FreeAutomorphism::parse(2, &["x2", "x1"], &["x2", "x1"]).unwrap();
        assert_eq!(
            lifted_homology_action(&c, &phi, &[0, 1]),
            Err(SurfError::NotIntertwiner)
        );
    }
}
