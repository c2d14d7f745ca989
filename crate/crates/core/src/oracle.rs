//! Brute-force counts by direct enumeration in a ball, used to verify every
//! series the automaton produces.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ball::{Ball, FiniteSubgraph, SubgroupOracle, VertexId};
use crate::error::BallError;
use crate::words::{shortlex, Letter, Word};

/// Which quantity to count.
#[derive(Clone, Debug)]
pub enum CountKind<'a> {
    Sphere,
    Ball,
    Geodesic,
    /// Vertices of the Schreier graph of `G/H` at each distance.
    Coset(&'a SubgroupOracle),
    /// Translates `gZ` inside each ball, divided by the orbit size.
    Embed(&'a FiniteSubgraph),
}

/// Exact counts for `n = 0..=n_max`. The ball must have radius `n_max`.
pub fn brute_force_counts(ball: &Ball, kind: &CountKind, n_max: usize) -> Result<Vec<BigInt>, BallError> {
    ball.require_radius(n_max)?;
    match kind {
        CountKind::Sphere => Ok(ball.sphere_sizes()[..=n_max].iter().map(|&c| BigInt::from(c)).collect()),
        CountKind::Ball => Ok(cumulative(
            &ball.sphere_sizes()[..=n_max].iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(),
        )),
        CountKind::Geodesic => Ok(geodesic_counts(ball, n_max)),
        CountKind::Coset(h) => {
            let reps = coset_representatives(ball, h, n_max)?;
            Ok(reps.iter().map(|r| BigInt::from(r.len())).collect())
        }
        CountKind::Embed(z) => embedding_counts(ball, z, n_max),
    }
}

pub fn cumulative(terms: &[BigInt]) -> Vec<BigInt> {
    let mut acc = BigInt::zero();
    terms
        .iter()
        .map(|t| {
            acc += t;
            acc.clone()
        })
        .collect()
}

/// Whether the path of `w` from the identity is geodesic.
pub fn is_geodesic(ball: &Ball, w: &[Letter]) -> Option<bool> {
    ball.walk(ball.identity(), w).map(|v| ball.dist(v) == w.len())
}

/// Number of geodesic words of each length, by dynamic programming over
/// the BFS layers.
pub fn geodesic_counts(ball: &Ball, n_max: usize) -> Vec<BigInt> {
    let n = ball.ball_size(n_max);
    let mut ways = vec![BigInt::zero(); n];
    ways[0] = BigInt::one();
    let mut out = vec![BigInt::zero(); n_max + 1];
    for v in 0..n as VertexId {
        let d = ball.dist(v);
        if v != 0 {
            let mut total = BigInt::zero();
            for x in ball.alphabet().letters() {
                if let Some(u) = ball.neighbor(v, x) {
                    if ball.dist(u) + 1 == d {
                        total += &ways[u as usize];
                    }
                }
            }
            ways[v as usize] = total;
        }
        out[d] += &ways[v as usize];
    }
    out
}

/// The shortlex-least words of the left cosets `gH` at each distance
/// `0..=n_max` from the basepoint.
///
/// An element `g` at distance `n` is listed when its normal form precedes
/// the normal form of every other element of `gH` at distance at most `n`.
/// Such elements `gh` satisfy `|h| ≤ 2n`, so only those members are tried.
pub fn coset_representatives(
    ball: &Ball,
    subgroup: &SubgroupOracle,
    n_max: usize,
) -> Result<Vec<Vec<Word>>, BallError> {
    ball.require_radius(n_max)?;
    let rs = ball.rewriting();
    let mut members = subgroup.members_up_to(rs, 2 * n_max)?;
    members.retain(|h| !h.is_empty());
    let mut out = vec![Vec::new(); n_max + 1];
    let mut buf = Vec::new();
    for v in 0..ball.ball_size(n_max) as VertexId {
        let g = ball.word(v);
        let n = g.len();
        let is_rep = members.iter().take_while(|h| h.len() <= 2 * n).all(|h| {
            buf.clear();
            buf.extend_from_slice(g.letters());
            rs.reduce_onto(&mut buf, h.letters());
            shortlex(&buf, g.letters()).is_gt()
        });
        if is_rep {
            out[n].push(g.clone());
        }
    }
    Ok(out)
}

/// `e(n)`: the number of translates `gZ` inside the ball of radius `n`,
/// counted as `#{g : max_z |gz| ≤ n} / |O|`.
pub fn embedding_counts(ball: &Ball, z: &FiniteSubgraph, n_max: usize) -> Result<Vec<BigInt>, BallError> {
    ball.require_radius(n_max)?;
    let rs = ball.rewriting();
    let mut reach = vec![0usize; n_max + 1];
    let mut buf = Vec::new();
    for v in 0..ball.ball_size(n_max) as VertexId {
        let g = ball.word(v);
        let m = z
            .vertices
            .iter()
            .map(|w| {
                buf.clear();
                buf.extend_from_slice(g.letters());
                rs.reduce_onto(&mut buf, w.letters());
                buf.len()
            })
            .max()
            .unwrap_or(0);
        if m <= n_max {
            reach[m] += 1;
        }
    }
    let mut acc = 0usize;
    let mut out = Vec::with_capacity(n_max + 1);
    for r in &reach {
        acc += r;
        if !acc.is_multiple_of(z.orbit_size) {
            return Err(BallError::OrbitDivisibility {
                count: acc,
                orbit: z.orbit_size,
            });
        }
        out.push(BigInt::from(acc / z.orbit_size));
    }
    Ok(out)
}
