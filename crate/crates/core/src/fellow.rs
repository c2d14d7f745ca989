//! Bounded-radius checks of asynchronous fellow traveling, the fftp
//! property and fellow/bounded projections.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::ball::{projection_set, Ball, Projection, SubgroupOracle, VertexId};
use crate::error::BallError;
use crate::words::{Letter, Word};

fn check_path(ball: &Ball, p: &[VertexId]) -> Result<(), BallError> {
    for (i, &v) in p.iter().enumerate() {
        if v as usize >= ball.len() {
            return Err(BallError::OutsideBall(format!("vertex id {v}")));
        }
        if i > 0 && !ball.alphabet().letters().any(|x| ball.neighbor(p[i - 1], x) == Some(v)) {
            return Err(BallError::NotAPath(i));
        }
    }
    if p.is_empty() {
        return Err(BallError::NotAPath(0));
    }
    Ok(())
}

/// Decides whether `p` and `q` asynchronously `m`-fellow travel.
///
/// Searches for a monotone staircase from `(0, 0)` to `(ℓ(p), ℓ(q))` with
/// steps `(1,0)`, `(0,1)`, `(1,1)` whose cells `(i, j)` all satisfy
/// `d(p(i), q(j)) ≤ m`. Returns the staircase when one exists.
pub fn async_fellow_travel(
    ball: &Ball,
    p: &[VertexId],
    q: &[VertexId],
    m: usize,
) -> Result<Option<Vec<(usize, usize)>>, BallError> {
    check_path(ball, p)?;
    check_path(ball, q)?;
    let (lp, lq) = (p.len(), q.len());
    // prev[i][j]: the step that first reached (i, j); 0 = unreached.
    let mut prev = vec![0u8; lp * lq];
    let close = |i: usize, j: usize| ball.distance(p[i], q[j]) <= m;
    if !close(0, 0) {
        return Ok(None);
    }
    prev[0] = 4;
    for i in 0..lp {
        for j in 0..lq {
            if (i, j) == (0, 0) {
                continue;
            }
            let from = |di: usize, dj: usize| i >= di && j >= dj && prev[(i - di) * lq + (j - dj)] != 0;
            let step = if from(1, 1) {
                3
            } else if from(1, 0) {
                1
            } else if from(0, 1) {
                2
            } else {
                continue;
            };
            if close(i, j) {
                prev[i * lq + j] = step;
            }
        }
    }
    if prev[lp * lq - 1] == 0 {
        return Ok(None);
    }
    let mut cells = vec![(lp - 1, lq - 1)];
    let (mut i, mut j) = (lp - 1, lq - 1);
    while (i, j) != (0, 0) {
        match prev[i * lq + j] {
            1 => i -= 1,
            2 => j -= 1,
            _ => {
                i -= 1;
                j -= 1;
            }
        }
        cells.push((i, j));
    }
    cells.reverse();
    Ok(Some(cells))
}

/// Vertices within distance `m` of `v`, by BFS in the ball.
fn neighborhood(ball: &Ball, v: VertexId, m: usize) -> HashSet<VertexId> {
    let mut seen = HashSet::from([v]);
    let mut frontier = vec![v];
    for _ in 0..m {
        let mut next = Vec::new();
        for &u in &frontier {
            for x in ball.alphabet().letters() {
                if let Some(w) = ball.neighbor(u, x) {
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Shortest path with the endpoints of `p` that asynchronously
/// `m`-fellow travels with `p`, as `(letters, vertices)`.
///
/// The search is a 0-1 BFS over cells `(i, v)` with `v` in the closed
/// `m`-neighborhood of `p(i)`: advancing along `p` alone is free, any move
/// of the traveler costs one edge.
pub fn shortest_fellow_traveler(
    ball: &Ball,
    p: &[VertexId],
    m: usize,
) -> (Vec<Letter>, Vec<VertexId>) {
    let hoods: Vec<HashSet<VertexId>> = p.iter().map(|&v| neighborhood(ball, v, m)).collect();
    let last = p.len() - 1;
    let target = (last, p[last]);
    let mut best: HashMap<(usize, VertexId), usize> = HashMap::from([((0, p[0]), 0)]);
    type Node = (usize, VertexId);
    let mut back: HashMap<Node, (Node, Option<Letter>)> = HashMap::new();
    let mut deque = VecDeque::from([((0, p[0]), 0usize)]);
    while let Some((cell, cost)) = deque.pop_front() {
        if best[&cell] < cost {
            continue;
        }
        if cell == target {
            break;
        }
        let (i, v) = cell;
        let mut relax = |next: (usize, VertexId), c: usize, letter: Option<Letter>, deque: &mut VecDeque<_>| {
            if best.get(&next).is_some_and(|&b| b <= c) {
                return;
            }
            best.insert(next, c);
            back.insert(next, (cell, letter));
            if c == cost {
                deque.push_front((next, c));
            } else {
                deque.push_back((next, c));
            }
        };
        if i < last && hoods[i + 1].contains(&v) {
            relax((i + 1, v), cost, None, &mut deque);
        }
        for y in ball.alphabet().letters() {
            let Some(w) = ball.neighbor(v, y) else { continue };
            if hoods[i].contains(&w) {
                relax((i, w), cost + 1, Some(y), &mut deque);
            }
            if i < last && hoods[i + 1].contains(&w) {
                relax((i + 1, w), cost + 1, Some(y), &mut deque);
            }
        }
    }
    let mut letters = Vec::new();
    let mut vertices = vec![target.1];
    let mut cell = target;
    while let Some(&(prev, letter)) = back.get(&cell) {
        if let Some(y) = letter {
            letters.push(y);
            vertices.push(prev.1);
        }
        cell = prev;
    }
    letters.reverse();
    vertices.reverse();
    (letters, vertices)
}

/// A non-geodesic word without a strictly shorter fellow traveler.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FftpCounterexample {
    pub word: Word,
    /// Length of the shortest `M`-fellow traveler with the same endpoints.
    pub best_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FftpReport {
    pub m: usize,
    pub r: usize,
    pub pass: bool,
    /// Geodesic words of length at most `r` that were extended.
    pub geodesics: usize,
    /// Non-geodesic one-letter continuations probed.
    pub paths_checked: usize,
    /// The shortlex-least failing continuation.
    pub counterexample: Option<FftpCounterexample>,
}

impl FftpReport {
    /// Why a pass covers every path of length at most `r + 1`: a shortest
    /// non-geodesic prefix of such a path is a geodesic plus one letter.
    pub const NOTE: &'static str = "one-edge continuations of geodesics of length <= R checked; \
        by induction on the first non-geodesic prefix this covers all paths of length <= R+1";
}

/// Probes the fftp property with constant `m` on every geodesic word of
/// length at most `r` followed by a letter that makes it non-geodesic.
pub fn check_fftp(ball: &Ball, m: usize, r: usize) -> Result<FftpReport, BallError> {
    ball.require_radius(r + m + 1)?;
    let mut report = FftpReport {
        m,
        r,
        pass: true,
        geodesics: 0,
        paths_checked: 0,
        counterexample: None,
    };
    // Geodesic words by length, each layer in lexicographic order.
    let mut layer: Vec<(Vec<Letter>, Vec<VertexId>)> = vec![(Vec::new(), vec![ball.identity()])];
    for len in 0..=r {
        let mut next = Vec::new();
        for (w, path) in &layer {
            report.geodesics += 1;
            let end = *path.last().unwrap();
            for x in ball.alphabet().letters() {
                let v = ball.neighbor(end, x).expect("radius checked");
                let mut p = path.clone();
                p.push(v);
                let mut wx = w.clone();
                wx.push(x);
                if ball.dist(v) == len + 1 {
                    next.push((wx, p));
                    continue;
                }
                report.paths_checked += 1;
                let (q, _) = shortest_fellow_traveler(ball, &p, m);
                if q.len() > len {
                    report.pass = false;
                    report.counterexample = Some(FftpCounterexample {
                        word: Word(wx),
                        best_length: q.len(),
                    });
                    return Ok(report);
                }
            }
        }
        layer = next;
    }
    Ok(report)
}

/// Re-checks a reported counterexample: `true` iff the word is
/// non-geodesic and has no strictly shorter `m`-fellow traveler.
pub fn replay_fftp(ball: &Ball, m: usize, word: &Word) -> Result<bool, BallError> {
    let p = ball
        .path_of(word.letters())
        .ok_or_else(|| BallError::OutsideBall(ball.alphabet().format_word(word)))?;
    ball.require_radius(word.len() + m)?;
    if ball.dist(*p.last().unwrap()) == word.len() {
        return Ok(false);
    }
    let (q, _) = shortest_fellow_traveler(ball, &p, m);
    Ok(q.len() >= word.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionMode {
    Fellow,
    Bounded,
}

impl ProjectionMode {
    pub fn name(self) -> &'static str {
        match self {
            ProjectionMode::Fellow => "fellow",
            ProjectionMode::Bounded => "bounded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionFailure {
    pub u: Word,
    pub v: Word,
    /// The violated distance (witness distance or diameter).
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionReport {
    pub subgroup: String,
    pub mode: ProjectionMode,
    pub m: usize,
    pub r: usize,
    pub pass: bool,
    pub edges_checked: usize,
    pub counterexample: Option<ProjectionFailure>,
}

fn max_pairwise(ball: &Ball, a: &[VertexId], b: &[VertexId]) -> usize {
    let mut d = 0;
    for &x in a {
        for &y in b {
            d = d.max(ball.distance(x, y));
        }
    }
    d
}

/// `max over z ∈ from of min over z' ∈ to of d(z, z')`.
fn witness_distance(ball: &Ball, from: &[VertexId], to: &[VertexId]) -> usize {
    from.iter()
        .map(|&z| to.iter().map(|&w| ball.distance(z, w)).min().unwrap_or(usize::MAX))
        .max()
        .unwrap_or(0)
}

/// Checks `m`-fellow or `m`-bounded projections of a subgroup on every edge
/// of the ball of radius `r`. Needs a ball of radius `2r`.
pub fn check_projections(
    ball: &Ball,
    subgroup: &SubgroupOracle,
    m: usize,
    r: usize,
    mode: ProjectionMode,
) -> Result<ProjectionReport, BallError> {
    ball.require_radius(2 * r)?;
    let members = subgroup.members_within_length(ball, 2 * r)?;
    let n = ball.ball_size(r);
    let projections = (0..n as VertexId)
        .map(|v| projection_set(ball, &members, v))
        .collect::<Result<Vec<Projection>, _>>()?;
    let mut report = ProjectionReport {
        subgroup: subgroup.name.clone(),
        mode,
        m,
        r,
        pass: true,
        edges_checked: 0,
        counterexample: None,
    };
    for u in 0..n as VertexId {
        for x in ball.alphabet().letters() {
            let Some(v) = ball.neighbor(u, x) else { continue };
            if v as usize >= n || v <= u {
                continue;
            }
            report.edges_checked += 1;
            let (pu, pv) = (&projections[u as usize].points, &projections[v as usize].points);
            let value = match mode {
                ProjectionMode::Fellow => witness_distance(ball, pu, pv).max(witness_distance(ball, pv, pu)),
                ProjectionMode::Bounded => {
                    let all: Vec<VertexId> = pu.iter().chain(pv).copied().collect();
                    max_pairwise(ball, &all, &all)
                }
            };
            if value > m && report.pass {
                report.pass = false;
                report.counterexample = Some(ProjectionFailure {
                    u: ball.word(u).clone(),
                    v: ball.word(v).clone(),
                    value,
                });
            }
        }
    }
    Ok(report)
}
