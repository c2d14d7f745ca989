//! Finite balls of the Cayley graph, restricted distances, subgroup
//! membership with closest-point projections, and finite subgraphs.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::BallError;
use crate::rewriting::{ConfluenceReport, RewritingSystem};
use crate::words::{shortlex, Alphabet, Letter, Word};

pub type VertexId = u32;

/// Adjacency marker for a neighbor beyond the ball's radius.
pub const OUTSIDE: VertexId = VertexId::MAX;

/// Default vertex budget for [`Ball::build`].
pub const DEFAULT_MAX_VERTICES: usize = 4_000_000;

/// The ball of radius `radius` around the identity.
///
/// Vertices are normal forms; ids are dense and assigned in BFS order, so
/// the vertices of the ball of any smaller radius `r` are exactly the ids
/// below `ball_size(r)`.
#[derive(Clone, Debug)]
pub struct Ball {
    rs: RewritingSystem,
    radius: usize,
    words: Vec<Word>,
    index: HashMap<Word, VertexId>,
    adj: Vec<VertexId>,
    dist: Vec<u32>,
    sphere_sizes: Vec<usize>,
}

impl Ball {
    pub fn build(rs: &RewritingSystem, radius: usize) -> Result<Ball, BallError> {
        Self::build_with_limit(rs, radius, DEFAULT_MAX_VERTICES)
    }

    /// BFS over normal forms. Requires a confluent system whose normal forms
    /// are geodesic (checked vertex by vertex).
    pub fn build_with_limit(
        rs: &RewritingSystem,
        radius: usize,
        max_vertices: usize,
    ) -> Result<Ball, BallError> {
        if let ConfluenceReport::NotConfluent { word, left, right } = rs.check_confluence() {
            let a = rs.alphabet();
            return Err(BallError::NotConfluent {
                word: a.format_word(&word),
                left: a.format_word(&left),
                right: a.format_word(&right),
            });
        }
        let nl = rs.alphabet().len();
        let mut ball = Ball {
            rs: rs.clone(),
            radius,
            words: vec![Word::empty()],
            index: HashMap::from([(Word::empty(), 0)]),
            adj: Vec::new(),
            dist: vec![0],
            sphere_sizes: vec![1],
        };
        let mut next = 0usize;
        while next < ball.words.len() {
            let d = ball.dist[next] as usize;
            let base = ball.words[next].clone();
            for x in 0..nl as Letter {
                let nf = ball.rs.multiply(&base, &[x]);
                let id = match ball.index.get(&nf) {
                    Some(&id) => id,
                    None if d < radius => {
                        if nf.len() != d + 1 {
                            return Err(BallError::NonGeodesicNormalForm {
                                word: rs.alphabet().format_word(&nf),
                                len: nf.len(),
                                dist: d + 1,
                            });
                        }
                        if ball.words.len() >= max_vertices {
                            return Err(BallError::TooLarge {
                                limit: max_vertices,
                                complete_radius: d,
                                vertices: ball.words.len(),
                            });
                        }
                        let id = ball.words.len() as VertexId;
                        ball.index.insert(nf.clone(), id);
                        ball.words.push(nf);
                        ball.dist.push(d as u32 + 1);
                        if ball.sphere_sizes.len() == d + 1 {
                            ball.sphere_sizes.push(0);
                        }
                        ball.sphere_sizes[d + 1] += 1;
                        id
                    }
                    None => OUTSIDE,
                };
                ball.adj.push(id);
            }
            next += 1;
        }
        ball.sphere_sizes.resize(radius + 1, 0);
        for (id, w) in ball.words.iter().enumerate() {
            if w.len() != ball.dist[id] as usize {
                return Err(BallError::NonGeodesicNormalForm {
                    word: rs.alphabet().format_word(w),
                    len: w.len(),
                    dist: ball.dist[id] as usize,
                });
            }
        }
        Ok(ball)
    }

    pub fn rewriting(&self) -> &RewritingSystem {
        &self.rs
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.rs.alphabet()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn identity(&self) -> VertexId {
        0
    }

    pub fn word(&self, v: VertexId) -> &Word {
        &self.words[v as usize]
    }

    pub fn format(&self, v: VertexId) -> String {
        self.alphabet().format_word(self.word(v))
    }

    pub fn dist(&self, v: VertexId) -> usize {
        self.dist[v as usize] as usize
    }

    /// Id of a normal form, if it lies in the ball.
    pub fn id_of(&self, nf: &Word) -> Option<VertexId> {
        self.index.get(nf).copied()
    }

    /// Id of the element represented by an arbitrary word.
    pub fn locate(&self, w: &Word) -> Option<VertexId> {
        self.id_of(&self.rs.normalize(w))
    }

    pub fn neighbor(&self, v: VertexId, x: Letter) -> Option<VertexId> {
        let n = self.adj[v as usize * self.alphabet().len() + x as usize];
        (n != OUTSIDE).then_some(n)
    }

    /// Raw adjacency entry, possibly [`OUTSIDE`].
    pub fn adjacency(&self, v: VertexId, x: Letter) -> VertexId {
        self.adj[v as usize * self.alphabet().len() + x as usize]
    }

    /// Follows `w` from `v`, failing if the walk leaves the ball.
    pub fn walk(&self, v: VertexId, w: &[Letter]) -> Option<VertexId> {
        w.iter().try_fold(v, |u, &x| self.neighbor(u, x))
    }

    /// The vertex path of `w` from the identity.
    pub fn path_of(&self, w: &[Letter]) -> Option<Vec<VertexId>> {
        let mut path = vec![0];
        for &x in w {
            path.push(self.neighbor(*path.last().unwrap(), x)?);
        }
        Some(path)
    }

    /// `x · v` (left multiplication), if it lies in the ball.
    pub fn left_multiply(&self, x: Letter, v: VertexId) -> Option<VertexId> {
        let mut out = Vec::with_capacity(self.dist(v) + 1);
        self.rs.reduce_onto(&mut out, &[x]);
        self.rs.reduce_onto(&mut out, self.word(v).letters());
        self.id_of(&Word(out))
    }

    /// Graph distance between two elements, computed as the length of the
    /// normal form of `u⁻¹v` (normal forms are geodesic).
    pub fn distance(&self, u: VertexId, v: VertexId) -> usize {
        self.word_distance(self.word(u), self.word(v))
    }

    pub fn word_distance(&self, u: &Word, v: &Word) -> usize {
        let inv = self.alphabet().invert_word(u);
        let mut out = Vec::new();
        self.rs.reduce_onto(&mut out, inv.letters());
        self.rs.reduce_onto(&mut out, v.letters());
        out.len()
    }

    /// Number of vertices at distance exactly `n`, for `n ≤ radius`; zero
    /// beyond the diameter of a finite group.
    pub fn sphere_sizes(&self) -> &[usize] {
        &self.sphere_sizes
    }

    /// Number of vertices at distance at most `r`.
    pub fn ball_size(&self, r: usize) -> usize {
        self.sphere_sizes.iter().take(r + 1).sum()
    }

    pub fn require_radius(&self, required: usize) -> Result<(), BallError> {
        if self.radius < required {
            Err(BallError::RadiusTooSmall {
                required,
                actual: self.radius,
            })
        } else {
            Ok(())
        }
    }

    /// Writes the canonical text form: `radius R`, vertex lines
    /// `id<TAB>normalform<TAB>dist`, then adjacency lines `id<TAB>letter<TAB>id|*`.
    pub fn write_cache<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "radius {}", self.radius)?;
        for (id, w) in self.words.iter().enumerate() {
            writeln!(out, "{id}\t{}\t{}", self.alphabet().format_word(w), self.dist[id])?;
        }
        for id in 0..self.words.len() {
            for x in self.alphabet().letters() {
                let n = self.adjacency(id as VertexId, x);
                let target = if n == OUTSIDE { "*".to_string() } else { n.to_string() };
                writeln!(out, "{id}\t{}\t{target}", self.alphabet().name(x))?;
            }
        }
        Ok(())
    }

    /// Reads a cache written by [`Ball::write_cache`] for the same system.
    pub fn read_cache<R: BufRead>(rs: &RewritingSystem, input: R) -> Result<Ball, BallError> {
        let err = |line: usize, msg: &str| BallError::Cache {
            line,
            msg: msg.to_string(),
        };
        let alphabet = rs.alphabet();
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty cache"))?;
        let header = header.map_err(|e| err(1, &e.to_string()))?;
        let radius: usize = header
            .strip_prefix("radius ")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| err(1, "expected `radius R`"))?;
        let mut words = Vec::new();
        let mut dist = Vec::new();
        let mut adj_lines = Vec::new();
        let mut in_adjacency = false;
        for (i, line) in lines {
            let lineno = i + 1;
            let line = line.map_err(|e| err(lineno, &e.to_string()))?;
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(err(lineno, "expected three tab-separated columns"));
            }
            let id: usize = cols[0].parse().map_err(|_| err(lineno, "bad id"))?;
            if !in_adjacency && id == words.len() {
                let w = alphabet
                    .parse_word(cols[1])
                    .map_err(|e| err(lineno, &e.to_string()))?;
                words.push(w);
                dist.push(cols[2].parse::<u32>().map_err(|_| err(lineno, "bad distance"))?);
            } else {
                in_adjacency = true;
                adj_lines.push((lineno, id, cols[1].to_string(), cols[2].to_string()));
            }
        }
        let nl = alphabet.len();
        let mut adj = vec![OUTSIDE; words.len() * nl];
        let mut seen = vec![false; words.len() * nl];
        for (lineno, id, letter, target) in adj_lines {
            let x = alphabet.letter(&letter).map_err(|e| err(lineno, &e.to_string()))?;
            if id >= words.len() {
                return Err(err(lineno, "adjacency id out of range"));
            }
            let t = if target == "*" {
                OUTSIDE
            } else {
                let t: usize = target.parse().map_err(|_| err(lineno, "bad target"))?;
                if t >= words.len() {
                    return Err(err(lineno, "target out of range"));
                }
                t as VertexId
            };
            adj[id * nl + x as usize] = t;
            seen[id * nl + x as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(err(0, "missing adjacency entries"));
        }
        let mut sphere_sizes = vec![0; radius + 1];
        for &d in &dist {
            if d as usize > radius {
                return Err(err(0, "distance exceeds radius"));
            }
            sphere_sizes[d as usize] += 1;
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as VertexId))
            .collect();
        Ok(Ball {
            rs: rs.clone(),
            radius,
            words,
            index,
            adj,
            dist,
            sphere_sizes,
        })
    }
}

/// All-pairs shortest paths inside the subgraph induced on the `k`-ball.
#[derive(Clone, Debug)]
pub struct RestrictedDistanceTable {
    k: usize,
    n: usize,
    d: Vec<u32>,
}

impl RestrictedDistanceTable {
    pub const INFINITE: u32 = u32::MAX;

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of vertices of the `k`-ball (ids `0..n`).
    pub fn size(&self) -> usize {
        self.n
    }

    /// In-ball distance, `None` when no path stays inside the ball.
    pub fn get(&self, u: VertexId, v: VertexId) -> Option<u32> {
        let d = self.d[u as usize * self.n + v as usize];
        (d != Self::INFINITE).then_some(d)
    }
}

pub fn restricted_distances(ball: &Ball, k: usize) -> Result<RestrictedDistanceTable, BallError> {
    ball.require_radius(k)?;
    let n = ball.ball_size(k);
    let mut d = vec![RestrictedDistanceTable::INFINITE; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s as VertexId);
        while let Some(u) = queue.pop_front() {
            let du = row[u as usize];
            for x in ball.alphabet().letters() {
                if let Some(v) = ball.neighbor(u, x) {
                    if (v as usize) < n && row[v as usize] == RestrictedDistanceTable::INFINITE {
                        row[v as usize] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    Ok(RestrictedDistanceTable { k, n, d })
}

/// How subgroup membership is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Members are exactly the elements whose normal forms use only these letters.
    Parabolic(Vec<Letter>),
    /// Members are products of generators up to the given depth.
    Enumerate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupOracle {
    pub name: String,
    pub generators: Vec<Word>,
    pub membership: Membership,
}

/// Sampling depth used to validate a parabolic declaration.
pub const PARABOLIC_SAMPLE_DEPTH: usize = 4;

impl SubgroupOracle {
    pub fn trivial(name: &str) -> Self {
        SubgroupOracle {
            name: name.to_string(),
            generators: Vec::new(),
            membership: Membership::Parabolic(Vec::new()),
        }
    }

    pub fn parabolic(name: &str, letters: &[Letter]) -> Self {
        SubgroupOracle {
            name: name.to_string(),
            generators: letters.iter().map(|&x| Word(vec![x])).collect(),
            membership: Membership::Parabolic(letters.to_vec()),
        }
    }

    fn steps(&self, alphabet: &Alphabet) -> Vec<Word> {
        match &self.membership {
            Membership::Parabolic(letters) => letters.iter().map(|&x| Word(vec![x])).collect(),
            Membership::Enumerate(_) => {
                let mut s = Vec::new();
                for g in &self.generators {
                    s.push(g.clone());
                    s.push(alphabet.invert_word(g));
                }
                s
            }
        }
    }

    /// Checks a parabolic declaration by sampling products of generators
    /// and their inverses up to [`PARABOLIC_SAMPLE_DEPTH`].
    pub fn validate(&self, rs: &RewritingSystem) -> Result<(), BallError> {
        let Membership::Parabolic(letters) = &self.membership else {
            return Ok(());
        };
        let a = rs.alphabet();
        let mut steps = Vec::new();
        for g in &self.generators {
            steps.push(g.clone());
            steps.push(a.invert_word(g));
        }
        let mut layer = vec![Word::empty()];
        for _ in 0..PARABOLIC_SAMPLE_DEPTH {
            let mut next = Vec::new();
            for w in &layer {
                for s in &steps {
                    let prod = w.concat(s);
                    let nf = rs.normalize(&prod);
                    if nf.letters().iter().any(|x| !letters.contains(x)) {
                        return Err(BallError::ParabolicViolation {
                            word: a.format_word(&prod),
                            normal_form: a.format_word(&nf),
                        });
                    }
                    next.push(prod);
                }
            }
            layer = next;
            if layer.len() > 100_000 {
                break;
            }
        }
        Ok(())
    }

    /// Members whose normal forms have length at most `len`.
    ///
    /// Enumeration is exact for `len ≤ depth`; a shorter depth is refused.
    pub fn members_up_to(&self, rs: &RewritingSystem, len: usize) -> Result<Vec<Word>, BallError> {
        let (depth, prune) = match self.membership {
            Membership::Parabolic(_) => (len, true),
            Membership::Enumerate(depth) => {
                if depth < len {
                    return Err(BallError::DepthTooSmall {
                        required: len,
                        given: depth,
                    });
                }
                (depth, false)
            }
        };
        let steps = self.steps(rs.alphabet());
        let mut seen: HashMap<Word, ()> = HashMap::from([(Word::empty(), ())]);
        let mut layer = vec![Word::empty()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &layer {
                for s in &steps {
                    let nf = rs.multiply(w, s.letters());
                    if prune && nf.len() > len {
                        continue;
                    }
                    if seen.insert(nf.clone(), ()).is_none() {
                        next.push(nf);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        let mut out: Vec<Word> = seen.into_keys().filter(|w| w.len() <= len).collect();
        out.sort_by(|a, b| shortlex(a.letters(), b.letters()));
        Ok(out)
    }

    /// Exactly the ball vertices lying in the subgroup. Enumeration must
    /// reach depth `2 · radius`.
    pub fn members_in_ball(&self, ball: &Ball) -> Result<SubgroupMembers, BallError> {
        if let Membership::Enumerate(depth) = self.membership {
            let required = 2 * ball.radius();
            if depth < required {
                return Err(BallError::DepthTooSmall {
                    required,
                    given: depth,
                });
            }
        }
        self.members_within_length(ball, ball.radius())
    }

    /// The members of length at most `len`, which must not exceed the
    /// ball's radius.
    pub fn members_within_length(
        &self,
        ball: &Ball,
        len: usize,
    ) -> Result<SubgroupMembers, BallError> {
        ball.require_radius(len)?;
        let n = ball.ball_size(len) as VertexId;
        let ids: Vec<VertexId> = match &self.membership {
            Membership::Parabolic(letters) => (0..n)
                .filter(|&v| ball.word(v).letters().iter().all(|x| letters.contains(x)))
                .collect(),
            Membership::Enumerate(_) => {
                let mut ids: Vec<VertexId> = self
                    .members_up_to(ball.rewriting(), len)?
                    .iter()
                    .filter_map(|w| ball.id_of(w))
                    .collect();
                ids.sort_unstable();
                ids
            }
        };
        let mut mask = vec![false; ball.len()];
        for &v in &ids {
            mask[v as usize] = true;
        }
        Ok(SubgroupMembers { ids, mask })
    }
}

/// Subgroup members inside a ball.
#[derive(Clone, Debug)]
pub struct SubgroupMembers {
    pub ids: Vec<VertexId>,
    pub mask: Vec<bool>,
}

impl SubgroupMembers {
    pub fn contains(&self, v: VertexId) -> bool {
        self.mask.get(v as usize).copied().unwrap_or(false)
    }

    /// Members inside the `k`-ball (a prefix of the id range).
    pub fn within(&self, ball: &Ball, k: usize) -> Vec<VertexId> {
        let n = ball.ball_size(k) as VertexId;
        self.ids.iter().copied().filter(|&v| v < n).collect()
    }
}

/// Closest-point projection of a vertex onto a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub distance: usize,
    pub points: Vec<VertexId>,
}

/// `d(v, H)` and `π_H(v)`, by BFS from `v` inside the ball.
///
/// The answer is certified when `|v| + d(v, H) ≤ radius`: every path of
/// that length from `v` then stays in the ball.
pub fn projection_set(
    ball: &Ball,
    members: &SubgroupMembers,
    v: VertexId,
) -> Result<Projection, BallError> {
    if members.contains(v) {
        return Ok(Projection {
            distance: 0,
            points: vec![v],
        });
    }
    let mut seen = HashMap::from([(v, 0usize)]);
    let mut frontier = vec![v];
    let mut d = 0;
    loop {
        d += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for x in ball.alphabet().letters() {
                if let Some(w) = ball.neighbor(u, x) {
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                        e.insert(d);
                        next.push(w);
                    }
                }
            }
        }
        let mut hits: Vec<VertexId> = next.iter().copied().filter(|&w| members.contains(w)).collect();
        if !hits.is_empty() || next.is_empty() {
            let required = ball.dist(v) + d;
            if required > ball.radius() || hits.is_empty() {
                return Err(BallError::RadiusTooSmall {
                    required,
                    actual: ball.radius(),
                });
            }
            hits.sort_unstable();
            return Ok(Projection {
                distance: d,
                points: hits,
            });
        }
        frontier = next;
    }
}

/// A finite subgraph containing the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubgraph {
    pub name: String,
    pub vertices: Vec<Word>,
    pub ids: Vec<VertexId>,
    pub diameter: usize,
    /// Size of the orbit of the identity under the setwise stabilizer.
    pub orbit_size: usize,
}

impl FiniteSubgraph {
    pub fn check_diameter(&self, bound: usize) -> Result<(), BallError> {
        if self.diameter > bound {
            Err(BallError::DiameterTooLarge {
                diameter: self.diameter,
                bound,
            })
        } else {
            Ok(())
        }
    }
}

/// Normalizes the vertex words, then computes the diameter and the orbit of
/// the identity under `{g : gZ = Z}`. Such `g` lie in `Z` since `g·1 ∈ gZ`.
pub fn load_subgraph(ball: &Ball, name: &str, words: &[Word]) -> Result<FiniteSubgraph, BallError> {
    let rs = ball.rewriting();
    let mut vertices: Vec<Word> = words.iter().map(|w| rs.normalize(w)).collect();
    vertices.sort_by(|a, b| shortlex(a.letters(), b.letters()));
    vertices.dedup();
    if !vertices.iter().any(|w| w.is_empty()) {
        return Err(BallError::MissingIdentity);
    }
    let ids = vertices
        .iter()
        .map(|w| ball.id_of(w).ok_or_else(|| BallError::OutsideBall(ball.alphabet().format_word(w))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut diameter = 0;
    for u in &vertices {
        for v in &vertices {
            diameter = diameter.max(ball.word_distance(u, v));
        }
    }
    let orbit_size = vertices
        .iter()
        .filter(|g| {
            let mut translate: Vec<Word> = vertices.iter().map(|z| rs.multiply(g, z.letters())).collect();
            translate.sort_by(|a, b| shortlex(a.letters(), b.letters()));
            translate == vertices
        })
        .count();
    Ok(FiniteSubgraph {
        name: name.to_string(),
        vertices,
        ids,
        diameter,
        orbit_size,
    })
}

/// Debug rendering of a vertex list.
pub fn format_vertices(ball: &Ball, ids: &[VertexId]) -> String {
    let mut s = String::from("{");
    for (i, &v) in ids.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let w = ball.format(v);
        let _ = write!(s, "{}", if w.is_empty() { "ε".to_string() } else { w });
    }
    s.push('}');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn ball(name: &str, r: usize) -> (crate::config::JobConfig, Ball) {
        let cfg = bundled::config(name).unwrap();
        let b = Ball::build(&cfg.rewriting, r).unwrap();
        (cfg, b)
    }

    fn id(b: &Ball, w: &str) -> VertexId {
        b.locate(&b.alphabet().parse_word(w).unwrap()).unwrap()
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball("z2", 2).1.len(), 13);
        assert_eq!(ball("f2", 2).1.sphere_sizes(), &[1, 4, 12]);
        assert_eq!(ball("f2", 1).1.len(), 5);
        assert_eq!(ball("dinf", 3).1.sphere_sizes(), &[1, 2, 2, 2]);
        let (_, s3) = ball("s3", 6);
        assert_eq!(s3.len(), 6);
        assert_eq!(s3.sphere_sizes(), &[1, 2, 2, 1, 0, 0, 0]);
    }

    #[test]
    fn dense_prefix_ids() {
        let (_, small) = ball("z2", 3);
        let (_, big) = ball("z2", 7);
        for v in 0..small.len() as VertexId {
            assert_eq!(small.word(v), big.word(v));
        }
        assert!(big.neighbor(id(&big, "x x x x x x x"), 0).is_none());
    }

    #[test]
    fn restricted_distance_examples() {
        let (_, f) = ball("f2", 3);
        let t = restricted_distances(&f, 1).unwrap();
        assert_eq!(t.get(id(&f, "a"), id(&f, "b")), Some(2));
        let (_, z) = ball("z2", 4);
        let t = restricted_distances(&z, 2).unwrap();
        assert_eq!(t.get(id(&z, "x x"), id(&z, "y y")), Some(4));
        // (1,0) to (0,1) without leaving the 1-ball goes through the origin.
        let t1 = restricted_distances(&z, 1).unwrap();
        assert_eq!(t1.get(id(&z, "x"), id(&z, "y")), Some(2));
        assert!(restricted_distances(&z, 5).is_err());
    }

    #[test]
    fn members_and_projections() {
        let (cfg, f) = ball("f2", 6);
        let ha = cfg.subgroup("Ha").unwrap();
        let m = ha.members_in_ball(&f).unwrap();
        assert_eq!(m.within(&f, 2).len(), 5);
        let p = projection_set(&f, &m, id(&f, "a b")).unwrap();
        assert_eq!((p.distance, p.points), (1, vec![id(&f, "a")]));
        let (cfg, s) = ball("s3", 8);
        let ws = cfg.subgroup("Ws").unwrap();
        let m = ws.members_in_ball(&s).unwrap();
        let p = projection_set(&s, &m, id(&s, "t")).unwrap();
        assert_eq!((p.distance, p.points), (1, vec![s.identity()]));
        let deep = SubgroupOracle {
            name: "e".into(),
            generators: vec![f.alphabet().parse_word("a").unwrap()],
            membership: Membership::Enumerate(4),
        };
        assert!(matches!(
            deep.members_in_ball(&f),
            Err(BallError::DepthTooSmall { required: 12, given: 4 })
        ));
    }

    #[test]
    fn subgraph_orbits() {
        let (_, z) = ball("z2", 3);
        let w = |s: &str| z.alphabet().parse_word(s).unwrap();
        let edge = load_subgraph(&z, "edge", &[w(""), w("x")]).unwrap();
        assert_eq!((edge.diameter, edge.orbit_size), (1, 1));
        let square = load_subgraph(&z, "sq", &[w(""), w("x"), w("y"), w("x y")]).unwrap();
        assert_eq!((square.diameter, square.orbit_size), (2, 1));
        assert!(square.check_diameter(1).is_err());
        assert_eq!(load_subgraph(&z, "no", &[w("x")]), Err(BallError::MissingIdentity));
        let (_, d) = ball("dinf", 3);
        let a = d.alphabet().parse_word("a").unwrap();
        assert_eq!(load_subgraph(&d, "edge", &[Word::empty(), a]).unwrap().orbit_size, 2);
    }

    #[test]
    fn cache_round_trip() {
        let (cfg, s) = ball("s3", 4);
        let mut buf = Vec::new();
        s.write_cache(&mut buf).unwrap();
        let back = Ball::read_cache(&cfg.rewriting, &buf[..]).unwrap();
        assert_eq!(back.len(), s.len());
        assert_eq!(back.sphere_sizes(), s.sphere_sizes());
        for v in 0..s.len() as VertexId {
            assert_eq!(back.word(v), s.word(v));
        }
        assert!(Ball::read_cache(&cfg.rewriting, &b"radius x\n"[..]).is_err());
    }

    #[test]
    fn vertex_budget() {
        let cfg = bundled::config("f2").unwrap();
        assert!(matches!(
            Ball::build_with_limit(&cfg.rewriting, 6, 100),
            Err(BallError::TooLarge { limit: 100, .. })
        ));
    }
}
