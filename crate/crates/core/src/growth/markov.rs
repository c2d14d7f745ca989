//! Markov geodesic combings and the growth series they produce.
//!
//! Reading a geodesic word letter by letter and dividing by the parent
//! count of each state reached gives every vertex total weight one, so
//! powers of the weighted matrix count vertices rather than geodesics.

use num_bigint::BigInt;

use crate::automaton::{coset_accept_set, coset_multiplicity, FftpAutomaton, StateId};
use crate::ball::{Ball, FiniteSubgraph, SubgroupOracle, VertexId};
use crate::error::{AutomatonError, Error, SeriesError};
use crate::oracle::{brute_force_counts, CountKind};
use crate::scalar::Scalar;
use crate::words::Letter;

use super::series::{series_from_sequence, RationalSeries};

/// Transition data of the automaton restricted to its non-fail states.
///
/// `counts[i][j]` is the number of letters leading from `i` to `j`, and
/// `weighted[i][j]` is that number divided by the parent count of `j`.
/// Rows are indexed by position in `states`, which lists automaton ids in
/// increasing order; the initial state comes first.
#[derive(Clone, Debug)]
pub struct TransitionMatrices<T> {
    states: Vec<StateId>,
    index: Vec<Option<usize>>,
    counts: Vec<Vec<u32>>,
    weighted: Vec<Vec<T>>,
    parents: Vec<usize>,
}

impl<T: Scalar> TransitionMatrices<T> {
    pub fn new(aut: &FftpAutomaton) -> Result<Self, AutomatonError> {
        let states: Vec<StateId> = (0..aut.len() as StateId).filter(|&s| Some(s) != aut.fail()).collect();
        let mut index = vec![None; aut.len()];
        for (i, &s) in states.iter().enumerate() {
            index[s as usize] = Some(i);
        }
        let parents = states.iter().map(|&s| aut.parent_count(s)).collect::<Result<Vec<_>, _>>()?;
        let n = states.len();
        let mut counts = vec![vec![0u32; n]; n];
        for (i, &s) in states.iter().enumerate() {
            for x in 0..aut.letters() as Letter {
                if let Some(j) = index[aut.next(s, x) as usize] {
                    counts[i][j] += 1;
                }
            }
        }
        let mut weighted = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if counts[i][j] == 0 {
                    continue;
                }
                if parents[j] == 0 {
                    return Err(AutomatonError::SemanticsViolated {
                        word: String::new(),
                        detail: format!("state {} is entered but has no parent", states[j]),
                    });
                }
                weighted[i][j] = T::from_ratio(counts[i][j] as i64, parents[j] as i64);
            }
        }
        Ok(TransitionMatrices {
            states,
            index,
            counts,
            weighted,
            parents,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn index_of(&self, s: StateId) -> Option<usize> {
        self.index.get(s as usize).copied().flatten()
    }

    /// Row of the initial state.
    pub fn start(&self) -> usize {
        0
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }

    pub fn weighted(&self) -> &[Vec<T>] {
        &self.weighted
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    /// Entry `(i, j)` of the weighted or the count matrix.
    pub fn entry(&self, i: usize, j: usize, weighted: bool) -> T {
        if weighted {
            self.weighted[i][j].clone()
        } else {
            T::from_ratio(self.counts[i][j] as i64, 1)
        }
    }

    /// Row vectors `u·Aⁿ` for `n < terms`, with `u` the initial indicator.
    pub fn state_vectors(&self, weighted: bool, terms: usize) -> Vec<Vec<T>> {
        let n = self.len();
        let mut x = vec![T::zero(); n];
        x[self.start()] = T::one();
        let mut out = Vec::with_capacity(terms);
        for _ in 0..terms {
            let mut y = vec![T::zero(); n];
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter_mut().enumerate() {
                    if self.counts[i][j] != 0 {
                        *yj = yj.clone() + xi.clone() * self.entry(i, j, weighted);
                    }
                }
            }
            out.push(std::mem::replace(&mut x, y));
        }
        out
    }

    /// `u·Aⁿ·v` for `n < terms`.
    pub fn sequence(&self, weights: &[T], weighted: bool, terms: usize) -> Vec<T> {
        self.state_vectors(weighted, terms)
            .iter()
            .map(|x| dot(x, weights))
            .collect()
    }
}

fn dot<T: Scalar>(x: &[T], w: &[T]) -> T {
    x.iter()
        .zip(w)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Outcome of [`validate_combing`].
#[derive(Clone, Debug, PartialEq)]
pub struct CombingReport<T> {
    pub radius: usize,
    pub vertices: usize,
    pub geodesic_words: u64,
    pub pass: bool,
    /// The vertex whose total weight is farthest from one, with that total.
    pub worst: Option<(VertexId, T)>,
}

/// Sums, for every vertex within `radius`, the combing weight of all
/// geodesic words reaching it; each sum must be exactly one.
pub fn validate_combing<T: Scalar>(
    aut: &FftpAutomaton,
    ball: &Ball,
    radius: usize,
) -> Result<CombingReport<T>, Error> {
    ball.require_radius(radius)?;
    let n = ball.ball_size(radius);
    let parents: Vec<Option<T>> = (0..aut.len() as StateId)
        .map(|s| {
            let p = aut.parent_count(s).ok()?;
            (p > 0).then(|| T::from_ratio(1, p as i64))
        })
        .collect();
    let mut sums = vec![T::zero(); n];
    sums[0] = T::one();
    let mut words = 0u64;
    let mut stack: Vec<(StateId, VertexId, usize, T)> = vec![(aut.initial(), ball.identity(), 0, T::one())];
    while let Some((s, v, len, w)) = stack.pop() {
        words += 1;
        if len == radius {
            continue;
        }
        for x in ball.alphabet().letters() {
            let t = aut.next(s, x);
            if Some(t) == aut.fail() {
                continue;
            }
            let u = ball.neighbor(v, x).expect("inside the ball");
            let Some(inv) = parents[t as usize].clone().filter(|_| ball.dist(u) == len + 1) else {
                return Err(AutomatonError::SemanticsViolated {
                    word: format!("{}{}", ball.format(v), ball.alphabet().name(x)),
                    detail: "accepted word is not geodesic".into(),
                }
                .into());
            };
            let w2 = w.clone() * inv;
            sums[u as usize] = sums[u as usize].clone() + w2.clone();
            stack.push((t, u, len + 1, w2));
        }
    }
    let one = T::one();
    let mut worst: Option<(VertexId, T)> = None;
    let mut worst_gap = -1.0;
    let mut pass = true;
    for (v, s) in sums.into_iter().enumerate() {
        if !s.approx_eq(&one) {
            pass = false;
        }
        let gap = (s.to_f64() - 1.0).abs();
        if gap > worst_gap {
            worst_gap = gap;
            worst = Some((v as VertexId, s));
        }
    }
    Ok(CombingReport {
        radius,
        vertices: n,
        geodesic_words: words,
        pass,
        worst: if pass { None } else { worst },
    })
}

/// Number of coefficients checked against the oracle for an automaton
/// with `states` non-fail states: `max(n_check, 2·states + 2)`.
pub fn prefix_length(states: usize, n_check: usize) -> usize {
    n_check.max(2 * states + 2)
}

/// Ball radius the oracles need to verify series of these matrices.
pub fn required_radius<T: Scalar>(mats: &TransitionMatrices<T>, n_check: usize) -> usize {
    prefix_length(mats.len(), n_check) - 1
}

/// Oracle settings; `None` in place of this struct skips verification.
#[derive(Clone, Copy, Debug)]
pub struct Check<'a> {
    pub ball: &'a Ball,
}

/// A sphere series and its cumulative counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPair<T> {
    pub sphere: RationalSeries<T>,
    pub ball: RationalSeries<T>,
}

fn compare<T: Scalar>(terms: &[T], oracle: &[BigInt]) -> Result<(), SeriesError> {
    for (i, (t, o)) in terms.iter().zip(oracle).enumerate() {
        if !t.approx_eq(&T::from_bigint(o)) {
            return Err(SeriesError::PrefixMismatch {
                index: i,
                computed: t.to_string(),
                oracle: o.to_string(),
            });
        }
    }
    Ok(())
}

/// Fits `terms` (at least `2·order + 2` of them), then compares the first
/// `verify` of them with the oracle and returns the verified series.
fn verified_series<T: Scalar>(
    mut terms: Vec<T>,
    order: usize,
    verify: usize,
    check: Option<Check>,
    kind: CountKind,
) -> Result<RationalSeries<T>, Error> {
    let s = series_from_sequence(&terms, order)?;
    let Some(check) = check else {
        return Ok(s);
    };
    terms.truncate(verify);
    compare(&terms, &brute_force_counts(check.ball, &kind, verify - 1)?)?;
    Ok(s.with_prefix(terms))
}

/// As [`verified_series`], adding the cumulative series checked against
/// `cumulative` (or the partial sums of the sphere oracle).
fn verified_pair<T: Scalar>(
    terms: Vec<T>,
    order: usize,
    verify: usize,
    check: Option<Check>,
    sphere: CountKind,
    cumulative: Option<CountKind>,
) -> Result<SeriesPair<T>, Error> {
    let s = verified_series(terms, order, verify, check, sphere.clone())?;
    let ball = s.over_one_minus_t();
    if let Some(check) = check {
        let oracle = match cumulative {
            Some(kind) => brute_force_counts(check.ball, &kind, verify - 1)?,
            None => crate::oracle::cumulative(&brute_force_counts(check.ball, &sphere, verify - 1)?),
        };
        compare(ball.prefix(), &oracle)?;
    }
    Ok(SeriesPair { sphere: s, ball })
}

/// Vertex sphere and ball series: `sₙ = u·Aⁿ·1`.
pub fn vertex_series<T: Scalar>(
    mats: &TransitionMatrices<T>,
    check: Option<Check>,
    n_check: usize,
) -> Result<SeriesPair<T>, Error> {
    let order = mats.len();
    let ones = vec![T::one(); order];
    let verify = prefix_length(order, n_check);
    let terms = mats.sequence(&ones, true, verify);
    verified_pair(terms, order, verify, check, CountKind::Sphere, Some(CountKind::Ball))
}

/// Geodesic words of each exact length, from the count matrix, and of
/// length at most `n`.
pub fn geodesic_series<T: Scalar>(
    mats: &TransitionMatrices<T>,
    check: Option<Check>,
    n_check: usize,
) -> Result<SeriesPair<T>, Error> {
    let order = mats.len();
    let ones = vec![T::one(); order];
    let verify = prefix_length(order, n_check);
    let terms = mats.sequence(&ones, false, verify);
    verified_pair(terms, order, verify, check, CountKind::Geodesic, None)
}

/// Per-state weights `1/D(φ)` on the coset accept set, zero elsewhere.
pub fn coset_weights<T: Scalar>(
    aut: &FftpAutomaton,
    mats: &TransitionMatrices<T>,
    ball: &Ball,
    subgroup: &SubgroupOracle,
) -> Result<Vec<T>, Error> {
    let members = subgroup.members_within_length(ball, aut.k())?;
    let accept = coset_accept_set(aut, &members);
    Ok(mats
        .states()
        .iter()
        .map(|&s| {
            let d = coset_multiplicity(aut, &members, s);
            if accept[s as usize] && d > 0 {
                T::from_ratio(1, d as i64)
            } else {
                T::zero()
            }
        })
        .collect())
}

/// Schreier graph sphere and ball series of `G/H`.
pub fn coset_series<T: Scalar>(
    aut: &FftpAutomaton,
    mats: &TransitionMatrices<T>,
    ball: &Ball,
    subgroup: &SubgroupOracle,
    check: Option<Check>,
    n_check: usize,
) -> Result<SeriesPair<T>, Error> {
    let weights = coset_weights(aut, mats, ball, subgroup)?;
    let order = mats.len();
    let verify = prefix_length(order, n_check);
    let terms = mats.sequence(&weights, true, verify);
    verified_pair(terms, order, verify, check, CountKind::Coset(subgroup), None)
}

/// Per-state shift `c(φ) = max_z offsets(z)`: a vertex `g` of type `φ`
/// has `gZ` inside the `n`-ball iff `|g| + c(φ) ≤ n`.
pub fn embedding_shifts<T: Scalar>(
    aut: &FftpAutomaton,
    mats: &TransitionMatrices<T>,
    z: &FiniteSubgraph,
) -> Result<Vec<usize>, Error> {
    z.check_diameter(aut.k())?;
    Ok(mats
        .states()
        .iter()
        .map(|&s| {
            z.ids
                .iter()
                .map(|&u| aut.offset(s, u).expect("live state"))
                .max()
                .unwrap_or(0)
                .max(0) as usize
        })
        .collect())
}

/// `e(n)`: translates of `Z` inside the `n`-ball, divided by the orbit
/// size of the identity under the stabilizer of `Z`.
pub fn embedding_series<T: Scalar>(
    aut: &FftpAutomaton,
    mats: &TransitionMatrices<T>,
    z: &FiniteSubgraph,
    check: Option<Check>,
    n_check: usize,
) -> Result<RationalSeries<T>, Error> {
    let shifts = embedding_shifts(aut, mats, z)?;
    // Σ_j t^{c_j}·X_j(t)/(1 − t) has recurrence order at most
    // states + max c + 1; the extra terms come from the matrix alone.
    let order = mats.len() + shifts.iter().max().copied().unwrap_or(0) + 1;
    let verify = prefix_length(mats.len(), n_check);
    let terms_len = verify.max(2 * order + 2);
    let xs = mats.state_vectors(true, terms_len);
    let orbit = T::from_ratio(z.orbit_size as i64, 1);
    let mut terms = Vec::with_capacity(terms_len);
    let mut running = vec![T::zero(); mats.len()];
    for n in 0..terms_len {
        let mut total = T::zero();
        for (j, r) in running.iter_mut().enumerate() {
            if let Some(m) = n.checked_sub(shifts[j]) {
                *r = r.clone() + xs[m][j].clone();
            }
            total = total + r.clone();
        }
        terms.push(total / orbit.clone());
    }
    verified_series(terms, order, verify, check, CountKind::Embed(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::build_automaton;
    use crate::ball::load_subgraph;
    use crate::bundled;
    use crate::Rational;

    fn setup(name: &str, radius: usize) -> (crate::config::JobConfig, Ball, FftpAutomaton) {
        let cfg = bundled::config(name).unwrap();
        let ball = Ball::build(&cfg.rewriting, radius).unwrap();
        let aut = build_automaton(&ball, cfg.params.k).unwrap();
        (cfg, ball, aut)
    }

    #[test]
    fn matrices_and_parents() {
        let (_, ball, aut) = setup("z2", 10);
        let m = TransitionMatrices::<Rational>::new(&aut).unwrap();
        assert_eq!(m.parents()[m.start()], 0);
        let xy = ball.alphabet().parse_word("x y").unwrap();
        let j = m.index_of(aut.run(xy.letters())).unwrap();
        assert_eq!(m.parents()[j], 2);
        for row in m.weighted() {
            for a in row {
                assert!(*a >= Rational::from_ratio(0, 1) && *a <= Rational::from_ratio(1, 1));
            }
        }
    }

    #[test]
    fn combing_weights() {
        for (name, r) in [("z2", 10), ("f2", 6), ("dinf", 8), ("s3", 10)] {
            let (_, ball, aut) = setup(name, r);
            let rep = validate_combing::<Rational>(&aut, &ball, 4).unwrap();
            assert!(rep.pass, "{name}: {:?}", rep.worst);
        }
    }

    #[test]
    fn grid_series() {
        let (_, _, aut) = setup("z2", 10);
        let m = TransitionMatrices::<Rational>::new(&aut).unwrap();
        let big = Ball::build(&bundled::config("z2").unwrap().rewriting, required_radius(&m, 12)).unwrap();
        let pair = vertex_series(&m, Some(Check { ball: &big }), 12).unwrap();
        assert_eq!(pair.sphere.to_string().split(" prefix").next().unwrap(), "num=[1,2,1] den=[1,-2,1]");
        assert_eq!(&pair.ball.prefix()[..4], &[1, 5, 13, 25].map(|c| Rational::from_ratio(c, 1)));
        let geo = geodesic_series(&m, Some(Check { ball: &big }), 12).unwrap();
        assert_eq!(&geo.sphere.prefix()[..4], &[1, 4, 12, 28].map(|c| Rational::from_ratio(c, 1)));
    }

    #[test]
    fn edge_embeddings() {
        for (name, expect) in [("z2", [0, 2, 8]), ("dinf", [0, 1, 2])] {
            let (cfg, ball, aut) = setup(name, 10);
            let m = TransitionMatrices::<Rational>::new(&aut).unwrap();
            let z = load_subgraph(&ball, "edge", &cfg.subgraph("edge").unwrap().words).unwrap();
            let shifts = embedding_shifts(&aut, &m, &z).unwrap();
            assert_eq!(*shifts.iter().max().unwrap(), 1);
            let big = Ball::build(&cfg.rewriting, required_radius(&m, 11)).unwrap();
            let s = embedding_series(&aut, &m, &z, Some(Check { ball: &big }), 11).unwrap();
            assert_eq!(&s.prefix()[..3], &expect.map(|c| Rational::from_ratio(c, 1)));
        }
    }

    #[test]
    fn float_matches_exact() {
        let (_, _, aut) = setup("f2", 6);
        let m = TransitionMatrices::<f64>::new(&aut).unwrap();
        let pair = vertex_series(&m, None, 12).unwrap();
        assert_eq!(pair.sphere.expand(4), vec![1.0, 4.0, 12.0, 36.0]);
    }
}
