//! The fftp automaton: states are offset patterns over the `K`-ball.
//!
//! A state records, for each vertex `u` of the `K`-ball, the value
//! `d(1, wu) − d(1, w)` for the word `w` read so far. Reading a letter that
//! does not step one unit further from the origin leads to the absorbing
//! fail state.

pub mod dfa;
pub mod transversal;

use std::collections::{BTreeMap, HashMap};

use crate::ball::{restricted_distances, Ball, RestrictedDistanceTable, SubgroupMembers, VertexId, OUTSIDE};
use crate::error::AutomatonError;
use crate::words::{Letter, Word};

pub use dfa::Dfa;

pub type StateId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeState {
    Fail,
    /// Offsets indexed by `K`-ball vertex id.
    Offsets(Vec<i32>),
}

impl TypeState {
    pub fn is_fail(&self) -> bool {
        matches!(self, TypeState::Fail)
    }

    pub fn offsets(&self) -> Option<&[i32]> {
        match self {
            TypeState::Fail => None,
            TypeState::Offsets(o) => Some(o),
        }
    }
}

/// Lookup tables shared by all transitions at a fixed `K`.
#[derive(Clone, Debug)]
pub struct Tables {
    k: usize,
    n: usize,
    letters: usize,
    rdist: RestrictedDistanceTable,
    /// Vertex id of each letter.
    letter_vertex: Vec<VertexId>,
    /// `shift[x][a]` = id of `x⁻¹a` when it lies in the `K`-ball.
    shift: Vec<Vec<VertexId>>,
}

impl Tables {
    pub fn new(ball: &Ball, k: usize) -> Result<Self, AutomatonError> {
        if k == 0 {
            return Err(AutomatonError::ZeroParameter);
        }
        ball.require_radius(k + 1)?;
        let rdist = restricted_distances(ball, k)?;
        let n = rdist.size();
        let alphabet = ball.alphabet();
        let letter_vertex = alphabet
            .letters()
            .map(|x| ball.neighbor(ball.identity(), x).expect("radius at least 1"))
            .collect();
        let shift = alphabet
            .letters()
            .map(|x| {
                let xi = alphabet.inverse(x);
                (0..n as VertexId)
                    .map(|a| match ball.left_multiply(xi, a) {
                        Some(b) if (b as usize) < n => b,
                        _ => OUTSIDE,
                    })
                    .collect()
            })
            .collect();
        Ok(Tables {
            k,
            n,
            letters: alphabet.len(),
            rdist,
            letter_vertex,
            shift,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of `K`-ball vertices.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn letter_vertex(&self, x: Letter) -> VertexId {
        self.letter_vertex[x as usize]
    }

    pub fn restricted(&self) -> &RestrictedDistanceTable {
        &self.rdist
    }
}

/// The initial state: offsets are the distances from the origin.
pub fn initial_state(ball: &Ball, tables: &Tables) -> TypeState {
    TypeState::Offsets((0..tables.n as VertexId).map(|u| ball.dist(u) as i32).collect())
}

/// An offset outside `[−K, K]`, reported by [`transition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutOfRange {
    pub vertex: VertexId,
    pub value: i64,
}

/// `ψ(b) = min over a of φ(a) + d_B(x⁻¹a, b) − 1`, or fail when `φ(x) ≠ 1`.
pub fn transition(state: &TypeState, x: Letter, tables: &Tables) -> Result<TypeState, OutOfRange> {
    let TypeState::Offsets(phi) = state else {
        return Ok(TypeState::Fail);
    };
    if phi[tables.letter_vertex(x) as usize] != 1 {
        return Ok(TypeState::Fail);
    }
    let n = tables.n;
    let shift = &tables.shift[x as usize];
    let mut psi = vec![i64::MAX; n];
    for (a, &pa) in phi.iter().enumerate() {
        let s = shift[a];
        if s == OUTSIDE {
            continue;
        }
        for (b, slot) in psi.iter_mut().enumerate() {
            if let Some(d) = tables.rdist.get(s, b as VertexId) {
                let v = pa as i64 + d as i64 - 1;
                if v < *slot {
                    *slot = v;
                }
            }
        }
    }
    let k = tables.k as i64;
    let mut out = Vec::with_capacity(n);
    for (b, &v) in psi.iter().enumerate() {
        if !(-k..=k).contains(&v) {
            return Err(OutOfRange {
                vertex: b as VertexId,
                value: v,
            });
        }
        out.push(v as i32);
    }
    Ok(TypeState::Offsets(out))
}

/// Result of checking states against true distance differences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticsReport {
    pub max_len: usize,
    pub geodesic_words: u64,
    pub non_geodesic_words: u64,
}

/// Deterministic, total automaton over interned type states.
///
/// States are numbered in the order they are discovered by a breadth-first
/// search that tries letters in alphabet order, i.e. by the shortlex order
/// of their least discovering word.
#[derive(Clone, Debug)]
pub struct FftpAutomaton {
    k: usize,
    letters: usize,
    states: Vec<TypeState>,
    words: Vec<Word>,
    delta: Vec<StateId>,
    fail: Option<StateId>,
    tables: Tables,
    accept: BTreeMap<String, Vec<bool>>,
    /// Length bound of the semantics sample checked during the build.
    pub validated_to: usize,
}

pub const GEODESICS: &str = "geodesics";

impl FftpAutomaton {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn fail(&self) -> Option<StateId> {
        self.fail
    }

    /// Number of states other than fail.
    pub fn live_len(&self) -> usize {
        self.states.len() - usize::from(self.fail.is_some())
    }

    pub fn state(&self, s: StateId) -> &TypeState {
        &self.states[s as usize]
    }

    pub fn states(&self) -> &[TypeState] {
        &self.states
    }

    /// The shortlex-least word reaching `s`.
    pub fn discovering_word(&self, s: StateId) -> &Word {
        &self.words[s as usize]
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn next(&self, s: StateId, x: Letter) -> StateId {
        self.delta[s as usize * self.letters + x as usize]
    }

    pub fn run(&self, w: &[Letter]) -> StateId {
        w.iter().fold(self.initial(), |s, &x| self.next(s, x))
    }

    pub fn accept_set(&self, name: &str) -> Result<&[bool], AutomatonError> {
        self.accept
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| AutomatonError::UnknownAcceptSet(name.to_string()))
    }

    pub fn accept_names(&self) -> impl Iterator<Item = &str> {
        self.accept.keys().map(|s| s.as_str())
    }

    pub fn insert_accept_set(&mut self, name: &str, set: Vec<bool>) {
        assert_eq!(set.len(), self.states.len());
        self.accept.insert(name.to_string(), set);
    }

    /// The automaton as a plain DFA with the named accept set.
    pub fn to_dfa(&self, accept: &str) -> Result<Dfa, AutomatonError> {
        Ok(Dfa::new(
            self.letters,
            self.initial(),
            self.delta.clone(),
            self.accept_set(accept)?.to_vec(),
        ))
    }

    /// Offsets of `u` in state `s`; `None` for the fail state.
    pub fn offset(&self, s: StateId, u: VertexId) -> Option<i32> {
        self.state(s).offsets().map(|o| o[u as usize])
    }

    /// Number of letters `x` with offset `−1`: the edges entering the
    /// vertex along a geodesic.
    pub fn parent_count(&self, s: StateId) -> Result<usize, AutomatonError> {
        let o = self.state(s).offsets().ok_or_else(|| AutomatonError::SemanticsViolated {
            word: String::new(),
            detail: "parent count of the fail state".into(),
        })?;
        Ok((0..self.letters as Letter)
            .filter(|&x| o[self.tables.letter_vertex(x) as usize] == -1)
            .count())
    }
}

/// Closure of the initial state under [`transition`]. Validates state
/// semantics on all words of length at most `min(radius − K, K + 2)`, with
/// exact offsets required on the `⌊√K⌋`-ball.
pub fn build_automaton(ball: &Ball, k: usize) -> Result<FftpAutomaton, AutomatonError> {
    ball.require_radius(2 * k + 2)?;
    let tables = Tables::new(ball, k)?;
    let letters = tables.letters;
    let alphabet = ball.alphabet();
    let init = initial_state(ball, &tables);
    let mut index: HashMap<TypeState, StateId> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut words = vec![Word::empty()];
    let mut delta = Vec::new();
    let mut next = 0;
    while next < states.len() {
        for x in 0..letters as Letter {
            let psi = transition(&states[next], x, &tables).map_err(|e| {
                let mut w = words[next].clone();
                w.push(x);
                AutomatonError::ParameterTooSmall {
                    k,
                    word: alphabet.format_word(&w),
                    vertex: ball.format(e.vertex),
                    value: e.value,
                }
            })?;
            let id = match index.get(&psi) {
                Some(&id) => id,
                None => {
                    let id = states.len() as StateId;
                    let mut w = words[next].clone();
                    w.push(x);
                    index.insert(psi.clone(), id);
                    states.push(psi);
                    words.push(w);
                    id
                }
            };
            delta.push(id);
        }
        next += 1;
    }
    let fail = states.iter().position(|s| s.is_fail()).map(|i| i as StateId);
    let geodesics = states.iter().map(|s| !s.is_fail()).collect();
    let validated_to = (ball.radius() - k).min(k + 2);
    let aut = FftpAutomaton {
        k,
        letters,
        states,
        words,
        delta,
        fail,
        tables,
        accept: BTreeMap::from([(GEODESICS.to_string(), geodesics)]),
        validated_to,
    };
    check_state_semantics(&aut, ball, validated_to, exact_radius(k))?;
    Ok(aut)
}

/// The radius `M` on which offsets are exact distance differences when the
/// parameter is `K = M²`: the largest `M` with `M² ≤ K`.
pub fn exact_radius(k: usize) -> usize {
    k.isqrt()
}

/// Checks every word of length at most `max_len`: non-geodesic words reach
/// fail; geodesic words reach a state whose offsets equal
/// `d(1, wu) − d(1, w)` for `|u| ≤ exact` and bound it from above on the
/// rest of the `K`-ball (offsets are minima over a restricted set of paths).
pub fn check_state_semantics(
    aut: &FftpAutomaton,
    ball: &Ball,
    max_len: usize,
    exact: usize,
) -> Result<SemanticsReport, AutomatonError> {
    ball.require_radius(max_len + aut.k)?;
    let exact_n = ball.ball_size(exact.min(aut.k));
    let alphabet = ball.alphabet();
    let kball: Vec<&Word> = (0..aut.tables.n as VertexId).map(|u| ball.word(u)).collect();
    let mut report = SemanticsReport {
        max_len,
        geodesic_words: 0,
        non_geodesic_words: 0,
    };
    let nl = aut.letters as u64;
    // Number of words of length `len..=max_len` extending a word of length `len`.
    let extensions = |len: usize| -> u64 { (0..=(max_len - len) as u32).map(|e| nl.pow(e)).sum() };
    let violated = |w: &[Letter], detail: String| AutomatonError::SemanticsViolated {
        word: alphabet.format_word(&Word::from_letters(w)),
        detail,
    };
    let mut stack: Vec<(Vec<Letter>, VertexId, StateId)> = vec![(Vec::new(), ball.identity(), aut.initial())];
    while let Some((w, v, s)) = stack.pop() {
        let geodesic = ball.dist(v) == w.len();
        match aut.state(s) {
            TypeState::Fail if geodesic => {
                return Err(violated(&w, "geodesic word reaches the fail state".into()));
            }
            TypeState::Fail => {
                // Extensions of a non-geodesic word are non-geodesic and stay in fail.
                report.non_geodesic_words += extensions(w.len());
                continue;
            }
            TypeState::Offsets(_) if !geodesic => {
                return Err(violated(&w, "non-geodesic word avoids the fail state".into()));
            }
            TypeState::Offsets(o) => {
                report.geodesic_words += 1;
                let dv = ball.dist(v) as i32;
                for (u, word) in kball.iter().enumerate() {
                    let wu = ball.walk(v, word.letters()).expect("radius checked");
                    let expected = ball.dist(wu) as i32 - dv;
                    if o[u] < expected || (u < exact_n && o[u] != expected) {
                        return Err(violated(
                            &w,
                            format!(
                                "offset at {:?} is {} but the distance difference is {}",
                                ball.format(u as VertexId),
                                o[u],
                                expected
                            ),
                        ));
                    }
                }
            }
        }
        if w.len() < max_len {
            for x in (0..aut.letters as Letter).rev() {
                let mut wx = w.clone();
                wx.push(x);
                let vx = ball.neighbor(v, x).expect("radius checked");
                stack.push((wx, vx, aut.next(s, x)));
            }
        }
    }
    Ok(report)
}

/// Non-fail states whose offsets are non-negative at every subgroup member
/// of the `K`-ball: the words that are geodesic to the coset `wH`.
pub fn coset_accept_set(aut: &FftpAutomaton, members: &SubgroupMembers) -> Vec<bool> {
    let kmembers: Vec<VertexId> = members.ids.iter().copied().filter(|&u| (u as usize) < aut.tables.n).collect();
    aut.states
        .iter()
        .map(|s| match s.offsets() {
            None => false,
            Some(o) => kmembers.iter().all(|&u| o[u as usize] >= 0),
        })
        .collect()
}

/// `D(φ)`: the number of `K`-ball subgroup members at offset zero.
pub fn coset_multiplicity(aut: &FftpAutomaton, members: &SubgroupMembers, s: StateId) -> usize {
    match aut.state(s).offsets() {
        None => 0,
        Some(o) => members
            .ids
            .iter()
            .filter(|&&u| (u as usize) < aut.tables.n && o[u as usize] == 0)
            .count(),
    }
}

/// Registers the accept set `coset(NAME)`.
pub fn add_coset_accept_set(aut: &mut FftpAutomaton, name: &str, members: &SubgroupMembers) -> String {
    let key = format!("coset({name})");
    let set = coset_accept_set(aut, members);
    aut.insert_accept_set(&key, set);
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn setup(name: &str, radius: usize) -> (Ball, FftpAutomaton) {
        let cfg = bundled::config(name).unwrap();
        let ball = Ball::build(&cfg.rewriting, radius).unwrap();
        let aut = build_automaton(&ball, cfg.params.k).unwrap();
        (ball, aut)
    }

    fn offsets_by_name(ball: &Ball, s: &TypeState) -> Vec<(String, i32)> {
        s.offsets()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(u, &o)| (ball.format(u as VertexId), o))
            .collect()
    }

    #[test]
    fn initial_states() {
        let cfg = bundled::config("dinf").unwrap();
        let ball = Ball::build(&cfg.rewriting, 6).unwrap();
        let t = Tables::new(&ball, 2).unwrap();
        let init = offsets_by_name(&ball, &initial_state(&ball, &t));
        let expect: Vec<(String, i32)> = [("", 0), ("a", 1), ("b", 1), ("ab", 2), ("ba", 2)]
            .iter()
            .map(|(w, d)| (w.to_string(), *d))
            .collect();
        assert_eq!(init, expect);
    }

    #[test]
    fn z2_transition_matches_distance_differences() {
        let cfg = bundled::config("z2").unwrap();
        let ball = Ball::build(&cfg.rewriting, 6).unwrap();
        let t = Tables::new(&ball, 2).unwrap();
        let a = ball.alphabet();
        let x = a.letter("x").unwrap();
        let psi = transition(&initial_state(&ball, &t), x, &t).unwrap();
        let at = |w: &str| psi.offsets().unwrap()[ball.locate(&a.parse_word(w).unwrap()).unwrap() as usize];
        assert_eq!((at("X"), at("x"), at("xy"), at("XX")), (-1, 1, 2, 0));
        assert_eq!(transition(&TypeState::Fail, x, &t).unwrap(), TypeState::Fail);
    }

    #[test]
    fn f2_backtrack_fails() {
        let (ball, aut) = setup("f2", 4);
        assert_eq!(aut.len(), 6);
        let a = ball.alphabet();
        let s = aut.run(a.parse_word("aA").unwrap().letters());
        assert_eq!(Some(s), aut.fail());
        let sa = aut.run(&[a.letter("a").unwrap()]);
        let o = offsets_by_name(&ball, aut.state(sa));
        assert_eq!(o.iter().find(|(w, _)| w == "A").unwrap().1, -1);
        assert_eq!(aut.parent_count(sa).unwrap(), 1);
        assert_eq!(aut.parent_count(aut.initial()).unwrap(), 0);
    }

    #[test]
    fn dinf_has_four_states() {
        let (_, aut) = setup("dinf", 4);
        assert_eq!(aut.len(), 4);
        assert_eq!(aut.live_len(), 3);
    }

    #[test]
    fn z2_parents() {
        let (ball, aut) = setup("z2", 12);
        let s = aut.run(ball.alphabet().parse_word("xy").unwrap().letters());
        assert_eq!(aut.parent_count(s).unwrap(), 2);
        check_state_semantics(&aut, &ball, 8, 2).unwrap();
        assert!(check_state_semantics(&aut, &ball, 8, 4).is_err());
    }

    #[test]
    fn too_small_parameter_is_diagnosed() {
        let cfg = bundled::config("s3").unwrap();
        let ball = Ball::build(&cfg.rewriting, 8).unwrap();
        let r = build_automaton(&ball, 1);
        assert!(
            matches!(r, Err(AutomatonError::ParameterTooSmall { .. }) | Err(AutomatonError::SemanticsViolated { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn coset_accept_sets() {
        let cfg = bundled::config("f2").unwrap();
        let ball = Ball::build(&cfg.rewriting, 4).unwrap();
        let mut aut = build_automaton(&ball, 1).unwrap();
        let members = cfg.subgroup("Ha").unwrap().members_within_length(&ball, 1).unwrap();
        let key = add_coset_accept_set(&mut aut, "Ha", &members);
        let acc = aut.accept_set(&key).unwrap();
        let a = ball.alphabet();
        let accepted = |w: &str| acc[aut.run(a.parse_word(w).unwrap().letters()) as usize];
        assert!(accepted("") && accepted("b") && accepted("B") && accepted("ab"));
        assert!(!accepted("a") && !accepted("A") && !accepted("ba"));
        let triv = crate::ball::SubgroupOracle::trivial("1").members_within_length(&ball, 1).unwrap();
        assert_eq!(coset_accept_set(&aut, &triv), aut.accept_set(GEODESICS).unwrap());
    }
}
