//! Plain total DFAs over a letter range: products, minimization,
//! canonical numbering and the text exchange format.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::AutomatonError;
use crate::rewriting::RewritingSystem;
use crate::words::{Alphabet, Letter, Word};

use super::{FftpAutomaton, StateId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    letters: usize,
    initial: StateId,
    delta: Vec<StateId>,
    accept: Vec<bool>,
}

impl Dfa {
    /// `delta[s * letters + x]` is the successor of `s` under `x`.
    pub fn new(letters: usize, initial: StateId, delta: Vec<StateId>, accept: Vec<bool>) -> Self {
        assert_eq!(delta.len(), accept.len() * letters);
        assert!((initial as usize) < accept.len());
        Dfa {
            letters,
            initial,
            delta,
            accept,
        }
    }

    /// One state accepting every word.
    pub fn universal(letters: usize) -> Self {
        Dfa::new(letters, 0, vec![0; letters], vec![true])
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.accept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accept.is_empty()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accept[s as usize]
    }

    pub fn next(&self, s: StateId, x: Letter) -> StateId {
        self.delta[s as usize * self.letters + x as usize]
    }

    pub fn run(&self, w: &[Letter]) -> StateId {
        w.iter().fold(self.initial, |s, &x| self.next(s, x))
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.is_accepting(self.run(w))
    }

    fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.len()];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for x in 0..self.letters as Letter {
                let t = self.next(s, x);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// States from which some accepting state is reachable.
    pub fn co_reachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.len()];
        for s in 0..self.len() {
            for x in 0..self.letters as Letter {
                rev[self.next(s as StateId, x) as usize].push(s as StateId);
            }
        }
        let mut live = self.accept.clone();
        let mut queue: VecDeque<StateId> = (0..self.len() as StateId).filter(|&s| live[s as usize]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &rev[t as usize] {
                if !live[s as usize] {
                    live[s as usize] = true;
                    queue.push_back(s);
                }
            }
        }
        live
    }

    /// Reachable states from which an accepting state can be reached.
    pub fn live_states(&self) -> usize {
        let live = self.co_reachable();
        self.reachable().into_iter().filter(|&s| live[s as usize]).count()
    }

    /// Renumbers reachable states in breadth-first discovery order,
    /// trying letters in order; unreachable states are dropped.
    pub fn canonical(&self) -> Dfa {
        let order = self.reachable();
        let mut id = vec![StateId::MAX; self.len()];
        for (i, &s) in order.iter().enumerate() {
            id[s as usize] = i as StateId;
        }
        let mut delta = Vec::with_capacity(order.len() * self.letters);
        for &s in &order {
            for x in 0..self.letters as Letter {
                delta.push(id[self.next(s, x) as usize]);
            }
        }
        let accept = order.iter().map(|&s| self.accept[s as usize]).collect();
        Dfa::new(self.letters, 0, delta, accept)
    }

    /// Minimal equivalent DFA (Moore partition refinement), canonically
    /// numbered.
    pub fn minimize(&self) -> Dfa {
        let dfa = self.canonical();
        let n = dfa.len();
        let mut class: Vec<usize> = dfa.accept.iter().map(|&a| usize::from(a)).collect();
        let mut count = class.iter().copied().collect::<std::collections::BTreeSet<_>>().len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for s in 0..n {
                let mut sig = Vec::with_capacity(dfa.letters + 1);
                sig.push(class[s]);
                for x in 0..dfa.letters as Letter {
                    sig.push(class[dfa.next(s as StateId, x) as usize]);
                }
                let k = ids.len();
                next.push(*ids.entry(sig).or_insert(k));
            }
            let refined = ids.len();
            class = next;
            if refined == count {
                break;
            }
            count = refined;
        }
        let mut delta = vec![0; count * dfa.letters];
        let mut accept = vec![false; count];
        for s in 0..n {
            let c = class[s];
            accept[c] = dfa.accept[s];
            for x in 0..dfa.letters as Letter {
                delta[c * dfa.letters + x as usize] = class[dfa.next(s as StateId, x) as usize] as StateId;
            }
        }
        Dfa::new(dfa.letters, class[0] as StateId, delta, accept).canonical()
    }

    /// Isomorphism of the reachable parts, respecting labels, the initial
    /// state and acceptance.
    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        self.letters == other.letters && self.canonical() == other.canonical()
    }

    /// Product automaton accepting the intersection, numbered by discovery.
    pub fn intersect(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        if self.letters != other.letters {
            return Err(AutomatonError::AlphabetMismatch {
                expected: self.letters,
                got: other.letters,
            });
        }
        let start = (self.initial, other.initial);
        let mut index = HashMap::from([(start, 0 as StateId)]);
        let mut pairs = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for x in 0..self.letters as Letter {
                let t = (self.next(a, x), other.next(b, x));
                let k = pairs.len() as StateId;
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    k
                });
                delta.push(id);
            }
            i += 1;
        }
        let accept = pairs
            .iter()
            .map(|&(a, b)| self.is_accepting(a) && other.is_accepting(b))
            .collect();
        Ok(Dfa::new(self.letters, 0, delta, accept))
    }

    /// Number of accepted words of each length `0..=n`.
    pub fn count_by_length(&self, n: usize) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.len()];
        x[self.initial as usize] = BigInt::one();
        let mut out = Vec::with_capacity(n + 1);
        for step in 0..=n {
            let total = x
                .iter()
                .zip(&self.accept)
                .filter(|(_, &a)| a)
                .fold(BigInt::zero(), |acc, (c, _)| acc + c);
            out.push(total);
            if step == n {
                break;
            }
            let mut y = vec![BigInt::zero(); self.len()];
            for (s, c) in x.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for l in 0..self.letters as Letter {
                    y[self.next(s as StateId, l) as usize] += c;
                }
            }
            x = y;
        }
        out
    }

    /// Accepted words of length exactly `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let live = self.co_reachable();
        let mut out = Vec::new();
        let mut stack = vec![(self.initial, Vec::new())];
        while let Some((s, w)) = stack.pop() {
            if w.len() == n {
                if self.is_accepting(s) {
                    out.push(Word(w));
                }
                continue;
            }
            for x in (0..self.letters as Letter).rev() {
                let t = self.next(s, x);
                if live[t as usize] {
                    let mut wx = w.clone();
                    wx.push(x);
                    stack.push((t, wx));
                }
            }
        }
        out
    }

    /// Text form: `states N initial I`, `accept …`, then one
    /// `state letter state` line per transition.
    pub fn export(&self, alphabet: &Alphabet) -> String {
        assert_eq!(alphabet.len(), self.letters);
        let mut s = format!("states {} initial {}\naccept", self.len(), self.initial);
        for (i, &a) in self.accept.iter().enumerate() {
            if a {
                let _ = write!(s, " {i}");
            }
        }
        s.push('\n');
        for st in 0..self.len() {
            for x in alphabet.letters() {
                let _ = writeln!(s, "{st} {} {}", alphabet.name(x), self.next(st as StateId, x));
            }
        }
        s
    }

    pub fn import(alphabet: &Alphabet, text: &str) -> Result<Dfa, AutomatonError> {
        let err = |line: usize, msg: &str| AutomatonError::DfaFormat {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (n, initial) = match h.as_slice() {
            ["states", n, "initial", i] => (
                n.parse::<usize>().map_err(|_| err(1, "bad state count"))?,
                i.parse::<StateId>().map_err(|_| err(1, "bad initial state"))?,
            ),
            _ => return Err(err(1, "expected `states N initial I`")),
        };
        if initial as usize >= n {
            return Err(err(1, "initial state out of range"));
        }
        let (ai, acc) = lines.next().ok_or_else(|| err(2, "missing accept line"))?;
        let mut tokens = acc.split_whitespace();
        if tokens.next() != Some("accept") {
            return Err(err(ai + 1, "expected `accept …`"));
        }
        let mut accept = vec![false; n];
        for t in tokens {
            let s: usize = t.parse().map_err(|_| err(ai + 1, "bad state"))?;
            *accept.get_mut(s).ok_or_else(|| err(ai + 1, "state out of range"))? = true;
        }
        let nl = alphabet.len();
        let mut delta = vec![StateId::MAX; n * nl];
        for (i, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            let [s, x, d] = t.as_slice() else {
                return Err(err(i + 1, "expected `state letter state`"));
            };
            let s: usize = s.parse().map_err(|_| err(i + 1, "bad state"))?;
            let d: StateId = d.parse().map_err(|_| err(i + 1, "bad state"))?;
            let x = alphabet.letter(x).map_err(|e| err(i + 1, &e.to_string()))?;
            if s >= n || d as usize >= n {
                return Err(err(i + 1, "state out of range"));
            }
            delta[s * nl + x as usize] = d;
        }
        if delta.contains(&StateId::MAX) {
            return Err(err(0, "transition table is not total"));
        }
        Ok(Dfa::new(nl, initial, delta, accept))
    }
}

/// Accepts exactly the words containing no left-hand side of `rs`, i.e.
/// the normal forms. States are the prefixes of left-hand sides plus a
/// dead state.
pub fn irreducible_dfa(rs: &RewritingSystem) -> Dfa {
    let nl = rs.alphabet().len();
    let lhs: Vec<&[Letter]> = rs.rules().iter().map(|r| r.lhs.letters()).collect();
    let is_prefix = |w: &[Letter]| lhs.iter().any(|l| l.len() > w.len() && l.starts_with(w));
    let mut index: HashMap<Vec<Letter>, StateId> = HashMap::from([(Vec::new(), 0)]);
    let mut states: Vec<Option<Vec<Letter>>> = vec![Some(Vec::new())];
    let mut delta = Vec::new();
    let mut dead: Option<StateId> = None;
    let mut i = 0;
    while i < states.len() {
        let current = states[i].clone();
        for x in 0..nl as Letter {
            let Some(s) = &current else {
                delta.push(i as StateId);
                continue;
            };
            let mut sx = s.clone();
            sx.push(x);
            let target = if lhs.iter().any(|l| sx.ends_with(l)) {
                *dead.get_or_insert_with(|| {
                    states.push(None);
                    (states.len() - 1) as StateId
                })
            } else {
                let start = (0..=sx.len()).find(|&k| is_prefix(&sx[k..])).unwrap_or(sx.len());
                let suffix = sx[start..].to_vec();
                let k = states.len() as StateId;
                *index.entry(suffix.clone()).or_insert_with(|| {
                    states.push(Some(suffix));
                    k
                })
            };
            delta.push(target);
        }
        i += 1;
    }
    let accept = states.iter().map(|s| s.is_some()).collect();
    Dfa::new(nl, 0, delta, accept)
}

/// Intersects an automaton's accept set with a user DFA.
pub fn intersect_language(aut: &FftpAutomaton, accept: &str, dfa: &Dfa) -> Result<Dfa, AutomatonError> {
    aut.to_dfa(accept)?.intersect(dfa)
}

/// Minimal acceptor of the geodesic language; its live states are the
/// cone types.
#[derive(Clone, Debug)]
pub struct ConeTypes {
    pub dfa: Dfa,
    pub count: usize,
}

pub fn cone_type_quotient(aut: &FftpAutomaton) -> ConeTypes {
    let dfa = aut.to_dfa(super::GEODESICS).expect("geodesic set always present").minimize();
    let count = dfa.live_states();
    ConeTypes { dfa, count }
}
