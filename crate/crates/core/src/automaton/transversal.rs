//! Acceptors for the shortlex-least coset-geodesic word of each left coset.

use std::collections::HashMap;

use crate::ball::{Ball, SubgroupOracle, VertexId};
use crate::error::AutomatonError;
use crate::oracle::coset_representatives;
use crate::words::Letter;

use super::dfa::{irreducible_dfa, Dfa};
use super::{coset_accept_set, FftpAutomaton, StateId};

/// A competitor `w′` of the word `w` read so far, kept as the word
/// difference `w′⁻¹w`. `smaller` is set once `w′` has diverged from `w`
/// with a smaller letter; competitors that diverged with a larger letter
/// are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Competitor {
    diff: VertexId,
    smaller: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Dead,
    Live {
        fftp: StateId,
        irreducible: StateId,
        competitors: Vec<Competitor>,
    },
}

/// Builds the minimal DFA accepting, for each left coset `wH`, the
/// shortlex-least word among the geodesics to that coset.
///
/// Word differences are tracked inside the `ft_const`-ball only. Dropping
/// the ones that leave it can only cause false acceptances, so the result
/// is compared with brute-force coset representatives on all lengths up to
/// `verify_to`; a disagreement means `ft_const` is too small.
pub fn shortlex_transversal_acceptor(
    aut: &FftpAutomaton,
    ball: &Ball,
    subgroup: &SubgroupOracle,
    ft_const: usize,
    verify_to: usize,
) -> Result<Dfa, AutomatonError> {
    ball.require_radius((ft_const + 1).max(aut.k()).max(verify_to))?;
    let alphabet = ball.alphabet();
    let nl = alphabet.len();
    let bound = ball.ball_size(ft_const) as VertexId;
    let members = subgroup.members_within_length(ball, ft_const.max(aut.k()))?;
    let coset_ok = coset_accept_set(aut, &members);
    let irr = irreducible_dfa(ball.rewriting());

    // step[(d * nl + x) * nl + y] = y⁻¹ · d · x, when inside the ft_const-ball.
    let mut step = vec![None; bound as usize * nl * nl];
    for d in 0..bound {
        for x in alphabet.letters() {
            let Some(dx) = ball.neighbor(d, x) else { continue };
            for y in alphabet.letters() {
                let e = ball.left_multiply(alphabet.inverse(y), dx).filter(|&e| e < bound);
                step[(d as usize * nl + x as usize) * nl + y as usize] = e;
            }
        }
    }

    let advance = |node: &Node, x: Letter| -> Node {
        let Node::Live {
            fftp,
            irreducible,
            competitors,
        } = node
        else {
            return Node::Dead;
        };
        let f = aut.next(*fftp, x);
        let r = irr.next(*irreducible, x);
        if Some(f) == aut.fail() || !irr.is_accepting(r) {
            return Node::Dead;
        }
        let mut next = Vec::new();
        for c in competitors {
            for y in 0..nl as Letter {
                if !c.smaller && y > x {
                    continue;
                }
                if let Some(diff) = step[(c.diff as usize * nl + x as usize) * nl + y as usize] {
                    next.push(Competitor {
                        diff,
                        smaller: c.smaller || y < x,
                    });
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        Node::Live {
            fftp: f,
            irreducible: r,
            competitors: next,
        }
    };
    let accepting = |node: &Node| match node {
        Node::Dead => false,
        Node::Live {
            fftp,
            irreducible,
            competitors,
        } => {
            coset_ok[*fftp as usize]
                && irr.is_accepting(*irreducible)
                && !competitors.iter().any(|c| c.smaller && members.contains(c.diff))
        }
    };

    let start = Node::Live {
        fftp: aut.initial(),
        irreducible: irr.initial(),
        competitors: vec![Competitor {
            diff: ball.identity(),
            smaller: false,
        }],
    };
    let mut index = HashMap::from([(start.clone(), 0 as StateId)]);
    let mut nodes = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        for x in 0..nl as Letter {
            let t = advance(&nodes[i], x);
            let k = nodes.len() as StateId;
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    index.insert(t.clone(), k);
                    nodes.push(t);
                    k
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accept = nodes.iter().map(accepting).collect();
    let dfa = Dfa::new(nl, 0, delta, accept).minimize();

    let reps = coset_representatives(ball, subgroup, verify_to)?;
    for (n, expected) in reps.iter().enumerate() {
        let got = dfa.words_of_length(n);
        if &got != expected {
            let witness = got
                .iter()
                .find(|w| !expected.contains(w))
                .or_else(|| expected.iter().find(|w| !got.contains(w)))
                .expect("sets differ");
            return Err(AutomatonError::FellowConstantTooSmall {
                ft_const,
                word: alphabet.format_word(witness),
            });
        }
    }
    Ok(dfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::build_automaton;
    use crate::bundled;
    use num_bigint::BigInt;

    fn transversal(name: &str, h: &str, verify: usize) -> (Ball, Dfa) {
        let cfg = bundled::config(name).unwrap();
        let ball = Ball::build(&cfg.rewriting, verify.max(2 * cfg.params.k + 2)).unwrap();
        let aut = build_automaton(&ball, cfg.params.k).unwrap();
        let sub = cfg.subgroup(h).unwrap();
        let dfa = shortlex_transversal_acceptor(&aut, &ball, sub, cfg.params.ft_const, verify).unwrap();
        (ball, dfa)
    }

    #[test]
    fn f2_cyclic_subgroup() {
        let (_, dfa) = transversal("f2", "Ha", 6);
        let counts = dfa.count_by_length(6);
        let mut expect = vec![BigInt::from(1)];
        for n in 1..=6u32 {
            expect.push(BigInt::from(2 * 3i64.pow(n - 1)));
        }
        assert_eq!(counts, expect);
    }

    #[test]
    fn z2_trivial_subgroup() {
        let (ball, dfa) = transversal("z2", "triv", 6);
        let words: Vec<String> = dfa.words_of_length(2).iter().map(|w| ball.alphabet().format_word(w)).collect();
        assert_eq!(words, ["xx", "xy", "xY", "XX", "Xy", "XY", "yy", "YY"]);
    }

    #[test]
    fn s3_parabolic() {
        let (ball, dfa) = transversal("s3", "Ws", 8);
        let all: Vec<String> = (0..=8)
            .flat_map(|n| dfa.words_of_length(n))
            .map(|w| ball.alphabet().format_word(&w))
            .collect();
        assert_eq!(all, ["", "t", "st"]);
    }
}
