//! Shortlex-reducing string rewriting systems: normal forms, the
//! critical-pair confluence test, and bounded Knuth–Bendix completion.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::RewriteError;
use crate::words::{shortlex, Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Rule { lhs, rhs }
    }
}

/// A string rewriting system whose rules all strictly decrease in the
/// shortlex order. Normalization therefore always terminates.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    // rule indices keyed by the last letter of the lhs, shortest lhs first
    by_last: Vec<Vec<usize>>,
}

impl PartialEq for RewritingSystem {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.rules == other.rules
    }
}

/// Outcome of the critical-pair test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfluenceReport {
    Confluent { overlaps_checked: usize },
    NotConfluent { word: Word, left: Word, right: Word },
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        matches!(self, ConfluenceReport::Confluent { .. })
    }
}

/// Outcome of bounded completion. Running out of budget is not an error.
#[derive(Clone, Debug)]
pub enum Completion {
    Complete(RewritingSystem),
    Incomplete {
        partial: RewritingSystem,
        reason: String,
    },
}

/// An overlap word and its two one-step reducts.
type Triple = (Word, Word, Word);

impl RewritingSystem {
    pub fn new(alphabet: Alphabet, rules: Vec<Rule>) -> Result<Self, RewriteError> {
        for r in &rules {
            alphabet.check_word(&r.lhs)?;
            alphabet.check_word(&r.rhs)?;
            if r.lhs.is_empty() {
                return Err(RewriteError::EmptyLhs);
            }
            if shortlex(r.rhs.letters(), r.lhs.letters()) != Ordering::Less {
                return Err(RewriteError::NonReducing {
                    lhs: alphabet.format_word(&r.lhs),
                    rhs: alphabet.format_word(&r.rhs),
                });
            }
        }
        let mut by_last = vec![Vec::new(); alphabet.len()];
        for (i, r) in rules.iter().enumerate() {
            by_last[*r.lhs.letters().last().unwrap() as usize].push(i);
        }
        for v in &mut by_last {
            v.sort_by_key(|&i| (rules[i].lhs.len(), i));
        }
        Ok(RewritingSystem {
            alphabet,
            rules,
            by_last,
        })
    }

    /// Free cancellation rules `x x⁻¹ -> ε` for every letter.
    pub fn free_cancellation(alphabet: &Alphabet) -> Vec<Rule> {
        alphabet
            .letters()
            .map(|x| Rule::new(Word(vec![x, alphabet.inverse(x)]), Word::empty()))
            .collect()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn redex_at_end(&self, w: &[Letter]) -> Option<usize> {
        let last = *w.last()?;
        self.by_last[last as usize]
            .iter()
            .copied()
            .find(|&i| w.ends_with(self.rules[i].lhs.letters()))
    }

    /// Appends `input` to the irreducible word `out` and reduces.
    ///
    /// Redexes are contracted as soon as they are complete while reading
    /// left to right, choosing the shortest lhs among those ending at the
    /// current position.
    pub fn reduce_onto(&self, out: &mut Vec<Letter>, input: &[Letter]) {
        let mut pending: Vec<Letter> = input.iter().rev().copied().collect();
        while let Some(c) = pending.pop() {
            out.push(c);
            if let Some(i) = self.redex_at_end(out) {
                let rule = &self.rules[i];
                out.truncate(out.len() - rule.lhs.len());
                pending.extend(rule.rhs.letters().iter().rev());
            }
        }
    }

    pub fn normalize(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len());
        self.reduce_onto(&mut out, w.letters());
        Word(out)
    }

    /// Normal form of `prefix · suffix`, where `prefix` is already irreducible.
    pub fn multiply(&self, prefix: &Word, suffix: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(prefix.len() + suffix.len());
        out.extend_from_slice(prefix.letters());
        self.reduce_onto(&mut out, suffix);
        Word(out)
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        let l = w.letters();
        (1..=l.len()).all(|end| self.redex_at_end(&l[..end]).is_none())
    }

    /// Checks every overlap and inclusion between left-hand sides.
    pub fn check_confluence(&self) -> ConfluenceReport {
        let mut checked = 0;
        let mut failure: Option<(Word, Word, Word)> = None;
        for ((word, x, y), _) in self.critical_pairs() {
            checked += 1;
            let nx = self.normalize(&x);
            let ny = self.normalize(&y);
            if nx != ny {
                let candidate = (word, nx, ny);
                let better = match &failure {
                    None => true,
                    Some((w, _, _)) => {
                        shortlex(candidate.0.letters(), w.letters()) == Ordering::Less
                    }
                };
                if better {
                    failure = Some(candidate);
                }
            }
        }
        match failure {
            None => ConfluenceReport::Confluent {
                overlaps_checked: checked,
            },
            Some((word, left, right)) => ConfluenceReport::NotConfluent { word, left, right },
        }
    }

    /// Critical pairs as `((overlap word, first reduct, second reduct), rule pair)`.
    fn critical_pairs(&self) -> Vec<(Triple, (usize, usize))> {
        let mut out = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            let li = ri.lhs.letters();
            for (j, rj) in self.rules.iter().enumerate() {
                let lj = rj.lhs.letters();
                // proper overlaps: a suffix of li equals a prefix of lj
                for k in 1..li.len().min(lj.len()) {
                    if i == j && k == li.len() {
                        continue;
                    }
                    if li[li.len() - k..] != lj[..k] {
                        continue;
                    }
                    let mut word = li.to_vec();
                    word.extend_from_slice(&lj[k..]);
                    let mut left = ri.rhs.letters().to_vec();
                    left.extend_from_slice(&lj[k..]);
                    let mut right = li[..li.len() - k].to_vec();
                    right.extend_from_slice(rj.rhs.letters());
                    out.push(((Word(word), Word(left), Word(right)), (i, j)));
                }
                // inclusions: lj occurs inside li
                if i != j && lj.len() <= li.len() {
                    for start in 0..=li.len() - lj.len() {
                        if li[start..start + lj.len()] == *lj {
                            let mut right = li[..start].to_vec();
                            right.extend_from_slice(rj.rhs.letters());
                            right.extend_from_slice(&li[start + lj.len()..]);
                            out.push((
                                (ri.lhs.clone(), ri.rhs.clone(), Word(right)),
                                (i, j),
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Bounded Knuth–Bendix completion with respect to shortlex.
    ///
    /// Already-confluent systems are returned unchanged. Otherwise unresolved
    /// critical pairs are oriented into new rules and the system is
    /// interreduced after every round.
    pub fn complete(&self, max_rules: usize, max_len: usize) -> Completion {
        if self.check_confluence().is_confluent() {
            return Completion::Complete(self.clone());
        }
        let alphabet = self.alphabet.clone();
        let mut rules: BTreeSet<Rule> = self.rules.iter().cloned().collect();
        loop {
            rules = interreduce(&alphabet, rules);
            let sys = RewritingSystem::new(alphabet.clone(), rules.iter().cloned().collect())
                .expect("oriented rules are reducing");
            if rules.len() > max_rules {
                return Completion::Incomplete {
                    partial: sys,
                    reason: format!("rule budget {max_rules} exceeded ({} rules)", rules.len()),
                };
            }
            let mut new_rules = BTreeSet::new();
            for ((_, x, y), _) in sys.critical_pairs() {
                let nx = sys.normalize(&x);
                let ny = sys.normalize(&y);
                if let Some(rule) = orient(nx, ny) {
                    if rule.lhs.len() > max_len {
                        return Completion::Incomplete {
                            partial: sys,
                            reason: format!(
                                "rule length budget {max_len} exceeded ({} letters)",
                                rule.lhs.len()
                            ),
                        };
                    }
                    new_rules.insert(rule);
                }
            }
            if new_rules.is_empty() {
                return Completion::Complete(sys);
            }
            rules.extend(new_rules);
        }
    }
}

fn orient(a: Word, b: Word) -> Option<Rule> {
    match shortlex(a.letters(), b.letters()) {
        Ordering::Equal => None,
        Ordering::Greater => Some(Rule::new(a, b)),
        Ordering::Less => Some(Rule::new(b, a)),
    }
}

fn contains_factor(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Removes rules whose lhs is reducible by another rule (re-orienting the
/// equation they carried) and normalizes right-hand sides, to a fixpoint.
fn interreduce(alphabet: &Alphabet, mut rules: BTreeSet<Rule>) -> BTreeSet<Rule> {
    loop {
        let list: Vec<Rule> = rules.iter().cloned().collect();
        let redundant = list.iter().position(|r| {
            list.iter()
                .any(|o| o != r && contains_factor(r.lhs.letters(), o.lhs.letters()))
        });
        if let Some(i) = redundant {
            let r = list[i].clone();
            rules.remove(&r);
            let others = RewritingSystem::new(alphabet.clone(), rules.iter().cloned().collect())
                .expect("oriented rules are reducing");
            if let Some(rule) = orient(others.normalize(&r.lhs), others.normalize(&r.rhs)) {
                rules.insert(rule);
            }
            continue;
        }
        let sys = RewritingSystem::new(alphabet.clone(), list.clone())
            .expect("oriented rules are reducing");
        let reduced: BTreeSet<Rule> = list
            .iter()
            .map(|r| Rule::new(r.lhs.clone(), sys.normalize(&r.rhs)))
            .collect();
        if reduced == rules {
            return rules;
        }
        rules = reduced;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(a: &Alphabet, spec: &[(&str, &str)]) -> Vec<Rule> {
        spec.iter()
            .map(|(l, r)| Rule::new(a.parse_word(l).unwrap(), a.parse_word(r).unwrap()))
            .collect()
    }

    fn z2() -> RewritingSystem {
        let a = Alphabet::new(&["x", "X", "y", "Y"], &[("x", "X"), ("y", "Y")]).unwrap();
        let r = rules(
            &a,
            &[
                ("xX", ""),
                ("Xx", ""),
                ("yY", ""),
                ("Yy", ""),
                ("yx", "xy"),
                ("yX", "Xy"),
                ("Yx", "xY"),
                ("YX", "XY"),
            ],
        );
        RewritingSystem::new(a, r).unwrap()
    }

    fn dihedral() -> RewritingSystem {
        let a = Alphabet::new(&["a", "b"], &[("a", "a"), ("b", "b")]).unwrap();
        let r = rules(&a, &[("aa", ""), ("bb", "")]);
        RewritingSystem::new(a, r).unwrap()
    }

    fn s3() -> RewritingSystem {
        let a = Alphabet::new(&["s", "t"], &[("s", "s"), ("t", "t")]).unwrap();
        let r = rules(&a, &[("ss", ""), ("tt", ""), ("tst", "sts")]);
        RewritingSystem::new(a, r).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let z = z2();
        let a = z.alphabet().clone();
        assert_eq!(a.format_word(&z.normalize(&a.parse_word("yxY").unwrap())), "x");

        let f = Alphabet::new(&["a", "A", "b", "B"], &[("a", "A"), ("b", "B")]).unwrap();
        let f2 = RewritingSystem::new(f.clone(), RewritingSystem::free_cancellation(&f)).unwrap();
        assert!(f2.normalize(&f.parse_word("abBA").unwrap()).is_empty());

        let d = dihedral();
        let w = d.alphabet().parse_word("abba").unwrap();
        assert!(d.normalize(&w).is_empty());
    }

    #[test]
    fn non_reducing_rules_rejected() {
        let a = Alphabet::new(&["x", "X", "y", "Y"], &[("x", "X"), ("y", "Y")]).unwrap();
        let r = rules(&a, &[("x", "xy")]);
        assert!(matches!(
            RewritingSystem::new(a.clone(), r),
            Err(RewriteError::NonReducing { .. })
        ));
        let r = rules(&a, &[("xy", "xy")]);
        assert!(RewritingSystem::new(a, r).is_err());
    }

    #[test]
    fn confluence_examples() {
        assert!(dihedral().check_confluence().is_confluent());
        assert!(s3().check_confluence().is_confluent());
        assert!(z2().check_confluence().is_confluent());

        // {ab -> ε} alone has no overlaps, so the test reports confluent
        let a = Alphabet::new(&["a", "A", "b", "B"], &[("a", "A"), ("b", "B")]).unwrap();
        let r = rules(&a, &[("ab", "")]);
        assert!(RewritingSystem::new(a, r).unwrap().check_confluence().is_confluent());
    }

    #[test]
    fn non_confluent_detected() {
        let a = Alphabet::new(&["x", "X", "y", "Y"], &[("x", "X"), ("y", "Y")]).unwrap();
        let mut r = RewritingSystem::free_cancellation(&a);
        r.extend(rules(&a, &[("yx", "xy")]));
        let sys = RewritingSystem::new(a, r).unwrap();
        match sys.check_confluence() {
            ConfluenceReport::NotConfluent { word, left, right } => {
                assert_ne!(left, right);
                assert_eq!(sys.normalize(&left), left);
                assert_eq!(sys.normalize(&right), right);
                assert!(!word.is_empty());
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn completion_of_z2() {
        let a = Alphabet::new(&["x", "X", "y", "Y"], &[("x", "X"), ("y", "Y")]).unwrap();
        let mut r = RewritingSystem::free_cancellation(&a);
        r.extend(rules(&a, &[("yx", "xy")]));
        let sys = RewritingSystem::new(a, r).unwrap();
        match sys.complete(50, 10) {
            Completion::Complete(done) => {
                assert!(done.check_confluence().is_confluent());
                let mut got: Vec<_> = done.rules().to_vec();
                got.sort();
                let mut want = z2().rules().to_vec();
                want.sort();
                assert_eq!(got, want);
            }
            Completion::Incomplete { reason, .. } => panic!("incomplete: {reason}"),
        }
    }

    #[test]
    fn completion_fixpoint() {
        let d = dihedral();
        match d.complete(10, 10) {
            Completion::Complete(done) => assert_eq!(done, d),
            _ => panic!("expected completion"),
        }
    }

    #[test]
    fn surface_group_exceeds_budget() {
        let a = Alphabet::new(
            &["a", "A", "b", "B", "c", "C", "d", "D"],
            &[("a", "A"), ("b", "B"), ("c", "C"), ("d", "D")],
        )
        .unwrap();
        let mut r = RewritingSystem::free_cancellation(&a);
        r.extend(rules(&a, &[("abABcdCD", "")]));
        let sys = RewritingSystem::new(a, r).unwrap();
        assert!(matches!(sys.complete(5, 20), Completion::Incomplete { .. }));
    }

    #[test]
    fn irreducibility() {
        let z = z2();
        let a = z.alphabet();
        assert!(!z.is_irreducible(&a.parse_word("xxyY").unwrap()));
        assert!(z.is_irreducible(&a.parse_word("xxyy").unwrap()));
    }
}
