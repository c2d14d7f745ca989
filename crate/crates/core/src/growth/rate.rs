//! Exponential growth rates: exact root bracketing on the denominator, and
//! a Perron–Frobenius estimate from the transition matrices.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::{Dfs, Reversed};

use crate::scalar::Scalar;

use super::markov::TransitionMatrices;
use super::poly::Polynomial;
use super::series::RationalSeries;

/// `limsup sₙ^{1/n}` of a rational series.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRate<T> {
    /// Interval `(lo, hi]` holding the smallest root of the denominator in
    /// `(0, 1)`; `None` when there is none and the rate is exactly one.
    pub root: Option<(T, T)>,
    /// `[1/hi, 1/lo)`, or `[1, 1]`.
    pub bounds: (T, T),
    pub approx: f64,
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence<T: Scalar>(p: &Polynomial<T>) -> Vec<Polynomial<T>> {
    let mut seq = vec![p.clone(), p.derivative()];
    while let Some(last) = seq.last().filter(|q| !q.is_zero() && q.degree() > Some(0)) {
        let r = -&seq[seq.len() - 2].div_rem(last).1;
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq.retain(|q| !q.is_zero());
    seq
}

fn sign_changes<T: Scalar>(seq: &[Polynomial<T>], x: &T) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for q in seq {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Squarefree part `p / gcd(p, p′)`.
pub fn squarefree<T: Scalar>(p: &Polynomial<T>) -> Polynomial<T> {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        p.clone()
    } else {
        p.div_rem(&g).0
    }
}

/// Distinct real roots of `den` in `(a, b]`, for `den(a) ≠ 0`.
pub fn roots_in<T: Scalar>(seq: &[Polynomial<T>], a: &T, b: &T) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Brackets the smallest root of `den` in `(0, 1)` by bisection on Sturm
/// counts until the reciprocal interval is narrower than `1/tol_inv`.
pub fn growth_rate_of<T: Scalar>(den: &Polynomial<T>, tol_inv: i64) -> GrowthRate<T> {
    let one = T::one();
    let p = squarefree(den);
    let seq = sturm_sequence(&p);
    let (mut lo, mut hi) = (T::zero(), one.clone());
    let at_one = usize::from(p.eval(&one).is_zero());
    if p.degree().unwrap_or(0) == 0 || roots_in(&seq, &lo, &hi) == at_one {
        return GrowthRate {
            root: None,
            bounds: (one.clone(), one),
            approx: 1.0,
        };
    }
    let two = T::from_ratio(2, 1);
    let tol = T::from_ratio(1, tol_inv);
    loop {
        if lo.is_positive() && hi.clone() - lo.clone() <= tol.clone() * lo.clone() * hi.clone() {
            break;
        }
        let mid = (lo.clone() + hi.clone()) / two.clone();
        if roots_in(&seq, &lo, &mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let bounds = (one.clone() / hi.clone(), one / lo.clone());
    let approx = (bounds.0.to_f64() + bounds.1.to_f64()) / 2.0;
    GrowthRate {
        root: Some((lo, hi)),
        bounds,
        approx,
    }
}

/// Rate of a series, bracketed to width at most `10⁻¹⁰`.
pub fn growth_rate<T: Scalar>(series: &RationalSeries<T>) -> GrowthRate<T> {
    growth_rate_of(series.den(), 10_000_000_000)
}

/// Perron–Frobenius estimate: the largest spectral radius over strongly
/// connected components that are reachable from the initial state and can
/// reach a state of nonzero weight, floored at one.
///
/// Each component `B` is iterated as `B + I`, which is primitive, and the
/// Collatz–Wielandt bounds are squeezed together.
pub fn spectral_rate<T: Scalar>(mats: &TransitionMatrices<T>, weights: &[T], weighted: bool) -> f64 {
    let n = mats.len();
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if mats.counts()[i][j] > 0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut forward = vec![false; n];
    let mut dfs = Dfs::new(&g, nodes[mats.start()]);
    while let Some(v) = dfs.next(&g) {
        forward[v.index()] = true;
    }
    let mut backward = vec![false; n];
    let rev = Reversed(&g);
    for (j, w) in weights.iter().enumerate() {
        if w.is_zero() || backward[j] {
            continue;
        }
        let mut dfs = Dfs::new(rev, nodes[j]);
        while let Some(v) = dfs.next(rev) {
            backward[v.index()] = true;
        }
    }
    let mut best = 1.0f64;
    for comp in tarjan_scc(&g) {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        if !idx.iter().all(|&i| forward[i] && backward[i]) {
            continue;
        }
        let b: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| mats.entry(i, j, weighted).to_f64()).collect())
            .collect();
        if b.iter().flatten().all(|&x| x == 0.0) {
            continue;
        }
        best = best.max(perron_root(&b));
    }
    best
}

/// Spectral radius of an irreducible nonnegative matrix.
fn perron_root(b: &[Vec<f64>]) -> f64 {
    let n = b.len();
    let mut y = vec![1.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..200_000 {
        let z: Vec<f64> = (0..n).map(|j| y[j] + (0..n).map(|i| y[i] * b[i][j]).sum::<f64>()).collect();
        let ratios = z.iter().zip(&y).map(|(a, b)| a / b);
        lo = ratios.clone().fold(f64::INFINITY, f64::min);
        hi = ratios.fold(0.0, f64::max);
        let norm = z.iter().cloned().fold(0.0, f64::max);
        y = z.into_iter().map(|v| v / norm).collect();
        if hi - lo < 1e-13 * hi {
            break;
        }
    }
    (lo + hi) / 2.0 - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Polynomial<Rational>;

    #[test]
    fn tree_rate() {
        let r = growth_rate_of(&P::from_ints(&[1, -3]), 10_000_000_000);
        let (lo, hi) = r.root.clone().unwrap();
        assert!(lo < Rational::from_ratio(1, 3) && Rational::from_ratio(1, 3) <= hi);
        assert!((r.approx - 3.0).abs() < 1e-9);
        assert!((r.bounds.1.to_f64() - r.bounds.0.to_f64()) <= 1e-9);
    }

    #[test]
    fn polynomial_growth() {
        let r = growth_rate_of(&P::from_ints(&[1, -3, 3, -1]), 1_000_000);
        assert_eq!(r.approx, 1.0);
        let r = growth_rate_of(&P::from_ints(&[1, 1]), 1_000_000);
        assert!(r.root.is_none());
        let r = growth_rate_of(&P::one(), 1_000_000);
        assert_eq!(r.approx, 1.0);
    }

    #[test]
    fn smallest_of_several_roots() {
        // (1 − 2t)(1 − 5t) and a double root at 1/2.
        let p = &P::from_ints(&[1, -7, 10]) * &P::from_ints(&[1, -2]);
        let r = growth_rate_of(&p, 1_000_000_000_000);
        assert!((r.approx - 5.0).abs() < 1e-9);
    }

    #[test]
    fn golden_ratio() {
        let r = growth_rate_of(&P::from_ints(&[1, -1, -1]), 10_000_000_000);
        assert!((r.approx - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn perron_of_small_matrices() {
        assert!((perron_root(&[vec![3.0]]) - 3.0).abs() < 1e-9);
        let p = perron_root(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert!((p - 1.618_033_988_749_895).abs() < 1e-9);
        assert!((perron_root(&[vec![0.0, 1.0], vec![1.0, 0.0]]) - 1.0).abs() < 1e-9);
    }
}
