//! Rational generating functions recovered from their coefficients.

use std::fmt;
use std::str::FromStr;

use crate::error::SeriesError;
use crate::scalar::Scalar;

use super::poly::Polynomial;

/// `num / den` in lowest terms with `den(0) = 1`, plus the coefficients
/// that were checked against an oracle (empty when unchecked).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSeries<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
    prefix: Vec<T>,
}

impl<T: Scalar> RationalSeries<T> {
    /// Reduces `num / den`; fails when `den(0) = 0`.
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self, SeriesError> {
        if den.coeff(0).is_zero() {
            return Err(SeriesError::SingularDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let c0 = den.coeff(0);
        let inv = T::one() / c0;
        Ok(RationalSeries {
            num: num.scale(&inv),
            den: den.scale(&inv),
            prefix: Vec::new(),
        })
    }

    pub fn polynomial(p: Polynomial<T>) -> Self {
        RationalSeries {
            num: p,
            den: Polynomial::one(),
            prefix: Vec::new(),
        }
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn with_prefix(mut self, prefix: Vec<T>) -> Self {
        self.prefix = prefix;
        self
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// The first `n` Taylor coefficients.
    pub fn expand(&self, n: usize) -> Vec<T> {
        let q = self.den.coeffs();
        let mut out: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = self.num.coeff(k);
            for (i, qi) in q.iter().enumerate().skip(1).take(k) {
                s = s - qi.clone() * out[k - i].clone();
            }
            out.push(s);
        }
        out
    }

    /// `self / (1 − t)`; the prefix becomes partial sums.
    pub fn over_one_minus_t(&self) -> Self {
        let mut acc = T::zero();
        let prefix = self
            .prefix
            .iter()
            .map(|c| {
                acc = acc.clone() + c.clone();
                acc.clone()
            })
            .collect();
        RationalSeries::new(self.num.clone(), &self.den * &Polynomial::one_minus_t())
            .expect("den(0) stays 1")
            .with_prefix(prefix)
    }

    /// `self · (1 − t)`; the prefix becomes first differences.
    pub fn times_one_minus_t(&self) -> Self {
        let prefix = (0..self.prefix.len())
            .map(|i| match i {
                0 => self.prefix[0].clone(),
                _ => self.prefix[i].clone() - self.prefix[i - 1].clone(),
            })
            .collect();
        RationalSeries::new(&self.num * &Polynomial::one_minus_t(), self.den.clone())
            .expect("den(0) stays 1")
            .with_prefix(prefix)
    }

    /// Equality as rational functions, ignoring prefixes.
    pub fn same_function(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Whether `q · self` is a polynomial.
    pub fn cleared_by(&self, q: &Polynomial<T>) -> bool {
        !q.is_zero() && (q * &self.num).div_rem(&self.den).1.is_zero()
    }
}

impl<T: Scalar> fmt::Display for RationalSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "num={} den={} prefix=[", self.num, self.den)?;
        for (i, c) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar + FromStr> FromStr for RationalSeries<T> {
    type Err = String;

    /// Parses the `num=[..] den=[..] prefix=[..]` form.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = [None, None, None];
        for tok in s.split_whitespace() {
            let (key, list) = tok.split_once('=').ok_or_else(|| format!("expected key=[..], got {tok:?}"))?;
            let slot = match key {
                "num" => 0,
                "den" => 1,
                "prefix" => 2,
                _ => return Err(format!("unknown key {key:?}")),
            };
            let body = list
                .strip_prefix('[')
                .and_then(|l| l.strip_suffix(']'))
                .ok_or_else(|| format!("malformed list {list:?}"))?;
            let values = body
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<T>().map_err(|_| format!("bad coefficient {t:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            parts[slot] = Some(values);
        }
        let [Some(num), Some(den), prefix] = parts else {
            return Err("num and den are required".into());
        };
        let series = RationalSeries::new(Polynomial::new(num), Polynomial::new(den)).map_err(|e| e.to_string())?;
        Ok(series.with_prefix(prefix.unwrap_or_default()))
    }
}

/// Connection polynomial `C` (with `C(0) = 1`) and length `L` of the
/// shortest linear recurrence generating `s`.
pub fn berlekamp_massey<T: Scalar>(s: &[T]) -> (Polynomial<T>, usize) {
    let mut c = vec![T::one()];
    let mut b = vec![T::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = T::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d = d + c[i].clone() * s[n - i].clone();
        }
        if d.approx_eq(&T::zero()) {
            m += 1;
            continue;
        }
        let coef = d.clone() / last.clone();
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, T::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = c[i + m].clone() - coef.clone() * bi.clone();
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    (Polynomial::new(c), l)
}

/// Fits the minimal recurrence to `terms` and returns the reduced rational
/// function. At least `2·max_order + 2` terms are required, and the result
/// is re-expanded against all of them.
pub fn series_from_sequence<T: Scalar>(terms: &[T], max_order: usize) -> Result<RationalSeries<T>, SeriesError> {
    let needed = 2 * max_order + 2;
    if terms.len() < needed {
        return Err(SeriesError::InsufficientTerms {
            needed,
            got: terms.len(),
        });
    }
    let (c, l) = berlekamp_massey(terms);
    if l > max_order {
        return Err(SeriesError::NoRecurrence {
            max_order,
            found: l,
        });
    }
    let s = Polynomial::new(terms[..l].to_vec());
    let num = (&s * &c).truncate(l);
    let series = RationalSeries::new(num, c)?;
    for (i, (got, want)) in series.expand(terms.len()).iter().zip(terms).enumerate() {
        if !got.approx_eq(want) {
            return Err(SeriesError::PrefixMismatch {
                index: i,
                computed: got.to_string(),
                oracle: want.to_string(),
            });
        }
    }
    Ok(series)
}

/// Least common multiple of the denominators, normalized to constant term
/// one, and whether it clears every series to a polynomial.
pub fn common_denominator<T: Scalar>(series: &[&RationalSeries<T>]) -> (Polynomial<T>, bool) {
    let q = series
        .iter()
        .fold(Polynomial::one(), |acc, s| acc.lcm(s.den()))
        .unit_constant()
        .expect("denominators have nonzero constant term");
    let ok = series.iter().all(|s| s.cleared_by(&q));
    (q, ok)
}
