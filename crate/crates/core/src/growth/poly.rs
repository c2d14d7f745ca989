//! Dense univariate polynomials over a field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    c: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Polynomial { c }
    }

    pub fn zero() -> Self {
        Polynomial { c: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { c: vec![T::one()] }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| T::from_ratio(x, 1)).collect())
    }

    /// `coef · tᵈ`.
    pub fn monomial(coef: T, d: usize) -> Self {
        let mut c = vec![T::zero(); d];
        c.push(coef);
        Self::new(c)
    }

    /// `1 − t`.
    pub fn one_minus_t() -> Self {
        Self::from_ints(&[1, -1])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> T {
        self.c.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.c.last()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.c.iter().map(|x| x.clone() * k.clone()).collect())
    }

    pub fn eval(&self, t: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, x| acc * t.clone() + x.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x.clone() * T::from_ratio(i as i64, 1))
                .collect(),
        )
    }

    /// The polynomial truncated to degrees below `n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.c.iter().take(n).cloned().collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let k = r[i + dd].clone() / lead.clone();
            if k.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] = r[i + j].clone() - k.clone() * dj.clone();
            }
            q[i] = k;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Leading coefficient scaled to one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * other).div_rem(&g).0
    }

    /// Scales so that the constant term is one; requires `p(0) ≠ 0`.
    pub fn unit_constant(&self) -> Option<Self> {
        let c0 = self.c.first()?;
        if c0.is_zero() {
            return None;
        }
        Some(self.scale(&(T::one() / c0.clone())))
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, o: &Polynomial<T>) -> Polynomial<T> {
        let n = self.c.len().max(o.c.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, o: &Polynomial<T>) -> Polynomial<T> {
        let n = self.c.len().max(o.c.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.c.iter().map(|x| -x.clone()).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, o: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(c)
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    /// `[c0,c1,…]`; the zero polynomial prints as `[0]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "[0]");
        }
        write!(f, "[")?;
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Zero for Polynomial<T> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl<T: Scalar> Add for Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<T: Scalar> Mul for Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<T: Scalar> One for Polynomial<T> {
    fn one() -> Self {
        Polynomial::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    type P = Polynomial<Rational>;

    #[test]
    fn arithmetic() {
        let a = P::from_ints(&[1, 1]);
        let b = P::from_ints(&[1, -1]);
        assert_eq!(&a * &b, P::from_ints(&[1, 0, -1]));
        assert_eq!((&a * &b).div_rem(&a), (b.clone(), P::zero()));
        assert_eq!(P::from_ints(&[1, 0, -1]).gcd(&P::from_ints(&[-1, 1])), P::from_ints(&[-1, 1]));
        assert_eq!(
            P::from_ints(&[1, -1]).lcm(&P::from_ints(&[1, -2, 1])).unit_constant().unwrap(),
            P::from_ints(&[1, -2, 1])
        );
        assert_eq!(P::from_ints(&[3, 2, 1]).derivative(), P::from_ints(&[2, 2]));
        assert_eq!(P::from_ints(&[1, -3]).eval(&Rational::from_ratio(1, 3)), Rational::zero());
        assert_eq!(format!("{}", P::from_ints(&[1, -3])), "[1,-3]");
    }

    #[test]
    fn float_coefficients() {
        let a = Polynomial::<f64>::from_ints(&[2, 0, 1]);
        assert_eq!(a.eval(&2.0), 6.0);
    }

    proptest! {
        #[test]
        fn division_identity(a in proptest::collection::vec(-9i64..10, 0..6),
                             b in proptest::collection::vec(-9i64..10, 1..5)) {
            let (a, b) = (P::from_ints(&a), P::from_ints(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_both(a in proptest::collection::vec(-5i64..6, 1..5),
                            b in proptest::collection::vec(-5i64..6, 1..5),
                            c in proptest::collection::vec(-5i64..6, 1..4)) {
            let (a, b, c) = (P::from_ints(&a), P::from_ints(&b), P::from_ints(&c));
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let (ac, bc) = (&a * &c, &b * &c);
            let g = ac.gcd(&bc);
            prop_assert!(ac.div_rem(&g).1.is_zero());
            prop_assert!(bc.div_rem(&g).1.is_zero());
            prop_assert!(g.div_rem(&c.monic()).1.is_zero());
        }
    }
}
