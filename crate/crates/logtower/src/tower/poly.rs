use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;

/// A finite ℚ-linear combination of tower monomials, stored sparsely.
///
/// No zero coefficient is ever stored. The leading term is the one with
/// the lexicographically greatest exponent vector; it determines the
/// asymptotic behavior of the germ.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TowerPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl TowerPoly {
    pub fn zero() -> Self {
        TowerPoly::default()
    }

    pub fn one() -> Self {
        TowerPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = TowerPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = TowerPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn tower(level: usize) -> Self {
        TowerPoly::monomial(Monomial::tower(level), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Term with the lexicographically greatest monomial.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn depth(&self) -> usize {
        self.terms.keys().map(|m| m.depth()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TowerPoly) -> TowerPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> TowerPoly {
        TowerPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &TowerPoly) -> TowerPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TowerPoly) -> TowerPoly {
        let mut out = TowerPoly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> TowerPoly {
        if c.is_zero() {
            return TowerPoly::zero();
        }
        TowerPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> TowerPoly {
        TowerPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Derivative with respect to the underlying variable.
    ///
    /// A monomial maps to a sum of monomials: each tower factor at level k
    /// contributes its exponent times the reciprocal of `l0*...*lk`.
    pub fn derivative(&self) -> TowerPoly {
        let mut out = TowerPoly::zero();
        for (m, c) in self.terms() {
            for (k, e) in m.exponents().iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                out.add_term(m.mul(&Monomial::gamma(k)), c * e);
            }
        }
        out
    }

    pub fn shift_up(&self) -> TowerPoly {
        TowerPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.shift_up(), c.clone()))
                .collect(),
        }
    }

    /// True when no monomial involves the level-0 generator.
    pub fn is_shiftable_down(&self) -> bool {
        self.terms.keys().all(|m| m.exponent(0).is_zero())
    }

    pub fn shift_down(&self) -> TowerPoly {
        debug_assert!(self.is_shiftable_down());
        TowerPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.shift_down(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum of all exponent vectors, used to strip a
    /// shared monomial factor from a fraction.
    pub fn monomial_gcd_with(&self, acc: &mut Option<Vec<BigRational>>) {
        for m in self.terms.keys() {
            match acc {
                None => *acc = Some(m.exponents().to_vec()),
                Some(g) => {
                    let n = g.len().max(m.exponents().len());
                    g.resize(n, BigRational::zero());
                    for (k, gk) in g.iter_mut().enumerate() {
                        let e = m.exponent(k);
                        if e < *gk {
                            *gk = e;
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for TowerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Leading term first.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sep, coeff) = if i == 0 {
                ("", c.clone())
            } else if c.is_negative() {
                (" - ", -c)
            } else {
                (" + ", c.clone())
            };
            write!(f, "{}", sep)?;
            if m.is_one() {
                write!(f, "{}", coeff)?;
            } else if coeff.is_one() {
                write!(f, "{}", m)?;
            } else if (-&coeff).is_one() {
                write!(f, "-{}", m)?;
            } else {
                write!(f, "{}*{}", coeff, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TowerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_cancels_to_zero() {
        let p = TowerPoly::tower(0);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative_of_towers() {
        // x' = 1
        assert_eq!(TowerPoly::tower(0).derivative(), TowerPoly::one());
        // (log x)' = 1/x
        let expected = TowerPoly::monomial(Monomial::tower(0).inv(), q(1, 1));
        assert_eq!(TowerPoly::tower(1).derivative(), expected);
        // constants die
        assert!(TowerPoly::constant(q(7, 2)).derivative().is_zero());
    }

    #[test]
    fn leading_term_is_lex_max() {
        let mut p = TowerPoly::tower(1);
        p.add_term(Monomial::tower(0), q(3, 1));
        let (m, c) = p.leading().unwrap();
        assert_eq!(*m, Monomial::tower(0));
        assert_eq!(*c, q(3, 1));
    }

    #[test]
    fn display_orders_terms() {
        let mut p = TowerPoly::constant(q(1, 1));
        p.add_term(Monomial::tower(1).pow(&q(2, 1)), q(1, 1));
        assert_eq!(p.to_string(), "l1^2 + 1");
        let mut m = TowerPoly::constant(q(-1, 2));
        m.add_term(Monomial::tower(0), q(-1, 1));
        assert_eq!(m.to_string(), "-x - 1/2");
    }
}
