use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// A power product of iterated logarithms with exact rational exponents.
///
/// `exps[k]` is the exponent of the k-th tower level: level 0 is `x`,
/// level 1 is `log x`, level 2 is `log log x`, and so on. Trailing zero
/// exponents are trimmed, so two monomials are equal iff their exponent
/// vectors are equal.
///
/// Monomials are totally ordered by growth at infinity. Since each tower
/// level grows slower than any positive power of the previous one, the
/// order is lexicographic on exponent vectors: the level-0 exponent
/// decides first, then level 1, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<BigRational>,
}

impl Monomial {
    /// The empty product (the constant germ 1).
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// The tower generator at `level`: `x` for level 0, `l1 = log x` for level 1, ...
    pub fn tower(level: usize) -> Self {
        let mut exps = vec![BigRational::zero(); level + 1];
        exps[level] = BigRational::one();
        Monomial { exps }
    }

    /// Builds a monomial from an exponent vector, trimming trailing zeros.
    pub fn from_exponents(mut exps: Vec<BigRational>) -> Self {
        while exps.last().is_some_and(|e| e.is_zero()) {
            exps.pop();
        }
        Monomial { exps }
    }

    /// The reciprocal of `l0 * l1 * ... * l_level`.
    pub fn gamma(level: usize) -> Self {
        Monomial {
            exps: vec![-BigRational::one(); level + 1],
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Largest tower index with a nonzero exponent (0 for the constant monomial).
    pub fn depth(&self) -> usize {
        self.exps.len().saturating_sub(1)
    }

    /// Exponent at `level` (zero beyond the stored vector).
    pub fn exponent(&self, level: usize) -> BigRational {
        self.exps
            .get(level)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn exponents(&self) -> &[BigRational] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let mut exps = Vec::with_capacity(n);
        for k in 0..n {
            exps.push(self.exponent(k) + other.exponent(k));
        }
        Monomial::from_exponents(exps)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    /// Scales every exponent by `q`.
    pub fn pow(&self, q: &BigRational) -> Monomial {
        Monomial::from_exponents(self.exps.iter().map(|e| e * q).collect())
    }

    /// Inserts a zero exponent at level 0, moving every level up by one.
    pub fn shift_up(&self) -> Monomial {
        if self.exps.is_empty() {
            return self.clone();
        }
        let mut exps = Vec::with_capacity(self.exps.len() + 1);
        exps.push(BigRational::zero());
        exps.extend(self.exps.iter().cloned());
        Monomial { exps }
    }

    /// Drops the level-0 exponent; caller must ensure it is zero.
    pub fn shift_down(&self) -> Monomial {
        debug_assert!(self.exponent(0).is_zero());
        if self.exps.is_empty() {
            return self.clone();
        }
        Monomial::from_exponents(self.exps[1..].to_vec())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.exps.len().max(other.exps.len());
        for k in 0..n {
            let a = self.exps.get(k);
            let b = other.exps.get(k);
            let ord = match (a, b) {
                (Some(a), Some(b)) => a.cmp(b),
                // Missing coordinates compare as zero.
                (Some(a), None) => a.cmp(&BigRational::zero()),
                (None, Some(b)) => BigRational::zero().cmp(b),
                (None, None) => Ordering::Equal,
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

fn write_exponent(f: &mut fmt::Formatter<'_>, e: &BigRational) -> fmt::Result {
    if e.is_one() {
        Ok(())
    } else if e.is_integer() {
        write!(f, "^{}", e)
    } else {
        // Fractional exponents are parenthesized so that the rendering
        // re-parses as a single exponent rather than a division.
        write!(f, "^({})", e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, e) in self.exps.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 0 {
                write!(f, "x")?;
            } else {
                write!(f, "l{}", k)?;
            }
            write_exponent(f, e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let m = Monomial::from_exponents(vec![q(2, 1), q(0, 1), q(0, 1)]);
        assert_eq!(m.exponents().len(), 1);
        assert_eq!(m, Monomial::from_exponents(vec![q(2, 1)]));
    }

    #[test]
    fn lex_order_on_tower_levels() {
        // x dominates any power of log x.
        assert!(Monomial::tower(0) > Monomial::tower(1).pow(&q(100, 1)));
        // gamma_1^2 grows slower than gamma_0^2.
        let g0sq = Monomial::gamma(0).pow(&q(2, 1));
        let g1sq = Monomial::gamma(1).pow(&q(2, 1));
        assert!(g1sq < g0sq);
        // A shorter all(-2) vector beats a longer one.
        assert!(
            Monomial::from_exponents(vec![q(-2, 1)])
                > Monomial::from_exponents(vec![q(-2, 1), q(-2, 1)])
        );
    }

    #[test]
    fn mul_adds_exponents() {
        // gamma_1 * l1 = 1/x
        let m = Monomial::gamma(1).mul(&Monomial::tower(1));
        assert_eq!(m, Monomial::tower(0).inv());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(Monomial::tower(0).to_string(), "x");
        assert_eq!(Monomial::tower(2).to_string(), "l2");
        assert_eq!(Monomial::gamma(1).to_string(), "x^-1*l1^-1");
        assert_eq!(Monomial::tower(0).pow(&q(1, 2)).to_string(), "x^(1/2)");
    }
}
