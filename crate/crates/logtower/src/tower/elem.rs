use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::poly::TowerPoly;
use crate::error::AlgebraError;

/// How two germs relate in size at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// The left germ is negligible against the right one.
    Less,
    /// The left germ dominates the right one.
    Greater,
    /// Both germs have the same order of growth.
    SameOrder,
}

/// Result of an asymptotic comparison: growth relation, asymptotic
/// equivalence (ratio tending to 1), and the eventual signs of both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub relation: Relation,
    pub asymptotic_equiv: bool,
    pub sign_left: i8,
    pub sign_right: i8,
}

/// An exact germ: a quotient of two tower polynomials.
///
/// Invariants maintained by every constructor:
/// * the denominator is nonzero and its leading coefficient is 1,
/// * the shared monomial factor of numerator and denominator is divided out,
/// * zero is stored as 0/1.
///
/// Equality is semantic (cross-multiplication), so fractions that differ by
/// a common polynomial factor still compare equal.
#[derive(Clone)]
pub struct TowerElem {
    num: TowerPoly,
    den: TowerPoly,
}

impl TowerElem {
    fn canonical(mut num: TowerPoly, mut den: TowerPoly) -> TowerElem {
        assert!(!den.is_zero(), "denominator must be nonzero");
        if num.is_zero() {
            return TowerElem {
                num: TowerPoly::zero(),
                den: TowerPoly::one(),
            };
        }
        let mut gcd: Option<Vec<BigRational>> = None;
        num.monomial_gcd_with(&mut gcd);
        den.monomial_gcd_with(&mut gcd);
        if let Some(g) = gcd {
            let g = Monomial::from_exponents(g);
            if !g.is_one() {
                let inv = g.inv();
                num = num.mul_monomial(&inv);
                den = den.mul_monomial(&inv);
            }
        }
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        TowerElem { num, den }
    }

    pub fn new(num: TowerPoly, den: TowerPoly) -> Result<TowerElem, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(TowerElem::canonical(num, den))
    }

    pub fn from_poly(p: TowerPoly) -> TowerElem {
        TowerElem::canonical(p, TowerPoly::one())
    }

    pub fn zero() -> TowerElem {
        TowerElem {
            num: TowerPoly::zero(),
            den: TowerPoly::one(),
        }
    }

    pub fn one() -> TowerElem {
        TowerElem::from_poly(TowerPoly::one())
    }

    pub fn constant(c: BigRational) -> TowerElem {
        TowerElem::from_poly(TowerPoly::constant(c))
    }

    pub fn from_int(n: i64) -> TowerElem {
        TowerElem::constant(BigRational::from_integer(n.into()))
    }

    /// The tower generator at `level` (`x` when `level == 0`).
    pub fn tower(level: usize) -> TowerElem {
        TowerElem::from_poly(TowerPoly::tower(level))
    }

    /// The base variable `x`.
    pub fn x() -> TowerElem {
        TowerElem::tower(0)
    }

    pub fn numerator(&self) -> &TowerPoly {
        &self.num
    }

    pub fn denominator(&self) -> &TowerPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Largest tower index occurring in the stored representation.
    pub fn depth(&self) -> usize {
        self.num.depth().max(self.den.depth())
    }

    pub fn add(&self, other: &TowerElem) -> TowerElem {
        if self.den == other.den {
            return TowerElem::canonical(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        TowerElem::canonical(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &TowerElem) -> TowerElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TowerElem {
        TowerElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &TowerElem) -> TowerElem {
        TowerElem::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &TowerElem) -> Result<TowerElem, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(TowerElem::canonical(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn recip(&self) -> Result<TowerElem, AlgebraError> {
        TowerElem::one().div(self)
    }

    pub fn scale(&self, c: &BigRational) -> TowerElem {
        TowerElem::canonical(self.num.scale(c), self.den.clone())
    }

    /// Integer power by repeated multiplication; negative exponents invert.
    pub fn pow_int(&self, n: i64) -> Result<TowerElem, AlgebraError> {
        if n < 0 {
            return self.recip()?.pow_int(-n);
        }
        let mut acc = TowerElem::one();
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Exact rational power.
    ///
    /// Integer exponents work on any germ. Fractional exponents require a
    /// single-term fraction with a positive coefficient whose root is again
    /// rational; anything else leaves the field and is rejected.
    pub fn pow(&self, q: &BigRational) -> Result<TowerElem, AlgebraError> {
        if q.is_integer() {
            let n = q
                .to_integer()
                .to_i64()
                .ok_or(AlgebraError::NonMonomialPower)?;
            return self.pow_int(n);
        }
        let (mono, coeff) = self
            .as_single_term()
            .ok_or(AlgebraError::NonMonomialPower)?;
        let c = rational_pow(&coeff, q).ok_or(AlgebraError::IrrationalCoefficientPower)?;
        Ok(TowerElem::from_poly(TowerPoly::monomial(mono.pow(q), c)))
    }

    /// Returns `(monomial, coefficient)` when the germ is a single term.
    pub fn as_single_term(&self) -> Option<(Monomial, BigRational)> {
        if self.num.num_terms() != 1 || self.den.num_terms() != 1 {
            return None;
        }
        let (mn, cn) = self.num.leading().unwrap();
        let (md, cd) = self.den.leading().unwrap();
        Some((mn.div(md), cn / cd))
    }

    /// Derivative via the quotient rule.
    pub fn derivative(&self) -> TowerElem {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        TowerElem::canonical(num, self.den.mul(&self.den))
    }

    /// Logarithmic derivative `f'/f`; requires `f != 0`.
    pub fn log_derivative(&self) -> Result<TowerElem, AlgebraError> {
        self.derivative().div(self)
    }

    /// Composition with `log`: every tower level moves up by one.
    pub fn shift_up(&self) -> TowerElem {
        TowerElem {
            num: self.num.shift_up(),
            den: self.den.shift_up(),
        }
    }

    /// Composition with `exp`: every tower level moves down by one.
    ///
    /// Defined only when no stored monomial involves the base variable;
    /// otherwise the image would leave the tower field.
    pub fn shift_down(&self) -> Result<TowerElem, AlgebraError> {
        if !self.num.is_shiftable_down() || !self.den.is_shiftable_down() {
            return Err(AlgebraError::NotShiftable);
        }
        Ok(TowerElem::canonical(
            self.num.shift_down(),
            self.den.shift_down(),
        ))
    }

    /// Exact logarithm, defined for pure monomials with coefficient 1:
    /// the log of a power product is the matching combination of the
    /// next tower levels.
    pub fn log(&self) -> Result<TowerElem, AlgebraError> {
        let (mono, coeff) = self.as_single_term().ok_or(AlgebraError::NonMonomialLog)?;
        if !coeff.is_one() {
            return Err(AlgebraError::NonMonomialLog);
        }
        let mut out = TowerPoly::zero();
        for (k, e) in mono.exponents().iter().enumerate() {
            if !e.is_zero() {
                out.add_term(Monomial::tower(k + 1), e.clone());
            }
        }
        Ok(TowerElem::from_poly(out))
    }

    /// Leading monomial of the germ (numerator lead over denominator lead).
    pub fn leading_monomial(&self) -> Option<Monomial> {
        let (mn, _) = self.num.leading()?;
        let (md, _) = self.den.leading().unwrap();
        Some(mn.div(md))
    }

    /// Leading coefficient; the denominator is monic, so this is the
    /// numerator's leading coefficient.
    pub fn leading_coefficient(&self) -> Option<BigRational> {
        let (_, cn) = self.num.leading()?;
        let (_, cd) = self.den.leading().unwrap();
        Some(cn / cd)
    }

    /// Sign the germ eventually takes: -1, 0, or +1.
    pub fn sign_at_infinity(&self) -> i8 {
        match self.leading_coefficient() {
            None => 0,
            Some(c) => {
                if c.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Asymptotic comparison decided on leading monomials.
    pub fn compare(&self, other: &TowerElem) -> Comparison {
        let sign_left = self.sign_at_infinity();
        let sign_right = other.sign_at_infinity();
        let relation = match (self.leading_monomial(), other.leading_monomial()) {
            (None, None) => Relation::SameOrder,
            (None, Some(_)) => Relation::Less,
            (Some(_), None) => Relation::Greater,
            (Some(a), Some(b)) => match a.cmp(&b) {
                std::cmp::Ordering::Less => Relation::Less,
                std::cmp::Ordering::Greater => Relation::Greater,
                std::cmp::Ordering::Equal => Relation::SameOrder,
            },
        };
        let asymptotic_equiv = relation == Relation::SameOrder
            && !self.is_zero()
            && self.leading_coefficient() == other.leading_coefficient();
        Comparison {
            relation,
            asymptotic_equiv,
            sign_left,
            sign_right,
        }
    }
}

/// `c^q` when it is rational, `None` otherwise.
fn rational_pow(c: &BigRational, q: &BigRational) -> Option<BigRational> {
    if !c.is_positive() {
        return None;
    }
    let root = q.denom().to_u32()?;
    let base = BigRational::new(
        exact_nth_root(c.numer(), root)?,
        exact_nth_root(c.denom(), root)?,
    );
    let p = q.numer().to_i64()?;
    let abs = base.pow(p.unsigned_abs() as i32);
    Some(if p < 0 { abs.recip() } else { abs })
}

fn exact_nth_root(n: &BigInt, root: u32) -> Option<BigInt> {
    let r = n.nth_root(root);
    if r.pow(root) == *n {
        Some(r)
    } else {
        None
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for TowerElem {}

impl Add for &TowerElem {
    type Output = TowerElem;
    fn add(self, rhs: Self) -> TowerElem {
        TowerElem::add(self, rhs)
    }
}

impl Sub for &TowerElem {
    type Output = TowerElem;
    fn sub(self, rhs: Self) -> TowerElem {
        TowerElem::sub(self, rhs)
    }
}

impl Mul for &TowerElem {
    type Output = TowerElem;
    fn mul(self, rhs: Self) -> TowerElem {
        TowerElem::mul(self, rhs)
    }
}

impl Neg for &TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        TowerElem::neg(self)
    }
}

fn needs_parens_as_denominator(p: &TowerPoly) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (m, c) = p.leading().unwrap();
    // A lone symbol with an optional exponent binds tighter than '/';
    // anything with a coefficient or several factors does not.
    !c.is_one() || m.exponents().iter().filter(|e| !e.is_zero()).count() > 1
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_zero() {
            unreachable!("canonical form has nonzero denominator");
        }
        if self.den == TowerPoly::one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens_as_denominator(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElem({})", self)
    }
}
