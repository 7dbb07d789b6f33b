//! Differential polynomials over the tower field.
//!
//! A `DiffPoly` is a polynomial in `Y, Y', ..., Y^(r)` with tower-germ
//! coefficients. Its logarithmic decomposition rewrites it in the iterated
//! logarithmic derivatives `Y<0>, Y<1>, ...` where `Y<0> = Y` and
//! `Y<k+1> = (Y<k>)'/Y<k>`, using the rewriting `(Y<k>)' = Y<k>*Y<k+1>`.
//! The decomposition drives the dominant-sign analysis for rapidly growing
//! arguments: the lexicographically maximal index dominates.
//!
//! Multiplicative conjugation substitutes `g*Y` for `Y`; compositional
//! conjugation re-expresses the derivation as a multiple of a new one.
//! Combining the two gives the gauge reduction that turns a general
//! `4Y'' + fY` into the same shape over the shifted tower.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::tower::TowerElem;

/// Hard cap on the derivative order; every equation in scope has order <= 3.
pub const MAX_ORDER: usize = 8;

/// Exponent vector over `(Y, Y', ..., Y^(r))` or `(Y<0>, ..., Y<r>)`,
/// with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        MultiIndex(exps)
    }

    /// The index of the single variable at position `m`.
    pub fn unit(m: usize) -> Self {
        let mut exps = vec![0; m + 1];
        exps[m] = 1;
        MultiIndex(exps)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// Largest variable position used plus one (0 for the empty index).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let n = self.0.len().max(other.0.len());
        MultiIndex::new((0..n).map(|k| self.get(k) + other.get(k)).collect())
    }

    /// Moves one factor from position `k` to position `k + 1`.
    fn shift_one_factor(&self, k: usize) -> MultiIndex {
        debug_assert!(self.get(k) > 0);
        let n = self.0.len().max(k + 2);
        let mut exps: Vec<u32> = (0..n).map(|i| self.get(i)).collect();
        exps[k] -= 1;
        exps[k + 1] += 1;
        MultiIndex::new(exps)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for k in 0..n {
            match self.get(k).cmp(&other.get(k)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn render_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<MultiIndex, TowerElem>,
    var: impl Fn(usize) -> String,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (pos, (idx, coeff)) in terms.iter().rev().enumerate() {
        let (sep, coeff) = if pos == 0 {
            ("", coeff.clone())
        } else if coeff.sign_at_infinity() < 0 {
            (" - ", coeff.neg())
        } else {
            (" + ", coeff.clone())
        };
        write!(f, "{}", sep)?;
        let vars: Vec<String> = idx
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(k, e)| {
                if *e == 1 {
                    var(k)
                } else {
                    format!("{}^{}", var(k), e)
                }
            })
            .collect();
        if vars.is_empty() {
            write!(f, "{}", coeff)?;
            continue;
        }
        if coeff.is_one() {
            write!(f, "{}", vars.join("*"))?;
        } else if coeff.neg().is_one() {
            write!(f, "-{}", vars.join("*"))?;
        } else {
            let c = coeff.to_string();
            if c.contains(' ') || c.contains('/') || c.contains('*') {
                write!(f, "({})*{}", c, vars.join("*"))?;
            } else {
                write!(f, "{}*{}", c, vars.join("*"))?;
            }
        }
    }
    Ok(())
}

/// A differential polynomial in standard form.
#[derive(Clone, PartialEq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<MultiIndex, TowerElem>,
}

/// A differential polynomial in logarithmic form.
#[derive(Clone, PartialEq, Default)]
pub struct LogDecomp {
    terms: BTreeMap<MultiIndex, TowerElem>,
}

/// Dominant term of a logarithmic decomposition and the eventual signs of
/// `P(y)` for large rapidly growing positive and negative arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantSign {
    pub index: MultiIndex,
    pub coefficient: TowerElem,
    pub sign: i8,
    pub sign_negative_arg: i8,
}

fn insert_term(terms: &mut BTreeMap<MultiIndex, TowerElem>, idx: MultiIndex, c: TowerElem) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(idx) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&c);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: TowerElem) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(MultiIndex::empty(), c);
        p
    }

    /// The variable `Y^(m)`.
    pub fn var(m: usize) -> Self {
        assert!(m <= MAX_ORDER, "derivative order capped at {}", MAX_ORDER);
        let mut p = DiffPoly::zero();
        p.add_term(MultiIndex::unit(m), TowerElem::one());
        p
    }

    /// `a*Y'' + f*Y`, the shape of every equation in scope.
    pub fn second_order(a: TowerElem, f: TowerElem) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(MultiIndex::unit(2), a);
        p.add_term(MultiIndex::unit(0), f);
        p
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: TowerElem) {
        insert_term(&mut self.terms, idx, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &TowerElem)> {
        self.terms.iter()
    }

    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|i| i.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (i1, c1) in self.terms() {
            for (i2, c2) in other.terms() {
                out.add_term(i1.add(i2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &TowerElem) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(i, k)| (i.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut out = DiffPoly::constant(TowerElem::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates at a germ, interpreting position `m` as the m-th derivative.
    pub fn eval(&self, y: &TowerElem) -> TowerElem {
        let jets = derivative_jets(y, self.order());
        self.eval_on_jets(&jets)
    }

    /// Evaluates with explicit jet values: `jets[m]` stands for `Y^(m)`.
    pub fn eval_on_jets(&self, jets: &[TowerElem]) -> TowerElem {
        let mut total = TowerElem::zero();
        for (idx, coeff) in self.terms() {
            let mut term = coeff.clone();
            for (m, e) in idx.exponents().iter().enumerate() {
                if *e > 0 {
                    term = term.mul(&jets[m].pow_int(*e as i64).expect("nonnegative power"));
                }
            }
            total = total.add(&term);
        }
        total
    }
}

/// `y, y', y'', ...` up to order `r`.
pub fn derivative_jets(y: &TowerElem, r: usize) -> Vec<TowerElem> {
    let mut jets = Vec::with_capacity(r + 1);
    jets.push(y.clone());
    for _ in 0..r {
        let next = jets.last().unwrap().derivative();
        jets.push(next);
    }
    jets
}

/// Iterated logarithmic derivatives `y<0> = y`, `y<k+1> = (y<k>)'/y<k>`.
///
/// Construction stops at the first zero value: the successor of a zero is
/// undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct IterLogDerivs {
    base: TowerElem,
    values: Vec<TowerElem>,
}

impl IterLogDerivs {
    /// Computes `y<0>, ..., y<n>`; fails if an intermediate value is zero.
    pub fn new(y: &TowerElem, n: usize) -> Result<Self, AlgebraError> {
        let mut values = vec![y.clone()];
        for k in 0..n {
            let last = values.last().unwrap();
            if last.is_zero() {
                return Err(AlgebraError::UndefinedIterLogDeriv { order: k + 1 });
            }
            values.push(last.log_derivative().expect("nonzero"));
        }
        Ok(IterLogDerivs {
            base: y.clone(),
            values,
        })
    }

    pub fn base(&self) -> &TowerElem {
        &self.base
    }

    pub fn values(&self) -> &[TowerElem] {
        &self.values
    }
}

impl LogDecomp {
    pub fn zero() -> Self {
        LogDecomp::default()
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: TowerElem) {
        insert_term(&mut self.terms, idx, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &TowerElem)> {
        self.terms.iter()
    }

    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|i| i.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Lexicographically maximal index with a nonzero coefficient.
    pub fn dominant_index(&self) -> Option<(&MultiIndex, &TowerElem)> {
        self.terms.iter().next_back()
    }

    /// Evaluates on the iterated logarithmic derivatives of `y`.
    pub fn eval(&self, y: &TowerElem) -> Result<TowerElem, AlgebraError> {
        let jets = IterLogDerivs::new(y, self.order())?;
        Ok(self.eval_on_jets(jets.values()))
    }

    /// Evaluates with precomputed iterated logarithmic derivatives.
    pub fn eval_on_jets(&self, jets: &[TowerElem]) -> TowerElem {
        let mut total = TowerElem::zero();
        for (idx, coeff) in self.terms() {
            let mut term = coeff.clone();
            for (k, e) in idx.exponents().iter().enumerate() {
                if *e > 0 {
                    term = term.mul(&jets[k].pow_int(*e as i64).expect("nonnegative power"));
                }
            }
            total = total.add(&term);
        }
        total
    }
}

/// Integer-coefficient polynomial in the logarithmic variables; used for
/// the images of `Y^(m)` during decomposition.
type LogPolyInt = BTreeMap<MultiIndex, BigRational>;

/// Image of `Y^(m)` in the logarithmic variables, via `(Y<k>)' = Y<k>*Y<k+1>`.
fn log_image_of_derivative(m: usize) -> LogPolyInt {
    let mut cur: LogPolyInt = BTreeMap::new();
    cur.insert(MultiIndex::unit(0), BigRational::one());
    for _ in 0..m {
        let mut next: LogPolyInt = BTreeMap::new();
        for (idx, c) in &cur {
            // d(prod Y<k>^{i_k}) = sum_k i_k * (same monomial) * Y<k+1>
            for (k, e) in idx.exponents().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let raised = idx.add(&MultiIndex::unit(k + 1));
                let coeff = c * BigRational::from_integer((*e).into());
                let entry = next.entry(raised).or_insert_with(BigRational::zero);
                *entry += coeff;
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur
}

fn log_poly_mul(a: &LogPolyInt, b: &LogPolyInt) -> LogPolyInt {
    let mut out: LogPolyInt = BTreeMap::new();
    for (i1, c1) in a {
        for (i2, c2) in b {
            let entry = out.entry(i1.add(i2)).or_insert_with(BigRational::zero);
            *entry += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rewrites a differential polynomial in the iterated logarithmic
/// derivatives. Evaluation is preserved wherever both sides are defined.
pub fn to_log_decomposition(p: &DiffPoly) -> LogDecomp {
    let mut out = LogDecomp::zero();
    for (idx, coeff) in p.terms() {
        let mut prod: LogPolyInt = BTreeMap::new();
        prod.insert(MultiIndex::empty(), BigRational::one());
        for (m, e) in idx.exponents().iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let image = log_image_of_derivative(m);
            for _ in 0..*e {
                prod = log_poly_mul(&prod, &image);
            }
        }
        for (log_idx, c) in prod {
            out.add_term(log_idx, coeff.scale(&c));
        }
    }
    out
}

/// Substitutes `g*Y` for `Y`: coefficients expand through the product rule
/// `(gY)^(n) = sum_k C(n,k) g^(n-k) Y^(k)`. Evaluation satisfies
/// `P_{x g}(y) = P(g*y)`.
pub fn mult_conjugate(p: &DiffPoly, g: &TowerElem) -> Result<DiffPoly, AlgebraError> {
    if g.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let r = p.order();
    let g_jets = derivative_jets(g, r);
    // Linear form for each (gY)^(n).
    let mut forms: Vec<DiffPoly> = Vec::with_capacity(r + 1);
    for n in 0..=r {
        let mut form = DiffPoly::zero();
        let mut binom = BigRational::one();
        for k in 0..=n {
            // binom = C(n, k)
            form.add_term(MultiIndex::unit(k), g_jets[n - k].scale(&binom));
            binom = binom * BigRational::from_integer((n - k).into())
                / BigRational::from_integer((k + 1).into());
        }
        forms.push(form);
    }
    Ok(substitute_linear_forms(p, &forms))
}

/// Re-expresses the derivation as `phi * delta` for a new derivation
/// `delta`. In the image, position `m` stands for the m-th delta-derivative,
/// and evaluating on delta-jets reproduces the original value. `der` is the
/// derivation acting on coefficients (the plain derivative for germs in the
/// unconjugated field).
pub fn comp_conjugate_with(
    p: &DiffPoly,
    phi: &TowerElem,
    der: &dyn Fn(&TowerElem) -> TowerElem,
) -> Result<DiffPoly, AlgebraError> {
    if phi.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let r = p.order();
    // Images T_n of Y^(n): T_0 = Y, T_{n+1} = der(T_n) with the variable
    // rule d(Y[k]) = phi * Y[k+1]. Each T_n stays linear in the variables.
    let mut forms: Vec<DiffPoly> = Vec::with_capacity(r + 1);
    forms.push(DiffPoly::var(0));
    for _ in 0..r {
        let prev = forms.last().unwrap();
        let mut next = DiffPoly::zero();
        for (idx, c) in prev.terms() {
            next.add_term(idx.clone(), der(c));
            for (k, e) in idx.exponents().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let coeff = c.mul(phi).scale(&BigRational::from_integer((*e).into()));
                next.add_term(idx.shift_one_factor(k), coeff);
            }
        }
        forms.push(next);
    }
    Ok(substitute_linear_forms(p, &forms))
}

/// Compositional conjugation with plain-derivative coefficients.
pub fn comp_conjugate(p: &DiffPoly, phi: &TowerElem) -> Result<DiffPoly, AlgebraError> {
    comp_conjugate_with(p, phi, &|c| c.derivative())
}

fn substitute_linear_forms(p: &DiffPoly, forms: &[DiffPoly]) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (idx, coeff) in p.terms() {
        let mut term = DiffPoly::constant(coeff.clone());
        for (m, e) in idx.exponents().iter().enumerate() {
            if *e > 0 {
                term = term.mul(&forms[m].pow(*e));
            }
        }
        out = out.add(&term);
    }
    out
}

/// Gauge reduction for `4Y'' + fY`: with `phi = g^{-2}` the combined
/// conjugations satisfy `g^3 * (4Y'' + fY)_{x g}^phi = 4Y'' + qY` where
/// `q = g^3 * (4g'' + f*g)`. Returns `(q, phi)`.
pub fn chvar_reduce(f: &TowerElem, g: &TowerElem) -> Result<(TowerElem, TowerElem), AlgebraError> {
    if g.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let phi = g.pow_int(-2)?;
    let g2 = g.derivative().derivative();
    let p_of_g = g2
        .scale(&BigRational::from_integer(4.into()))
        .add(&f.mul(g));
    let q = g.pow_int(3)?.mul(&p_of_g);
    Ok((q, phi))
}

/// Dominant-sign analysis for large arguments.
///
/// For positive arguments growing fast enough, the sign of `P(y)` is the
/// eventual sign of the coefficient at the lexicographically maximal index;
/// for large negative arguments the parity of the plain-`Y` exponent flips
/// it.
pub fn dominant_sign_at_large_argument(d: &LogDecomp) -> Result<DominantSign, AlgebraError> {
    let (idx, coeff) = d.dominant_index().ok_or(AlgebraError::ZeroPolynomial)?;
    let sign = coeff.sign_at_infinity();
    debug_assert!(sign != 0);
    let sign_negative_arg = if idx.get(0) % 2 == 0 { sign } else { -sign };
    Ok(DominantSign {
        index: idx.clone(),
        coefficient: coeff.clone(),
        sign,
        sign_negative_arg,
    })
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(f, &self.terms, |k| match k {
            0 => "Y".to_string(),
            _ => format!("Y{}", "'".repeat(k)),
        })
    }
}

impl fmt::Display for LogDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(f, &self.terms, |k| format!("Y<{}>", k))
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({})", self)
    }
}

impl fmt::Debug for LogDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogDecomp({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn elem(n: i64) -> TowerElem {
        TowerElem::from_int(n)
    }

    #[test]
    fn log_decomposition_of_second_derivative() {
        // Y'' = Y<0>(Y<1>)^2 + Y<0>Y<1>Y<2>
        let d = to_log_decomposition(&DiffPoly::var(2));
        let mut expected = LogDecomp::zero();
        expected.add_term(MultiIndex::new(vec![1, 2]), TowerElem::one());
        expected.add_term(MultiIndex::new(vec![1, 1, 1]), TowerElem::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn log_decomposition_worked_example() {
        // 2Y^3 + Y'Y'' = 2(Y<0>)^3 + (Y<0>)^2(Y<1>)^3 + (Y<0>)^2(Y<1>)^2 Y<2>
        let mut p = DiffPoly::var(0).pow(3).scale(&elem(2));
        p = p.add(&DiffPoly::var(1).mul(&DiffPoly::var(2)));
        let d = to_log_decomposition(&p);
        let mut expected = LogDecomp::zero();
        expected.add_term(MultiIndex::new(vec![3]), elem(2));
        expected.add_term(MultiIndex::new(vec![2, 3]), TowerElem::one());
        expected.add_term(MultiIndex::new(vec![2, 2, 1]), TowerElem::one());
        assert_eq!(d, expected);
        assert_eq!(
            d.to_string(),
            "2*Y<0>^3 + Y<0>^2*Y<1>^3 + Y<0>^2*Y<1>^2*Y<2>"
        );
    }

    #[test]
    fn trivial_decomposition() {
        let d = to_log_decomposition(&DiffPoly::var(0));
        let mut expected = LogDecomp::zero();
        expected.add_term(MultiIndex::new(vec![1]), TowerElem::one());
        assert_eq!(d, expected);
    }

    #[test]
    fn eval_matches_between_representations() {
        let mut p = DiffPoly::var(0).pow(3).scale(&elem(2));
        p = p.add(&DiffPoly::var(1).mul(&DiffPoly::var(2)));
        let d = to_log_decomposition(&p);
        let y = seq::ell(1).mul(&seq::gamma(0));
        assert_eq!(d.eval(&y).unwrap(), p.eval(&y));
    }

    #[test]
    fn eval_special_cases() {
        // 4Y'' + omega_2 Y vanishes at gamma_2^{-1/2}
        let p = DiffPoly::second_order(elem(4), seq::omega_seq(2));
        let y = seq::gamma(2).pow(&q(-1, 2)).unwrap();
        assert!(p.eval(&y).is_zero());
        // P = Y is the identity
        let any = seq::lambda(2);
        assert_eq!(DiffPoly::var(0).eval(&any), any);
        // P = Y' at l1 is 1/x
        assert_eq!(
            DiffPoly::var(1).eval(&TowerElem::tower(1)),
            TowerElem::x().recip().unwrap()
        );
    }

    #[test]
    fn eval_log_requires_defined_jets() {
        let d = to_log_decomposition(&DiffPoly::var(2));
        let err = d.eval(&TowerElem::zero()).unwrap_err();
        assert_eq!(err, AlgebraError::UndefinedIterLogDeriv { order: 1 });
        // constants have zero log-derivative at the second stage
        let err = d.eval(&TowerElem::one()).unwrap_err();
        assert_eq!(err, AlgebraError::UndefinedIterLogDeriv { order: 2 });
    }

    #[test]
    fn mult_conjugation_examples() {
        let x = TowerElem::x();
        // P = Y, g = x -> x*Y
        let p = mult_conjugate(&DiffPoly::var(0), &x).unwrap();
        assert_eq!(p, DiffPoly::var(0).scale(&x));
        // P = Y', g = x -> x*Y' + Y
        let p = mult_conjugate(&DiffPoly::var(1), &x).unwrap();
        let expected = DiffPoly::var(1).scale(&x).add(&DiffPoly::var(0));
        assert_eq!(p, expected);
        assert!(mult_conjugate(&DiffPoly::var(0), &TowerElem::zero()).is_err());
    }

    #[test]
    fn mult_conjugation_of_second_order_shape() {
        // (4Y'' + fY)_{x g} = 4gY'' + 8g'Y' + (4g'' + fg)Y
        let f = seq::omega_seq(1);
        let g = seq::ell(1).add(&TowerElem::x());
        let p = DiffPoly::second_order(elem(4), f.clone());
        let conj = mult_conjugate(&p, &g).unwrap();
        let mut expected = DiffPoly::zero();
        expected.add_term(MultiIndex::unit(2), g.scale(&q(4, 1)));
        expected.add_term(MultiIndex::unit(1), g.derivative().scale(&q(8, 1)));
        expected.add_term(MultiIndex::unit(0), p.eval(&g));
        assert_eq!(conj, expected);
    }

    #[test]
    fn mult_conjugation_evaluation_contract() {
        let g = seq::gamma(1).add(&TowerElem::one());
        let y = seq::ell(2);
        let p = DiffPoly::var(2)
            .mul(&DiffPoly::var(0))
            .add(&DiffPoly::var(1));
        let conj = mult_conjugate(&p, &g).unwrap();
        assert_eq!(conj.eval(&y), p.eval(&g.mul(&y)));
    }

    #[test]
    fn comp_conjugation_examples() {
        let phi = seq::gamma(0);
        // Y' -> phi * Y'
        let p = comp_conjugate(&DiffPoly::var(1), &phi).unwrap();
        assert_eq!(p, DiffPoly::var(1).scale(&phi));
        // Y'' -> phi^2 Y'' + phi' Y'
        let p = comp_conjugate(&DiffPoly::var(2), &phi).unwrap();
        let expected = DiffPoly::var(2)
            .scale(&phi.mul(&phi))
            .add(&DiffPoly::var(1).scale(&phi.derivative()));
        assert_eq!(p, expected);
        // conjugation by 1 is the identity
        let p = DiffPoly::var(2)
            .mul(&DiffPoly::var(1))
            .add(&DiffPoly::var(0));
        assert_eq!(comp_conjugate(&p, &TowerElem::one()).unwrap(), p);
    }

    #[test]
    fn comp_conjugation_evaluation_contract() {
        // delta-jets of y for delta = phi^{-1} d: y, y'/phi, (y'/phi)'/phi, ...
        let phi = seq::gamma(0);
        let y = seq::ell(1).pow_int(2).unwrap();
        let p = DiffPoly::var(2)
            .scale(&seq::omega_seq(1))
            .add(&DiffPoly::var(1).mul(&DiffPoly::var(0)));
        let conj = comp_conjugate(&p, &phi).unwrap();
        let mut delta_jets = vec![y.clone()];
        for _ in 0..2 {
            let next = delta_jets.last().unwrap().derivative().div(&phi).unwrap();
            delta_jets.push(next);
        }
        assert_eq!(conj.eval_on_jets(&delta_jets), p.eval(&y));
    }

    #[test]
    fn comp_conjugation_composes() {
        let phi = seq::gamma(0);
        let psi = seq::ell(1);
        let p = DiffPoly::var(2).add(&DiffPoly::var(1).pow(2));
        let once = comp_conjugate(&p, &phi).unwrap();
        // The second conjugation acts on coefficients with the first
        // conjugated derivation.
        let twice =
            comp_conjugate_with(&once, &psi, &|c| c.derivative().div(&phi).unwrap()).unwrap();
        let direct = comp_conjugate(&p, &phi.mul(&psi)).unwrap();
        assert_eq!(twice, direct);
    }

    #[test]
    fn chvar_identity() {
        let f = seq::omega_seq(1);
        let g = seq::gamma(1).add(&TowerElem::one());
        let (qq, phi) = chvar_reduce(&f, &g).unwrap();
        let p = DiffPoly::second_order(elem(4), f.clone());
        let lhs = comp_conjugate(&mult_conjugate(&p, &g).unwrap(), &phi)
            .unwrap()
            .scale(&g.pow_int(3).unwrap());
        let rhs = DiffPoly::second_order(elem(4), qq);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn chvar_trivial_gauge() {
        let f = seq::omega_seq(2);
        let (qq, phi) = chvar_reduce(&f, &TowerElem::one()).unwrap();
        assert_eq!(qq, f);
        assert_eq!(phi, TowerElem::one());
    }

    #[test]
    fn chvar_on_principal_gauges() {
        // g = gamma_rho^{-1/2}, f = omega_{rho+1}: q = gamma_{rho+1}^2 /
        // gamma_rho^2 = 1/l_{rho+1}^2 exactly.
        for rho in 0..=3 {
            let g = seq::gamma(rho).pow(&q(-1, 2)).unwrap();
            let f = seq::omega_seq(rho + 1);
            let (qq, _) = chvar_reduce(&f, &g).unwrap();
            let expected = seq::ell(rho + 1).pow_int(-2).unwrap();
            assert_eq!(qq, expected);
        }
        // f = omega_0, g = x^{1/2}: q = x^2 f - 1 = 0.
        let g = TowerElem::x().pow(&q(1, 2)).unwrap();
        let (qq, _) = chvar_reduce(&seq::omega_seq(0), &g).unwrap();
        assert!(qq.is_zero());
    }

    #[test]
    fn dominant_sign_cases() {
        let mut p = DiffPoly::var(0).pow(3).scale(&elem(2));
        p = p.add(&DiffPoly::var(1).mul(&DiffPoly::var(2)));
        let d = to_log_decomposition(&p);
        let dom = dominant_sign_at_large_argument(&d).unwrap();
        assert_eq!(dom.index, MultiIndex::new(vec![3]));
        assert_eq!(dom.sign, 1);
        // odd plain degree flips for negative arguments
        assert_eq!(dom.sign_negative_arg, -1);

        let d = to_log_decomposition(&DiffPoly::var(0).scale(&elem(-1)));
        let dom = dominant_sign_at_large_argument(&d).unwrap();
        assert_eq!(dom.sign, -1);

        // Y'' - Y: indices {(1,2),(1,1,1),(1)}; max is (1,2)
        let d = to_log_decomposition(&DiffPoly::var(2).sub(&DiffPoly::var(0)));
        let dom = dominant_sign_at_large_argument(&d).unwrap();
        assert_eq!(dom.index, MultiIndex::new(vec![1, 2]));
        assert_eq!(dom.sign, 1);

        assert_eq!(
            dominant_sign_at_large_argument(&LogDecomp::zero()).unwrap_err(),
            AlgebraError::ZeroPolynomial
        );
    }
}
