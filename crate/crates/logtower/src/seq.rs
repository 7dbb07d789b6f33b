//! The special sequences on the iterated-logarithm scale and the maps that
//! tie them to second-order equations.
//!
//! For each level n the table holds `ell(n)` (the n-th iterated log),
//! `gamma(n) = ell(n)'/ell(n) = 1/(l0*...*ln)`, the partial sums
//! `lambda(n)` of the `gamma(k)` and `omega(n)` of their squares, and
//! `sigma_gamma(n) = omega(n) + gamma(n)^2`. The chain `omega(n)` increases,
//! `sigma_gamma(n)` decreases, and the oscillation boundary sits between
//! them.

use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::One;

use crate::error::AlgebraError;
use crate::tower::{Monomial, TowerElem, TowerPoly};

/// One row of the sequence table: the level-n germs, all exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTable {
    pub n: usize,
    pub ell: TowerElem,
    pub gamma: TowerElem,
    pub lambda: TowerElem,
    pub omega: TowerElem,
    pub sigma_gamma: TowerElem,
}

fn build_row(n: usize, prev: Option<&SequenceTable>) -> SequenceTable {
    let ell = TowerElem::tower(n);
    let gamma = TowerElem::from_poly(TowerPoly::monomial(Monomial::gamma(n), BigRational::one()));
    let gamma_sq = gamma.mul(&gamma);
    let (lambda, omega) = match prev {
        None => (gamma.clone(), gamma_sq.clone()),
        Some(p) => (p.lambda.add(&gamma), p.omega.add(&gamma_sq)),
    };
    let sigma_gamma = omega.add(&gamma_sq);
    SequenceTable {
        n,
        ell,
        gamma,
        lambda,
        omega,
        sigma_gamma,
    }
}

// Rows are cheap but requested repeatedly by the classifier; memoize them.
static TABLE: Mutex<Vec<SequenceTable>> = Mutex::new(Vec::new());

/// The full table row at level `n`.
pub fn table(n: usize) -> SequenceTable {
    let mut rows = TABLE.lock().unwrap();
    while rows.len() <= n {
        let row = build_row(rows.len(), rows.last());
        rows.push(row);
    }
    rows[n].clone()
}

/// The n-th iterated logarithm (`x` for n = 0).
pub fn ell(n: usize) -> TowerElem {
    table(n).ell
}

/// `1/(l0 * ... * ln)`, the logarithmic derivative of `ell(n)`.
pub fn gamma(n: usize) -> TowerElem {
    table(n).gamma
}

/// `gamma(0) + ... + gamma(n)`.
pub fn lambda(n: usize) -> TowerElem {
    table(n).lambda
}

/// `gamma(0)^2 + ... + gamma(n)^2`.
pub fn omega_seq(n: usize) -> TowerElem {
    table(n).omega
}

/// `omega_seq(n) + gamma(n)^2`, the upper boundary germ at level n.
pub fn sigma_gamma(n: usize) -> TowerElem {
    table(n).sigma_gamma
}

/// The Riccati-side map `z -> -2z' - z^2`.
///
/// `y'' + f y = 0` has a nonvanishing solution `y` exactly when `z = 2y'/y`
/// solves `omega_map(z) = 4f`.
pub fn omega_map(z: &TowerElem) -> TowerElem {
    let dz = z
        .derivative()
        .scale(&BigRational::from_integer((-2).into()));
    dz.sub(&z.mul(z))
}

/// `y -> omega_map(-y'/y) + y^2`, defined for `y != 0`.
pub fn sigma_map(y: &TowerElem) -> Result<TowerElem, AlgebraError> {
    if y.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let z = y.log_derivative()?.neg();
    Ok(omega_map(&z).add(&y.mul(y)))
}

/// True iff `z' + z^2 + f = 0` exactly.
pub fn riccati_check(z: &TowerElem, f: &TowerElem) -> bool {
    z.derivative().add(&z.mul(z)).add(f).is_zero()
}

/// Whether the antiderivative of an eventually positive germ is unbounded.
///
/// Decided on the leading monomial `m`: the antiderivative diverges exactly
/// when the exponent vector of `m` is lexicographically at least
/// `(-1, -1, ..., -1)`. Comparison against the leading monomial suffices
/// because `u` is asymptotic to a positive multiple of it, and divergence
/// only depends on growth. Symbolic antiderivatives are not closed in the
/// tower field, so this is the whole test.
pub fn integral_diverges(u: &TowerElem) -> Result<bool, AlgebraError> {
    if u.sign_at_infinity() != 1 {
        return Err(AlgebraError::NotEventuallyPositive);
    }
    let lead = u.leading_monomial().expect("nonzero germ has a lead");
    let minus_one = -BigRational::one();
    for e in lead.exponents() {
        if *e > minus_one {
            return Ok(true);
        }
        if *e < minus_one {
            return Ok(false);
        }
    }
    // Every stored exponent is -1 (or the monomial is constant): the
    // antiderivative is the next iterated logarithm, which is unbounded.
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gamma_and_omega_closed_forms() {
        assert_eq!(gamma(1).to_string(), "1/(x*l1)");
        assert_eq!(omega_seq(0).to_string(), "1/x^2");
        assert_eq!(lambda(1), gamma(0).add(&gamma(1)));
    }

    #[test]
    fn gamma_is_log_derivative_of_ell() {
        for n in 0..6 {
            assert_eq!(ell(n).log_derivative().unwrap(), gamma(n));
        }
    }

    #[test]
    fn lambda_is_negative_log_derivative_of_gamma() {
        for n in 0..6 {
            assert_eq!(gamma(n).log_derivative().unwrap().neg(), lambda(n));
        }
    }

    #[test]
    fn omega_map_on_lambda_chain() {
        for n in 0..=5 {
            assert_eq!(omega_map(&lambda(n)), omega_seq(n));
        }
    }

    #[test]
    fn omega_map_simple_cases() {
        assert!(omega_map(&TowerElem::zero()).is_zero());
        // -2*(-1/x^2) - 1/x^2 = 1/x^2
        let inv_x = TowerElem::x().recip().unwrap();
        assert_eq!(omega_map(&inv_x), inv_x.mul(&inv_x));
    }

    #[test]
    fn sigma_map_matches_chain() {
        for n in 0..=5 {
            assert_eq!(sigma_map(&gamma(n)).unwrap(), sigma_gamma(n));
        }
        // sigma(1/x) = 2/x^2
        let inv_x = TowerElem::x().recip().unwrap();
        assert_eq!(
            sigma_map(&inv_x).unwrap(),
            inv_x.mul(&inv_x).scale(&q(2, 1))
        );
        assert_eq!(
            sigma_map(&TowerElem::zero()).unwrap_err(),
            AlgebraError::DivisionByZero
        );
    }

    #[test]
    fn sigma_map_is_even() {
        let y = gamma(2).add(&TowerElem::x().recip().unwrap());
        assert_eq!(sigma_map(&y).unwrap(), sigma_map(&y.neg()).unwrap());
    }

    #[test]
    fn riccati_bridge_from_principal_solution() {
        // y = gamma_n^{-1/2} solves y'' + (omega_n/4) y = 0, so z = y'/y
        // solves z' + z^2 + omega_n/4 = 0.
        for n in 0..=4 {
            let y = gamma(n).pow(&q(-1, 2)).unwrap();
            let z = y.log_derivative().unwrap();
            let f = omega_seq(n).scale(&q(1, 4));
            assert!(riccati_check(&z, &f));
        }
        assert!(riccati_check(&TowerElem::zero(), &TowerElem::zero()));
        assert!(!riccati_check(&TowerElem::zero(), &TowerElem::one()));
    }

    #[test]
    fn integral_divergence_cases() {
        let inv_x = TowerElem::x().recip().unwrap();
        assert!(integral_diverges(&inv_x).unwrap());
        // 1/(x*l1^2) has the closed-form antiderivative -1/l1.
        let u = inv_x.div(&TowerElem::tower(1).pow_int(2).unwrap()).unwrap();
        assert!(!integral_diverges(&u).unwrap());
        assert!(integral_diverges(&gamma(2)).unwrap());
        assert!(integral_diverges(&TowerElem::one()).unwrap());
        assert_eq!(
            integral_diverges(&inv_x.neg()).unwrap_err(),
            AlgebraError::NotEventuallyPositive
        );
        assert_eq!(
            integral_diverges(&TowerElem::zero()).unwrap_err(),
            AlgebraError::NotEventuallyPositive
        );
    }

    #[test]
    fn chain_monotonicity() {
        for n in 0..=6 {
            let up = omega_seq(n + 1).sub(&omega_seq(n));
            assert_eq!(up.sign_at_infinity(), 1);
            let down = sigma_gamma(n).sub(&sigma_gamma(n + 1));
            assert_eq!(down.sign_at_infinity(), 1);
        }
    }

    #[test]
    fn interleaving_omega_below_sigma() {
        for n in 0..=6 {
            for m in 0..=6 {
                let d = sigma_gamma(m).sub(&omega_seq(n));
                assert_eq!(d.sign_at_infinity(), 1, "omega_{} < sigma(gamma_{})", n, m);
            }
        }
    }

    #[test]
    fn recursions_hold() {
        for n in 0..=6 {
            assert_eq!(lambda(n + 1), lambda(n).add(&gamma(n + 1)));
            let gsq = gamma(n + 1).pow_int(2).unwrap();
            assert_eq!(omega_seq(n + 1), omega_seq(n).add(&gsq));
        }
        assert!(lambda(0).sub(&gamma(0)).is_zero());
        assert!(!omega_seq(3).is_zero());
        assert!(q(0, 1).is_zero());
    }
}
