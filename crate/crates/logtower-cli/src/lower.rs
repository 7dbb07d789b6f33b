//! Lowers parsed expressions into exact germs and differential polynomials.

use logtower::diffpoly::{DiffPoly, MultiIndex};
use logtower::seq;
use logtower::tower::TowerElem;
use logtower::AlgebraError;

use crate::ast::{Expr, SeqKind, Span, SpanError, Spanned};

fn algebra_error(err: AlgebraError, span: Span) -> SpanError {
    SpanError::new(err.to_string(), span)
}

/// Evaluates an expression into a tower germ.
pub fn lower(ast: &Spanned) -> Result<TowerElem, SpanError> {
    match &ast.node {
        Expr::Rational(q) => Ok(TowerElem::constant(q.clone())),
        Expr::Var => Ok(TowerElem::x()),
        Expr::Tower(k) => Ok(TowerElem::tower(*k)),
        Expr::Seq(kind, n) => Ok(match kind {
            SeqKind::Gamma => seq::gamma(*n),
            SeqKind::Omega => seq::omega_seq(*n),
            SeqKind::Lambda => seq::lambda(*n),
            SeqKind::SigmaGamma => seq::sigma_gamma(*n),
        }),
        Expr::Log(inner) => {
            let v = lower(inner)?;
            v.log().map_err(|e| algebra_error(e, ast.span))
        }
        Expr::Neg(inner) => Ok(lower(inner)?.neg()),
        Expr::Add(a, b) => Ok(lower(a)?.add(&lower(b)?)),
        Expr::Sub(a, b) => Ok(lower(a)?.sub(&lower(b)?)),
        Expr::Mul(a, b) => Ok(lower(a)?.mul(&lower(b)?)),
        Expr::Div(a, b) => lower(a)?
            .div(&lower(b)?)
            .map_err(|e| algebra_error(e, b.span)),
        Expr::Pow(base, exp) => lower(base)?
            .pow(exp)
            .map_err(|e| algebra_error(e, ast.span)),
        Expr::Jet(_) => Err(SpanError::new(
            "differential variable Y is not allowed in a germ expression",
            ast.span,
        )),
    }
}

/// Extracts the scalar part of a polynomial that uses no jet variable.
fn as_scalar(p: &DiffPoly) -> Option<TowerElem> {
    let mut terms = p.terms();
    match terms.next() {
        None => Some(TowerElem::zero()),
        Some((idx, c)) if idx.is_empty() && terms.next().is_none() => Some(c.clone()),
        _ => None,
    }
}

/// Evaluates an expression into a differential polynomial. Scalars embed as
/// constants; division and logarithms require jet-free operands, and powers
/// of jet-bearing operands require nonnegative integer exponents.
pub fn lower_diffpoly(ast: &Spanned) -> Result<DiffPoly, SpanError> {
    match &ast.node {
        Expr::Jet(order) => {
            let mut p = DiffPoly::zero();
            p.add_term(MultiIndex::unit(*order), TowerElem::one());
            Ok(p)
        }
        Expr::Neg(inner) => Ok(lower_diffpoly(inner)?.neg()),
        Expr::Add(a, b) => Ok(lower_diffpoly(a)?.add(&lower_diffpoly(b)?)),
        Expr::Sub(a, b) => Ok(lower_diffpoly(a)?.sub(&lower_diffpoly(b)?)),
        Expr::Mul(a, b) => Ok(lower_diffpoly(a)?.mul(&lower_diffpoly(b)?)),
        Expr::Div(a, b) => {
            let num = lower_diffpoly(a)?;
            let den = lower_diffpoly(b)?;
            let scalar = as_scalar(&den).ok_or_else(|| {
                SpanError::new("cannot divide by a differential polynomial", b.span)
            })?;
            let inv = scalar.recip().map_err(|e| algebra_error(e, b.span))?;
            Ok(num.scale(&inv))
        }
        Expr::Pow(base, exp) => {
            let p = lower_diffpoly(base)?;
            if let Some(scalar) = as_scalar(&p) {
                return Ok(DiffPoly::constant(
                    scalar.pow(exp).map_err(|e| algebra_error(e, ast.span))?,
                ));
            }
            if !exp.is_integer() || exp < &num_rational::BigRational::from_integer(0.into()) {
                return Err(SpanError::new(
                    "jet powers must be nonnegative integers",
                    ast.span,
                ));
            }
            use num_traits::ToPrimitive;
            let n = exp
                .to_integer()
                .to_u32()
                .ok_or_else(|| SpanError::new("exponent too large", ast.span))?;
            Ok(p.pow(n))
        }
        Expr::Log(inner) => {
            let p = lower_diffpoly(inner)?;
            let scalar = as_scalar(&p).ok_or_else(|| {
                SpanError::new(
                    "cannot take the logarithm of a differential polynomial",
                    inner.span,
                )
            })?;
            let v = scalar.log().map_err(|e| algebra_error(e, ast.span))?;
            Ok(DiffPoly::constant(v))
        }
        // Pure germ leaves embed as constants.
        _ => Ok(DiffPoly::constant(lower(ast)?)),
    }
}
