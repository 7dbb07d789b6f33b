use num_rational::BigRational;

/// Byte range of a node in the input string.
pub type Span = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    Gamma,
    Omega,
    Lambda,
    SigmaGamma,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Rational(BigRational),
    /// `x` (alias `l0`).
    Var,
    /// `l<k>` for k >= 1.
    Tower(usize),
    /// `gamma(n)`, `omega(n)`, `lambda(n)`, `sigma_gamma(n)`.
    Seq(SeqKind, usize),
    Log(Box<Spanned>),
    Neg(Box<Spanned>),
    Add(Box<Spanned>, Box<Spanned>),
    Sub(Box<Spanned>, Box<Spanned>),
    Mul(Box<Spanned>, Box<Spanned>),
    Div(Box<Spanned>, Box<Spanned>),
    /// Base raised to an exact rational literal.
    Pow(Box<Spanned>, BigRational),
    /// `Y` with `order` primes; only valid in differential-polynomial input.
    Jet(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub node: Expr,
    pub span: Span,
}

impl Spanned {
    pub fn new(node: Expr, span: Span) -> Self {
        Spanned { node, span }
    }
}

/// An input-side error carrying the offending byte range.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanError {
    pub message: String,
    pub span: Span,
}

impl SpanError {
    pub fn new(message: impl Into<String>, span: Span) -> Self {
        SpanError {
            message: message.into(),
            span,
        }
    }

    /// Renders the error with a caret line pointing into the input.
    pub fn render(&self, input: &str) -> String {
        let (start, end) = self.span;
        let width = end.saturating_sub(start).max(1);
        format!(
            "error: {} at {}..{}\n  {}\n  {}{}",
            self.message,
            start,
            end,
            input,
            " ".repeat(start),
            "^".repeat(width)
        )
    }
}
