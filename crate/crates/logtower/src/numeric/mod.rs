//! Floating-point cross-validation lab.
//!
//! Tower germs compile to `f64` evaluators (depth is capped at 3: the
//! fourth iterated logarithm turns positive only past `exp(exp(e))`, and
//! anything deeper would need evaluation points beyond `f64` range, so
//! deeper inputs are reduced symbolically first). The equation
//! `y'' + q y = 0` is integrated with an embedded Runge-Kutta 5(4) pair,
//! zeros are bracketed by sign changes and refined by bisection, and
//! Wronskian constancy and the quadratic-decay growth bound serve as
//! diagnostics. The oscillation probe is a heuristic cross-check and never
//! the source of truth.

mod rk45;

use num_traits::ToPrimitive;

use crate::error::NumericError;
use crate::oscillation;
use crate::tower::{TowerElem, TowerPoly};
use rk45::{Rk45, StepRecord};

/// Largest tower depth the evaluator accepts.
pub const MAX_NUMERIC_DEPTH: usize = 3;

/// Default integration tolerances.
pub const DEFAULT_RTOL: f64 = 1e-9;
pub const DEFAULT_ATOL: f64 = 1e-12;

/// Relative margin above the positivity threshold of the deepest logarithm.
const T_MIN_MARGIN: f64 = 0.1;

/// Relative width target for zero refinement.
const ZERO_REFINE_REL: f64 = 1e-12;

/// Compiled form of one polynomial: (coefficient, [(level, exponent)]).
type CompiledPoly = Vec<(f64, Vec<(usize, f64)>)>;

/// A tower germ compiled for `f64` evaluation on `t >= t_min`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    num: CompiledPoly,
    den: CompiledPoly,
    depth: usize,
    t_min: f64,
}

fn compile_poly(p: &TowerPoly) -> Result<CompiledPoly, NumericError> {
    let mut out = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        let coeff = c
            .to_f64()
            .ok_or_else(|| NumericError::DomainError("coefficient overflows f64".into()))?;
        let exps = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, e)| !num_traits::Zero::is_zero(*e))
            .map(|(k, e)| {
                e.to_f64()
                    .map(|v| (k, v))
                    .ok_or_else(|| NumericError::DomainError("exponent overflows f64".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push((coeff, exps));
    }
    Ok(out)
}

fn eval_compiled(p: &CompiledPoly, logs: &[f64]) -> f64 {
    let mut total = 0.0;
    for (c, exps) in p {
        let mut term = *c;
        for (k, e) in exps {
            let base = logs[*k];
            term *= if *e == 1.0 {
                base
            } else if *e == -1.0 {
                1.0 / base
            } else {
                base.powf(*e)
            };
        }
        total += term;
    }
    total
}

impl Evaluator {
    /// Compiles a germ of depth at most [`MAX_NUMERIC_DEPTH`].
    pub fn compile(f: &TowerElem) -> Result<Evaluator, NumericError> {
        let depth = f.depth();
        if depth > MAX_NUMERIC_DEPTH {
            return Err(NumericError::DepthTooLargeForNumerics {
                depth,
                max: MAX_NUMERIC_DEPTH,
            });
        }
        Ok(Evaluator {
            num: compile_poly(f.numerator())?,
            den: compile_poly(f.denominator())?,
            depth,
            t_min: t_min_for_depth(depth),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Smallest admissible evaluation point: every iterated logarithm in
    /// range is positive with a safety margin.
    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut logs = [0.0; MAX_NUMERIC_DEPTH + 1];
        logs[0] = t;
        for k in 1..=self.depth {
            logs[k] = logs[k - 1].ln();
        }
        eval_compiled(&self.num, &logs) / eval_compiled(&self.den, &logs)
    }
}

/// `exp_{d-1}(1) * (1 + margin)` for depth `d >= 1`; a nominal positive
/// floor at depth 0.
fn t_min_for_depth(depth: usize) -> f64 {
    if depth == 0 {
        return 1e-3;
    }
    let mut threshold = 1.0f64;
    for _ in 1..depth {
        threshold = threshold.exp();
    }
    threshold * (1.0 + T_MIN_MARGIN)
}

/// One accepted integration point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub y: f64,
    pub yp: f64,
}

/// A numerically integrated solution with its zero locations.
///
/// Zeros are strictly increasing; each interior zero is bracketed by a sign
/// change between consecutive samples and refined by bisection of the local
/// cubic interpolant.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    pub t1: f64,
    pub samples: Vec<Sample>,
    pub zeros: Vec<f64>,
    pub rtol: f64,
    pub atol: f64,
}

/// Two solutions on a shared grid with their Wronskian drift.
#[derive(Debug, Clone)]
pub struct SolutionPair {
    pub y1: Trajectory,
    pub y2: Trajectory,
    pub wronskian_drift: f64,
}

/// Wronskian constancy diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct WronskianReport {
    pub reference: f64,
    pub max_drift: f64,
    pub t_at_max: f64,
}

fn refine_zero<const N: usize>(rec: &StepRecord<N>, comp: usize) -> f64 {
    let (mut lo, mut hi) = (rec.t0, rec.t1);
    let mut f_lo = rec.y0[comp];
    let width_target = ZERO_REFINE_REL * hi.abs().max(1.0);
    while hi - lo > width_target {
        let mid = 0.5 * (lo + hi);
        let f_mid = rec.interpolate(comp, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo < 0.0) == (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Collects zeros of component `comp` from one accepted step.
fn detect_zeros<const N: usize>(rec: &StepRecord<N>, comp: usize, zeros: &mut Vec<f64>) {
    let a = rec.y0[comp];
    let b = rec.y1[comp];
    let push = |zeros: &mut Vec<f64>, t: f64| {
        if zeros.last().is_none_or(|z| *z < t) {
            zeros.push(t);
        }
    };
    if a == 0.0 && rec.t0 == rec.t1 {
        return;
    }
    if b == 0.0 {
        push(zeros, rec.t1);
        return;
    }
    if a != 0.0 && (a < 0.0) != (b < 0.0) {
        push(zeros, refine_zero(rec, comp));
    }
}

/// Integrates `y'' + q y = 0` from `(y0, y0p)` at `t0` to `t1`.
pub fn integrate(
    q: &Evaluator,
    t0: f64,
    t1: f64,
    y0: f64,
    y0p: f64,
    rtol: f64,
    atol: f64,
) -> Result<Trajectory, NumericError> {
    if t0 < q.t_min() {
        return Err(NumericError::DomainError(format!(
            "t0 = {} below the admissible minimum {}",
            t0,
            q.t_min()
        )));
    }
    let rhs = move |t: f64, y: &[f64; 2]| [y[1], -q.eval(t) * y[0]];
    let mut rk = Rk45::new(&rhs, t0, [y0, y0p], t1, rtol, atol)?;
    let mut samples = vec![Sample {
        t: t0,
        y: y0,
        yp: y0p,
    }];
    let mut zeros = Vec::new();
    if y0 == 0.0 {
        zeros.push(t0);
    }
    while !rk.done(t1) {
        let rec = rk.step(t1)?;
        detect_zeros(&rec, 0, &mut zeros);
        samples.push(Sample {
            t: rec.t1,
            y: rec.y1[0],
            yp: rec.y1[1],
        });
    }
    Ok(Trajectory {
        t0,
        t1,
        samples,
        zeros,
        rtol,
        atol,
    })
}

/// Integrates the fundamental pair with initial frames `(1, 0)` and
/// `(0, 1)` as one system, so both trajectories share the accepted grid.
pub fn integrate_pair(
    q: &Evaluator,
    t0: f64,
    t1: f64,
    rtol: f64,
    atol: f64,
) -> Result<SolutionPair, NumericError> {
    if t0 < q.t_min() {
        return Err(NumericError::DomainError(format!(
            "t0 = {} below the admissible minimum {}",
            t0,
            q.t_min()
        )));
    }
    let rhs = move |t: f64, y: &[f64; 4]| {
        let qv = q.eval(t);
        [y[1], -qv * y[0], y[3], -qv * y[2]]
    };
    let mut rk = Rk45::new(&rhs, t0, [1.0, 0.0, 0.0, 1.0], t1, rtol, atol)?;
    let mut s1 = vec![Sample {
        t: t0,
        y: 1.0,
        yp: 0.0,
    }];
    let mut s2 = vec![Sample {
        t: t0,
        y: 0.0,
        yp: 1.0,
    }];
    let mut z1 = Vec::new();
    let mut z2 = vec![t0];
    let w0 = 1.0;
    let mut max_drift = 0.0f64;
    while !rk.done(t1) {
        let rec = rk.step(t1)?;
        detect_zeros(&rec, 0, &mut z1);
        detect_zeros(&rec, 2, &mut z2);
        let [y1, y1p, y2, y2p] = rec.y1;
        s1.push(Sample {
            t: rec.t1,
            y: y1,
            yp: y1p,
        });
        s2.push(Sample {
            t: rec.t1,
            y: y2,
            yp: y2p,
        });
        let w = y1 * y2p - y1p * y2;
        max_drift = max_drift.max((w - w0).abs() / w0.abs());
    }
    Ok(SolutionPair {
        y1: Trajectory {
            t0,
            t1,
            samples: s1,
            zeros: z1,
            rtol,
            atol,
        },
        y2: Trajectory {
            t0,
            t1,
            samples: s2,
            zeros: z2,
            rtol,
            atol,
        },
        wronskian_drift: max_drift,
    })
}

/// Builds the independent companion solution by quadrature:
/// `y2 = y1 * integral of 1/y1^2`, evaluated by composite Simpson on the
/// accepted grid with cubic-interpolated midpoints. The input must not
/// vanish anywhere in its range.
pub fn second_solution(y1: &Trajectory) -> Result<Trajectory, NumericError> {
    if let Some(z) = y1.zeros.first() {
        return Err(NumericError::ZeroInRange { t: *z });
    }
    let n = y1.samples.len();
    if n < 2 {
        return Err(NumericError::DomainError(
            "trajectory too short for quadrature".into(),
        ));
    }
    let mut samples = Vec::with_capacity(n);
    let first = y1.samples[0];
    let mut integral = 0.0;
    samples.push(Sample {
        t: first.t,
        y: 0.0,
        yp: 1.0 / first.y, // y1*I' at I = 0
    });
    for w in y1.samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.y == 0.0 || b.y == 0.0 {
            return Err(NumericError::ZeroInRange { t: b.t });
        }
        let h = b.t - a.t;
        // Hermite midpoint of y1 on this step.
        let rec = StepRecord {
            t0: a.t,
            t1: b.t,
            y0: [a.y],
            y1: [b.y],
            d0: [a.yp],
            d1: [b.yp],
        };
        let ym = rec.interpolate(0, a.t + 0.5 * h);
        let fa = 1.0 / (a.y * a.y);
        let fm = 1.0 / (ym * ym);
        let fb = 1.0 / (b.y * b.y);
        integral += h * (fa + 4.0 * fm + fb) / 6.0;
        samples.push(Sample {
            t: b.t,
            y: b.y * integral,
            yp: b.yp * integral + 1.0 / b.y,
        });
    }
    Ok(Trajectory {
        t0: y1.t0,
        t1: y1.t1,
        samples,
        zeros: vec![y1.t0],
        rtol: y1.rtol,
        atol: y1.atol,
    })
}

/// Pairs two trajectories on the same grid and records their Wronskian
/// drift.
pub fn pair_from(y1: Trajectory, y2: Trajectory) -> Result<SolutionPair, NumericError> {
    if y1.samples.len() != y2.samples.len() {
        return Err(NumericError::DomainError(
            "trajectories do not share a grid".into(),
        ));
    }
    let report = wronskian_of(&y1, &y2)?;
    Ok(SolutionPair {
        y1,
        y2,
        wronskian_drift: report.max_drift,
    })
}

fn wronskian_of(y1: &Trajectory, y2: &Trajectory) -> Result<WronskianReport, NumericError> {
    let (a0, b0) = (y1.samples[0], y2.samples[0]);
    let w0 = a0.y * b0.yp - a0.yp * b0.y;
    if w0 == 0.0 {
        return Err(NumericError::DomainError(
            "initial Wronskian vanishes; solutions are dependent".into(),
        ));
    }
    let mut max_drift = 0.0f64;
    let mut t_at_max = a0.t;
    for (a, b) in y1.samples.iter().zip(&y2.samples) {
        let w = a.y * b.yp - a.yp * b.y;
        let drift = (w - w0).abs() / w0.abs();
        if drift > max_drift {
            max_drift = drift;
            t_at_max = a.t;
        }
    }
    Ok(WronskianReport {
        reference: w0,
        max_drift,
        t_at_max,
    })
}

/// Maximum relative Wronskian drift over the shared grid.
pub fn wronskian_check(pair: &SolutionPair) -> WronskianReport {
    wronskian_of(&pair.y1, &pair.y2).expect("pair was built with nonzero Wronskian")
}

/// Checks the growth bound for coefficients dominated by `c/t^2`.
///
/// Requires `t0 >= 1` and `|q(t)| * t^2 <= c` at every sample (up to
/// rounding); with `C = |c1| + |c2|` taken from the initial frame, asserts
/// `|y(t)| <= C t^(c+1)` and `|y'(t)| <= C t^c` at every accepted step.
pub fn gronwall_check(q: &Evaluator, c: f64, traj: &Trajectory) -> Result<bool, NumericError> {
    const SLACK: f64 = 1e-9;
    if traj.t0 < 1.0 {
        return Err(NumericError::HypothesisViolated(format!(
            "window must start at t >= 1, got {}",
            traj.t0
        )));
    }
    for s in &traj.samples {
        let bound = q.eval(s.t).abs() * s.t * s.t;
        if bound > c * (1.0 + SLACK) {
            return Err(NumericError::HypothesisViolated(format!(
                "|q(t)| t^2 = {} exceeds {} at t = {}",
                bound, c, s.t
            )));
        }
    }
    let first = traj.samples[0];
    let c2 = first.yp;
    let c1 = first.y - first.t * first.yp;
    let big_c = c1.abs() + c2.abs();
    let ok = traj.samples.iter().all(|s| {
        s.y.abs() <= big_c * s.t.powf(c + 1.0) * (1.0 + SLACK)
            && s.yp.abs() <= big_c * s.t.powf(c) * (1.0 + SLACK)
    });
    Ok(ok)
}

/// Heuristic verdict of the finite-window probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    OscillatingTrend,
    QuiescentTrend,
    Ambiguous,
}

/// Tunable thresholds of the oscillation probe.
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    /// Requested window; the lower end is raised to the evaluator's `t_min`.
    pub window: (f64, f64),
    /// Zeros both solutions must accumulate to call an oscillating trend.
    pub min_zeros_oscillating: usize,
    /// Zero budget both solutions must respect, after the transient third
    /// of the window, to call a quiescent trend.
    pub max_zeros_quiescent: usize,
    /// Geometric growth factor of the window end while zeros are missing.
    pub extension_factor: f64,
    /// Cap on the total window extension.
    pub extension_budget: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            window: (10.0, 1e6),
            min_zeros_oscillating: 5,
            max_zeros_quiescent: 1,
            extension_factor: 10.0,
            extension_budget: 1e3,
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
        }
    }
}

/// Integrates a fundamental pair and reads an oscillation trend off the
/// zero counts. Strictly a cross-check: oscillation may hide beyond any
/// finite window, so `Ambiguous` and `QuiescentTrend` carry no proof.
///
/// The window end extends geometrically (up to the configured budget)
/// until both solutions show the required zeros; the quiescent call only
/// counts zeros past the transient third of the (log-scale) window.
pub fn numeric_oscillation_probe(
    q: &TowerElem,
    config: &ProbeConfig,
) -> Result<ProbeOutcome, NumericError> {
    let ev = Evaluator::compile(q)?;
    let t0 = config.window.0.max(ev.t_min());
    let t_budget = config.window.1 * config.extension_budget;
    if !t_budget.is_finite() || t_budget <= t0 {
        return Err(NumericError::DomainError("empty probe window".into()));
    }
    let rhs = move |t: f64, y: &[f64; 4]| {
        let qv = ev.eval(t);
        [y[1], -qv * y[0], y[3], -qv * y[2]]
    };
    let mut rk = Rk45::new(
        &rhs,
        t0,
        [1.0, 0.0, 0.0, 1.0],
        t_budget,
        config.rtol,
        config.atol,
    )?;
    let mut z1: Vec<f64> = Vec::new();
    let mut z2: Vec<f64> = vec![t0];
    let mut reached = t0;
    while !rk.done(t_budget) {
        let rec = rk.step(t_budget)?;
        detect_zeros(&rec, 0, &mut z1);
        detect_zeros(&rec, 2, &mut z2);
        reached = rec.t1;
        if z1.len() >= config.min_zeros_oscillating && z2.len() >= config.min_zeros_oscillating {
            return Ok(ProbeOutcome::OscillatingTrend);
        }
    }
    // Transient third on the logarithmic scale of the extended window.
    let t_cut = t0 * (reached / t0).powf(1.0 / 3.0);
    let late = |zs: &[f64]| zs.iter().filter(|z| **z > t_cut).count();
    if late(&z1) <= config.max_zeros_quiescent && late(&z2) <= config.max_zeros_quiescent {
        Ok(ProbeOutcome::QuiescentTrend)
    } else {
        Ok(ProbeOutcome::Ambiguous)
    }
}

/// Lowers the tower depth of `q` with the depth-reduction transform until
/// it fits the evaluator, preserving the oscillation verdict. Returns the
/// reduced coefficient and how many reductions were applied.
pub fn reduce_for_numerics(q: &TowerElem) -> Result<(TowerElem, usize), NumericError> {
    let four = num_rational::BigRational::from_integer(4.into());
    let quarter = four.recip();
    let mut current = q.clone();
    let mut applied = 0;
    while current.depth() > MAX_NUMERIC_DEPTH {
        let f = current.scale(&four);
        let reduced =
            oscillation::phi_down(&f).map_err(|_| NumericError::DepthTooLargeForNumerics {
                depth: current.depth(),
                max: MAX_NUMERIC_DEPTH,
            })?;
        current = reduced.scale(&quarter);
        applied += 1;
    }
    Ok((current, applied))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn evaluator_matches_closed_forms() {
        // omega_1 at t = e^2 is 1/t^2 + 1/(t ln t)^2 = e^{-4} + 1/(4e^4).
        let ev = Evaluator::compile(&seq::omega_seq(1)).unwrap();
        let t = std::f64::consts::E.powi(2);
        let expected = (-4.0f64).exp() + 1.0 / (2.0 * t).powi(2);
        assert!((ev.eval(t) - expected).abs() < 1e-15 * expected);
        // x at t = 10
        let ev = Evaluator::compile(&TowerElem::x()).unwrap();
        assert_eq!(ev.eval(10.0), 10.0);
    }

    #[test]
    fn evaluator_depth_guard_and_t_min() {
        let deep = seq::omega_seq(4);
        assert!(matches!(
            Evaluator::compile(&deep),
            Err(NumericError::DepthTooLargeForNumerics { depth: 4, .. })
        ));
        let ev = Evaluator::compile(&seq::ell(2)).unwrap();
        assert!(ev.t_min() > std::f64::consts::E);
        assert!(ev.t_min() < 3.1);
    }

    #[test]
    fn integrate_constant_zero_coefficient() {
        let ev = Evaluator::compile(&TowerElem::zero()).unwrap();
        let traj = integrate(&ev, 1.0, 100.0, 1.0, 0.0, 1e-9, 1e-12).unwrap();
        assert!(traj.zeros.is_empty());
        let last = traj.samples.last().unwrap();
        assert!((last.y - 1.0).abs() < 1e-9);
    }

    #[test]
    fn euler_equation_zero_count() {
        // y'' + a/t^2 y = 0, a = 2.5: zeros follow t^(1/2) sin(1.5 ln t + p).
        let a = TowerElem::constant(q(5, 2));
        let coeff = a.mul(&TowerElem::x().pow_int(-2).unwrap());
        let ev = Evaluator::compile(&coeff).unwrap();
        let traj = integrate(&ev, 10.0, 1e6, 1.0, 0.0, 1e-9, 1e-12).unwrap();
        let nu = (2.5f64 - 0.25).sqrt();
        let predicted = (nu * (1e6f64 / 10.0).ln() / std::f64::consts::PI).floor() as i64;
        let got = traj.zeros.len() as i64;
        assert!(
            (got - predicted).abs() <= 1,
            "got {} predicted {}",
            got,
            predicted
        );
        // zeros strictly increasing
        assert!(traj.zeros.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn depth_one_boundary_is_quiescent_on_window() {
        // q = omega_1/4 from t0 = 20: no oscillation shows up numerically.
        let coeff = seq::omega_seq(1).scale(&q(1, 4));
        let ev = Evaluator::compile(&coeff).unwrap();
        let traj = integrate(&ev, 20.0, 1e6, 1.0, 0.0, 1e-9, 1e-12).unwrap();
        assert!(traj.zeros.len() <= 1, "zeros: {:?}", traj.zeros);
    }

    #[test]
    fn second_solution_of_trivial_equation() {
        // q = 0, y1 = 1: y2 = t - t0.
        let ev = Evaluator::compile(&TowerElem::zero()).unwrap();
        let y1 = integrate(&ev, 1.0, 1000.0, 1.0, 0.0, 1e-9, 1e-12).unwrap();
        let y2 = second_solution(&y1).unwrap();
        let last = y2.samples.last().unwrap();
        assert!((last.y - (last.t - 1.0)).abs() < 1e-6 * last.t);
        let pair = pair_from(y1, y2).unwrap();
        assert!(pair.wronskian_drift < 1e-9);
    }

    #[test]
    fn second_solution_on_kneser_boundary() {
        // q = 1/(4t^2): y1 = t^(1/2), y2 = t^(1/2) ln(t/t0), and y1 < y2
        // eventually.
        let coeff = TowerElem::x().pow_int(-2).unwrap().scale(&q(1, 4));
        let ev = Evaluator::compile(&coeff).unwrap();
        let t0 = 10.0f64;
        let y0 = t0.sqrt();
        let y0p = 0.5 / t0.sqrt();
        let y1 = integrate(&ev, t0, 1e5, y0, y0p, 1e-10, 1e-13).unwrap();
        assert!(y1.zeros.is_empty());
        let y2 = second_solution(&y1).unwrap();
        let last1 = y1.samples.last().unwrap();
        let last2 = y2.samples.last().unwrap();
        let t = last1.t;
        assert!((last1.y - t.sqrt()).abs() < 1e-5 * t.sqrt());
        let expected = t.sqrt() * (t / t0).ln();
        assert!(
            (last2.y - expected).abs() < 1e-4 * expected.abs(),
            "{} vs {}",
            last2.y,
            expected
        );
        // principal ordering: the quadrature solution dominates
        assert!(last2.y > last1.y);
        let report = wronskian_check(&pair_from(y1, y2).unwrap());
        assert!(report.max_drift < 1e-6);
    }

    #[test]
    fn second_solution_rejects_vanishing_input() {
        let ev = Evaluator::compile(&TowerElem::one()).unwrap();
        let y1 = integrate(&ev, 1.0, 50.0, 1.0, 0.0, 1e-9, 1e-12).unwrap();
        assert!(matches!(
            second_solution(&y1),
            Err(NumericError::ZeroInRange { .. })
        ));
    }

    #[test]
    fn gronwall_bound_holds_for_quadratic_decay() {
        let coeff = TowerElem::x().pow_int(-2).unwrap().scale(&q(2, 1));
        let ev = Evaluator::compile(&coeff).unwrap();
        let traj = integrate(&ev, 1.0, 1e4, 0.7, -0.3, 1e-9, 1e-12).unwrap();
        assert!(gronwall_check(&ev, 2.0, &traj).unwrap());
    }

    #[test]
    fn gronwall_rejects_unbounded_hypothesis() {
        let ev = Evaluator::compile(&TowerElem::one()).unwrap();
        let traj = integrate(&ev, 1.0, 100.0, 1.0, 0.0, 1e-9, 1e-12).unwrap();
        assert!(matches!(
            gronwall_check(&ev, 2.0, &traj),
            Err(NumericError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn probe_trends() {
        let cfg = ProbeConfig::default();
        assert_eq!(
            numeric_oscillation_probe(&TowerElem::one(), &cfg).unwrap(),
            ProbeOutcome::OscillatingTrend
        );
        let kneser = TowerElem::x().pow_int(-2).unwrap().scale(&q(1, 4));
        assert_eq!(
            numeric_oscillation_probe(&kneser, &cfg).unwrap(),
            ProbeOutcome::QuiescentTrend
        );
        // (omega_0 + gamma_0^2)/4 = 1/(2x^2): slow oscillation, zeros land
        // through the extended window.
        let rw = TowerElem::x().pow_int(-2).unwrap().scale(&q(1, 2));
        let out = numeric_oscillation_probe(&rw, &cfg).unwrap();
        assert_ne!(out, ProbeOutcome::QuiescentTrend);
    }

    #[test]
    fn reduction_lowers_depth() {
        let deep = seq::omega_seq(5).scale(&q(1, 4));
        let (reduced, applied) = reduce_for_numerics(&deep).unwrap();
        assert_eq!(applied, 2);
        assert_eq!(reduced, seq::omega_seq(3).scale(&q(1, 4)));
        let (same, zero) = reduce_for_numerics(&TowerElem::one()).unwrap();
        assert_eq!(zero, 0);
        assert_eq!(same, TowerElem::one());
    }
}
