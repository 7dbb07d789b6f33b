//! Embedded Dormand-Prince 5(4) stepper with PI step-size control.

use crate::error::NumericError;

// Butcher tableau (FSAL: the last stage is the derivative at the new point).
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights coincide with the last tableau row (FSAL).
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const MAX_GROW: f64 = 10.0;
const MAX_SHRINK: f64 = 0.2;
const MAX_STEPS: u64 = 100_000_000;

/// One accepted step with endpoint derivatives, enough for cubic Hermite
/// interpolation inside the interval.
#[derive(Debug, Clone)]
pub struct StepRecord<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub d0: [f64; N],
    pub d1: [f64; N],
}

impl<const N: usize> StepRecord<N> {
    /// Cubic Hermite value of component `i` at `t` inside `[t0, t1]`.
    pub fn interpolate(&self, i: usize, t: f64) -> f64 {
        let h = self.t1 - self.t0;
        let s = (t - self.t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.y0[i]
            + (s3 - 2.0 * s2 + s) * h * self.d0[i]
            + (-2.0 * s3 + 3.0 * s2) * self.y1[i]
            + (s3 - s2) * h * self.d1[i]
    }
}

/// Adaptive integrator for `y' = f(t, y)` marching from `t0` to `t_end`.
pub struct Rk45<'a, const N: usize> {
    f: &'a dyn Fn(f64, &[f64; N]) -> [f64; N],
    pub t: f64,
    pub y: [f64; N],
    dy: [f64; N],
    h: f64,
    rtol: f64,
    atol: f64,
    err_old: f64,
    steps: u64,
}

impl<'a, const N: usize> Rk45<'a, N> {
    pub fn new(
        f: &'a dyn Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        rtol: f64,
        atol: f64,
    ) -> Result<Self, NumericError> {
        if !rtol.is_finite() || rtol <= 0.0 || !atol.is_finite() || atol <= 0.0 {
            return Err(NumericError::DomainError(
                "tolerances must be positive".into(),
            ));
        }
        if !t_end.is_finite() || t_end <= t0 {
            return Err(NumericError::DomainError(
                "integration window must be nonempty".into(),
            ));
        }
        let dy = f(t0, &y0);
        if !dy.iter().all(|v| v.is_finite()) {
            return Err(NumericError::DomainError(format!(
                "right-hand side not finite at t = {}",
                t0
            )));
        }
        let h = initial_step(f, t0, &y0, &dy, t_end, rtol, atol);
        Ok(Rk45 {
            f,
            t: t0,
            y: y0,
            dy,
            h,
            rtol,
            atol,
            err_old: 1.0e-4,
            steps: 0,
        })
    }

    pub fn done(&self, t_end: f64) -> bool {
        self.t >= t_end
    }

    /// Advances by one accepted step, never past `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<StepRecord<N>, NumericError> {
        let mut k = [[0.0; N]; 7];
        loop {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return Err(NumericError::DomainError(format!(
                    "step budget exhausted at t = {}",
                    self.t
                )));
            }
            let h_floor = 1e-14 * self.t.abs().max(1.0);
            if self.h < h_floor {
                return Err(NumericError::StepSizeUnderflow { t: self.t });
            }
            let h = self.h.min(t_end - self.t);

            k[0] = self.dy;
            for s in 1..7 {
                let mut ys = self.y;
                for (i, y) in ys.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    *y += h * acc;
                }
                k[s] = (self.f)(self.t + C[s] * h, &ys);
            }

            let mut y_new = self.y;
            for (i, y) in y_new.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    acc += B[j] * kj[i];
                }
                *y += h * acc;
            }

            if !y_new.iter().all(|v| v.is_finite()) {
                return Err(NumericError::DomainError(format!(
                    "solution not finite near t = {}",
                    self.t
                )));
            }

            let mut err = 0.0;
            for i in 0..N {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let sc = self.atol + self.rtol * self.y[i].abs().max(y_new[i].abs());
                let r = h * e / sc;
                err += r * r;
            }
            err = (err / N as f64).sqrt();

            if err <= 1.0 {
                let record = StepRecord {
                    t0: self.t,
                    t1: self.t + h,
                    y0: self.y,
                    y1: y_new,
                    d0: k[0],
                    d1: k[6],
                };
                self.t += h;
                self.y = y_new;
                self.dy = k[6];
                // PI controller (accepted step).
                let err = err.max(1.0e-10);
                let fac = err.powf(EXPO1) / self.err_old.powf(BETA) / SAFETY;
                let fac = fac.clamp(1.0 / MAX_GROW, 1.0 / MAX_SHRINK);
                self.h = h / fac;
                self.err_old = err.max(1.0e-4);
                return Ok(record);
            }
            // Rejected: shrink without touching the error memory.
            let fac = (err.powf(EXPO1) / SAFETY).clamp(1.0, 1.0 / MAX_SHRINK);
            self.h = h / fac;
        }
    }
}

fn norm_scaled<const N: usize>(v: &[f64; N], y: &[f64; N], rtol: f64, atol: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let sc = atol + rtol * y[i].abs();
        let r = v[i] / sc;
        s += r * r;
    }
    (s / N as f64).sqrt()
}

/// Standard starting-step heuristic: balance the initial value against the
/// initial slope, then refine with one Euler probe of the curvature.
fn initial_step<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: &[f64; N],
    dy0: &[f64; N],
    t_end: f64,
    rtol: f64,
    atol: f64,
) -> f64 {
    let span = t_end - t0;
    let d0 = norm_scaled(y0, y0, rtol, atol);
    let d1 = norm_scaled(dy0, y0, rtol, atol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span.max(1.0)
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let mut y1 = *y0;
    for i in 0..N {
        y1[i] += h0 * dy0[i];
    }
    let dy1 = f(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = dy1[i] - dy0[i];
    }
    let d2 = norm_scaled(&diff, y0, rtol, atol) / h0;
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dmax).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_exponential_decay() {
        let f = |_t: f64, y: &[f64; 1]| [-y[0]];
        let mut rk = Rk45::new(&f, 0.0, [1.0], 5.0, 1e-10, 1e-12).unwrap();
        while !rk.done(5.0) {
            rk.step(5.0).unwrap();
        }
        assert!((rk.y[0] - (-5.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn integrates_harmonic_oscillator() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let t_end = 10.0 * std::f64::consts::PI;
        let mut rk = Rk45::new(&f, 0.0, [1.0, 0.0], t_end, 1e-10, 1e-12).unwrap();
        while !rk.done(t_end) {
            rk.step(t_end).unwrap();
        }
        assert!((rk.y[0] - 1.0).abs() < 1e-7);
        assert!(rk.y[1].abs() < 1e-7);
    }

    #[test]
    fn hermite_interpolation_matches_endpoints() {
        let rec = StepRecord {
            t0: 1.0,
            t1: 2.0,
            y0: [3.0],
            y1: [5.0],
            d0: [1.0],
            d1: [2.0],
        };
        assert!((rec.interpolate(0, 1.0) - 3.0).abs() < 1e-14);
        assert!((rec.interpolate(0, 2.0) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_windows() {
        let f = |_t: f64, y: &[f64; 1]| [-y[0]];
        assert!(Rk45::new(&f, 1.0, [1.0], 1.0, 1e-9, 1e-12).is_err());
        assert!(Rk45::new(&f, 0.0, [1.0], 1.0, -1e-9, 1e-12).is_err());
    }
}
