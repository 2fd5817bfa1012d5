//! Zak transform `Z_a g(x, xi) = sum_r g(x - a r) exp(2 pi i r xi)`.
//!
//! Two evaluation paths share the same sum: a float path for arbitrary
//! `(x, xi)`, and an exact rational path restricted to `xi = 0`, where the
//! transform degenerates to the periodization of `g` over `a Z` and exact
//! windows admit exact summation. The exact path is what turns kernel
//! residual checks into proofs.

use num_complex::Complex64;
use thiserror::Error;

use crate::rational::Rational;
use crate::windows::{Window, WindowError};

#[derive(Debug, Error)]
pub enum ZakError {
    #[error("step must be positive, got {0}")]
    StepNotPositive(Rational),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("frequency must be finite, got {0}")]
    BadFrequency(f64),
    #[error("coordinate must be finite, got {0}")]
    BadCoordinate(f64),
    #[error("exact evaluation needs a compactly supported exact window")]
    ExactNeedsCompactSupport,
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Time coordinate: exact rational (scan lattices, certificates) or float
/// (random spot checks). The float path rounds exact coordinates once.
#[derive(Debug, Clone)]
pub enum XCoord {
    Exact(Rational),
    Real(f64),
}

impl XCoord {
    pub fn to_f64(&self) -> f64 {
        match self {
            XCoord::Exact(r) => r.to_f64(),
            XCoord::Real(v) => *v,
        }
    }
}

impl std::fmt::Display for XCoord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XCoord::Exact(r) => write!(f, "{r}"),
            XCoord::Real(v) => write!(f, "{v}"),
        }
    }
}

/// Point of evaluation with the frequency reduced into `[0, 1)`; the
/// transform is 1-periodic in `xi`, so the reduction loses nothing.
#[derive(Debug, Clone)]
pub struct EvaluationPoint {
    x: XCoord,
    xi: f64,
}

impl EvaluationPoint {
    pub fn new(x: XCoord, xi: f64) -> Result<Self, ZakError> {
        if !xi.is_finite() {
            return Err(ZakError::BadFrequency(xi));
        }
        if let XCoord::Real(v) = x {
            if !v.is_finite() {
                return Err(ZakError::BadCoordinate(v));
            }
        }
        Ok(EvaluationPoint {
            x,
            xi: xi.rem_euclid(1.0),
        })
    }

    pub fn exact(x: Rational, xi: f64) -> Result<Self, ZakError> {
        Self::new(XCoord::Exact(x), xi)
    }

    pub fn real(x: f64, xi: f64) -> Result<Self, ZakError> {
        Self::new(XCoord::Real(x), xi)
    }

    pub fn x(&self) -> &XCoord {
        &self.x
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }
}

fn check_step(step: &Rational) -> Result<(), ZakError> {
    if !step.is_positive() {
        return Err(ZakError::StepNotPositive(step.clone()));
    }
    Ok(())
}

/// Shift range `[r_min, r_max]` covering all nonzero terms of the sum for a
/// window supported on `[lo, hi)`, widened by one to absorb rounding of the
/// endpoints (out-of-support terms evaluate to zero).
fn support_shift_range(lo: f64, hi: f64, step: f64, x: f64) -> (i64, i64) {
    let r_min = ((x - hi) / step).floor() as i64 - 1;
    let r_max = ((x - lo) / step).ceil() as i64 + 1;
    (r_min, r_max)
}

fn zak_sum(g: &Window, step: f64, x: f64, xi: f64, r_min: i64, r_max: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for r in r_min..=r_max {
        let v = g.eval(x - step * r as f64);
        if v != 0.0 {
            acc += v * Complex64::from_polar(1.0, std::f64::consts::TAU * r as f64 * xi);
        }
    }
    acc
}

/// Reusable evaluation plan: support bounds (or Gaussian truncation radius)
/// and the float step are resolved once, then each point costs only the
/// finite sum. Matrix builders evaluate thousands of points per lattice.
pub(crate) struct ZakEvaluator<'a> {
    g: &'a Window,
    step_f: f64,
    lo: f64,
    hi: f64,
}

impl<'a> ZakEvaluator<'a> {
    pub(crate) fn new(g: &'a Window, step: &Rational, tol: f64) -> Result<Self, ZakError> {
        check_step(step)?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(ZakError::BadTolerance(tol));
        }
        let step_f = step.to_f64();
        let (lo, hi) = match g.support() {
            Some((lo, hi)) => (lo.to_f64(), hi.to_f64()),
            None => {
                let gauss = g.gaussian_params().expect("unsupported window is Gaussian");
                let radius = gauss.truncation_radius(step_f, tol);
                (-radius, radius)
            }
        };
        Ok(ZakEvaluator { g, step_f, lo, hi })
    }

    pub(crate) fn eval(&self, x: f64, xi: f64) -> Complex64 {
        let (r_min, r_max) = support_shift_range(self.lo, self.hi, self.step_f, x);
        zak_sum(self.g, self.step_f, x, xi, r_min, r_max)
    }
}

/// Evaluates the transform with time step `step` at one point.
///
/// Compact windows sum exactly the shifts meeting the support and ignore
/// `tol`; Gaussian windows truncate so the discarded tail stays below
/// `tol / 2` in absolute value.
pub fn zak(
    g: &Window,
    step: &Rational,
    point: &EvaluationPoint,
    tol: f64,
) -> Result<Complex64, ZakError> {
    let eval = ZakEvaluator::new(g, step, tol)?;
    Ok(eval.eval(point.x.to_f64(), point.xi))
}

/// Exact periodization `sum_r g(x - step r)` — the transform at `xi = 0` —
/// in rational arithmetic. Requires an exact, compactly supported window.
pub fn zak_exact(g: &Window, step: &Rational, x: &Rational) -> Result<Rational, ZakError> {
    check_step(step)?;
    let (lo, hi) = g.support().ok_or(ZakError::ExactNeedsCompactSupport)?;
    if !g.is_exact() {
        return Err(ZakError::ExactNeedsCompactSupport);
    }
    // x - step * r in [lo, hi]; boundary terms evaluate to zero harmlessly
    let r_lo = (&(x - &hi) / step).ceil_int();
    let r_hi = (&(x - &lo) / step).floor_int();
    let mut sum = Rational::zero();
    let mut r = r_lo;
    while r <= r_hi {
        let arg = x - &(step * &Rational::integer(r.clone()));
        sum = &sum + &g.eval_exact(&arg)?;
        r += 1;
    }
    Ok(sum)
}
