//! Window functions: exact piecewise polynomials (B-splines, characteristic
//! functions, user-supplied pieces) and Gaussians.
//!
//! Piecewise windows evaluate right-continuously: the value at a breakpoint
//! comes from the piece to its right, and the support is `[first, last)`.
//! That convention makes `chi:0,1` a well-defined partition of unity and
//! pins `bspline(1)` at `B1(-1/2) = 1`, `B1(1/2) = 0`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{Rational, RationalError};

/// Default sample budget for partition-of-unity checks. Exact windows add
/// piece-pinning samples on top, so this only controls the dyadic survey.
pub const DEFAULT_POU_SAMPLES: usize = 128;

/// Default deviation tolerance for numeric partition-of-unity checks.
pub const DEFAULT_POU_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum WindowError {
    #[error("need at least two breakpoints")]
    TooFewBreakpoints,
    #[error("breakpoints must be strictly increasing (got {left} then {right})")]
    BreakpointsNotIncreasing {
        left: Box<Rational>,
        right: Box<Rational>,
    },
    #[error("{pieces} pieces do not fit {breakpoints} breakpoints (need breakpoints - 1)")]
    PieceCountMismatch { breakpoints: usize, pieces: usize },
    #[error("exact evaluation is not available for a Gaussian window")]
    NotExact,
    #[error("spline order must be at least 1, got {0}")]
    BadSplineOrder(u32),
    #[error("Gaussian width must be positive and finite, got {0}")]
    BadWidth(f64),
    #[error("characteristic interval must satisfy a < b, got [{a}, {b})")]
    EmptyInterval {
        a: Box<Rational>,
        b: Box<Rational>,
    },
    #[error("unknown window spec '{spec}': {reason}; expected bspline:N, chi:a,b, gauss:width, or poly:file.json")]
    BadSpec { spec: String, reason: String },
    #[error("cannot read window file {path}: {source}")]
    FileRead {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid window file {path}: {reason}")]
    FileParse { path: String, reason: String },
    #[error("sample count must be at least 1")]
    BadSampleCount,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

// ---------------------------------------------------------------------------
// exact polynomial helpers (coefficients ascending, global coordinates; the
// zero polynomial is the empty vec)

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn poly_eval_f64(p: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_antiderivative(p: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(Rational::zero());
    for (i, c) in p.iter().enumerate() {
        out.push(c / &Rational::integer(i as i64 + 1));
    }
    poly_trim(out)
}

/// `p(x + s)` by Horner-style rebuilding.
fn poly_shift(p: &[Rational], s: &Rational) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for c in p.iter().rev() {
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (i, co) in out.iter().enumerate() {
            next[i + 1] = &next[i + 1] + co;
            next[i] = &next[i] + &(co * s);
        }
        if next.is_empty() {
            next.push(Rational::zero());
        }
        next[0] = &next[0] + c;
        out = next;
    }
    poly_trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let zero = Rational::zero();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero));
    }
    poly_trim(out)
}

// ---------------------------------------------------------------------------

/// Compactly supported window given by polynomial pieces between rational
/// breakpoints. Coefficients are in global coordinates, ascending degree.
#[derive(Clone)]
pub struct PiecewisePolyWindow {
    breakpoints: Vec<Rational>,
    pieces: Vec<Vec<Rational>>,
    // cached float images for the numeric path
    breakpoints_f: Vec<f64>,
    pieces_f: Vec<Vec<f64>>,
}

impl PiecewisePolyWindow {
    pub fn new(
        breakpoints: Vec<Rational>,
        pieces: Vec<Vec<Rational>>,
    ) -> Result<Self, WindowError> {
        if breakpoints.len() < 2 {
            return Err(WindowError::TooFewBreakpoints);
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(WindowError::PieceCountMismatch {
                breakpoints: breakpoints.len(),
                pieces: pieces.len(),
            });
        }
        for pair in breakpoints.windows(2) {
            if pair[0] >= pair[1] {
                return Err(WindowError::BreakpointsNotIncreasing {
                    left: Box::new(pair[0].clone()),
                    right: Box::new(pair[1].clone()),
                });
            }
        }
        let pieces: Vec<Vec<Rational>> = pieces.into_iter().map(poly_trim).collect();
        let breakpoints_f = breakpoints.iter().map(Rational::to_f64).collect();
        let pieces_f = pieces
            .iter()
            .map(|p| p.iter().map(Rational::to_f64).collect())
            .collect();
        Ok(PiecewisePolyWindow {
            breakpoints,
            pieces,
            breakpoints_f,
            pieces_f,
        })
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<Rational>] {
        &self.pieces
    }

    pub fn support(&self) -> (Rational, Rational) {
        (
            self.breakpoints[0].clone(),
            self.breakpoints[self.breakpoints.len() - 1].clone(),
        )
    }

    pub fn max_degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| p.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        let k = self.breakpoints.partition_point(|b| b <= x);
        if k == 0 || k == self.breakpoints.len() {
            return Rational::zero();
        }
        poly_eval(&self.pieces[k - 1], x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.breakpoints_f.partition_point(|b| *b <= x);
        if k == 0 || k == self.breakpoints_f.len() {
            return 0.0;
        }
        poly_eval_f64(&self.pieces_f[k - 1], x)
    }

    /// Exact continuity check: adjacent pieces agree at interior breakpoints
    /// and the window vanishes at both support ends.
    pub fn is_continuous(&self) -> bool {
        let n = self.pieces.len();
        if !poly_eval(&self.pieces[0], &self.breakpoints[0]).is_zero() {
            return false;
        }
        if !poly_eval(&self.pieces[n - 1], &self.breakpoints[n]).is_zero() {
            return false;
        }
        for i in 0..n - 1 {
            let b = &self.breakpoints[i + 1];
            if poly_eval(&self.pieces[i], b) != poly_eval(&self.pieces[i + 1], b) {
                return false;
            }
        }
        true
    }
}

/// One convolution with `chi[-1/2, 1/2)`: the antiderivative evaluated over a
/// sliding unit interval, `(g * B1)(x) = F(x + 1/2) - F(x - 1/2)`.
fn convolve_with_unit_box(w: &PiecewisePolyWindow) -> PiecewisePolyWindow {
    let n = w.pieces.len();
    // running antiderivative with F(first breakpoint) = 0
    let mut f_pieces: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut accum = Rational::zero();
    for i in 0..n {
        let raw = poly_antiderivative(&w.pieces[i]);
        let at_left = poly_eval(&raw, &w.breakpoints[i]);
        let offset = &accum - &at_left;
        let fi = poly_sub(&raw, &[-offset]);
        accum = poly_eval(&fi, &w.breakpoints[i + 1]);
        f_pieces.push(fi);
    }
    let total = accum;

    let half = Rational::frac(1, 2);
    let mut cut_set: BTreeSet<Rational> = BTreeSet::new();
    for b in &w.breakpoints {
        cut_set.insert(b - &half);
        cut_set.insert(b + &half);
    }
    let cuts: Vec<Rational> = cut_set.into_iter().collect();

    // polynomial of F(x + s) valid on an interval whose left end is `t`;
    // constant 0 left of the support and `total` right of it
    let piece_of_shifted = |s: &Rational, t: &Rational| -> Vec<Rational> {
        let y = t + s;
        if y < w.breakpoints[0] {
            return Vec::new();
        }
        if y >= w.breakpoints[n] {
            return vec![total.clone()];
        }
        let k = w.breakpoints.partition_point(|b| b <= &y) - 1;
        poly_shift(&f_pieces[k], s)
    };

    let minus_half = -&half;
    let mut pieces = Vec::with_capacity(cuts.len() - 1);
    for pair in cuts.windows(2) {
        let g1 = piece_of_shifted(&half, &pair[0]);
        let g2 = piece_of_shifted(&minus_half, &pair[0]);
        pieces.push(poly_sub(&g1, &g2));
    }
    PiecewisePolyWindow::new(cuts, pieces).expect("convolution breakpoints stay ordered")
}

/// Characteristic function of `[a, b)`.
#[derive(Clone)]
pub struct CharacteristicWindow {
    a: Rational,
    b: Rational,
    a_f: f64,
    b_f: f64,
}

impl CharacteristicWindow {
    pub fn new(a: Rational, b: Rational) -> Result<Self, WindowError> {
        if a >= b {
            return Err(WindowError::EmptyInterval {
                a: Box::new(a),
                b: Box::new(b),
            });
        }
        let a_f = a.to_f64();
        let b_f = b.to_f64();
        Ok(CharacteristicWindow { a, b, a_f, b_f })
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        if *x >= self.a && *x < self.b {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x >= self.a_f && x < self.b_f {
            1.0
        } else {
            0.0
        }
    }
}

/// Peak-normalized Gaussian `exp(-pi x^2 / width^2)`.
#[derive(Clone)]
pub struct GaussianWindow {
    width: f64,
}

impl GaussianWindow {
    pub fn new(width: f64) -> Result<Self, WindowError> {
        if !(width.is_finite() && width > 0.0) {
            return Err(WindowError::BadWidth(width));
        }
        Ok(GaussianWindow { width })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn eval(&self, x: f64) -> f64 {
        (-PI * x * x / (self.width * self.width)).exp()
    }

    /// Monotone upper bound on `|g|` outside `[-radius, radius]`.
    pub fn tail_bound(&self, radius: f64) -> f64 {
        (-PI * radius * radius / (self.width * self.width)).exp()
    }

    /// Radius that caps the summed tail of `g` over a one-dimensional grid of
    /// the given spacing at `tol / 2` (headroom for rounding in the main sum).
    /// Bound: points beyond R contribute at most
    /// `2 * exp(-pi R^2/w^2) / (1 - exp(-2 pi R spacing / w^2))`.
    pub(crate) fn truncation_radius(&self, spacing: f64, tol: f64) -> f64 {
        debug_assert!(spacing > 0.0 && tol > 0.0);
        let w2 = self.width * self.width;
        let mut r = self.width.max(spacing);
        loop {
            let rho = (-2.0 * PI * r * spacing / w2).exp();
            if 2.0 * self.tail_bound(r) / (1.0 - rho) <= tol * 0.5 {
                return r;
            }
            r *= 1.25;
        }
    }
}

#[derive(Clone)]
pub enum Window {
    PiecewisePoly(PiecewisePolyWindow),
    Characteristic(CharacteristicWindow),
    Gaussian(GaussianWindow),
}

impl Window {
    /// Centered cardinal B-spline of order `n`: `B1 = chi[-1/2,1/2)`,
    /// `Bn = B(n-1) * B1`. Support `[-n/2, n/2]`, degree `n - 1`.
    pub fn bspline(n: u32) -> Result<Window, WindowError> {
        if n == 0 {
            return Err(WindowError::BadSplineOrder(n));
        }
        let mut w = PiecewisePolyWindow::new(
            vec![Rational::frac(-1, 2), Rational::frac(1, 2)],
            vec![vec![Rational::one()]],
        )?;
        for _ in 1..n {
            w = convolve_with_unit_box(&w);
        }
        Ok(Window::PiecewisePoly(w))
    }

    pub fn characteristic(a: Rational, b: Rational) -> Result<Window, WindowError> {
        Ok(Window::Characteristic(CharacteristicWindow::new(a, b)?))
    }

    pub fn gaussian(width: f64) -> Result<Window, WindowError> {
        Ok(Window::Gaussian(GaussianWindow::new(width)?))
    }

    pub fn piecewise(
        breakpoints: Vec<Rational>,
        pieces: Vec<Vec<Rational>>,
    ) -> Result<Window, WindowError> {
        Ok(Window::PiecewisePoly(PiecewisePolyWindow::new(
            breakpoints,
            pieces,
        )?))
    }

    /// Parses CLI window specifiers: `bspline:N`, `chi:a,b`, `gauss:width`,
    /// `poly:file.json`.
    pub fn from_spec(spec: &str) -> Result<Window, WindowError> {
        let bad = |reason: &str| WindowError::BadSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| bad("missing ':' separator"))?;
        match kind {
            "bspline" => {
                let n: u32 = arg.parse().map_err(|_| bad("order must be an integer"))?;
                Window::bspline(n)
            }
            "chi" => {
                let (a, b) = arg
                    .split_once(',')
                    .ok_or_else(|| bad("expected chi:a,b with rational endpoints"))?;
                Window::characteristic(a.parse()?, b.parse()?)
            }
            "gauss" => {
                let width = match arg.parse::<Rational>() {
                    Ok(r) => r.to_f64(),
                    Err(_) => arg
                        .parse::<f64>()
                        .map_err(|_| bad("width must be a number"))?,
                };
                Window::gaussian(width)
            }
            "poly" => Window::from_poly_file(Path::new(arg)),
            other => Err(bad(&format!("unknown window kind '{other}'"))),
        }
    }

    /// Loads a piecewise polynomial window from JSON:
    /// `{"breakpoints": ["-1", "0", "1"], "pieces": [["1", "1"], ["1", "-1"]]}`
    /// with coefficients ascending in degree, in global coordinates.
    pub fn from_poly_file(path: &Path) -> Result<Window, WindowError> {
        #[derive(Deserialize)]
        struct PolyFile {
            breakpoints: Vec<String>,
            pieces: Vec<Vec<String>>,
        }
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| WindowError::FileRead {
            path: display.clone(),
            source,
        })?;
        let parsed: PolyFile =
            serde_json::from_str(&text).map_err(|e| WindowError::FileParse {
                path: display.clone(),
                reason: e.to_string(),
            })?;
        let fail = |reason: String| WindowError::FileParse {
            path: display.clone(),
            reason,
        };
        let breakpoints = parsed
            .breakpoints
            .iter()
            .map(|s| s.parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| fail(e.to_string()))?;
        let pieces = parsed
            .pieces
            .iter()
            .map(|p| p.iter().map(|s| s.parse::<Rational>()).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()
            .map_err(|e| fail(e.to_string()))?;
        Window::piecewise(breakpoints, pieces)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Window::PiecewisePoly(w) => w.eval(x),
            Window::Characteristic(w) => w.eval(x),
            Window::Gaussian(w) => w.eval(x),
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Result<Rational, WindowError> {
        match self {
            Window::PiecewisePoly(w) => Ok(w.eval_exact(x)),
            Window::Characteristic(w) => Ok(w.eval_exact(x)),
            Window::Gaussian(_) => Err(WindowError::NotExact),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Window::Gaussian(_))
    }

    pub fn support(&self) -> Option<(Rational, Rational)> {
        match self {
            Window::PiecewisePoly(w) => Some(w.support()),
            Window::Characteristic(w) => Some((w.a.clone(), w.b.clone())),
            Window::Gaussian(_) => None,
        }
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        match self {
            Window::PiecewisePoly(w) => w.breakpoints.clone(),
            Window::Characteristic(w) => vec![w.a.clone(), w.b.clone()],
            Window::Gaussian(_) => Vec::new(),
        }
    }

    pub fn max_degree(&self) -> usize {
        match self {
            Window::PiecewisePoly(w) => w.max_degree(),
            Window::Characteristic(_) => 0,
            Window::Gaussian(_) => 0,
        }
    }

    pub fn is_continuous(&self) -> bool {
        match self {
            Window::PiecewisePoly(w) => w.is_continuous(),
            Window::Characteristic(_) => false,
            Window::Gaussian(_) => true,
        }
    }

    /// Whether the window is known to satisfy the smoothness hypothesis the
    /// rank criterion needs (membership in the Feichtinger algebra).
    /// Continuous compactly supported piecewise polynomials and Gaussians
    /// qualify; jump discontinuities (`chi`, `bspline:1`) do not, and rank
    /// verdicts for those are heuristic.
    pub fn known_m1(&self) -> bool {
        match self {
            Window::PiecewisePoly(w) => w.is_continuous(),
            Window::Characteristic(_) => false,
            Window::Gaussian(_) => true,
        }
    }

    pub(crate) fn gaussian_params(&self) -> Option<&GaussianWindow> {
        match self {
            Window::Gaussian(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::PiecewisePoly(w) => {
                let (lo, hi) = w.support();
                write!(f, "piecewise-poly[{lo},{hi}) with {} pieces", w.pieces.len())
            }
            Window::Characteristic(w) => write!(f, "chi[{},{})", w.a, w.b),
            Window::Gaussian(w) => write!(f, "gauss(width={})", w.width),
        }
    }
}

// ---------------------------------------------------------------------------
// partition of unity

/// Result of checking `sum_s g(x - s) = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct PouReport {
    pub holds: bool,
    /// True when the check ran in exact arithmetic with enough samples to pin
    /// every polynomial piece of the periodization; `holds` is then a proof
    /// rather than a sample survey.
    pub exact: bool,
    pub max_deviation: f64,
    /// Worst sample point when the check fails.
    pub witness: Option<PouWitness>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PouWitness {
    Exact(Rational),
    Real(f64),
}

impl fmt::Display for PouWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PouWitness::Exact(x) => write!(f, "{x}"),
            PouWitness::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Base-2 van der Corput point `k`, an exact dyadic rational in `(0, 1)`.
fn van_der_corput(k: u64) -> Rational {
    let mut n = k as u128;
    let mut num: u128 = 0;
    let mut den: u128 = 1;
    while n > 0 {
        num = num * 2 + (n & 1);
        den *= 2;
        n >>= 1;
    }
    Rational::new(BigInt::from(num), BigInt::from(den)).expect("dyadic denominator nonzero")
}

/// Exact periodization `sum_s g(x - s)` over integer shifts.
pub(crate) fn periodize_exact(g: &Window, x: &Rational) -> Result<Rational, WindowError> {
    let (lo, hi) = g.support().ok_or(WindowError::NotExact)?;
    // x - s in [lo, hi); the hi endpoint evaluates to zero anyway
    let mut s: BigInt = (x - &hi).floor_int() + 1;
    let s_max = (x - &lo).floor_int();
    let mut sum = Rational::zero();
    while s <= s_max {
        let arg = x - &Rational::integer(s.clone());
        sum = &sum + &g.eval_exact(&arg)?;
        s += 1;
    }
    Ok(sum)
}

fn periodize_gaussian(g: &GaussianWindow, x: f64, trunc_tol: f64) -> f64 {
    let radius = g.truncation_radius(1.0, trunc_tol);
    let s_min = (x - radius).floor() as i64;
    let s_max = (x + radius).ceil() as i64;
    let mut sum = 0.0;
    for s in s_min..=s_max {
        sum += g.eval(x - s as f64);
    }
    sum
}

/// Checks whether integer translates of `g` sum to one everywhere.
///
/// Exact windows: deterministic dyadic samples plus all folded breakpoints
/// plus `degree + 1` pins per polynomial piece of the periodization, all
/// compared to 1 in rational arithmetic; `tol` is ignored and a pass is a
/// proof. Gaussian windows: float samples with the periodization truncated
/// two orders below `tol`.
pub fn check_partition_of_unity(
    g: &Window,
    sample_count: usize,
    tol: f64,
) -> Result<PouReport, WindowError> {
    if sample_count == 0 {
        return Err(WindowError::BadSampleCount);
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(WindowError::BadTolerance(tol));
    }
    if g.is_exact() {
        check_pou_exact(g, sample_count)
    } else {
        let gauss = g.gaussian_params().expect("non-exact windows are Gaussian");
        Ok(check_pou_gaussian(gauss, sample_count, tol))
    }
}

fn check_pou_exact(g: &Window, sample_count: usize) -> Result<PouReport, WindowError> {
    let one = Rational::one();
    let degree = g.max_degree();
    let mut samples: BTreeSet<Rational> = BTreeSet::new();
    for k in 1..=sample_count as u64 {
        samples.insert(van_der_corput(k));
    }
    // cut [0,1) at every folded breakpoint; the periodization is a single
    // polynomial of degree <= `degree` on each segment, so degree + 1
    // samples per segment decide it completely
    let mut cut_set: BTreeSet<Rational> = BTreeSet::new();
    cut_set.insert(Rational::zero());
    for b in g.breakpoints() {
        cut_set.insert(b.mod_floor(&one));
    }
    let cuts: Vec<Rational> = cut_set.into_iter().collect();
    let pins = degree as i64 + 1;
    for (i, left) in cuts.iter().enumerate() {
        let right = cuts.get(i + 1).cloned().unwrap_or_else(Rational::one);
        let width = &right - left;
        for u in 0..pins {
            samples.insert(left + &(&width * &Rational::frac(u, pins + 1)));
        }
    }

    let mut worst: Option<(Rational, Rational)> = None; // (|dev|, x)
    for x in &samples {
        let dev = &periodize_exact(g, x)? - &one;
        let mag = dev.abs();
        if worst.as_ref().is_none_or(|(m, _)| mag > *m) {
            worst = Some((mag, x.clone()));
        }
    }
    let (mag, at) = worst.expect("at least one sample");
    let holds = mag.is_zero();
    Ok(PouReport {
        holds,
        exact: true,
        max_deviation: mag.to_f64(),
        witness: (!holds).then_some(PouWitness::Exact(at)),
    })
}

fn check_pou_gaussian(g: &GaussianWindow, sample_count: usize, tol: f64) -> PouReport {
    let trunc_tol = tol * 1e-2;
    let mut worst = (0.0f64, 0.0f64); // (|dev|, x)
    for k in 1..=sample_count as u64 {
        let x = van_der_corput(k).to_f64();
        let dev = (periodize_gaussian(g, x, trunc_tol) - 1.0).abs();
        if dev > worst.0 {
            worst = (dev, x);
        }
    }
    let holds = worst.0 <= tol;
    PouReport {
        holds,
        exact: false,
        max_deviation: worst.0,
        witness: (!holds).then_some(PouWitness::Real(worst.1)),
    }
}
