//! The p x q matrix of Zak samples whose rank decides the frame property.
//!
//! For a lattice with density `alpha beta = p/q` in lowest terms, the entry
//! at row `k`, column `l` is the Zak transform with step `alpha q` evaluated
//! at `(x + alpha l + k/beta, xi)`. The row offset identity
//! `k/beta = (alpha q) k / p` keeps every offset inside one period of the
//! quasi-periodicity, so `(x, xi)` ranges over `[0, alpha q) x [0, 1)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::rational::{density_fraction, Rational, RationalError};
use crate::windows::{Window, WindowError};
use crate::zak::{zak_exact, EvaluationPoint, ZakError, ZakEvaluator};

/// Matrices stay desk-scale; a denominator explosion in the density fraction
/// is better rejected than silently chewed on.
const MAX_RANK_DIMENSION: usize = 10_000;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: Rational },
    #[error("density p/q = {p}/{q} exceeds 1; more rows than columns means no frame and no rank test")]
    AboveCriticalDensity { p: usize, q: usize },
    #[error("density fraction {p}/{q} exceeds the supported matrix size {limit}")]
    TooLarge { p: String, q: String, limit: usize },
    #[error(transparent)]
    Zak(#[from] ZakError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Lattice constants shared by every evaluation: the pair `(alpha, beta)`,
/// the reduced density fraction `p/q`, and the Zak step `alpha q`.
#[derive(Debug, Clone)]
pub struct LatticeParams {
    alpha: Rational,
    beta: Rational,
    p: usize,
    q: usize,
    zak_period: Rational,
}

impl LatticeParams {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self, LatticeError> {
        for (name, value) in [("alpha", &alpha), ("beta", &beta)] {
            if !value.is_positive() {
                return Err(LatticeError::NotPositive {
                    name,
                    value: value.clone(),
                });
            }
        }
        let dens = density_fraction(&alpha, &beta)?;
        let limit = num_bigint::BigInt::from(MAX_RANK_DIMENSION);
        if dens.p > limit || dens.q > limit {
            return Err(LatticeError::TooLarge {
                p: dens.p.to_string(),
                q: dens.q.to_string(),
                limit: MAX_RANK_DIMENSION,
            });
        }
        let p = usize::try_from(&dens.p).expect("bounded by limit");
        let q = usize::try_from(&dens.q).expect("bounded by limit");
        let zak_period = &alpha * &Rational::integer(q as i64);
        Ok(LatticeParams {
            alpha,
            beta,
            p,
            q,
            zak_period,
        })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Numerator of the reduced density `alpha beta = p/q`: row count.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Denominator of the reduced density: column count.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Zak step `alpha q`, the x-period of the matrix family.
    pub fn zak_period(&self) -> &Rational {
        &self.zak_period
    }

    pub fn is_subcritical(&self) -> bool {
        self.p <= self.q
    }

    /// Row offset `k / beta`.
    pub fn row_offset(&self, k: usize) -> Rational {
        &Rational::integer(k as i64) / &self.beta
    }

    /// Column offset `alpha l`.
    pub fn col_offset(&self, l: usize) -> Rational {
        &self.alpha * &Rational::integer(l as i64)
    }

    fn ensure_subcritical(&self) -> Result<(), LatticeError> {
        if !self.is_subcritical() {
            return Err(LatticeError::AboveCriticalDensity {
                p: self.p,
                q: self.q,
            });
        }
        Ok(())
    }
}

/// Complex sample matrix at one `(x, xi)`, row-major `p x q`.
#[derive(Debug, Clone)]
pub struct PMatrix {
    entries: Vec<Complex64>,
    p: usize,
    q: usize,
}

impl PMatrix {
    #[cfg(test)]
    pub(crate) fn from_entries(entries: Vec<Complex64>, p: usize, q: usize) -> Self {
        assert_eq!(entries.len(), p * q, "entry count must be p * q");
        PMatrix { entries, p, q }
    }

    pub fn rows(&self) -> usize {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.q
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        self.entries[k * self.q + l]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix-vector product with a real vector of length `q`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.q, "vector length must match column count");
        (0..self.p)
            .map(|k| {
                (0..self.q)
                    .map(|l| self.entry(k, l) * v[l])
                    .sum::<Complex64>()
            })
            .collect()
    }
}

/// Exact rational sample matrix at `(x, 0)` for exact windows: the whole
/// matrix is real and every entry is a finite rational periodization.
#[derive(Debug, Clone)]
pub struct RationalPMatrix {
    entries: Vec<Rational>,
    p: usize,
    q: usize,
}

impl RationalPMatrix {
    #[cfg(test)]
    pub(crate) fn from_entries(entries: Vec<Rational>, p: usize, q: usize) -> Self {
        assert_eq!(entries.len(), p * q, "entry count must be p * q");
        RationalPMatrix { entries, p, q }
    }

    pub fn rows(&self) -> usize {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.q
    }

    pub fn entry(&self, k: usize, l: usize) -> &Rational {
        &self.entries[k * self.q + l]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.q, "vector length must match column count");
        (0..self.p)
            .map(|k| {
                let mut acc = Rational::zero();
                for (l, component) in v.iter().enumerate() {
                    if !component.is_zero() {
                        acc = &acc + &(self.entry(k, l) * component);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Builds the sample matrix at one point. Offsets are accumulated exactly
/// and rounded once per entry; the Zak sums then run in floats.
pub fn build_p(
    g: &Window,
    params: &LatticeParams,
    point: &EvaluationPoint,
    tol: f64,
) -> Result<PMatrix, LatticeError> {
    params.ensure_subcritical()?;
    let eval = ZakEvaluator::new(g, params.zak_period(), tol)?;
    let x = point.x().to_f64();
    let xi = point.xi();
    let mut offsets = Vec::with_capacity(params.p * params.q);
    for k in 0..params.p {
        let row = params.row_offset(k);
        for l in 0..params.q {
            offsets.push((&row + &params.col_offset(l)).to_f64());
        }
    }
    let entries = offsets.iter().map(|off| eval.eval(x + off, xi)).collect();
    Ok(PMatrix {
        entries,
        p: params.p,
        q: params.q,
    })
}

/// Builds the matrix at `(x, 0)` in exact arithmetic. Only meaningful for
/// exact compactly supported windows; the zero-frequency slice is where the
/// kernel certificates operate.
pub fn build_p_exact(
    g: &Window,
    params: &LatticeParams,
    x: &Rational,
) -> Result<RationalPMatrix, LatticeError> {
    params.ensure_subcritical()?;
    let period = params.zak_period();
    let mut entries = Vec::with_capacity(params.p * params.q);
    for k in 0..params.p {
        let row = params.row_offset(k);
        for l in 0..params.q {
            let arg = &(x + &row) + &params.col_offset(l);
            entries.push(zak_exact(g, period, &arg)?);
        }
    }
    Ok(RationalPMatrix {
        entries,
        p: params.p,
        q: params.q,
    })
}
