//! Constructive non-frame certificates for partition-of-unity windows.
//!
//! Two mechanisms share a hypothesis (integer translates of the window sum
//! to one) and a conclusion (the sample matrix loses rank on the whole
//! zero-frequency line, so the lattice generates no frame):
//!
//! * the `(m, n, r, j)` family: on lattices `alpha = 1/m`,
//!   `beta = n + j/r` satisfying a strict double inequality and a
//!   coprimality condition, explicit 0/1 kernel vectors force
//!   `rank P(x, 0) <= (r-1)m + 1 < p` for every x;
//! * integer `beta >= 2`, any `alpha`: a classical exclusion retained as a
//!   separate predicate because it needs no inequality bookkeeping.
//!
//! Certificates are verified, not trusted: `verify_certificate_exact` runs
//! the whole argument in rational arithmetic and its residuals must be
//! exactly zero.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::pmatrix::{build_p, build_p_exact, LatticeError, LatticeParams};
use crate::ranktest::{exact_rank, numeric_rank, singular_values};
use crate::rational::Rational;
use crate::windows::{
    check_partition_of_unity, PouReport, Window, WindowError, DEFAULT_POU_SAMPLES,
    DEFAULT_POU_TOL,
};
use crate::zak::EvaluationPoint;

/// Zak truncation tolerance for float certificate checks; compact windows
/// ignore it, and inexact windows never get this far.
const CERT_ZAK_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ObstructionError {
    #[error("m, n, r must all be at least 1, got m={m}, n={n}, r={r}")]
    ShapeNotPositive { m: u32, n: u32, r: u32 },
    #[error("j must satisfy 1 <= j <= r-1, got j={j} with r={r}")]
    JOutOfRange { j: u32, r: u32 },
    #[error("params {params} are not admissible: {reason}")]
    NotAdmissible {
        params: PropTwoParams,
        reason: String,
    },
    #[error("window is not a partition of unity (max deviation {max_deviation:.3e}); certificate hypothesis violated")]
    PartitionOfUnityFails { max_deviation: f64 },
    #[error("partition of unity holds only numerically for this window; exact certification refused")]
    PartitionNotProvable,
    #[error("coordinate must be finite, got {0}")]
    BadCoordinate(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Parameter quadruple of the kernel-vector obstruction. `m` is the inverse
/// time step, `n + j/r` the frequency step; validation enforces shape only,
/// admissibility is a separate question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PropTwoParams {
    m: u32,
    n: u32,
    r: u32,
    j: u32,
}

impl PropTwoParams {
    pub fn new(m: u32, n: u32, r: u32, j: u32) -> Result<Self, ObstructionError> {
        if m == 0 || n == 0 || r == 0 {
            return Err(ObstructionError::ShapeNotPositive { m, n, r });
        }
        if j == 0 || j >= r {
            return Err(ObstructionError::JOutOfRange { j, r });
        }
        Ok(PropTwoParams { m, n, r, j })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// Density numerator `rn + j`: the row count of the sample matrix.
    pub fn p(&self) -> usize {
        (u64::from(self.r) * u64::from(self.n) + u64::from(self.j)) as usize
    }

    /// Density denominator `rm`: the column count.
    pub fn q(&self) -> usize {
        (u64::from(self.r) * u64::from(self.m)) as usize
    }

    /// Certified rank ceiling `(r-1)m + 1`.
    pub fn rank_bound(&self) -> usize {
        ((u64::from(self.r) - 1) * u64::from(self.m) + 1) as usize
    }

    pub fn is_admissible(&self) -> bool {
        prop2_applies(self).admissible
    }
}

impl fmt::Display for PropTwoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(m={}, n={}, r={}, j={})",
            self.m, self.n, self.r, self.j
        )
    }
}

/// Outcome of the admissibility test, with both conditions reported
/// separately so a failure names its cause.
#[derive(Debug, Clone, Serialize)]
pub struct Admissibility {
    /// Strict double inequality `(r-1)m + 1 < rn + j < rm`.
    pub inequality_ok: bool,
    /// `gcd(rn + j, rm) = 1`; without it the density fraction collapses and
    /// the kernel construction loses its indexing.
    pub coprime_ok: bool,
    pub admissible: bool,
    pub p: usize,
    pub q: usize,
    /// Column count after reducing p/q; differs from `q` exactly when
    /// coprimality fails.
    pub reduced_q: usize,
    pub rank_bound: usize,
}

impl Admissibility {
    fn failure_reason(&self) -> String {
        if !self.inequality_ok {
            format!(
                "needs {} < {} < {} strictly",
                self.rank_bound, self.p, self.q
            )
        } else {
            format!(
                "{} and {} share a factor; the density fraction reduces to denominator {}",
                self.p, self.q, self.reduced_q
            )
        }
    }
}

/// Tests the strict double inequality and the coprimality condition.
pub fn prop2_applies(params: &PropTwoParams) -> Admissibility {
    let p = params.p() as u64;
    let q = params.q() as u64;
    let rank_bound = params.rank_bound() as u64;
    let inequality_ok = rank_bound < p && p < q;
    let d = p.gcd(&q);
    let coprime_ok = d == 1;
    Admissibility {
        inequality_ok,
        coprime_ok,
        admissible: inequality_ok && coprime_ok,
        p: p as usize,
        q: q as usize,
        reduced_q: (q / d) as usize,
        rank_bound: rank_bound as usize,
    }
}

fn require_admissible(params: &PropTwoParams) -> Result<(), ObstructionError> {
    let adm = prop2_applies(params);
    if adm.admissible {
        Ok(())
    } else {
        Err(ObstructionError::NotAdmissible {
            params: *params,
            reason: adm.failure_reason(),
        })
    }
}

/// The lattice an admissible quadruple excludes: `(1/m, n + j/r)`.
pub fn lattice_of(params: &PropTwoParams) -> Result<(Rational, Rational), ObstructionError> {
    require_admissible(params)?;
    let alpha = Rational::new(1, i64::from(params.m)).expect("m >= 1");
    let beta = &Rational::integer(i64::from(params.n))
        + &Rational::new(i64::from(params.j), i64::from(params.r)).expect("r >= 2");
    Ok((alpha, beta))
}

/// Kernel data extracted from an admissible quadruple: purely combinatorial,
/// no window involved.
#[derive(Debug, Clone, Serialize)]
pub struct KernelCertificate {
    params: PropTwoParams,
    vectors: Vec<Vec<Rational>>,
    image: Vec<Rational>,
    basis: Vec<Vec<Rational>>,
    rank_bound: usize,
}

impl KernelCertificate {
    pub fn params(&self) -> &PropTwoParams {
        &self.params
    }

    /// The m vectors `v_l` in `Q^q`, ones at `l, l+m, ..., l+(r-1)m`.
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Common image of every `v_l` under the zero-frequency matrix: the
    /// all-ones vector in `Q^p`.
    pub fn image(&self) -> &[Rational] {
        &self.image
    }

    /// The m - 1 kernel vectors `v_0 - v_l`.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn rank_bound(&self) -> usize {
        self.rank_bound
    }
}

/// Builds the kernel certificate for admissible params. Each `v_l` collects
/// the `r` columns whose offsets differ by whole periods, so `P(x,0) v_l`
/// telescopes into the full partition-of-unity sum at every row.
pub fn kernel_certificate(params: &PropTwoParams) -> Result<KernelCertificate, ObstructionError> {
    require_admissible(params)?;
    let m = params.m() as usize;
    let r = params.r() as usize;
    let q = params.q();
    let p = params.p();
    let vectors: Vec<Vec<Rational>> = (0..m)
        .map(|l| {
            let mut v = vec![Rational::zero(); q];
            for i in 0..r {
                v[l + i * m] = Rational::one();
            }
            v
        })
        .collect();
    let basis = (1..m)
        .map(|l| {
            (0..q)
                .map(|c| &vectors[0][c] - &vectors[l][c])
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(KernelCertificate {
        params: *params,
        vectors,
        image: vec![Rational::one(); p],
        basis,
        rank_bound: params.rank_bound(),
    })
}

/// Outcome of running a certificate against a concrete window at one x.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateCheck {
    /// Whether the partition of unity was proved (exact) rather than sampled.
    pub pou_certified: bool,
    /// Largest `|(P v_l)_k - 1|` over all l, k.
    pub max_sum_residual: f64,
    /// Largest `|(P (v_0 - v_l))_k|` over all l, k.
    pub max_kernel_residual: f64,
    /// Exact route only: whether every residual was exactly the zero
    /// rational, not merely small.
    pub residuals_exactly_zero: Option<bool>,
    /// Rank of the zero-frequency matrix: exact or float-thresholded
    /// depending on the route.
    pub rank: usize,
    pub rank_bound: usize,
    pub p: usize,
    /// The non-frame conclusion: rank stays below the row count.
    pub rank_below_p: bool,
}

fn checked_pou(g: &Window) -> Result<PouReport, ObstructionError> {
    let report = check_partition_of_unity(g, DEFAULT_POU_SAMPLES, DEFAULT_POU_TOL)?;
    if !report.holds {
        return Err(ObstructionError::PartitionOfUnityFails {
            max_deviation: report.max_deviation,
        });
    }
    Ok(report)
}

/// Verifies the certificate in rational arithmetic: every residual must be
/// exactly zero and the exact rank must respect the bound. Requires a window
/// whose partition of unity is provable, not just numerically plausible.
pub fn verify_certificate_exact(
    g: &Window,
    params: &PropTwoParams,
    x: &Rational,
) -> Result<CertificateCheck, ObstructionError> {
    let cert = kernel_certificate(params)?;
    let report = checked_pou(g)?;
    if !report.exact {
        return Err(ObstructionError::PartitionNotProvable);
    }
    let (alpha, beta) = lattice_of(params)?;
    let lp = LatticeParams::new(alpha, beta)?;
    debug_assert_eq!((lp.p(), lp.q()), (params.p(), params.q()));
    let pm = build_p_exact(g, &lp, x)?;

    let one = Rational::one();
    let mut max_sum = Rational::zero();
    for v in cert.vectors() {
        for entry in pm.mul_vec(v) {
            let dev = (&entry - &one).abs();
            if dev > max_sum {
                max_sum = dev;
            }
        }
    }
    let mut max_kernel = Rational::zero();
    for b in cert.basis() {
        for entry in pm.mul_vec(b) {
            let dev = entry.abs();
            if dev > max_kernel {
                max_kernel = dev;
            }
        }
    }
    let rank = exact_rank(&pm);
    Ok(CertificateCheck {
        pou_certified: true,
        max_sum_residual: max_sum.to_f64(),
        max_kernel_residual: max_kernel.to_f64(),
        residuals_exactly_zero: Some(max_sum.is_zero() && max_kernel.is_zero()),
        rank,
        rank_bound: cert.rank_bound(),
        p: params.p(),
        rank_below_p: rank < params.p(),
    })
}

/// Float counterpart of the exact verification: residuals are measured in
/// the complex norm and the rank is singular-value thresholded at `rel_tol`.
pub fn verify_certificate_float(
    g: &Window,
    params: &PropTwoParams,
    x: f64,
    rel_tol: f64,
) -> Result<CertificateCheck, ObstructionError> {
    if !x.is_finite() {
        return Err(ObstructionError::BadCoordinate(x));
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(ObstructionError::BadTolerance(rel_tol));
    }
    let cert = kernel_certificate(params)?;
    let report = checked_pou(g)?;
    let (alpha, beta) = lattice_of(params)?;
    let lp = LatticeParams::new(alpha, beta)?;
    let point = EvaluationPoint::real(x, 0.0).map_err(LatticeError::from)?;
    let pm = build_p(g, &lp, &point, CERT_ZAK_TOL)?;

    let as_f64 = |v: &[Rational]| -> Vec<f64> { v.iter().map(Rational::to_f64).collect() };
    let mut max_sum = 0.0f64;
    for v in cert.vectors() {
        for entry in pm.mul_vec(&as_f64(v)) {
            max_sum = max_sum.max((entry - 1.0).norm());
        }
    }
    let mut max_kernel = 0.0f64;
    for b in cert.basis() {
        for entry in pm.mul_vec(&as_f64(b)) {
            max_kernel = max_kernel.max(entry.norm());
        }
    }
    let rank = numeric_rank(&singular_values(&pm), rel_tol);
    Ok(CertificateCheck {
        pou_certified: report.exact,
        max_sum_residual: max_sum,
        max_kernel_residual: max_kernel,
        residuals_exactly_zero: None,
        rank,
        rank_bound: cert.rank_bound(),
        p: params.p(),
        rank_below_p: rank < params.p(),
    })
}

/// Integer-frequency-step exclusion: with `beta` an integer at least 2 and
/// the window a partition of unity, the lattice generates no frame for any
/// positive `alpha`.
#[derive(Debug, Clone, Serialize)]
pub struct DelPreteCheck {
    pub beta_is_integer_ge2: bool,
    pub pou: PouReport,
    /// Both conditions met; the obstruction applies.
    pub applies: bool,
    /// Applies with the partition of unity proved exactly, so the verdict
    /// can be marked certified rather than numeric.
    pub certified: bool,
}

pub fn delprete_check(g: &Window, beta: &Rational) -> DelPreteCheck {
    let beta_is_integer_ge2 = beta.is_integer() && *beta >= Rational::integer(2);
    let pou = check_partition_of_unity(g, DEFAULT_POU_SAMPLES, DEFAULT_POU_TOL)
        .expect("default parameters are valid");
    let applies = beta_is_integer_ge2 && pou.holds;
    let certified = applies && pou.exact;
    DelPreteCheck {
        beta_is_integer_ge2,
        pou,
        applies,
        certified,
    }
}

pub fn delprete_applies(g: &Window, beta: &Rational) -> bool {
    delprete_check(g, beta).applies
}

/// One excluded lattice point from the enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct ExcludedLattice {
    pub params: PropTwoParams,
    pub alpha: Rational,
    pub beta: Rational,
    pub p: usize,
    pub q: usize,
    pub rank_bound: usize,
    /// Distance from `beta` to the accumulation value `n + 1`, reported when
    /// `m = n + 1` (the family whose exclusions pile up below an integer).
    pub accumulation_gap: Option<Rational>,
}

/// Enumerates all admissible quadruples with the given `n`, `m` and
/// `r <= r_max`, sorted by `beta` ascending. Distinct admissible quadruples
/// give distinct `beta` (coprimality forces `j/r` reduced), so no
/// deduplication is needed.
pub fn enumerate_excluded(n: u32, m: u32, r_max: u32) -> Vec<ExcludedLattice> {
    let mut out = Vec::new();
    if n == 0 || m == 0 {
        return out;
    }
    for r in 2..=r_max.max(1) {
        for j in 1..r {
            let params = PropTwoParams::new(m, n, r, j).expect("loop bounds keep j in range");
            if !params.is_admissible() {
                continue;
            }
            let (alpha, beta) = lattice_of(&params).expect("admissible");
            let accumulation_gap = (m == n + 1)
                .then(|| &Rational::integer(i64::from(n) + 1) - &beta);
            out.push(ExcludedLattice {
                params,
                alpha,
                beta,
                p: params.p(),
                q: params.q(),
                rank_bound: params.rank_bound(),
                accumulation_gap,
            });
        }
    }
    out.sort_by(|a, b| a.beta.cmp(&b.beta));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranktest::exact_rank_rows;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn params(m: u32, n: u32, r: u32, j: u32) -> PropTwoParams {
        PropTwoParams::new(m, n, r, j).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(
            PropTwoParams::new(0, 2, 2, 1),
            Err(ObstructionError::ShapeNotPositive { .. })
        ));
        assert!(matches!(
            PropTwoParams::new(3, 2, 2, 0),
            Err(ObstructionError::JOutOfRange { .. })
        ));
        assert!(matches!(
            PropTwoParams::new(3, 2, 2, 2),
            Err(ObstructionError::JOutOfRange { .. })
        ));
    }

    #[test]
    fn admissibility_of_known_quadruples() {
        for (m, n, r, j, p, q) in [
            (3, 2, 2, 1, 5, 6),
            (3, 2, 5, 4, 14, 15),
            (5, 3, 2, 1, 7, 10),
            (3, 2, 3, 2, 8, 9),
        ] {
            let adm = prop2_applies(&params(m, n, r, j));
            assert!(adm.admissible, "({m},{n},{r},{j}) should be admissible");
            assert_eq!((adm.p, adm.q), (p, q));
        }

        // boundary: the inequality is strict
        let adm = prop2_applies(&params(3, 2, 5, 3));
        assert!(!adm.admissible);
        assert!(!adm.inequality_ok, "13 < 13 must fail");
        assert_eq!((adm.rank_bound, adm.p), (13, 13));

        let adm = prop2_applies(&params(2, 1, 2, 1));
        assert!(!adm.inequality_ok, "3 < 3 must fail");

        // coprimality alone can fail: 13 < 16 < 18 holds but gcd(16,18) = 2
        let adm = prop2_applies(&params(6, 5, 3, 1));
        assert!(adm.inequality_ok);
        assert!(!adm.coprime_ok);
        assert!(!adm.admissible);
        assert_eq!(adm.reduced_q, 9);
    }

    #[test]
    fn lattice_of_known_quadruples() {
        assert_eq!(
            lattice_of(&params(3, 2, 2, 1)).unwrap(),
            (rat(1, 3), rat(5, 2))
        );
        assert_eq!(
            lattice_of(&params(5, 3, 2, 1)).unwrap(),
            (rat(1, 5), rat(7, 2))
        );
        assert_eq!(
            lattice_of(&params(3, 2, 3, 2)).unwrap(),
            (rat(1, 3), rat(8, 3))
        );
        assert!(matches!(
            lattice_of(&params(2, 1, 2, 1)),
            Err(ObstructionError::NotAdmissible { .. })
        ));
    }

    #[test]
    fn kernel_vectors_are_the_documented_patterns() {
        let cert = kernel_certificate(&params(3, 2, 2, 1)).unwrap();
        let ones = |idx: &[usize]| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); 6];
            for i in idx {
                v[*i] = Rational::one();
            }
            v
        };
        assert_eq!(cert.vectors()[0], ones(&[0, 3]));
        assert_eq!(cert.vectors()[1], ones(&[1, 4]));
        assert_eq!(cert.vectors()[2], ones(&[2, 5]));
        assert_eq!(cert.basis().len(), 2);
        assert_eq!(cert.image().len(), 5);
        assert_eq!(cert.rank_bound(), 4);

        let cert = kernel_certificate(&params(5, 3, 2, 1)).unwrap();
        let v0 = &cert.vectors()[0];
        let hot: Vec<usize> = (0..10).filter(|i| !v0[*i].is_zero()).collect();
        assert_eq!(hot, vec![0, 5]);
        assert_eq!(cert.basis().len(), 4);
    }

    #[test]
    fn kernel_basis_is_linearly_independent() {
        for params in [params(3, 2, 2, 1), params(5, 3, 2, 1), params(3, 2, 5, 4)] {
            let cert = kernel_certificate(&params).unwrap();
            let m = params.m() as usize;
            assert_eq!(exact_rank_rows(cert.basis()), m - 1);
            // Gram matrix of the basis must be nonsingular
            let gram: Vec<Vec<Rational>> = cert
                .basis()
                .iter()
                .map(|a| {
                    cert.basis()
                        .iter()
                        .map(|b| {
                            let mut acc = Rational::zero();
                            for (x, y) in a.iter().zip(b) {
                                acc = &acc + &(x * y);
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            assert_eq!(exact_rank_rows(&gram), m - 1);
        }
    }

    #[test]
    fn exact_verification_proves_the_rank_drop() {
        let g = Window::bspline(2).unwrap();
        let check = verify_certificate_exact(&g, &params(3, 2, 2, 1), &rat(1, 10)).unwrap();
        assert!(check.pou_certified);
        assert_eq!(check.residuals_exactly_zero, Some(true));
        assert_eq!(check.max_sum_residual, 0.0);
        assert_eq!(check.max_kernel_residual, 0.0);
        assert_eq!(check.rank, 4);
        assert_eq!(check.rank_bound, 4);
        assert!(check.rank_below_p);

        // higher-order spline, different quadruple, x outside [0, 1)
        let g = Window::bspline(3).unwrap();
        let check = verify_certificate_exact(&g, &params(5, 3, 2, 1), &rat(9, 7)).unwrap();
        assert_eq!(check.residuals_exactly_zero, Some(true));
        assert!(check.rank <= check.rank_bound);
        assert!(check.rank_below_p);
    }

    #[test]
    fn jump_windows_still_certify() {
        // the certificate needs only the partition of unity, not smoothness;
        // the frame conclusion for such windows is the caller's caveat
        let g = Window::bspline(1).unwrap();
        let check = verify_certificate_exact(&g, &params(3, 2, 2, 1), &rat(2, 9)).unwrap();
        assert_eq!(check.residuals_exactly_zero, Some(true));
        assert!(check.rank_below_p);
    }

    #[test]
    fn float_verification_is_consistent() {
        let g = Window::bspline(2).unwrap();
        let check = verify_certificate_float(&g, &params(3, 2, 2, 1), 0.37, 1e-8).unwrap();
        assert!(check.pou_certified);
        assert!(check.max_sum_residual < 1e-12);
        assert!(check.max_kernel_residual < 1e-12);
        assert_eq!(check.residuals_exactly_zero, None);
        assert_eq!(check.rank, 4);
        assert!(check.rank_below_p);
    }

    #[test]
    fn non_pou_windows_are_refused() {
        let gauss = Window::gaussian(1.0).unwrap();
        assert!(matches!(
            verify_certificate_exact(&gauss, &params(3, 2, 2, 1), &rat(0, 1)),
            Err(ObstructionError::PartitionOfUnityFails { .. })
        ));
        assert!(matches!(
            verify_certificate_float(&gauss, &params(3, 2, 2, 1), 0.4, 1e-8),
            Err(ObstructionError::PartitionOfUnityFails { .. })
        ));
        let wide = Window::characteristic(rat(0, 1), rat(2, 1)).unwrap();
        assert!(matches!(
            verify_certificate_exact(&wide, &params(3, 2, 2, 1), &rat(0, 1)),
            Err(ObstructionError::PartitionOfUnityFails { .. })
        ));
    }

    #[test]
    fn inadmissible_params_are_refused_before_any_window_work() {
        let g = Window::bspline(2).unwrap();
        assert!(matches!(
            verify_certificate_exact(&g, &params(3, 2, 5, 3), &rat(0, 1)),
            Err(ObstructionError::NotAdmissible { .. })
        ));
        assert!(matches!(
            kernel_certificate(&params(2, 1, 2, 1)),
            Err(ObstructionError::NotAdmissible { .. })
        ));
    }

    #[test]
    fn delprete_predicate() {
        let b2 = Window::bspline(2).unwrap();
        let b1 = Window::bspline(1).unwrap();
        let gauss = Window::gaussian(1.0).unwrap();

        let check = delprete_check(&b2, &rat(2, 1));
        assert!(check.applies && check.certified);

        assert!(!delprete_applies(&b2, &rat(5, 2)), "non-integer step");
        assert!(!delprete_applies(&b2, &rat(1, 1)), "needs at least 2");
        assert!(!delprete_applies(&gauss, &rat(2, 1)), "no partition of unity");

        // jump window: still a partition of unity, still applies
        let check = delprete_check(&b1, &rat(3, 1));
        assert!(check.applies && check.certified);
    }

    // independent brute force over (r, j) with plain integer arithmetic
    fn excluded_betas_oracle(n: u64, m: u64, r_max: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for r in 2..=r_max {
            for j in 1..r {
                let p = r * n + j;
                let q = r * m;
                if (r - 1) * m + 1 < p && p < q && p.gcd(&q) == 1 {
                    out.push((p, r)); // beta = (rn + j)/r, already reduced
                }
            }
        }
        out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let list = enumerate_excluded(2, 3, 5);
        let betas: Vec<Rational> = list.iter().map(|e| e.beta.clone()).collect();
        assert_eq!(betas, vec![rat(5, 2), rat(8, 3), rat(11, 4), rat(14, 5)]);

        let oracle = excluded_betas_oracle(2, 3, 5);
        assert_eq!(oracle.len(), list.len());
        for (got, (num, den)) in list.iter().zip(&oracle) {
            assert_eq!(got.beta, Rational::new(*num as i64, *den as i64).unwrap());
        }

        let gaps: Vec<Rational> = list
            .iter()
            .map(|e| e.accumulation_gap.clone().unwrap())
            .collect();
        assert_eq!(gaps, vec![rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 5)]);

        // a second family, cross-checked only against the oracle
        let list = enumerate_excluded(3, 4, 6);
        let oracle = excluded_betas_oracle(3, 4, 6);
        assert_eq!(list.len(), oracle.len());
        for (got, (num, den)) in list.iter().zip(&oracle) {
            assert_eq!(got.beta, Rational::new(*num as i64, *den as i64).unwrap());
        }
    }

    #[test]
    fn small_families_can_be_empty() {
        assert!(enumerate_excluded(1, 2, 10).is_empty());
        assert!(enumerate_excluded(0, 3, 5).is_empty());
        assert!(enumerate_excluded(2, 3, 1).is_empty());
    }

    #[test]
    fn exclusions_accumulate_below_the_integer() {
        let list = enumerate_excluded(2, 3, 50);
        let max_beta = list.last().unwrap().beta.clone();
        assert!(max_beta > &rat(3, 1) - &rat(1, 25));
        assert!(max_beta < rat(3, 1));
    }

    proptest! {
        // every enumerated point is admissible, lies in (n, n+1) for beta,
        // and has coprime density fraction
        #[test]
        fn enumerated_points_are_sound(n in 1u32..5, m in 1u32..7, r_max in 2u32..12) {
            let list = enumerate_excluded(n, m, r_max);
            let mut prev: Option<Rational> = None;
            for e in &list {
                prop_assert!(e.params.is_admissible());
                prop_assert!(e.beta > Rational::integer(i64::from(n)));
                prop_assert!(e.beta < Rational::integer(i64::from(n) + 1));
                prop_assert_eq!(&e.alpha, &Rational::new(1, i64::from(m)).unwrap());
                prop_assert!(e.rank_bound < e.p && e.p < e.q);
                if let Some(prev) = prev {
                    prop_assert!(prev < e.beta, "sorted strictly ascending");
                }
                prev = Some(e.beta.clone());
            }
        }

        // admissible quadruples always give a reduced density fraction
        #[test]
        fn admissible_implies_reduced(m in 1u32..8, n in 1u32..6, r in 2u32..9, j in 1u32..8) {
            prop_assume!(j < r);
            let params = PropTwoParams::new(m, n, r, j).unwrap();
            if params.is_admissible() {
                let (alpha, beta) = lattice_of(&params).unwrap();
                let lp = LatticeParams::new(alpha, beta).unwrap();
                prop_assert_eq!(lp.p(), params.p());
                prop_assert_eq!(lp.q(), params.q());
            }
        }
    }
}
