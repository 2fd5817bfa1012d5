//! Cross-module invariants: facts that tie the Zak layer, the matrix
//! builders, the rank tests and the sweep machinery together. Unit tests
//! inside each module cover the local contracts; these tests check that the
//! pieces compose.

mod support;

use proptest::prelude::*;
use rayon::ThreadPoolBuilder;

use gaborscan::frameset::{
    render_ppm, scan_plane, test_lattice, to_csv, CertificateSource, GridSpec, ScanOptions,
    VerdictKind,
};
use gaborscan::pmatrix::{build_p, build_p_exact, LatticeParams};
use gaborscan::ranktest::singular_values;
use gaborscan::windows::Window;
use gaborscan::zak::EvaluationPoint;
use gaborscan::Rational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// Subcritical lattices with small `p`, `q`, mixing integer and fractional
/// steps on both sides.
fn lattice_pool() -> Vec<LatticeParams> {
    [
        (rat(1, 2), rat(1, 1)),
        (rat(1, 3), rat(2, 1)),
        (rat(1, 2), rat(3, 2)),
        (rat(2, 3), rat(5, 4)),
        (rat(1, 3), rat(5, 2)),
        (rat(3, 4), rat(4, 3)),
    ]
    .into_iter()
    .map(|(a, b)| LatticeParams::new(a, b).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Shifting `x` by one time step permutes the matrix columns up to a
    /// unimodular phase, so the singular values cannot move.
    #[test]
    fn singular_profile_is_invariant_under_time_shifts(
        order in 1u32..=3,
        which in 0usize..6,
        num in 0i64..60,
        den in 1i64..20,
        xi in 0.0f64..1.0,
    ) {
        let g = Window::bspline(order).unwrap();
        let lp = &lattice_pool()[which];
        let x = rat(num, den);
        let here = build_p(&g, lp, &EvaluationPoint::exact(x.clone(), xi).unwrap(), 1e-12).unwrap();
        let shifted_x = &x + lp.alpha();
        let shifted =
            build_p(&g, lp, &EvaluationPoint::exact(shifted_x, xi).unwrap(), 1e-12).unwrap();
        let a = singular_values(&here);
        let b = singular_values(&shifted);
        let scale = a.largest().max(1.0);
        for (s, t) in a.values().iter().zip(b.values().iter()) {
            prop_assert!(
                (s - t).abs() < 1e-10 * scale,
                "sigma moved from {s} to {t} under a time shift"
            );
        }
    }

    /// The float matrix on the zero-frequency line is the exact matrix
    /// rounded to `f64`.
    #[test]
    fn float_matrix_tracks_exact_matrix_on_the_zero_line(
        order in 1u32..=4,
        which in 0usize..6,
        num in 0i64..80,
        den in 1i64..25,
    ) {
        let g = Window::bspline(order).unwrap();
        let lp = &lattice_pool()[which];
        let x = rat(num, den);
        let float = build_p(&g, lp, &EvaluationPoint::exact(x.clone(), 0.0).unwrap(), 1e-12).unwrap();
        let exact = build_p_exact(&g, lp, &x).unwrap();
        for k in 0..exact.rows() {
            for l in 0..exact.cols() {
                let f = float.entry(k, l);
                let e = exact.entry(k, l).to_f64();
                prop_assert!(f.im.abs() < 1e-15);
                prop_assert!(
                    (f.re - e).abs() < 1e-12,
                    "entry ({k}, {l}): float {} vs exact {e}",
                    f.re
                );
            }
        }
    }
}

#[test]
fn plane_scan_is_identical_across_thread_pools() {
    let g = Window::bspline(2).unwrap();
    let opts = ScanOptions {
        grid: GridSpec { nx: 4, nxi: 4 },
        ..ScanOptions::default()
    };
    let run = |threads: usize| {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            scan_plane(
                &g,
                (&rat(1, 3), &rat(1, 2)),
                (&rat(2, 1), &rat(3, 1)),
                3,
                &opts,
            )
            .unwrap()
        })
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(to_csv(&one), to_csv(&four));
    assert_eq!(render_ppm(&one).unwrap(), render_ppm(&four).unwrap());
}

#[test]
fn unity_partitions_certify_every_integer_step() {
    let opts = ScanOptions {
        grid: GridSpec { nx: 8, nxi: 8 },
        ..ScanOptions::default()
    };
    for order in 1..=4 {
        let g = Window::bspline(order).unwrap();
        for beta in 2..=4 {
            for alpha in [rat(1, 3), rat(1, 2)] {
                let v = test_lattice(&g, &alpha, &rat(beta, 1), &opts).unwrap();
                // the density gate outranks the integer-step certificate
                let supercritical = &alpha * &rat(beta, 1) > rat(1, 1);
                let expected = if supercritical {
                    CertificateSource::Density
                } else {
                    CertificateSource::DelPrete
                };
                assert_eq!(
                    v.kind,
                    VerdictKind::CertifiedNotFrame(expected),
                    "order {order}, alpha {alpha}, beta {beta}"
                );
                assert_eq!(
                    v.scan.is_some(),
                    !supercritical,
                    "integer-step certificates carry a cross-check scan"
                );
            }
        }
    }
}

#[test]
fn plane_scan_enumerates_reduced_rationals() {
    let g = Window::bspline(2).unwrap();
    let opts = ScanOptions {
        grid: GridSpec { nx: 2, nxi: 2 },
        ..ScanOptions::default()
    };
    for (lo_a, hi_a, lo_b, hi_b, max_den) in [
        (rat(1, 3), rat(1, 2), rat(2, 1), rat(5, 2), 4u32),
        (rat(1, 4), rat(1, 1), rat(1, 1), rat(3, 2), 3),
    ] {
        let result = scan_plane(&g, (&lo_a, &hi_a), (&lo_b, &hi_b), max_den, &opts).unwrap();
        assert_eq!(
            result.alphas,
            support::farey_in_range(&lo_a, &hi_a, i64::from(max_den))
        );
        assert_eq!(
            result.betas,
            support::farey_in_range(&lo_b, &hi_b, i64::from(max_den))
        );
        // row-major in (alpha, beta)
        let height = result.betas.len();
        assert_eq!(result.verdicts.len(), result.alphas.len() * height);
        for (i, alpha) in result.alphas.iter().enumerate() {
            for (j, beta) in result.betas.iter().enumerate() {
                let v = &result.verdicts[i * height + j];
                assert_eq!(&v.alpha, alpha);
                assert_eq!(&v.beta, beta);
            }
        }
    }
}
