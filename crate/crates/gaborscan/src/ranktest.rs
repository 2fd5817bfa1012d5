//! Rank decisions for the sample matrix, by two deliberately independent
//! routes: float singular values (scan path, detects near-drops) and exact
//! integer elimination (certificate path, proves drops). The two must agree
//! wherever both apply; neither substitutes for the other.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::pmatrix::{PMatrix, RationalPMatrix};
use crate::rational::Rational;

/// Singular values of the sample matrix, descending, one per row.
#[derive(Debug, Clone)]
pub struct SingularProfile {
    values: Vec<f64>,
}

impl SingularProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest singular value.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value: full rank holds iff this stays away from 0.
    pub fn smallest(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Scale-free margin `smallest / largest`; 0 when the matrix vanishes.
    pub fn ratio(&self) -> f64 {
        let top = self.largest();
        if top == 0.0 {
            0.0
        } else {
            self.smallest() / top
        }
    }
}

/// Singular values via the real embedding `[[Re, -Im], [Im, Re]]`, which has
/// every singular value of the complex matrix twice. Sorting the `2p` values
/// and averaging consecutive pairs recovers the complex profile without a
/// complex SVD.
pub fn singular_values(m: &PMatrix) -> SingularProfile {
    let (p, q) = (m.rows(), m.cols());
    let mut real = DMatrix::<f64>::zeros(2 * p, 2 * q);
    for k in 0..p {
        for l in 0..q {
            let z = m.entry(k, l);
            real[(k, l)] = z.re;
            real[(k, l + q)] = -z.im;
            real[(k + p, l)] = z.im;
            real[(k + p, l + q)] = z.re;
        }
    }
    let svd = nalgebra::SVD::new_unordered(real, false, false);
    let mut doubled: Vec<f64> = svd.singular_values.iter().copied().collect();
    doubled.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    let values = (0..p)
        .map(|i| 0.5 * (doubled[2 * i] + doubled[2 * i + 1]))
        .collect();
    SingularProfile { values }
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numeric_rank(profile: &SingularProfile, rel_tol: f64) -> usize {
    let top = profile.largest();
    if top == 0.0 {
        return 0;
    }
    profile
        .values
        .iter()
        .take_while(|s| **s > rel_tol * top)
        .count()
}

/// Exact rank of the rational sample matrix at `(x, 0)`.
pub fn exact_rank(m: &RationalPMatrix) -> usize {
    let rows: Vec<Vec<Rational>> = (0..m.rows())
        .map(|k| (0..m.cols()).map(|l| m.entry(k, l).clone()).collect())
        .collect();
    exact_rank_rows(&rows)
}

/// Exact rank of an arbitrary rational matrix: rows are scaled integer by
/// clearing denominators, then reduced by fraction-free elimination with
/// full pivoting. Pivot choice is deterministic (largest magnitude, ties to
/// the smallest row-major position), so runs are reproducible.
pub fn exact_rank_rows(rows: &[Vec<Rational>]) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    debug_assert!(rows.iter().all(|r| r.len() == n), "ragged matrix");
    if n == 0 {
        return 0;
    }
    // row-wise denominator clearing preserves rank
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::from(1), |acc, e| acc.lcm(e.denom()));
            row.iter()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for step in 0..m.min(n) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in step..m {
            for j in step..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let better = match &pivot {
                    None => true,
                    Some((pi, pj)) => a[i][j].abs() > a[*pi][*pj].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        a.swap(step, pi);
        if pj != step {
            for row in a.iter_mut() {
                row.swap(step, pj);
            }
        }
        for i in step + 1..m {
            for j in step + 1..n {
                // fraction-free update: the division by the previous pivot
                // is exact (every intermediate is a minor of the original)
                let num = &a[step][step] * &a[i][j] - &a[i][step] * &a[step][j];
                debug_assert!((&num % &prev).is_zero());
                a[i][j] = num / &prev;
            }
            a[i][step] = BigInt::from(0);
        }
        prev = a[step][step].clone();
        rank += 1;
    }
    rank
}
