//! Oracles shared by the integration suites. Everything here is written
//! from scratch against the definitions, independent of the library's
//! internals, so agreement is evidence rather than tautology.

// each test binary compiles its own copy and uses a different subset
#![allow(dead_code)]

use gaborscan::Rational;

/// Excluded `beta` values for the family `alpha = 1/m`, `beta = n + j/r`,
/// by direct search over all `(r, j)` pairs: keep a pair when the strict
/// rank-deficit inequality `(r-1)m + 1 < rn + j < rm` holds and `rn + j`
/// is coprime to `rm`.
pub fn brute_force_excluded_betas(n: u64, m: u64, r_max: u64) -> Vec<Rational> {
    let mut betas = Vec::new();
    for r in 2..=r_max {
        for j in 1..r {
            let p = r * n + j;
            let q = r * m;
            let bound = (r - 1) * m + 1;
            if bound < p && p < q && gcd(p, q) == 1 {
                betas.push(
                    Rational::integer(n as i64) + &Rational::frac(j as i64, r as i64),
                );
            }
        }
    }
    betas.sort();
    betas.dedup();
    betas
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Matrix rank by plain Gaussian elimination over the rationals, no
/// pivoting strategy beyond the first nonzero, no fraction-free tricks.
pub fn naive_rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < m && col < n {
        match (rank..m).find(|i| !a[*i][col].is_zero()) {
            None => col += 1,
            Some(pivot_row) => {
                a.swap(rank, pivot_row);
                let pivot = a[rank].clone();
                for row in a.iter_mut().skip(rank + 1) {
                    if !row[col].is_zero() {
                        let factor = &row[col] / &pivot[col];
                        for (entry, pe) in row.iter_mut().zip(pivot.iter()).skip(col) {
                            *entry = &*entry - &(&factor * pe);
                        }
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// All reduced fractions `a/b` with `b <= max_den` inside `[lo, hi]`,
/// by scanning numerators denominator by denominator.
pub fn farey_in_range(lo: &Rational, hi: &Rational, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for den in 1..=max_den {
        let mut num = (lo * &Rational::integer(den)).ceil_int();
        let top = (hi * &Rational::integer(den)).floor_int();
        while num <= top {
            out.push(Rational::new(num.clone(), den).expect("den > 0"));
            num += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}
