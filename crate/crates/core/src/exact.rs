//! Exact integer determinants.
//!
//! Fraction-free Gaussian elimination (Bareiss) in checked `i128`, falling
//! back to arbitrary precision on overflow. Only signs are consumed by the
//! geometric predicates, but full values are returned so callers can audit.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(a[k][k])?;
                let rhs = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

/// Bareiss elimination over big integers.
pub fn det_big(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = rows.to_vec();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a square integer matrix.
pub fn det(rows: &[Vec<i64>]) -> BigInt {
    debug_assert!(rows.iter().all(|r| r.len() == rows.len()));
    let wide: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    // None means an intermediate overflowed i128
    if let Some(v) = bareiss_i128(wide) {
        return BigInt::from(v);
    }
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    det_big(&big)
}

/// Sign of the exact determinant: -1, 0 or 1.
pub fn det_sign(rows: &[Vec<i64>]) -> i8 {
    sign_of(&det(rows))
}

/// Determinant of a big-integer matrix, trying the `i128` path first.
pub fn det_of_big(rows: &[Vec<BigInt>]) -> BigInt {
    let narrow: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(i128_of).collect::<Option<Vec<_>>>())
        .collect();
    if let Some(m) = narrow {
        if let Some(v) = bareiss_i128(m) {
            return BigInt::from(v);
        }
    }
    det_big(rows)
}

fn i128_of(x: &BigInt) -> Option<i128> {
    use num_traits::ToPrimitive;
    x.to_i128()
}

pub fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
