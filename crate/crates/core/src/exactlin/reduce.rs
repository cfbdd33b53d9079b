//! Fraction-free Gauss-Jordan reduction.
//!
//! Rows are scaled to primitive integer vectors and eliminated with
//! integer row operations, dividing out the row content after every
//! update. Small problems run on `i128` with checked arithmetic; any
//! overflow restarts the reduction on `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Rat;

trait ExactInt: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;
    fn checked_sub(&self, rhs: &Self) -> Option<Self>;
    fn gcd(&self, rhs: &Self) -> Self;
    fn div_exact(&self, rhs: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn into_big(self) -> BigInt;
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        i128::checked_mul(*self, *rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        i128::checked_sub(*self, *rhs)
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        *self / *rhs
    }
    fn is_unit(&self) -> bool {
        *self == 1
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn is_unit(&self) -> bool {
        One::is_one(self)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

fn make_primitive<T: ExactInt>(row: &mut [T]) {
    let mut g = T::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_unit() {
                return;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = v.div_exact(&g);
        }
    }
}

/// Reduces integer rows in place. Returns the pivot columns, or `None` on
/// overflow. On success the first `pivots.len()` rows hold the reduced
/// rows (pivot entry positive, zero in every other pivot column).
fn reduce_int<T: ExactInt>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if rows[r][col].is_negative() {
            for v in rows[r].iter_mut() {
                *v = v.neg();
            }
        }
        let pivot_row = rows[r].clone();
        let piv = pivot_row[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                let scaled = v.checked_mul(&piv)?;
                *v = if pv.is_zero() { scaled } else { scaled.checked_sub(&factor.checked_mul(pv)?)? };
            }
            make_primitive(row);
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Some(pivots)
}

fn to_integer_rows(rows: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut ints: Vec<BigInt> = row
                .iter()
                .map(|x| {
                    if x.denom().is_one() && lcm.is_one() {
                        x.numer().clone()
                    } else {
                        x.numer() * (&lcm / x.denom())
                    }
                })
                .collect();
            make_primitive(&mut ints);
            ints
        })
        .collect()
}

fn finish<T: ExactInt>(rows: Vec<Vec<T>>, pivots: &[usize]) -> Vec<Vec<Rat>> {
    rows.into_iter()
        .zip(pivots)
        .map(|(row, &pc)| {
            let piv = row[pc].clone().into_big();
            row.into_iter().map(|v| Rat::new(v.into_big(), piv.clone())).collect()
        })
        .collect()
}

/// Reduced row-echelon form of the given rows, keeping only nonzero rows.
/// Returns the rows (leading entry 1) and their pivot columns. The result
/// depends only on the row space, so it is a canonical representative.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let big = to_integer_rows(rows);
    let small: Option<Vec<Vec<i128>>> = big.iter().map(|r| r.iter().map(|v| v.to_i128()).collect()).collect();
    if let Some(mut small) = small {
        if let Some(pivots) = reduce_int(&mut small, ncols) {
            return (finish(small, &pivots), pivots);
        }
    }
    let mut big = big;
    let pivots = reduce_int(&mut big, ncols).expect("BigInt reduction cannot overflow");
    (finish(big, &pivots), pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{rat, ratio};

    #[test]
    fn reduces_small_system() {
        let rows = vec![vec![rat(2), rat(4), rat(2)], vec![rat(1), rat(2), rat(3)]];
        let (r, p) = rref(&rows, 3);
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r[0], vec![rat(1), rat(2), rat(0)]);
        assert_eq!(r[1], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn handles_fractions_and_dependence() {
        let rows = vec![vec![ratio(1, 2), ratio(1, 3)], vec![rat(3), rat(2)], vec![rat(0), rat(0)]];
        let (r, p) = rref(&rows, 2);
        assert_eq!(p, vec![0]);
        assert_eq!(r, vec![vec![rat(1), ratio(2, 3)]]);
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        let huge = Rat::from_integer(BigInt::from(i128::MAX) * BigInt::from(7));
        let rows =
            vec![vec![huge.clone(), rat(1), rat(0)], vec![rat(1), huge.clone(), rat(1)], vec![rat(1), rat(1), huge]];
        let (r, p) = rref(&rows, 3);
        assert_eq!(p, vec![0, 1, 2]);
        for (i, row) in r.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { rat(1) } else { rat(0) });
            }
        }
    }
}
