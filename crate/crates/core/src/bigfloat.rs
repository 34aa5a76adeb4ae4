//! Binary floating point with an arbitrary-precision mantissa.
//!
//! Only the moment solve needs inexact arithmetic; everything else in the
//! crate is integer or rational. A value is `mantissa * 2^exponent` with the
//! mantissa rounded to `prec` bits after every operation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
}

/// Shift right with round-half-away-from-zero.
fn shr_round(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let neg = m.is_negative();
    let mag = m.abs();
    let half = BigInt::one() << (shift - 1);
    let r = (mag + half) >> shift;
    if neg {
        -r
    } else {
        r
    }
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    fn normalized(mantissa: BigInt, exponent: i64, prec: u32) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let bits = mantissa.bits();
        if bits > prec as u64 {
            let shift = bits - prec as u64;
            let m = shr_round(&mantissa, shift);
            return Self::normalized(m, exponent + shift as i64, prec);
        }
        // strip trailing zeros so equal values share a representation
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        BigFloat {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::normalized(v.clone(), 0, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), exp - 1075)
        };
        Self::normalized(BigInt::from(m) * sign, e, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num = r.numer();
        let den = r.denom();
        let shift = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let scaled = if shift >= 0 {
            num << shift as u64
        } else {
            num >> (-shift) as u64
        };
        let q = scaled.div_floor(den);
        Self::normalized(q, -shift, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Position of the leading bit: `value` lies in `[2^(top-1), 2^top)`.
    fn top(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::normalized(other.mantissa.clone(), other.exponent, prec);
        }
        if other.is_zero() {
            return Self::normalized(self.mantissa.clone(), self.exponent, prec);
        }
        // a term more than prec+2 bits below the other only affects rounding
        let guard = prec as i64 + 4;
        if self.top() - other.top() > guard {
            let tiny = BigFloat {
                mantissa: other.mantissa.signum(),
                exponent: self.top() - guard,
            };
            return self.add_exact(&tiny, prec);
        }
        if other.top() - self.top() > guard {
            return other.add(self, prec);
        }
        self.add_exact(other, prec)
    }

    fn add_exact(&self, other: &Self, prec: u32) -> Self {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Self::normalized(a + b, e, prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        Self::normalized(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            prec,
        )
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = prec as i64 + 2 + other.mantissa.bits() as i64 - self.mantissa.bits() as i64;
        let shift = shift.max(0) as u64;
        let q = (&self.mantissa << shift) / &other.mantissa;
        Self::normalized(q, self.exponent - other.exponent - shift as i64, prec)
    }

    pub fn powi(&self, mut e: u32, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_i64(1, prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exponent.min(other.exponent);
                let a = self.mantissa.abs() << (self.exponent - e) as u64;
                let b = other.mantissa.abs() << (other.exponent - e) as u64;
                a.cmp(&b)
            }
            ord => ord,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 60 {
            let shift = bits - 60;
            (&self.mantissa >> shift, self.exponent + shift as i64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split the scaling to stay inside the f64 exponent range
        let half = (e / 2) as i32;
        mf * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Exact dyadic rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    /// Nearest integer (halves away from zero).
    pub fn round_to_integer(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_round(&self.mantissa, (-self.exponent) as u64)
        }
    }

    /// Distance to the nearest integer, as f64.
    pub fn distance_to_integer(&self, prec: u32) -> f64 {
        let r = self.round_to_integer();
        self.sub(&BigFloat::from_bigint(&r, prec.max(r.bits() as u32 + 64)), prec + 64)
            .abs()
            .to_f64()
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// LU factorization with partial pivoting, `P A = L U`, stored in place.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Vec<Vec<BigFloat>>,
    perm: Vec<usize>,
    prec: u32,
}

impl Lu {
    /// Returns `None` on an exactly zero pivot.
    pub fn new(a: &[Vec<BigFloat>], prec: u32) -> Option<Self> {
        let n = a.len();
        let mut m: Vec<Vec<BigFloat>> = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| m[i][col].cmp_abs(&m[j][col]))?;
            if m[piv][col].is_zero() {
                return None;
            }
            m.swap(col, piv);
            perm.swap(col, piv);
            for row in col + 1..n {
                if m[row][col].is_zero() {
                    continue;
                }
                let factor = m[row][col].div(&m[col][col], prec);
                for j in col + 1..n {
                    let t = factor.mul(&m[col][j], prec);
                    m[row][j] = m[row][j].sub(&t, prec);
                }
                m[row][col] = factor;
            }
        }
        Some(Lu { lu: m, perm, prec })
    }

    pub fn solve(&self, b: &[BigFloat]) -> Vec<BigFloat> {
        let n = self.lu.len();
        let prec = self.prec;
        let mut y: Vec<BigFloat> = self.perm.iter().map(|&i| b[i].clone()).collect();
        for row in 0..n {
            for j in 0..row {
                let t = self.lu[row][j].mul(&y[j], prec);
                y[row] = y[row].sub(&t, prec);
            }
        }
        for row in (0..n).rev() {
            for j in row + 1..n {
                let t = self.lu[row][j].mul(&y[j], prec);
                y[row] = y[row].sub(&t, prec);
            }
            y[row] = y[row].div(&self.lu[row][row], prec);
        }
        y
    }

    /// Infinity-norm condition number of the factored matrix, given the
    /// original matrix for its norm.
    pub fn condition_number(&self, a: &[Vec<BigFloat>]) -> f64 {
        let n = a.len();
        let row_norm = |r: &[BigFloat]| r.iter().map(|x| x.abs().to_f64()).sum::<f64>();
        let norm_a = a.iter().map(|r| row_norm(r)).fold(0.0, f64::max);
        let mut inv_rows = vec![0.0f64; n];
        for j in 0..n {
            let e: Vec<BigFloat> = (0..n)
                .map(|i| BigFloat::from_i64((i == j) as i64, self.prec))
                .collect();
            for (acc, x) in inv_rows.iter_mut().zip(self.solve(&e)) {
                *acc += x.abs().to_f64();
            }
        }
        norm_a * inv_rows.into_iter().fold(0.0, f64::max)
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting at `prec` bits. Returns `None` on an exactly zero pivot.
pub fn solve(a: &[Vec<BigFloat>], b: &[BigFloat], prec: u32) -> Option<Vec<BigFloat>> {
    Some(Lu::new(a, prec)?.solve(b))
}

/// Infinity-norm condition number `||A|| * ||A^-1||`, as f64.
pub fn condition_number(a: &[Vec<BigFloat>], prec: u32) -> Option<f64> {
    Some(Lu::new(a, prec)?.condition_number(a))
}

/// Refines a simple root of `p` (rational coefficients) by Newton's method
/// at `prec` bits, starting from `start`. Returns `None` if the iteration
/// does not settle.
pub fn newton_root(p: &[BigRational], start: f64, prec: u32) -> Option<BigFloat> {
    let wprec = prec + 32;
    let coeffs: Vec<BigFloat> = p.iter().map(|c| BigFloat::from_rational(c, wprec)).collect();
    let dcoeffs: Vec<BigFloat> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&BigFloat::from_i64(i as i64, wprec), wprec))
        .collect();
    let horner = |cs: &[BigFloat], x: &BigFloat| -> BigFloat {
        cs.iter()
            .rev()
            .fold(BigFloat::zero(), |acc, c| acc.mul(x, wprec).add(c, wprec))
    };
    let mut x = BigFloat::from_f64(start, wprec);
    let target = -(prec as i64) + 4;
    for _ in 0..(64 + 2 * prec.ilog2() as usize) {
        let fx = horner(&coeffs, &x);
        if fx.is_zero() {
            return Some(x);
        }
        let dfx = horner(&dcoeffs, &x);
        if dfx.is_zero() {
            return None;
        }
        let step = fx.div(&dfx, wprec);
        x = x.sub(&step, wprec);
        let scale = x.top().max(0);
        if step.is_zero() || step.top() < target + scale {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    #[test]
    fn arithmetic_round_trips() {
        let a = BigFloat::from_f64(1.5, P);
        let b = BigFloat::from_f64(-0.25, P);
        assert_eq!(a.add(&b, P).to_f64(), 1.25);
        assert_eq!(a.mul(&b, P).to_f64(), -0.375);
        assert_eq!(a.div(&b, P).to_f64(), -6.0);
        let third = BigFloat::from_rational(&BigRational::new(1.into(), 3.into()), P);
        let back = third.mul(&BigFloat::from_i64(3, P), P);
        assert!(back.sub(&BigFloat::from_i64(1, P), P).abs().to_f64() < 1e-58);
    }

    #[test]
    fn sqrt_two_by_newton() {
        let p = vec![
            BigRational::from_integer((-2).into()),
            BigRational::zero(),
            BigRational::one(),
        ];
        let r = newton_root(&p, 1.4, 300).unwrap();
        let sq = r.mul(&r, 300);
        assert!(sq.sub(&BigFloat::from_i64(2, 300), 300).abs().to_f64() < 1e-85);
    }

    #[test]
    fn solve_small_system() {
        let m = |v: i64| BigFloat::from_i64(v, P);
        let a = vec![vec![m(2), m(1)], vec![m(1), m(3)]];
        let x = solve(&a, &[m(3), m(5)], P).unwrap();
        assert!((x[0].to_f64() - 0.8).abs() < 1e-15);
        assert!((x[1].to_f64() - 1.4).abs() < 1e-15);
        let c = condition_number(&a, P).unwrap();
        assert!((c - 4.0 * 0.8).abs() < 1e-12);
    }

    #[test]
    fn rounding_helpers() {
        let x = BigFloat::from_f64(2.75, P);
        assert_eq!(x.round_to_integer(), BigInt::from(3));
        assert!((x.distance_to_integer(P) - 0.25).abs() < 1e-15);
        assert_eq!(BigFloat::from_f64(-2.5, P).round_to_integer(), BigInt::from(-3));
    }
}
