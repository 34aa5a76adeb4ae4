//! Univariate polynomials with exact integer or rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    pub coefficients: Vec<BigInt>,
}

/// Rational polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    pub coefficients: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        if coefficients.is_empty() {
            coefficients.push(BigInt::zero());
        }
        trim(&mut coefficients);
        IntPolynomial { coefficients }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn to_rational(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.coefficients
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.to_rational().eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Multiplicity of the root 0.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coefficients
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.degree())
    }

    /// Power sums `p_d = sum of d-th powers of the roots` for `d = 0..=max`,
    /// from Newton's identities. Requires a monic polynomial.
    pub fn power_sums(&self, max: usize) -> Vec<BigInt> {
        let n = self.degree();
        assert!(self.coefficients[n].is_one(), "power sums need a monic polynomial");
        // e-coefficients: x^n + a_{n-1} x^{n-1} + ... ; a_j = coefficients[j]
        let a = |i: usize| -> &BigInt { &self.coefficients[n - i] }; // coefficient of x^{n-i}
        let mut p = vec![BigInt::zero(); max + 1];
        p[0] = BigInt::from(n);
        for d in 1..=max {
            let mut s = BigInt::zero();
            for i in 1..=d.min(n) {
                if i < d {
                    s += a(i) * &p[d - i];
                } else {
                    s += a(i) * BigInt::from(d);
                }
            }
            p[d] = -s;
        }
        p
    }
}

impl RationalPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        if coefficients.is_empty() {
            coefficients.push(BigRational::zero());
        }
        trim(&mut coefficients);
        RationalPolynomial { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients[0].is_zero()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::new(vec![]);
        }
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn monic(&self) -> Self {
        let lead = self.coefficients.last().unwrap().clone();
        Self::new(self.coefficients.iter().map(|c| c / &lead).collect())
    }

    /// Quotient and remainder of polynomial division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coefficients.clone();
        let dd = divisor.degree();
        let lead = divisor.coefficients[dd].clone();
        if self.degree() < dd || self.is_zero() {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![BigRational::zero(); self.degree() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coefficients.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd.max(1));
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g);
        q.monic()
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.is_integral().then(|| {
            IntPolynomial::new(self.coefficients.iter().map(|c| c.to_integer()).collect())
        })
    }
}

fn write_terms<T: fmt::Display + Signed>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (d, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let unit = mag.is_one();
        match d {
            0 => write!(f, "{mag}")?,
            1 if unit => write!(f, "{var}")?,
            1 => write!(f, "{mag}{var}")?,
            _ if unit => write!(f, "{var}^{d}")?,
            _ => write!(f, "{mag}{var}^{d}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coefficients, "λ")
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coefficients, "λ")
    }
}
