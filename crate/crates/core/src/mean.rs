//! Matching polynomial, arithmetic and geometric means of the signed
//! characteristic polynomials, and the AM–GM comparison between them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::{IntPolynomial, RationalPolynomial};
use crate::signed::{char_poly_exact, enumerate_signings};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingMethod {
    Direct,
    SignedMean,
}

/// `m_r(G)` for `r = 0..=n/2` by exhaustive enumeration.
pub fn matching_numbers(g: &Graph) -> Vec<u64> {
    fn go(g: &Graph, from: usize, used: &mut [bool], size: usize, counts: &mut Vec<u64>) {
        counts[size] += 1;
        for (i, &(u, v)) in g.edges().iter().enumerate().skip(from) {
            if !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                go(g, i + 1, used, size + 1, counts);
                used[u] = false;
                used[v] = false;
            }
        }
    }
    let mut counts = vec![0; g.vertex_count() / 2 + 1];
    go(g, 0, &mut vec![false; g.vertex_count()], 0, &mut counts);
    counts
}

fn all_signed_char_polys(g: &Graph, budget: &Budget) -> Result<Vec<IntPolynomial>> {
    enumerate_signings(g, false, budget)?
        .iter()
        .map(char_poly_exact)
        .collect()
}

pub fn matching_polynomial(g: &Graph, method: MatchingMethod, budget: &Budget) -> Result<RationalPolynomial> {
    let n = g.vertex_count();
    match method {
        MatchingMethod::Direct => {
            let mut c = vec![BigRational::zero(); n + 1];
            for (r, &m) in matching_numbers(g).iter().enumerate() {
                let sign = if r % 2 == 0 { 1i64 } else { -1 };
                c[n - 2 * r] = BigRational::from_integer(BigInt::from(m) * sign);
            }
            Ok(RationalPolynomial::new(c))
        }
        MatchingMethod::SignedMean => {
            let polys = all_signed_char_polys(g, budget)?;
            let mut c = vec![BigInt::zero(); n + 1];
            for p in &polys {
                for (a, b) in c.iter_mut().zip(&p.coefficients) {
                    *a += b;
                }
            }
            let count = BigInt::from(polys.len());
            Ok(RationalPolynomial::new(
                c.into_iter()
                    .map(|x| BigRational::new(x, count.clone()))
                    .collect(),
            ))
        }
    }
}

fn exact(lambda0: f64) -> Result<BigRational> {
    BigRational::from_f64(lambda0)
        .ok_or_else(|| Error::InvalidArgument(format!("evaluation point {lambda0} is not finite")))
}

/// `log2 |v|` for a nonzero integer, accurate to double precision.
fn log2_abs(v: &BigInt) -> f64 {
    let bits = v.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (v.abs() >> shift as u64).to_f64().unwrap_or(f64::NAN);
    top.log2() + shift as f64
}

/// `q^n φ(a/q)` as an integer.
fn scaled_value(p: &IntPolynomial, a: &BigInt, q: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    // Horner in a with the q powers distributed from the top
    for (i, c) in p.coefficients.iter().enumerate().rev() {
        acc = acc * a + c * &qpow;
        if i > 0 {
            qpow *= q;
        }
    }
    acc
}

fn product_tree(mut xs: Vec<BigInt>) -> BigInt {
    if xs.is_empty() {
        return BigInt::one();
    }
    while xs.len() > 1 {
        xs = xs
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
    }
    xs.pop().unwrap()
}

/// `(Π_π φ_π(λ0))^{2^{-|E|}}` from the exact product of all `2^{|E|}`
/// signed characteristic polynomials at `λ0`.
pub fn geometric_mean_evaluate(g: &Graph, lambda0: f64, budget: &Budget) -> Result<f64> {
    let x = exact(lambda0)?;
    let (a, q) = (x.numer().clone(), x.denom().clone());
    let mut classes: HashMap<IntPolynomial, u32> = HashMap::new();
    let mut count = 0usize;
    for p in all_signed_char_polys(g, budget)? {
        *classes.entry(p).or_insert(0) += 1;
        count += 1;
    }
    // Π φ_π(a/q) = Π N_π / q^{n·count}
    let factors: Vec<BigInt> = classes
        .iter()
        .map(|(p, &m)| num_traits::pow(scaled_value(p, &a, &q), m as usize))
        .collect();
    let numer = product_tree(factors);
    if numer.is_zero() {
        return Ok(0.0);
    }
    let log2 = log2_abs(&numer) - (g.vertex_count() * count) as f64 * log2_abs(&q);
    let root = (log2 / count as f64).exp2();
    if numer.is_negative() {
        return Err(Error::NegativeProduct(-root));
    }
    Ok(root)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmgmReport {
    pub lambda0: f64,
    pub status: CheckStatus,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub all_equal: bool,
    pub equality: bool,
    pub detail: String,
}

const AMGM_TOL: f64 = 1e-9;

/// `α(λ0) >= β(λ0)` with equality exactly when all `φ_π(λ0)` agree, under
/// the precondition `φ_π(λ0) >= 0` for every signing.
pub fn amgm_check(g: &Graph, lambda0: f64, budget: &Budget) -> Result<AmgmReport> {
    let x = exact(lambda0)?;
    let alpha = matching_polynomial(g, MatchingMethod::Direct, budget)?
        .eval(&x)
        .to_f64()
        .unwrap_or(f64::NAN);
    let values: Vec<f64> = all_signed_char_polys(g, budget)?
        .iter()
        .map(|p| p.eval_rational(&x).to_f64().unwrap_or(f64::NAN))
        .collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let all_equal = hi - lo <= AMGM_TOL * hi.abs().max(1.0);
    if lo < 0.0 {
        return Ok(AmgmReport {
            lambda0,
            status: CheckStatus::Skipped,
            alpha,
            beta: None,
            all_equal,
            equality: false,
            detail: format!("precondition unmet: min φ_π({lambda0}) = {lo}"),
        });
    }
    let beta = geometric_mean_evaluate(g, lambda0, budget)?;
    let scale = AMGM_TOL * alpha.abs().max(1.0);
    let dominated = alpha >= beta - scale;
    let equality = (alpha - beta).abs() <= scale;
    let pass = dominated && equality == all_equal;
    Ok(AmgmReport {
        lambda0,
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        alpha,
        beta: Some(beta),
        all_equal,
        equality,
        detail: format!(
            "α = {alpha}, β = {beta}, {}",
            if equality { "equal" } else { "strict" }
        ),
    })
}
