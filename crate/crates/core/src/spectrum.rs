//! Exact spectral moments of `G^(k)`, the moment system `(M, P, N, D(k))`,
//! the factored characteristic polynomial, the spectral-radius multiplicity
//! and the `k = 2` extrapolation `β`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{BigFloat, Lu};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{connected_subgraph_census, Graph, MotifCensus};
use crate::signed::{sigma_set, spectral_radius, SigmaSet, SigmaWitness, SubgraphMode};
use crate::tensor::{moment_scale, rational_pow};
use crate::walks::{ratio_to_power, ParityTable};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const INTEGRALITY_TOL: f64 = 1e-6;
const MOMENT_TOL: f64 = 1e-6;

/// Exponent `|V| + (k-2)|E| - 1` of the hypergraph prefactor.
fn hyper_exponent(g: &Graph, k: usize) -> i64 {
    g.vertex_count() as i64 + (k as i64 - 2) * g.edge_count() as i64 - 1
}

fn check_prefactor(g: &Graph, k: usize, budget: &Budget) -> Result<()> {
    let bits = (hyper_exponent(g, k).max(0) as f64 * ((k - 1) as f64).log2()).ceil() as u64;
    if bits > budget.max_prefactor_bits {
        return Err(Error::SizeBound {
            what: "bit size of (k-1)^(|V|+(k-2)|E|-1)",
            limit: budget.max_prefactor_bits,
            actual: bits,
        });
    }
    Ok(())
}

/// Total degree `(|V|+(k-2)|E|) (k-1)^{|V|+(k-2)|E|-1}`, the eigenvalue count.
pub fn total_degree(g: &Graph, k: usize) -> BigInt {
    let e = hyper_exponent(g, k);
    if e < 0 {
        return BigInt::zero();
    }
    BigInt::from(e + 1) * BigInt::from(k - 1).pow(e as u32)
}

/// Per-motif contributions `p_{2ℓ}(Ĝ) D(k)_Ĝ N_G(Ĝ)`, summed, for a
/// prepared census and parity table.
fn motif_sum(
    census: &MotifCensus,
    table: &mut ParityTable,
    ell: usize,
    k: usize,
) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for entry in census.entries.iter().filter(|e| e.motif.graph.edge_count() <= ell) {
        let m = &entry.motif.graph;
        let p = &table.covering_sequence(m)?[2 * ell];
        if p.is_zero() {
            continue;
        }
        acc += moment_scale(m.vertex_count(), m.edge_count(), k)
            * BigRational::from_integer(BigInt::from(p.clone()) * BigInt::from(entry.count));
    }
    Ok(acc)
}

/// `𝒮_d(k)` exactly. Zero unless `k | d`; `𝒮_0` is the eigenvalue count and
/// `k = 2` reproduces `P_d`.
pub fn script_s(g: &Graph, d: usize, k: usize, budget: &Budget) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    check_prefactor(g, k, budget)?;
    if d == 0 {
        return Ok(BigRational::from_integer(total_degree(g, k)));
    }
    if d % k != 0 || g.edge_count() == 0 {
        return Ok(BigRational::zero());
    }
    let ell = d / k;
    let census = connected_subgraph_census(g, ell.min(g.edge_count()), budget)?;
    let mut table = ParityTable::new(2 * ell, budget);
    let pref = rational_pow(k as i64 - 1, hyper_exponent(g, k));
    Ok(pref * motif_sum(&census, &mut table, ell, k)?)
}

/// The moment system for one `(G, k)`: clusters `Σ`, census to `ς` edges,
/// `P`, `N` and `D(k)`. `M` is formed from refined `σ_i²` at solve time.
#[derive(Debug, Clone)]
pub struct MomentSystem {
    pub graph: Graph,
    pub k: usize,
    pub sigma: SigmaSet,
    pub motifs: Option<MotifCensus>,
    /// `p[ℓ-1][i] = p_{2ℓ}(Ĝ_i)` for `ℓ = 1..=ς`.
    pub p: Vec<Vec<BigUint>>,
    pub n: Vec<u64>,
    pub dk: Vec<BigRational>,
}

impl MomentSystem {
    pub fn varsigma(&self) -> usize {
        self.sigma.len()
    }

    pub fn chi(&self) -> usize {
        self.n.len()
    }

    /// `(P D(k) N)_ℓ` for `ℓ = 1..=ς`.
    pub fn rhs(&self) -> Vec<BigRational> {
        self.p
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.dk)
                    .zip(&self.n)
                    .map(|((p, d), &n)| {
                        d * BigRational::from_integer(BigInt::from(p.clone()) * BigInt::from(n))
                    })
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// `M_{ℓi} = σ_i^{2ℓ}` in double precision, for display.
    pub fn m_f64(&self) -> Vec<Vec<f64>> {
        (1..=self.varsigma())
            .map(|l| self.sigma.values.iter().map(|s| s.powi(l as i32)).collect())
            .collect()
    }

    /// Certificates of the census motifs, in column order.
    pub fn motif_graphs(&self) -> Vec<&Graph> {
        self.motifs
            .iter()
            .flat_map(|c| c.entries.iter().map(|e| &e.motif.graph))
            .collect()
    }
}

pub fn build_system(g: &Graph, k: usize, tol: f64, budget: &Budget) -> Result<MomentSystem> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    check_prefactor(g, k, budget)?;
    let sigma = sigma_set(g, SubgraphMode::AllSubgraphs, tol, budget)?;
    let vs = sigma.len();
    if vs == 0 {
        return Ok(MomentSystem {
            graph: g.clone(),
            k,
            sigma,
            motifs: None,
            p: Vec::new(),
            n: Vec::new(),
            dk: Vec::new(),
        });
    }
    let census = connected_subgraph_census(g, vs.min(g.edge_count()), budget)?;
    let mut table = ParityTable::new(2 * vs, budget);
    let mut columns = Vec::with_capacity(census.entries.len());
    for entry in &census.entries {
        columns.push(table.covering_sequence(&entry.motif.graph)?);
    }
    let p = (1..=vs)
        .map(|l| columns.iter().map(|c| c[2 * l].clone()).collect())
        .collect();
    let n = census.entries.iter().map(|e| e.count).collect();
    let dk = census
        .entries
        .iter()
        .map(|e| moment_scale(e.motif.graph.vertex_count(), e.motif.graph.edge_count(), k))
        .collect();
    Ok(MomentSystem {
        graph: g.clone(),
        k,
        sigma,
        motifs: Some(census),
        p,
        n,
        dk,
    })
}

/// `λ^k - σ²` raised to `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFactor {
    pub sigma_sq: f64,
    pub witness: SigmaWitness,
    pub mu: BigRational,
    /// Distance of the solved exponent from `mu`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentCheck {
    pub order: usize,
    pub relative: f64,
}

/// `λ^{μ_0} Π (λ^k - σ_i²)^{μ_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredSpectralFunction {
    pub k: usize,
    pub mu0: BigRational,
    /// Every `Σ` cluster, including those whose exponent is zero.
    pub factors: Vec<SpectralFactor>,
    pub degree_check: bool,
    pub condition_estimate: f64,
    pub precision_bits: u32,
    pub moment_checks: Vec<MomentCheck>,
}

impl FactoredSpectralFunction {
    pub fn nonzero_factors(&self) -> impl Iterator<Item = &SpectralFactor> {
        self.factors.iter().filter(|f| !f.mu.is_zero())
    }

    pub fn zero_clusters(&self) -> impl Iterator<Item = &SpectralFactor> {
        self.factors.iter().filter(|f| f.mu.is_zero())
    }

    /// True when every exponent is a non-negative integer.
    pub fn is_polynomial(&self) -> bool {
        !self.mu0.is_negative()
            && self.mu0.is_integer()
            && self.factors.iter().all(|f| f.mu.is_integer() && !f.mu.is_negative())
    }

    pub fn all_nonnegative(&self) -> bool {
        !self.mu0.is_negative() && self.factors.iter().all(|f| !f.mu.is_negative())
    }

    /// Index of the factor whose `σ²` matches `sigma_sq`.
    pub fn factor_at(&self, sigma_sq: f64) -> Option<&SpectralFactor> {
        self.factors
            .iter()
            .min_by(|a, b| (a.sigma_sq - sigma_sq).abs().total_cmp(&(b.sigma_sq - sigma_sq).abs()))
            .filter(|f| (f.sigma_sq - sigma_sq).abs() <= 1e-6 * (1.0 + sigma_sq))
    }

    /// `|F(λ0)|`, evaluated in the log domain.
    pub fn evaluate_abs(&self, lambda0: f64) -> f64 {
        let mut log = 0.0;
        let mut zero = false;
        let mut add = |base: f64, mu: &BigRational| {
            if mu.is_zero() {
                return;
            }
            if base == 0.0 {
                zero = true;
                return;
            }
            log += mu.to_f64().unwrap_or(f64::NAN) * base.abs().ln();
        };
        add(lambda0, &self.mu0);
        for f in &self.factors {
            add(lambda0.powi(self.k as i32) - f.sigma_sq, &f.mu);
        }
        if zero {
            0.0
        } else {
            log.exp()
        }
    }

    /// Real value of `F(λ0)` when every negative base carries an integer
    /// exponent; `None` otherwise.
    pub fn evaluate(&self, lambda0: f64) -> Option<f64> {
        let mut negative = false;
        let mut sign = |base: f64, mu: &BigRational| -> Option<()> {
            if base < 0.0 && !mu.is_zero() {
                if !mu.is_integer() {
                    return None;
                }
                if mu.to_integer().is_odd() {
                    negative = !negative;
                }
            }
            Some(())
        };
        sign(lambda0, &self.mu0)?;
        for f in &self.factors {
            sign(lambda0.powi(self.k as i32) - f.sigma_sq, &f.mu)?;
        }
        let v = self.evaluate_abs(lambda0);
        Some(if negative { -v } else { v })
    }

    /// `F(λ0)^2`, using the doubled exponents; `None` if one of them is
    /// fractional at a negative base.
    pub fn evaluate_squared(&self, lambda0: f64) -> Option<f64> {
        let mut doubled = self.clone();
        let two = BigRational::from_integer(BigInt::from(2));
        doubled.mu0 = &doubled.mu0 * &two;
        for f in &mut doubled.factors {
            f.mu = &f.mu * &two;
        }
        doubled.evaluate(lambda0)
    }
}

fn format_sigma_sq(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        format!("{}", r as i64)
    } else {
        format!("{x:.10}")
    }
}

fn format_exponent(mu: &BigRational) -> String {
    if mu.is_integer() {
        format!("^{mu}")
    } else {
        format!("^({mu})")
    }
}

impl fmt::Display for FactoredSpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.mu0.is_zero() {
            if self.mu0.is_one() {
                parts.push("λ".to_string());
            } else {
                parts.push(format!("λ{}", format_exponent(&self.mu0)));
            }
        }
        let kpow = if self.k == 1 {
            "λ".to_string()
        } else {
            format!("λ^{}", self.k)
        };
        for fac in self.nonzero_factors() {
            let base = format!("({kpow} − {})", format_sigma_sq(fac.sigma_sq));
            if fac.mu.is_one() {
                parts.push(base);
            } else {
                parts.push(format!("{base}{}", format_exponent(&fac.mu)));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

struct Solved {
    mu: Vec<BigFloat>,
    prec: u32,
    condition: f64,
}

fn solve_at(sys: &MomentSystem, rhs: &[BigRational], scale: &BigRational, prec: u32) -> Result<Solved> {
    let sigma_sq = sys.sigma.refined(prec)?;
    let n = sigma_sq.len();
    let mut rows = Vec::with_capacity(n);
    let mut power = vec![BigFloat::from_i64(1, prec); n];
    for _ in 0..n {
        for (p, s) in power.iter_mut().zip(&sigma_sq) {
            *p = p.mul(s, prec);
        }
        rows.push(power.clone());
    }
    let lu = Lu::new(&rows, prec).ok_or(Error::SingularSystem)?;
    let b: Vec<BigFloat> = rhs
        .iter()
        .map(|r| BigFloat::from_rational(&(r * scale), prec))
        .collect();
    Ok(Solved {
        mu: lu.solve(&b),
        prec,
        condition: lu.condition_number(&rows),
    })
}

/// Solves the system with precision escalation. Each round doubles the
/// working precision; the result is accepted once two consecutive rounds
/// round to the same lattice points and every residual is within
/// `INTEGRALITY_TOL`.
fn solve_exponents(
    sys: &MomentSystem,
    quantum: &BigRational,
    precision_bits: u32,
    budget: &Budget,
) -> Result<(Vec<BigRational>, Vec<f64>, Solved)> {
    let k = sys.k as i64;
    // μ/quantum = pref/(k quantum) M^{-1} (P D N)
    let scale = rational_pow(k - 1, hyper_exponent(&sys.graph, sys.k))
        / (BigRational::from_integer(BigInt::from(k)) * quantum);
    let rhs = sys.rhs();
    let round = |s: &Solved| -> (Vec<BigInt>, Vec<f64>) {
        s.mu
            .iter()
            .map(|x| (x.round_to_integer(), x.distance_to_integer(s.prec)))
            .unzip()
    };
    let mut prec = precision_bits.max(64);
    let mut previous: Option<Vec<BigInt>> = None;
    loop {
        let solved = solve_at(sys, &rhs, &scale, prec)?;
        let (ints, dist) = round(&solved);
        let worst = dist
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, &d)| (i, d));
        let stable = previous.as_ref() == Some(&ints);
        let q = quantum.to_f64().unwrap_or(1.0);
        let ok = worst.map_or(true, |(_, d)| d * q <= INTEGRALITY_TOL);
        if stable && ok {
            let mu = ints
                .into_iter()
                .map(|i| BigRational::from_integer(i) * quantum)
                .collect();
            let residuals = dist.into_iter().map(|d| d * q).collect();
            return Ok((mu, residuals, solved));
        }
        if prec.saturating_mul(2) > budget.max_precision_bits {
            let (index, residual) = worst.unwrap_or((0, 0.0));
            return Err(Error::RoundingResidual {
                index,
                residual: residual * q,
                precision: prec,
            });
        }
        previous = Some(ints);
        prec *= 2;
    }
}

/// `k Σ μ_i σ_i^{2ℓ}` against `𝒮_{ℓk}(k)` for `ℓ = 1..=min(2ς, 8)`.
fn moment_checks(
    g: &Graph,
    k: usize,
    sigma: &SigmaSet,
    mu: &[BigRational],
    prec: u32,
    budget: &Budget,
) -> Result<Vec<MomentCheck>> {
    let orders = (2 * sigma.len()).min(8);
    if orders == 0 {
        return Ok(Vec::new());
    }
    let sigma_sq = sigma.refined(prec)?;
    let census = connected_subgraph_census(g, orders.min(g.edge_count()), budget)?;
    let mut table = ParityTable::new(2 * orders, budget);
    let pref = rational_pow(k as i64 - 1, hyper_exponent(g, k));
    let mut out = Vec::with_capacity(orders);
    for ell in 1..=orders {
        let exact = &pref * motif_sum(&census, &mut table, ell, k)?;
        let exact_f = BigFloat::from_rational(&exact, prec);
        let mut acc = BigFloat::zero();
        for (s, m) in sigma_sq.iter().zip(mu) {
            let term = s.powi(ell as u32, prec).mul(&BigFloat::from_rational(m, prec), prec);
            acc = acc.add(&term, prec);
        }
        acc = acc.mul(&BigFloat::from_i64(k as i64, prec), prec);
        let diff = acc.sub(&exact_f, prec).abs().to_f64();
        let denom = exact_f.abs().to_f64().max(1.0);
        let relative = diff / denom;
        if !(relative <= MOMENT_TOL) {
            return Err(Error::MomentMismatch {
                order: ell * k,
                relative,
            });
        }
        out.push(MomentCheck {
            order: ell * k,
            relative,
        });
    }
    Ok(out)
}

/// Turns a built system into the factored function. For `k >= 3` the
/// exponents are integers; for `k = 2` they are multiples of `2^{-|E|}`.
pub fn solve_system(
    sys: &MomentSystem,
    precision_bits: u32,
    budget: &Budget,
) -> Result<FactoredSpectralFunction> {
    let g = &sys.graph;
    let k = sys.k;
    let quantum = if k == 2 {
        rational_pow(2, -(g.edge_count() as i64))
    } else {
        BigRational::one()
    };
    let (mu, residuals, solved) = if sys.varsigma() == 0 {
        let s = Solved {
            mu: Vec::new(),
            prec: precision_bits,
            condition: 1.0,
        };
        (Vec::new(), Vec::new(), s)
    } else {
        solve_exponents(sys, &quantum, precision_bits, budget)?
    };
    let total = BigRational::from_integer(total_degree(g, k));
    let kr = BigRational::from_integer(BigInt::from(k));
    let sum: BigRational = mu.iter().fold(BigRational::zero(), |a, b| a + b);
    let mu0 = &total - &kr * &sum;
    let degree_check = !mu0.is_negative() && &mu0 + &kr * &sum == total;
    let moment_checks = moment_checks(g, k, &sys.sigma, &mu, solved.prec, budget)?;
    let factors = sys
        .sigma
        .values
        .iter()
        .zip(&sys.sigma.witnesses)
        .zip(mu.into_iter().zip(residuals))
        .map(|((&sigma_sq, w), (mu, residual))| SpectralFactor {
            sigma_sq,
            witness: w.clone(),
            mu,
            residual,
        })
        .collect();
    Ok(FactoredSpectralFunction {
        k,
        mu0,
        factors,
        degree_check,
        condition_estimate: solved.condition,
        precision_bits: solved.prec,
        moment_checks,
    })
}

/// Factored characteristic polynomial of `G^(k)`, `k >= 3`, connected `G`.
pub fn char_poly_power(
    g: &Graph,
    k: usize,
    tol: f64,
    precision_bits: u32,
    budget: &Budget,
) -> Result<FactoredSpectralFunction> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "char_poly_power needs k >= 3, got {k} (use beta for k = 2)"
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let sys = build_system(g, k, tol, budget)?;
    solve_system(&sys, precision_bits, budget)
}

/// `β(λ)`, the `k = 2` instance of the factored function.
pub fn beta(g: &Graph, tol: f64, precision_bits: u32, budget: &Budget) -> Result<FactoredSpectralFunction> {
    let sys = build_system(g, 2, tol, budget)?;
    solve_system(&sys, precision_bits, budget)
}

/// Expected exponent `2^{|V|-|E|-1}` of `β` at `ρ(G)²`.
pub fn beta_radius_exponent(g: &Graph) -> BigRational {
    rational_pow(2, g.vertex_count() as i64 - g.edge_count() as i64 - 1)
}

/// `k^{|E|(k-3)+|V|-1}`.
pub fn spectral_radius_multiplicity(g: &Graph, k: usize) -> Result<BigUint> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k must be at least 3, got {k}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let e = g.edge_count() as i64 * (k as i64 - 3) + g.vertex_count() as i64 - 1;
    Ok(BigUint::from(k).pow(e as u32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusReport {
    pub k: usize,
    pub rho: f64,
    pub formula: BigUint,
    pub n_rho: BigUint,
    pub pipeline: Option<BigRational>,
    pub holds: bool,
}

/// Compares the formula with the exponent of the `ρ(G)²` cluster.
pub fn radius_cross_check(
    g: &Graph,
    k: usize,
    factored: &FactoredSpectralFunction,
) -> Result<RadiusReport> {
    let formula = spectral_radius_multiplicity(g, k)?;
    let rho = spectral_radius(g, 1e-9)?;
    let pipeline = factored.factor_at(rho * rho).map(|f| f.mu.clone());
    let holds = pipeline
        .as_ref()
        .is_some_and(|m| *m == BigRational::from_integer(BigInt::from(formula.clone())));
    Ok(RadiusReport {
        k,
        rho,
        n_rho: &formula * BigUint::from(k),
        formula,
        pipeline,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitDiagnostic {
    pub k: usize,
    pub n_rho: f64,
    /// `(ℓ, 2^{|E|-|V|} k^{|E|(k-3)+|V|} P_{2ℓ} / ρ^{2ℓ})`.
    pub ratios: Vec<(usize, f64)>,
}

impl LimitDiagnostic {
    pub fn relative_gap(&self) -> f64 {
        self.ratios
            .last()
            .map_or(f64::INFINITY, |&(_, r)| (r - self.n_rho).abs() / self.n_rho)
    }
}

pub fn limit_diagnostic(g: &Graph, k: usize, max_ell: usize, budget: &Budget) -> Result<LimitDiagnostic> {
    let formula = spectral_radius_multiplicity(g, k)?;
    let n_rho = (formula * BigUint::from(k)).to_f64().unwrap_or(f64::INFINITY);
    let rho = spectral_radius(g, 1e-12)?;
    let (v, e, ki) = (g.vertex_count() as i64, g.edge_count() as i64, k as i64);
    let scale = rational_pow(2, e - v) * rational_pow(ki, e * (ki - 3) + v);
    let scale = scale.to_f64().unwrap_or(f64::NAN);
    let mut table = ParityTable::new(2 * max_ell, budget);
    let seq = table.parity_sequence(g)?;
    let ratios = (1..=max_ell)
        .map(|l| (l, scale * ratio_to_power(&seq[2 * l], rho * rho, l)))
        .collect();
    Ok(LimitDiagnostic { k, n_rho, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::DEFAULT_SIGMA_TOL;

    fn b() -> Budget {
        Budget::default()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn script_s_examples() {
        let k2 = Graph::path(2);
        assert_eq!(script_s(&k2, 3, 3, &b()).unwrap(), int(9));
        assert_eq!(script_s(&k2, 4, 3, &b()).unwrap(), int(0));
        let c3 = Graph::cycle(3).unwrap();
        assert_eq!(script_s(&c3, 4, 2, &b()).unwrap(), int(18));
        assert!(script_s(&k2, 2, 1, &b()).is_err());
    }

    #[test]
    fn build_system_examples() {
        let sys = build_system(&Graph::path(2), 3, DEFAULT_SIGMA_TOL, &b()).unwrap();
        assert_eq!((sys.varsigma(), sys.chi()), (1, 1));
        assert_eq!(sys.m_f64(), vec![vec![1.0]]);
        assert_eq!(sys.p, vec![vec![BigUint::from(2u32)]]);
        assert_eq!(sys.n, vec![1]);
        assert_eq!(sys.dk, vec![rat(9, 8)]);

        let sys = build_system(&Graph::path(3), 3, DEFAULT_SIGMA_TOL, &b()).unwrap();
        assert_eq!((sys.varsigma(), sys.chi()), (2, 2));
        let sys = build_system(&Graph::cycle(3).unwrap(), 3, DEFAULT_SIGMA_TOL, &b()).unwrap();
        assert_eq!((sys.varsigma(), sys.chi()), (3, 3));
    }

    #[test]
    fn char_poly_of_single_edge() {
        let f = char_poly_power(&Graph::path(2), 3, DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        assert_eq!(f.mu0, int(3));
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].mu, int(3));
        assert!(f.degree_check);
        assert_eq!(f.to_string(), "λ^3 (λ^3 − 1)^3");

        let f = char_poly_power(&Graph::path(2), 4, DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        assert_eq!(f.factors[0].mu, int(16));
        assert_eq!(f.mu0, int(44));
    }

    #[test]
    fn char_poly_rejects_bad_input() {
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            char_poly_power(&two, 3, DEFAULT_SIGMA_TOL, 256, &b()).unwrap_err(),
            Error::Disconnected
        );
        assert!(char_poly_power(&Graph::path(2), 2, DEFAULT_SIGMA_TOL, 256, &b()).is_err());
    }

    #[test]
    fn radius_multiplicity_examples() {
        assert_eq!(spectral_radius_multiplicity(&Graph::path(2), 3).unwrap(), BigUint::from(3u32));
        let c3 = Graph::cycle(3).unwrap();
        assert_eq!(spectral_radius_multiplicity(&c3, 3).unwrap(), BigUint::from(9u32));
        let k2 = Graph::path(2);
        let f = char_poly_power(&k2, 4, DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        let r = radius_cross_check(&k2, 4, &f).unwrap();
        assert!(r.holds);
        assert_eq!(r.formula, BigUint::from(16u32));
    }

    #[test]
    fn beta_examples() {
        let c3 = Graph::cycle(3).unwrap();
        let f = beta(&c3, DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        let nonzero: Vec<(f64, BigRational)> =
            f.nonzero_factors().map(|x| (x.sigma_sq, x.mu.clone())).collect();
        assert_eq!(nonzero.len(), 2);
        assert!((nonzero[0].0 - 1.0).abs() < 1e-9 && nonzero[0].1 == int(1));
        assert!((nonzero[1].0 - 4.0).abs() < 1e-9 && nonzero[1].1 == rat(1, 2));
        assert_eq!(f.mu0, int(0));
        assert_eq!(f.to_string(), "(λ^2 − 1) (λ^2 − 4)^(1/2)");

        let f = beta(&Graph::path(2), DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        assert_eq!(f.to_string(), "(λ^2 − 1)");
        let f = beta(&Graph::path(3), DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        assert_eq!(f.mu0, int(1));
        assert!(f.is_polynomial());
    }

    #[test]
    fn beta_evaluation() {
        let c3 = Graph::cycle(3).unwrap();
        let f = beta(&c3, DEFAULT_SIGMA_TOL, 256, &b()).unwrap();
        let want = 8.0 * 5f64.sqrt();
        assert!((f.evaluate(3.0).unwrap() - want).abs() < 1e-9);
        // (λ² - 4)^{1/2} at λ = 1.5 has a negative base
        assert!(f.evaluate(1.5).is_none());
        let sq = f.evaluate_squared(1.5).unwrap();
        // φ_{C3}(x) = x³ - 3x - 2 at x = 1.5² - 2
        let x = 1.5f64 * 1.5 - 2.0;
        assert!((sq - (x * x * x - 3.0 * x - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn limit_ratio_constant_on_single_edge() {
        let d = limit_diagnostic(&Graph::path(2), 3, 30, &b()).unwrap();
        assert!(d.ratios.iter().all(|&(_, r)| (r - 9.0).abs() < 1e-9));
        let d = limit_diagnostic(&Graph::cycle(3).unwrap(), 3, 30, &b()).unwrap();
        assert!(d.relative_gap() < 0.05);
    }
}
