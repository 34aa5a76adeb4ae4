//! Exact counts of closed walks, parity-closed walks (every edge used an
//! even number of times) and covering parity-closed walks.
//!
//! Walks are rooted and directed: a closed walk is a vertex sequence with a
//! distinguished start, so counts agree with `trace(A^d)`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{canonical_certificate, Certificate, Graph};
use crate::linalg::IntMatrix;
use crate::signed::{enumerate_signings, SignedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkCount {
    pub length: usize,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub value: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityMethod {
    /// DP over (vertex, edge-parity mask).
    Dp,
    /// Mean of `trace(A_π^d)` over all signings.
    SignedMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveringMethod {
    /// DP with per-edge state {unused, odd, even-used}.
    Dp,
    /// Alternating sum of parity-closed counts over edge subsets.
    InclusionExclusion,
}

fn to_biguint(v: BigInt, what: &str) -> Result<BigUint> {
    v.to_biguint()
        .ok_or_else(|| Error::Internal(format!("{what} came out negative")))
}

pub fn closed_walk_count(g: &Graph, d: usize) -> WalkCount {
    let a = SignedGraph::all_positive(g.clone()).adjacency();
    WalkCount {
        length: d,
        value: a.pow(d).trace().to_biguint().expect("trace of a nonnegative matrix"),
    }
}

fn parity_dp(g: &Graph, d: usize, budget: &Budget) -> Result<BigUint> {
    let m = g.edge_count();
    Budget::check_size("edge count for parity DP", m, budget.max_parity_dp_edges)?;
    let adj = g.incidence();
    let mut total = BigUint::zero();
    for start in 0..g.vertex_count() {
        // key: vertex << 32 | parity mask
        let mut layer: HashMap<u64, BigUint> = HashMap::from([((start as u64) << 32, 1u32.into())]);
        for _ in 0..d {
            let mut next: HashMap<u64, BigUint> = HashMap::with_capacity(layer.len() * 2);
            for (key, count) in &layer {
                let v = (key >> 32) as usize;
                let mask = key & 0xffff_ffff;
                for &(w, e) in &adj[v] {
                    let k = (w as u64) << 32 | (mask ^ (1 << e));
                    *next.entry(k).or_default() += count;
                }
            }
            if next.len() as u64 > budget.max_states {
                return Err(Error::BudgetExceeded {
                    what: "parity DP states",
                    budget: budget.max_states,
                });
            }
            layer = next;
        }
        if let Some(c) = layer.get(&((start as u64) << 32)) {
            total += c;
        }
    }
    Ok(total)
}

fn parity_signed_mean(g: &Graph, d: usize, budget: &Budget) -> Result<BigUint> {
    let signings = enumerate_signings(g, false, budget)?;
    let sum: BigInt = signings.iter().map(|sg| sg.adjacency().pow(d).trace()).sum();
    let count = BigInt::from(signings.len());
    let (q, r) = sum.div_rem(&count);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "mean of signed moments {sum}/{count} is not an integer"
        )));
    }
    to_biguint(q, "signed-mean parity count")
}

/// Number of closed walks of length `d` using every edge an even number of
/// times.
pub fn parity_closed_count(
    g: &Graph,
    d: usize,
    method: ParityMethod,
    budget: &Budget,
) -> Result<WalkCount> {
    let value = match method {
        ParityMethod::Dp => parity_dp(g, d, budget)?,
        ParityMethod::SignedMean => parity_signed_mean(g, d, budget)?,
    };
    Ok(WalkCount { length: d, value })
}

fn covering_dp(motif: &Graph, d: usize, budget: &Budget) -> Result<BigUint> {
    let m = motif.edge_count();
    Budget::check_size("edge count for covering DP", m, 24)?;
    let states = 3f64.powi(m as i32) * motif.vertex_count() as f64;
    if states > budget.max_states as f64 {
        return Err(Error::BudgetExceeded {
            what: "covering DP state space",
            budget: budget.max_states,
        });
    }
    let adj = motif.incidence();
    let all: u64 = (1u64 << m) - 1;
    // key: vertex << 48 | used << 24 | odd
    let mut total = BigUint::zero();
    for start in 0..motif.vertex_count() {
        let mut layer: HashMap<u64, BigUint> = HashMap::from([((start as u64) << 48, 1u32.into())]);
        for _ in 0..d {
            let mut next: HashMap<u64, BigUint> = HashMap::with_capacity(layer.len() * 2);
            for (key, count) in &layer {
                let v = (key >> 48) as usize;
                let used = key >> 24 & 0xff_ffff;
                let odd = key & 0xff_ffff;
                for &(w, e) in &adj[v] {
                    let k = (w as u64) << 48 | (used | 1 << e) << 24 | (odd ^ 1 << e);
                    *next.entry(k).or_default() += count;
                }
            }
            layer = next;
        }
        if let Some(c) = layer.get(&((start as u64) << 48 | all << 24)) {
            total += c;
        }
    }
    Ok(total)
}

fn covering_inclusion_exclusion(motif: &Graph, d: usize, budget: &Budget) -> Result<BigUint> {
    let m = motif.edge_count();
    Budget::check_size("edge count for inclusion-exclusion", m, 24)?;
    let mut acc = BigInt::zero();
    for mask in 0u32..(1u32 << m) {
        let kept: Vec<(usize, usize)> = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| motif.edges()[i])
            .collect();
        let sub = Graph::new(motif.vertex_count(), kept)?;
        let p = BigInt::from(parity_dp(&sub, d, budget)?);
        if (m - mask.count_ones() as usize) % 2 == 0 {
            acc += p;
        } else {
            acc -= p;
        }
    }
    to_biguint(acc, "covering count")
}

/// Closed walks of length `d` using every edge of `motif` a positive even
/// number of times.
pub fn covering_parity_closed_count(
    motif: &Graph,
    d: usize,
    method: CoveringMethod,
    budget: &Budget,
) -> Result<WalkCount> {
    if !motif.is_connected() || motif.edge_count() == 0 {
        return Err(Error::Disconnected);
    }
    let value = match method {
        CoveringMethod::Dp => covering_dp(motif, d, budget)?,
        CoveringMethod::InclusionExclusion => covering_inclusion_exclusion(motif, d, budget)?,
    };
    Ok(WalkCount { length: d, value })
}

/// Memoized parity-closed and covering sequences up to a fixed length,
/// keyed by isomorphism class. This is the bulk path used by the moment
/// pipeline: each connected class is evaluated once through switching-class
/// traces, `P_d = 2^{-cycle rank} Σ_reps trace(A^d)`.
#[derive(Debug)]
pub struct ParityTable {
    max_len: usize,
    budget: Budget,
    connected: HashMap<Certificate, Vec<BigUint>>,
}

impl ParityTable {
    pub fn new(max_len: usize, budget: &Budget) -> Self {
        ParityTable {
            max_len,
            budget: budget.clone(),
            connected: HashMap::new(),
        }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn connected_sequence(&mut self, g: &Graph) -> Result<Vec<BigUint>> {
        let cert = canonical_certificate(g, &self.budget)?;
        if let Some(seq) = self.connected.get(&cert) {
            return Ok(seq.clone());
        }
        let reps = enumerate_signings(g, true, &self.budget)?;
        let mut sums = vec![BigInt::zero(); self.max_len + 1];
        for sg in &reps {
            let a: IntMatrix = sg.adjacency();
            let mut power = IntMatrix::identity(g.vertex_count());
            sums[0] += power.trace();
            for s in sums.iter_mut().skip(1) {
                power = power.mul(&a);
                *s += power.trace();
            }
        }
        let count = BigInt::from(reps.len());
        let seq = sums
            .into_iter()
            .map(|s| {
                let (q, r) = s.div_rem(&count);
                if !r.is_zero() {
                    return Err(Error::Internal("non-integral class average".into()));
                }
                to_biguint(q, "parity count")
            })
            .collect::<Result<Vec<_>>>()?;
        self.connected.insert(cert, seq.clone());
        Ok(seq)
    }

    /// `P_d(g)` for `d = 0..=max_len`; `P_0` is the vertex count.
    pub fn parity_sequence(&mut self, g: &Graph) -> Result<Vec<BigUint>> {
        let mut out = vec![BigUint::zero(); self.max_len + 1];
        out[0] = BigUint::from(g.vertex_count());
        for comp in g.nontrivial_components() {
            let seq = self.connected_sequence(&comp)?;
            for (o, s) in out.iter_mut().zip(seq).skip(1) {
                *o += s;
            }
        }
        Ok(out)
    }

    /// `p_d(motif)` for `d = 0..=max_len`.
    pub fn covering_sequence(&mut self, motif: &Graph) -> Result<Vec<BigUint>> {
        if !motif.is_connected() || motif.edge_count() == 0 {
            return Err(Error::Disconnected);
        }
        let m = motif.edge_count();
        Budget::check_size("edge count for inclusion-exclusion", m, 24)?;
        let mut acc = vec![BigInt::zero(); self.max_len + 1];
        for mask in 0u32..(1u32 << m) {
            let kept = (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| motif.edges()[i]);
            let sub = Graph::new(motif.vertex_count(), kept)?;
            let seq = self.parity_sequence(&sub)?;
            let positive = (m - mask.count_ones() as usize) % 2 == 0;
            for (a, s) in acc.iter_mut().zip(seq) {
                if positive {
                    *a += BigInt::from(s);
                } else {
                    *a -= BigInt::from(s);
                }
            }
        }
        acc.into_iter()
            .map(|v| to_biguint(v, "covering count"))
            .collect()
    }
}

/// `P_d` as f64 ratio helper: `value / base^d` evaluated without overflow.
pub(crate) fn ratio_to_power(value: &BigUint, base: f64, d: usize) -> f64 {
    let bits = value.bits() as i64;
    let shift = (bits - 60).max(0);
    let top = (value >> shift as u64).to_f64().unwrap_or(f64::NAN);
    let log2 = top.log2() + shift as f64 - d as f64 * base.log2();
    if top == 0.0 {
        0.0
    } else {
        log2.exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn pc(g: &Graph, d: usize, m: ParityMethod) -> u64 {
        parity_closed_count(g, d, m, &b()).unwrap().value.try_into().unwrap()
    }

    fn cov(g: &Graph, d: usize, m: CoveringMethod) -> u64 {
        covering_parity_closed_count(g, d, m, &b())
            .unwrap()
            .value
            .try_into()
            .unwrap()
    }

    #[test]
    fn parity_examples() {
        let c3 = Graph::cycle(3).unwrap();
        for m in [ParityMethod::Dp, ParityMethod::SignedMean] {
            assert_eq!(pc(&c3, 2, m), 6);
            assert_eq!(pc(&c3, 3, m), 0);
            assert_eq!(pc(&c3, 4, m), 18);
            assert_eq!(pc(&Graph::path(3), 4, m), 8);
            assert_eq!(pc(&Graph::complete(4), 2, m), 12);
        }
    }

    #[test]
    fn covering_examples() {
        for m in [CoveringMethod::Dp, CoveringMethod::InclusionExclusion] {
            assert_eq!(cov(&Graph::path(2), 2, m), 2);
            assert_eq!(cov(&Graph::path(3), 4, m), 4);
            assert_eq!(cov(&Graph::cycle(3).unwrap(), 4, m), 0);
        }
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            covering_parity_closed_count(&two, 4, CoveringMethod::Dp, &b()),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn closed_walk_examples() {
        let v = |g: &Graph, d| -> u64 { closed_walk_count(g, d).value.try_into().unwrap() };
        assert_eq!(v(&Graph::path(2), 4), 2);
        assert_eq!(v(&Graph::cycle(3).unwrap(), 4), 18);
        assert_eq!(v(&Graph::path(3), 4), 8);
    }

    #[test]
    fn parity_dp_edge_cap() {
        let mut tight = b();
        tight.max_parity_dp_edges = 2;
        assert!(matches!(
            parity_closed_count(&Graph::cycle(3).unwrap(), 2, ParityMethod::Dp, &tight),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn table_agrees_with_direct_methods() {
        let g = Graph::complete_minus_edge(4).unwrap();
        let mut t = ParityTable::new(10, &b());
        let seq = t.parity_sequence(&g).unwrap();
        for d in 0..=10 {
            assert_eq!(seq[d], parity_closed_count(&g, d, ParityMethod::Dp, &b()).unwrap().value);
        }
        let cov = t.covering_sequence(&g).unwrap();
        for d in 0..=10 {
            assert_eq!(
                cov[d],
                covering_parity_closed_count(&g, d, CoveringMethod::Dp, &b()).unwrap().value
            );
        }
    }

    #[test]
    fn tree_walks_are_parity_closed() {
        let t = Graph::star(3);
        for d in 0..9 {
            assert_eq!(
                closed_walk_count(&t, d).value,
                parity_closed_count(&t, d, ParityMethod::Dp, &b()).unwrap().value
            );
        }
    }

    #[test]
    fn ratio_helper() {
        let v = BigUint::from(1u64 << 40);
        assert!((ratio_to_power(&v, 2.0, 38) - 4.0).abs() < 1e-12);
    }
}
