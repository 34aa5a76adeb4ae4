//! Signed graphs: signing enumeration, exact characteristic polynomials,
//! numeric spectra, balance, and the clustered set of squared eigenvalues of
//! all signed subgraphs.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::bigfloat::{self, BigFloat};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{canonical_certificate, connected_induced_vertex_sets, connected_subgraph_census, Graph};
use crate::linalg::IntMatrix;
use crate::poly::IntPolynomial;

/// A graph together with a sign `+1`/`-1` per edge (aligned with
/// `base.edges()`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedGraph {
    base: Graph,
    signs: Vec<i8>,
}

impl SignedGraph {
    pub fn new(base: Graph, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != base.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "{} signs for {} edges",
                signs.len(),
                base.edge_count()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(SignedGraph { base, signs })
    }

    pub fn all_positive(base: Graph) -> Self {
        let signs = vec![1; base.edge_count()];
        SignedGraph { base, signs }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn negated(&self) -> Self {
        SignedGraph {
            base: self.base.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// Conjugation by the diagonal matrix `diag(flip)`.
    pub fn switched(&self, flip: &[i8]) -> Self {
        let signs = self
            .base
            .edges()
            .iter()
            .zip(&self.signs)
            .map(|(&(u, v), &s)| s * flip[u] * flip[v])
            .collect();
        SignedGraph {
            base: self.base.clone(),
            signs,
        }
    }

    pub fn adjacency(&self) -> IntMatrix {
        let n = self.base.vertex_count();
        let mut a = IntMatrix::zeros(n);
        for (&(u, v), &s) in self.base.edges().iter().zip(&self.signs) {
            a.set(u, v, BigInt::from(s));
            a.set(v, u, BigInt::from(s));
        }
        a
    }

    fn adjacency_f64(&self) -> Vec<Vec<f64>> {
        let n = self.base.vertex_count();
        let mut a = vec![vec![0.0; n]; n];
        for (&(u, v), &s) in self.base.edges().iter().zip(&self.signs) {
            a[u][v] = s as f64;
            a[v][u] = s as f64;
        }
        a
    }
}

/// Spanning-forest edge flags via BFS.
fn tree_edges(g: &Graph) -> Vec<bool> {
    let adj = g.incidence();
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = vec![false; g.edge_count()];
    for s in 0..g.vertex_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    tree
}

/// All `2^|E|` signings, or one representative per switching class
/// (spanning-forest edges fixed to `+1`, free signs on the remaining edges).
/// Signing `i` assigns `-1` to edge `j` when bit `j` of the free-edge mask is
/// set, so the enumeration order is deterministic.
pub fn enumerate_signings(
    g: &Graph,
    up_to_switching: bool,
    budget: &Budget,
) -> Result<Vec<SignedGraph>> {
    let free: Vec<usize> = if up_to_switching {
        let tree = tree_edges(g);
        (0..g.edge_count()).filter(|&e| !tree[e]).collect()
    } else {
        (0..g.edge_count()).collect()
    };
    Budget::check_size("free sign count", free.len(), budget.max_signing_edges)?;
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut signs = vec![1i8; g.edge_count()];
        for (bit, &e) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                signs[e] = -1;
            }
        }
        out.push(SignedGraph {
            base: g.clone(),
            signs,
        });
    }
    Ok(out)
}

/// Size of each switching class: `2^(|V| - c)`.
pub fn switching_class_size(g: &Graph) -> u64 {
    1u64 << (g.vertex_count() - g.components().1)
}

pub fn char_poly_exact(sg: &SignedGraph) -> Result<IntPolynomial> {
    Ok(IntPolynomial::new(sg.adjacency().characteristic_polynomial()?))
}

pub fn signed_spectral_moment(sg: &SignedGraph, d: usize) -> BigInt {
    sg.adjacency().pow(d).trace()
}

/// True iff every cycle has positive sign product.
pub fn is_balanced(sg: &SignedGraph) -> bool {
    let g = &sg.base;
    let adj = g.incidence();
    let mut potential = vec![0i8; g.vertex_count()];
    for s in 0..g.vertex_count() {
        if potential[s] != 0 {
            continue;
        }
        potential[s] = 1;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                let want = potential[u] * sg.signs[e];
                if potential[w] == 0 {
                    potential[w] = want;
                    queue.push_back(w);
                } else if potential[w] != want {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealSpectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Largest `||Ax - λx||` over the computed eigenpairs.
    pub residual_bound: f64,
}

const JACOBI_SWEEPS: usize = 100;

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix. Returns
/// eigenvalues and column eigenvectors.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect())
        .collect();
    let frob: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let off = |m: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut converged = n < 2;
    for _ in 0..JACOBI_SWEEPS {
        if off(&m) <= 1e-15 * frob.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off(&m) > 1e-12 * frob.max(1.0) {
        return Err(Error::NonConvergence(format!(
            "off-diagonal norm {:e} after {JACOBI_SWEEPS} sweeps",
            off(&m)
        )));
    }
    let vals = (0..n).map(|i| m[i][i]).collect();
    Ok((vals, v))
}

pub fn symmetric_spectrum(a: &[Vec<f64>], tol: f64) -> Result<RealSpectrum> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let n = a.len();
    let (vals, vecs) = jacobi_eigen(a)?;
    let mut residual_bound: f64 = 0.0;
    for (j, &lambda) in vals.iter().enumerate() {
        let mut r2 = 0.0;
        for i in 0..n {
            let ax: f64 = (0..n).map(|k| a[i][k] * vecs[k][j]).sum();
            let d = ax - lambda * vecs[i][j];
            r2 += d * d;
        }
        residual_bound = residual_bound.max(r2.sqrt());
    }
    if residual_bound > tol {
        return Err(Error::NonConvergence(format!(
            "eigenpair residual {residual_bound:e} exceeds {tol:e}"
        )));
    }
    let mut eigenvalues = vals;
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(RealSpectrum {
        eigenvalues,
        residual_bound,
    })
}

pub fn eigenvalues(sg: &SignedGraph, tol: f64) -> Result<RealSpectrum> {
    symmetric_spectrum(&sg.adjacency_f64(), tol)
}

/// Spectral radius of the unsigned graph.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<f64> {
    let s = eigenvalues(&SignedGraph::all_positive(g.clone()), tol)?;
    Ok(s.eigenvalues.first().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgraphMode {
    AllSubgraphs,
    InducedSubgraphs,
}

/// One signed subgraph realizing a cluster of `Σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaWitness {
    pub subgraph: Graph,
    pub signs: Vec<i8>,
    pub eigenvalue: f64,
    pub char_poly: IntPolynomial,
}

/// Clustered squares of nonzero eigenvalues of all connected signed
/// subgraphs, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSet {
    pub values: Vec<f64>,
    pub tolerance: f64,
    pub witnesses: Vec<SigmaWitness>,
}

impl SigmaSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Cluster containing `sigma_sq`, if any.
    pub fn index_of(&self, sigma_sq: f64) -> Option<usize> {
        let tol = self.tolerance.max(1e-12 * sigma_sq.abs());
        self.values
            .iter()
            .position(|&v| (v - sigma_sq).abs() <= 4.0 * tol)
    }

    /// Cluster values refined to `prec` bits as squares of simple roots of
    /// the witnesses' square-free characteristic polynomials.
    pub fn refined(&self, prec: u32) -> Result<Vec<BigFloat>> {
        self.witnesses
            .iter()
            .map(|w| {
                let sf = w.char_poly.to_rational().squarefree_part();
                let root = bigfloat::newton_root(&sf.coefficients, w.eigenvalue, prec)
                    .ok_or_else(|| {
                        Error::NonConvergence(format!(
                            "root refinement near {} did not settle",
                            w.eigenvalue
                        ))
                    })?;
                let sq = root.mul(&root, prec);
                if (sq.to_f64() - w.eigenvalue * w.eigenvalue).abs()
                    > 1e-6 * (1.0 + w.eigenvalue * w.eigenvalue)
                {
                    return Err(Error::NonConvergence(format!(
                        "root refinement near {} drifted to another root",
                        w.eigenvalue
                    )));
                }
                Ok(sq)
            })
            .collect()
    }
}

pub const DEFAULT_SIGMA_TOL: f64 = 1e-8;

pub fn sigma_set(g: &Graph, mode: SubgraphMode, tol: f64, budget: &Budget) -> Result<SigmaSet> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let subgraphs: Vec<Graph> = match mode {
        SubgraphMode::AllSubgraphs => {
            if g.edge_count() == 0 {
                Vec::new()
            } else {
                connected_subgraph_census(g, g.edge_count(), budget)?
                    .entries
                    .into_iter()
                    .map(|e| e.motif.graph)
                    .collect()
            }
        }
        SubgraphMode::InducedSubgraphs => {
            let mut seen = BTreeMap::new();
            for vs in connected_induced_vertex_sets(g)? {
                let sub = g.induced_subgraph(&vs);
                seen.entry(canonical_certificate(&sub, budget)?).or_insert(sub);
            }
            seen.into_values().collect()
        }
    };

    let mut samples: Vec<(f64, SigmaWitness)> = Vec::new();
    for sub in &subgraphs {
        for sg in enumerate_signings(sub, true, budget)? {
            let poly = char_poly_exact(&sg)?;
            let zeros = poly.zero_root_multiplicity();
            let spec = eigenvalues(&sg, 1e-9)?;
            let mut by_mag = spec.eigenvalues.clone();
            by_mag.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
            for &lambda in by_mag.iter().take(by_mag.len() - zeros) {
                samples.push((
                    lambda * lambda,
                    SigmaWitness {
                        subgraph: sub.clone(),
                        signs: sg.signs().to_vec(),
                        eigenvalue: lambda,
                        char_poly: poly.clone(),
                    },
                ));
            }
        }
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut values: Vec<f64> = Vec::new();
    let mut witnesses: Vec<SigmaWitness> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (x, w) in samples {
        if x - last > tol {
            values.push(x);
            witnesses.push(w);
        }
        last = x;
    }
    let mut set = SigmaSet {
        values,
        tolerance: tol,
        witnesses,
    };
    // replace the Jacobi estimates by correctly rounded roots
    set.values = set.refined(128)?.iter().map(BigFloat::to_f64).collect();
    let values = &set.values;
    for pair in values.windows(2) {
        let gap = pair[1] - pair[0];
        if gap < 10.0 * tol {
            return Err(Error::ClusterAmbiguity {
                left: pair[0],
                right: pair[1],
                gap,
                tol,
            });
        }
    }
    Ok(set)
}
