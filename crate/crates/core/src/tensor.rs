//! Multi-digraph machinery behind the tensor trace formula: arborescence
//! counts, Eulerian walk counts (BEST theorem and brute force), the
//! core-vertex lift/reduction between `D*` and `D`, and a direct evaluation
//! of the trace formula on small power hypergraphs.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{power_hypergraph, Graph, Hypergraph};
use crate::linalg::IntMatrix;
use crate::walks::{covering_parity_closed_count, CoveringMethod};

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `base^exp` for a possibly negative exponent.
pub(crate) fn rational_pow(base: i64, exp: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

/// Directed multigraph on `0..n` without self-arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multidigraph {
    n: usize,
    arcs: BTreeMap<(usize, usize), u64>,
}

impl Multidigraph {
    pub fn new(n: usize) -> Self {
        Multidigraph {
            n,
            arcs: BTreeMap::new(),
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = ((usize, usize), u64)>) -> Result<Self> {
        let mut d = Multidigraph::new(n);
        for ((u, v), m) in arcs {
            d.add_arcs(u, v, m)?;
        }
        Ok(d)
    }

    pub fn add_arcs(&mut self, u: usize, v: usize, m: u64) -> Result<()> {
        if u == v {
            return Err(Error::InvalidArgument(format!("self-arc at {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!("arc ({u},{v}) outside 0..{}", self.n)));
        }
        if m > 0 {
            *self.arcs.entry((u, v)).or_insert(0) += m;
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.arcs.get(&(u, v)).copied().unwrap_or(0)
    }

    pub fn arcs(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.arcs.iter().map(|(&k, &m)| (k, m))
    }

    pub fn arc_count(&self) -> u64 {
        self.arcs.values().sum()
    }

    pub fn out_degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.n];
        for (&(u, _), &m) in &self.arcs {
            d[u] += m;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.n];
        for (&(_, v), &m) in &self.arcs {
            d[v] += m;
        }
        d
    }

    pub fn non_isolated(&self) -> Vec<usize> {
        let out = self.out_degrees();
        let inn = self.in_degrees();
        (0..self.n).filter(|&v| out[v] + inn[v] > 0).collect()
    }

    fn support_connected(&self) -> bool {
        let verts = self.non_isolated();
        let Some(&first) = verts.first() else {
            return false;
        };
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in self.arcs.keys() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![first];
        seen[first] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        verts.iter().all(|&v| seen[v])
    }

    /// Balanced at every vertex and connected on its non-isolated vertices.
    pub fn is_eulerian(&self) -> bool {
        self.out_degrees() == self.in_degrees() && self.support_connected()
    }

    /// True when `m(u,v) + m(v,u)` is even for every pair, as for the
    /// reduction of a parity-closed walk.
    pub fn has_even_edge_totals(&self) -> bool {
        self.arcs
            .iter()
            .all(|(&(u, v), &m)| (m + self.multiplicity(v, u)) % 2 == 0)
    }

    /// `b(D)`: product of factorials of the arc multiplicities.
    pub fn multiplicity_factorials(&self) -> BigUint {
        self.arcs.values().map(|&m| factorial(m)).product()
    }

    /// Arc-multiplicity map as JSON: `{"n": 2, "arcs": {"0,1": 1, "1,0": 1}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let arcs: serde_json::Map<String, serde_json::Value> = self
            .arcs
            .iter()
            .map(|(&(u, v), &m)| (format!("{u},{v}"), serde_json::Value::from(m)))
            .collect();
        serde_json::json!({ "n": self.n, "arcs": arcs })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("multi-digraph JSON: {m}"));
        let n = value["n"].as_u64().ok_or_else(|| bad("missing `n`"))? as usize;
        let arcs = value["arcs"].as_object().ok_or_else(|| bad("missing `arcs` map"))?;
        let mut d = Multidigraph::new(n);
        for (key, m) in arcs {
            let (u, v) = key.split_once(',').ok_or_else(|| bad("arc keys look like \"u,v\""))?;
            let u: usize = u.trim().parse().map_err(|_| bad("bad tail"))?;
            let v: usize = v.trim().parse().map_err(|_| bad("bad head"))?;
            let m = m.as_u64().ok_or_else(|| bad("multiplicities are integers"))?;
            d.add_arcs(u, v, m)?;
        }
        Ok(d)
    }
}

/// Number of spanning in-trees oriented toward `root` on the non-isolated
/// vertices: the root-deleted minor of the out-degree Laplacian.
pub fn arborescence_count(d: &Multidigraph, root: usize) -> BigInt {
    let mut verts = d.non_isolated();
    if !verts.contains(&root) {
        verts.push(root);
        verts.sort_unstable();
    }
    let idx = |v: usize| verts.binary_search(&v).ok();
    let n = verts.len();
    let mut lap = IntMatrix::zeros(n);
    for ((u, v), m) in d.arcs() {
        let (Some(i), Some(j)) = (idx(u), idx(v)) else {
            continue;
        };
        let m = BigInt::from(m);
        let diag = lap.get(i, i) + &m;
        lap.set(i, i, diag);
        let off = lap.get(i, j) - &m;
        lap.set(i, j, off);
    }
    lap.minor(idx(root).expect("root present")).determinant()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerianMethod {
    Best,
    Brute,
}

const BRUTE_MAX_ARCS: u64 = 12;

fn best_count(d: &Multidigraph) -> Result<BigUint> {
    let root = *d.non_isolated().first().ok_or(Error::NotEulerian)?;
    let t = arborescence_count(d, root)
        .to_biguint()
        .ok_or_else(|| Error::Internal("negative arborescence count".into()))?;
    let fact: BigUint = d
        .out_degrees()
        .iter()
        .filter(|&&o| o > 0)
        .map(|&o| factorial(o - 1))
        .product();
    let numer = BigUint::from(d.arc_count()) * t * fact;
    let (q, r) = numer.div_rem(&d.multiplicity_factorials());
    if !r.is_zero() {
        return Err(Error::Internal("BEST count is not integral".into()));
    }
    Ok(q)
}

fn brute_count(d: &Multidigraph, budget: &Budget) -> Result<BigUint> {
    if d.arc_count() > BRUTE_MAX_ARCS {
        return Err(Error::SizeBound {
            what: "arc count for brute-force Eulerian enumeration",
            limit: BRUTE_MAX_ARCS,
            actual: d.arc_count(),
        });
    }
    let types: Vec<((usize, usize), u64)> = d.arcs().collect();
    let mut remaining: Vec<u64> = types.iter().map(|&(_, m)| m).collect();
    let total = d.arc_count();

    struct Search<'a> {
        types: &'a [((usize, usize), u64)],
        nodes: u64,
        limit: u64,
    }
    impl Search<'_> {
        fn walk(&mut self, at: usize, start: usize, left: u64, rem: &mut [u64]) -> Result<u64> {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::BudgetExceeded {
                    what: "Eulerian backtracking nodes",
                    budget: self.limit,
                });
            }
            if left == 0 {
                return Ok((at == start) as u64);
            }
            let mut count = 0;
            for i in 0..self.types.len() {
                let ((u, v), _) = self.types[i];
                if u == at && rem[i] > 0 {
                    rem[i] -= 1;
                    count += self.walk(v, start, left - 1, rem)?;
                    rem[i] += 1;
                }
            }
            Ok(count)
        }
    }
    let mut search = Search {
        types: &types,
        nodes: 0,
        limit: budget.max_states,
    };
    let mut count = 0u64;
    for i in 0..types.len() {
        let ((u, v), _) = types[i];
        remaining[i] -= 1;
        count += search.walk(v, u, total - 1, &mut remaining)?;
        remaining[i] += 1;
    }
    Ok(BigUint::from(count))
}

/// Closed arc-type sequences using every arc exactly its multiplicity,
/// distinguished by starting position.
pub fn eulerian_walk_count(
    d: &Multidigraph,
    method: EulerianMethod,
    budget: &Budget,
) -> Result<BigUint> {
    if !d.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    match method {
        EulerianMethod::Best => best_count(d),
        EulerianMethod::Brute => brute_count(d, budget),
    }
}

/// Arborescence counts for every non-isolated root.
pub fn arborescence_counts_all_roots(d: &Multidigraph) -> Vec<(usize, BigInt)> {
    d.non_isolated()
        .into_iter()
        .map(|r| (r, arborescence_count(d, r)))
        .collect()
}

/// `D` on the vertices of `G^(k)` together with the hypergraph it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub base: Graph,
    pub hypergraph: Hypergraph,
    pub digraph: Multidigraph,
}

/// Underlying simple graph of a multi-digraph, after checking that every
/// edge carries a positive even arc total.
fn support_graph(dstar: &Multidigraph) -> Result<Graph> {
    let mut totals: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for ((u, v), m) in dstar.arcs() {
        *totals.entry((u.min(v), u.max(v))).or_insert(0) += m;
    }
    for (&(u, v), &t) in &totals {
        if t % 2 == 1 {
            return Err(Error::OddEdgeTotal(u, v, t));
        }
    }
    Graph::new(dstar.vertex_count(), totals.into_keys())
}

/// Adds `k - 2` core vertices per edge `{i,j}` with `m(v,u) = (m(i,j)+m(j,i))/2`
/// for each core `v`, `m(i,v) = m(i,j)` and `m(j,v) = m(j,i)`.
pub fn lift_from_core(dstar: &Multidigraph, k: usize) -> Result<Lift> {
    let base = support_graph(dstar)?;
    if !dstar.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let h = power_hypergraph(&base, k)?;
    let mut d = Multidigraph::new(h.n);
    for ((u, v), m) in dstar.arcs() {
        d.add_arcs(u, v, m)?;
    }
    for entry in &h.core_map {
        let (i, j) = entry.base;
        let mij = dstar.multiplicity(i, j);
        let mji = dstar.multiplicity(j, i);
        let half = (mij + mji) / 2;
        for &v in &entry.cores {
            d.add_arcs(i, v, mij)?;
            d.add_arcs(j, v, mji)?;
            d.add_arcs(v, i, half)?;
            d.add_arcs(v, j, half)?;
            for &u in &entry.cores {
                if u != v {
                    d.add_arcs(v, u, half)?;
                }
            }
        }
    }
    Ok(Lift {
        base,
        hypergraph: h,
        digraph: d,
    })
}

/// Removes the core vertices after verifying the multiplicity relations.
pub fn reduce_to_core(d: &Multidigraph, h: &Hypergraph) -> Result<Multidigraph> {
    let rel = |m: String| Error::MultiplicityRelation(m);
    if d.vertex_count() != h.n {
        return Err(rel(format!("{} vertices, hypergraph has {}", d.vertex_count(), h.n)));
    }
    // every arc must stay inside one hyperedge
    let base_n = h.base_vertex_count();
    for ((u, v), _) in d.arcs() {
        let inside = match (h.hyperedge_of_core(u), h.hyperedge_of_core(v)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) => h.hyperedges[a].contains(&v),
            (None, Some(b)) => h.hyperedges[b].contains(&u),
            (None, None) => h.core_map.iter().any(|c| c.base == (u.min(v), u.max(v))),
        };
        if !inside {
            return Err(rel(format!("arc ({u},{v}) leaves its hyperedge")));
        }
    }
    for entry in &h.core_map {
        let (i, j) = entry.base;
        let mut he = vec![i, j];
        he.extend(&entry.cores);
        for &x in &he {
            let first = he.iter().find(|&&u| u != x).copied().unwrap();
            let want = d.multiplicity(x, first);
            if he.iter().any(|&u| u != x && d.multiplicity(x, u) != want) {
                return Err(rel(format!("vertex {x} has unequal arcs inside hyperedge {{{i},{j}}}")));
            }
        }
        let total = d.multiplicity(i, j) + d.multiplicity(j, i);
        for &v in &entry.cores {
            if 2 * d.multiplicity(v, i) != total {
                return Err(rel(format!(
                    "core {v}: 2 m(v,{i}) = {} but m({i},{j}) + m({j},{i}) = {total}",
                    2 * d.multiplicity(v, i)
                )));
            }
        }
    }
    if !d.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let mut out = Multidigraph::new(base_n);
    for ((u, v), m) in d.arcs() {
        if u < base_n && v < base_n {
            out.add_arcs(u, v, m)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningTreeReport {
    pub k: usize,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub direct: BigInt,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub reduced: BigInt,
    pub holds: bool,
}

/// Compares `t(D)` by determinant with
/// `t(D*) k^{|E|(k-3)+|V|-1} 2^{|E|-|V|+1} Π ((m(i,j)+m(j,i))/2)^{k-2}`.
pub fn spanning_tree_reduction_check(dstar: &Multidigraph, k: usize) -> Result<SpanningTreeReport> {
    let lift = lift_from_core(dstar, k)?;
    let root = *dstar.non_isolated().first().ok_or(Error::NotEulerian)?;
    let direct = arborescence_count(&lift.digraph, root);
    let v = dstar.non_isolated().len() as i64;
    let e = lift.base.edge_count() as i64;
    let k_i = k as i64;
    let mut reduced = BigRational::from_integer(arborescence_count(dstar, root))
        * rational_pow(k_i, e * (k_i - 3) + v - 1)
        * rational_pow(2, e - v + 1);
    for &(i, j) in lift.base.edges() {
        let half = ((dstar.multiplicity(i, j) + dstar.multiplicity(j, i)) / 2) as i64;
        reduced *= rational_pow(half, k_i - 2);
    }
    if !reduced.is_integer() {
        return Err(Error::Internal("reduced spanning-tree count is fractional".into()));
    }
    let reduced = reduced.to_integer();
    Ok(SpanningTreeReport {
        k,
        holds: direct == reduced,
        direct,
        reduced,
    })
}

/// Evaluates `Tr_d(A_H) = (k-1)^{n-1} Σ_f b(f)/c(f) π_f |W(f)|` by walking
/// every root-sorted sequence of `d` rooted hyperedges. The `(k-1)!`
/// orderings of each hyperedge's non-root vertices give identical `D_f` and
/// their tensor entries `1/(k-1)!` sum to one, so each rooted hyperedge
/// carries unit weight.
pub fn naive_tensor_trace(h: &Hypergraph, d: usize, budget: &Budget) -> Result<BigRational> {
    let n = h.n;
    let mut rooted: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, he) in h.hyperedges.iter().enumerate() {
        for &r in he {
            rooted[r].push(e);
        }
    }

    struct Walker<'a> {
        h: &'a Hypergraph,
        rooted: &'a [Vec<usize>],
        d: usize,
        arcs: Vec<Vec<u64>>,
        leaves: u64,
        limit: u64,
        sum: BigRational,
    }

    impl Walker<'_> {
        fn leaf(&mut self) -> Result<()> {
            self.leaves += 1;
            if self.leaves > self.limit {
                return Err(Error::BudgetExceeded {
                    what: "trace-formula terms",
                    budget: self.limit,
                });
            }
            let n = self.arcs.len();
            let mut digraph = Multidigraph::new(n);
            for u in 0..n {
                for v in (0..n).filter(|&v| v != u) {
                    digraph.add_arcs(u, v, self.arcs[u][v])?;
                }
            }
            if !digraph.is_eulerian() {
                return Ok(());
            }
            let walks = best_count(&digraph)?;
            let b = digraph.multiplicity_factorials();
            let c: BigUint = digraph.out_degrees().iter().map(|&o| factorial(o)).product();
            self.sum += BigRational::new(BigInt::from(b * walks), BigInt::from(c));
            Ok(())
        }

        fn step(&mut self, pos: usize, min_root: usize) -> Result<()> {
            if pos == self.d {
                return self.leaf();
            }
            for r in min_root..self.arcs.len() {
                for &e in &self.rooted[r] {
                    for &v in &self.h.hyperedges[e] {
                        if v != r {
                            self.arcs[r][v] += 1;
                        }
                    }
                    self.step(pos + 1, r)?;
                    for &v in &self.h.hyperedges[e] {
                        if v != r {
                            self.arcs[r][v] -= 1;
                        }
                    }
                }
            }
            Ok(())
        }
    }

    let mut walker = Walker {
        h,
        rooted: &rooted,
        d,
        arcs: vec![vec![0; n]; n],
        leaves: 0,
        limit: budget.max_terms,
        sum: BigRational::zero(),
    };
    if d == 0 {
        walker.sum = BigRational::from_integer(BigInt::from(n));
    } else {
        walker.step(0, 0)?;
    }
    let pref = BigInt::from(h.k as u64 - 1).pow(n.saturating_sub(1) as u32);
    Ok(walker.sum * BigRational::from_integer(pref))
}

/// `p_{2ℓ}(motif)` as a sum of BEST counts over all labelled Eulerian
/// multi-digraphs `D*` on the motif whose edge totals are positive and even
/// with `Σ (m(i,j)+m(j,i)) = 2ℓ`.
pub fn covering_parity_via_best(motif: &Graph, ell: usize, budget: &Budget) -> Result<BigUint> {
    if !motif.is_connected() || motif.edge_count() == 0 {
        return Err(Error::Disconnected);
    }
    let m = motif.edge_count();
    if ell < m {
        return Ok(BigUint::zero());
    }
    let mut total = BigUint::zero();
    let mut terms = 0u64;
    let mut halves = vec![1u64; m];

    // compositions of ell into m positive parts
    fn compositions(
        idx: usize,
        left: u64,
        halves: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]) -> Result<()>,
    ) -> Result<()> {
        if idx + 1 == halves.len() {
            halves[idx] = left;
            return visit(halves);
        }
        let rest = (halves.len() - idx - 1) as u64;
        for t in 1..=left - rest {
            halves[idx] = t;
            compositions(idx + 1, left - t, halves, visit)?;
        }
        Ok(())
    }

    let mut visit = |h: &[u64]| -> Result<()> {
        // each edge e with total 2h_e splits as (a, 2h_e - a)
        let mut split = vec![0u64; m];
        loop {
            terms += 1;
            if terms > budget.max_terms {
                return Err(Error::BudgetExceeded {
                    what: "arc-multiplicity assignments",
                    budget: budget.max_terms,
                });
            }
            let mut d = Multidigraph::new(motif.vertex_count());
            for (e, &(u, v)) in motif.edges().iter().enumerate() {
                d.add_arcs(u, v, split[e])?;
                d.add_arcs(v, u, 2 * h[e] - split[e])?;
            }
            if d.is_eulerian() {
                total += best_count(&d)?;
            }
            // odometer over splits
            let mut i = 0;
            loop {
                if i == m {
                    return Ok(());
                }
                if split[i] < 2 * h[i] {
                    split[i] += 1;
                    break;
                }
                split[i] = 0;
                i += 1;
            }
        }
    };
    compositions(0, ell as u64, &mut halves, &mut visit)?;
    Ok(total)
}

/// `2^{|E|-|V|} k^{|E|(k-3)+|V|} / (k-1)^{|V|+|E|(k-2)-1}` for a motif
/// with the given order and size.
pub fn moment_scale(vertices: usize, edges: usize, k: usize) -> BigRational {
    let (v, e, k) = (vertices as i64, edges as i64, k as i64);
    rational_pow(2, e - v) * rational_pow(k, e * (k - 3) + v) / rational_pow(k - 1, v + e * (k - 2) - 1)
}

/// Spectral moment coefficient `c_{ℓk}(motif^(k)) = scale · p_{2ℓ}(motif)`.
pub fn moment_coefficient(motif: &Graph, ell: usize, k: usize, budget: &Budget) -> Result<BigRational> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("moment coefficient needs k >= 3, got {k}")));
    }
    let p = covering_parity_closed_count(motif, 2 * ell, CoveringMethod::Dp, budget)?.value;
    Ok(moment_scale(motif.vertex_count(), motif.edge_count(), k)
        * BigRational::from_integer(BigInt::from(p)))
}

/// The hypertree form `k^{|E|(k-2)+1} / (2 (k-1)^{|V|+|E|(k-2)-1}) · c_{2ℓ}(T)`.
pub fn tree_moment_coefficient(tree: &Graph, ell: usize, k: usize, budget: &Budget) -> Result<BigRational> {
    if !tree.is_forest() || !tree.is_connected() {
        return Err(Error::InvalidArgument("expected a tree".into()));
    }
    let (v, e, ki) = (tree.vertex_count() as i64, tree.edge_count() as i64, k as i64);
    let p = covering_parity_closed_count(tree, 2 * ell, CoveringMethod::Dp, budget)?.value;
    Ok(rational_pow(ki, e * (ki - 2) + 1) / (rational_pow(ki - 1, v + e * (ki - 2) - 1) * BigInt::from(2))
        * BigRational::from_integer(BigInt::from(p)))
}

/// Every Eulerian multi-digraph whose underlying simple graph is `motif`
/// and which has at most `max_arcs` arcs.
pub fn eulerian_digraphs_on(motif: &Graph, max_arcs: u64, budget: &Budget) -> Result<Vec<Multidigraph>> {
    struct Gen<'a> {
        edges: &'a [(usize, usize)],
        n: usize,
        split: Vec<(u64, u64)>,
        out: Vec<Multidigraph>,
        visited: u64,
        limit: u64,
    }
    impl Gen<'_> {
        fn go(&mut self, idx: usize, left: u64) -> Result<()> {
            self.visited += 1;
            if self.visited > self.limit {
                return Err(Error::BudgetExceeded {
                    what: "Eulerian digraph generation",
                    budget: self.limit,
                });
            }
            if idx == self.edges.len() {
                let mut d = Multidigraph::new(self.n);
                for (&(u, v), &(a, b)) in self.edges.iter().zip(&self.split) {
                    d.add_arcs(u, v, a)?;
                    d.add_arcs(v, u, b)?;
                }
                if d.is_eulerian() {
                    self.out.push(d);
                }
                return Ok(());
            }
            // leave at least one arc for each remaining edge
            let reserve = (self.edges.len() - idx - 1) as u64;
            for total in 1..=left.saturating_sub(reserve) {
                for a in 0..=total {
                    self.split[idx] = (a, total - a);
                    self.go(idx + 1, left - total)?;
                }
            }
            Ok(())
        }
    }
    if motif.edge_count() as u64 > max_arcs {
        return Ok(Vec::new());
    }
    let mut gen = Gen {
        edges: motif.edges(),
        n: motif.vertex_count(),
        split: vec![(0, 0); motif.edge_count()],
        out: Vec::new(),
        visited: 0,
        limit: budget.max_terms,
    };
    gen.go(0, max_arcs)?;
    Ok(gen.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn two_cycle(m: u64) -> Multidigraph {
        Multidigraph::from_arcs(2, [((0, 1), m), ((1, 0), m)]).unwrap()
    }

    fn triangle() -> Multidigraph {
        Multidigraph::from_arcs(3, [((0, 1), 1), ((1, 2), 1), ((2, 0), 1)]).unwrap()
    }

    fn int(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arborescences() {
        assert_eq!(arborescence_count(&two_cycle(1), 0), BigInt::from(1));
        assert_eq!(arborescence_count(&triangle(), 0), BigInt::from(1));
        assert_eq!(arborescence_count(&two_cycle(2), 0), BigInt::from(2));
    }

    #[test]
    fn eulerian_counts() {
        for method in [EulerianMethod::Best, EulerianMethod::Brute] {
            assert_eq!(eulerian_walk_count(&two_cycle(1), method, &b()).unwrap(), int(2));
            assert_eq!(eulerian_walk_count(&triangle(), method, &b()).unwrap(), int(3));
            assert_eq!(eulerian_walk_count(&two_cycle(2), method, &b()).unwrap(), int(2));
        }
        let path = Multidigraph::from_arcs(2, [((0, 1), 1)]).unwrap();
        assert_eq!(
            eulerian_walk_count(&path, EulerianMethod::Best, &b()),
            Err(Error::NotEulerian)
        );
    }

    #[test]
    fn lift_examples() {
        let lift = lift_from_core(&two_cycle(1), 3).unwrap();
        let d = &lift.digraph;
        for (u, v) in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)] {
            assert_eq!(d.multiplicity(u, v), 1, "arc ({u},{v})");
        }
        assert_eq!(d.arc_count(), 6);
        assert!(d.is_eulerian());

        let one_way = Multidigraph::from_arcs(2, [((0, 1), 2)]).unwrap();
        // not Eulerian as D*, so the lift refuses
        assert_eq!(lift_from_core(&one_way, 3), Err(Error::NotEulerian));

        let odd = Multidigraph::from_arcs(2, [((0, 1), 1)]).unwrap();
        assert_eq!(lift_from_core(&odd, 3), Err(Error::OddEdgeTotal(0, 1, 1)));
    }

    #[test]
    fn one_way_core_arcs_balance() {
        // m(0,1)=2, m(1,0)=0 on K2 gives balanced core arcs; combined with a
        // second path back it lifts cleanly.
        let dstar = Multidigraph::from_arcs(3, [((0, 1), 2), ((1, 2), 2), ((2, 0), 2)]).unwrap();
        let lift = lift_from_core(&dstar, 3).unwrap();
        let core = lift.hypergraph.core_map[0].cores[0];
        assert_eq!(lift.digraph.multiplicity(core, 0), 1);
        assert_eq!(lift.digraph.multiplicity(0, core), 2);
        assert!(lift.digraph.is_eulerian());
    }

    #[test]
    fn reduce_round_trip_and_errors() {
        let lift = lift_from_core(&two_cycle(1), 3).unwrap();
        assert_eq!(reduce_to_core(&lift.digraph, &lift.hypergraph).unwrap(), two_cycle(1));

        // doubled triangle from the hexagonal parity walk 0,1,2,0,1,2,0
        let dstar = Multidigraph::from_arcs(3, [((0, 1), 2), ((1, 2), 2), ((2, 0), 2)]).unwrap();
        let lift = lift_from_core(&dstar, 3).unwrap();
        let back = reduce_to_core(&lift.digraph, &lift.hypergraph).unwrap();
        assert_eq!(back, dstar);
        let d = lift.digraph.arc_count() / 2; // |E(D)| = d(k-1)
        assert_eq!(back.arc_count(), 2 * d / 3);

        let lift = lift_from_core(&two_cycle(1), 4).unwrap();
        let mut broken = lift.digraph.clone();
        broken.add_arcs(2, 0, 1).unwrap();
        assert!(matches!(
            reduce_to_core(&broken, &lift.hypergraph),
            Err(Error::MultiplicityRelation(_))
        ));
    }

    #[test]
    fn spanning_tree_reduction_examples() {
        let r = spanning_tree_reduction_check(&two_cycle(1), 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.direct, BigInt::from(3));
        let r = spanning_tree_reduction_check(&two_cycle(1), 4).unwrap();
        assert!(r.holds, "{r:?}");
        let r = spanning_tree_reduction_check(&two_cycle(2), 3).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn naive_trace_of_single_hyperedge() {
        let h = power_hypergraph(&Graph::path(2), 3).unwrap();
        let want = [0, 0, 0, 9, 0, 0, 9];
        for (d, &w) in want.iter().enumerate().skip(1) {
            assert_eq!(naive_tensor_trace(&h, d, &b()).unwrap(), rat(w, 1), "d={d}");
        }
    }

    #[test]
    fn covering_via_best_examples() {
        assert_eq!(covering_parity_via_best(&Graph::path(2), 1, &b()).unwrap(), int(2));
        assert_eq!(covering_parity_via_best(&Graph::path(3), 2, &b()).unwrap(), int(4));
        assert_eq!(covering_parity_via_best(&Graph::cycle(3).unwrap(), 2, &b()).unwrap(), int(0));
    }

    #[test]
    fn moment_coefficient_examples() {
        assert_eq!(moment_coefficient(&Graph::path(2), 1, 3, &b()).unwrap(), rat(9, 4));
        assert_eq!(moment_coefficient(&Graph::path(3), 2, 3, &b()).unwrap(), rat(27, 8));
        assert_eq!(moment_coefficient(&Graph::path(2), 1, 4, &b()).unwrap(), rat(64, 27));
        for k in 3..6 {
            for ell in 1..5 {
                let t = Graph::path(3);
                assert_eq!(
                    moment_coefficient(&t, ell, k, &b()).unwrap(),
                    tree_moment_coefficient(&t, ell, k, &b()).unwrap()
                );
            }
        }
        assert!(moment_coefficient(&Graph::path(2), 1, 2, &b()).is_err());
    }

    #[test]
    fn eulerian_generation() {
        let c3 = Graph::cycle(3).unwrap();
        assert_eq!(eulerian_digraphs_on(&c3, 3, &b()).unwrap().len(), 2);
        assert_eq!(eulerian_digraphs_on(&Graph::path(2), 4, &b()).unwrap().len(), 2);
        for d in eulerian_digraphs_on(&c3, 8, &b()).unwrap() {
            assert!(d.is_eulerian() && d.arc_count() <= 8);
        }
    }

    #[test]
    fn digraph_json_round_trip() {
        let d = triangle();
        assert_eq!(Multidigraph::from_json(&d.to_json()).unwrap(), d);
    }
}
