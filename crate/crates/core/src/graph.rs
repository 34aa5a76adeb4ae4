//! Simple undirected graphs, isomorphism certificates, connected-motif
//! census and k-power hypergraph construction.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`. Edges are stored as `(u, v)`
/// with `u < v`, sorted lexicographically, so equal graphs compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {{{u},{v}}} has a label outside 0..{n}"
                )));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        for w in out.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge {{{},{}}}",
                    w[0].0, w[0].1
                )));
            }
        }
        Ok(Graph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// `K_{1,leaves}`: vertex 0 is the centre.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
    }

    /// `K_n` with the edge `{0,1}` removed.
    pub fn complete_minus_edge(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("K_n - e needs n >= 2, got {n}")));
        }
        let edges = Graph::complete(n).edges.into_iter().filter(|&e| e != (0, 1));
        Graph::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Adjacency lists of `(neighbour, edge index)`.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    /// Component label per vertex and the number of components (isolated
    /// vertices are their own components).
    pub fn components(&self) -> (Vec<usize>, usize) {
        let adj = self.incidence();
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().1 == 1
    }

    /// Acyclic: `|E| = |V| - c`.
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().1 == self.n
    }

    /// Number of independent cycles, `|E| - |V| + c`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components().1 - self.n
    }

    /// Subgraph formed by the chosen edges and their endpoints, relabelled
    /// in increasing order of original label.
    pub fn edge_subgraph(&self, edge_indices: &[usize]) -> Graph {
        let mut verts: Vec<usize> = edge_indices
            .iter()
            .flat_map(|&i| [self.edges[i].0, self.edges[i].1])
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let pos = |x: usize| verts.binary_search(&x).expect("endpoint present");
        let edges = edge_indices.iter().map(|&i| {
            let (u, v) = self.edges[i];
            (pos(u), pos(v))
        });
        Graph::new(verts.len(), edges).expect("subgraph of a simple graph is simple")
    }

    /// Subgraph induced by `vertices` (sorted, distinct), relabelled in order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            let a = vertices.binary_search(&u).ok()?;
            let b = vertices.binary_search(&v).ok()?;
            Some((a, b))
        });
        Graph::new(vertices.len(), edges).expect("induced subgraph is simple")
    }

    /// Connected components with at least one edge, each relabelled.
    pub fn nontrivial_components(&self) -> Vec<Graph> {
        let (label, count) = self.components();
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (i, &(u, _)) in self.edges.iter().enumerate() {
            groups[label[u]].push(i);
        }
        groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|g| self.edge_subgraph(&g))
            .collect()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

fn parse_builtin(text: &str) -> Option<Result<Graph>> {
    let (name, arg) = text.trim().split_once(':')?;
    let n: usize = match arg.trim().parse() {
        Ok(n) => n,
        Err(_) => {
            return Some(Err(Error::Parse {
                line: 1,
                message: format!("bad size in builtin `{text}`"),
            }))
        }
    };
    let g = match name.trim() {
        "path" => Ok(Graph::path(n)),
        "cycle" => Graph::cycle(n),
        "complete" => Ok(Graph::complete(n)),
        "star" => Ok(Graph::star(n)),
        "complete-minus-edge" => Graph::complete_minus_edge(n),
        other => Err(Error::Parse {
            line: 1,
            message: format!("unknown builtin `{other}`"),
        }),
    };
    Some(g)
}

/// Parses a builtin (`path:n`, `cycle:n`, `complete:n`, `star:n`,
/// `complete-minus-edge:n`) or an edge list: a header `n m` followed by `m`
/// lines `u v`. Blank lines and `#` comments are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if let Some(g) = parse_builtin(text) {
        return g;
    }
    let perr = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    if nums.len() != 2 {
        return Err(perr(hline, format!("expected `n m`, found `{header}`")));
    }
    let n: usize = nums[0]
        .parse()
        .map_err(|_| perr(hline, format!("bad vertex count `{}`", nums[0])))?;
    let m: usize = nums[1]
        .parse()
        .map_err(|_| perr(hline, format!("bad edge count `{}`", nums[1])))?;

    let mut seen = std::collections::BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines.by_ref() {
        if edges.len() == m {
            return Err(perr(lineno, format!("more than {m} edges")));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(perr(lineno, format!("expected `u v`, found `{line}`")));
        }
        let u: usize = parts[0]
            .parse()
            .map_err(|_| perr(lineno, format!("bad vertex `{}`", parts[0])))?;
        let v: usize = parts[1]
            .parse()
            .map_err(|_| perr(lineno, format!("bad vertex `{}`", parts[1])))?;
        if u == v {
            return Err(perr(lineno, format!("loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(perr(lineno, format!("label out of range 0..{n}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(perr(lineno, format!("duplicate edge {{{u},{v}}}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(perr(
            hline,
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

/// Isomorphism certificate: vertex count followed by the minimal packed
/// upper-triangle adjacency code over all degree-respecting orderings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

fn adjacency_bits(g: &Graph) -> Vec<u32> {
    let mut rows = vec![0u32; g.n];
    for &(u, v) in &g.edges {
        rows[u] |= 1 << v;
        rows[v] |= 1 << u;
    }
    rows
}

/// Search state for the minimal code: vertices are placed position by
/// position, restricted to the degree class that owns the position.
struct CanonSearch<'a> {
    rows: &'a [u32],
    class_of_pos: Vec<usize>,
    class_members: Vec<Vec<usize>>,
    order: Vec<usize>,
    used: u32,
    best: Option<(u128, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn code(&self) -> u128 {
        let n = self.order.len();
        let mut code = 0u128;
        for i in 0..n {
            for j in i + 1..n {
                code <<= 1;
                if self.rows[self.order[i]] >> self.order[j] & 1 == 1 {
                    code |= 1;
                }
            }
        }
        code
    }

    fn run(&mut self, pos: usize) {
        if pos == self.class_of_pos.len() {
            let code = self.code();
            if self.best.as_ref().map_or(true, |(b, _)| code < *b) {
                self.best = Some((code, self.order.clone()));
            }
            return;
        }
        let class = self.class_of_pos[pos];
        for idx in 0..self.class_members[class].len() {
            let v = self.class_members[class][idx];
            if self.used >> v & 1 == 1 {
                continue;
            }
            self.used |= 1 << v;
            self.order.push(v);
            self.run(pos + 1);
            self.order.pop();
            self.used &= !(1 << v);
        }
    }
}

fn canonical_order(g: &Graph, budget: &Budget) -> Result<(u128, Vec<usize>)> {
    Budget::check_size(
        "certificate vertex count",
        g.n,
        budget.max_certificate_vertices.min(16),
    )?;
    let rows = adjacency_bits(g);
    let deg = g.degrees();
    let mut verts: Vec<usize> = (0..g.n).collect();
    verts.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let mut class_members: Vec<Vec<usize>> = Vec::new();
    let mut class_of_pos = Vec::with_capacity(g.n);
    for (i, &v) in verts.iter().enumerate() {
        if i == 0 || deg[verts[i - 1]] != deg[v] {
            class_members.push(Vec::new());
        }
        class_members.last_mut().unwrap().push(v);
        class_of_pos.push(class_members.len() - 1);
    }
    let mut search = CanonSearch {
        rows: &rows,
        class_of_pos,
        class_members,
        order: Vec::with_capacity(g.n),
        used: 0,
        best: None,
    };
    search.run(0);
    Ok(search.best.unwrap_or((0, Vec::new())))
}

/// Certificate equal for isomorphic graphs and distinct otherwise.
pub fn canonical_certificate(g: &Graph, budget: &Budget) -> Result<Certificate> {
    let (code, _) = canonical_order(g, budget)?;
    let pairs = g.n * g.n.saturating_sub(1) / 2;
    let nbytes = pairs.div_ceil(8);
    let mut bytes = vec![g.n as u8];
    let be = code.to_be_bytes();
    bytes.extend_from_slice(&be[16 - nbytes..]);
    Ok(Certificate(bytes))
}

/// The graph relabelled into its canonical ordering.
pub fn canonical_form(g: &Graph, budget: &Budget) -> Result<Graph> {
    let (_, order) = canonical_order(g, budget)?;
    let mut pos = vec![0; g.n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    Graph::new(g.n, g.edges.iter().map(|&(u, v)| (pos[u], pos[v])))
}

/// Connected graph with at least one edge, held in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Motif {
    pub graph: Graph,
    pub certificate: Certificate,
}

impl Motif {
    pub fn from_graph(g: &Graph, budget: &Budget) -> Result<Self> {
        if g.edge_count() == 0 || !g.is_connected() {
            return Err(Error::InvalidArgument(
                "a motif must be connected with at least one edge".into(),
            ));
        }
        Ok(Motif {
            graph: canonical_form(g, budget)?,
            certificate: canonical_certificate(g, budget)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusEntry {
    pub motif: Motif,
    pub count: u64,
}

/// Occurrence counts `N_G(motif)` of every connected motif with at most
/// `max_edges` edges, sorted by (edges, vertices, certificate).
#[derive(Debug, Clone, PartialEq)]
pub struct MotifCensus {
    pub entries: Vec<CensusEntry>,
    pub max_edges: usize,
}

#[derive(Serialize)]
struct CensusRecord {
    certificate: String,
    edges: usize,
    vertices: usize,
    count: u64,
}

impl MotifCensus {
    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<CensusRecord> = self
            .entries
            .iter()
            .map(|e| CensusRecord {
                certificate: e.motif.certificate.to_hex(),
                edges: e.motif.graph.edge_count(),
                vertices: e.motif.graph.vertex_count(),
                count: e.count,
            })
            .collect();
        serde_json::to_value(records).expect("census serializes")
    }

    pub fn count_of(&self, cert: &Certificate) -> u64 {
        self.entries
            .iter()
            .find(|e| &e.motif.certificate == cert)
            .map_or(0, |e| e.count)
    }
}

/// Visits every connected edge subset with `1..=max_edges` edges exactly
/// once (ESU enumeration on the line graph). Indices are edge positions.
pub fn for_each_connected_edge_subset(
    g: &Graph,
    max_edges: usize,
    mut visit: impl FnMut(&[usize]),
) -> Result<()> {
    let m = g.edge_count();
    Budget::check_size("edge count for subset enumeration", m, 128)?;
    if max_edges == 0 {
        return Ok(());
    }
    let mut line_adj = vec![0u128; m];
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = g.edges[i];
            let (c, d) = g.edges[j];
            if a == c || a == d || b == c || b == d {
                line_adj[i] |= 1 << j;
                line_adj[j] |= 1 << i;
            }
        }
    }

    fn extend(
        line_adj: &[u128],
        sub: &mut Vec<usize>,
        sub_mask: u128,
        nbhd: u128,
        mut ext: u128,
        root: usize,
        max: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        visit(sub);
        if sub.len() == max {
            return;
        }
        let above_root = if root + 1 >= 128 { 0 } else { !0u128 << (root + 1) };
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let exclusive = line_adj[w] & !sub_mask & !nbhd & above_root;
            sub.push(w);
            extend(
                line_adj,
                sub,
                sub_mask | 1 << w,
                nbhd | line_adj[w],
                ext | exclusive,
                root,
                max,
                visit,
            );
            sub.pop();
        }
    }

    let mut sub = Vec::with_capacity(max_edges);
    for v in 0..m {
        let above = if v + 1 >= 128 { 0 } else { !0u128 << (v + 1) };
        sub.push(v);
        extend(
            &line_adj,
            &mut sub,
            1 << v,
            line_adj[v],
            line_adj[v] & above,
            v,
            max_edges,
            &mut visit,
        );
        sub.pop();
    }
    Ok(())
}

pub fn connected_subgraph_census(
    g: &Graph,
    max_edges: usize,
    budget: &Budget,
) -> Result<MotifCensus> {
    if max_edges == 0 {
        return Err(Error::InvalidArgument("max_edges must be >= 1".into()));
    }
    let mut classes: BTreeMap<(usize, usize, Certificate), (Graph, u64)> = BTreeMap::new();
    let mut failure = None;
    let mut visited = 0u64;
    for_each_connected_edge_subset(g, max_edges, |subset| {
        if failure.is_some() {
            return;
        }
        visited += 1;
        if visited > budget.max_terms {
            failure = Some(Error::BudgetExceeded {
                what: "connected edge subsets",
                budget: budget.max_terms,
            });
            return;
        }
        let sub = g.edge_subgraph(subset);
        match canonical_certificate(&sub, budget) {
            Ok(cert) => {
                classes
                    .entry((sub.edge_count(), sub.vertex_count(), cert))
                    .or_insert_with(|| (sub, 0))
                    .1 += 1;
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let entries = classes
        .into_iter()
        .map(|((_, _, certificate), (sub, count))| {
            Ok(CensusEntry {
                motif: Motif {
                    graph: canonical_form(&sub, budget)?,
                    certificate,
                },
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MotifCensus { entries, max_edges })
}

/// Vertex sets (sorted) of all connected induced subgraphs with at least one
/// edge.
pub fn connected_induced_vertex_sets(g: &Graph) -> Result<Vec<Vec<usize>>> {
    Budget::check_size("vertex count for induced enumeration", g.n, 24)?;
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << g.n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let verts: Vec<usize> = (0..g.n).filter(|&v| mask >> v & 1 == 1).collect();
        if g.induced_subgraph(&verts).is_connected() {
            out.push(verts);
        }
    }
    Ok(out)
}

/// All connected graphs on `2..=max_vertices` vertices up to isomorphism,
/// ordered by (vertices, edges, certificate).
pub fn connected_graphs_up_to(max_vertices: usize, budget: &Budget) -> Result<Vec<Graph>> {
    Budget::check_size("corpus vertex count", max_vertices, 7)?;
    let mut found: BTreeMap<(usize, usize, Certificate), Graph> = BTreeMap::new();
    for n in 2..=max_vertices {
        let all = Graph::complete(n);
        let m = all.edge_count();
        for mask in 1u64..(1u64 << m) {
            let edges = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| all.edges[i]);
            let g = Graph::new(n, edges)?;
            if !g.is_connected() {
                continue;
            }
            let cert = canonical_certificate(&g, budget)?;
            found
                .entry((n, g.edge_count(), cert))
                .or_insert_with(|| canonical_form(&g, budget).expect("size checked"));
        }
    }
    Ok(found.into_values().collect())
}

/// Hyperedge of `G^(k)` built from the base edge `{u, v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreEntry {
    pub base: (usize, usize),
    pub cores: Vec<usize>,
}

/// k-power hypergraph: each edge of the base graph gains `k - 2` fresh core
/// vertices, numbered after the base vertices in edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub k: usize,
    pub n: usize,
    pub hyperedges: Vec<Vec<usize>>,
    pub core_map: Vec<CoreEntry>,
}

impl Hypergraph {
    pub fn base_vertex_count(&self) -> usize {
        self.n - (self.k - 2) * self.hyperedges.len()
    }

    pub fn is_core(&self, v: usize) -> bool {
        v >= self.base_vertex_count()
    }

    /// Index of the hyperedge owning core vertex `v`.
    pub fn hyperedge_of_core(&self, v: usize) -> Option<usize> {
        if !self.is_core(v) || v >= self.n {
            return None;
        }
        Some((v - self.base_vertex_count()) / (self.k - 2))
    }
}

pub fn power_hypergraph(g: &Graph, k: usize) -> Result<Hypergraph> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("power hypergraph needs k >= 3, got {k}")));
    }
    let base = g.vertex_count();
    let mut hyperedges = Vec::with_capacity(g.edge_count());
    let mut core_map = Vec::with_capacity(g.edge_count());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let cores: Vec<usize> = (0..k - 2).map(|j| base + i * (k - 2) + j).collect();
        let mut he = vec![u, v];
        he.extend(&cores);
        hyperedges.push(he);
        core_map.push(CoreEntry { base: (u, v), cores });
    }
    Ok(Hypergraph {
        k,
        n: base + (k - 2) * g.edge_count(),
        hyperedges,
        core_map,
    })
}
