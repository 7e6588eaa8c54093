use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for SimpleGraph {
    type Error = Error;
    fn try_from(f: GraphFile) -> Result<Self> {
        SimpleGraph::new(f.vertices, f.edges.into_iter().map(|[u, w]| (u, w)).collect())
    }
}

impl From<SimpleGraph> for GraphFile {
    fn from(g: SimpleGraph) -> Self {
        GraphFile { vertices: g.vertex_count, edges: g.edges.iter().map(|&(u, w)| [u, w]).collect() }
    }
}

impl SimpleGraph {
    /// Rejects self-loops, duplicate edges and out-of-range endpoints. Edge order is kept.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, w) in &edges {
            if u >= vertex_count || w >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {w}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == w {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(w), u.max(w))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {w})")));
            }
        }
        Ok(SimpleGraph { vertex_count, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
        SimpleGraph { vertex_count: n.max(1), edges }
    }

    pub fn path(n: usize) -> Self {
        SimpleGraph { vertex_count: n.max(1), edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut g = Self::path(n);
        g.edges.push((n - 1, 0));
        g
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph { vertex_count: n.max(1), edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parses either the JSON form `{"vertices": v, "edges": [[u, w], ...]}` or a plain
    /// edge list with one `u w` pair per line (vertex count inferred, `#` comments allowed).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Ok(serde_json::from_str(trimmed)?);
        }
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<usize> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::InvalidGraph(format!("line {}: expected two vertex ids", lineno + 1))
                })
            };
            let u = parse(parts.next())?;
            let w = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::InvalidGraph(format!("line {}: trailing tokens", lineno + 1)));
            }
            edges.push((u, w));
        }
        let vertex_count = edges.iter().map(|&(u, w)| u.max(w) + 1).max().unwrap_or(1);
        Self::new(vertex_count, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

/// Union-find over vertex ids.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), components: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

pub fn is_connected(g: &SimpleGraph) -> bool {
    let mut ds = DisjointSets::new(g.vertex_count);
    for &(u, w) in &g.edges {
        ds.union(u, w);
    }
    ds.components() == 1
}

/// Edges whose removal disconnects `g`, via low-link numbers.
pub fn bridges(g: &SimpleGraph) -> Result<Vec<(usize, usize)>> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count;
    let mut adj = vec![Vec::new(); n];
    for (idx, &(u, w)) in g.edges.iter().enumerate() {
        adj[u].push((w, idx));
        adj[w].push((u, idx));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut is_bridge = vec![false; g.edges.len()];
    // iterative DFS: (vertex, parent edge, next neighbour index)
    let mut stack = vec![(0usize, usize::MAX, 0usize)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    while let Some(top) = stack.len().checked_sub(1) {
        let (v, parent_edge, next) = stack[top];
        if next < adj[v].len() {
            stack[top].2 += 1;
            let (w, e) = adj[v][next];
            if e == parent_edge {
                continue;
            }
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push((w, e, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] > disc[p] {
                    is_bridge[parent_edge] = true;
                }
            }
        }
    }
    Ok(g.edges.iter().zip(is_bridge).filter(|(_, b)| *b).map(|(e, _)| *e).collect())
}

/// Glues the graphs at one vertex each.
///
/// Vertices are relabelled deterministically: the merged vertex is 0, then the remaining
/// vertices of each block follow in input order, preserving their relative order. Edges
/// follow block by block in their original order.
pub fn one_point_union(gs: &[SimpleGraph], attach: &[usize]) -> Result<SimpleGraph> {
    if gs.is_empty() || gs.len() != attach.len() {
        return Err(Error::InvalidGraph("one_point_union needs one attach vertex per graph".into()));
    }
    for (i, (g, &a)) in gs.iter().zip(attach).enumerate() {
        if a >= g.vertex_count {
            return Err(Error::InvalidAttach { graph: i, vertex: a, vertex_count: g.vertex_count });
        }
    }
    let mut next = 1;
    let mut edges = Vec::new();
    for (g, &a) in gs.iter().zip(attach) {
        let mut label = vec![0; g.vertex_count];
        for (v, slot) in label.iter_mut().enumerate() {
            if v != a {
                *slot = next;
                next += 1;
            }
        }
        edges.extend(g.edges.iter().map(|&(u, w)| (label[u], label[w])));
    }
    SimpleGraph::new(next, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn removal_bridges(g: &SimpleGraph) -> Vec<(usize, usize)> {
        (0..g.edge_count())
            .filter(|&i| {
                let rest: Vec<_> = g.edges().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| *e).collect();
                !is_connected(&SimpleGraph::new(g.vertex_count(), rest).unwrap())
            })
            .map(|i| g.edges()[i])
            .collect()
    }

    #[test]
    fn validation() {
        assert!(SimpleGraph::new(2, vec![(0, 0)]).is_err());
        assert!(SimpleGraph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(2, vec![(0, 2)]).is_err());
        assert!(SimpleGraph::new(0, vec![]).is_err());
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&SimpleGraph::complete(3)));
        assert!(!is_connected(&SimpleGraph::empty(2)));
        assert!(is_connected(&SimpleGraph::path(4)));
        assert!(is_connected(&SimpleGraph::empty(1)));
    }

    #[test]
    fn bridge_examples() {
        assert!(bridges(&SimpleGraph::complete(4)).unwrap().is_empty());
        assert_eq!(bridges(&SimpleGraph::path(3)).unwrap(), vec![(0, 1), (1, 2)]);
        let t = SimpleGraph::complete(3);
        let bowtie = one_point_union(&[t.clone(), t], &[0, 0]).unwrap();
        assert!(bridges(&bowtie).unwrap().is_empty());
        assert_eq!(removal_bridges(&bowtie), Vec::<(usize, usize)>::new());
        assert!(matches!(bridges(&SimpleGraph::empty(2)), Err(Error::Disconnected)));
    }

    #[test]
    fn low_link_matches_removal_test() {
        let k3 = SimpleGraph::complete(3);
        let lollipop = one_point_union(&[k3, SimpleGraph::path(3)], &[2, 0]).unwrap();
        let mut got = bridges(&lollipop).unwrap();
        got.sort();
        let mut want = removal_bridges(&lollipop);
        want.sort();
        assert_eq!(got, want);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn union_examples() {
        let k2 = SimpleGraph::complete(2);
        let p = one_point_union(&[k2.clone(), k2], &[1, 0]).unwrap();
        assert_eq!(p.vertex_count(), 3);
        assert_eq!(p.edges(), &[(1, 0), (0, 2)]);
        assert!(is_connected(&p) && bridges(&p).unwrap().len() == 2);
        let t = SimpleGraph::complete(3);
        let bowtie = one_point_union(&[t.clone(), t.clone()], &[0, 2]).unwrap();
        assert_eq!((bowtie.vertex_count(), bowtie.edge_count()), (5, 6));
        assert_eq!(one_point_union(std::slice::from_ref(&t), &[0]).unwrap(), t);
        assert!(matches!(
            one_point_union(&[t.clone(), t], &[0, 3]),
            Err(Error::InvalidAttach { graph: 1, vertex: 3, .. })
        ));
    }

    #[test]
    fn file_formats() {
        let g = SimpleGraph::parse(r#"{"vertices": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g, SimpleGraph::path(3));
        let h = SimpleGraph::parse("# path\n0 1\n1 2\n\n").unwrap();
        assert_eq!(h, g);
        assert_eq!(SimpleGraph::parse(&g.to_json()).unwrap(), g);
        assert!(SimpleGraph::parse("0 1 2").is_err());
        assert!(SimpleGraph::parse(r#"{"vertices": 2, "edges": [[0,0]]}"#).is_err());
    }
}
