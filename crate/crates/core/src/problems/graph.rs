use crate::error::{Error, Result};

/// A vertex count plus an edge list. Multi-edges are kept as distinct entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    directed: bool,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, directed: bool) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InputContract(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{vertices}"
                )));
            }
        }
        Ok(Graph { vertices, edges, directed })
    }

    pub fn undirected(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new(vertices, edges.to_vec(), false)
    }

    pub fn empty(vertices: usize) -> Self {
        Graph { vertices, edges: Vec::new(), directed: false }
    }

    pub fn path(vertices: usize) -> Self {
        let edges = (1..vertices).map(|i| (i - 1, i)).collect();
        Graph { vertices, edges, directed: false }
    }

    pub fn cycle(vertices: usize) -> Self {
        let mut g = Graph::path(vertices);
        if vertices >= 3 {
            g.edges.push((vertices - 1, 0));
        }
        g
    }

    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v))).collect();
        Graph { vertices, edges, directed: false }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (!self.directed && (b, a) == (u, v)))
    }

    /// Neighbors ignoring direction, sorted and deduplicated.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.vertices).map(|v| self.neighbors(v)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// True when undirected, loop-free and without parallel edges.
    pub fn is_simple(&self) -> bool {
        if self.directed {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }
}
