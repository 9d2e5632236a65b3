//! Small undirected graphs: adjacency, traversal, first-fit coloring.
//!
//! Everything here is deterministic: adjacency lists are kept sorted, and
//! traversals visit neighbors in index order, so identical graphs always
//! produce identical paths, labels, and colorings.

use std::collections::BinaryHeap;

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    #[must_use]
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Inserts an edge, keeping lists sorted. Self-loops and duplicates are
    /// ignored rather than rejected: callers build graphs from incidence
    /// sweeps where repeats are natural.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        for (a, b) in [(u, v), (v, u)] {
            if let Err(at) = self.adj[a].binary_search(&b) {
                self.adj[a].insert(at, b);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as (low, high) pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Component label per vertex, labels assigned in discovery order.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.len()];
        let mut next = 0;
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.len() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        let labels = self.components();
        labels.iter().all(|&l| l == 0)
    }

    /// Shortest path by edge count, or None when disconnected. Ties resolve
    /// toward lower-indexed parents, so the path is canonical.
    pub fn bfs_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[from] = from;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.adj[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// First-fit proper coloring in vertex order: never more than
    /// max_degree + 1 colors.
    pub fn greedy_color(&self) -> Vec<usize> {
        let mut color = vec![usize::MAX; self.len()];
        for v in 0..self.len() {
            let mut taken: Vec<usize> = self.adj[v]
                .iter()
                .map(|&u| color[u])
                .filter(|&c| c != usize::MAX)
                .collect();
            taken.sort_unstable();
            let mut c = 0;
            for t in taken {
                if t == c {
                    c += 1;
                } else if t > c {
                    break;
                }
            }
            color[v] = c;
        }
        color
    }

    /// Multi-source shortest paths with nonnegative per-edge lengths.
    /// Unreachable vertices get infinity.
    pub fn dijkstra(&self, sources: &[usize], length: impl Fn(usize, usize) -> f64) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                // Min-heap on distance, then on index, via reversal.
                other
                    .0
                    .total_cmp(&self.0)
                    .then_with(|| other.1.cmp(&self.1))
            }
        }
        let mut dist = vec![f64::INFINITY; self.len()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Entry(0.0, s));
        }
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &v in &self.adj[u] {
                let l = length(u, v);
                debug_assert!(l >= 0.0);
                let nd = d + l;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Entry(nd, v));
                }
            }
        }
        dist
    }
}
