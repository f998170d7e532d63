//! Undirected simple networks over `n` firms.
//!
//! Adjacency is stored twice: as packed bit rows (constant-time membership
//! tests) and as sorted neighbor lists (fast iteration and intersection).
//! Both views are kept in sync by every mutating method.

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Network {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    neighbors: Vec<Vec<u32>>,
    edges: usize,
}

impl Network {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        Network {
            n,
            words,
            bits: vec![0; n * words],
            neighbors: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Network::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.set(i, j, true);
            }
        }
        g
    }

    /// Builds a network from unordered pairs. Duplicates and reversed pairs
    /// collapse to one edge.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Network::empty(n);
        for (i, j) in edges {
            if i == j {
                return Err(Error::SameNode(i));
            }
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch { network: n, firms: i.max(j) + 1 });
            }
            g.set(i, j, true);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of unordered dyads, `n(n-1)/2`.
    #[inline]
    pub fn dyad_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn density(&self) -> f64 {
        match self.dyad_count() {
            0 => 0.0,
            d => self.edges as f64 / d as f64,
        }
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// Sorted neighbors of `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    /// Number of nodes adjacent to both `i` and `j`.
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        let (small, other) = if self.degree(i) <= self.degree(j) { (i, j) } else { (j, i) };
        self.neighbors[small]
            .iter()
            .filter(|&&k| self.has_edge(other, k as usize))
            .count()
    }

    /// Sets `g_ij = g_ji = value`. Returns whether the network changed.
    pub fn set(&mut self, i: usize, j: usize, value: bool) -> bool {
        assert!(i != j, "self-loops are not allowed");
        if self.has_edge(i, j) == value {
            return false;
        }
        self.flip_bits(i, j);
        if value {
            insert_sorted(&mut self.neighbors[i], j as u32);
            insert_sorted(&mut self.neighbors[j], i as u32);
            self.edges += 1;
        } else {
            remove_sorted(&mut self.neighbors[i], j as u32);
            remove_sorted(&mut self.neighbors[j], i as u32);
            self.edges -= 1;
        }
        true
    }

    /// Flips the dyad `(i, j)`.
    pub fn toggle(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::SameNode(i));
        }
        let cur = self.has_edge(i, j);
        self.set(i, j, !cur);
        Ok(())
    }

    /// The network with every dyad flipped.
    pub fn complement(&self) -> Network {
        let mut g = Network::empty(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    g.set(i, j, true);
                }
            }
        }
        g
    }

    /// Subgraph induced by `keep` (ascending node indices), relabelled `0..keep.len()`.
    pub fn induced(&self, keep: &[usize]) -> Network {
        let mut index = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let mut g = Network::empty(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for &j in &self.neighbors[i] {
                let b = index[j as usize];
                if b != usize::MAX && a < b {
                    g.set(a, b, true);
                }
            }
        }
        g
    }

    /// Same links plus `extra` isolated nodes appended at the end.
    pub fn with_isolates(&self, extra: usize) -> Network {
        let mut g = Network::empty(self.n + extra);
        for (i, j) in self.edges() {
            g.set(i, j, true);
        }
        g
    }

    /// Unordered edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(i, ns)| {
            ns.iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Checks symmetry, empty diagonal and neighbor-list consistency.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut count = 0;
        for i in 0..self.n {
            if self.has_edge(i, i) {
                return Err(format!("self-loop at {i}"));
            }
            let mut row = Vec::new();
            for j in 0..self.n {
                if self.has_edge(i, j) != self.has_edge(j, i) {
                    return Err(format!("asymmetric dyad ({i}, {j})"));
                }
                if self.has_edge(i, j) {
                    row.push(j as u32);
                }
            }
            if row != self.neighbors[i] {
                return Err(format!("neighbor list of {i} out of sync"));
            }
            count += row.len();
        }
        if count != 2 * self.edges {
            return Err(format!("edge count {} but degree sum {count}", self.edges));
        }
        Ok(())
    }

    #[inline]
    fn flip_bits(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / WORD] ^= 1 << (j % WORD);
        self.bits[j * self.words + i / WORD] ^= 1 << (i % WORD);
    }
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn remove_sorted(v: &mut Vec<u32>, x: u32) {
    if let Ok(pos) = v.binary_search(&x) {
        v.remove(pos);
    }
}

/// Index of dyad `(i, j)`, `i < j`, in lexicographic order over all dyads of `n` nodes.
pub fn dyad_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All dyads `(i, j)` with `i < j` in lexicographic order.
pub fn dyads(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}
