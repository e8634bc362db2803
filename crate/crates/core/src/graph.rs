//! Immutable simple graphs on at most [`MAX_ORDER`] vertices.
//!
//! Every neighbor set is a single `u64` row, so common-neighbor counts,
//! degree sums and independence tests are popcounts.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported order. Keeps graph6 headers to one byte and every
/// neighbor set inside one machine word.
pub const MAX_ORDER: usize = 62;

/// Position of the pair `(i, j)`, `i < j`, in column order:
/// `(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...`.
#[inline]
pub const fn pair_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

/// Number of vertex pairs of a graph of order `n`.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A set of vertices packed into one word. Iteration is in ascending order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// `{0, 1, ..., n-1}`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub const fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn contains(self, v: usize) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub const fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    #[inline]
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;

    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

/// A simple undirected graph. Row `v` of the adjacency holds `N(v)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: [u64; MAX_ORDER],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        check_order(n)?;
        Ok(Graph {
            n,
            adj: [0; MAX_ORDER],
        })
    }

    /// Builds a graph from an edge list. Repeated edges collapse to one.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from the low `pair_count(n)` bits of `mask`, bit `p`
    /// standing for the pair at column-order position `p`. Requires `n <= 11`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Result<Graph> {
        if n > 11 {
            return Err(Error::OrderCap(format!(
                "pair masks cover n <= 11, got {n}"
            )));
        }
        let mut g = Graph::empty(n)?;
        let mut bits = mask & low_mask(pair_count(n));
        let mut j = 1;
        let mut base = 0;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            while p >= base + j {
                base += j;
                j += 1;
            }
            g.set_edge(p - base, j);
            bits &= bits - 1;
        }
        Ok(g)
    }

    /// Inverse of [`Graph::from_pair_mask`]. Requires `n <= 11`.
    pub fn pair_mask(&self) -> Option<u64> {
        if self.n > 11 {
            return None;
        }
        let mut mask = 0u64;
        for (u, v) in self.edges() {
            mask |= 1u64 << pair_index(u, v);
        }
        Some(mask)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows()
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.adj[u] >> v) & 1 == 1
    }

    /// The packed adjacency rows, one per vertex.
    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj[..self.n]
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !low_mask(u + 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    /// `N(u) ∩ N(v)`; never contains `u` or `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<VertexSet> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(
                "common_neighbors needs two distinct vertices".into(),
            ));
        }
        Ok(self.common_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn common_unchecked(&self, u: usize, v: usize) -> VertexSet {
        VertexSet(self.adj[u] & self.adj[v] & !(1u64 << u) & !(1u64 << v))
    }

    /// Copy of this graph with `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let mut g = self.clone();
        g.set_edge(u, v);
        Ok(g)
    }

    /// Copy of this graph with `uv` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.clear_edge(u, v);
        Ok(g)
    }

    /// Relabels vertices: old vertex `perm[i]` becomes new vertex `i`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for order {}",
                perm.len(),
                self.n
            )));
        }
        let mut inverse = vec![usize::MAX; self.n];
        for (new, &old) in perm.iter().enumerate() {
            self.check_vertex(old)?;
            if inverse[old] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "vertex {old} repeated in permutation"
                )));
            }
            inverse[old] = new;
        }
        let mut g = Graph::empty(self.n)?;
        for (u, v) in self.edges() {
            g.set_edge(inverse[u], inverse[v]);
        }
        Ok(g)
    }

    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut unseen = self.vertices().bits();
        while unseen != 0 {
            let start = unseen.trailing_zeros() as usize;
            let comp = self.component_of(start);
            unseen &= !comp.bits();
            out.push(comp);
        }
        out
    }

    /// Component containing `v`.
    pub fn component_of(&self, v: usize) -> VertexSet {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[u];
            }
            frontier = next & !seen;
            seen |= next;
        }
        VertexSet(seen)
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0) == self.vertices()
    }

    /// True iff `s` spans no edge.
    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.adj[v] & s.bits() == 0)
    }

    /// Number of edges with both ends in `s`.
    pub fn edges_within(&self, s: VertexSet) -> usize {
        s.iter()
            .map(|v| (self.adj[v] & s.bits()).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Number of edges with one end in `a` and the other in `b` (`a`, `b` disjoint).
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        a.iter()
            .map(|v| (self.adj[v] & b.bits()).count_ones() as usize)
            .sum()
    }

    /// True iff this is the Turán graph `T(n, k)`: complete multipartite with
    /// `k` parts of sizes `floor(n/k)` or `ceil(n/k)`. Empty parts are allowed
    /// when `k > n`, so then only `K_n` qualifies.
    ///
    /// Vertices in the same part of a complete multipartite graph share their
    /// open neighborhood, so the test groups vertices by neighborhood and checks
    /// that each group's neighborhood is exactly its complement.
    pub fn is_turan(&self, k: usize) -> bool {
        if k == 0 {
            return false;
        }
        let all = self.vertices().bits();
        let mut remaining = all;
        let mut sizes = Vec::with_capacity(k.min(self.n));
        while remaining != 0 {
            let v = remaining.trailing_zeros() as usize;
            let nb = self.adj[v];
            let part = all & !nb;
            // every vertex of v's part must share v's neighborhood
            let mut p = part;
            while p != 0 {
                let u = p.trailing_zeros() as usize;
                p &= p - 1;
                if self.adj[u] != nb {
                    return false;
                }
            }
            if part & remaining != part {
                return false;
            }
            remaining &= !part;
            sizes.push(part.count_ones() as usize);
            if sizes.len() > k {
                return false;
            }
        }
        let lo = self.n / k;
        let hi = self.n.div_ceil(k);
        let nonempty_expected = if lo == 0 { self.n } else { k };
        sizes.len() == nonempty_expected && sizes.iter().all(|&s| s == lo || s == hi)
    }

    #[inline]
    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                order: self.n,
            })
        }
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
    }

    #[inline]
    pub(crate) fn clear_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1u64 << v);
        self.adj[v] &= !(1u64 << u);
    }

    #[inline]
    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        self.adj[u] ^= 1u64 << v;
        self.adj[v] ^= 1u64 << u;
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(
            "graphs need at least one vertex".into(),
        ))
    } else if n > MAX_ORDER {
        Err(Error::OrderCap(format!("order {n} exceeds {MAX_ORDER}")))
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) const fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}
