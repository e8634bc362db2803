//! Decision procedures for books, `θ(1,2,ℓ)`, fixed-length cycles and paths.
//!
//! Everything except books goes through one backtracking engine that looks
//! for a vertex-simple `u–v` path with an exact number of edges.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{basic, book, theta, BasicKind};
use crate::graph::{Graph, VertexSet};

/// Target subgraph. `Theta123(ℓ)` is `θ(1,2,ℓ)`; `PathOnK(k)` has `k` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternSpec {
    Book(usize),
    Theta123(usize),
    Cycle(usize),
    PathOnK(usize),
}

impl PatternSpec {
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            PatternSpec::Book(q) => q >= 1,
            PatternSpec::Theta123(l) => l >= 2,
            PatternSpec::Cycle(t) => t >= 3,
            PatternSpec::PathOnK(k) => k >= 2,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidArgument(format!(
                "pattern {self} out of range"
            )))
        }
    }

    /// Number of vertices of the pattern graph.
    pub fn order(self) -> usize {
        match self {
            PatternSpec::Book(q) => q + 2,
            PatternSpec::Theta123(l) => l + 2,
            PatternSpec::Cycle(t) => t,
            PatternSpec::PathOnK(k) => k,
        }
    }

    /// The pattern as a graph.
    pub fn graph(self) -> Result<Graph> {
        match self.validate()? {
            PatternSpec::Book(q) => book(q),
            PatternSpec::Theta123(l) => theta(&[1, 2, l]),
            PatternSpec::Cycle(t) => basic(BasicKind::Cycle, t),
            PatternSpec::PathOnK(k) => basic(BasicKind::Path, k),
        }
    }

    /// `Theta123(2)` and `Book(2)` are the same graph.
    pub fn equivalent_to(self, other: PatternSpec) -> bool {
        let canon = |p| match p {
            PatternSpec::Theta123(2) => PatternSpec::Book(2),
            p => p,
        };
        canon(self) == canon(other)
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::Book(q) => write!(f, "book:{q}"),
            PatternSpec::Theta123(l) => write!(f, "theta:{l}"),
            PatternSpec::Cycle(t) => write!(f, "cycle:{t}"),
            PatternSpec::PathOnK(k) => write!(f, "path:{k}"),
        }
    }
}

impl FromStr for PatternSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidArgument(format!(
                "bad pattern {s:?}; expected book:Q, theta:L, cycle:T or path:K"
            ))
        };
        let (kind, num) = s.split_once(':').ok_or_else(bad)?;
        if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let v: usize = num.parse().map_err(|_| bad())?;
        let p = match kind {
            "book" => PatternSpec::Book(v),
            "theta" => PatternSpec::Theta123(v),
            "cycle" => PatternSpec::Cycle(v),
            "path" => PatternSpec::PathOnK(v),
            _ => return Err(bad()),
        };
        p.validate()
    }
}

impl Serialize for PatternSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One copy of a pattern. `edges[0]` is the copy's key edge (book spine,
/// theta single-edge path, a cycle edge, the first path edge); deleting it
/// destroys the copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Size of the largest book: max over edges `uv` of `|N(u) ∩ N(v)|`.
pub fn booksize(g: &Graph) -> usize {
    let rows = g.rows();
    let mut best = 0;
    for (u, &row) in rows.iter().enumerate() {
        let mut higher = row & !((2u64 << u) - 1);
        while higher != 0 {
            let v = higher.trailing_zeros() as usize;
            higher &= higher - 1;
            best = best.max((row & rows[v]).count_ones() as usize);
        }
    }
    best
}

pub fn contains(g: &Graph, p: PatternSpec) -> bool {
    match p {
        PatternSpec::Book(q) => booksize(g) >= q,
        _ => find(g, p).is_some(),
    }
}

/// First copy of `p` in `g` in the deterministic search order: edges `uv` by
/// ascending `(u, v)`, then common neighbors `w` ascending, then paths.
pub fn find(g: &Graph, p: PatternSpec) -> Option<PatternWitness> {
    if p.validate().is_err() || p.order() > g.order() {
        return None;
    }
    match p {
        PatternSpec::Book(q) => g.edges().find_map(|(u, v)| {
            let pages: Vec<usize> = g.common_unchecked(u, v).iter().take(q).collect();
            (pages.len() == q).then(|| {
                let mut edges = vec![(u, v)];
                for &w in &pages {
                    edges.push((u, w));
                    edges.push((v, w));
                }
                let mut vertices = vec![u, v];
                vertices.extend(pages);
                PatternWitness { vertices, edges }
            })
        }),
        PatternSpec::Theta123(l) => g.edges().find_map(|(u, v)| {
            g.common_unchecked(u, v).iter().find_map(|w| {
                let path = path_search(g, u, v, l, VertexSet::singleton(w))?;
                let mut edges = vec![(u, v), (u, w), (w, v)];
                edges.extend(path.windows(2).map(|e| (e[0], e[1])));
                let mut vertices = vec![u, v, w];
                vertices.extend(&path[1..path.len() - 1]);
                Some(PatternWitness { vertices, edges })
            })
        }),
        PatternSpec::Cycle(t) => g.edges().find_map(|(u, v)| {
            let path = path_search(g, u, v, t - 1, VertexSet::EMPTY)?;
            let mut edges = vec![(u, v)];
            edges.extend(path.windows(2).map(|e| (e[0], e[1])));
            Some(PatternWitness {
                vertices: path,
                edges,
            })
        }),
        PatternSpec::PathOnK(k) => {
            let path = any_path_with_edges(g, k - 1)?;
            let edges = path.windows(2).map(|e| (e[0], e[1])).collect();
            Some(PatternWitness {
                vertices: path,
                edges,
            })
        }
    }
}

/// Whether a `u–v` path with exactly `len` edges exists whose internal
/// vertices avoid `excluded`.
pub fn path_exists_exact(
    g: &Graph,
    u: usize,
    v: usize,
    len: usize,
    excluded: VertexSet,
) -> Result<bool> {
    for w in [u, v] {
        if w >= g.order() {
            return Err(Error::InvalidVertex {
                vertex: w,
                order: g.order(),
            });
        }
    }
    if u == v {
        return Err(Error::InvalidArgument("path endpoints must differ".into()));
    }
    if excluded.contains(u) || excluded.contains(v) {
        return Err(Error::InvalidArgument(
            "path endpoints may not be excluded".into(),
        ));
    }
    Ok(path_search(g, u, v, len, excluded).is_some())
}

/// Vertices of a `u–v` path with exactly `len` edges avoiding `excluded`.
fn path_search(
    g: &Graph,
    u: usize,
    v: usize,
    len: usize,
    excluded: VertexSet,
) -> Option<Vec<usize>> {
    if len == 0 {
        return None;
    }
    let allowed = g
        .vertices()
        .difference(excluded)
        .difference(VertexSet::singleton(u))
        .difference(VertexSet::singleton(v));
    if len - 1 > allowed.len() {
        return None;
    }
    let mut path = Vec::with_capacity(len + 1);
    path.push(u);
    if extend_path(g, u, v, len, allowed.bits(), &mut path) {
        Some(path)
    } else {
        None
    }
}

/// `free` holds the still-usable internal vertices; `rem` edges are left.
fn extend_path(
    g: &Graph,
    cur: usize,
    target: usize,
    rem: usize,
    free: u64,
    path: &mut Vec<usize>,
) -> bool {
    let rows = g.rows();
    if rem == 1 {
        if (rows[cur] >> target) & 1 == 1 {
            path.push(target);
            return true;
        }
        return false;
    }
    if (rem - 1) as u32 > free.count_ones() {
        return false;
    }
    let mut cand = rows[cur] & free;
    if rem == 2 {
        cand &= rows[target];
    }
    while cand != 0 {
        let c = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        path.push(c);
        if extend_path(g, c, target, rem - 1, free & !(1u64 << c), path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Some path with exactly `len` edges, trying start vertices in order.
fn any_path_with_edges(g: &Graph, len: usize) -> Option<Vec<usize>> {
    if len + 1 > g.order() {
        return None;
    }
    let mut path = Vec::with_capacity(len + 1);
    for s in 0..g.order() {
        path.clear();
        path.push(s);
        if extend_open(g, s, len, g.vertices().bits() & !(1u64 << s), &mut path) {
            return Some(path);
        }
    }
    None
}

fn extend_open(g: &Graph, cur: usize, rem: usize, free: u64, path: &mut Vec<usize>) -> bool {
    if rem == 0 {
        return true;
    }
    if rem as u32 > free.count_ones() {
        return false;
    }
    let mut cand = g.rows()[cur] & free;
    while cand != 0 {
        let c = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        path.push(c);
        if extend_open(g, c, rem - 1, free & !(1u64 << c), path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Largest order accepted by the exhaustive longest-path searches.
pub const LONGEST_PATH_MAX_ORDER: usize = 16;

/// Number of edges of a longest path.
pub fn longest_path_edges(g: &Graph) -> Result<usize> {
    let n = g.order();
    if n > LONGEST_PATH_MAX_ORDER {
        return Err(Error::OrderCap(format!(
            "longest_path_edges supports n <= {LONGEST_PATH_MAX_ORDER}, got {n}"
        )));
    }
    let mut best = 0;
    for s in 0..n {
        longest_from(
            g,
            s,
            g.vertices().bits() & !(1u64 << s),
            0,
            &mut best,
            n - 1,
        );
        if best == n - 1 {
            break;
        }
    }
    Ok(best)
}

fn longest_from(g: &Graph, cur: usize, free: u64, depth: usize, best: &mut usize, cap: usize) {
    *best = (*best).max(depth);
    if *best == cap || depth + free.count_ones() as usize <= *best {
        return;
    }
    let mut cand = g.rows()[cur] & free;
    while cand != 0 {
        let c = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        longest_from(g, c, free & !(1u64 << c), depth + 1, best, cap);
    }
}

/// Longest path with both endpoints in `x`, for `g` bipartite with parts
/// `x` and its complement. Returns 0 when no such path exists.
pub fn longest_xx_path_edges(g: &Graph, x: VertexSet) -> Result<usize> {
    let n = g.order();
    if n > LONGEST_PATH_MAX_ORDER {
        return Err(Error::OrderCap(format!(
            "longest_xx_path_edges supports n <= {LONGEST_PATH_MAX_ORDER}, got {n}"
        )));
    }
    let x = x.intersection(g.vertices());
    let y = g.vertices().difference(x);
    if !g.is_independent(x) || !g.is_independent(y) {
        return Err(Error::NotBipartiteWithGivenParts);
    }
    // an X–X path alternates, so it has at most min(|X| - 1, |Y|) Y-vertices
    let cap = 2 * x.len().saturating_sub(1).min(y.len());
    let mut best = 0;
    for s in x {
        if best == cap {
            break;
        }
        xx_from(
            g,
            s,
            x.bits(),
            g.vertices().bits() & !(1u64 << s),
            0,
            &mut best,
            cap,
        );
    }
    Ok(best)
}

fn xx_from(
    g: &Graph,
    cur: usize,
    xbits: u64,
    free: u64,
    depth: usize,
    best: &mut usize,
    cap: usize,
) {
    if depth > *best && (xbits >> cur) & 1 == 1 {
        *best = depth;
    }
    if *best == cap {
        return;
    }
    let mut cand = g.rows()[cur] & free;
    while cand != 0 {
        let c = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        xx_from(g, c, xbits, free & !(1u64 << c), depth + 1, best, cap);
    }
}
