//! Constructors for the graph families used throughout the toolkit.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{check_order, Graph};

/// Turán graph `T(n, k)`: complete `k`-partite, part sizes `floor(n/k)` or
/// `ceil(n/k)`. Larger parts come first and take the lowest labels.
pub fn turan(n: usize, k: usize) -> Result<Graph> {
    check_order(n)?;
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "turan needs 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let mut part_of = Vec::with_capacity(n);
    let (base, extra) = (n / k, n % k);
    for p in 0..k {
        let size = base + usize::from(p < extra);
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if part_of[u] != part_of[v] {
                g.set_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// `e(T(n,k)) = (n(n - 2s - 1) + s(s + 1)k) / 2` with `s = floor(n/k)`.
pub fn turan_edge_count(n: usize, k: usize) -> Result<u64> {
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "turan needs 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let (n, k) = (n as i128, k as i128);
    let s = n / k;
    let twice = n * (n - 2 * s - 1) + s * (s + 1) * k;
    Ok((twice / 2) as u64)
}

/// Book `B_q`: spine `0–1` plus pages `2..q+2`, each joined to both spine vertices.
pub fn book(q: usize) -> Result<Graph> {
    if q < 1 {
        return Err(Error::InvalidArgument("book needs q >= 1".into()));
    }
    let mut g = Graph::empty(q + 2)?;
    g.set_edge(0, 1);
    for p in 2..q + 2 {
        g.set_edge(0, p);
        g.set_edge(1, p);
    }
    Ok(g)
}

/// Generalized theta graph: poles `0` and `1` joined by internally disjoint
/// paths of the given lengths. Lengths must be ascending with the second at
/// least 2 (so at most one path is a single edge).
pub fn theta(lengths: &[usize]) -> Result<Graph> {
    if lengths.len() < 2 {
        return Err(Error::InvalidArgument(
            "theta needs at least two paths".into(),
        ));
    }
    if lengths[0] < 1 || lengths.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(format!(
            "theta lengths must be positive and ascending, got {lengths:?}"
        )));
    }
    if lengths[1] < 2 {
        return Err(Error::InvalidArgument(format!(
            "theta needs l2 >= 2, got {lengths:?}"
        )));
    }
    let n = 2 + lengths.iter().map(|l| l - 1).sum::<usize>();
    let mut g = Graph::empty(n)?;
    let mut next = 2;
    for &len in lengths {
        let mut prev = 0;
        for _ in 0..len - 1 {
            g.set_edge(prev, next);
            prev = next;
            next += 1;
        }
        g.set_edge(prev, 1);
    }
    Ok(g)
}

/// Join: disjoint union with every cross edge. `g` keeps labels `0..|g|`.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph> {
    let (a, b) = (g.order(), h.order());
    let mut out = Graph::empty(a + b)?;
    for (u, v) in g.edges() {
        out.set_edge(u, v);
    }
    for (u, v) in h.edges() {
        out.set_edge(a + u, a + v);
    }
    for u in 0..a {
        for v in a..a + b {
            out.set_edge(u, v);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicKind {
    Path,
    Cycle,
    Complete,
    Empty,
}

impl FromStr for BasicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(BasicKind::Path),
            "cycle" => Ok(BasicKind::Cycle),
            "complete" => Ok(BasicKind::Complete),
            "empty" => Ok(BasicKind::Empty),
            other => Err(Error::InvalidArgument(format!(
                "unknown graph kind {other:?}"
            ))),
        }
    }
}

/// Path, cycle, complete or edgeless graph on `n` vertices.
pub fn basic(kind: BasicKind, n: usize) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    match kind {
        BasicKind::Empty => {}
        BasicKind::Path => {
            for v in 1..n {
                g.set_edge(v - 1, v);
            }
        }
        BasicKind::Cycle => {
            if n < 3 {
                return Err(Error::InvalidArgument(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            for v in 1..n {
                g.set_edge(v - 1, v);
            }
            g.set_edge(n - 1, 0);
        }
        BasicKind::Complete => {
            for u in 0..n {
                for v in u + 1..n {
                    g.set_edge(u, v);
                }
            }
        }
    }
    Ok(g)
}

/// Clique order `ceil((3 - sqrt 5) n / 4)` of the long-cycle-free graph `S(n, k)`.
pub fn snk_clique_size(n: usize) -> usize {
    ((3.0 - 5f64.sqrt()) * n as f64 / 4.0).ceil() as usize
}

/// `S(n, k)`: a `k`-clique on `0..k` joined to an independent set of `n - k` vertices.
pub fn snk(n: usize, k: usize) -> Result<Graph> {
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "snk needs 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    join(
        &basic(BasicKind::Complete, k)?,
        &basic(BasicKind::Empty, n - k)?,
    )
}
