//! Canonical labeling by exhaustive permutation search with prefix pruning.
//!
//! The code of a labeling is its upper-triangle bit string in column order
//! (`(0,1), (0,2), (1,2), (0,3), ...`), the same order graph6 uses. The
//! canonical code is the lexicographically smallest such string over all
//! relabelings. Placing the vertex at new position `d` fixes column `d` of the
//! string, so a partial labeling whose prefix already exceeds the best one can
//! be abandoned.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{pair_count, pair_index, Graph};

/// Largest order accepted by [`canonical_form`].
pub const CANON_MAX_ORDER: usize = 10;

/// Isomorphism-invariant code: order byte followed by the minimal
/// upper-triangle bit string packed MSB-first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0[0] as usize
    }

    /// The canonical representative: the graph whose identity labeling has
    /// this code.
    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::empty(n).expect("code order is valid");
        for j in 1..n {
            for i in 0..j {
                let p = pair_index(i, j);
                if (self.0[1 + p / 8] >> (7 - p % 8)) & 1 == 1 {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode(n={}, ", self.order())?;
        for b in &self.0[1..] {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Canonical code of `g`. Cost grows factorially, so `n <= 10`.
pub fn canonical_form(g: &Graph) -> Result<CanonicalCode> {
    let (code, _) = canonical_labeling(g)?;
    Ok(code)
}

/// Canonical code together with a permutation attaining it
/// (`perm[new] = old`, as accepted by [`Graph::relabel`]).
pub fn canonical_labeling(g: &Graph) -> Result<(CanonicalCode, Vec<usize>)> {
    let n = g.order();
    if n > CANON_MAX_ORDER {
        return Err(Error::OrderCap(format!(
            "canonical_form supports n <= {CANON_MAX_ORDER}, got {n}"
        )));
    }
    let mut search = Search::new(g, Mode::Minimize);
    search.run();
    let code = pack(n, &search.best);
    Ok((code, search.best_perm))
}

/// True iff the identity labeling of `g` already attains the canonical code,
/// i.e. `g` equals its own canonical representative. Each isomorphism class
/// has exactly one such labeled member. Usually exits after a few nodes.
pub fn is_canonical_labeling(g: &Graph) -> Result<bool> {
    let n = g.order();
    if n > CANON_MAX_ORDER {
        return Err(Error::OrderCap(format!(
            "canonical_form supports n <= {CANON_MAX_ORDER}, got {n}"
        )));
    }
    let mut search = Search::new(g, Mode::FindSmaller);
    search.run();
    Ok(!search.found_smaller)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Minimize,
    FindSmaller,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    mode: Mode,
    /// Column values of the best labeling so far; `best[d]` is column `d`,
    /// bit `d-1-i` standing for pair `(i, d)`.
    best: Vec<u32>,
    best_perm: Vec<usize>,
    cols: Vec<u32>,
    perm: Vec<usize>,
    found_smaller: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, mode: Mode) -> Self {
        let n = g.order();
        let identity: Vec<usize> = (0..n).collect();
        let best = columns(g, &identity);
        Search {
            g,
            n,
            mode,
            best,
            best_perm: identity,
            cols: vec![0; n],
            perm: Vec::with_capacity(n),
            found_smaller: false,
        }
    }

    fn run(&mut self) {
        if self.n <= 1 {
            return;
        }
        self.descend(0, 0, false);
    }

    /// `less` records that the current prefix is already strictly smaller
    /// than the best prefix. Returns whether `best` was replaced inside this
    /// subtree; after that the current prefix equals the best prefix again.
    fn descend(&mut self, depth: usize, used: u64, mut less: bool) -> bool {
        if depth == self.n {
            if less {
                self.best.copy_from_slice(&self.cols);
                self.best_perm.copy_from_slice(&self.perm);
            }
            return less;
        }
        let mut updated = false;
        let mut free = !used & ((1u64 << self.n) - 1);
        while free != 0 {
            let c = free.trailing_zeros() as usize;
            free &= free - 1;
            let nb = self.g.neighbors(c).bits();
            let mut col = 0u32;
            for &p in &self.perm {
                col = (col << 1) | ((nb >> p) & 1) as u32;
            }
            let mut child_less = less;
            if !less {
                match col.cmp(&self.best[depth]) {
                    std::cmp::Ordering::Greater => continue,
                    std::cmp::Ordering::Less => {
                        if self.mode == Mode::FindSmaller {
                            self.found_smaller = true;
                            return false;
                        }
                        child_less = true;
                    }
                    std::cmp::Ordering::Equal => {}
                }
            }
            self.cols[depth] = col;
            self.perm.push(c);
            if self.descend(depth + 1, used | (1u64 << c), child_less) {
                updated = true;
                less = false;
            }
            self.perm.pop();
            if self.found_smaller {
                return false;
            }
        }
        updated
    }
}

fn columns(g: &Graph, perm: &[usize]) -> Vec<u32> {
    let n = perm.len();
    let mut cols = vec![0u32; n];
    for (d, col) in cols.iter_mut().enumerate() {
        let nb = g.neighbors(perm[d]).bits();
        for &p in &perm[..d] {
            *col = (*col << 1) | ((nb >> p) & 1) as u32;
        }
    }
    cols
}

fn pack(n: usize, cols: &[u32]) -> CanonicalCode {
    let bits = pair_count(n);
    let mut bytes = vec![0u8; 1 + bits.div_ceil(8)];
    bytes[0] = n as u8;
    for (j, &col) in cols.iter().enumerate().skip(1) {
        for i in 0..j {
            if (col >> (j - 1 - i)) & 1 == 1 {
                let p = pair_index(i, j);
                bytes[1 + p / 8] |= 1 << (7 - p % 8);
            }
        }
    }
    CanonicalCode(bytes)
}
