//! Seeded hill climbing for large `ρ` among pattern-free graphs of one order.
//! Results are heuristic evidence, never verdicts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::canon::{canonical_form, CANON_MAX_ORDER};
use crate::corpus::write_graph6;
use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_ORDER};
use crate::patterns::{contains, find, PatternSpec};
use crate::spectral::{
    perron_vector, spectral_radius, turan_rho_bipartite, SpectralEstimate, DEFAULT_TOL,
};

pub const SEARCH_LABEL: &str = "heuristic probe";

/// Smallest exact gain in `ρ` that counts as an improvement.
pub const MIN_GAIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    #[serde(rename = "g6", serialize_with = "graph_as_g6")]
    pub best: Graph,
    pub rho: SpectralEstimate,
    pub e: usize,
    #[serde(serialize_with = "display")]
    pub pattern: PatternSpec,
    pub restarts_used: usize,
    /// Candidate moves examined over all restarts.
    pub iterations: u64,
    pub matched_turan: bool,
    /// `ρ(T(n,2)) − ρ(best)`.
    pub gap: f64,
    /// Some restart stopped on the evaluation budget rather than at a local optimum.
    pub budget_exhausted: bool,
    pub label: &'static str,
}

fn graph_as_g6<S: Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&write_graph6(g))
}

fn display<S: Serializer>(p: &PatternSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Re-verifies that `g` avoids `p`.
pub fn certify_free(g: &Graph, p: PatternSpec) -> bool {
    !contains(g, p)
}

struct Climb {
    graph: Graph,
    rho: f64,
    evaluations: u64,
    budget_exhausted: bool,
}

/// Seeded `G(n, 1/2)` with the key edge of each found copy of `p` deleted
/// until none is left.
fn random_start(n: usize, p: PatternSpec, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n).expect("order checked");
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.5) {
                g.set_edge(i, j);
            }
        }
    }
    while let Some(w) = find(&g, p) {
        let (u, v) = w.edges[0];
        g.toggle_edge(u, v);
    }
    g
}

fn rho_of(g: &Graph) -> f64 {
    spectral_radius(g, DEFAULT_TOL)
        .expect("default tolerance")
        .value
}

fn perron(g: &Graph) -> Vec<f64> {
    match perron_vector(g, DEFAULT_TOL) {
        Ok(x) => x.entries,
        Err(_) => vec![0.0; g.order()],
    }
}

/// Candidate moves in proxy order: `(remove, add)`, `remove` absent for additions.
type Move = (Option<(usize, usize)>, (usize, usize));

fn ranked_additions(g: &Graph, x: &[f64]) -> Vec<Move> {
    let n = g.order();
    let mut moves: Vec<(f64, Move)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                moves.push((2.0 * x[u] * x[v], (None, (u, v))));
            }
        }
    }
    sort_moves(moves)
}

fn ranked_swaps(g: &Graph, x: &[f64]) -> Vec<Move> {
    let n = g.order();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut moves: Vec<(f64, Move)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            for &(a, b) in &edges {
                let gain = 2.0 * (x[u] * x[v] - x[a] * x[b]);
                if gain > 0.0 {
                    moves.push((gain, (Some((a, b)), (u, v))));
                }
            }
        }
    }
    sort_moves(moves)
}

/// Descending gain; equal gains go to the lowest pair.
fn sort_moves(mut moves: Vec<(f64, Move)>) -> Vec<Move> {
    moves.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| key(&a.1).cmp(&key(&b.1))));
    moves.into_iter().map(|(_, m)| m).collect()
}

fn key(m: &Move) -> ((usize, usize), (usize, usize)) {
    (m.1, m.0.unwrap_or((0, 0)))
}

fn apply(g: &Graph, m: &Move) -> Graph {
    let mut h = g.clone();
    if let Some((a, b)) = m.0 {
        h.toggle_edge(a, b);
    }
    h.toggle_edge(m.1 .0, m.1 .1);
    h
}

/// One restart. `trace` collects every accepted graph, starting graph included.
fn climb(
    n: usize,
    p: PatternSpec,
    seed: u64,
    budget: Option<u64>,
    mut trace: Option<&mut Vec<Graph>>,
) -> Climb {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = random_start(n, p, &mut rng);
    let mut rho = rho_of(&g);
    if let Some(t) = trace.as_deref_mut() {
        t.push(g.clone());
    }
    let mut evaluations = 0u64;
    let mut stagnant = 0usize;
    let limit = n * n;
    'outer: loop {
        let x = perron(&g);
        let additions = ranked_additions(&g, &x);
        let mut tried_swaps = false;
        let mut moves = additions.into_iter();
        loop {
            let m = match moves.next() {
                Some(m) => m,
                None if !tried_swaps => {
                    tried_swaps = true;
                    moves = ranked_swaps(&g, &x).into_iter();
                    continue;
                }
                None => break 'outer,
            };
            if budget.is_some_and(|b| evaluations >= b) {
                return Climb {
                    graph: g,
                    rho,
                    evaluations,
                    budget_exhausted: true,
                };
            }
            if stagnant >= limit {
                break 'outer;
            }
            evaluations += 1;
            let h = apply(&g, &m);
            if contains(&h, p) {
                stagnant += 1;
                continue;
            }
            let r = rho_of(&h);
            if r > rho + MIN_GAIN {
                g = h;
                rho = r;
                stagnant = 0;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(g.clone());
                }
                continue 'outer;
            }
            stagnant += 1;
        }
    }
    Climb {
        graph: g,
        rho,
        evaluations,
        budget_exhausted: false,
    }
}

fn check_args(n: usize, p: PatternSpec) -> Result<PatternSpec> {
    let p = p.validate()?;
    if n > MAX_ORDER {
        return Err(Error::OrderCap(format!(
            "search order {n} exceeds {MAX_ORDER}"
        )));
    }
    if p.order() > n {
        return Err(Error::InvalidArgument(format!(
            "pattern {p} has more than {n} vertices"
        )));
    }
    Ok(p)
}

/// Accepted graphs of restart `restart` in order, for feasibility and
/// monotonicity checks.
pub fn restart_trajectory(
    n: usize,
    p: PatternSpec,
    seed: u64,
    restart: u64,
    budget: Option<u64>,
) -> Result<Vec<Graph>> {
    let p = check_args(n, p)?;
    let mut trace = Vec::new();
    climb(n, p, seed.wrapping_add(restart), budget, Some(&mut trace));
    Ok(trace)
}

fn tie_key(g: &Graph) -> String {
    if g.order() <= CANON_MAX_ORDER {
        write_graph6(&canonical_form(g).expect("order checked").to_graph())
    } else {
        write_graph6(g)
    }
}

/// Best of `restarts` independent climbs seeded `seed + i`. `budget` caps the
/// move evaluations of each restart.
pub fn hill_climb(
    n: usize,
    p: PatternSpec,
    restarts: usize,
    seed: u64,
    budget: Option<u64>,
) -> Result<SearchResult> {
    let p = check_args(n, p)?;
    if restarts == 0 {
        return Err(Error::InvalidArgument(
            "search needs at least one restart".into(),
        ));
    }
    let climbs: Vec<Climb> = (0..restarts as u64)
        .into_par_iter()
        .map(|i| climb(n, p, seed.wrapping_add(i), budget, None))
        .collect();
    let top = climbs
        .iter()
        .map(|c| c.rho)
        .fold(f64::NEG_INFINITY, f64::max);
    // values of isomorphic graphs may differ in the last bits, so near-ties
    // are broken by the canonical graph6 string
    let best = climbs
        .iter()
        .filter(|c| c.rho >= top - MIN_GAIN)
        .map(|c| (tie_key(&c.graph), c))
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, c)| c)
        .expect("at least one restart");
    let graph = if n <= CANON_MAX_ORDER {
        canonical_form(&best.graph)?.to_graph()
    } else {
        best.graph.clone()
    };
    if !certify_free(&graph, p) {
        return Err(Error::InvalidArgument(format!(
            "search produced a graph containing {p}"
        )));
    }
    let rho = spectral_radius(&graph, DEFAULT_TOL)?;
    Ok(SearchResult {
        e: graph.edge_count(),
        matched_turan: graph.is_turan(2),
        gap: turan_rho_bipartite(n) - rho.value,
        best: graph,
        rho,
        pattern: p,
        restarts_used: restarts,
        iterations: climbs.iter().map(|c| c.evaluations).sum(),
        budget_exhausted: climbs.iter().any(|c| c.budget_exhausted),
        label: SEARCH_LABEL,
    })
}
