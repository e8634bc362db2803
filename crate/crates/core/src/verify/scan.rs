//! Scan engine shared by the enumeration-based targets.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::canon::{canonical_form, is_canonical_labeling, CANON_MAX_ORDER};
use crate::corpus::{stream_graph6, write_graph6, EnumerationSpec};
use crate::error::Result;
use crate::graph::{Graph, MAX_ORDER};
use crate::patterns::booksize;
use crate::spectral::{spectral_radius, turan_rho_bipartite};

use super::report::{VerificationReport, Violation, Witness};

/// Classification of one graph by a target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Outcome {
    /// Skipped by a static prefilter or outside the target's domain.
    pub filtered: bool,
    pub violation: bool,
    pub inconclusive: bool,
    /// Objective key when the graph competes for `extremal_witnesses`;
    /// larger is better.
    pub candidate: Option<i64>,
}

impl Outcome {
    pub const FILTERED: Outcome = Outcome {
        filtered: true,
        violation: false,
        inconclusive: false,
        candidate: None,
    };
    pub const CLEAR: Outcome = Outcome {
        filtered: false,
        violation: false,
        inconclusive: false,
        candidate: None,
    };

    pub fn candidate(key: i64) -> Outcome {
        Outcome {
            candidate: Some(key),
            ..Outcome::CLEAR
        }
    }

    pub fn violation(self) -> Outcome {
        Outcome {
            violation: true,
            ..self
        }
    }

    pub fn inconclusive() -> Outcome {
        Outcome {
            inconclusive: true,
            ..Outcome::CLEAR
        }
    }
}

pub(crate) trait Check: Sync {
    /// `best` is the best candidate key seen so far by this worker. A graph
    /// that can neither beat it nor be a violation may be skipped.
    fn check(&self, g: &Graph, best: Option<i64>) -> Outcome;

    /// Values recorded next to a violation.
    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64>;
}

/// How a scanned graph is turned into the representative that gets recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dedup {
    /// Exhaustive labeled scans: record only the labeled graph that is its own
    /// canonical form, so each class is recorded by exactly one shard.
    CanonicalMember,
    /// Arbitrary inputs: record the canonical form (labeled graph above order 10).
    CanonicalForm,
}

#[derive(Default)]
pub(crate) struct Partial {
    pub scanned: u64,
    pub filtered: u64,
    best: Option<i64>,
    candidates: BTreeMap<String, Graph>,
    violations: BTreeMap<String, BTreeMap<String, f64>>,
    inconclusive: BTreeSet<String>,
}

impl Partial {
    pub fn absorb<C: Check + ?Sized>(&mut self, check: &C, g: &Graph, dedup: Dedup) {
        let o = check.check(g, self.best);
        self.record(check, g, o, dedup);
    }

    pub fn record<C: Check + ?Sized>(&mut self, check: &C, g: &Graph, o: Outcome, dedup: Dedup) {
        self.scanned += 1;
        if o.filtered {
            self.filtered += 1;
            return;
        }
        let worth = o.violation
            || o.inconclusive
            || o.candidate
                .is_some_and(|k| self.best.is_none_or(|b| k >= b));
        if !worth {
            return;
        }
        let Some(rep) = representative(g, dedup) else {
            return;
        };
        let g6 = write_graph6(&rep);
        if o.inconclusive {
            self.inconclusive.insert(g6.clone());
        }
        if o.violation {
            let values = check.diagnostics(&rep);
            self.violations.insert(g6.clone(), values);
        }
        if let Some(k) = o.candidate {
            if self.best.is_none_or(|b| k > b) {
                self.best = Some(k);
                self.candidates.clear();
            }
            if self.best == Some(k) {
                self.candidates.insert(g6, rep);
            }
        }
    }

    pub fn merge(mut self, mut other: Partial) -> Partial {
        self.scanned += other.scanned;
        self.filtered += other.filtered;
        match (self.best, other.best) {
            (Some(a), Some(b)) if a < b => self.candidates = std::mem::take(&mut other.candidates),
            (Some(a), Some(b)) if a > b => {}
            (None, _) => self.candidates = std::mem::take(&mut other.candidates),
            _ => self.candidates.append(&mut other.candidates),
        }
        self.best = self.best.max(other.best);
        self.violations.append(&mut other.violations);
        self.inconclusive.append(&mut other.inconclusive);
        self
    }

    /// Moves the results into `report` and finalizes it.
    pub fn into_report(self, report: &mut VerificationReport, tol: f64) {
        report.scanned += self.scanned;
        report.filtered += self.filtered;
        report
            .violations
            .extend(self.violations.into_iter().map(|(g6, values)| Violation {
                g6: Some(g6),
                values,
            }));
        report.inconclusive.extend(self.inconclusive);
        report.extremal_witnesses.extend(
            self.candidates
                .into_iter()
                .map(|(g6, g)| witness(g6, &g, tol)),
        );
        report.finalize();
    }
}

pub(crate) fn witness(g6: String, g: &Graph, tol: f64) -> Witness {
    let rho = spectral_radius(g, tol).expect("tolerance validated by caller");
    Witness {
        g6,
        rho: (&rho).into(),
        e: g.edge_count(),
        booksize: booksize(g),
    }
}

fn representative(g: &Graph, dedup: Dedup) -> Option<Graph> {
    match dedup {
        Dedup::CanonicalMember => is_canonical_labeling(g)
            .expect("enumeration order is within the canonical cap")
            .then(|| g.clone()),
        Dedup::CanonicalForm if g.order() <= CANON_MAX_ORDER => {
            Some(canonical_form(g).expect("order checked").to_graph())
        }
        Dedup::CanonicalForm => Some(g.clone()),
    }
}

const CHUNK: u64 = 1 << 14;

/// Runs `check` over one shard of the labeled graphs of order `n`.
pub(crate) fn scan_enumeration<C: Check>(
    check: &C,
    n: usize,
    shards: u64,
    shard: u64,
) -> Result<Partial> {
    let spec = EnumerationSpec::labeled(n).sharded(shards, shard);
    spec.validate()?;
    let space = spec.space_size();
    let count = if shard >= space {
        0
    } else {
        (space - shard).div_ceil(shards)
    };
    let mut pairs = Vec::new();
    for j in 1..n {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let partial = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut p = Partial::default();
            let mut g = Graph::empty(n).expect("validated order");
            let mut prev = 0u64;
            for j in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let m = shard + j * shards;
                let mut diff = m ^ prev;
                while diff != 0 {
                    let (u, v) = pairs[diff.trailing_zeros() as usize];
                    g.toggle_edge(u, v);
                    diff &= diff - 1;
                }
                prev = m;
                p.absorb(check, &g, Dedup::CanonicalMember);
            }
            p
        })
        .reduce(Partial::default, Partial::merge);
    Ok(partial)
}

/// Runs `check` over arbitrary graphs in parallel batches.
pub(crate) fn scan_graphs<C: Check, I: IntoIterator<Item = Graph>>(
    check: &C,
    graphs: I,
) -> Partial {
    let mut total = Partial::default();
    let mut batch = Vec::with_capacity(4096);
    let flush = |batch: &mut Vec<Graph>, total: &mut Partial| {
        let part = batch
            .par_iter()
            .fold(Partial::default, |mut p, g| {
                p.absorb(check, g, Dedup::CanonicalForm);
                p
            })
            .reduce(Partial::default, Partial::merge);
        *total = std::mem::take(total).merge(part);
        batch.clear();
    };
    for g in graphs {
        batch.push(g);
        if batch.len() == batch.capacity() {
            flush(&mut batch, &mut total);
        }
    }
    flush(&mut batch, &mut total);
    total
}

/// Runs `check` over a graph6 file (or `-`). Malformed lines are returned as
/// `line N: reason` strings.
pub(crate) fn scan_stream<C: Check>(check: &C, source: &str) -> Result<(Partial, Vec<String>)> {
    let mut stream = stream_graph6(source)?;
    let mut graphs = Vec::new();
    let mut total = Partial::default();
    loop {
        graphs.clear();
        for rec in stream.by_ref().take(4096) {
            graphs.push(rec?.graph);
        }
        if graphs.is_empty() {
            break;
        }
        total = total.merge(scan_graphs(check, graphs.drain(..)));
    }
    let diags = stream
        .take_diagnostics()
        .iter()
        .map(|d| d.to_string())
        .collect();
    Ok((total, diags))
}

/// Smallest edge count whose Stanley bound `(sqrt(8e + 1) − 1)/2` reaches
/// `cutoff`; graphs with fewer edges have `ρ < cutoff`.
pub(crate) fn min_edges_for_rho(cutoff: f64) -> usize {
    let max = MAX_ORDER * (MAX_ORDER - 1) / 2;
    (0..=max)
        .find(|&e| ((8.0 * e as f64 + 1.0).sqrt() - 1.0) / 2.0 >= cutoff - 1e-9)
        .unwrap_or(max + 1)
}

/// `min_edges_for_rho(ρ(T(n,2)) − tol)` for every order `n`.
pub(crate) fn turan_edge_floors(tol: f64) -> Vec<usize> {
    (0..=MAX_ORDER)
        .map(|n| min_edges_for_rho(turan_rho_bipartite(n) - tol))
        .collect()
}
