//! Desk-scale checks of the spectral Turán-type statements. Each target scans
//! graphs (all labeled graphs of one order, or a graph6 stream) and produces a
//! mergeable [`VerificationReport`].

mod report;
mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use serde_json::Value;

use crate::corpus::write_graph6;
use crate::error::{Error, Result};
use crate::families::{snk, snk_clique_size, turan, turan_edge_count};
use crate::graph::{Graph, VertexSet, MAX_ORDER};
use crate::patterns::{booksize, contains, longest_xx_path_edges, PatternSpec};
use crate::spectral::{
    gamma_star, rho_vs_threshold, snk_rho_quotient, spectral_radius, turan_rho_bipartite,
    turan_rho_closed_form, SpectralConfig, ThresholdVerdict, DEFAULT_TOL,
};

pub use report::{
    Objective, RhoBracket, Verdict, VerificationReport, Violation, Witness, SHARD_KEYS,
    TOOL_VERSION,
};

use scan::{scan_enumeration, scan_graphs, scan_stream, turan_edge_floors, Check, Outcome};

/// Slack for comparing `γ` against `ρ²`.
pub const GAMMA_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// All labeled graphs of the requested order.
    Enumerate,
    /// A graph6 file, or `-` for standard input.
    Stream(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub source: Source,
    pub shards: u64,
    pub shard: u64,
    /// Disable to run every graph through the full definition (used to test
    /// prefilter soundness).
    pub prefilter: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: DEFAULT_TOL,
            source: Source::Enumerate,
            shards: 1,
            shard: 0,
            prefilter: true,
        }
    }
}

impl VerifyOptions {
    pub fn sharded(mut self, shards: u64, shard: u64) -> Self {
        self.shards = shards;
        self.shard = shard;
        self
    }

    pub fn stream(mut self, path: impl Into<String>) -> Self {
        self.source = Source::Stream(path.into());
        self
    }

    pub fn without_prefilter(mut self) -> Self {
        self.prefilter = false;
        self
    }

    fn cfg(&self) -> Result<SpectralConfig> {
        let cfg = SpectralConfig::with_tol(self.tol);
        cfg.validate()?;
        if self.shards == 0 || self.shard >= self.shards {
            return Err(Error::InvalidArgument(format!(
                "shard {} of {} is out of range",
                self.shard, self.shards
            )));
        }
        if self.shards > 1 && matches!(self.source, Source::Stream(_)) {
            return Err(Error::InvalidArgument(
                "sharding applies to enumeration only".into(),
            ));
        }
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Asserted,
    ReportOnly,
}

struct Params(BTreeMap<String, Value>);

impl Params {
    fn new(opts: &VerifyOptions, objective: Objective, mode: Mode) -> Params {
        let mut p = BTreeMap::new();
        p.insert("tol".into(), opts.tol.into());
        p.insert("objective".into(), objective.name().into());
        let mode = match mode {
            Mode::Asserted => "asserted",
            Mode::ReportOnly => "report-only",
        };
        p.insert("mode".into(), mode.into());
        let source = match &opts.source {
            Source::Enumerate => "enumerate".to_string(),
            Source::Stream(path) => path.clone(),
        };
        p.insert("source".into(), source.into());
        if opts.shards > 1 {
            p.insert("shards".into(), opts.shards.into());
            p.insert("shard".into(), opts.shard.into());
        }
        if !opts.prefilter {
            p.insert("prefilters".into(), false.into());
        }
        Params(p)
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Params {
        self.0.insert(key.into(), value.into());
        self
    }

    fn with_opt(self, key: &str, value: Option<usize>) -> Params {
        match value {
            Some(v) => self.with(key, v),
            None => self,
        }
    }
}

fn run_scan<C: Check>(
    check: &C,
    n: Option<usize>,
    opts: &VerifyOptions,
    report: &mut VerificationReport,
) -> Result<()> {
    let start = Instant::now();
    let partial = match &opts.source {
        Source::Enumerate => {
            let n =
                n.ok_or_else(|| Error::InvalidArgument("enumeration needs an order n".into()))?;
            scan_enumeration(check, n, opts.shards, opts.shard)?
        }
        Source::Stream(path) => {
            let (partial, diags) = scan_stream(check, path)?;
            if !diags.is_empty() {
                report
                    .summary
                    .insert("malformed_records".into(), diags.into());
            }
            partial
        }
    };
    partial.into_report(report, opts.tol);
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(())
}

/// `ρ(G) ≥ threshold − tol`, refined once at `tol/100` when the bracket straddles.
fn decide(g: &Graph, threshold: f64, cfg: &SpectralConfig) -> ThresholdVerdict {
    match rho_vs_threshold(g, threshold, cfg) {
        ThresholdVerdict::Straddle => {
            let fine = SpectralConfig {
                tol: cfg.tol / 100.0,
                ..*cfg
            };
            rho_vs_threshold(g, threshold - cfg.tol + fine.tol, &fine)
        }
        v => v,
    }
}

fn rho_values(g: &Graph, tol: f64, out: &mut BTreeMap<String, f64>) {
    let rho = spectral_radius(g, tol).expect("tolerance validated");
    out.insert("rho_value".into(), rho.value);
    out.insert("rho_lower".into(), rho.lower);
    out.insert("rho_upper".into(), rho.upper);
}

fn basic_values(g: &Graph) -> BTreeMap<String, f64> {
    let mut v = BTreeMap::new();
    v.insert("n".into(), g.order() as f64);
    v.insert("e".into(), g.edge_count() as f64);
    v.insert("booksize".into(), booksize(g) as f64);
    v
}

fn order_matches(want: Option<usize>, g: &Graph) -> bool {
    want.is_none_or(|n| n == g.order())
}

/// `r` such that the pattern is `B_{r+1}` or `θ_{r+1}`.
fn pattern_r(p: PatternSpec) -> Option<usize> {
    match p {
        PatternSpec::Book(q) => Some(q - 1),
        PatternSpec::Theta123(l) => Some(l - 1),
        _ => None,
    }
}

/// Whether the spectral theorem for `p` covers order `n`.
pub fn spectral_theorem_in_range(p: PatternSpec, n: usize) -> bool {
    match p {
        PatternSpec::Book(q) => q >= 2 && 2 * n >= 13 * (q - 1),
        // θ_2 is B_2, which falls under the book range
        PatternSpec::Theta123(2) => spectral_theorem_in_range(PatternSpec::Book(2), n),
        PatternSpec::Theta123(l) if l >= 3 => {
            let r = l - 1;
            if r % 2 == 1 {
                n >= 10 * r
            } else {
                n >= 7 * r
            }
        }
        _ => false,
    }
}

struct SpectralCheck {
    floors: Vec<usize>,
    n: Option<usize>,
    p: PatternSpec,
    cfg: SpectralConfig,
    pre: bool,
}

impl Check for SpectralCheck {
    fn check(&self, g: &Graph, _: Option<i64>) -> Outcome {
        let n = g.order();
        if !order_matches(self.n, g) || n < 2 {
            return Outcome::FILTERED;
        }
        let thr = turan_rho_bipartite(n);
        let free = match self.p {
            PatternSpec::Book(q) => booksize(g) < q,
            p => !contains(g, p),
        };
        if self.pre && (g.edge_count() < self.floors[n] || !free) {
            return Outcome::FILTERED;
        }
        if !free {
            return Outcome::CLEAR;
        }
        if g.is_turan(2) {
            return Outcome::candidate(0);
        }
        match decide(g, thr, &self.cfg) {
            ThresholdVerdict::AtLeast => Outcome::candidate(0).violation(),
            ThresholdVerdict::Below => Outcome::CLEAR,
            ThresholdVerdict::Straddle => Outcome::inconclusive(),
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        rho_values(g, self.cfg.tol, &mut v);
        v.insert("threshold".into(), turan_rho_bipartite(g.order()));
        v
    }
}

/// Spectral extremality of `T(n,2)` among `B_{r+1}`- or `θ_{r+1}`-free graphs.
/// A violation is a pattern-free graph other than `T(n,2)` with
/// `ρ ≥ ρ(T(n,2)) − tol`.
pub fn verify_spectral_theorem(
    n: Option<usize>,
    p: PatternSpec,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let cfg = opts.cfg()?;
    let p = p.validate()?;
    let target = match p {
        PatternSpec::Book(_) => "spectral-book",
        PatternSpec::Theta123(_) => "spectral-theta",
        _ => {
            return Err(Error::InvalidArgument(format!(
                "spectral theorem concerns books and theta graphs, got {p}"
            )))
        }
    };
    let mode = match n {
        Some(n) if spectral_theorem_in_range(p, n) => Mode::Asserted,
        _ => Mode::ReportOnly,
    };
    let params = Params::new(opts, Objective::MaxRho, mode)
        .with_opt("n", n)
        .with("r", pattern_r(p).expect("book or theta"));
    let mut report = VerificationReport::new(target, params.0);
    if mode == Mode::ReportOnly {
        report
            .summary
            .insert("note".into(), "below theorem range".into());
    }
    let check = SpectralCheck {
        floors: turan_edge_floors(opts.tol),
        n,
        p,
        cfg,
        pre: opts.prefilter,
    };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

struct BooksizeCheck {
    floors: Vec<usize>,
    n: Option<usize>,
    divisor: f64,
    /// Qualify on `ρ > ρ(T(n,2))` instead of `≥`.
    strict: bool,
    cfg: SpectralConfig,
    pre: bool,
}

impl Check for BooksizeCheck {
    fn check(&self, g: &Graph, best: Option<i64>) -> Outcome {
        let n = g.order();
        if !order_matches(self.n, g) || n < 2 {
            return Outcome::FILTERED;
        }
        if self.pre && g.edge_count() < self.floors[n] {
            return Outcome::FILTERED;
        }
        let thr = turan_rho_bipartite(n);
        let bs = booksize(g);
        let violating = bs as f64 <= n as f64 / self.divisor;
        if self.pre {
            // T(n,2) plus an edge in its larger part qualifies with booksize floor(n/2)
            if n >= 3 && self.divisor >= 2.0 && bs > n / 2 {
                return Outcome::FILTERED;
            }
        }
        if g.is_turan(2) {
            return Outcome::CLEAR;
        }
        let key = -(bs as i64);
        if self.pre && !violating && best.is_some_and(|b| key < b) {
            return Outcome::CLEAR;
        }
        // strict: cutoff thr + tol, so ties with T(n,2) do not qualify
        let thr = if self.strict {
            thr + 2.0 * self.cfg.tol
        } else {
            thr
        };
        match decide(g, thr, &self.cfg) {
            ThresholdVerdict::AtLeast if violating => Outcome::candidate(key).violation(),
            ThresholdVerdict::AtLeast => Outcome::candidate(key),
            ThresholdVerdict::Below => Outcome::CLEAR,
            ThresholdVerdict::Straddle => Outcome::inconclusive(),
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        rho_values(g, self.cfg.tol, &mut v);
        v.insert("threshold".into(), turan_rho_bipartite(g.order()));
        v.insert("booksize_bound".into(), g.order() as f64 / self.divisor);
        v
    }
}

/// Booksize of graphs with `ρ ≥ ρ(T(n,2))` other than `T(n,2)`: a violation has
/// booksize at most `n/divisor`. Records the minimum qualifying booksize.
pub fn verify_booksize_corollary(
    n: Option<usize>,
    divisor: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let cfg = opts.cfg()?;
    if !(divisor > 0.0 && divisor.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "divisor must be positive, got {divisor}"
        )));
    }
    // smaller divisors claim more than the corollary proves
    let mode = if divisor >= 6.5 {
        Mode::Asserted
    } else {
        Mode::ReportOnly
    };
    let strict = mode == Mode::ReportOnly;
    let params = Params::new(opts, Objective::MinBooksize, mode)
        .with_opt("n", n)
        .with("divisor", divisor)
        .with("comparison", if strict { "gt" } else { "ge" });
    let mut report = VerificationReport::new("booksize-cor", params.0);
    if mode == Mode::ReportOnly {
        report
            .summary
            .insert("note".into(), "open problem probe; nothing asserted".into());
    }
    let check = BooksizeCheck {
        floors: turan_edge_floors(opts.tol),
        n,
        divisor,
        strict,
        cfg,
        pre: opts.prefilter,
    };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

struct CycleCheck {
    floors: Vec<usize>,
    n: Option<usize>,
    cfg: SpectralConfig,
    pre: bool,
}

impl CycleCheck {
    fn missing_cycle(g: &Graph) -> Option<usize> {
        (3..=g.order() / 7).find(|&t| !contains(g, PatternSpec::Cycle(t)))
    }
}

impl Check for CycleCheck {
    fn check(&self, g: &Graph, _: Option<i64>) -> Outcome {
        let n = g.order();
        if !order_matches(self.n, g) || n / 7 < 3 {
            return Outcome::FILTERED;
        }
        let thr = turan_rho_bipartite(n);
        if self.pre && g.edge_count() < self.floors[n] {
            return Outcome::FILTERED;
        }
        if g.is_turan(2) || Self::missing_cycle(g).is_none() {
            return Outcome::CLEAR;
        }
        match decide(g, thr, &self.cfg) {
            ThresholdVerdict::AtLeast => Outcome::CLEAR.violation(),
            ThresholdVerdict::Below => Outcome::CLEAR,
            ThresholdVerdict::Straddle => Outcome::inconclusive(),
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        rho_values(g, self.cfg.tol, &mut v);
        if let Some(t) = Self::missing_cycle(g) {
            v.insert("missing_cycle".into(), t as f64);
        }
        v
    }
}

/// Graphs with `ρ ≥ ρ(T(n,2))` other than `T(n,2)` must contain every cycle
/// length `3 ≤ t ≤ n/7`. Vacuous below `n = 21`.
pub fn verify_cycle_corollary(
    n: Option<usize>,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let cfg = opts.cfg()?;
    let params = Params::new(opts, Objective::None, Mode::Asserted).with_opt("n", n);
    let mut report = VerificationReport::new("cycle-cor", params.0);
    if n.is_some_and(|n| n / 7 < 3) {
        report
            .summary
            .insert("note".into(), "vacuous: floor(n/7) < 3".into());
    }
    let check = CycleCheck {
        floors: turan_edge_floors(opts.tol),
        n,
        cfg,
        pre: opts.prefilter,
    };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

struct EdgeBookCheck {
    n: Option<usize>,
    pre: bool,
}

impl Check for EdgeBookCheck {
    fn check(&self, g: &Graph, best: Option<i64>) -> Outcome {
        let n = g.order();
        if !order_matches(self.n, g) {
            return Outcome::FILTERED;
        }
        let qualifies = g.edge_count() > n * n / 4;
        if self.pre && !qualifies {
            return Outcome::FILTERED;
        }
        if !qualifies {
            return Outcome::CLEAR;
        }
        let bs = booksize(g);
        if self.pre && n >= 3 && bs > n / 2 {
            return Outcome::FILTERED;
        }
        let violating = 6 * bs <= n;
        let key = -(bs as i64);
        if !violating && best.is_some_and(|b| key < b) {
            return Outcome::CLEAR;
        }
        let o = Outcome::candidate(key);
        if violating {
            o.violation()
        } else {
            o
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        v.insert("turan_edges".into(), (g.order() * g.order() / 4) as f64);
        v
    }
}

/// Graphs with more than `floor(n²/4)` edges have booksize above `n/6`.
pub fn verify_edge_book(n: Option<usize>, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.cfg()?;
    let params = Params::new(opts, Objective::MinBooksize, Mode::Asserted).with_opt("n", n);
    let mut report = VerificationReport::new("edge-book", params.0);
    let check = EdgeBookCheck {
        n,
        pre: opts.prefilter,
    };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

/// Every component is a clique on `size` vertices.
fn is_disjoint_cliques(g: &Graph, size: usize) -> bool {
    g.components()
        .into_iter()
        .all(|c| c.len() == size && g.edges_within(c) == size * (size - 1) / 2)
}

struct ErdosGallaiCheck {
    n: Option<usize>,
    r: usize,
    pre: bool,
}

impl Check for ErdosGallaiCheck {
    fn check(&self, g: &Graph, _: Option<i64>) -> Outcome {
        if !order_matches(self.n, g) {
            return Outcome::FILTERED;
        }
        let twice_e = 2 * g.edge_count();
        let rn = self.r * g.order();
        if self.pre && twice_e < rn {
            return Outcome::FILTERED;
        }
        if contains(g, PatternSpec::PathOnK(self.r + 2)) || twice_e < rn {
            return Outcome::CLEAR;
        }
        if twice_e > rn {
            return Outcome::CLEAR.violation();
        }
        let o = Outcome::candidate(0);
        if is_disjoint_cliques(g, self.r + 1) {
            o
        } else {
            o.violation()
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        v.insert("bound".into(), (self.r * g.order()) as f64 / 2.0);
        v.insert("r".into(), self.r as f64);
        v
    }
}

/// `P_{r+2}`-free graphs have at most `rn/2` edges, with equality exactly for
/// disjoint unions of `K_{r+1}`.
pub fn verify_erdos_gallai(
    n: Option<usize>,
    r: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    opts.cfg()?;
    if r < 1 {
        return Err(Error::InvalidArgument("erdos-gallai needs r >= 1".into()));
    }
    let params = Params::new(opts, Objective::Equality, Mode::Asserted)
        .with_opt("n", n)
        .with("r", r);
    let mut report = VerificationReport::new("erdos-gallai", params.0);
    let check = ErdosGallaiCheck {
        n,
        r,
        pre: opts.prefilter,
    };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

struct BipartiteCheck {
    x: usize,
    y: usize,
    r: usize,
    pre: bool,
}

impl BipartiteCheck {
    fn bound(&self) -> usize {
        (self.r - 1) * self.x + self.r * self.y - self.r * (self.r - 1)
    }

    fn graph(&self, mask: u64) -> Graph {
        let mut g = Graph::empty(self.x + self.y).expect("small order");
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            g.set_edge(b / self.y, self.x + b % self.y);
            bits &= bits - 1;
        }
        g
    }

    fn xs(&self) -> VertexSet {
        (0..self.x).collect()
    }
}

impl Check for BipartiteCheck {
    fn check(&self, g: &Graph, _: Option<i64>) -> Outcome {
        let e = g.edge_count();
        let bound = self.bound();
        if self.pre && e < bound {
            return Outcome::FILTERED;
        }
        let xx = longest_xx_path_edges(g, self.xs()).expect("bipartite by construction");
        let named = e == self.x * self.y && (self.x == self.r || self.y == self.r - 1);
        if xx >= 2 * self.r {
            // the named complete graphs satisfy the hypothesis
            return if named {
                Outcome::CLEAR.violation()
            } else {
                Outcome::CLEAR
            };
        }
        if e > bound {
            return Outcome::CLEAR.violation();
        }
        if e < bound {
            return if named {
                Outcome::CLEAR.violation()
            } else {
                Outcome::CLEAR
            };
        }
        if named {
            Outcome::candidate(0)
        } else {
            Outcome::candidate(0).violation()
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        v.insert("x".into(), self.x as f64);
        v.insert("y".into(), self.y as f64);
        v.insert("bound".into(), self.bound() as f64);
        v
    }
}

/// Largest `x_max + y_max` accepted by the bipartite lemma scan.
pub const BIPARTITE_MAX_ORDER: usize = 9;

/// Bipartite graphs `<X, Y>` with `r ≤ |X| ≤ x_max`, `r − 1 ≤ |Y| ≤ y_max`
/// and no `X–X` path of `2r` edges have at most `(r−1)|X| + r|Y| − r(r−1)`
/// edges, with equality exactly for `K_{|X|,|Y|}` with `|X| = r` or `|Y| = r − 1`.
pub fn verify_bipartite_path_lemma(
    x_max: usize,
    y_max: usize,
    r: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    opts.cfg()?;
    if r < 2 {
        return Err(Error::InvalidArgument(
            "bipartite path lemma needs r >= 2".into(),
        ));
    }
    if x_max + y_max > BIPARTITE_MAX_ORDER {
        return Err(Error::OrderCap(format!(
            "bipartite path lemma scans x_max + y_max <= {BIPARTITE_MAX_ORDER}, got {}",
            x_max + y_max
        )));
    }
    if opts.source != Source::Enumerate || opts.shards > 1 {
        return Err(Error::InvalidArgument(
            "bipartite path lemma runs its own unsharded enumeration".into(),
        ));
    }
    let params = Params::new(opts, Objective::Equality, Mode::Asserted)
        .with("x_max", x_max)
        .with("y_max", y_max)
        .with("r", r);
    let mut report = VerificationReport::new("bipartite-path", params.0);
    let start = Instant::now();
    let mut total = scan::Partial::default();
    for x in r..=x_max {
        for y in (r - 1)..=y_max {
            let check = BipartiteCheck {
                x,
                y,
                r,
                pre: opts.prefilter,
            };
            let graphs = (0..1u64 << (x * y)).map(|m| check.graph(m));
            total = total.merge(scan_graphs(&check, graphs));
        }
    }
    total.into_report(&mut report, opts.tol);
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

struct GammaCheck {
    n: Option<usize>,
    tol: f64,
}

impl Check for GammaCheck {
    fn check(&self, g: &Graph, _: Option<i64>) -> Outcome {
        if !order_matches(self.n, g) || g.edge_count() == 0 || !g.is_connected() {
            return Outcome::FILTERED;
        }
        let gd = gamma_star(g, self.tol).expect("connected with an edge");
        let gamma = gd.gamma as f64;
        if gamma < gd.rho.lower * gd.rho.lower - GAMMA_SLACK {
            Outcome::CLEAR.violation()
        } else if gamma <= gd.rho.upper * gd.rho.upper + GAMMA_SLACK {
            Outcome::candidate(0)
        } else {
            Outcome::CLEAR
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        if let Ok(gd) = gamma_star(g, self.tol) {
            v.insert("u_star".into(), gd.u_star as f64);
            v.insert("a".into(), gd.a.len() as f64);
            v.insert("e_a".into(), gd.e_a as f64);
            v.insert("e_ab".into(), gd.e_ab as f64);
            v.insert("gamma".into(), gd.gamma as f64);
            v.insert("rho_lower".into(), gd.rho.lower);
            v.insert("rho_upper".into(), gd.rho.upper);
        }
        v
    }
}

/// `γ(u*) ≥ ρ²` on connected graphs. Witnesses are graphs with `γ = ρ²`
/// within the bracket.
pub fn verify_gamma_bound(n: Option<usize>, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.cfg()?;
    let params = Params::new(opts, Objective::Equality, Mode::Asserted).with_opt("n", n);
    let mut report = VerificationReport::new("gamma", params.0);
    let check = GammaCheck { n, tol: opts.tol };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

/// Decides `(n/2)·ρ(T(n,k)) < e(T(n,k)) + 1` exactly. `ρ` is the larger root
/// of `x² − dx − c` with `d = n − 2s − 1`, `c = s(s+1)(k−1)`, so the claim is
/// `t > ρ` for `t = 2(e+1)/n`, i.e. `f(t) > 0` and `t > d/2`.
fn fact_chain_holds(n: usize, k: usize) -> bool {
    if k == 1 {
        return true;
    }
    let e = turan_edge_count(n, k).expect("k <= n") as i128;
    let (n, k) = (n as i128, k as i128);
    let s = n / k;
    let d = n - 2 * s - 1;
    let c = s * (s + 1) * (k - 1);
    let t_num = 2 * (e + 1); // t = t_num / n
    let f_scaled = t_num * t_num - d * t_num * n - c * n * n;
    f_scaled > 0 && 2 * t_num > d * n
}

/// Checks `(n/2)·ρ(T(n,k)) < e(T(n,k)) + 1` for `1 ≤ k ≤ k_max`, `k ≤ n ≤ n_max`.
pub fn verify_fact_chain(
    k_max: usize,
    n_max: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    opts.cfg()?;
    let params = Params::new(opts, Objective::None, Mode::Asserted)
        .with("k_max", k_max)
        .with("n_max", n_max);
    let mut report = VerificationReport::new("fact-chain", params.0);
    let start = Instant::now();
    let mut min_margin = f64::INFINITY;
    let mut at = (0, 0);
    for k in 1..=k_max {
        for n in k..=n_max {
            report.scanned += 1;
            let rho = turan_rho_closed_form(n, k)?;
            let e = turan_edge_count(n, k)? as f64;
            let lhs = n as f64 / 2.0 * rho;
            let margin = e + 1.0 - lhs;
            if margin < min_margin {
                min_margin = margin;
                at = (n, k);
            }
            if !fact_chain_holds(n, k) {
                let mut values = BTreeMap::new();
                values.insert("n".into(), n as f64);
                values.insert("k".into(), k as f64);
                values.insert("lhs".into(), lhs);
                values.insert("rhs".into(), e + 1.0);
                report.violations.push(Violation { g6: None, values });
            }
        }
    }
    if report.scanned > 0 {
        report
            .summary
            .insert("min_margin".into(), min_margin.into());
        report.summary.insert("min_margin_n".into(), at.0.into());
        report.summary.insert("min_margin_k".into(), at.1.into());
    }
    report.finalize();
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

struct TuranNumberCheck {
    n: Option<usize>,
    p: PatternSpec,
    asserted: bool,
    pre: bool,
    turan_free: Vec<OnceLock<bool>>,
}

impl TuranNumberCheck {
    fn turan_free(&self, n: usize) -> bool {
        *self.turan_free[n]
            .get_or_init(|| n >= 2 && !contains(&turan(n, 2).expect("2 <= n <= 62"), self.p))
    }
}

impl Check for TuranNumberCheck {
    fn check(&self, g: &Graph, _: Option<i64>) -> Outcome {
        let n = g.order();
        if !order_matches(self.n, g) {
            return Outcome::FILTERED;
        }
        let e = g.edge_count();
        let mantel = n * n / 4;
        if self.pre && e < mantel && self.turan_free(n) {
            return Outcome::FILTERED;
        }
        if contains(g, self.p) {
            return Outcome::CLEAR;
        }
        let o = Outcome::candidate(e as i64);
        if self.asserted && e > mantel {
            o.violation()
        } else {
            o
        }
    }

    fn diagnostics(&self, g: &Graph) -> BTreeMap<String, f64> {
        let mut v = basic_values(g);
        v.insert("turan_edges".into(), (g.order() * g.order() / 4) as f64);
        v
    }
}

/// Whether `ex(n, p) = floor(n²/4)` is claimed for this pattern and order.
pub fn turan_number_claimed(p: PatternSpec, n: usize) -> bool {
    match p {
        PatternSpec::Cycle(3) => true,
        PatternSpec::Book(_) | PatternSpec::Theta123(_) => spectral_theorem_in_range(p, n),
        _ => false,
    }
}

/// Maximum edge count over `p`-free graphs; witnesses attain it.
pub fn verify_turan_number(
    n: Option<usize>,
    p: PatternSpec,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    opts.cfg()?;
    let p = p.validate()?;
    let asserted = n.is_some_and(|n| turan_number_claimed(p, n));
    let mode = if asserted {
        Mode::Asserted
    } else {
        Mode::ReportOnly
    };
    let params = Params::new(opts, Objective::MaxEdges, mode)
        .with_opt("n", n)
        .with("pattern", p.to_string());
    let mut report = VerificationReport::new("turan-number", params.0);
    if let Some(n) = n {
        report
            .summary
            .insert("turan_edges".into(), (n * n / 4).into());
    }
    let check = TuranNumberCheck {
        n,
        p,
        asserted,
        pre: opts.prefilter,
        turan_free: (0..=MAX_ORDER).map(|_| OnceLock::new()).collect(),
    };
    run_scan(&check, n, opts, &mut report)?;
    Ok(report)
}

/// `S(n,k)` with `k = ceil((3 − sqrt 5)n/4)`: compares `ρ` with `n/2` and
/// confirms the vertices outside the clique are independent. Above order 62
/// `ρ` comes from the 2×2 quotient formula.
pub fn check_snk(n: usize, assert_rho: bool, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cfg = opts.cfg()?;
    if n < 2 {
        return Err(Error::InvalidArgument("check_snk needs n >= 2".into()));
    }
    let mode = if assert_rho {
        Mode::Asserted
    } else {
        Mode::ReportOnly
    };
    let params = Params::new(opts, Objective::None, mode)
        .with("n", n)
        .with("assert_rho", assert_rho);
    let mut report = VerificationReport::new("snk", params.0);
    let start = Instant::now();
    let k = snk_clique_size(n);
    let quotient = snk_rho_quotient(n, k);
    let half = n as f64 / 2.0;
    let s = &mut report.summary;
    s.insert("k".into(), k.into());
    s.insert("half_n".into(), half.into());
    s.insert("rho_quotient".into(), quotient.into());
    let (rho_lower, independent) = if n <= MAX_ORDER {
        let g = snk(n, k)?;
        let rho = spectral_radius_checked(&g, &cfg)?;
        let clique: VertexSet = (0..k).collect();
        let independent = g.is_independent(g.vertices().difference(clique));
        s.insert("method".into(), "matrix-iteration".into());
        s.insert("g6".into(), write_graph6(&g).into());
        s.insert(
            "rho".into(),
            serde_json::to_value(RhoBracket::from(&rho)).expect("serializable"),
        );
        (rho.lower, independent)
    } else {
        // S(n,k) joins u and v exactly when one of them lies in the clique 0..k
        let adjacent = |u: usize, v: usize| u != v && (u < k || v < k);
        let independent = (k..n).all(|u| (u + 1..n).all(|v| !adjacent(u, v)));
        s.insert("method".into(), "quotient-formula".into());
        (quotient, independent)
    };
    s.insert("rho_exceeds_half_n".into(), (rho_lower > half).into());
    s.insert("complement_independent".into(), independent.into());
    s.insert("max_cycle_length_bound".into(), (2 * k).into());
    if rho_lower <= half {
        s.insert(
            "note".into(),
            "rho(S_{n,k}) <= n/2 at this order; the inequality is asymptotic".into(),
        );
    }
    report.scanned = 1;
    if !independent || (assert_rho && rho_lower <= half) {
        let mut values = BTreeMap::new();
        values.insert("n".into(), n as f64);
        values.insert("k".into(), k as f64);
        values.insert("rho_lower".into(), rho_lower);
        values.insert("half_n".into(), half);
        values.insert(
            "complement_independent".into(),
            f64::from(u8::from(independent)),
        );
        report.violations.push(Violation {
            g6: (n <= MAX_ORDER).then(|| write_graph6(&snk(n, k).expect("checked"))),
            values,
        });
    }
    report.finalize();
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

fn spectral_radius_checked(
    g: &Graph,
    cfg: &SpectralConfig,
) -> Result<crate::spectral::SpectralEstimate> {
    crate::spectral::spectral_radius_with(g, cfg)
}

/// Stable identifiers of the verification targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    SpectralBook,
    SpectralTheta,
    BooksizeCor,
    CycleCor,
    EdgeBook,
    ErdosGallai,
    BipartitePath,
    Gamma,
    FactChain,
    TuranNumber,
    Snk,
}

impl Target {
    pub const ALL: [Target; 11] = [
        Target::SpectralBook,
        Target::SpectralTheta,
        Target::BooksizeCor,
        Target::CycleCor,
        Target::EdgeBook,
        Target::ErdosGallai,
        Target::BipartitePath,
        Target::Gamma,
        Target::FactChain,
        Target::TuranNumber,
        Target::Snk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::SpectralBook => "spectral-book",
            Target::SpectralTheta => "spectral-theta",
            Target::BooksizeCor => "booksize-cor",
            Target::CycleCor => "cycle-cor",
            Target::EdgeBook => "edge-book",
            Target::ErdosGallai => "erdos-gallai",
            Target::BipartitePath => "bipartite-path",
            Target::Gamma => "gamma",
            Target::FactChain => "fact-chain",
            Target::TuranNumber => "turan-number",
            Target::Snk => "snk",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown target {s:?}")))
    }
}

/// Target parameters as collected from the command line. Which fields are
/// required depends on the target.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TargetArgs {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub divisor: Option<f64>,
    pub pattern: Option<PatternSpec>,
    pub x_max: Option<usize>,
    pub y_max: Option<usize>,
    pub assert_rho: Option<bool>,
}

/// Order at and above which `check_snk` asserts `ρ > n/2` by default.
pub const SNK_ASSERT_FROM: usize = MAX_ORDER;

fn need<T>(v: Option<T>, flag: &str, target: Target) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("target {target} needs --{flag}")))
}

/// Runs `target` with the given arguments.
pub fn run_target(
    target: Target,
    args: &TargetArgs,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let n = args.n;
    match target {
        Target::SpectralBook => {
            let r = need(args.r, "r", target)?;
            verify_spectral_theorem(n, PatternSpec::Book(r + 1), opts)
        }
        Target::SpectralTheta => {
            let r = need(args.r, "r", target)?;
            verify_spectral_theorem(n, PatternSpec::Theta123(r + 1), opts)
        }
        Target::BooksizeCor => verify_booksize_corollary(n, args.divisor.unwrap_or(6.5), opts),
        Target::CycleCor => verify_cycle_corollary(n, opts),
        Target::EdgeBook => verify_edge_book(n, opts),
        Target::ErdosGallai => verify_erdos_gallai(n, need(args.r, "r", target)?, opts),
        Target::BipartitePath => verify_bipartite_path_lemma(
            need(args.x_max, "x-max", target)?,
            need(args.y_max, "y-max", target)?,
            need(args.r, "r", target)?,
            opts,
        ),
        Target::Gamma => verify_gamma_bound(n, opts),
        Target::FactChain => {
            verify_fact_chain(need(args.k, "k", target)?, need(n, "n", target)?, opts)
        }
        Target::TuranNumber => verify_turan_number(n, need(args.pattern, "pattern", target)?, opts),
        Target::Snk => {
            let n = need(n, "n", target)?;
            check_snk(n, args.assert_rho.unwrap_or(n >= SNK_ASSERT_FROM), opts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_graph6;
    use crate::families::{basic, BasicKind};

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    fn k34_g6() -> String {
        let k34 = turan(7, 2).unwrap();
        write_graph6(&crate::canon::canonical_form(&k34).unwrap().to_graph())
    }

    #[test]
    fn theorem_ranges() {
        assert!(spectral_theorem_in_range(PatternSpec::Book(2), 7));
        assert!(!spectral_theorem_in_range(PatternSpec::Book(2), 6));
        assert!(!spectral_theorem_in_range(PatternSpec::Book(1), 50));
        assert!(spectral_theorem_in_range(PatternSpec::Book(3), 13));
        assert!(spectral_theorem_in_range(PatternSpec::Theta123(2), 7));
        assert!(spectral_theorem_in_range(PatternSpec::Theta123(3), 14));
        assert!(!spectral_theorem_in_range(PatternSpec::Theta123(3), 13));
        assert!(spectral_theorem_in_range(PatternSpec::Theta123(4), 30));
        assert!(!spectral_theorem_in_range(PatternSpec::Theta123(4), 29));
    }

    #[test]
    fn spectral_book_small() {
        // below the range the triangular prism ties with K(3,3)
        let r = verify_spectral_theorem(Some(6), PatternSpec::Book(2), &opts()).unwrap();
        assert_eq!(r.params["mode"], "report-only");
        assert_eq!(r.scanned, 1 << 15);
        assert_eq!(r.verdict, Verdict::Violated);
        let prism = Graph::from_edge_list(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap();
        let prism = write_graph6(&crate::canon::canonical_form(&prism).unwrap().to_graph());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].g6.as_deref(), Some(prism.as_str()));
        assert_eq!(r.extremal_witnesses.len(), 2);
        for w in &r.extremal_witnesses {
            assert!(w.rho.lower <= 3.0 && 3.0 <= w.rho.upper);
        }
        let r7 = verify_spectral_theorem(Some(7), PatternSpec::Book(2), &opts()).unwrap();
        assert_eq!(r7.params["mode"], "asserted");
        assert_eq!(r7.verdict, Verdict::Holds);
        assert_eq!(r7.extremal_witnesses.len(), 1);
        assert!(verify_spectral_theorem(Some(5), PatternSpec::Cycle(3), &opts()).is_err());
    }

    #[test]
    fn prefilters_do_not_change_results() {
        let strip = |mut r: VerificationReport| {
            r.scanned = 0;
            r.filtered = 0;
            r.params.remove("prefilters");
            r.normalized()
        };
        for n in 4..=6 {
            let with = opts();
            let without = opts().without_prefilter();
            let pairs = [
                (
                    verify_spectral_theorem(Some(n), PatternSpec::Book(2), &with).unwrap(),
                    verify_spectral_theorem(Some(n), PatternSpec::Book(2), &without).unwrap(),
                ),
                (
                    verify_booksize_corollary(Some(n), 6.5, &with).unwrap(),
                    verify_booksize_corollary(Some(n), 6.5, &without).unwrap(),
                ),
                (
                    verify_edge_book(Some(n), &with).unwrap(),
                    verify_edge_book(Some(n), &without).unwrap(),
                ),
                (
                    verify_erdos_gallai(Some(n), 2, &with).unwrap(),
                    verify_erdos_gallai(Some(n), 2, &without).unwrap(),
                ),
                (
                    verify_turan_number(Some(n), PatternSpec::Book(2), &with).unwrap(),
                    verify_turan_number(Some(n), PatternSpec::Book(2), &without).unwrap(),
                ),
            ];
            for (a, b) in pairs {
                assert_eq!(strip(a), strip(b), "n={n}");
            }
        }
        let a = verify_bipartite_path_lemma(3, 3, 2, &opts()).unwrap();
        let b = verify_bipartite_path_lemma(3, 3, 2, &opts().without_prefilter()).unwrap();
        assert_eq!(strip(a), strip(b));
    }

    #[test]
    fn sharded_runs_merge_to_unsharded() {
        let whole = verify_spectral_theorem(Some(6), PatternSpec::Book(2), &opts()).unwrap();
        let merged = (0..3)
            .map(|i| {
                verify_spectral_theorem(Some(6), PatternSpec::Book(2), &opts().sharded(3, i))
                    .unwrap()
            })
            .reduce(|a, b| a.merge(&b).unwrap())
            .unwrap();
        assert_eq!(merged.normalized(), whole.normalized());
    }

    #[test]
    fn violations_reproduce_from_g6() {
        // divisor 2 makes booksize-1 graphs with large ρ into violations
        let r = verify_booksize_corollary(Some(5), 2.0, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        let check = BooksizeCheck {
            floors: turan_edge_floors(DEFAULT_TOL),
            n: Some(5),
            divisor: 2.0,
            strict: true,
            cfg: SpectralConfig::default(),
            pre: true,
        };
        for v in &r.violations {
            let g = parse_graph6(v.g6.as_ref().unwrap().as_bytes()).unwrap();
            assert_eq!(check.diagnostics(&g), v.values);
        }
    }

    #[test]
    fn turan_number_examples() {
        let r = verify_turan_number(Some(5), PatternSpec::Cycle(3), &opts()).unwrap();
        assert_eq!(r.summary["max_edges"], 6);
        assert_eq!(r.extremal_witnesses.len(), 1);
        let k23 = crate::families::join(
            &basic(BasicKind::Empty, 2).unwrap(),
            &basic(BasicKind::Empty, 3).unwrap(),
        )
        .unwrap();
        let code = crate::canon::canonical_form(&k23).unwrap().to_graph();
        assert_eq!(r.extremal_witnesses[0].g6, write_graph6(&code));
    }

    #[test]
    fn erdos_gallai_small() {
        let r = verify_erdos_gallai(Some(6), 2, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let two_k3 =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let code = crate::canon::canonical_form(&two_k3).unwrap().to_graph();
        let names: Vec<_> = r.extremal_witnesses.iter().map(|w| w.g6.clone()).collect();
        assert_eq!(names, [write_graph6(&code)]);
        let k5 = verify_erdos_gallai(Some(5), 4, &opts()).unwrap();
        assert_eq!(k5.extremal_witnesses.len(), 1);
        assert_eq!(k5.extremal_witnesses[0].e, 10);
    }

    #[test]
    fn gamma_small() {
        let r = verify_gamma_bound(Some(4), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let k4 = write_graph6(&basic(BasicKind::Complete, 4).unwrap());
        assert!(r.extremal_witnesses.iter().any(|w| w.g6 == k4));
    }

    #[test]
    fn fact_chain_examples() {
        let r = verify_fact_chain(10, 200, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(fact_chain_holds(10, 3));
        assert!(fact_chain_holds(10, 2));
        let lhs = 5.0 * turan_rho_closed_form(10, 3).unwrap();
        assert!((lhs - 33.117).abs() < 1e-3);
    }

    #[test]
    fn snk_examples() {
        let r = check_snk(10, false, &opts()).unwrap();
        assert_eq!(r.summary["k"], 2);
        let q = r.summary["rho_quotient"].as_f64().unwrap();
        assert!((q - (1.0 + 65f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(r.summary["rho_exceeds_half_n"], false);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(
            check_snk(10, true, &opts()).unwrap().verdict,
            Verdict::Violated
        );
        let big = check_snk(100, true, &opts()).unwrap();
        assert_eq!(big.summary["k"], 20);
        assert_eq!(big.summary["method"], "quotient-formula");
        assert_eq!(big.verdict, Verdict::Holds);
    }

    #[test]
    fn cycle_corollary_vacuous() {
        let r = verify_cycle_corollary(Some(5), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.filtered, r.scanned);
        assert!(r.summary.contains_key("note"));
    }

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("gamma2".parse::<Target>().is_err());
        let args = TargetArgs {
            n: Some(6),
            ..Default::default()
        };
        assert!(run_target(Target::ErdosGallai, &args, &opts()).is_err());
        assert!(run_target(Target::Gamma, &args, &opts()).is_ok());
    }

    #[test]
    fn witness_is_k34() {
        let r = verify_turan_number(Some(7), PatternSpec::Book(2), &opts()).unwrap();
        assert_eq!(r.extremal_witnesses.len(), 1);
        assert_eq!(r.extremal_witnesses[0].g6, k34_g6());
    }
}
