//! Spectral radius and Perron vector with certified brackets.
//!
//! Power iteration runs on `A + nI`, which is nonnegative with a strictly
//! dominant Perron root even for bipartite graphs, starting from the all-ones
//! vector on each component. At every iterate `x > 0` we get:
//!
//! * a lower bound: the Rayleigh quotient `θ = xᵀAx / xᵀx`;
//! * the Collatz–Wielandt bounds `min (Ax)ᵢ/xᵢ ≤ ρ ≤ max (Ax)ᵢ/xᵢ`;
//! * the residual bound `ρ ≤ θ + ‖Ax − θx‖/‖x‖`, which needs every other
//!   eigenvalue to lie below `θ − ‖r‖`. That is certified from the trace
//!   identities `Σλᵢ = 0` and `Σλᵢ² = 2e`, which cap the second eigenvalue.
//!
//! The reported upper bound is the smallest certified one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl SpectralConfig {
    pub fn with_tol(tol: f64) -> Self {
        SpectralConfig {
            tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Rayleigh-quotient estimate of `ρ(G)` with a certified bracket.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralEstimate {
    const ZERO: SpectralEstimate = SpectralEstimate {
        value: 0.0,
        lower: 0.0,
        upper: 0.0,
        residual: 0.0,
        iterations: 0,
    };

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Nonnegative unit eigenvector for `ρ(G)`, supported on one component.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronVector {
    pub entries: Vec<f64>,
    /// Component carrying the vector; entries elsewhere are zero.
    pub component: VertexSet,
    pub estimate: SpectralEstimate,
}

pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralEstimate> {
    spectral_radius_with(g, &SpectralConfig::with_tol(tol))
}

/// `ρ(G)` as the maximum over components.
pub fn spectral_radius_with(g: &Graph, cfg: &SpectralConfig) -> Result<SpectralEstimate> {
    cfg.validate()?;
    let mut best: Option<SpectralEstimate> = None;
    let mut upper = 0.0f64;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let (est, _) = component_power(g, comp, cfg)?;
        upper = upper.max(est.upper);
        if best.is_none_or(|b| est.value > b.value) {
            best = Some(est);
        }
    }
    Ok(match best {
        None => SpectralEstimate::ZERO,
        Some(b) => SpectralEstimate { upper, ..b },
    })
}

pub fn perron_vector(g: &Graph, tol: f64) -> Result<PerronVector> {
    perron_vector_with(g, &SpectralConfig::with_tol(tol))
}

/// Perron vector of the component achieving `ρ(G)`; ties go to the component
/// with the smallest vertex.
pub fn perron_vector_with(g: &Graph, cfg: &SpectralConfig) -> Result<PerronVector> {
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let mut best: Option<PerronVector> = None;
    let mut upper = 0.0f64;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let (est, x) = component_power(g, comp, cfg)?;
        upper = upper.max(est.upper);
        if best.as_ref().is_none_or(|b| est.value > b.estimate.value) {
            best = Some(PerronVector {
                entries: x,
                component: comp,
                estimate: est,
            });
        }
    }
    let mut pv = best.expect("a graph with an edge has a nontrivial component");
    pv.estimate.upper = upper;
    Ok(pv)
}

/// Power iteration on one connected component. Returns the estimate and the
/// unit iterate it was computed from (zero off the component).
fn component_power(
    g: &Graph,
    comp: VertexSet,
    cfg: &SpectralConfig,
) -> Result<(SpectralEstimate, Vec<f64>)> {
    let n = g.order();
    let size = comp.len();
    let edges = g.edges_within(comp);
    let shift = n as f64;
    let verts: Vec<usize> = comp.iter().collect();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let start = 1.0 / (size as f64).sqrt();
    for &v in &verts {
        x[v] = start;
    }
    for it in 1..=cfg.max_iter {
        multiply(g, &verts, &x, &mut y);
        let (mut xx, mut xy) = (0.0, 0.0);
        for &v in &verts {
            xx += x[v] * x[v];
            xy += x[v] * y[v];
        }
        let theta = xy / xx;
        let mut r2 = 0.0;
        let mut cw_max = f64::NEG_INFINITY;
        for &v in &verts {
            let r = y[v] - theta * x[v];
            r2 += r * r;
            cw_max = cw_max.max(y[v] / x[v]);
        }
        let residual = (r2 / xx).sqrt();
        let mut upper = cw_max;
        if residual_bound_certified(theta, residual, size, edges) {
            upper = upper.min(theta + residual);
        }
        let upper = upper.max(theta);
        if residual <= cfg.tol && upper - theta <= 2.0 * cfg.tol {
            let norm = xx.sqrt();
            for &v in &verts {
                x[v] /= norm;
            }
            let est = SpectralEstimate {
                value: theta,
                lower: theta,
                upper,
                residual,
                iterations: it,
            };
            return Ok((est, x));
        }
        let mut norm = 0.0;
        for &v in &verts {
            x[v] = y[v] + shift * x[v];
            norm += x[v] * x[v];
        }
        let norm = norm.sqrt();
        for &v in &verts {
            x[v] /= norm;
        }
    }
    Err(Error::IterationCap(cfg.max_iter))
}

#[inline]
fn multiply(g: &Graph, verts: &[usize], x: &[f64], y: &mut [f64]) {
    for &v in verts {
        let mut s = 0.0;
        for u in g.neighbors(v) {
            s += x[u];
        }
        y[v] = s;
    }
}

/// Whether `θ + residual` is a valid upper bound on the Perron root of a
/// connected component with `size` vertices and `edges` edges.
///
/// Some eigenvalue lies within `residual` of `θ`. Every eigenvalue other than
/// `ρ` is below `max(0, λ₂*)`, where `λ₂*` solves
/// `λ² + (θ + λ)²/(size − 2) = 2e − θ²`; if that is below `θ − residual`, the
/// nearby eigenvalue must be `ρ` itself.
fn residual_bound_certified(theta: f64, residual: f64, size: usize, edges: usize) -> bool {
    let floor = theta - residual;
    if floor <= 0.0 {
        return false;
    }
    if size <= 2 {
        return true;
    }
    let m = (size - 2) as f64;
    let slack = 2.0 * edges as f64 - theta * theta;
    let a = 1.0 + 1.0 / m;
    let b = 2.0 * theta / m;
    let c = theta * theta / m - slack;
    let disc = b * b - 4.0 * a * c;
    let second = if disc < 0.0 {
        0.0
    } else {
        ((-b + disc.sqrt()) / (2.0 * a)).max(0.0)
    };
    second < floor * (1.0 - 1e-12)
}

/// Outcome of comparing `ρ(G)` against `threshold − tol` with certified bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdVerdict {
    /// A certified lower bound reaches `threshold − tol`.
    AtLeast,
    /// A certified upper bound stays below `threshold − tol`.
    Below,
    /// The bracket shrank to width `2·tol` around `threshold − tol`.
    Straddle,
}

/// Decides `ρ(G) ≥ threshold − tol`, stopping as soon as some certified
/// bound separates `ρ` from the cutoff.
///
/// Degree bounds come first: `ρ² ≤ max_v Σ_{u~v} d(u)` (row sums of `A²`) and
/// `ρ² ≥ Σ d(v)² / n` (Rayleigh quotient of `A²` at the all-ones vector).
/// Then each component is iterated with Collatz–Wielandt and Rayleigh bounds.
pub fn rho_vs_threshold(g: &Graph, threshold: f64, cfg: &SpectralConfig) -> ThresholdVerdict {
    let n = g.order();
    let cutoff = threshold - cfg.tol;
    let mut degrees = [0u32; crate::graph::MAX_ORDER];
    let mut sum_sq = 0u64;
    for (v, d) in degrees.iter_mut().enumerate().take(n) {
        *d = g.degree(v) as u32;
        sum_sq += u64::from(*d) * u64::from(*d);
    }
    let mut walk2 = 0u64;
    for v in 0..n {
        let s: u64 = g.neighbors(v).iter().map(|u| u64::from(degrees[u])).sum();
        walk2 = walk2.max(s);
    }
    if (walk2 as f64).sqrt() < cutoff {
        return ThresholdVerdict::Below;
    }
    if (sum_sq as f64 / n as f64).sqrt() >= cutoff {
        return ThresholdVerdict::AtLeast;
    }

    let mut all_below = true;
    for comp in g.components() {
        if comp.len() < 2 {
            if 0.0 < cutoff {
                continue;
            }
            return ThresholdVerdict::AtLeast;
        }
        match component_vs_cutoff(g, comp, cutoff, cfg) {
            ThresholdVerdict::AtLeast => return ThresholdVerdict::AtLeast,
            ThresholdVerdict::Below => {}
            ThresholdVerdict::Straddle => all_below = false,
        }
    }
    if all_below {
        ThresholdVerdict::Below
    } else {
        ThresholdVerdict::Straddle
    }
}

fn component_vs_cutoff(
    g: &Graph,
    comp: VertexSet,
    cutoff: f64,
    cfg: &SpectralConfig,
) -> ThresholdVerdict {
    let shift = 1.0;
    let verts: Vec<usize> = comp.iter().collect();
    let edges = g.edges_within(comp);
    let mut x = [0.0f64; crate::graph::MAX_ORDER];
    let mut y = [0.0f64; crate::graph::MAX_ORDER];
    for &v in &verts {
        x[v] = 1.0;
    }
    for _ in 0..cfg.max_iter {
        multiply(g, &verts, &x, &mut y);
        let (mut xx, mut xy) = (0.0, 0.0);
        let mut cw_min = f64::INFINITY;
        let mut cw_max = f64::NEG_INFINITY;
        for &v in &verts {
            xx += x[v] * x[v];
            xy += x[v] * y[v];
            let ratio = y[v] / x[v];
            cw_min = cw_min.min(ratio);
            cw_max = cw_max.max(ratio);
        }
        let theta = xy / xx;
        let lower = theta.max(cw_min);
        if lower >= cutoff {
            return ThresholdVerdict::AtLeast;
        }
        let mut upper = cw_max;
        if upper >= cutoff {
            let mut r2 = 0.0;
            for &v in &verts {
                let r = y[v] - theta * x[v];
                r2 += r * r;
            }
            let residual = (r2 / xx).sqrt();
            if residual_bound_certified(theta, residual, verts.len(), edges) {
                upper = upper.min(theta + residual);
            }
        }
        if upper < cutoff {
            return ThresholdVerdict::Below;
        }
        if upper - lower <= 2.0 * cfg.tol {
            return ThresholdVerdict::Straddle;
        }
        let mut norm = 0.0;
        for &v in &verts {
            x[v] = y[v] + shift * x[v];
            norm += x[v] * x[v];
        }
        let norm = norm.sqrt();
        for &v in &verts {
            x[v] /= norm;
        }
    }
    ThresholdVerdict::Straddle
}

/// Closed form of `ρ(T(n,k))`: `(n − 2s − 1 + sqrt((n − 2s − 1)² + 4s(s+1)(k−1))) / 2`
/// with `s = floor(n/k)`. `k = 1` gives the edgeless graph and returns 0.
pub fn turan_rho_closed_form(n: usize, k: usize) -> Result<f64> {
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!(
            "turan_rho_closed_form needs 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    if k == 1 {
        return Ok(0.0);
    }
    let s = (n / k) as f64;
    let d = n as f64 - 2.0 * s - 1.0;
    let k = k as f64;
    Ok(0.5 * (d + (d * d + 4.0 * s * (s + 1.0) * (k - 1.0)).sqrt()))
}

/// `ρ(T(n,2)) = sqrt(floor(n/2)·ceil(n/2)) = sqrt(floor(n²/4))`.
pub fn turan_rho_bipartite(n: usize) -> f64 {
    ((n / 2 * n.div_ceil(2)) as f64).sqrt()
}

/// `2e(G)/n`, a lower bound on `ρ(G)`.
pub fn avg_degree_bound(g: &Graph) -> f64 {
    2.0 * g.edge_count() as f64 / g.order() as f64
}

/// Largest eigenvalue of the 2×2 quotient of `S(n,k)` over the partition
/// (clique, independent set): `((k−1) + sqrt((k−1)² + 4k(n−k))) / 2`.
pub fn snk_rho_quotient(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    0.5 * ((k - 1.0) + ((k - 1.0) * (k - 1.0) + 4.0 * k * (n - k)).sqrt())
}

/// Neighborhood split at the vertex of largest Perron weight:
/// `A = N(u*)`, `B = V ∖ (A ∪ {u*})`, `γ = |A| + 2e(A) + e(A,B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaDecomposition {
    pub u_star: usize,
    pub a: VertexSet,
    pub b: VertexSet,
    pub e_a: usize,
    pub e_ab: usize,
    pub gamma: usize,
    pub rho: SpectralEstimate,
}

/// Perron entries within this distance of the maximum count as ties.
const ARGMAX_TIE: f64 = 1e-9;

pub fn gamma_star(g: &Graph, tol: f64) -> Result<GammaDecomposition> {
    if g.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let pv = perron_vector(g, tol)?;
    let max = pv.entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let u_star = pv
        .entries
        .iter()
        .position(|&x| x >= max - ARGMAX_TIE)
        .expect("nonempty vector");
    let a = g.neighbors(u_star);
    let b = g
        .vertices()
        .difference(a)
        .difference(VertexSet::singleton(u_star));
    let e_a = g.edges_within(a);
    let e_ab = g.edges_between(a, b);
    Ok(GammaDecomposition {
        u_star,
        a,
        b,
        e_a,
        e_ab,
        gamma: a.len() + 2 * e_a + e_ab,
        rho: pv.estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{basic, book, join, turan, BasicKind};

    const TOL: f64 = 1e-10;

    fn k_ab(a: usize, b: usize) -> Graph {
        join(
            &basic(BasicKind::Empty, a).unwrap(),
            &basic(BasicKind::Empty, b).unwrap(),
        )
        .unwrap()
    }

    fn check_invariants(g: &Graph, est: &SpectralEstimate) {
        assert!(est.lower <= est.value && est.value <= est.upper, "{est:?}");
        assert!(est.upper - est.lower <= 2.0 * TOL + 1e-15, "{est:?}");
        assert!(est.lower >= avg_degree_bound(g) - 1e-9, "{est:?}");
    }

    #[test]
    fn radius_examples() {
        let est = spectral_radius(&k_ab(3, 3), TOL).unwrap();
        assert!((est.value - 3.0).abs() <= TOL);
        check_invariants(&k_ab(3, 3), &est);

        let est = spectral_radius(&k_ab(3, 4), TOL).unwrap();
        assert!((est.value - 12f64.sqrt()).abs() <= TOL);
        assert!(est.contains(turan_rho_closed_form(7, 2).unwrap()));

        let est = spectral_radius(&Graph::empty(5).unwrap(), TOL).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.upper, 0.0);
    }

    #[test]
    fn disconnected_takes_max() {
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let est = spectral_radius(&g, TOL).unwrap();
        assert!((est.value - 2.0).abs() <= TOL);
        let pv = perron_vector(&g, TOL).unwrap();
        assert_eq!(pv.component, [0, 1, 2].into_iter().collect());
        assert_eq!(&pv.entries[3..], &[0.0, 0.0]);
        assert!(pv.entries[..3].iter().all(|&x| x > 0.0));
    }

    #[test]
    fn perron_examples() {
        let pv = perron_vector(&k_ab(3, 3), TOL).unwrap();
        for &x in &pv.entries {
            assert!((x - 1.0 / 6f64.sqrt()).abs() < 1e-9);
        }
        let star = k_ab(1, 4);
        let pv = perron_vector(&star, TOL).unwrap();
        for leaf in 2..5 {
            assert!((pv.entries[leaf] - pv.entries[1]).abs() < 1e-9);
        }
        assert!(pv.entries[0] > pv.entries[1]);
        let norm: f64 = pv.entries.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_eq!(
            perron_vector(&Graph::empty(3).unwrap(), TOL),
            Err(Error::EdgelessGraph)
        );
    }

    #[test]
    fn perron_residual_within_tol() {
        for g in [
            basic(BasicKind::Path, 9).unwrap(),
            book(4).unwrap(),
            turan(11, 3).unwrap(),
        ] {
            let pv = perron_vector(&g, TOL).unwrap();
            let rho = pv.estimate.value;
            let mut r2 = 0.0;
            for v in 0..g.order() {
                let ax: f64 = g.neighbors(v).iter().map(|u| pv.entries[u]).sum();
                r2 += (ax - rho * pv.entries[v]).powi(2);
            }
            assert!(r2.sqrt() <= TOL);
        }
    }

    #[test]
    fn closed_forms() {
        assert!((turan_rho_closed_form(10, 2).unwrap() - 5.0).abs() < 1e-12);
        assert!((turan_rho_closed_form(7, 2).unwrap() - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(turan_rho_closed_form(9, 1).unwrap(), 0.0);
        assert!(turan_rho_closed_form(3, 4).is_err());
        assert_eq!(turan_rho_bipartite(10), 5.0);
        assert_eq!(turan_rho_bipartite(7), 12f64.sqrt());
        assert_eq!(turan_rho_bipartite(2), 1.0);
        for n in 2..=10_000 {
            let a = turan_rho_closed_form(n, 2).unwrap();
            assert!(
                (a - turan_rho_bipartite(n)).abs() <= 1e-12 * a.max(1.0),
                "n={n}"
            );
        }
    }

    #[test]
    fn avg_degree_examples() {
        assert_eq!(avg_degree_bound(&basic(BasicKind::Cycle, 5).unwrap()), 2.0);
        let b = avg_degree_bound(&k_ab(3, 4));
        assert!((b - 24.0 / 7.0).abs() < 1e-12);
        assert!(b <= spectral_radius(&k_ab(3, 4), TOL).unwrap().upper);
        assert_eq!(avg_degree_bound(&Graph::empty(4).unwrap()), 0.0);
    }

    #[test]
    fn gamma_examples() {
        let d = gamma_star(&k_ab(3, 3), TOL).unwrap();
        assert_eq!((d.a.len(), d.e_a, d.e_ab, d.gamma), (3, 0, 6, 9));
        assert_eq!(d.u_star, 0);
        let d = gamma_star(&basic(BasicKind::Complete, 4).unwrap(), TOL).unwrap();
        assert_eq!((d.a.len(), d.e_a, d.e_ab, d.gamma), (3, 3, 0, 9));
        let d = gamma_star(&k_ab(1, 4), TOL).unwrap();
        assert_eq!(
            (d.u_star, d.a.len(), d.e_a, d.e_ab, d.gamma),
            (0, 4, 0, 0, 4)
        );
        assert_eq!(d.a.len() + d.b.len() + 1, 5);
        let two = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(gamma_star(&two, TOL), Err(Error::Disconnected));
        assert_eq!(
            gamma_star(&Graph::empty(2).unwrap(), TOL),
            Err(Error::EdgelessGraph)
        );
    }

    #[test]
    fn snk_quotient_values() {
        assert!((snk_rho_quotient(100, 20) - (19.0 + 6761f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((snk_rho_quotient(10, 2) - (1.0 + 65f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_decisions() {
        let cfg = SpectralConfig::default();
        let t = turan(8, 2).unwrap();
        assert_eq!(rho_vs_threshold(&t, 4.0, &cfg), ThresholdVerdict::AtLeast);
        let p = basic(BasicKind::Path, 8).unwrap();
        assert_eq!(rho_vs_threshold(&p, 2.0, &cfg), ThresholdVerdict::Below);
        let c8 = basic(BasicKind::Cycle, 8).unwrap();
        assert_eq!(rho_vs_threshold(&c8, 2.0, &cfg), ThresholdVerdict::AtLeast);
        // K4 plus a pendant path: irregular, needs iteration
        let g = Graph::from_edge_list(
            7,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
            ],
        )
        .unwrap();
        let rho = spectral_radius(&g, TOL).unwrap().value;
        assert_eq!(
            rho_vs_threshold(&g, rho - 1e-6, &cfg),
            ThresholdVerdict::AtLeast
        );
        assert_eq!(
            rho_vs_threshold(&g, rho + 1e-6, &cfg),
            ThresholdVerdict::Below
        );
        assert_ne!(
            rho_vs_threshold(&g, rho + 1.5e-10, &cfg),
            ThresholdVerdict::AtLeast
        );
    }

    #[test]
    fn invalid_tolerance() {
        assert!(spectral_radius(&book(2).unwrap(), 0.0).is_err());
        assert!(spectral_radius(&book(2).unwrap(), f64::NAN).is_err());
    }
}
