//! Independent oracles: brute-force subgraph embedding, dense eigensolver,
//! isomorphism class counts.

use std::collections::HashSet;

use nalgebra::DMatrix;

use critedge::canon::canonical_form;
use critedge::corpus::{enumerate_labeled, EnumerationSpec};
use critedge::patterns::{booksize, contains, find};
use critedge::spectral::{gamma_star, spectral_radius};
use critedge::{Graph, PatternSpec};

/// Whether some injective map of `h` into `g` sends edges to edges.
fn embeds(h: &Graph, g: &Graph) -> bool {
    fn go(h: &Graph, g: &Graph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == h.order() {
            return true;
        }
        for v in 0..g.order() {
            if used[v] || !(0..i).all(|j| !h.has_edge(i, j) || g.has_edge(v, map[j])) {
                continue;
            }
            used[v] = true;
            map.push(v);
            if go(h, g, map, used) {
                return true;
            }
            map.pop();
            used[v] = false;
        }
        false
    }
    h.order() <= g.order() && go(h, g, &mut Vec::new(), &mut vec![false; g.order()])
}

fn naive_booksize(g: &Graph) -> usize {
    g.edges()
        .map(|(u, v)| {
            (0..g.order())
                .filter(|&w| g.has_edge(u, w) && g.has_edge(v, w))
                .count()
        })
        .max()
        .unwrap_or(0)
}

fn patterns() -> Vec<PatternSpec> {
    let mut ps = Vec::new();
    ps.extend((1..=4).map(PatternSpec::Book));
    ps.extend((2..=4).map(PatternSpec::Theta123));
    ps.extend((3..=6).map(PatternSpec::Cycle));
    ps.extend((2..=6).map(PatternSpec::PathOnK));
    ps
}

fn small_graphs() -> Vec<Graph> {
    let mut gs = Vec::new();
    for n in 1..=5 {
        gs.extend(enumerate_labeled(EnumerationSpec::labeled(n)).unwrap());
    }
    gs.extend(enumerate_labeled(EnumerationSpec::deduped(6)).unwrap());
    gs
}

#[test]
fn pattern_detection_matches_brute_force() {
    let ps = patterns();
    let hs: Vec<Graph> = ps.iter().map(|p| p.graph().unwrap()).collect();
    for g in small_graphs() {
        assert_eq!(booksize(&g), naive_booksize(&g), "{g:?}");
        for (p, h) in ps.iter().zip(&hs) {
            let expected = embeds(h, &g);
            assert_eq!(contains(&g, *p), expected, "{p} in {g:?}");
            match find(&g, *p) {
                Some(w) => {
                    assert!(expected);
                    assert_eq!(w.edges.len(), h.edge_count());
                    assert_eq!(w.vertices.len(), h.order());
                    let vs: HashSet<_> = w.vertices.iter().collect();
                    assert_eq!(vs.len(), w.vertices.len());
                    for &(u, v) in &w.edges {
                        assert!(g.has_edge(u, v) && vs.contains(&u) && vs.contains(&v));
                    }
                    let es: HashSet<_> =
                        w.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
                    assert_eq!(es.len(), w.edges.len());
                }
                None => assert!(!expected),
            }
        }
    }
}

fn dense_rho(g: &Graph) -> f64 {
    let n = g.order();
    let a = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    a.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

#[test]
fn spectral_radius_matches_dense_eigensolver() {
    for n in 1..=7 {
        for g in enumerate_labeled(EnumerationSpec::deduped(n)).unwrap() {
            let lambda = dense_rho(&g);
            let est = spectral_radius(&g, 1e-10).unwrap();
            assert!(
                (est.value - lambda).abs() <= 1e-9,
                "{g:?}: {} vs {lambda}",
                est.value
            );
            assert!(
                est.lower <= lambda + 1e-9 && lambda <= est.upper + 1e-9,
                "{g:?}"
            );
            if g.edge_count() > 0 && g.is_connected() {
                let gd = gamma_star(&g, 1e-10).unwrap();
                assert!(gd.gamma as f64 >= lambda * lambda - 1e-7, "{g:?}");
            }
        }
    }
}

#[test]
fn class_counts_match_canonical_forms() {
    let expected = [1usize, 2, 4, 11, 34, 156, 1044];
    for n in 1..=7 {
        let deduped = enumerate_labeled(EnumerationSpec::deduped(n))
            .unwrap()
            .count();
        assert_eq!(deduped, expected[n - 1], "n={n}");
        if n <= 6 {
            let forms: HashSet<_> = enumerate_labeled(EnumerationSpec::labeled(n))
                .unwrap()
                .map(|g| canonical_form(&g).unwrap())
                .collect();
            assert_eq!(forms.len(), deduped, "n={n}");
        }
    }
}
