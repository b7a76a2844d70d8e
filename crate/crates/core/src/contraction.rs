//! The free contraction on a T-graph, built one dimension at a time, and the
//! unique contraction-preserving extension of a morphism into a contractible target.

use thiserror::Error;

use crate::glob::{cell, check_morphism_report, CellId, CellMap};
use crate::tgraph::{ContractionData, TGraph, TGraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("{0} is not mapped")]
    Unmapped(String),
    #[error("target has no filler for [{a},{b}]_{k}")]
    Unfilled { k: usize, a: CellId, b: CellId },
}

pub fn bracket_name(a: &str, b: &str) -> String {
    format!("[{a},{b}]")
}

/// `P̃`: every parallel pair of every level (level 0 included) gets a formal filler one level up.
pub fn free_contraction(p: &TGraph) -> Result<(TGraph, ContractionData), TGraphError> {
    let mut out = TGraph::new(p.arity_graph.clone());
    let mut k_data = ContractionData::default();
    for k in 0..=p.max_dim() {
        for (id, x) in p.cells(k) {
            let b = x.bounds.as_ref().map(|(s, t)| (s.as_ref(), t.as_ref()));
            out.add(k, id, b, x.d.clone(), &x.c)?;
        }
        if k == 0 {
            continue;
        }
        for (a, b) in out.parallel_pairs(k - 1)? {
            let name = bracket_name(&a, &b);
            let x = out.get(k - 1, &a).expect("listed").clone();
            let d = x.d.degenerate(k).expect("raising");
            out.add(k, &name, Some((&a, &b)), d, &x.c)?;
            k_data.brackets.insert((k - 1, a, b), cell(&name));
        }
    }
    Ok((out, k_data))
}

/// `g` with `g = f` on the cells of `P` and `g([α,β]_k) = [g α, g β]_k` in `Q`.
pub fn universal_extension(
    p: &TGraph,
    p_tilde: &TGraph,
    kp: &ContractionData,
    kq: &ContractionData,
    f: &CellMap,
) -> Result<CellMap, ExtensionError> {
    let mut g = CellMap::default();
    for k in 0..=p_tilde.max_dim() {
        for (id, _) in p_tilde.cells(k) {
            if p.get(k, id).is_some() {
                let img = f.get(k, id).ok_or_else(|| ExtensionError::Unmapped(id.to_string()))?;
                g.set(k, id, img);
            }
        }
        if k == 0 {
            continue;
        }
        for ((j, a, b), x) in &kp.brackets {
            if j + 1 != k {
                continue;
            }
            let ga = g.get(*j, a).ok_or_else(|| ExtensionError::Unmapped(a.to_string()))?.clone();
            let gb = g.get(*j, b).ok_or_else(|| ExtensionError::Unmapped(b.to_string()))?.clone();
            let y = kq.get(*j, &ga, &gb).ok_or(ExtensionError::Unfilled { k: *j, a: ga.clone(), b: gb.clone() })?;
            g.set(k, x, y);
        }
    }
    Ok(g)
}

/// Reasons `cand` is not the contraction-preserving extension of `f` through `P ⊂ P̃`.
pub fn check_extension(
    p: &TGraph,
    p_tilde: &TGraph,
    kp: &ContractionData,
    q: &TGraph,
    kq: &ContractionData,
    f: &CellMap,
    cand: &CellMap,
) -> Vec<String> {
    let mut out: Vec<String> =
        check_morphism_report(cand, &p_tilde.carrier(), &q.carrier()).iter().map(|v| v.to_string()).collect();
    for k in 0..=p_tilde.max_dim() {
        for (id, x) in p_tilde.cells(k) {
            let Some(img) = cand.get(k, id) else { continue };
            let Some(y) = q.get(k, img) else { continue };
            if x.d != y.d || x.c != y.c {
                out.push(format!("{id}: arity or coarity not preserved"));
            }
            if p.get(k, id).is_some() && f.get(k, id) != Some(img) {
                out.push(format!("{id}: does not extend the given map"));
            }
        }
    }
    for ((j, a, b), x) in &kp.brackets {
        let (Some(ga), Some(gb)) = (cand.get(*j, a), cand.get(*j, b)) else { continue };
        if cand.get(j + 1, x) != kq.get(*j, ga, gb) {
            out.push(format!("{x}: not sent to the filler of its image pair"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tgraph::{color_graph, globe_in, validate_contraction};

    fn two_arrows(extra: bool) -> TGraph {
        let g = color_graph(1, 3);
        let one = cell("1");
        let mut t = TGraph::new(g.clone());
        t.add(0, "x", None, globe_in(&g, 0, &one), "1").unwrap();
        t.add(1, "f", Some(("x", "x")), globe_in(&g, 1, &one), "1").unwrap();
        t.add(1, "h", Some(("x", "x")), globe_in(&g, 1, &one), "1").unwrap();
        if extra {
            t.add(2, "theta", Some(("f", "h")), globe_in(&g, 1, &one).degenerate(2).unwrap(), "1").unwrap();
        }
        t
    }

    #[test]
    fn free_contraction_fills() {
        let p = two_arrows(false);
        let (pt, k) = free_contraction(&p).unwrap();
        assert!(pt.validate().is_empty(), "{:?}", pt.validate());
        assert!(pt.get(2, "[f,h]").is_some());
        assert!(pt.get(1, "[x,x]").is_some());
        let rep = validate_contraction(&pt, &k);
        assert!(rep.is_ok(), "{:?} {:?}", rep.unfilled, rep.violations);
    }

    #[test]
    fn no_parallels_gives_diagonal() {
        let g = color_graph(1, 2);
        let mut p = TGraph::new(g.clone());
        p.add(0, "x", None, globe_in(&g, 0, &cell("1")), "1").unwrap();
        p.add(0, "y", None, globe_in(&g, 0, &cell("1")), "1").unwrap();
        p.add(1, "f", Some(("x", "y")), globe_in(&g, 1, &cell("1")), "1").unwrap();
        let (pt, _) = free_contraction(&p).unwrap();
        // level 0 pairs need only equal arity
        assert_eq!(pt.count(1), 1 + 4);
        assert!(pt.get(2, "[f,f]").is_some());
        assert!(pt.get(2, "[[x,y],f]").is_none());
    }

    #[test]
    fn universal_property() {
        let p = two_arrows(false);
        let (pt, kp) = free_contraction(&p).unwrap();
        let (q, kq) = free_contraction(&two_arrows(true)).unwrap();
        let f = CellMap::identity(&p.carrier());
        let g = universal_extension(&p, &pt, &kp, &kq, &f).unwrap();
        assert!(check_extension(&p, &pt, &kp, &q, &kq, &f, &g).is_empty());
        let mut bad = g.clone();
        bad.set(2, "[f,h]", "theta");
        let errs = check_extension(&p, &pt, &kp, &q, &kq, &f, &bad);
        assert!(errs.iter().any(|e| e.contains("not sent to the filler")), "{errs:?}");
    }
}
