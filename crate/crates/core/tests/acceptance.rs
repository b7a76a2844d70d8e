use std::io::Write;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use globop::algebra::{
    check_algebra_axioms, check_all, check_consistence, evaluate, globe, magma_compose, Algebra, LawBounds,
};
use globop::coherence::{build, evaluate_diagram, operad_for, table, verify, verify_table, Axiom, Status};
use globop::collections::{
    arity_text, build_c0, build_cn, check_coglobular, color_composite, color_globe, CollectionSpec, Face, ONE, TWO,
};
use globop::contraction::{check_extension, free_contraction, universal_extension};
use globop::enumerate::{enumerate_cells, Enumeration};
use globop::fusion::{check_fusion, fusion_oracle};
use globop::glob::{cell, CellMap};
use globop::models::{parse_algebra, LoadedAlgebra, SpanAlgebra};
use globop::monoid::{check_layer, free_monoid_layers};
use globop::pasting::{Node, PastingDiagram, StarOrder};
use globop::term::{graft, Kind, Operad, RawTerm, Term};
use globop::tgraph::{color_graph, from_collection, globe_in, validate_contraction, TGraph};

const STRICT: &str = include_str!("../data/strict_b2.alg");
const SPAN: &str = include_str!("../data/span_b1.alg");

// one criterion at a time, so the clocks measure only their own work
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(n: usize, name: &str, limit: Duration, body: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let res = body();
    let took = start.elapsed();
    let line = match (&res, took <= limit) {
        (Ok(d), true) => format!("criterion {n:>2} PASS {name}: {d} [{took:.2?} of {limit:?}]\n"),
        (Ok(d), false) => format!("criterion {n:>2} FAIL {name}: too slow, {d} [{took:.2?} of {limit:?}]\n"),
        (Err(e), _) => format!("criterion {n:>2} FAIL {name}: {e} [{took:.2?}]\n"),
    };
    // written past the test harness capture so every run shows the line
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(res.is_ok() && took <= limit, "{line}");
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn op(n: usize, d: usize) -> Operad {
    Operad::new(Arc::new(build_cn(n, d).unwrap()))
}

#[test]
fn c01_generator_tables() {
    criterion(1, "generator tables", Duration::from_secs(1), || {
        let cs: Vec<CollectionSpec> =
            (0..=3).map(|n| build_cn(n, 3).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        let counts: Vec<Vec<usize>> = cs.iter().map(|c| (0..=3).map(|k| c.of_dim(k).count()).collect()).collect();
        ensure(counts == [vec![1, 2, 3, 4], vec![3, 5, 7, 9], vec![4, 7, 8, 10], vec![4, 8, 10, 11]], || {
            format!("counts {counts:?}")
        })?;
        for c in &cs {
            ensure(c.validate().is_empty(), || format!("{:?}", c.validate()))?;
            ensure(CollectionSpec::parse(&c.to_text()).as_ref() == Ok(c), || "text round trip".into())?;
        }
        let tau = cs[2].get("tau").ok_or("no tau")?;
        ensure(tau.bounds.as_ref().map(|(s, t)| (s.as_ref(), t.as_ref())) == Some(("F^0", "H^0")), || {
            format!("{:?}", tau.bounds)
        })?;
        ensure(tau.arity == color_globe(ONE, 0).degenerate(1).unwrap(), || arity_text(&tau.arity))?;
        ensure(tau.coarity == TWO && tau.dim == 1, || "tau coarity".into())?;
        let mut spots = 5;
        for c in &cs {
            for m in 1..=3 {
                for p in 0..m {
                    let g = c.get(&format!("mu_{p}^{m}")).ok_or("missing mu")?;
                    ensure(g.arity == color_composite(ONE, m, p) && g.coarity == ONE, || format!("mu_{p}^{m}"))?;
                    spots += 1;
                    if c.colors().count() == 1 {
                        continue;
                    }
                    let v = c.get(&format!("v_{p}^{m}")).ok_or("missing v")?;
                    ensure(v.arity == color_composite(TWO, m, p) && v.coarity == TWO, || format!("v_{p}^{m}"))?;
                    spots += 1;
                }
            }
        }
        let xi = cs[3].get("xi_3").ok_or("no xi_3")?;
        ensure(xi.arity == color_globe(ONE, 0).degenerate(3).unwrap() && xi.coarity == TWO, || "xi_3".into())?;
        ensure(build_cn(3, 2).is_err(), || "C^3 built below dimension 3".into())?;
        Ok(format!("4 tables, {spots} spot checks, 0 discrepancies"))
    });
}

#[test]
fn c02_coglobular_suite() {
    criterion(2, "coglobular suite", Duration::from_secs(1), || {
        let rep = check_coglobular(4).map_err(|e| e.to_string())?;
        ensure(rep.is_ok(), || format!("{:?}", &rep.violations[..rep.violations.len().min(3)]))?;
        Ok(format!("{} generator checks", rep.checked))
    });
}

fn padded(t: &Term) -> RawTerm {
    let inner = match t.kind() {
        Kind::Gen(n) => RawTerm::gen(n),
        Kind::Comp(h, args) => RawTerm::comp(padded(h), args.map(padded)),
        Kind::Bracket(a, b) => RawTerm::bracket(padded(a), padded(b)),
    };
    let k = t.dim();
    let root = t.eta().root().map_depth(&mut |j, l| if j == k { inner.clone() } else { l.to_raw() });
    RawTerm::comp(RawTerm::Point(t.coarity(), k), PastingDiagram::new(k, root).unwrap())
}

#[test]
fn c03_free_operad_laws() {
    criterion(3, "free-operad laws", Duration::from_secs(30), || {
        let o = op(1, 2);
        let max = 6;
        let e = Enumeration::build(&o, max);
        let (mut assoc, mut units, mut norms) = (0usize, 0usize, 0usize);
        for k in 0..=2 {
            for h in e.up_to(k, max) {
                let ua = o.unit_args(h.arity()).map_err(|e| e.to_string())?;
                let left = o.compose(h, &ua).map_err(|e| format!("{h} on {ua}: {e}"))?;
                let right =
                    o.compose(&o.unit(h.coarity(), k).unwrap(), &h.eta()).map_err(|e| format!("unit on {h}: {e}"))?;
                ensure(&left == h && &right == h, || format!("unit law fails on {h}"))?;
                units += 1;
                let n1 = o.normalize(&h.to_raw()).map_err(|e| format!("normalize {h}: {e}"))?;
                let n2 = o.normalize(&padded(h)).map_err(|e| format!("normalize padded {h}: {e}"))?;
                ensure(&n1 == h && &n2 == h, || format!("normalize moves {h}"))?;
                norms += 1;
                for sa in 1..=max - h.size() {
                    for a in e.fill_arity(h.arity(), sa) {
                        let ha = o.compose(h, &a).map_err(|e| format!("{h} on {a}: {e}"))?;
                        for sb in 1..=max - h.size() - sa {
                            for b in e.fill_arity(ha.arity(), sb) {
                                let lhs = o.compose(&ha, &b).map_err(|e| format!("{ha} on {b}: {e}"))?;
                                let g = graft(&o, &a, &b).map_err(|e| format!("graft {a} with {b}: {e}"))?;
                                let rhs = o.compose(h, &g).map_err(|e| format!("{h} on {g}: {e}"))?;
                                ensure(lhs == rhs, || format!("associativity fails: {h} / {a} / {b}"))?;
                                assoc += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(format!("{assoc} associativity, {units} unit, {norms} normalization instances"))
    });
}

fn two_cells(top: bool) -> TGraph {
    let g = color_graph(1, 3);
    let one = cell("1");
    let mut t = TGraph::new(g.clone());
    t.add(0, "x", None, globe_in(&g, 0, &one), "1").unwrap();
    for f in ["f", "h"] {
        t.add(1, f, Some(("x", "x")), globe_in(&g, 1, &one), "1").unwrap();
    }
    let d2 = globe_in(&g, 1, &one).degenerate(2).unwrap();
    for a in ["a", "b"] {
        t.add(2, a, Some(("f", "h")), d2.clone(), "1").unwrap();
    }
    if top {
        t.add(3, "w", Some(("a", "b")), d2.degenerate(3).unwrap(), "1").unwrap();
    }
    t
}

#[test]
fn c04_contraction_laws() {
    criterion(4, "contraction laws", Duration::from_secs(10), || {
        let mut brackets = 0;
        for (n, d, max) in [(0, 3, 5), (1, 2, 5), (2, 2, 4)] {
            let o = op(n, d);
            for k in 1..=d {
                for t in enumerate_cells(&o, k, max) {
                    let Kind::Bracket(a, b) = t.kind() else { continue };
                    brackets += 1;
                    ensure(o.parallel_reason(a, b).is_none(), || format!("{t}: components not parallel"))?;
                    ensure(t.src() == Some(a) && t.tgt() == Some(b), || format!("{t}: wrong boundary"))?;
                    ensure(t.arity() == &a.arity().degenerate(k).unwrap(), || format!("{t}: wrong arity"))?;
                    ensure(t.coarity() == a.coarity(), || format!("{t}: wrong coarity"))?;
                }
            }
        }
        let mut graphs = vec![two_cells(false), two_cells(true)];
        graphs.extend([build_c0(2).unwrap(), build_cn(1, 2).unwrap()].iter().map(|c| from_collection(c).base));
        let mut filled = 0;
        for p in &graphs {
            let (pt, k) = free_contraction(p).map_err(|e| e.to_string())?;
            ensure(pt.validate().is_empty(), || format!("{:?}", pt.validate()))?;
            let rep = validate_contraction(&pt, &k);
            ensure(rep.is_ok(), || format!("{:?} {:?}", rep.unfilled, rep.violations))?;
            filled += k.brackets.len();
        }
        Ok(format!("{brackets} enumerated brackets, {filled} free fillers over {} graphs", graphs.len()))
    });
}

fn fails_with(v: &globop::coherence::Verification) -> String {
    v.attempts
        .iter()
        .flat_map(|a| &a.built)
        .find_map(|b| b.error.clone().map(|e| format!("{}: {e}", b.name)))
        .unwrap_or_default()
}

#[test]
fn c05_ad_cells() {
    criterion(5, "AD cells", Duration::from_secs(5), || {
        let v = verify(Axiom::Ad, &[StarOrder::Diagrammatic, StarOrder::Applicative]).map_err(|e| e.to_string())?;
        let att = v.passing().ok_or_else(|| fails_with(&v))?;
        ensure(att.built.len() == 16 && att.built.iter().all(|b| b.status == Status::Ok), || v.report())?;
        ensure(att.pairs.len() == 3 && att.pairs.iter().all(|p| p.reason.is_none()), || v.report())?;
        for th in ["Theta_1", "Theta_2", "Theta_3"] {
            ensure(att.get(th).is_some_and(|t| t.is_bracket() && t.dim() == 3), || format!("{th} missing"))?;
        }
        let swapped = table(Axiom::Ad).swapped("Lambda'_1", "rho_1", "rho_2");
        let bad = verify_table(&swapped, &[att.order]).map_err(|e| e.to_string())?;
        ensure(!bad.passed() && fails_with(&bad).contains("source mismatch"), || "negative control passed".into())?;
        Ok(format!("16 cells, 3 parallel pairs under {} orientation; swapped control rejected", att.order.name()))
    });
}

#[test]
fn c06_cad_cells() {
    criterion(6, "CAD cells", Duration::from_secs(10), || {
        let v = verify(Axiom::Cad, &[StarOrder::Diagrammatic, StarOrder::Applicative]).map_err(|e| e.to_string())?;
        let att = v.passing().ok_or_else(|| fails_with(&v))?;
        ensure(att.pairs.len() == 9 && att.pairs.iter().all(|p| p.reason.is_none()), || v.report())?;
        for i in 1..=9 {
            ensure(att.get(&format!("zeta_{i}")).is_some(), || format!("zeta_{i} missing"))?;
        }
        let fixed: Vec<&str> = att.corrections().map(|b| b.name.as_str()).collect();
        ensure(fixed == ["rho_7", "Theta_1", "Theta_2"], || format!("corrections {fixed:?}"))?;
        let report = v.report();
        ensure(
            fixed.iter().all(|n| report.contains(&format!("{n} dim=2 arity=")) && report.contains("status=corrected")),
            || report.clone(),
        )?;
        ensure(att.built.iter().all(|b| b.status != Status::Failed), || report.clone())?;
        Ok(format!("{} entries, 9 parallel pairs, corrections {}", att.built.len(), fixed.join(" ")))
    });
}

#[test]
fn c07_consistence() {
    criterion(7, "consistence", Duration::from_secs(5), || {
        let LoadedAlgebra::Table(alg) = parse_algebra(STRICT).map_err(|e| e.to_string())? else {
            return Err("bundled strict algebra is not a table".into());
        };
        let mut checked = 0;
        for face in [Face::Kappa, Face::Delta] {
            for p in 0..2 {
                let c =
                    check_consistence(&alg, p, face, LawBounds { size: 3, leaves: 2 }).map_err(|e| e.to_string())?;
                ensure(c.is_ok() && c.checked > 0, || format!("{face} {p}: {:?}", c.mismatches.first()))?;
                checked += c.checked;
            }
        }
        Ok(format!("{checked} cells agree under both faces at levels 0 and 1"))
    });
}

#[test]
fn c08_algebra_laws() {
    criterion(8, "algebra laws", Duration::from_secs(60), || {
        let bounds = LawBounds { size: 3, leaves: 2 };
        let mut laws = 0;
        for text in [STRICT, SPAN] {
            let alg = parse_algebra(text).map_err(|e| e.to_string())?;
            let o = op(alg.as_dyn().level(), alg.as_dyn().max_dim());
            let rep = check_algebra_axioms(alg.as_dyn(), &o, bounds).map_err(|e| e.to_string())?;
            ensure(rep.is_ok() && rep.checked > 0, || format!("{rep:?}"))?;
            laws += rep.checked;
        }
        let span = SpanAlgebra::new();
        let o = op(1, 3);
        let assoc = o
            .parse("br(comp(gen:mu_0^1; 1:(pt:1:0,(gen:mu_0^1),pt:1:0,(pt:1:1),pt:1:0)),comp(gen:mu_0^1; 1:(pt:1:0,(pt:1:1),pt:1:0,(gen:mu_0^1),pt:1:0)))")
            .map_err(|e| e.to_string())?;
        let mut moving = 0;
        for s in span.sample(1).to_vec() {
            let Some((x, y)) = span.bounds(1, &s) else { continue };
            if x != y || span.color(1, &s) != Some(ONE) {
                continue;
            }
            let g = globe(&span, 1, &s).map_err(|e| e.to_string())?.into_root().children[0].clone();
            let pi = PastingDiagram::new(2, Node { gaps: vec![x.clone(); 4], children: vec![g; 3] }).unwrap();
            let a = evaluate(&span, &assoc, &pi).map_err(|e| e.to_string())?;
            let ss = magma_compose(&span, &o, 1, 0, &s, &s).map_err(|e| e.to_string())?;
            let l = magma_compose(&span, &o, 1, 0, &ss, &s).map_err(|e| e.to_string())?;
            ensure(span.bounds(2, &a).is_some_and(|(p, q)| p == l && q != p), || format!("associator on {s}"))?;
            if span.is_identity_map(&a) == Some(false) {
                moving += 1;
            }
        }
        ensure(moving > 0, || "every span associator is an identity".into())?;
        let t = table(Axiom::Ad);
        let att = build(&t, &operad_for(Axiom::Ad).unwrap(), StarOrder::Applicative);
        let rep = evaluate_diagram(&span, &att, &t).map_err(|e| e.to_string())?;
        ensure(rep.is_ok(), || format!("{:?}", rep.failures.first()))?;
        let full = check_all(&span, bounds).map_err(|e| e.to_string())?;
        ensure(full.ok, || format!("{:?}", full.witnesses.first()))?;
        Ok(format!(
            "{laws} law instances, {moving} non-identity associators, AD commutes on {} labellings",
            rep.checked
        ))
    });
}

#[test]
fn c09_oracle_equivalence() {
    criterion(9, "oracle equivalence", Duration::from_secs(30), || {
        let spec = build_c0(1).map_err(|e| e.to_string())?;
        let f = fusion_oracle(&spec, 3, 3);
        ensure(f.violations.is_empty(), || format!("{:?}", f.violations))?;
        let o = Operad::new(Arc::new(spec.clone()));
        let mut cells = 0;
        for k in 0..=1 {
            let c = check_fusion(&o, &f, k, 3).map_err(|e| e.to_string())?;
            ensure(c.is_ok(), || format!("fusion dim {k}: {c:?}"))?;
            cells += c.cells;
        }
        let gm = free_monoid_layers(&from_collection(&spec), 2, 2).map_err(|e| e.to_string())?;
        ensure(gm.violations.is_empty() && !gm.exhausted, || format!("{:?}", gm.violations))?;
        let mut classes = 0;
        for k in 0..=1 {
            let c = check_layer(&o, &gm, 2, k).map_err(|e| e.to_string())?;
            ensure(c.is_ok(), || format!("monoid dim {k}: {c:?}"))?;
            classes += c.classes;
        }
        Ok(format!("{cells} fusion cells, {classes} coequalizer classes"))
    });
}

#[test]
fn c10_universal_property() {
    criterion(10, "universal property", Duration::from_secs(1), || {
        let p = two_cells(false);
        let (pt, kp) = free_contraction(&p).map_err(|e| e.to_string())?;
        let (q, kq) = free_contraction(&two_cells(true)).map_err(|e| e.to_string())?;
        let f = CellMap::identity(&p.carrier());
        let g = universal_extension(&p, &pt, &kp, &kq, &f).map_err(|e| e.to_string())?;
        let errs = check_extension(&p, &pt, &kp, &q, &kq, &f, &g);
        ensure(errs.is_empty(), || format!("{errs:?}"))?;
        ensure(g.get(3, "[a,b]").map(|c| c.as_ref()) == Some("[a,b]"), || "[a,b] not sent to its filler".into())?;
        let mut perturbed = 0;
        for k in 0..=3 {
            for (id, _) in pt.cells(k) {
                for (other, _) in q.cells(k) {
                    if g.get(k, id) == Some(other) {
                        continue;
                    }
                    let mut bad = g.clone();
                    bad.set(k, id, other);
                    ensure(!check_extension(&p, &pt, &kp, &q, &kq, &f, &bad).is_empty(), || {
                        format!("{id} -> {other} accepted")
                    })?;
                    perturbed += 1;
                }
            }
        }
        Ok(format!("extension unique; {perturbed} perturbed candidates rejected"))
    });
}
