use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use globop::enumerate::Enumeration;
use globop::pasting::{Cursor, PastingDiagram, Side, Tree};
use globop::term::{graft, Operad, Term};

const MAX: usize = 6;

// GLOBOP_SEED picks another fixed stream
fn config() -> Config {
    let seed = std::env::var("GLOBOP_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x6c0b);
    Config {
        cases: 400,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        max_global_rejects: 4096,
        ..Config::default()
    }
}

fn world() -> &'static (Operad, Enumeration) {
    static W: OnceLock<(Operad, Enumeration)> = OnceLock::new();
    W.get_or_init(|| {
        let op = Operad::new(Arc::new(globop::collections::build_cn(1, 2).unwrap()));
        let e = Enumeration::build(&op, MAX);
        (op, e)
    })
}

fn pick<T: Clone>(v: &[T], i: usize) -> Option<T> {
    (!v.is_empty()).then(|| v[i % v.len()].clone())
}

fn term(k: usize, i: usize, budget: usize) -> Option<Term> {
    pick(&world().1.cells(k, budget), i)
}

fn args(t: &Term, size: usize, i: usize) -> Option<PastingDiagram<Term>> {
    pick(&world().1.fill_arity(t.arity(), size), i)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn composition_is_associative(k in 0usize..=2, ih: usize, sa in 1usize..=3, ia: usize, sb in 1usize..=2, ib: usize) {
        let (op, _) = world();
        let h = term(k, ih, MAX - sa - sb);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        prop_assume!(h.size() + sa + sb <= MAX);
        let a = args(&h, sa, ia);
        prop_assume!(a.is_some());
        let a = a.unwrap();
        let ha = op.compose(&h, &a).unwrap();
        let b = args(&ha, sb, ib);
        prop_assume!(b.is_some());
        let b = b.unwrap();
        let lhs = op.compose(&ha, &b).unwrap();
        let rhs = op.compose(&h, &graft(op, &a, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn units_are_neutral(k in 0usize..=2, i: usize) {
        let (op, _) = world();
        let t = term(k, i, MAX).unwrap();
        prop_assert_eq!(&op.compose(&t, &op.unit_args(t.arity()).unwrap()).unwrap(), &t);
        prop_assert_eq!(&op.compose(&op.unit(t.coarity(), k).unwrap(), &t.eta()).unwrap(), &t);
    }

    #[test]
    fn normal_forms_are_fixed(k in 0usize..=2, i: usize) {
        let (op, _) = world();
        let t = term(k, i, MAX).unwrap();
        prop_assert_eq!(&op.normalize(&t.to_raw()).unwrap(), &t);
        prop_assert_eq!(&op.parse(&t.to_string()).unwrap(), &t);
    }

    #[test]
    fn composites_keep_head_coarity_and_take_argument_boundary(k in 1usize..=2, ih: usize, sa in 1usize..=3, ia: usize) {
        let (op, _) = world();
        let h = term(k, ih, MAX - sa).unwrap();
        let a = args(&h, sa, ia);
        prop_assume!(a.is_some());
        let c = op.compose(&h, &a.unwrap()).unwrap();
        prop_assert_eq!(c.coarity(), h.coarity());
        prop_assert_eq!(c.dim(), h.dim());
        let (s, t) = c.bounds().unwrap();
        prop_assert_eq!(s.arity(), &c.arity().boundary(Side::Source, k - 1).unwrap());
        prop_assert_eq!(t.arity(), &c.arity().boundary(Side::Target, k - 1).unwrap());
    }

    #[test]
    fn parallel_pairs_bracket(k in 0usize..=1, i: usize, j: usize) {
        let (op, e) = world();
        let a = term(k, i, 3).unwrap();
        let same: Vec<Term> = e.cells(k, 3).into_iter().filter(|b| op.parallel_reason(&a, b).is_none()).collect();
        let b = pick(&same, j).unwrap();
        let br = op.bracket(&a, &b).unwrap();
        prop_assert_eq!(br.src(), Some(&a));
        prop_assert_eq!(br.tgt(), Some(&b));
        prop_assert_eq!(br.arity(), &a.arity().degenerate(k + 1).unwrap());
    }

    #[test]
    fn tree_text_round_trips(h in 0usize..=3, n in 1usize..=5, i: usize) {
        let trees = Tree::all_up_to(h, n);
        let t = pick(&trees, i).unwrap();
        let text = t.to_string();
        let back = Cursor::new(&text).tree().unwrap();
        prop_assert_eq!(back, t);
    }
}
