use std::sync::Arc;

use globop::algebra::{check_all, LawBounds};
use globop::collections::build_cn;
use globop::models::{parse_algebra, LoadedAlgebra, StrictAlgebra, TableAlgebra};
use globop::term::Operad;

const STRICT: &str = include_str!("../data/strict_b2.alg");

#[test]
fn strict_file_is_the_tabulated_example() {
    let op = Operad::new(Arc::new(build_cn(2, 2).unwrap()));
    let fresh = TableAlgebra::tabulate(&StrictAlgebra::example(2, 2), &op);
    assert_eq!(fresh.to_text(), STRICT);
    let LoadedAlgebra::Table(t) = parse_algebra(STRICT).unwrap() else { panic!("not a table") };
    assert_eq!(t.to_text(), STRICT);
}

#[test]
fn tabulation_behaves_like_the_model() {
    let model = StrictAlgebra::example(1, 2);
    let op = Operad::new(Arc::new(build_cn(1, 2).unwrap()));
    let table = TableAlgebra::tabulate(&model, &op);
    let bounds = LawBounds { size: 3, leaves: 2 };
    let a = check_all(&model, bounds).unwrap();
    let b = check_all(&table, bounds).unwrap();
    assert!(a.ok && b.ok, "{:?} {:?}", a.witnesses, b.witnesses);
    assert_eq!(a.lines, b.lines);
}
