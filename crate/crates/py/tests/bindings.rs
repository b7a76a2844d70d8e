use globop_py::{check_algebra, collection, enumerate, verify};

#[test]
fn functions_answer_like_the_cli() {
    let c = collection(2, 1).unwrap();
    assert_eq!(c.lines().filter(|l| !l.starts_with(['#', '@'])).count(), 11);
    assert_eq!(enumerate(0, 1, 2, 3).unwrap(), ["pt:1:1", "gen:mu_0^1", "br(pt:1:0,pt:1:0)"]);
    let (ok, report) = verify("AD", "both").unwrap();
    assert!(ok && report.ends_with("AD verified\n"));
    let (ok, _) = verify("AD", "diagrammatic").unwrap();
    assert!(!ok);
}

#[test]
fn span_file_checks() {
    let text = include_str!("../../core/data/span_b1.alg");
    let (ok, lines, witnesses) = check_algebra(text, 2, 2).unwrap();
    assert!(ok, "{witnesses:?}");
    assert_eq!(lines.len(), 6);
}
