use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_globop")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn tmp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("globop-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn collection_lines() {
    let o = run(&["collection", "--n", "0", "--max-dim", "3"]);
    assert!(o.status.success());
    let gens = stdout(&o).lines().filter(|l| !l.starts_with(['#', '@'])).count();
    assert_eq!(gens, 10);
    let o = run(&["collection", "--n", "2", "--max-dim", "1"]);
    let dims: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with(['#', '@']))
        .map(|l| l.split(' ').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(dims.iter().filter(|d| *d == "1").count(), 7);
    assert_eq!(dims.iter().filter(|d| *d == "0").count(), 4);
    let o = run(&["collection", "--n", "3", "--max-dim", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn collection_file_round_trips() {
    let out = std::env::temp_dir().join(format!("globop-{}-c2.col", std::process::id()));
    let o = run(&["collection", "--n", "2", "--max-dim", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let back = globop::collections::CollectionSpec::parse(&text).unwrap();
    assert_eq!(back, globop::collections::build_cn(2, 3).unwrap());
}

#[test]
fn enumerate_is_deterministic() {
    let o = run(&["enumerate", "--operad", "0", "--dim", "1", "--size", "2"]);
    assert_eq!(stdout(&o), "pt:1:1\ngen:mu_0^1\nbr(pt:1:0,pt:1:0)\n");
    let o = run(&["enumerate", "--operad", "0", "--dim", "1", "--size", "0"]);
    assert!(o.status.success() && o.stdout.is_empty());
    let a = run(&["enumerate", "--operad", "1", "--dim", "2", "--size", "3"]);
    let b = run(&["enumerate", "--operad", "1", "--dim", "2", "--size", "3"]);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_axioms() {
    let o = run(&["verify", "--axiom", "AD", "--orientation", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    for th in ["Theta_1", "Theta_2", "Theta_3"] {
        assert!(r.contains(&format!("{th} dim=3 arity=(()()())@1,1,1,1,1,1,1 status=ok")), "{r}");
    }
    assert!(r.contains("result applicative pass") && r.contains("result diagrammatic fail"));

    let o = run(&["verify", "--axiom", "AD", "--orientation", "diagrammatic"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("source mismatch"));

    let o = run(&["verify", "--axiom", "CAD"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    let corrected: Vec<&str> = r
        .lines()
        .skip_while(|l| !l.contains("orientation applicative"))
        .filter(|l| l.contains("status=corrected"))
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    assert_eq!(corrected, ["rho_7", "Theta_1", "Theta_2"]);
    assert_eq!(run(&["verify", "--axiom", "CAD"]).stdout, o.stdout);

    assert_eq!(run(&["verify", "--axiom", "XY"]).status.code(), Some(2));
}

#[test]
fn check_bundled_algebras() {
    for f in ["strict_b2.alg", "span_b1.alg"] {
        let o = run(&["check-algebra", &data(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("algebra ok\n"));
    }
}

#[test]
fn check_algebra_failures() {
    let text = std::fs::read_to_string(data("strict_b2.alg")).unwrap();
    let line = "interp F^2 2:(p,(a0,(a0_a1),a1),p) -> b0_b1";
    assert!(text.contains(line));
    let bad = tmp("bad.alg", &text.replace(line, "interp F^2 2:(p,(a0,(a0_a1),a1),p) -> b2_b2"));
    let o = run(&["check-algebra", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness normalization: gen:F^2 on 2:(p,(a0,(a0_a1),a1),p)"), "{}", stdout(&o));

    let broken = tmp("broken.alg", "level 1\nmax-dim 2\ndim 2\ncell 0 p 1\ncell 1 f 1 p\n");
    let o = run(&["check-algebra", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));
    assert_eq!(run(&["check-algebra", "/nonexistent/file.alg"]).status.code(), Some(2));
}
