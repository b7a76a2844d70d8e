//! The coherence cells of the AD axiom (pseudo-functors, in `B^1`) and the CAD axiom
//! (pseudo-natural transformations, in `B^2`), built from their printed formulas.
//!
//! Formulas use a small syntax: `g(h; P)` for `γ(h; P)`, `[a, b]` for a bracket,
//! `e(t)` for `η(t)`, `1e(t)` for `1_{η(t)}` and `P *p Q` for `P ⋆_p Q`.
//! Names resolve to earlier entries first, then to generators.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::{evaluate, AlgError, Algebra, Sample};
use crate::collections::{arity_text, build_cn, CollectionError};
use crate::pasting::{Cursor, PastingDiagram, Side, StarOrder};
use crate::term::{Operad, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Ad,
    Cad,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Ad => "AD",
            Axiom::Cad => "CAD",
        }
    }

    /// The operad level the cells live in.
    pub fn level(self) -> usize {
        match self {
            Axiom::Ad => 1,
            Axiom::Cad => 2,
        }
    }
}

impl FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AD" => Ok(Axiom::Ad),
            "CAD" => Ok(Axiom::Cad),
            _ => Err(format!("unknown axiom '{s}' (expected AD or CAD)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    /// As printed.
    pub verbatim: String,
    /// Used when the printed form does not build.
    pub corrected: Option<String>,
    pub note: &'static str,
    /// A pasting of cells rather than a cell.
    pub pasting: bool,
}

fn cell(name: &str, f: &str) -> Entry {
    Entry { name: name.into(), verbatim: f.into(), corrected: None, note: "", pasting: false }
}

fn fixed(name: &str, verbatim: &str, corrected: &str, note: &'static str) -> Entry {
    Entry { name: name.into(), verbatim: verbatim.into(), corrected: Some(corrected.into()), note, pasting: false }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub axiom: Axiom,
    pub entries: Vec<Entry>,
    /// Cells that must be parallel, and so bracketable.
    pub pairs: Vec<(String, String)>,
}

const AD: &[(&str, &str)] = &[
    ("d", "[g(v_0^1; e(F^1) *0 e(F^1)), g(F^1; e(mu_0^1))]"),
    ("a_1", "[g(mu_0^1; e(mu_0^1) *0 e(u_1)), g(mu_0^1; e(u_1) *0 e(mu_0^1))]"),
    ("a_2", "[g(v_0^1; e(v_0^1) *0 e(v_1)), g(v_0^1; e(v_1) *0 e(v_0^1))]"),
    ("rho_1", "g(v_0^2; e([F^1; F^1]) *0 e(d))"),
    ("rho_2", "g(d; 1e(u_1) *0 1e(mu_0^1))"),
    ("rho_3", "g(F^2; e(a_1))"),
    ("rho_4", "g(d; 1e(mu_0^1) *0 1e(u_1))"),
    ("rho_5", "g(v_0^2; e(d) *0 e([F^1; F^1]))"),
    ("rho_6", "g(a_2; 1e(F^1) *0 1e(F^1) *0 1e(F^1))"),
    ("Lambda_1", "g(v_1^2; e(g(v_1^2; e(rho_2) *1 e(rho_1))) *1 e(rho_6))"),
    ("Lambda'_1", "g(v_1^2; e(rho_2) *1 e(g(v_1^2; e(rho_1) *1 e(rho_6))))"),
    ("Lambda_2", "g(v_1^2; e(g(v_1^2; e(rho_3) *1 e(rho_4))) *1 e(rho_5))"),
    ("Lambda'_2", "g(v_1^2; e(rho_3) *1 e(g(v_1^2; e(rho_4) *1 e(rho_5))))"),
    ("Theta_1", "[Lambda_1, Lambda'_1]"),
    ("Theta_2", "[Lambda'_1, Lambda_2]"),
    ("Theta_3", "[Lambda_2, Lambda'_2]"),
];

const CAD: &[(&str, &str)] = &[
    ("omega", "[g(v_0^1; e(H^1) *0 e(tau)), g(v_0^1; e(tau) *0 e(F^1))]"),
    ("dF", "[g(v_0^1; e(F^1) *0 e(F^1)), g(F^1; e(mu_0^1))]"),
    ("dH", "[g(v_0^1; e(H^1) *0 e(H^1)), g(H^1; e(mu_0^1))]"),
    ("a", "[g(v_0^1; e(v_1) *0 e(v_0^1)), g(v_0^1; e(v_0^1) *0 e(v_1))]"),
    ("b", "[g(v_0^1; e(v_0^1) *0 e(v_1)), g(v_0^1; e(v_1) *0 e(v_0^1))]"),
    ("rho_1", "g(v_0^2; e([H^1; H^1]) *0 e(omega))"),
    ("rho_2", "g(a; 1e(H^1) *0 1e(tau) *0 1e(F^1))"),
    ("rho_3", "g(v_0^2; e(omega) *0 e([F^1; F^1]))"),
    ("rho_4", "g(b; 1e(tau) *0 1e(F^1) *0 1e(F^1))"),
    ("rho_5", "g(v_0^2; e([tau; tau]) *0 e(dF))"),
    ("rho_6", "g(omega; 1e(mu_0^1))"),
];

const CAD_TAIL: &[(&str, &str)] = &[
    ("rho_8", "g(a; 1e(H^1) *0 1e(H^1) *0 1e(tau))"),
    ("deltaF", "[g(F^1; e(mu_0^1)), g(v_0^1; e(F^1) *0 e(F^1))]"),
    ("rho'_5", "g(v_0^2; e([tau; tau]) *0 e(deltaF))"),
];

pub fn table(axiom: Axiom) -> Table {
    match axiom {
        Axiom::Ad => Table {
            axiom,
            entries: AD.iter().map(|(n, f)| cell(n, f)).collect(),
            pairs: [("Lambda_1", "Lambda'_1"), ("Lambda'_1", "Lambda_2"), ("Lambda_2", "Lambda'_2")]
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        },
        Axiom::Cad => {
            let mut entries: Vec<Entry> = CAD.iter().map(|(n, f)| cell(n, f)).collect();
            entries.push(fixed(
                "rho_7",
                "g(v_0^2; e(d) *0 e([tau; tau]))",
                "g(v_0^2; e(dH) *0 e([tau; tau]))",
                "d is not defined here; the H-distributor dH is the one the diagram needs",
            ));
            entries.extend(CAD_TAIL.iter().map(|(n, f)| cell(n, f)));
            entries.push(fixed(
                "Theta_1",
                "g(v_1^2; e(g(v_1^2; e(v_1^2) *1 e(v_2)))) *1 e(v_2)",
                "g(v_1^2; e(g(v_1^2; e(v_1^2) *1 e(v_2))) *1 e(v_2))",
                "closing parenthesis moved so the outer v_1^2 gets both arguments",
            ));
            entries.push(fixed(
                "Theta_2",
                "g(v_1^2; e(g(mu_1^2; e(v_2) *1 e(v_1^2)))) *1 e(v_2)",
                "g(v_1^2; e(g(v_1^2; e(v_2) *1 e(v_1^2))) *1 e(v_2))",
                "inner head mu_1^2 replaced by v_1^2 (its arguments have color 2); parenthesis moved as for Theta_1",
            ));
            entries.push(cell("Theta_3", "g(v_1^2; e(v_2) *1 e(g(v_1^2; e(v_1^2) *1 e(v_2))))"));
            entries.push(cell("Theta_4", "g(v_1^2; e(v_2) *1 e(g(v_1^2; e(v_2) *1 e(v_1^2))))"));
            entries.push(cell("Theta_5", "g(v_1^2; e(v_1^2) *1 e(v_1^2))"));
            for i in 1..=5 {
                let f = format!("g(Theta_{i}; e(rho_4) *1 e(rho_3) *1 e(rho_2) *1 e(rho_1))");
                entries.push(cell(&format!("Lambda_{i}"), &f));
            }
            entries.push(Entry { pasting: true, ..cell("lambda", "e(rho'_5) *1 e(rho_6) *1 e(rho_7) *1 e(rho_8)") });
            for i in 1..=5 {
                entries.push(cell(&format!("Lambda_{}", i + 5), &format!("g(Theta_{i}; lambda)")));
            }
            let mut pairs = Vec::new();
            for i in 1..=9 {
                let (a, b) = (format!("Lambda_{i}"), format!("Lambda_{}", i + 1));
                entries.push(cell(&format!("zeta_{i}"), &format!("[{a}, {b}]")));
                pairs.push((a, b));
            }
            Table { axiom, entries, pairs }
        }
    }
}

impl Table {
    /// The same table with two names exchanged inside one entry's formula.
    pub fn swapped(&self, entry: &str, x: &str, y: &str) -> Table {
        let mut t = self.clone();
        for e in t.entries.iter_mut().filter(|e| e.name == entry) {
            for f in std::iter::once(&mut e.verbatim).chain(e.corrected.as_mut()) {
                *f = swap_names(f, x, y);
            }
        }
        t
    }
}

fn swap_names(f: &str, x: &str, y: &str) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let flush = |w: &mut String, out: &mut String| {
        out.push_str(if w == x {
            y
        } else if w == y {
            x
        } else {
            w
        });
        w.clear();
    };
    for ch in f.chars() {
        if ch.is_ascii_alphanumeric() || "_^'".contains(ch) {
            word.push(ch);
        } else {
            flush(&mut word, &mut out);
            out.push(ch);
        }
    }
    flush(&mut word, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Cell(Term),
    Paste(PastingDiagram<Term>),
}

struct Ctx<'a> {
    op: &'a Operad,
    env: &'a HashMap<String, Option<Value>>,
    order: StarOrder,
}

impl Ctx<'_> {
    fn lookup(&self, name: &str) -> Result<Option<&Value>, String> {
        match self.env.get(name) {
            Some(Some(v)) => Ok(Some(v)),
            Some(None) => Err(format!("depends on {name}, which failed")),
            None => Ok(None),
        }
    }
}

fn ws(cur: &mut Cursor<'_>) {
    cur.skip_ws();
}

fn expect(cur: &mut Cursor<'_>, b: u8) -> Result<(), String> {
    ws(cur);
    cur.expect(b).map_err(|e| e.to_string())
}

fn term(cur: &mut Cursor<'_>, cx: &Ctx<'_>) -> Result<Term, String> {
    ws(cur);
    let start = cur.pos;
    if cur.eat(b'[') {
        let a = term(cur, cx)?;
        ws(cur);
        if !cur.eat(b',') && !cur.eat(b';') {
            return Err(format!("expected ',' at {}", cur.pos));
        }
        let b = term(cur, cx)?;
        expect(cur, b']')?;
        return cx.op.bracket(&a, &b).map_err(|e| format!("{}: {e}", &cur.src[start..cur.pos]));
    }
    if cur.eat_str("g(") {
        let h = term(cur, cx)?;
        expect(cur, b';')?;
        let args = past(cur, cx)?;
        expect(cur, b')')?;
        return cx.op.compose(&h, &args).map_err(|e| format!("{}: {e}", &cur.src[start..cur.pos]));
    }
    let name = cur.ident().map_err(|e| e.to_string())?;
    match cx.lookup(name)? {
        Some(Value::Cell(t)) => Ok(t.clone()),
        Some(Value::Paste(_)) => Err(format!("{name} is a pasting, not a cell")),
        None => cx.op.gen(name).map_err(|_| format!("unknown name {name}")),
    }
}

fn past(cur: &mut Cursor<'_>, cx: &Ctx<'_>) -> Result<PastingDiagram<Term>, String> {
    let mut acc = patom(cur, cx)?;
    loop {
        ws(cur);
        if !cur.eat(b'*') {
            return Ok(acc);
        }
        let p = cur.number().map_err(|e| e.to_string())?;
        let rhs = patom(cur, cx)?;
        let (first, second) = match cx.order {
            StarOrder::Diagrammatic => (&acc, &rhs),
            StarOrder::Applicative => (&rhs, &acc),
        };
        acc = match first.glue(second, p) {
            Ok(x) => x,
            Err(_) if first.dim() == second.dim() && p < first.dim() => {
                let t = first.boundary(Side::Target, p).map_err(|e| e.to_string())?;
                let s = second.boundary(Side::Source, p).map_err(|e| e.to_string())?;
                return Err(format!("source mismatch in *{p}: {t} ends where {s} should begin"));
            }
            Err(e) => return Err(format!("*{p}: {e}")),
        };
    }
}

fn patom(cur: &mut Cursor<'_>, cx: &Ctx<'_>) -> Result<PastingDiagram<Term>, String> {
    ws(cur);
    if cur.eat_str("1e(") {
        let t = term(cur, cx)?;
        expect(cur, b')')?;
        return Ok(t.eta_degenerate(t.dim() + 1));
    }
    if cur.eat_str("e(") {
        let t = term(cur, cx)?;
        expect(cur, b')')?;
        return Ok(t.eta());
    }
    if cur.eat(b'(') {
        let p = past(cur, cx)?;
        expect(cur, b')')?;
        return Ok(p);
    }
    let name = cur.ident().map_err(|e| e.to_string())?;
    match cx.lookup(name)? {
        Some(Value::Paste(p)) => Ok(p.clone()),
        Some(Value::Cell(t)) => Ok(t.eta()),
        None => Err(format!("unknown pasting {name}")),
    }
}

/// Reads one formula in the given environment; `None` entries are names whose own build failed.
pub fn build_formula(
    op: &Operad,
    env: &HashMap<String, Option<Value>>,
    order: StarOrder,
    formula: &str,
    pasting: bool,
) -> Result<Value, String> {
    let cx = Ctx { op, env, order };
    let mut cur = Cursor::new(formula.trim());
    let v = if pasting { Value::Paste(past(&mut cur, &cx)?) } else { Value::Cell(term(&mut cur, &cx)?) };
    ws(&mut cur);
    if cur.pos != cur.src.len() {
        return Err(format!("unexpected '{}' after a complete formula", &cur.src[cur.pos..]));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Corrected,
    Failed,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Corrected => "corrected",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Built {
    pub name: String,
    pub status: Status,
    pub value: Option<Value>,
    /// Why the printed form failed, when it did.
    pub error: Option<String>,
    pub note: &'static str,
}

#[derive(Clone, Debug)]
pub struct PairCheck {
    pub lo: String,
    pub hi: String,
    /// `None` when parallel.
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Attempt {
    pub order: StarOrder,
    pub built: Vec<Built>,
    pub pairs: Vec<PairCheck>,
}

impl Attempt {
    pub fn is_ok(&self) -> bool {
        self.built.iter().all(|b| b.status != Status::Failed) && self.pairs.iter().all(|p| p.reason.is_none())
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.built.iter().find(|b| b.name == name).and_then(|b| match &b.value {
            Some(Value::Cell(t)) => Some(t),
            _ => None,
        })
    }

    pub fn corrections(&self) -> impl Iterator<Item = &Built> {
        self.built.iter().filter(|b| b.status == Status::Corrected)
    }
}

pub fn operad_for(axiom: Axiom) -> Result<Operad, CollectionError> {
    Ok(Operad::new(Arc::new(build_cn(axiom.level(), 3)?)))
}

/// Builds every entry under one orientation, printed form first.
pub fn build(t: &Table, op: &Operad, order: StarOrder) -> Attempt {
    let mut env = HashMap::new();
    let mut built = Vec::new();
    for e in &t.entries {
        let b = match build_formula(op, &env, order, &e.verbatim, e.pasting) {
            Ok(v) => Built { name: e.name.clone(), status: Status::Ok, value: Some(v), error: None, note: "" },
            Err(err) => match e.corrected.as_deref().map(|f| build_formula(op, &env, order, f, e.pasting)) {
                Some(Ok(v)) => Built {
                    name: e.name.clone(),
                    status: Status::Corrected,
                    value: Some(v),
                    error: Some(err),
                    note: e.note,
                },
                Some(Err(err2)) => Built {
                    name: e.name.clone(),
                    status: Status::Failed,
                    value: None,
                    error: Some(format!("{err}; corrected form: {err2}")),
                    note: e.note,
                },
                None => Built { name: e.name.clone(), status: Status::Failed, value: None, error: Some(err), note: "" },
            },
        };
        env.insert(e.name.clone(), b.value.clone());
        built.push(b);
    }
    let mut att = Attempt { order, built, pairs: Vec::new() };
    for (lo, hi) in &t.pairs {
        let reason = match (att.get(lo), att.get(hi)) {
            (Some(a), Some(b)) => op.parallel_reason(a, b),
            _ => Some("not built".to_string()),
        };
        att.pairs.push(PairCheck { lo: lo.clone(), hi: hi.clone(), reason });
    }
    att
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub axiom: Axiom,
    pub attempts: Vec<Attempt>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.attempts.iter().any(Attempt::is_ok)
    }

    pub fn passing(&self) -> Option<&Attempt> {
        self.attempts.iter().find(|a| a.is_ok())
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        for att in &self.attempts {
            let _ = writeln!(s, "axiom {} orientation {}", self.axiom.name(), att.order.name());
            for b in &att.built {
                let shape = match &b.value {
                    Some(Value::Cell(t)) => format!("dim={} arity={}", t.dim(), arity_text(t.arity())),
                    Some(Value::Paste(p)) => format!("dim={} shape={}", p.dim(), p.tree()),
                    None => "dim=- arity=-".to_string(),
                };
                let _ = write!(s, "{} {} status={}", b.name, shape, b.status.name());
                match (b.status, &b.error) {
                    (Status::Corrected, Some(e)) => _ = write!(s, " ({}; printed form: {e})", b.note),
                    (Status::Failed, Some(e)) => _ = write!(s, " ({e})"),
                    _ => {}
                }
                s.push('\n');
            }
            for p in &att.pairs {
                match &p.reason {
                    None => _ = writeln!(s, "PAIR {} {} parallel=yes", p.lo, p.hi),
                    Some(r) => _ = writeln!(s, "PAIR {} {} parallel=no({r})", p.lo, p.hi),
                }
            }
            let _ = writeln!(s, "result {} {}", att.order.name(), if att.is_ok() { "pass" } else { "fail" });
        }
        let _ = writeln!(s, "{} {}", self.axiom.name(), if self.passed() { "verified" } else { "not verified" });
        s
    }
}

/// Builds the table under each orientation in turn.
pub fn verify_table(t: &Table, orders: &[StarOrder]) -> Result<Verification, CollectionError> {
    let op = operad_for(t.axiom)?;
    Ok(Verification { axiom: t.axiom, attempts: orders.iter().map(|o| build(t, &op, *o)).collect() })
}

pub fn verify(axiom: Axiom, orders: &[StarOrder]) -> Result<Verification, CollectionError> {
    verify_table(&table(axiom), orders)
}

#[derive(Clone, Debug, Default)]
pub struct DiagramReport {
    /// Argument pastings tried.
    pub checked: usize,
    pub failures: Vec<String>,
}

impl DiagramReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Evaluates the paired cells of a built table on every sample pasting of their arity:
/// both sides of each pair must agree, and the brackets between them must be fillable.
pub fn evaluate_diagram(alg: &dyn Algebra, att: &Attempt, t: &Table) -> Result<DiagramReport, AlgError> {
    let mut rep = DiagramReport::default();
    let Some(first) = t.pairs.first().and_then(|(a, _)| att.get(a)) else {
        return Err(AlgError::Shape("the table did not build".into()));
    };
    let names: Vec<&String> = t.pairs.iter().flat_map(|(a, b)| [a, b]).collect();
    let brackets: Vec<&Term> = att
        .built
        .iter()
        .filter_map(|b| match &b.value {
            Some(Value::Cell(c)) if c.is_bracket() && c.dim() == first.dim() + 1 => Some(c),
            _ => None,
        })
        .collect();
    let sample = Sample::of(alg);
    for pi in sample.labellings(first.arity()) {
        rep.checked += 1;
        let mut seen: Option<(String, Result<_, AlgError>)> = None;
        for n in &names {
            let cell = att.get(n).ok_or_else(|| AlgError::Shape(format!("{n} did not build")))?;
            let v = evaluate(alg, cell, &pi);
            if let Err(e) = &v {
                rep.failures.push(format!("{n} on {pi}: {e}"));
            }
            match &seen {
                None => seen = Some((n.to_string(), v)),
                Some((m, w)) if w.is_ok() && v.is_ok() && *w != v => {
                    rep.failures.push(format!("{m} and {n} differ on {pi}: {} vs {}", w.clone().unwrap(), v.unwrap()));
                }
                _ => {}
            }
        }
        let top = pi.degenerate(pi.dim() + 1)?;
        for b in &brackets {
            if let Err(e) = evaluate(alg, b, &top) {
                rep.failures.push(format!("{b} on {pi}: {e}"));
            }
        }
    }
    Ok(rep)
}
