//! The free contractible operad as an alternating colimit.
//!
//! Starting from `C_0 = X`, each layer takes the free monoid `L(C_n)` on the
//! current letters, glues every word of old letters to the letter it became
//! (`φ`), adds formal brackets for every parallel pair (`C(L_n)`), and glues
//! every old bracket letter to the new bracket of its images (`ψ`). Both
//! gluings are closed under the operations, so each quotient is a
//! coequalizer of monoids or of contractions. Elements are cut off by the
//! size of the expression over `X` they denote.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::collections::{Arity, CollectionSpec, Generator};
use crate::enumerate::{enumerate_cells, Enumeration};
use crate::glob::Color;
use crate::monoid::UnionFind;
use crate::pasting::Node;
use crate::term::{Kind, Operad, RawTerm, Term, TermError};

/// A cell of some `C_n`: a class of expressions over `X`.
#[derive(Clone, Debug)]
pub struct Letter {
    /// Smallest member, by size then structure.
    pub rep: RawTerm,
    pub dim: usize,
    pub arity: Arity,
    pub coarity: Color,
    pub bounds: Option<(usize, usize)>,
    pub unit: bool,
    pub members: Vec<RawTerm>,
}

impl Letter {
    pub fn size(&self) -> usize {
        self.rep.size()
    }
}

#[derive(Clone, Debug)]
pub struct Fusion {
    /// `C_0, C_1, ...`
    pub stages: Vec<Vec<Letter>>,
    pub violations: Vec<String>,
    /// A relation needed an element past the size bound.
    pub exhausted: bool,
}

/// What the next layer needs to know about the previous one.
struct Prev {
    words: Vec<Term>,
    /// word of `L(C_{n-1})` to its letter in `C_n`
    word_letter: Vec<usize>,
    /// letter of `C_{n-1}` to its letter in `C_n`
    j: Vec<usize>,
    /// bracket elements of `C(L_{n-1})` as letters of `C_n`: (bracket, lo, hi)
    brackets: Vec<(usize, usize, usize)>,
}

fn letter_name(i: usize) -> String {
    format!("c{i}")
}

fn letter_index(t: &Term) -> usize {
    t.name().and_then(|n| n[1..].parse().ok()).expect("letters are named c<i>")
}

fn letter_operad(letters: &[Letter], n_colors: u8, max_dim: usize) -> Operad {
    let mut spec = CollectionSpec::empty("letters", n_colors, max_dim);
    for (i, l) in letters.iter().enumerate() {
        let g = Generator {
            name: Arc::from(letter_name(i)),
            dim: l.dim,
            bounds: l.bounds.map(|(s, t)| (Arc::from(letter_name(s)), Arc::from(letter_name(t)))),
            arity: l.arity.clone(),
            coarity: l.coarity,
        };
        spec.add(g).expect("letters are distinct");
        if l.unit {
            spec.set_point(l.coarity, l.dim, &letter_name(i));
        }
    }
    Operad::new(Arc::new(spec))
}

fn expand(t: &Term, letters: &[Letter]) -> RawTerm {
    match t.kind() {
        Kind::Gen(_) => letters[letter_index(t)].rep.clone(),
        Kind::Comp(h, args) => RawTerm::comp(expand(h, letters), args.map(|a| expand(a, letters))),
        Kind::Bracket(a, b) => RawTerm::bracket(expand(a, letters), expand(b, letters)),
    }
}

fn rename(op: &Operad, t: &Term, j: &[usize]) -> Result<Term, TermError> {
    match t.kind() {
        Kind::Gen(_) => op.gen(&letter_name(j[letter_index(t)])),
        Kind::Comp(h, args) => op.compose(&rename(op, h, j)?, &args.try_map(|a| rename(op, a, j))?),
        Kind::Bracket(a, b) => op.bracket(&rename(op, a, j)?, &rename(op, b, j)?),
    }
}

fn groups(uf: &mut UnionFind, n: usize) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        out.entry(uf.find(i)).or_default().push(i);
    }
    out
}

/// Words of `L(C_n)` under union-find.
struct Words<'a> {
    op: &'a Operad,
    letters: &'a [Letter],
    terms: Vec<Term>,
    raw: Vec<RawTerm>,
    index: HashMap<Term, usize>,
    uf: UnionFind,
    expanded: HashSet<(usize, usize)>,
}

impl Words<'_> {
    fn add(&mut self, t: Term) -> usize {
        if let Some(&i) = self.index.get(&t) {
            return i;
        }
        let i = self.uf.push();
        self.raw.push(expand(&t, self.letters));
        self.index.insert(t.clone(), i);
        self.terms.push(t.clone());
        if let Some((s, tt)) = t.bounds() {
            self.add(s.clone());
            self.add(tt.clone());
        }
        i
    }

    fn id(&self, t: &Term) -> usize {
        self.index[t]
    }

    fn gen(&mut self, i: usize) -> usize {
        let g = self.op.gen(&letter_name(i)).expect("letter");
        self.add(g)
    }

    /// Closes the relation under composition and boundaries. True if anything merged.
    fn close(&mut self, bound: usize, violations: &mut Vec<String>) -> bool {
        let mut any = false;
        loop {
            let mut changed = false;
            let classes = groups(&mut self.uf, self.terms.len());
            // a head may be replaced by any composite it is glued to
            for i in 0..self.terms.len() {
                let Kind::Comp(h, args) = self.terms[i].kind().clone() else { continue };
                let root = self.uf.find(self.id(&h));
                for &m in &classes[&root] {
                    if !matches!(self.terms[m].kind(), Kind::Comp(..)) || !self.expanded.insert((i, m)) {
                        continue;
                    }
                    match self.op.compose(&self.terms[m].clone(), &args) {
                        Ok(w) => {
                            if self.index.contains_key(&w) || expand(&w, self.letters).size() <= bound {
                                let k = self.add(w);
                                changed |= self.uf.union(i, k);
                            }
                        }
                        Err(e) => violations.push(format!("glued head does not compose: {e}")),
                    }
                }
            }
            // equal heads on equal arguments
            let mut sig: HashMap<(usize, Node<usize>), usize> = HashMap::new();
            for i in 0..self.terms.len() {
                let t = self.terms[i].clone();
                let key = match t.kind() {
                    Kind::Comp(h, args) => {
                        let h = self.id(h);
                        let a = args.root().map(&mut |a| self.index[a]);
                        (h, a)
                    }
                    Kind::Gen(_) if !t.is_unit() => {
                        let units = self.op.unit_args(t.arity()).expect("pointed");
                        let a = units.root().map(&mut |u| self.index.get(u).copied().unwrap_or(usize::MAX));
                        (i, a)
                    }
                    _ => continue,
                };
                let key = (self.uf.find(key.0), key.1.map(&mut |&a| if a == usize::MAX { a } else { self.uf.find(a) }));
                match sig.get(&key) {
                    Some(&o) => changed |= self.uf.union(i, o),
                    None => {
                        sig.insert(key, i);
                    }
                }
            }
            // glued cells have glued boundaries
            for ms in groups(&mut self.uf, self.terms.len()).values() {
                let bs: Vec<(usize, usize)> =
                    ms.iter().filter_map(|&m| self.terms[m].bounds().map(|(s, t)| (self.id(s), self.id(t)))).collect();
                for w in bs.windows(2) {
                    changed |= self.uf.union(w[0].0, w[1].0);
                    changed |= self.uf.union(w[0].1, w[1].1);
                }
            }
            any |= changed;
            if !changed {
                return any;
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Elem {
    /// a class of words, by its root
    Old(usize),
    Br(usize, usize),
}

struct ElemData {
    kind: Elem,
    dim: usize,
    arity: Arity,
    coarity: Color,
    bounds: Option<(usize, usize)>,
}

fn min_raw(xs: impl Iterator<Item = RawTerm>) -> RawTerm {
    xs.min_by(|a, b| (a.size(), a).cmp(&(b.size(), b))).expect("nonempty class")
}

/// `C_N` for `layers = N`, from the collection itself as `C_0`.
pub fn fusion_oracle(spec: &CollectionSpec, layers: usize, bound: usize) -> Fusion {
    fusion_with(spec, layers, bound, true)
}

/// With `glue` off the layers are only stacked, never identified.
fn fusion_with(spec: &CollectionSpec, layers: usize, bound: usize, glue: bool) -> Fusion {
    let d = spec.max_dim;
    let c0: Vec<Letter> = {
        let names: HashMap<&str, usize> =
            spec.generators().iter().enumerate().map(|(i, g)| (g.name.as_ref(), i)).collect();
        spec.generators()
            .iter()
            .map(|g| Letter {
                rep: RawTerm::Gen(g.name.clone()),
                dim: g.dim,
                arity: g.arity.clone(),
                coarity: g.coarity,
                bounds: g.bounds.as_ref().map(|(s, t)| (names[s.as_ref()], names[t.as_ref()])),
                unit: spec.is_point(&g.name),
                members: vec![RawTerm::Gen(g.name.clone())],
            })
            .collect()
    };
    let mut out = Fusion { stages: vec![c0], violations: Vec::new(), exhausted: false };
    let mut prev: Option<Prev> = None;
    for _ in 0..layers {
        let letters = out.stages.last().expect("C_0").clone();
        let (next, p) = layer(&letters, prev.as_ref().filter(|_| glue), spec.n_colors, d, bound, &mut out);
        out.stages.push(next);
        prev = Some(p);
    }
    out
}

fn layer(
    letters: &[Letter],
    prev: Option<&Prev>,
    n_colors: u8,
    d: usize,
    bound: usize,
    out: &mut Fusion,
) -> (Vec<Letter>, Prev) {
    let op = letter_operad(letters, n_colors, d);
    let mut ws = Words {
        op: &op,
        letters,
        terms: Vec::new(),
        raw: Vec::new(),
        index: HashMap::new(),
        uf: UnionFind::default(),
        expanded: HashSet::new(),
    };
    for i in 0..letters.len() {
        ws.gen(i);
    }
    let en = Enumeration::build_weighted(&op, bound, false, &|g| letters[letter_index(g)].size());
    for k in 0..=d {
        for t in en.cells(k, bound) {
            ws.add(t);
        }
    }

    // φ: a word of old letters is the letter it became
    if let Some(p) = prev {
        for (wi, w) in p.words.iter().enumerate() {
            match rename(&op, w, &p.j) {
                Ok(w2) => {
                    let a = ws.add(w2);
                    let b = ws.gen(p.word_letter[wi]);
                    ws.uf.union(a, b);
                }
                Err(e) => out.violations.push(format!("old word {w} does not rename: {e}")),
            }
        }
    }
    ws.close(bound, &mut out.violations);

    // the classes of L_n become the old elements of C(L_n)
    let classes = groups(&mut ws.uf, ws.terms.len());
    let mut elems: Vec<ElemData> = Vec::new();
    let mut class_elem: HashMap<usize, usize> = HashMap::new();
    for (&root, ms) in &classes {
        let t = &ws.terms[ms[0]];
        for &m in &ms[1..] {
            let u = &ws.terms[m];
            if u.dim() != t.dim() || u.arity() != t.arity() || u.coarity() != t.coarity() {
                out.violations.push(format!("{t} and {u} are glued but differ in type"));
            }
        }
        class_elem.insert(root, elems.len());
        elems.push(ElemData {
            kind: Elem::Old(root),
            dim: t.dim(),
            arity: t.arity().clone(),
            coarity: t.coarity(),
            bounds: None,
        });
    }
    for (&root, ms) in &classes {
        if let Some((s, t)) = ws.terms[ms[0]].bounds() {
            let (s, t) = (ws.uf.find(ws.id(s)), ws.uf.find(ws.id(t)));
            elems[class_elem[&root]].bounds = Some((class_elem[&s], class_elem[&t]));
        }
    }
    let class_raw: HashMap<usize, Vec<RawTerm>> =
        classes.iter().map(|(&r, ms)| (r, ms.iter().map(|&m| ws.raw[m].clone()).collect())).collect();
    let unit_class: HashSet<usize> =
        classes.iter().filter(|(_, ms)| ms.iter().any(|&m| ws.terms[m].is_unit())).map(|(&r, _)| r).collect();

    let mut euf = UnionFind::new(elems.len());
    loop {
        let mut changed = false;
        let eg = groups(&mut euf, elems.len());
        let reps = elem_reps(&elems, &eg, &mut euf, &class_raw);
        let mut have: HashSet<(usize, usize)> = HashSet::new();
        for e in &elems {
            if let Elem::Br(a, b) = e.kind {
                have.insert((euf.find(a), euf.find(b)));
            }
        }
        // C: a filler for every parallel pair of classes
        for k in 0..d {
            let roots: Vec<usize> = eg.keys().copied().filter(|&r| elems[r].dim == k).collect();
            for &a in &roots {
                for &b in &roots {
                    if have.contains(&(a, b)) || 1 + reps[&a].size().max(reps[&b].size()) > bound {
                        continue;
                    }
                    let (ea, eb) = (&elems[a], &elems[b]);
                    let fb = |x: &ElemData, uf: &mut UnionFind| x.bounds.map(|(s, t)| (uf.find(s), uf.find(t)));
                    if ea.arity != eb.arity || ea.coarity != eb.coarity || fb(ea, &mut euf) != fb(eb, &mut euf) {
                        continue;
                    }
                    let data = ElemData {
                        kind: Elem::Br(a, b),
                        dim: k + 1,
                        arity: ea.arity.degenerate(k + 1).expect("raising"),
                        coarity: ea.coarity,
                        bounds: Some((a, b)),
                    };
                    elems.push(data);
                    euf.push();
                    have.insert((a, b));
                    changed = true;
                }
            }
        }
        // ψ: an old bracket letter is the new bracket of its images
        if let Some(p) = prev {
            let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
            for (i, e) in elems.iter().enumerate() {
                if let Elem::Br(a, b) = e.kind {
                    by_pair.entry((euf.find(a), euf.find(b))).or_insert(i);
                }
            }
            for &(br, lo, hi) in &p.brackets {
                let elem_of = |ws: &mut Words, euf: &mut UnionFind, letter: usize| {
                    let w = ws.gen(letter);
                    let r = ws.uf.find(w);
                    euf.find(class_elem[&r])
                };
                let x = elem_of(&mut ws, &mut euf, br);
                let (ka, kb) = (elem_of(&mut ws, &mut euf, lo), elem_of(&mut ws, &mut euf, hi));
                match by_pair.get(&(ka, kb)).copied() {
                    Some(y) => changed |= euf.union(x, y),
                    None => out.exhausted = true,
                }
            }
        }
        // brackets of glued pairs are glued, and glued cells have glued boundaries
        let mut sig: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, e) in elems.iter().enumerate() {
            if let Elem::Br(a, b) = e.kind {
                let key = (euf.find(a), euf.find(b));
                match sig.get(&key) {
                    Some(&o) => changed |= euf.union(i, o),
                    None => {
                        sig.insert(key, i);
                    }
                }
            }
        }
        for ms in groups(&mut euf, elems.len()).values() {
            let bs: Vec<(usize, usize)> = ms.iter().filter_map(|&m| elems[m].bounds).collect();
            for w in bs.windows(2) {
                changed |= euf.union(w[0].0, w[1].0);
                changed |= euf.union(w[0].1, w[1].1);
            }
        }
        if !changed {
            break;
        }
    }

    // classes of C(L_n) are the letters of C_{n+1}
    let eg = groups(&mut euf, elems.len());
    let reps = elem_reps(&elems, &eg, &mut euf, &class_raw);
    let mut order: Vec<usize> = eg.keys().copied().collect();
    order.sort_by(|a, b| (elems[*a].dim, reps[a].size(), &reps[a]).cmp(&(elems[*b].dim, reps[b].size(), &reps[b])));
    let letter_of: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut next = Vec::new();
    for &r in &order {
        let ms = &eg[&r];
        let mut members = Vec::new();
        let mut unit = false;
        for &m in ms {
            match elems[m].kind {
                Elem::Old(c) => {
                    members.extend(class_raw[&c].iter().cloned());
                    unit |= unit_class.contains(&c);
                }
                Elem::Br(a, b) => {
                    members.push(RawTerm::bracket(reps[&euf.find(a)].clone(), reps[&euf.find(b)].clone()))
                }
            }
            let (e, f) = (&elems[m], &elems[r]);
            if e.dim != f.dim || e.arity != f.arity || e.coarity != f.coarity {
                out.violations.push(format!("glued elements differ in type: {} and {}", reps[&r], m));
            }
        }
        members.sort();
        members.dedup();
        let e = &elems[r];
        next.push(Letter {
            rep: reps[&r].clone(),
            dim: e.dim,
            arity: e.arity.clone(),
            coarity: e.coarity,
            bounds: e.bounds.map(|(s, t)| (letter_of[&euf.find(s)], letter_of[&euf.find(t)])),
            unit,
            members,
        });
    }

    let word_letter: Vec<usize> = (0..ws.terms.len())
        .map(|i| {
            let r = ws.uf.find(i);
            letter_of[&euf.find(class_elem[&r])]
        })
        .collect();
    let j: Vec<usize> = (0..letters.len())
        .map(|i| {
            let g = op.gen(&letter_name(i)).expect("letter");
            word_letter[ws.id(&g)]
        })
        .collect();
    let brackets = elems
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match e.kind {
            Elem::Br(a, b) => Some((letter_of[&euf.find(i)], letter_of[&euf.find(a)], letter_of[&euf.find(b)])),
            Elem::Old(_) => None,
        })
        .collect();
    (next, Prev { words: ws.terms.clone(), word_letter, j, brackets })
}

/// Smallest member expression of each element class, lower dimensions first.
fn elem_reps(
    elems: &[ElemData],
    eg: &BTreeMap<usize, Vec<usize>>,
    euf: &mut UnionFind,
    class_raw: &HashMap<usize, Vec<RawTerm>>,
) -> HashMap<usize, RawTerm> {
    let mut roots: Vec<usize> = eg.keys().copied().collect();
    roots.sort_by_key(|&r| elems[r].dim);
    let mut reps: HashMap<usize, RawTerm> = HashMap::new();
    for r in roots {
        let mut cands = Vec::new();
        for &m in &eg[&r] {
            match elems[m].kind {
                Elem::Old(c) => cands.extend(class_raw[&c].iter().cloned()),
                Elem::Br(a, b) => {
                    let (a, b) = (euf.find(a), euf.find(b));
                    cands.push(RawTerm::bracket(reps[&a].clone(), reps[&b].clone()));
                }
            }
        }
        reps.insert(r, min_raw(cands.into_iter()));
    }
    reps
}

#[derive(Clone, Debug, Default)]
pub struct FusionCheck {
    pub cells: usize,
    pub split: Vec<String>,
    pub merged: Vec<String>,
    pub missing: Vec<Term>,
    pub extra: Vec<Term>,
}

impl FusionCheck {
    pub fn is_ok(&self) -> bool {
        self.split.is_empty() && self.merged.is_empty() && self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Compares the letters of the last stage in `dim` with the enumerated normal forms.
pub fn check_fusion(op: &Operad, f: &Fusion, dim: usize, bound: usize) -> Result<FusionCheck, TermError> {
    let mut rep = FusionCheck::default();
    let mut seen: HashMap<Term, String> = HashMap::new();
    for l in f.stages.last().expect("C_0").iter().filter(|l| l.dim == dim && l.size() <= bound) {
        rep.cells += 1;
        let terms: HashSet<Term> = l.members.iter().map(|m| op.normalize(m)).collect::<Result<_, _>>()?;
        if terms.len() != 1 {
            rep.split.push(format!("{}: {terms:?}", l.rep));
        }
        let t = op.normalize(&l.rep)?;
        if let Some(o) = seen.insert(t.clone(), l.rep.to_string()) {
            rep.merged.push(format!("{o} and {} both denote {t}", l.rep));
        }
    }
    let want = enumerate_cells(op, dim, bound);
    let want_set: HashSet<&Term> = want.iter().collect();
    rep.missing = want.iter().filter(|t| !seen.contains_key(*t)).cloned().collect();
    let mut extra: Vec<Term> = seen.keys().filter(|t| !want_set.contains(t)).cloned().collect();
    extra.sort();
    rep.extra = extra;
    Ok(rep)
}
