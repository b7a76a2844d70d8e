//! Concrete algebras: strict ones from finite monoids, the span bicategory
//! with honest associators, and finite tables read from text.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Mutex;

use indexmap::IndexMap;

use crate::algebra::{AlgError, Algebra, Sample};
use crate::collections::{ONE, TWO};
use crate::glob::{cell, CellId, Color};
use crate::pasting::{Cursor, PastingDiagram};
use crate::term::Operad;

/// What a generator name asks an algebra to do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Unit,
    Compose(Color, usize),
    F,
    H,
    Tau,
}

fn parse_gen(name: &str) -> Option<Op> {
    let (base, _) = name.split_once('^').unwrap_or((name, ""));
    if name.starts_with("u_") && !name.contains('^') || name.starts_with("v_") && !name.contains('^') {
        return Some(Op::Unit);
    }
    if let Some(p) = base.strip_prefix("mu_") {
        return Some(Op::Compose(ONE, p.parse().ok()?));
    }
    if let Some(p) = base.strip_prefix("v_") {
        return Some(Op::Compose(TWO, p.parse().ok()?));
    }
    match base {
        "F" => Some(Op::F),
        "H" => Some(Op::H),
        "tau" => Some(Op::Tau),
        _ => None,
    }
}

fn no_interp(gen: &str, args: &PastingDiagram<CellId>) -> AlgError {
    AlgError::NoInterp { gen: gen.to_string(), args: args.to_string() }
}

fn two_leaves(gen: &str, args: &PastingDiagram<CellId>) -> Result<(CellId, CellId), AlgError> {
    match args.root().leaf_labels().as_slice() {
        [(_, a), (_, b)] => Ok(((*a).clone(), (*b).clone())),
        _ => Err(no_interp(gen, args)),
    }
}

fn top(gen: &str, args: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
    args.globe_top().cloned().ok_or_else(|| no_interp(gen, args))
}

/// A finite monoid by multiplication table; `x · y` is "x then y".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    pub names: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
}

impl Monoid {
    pub fn cyclic(n: usize, prefix: &str) -> Monoid {
        Monoid {
            names: (0..n).map(|i| format!("{prefix}{i}")).collect(),
            mul: (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(),
            unit: 0,
        }
    }

    /// The symmetric group on three letters; element `i` is `r^(i mod 3) s^(i / 3)`.
    pub fn s3(prefix: &str) -> Monoid {
        let perm = |i: usize| -> [usize; 3] {
            let r = i % 3;
            let rot = [r % 3, (1 + r) % 3, (2 + r) % 3];
            if i < 3 {
                rot
            } else {
                [rot[0], rot[2], rot[1]]
            }
        };
        let elems: Vec<[usize; 3]> = (0..6).map(perm).collect();
        // x then y, as functions: y ∘ x
        let mul = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let (x, y) = (elems[i], elems[j]);
                        let c = [y[x[0]], y[x[1]], y[x[2]]];
                        elems.iter().position(|e| *e == c).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Monoid { names: (0..6).map(|i| format!("{prefix}{i}")).collect(), mul, unit: 0 }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.unit, |acc, _| self.mul[acc][x])
    }
}

/// A strict algebra: each color a one-object 2-category from a monoid with exactly one
/// 2-cell between any two 1-cells, strict functors `F`, `H` and a strictly natural `τ`.
/// Cells above dimension 2 are identities.
#[derive(Clone, Debug)]
pub struct StrictAlgebra {
    level: usize,
    max_dim: usize,
    monoids: Vec<Monoid>,
    f: Vec<usize>,
    h: Vec<usize>,
    tau: usize,
    lookup: HashMap<String, (usize, usize)>,
}

const OBJECTS: [&str; 2] = ["p", "q"];

/// A decoded cell: color index, then nothing, an element, or a pair of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sc {
    Obj(usize),
    One(usize, usize),
    Two(usize, usize, usize),
}

impl Sc {
    fn color(self) -> usize {
        match self {
            Sc::Obj(c) | Sc::One(c, _) | Sc::Two(c, _, _) => c,
        }
    }
}

impl StrictAlgebra {
    pub fn new(level: usize, max_dim: usize, monoids: Vec<Monoid>, f: Vec<usize>, h: Vec<usize>, tau: usize) -> Self {
        let lookup = monoids
            .iter()
            .enumerate()
            .flat_map(|(c, m)| m.names.iter().enumerate().map(move |(i, n)| (n.clone(), (c, i))))
            .collect();
        StrictAlgebra { level, max_dim, monoids, f, h, tau, lookup }
    }

    /// `Z/3 → S_3` with `F(k) = r^k`, `H(k) = r^-k` and `τ = s`, truncated at `max_dim`.
    pub fn example(level: usize, max_dim: usize) -> Self {
        let z3 = Monoid::cyclic(3, "a");
        if level == 0 {
            return StrictAlgebra::new(0, max_dim, vec![z3], Vec::new(), Vec::new(), 0);
        }
        let s3 = Monoid::s3("b");
        let f = (0..3).map(|k| s3.power(1, k)).collect();
        let h = (0..3).map(|k| s3.power(2, k)).collect();
        StrictAlgebra::new(level, max_dim, vec![z3, s3], f, h, 3)
    }

    fn colors(&self) -> usize {
        if self.level == 0 {
            1
        } else {
            2
        }
    }

    fn name(&self, k: usize, x: Sc) -> CellId {
        let n = |c: usize, e: usize| &self.monoids[c].names[e];
        cell(&match x {
            Sc::Obj(c) => OBJECTS[c].to_string(),
            Sc::One(c, e) => n(c, e).clone(),
            Sc::Two(c, a, b) => format!("{}_{}{}", n(c, a), n(c, b), "'".repeat(k - 2)),
        })
    }

    fn decode(&self, k: usize, x: &str) -> Option<Sc> {
        if k > self.max_dim {
            return None;
        }
        match k {
            0 => {
                let c = OBJECTS.iter().position(|o| *o == x)?;
                (c < self.colors()).then_some(Sc::Obj(c))
            }
            1 => self.lookup.get(x).map(|&(c, e)| Sc::One(c, e)),
            _ => {
                let base = x.strip_suffix(&"'".repeat(k - 2))?;
                let (a, b) = base.split_once('_')?;
                let (&(c, a), &(c2, b)) = (self.lookup.get(a)?, self.lookup.get(b)?);
                (c == c2).then_some(Sc::Two(c, a, b))
            }
        }
    }

    fn compose(&self, p: usize, x: Sc, y: Sc) -> Option<Sc> {
        match (x, y) {
            (Sc::One(c, a), Sc::One(c2, b)) if c == c2 && p == 0 => Some(Sc::One(c, self.monoids[c].mul[a][b])),
            (Sc::Two(c, a, b), Sc::Two(c2, a2, b2)) if c == c2 => {
                let m = &self.monoids[c].mul;
                match p {
                    0 => Some(Sc::Two(c, m[a][a2], m[b][b2])),
                    1 => (b == a2).then_some(Sc::Two(c, a, b2)),
                    _ => (x == y).then_some(x),
                }
            }
            _ => None,
        }
    }

    fn functor(&self, table: &[usize], x: Sc) -> Option<Sc> {
        if table.is_empty() || x.color() != 0 {
            return None;
        }
        Some(match x {
            Sc::Obj(_) => Sc::Obj(1),
            Sc::One(_, e) => Sc::One(1, table[e]),
            Sc::Two(_, a, b) => Sc::Two(1, table[a], table[b]),
        })
    }
}

impl Algebra for StrictAlgebra {
    fn level(&self) -> usize {
        self.level
    }

    fn max_dim(&self) -> usize {
        self.max_dim
    }

    fn declared_dim(&self) -> usize {
        2
    }

    fn color(&self, k: usize, x: &str) -> Option<Color> {
        self.decode(k, x).map(|s| Color(s.color() as u8 + 1))
    }

    fn bounds(&self, k: usize, x: &str) -> Option<(CellId, CellId)> {
        match self.decode(k, x)? {
            Sc::Obj(_) => None,
            Sc::One(c, _) => Some((self.name(0, Sc::Obj(c)), self.name(0, Sc::Obj(c)))),
            Sc::Two(c, a, b) if k == 2 => Some((self.name(1, Sc::One(c, a)), self.name(1, Sc::One(c, b)))),
            two => Some((self.name(k - 1, two), self.name(k - 1, two))),
        }
    }

    fn sample(&self, k: usize) -> Vec<CellId> {
        if k > self.max_dim {
            return Vec::new();
        }
        let mut out = Vec::new();
        for c in 0..self.colors() {
            let n = self.monoids[c].len();
            match k {
                0 => out.push(self.name(0, Sc::Obj(c))),
                1 => out.extend((0..n).map(|e| self.name(1, Sc::One(c, e)))),
                _ => {
                    for a in 0..n {
                        out.extend((0..n).map(|b| self.name(k, Sc::Two(c, a, b))));
                    }
                }
            }
        }
        out
    }

    fn interp(&self, gen: &str, args: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
        let k = args.dim();
        let err = || no_interp(gen, args);
        let out = match parse_gen(gen).ok_or_else(err)? {
            Op::Unit => return top(gen, args),
            Op::Compose(col, p) => {
                let (x, y) = two_leaves(gen, args)?;
                let (x, y) = (self.decode(k, &x).ok_or_else(err)?, self.decode(k, &y).ok_or_else(err)?);
                if x.color() + 1 != col.0 as usize {
                    return Err(err());
                }
                self.compose(p, x, y)
            }
            op @ (Op::F | Op::H) if self.level >= 1 => {
                let x = self.decode(k, &top(gen, args)?).ok_or_else(err)?;
                self.functor(if op == Op::F { &self.f } else { &self.h }, x)
            }
            Op::Tau if self.level >= 2 && k == 1 => match args.labels().collect::<Vec<_>>().as_slice() {
                [o] if self.decode(0, o) == Some(Sc::Obj(0)) => Some(Sc::One(1, self.tau)),
                _ => None,
            },
            _ => None,
        };
        Ok(self.name(k, out.ok_or_else(err)?))
    }

    fn fill(&self, k: usize, lo: &str, hi: &str) -> Result<CellId, AlgError> {
        let gap = || AlgError::NoFill { k, lo: lo.to_string(), hi: hi.to_string() };
        if k + 1 > self.max_dim {
            return Err(gap());
        }
        let (x, y) = (self.decode(k, lo).ok_or_else(gap)?, self.decode(k, hi).ok_or_else(gap)?);
        let out = match (x, y) {
            (Sc::Obj(c), Sc::Obj(c2)) if c == c2 => Sc::One(c, self.monoids[c].unit),
            (Sc::One(c, a), Sc::One(c2, b)) if c == c2 => Sc::Two(c, a, b),
            (Sc::Two(..), _) if x == y => x,
            _ => return Err(gap()),
        };
        Ok(self.name(k + 1, out))
    }
}

/// An element of a span's apex. Pairs stay pairs, so `(x,(y,z))` and `((x,y),z)` differ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum El {
    Atom(u8),
    /// An element of an identity span.
    Id(u8),
    Pair(Box<El>, Box<El>),
    /// The image under `F`.
    Tag(Box<El>),
}

impl El {
    fn atoms(&self, out: &mut Vec<(bool, u8)>) {
        match self {
            El::Atom(a) => out.push((false, *a)),
            El::Id(a) => out.push((true, *a)),
            El::Pair(x, y) => {
                x.atoms(out);
                y.atoms(out);
            }
            El::Tag(x) => x.atoms(out),
        }
    }

    /// The element with bracketing, tags and redundant identity atoms forgotten.
    fn essence(&self) -> Vec<(bool, u8)> {
        let mut v = Vec::new();
        self.atoms(&mut v);
        if v.iter().any(|(id, _)| !id) {
            v.retain(|(id, _)| !id);
        } else {
            v.dedup();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SpanCell {
    Obj {
        c: u8,
        n: u8,
    },
    /// Apex sorted, legs aligned with it.
    Span {
        c: u8,
        a: u8,
        b: u8,
        apex: Vec<El>,
        left: Vec<u8>,
        right: Vec<u8>,
    },
    /// A leg-preserving map of apexes, by index.
    Map {
        c: u8,
        src: usize,
        tgt: usize,
        f: Vec<usize>,
    },
    Id3 {
        c: u8,
        of: usize,
    },
}

impl SpanCell {
    fn dim(&self) -> usize {
        match self {
            SpanCell::Obj { .. } => 0,
            SpanCell::Span { .. } => 1,
            SpanCell::Map { .. } => 2,
            SpanCell::Id3 { .. } => 3,
        }
    }

    fn color(&self) -> u8 {
        match self {
            SpanCell::Obj { c, .. } | SpanCell::Span { c, .. } | SpanCell::Map { c, .. } | SpanCell::Id3 { c, .. } => {
                *c
            }
        }
    }
}

#[derive(Default)]
struct Interner {
    cells: Vec<SpanCell>,
    index: HashMap<SpanCell, usize>,
}

/// Spans of finite sets in both colors with `F` tagging apex elements: a `T_{B^1}`-algebra
/// of dimension 2 whose associators and distributors are non-identity bijections.
pub struct SpanAlgebra {
    store: Mutex<Interner>,
    sample: Vec<Vec<CellId>>,
}

const PREFIX: [char; 4] = ['o', 's', 'm', 'i'];

impl Default for SpanAlgebra {
    fn default() -> Self {
        SpanAlgebra::new()
    }
}

impl SpanAlgebra {
    /// A fixed sample of sets with at most three elements and spans between them.
    pub fn new() -> Self {
        let mut alg = SpanAlgebra { store: Mutex::new(Interner::default()), sample: vec![Vec::new(); 4] };
        // (left size, right size, apex as pairs of legs)
        type Span<'a> = (u8, u8, &'a [(u8, u8)]);
        let spans: [Span; 6] = [
            (2, 2, &[(0, 1), (0, 0), (1, 1)]),
            (2, 3, &[(1, 0), (1, 2)]),
            (3, 2, &[(0, 1), (1, 1), (2, 0)]),
            (3, 3, &[(2, 0), (0, 0), (0, 1)]),
            (2, 2, &[(1, 1)]),
            (1, 2, &[(0, 0), (0, 1)]),
        ];
        for c in [1u8, 2] {
            for n in 1..=3 {
                let o = alg.intern(SpanCell::Obj { c, n });
                alg.sample[0].push(o);
            }
            let mut ids = Vec::new();
            for (a, b, legs) in spans {
                let elems = legs.iter().enumerate().map(|(i, &(l, r))| (El::Atom(i as u8), l, r)).collect();
                let s = alg.intern(span(c, a, b, elems));
                ids.push(s.clone());
                alg.sample[1].push(s);
            }
            for s in &ids {
                let id = alg.fill(1, s, s).expect("identity map");
                alg.sample[2].push(id);
            }
            // the single element of span 4 sits over (1,1), as element 2 of span 0 does
            let (s4, s0) = (alg.index(&ids[4]), alg.index(&ids[0]));
            let m = alg.intern(SpanCell::Map { c, src: s4, tgt: s0, f: vec![2] });
            alg.sample[2].push(m);
            let twos: Vec<CellId> =
                alg.sample[2].iter().filter(|t| alg.get(t).is_some_and(|x| x.color() == c)).cloned().collect();
            for t in twos {
                let i = alg.fill(2, &t, &t).expect("identity 3-cell");
                alg.sample[3].push(i);
            }
        }
        alg
    }

    fn intern(&self, x: SpanCell) -> CellId {
        let mut st = self.store.lock().expect("not poisoned");
        let k = x.dim();
        let i = match st.index.get(&x) {
            Some(&i) => i,
            None => {
                let i = st.cells.len();
                st.cells.push(x.clone());
                st.index.insert(x, i);
                i
            }
        };
        cell(&format!("{}{i}", PREFIX[k]))
    }

    fn index(&self, id: &str) -> usize {
        id[1..].parse().expect("interned id")
    }

    fn get(&self, id: &str) -> Option<SpanCell> {
        let k = PREFIX.iter().position(|p| id.starts_with(*p))?;
        let i: usize = id.get(1..)?.parse().ok()?;
        let st = self.store.lock().expect("not poisoned");
        st.cells.get(i).filter(|x| x.dim() == k).cloned()
    }

    fn at(&self, i: usize) -> SpanCell {
        self.store.lock().expect("not poisoned").cells[i].clone()
    }

    fn id_of(&self, i: usize) -> CellId {
        let k = self.at(i).dim();
        cell(&format!("{}{i}", PREFIX[k]))
    }

    fn get_dim(&self, k: usize, id: &str) -> Option<SpanCell> {
        self.get(id).filter(|x| x.dim() == k)
    }

    fn compose1(&self, s: &SpanCell, t: &SpanCell) -> Option<SpanCell> {
        let (
            SpanCell::Span { c, a, b, apex: sa, left: sl, right: sr },
            SpanCell::Span { c: c2, a: a2, b: b2, apex: ta, left: tl, right: tr },
        ) = (s, t)
        else {
            return None;
        };
        if c != c2 || b != a2 {
            return None;
        }
        let mut elems = Vec::new();
        for i in 0..sa.len() {
            for j in 0..ta.len() {
                if sr[i] == tl[j] {
                    elems.push((El::Pair(Box::new(sa[i].clone()), Box::new(ta[j].clone())), sl[i], tr[j]));
                }
            }
        }
        Some(span(*c, *a, *b2, elems))
    }

    fn compose2(&self, p: usize, x: &SpanCell, y: &SpanCell) -> Option<SpanCell> {
        let (SpanCell::Map { c, src: xs, tgt: xt, f: xf }, SpanCell::Map { src: ys, tgt: yt, f: yf, .. }) = (x, y)
        else {
            return None;
        };
        if p == 1 {
            if xt != ys {
                return None;
            }
            return Some(SpanCell::Map { c: *c, src: *xs, tgt: *yt, f: xf.iter().map(|&i| yf[i]).collect() });
        }
        let (xs_c, xt_c, ys_c, yt_c) = (self.at(*xs), self.at(*xt), self.at(*ys), self.at(*yt));
        let src = self.compose1(&xs_c, &ys_c)?;
        let tgt = self.compose1(&xt_c, &yt_c)?;
        let (SpanCell::Span { apex: sa, .. }, SpanCell::Span { apex: ta, .. }) = (&src, &tgt) else { return None };
        let (apex_of, find) = (
            |s: &SpanCell| match s {
                SpanCell::Span { apex, .. } => apex.clone(),
                _ => Vec::new(),
            },
            |v: &[El], e: &El| v.binary_search(e).ok(),
        );
        let (xsa, xta, ysa, yta) = (apex_of(&xs_c), apex_of(&xt_c), apex_of(&ys_c), apex_of(&yt_c));
        let mut f = Vec::with_capacity(sa.len());
        for e in sa {
            let El::Pair(l, r) = e else { return None };
            let l2 = xta[xf[find(&xsa, l)?]].clone();
            let r2 = yta[yf[find(&ysa, r)?]].clone();
            f.push(find(ta, &El::Pair(Box::new(l2), Box::new(r2)))?);
        }
        let (src, tgt) = (self.intern(src), self.intern(tgt));
        Some(SpanCell::Map { c: *c, src: self.index(&src), tgt: self.index(&tgt), f })
    }

    fn tag(&self, x: &SpanCell) -> Option<SpanCell> {
        Some(match x {
            SpanCell::Obj { c: 1, n } => SpanCell::Obj { c: 2, n: *n },
            SpanCell::Span { c: 1, a, b, apex, left, right } => SpanCell::Span {
                c: 2,
                a: *a,
                b: *b,
                apex: apex.iter().map(|e| El::Tag(Box::new(e.clone()))).collect(),
                left: left.clone(),
                right: right.clone(),
            },
            SpanCell::Map { c: 1, src, tgt, f } => {
                let s = self.intern(self.tag(&self.at(*src))?);
                let t = self.intern(self.tag(&self.at(*tgt))?);
                SpanCell::Map { c: 2, src: self.index(&s), tgt: self.index(&t), f: f.clone() }
            }
            SpanCell::Id3 { c: 1, of } => {
                let o = self.intern(self.tag(&self.at(*of))?);
                SpanCell::Id3 { c: 2, of: self.index(&o) }
            }
            _ => return None,
        })
    }

    /// The unique leg-preserving bijection matching elements with the same essence.
    fn iso(&self, s: &SpanCell, t: &SpanCell) -> Option<Vec<usize>> {
        let (
            SpanCell::Span { c, a, b, apex: sa, left: sl, right: sr },
            SpanCell::Span { c: c2, a: a2, b: b2, apex: ta, left: tl, right: tr },
        ) = (s, t)
        else {
            return None;
        };
        if (c, a, b) != (c2, a2, b2) || sa.len() != ta.len() {
            return None;
        }
        let by_essence: BTreeMap<Vec<(bool, u8)>, usize> =
            ta.iter().enumerate().map(|(j, e)| (e.essence(), j)).collect();
        if by_essence.len() != ta.len() {
            return None;
        }
        let mut f = Vec::with_capacity(sa.len());
        for (i, e) in sa.iter().enumerate() {
            let &j = by_essence.get(&e.essence())?;
            if sl[i] != tl[j] || sr[i] != tr[j] || f.contains(&j) {
                return None;
            }
            f.push(j);
        }
        Some(f)
    }
}

fn span(c: u8, a: u8, b: u8, mut elems: Vec<(El, u8, u8)>) -> SpanCell {
    elems.sort();
    SpanCell::Span {
        c,
        a,
        b,
        apex: elems.iter().map(|e| e.0.clone()).collect(),
        left: elems.iter().map(|e| e.1).collect(),
        right: elems.iter().map(|e| e.2).collect(),
    }
}

impl Algebra for SpanAlgebra {
    fn level(&self) -> usize {
        1
    }

    fn max_dim(&self) -> usize {
        3
    }

    fn declared_dim(&self) -> usize {
        2
    }

    fn color(&self, k: usize, x: &str) -> Option<Color> {
        self.get_dim(k, x).map(|c| Color(c.color()))
    }

    fn bounds(&self, k: usize, x: &str) -> Option<(CellId, CellId)> {
        match self.get_dim(k, x)? {
            SpanCell::Obj { .. } => None,
            SpanCell::Span { c, a, b, .. } => {
                Some((self.intern(SpanCell::Obj { c, n: a }), self.intern(SpanCell::Obj { c, n: b })))
            }
            SpanCell::Map { src, tgt, .. } => Some((self.id_of(src), self.id_of(tgt))),
            SpanCell::Id3 { of, .. } => Some((self.id_of(of), self.id_of(of))),
        }
    }

    fn sample(&self, k: usize) -> Vec<CellId> {
        self.sample.get(k).cloned().unwrap_or_default()
    }

    fn interp(&self, gen: &str, args: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
        let k = args.dim();
        let err = || no_interp(gen, args);
        match parse_gen(gen).ok_or_else(err)? {
            Op::Unit => top(gen, args),
            Op::Compose(col, p) => {
                let (x, y) = two_leaves(gen, args)?;
                let (x, y) = (self.get_dim(k, &x).ok_or_else(err)?, self.get_dim(k, &y).ok_or_else(err)?);
                if x.color() != col.0 || y.color() != col.0 {
                    return Err(err());
                }
                let out = match (k, p) {
                    (1, 0) => self.compose1(&x, &y),
                    (2, _) => self.compose2(p, &x, &y),
                    (3, _) => {
                        let (SpanCell::Id3 { of: a, .. }, SpanCell::Id3 { of: b, .. }) = (&x, &y) else {
                            return Err(err());
                        };
                        if p == 2 {
                            (a == b).then(|| x.clone())
                        } else {
                            self.compose2(p, &self.at(*a), &self.at(*b)).map(|m| {
                                let m = self.intern(m);
                                SpanCell::Id3 { c: col.0, of: self.index(&m) }
                            })
                        }
                    }
                    _ => None,
                };
                Ok(self.intern(out.ok_or_else(err)?))
            }
            Op::F => {
                let x = top(gen, args)?;
                let x = self.get_dim(k, &x).ok_or_else(err)?;
                Ok(self.intern(self.tag(&x).ok_or_else(err)?))
            }
            Op::H | Op::Tau => Err(err()),
        }
    }

    fn fill(&self, k: usize, lo: &str, hi: &str) -> Result<CellId, AlgError> {
        let gap = || AlgError::NoFill { k, lo: lo.to_string(), hi: hi.to_string() };
        let (x, y) = (self.get_dim(k, lo).ok_or_else(gap)?, self.get_dim(k, hi).ok_or_else(gap)?);
        let out = match (k, &x) {
            (0, SpanCell::Obj { c, n }) if x == y => span(*c, *n, *n, (0..*n).map(|i| (El::Id(i), i, i)).collect()),
            (1, SpanCell::Span { c, .. }) => {
                let f = self.iso(&x, &y).ok_or_else(gap)?;
                SpanCell::Map { c: *c, src: self.index(lo), tgt: self.index(hi), f }
            }
            (2, SpanCell::Map { c, .. }) if x == y => SpanCell::Id3 { c: *c, of: self.index(lo) },
            _ => return Err(gap()),
        };
        Ok(self.intern(out))
    }
}

impl SpanAlgebra {
    /// The apex of a 1-cell and, for a 2-cell, its element map, for display and tests.
    pub fn describe(&self, id: &str) -> Option<String> {
        let show = |v: &[El]| v.iter().map(show_el).collect::<Vec<_>>().join(" ");
        Some(match self.get(id)? {
            SpanCell::Obj { c, n } => format!("set of {n} (color {c})"),
            SpanCell::Span { a, b, apex, .. } => format!("{a} <- {{{}}} -> {b}", show(&apex)),
            SpanCell::Map { src, tgt, f, .. } => {
                let (SpanCell::Span { apex: sa, .. }, SpanCell::Span { apex: ta, .. }) = (self.at(src), self.at(tgt))
                else {
                    return None;
                };
                sa.iter()
                    .zip(&f)
                    .map(|(e, &j)| format!("{} => {}", show_el(e), show_el(&ta[j])))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
            SpanCell::Id3 { of, .. } => format!("identity on {}", self.id_of(of)),
        })
    }

    /// Whether a 2-cell moves some element to one with different bracketing or tags.
    pub fn is_identity_map(&self, id: &str) -> Option<bool> {
        match self.get(id)? {
            SpanCell::Map { src, tgt, f, .. } => {
                let (SpanCell::Span { apex: sa, .. }, SpanCell::Span { apex: ta, .. }) = (self.at(src), self.at(tgt))
                else {
                    return None;
                };
                Some(sa.iter().zip(&f).all(|(e, &j)| *e == ta[j]))
            }
            _ => None,
        }
    }
}

fn show_el(e: &El) -> String {
    match e {
        El::Atom(a) => a.to_string(),
        El::Id(a) => format!("i{a}"),
        El::Pair(x, y) => format!("({},{})", show_el(x), show_el(y)),
        El::Tag(x) => format!("F{}", show_el(x)),
    }
}

type Bounds = Option<(CellId, CellId)>;

/// A finite algebra given by tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableAlgebra {
    pub level: usize,
    pub max_dim: usize,
    pub declared_dim: usize,
    cells: Vec<IndexMap<CellId, (Color, Bounds)>>,
    interp: BTreeMap<(String, String), CellId>,
    fill: BTreeMap<(usize, CellId, CellId), CellId>,
}

impl TableAlgebra {
    pub fn new(level: usize, max_dim: usize, declared_dim: usize) -> Self {
        TableAlgebra { level, max_dim, declared_dim, cells: vec![IndexMap::new(); max_dim + 1], ..Default::default() }
    }

    pub fn add_cell(&mut self, k: usize, id: &str, c: Color, bounds: Option<(&str, &str)>) -> Result<(), String> {
        let level = self.cells.get_mut(k).ok_or_else(|| format!("dimension {k} above the truncation"))?;
        if level.contains_key(id) {
            return Err(format!("{id} declared twice"));
        }
        if !(1..=2).contains(&c.0) {
            return Err(format!("{id}: color {c} is neither 1 nor 2"));
        }
        level.insert(cell(id), (c, bounds.map(|(s, t)| (cell(s), cell(t)))));
        Ok(())
    }

    pub fn set_interp(&mut self, gen: &str, args: &PastingDiagram<CellId>, out: &str) {
        self.interp.insert((gen.to_string(), args.to_string()), cell(out));
    }

    pub fn set_fill(&mut self, k: usize, lo: &str, hi: &str, out: &str) {
        self.fill.insert((k, cell(lo), cell(hi)), cell(out));
    }

    /// Every generator value on sample labellings and every filler between sample cells.
    pub fn tabulate(alg: &dyn Algebra, op: &Operad) -> TableAlgebra {
        let mut t = TableAlgebra::new(alg.level(), alg.max_dim(), alg.declared_dim());
        let sample = Sample::of(alg);
        for k in 0..=alg.max_dim() {
            for x in sample.cells(k) {
                let c = alg.color(k, x).expect("sampled");
                let b = if k == 0 { None } else { alg.bounds(k, x) };
                t.add_cell(k, x, c, b.as_ref().map(|(s, tt)| (s.as_ref(), tt.as_ref()))).expect("fresh");
            }
        }
        for g in op.generators() {
            if g.dim() > alg.max_dim() {
                continue;
            }
            let name = g.name().expect("generator");
            for pi in sample.labellings(g.arity()) {
                if let Ok(y) = alg.interp(name, &pi) {
                    t.set_interp(name, &pi, &y);
                }
            }
        }
        for k in 0..alg.max_dim() {
            let cells: Vec<CellId> = sample.cells(k).cloned().collect();
            for lo in &cells {
                for hi in &cells {
                    if alg.color(k, lo) != alg.color(k, hi) || (k > 0 && alg.bounds(k, lo) != alg.bounds(k, hi)) {
                        continue;
                    }
                    if let Ok(y) = alg.fill(k, lo, hi) {
                        t.set_fill(k, lo, hi, &y);
                    }
                }
            }
        }
        t
    }

    /// Boundaries and table values that are not declared cells.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, level) in self.cells.iter().enumerate() {
            for (id, (c, b)) in level {
                match (k, b) {
                    (0, None) => {}
                    (0, Some(_)) => out.push(format!("{id}: a 0-cell has no boundary")),
                    (_, None) => out.push(format!("{id}: missing boundary")),
                    (_, Some((s, t))) => {
                        for x in [s, t] {
                            match self.cells[k - 1].get(x) {
                                None => out.push(format!("{id}: boundary {x} is not a {}-cell", k - 1)),
                                Some((cx, _)) if cx != c => out.push(format!("{id}: color differs from {x}")),
                                _ => {}
                            }
                        }
                        if k >= 2 {
                            let (bs, bt) = (&self.cells[k - 1].get(s), &self.cells[k - 1].get(t));
                            if let (Some((_, Some(x))), Some((_, Some(y)))) = (bs, bt) {
                                if x != y {
                                    out.push(format!("{id}: source and target are not parallel"));
                                }
                            }
                        }
                    }
                }
            }
        }
        for ((g, a), y) in &self.interp {
            if !self.cells.iter().any(|l| l.contains_key(y)) {
                out.push(format!("interp {g} {a}: {y} is not a cell"));
            }
        }
        for ((k, a, b), y) in &self.fill {
            if self.cells.get(k + 1).is_none_or(|l| !l.contains_key(y)) {
                out.push(format!("fill {a} {b} {k}: {y} is not a {}-cell", k + 1));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "level {}\nmax-dim {}\ndim {}", self.level, self.max_dim, self.declared_dim);
        for (k, level) in self.cells.iter().enumerate() {
            for (id, (c, b)) in level {
                match b {
                    Some((x, y)) => _ = writeln!(s, "cell {k} {id} {c} {x} {y}"),
                    None => _ = writeln!(s, "cell {k} {id} {c}"),
                }
            }
        }
        for ((g, a), y) in &self.interp {
            let _ = writeln!(s, "interp {g} {a} -> {y}");
        }
        for ((k, a, b), y) in &self.fill {
            let _ = writeln!(s, "fill {a} {b} {k} -> {y}");
        }
        s
    }
}

impl Algebra for TableAlgebra {
    fn level(&self) -> usize {
        self.level
    }

    fn max_dim(&self) -> usize {
        self.max_dim
    }

    fn declared_dim(&self) -> usize {
        self.declared_dim
    }

    fn color(&self, k: usize, x: &str) -> Option<Color> {
        self.cells.get(k)?.get(x).map(|(c, _)| *c)
    }

    fn bounds(&self, k: usize, x: &str) -> Option<(CellId, CellId)> {
        self.cells.get(k)?.get(x)?.1.clone()
    }

    fn sample(&self, k: usize) -> Vec<CellId> {
        self.cells.get(k).map(|l| l.keys().cloned().collect()).unwrap_or_default()
    }

    fn interp(&self, gen: &str, args: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
        self.interp.get(&(gen.to_string(), args.to_string())).cloned().ok_or_else(|| no_interp(gen, args))
    }

    fn fill(&self, k: usize, lo: &str, hi: &str) -> Result<CellId, AlgError> {
        self.fill.get(&(k, cell(lo), cell(hi))).cloned().ok_or_else(|| AlgError::NoFill {
            k,
            lo: lo.to_string(),
            hi: hi.to_string(),
        })
    }
}

/// An algebra read from text.
pub enum LoadedAlgebra {
    Table(TableAlgebra),
    Span(SpanAlgebra),
}

impl LoadedAlgebra {
    pub fn as_dyn(&self) -> &dyn Algebra {
        match self {
            LoadedAlgebra::Table(t) => t,
            LoadedAlgebra::Span(s) => s,
        }
    }
}

/// Reads `level`, `max-dim`, `dim` and then `cell`, `interp` and `fill` lines, or `model span`.
pub fn parse_algebra(text: &str) -> Result<LoadedAlgebra, AlgError> {
    let (mut level, mut max_dim, mut dim) = (None, None, None);
    let mut model = None;
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = i + 1;
        let perr = |msg: String| AlgError::Parse { line: n, msg };
        let words: Vec<&str> = line.split_whitespace().collect();
        let num = |w: Option<&&str>| -> Result<usize, AlgError> {
            w.and_then(|w| w.parse().ok()).ok_or_else(|| perr(format!("expected a number in '{line}'")))
        };
        match words[0] {
            "level" => level = Some(num(words.get(1))?),
            "max-dim" => max_dim = Some(num(words.get(1))?),
            "dim" => dim = Some(num(words.get(1))?),
            "model" => model = Some(words.get(1).copied().unwrap_or("").to_string()),
            "cell" | "interp" | "fill" => body.push((n, line)),
            w => return Err(perr(format!("unknown directive '{w}'"))),
        }
    }
    if model.as_deref() == Some("span") {
        let s = SpanAlgebra::new();
        if level.is_some_and(|l| l != 1) || max_dim.is_some_and(|d| d != s.max_dim()) || dim.is_some_and(|d| d != 2) {
            return Err(AlgError::Parse { line: 0, msg: "the span model is level 1, max-dim 3, dim 2".into() });
        }
        if !body.is_empty() {
            return Err(AlgError::Parse { line: body[0].0, msg: "the span model takes no tables".into() });
        }
        return Ok(LoadedAlgebra::Span(s));
    }
    if let Some(m) = model.filter(|m| m != "table") {
        return Err(AlgError::Parse { line: 0, msg: format!("unknown model '{m}'") });
    }
    let missing = |w: &str| AlgError::Parse { line: 0, msg: format!("missing '{w}' line") };
    let max_dim = max_dim.ok_or_else(|| missing("max-dim"))?;
    let mut t = TableAlgebra::new(level.ok_or_else(|| missing("level"))?, max_dim, dim.ok_or_else(|| missing("dim"))?);
    for (n, line) in body {
        let perr = |msg: String| AlgError::Parse { line: n, msg };
        let (lhs, rhs) = match line.split_once("->") {
            Some((l, r)) => (l.trim(), Some(r.trim())),
            None => (line, None),
        };
        let w: Vec<&str> = lhs.split_whitespace().collect();
        match (w[0], rhs) {
            ("cell", None) if w.len() == 4 || w.len() == 6 => {
                let k: usize = w[1].parse().map_err(|_| perr("bad dimension".into()))?;
                let c: u8 = w[3].parse().map_err(|_| perr("bad color".into()))?;
                let b = (w.len() == 6).then(|| (w[4], w[5]));
                t.add_cell(k, w[2], Color(c), b).map_err(perr)?;
            }
            ("interp", Some(y)) if w.len() == 3 => {
                let mut cur = Cursor::new(w[2]);
                let pi = cur
                    .pasting(&mut |c: &mut Cursor<'_>| c.ident().map(cell))
                    .and_then(|p| cur.end().map(|_| p))
                    .map_err(|e| perr(e.to_string()))?;
                t.set_interp(w[1], &pi, y);
            }
            ("fill", Some(y)) if w.len() == 4 => {
                let k: usize = w[3].parse().map_err(|_| perr("bad level".into()))?;
                t.set_fill(k, w[1], w[2], y);
            }
            _ => return Err(perr(format!("cannot read '{line}'"))),
        }
    }
    let errs = t.validate();
    if let Some(e) = errs.first() {
        return Err(AlgError::Parse { line: 0, msg: e.clone() });
    }
    Ok(LoadedAlgebra::Table(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        check_algebra_axioms, check_consistence, check_dimension, check_face_identities, evaluate, globe,
        magma_compose, monad_cells, LawBounds,
    };
    use crate::collections::{build_cn, Face};
    use std::sync::Arc;

    fn op(n: usize, d: usize) -> Operad {
        Operad::new(Arc::new(build_cn(n, d).unwrap()))
    }

    #[test]
    fn monad_cells_on_two_points() {
        let mut t = TableAlgebra::new(1, 0, 0);
        t.add_cell(0, "x", ONE, None).unwrap();
        t.add_cell(0, "y", TWO, None).unwrap();
        let cells = monad_cells(&t, &op(1, 1), LawBounds { size: 1, leaves: 1 });
        let mut got: Vec<String> = cells.iter().map(|c| format!("{} {}", c.pi, c.term)).collect();
        got.sort();
        assert_eq!(got, ["0:(x) gen:F^0", "0:(x) pt:1:0", "0:(y) pt:2:0"]);
    }

    #[test]
    fn strict_example_is_an_algebra() {
        let alg = StrictAlgebra::example(2, 3);
        let o = op(2, 3);
        let rep = check_algebra_axioms(&alg, &o, LawBounds { size: 3, leaves: 2 }).unwrap();
        assert!(rep.is_ok(), "{rep:?}");
        assert!(rep.checked > 100);
        assert!(check_dimension(&alg, &o).is_empty());
        for face in [Face::Delta, Face::Kappa] {
            for p in 0..2 {
                let c = check_consistence(&alg, p, face, LawBounds { size: 3, leaves: 2 }).unwrap();
                assert!(c.is_ok() && c.checked > 0, "{face} {p}: {:?}", c.mismatches);
            }
        }
        let f = check_face_identities(&alg, LawBounds { size: 3, leaves: 2 }).unwrap();
        assert!(f.is_ok() && f.checked > 0, "{:?}", f.mismatches);
    }

    #[test]
    fn span_algebra_laws_and_associator() {
        let alg = SpanAlgebra::new();
        let o = op(1, 3);
        let rep = check_algebra_axioms(&alg, &o, LawBounds { size: 3, leaves: 2 }).unwrap();
        assert!(rep.is_ok(), "{rep:?}");
        assert!(check_dimension(&alg, &o).is_empty(), "{:?}", check_dimension(&alg, &o));
        // (s0 s0) s0 and s0 (s0 s0) have different apexes; the filler between them moves elements
        let s = &alg.sample(1)[0];
        let l = magma_compose(&alg, &o, 1, 0, &magma_compose(&alg, &o, 1, 0, s, s).unwrap(), s).unwrap();
        let r = magma_compose(&alg, &o, 1, 0, s, &magma_compose(&alg, &o, 1, 0, s, s).unwrap()).unwrap();
        assert_ne!(l, r);
        let a = o.parse("br(comp(gen:mu_0^1; 1:(pt:1:0,(gen:mu_0^1),pt:1:0,(pt:1:1),pt:1:0)),comp(gen:mu_0^1; 1:(pt:1:0,(pt:1:1),pt:1:0,(gen:mu_0^1),pt:1:0)))").unwrap();
        let obj = alg.bounds(1, s).unwrap().0;
        let pi = PastingDiagram::new(
            2,
            crate::pasting::Node {
                gaps: vec![obj.clone(), obj.clone(), obj.clone(), obj],
                children: vec![globe(&alg, 1, s).unwrap().into_root().children[0].clone(); 3],
            },
        )
        .unwrap();
        let assoc = evaluate(&alg, &a, &pi).unwrap();
        assert_eq!(alg.bounds(2, &assoc), Some((l, r)));
        assert_eq!(alg.is_identity_map(&assoc), Some(false));
    }

    #[test]
    fn boundary_violation_is_located() {
        let o = op(1, 2);
        let mut t = TableAlgebra::tabulate(&StrictAlgebra::example(1, 2), &o);
        let pi = globe(&t, 2, "a1_a2").unwrap();
        t.set_interp("F^2", &pi, "b2_b2");
        let rep = check_algebra_axioms(&t, &o, LawBounds { size: 2, leaves: 2 }).unwrap();
        assert!(rep.normalization.iter().any(|e| e.contains("gen:F^2") && e.contains("a1_a2")), "{rep:?}");
    }

    #[test]
    fn extra_top_cell_breaks_dimension() {
        let o = op(1, 3);
        let mut t = TableAlgebra::tabulate(&StrictAlgebra::example(1, 3), &o);
        assert!(check_dimension(&t, &o).is_empty());
        t.add_cell(3, "z", ONE, Some(("a1_a2", "a1_a2"))).unwrap();
        let errs = check_dimension(&t, &o);
        assert!(errs.iter().any(|e| e.starts_with("z ")), "{errs:?}");
    }

    #[test]
    fn table_text_round_trip() {
        let o = op(1, 2);
        let t = TableAlgebra::tabulate(&StrictAlgebra::example(1, 2), &o);
        let back = match parse_algebra(&t.to_text()).unwrap() {
            LoadedAlgebra::Table(b) => b,
            LoadedAlgebra::Span(_) => panic!("table expected"),
        };
        assert_eq!(back, t);
        assert!(matches!(parse_algebra("model span\n"), Ok(LoadedAlgebra::Span(_))));
        assert!(matches!(parse_algebra("level 1\nmax-dim 1\ndim 1\nbogus\n"), Err(AlgError::Parse { line: 4, .. })));
    }
}
