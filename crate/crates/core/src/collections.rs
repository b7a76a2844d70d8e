//! Generator tables of the pointed collections C^0, C, C^1, C^2 and C^n,
//! and the maps δ, κ between consecutive levels.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::glob::Color;
use crate::pasting::{Node, PastingDiagram, PastingError, Side, Tree};

pub type Name = Arc<str>;

pub const ONE: Color = Color(1);
pub const TWO: Color = Color(2);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollectionError {
    #[error("level {n} needs max dimension at least {n} (got {max_dim})")]
    TooShallow { n: usize, max_dim: usize },
    #[error("max dimension must be at least 1")]
    ZeroDim,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate generator {0}")]
    Duplicate(Name),
    #[error("unknown generator {0}")]
    Unknown(String),
}

/// A color pasting diagram: the arity of an operation.
pub type Arity = PastingDiagram<Color>;

pub fn color_globe(c: Color, m: usize) -> Arity {
    PastingDiagram::uniform(&Tree::linear(m), m, &c).expect("linear tree fits")
}

/// `c(m) ⋆_p c(m)`.
pub fn color_composite(c: Color, m: usize, p: usize) -> Arity {
    color_globe(c, m).glue(&color_globe(c, m), p).expect("globes of one color glue")
}

/// The colors of an arity as a single color, if monochrome.
pub fn arity_color(a: &Arity) -> Option<Color> {
    let mut it = a.labels();
    let first = *it.next()?;
    it.all(|c| *c == first).then_some(first)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: Name,
    pub dim: usize,
    pub bounds: Option<(Name, Name)>,
    pub arity: Arity,
    pub coarity: Color,
}

/// A finite pointed collection over the constant graph on `n_colors` colors.
#[derive(Clone, Debug)]
pub struct CollectionSpec {
    pub label: String,
    pub n_colors: u8,
    pub max_dim: usize,
    gens: Vec<Generator>,
    index: HashMap<Name, usize>,
    pointing: BTreeMap<(Color, usize), Name>,
}

impl PartialEq for CollectionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n_colors == other.n_colors
            && self.max_dim == other.max_dim
            && self.gens == other.gens
            && self.pointing == other.pointing
    }
}

impl CollectionSpec {
    pub fn empty(label: &str, n_colors: u8, max_dim: usize) -> Self {
        CollectionSpec {
            label: label.to_string(),
            n_colors,
            max_dim,
            gens: Vec::new(),
            index: HashMap::new(),
            pointing: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, g: Generator) -> Result<(), CollectionError> {
        if self.index.contains_key(&g.name) {
            return Err(CollectionError::Duplicate(g.name));
        }
        self.index.insert(g.name.clone(), self.gens.len());
        self.gens.push(g);
        Ok(())
    }

    fn add_simple(&mut self, name: String, dim: usize, bound: Option<(String, String)>, arity: Arity, coarity: Color) {
        let g = Generator {
            name: Arc::from(name),
            dim,
            bounds: bound.map(|(s, t)| (Arc::from(s), Arc::from(t))),
            arity,
            coarity,
        };
        self.add(g).expect("generator names in the tables are distinct");
    }

    pub fn set_point(&mut self, c: Color, m: usize, name: &str) {
        self.pointing.insert((c, m), Arc::from(name));
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn of_dim(&self, k: usize) -> impl Iterator<Item = &Generator> {
        self.gens.iter().filter(move |g| g.dim == k)
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.index.get(name).map(|&i| &self.gens[i])
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn point(&self, c: Color, m: usize) -> Option<&Name> {
        self.pointing.get(&(c, m))
    }

    pub fn pointing(&self) -> &BTreeMap<(Color, usize), Name> {
        &self.pointing
    }

    pub fn is_point(&self, name: &str) -> bool {
        self.get(name).is_some_and(|g| self.pointing.get(&(g.coarity, g.dim)).is_some_and(|p| p.as_ref() == name))
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (1..=self.n_colors).map(Color)
    }

    /// Problems with the table: missing boundaries, globularity, arity or pointing laws.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.gens {
            if g.dim > self.max_dim {
                out.push(format!("{}: dimension {} above truncation", g.name, g.dim));
            }
            if g.arity.dim() != g.dim {
                out.push(format!("{}: arity has dimension {}", g.name, g.arity.dim()));
            }
            if g.coarity.0 == 0
                || g.coarity.0 > self.n_colors
                || g.arity.labels().any(|c| c.0 == 0 || c.0 > self.n_colors)
            {
                out.push(format!("{}: color out of range", g.name));
            }
            match (&g.bounds, g.dim) {
                (None, 0) => {}
                (Some(_), 0) => out.push(format!("{}: a 0-cell has no boundary", g.name)),
                (None, _) => out.push(format!("{}: missing boundary", g.name)),
                (Some((s, t)), k) => {
                    for b in [s, t] {
                        match self.get(b) {
                            None => out.push(format!("{}: boundary {b} is not a generator", g.name)),
                            Some(bg) if bg.dim + 1 != k => {
                                out.push(format!("{}: boundary {b} has dimension {}", g.name, bg.dim))
                            }
                            Some(bg) => {
                                let side = if b == s { Side::Source } else { Side::Target };
                                let expect = g.arity.boundary(side, k - 1).expect("k ≥ 1");
                                if bg.arity != expect {
                                    out.push(format!("{}: arity of {b} is not the boundary of its arity", g.name));
                                }
                                if bg.coarity != g.coarity {
                                    out.push(format!("{}: coarity of {b} differs", g.name));
                                }
                            }
                        }
                    }
                    if k >= 2 {
                        if let (Some(sg), Some(tg)) = (self.get(s), self.get(t)) {
                            if let (Some((ss, st)), Some((ts, tt))) = (&sg.bounds, &tg.bounds) {
                                if ss != ts {
                                    out.push(format!("{}: src(src)≠src(tgt)", g.name));
                                }
                                if st != tt {
                                    out.push(format!("{}: tgt(src)≠tgt(tgt)", g.name));
                                }
                            }
                        }
                    }
                }
            }
        }
        for ((c, m), name) in &self.pointing {
            match self.get(name) {
                None => out.push(format!("pointing of {c}({m}) names unknown {name}")),
                Some(g) => {
                    if g.dim != *m || g.arity != color_globe(*c, *m) || g.coarity != *c {
                        out.push(format!("pointing of {c}({m}): {name} is not a unit over that globe"));
                    }
                    if *m > 0 {
                        let prev = self.pointing.get(&(*c, m - 1));
                        if g.bounds.as_ref().map(|b| (&b.0, &b.1)) != prev.map(|p| (p, p)) {
                            out.push(format!("pointing of {c}({m}) does not commute with boundaries"));
                        }
                    }
                }
            }
        }
        for c in self.colors() {
            for m in 0..=self.max_dim {
                if !self.pointing.contains_key(&(c, m)) {
                    out.push(format!("no pointing for {c}({m})"));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# {}", self.label).unwrap();
        writeln!(s, "@colors {}", self.n_colors).unwrap();
        writeln!(s, "@max-dim {}", self.max_dim).unwrap();
        for ((c, m), n) in &self.pointing {
            writeln!(s, "@point {c} {m} {n}").unwrap();
        }
        for g in &self.gens {
            writeln!(s, "{}", generator_line(g)).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<CollectionSpec, CollectionError> {
        let mut spec = CollectionSpec::empty("", 1, 0);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| CollectionError::Parse { line, msg };
            let l = raw.trim();
            if let Some(rest) = l.strip_prefix('#') {
                if spec.label.is_empty() {
                    spec.label = rest.trim().to_string();
                }
                continue;
            }
            if l.is_empty() {
                continue;
            }
            let parts: Vec<&str> = l.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|e| err(format!("{s}: {e}")));
            match parts[0] {
                "@colors" if parts.len() == 2 => spec.n_colors = num(parts[1])? as u8,
                "@max-dim" if parts.len() == 2 => spec.max_dim = num(parts[1])?,
                "@point" if parts.len() == 4 => {
                    spec.set_point(Color(num(parts[1])? as u8), num(parts[2])?, parts[3]);
                }
                d if d.starts_with('@') => return Err(err(format!("bad directive {l:?}"))),
                _ => {
                    if parts.len() != 6 {
                        return Err(err(format!("expected 6 fields, got {}", parts.len())));
                    }
                    let dim = num(parts[1])?;
                    let bounds = match (parts[2], parts[3]) {
                        ("-", "-") => None,
                        (s, t) => Some((Arc::from(s), Arc::from(t))),
                    };
                    let arity = parse_arity(parts[4], dim).map_err(|e| err(e.to_string()))?;
                    let coarity = Color(num(parts[5])? as u8);
                    spec.add(Generator { name: Arc::from(parts[0]), dim, bounds, arity, coarity })
                        .map_err(|e| err(e.to_string()))?;
                }
            }
        }
        Ok(spec)
    }
}

pub fn generator_line(g: &Generator) -> String {
    let (s, t) = g.bounds.as_ref().map_or(("-", "-"), |(s, t)| (s.as_ref(), t.as_ref()));
    format!("{} {} {} {} {} {}", g.name, g.dim, s, t, arity_text(&g.arity), g.coarity)
}

/// `tree@c1,c2,…` with one color per scheme cell in canonical order.
pub fn arity_text(a: &Arity) -> String {
    let colors: Vec<String> = a.root().cells().into_iter().map(|(_, c)| c.to_string()).collect();
    format!("{}@{}", a.tree(), colors.join(","))
}

/// Accepts one color per cell, or a single color for the whole tree.
pub fn parse_arity(s: &str, dim: usize) -> Result<Arity, PastingError> {
    let bad = |msg: &str| PastingError::Parse { pos: 0, msg: format!("{msg} in {s:?}") };
    let (tree, colors) = s.split_once('@').ok_or_else(|| bad("missing '@'"))?;
    let tree: Tree = tree.parse()?;
    let colors = colors
        .split(',')
        .map(|c| c.parse::<u8>().map(Color).map_err(|_| bad("bad color")))
        .collect::<Result<Vec<_>, _>>()?;
    let root = if colors.len() == 1 {
        tree.labelled(&colors[0])
    } else {
        Node::from_shape(&tree, &colors).ok_or_else(|| bad("wrong number of colors"))?
    };
    PastingDiagram::new(dim, root)
}

pub fn unit_name(c: Color, m: usize) -> String {
    match c {
        ONE => format!("u_{m}"),
        _ => format!("v_{m}"),
    }
}

fn comp_name(c: Color, p: usize, m: usize) -> String {
    match c {
        ONE => format!("mu_{p}^{m}"),
        _ => format!("v_{p}^{m}"),
    }
}

fn add_units_and_compositions(spec: &mut CollectionSpec, c: Color) {
    for m in 0..=spec.max_dim {
        let b = (m > 0).then(|| (unit_name(c, m - 1), unit_name(c, m - 1)));
        spec.add_simple(unit_name(c, m), m, b, color_globe(c, m), c);
        spec.set_point(c, m, &unit_name(c, m));
    }
    for m in 1..=spec.max_dim {
        for p in 0..m {
            let b = if p + 1 == m { unit_name(c, m - 1) } else { comp_name(c, p, m - 1) };
            spec.add_simple(comp_name(c, p, m), m, Some((b.clone(), b)), color_composite(c, m, p), c);
        }
    }
}

fn add_functor(spec: &mut CollectionSpec, letter: &str) {
    for m in 0..=spec.max_dim {
        let prev = format!("{letter}^{}", m.wrapping_sub(1));
        let b = (m > 0).then(|| (prev.clone(), prev));
        spec.add_simple(format!("{letter}^{m}"), m, b, color_globe(ONE, m), TWO);
    }
}

/// The degenerate color-1 point at dimension `m`.
fn degenerate_point(m: usize) -> Arity {
    color_globe(ONE, 0).degenerate(m).expect("raising dimension")
}

pub fn build_c0(max_dim: usize) -> Result<CollectionSpec, CollectionError> {
    if max_dim == 0 {
        return Err(CollectionError::ZeroDim);
    }
    let mut spec = CollectionSpec::empty("C^0", 1, max_dim);
    add_units_and_compositions(&mut spec, ONE);
    Ok(spec)
}

pub fn build_c(max_dim: usize) -> Result<CollectionSpec, CollectionError> {
    if max_dim == 0 {
        return Err(CollectionError::ZeroDim);
    }
    let mut spec = CollectionSpec::empty("C", 2, max_dim);
    add_units_and_compositions(&mut spec, ONE);
    add_units_and_compositions(&mut spec, TWO);
    Ok(spec)
}

/// C^n; `n = 0` gives C^0.
pub fn build_cn(n: usize, max_dim: usize) -> Result<CollectionSpec, CollectionError> {
    if n == 0 {
        return build_c0(max_dim);
    }
    if n >= 3 && max_dim < n {
        return Err(CollectionError::TooShallow { n, max_dim });
    }
    let mut spec = build_c(max_dim)?;
    spec.label = format!("C^{n}");
    match n {
        1 => add_functor(&mut spec, "F"),
        2 => {
            add_functor(&mut spec, "F");
            add_functor(&mut spec, "H");
            spec.add_simple("tau".into(), 1, Some(("F^0".into(), "H^0".into())), degenerate_point(1), TWO);
        }
        _ => {
            add_functor(&mut spec, "alpha_0");
            add_functor(&mut spec, "beta_0");
            for p in 1..n {
                let (s, t) = if p == 1 {
                    ("alpha_0^0".to_string(), "beta_0^0".to_string())
                } else {
                    (format!("alpha_{}", p - 1), format!("beta_{}", p - 1))
                };
                spec.add_simple(format!("alpha_{p}"), p, Some((s.clone(), t.clone())), degenerate_point(p), TWO);
                spec.add_simple(format!("beta_{p}"), p, Some((s, t)), degenerate_point(p), TWO);
            }
            let b = (format!("alpha_{}", n - 1), format!("beta_{}", n - 1));
            spec.add_simple(format!("xi_{n}"), n, Some(b), degenerate_point(n), TWO);
        }
    }
    Ok(spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Face {
    Delta,
    Kappa,
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Face::Delta => "δ",
            Face::Kappa => "κ",
        })
    }
}

/// δ or κ from C^n to C^{n+1}, as a generator table plus the induced map on colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoglobularMap {
    pub level: usize,
    pub face: Face,
    pub table: BTreeMap<Name, Name>,
    pub colors: BTreeMap<Color, Color>,
}

impl CoglobularMap {
    pub fn apply(&self, name: &str) -> Option<&Name> {
        self.table.get(name)
    }

    pub fn color(&self, c: Color) -> Color {
        self.colors.get(&c).copied().unwrap_or(c)
    }

    pub fn map_arity(&self, a: &Arity) -> Arity {
        a.map(|c| self.color(*c))
    }
}

/// δ_{n+1}^n or κ_{n+1}^n between the given collections.
pub fn coglobular_map(n: usize, face: Face, from: &CollectionSpec) -> CoglobularMap {
    let mut table = BTreeMap::new();
    let mut colors = BTreeMap::new();
    for g in from.generators() {
        let name = g.name.as_ref();
        let image: String = match (n, face) {
            (0, Face::Delta) => name.to_string(),
            (0, Face::Kappa) => {
                if let Some(rest) = name.strip_prefix("mu_") {
                    format!("v_{rest}")
                } else if let Some(rest) = name.strip_prefix("u_") {
                    format!("v_{rest}")
                } else {
                    name.to_string()
                }
            }
            (1, Face::Kappa) => match name.strip_prefix("F^") {
                Some(m) => format!("H^{m}"),
                None => name.to_string(),
            },
            (1, Face::Delta) => name.to_string(),
            (2, _) => {
                if let Some(m) = name.strip_prefix("F^") {
                    format!("alpha_0^{m}")
                } else if let Some(m) = name.strip_prefix("H^") {
                    format!("beta_0^{m}")
                } else if name == "tau" {
                    if face == Face::Delta { "alpha_1" } else { "beta_1" }.to_string()
                } else {
                    name.to_string()
                }
            }
            _ => {
                if name == format!("xi_{n}") {
                    if face == Face::Delta {
                        format!("alpha_{n}")
                    } else {
                        format!("beta_{n}")
                    }
                } else {
                    name.to_string()
                }
            }
        };
        table.insert(g.name.clone(), Arc::from(image));
    }
    for c in from.colors() {
        let img = if n == 0 && face == Face::Kappa { TWO } else { c };
        colors.insert(c, img);
    }
    CoglobularMap { level: n, face, table, colors }
}

/// The collections C^0..=C^top with every δ/κ between neighbours.
#[derive(Clone, Debug)]
pub struct Tower {
    pub collections: Vec<Arc<CollectionSpec>>,
    pub delta: Vec<CoglobularMap>,
    pub kappa: Vec<CoglobularMap>,
}

impl Tower {
    pub fn build(top: usize, max_dim: usize) -> Result<Tower, CollectionError> {
        let collections = (0..=top).map(|n| build_cn(n, max_dim).map(Arc::new)).collect::<Result<Vec<_>, _>>()?;
        let mut delta = Vec::new();
        let mut kappa = Vec::new();
        for (n, c) in collections[..top].iter().enumerate() {
            delta.push(coglobular_map(n, Face::Delta, c));
            kappa.push(coglobular_map(n, Face::Kappa, c));
        }
        Ok(Tower { collections, delta, kappa })
    }

    pub fn map(&self, n: usize, face: Face) -> &CoglobularMap {
        match face {
            Face::Delta => &self.delta[n],
            Face::Kappa => &self.kappa[n],
        }
    }
}

/// Problems with `f` as a morphism of pointed collections.
pub fn check_pointed_morphism(f: &CoglobularMap, from: &CollectionSpec, to: &CollectionSpec) -> Vec<String> {
    let mut out = Vec::new();
    let tag = format!("{}_{}^{}", f.face, f.level + 1, f.level);
    for g in from.generators() {
        let Some(img) = f.apply(&g.name) else {
            out.push(format!("{tag}: {} unmapped", g.name));
            continue;
        };
        let Some(h) = to.get(img) else {
            out.push(format!("{tag}: {} ↦ {img}, which is not in the target", g.name));
            continue;
        };
        if h.dim != g.dim {
            out.push(format!("{tag}: {} changes dimension", g.name));
        }
        if f.map_arity(&g.arity) != h.arity {
            out.push(format!("{tag}: {} does not preserve arity", g.name));
        }
        if f.color(g.coarity) != h.coarity {
            out.push(format!("{tag}: {} does not preserve coarity", g.name));
        }
        let mapped = g.bounds.as_ref().map(|(s, t)| (f.apply(s).cloned(), f.apply(t).cloned()));
        let expect = h.bounds.as_ref().map(|(s, t)| (Some(s.clone()), Some(t.clone())));
        if mapped != expect {
            out.push(format!("{tag}: {} does not commute with source/target", g.name));
        }
    }
    for ((c, m), p) in from.pointing() {
        let img = f.apply(p);
        let want = to.point(f.color(*c), *m);
        if img.is_none() || img != want {
            out.push(format!("{tag}: pointing of {c}({m}) not preserved"));
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct CoglobularReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl CoglobularReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Morphism laws, pointing preservation and the coglobular identities for 0 ≤ n ≤ n_max.
pub fn check_coglobular(n_max: usize) -> Result<CoglobularReport, CollectionError> {
    let max_dim = (n_max + 2).max(3);
    let tower = Tower::build(n_max + 2, max_dim)?;
    let mut rep = CoglobularReport::default();
    for n in 0..=n_max + 1 {
        for face in [Face::Delta, Face::Kappa] {
            let f = tower.map(n, face);
            rep.violations.extend(check_pointed_morphism(f, &tower.collections[n], &tower.collections[n + 1]));
            rep.checked += tower.collections[n].generators().len();
        }
    }
    for n in 0..=n_max {
        let (d0, k0) = (tower.map(n, Face::Delta), tower.map(n, Face::Kappa));
        let (d1, k1) = (tower.map(n + 1, Face::Delta), tower.map(n + 1, Face::Kappa));
        for g in tower.collections[n].generators() {
            let via = |first: &CoglobularMap, second: &CoglobularMap| {
                first.apply(&g.name).and_then(|x| second.apply(x)).cloned()
            };
            if via(d0, d1) != via(d0, k1) {
                rep.violations.push(format!("δδ ≠ κδ on {} at level {n}", g.name));
            }
            if via(k0, d1) != via(k0, k1) {
                rep.violations.push(format!("δκ ≠ κκ on {} at level {n}", g.name));
            }
            rep.checked += 1;
        }
        for c in tower.collections[n].colors() {
            if d1.color(d0.color(c)) != k1.color(d0.color(c)) || d1.color(k0.color(c)) != k1.color(k0.color(c)) {
                rep.violations.push(format!("color map identities fail on {c} at level {n}"));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(spec: &CollectionSpec, k: usize) -> Vec<String> {
        spec.of_dim(k).map(|g| g.name.to_string()).collect()
    }

    #[test]
    fn c0_counts_and_data() {
        let c0 = build_c0(3).unwrap();
        let counts: Vec<usize> = (0..=3).map(|k| c0.of_dim(k).count()).collect();
        assert_eq!(counts, [1, 2, 3, 4]);
        let mu = c0.get("mu_1^2").unwrap();
        assert_eq!(mu.bounds, Some((Arc::from("u_1"), Arc::from("u_1"))));
        assert_eq!(c0.get("mu_0^2").unwrap().bounds, Some((Arc::from("mu_0^1"), Arc::from("mu_0^1"))));
        assert_eq!(c0.point(ONE, 2).unwrap().as_ref(), "u_2");
        assert_eq!(arity_text(&c0.get("mu_0^1").unwrap().arity), "(()())@1,1,1,1,1");
        assert!(c0.validate().is_empty(), "{:?}", c0.validate());
    }

    #[test]
    fn c_doubles() {
        let c0 = build_c0(3).unwrap();
        let c = build_c(3).unwrap();
        for k in 0..=3 {
            assert_eq!(c.of_dim(k).count(), 2 * c0.of_dim(k).count());
        }
        let v = c.get("v_0^2").unwrap();
        assert_eq!(v.arity, color_composite(TWO, 2, 0));
        assert_eq!(v.coarity, TWO);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn c2_dimension_one() {
        let c2 = build_cn(2, 3).unwrap();
        assert_eq!(names(&c2, 1), ["u_1", "mu_0^1", "v_1", "v_0^1", "F^1", "H^1", "tau"]);
        let tau = c2.get("tau").unwrap();
        assert_eq!(tau.bounds, Some((Arc::from("F^0"), Arc::from("H^0"))));
        assert_eq!(tau.arity, color_globe(ONE, 0).degenerate(1).unwrap());
        assert_eq!(tau.coarity, TWO);
        assert!(c2.validate().is_empty(), "{:?}", c2.validate());
    }

    #[test]
    fn c3_xi() {
        let c3 = build_cn(3, 3).unwrap();
        let xi = c3.get("xi_3").unwrap();
        assert_eq!(xi.bounds, Some((Arc::from("alpha_2"), Arc::from("beta_2"))));
        assert_eq!(xi.arity, color_globe(ONE, 0).degenerate(3).unwrap());
        assert!(c3.validate().is_empty(), "{:?}", c3.validate());
        assert!(matches!(build_cn(3, 2), Err(CollectionError::TooShallow { .. })));
    }

    #[test]
    fn face_tables() {
        let t = Tower::build(3, 3).unwrap();
        assert_eq!(t.map(0, Face::Kappa).apply("mu_0^2").unwrap().as_ref(), "v_0^2");
        assert_eq!(t.map(0, Face::Delta).apply("mu_0^2").unwrap().as_ref(), "mu_0^2");
        assert_eq!(t.map(1, Face::Kappa).apply("F^2").unwrap().as_ref(), "H^2");
        assert_eq!(t.map(1, Face::Delta).apply("F^2").unwrap().as_ref(), "F^2");
        assert_eq!(t.map(2, Face::Delta).apply("H^1").unwrap().as_ref(), "beta_0^1");
        assert_eq!(t.map(2, Face::Kappa).apply("H^1").unwrap().as_ref(), "beta_0^1");
        assert_eq!(t.map(2, Face::Kappa).apply("tau").unwrap().as_ref(), "beta_1");
    }

    #[test]
    fn coglobular_identities() {
        let rep = check_coglobular(4).unwrap();
        assert!(rep.is_ok(), "{:?}", rep.violations);
    }

    #[test]
    fn text_round_trip() {
        for n in 0..=3 {
            let c = build_cn(n, 3).unwrap();
            let back = CollectionSpec::parse(&c.to_text()).unwrap();
            assert_eq!(back, c);
        }
    }
}
