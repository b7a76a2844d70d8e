//! Algebras for the monads `T_{B^n}`: a two-colored globular set with an
//! interpretation of every generator and a filler for every bracket.
//!
//! Cells are described lazily (color, bounds, a finite sample to check laws on),
//! so infinite algebras such as spans fit the same interface as finite tables.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::collections::{build_cn, coglobular_map, Arity, CoglobularMap, CollectionError, Face, Tower, ONE};
use crate::enumerate::Enumeration;
use crate::glob::{CellId, Color};
use crate::pasting::{unflatten, Node, PastingDiagram, PastingError, Side};
use crate::term::{Kind, Operad, RawTerm, Term, TermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("{gen} has no value on {args}")]
    NoInterp { gen: String, args: String },
    #[error("no filler from {lo} to {hi} at level {k}")]
    NoFill { k: usize, lo: String, hi: String },
    #[error("bracket {bracket}: {reason}")]
    Gap { bracket: String, reason: String },
    #[error("{0} is not a cell")]
    UnknownCell(String),
    #[error("ill-typed cell: {0}")]
    Shape(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Term(#[from] TermError),
    #[error("{0}")]
    Pasting(#[from] PastingError),
    #[error("{0}")]
    Collection(#[from] CollectionError),
}

pub trait Algebra {
    /// `n` for a `T_{B^n}`-algebra.
    fn level(&self) -> usize;
    fn max_dim(&self) -> usize;
    fn declared_dim(&self) -> usize;
    fn color(&self, k: usize, x: &str) -> Option<Color>;
    fn bounds(&self, k: usize, x: &str) -> Option<(CellId, CellId)>;
    /// The finite set of `k`-cells the laws are checked over.
    fn sample(&self, k: usize) -> Vec<CellId>;
    fn interp(&self, gen: &str, args: &PastingDiagram<CellId>) -> Result<CellId, AlgError>;
    /// The `(k+1)`-cell from `lo` to `hi` picked by the contraction.
    fn fill(&self, k: usize, lo: &str, hi: &str) -> Result<CellId, AlgError>;
}

/// A cell of `T_{B^n}(G)`: an operad cell `term` with its arguments `pi` in `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadCell {
    pub term: Term,
    pub pi: PastingDiagram<CellId>,
}

/// The globe on a `k`-cell of the algebra.
pub fn globe(alg: &dyn Algebra, k: usize, x: &str) -> Result<PastingDiagram<CellId>, AlgError> {
    let mut tower = Vec::with_capacity(k);
    let (mut s, mut t): (CellId, CellId) = (x.into(), x.into());
    for j in (1..=k).rev() {
        let (s1, _) = alg.bounds(j, &s).ok_or_else(|| AlgError::UnknownCell(s.to_string()))?;
        let (_, t1) = alg.bounds(j, &t).ok_or_else(|| AlgError::UnknownCell(t.to_string()))?;
        tower.push((s1.clone(), t1.clone()));
        (s, t) = (s1, t1);
    }
    tower.reverse();
    Ok(PastingDiagram::globe(x.into(), tower))
}

fn try_zip<A, B, C, E>(
    a: &Node<A>,
    b: &Node<B>,
    depth: usize,
    f: &mut impl FnMut(usize, &A, &B) -> Result<C, E>,
) -> Result<Node<C>, E> {
    Ok(Node {
        gaps: a.gaps.iter().zip(&b.gaps).map(|(x, y)| f(depth, x, y)).collect::<Result<_, _>>()?,
        children: a
            .children
            .iter()
            .zip(&b.children)
            .map(|(x, y)| try_zip(x, y, depth + 1, f))
            .collect::<Result<_, _>>()?,
    })
}

/// Labels have the colors of `arity` and every cell runs between its neighbouring gaps.
pub fn check_cell(alg: &dyn Algebra, arity: &Arity, pi: &PastingDiagram<CellId>) -> Result<(), AlgError> {
    if pi.dim() != arity.dim() || pi.tree() != arity.tree() {
        return Err(AlgError::Shape(format!("{pi} does not have the shape of {arity}")));
    }
    fn walk(alg: &dyn Algebra, a: &Node<Color>, p: &Node<CellId>, depth: usize) -> Result<(), AlgError> {
        for (c, x) in a.gaps.iter().zip(&p.gaps) {
            if alg.color(depth, x) != Some(*c) {
                return Err(AlgError::Shape(format!("{x} is not a {depth}-cell of color {c}")));
            }
        }
        for (i, (ac, pc)) in a.children.iter().zip(&p.children).enumerate() {
            for x in &pc.gaps {
                let b = alg.bounds(depth + 1, x).ok_or_else(|| AlgError::UnknownCell(x.to_string()))?;
                if b != (p.gaps[i].clone(), p.gaps[i + 1].clone()) {
                    return Err(AlgError::Shape(format!("{x} does not run from {} to {}", p.gaps[i], p.gaps[i + 1])));
                }
            }
            walk(alg, ac, pc, depth + 1)?;
        }
        Ok(())
    }
    walk(alg, arity.root(), pi.root(), 0)
}

/// `ν(t; π)` after checking that `π` fits the arity of `t`.
pub fn evaluate(alg: &dyn Algebra, t: &Term, pi: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
    check_cell(alg, t.arity(), pi)?;
    eval(alg, t, pi)
}

fn eval(alg: &dyn Algebra, t: &Term, pi: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
    match t.kind() {
        Kind::Gen(n) => alg.interp(n, pi),
        Kind::Comp(h, args) => {
            let shapes = args.root().map(&mut |a| a.arity().tree());
            let pieces = unflatten(&shapes, pi.root())?;
            let inner = try_zip(args.root(), &pieces, 0, &mut |j, a, piece| {
                eval(alg, a, &PastingDiagram::new(j, piece.clone())?)
            })?;
            eval(alg, h, &PastingDiagram::new(pi.dim(), inner)?)
        }
        Kind::Bracket(a, b) => {
            let k = a.dim();
            let flat = PastingDiagram::new(k, pi.root().clone())?;
            let lo = eval(alg, a, &flat)?;
            let hi = eval(alg, b, &flat)?;
            alg.fill(k, &lo, &hi).map_err(|e| AlgError::Gap { bracket: t.to_string(), reason: e.to_string() })
        }
    }
}

/// Evaluates a raw term as written, without normalizing it first.
pub fn evaluate_raw(
    alg: &dyn Algebra,
    op: &Operad,
    raw: &RawTerm,
    pi: &PastingDiagram<CellId>,
) -> Result<CellId, AlgError> {
    match raw {
        RawTerm::Gen(n) => alg.interp(n, pi),
        RawTerm::Point(c, m) => {
            let u = op.unit(*c, *m)?;
            alg.interp(u.name().expect("units are generators"), pi)
        }
        RawTerm::Comp(h, args) => {
            let typed = args.try_map(|a| op.normalize(a))?;
            let shapes = typed.root().map(&mut |a| a.arity().tree());
            let pieces = unflatten(&shapes, pi.root())?;
            let inner = try_zip(args.root(), &pieces, 0, &mut |j, a, piece| {
                evaluate_raw(alg, op, a, &PastingDiagram::new(j, piece.clone())?)
            })?;
            evaluate_raw(alg, op, h, &PastingDiagram::new(pi.dim(), inner)?)
        }
        RawTerm::Bracket(a, b) => {
            let k = pi.dim().checked_sub(1).ok_or(TermError::NoBoundary)?;
            let flat = PastingDiagram::new(k, pi.root().clone())?;
            let lo = evaluate_raw(alg, op, a, &flat)?;
            let hi = evaluate_raw(alg, op, b, &flat)?;
            alg.fill(k, &lo, &hi).map_err(|e| AlgError::Gap { bracket: raw.to_string(), reason: e.to_string() })
        }
    }
}

type SampleCell = (CellId, Color, Option<(CellId, CellId)>);

/// The sample of an algebra with colors and bounds looked up once.
pub struct Sample {
    cells: Vec<Vec<SampleCell>>,
}

impl Sample {
    pub fn of(alg: &dyn Algebra) -> Sample {
        let cells = (0..=alg.max_dim())
            .map(|k| {
                alg.sample(k)
                    .into_iter()
                    .filter_map(|x| Some((x.clone(), alg.color(k, &x)?, if k == 0 { None } else { alg.bounds(k, &x) })))
                    .collect()
            })
            .collect();
        Sample { cells }
    }

    pub fn cells(&self, k: usize) -> impl Iterator<Item = &CellId> {
        self.cells.get(k).into_iter().flatten().map(|(x, _, _)| x)
    }

    /// Every pasting of sample cells with the shape and colors of `arity`.
    pub fn labellings(&self, arity: &Arity) -> Vec<PastingDiagram<CellId>> {
        self.lifts(arity.root(), 0, None)
            .into_iter()
            .map(|root| PastingDiagram::new(arity.dim(), root).expect("same shape as the arity"))
            .collect()
    }

    fn lifts(&self, shape: &Node<Color>, depth: usize, between: Option<(&CellId, &CellId)>) -> Vec<Node<CellId>> {
        let Some(level) = self.cells.get(depth) else { return Vec::new() };
        let choices: Vec<Vec<CellId>> = shape
            .gaps
            .iter()
            .map(|c| {
                level
                    .iter()
                    .filter(|(_, col, b)| {
                        col == c
                            && match between {
                                None => true,
                                Some((s, t)) => b.as_ref().is_some_and(|(bs, bt)| bs == s && bt == t),
                            }
                    })
                    .map(|(x, _, _)| x.clone())
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for gaps in product(&choices) {
            let kids: Vec<Vec<Node<CellId>>> = shape
                .children
                .iter()
                .enumerate()
                .map(|(i, ch)| self.lifts(ch, depth + 1, Some((&gaps[i], &gaps[i + 1]))))
                .collect();
            for children in product(&kids) {
                out.push(Node { gaps: gaps.clone(), children });
            }
        }
        out
    }
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// How far the law checks look.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawBounds {
    /// Largest operad term, in constructors.
    pub size: usize,
    /// Most leaves in an arity tree.
    pub leaves: usize,
}

impl Default for LawBounds {
    fn default() -> Self {
        LawBounds { size: 3, leaves: 3 }
    }
}

/// Cells of `T_{B^n}(G)` over the sample, up to the bounds.
pub fn monad_cells(alg: &dyn Algebra, op: &Operad, bounds: LawBounds) -> Vec<MonadCell> {
    let sample = Sample::of(alg);
    let en = Enumeration::build(op, bounds.size);
    let mut out = Vec::new();
    for k in 0..=op.max_dim().min(alg.max_dim()) {
        for t in en.up_to(k, bounds.size) {
            if t.arity().tree().leaf_count() > bounds.leaves {
                continue;
            }
            for pi in sample.labellings(t.arity()) {
                out.push(MonadCell { term: t.clone(), pi });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    /// `ν(unit; η(x)) ≠ x`.
    pub unit: Vec<String>,
    /// Evaluating arguments then the head differs from evaluating the composite.
    pub multiplicative: Vec<String>,
    /// Unnormalized forms, boundaries or colors disagree.
    pub normalization: Vec<String>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.unit.is_empty() && self.multiplicative.is_empty() && self.normalization.is_empty()
    }
}

/// Wraps every subterm in a unit composite, so normalization has work to do.
fn pad(t: &Term) -> RawTerm {
    let inner = match t.kind() {
        Kind::Gen(n) => RawTerm::Gen(n.clone()),
        Kind::Comp(h, args) => RawTerm::comp(pad(h), args.map(pad)),
        Kind::Bracket(a, b) => RawTerm::bracket(pad(a), pad(b)),
    };
    let k = t.dim();
    let root = t.eta().root().map_depth(&mut |j, l| if j == k { inner.clone() } else { l.to_raw() });
    RawTerm::comp(RawTerm::Point(t.coarity(), k), PastingDiagram::new(k, root).expect("globe"))
}

pub fn check_algebra_axioms(alg: &dyn Algebra, op: &Operad, bounds: LawBounds) -> Result<AxiomReport, AlgError> {
    let mut rep = AxiomReport::default();
    let sample = Sample::of(alg);

    for k in 0..=alg.max_dim().min(op.max_dim()) {
        for x in sample.cells(k) {
            let c = alg.color(k, x).expect("sampled");
            let Ok(u) = op.unit(c, k) else { continue };
            rep.checked += 1;
            match evaluate(alg, &u, &globe(alg, k, x)?) {
                Ok(y) if y == *x => {}
                Ok(y) => rep.unit.push(format!("unit on {x} gives {y}")),
                Err(e) => rep.unit.push(format!("unit on {x}: {e}")),
            }
        }
    }

    let en = Enumeration::build(op, bounds.size);
    for k in 0..=alg.max_dim().min(op.max_dim()) {
        for h in en.up_to(k, bounds.size.saturating_sub(1).max(1)) {
            let budget = bounds.size.saturating_sub(h.size()).max(1);
            let leaves = h.arity().tree().leaf_count();
            for total in leaves..=leaves.max(budget) {
                for args in en.fill_arity(h.arity(), total) {
                    let Ok(flat) = op.compose(h, &args) else { continue };
                    if flat.arity().tree().leaf_count() > bounds.leaves {
                        continue;
                    }
                    for pi in sample.labellings(flat.arity()) {
                        rep.checked += 1;
                        let direct = evaluate(alg, &flat, &pi);
                        let layered = evaluate_raw(alg, op, &RawTerm::comp(h.to_raw(), args.map(Term::to_raw)), &pi);
                        if direct != layered {
                            rep.multiplicative.push(format!(
                                "{h} over {args} on {pi}: composite gives {}, layers give {}",
                                show(&direct),
                                show(&layered)
                            ));
                        }
                    }
                }
            }
        }
    }

    for MonadCell { term: t, pi } in monad_cells(alg, op, bounds) {
        rep.checked += 1;
        let direct = eval(alg, &t, &pi);
        let padded = evaluate_raw(alg, op, &pad(&t), &pi);
        if direct != padded {
            rep.normalization.push(format!(
                "{t} on {pi}: normal form gives {}, padded form gives {}",
                show(&direct),
                show(&padded)
            ));
        }
        let Ok(y) = direct else { continue };
        let k = t.dim();
        if alg.color(k, &y) != Some(t.coarity()) {
            rep.normalization.push(format!("{t} on {pi}: {y} does not have color {}", t.coarity()));
        }
        if k == 0 {
            continue;
        }
        let (s, tt) = t.bounds().expect("k > 0");
        let want =
            (eval(alg, s, &pi.boundary(Side::Source, k - 1)?), eval(alg, tt, &pi.boundary(Side::Target, k - 1)?));
        let got = alg.bounds(k, &y);
        let ok = matches!((&want, &got), ((Ok(a), Ok(b)), Some((c, d))) if a == c && b == d);
        if !ok {
            rep.normalization.push(format!(
                "{t} on {pi}: value {y} runs {} but its boundary evaluates to ({}, {})",
                got.map_or("nowhere".into(), |(a, b)| format!("{a} -> {b}")),
                show(&want.0),
                show(&want.1)
            ));
        }
    }
    Ok(rep)
}

fn show(r: &Result<CellId, AlgError>) -> String {
    match r {
        Ok(x) => x.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

/// An algebra seen through a chain of coglobular maps, lowest level first.
/// Through a map out of `C^0` only the cells of the image color remain, recolored 1.
pub struct FaceAlgebra<'a> {
    inner: &'a dyn Algebra,
    maps: Vec<CoglobularMap>,
    keep: Option<Color>,
}

impl<'a> FaceAlgebra<'a> {
    pub fn new(inner: &'a dyn Algebra, maps: Vec<CoglobularMap>) -> Self {
        let level = inner.level() - maps.len();
        let keep = (level == 0 && !maps.is_empty()).then(|| maps.iter().fold(ONE, |c, m| m.color(c)));
        FaceAlgebra { inner, maps, keep }
    }

    fn rename<'g>(&'g self, gen: &'g str) -> Option<&'g str> {
        self.maps.iter().try_fold(gen, |g, m| m.apply(g).map(|n| n.as_ref()))
    }
}

impl Algebra for FaceAlgebra<'_> {
    fn level(&self) -> usize {
        self.inner.level() - self.maps.len()
    }

    fn max_dim(&self) -> usize {
        self.inner.max_dim()
    }

    fn declared_dim(&self) -> usize {
        self.inner.declared_dim()
    }

    fn color(&self, k: usize, x: &str) -> Option<Color> {
        let c = self.inner.color(k, x)?;
        match self.keep {
            None => Some(c),
            Some(j) if j == c => Some(ONE),
            Some(_) => None,
        }
    }

    fn bounds(&self, k: usize, x: &str) -> Option<(CellId, CellId)> {
        self.color(k, x)?;
        self.inner.bounds(k, x)
    }

    fn sample(&self, k: usize) -> Vec<CellId> {
        self.inner.sample(k).into_iter().filter(|x| self.color(k, x).is_some()).collect()
    }

    fn interp(&self, gen: &str, args: &PastingDiagram<CellId>) -> Result<CellId, AlgError> {
        let g = self.rename(gen).ok_or_else(|| TermError::UnknownGen(gen.to_string()))?;
        self.inner.interp(g, args)
    }

    fn fill(&self, k: usize, lo: &str, hi: &str) -> Result<CellId, AlgError> {
        self.inner.fill(k, lo, hi)
    }
}

fn face_maps(alg: &dyn Algebra, from: usize, faces: &[Face]) -> Result<Vec<CoglobularMap>, AlgError> {
    let tower = Tower::build(alg.level(), alg.max_dim())?;
    Ok(faces.iter().enumerate().map(|(i, f)| tower.map(from + i, *f).clone()).collect())
}

/// `σ(G, ν)`: the algebra along δ.
pub fn source_algebra(alg: &dyn Algebra) -> Result<FaceAlgebra<'_>, AlgError> {
    let n = alg.level();
    let below = build_cn(n - 1, alg.max_dim())?;
    Ok(FaceAlgebra::new(alg, vec![coglobular_map(n - 1, Face::Delta, &below)]))
}

/// `β(G, ν)`: the algebra along κ.
pub fn target_algebra(alg: &dyn Algebra) -> Result<FaceAlgebra<'_>, AlgError> {
    let n = alg.level();
    let below = build_cn(n - 1, alg.max_dim())?;
    Ok(FaceAlgebra::new(alg, vec![coglobular_map(n - 1, Face::Kappa, &below)]))
}

#[derive(Clone, Debug, Default)]
pub struct ConsistenceReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl ConsistenceReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `ν(f_n^p(α); a) = φ_p^n(G, ν)(α; a)` for `f` the iterated δ or κ, over cells of level `p`.
pub fn check_consistence(
    alg: &dyn Algebra,
    p: usize,
    face: Face,
    bounds: LawBounds,
) -> Result<ConsistenceReport, AlgError> {
    let n = alg.level();
    let tower = Tower::build(n, alg.max_dim())?;
    let faces = vec![face; n - p];
    let maps = face_maps(alg, p, &faces)?;
    let seen = FaceAlgebra::new(alg, maps.clone());
    let ops: Vec<Operad> = tower.collections.iter().map(|c| Operad::new(c.clone())).collect();
    let mut rep = ConsistenceReport::default();
    for MonadCell { term, pi } in monad_cells(&seen, &ops[p], bounds) {
        let mut lifted = term.clone();
        for (i, m) in maps.iter().enumerate() {
            lifted = Operad::lift(m, &ops[p + i + 1], &lifted)?;
        }
        let left = evaluate(alg, &lifted, &pi);
        let right = evaluate(&seen, &term, &pi);
        rep.checked += 1;
        if left != right {
            rep.mismatches.push(format!(
                "{term} on {pi}: lifted gives {}, face algebra gives {}",
                show(&left),
                show(&right)
            ));
        }
    }
    Ok(rep)
}

/// `σσ = σβ` and `ββ = βσ` on the cells two levels down.
pub fn check_face_identities(alg: &dyn Algebra, bounds: LawBounds) -> Result<ConsistenceReport, AlgError> {
    let mut rep = ConsistenceReport::default();
    let n = alg.level();
    if n < 2 {
        return Ok(rep);
    }
    let tower = Tower::build(n, alg.max_dim())?;
    let op = Operad::new(tower.collections[n - 2].clone());
    for outer in [Face::Delta, Face::Kappa] {
        let a = FaceAlgebra::new(alg, face_maps(alg, n - 2, &[outer, Face::Delta])?);
        let b = FaceAlgebra::new(alg, face_maps(alg, n - 2, &[outer, Face::Kappa])?);
        for MonadCell { term, pi } in monad_cells(&a, &op, bounds) {
            rep.checked += 1;
            let (x, y) = (evaluate(&a, &term, &pi), evaluate(&b, &term, &pi));
            if x != y {
                rep.mismatches.push(format!("{outer}: {term} on {pi}: {} vs {}", show(&x), show(&y)));
            }
        }
    }
    Ok(rep)
}

fn composition_gen(op: &Operad, c: Color, k: usize, p: usize) -> Result<Term, AlgError> {
    let want = crate::collections::color_composite(c, k, p);
    op.spec()
        .of_dim(k)
        .find(|g| g.arity == want && g.coarity == c)
        .map(|g| op.gen(&g.name))
        .transpose()?
        .ok_or_else(|| AlgError::Shape(format!("no composition of {k}-cells along {p} in color {c}")))
}

/// `α ∘_p β`: the composition generator evaluated on `η(α) ⋆_p η(β)`, `α` first.
pub fn magma_compose(alg: &dyn Algebra, op: &Operad, k: usize, p: usize, x: &str, y: &str) -> Result<CellId, AlgError> {
    let c = alg.color(k, x).ok_or_else(|| AlgError::UnknownCell(x.to_string()))?;
    let g = composition_gen(op, c, k, p)?;
    let pi = globe(alg, k, x)?.glue(&globe(alg, k, y)?, p)?;
    evaluate(alg, &g, &pi)
}

/// `1_α = ν([u, u]; 1_{η(α)})`.
pub fn magma_identity(alg: &dyn Algebra, op: &Operad, k: usize, x: &str) -> Result<CellId, AlgError> {
    let c = alg.color(k, x).ok_or_else(|| AlgError::UnknownCell(x.to_string()))?;
    let u = op.unit(c, k)?;
    let b = op.bracket(&u, &u)?;
    evaluate(alg, &b, &globe(alg, k, x)?.degenerate(k + 1)?)
}

/// Cells at or above the declared dimension have identities, and those above it are all identities.
pub fn check_dimension(alg: &dyn Algebra, op: &Operad) -> Vec<String> {
    let d = alg.declared_dim();
    let top = alg.max_dim().min(op.max_dim());
    let sample = Sample::of(alg);
    let mut out = Vec::new();
    let mut ids: BTreeMap<(usize, CellId), CellId> = BTreeMap::new();
    for k in d..top {
        for x in sample.cells(k) {
            match magma_identity(alg, op, k, x) {
                Ok(i) => {
                    if alg.bounds(k + 1, &i) != Some((x.clone(), x.clone())) {
                        out.push(format!("1_{x} = {i} does not run from {x} to {x}"));
                    }
                    ids.insert((k, x.clone()), i);
                }
                Err(e) => out.push(format!("1_{x}: {e}")),
            }
        }
    }
    for k in d + 1..=top {
        for x in sample.cells(k) {
            let Some((s, t)) = alg.bounds(k, x) else { continue };
            let id = ids.get(&(k - 1, s.clone())).cloned().or_else(|| magma_identity(alg, op, k - 1, &s).ok());
            if s != t || id.as_deref() != Some(x.as_ref()) {
                out.push(format!("{x} ({k}-cell from {s} to {t}) is not the identity on its source"));
            }
        }
    }
    out
}

/// Everything `check-algebra` runs, one line per check.
#[derive(Clone, Debug, Default)]
pub struct FullReport {
    pub lines: Vec<String>,
    /// The first few witnesses of each failing check.
    pub witnesses: Vec<String>,
    pub ok: bool,
}

fn record(rep: &mut FullReport, what: String, checked: usize, fails: &[String]) {
    rep.lines.push(format!("{what}: {checked} checked, {} failed", fails.len()));
    rep.witnesses.extend(fails.iter().take(5).map(|f| format!("{what}: {f}")));
    rep.ok &= fails.is_empty();
}

/// Monad laws, dimension, consistence with both faces at every lower level, and the face identities.
pub fn check_all(alg: &dyn Algebra, bounds: LawBounds) -> Result<FullReport, AlgError> {
    let n = alg.level();
    let op = Operad::new(std::sync::Arc::new(build_cn(n, alg.max_dim())?));
    let mut rep = FullReport { ok: true, ..FullReport::default() };
    let ax = check_algebra_axioms(alg, &op, bounds)?;
    if ax.checked == 0 {
        rep.ok = false;
        rep.witnesses.push("no cells to check: the sample is empty".into());
    }
    record(&mut rep, "unit".into(), ax.checked, &ax.unit);
    record(&mut rep, "multiplicativity".into(), ax.checked, &ax.multiplicative);
    record(&mut rep, "normalization".into(), ax.checked, &ax.normalization);
    let dim = check_dimension(alg, &op);
    record(
        &mut rep,
        format!("dimension {}", alg.declared_dim()),
        Sample::of(alg).cells(alg.declared_dim()).count(),
        &dim,
    );
    for p in 0..n {
        for face in [Face::Delta, Face::Kappa] {
            let c = check_consistence(alg, p, face, bounds)?;
            record(
                &mut rep,
                format!("consistence {} level {p}", if face == Face::Delta { "delta" } else { "kappa" }),
                c.checked,
                &c.mismatches,
            );
        }
    }
    if n >= 2 {
        let f = check_face_identities(alg, bounds)?;
        record(&mut rep, "face identities".into(), f.checked, &f.mismatches);
    }
    Ok(rep)
}
