//! Normal-form terms of the free contractible operad on a pointed collection.
//!
//! A term is a generator, a composite `comp(head; args)` whose head is a
//! non-unit generator or a bracket, or a bracket `br(lo, hi)` of two parallel
//! terms. Composition rewrites on the fly, so every constructed [`Term`] is
//! already normal: composites never have composite or unit heads, and never
//! have all-unit arguments.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::collections::{Arity, CoglobularMap, CollectionSpec, Name};
use crate::glob::Color;
use crate::pasting::{unflatten, Cursor, Node, PastingDiagram, PastingError, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("unknown generator {0}")]
    UnknownGen(String),
    #[error("no unit over {0}({1})")]
    NoUnit(Color, usize),
    #[error("head has dimension {head}, arguments have dimension {args}")]
    DimMismatch { head: usize, args: usize },
    #[error("argument {label} at depth {depth} has dimension {dim}")]
    LabelDim { label: String, depth: usize, dim: usize },
    #[error("arguments do not fit the head: head arity {expected}, argument coarities {got}")]
    Skeleton { expected: String, got: String },
    #[error("arguments are not a pasting: {0}")]
    Incidence(String),
    #[error("not parallel: {0}")]
    NotParallel(String),
    #[error("bracket of {k}-cells would exceed the truncation {max_dim}")]
    TooHigh { k: usize, max_dim: usize },
    #[error("a 0-cell has no boundary")]
    NoBoundary,
    #[error("{0}")]
    Pasting(#[from] PastingError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Gen(Name),
    Comp(Term, PastingDiagram<Term>),
    Bracket(Term, Term),
}

#[derive(Debug)]
struct TermInner {
    kind: Kind,
    dim: usize,
    arity: Arity,
    coarity: Color,
    size: usize,
    unit: bool,
    rank: usize,
    bounds: Option<(Term, Term)>,
}

/// A normal-form term; cheap to clone.
#[derive(Clone)]
pub struct Term(Arc<TermInner>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        // generators in table order
        match (&self.0.kind, &other.0.kind) {
            (Kind::Gen(a), Kind::Gen(b)) => (self.0.rank, a).cmp(&(other.0.rank, b)),
            (a, b) => a.cmp(b),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Term {
    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn arity(&self) -> &Arity {
        &self.0.arity
    }

    pub fn coarity(&self) -> Color {
        self.0.coarity
    }

    /// Generators count 1, composites add their head to their leaf arguments,
    /// brackets add 1 to the larger component.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn is_unit(&self) -> bool {
        self.0.unit
    }

    pub fn bounds(&self) -> Option<&(Term, Term)> {
        self.0.bounds.as_ref()
    }

    pub fn src(&self) -> Option<&Term> {
        self.bounds().map(|b| &b.0)
    }

    pub fn tgt(&self) -> Option<&Term> {
        self.bounds().map(|b| &b.1)
    }

    pub fn boundary(&self, side: Side) -> Result<&Term, TermError> {
        let (s, t) = self.bounds().ok_or(TermError::NoBoundary)?;
        Ok(match side {
            Side::Source => s,
            Side::Target => t,
        })
    }

    /// The `k`-dimensional source or target, `k ≤ dim`.
    pub fn boundary_at(&self, side: Side, k: usize) -> &Term {
        let mut t = self;
        while t.dim() > k {
            t = t.boundary(side).expect("positive dimension");
        }
        t
    }

    pub fn name(&self) -> Option<&str> {
        match self.kind() {
            Kind::Gen(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_bracket(&self) -> bool {
        matches!(self.kind(), Kind::Bracket(..))
    }

    /// Every generator name occurring in the term.
    pub fn generators(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_gens(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_gens(&self, out: &mut Vec<Name>) {
        match self.kind() {
            Kind::Gen(n) => out.push(n.clone()),
            Kind::Comp(h, args) => {
                h.collect_gens(out);
                for l in args.labels() {
                    l.collect_gens(out);
                }
            }
            Kind::Bracket(a, b) => {
                a.collect_gens(out);
                b.collect_gens(out);
            }
        }
    }

    pub fn to_raw(&self) -> RawTerm {
        match self.kind() {
            Kind::Gen(n) => RawTerm::Gen(n.clone()),
            Kind::Comp(h, args) => RawTerm::Comp(Box::new(h.to_raw()), args.map(Term::to_raw)),
            Kind::Bracket(a, b) => RawTerm::Bracket(Box::new(a.to_raw()), Box::new(b.to_raw())),
        }
    }

    /// The globe `η(t)` on this term, with its iterated boundaries below.
    pub fn eta(&self) -> PastingDiagram<Term> {
        PastingDiagram::globe_by(self.clone(), self.dim(), |t| {
            let (s, t) = t.bounds().cloned().expect("globe boundary");
            (s, t)
        })
    }

    /// The identity pasting `1_{η(t)}`: the globe on `t` viewed one dimension up.
    pub fn eta_degenerate(&self, to_dim: usize) -> PastingDiagram<Term> {
        self.eta().degenerate(to_dim).expect("raising dimension")
    }
}

/// An operad term before normalization, as read from text.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RawTerm {
    Gen(Name),
    Point(Color, usize),
    Comp(Box<RawTerm>, PastingDiagram<RawTerm>),
    Bracket(Box<RawTerm>, Box<RawTerm>),
}

impl RawTerm {
    pub fn gen(n: &str) -> RawTerm {
        RawTerm::Gen(Arc::from(n))
    }

    pub fn comp(head: RawTerm, args: PastingDiagram<RawTerm>) -> RawTerm {
        RawTerm::Comp(Box::new(head), args)
    }

    pub fn bracket(a: RawTerm, b: RawTerm) -> RawTerm {
        RawTerm::Bracket(Box::new(a), Box::new(b))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            RawTerm::Gen(_) | RawTerm::Point(..) => 1,
            RawTerm::Comp(h, args) => h.size() + args.root().leaf_labels().iter().map(|(_, l)| l.size()).sum::<usize>(),
            RawTerm::Bracket(a, b) => 1 + a.size().max(b.size()),
        }
    }

    pub fn parse(s: &str) -> Result<RawTerm, PastingError> {
        let mut cur = Cursor::new(s.trim());
        let t = raw_term(&mut cur)?;
        cur.end()?;
        Ok(t)
    }
}

fn raw_term(cur: &mut Cursor<'_>) -> Result<RawTerm, PastingError> {
    cur.skip_ws();
    if cur.eat_str("gen:") {
        return Ok(RawTerm::gen(cur.ident()?));
    }
    if cur.eat_str("pt:") {
        let c = cur.number()?;
        cur.expect(b':')?;
        let m = cur.number()?;
        let c = u8::try_from(c).or_else(|_| cur.err("color out of range"))?;
        return Ok(RawTerm::Point(Color(c), m));
    }
    if cur.eat_str("comp(") {
        let head = raw_term(cur)?;
        cur.skip_ws();
        cur.expect(b';')?;
        cur.skip_ws();
        let args = cur.pasting(&mut raw_term)?;
        cur.skip_ws();
        cur.expect(b')')?;
        return Ok(RawTerm::comp(head, args));
    }
    if cur.eat_str("br(") {
        let a = raw_term(cur)?;
        cur.skip_ws();
        cur.expect(b',')?;
        let b = raw_term(cur)?;
        cur.skip_ws();
        cur.expect(b')')?;
        return Ok(RawTerm::bracket(a, b));
    }
    cur.err("expected gen:, pt:, comp( or br(")
}

impl fmt::Display for RawTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawTerm::Gen(n) => write!(f, "gen:{n}"),
            RawTerm::Point(c, m) => write!(f, "pt:{c}:{m}"),
            RawTerm::Comp(h, args) => write!(f, "comp({h}; {args})"),
            RawTerm::Bracket(a, b) => write!(f, "br({a},{b})"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Gen(_) if self.is_unit() => write!(f, "pt:{}:{}", self.coarity(), self.dim()),
            Kind::Gen(n) => write!(f, "gen:{n}"),
            Kind::Comp(h, args) => write!(f, "comp({h}; {args})"),
            Kind::Bracket(a, b) => write!(f, "br({a},{b})"),
        }
    }
}

/// The free contractible operad on a pointed collection, truncated at its max dimension.
#[derive(Clone, Debug)]
pub struct Operad {
    spec: Arc<CollectionSpec>,
    gens: HashMap<Name, Term>,
}

impl Operad {
    pub fn new(spec: Arc<CollectionSpec>) -> Operad {
        let mut gens: HashMap<Name, Term> = HashMap::new();
        let mut order: Vec<_> = spec.generators().iter().collect();
        order.sort_by_key(|g| g.dim);
        for g in order {
            let rank = spec.position(&g.name).expect("listed");
            let bounds = g.bounds.as_ref().map(|(s, t)| {
                let get = |n: &Name| gens.get(n).cloned().expect("boundary generators come first");
                (get(s), get(t))
            });
            let t = Term(Arc::new(TermInner {
                kind: Kind::Gen(g.name.clone()),
                dim: g.dim,
                arity: g.arity.clone(),
                coarity: g.coarity,
                size: 1,
                unit: spec.is_point(&g.name),
                rank,
                bounds,
            }));
            gens.insert(g.name.clone(), t);
        }
        Operad { spec, gens }
    }

    pub fn spec(&self) -> &CollectionSpec {
        &self.spec
    }

    pub fn max_dim(&self) -> usize {
        self.spec.max_dim
    }

    pub fn gen(&self, name: &str) -> Result<Term, TermError> {
        self.gens.get(name).cloned().ok_or_else(|| TermError::UnknownGen(name.to_string()))
    }

    /// The unit generator over the `m`-globe of color `c`.
    pub fn unit(&self, c: Color, m: usize) -> Result<Term, TermError> {
        let n = self.spec.point(c, m).ok_or(TermError::NoUnit(c, m))?;
        self.gen(n)
    }

    /// The unit arguments `T(λ)(a)` over an arity.
    pub fn unit_args(&self, a: &Arity) -> Result<PastingDiagram<Term>, TermError> {
        let root = a.root().try_map_depth(&mut |j, c| self.unit(*c, j))?;
        Ok(PastingDiagram::new(a.dim(), root)?)
    }

    /// Generators in table order.
    pub fn generators(&self) -> impl Iterator<Item = Term> + '_ {
        self.spec.generators().iter().map(|g| self.gens[&g.name].clone())
    }

    /// γ with full type checking.
    pub fn compose(&self, head: &Term, args: &PastingDiagram<Term>) -> Result<Term, TermError> {
        if args.dim() != head.dim() {
            return Err(TermError::DimMismatch { head: head.dim(), args: args.dim() });
        }
        for (j, l) in args.root().labels() {
            if l.dim() != j {
                return Err(TermError::LabelDim { label: l.to_string(), depth: j, dim: l.dim() });
            }
        }
        let skeleton = args.map(Term::coarity);
        if &skeleton != head.arity() {
            return Err(TermError::Skeleton { expected: head.arity().to_string(), got: skeleton.to_string() });
        }
        args.root().check_incidence(&mut |t: &Term| t.bounds().cloned()).map_err(TermError::Incidence)?;
        Ok(self.compose_unchecked(head, args))
    }

    /// γ on arguments already known to fit.
    pub fn compose_unchecked(&self, head: &Term, args: &PastingDiagram<Term>) -> Term {
        if head.is_unit() {
            return args.globe_top().expect("unit heads take globes").clone();
        }
        if args.labels().all(Term::is_unit) {
            return head.clone();
        }
        if let Kind::Comp(b, pi) = head.kind() {
            let shapes = pi.root().map(&mut |t| t.arity().tree());
            let pieces = unflatten(&shapes, args.root()).expect("arguments have the head's arity");
            let inner = zip_depth(pi.root(), &pieces, 0, &mut |j, t, piece| {
                let piece = PastingDiagram::new(j, piece.clone()).expect("piece fits its label");
                self.compose_unchecked(t, &piece)
            });
            let inner = PastingDiagram::new(pi.dim(), inner).expect("same shape");
            return self.compose_unchecked(b, &inner);
        }
        self.make_comp(head, args)
    }

    fn make_comp(&self, head: &Term, args: &PastingDiagram<Term>) -> Term {
        let k = head.dim();
        let arity = args.map(|t| t.arity().clone()).substitute().expect("typed arguments graft");
        let size = head.size() + args.root().leaf_labels().iter().map(|(_, l)| l.size()).sum::<usize>();
        let bounds = head.bounds().map(|(hs, ht)| {
            let s = self.compose_unchecked(hs, &args.boundary(Side::Source, k - 1).expect("k > 0"));
            let t = self.compose_unchecked(ht, &args.boundary(Side::Target, k - 1).expect("k > 0"));
            (s, t)
        });
        Term(Arc::new(TermInner {
            kind: Kind::Comp(head.clone(), args.clone()),
            dim: k,
            arity,
            coarity: head.coarity(),
            size,
            unit: false,
            rank: 0,
            bounds,
        }))
    }

    /// Why `lo` and `hi` cannot be bracketed, if they cannot.
    pub fn parallel_reason(&self, lo: &Term, hi: &Term) -> Option<String> {
        if lo.dim() != hi.dim() {
            return Some(format!("dimensions differ ({} vs {})", lo.dim(), hi.dim()));
        }
        if lo.src() != hi.src() {
            return Some(format!("sources differ ({} vs {})", show(lo.src()), show(hi.src())));
        }
        if lo.tgt() != hi.tgt() {
            return Some(format!("targets differ ({} vs {})", show(lo.tgt()), show(hi.tgt())));
        }
        if lo.arity() != hi.arity() {
            return Some(format!("arities differ ({} vs {})", lo.arity(), hi.arity()));
        }
        if lo.coarity() != hi.coarity() {
            return Some(format!("coarities differ ({} vs {})", lo.coarity(), hi.coarity()));
        }
        None
    }

    /// The contraction cell `[lo, hi]`.
    pub fn bracket(&self, lo: &Term, hi: &Term) -> Result<Term, TermError> {
        if let Some(r) = self.parallel_reason(lo, hi) {
            return Err(TermError::NotParallel(r));
        }
        let k = lo.dim();
        if k + 1 > self.max_dim() {
            return Err(TermError::TooHigh { k, max_dim: self.max_dim() });
        }
        Ok(self.make_bracket(lo, hi))
    }

    fn make_bracket(&self, lo: &Term, hi: &Term) -> Term {
        let k = lo.dim();
        Term(Arc::new(TermInner {
            kind: Kind::Bracket(lo.clone(), hi.clone()),
            dim: k + 1,
            arity: lo.arity().degenerate(k + 1).expect("raising"),
            coarity: lo.coarity(),
            size: 1 + lo.size().max(hi.size()),
            unit: false,
            rank: 0,
            bounds: Some((lo.clone(), hi.clone())),
        }))
    }

    pub fn normalize(&self, raw: &RawTerm) -> Result<Term, TermError> {
        match raw {
            RawTerm::Gen(n) => self.gen(n),
            RawTerm::Point(c, m) => self.unit(*c, *m),
            RawTerm::Comp(h, args) => {
                let head = self.normalize(h)?;
                let args = args.try_map(|a| self.normalize(a))?;
                self.compose(&head, &args)
            }
            RawTerm::Bracket(a, b) => self.bracket(&self.normalize(a)?, &self.normalize(b)?),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Term, TermError> {
        self.normalize(&RawTerm::parse(s)?)
    }

    /// Renames generators along `f` into `target`, rebuilding composites and brackets there.
    pub fn lift(f: &CoglobularMap, target: &Operad, t: &Term) -> Result<Term, TermError> {
        match t.kind() {
            Kind::Gen(n) => {
                let img = f.apply(n).ok_or_else(|| TermError::UnknownGen(n.to_string()))?;
                target.gen(img)
            }
            Kind::Comp(h, args) => {
                let h = Operad::lift(f, target, h)?;
                let args = args.try_map(|a| Operad::lift(f, target, a))?;
                target.compose(&h, &args)
            }
            Kind::Bracket(a, b) => target.bracket(&Operad::lift(f, target, a)?, &Operad::lift(f, target, b)?),
        }
    }
}

fn show(t: Option<&Term>) -> String {
    t.map_or_else(|| "-".to_string(), Term::to_string)
}

/// Walks a node and a same-shaped node of pieces together, with the depth.
pub fn zip_depth<A, B, C>(a: &Node<A>, b: &Node<B>, depth: usize, f: &mut impl FnMut(usize, &A, &B) -> C) -> Node<C> {
    Node {
        gaps: a.gaps.iter().zip(&b.gaps).map(|(x, y)| f(depth, x, y)).collect(),
        children: a.children.iter().zip(&b.children).map(|(x, y)| zip_depth(x, y, depth + 1, f)).collect(),
    }
}

/// Replaces each label `t` of `pi` by `γ(t; piece)`, the pieces cut from `rho`.
pub fn graft(
    op: &Operad,
    pi: &PastingDiagram<Term>,
    rho: &PastingDiagram<Term>,
) -> Result<PastingDiagram<Term>, TermError> {
    let shapes = pi.root().map(&mut |t| t.arity().tree());
    let pieces = unflatten(&shapes, rho.root())?;
    let mut err = None;
    let root = zip_depth(pi.root(), &pieces, 0, &mut |j, t, piece| {
        let piece = PastingDiagram::new(j, piece.clone()).expect("piece fits");
        op.compose(t, &piece).unwrap_or_else(|e| {
            err.get_or_insert(e);
            t.clone()
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(PastingDiagram::new(pi.dim(), root)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::{build_c0, build_cn, Face, Tower, ONE, TWO};
    use crate::pasting::StarOrder;

    fn op(n: usize) -> Operad {
        Operad::new(Arc::new(build_cn(n, 3).unwrap()))
    }

    fn chain(xs: &[&Term], order: StarOrder) -> PastingDiagram<Term> {
        let parts: Vec<_> = xs.iter().map(|x| x.eta()).collect();
        PastingDiagram::star_all(&parts, 0, order).unwrap()
    }

    #[test]
    fn unit_laws() {
        let o = op(1);
        let f1 = o.gen("F^1").unwrap();
        let u1 = o.unit(ONE, 1).unwrap();
        let v1 = o.unit(TWO, 1).unwrap();
        assert_eq!(o.compose(&v1, &f1.eta()).unwrap(), f1);
        assert_eq!(o.compose(&f1, &u1.eta()).unwrap(), f1);
        assert!(o.compose(&u1, &f1.eta()).is_err());
    }

    #[test]
    fn composite_and_boundary() {
        let o = op(1);
        let f1 = o.gen("F^1").unwrap();
        let v01 = o.gen("v_0^1").unwrap();
        let args = chain(&[&f1, &f1], StarOrder::Diagrammatic);
        let t = o.compose(&v01, &args).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.arity(), &crate::collections::color_composite(ONE, 1, 0));
        assert_eq!(t.coarity(), TWO);
        assert_eq!(t.src().unwrap(), &o.gen("F^0").unwrap());
        let mu = o.gen("mu_0^1").unwrap();
        let v = o.unit(TWO, 1).unwrap();
        let bad = chain(&[&v, &v], StarOrder::Diagrammatic);
        assert!(matches!(o.compose(&mu, &bad), Err(TermError::Skeleton { .. })));
    }

    #[test]
    fn associativity_flattens() {
        let o = op(1);
        let v01 = o.gen("v_0^1").unwrap();
        let v1 = o.unit(TWO, 1).unwrap();
        let f1 = o.gen("F^1").unwrap();
        let inner = o.compose(&v01, &chain(&[&v1, &v01], StarOrder::Diagrammatic)).unwrap();
        assert!(matches!(inner.kind(), Kind::Comp(..)));
        let rho = chain(&[&f1, &f1, &f1], StarOrder::Diagrammatic);
        let lhs = o.compose(&inner, &rho).unwrap();
        let pi = chain(&[&v1, &v01], StarOrder::Diagrammatic);
        let rhs = o.compose(&v01, &graft(&o, &pi, &rho).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        match lhs.kind() {
            Kind::Comp(h, _) => assert_eq!(h, &v01),
            _ => panic!("expected a composite"),
        }
    }

    #[test]
    fn brackets() {
        let o = op(1);
        let f1 = o.gen("F^1").unwrap();
        let b = o.bracket(&f1, &f1).unwrap();
        assert_eq!((b.dim(), b.src(), b.tgt()), (2, Some(&f1), Some(&f1)));
        assert_eq!(b.arity(), &f1.arity().degenerate(2).unwrap());
        let u1 = o.unit(ONE, 1).unwrap();
        let e = o.bracket(&u1, &f1).unwrap_err();
        assert!(e.to_string().contains("sources differ"), "{e}");
        assert_eq!(o.gen("tau").ok().map(|_| ()), None);
        let o2 = op(2);
        assert_eq!(o2.gen("tau").unwrap().arity(), &crate::collections::color_globe(ONE, 0).degenerate(1).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let o = op(1);
        let f1 = o.gen("F^1").unwrap();
        let v01 = o.gen("v_0^1").unwrap();
        let t = o.compose(&v01, &chain(&[&f1, &f1], StarOrder::Diagrammatic)).unwrap();
        let b = o.bracket(&t, &t).unwrap();
        for x in [f1, t, b, o.unit(ONE, 2).unwrap()] {
            let s = x.to_string();
            assert_eq!(o.parse(&s).unwrap(), x, "{s}");
            assert_eq!(RawTerm::parse(&s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn lift_renames() {
        let tower = Tower::build(2, 3).unwrap();
        let o1 = Operad::new(tower.collections[1].clone());
        let o2 = Operad::new(tower.collections[2].clone());
        let k = tower.map(1, Face::Kappa);
        let f1 = o1.gen("F^1").unwrap();
        assert_eq!(Operad::lift(k, &o2, &f1).unwrap(), o2.gen("H^1").unwrap());
        let u = o1.unit(ONE, 2).unwrap();
        assert_eq!(Operad::lift(tower.map(1, Face::Delta), &o2, &u).unwrap(), o2.unit(ONE, 2).unwrap());
        let c0 = Operad::new(Arc::new(build_c0(3).unwrap()));
        assert_eq!(c0.generators().count(), 10);
    }
}
