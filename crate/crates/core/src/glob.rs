//! Finite truncated globular sets, colorings and cellwise morphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

pub type CellId = Arc<str>;

pub fn cell(s: &str) -> CellId {
    Arc::from(s)
}

/// A color index, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u8);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlobError {
    #[error("dimension {dim} exceeds truncation {max_dim}")]
    DimOutOfRange { dim: usize, max_dim: usize },
    #[error("cell {id} already present at dim {dim}")]
    Duplicate { dim: usize, id: CellId },
    #[error("cell {id} of dim {dim} needs a source and a target")]
    MissingBoundary { dim: usize, id: CellId },
    #[error("color {0} out of range")]
    BadColor(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownBoundary { dim: usize, id: CellId, missing: CellId },
    Identity { dim: usize, id: CellId, which: &'static str },
    ColorMismatch { dim: usize, id: CellId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownBoundary { dim, id, missing } => {
                write!(f, "{id} (dim {dim}): boundary cell {missing} does not exist")
            }
            Violation::Identity { dim, id, which } => write!(f, "{id} (dim {dim}): {which}"),
            Violation::ColorMismatch { dim, id } => {
                write!(f, "{id} (dim {dim}): color differs from its boundary")
            }
        }
    }
}

/// Cells per dimension, each positive-dimensional cell with its source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobularSet {
    max_dim: usize,
    levels: Vec<IndexMap<CellId, Option<(CellId, CellId)>>>,
}

impl GlobularSet {
    pub fn new(max_dim: usize) -> Self {
        GlobularSet { max_dim, levels: vec![IndexMap::new(); max_dim + 1] }
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn add_point(&mut self, id: &str) -> Result<(), GlobError> {
        self.insert(0, cell(id), None)
    }

    pub fn add_cell(&mut self, dim: usize, id: &str, src: &str, tgt: &str) -> Result<(), GlobError> {
        self.insert(dim, cell(id), Some((cell(src), cell(tgt))))
    }

    pub fn insert(&mut self, dim: usize, id: CellId, bounds: Option<(CellId, CellId)>) -> Result<(), GlobError> {
        if dim > self.max_dim {
            return Err(GlobError::DimOutOfRange { dim, max_dim: self.max_dim });
        }
        if dim > 0 && bounds.is_none() {
            return Err(GlobError::MissingBoundary { dim, id });
        }
        let bounds = if dim == 0 { None } else { bounds };
        if self.levels[dim].contains_key(&id) {
            return Err(GlobError::Duplicate { dim, id });
        }
        self.levels[dim].insert(id, bounds);
        Ok(())
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = &CellId> {
        self.levels.get(dim).into_iter().flat_map(|l| l.keys())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.levels.get(dim).map_or(0, |l| l.len())
    }

    pub fn contains(&self, dim: usize, id: &str) -> bool {
        self.levels.get(dim).is_some_and(|l| l.contains_key(id))
    }

    pub fn boundary(&self, dim: usize, id: &str) -> Option<(&CellId, &CellId)> {
        self.levels.get(dim)?.get(id)?.as_ref().map(|(s, t)| (s, t))
    }

    pub fn src(&self, dim: usize, id: &str) -> Option<&CellId> {
        self.boundary(dim, id).map(|b| b.0)
    }

    pub fn tgt(&self, dim: usize, id: &str) -> Option<&CellId> {
        self.boundary(dim, id).map(|b| b.1)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for k in 1..=self.max_dim {
            for (id, b) in &self.levels[k] {
                let Some((s, t)) = b else { continue };
                let mut known = true;
                for x in [s, t] {
                    if !self.contains(k - 1, x) {
                        out.push(Violation::UnknownBoundary { dim: k, id: id.clone(), missing: x.clone() });
                        known = false;
                    }
                }
                if !known || k < 2 {
                    continue;
                }
                let (ss, st) = self.boundary(k - 1, s).expect("checked");
                let (ts, tt) = self.boundary(k - 1, t).expect("checked");
                if ss != ts {
                    out.push(Violation::Identity { dim: k, id: id.clone(), which: "src(src)≠src(tgt)" });
                }
                if st != tt {
                    out.push(Violation::Identity { dim: k, id: id.clone(), which: "tgt(src)≠tgt(tgt)" });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// True iff every level holds the same cells and every cell is its own source and target.
    pub fn is_constant(&self) -> bool {
        let base: Vec<&CellId> = self.cells(0).collect();
        (1..=self.max_dim).all(|k| {
            self.cells(k).collect::<Vec<_>>() == base
                && self.levels[k].iter().all(|(id, b)| matches!(b, Some((s, t)) if s == id && t == id))
        })
    }

    /// The constant graph with the given cells at every level.
    pub fn constant(names: &[&str], max_dim: usize) -> Self {
        let mut g = GlobularSet::new(max_dim);
        for k in 0..=max_dim {
            for n in names {
                let b = (k > 0).then(|| (cell(n), cell(n)));
                g.insert(k, cell(n), b).expect("fresh constant cell");
            }
        }
        g
    }
}

/// A globular set with a color per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGlobularSet {
    pub base: GlobularSet,
    pub n_colors: u8,
    colors: BTreeMap<(usize, CellId), Color>,
}

impl ColoredGlobularSet {
    pub fn new(base: GlobularSet, n_colors: u8) -> Self {
        ColoredGlobularSet { base, n_colors, colors: BTreeMap::new() }
    }

    pub fn set_color(&mut self, dim: usize, id: &str, c: Color) -> Result<(), GlobError> {
        if c.0 == 0 || c.0 > self.n_colors {
            return Err(GlobError::BadColor(c.0));
        }
        self.colors.insert((dim, cell(id)), c);
        Ok(())
    }

    pub fn color(&self, dim: usize, id: &str) -> Option<Color> {
        self.colors.get(&(dim, cell(id))).copied()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.base.validate();
        for k in 1..=self.base.max_dim() {
            for id in self.base.cells(k) {
                let c = self.color(k, id);
                let (s, t) = self.base.boundary(k, id).expect("positive dim");
                if c.is_none() || c != self.color(k - 1, s) || c != self.color(k - 1, t) {
                    out.push(Violation::ColorMismatch { dim: k, id: id.clone() });
                }
            }
        }
        out
    }

    pub fn color_restrict(&self, j: Color) -> Result<GlobularSet, GlobError> {
        if j.0 == 0 || j.0 > self.n_colors {
            return Err(GlobError::BadColor(j.0));
        }
        let mut g = GlobularSet::new(self.base.max_dim());
        for k in 0..=self.base.max_dim() {
            for id in self.base.cells(k) {
                if self.color(k, id) == Some(j) {
                    let b = self.base.boundary(k, id).map(|(s, t)| (s.clone(), t.clone()));
                    g.insert(k, id.clone(), b)?;
                }
            }
        }
        Ok(g)
    }
}

/// A cellwise map between globular sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellMap {
    pub map: BTreeMap<(usize, CellId), CellId>,
}

impl CellMap {
    pub fn identity(g: &GlobularSet) -> Self {
        let mut map = BTreeMap::new();
        for k in 0..=g.max_dim() {
            for id in g.cells(k) {
                map.insert((k, id.clone()), id.clone());
            }
        }
        CellMap { map }
    }

    pub fn set(&mut self, dim: usize, from: &str, to: &str) {
        self.map.insert((dim, cell(from)), cell(to));
    }

    pub fn get(&self, dim: usize, id: &str) -> Option<&CellId> {
        self.map.get(&(dim, cell(id)))
    }

    /// `other` after `self`.
    pub fn then(&self, other: &CellMap) -> CellMap {
        let map =
            self.map.iter().filter_map(|((k, a), b)| other.get(*k, b).map(|c| ((*k, a.clone()), c.clone()))).collect();
        CellMap { map }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    Unmapped { dim: usize, id: CellId },
    MissingTarget { dim: usize, id: CellId, image: CellId },
    Boundary { dim: usize, id: CellId },
    Color { dim: usize, id: CellId },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::Unmapped { dim, id } => write!(f, "{id} (dim {dim}) is not mapped"),
            MorphismViolation::MissingTarget { dim, id, image } => {
                write!(f, "{id} (dim {dim}) maps to {image}, which is not a cell of that dimension")
            }
            MorphismViolation::Boundary { dim, id } => {
                write!(f, "{id} (dim {dim}): map does not commute with src/tgt")
            }
            MorphismViolation::Color { dim, id } => write!(f, "{id} (dim {dim}): color not preserved"),
        }
    }
}

pub fn check_morphism_report(f: &CellMap, g: &GlobularSet, h: &GlobularSet) -> Vec<MorphismViolation> {
    let mut out = Vec::new();
    for k in 0..=g.max_dim() {
        for id in g.cells(k) {
            let Some(img) = f.get(k, id) else {
                out.push(MorphismViolation::Unmapped { dim: k, id: id.clone() });
                continue;
            };
            if !h.contains(k, img) {
                out.push(MorphismViolation::MissingTarget { dim: k, id: id.clone(), image: img.clone() });
                continue;
            }
            if k == 0 {
                continue;
            }
            let (s, t) = g.boundary(k, id).expect("positive dim");
            let (hs, ht) = h.boundary(k, img).expect("positive dim");
            if f.get(k - 1, s) != Some(hs) || f.get(k - 1, t) != Some(ht) {
                out.push(MorphismViolation::Boundary { dim: k, id: id.clone() });
            }
        }
    }
    out
}

pub fn check_morphism(f: &CellMap, g: &GlobularSet, h: &GlobularSet) -> bool {
    check_morphism_report(f, g, h).is_empty()
}

/// Also requires colors to agree up to the given color map.
pub fn check_colored_morphism(
    f: &CellMap,
    g: &ColoredGlobularSet,
    h: &ColoredGlobularSet,
    color_map: impl Fn(Color) -> Color,
) -> Vec<MorphismViolation> {
    let mut out = check_morphism_report(f, &g.base, &h.base);
    for ((k, id), img) in &f.map {
        if g.color(*k, id).map(&color_map) != h.color(*k, img) {
            out.push(MorphismViolation::Color { dim: *k, id: id.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_with(two_tgt: &str) -> GlobularSet {
        let mut g = GlobularSet::new(2);
        for p in ["x", "y", "z"] {
            g.add_point(p).unwrap();
        }
        g.add_cell(1, "f", "x", "y").unwrap();
        g.add_cell(1, "g", "x", "z").unwrap();
        g.add_cell(2, "a", "f", two_tgt).unwrap();
        g
    }

    #[test]
    fn single_point_is_valid() {
        let mut g = GlobularSet::new(3);
        g.add_point("x").unwrap();
        assert!(g.is_valid());
    }

    #[test]
    fn endomorphism_two_cell_is_valid() {
        assert!(arrow_with("f").is_valid());
    }

    #[test]
    fn mismatched_targets_are_reported() {
        let v = arrow_with("g").validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("tgt(src)≠tgt(tgt)"));
    }

    #[test]
    fn color_restriction_partitions() {
        let mut base = GlobularSet::new(1);
        base.add_point("x").unwrap();
        base.add_point("y").unwrap();
        base.add_point("w").unwrap();
        base.add_cell(1, "f", "x", "w").unwrap();
        let mut g = ColoredGlobularSet::new(base, 2);
        g.set_color(0, "x", Color(1)).unwrap();
        g.set_color(0, "w", Color(1)).unwrap();
        g.set_color(1, "f", Color(1)).unwrap();
        g.set_color(0, "y", Color(2)).unwrap();
        assert!(g.validate().is_empty());
        let one = g.color_restrict(Color(1)).unwrap();
        assert_eq!(one.cells(0).map(|c| c.to_string()).collect::<Vec<_>>(), ["x", "w"]);
        assert!(one.contains(1, "f") && one.is_valid());
        let two = g.color_restrict(Color(2)).unwrap();
        assert_eq!(two.cells(0).map(|c| c.to_string()).collect::<Vec<_>>(), ["y"]);
        assert!(g.color_restrict(Color(3)).is_err());
    }

    #[test]
    fn constant_flag() {
        let g = GlobularSet::constant(&["1", "2"], 3);
        assert!(g.is_constant() && g.is_valid());
        assert!(!arrow_with("f").is_constant());
    }

    #[test]
    fn morphism_checks() {
        let mut g = GlobularSet::new(1);
        g.add_point("x").unwrap();
        g.add_point("y").unwrap();
        g.add_cell(1, "f", "x", "y").unwrap();
        g.add_cell(1, "g", "x", "y").unwrap();
        assert!(check_morphism(&CellMap::identity(&g), &g, &g));

        let mut h = GlobularSet::new(1);
        h.add_point("x").unwrap();
        h.add_point("y").unwrap();
        h.add_cell(1, "h", "x", "y").unwrap();
        let mut collapse = CellMap::default();
        collapse.set(0, "x", "x");
        collapse.set(0, "y", "y");
        collapse.set(1, "f", "h");
        collapse.set(1, "g", "h");
        assert!(check_morphism(&collapse, &g, &h));
        assert!(check_morphism(&CellMap::identity(&g).then(&collapse), &g, &h));

        let mut bad = collapse.clone();
        bad.set(0, "y", "x");
        assert!(!check_morphism(&bad, &g, &h));
    }
}
