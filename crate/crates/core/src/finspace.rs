//! Finite T0 spaces as specialization posets and sheaves of rational spaces on them.
//!
//! `x ≤ y` means every open set containing `x` contains `y`; opens are up-sets and
//! the smallest open around `x` is `U_x = {y : x ≤ y}`. A sheaf is then the same as a
//! covariant functor on the poset, with stalk `F_x = F(U_x)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::homalg::{ChainMap, Complex, HomAlgError};
use crate::ratlin::{image, kernel, quotient, Matrix, Scalar, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("too many points ({0}); at most 64 are supported")]
    TooLarge(usize),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("order relation has a cycle through {0:?}")]
    NotAntisymmetric(String),
    #[error("point set {0} is not open (not an up-set)")]
    NotOpen(String),
    #[error("{0} is not contained in {1}")]
    Containment(String, String),
    #[error("restriction maps are not functorial between {0:?} and {1:?}")]
    Functoriality(String, String),
    #[error("missing restriction matrix for edge {0:?} → {1:?}")]
    MissingRestriction(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("morphism does not commute with restrictions on {0:?} → {1:?}")]
    NotMorphism(String, String),
    #[error("map is not continuous: {0:?} ≤ {1:?} but images are not ordered")]
    NotContinuous(String, String),
    #[error("the given family is not a basis of a topology: {0}")]
    NotBasis(String),
    #[error("sheaves live on different spaces")]
    DifferentSpaces,
    #[error(transparent)]
    Complex(#[from] HomAlgError),
}

/// A set of points of a space with at most 64 points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        PointSet(points.into_iter().fold(0, |m, p| m | (1u64 << p)))
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, p: usize) -> bool {
        self.0 >> p & 1 == 1
    }

    pub fn insert(&mut self, p: usize) {
        self.0 |= 1 << p;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: PointSet) -> PointSet {
        PointSet(self.0 | o.0)
    }

    pub fn intersection(self, o: PointSet) -> PointSet {
        PointSet(self.0 & o.0)
    }

    pub fn minus(self, o: PointSet) -> PointSet {
        PointSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: PointSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&p| self.contains(p))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinSpace {
    labels: Vec<String>,
    up: Vec<PointSet>,
}

impl FinSpace {
    /// Builds the order generated by covering relations `(x, y)` meaning `x ≤ y`.
    pub fn from_hasse(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, SpaceError> {
        let n = labels.len();
        if n > 64 {
            return Err(SpaceError::TooLarge(n));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        let mut up: Vec<PointSet> = (0..n).map(|x| PointSet::from_points([x])).collect();
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(SpaceError::UnknownPoint(format!("#{}", x.max(y))));
            }
            up[x].insert(y);
        }
        // Transitive closure.
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut acc = up[x];
                for y in up[x].iter() {
                    acc = acc.union(up[y]);
                }
                if acc != up[x] {
                    up[x] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(SpaceError::NotAntisymmetric(labels[x].clone()));
                }
            }
        }
        Ok(FinSpace { labels, up })
    }

    /// Recovers the specialization order from a basis of opens and checks the basis axiom.
    pub fn from_basis(labels: Vec<String>, basis: &[PointSet]) -> Result<Self, SpaceError> {
        let n = labels.len();
        if n > 64 {
            return Err(SpaceError::TooLarge(n));
        }
        let all = PointSet::full(n);
        let covered = basis.iter().fold(PointSet::EMPTY, |a, &b| a.union(b));
        if covered != all {
            return Err(SpaceError::NotBasis("basis does not cover the space".into()));
        }
        let mut up = Vec::with_capacity(n);
        for x in 0..n {
            let ux = basis.iter().filter(|b| b.contains(x)).fold(all, |a, &b| a.intersection(b));
            // The smallest neighbourhood must itself be a basis member for a finite basis.
            if !basis.contains(&ux) {
                return Err(SpaceError::NotBasis(format!(
                    "no basis set is the smallest neighbourhood of {:?}",
                    labels[x]
                )));
            }
            up.push(ux);
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(SpaceError::NotAntisymmetric(labels[x].clone()));
                }
            }
        }
        Ok(FinSpace { labels, up })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, SpaceError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| SpaceError::UnknownPoint(label.into()))
    }

    pub fn set_of(&self, labels: &[&str]) -> Result<PointSet, SpaceError> {
        labels
            .iter()
            .map(|l| self.index_of(l))
            .collect::<Result<Vec<_>, _>>()
            .map(PointSet::from_points)
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// The minimal open set `U_x`.
    pub fn up(&self, x: usize) -> PointSet {
        self.up[x]
    }

    pub fn down(&self, x: usize) -> PointSet {
        PointSet::from_points((0..self.len()).filter(|&y| self.leq(y, x)))
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        s.is_subset(self.all()) && s.iter().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.is_open(self.all().minus(s))
    }

    pub fn check_open(&self, s: PointSet) -> Result<(), SpaceError> {
        if self.is_open(s) {
            Ok(())
        } else {
            Err(SpaceError::NotOpen(self.describe(s)))
        }
    }

    pub fn describe(&self, s: PointSet) -> String {
        let names: Vec<&str> = s.iter().filter(|&p| p < self.len()).map(|p| self.label(p)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Smallest open containing `s`.
    pub fn open_hull(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |a, x| a.union(self.up[x]))
    }

    /// Covering pairs `x ⋖ y`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].iter() {
                if y == x {
                    continue;
                }
                let between = self.up[x].intersection(self.down(y));
                if between.len() == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Every open set, sorted.
    pub fn opens(&self) -> Vec<PointSet> {
        let mut found = BTreeSet::from([PointSet::EMPTY]);
        let mut frontier = vec![PointSet::EMPTY];
        while let Some(o) = frontier.pop() {
            for x in 0..self.len() {
                let n = o.union(self.up[x]);
                if found.insert(n) {
                    frontier.push(n);
                }
            }
        }
        found.into_iter().collect()
    }

    /// Length of the longest strict chain, minus one; `-1` for the empty space.
    pub fn height(&self) -> i32 {
        let n = self.len();
        let mut memo: Vec<Option<i32>> = vec![None; n];
        fn go(s: &FinSpace, x: usize, memo: &mut Vec<Option<i32>>) -> i32 {
            if let Some(h) = memo[x] {
                return h;
            }
            let h = s.up[x].iter().filter(|&y| y != x).map(|y| 1 + go(s, y, memo)).max().unwrap_or(0);
            memo[x] = Some(h);
            h
        }
        (0..n).map(|x| go(self, x, &mut memo)).max().unwrap_or(-1)
    }

    /// Points sorted so that maximal points come first.
    pub fn top_down(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.len()).collect();
        pts.sort_by_key(|&x| (self.up[x].len(), x));
        pts
    }

    /// Subspace on an arbitrary point subset, with the induced order.
    pub fn subspace(&self, s: PointSet) -> (FinSpace, Vec<usize>) {
        let pts: Vec<usize> = s.iter().collect();
        let labels = pts.iter().map(|&p| self.labels[p].clone()).collect();
        let up = pts
            .iter()
            .map(|&p| PointSet::from_points(pts.iter().enumerate().filter(|&(_, &q)| self.leq(p, q)).map(|(i, _)| i)))
            .collect();
        (FinSpace { labels, up }, pts)
    }
}

/// An order-preserving map `source → target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuousMap {
    pub source: Arc<FinSpace>,
    pub target: Arc<FinSpace>,
    pub map: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(source: Arc<FinSpace>, target: Arc<FinSpace>, map: Vec<usize>) -> Result<Self, SpaceError> {
        if map.len() != source.len() {
            return Err(SpaceError::Shape("point map length differs from source size".into()));
        }
        if let Some(&bad) = map.iter().find(|&&p| p >= target.len()) {
            return Err(SpaceError::UnknownPoint(format!("#{bad}")));
        }
        for x in 0..source.len() {
            for y in source.up(x).iter() {
                if !target.leq(map[x], map[y]) {
                    return Err(SpaceError::NotContinuous(source.label(x).into(), source.label(y).into()));
                }
            }
        }
        Ok(ContinuousMap { source, target, map })
    }

    pub fn identity(space: Arc<FinSpace>) -> Self {
        let map = (0..space.len()).collect();
        ContinuousMap {
            source: space.clone(),
            target: space,
            map,
        }
    }

    /// Inclusion of an open (or any) subset, given as its subspace.
    pub fn inclusion(space: Arc<FinSpace>, s: PointSet) -> Self {
        let (sub, pts) = space.subspace(s);
        ContinuousMap {
            source: Arc::new(sub),
            target: space,
            map: pts,
        }
    }

    pub fn apply(&self, y: usize) -> usize {
        self.map[y]
    }

    pub fn preimage(&self, u: PointSet) -> PointSet {
        PointSet::from_points((0..self.source.len()).filter(|&y| u.contains(self.map[y])))
    }

    pub fn image_of(&self, s: PointSet) -> PointSet {
        PointSet::from_points(s.iter().map(|y| self.map[y]))
    }
}

/// How the coordinates of each stalk split into blocks indexed by points, for
/// sheaves of the form `x ↦ ⊕_{y ≥ x} G_y` and direct sums of those.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductLayout {
    /// For each stalk, a list of `(point, offset, len)` blocks.
    pub blocks: Vec<Vec<(usize, usize, usize)>>,
}

impl ProductLayout {
    /// Diagonal projection keeping only blocks whose point satisfies `keep`.
    pub fn projector(&self, x: usize, dim: usize, keep: impl Fn(usize) -> bool) -> Matrix {
        let mut m = Matrix::zeros(dim, dim);
        for &(y, off, len) in &self.blocks[x] {
            if keep(y) {
                m.put(off, off, &Matrix::identity(len));
            }
        }
        m
    }

    pub fn direct_sum(a: &ProductLayout, adims: &[usize], b: &ProductLayout) -> ProductLayout {
        let blocks = a
            .blocks
            .iter()
            .zip(&b.blocks)
            .zip(adims)
            .map(|((ba, bb), &da)| {
                let mut v = ba.clone();
                v.extend(bb.iter().map(|&(y, o, l)| (y, o + da, l)));
                v
            })
            .collect();
        ProductLayout { blocks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sheaf {
    space: Arc<FinSpace>,
    dims: Vec<usize>,
    res: BTreeMap<(usize, usize), Matrix>,
    layout: Option<ProductLayout>,
}

impl Sheaf {
    /// Builds a sheaf from restriction matrices on the covering pairs, composing them
    /// to every pair `x ≤ y` and checking that all paths agree.
    pub fn new(space: Arc<FinSpace>, dims: Vec<usize>, hasse_res: &BTreeMap<(usize, usize), Matrix>) -> Result<Self, SpaceError> {
        if dims.len() != space.len() {
            return Err(SpaceError::Shape("one stalk dimension per point is required".into()));
        }
        let hasse = space.hasse();
        for (&(x, y), m) in hasse_res {
            if !hasse.contains(&(x, y)) {
                return Err(SpaceError::Shape(format!(
                    "{:?} → {:?} is not a covering pair",
                    space.label(x.min(space.len() - 1)),
                    space.label(y.min(space.len() - 1))
                )));
            }
            if m.shape() != (dims[y], dims[x]) {
                return Err(SpaceError::Shape(format!(
                    "restriction {:?} → {:?} has shape {:?}, expected {:?}",
                    space.label(x),
                    space.label(y),
                    m.shape(),
                    (dims[y], dims[x])
                )));
            }
        }
        for &(x, y) in &hasse {
            if !hasse_res.contains_key(&(x, y)) {
                return Err(SpaceError::MissingRestriction(space.label(x).into(), space.label(y).into()));
            }
        }
        let mut res: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        for x in space.top_down() {
            res.insert((x, x), Matrix::identity(dims[x]));
            let covers: Vec<usize> = hasse.iter().filter(|e| e.0 == x).map(|e| e.1).collect();
            for y in space.up(x).iter().filter(|&y| y != x) {
                let mut value: Option<Matrix> = None;
                for &z in covers.iter().filter(|&&z| space.leq(z, y)) {
                    let m = &res[&(z, y)] * &hasse_res[&(x, z)];
                    match &value {
                        None => value = Some(m),
                        Some(v) if *v != m => return Err(SpaceError::Functoriality(space.label(x).into(), space.label(y).into())),
                        _ => {}
                    }
                }
                res.insert((x, y), value.expect("a chain connects comparable points"));
            }
        }
        Ok(Sheaf {
            space,
            dims,
            res,
            layout: None,
        })
    }

    /// Builds a sheaf from restriction matrices on every comparable pair.
    pub fn from_all_pairs(space: Arc<FinSpace>, dims: Vec<usize>, res: impl Fn(usize, usize) -> Matrix) -> Result<Self, SpaceError> {
        let hasse: BTreeMap<(usize, usize), Matrix> = space.hasse().into_iter().map(|(x, y)| ((x, y), res(x, y))).collect();
        Sheaf::new(space, dims, &hasse)
    }

    pub fn constant(space: Arc<FinSpace>, dim: usize) -> Self {
        let n = space.len();
        Sheaf::from_all_pairs(space, vec![dim; n], |_, _| Matrix::identity(dim)).expect("constant sheaf")
    }

    pub fn zero(space: Arc<FinSpace>) -> Self {
        Sheaf::constant(space, 0)
    }

    /// A space at the single point `x` and zero elsewhere: the skyscraper when `x`
    /// is closed, the extension by zero when `x` is open.
    pub fn concentrated_at(space: Arc<FinSpace>, x: usize, dim: usize) -> Self {
        let mut dims = vec![0; space.len()];
        dims[x] = dim;
        let d2 = dims.clone();
        Sheaf::from_all_pairs(space, dims, |a, b| Matrix::zeros(d2[b], d2[a])).expect("skyscraper")
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn stalk_dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    /// `r_{x→y}` for `x ≤ y`.
    pub fn res(&self, x: usize, y: usize) -> &Matrix {
        self.res
            .get(&(x, y))
            .unwrap_or_else(|| panic!("{} ≰ {}", self.space.label(x), self.space.label(y)))
    }

    pub fn layout(&self) -> Option<&ProductLayout> {
        self.layout.as_ref()
    }

    pub fn with_layout(mut self, layout: ProductLayout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn offsets(&self, u: PointSet) -> (BTreeMap<usize, usize>, usize) {
        let mut off = BTreeMap::new();
        let mut n = 0;
        for x in u.iter() {
            off.insert(x, n);
            n += self.dims[x];
        }
        (off, n)
    }

    /// Compatible tuples in `⊕_{x∈u} F_x`.
    pub fn sections(&self, u: PointSet) -> Sections {
        let (offsets, ambient) = self.offsets(u);
        let mut blocks = Vec::new();
        for (x, y) in self.space.hasse() {
            if u.contains(x) && u.contains(y) {
                let mut m = Matrix::zeros(self.dims[y], ambient);
                m.put(0, offsets[&x], self.res(x, y));
                m.add_at(0, offsets[&y], &(-&Matrix::identity(self.dims[y])));
                blocks.push(m);
            }
        }
        let eqs = if blocks.is_empty() {
            Matrix::zeros(0, ambient)
        } else {
            Matrix::vstack(&blocks.iter().collect::<Vec<_>>())
        };
        Sections {
            open: u,
            offsets,
            ambient,
            space: kernel(&eqs),
        }
    }

    /// Sections over `u` vanishing on `u_prime`, in the ambient coordinates of `sections(u)`.
    pub fn relative_sections(&self, u: PointSet, u_prime: PointSet) -> Result<Sections, SpaceError> {
        if !u_prime.is_subset(u) {
            return Err(SpaceError::Containment(self.space.describe(u_prime), self.space.describe(u)));
        }
        let full = self.sections(u);
        let mut zero_rows = Vec::new();
        for x in u_prime.iter() {
            let o = full.offsets[&x];
            zero_rows.extend(o..o + self.dims[x]);
        }
        let b = full.space.basis();
        let restricted = b.select_rows(&zero_rows);
        let k = kernel(&restricted);
        let space = Subspace::span(&(b * k.basis()));
        Ok(Sections { space, ..full })
    }

    /// Restriction `F(u) → F(v)` in section coordinates.
    pub fn restriction(&self, from: &Sections, to: &Sections) -> Matrix {
        assert!(to.open.is_subset(from.open), "restriction to a non-subset");
        let mut rows = Vec::new();
        for x in to.open.iter() {
            let o = from.offsets[&x];
            rows.extend(o..o + self.dims[x]);
        }
        let vals = from.space.basis().select_rows(&rows);
        to.space.coords_matrix(&vals).expect("restricted sections are sections")
    }

    pub fn direct_sum(&self, other: &Sheaf) -> Result<Sheaf, SpaceError> {
        if self.space != other.space {
            return Err(SpaceError::DifferentSpaces);
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut s = Sheaf::from_all_pairs(self.space.clone(), dims, |x, y| {
            Matrix::block_diag(&[self.res(x, y), other.res(x, y)])
        })?;
        if let (Some(a), Some(b)) = (&self.layout, &other.layout) {
            s.layout = Some(ProductLayout::direct_sum(a, &self.dims, b));
        }
        Ok(s)
    }

    pub fn identity(&self) -> SheafMorphism {
        SheafMorphism {
            source: self.clone(),
            target: self.clone(),
            comps: self.dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    pub fn zero_to(&self, target: &Sheaf) -> SheafMorphism {
        SheafMorphism {
            source: self.clone(),
            target: target.clone(),
            comps: (0..self.dims.len()).map(|x| Matrix::zeros(target.dims[x], self.dims[x])).collect(),
        }
    }

    /// The restriction `F|_s` to an open subset, as a sheaf on the subspace.
    pub fn restrict_to(&self, s: PointSet) -> Sheaf {
        let inc = ContinuousMap::inclusion(self.space.clone(), s);
        inverse_image(&inc, self)
    }
}

/// Section space over an open set, inside `⊕_{x∈open} F_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sections {
    pub open: PointSet,
    /// Offset of each stalk block in the ambient coordinates.
    pub offsets: BTreeMap<usize, usize>,
    pub ambient: usize,
    pub space: Subspace,
}

impl Sections {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> &Matrix {
        self.space.basis()
    }

    /// The component at `x` of the section with coordinates `c`.
    pub fn value_at(&self, c: &[Scalar], x: usize, stalk_dim: usize) -> Vec<Scalar> {
        let v = self.space.basis().mul_vec(c);
        let o = self.offsets[&x];
        v[o..o + stalk_dim].to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMorphism {
    pub source: Sheaf,
    pub target: Sheaf,
    pub comps: Vec<Matrix>,
}

impl SheafMorphism {
    pub fn new(source: Sheaf, target: Sheaf, comps: Vec<Matrix>) -> Result<Self, SpaceError> {
        if source.space != target.space {
            return Err(SpaceError::DifferentSpaces);
        }
        let sp = source.space.clone();
        if comps.len() != sp.len() {
            return Err(SpaceError::Shape("one component per point is required".into()));
        }
        for x in 0..sp.len() {
            if comps[x].shape() != (target.dims[x], source.dims[x]) {
                return Err(SpaceError::Shape(format!(
                    "component at {:?} has shape {:?}, expected {:?}",
                    sp.label(x),
                    comps[x].shape(),
                    (target.dims[x], source.dims[x])
                )));
            }
        }
        for (x, y) in sp.hasse() {
            if &comps[y] * source.res(x, y) != target.res(x, y) * &comps[x] {
                return Err(SpaceError::NotMorphism(sp.label(x).into(), sp.label(y).into()));
            }
        }
        Ok(SheafMorphism { source, target, comps })
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.source.space
    }

    pub fn compose(&self, first: &SheafMorphism) -> Result<SheafMorphism, SpaceError> {
        if first.target != self.source {
            return Err(SpaceError::Shape("composition through different sheaves".into()));
        }
        let comps = self.comps.iter().zip(&first.comps).map(|(a, b)| a * b).collect();
        Ok(SheafMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            comps,
        })
    }

    pub fn scale(&self, k: &Scalar) -> SheafMorphism {
        SheafMorphism {
            comps: self.comps.iter().map(|m| m.scale(k)).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// The induced map `F(u) → G(u)` between given section spaces over the same open.
    pub fn on_sections(&self, from: &Sections, to: &Sections) -> Matrix {
        assert_eq!(from.open, to.open, "sections over different opens");
        let blocks: Vec<&Matrix> = from.open.iter().map(|x| &self.comps[x]).collect();
        let diag = Matrix::block_diag(&blocks);
        let vals = &diag * from.space.basis();
        to.space.coords_matrix(&vals).expect("morphisms map sections to sections")
    }

    pub fn is_pointwise_injective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.cols())
    }
}

/// Pointwise kernels with induced restrictions, and the inclusion into the source.
pub fn kernel_sheaf(m: &SheafMorphism) -> (Sheaf, SheafMorphism) {
    let sp = m.space().clone();
    let kers: Vec<Subspace> = m.comps.iter().map(kernel).collect();
    let dims = kers.iter().map(Subspace::dim).collect();
    let s = Sheaf::from_all_pairs(sp, dims, |x, y| {
        kers[y]
            .coords_matrix(&(m.source.res(x, y) * kers[x].basis()))
            .expect("kernels are preserved")
    })
    .expect("kernel sheaf");
    let inc = SheafMorphism {
        source: s.clone(),
        target: m.source.clone(),
        comps: kers.iter().map(|k| k.basis().clone()).collect(),
    };
    (s, inc)
}

/// A cokernel sheaf with its projection from the target and pointwise lifts.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub sheaf: Sheaf,
    pub proj: SheafMorphism,
    /// `lifts[x]` sends cokernel coordinates back into the target stalk; `proj ∘ lift = id`.
    pub lifts: Vec<Matrix>,
}

/// On a finite space the pointwise cokernel presheaf already has the right stalks
/// (its value on `U_x` is the stalk), so its sheafification is given by those stalks
/// with the induced restrictions.
pub fn cokernel(m: &SheafMorphism) -> Cokernel {
    let sp = m.space().clone();
    let quos: Vec<_> = m
        .comps
        .iter()
        .map(|c| quotient(&Subspace::full(c.rows()), &image(c)).expect("image lies in the ambient space"))
        .collect();
    let dims = quos.iter().map(|q| q.dim).collect();
    let sheaf = Sheaf::from_all_pairs(sp, dims, |x, y| &quos[y].projector * &(m.target.res(x, y) * &quos[x].lift)).expect("cokernel sheaf");
    let proj = SheafMorphism {
        source: m.target.clone(),
        target: sheaf.clone(),
        comps: quos.iter().map(|q| q.projector.clone()).collect(),
    };
    Cokernel {
        sheaf,
        proj,
        lifts: quos.into_iter().map(|q| q.lift).collect(),
    }
}

pub fn cokernel_sheaf(m: &SheafMorphism) -> (Sheaf, SheafMorphism) {
    let c = cokernel(m);
    (c.sheaf, c.proj)
}

/// `f_* T` with stalk `T(f^{-1} U_x)`.
pub fn pushforward(f: &ContinuousMap, t: &Sheaf) -> Sheaf {
    assert_eq!(*t.space, *f.source, "sheaf must live on the source of f");
    let secs: Vec<Sections> = (0..f.target.len()).map(|x| t.sections(f.preimage(f.target.up(x)))).collect();
    let dims = secs.iter().map(Sections::dim).collect();
    Sheaf::from_all_pairs(f.target.clone(), dims, |x, y| t.restriction(&secs[x], &secs[y])).expect("direct image sheaf")
}

pub fn pushforward_sections(f: &ContinuousMap, t: &Sheaf) -> Vec<Sections> {
    (0..f.target.len()).map(|x| t.sections(f.preimage(f.target.up(x)))).collect()
}

pub fn pushforward_morphism(f: &ContinuousMap, m: &SheafMorphism) -> SheafMorphism {
    let a = pushforward_sections(f, &m.source);
    let b = pushforward_sections(f, &m.target);
    let comps = a.iter().zip(&b).map(|(sa, sb)| m.on_sections(sa, sb)).collect();
    SheafMorphism {
        source: pushforward(f, &m.source),
        target: pushforward(f, &m.target),
        comps,
    }
}

/// `f^{-1} S` with stalk `S_{f(y)}`.
pub fn inverse_image(f: &ContinuousMap, s: &Sheaf) -> Sheaf {
    assert_eq!(*s.space, *f.target, "sheaf must live on the target of f");
    let dims = (0..f.source.len()).map(|y| s.dims[f.map[y]]).collect();
    Sheaf::from_all_pairs(f.source.clone(), dims, |y, z| s.res(f.map[y], f.map[z]).clone()).expect("inverse image sheaf")
}

pub fn inverse_image_morphism(f: &ContinuousMap, m: &SheafMorphism) -> SheafMorphism {
    SheafMorphism {
        source: inverse_image(f, &m.source),
        target: inverse_image(f, &m.target),
        comps: (0..f.source.len()).map(|y| m.comps[f.map[y]].clone()).collect(),
    }
}

/// The unit `S → f_* f^{-1} S` and the counit `f^{-1} f_* T → T`.
pub fn adjunction_units(f: &ContinuousMap, s: &Sheaf, t: &Sheaf) -> (SheafMorphism, SheafMorphism) {
    let pulled = inverse_image(f, s);
    let secs = pushforward_sections(f, &pulled);
    let unit_comps = (0..f.target.len())
        .map(|x| {
            let sec = &secs[x];
            let mut vals = Matrix::zeros(sec.ambient, s.dims[x]);
            for y in sec.open.iter() {
                vals.put(sec.offsets[&y], 0, s.res(x, f.map[y]));
            }
            sec.space
                .coords_matrix(&vals)
                .expect("restrictions of a stalk element are compatible")
        })
        .collect();
    let unit = SheafMorphism::new(s.clone(), pushforward(f, &pulled), unit_comps).expect("unit is a morphism");

    let tsecs = pushforward_sections(f, t);
    let pushed = pushforward(f, t);
    let counit_comps = (0..f.source.len())
        .map(|y| {
            let sec = &tsecs[f.map[y]];
            let o = sec.offsets[&y];
            let rows: Vec<usize> = (o..o + t.dims[y]).collect();
            sec.basis().select_rows(&rows)
        })
        .collect();
    let counit = SheafMorphism::new(inverse_image(f, &pushed), t.clone(), counit_comps).expect("counit is a morphism");
    (unit, counit)
}

/// A bounded complex of sheaves in degrees `0..terms.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafComplex {
    pub terms: Vec<Sheaf>,
    /// `diffs[q] : terms[q] → terms[q+1]`; the last differential is omitted.
    pub diffs: Vec<SheafMorphism>,
}

impl SheafComplex {
    pub fn new(terms: Vec<Sheaf>, diffs: Vec<SheafMorphism>) -> Result<Self, SpaceError> {
        if terms.is_empty() {
            return Err(SpaceError::Shape("a sheaf complex needs at least one term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(SpaceError::Shape(format!(
                "{} terms but {} differentials",
                terms.len(),
                diffs.len()
            )));
        }
        for (q, d) in diffs.iter().enumerate() {
            if d.source != terms[q] || d.target != terms[q + 1] {
                return Err(SpaceError::Shape(format!("differential {q} does not connect consecutive terms")));
            }
        }
        for q in 1..diffs.len() {
            if !diffs[q].compose(&diffs[q - 1])?.is_zero() {
                return Err(SpaceError::Complex(HomAlgError::NotComplex(q as i32 - 1)));
            }
        }
        Ok(SheafComplex { terms, diffs })
    }

    pub fn single(s: Sheaf) -> Self {
        SheafComplex {
            terms: vec![s],
            diffs: Vec::new(),
        }
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        self.terms[0].space()
    }

    /// Highest degree present.
    pub fn top(&self) -> i32 {
        self.terms.len() as i32 - 1
    }

    pub fn term(&self, q: i32) -> Sheaf {
        if q < 0 || q > self.top() {
            Sheaf::zero(self.space().clone())
        } else {
            self.terms[q as usize].clone()
        }
    }

    pub fn d(&self, q: i32) -> SheafMorphism {
        if q >= 0 && (q as usize) < self.diffs.len() {
            self.diffs[q as usize].clone()
        } else {
            self.term(q).zero_to(&self.term(q + 1))
        }
    }

    /// `K•(u, u')`: sections over `u` vanishing on `u'`.
    pub fn sections_complex(&self, u: PointSet, u_prime: PointSet) -> Result<(Complex, Vec<Sections>), SpaceError> {
        let secs: Vec<Sections> = (0..=self.top())
            .map(|q| self.term(q).relative_sections(u, u_prime))
            .collect::<Result<_, _>>()?;
        let k = Complex::from_fn(
            0,
            self.top(),
            |q| secs[q as usize].dim(),
            |q| self.d(q).on_sections(&secs[q as usize], &secs[q as usize + 1]),
        )?;
        Ok((k, secs))
    }

    /// `K•(u)`.
    pub fn sections_over(&self, u: PointSet) -> Complex {
        self.sections_complex(u, PointSet::EMPTY).expect("absolute sections").0
    }

    /// Restriction `K•(u, w) → K•(v, w ∩ v)` for `v ⊆ u`.
    pub fn restriction_map(&self, u: PointSet, u_prime: PointSet, v: PointSet, v_prime: PointSet) -> Result<ChainMap, SpaceError> {
        let (a, sa) = self.sections_complex(u, u_prime)?;
        let (b, sb) = self.sections_complex(v, v_prime)?;
        Ok(ChainMap::new(a, b, |q| {
            let k = self.term(q);
            restriction_between(&k, &sa[q as usize], &sb[q as usize])
        })?)
    }

    pub fn kernel_of_d0(&self) -> (Sheaf, SheafMorphism) {
        kernel_sheaf(&self.d(0))
    }

    pub fn direct_sum(&self, other: &SheafComplex) -> Result<SheafComplex, SpaceError> {
        let top = self.top().max(other.top());
        let terms: Vec<Sheaf> = (0..=top)
            .map(|q| self.term(q).direct_sum(&other.term(q)))
            .collect::<Result<_, _>>()?;
        let diffs = (0..top)
            .map(|q| {
                let (a, b) = (self.d(q), other.d(q));
                let comps = a.comps.iter().zip(&b.comps).map(|(x, y)| Matrix::block_diag(&[x, y])).collect();
                SheafMorphism {
                    source: terms[q as usize].clone(),
                    target: terms[q as usize + 1].clone(),
                    comps,
                }
            })
            .collect();
        SheafComplex::new(terms, diffs)
    }

    pub fn pushforward(&self, f: &ContinuousMap) -> SheafComplex {
        let terms = self.terms.iter().map(|t| pushforward(f, t)).collect();
        let diffs = self.diffs.iter().map(|d| pushforward_morphism(f, d)).collect();
        SheafComplex { terms, diffs }
    }

    pub fn inverse_image(&self, f: &ContinuousMap) -> SheafComplex {
        let terms = self.terms.iter().map(|t| inverse_image(f, t)).collect();
        let diffs = self.diffs.iter().map(|d| inverse_image_morphism(f, d)).collect();
        SheafComplex { terms, diffs }
    }

    pub fn identity(&self) -> SheafChainMap {
        SheafChainMap {
            source: self.clone(),
            target: self.clone(),
            comps: self.terms.iter().map(Sheaf::identity).collect(),
        }
    }
}

/// The restriction between two section spaces of one sheaf, computed from a
/// relative-or-absolute pair of subspaces over nested opens.
pub fn restriction_between(k: &Sheaf, from: &Sections, to: &Sections) -> Matrix {
    k.restriction(from, to)
}

/// A morphism of sheaf complexes, degreewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafChainMap {
    pub source: SheafComplex,
    pub target: SheafComplex,
    pub comps: Vec<SheafMorphism>,
}

impl SheafChainMap {
    pub fn new(source: SheafComplex, target: SheafComplex, comps: Vec<SheafMorphism>) -> Result<Self, SpaceError> {
        let top = source.top().max(target.top());
        let m = SheafChainMap { source, target, comps };
        for q in 0..=top {
            let c = m.comp(q);
            if c.source != m.source.term(q) || c.target != m.target.term(q) {
                return Err(SpaceError::Shape(format!("component {q} has the wrong source or target")));
            }
        }
        for q in 0..top {
            let lhs = m.target.d(q).compose(&m.comp(q))?;
            let rhs = m.comp(q + 1).compose(&m.source.d(q))?;
            if lhs.comps != rhs.comps {
                return Err(SpaceError::Complex(HomAlgError::NotChainMap(q)));
            }
        }
        Ok(m)
    }

    pub fn comp(&self, q: i32) -> SheafMorphism {
        if q >= 0 && (q as usize) < self.comps.len() {
            self.comps[q as usize].clone()
        } else {
            self.source.term(q).zero_to(&self.target.term(q))
        }
    }

    /// The induced chain map on sections over `(u, u')`.
    pub fn on_sections(&self, u: PointSet, u_prime: PointSet) -> Result<ChainMap, SpaceError> {
        let (a, sa) = self.source.sections_complex(u, u_prime)?;
        let (b, sb) = self.target.sections_complex(u, u_prime)?;
        Ok(ChainMap::new(a, b, |q| self.comp(q).on_sections(&sa[q as usize], &sb[q as usize]))?)
    }

    pub fn pushforward(&self, f: &ContinuousMap) -> SheafChainMap {
        SheafChainMap {
            source: self.source.pushforward(f),
            target: self.target.pushforward(f),
            comps: self.comps.iter().map(|c| pushforward_morphism(f, c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pseudocircle() -> Arc<FinSpace> {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        Arc::new(FinSpace::from_hasse(labels, &[(2, 0), (2, 1), (3, 0), (3, 1)]).unwrap())
    }

    fn point() -> Arc<FinSpace> {
        Arc::new(FinSpace::from_hasse(vec!["p".into()], &[]).unwrap())
    }

    #[test]
    fn pseudocircle_topology() {
        let x = pseudocircle();
        assert_eq!(x.height(), 1);
        assert_eq!(x.up(2), x.set_of(&["a", "b", "c"]).unwrap());
        let opens = x.opens();
        // ∅, {a}, {b}, {a,b}, {a,b,c}, {a,b,d}, X
        assert_eq!(opens.len(), 7);
        assert!(opens.iter().all(|&o| x.is_open(o)));
        assert!(!x.is_open(x.set_of(&["c"]).unwrap()));
    }

    #[test]
    fn rejects_cycles() {
        let r = FinSpace::from_hasse(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]);
        assert!(matches!(r, Err(SpaceError::NotAntisymmetric(_))));
    }

    #[test]
    fn sections_examples() {
        let x = pseudocircle();
        let k = Sheaf::constant(x.clone(), 1);
        assert_eq!(k.sections(x.all()).dim(), 1);
        assert_eq!(k.sections(PointSet::EMPTY).dim(), 0);
        assert_eq!(k.sections(x.set_of(&["a", "b", "c"]).unwrap()).dim(), 1);
        assert_eq!(k.sections(x.set_of(&["a", "b"]).unwrap()).dim(), 2);
        for p in 0..4 {
            assert_eq!(k.sections(x.up(p)).dim(), k.stalk_dim(p));
        }
    }

    #[test]
    fn relative_sections_examples() {
        let x = pseudocircle();
        let k = Sheaf::constant(x.clone(), 1);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        assert_eq!(k.relative_sections(x.all(), PointSet::EMPTY).unwrap().dim(), 1);
        assert_eq!(k.relative_sections(arc, arc).unwrap().dim(), 0);
        assert_eq!(k.relative_sections(x.all(), arc).unwrap().dim(), 0);
        assert!(k.relative_sections(arc, x.all()).is_err());
    }

    #[test]
    fn functoriality_is_checked() {
        // Two paths from the bottom of a diamond that disagree.
        let labels = ["t", "l", "r", "b"].map(String::from).to_vec();
        let sp = Arc::new(FinSpace::from_hasse(labels, &[(3, 1), (3, 2), (1, 0), (2, 0)]).unwrap());
        let mut res = BTreeMap::new();
        for e in sp.hasse() {
            res.insert(e, Matrix::identity(1));
        }
        res.insert((2, 0), Matrix::from_i64(&[&[2]]));
        let r = Sheaf::new(sp, vec![1; 4], &res);
        assert!(matches!(r, Err(SpaceError::Functoriality(_, _))));
    }

    #[test]
    fn kernel_and_cokernel() {
        let x = pseudocircle();
        let k = Sheaf::constant(x.clone(), 1);
        let (ker, _) = kernel_sheaf(&k.identity());
        let (cok, _) = cokernel_sheaf(&k.identity());
        assert!(ker.is_zero() && cok.is_zero());
        let z = k.zero_to(&k);
        assert_eq!(kernel_sheaf(&z).0.dims(), k.dims());
        assert_eq!(cokernel_sheaf(&z).0.dims(), k.dims());
    }

    #[test]
    fn sierpinski_skyscraper_quotient() {
        // c ≤ o with o open. ℚ → skyscraper at c has kernel the extension by zero
        // from o, and the extension by zero maps into ℚ with the skyscraper as cokernel.
        let sp = Arc::new(FinSpace::from_hasse(vec!["o".into(), "c".into()], &[(1, 0)]).unwrap());
        let k = Sheaf::constant(sp.clone(), 1);
        let sky = Sheaf::concentrated_at(sp.clone(), 1, 1);
        let ext = Sheaf::concentrated_at(sp.clone(), 0, 1);
        let m = SheafMorphism::new(k.clone(), sky.clone(), vec![Matrix::zeros(0, 1), Matrix::identity(1)]).unwrap();
        let (ker, _) = kernel_sheaf(&m);
        assert_eq!(ker, ext);
        assert!(cokernel_sheaf(&m).0.is_zero());
        let into = SheafMorphism::new(ext.clone(), k.clone(), vec![Matrix::identity(1), Matrix::zeros(1, 0)]).unwrap();
        let (cok, p) = cokernel_sheaf(&into);
        assert_eq!(cok, sky);
        assert!(p.compose(&into).unwrap().is_zero());
    }

    #[test]
    fn pushforward_examples() {
        let x = pseudocircle();
        let p = point();
        let t = Sheaf::constant(x.clone(), 1);
        let f = ContinuousMap::new(x.clone(), p.clone(), vec![0; 4]).unwrap();
        assert_eq!(pushforward(&f, &t).dims(), &[1]);
        let id = ContinuousMap::identity(x.clone());
        let pt = pushforward(&id, &t);
        assert_eq!(pt.dims(), t.dims());
        let empty = Arc::new(FinSpace::from_hasse(vec![], &[]).unwrap());
        let e = ContinuousMap::new(empty.clone(), x.clone(), vec![]).unwrap();
        assert!(pushforward(&e, &Sheaf::zero(empty)).is_zero());
    }

    #[test]
    fn inverse_image_examples() {
        let x = pseudocircle();
        let t = Sheaf::constant(x.clone(), 2);
        assert_eq!(inverse_image(&ContinuousMap::identity(x.clone()), &t), t);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let inc = ContinuousMap::inclusion(x.clone(), arc);
        let r = inverse_image(&inc, &t);
        assert_eq!(r, Sheaf::constant(inc.source.clone(), 2));
        // Sections of the restriction over V ⊆ arc agree with sections over V.
        for v in inc.source.opens() {
            assert_eq!(r.sections(v).dim(), t.sections(inc.image_of(v)).dim());
        }
    }

    #[test]
    fn adjunction_examples() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let id = ContinuousMap::identity(x.clone());
        let (u, c) = adjunction_units(&id, &s, &s);
        assert!(u.comps.iter().chain(&c.comps).all(|m| *m == Matrix::identity(1)));
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let inc = ContinuousMap::inclusion(x.clone(), arc);
        let t = Sheaf::constant(inc.source.clone(), 1);
        let (u, _) = adjunction_units(&inc, &s, &t);
        // At the point d, f^{-1}U_d = {a,b} has two independent constants; the unit is the diagonal.
        let d = x.index_of("d").unwrap();
        assert_eq!(u.comps[d].rows(), 2);
        assert_eq!(u.comps[d].rank(), 1);
    }

    #[test]
    fn from_basis_recovers_order() {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        let basis = [PointSet(0b0001), PointSet(0b0010), PointSet(0b0111), PointSet(0b1011)];
        let s = FinSpace::from_basis(labels, &basis).unwrap();
        assert_eq!(s, *pseudocircle());
    }
}
