//! Bounded cochain complexes of finite-dimensional rational spaces.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::ratlin::{image, int, kernel, quotient, solve, Matrix, Scalar, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomAlgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotComplex(i32),
    #[error("map does not commute with differentials at degree {0}")]
    NotChainMap(i32),
    #[error("sequence is not short exact at degree {degree}: {reason}")]
    NotExact { degree: i32, reason: String },
    #[error("square does not commute at degree {0}")]
    Square(i32),
}

/// A complex `K^lo → … → K^hi`, zero outside that range.
#[derive(Clone)]
pub struct Complex {
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex[{}..={}] dims {:?}", self.lo, self.hi(), self.dims)
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        let (lo, hi) = span(self.range(), other.range());
        (lo..=hi).all(|q| self.dim(q) == other.dim(q) && self.d(q) == other.d(q))
    }
}

fn span(a: (i32, i32), b: (i32, i32)) -> (i32, i32) {
    (a.0.min(b.0), a.1.max(b.1))
}

impl Complex {
    /// `diffs[i]` is the differential out of degree `lo + i`; the last one may be
    /// omitted, in which case it is the zero map.
    pub fn new(lo: i32, dims: Vec<usize>, mut diffs: Vec<Matrix>) -> Result<Self, HomAlgError> {
        if diffs.len() + 1 == dims.len() {
            diffs.push(Matrix::zeros(0, *dims.last().unwrap()));
        }
        if diffs.len() != dims.len() {
            return Err(HomAlgError::Shape(format!(
                "{} spaces but {} differentials",
                dims.len(),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            let next = dims.get(i + 1).copied().unwrap_or(0);
            if d.shape() != (next, dims[i]) {
                return Err(HomAlgError::Shape(format!(
                    "differential out of degree {} has shape {:?}, expected {:?}",
                    lo + i as i32,
                    d.shape(),
                    (next, dims[i])
                )));
            }
        }
        let k = Complex { lo, dims, diffs };
        for q in k.lo..k.hi() {
            if !(&k.d(q + 1) * &k.d(q)).is_zero() {
                return Err(HomAlgError::NotComplex(q));
            }
        }
        Ok(k)
    }

    pub fn zero() -> Self {
        Complex {
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A single space placed in degree `q`.
    pub fn concentrated(q: i32, dim: usize) -> Self {
        Complex {
            lo: q,
            dims: vec![dim],
            diffs: vec![Matrix::zeros(0, dim)],
        }
    }

    /// Assembles a complex on `[lo, hi]` from per-degree callbacks.
    pub fn from_fn(lo: i32, hi: i32, dim: impl Fn(i32) -> usize, d: impl Fn(i32) -> Matrix) -> Result<Self, HomAlgError> {
        if hi < lo {
            return Ok(Self::zero());
        }
        let dims: Vec<usize> = (lo..=hi).map(&dim).collect();
        let mut diffs: Vec<Matrix> = (lo..hi).map(&d).collect();
        diffs.push(Matrix::zeros(0, dim(hi)));
        Self::new(lo, dims, diffs)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn range(&self) -> (i32, i32) {
        (self.lo, self.hi())
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, q: i32) -> usize {
        if q < self.lo || q > self.hi() {
            0
        } else {
            self.dims[(q - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^q : K^q → K^{q+1}`.
    pub fn d(&self, q: i32) -> Matrix {
        if q < self.lo || q > self.hi() {
            Matrix::zeros(self.dim(q + 1), self.dim(q))
        } else {
            self.diffs[(q - self.lo) as usize].clone()
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|q| sign(q) * self.dim(q) as i64).sum()
    }

    pub fn cohomology(&self, q: i32) -> Cohomology {
        let cocycles = kernel(&self.d(q));
        let coboundaries = image(&self.d(q - 1));
        let quo = quotient(&cocycles, &coboundaries).expect("im d ⊆ ker d in a complex");
        Cohomology {
            degree: q,
            dim: quo.dim,
            reps: quo.lift,
            projector: quo.projector,
            cocycles,
            coboundaries,
        }
    }

    pub fn betti(&self) -> BTreeMap<i32, usize> {
        self.degrees().map(|q| (q, self.cohomology(q).dim)).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|q| self.cohomology(q).dim == 0)
    }

    pub fn identity(&self) -> ChainMap {
        ChainMap::new(self.clone(), self.clone(), |q| Matrix::identity(self.dim(q))).expect("identity is a chain map")
    }

    pub fn zero_map_to(&self, target: &Complex) -> ChainMap {
        ChainMap::new(self.clone(), target.clone(), |q| Matrix::zeros(target.dim(q), self.dim(q))).expect("zero is a chain map")
    }

    pub fn apply_d(&self, v: &GradedVector) -> GradedVector {
        GradedVector {
            degree: v.degree + 1,
            coords: self.d(v.degree).mul_vec(&v.coords),
        }
    }

    /// The dual complex with `(K*)^q = (K^{-q})*` and the transposed differential.
    pub fn dual(&self) -> Complex {
        Complex::from_fn(-self.hi(), -self.lo, |q| self.dim(-q), |q| self.d(-q - 1).transpose())
            .expect("transpose of a complex is a complex")
    }
}

pub fn sign(q: i32) -> i64 {
    if q.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn sign_scalar(q: i32) -> Scalar {
    int(sign(q))
}

/// A homogeneous cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVector {
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

/// `H^q` with canonical representatives and a projector from cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i32,
    pub dim: usize,
    /// Columns are cocycles whose classes form a basis.
    pub reps: Matrix,
    /// Cocycle coordinates to class coordinates; kills coboundaries.
    pub projector: Matrix,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
}

impl Cohomology {
    pub fn class_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.cocycles.contains(v).then(|| self.projector.mul_vec(v))
    }
}

#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    comps: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn new(source: Complex, target: Complex, comp: impl Fn(i32) -> Matrix) -> Result<Self, HomAlgError> {
        let (lo, hi) = source.range();
        let mut comps = BTreeMap::new();
        for q in lo..=hi {
            let m = comp(q);
            if m.shape() != (target.dim(q), source.dim(q)) {
                return Err(HomAlgError::Shape(format!(
                    "component in degree {q} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dim(q), source.dim(q))
                )));
            }
            comps.insert(q, m);
        }
        let f = ChainMap { source, target, comps };
        let (lo, hi) = span(f.source.range(), f.target.range());
        for q in lo - 1..=hi {
            if &f.target.d(q) * &f.comp(q) != &f.comp(q + 1) * &f.source.d(q) {
                return Err(HomAlgError::NotChainMap(q));
            }
        }
        Ok(f)
    }

    pub fn comp(&self, q: i32) -> Matrix {
        self.comps
            .get(&q)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(q), self.source.dim(q)))
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        let (lo, hi) = span(self.source.range(), self.target.range());
        lo..=hi
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap, HomAlgError> {
        if first.target != self.source {
            return Err(HomAlgError::Shape("composition through different complexes".into()));
        }
        ChainMap::new(first.source.clone(), self.target.clone(), |q| &self.comp(q) * &first.comp(q))
    }

    pub fn scale(&self, k: &Scalar) -> ChainMap {
        ChainMap::new(self.source.clone(), self.target.clone(), |q| self.comp(q).scale(k)).expect("scaled chain map")
    }

    /// The induced matrix `H^q(K) → H^q(L)` in canonical class coordinates.
    pub fn on_cohomology(&self, q: i32) -> Matrix {
        let hk = self.source.cohomology(q);
        let hl = self.target.cohomology(q);
        &hl.projector * &(&self.comp(q) * &hk.reps)
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.degrees().all(|q| {
            let h = self.on_cohomology(q);
            h.rows() == h.cols() && h.rank() == h.rows()
        })
    }

    /// `φ*: L* → K*` with components `(φ^{-q})ᵀ`.
    pub fn dual(&self) -> ChainMap {
        let s = self.target.dual();
        let t = self.source.dual();
        ChainMap::new(s, t, |q| self.comp(-q).transpose()).expect("transpose of a chain map")
    }
}

pub fn is_quasi_iso(phi: &ChainMap) -> bool {
    phi.is_quasi_iso()
}

/// `K[n]^q = K^{n+q}` with differential `(-1)^n d^{n+q}`.
pub fn shift(k: &Complex, n: i32) -> Complex {
    let s = sign_scalar(n);
    Complex::from_fn(k.lo - n, k.hi() - n, |q| k.dim(q + n), |q| k.d(q + n).scale(&s)).expect("shift of a complex")
}

pub fn shift_map(phi: &ChainMap, n: i32) -> ChainMap {
    ChainMap::new(shift(&phi.source, n), shift(&phi.target, n), |q| phi.comp(q + n)).expect("shift of a chain map")
}

fn union_range(a: &Complex, b: &Complex, da: i32, db: i32) -> (i32, i32) {
    span((a.lo - da, a.hi() - da), (b.lo - db, b.hi() - db))
}

#[derive(Clone, Debug)]
pub struct CoMappingCone {
    pub m: Complex,
    pub alpha_star: ChainMap,
    pub beta_star: ChainMap,
}

/// `M*(φ)^q = K^q ⊕ L^{q-1}`, `d(x,y) = (dx, φx - dy)`.
pub fn co_mapping_cone(phi: &ChainMap) -> CoMappingCone {
    let (k, l) = (&phi.source, &phi.target);
    let (lo, hi) = union_range(k, l, 0, -1);
    let m = Complex::from_fn(
        lo,
        hi,
        |q| k.dim(q) + l.dim(q - 1),
        |q| {
            let mut d = Matrix::zeros(k.dim(q + 1) + l.dim(q), k.dim(q) + l.dim(q - 1));
            d.put(0, 0, &k.d(q));
            d.put(k.dim(q + 1), 0, &phi.comp(q));
            d.put(k.dim(q + 1), k.dim(q), &(-&l.d(q - 1)));
            d
        },
    )
    .expect("co-mapping cone is a complex");
    let alpha_star = ChainMap::new(m.clone(), k.clone(), |q| {
        Matrix::hstack(&[&Matrix::identity(k.dim(q)), &Matrix::zeros(k.dim(q), l.dim(q - 1))])
    })
    .expect("α* is a chain map");
    let beta_star = ChainMap::new(shift(l, -1), m.clone(), |q| {
        Matrix::vstack(&[&Matrix::zeros(k.dim(q), l.dim(q - 1)), &Matrix::identity(l.dim(q - 1))])
    })
    .expect("β* is a chain map");
    CoMappingCone { m, alpha_star, beta_star }
}

#[derive(Clone, Debug)]
pub struct MappingCone {
    pub m: Complex,
    pub alpha: ChainMap,
    pub beta: ChainMap,
}

/// `M(φ)^q = K^{q+1} ⊕ L^q`, `d(x,y) = (-dx, φx + dy)`.
pub fn mapping_cone(phi: &ChainMap) -> MappingCone {
    let (k, l) = (&phi.source, &phi.target);
    let (lo, hi) = union_range(k, l, 1, 0);
    let m = Complex::from_fn(
        lo,
        hi,
        |q| k.dim(q + 1) + l.dim(q),
        |q| {
            let mut d = Matrix::zeros(k.dim(q + 2) + l.dim(q + 1), k.dim(q + 1) + l.dim(q));
            d.put(0, 0, &(-&k.d(q + 1)));
            d.put(k.dim(q + 2), 0, &phi.comp(q + 1));
            d.put(k.dim(q + 2), k.dim(q + 1), &l.d(q));
            d
        },
    )
    .expect("mapping cone is a complex");
    let alpha = ChainMap::new(l.clone(), m.clone(), |q| {
        Matrix::vstack(&[&Matrix::zeros(k.dim(q + 1), l.dim(q)), &Matrix::identity(l.dim(q))])
    })
    .expect("α is a chain map");
    let beta = ChainMap::new(m.clone(), shift(k, 1), |q| {
        Matrix::hstack(&[&Matrix::identity(k.dim(q + 1)), &Matrix::zeros(k.dim(q + 1), l.dim(q))])
    })
    .expect("β is a chain map");
    MappingCone { m, alpha, beta }
}

/// Swaps the two summands of a matrix acting between two-block spaces.
fn swap_blocks(m: &Matrix, rows: (usize, usize), cols: (usize, usize)) -> Matrix {
    let rp: Vec<usize> = (rows.0..rows.0 + rows.1).chain(0..rows.0).collect();
    let cp: Vec<usize> = (cols.0..cols.0 + cols.1).chain(0..cols.0).collect();
    m.select_rows(&rp).select_cols(&cp)
}

/// Compares `M*(φ*)` with the transpose of `M(φ)`, identifying
/// `M*(φ*)^q = (L^{-q})* ⊕ (K^{1-q})*` with `(M(φ)^{-q})*` after reversing the summands.
pub fn transpose_duality_check(phi: &ChainMap) -> bool {
    let (k, l) = (&phi.source, &phi.target);
    let cone = mapping_cone(phi);
    let co = co_mapping_cone(&phi.dual());
    let (lo, hi) = span(co.m.range(), (-cone.m.hi() - 1, -cone.m.lo() + 1));
    for q in lo..=hi {
        if co.m.dim(q) != cone.m.dim(-q) {
            return false;
        }
        // (d_{M(φ)}^{-q-1})ᵀ : (K^{1-q} ⊕ L^{-q})* → (K^{-q} ⊕ L^{-q-1})*
        let t = cone.m.d(-q - 1).transpose();
        let swapped = swap_blocks(&t, (k.dim(-q), l.dim(-q - 1)), (k.dim(1 - q), l.dim(-q)));
        if co.m.d(q) != swapped {
            return false;
        }
        // α*: M*(φ*) → L*, against αᵀ
        let a = cone.alpha.comp(-q).transpose();
        if co.alpha_star.comp(q) != swap_blocks(&a, (0, l.dim(-q)), (k.dim(1 - q), l.dim(-q))) {
            return false;
        }
        // β*: K*[-1] → M*(φ*), against βᵀ
        let b = cone.beta.comp(-q).transpose();
        if co.beta_star.comp(q) != swap_blocks(&b, (k.dim(1 - q), l.dim(-q)), (0, k.dim(1 - q))) {
            return false;
        }
    }
    true
}

/// A long exact sequence of finite-dimensional spaces; `maps[i]` goes from node `i` to node `i+1`.
#[derive(Clone, Debug)]
pub struct ExactSequence {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl ExactSequence {
    pub fn new() -> Self {
        ExactSequence {
            labels: Vec::new(),
            dims: Vec::new(),
            maps: Vec::new(),
        }
    }

    pub fn push_node(&mut self, label: impl Into<String>, dim: usize) {
        self.labels.push(label.into());
        self.dims.push(dim);
    }

    pub fn push_map(&mut self, m: Matrix) {
        self.maps.push(m);
    }

    /// Labels of interior nodes where `ker ≠ im`, plus shape errors.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            if m.shape() != (self.dims[i + 1], self.dims[i]) {
                out.push(format!("map {} → {} has wrong shape", self.labels[i], self.labels[i + 1]));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 1..self.maps.len() {
            if image(&self.maps[i - 1]) != kernel(&self.maps[i]) {
                out.push(self.labels[i].clone());
            }
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.failures().is_empty()
    }
}

impl Default for ExactSequence {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub lo: i32,
    pub hi: i32,
    /// `H^q(ι)` keyed by `q`.
    pub iota: BTreeMap<i32, Matrix>,
    /// `H^q(φ)` keyed by `q`.
    pub phi: BTreeMap<i32, Matrix>,
    /// `δ : H^q(L) → H^{q+1}(J)` keyed by `q`.
    pub delta: BTreeMap<i32, Matrix>,
    pub sequence: ExactSequence,
}

impl LongExactSequence {
    pub fn is_exact(&self) -> bool {
        self.sequence.is_exact()
    }
}

/// Checks degreewise exactness of `0 → J → K → L → 0`.
pub fn check_short_exact(iota: &ChainMap, phi: &ChainMap) -> Result<(), HomAlgError> {
    if iota.target != phi.source {
        return Err(HomAlgError::Shape("ι and φ do not share the middle complex".into()));
    }
    for q in iota.degrees().chain(phi.degrees()) {
        let (i, p) = (iota.comp(q), phi.comp(q));
        let fail = |reason: &str| {
            Err(HomAlgError::NotExact {
                degree: q,
                reason: reason.into(),
            })
        };
        if i.rank() != i.cols() {
            return fail("ι is not injective");
        }
        if p.rank() != p.rows() {
            return fail("φ is not surjective");
        }
        if image(&i) != kernel(&p) {
            return fail("im ι ≠ ker φ");
        }
    }
    Ok(())
}

/// The connecting map `H^q(L) → H^{q+1}(J)`: lift, differentiate, pull back along ι.
pub fn connecting_map(iota: &ChainMap, phi: &ChainMap, q: i32) -> Matrix {
    let hl = phi.target.cohomology(q);
    let hj = iota.source.cohomology(q + 1);
    let mut out = Matrix::zeros(hj.dim, hl.dim);
    for c in 0..hl.dim {
        let y = hl.reps.column(c);
        let x = solve(&phi.comp(q), &y).expect("φ is surjective");
        let dx = phi.source.d(q).mul_vec(&x);
        let z = solve(&iota.comp(q + 1), &dx).expect("d x lies in the image of ι");
        let class = hj.class_of(&z).expect("the pulled-back element is a cocycle");
        for (r, v) in class.into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    out
}

pub fn les_from_ses(iota: &ChainMap, phi: &ChainMap) -> Result<LongExactSequence, HomAlgError> {
    check_short_exact(iota, phi)?;
    let (j, k, l) = (&iota.source, &iota.target, &phi.target);
    let (lo, hi) = span(span(j.range(), k.range()), l.range());
    let (lo, hi) = (lo - 1, hi + 1);
    let mut seq = ExactSequence::new();
    let (mut im, mut pm, mut dm) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for q in lo..=hi {
        let (hi_, hp, hd) = (iota.on_cohomology(q), phi.on_cohomology(q), connecting_map(iota, phi, q));
        seq.push_node(format!("H^{q}(J)"), j.cohomology(q).dim);
        seq.push_map(hi_.clone());
        seq.push_node(format!("H^{q}(K)"), k.cohomology(q).dim);
        seq.push_map(hp.clone());
        seq.push_node(format!("H^{q}(L)"), l.cohomology(q).dim);
        if q < hi {
            seq.push_map(hd.clone());
        }
        im.insert(q, hi_);
        pm.insert(q, hp);
        dm.insert(q, hd);
    }
    Ok(LongExactSequence {
        lo,
        hi,
        iota: im,
        phi: pm,
        delta: dm,
        sequence: seq,
    })
}

/// A homotopy `h^q : K^q → L^{q-1}` with `φ^q = d_L h^q + h^{q+1} d_K`, found by one linear solve.
pub fn homotopy_to_zero(phi: &ChainMap) -> Option<BTreeMap<i32, Matrix>> {
    let (k, l) = (&phi.source, &phi.target);
    let (lo, hi) = (phi.degrees().start() - 1, phi.degrees().end() + 1);
    // Unknown block for each degree q: entries of h^q, row-major.
    let mut offsets = BTreeMap::new();
    let mut n = 0;
    for q in lo..=hi {
        offsets.insert(q, n);
        n += l.dim(q - 1) * k.dim(q);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs = Vec::new();
    for q in lo..=hi {
        let (dl, dk, f) = (l.d(q - 1), k.d(q), phi.comp(q));
        for i in 0..l.dim(q) {
            for jj in 0..k.dim(q) {
                let mut row = vec![Scalar::zero(); n];
                // (d_L h^q)[i,jj] = Σ_t dl[i,t] h^q[t,jj]
                for t in 0..l.dim(q - 1) {
                    let c = dl.get(i, t);
                    if !c.is_zero() {
                        row[offsets[&q] + t * k.dim(q) + jj] += c;
                    }
                }
                // (h^{q+1} d_K)[i,jj] = Σ_t h^{q+1}[i,t] dk[t,jj]
                if q < hi {
                    for t in 0..k.dim(q + 1) {
                        let c = dk.get(t, jj);
                        if !c.is_zero() {
                            row[offsets[&(q + 1)] + i * k.dim(q + 1) + t] += c;
                        }
                    }
                }
                rows.push(row);
                rhs.push(f.get(i, jj).clone());
            }
        }
    }
    let sol = if rows.is_empty() {
        vec![Scalar::zero(); n]
    } else {
        solve(&Matrix::from_rows(rows).expect("rectangular system"), &rhs)?
    };
    let mut out = BTreeMap::new();
    for q in lo..=hi {
        let (r, c) = (l.dim(q - 1), k.dim(q));
        let mut h = Matrix::zeros(r, c);
        for a in 0..r {
            for b in 0..c {
                h.set(a, b, sol[offsets[&q] + a * c + b].clone());
            }
        }
        out.insert(q, h);
    }
    Some(out)
}

/// Checks a candidate homotopy against `φ = d h + h d`.
pub fn is_homotopy(phi: &ChainMap, h: &BTreeMap<i32, Matrix>) -> bool {
    let (k, l) = (&phi.source, &phi.target);
    let get = |q: i32| h.get(&q).cloned().unwrap_or_else(|| Matrix::zeros(l.dim(q - 1), k.dim(q)));
    phi.degrees().all(|q| {
        let lhs = &(&l.d(q - 1) * &get(q)) + &(&get(q + 1) * &k.d(q));
        lhs == phi.comp(q)
    })
}

/// `μ: M*(φ) → M*(φ')`, `(x,y) ↦ (κx, λy)`, for a commuting square `λφ = φ'κ`.
pub fn cone_functoriality(kappa: &ChainMap, lambda: &ChainMap, phi: &ChainMap, phi_prime: &ChainMap) -> Result<ChainMap, HomAlgError> {
    for q in phi.degrees().chain(phi_prime.degrees()) {
        if &lambda.comp(q) * &phi.comp(q) != &phi_prime.comp(q) * &kappa.comp(q) {
            return Err(HomAlgError::Square(q));
        }
    }
    let a = co_mapping_cone(phi);
    let b = co_mapping_cone(phi_prime);
    ChainMap::new(a.m, b.m, |q| Matrix::block_diag(&[&kappa.comp(q), &lambda.comp(q - 1)]))
}

/// `ρ: J → M*(φ)`, `z ↦ (ιz, 0)`; checks that it is a qis with `α* ρ = ι`.
pub fn ses_cone_rho(iota: &ChainMap, phi: &ChainMap) -> Result<ChainMap, HomAlgError> {
    check_short_exact(iota, phi)?;
    let cone = co_mapping_cone(phi);
    let l = &phi.target;
    let rho = ChainMap::new(iota.source.clone(), cone.m.clone(), |q| {
        Matrix::vstack(&[&iota.comp(q), &Matrix::zeros(l.dim(q - 1), iota.source.dim(q))])
    })?;
    let back = cone.alpha_star.compose(&rho)?;
    for q in back.degrees() {
        if back.comp(q) != iota.comp(q) {
            return Err(HomAlgError::Square(q));
        }
    }
    if !rho.is_quasi_iso() {
        return Err(HomAlgError::NotExact {
            degree: 0,
            reason: "ρ is not a quasi-isomorphism".into(),
        });
    }
    Ok(rho)
}

/// `h = H(β*) then H(ρ)^{-1}`, as a map `H^q(L) = H^{q+1}(L[-1]) → H^{q+1}(J)`.
pub fn cotriangle_h(iota: &ChainMap, phi: &ChainMap, q: i32) -> Result<Matrix, HomAlgError> {
    let rho = ses_cone_rho(iota, phi)?;
    let cone = co_mapping_cone(phi);
    let hb = cone.beta_star.on_cohomology(q + 1);
    let hr = rho.on_cohomology(q + 1);
    let inv = hr.inverse().ok_or(HomAlgError::NotExact {
        degree: q + 1,
        reason: "H(ρ) not invertible".into(),
    })?;
    Ok(&inv * &hb)
}

/// A first-quadrant-style double complex with horizontal `h: (p,q) → (p+1,q)` and
/// vertical `v: (p,q) → (p,q+1)` that commute; its total differential is `h + (-1)^p v`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub dims: BTreeMap<(i32, i32), usize>,
    pub horizontal: BTreeMap<(i32, i32), Matrix>,
    pub vertical: BTreeMap<(i32, i32), Matrix>,
}

impl DoubleComplex {
    pub fn new() -> Self {
        DoubleComplex {
            dims: BTreeMap::new(),
            horizontal: BTreeMap::new(),
            vertical: BTreeMap::new(),
        }
    }

    pub fn dim(&self, p: i32, q: i32) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    fn h(&self, p: i32, q: i32) -> Matrix {
        self.horizontal
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p + 1, q), self.dim(p, q)))
    }

    fn v(&self, p: i32, q: i32) -> Matrix {
        self.vertical
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p, q + 1), self.dim(p, q)))
    }

    /// Bidegrees of total degree `n`, ordered by increasing first index.
    pub fn components(&self, n: i32) -> Vec<(i32, i32)> {
        self.dims.keys().filter(|(p, q)| p + q == n).copied().collect()
    }

    /// Offset of the `(p,q)` block inside the total space of degree `p+q`.
    pub fn offset(&self, p: i32, q: i32) -> usize {
        self.components(p + q)
            .iter()
            .take_while(|&&(a, _)| a < p)
            .map(|&(a, b)| self.dim(a, b))
            .sum()
    }

    pub fn total_dim(&self, n: i32) -> usize {
        self.components(n).iter().map(|&(p, q)| self.dim(p, q)).sum()
    }

    pub fn total_range(&self) -> (i32, i32) {
        let lo = self.dims.keys().map(|(p, q)| p + q).min().unwrap_or(0);
        let hi = self.dims.keys().map(|(p, q)| p + q).max().unwrap_or(-1);
        (lo, hi)
    }

    /// Total complex over total degrees `[lo, top]`; the differential out of `top` is zero.
    pub fn total(&self, top: Option<i32>) -> Result<Complex, HomAlgError> {
        let (lo, hi) = self.total_range();
        let hi = top.map_or(hi, |t| t.min(hi));
        Complex::from_fn(lo, hi, |n| self.total_dim(n), |n| self.total_d(n))
    }

    pub fn total_d(&self, n: i32) -> Matrix {
        let mut d = Matrix::zeros(self.total_dim(n + 1), self.total_dim(n));
        for (p, q) in self.components(n) {
            let c = self.offset(p, q);
            if self.dims.contains_key(&(p + 1, q)) {
                d.add_at(self.offset(p + 1, q), c, &self.h(p, q));
            }
            if self.dims.contains_key(&(p, q + 1)) {
                d.add_at(self.offset(p, q + 1), c, &self.v(p, q).scale(&sign_scalar(p)));
            }
        }
        d
    }

    /// Embeds a vector of the `(p,q)` block into the total space.
    pub fn embed(&self, p: i32, q: i32, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.total_dim(p + q)];
        let o = self.offset(p, q);
        out[o..o + v.len()].clone_from_slice(v);
        out
    }

    /// The `(p,q)` block of a total vector of degree `p+q`.
    pub fn block(&self, p: i32, q: i32, v: &[Scalar]) -> Vec<Scalar> {
        let o = self.offset(p, q);
        v[o..o + self.dim(p, q)].to_vec()
    }

    /// Matrix embedding the `(p,q)` block into the total space.
    pub fn inclusion(&self, p: i32, q: i32) -> Matrix {
        let mut m = Matrix::zeros(self.total_dim(p + q), self.dim(p, q));
        m.put(self.offset(p, q), 0, &Matrix::identity(self.dim(p, q)));
        m
    }

    pub fn commutes(&self) -> bool {
        self.dims
            .keys()
            .all(|&(p, q)| &self.h(p, q + 1) * &self.v(p, q) == &self.v(p + 1, q) * &self.h(p, q))
    }
}

impl Default for DoubleComplex {
    fn default() -> Self {
        Self::new()
    }
}

pub(crate) fn is_invertible(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}
