//! Čech complexes of sheaves and sheaf complexes on pairs of coverings, the total
//! complex `D = δ̌ + (-1)^{q₁} d`, and the cochain-level formulas that compare it
//! with sections: homotopies, partitions of unity, the two-set relative complex,
//! excision, triples and the Leray comparison.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::finspace::{FinSpace, PointSet, Sections, Sheaf, SheafComplex, SpaceError};
use crate::godement::{godement_resolve, iso_through, open_embedding_complex, rel_cohomology_on, GodementError};
use crate::homalg::{connecting_map, is_invertible, les_from_ses, ChainMap, Complex, DoubleComplex, ExactSequence, HomAlgError};
use crate::ratlin::{solve, Matrix, Scalar};
use crate::verdict::VerificationReport;

/// Highest Čech degree built in full-ordered mode.
pub const FULL_MODE_DEGREES: i32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("not a covering: {0}")]
    NotCovering(String),
    #[error("no covering set equals the whole space")]
    NoFullSet,
    #[error("the cochain is not a cocycle")]
    NotCocycle,
    #[error("the cochain is not a coboundary")]
    NotCoboundary,
    #[error("coefficients are not of product type: {0}")]
    NotProductType(String),
    #[error("this construction needs an absolute covering")]
    NotAbsolute,
    #[error("this construction needs a covering by two sets")]
    NotTwoSet,
    #[error("hypothesis fails: {0}")]
    HypothesisFailed(String),
    #[error("{0} is not closed")]
    NotClosed(String),
    #[error("{0} does not contain {1}")]
    NotContaining(String, String),
    #[error("identity failed: {0}")]
    Identity(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    HomAlg(#[from] HomAlgError),
    #[error(transparent)]
    Godement(#[from] GodementError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CochainMode {
    /// Strictly increasing index tuples.
    Alternating,
    /// All index tuples, up to Čech degree [`FULL_MODE_DEGREES`].
    Full,
}

/// A covering `{W_α}` of an open `ground` with a subfamily `I'` covering `sub_ground`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringPair {
    pub space: Arc<FinSpace>,
    pub ground: PointSet,
    pub opens: Vec<PointSet>,
    pub sub_index: Vec<usize>,
    pub sub_ground: PointSet,
}

impl CoveringPair {
    /// A pair of coverings of `(X, X')`, with `X'` the union of the sets in `sub_index`.
    pub fn new(space: Arc<FinSpace>, opens: Vec<PointSet>, sub_index: Vec<usize>) -> Result<Self, CechError> {
        let ground = space.all();
        Self::on(space, ground, opens, sub_index)
    }

    pub fn absolute(space: Arc<FinSpace>, opens: Vec<PointSet>) -> Result<Self, CechError> {
        Self::new(space, opens, Vec::new())
    }

    /// A covering of the open set `ground`.
    pub fn on(space: Arc<FinSpace>, ground: PointSet, opens: Vec<PointSet>, mut sub_index: Vec<usize>) -> Result<Self, CechError> {
        space.check_open(ground)?;
        for &w in &opens {
            space.check_open(w)?;
            if !w.is_subset(ground) {
                return Err(CechError::NotCovering(format!(
                    "{} is not inside {}",
                    space.describe(w),
                    space.describe(ground)
                )));
            }
        }
        let union = opens.iter().fold(PointSet::EMPTY, |a, &b| a.union(b));
        if union != ground {
            return Err(CechError::NotCovering(format!(
                "the sets cover {} rather than {}",
                space.describe(union),
                space.describe(ground)
            )));
        }
        sub_index.sort_unstable();
        sub_index.dedup();
        if let Some(&bad) = sub_index.iter().find(|&&a| a >= opens.len()) {
            return Err(CechError::NotCovering(format!("sub-index {bad} is out of range")));
        }
        let sub_ground = sub_index.iter().fold(PointSet::EMPTY, |a, &i| a.union(opens[i]));
        Ok(CoveringPair {
            space,
            ground,
            opens,
            sub_index,
            sub_ground,
        })
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn is_absolute(&self) -> bool {
        self.sub_index.is_empty()
    }

    pub fn in_sub(&self, a: usize) -> bool {
        self.sub_index.binary_search(&a).is_ok()
    }

    pub fn intersection(&self, t: &[usize]) -> PointSet {
        t.iter().fold(self.ground, |acc, &a| acc.intersection(self.opens[a]))
    }

    /// The same covering with no sub-family.
    pub fn to_absolute(&self) -> CoveringPair {
        CoveringPair {
            sub_index: Vec::new(),
            sub_ground: PointSet::EMPTY,
            ..self.clone()
        }
    }

    /// The subfamily `keep` as a covering of its union, with relative indices `sub`
    /// given as positions in the original indexing.
    pub fn subfamily(&self, keep: &[usize], sub: &[usize]) -> Result<CoveringPair, CechError> {
        let opens: Vec<PointSet> = keep.iter().map(|&a| self.opens[a]).collect();
        let ground = opens.iter().fold(PointSet::EMPTY, |a, &b| a.union(b));
        let sub_pos = sub
            .iter()
            .map(|s| {
                keep.iter()
                    .position(|k| k == s)
                    .ok_or_else(|| CechError::NotCovering(format!("{s} is not kept")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CoveringPair::on(self.space.clone(), ground, opens, sub_pos)
    }

    /// Index tuples of Čech degree `q1`, omitting those entirely inside `I'`.
    pub fn tuples(&self, q1: i32, mode: CochainMode) -> Vec<Vec<usize>> {
        let n = self.len();
        let len = q1 as usize + 1;
        let all: Vec<Vec<usize>> = match mode {
            CochainMode::Alternating => itertools::Itertools::combinations(0..n, len).collect(),
            CochainMode::Full => itertools::Itertools::multi_cartesian_product((0..len).map(|_| 0..n)).collect(),
        };
        all.into_iter().filter(|t| !t.iter().all(|&a| self.in_sub(a))).collect()
    }

    pub fn max_cech_degree(&self, mode: CochainMode) -> i32 {
        match mode {
            CochainMode::Alternating => self.len() as i32 - 1,
            CochainMode::Full => FULL_MODE_DEGREES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleBlock {
    pub tuple: Vec<usize>,
    pub offset: usize,
    pub dim: usize,
}

/// The double complex `C^{q₁}(W, W'; K^{q₂})` and its total complex.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub pair: CoveringPair,
    pub coefficients: SheafComplex,
    pub mode: CochainMode,
    pub double: DoubleComplex,
    pub total: Complex,
    blocks: BTreeMap<(i32, i32), Vec<TupleBlock>>,
    sections: BTreeMap<(i32, PointSet), Sections>,
}

/// The Čech complex `C•(W, W'; S)` of a single sheaf.
pub fn cech_complex(pair: &CoveringPair, s: &Sheaf, mode: CochainMode) -> Result<CechComplex, CechError> {
    total_complex(pair, &SheafComplex::single(s.clone()), mode)
}

pub fn total_complex(pair: &CoveringPair, k: &SheafComplex, mode: CochainMode) -> Result<CechComplex, CechError> {
    if k.space() != &pair.space {
        return Err(SpaceError::DifferentSpaces.into());
    }
    let top = k.top();
    let max_q1 = pair.max_cech_degree(mode);
    let mut sections = BTreeMap::new();
    let mut blocks = BTreeMap::new();
    let mut double = DoubleComplex::new();
    for q1 in 0..=max_q1 {
        let tuples = pair.tuples(q1, mode);
        for q2 in 0..=top {
            let term = k.term(q2);
            let mut off = 0;
            let mut list = Vec::with_capacity(tuples.len());
            for t in &tuples {
                let w = pair.intersection(t);
                let sec = sections
                    .entry((q2, w))
                    .or_insert_with(|| term.relative_sections(w, PointSet::EMPTY).expect("absolute"));
                list.push(TupleBlock {
                    tuple: t.clone(),
                    offset: off,
                    dim: sec.dim(),
                });
                off += sec.dim();
            }
            double.dims.insert((q1, q2), off);
            blocks.insert((q1, q2), list);
        }
    }
    let mut c = CechComplex {
        pair: pair.clone(),
        coefficients: k.clone(),
        mode,
        double,
        total: Complex::zero(),
        blocks,
        sections,
    };
    for q1 in 0..=max_q1 {
        for q2 in 0..=top {
            if q1 < max_q1 {
                let h = c.cech_differential(q1, q2);
                c.double.horizontal.insert((q1, q2), h);
            }
            if q2 < top {
                let d = k.d(q2);
                let mut v = Matrix::zeros(c.double.dim(q1, q2 + 1), c.double.dim(q1, q2));
                for (src, tgt) in c.blocks[&(q1, q2)].iter().zip(&c.blocks[&(q1, q2 + 1)]) {
                    let w = pair.intersection(&src.tuple);
                    v.put(
                        tgt.offset,
                        src.offset,
                        &d.on_sections(&c.sections[&(q2, w)], &c.sections[&(q2 + 1, w)]),
                    );
                }
                c.double.vertical.insert((q1, q2), v);
            }
        }
    }
    debug_assert!(c.double.commutes());
    c.total = c.double.total(None)?;
    Ok(c)
}

impl CechComplex {
    fn cech_differential(&self, q1: i32, q2: i32) -> Matrix {
        let term = self.coefficients.term(q2);
        let mut h = Matrix::zeros(self.double.dim(q1 + 1, q2), self.double.dim(q1, q2));
        for tb in &self.blocks[&(q1 + 1, q2)] {
            let to = self.section_space(q2, &tb.tuple);
            for nu in 0..tb.tuple.len() {
                let mut face = tb.tuple.clone();
                face.remove(nu);
                if let Some(src) = self.exact_block(q1, q2, &face) {
                    let r = term.restriction(self.section_space(q2, &face), to);
                    let r = if nu % 2 == 0 { r } else { -&r };
                    h.add_at(tb.offset, src.offset, &r);
                }
            }
        }
        h
    }

    /// Sections of `K^{q2}` over `W_t`.
    pub fn section_space(&self, q2: i32, t: &[usize]) -> &Sections {
        &self.sections[&(q2, self.pair.intersection(t))]
    }

    pub fn blocks(&self, q1: i32, q2: i32) -> &[TupleBlock] {
        self.blocks.get(&(q1, q2)).map_or(&[], |v| v.as_slice())
    }

    pub fn exact_block(&self, q1: i32, q2: i32, t: &[usize]) -> Option<&TupleBlock> {
        self.blocks.get(&(q1, q2))?.iter().find(|b| b.tuple == t)
    }

    /// The stored block for an arbitrary tuple together with the sign relating the
    /// two; `None` when the component vanishes identically.
    pub fn lookup(&self, q1: i32, q2: i32, t: &[usize]) -> Option<(&TupleBlock, i64)> {
        match self.mode {
            CochainMode::Full => self.exact_block(q1, q2, t).map(|b| (b, 1)),
            CochainMode::Alternating => {
                let mut s = t.to_vec();
                let mut sign = 1;
                for i in 0..s.len() {
                    for j in 0..s.len() - 1 - i {
                        if s[j] > s[j + 1] {
                            s.swap(j, j + 1);
                            sign = -sign;
                        } else if s[j] == s[j + 1] {
                            return None;
                        }
                    }
                }
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                self.exact_block(q1, q2, &s).map(|b| (b, sign))
            }
        }
    }

    /// Offset of the `t` component inside the total space of degree `q1 + q2`.
    pub fn total_offset(&self, q1: i32, q2: i32, b: &TupleBlock) -> usize {
        self.double.offset(q1, q2) + b.offset
    }

    /// The `t` component of a total cochain of degree `q1 + q2`, in section coordinates.
    pub fn component(&self, v: &[Scalar], q1: i32, q2: i32, t: &[usize]) -> Vec<Scalar> {
        match self.lookup(q1, q2, t) {
            None => vec![Scalar::zero(); self.section_space(q2, t).dim()],
            Some((b, sign)) => {
                let o = self.total_offset(q1, q2, b);
                v[o..o + b.dim]
                    .iter()
                    .map(|x| if sign < 0 { -x.clone() } else { x.clone() })
                    .collect()
            }
        }
    }

    pub fn set_component(&self, v: &mut [Scalar], q1: i32, q2: i32, t: &[usize], value: &[Scalar]) {
        let b = self.exact_block(q1, q2, t).expect("stored tuple");
        let o = self.total_offset(q1, q2, b);
        v[o..o + b.dim].clone_from_slice(value);
    }

    /// Highest total degree whose cohomology is unaffected by truncation.
    pub fn valid_top(&self) -> i32 {
        match self.mode {
            CochainMode::Alternating => self.total.hi(),
            CochainMode::Full => FULL_MODE_DEGREES - 1,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.valid_top()).map(|q| self.total.cohomology(q).dim).collect()
    }

    /// `φ: K•(X, X') → K•(W, W')`, `s ↦ (s|_{W_α})_α` in Čech degree 0.
    pub fn phi_cover(&self) -> Result<ChainMap, CechError> {
        let k = &self.coefficients;
        let (src, secs) = k.sections_complex(self.pair.ground, self.pair.sub_ground)?;
        Ok(ChainMap::new(src, self.total.clone(), |q| {
            let mut m = Matrix::zeros(self.total.dim(q), secs[q as usize].dim());
            for b in self.blocks(0, q) {
                let r = k.term(q).restriction(&secs[q as usize], self.section_space(q, &b.tuple));
                m.put(self.total_offset(0, q, b), 0, &r);
            }
            m
        })?)
    }

    /// `ψ: C•(W, W'; S) → K•(W, W')` for `S = ker d⁰`, through `C^q(W, W'; K⁰)`.
    pub fn psi_cover(&self) -> Result<(CechComplex, ChainMap), CechError> {
        let (s, iota) = self.coefficients.kernel_of_d0();
        let cs = cech_complex(&self.pair, &s, self.mode)?;
        let map = ChainMap::new(cs.total.clone(), self.total.clone(), |q| {
            let mut m = Matrix::zeros(self.total.dim(q), cs.total.dim(q));
            for (b, sb) in self.blocks(q, 0).iter().zip(cs.blocks(q, 0)) {
                let c = iota.on_sections(cs.section_space(0, &sb.tuple), self.section_space(0, &b.tuple));
                m.put(self.total_offset(q, 0, b), cs.total_offset(q, 0, sb), &c);
            }
            m
        })?;
        Ok((cs, map))
    }
}

/// The chain map `K•(A) → K•(B)` between Čech complexes with the same
/// coefficients, where index `i` of `B` corresponds to `f[i]` in `A` and
/// `B.opens[i] ⊆ A.opens[f[i]]`; components are restricted, and those absent
/// from `A` are zero.
pub fn tuple_map(a: &CechComplex, b: &CechComplex, f: &[usize]) -> Result<ChainMap, CechError> {
    if a.coefficients != b.coefficients || a.mode != b.mode {
        return Err(CechError::NotCovering("tuple maps need equal coefficients and modes".into()));
    }
    for (i, &fi) in f.iter().enumerate() {
        if !b.pair.opens[i].is_subset(a.pair.opens[fi]) {
            return Err(CechError::NotCovering(format!("set {i} is not inside set {fi}")));
        }
    }
    let k = &a.coefficients;
    Ok(ChainMap::new(a.total.clone(), b.total.clone(), |n| {
        let mut m = Matrix::zeros(b.total.dim(n), a.total.dim(n));
        for (q1, q2) in b.double.components(n) {
            for tb in b.blocks(q1, q2) {
                let src: Vec<usize> = tb.tuple.iter().map(|&i| f[i]).collect();
                if let Some((sb, sign)) = a.lookup(q1, q2, &src) {
                    let r = k.term(q2).restriction(a.section_space(q2, &src), b.section_space(q2, &tb.tuple));
                    let r = if sign < 0 { -&r } else { r };
                    m.put(b.total_offset(q1, q2, tb), a.total_offset(q1, q2, sb), &r);
                }
            }
        }
        m
    })?)
}

/// `η` with `ξ − φ(ξ_α) = Dη`, where `W_α` is the whole space and
/// `η_{α₀…α_p} = ξ_{α α₀…α_p}`.
pub fn full_set_homotopy(c: &CechComplex, xi: &[Scalar], q: i32) -> Result<Vec<Scalar>, CechError> {
    if !c.pair.is_absolute() {
        return Err(CechError::NotAbsolute);
    }
    let alpha = c.pair.opens.iter().position(|&w| w == c.pair.ground).ok_or(CechError::NoFullSet)?;
    if xi.len() != c.total.dim(q) || !c.total.d(q).mul_vec(xi).iter().all(Zero::is_zero) {
        return Err(CechError::NotCocycle);
    }
    let mut eta = vec![Scalar::zero(); c.total.dim(q - 1)];
    for p in 0..q {
        for b in c.blocks(p, q - 1 - p) {
            let mut t = vec![alpha];
            t.extend(&b.tuple);
            let v = c.component(xi, p + 1, q - 1 - p, &t);
            c.set_component(&mut eta, p, q - 1 - p, &b.tuple, &v);
        }
    }
    let xa = c.component(xi, 0, q, &[alpha]);
    let phi = c.phi_cover()?;
    let lhs: Vec<Scalar> = xi.iter().zip(phi.comp(q).mul_vec(&xa)).map(|(a, b)| a - b).collect();
    let rhs = c.total.d(q - 1).mul_vec(&eta);
    if lhs != rhs {
        return Err(CechError::Identity("ξ − ξ_α ≠ Dη".into()));
    }
    Ok(eta)
}

/// `K•(V, V')` for `V = {X', V₁}`, `V' = {X'}`: degree `q` is `K^q(V₁) ⊕ K^{q-1}(V₀₁)`
/// with `D(ξ₁, ξ₀₁) = (dξ₁, ξ₁ − dξ₀₁)`.
pub fn two_set_relative(k: &SheafComplex, v1: PointSet, x_prime: PointSet) -> Result<CechComplex, CechError> {
    let pair = CoveringPair::new(k.space().clone(), vec![x_prime, v1], vec![0])?;
    total_complex(&pair, k, CochainMode::Alternating)
}

/// `H^q_D(X, X')` with its long exact sequence
/// `H^{q-1}(X') → H^q_D(X, X') → H^q(X) → H^q(X')`.
#[derive(Clone, Debug)]
pub struct RelSectionsCohomology {
    pub dims: Vec<usize>,
    pub complex: CechComplex,
    pub sequence: ExactSequence,
    /// `δ` keyed by source degree.
    pub delta: BTreeMap<i32, Matrix>,
    pub report: VerificationReport,
}

pub fn rel_sections_cohomology(k: &SheafComplex, x_prime: PointSet) -> Result<RelSectionsCohomology, CechError> {
    let sp = k.space().clone();
    let x = sp.all();
    let rel = two_set_relative(k, x, x_prime)?;
    let abs_pair = rel.pair.to_absolute();
    let abs = total_complex(&abs_pair, k, CochainMode::Alternating)?;
    let sub_pair = abs_pair.subfamily(&[0], &[])?;
    let sub = total_complex(&sub_pair, k, CochainMode::Alternating)?;
    let jc = tuple_map(&rel, &abs, &[0, 1])?;
    let ic = tuple_map(&abs, &sub, &[0])?;
    les_from_ses(&jc, &ic)?;

    let kx = k.sections_over(x);
    let kxp = k.sections_over(x_prime);
    let mut report = VerificationReport::new();
    report.check("single-set covering complex equals sections over X'", sub.total == kxp, String::new);
    let emb = open_embedding_complex(k, x_prime)?;
    report.check(
        "two-set relative complex equals the open embedding complex",
        rel.total == emb.complex,
        String::new,
    );
    let j = ChainMap::new(rel.total.clone(), kx.clone(), |q| {
        let mut m = Matrix::zeros(kx.dim(q), rel.total.dim(q));
        if let Some(b) = rel.exact_block(0, q, &[1]) {
            m.put(0, rel.total_offset(0, q, b), &Matrix::identity(b.dim));
        }
        m
    })?;
    let i = k.restriction_map(x, PointSet::EMPTY, x_prime, PointSet::EMPTY)?;

    let (lo, hi) = (0, rel.total.hi());
    let mut seq = ExactSequence::new();
    let mut delta = BTreeMap::new();
    for q in lo..=hi {
        let d = connecting_map(&jc, &ic, q - 1);
        let minus_beta = -&emb.beta_star.on_cohomology(q);
        report.check(format!("connecting map is -beta* in degree {q}"), d == minus_beta, || {
            format!("{d} vs {minus_beta}")
        });
        if q > lo {
            seq.push_map(d.clone());
        }
        delta.insert(q - 1, d);
        seq.push_node(format!("H^{q}_D(X,X')"), rel.total.cohomology(q).dim);
        seq.push_map(j.on_cohomology(q));
        seq.push_node(format!("H^{q}(X)"), kx.cohomology(q).dim);
        seq.push_map(i.on_cohomology(q));
        seq.push_node(format!("H^{q}(X')"), kxp.cohomology(q).dim);
    }
    let failures = seq.failures();
    report.check("relative sections sequence exact", failures.is_empty(), || failures.join("; "));
    let dims = (0..=hi).map(|q| rel.total.cohomology(q).dim).collect();
    Ok(RelSectionsCohomology {
        dims,
        complex: rel,
        sequence: seq,
        delta,
        report,
    })
}

/// The restriction `K•(V*, V') → K•(V, V')` from `V* = {X', X}` to `V = {X', V₁}`
/// is a quasi-isomorphism. The comparison `H_d(X) ≅ H_D(V)` it rests on is audited first.
pub fn verify_neighborhood_independence(k: &SheafComplex, v1: PointSet, x_prime: PointSet) -> Result<VerificationReport, CechError> {
    let sp = k.space().clone();
    let closed = sp.all().minus(x_prime);
    if !closed.is_subset(v1) {
        return Err(CechError::NotContaining(sp.describe(v1), sp.describe(closed)));
    }
    let star = two_set_relative(k, sp.all(), x_prime)?;
    let v = two_set_relative(k, v1, x_prime)?;
    let v_abs = total_complex(&v.pair.to_absolute(), k, CochainMode::Alternating)?;
    let phi = v_abs.phi_cover()?;
    if !phi.is_quasi_iso() {
        return Err(CechError::HypothesisFailed(format!(
            "sections over X are not computed by the covering {{{}, {}}}",
            sp.describe(x_prime),
            sp.describe(v1)
        )));
    }
    let mut rep = VerificationReport::new();
    let r = tuple_map(&star, &v, &[0, 1])?;
    rep.check(
        format!("restriction to V1 = {} is a quasi-isomorphism", sp.describe(v1)),
        r.is_quasi_iso(),
        || format!("{:?} vs {:?}", star.dims(), v.dims()),
    );
    Ok(rep)
}

/// For a closed `S` inside an open `V`: the complexes of `{X∖S, V}` relative to
/// `{X∖S}` and of `{V∖S, V}` relative to `{V∖S}` coincide, and both compute
/// `H_D(X, X∖S)` and `H_D(V, V∖S)`.
pub fn excision(k: &SheafComplex, s_closed: PointSet, v: PointSet) -> Result<VerificationReport, CechError> {
    let sp = k.space().clone();
    if !sp.is_closed(s_closed) {
        return Err(CechError::NotClosed(sp.describe(s_closed)));
    }
    sp.check_open(v)?;
    if !s_closed.is_subset(v) {
        return Err(CechError::NotContaining(sp.describe(v), sp.describe(s_closed)));
    }
    let x = sp.all();
    let mut rep = VerificationReport::new();
    let left_pair = CoveringPair::new(sp.clone(), vec![x.minus(s_closed), v], vec![0])?;
    let right_pair = CoveringPair::on(sp.clone(), v, vec![v.minus(s_closed), v], vec![0])?;
    let left = total_complex(&left_pair, k, CochainMode::Alternating)?;
    let right = total_complex(&right_pair, k, CochainMode::Alternating)?;
    rep.check("cochain data over X and over V coincide", left.total == right.total, String::new);
    let star = two_set_relative(k, x, x.minus(s_closed))?;
    let r = tuple_map(&star, &left, &[0, 1])?;
    rep.check("restriction from X to V is a quasi-isomorphism", r.is_quasi_iso(), String::new);
    let a: Vec<usize> = star.dims();
    let b: Vec<usize> = right.dims();
    rep.check("excision dimensions agree", a == b, || format!("{a:?} vs {b:?}"));
    Ok(rep)
}

/// The triple sequence of `(X, X', X'')`, computed on the covering
/// `W = {X'', X', X}` with `W' = {X'', X'}` and `W'' = {X''}`.
#[derive(Clone, Debug)]
pub struct TripleSequence {
    pub sequence: ExactSequence,
    pub report: VerificationReport,
}

pub fn triple_les(k: &SheafComplex, x_prime: PointSet, x_second: PointSet) -> Result<TripleSequence, CechError> {
    let sp = k.space().clone();
    let x = sp.all();
    sp.check_open(x_prime)?;
    sp.check_open(x_second)?;
    if !x_second.is_subset(x_prime) {
        return Err(SpaceError::Containment(sp.describe(x_second), sp.describe(x_prime)).into());
    }
    let mode = CochainMode::Alternating;
    let w = CoveringPair::new(sp.clone(), vec![x_second, x_prime, x], vec![0, 1])?;
    let w2 = CoveringPair::new(sp.clone(), vec![x_second, x_prime, x], vec![0])?;
    let w12 = w.subfamily(&[0, 1], &[0])?;
    let (a, b, c) = (
        total_complex(&w, k, mode)?,
        total_complex(&w2, k, mode)?,
        total_complex(&w12, k, mode)?,
    );
    let j = tuple_map(&a, &b, &[0, 1, 2])?;
    let i = tuple_map(&b, &c, &[0, 1])?;
    let les = les_from_ses(&j, &i)?;
    let mut report = VerificationReport::new();
    let failures = les.sequence.failures();
    report.check("triple sequence exact", failures.is_empty(), || failures.join("; "));

    // δ[(θ₁, θ₀₁)] = [(0, 0, −θ₁, θ₀₁)] restricted to W₂.
    for q in 1..=a.total.hi() {
        let h = c.total.cohomology(q - 1);
        let ha = a.total.cohomology(q);
        let delta = &les.delta[&(q - 1)];
        let mut ok = true;
        for col in 0..h.dim {
            let theta = h.reps.column(col);
            let mut v = vec![Scalar::zero(); a.total.dim(q)];
            let t1 = c.component(&theta, 0, q - 1, &[1]);
            let t1r = k
                .term(q - 1)
                .restriction(c.section_space(q - 1, &[1]), a.section_space(q - 1, &[1, 2]))
                .mul_vec(&t1);
            a.set_component(&mut v, 1, q - 1, &[1, 2], &t1r.iter().map(|s| -s).collect::<Vec<_>>());
            if q >= 2 {
                let t01 = c.component(&theta, 1, q - 2, &[0, 1]);
                let r = k
                    .term(q - 2)
                    .restriction(c.section_space(q - 2, &[0, 1]), a.section_space(q - 2, &[0, 1, 2]));
                a.set_component(&mut v, 2, q - 2, &[0, 1, 2], &r.mul_vec(&t01));
            }
            ok &= ha.class_of(&v).is_some_and(|cls| cls == delta.column(col));
        }
        report.check(
            format!("connecting map is given by (0, 0, -theta1, theta01) in degree {q}"),
            ok,
            String::new,
        );
    }

    let pairs = [(x_prime, &a, vec![0, 0, 1]), (x_second, &b, vec![0, 1, 1])];
    for (sub, target, f) in pairs {
        let star = two_set_relative(k, x, sub)?;
        let m = tuple_map(&star, target, &f)?;
        report.check(
            format!("relative sections on (X, {}) match the three-set covering", sp.describe(sub)),
            m.is_quasi_iso(),
            String::new,
        );
    }
    let third = CoveringPair::on(sp.clone(), x_prime, vec![x_second, x_prime], vec![0])?;
    report.check(
        "third term is the relative sections complex of (X', X'')",
        total_complex(&third, k, mode)?.total == c.total,
        String::new,
    );
    Ok(TripleSequence {
        sequence: les.sequence,
        report,
    })
}

/// Block structure of a sheaf whose sections over every open are a product of
/// factors attached to points, as for Godement terms and their direct sums.
#[derive(Clone, Debug)]
pub struct ProductFactors {
    /// For each stalk and each layout block: `(point, offset, len, factor index at that point)`.
    pub blocks: Vec<Vec<(usize, usize, usize, usize)>>,
}

pub fn product_factors(g: &Sheaf) -> Result<ProductFactors, CechError> {
    let sp = g.space();
    let layout = g
        .layout()
        .ok_or_else(|| CechError::NotProductType("the sheaf carries no product layout".into()))?;
    let fail = |m: String| Err(CechError::NotProductType(m));
    let own: Vec<Vec<usize>> = (0..sp.len())
        .map(|z| {
            layout.blocks[z]
                .iter()
                .enumerate()
                .filter(|(_, b)| b.0 == z)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut blocks = Vec::with_capacity(sp.len());
    for x in 0..sp.len() {
        let total: usize = layout.blocks[x].iter().map(|b| b.2).sum();
        if total != g.stalk_dim(x) {
            return fail(format!("the layout at {} does not fill the stalk", sp.label(x)));
        }
        let mut list = Vec::new();
        for &(z, off, len) in &layout.blocks[x] {
            if !sp.leq(x, z) {
                return fail(format!("a block at {} belongs to {}", sp.label(x), sp.label(z)));
            }
            let r = g.res(x, z);
            let found = own[z].iter().position(|&j| {
                let (_, zo, zl) = layout.blocks[z][j];
                zl == len
                    && (0..len).all(|c| {
                        let col = r.column(off + c);
                        col.iter().enumerate().all(|(row, v)| {
                            if row == zo + c {
                                v == &Scalar::from_integer(1.into())
                            } else {
                                v.is_zero()
                            }
                        })
                    })
            });
            match found {
                Some(pos) => list.push((z, off, len, pos)),
                None => {
                    return fail(format!(
                        "block of {} at {} is not carried to {}",
                        sp.label(z),
                        sp.label(x),
                        sp.label(z)
                    ))
                }
            }
        }
        blocks.push(list);
    }
    // Restrictions must project onto the surviving factors.
    for x in 0..sp.len() {
        for y in sp.up(x).iter() {
            let mut expected = Matrix::zeros(g.stalk_dim(y), g.stalk_dim(x));
            for &(z, off, len, f) in &blocks[x] {
                if sp.leq(y, z) {
                    let &(_, oy, _, _) = blocks[y].iter().find(|b| b.0 == z && b.3 == f).expect("factor present");
                    expected.put(oy, off, &Matrix::identity(len));
                }
            }
            if &expected != g.res(x, y) {
                return fail(format!(
                    "restriction {} → {} is not a projection of factors",
                    sp.label(x),
                    sp.label(y)
                ));
            }
        }
    }
    Ok(ProductFactors { blocks })
}

impl ProductFactors {
    /// The value of factor `(y, f)` of a section with coordinates `c`.
    pub fn factor(&self, sec: &Sections, c: &[Scalar], y: usize, f: usize) -> Vec<Scalar> {
        let v = sec.basis().mul_vec(c);
        let &(_, off, len, _) = self.blocks[y].iter().find(|b| b.0 == y && b.3 == f).expect("own factor");
        let o = sec.offsets[&y];
        v[o + off..o + off + len].to_vec()
    }

    /// The section over `sec.open` whose factor `(y, f)` is `value(y, f)`.
    pub fn assemble(&self, sec: &Sections, value: impl Fn(usize, usize) -> Vec<Scalar>) -> Vec<Scalar> {
        let mut own: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for y in sec.open.iter() {
            for &(z, _, _, f) in &self.blocks[y] {
                if z == y {
                    own.insert((y, f), value(y, f));
                }
            }
        }
        let mut amb = vec![Scalar::zero(); sec.ambient];
        for x in sec.open.iter() {
            let o = sec.offsets[&x];
            for &(z, off, len, f) in &self.blocks[x] {
                let v = &own[&(z, f)];
                assert_eq!(v.len(), len, "factor length");
                amb[o + off..o + off + len].clone_from_slice(v);
            }
        }
        sec.space.coords(&amb).expect("a product of factors is a section")
    }
}

/// Assignment of every point to one covering set containing it; `ρ_α` keeps the
/// factors at points assigned to `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretePartitionOfUnity {
    pub assign: Vec<usize>,
}

impl DiscretePartitionOfUnity {
    /// Each point goes to the smallest index whose set contains it.
    pub fn smallest_index(pair: &CoveringPair) -> Self {
        let assign = (0..pair.space.len())
            .map(|x| (0..pair.len()).find(|&a| pair.opens[a].contains(x)).unwrap_or(usize::MAX))
            .collect();
        DiscretePartitionOfUnity { assign }
    }

    pub fn new(pair: &CoveringPair, assign: Vec<usize>) -> Result<Self, CechError> {
        if assign.len() != pair.space.len() {
            return Err(CechError::NotCovering("one assignment per point is required".into()));
        }
        for x in pair.ground.iter() {
            let a = assign[x];
            if a >= pair.len() || !pair.opens[a].contains(x) {
                return Err(CechError::NotCovering(format!(
                    "{} is not in its assigned set",
                    pair.space.label(x)
                )));
            }
        }
        Ok(DiscretePartitionOfUnity { assign })
    }
}

/// `τ_{α₀…α_{q-1}} = Σ_α ρ_α σ_{α α₀…α_{q-1}}` for a Čech cocycle `σ` of a
/// product-type sheaf; checks `δ̌τ = σ`.
pub fn pou_coboundary(c: &CechComplex, pou: &DiscretePartitionOfUnity, q: i32, sigma: &[Scalar]) -> Result<Vec<Scalar>, CechError> {
    if !c.pair.is_absolute() {
        return Err(CechError::NotAbsolute);
    }
    if c.coefficients.top() != 0 {
        return Err(CechError::NotProductType("a single coefficient sheaf is expected".into()));
    }
    let g = c.coefficients.term(0);
    let pf = product_factors(&g)?;
    if q < 1 || sigma.len() != c.total.dim(q) || !c.total.d(q).mul_vec(sigma).iter().all(Zero::is_zero) {
        return Err(CechError::NotCocycle);
    }
    let mut tau = vec![Scalar::zero(); c.total.dim(q - 1)];
    for b in c.blocks(q - 1, 0) {
        let sec = c.section_space(0, &b.tuple);
        let v = pf.assemble(sec, |y, f| {
            let mut t = vec![pou.assign[y]];
            t.extend(&b.tuple);
            let comp = c.component(sigma, q, 0, &t);
            pf.factor(c.section_space(0, &t), &comp, y, f)
        });
        c.set_component(&mut tau, q - 1, 0, &b.tuple, &v);
    }
    if c.total.d(q - 1).mul_vec(&tau) != sigma {
        return Err(CechError::Identity("δ̌τ ≠ σ".into()));
    }
    Ok(tau)
}

fn two_set_checks(c: &CechComplex) -> Result<Vec<ProductFactors>, CechError> {
    if !c.pair.is_absolute() {
        return Err(CechError::NotAbsolute);
    }
    if c.pair.len() != 2 || c.mode != CochainMode::Alternating {
        return Err(CechError::NotTwoSet);
    }
    c.coefficients.terms.iter().map(product_factors).collect()
}

/// `ρ_β ξ` for a section `ξ` over `from`, extended by zero to `to`.
fn cutoff(pf: &ProductFactors, pou: &DiscretePartitionOfUnity, beta: usize, from: &Sections, xi: &[Scalar], to: &Sections) -> Vec<Scalar> {
    pf.assemble(to, |y, f| {
        if pou.assign[y] == beta {
            pf.factor(from, xi, y, f)
        } else {
            let &(_, _, len, _) = pf.blocks[y].iter().find(|b| b.0 == y && b.3 == f).expect("own factor");
            vec![Scalar::zero(); len]
        }
    })
}

/// `ξ₀ + d(ρ₁ξ₀₁)` on `W₀` and `ξ₁ − d(ρ₀ξ₀₁)` on `W₁`, as sections over those sets.
fn corrected_pair(
    c: &CechComplex,
    pfs: &[ProductFactors],
    pou: &DiscretePartitionOfUnity,
    q: i32,
    x0: Vec<Scalar>,
    x1: Vec<Scalar>,
    x01: Option<Vec<Scalar>>,
) -> (Vec<Scalar>, Vec<Scalar>) {
    let Some(x01) = x01 else { return (x0, x1) };
    let k = &c.coefficients;
    let s01 = c.section_space(q - 1, &[0, 1]);
    let mut out = Vec::new();
    for (a, other, base, sign) in [(0usize, 1usize, x0, 1i64), (1, 0, x1, -1)] {
        let from = c.section_space(q - 1, &[a]);
        let to = c.section_space(q, &[a]);
        let cut = cutoff(&pfs[(q - 1) as usize], pou, other, s01, &x01, from);
        let dc = k.d(q - 1).on_sections(from, to).mul_vec(&cut);
        out.push(base.iter().zip(dc).map(|(u, v)| if sign > 0 { u + v } else { u - v }).collect());
    }
    let s1 = out.pop().expect("two");
    let s0 = out.pop().expect("two");
    (s0, s1)
}

/// The glued global cocycle representing `[ξ]` for a two-set covering.
#[derive(Clone, Debug)]
pub struct TwoSetInverse {
    /// Coordinates in `K^q(X)`.
    pub section: Vec<Scalar>,
    pub agree_on_overlap: bool,
}

pub fn two_set_inverse(c: &CechComplex, pou: &DiscretePartitionOfUnity, q: i32, xi: &[Scalar]) -> Result<TwoSetInverse, CechError> {
    let pfs = two_set_checks(c)?;
    if xi.len() != c.total.dim(q) || !c.total.d(q).mul_vec(xi).iter().all(Zero::is_zero) {
        return Err(CechError::NotCocycle);
    }
    let k = &c.coefficients;
    let x01 = (q >= 1).then(|| c.component(xi, 1, q - 1, &[0, 1]));
    let (s0, s1) = corrected_pair(c, &pfs, pou, q, c.component(xi, 0, q, &[0]), c.component(xi, 0, q, &[1]), x01);
    let (w0, w1) = (c.section_space(q, &[0]), c.section_space(q, &[1]));
    let w01 = c.section_space(q, &[0, 1]);
    let term = k.term(q);
    let agree = term.restriction(w0, w01).mul_vec(&s0) == term.restriction(w1, w01).mul_vec(&s1);
    let global = term.sections(c.pair.ground);
    let (v0, v1) = (w0.basis().mul_vec(&s0), w1.basis().mul_vec(&s1));
    let mut amb = vec![Scalar::zero(); global.ambient];
    for x in c.pair.ground.iter() {
        let d = term.stalk_dim(x);
        let (src, off) = if w0.open.contains(x) {
            (&v0, w0.offsets[&x])
        } else {
            (&v1, w1.offsets[&x])
        };
        let o = global.offsets[&x];
        amb[o..o + d].clone_from_slice(&src[off..off + d]);
    }
    let section = global
        .space
        .coords(&amb)
        .ok_or_else(|| CechError::Identity("the two pieces do not glue".into()))?;
    Ok(TwoSetInverse {
        section,
        agree_on_overlap: agree,
    })
}

/// The matrix of `[ξ] ↦ [s]` on `H^q`, in canonical class coordinates.
pub fn two_set_inverse_on_cohomology(c: &CechComplex, pou: &DiscretePartitionOfUnity, q: i32) -> Result<Matrix, CechError> {
    let h = c.total.cohomology(q);
    let kx = c.coefficients.sections_over(c.pair.ground);
    let hx = kx.cohomology(q);
    let mut m = Matrix::zeros(hx.dim, h.dim);
    for col in 0..h.dim {
        let s = two_set_inverse(c, pou, q, &h.reps.column(col))?;
        let cls = hx.class_of(&s.section).ok_or(CechError::NotCocycle)?;
        for (r, v) in cls.into_iter().enumerate() {
            m.set(r, col, v);
        }
    }
    Ok(m)
}

/// For a coboundary `ξ` on a two-set covering: `η₀, η₁` with
/// `ξ = (dη₀, dη₁, η₁ − η₀)`.
pub fn coboundary_simplify(
    c: &CechComplex,
    pou: &DiscretePartitionOfUnity,
    q: i32,
    xi: &[Scalar],
) -> Result<(Vec<Scalar>, Vec<Scalar>), CechError> {
    let pfs = two_set_checks(c)?;
    let eta = solve(&c.total.d(q - 1), xi).ok_or(CechError::NotCoboundary)?;
    let k = &c.coefficients;
    let e01 = (q >= 2).then(|| c.component(&eta, 1, q - 2, &[0, 1]));
    let (e0, e1) = corrected_pair(
        c,
        &pfs,
        pou,
        q - 1,
        c.component(&eta, 0, q - 1, &[0]),
        c.component(&eta, 0, q - 1, &[1]),
        e01,
    );
    let d0 = k
        .d(q - 1)
        .on_sections(c.section_space(q - 1, &[0]), c.section_space(q, &[0]))
        .mul_vec(&e0);
    let d1 = k
        .d(q - 1)
        .on_sections(c.section_space(q - 1, &[1]), c.section_space(q, &[1]))
        .mul_vec(&e1);
    let w01 = c.section_space(q - 1, &[0, 1]);
    let term = k.term(q - 1);
    let r0 = term.restriction(c.section_space(q - 1, &[0]), w01).mul_vec(&e0);
    let r1 = term.restriction(c.section_space(q - 1, &[1]), w01).mul_vec(&e1);
    let diff: Vec<Scalar> = r1.iter().zip(&r0).map(|(a, b)| a - b).collect();
    let ok = c.component(xi, 0, q, &[0]) == d0 && c.component(xi, 0, q, &[1]) == d1 && c.component(xi, 1, q - 1, &[0, 1]) == diff;
    if !ok {
        return Err(CechError::Identity("ξ ≠ (dη₀, dη₁, η₁ − η₀)".into()));
    }
    Ok((e0, e1))
}

/// The map `K•(V*, V') → K•(W, W')` sending `(ξ₁, ξ₀₁)` to `ξ₁` on sets outside `I'`
/// and `±ξ₀₁` on mixed pairs, with the checks that it induces an isomorphism.
#[derive(Clone, Debug)]
pub struct CoverComparison {
    pub map: ChainMap,
    pub report: VerificationReport,
}

fn mixed_map(src: &CechComplex, tgt: &CechComplex, p: &CoveringPair, with_sub_part: bool) -> Result<ChainMap, CechError> {
    let k = &src.coefficients;
    Ok(ChainMap::new(src.total.clone(), tgt.total.clone(), |q| {
        let mut m = Matrix::zeros(tgt.total.dim(q), src.total.dim(q));
        for b in tgt.blocks(0, q) {
            let a = b.tuple[0];
            let from_idx = if p.in_sub(a) { 0 } else { 1 };
            if p.in_sub(a) && !with_sub_part {
                continue;
            }
            if let Some(sb) = src.exact_block(0, q, &[from_idx]) {
                let r = k
                    .term(q)
                    .restriction(src.section_space(q, &[from_idx]), tgt.section_space(q, &b.tuple));
                m.put(tgt.total_offset(0, q, b), src.total_offset(0, q, sb), &r);
            }
        }
        if q >= 1 {
            if let Some(sb) = src.exact_block(1, q - 1, &[0, 1]) {
                for b in tgt.blocks(1, q - 1) {
                    let (a, c) = (b.tuple[0], b.tuple[1]);
                    let sign = match (p.in_sub(a), p.in_sub(c)) {
                        (true, false) => 1,
                        (false, true) => -1,
                        _ => continue,
                    };
                    let r = k
                        .term(q - 1)
                        .restriction(src.section_space(q - 1, &[0, 1]), tgt.section_space(q - 1, &b.tuple));
                    let r = if sign < 0 { -&r } else { r };
                    m.put(tgt.total_offset(1, q - 1, b), src.total_offset(1, q - 1, sb), &r);
                }
            }
        }
        m
    })?)
}

pub fn cover_comparison_map(k: &SheafComplex, pair: &CoveringPair) -> Result<CoverComparison, CechError> {
    for (q, t) in k.terms.iter().enumerate() {
        product_factors(t).map_err(|e| CechError::HypothesisFailed(format!("K^{q}: {e}")))?;
    }
    let x = pair.space.all();
    if pair.ground != x {
        return Err(CechError::NotCovering("the covering must be of the whole space".into()));
    }
    let mode = CochainMode::Alternating;
    let rel = two_set_relative(k, x, pair.sub_ground)?;
    let abs = total_complex(&rel.pair.to_absolute(), k, mode)?;
    let x_prime_only = total_complex(&rel.pair.subfamily(&[0], &[])?, k, mode)?;
    let w = total_complex(pair, k, mode)?;
    let w_abs = total_complex(&pair.to_absolute(), k, mode)?;
    let w_sub = total_complex(&pair.subfamily(&pair.sub_index, &[])?, k, mode)?;

    let phi = mixed_map(&rel, &w, pair, false)?;
    let psi = mixed_map(&abs, &w_abs, pair, true)?;
    let chi = tuple_map(&x_prime_only, &w_sub, &vec![0; pair.sub_index.len()])?;
    let jv = tuple_map(&rel, &abs, &[0, 1])?;
    let iv = tuple_map(&abs, &x_prime_only, &[0])?;
    let jw = tuple_map(&w, &w_abs, &(0..pair.len()).collect::<Vec<_>>())?;
    let iw = tuple_map(&w_abs, &w_sub, &pair.sub_index)?;

    let mut rep = VerificationReport::new();
    rep.check("left square commutes", jw.compose(&phi)?.comps_eq(&psi.compose(&jv)?), String::new);
    rep.check("right square commutes", iw.compose(&psi)?.comps_eq(&chi.compose(&iv)?), String::new);
    rep.check(
        "restriction to the sub-covering is a quasi-isomorphism",
        chi.is_quasi_iso(),
        String::new,
    );
    rep.check("absolute comparison is a quasi-isomorphism", psi.is_quasi_iso(), String::new);
    rep.check("relative comparison is a quasi-isomorphism", phi.is_quasi_iso(), || {
        format!("{:?} vs {:?}", rel.dims(), w.dims())
    });
    Ok(CoverComparison { map: phi, report: rep })
}

trait CompsEq {
    fn comps_eq(&self, other: &ChainMap) -> bool;
}

impl CompsEq for ChainMap {
    fn comps_eq(&self, other: &ChainMap) -> bool {
        self.source == other.source && self.target == other.target && self.degrees().all(|q| self.comp(q) == other.comp(q))
    }
}

/// Components `χ^{q₁}` of a cochain with `φ(s) − ψ(σ) = Dχ`, or `None` when the
/// classes of `s` and `σ` differ. Each block equation is rechecked.
pub fn correspondence_chain(c: &CechComplex, q: i32, s: &[Scalar], sigma: &[Scalar]) -> Result<Option<Vec<Vec<Scalar>>>, CechError> {
    let phi = c.phi_cover()?;
    let (cs, psi) = c.psi_cover()?;
    let is_cocycle = |cx: &Complex, v: &[Scalar]| v.len() == cx.dim(q) && cx.d(q).mul_vec(v).iter().all(Zero::is_zero);
    if !is_cocycle(&phi.source, s) || !is_cocycle(&cs.total, sigma) {
        return Err(CechError::NotCocycle);
    }
    let rhs: Vec<Scalar> = phi
        .comp(q)
        .mul_vec(s)
        .iter()
        .zip(psi.comp(q).mul_vec(sigma))
        .map(|(a, b)| a - &b)
        .collect();
    let Some(chi) = solve(&c.total.d(q - 1), &rhs) else {
        return Ok(None);
    };
    let block = |v: &[Scalar], p: i32, r: i32| -> Vec<Scalar> {
        let o = c.double.offset(p, r);
        v[o..o + c.double.dim(p, r)].to_vec()
    };
    let parts: Vec<Vec<Scalar>> = (0..q).map(|p| block(&chi, p, q - 1 - p)).collect();
    let h = |p: i32, r: i32, v: &[Scalar]| {
        c.double
            .horizontal
            .get(&(p, r))
            .map_or(vec![Scalar::zero(); c.double.dim(p + 1, r)], |m| m.mul_vec(v))
    };
    let vd = |p: i32, r: i32, v: &[Scalar]| {
        let out = c
            .double
            .vertical
            .get(&(p, r))
            .map_or(vec![Scalar::zero(); c.double.dim(p, r + 1)], |m| m.mul_vec(v));
        if p % 2 == 0 {
            out
        } else {
            out.into_iter().map(|x| -x).collect()
        }
    };
    let add = |a: Vec<Scalar>, b: Vec<Scalar>| -> Vec<Scalar> { a.into_iter().zip(b).map(|(x, y)| x + y).collect() };
    let phis = phi.comp(q).mul_vec(s);
    let psis = psi.comp(q).mul_vec(sigma);
    for p in 0..=q {
        let mut lhs = vec![Scalar::zero(); c.double.dim(p, q - p)];
        if p >= 1 {
            lhs = add(lhs, h(p - 1, q - p, &parts[(p - 1) as usize]));
        }
        if p < q {
            lhs = add(lhs, vd(p, q - 1 - p, &parts[p as usize]));
        }
        let expected = if p == 0 && q == 0 {
            add(block(&phis, 0, 0), block(&psis, 0, 0).into_iter().map(|x| -x).collect())
        } else if p == 0 {
            block(&phis, 0, q)
        } else if p == q {
            block(&psis, q, 0).into_iter().map(|x| -x).collect()
        } else {
            vec![Scalar::zero(); lhs.len()]
        };
        if lhs != expected {
            return Err(CechError::Identity(format!("block equation {p} of the correspondence fails")));
        }
    }
    Ok(Some(parts))
}

/// If every intersection of the covering has no higher cohomology in `S`, the Čech
/// cohomology `H(W, W'; S)` is compared with `H(X, X'; S)` through the total
/// complex of the Godement resolution, and the comparison is checked invertible.
pub fn verify_leray(pair: &CoveringPair, s: &Sheaf, bound: usize) -> Result<VerificationReport, CechError> {
    let sp = pair.space.clone();
    for q1 in 0..pair.len() as i32 {
        for t in itertools::Itertools::combinations(0..pair.len(), q1 as usize + 1) {
            let w = pair.intersection(&t);
            if w.is_empty() {
                continue;
            }
            let h = rel_cohomology_on(s, w, PointSet::EMPTY, bound)?;
            if let Some(q2) = (1..h.dims.len()).find(|&q2| h.dims[q2] != 0) {
                return Err(CechError::HypothesisFailed(format!(
                    "H^{q2}({}; S) has dimension {} on the intersection {t:?}",
                    sp.describe(w),
                    h.dims[q2]
                )));
            }
        }
    }
    let k = godement_resolve(s, bound)?.complex();
    let c = total_complex(pair, &k, CochainMode::Alternating)?;
    let phi = c.phi_cover()?;
    let (cs, psi) = c.psi_cover()?;
    let top = (bound as i32 - 1).min(c.valid_top());
    let mut rep = VerificationReport::new();
    rep.check(
        "sections of the resolution map isomorphically to the total complex",
        iso_through(&phi, top),
        String::new,
    );
    rep.check(
        "Cech cochains of S map isomorphically to the total complex",
        iso_through(&psi, top),
        String::new,
    );
    for q in 0..=top {
        let a = psi.on_cohomology(q);
        let b = phi.on_cohomology(q);
        let ok = match b.inverse() {
            Some(bi) if b.rows() == b.cols() => is_invertible(&(&bi * &a)),
            _ => false,
        };
        let (dw, dx) = (cs.total.cohomology(q).dim, phi.source.cohomology(q).dim);
        rep.check(format!("comparison H^{q}(W, W'; S) -> H^{q}(X, X'; S) invertible"), ok, || {
            format!("dims {dw} and {dx}")
        });
    }
    Ok(rep)
}
