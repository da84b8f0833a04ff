//! Mapping cylinders of maps of finite spaces, the cylinder sheaf `Z*(η)` of a
//! morphism `η: S → f_*T`, the cohomology `H(f; η)` of sheaf morphisms, and the
//! co-mapping cylinder and co-mapping cone of a morphism `φ: K → f_*L` of sheaf
//! complexes.

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::finspace::{
    inverse_image, pushforward, pushforward_morphism, pushforward_sections, ContinuousMap, FinSpace, PointSet, Sections, Sheaf,
    SheafChainMap, SheafComplex, SheafMorphism, SpaceError,
};
use crate::godement::{
    check_resolution, godement_pushforward_map, godement_resolve, rel_cohomology, rel_cohomology_on, GodementError, GodementResolution,
    HyperComplex,
};
use crate::homalg::{
    co_mapping_cone, connecting_map, is_invertible, les_from_ses, ChainMap, CoMappingCone, Complex, ExactSequence, HomAlgError,
};
use crate::ratlin::{Matrix, Scalar};
use crate::verdict::VerificationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CylinderError {
    #[error("not a morphism: {0}")]
    NotMorphism(String),
    #[error("section spaces cannot be identified: {0}")]
    Identification(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    HomAlg(#[from] HomAlgError),
    #[error(transparent)]
    Godement(#[from] GodementError),
}

/// `Z(f) = X ⊔ Y` for `f: Y → X`, with basic opens `Ũ = U ⊔ f⁻¹U` and the opens of `Y`.
/// Points of `X` come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderSpace {
    pub f: ContinuousMap,
    pub z: Arc<FinSpace>,
    /// Closed embedding `X → Z(f)`.
    pub mu: ContinuousMap,
    /// Open embedding `Y → Z(f)`.
    pub nu: ContinuousMap,
    /// `p: Z(f) → X`, the identity on `X` and `f` on `Y`.
    pub p: ContinuousMap,
    pub x_part: PointSet,
    pub y_part: PointSet,
}

enum Side {
    X(usize),
    Y(usize),
}

fn shifted(v: PointSet, by: usize) -> PointSet {
    PointSet::from_points(v.iter().map(|p| p + by))
}

pub fn mapping_cylinder(f: &ContinuousMap) -> Result<CylinderSpace, CylinderError> {
    let f = ContinuousMap::new(f.source.clone(), f.target.clone(), f.map.clone())?;
    let (x, y) = (f.target.clone(), f.source.clone());
    let (nx, ny) = (x.len(), y.len());
    if nx + ny > 64 {
        return Err(SpaceError::TooLarge(nx + ny).into());
    }
    let mut labels: Vec<String> = x.labels().to_vec();
    for l in y.labels() {
        let mut l = l.clone();
        while labels.contains(&l) {
            l.push('\'');
        }
        labels.push(l);
    }
    let mut basis: Vec<PointSet> = x.opens().into_iter().map(|u| u.union(shifted(f.preimage(u), nx))).collect();
    basis.extend(y.opens().into_iter().map(|v| shifted(v, nx)));
    let z = Arc::new(FinSpace::from_basis(labels, &basis)?);
    let mu = ContinuousMap::new(x.clone(), z.clone(), (0..nx).collect())?;
    let nu = ContinuousMap::new(y.clone(), z.clone(), (nx..nx + ny).collect())?;
    let p = ContinuousMap::new(z.clone(), x.clone(), (0..nx).chain(f.map.iter().copied()).collect())?;
    let x_part = PointSet::full(nx);
    let y_part = shifted(PointSet::full(ny), nx);
    Ok(CylinderSpace {
        f,
        z,
        mu,
        nu,
        p,
        x_part,
        y_part,
    })
}

impl CylinderSpace {
    pub fn x(&self) -> &Arc<FinSpace> {
        &self.f.target
    }

    pub fn y(&self) -> &Arc<FinSpace> {
        &self.f.source
    }

    fn side(&self, z: usize) -> Side {
        let nx = self.x().len();
        if z < nx {
            Side::X(z)
        } else {
            Side::Y(z - nx)
        }
    }

    /// `Ũ = U ⊔ f⁻¹U`.
    pub fn tilde(&self, u: PointSet) -> PointSet {
        u.union(shifted(self.f.preimage(u), self.x().len()))
    }

    /// A subset of `Y` as a subset of `Z(f)`.
    pub fn in_y(&self, v: PointSet) -> PointSet {
        shifted(v, self.x().len())
    }

    pub fn basis(&self) -> Vec<PointSet> {
        let mut b: Vec<PointSet> = self.x().opens().into_iter().map(|u| self.tilde(u)).collect();
        b.extend(self.y().opens().into_iter().map(|v| self.in_y(v)));
        b
    }

    /// The topology is generated by the basis, `X` is closed with open complement
    /// `Y`, and the orders of `X` and `Y` are those induced from `Z(f)`.
    pub fn audit(&self) -> VerificationReport {
        let mut rep = VerificationReport::new();
        let z = &self.z;
        let basis = self.basis();
        rep.check("basis sets are open", basis.iter().all(|&b| z.is_open(b)), String::new);
        let generated = z
            .opens()
            .into_iter()
            .all(|o| basis.iter().filter(|b| b.is_subset(o)).fold(PointSet::EMPTY, |a, &b| a.union(b)) == o);
        rep.check("every open is a union of basis sets", generated, String::new);
        rep.check("X is closed", z.is_closed(self.x_part), String::new);
        rep.check(
            "the complement of X is Y",
            z.all().minus(self.x_part) == self.y_part && z.is_open(self.y_part),
            String::new,
        );
        let (x, y) = (self.x(), self.y());
        let nx = x.len();
        let x_order = (0..nx).all(|a| (0..nx).all(|b| x.leq(a, b) == z.leq(a, b)));
        let y_order = (0..y.len()).all(|a| (0..y.len()).all(|b| y.leq(a, b) == z.leq(nx + a, nx + b)));
        rep.check("X carries the induced order", x_order, String::new);
        rep.check("Y carries the induced order", y_order, String::new);
        let y_opens = y.opens();
        let nu_ok = z.opens().into_iter().all(|o| y.is_open(self.nu.preimage(o))) && y_opens.iter().all(|&v| z.is_open(self.in_y(v)));
        rep.check("Y is an open subspace", nu_ok, String::new);
        let p_nu: Vec<usize> = (0..y.len()).map(|b| self.p.apply(self.nu.apply(b))).collect();
        rep.check("p restricted to Y is f", p_nu == self.f.map, String::new);
        rep.check(
            "p restricted to X is the identity",
            (0..nx).all(|a| self.p.apply(self.mu.apply(a)) == a),
            String::new,
        );
        rep
    }
}

/// The ambient matrix whose columns are `value(col, point)` stalk by stalk,
/// expressed in the coordinates of `sec`.
fn section_matrix(sec: &Sections, cols: usize, value: impl Fn(usize, usize) -> Vec<Scalar>) -> Option<Matrix> {
    let mut amb = Matrix::zeros(sec.ambient, cols);
    for (&z, &o) in &sec.offsets {
        for c in 0..cols {
            for (i, v) in value(c, z).into_iter().enumerate() {
                amb.set(o + i, c, v);
            }
        }
    }
    sec.space.coords_matrix(&amb)
}

/// Rows of a section basis holding the stalk at `y`.
fn value_rows(sec: &Sections, y: usize, d: usize) -> Matrix {
    let o = sec.offsets[&y];
    sec.basis().submatrix(o..o + d, 0..sec.dim())
}

fn stalk_of(sec: &Sections, v: &[Scalar], z: usize, d: usize) -> Vec<Scalar> {
    let o = sec.offsets[&z];
    v[o..o + d].to_vec()
}

fn same_data(a: &Sheaf, b: &Sheaf) -> bool {
    let sp = a.space();
    **sp == **b.space() && a.dims() == b.dims() && (0..sp.len()).all(|x| sp.up(x).iter().all(|y| a.res(x, y) == b.res(x, y)))
}

/// `Z*(η)` with sections `S(U)` over `Ũ` and `T(V)` over `V`.
#[derive(Clone, Debug)]
pub struct ZStarSheaf {
    pub cyl: CylinderSpace,
    pub s: Sheaf,
    pub t: Sheaf,
    pub eta: SheafMorphism,
    pub sheaf: Sheaf,
}

pub fn zstar_sheaf(cyl: &CylinderSpace, s: &Sheaf, t: &Sheaf, eta: &SheafMorphism) -> Result<ZStarSheaf, CylinderError> {
    if **s.space() != **cyl.x() || **t.space() != **cyl.y() {
        return Err(SpaceError::DifferentSpaces.into());
    }
    let ft = pushforward(&cyl.f, t);
    if !same_data(&eta.source, s) || !same_data(&eta.target, &ft) {
        return Err(CylinderError::NotMorphism("η must go from S to the direct image of T".into()));
    }
    SheafMorphism::new(eta.source.clone(), eta.target.clone(), eta.comps.clone()).map_err(|e| CylinderError::NotMorphism(e.to_string()))?;
    let secs = pushforward_sections(&cyl.f, t);
    let dims: Vec<usize> = (0..cyl.z.len())
        .map(|z| match cyl.side(z) {
            Side::X(x) => s.stalk_dim(x),
            Side::Y(y) => t.stalk_dim(y),
        })
        .collect();
    let sheaf = Sheaf::from_all_pairs(cyl.z.clone(), dims, |a, b| match (cyl.side(a), cyl.side(b)) {
        (Side::X(x), Side::X(x2)) => s.res(x, x2).clone(),
        (Side::X(x), Side::Y(y)) => &value_rows(&secs[x], y, t.stalk_dim(y)) * &eta.comps[x],
        (Side::Y(y), Side::Y(y2)) => t.res(y, y2).clone(),
        (Side::Y(_), Side::X(_)) => unreachable!("points of Y never specialize to points of X"),
    })?;
    Ok(ZStarSheaf {
        cyl: cyl.clone(),
        s: s.clone(),
        t: t.clone(),
        eta: eta.clone(),
        sheaf,
    })
}

impl ZStarSheaf {
    /// The section of `Z*(η)` over `Ũ` extending `s ∈ S(U)` (given in ambient stalk
    /// values): `s` on `U` and the values of `η(s)` on `f⁻¹U`.
    fn extend(&self, u: PointSet, s_secs: &Sections, target: &Sections) -> Option<Matrix> {
        let cyl = &self.cyl;
        let tsecs = pushforward_sections(&cyl.f, &self.t);
        section_matrix(target, s_secs.dim(), |c, z| {
            let v = s_secs.basis().column(c);
            match cyl.side(z) {
                Side::X(x) => stalk_of(s_secs, &v, x, self.s.stalk_dim(x)),
                Side::Y(y) => {
                    let fx = cyl.f.apply(y);
                    debug_assert!(u.contains(fx));
                    let sv = stalk_of(s_secs, &v, fx, self.s.stalk_dim(fx));
                    let e = self.eta.comps[fx].mul_vec(&sv);
                    value_rows(&tsecs[fx], y, self.t.stalk_dim(y)).mul_vec(&e)
                }
            }
        })
    }

    /// Sections over `Ũ` are `S(U)` through `η`, sections over `V` are `T(V)`,
    /// `p_*Z*(η) ≅ S` and `ν⁻¹Z*(η) = T`.
    pub fn audit(&self) -> VerificationReport {
        let mut rep = VerificationReport::new();
        let cyl = &self.cyl;
        let mut tilde_ok = true;
        for u in cyl.x().opens() {
            let su = self.s.sections(u);
            let zu = self.sheaf.sections(cyl.tilde(u));
            tilde_ok &= su.dim() == zu.dim() && self.extend(u, &su, &zu).is_some_and(|m| is_invertible(&m));
        }
        rep.check(
            "sections over each basic open U~ are S(U), restricted to f^-1(U) by eta",
            tilde_ok,
            String::new,
        );
        let v_ok = cyl
            .y()
            .opens()
            .into_iter()
            .all(|v| self.t.sections(v).dim() == self.sheaf.sections(cyl.in_y(v)).dim());
        rep.check("sections over each open V of Y are T(V)", v_ok, String::new);
        rep.check(
            "the restriction to Y is T",
            same_data(&inverse_image(&cyl.nu, &self.sheaf), &self.t),
            String::new,
        );
        let ps = pushforward(&cyl.p, &self.sheaf);
        let psecs = pushforward_sections(&cyl.p, &self.sheaf);
        let comps: Option<Vec<Matrix>> = (0..cyl.x().len())
            .map(|x| {
                let ux = cyl.x().up(x);
                self.extend(ux, &self.s.sections(ux), &psecs[x]).map(|m| {
                    let local = self.s.sections(ux);
                    let o = local.offsets[&x];
                    let to_stalk = local.basis().submatrix(o..o + self.s.stalk_dim(x), 0..local.dim());
                    &m * &to_stalk.inverse().expect("sections over U_x are the stalk")
                })
            })
            .collect();
        let iso = comps.is_some_and(|c| SheafMorphism::new(self.s.clone(), ps, c.clone()).is_ok() && c.iter().all(is_invertible));
        rep.check("the direct image under p is S", iso, String::new);
        rep
    }
}

/// `H^q(f; η) = H^q(Z(f), Z(f)∖X; Z*(η))` with the sequence
/// `H^{q-1}(Y;T) → H^q(f;η) → H^q(X;S) → H^q(Y;T)`.
#[derive(Clone, Debug)]
pub struct MorphismCohomology {
    pub dims: Vec<usize>,
    pub sequence: ExactSequence,
    pub resolution: GodementResolution,
    pub report: VerificationReport,
}

pub fn cohom_of_morphism(zs: &ZStarSheaf, bound: usize) -> Result<MorphismCohomology, CylinderError> {
    let cyl = &zs.cyl;
    let (z, y) = (cyl.z.all(), cyl.y_part);
    let rel = rel_cohomology_on(&zs.sheaf, z, y, bound)?;
    let c = rel.resolution.complex();
    let j = c.restriction_map(z, y, z, PointSet::EMPTY)?;
    let i = c.restriction_map(z, PointSet::EMPTY, y, PointSet::EMPTY)?;
    let les = les_from_ses(&j, &i)?;
    let top = bound as i32 - 1;
    let mut seq = ExactSequence::new();
    seq.push_node("0", 0);
    seq.push_map(Matrix::zeros(rel.dim(0), 0));
    for q in 0..=top {
        seq.push_node(format!("H^{q}(f)"), rel.dim(q));
        seq.push_map(les.iota[&q].clone());
        seq.push_node(format!("H^{q}(X;S)"), j.target.cohomology(q).dim);
        seq.push_map(les.phi[&q].clone());
        seq.push_node(format!("H^{q}(Y;T)"), i.target.cohomology(q).dim);
        if q < top {
            seq.push_map(les.delta[&q].clone());
        }
    }
    let mut report = VerificationReport::new();
    let failures = seq.failures();
    report.check("sequence of the morphism cohomology exact", failures.is_empty(), || {
        failures.join("; ")
    });
    let hx = rel_cohomology(&zs.s, PointSet::EMPTY, bound)?;
    let hy = rel_cohomology(&zs.t, PointSet::EMPTY, bound)?;
    let zx: Vec<usize> = (0..=top).map(|q| j.target.cohomology(q).dim).collect();
    let zy: Vec<usize> = (0..=top).map(|q| i.target.cohomology(q).dim).collect();
    report.check("cohomology over Z(f) is that of S on X", zx == hx.dims, || {
        format!("{zx:?} vs {:?}", hx.dims)
    });
    report.check("cohomology over Y is that of T", zy == hy.dims, || {
        format!("{zy:?} vs {:?}", hy.dims)
    });
    Ok(MorphismCohomology {
        dims: rel.dims,
        sequence: seq,
        resolution: rel.resolution,
        report,
    })
}

fn check_complex_morphism(cyl_f: &ContinuousMap, k: &SheafComplex, l: &SheafComplex, phi: &SheafChainMap) -> Result<(), CylinderError> {
    if **k.space() != *cyl_f.target || **l.space() != *cyl_f.source {
        return Err(SpaceError::DifferentSpaces.into());
    }
    if phi.source != *k || phi.target != l.pushforward(cyl_f) {
        return Err(CylinderError::NotMorphism("φ must go from K to the direct image of L".into()));
    }
    Ok(())
}

/// `Z*(φ) = μ_*K ⊕ μ_*f_*L[-1] ⊕ ν_*L` with `d(k, ℓ', ℓ) = (dk, φk − dℓ' − ℓ, dℓ)`.
/// Stalks at points of `X` are `K^q ⊕ (f_*L)^{q-1} ⊕ (f_*L)^q`, at points of `Y` they are `L^q`.
pub fn co_mapping_cylinder(
    cyl: &CylinderSpace,
    k: &SheafComplex,
    l: &SheafComplex,
    phi: &SheafChainMap,
) -> Result<SheafComplex, CylinderError> {
    let f = &cyl.f;
    check_complex_morphism(f, k, l, phi)?;
    let top = k.top().max(l.top() + 1);
    let pl = |q: i32| pushforward(f, &l.term(q));
    let nz = cyl.z.len();
    let mut terms = Vec::new();
    for q in 0..=top {
        let (kq, a, b, lq) = (k.term(q), pl(q - 1), pl(q), l.term(q));
        let secs = pushforward_sections(f, &lq);
        let dims: Vec<usize> = (0..nz)
            .map(|z| match cyl.side(z) {
                Side::X(x) => kq.stalk_dim(x) + a.stalk_dim(x) + b.stalk_dim(x),
                Side::Y(y) => lq.stalk_dim(y),
            })
            .collect();
        let term = Sheaf::from_all_pairs(cyl.z.clone(), dims, |s, t| match (cyl.side(s), cyl.side(t)) {
            (Side::X(x), Side::X(x2)) => Matrix::block_diag(&[kq.res(x, x2), a.res(x, x2), b.res(x, x2)]),
            (Side::X(x), Side::Y(y)) => {
                let pad = Matrix::zeros(lq.stalk_dim(y), kq.stalk_dim(x) + a.stalk_dim(x));
                Matrix::hstack(&[&pad, &value_rows(&secs[x], y, lq.stalk_dim(y))])
            }
            (Side::Y(y), Side::Y(y2)) => lq.res(y, y2).clone(),
            (Side::Y(_), Side::X(_)) => unreachable!("points of Y never specialize to points of X"),
        })?;
        terms.push(term);
    }
    let mut diffs = Vec::new();
    for q in 0..top {
        let (kq, a, b) = (k.term(q), pl(q - 1), pl(q));
        let (dk, da, db) = (k.d(q), pushforward_morphism(f, &l.d(q - 1)), pushforward_morphism(f, &l.d(q)));
        let (k1, a1) = (k.term(q + 1), b.clone());
        let ph = phi.comp(q);
        let comps = (0..nz)
            .map(|z| match cyl.side(z) {
                Side::X(x) => {
                    let (k0d, a0d, b0d) = (kq.stalk_dim(x), a.stalk_dim(x), b.stalk_dim(x));
                    let (k1d, a1d) = (k1.stalk_dim(x), a1.stalk_dim(x));
                    let mut m = Matrix::zeros(terms[q as usize + 1].stalk_dim(z), terms[q as usize].stalk_dim(z));
                    m.put(0, 0, &dk.comps[x]);
                    m.put(k1d, 0, &ph.comps[x]);
                    m.put(k1d, k0d, &(-&da.comps[x]));
                    m.put(k1d, k0d + a0d, &(-&Matrix::identity(b0d)));
                    m.put(k1d + a1d, k0d + a0d, &db.comps[x]);
                    m
                }
                Side::Y(y) => l.d(q).comps[y].clone(),
            })
            .collect();
        diffs.push(SheafMorphism::new(terms[q as usize].clone(), terms[q as usize + 1].clone(), comps)?);
    }
    Ok(SheafComplex::new(terms, diffs)?)
}

/// `L^q(Y) → (f_*L^q)(X)`, `ℓ ↦ (ℓ|_{f⁻¹U_x})_x`.
fn direct_image_iso(f: &ContinuousMap, lq: &Sheaf) -> Matrix {
    let ly = lq.sections(f.source.all());
    let psecs = pushforward_sections(f, lq);
    let target = pushforward(f, lq).sections(f.target.all());
    section_matrix(&target, ly.dim(), |c, x| lq.restriction(&ly, &psecs[x]).column(c)).expect("restrictions are compatible")
}

/// `φ: K(X) → L(Y)` on global sections.
pub fn global_map(f: &ContinuousMap, k: &SheafComplex, l: &SheafComplex, phi: &SheafChainMap) -> Result<ChainMap, CylinderError> {
    check_complex_morphism(f, k, l, phi)?;
    let x = f.target.all();
    let mut comps = Vec::new();
    for q in 0..=k.top().max(l.top()) {
        let lq = l.term(q);
        let iso = direct_image_iso(f, &lq);
        let inv = iso
            .inverse()
            .ok_or_else(|| CylinderError::Identification(format!("L^{q}(Y) and (f_*L^{q})(X)")))?;
        let on = phi.comp(q).on_sections(&k.term(q).sections(x), &pushforward(f, &lq).sections(x));
        comps.push(&inv * &on);
    }
    Ok(ChainMap::new(k.sections_over(x), l.sections_over(f.source.all()), |q| {
        comps
            .get(q as usize)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(l.term(q).sections(f.source.all()).dim(), k.term(q).sections(x).dim()))
    })?)
}

/// `T⁻¹ ∘ d ∘ T` for degreewise isomorphisms `T_q: target_q → c_q`.
fn transport(c: &Complex, t: &[Matrix], lo: i32) -> Option<Complex> {
    let inv: Vec<Matrix> = t
        .iter()
        .map(|m| m.inverse().filter(|_| m.rows() == m.cols()))
        .collect::<Option<_>>()?;
    let hi = lo + t.len() as i32 - 1;
    Complex::from_fn(
        lo,
        hi,
        |q| t[(q - lo) as usize].cols(),
        |q| &(&inv[(q + 1 - lo) as usize] * &c.d(q)) * &t[(q - lo) as usize],
    )
    .ok()
}

/// The co-mapping cone `M*(φ) = K ⊕ f_*L[-1]` on `X`, with its global sections
/// expressed in the coordinates of `K(X) ⊕ L(Y)[-1]`.
#[derive(Clone, Debug)]
pub struct SheafCoMappingCone {
    pub sheaf: SheafComplex,
    pub phi_global: ChainMap,
    /// The co-mapping cone of `phi_global`.
    pub cone: CoMappingCone,
    /// Global sections of `sheaf`, carried to `K(X) ⊕ L(Y)[-1]` coordinates.
    pub global: Complex,
}

impl SheafCoMappingCone {
    /// Global sections coincide with the co-mapping cone of the global map.
    pub fn identical(&self) -> bool {
        self.global == self.cone.m
    }
}

pub fn sheaf_co_mapping_cone(
    f: &ContinuousMap,
    k: &SheafComplex,
    l: &SheafComplex,
    phi: &SheafChainMap,
) -> Result<SheafCoMappingCone, CylinderError> {
    check_complex_morphism(f, k, l, phi)?;
    let top = k.top().max(l.top() + 1);
    let nx = f.target.len();
    let pl = |q: i32| pushforward(f, &l.term(q));
    let terms: Vec<Sheaf> = (0..=top).map(|q| k.term(q).direct_sum(&pl(q - 1))).collect::<Result<_, _>>()?;
    let mut diffs = Vec::new();
    for q in 0..top {
        let (dk, da) = (k.d(q), pushforward_morphism(f, &l.d(q - 1)));
        let ph = phi.comp(q);
        let k1 = k.term(q + 1);
        let comps = (0..nx)
            .map(|x| {
                let mut m = Matrix::zeros(terms[q as usize + 1].stalk_dim(x), terms[q as usize].stalk_dim(x));
                m.put(0, 0, &dk.comps[x]);
                m.put(k1.stalk_dim(x), 0, &ph.comps[x]);
                m.put(k1.stalk_dim(x), k.term(q).stalk_dim(x), &(-&da.comps[x]));
                m
            })
            .collect();
        diffs.push(SheafMorphism::new(terms[q as usize].clone(), terms[q as usize + 1].clone(), comps)?);
    }
    let sheaf = SheafComplex::new(terms, diffs)?;
    let phi_global = global_map(f, k, l, phi)?;
    let cone = co_mapping_cone(&phi_global);

    let x = f.target.all();
    let (sections, msecs) = sheaf.sections_complex(x, PointSet::EMPTY)?;
    let mut t = Vec::new();
    for q in 0..=top {
        let ks = k.term(q).sections(x);
        let lprev = l.term(q - 1);
        let ls = lprev.sections(f.source.all());
        let psecs = pushforward_sections(f, &lprev);
        let kd = ks.dim();
        let m = section_matrix(&msecs[q as usize], kd + ls.dim(), |c, x| {
            let (kx, ax) = (k.term(q).stalk_dim(x), psecs[x].dim());
            if c < kd {
                let mut v = stalk_of(&ks, &ks.basis().column(c), x, kx);
                v.resize(kx + ax, Scalar::zero());
                v
            } else {
                let mut v = vec![Scalar::zero(); kx];
                v.extend(lprev.restriction(&ls, &psecs[x]).column(c - kd));
                v
            }
        })
        .ok_or_else(|| CylinderError::Identification(format!("M^{q}(X) and K^{q}(X) + L^{}(Y)", q - 1)))?;
        t.push(m);
    }
    let global = transport(&sections, &t, 0).ok_or_else(|| CylinderError::Identification("global sections of the cone".into()))?;
    Ok(SheafCoMappingCone {
        sheaf,
        phi_global,
        cone,
        global,
    })
}

/// `Z*(φ)(Z(f), Z(f)∖X) → M*(φ)`: the identification `(k, ℓ', 0) ↔ (k, ℓ')`.
fn cylinder_relative_identification(
    cyl: &CylinderSpace,
    k: &SheafComplex,
    l: &SheafComplex,
    zc: &SheafComplex,
) -> Result<(Complex, Vec<Matrix>), CylinderError> {
    let f = &cyl.f;
    let (rc, rsecs) = zc.sections_complex(cyl.z.all(), cyl.y_part)?;
    let x = f.target.all();
    let mut t = Vec::new();
    for q in 0..=zc.top() {
        let ks = k.term(q).sections(x);
        let lprev = l.term(q - 1);
        let ls = lprev.sections(f.source.all());
        let (pprev, pcur) = (pushforward_sections(f, &lprev), pushforward_sections(f, &l.term(q)));
        let kd = ks.dim();
        let m = section_matrix(&rsecs[q as usize], kd + ls.dim(), |c, z| match cyl.side(z) {
            Side::X(x) => {
                let (kx, ax, bx) = (k.term(q).stalk_dim(x), pprev[x].dim(), pcur[x].dim());
                let mut v = if c < kd {
                    stalk_of(&ks, &ks.basis().column(c), x, kx)
                } else {
                    vec![Scalar::zero(); kx]
                };
                if c < kd {
                    v.resize(kx + ax, Scalar::zero());
                } else {
                    v.extend(lprev.restriction(&ls, &pprev[x]).column(c - kd));
                }
                v.resize(kx + ax + bx, Scalar::zero());
                v
            }
            Side::Y(y) => vec![Scalar::zero(); l.term(q).stalk_dim(y)],
        })
        .ok_or_else(|| CylinderError::Identification(format!("relative sections of Z*(φ)^{q}")))?;
        t.push(m);
    }
    Ok((rc, t))
}

/// The complex of sections of `Z*(φ)` vanishing on `Z(f)∖X` is the co-mapping cone
/// of `φ: K(X) → L(Y)`, differential by differential.
pub fn verify_cylinder_cone(
    cyl: &CylinderSpace,
    k: &SheafComplex,
    l: &SheafComplex,
    phi: &SheafChainMap,
) -> Result<VerificationReport, CylinderError> {
    let zc = co_mapping_cylinder(cyl, k, l, phi)?;
    let cone = sheaf_co_mapping_cone(&cyl.f, k, l, phi)?;
    let (rc, t) = cylinder_relative_identification(cyl, k, l, &zc)?;
    let mut rep = VerificationReport::new();
    let square = t.iter().all(|m| m.rows() == m.cols() && is_invertible(m));
    rep.check(
        "relative sections of the co-mapping cylinder have the cone's coordinates",
        square,
        String::new,
    );
    if let Some(moved) = transport(&rc, &t, 0) {
        rep.check(
            "relative sections of the co-mapping cylinder equal the co-mapping cone",
            moved == cone.cone.m,
            || format!("{moved:?} vs {:?}", cone.cone.m),
        );
    }
    rep.check(
        "global sections of the sheaf co-mapping cone equal the co-mapping cone",
        cone.identical(),
        String::new,
    );
    let (a, b): (Vec<usize>, Vec<usize>) = rc.degrees().map(|q| (rc.cohomology(q).dim, cone.cone.m.cohomology(q).dim)).unzip();
    rep.check("cohomology dimensions agree", a == b, || format!("{a:?} vs {b:?}"));
    Ok(rep)
}

/// A resolution `(K, L, φ)` of `(S, T, η)`: `ι: S → K⁰`, `ȷ: T → L⁰` and
/// `φ: K → f_*L` with `φ⁰ ι = (f_*ȷ) η`.
#[derive(Clone, Debug)]
pub struct MorphismResolution {
    pub s: Sheaf,
    pub t: Sheaf,
    pub eta: SheafMorphism,
    pub k: SheafComplex,
    pub l: SheafComplex,
    pub phi: SheafChainMap,
    pub iota: SheafMorphism,
    pub jmath: SheafMorphism,
}

impl MorphismResolution {
    /// Godement resolutions of `S` and `T` with the induced map into the direct image.
    pub fn godement(f: &ContinuousMap, s: &Sheaf, t: &Sheaf, eta: &SheafMorphism, bound: usize) -> Result<Self, CylinderError> {
        let (rs, rt) = (godement_resolve(s, bound)?, godement_resolve(t, bound)?);
        let phi = godement_pushforward_map(f, eta, &rs, &rt)?;
        Ok(MorphismResolution {
            s: s.clone(),
            t: t.clone(),
            eta: eta.clone(),
            k: rs.complex(),
            l: rt.complex(),
            phi,
            iota: rs.aug.clone(),
            jmath: rt.aug.clone(),
        })
    }

    /// `ζ: Z*(η) → Z*(φ)⁰`, `s ↦ (ιs, (f_*ȷ)ηs)` over `X` and `t ↦ ȷt` over `Y`.
    pub fn zeta(&self, cyl: &CylinderSpace, zs: &ZStarSheaf, zc: &SheafComplex) -> Result<SheafMorphism, CylinderError> {
        let fj = pushforward_morphism(&cyl.f, &self.jmath);
        let target = zc.term(0);
        let comps = (0..cyl.z.len())
            .map(|z| match cyl.side(z) {
                Side::X(x) => Matrix::vstack(&[&self.iota.comps[x], &(&fj.comps[x] * &self.eta.comps[x])]),
                Side::Y(y) => self.jmath.comps[y].clone(),
            })
            .collect();
        Ok(SheafMorphism::new(zs.sheaf.clone(), target, comps)?)
    }
}

/// `H(M*(φ)) ≅ H(f; η)` for a resolution whose terms have no higher cohomology on
/// `X` and on `Y`. The ladder between the sequence of the co-mapping cone and
/// the sequence of the morphism cohomology is built and checked square by square.
pub fn verify_generalized_comparison(
    cyl: &CylinderSpace,
    r: &MorphismResolution,
    bound: usize,
) -> Result<VerificationReport, CylinderError> {
    let f = &cyl.f;
    check_complex_morphism(f, &r.k, &r.l, &r.phi)?;
    let lhs = r.phi.comp(0).compose(&r.iota)?;
    let rhs = pushforward_morphism(f, &r.jmath).compose(&r.eta)?;
    if lhs.comps != rhs.comps {
        return Err(GodementError::HypothesisFailed {
            q1: 0,
            q2: 0,
            reason: "the resolution square does not commute".into(),
        }
        .into());
    }
    check_resolution(&r.k, &r.iota)?;
    check_resolution(&r.l, &r.jmath)?;
    for (cx, name) in [(&r.k, "X"), (&r.l, "Y")] {
        for (q1, t) in cx.terms.iter().enumerate() {
            let h = rel_cohomology(t, PointSet::EMPTY, bound)?;
            if let Some(q2) = (1..h.dims.len()).find(|&q2| h.dims[q2] != 0) {
                let sym = if name == "X" { "K" } else { "L" };
                return Err(GodementError::HypothesisFailed {
                    q1: q1 as i32,
                    q2: q2 as i32,
                    reason: format!("H^{q2}({name}; {sym}^{q1}) has dimension {}", h.dims[q2]),
                }
                .into());
            }
        }
    }

    let mut rep = VerificationReport::new();
    let zs = zstar_sheaf(cyl, &r.s, &r.t, &r.eta)?;
    let zc = co_mapping_cylinder(cyl, &r.k, &r.l, &r.phi)?;
    let zeta = r.zeta(cyl, &zs, &zc)?;
    rep.check(
        "the co-mapping cylinder resolves the cylinder sheaf",
        check_resolution(&zc, &zeta).is_ok(),
        String::new,
    );
    rep.extend(verify_cylinder_cone(cyl, &r.k, &r.l, &r.phi)?);

    let mc = cohom_of_morphism(&zs, bound)?;
    rep.extend(mc.report.clone());
    let hyper = HyperComplex::new(&zc, bound)?;
    let psi = hyper.psi(&mc.resolution, &zeta)?;
    let (z, y) = (cyl.z.all(), cyl.y_part);
    let pairs = [(z, y), (z, PointSet::EMPTY), (y, PointSet::EMPTY)];
    let mut kappas = Vec::new();
    let mut psis = Vec::new();
    for &(u, up) in &pairs {
        kappas.push(hyper.kappa.on_sections(u, up)?);
        psis.push(psi.on_sections(u, up)?);
    }
    let c = mc.resolution.complex();
    let jz = c.restriction_map(z, y, z, PointSet::EMPTY)?;
    let iz = c.restriction_map(z, PointSet::EMPTY, y, PointSet::EMPTY)?;

    let phi_g = global_map(f, &r.k, &r.l, &r.phi)?;
    let cone = co_mapping_cone(&phi_g);
    let (_, t_rel) = cylinder_relative_identification(cyl, &r.k, &r.l, &zc)?;
    let ident = ChainMap::new(cone.m.clone(), kappas[0].source.clone(), |q| {
        t_rel
            .get(q as usize)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(kappas[0].source.dim(q), cone.m.dim(q)))
    })?;
    let zsecs = zc.sections_complex(z, PointSet::EMPTY)?.1;
    let ysecs = zc.sections_complex(y, PointSet::EMPTY)?.1;
    let (kx, ly) = (&phi_g.source, &phi_g.target);
    let x_all = f.target.all();
    let y_all = f.source.all();
    // ε(k) = (k, 0, φk) and λ(ℓ) = ℓ.
    let epsilon = ChainMap::new(kx.clone(), kappas[1].source.clone(), |q| {
        let Some(sec) = zsecs.get(q as usize) else {
            return Matrix::zeros(0, kx.dim(q));
        };
        let ks = r.k.term(q).sections(x_all);
        let lq = r.l.term(q);
        let ls = lq.sections(y_all);
        let (pprev, pcur) = (pushforward_sections(f, &r.l.term(q - 1)), pushforward_sections(f, &lq));
        let ph = r.phi.comp(q);
        let pg = phi_g.comp(q);
        section_matrix(sec, ks.dim(), |col, zp| {
            let v = ks.basis().column(col);
            match cyl.side(zp) {
                Side::X(x) => {
                    let kxv = stalk_of(&ks, &v, x, r.k.term(q).stalk_dim(x));
                    let mut out = kxv.clone();
                    out.resize(kxv.len() + pprev[x].dim(), Scalar::zero());
                    out.extend(ph.comps[x].mul_vec(&kxv));
                    debug_assert_eq!(out.len(), kxv.len() + pprev[x].dim() + pcur[x].dim());
                    out
                }
                Side::Y(yp) => {
                    let lv = ls.basis().mul_vec(&pg.column(col));
                    stalk_of(&ls, &lv, yp, lq.stalk_dim(yp))
                }
            }
        })
        .expect("(k, 0, φk) is a section")
    })?;
    let lambda = ChainMap::new(ly.clone(), kappas[2].source.clone(), |q| {
        let Some(sec) = ysecs.get(q as usize) else {
            return Matrix::zeros(0, ly.dim(q));
        };
        let lq = r.l.term(q);
        let ls = lq.sections(y_all);
        section_matrix(sec, ls.dim(), |col, zp| match cyl.side(zp) {
            Side::Y(yp) => stalk_of(&ls, &ls.basis().column(col), yp, lq.stalk_dim(yp)),
            Side::X(_) => unreachable!("sections over Y"),
        })
        .expect("sections over Y")
    })?;

    let top = bound as i32 - 1;
    let eq = |rep: &mut VerificationReport, name: String, a: Matrix, b: Matrix| {
        rep.check(name, a == b, || format!("{a} vs {b}"));
    };
    let chi = |i: usize, pre: &ChainMap, q: i32| -> Option<Matrix> {
        let p = psis[i].on_cohomology(q);
        let pinv = p.inverse().filter(|_| p.rows() == p.cols())?;
        Some(&(&pinv * &kappas[i].on_cohomology(q)) * &pre.on_cohomology(q))
    };
    for q in 0..=top {
        let (Some(chi_m), Some(chi_x), Some(chi_y), Some(chi_y_prev)) =
            (chi(0, &ident, q), chi(1, &epsilon, q), chi(2, &lambda, q), chi(2, &lambda, q - 1))
        else {
            rep.check(format!("comparison maps defined in degree {q}"), false, String::new);
            continue;
        };
        for (m, name) in [(&chi_m, "cone"), (&chi_x, "X"), (&chi_y, "Y")] {
            rep.check(format!("comparison on {name} invertible in degree {q}"), is_invertible(m), || {
                format!("{}x{} of rank {}", m.rows(), m.cols(), m.rank())
            });
        }
        eq(
            &mut rep,
            format!("cone projection commutes with the comparison in degree {q}"),
            &chi_x * &cone.alpha_star.on_cohomology(q),
            &jz.on_cohomology(q) * &chi_m,
        );
        eq(
            &mut rep,
            format!("global map commutes with the comparison in degree {q}"),
            &chi_y * &phi_g.on_cohomology(q),
            &iz.on_cohomology(q) * &chi_x,
        );
        let delta = connecting_map(&jz, &iz, q - 1);
        eq(
            &mut rep,
            format!("cone inclusion anti-commutes with the connecting map in degree {q}"),
            &chi_m * &cone.beta_star.on_cohomology(q),
            -&(&delta * &chi_y_prev),
        );
        let (hm, hf) = (cone.m.cohomology(q).dim, mc.dims[q as usize]);
        rep.check(format!("dim H^{q} of the co-mapping cone equals dim H^{q}(f)"), hm == hf, || {
            format!("{hm} vs {hf}")
        });
    }
    let cone_les = les_from_ses(&cone.beta_star, &cone.alpha_star)?;
    rep.check("sequence of the co-mapping cone exact", cone_les.is_exact(), String::new);
    Ok(rep)
}

/// The data `(f, K|_{X'}, K → f_*f⁻¹K)` of an open embedding `f: X' → X`.
pub fn canonical_open_embedding(
    k: &SheafComplex,
    x_prime: PointSet,
) -> Result<(ContinuousMap, SheafComplex, SheafChainMap), CylinderError> {
    let sp = k.space().clone();
    sp.check_open(x_prime)?;
    let f = ContinuousMap::inclusion(sp, x_prime);
    let l = k.inverse_image(&f);
    let comps = k
        .terms
        .iter()
        .map(|t| crate::finspace::adjunction_units(&f, t, &inverse_image(&f, t)).0)
        .collect();
    let phi = SheafChainMap::new(k.clone(), l.pushforward(&f), comps)?;
    Ok((f, l, phi))
}

/// `η: S → f_*f⁻¹S` for a map `f` and a sheaf `S` on its target.
pub fn canonical_eta(f: &ContinuousMap, s: &Sheaf) -> (Sheaf, SheafMorphism) {
    let t = inverse_image(f, s);
    let (unit, _) = crate::finspace::adjunction_units(f, s, &t);
    (t, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::godement::open_embedding_complex;

    fn pseudocircle() -> Arc<FinSpace> {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        Arc::new(FinSpace::from_hasse(labels, &[(2, 0), (2, 1), (3, 0), (3, 1)]).unwrap())
    }

    fn point() -> Arc<FinSpace> {
        Arc::new(FinSpace::from_hasse(vec!["p".into()], &[]).unwrap())
    }

    fn empty() -> Arc<FinSpace> {
        Arc::new(FinSpace::from_hasse(vec![], &[]).unwrap())
    }

    fn cone_map() -> ContinuousMap {
        ContinuousMap::new(pseudocircle(), point(), vec![0; 4]).unwrap()
    }

    fn arc_embedding() -> ContinuousMap {
        let x = pseudocircle();
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        ContinuousMap::inclusion(x, arc)
    }

    #[test]
    fn cylinder_over_empty_space() {
        let x = pseudocircle();
        let f = ContinuousMap::new(empty(), x.clone(), vec![]).unwrap();
        let cyl = mapping_cylinder(&f).unwrap();
        assert_eq!(*cyl.z, *x);
        assert!(cyl.audit().passed());
    }

    #[test]
    fn identity_cylinder() {
        let x = pseudocircle();
        let cyl = mapping_cylinder(&ContinuousMap::identity(x.clone())).unwrap();
        let rep = cyl.audit();
        assert!(rep.passed(), "{rep}");
        assert_eq!(cyl.z.len(), 8);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(cyl.z.leq(a, 4 + b), x.leq(a, b));
                assert!(!cyl.z.leq(4 + b, a));
            }
        }
        assert_eq!(cyl.z.label(4), "a'");
    }

    #[test]
    fn cone_space() {
        let cyl = mapping_cylinder(&cone_map()).unwrap();
        assert!(cyl.audit().passed());
        assert_eq!(cyl.z.len(), 5);
        assert!((1..5).all(|y| cyl.z.leq(0, y)));
        assert_eq!(cyl.z.height(), 2);
        assert_eq!(cyl.z.opens().len(), pseudocircle().opens().len() + 1);
    }

    #[test]
    fn cylinder_sheaf_cases() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let f = ContinuousMap::new(empty(), x.clone(), vec![]).unwrap();
        let cyl = mapping_cylinder(&f).unwrap();
        let t = Sheaf::zero(empty());
        let eta = s.zero_to(&pushforward(&f, &t));
        let zs = zstar_sheaf(&cyl, &s, &t, &eta).unwrap();
        assert!(same_data(&zs.sheaf, &s));

        let f = arc_embedding();
        let cyl = mapping_cylinder(&f).unwrap();
        let (t, eta) = canonical_eta(&f, &s);
        let zs = zstar_sheaf(&cyl, &s, &t, &eta).unwrap();
        assert!(zs.audit().passed(), "{}", zs.audit());
        assert!(same_data(&zs.sheaf, &inverse_image(&cyl.p, &s)));

        let f = cone_map();
        let cyl = mapping_cylinder(&f).unwrap();
        let sp = Sheaf::constant(point(), 1);
        let (t, eta) = canonical_eta(&f, &sp);
        let zs = zstar_sheaf(&cyl, &sp, &t, &eta).unwrap();
        assert!(zs.audit().passed(), "{}", zs.audit());
        let bad = sp.zero_to(&Sheaf::constant(point(), 2));
        assert!(matches!(zstar_sheaf(&cyl, &sp, &t, &bad), Err(CylinderError::NotMorphism(_))));
    }

    #[test]
    fn morphism_cohomology_examples() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let f = ContinuousMap::new(empty(), x.clone(), vec![]).unwrap();
        let cyl = mapping_cylinder(&f).unwrap();
        let t = Sheaf::zero(empty());
        let zs = zstar_sheaf(&cyl, &s, &t, &s.zero_to(&pushforward(&f, &t))).unwrap();
        let h = cohom_of_morphism(&zs, 3).unwrap();
        assert_eq!(h.dims, rel_cohomology(&s, PointSet::EMPTY, 3).unwrap().dims);

        let f = arc_embedding();
        let cyl = mapping_cylinder(&f).unwrap();
        let (t, eta) = canonical_eta(&f, &s);
        let zs = zstar_sheaf(&cyl, &s, &t, &eta).unwrap();
        let h = cohom_of_morphism(&zs, 4).unwrap();
        assert!(h.report.passed(), "{}", h.report);
        assert_eq!(&h.dims[..2], &[0, 1]);
        assert_eq!(h.dims, rel_cohomology(&s, x.set_of(&["a", "b", "c"]).unwrap(), 4).unwrap().dims);

        let f = cone_map();
        let cyl = mapping_cylinder(&f).unwrap();
        let sp = Sheaf::constant(point(), 1);
        let (t, eta) = canonical_eta(&f, &sp);
        let zs = zstar_sheaf(&cyl, &sp, &t, &eta).unwrap();
        let h = cohom_of_morphism(&zs, 4).unwrap();
        assert!(h.report.passed(), "{}", h.report);
        assert_eq!(&h.dims[..3], &[0, 0, 1]);
        assert!(matches!(
            cohom_of_morphism(&zs, 3),
            Err(CylinderError::Godement(GodementError::Bound { .. }))
        ));
    }

    #[test]
    fn open_embedding_constructions_agree() {
        let x = pseudocircle();
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let k = godement_resolve(&Sheaf::constant(x.clone(), 1), 3).unwrap().complex();
        let (f, l, phi) = canonical_open_embedding(&k, arc).unwrap();
        let cone = sheaf_co_mapping_cone(&f, &k, &l, &phi).unwrap();
        assert!(cone.identical());
        assert_eq!(cone.global, open_embedding_complex(&k, arc).unwrap().complex);
        let cyl = mapping_cylinder(&f).unwrap();
        let rep = verify_cylinder_cone(&cyl, &k, &l, &phi).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn co_mapping_cylinder_trivial_cases() {
        let x = pseudocircle();
        let k = godement_resolve(&Sheaf::constant(x.clone(), 1), 2).unwrap().complex();
        let f = ContinuousMap::new(empty(), x.clone(), vec![]).unwrap();
        let cyl = mapping_cylinder(&f).unwrap();
        let l = SheafComplex::single(Sheaf::zero(empty()));
        let phi = SheafChainMap::new(
            k.clone(),
            l.pushforward(&f),
            k.terms.iter().map(|t| t.zero_to(&pushforward(&f, &Sheaf::zero(empty())))).collect(),
        );
        let phi = phi.unwrap();
        let zc = co_mapping_cylinder(&cyl, &k, &l, &phi).unwrap();
        assert_eq!(zc.sections_over(cyl.z.all()), k.sections_over(x.all()));
        assert!(verify_cylinder_cone(&cyl, &k, &l, &phi).unwrap().passed());
    }

    #[test]
    fn generalized_comparison_on_embedding_and_cone() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let f = arc_embedding();
        let cyl = mapping_cylinder(&f).unwrap();
        let (t, eta) = canonical_eta(&f, &s);
        let r = MorphismResolution::godement(&f, &s, &t, &eta, 4).unwrap();
        let rep = verify_generalized_comparison(&cyl, &r, 4).unwrap();
        assert!(rep.passed(), "{rep}");

        let f = cone_map();
        let cyl = mapping_cylinder(&f).unwrap();
        let sp = Sheaf::constant(point(), 1);
        let (t, eta) = canonical_eta(&f, &sp);
        let r = MorphismResolution::godement(&f, &sp, &t, &eta, 4).unwrap();
        let rep = verify_generalized_comparison(&cyl, &r, 4).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep
            .verdicts
            .iter()
            .any(|v| v.name.contains("anti-commutes") && v.name.ends_with("degree 2")));
        assert!(rep.verdicts.len() > 20, "{rep}");
    }

    #[test]
    fn broken_resolution_is_reported() {
        let f = cone_map();
        let cyl = mapping_cylinder(&f).unwrap();
        let sp = Sheaf::constant(point(), 1);
        let (t, eta) = canonical_eta(&f, &sp);
        let mut r = MorphismResolution::godement(&f, &sp, &t, &eta, 4).unwrap();
        // The bare sheaf on the circle has H^1, so the acyclicity hypothesis fails.
        r.l = SheafComplex::single(t.clone());
        r.jmath = t.identity();
        let comps = vec![SheafMorphism::new(r.k.term(0), pushforward(&f, &t), vec![Matrix::identity(1)]).unwrap()];
        r.k = SheafComplex::single(r.k.term(0));
        r.phi = SheafChainMap::new(r.k.clone(), r.l.pushforward(&f), comps).unwrap();
        let e = verify_generalized_comparison(&cyl, &r, 4).unwrap_err();
        assert!(
            matches!(e, CylinderError::Godement(GodementError::HypothesisFailed { q1: 0, q2: 1, .. })),
            "{e:?}"
        );
    }
}
