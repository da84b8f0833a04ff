//! Godement resolutions, relative sheaf cohomology, hypercohomology of sheaf
//! complexes and the cone complex attached to an open embedding.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::finspace::{
    cokernel, kernel_sheaf, pushforward, pushforward_morphism, pushforward_sections, Cokernel, ContinuousMap, PointSet, ProductLayout,
    Sheaf, SheafChainMap, SheafComplex, SheafMorphism, SpaceError,
};
use crate::homalg::{
    co_mapping_cone, cone_functoriality, connecting_map, is_invertible, les_from_ses, sign_scalar, ChainMap, Complex, HomAlgError,
};
use crate::ratlin::{image, kernel, Matrix};
use crate::verdict::VerificationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GodementError {
    #[error("truncation bound {bound} is below the required {required}")]
    Bound { bound: usize, required: usize },
    #[error("term {0} of the complex is not flabby")]
    NotFlabby(i32),
    #[error("the map from the resolved sheaf is not invertible on cohomology in degree {0}")]
    NotInvertible(i32),
    #[error("hypothesis fails at ({q1}, {q2}): {reason}")]
    HypothesisFailed { q1: i32, q2: i32, reason: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    HomAlg(#[from] HomAlgError),
}

/// `C⁰(F)` with stalks `⊕_{y ≥ x} F_y`, projection restrictions, and the
/// augmentation `s ↦ (r_{x→y} s)_y`.
pub fn c0(f: &Sheaf) -> (Sheaf, SheafMorphism) {
    let sp = f.space().clone();
    let n = sp.len();
    let mut blocks = Vec::with_capacity(n);
    let mut dims = Vec::with_capacity(n);
    for x in 0..n {
        let mut off = 0;
        let mut b = Vec::new();
        for y in sp.up(x).iter() {
            b.push((y, off, f.stalk_dim(y)));
            off += f.stalk_dim(y);
        }
        blocks.push(b);
        dims.push(off);
    }
    let layout = ProductLayout { blocks };
    let g = Sheaf::from_all_pairs(sp, dims.clone(), |x, y| {
        let mut m = Matrix::zeros(dims[y], dims[x]);
        for &(z, oy, len) in &layout.blocks[y] {
            let &(_, ox, _) = layout.blocks[x].iter().find(|b| b.0 == z).expect("U_y ⊆ U_x");
            m.put(oy, ox, &Matrix::identity(len));
        }
        m
    })
    .expect("product sheaf")
    .with_layout(layout.clone());
    let comps = (0..n)
        .map(|x| {
            let mut m = Matrix::zeros(dims[x], f.stalk_dim(x));
            for &(y, off, _) in &layout.blocks[x] {
                m.put(off, 0, f.res(x, y));
            }
            m
        })
        .collect();
    let aug = SheafMorphism {
        source: f.clone(),
        target: g.clone(),
        comps,
    };
    (g, aug)
}

/// `C⁰(m): C⁰(F) → C⁰(G)`, blockwise `m_y`.
pub fn c0_map(m: &SheafMorphism, source: &Sheaf, target: &Sheaf) -> SheafMorphism {
    let sp = m.space();
    let comps = (0..sp.len())
        .map(|x| {
            let blocks: Vec<&Matrix> = sp.up(x).iter().map(|y| &m.comps[y]).collect();
            Matrix::block_diag(&blocks)
        })
        .collect();
    SheafMorphism {
        source: source.clone(),
        target: target.clone(),
        comps,
    }
}

/// `0 → S → C⁰ → … → C^N`, built from `Q_{-1} = S`, `Q_q = coker(Q_{q-1} → C^q)`,
/// `C^{q+1} = C⁰(Q_q)`.
#[derive(Clone, Debug)]
pub struct GodementResolution {
    pub base: Sheaf,
    pub terms: Vec<Sheaf>,
    pub aug: SheafMorphism,
    /// `diffs[q] : C^q → C^{q+1}`.
    pub diffs: Vec<SheafMorphism>,
    pub bound: usize,
    quotients: Vec<Cokernel>,
}

pub fn godement_resolve(s: &Sheaf, bound: usize) -> Result<GodementResolution, GodementError> {
    if bound < 1 {
        return Err(GodementError::Bound { bound, required: 1 });
    }
    let (c, aug) = c0(s);
    let mut terms = vec![c];
    let mut diffs = Vec::with_capacity(bound);
    let mut quotients = Vec::with_capacity(bound);
    let mut eps = aug.clone();
    for _ in 0..bound {
        let q = cokernel(&eps);
        let (next, eps_next) = c0(&q.sheaf);
        diffs.push(eps_next.compose(&q.proj)?);
        terms.push(next);
        quotients.push(q);
        eps = eps_next;
    }
    let r = GodementResolution {
        base: s.clone(),
        terms,
        aug,
        diffs,
        bound,
        quotients,
    };
    let audit = r.audit();
    assert!(audit.passed(), "Godement resolution audit failed:\n{audit}");
    Ok(r)
}

impl GodementResolution {
    pub fn complex(&self) -> SheafComplex {
        SheafComplex {
            terms: self.terms.clone(),
            diffs: self.diffs.clone(),
        }
    }

    /// The cokernel sheaves `Q_0, …, Q_{N-1}`.
    pub fn quotient(&self, q: usize) -> &Sheaf {
        &self.quotients[q].sheaf
    }

    /// True when `Q_{N-1} = 0`, so every later term vanishes.
    pub fn is_complete(&self) -> bool {
        self.quotients.last().is_none_or(|q| q.sheaf.is_zero())
    }

    /// Stalkwise exactness of `0 → S → C⁰ → … → C^N` below `N`, `δ∘aug = 0`,
    /// `δ∘δ = 0`, and flabbiness of every term.
    pub fn audit(&self) -> VerificationReport {
        let mut rep = VerificationReport::new();
        let sp = self.base.space();
        for x in 0..sp.len() {
            let a = &self.aug.comps[x];
            rep.check(format!("augmentation injective at {}", sp.label(x)), a.rank() == a.cols(), || {
                format!("rank {} of {}", a.rank(), a.cols())
            });
            for q in 0..self.bound {
                let incoming = if q == 0 { a.clone() } else { self.diffs[q - 1].comps[x].clone() };
                let out = &self.diffs[q].comps[x];
                let composes = (out * &incoming).is_zero();
                let exact = composes && image(&incoming) == kernel(out);
                rep.check(format!("resolution exact at C^{q} over {}", sp.label(x)), exact, || {
                    if composes {
                        "kernel exceeds image".into()
                    } else {
                        "differentials do not compose to zero".into()
                    }
                });
            }
        }
        for (q, t) in self.terms.iter().enumerate() {
            rep.check(format!("C^{q} is flabby"), flabby_check(t), String::new);
        }
        rep
    }
}

/// The chain map `C•(m): C•(F) → C•(G)`, with `C^q(m) = C⁰(g_{q-1})` and
/// `g_q : Q_q^F → Q_q^G` induced through the cokernel projections.
pub fn godement_map(m: &SheafMorphism, rf: &GodementResolution, rg: &GodementResolution) -> Result<SheafChainMap, GodementError> {
    if rf.bound != rg.bound {
        return Err(GodementError::Space(SpaceError::Shape(
            "resolutions truncated at different bounds".into(),
        )));
    }
    let mut g = m.clone();
    let mut comps = Vec::with_capacity(rf.bound + 1);
    for q in 0..=rf.bound {
        let cq = c0_map(&g, &rf.terms[q], &rg.terms[q]);
        if q < rf.bound {
            let (qf, qg) = (&rf.quotients[q], &rg.quotients[q]);
            let gc = (0..cq.comps.len())
                .map(|x| &(&qg.proj.comps[x] * &cq.comps[x]) * &qf.lifts[x])
                .collect();
            g = SheafMorphism {
                source: qf.sheaf.clone(),
                target: qg.sheaf.clone(),
                comps: gc,
            };
        }
        comps.push(cq);
    }
    Ok(SheafChainMap::new(rf.complex(), rg.complex(), comps)?)
}

/// `θ: C⁰(f_*B) → f_*C⁰(B)`, sending `(b_x)_{x∈U}` to the family whose factor at
/// `y ∈ f⁻¹U` is the value of `b_{f(y)}` at `y`.
pub fn c0_pushforward_eval(f: &ContinuousMap, b: &Sheaf) -> SheafMorphism {
    let x_space = &f.target;
    let fb = pushforward(f, b);
    let bsecs = pushforward_sections(f, b);
    let (source, _) = c0(&fb);
    let (cb, _) = c0(b);
    let csecs = pushforward_sections(f, &cb);
    let src_layout = source.layout().expect("product layout").clone();
    let tgt_layout = cb.layout().expect("product layout").clone();
    let comps = (0..x_space.len())
        .map(|x| {
            let sec = &csecs[x];
            let mut amb = Matrix::zeros(sec.ambient, source.stalk_dim(x));
            for y in sec.open.iter() {
                for &(yp, ob, lb) in &tgt_layout.blocks[y] {
                    let xp = f.apply(yp);
                    let &(_, ox, _) = src_layout.blocks[x].iter().find(|blk| blk.0 == xp).expect("f(y') lies in U_x");
                    let bs = &bsecs[xp];
                    let o = bs.offsets[&yp];
                    let rows = bs.basis().submatrix(o..o + lb, 0..bs.dim());
                    amb.put(sec.offsets[&y] + ob, ox, &rows);
                }
            }
            sec.space.coords_matrix(&amb).expect("values at points form a section")
        })
        .collect();
    SheafMorphism {
        source,
        target: pushforward(f, &cb),
        comps,
    }
}

/// A chain map `C•(A) → f_*C•(B)` extending `a: A → f_*B`: degree `q` is
/// `θ ∘ C⁰(g_{q-1})` with `g_q: Q_q^A → f_*Q_q^B` induced through the cokernels.
pub fn godement_pushforward_map(
    f: &ContinuousMap,
    a: &SheafMorphism,
    ra: &GodementResolution,
    rb: &GodementResolution,
) -> Result<SheafChainMap, GodementError> {
    if ra.bound != rb.bound {
        return Err(GodementError::Space(SpaceError::Shape(
            "resolutions truncated at different bounds".into(),
        )));
    }
    let mut g = a.clone();
    let mut comps = Vec::with_capacity(ra.bound + 1);
    for q in 0..=ra.bound {
        let bq = if q == 0 { &rb.base } else { &rb.quotients[q - 1].sheaf };
        let (c0fb, _) = c0(&pushforward(f, bq));
        let c0g = c0_map(&g, &ra.terms[q], &c0fb);
        let cq = c0_pushforward_eval(f, bq).compose(&c0g)?;
        if q < ra.bound {
            let (qa, qb) = (&ra.quotients[q], &rb.quotients[q]);
            let pb = pushforward_morphism(f, &qb.proj);
            let gc = (0..cq.comps.len()).map(|x| &(&pb.comps[x] * &cq.comps[x]) * &qa.lifts[x]).collect();
            g = SheafMorphism {
                source: qa.sheaf.clone(),
                target: pushforward(f, &qb.sheaf),
                comps: gc,
            };
        }
        comps.push(cq);
    }
    Ok(SheafChainMap::new(ra.complex(), rb.complex().pushforward(f), comps)?)
}

/// Surjectivity of `G(X) → G(V)` for every open `V`.
pub fn flabby_check(g: &Sheaf) -> bool {
    let sp = g.space();
    let global = g.sections(sp.all());
    sp.opens().into_iter().all(|v| {
        let local = g.sections(v);
        local.dim() == 0 || g.restriction(&global, &local).rank() == local.dim()
    })
}

fn required_bound(space_height: i32) -> usize {
    (space_height + 2) as usize
}

fn check_bound(s: &Sheaf, bound: usize) -> Result<(), GodementError> {
    let required = required_bound(s.space().height());
    if bound < required {
        return Err(GodementError::Bound { bound, required });
    }
    Ok(())
}

fn check_pair(s: &Sheaf, u: PointSet, u_prime: PointSet) -> Result<(), GodementError> {
    let sp = s.space();
    sp.check_open(u)?;
    sp.check_open(u_prime)?;
    if !u_prime.is_subset(u) {
        return Err(SpaceError::Containment(sp.describe(u_prime), sp.describe(u)).into());
    }
    Ok(())
}

/// `H^q(u, u'; S)` for `q < bound`, from the relative sections of the Godement terms.
#[derive(Clone, Debug)]
pub struct RelCohomology {
    pub dims: Vec<usize>,
    /// `C•(S)(u, u')`, truncated at the bound.
    pub complex: Complex,
    pub resolution: GodementResolution,
}

impl RelCohomology {
    pub fn dim(&self, q: i32) -> usize {
        if q < 0 {
            0
        } else {
            self.dims.get(q as usize).copied().unwrap_or(0)
        }
    }

    pub fn projector(&self, q: i32) -> Matrix {
        self.complex.cohomology(q).projector
    }
}

pub fn rel_cohomology(s: &Sheaf, x_prime: PointSet, bound: usize) -> Result<RelCohomology, GodementError> {
    rel_cohomology_on(s, s.space().all(), x_prime, bound)
}

/// Relative cohomology on an open pair `(u, u')` of the space of `s`.
pub fn rel_cohomology_on(s: &Sheaf, u: PointSet, u_prime: PointSet, bound: usize) -> Result<RelCohomology, GodementError> {
    check_bound(s, bound)?;
    check_pair(s, u, u_prime)?;
    let resolution = godement_resolve(s, bound)?;
    Ok(rel_from_resolution(resolution, u, u_prime))
}

fn rel_from_resolution(resolution: GodementResolution, u: PointSet, u_prime: PointSet) -> RelCohomology {
    let (complex, _) = resolution.complex().sections_complex(u, u_prime).expect("checked pair");
    let dims = (0..resolution.bound as i32).map(|q| complex.cohomology(q).dim).collect();
    RelCohomology { dims, complex, resolution }
}

/// True when `m` induces isomorphisms on `H^q` for every `q ≤ top`.
pub fn iso_through(m: &ChainMap, top: i32) -> bool {
    (*m.degrees().start()..=top).all(|q| is_invertible(&m.on_cohomology(q)))
}

/// The total sheaf complex `C(K)^n = ⊕_{p+q=n} C^p(K^q)` with
/// `D = δ + (-1)^p C^p(d_K)`, and the embedding `κ: K → C(K)`.
#[derive(Clone, Debug)]
pub struct HyperComplex {
    pub k: SheafComplex,
    pub bound: usize,
    pub resolutions: Vec<GodementResolution>,
    /// `C•(d^q): C•(K^q) → C•(K^{q+1})`.
    pub vertical: Vec<SheafChainMap>,
    pub total: SheafComplex,
    pub kappa: SheafChainMap,
}

impl HyperComplex {
    pub fn new(k: &SheafComplex, bound: usize) -> Result<Self, GodementError> {
        let resolutions: Vec<GodementResolution> = k.terms.iter().map(|t| godement_resolve(t, bound)).collect::<Result<_, _>>()?;
        let top = k.top();
        let vertical: Vec<SheafChainMap> = (0..top)
            .map(|q| godement_map(&k.d(q), &resolutions[q as usize], &resolutions[q as usize + 1]))
            .collect::<Result<_, _>>()?;
        let n_top = bound as i32 + top;
        let term_at = |p: i32, q: i32| &resolutions[q as usize].terms[p as usize];
        let comps = |n: i32| -> Vec<(i32, i32)> {
            let qs = (n - bound as i32).max(0)..=n.min(top);
            qs.rev().map(|q| (n - q, q)).collect()
        };
        let mut terms = Vec::new();
        for n in 0..=n_top {
            let mut it = comps(n).into_iter();
            let (p, q) = it.next().expect("every total degree has a block");
            let mut s = term_at(p, q).clone();
            for (p, q) in it {
                s = s.direct_sum(term_at(p, q))?;
            }
            terms.push(s);
        }
        let space = k.space().clone();
        let offset = |n: i32, p: i32, x: usize| -> usize {
            comps(n)
                .into_iter()
                .take_while(|&(pp, _)| pp < p)
                .map(|(pp, qq)| term_at(pp, qq).stalk_dim(x))
                .sum()
        };
        let mut diffs = Vec::new();
        for n in 0..n_top {
            let src = &terms[n as usize];
            let tgt = &terms[n as usize + 1];
            let dcomps = (0..space.len())
                .map(|x| {
                    let mut m = Matrix::zeros(tgt.stalk_dim(x), src.stalk_dim(x));
                    for (p, q) in comps(n) {
                        let col = offset(n, p, x);
                        if p < bound as i32 {
                            let dg = &resolutions[q as usize].diffs[p as usize].comps[x];
                            m.put(offset(n + 1, p + 1, x), col, dg);
                        }
                        if q < top {
                            let v = vertical[q as usize].comp(p).comps[x].scale(&sign_scalar(p));
                            m.put(offset(n + 1, p, x), col, &v);
                        }
                    }
                    m
                })
                .collect();
            diffs.push(SheafMorphism {
                source: src.clone(),
                target: tgt.clone(),
                comps: dcomps,
            });
        }
        let total = SheafComplex::new(terms, diffs)?;
        let kappa_comps = (0..=top)
            .map(|q| {
                let t = total.term(q);
                let kq = k.term(q);
                let comps = (0..space.len())
                    .map(|x| {
                        let mut m = Matrix::zeros(t.stalk_dim(x), kq.stalk_dim(x));
                        m.put(offset(q, 0, x), 0, &resolutions[q as usize].aug.comps[x]);
                        m
                    })
                    .collect();
                SheafMorphism {
                    source: kq,
                    target: t,
                    comps,
                }
            })
            .collect();
        let kappa = SheafChainMap::new(k.clone(), total.clone(), kappa_comps)?;
        Ok(HyperComplex {
            k: k.clone(),
            bound,
            resolutions,
            vertical,
            total,
            kappa,
        })
    }

    fn offset(&self, n: i32, p: i32, x: usize) -> usize {
        let top = self.k.top();
        ((n - self.bound as i32).max(0)..=n.min(top))
            .rev()
            .map(|q| (n - q, q))
            .take_while(|&(pp, _)| pp < p)
            .map(|(pp, qq)| self.resolutions[qq as usize].terms[pp as usize].stalk_dim(x))
            .sum()
    }

    /// Dimensions of the section spaces `C^p(K^q)(u, u')` by bidegree.
    pub fn double(&self, u: PointSet, u_prime: PointSet) -> Result<BTreeMap<(i32, i32), usize>, SpaceError> {
        let mut out = BTreeMap::new();
        for (q, r) in self.resolutions.iter().enumerate() {
            for (p, t) in r.terms.iter().enumerate() {
                out.insert((p as i32, q as i32), t.relative_sections(u, u_prime)?.dim());
            }
        }
        Ok(out)
    }

    /// `ψ: C•(S) → C(K)` induced by `ι: S → K⁰` through `C•(ι)` into the blocks `C^p(K⁰)`.
    pub fn psi(&self, s_res: &GodementResolution, iota: &SheafMorphism) -> Result<SheafChainMap, GodementError> {
        let ci = godement_map(iota, s_res, &self.resolutions[0])?;
        let sp = self.k.space();
        let comps = (0..=self.bound as i32)
            .map(|p| {
                let t = self.total.term(p);
                let c = ci.comp(p);
                let comps = (0..sp.len())
                    .map(|x| {
                        let mut m = Matrix::zeros(t.stalk_dim(x), c.source.stalk_dim(x));
                        m.put(self.offset(p, p, x), 0, &c.comps[x]);
                        m
                    })
                    .collect();
                SheafMorphism {
                    source: c.source.clone(),
                    target: t,
                    comps,
                }
            })
            .collect();
        Ok(SheafChainMap::new(s_res.complex(), self.total.clone(), comps)?)
    }

    /// `κ` is a quasi-isomorphism of sheaf complexes: checked on every stalk below the bound.
    pub fn kappa_is_stalkwise_qis(&self) -> bool {
        let sp = self.k.space();
        (0..sp.len()).all(|x| {
            let m = self.kappa.on_sections(sp.up(x), PointSet::EMPTY).expect("open star");
            iso_through(&m, self.bound as i32 - 1)
        })
    }
}

/// `H^q(X, X'; K•)` for `q < bound`, with `φ`, `ψ` and `χ = ψ⁻¹ φ` on cohomology.
#[derive(Clone, Debug)]
pub struct Hypercohomology {
    pub dims: Vec<usize>,
    pub hyper: HyperComplex,
    /// `C(K)•(X, X')`.
    pub total: Complex,
    pub phi: ChainMap,
    pub psi: ChainMap,
    pub phi_h: Vec<Matrix>,
    pub psi_h: Vec<Matrix>,
    /// `χ^q`, present when every `H^q(ψ)` below the bound is invertible.
    pub chi: Option<Vec<Matrix>>,
    pub psi_failure: Option<i32>,
}

impl Hypercohomology {
    pub fn chi(&self) -> Result<&[Matrix], GodementError> {
        match (&self.chi, self.psi_failure) {
            (Some(c), _) => Ok(c),
            (None, q) => Err(GodementError::NotInvertible(q.unwrap_or(0))),
        }
    }
}

pub fn hypercohomology(k: &SheafComplex, x_prime: PointSet, bound: usize) -> Result<Hypercohomology, GodementError> {
    let x = k.space().all();
    check_bound(&k.terms[0], bound)?;
    check_pair(&k.terms[0], x, x_prime)?;
    let hyper = HyperComplex::new(k, bound)?;
    let (s, iota) = k.kernel_of_d0();
    let s_res = godement_resolve(&s, bound)?;
    let psi_sheaf = hyper.psi(&s_res, &iota)?;
    let phi = hyper.kappa.on_sections(x, x_prime)?;
    let psi = psi_sheaf.on_sections(x, x_prime)?;
    let total = phi.target.clone();
    let n = bound as i32;
    let dims = (0..n).map(|q| total.cohomology(q).dim).collect();
    let phi_h: Vec<Matrix> = (0..n).map(|q| phi.on_cohomology(q)).collect();
    let psi_h: Vec<Matrix> = (0..n).map(|q| psi.on_cohomology(q)).collect();
    let psi_failure = (0..n).find(|&q| !is_invertible(&psi_h[q as usize]));
    let chi = psi_failure.is_none().then(|| {
        phi_h
            .iter()
            .zip(&psi_h)
            .map(|(f, s)| &s.inverse().expect("checked invertible") * f)
            .collect()
    });
    Ok(Hypercohomology {
        dims,
        hyper,
        total,
        phi,
        psi,
        phi_h,
        psi_h,
        chi,
        psi_failure,
    })
}

/// `K•(i)` for the inclusion `i: X' → X`: `K^q(X) ⊕ K^{q-1}(X')` with
/// `d(s,t) = (ds, i⁻¹s − dt)`.
#[derive(Clone, Debug)]
pub struct OpenEmbeddingComplex {
    pub complex: Complex,
    pub alpha_star: ChainMap,
    pub beta_star: ChainMap,
    /// `i⁻¹: K•(X) → K•(X')`.
    pub restriction: ChainMap,
    /// Exactness of the long sequence of `0 → K•(X')[-1] → K•(i) → K•(X) → 0`.
    pub sequence_exact: bool,
}

pub fn open_embedding_complex(k: &SheafComplex, x_prime: PointSet) -> Result<OpenEmbeddingComplex, GodementError> {
    let x = k.space().all();
    check_pair(&k.terms[0], x, x_prime)?;
    let restriction = k.restriction_map(x, PointSet::EMPTY, x_prime, PointSet::EMPTY)?;
    let cone = co_mapping_cone(&restriction);
    let sequence_exact = les_from_ses(&cone.beta_star, &cone.alpha_star)?.is_exact();
    Ok(OpenEmbeddingComplex {
        complex: cone.m,
        alpha_star: cone.alpha_star,
        beta_star: cone.beta_star,
        restriction,
        sequence_exact,
    })
}

/// `ρ: K•(X, X') → K•(i)`, `s ↦ (s, 0)`.
pub fn relative_to_cone(k: &SheafComplex, x_prime: PointSet, cone: &OpenEmbeddingComplex) -> Result<ChainMap, GodementError> {
    let j = relative_inclusion(k, k.space().all(), x_prime)?;
    let xp = &cone.restriction.target;
    Ok(ChainMap::new(j.source.clone(), cone.complex.clone(), |q| {
        Matrix::vstack(&[&j.comp(q), &Matrix::zeros(xp.dim(q - 1), j.source.dim(q))])
    })?)
}

/// `K•(u, u') → K•(u)`.
pub fn relative_inclusion(k: &SheafComplex, u: PointSet, u_prime: PointSet) -> Result<ChainMap, GodementError> {
    Ok(k.restriction_map(u, u_prime, u, PointSet::EMPTY)?)
}

fn check_flabby(k: &SheafComplex) -> Result<(), GodementError> {
    match k.terms.iter().position(|t| !flabby_check(t)) {
        Some(q) => Err(GodementError::NotFlabby(q as i32)),
        None => Ok(()),
    }
}

/// For a complex of flabby sheaves: `ρ` is a quasi-isomorphism and
/// `H(ρ)∘δ = −H(β*)`, where `δ` is the connecting map of
/// `0 → F•(X,X') → F•(X) → F•(X') → 0`.
pub fn verify_flabby_cone_comparison(k: &SheafComplex, x_prime: PointSet) -> Result<VerificationReport, GodementError> {
    check_flabby(k)?;
    let mut rep = VerificationReport::new();
    let cone = open_embedding_complex(k, x_prime)?;
    rep.check("cone sequence exact", cone.sequence_exact, String::new);
    let j = relative_inclusion(k, k.space().all(), x_prime)?;
    let ses = les_from_ses(&j, &cone.restriction);
    rep.check("relative sections sequence is short exact", ses.is_ok(), || {
        format!("{:?}", ses.as_ref().err())
    });
    let rho = relative_to_cone(k, x_prime, &cone)?;
    rep.check("rho is a quasi-isomorphism", rho.is_quasi_iso(), String::new);
    if ses.is_ok() {
        for q in rho.degrees() {
            let delta = connecting_map(&j, &cone.restriction, q - 1);
            let lhs = &rho.on_cohomology(q) * &delta;
            let rhs = -&cone.beta_star.on_cohomology(q);
            rep.check(
                format!("H(rho) after the connecting map is -H(beta*) in degree {q}"),
                lhs == rhs,
                || format!("{lhs} vs {rhs}"),
            );
        }
    }
    Ok(rep)
}

/// Checks that `0 → S → K⁰ → K¹ → …` is exact on stalks, with `S = ker d⁰`.
pub(crate) fn check_resolution(k: &SheafComplex, iota: &SheafMorphism) -> Result<(), GodementError> {
    let sp = k.space();
    for x in 0..sp.len() {
        for q in 0..=k.top() {
            let incoming = if q == 0 {
                iota.comps[x].clone()
            } else {
                k.d(q - 1).comps[x].clone()
            };
            if image(&incoming) != kernel(&k.d(q).comps[x]) {
                return Err(GodementError::HypothesisFailed {
                    q1: q,
                    q2: 0,
                    reason: format!("the resolution is not exact at K^{q} on the stalk at {}", sp.label(x)),
                });
            }
        }
    }
    Ok(())
}

/// The comparison between `H(K•(i))` and `H(X, X'; S)` for a resolution `0 → S → K•`
/// whose terms have no higher cohomology on `X` and `X'`. Every map of the
/// comparison diagram is built as a matrix and the commutation relations are
/// checked degree by degree below the bound.
pub fn verify_resolution_comparison(k: &SheafComplex, x_prime: PointSet, bound: usize) -> Result<VerificationReport, GodementError> {
    let x = k.space().all();
    check_bound(&k.terms[0], bound)?;
    check_pair(&k.terms[0], x, x_prime)?;
    let (s, iota) = kernel_sheaf(&k.d(0));
    check_resolution(k, &iota)?;
    for (q1, t) in k.terms.iter().enumerate() {
        let res = godement_resolve(t, bound)?;
        for (u, name) in [(x, "X"), (x_prime, "X'")] {
            let h = rel_from_resolution(res.clone(), u, PointSet::EMPTY);
            if let Some(q2) = (1..bound).find(|&q2| h.dims[q2] != 0) {
                return Err(GodementError::HypothesisFailed {
                    q1: q1 as i32,
                    q2: q2 as i32,
                    reason: format!("H^{q2}({name}; K^{q1}) has dimension {}", h.dims[q2]),
                });
            }
        }
    }

    let mut rep = VerificationReport::new();
    let top = bound as i32 - 1;
    let hyper = HyperComplex::new(k, bound)?;
    rep.check(
        "kappa is a stalkwise quasi-isomorphism",
        hyper.kappa_is_stalkwise_qis(),
        String::new,
    );
    let f = &hyper.total;
    let s_res = godement_resolve(&s, bound)?;
    let cs = s_res.complex();
    let psi = hyper.psi(&s_res, &iota)?;

    let cone_k = open_embedding_complex(k, x_prime)?;
    let cone_f = open_embedding_complex(f, x_prime)?;
    let kappa_x = hyper.kappa.on_sections(x, PointSet::EMPTY)?;
    let kappa_xp = hyper.kappa.on_sections(x_prime, PointSet::EMPTY)?;
    let kappa_i = cone_functoriality(&kappa_x, &kappa_xp, &cone_k.restriction, &cone_f.restriction)?;
    let psi_x = psi.on_sections(x, PointSet::EMPTY)?;
    let psi_xp = psi.on_sections(x_prime, PointSet::EMPTY)?;
    let psi_rel = psi.on_sections(x, x_prime)?;
    let rho_f = relative_to_cone(f, x_prime, &cone_f)?;
    let j_s = relative_inclusion(&cs, x, x_prime)?;
    let i_s = cs.restriction_map(x, PointSet::EMPTY, x_prime, PointSet::EMPTY)?;
    les_from_ses(&j_s, &i_s)?;

    let inv = |m: Matrix, what: &str, q: i32, rep: &mut VerificationReport| -> Option<Matrix> {
        let r = m.inverse().filter(|_| m.rows() == m.cols());
        rep.check(format!("{what} invertible in degree {q}"), r.is_some(), || {
            format!("{}x{} of rank {}", m.rows(), m.cols(), m.rank())
        });
        r
    };
    let eq = |rep: &mut VerificationReport, name: String, a: Matrix, b: Matrix| {
        rep.check(name, a == b, || format!("{a} vs {b}"));
    };

    let mut chi_f_x = BTreeMap::new();
    let mut chi_f_xp = BTreeMap::new();
    let mut chi_rho = BTreeMap::new();
    for q in -1..=top {
        let (Some(a), Some(b), Some(c), Some(r)) = (
            inv(psi_x.on_cohomology(q), "psi on X", q, &mut rep),
            inv(psi_xp.on_cohomology(q), "psi on X'", q, &mut rep),
            inv(psi_rel.on_cohomology(q), "psi on (X, X')", q, &mut rep),
            inv(rho_f.on_cohomology(q), "rho for C(K)", q, &mut rep),
        ) else {
            return Ok(rep);
        };
        chi_f_x.insert(q, a);
        chi_f_xp.insert(q, b);
        chi_rho.insert(q, &c * &r);
    }

    for q in 0..=top {
        let ki = kappa_i.on_cohomology(q);
        let (bk, bf) = (cone_k.beta_star.on_cohomology(q), cone_f.beta_star.on_cohomology(q));
        let (ak, af) = (cone_k.alpha_star.on_cohomology(q), cone_f.alpha_star.on_cohomology(q));
        let (ik, i_f) = (cone_k.restriction.on_cohomology(q), cone_f.restriction.on_cohomology(q));
        let (kx, kxp, kxp_prev) = (kappa_x.on_cohomology(q), kappa_xp.on_cohomology(q), kappa_xp.on_cohomology(q - 1));

        eq(
            &mut rep,
            format!("kappa(i) commutes with beta* in degree {q}"),
            &ki * &bk,
            &bf * &kxp_prev,
        );
        eq(
            &mut rep,
            format!("kappa(i) commutes with alpha* in degree {q}"),
            &af * &ki,
            &kx * &ak,
        );
        eq(
            &mut rep,
            format!("kappa commutes with restriction to X' in degree {q}"),
            &i_f * &kx,
            &kxp * &ik,
        );

        let chi_k_x = &chi_f_x[&q] * &kx;
        let direct = &psi_x.on_cohomology(q).inverse().expect("checked") * &kappa_x.on_cohomology(q);
        eq(
            &mut rep,
            format!("comparison on X factors through kappa in degree {q}"),
            chi_k_x.clone(),
            direct,
        );
        rep.check(
            format!("comparison on X invertible in degree {q}"),
            is_invertible(&chi_k_x),
            String::new,
        );
        let chi_k_xp = &chi_f_xp[&q] * &kxp;
        rep.check(
            format!("comparison on X' invertible in degree {q}"),
            is_invertible(&chi_k_xp),
            String::new,
        );

        eq(
            &mut rep,
            format!("cone projection matches relative inclusion in degree {q}"),
            &chi_f_x[&q] * &af,
            &j_s.on_cohomology(q) * &chi_rho[&q],
        );
        eq(
            &mut rep,
            format!("restriction to X' commutes with the comparison in degree {q}"),
            &chi_f_xp[&q] * &i_f,
            &i_s.on_cohomology(q) * &chi_f_x[&q],
        );
        let delta_s = connecting_map(&j_s, &i_s, q - 1);
        eq(
            &mut rep,
            format!("cone inclusion anti-commutes with the connecting map in degree {q}"),
            &chi_rho[&q] * &bf,
            -&(&delta_s * &chi_f_xp[&(q - 1)]),
        );

        rep.check(
            format!("kappa(i) invertible on cohomology in degree {q}"),
            is_invertible(&ki),
            || format!("{}x{} of rank {}", ki.rows(), ki.cols(), ki.rank()),
        );
        let hk = cone_k.complex.cohomology(q).dim;
        let hs = psi_rel.source.cohomology(q).dim;
        rep.check(format!("dim H^{q}(K(i)) equals dim H^{q}(X, X'; S)"), hk == hs, || {
            format!("{hk} vs {hs}")
        });
    }
    Ok(rep)
}

fn is_open_superset(sp_opens: &[PointSet], closed: PointSet) -> Vec<PointSet> {
    sp_opens.iter().copied().filter(|v| closed.is_subset(*v)).collect()
}

/// Basic properties of relative cohomology on a triple `x'' ⊆ x' ⊆ X`:
/// degree zero is relative sections, flabby sheaves are acyclic, the triple
/// sequence is exact, excision holds, and a short exact sequence of sheaves
/// gives an exact long sequence. Without `ses`, `0 → S → C⁰(S) → Q₀ → 0` is used.
pub fn verify_relative_properties(
    s: &Sheaf,
    x_prime: PointSet,
    x_dprime: PointSet,
    bound: usize,
    ses: Option<(&SheafMorphism, &SheafMorphism)>,
) -> Result<VerificationReport, GodementError> {
    let sp = s.space().clone();
    let x = sp.all();
    check_bound(s, bound)?;
    check_pair(s, x, x_prime)?;
    check_pair(s, x_prime, x_dprime)?;
    let top = bound as i32 - 1;
    let mut rep = VerificationReport::new();
    let res = godement_resolve(s, bound)?;
    let cs = res.complex();

    let h = rel_from_resolution(res.clone(), x, x_prime);
    let sec = s.relative_sections(x, x_prime)?.dim();
    rep.check("H^0 equals relative sections", h.dims[0] == sec, || {
        format!("{} vs {sec}", h.dims[0])
    });

    let mut flabby: Vec<(String, Sheaf)> = res.terms.iter().enumerate().map(|(p, t)| (format!("C^{p}"), t.clone())).collect();
    if flabby_check(s) {
        flabby.push(("the sheaf".into(), s.clone()));
    }
    for (name, t) in flabby {
        let rt = godement_resolve(&t, bound)?;
        for (u, u_p) in [(x, x_prime), (x, x_dprime), (x_prime, x_dprime)] {
            let hr = rel_from_resolution(rt.clone(), u, u_p);
            let ok = hr.dims.iter().skip(1).all(|&d| d == 0);
            rep.check(
                format!("{name} has no higher cohomology on ({}, {})", sp.describe(u), sp.describe(u_p)),
                ok,
                || format!("dims {:?}", hr.dims),
            );
        }
    }

    let j = cs.restriction_map(x, x_prime, x, x_dprime)?;
    let i = cs.restriction_map(x, x_dprime, x_prime, x_dprime)?;
    match les_from_ses(&j, &i) {
        Ok(les) => {
            let failures = les.sequence.failures();
            rep.check("triple sequence exact", failures.is_empty(), || failures.join("; "));
        }
        Err(e) => {
            rep.check("triple sequence exact", false, || e.to_string());
        }
    }

    let closed = x.minus(x_prime);
    let base = h.complex.clone();
    for v in is_open_superset(&sp.opens(), closed) {
        let m = cs.restriction_map(x, x_prime, v, v.minus(closed))?;
        debug_assert!(m.source == base);
        rep.check(format!("excision to {}", sp.describe(v)), iso_through(&m, top), || {
            format!(
                "{:?} vs {:?}",
                (0..=top).map(|q| m.source.cohomology(q).dim).collect::<Vec<_>>(),
                (0..=top).map(|q| m.target.cohomology(q).dim).collect::<Vec<_>>()
            )
        });
    }

    let (a, b) = match ses {
        Some((a, b)) => (a.clone(), b.clone()),
        None => {
            let (_, aug) = c0(s);
            let q = cokernel(&aug);
            (aug, q.proj)
        }
    };
    let stalk_exact = (0..sp.len()).all(|p| {
        let (ap, bp) = (&a.comps[p], &b.comps[p]);
        ap.rank() == ap.cols() && bp.rank() == bp.rows() && image(ap) == kernel(bp)
    });
    rep.check("sheaf sequence exact on stalks", stalk_exact, String::new);
    if stalk_exact {
        let ra = godement_resolve(&a.source, bound)?;
        let rb = godement_resolve(&a.target, bound)?;
        let rc = godement_resolve(&b.target, bound)?;
        let ca = godement_map(&a, &ra, &rb)?.on_sections(x, x_prime)?;
        let cb = godement_map(&b, &rb, &rc)?.on_sections(x, x_prime)?;
        match les_from_ses(&ca, &cb) {
            Ok(les) => {
                let failures = les.sequence.failures();
                rep.check("sheaf sequence gives an exact long sequence", failures.is_empty(), || {
                    failures.join("; ")
                });
            }
            Err(e) => {
                rep.check("sheaf sequence gives an exact long sequence", false, || e.to_string());
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finspace::FinSpace;

    fn pseudocircle() -> Arc<FinSpace> {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        Arc::new(FinSpace::from_hasse(labels, &[(2, 0), (2, 1), (3, 0), (3, 1)]).unwrap())
    }

    fn sierpinski() -> Arc<FinSpace> {
        // o open, c closed, c ≤ o.
        let labels = ["o", "c"].map(String::from).to_vec();
        Arc::new(FinSpace::from_hasse(labels, &[(1, 0)]).unwrap())
    }

    fn point() -> Arc<FinSpace> {
        Arc::new(FinSpace::from_hasse(vec!["p".into()], &[]).unwrap())
    }

    #[test]
    fn point_resolution_stops() {
        let s = Sheaf::constant(point(), 3);
        let r = godement_resolve(&s, 2).unwrap();
        assert_eq!(r.terms[0].dims(), &[3]);
        assert!(r.quotient(0).is_zero());
        assert!(r.is_complete());
    }

    #[test]
    fn sierpinski_c0_dims() {
        let s = Sheaf::constant(sierpinski(), 1);
        let r = godement_resolve(&s, 3).unwrap();
        assert_eq!(r.terms[0].dims(), &[1, 2]);
        assert_eq!(r.terms[1].dims(), &[0, 1]);
        assert!(r.audit().passed());
        let h = rel_cohomology(&s, PointSet::EMPTY, 3).unwrap();
        assert_eq!(h.dims, vec![1, 0, 0]);
    }

    #[test]
    fn flabby_examples() {
        let x = pseudocircle();
        assert!(!flabby_check(&Sheaf::constant(x.clone(), 1)));
        assert!(flabby_check(&Sheaf::zero(x.clone())));
        assert!(flabby_check(&c0(&Sheaf::constant(x, 1)).0));
    }

    #[test]
    fn pseudocircle_cohomology() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        assert_eq!(rel_cohomology(&s, PointSet::EMPTY, 3).unwrap().dims, vec![1, 1, 0]);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        assert_eq!(rel_cohomology(&s, arc, 3).unwrap().dims, vec![0, 1, 0]);
        // Stability under a larger bound.
        assert_eq!(rel_cohomology(&s, arc, 4).unwrap().dims, vec![0, 1, 0, 0]);
        assert!(matches!(rel_cohomology(&s, arc, 2), Err(GodementError::Bound { .. })));
    }

    #[test]
    fn hypercohomology_of_single_sheaf_is_rel_cohomology() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let h = hypercohomology(&SheafComplex::single(s.clone()), arc, 3).unwrap();
        assert_eq!(h.dims, rel_cohomology(&s, arc, 3).unwrap().dims);
        assert!(h.chi().is_ok());
        assert!(h.hyper.kappa_is_stalkwise_qis());
    }

    #[test]
    fn hypercohomology_of_godement_complex() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let k = godement_resolve(&s, 3).unwrap().complex();
        let h = hypercohomology(&k, arc, 3).unwrap();
        assert_eq!(h.dims, vec![0, 1, 0]);
        for (q, c) in h.chi().unwrap().iter().enumerate() {
            assert!(is_invertible(c), "degree {q}");
            assert!(is_invertible(&h.phi_h[q]));
        }
    }

    #[test]
    fn open_embedding_complex_cases() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let k = godement_resolve(&s, 3).unwrap().complex();
        let e = open_embedding_complex(&k, PointSet::EMPTY).unwrap();
        assert_eq!(e.complex, k.sections_over(x.all()));
        let full = open_embedding_complex(&k, x.all()).unwrap();
        assert!(full.complex.is_acyclic());
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let c = open_embedding_complex(&k, arc).unwrap();
        assert!(c.sequence_exact);
        assert_eq!(c.complex.cohomology(1).dim, 1);
        assert_eq!(c.complex.cohomology(0).dim, 0);
    }

    #[test]
    fn flabby_cone_comparison() {
        let x = pseudocircle();
        let k = godement_resolve(&Sheaf::constant(x.clone(), 1), 3).unwrap().complex();
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let rep = verify_flabby_cone_comparison(&k, arc).unwrap();
        assert!(rep.passed(), "{rep}");
        let not_flabby = SheafComplex::single(Sheaf::constant(x, 1));
        assert_eq!(
            verify_flabby_cone_comparison(&not_flabby, arc).unwrap_err(),
            GodementError::NotFlabby(0)
        );
    }

    #[test]
    fn resolution_comparison_on_pseudocircle_pair() {
        let x = pseudocircle();
        let k = godement_resolve(&Sheaf::constant(x.clone(), 1), 3).unwrap().complex();
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let rep = verify_resolution_comparison(&k, arc, 3).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn broken_resolution_is_rejected() {
        let x = pseudocircle();
        let mut k = godement_resolve(&Sheaf::constant(x.clone(), 1), 3).unwrap().complex();
        k.diffs[0] = k.terms[0].zero_to(&k.terms[1]);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let e = verify_resolution_comparison(&k, arc, 3).unwrap_err();
        assert!(matches!(e, GodementError::HypothesisFailed { q1: 1, q2: 0, .. }), "{e}");
    }

    #[test]
    fn relative_properties_on_pseudocircle_triple() {
        let x = pseudocircle();
        let s = Sheaf::constant(x.clone(), 1);
        let arc = x.set_of(&["a", "b", "c"]).unwrap();
        let rep = verify_relative_properties(&s, arc, PointSet::EMPTY, 3, None).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn relative_properties_with_skyscraper_sequence() {
        let x = sierpinski();
        let s = Sheaf::constant(x.clone(), 1);
        let sky = Sheaf::concentrated_at(x.clone(), 1, 1);
        let ext = Sheaf::concentrated_at(x.clone(), 0, 1);
        let a = SheafMorphism::new(ext, s.clone(), vec![Matrix::identity(1), Matrix::zeros(1, 0)]).unwrap();
        let b = SheafMorphism::new(s, sky, vec![Matrix::zeros(0, 1), Matrix::identity(1)]).unwrap();
        let rep = verify_relative_properties(&a.target, PointSet::from_points([0]), PointSet::EMPTY, 3, Some((&a, &b))).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
