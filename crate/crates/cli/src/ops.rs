//! Scenario operations. Names are resolved for every operation before any of them
//! runs; failures during a run become failed verdicts with their witness.

use std::fmt::Display;

use relcoh::cech::{
    cech_complex, coboundary_simplify, cover_comparison_map, excision, full_set_homotopy, pou_coboundary, rel_sections_cohomology,
    total_complex, triple_les, two_set_inverse_on_cohomology, two_set_relative, verify_leray, verify_neighborhood_independence, CechError,
    CochainMode, CoveringPair, DiscretePartitionOfUnity,
};
use relcoh::cylinder::{
    canonical_eta, canonical_open_embedding, cohom_of_morphism, mapping_cylinder, sheaf_co_mapping_cone, verify_cylinder_cone,
    verify_generalized_comparison, zstar_sheaf, CylinderSpace, MorphismResolution,
};
use relcoh::finspace::{cokernel, pushforward, ContinuousMap, PointSet, Sheaf, SheafMorphism};
use relcoh::godement::{
    c0, godement_resolve, hypercohomology, open_embedding_complex, rel_cohomology_on, verify_flabby_cone_comparison,
    verify_relative_properties, verify_resolution_comparison,
};
use relcoh::homalg::{
    co_mapping_cone, connecting_map, cotriangle_h, les_from_ses, mapping_cone, transpose_duality_check, ChainMap, Complex,
};
use relcoh::ratlin::{kernel, Matrix};

use crate::error::InputError;
use crate::report::OperationReport;
use crate::scenario::{CoverExpectation, MorphismArgs, Operation, SetRef};
use crate::universe::{parse_matrix, point, space_error, Universe};

pub struct Context {
    /// A requested truncation bound; each operation uses at least the height of its space plus two.
    pub bound: Option<usize>,
    pub mode: CochainMode,
}

impl Context {
    fn bound(&self, height: i32) -> usize {
        let required = (height + 2).max(1) as usize;
        self.bound.unwrap_or(required).max(required)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum MorphismOp {
    Zstar,
    Cohomology,
    CylinderCone,
    Comparison,
}

/// An operation with every name resolved.
pub enum Resolved {
    Cohomology {
        s: Sheaf,
        u: PointSet,
        up: PointSet,
        subject: String,
        expect: Option<Vec<usize>>,
    },
    Hypercohomology {
        s: Sheaf,
        xp: PointSet,
        length: Option<usize>,
        subject: String,
        expect: Option<Vec<usize>>,
    },
    ResolutionComparison {
        s: Sheaf,
        xp: PointSet,
        length: Option<usize>,
        subject: String,
    },
    FlabbyCone {
        s: Sheaf,
        xp: PointSet,
        subject: String,
    },
    RelativeProperties {
        s: Sheaf,
        xp: PointSet,
        xpp: PointSet,
        subject: String,
    },
    Cech {
        pair: CoveringPair,
        s: Sheaf,
        subject: String,
        expect: Option<Vec<usize>>,
    },
    Total {
        pair: CoveringPair,
        s: Sheaf,
        length: Option<usize>,
        subject: String,
    },
    Relative {
        s: Sheaf,
        xp: PointSet,
        v1: Option<PointSet>,
        subject: String,
        expect: Option<Vec<usize>>,
    },
    Excision {
        s: Sheaf,
        closed: PointSet,
        open: PointSet,
        subject: String,
    },
    Triple {
        s: Sheaf,
        xp: PointSet,
        xpp: PointSet,
        subject: String,
    },
    Leray {
        pair: CoveringPair,
        s: Sheaf,
        expect: Option<CoverExpectation>,
        subject: String,
    },
    Pou {
        pair: CoveringPair,
        pou: DiscretePartitionOfUnity,
        s: Sheaf,
        subject: String,
    },
    Homotopy {
        pair: CoveringPair,
        s: Sheaf,
        subject: String,
    },
    CoMappingCone {
        phi: ChainMap,
        subject: String,
        expect: Option<Vec<usize>>,
    },
    Cylinder {
        f: ContinuousMap,
        subject: String,
    },
    Morphism {
        which: MorphismOp,
        f: ContinuousMap,
        s: Sheaf,
        t: Sheaf,
        eta: SheafMorphism,
        subject: String,
        expect: Option<Vec<usize>>,
    },
}

fn containment(space: &relcoh::finspace::FinSpace, inner: PointSet, outer: PointSet) -> Result<(), InputError> {
    if inner.is_subset(outer) {
        Ok(())
    } else {
        Err(InputError::validation(
            "containment of opens",
            format!("{} is not contained in {}", space.describe(inner), space.describe(outer)),
        ))
    }
}

fn morphism(u: &Universe, a: &MorphismArgs, which: MorphismOp) -> Result<Resolved, InputError> {
    let f = u.map(&a.map)?.clone();
    let s = u.sheaf(&a.sheaf)?.clone();
    if **s.space() != *f.target {
        return Err(InputError::validation(
            "same underlying space",
            format!("{:?} must live on the target of {:?}", a.sheaf, a.map),
        ));
    }
    let (t, eta) = match (&a.target_sheaf, &a.eta) {
        (None, None) => canonical_eta(&f, &s),
        (Some(tn), Some(eta)) => {
            let t = u.sheaf(tn)?.clone();
            if **t.space() != *f.source {
                return Err(InputError::validation(
                    "same underlying space",
                    format!("{tn:?} must live on the source of {:?}", a.map),
                ));
            }
            let ft = pushforward(&f, &t);
            let mut comps = Vec::new();
            for x in 0..f.target.len() {
                let label = f.target.label(x);
                let rows = eta
                    .get(label)
                    .ok_or_else(|| InputError::validation("η given at every point", format!("no component at {label:?}")))?;
                comps.push(parse_matrix(rows, (ft.stalk_dim(x), s.stalk_dim(x)), &format!("η at {label}"))?);
            }
            if let Some(extra) = eta.keys().find(|k| point(&f.target, k).is_err()) {
                return Err(InputError::UnknownName {
                    kind: "point",
                    name: extra.clone(),
                });
            }
            let eta = SheafMorphism::new(s.clone(), ft, comps).map_err(space_error)?;
            (t, eta)
        }
        _ => {
            return Err(InputError::validation(
                "η with its target sheaf",
                "target_sheaf and eta must be given together",
            ))
        }
    };
    let subject = match &a.target_sheaf {
        None => format!("{}: {} → {}_*{}^-1{}", a.map, a.sheaf, a.map, a.map, a.sheaf),
        Some(tn) => format!("{}: {} → {}_*{}", a.map, a.sheaf, a.map, tn),
    };
    Ok(Resolved::Morphism {
        which,
        f,
        s,
        t,
        eta,
        subject,
        expect: a.expect.clone(),
    })
}

pub fn resolve(op: &Operation, u: &Universe) -> Result<Resolved, InputError> {
    let sheaf = |n: &str| u.sheaf(n).cloned();
    let cover = |n: &str| u.cover(n);
    let named = |s: &Sheaf, r: PointSet| u.describe(s.space(), r);
    let opt_open = |s: &Sheaf, r: &Option<SetRef>, default: PointSet| r.as_ref().map_or(Ok(default), |r| u.open(s.space(), r));
    Ok(match op {
        Operation::Cohomology {
            sheaf: n,
            on,
            relative_to,
            expect,
        } => {
            let s = sheaf(n)?;
            let uu = opt_open(&s, on, s.space().all())?;
            let up = opt_open(&s, relative_to, PointSet::EMPTY)?;
            containment(s.space(), up, uu)?;
            let subject = format!("H^q({}, {}; {n})", named(&s, uu), named(&s, up));
            Resolved::Cohomology {
                s,
                u: uu,
                up,
                subject,
                expect: expect.clone(),
            }
        }
        Operation::Hypercohomology {
            sheaf: n,
            relative_to,
            length,
            expect,
        } => {
            let s = sheaf(n)?;
            let xp = opt_open(&s, relative_to, PointSet::EMPTY)?;
            let subject = format!("H^q(all, {}; C({n}))", named(&s, xp));
            Resolved::Hypercohomology {
                s,
                xp,
                length: *length,
                subject,
                expect: expect.clone(),
            }
        }
        Operation::ResolutionComparison {
            sheaf: n,
            relative_to,
            length,
        } => {
            let s = sheaf(n)?;
            let xp = u.open(s.space(), relative_to)?;
            let subject = format!("C({n}) relative to {}", named(&s, xp));
            Resolved::ResolutionComparison {
                s,
                xp,
                length: *length,
                subject,
            }
        }
        Operation::FlabbyCone { sheaf: n, relative_to } => {
            let s = sheaf(n)?;
            let xp = u.open(s.space(), relative_to)?;
            let subject = format!("C({n}) relative to {}", named(&s, xp));
            Resolved::FlabbyCone { s, xp, subject }
        }
        Operation::RelativeProperties {
            sheaf: n,
            x_prime,
            x_second,
        } => {
            let s = sheaf(n)?;
            let xp = u.open(s.space(), x_prime)?;
            let xpp = u.open(s.space(), x_second)?;
            containment(s.space(), xpp, xp)?;
            let subject = format!("{n} on all ⊇ {} ⊇ {}", named(&s, xp), named(&s, xpp));
            Resolved::RelativeProperties { s, xp, xpp, subject }
        }
        Operation::Cech {
            cover: c,
            sheaf: n,
            expect,
        } => {
            let (s, cv) = (sheaf(n)?, cover(c)?);
            same_space(&s, &cv.pair, n, c)?;
            Resolved::Cech {
                pair: cv.pair.clone(),
                s,
                subject: format!("{c} with coefficients {n}"),
                expect: expect.clone(),
            }
        }
        Operation::Total {
            cover: c,
            sheaf: n,
            length,
        } => {
            let (s, cv) = (sheaf(n)?, cover(c)?);
            same_space(&s, &cv.pair, n, c)?;
            if cv.pair.ground != s.space().all() {
                return Err(InputError::validation("covering of the whole space", c));
            }
            Resolved::Total {
                pair: cv.pair.clone(),
                s,
                length: *length,
                subject: format!("{c} with coefficients C({n})"),
            }
        }
        Operation::Relative {
            sheaf: n,
            relative_to,
            neighborhood,
            expect,
        } => {
            let s = sheaf(n)?;
            let xp = u.open(s.space(), relative_to)?;
            let v1 = neighborhood.as_ref().map(|r| u.open(s.space(), r)).transpose()?;
            if let Some(v1) = v1 {
                if v1.union(xp) != s.space().all() {
                    return Err(InputError::validation(
                        "neighborhood covers the complement",
                        format!("{} ∪ {} is not everything", named(&s, v1), named(&s, xp)),
                    ));
                }
            }
            let subject = format!("sections of C({n}) relative to {}", named(&s, xp));
            Resolved::Relative {
                s,
                xp,
                v1,
                subject,
                expect: expect.clone(),
            }
        }
        Operation::Excision { sheaf: n, closed, open } => {
            let s = sheaf(n)?;
            let cl = u.closed(s.space(), closed)?;
            let op = u.open(s.space(), open)?;
            containment(s.space(), cl, op)?;
            let subject = format!(
                "C({n}) excising the complement of {} from {}",
                s.space().describe(cl),
                named(&s, op)
            );
            Resolved::Excision {
                s,
                closed: cl,
                open: op,
                subject,
            }
        }
        Operation::Triple {
            sheaf: n,
            x_prime,
            x_second,
        } => {
            let s = sheaf(n)?;
            let xp = u.open(s.space(), x_prime)?;
            let xpp = u.open(s.space(), x_second)?;
            containment(s.space(), xpp, xp)?;
            let subject = format!("C({n}) on all ⊇ {} ⊇ {}", named(&s, xp), named(&s, xpp));
            Resolved::Triple { s, xp, xpp, subject }
        }
        Operation::Leray {
            cover: c,
            sheaf: n,
            expect,
        } => {
            let (s, cv) = (sheaf(n)?, cover(c)?);
            same_space(&s, &cv.pair, n, c)?;
            Resolved::Leray {
                pair: cv.pair.clone(),
                s,
                expect: *expect,
                subject: format!("{c} with coefficients {n}"),
            }
        }
        Operation::Pou { cover: c, sheaf: n } => {
            let (s, cv) = (sheaf(n)?, cover(c)?);
            same_space(&s, &cv.pair, n, c)?;
            Resolved::Pou {
                pair: cv.pair.clone(),
                pou: cv.pou.clone(),
                s,
                subject: format!("{c} with coefficients C({n})"),
            }
        }
        Operation::Homotopy { cover: c, sheaf: n } => {
            let (s, cv) = (sheaf(n)?, cover(c)?);
            same_space(&s, &cv.pair, n, c)?;
            Resolved::Homotopy {
                pair: cv.pair.clone(),
                s,
                subject: format!("{c} with coefficients C({n})"),
            }
        }
        Operation::CoMappingCone { chain_map, expect } => Resolved::CoMappingCone {
            phi: u.chain_map(chain_map)?.clone(),
            subject: chain_map.clone(),
            expect: expect.clone(),
        },
        Operation::Cylinder { map } => Resolved::Cylinder {
            f: u.map(map)?.clone(),
            subject: format!("Z({map})"),
        },
        Operation::Zstar(a) => morphism(u, a, MorphismOp::Zstar)?,
        Operation::MorphismCohomology(a) => morphism(u, a, MorphismOp::Cohomology)?,
        Operation::CylinderCone(a) => morphism(u, a, MorphismOp::CylinderCone)?,
        Operation::GeneralizedComparison(a) => morphism(u, a, MorphismOp::Comparison)?,
    })
}

fn same_space(s: &Sheaf, pair: &CoveringPair, sn: &str, cn: &str) -> Result<(), InputError> {
    if **s.space() != *pair.space {
        return Err(InputError::validation(
            "same underlying space",
            format!("sheaf {sn:?} and cover {cn:?}"),
        ));
    }
    Ok(())
}

fn failed(rep: &mut OperationReport, e: impl Display) {
    rep.check("operation completed", false, || e.to_string());
}

macro_rules! attempt {
    ($rep:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                failed(&mut $rep, err);
                return $rep;
            }
        }
    };
}

fn invertible(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

fn cohomology_dims(c: &Complex, top: i32) -> Vec<usize> {
    (0..=top).map(|q| c.cohomology(q).dim).collect()
}

fn nonzero_witness(c: &Complex, q: i32) -> String {
    let h = c.cohomology(q);
    let v: Vec<String> = h.reps.column(0).iter().map(relcoh::ratlin::format_scalar).collect();
    format!("degree {q}, class represented by ({})", v.join(", "))
}

pub fn run(index: usize, op: &str, r: Resolved, ctx: &Context) -> OperationReport {
    match r {
        Resolved::Cohomology { s, u, up, subject, expect } => {
            let mut rep = OperationReport::new(index, op, subject);
            let height = s.space().height();
            let b = ctx.bound(height);
            rep.bound = Some(b);
            let h = attempt!(rep, rel_cohomology_on(&s, u, up, b));
            let h1 = attempt!(rep, rel_cohomology_on(&s, u, up, b + 1));
            rep.table("H^q", 0, h.dims.clone());
            rep.check("one more resolution term changes no dimension", h1.dims[..b] == h.dims[..], || {
                format!("{:?} vs {:?}", h.dims, h1.dims)
            });
            let above = (0..h1.dims.len()).find(|&q| q as i32 > height && h1.dims[q] != 0);
            rep.check(format!("vanishes above the height {height}"), above.is_none(), || {
                nonzero_witness(&h1.complex, above.unwrap() as i32)
            });
            if let Some(e) = expect {
                rep.expect_dims("H^q", &e, &h.dims);
            }
            rep
        }
        Resolved::Hypercohomology {
            s,
            xp,
            length,
            subject,
            expect,
        } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let len = length.unwrap_or(b);
            let k = attempt!(rep, godement_resolve(&s, len)).complex();
            let h = attempt!(rep, hypercohomology(&k, xp, b));
            rep.table("hypercohomology", 0, h.dims.clone());
            rep.check(
                "the hyper-resolution embedding is a stalkwise quasi-isomorphism",
                h.hyper.kappa_is_stalkwise_qis(),
                String::new,
            );
            for q in 0..b {
                rep.check(
                    format!("sections of the resolution compute the hypercohomology in degree {q}"),
                    invertible(&h.phi_h[q]),
                    || format!("H^{q}(phi) has rank {} of {}", h.phi_h[q].rank(), h.phi_h[q].rows()),
                );
            }
            let rel = attempt!(rep, rel_cohomology_on(&s, s.space().all(), xp, b));
            for q in 0..len.min(b) {
                rep.check(
                    format!("the resolved sheaf computes the hypercohomology in degree {q}"),
                    invertible(&h.psi_h[q]),
                    || format!("H^{q}(psi) has rank {} of {}", h.psi_h[q].rank(), h.psi_h[q].rows()),
                );
                rep.check(
                    format!("dimension in degree {q} equals that of the sheaf"),
                    rel.dims[q] == h.dims[q],
                    || format!("{} vs {}", rel.dims[q], h.dims[q]),
                );
            }
            if let Some(e) = expect {
                rep.expect_dims("hypercohomology", &e, &h.dims);
            }
            rep
        }
        Resolved::ResolutionComparison { s, xp, length, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, length.unwrap_or(b))).complex();
            let cone = attempt!(rep, open_embedding_complex(&k, xp));
            rep.table("cone complex", 0, cohomology_dims(&cone.complex, b as i32 - 1));
            rep.absorb(attempt!(rep, verify_resolution_comparison(&k, xp, b)));
            rep
        }
        Resolved::FlabbyCone { s, xp, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, b)).complex();
            rep.absorb(attempt!(rep, verify_flabby_cone_comparison(&k, xp)));
            rep
        }
        Resolved::RelativeProperties { s, xp, xpp, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let (_, aug) = c0(&s);
            let q = cokernel(&aug);
            rep.absorb(attempt!(rep, verify_relative_properties(&s, xp, xpp, b, Some((&aug, &q.proj)))));
            rep
        }
        Resolved::Cech { pair, s, subject, expect } => {
            let mut rep = OperationReport::new(index, op, subject);
            let alt = attempt!(rep, cech_complex(&pair, &s, CochainMode::Alternating));
            let full = attempt!(rep, cech_complex(&pair, &s, CochainMode::Full));
            let chosen = if ctx.mode == CochainMode::Full { &full } else { &alt };
            let top = chosen.valid_top();
            let dims = cohomology_dims(&chosen.total, top);
            rep.table(format!("Cech cohomology ({} cochains)", mode_name(ctx.mode)), 0, dims.clone());
            for c in [&alt, &full] {
                let t = &c.total;
                let bad = (t.lo()..t.hi()).find(|&q| !(&t.d(q + 1) * &t.d(q)).is_zero());
                rep.check(format!("D∘D = 0 ({} cochains)", mode_name(c.mode)), bad.is_none(), || {
                    format!("degree {}", bad.unwrap())
                });
            }
            let common = full.valid_top().min(alt.valid_top());
            let (a, f) = (cohomology_dims(&alt.total, common), cohomology_dims(&full.total, common));
            rep.check(
                format!("alternating and full cochains agree through degree {common}"),
                a == f,
                || format!("{a:?} vs {f:?}"),
            );
            if let Some(e) = expect {
                rep.expect_dims("Cech cohomology", &e, &dims);
            }
            rep
        }
        Resolved::Total { pair, s, length, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, length.unwrap_or(b))).complex();
            let c = attempt!(rep, total_complex(&pair, &k, ctx.mode));
            let top = c.valid_top().min(b as i32 - 1);
            rep.table(
                format!("total cohomology ({} cochains)", mode_name(ctx.mode)),
                0,
                cohomology_dims(&c.total, top),
            );
            let phi = attempt!(rep, c.phi_cover());
            let (_, psi) = attempt!(rep, c.psi_cover());
            for q in 0..=top.min(k.top() - 1) {
                rep.check(
                    format!("sections map isomorphically to the total complex in degree {q}"),
                    invertible(&phi.on_cohomology(q)),
                    String::new,
                );
                rep.check(
                    format!("Cech cochains map isomorphically to the total complex in degree {q}"),
                    invertible(&psi.on_cohomology(q)),
                    String::new,
                );
            }
            rep.absorb(attempt!(rep, cover_comparison_map(&k, &pair)).report);
            rep
        }
        Resolved::Relative {
            s,
            xp,
            v1,
            subject,
            expect,
        } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, b)).complex();
            let rs = attempt!(rep, rel_sections_cohomology(&k, xp));
            rep.table("relative cohomology of sections", 0, rs.dims.clone());
            rep.absorb(rs.report);
            if let Some(v1) = v1 {
                rep.absorb(attempt!(rep, verify_neighborhood_independence(&k, v1, xp)));
            }
            let x = s.space().all();
            let oe = attempt!(rep, open_embedding_complex(&k, xp));
            let cech = attempt!(rep, two_set_relative(&k, x, xp));
            let (f, l, phi) = attempt!(rep, canonical_open_embedding(&k, xp));
            let cone = attempt!(rep, sheaf_co_mapping_cone(&f, &k, &l, &phi));
            rep.check(
                "the two-set Cech complex equals the open-embedding cone",
                cech.total == oe.complex,
                String::new,
            );
            rep.check(
                "global sections of the sheaf co-mapping cone equal the open-embedding cone",
                cone.global == oe.complex,
                String::new,
            );
            rep.check(
                "global sections of the sheaf co-mapping cone equal the co-mapping cone of the global map",
                cone.identical(),
                String::new,
            );
            if let Some(e) = expect {
                rep.expect_dims("relative cohomology of sections", &e, &rs.dims);
            }
            rep
        }
        Resolved::Excision { s, closed, open, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, b)).complex();
            rep.absorb(attempt!(rep, excision(&k, closed, open)));
            rep
        }
        Resolved::Triple { s, xp, xpp, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, b)).complex();
            let t = attempt!(rep, triple_les(&k, xp, xpp));
            let failures = t.sequence.failures();
            rep.check("sequence of the triple exact", failures.is_empty(), || failures.join("; "));
            rep.absorb(t.report);
            rep
        }
        Resolved::Leray { pair, s, expect, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            match (verify_leray(&pair, &s, b), expect) {
                (Ok(r), Some(CoverExpectation::Bad)) => {
                    rep.absorb(r);
                    rep.check("the covering is reported as not good", false, || {
                        "the vanishing hypothesis held".into()
                    });
                }
                (Ok(r), _) => rep.absorb(r),
                (Err(CechError::HypothesisFailed(why)), Some(CoverExpectation::Bad)) => {
                    rep.check("the covering is reported as not good", true, String::new);
                    rep.verdicts.last_mut().expect("just pushed").detail = why;
                }
                (Err(e), _) => failed(&mut rep, e),
            }
            rep
        }
        Resolved::Pou { pair, pou, s, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let (g, _) = c0(&s);
            let c = attempt!(rep, cech_complex(&pair, &g, CochainMode::Alternating));
            for q in 1..=c.total.hi() {
                let z = kernel(&c.total.d(q));
                let mut bad = None;
                for col in 0..z.dim() {
                    let sigma = z.basis().column(col);
                    if let Err(e) = pou_coboundary(&c, &pou, q, &sigma) {
                        bad = Some(format!("cocycle {col}: {e}"));
                        break;
                    }
                }
                rep.check(
                    format!("partition-of-unity coboundary of every cocycle in degree {q}"),
                    bad.is_none(),
                    || bad.clone().unwrap_or_default(),
                );
            }
            if pair.len() == 2 {
                let k = attempt!(rep, godement_resolve(&s, b)).complex();
                let c = attempt!(rep, total_complex(&pair, &k, CochainMode::Alternating));
                let phi = attempt!(rep, c.phi_cover());
                for q in 0..k.top() {
                    let inv = attempt!(rep, two_set_inverse_on_cohomology(&c, &pou, q));
                    let n = c.total.cohomology(q).dim;
                    let round = &phi.on_cohomology(q) * &inv;
                    rep.check(
                        format!("glued cocycle followed by the cover map is the identity on H^{q}"),
                        round == Matrix::identity(n),
                        || format!("{round}"),
                    );
                    let bd = c.total.cohomology(q).coboundaries;
                    let mut bad = None;
                    for col in 0..bd.dim() {
                        if let Err(e) = coboundary_simplify(&c, &pou, q, &bd.basis().column(col)) {
                            bad = Some(format!("coboundary {col}: {e}"));
                            break;
                        }
                    }
                    rep.check(
                        format!("coboundaries in degree {q} have the two-set normal form"),
                        bad.is_none(),
                        || bad.clone().unwrap_or_default(),
                    );
                }
            }
            rep
        }
        Resolved::Homotopy { pair, s, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let b = ctx.bound(s.space().height());
            rep.bound = Some(b);
            let k = attempt!(rep, godement_resolve(&s, b)).complex();
            for mode in [CochainMode::Alternating, CochainMode::Full] {
                let c = attempt!(rep, total_complex(&pair, &k, mode));
                for q in 0..=c.valid_top().min(k.top() - 1) {
                    let z = c.total.cohomology(q).cocycles;
                    let mut bad = None;
                    for col in 0..z.dim() {
                        if let Err(e) = full_set_homotopy(&c, &z.basis().column(col), q) {
                            bad = Some(format!("cocycle {col}: {e}"));
                            break;
                        }
                    }
                    rep.check(
                        format!(
                            "every cocycle is homotopic to its restriction from the whole space in degree {q} ({} cochains)",
                            mode_name(mode)
                        ),
                        bad.is_none(),
                        || bad.clone().unwrap_or_default(),
                    );
                }
            }
            rep
        }
        Resolved::CoMappingCone { phi, subject, expect } => {
            let mut rep = OperationReport::new(index, op, subject);
            let cone = co_mapping_cone(&phi);
            let m = &cone.m;
            let dims: Vec<usize> = m.degrees().map(|q| m.cohomology(q).dim).collect();
            rep.table("cohomology of the co-mapping cone", m.lo(), dims.clone());
            let les = attempt!(rep, les_from_ses(&cone.beta_star, &cone.alpha_star));
            let failures = les.sequence.failures();
            rep.check("sequence of the co-mapping cone exact", failures.is_empty(), || failures.join("; "));
            for q in les.lo..=les.hi {
                let d = connecting_map(&cone.beta_star, &cone.alpha_star, q);
                rep.check(
                    format!("connecting map equals the map on cohomology in degree {q}"),
                    d == phi.on_cohomology(q),
                    || format!("{d}"),
                );
                let h = attempt!(rep, cotriangle_h(&cone.beta_star, &cone.alpha_star, q));
                rep.check(
                    format!("cotriangle map is minus the connecting map in degree {q}"),
                    h == -&les.delta[&q],
                    || format!("{h}"),
                );
            }
            rep.check("transpose duality between cones", transpose_duality_check(&phi), String::new);
            for (which, k) in [("source", &phi.source), ("target", &phi.target)] {
                let id = k.identity();
                rep.check(
                    format!("co-mapping cone of the identity of the {which} is acyclic"),
                    co_mapping_cone(&id).m.is_acyclic(),
                    String::new,
                );
                rep.check(
                    format!("mapping cone of the identity of the {which} is acyclic"),
                    mapping_cone(&id).m.is_acyclic(),
                    String::new,
                );
            }
            if let Some(e) = expect {
                rep.expect_dims("cohomology of the co-mapping cone", &e, &dims);
            }
            rep
        }
        Resolved::Cylinder { f, subject } => {
            let mut rep = OperationReport::new(index, op, subject);
            let cyl = attempt!(rep, mapping_cylinder(&f));
            rep.subject = format!("{} with {} points and {} open sets", rep.subject, cyl.z.len(), cyl.z.opens().len());
            rep.absorb(cyl.audit());
            rep
        }
        Resolved::Morphism {
            which,
            f,
            s,
            t,
            eta,
            subject,
            expect,
        } => {
            let mut rep = OperationReport::new(index, op, subject);
            let cyl: CylinderSpace = attempt!(rep, mapping_cylinder(&f));
            let b = ctx.bound(cyl.z.height());
            let zs = attempt!(rep, zstar_sheaf(&cyl, &s, &t, &eta));
            match which {
                MorphismOp::Zstar => {
                    rep.table("stalk dimensions of the cylinder sheaf (by point)", 0, zs.sheaf.dims().to_vec());
                    rep.absorb(zs.audit());
                }
                MorphismOp::Cohomology => {
                    rep.bound = Some(b);
                    let h = attempt!(rep, cohom_of_morphism(&zs, b));
                    let h1 = attempt!(rep, cohom_of_morphism(&zs, b + 1));
                    rep.table("H^q(f)", 0, h.dims.clone());
                    rep.absorb(h.report);
                    rep.check(
                        "one more resolution term changes no dimension",
                        h1.dims[..b] == h.dims[..],
                        String::new,
                    );
                    if let Some(e) = expect {
                        rep.expect_dims("H^q(f)", &e, &h.dims);
                    }
                }
                MorphismOp::CylinderCone => {
                    rep.bound = Some(b);
                    let r = attempt!(rep, MorphismResolution::godement(&f, &s, &t, &eta, b));
                    rep.absorb(attempt!(rep, verify_cylinder_cone(&cyl, &r.k, &r.l, &r.phi)));
                }
                MorphismOp::Comparison => {
                    rep.bound = Some(b);
                    let r = attempt!(rep, MorphismResolution::godement(&f, &s, &t, &eta, b));
                    rep.absorb(attempt!(rep, verify_generalized_comparison(&cyl, &r, b)));
                }
            }
            rep
        }
    }
}

fn mode_name(m: CochainMode) -> &'static str {
    match m {
        CochainMode::Alternating => "alternating",
        CochainMode::Full => "full",
    }
}
