//! Name resolution: every declaration of a scenario built through the checked
//! constructors of the core library.

use std::collections::BTreeMap;
use std::sync::Arc;

use relcoh::cech::{CoveringPair, DiscretePartitionOfUnity};
use relcoh::finspace::{inverse_image, ContinuousMap, FinSpace, PointSet, Sheaf, SpaceError};
use relcoh::homalg::{ChainMap, Complex};
use relcoh::ratlin::{parse_scalar, Matrix};

use crate::error::InputError;
use crate::scenario::{ChainMapComponents, MatrixRows, Scenario, SetRef, SheafDecl};

pub struct Cover {
    pub pair: CoveringPair,
    pub pou: DiscretePartitionOfUnity,
}

#[derive(Default)]
pub struct Universe {
    pub spaces: BTreeMap<String, Arc<FinSpace>>,
    pub opens: BTreeMap<String, (Arc<FinSpace>, PointSet)>,
    pub sheaves: BTreeMap<String, Sheaf>,
    pub maps: BTreeMap<String, ContinuousMap>,
    pub covers: BTreeMap<String, Cover>,
    pub complexes: BTreeMap<String, Complex>,
    pub chain_maps: BTreeMap<String, ChainMap>,
}

pub fn space_error(e: SpaceError) -> InputError {
    let invariant = match &e {
        SpaceError::TooLarge(_) => "at most 64 points",
        SpaceError::UnknownPoint(_) => "names resolve",
        SpaceError::DuplicateLabel(_) => "unique point labels",
        SpaceError::NotAntisymmetric(_) => "antisymmetry of the specialization order",
        SpaceError::NotOpen(_) => "open sets are up-sets",
        SpaceError::Containment(_, _) => "containment of opens",
        SpaceError::Functoriality(_, _) => "functoriality",
        SpaceError::MissingRestriction(_, _) => "a restriction on every covering pair",
        SpaceError::Shape(_) => "matrix shapes",
        SpaceError::NotMorphism(_, _) => "compatibility with restrictions",
        SpaceError::NotContinuous(_, _) => "continuity",
        SpaceError::NotBasis(_) => "basis of a topology",
        SpaceError::DifferentSpaces => "same underlying space",
        SpaceError::Complex(_) => "d∘d = 0",
    };
    InputError::validation(invariant, e)
}

pub fn parse_matrix(rows: &MatrixRows, shape: (usize, usize), what: &str) -> Result<Matrix, InputError> {
    let bad_shape = || InputError::validation("matrix shapes", format!("{what} must be {}×{}", shape.0, shape.1));
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(bad_shape());
    }
    let parsed = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_scalar(s).map_err(|e| InputError::validation("rational literals", e)))
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if shape.0 == 0 {
        return Ok(Matrix::zeros(0, shape.1));
    }
    Matrix::from_rows(parsed).map_err(|_| bad_shape())
}

fn insert<T>(map: &mut BTreeMap<String, T>, kind: &'static str, name: &str, value: T) -> Result<(), InputError> {
    if map.insert(name.to_string(), value).is_some() {
        return Err(InputError::Duplicate {
            kind,
            name: name.to_string(),
        });
    }
    Ok(())
}

fn get<'a, T>(map: &'a BTreeMap<String, T>, kind: &'static str, name: &str) -> Result<&'a T, InputError> {
    map.get(name).ok_or_else(|| InputError::UnknownName {
        kind,
        name: name.to_string(),
    })
}

pub fn point(space: &FinSpace, label: &str) -> Result<usize, InputError> {
    space.index_of(label).map_err(|_| InputError::UnknownName {
        kind: "point",
        name: label.to_string(),
    })
}

fn points(space: &FinSpace, labels: &[String]) -> Result<PointSet, InputError> {
    labels
        .iter()
        .map(|l| point(space, l))
        .collect::<Result<Vec<_>, _>>()
        .map(PointSet::from_points)
}

impl Universe {
    pub fn build(sc: &Scenario) -> Result<Self, InputError> {
        let mut u = Universe::default();
        for d in &sc.spaces {
            let index = |l: &str| {
                d.points.iter().position(|p| p == l).ok_or_else(|| InputError::UnknownName {
                    kind: "point",
                    name: l.to_string(),
                })
            };
            let edges = d
                .hasse_edges
                .iter()
                .map(|(a, b)| Ok((index(a)?, index(b)?)))
                .collect::<Result<Vec<_>, InputError>>()?;
            let space = FinSpace::from_hasse(d.points.clone(), &edges).map_err(space_error)?;
            insert(&mut u.spaces, "space", &d.name, Arc::new(space))?;
        }
        for d in &sc.opens {
            let space = get(&u.spaces, "space", &d.space)?.clone();
            let set = points(&space, &d.points)?;
            space.check_open(set).map_err(space_error)?;
            insert(&mut u.opens, "open", &d.name, (space, set))?;
        }
        for d in &sc.maps {
            let source = get(&u.spaces, "space", &d.source)?.clone();
            let target = get(&u.spaces, "space", &d.target)?.clone();
            let map = source
                .labels()
                .iter()
                .map(|l| {
                    let image = d
                        .mapping
                        .get(l)
                        .ok_or_else(|| InputError::validation("a total map", format!("{l:?} has no image")))?;
                    point(&target, image)
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(extra) = d.mapping.keys().find(|k| source.index_of(k).is_err()) {
                return Err(InputError::UnknownName {
                    kind: "point",
                    name: extra.clone(),
                });
            }
            let f = ContinuousMap::new(source, target, map).map_err(space_error)?;
            insert(&mut u.maps, "map", &d.name, f)?;
        }
        for d in &sc.sheaves {
            let s = u.sheaf_from(d)?;
            insert(&mut u.sheaves, "sheaf", &d.name, s)?;
        }
        for d in &sc.covers {
            let space = get(&u.spaces, "space", &d.space)?.clone();
            let opens = d.opens.iter().map(|r| u.set(&space, r)).collect::<Result<Vec<_>, _>>()?;
            let pair =
                CoveringPair::new(space.clone(), opens, d.sub_index.clone()).map_err(|e| InputError::validation("covering pair", e))?;
            let pou = match &d.assignment {
                None => DiscretePartitionOfUnity::smallest_index(&pair),
                Some(a) => {
                    let mut assign = DiscretePartitionOfUnity::smallest_index(&pair).assign;
                    for (l, &i) in a {
                        assign[point(&space, l)?] = i;
                    }
                    DiscretePartitionOfUnity::new(&pair, assign).map_err(|e| InputError::validation("point assignment", e))?
                }
            };
            insert(&mut u.covers, "cover", &d.name, Cover { pair, pou })?;
        }
        for d in &sc.complexes {
            let n = d.dims.len();
            if d.differentials.len() + 1 != n && d.differentials.len() != n {
                return Err(InputError::validation(
                    "matrix shapes",
                    format!("complex {:?} needs {} differentials", d.name, n.saturating_sub(1)),
                ));
            }
            let diffs = d
                .differentials
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    parse_matrix(
                        m,
                        (d.dims.get(i + 1).copied().unwrap_or(0), d.dims[i]),
                        &format!("d^{}", d.lo + i as i32),
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            let k = Complex::new(d.lo, d.dims.clone(), diffs).map_err(|e| InputError::validation("d∘d = 0", e))?;
            insert(&mut u.complexes, "complex", &d.name, k)?;
        }
        for d in &sc.chain_maps {
            let source = get(&u.complexes, "complex", &d.source)?.clone();
            let target = get(&u.complexes, "complex", &d.target)?.clone();
            let m = match &d.components {
                ChainMapComponents::Named(w) if w == "identity" => {
                    if source != target {
                        return Err(InputError::validation("identity between equal complexes", &d.name));
                    }
                    source.identity()
                }
                ChainMapComponents::Named(w) => return Err(InputError::validation("chain map components", format!("unknown form {w:?}"))),
                ChainMapComponents::ByDegree(c) => {
                    let comps = c
                        .iter()
                        .map(|(q, m)| {
                            let q: i32 = q
                                .parse()
                                .map_err(|_| InputError::validation("chain map components", format!("degree {q:?} is not an integer")))?;
                            Ok((q, parse_matrix(m, (target.dim(q), source.dim(q)), &format!("component {q}"))?))
                        })
                        .collect::<Result<BTreeMap<_, _>, InputError>>()?;
                    ChainMap::new(source.clone(), target.clone(), |q| {
                        comps
                            .get(&q)
                            .cloned()
                            .unwrap_or_else(|| Matrix::zeros(target.dim(q), source.dim(q)))
                    })
                    .map_err(|e| InputError::validation("commutation with differentials", e))?
                }
            };
            insert(&mut u.chain_maps, "chain map", &d.name, m)?;
        }
        Ok(u)
    }

    fn sheaf_from(&self, d: &SheafDecl) -> Result<Sheaf, InputError> {
        let kinds = [
            d.constant.is_some(),
            d.stalk_dims.is_some(),
            d.concentrated_at.is_some(),
            d.inverse_image.is_some(),
        ];
        if kinds.iter().filter(|&&k| k).count() != 1 {
            return Err(InputError::validation(
                "one sheaf description",
                format!(
                    "sheaf {:?} needs exactly one of constant, stalk_dims, concentrated_at, inverse_image",
                    d.name
                ),
            ));
        }
        if let Some(ii) = &d.inverse_image {
            let f = self.map(&ii.map)?;
            let s = self.sheaf(&ii.sheaf)?;
            if s.space() != &f.target {
                return Err(space_error(SpaceError::DifferentSpaces));
            }
            return Ok(inverse_image(f, s));
        }
        let space_name = d
            .space
            .as_ref()
            .ok_or_else(|| InputError::validation("names resolve", format!("sheaf {:?} needs a space", d.name)))?;
        let space = get(&self.spaces, "space", space_name)?.clone();
        if let Some(n) = d.constant {
            return Ok(Sheaf::constant(space, n));
        }
        if let Some(x) = &d.concentrated_at {
            let x = point(&space, x)?;
            return Ok(Sheaf::concentrated_at(space, x, d.dim.unwrap_or(1)));
        }
        let stalks = d.stalk_dims.as_ref().expect("one kind is present");
        let mut dims = vec![0; space.len()];
        for (l, &n) in stalks {
            dims[point(&space, l)?] = n;
        }
        let mut res = BTreeMap::new();
        for r in &d.restrictions {
            let (x, y) = (point(&space, &r.from)?, point(&space, &r.to)?);
            if !space.hasse().contains(&(x, y)) {
                return Err(InputError::validation(
                    "restrictions along covering pairs",
                    format!("{:?} → {:?} is not a Hasse edge of {space_name:?}", r.from, r.to),
                ));
            }
            let m = parse_matrix(&r.matrix, (dims[y], dims[x]), &format!("restriction {} → {}", r.from, r.to))?;
            res.insert((x, y), m);
        }
        // Zero-dimensional edges may be left out.
        for (x, y) in space.hasse() {
            if dims[x] == 0 || dims[y] == 0 {
                res.entry((x, y)).or_insert_with(|| Matrix::zeros(dims[y], dims[x]));
            }
        }
        Sheaf::new(space, dims, &res).map_err(space_error)
    }

    pub fn sheaf(&self, name: &str) -> Result<&Sheaf, InputError> {
        get(&self.sheaves, "sheaf", name)
    }

    pub fn map(&self, name: &str) -> Result<&ContinuousMap, InputError> {
        get(&self.maps, "map", name)
    }

    pub fn cover(&self, name: &str) -> Result<&Cover, InputError> {
        get(&self.covers, "cover", name)
    }

    pub fn chain_map(&self, name: &str) -> Result<&ChainMap, InputError> {
        get(&self.chain_maps, "chain map", name)
    }

    pub fn set(&self, space: &Arc<FinSpace>, r: &SetRef) -> Result<PointSet, InputError> {
        match r {
            SetRef::Name(n) if n == "all" => Ok(space.all()),
            SetRef::Name(n) if n == "empty" => Ok(PointSet::EMPTY),
            SetRef::Name(n) => {
                let (sp, set) = get(&self.opens, "open", n)?;
                if **sp != **space {
                    return Err(InputError::validation(
                        "same underlying space",
                        format!("open {n:?} lives on another space"),
                    ));
                }
                Ok(*set)
            }
            SetRef::Points(p) => points(space, p),
        }
    }

    pub fn open(&self, space: &Arc<FinSpace>, r: &SetRef) -> Result<PointSet, InputError> {
        let s = self.set(space, r)?;
        space.check_open(s).map_err(space_error)?;
        Ok(s)
    }

    pub fn closed(&self, space: &Arc<FinSpace>, r: &SetRef) -> Result<PointSet, InputError> {
        let s = self.set(space, r)?;
        if !space.is_closed(s) {
            return Err(InputError::validation(
                "closed sets are down-sets",
                format!("{} is not closed", space.describe(s)),
            ));
        }
        Ok(s)
    }

    pub fn describe(&self, space: &FinSpace, s: PointSet) -> String {
        if s == space.all() {
            return "all".into();
        }
        if s.is_empty() {
            return "empty".into();
        }
        self.opens
            .iter()
            .find(|(_, (sp, set))| **sp == *space && *set == s)
            .map(|(n, _)| n.clone())
            .unwrap_or_else(|| space.describe(s))
    }
}
