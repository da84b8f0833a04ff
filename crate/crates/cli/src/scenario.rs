//! JSON scenario files.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::InputError;

/// A matrix as rows of rational literals `"p/q"`.
pub type MatrixRows = Vec<Vec<String>>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub bound: Option<usize>,
    pub mode: Option<Mode>,
    #[serde(default)]
    pub spaces: Vec<SpaceDecl>,
    #[serde(default)]
    pub opens: Vec<OpenDecl>,
    #[serde(default)]
    pub sheaves: Vec<SheafDecl>,
    #[serde(default)]
    pub maps: Vec<MapDecl>,
    #[serde(default)]
    pub covers: Vec<CoverDecl>,
    #[serde(default)]
    pub complexes: Vec<ComplexDecl>,
    #[serde(default)]
    pub chain_maps: Vec<ChainMapDecl>,
    pub operations: Vec<Operation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Alternating,
    Full,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Alternating => "alternating",
            Mode::Full => "full",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDecl {
    pub name: String,
    pub points: Vec<String>,
    /// Pairs `[x, y]` with `x < y`, i.e. every open set containing `x` contains `y`.
    #[serde(default)]
    pub hasse_edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenDecl {
    pub name: String,
    pub space: String,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Restriction {
    pub from: String,
    pub to: String,
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseImageDecl {
    pub map: String,
    pub sheaf: String,
}

/// Exactly one of `constant`, `stalk_dims`, `concentrated_at` or `inverse_image`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafDecl {
    pub name: String,
    pub space: Option<String>,
    pub constant: Option<usize>,
    pub stalk_dims: Option<BTreeMap<String, usize>>,
    #[serde(default)]
    pub restrictions: Vec<Restriction>,
    pub concentrated_at: Option<String>,
    pub dim: Option<usize>,
    pub inverse_image: Option<InverseImageDecl>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub mapping: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDecl {
    pub name: String,
    pub space: String,
    pub opens: Vec<SetRef>,
    #[serde(default)]
    pub sub_index: Vec<usize>,
    /// Point-to-set assignment for the discrete partition of unity.
    pub assignment: Option<BTreeMap<String, usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDecl {
    pub name: String,
    #[serde(default)]
    pub lo: i32,
    pub dims: Vec<usize>,
    /// `differentials[i]` leaves degree `lo + i`.
    #[serde(default)]
    pub differentials: Vec<MatrixRows>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    /// Either the word `"identity"` or components keyed by degree.
    pub components: ChainMapComponents,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ChainMapComponents {
    Named(String),
    ByDegree(BTreeMap<String, MatrixRows>),
}

/// A set of points: the name of a declared open, `"all"`, `"empty"`, or an
/// explicit list of point labels.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SetRef {
    Name(String),
    Points(Vec<String>),
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct MorphismArgs {
    pub map: String,
    pub sheaf: String,
    /// Sheaf on the source of the map; defaults to the inverse image of `sheaf`.
    pub target_sheaf: Option<String>,
    /// `η_x: S_x → (f_*T)_x` for every point `x` of the target of the map.
    /// Defaults to the adjunction unit.
    pub eta: Option<BTreeMap<String, MatrixRows>>,
    pub expect: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverExpectation {
    Good,
    Bad,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Operation {
    Cohomology {
        sheaf: String,
        on: Option<SetRef>,
        relative_to: Option<SetRef>,
        expect: Option<Vec<usize>>,
    },
    Hypercohomology {
        sheaf: String,
        relative_to: Option<SetRef>,
        length: Option<usize>,
        expect: Option<Vec<usize>>,
    },
    ResolutionComparison {
        sheaf: String,
        relative_to: SetRef,
        length: Option<usize>,
    },
    FlabbyCone {
        sheaf: String,
        relative_to: SetRef,
    },
    RelativeProperties {
        sheaf: String,
        x_prime: SetRef,
        x_second: SetRef,
    },
    Cech {
        cover: String,
        sheaf: String,
        expect: Option<Vec<usize>>,
    },
    Total {
        cover: String,
        sheaf: String,
        length: Option<usize>,
    },
    Relative {
        sheaf: String,
        relative_to: SetRef,
        neighborhood: Option<SetRef>,
        expect: Option<Vec<usize>>,
    },
    Excision {
        sheaf: String,
        closed: SetRef,
        open: SetRef,
    },
    Triple {
        sheaf: String,
        x_prime: SetRef,
        x_second: SetRef,
    },
    Leray {
        cover: String,
        sheaf: String,
        expect: Option<CoverExpectation>,
    },
    Pou {
        cover: String,
        sheaf: String,
    },
    Homotopy {
        cover: String,
        sheaf: String,
    },
    CoMappingCone {
        chain_map: String,
        expect: Option<Vec<usize>>,
    },
    Cylinder {
        map: String,
    },
    Zstar(MorphismArgs),
    MorphismCohomology(MorphismArgs),
    CylinderCone(MorphismArgs),
    GeneralizedComparison(MorphismArgs),
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Cohomology { .. } => "cohomology",
            Operation::Hypercohomology { .. } => "hypercohomology",
            Operation::ResolutionComparison { .. } => "resolution-comparison",
            Operation::FlabbyCone { .. } => "flabby-cone",
            Operation::RelativeProperties { .. } => "relative-properties",
            Operation::Cech { .. } => "cech",
            Operation::Total { .. } => "total",
            Operation::Relative { .. } => "relative",
            Operation::Excision { .. } => "excision",
            Operation::Triple { .. } => "triple",
            Operation::Leray { .. } => "leray",
            Operation::Pou { .. } => "pou",
            Operation::Homotopy { .. } => "homotopy",
            Operation::CoMappingCone { .. } => "co-mapping-cone",
            Operation::Cylinder { .. } => "cylinder",
            Operation::Zstar(_) => "zstar",
            Operation::MorphismCohomology(_) => "morphism-cohomology",
            Operation::CylinderCone(_) => "cylinder-cone",
            Operation::GeneralizedComparison(_) => "generalized-comparison",
        }
    }
}

pub fn parse(text: &str) -> Result<Scenario, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
