//! The resolved contents of a theory file.

use rtk_core::approx::ApproximationStructure;
use rtk_core::convex::PointSpec;
use rtk_core::theory::default_cap;
use rtk_core::{Error, Lumping, Result, SpecMap, Specification, StateSpace, TransformationMonoid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDecl {
    /// `None` for the unnamed `[states]` section.
    pub name: Option<String>,
    pub space: StateSpace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    /// Declared source and target space names, if not the default space.
    pub source: Option<String>,
    pub target: Option<String>,
    pub map: SpecMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidSource {
    Generators(Vec<String>),
    AllFunctions,
    Permutations,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidDecl {
    pub name: String,
    pub space_name: Option<String>,
    pub space: StateSpace,
    pub source: MonoidSource,
    pub cap: Option<usize>,
    pub generators: Vec<SpecMap>,
}

impl MonoidDecl {
    /// Closes the monoid; a declared cap wins over `RTK_CAP`.
    pub fn close(&self) -> Result<TransformationMonoid> {
        let cap = self.cap.unwrap_or_else(default_cap);
        match self.source {
            MonoidSource::Generators(_) => TransformationMonoid::close(&self.space, self.generators.clone(), cap),
            MonoidSource::AllFunctions => TransformationMonoid::all_functions(&self.space, cap),
            MonoidSource::Permutations => TransformationMonoid::permutations(&self.space, cap),
        }
    }

    /// Generator names in word order, for rendering elements.
    pub fn generator_names(&self, monoid: &TransformationMonoid) -> Vec<String> {
        match &self.source {
            MonoidSource::Generators(g) => g.clone(),
            _ => (0..monoid.generators().len()).map(|i| format!("g{i}")).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LumpingSource {
    Map(String),
    /// A full partition, every block sorted by state index.
    Blocks(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LumpingDecl {
    pub name: String,
    pub space_name: Option<String>,
    pub source: LumpingSource,
    pub lumping: Lumping,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecl {
    pub members: Vec<String>,
    pub sums: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxDecl {
    pub name: String,
    pub space_name: Option<String>,
    pub labels: Vec<String>,
    pub order: Vec<(String, String)>,
    pub top: String,
    pub zero: Option<String>,
    /// `(ε, map name)` in index order.
    pub maps: Vec<(String, String)>,
    pub chains: Vec<ChainDecl>,
    pub structure: ApproximationStructure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointsDecl {
    pub name: String,
    pub points: PointSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Space(SpaceDecl),
    Map(MapDecl),
    Monoid(MonoidDecl),
    Lumping(LumpingDecl),
    Approx(ApproxDecl),
    Points(PointsDecl),
}

impl Item {
    pub fn name(&self) -> Option<&str> {
        match self {
            Item::Space(d) => d.name.as_deref(),
            Item::Map(d) => Some(&d.name),
            Item::Monoid(d) => Some(&d.name),
            Item::Lumping(d) => Some(&d.name),
            Item::Approx(d) => Some(&d.name),
            Item::Points(d) => Some(&d.name),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Item::Space(_) => "space",
            Item::Map(_) => "map",
            Item::Monoid(_) => "monoid",
            Item::Lumping(_) => "lumping",
            Item::Approx(_) => "approx",
            Item::Points(_) => "points",
        }
    }
}

/// Sections in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub items: Vec<Item>,
}

macro_rules! lookup {
    ($fn:ident, $variant:ident, $ty:ty) => {
        pub fn $fn(&self, name: &str) -> Result<&$ty> {
            match self.find(name) {
                Some(Item::$variant(d)) => Ok(d),
                Some(other) => Err(Error::UnknownReference(format!(
                    "`{name}` is a {}, not a {}",
                    other.kind(),
                    stringify!($variant).to_lowercase()
                ))),
                None => Err(Error::UnknownReference(name.to_string())),
            }
        }
    };
}

impl Model {
    pub fn find(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name() == Some(name))
    }

    /// The `[states]` space.
    pub fn default_space(&self) -> Result<&StateSpace> {
        self.items
            .iter()
            .find_map(|i| match i {
                Item::Space(SpaceDecl { name: None, space }) => Some(space),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownReference("[states]".into()))
    }

    /// A named space, or the default one for `None`.
    pub fn space(&self, name: Option<&str>) -> Result<&StateSpace> {
        match name {
            None | Some("states") => self.default_space(),
            Some(n) => Ok(&self.space_decl(n)?.space),
        }
    }

    lookup!(space_decl, Space, SpaceDecl);
    lookup!(map, Map, MapDecl);
    lookup!(monoid, Monoid, MonoidDecl);
    lookup!(lumping, Lumping, LumpingDecl);
    lookup!(approx, Approx, ApproxDecl);
    lookup!(points, Points, PointsDecl);

    /// A specification from space-separated labels.
    pub fn spec(&self, space: &StateSpace, text: &str) -> Result<Specification> {
        Specification::from_labels(space, text.split_whitespace())
    }
}
