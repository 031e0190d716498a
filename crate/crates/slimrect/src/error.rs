use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not a planar diagram: {0}")]
    NotPlanar(String),
    #[error("downward or slight-slope cover edge [{0}, {1}]")]
    DownwardEdge(String, String),
    #[error("duplicate vertex label {0}")]
    DuplicateLabel(String),
    #[error("cover [{0}, {1}] is not a covering pair")]
    RedundantCover(String, String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("unknown edge [{0}, {1}]")]
    UnknownEdge(String, String),
    #[error("diagram is not slim rectangular: {0}")]
    NotSr(String),
    #[error("{0} and {1} are not comparable")]
    NotComparable(String, String),
    #[error("not an interval")]
    NotAnInterval,
    #[error("lamp {0} is a boundary lamp")]
    BoundaryLamp(String),
    #[error("no 4-cell with peak {0}")]
    CellNotFound(String),
    #[error("4-cell with peak {0} is not rectangular")]
    NotRectangular(String),
    #[error("4-cell with peak {0} is not Enl-distributive: {1}")]
    NotDistributive(String, String),
    #[error("no lamp with peak {0}")]
    LampNotFound(String),
    #[error("k must be 1 when thrusting atop a boundary lamp")]
    BadK,
    #[error("grid dimensions must be at least 1")]
    BadDimensions,
    #[error("not a congruence: {0}")]
    NotACongruence(String),
    #[error("edge [{0}, {1}] is not a neon tube")]
    NotANeonTube(String, String),
    #[error("not a distributive lattice: {0}")]
    NotDistributiveLattice(String),
    #[error("label sets clash on {0}")]
    LabelClash(String),
    #[error("element {0} is not in the poset")]
    JNotInP(String),
    #[error("lamp {0} must be internal")]
    JNotInternal(String),
    #[error("construction history required but not available")]
    NoRecipe,
    #[error("could not place a new foot after {0} refinements")]
    PlacementFailure(usize),
    #[error("lamp/congruence isomorphism check failed: {0}")]
    IsoFailure(String),
    #[error("recipe step {index}: {source}")]
    RecipeStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn at_step(self, index: usize) -> Error {
        Error::RecipeStep {
            index,
            source: Box::new(self),
        }
    }
}
